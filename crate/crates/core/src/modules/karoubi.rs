use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{CoeffMatrix, ControlledMorphism, Decoration, GeometricModule, Letter, ModuleError, Support};
use crate::metric::Dist;

/// Which pair of subcategories the factorization is for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorMode {
    /// Small side has bounded levels; cut by level.
    LevelBounded,
    /// Small side lives on a compact region; cut by a neighbourhood of it.
    CompactSupport,
}

/// A direct summand `S' ⊆ S` with `φ = ι ∘ φ'` and `ψ = ψ' ∘ pr`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub mode: FactorMode,
    /// Level cut `L + α` or spatial radius `α`, depending on the mode.
    pub cut: Dist,
    /// Indices of `S` kept in `S'`, increasing.
    pub kept: Vec<usize>,
    pub summand: Arc<GeometricModule>,
    pub inclusion: ControlledMorphism,
    pub projection: ControlledMorphism,
    /// `φ' = pr ∘ φ`.
    pub into_summand: Option<ControlledMorphism>,
    /// `ψ' = ψ ∘ ι`.
    pub out_of_summand: Option<ControlledMorphism>,
    /// Both triangles checked entrywise.
    pub triangles_commute: bool,
}

/// Factors `into: T → S` and/or `out_of: S → T` through a summand of `S`
/// lying in the subcategory of `T`. At least one morphism must be given;
/// when both are, they share the same `S` and `T`.
///
/// Level mode cuts at `L + α_N`, where `L` bounds the levels of `T` by its
/// decoration. Compact mode keeps the closed `α_X`-neighbourhood of the
/// region `T` is declared compact on.
pub fn karoubi_factorize(
    into: Option<&ControlledMorphism>,
    out_of: Option<&ControlledMorphism>,
    mode: FactorMode,
) -> Result<Factorization, ModuleError> {
    let (small, big) = match (into, out_of) {
        (Some(phi), Some(psi)) => {
            if phi.target() != psi.source() || phi.source() != psi.target() {
                return Err(ModuleError::NotComposable);
            }
            (phi.source().clone(), phi.target().clone())
        }
        (Some(phi), None) => (phi.source().clone(), phi.target().clone()),
        (None, Some(psi)) => (psi.target().clone(), psi.source().clone()),
        (None, None) => return Err(ModuleError::Precondition("no morphism to factor".into())),
    };
    let props: Vec<_> = into.iter().chain(out_of.iter()).map(|m| m.propagation()).collect();

    let (kept, decoration, cut) = match mode {
        FactorMode::LevelBounded => {
            let bound = small
                .decoration()
                .letter
                .max_level()
                .ok_or_else(|| ModuleError::Precondition("small side has no level bound".into()))?;
            let alpha = props.iter().map(|p| p.levels).max().unwrap_or(0);
            let cut = bound + alpha;
            let kept: Vec<usize> = (0..big.len()).filter(|&s| big.level(s) <= cut).collect();
            let decoration = Decoration {
                letter: Letter::T { bound: cut },
                ..big.decoration().clone()
            };
            (kept, decoration, Dist::from_integer(cut as i64))
        }
        FactorMode::CompactSupport => {
            let Support::Compact { region } = &small.decoration().support else {
                return Err(ModuleError::Precondition("small side has no compact region".into()));
            };
            let alpha = props.iter().map(|p| p.space).max().unwrap_or_default();
            let space = big.space();
            let mut near = vec![false; space.len()];
            for &k in region {
                for x in space.ball(k as usize, alpha) {
                    near[x] = true;
                }
            }
            let kept: Vec<usize> = (0..big.len()).filter(|&s| near[big.point(s)]).collect();
            let neighbourhood = (0..space.len() as u32).filter(|&x| near[x as usize]).collect();
            let decoration = Decoration {
                support: Support::Compact { region: neighbourhood },
                ..big.decoration().clone()
            };
            (kept, decoration, alpha)
        }
    };

    let (summand, kept) = big.restrict(&kept, decoration)?;
    let summand = Arc::new(summand);
    let (inclusion, projection) = summand_maps(&summand, &big, &kept);
    let into_summand = into.map(|phi| projection.compose(phi)).transpose()?;
    let out_of_summand = out_of.map(|psi| psi.compose(&inclusion)).transpose()?;

    let mut triangles_commute = true;
    if let (Some(phi), Some(phi1)) = (into, &into_summand) {
        triangles_commute &= inclusion.compose(phi1)? == *phi;
    }
    if let (Some(psi), Some(psi1)) = (out_of, &out_of_summand) {
        triangles_commute &= psi1.compose(&projection)? == *psi;
    }
    Ok(Factorization {
        mode,
        cut,
        kept,
        summand,
        inclusion,
        projection,
        into_summand,
        out_of_summand,
        triangles_commute,
    })
}

/// Inclusion `S' → S` and projection `S → S'` for `kept[i]` = image of `i`.
pub(crate) fn summand_maps(
    summand: &Arc<GeometricModule>,
    whole: &Arc<GeometricModule>,
    kept: &[usize],
) -> (ControlledMorphism, ControlledMorphism) {
    let mut inc = BTreeMap::new();
    let mut pr = BTreeMap::new();
    for (i, &s) in kept.iter().enumerate() {
        let r = whole.rank(s);
        if r > 0 {
            inc.insert((i as u32, s as u32), CoeffMatrix::identity(r));
            pr.insert((s as u32, i as u32), CoeffMatrix::identity(r));
        }
    }
    (
        ControlledMorphism::assemble(summand.clone(), whole.clone(), inc),
        ControlledMorphism::assemble(whole.clone(), summand.clone(), pr),
    )
}
