//! Metric covers: radius certification, translativity of deck actions,
//! and faithfulness profiles of quotient towers.

use std::sync::Arc;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::groups::{EnumeratedGroup, GroupAction, GroupError, KernelGirth, QuotientTower};
use crate::metric::{Dist, FiniteMetricSpace, MetricError};

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("cover map is not surjective: base point {missing} has no preimage")]
    NotSurjective { missing: usize },
    #[error("cover map has {found} entries for {expected} total points")]
    LengthMismatch { expected: usize, found: usize },
    #[error("map sends point {0} outside the base")]
    OutOfRange(usize),
    #[error("deck transformation {g} moves point {x} across fibers")]
    DeckNotFiberPreserving { g: usize, x: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Restriction of an infinite total space to a finite ball around a root.
///
/// A center `x` is admissible at radius `R` when
/// `depth[x] + 2 * R * scale <= limit`: then every distance between two
/// points of `B_R(x)` is realized inside the truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub depth: Vec<u32>,
    pub limit: u32,
    pub scale: u32,
}

impl Truncation {
    pub fn admits(&self, x: usize, radius: Dist) -> bool {
        let need = Rational64::from_integer(self.depth[x] as i64) + radius * 2 * self.scale as i64;
        need <= Rational64::from_integer(self.limit as i64)
    }
}

/// Non-identity deck transformations, each as a map on total points.
/// Entries are `None` where the image leaves a truncated total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deck {
    moves: Vec<Vec<Option<u32>>>,
}

impl Deck {
    pub fn from_action(action: &GroupAction) -> Self {
        let moves = (1..action.group().order())
            .map(|g| (0..action.degree()).map(|x| Some(action.act(g, x) as u32)).collect())
            .collect();
        Self { moves }
    }

    pub fn from_partial(moves: Vec<Vec<Option<u32>>>) -> Self {
        Self { moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn apply(&self, g: usize, x: usize) -> Option<usize> {
        self.moves[g][x].map(|y| y as usize)
    }
}

/// A surjection between finite metric spaces.
#[derive(Clone, Debug)]
pub struct MetricCoverMap {
    total: Arc<FiniteMetricSpace>,
    base: Arc<FiniteMetricSpace>,
    map: Vec<usize>,
    deck: Option<Deck>,
    truncation: Option<Truncation>,
    certified_radius: Option<Dist>,
}

/// Why a radius fails, located at a center `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoverWitness {
    /// Two points of `B_R(x)` share an image.
    NotInjective { x: usize, u: usize, v: usize },
    /// Two points of `B_R(x)` whose distance is not preserved.
    Distorted {
        x: usize,
        u: usize,
        v: usize,
        total: Dist,
        base: Dist,
    },
    /// A point of `B_R(p(x))` with no preimage in `B_R(x)`.
    Missing { x: usize, target: usize },
}

impl MetricCoverMap {
    pub fn new(total: Arc<FiniteMetricSpace>, base: Arc<FiniteMetricSpace>, map: Vec<usize>) -> Result<Self, CoverError> {
        let cover = Self::unchecked(total, base, map)?;
        let mut hit = vec![false; cover.base.len()];
        for &y in &cover.map {
            hit[y] = true;
        }
        if let Some(missing) = hit.iter().position(|&h| !h) {
            return Err(CoverError::NotSurjective { missing });
        }
        Ok(cover)
    }

    fn unchecked(total: Arc<FiniteMetricSpace>, base: Arc<FiniteMetricSpace>, map: Vec<usize>) -> Result<Self, CoverError> {
        if map.len() != total.len() {
            return Err(CoverError::LengthMismatch {
                expected: total.len(),
                found: map.len(),
            });
        }
        if let Some(x) = map.iter().position(|&y| y >= base.len()) {
            return Err(CoverError::OutOfRange(x));
        }
        Ok(Self {
            total,
            base,
            map,
            deck: None,
            truncation: None,
            certified_radius: None,
        })
    }

    pub fn identity(space: Arc<FiniteMetricSpace>) -> Self {
        let map = (0..space.len()).collect();
        Self::new(space.clone(), space, map).expect("identity is onto")
    }

    /// Attaches deck transformations, checking that they preserve fibers.
    pub fn with_deck(mut self, deck: Deck) -> Result<Self, CoverError> {
        for g in 0..deck.len() {
            for x in 0..self.total.len() {
                if let Some(y) = deck.apply(g, x) {
                    if self.map[y] != self.map[x] {
                        return Err(CoverError::DeckNotFiberPreserving { g, x });
                    }
                }
            }
        }
        self.deck = Some(deck);
        Ok(self)
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = Some(truncation);
        self
    }

    /// The cycle cover `C_{k m} -> C_m`, `i -> i mod m`, with deck group
    /// `Z/k` rotating by multiples of `m`.
    pub fn cycle_cover(m: usize, k: usize) -> Self {
        let total = FiniteMetricSpace::cycle(m * k);
        let base = FiniteMetricSpace::cycle(m);
        let map = (0..m * k).map(|i| i % m).collect();
        let group = Arc::new(crate::groups::FiniteGroup::cyclic(k));
        let action = GroupAction::new(group, m * k, |g, x| (x + g * m) % (m * k)).expect("rotations act");
        Self::new(Arc::new(total), Arc::new(base), map)
            .and_then(|c| c.with_deck(Deck::from_action(&action)))
            .expect("cycle covers are well formed")
    }

    /// Stage `stage` of a tower as a cover `B_T(1) -> G/H_n`, where the
    /// total is the word-metric ball of radius `depth` in the base group.
    ///
    /// The base is enumerated from the images of the generators, so the
    /// untruncated map is onto; the truncated map need not be, and only
    /// admissible centers are examined. Deck transformations are left
    /// multiplications by kernel elements of the ball.
    pub fn tower_stage(tower: &QuotientTower, stage: usize, depth: u32, cap: usize) -> Result<Self, CoverError> {
        let quotient = tower.enumerate_quotient(stage, cap)?;
        let ball = EnumeratedGroup::ball(tower.base().clone(), depth, cap)?;
        let base = FiniteMetricSpace::cayley_graph(&quotient)?;
        let total = FiniteMetricSpace::ball_graph(&ball);
        let map = ball
            .elements()
            .iter()
            .map(|g| {
                let image = tower.project(stage, g)?;
                quotient.index_of(&image).ok_or_else(|| GroupError::NotClosed(format!("{image:?}")))
            })
            .collect::<Result<Vec<_>, GroupError>>()?;
        let group = tower.base();
        let mut moves = Vec::new();
        for (h_idx, h) in ball.elements().iter().enumerate().skip(1) {
            if map[h_idx] != 0 {
                continue;
            }
            let mv = ball
                .elements()
                .iter()
                .map(|x| {
                    let y = group.multiply(h, x)?;
                    Ok(ball.index_of(&y).map(|i| i as u32))
                })
                .collect::<Result<Vec<_>, GroupError>>()?;
            moves.push(mv);
        }
        let truncation = Truncation {
            depth: (0..ball.order()).map(|i| ball.depth(i)).collect(),
            limit: depth,
            scale: 1,
        };
        Self::unchecked(Arc::new(total), Arc::new(base), map)?
            .with_deck(Deck::from_partial(moves))
            .map(|c| c.with_truncation(truncation))
    }

    /// Stage `n` of the residue tower of `Z`, with a truncation wide
    /// enough to test every radius up to one past the base diameter.
    pub fn integers_mod(n: u64, cap: usize) -> Result<Self, CoverError> {
        let tower = QuotientTower::integers(&[n])?;
        Self::tower_stage(&tower, 0, default_depth(n), cap)
    }

    pub fn total(&self) -> &Arc<FiniteMetricSpace> {
        &self.total
    }

    pub fn base(&self) -> &Arc<FiniteMetricSpace> {
        &self.base
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn deck(&self) -> Option<&Deck> {
        self.deck.as_ref()
    }

    pub fn truncation(&self) -> Option<&Truncation> {
        self.truncation.as_ref()
    }

    pub fn certified_radius(&self) -> Option<Dist> {
        self.certified_radius
    }

    /// Records the largest verified radius.
    pub fn certify(mut self) -> Self {
        self.certified_radius = Some(max_cover_radius(&self));
        self
    }

    fn admissible(&self, x: usize, radius: Dist) -> bool {
        self.truncation.as_ref().is_none_or(|t| t.admits(x, radius))
    }

    /// Centers examined at the given radius.
    pub fn centers(&self, radius: Dist) -> Vec<usize> {
        (0..self.total.len()).filter(|&x| self.admissible(x, radius)).collect()
    }

    /// Same map on new spaces over the same point sets, keeping the deck
    /// and replacing the truncation.
    pub(crate) fn respaced(&self, total: Arc<FiniteMetricSpace>, base: Arc<FiniteMetricSpace>, truncation: Option<Truncation>) -> Self {
        Self {
            total,
            base,
            map: self.map.clone(),
            deck: self.deck.clone(),
            truncation,
            certified_radius: None,
        }
    }
}

fn default_depth(n: u64) -> u32 {
    let diam = (n / 2) as u32;
    3 * diam + 3
}

/// Checks that `p` restricted to every closed ball `B_R(x)` is an isometry
/// onto `B_R(p(x))`. Returns the witness at the smallest failing center.
pub fn verify_cover_radius(p: &MetricCoverMap, radius: Dist) -> Result<(), CoverWitness> {
    let centers = p.centers(radius);
    let failure = centers.par_iter().map(|&x| check_center(p, x, radius)).find_first(|r| r.is_err());
    match failure {
        Some(Err(w)) => Err(w),
        _ => Ok(()),
    }
}

fn check_center(p: &MetricCoverMap, x: usize, radius: Dist) -> Result<(), CoverWitness> {
    let ball = p.total.ball(x, radius);
    for (i, &u) in ball.iter().enumerate() {
        for &v in &ball[i + 1..] {
            let (pu, pv) = (p.map[u], p.map[v]);
            if pu == pv {
                return Err(CoverWitness::NotInjective { x, u, v });
            }
            let (dt, db) = (p.total.dist(u, v), p.base.dist(pu, pv));
            if dt != db {
                return Err(CoverWitness::Distorted {
                    x,
                    u,
                    v,
                    total: dt,
                    base: db,
                });
            }
        }
    }
    let mut image: Vec<usize> = ball.iter().map(|&u| p.map[u]).collect();
    image.sort_unstable();
    for target in p.base.ball(p.map[x], radius) {
        if image.binary_search(&target).is_err() {
            return Err(CoverWitness::Missing { x, target });
        }
    }
    Ok(())
}

/// Radii worth testing: realized total distances up to one past the base
/// diameter, restricted to those with an admissible center.
pub fn candidate_radii(p: &MetricCoverMap) -> Vec<Dist> {
    let bound = p.base.diameter() + 1;
    p.total
        .realized_distances()
        .into_iter()
        .filter(|&r| r <= bound && (0..p.total.len()).any(|x| p.admissible(x, r)))
        .collect()
}

/// Largest candidate radius that verifies, searched in descending order;
/// zero if none does.
pub fn max_cover_radius(p: &MetricCoverMap) -> Dist {
    candidate_radii(p)
        .into_iter()
        .rev()
        .find(|&r| verify_cover_radius(p, r).is_ok())
        .unwrap_or_default()
}

/// A deck element moving a point less than the radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationWitness {
    pub g: usize,
    pub x: usize,
    pub distance: Dist,
}

/// Checks `d(x, gx) >= R` for every non-identity deck element and point.
pub fn check_translative(p: &MetricCoverMap, radius: Dist) -> Result<(), TranslationWitness> {
    let Some(deck) = &p.deck else {
        return Ok(());
    };
    for g in 0..deck.len() {
        for x in 0..p.total.len() {
            if let Some(y) = deck.apply(g, x) {
                let distance = p.total.dist(x, y);
                if distance < radius {
                    return Err(TranslationWitness { g, x, distance });
                }
            }
        }
    }
    Ok(())
}

/// Smallest displacement `d(x, gx)` over non-identity deck elements.
pub fn min_translation(p: &MetricCoverMap) -> Option<Dist> {
    let deck = p.deck.as_ref()?;
    (0..deck.len())
        .flat_map(|g| (0..p.total.len()).filter_map(move |x| deck.apply(g, x).map(|y| (x, y))))
        .map(|(x, y)| p.total.dist(x, y))
        .min()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub radii: Vec<Dist>,
    pub nondecreasing: bool,
    /// First index from which the radii never decrease.
    pub nondecreasing_from: usize,
}

impl Profile {
    fn of(radii: Vec<Dist>) -> Self {
        let mut from = radii.len().saturating_sub(1);
        while from > 0 && radii[from - 1] <= radii[from] {
            from -= 1;
        }
        Self {
            nondecreasing: from == 0,
            nondecreasing_from: from,
            radii,
        }
    }
}

/// Maximal cover radius of each map in a sequence.
pub fn asymptotic_faithfulness_profile(seq: &[MetricCoverMap]) -> Profile {
    Profile::of(seq.iter().map(max_cover_radius).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub stage: usize,
    pub quotient_order: usize,
    pub degenerate: bool,
    pub truncation_depth: u32,
    pub max_radius: Dist,
    pub kernel_girth: KernelGirth,
    /// Largest `R` with no non-trivial kernel element of length `<= 2R`.
    pub kernel_girth_bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerProfile {
    pub symmetric_generators: bool,
    pub stages: Vec<StageReport>,
    pub radii: Profile,
    pub kernel_bounds_nondecreasing: bool,
}

/// Faithfulness profile of a tower: verified radius on a truncated total
/// of the given depth (or a default wide enough for the base), next to
/// the bound read off the shortest kernel element.
pub fn tower_profile(tower: &QuotientTower, depth: Option<u32>, kernel_search: u32, cap: usize) -> Result<TowerProfile, CoverError> {
    let mut stages = Vec::new();
    for stage in 0..tower.len() {
        let quotient = tower.enumerate_quotient(stage, cap)?;
        let base_diam = FiniteMetricSpace::cayley_graph(&quotient)?.diameter().to_integer() as u32;
        let d = depth.unwrap_or(3 * base_diam + 3);
        let cover = MetricCoverMap::tower_stage(tower, stage, d, cap)?;
        let girth = tower.kernel_girth(stage, kernel_search, cap)?;
        stages.push(StageReport {
            stage,
            quotient_order: quotient.order(),
            degenerate: quotient.is_degenerate(),
            truncation_depth: d,
            max_radius: max_cover_radius(&cover),
            kernel_girth: girth,
            kernel_girth_bound: girth.cover_bound(),
        });
    }
    let radii = Profile::of(stages.iter().map(|s| s.max_radius).collect());
    let kernel_bounds_nondecreasing = stages.windows(2).all(|w| w[0].kernel_girth_bound <= w[1].kernel_girth_bound);
    Ok(TowerProfile {
        symmetric_generators: true,
        stages,
        radii,
        kernel_bounds_nondecreasing,
    })
}
