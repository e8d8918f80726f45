use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{sub_seed, Check, SuiteError, SuiteReport, Tally};
use crate::covers::MetricCoverMap;
use crate::expanders::margulis_graph;
use crate::functors::{
    controlled_to_group_ring, equivariant_hom_rank, faithfulness_threshold, group_ring_to_controlled, net_rearrange, orbit_module,
    CosetOrbitSpec, Descent, GroupRingMorphism, Induction, VSetBijection,
};
use crate::groups::{FiniteGroup, GroupAction};
use crate::metric::{max_separated_net, Dist, FiniteMetricSpace, Net};
use crate::modules::{
    karoubi_factorize, shift_morphism, CoeffMatrix, ControlledMorphism, Decoration, FactorMode, GeometricModule, Letter, OrbitSpec, Ring,
    Support,
};
use crate::sample::{self, SampleShape};

type Arena = (Arc<FiniteMetricSpace>, Arc<GroupAction>);

/// A path with no symmetry, a cycle with the antipodal `Z/2`, and `S3`
/// acting on itself.
fn arenas() -> Result<Vec<Arena>, SuiteError> {
    let path = Arc::new(FiniteMetricSpace::path(8));
    let trivial = Arc::new(GroupAction::trivial(8));
    let antipodal = Arc::new(GroupAction::new(Arc::new(FiniteGroup::cyclic(2)), 12, |g, x| (x + 6 * g) % 12)?);
    let cycle = Arc::new(FiniteMetricSpace::cycle(12).with_action(antipodal.clone())?);
    let s3 = FiniteMetricSpace::finite_cayley(Arc::new(FiniteGroup::symmetric(3)))?;
    let s3_action = s3.action().expect("left-regular action").clone();
    Ok(vec![(path, trivial), (cycle, antipodal), (Arc::new(s3), s3_action)])
}

fn reach<R: Rng>(rng: &mut R) -> Option<Dist> {
    match rng.gen_range(0..5) {
        4 => None,
        r => Some(Dist::from_integer(r)),
    }
}

fn ring_for(i: usize) -> Ring {
    if i.is_multiple_of(2) {
        Ring::Integers
    } else {
        Ring::Mod(7)
    }
}

/// Number of sampled cases in [`modules_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModulesSuiteSize {
    pub pairs: usize,
    pub instances: usize,
}

impl Default for ModulesSuiteSize {
    fn default() -> Self {
        Self {
            pairs: 1000,
            instances: 100,
        }
    }
}

/// Propagation subadditivity on composable pairs, Karoubi factorizations
/// in both modes, and functoriality of the level shifts.
pub fn modules_suite(size: ModulesSuiteSize, level_window: u32, seed: u64) -> Result<SuiteReport, SuiteError> {
    let arenas = arenas()?;
    let shape = SampleShape {
        window: level_window,
        ..SampleShape::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, "modules"));

    let mut subadditive = Tally::default();
    for i in 0..size.pairs {
        let (space, action) = &arenas[i % arenas.len()];
        let ring = ring_for(i);
        let a = sample::any_module(&mut rng, space, action, ring, &shape)?;
        let b = sample::any_module(&mut rng, space, action, ring, &shape)?;
        let c = sample::any_module(&mut rng, space, action, ring, &shape)?;
        let r = reach(&mut rng);
        let psi = sample::morphism(&mut rng, &a, &b, r, &shape)?;
        let r = reach(&mut rng);
        let phi = sample::morphism(&mut rng, &b, &c, r, &shape)?;
        let composite = phi.compose(&psi)?;
        subadditive.record(composite.propagation().within(&phi.propagation().sum(&psi.propagation())));
    }

    let mut level_mode = Tally::default();
    let mut compact_mode = Tally::default();
    let mut shifts = Tally::default();
    for i in 0..size.instances {
        let (space, action) = &arenas[i % arenas.len()];
        let ring = ring_for(i);
        let all_points: Vec<u32> = (0..space.len() as u32).collect();
        let big = sample::module(&mut rng, space, action, &all_points, 0..=5, ring, Decoration::default(), &shape)?;

        let bound = rng.gen_range(0..=2);
        let small = sample::module(
            &mut rng,
            space,
            action,
            &all_points,
            0..=bound,
            ring,
            Decoration::letter(Letter::T { bound }),
            &shape,
        )?;
        level_mode.record(factorization_commutes(&mut rng, &small, &big, FactorMode::LevelBounded, &shape)?);

        let mut region: Vec<u32> = action
            .orbits()
            .choose(&mut rng)
            .expect("nonempty space")
            .iter()
            .map(|&x| x as u32)
            .collect();
        region.sort_unstable();
        let compact = Decoration {
            support: Support::Compact { region: region.clone() },
            ..Decoration::default()
        };
        let small = sample::module(&mut rng, space, action, &region, 0..=shape.max_level, ring, compact, &shape)?;
        compact_mode.record(factorization_commutes(&mut rng, &small, &big, FactorMode::CompactSupport, &shape)?);

        let a = sample::any_module(&mut rng, space, action, ring, &shape)?;
        let b = sample::any_module(&mut rng, space, action, ring, &shape)?;
        let c = sample::any_module(&mut rng, space, action, ring, &shape)?;
        let r = reach(&mut rng);
        let psi = sample::morphism(&mut rng, &a, &b, r, &shape)?;
        let r = reach(&mut rng);
        let phi = sample::morphism(&mut rng, &b, &c, r, &shape)?;
        let n = rng.gen_range(1..=3);
        let lhs = shift_morphism(&phi.compose(&psi)?, n)?;
        let rhs = shift_morphism(&phi, n)?.compose(&shift_morphism(&psi, n)?)?;
        let id = shift_morphism(&ControlledMorphism::identity(a.clone()), n)?;
        shifts.record(lhs == rhs && id == ControlledMorphism::identity(id.source().clone()));
    }

    let checks = vec![
        subadditive.check("propagation of a composite is at most the sum"),
        level_mode.check("level-bounded factorization triangles commute"),
        compact_mode.check("compact-support factorization triangles commute"),
        shifts.check("shift preserves composition and identities"),
    ];
    Ok(SuiteReport::new(
        "modules",
        checks,
        json!({ "sizes": size, "level_window": level_window }),
    ))
}

/// Factors a random `small -> big -> small` pair and compares both
/// triangles entrywise, independently of the flag the factorization sets.
fn factorization_commutes(
    rng: &mut ChaCha8Rng,
    small: &Arc<GeometricModule>,
    big: &Arc<GeometricModule>,
    mode: FactorMode,
    shape: &SampleShape,
) -> Result<bool, SuiteError> {
    let r = reach(rng).or(Some(Dist::from_integer(2)));
    let into = sample::morphism(rng, small, big, r, shape)?;
    let r = reach(rng).or(Some(Dist::from_integer(2)));
    let out_of = sample::morphism(rng, big, small, r, shape)?;
    let f = karoubi_factorize(Some(&into), Some(&out_of), mode)?;
    let (Some(into_summand), Some(out_of_summand)) = (&f.into_summand, &f.out_of_summand) else {
        return Ok(false);
    };
    Ok(f.triangles_commute && f.inclusion.compose(into_summand)? == into && out_of_summand.compose(&f.projection)? == out_of)
}

/// Enumeration limits for [`group_ring_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GroupRingBudget {
    /// Hom-sets (and pair sets) up to this size are enumerated in full.
    pub exhaustive_up_to: u64,
    /// Random extra cases where enumeration is out of budget.
    pub samples: usize,
}

impl Default for GroupRingBudget {
    fn default() -> Self {
        Self {
            exhaustive_up_to: 15_625,
            samples: 32,
        }
    }
}

struct HomSet {
    /// Each element with its unfolded controlled morphism.
    elements: Vec<(GroupRingMorphism, ControlledMorphism)>,
    /// Indices of the coordinate basis within `elements`.
    basis: std::ops::Range<usize>,
    exhaustive: bool,
}

#[derive(Serialize)]
struct HomSetRow {
    group: String,
    source_rank: usize,
    target_rank: usize,
    dimension: usize,
    exhaustive: bool,
    checked: usize,
}

fn group_ring_element(
    group: &Arc<FiniteGroup>,
    ring: Ring,
    source_rank: usize,
    target_rank: usize,
    coords: &[i64],
) -> Result<GroupRingMorphism, SuiteError> {
    let block = source_rank * target_rank;
    let terms = coords
        .chunks(block)
        .enumerate()
        .map(|(g, c)| CoeffMatrix::new(target_rank, source_rank, c.to_vec(), ring).map(|m| (g, m)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupRingMorphism::new(group.clone(), ring, source_rank, target_rank, terms)?)
}

/// Round trips between group-ring matrices and equivariant controlled
/// morphisms of single free orbits, and convolution against composition,
/// over `Z/5`. Sets within budget are enumerated in full; otherwise the
/// coordinate basis (which decides the question, all maps being linear or
/// bilinear) plus random samples.
pub fn group_ring_suite(
    groups: &[Arc<FiniteGroup>],
    max_rank: usize,
    budget: GroupRingBudget,
    seed: u64,
) -> Result<SuiteReport, SuiteError> {
    let ring = Ring::Mod(5);
    let q = 5i64;
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, "group-ring"));
    let (mut rank, mut forward, mut backward, mut convolution) = (Tally::default(), Tally::default(), Tally::default(), Tally::default());
    let mut rows = Vec::new();
    let mut exhaustive_everywhere = true;

    for group in groups {
        let n = group.order();
        let space = Arc::new(FiniteMetricSpace::finite_cayley(group.clone())?);
        let action = space.action().expect("left-regular action").clone();
        let modules: Vec<Arc<GeometricModule>> = (0..=max_rank)
            .map(|r| orbit_module(&space, &action, 0, r, ring).map(Arc::new))
            .collect::<Result<_, _>>()?;

        let mut homs = std::collections::BTreeMap::new();
        for r1 in 1..=max_rank {
            for r2 in 1..=max_rank {
                let dim = n * r1 * r2;
                rank.record(equivariant_hom_rank(&modules[r1], &modules[r2]) == dim);
                let size = (q as u64).checked_pow(dim as u32).filter(|&s| s <= budget.exhaustive_up_to);
                let mut coords: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
                match size {
                    Some(size) => coords.extend((0..size).map(|mut v| {
                        (0..dim)
                            .map(|_| {
                                let digit = (v % q as u64) as i64;
                                v /= q as u64;
                                digit
                            })
                            .collect()
                    })),
                    None => coords.extend((0..budget.samples).map(|_| (0..dim).map(|_| rng.gen_range(0..q)).collect())),
                }
                exhaustive_everywhere &= size.is_some();
                let mut elements = Vec::with_capacity(coords.len());
                for c in &coords {
                    let m = group_ring_element(group, ring, r1, r2, c)?;
                    let phi = group_ring_to_controlled(&m, &space, &action, 0)?;
                    forward.record(controlled_to_group_ring(&phi)? == m);
                    elements.push((m, phi));
                }
                let shape = SampleShape {
                    density: 0.5,
                    coeff: 4,
                    ..SampleShape::default()
                };
                for _ in 0..budget.samples {
                    let psi = sample::morphism(&mut rng, &modules[r1], &modules[r2], None, &shape)?;
                    let back = group_ring_to_controlled(&controlled_to_group_ring(&psi)?, &space, &action, 0)?;
                    backward.record(back == psi);
                }
                rows.push(HomSetRow {
                    group: group.name().to_string(),
                    source_rank: r1,
                    target_rank: r2,
                    dimension: dim,
                    exhaustive: size.is_some(),
                    checked: elements.len(),
                });
                homs.insert(
                    (r1, r2),
                    HomSet {
                        elements,
                        basis: 0..dim,
                        exhaustive: size.is_some(),
                    },
                );
            }
        }

        for r1 in 1..=max_rank {
            for r2 in 1..=max_rank {
                for r3 in 1..=max_rank {
                    let (first, second) = (&homs[&(r1, r2)], &homs[&(r2, r3)]);
                    let pairs: Vec<(usize, usize)> = if first.exhaustive
                        && second.exhaustive
                        && (first.elements.len() as u64) * (second.elements.len() as u64) <= budget.exhaustive_up_to
                    {
                        (0..first.elements.len())
                            .flat_map(|i| (0..second.elements.len()).map(move |j| (i, j)))
                            .collect()
                    } else {
                        exhaustive_everywhere = false;
                        let basis = first.basis.clone().flat_map(|i| second.basis.clone().map(move |j| (i, j)));
                        let random =
                            (0..budget.samples).map(|_| (rng.gen_range(0..first.elements.len()), rng.gen_range(0..second.elements.len())));
                        basis.chain(random).collect::<Vec<_>>()
                    };
                    for (i, j) in pairs {
                        let (b, b_phi) = &first.elements[i];
                        let (a, a_phi) = &second.elements[j];
                        let lhs = group_ring_to_controlled(&a.convolve(b)?, &space, &action, 0)?;
                        convolution.record(lhs == a_phi.compose(b_phi)?);
                    }
                }
            }
        }
    }

    let mut checks = vec![
        rank.check("equivariant hom rank is |G| times the ranks"),
        forward.check("group ring to controlled and back is the identity"),
        backward.check("controlled to group ring and back is the identity"),
        convolution.check("convolution corresponds to composition"),
    ];
    if !exhaustive_everywhere {
        let note = "sets over budget checked on the coordinate basis plus random samples";
        checks[1] = checks[1].clone().with_note(note);
        checks[3] = checks[3].clone().with_note(note);
    }
    Ok(SuiteReport::new("group-ring", checks, json!({ "ring": "Z/5", "hom_sets": rows })))
}

/// Descent along `C_{4k} -> C_4`: functoriality on sampled composable
/// pairs, faithfulness for small propagation, and a cancelling example
/// beyond the cover radius.
pub fn descent_suite(ks: &[usize], pairs: usize, seed: u64) -> Result<SuiteReport, SuiteError> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, "descent"));
    let shape = SampleShape {
        max_level: 2,
        ..SampleShape::default()
    };
    let (mut functorial, mut identities, mut separated, mut radius_rule) =
        (Tally::default(), Tally::default(), Tally::default(), Tally::default());
    let mut skipped = 0usize;
    let mut covers = Vec::new();
    for &k in ks {
        let cover = MetricCoverMap::cycle_cover(4, k);
        covers.push(cover.clone());
        let d = Descent::new(cover)?;
        let space = d.cover().total().clone();
        let action = d.action().clone();
        for i in 0..pairs {
            let ring = ring_for(i);
            let a = sample::any_module(&mut rng, &space, &action, ring, &shape)?;
            let b = sample::any_module(&mut rng, &space, &action, ring, &shape)?;
            let c = sample::any_module(&mut rng, &space, &action, ring, &shape)?;
            let r = reach(&mut rng);
            let psi = sample::morphism(&mut rng, &a, &b, r, &shape)?;
            let r = reach(&mut rng);
            let phi = sample::morphism(&mut rng, &b, &c, r, &shape)?;
            functorial.record(d.descend(&phi.compose(&psi)?)? == d.descend(&phi)?.compose(&d.descend(&psi)?)?);
            let id = d.descend(&ControlledMorphism::identity(a.clone()))?;
            identities.record(id == ControlledMorphism::identity(id.source().clone()));
            for m in [&psi, &phi] {
                let v = d.check_faithfulness(m)?;
                match v.holds() {
                    Some(ok) => separated.record(ok),
                    None => skipped += 1,
                }
                if v.radius_rule && !v.morphism_zero {
                    radius_rule.record(!v.descent_zero);
                }
            }
        }
    }

    // two deck-related copies of a sign pattern over C8 -> C4 cancel
    let d = Descent::new(MetricCoverMap::cycle_cover(4, 2))?;
    let orbit = |point| {
        GeometricModule::from_orbits(
            d.cover().total().clone(),
            d.action().clone(),
            &[OrbitSpec { point, level: 0, rank: 1 }],
            Ring::Integers,
            Decoration::default(),
        )
        .map(Arc::new)
    };
    let one = CoeffMatrix::identity(1);
    let minus = CoeffMatrix::new(1, 1, vec![-1], Ring::Integers)?;
    let sharp = ControlledMorphism::new(
        orbit(0)?,
        orbit(2)?,
        [((0, 0), one.clone()), ((0, 1), minus.clone()), ((1, 1), one), ((1, 0), minus)],
    )?;
    let v = d.check_faithfulness(&sharp)?;

    let thresholds: Vec<_> = (1..=3)
        .map(|a| json!({ "propagation": a, "first_faithful_stage": faithfulness_threshold(&covers, Dist::from_integer(a)) }))
        .collect();
    let checks = vec![
        functorial.check("descent preserves composition"),
        identities.check("descent preserves identities"),
        separated
            .check("separated morphisms descend faithfully")
            .with_note(format!("{skipped} morphisms outside the separation hypothesis")),
        radius_rule.check("nonzero morphisms with radius at least twice the propagation survive"),
        Check::flag(
            "a nonzero morphism beyond the radius descends to zero",
            v.cancels() && v.alpha > v.cover_radius,
        ),
    ];
    Ok(SuiteReport::new(
        "descent",
        checks,
        json!({ "ks": ks, "pairs_per_k": pairs, "sharpness": v, "thresholds": thresholds }),
    ))
}

/// Restriction to every subgroup and induction back, on random
/// coset-graded modules with label-preserving morphisms.
pub fn induction_suite(groups: &[Arc<FiniteGroup>], instances: usize, seed: u64) -> Result<SuiteReport, SuiteError> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, "induction"));
    let (mut iso, mut natural, mut preserved) = (Tally::default(), Tally::default(), Tally::default());
    let mut subgroup_count = 0;
    for group in groups {
        let space = Arc::new(FiniteMetricSpace::finite_cayley(group.clone())?);
        let action = space.action().expect("left-regular action").clone();
        for h in group.all_subgroups() {
            subgroup_count += 1;
            let members: Vec<usize> = h.iter().collect();
            let ind = Induction::new(space.clone(), action.clone(), &members)?;
            let k = ind.coset_count();
            for i in 0..instances {
                let ring = ring_for(i);
                let coset_module = |rng: &mut ChaCha8Rng| {
                    let specs: Vec<CosetOrbitSpec> = (0..rng.gen_range(1..=2))
                        .map(|_| CosetOrbitSpec {
                            point: rng.gen_range(0..space.len() as u32),
                            level: rng.gen_range(0..=2),
                            ranks: (0..k).map(|_| rng.gen_range(0..=2)).collect(),
                        })
                        .collect();
                    ind.coset_module(&specs, ring, Decoration::default()).map(Arc::new)
                };
                let m1 = coset_module(&mut rng)?;
                let m2 = coset_module(&mut rng)?;
                let mut entries = Vec::new();
                for orbit in m1.flat().orbits() {
                    let s = orbit[0];
                    if m1.flat().rank(s) == 0 {
                        continue;
                    }
                    for t in 0..m2.len() {
                        if m2.labels()[t] == m1.labels()[s] && m2.flat().rank(t) > 0 && rng.gen_bool(0.3) {
                            entries.push(((s, t), sample::matrix(&mut rng, m2.flat().rank(t), m1.flat().rank(s), ring, 3)?));
                        }
                    }
                }
                let phi = ind.coset_morphism(&m1, &m2, entries)?;
                let report = ind.verify(&phi)?;
                iso.record(report.unit_iso && report.counit_iso);
                natural.record(report.natural);
                preserved.record(report.propagation_preserved());
            }
        }
    }
    let checks = vec![
        iso.check("unit and counit are isomorphisms"),
        natural.check("unit and counit are natural"),
        preserved.check("restriction and induction preserve propagation exactly"),
    ];
    let names: Vec<&str> = groups.iter().map(|g| g.name()).collect();
    Ok(SuiteReport::new(
        "induction",
        checks,
        json!({ "groups": names, "subgroups": subgroup_count, "instances_per_subgroup": instances }),
    ))
}

/// `VH/H × G/VH ≅ G/H` for every normal `H` and every subgroup `V`, with
/// the minimal section and several random ones.
pub fn vset_suite(groups: &[Arc<FiniteGroup>], random_sections: usize, seed: u64) -> Result<SuiteReport, SuiteError> {
    let mut bijective = Tally::default();
    let mut equivariant = Tally::default();
    let mut triples = Vec::new();
    for group in groups {
        let subgroups = group.all_subgroups();
        let mut count = 0;
        for h in subgroups.iter().filter(|h| group.is_normal(h)) {
            let h: Vec<usize> = h.iter().collect();
            for v in &subgroups {
                count += 1;
                let v: Vec<usize> = v.iter().collect();
                let mut maps = vec![VSetBijection::new(group.clone(), &h, &v)?];
                for i in 0..random_sections {
                    let s = sub_seed(seed, &format!("vset {} {count} {i}", group.name()));
                    maps.push(VSetBijection::with_random_section(group.clone(), &h, &v, s)?);
                }
                for b in maps {
                    let r = b.verify();
                    bijective.record(r.domain_size == r.codomain_size && r.psi_after_phi && r.phi_after_psi && r.well_defined);
                    equivariant.record(r.v_equivariant);
                }
            }
        }
        triples.push(json!({ "group": group.name(), "order": group.order(), "triples": count }));
    }
    let checks = vec![
        bijective.check("both composites are identities"),
        equivariant.check("both maps commute with V"),
    ];
    Ok(SuiteReport::new(
        "vset",
        checks,
        json!({ "random_sections": random_sections, "groups": triples }),
    ))
}

/// Net invariants for several scan orders, and rearrangement onto nets of
/// radius 3, 2, 1 at levels 0, 1, 2.
pub fn nets_suite(instances: usize, seed: u64) -> Result<SuiteReport, SuiteError> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, "nets"));
    let spaces = vec![
        ("path 7", FiniteMetricSpace::path(7)),
        ("path 10", FiniteMetricSpace::path(10)),
        ("cycle 8", FiniteMetricSpace::cycle(8)),
        ("cycle 11", FiniteMetricSpace::cycle(11)),
        ("margulis 3", margulis_graph(3)?),
    ];
    let shape = SampleShape {
        max_level: 2,
        ..SampleShape::default()
    };
    let (mut invariants, mut iso, mut bounds) = (Tally::default(), Tally::default(), Tally::default());
    let mut sizes = Vec::new();
    for (name, space) in spaces {
        let space = Arc::new(space);
        let n = space.len();
        let trivial = Arc::new(GroupAction::trivial(n));
        let mut order: Vec<usize> = (0..n).collect();
        let mut nets: Vec<Net> = Vec::new();
        for delta in (1..=3).rev() {
            let delta = Dist::from_integer(delta);
            for attempt in 0..5 {
                if attempt > 0 {
                    order.shuffle(&mut rng);
                }
                let net = max_separated_net(&space, delta, &order, false)?;
                invariants.record(net.verify(&space).is_ok());
                if attempt == 0 {
                    nets.push(net);
                }
            }
        }
        sizes.push(json!({ "space": name, "net_sizes": nets.iter().map(|x| x.points.len()).collect::<Vec<_>>() }));
        for i in 0..instances {
            let m = sample::any_module(&mut rng, &space, &trivial, ring_for(i), &shape)?;
            let r = net_rearrange(&[m], &nets)?.remove(0);
            iso.record(r.is_isomorphism()?);
            bounds.record(r.bounds_hold());
            // a single level against each net on its own
            let level = rng.gen_range(0..nets.len());
            let points: Vec<u32> = (0..n as u32).collect();
            let flat = sample::module(
                &mut rng,
                &space,
                &trivial,
                &points,
                0..=0,
                ring_for(i),
                Decoration::default(),
                &shape,
            )?;
            let r = net_rearrange(&[flat], std::slice::from_ref(&nets[level]))?.remove(0);
            iso.record(r.is_isomorphism()?);
            bounds.record(r.bounds_hold());
        }
    }
    let checks = vec![
        invariants.check("nets are separated, covering, and project within the radius"),
        iso.check("rearrangement is an isomorphism"),
        bounds.check("level-k propagation is at most the level-k radius"),
    ];
    Ok(SuiteReport::new("nets", checks, json!({ "spaces": sizes, "instances": instances })))
}
