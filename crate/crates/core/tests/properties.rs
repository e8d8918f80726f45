use std::sync::Arc;

use coarsebox::covers::{max_cover_radius, MetricCoverMap};
use coarsebox::expanders::{girth, second_eigenvalue};
use coarsebox::functors::{controlled_to_group_ring, group_ring_to_controlled, GroupRingMorphism};
use coarsebox::groups::{FiniteGroup, GroupAction};
use coarsebox::metric::{read_edges_csv, write_edges_csv, Dist, FiniteMetricSpace};
use coarsebox::modules::{shift_morphism, CoeffMatrix, Ring};
use coarsebox::sample::{self, SampleShape};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn group(i: usize) -> Arc<FiniteGroup> {
    Arc::new(match i {
        0 => FiniteGroup::cyclic(2),
        1 => FiniteGroup::cyclic(3),
        2 => FiniteGroup::cyclic(5),
        3 => FiniteGroup::symmetric(3),
        _ => FiniteGroup::dihedral(4),
    })
}

fn arena(cyclic: bool) -> (Arc<FiniteMetricSpace>, Arc<GroupAction>) {
    if cyclic {
        let rot = Arc::new(GroupAction::new(Arc::new(FiniteGroup::cyclic(3)), 9, |g, x| (x + 3 * g) % 9).unwrap());
        (Arc::new(FiniteMetricSpace::cycle(9).with_action(rot.clone()).unwrap()), rot)
    } else {
        (Arc::new(FiniteMetricSpace::path(7)), Arc::new(GroupAction::trivial(7)))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composite_propagation_is_subadditive(seed in any::<u64>(), cyclic in any::<bool>(), r1 in 0i64..4, r2 in 0i64..4) {
        let (space, action) = arena(cyclic);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = SampleShape::default();
        let ring = Ring::Mod(7);
        let a = sample::any_module(&mut rng, &space, &action, ring, &shape).unwrap();
        let b = sample::any_module(&mut rng, &space, &action, ring, &shape).unwrap();
        let c = sample::any_module(&mut rng, &space, &action, ring, &shape).unwrap();
        let psi = sample::morphism(&mut rng, &a, &b, Some(Dist::from_integer(r1)), &shape).unwrap();
        let phi = sample::morphism(&mut rng, &b, &c, Some(Dist::from_integer(r2)), &shape).unwrap();
        let composite = phi.compose(&psi).unwrap();
        prop_assert!(composite.propagation().within(&phi.propagation().sum(&psi.propagation())));
        prop_assert!(psi.propagation().space <= Dist::from_integer(r1));
    }

    #[test]
    fn shift_is_functorial(seed in any::<u64>(), n in 0u32..4) {
        let (space, action) = arena(true);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = SampleShape::default();
        let a = sample::any_module(&mut rng, &space, &action, Ring::Integers, &shape).unwrap();
        let b = sample::any_module(&mut rng, &space, &action, Ring::Integers, &shape).unwrap();
        let c = sample::any_module(&mut rng, &space, &action, Ring::Integers, &shape).unwrap();
        let psi = sample::morphism(&mut rng, &a, &b, None, &shape).unwrap();
        let phi = sample::morphism(&mut rng, &b, &c, None, &shape).unwrap();
        let lhs = shift_morphism(&phi.compose(&psi).unwrap(), n).unwrap();
        let rhs = shift_morphism(&phi, n).unwrap().compose(&shift_morphism(&psi, n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn group_ring_round_trip(g in 0usize..5, r1 in 1usize..3, r2 in 1usize..3, seed in any::<u64>()) {
        let group = group(g);
        let space = Arc::new(FiniteMetricSpace::finite_cayley(group.clone()).unwrap());
        let action = space.action().unwrap().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::Mod(5);
        let draw = |rng: &mut ChaCha8Rng, rows, cols| {
            let terms: Vec<_> = (0..group.order()).map(|e| (e, sample::matrix(rng, rows, cols, ring, 4).unwrap())).collect();
            GroupRingMorphism::new(group.clone(), ring, cols, rows, terms).unwrap()
        };
        let b = draw(&mut rng, r2, r1);
        let a = draw(&mut rng, r1, r2);
        let b_phi = group_ring_to_controlled(&b, &space, &action, 0).unwrap();
        let a_phi = group_ring_to_controlled(&a, &space, &action, 0).unwrap();
        prop_assert_eq!(&controlled_to_group_ring(&b_phi).unwrap(), &b);
        let convolved = group_ring_to_controlled(&a.convolve(&b).unwrap(), &space, &action, 0).unwrap();
        prop_assert_eq!(convolved, a_phi.compose(&b_phi).unwrap());
    }

    #[test]
    fn residue_cover_radius_is_a_quarter_of_the_modulus(n in 2u64..30) {
        let cover = MetricCoverMap::integers_mod(n, 1 << 20).unwrap();
        prop_assert_eq!(max_cover_radius(&cover), Dist::from_integer((n / 4) as i64));
    }

    #[test]
    fn cycle_girth_and_spectrum(n in 3usize..60, seed in any::<u64>()) {
        let c = FiniteMetricSpace::cycle(n);
        prop_assert_eq!(girth(&c).unwrap(), Some(n as u32));
        let est = second_eigenvalue(&c, seed).unwrap();
        let exact = 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
        prop_assert!((est.value - exact).abs() <= 1e-8, "n={} got {} want {}", n, est.value, exact);
    }

    #[test]
    fn edge_csv_round_trip(n in 2usize..20, extra in proptest::collection::vec((0usize..20, 0usize..20), 0..30)) {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        edges.extend(extra.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v));
        let space = FiniteMetricSpace::from_edges(n, &edges).unwrap();
        let mut buf = Vec::new();
        write_edges_csv(&space, &mut buf).unwrap();
        let back = read_edges_csv(buf.as_slice(), Some(n)).unwrap();
        for x in 0..n {
            prop_assert_eq!(space.row(x), back.row(x));
        }
    }

    #[test]
    fn coefficient_composition_is_associative(seed in any::<u64>(), dims in proptest::array::uniform4(1usize..4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::Mod(5);
        let [p, q, r, s] = dims;
        let a: CoeffMatrix = sample::matrix(&mut rng, p, q, ring, 4).unwrap();
        let b = sample::matrix(&mut rng, q, r, ring, 4).unwrap();
        let c = sample::matrix(&mut rng, r, s, ring, 4).unwrap();
        let left = a.compose(&b, ring).unwrap().compose(&c, ring).unwrap();
        let right = a.compose(&b.compose(&c, ring).unwrap(), ring).unwrap();
        prop_assert_eq!(left, right);
    }
}
