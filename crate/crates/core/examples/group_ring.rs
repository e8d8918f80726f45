//! Group-ring elements of `Z/5[S3]` as equivariant morphisms of the
//! regular orbit module, and back.

use std::sync::Arc;

use coarsebox::functors::{controlled_to_group_ring, equivariant_hom_rank, group_ring_to_controlled, orbit_module, GroupRingMorphism};
use coarsebox::groups::FiniteGroup;
use coarsebox::metric::FiniteMetricSpace;
use coarsebox::modules::{CoeffMatrix, Ring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let space = Arc::new(FiniteMetricSpace::finite_cayley(s3.clone())?);
    let action = space.action().expect("left-regular action").clone();
    let ring = Ring::Mod(5);

    let m2 = orbit_module(&space, &action, 0, 2, ring)?;
    println!("equivariant hom rank on rank-2 orbit modules: {}", equivariant_hom_rank(&m2, &m2));

    let a = GroupRingMorphism::new(
        s3.clone(),
        ring,
        2,
        2,
        [
            (1, CoeffMatrix::from_rows(&[vec![1, 2], vec![0, 3]], ring)?),
            (4, CoeffMatrix::identity(2)),
        ],
    )?;
    let b = GroupRingMorphism::new(
        s3.clone(),
        ring,
        2,
        2,
        [(2, CoeffMatrix::from_rows(&[vec![0, 1], vec![4, 0]], ring)?)],
    )?;
    let a_phi = group_ring_to_controlled(&a, &space, &action, 0)?;
    let b_phi = group_ring_to_controlled(&b, &space, &action, 0)?;
    println!("a has {} nonzero entries as a controlled morphism", a_phi.nonzero_count());
    println!("round trip recovers a: {}", controlled_to_group_ring(&a_phi)? == a);
    let product = group_ring_to_controlled(&a.convolve(&b)?, &space, &action, 0)?;
    println!("a * b matches composition: {}", product == a_phi.compose(&b_phi)?);
    Ok(())
}
