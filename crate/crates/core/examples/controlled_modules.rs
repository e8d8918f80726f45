//! Geometric modules over a cycle with a rotation action: composition,
//! propagation, a level-bounded Karoubi factorization and the shift.

use std::sync::Arc;

use coarsebox::groups::{FiniteGroup, GroupAction};
use coarsebox::metric::{Dist, FiniteMetricSpace};
use coarsebox::modules::{karoubi_factorize, shift_morphism, Decoration, FactorMode, Letter, Ring};
use coarsebox::sample::{self, SampleShape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rotation = Arc::new(GroupAction::new(Arc::new(FiniteGroup::cyclic(3)), 12, |g, x| (x + 4 * g) % 12)?);
    let space = Arc::new(FiniteMetricSpace::cycle(12).with_action(rotation.clone())?);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shape = SampleShape::default();
    let ring = Ring::Mod(7);
    let points: Vec<u32> = (0..12).collect();

    let a = sample::any_module(&mut rng, &space, &rotation, ring, &shape)?;
    let b = sample::any_module(&mut rng, &space, &rotation, ring, &shape)?;
    let c = sample::any_module(&mut rng, &space, &rotation, ring, &shape)?;
    let psi = sample::morphism(&mut rng, &a, &b, Some(Dist::from_integer(1)), &shape)?;
    let phi = sample::morphism(&mut rng, &b, &c, Some(Dist::from_integer(2)), &shape)?;
    let composite = phi.compose(&psi)?;
    println!("modules of total rank {}, {}, {}", a.total_rank(), b.total_rank(), c.total_rank());
    println!("propagation psi {}", psi.propagation());
    println!("propagation phi {}", phi.propagation());
    println!("propagation phi.psi {}", composite.propagation());

    let small = sample::module(
        &mut rng,
        &space,
        &rotation,
        &points,
        0..=1,
        ring,
        Decoration::letter(Letter::T { bound: 1 }),
        &shape,
    )?;
    let big = sample::module(&mut rng, &space, &rotation, &points, 0..=5, ring, Decoration::default(), &shape)?;
    let into = sample::morphism(&mut rng, &small, &big, Some(Dist::from_integer(2)), &shape)?;
    let out_of = sample::morphism(&mut rng, &big, &small, Some(Dist::from_integer(2)), &shape)?;
    let f = karoubi_factorize(Some(&into), Some(&out_of), FactorMode::LevelBounded)?;
    println!(
        "factorization through levels <= {}: kept {} of {} indices, triangles commute: {}",
        f.cut,
        f.kept.len(),
        big.len(),
        f.triangles_commute
    );

    let shifted = shift_morphism(&composite, 2)?;
    let pieces = shift_morphism(&phi, 2)?.compose(&shift_morphism(&psi, 2)?)?;
    println!("shift by 2 commutes with composition: {}", shifted == pieces);
    println!("{}", serde_json::to_string(&psi.to_record())?);
    Ok(())
}
