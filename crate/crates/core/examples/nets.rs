//! Greedy nets on a cycle at radii 3, 2, 1 and a module gathered onto
//! them level by level.

use std::sync::Arc;

use coarsebox::functors::net_rearrange;
use coarsebox::groups::GroupAction;
use coarsebox::metric::{max_separated_net, Dist, FiniteMetricSpace};
use coarsebox::modules::Ring;
use coarsebox::sample::{self, SampleShape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = Arc::new(FiniteMetricSpace::cycle(11));
    let trivial = Arc::new(GroupAction::trivial(space.len()));
    let order: Vec<usize> = (0..space.len()).collect();
    let nets = [3, 2, 1]
        .into_iter()
        .map(|d| max_separated_net(&space, Dist::from_integer(d), &order, false))
        .collect::<Result<Vec<_>, _>>()?;
    for net in &nets {
        println!("delta {}: net {:?}, valid {}", net.delta, net.points, net.verify(&space).is_ok());
    }

    let shape = SampleShape {
        max_level: 2,
        ..SampleShape::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = sample::any_module(&mut rng, &space, &trivial, Ring::Integers, &shape)?;
    let r = net_rearrange(std::slice::from_ref(&m), &nets)?.remove(0);
    println!("{} indices gathered into {}", m.len(), r.rearranged.len());
    for b in &r.bounds {
        println!("  level {}: propagation {} <= {}: {}", b.level, b.propagation, b.delta, b.holds());
    }
    println!("isomorphism: {}", r.is_isomorphism()?);
    Ok(())
}
