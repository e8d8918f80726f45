//! Faithfulness profiles of two quotient towers: `Z -> Z/4n` and the
//! free matrix group `<A, B>` reduced modulo small primes.

use coarsebox::caps::Caps;
use coarsebox::covers::tower_profile;
use coarsebox::groups::QuotientTower;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let caps = Caps::from_env();

    let integers = QuotientTower::integers(&[4, 8, 12, 16, 20, 24])?;
    let profile = tower_profile(&integers, None, 64, caps.max_quotient_order)?;
    println!("Z -> Z/n");
    for s in &profile.stages {
        println!(
            "  n={:<3} radius={} kernel-girth bound={}",
            s.quotient_order, s.max_radius, s.kernel_girth_bound
        );
    }

    let sl2 = QuotientTower::sanov(&[3, 5, 7, 11])?;
    let profile = tower_profile(&sl2, Some(6), 12, caps.max_quotient_order)?;
    println!("<A, B> -> SL2(F_p), total = ball of radius 6");
    for (s, p) in profile.stages.iter().zip([3, 5, 7, 11]) {
        println!(
            "  p={:<3} order={:<5} radius={} kernel girth={:?} bound={}",
            p, s.quotient_order, s.max_radius, s.kernel_girth, s.kernel_girth_bound
        );
    }
    println!(
        "radii nondecreasing: {}, bounds nondecreasing: {}",
        profile.radii.nondecreasing, profile.kernel_bounds_nondecreasing
    );
    Ok(())
}
