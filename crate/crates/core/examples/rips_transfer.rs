//! Rips complexes over the residue cover `Z -> Z/24` and the radius at
//! which their 1-skeleta still cover.

use coarsebox::caps::Caps;
use coarsebox::covers::MetricCoverMap;
use coarsebox::metric::{Dist, FiniteMetricSpace};
use coarsebox::rips::{build_rips, induced_cover_on_skeleton};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let caps = Caps::from_env();
    let rips = build_rips(&FiniteMetricSpace::cycle(12), Dist::from_integer(2), 3, caps.max_simplices)?;
    println!("Rips(C12, 2) simplex counts by dimension: {:?}", rips.counts());

    let cover = MetricCoverMap::integers_mod(24, caps.max_quotient_order)?.certify();
    let radius = cover.certified_radius().expect("certified");
    println!("Z -> Z/24 covers at radius {radius}");
    for d in [1, 2] {
        let (_, t) = induced_cover_on_skeleton(&cover, d, 2, caps.max_simplices)?;
        println!(
            "  d={d}: predicted radius {}, {} centers checked, unlifted simplices {}, passed {}",
            t.predicted_radius,
            t.centers_checked,
            t.unlifted_simplices.len(),
            t.passed()
        );
    }
    Ok(())
}
