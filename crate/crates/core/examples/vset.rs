//! The bijection `VH/H × G/VH ≅ G/H` in `S4` with `H = V4` normal and
//! `V` a Sylow 2-subgroup, under the minimal section and a random one.

use std::sync::Arc;

use coarsebox::functors::VSetBijection;
use coarsebox::groups::FiniteGroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s4 = Arc::new(FiniteGroup::symmetric(4));
    let subgroups = s4.all_subgroups();
    let h: Vec<usize> = subgroups
        .iter()
        .find(|h| h.order() == 4 && s4.is_normal(h))
        .expect("S4 has a normal Klein four-group")
        .iter()
        .collect();
    let v: Vec<usize> = subgroups
        .iter()
        .find(|v| v.order() == 8)
        .expect("Sylow 2-subgroup")
        .iter()
        .collect();

    for (label, b) in [
        ("minimal section", VSetBijection::new(s4.clone(), &h, &v)?),
        ("random section", VSetBijection::with_random_section(s4.clone(), &h, &v, 17)?),
    ] {
        let r = b.verify();
        println!("{label}: section {:?}", b.section());
        println!("  {}", serde_json::to_string(&r)?);
        let (a, c) = b.psi(5);
        println!(
            "  psi(coset 5 of H) = (coset {a} in VH/H, coset {c} of VH), phi maps it back to {}",
            b.phi(a, c)
        );
    }
    Ok(())
}
