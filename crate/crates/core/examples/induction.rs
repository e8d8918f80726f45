//! Restriction from `S3` to each of its subgroups and induction back, on
//! one coset-graded module with a label-preserving endomorphism.

use std::sync::Arc;

use coarsebox::functors::{CosetOrbitSpec, Induction};
use coarsebox::groups::FiniteGroup;
use coarsebox::metric::FiniteMetricSpace;
use coarsebox::modules::{Decoration, Ring};
use coarsebox::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let space = Arc::new(FiniteMetricSpace::finite_cayley(s3.clone())?);
    let action = space.action().expect("left-regular action").clone();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ring = Ring::Mod(7);

    for h in s3.all_subgroups() {
        let members: Vec<usize> = h.iter().collect();
        let ind = Induction::new(space.clone(), action.clone(), &members)?;
        let specs = [CosetOrbitSpec {
            point: 0,
            level: 1,
            ranks: vec![1; ind.coset_count()],
        }];
        let m = Arc::new(ind.coset_module(&specs, ring, Decoration::default())?);
        let mut entries = Vec::new();
        for orbit in m.flat().orbits() {
            let s = orbit[0];
            for t in 0..m.len() {
                if m.labels()[t] == m.labels()[s] {
                    entries.push(((s, t), sample::matrix(&mut rng, 1, 1, ring, 3)?));
                }
            }
        }
        let phi = ind.coset_morphism(&m, &m, entries)?;
        let r = ind.verify(&phi)?;
        println!(
            "|H| = {}: {} cosets, unit iso {}, counit iso {}, natural {}, propagation {} -> {} -> {}",
            members.len(),
            ind.coset_count(),
            r.unit_iso,
            r.counit_iso,
            r.natural,
            r.propagation,
            r.restricted_propagation,
            r.induced_propagation
        );
    }
    Ok(())
}
