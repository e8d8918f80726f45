//! Descent along `C_{4k} -> C_4`: a morphism with small propagation
//! survives, while a deck-antisymmetric one beyond the cover radius
//! descends to zero.

use std::sync::Arc;

use coarsebox::covers::MetricCoverMap;
use coarsebox::functors::Descent;
use coarsebox::modules::{CoeffMatrix, ControlledMorphism, Decoration, GeometricModule, OrbitSpec, Ring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in 2..=4 {
        let d = Descent::new(MetricCoverMap::cycle_cover(4, k))?;
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
        let (m0, m1) = (orbit(0)?, orbit(1)?);
        let step = ControlledMorphism::equivariant_from(m0.clone(), m1.clone(), [((0, 0), CoeffMatrix::identity(1))])?;
        let v = d.check_faithfulness(&step)?;
        println!(
            "C{} -> C4: cover radius {}, step of propagation {} descends to zero: {}",
            4 * k,
            d.cover_radius(),
            v.alpha,
            v.descent_zero
        );
    }

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
    println!(
        "C8 -> C4: morphism of propagation {} is nonzero: {}, its descent is zero: {}",
        v.alpha, !v.morphism_zero, v.descent_zero
    );
    Ok(())
}
