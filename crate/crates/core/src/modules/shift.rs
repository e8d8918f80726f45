//! Shift functors `F^n`, moving every index `n` levels up.
//!
//! The infinite sum of all shifts is not represented; only the individual
//! functors are.

use std::sync::Arc;

use super::{ControlledMorphism, Decoration, GeometricModule, Letter, ModuleError};

pub fn shift_module(module: &GeometricModule, n: u32) -> Result<GeometricModule, ModuleError> {
    if n == 0 {
        return Ok(module.clone());
    }
    let levels = module
        .levels()
        .iter()
        .map(|&l| {
            l.checked_add(n)
                .filter(|&x| x <= module.window())
                .ok_or(ModuleError::LevelOutOfWindow {
                    level: l as u64 + n as u64,
                    window: module.window(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    // a bounded object stays bounded; level-zero objects become bounded by n
    let letter = match module.decoration().letter {
        Letter::O => Letter::O,
        Letter::T { bound } => Letter::T { bound: bound + n },
        Letter::C => Letter::T { bound: n },
    };
    let decoration = Decoration {
        letter,
        ..module.decoration().clone()
    };
    module.with_levels(levels, decoration)
}

/// Same entries between the shifted source and target.
pub fn shift_morphism(phi: &ControlledMorphism, n: u32) -> Result<ControlledMorphism, ModuleError> {
    let source = Arc::new(shift_module(phi.source(), n)?);
    let target = if Arc::ptr_eq(phi.source(), phi.target()) {
        source.clone()
    } else {
        Arc::new(shift_module(phi.target(), n)?)
    };
    Ok(phi.retarget(source, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;
    use crate::modules::{CoeffMatrix, Ring};

    fn module(levels: Vec<u32>) -> Arc<GeometricModule> {
        let space = Arc::new(FiniteMetricSpace::path(levels.len()));
        let n = levels.len() as u32;
        Arc::new(GeometricModule::plain(space, (0..n).collect(), levels, vec![1; n as usize], Ring::Integers).unwrap())
    }

    #[test]
    fn shift_zero_is_identity() {
        let m = module(vec![3, 1]);
        assert_eq!(shift_module(&m, 0).unwrap(), *m);
    }

    #[test]
    fn constant_level_moves_up() {
        let m = module(vec![3, 3]);
        assert_eq!(shift_module(&m, 1).unwrap().levels(), &[4, 4]);
    }

    #[test]
    fn window_overflow_fails() {
        let m = module(vec![60]);
        assert!(matches!(shift_module(&m, 5), Err(ModuleError::LevelOutOfWindow { level: 65, .. })));
    }

    #[test]
    fn functorial_on_a_pair() {
        let m = module(vec![0, 2, 1]);
        let one = CoeffMatrix::identity(1);
        let phi = ControlledMorphism::new(m.clone(), m.clone(), [((0, 1), one.clone()), ((1, 2), one.clone())]).unwrap();
        let psi = ControlledMorphism::new(m.clone(), m.clone(), [((2, 0), one)]).unwrap();
        let lhs = shift_morphism(&phi.compose(&psi).unwrap(), 3).unwrap();
        let rhs = shift_morphism(&phi, 3).unwrap().compose(&shift_morphism(&psi, 3).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.propagation(), phi.compose(&psi).unwrap().propagation());
    }
}
