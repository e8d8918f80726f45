use serde::Serialize;

use super::{Dist, FiniteMetricSpace, MetricError};

/// A maximal δ-separated subset with a projection onto it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Net {
    pub delta: Dist,
    /// Net points in the order they were selected.
    pub points: Vec<usize>,
    /// `projection[x]` is the net point assigned to `x`.
    pub projection: Vec<usize>,
}

/// Greedy maximal δ-separated net, scanning points in `order`.
///
/// A point joins the net when it is at distance `>= delta` from every
/// point already chosen. The projection sends `x` to the first chosen net
/// point within `delta`, and fixes net points. With `equivariant`, whole orbits of the attached
/// action are added at once and the projection is extended from orbit
/// representatives, so both the net and the projection commute with the
/// action.
pub fn max_separated_net(space: &FiniteMetricSpace, delta: Dist, order: &[usize], equivariant: bool) -> Result<Net, MetricError> {
    if delta <= Dist::default() {
        return Err(MetricError::InvalidDelta);
    }
    check_order(space, order)?;
    let mut chosen: Vec<usize> = Vec::new();
    let mut in_net = vec![false; space.len()];
    if !equivariant {
        for &x in order {
            if chosen.iter().all(|&n| space.dist(x, n) >= delta) {
                chosen.push(x);
                in_net[x] = true;
            }
        }
        let projection = (0..space.len()).map(|x| first_within(space, &chosen, &in_net, x, delta)).collect();
        return Ok(Net {
            delta,
            points: chosen,
            projection,
        });
    }

    let action = space.action().ok_or_else(|| MetricError::Infeasible("no action attached".into()))?;
    let group = action.group();
    for &x in order {
        if in_net[x] || !chosen.iter().all(|&n| space.dist(x, n) >= delta) {
            continue;
        }
        let mut orbit: Vec<usize> = group.elements().map(|g| action.act(g, x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for (i, &a) in orbit.iter().enumerate() {
            for &b in &orbit[i + 1..] {
                if space.dist(a, b) < delta {
                    return Err(MetricError::Infeasible(format!(
                        "orbit of {x} has points {a}, {b} closer than delta"
                    )));
                }
            }
        }
        for y in orbit {
            in_net[y] = true;
            chosen.push(y);
        }
    }
    // representatives: first point of each orbit in scan order
    let mut projection = vec![usize::MAX; space.len()];
    for &x in order {
        if projection[x] != usize::MAX {
            continue;
        }
        let target = first_within(space, &chosen, &in_net, x, delta);
        for g in group.elements() {
            let (gx, gt) = (action.act(g, x), action.act(g, target));
            match projection[gx] {
                usize::MAX => projection[gx] = gt,
                p if p == gt => {}
                _ => {
                    return Err(MetricError::Infeasible(format!(
                        "projection of {gx} is not well defined on its orbit"
                    )))
                }
            }
        }
    }
    Ok(Net {
        delta,
        points: chosen,
        projection,
    })
}

fn first_within(space: &FiniteMetricSpace, chosen: &[usize], in_net: &[bool], x: usize, delta: Dist) -> usize {
    if in_net[x] {
        return x;
    }
    *chosen.iter().find(|&&n| space.dist(x, n) <= delta).expect("greedy nets cover")
}

fn check_order(space: &FiniteMetricSpace, order: &[usize]) -> Result<(), MetricError> {
    let mut seen = vec![false; space.len()];
    for &x in order {
        if x >= space.len() || std::mem::replace(&mut seen[x], true) {
            return Err(MetricError::PointOutOfRange(x));
        }
    }
    if order.len() != space.len() {
        return Err(MetricError::Infeasible("seed order must list every point once".into()));
    }
    Ok(())
}

impl Net {
    /// Separation, covering and projection bounds, with a witness on failure.
    pub fn verify(&self, space: &FiniteMetricSpace) -> Result<(), NetViolation> {
        for (i, &a) in self.points.iter().enumerate() {
            for &b in &self.points[i + 1..] {
                if space.dist(a, b) < self.delta {
                    return Err(NetViolation::Separation(a, b));
                }
            }
        }
        let mut is_net = vec![false; space.len()];
        for &p in &self.points {
            is_net[p] = true;
        }
        for x in 0..space.len() {
            if !self.points.iter().any(|&n| space.dist(x, n) < self.delta) {
                return Err(NetViolation::Covering(x));
            }
            let f = self.projection[x];
            if !is_net[f] || space.dist(x, f) > self.delta {
                return Err(NetViolation::Projection(x));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NetViolation {
    /// Two net points closer than delta.
    Separation(usize, usize),
    /// A point at distance `>= delta` from every net point.
    Covering(usize),
    /// A projection farther than delta or off the net.
    Projection(usize),
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn int(n: i64) -> Dist {
        Rational64::from_integer(n)
    }

    fn ascending(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn path_of_five_with_delta_two() {
        let p = FiniteMetricSpace::path(5);
        let net = max_separated_net(&p, int(2), &ascending(5), false).unwrap();
        assert_eq!(net.points, vec![0, 2, 4]);
        assert_eq!(net.projection, vec![0, 0, 2, 2, 4]);
        net.verify(&p).unwrap();
    }

    #[test]
    fn large_delta_gives_one_point() {
        let c = FiniteMetricSpace::cycle(9);
        let net = max_separated_net(&c, int(10), &ascending(9), false).unwrap();
        assert_eq!(net.points, vec![0]);
        net.verify(&c).unwrap();
    }

    #[test]
    fn delta_one_keeps_everything_equivariantly() {
        let c = FiniteMetricSpace::cycle(10);
        let net = max_separated_net(&c, int(1), &ascending(10), true).unwrap();
        assert_eq!(net.points.len(), 10);
        assert_eq!(net.projection, ascending(10));
    }

    #[test]
    fn equivariant_net_infeasible_when_orbits_are_dense() {
        let c = FiniteMetricSpace::cycle(10);
        let err = max_separated_net(&c, int(2), &ascending(10), true).unwrap_err();
        assert!(matches!(err, MetricError::Infeasible(_)));
    }

    #[test]
    fn rejects_nonpositive_delta() {
        let p = FiniteMetricSpace::path(3);
        assert!(matches!(
            max_separated_net(&p, int(0), &ascending(3), false),
            Err(MetricError::InvalidDelta)
        ));
    }

    #[test]
    fn reversed_order_changes_net() {
        let p = FiniteMetricSpace::path(4);
        let net = max_separated_net(&p, int(2), &[3, 2, 1, 0], false).unwrap();
        assert_eq!(net.points, vec![3, 1]);
        net.verify(&p).unwrap();
    }
}
