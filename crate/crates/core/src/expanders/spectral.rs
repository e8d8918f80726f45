use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ExpanderError;
use crate::metric::FiniteMetricSpace;

/// Residual tolerance for eigenvalue convergence.
pub const EIGEN_TOLERANCE: f64 = 1e-8;
const MAX_KRYLOV: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenEstimate {
    pub value: f64,
    /// Norm of the Ritz residual; an exact eigenvalue lies this close.
    pub error_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

struct Adjacency<'a> {
    graph: &'a FiniteMetricSpace,
}

impl Adjacency<'_> {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (u, out) in y.iter_mut().enumerate() {
            *out = self.graph.neighbors(u).expect("graph metric").iter().map(|&w| x[w as usize]).sum();
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    // twice, for numerical orthogonality
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// Largest eigenpair of the adjacency operator restricted to the
/// orthogonal complement of `deflate`, by Lanczos with full
/// reorthogonalization.
fn top_eigenpair(op: &Adjacency, deflate: &[Vec<f64>], rng: &mut ChaCha8Rng) -> (EigenEstimate, Vec<f64>) {
    let n = op.graph.len();
    let room = n - deflate.len();
    let mut start: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    project_out(&mut start, deflate);
    normalize(&mut start);
    let mut basis: Vec<Vec<f64>> = vec![start];
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    let mut w = vec![0.0; n];
    let mut best = (
        EigenEstimate {
            value: f64::NAN,
            error_bound: f64::INFINITY,
            iterations: 0,
            converged: false,
        },
        Vec::new(),
    );
    for k in 0..room.min(MAX_KRYLOV) {
        op.apply(&basis[k], &mut w);
        let alpha = dot(&w, &basis[k]);
        alphas.push(alpha);
        project_out(&mut w, deflate);
        project_out(&mut w, &basis);
        let beta = normalize(&mut w);
        let m = alphas.len();
        let breakdown = beta < 1e-12 || m == room;
        if m % 5 == 0 || breakdown || m == MAX_KRYLOV {
            let mut t = DMatrix::<f64>::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alphas[i];
                if i + 1 < m {
                    t[(i, i + 1)] = betas[i];
                    t[(i + 1, i)] = betas[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let (i, &value) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("nonempty");
            let s = eig.eigenvectors.column(i);
            let residual = if breakdown { 0.0 } else { (beta * s[m - 1]).abs() };
            let converged = residual < EIGEN_TOLERANCE;
            if converged || breakdown || m == MAX_KRYLOV || m == room {
                let mut ritz = vec![0.0; n];
                for (j, v) in basis.iter().enumerate() {
                    ritz.iter_mut().zip(v).for_each(|(r, x)| *r += s[j] * x);
                }
                best = (
                    EigenEstimate {
                        value,
                        error_bound: residual,
                        iterations: m,
                        converged,
                    },
                    ritz,
                );
                break;
            }
        }
        betas.push(beta);
        basis.push(w.clone());
    }
    best
}

/// Second largest adjacency eigenvalue of a connected graph.
///
/// Regular graphs are deflated by the constant vector; otherwise the top
/// eigenvector is computed first and deflated. The start vector is drawn
/// from a generator seeded with `seed`.
pub fn second_eigenvalue(graph: &FiniteMetricSpace, seed: u64) -> Result<EigenEstimate, ExpanderError> {
    if !graph.is_graph() {
        return Err(ExpanderError::NotGraph);
    }
    let n = graph.len();
    if n < 2 {
        return Err(ExpanderError::Disconnected);
    }
    let op = Adjacency { graph };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degree = graph.neighbors(0).expect("graph metric").len();
    let regular = (0..n).all(|x| graph.neighbors(x).expect("graph metric").len() == degree);
    let (top, first_error) = if regular {
        (vec![1.0 / (n as f64).sqrt(); n], 0.0)
    } else {
        let (est, mut v) = top_eigenpair(&op, &[], &mut rng);
        normalize(&mut v);
        (v, est.error_bound)
    };
    let (mut est, _) = top_eigenpair(&op, &[top], &mut rng);
    est.error_bound += first_error;
    Ok(est)
}
