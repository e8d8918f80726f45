//! The Margulis Cayley graphs of `SL2(F_p)` on `A = (1 2; 0 1)` and
//! `B = (1 0; 2 1)`, with girth, diameter and second-eigenvalue reports.

mod girth;
mod spectral;

use std::io::Write;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use girth::{girth, relator_girth};
pub use spectral::{second_eigenvalue, EigenEstimate, EIGEN_TOLERANCE};

use crate::groups::{EnumeratedGroup, FinGenGroup, GroupElement, GroupError, GroupKind};
use crate::metric::{FiniteMetricSpace, MetricError};

/// Largest prime accepted by default (`|Γ_31| = 29760`).
pub const DEFAULT_MAX_PRIME: u64 = 31;

#[derive(Debug, Error)]
pub enum ExpanderError {
    #[error("p = 2 makes both generators trivial")]
    Degenerate,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} exceeds the cap {cap}")]
    AboveCap { p: u64, cap: u64 },
    #[error("graph is not a graph metric")]
    NotGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `SL2(F_p)` generated by the reductions of `A` and `B`.
pub fn margulis_group(p: u64) -> Result<FinGenGroup, ExpanderError> {
    if p == 2 {
        return Err(ExpanderError::Degenerate);
    }
    if !is_prime(p) {
        return Err(ExpanderError::NotPrime(p));
    }
    let generators = [GroupElement::matrix([[1, 2], [0, 1]]), GroupElement::matrix([[1, 0], [2, 1]])]
        .iter()
        .map(|g| crate::groups::reduce_mod(g, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FinGenGroup::new(GroupKind::ModularMatrix { dim: 2, modulus: p }, generators)?)
}

/// `Γ_p` with the default prime cap.
pub fn margulis_graph(p: u64) -> Result<FiniteMetricSpace, ExpanderError> {
    margulis_graph_capped(p, DEFAULT_MAX_PRIME)
}

/// `Γ_p = Cay(SL2(F_p), {A, A⁻¹, B, B⁻¹})` for an odd prime `p ≤ max_prime`.
pub fn margulis_graph_capped(p: u64, max_prime: u64) -> Result<FiniteMetricSpace, ExpanderError> {
    let group = margulis_group(p)?;
    if p > max_prime {
        return Err(ExpanderError::AboveCap { p, cap: max_prime });
    }
    let order = (p * (p * p - 1)) as usize;
    let enumerated = EnumeratedGroup::enumerate(group, order + 1)?;
    Ok(FiniteMetricSpace::cayley_graph(&enumerated)?)
}

/// Exact invariants and the second adjacency eigenvalue of a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphReport {
    pub order: usize,
    /// Maximum degree.
    pub degree: usize,
    pub regular: bool,
    /// `None` for a forest.
    pub girth: Option<u32>,
    pub diameter: u32,
    /// `diameter / girth` as `"a/b"`.
    pub diameter_over_girth: Option<String>,
    pub second_eigenvalue: f64,
    /// Residual bound: some eigenvalue lies within this of the estimate.
    pub eigenvalue_error: f64,
    pub converged: bool,
    pub connected: bool,
}

impl GraphReport {
    pub fn ratio(&self) -> Option<Rational64> {
        self.girth.map(|g| Rational64::new(self.diameter as i64, g as i64))
    }
}

/// Full report for a connected graph metric; the eigenvalue uses a
/// deterministic start vector derived from `seed`.
pub fn spectral_report(graph: &FiniteMetricSpace, seed: u64) -> Result<GraphReport, ExpanderError> {
    if !graph.is_graph() {
        return Err(ExpanderError::NotGraph);
    }
    let n = graph.len();
    let degrees: Vec<usize> = (0..n).map(|x| graph.neighbors(x).map_or(0, <[u32]>::len)).collect();
    let degree = degrees.iter().copied().max().unwrap_or(0);
    let regular = degrees.iter().all(|&d| d == degree);
    let connected = (0..n).all(|y| graph.hops(0, y).is_some());
    if !connected {
        return Err(ExpanderError::Disconnected);
    }
    let diameter = *graph.diameter().numer() as u32;
    let girth = girth(graph)?;
    let estimate = second_eigenvalue(graph, seed)?;
    let report = GraphReport {
        order: n,
        degree,
        regular,
        girth,
        diameter,
        diameter_over_girth: girth.map(|g| Rational64::new(diameter as i64, g as i64).to_string()),
        second_eigenvalue: estimate.value,
        eigenvalue_error: estimate.error_bound,
        converged: estimate.converged,
        connected,
    };
    Ok(report)
}

/// Least-squares line `girth ≈ slope · ln(order) + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GirthFit {
    pub slope: f64,
    pub intercept: f64,
    /// Slope of the asymptotic lower estimate, for comparison only.
    pub reference_slope: f64,
}

/// One prime of the family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MargulisRow {
    pub p: u64,
    #[serde(flatten)]
    pub report: GraphReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub rows: Vec<MargulisRow>,
    pub girth_nondecreasing: bool,
    /// Largest diameter-by-girth ratio over the family, as `"a/b"`.
    pub max_ratio: Option<String>,
    pub fit: Option<GirthFit>,
}

/// Reports for each prime, with monotonicity of girth and the fit.
pub fn margulis_family(primes: &[u64], max_prime: u64, seed: u64) -> Result<FamilySummary, ExpanderError> {
    let rows = primes
        .iter()
        .map(|&p| {
            let graph = margulis_graph_capped(p, max_prime)?;
            Ok(MargulisRow {
                p,
                report: spectral_report(&graph, seed)?,
            })
        })
        .collect::<Result<Vec<_>, ExpanderError>>()?;
    let girths: Vec<Option<u32>> = rows.iter().map(|r| r.report.girth).collect();
    let girth_nondecreasing = girths.windows(2).all(|w| w[0] <= w[1] || w[1].is_none());
    let max_ratio = rows.iter().filter_map(|r| r.report.ratio()).max().map(|r| r.to_string());
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.report.girth.map(|g| ((r.report.order as f64).ln(), g as f64)))
        .collect();
    Ok(FamilySummary {
        rows,
        girth_nondecreasing,
        max_ratio,
        fit: fit_line(&points),
    })
}

fn fit_line(points: &[(f64, f64)]) -> Option<GirthFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = points.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = points.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(GirthFit {
        slope,
        intercept: my - slope * mx,
        reference_slope: 0.756,
    })
}

/// One CSV row per prime: `p, order, girth, diameter, ratio, lambda2`.
pub fn write_family_csv<W: Write>(summary: &FamilySummary, out: W) -> Result<(), ExpanderError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "order", "girth", "diameter", "ratio", "lambda2"])?;
    for row in &summary.rows {
        let r = &row.report;
        w.write_record([
            row.p.to_string(),
            r.order.to_string(),
            r.girth.map_or_else(|| "inf".to_string(), |g| g.to_string()),
            r.diameter.to_string(),
            r.diameter_over_girth.clone().unwrap_or_default(),
            format!("{:.10}", r.second_eigenvalue),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `Γ_p` as an `Arc`, for callers building modules over it.
pub fn margulis_space(p: u64) -> Result<Arc<FiniteMetricSpace>, ExpanderError> {
    margulis_graph(p).map(Arc::new)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_have_the_right_order() {
        let g3 = margulis_graph(3).unwrap();
        assert_eq!(g3.len(), 24);
        assert!((0..24).all(|x| g3.neighbors(x).unwrap().len() == 4));
        assert_eq!(margulis_graph(5).unwrap().len(), 120);
    }

    #[test]
    fn bad_primes_rejected() {
        assert!(matches!(margulis_graph(2), Err(ExpanderError::Degenerate)));
        assert!(matches!(margulis_graph(9), Err(ExpanderError::NotPrime(9))));
        assert!(matches!(margulis_graph(37), Err(ExpanderError::AboveCap { p: 37, cap: 31 })));
    }

    #[test]
    fn gamma3_report() {
        let g = margulis_graph(3).unwrap();
        let r = spectral_report(&g, 7).unwrap();
        assert_eq!((r.degree, r.regular, r.connected), (4, true, true));
        assert_eq!(r.girth, Some(3));
        assert!(r.converged);
    }

    #[test]
    fn csv_has_one_row_per_prime() {
        let summary = margulis_family(&[3, 5], DEFAULT_MAX_PRIME, 1).unwrap();
        let mut buf = Vec::new();
        write_family_csv(&summary, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("p,order,girth,diameter,ratio,lambda2"));
        assert!(summary.fit.is_some());
    }

    #[test]
    fn line_fit_recovers_slope() {
        let pts: Vec<(f64, f64)> = (1..5).map(|x| (x as f64, 2.0 * x as f64 + 1.0)).collect();
        let fit = fit_line(&pts).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12 && (fit.intercept - 1.0).abs() < 1e-12);
    }
}
