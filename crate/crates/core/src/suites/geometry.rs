use std::str::FromStr;

use num_rational::Rational64;
use serde::Serialize;
use serde_json::json;

use super::{Check, SuiteError, SuiteReport, Tally};
use crate::caps::Caps;
use crate::covers::{check_translative, tower_profile, MetricCoverMap};
use crate::expanders::{margulis_family, margulis_group, relator_girth, second_eigenvalue, EIGEN_TOLERANCE};
use crate::groups::QuotientTower;
use crate::metric::FiniteMetricSpace;
use crate::rips::induced_cover_on_skeleton;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerGroup {
    /// `Z -> Z/n`.
    Z,
    /// `<A, B> -> SL2(F_p)`.
    Sl2,
}

impl FromStr for TowerGroup {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "z" | "integers" => Ok(Self::Z),
            "sl2" | "sl2z" | "sanov" => Ok(Self::Sl2),
            _ => Err(SuiteError::UnknownGroup(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerSpec {
    pub group: TowerGroup,
    pub stages: Vec<u64>,
    /// Radius of the truncated total; `None` picks one per stage.
    pub depth: Option<u32>,
    pub kernel_search: u32,
}

impl TowerSpec {
    fn tower(&self) -> Result<QuotientTower, SuiteError> {
        if self.stages.is_empty() {
            return Err(SuiteError::Invalid("the stage list is empty".into()));
        }
        Ok(match self.group {
            TowerGroup::Z => QuotientTower::integers(&self.stages)?,
            TowerGroup::Sl2 => QuotientTower::sanov(&self.stages)?,
        })
    }
}

/// Faithfulness profile of a tower: verified radii and kernel-girth
/// bounds should not decrease, and each stage's deck group should move
/// points at least the verified radius.
pub fn covers_suite(spec: &TowerSpec, caps: &Caps) -> Result<SuiteReport, SuiteError> {
    let tower = spec.tower()?;
    let cap = caps.max_quotient_order;
    let profile = tower_profile(&tower, spec.depth, spec.kernel_search, cap)?;
    let mut translative = Tally::default();
    for stage in &profile.stages {
        let cover = MetricCoverMap::tower_stage(&tower, stage.stage, stage.truncation_depth, cap)?;
        translative.record(check_translative(&cover, stage.max_radius).is_ok());
    }
    let checks = vec![
        Check::flag("verified radii nondecreasing", profile.radii.nondecreasing),
        Check::flag("kernel-girth bounds nondecreasing", profile.kernel_bounds_nondecreasing),
        translative.check("deck translates by at least the verified radius"),
    ];
    let data = json!({
        "group": spec.group,
        "stages": spec.stages,
        "profile": profile,
    });
    Ok(SuiteReport::new("covers", checks, data))
}

#[derive(Serialize)]
struct TransferRow {
    modulus: u64,
    radius: Rational64,
    scale: u32,
    /// `None` when `R < 3d` and the pair is outside the hypothesis.
    passed: Option<bool>,
    predicted_radius: Option<i64>,
    unlifted_simplices: Option<usize>,
}

/// Rips 1-skeleton transfer for `Z -> Z/n` at each scale `d` with
/// `R >= 3d`, and translativity of the deck group at the certified radius.
pub fn rips_suite(moduli: &[u64], scales: &[u32], dimension_cap: usize, caps: &Caps) -> Result<SuiteReport, SuiteError> {
    if moduli.is_empty() || scales.is_empty() {
        return Err(SuiteError::Invalid("moduli and scales must be nonempty".into()));
    }
    let mut transfer = Tally::default();
    let mut translative = Tally::default();
    let mut rows = Vec::new();
    for &n in moduli {
        let cover = MetricCoverMap::integers_mod(n, caps.max_quotient_order)?.certify();
        let radius = cover.certified_radius().expect("certified");
        translative.record(check_translative(&cover, radius).is_ok());
        for &d in scales {
            let mut row = TransferRow {
                modulus: n,
                radius,
                scale: d,
                passed: None,
                predicted_radius: None,
                unlifted_simplices: None,
            };
            if d > 0 && radius >= Rational64::from_integer(3 * d as i64) {
                let (_, t) = induced_cover_on_skeleton(&cover, d, dimension_cap, caps.max_simplices)?;
                transfer.record(t.passed());
                row.passed = Some(t.passed());
                row.predicted_radius = Some(t.predicted_radius);
                row.unlifted_simplices = Some(t.unlifted_simplices.len());
            }
            rows.push(row);
        }
    }
    let checks = vec![
        transfer.check("skeleton map is a cover at floor(R/d) - 1"),
        translative.check("deck group is R-translative"),
    ];
    Ok(SuiteReport::new("rips", checks, json!({ "transfers": rows })))
}

/// Margulis family report with the girth cross-check and closed-form
/// eigenvalue checks on `K_4` and cycles.
pub fn expanders_suite(primes: &[u64], max_prime: u64, seed: u64) -> Result<SuiteReport, SuiteError> {
    if primes.is_empty() {
        return Err(SuiteError::Invalid("no primes given".into()));
    }
    let summary = margulis_family(primes, max_prime, seed)?;

    let mut oracle = Tally::default();
    for row in summary.rows.iter().filter(|r| r.p <= 7) {
        let bfs = row.report.girth;
        let words = relator_girth(&margulis_group(row.p)?, bfs.unwrap_or(12))?;
        oracle.record(bfs == words);
    }
    let max = summary.rows.iter().filter_map(|r| r.report.ratio()).max();
    let bounded = summary.rows.iter().all(|r| r.report.ratio() <= max);
    let converged = summary.rows.iter().all(|r| r.report.converged);

    let mut spectra = Tally::default();
    let k4 = second_eigenvalue(&FiniteMetricSpace::complete(4), seed)?;
    spectra.record((k4.value + 1.0).abs() <= EIGEN_TOLERANCE);
    for n in [5usize, 10, 17, 40] {
        let est = second_eigenvalue(&FiniteMetricSpace::cycle(n), seed)?;
        let exact = 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
        spectra.record((est.value - exact).abs() <= EIGEN_TOLERANCE);
    }

    let checks = vec![
        oracle.check("breadth-first girth equals shortest relator"),
        Check::flag("girth nondecreasing in p", summary.girth_nondecreasing),
        Check::flag("diameter/girth bounded by the reported maximum", bounded),
        Check::flag("eigenvalue iterations converged", converged),
        spectra.check("closed-form spectra of K4 and cycles"),
    ];
    Ok(SuiteReport::new(
        "expanders",
        checks,
        serde_json::to_value(&summary).expect("serializable"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_tower_profile() {
        let spec = TowerSpec {
            group: TowerGroup::Z,
            stages: vec![4, 8, 12, 16],
            depth: None,
            kernel_search: 64,
        };
        let r = covers_suite(&spec, &Caps::default()).unwrap();
        assert!(r.passed, "{r:?}");
        let radii: Vec<i64> = r.data["profile"]["radii"]["radii"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v[0].as_i64().unwrap())
            .collect();
        assert_eq!(radii, vec![1, 2, 3, 4]);
    }

    #[test]
    fn rips_transfer_small() {
        let r = rips_suite(&[12], &[1, 2], 2, &Caps::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.checks[0].cases, 1);
    }

    #[test]
    fn empty_stage_list_rejected() {
        let spec = TowerSpec {
            group: TowerGroup::Z,
            stages: vec![],
            depth: None,
            kernel_search: 8,
        };
        assert!(matches!(covers_suite(&spec, &Caps::default()), Err(SuiteError::Invalid(_))));
    }
}
