use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::caps::{Caps, MAX_ORDER_ENV};
use crate::expanders::DEFAULT_MAX_PRIME;
use crate::suites::{GroupRingBudget, ModulesSuiteSize, TowerGroup};

/// Everything a run needs besides the subcommand. Any field may be
/// omitted from a config file; unknown fields are rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub caps: Caps,
    pub covers: CoversConfig,
    pub rips: RipsConfig,
    pub expanders: ExpandersConfig,
    pub functors: FunctorsConfig,
    pub modules: ModulesConfig,
    /// Report path; standard output when absent.
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoversConfig {
    /// `z` or `sl2`.
    pub group: String,
    pub stages: Vec<u64>,
    pub depth: Option<u32>,
    pub kernel_search: u32,
}

impl Default for CoversConfig {
    fn default() -> Self {
        Self {
            group: "z".into(),
            stages: vec![4, 8, 12, 16],
            depth: None,
            kernel_search: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RipsConfig {
    pub moduli: Vec<u64>,
    pub scales: Vec<u32>,
    pub dimension_cap: usize,
}

impl Default for RipsConfig {
    fn default() -> Self {
        Self {
            moduli: vec![12, 24],
            scales: vec![1, 2],
            dimension_cap: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpandersConfig {
    /// Every odd prime up to this one.
    pub pmax: u64,
    pub max_prime: u64,
    pub csv: Option<PathBuf>,
}

impl Default for ExpandersConfig {
    fn default() -> Self {
        Self {
            pmax: 13,
            max_prime: DEFAULT_MAX_PRIME,
            csv: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FunctorsConfig {
    /// `group-ring`, `descent`, `induction`, `vset`, `nets` or `all`.
    pub demo: String,
    /// Restricts the group-indexed demos to one group.
    pub group: Option<String>,
    pub max_rank: usize,
    pub budget: GroupRingBudget,
    pub descent_ks: Vec<usize>,
    pub descent_pairs: usize,
    pub induction_instances: usize,
    pub random_sections: usize,
    pub net_instances: usize,
}

impl Default for FunctorsConfig {
    fn default() -> Self {
        Self {
            demo: "all".into(),
            group: None,
            max_rank: 3,
            budget: GroupRingBudget::default(),
            descent_ks: (2..=6).collect(),
            descent_pairs: 200,
            induction_instances: 50,
            random_sections: 5,
            net_instances: 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModulesConfig {
    pub pairs: usize,
    pub instances: usize,
}

impl Default for ModulesConfig {
    fn default() -> Self {
        let s = ModulesSuiteSize::default();
        Self {
            pairs: s.pairs,
            instances: s.instances,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// The order cap from the environment wins over the file.
    pub fn apply_env(&mut self) -> Result<(), CliError> {
        if let Ok(v) = std::env::var(MAX_ORDER_ENV) {
            self.caps.max_quotient_order = v
                .parse()
                .map_err(|_| CliError::Config(format!("{MAX_ORDER_ENV}={v:?} is not a positive integer")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.caps.max_quotient_order == 0 || self.caps.max_simplices == 0 || self.caps.level_window == 0 {
            return bad("caps must be positive");
        }
        if self.covers.stages.is_empty() {
            return bad("the stage list is empty");
        }
        if self.covers.group.parse::<TowerGroup>().is_err() {
            return bad("tower group must be `z` or `sl2`");
        }
        if self.covers.stages.iter().any(|&n| n < 2) {
            return bad("stages must be at least 2");
        }
        if self.rips.moduli.is_empty() || self.rips.scales.is_empty() || self.rips.scales.contains(&0) {
            return bad("rips needs nonempty moduli and positive scales");
        }
        if self.rips.dimension_cap == 0 {
            return bad("dimension cap must be positive");
        }
        if self.expanders.pmax < 3 {
            return bad("pmax must be at least 3");
        }
        if self.expanders.pmax > self.expanders.max_prime {
            return Err(CliError::Config(format!(
                "pmax {} exceeds the prime cap {}",
                self.expanders.pmax, self.expanders.max_prime
            )));
        }
        if self.functors.max_rank == 0 || self.functors.descent_ks.iter().any(|&k| k < 2) {
            return bad("ranks must be positive and descent stages at least 2");
        }
        Ok(())
    }
}
