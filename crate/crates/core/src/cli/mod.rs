//! The `coarsebox` command line: argument parsing, merging flags over a
//! config file, running the suites, and writing reports.
//!
//! Exit status is 0 when every check passes, 2 when a check fails, and 1
//! for bad arguments, bad configuration, or exceeded caps.

mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

pub use config::{CoversConfig, ExpandersConfig, FunctorsConfig, ModulesConfig, RipsConfig, RunConfig};

use crate::expanders::{write_family_csv, FamilySummary};
use crate::groups::FiniteGroup;
use crate::suites::{self, named_group, ModulesSuiteSize, SuiteError, SuiteReport, TowerSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Parser)]
#[command(
    name = "coarsebox",
    version,
    about = "Verification reports for metric covers, Rips complexes, controlled modules and expanders"
)]
pub struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the JSON report here (atomically) instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Faithfulness profile of a quotient tower.
    Covers {
        /// `z` or `sl2`.
        #[arg(long, visible_alias = "tower")]
        group: Option<String>,
        /// Comma-separated moduli (for `z`) or primes (for `sl2`).
        #[arg(long, value_delimiter = ',')]
        stages: Option<Vec<u64>>,
        /// Radius of the truncated total space.
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        kernel_search: Option<u32>,
    },
    /// Rips 1-skeleton transfer for `Z -> Z/n`.
    Rips {
        #[arg(long, value_delimiter = ',')]
        moduli: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        scales: Option<Vec<u32>>,
        #[arg(long)]
        dimension_cap: Option<usize>,
    },
    /// Girth, diameter and second eigenvalue of the Margulis graphs.
    Expanders {
        /// Largest prime of the family.
        #[arg(long)]
        pmax: Option<u64>,
        /// Also write one CSV row per prime here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Functor verification suites.
    Functors {
        /// `group-ring`, `descent`, `induction`, `vset`, `nets` or `all`.
        #[arg(long)]
        demo: Option<String>,
        /// Run the group-indexed demos on this group only (`Z4`, `S3`, `D4`, ...).
        #[arg(long)]
        group: Option<String>,
    },
    /// Property suite of the controlled module category.
    Modules {
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        instances: Option<usize>,
    },
}

/// Which suite family a run executes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Covers,
    Rips,
    Expanders,
    Functors,
    Modules,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Task,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl Cli {
    /// Defaults, then the config file, then the environment, then flags.
    pub fn resolve(self) -> Result<(Task, RunConfig), CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        cfg.apply_env()?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        let task = match self.command {
            Command::Covers {
                group,
                stages,
                depth,
                kernel_search,
            } => {
                set(&mut cfg.covers.group, group);
                set(&mut cfg.covers.stages, stages);
                set(&mut cfg.covers.kernel_search, kernel_search);
                if depth.is_some() {
                    cfg.covers.depth = depth;
                }
                Task::Covers
            }
            Command::Rips {
                moduli,
                scales,
                dimension_cap,
            } => {
                set(&mut cfg.rips.moduli, moduli);
                set(&mut cfg.rips.scales, scales);
                set(&mut cfg.rips.dimension_cap, dimension_cap);
                Task::Rips
            }
            Command::Expanders { pmax, csv } => {
                set(&mut cfg.expanders.pmax, pmax);
                if csv.is_some() {
                    cfg.expanders.csv = csv;
                }
                Task::Expanders
            }
            Command::Functors { demo, group } => {
                set(&mut cfg.functors.demo, demo);
                if group.is_some() {
                    cfg.functors.group = group;
                }
                Task::Functors
            }
            Command::Modules { pairs, instances } => {
                set(&mut cfg.modules.pairs, pairs);
                set(&mut cfg.modules.instances, instances);
                Task::Modules
            }
        };
        cfg.validate()?;
        Ok((task, cfg))
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn groups_or(config: &FunctorsConfig, defaults: &[&str]) -> Result<Vec<std::sync::Arc<FiniteGroup>>, SuiteError> {
    match &config.group {
        Some(name) => Ok(vec![named_group(name)?]),
        None => defaults.iter().map(|n| named_group(n)).collect(),
    }
}

const GROUP_RING_GROUPS: &[&str] = &["Z2", "Z3", "Z4", "S3"];
const INDUCTION_GROUPS: &[&str] = &["Z4", "S3"];
const VSET_GROUPS: &[&str] = &[
    "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "S3", "D4", "A4", "S4",
];
pub const DEMOS: &[&str] = &["group-ring", "descent", "induction", "vset", "nets"];

fn functor_suites(cfg: &FunctorsConfig, seed: u64) -> Result<Vec<SuiteReport>, SuiteError> {
    let demos: Vec<&str> = match cfg.demo.as_str() {
        "all" => DEMOS.to_vec(),
        d if DEMOS.contains(&d) => vec![d],
        d => return Err(SuiteError::UnknownDemo(d.to_string())),
    };
    demos
        .into_iter()
        .map(|demo| match demo {
            "group-ring" => suites::group_ring_suite(&groups_or(cfg, GROUP_RING_GROUPS)?, cfg.max_rank, cfg.budget, seed),
            "descent" => suites::descent_suite(&cfg.descent_ks, cfg.descent_pairs, seed),
            "induction" => suites::induction_suite(&groups_or(cfg, INDUCTION_GROUPS)?, cfg.induction_instances, seed),
            "vset" => suites::vset_suite(&groups_or(cfg, VSET_GROUPS)?, cfg.random_sections, seed),
            _ => suites::nets_suite(cfg.net_instances, seed),
        })
        .collect()
}

fn odd_primes_up_to(pmax: u64) -> Vec<u64> {
    (3..=pmax)
        .step_by(2)
        .filter(|&p| (3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .collect()
}

/// Runs one task. Files named in the config (the CSV table) are written
/// here; the JSON report is left to the caller.
pub fn run(task: Task, cfg: &RunConfig) -> Result<RunReport, CliError> {
    let seed = cfg.seed;
    let suites = match task {
        Task::Covers => {
            let spec = TowerSpec {
                group: cfg.covers.group.parse()?,
                stages: cfg.covers.stages.clone(),
                depth: cfg.covers.depth,
                kernel_search: cfg.covers.kernel_search,
            };
            vec![suites::covers_suite(&spec, &cfg.caps)?]
        }
        Task::Rips => vec![suites::rips_suite(
            &cfg.rips.moduli,
            &cfg.rips.scales,
            cfg.rips.dimension_cap,
            &cfg.caps,
        )?],
        Task::Expanders => {
            let primes = odd_primes_up_to(cfg.expanders.pmax);
            let report = suites::expanders_suite(&primes, cfg.expanders.max_prime, seed)?;
            if let Some(path) = &cfg.expanders.csv {
                let summary: FamilySummary = serde_json::from_value(report.data.clone()).expect("suite data is a family summary");
                let mut buf = Vec::new();
                write_family_csv(&summary, &mut buf).map_err(SuiteError::from)?;
                write_atomic(path, &buf)?;
            }
            vec![report]
        }
        Task::Functors => functor_suites(&cfg.functors, seed)?,
        Task::Modules => vec![suites::modules_suite(
            ModulesSuiteSize {
                pairs: cfg.modules.pairs,
                instances: cfg.modules.instances,
            },
            cfg.caps.level_window,
            seed,
        )?],
    };
    Ok(RunReport {
        command: task,
        seed,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

/// Pretty JSON with a trailing newline; identical inputs give identical
/// bytes.
pub fn report_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Parses arguments, runs, writes the report, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let outcome = cli.resolve().and_then(|(task, cfg)| {
        let report = run(task, &cfg)?;
        let json = report_json(&report);
        match &cfg.out {
            Some(path) => write_atomic(path, json.as_bytes())?,
            None => print!("{json}"),
        }
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            for suite in &report.suites {
                for c in &suite.checks {
                    eprintln!(
                        "{} {}: {} ({} cases, {} failures)",
                        if c.passed { "PASS" } else { "FAIL" },
                        suite.suite,
                        c.check,
                        c.cases,
                        c.failures
                    );
                }
            }
            if report.passed {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(args: &[&str]) -> Result<(Task, RunConfig), CliError> {
        Cli::try_parse_from(args).map_err(|e| CliError::Config(e.to_string()))?.resolve()
    }

    #[test]
    fn flags_override_defaults() {
        let (task, cfg) = resolve(&["coarsebox", "covers", "--group", "Z", "--stages", "4,8", "--seed", "9"]).unwrap();
        assert_eq!(task, Task::Covers);
        assert_eq!(cfg.covers.stages, vec![4, 8]);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn malformed_stage_list_is_a_parse_error() {
        assert!(Cli::try_parse_from(["coarsebox", "covers", "--stages", "4,x"]).is_err());
        assert_eq!(main_with_args(["coarsebox", "covers", "--stages", "4,,8"]), 1);
    }

    #[test]
    fn unknown_config_field_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"seed": 1, "colour": "red"}"#).unwrap();
        assert!(matches!(RunConfig::from_file(&path), Err(CliError::Config(_))));
        std::fs::write(&path, r#"{"seed": 1, "covers": {"stages": [4, 8]}}"#).unwrap();
        assert_eq!(RunConfig::from_file(&path).unwrap().covers.stages, vec![4, 8]);
    }

    #[test]
    fn primes() {
        assert_eq!(odd_primes_up_to(13), vec![3, 5, 7, 11, 13]);
        assert_eq!(odd_primes_up_to(3), vec![3]);
    }

    #[test]
    fn unknown_demo_is_an_error() {
        let (task, cfg) = resolve(&["coarsebox", "functors", "--demo", "nope"]).unwrap();
        assert!(matches!(run(task, &cfg), Err(CliError::Suite(SuiteError::UnknownDemo(_)))));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
    }
}
