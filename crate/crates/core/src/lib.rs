//! Finite-scale tools for coarse geometry of residually finite groups:
//! word-metric quotient towers, box spaces, metric covers, Rips complexes,
//! controlled categories of geometric modules, and expander diagnostics.

pub mod caps;
pub mod cli;
pub mod covers;
pub mod expanders;
pub mod functors;
pub mod groups;
pub mod metric;
pub mod modules;
pub mod rips;
pub mod sample;
pub mod suites;
