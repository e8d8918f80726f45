//! Resource caps shared by the enumerating algorithms.

use serde::{Deserialize, Serialize};

/// Environment variable overriding [`Caps::max_quotient_order`].
pub const MAX_ORDER_ENV: &str = "COARSEBOX_MAX_ORDER";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub max_quotient_order: usize,
    pub max_simplices: usize,
    /// Largest admissible N-coordinate of a geometric module.
    pub level_window: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_quotient_order: 10_000_000,
            max_simplices: 10_000_000,
            level_window: 64,
        }
    }
}

impl Caps {
    /// Defaults with the order cap taken from the environment when set.
    pub fn from_env() -> Self {
        let mut caps = Self::default();
        if let Some(v) = std::env::var(MAX_ORDER_ENV).ok().and_then(|s| s.parse().ok()) {
            caps.max_quotient_order = v;
        }
        caps
    }
}
