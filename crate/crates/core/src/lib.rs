//! Exact enumeration and counting of rooted labeled forests.
//!
//! A forest on roots η and vertices γ assigns every vertex a parent in η ∪ γ
//! so that every vertex reaches a root. The crate provides
//!
//! * [`enumerate`]: two independent forest generators (a parent-map filter
//!   used as the oracle, and root peeling),
//! * [`kernel`]: the memoized forest-sum kernel `Q_{h,ν}(η | γ)`,
//! * [`count`]: closed-form and recursive counts `N(m|n) = m(n+m)^{n−1}`,
//! * [`cli`]: the `forest-kernel` command line surface.

pub mod cli;
pub mod corpus;
pub mod count;
pub mod enumerate;
pub mod error;
pub mod kernel;
pub mod model;

pub use error::{Error, Result};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 9;
pub const DEFAULT_KERNEL_LIMIT: usize = 14;
pub const MAX_POINTS_ENV: &str = "FOREST_KERNEL_MAX_POINTS";

/// Size caps on `m + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub enumeration: usize,
    pub kernel: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: DEFAULT_ENUMERATION_LIMIT,
            kernel: DEFAULT_KERNEL_LIMIT,
        }
    }
}

impl Limits {
    /// Defaults, with both caps replaced by `FOREST_KERNEL_MAX_POINTS` when set.
    pub fn from_env() -> Self {
        match std::env::var(MAX_POINTS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(cap) => Limits {
                enumeration: cap,
                kernel: cap,
            },
            None => Limits::default(),
        }
    }
}
