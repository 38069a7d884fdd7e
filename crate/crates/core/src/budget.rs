//! Size limits that keep computations at desk scale.
//!
//! Defaults can be overridden per call or through the environment:
//! `FROBCOH_MAX_NONZEROS`, `FROBCOH_MAX_HOPF_DIM`, `FROBCOH_MAX_COCHAIN_DIM`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

pub const DEFAULT_MAX_NONZEROS: u64 = 10_000_000;
pub const DEFAULT_MAX_HOPF_DIM: u64 = 4096;
pub const DEFAULT_MAX_COCHAIN_DIM: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Stored nonzeros allowed in a single sparse matrix.
    pub max_nonzeros: u64,
    /// Dimension cap for a constructed Hopf algebra.
    pub max_hopf_dim: u64,
    /// Dimension cap for a single cochain space.
    pub max_cochain_dim: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nonzeros: DEFAULT_MAX_NONZEROS,
            max_hopf_dim: DEFAULT_MAX_HOPF_DIM,
            max_cochain_dim: DEFAULT_MAX_COCHAIN_DIM,
        }
    }
}

impl Budget {
    /// No limits at all; for callers that explicitly opted out.
    pub fn unlimited() -> Self {
        Budget {
            max_nonzeros: u64::MAX,
            max_hopf_dim: u64::MAX,
            max_cochain_dim: u64::MAX,
        }
    }

    /// Defaults, with any `FROBCOH_*` environment overrides applied.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        let read = |key: &str| std::env::var(key).ok().and_then(|v| v.parse::<u64>().ok());
        if let Some(v) = read("FROBCOH_MAX_NONZEROS") {
            b.max_nonzeros = v;
        }
        if let Some(v) = read("FROBCOH_MAX_HOPF_DIM") {
            b.max_hopf_dim = v;
        }
        if let Some(v) = read("FROBCOH_MAX_COCHAIN_DIM") {
            b.max_cochain_dim = v;
        }
        b
    }

    pub fn check_hopf_dim(&self, what: &str, dim: u64) -> Result<()> {
        if dim > self.max_hopf_dim {
            return Err(Error::budget(what, dim, self.max_hopf_dim));
        }
        Ok(())
    }

    pub fn check_cochain_dim(&self, what: &str, dim: u64) -> Result<()> {
        if dim > self.max_cochain_dim {
            return Err(Error::budget(what, dim, self.max_cochain_dim));
        }
        Ok(())
    }

    pub fn check_nonzeros(&self, what: &str, nnz: u64) -> Result<()> {
        if nnz > self.max_nonzeros {
            return Err(Error::budget(what, nnz, self.max_nonzeros));
        }
        Ok(())
    }

    pub fn check_matrix(&self, what: &str, m: &SparseMatrix) -> Result<()> {
        self.check_nonzeros(what, m.nnz() as u64)
    }
}

/// `base^exp`, saturating at `u64::MAX`.
pub fn saturating_pow(base: u64, exp: u32) -> u64 {
    let mut r: u64 = 1;
    for _ in 0..exp {
        r = r.saturating_mul(base);
    }
    r
}
