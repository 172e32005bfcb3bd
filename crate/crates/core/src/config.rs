// Copyright 2026 The qubound Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Numeric policy and resource limits shared by every module.
//!
//! All checkers read their thresholds from here so a single report can state
//! exactly which tolerances it was produced under.

use serde::{Deserialize, Serialize};

/// Gate for Hermiticity, idempotence, unit trace and unit norm checks.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Allowed `max |A - V diag(λ) V†|` after a Hermitian eigendecomposition.
pub const EIG_RECONSTRUCTION_TOL: f64 = 1e-10;
/// A branch whose probability is at or below this is treated as vanished.
pub const PROB_FLOOR: f64 = 1e-12;
/// A bound is violated when its margin is below `-VIOLATION_TOL`.
pub const VIOLATION_TOL: f64 = 1e-9;
/// Tolerance for per-step trigonometric identities and lemma margins.
pub const ANGLE_TOL: f64 = 1e-8;

/// Environment variable overriding [`ResourceCaps::max_dim`].
pub const MAX_DIM_ENV: &str = "QUBOUND_MAX_DIM";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    pub validation: f64,
    pub eig_reconstruction: f64,
    pub prob_floor: f64,
    pub violation: f64,
    pub angle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            validation: VALIDATION_TOL,
            eig_reconstruction: EIG_RECONSTRUCTION_TOL,
            prob_floor: PROB_FLOOR,
            violation: VIOLATION_TOL,
            angle: ANGLE_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResourceCaps {
    /// Largest Hilbert space dimension any dense operator may have.
    pub max_dim: usize,
    /// Largest number of codewords in a codebook.
    pub max_codebook: usize,
}

impl Default for ResourceCaps {
    fn default() -> Self {
        ResourceCaps {
            max_dim: 4096,
            max_codebook: 1 << 16,
        }
    }
}

impl ResourceCaps {
    /// Defaults, with `max_dim` taken from `QUBOUND_MAX_DIM` when it is set
    /// to a positive integer.
    pub fn from_env() -> Self {
        let mut caps = ResourceCaps::default();
        if let Some(dim) = std::env::var(MAX_DIM_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
        {
            caps.max_dim = dim;
        }
        caps
    }

    pub fn check_dim(&self, dim: usize, what: &str) -> crate::Result<()> {
        if dim > self.max_dim {
            return Err(crate::Error::Resource(format!(
                "{what} needs Hilbert dimension {dim}, cap is {}",
                self.max_dim
            )));
        }
        Ok(())
    }
}
