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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A constructor or operation rejected its input. The message names the
    /// violated invariant.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Step `step` (1-based) of a chain had success probability at or below
    /// the floor, so its post-measurement state is undefined.
    /// `partial_probabilities` holds the conditional probabilities of the
    /// steps that did complete.
    #[error("vanishing branch at step {step}: probability {probability:e} <= floor {floor:e}")]
    VanishingBranch {
        step: usize,
        probability: f64,
        floor: f64,
        partial_probabilities: Vec<f64>,
    },

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("eigendecomposition did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
