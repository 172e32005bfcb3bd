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

//! Simulation of sequential two-outcome projective measurements on
//! finite-dimensional quantum states.
//!
//! The crate runs measurement chains `P_1, ..., P_N` on a density operator,
//! extracts the trigonometric (angle) description of pure-state runs, and
//! evaluates the quantum union bounds and related operator inequalities on
//! concrete instances. The [`seqdecode`] module reuses the same machinery for
//! a small classical-quantum channel coding experiment with a sequential
//! decoder and a pretty-good-measurement comparison.
//!
//! Module map:
//!
//! * [`numkernel`]: dense complex matrices, Hermitian eigendecomposition,
//!   Kronecker products, partial traces and trace norms.
//! * [`qstate`]: validated states, projectors and effects, purification,
//!   entropy and seeded random generators.
//! * [`seqchain`]: running a chain and recording probabilities and angles.
//! * [`bounds`]: inequality checkers and randomized violation search.
//! * [`seqdecode`]: typical projectors, codebooks and decoders.
//! * [`harness`]: the command implementations behind the `qubound` binary.

pub mod bounds;
pub mod config;
pub mod error;
pub mod harness;
pub mod numkernel;
pub mod qstate;
pub mod seqchain;
pub mod seqdecode;

pub use config::{ResourceCaps, Tolerances};
pub use error::{Error, Result};
pub use numkernel::{ComplexMatrix, EigenDecomposition, Subsystem, C64};
pub use qstate::{DensityOperator, Effect, Projector, PureState};
