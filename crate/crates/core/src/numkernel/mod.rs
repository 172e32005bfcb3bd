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

//! Dense complex linear algebra.
//!
//! Everything here is a pure function of its inputs. Matrices are row-major
//! and the Hermitian eigensolver is self-contained (Householder reduction to
//! a real tridiagonal matrix followed by implicit QL), so no LAPACK is needed.

mod eig;
mod matrix;
pub mod vector;

pub use eig::{hermitian_eig, EigenDecomposition};
pub use matrix::{ComplexMatrix, Subsystem};
pub use num_complex::Complex64 as C64;

/// Shorthand for a complex number with the given real and imaginary parts.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
