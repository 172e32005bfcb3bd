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

//! Validated quantum objects and the operations the measurement chains need
//! on them.

mod random;

pub use random::{
    complex_gaussian, random_density, random_effect, random_projector, random_psd,
    random_pure_state, random_unitary, stream, zeno_family, RngStream, ZenoFamily,
};

use serde::{Deserialize, Serialize};

use crate::config::VALIDATION_TOL;
use crate::numkernel::{vector, ComplexMatrix, Subsystem, C64};
use crate::{Error, Result};

/// Unit vector in `C^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::validation("PureState: dimension >= 1"));
        }
        let norm = vector::norm(&amplitudes);
        if !norm.is_finite() || (norm - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::validation(format!(
                "PureState: unit norm within {VALIDATION_TOL:e} (norm {norm})"
            )));
        }
        Ok(PureState { amplitudes })
    }

    /// Normalizes `v`; fails for the zero vector.
    pub fn normalized(v: &[C64]) -> Result<Self> {
        vector::normalized(v)
            .map(|amplitudes| PureState { amplitudes })
            .ok_or_else(|| Error::validation("PureState: non-zero vector to normalize"))
    }

    /// Computational basis vector `|k⟩` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::validation(format!("PureState: basis index {k} < {d}")));
        }
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[k] = C64::new(1.0, 0.0);
        Ok(PureState { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        vector::inner(&self.amplitudes, &other.amplitudes).norm()
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }
}

impl TryFrom<Vec<[f64; 2]>> for PureState {
    type Error = Error;

    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        PureState::new(v.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

impl From<PureState> for Vec<[f64; 2]> {
    fn from(s: PureState) -> Self {
        s.amplitudes.iter().map(|z| [z.re, z.im]).collect()
    }
}

/// Positive semidefinite operator of unit trace (or, for the subnormalized
/// variant, trace at most one).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::new_subnormalized(matrix)?;
        let tr = rho.trace();
        if (tr - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::validation(format!(
                "DensityOperator: trace = 1 within {VALIDATION_TOL:e} (trace {tr})"
            )));
        }
        Ok(rho)
    }

    /// Accepts any positive semidefinite operator with `0 < tr ρ <= 1`.
    pub fn new_subnormalized(matrix: ComplexMatrix) -> Result<Self> {
        check_hermitian(&matrix, "DensityOperator")?;
        let matrix = matrix.hermitian_part();
        let min = matrix.min_eigenvalue()?;
        if min < -VALIDATION_TOL {
            return Err(Error::validation(format!(
                "DensityOperator: eigenvalues >= -{VALIDATION_TOL:e} (min {min:e})"
            )));
        }
        let tr = matrix.trace().re;
        if tr > 1.0 + VALIDATION_TOL || tr <= 0.0 {
            return Err(Error::validation(format!(
                "DensityOperator: 0 < trace <= 1 (trace {tr})"
            )));
        }
        Ok(DensityOperator { matrix })
    }

    /// Wraps `matrix` after symmetrizing and rescaling to unit trace. Used on
    /// outputs of operations that preserve positivity by construction.
    pub(crate) fn from_unnormalized(matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr.is_nan() || tr <= 0.0 {
            return Err(Error::validation(format!(
                "DensityOperator: positive trace to normalize (trace {tr})"
            )));
        }
        Ok(DensityOperator {
            matrix: matrix.hermitian_part().scale_real(1.0 / tr),
        })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityOperator {
            matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
        }
    }

    pub fn from_diag(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diag(probs))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Eigenvalues with round-off negatives in `[-1e-9, 0)` clipped to zero.
    pub fn spectrum(&self) -> Result<crate::EigenDecomposition> {
        let mut eig = self.matrix.hermitian_eig()?;
        for l in &mut eig.eigenvalues {
            if *l < 0.0 {
                *l = 0.0;
            }
        }
        Ok(eig)
    }

    /// `tr(M ρ)` for any square `M` of matching dimension.
    pub fn expectation(&self, m: &ComplexMatrix) -> Result<f64> {
        Ok(m.matmul(&self.matrix)?.trace().re)
    }

    /// Returns the state vector when ρ is pure (`tr ρ² = 1` within tolerance).
    pub fn as_pure(&self) -> Option<PureState> {
        let eig = self.spectrum().ok()?;
        let top = eig.max();
        if (top - 1.0).abs() > VALIDATION_TOL {
            return None;
        }
        PureState::normalized(&eig.vector(eig.dim() - 1)).ok()
    }
}

impl TryFrom<ComplexMatrix> for DensityOperator {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        DensityOperator::new_subnormalized(m)
    }
}

impl From<DensityOperator> for ComplexMatrix {
    fn from(r: DensityOperator) -> Self {
        r.matrix
    }
}

/// Orthogonal projector: Hermitian and idempotent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct Projector {
    matrix: ComplexMatrix,
    rank: usize,
}

impl Projector {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        check_hermitian(&matrix, "Projector")?;
        let matrix = matrix.hermitian_part();
        let sq = matrix.matmul(&matrix)?;
        let defect = sq.max_abs_diff(&matrix);
        if defect > VALIDATION_TOL {
            return Err(Error::validation(format!(
                "Projector: |P^2 - P|_max <= {VALIDATION_TOL:e} (defect {defect:e})"
            )));
        }
        let rank = matrix.trace().re.round().max(0.0) as usize;
        Ok(Projector { matrix, rank })
    }

    /// Projector onto the span of orthonormal vectors in `C^dim`.
    pub fn from_orthonormal(dim: usize, basis: &[Vec<C64>]) -> Result<Self> {
        if basis.iter().any(|b| b.len() != dim) {
            return Err(Error::shape("Projector basis vectors must have length dim"));
        }
        Self::new(ComplexMatrix::projector_onto(dim, basis))
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn rank_one(psi: &PureState) -> Self {
        Projector {
            matrix: psi.density().matrix,
            rank: 1,
        }
    }

    pub fn identity(d: usize) -> Self {
        Projector {
            matrix: ComplexMatrix::identity(d),
            rank: d,
        }
    }

    pub fn zero(d: usize) -> Self {
        Projector {
            matrix: ComplexMatrix::zeros(d, d),
            rank: 0,
        }
    }

    /// Trusted constructor for matrices that are projectors by construction.
    pub(crate) fn from_parts(matrix: ComplexMatrix, rank: usize) -> Self {
        Projector { matrix, rank }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `I - P`.
    pub fn complement(&self) -> Projector {
        Projector {
            matrix: &ComplexMatrix::identity(self.dim()) - &self.matrix,
            rank: self.dim() - self.rank,
        }
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        self.matrix.mul_vec(v)
    }

    /// `tr(P ρ)`.
    pub fn probability(&self, rho: &DensityOperator) -> Result<f64> {
        if rho.dim() != self.dim() {
            return Err(Error::shape(format!(
                "projector dimension {} vs state dimension {}",
                self.dim(),
                rho.dim()
            )));
        }
        rho.expectation(&self.matrix)
    }
}

impl TryFrom<ComplexMatrix> for Projector {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Projector::new(m)
    }
}

impl From<Projector> for ComplexMatrix {
    fn from(p: Projector) -> Self {
        p.matrix
    }
}

/// POVM element: Hermitian with spectrum in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct Effect {
    matrix: ComplexMatrix,
}

impl Effect {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        check_hermitian(&matrix, "Effect")?;
        let matrix = matrix.hermitian_part();
        let eig = matrix.hermitian_eig()?;
        if eig.min() < -VALIDATION_TOL || eig.max() > 1.0 + VALIDATION_TOL {
            return Err(Error::validation(format!(
                "Effect: eigenvalues in [0, 1] within {VALIDATION_TOL:e} (range [{}, {}])",
                eig.min(),
                eig.max()
            )));
        }
        Ok(Effect { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `E^m`, computed spectrally.
    pub fn power(&self, m: u32) -> Result<ComplexMatrix> {
        let eig = self.matrix.hermitian_eig()?;
        Ok(eig.map(|l| l.clamp(0.0, 1.0).powi(m as i32)))
    }
}

impl TryFrom<ComplexMatrix> for Effect {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Effect::new(m)
    }
}

impl From<Effect> for ComplexMatrix {
    fn from(e: Effect) -> Self {
        e.matrix
    }
}

fn check_hermitian(m: &ComplexMatrix, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::validation(format!(
            "{what}: square matrix (got {}x{})",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m.hermitian_defect();
    if defect > VALIDATION_TOL {
        return Err(Error::validation(format!(
            "{what}: Hermitian within {VALIDATION_TOL:e} (defect {defect:e})"
        )));
    }
    Ok(())
}

/// Purification `Σ_i √λ_i |i⟩_R |v_i⟩_A` of ρ on `R ⊗ A`, with the reference
/// system as the slow tensor factor and `dim R = dim A`.
pub fn purify(rho: &DensityOperator) -> Result<PureState> {
    let d = rho.dim();
    let eig = rho.spectrum()?;
    let mut psi = vec![C64::new(0.0, 0.0); d * d];
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda == 0.0 {
            continue;
        }
        let w = lambda.sqrt();
        for a in 0..d {
            psi[i * d + a] = eig.eigenvectors[(a, i)] * w;
        }
    }
    PureState::normalized(&psi)
}

/// `I_ref ⊗ P`.
pub fn lift_projector(p: &Projector, ref_dim: usize) -> Projector {
    Projector::from_parts(
        ComplexMatrix::identity(ref_dim).tensor(p.matrix()),
        ref_dim * p.rank(),
    )
}

/// Reduced state on `A` of a pure state on `R ⊗ A` with `dim R = ref_dim`.
pub fn reduce_to_system(psi: &PureState, ref_dim: usize) -> Result<ComplexMatrix> {
    let d = psi.dim() / ref_dim.max(1);
    psi.density().matrix.partial_trace(ref_dim, d, Subsystem::B)
}

/// von Neumann entropy in bits, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    Ok(shannon_entropy(&rho.spectrum()?.eigenvalues))
}

/// `-Σ p log₂ p` over the positive entries.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}
