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

//! Weakly typical subspaces on eigenvalue surprisal.
//!
//! For a product state `ρ_1 ⊗ ⋯ ⊗ ρ_n` with eigenpairs `(λ^{(k)}_x, v^{(k)}_x)`
//! the typical subspace is spanned by the product eigenvectors
//! `v^{(1)}_{x_1} ⊗ ⋯ ⊗ v^{(n)}_{x_n}` whose surprisal
//! `-(1/n) Σ_k log₂ λ^{(k)}_{x_k}` lies within `δ` of the target entropy
//! rate. It is stored as the list of selected index sequences; the product
//! basis is only expanded when vectors or a dense projector are requested.

use serde::{Deserialize, Serialize};

use super::decoder::SubspaceBasis;
use super::{Codebook, CqChannel};
use crate::config::ResourceCaps;
use crate::numkernel::{vector, ComplexMatrix, EigenDecomposition, C64};
use crate::qstate::{shannon_entropy, DensityOperator, Projector};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypicalSpec {
    pub n: usize,
    pub delta: f64,
}

impl TypicalSpec {
    pub fn new(n: usize, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("TypicalSpec: n >= 1"));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::validation("TypicalSpec: delta > 0"));
        }
        Ok(TypicalSpec { n, delta })
    }
}

#[derive(Clone, Debug)]
pub struct TypicalSubspace {
    d: usize,
    factors: Vec<EigenDecomposition>,
    sequences: Vec<Vec<usize>>,
    weights: Vec<f64>,
    center: f64,
    delta: f64,
}

/// `d^n` or a resource error.
pub(crate) fn product_dim(d: usize, n: usize, caps: &ResourceCaps) -> Result<usize> {
    let dim = u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .ok_or_else(|| Error::Resource(format!("output space {d}^{n} overflows")))?;
    caps.check_dim(dim, &format!("the n = {n} output space ({d}^{n})"))?;
    Ok(dim)
}

impl TypicalSubspace {
    fn select(
        factors: Vec<EigenDecomposition>,
        center: f64,
        delta: f64,
        caps: &ResourceCaps,
    ) -> Result<Self> {
        let n = factors.len();
        let d = factors[0].dim();
        let total = product_dim(d, n, caps)?;
        let surprisal: Vec<Vec<f64>> = factors
            .iter()
            .map(|f| {
                f.eigenvalues
                    .iter()
                    .map(|&l| if l > 0.0 { -l.log2() } else { f64::INFINITY })
                    .collect()
            })
            .collect();
        let mut sequences = Vec::new();
        let mut weights = Vec::new();
        let mut x = vec![0usize; n];
        for _ in 0..total {
            let s: f64 = x.iter().enumerate().map(|(k, &i)| surprisal[k][i]).sum();
            if s.is_finite() && (s / n as f64 - center).abs() <= delta {
                weights.push(
                    x.iter()
                        .enumerate()
                        .map(|(k, &i)| factors[k].eigenvalues[i])
                        .product(),
                );
                sequences.push(x.clone());
            }
            // Odometer with the first position most significant, matching
            // the Kronecker ordering.
            for k in (0..n).rev() {
                x[k] += 1;
                if x[k] < d {
                    break;
                }
                x[k] = 0;
            }
        }
        Ok(TypicalSubspace {
            d,
            factors,
            sequences,
            weights,
            center,
            delta,
        })
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    /// `d^n`.
    pub fn dim(&self) -> usize {
        self.d.pow(self.n() as u32)
    }

    pub fn rank(&self) -> usize {
        self.sequences.len()
    }

    /// Entropy rate the window is centred on.
    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Selected eigen-index sequences.
    pub fn sequences(&self) -> &[Vec<usize>] {
        &self.sequences
    }

    /// Eigenvalue of the reference product state on each selected vector.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `tr(Pρ)` for the reference product state `ρ`.
    pub fn captured_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Largest eigenvalue of `PρP`, zero for an empty subspace.
    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<C64> {
        self.sequences[i]
            .iter()
            .enumerate()
            .fold(vec![C64::new(1.0, 0.0)], |acc, (k, &x)| {
                vector::kron(&acc, &self.factors[k].vector(x))
            })
    }

    pub fn basis(&self) -> SubspaceBasis {
        SubspaceBasis::new(self.dim(), (0..self.rank()).map(|i| self.basis_vector(i)).collect())
    }

    /// Dense `d^n × d^n` projector.
    pub fn projector(&self) -> Projector {
        let cols: Vec<Vec<C64>> = (0..self.rank()).map(|i| self.basis_vector(i)).collect();
        Projector::from_parts(ComplexMatrix::projector_onto(self.dim(), &cols), self.rank())
    }
}

/// Typical subspace of `σ^{⊗n}`, centred on `S(σ)`.
pub fn typical_subspace(
    sigma: &DensityOperator,
    spec: &TypicalSpec,
    caps: &ResourceCaps,
) -> Result<TypicalSubspace> {
    let eig = sigma.spectrum()?;
    let center = shannon_entropy(&eig.eigenvalues);
    TypicalSubspace::select(vec![eig; spec.n], center, spec.delta, caps)
}

pub fn typical_projector(
    sigma: &DensityOperator,
    spec: &TypicalSpec,
    caps: &ResourceCaps,
) -> Result<Projector> {
    Ok(typical_subspace(sigma, spec, caps)?.projector())
}

/// Conditionally typical subspace of `σ_c`, centred on `(1/n) Σ_k S(σ_{c_k})`.
pub fn conditional_typical_subspace(
    ch: &CqChannel,
    codeword: &[usize],
    spec: &TypicalSpec,
    caps: &ResourceCaps,
) -> Result<TypicalSubspace> {
    if codeword.len() != spec.n {
        return Err(Error::validation(format!(
            "codeword length {} differs from n = {}",
            codeword.len(),
            spec.n
        )));
    }
    if let Some(&s) = codeword.iter().find(|&&s| s >= ch.alphabet_size()) {
        return Err(Error::validation(format!(
            "codeword symbol {s} outside alphabet of size {}",
            ch.alphabet_size()
        )));
    }
    let entropies = ch.output_entropies();
    let center = codeword.iter().map(|&s| entropies[s]).sum::<f64>() / spec.n as f64;
    let factors = codeword.iter().map(|&s| ch.spectrum(s).clone()).collect();
    TypicalSubspace::select(factors, center, spec.delta, caps)
}

pub fn conditional_typical_projector(
    ch: &CqChannel,
    codeword: &[usize],
    spec: &TypicalSpec,
    caps: &ResourceCaps,
) -> Result<Projector> {
    Ok(conditional_typical_subspace(ch, codeword, spec, caps)?.projector())
}

/// The four typicality properties measured on one codebook.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TypicalityAudit {
    pub n: usize,
    pub delta: f64,
    /// `S(σ)` of the average output.
    pub entropy: f64,
    /// `Σ_j p_j S(σ_j)`.
    pub conditional_entropy: f64,
    pub typical_rank: usize,
    /// `tr(P σ^{⊗n})`.
    pub typical_weight: f64,
    /// `tr(P_c σ_c)` per codeword.
    pub codeword_weights: Vec<f64>,
    pub codeword_ranks: Vec<usize>,
    /// Smallest ε with `tr(Pσ^{⊗n}) >= 1 - ε` and every `tr(P_cσ_c) >= 1 - ε`.
    pub measured_eps: f64,
    pub property1: bool,
    pub property2: bool,
    /// `2^{n[Σ p_j S(σ_j) + δ]}`.
    pub property3_bound: f64,
    pub property3: bool,
    /// Per-codeword `rank(P_c) <= 2^{Σ_k S(σ_{c_k}) + nδ}`.
    pub property3_per_codeword: bool,
    /// Largest eigenvalue of `P σ^{⊗n} P`.
    pub property4_max_eigenvalue: f64,
    /// `2^{-n[S(σ) - δ]}`.
    pub property4_bound: f64,
    pub property4: bool,
    /// `rank(P) <= 2^{n[S(σ) + δ]}`.
    pub typical_rank_bound: f64,
    pub typical_rank_holds: bool,
}

impl TypicalityAudit {
    pub fn from_subspaces(
        ch: &CqChannel,
        spec: &TypicalSpec,
        typical: &TypicalSubspace,
        conditional: &[TypicalSubspace],
    ) -> Self {
        let n = spec.n as f64;
        let entropy = typical.center();
        let conditional_entropy = ch.conditional_entropy();
        let typical_weight = typical.captured_weight();
        let codeword_weights: Vec<f64> = conditional.iter().map(|c| c.captured_weight()).collect();
        let codeword_ranks: Vec<usize> = conditional.iter().map(|c| c.rank()).collect();
        let eps1 = 1.0 - typical_weight;
        let eps2 = codeword_weights.iter().map(|w| 1.0 - w).fold(f64::NEG_INFINITY, f64::max);
        let measured_eps = eps1.max(eps2).clamp(0.0, 1.0);
        let property3_bound = (n * (conditional_entropy + spec.delta)).exp2();
        let property4_bound = (-n * (entropy - spec.delta)).exp2();
        let typical_rank_bound = (n * (entropy + spec.delta)).exp2();
        TypicalityAudit {
            n: spec.n,
            delta: spec.delta,
            entropy,
            conditional_entropy,
            typical_rank: typical.rank(),
            typical_weight,
            property1: typical_weight >= 1.0 - measured_eps,
            property2: codeword_weights.iter().all(|&w| w >= 1.0 - measured_eps),
            property3: codeword_ranks.iter().all(|&r| r as f64 <= property3_bound),
            property3_bound,
            property3_per_codeword: conditional
                .iter()
                .all(|c| c.rank() as f64 <= (n * (c.center() + spec.delta)).exp2()),
            property4_max_eigenvalue: typical.max_weight(),
            property4: typical.weights().iter().all(|&w| w <= property4_bound),
            property4_bound,
            typical_rank_holds: typical.rank() as f64 <= typical_rank_bound,
            typical_rank_bound,
            codeword_weights,
            codeword_ranks,
            measured_eps,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.property1 && self.property2 && self.property3 && self.property4
    }
}

pub fn typicality_audit(
    ch: &CqChannel,
    spec: &TypicalSpec,
    codebook: &Codebook,
    caps: &ResourceCaps,
) -> Result<TypicalityAudit> {
    let typical = typical_subspace(&ch.average_state()?, spec, caps)?;
    let conditional = codebook
        .entries
        .iter()
        .map(|c| conditional_typical_subspace(ch, c, spec, caps))
        .collect::<Result<Vec<_>>>()?;
    Ok(TypicalityAudit::from_subspaces(ch, spec, &typical, &conditional))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::c64;
    use crate::qstate::PureState;

    fn caps() -> ResourceCaps {
        ResourceCaps::default()
    }

    #[test]
    fn uniform_spectrum_gives_identity() {
        let sigma = DensityOperator::maximally_mixed(2);
        for delta in [0.01, 0.3] {
            let t = typical_subspace(&sigma, &TypicalSpec::new(4, delta).unwrap(), &caps()).unwrap();
            assert_eq!(t.rank(), 16);
            assert!((t.captured_weight() - 1.0).abs() < 1e-12);
            assert!(t.projector().matrix().max_abs_diff(&ComplexMatrix::identity(16)) < 1e-12);
        }
    }

    #[test]
    fn pure_state_gives_rank_one() {
        let v = PureState::normalized(&[c64(1.0, 0.0), c64(0.0, 1.0)]).unwrap();
        let t = typical_subspace(&v.density(), &TypicalSpec::new(3, 0.1).unwrap(), &caps()).unwrap();
        assert_eq!(t.rank(), 1);
        let b = t.basis_vector(0);
        let target = vector::kron(&vector::kron(v.amplitudes(), v.amplitudes()), v.amplitudes());
        assert!((vector::inner(&b, &target).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enumeration_oracle_small_cases() {
        let sigma = DensityOperator::from_diag(&[0.9, 0.1]).unwrap();
        let s = -(0.9f64 * 0.9f64.log2() + 0.1 * 0.1f64.log2());
        for (n, delta) in [(5, 0.3), (5, 0.35), (6, 0.2), (7, 0.5)] {
            let t = typical_subspace(&sigma, &TypicalSpec::new(n, delta).unwrap(), &caps()).unwrap();
            let mut count = 0;
            let mut weight = 0.0;
            for bits in 0u32..(1 << n) {
                let k = bits.count_ones() as f64;
                let sur = ((n as f64 - k) * -(0.9f64.log2()) + k * -(0.1f64.log2())) / n as f64;
                if (sur - s).abs() <= delta {
                    count += 1;
                    weight += 0.9f64.powf(n as f64 - k) * 0.1f64.powf(k);
                }
            }
            assert_eq!(t.rank(), count, "n={n} delta={delta}");
            assert!((t.captured_weight() - weight).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_outputs_reduce_to_typical() {
        let s = DensityOperator::from_diag(&[0.7, 0.3]).unwrap();
        let ch = CqChannel::new(vec![0.4, 0.6], vec![s.clone(), s.clone()]).unwrap();
        let spec = TypicalSpec::new(5, 0.2).unwrap();
        let a = conditional_typical_projector(&ch, &[0, 1, 1, 0, 1], &spec, &caps()).unwrap();
        let b = typical_projector(&s, &spec, &caps()).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn resource_cap_is_enforced() {
        let sigma = DensityOperator::maximally_mixed(2);
        let small = ResourceCaps {
            max_dim: 64,
            ..ResourceCaps::default()
        };
        let err = typical_subspace(&sigma, &TypicalSpec::new(7, 0.1).unwrap(), &small).unwrap_err();
        assert!(matches!(err, Error::Resource(msg) if msg.contains("128")));
    }

    #[test]
    fn spec_validation() {
        assert!(TypicalSpec::new(0, 0.1).is_err());
        assert!(TypicalSpec::new(3, 0.0).is_err());
    }
}
