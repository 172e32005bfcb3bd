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

//! Sequential decoding over a classical-quantum channel.
//!
//! A codeword `c = (c_1, …, c_n)` is sent as `σ_c = σ_{c_1} ⊗ ⋯ ⊗ σ_{c_n}`.
//! The receiver first projects onto the typical subspace `P` of the average
//! output `σ^{⊗n}`, then asks of each codeword in turn "is it `c_i`?" using
//! the conditionally typical projector `P_{c_i}`. All operators on the
//! `d^n`-dimensional output space are handled through orthonormal bases of
//! their ranges rather than as dense matrices.

mod decoder;
mod experiment;
mod typical;

pub use decoder::{
    pgm_decode, sequential_decode, sequential_success_conditionals, sequential_success_dense,
    DecodeMode, DecodeOutcome, DecoderContext, PgmOutcome, SubspaceBasis,
};
pub use experiment::{
    decoding_experiment, sen_bound_rhs, union_bound_rhs, write_rows_csv, DecodeRow, DecodeStats,
    ExperimentConfig,
};
pub use typical::{
    conditional_typical_projector, conditional_typical_subspace, typical_projector,
    typical_subspace, typicality_audit, TypicalSpec, TypicalSubspace, TypicalityAudit,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{ResourceCaps, VALIDATION_TOL};
use crate::numkernel::EigenDecomposition;
use crate::qstate::{shannon_entropy, DensityOperator};
use crate::{Error, Result};

/// Prior sums must be one within this.
const PRIOR_TOL: f64 = 1e-12;

/// Input alphabet `{0, …, J-1}` with prior `p_j` and outputs `σ_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelJson", into = "ChannelJson")]
pub struct CqChannel {
    prior: Vec<f64>,
    outputs: Vec<DensityOperator>,
    spectra: Vec<EigenDecomposition>,
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    prior: Vec<f64>,
    outputs: Vec<DensityOperator>,
}

impl TryFrom<ChannelJson> for CqChannel {
    type Error = Error;

    fn try_from(j: ChannelJson) -> Result<Self> {
        CqChannel::new(j.prior, j.outputs)
    }
}

impl From<CqChannel> for ChannelJson {
    fn from(c: CqChannel) -> Self {
        ChannelJson {
            prior: c.prior,
            outputs: c.outputs,
        }
    }
}

impl CqChannel {
    pub fn new(prior: Vec<f64>, outputs: Vec<DensityOperator>) -> Result<Self> {
        if outputs.is_empty() || prior.len() != outputs.len() {
            return Err(Error::validation(format!(
                "CqChannel: one prior entry per output ({} vs {})",
                prior.len(),
                outputs.len()
            )));
        }
        if prior.iter().any(|&p| p.is_nan() || p < 0.0) {
            return Err(Error::validation("CqChannel: prior non-negative"));
        }
        let total: f64 = prior.iter().sum();
        if (total - 1.0).abs() > PRIOR_TOL {
            return Err(Error::validation(format!("CqChannel: prior sums to 1 (got {total})")));
        }
        let d = outputs[0].dim();
        for (j, s) in outputs.iter().enumerate() {
            if s.dim() != d {
                return Err(Error::validation(format!(
                    "CqChannel: all outputs share dimension {d} (output {j} has {})",
                    s.dim()
                )));
            }
            if (s.trace() - 1.0).abs() > VALIDATION_TOL {
                return Err(Error::validation(format!("CqChannel: output {j} has unit trace")));
            }
        }
        let spectra = outputs.iter().map(|s| s.spectrum()).collect::<Result<_>>()?;
        Ok(CqChannel {
            prior,
            outputs,
            spectra,
        })
    }

    /// The two-letter channel `0 → |0⟩⟨0|`, `1 → |+⟩⟨+|` with uniform prior.
    pub fn binary_zero_plus() -> Self {
        let zero = DensityOperator::from_diag(&[1.0, 0.0]).expect("valid");
        let plus = crate::qstate::PureState::normalized(&[
            crate::numkernel::c64(1.0, 0.0),
            crate::numkernel::c64(1.0, 0.0),
        ])
        .expect("valid")
        .density();
        CqChannel::new(vec![0.5, 0.5], vec![zero, plus]).expect("valid channel")
    }

    pub fn alphabet_size(&self) -> usize {
        self.prior.len()
    }

    pub fn dim(&self) -> usize {
        self.outputs[0].dim()
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn outputs(&self) -> &[DensityOperator] {
        &self.outputs
    }

    /// Eigendecomposition of `σ_j`, negative round-off clipped to zero.
    pub fn spectrum(&self, j: usize) -> &EigenDecomposition {
        &self.spectra[j]
    }

    /// `σ = Σ p_j σ_j`.
    pub fn average_state(&self) -> Result<DensityOperator> {
        let d = self.dim();
        let mut m = crate::numkernel::ComplexMatrix::zeros(d, d);
        for (p, s) in self.prior.iter().zip(&self.outputs) {
            m.add_scaled(s.matrix(), *p);
        }
        DensityOperator::new(m.hermitian_part())
    }

    /// `Σ_j p_j S(σ_j)`.
    pub fn conditional_entropy(&self) -> f64 {
        self.prior
            .iter()
            .zip(&self.spectra)
            .map(|(p, e)| p * shannon_entropy(&e.eigenvalues))
            .sum()
    }

    /// `S(σ_j)` for each symbol.
    pub fn output_entropies(&self) -> Vec<f64> {
        self.spectra.iter().map(|e| shannon_entropy(&e.eigenvalues)).collect()
    }

    /// Whether every pair of outputs commutes to within round-off.
    pub fn is_commuting(&self) -> bool {
        let tol = 1e-10;
        self.outputs.iter().enumerate().all(|(i, a)| {
            self.outputs[i + 1..].iter().all(|b| {
                let ab = a.matrix().matmul(b.matrix());
                let ba = b.matrix().matmul(a.matrix());
                matches!((ab, ba), (Ok(x), Ok(y)) if x.max_abs_diff(&y) <= tol)
            })
        })
    }
}

/// `χ = S(Σ p_j σ_j) - Σ p_j S(σ_j)` in bits, clamped at zero.
pub fn holevo_quantity(ch: &CqChannel) -> Result<f64> {
    let avg = crate::qstate::von_neumann_entropy(&ch.average_state()?)?;
    Ok((avg - ch.conditional_entropy()).max(0.0))
}

/// `2^{⌈nR⌉}` codewords of length `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    pub n: usize,
    pub rate: f64,
    pub entries: Vec<Vec<usize>>,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `log₂(len) / n`, the rate the codebook actually has.
    pub fn effective_rate(&self) -> f64 {
        (self.len() as f64).log2() / self.n as f64
    }
}

/// `⌈nR⌉`, with a small allowance so that `nR` landing a rounding error
/// above an integer does not add a bit.
pub fn codebook_bits(n: usize, rate: f64) -> u32 {
    let x = n as f64 * rate;
    (x - 1e-9).ceil().max(0.0) as u32
}

/// Codewords drawn i.i.d. from the prior.
pub fn random_codebook<R: Rng + ?Sized>(
    ch: &CqChannel,
    n: usize,
    rate: f64,
    caps: &ResourceCaps,
    rng: &mut R,
) -> Result<Codebook> {
    if n == 0 {
        return Err(Error::validation("codebook: block length n >= 1"));
    }
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::validation("codebook: rate >= 0"));
    }
    let bits = codebook_bits(n, rate);
    if bits >= usize::BITS - 1 || (1usize << bits) > caps.max_codebook {
        return Err(Error::Resource(format!(
            "codebook of 2^{bits} entries exceeds the cap of {} entries",
            caps.max_codebook
        )));
    }
    let size = 1usize << bits;
    let cdf: Vec<f64> = ch
        .prior
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let last = ch.prior.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut draw = || {
        let u: f64 = rng.random();
        cdf.iter()
            .position(|&c| u < c)
            .unwrap_or(last)
            .min(last)
    };
    let entries = (0..size).map(|_| (0..n).map(|_| draw()).collect()).collect();
    Ok(Codebook { n, rate, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::ComplexMatrix;
    use crate::qstate::stream;

    #[test]
    fn holevo_cases() {
        let chi = holevo_quantity(&CqChannel::binary_zero_plus()).unwrap();
        assert!((chi - 0.6008760366928562).abs() < 1e-12, "{chi}");
        let z = DensityOperator::from_diag(&[1.0, 0.0]).unwrap();
        let o = DensityOperator::from_diag(&[0.0, 1.0]).unwrap();
        let ch = CqChannel::new(vec![0.5, 0.5], vec![z.clone(), o]).unwrap();
        assert!((holevo_quantity(&ch).unwrap() - 1.0).abs() < 1e-12);
        let ch = CqChannel::new(vec![0.3, 0.7], vec![z.clone(), z]).unwrap();
        assert!(holevo_quantity(&ch).unwrap().abs() < 1e-12);
    }

    #[test]
    fn channel_validation_and_json() {
        let z = DensityOperator::from_diag(&[1.0, 0.0]).unwrap();
        assert!(CqChannel::new(vec![0.5, 0.6], vec![z.clone(), z.clone()]).is_err());
        assert!(CqChannel::new(vec![1.0], vec![z.clone(), z.clone()]).is_err());
        let big = DensityOperator::maximally_mixed(3);
        assert!(CqChannel::new(vec![0.5, 0.5], vec![z.clone(), big]).is_err());
        let ch = CqChannel::binary_zero_plus();
        let s = serde_json::to_string(&ch).unwrap();
        assert!(s.starts_with("{\"prior\":"));
        let back: CqChannel = serde_json::from_str(&s).unwrap();
        assert_eq!(back.prior(), ch.prior());
        assert!(!ch.is_commuting());
        let bad = r#"{"prior":[1.0],"outputs":[{"rows":1,"cols":1,"data":[[0.5,0.0]]}]}"#;
        assert!(serde_json::from_str::<CqChannel>(bad).is_err());
        let _ = ComplexMatrix::zeros(1, 1);
    }

    #[test]
    fn codebook_sizes_and_prior() {
        let ch = CqChannel::binary_zero_plus();
        let caps = ResourceCaps::default();
        let mut rng = stream(1, 0);
        assert_eq!(random_codebook(&ch, 8, 0.0, &caps, &mut rng).unwrap().len(), 1);
        assert_eq!(random_codebook(&ch, 8, 0.3, &caps, &mut rng).unwrap().len(), 8);
        assert_eq!(codebook_bits(10, 0.3), 3);
        assert_eq!(codebook_bits(10, 0.1 + 0.2), 3);
        let err = random_codebook(&ch, 40, 1.0, &caps, &mut rng).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));

        let z = DensityOperator::from_diag(&[1.0, 0.0]).unwrap();
        let degenerate = CqChannel::new(vec![1.0, 0.0], vec![z.clone(), z]).unwrap();
        let cb = random_codebook(&degenerate, 6, 0.5, &caps, &mut rng).unwrap();
        assert!(cb.entries.iter().flatten().all(|&s| s == 0));

        let cb = random_codebook(&ch, 10, 1.0, &caps, &mut rng).unwrap();
        let ones = cb.entries.iter().flatten().filter(|&&s| s == 1).count() as f64;
        let freq = ones / (cb.len() * cb.n) as f64;
        assert!((freq - 0.5).abs() < 0.02, "{freq}");
    }
}
