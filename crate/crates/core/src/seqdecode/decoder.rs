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

//! The sequential decoder and the pretty-good-measurement comparison.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::typical::{conditional_typical_subspace, typical_subspace, TypicalSpec, TypicalSubspace, TypicalityAudit};
use super::{Codebook, CqChannel};
use crate::config::ResourceCaps;
use crate::numkernel::{vector, ComplexMatrix, C64};
use crate::{Error, Result};

/// Orthonormal columns spanning the range of a projector.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    dim: usize,
    cols: Vec<Vec<C64>>,
}

impl SubspaceBasis {
    pub fn new(dim: usize, cols: Vec<Vec<C64>>) -> Self {
        debug_assert!(cols.iter().all(|c| c.len() == dim));
        SubspaceBasis { dim, cols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[Vec<C64>] {
        &self.cols
    }

    /// `V†v`.
    pub fn coeffs(&self, v: &[C64]) -> Vec<C64> {
        self.cols.iter().map(|c| vector::inner(c, v)).collect()
    }

    /// `‖Pv‖²`.
    pub fn weight(&self, v: &[C64]) -> f64 {
        self.cols.iter().map(|c| vector::inner(c, v).norm_sqr()).sum()
    }

    /// `Pv = V(V†v)`.
    pub fn project(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for c in &self.cols {
            let a = vector::inner(c, v);
            for (o, ci) in out.iter_mut().zip(c) {
                *o += ci * a;
            }
        }
        out
    }

    /// `(I - P)v`.
    pub fn project_out(&self, v: &[C64]) -> Vec<C64> {
        let mut out = v.to_vec();
        for c in &self.cols {
            let a = vector::inner(c, v);
            for (o, ci) in out.iter_mut().zip(c) {
                *o -= ci * a;
            }
        }
        out
    }

    pub fn dense(&self) -> ComplexMatrix {
        ComplexMatrix::projector_onto(self.dim, &self.cols)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecodeMode {
    /// Success drawn from the exact success probability.
    Exact,
    /// Every binary outcome simulated by a coin flip.
    Sampled,
}

impl fmt::Display for DecodeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecodeMode::Exact => "exact",
            DecodeMode::Sampled => "sampled",
        })
    }
}

impl FromStr for DecodeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(DecodeMode::Exact),
            "sampled" => Ok(DecodeMode::Sampled),
            _ => Err(Error::validation(format!("decode mode exact|sampled, got {s:?}"))),
        }
    }
}

/// Everything the decoder needs for one codebook.
#[derive(Clone, Debug)]
pub struct DecoderContext {
    channel: CqChannel,
    spec: TypicalSpec,
    codebook: Codebook,
    typical: TypicalSubspace,
    typical_basis: SubspaceBasis,
    conditional: Vec<TypicalSubspace>,
    bases: Vec<SubspaceBasis>,
}

impl DecoderContext {
    pub fn new(ch: &CqChannel, codebook: &Codebook, spec: &TypicalSpec, caps: &ResourceCaps) -> Result<Self> {
        if codebook.n != spec.n {
            return Err(Error::validation(format!(
                "codebook block length {} differs from typicality n = {}",
                codebook.n, spec.n
            )));
        }
        if codebook.is_empty() {
            return Err(Error::validation("decoder: empty codebook"));
        }
        let typical = typical_subspace(&ch.average_state()?, spec, caps)?;
        let conditional = codebook
            .entries
            .iter()
            .map(|c| conditional_typical_subspace(ch, c, spec, caps))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(ch, codebook, spec, typical, conditional))
    }

    /// Reuses an already computed typical subspace of `σ^{⊗n}`.
    pub fn with_typical(
        ch: &CqChannel,
        codebook: &Codebook,
        spec: &TypicalSpec,
        typical: TypicalSubspace,
        caps: &ResourceCaps,
    ) -> Result<Self> {
        let conditional = codebook
            .entries
            .iter()
            .map(|c| conditional_typical_subspace(ch, c, spec, caps))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(ch, codebook, spec, typical, conditional))
    }

    fn from_parts(
        ch: &CqChannel,
        codebook: &Codebook,
        spec: &TypicalSpec,
        typical: TypicalSubspace,
        conditional: Vec<TypicalSubspace>,
    ) -> Self {
        let typical_basis = typical.basis();
        let bases = conditional.iter().map(TypicalSubspace::basis).collect();
        DecoderContext {
            channel: ch.clone(),
            spec: *spec,
            codebook: codebook.clone(),
            typical,
            typical_basis,
            conditional,
            bases,
        }
    }

    pub fn len(&self) -> usize {
        self.codebook.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codebook.is_empty()
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    pub fn typical(&self) -> &TypicalSubspace {
        &self.typical
    }

    pub fn conditional(&self) -> &[TypicalSubspace] {
        &self.conditional
    }

    pub fn audit(&self) -> TypicalityAudit {
        TypicalityAudit::from_subspaces(&self.channel, &self.spec, &self.typical, &self.conditional)
    }

    fn check_index(&self, m: usize) -> Result<()> {
        if m >= self.len() {
            return Err(Error::validation(format!(
                "transmitted index {m} outside codebook of {} entries",
                self.len()
            )));
        }
        Ok(())
    }

    /// `σ_{c_m}` as an ensemble of product eigenvectors with positive weight.
    pub fn codeword_state(&self, m: usize) -> Result<Vec<(f64, Vec<C64>)>> {
        self.check_index(m)?;
        let word = &self.codebook.entries[m];
        let mut out = vec![(1.0, vec![C64::new(1.0, 0.0)])];
        for &s in word {
            let eig = self.channel.spectrum(s);
            let mut next = Vec::with_capacity(out.len() * eig.dim());
            for (w, v) in &out {
                for (x, &l) in eig.eigenvalues.iter().enumerate() {
                    if l > 0.0 {
                        next.push((w * l, vector::kron(v, &eig.vector(x))));
                    }
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Dense `σ_{c_m}`.
    pub fn codeword_density(&self, m: usize) -> Result<ComplexMatrix> {
        self.check_index(m)?;
        let outs = self.channel.outputs();
        let word = &self.codebook.entries[m];
        Ok(word[1..].iter().fold(outs[word[0]].matrix().clone(), |acc, &s| {
            acc.tensor(outs[s].matrix())
        }))
    }
}

/// Result of decoding one transmission.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecodeOutcome {
    pub transmitted: usize,
    /// First codeword answering "yes". In exact mode this is the transmitted
    /// index on success and `None` otherwise.
    pub detected: Option<usize>,
    pub success: bool,
    /// `tr(Λ^s_m σ_{c_m})`.
    pub success_probability: f64,
    /// `tr(Pσ) - 4 tr(P̄_{c_m}PσP) - 4 Σ_{i<m} tr(P_{c_i}PσP)`.
    pub corollary1_rhs: f64,
    /// `tr(P σ_{c_m})`.
    pub typical_weight: f64,
}

impl DecodeOutcome {
    pub fn corollary1_margin(&self) -> f64 {
        self.success_probability - self.corollary1_rhs
    }
}

/// Exact success probability and the union-bound estimate for index `m`.
fn sequential_exact(ctx: &DecoderContext, m: usize) -> Result<(f64, f64, f64)> {
    let mut success = 0.0;
    let mut typical_weight = 0.0;
    let mut miss_m = 0.0;
    let mut earlier_hits = 0.0;
    for (w, v) in ctx.codeword_state(m)? {
        let pv = ctx.typical_basis.project(&v);
        let pv_norm = vector::norm_sqr(&pv);
        typical_weight += w * pv_norm;
        miss_m += w * (pv_norm - ctx.bases[m].weight(&pv));
        earlier_hits += w * ctx.bases[..m].iter().map(|b| b.weight(&pv)).sum::<f64>();
        let mut u = pv;
        for b in &ctx.bases[..m] {
            u = b.project_out(&u);
        }
        success += w * ctx.bases[m].weight(&u);
    }
    let rhs = typical_weight - 4.0 * miss_m - 4.0 * earlier_hits;
    Ok((success, rhs, typical_weight))
}

/// Decodes a transmission of codeword `m`.
///
/// The receiver applies `P`, then tests codewords `0, 1, …` in order with
/// `{P_{c_i}, I - P_{c_i}}` and stops at the first "yes".
pub fn sequential_decode<R: Rng + ?Sized>(
    ctx: &DecoderContext,
    m: usize,
    mode: DecodeMode,
    rng: &mut R,
) -> Result<DecodeOutcome> {
    let (p, rhs, typical_weight) = sequential_exact(ctx, m)?;
    let detected = match mode {
        DecodeMode::Exact => (rng.random::<f64>() < p).then_some(m),
        DecodeMode::Sampled => sample_detection(ctx, m, rng)?,
    };
    Ok(DecodeOutcome {
        transmitted: m,
        detected,
        success: detected == Some(m),
        success_probability: p,
        corollary1_rhs: rhs,
        typical_weight,
    })
}

fn sample_detection<R: Rng + ?Sized>(ctx: &DecoderContext, m: usize, rng: &mut R) -> Result<Option<usize>> {
    let state = ctx.codeword_state(m)?;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut v = &state[state.len() - 1].1;
    for (w, vk) in &state {
        acc += w;
        if u < acc {
            v = vk;
            break;
        }
    }
    let mut cur = ctx.typical_basis.project(v);
    let p_yes = vector::norm_sqr(&cur);
    if rng.random::<f64>() >= p_yes {
        return Ok(None);
    }
    vector::scale(&mut cur, C64::new(1.0 / p_yes.sqrt(), 0.0));
    for (i, b) in ctx.bases.iter().enumerate() {
        let yes = b.weight(&cur);
        if rng.random::<f64>() < yes {
            return Ok(Some(i));
        }
        cur = b.project_out(&cur);
        let norm = vector::norm(&cur);
        if norm <= 1e-150 {
            return Ok(None);
        }
        vector::scale(&mut cur, C64::new(1.0 / norm, 0.0));
    }
    Ok(None)
}

/// The success probability as a weighted product of per-test conditional
/// probabilities, renormalizing after every outcome.
pub fn sequential_success_conditionals(ctx: &DecoderContext, m: usize) -> Result<f64> {
    let mut total = 0.0;
    for (w, v) in ctx.codeword_state(m)? {
        let mut u = ctx.typical_basis.project(&v);
        let mut q = vector::norm_sqr(&u);
        for b in &ctx.bases[..m] {
            let Some(n) = vector::normalized(&u) else {
                q = 0.0;
                break;
            };
            q *= 1.0 - b.weight(&n);
            u = b.project_out(&n);
        }
        if q > 0.0 {
            if let Some(n) = vector::normalized(&u) {
                total += w * q * ctx.bases[m].weight(&n);
            }
        }
    }
    Ok(total)
}

/// `tr(Λ^s_m σ_{c_m})` with `Λ^s_m = P P̄_{c_1}⋯P_{c_m}⋯P̄_{c_1} P` built from
/// dense matrices.
pub fn sequential_success_dense(ctx: &DecoderContext, m: usize) -> Result<f64> {
    let sigma = ctx.codeword_density(m)?;
    let dim = sigma.rows();
    let id = ComplexMatrix::identity(dim);
    let mut a = ctx.typical_basis.dense();
    for b in &ctx.bases[..m] {
        a = (&id - &b.dense()).matmul(&a)?;
    }
    a = ctx.bases[m].dense().matmul(&a)?;
    let lambda = a.dagger().matmul(&a)?;
    Ok(lambda.matmul(&sigma)?.trace().re)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PgmOutcome {
    /// `tr(Λ^p_m σ_{c_m})`.
    pub success_probability: f64,
    /// `tr(Pσ) - 2 tr(P P̄_{c_m} P σ) - 4 Σ_{i≠m} tr(P P_{c_i} P σ)`.
    pub bound_rhs: f64,
}

impl PgmOutcome {
    pub fn margin(&self) -> f64 {
        self.success_probability - self.bound_rhs
    }
}

/// Exact success of the pretty-good measurement
/// `Λ^p_m = X^{-1/2} P P_{c_m} P X^{-1/2}`, `X = Σ_i P P_{c_i} P`, with the
/// inverse square root on the support of `X`.
///
/// With `B = [P V_1, …, P V_M]` and `B†B = W Σ² W†`, the relevant part of
/// `X^{-1/2} B` is `U = B W Σ^{-1}`, so `tr(Λ^p_m σ) = Σ_k w_k ‖W_m U† v_k‖²`
/// with `W_m` the rows of `W` belonging to block `m`. When `B` has more
/// columns than the space has dimensions, `X` itself is diagonalized.
pub fn pgm_decode(ctx: &DecoderContext, m: usize) -> Result<PgmOutcome> {
    ctx.check_index(m)?;
    let columns: Vec<Vec<C64>> = ctx
        .bases
        .iter()
        .flat_map(|b| b.columns().iter().map(|c| ctx.typical_basis.project(c)))
        .collect();
    let offsets: Vec<usize> = ctx
        .bases
        .iter()
        .scan(0, |acc, b| {
            let start = *acc;
            *acc += b.rank();
            Some(start)
        })
        .collect();
    let block = offsets[m]..offsets[m] + ctx.bases[m].rank();
    let state = ctx.codeword_state(m)?;
    let dim = ctx.typical_basis.dim();
    let success = if columns.len() <= dim {
        pgm_gram(&columns, block, &state)?
    } else {
        pgm_dense(&columns, block, &state, dim)?
    };

    let mut typical_weight = 0.0;
    let mut miss_m = 0.0;
    let mut others = 0.0;
    for (w, v) in &state {
        let pv = ctx.typical_basis.project(v);
        let pv_norm = vector::norm_sqr(&pv);
        typical_weight += w * pv_norm;
        for (i, b) in ctx.bases.iter().enumerate() {
            let hit = b.weight(&pv);
            if i == m {
                miss_m += w * (pv_norm - hit);
            } else {
                others += w * hit;
            }
        }
    }
    Ok(PgmOutcome {
        success_probability: success,
        bound_rhs: typical_weight - 2.0 * miss_m - 4.0 * others,
    })
}

fn support_cutoff(max: f64) -> f64 {
    1e-12 * max.abs().max(1.0)
}

fn pgm_gram(
    columns: &[Vec<C64>],
    block: std::ops::Range<usize>,
    state: &[(f64, Vec<C64>)],
) -> Result<f64> {
    let k = columns.len();
    if k == 0 {
        return Ok(0.0);
    }
    let gram = ComplexMatrix::from_fn(k, k, |a, b| vector::inner(&columns[a], &columns[b]));
    let eig = gram.hermitian_part().hermitian_eig()?;
    let cutoff = support_cutoff(eig.max());
    let support: Vec<(usize, f64)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > cutoff)
        .map(|(j, &l)| (j, l.sqrt()))
        .collect();
    let w = &eig.eigenvectors;
    let mut total = 0.0;
    for (weight, v) in state {
        let y: Vec<C64> = columns.iter().map(|c| vector::inner(c, v)).collect();
        // (U†v)_j = (W†y)_j / s_j on the support.
        let uv: Vec<(usize, C64)> = support
            .iter()
            .map(|&(j, s)| {
                let wy: C64 = (0..k).map(|a| w[(a, j)].conj() * y[a]).sum();
                (j, wy / s)
            })
            .collect();
        let norm: f64 = block
            .clone()
            .map(|a| uv.iter().map(|&(j, z)| w[(a, j)] * z).sum::<C64>().norm_sqr())
            .sum();
        total += weight * norm;
    }
    Ok(total)
}

fn pgm_dense(
    columns: &[Vec<C64>],
    block: std::ops::Range<usize>,
    state: &[(f64, Vec<C64>)],
    dim: usize,
) -> Result<f64> {
    let mut x = ComplexMatrix::zeros(dim, dim);
    for c in columns {
        x.add_scaled(&ComplexMatrix::outer(c, c), 1.0);
    }
    let eig = x.hermitian_part().hermitian_eig()?;
    let cutoff = support_cutoff(eig.max());
    let inv_sqrt = eig.map(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
    let mut total = 0.0;
    for (weight, v) in state {
        let t = inv_sqrt.mul_vec(v)?;
        let norm: f64 = columns[block.clone()].iter().map(|c| vector::inner(c, &t).norm_sqr()).sum();
        total += weight * norm;
    }
    Ok(total)
}

#[cfg(test)]
pub(crate) fn pgm_both_paths(ctx: &DecoderContext, m: usize) -> (f64, f64) {
    let columns: Vec<Vec<C64>> = ctx
        .bases
        .iter()
        .flat_map(|b| b.columns().iter().map(|c| ctx.typical_basis.project(c)))
        .collect();
    let start: usize = ctx.bases[..m].iter().map(|b| b.rank()).sum();
    let block = start..start + ctx.bases[m].rank();
    let state = ctx.codeword_state(m).unwrap();
    (
        pgm_gram(&columns, block.clone(), &state).unwrap(),
        pgm_dense(&columns, block, &state, ctx.typical_basis.dim()).unwrap(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{random_density, stream, DensityOperator};

    fn caps() -> ResourceCaps {
        ResourceCaps::default()
    }

    fn codebook(entries: Vec<Vec<usize>>) -> Codebook {
        Codebook {
            n: entries[0].len(),
            rate: 0.0,
            entries,
        }
    }

    fn random_channel(seed: u64) -> CqChannel {
        let mut rng = stream(seed, 0);
        let outs = (0..2).map(|_| random_density(2, 2, &mut rng).unwrap()).collect();
        CqChannel::new(vec![0.4, 0.6], outs).unwrap()
    }

    #[test]
    fn single_codeword_inside_support() {
        let z = DensityOperator::from_diag(&[1.0, 0.0]).unwrap();
        let ch = CqChannel::new(vec![1.0], vec![z]).unwrap();
        let spec = TypicalSpec::new(3, 0.1).unwrap();
        let ctx = DecoderContext::new(&ch, &codebook(vec![vec![0, 0, 0]]), &spec, &caps()).unwrap();
        let mut rng = stream(0, 0);
        let out = sequential_decode(&ctx, 0, DecodeMode::Sampled, &mut rng).unwrap();
        assert!((out.success_probability - 1.0).abs() < 1e-12);
        assert_eq!(out.detected, Some(0));
        assert!((pgm_decode(&ctx, 0).unwrap().success_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_forms_agree() {
        for seed in 0..6 {
            let ch = random_channel(seed);
            let spec = TypicalSpec::new(4, 0.4).unwrap();
            let mut rng = stream(seed, 1);
            let cb = super::super::random_codebook(&ch, 4, 0.5, &caps(), &mut rng).unwrap();
            let ctx = DecoderContext::new(&ch, &cb, &spec, &caps()).unwrap();
            for m in 0..cb.len() {
                let out = sequential_decode(&ctx, m, DecodeMode::Exact, &mut rng).unwrap();
                let cond = sequential_success_conditionals(&ctx, m).unwrap();
                let dense = sequential_success_dense(&ctx, m).unwrap();
                assert!((out.success_probability - cond).abs() < 1e-9);
                assert!((out.success_probability - dense).abs() < 1e-9);
                assert!(out.corollary1_margin() >= -1e-8);
                let pgm = pgm_decode(&ctx, m).unwrap();
                assert!(pgm.margin() >= -1e-8, "{pgm:?}");
                let (g, d) = pgm_both_paths(&ctx, m);
                assert!((g - d).abs() < 1e-9, "{g} vs {d}");
            }
        }
    }

    #[test]
    fn pgm_commuting_matches_diagonal() {
        let a = DensityOperator::from_diag(&[0.8, 0.2]).unwrap();
        let b = DensityOperator::from_diag(&[0.3, 0.7]).unwrap();
        let ch = CqChannel::new(vec![0.5, 0.5], vec![a, b]).unwrap();
        let spec = TypicalSpec::new(3, 0.6).unwrap();
        let cb = codebook(vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]]);
        let ctx = DecoderContext::new(&ch, &cb, &spec, &caps()).unwrap();
        let p = ctx.typical().basis().dense();
        let ps: Vec<ComplexMatrix> = ctx.conditional().iter().map(|c| c.basis().dense()).collect();
        for m in 0..cb.len() {
            let sigma = ctx.codeword_density(m).unwrap();
            let mut oracle = 0.0;
            for e in 0..8 {
                let pe = p[(e, e)].re;
                let x: f64 = ps.iter().map(|q| pe * q[(e, e)].re).sum();
                if x > 1e-12 {
                    oracle += sigma[(e, e)].re * pe * ps[m][(e, e)].re / x;
                }
            }
            let got = pgm_decode(&ctx, m).unwrap().success_probability;
            assert!((got - oracle).abs() < 1e-12, "m={m}: {got} vs {oracle}");
        }
    }

    #[test]
    fn orthogonal_outputs_decode() {
        let z = DensityOperator::from_diag(&[1.0, 0.0]).unwrap();
        let o = DensityOperator::from_diag(&[0.0, 1.0]).unwrap();
        let ch = CqChannel::new(vec![0.5, 0.5], vec![z, o]).unwrap();
        let spec = TypicalSpec::new(3, 0.1).unwrap();
        let cb = codebook(vec![vec![0, 0, 1], vec![1, 1, 0], vec![0, 1, 0], vec![1, 0, 1]]);
        let ctx = DecoderContext::new(&ch, &cb, &spec, &caps()).unwrap();
        let mut rng = stream(4, 4);
        for m in 0..4 {
            let out = sequential_decode(&ctx, m, DecodeMode::Sampled, &mut rng).unwrap();
            assert!((out.success_probability - 1.0).abs() < 1e-12);
            assert!(out.success);
        }
    }

    #[test]
    fn sampled_frequency_tracks_exact() {
        let ch = CqChannel::binary_zero_plus();
        let spec = TypicalSpec::new(4, 0.3).unwrap();
        let cb = codebook(vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 1, 1], vec![1, 1, 0, 1]]);
        let ctx = DecoderContext::new(&ch, &cb, &spec, &caps()).unwrap();
        let mut rng = stream(8, 8);
        let m = 2;
        let p = sequential_decode(&ctx, m, DecodeMode::Exact, &mut rng).unwrap().success_probability;
        let trials = 4000;
        let hits = (0..trials)
            .filter(|_| sequential_decode(&ctx, m, DecodeMode::Sampled, &mut rng).unwrap().success)
            .count();
        let freq = hits as f64 / trials as f64;
        assert!((freq - p).abs() < 4.0 * (p * (1.0 - p) / trials as f64).sqrt() + 1e-3, "{freq} vs {p}");
    }

    #[test]
    fn mode_parse() {
        assert_eq!("exact".parse::<DecodeMode>().unwrap(), DecodeMode::Exact);
        assert!("x".parse::<DecodeMode>().is_err());
        assert_eq!(DecodeMode::Sampled.to_string(), "sampled");
    }
}
