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

//! Monte Carlo over random codebooks.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decoder::{pgm_decode, sequential_decode, DecodeMode, DecoderContext};
use super::typical::{typical_subspace, TypicalSpec};
use super::{holevo_quantity, random_codebook, CqChannel};
use crate::config::ResourceCaps;
use crate::qstate::stream;
use crate::{Error, Result};

/// Instance-wise bounds are counted as holding above this margin.
const INSTANCE_TOL: f64 = 1e-8;
/// A Corollary-1 estimate within this of `p_c` counts as tight.
const TIGHT_WITHIN: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    pub n: usize,
    pub rate: f64,
    pub delta: f64,
    pub trials: u64,
    pub seed: u64,
    pub mode: DecodeMode,
    pub caps: ResourceCaps,
}

/// `33ε + 4·2^{n[R - (χ - 2δ)]}`.
pub fn union_bound_rhs(eps: f64, n: usize, rate: f64, chi: f64, delta: f64) -> f64 {
    33.0 * eps + 4.0 * (n as f64 * (rate - (chi - 2.0 * delta))).exp2()
}

/// `2√(4·2^{n[R - (χ - 2δ)]} + 13√ε)`.
pub fn sen_bound_rhs(eps: f64, n: usize, rate: f64, chi: f64, delta: f64) -> f64 {
    2.0 * (4.0 * (n as f64 * (rate - (chi - 2.0 * delta))).exp2() + 13.0 * eps.sqrt()).sqrt()
}

/// One CSV row per trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeRow {
    pub trial: u64,
    pub n: usize,
    pub rate: f64,
    pub delta: f64,
    pub success: u8,
    pub p_c_exact: f64,
    pub corollary1_rhs: f64,
    #[serde(rename = "paper_bound_rhs")]
    pub union_bound_rhs: f64,
    pub sen_bound_rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DecodeStats {
    pub config: ExperimentConfig,
    pub codebook_size: usize,
    /// `log₂(codebook size)/n`, used in the bound formulas.
    pub effective_rate: f64,
    pub holevo: f64,
    pub typical_rank: usize,
    pub trials: u64,
    pub successes: u64,
    pub empirical_error_rate: f64,
    pub standard_error: f64,
    /// `1 - mean p_c` and the standard error of that mean.
    pub exact_error_rate: f64,
    pub exact_standard_error: f64,
    /// Largest per-trial ε measured by the typicality audit.
    pub measured_eps: f64,
    #[serde(rename = "boundRHS_paper")]
    pub bound_rhs_union: f64,
    #[serde(rename = "boundRHS_sen")]
    pub bound_rhs_sen: f64,
    #[serde(rename = "perTrialBoundRHS")]
    pub per_trial_bound_rhs: Vec<f64>,
    pub corollary1_holds: u64,
    pub corollary1_min_margin: f64,
    pub corollary1_tight_fraction: f64,
    pub pgm_mean_success: f64,
    pub pgm_bound_holds: u64,
    pub pgm_min_margin: f64,
    #[serde(skip)]
    pub rows: Vec<DecodeRow>,
}

impl DecodeStats {
    pub fn corollary1_holds_everywhere(&self) -> bool {
        self.corollary1_holds == self.trials
    }

    pub fn pgm_bound_holds_everywhere(&self) -> bool {
        self.pgm_bound_holds == self.trials
    }
}

struct TrialResult {
    row: DecodeRow,
    success: bool,
    eps: f64,
    p_c: f64,
    corollary1_margin: f64,
    pgm_success: f64,
    pgm_margin: f64,
    codebook_size: usize,
}

/// Runs `cfg.trials` independent transmissions, each over a fresh random
/// codebook with a uniformly chosen transmitted index. Trial `t` draws from
/// `stream(cfg.seed, t)`.
pub fn decoding_experiment(ch: &CqChannel, cfg: &ExperimentConfig) -> Result<DecodeStats> {
    if cfg.trials == 0 {
        return Err(Error::validation("decoding experiment: trials >= 1"));
    }
    let spec = TypicalSpec::new(cfg.n, cfg.delta)?;
    let chi = holevo_quantity(ch)?;
    let typical = typical_subspace(&ch.average_state()?, &spec, &cfg.caps)?;
    let typical_rank = typical.rank();

    let run = |t: u64| -> Result<TrialResult> {
        let mut rng = stream(cfg.seed, t);
        let cb = random_codebook(ch, cfg.n, cfg.rate, &cfg.caps, &mut rng)?;
        let ctx = DecoderContext::with_typical(ch, &cb, &spec, typical.clone(), &cfg.caps)?;
        let m = rng.random_range(0..cb.len());
        let out = sequential_decode(&ctx, m, cfg.mode, &mut rng)?;
        let pgm = pgm_decode(&ctx, m)?;
        let eps = ctx.audit().measured_eps;
        let r = cb.effective_rate();
        Ok(TrialResult {
            row: DecodeRow {
                trial: t,
                n: cfg.n,
                rate: cfg.rate,
                delta: cfg.delta,
                success: out.success as u8,
                p_c_exact: out.success_probability,
                corollary1_rhs: out.corollary1_rhs,
                union_bound_rhs: union_bound_rhs(eps, cfg.n, r, chi, cfg.delta),
                sen_bound_rhs: sen_bound_rhs(eps, cfg.n, r, chi, cfg.delta),
            },
            success: out.success,
            eps,
            p_c: out.success_probability,
            corollary1_margin: out.corollary1_margin(),
            pgm_success: pgm.success_probability,
            pgm_margin: pgm.margin(),
            codebook_size: cb.len(),
        })
    };
    let results = (0..cfg.trials)
        .into_par_iter()
        .map(run)
        .collect::<Result<Vec<_>>>()?;

    let trials = cfg.trials;
    let tf = trials as f64;
    let successes = results.iter().filter(|r| r.success).count() as u64;
    let err = 1.0 - successes as f64 / tf;
    let mean_p = results.iter().map(|r| r.p_c).sum::<f64>() / tf;
    let var_p = if trials > 1 {
        results.iter().map(|r| (r.p_c - mean_p).powi(2)).sum::<f64>() / (tf - 1.0)
    } else {
        0.0
    };
    let measured_eps = results.iter().map(|r| r.eps).fold(0.0, f64::max);
    let codebook_size = results[0].codebook_size;
    let effective_rate = (codebook_size as f64).log2() / cfg.n as f64;
    Ok(DecodeStats {
        config: cfg.clone(),
        codebook_size,
        effective_rate,
        holevo: chi,
        typical_rank,
        trials,
        successes,
        empirical_error_rate: err,
        standard_error: (err * (1.0 - err) / tf).sqrt(),
        exact_error_rate: 1.0 - mean_p,
        exact_standard_error: (var_p / tf).sqrt(),
        measured_eps,
        bound_rhs_union: union_bound_rhs(measured_eps, cfg.n, effective_rate, chi, cfg.delta),
        bound_rhs_sen: sen_bound_rhs(measured_eps, cfg.n, effective_rate, chi, cfg.delta),
        per_trial_bound_rhs: results.iter().map(|r| r.row.corollary1_rhs).collect(),
        corollary1_holds: results.iter().filter(|r| r.corollary1_margin >= -INSTANCE_TOL).count() as u64,
        corollary1_min_margin: results.iter().map(|r| r.corollary1_margin).fold(f64::INFINITY, f64::min),
        corollary1_tight_fraction: results
            .iter()
            .filter(|r| r.corollary1_margin <= TIGHT_WITHIN)
            .count() as f64
            / tf,
        pgm_mean_success: results.iter().map(|r| r.pgm_success).sum::<f64>() / tf,
        pgm_bound_holds: results.iter().filter(|r| r.pgm_margin >= -INSTANCE_TOL).count() as u64,
        pgm_min_margin: results.iter().map(|r| r.pgm_margin).fold(f64::INFINITY, f64::min),
        rows: results.into_iter().map(|r| r.row).collect(),
    })
}

pub fn write_rows_csv<W: Write>(rows: &[DecodeRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
