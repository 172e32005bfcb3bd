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

//! Randomized search for counterexamples.
//!
//! Trial `t` of a hunt with master seed `s` draws everything from
//! `stream(s, t)`, so a trial can be regenerated in isolation and the result
//! does not depend on how trials were scheduled across workers.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{
    check_appendix_b_w, check_corollary1, check_hayashi_nagaoka, check_lemma1, check_lemma2,
    check_povm_repeat, check_sen, check_t1a, check_t1b, check_wilde4th, corollary1_state_residual,
    regime_rhs, AngleVector, BoundId, BoundReport,
};
use crate::numkernel::C64;
use crate::qstate::{
    complex_gaussian, random_density, random_effect, random_projector, random_psd,
    random_pure_state, stream, zeno_family, Effect, Projector, PureState, RngStream,
};
use crate::seqchain::{
    extract_angles, run_back_and_forth, run_chain, ChainInstance, ChainTrace, InitialState,
    MeasurementChain,
};
use crate::{Error, Result};

/// Largest `Σε` at which the fourth-root comparison is hunted. Above it the
/// single-step equality `D = 2√ε` already exceeds `ε^{1/4}` for `ε > 1/16`.
const WILDE_EPS_CAP: f64 = 1.0 / 64.0;

/// Instance distribution for [`hunt_violations`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct GeneratorConfig {
    pub dim_min: usize,
    pub dim_max: usize,
    pub steps_min: usize,
    pub steps_max: usize,
    /// Probability that a chain starts from a mixed state.
    pub mixed_fraction: f64,
    /// Probability that a chain uses the near-identity family instead of
    /// Haar-random projectors.
    pub zeno_fraction: f64,
    pub zeno_eps_max: f64,
    pub povm_max_power: u32,
    pub state_distribution: String,
    pub projector_distribution: String,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            dim_min: 2,
            dim_max: 8,
            steps_min: 1,
            steps_max: 8,
            mixed_fraction: 0.5,
            zeno_fraction: 0.5,
            zeno_eps_max: 0.05,
            povm_max_power: 10,
            state_distribution: "hilbert-schmidt".into(),
            projector_distribution: "haar".into(),
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim_min == 0 || self.dim_min > self.dim_max {
            return Err(Error::validation("generator: 1 <= dimMin <= dimMax"));
        }
        if self.steps_min == 0 || self.steps_min > self.steps_max {
            return Err(Error::validation("generator: 1 <= stepsMin <= stepsMax"));
        }
        for (name, p) in [("mixedFraction", self.mixed_fraction), ("zenoFraction", self.zeno_fraction)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::validation(format!("generator: {name} in [0, 1]")));
            }
        }
        if !(self.zeno_eps_max > 0.0 && self.zeno_eps_max <= 0.5) {
            return Err(Error::validation("generator: 0 < zenoEpsMax <= 1/2"));
        }
        if self.povm_max_power == 0 {
            return Err(Error::validation("generator: povmMaxPower >= 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub trial: u64,
    pub margin: f64,
    pub report: BoundReport,
    pub instance: Value,
}

/// Count of margins in `[lower, upper)`; an open end is `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HuntSummary {
    pub bound: BoundId,
    pub trials: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub generator: GeneratorConfig,
    /// Trials that produced at least one checked report.
    pub checked: u64,
    /// Trials whose instance failed the bound's precondition or vanished.
    pub skipped: u64,
    pub errors: u64,
    pub first_error: Option<String>,
    /// Individual reports checked (a trial may yield several).
    pub reports: u64,
    pub min_margin: Option<f64>,
    pub argmin_trial: Option<u64>,
    pub argmin_report: Option<BoundReport>,
    pub argmin_instance: Option<Value>,
    pub histogram: Vec<HistogramBin>,
    pub violations: Vec<Violation>,
}

impl HuntSummary {
    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }
}

enum Family {
    Haar,
    Zeno(f64),
}

struct GeneratedChain {
    chain: MeasurementChain,
    family: &'static str,
    eps_max: Option<f64>,
}

impl GeneratedChain {
    fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(ChainInstance::from_chain(&self.chain)).unwrap_or(Value::Null);
        if let Value::Object(m) = &mut v {
            m.insert("family".into(), json!(self.family));
            m.insert("epsMax".into(), json!(self.eps_max));
            m.insert(
                "pure".into(),
                json!(matches!(self.chain.initial(), InitialState::Pure(_))),
            );
        }
        v
    }
}

fn gen_chain(
    cfg: &GeneratorConfig,
    rng: &mut RngStream,
    force_pure: bool,
    family: Option<Family>,
) -> Result<GeneratedChain> {
    let d = rng.random_range(cfg.dim_min..=cfg.dim_max);
    let n = rng.random_range(cfg.steps_min..=cfg.steps_max);
    let pure = force_pure || d == 1 || !rng.random_bool(cfg.mixed_fraction);
    let initial = if pure {
        InitialState::Pure(random_pure_state(d, rng)?)
    } else {
        let rank = rng.random_range(2..=d);
        InitialState::Mixed(random_density(d, rank, rng)?)
    };
    let family = family.unwrap_or_else(|| {
        if rng.random_bool(cfg.zeno_fraction) {
            Family::Zeno(rng.random_range(0.0..=cfg.zeno_eps_max))
        } else {
            Family::Haar
        }
    });
    let (projectors, name, eps_max) = match family {
        Family::Haar => {
            let ps = (0..n)
                .map(|_| {
                    let rank = rng.random_range(1..=d);
                    random_projector(d, rank, rng)
                })
                .collect::<Result<Vec<Projector>>>()?;
            (ps, "haar", None)
        }
        Family::Zeno(eps) => {
            let reference = match &initial {
                InitialState::Pure(p) => p.clone(),
                InitialState::Mixed(r) => {
                    let eig = r.spectrum()?;
                    PureState::normalized(&eig.vector(d - 1))?
                }
            };
            (zeno_family(&reference, n, eps, rng)?.projectors, "zeno", Some(eps))
        }
    };
    Ok(GeneratedChain {
        chain: MeasurementChain::new(initial, projectors)?,
        family: name,
        eps_max,
    })
}

/// Runs a chain-level checker on the direct trace and, for mixed states, on
/// the purified trace as well.
fn chain_reports(
    g: &GeneratedChain,
    check: impl Fn(&ChainTrace) -> BoundReport,
) -> Result<Vec<BoundReport>> {
    let tag = |r: BoundReport, path: &str| r.with("path", path).with("family", g.family);
    let mut out = vec![tag(check(&run_chain(&g.chain)?), "direct")];
    if let InitialState::Mixed(_) = g.chain.initial() {
        out.push(tag(check(&run_chain(&g.chain.purified()?)?), "purified"));
    }
    Ok(out)
}

/// Generates trial `trial` of a hunt on `bound` and checks it.
///
/// Returns every report the instance produced and the serialized instance.
pub fn generate_and_check(
    bound: BoundId,
    cfg: &GeneratorConfig,
    seed: u64,
    trial: u64,
) -> Result<(Vec<BoundReport>, Value)> {
    let mut rng = stream(seed, trial);
    let rng = &mut rng;
    let (reports, instance) = match bound {
        BoundId::T1a | BoundId::T1b | BoundId::Sen => {
            let g = gen_chain(cfg, rng, false, None)?;
            let check = match bound {
                BoundId::T1a => check_t1a,
                BoundId::T1b => check_t1b,
                _ => check_sen,
            };
            (chain_reports(&g, check)?, g.to_json())
        }
        BoundId::Corollary1 => {
            let g = gen_chain(cfg, rng, true, None)?;
            let d = g.chain.dim();
            let nu: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
            let residual = corollary1_state_residual(g.chain.projectors(), &nu)?;
            let r = check_corollary1(g.chain.projectors())?
                .with("stateResidual", residual)
                .with("family", g.family);
            (vec![r], g.to_json())
        }
        BoundId::Wilde4th => {
            let n_hint = cfg.steps_max.max(1) as f64;
            let eps = rng.random_range(0.0..=1.0) / (64.0 * n_hint);
            let g = gen_chain(cfg, rng, false, Some(Family::Zeno(eps)))?;
            let bf = run_back_and_forth(&g.chain)?;
            let r = if bf.forward_epsilons.iter().sum::<f64>() > WILDE_EPS_CAP {
                BoundReport::skipped(BoundId::Wilde4th, "sum of epsilons above 1/64")
            } else {
                check_wilde4th(&bf)
            };
            (vec![r.with("family", g.family)], g.to_json())
        }
        BoundId::Lemma1Step => {
            let g = gen_chain(cfg, rng, true, None)?;
            (check_lemma1(&extract_angles(&g.chain)?)?, g.to_json())
        }
        BoundId::Lemma2Step => {
            let n_hint = cfg.steps_max.max(1) as f64;
            let eps = (rng.random_range(0.0..=1.0) / n_hint).min(0.5);
            let g = gen_chain(cfg, rng, true, Some(Family::Zeno(eps)))?;
            (check_lemma2(&extract_angles(&g.chain)?)?, g.to_json())
        }
        BoundId::AppendixBW => {
            let n = rng.random_range(cfg.steps_min..=cfg.steps_max);
            let total = rng.random_range(0.0..=0.5);
            let av = AngleVector::random(n, total, rng);
            (vec![check_appendix_b_w(&av.alphas)?], json!({ "alphas": av.alphas }))
        }
        BoundId::HayashiNagaoka => {
            let d = rng.random_range(cfg.dim_min..=cfg.dim_max);
            let s = if rng.random_bool(0.25) {
                let rank = rng.random_range(1..=d);
                Effect::new(random_projector(d, rank, rng)?.matrix().clone())?
            } else {
                random_effect(d, rng)?
            };
            let rank = rng.random_range(1..=d);
            let t = random_psd(d, rank, rng)?.scale_real(rng.random_range(0.0..=2.0));
            let r = check_hayashi_nagaoka(&s, &t)?;
            (vec![r], json!({ "s": s, "t": t }))
        }
        BoundId::PovmRepeat => {
            let d = rng.random_range(cfg.dim_min..=cfg.dim_max);
            let e = random_effect(d, rng)?;
            let rank = rng.random_range(1..=d);
            let rho = random_density(d, rank, rng)?;
            let m = rng.random_range(1..=cfg.povm_max_power);
            let r = check_povm_repeat(&e, &rho, m)?;
            (vec![r], json!({ "e": e, "rho": rho, "m": m }))
        }
    };
    let reports = reports
        .into_iter()
        .map(|r| r.with("seed", seed).with("trial", trial))
        .collect();
    Ok((reports, instance))
}

struct TrialOutcome {
    trial: u64,
    reports: Vec<BoundReport>,
    error: Option<String>,
    skipped: bool,
    violation_instance: Option<Value>,
}

fn run_trial(
    bound: BoundId,
    cfg: &GeneratorConfig,
    seed: u64,
    trial: u64,
    hook: &(dyn Fn(&mut BoundReport) + Sync),
) -> TrialOutcome {
    match generate_and_check(bound, cfg, seed, trial) {
        Ok((mut reports, instance)) => {
            reports.retain(BoundReport::is_checked);
            for r in reports.iter_mut() {
                hook(r);
            }
            let violated = reports.iter().any(|r| r.margin < -r.tolerance);
            TrialOutcome {
                trial,
                skipped: reports.is_empty(),
                reports,
                error: None,
                violation_instance: violated.then_some(instance),
            }
        }
        Err(Error::VanishingBranch { .. }) => TrialOutcome {
            trial,
            reports: Vec::new(),
            error: None,
            skipped: true,
            violation_instance: None,
        },
        Err(e) => TrialOutcome {
            trial,
            reports: Vec::new(),
            error: Some(e.to_string()),
            skipped: false,
            violation_instance: None,
        },
    }
}

fn histogram_edges() -> Vec<(Option<f64>, Option<f64>)> {
    let tol = crate::config::VIOLATION_TOL;
    let mut edges = vec![(None, Some(-tol)), (Some(-tol), Some(0.0)), (Some(0.0), Some(1e-12))];
    for e in -12..1 {
        edges.push((Some(10f64.powi(e)), Some(10f64.powi(e + 1))));
    }
    edges.push((Some(10.0), None));
    edges
}

fn histogram(margins: impl Iterator<Item = f64>) -> Vec<HistogramBin> {
    let mut bins: Vec<HistogramBin> = histogram_edges()
        .into_iter()
        .map(|(lower, upper)| HistogramBin { lower, upper, count: 0 })
        .collect();
    for m in margins {
        if let Some(b) = bins.iter_mut().find(|b| {
            b.lower.is_none_or(|l| m >= l) && b.upper.is_none_or(|u| m < u)
        }) {
            b.count += 1;
        }
    }
    bins
}

/// Checks `bound` on `trials` generated instances.
pub fn hunt_violations(bound: BoundId, cfg: &GeneratorConfig, trials: u64, seed: u64) -> Result<HuntSummary> {
    hunt_violations_with(bound, cfg, trials, seed, &|_| {})
}

/// [`hunt_violations`] with `hook` applied to every report before it is
/// judged. Used to exercise the violation path.
pub fn hunt_violations_with(
    bound: BoundId,
    cfg: &GeneratorConfig,
    trials: u64,
    seed: u64,
    hook: &(dyn Fn(&mut BoundReport) + Sync),
) -> Result<HuntSummary> {
    cfg.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(bound, cfg, seed, t, hook))
        .collect();

    let mut summary = HuntSummary {
        bound,
        trials,
        seed,
        tolerance: bound.tolerance(),
        generator: cfg.clone(),
        checked: 0,
        skipped: 0,
        errors: 0,
        first_error: None,
        reports: 0,
        min_margin: None,
        argmin_trial: None,
        argmin_report: None,
        argmin_instance: None,
        histogram: histogram(outcomes.iter().flat_map(|o| o.reports.iter().map(|r| r.margin))),
        violations: Vec::new(),
    };
    for o in outcomes {
        if let Some(e) = o.error {
            summary.errors += 1;
            summary.first_error.get_or_insert(format!("trial {}: {e}", o.trial));
            continue;
        }
        if o.skipped {
            summary.skipped += 1;
            continue;
        }
        summary.checked += 1;
        summary.reports += o.reports.len() as u64;
        for r in &o.reports {
            // Trials arrive in index order, so a strict comparison keeps the
            // lowest trial index among ties.
            if summary.min_margin.is_none_or(|m| r.margin < m) {
                summary.min_margin = Some(r.margin);
                summary.argmin_trial = Some(o.trial);
                summary.argmin_report = Some(r.clone());
            }
        }
        if let Some(instance) = o.violation_instance {
            for r in o.reports.iter().filter(|r| r.margin < -r.tolerance) {
                summary.violations.push(Violation {
                    trial: o.trial,
                    margin: r.margin,
                    report: r.clone(),
                    instance: instance.clone(),
                });
            }
        }
    }
    if let Some(t) = summary.argmin_trial {
        summary.argmin_instance = Some(generate_and_check(bound, cfg, seed, t)?.1);
    }
    Ok(summary)
}

/// Smallest grid point `x = i·step` in `(0, 1]` at which the (1-b) right side
/// drops below Sen's. Analytically the two meet at `x = 1/4`.
pub fn sen_t1b_crossover(step: f64) -> Option<f64> {
    if !(step > 0.0 && step <= 1.0) {
        return None;
    }
    let count = (1.0 / step).floor() as u64;
    (1..=count).map(|i| i as f64 * step).find(|&x| {
        let (t1b, sen) = regime_rhs(x);
        t1b < sen
    })
}
