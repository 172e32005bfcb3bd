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

//! Command implementations behind the `qubound` binary.
//!
//! Each command returns a serializable result; [`Envelope`] wraps it with the
//! resolved configuration and a timestamp so two runs with the same
//! configuration differ only in the `timestamp` field.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::{
    check_lemma1, check_lemma2, check_sen, check_t1a, check_t1b, hunt_violations_with,
    minimizer_scan_suite, sen_t1b_crossover, BoundId, BoundReport, GeneratorConfig, HuntSummary,
    ScanSuite,
};
use crate::config::{ResourceCaps, Tolerances};
use crate::qstate::{random_pure_state, stream, zeno_family};
use crate::seqchain::{
    equiangular_chain, extract_angles, extract_angles_with, run_chain, run_chain_with,
    AnglesReport, ChainInstance, ChainOptions, ChainTrace, MeasurementChain,
};
use crate::seqdecode::{decoding_experiment, CqChannel, DecodeMode, DecodeStats, ExperimentConfig};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_VIOLATION: i32 = 5;

/// Exit status for an error that ends a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Io(_) => EXIT_USAGE,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Angles,
    Zeno,
    Decode,
    Hunt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything that determines a run's output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub caps: ResourceCaps,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub trials: u64,
    /// Command-specific parameters.
    pub params: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Envelope<T> {
    pub tool: &'static str,
    pub version: &'static str,
    /// Seconds since the Unix epoch. The only field that varies between
    /// otherwise identical runs.
    pub timestamp: u64,
    pub config: RunConfig,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(config: RunConfig, result: T) -> Self {
        Envelope {
            tool: "qubound",
            version: env!("CARGO_PKG_VERSION"),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| {
        Error::Validation(format!("{}: {e}", path.display()))
    })
}

fn set_tolerance(tol: f64) -> impl Fn(&mut BoundReport) + Sync {
    move |r: &mut BoundReport| {
        r.tolerance = tol;
        r.refresh();
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyParams {
    pub bounds: Vec<BoundId>,
    pub generator: GeneratorConfig,
    pub scan_vectors: usize,
    pub scan_grid: usize,
    pub crossover_step: f64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            bounds: BoundId::ALL.to_vec(),
            generator: GeneratorConfig::default(),
            scan_vectors: 100,
            scan_grid: 10_000,
            crossover_step: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub total_violations: usize,
    pub bounds: Vec<HuntSummary>,
    pub minimizer_scan: Option<ScanSuite>,
    pub sen_t1b_crossover: Option<f64>,
}

/// The purified chain of a `d`-dimensional mixed state lives in `d²`.
fn check_generator_caps(g: &GeneratorConfig, caps: &ResourceCaps) -> Result<()> {
    caps.check_dim(g.dim_max * g.dim_max, "purified instances (dimMax²)")
}

/// Hunts every selected bound with `trials` instances each.
pub fn cmd_verify(cfg: &RunConfig, params: &VerifyParams) -> Result<VerifyReport> {
    check_generator_caps(&params.generator, &cfg.caps)?;
    let hook = set_tolerance(cfg.tolerances.violation);
    let mut bounds = Vec::with_capacity(params.bounds.len());
    for &b in &params.bounds {
        let mut s = hunt_violations_with(b, &params.generator, cfg.trials, cfg.seed, &hook)?;
        s.tolerance = cfg.tolerances.violation;
        bounds.push(s);
    }
    let minimizer_scan = if params.scan_vectors > 0 && cfg.trials > 0 {
        Some(minimizer_scan_suite(params.scan_vectors, params.scan_grid, cfg.seed, 1e-6)?)
    } else {
        None
    };
    Ok(VerifyReport {
        total_violations: bounds.iter().map(HuntSummary::violation_count).sum(),
        bounds,
        minimizer_scan,
        sen_t1b_crossover: sen_t1b_crossover(params.crossover_step),
    })
}

pub fn cmd_hunt(cfg: &RunConfig, bound: BoundId, generator: &GeneratorConfig) -> Result<HuntSummary> {
    check_generator_caps(generator, &cfg.caps)?;
    let hook = set_tolerance(cfg.tolerances.violation);
    let mut s = hunt_violations_with(bound, generator, cfg.trials, cfg.seed, &hook)?;
    s.tolerance = cfg.tolerances.violation;
    Ok(s)
}

/// Violations of a hunt or verify run, written so that each can be
/// regenerated from `(bound, seed, trial)` or replayed from `instance`.
#[derive(Clone, Debug, Serialize)]
pub struct Reproduction<'a> {
    pub seed: u64,
    pub config: &'a RunConfig,
    pub violations: Vec<&'a crate::bounds::Violation>,
}

/// Where the reproduction file goes: next to `--out`, else the working
/// directory.
pub fn reproduction_path(cfg: &RunConfig) -> PathBuf {
    match &cfg.out {
        Some(p) => {
            let mut name = p.file_name().map(|n| n.to_os_string()).unwrap_or_default();
            name.push(".repro.json");
            p.with_file_name(name)
        }
        None => PathBuf::from(format!("qubound-repro-{}.json", cfg.seed)),
    }
}

pub fn write_reproduction(cfg: &RunConfig, summaries: &[HuntSummary]) -> Result<PathBuf> {
    let path = reproduction_path(cfg);
    let repro = Reproduction {
        seed: cfg.seed,
        config: cfg,
        violations: summaries.iter().flat_map(|s| s.violations.iter()).collect(),
    };
    fs::write(&path, serde_json::to_string_pretty(&repro)? + "\n")?;
    Ok(path)
}

pub fn hunt_csv(summaries: &[HuntSummary]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bound", "trials", "checked", "skipped", "errors", "reports", "min_margin", "argmin_trial", "violations"])?;
    for s in summaries {
        w.write_record([
            s.bound.to_string(),
            s.trials.to_string(),
            s.checked.to_string(),
            s.skipped.to_string(),
            s.errors.to_string(),
            s.reports.to_string(),
            s.min_margin.map(|m| format!("{m:e}")).unwrap_or_default(),
            s.argmin_trial.map(|t| t.to_string()).unwrap_or_default(),
            s.violation_count().to_string(),
        ])?;
    }
    csv_string(w)
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::validation(e.to_string()))
}

/// Angles of an instance. Mixed states are refused unless `purify` is set,
/// in which case the chain is lifted to a purification first.
pub fn cmd_angles(instance: &ChainInstance, purify: bool) -> Result<AnglesReport> {
    let chain = if purify {
        instance.to_chain()?.purified()?
    } else {
        instance.to_pure_chain()?
    };
    let trace = extract_angles(&chain)?;
    AnglesReport::from_trace(&trace)
        .ok_or_else(|| Error::Precondition("angles unavailable for this instance".into()))
}

pub fn angles_csv(r: &AnglesReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["step", "theta", "alpha", "beta", "gamma", "step_prob", "epsilon"])?;
    for i in 0..r.theta.len() {
        w.write_record([
            (i + 1).to_string(),
            r.theta[i].to_string(),
            r.alpha[i].to_string(),
            r.beta[i].to_string(),
            r.gamma[i].to_string(),
            r.step_prob[i].to_string(),
            r.epsilons[i].to_string(),
        ])?;
    }
    csv_string(w)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZenoParams {
    pub n: usize,
    pub equiangular: bool,
    pub eps_max: Option<f64>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainSummary {
    pub d: usize,
    pub n: usize,
    pub success: f64,
    pub epsilons: Vec<f64>,
    pub trace_distance: f64,
    pub reports: Vec<BoundReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ZenoReport {
    pub equiangular: Option<ChainSummary>,
    /// `cos^{2n}(π/(2n))`.
    pub closed_form: Option<f64>,
    pub closed_form_error: Option<f64>,
    pub zeno_family: Option<ChainSummary>,
}

fn summarize(trace: &ChainTrace, d: usize) -> Result<ChainSummary> {
    let mut reports = vec![check_t1a(trace), check_t1b(trace), check_sen(trace)];
    if trace.angles.is_some() {
        reports.extend(check_lemma1(trace)?);
        reports.extend(check_lemma2(trace)?);
    }
    Ok(ChainSummary {
        d,
        n: trace.len(),
        success: trace.success_probability,
        epsilons: trace.epsilons.clone(),
        trace_distance: trace.trace_distance,
        reports,
    })
}

/// Angles when every `P_iψ` is non-zero, otherwise a plain run. Any branch
/// with positive probability is followed, so the `N = 1` equiangular chain
/// reports its (round-off sized) success instead of failing.
fn angles_or_plain(chain: &MeasurementChain) -> Result<ChainTrace> {
    let opts = ChainOptions {
        prob_floor: 0.0,
        ..ChainOptions::default()
    };
    match extract_angles_with(chain, &opts) {
        Err(Error::VanishingBranch { .. }) => run_chain_with(chain, &opts),
        other => other,
    }
}

pub fn cmd_zeno(cfg: &RunConfig, p: &ZenoParams) -> Result<ZenoReport> {
    if p.n == 0 {
        return Err(Error::validation("zeno: n >= 1"));
    }
    let mut report = ZenoReport {
        equiangular: None,
        closed_form: None,
        closed_form_error: None,
        zeno_family: None,
    };
    if p.equiangular {
        let chain = equiangular_chain(p.n)?;
        let trace = angles_or_plain(&chain)?;
        let closed = (std::f64::consts::FRAC_PI_2 / p.n as f64).cos().powi(2 * p.n as i32);
        report.closed_form = Some(closed);
        report.closed_form_error = Some((trace.success_probability - closed).abs());
        report.equiangular = Some(summarize(&trace, 2)?);
    }
    if let Some(eps) = p.eps_max {
        cfg.caps.check_dim(p.dim, "zeno family")?;
        let mut rng = stream(cfg.seed, 0);
        let psi = random_pure_state(p.dim, &mut rng)?;
        let fam = zeno_family(&psi, p.n, eps, &mut rng)?;
        let trace = angles_or_plain(&MeasurementChain::pure(psi, fam.projectors)?)?;
        report.zeno_family = Some(summarize(&trace, p.dim)?);
    }
    Ok(report)
}

pub fn reports_csv(reports: &[BoundReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bound", "lhs", "rhs", "margin", "satisfied", "status"])?;
    for r in reports {
        w.write_record([
            r.bound.to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.margin.to_string(),
            r.satisfied.to_string(),
            serde_json::to_value(r.status)?.as_str().unwrap_or_default().to_string(),
        ])?;
    }
    csv_string(w)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DecodeParams {
    pub channel: Option<PathBuf>,
    pub n: usize,
    pub rate: f64,
    pub delta: f64,
    pub mode: DecodeMode,
}

/// Warning text when the rate exceeds `log₂ J`.
pub fn rate_warning(ch: &CqChannel, rate: f64) -> Option<String> {
    let max = (ch.alphabet_size() as f64).log2();
    (rate > max + 1e-12).then(|| {
        format!("warning: rate {rate} exceeds log2 J = {max}; unreachable even without noise")
    })
}

pub fn cmd_decode(cfg: &RunConfig, ch: &CqChannel, p: &DecodeParams) -> Result<DecodeStats> {
    let exp = ExperimentConfig {
        n: p.n,
        rate: p.rate,
        delta: p.delta,
        trials: cfg.trials,
        seed: cfg.seed,
        mode: p.mode,
        caps: cfg.caps,
    };
    decoding_experiment(ch, &exp)
}

/// `run_chain` on an instance, for callers that only want the trace.
pub fn run_instance(instance: &ChainInstance) -> Result<ChainTrace> {
    run_chain(&instance.to_chain()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command, trials: u64) -> RunConfig {
        RunConfig {
            command,
            seed: 7,
            tolerances: Tolerances::default(),
            caps: ResourceCaps::default(),
            out: None,
            format: Format::Json,
            trials,
            params: Value::Null,
        }
    }

    #[test]
    fn verify_zero_trials_is_empty() {
        let r = cmd_verify(&cfg(Command::Verify, 0), &VerifyParams::default()).unwrap();
        assert_eq!(r.total_violations, 0);
        assert!(r.bounds.iter().all(|b| b.checked == 0));
        assert!(r.minimizer_scan.is_none());
    }

    #[test]
    fn verify_resource_gate() {
        let mut c = cfg(Command::Verify, 1);
        c.caps.max_dim = 16;
        let err = cmd_verify(&c, &VerifyParams::default()).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_RESOURCE);
    }

    #[test]
    fn zeno_closed_form() {
        let p = ZenoParams {
            n: 1,
            equiangular: true,
            eps_max: None,
            dim: 4,
        };
        let r = cmd_zeno(&cfg(Command::Zeno, 1), &p).unwrap();
        assert!(r.closed_form_error.unwrap() < 1e-12);
        let p = ZenoParams {
            n: 10,
            equiangular: true,
            eps_max: Some(1e-3),
            dim: 4,
        };
        let r = cmd_zeno(&cfg(Command::Zeno, 1), &p).unwrap();
        assert!(r.closed_form_error.unwrap() < 1e-12);
        assert!((r.closed_form.unwrap() - 0.7805460697811408).abs() < 1e-12);
        let fam = r.zeno_family.unwrap();
        assert!(fam.reports.iter().all(|r| r.satisfied));
    }

    #[test]
    fn reproduction_path_naming() {
        let mut c = cfg(Command::Hunt, 1);
        assert_eq!(reproduction_path(&c), PathBuf::from("qubound-repro-7.json"));
        c.out = Some(PathBuf::from("/tmp/x/report.json"));
        assert_eq!(reproduction_path(&c), PathBuf::from("/tmp/x/report.json.repro.json"));
    }

    #[test]
    fn rate_warning_gate() {
        let ch = CqChannel::binary_zero_plus();
        assert!(rate_warning(&ch, 0.5).is_none());
        assert!(rate_warning(&ch, 1.5).is_some());
    }
}
