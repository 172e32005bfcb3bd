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

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qubound::bounds::{BoundId, GeneratorConfig};
use qubound::harness::{
    angles_csv, cmd_angles, cmd_decode, cmd_hunt, cmd_verify, cmd_zeno, emit, exit_code, hunt_csv,
    rate_warning, read_json, reports_csv, write_reproduction, Command, DecodeParams, Envelope,
    Format, RunConfig, VerifyParams, ZenoParams, EXIT_OK, EXIT_VIOLATION,
};
use qubound::seqchain::ChainInstance;
use qubound::seqdecode::{write_rows_csv, CqChannel, DecodeMode};
use qubound::{ResourceCaps, Result, Tolerances};

#[derive(Parser, Debug)]
#[command(name = "qubound", version, about = "Sequential projective measurements and quantum union bounds")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Master seed; trial t draws from stream (seed, t).
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Violation tolerance on bound margins.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Largest Hilbert dimension (overrides QUBOUND_MAX_DIM).
    #[arg(long, global = true)]
    max_dim: Option<usize>,

    #[arg(long, global = true)]
    trials: Option<u64>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct GenArgs {
    #[arg(long, default_value_t = 2)]
    dim_min: usize,
    #[arg(long, default_value_t = 8)]
    dim_max: usize,
    #[arg(long, default_value_t = 1)]
    steps_min: usize,
    #[arg(long, default_value_t = 8)]
    steps_max: usize,
    #[arg(long, default_value_t = 0.5)]
    mixed_fraction: f64,
    #[arg(long, default_value_t = 0.5)]
    zeno_fraction: f64,
    #[arg(long, default_value_t = 0.05)]
    zeno_eps_max: f64,
    #[arg(long, default_value_t = 10)]
    povm_max_power: u32,
}

impl GenArgs {
    fn config(&self) -> GeneratorConfig {
        GeneratorConfig {
            dim_min: self.dim_min,
            dim_max: self.dim_max,
            steps_min: self.steps_min,
            steps_max: self.steps_max,
            mixed_fraction: self.mixed_fraction,
            zeno_fraction: self.zeno_fraction,
            zeno_eps_max: self.zeno_eps_max,
            povm_max_power: self.povm_max_power,
            ..GeneratorConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Hunt every bound for violations (default 10^4 trials each).
    Verify {
        /// Comma-separated bound ids (default: all).
        #[arg(long, value_delimiter = ',')]
        bounds: Vec<String>,
        #[command(flatten)]
        generator: GenArgs,
        /// Random angle vectors for the minimizer scan.
        #[arg(long, default_value_t = 100)]
        scan_vectors: usize,
        #[arg(long, default_value_t = 10_000)]
        scan_grid: usize,
    },
    /// Angle record of a chain instance.
    Angles {
        /// Instance JSON: {"rho": ..., "projectors": [...]}.
        instance: PathBuf,
        /// Measure a purification of a mixed initial state.
        #[arg(long)]
        purify: bool,
    },
    /// Equiangular qubit chain and near-identity chains.
    Zeno {
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Run a near-identity family with this per-step failure cap.
        #[arg(long)]
        eps_max: Option<f64>,
        /// Skip the equiangular qubit chain.
        #[arg(long)]
        no_equiangular: bool,
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Sequential decoding experiment over random codebooks.
    Decode {
        /// Channel JSON: {"prior": [...], "outputs": [...]}. Defaults to |0>, |+>.
        #[arg(long)]
        channel: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        rate: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Summary JSON path (stdout when omitted).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Hunt one bound for violations.
    Hunt {
        #[arg(long)]
        bound: String,
        #[command(flatten)]
        generator: GenArgs,
    },
}

fn base_config(cli: &Cli, command: Command, default_trials: u64, default_format: Format) -> RunConfig {
    let mut caps = ResourceCaps::from_env();
    if let Some(d) = cli.max_dim {
        caps.max_dim = d;
    }
    let mut tolerances = Tolerances::default();
    if let Some(t) = cli.tol {
        tolerances.violation = t;
    }
    RunConfig {
        command,
        seed: cli.seed,
        tolerances,
        caps,
        out: cli.out.clone(),
        format: match cli.format {
            Some(FormatArg::Json) => Format::Json,
            Some(FormatArg::Csv) => Format::Csv,
            None => default_format,
        },
        trials: cli.trials.unwrap_or(default_trials),
        params: serde_json::Value::Null,
    }
}

fn parse_bounds(names: &[String]) -> Result<Vec<BoundId>> {
    if names.is_empty() {
        return Ok(BoundId::ALL.to_vec());
    }
    names.iter().map(|s| s.parse()).collect()
}

fn run(cli: Cli) -> Result<i32> {
    match &cli.command {
        Cmd::Verify {
            bounds,
            generator,
            scan_vectors,
            scan_grid,
        } => {
            let mut cfg = base_config(&cli, Command::Verify, 10_000, Format::Json);
            let params = VerifyParams {
                bounds: parse_bounds(bounds)?,
                generator: generator.config(),
                scan_vectors: *scan_vectors,
                scan_grid: *scan_grid,
                ..VerifyParams::default()
            };
            cfg.params = serde_json::to_value(&params)?;
            let report = cmd_verify(&cfg, &params)?;
            let text = match cfg.format {
                Format::Json => Envelope::new(cfg.clone(), &report).to_json()?,
                Format::Csv => hunt_csv(&report.bounds)?,
            };
            emit(cfg.out.as_deref(), &text)?;
            if report.total_violations > 0 {
                let path = write_reproduction(&cfg, &report.bounds)?;
                eprintln!("{} violation(s); reproduction data in {}", report.total_violations, path.display());
                return Ok(EXIT_VIOLATION);
            }
            Ok(EXIT_OK)
        }
        Cmd::Hunt { bound, generator } => {
            let mut cfg = base_config(&cli, Command::Hunt, 10_000, Format::Json);
            let bound: BoundId = bound.parse()?;
            let gen = generator.config();
            cfg.params = json!({ "bound": bound, "generator": gen });
            let summary = cmd_hunt(&cfg, bound, &gen)?;
            let text = match cfg.format {
                Format::Json => Envelope::new(cfg.clone(), &summary).to_json()?,
                Format::Csv => hunt_csv(std::slice::from_ref(&summary))?,
            };
            emit(cfg.out.as_deref(), &text)?;
            if summary.violation_count() > 0 {
                let path = write_reproduction(&cfg, std::slice::from_ref(&summary))?;
                eprintln!("{} violation(s); reproduction data in {}", summary.violation_count(), path.display());
                return Ok(EXIT_VIOLATION);
            }
            Ok(EXIT_OK)
        }
        Cmd::Angles { instance, purify } => {
            let mut cfg = base_config(&cli, Command::Angles, 1, Format::Json);
            cfg.params = json!({ "instance": instance, "purify": purify });
            let inst: ChainInstance = read_json(instance)?;
            let report = cmd_angles(&inst, *purify)?;
            let text = match cfg.format {
                Format::Json => Envelope::new(cfg.clone(), &report).to_json()?,
                Format::Csv => angles_csv(&report)?,
            };
            emit(cfg.out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Cmd::Zeno {
            n,
            eps_max,
            no_equiangular,
            dim,
        } => {
            let mut cfg = base_config(&cli, Command::Zeno, 1, Format::Json);
            let params = ZenoParams {
                n: *n,
                equiangular: !no_equiangular,
                eps_max: *eps_max,
                dim: *dim,
            };
            cfg.params = serde_json::to_value(&params)?;
            let report = cmd_zeno(&cfg, &params)?;
            let text = match cfg.format {
                Format::Json => Envelope::new(cfg.clone(), &report).to_json()?,
                Format::Csv => {
                    let reports: Vec<_> = report
                        .equiangular
                        .iter()
                        .chain(report.zeno_family.iter())
                        .flat_map(|s| s.reports.iter().cloned())
                        .collect();
                    reports_csv(&reports)?
                }
            };
            emit(cfg.out.as_deref(), &text)?;
            let violated = report
                .equiangular
                .iter()
                .chain(report.zeno_family.iter())
                .flat_map(|s| s.reports.iter())
                .any(|r| r.margin < -cfg.tolerances.violation);
            Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
        }
        Cmd::Decode {
            channel,
            n,
            rate,
            delta,
            mode,
            summary,
        } => {
            let mut cfg = base_config(&cli, Command::Decode, 500, Format::Csv);
            let params = DecodeParams {
                channel: channel.clone(),
                n: *n,
                rate: *rate,
                delta: *delta,
                mode: mode.parse::<DecodeMode>()?,
            };
            cfg.params = serde_json::to_value(&params)?;
            let ch = match channel {
                Some(p) => read_json::<CqChannel>(p)?,
                None => CqChannel::binary_zero_plus(),
            };
            if let Some(w) = rate_warning(&ch, *rate) {
                eprintln!("{w}");
            }
            let stats = cmd_decode(&cfg, &ch, &params)?;
            let summary_text = Envelope::new(cfg.clone(), &stats).to_json()?;
            match cfg.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_rows_csv(&stats.rows, &mut buf)?;
                    emit(cfg.out.as_deref(), &String::from_utf8_lossy(&buf))?;
                    match summary {
                        Some(p) => emit(Some(p), &summary_text)?,
                        None if cfg.out.is_some() => emit(None, &summary_text)?,
                        None => eprint!("{summary_text}"),
                    }
                }
                Format::Json => {
                    emit(cfg.out.as_deref(), &summary_text)?;
                    if let Some(p) = summary {
                        emit(Some(p), &summary_text)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}

