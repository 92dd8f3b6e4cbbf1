//! `msa-polar`: batch front-end for labeler validation, code construction,
//! exact error-probability tables, rate thresholds and simulation.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use msa_polar::channels::{validate_labeler, ChannelConfig, LabeledChannel};
use msa_polar::decoder::{simulate, DecoderKind, SimConfig};
use msa_polar::posynomial::label_distribution;
use msa_polar::synthesis::{code_from_report, synthesize_all, Ranking};
use msa_polar::thresholds::{
    compute_rates, compute_thresholds, sweep, sweep_csv, Node, ScanParams, SweepRow,
};
use serde_json::json;
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "msa-polar",
    version,
    about = "Polar codes under min-sum successive-cancellation decoding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the channel's labeler is good (exit 0) or not (exit 1).
    Validate(Common),
    /// Exact per-index error probability, bound and information table.
    PeTable {
        #[command(flatten)]
        common: Common,
        /// log2 of the block length.
        #[arg(long)]
        n: usize,
    },
    /// Choose the k most reliable indices.
    Construct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Reliability measure used for ranking.
        #[arg(long, value_enum, default_value_t = Rank::Pe)]
        rank: Rank,
    },
    /// Lower and upper rate thresholds, for one channel or over a grid.
    Thresholds {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scan: ScanArgs,
        /// Sweep the channel parameter over `start:stop:step`.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Monte Carlo simulation.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        /// Number of information bits; every position carries data if absent.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Decoder::Minsum)]
        decoder: Decoder,
        /// Depth of the genie blocks; defaults to n (one block per bit).
        #[arg(long)]
        genie_depth: Option<u32>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
}

#[derive(Args)]
struct Common {
    /// Channel description: a JSON file path or inline JSON.
    #[arg(long)]
    channel: String,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long = "dg", default_value_t = 12)]
    d_g: u32,
    #[arg(long = "de", default_value_t = 36)]
    d_e: u32,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rank {
    Pe,
    ZStar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Decoder {
    Exact,
    Minsum,
    Genie,
}

#[derive(Error, Debug)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn load_channel(spec: &str) -> Result<LabeledChannel, CliError> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        fs::read_to_string(spec)
            .map_err(|e| CliError::Usage(format!("cannot read channel file {spec}: {e}")))?
    };
    let config = ChannelConfig::from_json(&text)
        .map_err(|e| CliError::Usage(format!("bad channel: {e}")))?;
    config
        .build()
        .map_err(|e| CliError::Usage(format!("bad channel: {e}")))
}

fn emit(common: &Common, body: &str) -> Result<(), CliError> {
    let mut body = body.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &common.out {
        Some(path) => fs::write(path, body)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Domain(e.to_string())),
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable output")
}

fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "grid `{text}` must be start:stop:step with step > 0 and stop >= start"
        ))
    };
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(CliError::Usage(format!("grid `{text}` has {count} points")));
    }
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate(common) => {
            let ch = load_channel(&common.channel)?;
            let report = validate_labeler(&ch);
            emit(&common, &pretty(&report))?;
            if report.is_good {
                Ok(())
            } else {
                Err(CliError::Domain(format!(
                    "labeler is not good: {}",
                    report.summary()
                )))
            }
        }
        Command::PeTable { common, n } => {
            let ch = load_channel(&common.channel)?;
            eprintln!("synthesizing {} indices", 1u64 << n.min(63));
            let report = synthesize_all(&ch, n).map_err(domain)?;
            let body = match common.format.unwrap_or(Format::Csv) {
                Format::Csv => report.to_csv(),
                Format::Json => pretty(&report),
            };
            emit(&common, &body)
        }
        Command::Construct { common, n, k, rank } => {
            let ch = load_channel(&common.channel)?;
            if n > msa_polar::synthesis::DEFAULT_MAX_N || k > 1 << n {
                return Err(CliError::Domain(format!(
                    "k = {k} is out of range for n = {n}"
                )));
            }
            let report = synthesize_all(&ch, n).map_err(domain)?;
            let ranking = match rank {
                Rank::Pe => Ranking::ErrorProbability,
                Rank::ZStar => Ranking::ZStar,
            };
            let code = code_from_report(&report, k, ranking).map_err(domain)?;
            emit(&common, &code.to_json())
        }
        Command::Thresholds { common, scan, grid } => {
            let ch = load_channel(&common.channel)?;
            let params = ScanParams {
                d_g: scan.d_g,
                d_e: scan.d_e,
                eps: scan.eps,
            };
            params
                .validate()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            match grid {
                Some(text) => {
                    let grid = parse_grid(&text)?;
                    eprintln!(
                        "sweeping {} points with d_G={} d_E={} eps={}",
                        grid.len(),
                        params.d_g,
                        params.d_e,
                        params.eps
                    );
                    let rows = sweep(&ch, &grid, params).map_err(domain)?;
                    let body = match common.format.unwrap_or(Format::Csv) {
                        Format::Csv => sweep_csv(&rows),
                        Format::Json => pretty(&rows),
                    };
                    emit(&common, &body)
                }
                None => {
                    let format = common.format.unwrap_or(Format::Json);
                    if let (Format::Csv, Some(param)) = (format, ch.parameter()) {
                        let rows = sweep(&ch, &[param], params).map_err(domain)?;
                        return emit(&common, &sweep_csv(&rows));
                    }
                    if format == Format::Csv {
                        let rates = compute_rates(&ch, params).map_err(domain)?;
                        return emit(
                            &common,
                            &sweep_csv(&[SweepRow {
                                param: f64::NAN,
                                c: label_distribution(&ch).mutual_information(),
                                r_u: rates.r_u,
                                r_l: rates.r_l,
                                c_biawgn: None,
                                c_awgn: None,
                            }]),
                        );
                    }
                    let tree = compute_thresholds(&ch, params).map_err(domain)?;
                    eprintln!("|G| = {}, |E| = {}", tree.g.len(), tree.e.len());
                    emit(&common, &tree.to_json())
                }
            }
        }
        Command::Simulate {
            common,
            n,
            k,
            decoder,
            genie_depth,
            trials,
        } => {
            let ch = load_channel(&common.channel)?;
            if n > msa_polar::synthesis::DEFAULT_MAX_N {
                return Err(CliError::Domain(format!(
                    "n = {n} exceeds {}",
                    msa_polar::synthesis::DEFAULT_MAX_N
                )));
            }
            let report = synthesize_all(&ch, n).map_err(domain)?;
            let info_set = match k {
                Some(k) => Some(
                    code_from_report(&report, k, Ranking::ErrorProbability)
                        .map_err(domain)?
                        .info_set,
                ),
                None => None,
            };
            let n32 = n as u32;
            let kind = match decoder {
                Decoder::Exact => DecoderKind::Exact,
                Decoder::Minsum => DecoderKind::MinSum,
                Decoder::Genie => {
                    let d = genie_depth.unwrap_or(n32);
                    if d > n32 {
                        return Err(CliError::Usage(format!("genie depth {d} exceeds n = {n}")));
                    }
                    DecoderKind::BlockGenie {
                        g: (0..1u64 << d).map(|j| Node(d, j)).collect(),
                    }
                }
            };
            eprintln!("simulating {trials} trials");
            let config = SimConfig {
                n: n32,
                info_set,
                decoder: kind,
                trials,
                seed: common.seed,
            };
            let result = simulate(&ch, &config).map_err(domain)?;
            let mut value = serde_json::to_value(&result).expect("serializable result");
            if genie_depth.unwrap_or(n32) == n32 && matches!(decoder, Decoder::Genie) {
                let agreement = result.agreement(&report.pe(), 4.0);
                value["consistency"] = json!({
                    "sigmas": agreement.sigmas,
                    "within": agreement.within,
                    "total": agreement.total,
                    "worst_z": agreement.worst_z,
                    "consistent": agreement.within == agreement.total,
                });
            }
            emit(&common, &pretty(&value))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
