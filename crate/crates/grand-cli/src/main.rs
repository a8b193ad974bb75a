//! grandsim: Monte Carlo simulation and decoding CLI for the GRAND family.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use grand_core::alist::{load_alist, save_alist};
use grand_core::channel::LlrVector;
use grand_core::code::{by_name, sphere_union_rate, LinearCode};
use grand_core::decoder::{decode, DecoderConfig, DEFAULT_MAX_QUERIES};
use grand_core::sim::{
    optimize_parameters, sweep, OptimizeConfig, StoppingRule, SweepConfig, SweepResult,
};

#[derive(Parser)]
#[command(
    name = "grandsim",
    about = "GRAND-family decoders for binary linear codes: simulation, decoding and parameter search",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure BLER and average guesswork over an Eb/N0 grid
    Simulate(SimulateArgs),
    /// Two-stage (L_max, theta) search against a reference decoder
    Optimize(OptimizeArgs),
    /// Decode one LLR vector read from a file
    Decode(DecodeArgs),
    /// Print code parameters
    CodeInfo(CodeArgs),
    /// Write a named code's parity-check matrix in alist format
    ExportAlist(ExportArgs),
}

#[derive(Args)]
struct CodeArgs {
    /// Built-in code name: hamming-8-4, ebch-32-21, ebch-256-239
    #[arg(long, conflicts_with = "alist")]
    code: Option<String>,
    /// Parity-check matrix in alist format
    #[arg(long)]
    alist: Option<PathBuf>,
}

impl CodeArgs {
    fn load(&self) -> Result<LinearCode> {
        match (&self.code, &self.alist) {
            (Some(name), None) => Ok(by_name(name)?),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "alist".into());
                Ok(load_alist(&text, label)?)
            }
            _ => bail!("exactly one of --code or --alist is required"),
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DecoderKind {
    Orbgrand,
    Sygrand,
    Ordept,
}

#[derive(Args)]
struct DecoderArgs {
    #[arg(long, value_enum)]
    decoder: DecoderKind,
    /// SyGRAND termination threshold in [0, 1]
    #[arg(long)]
    theta: Option<f64>,
    /// SyGRAND maximal list size
    #[arg(long)]
    lmax: Option<usize>,
    /// ORDEPT query budget
    #[arg(long)]
    t: Option<u64>,
    /// ORDEPT maximal list size
    #[arg(long)]
    cmax: Option<usize>,
    /// Abandon decoding after this many queries
    #[arg(long, default_value_t = DEFAULT_MAX_QUERIES)]
    max_queries: u64,
    /// Disable the even-parity query restriction on even-weight codes
    #[arg(long)]
    no_parity: bool,
}

impl DecoderArgs {
    fn build(&self) -> Result<DecoderConfig> {
        let cfg = match self.decoder {
            DecoderKind::Orbgrand => DecoderConfig::orbgrand(),
            DecoderKind::Sygrand => {
                let (Some(theta), Some(lmax)) = (self.theta, self.lmax) else {
                    bail!("sygrand requires --theta and --lmax");
                };
                DecoderConfig::sygrand(theta, lmax)
            }
            DecoderKind::Ordept => {
                let (Some(t), Some(cmax)) = (self.t, self.cmax) else {
                    bail!("ordept requires --t and --cmax");
                };
                DecoderConfig::ordept(t, cmax)
            }
        };
        Ok(cfg
            .with_max_queries(self.max_queries)
            .with_parity_constraint(!self.no_parity))
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    /// Eb/N0 grid in dB as start:step:stop, or a single value
    #[arg(long)]
    ebn0: String,
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, default_value_t = 10_000_000)]
    max_trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also measure a reference decoder and report log2 guesswork ratios
    #[arg(long, value_enum)]
    reference: Option<DecoderKind>,
    /// Run primary and reference on identical per-trial noise
    #[arg(long)]
    paired: bool,
    /// CSV output path
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report path
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Reference decoder whose BLER curve must be matched
    #[arg(long, value_enum, default_value = "orbgrand")]
    reference: DecoderKind,
    #[arg(long)]
    ebn0: String,
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, default_value_t = 10_000_000)]
    max_trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    lmax_cap: usize,
    #[arg(long, default_value_t = 0.01)]
    theta_step: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_QUERIES)]
    max_queries: u64,
    #[arg(long)]
    no_parity: bool,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    /// File with one whitespace-separated natural-log LLR per bit
    /// (positive = bit 0 more likely)
    #[arg(long)]
    llr: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .with_context(|| format!("invalid Eb/N0 value '{s}'"))
    };
    match parts.as_slice() {
        [one] => Ok(vec![parse(one)?]),
        [start, step, stop] => {
            let (a, s, b) = (parse(start)?, parse(step)?, parse(stop)?);
            if s <= 0.0 {
                bail!("Eb/N0 step must be positive");
            }
            let count = ((b - a) / s + 1e-9).floor() as usize + 1;
            if b < a {
                bail!("Eb/N0 stop must not precede start");
            }
            Ok((0..count).map(|i| a + i as f64 * s).collect())
        }
        _ => bail!("Eb/N0 grid must be 'start:step:stop' or a single value"),
    }
}

fn print_points(result: &SweepResult) {
    println!(
        "{:>8} {:>10} {:>12} {:>10} {:>12} {:>12} {:>10} {:>10}",
        "ebn0_db", "trials", "block_errs", "bler", "ci_high", "avg_queries", "avg_list", "log2_vs_ref"
    );
    for (i, p) in result.points.iter().enumerate() {
        let ratio = result
            .log2_ratios
            .as_ref()
            .map(|r| format!("{:.3}", r[i]))
            .unwrap_or_default();
        println!(
            "{:>8.2} {:>10} {:>12} {:>10.3e} {:>12.3e} {:>12.1} {:>10.3} {:>10}",
            p.ebn0_db, p.trials, p.block_errors, p.bler, p.bler_ci_high, p.avg_queries, p.avg_list_size, ratio
        );
    }
    if let Some(refs) = &result.reference_points {
        println!("reference {}:", result.reference_name.as_deref().unwrap_or(""));
        for p in refs {
            println!(
                "{:>8.2} {:>10} {:>12} {:>10.3e} {:>12.3e} {:>12.1} {:>10.3}",
                p.ebn0_db, p.trials, p.block_errors, p.bler, p.bler_ci_high, p.avg_queries, p.avg_list_size
            );
        }
    }
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let code = args.code.load()?;
    let decoder = args.decoder.build()?;
    let reference = match args.reference {
        None => None,
        Some(DecoderKind::Orbgrand) => Some(
            DecoderConfig::orbgrand()
                .with_max_queries(args.decoder.max_queries)
                .with_parity_constraint(!args.decoder.no_parity),
        ),
        Some(_) => bail!("only orbgrand is supported as a reference"),
    };
    let cfg = SweepConfig {
        ebn0_grid: parse_grid(&args.ebn0)?,
        stop: StoppingRule::new(args.min_errors, args.max_trials),
        master_seed: args.seed,
        workers: args.workers,
        paired: args.paired,
    };
    eprintln!(
        "simulating {} with {} ({}) over {} points, seed {}, {} workers",
        code.label(),
        decoder.name(),
        decoder.params_string(),
        cfg.ebn0_grid.len(),
        cfg.master_seed,
        cfg.workers
    );
    let result = sweep(&code, &decoder, reference.as_ref(), &cfg);
    print_points(&result);
    if let Some(path) = &args.out {
        fs::write(path, result.to_csv()).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    if let Some(path) = &args.json {
        fs::write(path, result.to_json()).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_optimize(args: OptimizeArgs) -> Result<()> {
    let code = args.code.load()?;
    if args.reference != DecoderKind::Orbgrand {
        bail!("only orbgrand is supported as a reference");
    }
    let reference = DecoderConfig::orbgrand()
        .with_max_queries(args.max_queries)
        .with_parity_constraint(!args.no_parity);
    let mut cfg = OptimizeConfig::new(
        parse_grid(&args.ebn0)?,
        StoppingRule::new(args.min_errors, args.max_trials),
        args.seed,
        args.workers,
    );
    cfg.l_max_cap = args.lmax_cap;
    cfg.theta_step = args.theta_step;
    cfg.max_queries = args.max_queries;
    cfg.use_parity_constraint = !args.no_parity;
    let outcome = optimize_parameters(&code, &reference, &cfg)?;
    println!(
        "{:>5} {:>5} {:>6} {:>8} {:>12} {:>12} {:>12} {:>12} {:>6}",
        "stage", "lmax", "theta", "ebn0_db", "cand_bler", "cand_trials", "ref_bler", "ref_ci_high", "ok"
    );
    for e in &outcome.evidence {
        println!(
            "{:>5} {:>5} {:>6.2} {:>8.2} {:>12.3e} {:>12} {:>12.3e} {:>12.3e} {:>6}",
            e.stage,
            e.l_max,
            e.theta,
            e.ebn0_db,
            e.candidate_bler,
            e.candidate_trials,
            e.reference_bler,
            e.reference_ci_high,
            if e.admissible { "yes" } else { "no" }
        );
    }
    println!("l_max_star = {}", outcome.l_max_star);
    println!("theta_star = {:.2}", outcome.theta_star);
    Ok(())
}

fn cmd_decode(args: DecodeArgs) -> Result<()> {
    let code = args.code.load()?;
    let cfg = args.decoder.build()?;
    let text = fs::read_to_string(&args.llr)
        .with_context(|| format!("reading {}", args.llr.display()))?;
    let values: Vec<f64> = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .with_context(|| format!("invalid LLR value '{tok}'"))
        })
        .collect::<Result<_>>()?;
    if values.len() != code.n() {
        bail!(
            "LLR file has {} values but {} has block length {}",
            values.len(),
            code.label(),
            code.n()
        );
    }
    let out = decode(&code, &LlrVector::new(values), &cfg);
    println!(
        "codeword={} queries={} status={} list_size={} p_not_in_list={} queries_to_first_candidate={}",
        out.codeword.to_hex(),
        out.queries,
        out.status.as_str(),
        out.list_size(),
        out.p_not_in_list
            .map(|p| format!("{p:.6e}"))
            .unwrap_or_else(|| "-".into()),
        out.queries_to_first_candidate
            .map(|q| q.to_string())
            .unwrap_or_else(|| "-".into()),
    );
    Ok(())
}

fn cmd_code_info(args: CodeArgs) -> Result<()> {
    let code = args.load()?;
    let (n, k) = (code.n(), code.k());
    println!("code={}", code.label());
    println!("n={n}");
    println!("k={k}");
    println!("rate={:.6}", code.rate());
    println!("even_weight={}", code.even_weight());
    println!("sphere_union_rate={:.6}", sphere_union_rate(n, k));
    println!("log2_first_candidate_factor={:.6}", ((n + 1) as f64).log2());
    if let Some(meta) = code.bch_meta() {
        println!(
            "bch: m={} t={} primitive_poly={:#x} generator_poly={}",
            meta.field_degree,
            meta.designed_t,
            meta.primitive_poly,
            meta.generator_poly.to_hex()
        );
    }
    Ok(())
}

fn cmd_export_alist(args: ExportArgs) -> Result<()> {
    let code = args.code.load()?;
    let text = save_alist(&code);
    match &args.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Decode(args) => cmd_decode(args),
        Command::CodeInfo(args) => cmd_code_info(args),
        Command::ExportAlist(args) => cmd_export_alist(args),
    }
}
