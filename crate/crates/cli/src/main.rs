use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dirdense_core::experiment::{load_graph, run_on_graph, write_report};
use dirdense_core::peel::parse_ratio;
use dirdense_core::report::{compare_reports, RunReport};
use dirdense_core::{Algorithm, GenSpec, InputSource, RatioGuess, RunConfig, StreamMode};

/// Approximate directed densest subgraph over a sweep of |S|/|T| guesses.
///
/// Writes one CSV row per ratio guess c to --out (stdout by default).
#[derive(Parser, Debug)]
#[command(
    name = "dirdense",
    version,
    about,
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare two reports over the same c grid (b relative to a)
    Compare { a: PathBuf, b: PathBuf },
}

#[derive(Args, Debug)]
#[group(id = "source", required = false, multiple = false)]
struct SourceArgs {
    /// SNAP edge list ("u v" per line, '#' comments)
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Preferential-attachment graph, e.g. pref:n=10000,k=10
    #[arg(long = "gen", value_name = "SPEC")]
    generator: Option<GenSpec>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    source: SourceArgs,

    #[arg(long, value_enum, default_value_t = AlgoArg::Baseline)]
    algo: AlgoArg,

    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,

    /// Grid factor between consecutive c values
    #[arg(long, default_value_t = 2.0)]
    delta: f64,

    /// Scale on the sampling threshold (1 = full theoretical sample size)
    #[arg(long, default_value_t = 1.0)]
    f: f64,

    /// Single ratio guess instead of the sweep, as a decimal or a/b
    #[arg(long, value_parser = parse_c)]
    c: Option<RatioGuess>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum, default_value_t = StreamArg::Shuffled)]
    stream: StreamArg,

    /// Memory exponent for mpc-super: n^(1+mu) words per machine
    #[arg(long, default_value_t = 0.5)]
    mpc_mu: f64,

    /// Words per machine over n for mpc-near (default ln²n/ε³)
    #[arg(long)]
    polylog_budget: Option<f64>,

    /// Rounds charged per simulated global sort
    #[arg(long, default_value_t = 1)]
    sort_round_cost: u32,

    /// Worker threads for the sweep (default: all cores)
    #[arg(long)]
    threads: Option<usize>,

    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoArg {
    Baseline,
    MultiPass,
    SinglePass,
    Exact,
    MpcSuper,
    MpcNear,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Baseline => Algorithm::Baseline,
            AlgoArg::MultiPass => Algorithm::MultiPass,
            AlgoArg::SinglePass => Algorithm::SinglePass,
            AlgoArg::Exact => Algorithm::Exact,
            AlgoArg::MpcSuper => Algorithm::MpcSuper,
            AlgoArg::MpcNear => Algorithm::MpcNear,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StreamArg {
    Given,
    Shuffled,
}

fn parse_c(s: &str) -> Result<RatioGuess, String> {
    parse_ratio(s).map_err(|e| e.to_string())
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig> {
        let input = match (self.source.input, self.source.generator) {
            (Some(path), None) => InputSource::File(path),
            (None, Some(spec)) => InputSource::Generate(spec),
            _ => anyhow::bail!("exactly one of --input or --gen is required"),
        };
        let mut cfg = RunConfig::new(input, self.algo.into());
        cfg.delta = self.delta;
        cfg.c = self.c;
        cfg.out = self.out;
        let s = &mut cfg.settings;
        s.epsilon = self.epsilon;
        s.f = self.f;
        s.seed = self.seed;
        s.stream = match self.stream {
            StreamArg::Given => StreamMode::Given,
            StreamArg::Shuffled => StreamMode::Shuffled,
        };
        s.mpc_mu = self.mpc_mu;
        s.polylog_budget = self.polylog_budget;
        s.sort_round_cost = self.sort_round_cost;
        s.threads = self.threads;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(args: RunArgs) -> Result<()> {
    let cfg = args.into_config()?;
    let g = load_graph(&cfg)?;
    eprintln!(
        "{}: n={} m={} algo={}",
        cfg.dataset_name(),
        g.vertex_count(),
        g.edge_count(),
        cfg.algo
    );
    let report = run_on_graph(&cfg, &g)?;
    match &cfg.out {
        Some(path) => write_report(&report, path)?,
        None => report.write_csv(io::stdout().lock())?,
    }
    let failed = report.rows.iter().filter(|r| r.error.is_some()).count();
    if let Some(best) = report.rows.iter().filter(|r| r.error.is_none()).fold(
        None::<&dirdense_core::RunRow>,
        |acc, r| match acc {
            Some(b) if b.density >= r.density => Some(b),
            _ => Some(r),
        },
    ) {
        eprintln!(
            "best density {} at c={} (|S|={}, |T|={}), {:.1} ms total",
            best.density,
            best.c,
            best.s_size,
            best.t_size,
            report.total_wall_ms()
        );
    }
    if failed > 0 {
        eprintln!("{failed} of {} runs failed", report.rows.len());
    }
    Ok(())
}

fn compare(a: PathBuf, b: PathBuf) -> Result<()> {
    let read = |p: &PathBuf| -> Result<RunReport> {
        let file = std::fs::File::open(p).with_context(|| format!("opening {}", p.display()))?;
        RunReport::read_csv(file).with_context(|| format!("reading {}", p.display()))
    };
    let cmp = compare_reports(&read(&a)?, &read(&b)?)?;
    println!("c,density_a,density_b,ratio");
    for r in &cmp.rows {
        println!("{},{},{},{:.6}", r.c, r.density_a, r.density_b, r.ratio);
    }
    eprintln!(
        "max density ratio {:.4}, speedup {:.3}, curve correlation {:.4}",
        cmp.max_density_ratio, cmp.speedup, cmp.correlation
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Some(Command::Compare { a, b }) => compare(a, b),
        None => run(cli.run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
