//! Command-line front end.
//!
//! Exit codes: 0 success, 1 optimality check failed, 2 usage error, 3 capacity error
//! (`U > N/8` for a deterministic scheme), 4 file error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::correlation::{pair_statistics, profile_pair_correlation, variance_of_correlation};
use crate::dsp::Modulation;
use crate::error::Error;
use crate::harness::{gamma_grid, run_experiment, RandomDraw, Scheme, SchemeConfig, Seeding, DEFAULT_TRIALS};
use crate::profile_file::{format_profiles, read_profiles};
use crate::rng::derive_substream;
use crate::selection::{check_optimal, generate, SelectionVariant};
use crate::ProfileSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_FILE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "slm-papr", about = "OFDM PAPR reduction with Class III SLM and deterministic cyclic shifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate CCDF curves by Monte Carlo and write one CSV per scheme.
    Simulate(SimulateArgs),
    /// Correlation analysis of a profile set.
    Analyze(AnalyzeArgs),
    /// Check the pairwise shift-difference condition on a profile file.
    Check(CheckArgs),
    /// Write a profile file.
    GenShifts(GenArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    u: usize,
    #[arg(long = "mod", default_value = "16qam", value_parser = parse_modulation)]
    modulation: Modulation,
    /// Repeatable: plain, conv-slm, c3-random, ds-opt, ds-sel1, ds-sel2.
    #[arg(long = "scheme", required = true, value_parser = parse_scheme)]
    schemes: Vec<Scheme>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    oversample: usize,
    #[arg(long, default_value_t = 5.0)]
    gamma_min: f64,
    #[arg(long, default_value_t = 12.0)]
    gamma_max: f64,
    #[arg(long, default_value_t = 0.1)]
    gamma_step: f64,
    /// Output directory for `ccdf_<scheme>.csv`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write a gnuplot script `ccdf.gp` next to the CSVs.
    #[arg(long)]
    plot: bool,
    /// Worker threads; never changes the output.
    #[arg(long)]
    threads: Option<usize>,
    /// Give each scheme its own symbol stream instead of shared symbols.
    #[arg(long)]
    independent: bool,
    /// Draw a new random profile set for every symbol (c3-random only).
    #[arg(long)]
    redraw_random: bool,
    /// Include the unmodified symbol as an extra candidate in the ds-* schemes.
    #[arg(long)]
    include_identity: bool,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long, conflicts_with = "gen")]
    profiles: Option<PathBuf>,
    /// Repeatable: opt, sel1, sel2, random.
    #[arg(long, value_parser = parse_variant)]
    gen: Vec<SelectionVariant>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    u: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write `tau,rho,pair_i,pair_j` for every pair.
    #[arg(long)]
    dump_rho: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    profiles: PathBuf,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    u: usize,
    #[arg(long, default_value = "opt", value_parser = parse_variant)]
    variant: SelectionVariant,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Profile file to write; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_modulation(s: &str) -> Result<Modulation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<SelectionVariant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn file(path: &Path, err: impl std::fmt::Display) -> Self {
        Self { code: EXIT_FILE, message: format!("{}: {err}", path.display()) }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Capacity { .. } => EXIT_CAPACITY,
            Error::Parse { .. } => EXIT_FILE,
            _ => EXIT_USAGE,
        };
        Self { code, message: err.to_string() }
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a, stdout),
        Command::Analyze(a) => analyze(a, stdout),
        Command::Check(a) => check(a, stdout),
        Command::GenShifts(a) => gen_shifts(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn io_out(r: std::io::Result<()>) -> Result<(), Failure> {
    r.map_err(|e| Failure { code: EXIT_FILE, message: format!("write failed: {e}") })
}

fn simulate(a: SimulateArgs, stdout: &mut dyn Write) -> CmdResult {
    let grid = gamma_grid(a.gamma_min, a.gamma_max, a.gamma_step)?;
    let mut schemes = a.schemes.clone();
    schemes.dedup();
    let cfgs: Vec<SchemeConfig> = schemes
        .iter()
        .map(|&scheme| SchemeConfig {
            n: a.n,
            alternatives: if scheme == Scheme::Plain { 1 } else { a.u },
            modulation: a.modulation,
            scheme,
            trials: a.trials,
            seed: a.seed,
            oversample: a.oversample,
            gamma_grid: grid.clone(),
            seeding: if a.independent { Seeding::Independent } else { Seeding::Paired },
            random_draw: if a.redraw_random { RandomDraw::PerSymbol } else { RandomDraw::Fixed },
            include_identity: a.include_identity,
        })
        .collect();
    // Reject bad configs (capacity in particular) before any simulation work.
    for cfg in &cfgs {
        cfg.validate()?;
    }

    let curves = match a.threads {
        Some(0) => return Err(Failure::usage("--threads must be at least 1")),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Failure::usage(e.to_string()))?
            .install(|| run_experiment(&cfgs))?,
        None => run_experiment(&cfgs)?,
    };

    std::fs::create_dir_all(&a.out).map_err(|e| Failure::file(&a.out, e))?;
    let mut names = Vec::new();
    for curve in &curves {
        let name = format!("ccdf_{}.csv", curve.scheme);
        let path = a.out.join(&name);
        std::fs::write(&path, curve.to_csv()).map_err(|e| Failure::file(&path, e))?;
        io_out(writeln!(stdout, "wrote {}", path.display()))?;
        names.push((name, curve.scheme.clone()));
    }
    if a.plot {
        let path = a.out.join("ccdf.gp");
        let title = format!("N={} U={} {} L={} trials={}", a.n, a.u, a.modulation, a.oversample, a.trials);
        std::fs::write(&path, gnuplot_script(&title, &names)).map_err(|e| Failure::file(&path, e))?;
        io_out(writeln!(stdout, "wrote {}", path.display()))?;
    }
    Ok(EXIT_OK)
}

fn gnuplot_script(title: &str, curves: &[(String, String)]) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator \",\"\n");
    s.push_str("set logscale y\n");
    s.push_str("set format y \"10^{%L}\"\n");
    s.push_str("set xlabel \"PAPR threshold gamma (dB)\"\n");
    s.push_str("set ylabel \"Pr(PAPR > gamma)\"\n");
    s.push_str(&format!("set title \"{title}\"\n"));
    s.push_str("set grid\n");
    s.push_str("set key bottom left\n");
    let plots: Vec<String> = curves
        .iter()
        .map(|(file, label)| format!("\"{file}\" using 1:($2 > 0 ? $2 : 1/0) skip 1 with lines title \"{label}\""))
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    s
}

fn analyze(a: AnalyzeArgs, stdout: &mut dyn Write) -> CmdResult {
    let mut sets: Vec<(String, ProfileSet)> = Vec::new();
    if let Some(path) = &a.profiles {
        sets.push((path.display().to_string(), read_profiles(path)?));
    } else if a.gen.is_empty() {
        return Err(Failure::usage("analyze needs --profiles <file> or --gen <variant>"));
    } else {
        let (n, u) = match (a.n, a.u) {
            (Some(n), Some(u)) => (n, u),
            _ => return Err(Failure::usage("--gen requires --n and --u")),
        };
        for &variant in &a.gen {
            let mut rng = derive_substream(a.seed, 0);
            sets.push((format!("gen:{variant}"), generate(variant, n, u, &mut rng)?));
        }
    }
    if a.dump_rho.is_some() && sets.len() != 1 {
        return Err(Failure::usage("--dump-rho needs exactly one profile set"));
    }

    let mut summary = Vec::new();
    for (name, set) in &sets {
        io_out(writeln!(stdout, "set {name} n={} U={}", set.n(), set.len()))?;
        let stats = pair_statistics(set)?;
        for s in &stats {
            io_out(writeln!(
                stdout,
                "pair=({},{}) spikes={} max_rho={:.6} variance={:.6e} parseval_residual={:.3e}",
                s.pair.0, s.pair.1, s.spikes, s.max_rho, s.variance, s.parseval_residual
            ))?;
        }
        if set.len() < 2 {
            io_out(writeln!(stdout, "variance_of_correlation=n/a (fewer than two profiles)"))?;
            continue;
        }
        let variance = variance_of_correlation(set)?;
        let worst = stats.iter().map(|s| s.parseval_residual.abs()).fold(0.0, f64::max);
        io_out(writeln!(stdout, "variance_of_correlation={variance:.6e}"))?;
        io_out(writeln!(stdout, "max_parseval_residual={worst:.3e}"))?;
        summary.push((name.clone(), variance));
    }
    if summary.len() > 1 {
        io_out(writeln!(stdout, "summary"))?;
        for (name, v) in &summary {
            io_out(writeln!(stdout, "{name:<14} {v:.6e}"))?;
        }
    }

    if let Some(path) = &a.dump_rho {
        let set = &sets[0].1;
        let mut csv = String::from("tau,rho,pair_i,pair_j\n");
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let profile = profile_pair_correlation(set, i, j)?;
                for (tau, rho) in profile.rho.iter().enumerate() {
                    csv.push_str(&format!("{tau},{rho:.9e},{},{}\n", profile.pair.0, profile.pair.1));
                }
            }
        }
        std::fs::write(path, csv).map_err(|e| Failure::file(path, e))?;
        io_out(writeln!(stdout, "wrote {}", path.display()))?;
    }
    Ok(EXIT_OK)
}

fn check(a: CheckArgs, stdout: &mut dyn Write) -> CmdResult {
    let set = read_profiles(&a.profiles)?;
    let report = check_optimal(&set);
    if report.pairs_checked == 0 {
        io_out(writeln!(stdout, "nothing to check: fewer than two profiles"))?;
        return Ok(EXIT_OK);
    }
    if report.passes() {
        io_out(writeln!(stdout, "ok: {} pairs satisfy the condition", report.pairs_checked))?;
        return Ok(EXIT_OK);
    }
    for v in &report.violations {
        io_out(writeln!(stdout, "{v}"))?;
    }
    Ok(EXIT_CHECK_FAILED)
}

fn gen_shifts(a: GenArgs, stdout: &mut dyn Write) -> CmdResult {
    let mut rng = derive_substream(a.seed, 0);
    let set = generate(a.variant, a.n, a.u, &mut rng)?;
    let text = format_profiles(&set);
    match &a.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::file(path, e))?,
        None => io_out(stdout.write_all(text.as_bytes()))?,
    }
    Ok(EXIT_OK)
}
