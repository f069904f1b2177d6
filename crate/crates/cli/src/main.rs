use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use kfold_cli::commands::{analyze, audit, hciz, sample, tables, verify};
use kfold_cli::config::{ConfigError, Format, RunConfig};
use kfold_cli::output::OutputSink;
use kfold_cli::{exit_code, ChecksFailed};

const DEFAULT_OUT: &str = "kfold-out";

#[derive(Parser, Debug)]
#[command(name = "kfold", version, about = "k-fold invariant random matrix ensembles")]
struct Cli {
    /// Worker threads for batch generation and analysis.
    #[arg(long, global = true, env = "KFOLD_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output formats (repeat or comma-separate).
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Vec<Format>,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed; overrides the configuration.
    #[arg(long)]
    seed: Option<u64>,

    /// Sample count; overrides the configuration.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Character, branching, Kronecker and C-coefficient tables.
    Tables {
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Parameter counts of the invariant families per constraint subset.
    Audit {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long = "d", value_delimiter = ',', default_value = "2,3,4,5")]
        ds: Vec<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Draw a deterministic batch from the configured ensemble.
    Sample {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Level statistics of a batch file or of a freshly drawn batch.
    Analyze {
        #[command(flatten)]
        run: RunArgs,
        /// Batch written by `kfold sample`; without it the configured
        /// ensemble is sampled.
        #[arg(long)]
        batch: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the self-check suite; exits with status 1 if any check fails.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact HCIZ integral, optionally against Monte Carlo.
    Hciz {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        b: Vec<f64>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t: f64,
        /// Monte-Carlo samples; omit to skip the comparison.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn load_config(run: &RunArgs) -> Result<RunConfig> {
    let mut cfg = match (&run.config, run.seed) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(seed)) => RunConfig::with_seed(seed),
        (None, None) => return Err(ConfigError::new("/seed", "a seed is required (--seed or a config file)").into()),
    };
    if let Some(seed) = run.seed {
        cfg.seed = seed;
    }
    if let Some(n) = run.samples {
        cfg.samples = Some(n);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn sink(out: &OutArgs, cfg: Option<&RunConfig>) -> Result<OutputSink> {
    let dir = out
        .out
        .clone()
        .or_else(|| cfg.and_then(|c| c.output.dir.clone()))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let formats = if !out.format.is_empty() {
        out.format.clone()
    } else if let Some(c) = cfg {
        c.output.formats.clone()
    } else {
        vec![Format::Csv, Format::Json, Format::Svg]
    };
    OutputSink::new(dir, &formats)
}

fn report_files(sink: &OutputSink) {
    for p in sink.written() {
        println!("wrote {}", p.display());
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Tables { k, d, out } => {
            let report = tables::run(k, d)?;
            let mut s = sink(&out, None)?;
            tables::write(&report, &mut s)?;
            if let Some(ds) = &report.discrepancies {
                println!("{} entries differ from the reference values", ds.len());
                for x in ds {
                    println!("  {} {}: computed {}, reference {}", x.table, x.entry, x.computed, x.reference);
                }
            }
            report_files(&s);
        }
        Command::Audit { k, ds, out } => {
            let report = audit::run(k, &ds)?;
            let mut s = sink(&out, None)?;
            audit::write(&report, &mut s)?;
            for row in &report.rows {
                for sub in &row.subsets {
                    println!(
                        "d={} {:<12} complex {:>3}  hermitian {:>3}",
                        row.d, sub.label, sub.complex_dim, sub.hermitian_dim
                    );
                }
            }
            for dev in &report.deviations {
                println!("note: {dev}");
            }
            report_files(&s);
        }
        Command::Sample { run, out } => {
            let cfg = load_config(&run)?;
            let batch = sample::run(&cfg)?;
            let mut s = sink(&out, Some(&cfg))?;
            sample::write(&batch, &mut s)?;
            println!("{} samples of {} (seed {})", batch.samples.len(), batch.spec.name(), batch.master_seed);
            report_files(&s);
        }
        Command::Analyze { run, batch, out } => {
            let cfg = load_config(&run)?;
            let batch = match batch {
                Some(path) => sample::load(Path::new(&path))?,
                None => sample::run(&cfg)?,
            };
            let report = analyze::run(&batch, &cfg.analysis)?;
            let mut s = sink(&out, Some(&cfg))?;
            analyze::write(&report, &cfg.analysis, &mut s)?;
            println!(
                "mean r = {:.4} ± {:.4} over {} ratios",
                report.mean_ratio, report.ratio_std_error, report.ratio_count
            );
            if let Some(u) = &report.unfolded {
                println!("unfolded spacings: Wigner p = {:.3}, Poisson p = {:.3}", u.wigner.p_value, u.poisson.p_value);
            }
            if let Some(r) = &report.reference {
                println!("GUE reference: mean r = {:.4}, KS p = {:.3e}", r.mean_ratio, r.ks.p_value);
            }
            report_files(&s);
        }
        Command::Verify { run, out } => {
            let cfg = load_config(&run)?;
            let report = verify::run(&cfg)?;
            let mut s = sink(&out, Some(&cfg))?;
            verify::write(&report, &mut s)?;
            for c in &report.checks {
                println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            report_files(&s);
            if !report.passed {
                return Err(ChecksFailed { failed: report.failed() }.into());
            }
        }
        Command::Hciz { a, b, t, samples, seed, out } => {
            let report = hciz::run(a, b, t, samples, seed)?;
            let mut s = sink(&out, None)?;
            hciz::write(&report, &mut s)?;
            println!("exact = {:.12e}", report.exact.value);
            if let (Some(mc), Some(z)) = (&report.monte_carlo, report.sigmas) {
                println!("monte carlo = {:.6e} ± {:.2e} ({z:.2} sigma)", mc.estimate, mc.std_error);
            }
            report_files(&s);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
