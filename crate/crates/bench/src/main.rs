use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dsfft::fft::{fft, ifft};
use dsfft::{
    reconstruct::reconstruct, run_sparse_fft, Config, DenseSpectrum, Execution, RowPolicy,
    SigmaPolicy, SparseResult, SpectrumOracle,
};
use dsfft_bench::{
    gen_instance, loglog_slope, read_dense, run_condition_table, run_error_rate, run_scaling,
    write_csv, write_dense, write_sparse, Sweep,
};

#[derive(Parser)]
#[command(name = "dsfft", version, about = "Deterministic sparse FFT experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Failure rate over random instances for each sparsity.
    ErrorRate {
        #[arg(long = "J", default_value_t = 15)]
        log2_len: u32,
        #[arg(long = "M", value_delimiter = ',', default_value = "20,30,40,50,60,70,80,90,100")]
        sparsities: Vec<usize>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Mean spectral condition number of the Vandermonde systems used.
    CondTable {
        #[arg(long = "J", value_delimiter = ',', default_value = "15,16,17,18,19,20")]
        log2_lens: Vec<u32>,
        #[arg(long = "M", value_delimiter = ',', default_value = "20,50,100")]
        sparsities: Vec<usize>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Oracle accesses and runtime against signal length.
    Scaling {
        #[arg(long = "J", value_delimiter = ',', default_value = "10,12,14,16,18,20")]
        log2_lens: Vec<u32>,
        #[arg(long = "M", value_delimiter = ',', default_value = "10,30")]
        sparsities: Vec<usize>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Recover one vector from its spectrum and print per-level diagnostics.
    Recover {
        /// Dense spectrum file; a seeded random instance is used when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long = "J", default_value_t = 15)]
        log2_len: u32,
        #[arg(long = "M", default_value_t = 20)]
        sparsity: usize,
        /// Use the known-sparsity warm start with this M.
        #[arg(long)]
        known_sparsity: Option<usize>,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Forward transform of a vector file; sparse output unless --dense.
    Fft(TransformArgs),
    /// Inverse transform of a spectrum file; sparse output unless --dense.
    Ifft(TransformArgs),
}

#[derive(Args)]
struct AlgoArgs {
    #[arg(long, default_value_t = 1e-8)]
    epsilon: f64,
    #[arg(long, default_value_t = 2)]
    cmax: usize,
    #[arg(long, value_enum, default_value_t = RowArg::Simple)]
    row_policy: RowArg,
    #[arg(long, default_value_t = 10.0)]
    kappa_threshold: f64,
    #[arg(long, value_enum, default_value_t = SigmaArg::Alg32)]
    sigma_policy: SigmaArg,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Full dense transform instead of the sparse algorithm.
    #[arg(long)]
    dense: bool,
    #[command(flatten)]
    algo: AlgoArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum RowArg {
    Simple,
    Adaptive,
}

#[derive(Clone, Copy, ValueEnum)]
enum SigmaArg {
    Alg32,
    DistanceOnly,
}

impl AlgoArgs {
    fn config(&self) -> Result<Config> {
        let config = Config {
            epsilon: self.epsilon,
            c_max: self.cmax,
            row_policy: match self.row_policy {
                RowArg::Simple => RowPolicy::SimpleBound,
                RowArg::Adaptive => RowPolicy::GershgorinAdaptive,
            },
            sigma_policy: match self.sigma_policy {
                SigmaArg::Alg32 => SigmaPolicy::NeighbourScore,
                SigmaArg::DistanceOnly => SigmaPolicy::DistanceOnly,
            },
            kappa_threshold: self.kappa_threshold,
            ..Config::default()
        };
        config.validate()?;
        Ok(config)
    }
}

impl SweepArgs {
    fn sweep(&self) -> Result<Sweep> {
        let execution = if self.sequential { Execution::Sequential } else { Execution::default() };
        Ok(Sweep::new(self.algo.config()?, self.trials, self.seed).with_execution(execution))
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_vector(path: &Path) -> Result<Vec<dsfft::Complex64>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_dense(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn print_levels(result: &SparseResult) {
    eprintln!("level  M_j  branch          sigma   rows  bound       fetches");
    for r in &result.levels {
        eprintln!(
            "{:>5} {:>4}  {:<14} {:>6} {:>6}  {:<10} {:>7}{}",
            r.level,
            r.sparsity,
            format!("{:?}{}", r.branch, if r.reused { "*" } else { "" }),
            r.sigma().map_or("-".into(), |s| s.to_string()),
            r.rows().map_or("-".into(), |s| s.to_string()),
            r.condition_bound().map_or("-".into(), |b| format!("{b:.3}")),
            r.fetches,
            r.warnings.iter().map(|w| format!("  [{w}]")).collect::<String>(),
        );
    }
    eprintln!("recovered {} entries with {} oracle accesses", result.sparsity(), result.accesses);
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::ErrorRate { log2_len, sparsities, sweep } => {
            let rows = run_error_rate(log2_len, &sparsities, &sweep.sweep()?)?;
            write_csv(output(sweep.out.as_deref())?, &rows)?;
        }
        Command::CondTable { log2_lens, sparsities, sweep } => {
            let rows = run_condition_table(&log2_lens, &sparsities, &sweep.sweep()?)?;
            write_csv(output(sweep.out.as_deref())?, &rows)?;
        }
        Command::Scaling { log2_lens, sparsities, sweep } => {
            let rows = run_scaling(&log2_lens, &sparsities, &sweep.sweep()?)?;
            for &m in &sparsities {
                let (ns, ys): (Vec<f64>, Vec<f64>) = rows
                    .iter()
                    .filter(|r| r.m == m)
                    .map(|r| ((1u64 << r.j) as f64, r.mean_elapsed_s))
                    .unzip();
                if let Some(slope) = loglog_slope(&ns, &ys) {
                    eprintln!("M = {m}: log-log slope of runtime against N = {slope:.3}");
                }
            }
            write_csv(output(sweep.out.as_deref())?, &rows)?;
        }
        Command::Recover { input, log2_len, sparsity, known_sparsity, algo, seed, out } => {
            let mut config = algo.config()?;
            config.known_sparsity = known_sparsity;
            let (result, instance) = match input {
                Some(path) => {
                    let oracle = SpectrumOracle::new(DenseSpectrum::new(read_vector(&path)?)?)?;
                    (reconstruct(&oracle, &config)?, None)
                }
                None => {
                    let instance = gen_instance(log2_len, sparsity, seed)?;
                    (reconstruct(&instance.oracle(), &config)?, Some(instance))
                }
            };
            print_levels(&result);
            if let Some(instance) = instance {
                match instance.max_relative_error(&result) {
                    Some(err) => eprintln!(
                        "support recovered, max relative error {err:.3e} ({})",
                        if instance.is_recovered(&result) { "success" } else { "failure" }
                    ),
                    None => eprintln!("support mismatch (failure)"),
                }
            }
            write_sparse(output(out.as_deref())?, &result.support, &result.values)?;
        }
        Command::Fft(args) => {
            let x = read_vector(&args.input)?;
            if args.dense {
                write_dense(output(args.out.as_deref())?, &fft(&x)?)?;
            } else {
                let result = run_sparse_fft(&x, &args.algo.config()?)?;
                write_sparse(output(args.out.as_deref())?, &result.support, &result.values)?;
            }
        }
        Command::Ifft(args) => {
            let spectrum = read_vector(&args.input)?;
            if args.dense {
                write_dense(output(args.out.as_deref())?, &ifft(&spectrum)?)?;
            } else {
                if spectrum.len() < 2 {
                    bail!("sparse inverse needs at least two samples");
                }
                let oracle = SpectrumOracle::new(DenseSpectrum::new(spectrum)?)?;
                let result = reconstruct(&oracle, &args.algo.config()?)?;
                write_sparse(output(args.out.as_deref())?, &result.support, &result.values)?;
            }
        }
    }
    Ok(())
}
