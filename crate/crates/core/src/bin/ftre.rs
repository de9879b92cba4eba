use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ftre::cli::{self, CountsSource, Suite};
use ftre::cost::{CostConstants, Objective};
use ftre::factorize;
use ftre::overhead::{self, FtParams, NoiseRegime};

#[derive(Parser)]
#[command(
    name = "ftre",
    about = "Resource estimation and logical compilation for double-factorized quantum chemistry"
)]
struct CliArgs {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OverheadOpts {
    /// Molecule parameter table (used by the model counts source).
    #[arg(long, default_value = "data/molecules.csv")]
    molecules: PathBuf,
    /// Counts source: shipped logical-count table or a fresh model run.
    #[arg(long, default_value = "table")]
    counts: String,
    /// Logical-count table for `--counts table`.
    #[arg(long, default_value = "data/table1_counts.csv")]
    counts_file: PathBuf,
    /// Noise regime: high, moderate, or both.
    #[arg(long, default_value = "both")]
    regime: String,
    /// Comma-separated interleaving ratios.
    #[arg(long, default_value = "1")]
    interleave: String,
    /// Overall failure budget.
    #[arg(long, default_value_t = 1e-2)]
    eps_total: f64,
    /// Distillation factories and their size (in d^2 RSG units).
    #[arg(long, default_value_t = 2)]
    factories: u64,
    #[arg(long, default_value_t = 39)]
    factory_size: u64,
    /// Error budget for the model counts source.
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Double-factorize a two-electron tensor file.
    Factorize {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        one_body: Option<PathBuf>,
        /// Truncation budget in Hartree.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
    },
    /// Logical cost estimates for a molecule table.
    Estimate {
        #[arg(long, default_value = "data/molecules.csv")]
        molecules: PathBuf,
        /// vn (count volume) or vd (depth volume).
        #[arg(long, default_value = "vn")]
        objective: String,
        /// Total chemical-accuracy budget in Hartree.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Fault-tolerant footprint and runtime conversion.
    Overhead {
        #[command(flatten)]
        opts: OverheadOpts,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Interleaving trade-off curves over a geometric ratio ladder.
    Sweep {
        #[command(flatten)]
        opts: OverheadOpts,
        /// Ratio range as `lo:hi:steps`.
        #[arg(long, default_value = "1:1000:13")]
        interleave_range: String,
    },
    /// Oracle-backed verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Re-emit a pipeline's output in another format.
    Report {
        /// estimate or overhead.
        #[arg(long, default_value = "estimate")]
        kind: String,
        #[arg(long, default_value = "table")]
        format: String,
        #[command(flatten)]
        opts: OverheadOpts,
        #[arg(long, default_value = "vn")]
        objective: String,
    },
}

fn parse_interleaves(s: &str) -> ftre::Result<Vec<u64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| ftre::Error::validation(format!("bad interleave ratio {p:?}")))
        })
        .collect()
}

fn regimes_from(name: &str) -> ftre::Result<Vec<NoiseRegime>> {
    match name {
        "both" => Ok(vec![NoiseRegime::high(), NoiseRegime::moderate()]),
        other => Ok(vec![NoiseRegime::by_name(other)?]),
    }
}

fn gather_counts(opts: &OverheadOpts) -> ftre::Result<Vec<cli::CountRow>> {
    match opts.counts.parse::<CountsSource>()? {
        CountsSource::Table => Ok(cli::ingest_counts(&opts.counts_file)?.rows),
        CountsSource::Model => {
            let table = cli::ingest(&opts.molecules)?;
            let reports =
                cli::run_estimate(&table, Objective::Vn, opts.eps, &CostConstants::default())?;
            Ok(reports
                .iter()
                .map(|r| cli::CountRow {
                    name: r.instance.name.clone(),
                    basis: r.instance.basis.clone(),
                    n_l: r.n_l,
                    n_t: r.n_t,
                })
                .collect())
        }
    }
}

fn ft_params(opts: &OverheadOpts) -> FtParams {
    FtParams {
        eps_total: opts.eps_total,
        n_factories: opts.factories,
        c_distill: opts.factory_size,
        ..FtParams::default()
    }
}

fn run_overhead_command(
    opts: &OverheadOpts,
    interleaves: &[u64],
) -> ftre::Result<Vec<cli::OverheadRow>> {
    let counts = gather_counts(opts)?;
    let regimes = regimes_from(&opts.regime)?;
    let params = ft_params(opts);
    if interleaves
        .iter()
        .any(|&l| l > overhead::MAX_PRACTICAL_INTERLEAVE)
    {
        eprintln!(
            "warning: interleave ratio beyond {} exceeds the practical fiber-delay range",
            overhead::MAX_PRACTICAL_INTERLEAVE
        );
    }
    cli::run_overhead(&counts, &regimes, &params, interleaves)
}

fn run() -> ftre::Result<ExitCode> {
    let args = CliArgs::parse();
    match args.command {
        Command::Factorize {
            tensor,
            one_body,
            eps,
        } => {
            let h = factorize::read_tensor(&tensor)?;
            let t = match &one_body {
                Some(p) => factorize::read_one_body(p)?,
                None => factorize::OneBodyMatrix::zero(h.n_orbitals()),
            };
            let full = factorize::FactorizedHamiltonian::build(&h)?;
            let truncated = factorize::truncate(&full, eps)?;
            let alpha = factorize::compute_alpha(&truncated, &t)?;
            let (max_abs, fro) = factorize::reconstruction_error(&truncated, &h)?;
            println!("N = {}", h.n_orbitals());
            println!("R = {}", truncated.rank_r());
            println!("M = {}", truncated.rank_m());
            println!("max_r M^(r) = {}", truncated.max_rank_m());
            println!("alpha = {alpha:.6e}");
            println!(
                "truncation error bound = {:.6e}",
                truncated.truncation_error_bound()
            );
            println!("reconstruction error (max-abs) = {max_abs:.6e}");
            println!("reconstruction error (frobenius) = {fro:.6e}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Estimate {
            molecules,
            objective,
            eps,
            format,
        } => {
            let table = cli::ingest(&molecules)?;
            let obj: Objective = objective.parse()?;
            let reports = cli::run_estimate(&table, obj, eps, &CostConstants::default())?;
            match format.as_str() {
                "csv" => print!("{}", cli::estimate_csv(&reports)),
                "table" => print!("{}", cli::estimate_table(&reports)),
                other => return Err(ftre::Error::validation(format!("unknown format {other:?}"))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Overhead { opts, format } => {
            let interleaves = parse_interleaves(&opts.interleave)?;
            let rows = run_overhead_command(&opts, &interleaves)?;
            let params = ft_params(&opts);
            match format.as_str() {
                "csv" => print!("{}", cli::overhead_csv(&rows, &params)),
                "table" => print!("{}", cli::overhead_table(&rows)),
                "plotdata" => print!("{}", cli::plot_data(&rows)),
                other => return Err(ftre::Error::validation(format!("unknown format {other:?}"))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            opts,
            interleave_range,
        } => {
            let parts: Vec<&str> = interleave_range.split(':').collect();
            if parts.len() != 3 {
                return Err(ftre::Error::validation(
                    "interleave range must be lo:hi:steps".to_string(),
                ));
            }
            let lo: u64 = parts[0]
                .parse()
                .map_err(|_| ftre::Error::validation("bad range low end"))?;
            let hi: u64 = parts[1]
                .parse()
                .map_err(|_| ftre::Error::validation("bad range high end"))?;
            let steps: usize = parts[2]
                .parse()
                .map_err(|_| ftre::Error::validation("bad range step count"))?;
            let ladder = overhead::interleave_ladder(lo, hi, steps);
            let rows = run_overhead_command(&opts, &ladder)?;
            print!("{}", cli::plot_data(&rows));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, seed } => {
            let suite: Suite = suite.parse()?;
            let report = cli::run_verify(suite, seed);
            print!("{}", report.render());
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
        Command::Report {
            kind,
            format,
            opts,
            objective,
        } => match kind.as_str() {
            "estimate" => {
                let table = cli::ingest(&opts.molecules)?;
                let obj: Objective = objective.parse()?;
                let reports = cli::run_estimate(&table, obj, opts.eps, &CostConstants::default())?;
                match format.as_str() {
                    "csv" => print!("{}", cli::estimate_csv(&reports)),
                    "table" => print!("{}", cli::estimate_table(&reports)),
                    "plotdata" => {
                        // (M, n_T, D_T) triples for scaling plots.
                        println!("name,basis,M,n_T,D_T");
                        for r in &reports {
                            println!(
                                "{},{},{},{},{}",
                                r.instance.name, r.instance.basis, r.instance.m, r.n_t, r.d_t
                            );
                        }
                    }
                    other => {
                        return Err(ftre::Error::validation(format!("unknown format {other:?}")))
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
            "overhead" => {
                let interleaves = parse_interleaves(&opts.interleave)?;
                let rows = run_overhead_command(&opts, &interleaves)?;
                let params = ft_params(&opts);
                match format.as_str() {
                    "csv" => print!("{}", cli::overhead_csv(&rows, &params)),
                    "table" => print!("{}", cli::overhead_table(&rows)),
                    "plotdata" => print!("{}", cli::plot_data(&rows)),
                    other => {
                        return Err(ftre::Error::validation(format!("unknown format {other:?}")))
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
            other => Err(ftre::Error::validation(format!(
                "unknown report kind {other:?}"
            ))),
        },
    }
}

fn main() -> ExitCode {
    // Die quietly when a pager or `head` closes the pipe.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
