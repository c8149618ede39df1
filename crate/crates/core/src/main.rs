use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qgs::graph_json::load_open_graph;
use qgs::sweep::{
    figures, run_average, run_closed_form, run_sweep, run_validate, AverageConfig, FamilyName,
    RunOptions, SweepConfig, SweepError,
};

#[derive(Parser)]
#[command(name = "qgs", version, about = "Scattering matrices and entropies of open quantum graphs")]
struct Cli {
    /// Worker threads for row-parallel work (1 = serial).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Quadrature tolerance for averages.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// k-sweep of one graph.
    Sweep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Period-averaged entropies over a parameter grid.
    Average {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form amplitudes of a family on the unit circle.
    ClosedForm {
        #[arg(long)]
        family: FamilyName,
        #[arg(long)]
        n: usize,
        #[arg(long = "z-samples", default_value_t = 512)]
        z_samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Engine against closed forms; exits nonzero above 1e-8.
    Validate {
        /// `all` or a comma-separated list of families.
        #[arg(long, default_value = "all")]
        family: String,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the figure datasets, one CSV per figure.
    Figures {
        #[arg(long)]
        out_dir: PathBuf,
        /// Comma-separated subset, e.g. `fig7,fig10`.
        #[arg(long)]
        only: Option<String>,
    },
}

fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<ExitCode, SweepError> {
    let opts = RunOptions {
        workers: cli.workers,
        tol: cli.tol,
    };
    match cli.command {
        Command::Sweep { graph, config, out } => {
            let og = load_open_graph(&graph).map_err(|source| SweepError::SpecParse {
                path: graph.clone(),
                source,
            })?;
            for (v, defect) in og.unitarity_warnings() {
                eprintln!("warning: custom vertex {v} does not conserve flux (defect {defect:.3e})");
            }
            let cfg = SweepConfig::load(&config)?;
            let mut w = sink(out.as_deref())?;
            let summary = run_sweep(&og, &cfg, &opts, &mut w)?;
            w.flush()?;
            if summary.na_rows > 0 {
                eprintln!("{} of {} rows are NA (singular or non-unitary after retry)", summary.na_rows, summary.rows);
            }
        }
        Command::Average { config, out } => {
            let cfg = AverageConfig::load(&config)?;
            let mut w = sink(out.as_deref())?;
            run_average(&cfg, &opts, &mut w)?;
            w.flush()?;
        }
        Command::ClosedForm {
            family,
            n,
            z_samples,
            out,
        } => {
            let mut w = sink(out.as_deref())?;
            let na = run_closed_form(family, n, z_samples, &mut w)?;
            w.flush()?;
            if na > 0 {
                eprintln!("{na} samples are NA (degenerate closed form)");
            }
        }
        Command::Validate {
            family,
            n_min,
            n_max,
            samples,
            out,
        } => {
            let selected: Vec<FamilyName> = if family == "all" {
                FamilyName::ALL.to_vec()
            } else {
                family
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<_, _>>()?
            };
            let sizes = match (n_min, n_max) {
                (None, None) => None,
                (lo, hi) => Some((lo.unwrap_or(1), hi.unwrap_or(8))),
            };
            let mut w = sink(out.as_deref())?;
            let report = run_validate(&selected, sizes, samples, &opts, &mut w)?;
            w.flush()?;
            if !report.passed() {
                eprintln!("validation failed: some |Δσ| exceed {:e}", qgs::sweep::VALIDATION_TOL);
                return Ok(ExitCode::from(1));
            }
        }
        Command::Figures { out_dir, only } => {
            let names: Vec<&str> = match &only {
                Some(list) => list.split(',').map(str::trim).collect(),
                None => figures::FIGURES.to_vec(),
            };
            for (path, took) in figures::write_figures(&out_dir, &names, &opts)? {
                eprintln!("{} ({:.1} s)", path.display(), took.as_secs_f64());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
