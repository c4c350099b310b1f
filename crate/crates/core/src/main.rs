use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use opgraph::report::{
    dump_object, dump_to_json, render_report, render_sweep_table, report_to_json, reports_to_json,
    run_circle, run_hw, run_sweep, SweepInstance, VerificationReport,
};
use opgraph::{Error, ToleranceConfig};

/// Builds the circle-group and Heisenberg-Weyl operator-graph families and
/// verifies their linear structure: graph axioms, identity partitions,
/// covariance, anticliques, orbit-span coincidence and the span-dimension
/// formula.
#[derive(Parser)]
#[command(name = "opgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    /// Relative eigenvalue cutoff for Gram-rank decisions (default 1e-9).
    #[arg(long = "rank-eps")]
    rank_eps: Option<f64>,
    /// Absolute residual cutoff for equality checks (default 1e-10).
    #[arg(long = "residual-eps")]
    residual_eps: Option<f64>,
}

impl TolArgs {
    fn build(&self) -> opgraph::Result<ToleranceConfig> {
        let defaults = ToleranceConfig::default();
        ToleranceConfig::new(
            self.rank_eps.unwrap_or(defaults.rank_rel_eps),
            self.residual_eps.unwrap_or(defaults.residual_abs_eps),
        )
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write the JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the text summary on stdout.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the circle-group family at one local dimension.
    Circle {
        /// Local dimension d (operators act on C^d (x) C^d), 2..=32.
        #[arg(long)]
        dim: usize,
        /// Verify only this seed index instead of all of them.
        #[arg(long)]
        j: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify the Heisenberg-Weyl family at one local dimension.
    Hw {
        /// Local dimension d, 2..=32.
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify a range of dimensions; emits a JSON array and a summary table.
    Sweep {
        /// Which suites to run: circle, hw or all.
        instance: String,
        #[arg(long = "dim-min")]
        dim_min: usize,
        #[arg(long = "dim-max")]
        dim_max: usize,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dump constructed matrices in row-major [re, im] JSON form.
    Dump {
        /// Instance the object belongs to: circle or hw.
        instance: String,
        /// circle: bell_states, p_projectors, q_projectors, w_unitaries;
        /// hw: h_vectors, y_units, h_generators, pi_generators.
        object: String,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn classify(err: Error) -> Failure {
    let code = match err {
        Error::DimensionOutOfRange { .. }
        | Error::IndexOutOfRange { .. }
        | Error::InvalidTolerance { .. }
        | Error::UnknownInstance { .. }
        | Error::UnknownObject { .. }
        | Error::EmptySamples => 2,
        _ => 1,
    };
    Failure {
        code,
        message: err.to_string(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|err| Failure {
        code: 3,
        message: format!("cannot write {}: {err}", path.display()),
    })
}

fn emit_report(report: &VerificationReport, output: &OutputArgs) -> Result<(), Failure> {
    if let Some(path) = &output.out {
        write_file(path, &report_to_json(report))?;
    }
    if !output.quiet {
        print!("{}", render_report(report));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Circle {
            dim,
            j,
            tol,
            output,
        } => {
            let tol = tol.build().map_err(classify)?;
            let report = run_circle(dim, j, &tol).map_err(classify)?;
            emit_report(&report, &output)?;
            Ok(report.overall_pass())
        }
        Command::Hw { dim, tol, output } => {
            let tol = tol.build().map_err(classify)?;
            let report = run_hw(dim, &tol).map_err(classify)?;
            emit_report(&report, &output)?;
            Ok(report.overall_pass())
        }
        Command::Sweep {
            instance,
            dim_min,
            dim_max,
            tol,
            output,
        } => {
            let instance: SweepInstance = instance.parse().map_err(classify)?;
            let tol = tol.build().map_err(classify)?;
            let reports = run_sweep(instance, dim_min, dim_max, &tol).map_err(classify)?;
            if let Some(path) = &output.out {
                write_file(path, &reports_to_json(&reports))?;
            }
            if !output.quiet {
                print!("{}", render_sweep_table(&reports));
            }
            Ok(reports.iter().all(VerificationReport::overall_pass))
        }
        Command::Dump {
            instance,
            object,
            dim,
            output,
        } => {
            let dump = dump_object(&instance, dim, &object).map_err(classify)?;
            let json = dump_to_json(&dump);
            match &output.out {
                Some(path) => write_file(path, &json)?,
                None => {
                    if !output.quiet {
                        print!("{json}");
                    }
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    // clap itself exits with status 2 on malformed invocations
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
