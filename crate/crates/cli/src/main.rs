use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use swe_riemann_cli::{
    cmd_batch, cmd_curves, cmd_sample, cmd_solve, cmd_validate, load_problem, parse_side,
    CliError, Overrides,
};
use swe_riemann_core::{InterfaceSide, ProfileRequest};

/// Exact Riemann solver for the shallow water equations over a bottom step.
#[derive(Parser)]
#[command(name = "swe-riemann", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Gravitational acceleration (overrides the problem file).
    #[arg(long, global = true)]
    g: Option<f64>,

    /// Absolute residual tolerance.
    #[arg(long = "tol-abs", global = true)]
    tol_abs: Option<f64>,

    /// Relative tolerance.
    #[arg(long = "tol-rel", global = true)]
    tol_rel: Option<f64>,

    /// Scan grid size for matching-equation brackets.
    #[arg(long, global = true)]
    grid: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a problem file and print the solution document as JSON.
    Solve { file: PathBuf },
    /// Solve, then write one CSV profile per solution.
    Sample {
        file: PathBuf,
        /// Sampling time (> 0).
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        xmin: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        xmax: Option<f64>,
        /// Number of profile rows.
        #[arg(long)]
        n: Option<usize>,
        /// One-sided limit at x = 0: left or right.
        #[arg(long, default_value = "right", value_parser = parse_side)]
        side: InterfaceSide,
        /// Output directory for the CSV files (default: alongside the input).
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },
    /// Tabulate wave curves through the file's left state as CSV.
    Curves {
        file: PathBuf,
        /// Points per curve.
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Re-validate a solution document produced by `solve`.
    Validate { file: PathBuf },
    /// Solve every .json problem file in a directory.
    Batch { dir: PathBuf },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let over = Overrides {
        g: cli.g,
        tol_abs: cli.tol_abs,
        tol_rel: cli.tol_rel,
        grid: cli.grid,
    };
    match cli.cmd {
        Cmd::Solve { file } => {
            let (json, n) = cmd_solve(&file, &over)?;
            println!("{json}");
            Ok(if n > 0 { 0 } else { 2 })
        }
        Cmd::Sample {
            file,
            t,
            xmin,
            xmax,
            n,
            side,
            out_dir,
        } => {
            // flags override the profile block of the problem file
            let base = load_problem(&file, &over)?.profile;
            let req = ProfileRequest {
                x_min: xmin
                    .or(base.map(|p| p.x_min))
                    .ok_or_else(|| CliError::Input("missing --xmin (no profile in file)".into()))?,
                x_max: xmax
                    .or(base.map(|p| p.x_max))
                    .ok_or_else(|| CliError::Input("missing --xmax (no profile in file)".into()))?,
                t: t
                    .or(base.map(|p| p.t))
                    .ok_or_else(|| CliError::Input("missing --t (no profile in file)".into()))?,
                n: n
                    .or(base.map(|p| p.n))
                    .ok_or_else(|| CliError::Input("missing --n (no profile in file)".into()))?,
                side_at_zero: side,
            };
            let dir = out_dir.unwrap_or_else(|| {
                file.parent()
                    .map(|p| p.to_path_buf())
                    .unwrap_or_else(|| PathBuf::from("."))
            });
            let written = cmd_sample(&file, &req, &dir, &over)?;
            for p in written {
                println!("{}", p.display());
            }
            Ok(0)
        }
        Cmd::Curves { file, points } => {
            print!("{}", cmd_curves(&file, points, &over)?);
            Ok(0)
        }
        Cmd::Validate { file } => {
            let summary = cmd_validate(&file)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&summary).expect("summary serializes")
            );
            Ok(if summary.solutions > 0 && summary.valid == summary.solutions {
                0
            } else {
                2
            })
        }
        Cmd::Batch { dir } => {
            let summary = cmd_batch(&dir, &over)?;
            print!("{}", summary.render());
            Ok(if summary.any_solution() { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
