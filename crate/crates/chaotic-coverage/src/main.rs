//! Thin command-line front end over the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use chaotic_coverage::baseline::{boustrophedon, performance_ratio};
use chaotic_coverage::harness::{self, plot, sweep};
use chaotic_coverage::planner::run_coverage;

#[derive(Parser)]
#[command(name = "chaotic-coverage", version, about = "Chaotic coverage path planning simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write summary.json, trajectory.csv, coverage.csv.
    Run {
        scenario: PathBuf,
        /// Output directory (defaults to the scenario's own, else runs/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render plot.svg.
        #[arg(long)]
        plot: bool,
    },
    /// Run a parameter sweep and write a ranked results table.
    Sweep {
        spec: PathBuf,
        /// Output directory (defaults to runs/<base name>_sweep).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for concurrent scenarios.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the optimal back-and-forth time and the performance ratio.
    Baseline { scenario: PathBuf },
    /// Render an SVG figure from a trajectory file and its scenario.
    Plot {
        trajectory: PathBuf,
        scenario: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> chaotic_coverage::Result<()> {
    match cli.command {
        Command::Run { scenario, out, plot } => {
            let s = harness::load_scenario(&scenario)?;
            let outcome = harness::run_scenario(&s, out.as_deref(), plot)?;
            let summary = &outcome.summary;
            println!(
                "{}: tc = {:.4}, CT = {} s, artifacts in {}",
                summary.name,
                summary.final_tc.unwrap_or(0.0),
                summary.ct.map_or("-".into(), |v| format!("{v:.1}")),
                outcome.out_dir.display()
            );
            if let Some(pr) = summary.pr {
                println!("T_opt = {:.1} s, PR = {:.2}", summary.t_opt.unwrap(), pr);
            }
            Ok(())
        }
        Command::Sweep { spec, out, jobs } => {
            let sweep_spec = sweep::load_sweep(&spec)?;
            let out_dir = out.unwrap_or_else(|| {
                PathBuf::from("runs").join(format!("{}_sweep", sweep_spec.base.name))
            });
            let rows = sweep::run_sweep(&sweep_spec, &out_dir, jobs)?;
            println!("{} combinations, ranked table in {}", rows.len(), out_dir.join("ranked.csv").display());
            for row in rows.iter().take(5) {
                println!(
                    "  #{} {} ct={}",
                    row.rank,
                    row.name,
                    row.ct.map_or("-".into(), |v| format!("{v:.1}"))
                );
            }
            Ok(())
        }
        Command::Baseline { scenario } => {
            let s = harness::load_scenario(&scenario)?;
            let base = boustrophedon(&s.world, s.planner.dc, s.planner.v)?;
            println!("T_opt = {:.1} s (path {:.1} m)", base.t_opt, base.path_length);
            let result = run_coverage(&s.planner, &s.world)?;
            if let Some(ct) = result.ct {
                println!("CT = {ct:.1} s");
                println!("PR = {:.2}", performance_ratio(ct, base.t_opt)?);
            }
            Ok(())
        }
        Command::Plot { trajectory, scenario, output } => {
            let s = harness::load_scenario(&scenario)?;
            let samples = harness::read_trajectory_csv(&trajectory)?;
            let svg = plot::render_svg(&s.world, &samples);
            std::fs::write(&output, svg)?;
            println!("wrote {}", output.display());
            Ok(())
        }
    }
}
