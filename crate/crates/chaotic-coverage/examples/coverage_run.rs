//! Run a bundled scenario end to end and write its artifacts.
//!
//! ```bash
//! cargo run --release --example coverage_run [scenario.json] [out_dir]
//! ```
//!
//! Defaults to the bundled 50 m obstacle-free case with artifacts under
//! `runs/coverage_run`.

use std::path::PathBuf;

use chaotic_coverage::harness::{load_scenario, run_scenario};

fn main() -> chaotic_coverage::Result<()> {
    let mut args = std::env::args().skip(1);
    let scenario_path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/table1_case1.json")
    });
    let out_dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("runs/coverage_run"));

    let scenario = load_scenario(&scenario_path)?;
    println!(
        "running {} ({}x{} m, SR {} m, {} obstacles)",
        scenario.name,
        scenario.world.width,
        scenario.world.height,
        scenario.world.sensing_range,
        scenario.world.obstacles.len()
    );

    let outcome = run_scenario(&scenario, Some(&out_dir), true)?;
    let result = outcome.result.as_ref().unwrap();
    println!(
        "covered {:.1}% in {:.0} simulated s ({} samples)",
        result.final_tc * 100.0,
        result.ct.unwrap(),
        result.trajectory.len()
    );
    if let Some(pr) = outcome.summary.pr {
        println!(
            "optimal baseline {:.0} s, performance ratio {:.2}",
            outcome.summary.t_opt.unwrap(),
            pr
        );
    }
    println!(
        "counters: {} batches, {} boundary mirrors, {} obstacle offsets",
        result.counters.batches,
        result.counters.boundary_mirrors,
        result.counters.obstacle_offsets
    );
    println!("artifacts in {}", outcome.out_dir.display());
    Ok(())
}
