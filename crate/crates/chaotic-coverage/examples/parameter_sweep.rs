//! Sweep planner parameters over a base scenario and print the ranked table.
//!
//! ```bash
//! cargo run --release --example parameter_sweep
//! ```

use chaotic_coverage::geometry::Point;
use chaotic_coverage::harness::sweep::{run_sweep, SweepAxes, SweepSpec, DEFAULT_CAP};
use chaotic_coverage::harness::Scenario;
use chaotic_coverage::planner::PlannerConfig;
use chaotic_coverage::world::WorldSpec;

fn main() -> chaotic_coverage::Result<()> {
    let base = Scenario {
        format_version: 1,
        name: "sweep_demo".into(),
        world: WorldSpec::open(50.0, 50.0, 1.0, Point::new(0.5, 0.5)),
        planner: PlannerConfig {
            zoning_enabled: true,
            orientation_enabled: true,
            ..PlannerConfig::default()
        },
        baseline: false,
        out_dir: None,
    };
    let spec = SweepSpec {
        format_version: 1,
        base,
        axes: SweepAxes {
            ds_index_init: vec![1, 2, 3],
            c: vec![0.2, 0.5, 1.0],
            ..SweepAxes::default()
        },
        cap: DEFAULT_CAP,
    };

    let out = std::path::PathBuf::from("runs/sweep_demo");
    let rows = run_sweep(&spec, &out, None)?;
    println!("{} combinations to 90% coverage, best first:", rows.len());
    println!("{:>4} {:>5} {:>4} {:>9}", "rank", "c", "idx", "CT (s)");
    for row in &rows {
        println!(
            "{:>4} {:>5} {:>4} {:>9}",
            row.rank,
            row.c,
            row.ds_index_init,
            row.ct.map_or("-".into(), |v| format!("{v:.0}"))
        );
    }
    println!("full table in {}", out.join("ranked.csv").display());
    Ok(())
}
