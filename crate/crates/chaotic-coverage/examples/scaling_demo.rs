//! Show how the scaling factor changes coverage extent and density: the same
//! flow scans the same map for a fixed simulated time at f = 0.1, 1 and 2.
//!
//! ```bash
//! cargo run --release --example scaling_demo
//! ```

use chaotic_coverage::dynamics::{AugmentedState, DsIndex};
use chaotic_coverage::geometry::Point;
use chaotic_coverage::planner::{system_scaler, PlannerConfig};
use chaotic_coverage::world::{CoverageGrid, WorldSpec};

fn main() {
    let world = WorldSpec::open(50.0, 50.0, 1.0, Point::new(0.5, 0.5));
    let budget = 2.16e3; // simulated seconds

    for f in [0.1, 1.0, 2.0] {
        let cfg = PlannerConfig {
            scaling_enabled: true,
            f,
            ..PlannerConfig::default()
        };
        let mut grid = CoverageGrid::new(&world);
        grid.mark_visit(world.start).unwrap();

        let [x0, y0, z0] = cfg.arnold_ic;
        let mut state = AugmentedState::new(
            x0,
            y0,
            z0,
            Point::new(world.start.x / f, world.start.y / f),
        );
        let mut t = 0.0;
        let mut lo = Point::new(f64::MAX, f64::MAX);
        let mut hi = Point::new(f64::MIN, f64::MIN);
        while t < budget {
            let batch = system_scaler(state, DsIndex::Z, &cfg, &world, t).expect("batch");
            for row in &batch.rows[1..] {
                if row.state.t > budget {
                    break;
                }
                grid.mark_visit(row.scaled).unwrap();
                lo.x = lo.x.min(row.scaled.x);
                lo.y = lo.y.min(row.scaled.y);
                hi.x = hi.x.max(row.scaled.x);
                hi.y = hi.y.max(row.scaled.y);
            }
            state = batch.rows.last().unwrap().state;
            t = batch.t_end;
        }
        println!(
            "f = {f:>3}: coverage {:>4.1}% after {budget} s, extent x [{:.1}, {:.1}] y [{:.1}, {:.1}]",
            grid.coverage_rate() * 100.0,
            lo.x,
            hi.x,
            lo.y,
            hi.y
        );
    }
    println!("\nlarger f spreads the same travel time over more ground, raising");
    println!("coverage; smaller f packs it into denser, more repetitive scanning");
}
