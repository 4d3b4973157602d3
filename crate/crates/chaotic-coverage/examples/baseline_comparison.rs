//! Compare the chaotic planner against the optimal back-and-forth reference
//! on an obstacle-free map.
//!
//! ```bash
//! cargo run --release --example baseline_comparison
//! ```

use chaotic_coverage::baseline::{boustrophedon, performance_ratio};
use chaotic_coverage::dynamics::IntegratorConfig;
use chaotic_coverage::geometry::Point;
use chaotic_coverage::planner::{run_coverage, PlannerConfig};
use chaotic_coverage::world::WorldSpec;

fn main() {
    let world = WorldSpec::open(50.0, 50.0, 1.0, Point::new(0.5, 0.5));
    let dc = 0.9;

    let base = boustrophedon(&world, dc, 1.0).expect("open map");
    println!(
        "optimal serpentine: {:.0} m of path, T_opt = {:.0} s at lane spacing {} m",
        base.path_length, base.t_opt, base.lane_spacing
    );

    // Same tolerance as the bundled scenarios, tight enough that the
    // adaptive step actually engages.
    let integrator = IntegratorConfig {
        e_p: 1e-9,
        ..IntegratorConfig::default()
    };
    for (label, cfg) in [
        (
            "original chaotic scan",
            PlannerConfig {
                integrator,
                ..PlannerConfig::default()
            },
        ),
        (
            "with orientation + zoning",
            PlannerConfig {
                orientation_enabled: true,
                zoning_enabled: true,
                c: 1.0,
                ds_index_init: 1.try_into().unwrap(),
                integrator,
                ..PlannerConfig::default()
            },
        ),
    ] {
        let result = run_coverage(&cfg, &world).expect("run");
        let ct = result.ct.unwrap();
        let pr = performance_ratio(ct, base.t_opt).unwrap();
        println!("{label:<26}: CT = {ct:>7.0} s, PR = {pr:.2}");
    }
    println!("\nPR = 1 would match the optimal planner; chaos pays for unpredictability");
}
