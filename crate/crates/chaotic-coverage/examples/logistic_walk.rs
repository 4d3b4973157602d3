//! Drive the robot with the quadratic map alone, the reference system the
//! chaotic flow is compared against.
//!
//! ```bash
//! cargo run --release --example logistic_walk
//! ```

use chaotic_coverage::dynamics::IntegratorConfig;
use chaotic_coverage::geometry::Point;
use chaotic_coverage::planner::{run_coverage, Driver, PlannerConfig};
use chaotic_coverage::world::WorldSpec;

fn main() {
    let world = WorldSpec::open(50.0, 50.0, 1.0, Point::new(0.5, 0.5));

    let integrator = IntegratorConfig {
        e_p: 1e-9,
        ..IntegratorConfig::default()
    };
    let logistic = PlannerConfig {
        driver: Driver::Logistic,
        integrator,
        ..PlannerConfig::default()
    };
    let flow = PlannerConfig {
        integrator,
        ..PlannerConfig::default()
    };

    let a = run_coverage(&logistic, &world).expect("logistic run");
    let b = run_coverage(&flow, &world).expect("flow run");

    println!("90% coverage of a 50x50 m map, 1 m sensing range:");
    println!(
        "  quadratic-map driver: CT = {:>7.0} s, {} boundary mirrors",
        a.ct.unwrap(),
        a.counters.boundary_mirrors
    );
    println!(
        "  chaotic-flow driver : CT = {:>7.0} s, {} boundary mirrors",
        b.ct.unwrap(),
        b.counters.boundary_mirrors
    );
    println!(
        "\nthe map's headings jump across half the circle every step while the\n\
         flow turns smoothly, so the flow disperses faster and finishes first"
    );
}
