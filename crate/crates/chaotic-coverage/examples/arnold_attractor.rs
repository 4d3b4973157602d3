//! Integrate the chaotic flow on its own and print a feel for the attractor:
//! coordinate extents, heading turn rate, and a few trajectory rows.
//!
//! ```bash
//! cargo run --release --example arnold_attractor
//! ```

use chaotic_coverage::dynamics::{
    adaptive_step, heading_rate, ArnoldParams, AugmentedState, DsIndex, IntegratorConfig,
};
use chaotic_coverage::geometry::Point;

fn main() {
    let params = ArnoldParams::default();
    let cfg = IntegratorConfig::default();
    let idx = DsIndex::Z;
    let mut state = AugmentedState::new(0.0, 1.0, 0.0, Point::new(0.0, 0.0));

    let mut lo = [f64::MAX; 3];
    let mut hi = [f64::MIN; 3];
    let mut max_turn_rate = 0.0f64;
    let steps = 100_000;

    println!("step      x        y        z        X        Y");
    for i in 0..steps {
        let result = adaptive_step(&state, cfg.dt_init, &cfg, &params, idx, 1.0)
            .expect("flow stays finite");
        state = result.state;
        for (k, v) in [state.x, state.y, state.z].into_iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
        max_turn_rate = max_turn_rate.max(heading_rate(&state, &params, idx).abs());
        if i % (steps / 10) == 0 {
            println!(
                "{i:>6} {:>8.3} {:>8.3} {:>8.3} {:>8.2} {:>8.2}",
                state.x, state.y, state.z, state.pos.x, state.pos.y
            );
        }
    }

    println!("\nafter {steps} steps of the joint flow + position system:");
    println!("  x range [{:.2}, {:.2}]", lo[0], hi[0]);
    println!("  y range [{:.2}, {:.2}]", lo[1], hi[1]);
    println!("  z range [{:.2}, {:.2}]", lo[2], hi[2]);
    println!("  max |heading turn rate| = {max_turn_rate:.3} rad/s");
    println!("  robot wandered to ({:.1}, {:.1}) with no walls", state.pos.x, state.pos.y);
}
