//! Deterministic coverage path planning driven by chaotic dynamical systems.
//!
//! A point robot scans a bounded rectangular world to a target coverage rate
//! while avoiding rectangular obstacles. A chaotic flow steers its heading,
//! producing unpredictable but fully deterministic trajectories, and three
//! control techniques keep those trajectories productive: orientation control
//! cycles the heading source when coverage stalls, map zoning relocates the
//! robot to under-covered zones along transit paths built from a quadratic
//! map, and system scaling stretches the scanned extent to match the sensing
//! range and map size. A serpentine reference planner provides the optimal
//! time for obstacle-free maps, and a scenario harness runs, sweeps, and
//! plots everything from JSON files.
//!
//! Start with the runnable examples:
//!
//! ```bash
//! cargo run --release --example coverage_run
//! cargo run --release --example scaling_demo
//! ```
//!
//! or the CLI:
//!
//! ```bash
//! cargo run --release -- run crates/chaotic-coverage/scenarios/table1_case1.json --plot
//! ```
//!
//! Everything is deterministic: no randomness enters anywhere, so identical
//! inputs produce byte-identical trajectory files on one platform.

pub mod avoidance;
pub mod baseline;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod planner;
pub mod world;

pub use error::{Error, Result};
pub use geometry::{Point, Rect};
pub use harness::{load_scenario, run_scenario, Scenario};
pub use planner::{run_coverage, PlannerConfig, RunResult};
pub use world::WorldSpec;
