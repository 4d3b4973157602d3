//! Build a chaotic transit path between two points and repair it around an
//! obstacle slab, printing each escape attempt.
//!
//! ```bash
//! cargo run --release --example zone_transit
//! ```

use chaotic_coverage::avoidance::{logistic_obstacle_avoid, LogisticPath};
use chaotic_coverage::dynamics::{logistic_heading, logistic_step, HeadingSide, LogisticState};
use chaotic_coverage::geometry::{Point, Rect};
use chaotic_coverage::world::WorldSpec;

fn main() {
    let mut world = WorldSpec::open(50.0, 50.0, 1.0, Point::new(5.0, 15.0));
    world
        .obstacles
        .push(Rect::new(Point::new(24.0, 0.0), Point::new(26.0, 30.0)));

    let start = Point::new(5.0, 15.0);
    let goal = Point::new(45.0, 15.0);
    let (v, dt) = (1.0, 0.1);

    // Raw chaotic walk: one point per time step of the straight-line travel
    // time, fanned rightward because the robot starts in the left half.
    let m = ((start.distance(goal) / (v * dt)) as usize + 1).max(2);
    let mut logistic = LogisticState::default();
    let mut raw = vec![start];
    for _ in 1..m {
        let x = logistic.advance();
        let theta = logistic_heading(x, HeadingSide::Minus);
        raw.push(logistic_step(*raw.last().unwrap(), theta, v, dt));
    }

    let path = LogisticPath::build(raw, start, goal).expect("finite walk");
    println!(
        "transit of {} points from ({}, {}) to ({}, {}), obstacle slab x in [24, 26]",
        path.len(),
        start.x,
        start.y,
        goal.x,
        goal.y
    );

    for t_h in [3, 10, 200] {
        let out = logistic_obstacle_avoid(&path, goal, &world, 0.5, t_h, 0.0, dt);
        let safe = out
            .traversed
            .iter()
            .all(|p| world.contains(*p) && world.obstacle_containing(*p).is_none());
        println!(
            "t_h = {t_h:>3}: attempts = {:>3}, reached = {:5}, traversed {:>3} points, all safe = {safe}, t = {:.1} s",
            out.attempts,
            out.reached,
            out.traversed.len(),
            out.t
        );
    }
    println!("\neach attempt relocates the blocked point off the nearest face and");
    println!("rebuilds a shorter path, so a generous budget steps past the slab");
}
