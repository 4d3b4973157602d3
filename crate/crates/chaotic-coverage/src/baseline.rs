//! Optimal back-and-forth reference planner for obstacle-free maps.
//!
//! Parallel lanes one sensing range apart, joined by short serpentine
//! connections, cover every cell with almost no repetition. The resulting
//! time-to-target is the denominator of the performance ratio reported for
//! chaotic runs.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::planner::coverage_target_cells;
use crate::world::{CoverageGrid, WorldSpec};

/// What the reference planner produced.
#[derive(Clone, Debug)]
pub struct BaselineResult {
    /// Lane spacing; equal to the sensing range, metres.
    pub lane_spacing: f64,
    /// Path length travelled up to the coverage target, metres.
    pub path_length: f64,
    /// Time to reach the target at the given speed, seconds.
    pub t_opt: f64,
    /// Sampled trajectory up to the target: (time, position).
    pub trajectory: Vec<(f64, Point)>,
}

/// Cover the map with serpentine lanes until the target fraction is reached.
///
/// Lanes run along x at the midheight of each cell row, connected by vertical
/// segments of one lane spacing; turns are instantaneous but their path
/// length is counted. The walk stops at the sample where the covered-cell
/// fraction first reaches `dc`.
pub fn boustrophedon(world: &WorldSpec, dc: f64, v: f64) -> Result<BaselineResult> {
    world.validate()?;
    if !world.obstacles.is_empty() {
        return Err(Error::HasObstacles {
            count: world.obstacles.len(),
        });
    }
    if !(0.0..=1.0).contains(&dc) {
        return Err(Error::validation("dc", "must lie in [0, 1]"));
    }
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::validation("v", "must be positive"));
    }

    let sr = world.sensing_range;
    let mut grid = CoverageGrid::new(world);
    let target = coverage_target_cells(dc, grid.total_free());

    // Lane endpoints sit at the centers of the first and last cell columns;
    // lane heights at the center of each cell row.
    let rows = grid.rows();
    let cols = grid.cols() as f64;
    let x_left = sr.min(world.width) / 2.0;
    let x_right = ((cols - 1.0) * sr + world.width.min(cols * sr)) / 2.0;
    let lane_y = |row: usize| -> f64 {
        (row as f64 * sr + world.height.min((row + 1) as f64 * sr)) / 2.0
    };

    let sample_spacing = (0.1 * v).min(sr / 4.0);
    let mut length = 0.0;
    let mut trajectory: Vec<(f64, Point)> = Vec::new();

    let mark = |p: Point, length: f64, trajectory: &mut Vec<(f64, Point)>, grid: &mut CoverageGrid| -> Result<bool> {
        grid.mark_visit(p)?;
        trajectory.push((length / v, p));
        Ok(grid.visited_free() >= target)
    };

    let start = Point::new(x_left, lane_y(0));
    if mark(start, length, &mut trajectory, &mut grid)? {
        return Ok(BaselineResult {
            lane_spacing: sr,
            path_length: 0.0,
            t_opt: 0.0,
            trajectory,
        });
    }

    let mut pos = start;
    'rows: for row in 0..rows {
        let y = lane_y(row);
        let target_x = if row % 2 == 0 { x_right } else { x_left };
        // Vertical connection from the previous lane.
        if row > 0 {
            let from = pos;
            let to = Point::new(pos.x, y);
            let seg = from.distance(to);
            let steps = (seg / sample_spacing).ceil().max(1.0) as usize;
            for k in 1..=steps {
                let frac = k as f64 / steps as f64;
                let p = Point::new(from.x, from.y + frac * (to.y - from.y));
                let done = mark(p, length + frac * seg, &mut trajectory, &mut grid)?;
                if done {
                    length += frac * seg;
                    break 'rows;
                }
            }
            length += seg;
            pos = to;
        }
        // Horizontal lane.
        let from = pos;
        let to = Point::new(target_x, y);
        let seg = from.distance(to);
        let steps = (seg / sample_spacing).ceil().max(1.0) as usize;
        for k in 1..=steps {
            let frac = k as f64 / steps as f64;
            let p = Point::new(from.x + frac * (to.x - from.x), from.y);
            let done = mark(p, length + frac * seg, &mut trajectory, &mut grid)?;
            if done {
                length += frac * seg;
                break 'rows;
            }
        }
        length += seg;
        pos = to;
    }

    if grid.visited_free() < target {
        return Err(Error::NoProgress {
            limit: length / v,
        });
    }

    Ok(BaselineResult {
        lane_spacing: sr,
        path_length: length,
        t_opt: length / v,
        trajectory,
    })
}

/// Ratio of a chaotic run's coverage time to the reference time.
pub fn performance_ratio(ct: f64, t_opt: f64) -> Result<f64> {
    if !t_opt.is_finite() || t_opt <= 0.0 {
        return Err(Error::ZeroBaseline);
    }
    Ok(ct / t_opt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn open_world(side: f64, sr: f64) -> WorldSpec {
        WorldSpec::open(side, side, sr, Point::new(0.5, 0.5))
    }

    #[test]
    fn rejects_obstructed_maps() {
        let mut world = open_world(50.0, 1.0);
        world.obstacles.push(crate::geometry::Rect::new(
            Point::new(10.0, 10.0),
            Point::new(20.0, 20.0),
        ));
        assert!(matches!(
            boustrophedon(&world, 0.9, 1.0),
            Err(Error::HasObstacles { count: 1 })
        ));
    }

    #[test]
    fn fifty_metre_map_time_matches_lane_arithmetic() {
        let world = open_world(50.0, 1.0);
        let result = boustrophedon(&world, 0.9, 1.0).unwrap();
        // 45 lanes of 49 m plus 44 one-metre turns, minus the tail of the
        // final lane: roughly 2.25e3 s.
        assert!(
            (2.0e3..2.5e3).contains(&result.t_opt),
            "t_opt = {}",
            result.t_opt
        );
        assert_eq!(result.lane_spacing, 1.0);
    }

    #[test]
    fn two_hundred_metre_sr4_map_matches_lane_arithmetic() {
        let world = open_world(200.0, 4.0);
        let result = boustrophedon(&world, 0.9, 1.0).unwrap();
        assert!(
            (8.0e3..9.8e3).contains(&result.t_opt),
            "t_opt = {}",
            result.t_opt
        );
    }

    #[test]
    fn degenerate_target_takes_no_time() {
        let world = open_world(50.0, 1.0);
        let result = boustrophedon(&world, 1e-5, 1.0).unwrap();
        assert_eq!(result.t_opt, 0.0);
    }

    #[test]
    fn full_target_covers_every_cell() {
        let world = open_world(10.0, 1.0);
        let result = boustrophedon(&world, 1.0, 1.0).unwrap();
        // 10 lanes of 9 m plus 9 turns of 1 m.
        assert!((result.path_length - 99.0).abs() < 0.5);
        let mut grid = CoverageGrid::new(&world);
        for (_, p) in &result.trajectory {
            grid.mark_visit(*p).unwrap();
        }
        assert_eq!(grid.coverage_rate(), 1.0);
    }

    #[test]
    fn performance_ratio_matches_reported_values() {
        assert!((performance_ratio(6.95e3, 2.673e3).unwrap() - 2.6).abs() < 0.01);
        assert!((performance_ratio(5.36e4, 9.4e3).unwrap() - 5.7).abs() < 0.01);
        assert_eq!(performance_ratio(7.0, 7.0).unwrap(), 1.0);
        assert!(matches!(
            performance_ratio(1.0, 0.0),
            Err(Error::ZeroBaseline)
        ));
    }

    #[test]
    fn time_scales_inversely_with_speed() {
        let world = open_world(50.0, 1.0);
        let slow = boustrophedon(&world, 0.9, 1.0).unwrap();
        let fast = boustrophedon(&world, 0.9, 2.0).unwrap();
        assert!((slow.t_opt / fast.t_opt - 2.0).abs() < 0.05);
    }
}
