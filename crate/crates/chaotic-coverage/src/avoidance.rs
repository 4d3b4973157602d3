//! Boundary mirroring, obstacle offsets, and transit-path repair.
//!
//! Two geometric corrections keep trajectory points clear of walls and
//! obstacles. Points outside or within `f_o` of a wall are mirrored back in
//! with clearance `f_o`; points inside or near an obstacle are snapped to the
//! nearest face plus `f_o`, moving only one coordinate so the robot's speed
//! stays near constant. Transit paths built from the quadratic map are walked
//! point by point, and each collision with a detected obstacle relocates the
//! offending point and rebuilds the remaining path toward the goal over the
//! leftover raw points; the number of such attempts is bounded.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};
use crate::world::WorldSpec;

/// Clearance and attempt budget for obstacle handling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AvoidConfig {
    /// Safe offset from walls and obstacle faces, metres.
    pub f_o: f64,
    /// Initial cap on escape attempts per transit. `None` scales with the
    /// map size: 10 on a 50 m map, doubling with each doubling of the side.
    pub t_h: Option<u32>,
    /// Increment applied to the cap when every candidate zone has failed.
    pub delta_n_h: u32,
}

impl Default for AvoidConfig {
    fn default() -> Self {
        Self {
            f_o: 0.5,
            t_h: None,
            delta_n_h: 5,
        }
    }
}

impl AvoidConfig {
    /// Effective initial attempt cap for the given map.
    pub fn initial_attempts(&self, world: &WorldSpec) -> u32 {
        self.t_h.unwrap_or_else(|| {
            let side = world.width.max(world.height);
            ((10.0 * side / 50.0).round() as u32).max(10)
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f_o > 0.0 && self.f_o.is_finite()) {
            return Err(Error::validation("avoid.f_o", "must be positive and finite"));
        }
        if self.t_h == Some(0) {
            return Err(Error::validation("avoid.t_h", "must be at least 1"));
        }
        if self.delta_n_h == 0 {
            return Err(Error::validation("avoid.delta_n_h", "must be at least 1"));
        }
        Ok(())
    }
}

/// Mirror a point that is outside or within `f_o` of a wall back into the map.
///
/// Each offending axis reflects independently: `x' = -x + 2 f_o` against the
/// left wall, `x' = -x + 2 (width - f_o)` against the right wall, and the
/// same on y. A point that is already clear of every wall passes through
/// unchanged. Errors when the reflected point still lies outside the map,
/// which terminates the run.
pub fn mirror_boundary(p: Point, world: &WorldSpec, f_o: f64) -> Result<Point> {
    let mut q = p;
    if p.x < f_o {
        q.x = -p.x + 2.0 * f_o;
    } else if p.x > world.width - f_o {
        q.x = -p.x + 2.0 * (world.width - f_o);
    }
    if p.y < f_o {
        q.y = -p.y + 2.0 * f_o;
    } else if p.y > world.height - f_o {
        q.y = -p.y + 2.0 * (world.height - f_o);
    }
    if world.is_outside(q) {
        return Err(Error::StillOutside { point: q });
    }
    Ok(q)
}

/// Snap a point inside or near an obstacle to the nearest face plus `f_o`.
///
/// Only the coordinate of the nearest face changes. Face distances tie-break
/// in the order left, right, bottom, top, so the x axis is preferred and the
/// lower-coordinate face wins within an axis.
pub fn offset_obstacle(p: Point, obstacle: &Rect, f_o: f64) -> Point {
    let faces = [
        ((p.x - obstacle.min.x).abs(), 0, obstacle.min.x - f_o),
        ((p.x - obstacle.max.x).abs(), 0, obstacle.max.x + f_o),
        ((p.y - obstacle.min.y).abs(), 1, obstacle.min.y - f_o),
        ((p.y - obstacle.max.y).abs(), 1, obstacle.max.y + f_o),
    ];
    let (_, axis, target) = faces
        .iter()
        .copied()
        .reduce(|best, cur| if cur.0 < best.0 { cur } else { best })
        .unwrap();
    let mut q = p;
    if axis == 0 {
        q.x = target;
    } else {
        q.y = target;
    }
    q
}

/// Evenly spaced relative offsets that carry a raw chaotic walk onto the
/// direct path from `start` to `goal`.
///
/// Offset k interpolates linearly from `start - raw[0]` to `goal - raw[m-1]`
/// at fraction k/(m-1). A single remaining point pins to the goal.
pub fn relative_offsets(raw: &[Point], start: Point, goal: Point) -> Vec<Point> {
    let m = raw.len();
    let first = Point::new(start.x - raw[0].x, start.y - raw[0].y);
    let last = Point::new(goal.x - raw[m - 1].x, goal.y - raw[m - 1].y);
    (0..m)
        .map(|k| {
            let frac = if m == 1 { 1.0 } else { k as f64 / (m - 1) as f64 };
            Point::new(
                first.x + frac * (last.x - first.x),
                first.y + frac * (last.y - first.y),
            )
        })
        .collect()
}

/// Map a raw chaotic walk onto the direct path between `start` and `goal`.
///
/// Returns the relative offsets and the mapped points. The mapped sequence is
/// pinned exactly to `start` and `goal` at its ends. Errors when the raw walk
/// contains non-finite points.
pub fn map_to_direct_path(
    raw: &[Point],
    start: Point,
    goal: Point,
) -> Result<(Vec<Point>, Vec<Point>)> {
    if raw.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinitePath);
    }
    let m = raw.len();
    debug_assert!(m >= 2, "transit paths need at least two points");
    let relative = relative_offsets(raw, start, goal);
    let mut mapped: Vec<Point> = raw
        .iter()
        .zip(relative.iter())
        .map(|(r, o)| Point::new(r.x + o.x, r.y + o.y))
        .collect();
    mapped[0] = start;
    mapped[m - 1] = goal;
    Ok((relative, mapped))
}

/// A transit path: the raw chaotic walk, its relative offsets, and the mapped
/// points actually proposed to the robot.
#[derive(Clone, Debug)]
pub struct LogisticPath {
    pub raw: Vec<Point>,
    pub relative: Vec<Point>,
    pub mapped: Vec<Point>,
}

impl LogisticPath {
    /// Build a transit path from raw walk points; `raw[0]` must equal the
    /// robot's current position.
    pub fn build(raw: Vec<Point>, start: Point, goal: Point) -> Result<Self> {
        let (relative, mapped) = map_to_direct_path(&raw, start, goal)?;
        Ok(Self {
            raw,
            relative,
            mapped,
        })
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }
}

/// What a transit walk produced.
#[derive(Clone, Debug)]
pub struct TransitOutcome {
    /// Every point the robot actually moved through, in order. The first
    /// entry is the start position.
    pub traversed: Vec<Point>,
    /// Simulated time after the walk.
    pub t: f64,
    /// Escape attempts consumed; equal to the cap on failure.
    pub attempts: u32,
    /// Whether the walk arrived at the goal.
    pub reached: bool,
}

/// Walk a mapped transit path, repairing it around obstacles as they are
/// detected.
///
/// The robot advances point by point, spending `dt_constant` per step. When
/// the next point lies inside an obstacle, the remainder of the path is
/// discarded, the offending point is relocated off the obstacle face, and the
/// relative offsets are rebuilt from the relocated point to the goal over the
/// remaining raw points, so every retry is shorter than the last. The walk
/// ends at the goal or once `t_h` attempts are spent; exhausting the budget
/// is a normal outcome, not an error.
pub fn logistic_obstacle_avoid(
    path: &LogisticPath,
    goal: Point,
    world: &WorldSpec,
    f_o: f64,
    t_h: u32,
    t0: f64,
    dt_constant: f64,
) -> TransitOutcome {
    let raw = &path.raw;
    let n = raw.len();
    let mut mapped = path.mapped.clone();
    let mut traversed: Vec<Point> = Vec::with_capacity(n);
    let mut t = t0;
    let mut attempts = 0u32;
    let mut i = 0usize;

    while i < n {
        let p = mapped[i];
        if let Some(obstacle) = world.obstacle_containing(p) {
            attempts += 1;
            let mut relocated = offset_obstacle(p, obstacle, f_o);
            if world.is_outside(relocated) {
                match mirror_boundary(relocated, world, f_o) {
                    Ok(q) => relocated = q,
                    Err(_) => {
                        return TransitOutcome {
                            traversed,
                            t,
                            attempts,
                            reached: false,
                        }
                    }
                }
            }
            let rebuilt = relative_offsets(&raw[i..], relocated, goal);
            for (k, off) in rebuilt.iter().enumerate() {
                mapped[i + k] = Point::new(raw[i + k].x + off.x, raw[i + k].y + off.y);
            }
            mapped[i] = if n - i == 1 { goal } else { relocated };
            mapped[n - 1] = goal;
            if attempts == t_h {
                return TransitOutcome {
                    traversed,
                    t,
                    attempts,
                    reached: false,
                };
            }
            // Loop continues at the same index: the relocated point becomes
            // the first step of the rebuilt path.
        } else {
            if !traversed.is_empty() {
                t += dt_constant;
            }
            traversed.push(p);
            i += 1;
        }
    }

    TransitOutcome {
        traversed,
        t,
        attempts,
        reached: true,
    }
}
