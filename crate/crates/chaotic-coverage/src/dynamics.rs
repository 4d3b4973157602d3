//! Chaotic generators and their coupling into the robot's kinematics.
//!
//! Two systems drive the robot. A three-coordinate chaotic flow
//!
//! ```text
//! dx/dt = A sin z + C cos y
//! dy/dt = B sin x + A cos z
//! dz/dt = C sin y + B cos x
//! ```
//!
//! steers the main scanning motion: one of its coordinates is read as the
//! robot's heading, so the joint five-dimensional system (flow plus position)
//! is integrated as one ODE with a step-doubling adaptive RK4. A
//! one-dimensional quadratic map, `x <- r x (1 - x)`, produces headings for
//! point-to-point transit paths via `theta = pi x +/- pi/2`.
//!
//! Everything here is a pure function over value inputs; there is no shared
//! state and no randomness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Rate coefficients of the chaotic flow, in 1/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArnoldParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for ArnoldParams {
    fn default() -> Self {
        Self {
            a: 0.5,
            b: 0.25,
            c: 0.25,
        }
    }
}

/// Joint flow + robot state integrated as one ODE system.
///
/// `x`, `y`, `z` are the dimensionless flow coordinates; `pos` is the robot
/// position in metres. `t` is bookkeeping only: integration steps never
/// advance it, the caller does.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AugmentedState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub pos: Point,
    pub t: f64,
}

impl AugmentedState {
    pub fn new(x: f64, y: f64, z: f64, pos: Point) -> Self {
        Self { x, y, z, pos, t: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite() && self.pos.is_finite()
    }
}

/// State of the quadratic transit map `x <- r x (1 - x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogisticState {
    pub x: f64,
    pub r: f64,
}

impl Default for LogisticState {
    fn default() -> Self {
        Self { x: 0.1, r: 4.0 }
    }
}

impl LogisticState {
    pub fn new(x: f64, r: f64) -> Self {
        Self { x, r }
    }

    /// Advance the map by one iteration and return the new coordinate.
    pub fn advance(&mut self) -> f64 {
        self.x = logistic_next(self.x, self.r);
        self.x
    }

    /// True when the current coordinate maps onto itself, e.g. x = 0 or
    /// x = 0.75 for r = 4. Such states generate straight, non-chaotic paths.
    pub fn is_fixed_point(&self) -> bool {
        logistic_next(self.x, self.r) == self.x
    }
}

/// Which flow coordinate is mapped onto the robot heading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum DsIndex {
    X = 1,
    Y = 2,
    Z = 3,
}

impl DsIndex {
    /// Cyclic successor: 1 -> 2 -> 3 -> 1.
    pub fn next(self) -> Self {
        match self {
            DsIndex::X => DsIndex::Y,
            DsIndex::Y => DsIndex::Z,
            DsIndex::Z => DsIndex::X,
        }
    }

    /// The heading angle read from the selected flow coordinate, in radians.
    pub fn heading(self, s: &AugmentedState) -> f64 {
        match self {
            DsIndex::X => s.x,
            DsIndex::Y => s.y,
            DsIndex::Z => s.z,
        }
    }
}

impl From<DsIndex> for u8 {
    fn from(i: DsIndex) -> u8 {
        i as u8
    }
}

impl TryFrom<u8> for DsIndex {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(DsIndex::X),
            2 => Ok(DsIndex::Y),
            3 => Ok(DsIndex::Z),
            other => Err(format!("ds_index must be 1, 2 or 3, got {other}")),
        }
    }
}

/// Sign of the `pi/2` term in the transit heading `theta = pi x +/- pi/2`.
///
/// `Minus` fans headings into `[-pi/2, pi/2]` (net rightward drift), `Plus`
/// into `[pi/2, 3pi/2]` (net leftward drift).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeadingSide {
    Plus,
    Minus,
}

impl HeadingSide {
    pub fn sign(self) -> f64 {
        match self {
            HeadingSide::Plus => 1.0,
            HeadingSide::Minus => -1.0,
        }
    }
}

/// Step-size control for the adaptive integrator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    /// Initial adaptive step, seconds. Reset at the start of every batch.
    pub dt_init: f64,
    /// Constant step for transit paths, seconds.
    pub dt_constant: f64,
    /// Position discrepancy tolerance between full and half steps, metres.
    pub e_p: f64,
    /// Floor for step halving, seconds.
    pub dt_min: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt_init: 0.1,
            dt_constant: 0.1,
            e_p: 1e-3,
            dt_min: 1e-4,
        }
    }
}

/// State slope of the joint five-dimensional system.
#[derive(Clone, Copy, Debug, Default)]
struct Slope {
    x: f64,
    y: f64,
    z: f64,
    px: f64,
    py: f64,
}

/// Flow derivatives `(dx/dt, dy/dt, dz/dt)` at the given state.
pub fn arnold_derivative(s: &AugmentedState, p: &ArnoldParams) -> (f64, f64, f64) {
    (
        p.a * s.z.sin() + p.c * s.y.cos(),
        p.b * s.x.sin() + p.a * s.z.cos(),
        p.c * s.y.sin() + p.b * s.x.cos(),
    )
}

/// Joint derivative `(dx, dy, dz, dX, dY)` of flow plus robot position.
///
/// The robot moves at constant speed `v` along the heading selected by `idx`.
pub fn augmented_derivative(
    s: &AugmentedState,
    p: &ArnoldParams,
    idx: DsIndex,
    v: f64,
) -> (f64, f64, f64, f64, f64) {
    let k = slope(s, p, idx, v);
    (k.x, k.y, k.z, k.px, k.py)
}

/// Instantaneous turn rate of the selected heading coordinate, in rad/s.
///
/// Derived diagnostic only; nothing downstream integrates it.
pub fn heading_rate(s: &AugmentedState, p: &ArnoldParams, idx: DsIndex) -> f64 {
    let (dx, dy, dz) = arnold_derivative(s, p);
    match idx {
        DsIndex::X => dx,
        DsIndex::Y => dy,
        DsIndex::Z => dz,
    }
}

fn slope(s: &AugmentedState, p: &ArnoldParams, idx: DsIndex, v: f64) -> Slope {
    let (dx, dy, dz) = arnold_derivative(s, p);
    let heading = idx.heading(s);
    Slope {
        x: dx,
        y: dy,
        z: dz,
        px: v * heading.cos(),
        py: v * heading.sin(),
    }
}

fn offset(s: &AugmentedState, k: &Slope, h: f64) -> AugmentedState {
    AugmentedState {
        x: s.x + h * k.x,
        y: s.y + h * k.y,
        z: s.z + h * k.z,
        pos: Point::new(s.pos.x + h * k.px, s.pos.y + h * k.py),
        t: s.t,
    }
}

/// One classical RK4 step of the joint system. Does not advance `t`.
pub fn rk4_step(
    s: &AugmentedState,
    dt: f64,
    p: &ArnoldParams,
    idx: DsIndex,
    v: f64,
) -> AugmentedState {
    let k1 = slope(s, p, idx, v);
    let k2 = slope(&offset(s, &k1, dt / 2.0), p, idx, v);
    let k3 = slope(&offset(s, &k2, dt / 2.0), p, idx, v);
    let k4 = slope(&offset(s, &k3, dt), p, idx, v);
    let combined = Slope {
        x: (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x) / 6.0,
        y: (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y) / 6.0,
        z: (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z) / 6.0,
        px: (k1.px + 2.0 * k2.px + 2.0 * k3.px + k4.px) / 6.0,
        py: (k1.py + 2.0 * k2.py + 2.0 * k3.py + k4.py) / 6.0,
    };
    offset(s, &combined, dt)
}

/// Outcome of one step-doubling integration step.
#[derive(Clone, Copy, Debug)]
pub struct StepResult {
    /// Accepted state. Spans the full `dt` in either branch: the two
    /// half-step composite is returned when the discrepancy was too large.
    pub state: AugmentedState,
    /// Simulated time the accepted state spans (always the input `dt`).
    pub dt_used: f64,
    /// Step to use next: halved (clamped at `dt_min`) after a rejection.
    pub dt_next: f64,
    /// Whether the half-step result was taken.
    pub halved: bool,
}

/// Step-doubling adaptive RK4.
///
/// Computes a full step of `dt` and a two-half-step estimate. If the robot
/// position components differ by more than `e_p` between them, the half-step
/// result wins and the next step is halved (never below `dt_min`); otherwise
/// the full-step result is kept and the step size is unchanged. The step size
/// only ever shrinks here; callers reset it per batch.
pub fn adaptive_step(
    s: &AugmentedState,
    dt: f64,
    cfg: &IntegratorConfig,
    p: &ArnoldParams,
    idx: DsIndex,
    v: f64,
) -> Result<StepResult> {
    let full = rk4_step(s, dt, p, idx, v);
    let half = rk4_step(&rk4_step(s, dt / 2.0, p, idx, v), dt / 2.0, p, idx, v);
    let exceeded = (full.pos.x - half.pos.x).abs() > cfg.e_p
        || (full.pos.y - half.pos.y).abs() > cfg.e_p;
    let (state, dt_next, halved) = if exceeded {
        (half, (dt / 2.0).max(cfg.dt_min), true)
    } else {
        (full, dt, false)
    };
    if !state.is_finite() {
        return Err(Error::NonFiniteState { t: s.t });
    }
    Ok(StepResult {
        state,
        dt_used: dt,
        dt_next,
        halved,
    })
}

/// One iteration of the quadratic map: `r x (1 - x)`.
pub fn logistic_next(x: f64, r: f64) -> f64 {
    r * x * (1.0 - x)
}

/// Transit heading `theta = pi x + sign * pi/2`, in radians.
pub fn logistic_heading(x: f64, side: HeadingSide) -> f64 {
    std::f64::consts::PI * x + side.sign() * std::f64::consts::FRAC_PI_2
}

/// Euler update of the robot position along a transit heading.
pub fn logistic_step(pos: Point, theta: f64, v: f64, dt: f64) -> Point {
    Point::new(pos.x + dt * v * theta.cos(), pos.y + dt * v * theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const TOL: f64 = 1e-9;

    fn default_state() -> AugmentedState {
        AugmentedState::new(0.0, 1.0, 0.0, Point::new(0.5, 0.5))
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        let scale = 1.0f64.max(a.abs()).max(b.abs());
        (a - b).abs() <= tol * scale
    }

    /// Independent high-accuracy reference: the same scheme composed over
    /// many fine sub-steps.
    fn fine_step_oracle(
        s: &AugmentedState,
        total: f64,
        substeps: usize,
        p: &ArnoldParams,
        idx: DsIndex,
        v: f64,
    ) -> AugmentedState {
        let h = total / substeps as f64;
        let mut cur = *s;
        for _ in 0..substeps {
            cur = rk4_step(&cur, h, p, idx, v);
        }
        cur
    }

    #[test]
    fn arnold_derivative_matches_hand_evaluation() {
        let p = ArnoldParams::default();
        // (0, 1, 0): dx = 0.25 cos 1, dy = 0.5, dz = 0.25 sin 1 + 0.25
        let (dx, dy, dz) = arnold_derivative(&default_state(), &p);
        assert!(rel_close(dx, 0.25 * 1f64.cos(), TOL));
        assert!(rel_close(dy, 0.5, TOL));
        assert!(rel_close(dz, 0.25 * 1f64.sin() + 0.25, TOL));

        // (0, pi/2, pi/2): dx = 0.5 sin(pi/2) + 0.25 cos(pi/2) = 0.5,
        // dy = 0 + 0.5 cos(pi/2) = 0, dz = 0.25 sin(pi/2) + 0.25 = 0.5
        let s = AugmentedState::new(0.0, FRAC_PI_2, FRAC_PI_2, Point::default());
        let (dx, dy, dz) = arnold_derivative(&s, &p);
        assert!((dx - 0.5).abs() < TOL);
        assert!(dy.abs() < TOL);
        assert!((dz - 0.5).abs() < TOL);
    }

    #[test]
    fn zero_coefficients_freeze_the_flow() {
        let p = ArnoldParams { a: 0.0, b: 0.0, c: 0.0 };
        let s = AugmentedState::new(1.7, -0.3, 12.0, Point::default());
        assert_eq!(arnold_derivative(&s, &p), (0.0, 0.0, 0.0));
    }

    #[test]
    fn augmented_derivative_reads_selected_coordinate() {
        let p = ArnoldParams::default();
        let mut s = default_state();
        s.x = 0.0;
        let (.., dx_r, dy_r) = augmented_derivative(&s, &p, DsIndex::X, 1.0);
        assert!((dx_r - 1.0).abs() < TOL && dy_r.abs() < TOL);

        s.x = FRAC_PI_2;
        let (.., dx_r, dy_r) = augmented_derivative(&s, &p, DsIndex::X, 1.0);
        assert!(dx_r.abs() < TOL && (dy_r - 1.0).abs() < TOL);

        s.y = PI;
        let (.., dx_r, dy_r) = augmented_derivative(&s, &p, DsIndex::Y, 1.0);
        assert!((dx_r + 1.0).abs() < TOL && dy_r.abs() < TOL);
    }

    #[test]
    fn rk4_is_exact_on_a_constant_field() {
        let p = ArnoldParams { a: 0.0, b: 0.0, c: 0.0 };
        let s = AugmentedState::new(0.0, 0.0, 0.0, Point::new(0.0, 0.0));
        let next = rk4_step(&s, 0.1, &p, DsIndex::X, 1.0);
        assert!((next.pos.x - 0.1).abs() < 1e-15);
        assert!(next.pos.y.abs() < 1e-15);
        assert_eq!((next.x, next.y, next.z), (0.0, 0.0, 0.0));

        let s = AugmentedState::new(PI, 0.0, 0.0, Point::new(0.0, 0.0));
        let next = rk4_step(&s, 0.1, &p, DsIndex::X, 1.0);
        assert!((next.pos.x + 0.1).abs() < 1e-15);
    }

    #[test]
    fn rk4_matches_fine_step_oracle_after_one_step() {
        let p = ArnoldParams::default();
        let s = default_state();
        let coarse = rk4_step(&s, 0.1, &p, DsIndex::X, 1.0);
        let fine = fine_step_oracle(&s, 0.1, 1000, &p, DsIndex::X, 1.0);
        assert!((coarse.pos.x - fine.pos.x).abs() < 1e-6);
        assert!((coarse.pos.y - fine.pos.y).abs() < 1e-6);
    }

    #[test]
    fn rk4_one_step_error_shrinks_at_fifth_order() {
        let p = ArnoldParams::default();
        let s = default_state();
        let err = |dt: f64| {
            let coarse = rk4_step(&s, dt, &p, DsIndex::X, 1.0);
            let fine = fine_step_oracle(&s, dt, (dt / 1e-4).round() as usize, &p, DsIndex::X, 1.0);
            let d = [
                coarse.x - fine.x,
                coarse.y - fine.y,
                coarse.z - fine.z,
                coarse.pos.x - fine.pos.x,
                coarse.pos.y - fine.pos.y,
            ];
            d.iter().map(|v| v * v).sum::<f64>().sqrt()
        };
        let ratio = err(0.1) / err(0.05);
        assert!(
            (16.0..=64.0).contains(&ratio),
            "error ratio {ratio} not within a factor 2 of 2^5"
        );
    }

    #[test]
    fn adaptive_step_keeps_full_step_on_constant_field() {
        let p = ArnoldParams { a: 0.0, b: 0.0, c: 0.0 };
        let cfg = IntegratorConfig::default();
        let s = AugmentedState::new(0.0, 0.0, 0.0, Point::new(0.0, 0.0));
        let res = adaptive_step(&s, 0.1, &cfg, &p, DsIndex::X, 1.0).unwrap();
        assert!(!res.halved);
        assert_eq!(res.dt_next, 0.1);
        assert_eq!(res.dt_used, 0.1);
    }

    #[test]
    fn adaptive_step_halves_when_tolerance_is_unreachable() {
        let p = ArnoldParams::default();
        let cfg = IntegratorConfig {
            e_p: 0.0,
            ..IntegratorConfig::default()
        };
        let res = adaptive_step(&default_state(), 0.1, &cfg, &p, DsIndex::X, 1.0).unwrap();
        assert!(res.halved);
        assert_eq!(res.dt_next, 0.05);
        // Clamp at the floor.
        let res = adaptive_step(&default_state(), cfg.dt_min, &cfg, &p, DsIndex::X, 1.0).unwrap();
        assert_eq!(res.dt_next, cfg.dt_min);
    }

    #[test]
    fn adaptive_step_default_tolerance_keeps_dt_at_a_tenth() {
        let p = ArnoldParams::default();
        let cfg = IntegratorConfig::default();
        let s = default_state();
        // Direct discrepancy check against the same two estimates.
        let full = rk4_step(&s, 0.1, &p, DsIndex::X, 1.0);
        let half = rk4_step(&rk4_step(&s, 0.05, &p, DsIndex::X, 1.0), 0.05, &p, DsIndex::X, 1.0);
        assert!((full.pos.x - half.pos.x).abs() < cfg.e_p);
        assert!((full.pos.y - half.pos.y).abs() < cfg.e_p);
        let res = adaptive_step(&s, 0.1, &cfg, &p, DsIndex::X, 1.0).unwrap();
        assert!(!res.halved);
        assert_eq!(res.dt_next, 0.1);
    }

    #[test]
    fn logistic_map_examples() {
        assert!(rel_close(logistic_next(0.1, 4.0), 0.36, TOL));
        assert_eq!(logistic_next(0.0, 4.0), 0.0);
        assert!(rel_close(logistic_next(0.75, 4.0), 0.75, TOL));
    }

    #[test]
    fn logistic_heading_examples() {
        assert!(logistic_heading(0.5, HeadingSide::Minus).abs() < TOL);
        assert!(rel_close(logistic_heading(0.0, HeadingSide::Plus), FRAC_PI_2, TOL));
        assert!(rel_close(logistic_heading(0.5, HeadingSide::Plus), PI, TOL));
    }

    #[test]
    fn logistic_step_examples() {
        let p = logistic_step(Point::new(0.0, 0.0), 0.0, 1.0, 0.1);
        assert!((p.x - 0.1).abs() < TOL && p.y.abs() < TOL);
        let p = logistic_step(Point::new(0.0, 0.0), FRAC_PI_2, 1.0, 0.1);
        assert!(p.x.abs() < TOL && (p.y - 0.1).abs() < TOL);
        let p = logistic_step(Point::new(1.0, 1.0), PI, 1.0, 0.1);
        assert!((p.x - 0.9).abs() < TOL && (p.y - 1.0).abs() < TOL);
    }

    #[test]
    fn ds_index_cycles() {
        assert_eq!(DsIndex::X.next(), DsIndex::Y);
        assert_eq!(DsIndex::Y.next(), DsIndex::Z);
        assert_eq!(DsIndex::Z.next(), DsIndex::X);
        assert!(DsIndex::try_from(4u8).is_err());
    }

    #[test]
    fn fixed_point_detection() {
        assert!(LogisticState::new(0.75, 4.0).is_fixed_point());
        assert!(LogisticState::new(0.0, 4.0).is_fixed_point());
        assert!(!LogisticState::new(0.1, 4.0).is_fixed_point());
    }

    proptest! {
        #[test]
        fn logistic_orbit_stays_in_unit_interval(x0 in 1e-6..0.999_999f64) {
            let mut state = LogisticState::new(x0, 4.0);
            for _ in 0..10_000 {
                let x = state.advance();
                prop_assert!((0.0..=1.0).contains(&x));
            }
        }

        #[test]
        fn flow_derivatives_are_bounded(
            x in -50.0..50.0f64,
            y in -50.0..50.0f64,
            z in -50.0..50.0f64,
        ) {
            let p = ArnoldParams::default();
            let s = AugmentedState::new(x, y, z, Point::default());
            let (dx, dy, dz) = arnold_derivative(&s, &p);
            prop_assert!(dx.abs() <= p.a + p.c + 1e-12);
            prop_assert!(dy.abs() <= p.a + p.b + 1e-12);
            prop_assert!(dz.abs() <= p.b + p.c + 1e-12);
        }

        #[test]
        fn robot_speed_is_exactly_v(
            x in -10.0..10.0f64,
            y in -10.0..10.0f64,
            z in -10.0..10.0f64,
            v in 0.1..5.0f64,
        ) {
            let p = ArnoldParams::default();
            let s = AugmentedState::new(x, y, z, Point::default());
            for idx in [DsIndex::X, DsIndex::Y, DsIndex::Z] {
                let (.., dpx, dpy) = augmented_derivative(&s, &p, idx, v);
                prop_assert!((dpx.hypot(dpy) - v).abs() < 1e-12);
            }
        }

        #[test]
        fn chord_length_never_exceeds_arc_length(
            x in -3.0..3.0f64,
            y in -3.0..3.0f64,
            z in -3.0..3.0f64,
        ) {
            let p = ArnoldParams::default();
            let cfg = IntegratorConfig::default();
            let s = AugmentedState::new(x, y, z, Point::new(0.0, 0.0));
            let res = adaptive_step(&s, 0.1, &cfg, &p, DsIndex::Z, 1.0).unwrap();
            let chord = res.state.pos.distance(s.pos);
            let arc = 1.0 * res.dt_used;
            prop_assert!(chord <= arc + 1e-12);
            // Mild curvature: the chord stays within 1% of the arc.
            prop_assert!(chord >= 0.99 * arc);
        }
    }
}
