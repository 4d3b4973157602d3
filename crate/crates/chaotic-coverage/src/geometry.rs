//! Planar points and axis-aligned rectangles shared by every module.

use serde::{Deserialize, Serialize};

/// A position or displacement in the world plane, in metres.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 2]", from = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Self { x: v[0], y: v[1] }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Axis-aligned rectangle given by its min and max corners, in metres.
///
/// Serialized as `[[xmin, ymin], [xmax, ymax]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "[[f64; 2]; 2]", from = "[[f64; 2]; 2]")]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub const fn new(min: Point, max: Point) -> Self {
        Self { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    /// True when the point lies strictly inside the rectangle.
    pub fn contains_interior(&self, p: Point) -> bool {
        p.x > self.min.x && p.x < self.max.x && p.y > self.min.y && p.y < self.max.y
    }

    /// True when the point lies inside or on the rectangle's edge.
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Euclidean distance from the point to the rectangle; zero inside or on it.
    pub fn distance_to(&self, p: Point) -> f64 {
        let dx = (self.min.x - p.x).max(0.0).max(p.x - self.max.x);
        let dy = (self.min.y - p.y).max(0.0).max(p.y - self.max.y);
        dx.hypot(dy)
    }
}

impl From<[[f64; 2]; 2]> for Rect {
    fn from(v: [[f64; 2]; 2]) -> Self {
        Self {
            min: v[0].into(),
            max: v[1].into(),
        }
    }
}

impl From<Rect> for [[f64; 2]; 2] {
    fn from(r: Rect) -> Self {
        [r.min.into(), r.max.into()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_distance_is_zero_inside_and_positive_outside() {
        let r = Rect::new(Point::new(10.0, 10.0), Point::new(20.0, 20.0));
        assert_eq!(r.distance_to(Point::new(15.0, 15.0)), 0.0);
        assert_eq!(r.distance_to(Point::new(9.0, 15.0)), 1.0);
        assert!((r.distance_to(Point::new(9.0, 9.0)) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn interior_containment_is_strict() {
        let r = Rect::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0));
        assert!(!r.contains_interior(Point::new(0.0, 0.5)));
        assert!(r.contains(Point::new(0.0, 0.5)));
        assert!(r.contains_interior(Point::new(0.5, 0.5)));
    }
}
