//! Error type shared across the simulator and its I/O layer.

use crate::geometry::Point;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Integration produced NaN or infinity; the run cannot continue.
    #[error("non-finite state at t = {t} s")]
    NonFiniteState { t: f64 },

    /// A transit path contains NaN or infinite coordinates.
    #[error("transit path contains non-finite points")]
    NonFinitePath,

    /// The transit map sits on a fixed point and cannot produce a chaotic path.
    #[error("logistic state x = {x} is a fixed point; transit paths would degenerate")]
    DegeneratePath { x: f64 },

    /// Mirroring failed to bring a point back inside the map.
    #[error("mirrored point ({}, {}) is still outside the map", point.x, point.y)]
    StillOutside { point: Point },

    /// A scaled trajectory point left the map.
    #[error("scaled point ({}, {}) is outside the map at t = {t} s", point.x, point.y)]
    ScaledOutOfBounds { point: Point, t: f64 },

    /// A point handed to the coverage grid lies outside the map.
    #[error("point ({}, {}) is outside the map", point.x, point.y)]
    OutOfBounds { point: Point },

    /// Zone selection was asked to pick from an empty candidate list.
    #[error("zone priority list has no candidates")]
    EmptyZoneList,

    /// The reference planner only handles obstacle-free maps.
    #[error("baseline planner requires an obstacle-free map ({count} obstacles present)")]
    HasObstacles { count: usize },

    /// Performance ratio is undefined for a zero baseline time.
    #[error("baseline time is zero; performance ratio undefined")]
    ZeroBaseline,

    /// Safety valve: the coverage target was not reached in bounded simulated time.
    #[error("no progress: {limit} simulated seconds elapsed before reaching the coverage target")]
    NoProgress { limit: f64 },

    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code for the CLI: 1 for input problems, 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::Parse(_) => 1,
            _ => 2,
        }
    }
}
