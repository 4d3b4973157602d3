//! Environment geometry, the cell-level visit ledger, and map zoning support.
//!
//! The map is a rectangle with axis-aligned rectangular obstacles. Coverage
//! is tracked on a grid whose cell side equals the sensing range, so visiting
//! a point marks its cell. A fixed 4x4 decomposition into sixteen zones backs
//! the zoning technique: each zone knows its midpoint, its distance from the
//! robot, and its coverage density.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};

/// Zones per side of the fixed decomposition; the map always splits 4x4.
pub const ZONE_SIDE: usize = 4;
/// Total zone count.
pub const ZONE_COUNT: usize = ZONE_SIDE * ZONE_SIDE;

/// Map geometry and the robot's start pose.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldSpec {
    /// Map width, metres.
    pub width: f64,
    /// Map height, metres.
    pub height: f64,
    /// Sensing range; also the coverage cell side, metres.
    pub sensing_range: f64,
    /// Robot start position, metres.
    pub start: Point,
    /// Axis-aligned rectangular obstacles.
    #[serde(default)]
    pub obstacles: Vec<Rect>,
}

impl WorldSpec {
    /// An obstacle-free map with the robot starting at `start`.
    pub fn open(width: f64, height: f64, sensing_range: f64, start: Point) -> Self {
        Self {
            width,
            height,
            sensing_range,
            start,
            obstacles: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::validation("world.width", "must be positive and finite"));
        }
        if !(self.height > 0.0 && self.height.is_finite()) {
            return Err(Error::validation("world.height", "must be positive and finite"));
        }
        if !(self.sensing_range > 0.0 && self.sensing_range.is_finite()) {
            return Err(Error::validation(
                "world.sensing_range",
                "must be positive and finite",
            ));
        }
        if !self.start.is_finite() || !self.contains(self.start) {
            return Err(Error::validation("world.start", "must lie inside the map"));
        }
        for (i, ob) in self.obstacles.iter().enumerate() {
            let field = format!("world.obstacles[{i}]");
            if !(ob.min.is_finite() && ob.max.is_finite()) {
                return Err(Error::validation(field, "corners must be finite"));
            }
            if !(ob.min.x < ob.max.x && ob.min.y < ob.max.y) {
                return Err(Error::validation(field, "min corner must be below max corner"));
            }
            if ob.min.x < 0.0 || ob.min.y < 0.0 || ob.max.x > self.width || ob.max.y > self.height
            {
                return Err(Error::validation(field, "must lie within the map bounds"));
            }
            if ob.contains_interior(self.start) {
                return Err(Error::validation(
                    "world.start",
                    format!("must not lie inside obstacle {i}"),
                ));
            }
        }
        Ok(())
    }

    /// True when the point lies inside the map, boundary included.
    pub fn contains(&self, p: Point) -> bool {
        p.x >= 0.0 && p.x <= self.width && p.y >= 0.0 && p.y <= self.height
    }

    pub fn is_outside(&self, p: Point) -> bool {
        !self.contains(p)
    }

    /// Distance from the point to the nearest wall; negative outside.
    pub fn wall_clearance(&self, p: Point) -> f64 {
        p.x.min(self.width - p.x).min(p.y).min(self.height - p.y)
    }

    /// The first obstacle whose interior contains the point.
    pub fn obstacle_containing(&self, p: Point) -> Option<&Rect> {
        self.obstacles.iter().find(|ob| ob.contains_interior(p))
    }

    /// The nearest obstacle the point is inside of or within `f_o` of.
    pub fn obstacle_hit(&self, p: Point, f_o: f64) -> Option<&Rect> {
        self.obstacles
            .iter()
            .map(|ob| (ob, ob.distance_to(p)))
            .filter(|(_, d)| *d < f_o)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(ob, _)| ob)
    }

    /// Classify a point against walls and obstacles with clearance `f_o`.
    ///
    /// Priority: outside-boundary, inside-obstacle, near-boundary,
    /// near-obstacle, free.
    pub fn classify(&self, p: Point, f_o: f64) -> PointClass {
        if self.is_outside(p) {
            return PointClass::OutsideBoundary;
        }
        if self.obstacle_containing(p).is_some() {
            return PointClass::InsideObstacle;
        }
        if self.wall_clearance(p) < f_o {
            return PointClass::NearBoundary;
        }
        if self
            .obstacles
            .iter()
            .any(|ob| ob.distance_to(p) < f_o)
        {
            return PointClass::NearObstacle;
        }
        PointClass::Free
    }
}

/// Where a point sits relative to walls and obstacles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Free,
    OutsideBoundary,
    NearBoundary,
    InsideObstacle,
    NearObstacle,
}

/// Result of marking one trajectory point on the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VisitOutcome {
    /// First visit of a free cell.
    New,
    /// The free cell had been visited before.
    Repeat,
    /// The point fell in an obstacle cell; coverage unchanged.
    OutOfFreeSpace,
}

/// Cell-resolution visit ledger over the free space.
///
/// A cell counts as an obstacle cell when an obstacle covers its center;
/// coverage rate is visited free cells over total free cells and never
/// decreases. Single-writer: one grid per simulation run.
#[derive(Clone, Debug)]
pub struct CoverageGrid {
    cell_size: f64,
    cols: usize,
    rows: usize,
    width: f64,
    height: f64,
    visits: Vec<u32>,
    obstacle: Vec<bool>,
    zone_of: Vec<u8>,
    visited_free: u64,
    total_free: u64,
    visited_per_zone: [u64; ZONE_COUNT],
    free_per_zone: [u64; ZONE_COUNT],
}

impl CoverageGrid {
    pub fn new(world: &WorldSpec) -> Self {
        let cell_size = world.sensing_range;
        let cols = (world.width / cell_size).ceil() as usize;
        let rows = (world.height / cell_size).ceil() as usize;
        let mut grid = Self {
            cell_size,
            cols,
            rows,
            width: world.width,
            height: world.height,
            visits: vec![0; cols * rows],
            obstacle: vec![false; cols * rows],
            zone_of: vec![0; cols * rows],
            visited_free: 0,
            total_free: 0,
            visited_per_zone: [0; ZONE_COUNT],
            free_per_zone: [0; ZONE_COUNT],
        };
        for row in 0..rows {
            for col in 0..cols {
                let idx = row * cols + col;
                let center = Point::new(
                    (col as f64 * cell_size + world.width.min((col + 1) as f64 * cell_size)) / 2.0,
                    (row as f64 * cell_size + world.height.min((row + 1) as f64 * cell_size)) / 2.0,
                );
                let zone = zone_of_point(world.width, world.height, center);
                grid.zone_of[idx] = zone as u8;
                let blocked = world.obstacles.iter().any(|ob| ob.contains(center));
                grid.obstacle[idx] = blocked;
                if !blocked {
                    grid.total_free += 1;
                    grid.free_per_zone[zone] += 1;
                }
            }
        }
        grid
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn total_free(&self) -> u64 {
        self.total_free
    }

    pub fn visited_free(&self) -> u64 {
        self.visited_free
    }

    /// Flat index of the cell containing `p`, or None outside the map.
    pub fn cell_id(&self, p: Point) -> Option<usize> {
        if p.x < 0.0 || p.x > self.width || p.y < 0.0 || p.y > self.height {
            return None;
        }
        let col = ((p.x / self.cell_size) as usize).min(self.cols - 1);
        let row = ((p.y / self.cell_size) as usize).min(self.rows - 1);
        Some(row * self.cols + col)
    }

    /// Mark the cell containing `p` as visited.
    pub fn mark_visit(&mut self, p: Point) -> Result<VisitOutcome> {
        let idx = self
            .cell_id(p)
            .ok_or(Error::OutOfBounds { point: p })?;
        self.visits[idx] += 1;
        if self.obstacle[idx] {
            return Ok(VisitOutcome::OutOfFreeSpace);
        }
        if self.visits[idx] == 1 {
            self.visited_free += 1;
            self.visited_per_zone[self.zone_of[idx] as usize] += 1;
            Ok(VisitOutcome::New)
        } else {
            Ok(VisitOutcome::Repeat)
        }
    }

    /// Fraction of free cells visited at least once.
    pub fn coverage_rate(&self) -> f64 {
        if self.total_free == 0 {
            return 1.0;
        }
        self.visited_free as f64 / self.total_free as f64
    }

    pub fn zone_free_cells(&self, zone: usize) -> u64 {
        self.free_per_zone[zone]
    }

    pub fn zone_visited_cells(&self, zone: usize) -> u64 {
        self.visited_per_zone[zone]
    }

    /// Visited free cells over free cells within a zone; 1 for a zone with
    /// no free cells, so it never looks attractive to density-first zoning.
    pub fn zone_density(&self, zone: usize) -> f64 {
        if self.free_per_zone[zone] == 0 {
            return 1.0;
        }
        self.visited_per_zone[zone] as f64 / self.free_per_zone[zone] as f64
    }
}

/// Zone of a point under the fixed 4x4 decomposition.
pub fn zone_of_point(width: f64, height: f64, p: Point) -> usize {
    let col = ((p.x / (width / ZONE_SIDE as f64)) as usize).min(ZONE_SIDE - 1);
    let row = ((p.y / (height / ZONE_SIDE as f64)) as usize).min(ZONE_SIDE - 1);
    row * ZONE_SIDE + col
}

/// One row of the zone priority list.
#[derive(Clone, Debug)]
pub struct ZoneEntry {
    /// Zone id, row-major from the lower-left corner.
    pub id: usize,
    pub bounds: Rect,
    /// Zone midpoint: the transit target.
    pub midpoint: Point,
    /// Euclidean distance from the robot to the midpoint at list-build time.
    pub distance: f64,
    /// Coverage density of the zone at list-build time.
    pub density: f64,
}

/// The zone priority list, with the robot's own zone remembered so that
/// selection can exclude it.
#[derive(Clone, Debug)]
pub struct ZoneList {
    pub entries: Vec<ZoneEntry>,
    pub robot_zone: usize,
}

impl ZoneList {
    /// Drop a zone the robot failed to reach.
    pub fn remove(&mut self, id: usize) {
        self.entries.retain(|e| e.id != id);
    }

    /// Selectable entries: everything except the robot's current zone.
    pub fn candidates(&self) -> impl Iterator<Item = &ZoneEntry> {
        self.entries.iter().filter(move |e| e.id != self.robot_zone)
    }

    pub fn is_exhausted(&self) -> bool {
        self.candidates().next().is_none()
    }
}

/// Build the full sixteen-entry priority list from the robot's position.
pub fn build_zone_list(grid: &CoverageGrid, width: f64, height: f64, robot: Point) -> ZoneList {
    let zw = width / ZONE_SIDE as f64;
    let zh = height / ZONE_SIDE as f64;
    let entries = (0..ZONE_COUNT)
        .map(|id| {
            let col = id % ZONE_SIDE;
            let row = id / ZONE_SIDE;
            let min = Point::new(col as f64 * zw, row as f64 * zh);
            let max = Point::new(min.x + zw, min.y + zh);
            let midpoint = Point::new(min.x + zw / 2.0, min.y + zh / 2.0);
            ZoneEntry {
                id,
                bounds: Rect::new(min, max),
                midpoint,
                distance: robot.distance(midpoint),
                density: grid.zone_density(id),
            }
        })
        .collect();
    ZoneList {
        entries,
        robot_zone: zone_of_point(width, height, robot),
    }
}

/// How the next zone is picked from the priority list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZoneSelectMode {
    /// Least distance first; ties broken by least density, then lowest id.
    DistanceFirst,
    /// Least density first; ties broken by least distance, then lowest id.
    DensityFirst,
}

/// Pick the best zone from the list, excluding the robot's current zone.
pub fn select_zone(list: &ZoneList, mode: ZoneSelectMode) -> Result<&ZoneEntry> {
    let key = |e: &ZoneEntry| match mode {
        ZoneSelectMode::DistanceFirst => (e.distance, e.density, e.id),
        ZoneSelectMode::DensityFirst => (e.density, e.distance, e.id),
    };
    list.candidates()
        .min_by(|a, b| {
            let (a0, a1, a2) = key(a);
            let (b0, b1, b2) = key(b);
            a0.total_cmp(&b0).then(a1.total_cmp(&b1)).then(a2.cmp(&b2))
        })
        .ok_or(Error::EmptyZoneList)
}
