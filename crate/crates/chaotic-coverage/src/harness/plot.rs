//! Self-contained SVG rendering of a run: obstacles, boundary, trajectory,
//! and zone midpoints, layered in that order.

use crate::planner::TrajectorySample;
use crate::world::{WorldSpec, ZONE_SIDE};

const MARGIN: f64 = 2.0;

/// Render a trajectory over its world as a standalone SVG document.
pub fn render_svg(world: &WorldSpec, samples: &[TrajectorySample]) -> String {
    let w = world.width;
    let h = world.height;
    let view_w = w + 2.0 * MARGIN;
    let view_h = h + 2.0 * MARGIN;
    // The y axis points up in world coordinates and down in SVG.
    let flip = |y: f64| h - y;

    let mut svg = String::with_capacity(64 * samples.len().max(64));
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"800\" height=\"{}\">\n",
        -MARGIN,
        -MARGIN,
        view_w,
        view_h,
        (800.0 * view_h / view_w).round()
    ));
    svg.push_str("<rect x=\"-2\" y=\"-2\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Obstacles.
    for ob in &world.obstacles {
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#222\"/>\n",
            ob.min.x,
            flip(ob.max.y),
            ob.width(),
            ob.height()
        ));
    }

    // Boundary.
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.3\"/>\n"
    ));

    // Trajectory.
    if !samples.is_empty() {
        svg.push_str("<path d=\"");
        for (i, s) in samples.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            svg.push_str(&format!("{cmd}{:.2} {:.2} ", s.pos.x, flip(s.pos.y)));
        }
        svg.push_str("\" fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"0.08\"/>\n");
    }

    // Zone midpoints.
    let zw = w / ZONE_SIDE as f64;
    let zh = h / ZONE_SIDE as f64;
    for row in 0..ZONE_SIDE {
        for col in 0..ZONE_SIDE {
            let cx = (col as f64 + 0.5) * zw;
            let cy = (row as f64 + 0.5) * zh;
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"0.5\" fill=\"#c03030\"/>\n",
                cx,
                flip(cy)
            ));
        }
    }

    svg.push_str("</svg>\n");
    svg
}
