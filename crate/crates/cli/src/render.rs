//! SVG rendering: one outlined rectangle per cell, a door tick at each door
//! midpoint, and optionally the dashed shortest door-to-door path of every
//! nonzero flow.

use ollp_core::distance::{all_pairs_shortest, build_adjacency, door_index};
use ollp_core::geometry::Point;
use ollp_core::{Instance, Layout};

fn fmt(v: f64) -> String {
    format!("{:.4}", v)
        .trim_end_matches('0')
        .trim_end_matches('.')
        .to_string()
}

/// Build the SVG document. The view box is the layout bounding box plus a 5%
/// margin per axis; the y axis is flipped so the drawing matches the layout's
/// mathematical coordinates.
pub fn render_svg(instance: &Instance, layout: &Layout, buffer: f64, show_paths: bool) -> String {
    let bbox = layout.bounding_box().expect("non-empty layout");
    let width = bbox.width().max(1e-9);
    let height = bbox.height().max(1e-9);
    let margin_x = 0.05 * width;
    let margin_y = 0.05 * height;
    let vb_x = bbox.min_corner.x - margin_x;
    let vb_y = -(bbox.max_corner.y + margin_y);
    let vb_w = width + 2.0 * margin_x;
    let vb_h = height + 2.0 * margin_y;
    let stroke = 0.004 * vb_w.max(vb_h);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fmt(vb_x),
        fmt(vb_y),
        fmt(vb_w),
        fmt(vb_h)
    ));
    svg.push_str(&format!(
        "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\">\n",
        fmt(stroke)
    ));

    for cell in 0..layout.len() {
        let rect = layout.rect(cell);
        svg.push_str(&format!(
            "<rect class=\"cell\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n",
            fmt(rect.min_corner.x),
            fmt(rect.min_corner.y),
            fmt(rect.width()),
            fmt(rect.height())
        ));
    }

    for cell in 0..layout.len() {
        let nodes = layout.nodes(cell);
        let rect = layout.rect(cell);
        let door = nodes.door;
        // Tick pointing inward from the door midpoint.
        let tick = 0.15 * rect.width().min(rect.height());
        let center = layout.placements[cell].center();
        let (dx, dy) = inward_unit(&door, &center);
        svg.push_str(&format!(
            "<line class=\"door\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            fmt(door.x),
            fmt(door.y),
            fmt(door.x + dx * tick),
            fmt(door.y + dy * tick)
        ));
    }

    if show_paths {
        let graph = build_adjacency(layout, buffer);
        let paths = all_pairs_shortest(&graph);
        for i in 0..layout.len() {
            for j in 0..layout.len() {
                if instance.flows[i][j] == 0.0 {
                    continue;
                }
                if let Some(route) = paths.path(door_index(i), door_index(j)) {
                    let points: Vec<String> = route
                        .iter()
                        .map(|&node| {
                            let p = graph.positions[node];
                            format!("{},{}", fmt(p.x), fmt(p.y))
                        })
                        .collect();
                    svg.push_str(&format!(
                        "<polyline class=\"flow\" stroke-dasharray=\"{} {}\" points=\"{}\"/>\n",
                        fmt(2.0 * stroke),
                        fmt(2.0 * stroke),
                        points.join(" ")
                    ));
                }
            }
        }
    }

    svg.push_str("</g>\n</svg>\n");
    svg
}

fn inward_unit(door: &Point, center: &Point) -> (f64, f64) {
    let dx = center.x - door.x;
    let dy = center.y - door.y;
    let len = (dx * dx + dy * dy).sqrt();
    if len == 0.0 {
        (0.0, 0.0)
    } else {
        (dx / len, dy / len)
    }
}
