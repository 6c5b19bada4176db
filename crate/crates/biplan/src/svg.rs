//! Deterministic SVG rendering of workspaces, free space and plans.
//! Coordinates are printed at fixed decimal precision for display only;
//! nothing is ever parsed back.

use crate::freespace::{Config, FreeSpace, Workspace};
use crate::geometry::{AxisSegment, Point, Rect};
use crate::plan::{DecoupledPlan, Robot};
use crate::region::Region;
use crate::scalar::Scalar;

const SCALE: f64 = 40.0;

struct Frame {
    min_x: f64,
    max_y: f64,
}

impl Frame {
    fn x(&self, v: &Scalar) -> f64 {
        (v.to_f64_lossy() - self.min_x) * SCALE
    }

    // SVG y grows downward; flip around the top of the frame.
    fn y(&self, v: &Scalar) -> f64 {
        (self.max_y - v.to_f64_lossy()) * SCALE
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

fn rect_el(out: &mut String, frame: &Frame, r: &Rect, class: &str, fill: &str) {
    // Degenerate rects are drawn as hairlines so strips stay visible.
    let x = frame.x(&r.x_lo);
    let y = frame.y(&r.y_hi);
    let w = (r.x_hi.to_f64_lossy() - r.x_lo.to_f64_lossy()) * SCALE;
    let h = (r.y_hi.to_f64_lossy() - r.y_lo.to_f64_lossy()) * SCALE;
    let (w, h) = (w.max(0.5), h.max(0.5));
    out.push_str(&format!(
        "  <rect class=\"{class}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"/>\n",
        fmt(x),
        fmt(y),
        fmt(w),
        fmt(h)
    ));
}

fn polyline_el(out: &mut String, frame: &Frame, pts: &[Point], class: &str, stroke: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|p| format!("{},{}", fmt(frame.x(&p.x)), fmt(frame.y(&p.y))))
        .collect();
    out.push_str(&format!(
        "  <polyline class=\"{class}\" points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"2\"/>\n",
        coords.join(" ")
    ));
}

/// Renders the workspace (obstacles dark, free space light), the optional
/// plan's robot paths in red/blue with swept unit squares at the given
/// sample configurations, and green gate markers when given.
pub fn render_svg(
    w: &Workspace,
    f: &FreeSpace,
    plan: Option<&DecoupledPlan>,
    sample_configs: &[Config],
    gates: &[AxisSegment],
) -> String {
    let bbox = w.polygon().bounding_box();
    let margin = Scalar::one();
    let view = Rect::new(
        &bbox.x_lo - &margin,
        &bbox.x_hi + &margin,
        &bbox.y_lo - &margin,
        &bbox.y_hi + &margin,
    );
    let frame = Frame {
        min_x: view.x_lo.to_f64_lossy(),
        max_y: view.y_hi.to_f64_lossy(),
    };
    let width = (view.x_hi.to_f64_lossy() - view.x_lo.to_f64_lossy()) * SCALE;
    let height = (view.y_hi.to_f64_lossy() - view.y_lo.to_f64_lossy()) * SCALE;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        fmt(width),
        fmt(height),
        fmt(width),
        fmt(height)
    ));
    out.push_str(&format!(
        "  <rect class=\"background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        fmt(width),
        fmt(height)
    ));
    // Obstacles: everything in the view that is not workspace.
    let blocked = Region::from_rect(&view).difference_with(&w.region());
    for r in blocked.to_rects() {
        rect_el(&mut out, &frame, &r, "obstacle", "#3a3a3a");
    }
    // Free space on top of the workspace interior.
    for r in f.region().to_rects() {
        rect_el(&mut out, &frame, &r, "free", "#dcefdc");
    }
    for g in gates {
        let pts = [g.a.clone(), g.b.clone()];
        polyline_el(&mut out, &frame, &pts, "gate", "#55c055");
    }
    for (i, c) in sample_configs.iter().enumerate() {
        for (p, color) in [(&c.a, "#d0606055"), (&c.b, "#6060d055")] {
            let half = Scalar::half();
            let sq = Rect::new(&p.x - &half, &p.x + &half, &p.y - &half, &p.y + &half);
            rect_el(&mut out, &frame, &sq, &format!("swept swept-{i}"), color);
        }
    }
    if let Some(plan) = plan {
        let mut a_path = vec![plan.start.a.clone()];
        let mut b_path = vec![plan.start.b.clone()];
        for m in &plan.moves {
            let target = match m.robot {
                Robot::A => &mut a_path,
                Robot::B => &mut b_path,
            };
            target.extend(m.polyline.iter().skip(1).cloned());
        }
        polyline_el(&mut out, &frame, &a_path, "path-a", "#cc2222");
        polyline_el(&mut out, &frame, &b_path, "path-b", "#2222cc");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freespace::compute_free_space;
    use crate::plan::Move;

    fn p(x: i64, y: i64) -> Point {
        Point::new(Scalar::from_int(x), Scalar::from_int(y))
    }

    #[test]
    fn workspace_only_render() {
        let w = Workspace::rectangle(&Rect::of_ints(0, 4, 0, 3));
        let f = compute_free_space(&w).unwrap();
        let svg = render_svg(&w, &f, None, &[], &[]);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("class=\"free\"").count(), 1);
        assert!(svg.matches("class=\"obstacle\"").count() >= 1);
        assert_eq!(svg.matches("<polyline").count(), 0);
    }

    #[test]
    fn plan_render_has_two_paths() {
        let w = Workspace::rectangle(&Rect::of_ints(0, 5, 0, 4));
        let f = compute_free_space(&w).unwrap();
        let plan = DecoupledPlan {
            start: Config::new(p(1, 1), p(4, 1)),
            moves: vec![
                Move {
                    robot: Robot::A,
                    polyline: vec![p(1, 1), p(1, 3), p(4, 3)],
                },
                Move {
                    robot: Robot::B,
                    polyline: vec![p(4, 1), p(1, 1), p(1, 3)],
                },
            ],
        };
        let svg = render_svg(&w, &f, Some(&plan), &[plan.start.clone()], &[]);
        assert_eq!(svg.matches("class=\"path-a\"").count(), 1);
        assert_eq!(svg.matches("class=\"path-b\"").count(), 1);
        assert_eq!(svg.matches("class=\"swept").count(), 2);
    }

    #[test]
    fn deterministic_output() {
        let w = Workspace::rectangle(&Rect::of_ints(0, 4, 0, 3));
        let f = compute_free_space(&w).unwrap();
        assert_eq!(
            render_svg(&w, &f, None, &[], &[]),
            render_svg(&w, &f, None, &[], &[])
        );
    }
}
