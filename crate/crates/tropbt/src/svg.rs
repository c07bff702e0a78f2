//! SVG pictures of a tropical quartic and its bitangent classes.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::bitangent::BitangentClass;
use crate::geometry::Point;
use crate::tropcurve::TropicalCurve;

#[derive(Debug, Error)]
pub enum SvgError {
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

const WIDTH: f64 = 800.0;
const DOT_RADIUS: f64 = 3.0;

type P = (f64, f64);

fn f(p: Point) -> P {
    (p.x.to_f64().unwrap_or(0.0), p.y.to_f64().unwrap_or(0.0))
}

/// Axis-aligned view box in curve coordinates.
#[derive(Clone, Copy, Debug)]
struct View {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    scale: f64,
}

impl View {
    fn fit(points: &[P]) -> View {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for &(x, y) in points {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        if points.is_empty() {
            (x0, y0, x1, y1) = (-1.0, -1.0, 1.0, 1.0);
        }
        let w = (x1 - x0).max(1.0);
        let h = (y1 - y0).max(1.0);
        let (mx, my) = (0.1 * w, 0.1 * h);
        let (x0, x1, y0, y1) = (x0 - mx, x1 + mx, y0 - my, y1 + my);
        View { x0, y0, x1, y1, scale: WIDTH / (x1 - x0) }
    }

    fn height(&self) -> f64 {
        (self.y1 - self.y0) * self.scale
    }

    fn px(&self, p: P) -> P {
        ((p.0 - self.x0) * self.scale, (self.y1 - p.1) * self.scale)
    }

    fn inside(&self, p: P) -> bool {
        p.0 >= self.x0 && p.0 <= self.x1 && p.1 >= self.y0 && p.1 <= self.y1
    }

    /// Liang-Barsky clip of `a + t (b - a)` for `t` in `[0, t_max]`.
    fn clip(&self, a: P, b: P, t_max: f64) -> Option<(P, P)> {
        let d = (b.0 - a.0, b.1 - a.1);
        let (mut lo, mut hi) = (0.0f64, t_max);
        for (p, q) in [
            (-d.0, a.0 - self.x0),
            (d.0, self.x1 - a.0),
            (-d.1, a.1 - self.y0),
            (d.1, self.y1 - a.1),
        ] {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    lo = lo.max(r);
                } else {
                    hi = hi.min(r);
                }
            }
        }
        (lo <= hi).then_some(((a.0 + lo * d.0, a.1 + lo * d.1), (a.0 + hi * d.0, a.1 + hi * d.1)))
    }

    /// Sutherland-Hodgman clip of a polygon to the view box.
    fn clip_polygon(&self, poly: &[P]) -> Vec<P> {
        type Edge = (fn(P, &View) -> bool, fn(P, P, &View) -> P);
        fn cut(a: P, b: P, t: f64) -> P {
            (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
        }
        let edges: [Edge; 4] = [
            (|p, v| p.0 >= v.x0, |a, b, v| cut(a, b, (v.x0 - a.0) / (b.0 - a.0))),
            (|p, v| p.0 <= v.x1, |a, b, v| cut(a, b, (v.x1 - a.0) / (b.0 - a.0))),
            (|p, v| p.1 >= v.y0, |a, b, v| cut(a, b, (v.y0 - a.1) / (b.1 - a.1))),
            (|p, v| p.1 <= v.y1, |a, b, v| cut(a, b, (v.y1 - a.1) / (b.1 - a.1))),
        ];
        let mut out = poly.to_vec();
        for (keep, meet) in edges {
            let input = std::mem::take(&mut out);
            for i in 0..input.len() {
                let (a, b) = (input[i], input[(i + 1) % input.len()]);
                match (keep(a, self), keep(b, self)) {
                    (true, true) => out.push(b),
                    (true, false) => out.push(meet(a, b, self)),
                    (false, true) => {
                        out.push(meet(a, b, self));
                        out.push(b);
                    }
                    (false, false) => {}
                }
            }
        }
        out
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn line(out: &mut String, view: &View, a: P, b: P, class: &str, color: &str, width: f64) {
    let (a, b) = (view.px(a), view.px(b));
    let _ = writeln!(
        out,
        r#"  <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{}"/>"#,
        num(a.0),
        num(a.1),
        num(b.0),
        num(b.1),
        num(width)
    );
}

/// Renders the curve in black and, if given, the classes in red with one dot per
/// representative, of radius proportional to its multiplicity.
pub fn render_svg(curve: &TropicalCurve, classes: Option<&[BitangentClass]>) -> String {
    let mut pts: Vec<P> = curve.vertices.iter().map(|v| f(v.point)).collect();
    for b in classes.unwrap_or(&[]) {
        for c in b.cells.iter().filter(|c| !c.unbounded) {
            pts.extend(c.points.iter().map(|&p| f(p)));
        }
        pts.extend(b.representatives.iter().map(|r| f(r.line.vertex)));
    }
    let view = View::fit(&pts);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(WIDTH),
        num(view.height()),
        num(WIDTH),
        num(view.height())
    );
    let _ = writeln!(out, r#" <g class="curve">"#);
    for e in &curve.edges {
        let (a, b) = (f(curve.vertices[e.ends[0]].point), f(curve.vertices[e.ends[1]].point));
        line(&mut out, &view, a, b, "edge", "black", e.weight as f64);
    }
    let reach = 2.0 * ((view.x1 - view.x0) + (view.y1 - view.y0));
    for r in &curve.rays {
        let a = f(curve.vertices[r.base].point);
        let b = (a.0 + r.direction.0 as f64, a.1 + r.direction.1 as f64);
        if let Some((a, b)) = view.clip(a, b, reach) {
            line(&mut out, &view, a, b, "ray", "black", r.weight as f64);
        }
    }
    let _ = writeln!(out, " </g>");
    for (k, b) in classes.unwrap_or(&[]).iter().enumerate() {
        let _ = writeln!(out, r#" <g class="bitangent-class" id="class-{k}" data-shape="{}">"#, b.shape);
        for c in b.cells.iter().filter(|c| c.dim == 2) {
            let poly: Vec<P> = c.points.iter().map(|&p| f(p)).collect();
            let poly = view.clip_polygon(&poly);
            if poly.len() < 3 {
                continue;
            }
            let coords: Vec<String> = poly
                .iter()
                .map(|&p| {
                    let q = view.px(p);
                    format!("{},{}", num(q.0), num(q.1))
                })
                .collect();
            let _ = writeln!(
                out,
                r#"  <polygon points="{}" fill="red" fill-opacity="0.3" stroke="red" stroke-width="1.00"/>"#,
                coords.join(" ")
            );
        }
        for c in b.cells.iter().filter(|c| c.dim == 1) {
            let (a, e) = (f(c.points[0]), f(c.points[1]));
            if let Some((a, e)) = view.clip(a, e, 1.0) {
                line(&mut out, &view, a, e, "class-edge", "red", 2.0);
            }
        }
        for c in b.cells.iter().filter(|c| c.dim == 0) {
            let p = f(c.points[0]);
            if view.inside(p) {
                let q = view.px(p);
                let _ = writeln!(out, r#"  <circle cx="{}" cy="{}" r="1.50" fill="red"/>"#, num(q.0), num(q.1));
            }
        }
        for r in &b.representatives {
            let q = view.px(f(r.line.vertex));
            let (radius, fill) = match r.multiplicity {
                Some(m) => (DOT_RADIUS * m as f64, "red"),
                None => (DOT_RADIUS, "none"),
            };
            let _ = writeln!(
                out,
                r#"  <circle class="representative" cx="{}" cy="{}" r="{}" fill="{fill}" stroke="red"/>"#,
                num(q.0),
                num(q.1),
                num(radius)
            );
        }
        let _ = writeln!(out, " </g>");
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_svg(curve: &TropicalCurve, classes: Option<&[BitangentClass]>, path: &Path) -> Result<(), SvgError> {
    std::fs::write(path, render_svg(curve, classes))
        .map_err(|source| SvgError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitangent::bitangent_locus;
    use crate::quartic::{newton_subdivision, running_example_valuations, QuarticInput};
    use crate::tropcurve::build_curve;

    fn running() -> (TropicalCurve, Vec<BitangentClass>) {
        let q = QuarticInput::from_valuations(&running_example_valuations()).unwrap();
        let s = newton_subdivision(&q.heights());
        let c = build_curve(&s, 4);
        let b = bitangent_locus(&c, &s).unwrap();
        (c, b)
    }

    #[test]
    fn running_example_draws_seven_red_groups() {
        let (c, b) = running();
        let svg = render_svg(&c, Some(&b));
        assert_eq!(svg.matches(r#"class="bitangent-class""#).count(), 7);
        assert_eq!(svg, render_svg(&c, Some(&b)));
    }

    #[test]
    fn curve_alone_has_twelve_rays() {
        let (c, _) = running();
        let svg = render_svg(&c, None);
        assert_eq!(svg.matches(r#"class="ray""#).count(), 12);
        assert!(!svg.contains("red"));
    }

    #[test]
    fn empty_path_is_an_io_error() {
        let (c, _) = running();
        assert!(matches!(emit_svg(&c, None, Path::new("")), Err(SvgError::Io { .. })));
    }
}
