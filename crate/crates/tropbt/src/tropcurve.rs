//! Tropical plane curves dual to regular subdivisions, and their intersections
//! with tropical lines.
//!
//! The line `Λ` with vertex `v` is the corner locus of `max(y, v_y, x + v_y - v_x)`.
//! Its three rays point in the directions `(-1,0)`, `(0,-1)` and `(1,1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::geometry::{cross, param_along, primitive, primitive_of, Dir, Piece, Point};
use crate::quartic::{convex_hull, double_area, Lattice, RegularSubdivision};
use crate::residue::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("both perturbation directions are degenerate at line vertex {0}")]
    DegeneratePerturbation(Point),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveVertex {
    pub point: Point,
    /// Corners of the dual face, counter-clockwise.
    pub dual: Vec<Lattice>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveEdge {
    pub ends: [usize; 2],
    /// Primitive direction from `ends[0]` to `ends[1]`.
    pub direction: Dir,
    pub weight: i64,
    pub dual: [Lattice; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRay {
    pub base: usize,
    pub direction: Dir,
    pub weight: i64,
    pub dual: [Lattice; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCurve {
    pub degree: u8,
    pub heights: BTreeMap<Lattice, Rational>,
    pub vertices: Vec<CurveVertex>,
    pub edges: Vec<CurveEdge>,
    pub rays: Vec<CurveRay>,
}

/// Solves `h(p0) + p0.X = h(p1) + p1.X = h(p2) + p2.X`.
fn face_vertex(h: &BTreeMap<Lattice, Rational>, face: &[Lattice]) -> Point {
    let (p0, p1, p2) = (face[0], face[1], face[2]);
    let a = (p1.0 - p0.0, p1.1 - p0.1);
    let b = (p2.0 - p0.0, p2.1 - p0.1);
    let ra = h[&p0] - h[&p1];
    let rb = h[&p0] - h[&p2];
    let det = Rational::from((a.0 * b.1 - a.1 * b.0) as i128);
    let x = (ra * Rational::from(b.1 as i128) - rb * Rational::from(a.1 as i128)) / det;
    let y = (rb * Rational::from(a.0 as i128) - ra * Rational::from(b.0 as i128)) / det;
    Point::new(x, y)
}

/// Builds the tropical curve dual to `s`. Panics if balancing fails, which
/// would indicate a malformed subdivision.
pub fn build_curve(s: &RegularSubdivision, degree: u8) -> TropicalCurve {
    let vertices: Vec<CurveVertex> =
        s.faces.iter().map(|f| CurveVertex { point: face_vertex(&s.heights, f), dual: f.clone() }).collect();
    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for e in s.edges() {
        let [a, b] = e.ends;
        let (_, weight) = primitive((b.0 - a.0, b.1 - a.1));
        if e.is_interior() {
            let [f0, f1] = e.faces;
            let direction = primitive_of(vertices[f1].point - vertices[f0].point);
            assert_eq!(direction.0 * (b.0 - a.0) + direction.1 * (b.1 - a.1), 0, "edge not orthogonal to its dual");
            edges.push(CurveEdge { ends: [f0, f1], direction, weight, dual: e.ends });
        } else {
            let f = e.faces[0];
            let face = &s.faces[f];
            let n = face.len();
            let k = (0..n).find(|&k| {
                let (p, q) = (face[k], face[(k + 1) % n]);
                (p == a && q == b) || (p == b && q == a)
            });
            let k = k.expect("boundary edge belongs to its face");
            let (p, q) = (face[k], face[(k + 1) % n]);
            let (direction, _) = primitive((q.1 - p.1, p.0 - q.0));
            rays.push(CurveRay { base: f, direction, weight, dual: e.ends });
        }
    }
    let curve = TropicalCurve { degree, heights: s.heights.clone(), vertices, edges, rays };
    for v in 0..curve.vertices.len() {
        let (mut sx, mut sy) = (0, 0);
        for (d, w) in curve.outgoing(v) {
            sx += d.0 * w;
            sy += d.1 * w;
        }
        assert_eq!((sx, sy), (0, 0), "balancing fails at vertex {v}");
    }
    curve
}

impl TropicalCurve {
    /// Weighted outgoing primitive directions at a vertex.
    pub fn outgoing(&self, v: usize) -> Vec<(Dir, i64)> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.ends[0] == v {
                out.push((e.direction, e.weight));
            }
            if e.ends[1] == v {
                out.push(((-e.direction.0, -e.direction.1), e.weight));
            }
        }
        for r in self.rays.iter().filter(|r| r.base == v) {
            out.push((r.direction, r.weight));
        }
        out
    }

    /// Monomials attaining `max(h_ij + i x + j y)` at `p`. One monomial means `p` is
    /// off the curve, two an edge interior, three or more a vertex.
    pub fn dual_cell(&self, p: Point) -> Vec<Lattice> {
        let mut best: Option<Rational> = None;
        let mut cell = Vec::new();
        for (&(i, j), &h) in &self.heights {
            let val = h + p.x * Rational::from(i as i128) + p.y * Rational::from(j as i128);
            match best {
                Some(b) if val < b => {}
                Some(b) if val == b => cell.push((i, j)),
                _ => {
                    best = Some(val);
                    cell = vec![(i, j)];
                }
            }
        }
        cell
    }

    pub fn contains(&self, p: Point) -> bool {
        self.dual_cell(p).len() >= 2
    }

    pub fn edge_piece(&self, k: usize) -> Piece {
        let e = &self.edges[k];
        Piece::segment(self.vertices[e.ends[0]].point, self.vertices[e.ends[1]].point)
    }

    pub fn ray_piece(&self, k: usize) -> Piece {
        let r = &self.rays[k];
        Piece::ray(self.vertices[r.base].point, r.direction)
    }

    /// All edges and rays as pieces, with their weights and dual edges.
    pub fn pieces(&self) -> Vec<(Piece, i64, [Lattice; 2])> {
        let mut out: Vec<(Piece, i64, [Lattice; 2])> =
            (0..self.edges.len()).map(|k| (self.edge_piece(k), self.edges[k].weight, self.edges[k].dual)).collect();
        out.extend((0..self.rays.len()).map(|k| (self.ray_piece(k), self.rays[k].weight, self.rays[k].dual)));
        out
    }

    /// The curve vertex dual to the given face corners, if any.
    pub fn vertex_dual_to(&self, cell: &[Lattice]) -> Option<usize> {
        let mut key = cell.to_vec();
        key.sort();
        self.vertices.iter().position(|v| {
            let mut d = v.dual.clone();
            d.sort();
            d == key
        })
    }

    /// Center and `l_inf` radius of the vertex set.
    pub fn extent(&self) -> (Point, Rational) {
        let xs: Vec<Rational> = self.vertices.iter().map(|v| v.point.x).collect();
        let ys: Vec<Rational> = self.vertices.iter().map(|v| v.point.y).collect();
        let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
        let half = Rational::new(1, 2);
        let r = if x1 - x0 > y1 - y0 { x1 - x0 } else { y1 - y0 };
        (Point::new((x0 + x1) * half, (y0 + y1) * half), r * half)
    }
}

impl fmt::Display for TropicalCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.vertices.iter().enumerate() {
            let dual: Vec<String> = v.dual.iter().map(|(i, j)| format!("({i},{j})")).collect();
            writeln!(f, "vertex {k}: {} dual {}", v.point, dual.join(" "))?;
        }
        for e in &self.edges {
            writeln!(
                f,
                "edge: {} {} direction ({},{}) weight {} dual ({},{})-({},{})",
                e.ends[0], e.ends[1], e.direction.0, e.direction.1, e.weight, e.dual[0].0, e.dual[0].1, e.dual[1].0, e.dual[1].1
            )?;
        }
        for r in &self.rays {
            writeln!(
                f,
                "ray: {} direction ({},{}) weight {} dual ({},{})-({},{})",
                r.base, r.direction.0, r.direction.1, r.weight, r.dual[0].0, r.dual[0].1, r.dual[1].0, r.dual[1].1
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineRay {
    Horizontal,
    Vertical,
    Diagonal,
}

impl LineRay {
    pub const ALL: [LineRay; 3] = [LineRay::Horizontal, LineRay::Vertical, LineRay::Diagonal];

    pub fn direction(self) -> Dir {
        match self {
            LineRay::Horizontal => (-1, 0),
            LineRay::Vertical => (0, -1),
            LineRay::Diagonal => (1, 1),
        }
    }

    /// The two monomials of `y + M + N x` that tie along this ray.
    pub fn dual(self) -> [Lattice; 2] {
        match self {
            LineRay::Horizontal => [(0, 0), (0, 1)],
            LineRay::Vertical => [(0, 0), (1, 0)],
            LineRay::Diagonal => [(0, 1), (1, 0)],
        }
    }

    /// The line monomial that is not on this ray.
    pub fn opposite(self) -> Lattice {
        match self {
            LineRay::Horizontal => (1, 0),
            LineRay::Vertical => (0, 1),
            LineRay::Diagonal => (0, 0),
        }
    }
}

impl fmt::Display for LineRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LineRay::Horizontal => "horizontal",
            LineRay::Vertical => "vertical",
            LineRay::Diagonal => "diagonal",
        };
        f.write_str(s)
    }
}

/// A tropical line, determined by its vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TropicalLine {
    pub vertex: Point,
}

impl TropicalLine {
    pub fn new(vertex: Point) -> Self {
        TropicalLine { vertex }
    }

    /// Valuations of `M` and `N` in `y + M + N x`.
    pub fn valuations(&self) -> (Rational, Rational) {
        (-self.vertex.y, self.vertex.x - self.vertex.y)
    }

    pub fn from_valuations(val_m: Rational, val_n: Rational) -> Self {
        TropicalLine::new(Point::new(val_n - val_m, -val_m))
    }

    pub fn ray_piece(&self, r: LineRay) -> Piece {
        Piece::ray(self.vertex, r.direction())
    }

    /// Monomials of the line attaining the maximum at `p`.
    pub fn dual_cell(&self, p: Point) -> Vec<Lattice> {
        let v = self.vertex;
        let vals = [((0, 0), v.y), ((0, 1), p.y), ((1, 0), p.x + v.y - v.x)];
        let best = vals.iter().map(|(_, x)| *x).max().unwrap();
        vals.iter().filter(|(_, x)| *x == best).map(|(m, _)| *m).collect()
    }
}

/// Mixed area of two lattice polygons given by point sets, normalized so that
/// two primitive segments spanning a unimodular parallelogram meet with 1.
pub fn mixed_area(p: &[Lattice], q: &[Lattice]) -> i64 {
    let sum: Vec<Lattice> = p.iter().flat_map(|a| q.iter().map(move |b| (a.0 + b.0, a.1 + b.1))).collect();
    let area = |pts: &[Lattice]| double_area(&convex_hull(pts)).abs();
    let twice = area(&sum) - area(p) - area(q);
    assert!(twice % 2 == 0);
    twice / 2
}

/// A point where the ray of the line leaves one region of the curve complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayEvent {
    pub t: Rational,
    pub cell: Vec<Lattice>,
    pub jump: u32,
}

/// A stretch of the ray lying on an edge or ray of the curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub from: Rational,
    pub to: Option<Rational>,
    pub edge: Vec<Lattice>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayTrace {
    pub ray: LineRay,
    pub events: Vec<RayEvent>,
    pub overlaps: Vec<Overlap>,
}

/// Scaled integer data of the tropical polynomial restricted to the line through
/// `v`: along `v + t d`, monomial `a` has value `(c_a + s_a * K t) / K`.
struct Restriction {
    scale: i128,
    intercepts: Vec<(Lattice, i128)>,
}

impl Restriction {
    fn new(curve: &TropicalCurve, v: Point) -> Self {
        let mut scale: i128 = v.x.denom().lcm(v.y.denom());
        for h in curve.heights.values() {
            scale = scale.lcm(h.denom());
        }
        let k = Rational::from_integer(scale);
        let intercepts = curve
            .heights
            .iter()
            .map(|(&(i, j), &h)| {
                let c = (h + v.x * Rational::from(i as i128) + v.y * Rational::from(j as i128)) * k;
                ((i, j), c.to_integer())
            })
            .collect();
        Restriction { scale, intercepts }
    }

    fn argmax(&self) -> Vec<Lattice> {
        let best = self.intercepts.iter().map(|(_, c)| *c).max().unwrap();
        self.intercepts.iter().filter(|(_, c)| *c == best).map(|(a, _)| *a).collect()
    }

    /// Walks along direction `d`, recording every breakpoint of the upper envelope.
    fn walk(&self, ray: LineRay) -> RayTrace {
        let d = ray.direction();
        let slope = |a: Lattice| (a.0 * d.0 + a.1 * d.1) as i128;
        let start = self.argmax();
        let s_top = start.iter().map(|&a| slope(a)).max().unwrap();
        let mut top: Vec<Lattice> = start.into_iter().filter(|&a| slope(a) == s_top).collect();
        let intercept = |a: Lattice| self.intercepts.iter().find(|(b, _)| *b == a).unwrap().1;
        let mut cur = (0i128, 1i128);
        let mut events = Vec::new();
        let mut overlaps = Vec::new();
        let to_t = |(n, den): (i128, i128)| Rational::new(n, den * self.scale);
        loop {
            let c_top = intercept(top[0]);
            let s_cur = slope(top[0]);
            let mut next: Option<(i128, i128)> = None;
            for &(a, c) in &self.intercepts {
                let s = slope(a);
                if s > s_cur {
                    let cand = (c_top - c, s - s_cur);
                    if next.is_none_or(|(n, den)| cand.0 * den < n * cand.1) {
                        next = Some(cand);
                    }
                }
            }
            let Some((n, den)) = next else {
                if top.len() >= 2 {
                    overlaps.push(Overlap { from: to_t(cur), to: None, edge: top.clone() });
                }
                break;
            };
            let g = n.gcd(&den);
            let nxt = (n / g, den / g);
            let level = c_top * nxt.1 + s_cur * nxt.0;
            let cell: Vec<Lattice> =
                self.intercepts.iter().filter(|&&(a, c)| c * nxt.1 + slope(a) * nxt.0 == level).map(|(a, _)| *a).collect();
            let s_new = cell.iter().map(|&a| slope(a)).max().unwrap();
            if top.len() >= 2 {
                overlaps.push(Overlap { from: to_t(cur), to: Some(to_t(nxt)), edge: top.clone() });
            }
            events.push(RayEvent { t: to_t(nxt), jump: (s_new - s_cur) as u32, cell: cell.clone() });
            top = cell.into_iter().filter(|&a| slope(a) == s_new).collect();
            cur = nxt;
        }
        RayTrace { ray, events, overlaps }
    }
}

/// How a connected component of `Λ ∩ Γ` sits relative to both complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    /// A ray of the line crosses the interior of a curve edge.
    TransverseCrossing { ray: LineRay, edge: [Lattice; 2] },
    /// A curve vertex lies in the interior of a ray of the line.
    CurveVertexOnRay { ray: LineRay, triangle: Vec<Lattice> },
    /// The vertex of the line lies in the interior of a curve edge.
    LineVertexOnEdge { edge: [Lattice; 2] },
    /// The vertex of the line is a curve vertex.
    LineVertexOnCurveVertex { triangle: Vec<Lattice> },
    /// A bounded curve edge lies inside a ray of the line. `apexes[0]` belongs to
    /// the endpoint closer to the vertex of the line.
    EdgeInRay { ray: LineRay, edge: [Lattice; 2], apexes: [Lattice; 2] },
    /// The vertex of the line lies inside a curve edge, and the edge runs along a ray
    /// of the line up to a curve vertex with the given apex.
    EdgeFromLineVertex { ray: LineRay, edge: [Lattice; 2], apex: Lattice },
    Other,
}

impl ComponentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ComponentKind::TransverseCrossing { .. } => "transverse",
            ComponentKind::CurveVertexOnRay { .. } => "curve-vertex-on-ray",
            ComponentKind::LineVertexOnEdge { .. } => "line-vertex-on-edge",
            ComponentKind::LineVertexOnCurveVertex { .. } => "line-vertex-on-curve-vertex",
            ComponentKind::EdgeInRay { .. } => "edge-in-ray",
            ComponentKind::EdgeFromLineVertex { .. } => "edge-from-line-vertex",
            ComponentKind::Other => "other",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Carrier {
    Point(Point),
    Segment(Point, Point),
    Ray(Point, Dir),
    /// Arms leave the vertex of the line along its rays; `None` marks an unbounded arm.
    Star { center: Point, arms: Vec<(LineRay, Option<Rational>)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StablePoint {
    pub point: Point,
    pub mult: u32,
    /// Monomials of the curve equation tied at the point.
    pub cell: Vec<Lattice>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionComponent {
    pub carrier: Carrier,
    pub total_mult: u32,
    pub tangency_points: Vec<Point>,
    pub kind: ComponentKind,
    pub stable_points: Vec<StablePoint>,
}

/// The full picture of `Λ ∩ Γ`, computed by walking the three rays of `Λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineMeet {
    pub line: TropicalLine,
    pub vertex_cell: Vec<Lattice>,
    pub vertex_mult: u32,
    pub traces: Vec<RayTrace>,
}

pub fn meet(curve: &TropicalCurve, line: TropicalLine) -> LineMeet {
    let res = Restriction::new(curve, line.vertex);
    let vertex_cell = res.argmax();
    let vertex_mult =
        if vertex_cell.len() >= 2 { mixed_area(&[(0, 0), (1, 0), (0, 1)], &vertex_cell) as u32 } else { 0 };
    let traces: Vec<RayTrace> = LineRay::ALL.iter().map(|&r| res.walk(r)).collect();
    let total: u32 = vertex_mult + traces.iter().flat_map(|t| t.events.iter()).map(|e| e.jump).sum::<u32>();
    debug_assert_eq!(total, curve.degree as u32, "intersection count differs from the degree");
    LineMeet { line, vertex_cell, vertex_mult, traces }
}

impl LineMeet {
    pub fn stable_points(&self) -> Vec<StablePoint> {
        let mut out = Vec::new();
        if self.vertex_mult > 0 {
            out.push(StablePoint { point: self.line.vertex, mult: self.vertex_mult, cell: self.vertex_cell.clone() });
        }
        for tr in &self.traces {
            for e in &tr.events {
                let point = self.line.vertex.offset(tr.ray.direction(), e.t);
                out.push(StablePoint { point, mult: e.jump, cell: e.cell.clone() });
            }
        }
        out.sort_by_key(|a| a.point);
        out
    }

    /// Multiplicities of the connected components, sorted decreasingly. Cheaper
    /// than [`LineMeet::components`].
    pub fn component_mults(&self) -> Vec<u32> {
        let groups = self.groups();
        let mut m: Vec<u32> = groups.iter().map(|g| g.mult).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    fn groups(&self) -> Vec<Group> {
        // node 0 is the vertex of the line; events are numbered per ray
        let mut nodes: Vec<Node> = vec![Node::Vertex];
        for (ri, tr) in self.traces.iter().enumerate() {
            for ei in 0..tr.events.len() {
                nodes.push(Node::Event(ri, ei));
            }
            for oi in 0..tr.overlaps.len() {
                nodes.push(Node::Overlap(ri, oi));
            }
        }
        let idx = |n: Node| nodes.iter().position(|m| *m == n).unwrap();
        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for (ri, tr) in self.traces.iter().enumerate() {
            for (oi, o) in tr.overlaps.iter().enumerate() {
                let me = idx(Node::Overlap(ri, oi));
                let mut ends = vec![o.from];
                ends.extend(o.to);
                for t in ends {
                    let other = if t.is_zero() {
                        0
                    } else {
                        let ei = tr.events.iter().position(|e| e.t == t).expect("overlap ends at an event");
                        idx(Node::Event(ri, ei))
                    };
                    let (a, b) = (find(&mut parent, me), find(&mut parent, other));
                    parent[a] = b;
                }
            }
        }
        let on_curve = self.vertex_cell.len() >= 2;
        let mut groups: BTreeMap<usize, Group> = BTreeMap::new();
        for (k, n) in nodes.iter().enumerate() {
            if *n == Node::Vertex && !on_curve {
                continue;
            }
            let root = find(&mut parent, k);
            let g = groups.entry(root).or_default();
            g.nodes.push(*n);
            g.mult += match *n {
                Node::Vertex => self.vertex_mult,
                Node::Event(ri, ei) => self.traces[ri].events[ei].jump,
                Node::Overlap(..) => 0,
            };
        }
        groups.into_values().collect()
    }

    pub fn components(&self) -> Vec<IntersectionComponent> {
        self.groups().into_iter().map(|g| self.component(&g)).collect()
    }

    fn component(&self, g: &Group) -> IntersectionComponent {
        let v = self.line.vertex;
        let has_vertex = g.nodes.contains(&Node::Vertex);
        let events: Vec<(usize, &RayEvent)> = g
            .nodes
            .iter()
            .filter_map(|n| match *n {
                Node::Event(ri, ei) => Some((ri, &self.traces[ri].events[ei])),
                _ => None,
            })
            .collect();
        let overlaps: Vec<(usize, &Overlap)> = g
            .nodes
            .iter()
            .filter_map(|n| match *n {
                Node::Overlap(ri, oi) => Some((ri, &self.traces[ri].overlaps[oi])),
                _ => None,
            })
            .collect();
        let mut stable_points = Vec::new();
        if has_vertex {
            stable_points.push(StablePoint { point: v, mult: self.vertex_mult, cell: self.vertex_cell.clone() });
        }
        for &(ri, e) in &events {
            let point = v.offset(self.traces[ri].ray.direction(), e.t);
            stable_points.push(StablePoint { point, mult: e.jump, cell: e.cell.clone() });
        }

        // extent of the component along each ray it touches
        let mut reach: BTreeMap<usize, (Rational, Option<Rational>)> = BTreeMap::new();
        for &(ri, e) in &events {
            let r = reach.entry(ri).or_insert((e.t, Some(e.t)));
            if e.t < r.0 {
                r.0 = e.t;
            }
            if let Some(hi) = r.1 {
                if e.t > hi {
                    r.1 = Some(e.t);
                }
            }
        }
        for &(ri, o) in &overlaps {
            let r = reach.entry(ri).or_insert((o.from, o.to));
            if o.from < r.0 {
                r.0 = o.from;
            }
            r.1 = match (r.1, o.to) {
                (Some(a), Some(b)) => Some(if a > b { a } else { b }),
                _ => None,
            };
        }
        if has_vertex {
            for r in reach.values_mut() {
                r.0 = Rational::zero();
            }
        }
        let carrier = if overlaps.is_empty() {
            Carrier::Point(stable_points[0].point)
        } else if reach.len() == 1 {
            let (&ri, &(lo, hi)) = reach.iter().next().unwrap();
            let d = self.traces[ri].ray.direction();
            match hi {
                Some(hi) => Carrier::Segment(v.offset(d, lo), v.offset(d, hi)),
                None => Carrier::Ray(v.offset(d, lo), d),
            }
        } else {
            let arms = reach
                .iter()
                .filter(|(_, (_, hi))| hi.is_none_or(|h| h.is_positive()))
                .map(|(&ri, &(_, hi))| (self.traces[ri].ray, hi))
                .collect();
            Carrier::Star { center: v, arms }
        };
        let tangency_points = tangency_points(&carrier, g.mult);
        let kind = self.kind(has_vertex, &events, &overlaps);
        IntersectionComponent { carrier, total_mult: g.mult, tangency_points, kind, stable_points }
    }

    fn kind(&self, has_vertex: bool, events: &[(usize, &RayEvent)], overlaps: &[(usize, &Overlap)]) -> ComponentKind {
        let pair = |c: &[Lattice]| -> Option<[Lattice; 2]> { (c.len() == 2).then(|| [c[0], c[1]]) };
        let apex_of = |cell: &[Lattice], edge: &[Lattice]| -> Option<Lattice> {
            let rest: Vec<Lattice> = cell.iter().copied().filter(|a| !edge.contains(a)).collect();
            (rest.len() == 1).then(|| rest[0])
        };
        match (has_vertex, events, overlaps) {
            (true, [], []) => match self.vertex_cell.len() {
                2 => ComponentKind::LineVertexOnEdge { edge: pair(&self.vertex_cell).unwrap() },
                _ => ComponentKind::LineVertexOnCurveVertex { triangle: self.vertex_cell.clone() },
            },
            (false, [(ri, e)], []) => {
                let ray = self.traces[*ri].ray;
                match pair(&e.cell) {
                    Some(edge) => ComponentKind::TransverseCrossing { ray, edge },
                    None => ComponentKind::CurveVertexOnRay { ray, triangle: e.cell.clone() },
                }
            }
            (false, [(r1, e1), (r2, e2)], [(r3, o)]) if r1 == r2 && r2 == r3 && o.to.is_some() => {
                let (near, far) = if e1.t < e2.t { (e1, e2) } else { (e2, e1) };
                match (pair(&o.edge), apex_of(&near.cell, &o.edge), apex_of(&far.cell, &o.edge)) {
                    (Some(edge), Some(a0), Some(a1)) => {
                        ComponentKind::EdgeInRay { ray: self.traces[*r1].ray, edge, apexes: [a0, a1] }
                    }
                    _ => ComponentKind::Other,
                }
            }
            (true, [(r1, e)], [(r2, o)]) if r1 == r2 && o.from.is_zero() && o.to.is_some() => {
                match (pair(&self.vertex_cell), apex_of(&e.cell, &o.edge)) {
                    (Some(edge), Some(apex)) if self.vertex_cell.len() == 2 => {
                        ComponentKind::EdgeFromLineVertex { ray: self.traces[*r1].ray, edge, apex }
                    }
                    _ => ComponentKind::Other,
                }
            }
            _ => ComponentKind::Other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Node {
    Vertex,
    Event(usize, usize),
    Overlap(usize, usize),
}

#[derive(Default)]
struct Group {
    nodes: Vec<Node>,
    mult: u32,
}

/// Tropical tangency points of a component: midpoints of segments, the point
/// itself for isolated points, and the shortened-arm rule for stars.
fn tangency_points(carrier: &Carrier, mult: u32) -> Vec<Point> {
    if mult % 2 == 1 {
        return Vec::new();
    }
    let copies = (mult / 2) as usize;
    match carrier {
        Carrier::Point(p) => vec![*p; copies],
        Carrier::Segment(a, b) => vec![a.midpoint(*b); copies],
        Carrier::Ray(..) => Vec::new(),
        Carrier::Star { center, arms } => {
            let half = Rational::new(1, 2);
            let bounded: Option<Vec<(LineRay, Rational)>> = arms.iter().map(|(r, l)| l.map(|l| (*r, l))).collect();
            let Some(mut arms) = bounded else { return Vec::new() };
            arms.sort_by_key(|a| a.1);
            match arms.as_slice() {
                [(_, short), rest @ ..] if arms.len() == 3 => rest
                    .iter()
                    .map(|(r, l)| center.offset(r.direction(), (*short + *l) * half))
                    .collect(),
                [(r1, l1), (r2, l2)] => {
                    // a bent segment through the center: take its midpoint by length
                    let mid = (*l1 + *l2) * half;
                    let p = if mid <= *l2 {
                        center.offset(r2.direction(), *l2 - mid)
                    } else {
                        center.offset(r1.direction(), mid - *l2)
                    };
                    vec![p; copies]
                }
                _ => Vec::new(),
            }
        }
    }
}

/// Decides tropical bitangency: one component of multiplicity 4, or two of multiplicity 2.
pub fn is_bitangent(curve: &TropicalCurve, line: TropicalLine) -> (bool, Vec<IntersectionComponent>) {
    let m = meet(curve, line);
    let comps = m.components();
    let mut mults: Vec<u32> = comps.iter().map(|c| c.total_mult).filter(|&k| k > 0).collect();
    mults.sort_unstable();
    (mults == [4] || mults == [2, 2], comps)
}

/// Fast bitangency test without assembling components.
pub fn is_bitangent_fast(curve: &TropicalCurve, line: TropicalLine) -> bool {
    let m = meet(curve, line).component_mults();
    m == [4] || m == [2, 2]
}

pub fn intersection_components(curve: &TropicalCurve, line: TropicalLine) -> Vec<IntersectionComponent> {
    meet(curve, line).components()
}

const PERTURBATION: i64 = 1009;

/// Stable intersection points computed as limits of transverse intersections of
/// `Λ + ε w` with `Γ`, for the two perturbations `w = (1, N)` and `w = (N, 1)`.
pub fn stable_intersection(curve: &TropicalCurve, line: TropicalLine) -> Result<Vec<(Point, u32)>, CurveError> {
    let a = perturbed_intersection(curve, line, (1, PERTURBATION));
    let b = perturbed_intersection(curve, line, (PERTURBATION, 1));
    match (a, b) {
        (Some(a), Some(b)) => {
            assert_eq!(a, b, "stable intersection depends on the perturbation");
            Ok(a)
        }
        (Some(a), None) | (None, Some(a)) => Ok(a),
        (None, None) => Err(CurveError::DegeneratePerturbation(line.vertex)),
    }
}

/// `None` when the perturbed line still meets the curve non-transversally.
fn perturbed_intersection(curve: &TropicalCurve, line: TropicalLine, w: Dir) -> Option<Vec<(Point, u32)>> {
    let v = line.vertex;
    let mut points: BTreeMap<Point, u32> = BTreeMap::new();
    let lex_pos = |a: Rational, b: Rational| a.is_positive() || (a.is_zero() && b.is_positive());
    for (piece, weight, _) in curve.pieces() {
        let e = piece.dir;
        for r in LineRay::ALL {
            let d = r.direction();
            let det = -cross(d, e);
            let r0 = piece.start - v;
            let r1 = -Point::dir(w);
            let ne = Point::dir((-e.0, -e.1));
            let dd = Point::dir(d);
            if det == 0 {
                if r0.cross(dd).is_zero() && r1.cross(dd).is_zero() {
                    return None;
                }
                continue;
            }
            let den = Rational::from(det as i128);
            let (t0, t1) = (r0.cross(ne) / den, r1.cross(ne) / den);
            let (s0, s1) = (dd.cross(r0) / den, dd.cross(r1) / den);
            if (t0.is_zero() && t1.is_zero()) || (s0.is_zero() && s1.is_zero()) {
                return None;
            }
            if let Some(l) = piece.end {
                if s0 == l && s1.is_zero() {
                    return None;
                }
                if !lex_pos(l - s0, -s1) {
                    continue;
                }
            }
            if !lex_pos(t0, t1) || !lex_pos(s0, s1) {
                continue;
            }
            let m = (weight * cross(d, e).abs()) as u32;
            *points.entry(v.offset(d, t0)).or_default() += m;
        }
    }
    Some(points.into_iter().collect())
}

/// Pairs of curve vertices on a common horizontal, vertical or diagonal line that
/// are not the two ends of one edge in that direction, and that some tropical
/// bitangent sees on a single one of its rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericityReport {
    pub alignments: Vec<(usize, usize, Dir)>,
    /// Aligned pairs that no bitangent ray passes through both of.
    pub harmless: Vec<(usize, usize, Dir)>,
}

impl GenericityReport {
    /// Only the alignment scan; classification against the shape catalogue is
    /// checked separately when the bitangent classes are built.
    pub fn is_generic(&self) -> bool {
        self.alignments.is_empty()
    }
}

pub fn check_generic(curve: &TropicalCurve) -> GenericityReport {
    let mut alignments = Vec::new();
    let mut harmless = Vec::new();
    let n = curve.vertices.len();
    for a in 0..n {
        for b in a + 1..n {
            let (p, q) = (curve.vertices[a].point, curve.vertices[b].point);
            let dir = if p.y == q.y {
                (1, 0)
            } else if p.x == q.x {
                (0, 1)
            } else if p.x - p.y == q.x - q.y {
                (1, 1)
            } else {
                continue;
            };
            let joined = curve.edges.iter().any(|e| {
                let ends = [e.ends[0], e.ends[1]];
                (ends == [a, b] || ends == [b, a]) && cross(e.direction, dir) == 0
            });
            if joined {
                continue;
            }
            if seen_by_bitangent(curve, p, q, dir) {
                alignments.push((a, b, dir));
            } else {
                harmless.push((a, b, dir));
            }
        }
    }
    GenericityReport { alignments, harmless }
}

/// Searches the half-line of line vertices whose ray in direction `±dir` contains
/// both `p` and `q` for a bitangent, sampling every combinatorial piece.
fn seen_by_bitangent(curve: &TropicalCurve, p: Point, q: Point, dir: Dir) -> bool {
    // start of the half-line and the direction it extends in
    let (start, away): (Point, Dir) = match dir {
        (1, 0) => (if p.x > q.x { p } else { q }, (1, 0)),
        (0, 1) => (if p.y > q.y { p } else { q }, (0, 1)),
        _ => (if p.x < q.x { p } else { q }, (-1, -1)),
    };
    let half = crate::arrangement::ArrLine::through(start, away);
    let mut ts: Vec<Rational> = vec![Rational::zero()];
    for l in crate::arrangement::generator_lines(curve) {
        if let Some(x) = half.intersect(&l) {
            let t = param_along(start, away, x);
            if t.is_positive() {
                ts.push(t);
            }
        }
    }
    ts.sort();
    ts.dedup();
    let mut samples = ts.clone();
    for w in ts.windows(2) {
        samples.push((w[0] + w[1]) * Rational::new(1, 2));
    }
    samples.push(*ts.last().unwrap() + Rational::from_integer(1));
    samples.into_iter().any(|t| is_bitangent_fast(curve, TropicalLine::new(start.offset(away, t))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quartic::{newton_subdivision, running_example_valuations, QuarticInput};

    fn r(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    pub(crate) fn running_curve() -> TropicalCurve {
        let q = QuarticInput::from_valuations(&running_example_valuations()).unwrap();
        build_curve(&newton_subdivision(&q.heights()), 4)
    }

    fn line_curve() -> TropicalCurve {
        let h: BTreeMap<Lattice, Rational> = [((1, 0), r(0)), ((0, 1), r(0)), ((0, 0), r(-1))].into_iter().collect();
        build_curve(&newton_subdivision(&h), 1)
    }

    #[test]
    fn line_through_point() {
        let c = line_curve();
        assert_eq!(c.vertices.len(), 1);
        assert_eq!(c.vertices[0].point, Point::from_ints(-1, -1));
        assert_eq!(c.rays.len(), 3);
        assert!(c.edges.is_empty());
    }

    #[test]
    fn conic_counts() {
        let h: BTreeMap<Lattice, Rational> =
            [((2, 0), 1), ((1, 1), 2), ((0, 2), 1), ((1, 0), 2), ((0, 1), 2), ((0, 0), 1)]
                .into_iter()
                .map(|(p, v)| (p, r(v)))
                .collect();
        let c = build_curve(&newton_subdivision(&h), 2);
        assert_eq!((c.vertices.len(), c.edges.len(), c.rays.len()), (4, 3, 6));
    }

    #[test]
    fn running_example_counts() {
        let c = running_curve();
        assert_eq!((c.vertices.len(), c.edges.len(), c.rays.len()), (16, 18, 12));
        let report = check_generic(&c);
        assert!(report.is_generic(), "{:?}\n{c}", report);
    }

    #[test]
    fn two_generic_lines_meet_once() {
        let c = line_curve();
        let l = TropicalLine::new(Point::from_ints(3, 1));
        let pts = stable_intersection(&c, l).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].1, 1);
        let comps = intersection_components(&c, l);
        assert_eq!(comps.len(), 1);
    }

    #[test]
    fn mixed_area_of_segments() {
        assert_eq!(mixed_area(&[(0, 0), (0, 1)], &[(0, 0), (2, 1)]), 2);
        assert_eq!(mixed_area(&[(0, 0), (1, 0), (0, 1)], &[(0, 0), (1, 1)]), 2);
        assert_eq!(mixed_area(&[(0, 0), (1, 0), (0, 1)], &[(1, 0), (0, 1), (1, 1)]), 2);
    }

    #[test]
    fn generic_line_meets_in_four_points() {
        let c = running_curve();
        let l = TropicalLine::new(Point::new(Rational::new(1, 3), Rational::new(1, 7)));
        let comps = intersection_components(&c, l);
        let total: u32 = comps.iter().map(|c| c.total_mult).sum();
        assert_eq!(total, 4);
        let pts = stable_intersection(&c, l).unwrap();
        assert_eq!(pts.iter().map(|p| p.1).sum::<u32>(), 4);
    }

    #[test]
    fn both_algorithms_agree_on_lattice_lines() {
        let c = running_curve();
        for x in -12..=12 {
            for y in -12..=12 {
                let l = TropicalLine::new(Point::from_ints(x, y));
                let Ok(pts) = stable_intersection(&c, l) else { continue };
                let mut walk: Vec<(Point, u32)> =
                    meet(&c, l).stable_points().into_iter().map(|s| (s.point, s.mult)).collect();
                walk.sort();
                assert_eq!(pts, walk, "line vertex ({x},{y})");
            }
        }
    }
}
