//! Line arrangements in the plane of line vertices, with exact face tracing.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::geometry::{cross, primitive, Dir, Point};
use crate::residue::Rational;
use crate::tropcurve::TropicalCurve;

/// The line `a x + b y = c` with `(a, b)` primitive and lexicographically positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrLine {
    pub a: i64,
    pub b: i64,
    pub c: Rational,
}

impl ArrLine {
    /// The line through `p` with direction `d`.
    pub fn through(p: Point, d: Dir) -> ArrLine {
        let (d, _) = primitive(d);
        let (mut a, mut b) = (d.1, -d.0);
        if a < 0 || (a == 0 && b < 0) {
            a = -a;
            b = -b;
        }
        let c = p.x * Rational::from(a as i128) + p.y * Rational::from(b as i128);
        ArrLine { a, b, c }
    }

    pub fn direction(&self) -> Dir {
        (-self.b, self.a)
    }

    pub fn eval(&self, p: Point) -> Rational {
        p.x * Rational::from(self.a as i128) + p.y * Rational::from(self.b as i128) - self.c
    }

    pub fn contains(&self, p: Point) -> bool {
        self.eval(p).is_zero()
    }

    pub fn intersect(&self, o: &ArrLine) -> Option<Point> {
        let det = self.a * o.b - self.b * o.a;
        if det == 0 {
            return None;
        }
        let det = Rational::from(det as i128);
        let x = (self.c * Rational::from(o.b as i128) - o.c * Rational::from(self.b as i128)) / det;
        let y = (o.c * Rational::from(self.a as i128) - self.c * Rational::from(o.a as i128)) / det;
        Some(Point::new(x, y))
    }

    /// Position of `p` along the line, increasing in the direction of [`ArrLine::direction`].
    fn param(&self, p: Point) -> Rational {
        let d = self.direction();
        p.x * Rational::from(d.0 as i128) + p.y * Rational::from(d.1 as i128)
    }
}

/// Lines where the combinatorics of `Λ ∩ Γ` can change: supports of edges and
/// rays, and the three line directions through every curve vertex.
pub fn generator_lines(curve: &TropicalCurve) -> Vec<ArrLine> {
    let mut set = BTreeSet::new();
    for e in &curve.edges {
        set.insert(ArrLine::through(curve.vertices[e.ends[0]].point, e.direction));
    }
    for r in &curve.rays {
        set.insert(ArrLine::through(curve.vertices[r.base].point, r.direction));
    }
    for v in &curve.vertices {
        for d in [(1, 0), (0, 1), (1, 1)] {
            set.insert(ArrLine::through(v.point, d));
        }
    }
    set.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrEdge {
    pub ends: [usize; 2],
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrFace {
    /// Boundary vertices, counter-clockwise.
    pub boundary: Vec<usize>,
    pub edges: Vec<usize>,
    pub rep: Point,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub lines: Vec<ArrLine>,
    pub vertices: Vec<Point>,
    pub edges: Vec<ArrEdge>,
    pub faces: Vec<ArrFace>,
    /// `(x_min, y_min, x_max, y_max)` of the clipping box.
    pub bbox: (Rational, Rational, Rational, Rational),
}

/// A cell of the arrangement: vertex, edge or face index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
    Face(usize),
}

impl Cell {
    pub fn dim(&self) -> usize {
        match self {
            Cell::Vertex(_) => 0,
            Cell::Edge(_) => 1,
            Cell::Face(_) => 2,
        }
    }
}

/// Clipping box around the curve: a margin of four diameters, enlarged when
/// needed so that every crossing of the generator lines lies strictly inside.
fn clipping_box(curve: &TropicalCurve, lines: &[ArrLine]) -> (Rational, Rational, Rational, Rational) {
    let mut pts: Vec<Point> = curve.vertices.iter().map(|v| v.point).collect();
    for (i, l) in lines.iter().enumerate() {
        for m in &lines[i + 1..] {
            pts.extend(l.intersect(m));
        }
    }
    let (_, radius) = curve.extent();
    let margin = if radius.is_positive() { radius * Rational::from(8) } else { Rational::from(1) };
    let x0 = pts.iter().map(|p| p.x).min().unwrap() - margin;
    let x1 = pts.iter().map(|p| p.x).max().unwrap() + margin;
    let y0 = pts.iter().map(|p| p.y).min().unwrap() - margin;
    let y1 = pts.iter().map(|p| p.y).max().unwrap() + margin;
    (x0, y0, x1, y1)
}

fn angle_cmp(a: Dir, b: Dir) -> Ordering {
    let half = |d: Dir| if d.1 < 0 || (d.1 == 0 && d.0 < 0) { 1 } else { 0 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross(a, b)))
}

pub fn build_arrangement(curve: &TropicalCurve) -> Arrangement {
    let mut lines = generator_lines(curve);
    let bbox = clipping_box(curve, &lines);
    let (x0, y0, x1, y1) = bbox;
    let box_lines = [
        ArrLine { a: 1, b: 0, c: x0 },
        ArrLine { a: 1, b: 0, c: x1 },
        ArrLine { a: 0, b: 1, c: y0 },
        ArrLine { a: 0, b: 1, c: y1 },
    ];
    for bl in box_lines {
        if !lines.contains(&bl) {
            lines.push(bl);
        }
    }
    let inside = |p: &Point| p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;

    let mut index: BTreeMap<Point, usize> = BTreeMap::new();
    let mut vertices: Vec<Point> = Vec::new();
    let mut on_line: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); lines.len()];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let Some(p) = lines[i].intersect(&lines[j]) else { continue };
            if !inside(&p) {
                continue;
            }
            let k = *index.entry(p).or_insert_with(|| {
                vertices.push(p);
                vertices.len() - 1
            });
            on_line[i].insert(k);
            on_line[j].insert(k);
        }
    }

    let mut edges = Vec::new();
    // outgoing half-edges per vertex: (direction, target, edge)
    let mut around: Vec<Vec<(Dir, usize, usize)>> = vec![Vec::new(); vertices.len()];
    for (li, l) in lines.iter().enumerate() {
        let mut pts: Vec<usize> = on_line[li].iter().copied().collect();
        pts.sort_by_key(|&k| l.param(vertices[k]));
        let d = l.direction();
        for w in pts.windows(2) {
            let e = edges.len();
            edges.push(ArrEdge { ends: [w[0], w[1]], line: li });
            around[w[0]].push((d, w[1], e));
            around[w[1]].push(((-d.0, -d.1), w[0], e));
        }
    }
    for a in &mut around {
        a.sort_by(|p, q| angle_cmp(p.0, q.0));
    }

    let mut faces = Vec::new();
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    for start in 0..vertices.len() {
        for &(_, first, _) in &around[start] {
            if used.contains(&(start, first)) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cycle_edges = Vec::new();
            let (mut u, mut v) = (start, first);
            loop {
                used.insert((u, v));
                cycle.push(u);
                let adj = &around[v];
                let back = adj.iter().position(|&(_, t, _)| t == u).unwrap();
                let e = adj[back].2;
                cycle_edges.push(e);
                let next = adj[(back + adj.len() - 1) % adj.len()].1;
                u = v;
                v = next;
                if (u, v) == (start, first) {
                    break;
                }
            }
            let pts: Vec<Point> = cycle.iter().map(|&k| vertices[k]).collect();
            let n = pts.len();
            let area: Rational = (0..n).map(|k| pts[k].cross(pts[(k + 1) % n])).sum();
            if !area.is_positive() {
                continue;
            }
            let rep = interior_point(&pts);
            faces.push(ArrFace { boundary: cycle, edges: cycle_edges, rep });
        }
    }
    Arrangement { lines, vertices, edges, faces, bbox }
}

/// Centroid of three non-collinear corners of a convex polygon.
fn interior_point(pts: &[Point]) -> Point {
    let a = pts[0];
    for i in 1..pts.len() {
        for j in i + 1..pts.len() {
            if !(pts[i] - a).cross(pts[j] - a).is_zero() {
                let third = Rational::new(1, 3);
                return (a + pts[i] + pts[j]) * third;
            }
        }
    }
    panic!("degenerate face");
}

impl Arrangement {
    pub fn cell_rep(&self, c: Cell) -> Point {
        match c {
            Cell::Vertex(k) => self.vertices[k],
            Cell::Edge(k) => self.vertices[self.edges[k].ends[0]].midpoint(self.vertices[self.edges[k].ends[1]]),
            Cell::Face(k) => self.faces[k].rep,
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.vertices.len())
            .map(Cell::Vertex)
            .chain((0..self.edges.len()).map(Cell::Edge))
            .chain((0..self.faces.len()).map(Cell::Face))
    }

    /// Cells in the boundary of `c`, excluding `c` itself.
    pub fn boundary(&self, c: Cell) -> Vec<Cell> {
        match c {
            Cell::Vertex(_) => Vec::new(),
            Cell::Edge(k) => self.edges[k].ends.iter().map(|&v| Cell::Vertex(v)).collect(),
            Cell::Face(k) => {
                let f = &self.faces[k];
                f.edges.iter().map(|&e| Cell::Edge(e)).chain(f.boundary.iter().map(|&v| Cell::Vertex(v))).collect()
            }
        }
    }

    pub fn on_box(&self, p: Point) -> bool {
        let (x0, y0, x1, y1) = self.bbox;
        p.x == x0 || p.x == x1 || p.y == y0 || p.y == y1
    }

    /// True if the closure of the cell touches the clipping box, i.e. the cell is
    /// part of an unbounded cell of the full arrangement.
    pub fn touches_box(&self, c: Cell) -> bool {
        match c {
            Cell::Vertex(k) => self.on_box(self.vertices[k]),
            _ => self.boundary(c).into_iter().any(|b| self.touches_box(b)),
        }
    }

    /// Connected components of a closed set of cells, joined along incidences.
    pub fn components(&self, cells: &BTreeSet<Cell>) -> Vec<BTreeSet<Cell>> {
        let list: Vec<Cell> = cells.iter().copied().collect();
        let pos: BTreeMap<Cell, usize> = list.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut parent: Vec<usize> = (0..list.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for (i, c) in list.iter().enumerate() {
            for b in self.boundary(*c) {
                if let Some(&j) = pos.get(&b) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
        let mut groups: BTreeMap<usize, BTreeSet<Cell>> = BTreeMap::new();
        for (i, c) in list.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().insert(*c);
        }
        let mut out: Vec<BTreeSet<Cell>> = groups.into_values().collect();
        out.sort_by_key(|g| self.cell_rep(*g.iter().next().unwrap()));
        out
    }
}
