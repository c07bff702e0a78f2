//! Quartic inputs and their regular Newton subdivisions.
//!
//! Heights are `h(i,j) = -val(A_ij)` and faces are the projections of the *upper*
//! faces of the lifted point set.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::residue::{InitialAssignment, Rational, Symbol};

/// A lattice point `(i, j)`, the exponent of `x^i y^j`.
pub type Lattice = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuarticError {
    #[error("missing coefficient for x^{0} y^{1}")]
    MissingCoefficient(i64, i64),
    #[error("malformed input on line {0}")]
    MalformedLine(usize),
    #[error("initial of x^{0} y^{1} is zero")]
    ZeroInitial(i64, i64),
    #[error("exponent ({0}, {1}) does not belong to a curve of degree {2}")]
    WrongDegree(i64, i64, u8),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Initial {
    Value(Rational),
    Symbolic,
}

/// The `(valuation, initial)` truncation of a coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxCoeff {
    pub valuation: Rational,
    pub initial: Initial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticInput {
    degree: u8,
    coeffs: BTreeMap<Lattice, PuiseuxCoeff>,
}

pub fn lattice_points(degree: u8) -> Vec<Lattice> {
    let d = degree as i64;
    let mut v = Vec::new();
    for i in 0..=d {
        for j in 0..=(d - i) {
            v.push((i, j));
        }
    }
    v
}

pub fn symbol_of(p: Lattice) -> Symbol {
    Symbol::new(p.0 as u8, p.1 as u8)
}

impl QuarticInput {
    pub fn new(degree: u8, coeffs: BTreeMap<Lattice, PuiseuxCoeff>) -> Result<Self, QuarticError> {
        for (&(i, j), c) in &coeffs {
            if i < 0 || j < 0 || i + j > degree as i64 {
                return Err(QuarticError::WrongDegree(i, j, degree));
            }
            if c.initial == Initial::Value(Rational::zero()) {
                return Err(QuarticError::ZeroInitial(i, j));
            }
        }
        for (i, j) in lattice_points(degree) {
            if !coeffs.contains_key(&(i, j)) {
                return Err(QuarticError::MissingCoefficient(i, j));
            }
        }
        Ok(QuarticInput { degree, coeffs })
    }

    /// A quartic with the given valuations and every initial equal to one.
    pub fn from_valuations(vals: &BTreeMap<Lattice, Rational>) -> Result<Self, QuarticError> {
        let coeffs = vals
            .iter()
            .map(|(&p, &v)| (p, PuiseuxCoeff { valuation: v, initial: Initial::Value(Rational::from_integer(1)) }))
            .collect();
        Self::new(4, coeffs)
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Lattice, PuiseuxCoeff> {
        &self.coeffs
    }

    pub fn heights(&self) -> BTreeMap<Lattice, Rational> {
        self.coeffs.iter().map(|(&p, c)| (p, -c.valuation)).collect()
    }

    /// The concrete initials; symbolic ones are left unbound.
    pub fn assignment(&self) -> InitialAssignment {
        self.coeffs
            .iter()
            .filter_map(|(&p, c)| match c.initial {
                Initial::Value(v) => Some((symbol_of(p), v)),
                Initial::Symbolic => None,
            })
            .collect()
    }

    pub fn is_symbolic(&self) -> bool {
        self.coeffs.values().any(|c| c.initial == Initial::Symbolic)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (&(i, j), c) in &self.coeffs {
            let init = match &c.initial {
                Initial::Value(v) => v.to_string(),
                Initial::Symbolic => "sym".to_string(),
            };
            s.push_str(&format!("A {i} {j} {} {init}\n", c.valuation));
        }
        s
    }
}

impl FromStr for QuarticInput {
    type Err = QuarticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_quartic(s)
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.parse().ok()?;
            let d: i128 = d.parse().ok()?;
            (d > 0).then(|| Rational::new(n, d))
        }
        None => s.parse::<i128>().ok().map(Rational::from_integer),
    }
}

/// Parses the line format `A i j valuation initial`; `#` starts a comment.
pub fn parse_quartic(text: &str) -> Result<QuarticInput, QuarticError> {
    let mut coeffs = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = n + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 5 || toks[0] != "A" {
            return Err(QuarticError::MalformedLine(lineno));
        }
        let i: i64 = toks[1].parse().map_err(|_| QuarticError::MalformedLine(lineno))?;
        let j: i64 = toks[2].parse().map_err(|_| QuarticError::MalformedLine(lineno))?;
        let valuation = parse_rational(toks[3]).ok_or(QuarticError::MalformedLine(lineno))?;
        let initial = if toks[4] == "sym" {
            Initial::Symbolic
        } else {
            let v = parse_rational(toks[4]).ok_or(QuarticError::MalformedLine(lineno))?;
            if v.is_zero() {
                return Err(QuarticError::ZeroInitial(i, j));
            }
            Initial::Value(v)
        };
        if i < 0 || j < 0 || i + j > 4 {
            return Err(QuarticError::WrongDegree(i, j, 4));
        }
        if coeffs.insert((i, j), PuiseuxCoeff { valuation, initial }).is_some() {
            return Err(QuarticError::MalformedLine(lineno));
        }
    }
    QuarticInput::new(4, coeffs)
}

/// A regular subdivision: each face is a convex lattice polygon given by its
/// corners in counter-clockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularSubdivision {
    pub faces: Vec<Vec<Lattice>>,
    pub heights: BTreeMap<Lattice, Rational>,
}

pub(crate) fn cross(o: Lattice, a: Lattice, b: Lattice) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Corners of the convex hull, counter-clockwise, starting from the smallest point.
pub fn convex_hull(points: &[Lattice]) -> Vec<Lattice> {
    let mut pts: Vec<Lattice> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Lattice> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Lattice> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the signed area of a polygon.
pub fn double_area(poly: &[Lattice]) -> i64 {
    let n = poly.len();
    (0..n).map(|k| poly[k].0 * poly[(k + 1) % n].1 - poly[(k + 1) % n].0 * poly[k].1).sum()
}

/// Sign of the lifted point `s` relative to the plane through lifted `p, q, r`:
/// positive when above.
pub(crate) fn above_plane(h: &BTreeMap<Lattice, Rational>, p: Lattice, q: Lattice, r: Lattice, s: Lattice) -> i32 {
    let lift = |a: Lattice, b: Lattice| {
        (Rational::from_integer((b.0 - a.0) as i128), Rational::from_integer((b.1 - a.1) as i128), h[&b] - h[&a])
    };
    let (u0, u1, u2) = lift(p, q);
    let (v0, v1, v2) = lift(p, r);
    let (w0, w1, w2) = lift(p, s);
    let det = u0 * (v1 * w2 - v2 * w1) - u1 * (v0 * w2 - v2 * w0) + u2 * (v0 * w1 - v1 * w0);
    let orient = cross(p, q, r).signum() as i32;
    let sgn = if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    };
    sgn * orient
}

/// Computes the regular subdivision induced by `heights` by wrapping the upper hull,
/// one face at a time, starting from the upper boundary chain.
pub fn newton_subdivision(heights: &BTreeMap<Lattice, Rational>) -> RegularSubdivision {
    let pts: Vec<Lattice> = heights.keys().copied().collect();
    let hull = convex_hull(&pts);
    let mut queue: VecDeque<(Lattice, Lattice)> = VecDeque::new();
    for k in 0..hull.len() {
        let (a, b) = (hull[k], hull[(k + 1) % hull.len()]);
        for e in upper_chain(heights, &pts, a, b).windows(2) {
            queue.push_back((e[0], e[1]));
        }
    }
    let mut faces: BTreeSet<Vec<Lattice>> = BTreeSet::new();
    let mut seen_edges: BTreeSet<(Lattice, Lattice)> = BTreeSet::new();
    while let Some((p, q)) = queue.pop_front() {
        if !seen_edges.insert((p, q)) {
            continue;
        }
        let left: Vec<Lattice> = pts.iter().copied().filter(|&s| cross(p, q, s) > 0).collect();
        let Some(&first) = left.first() else { continue };
        let mut r = first;
        for &s in &left {
            if above_plane(heights, p, q, r, s) > 0 {
                r = s;
            }
        }
        let on_plane: Vec<Lattice> =
            pts.iter().copied().filter(|&s| cross(p, q, s) >= 0 && above_plane(heights, p, q, r, s) == 0).collect();
        let face = convex_hull(&on_plane);
        let n = face.len();
        for k in 0..n {
            let (a, b) = (face[k], face[(k + 1) % n]);
            seen_edges.insert((a, b));
            queue.push_back((b, a));
        }
        faces.insert(face);
    }
    let mut faces: Vec<Vec<Lattice>> = faces.into_iter().collect();
    faces.sort_by_key(|f| {
        let mut s = f.clone();
        s.sort();
        s
    });
    RegularSubdivision { faces, heights: heights.clone() }
}

/// The vertices of the upper hull of the lifted points on the segment `[a, b]`, from `a` to `b`.
fn upper_chain(h: &BTreeMap<Lattice, Rational>, pts: &[Lattice], a: Lattice, b: Lattice) -> Vec<Lattice> {
    let mut on: Vec<(i64, Lattice)> = pts
        .iter()
        .copied()
        .filter(|&s| cross(a, b, s) == 0)
        .map(|s| ((s.0 - a.0) * (b.0 - a.0) + (s.1 - a.1) * (b.1 - a.1), s))
        .collect();
    on.sort();
    let mut chain: Vec<(i64, Lattice)> = Vec::new();
    for item in on {
        while chain.len() >= 2 {
            let (t0, p0) = chain[chain.len() - 2];
            let (t1, p1) = chain[chain.len() - 1];
            let (t2, p2) = item;
            // drop p1 if it lies weakly below the chord p0-p2
            let lhs = (h[&p1] - h[&p0]) * Rational::from_integer((t2 - t0) as i128);
            let rhs = (h[&p2] - h[&p0]) * Rational::from_integer((t1 - t0) as i128);
            if lhs <= rhs {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(item);
    }
    chain.into_iter().map(|(_, p)| p).collect()
}

impl RegularSubdivision {
    /// True iff every face is a lattice triangle of area 1/2 and they number `degree^2`.
    pub fn is_unimodular_triangulation(&self, degree: u8) -> bool {
        self.faces.len() == (degree as usize).pow(2) && self.faces.iter().all(|f| f.len() == 3 && double_area(f) == 1)
    }

    /// Edges of the subdivision with the faces on either side (`None` on the boundary).
    pub fn edges(&self) -> Vec<SubdivisionEdge> {
        let mut map: BTreeMap<(Lattice, Lattice), SubdivisionEdge> = BTreeMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            let n = f.len();
            for k in 0..n {
                let (a, b) = (f[k], f[(k + 1) % n]);
                let key = if a < b { (a, b) } else { (b, a) };
                let entry = map.entry(key).or_insert(SubdivisionEdge { ends: [key.0, key.1], faces: [fi, usize::MAX] });
                if entry.faces[0] != fi {
                    entry.faces[1] = fi;
                }
            }
        }
        map.into_values().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionEdge {
    pub ends: [Lattice; 2],
    /// Adjacent faces; the second is `usize::MAX` for a boundary edge.
    pub faces: [usize; 2],
}

impl SubdivisionEdge {
    pub fn is_interior(&self) -> bool {
        self.faces[1] != usize::MAX
    }
}

/// True iff `s` is a unimodular triangulation of the degree-4 triangle.
pub fn check_smooth(s: &RegularSubdivision) -> bool {
    s.is_unimodular_triangulation(4)
}

impl fmt::Display for RegularSubdivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for face in &self.faces {
            let pts: Vec<String> = face.iter().map(|(i, j)| format!("({i},{j})")).collect();
            writeln!(f, "face: {}", pts.join(" "))?;
        }
        Ok(())
    }
}

/// Valuations of the running example used throughout the documentation.
pub fn running_example_valuations() -> BTreeMap<Lattice, Rational> {
    [
        ((4, 0), 36),
        ((3, 1), 18),
        ((2, 2), 2),
        ((1, 3), 18),
        ((0, 4), 36),
        ((3, 0), 23),
        ((2, 1), 6),
        ((1, 2), 6),
        ((0, 3), 23),
        ((2, 0), 12),
        ((1, 1), 0),
        ((0, 2), 12),
        ((1, 0), 2),
        ((0, 1), 2),
        ((0, 0), 0),
    ]
    .into_iter()
    .map(|(p, v)| (p, Rational::from_integer(v)))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running_text() -> String {
        running_example_valuations().iter().map(|((i, j), v)| format!("A {i} {j} {v} 1\n")).collect()
    }

    #[test]
    fn parse_running_example() {
        let q = parse_quartic(&running_text()).unwrap();
        assert_eq!(q.heights()[&(2, 2)], Rational::from_integer(-2));
        assert_eq!(q.coeffs().len(), 15);
    }

    #[test]
    fn parse_errors() {
        let text: String = running_text().lines().filter(|l| !l.starts_with("A 4 0")).map(|l| format!("{l}\n")).collect();
        assert_eq!(parse_quartic(&text), Err(QuarticError::MissingCoefficient(4, 0)));
        let text = running_text().replace("A 1 1 0 1", "A 1 1 0 0");
        assert_eq!(parse_quartic(&text), Err(QuarticError::ZeroInitial(1, 1)));
        let text = format!("# comment\n{}B 1 2\n", running_text());
        assert_eq!(parse_quartic(&text), Err(QuarticError::MalformedLine(17)));
        let text = format!("{}A 5 0 1 1\n", running_text());
        assert_eq!(parse_quartic(&text), Err(QuarticError::WrongDegree(5, 0, 4)));
    }

    #[test]
    fn parses_fractions_and_symbols() {
        let text = running_text().replace("A 2 2 2 1", "A 2 2 5/2 sym").replace("A 1 1 0 1", "A 1 1 0 -3/4");
        let q = parse_quartic(&text).unwrap();
        assert_eq!(q.coeffs()[&(2, 2)].valuation, Rational::new(5, 2));
        assert!(q.is_symbolic());
        assert_eq!(q.assignment().get(Symbol::new(1, 1)), Some(&Rational::new(-3, 4)));
        assert_eq!(q.assignment().get(Symbol::new(2, 2)), None);
    }

    #[test]
    fn flat_heights_give_one_face() {
        let h: BTreeMap<Lattice, Rational> = lattice_points(4).into_iter().map(|p| (p, Rational::zero())).collect();
        let s = newton_subdivision(&h);
        assert_eq!(s.faces, vec![vec![(0, 0), (4, 0), (0, 4)]]);
        assert!(!check_smooth(&s));
    }

    #[test]
    fn running_example_is_smooth() {
        let q = QuarticInput::from_valuations(&running_example_valuations()).unwrap();
        let s = newton_subdivision(&q.heights());
        assert!(check_smooth(&s));
        let edges = s.edges();
        assert_eq!(edges.iter().filter(|e| e.is_interior()).count(), 18);
        assert_eq!(edges.iter().filter(|e| !e.is_interior()).count(), 12);
    }

    #[test]
    fn hull_is_counter_clockwise() {
        let h = convex_hull(&[(0, 0), (2, 0), (1, 1), (0, 2), (1, 0)]);
        assert_eq!(h, vec![(0, 0), (2, 0), (0, 2)]);
        assert_eq!(double_area(&h), 4);
    }
}
