//! Exact planar geometry over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::residue::Rational;

/// An integer direction vector.
pub type Dir = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i128, y: i128) -> Self {
        Point::new(Rational::from_integer(x), Rational::from_integer(y))
    }

    pub fn offset(self, d: Dir, t: Rational) -> Point {
        Point::new(self.x + t * Rational::from(d.0 as i128), self.y + t * Rational::from(d.1 as i128))
    }

    pub fn midpoint(self, other: Point) -> Point {
        let half = Rational::new(1, 2);
        Point::new((self.x + other.x) * half, (self.y + other.y) * half)
    }

    pub fn dot(self, other: Point) -> Rational {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> Rational {
        self.x * other.y - self.y * other.x
    }

    pub fn dir(d: Dir) -> Point {
        Point::from_ints(d.0 as i128, d.1 as i128)
    }

    /// The `l_inf` norm, used for the bounding box of the arrangement.
    pub fn max_abs(self) -> Rational {
        let (a, b) = (self.x.abs(), self.y.abs());
        if a > b {
            a
        } else {
            b
        }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<Rational> for Point {
    type Output = Point;
    fn mul(self, t: Rational) -> Point {
        Point::new(self.x * t, self.y * t)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn cross(a: Dir, b: Dir) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Splits a nonzero integer vector into its primitive direction and lattice length.
pub fn primitive(v: Dir) -> (Dir, i64) {
    let g = v.0.gcd(&v.1);
    assert!(g != 0, "zero vector has no direction");
    ((v.0 / g, v.1 / g), g)
}

/// Primitive integer direction of a nonzero rational vector.
pub fn primitive_of(v: Point) -> Dir {
    let l = v.x.denom().lcm(v.y.denom());
    let a = (v.x * Rational::from_integer(l)).to_integer();
    let b = (v.y * Rational::from_integer(l)).to_integer();
    let (d, _) = primitive((a as i64, b as i64));
    d
}

/// A closed segment, or a closed ray when `end` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Piece {
    pub start: Point,
    pub dir: Dir,
    /// Parameter of the far end along `dir`; `None` for an unbounded ray.
    pub end: Option<Rational>,
}

impl Piece {
    pub fn segment(a: Point, b: Point) -> Piece {
        let d = primitive_of(b - a);
        let t = param_along(a, d, b);
        Piece { start: a, dir: d, end: Some(t) }
    }

    pub fn ray(a: Point, d: Dir) -> Piece {
        Piece { start: a, dir: d, end: None }
    }

    pub fn point(a: Point) -> Piece {
        Piece { start: a, dir: (1, 0), end: Some(Rational::zero()) }
    }

    pub fn is_point(&self) -> bool {
        self.end == Some(Rational::zero())
    }

    pub fn at(&self, t: Rational) -> Point {
        self.start.offset(self.dir, t)
    }

    pub fn end_point(&self) -> Option<Point> {
        self.end.map(|t| self.at(t))
    }

    pub fn contains(&self, p: Point) -> bool {
        let v = p - self.start;
        if v.cross(Point::dir(self.dir)) != Rational::zero() {
            return false;
        }
        let t = param_along(self.start, self.dir, p);
        t >= Rational::zero() && self.end.is_none_or(|e| t <= e)
    }

    /// Intersection with another piece: nothing, a point, or a collinear overlap.
    pub fn intersect(&self, other: &Piece) -> Option<Piece> {
        if self.is_point() {
            return other.contains(self.start).then_some(*self);
        }
        if other.is_point() {
            return self.contains(other.start).then_some(*other);
        }
        let d1 = Point::dir(self.dir);
        let d2 = Point::dir(other.dir);
        let denom = d1.cross(d2);
        let w = other.start - self.start;
        if denom != Rational::zero() {
            let t = w.cross(d2) / denom;
            let s = w.cross(d1) / denom;
            let ok_t = t >= Rational::zero() && self.end.is_none_or(|e| t <= e);
            let ok_s = s >= Rational::zero() && other.end.is_none_or(|e| s <= e);
            return (ok_t && ok_s).then(|| Piece::point(self.at(t)));
        }
        if w.cross(d1) != Rational::zero() {
            return None;
        }
        // collinear: intersect parameter intervals along self.dir
        let s0 = param_along(self.start, self.dir, other.start);
        let sign = if d1.dot(d2).is_positive() { 1 } else { -1 };
        let (lo2, hi2) = match (other.end, sign) {
            (Some(e), 1) => (Some(s0), Some(s0 + e)),
            (Some(e), _) => (Some(s0 - e), Some(s0)),
            (None, 1) => (Some(s0), None),
            (None, _) => (None, Some(s0)),
        };
        let lo = match lo2 {
            Some(l) if l > Rational::zero() => l,
            _ => Rational::zero(),
        };
        let hi = match (self.end, hi2) {
            (Some(a), Some(b)) => Some(if a < b { a } else { b }),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        };
        match hi {
            Some(h) if h < lo => None,
            Some(h) if h == lo => Some(Piece::point(self.at(lo))),
            _ => Some(Piece { start: self.at(lo), dir: self.dir, end: hi.map(|h| h - lo) }),
        }
    }
}

/// Parameter `t` with `p = a + t d` for a point on the line through `a` with direction `d`.
pub fn param_along(a: Point, d: Dir, p: Point) -> Rational {
    let v = p - a;
    if d.0 != 0 {
        v.x / Rational::from(d.0 as i128)
    } else {
        v.y / Rational::from(d.1 as i128)
    }
}
