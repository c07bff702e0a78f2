//! Shape labels of bitangent classes.
//!
//! A class is matched by its dimension, boundedness, lifting pattern and the way
//! its cells sit on the curve. Where these data leave several catalogue letters
//! possible, the label keeps all of them instead of picking one.

use std::collections::BTreeMap;
use std::fmt;

use super::BitangentClass;
use crate::geometry::{primitive_of, Point};
use crate::lifting::Position;
use crate::tropcurve::TropicalCurve;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeBase {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    N,
    O,
    P,
    Q,
    R,
    S,
    T,
    U,
    V,
    W,
    Y,
    BB,
    CC,
    EE,
    II,
}

impl ShapeBase {
    /// Shapes whose classes are bounded.
    pub fn is_compact(self) -> bool {
        use ShapeBase::*;
        matches!(self, A | B | C | D | E | F | G | W)
    }
}

impl fmt::Display for ShapeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Member of the orbit under permuting the three coordinates modulo `x <-> y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    A,
    B,
    C,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::A => "a",
            Orientation::B => "b",
            Orientation::C => "c",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    I,
    II,
    III,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShapeLabel {
    /// Catalogue letters compatible with the class, sorted; a single entry when resolved.
    pub candidates: Vec<ShapeBase>,
    pub orientation: Option<Orientation>,
    pub variant: Option<Variant>,
    /// The class matches the catalogue picture after swapping `x` and `y`.
    pub mirrored: bool,
}

impl ShapeLabel {
    pub fn new(base: ShapeBase, orientation: Option<Orientation>, variant: Option<Variant>) -> Self {
        ShapeLabel { candidates: vec![base], orientation, variant, mirrored: false }
    }

    pub fn ambiguous(mut candidates: Vec<ShapeBase>) -> Self {
        candidates.sort();
        ShapeLabel { candidates, orientation: None, variant: None, mirrored: false }
    }

    pub(super) fn unknown() -> Self {
        ShapeLabel::ambiguous(Vec::new())
    }

    pub fn base(&self) -> Option<ShapeBase> {
        match self.candidates.as_slice() {
            [b] => Some(*b),
            _ => None,
        }
    }

    /// True if every compatible letter is a compact shape.
    pub fn is_compact(&self) -> bool {
        !self.candidates.is_empty() && self.candidates.iter().all(|b| b.is_compact())
    }

    pub fn has(&self, b: ShapeBase) -> bool {
        self.candidates.contains(&b)
    }
}

impl fmt::Display for ShapeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.candidates.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", names.join("|"))?;
        if let Some(o) = self.orientation {
            write!(f, "{o}")?;
        }
        if let Some(v) = self.variant {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Orientation of a segment or ray direction: horizontal, diagonal, vertical.
fn orientation_of(d: (i64, i64)) -> Option<Orientation> {
    match d {
        (_, 0) => Some(Orientation::A),
        (0, _) => Some(Orientation::C),
        (a, b) if a == b => Some(Orientation::B),
        _ => None,
    }
}

fn sign_normal(d: (i64, i64)) -> (i64, i64) {
    if d.0 < 0 || (d.0 == 0 && d.1 < 0) {
        (-d.0, -d.1)
    } else {
        d
    }
}

/// True if all representatives are solved and touch the curve in the same kinds
/// of components at the same positions on the line.
fn same_tangency_kinds(b: &BitangentClass) -> bool {
    let sigs: Vec<Vec<(&'static str, Position)>> = b
        .solved()
        .map(|d| {
            let mut v: Vec<_> = d.tangencies.iter().map(|t| (t.kind.name(), t.position)).collect();
            v.sort_by_key(|(n, p)| (*n, format!("{p:?}")));
            v
        })
        .collect();
    sigs.len() == b.representatives.len() && sigs.windows(2).all(|w| w[0] == w[1])
}

pub(super) fn classify(b: &BitangentClass, curve: &TropicalCurve) -> Result<ShapeLabel, String> {
    use ShapeBase::*;
    let pattern = b.pattern();
    let signature = || {
        format!(
            "dim {} {} pattern {:?} cells {}",
            b.dim,
            if b.bounded { "bounded" } else { "unbounded" },
            pattern,
            b.cells.len()
        )
    };
    let expect = |p: &[u32]| match &pattern {
        Some(q) => q.as_slice() == p,
        None => true,
    };
    let edges: Vec<_> = b.cells.iter().filter(|c| c.dim == 1).collect();
    let mut degree: BTreeMap<Point, usize> = BTreeMap::new();
    for e in &edges {
        for p in &e.points {
            *degree.entry(*p).or_default() += 1;
        }
    }
    let reps_on_curve = b
        .representatives
        .iter()
        .filter(|r| r.multiplicity != Some(0) && curve.contains(r.line.vertex))
        .count();

    let label = match (b.dim, b.bounded) {
        (0, _) => {
            if !expect(&[4]) {
                return Err(signature());
            }
            if curve.contains(b.anchor()) {
                ShapeLabel::new(C, None, None)
            } else {
                ShapeLabel::ambiguous(vec![A, B])
            }
        }
        (1, true) => {
            let dirs: std::collections::BTreeSet<_> =
                edges.iter().map(|e| sign_normal(primitive_of(e.points[1] - e.points[0]))).collect();
            if dirs.len() != 1 || !expect(&[2, 2]) {
                return Err(signature());
            }
            let orientation = orientation_of(*dirs.iter().next().unwrap());
            let on = edges.iter().filter(|e| e.on_curve).count();
            let ends: Vec<Point> = degree.iter().filter(|(_, &d)| d == 1).map(|(p, _)| *p).collect();
            let inner_touch = degree.iter().any(|(p, &d)| d == 2 && curve.contains(*p));
            let base = if on == edges.len() {
                G
            } else if on > 0 {
                D
            } else if inner_touch {
                return Err(signature());
            } else {
                match ends.iter().filter(|p| curve.contains(**p)).count() {
                    0 => E,
                    1 => F,
                    _ => return Err(signature()),
                }
            };
            ShapeLabel::new(base, orientation, None)
        }
        (1, false) => {
            if pattern.as_deref() == Some(&[4]) {
                let ray = edges.iter().find(|e| e.unbounded).ok_or_else(signature)?;
                let d = sign_normal(primitive_of(ray.points[1] - ray.points[0]));
                let orientation = match orientation_of(d) {
                    Some(Orientation::B) => Orientation::B,
                    Some(_) => Orientation::A,
                    None => return Err(signature()),
                };
                ShapeLabel::new(H, Some(orientation), None)
            } else if !expect(&[2, 2]) {
                return Err(signature());
            } else if degree.values().any(|&d| d >= 3) {
                ShapeLabel::ambiguous(vec![N, V])
            } else {
                ShapeLabel::ambiguous(vec![O, P, Q, R, S, U])
            }
        }
        (2, true) => {
            if !expect(&[1, 1, 1, 1]) {
                return Err(signature());
            }
            ShapeLabel::new(W, None, None)
        }
        (2, false) => match pattern.as_deref() {
            Some([2, 2]) if same_tangency_kinds(b) => ShapeLabel::new(T, None, None),
            Some([2, 2]) => ShapeLabel::ambiguous(vec![T, U, V]),
            Some([2, 1, 1]) => ShapeLabel::new(II, None, None),
            Some([1, 1, 1, 1]) => match reps_on_curve {
                1 => ShapeLabel::ambiguous(vec![Y, EE]),
                2 => ShapeLabel::ambiguous(vec![BB, CC]),
                _ => ShapeLabel::ambiguous(vec![Y, BB, CC, EE]),
            },
            None => ShapeLabel::ambiguous(vec![T, Y, BB, CC, EE, II]),
            _ => return Err(signature()),
        },
        _ => return Err(signature()),
    };
    Ok(label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_print_letters_orientation_and_variant() {
        assert_eq!(ShapeLabel::new(ShapeBase::Y, Some(Orientation::A), Some(Variant::III)).to_string(), "YaIII");
        assert_eq!(ShapeLabel::ambiguous(vec![ShapeBase::V, ShapeBase::T, ShapeBase::U]).to_string(), "T|U|V");
        assert_eq!(ShapeLabel::new(ShapeBase::BB, Some(Orientation::B), None).to_string(), "BBb");
    }

    #[test]
    fn compactness_needs_every_candidate_compact() {
        assert!(ShapeLabel::ambiguous(vec![ShapeBase::A, ShapeBase::B]).is_compact());
        assert!(!ShapeLabel::ambiguous(vec![ShapeBase::A, ShapeBase::H]).is_compact());
        assert!(!ShapeLabel::unknown().is_compact());
        assert_eq!(ShapeLabel::ambiguous(vec![ShapeBase::N, ShapeBase::V]).base(), None);
    }

    #[test]
    fn orientation_follows_direction() {
        assert_eq!(orientation_of((3, 0)), Some(Orientation::A));
        assert_eq!(orientation_of((0, -2)), orientation_of((0, 1)));
        assert_ne!(orientation_of((1, 1)), orientation_of((1, 0)));
    }
}
