//! Bitangent classes of a tropical quartic.

mod shape;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use shape::{Orientation, ShapeBase, ShapeLabel, Variant};

use crate::arrangement::{build_arrangement, Arrangement, Cell};
use crate::geometry::{Piece, Point};
use crate::lifting::{analyze_line, LiftError, LineLifts};
use crate::quartic::{check_smooth, Lattice, RegularSubdivision};
use crate::tropcurve::{is_bitangent, is_bitangent_fast, Carrier, TropicalCurve, TropicalLine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitangentError {
    #[error("expected 7 bitangent classes, found {0}")]
    NotSevenClasses(usize),
    #[error("the tropical curve is not smooth")]
    NotSmooth,
    #[error("bitangent class at {at} does not match a generic shape: {signature}")]
    UnknownShape { at: Point, signature: String },
    #[error(transparent)]
    Lift(#[from] LiftError),
}

/// The bitangent locus as a closed set of arrangement cells.
pub struct Locus {
    pub arrangement: Arrangement,
    pub cells: BTreeSet<Cell>,
    pub components: Vec<BTreeSet<Cell>>,
}

pub fn locus(curve: &TropicalCurve) -> Locus {
    let arrangement = build_arrangement(curve);
    let mut cells = BTreeSet::new();
    for c in arrangement.cells() {
        if is_bitangent_fast(curve, TropicalLine::new(arrangement.cell_rep(c))) {
            cells.insert(c);
        }
    }
    let mut closed = cells.clone();
    for c in &cells {
        closed.extend(arrangement.boundary(*c));
    }
    let components = arrangement.components(&closed);
    Locus { arrangement, cells: closed, components }
}

pub fn component_points(l: &Locus, comp: &BTreeSet<Cell>) -> Vec<Point> {
    comp.iter().filter(|c| c.dim() == 0).map(|c| l.arrangement.cell_rep(*c)).collect()
}

/// A closed cell of a class, clipped to the arrangement box when unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCell {
    pub dim: usize,
    /// One point, the two ends of an edge, or the corners of a face in order.
    pub points: Vec<Point>,
    pub unbounded: bool,
    pub on_curve: bool,
}

/// A tropical bitangent of a class with positive (or undetermined) lifting multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representative {
    pub line: TropicalLine,
    /// `None` when the local solver does not cover the line and the class total
    /// does not pin the value down.
    pub multiplicity: Option<u32>,
    /// True when the multiplicity was inferred from the class total rather than solved.
    pub inferred: bool,
    pub lifts: LineLifts,
}

/// Newton subdivision cells dual to the parts of the curve touched by tangencies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualMotif {
    pub triangles: BTreeSet<Vec<Lattice>>,
    pub edges: BTreeSet<[Lattice; 2]>,
}

impl DualMotif {
    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty() && self.edges.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitangentClass {
    pub cells: Vec<ClassCell>,
    pub dim: usize,
    pub bounded: bool,
    pub shape: ShapeLabel,
    pub representatives: Vec<Representative>,
    pub motif: DualMotif,
}

impl BitangentClass {
    /// Lexicographically smallest vertex, used as a stable position.
    pub fn anchor(&self) -> Point {
        self.cells.iter().filter(|c| c.dim == 0).map(|c| c.points[0]).min().expect("class has a vertex")
    }

    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        self.cells.iter().filter(|c| c.dim == 0).map(|c| c.points[0])
    }

    /// Sorted multiplicities, largest first, if all are known.
    pub fn pattern(&self) -> Option<Vec<u32>> {
        let mut p: Vec<u32> = self.representatives.iter().map(|r| r.multiplicity).collect::<Option<_>>()?;
        p.retain(|&m| m > 0);
        p.sort_unstable_by(|a, b| b.cmp(a));
        Some(p)
    }

    pub fn total_multiplicity(&self) -> Option<u32> {
        self.pattern().map(|p| p.iter().sum())
    }

    /// Representatives whose lifts were solved symbolically.
    pub fn solved(&self) -> impl Iterator<Item = &crate::lifting::LiftData> + '_ {
        self.representatives.iter().filter_map(|r| match &r.lifts {
            LineLifts::Lifts(d) => Some(d.as_ref()),
            _ => None,
        })
    }

    /// Representatives with positive multiplicity outside the local solver.
    pub fn unsolved(&self) -> impl Iterator<Item = &Representative> + '_ {
        self.representatives
            .iter()
            .filter(|r| matches!(r.lifts, LineLifts::Unsupported(_)) && r.multiplicity != Some(0))
    }
}

/// The seven bitangent classes, classified, with representatives and motifs.
pub fn bitangent_locus(curve: &TropicalCurve, s: &RegularSubdivision) -> Result<Vec<BitangentClass>, BitangentError> {
    if !check_smooth(s) {
        return Err(BitangentError::NotSmooth);
    }
    let l = locus(curve);
    if l.components.len() != 7 {
        return Err(BitangentError::NotSevenClasses(l.components.len()));
    }
    let mut out = Vec::with_capacity(7);
    for comp in &l.components {
        out.push(build_class(curve, &l.arrangement, comp)?);
    }
    Ok(out)
}

fn build_class(curve: &TropicalCurve, arr: &Arrangement, comp: &BTreeSet<Cell>) -> Result<BitangentClass, BitangentError> {
    let cells: Vec<ClassCell> = comp
        .iter()
        .map(|&c| {
            let points = match c {
                Cell::Vertex(k) => vec![arr.vertices[k]],
                Cell::Edge(k) => arr.edges[k].ends.iter().map(|&v| arr.vertices[v]).collect(),
                Cell::Face(k) => arr.faces[k].boundary.iter().map(|&v| arr.vertices[v]).collect(),
            };
            ClassCell { dim: c.dim(), points, unbounded: arr.touches_box(c), on_curve: curve.contains(arr.cell_rep(c)) }
        })
        .collect();
    let dim = cells.iter().map(|c| c.dim).max().unwrap_or(0);
    let bounded = cells.iter().all(|c| !c.unbounded);
    let representatives = liftable_representatives(curve, cells.iter().filter(|c| c.dim == 0).map(|c| c.points[0]))?;
    let mut class = BitangentClass {
        cells,
        dim,
        bounded,
        shape: ShapeLabel::unknown(),
        representatives,
        motif: DualMotif::default(),
    };
    class.shape = classify_shape(&class, curve)?;
    class.motif = dual_motif(curve, arr, comp);
    Ok(class)
}

/// Runs the local lifting analysis at every vertex of a class and keeps the lines
/// with lifts. Multiplicities outside the solver are inferred when the class total
/// of four leaves exactly one value.
pub fn liftable_representatives(
    curve: &TropicalCurve,
    vertices: impl IntoIterator<Item = Point>,
) -> Result<Vec<Representative>, BitangentError> {
    let mut reps = Vec::new();
    for p in vertices {
        let line = TropicalLine::new(p);
        let lifts = analyze_line(curve, line)?;
        let multiplicity = lifts.multiplicity();
        if multiplicity == Some(0) {
            continue;
        }
        reps.push(Representative { line, multiplicity, inferred: false, lifts });
    }
    let known: u32 = reps.iter().filter_map(|r| r.multiplicity).sum();
    let open: Vec<usize> = (0..reps.len()).filter(|&i| reps[i].multiplicity.is_none()).collect();
    if known >= 4 {
        for &i in &open {
            reps[i].multiplicity = Some(0);
            reps[i].inferred = true;
        }
    } else if open.len() == 1 {
        reps[open[0]].multiplicity = Some(4 - known);
        reps[open[0]].inferred = true;
    }
    reps.retain(|r| r.multiplicity != Some(0) || !r.inferred);
    Ok(reps)
}

pub fn classify_shape(b: &BitangentClass, curve: &TropicalCurve) -> Result<ShapeLabel, BitangentError> {
    shape::classify(b, curve).map_err(|signature| BitangentError::UnknownShape { at: b.anchor(), signature })
}

fn carrier_pieces(c: &Carrier) -> Vec<Piece> {
    match c {
        Carrier::Point(p) => vec![Piece::point(*p)],
        Carrier::Segment(a, b) => vec![Piece::segment(*a, *b)],
        Carrier::Ray(a, d) => vec![Piece::ray(*a, *d)],
        Carrier::Star { center, arms } => arms
            .iter()
            .map(|(r, len)| Piece { start: *center, dir: r.direction(), end: *len })
            .collect(),
    }
}

/// Subdivision triangles and edges dual to curve vertices and edges that carry a
/// tangency of some bitangent in the class.
pub fn dual_motif(curve: &TropicalCurve, arr: &Arrangement, comp: &BTreeSet<Cell>) -> DualMotif {
    let mut motif = DualMotif::default();
    let one = crate::residue::Rational::from_integer(1);
    let half = crate::residue::Rational::new(1, 2);
    for &c in comp {
        let (ok, comps) = is_bitangent(curve, TropicalLine::new(arr.cell_rep(c)));
        if !ok {
            continue;
        }
        for ic in comps.iter().filter(|ic| ic.total_mult >= 2) {
            for piece in carrier_pieces(&ic.carrier) {
                let mut ts: BTreeMap<crate::residue::Rational, ()> = BTreeMap::new();
                ts.insert(crate::residue::Rational::from_integer(0), ());
                if let Some(e) = piece.end {
                    ts.insert(e, ());
                }
                for v in &curve.vertices {
                    if piece.contains(v.point) {
                        ts.insert(crate::geometry::param_along(piece.start, piece.dir, v.point), ());
                    }
                }
                let ts: Vec<_> = ts.into_keys().collect();
                let mut probes: Vec<Point> = ts.iter().map(|&t| piece.at(t)).collect();
                probes.extend(ts.windows(2).map(|w| piece.at((w[0] + w[1]) * half)));
                if piece.end.is_none() {
                    probes.push(piece.at(*ts.last().unwrap() + one));
                }
                for p in probes {
                    let mut cell = curve.dual_cell(p);
                    cell.sort();
                    match cell.len() {
                        2 => {
                            motif.edges.insert([cell[0], cell[1]]);
                        }
                        3.. => {
                            motif.triangles.insert(cell);
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    motif
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quartic::{newton_subdivision, running_example_valuations, QuarticInput};
    use crate::tropcurve::build_curve;

    fn running_classes() -> Vec<BitangentClass> {
        let q = QuarticInput::from_valuations(&running_example_valuations()).unwrap();
        let s = newton_subdivision(&q.heights());
        bitangent_locus(&build_curve(&s, 4), &s).unwrap()
    }

    #[test]
    fn running_example_has_seven_classes_of_total_four() {
        let classes = running_classes();
        assert_eq!(classes.len(), 7);
        for c in &classes {
            assert_eq!(c.total_multiplicity(), Some(4), "class at {}", c.anchor());
            assert!(!c.motif.is_empty());
        }
    }

    #[test]
    fn segment_class_away_from_curve_is_shape_e() {
        let classes = running_classes();
        let e: Vec<_> = classes.iter().filter(|c| c.shape.base() == Some(ShapeBase::E)).collect();
        assert!(!e.is_empty());
        for c in e {
            assert_eq!(c.pattern(), Some(vec![2, 2]));
            assert!(c.bounded);
        }
    }
}
