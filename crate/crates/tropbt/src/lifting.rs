//! Lifting tropical bitangents: local lifting equations, twist predicates and
//! rationality of lifts over the valued field.
//!
//! A lift of a tropical line is written `y + M + N x` with initials `m`, `n`; the
//! line coefficients are indexed by the lattice points `(0,0) -> m`, `(1,0) -> n`,
//! `(0,1) -> 1`. Each tangency component of `Λ ∩ Γ` contributes one binomial
//! equation `m^α n^β = R` in the initials; two components determine `(m, n)` up to
//! finitely many choices.
//!
//! Local computations restrict to a coset `x^w = c0` of the torus, parametrized by
//! `τ` as `x^a = c0^(g·a) τ^(φ(a))` where `g·w = 1` and `φ(a) = w × a`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::geometry::{Dir, Point};
use crate::quartic::Lattice;
use crate::residue::{
    square_class, InitialAssignment, Rational, ResidueError, ResidueField, SquareClassExpr,
};
use crate::symbolic::{bits, LaurentPoly, RootTable, Term, TermSum};
use crate::tropcurve::{is_bitangent, ComponentKind, IntersectionComponent, LineRay, TropicalCurve, TropicalLine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("unsupported local case: {0}")]
    UnsupportedLocalCase(String),
    #[error("local solution contradicts the tropical data: {0}")]
    Inconsistent(String),
    #[error("the lift is not defined over the residue field")]
    NotRationalLift,
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

fn unsupported<T>(msg: impl Into<String>) -> Result<T, LiftError> {
    Err(LiftError::UnsupportedLocalCase(msg.into()))
}

/// Parity test on lattice points: 0 iff `r ≡ r' (mod 2)`.
pub fn delta(r: Lattice, r2: Lattice) -> u8 {
    u8::from((r.0 - r2.0).rem_euclid(2) != 0 || (r.1 - r2.1).rem_euclid(2) != 0)
}

/// A bounded edge with dual `[q, q']` flanked by triangles with apexes `r`, `r'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistContext {
    pub q: Lattice,
    pub q2: Lattice,
    pub r: Lattice,
    pub r2: Lattice,
}

impl TwistContext {
    pub fn delta(&self) -> u8 {
        delta(self.r, self.r2)
    }

    /// `(-1)^δ a_r a_r' (a_q a_q')^δ`.
    pub fn radicand(&self) -> SquareClassExpr {
        let a = |p: Lattice| SquareClassExpr::a(p.0 as u8, p.1 as u8);
        let base = a(self.r).mul(&a(self.r2));
        if self.delta() == 1 {
            base.mul(&a(self.q)).mul(&a(self.q2)).neg()
        } else {
            base
        }
    }
}

pub fn is_twisted(ctx: &TwistContext, asg: &InitialAssignment, k: ResidueField) -> Result<bool, LiftError> {
    Ok(square_class(&ctx.radicand(), asg, k)?.is_none_or(|c| c != crate::residue::SquareClass::ONE))
}

/// Initials of the line coefficients: `b_(0,0) = m`, `b_(1,0) = n`, `b_(0,1) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineInitials {
    pub m: SquareClassExpr,
    pub n: SquareClassExpr,
}

impl LineInitials {
    pub fn b(&self, s: Lattice) -> SquareClassExpr {
        match s {
            (0, 0) => self.m.clone(),
            (1, 0) => self.n.clone(),
            _ => SquareClassExpr::constant(1),
        }
    }
}

/// Segment tangency strictly inside an edge `[q, q']` of both the curve and the line,
/// with the line's vertex at the curve vertex of the triangle `{q, q', r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelativeTwist {
    pub q: Lattice,
    pub q2: Lattice,
    pub r: Lattice,
    pub ray: LineRay,
}

impl RelativeTwist {
    /// `[s, s']` oriented like `[q, q']`, and the remaining line monomial.
    fn line_points(&self) -> (Lattice, Lattice, Lattice) {
        let [s, s2] = self.ray.dual();
        let w = (s2.0 - s.0, s2.1 - s.1);
        if (self.q2.0 - self.q.0, self.q2.1 - self.q.1) == w {
            (s, s2, self.ray.opposite())
        } else {
            (s2, s, self.ray.opposite())
        }
    }

    /// 0 iff `r - q` and `r' - s` are parallel mod 2.
    pub fn delta(&self) -> u8 {
        let (s, _, r2) = self.line_points();
        let u = (self.r.0 - self.q.0, self.r.1 - self.q.1);
        let v = (r2.0 - s.0, r2.1 - s.1);
        u8::from((u.0 * v.1 - u.1 * v.0).rem_euclid(2) != 0)
    }
}

/// Relative twist: the ratio condition `b_s/b_s' = a_q/a_q'` holds and
/// `sqrt((-1)^(δ+1) a_r (a_q a_q')^δ b_r' a_q b_s)` lies in `k`.
pub fn is_relatively_twisted(
    ctx: &RelativeTwist,
    line: &LineInitials,
    asg: &InitialAssignment,
    k: ResidueField,
) -> Result<bool, LiftError> {
    let a = |p: Lattice| SquareClassExpr::a(p.0 as u8, p.1 as u8);
    let (s, s2, r2) = ctx.line_points();
    let lhs = line.b(s).div(&line.b(s2));
    let rhs = a(ctx.q).div(&a(ctx.q2));
    if !same_value(&lhs, &rhs, asg, k)? {
        return Ok(false);
    }
    let d = ctx.delta();
    let mut rad = a(ctx.r).mul(&line.b(r2)).mul(&a(ctx.q)).mul(&line.b(s));
    if d == 1 {
        rad = rad.mul(&a(ctx.q)).mul(&a(ctx.q2));
    }
    if d == 0 {
        rad = rad.neg();
    }
    Ok(square_class(&rad, asg, k)? == Some(crate::residue::SquareClass::ONE))
}

fn same_value(a: &SquareClassExpr, b: &SquareClassExpr, asg: &InitialAssignment, k: ResidueField) -> Result<bool, LiftError> {
    let q = a.div(b);
    if q.radicand().is_some() {
        return Ok(false);
    }
    let e = q.monomial().eval(asg, k)?;
    let c = k.elem(&q.coeff())?;
    Ok(k.mul(&e, &c) == k.one())
}

/// Vertex tangency of multiplicity 2 against a curve edge dual to `[r, s]`, with the
/// line edge dual to `[r', s']`: liftable over `k` iff `sqrt(-a_r a_s b_r' b_s')` is in `k`.
pub fn vertex_tangency_liftable(
    edge_dual: (Lattice, Lattice),
    line_dual: (Lattice, Lattice),
    asg: &InitialAssignment,
    line: &LineInitials,
    k: ResidueField,
) -> Result<bool, LiftError> {
    let a = |p: Lattice| SquareClassExpr::a(p.0 as u8, p.1 as u8);
    for b in [line.b(line_dual.0), line.b(line_dual.1)] {
        if b.radicand().is_some_and(|r| square_class(r, asg, k).ok().flatten() != Some(crate::residue::SquareClass::ONE)) {
            return Ok(false);
        }
    }
    let rad = a(edge_dual.0).mul(&a(edge_dual.1)).mul(&line.b(line_dual.0)).mul(&line.b(line_dual.1)).neg();
    Ok(square_class(&rad, asg, k)? == Some(crate::residue::SquareClass::ONE))
}

// ---------------------------------------------------------------------------
// local lifting engine

/// Exponents of `(m, n)` in the line coefficient `b_s`.
fn b_exps(s: Lattice) -> (i64, i64) {
    match s {
        (0, 0) => (1, 0),
        (1, 0) => (0, 1),
        (0, 1) => (0, 0),
        _ => panic!("{s:?} is not a monomial of a line"),
    }
}

fn b_term(s: Lattice, m: &Term, n: &Term) -> Term {
    match s {
        (0, 0) => m.clone(),
        (1, 0) => n.clone(),
        _ => Term::one(),
    }
}

fn sub(a: Lattice, b: Lattice) -> Lattice {
    (a.0 - b.0, a.1 - b.1)
}

fn dot(g: Dir, a: Lattice) -> i64 {
    g.0 * a.0 + g.1 * a.1
}

fn phi(w: Dir, a: Lattice) -> i64 {
    w.0 * a.1 - w.1 * a.0
}

/// `g` with `g·w = 1` for a primitive `w`.
fn bezout(w: Dir) -> Dir {
    let e = w.0.extended_gcd(&w.1);
    assert_eq!(e.gcd.abs(), 1, "{w:?} is not primitive");
    (e.x * e.gcd, e.y * e.gcd)
}

/// The torus point with `x^w = c0` and coset parameter `τ`.
fn coset_point(c0: &Term, tau: &Term, w: Dir, tab: &RootTable) -> (Term, Term) {
    let g = bezout(w);
    let x = tab.mul(&tab.pow(c0, g.0), &tab.pow(tau, -w.1));
    let y = tab.mul(&tab.pow(c0, g.1), &tab.pow(tau, w.0));
    (x, y)
}

/// Three points ordered by `φ`, required to take consecutive values.
fn consecutive(w: Dir, pts: &[Lattice]) -> Option<[Lattice; 3]> {
    let mut v = pts.to_vec();
    v.sort_by_key(|&a| phi(w, a));
    let ok = v.len() == 3 && phi(w, v[1]) == phi(w, v[0]) + 1 && phi(w, v[2]) == phi(w, v[1]) + 1;
    ok.then(|| [v[0], v[1], v[2]])
}

/// `m^α n^β = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalEquation {
    pub exps: (i64, i64),
    pub rhs: Term,
}

/// Where on the line a tangency point sits; selects the derivation `∂_L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    Ray(LineRay),
    Vertex,
}

impl Position {
    pub fn of(line: TropicalLine, p: Point) -> Position {
        let v = line.vertex;
        if p == v {
            Position::Vertex
        } else if p.y == v.y {
            Position::Ray(LineRay::Horizontal)
        } else if p.x == v.x {
            Position::Ray(LineRay::Vertical)
        } else {
            Position::Ray(LineRay::Diagonal)
        }
    }
}

/// A solved tangency: the initial point and the data needed for its Qtype factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tangency {
    pub kind: ComponentKind,
    /// Tropical tangency point.
    pub point: Point,
    pub position: Position,
    pub x: Term,
    pub y: Term,
    /// The root distinguishing the two lifts through this component, if any.
    pub doubling: Option<usize>,
    /// Initial form of the quartic at the tangency point.
    pub initial_form: LaurentPoly,
}

/// Everything known about the lifts of one tropical bitangent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftData {
    pub line: TropicalLine,
    pub table: RootTable,
    pub m: Term,
    pub n: Term,
    /// Root introduced when the two equations determine `(m, n)` only up to a sign.
    pub smith_root: Option<usize>,
    pub tangencies: Vec<Tangency>,
    pub multiplicity: u32,
}

impl LiftData {
    /// Roots whose sign choices enumerate the lifts.
    pub fn generators(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.smith_root.into_iter().collect();
        g.extend(self.tangencies.iter().filter_map(|t| t.doubling));
        g
    }

    /// Whether all lifts are defined over `k`.
    pub fn is_rational(&self, asg: &InitialAssignment, k: ResidueField) -> Result<bool, LiftError> {
        for g in self.generators() {
            let r = &self.table.radicands[g];
            if r.base_class(asg, k)? != crate::residue::SquareClass::ONE {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `m`, `n` as single-radicand expressions.
    pub fn line_initials(&self) -> Option<LineInitials> {
        Some(LineInitials { m: self.m.to_expr(&self.table)?, n: self.n.to_expr(&self.table)? })
    }
}

/// Outcome of the local analysis of one tropical line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineLifts {
    NotBitangent,
    /// A bitangent none of whose lifts has the prescribed tropicalization.
    NoLifts,
    Lifts(Box<LiftData>),
    Unsupported(String),
}

impl LineLifts {
    pub fn multiplicity(&self) -> Option<u32> {
        match self {
            LineLifts::NotBitangent | LineLifts::NoLifts => Some(0),
            LineLifts::Lifts(d) => Some(d.multiplicity),
            LineLifts::Unsupported(_) => None,
        }
    }
}

/// The equation a single tangency component imposes on `(m, n)`.
pub fn local_equation(kind: &ComponentKind) -> Result<LocalEquation, LiftError> {
    let tab = RootTable::new();
    let ratio = |s: Lattice, s2: Lattice, rhs: Term| {
        let (e1, e2) = (b_exps(s), b_exps(s2));
        LocalEquation { exps: (e1.0 - e2.0, e1.1 - e2.1), rhs }
    };
    match kind {
        ComponentKind::CurveVertexOnRay { ray, triangle } => {
            let [s, s2] = ray.dual();
            let w = sub(s2, s);
            let c0 = vertex_on_ray_c0(w, triangle, &tab)?;
            Ok(ratio(s, s2, c0.neg()))
        }
        ComponentKind::LineVertexOnEdge { edge } => {
            let w = sub(edge[1], edge[0]);
            let Some([lo, mid, hi]) = consecutive(w, &[(0, 0), (1, 0), (0, 1)]) else {
                return unsupported("line vertex on an edge without a double root");
            };
            let e = dot(bezout(w), lo) + dot(bezout(w), hi) - 2 * dot(bezout(w), mid);
            let c0 = tab.div(&Term::a(edge[0]).neg(), &Term::a(edge[1]));
            let (l, m, h) = (b_exps(lo), b_exps(mid), b_exps(hi));
            Ok(LocalEquation {
                exps: (2 * m.0 - l.0 - h.0, 2 * m.1 - l.1 - h.1),
                rhs: tab.pow(&c0, e).scale(Rational::from_integer(4)),
            })
        }
        ComponentKind::EdgeInRay { ray, edge, .. } | ComponentKind::EdgeFromLineVertex { ray, edge, .. } => {
            let [s, s2] = ray.dual();
            let (q, q2) = orient(sub(s2, s), *edge)?;
            Ok(ratio(s, s2, tab.div(&Term::a(q), &Term::a(q2))))
        }
        ComponentKind::TransverseCrossing { .. } => unsupported("transverse crossing has no tangency"),
        ComponentKind::LineVertexOnCurveVertex { .. } => unsupported("vertex of the line at a curve vertex"),
        ComponentKind::Other => unsupported("unclassified tangency component"),
    }
}

/// `[q, q']` with `q' - q = w`.
fn orient(w: Dir, edge: [Lattice; 2]) -> Result<(Lattice, Lattice), LiftError> {
    if sub(edge[1], edge[0]) == w {
        Ok((edge[0], edge[1]))
    } else if sub(edge[0], edge[1]) == w {
        Ok((edge[1], edge[0]))
    } else {
        unsupported("edge not parallel to the ray")
    }
}

/// For a curve vertex inside a ray with dual `[s, s']`: the value of `x^w` at the
/// tangency, `(a_mid^2 / (4 a_lo a_hi))^E`.
fn vertex_on_ray_c0(w: Dir, triangle: &[Lattice], tab: &RootTable) -> Result<Term, LiftError> {
    let Some([lo, mid, hi]) = consecutive(w, triangle) else {
        return unsupported("curve vertex on a ray without a double root");
    };
    let g = bezout(w);
    let e = dot(g, lo) + dot(g, hi) - 2 * dot(g, mid);
    if e.abs() != 1 {
        return unsupported("non-unimodular vertex tangency");
    }
    let ratio = tab.div(
        &tab.mul(&Term::a(mid), &Term::a(mid)),
        &tab.mul(&Term::a(lo), &Term::a(hi)).scale(Rational::from_integer(4)),
    );
    Ok(tab.pow(&ratio, e))
}

/// Solves `m^α_k n^β_k = R_k` for two equations. A determinant of ±2 adjoins one root.
fn solve_pair(eqs: &[LocalEquation; 2], tab: &mut RootTable) -> Result<(Term, Term, Option<usize>, u32), LiftError> {
    let a = [[eqs[0].exps.0, eqs[0].exps.1], [eqs[1].exps.0, eqs[1].exps.1]];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let r = [&eqs[0].rhs, &eqs[1].rhs];
    match det.abs() {
        1 => {
            let m = tab.mul(&tab.pow(r[0], a[1][1] * det), &tab.pow(r[1], -a[0][1] * det));
            let n = tab.mul(&tab.pow(r[0], -a[1][0] * det), &tab.pow(r[1], a[0][0] * det));
            Ok((m, n, None, 1))
        }
        2 => {
            let (u, d, v) = smith2(a);
            let y1 = tab.mul(&tab.pow(r[0], u[0][0] * d[0]), &tab.pow(r[1], u[0][1] * d[0]));
            let rad = tab.mul(&tab.pow(r[0], u[1][0] * d[1].signum()), &tab.pow(r[1], u[1][1] * d[1].signum()));
            if !rad.is_root_free() {
                return unsupported("nested radicand");
            }
            let y2 = tab.adjoin(rad);
            let idx = tab.radicands.len() - 1;
            let m = tab.mul(&tab.pow(&y1, v[0][0]), &tab.pow(&y2, v[0][1]));
            let n = tab.mul(&tab.pow(&y1, v[1][0]), &tab.pow(&y2, v[1][1]));
            Ok((m, n, Some(idx), 2))
        }
        0 => unsupported("tangency conditions do not fix the line"),
        _ => unsupported(format!("line system with determinant {det}")),
    }
}

type M2 = [[i64; 2]; 2];

fn mat_mul(a: M2, b: M2) -> M2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Unimodular `U`, `V` and `d` with `U A V = diag(d)`, `|d_0| = 1`.
fn smith2(a: M2) -> (M2, [i64; 2], M2) {
    let mut best = None;
    // small search space suffices for the exponent matrices of line coefficients
    let range = -3i64..=3;
    'outer: for u00 in range.clone() {
        for u01 in range.clone() {
            for u10 in range.clone() {
                for u11 in range.clone() {
                    if (u00 * u11 - u01 * u10).abs() != 1 {
                        continue;
                    }
                    let u = [[u00, u01], [u10, u11]];
                    let ua = mat_mul(u, a);
                    // column operations: clear the first row with a unimodular V
                    let (p, q) = (ua[0][0], ua[0][1]);
                    let e = p.extended_gcd(&q);
                    if e.gcd != 1 {
                        continue;
                    }
                    let v = [[e.x, -q], [e.y, p]];
                    let d = mat_mul(ua, v);
                    if d[0][1] == 0 && d[1][0] == 0 {
                        best = Some((u, [d[0][0], d[1][1]], v));
                        break 'outer;
                    }
                }
            }
        }
    }
    let (u, d, v) = best.expect("Smith form of a 2x2 matrix");
    debug_assert_eq!(mat_mul(mat_mul(u, a), v), [[d[0], 0], [0, d[1]]]);
    (u, d, v)
}

/// Local analysis of all lifts of a tropical line.
pub fn analyze_line(curve: &TropicalCurve, line: TropicalLine) -> Result<LineLifts, LiftError> {
    let (ok, comps) = is_bitangent(curve, line);
    if !ok {
        return Ok(LineLifts::NotBitangent);
    }
    let comps: Vec<&IntersectionComponent> = comps.iter().filter(|c| c.total_mult > 0).collect();
    if comps.iter().any(|c| matches!(c.kind, ComponentKind::TransverseCrossing { .. })) {
        return Ok(LineLifts::NoLifts);
    }
    if comps.len() != 2 {
        return Ok(LineLifts::Unsupported("single tangency component of multiplicity 4".into()));
    }
    let mut eqs = Vec::new();
    for c in &comps {
        match local_equation(&c.kind) {
            Ok(e) => eqs.push(e),
            Err(LiftError::UnsupportedLocalCase(s)) => return Ok(LineLifts::Unsupported(s)),
            Err(e) => return Err(e),
        }
    }
    let mut tab = RootTable::new();
    let (m, n, smith_root, det) = match solve_pair(&[eqs[0].clone(), eqs[1].clone()], &mut tab) {
        Ok(s) => s,
        Err(LiftError::UnsupportedLocalCase(s)) => return Ok(LineLifts::Unsupported(s)),
        Err(e) => return Err(e),
    };
    let val: BTreeMap<Lattice, Rational> = curve.heights.iter().map(|(&p, &h)| (p, -h)).collect();
    let (vm, vn) = line.valuations();
    if m.valuation(&val, &tab) != vm || n.valuation(&val, &tab) != vn {
        // the algebraic solution tropicalizes elsewhere
        return Ok(LineLifts::NoLifts);
    }
    let mut tangencies = Vec::new();
    for c in &comps {
        let t = match tangency(curve, line, c, &m, &n, &mut tab) {
            Ok(t) => t,
            Err(LiftError::UnsupportedLocalCase(s)) => return Ok(LineLifts::Unsupported(s)),
            Err(e) => return Err(e),
        };
        let (vx, vy) = (t.x.valuation(&val, &tab), t.y.valuation(&val, &tab));
        if vx != -t.point.x || vy != -t.point.y {
            return Err(LiftError::Inconsistent(format!(
                "tangency at {} has valuations ({vx}, {vy}) for line {}",
                t.point, line.vertex
            )));
        }
        tangencies.push(t);
    }
    let doublings = tangencies.iter().filter(|t| t.doubling.is_some()).count() as u32;
    let data = LiftData { line, table: tab, m, n, smith_root, tangencies, multiplicity: det << doublings };
    verify(&data)?;
    Ok(LineLifts::Lifts(Box::new(data)))
}

fn initial_form(cell: &[Lattice]) -> LaurentPoly {
    LaurentPoly::from_terms(cell.iter().map(|&a| (a, Term::a(a))))
}

fn tangency(
    curve: &TropicalCurve,
    line: TropicalLine,
    comp: &IntersectionComponent,
    m: &Term,
    n: &Term,
    tab: &mut RootTable,
) -> Result<Tangency, LiftError> {
    let point = match comp.tangency_points.as_slice() {
        [p] => *p,
        _ => return unsupported("component without a single tangency point"),
    };
    let two = Rational::from_integer(2);
    let kind = comp.kind.clone();
    let (x, y, doubling) = match &kind {
        ComponentKind::CurveVertexOnRay { ray, triangle } => {
            let [s, s2] = ray.dual();
            let w = sub(s2, s);
            let c0 = vertex_on_ray_c0(w, triangle, tab)?;
            let [_, mid, hi] = consecutive(w, triangle).expect("checked by the equation");
            let g = bezout(w);
            let mid_c = tab.mul(&Term::a(mid), &tab.pow(&c0, dot(g, mid)));
            let hi_c = tab.mul(&Term::a(hi), &tab.pow(&c0, dot(g, hi)));
            let tau = tab.div(&mid_c, &hi_c.scale(two)).neg();
            let (x, y) = coset_point(&c0, &tau, w, tab);
            (x, y, None)
        }
        ComponentKind::LineVertexOnEdge { edge } => {
            let w = sub(edge[1], edge[0]);
            let c0 = tab.div(&Term::a(edge[0]).neg(), &Term::a(edge[1]));
            let [_, mid, hi] = consecutive(w, &[(0, 0), (1, 0), (0, 1)]).expect("checked by the equation");
            let g = bezout(w);
            let mid_c = tab.mul(&b_term(mid, m, n), &tab.pow(&c0, dot(g, mid)));
            let hi_c = tab.mul(&b_term(hi, m, n), &tab.pow(&c0, dot(g, hi)));
            let tau = tab.div(&mid_c, &hi_c.scale(two)).neg();
            let (x, y) = coset_point(&c0, &tau, w, tab);
            (x, y, None)
        }
        ComponentKind::EdgeInRay { ray, edge, apexes } => {
            let [s, s2] = ray.dual();
            let w = sub(s2, s);
            let (q, q2) = orient(w, *edge)?;
            let c0 = tab.div(&Term::a(q).neg(), &Term::a(q2));
            let g = bezout(w);
            let terms: Vec<(i64, Term)> = apexes
                .iter()
                .map(|&r| (phi(w, r), tab.mul(&Term::a(r), &tab.pow(&c0, dot(g, r)))))
                .collect();
            let (tau, idx) = doubled_root(phi(w, q), terms, tab)?;
            let (x, y) = coset_point(&c0, &tau, w, tab);
            (x, y, Some(idx))
        }
        ComponentKind::EdgeFromLineVertex { ray, edge, apex } => {
            let [s, s2] = ray.dual();
            let t = ray.opposite();
            let w = sub(s2, s);
            let (q, q2) = orient(w, *edge)?;
            let c0 = tab.div(&Term::a(q).neg(), &Term::a(q2));
            let g = bezout(w);
            let u = (q.0 + t.0 - s.0, q.1 + t.1 - s.1);
            let h = tab.div(&tab.mul(&Term::a(q2), &b_term(t, m, n)), &b_term(s2, m, n)).neg();
            let terms = vec![
                (phi(w, *apex), tab.mul(&Term::a(*apex), &tab.pow(&c0, dot(g, *apex)))),
                (phi(w, u), tab.mul(&h, &tab.pow(&c0, dot(g, u)))),
            ];
            let (tau, idx) = doubled_root(phi(w, q), terms, tab)?;
            let (x, y) = coset_point(&c0, &tau, w, tab);
            (x, y, Some(idx))
        }
        _ => return unsupported(format!("tangency of kind {}", kind.name())),
    };
    Ok(Tangency {
        kind,
        point,
        position: Position::of(line, point),
        x,
        y,
        doubling,
        initial_form: initial_form(&curve.dual_cell(point)),
    })
}

/// Double root of `C_lo + δ τ + C_hi τ^2` in the coset parameter: `τ^2 = C_lo / C_hi`,
/// realized as `τ = ρ / C_hi` with `ρ^2 = C_lo C_hi`.
fn doubled_root(center: i64, terms: Vec<(i64, Term)>, tab: &mut RootTable) -> Result<(Term, usize), LiftError> {
    let mut terms = terms;
    terms.sort_by_key(|t| t.0);
    if terms.len() != 2 || terms[0].0 != center - 1 || terms[1].0 != center + 1 {
        return unsupported("flanking terms do not straddle the overlap");
    }
    let rad = tab.mul(&terms[0].1, &terms[1].1);
    if !rad.is_root_free() {
        return unsupported("nested radicand");
    }
    let rho = tab.adjoin(rad);
    let idx = tab.radicands.len() - 1;
    Ok((tab.div(&rho, &terms[1].1), idx))
}

fn line_poly(cell: &[Lattice], m: &Term, n: &Term) -> LaurentPoly {
    LaurentPoly::from_terms(cell.iter().map(|&s| (s, b_term(s, m, n))))
}

/// Substitutes every solved tangency into the initial forms of the quartic and of
/// the line and into their Wronskian; all must vanish identically.
fn verify(d: &LiftData) -> Result<(), LiftError> {
    let tab = &d.table;
    for t in &d.tangencies {
        let q = &t.initial_form;
        let l = line_poly(&d.line.dual_cell(t.point), &d.m, &d.n);
        let fail = |what: &str| Err(LiftError::Inconsistent(format!("{what} does not vanish at {}", t.point)));
        if !q.eval(&t.x, &t.y, tab).is_zero() {
            return fail("initial form of the quartic");
        }
        if !l.eval(&t.x, &t.y, tab).is_zero() {
            return fail("initial form of the line");
        }
        // for segment tangencies the local forms are the binomials at the midpoint
        let (qx, qy, lx, ly) = (q.d_dx(), q.d_dy(), l.d_dx(), l.d_dy());
        let mut w = TermSum::default();
        let one = Term::one();
        let e = |p: &LaurentPoly| p.eval(&t.x, &t.y, tab);
        for (a, b, sign) in [(&qx, &ly, 1), (&qy, &lx, -1)] {
            let (ea, eb) = (e(a), e(b));
            for ta in ea.terms() {
                let f = if sign == 1 { one.clone() } else { one.neg() };
                w.add_sum(&eb, tab, &tab.mul(&ta, &f));
            }
        }
        if !w.is_zero() {
            return fail("Wronskian");
        }
    }
    Ok(())
}

/// `ini(∂_L Q(P))` at one tangency: `2 ∂_y` on the horizontal ray, `(2/n) ∂_x` on the
/// vertical ray, `∂_y + (1/n) ∂_x` on the diagonal ray and at the vertex.
pub fn derivative_factor(d: &LiftData, t: &Tangency) -> Result<Term, LiftError> {
    let tab = &d.table;
    let q = &t.initial_form;
    let two = Rational::from_integer(2);
    let inv_n = tab.inv(&d.n);
    let mut s = TermSum::default();
    let dx = q.d_dx().eval(&t.x, &t.y, tab);
    let dy = q.d_dy().eval(&t.x, &t.y, tab);
    match t.position {
        Position::Ray(LineRay::Horizontal) => s.add_sum(&dy, tab, &Term::int(2)),
        Position::Ray(LineRay::Vertical) => s.add_sum(&dx, tab, &inv_n.scale(two)),
        _ => {
            s.add_sum(&dy, tab, &Term::one());
            s.add_sum(&dx, tab, &inv_n);
        }
    }
    if s.is_zero() {
        return Err(LiftError::Inconsistent(format!("derivative vanishes at tangency {}", t.point)));
    }
    s.single().ok_or_else(|| LiftError::Inconsistent(format!("derivative at {} is not a single term", t.point)))
}

/// Closed-form output of a single tangency component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSolution {
    /// `b_s / b_s'` for the ray carrying the tangency, when the component fixes it.
    pub ratio: Option<(Lattice, Lattice, SquareClassExpr)>,
    pub equation: LocalEquation,
    /// Tangency initials, when determined by the component alone.
    pub tangency: Option<(SquareClassExpr, SquareClassExpr)>,
    pub radicand: Option<SquareClassExpr>,
}

/// Solves the local lifting equations of one tangency component, as far as the
/// component determines them on its own.
pub fn solve_local_tangency(kind: &ComponentKind) -> Result<LocalSolution, LiftError> {
    let equation = local_equation(kind)?;
    let mut tab = RootTable::new();
    let expr = |t: &Term, tab: &RootTable| t.to_expr(tab).expect("at most one root");
    let ray_ratio = |ray: &LineRay, rhs: &Term, tab: &RootTable| {
        let [s, s2] = ray.dual();
        Some((s, s2, expr(rhs, tab)))
    };
    match kind {
        ComponentKind::CurveVertexOnRay { ray, triangle } => {
            let [s, s2] = ray.dual();
            let w = sub(s2, s);
            let c0 = vertex_on_ray_c0(w, triangle, &tab)?;
            let [_, mid, hi] = consecutive(w, triangle).expect("checked");
            let g = bezout(w);
            let mid_c = tab.mul(&Term::a(mid), &tab.pow(&c0, dot(g, mid)));
            let hi_c = tab.mul(&Term::a(hi), &tab.pow(&c0, dot(g, hi)));
            let tau = tab.div(&mid_c, &hi_c.scale(Rational::from_integer(2))).neg();
            let (x, y) = coset_point(&c0, &tau, w, &tab);
            Ok(LocalSolution {
                ratio: ray_ratio(ray, &equation.rhs, &tab),
                tangency: Some((expr(&x, &tab), expr(&y, &tab))),
                radicand: None,
                equation,
            })
        }
        ComponentKind::EdgeInRay { ray, edge, apexes } => {
            let [s, s2] = ray.dual();
            let w = sub(s2, s);
            let (q, q2) = orient(w, *edge)?;
            let c0 = tab.div(&Term::a(q).neg(), &Term::a(q2));
            let g = bezout(w);
            let terms: Vec<(i64, Term)> =
                apexes.iter().map(|&r| (phi(w, r), tab.mul(&Term::a(r), &tab.pow(&c0, dot(g, r))))).collect();
            let (tau, idx) = doubled_root(phi(w, q), terms, &mut tab)?;
            let (x, y) = coset_point(&c0, &tau, w, &tab);
            let rad = tab.radicands[idx].clone();
            Ok(LocalSolution {
                ratio: ray_ratio(ray, &equation.rhs, &tab),
                tangency: Some((expr(&x, &tab), expr(&y, &tab))),
                radicand: Some(expr(&rad, &tab)),
                equation,
            })
        }
        ComponentKind::EdgeFromLineVertex { ray, .. } => {
            Ok(LocalSolution { ratio: ray_ratio(ray, &equation.rhs, &tab), tangency: None, radicand: None, equation })
        }
        _ => Ok(LocalSolution { ratio: None, tangency: None, radicand: None, equation }),
    }
}

/// Whether lifts through a class are defined over `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftDecision {
    Zero,
    Four,
    Unknown(String),
}

impl fmt::Display for LiftDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftDecision::Zero => write!(f, "0"),
            LiftDecision::Four => write!(f, "4"),
            LiftDecision::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

/// Combines per-representative rationality into a class decision.
pub fn decide(reps: &[&LiftData], unsupported: usize, asg: &InitialAssignment, k: ResidueField) -> Result<LiftDecision, LiftError> {
    if reps.is_empty() {
        return Ok(LiftDecision::Unknown("no supported representative".into()));
    }
    let mut verdicts = Vec::new();
    for r in reps {
        verdicts.push(r.is_rational(asg, k)?);
    }
    let all = verdicts.iter().all(|&v| v);
    let none = verdicts.iter().all(|&v| !v);
    Ok(match (all, none) {
        (true, _) if unsupported == 0 => LiftDecision::Four,
        (_, true) if unsupported == 0 => LiftDecision::Zero,
        (true, _) | (_, true) => LiftDecision::Unknown("representative outside the local solver".into()),
        _ => LiftDecision::Unknown("representatives disagree".into()),
    })
}

/// Decision for a whole class, read off its solved representatives.
pub fn class_lifts_over(
    b: &crate::bitangent::BitangentClass,
    asg: &InitialAssignment,
    k: ResidueField,
) -> Result<LiftDecision, LiftError> {
    if k == ResidueField::Complex {
        return Ok(LiftDecision::Four);
    }
    let reps: Vec<&LiftData> = b.solved().collect();
    decide(&reps, b.unsolved().count(), asg, k)
}

/// Number of `k`-rational bitangents over all classes with a determinate decision.
pub fn rational_total(decisions: &[LiftDecision]) -> u32 {
    decisions.iter().map(|d| if *d == LiftDecision::Four { 4 } else { 0 }).sum()
}

/// Number of `k`-rational lifts among the lifts of one representative.
pub fn rational_lifts(d: &LiftData, asg: &InitialAssignment, k: ResidueField) -> Result<u32, LiftError> {
    Ok(if d.is_rational(asg, k)? { d.multiplicity } else { 0 })
}

/// Evaluates a term with all roots in `k`, choosing the canonical root of each.
pub fn term_class(
    t: &Term,
    tab: &RootTable,
    asg: &InitialAssignment,
    k: ResidueField,
) -> Result<crate::residue::SquareClass, LiftError> {
    let mut c = t.base_class(asg, k)?;
    for i in bits(t.roots) {
        let r = &tab.radicands[i];
        let e = SquareClassExpr::new(r.coeff, r.mono.clone());
        let rc = square_class(&SquareClassExpr::sqrt(&e)?, asg, k)?.ok_or(LiftError::NotRationalLift)?;
        c = k.class_mul(c, rc);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::Monomial;

    fn a(i: u8, j: u8) -> SquareClassExpr {
        SquareClassExpr::a(i, j)
    }

    #[test]
    fn parity() {
        assert_eq!(delta((0, 1), (2, 1)), 0);
        assert_eq!(delta((0, 0), (1, 1)), 1);
    }

    #[test]
    fn left_upper_tangency() {
        let kind = ComponentKind::CurveVertexOnRay { ray: LineRay::Horizontal, triangle: vec![(0, 1), (1, 2), (2, 2)] };
        let sol = solve_local_tangency(&kind).unwrap();
        let m = a(0, 1).mul(&a(2, 2)).div(&a(1, 2).pow(2)).scale(Rational::from_integer(-4));
        assert_eq!(sol.ratio.unwrap().2, m);
        let (x, y) = sol.tangency.unwrap();
        assert_eq!(x, a(1, 2).div(&a(2, 2)).scale(Rational::new(-1, 2)));
        assert_eq!(y, m.neg());
    }

    #[test]
    fn smith_forms() {
        for a in [[[2, -1], [0, 1]], [[1, 1], [1, -1]], [[0, 2], [1, 0]], [[2, 1], [1, 1]]] {
            let (u, d, v) = smith2(a);
            assert_eq!(mat_mul(mat_mul(u, a), v), [[d[0], 0], [0, d[1]]]);
            assert_eq!(d[0].abs(), 1);
        }
    }

    #[test]
    fn determinant_two_system() {
        // m^2 = a01, n = a10
        let eqs = [
            LocalEquation { exps: (2, 0), rhs: Term::a((0, 1)) },
            LocalEquation { exps: (0, 1), rhs: Term::a((1, 0)) },
        ];
        let mut tab = RootTable::new();
        let (m, n, root, det) = solve_pair(&eqs, &mut tab).unwrap();
        assert_eq!(det, 2);
        assert!(root.is_some());
        assert_eq!(tab.mul(&m, &m), Term::a((0, 1)));
        assert_eq!(n, Term::a((1, 0)));
        let _ = Monomial::one();
    }
}
