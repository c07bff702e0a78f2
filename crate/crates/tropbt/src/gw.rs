//! Grothendieck-Witt classes over the residue field, traces from quadratic
//! extensions, and quadratically enriched multiplicities of bitangent classes.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::bitangent::{BitangentClass, ShapeBase, ShapeLabel};
use crate::lifting::{derivative_factor, LiftData, LiftError, LineLifts};
use crate::residue::{
    Elem, InitialAssignment, Monomial, Rational, ResidueError, ResidueField, SquareClass, Symbol,
};
use crate::symbolic::{bits, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GwError {
    #[error("signed counts need the real numbers, not {0}")]
    WrongField(ResidueField),
    #[error("trace of zero")]
    ZeroElement,
    #[error("{0} is a square, so the extension is not a field")]
    SplitExtension(String),
    #[error("no multiplicity available for the class at {at}: {reason}")]
    Undetermined { at: String, reason: String },
    #[error("computed multiplicity {computed} disagrees with the table value {table} for shape {shape}")]
    TableMismatch { shape: String, computed: String, table: String },
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

/// `h` hyperbolic planes plus a diagonal form `<c_1> + ... + <c_n>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GWElement {
    pub h: u32,
    /// Sorted.
    pub classes: Vec<SquareClass>,
}

impl GWElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn hyperbolic(h: u32) -> Self {
        GWElement { h, classes: Vec::new() }
    }

    pub fn class(c: SquareClass) -> Self {
        GWElement { h: 0, classes: vec![c] }
    }

    pub fn degree(&self) -> u32 {
        2 * self.h + self.classes.len() as u32
    }

    /// Folds `<a> + <-a>` into `H` wherever `-a` is a different class. Over the
    /// complex numbers every form is a sum of `<1>`, so `H` unfolds to `2<1>`.
    pub fn normalized(mut self, k: ResidueField) -> Self {
        if k == ResidueField::Complex {
            let n = self.degree() as usize;
            return GWElement { h: 0, classes: vec![SquareClass::ONE; n] };
        }
        let mut count: BTreeMap<SquareClass, u32> = BTreeMap::new();
        for c in self.classes.drain(..) {
            *count.entry(c).or_default() += 1;
        }
        let keys: Vec<SquareClass> = count.keys().copied().collect();
        for c in keys {
            let n = k.class_neg(c);
            if n <= c {
                continue;
            }
            let (a, b) = (count.get(&c).copied().unwrap_or(0), count.get(&n).copied().unwrap_or(0));
            let f = a.min(b);
            self.h += f;
            count.insert(c, a - f);
            count.insert(n, b - f);
        }
        self.classes = count.into_iter().flat_map(|(c, n)| std::iter::repeat_n(c, n as usize)).collect();
        self
    }

    pub fn add(&self, other: &GWElement, k: ResidueField) -> GWElement {
        let mut classes = self.classes.clone();
        classes.extend(other.classes.iter().copied());
        GWElement { h: self.h + other.h, classes }.normalized(k)
    }

    /// Diagonal entries, with each `H` written as `<1> + <-1>`.
    fn diagonal(&self, k: ResidueField) -> Vec<SquareClass> {
        let mut d = self.classes.clone();
        for _ in 0..self.h {
            d.push(SquareClass::ONE);
            d.push(k.minus_one_class());
        }
        d
    }

    /// Isometry of the two forms over `k`: rank alone over the complex numbers,
    /// rank and signature over the reals, rank and discriminant over a finite
    /// field, and over the rationals rank, discriminant, signature and all Hasse
    /// invariants.
    pub fn equivalent(&self, other: &GWElement, k: ResidueField) -> bool {
        if self.degree() != other.degree() {
            return false;
        }
        let (a, b) = (self.diagonal(k), other.diagonal(k));
        let disc = |d: &[SquareClass]| d.iter().fold(SquareClass::ONE, |acc, &c| k.class_mul(acc, c));
        match k {
            ResidueField::Complex => true,
            ResidueField::Reals => signature(&a) == signature(&b),
            ResidueField::Prime(_) => disc(&a) == disc(&b),
            ResidueField::Rationals => {
                if disc(&a) != disc(&b) || signature(&a) != signature(&b) {
                    return false;
                }
                let mut primes: Vec<i128> = vec![2];
                for c in a.iter().chain(&b) {
                    primes.extend(prime_factors(c.rep().abs()));
                }
                primes.sort_unstable();
                primes.dedup();
                primes.iter().all(|&p| hasse(&a, p) == hasse(&b, p))
            }
        }
    }
}

impl fmt::Display for GWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.h {
            0 => {}
            1 => parts.push("H".to_string()),
            h => parts.push(format!("{h}H")),
        }
        let mut count: BTreeMap<SquareClass, u32> = BTreeMap::new();
        for c in &self.classes {
            *count.entry(*c).or_default() += 1;
        }
        for (c, n) in count {
            parts.push(if n == 1 { c.to_string() } else { format!("{n}{c}") });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub fn gw_add(x: &GWElement, y: &GWElement, k: ResidueField) -> GWElement {
    x.add(y, k)
}

fn signature(d: &[SquareClass]) -> i64 {
    d.iter().map(|c| if c.rep() < 0 { -1 } else { 1 }).sum()
}

/// `#<1> - #<-1>` over the reals.
pub fn signed_count(x: &GWElement, k: ResidueField) -> Result<i64, GwError> {
    if k != ResidueField::Reals {
        return Err(GwError::WrongField(k));
    }
    Ok(signature(&x.classes))
}

fn prime_factors(mut n: i128) -> Vec<i128> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Hilbert symbol `(a, b)_p` of squarefree integers; `p = -1` stands for the real place.
fn hilbert(a: i128, b: i128, p: i128) -> i8 {
    if p == -1 {
        return if a < 0 && b < 0 { -1 } else { 1 };
    }
    let split = |x: i128| if x % p == 0 { (1u32, x / p) } else { (0, x) };
    let (alpha, u) = split(a);
    let (beta, v) = split(b);
    let parity = |x: i128| x.rem_euclid(2) == 1;
    if p == 2 {
        let eps = |x: i128| parity((x - 1) / 2);
        let omega = |x: i128| parity((x * x - 1) / 8);
        let e = (eps(u) && eps(v)) ^ (alpha == 1 && omega(v)) ^ (beta == 1 && omega(u));
        return if e { -1 } else { 1 };
    }
    let leg = |x: i128| crate::residue::legendre(x, p as u64).expect("unit at p");
    let mut s: i8 = if alpha == 1 && beta == 1 && parity((p - 1) / 2) { -1 } else { 1 };
    if beta == 1 {
        s *= leg(u);
    }
    if alpha == 1 {
        s *= leg(v);
    }
    s
}

fn hasse(d: &[SquareClass], p: i128) -> i8 {
    let mut s = 1;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            s *= hilbert(d[i].rep(), d[j].rep(), p);
        }
    }
    s
}

/// `Tr_{k(sqrt b)/k} <r + s sqrt b>`.
pub fn trace_deg2(r: &Rational, s: &Rational, b: &Rational, k: ResidueField) -> Result<GWElement, GwError> {
    let (re, se, be) = (k.elem(r)?, k.elem(s)?, k.elem(b)?);
    if k.is_square(&be).unwrap_or(true) {
        return Err(GwError::SplitExtension(b.to_string()));
    }
    if k.is_zero(&re) {
        if k.is_zero(&se) {
            return Err(GwError::ZeroElement);
        }
        return Ok(GWElement::hyperbolic(1).normalized(k));
    }
    let two = k.elem(&Rational::from_integer(2))?;
    let first = k.class_of(&k.mul(&two, &re))?;
    let norm = k.elem(&(r * r - b * s * s))?;
    let second = k.class_of(&k.mul(&k.mul(&two, &be), &k.mul(&re, &norm)))?;
    Ok(GWElement { h: 0, classes: vec![first, second] }.normalized(k))
}

fn term_elem(t: &Term, asg: &InitialAssignment, k: ResidueField) -> Result<Elem, GwError> {
    debug_assert!(t.is_root_free());
    let e = k.mul(&k.elem(&t.coeff)?, &t.mono.eval(asg, k)?);
    if k.is_zero(&e) {
        return Err(ResidueError::ZeroEvaluation.into());
    }
    Ok(e)
}

/// The product of the two tangency factors `ini(∂_L Q(P))` of a lift, as a
/// term in the roots of the lift data.
pub fn qtype_of_lift(d: &LiftData) -> Result<Term, GwError> {
    let mut q = Term::one();
    for t in &d.tangencies {
        q = d.table.mul(&q, &derivative_factor(d, t)?);
    }
    Ok(q)
}

/// A generator root expressed through independent ones:
/// `rho = ±d * prod_{i in basis} rho_i` with `d` in `k`.
struct Dependent {
    generator: usize,
    d_class: SquareClass,
    basis_mask: u32,
}

/// Sum over all lifts of one representative of `<Qtype>`, with lifts defined over
/// an extension traced down to `k`. The lifts are the sign choices of the
/// generator roots; Galois orbits are tracked through a basis of the radicand
/// classes modulo squares.
pub fn representative_gw(d: &LiftData, asg: &InitialAssignment, k: ResidueField) -> Result<GWElement, GwError> {
    let gens = d.generators();
    let q = qtype_of_lift(d)?;
    let mut basis: Vec<(usize, SquareClass)> = Vec::new();
    let mut deps: Vec<Dependent> = Vec::new();
    for &g in &gens {
        let rg = term_elem(&d.table.radicands[g], asg, k)?;
        let cg = k.class_of(&rg)?;
        let mut found = None;
        for mask in 0u32..(1 << basis.len()) {
            let c = bits(mask).fold(SquareClass::ONE, |acc, i| k.class_mul(acc, basis[i].1));
            if c == cg {
                found = Some(mask);
                break;
            }
        }
        match found {
            None => basis.push((g, cg)),
            Some(mask) => {
                let mut quot = rg;
                for i in bits(mask) {
                    let ri = term_elem(&d.table.radicands[basis[i].0], asg, k)?;
                    quot = k.mul(&quot, &k.inv(&ri)?);
                }
                let d_class = k.root_class(&quot)?.expect("quotient of equal classes is a square");
                deps.push(Dependent { generator: g, d_class, basis_mask: mask });
            }
        }
    }
    let basis_classes: Vec<SquareClass> = basis.iter().map(|b| b.1).collect();
    let position = |g: usize| basis.iter().position(|b| b.0 == g);
    for r in bits(q.roots) {
        if !gens.contains(&r) {
            return Err(LiftError::Inconsistent(format!("Qtype involves root {r} that is not a generator")).into());
        }
    }
    let base = k.class_of(&term_elem(&Term { roots: 0, ..q.clone() }, asg, k)?)?;
    let mut total = GWElement::zero();
    for signs in 0u32..(1 << deps.len()) {
        let mut c = base;
        let mut mask = 0u32;
        let toggle = |c: &mut SquareClass, mask: &mut u32, i: usize| {
            if *mask & (1 << i) != 0 {
                *c = k.class_mul(*c, basis_classes[i]);
            }
            *mask ^= 1 << i;
        };
        for r in bits(q.roots) {
            if let Some(i) = position(r) {
                toggle(&mut c, &mut mask, i);
            }
        }
        for (j, dep) in deps.iter().enumerate() {
            if q.roots & (1 << dep.generator) == 0 {
                continue;
            }
            c = k.class_mul(c, dep.d_class);
            if signs & (1 << j) != 0 {
                c = k.class_neg(c);
            }
            for i in bits(dep.basis_mask) {
                toggle(&mut c, &mut mask, i);
            }
        }
        total = total.add(&orbit_trace(c, mask, &basis_classes, k)?, k);
    }
    debug_assert_eq!(total.degree(), d.multiplicity);
    Ok(total)
}

/// `Tr_{L/k} <c * prod_{i in mask} rho_i>` for `L = k(rho_0, ..., rho_{n-1})` with
/// `rho_i^2` of the given independent nonsquare classes.
fn orbit_trace(c: SquareClass, mask: u32, basis: &[SquareClass], k: ResidueField) -> Result<GWElement, GwError> {
    let Some((&last, rest)) = basis.split_last() else {
        return Ok(GWElement::class(c));
    };
    let j = rest.len();
    if mask & (1 << j) != 0 {
        return Ok(GWElement::hyperbolic(1 << j).normalized(k));
    }
    let two = k.class_of_rational(&Rational::from_integer(2))?;
    let c2 = k.class_mul(c, two);
    let a = orbit_trace(c2, mask, rest, k)?;
    let b = orbit_trace(k.class_mul(c2, last), mask, rest, k)?;
    Ok(a.add(&b, k))
}

/// Rows of the exceptional table that are monomials in the initials.
fn monomial_row(label: &str) -> Option<(i128, &'static [(u8, u8)])> {
    Some(match label {
        "YaI" => (1, &[(2, 0), (3, 1), (3, 0), (0, 3)]),
        "YaIII" | "BBa" => (-1, &[(0, 1), (2, 0), (3, 1), (3, 0)]),
        "CCaI" => (-2, &[(2, 0), (3, 1), (3, 0), (0, 1)]),
        _ => return None,
    })
}

const TWO_H_LABELS: &[&str] = &[
    "Na", "Oa", "Pa", "Qa", "Qc", "Ra", "Sa", "IIa", "IIb", "Ua", "Uc", "Va", "YcI", "YaII", "CCaII",
];

const ONE_ONE_H_LABELS: &[&str] =
    &["Nb", "Ob", "Oc", "Pb", "Qb", "Rb", "Rc", "Sb", "Ub", "Vb", "IIc", "YbI", "YbII", "CCb"];

fn two_h_base(b: ShapeBase) -> bool {
    use ShapeBase::*;
    matches!(b, A | B | C | D | E | F | G | H | T | W | EE)
}

/// The catalogued multiplicity of a shape, when the label determines it.
pub fn table_gw(label: &ShapeLabel, asg: &InitialAssignment, k: ResidueField) -> Result<Option<GWElement>, GwError> {
    if !label.candidates.is_empty() && label.candidates.iter().all(|&b| two_h_base(b)) {
        return Ok(Some(GWElement::hyperbolic(2).normalized(k)));
    }
    let (Some(base), Some(o)) = (label.base(), label.orientation) else {
        return Ok(None);
    };
    let name = format!("{base}{o}{}", label.variant.map(|v| v.to_string()).unwrap_or_default());
    let short = format!("{base}{o}");
    if TWO_H_LABELS.contains(&name.as_str()) || TWO_H_LABELS.contains(&short.as_str()) {
        return Ok(Some(GWElement::hyperbolic(2).normalized(k)));
    }
    if ONE_ONE_H_LABELS.contains(&name.as_str()) || ONE_ONE_H_LABELS.contains(&short.as_str()) {
        let g = GWElement { h: 1, classes: vec![SquareClass::ONE, SquareClass::ONE] };
        return Ok(Some(g.normalized(k)));
    }
    if name == "BBb" {
        return Ok(Some(GWElement { h: 0, classes: vec![SquareClass::ONE; 4] }.normalized(k)));
    }
    if let Some((coeff, syms)) = monomial_row(&name) {
        let mono = Monomial::from_exponents(syms.iter().map(|&(i, j)| {
            let (i, j) = if label.mirrored { (j, i) } else { (i, j) };
            (Symbol::new(i, j), 1)
        }));
        let e = term_elem(&Term::new(Rational::from_integer(coeff), mono), asg, k)?;
        let two = k.class_of_rational(&Rational::from_integer(2))?;
        let g = GWElement { h: 1, classes: vec![k.class_of(&e)?, two] };
        return Ok(Some(g.normalized(k)));
    }
    Ok(None)
}

/// Multiplicity recomputed from the lifts of the class representatives, when all
/// of them are covered by the local solver.
pub fn computed_gw(b: &BitangentClass, asg: &InitialAssignment, k: ResidueField) -> Result<Option<GWElement>, GwError> {
    if b.unsolved().next().is_some() {
        return Ok(None);
    }
    let mut total = GWElement::zero();
    for r in &b.representatives {
        if let LineLifts::Lifts(d) = &r.lifts {
            total = total.add(&representative_gw(d, asg, k)?, k);
        }
    }
    Ok(Some(total))
}

/// The multiplicity of a class: computed from its lifts and checked against the
/// table where the shape determines a table value, or the table value alone when
/// some representative is outside the local solver. Over the complex numbers
/// every class is `4<1>`.
pub fn gw_mult_of_class(b: &BitangentClass, asg: &InitialAssignment, k: ResidueField) -> Result<GWElement, GwError> {
    if k == ResidueField::Complex {
        return Ok(GWElement { h: 0, classes: vec![SquareClass::ONE; 4] });
    }
    let table = table_gw(&b.shape, asg, k)?;
    match (computed_gw(b, asg, k)?, table) {
        (Some(c), Some(t)) => {
            if !c.equivalent(&t, k) {
                return Err(GwError::TableMismatch {
                    shape: b.shape.to_string(),
                    computed: c.to_string(),
                    table: t.to_string(),
                });
            }
            Ok(c)
        }
        (Some(c), None) => Ok(c),
        (None, Some(t)) => Ok(t),
        (None, None) => Err(GwError::Undetermined {
            at: b.anchor().to_string(),
            reason: format!("shape {} outside the local solver and the table", b.shape),
        }),
    }
}

pub fn total_gw_count(classes: &[BitangentClass], asg: &InitialAssignment, k: ResidueField) -> Result<GWElement, GwError> {
    let mut total = GWElement::zero();
    for b in classes {
        total = total.add(&gw_mult_of_class(b, asg, k)?, k);
    }
    Ok(total)
}

/// A truncated series `sum_i c_i t^(v + i)` over the residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub valuation: Rational,
    pub coeffs: Vec<Rational>,
}

impl Series {
    /// Leading coefficient and its valuation, after dropping vanishing terms.
    pub fn initial(&self, k: ResidueField) -> Result<Option<(Rational, Elem)>, GwError> {
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = k.elem(c)?;
            if !k.is_zero(&e) {
                return Ok(Some((self.valuation + Rational::from_integer(i as i128), e)));
            }
        }
        Ok(None)
    }

    pub fn add(&self, o: &Series) -> Series {
        let v = self.valuation.min(o.valuation);
        let shift = |s: &Series| (s.valuation - v).to_integer() as usize;
        let (a, b) = (shift(self), shift(o));
        let n = (a + self.coeffs.len()).max(b + o.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[a + i] += c;
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            coeffs[b + i] += c;
        }
        Series { valuation: v, coeffs }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Series { valuation: self.valuation + o.valuation, coeffs }
    }
}

/// Checks `<ini A> + <ini B> = <ini(A+B)> + <ini(AB(A+B))>` in `GW(k)`. Valuations
/// must differ by integers. Returns `None` when `A + B` vanishes to the stored order.
pub fn degeneration_holds(a: &Series, b: &Series, k: ResidueField) -> Result<Option<bool>, GwError> {
    let sum = a.add(b);
    let prod = a.mul(b).mul(&sum);
    let (Some((_, ia)), Some((_, ib))) = (a.initial(k)?, b.initial(k)?) else {
        return Err(GwError::ZeroElement);
    };
    let (Some((_, is)), Some((_, ip))) = (sum.initial(k)?, prod.initial(k)?) else {
        return Ok(None);
    };
    let lhs = GWElement { h: 0, classes: vec![k.class_of(&ia)?, k.class_of(&ib)?] }.normalized(k);
    let rhs = GWElement { h: 0, classes: vec![k.class_of(&is)?, k.class_of(&ip)?] }.normalized(k);
    Ok(Some(lhs.equivalent(&rhs, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    const R: ResidueField = ResidueField::Reals;

    fn c(n: i128) -> SquareClass {
        R.class_of_rational(&Rational::from_integer(n)).unwrap()
    }

    #[test]
    fn folding_and_degree() {
        let x = GWElement::class(c(1)).add(&GWElement::class(c(-1)), R);
        assert_eq!(x, GWElement::hyperbolic(1));
        let y = GWElement::class(c(1)).add(&GWElement::class(c(1)), R);
        assert_eq!(y.classes.len(), 2);
        assert_eq!(GWElement::hyperbolic(1).add(&GWElement::hyperbolic(1), R), GWElement::hyperbolic(2));
        assert_eq!(x.add(&y, R).degree(), 4);
    }

    #[test]
    fn signed_counts() {
        assert_eq!(signed_count(&GWElement::hyperbolic(2), R), Ok(0));
        let g = GWElement { h: 1, classes: vec![c(1), c(1)] };
        assert_eq!(signed_count(&g, R), Ok(2));
        assert!(signed_count(&g, ResidueField::Complex).is_err());
    }

    #[test]
    fn quadratic_traces() {
        let one = Rational::one();
        let zero = Rational::zero();
        assert_eq!(trace_deg2(&zero, &one, &Rational::from_integer(3), ResidueField::Rationals).unwrap(), GWElement::hyperbolic(1));
        assert_eq!(trace_deg2(&Rational::from_integer(5), &one, &-one, R).unwrap(), GWElement::hyperbolic(1));
        let q = ResidueField::Rationals;
        let t = trace_deg2(&one, &zero, &Rational::from_integer(2), q).unwrap();
        let two = q.class_of_rational(&Rational::from_integer(2)).unwrap();
        assert_eq!(t, GWElement { h: 0, classes: vec![SquareClass::ONE, two] });
    }

    #[test]
    fn rational_isometry_uses_hasse_invariants() {
        let q = ResidueField::Rationals;
        let cl = |n: i128| q.class_of_rational(&Rational::from_integer(n)).unwrap();
        // <1> + <1> and <2> + <2> are isometric (x^2 + y^2 represents 2)
        let a = GWElement { h: 0, classes: vec![cl(1), cl(1)] };
        let b = GWElement { h: 0, classes: vec![cl(2), cl(2)] };
        assert!(a.equivalent(&b, q));
        // <1> + <1> and <3> + <3> are not: x^2 + y^2 does not represent 3
        let c3 = GWElement { h: 0, classes: vec![cl(3), cl(3)] };
        assert!(!a.equivalent(&c3, q));
        assert!(GWElement::hyperbolic(1).equivalent(&GWElement { h: 0, classes: vec![cl(5), cl(-5)] }, q));
    }
}
