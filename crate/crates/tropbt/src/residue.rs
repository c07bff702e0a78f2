//! Residue fields, square classes, and Laurent terms in the coefficient initials `a_ij`.
//!
//! Square classes are stored by a canonical integer representative:
//!
//! | field      | representatives                                  |
//! |------------|--------------------------------------------------|
//! | reals      | `1`, `-1`                                        |
//! | complex    | `1`                                              |
//! | `F_p`      | `1` and the least quadratic non-residue mod `p`  |
//! | rationals  | signed squarefree integers                       |

use std::collections::BTreeMap;
use std::fmt;

use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational numbers used throughout the crate.
pub type Rational = num_rational::Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{a} is divisible by {p}")]
    DivisibleByP { a: i128, p: u64 },
    #[error("no value assigned to {0}")]
    UnboundSymbol(Symbol),
    #[error("expression evaluates to zero in the residue field")]
    ZeroEvaluation,
    #[error("radicands may not be nested")]
    NestedRadicand,
}

/// The initial `a_ij` of the coefficient of `x^i y^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub i: u8,
    pub j: u8,
}

impl Symbol {
    pub const fn new(i: u8, j: u8) -> Self {
        Symbol { i, j }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}{}", self.i, self.j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidueField {
    Reals,
    Complex,
    Prime(u64),
    Rationals,
}

/// An element of a residue field. Rationals model the reals, the rationals and
/// (for the purpose of square classes) the complex numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elem {
    Rat(Rational),
    Mod(u64),
}

/// Canonical representative of a class in `k^x / (k^x)^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareClass(i128);

impl SquareClass {
    pub const ONE: SquareClass = SquareClass(1);

    pub fn rep(self) -> i128 {
        self.0
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueField::Reals => write!(f, "reals"),
            ResidueField::Complex => write!(f, "complex"),
            ResidueField::Prime(p) => write!(f, "fp:{p}"),
            ResidueField::Rationals => write!(f, "rationals"),
        }
    }
}

impl ResidueField {
    pub fn prime(p: u64) -> Result<Self, ResidueError> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(ResidueError::NotOddPrime(p));
        }
        Ok(ResidueField::Prime(p))
    }

    /// Characteristic 3 is allowed, but some coefficients (`2^m`, `sqrt 3`) degenerate there.
    pub fn has_small_characteristic(&self) -> bool {
        matches!(self, ResidueField::Prime(3))
    }

    pub fn is_real(&self) -> bool {
        matches!(self, ResidueField::Reals)
    }

    pub fn elem(&self, q: &Rational) -> Result<Elem, ResidueError> {
        match *self {
            ResidueField::Prime(p) => Ok(Elem::Mod(rational_mod(q, p)?)),
            _ => Ok(Elem::Rat(*q)),
        }
    }

    pub fn is_zero(&self, e: &Elem) -> bool {
        match e {
            Elem::Rat(q) => q.is_zero(),
            Elem::Mod(v) => *v == 0,
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b, *self) {
            (Elem::Mod(x), Elem::Mod(y), ResidueField::Prime(p)) => {
                Elem::Mod(((*x as u128 * *y as u128) % p as u128) as u64)
            }
            (Elem::Rat(x), Elem::Rat(y), _) => Elem::Rat(x * y),
            _ => panic!("mixed residue field elements"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem, ResidueError> {
        if self.is_zero(a) {
            return Err(ResidueError::ZeroEvaluation);
        }
        Ok(match (a, *self) {
            (Elem::Mod(x), ResidueField::Prime(p)) => Elem::Mod(mod_pow(*x, p - 2, p)),
            (Elem::Rat(x), _) => Elem::Rat(x.recip()),
            _ => panic!("mixed residue field elements"),
        })
    }

    pub fn pow(&self, a: &Elem, e: i32) -> Result<Elem, ResidueError> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    pub fn one(&self) -> Elem {
        match self {
            ResidueField::Prime(_) => Elem::Mod(1),
            _ => Elem::Rat(Rational::one()),
        }
    }

    /// The square class of a nonzero element.
    pub fn class_of(&self, e: &Elem) -> Result<SquareClass, ResidueError> {
        if self.is_zero(e) {
            return Err(ResidueError::ZeroEvaluation);
        }
        Ok(match (self, e) {
            (ResidueField::Complex, _) => SquareClass(1),
            (ResidueField::Reals, Elem::Rat(q)) => SquareClass(if q.is_negative() { -1 } else { 1 }),
            (ResidueField::Rationals, Elem::Rat(q)) => SquareClass(squarefree_part(q.numer() * q.denom())),
            (ResidueField::Prime(p), Elem::Mod(v)) => {
                if legendre(*v as i128, *p)? == 1 {
                    SquareClass(1)
                } else {
                    SquareClass(least_nonresidue(*p) as i128)
                }
            }
            _ => panic!("element does not belong to {self}"),
        })
    }

    pub fn class_of_rational(&self, q: &Rational) -> Result<SquareClass, ResidueError> {
        self.class_of(&self.elem(q)?)
    }

    pub fn is_square(&self, e: &Elem) -> Result<bool, ResidueError> {
        Ok(self.class_of(e)? == SquareClass::ONE)
    }

    /// The class of a fixed square root of `e`, or `None` if `e` is not a square.
    ///
    /// The chosen root is the positive one over the reals and rationals, and the
    /// smaller representative in `[1, p-1]` over `F_p`.
    pub fn root_class(&self, e: &Elem) -> Result<Option<SquareClass>, ResidueError> {
        if !self.is_square(e)? {
            return Ok(None);
        }
        Ok(Some(match (self, e) {
            (ResidueField::Complex, _) | (ResidueField::Reals, _) => SquareClass(1),
            (ResidueField::Rationals, Elem::Rat(q)) => {
                let n = q.numer().sqrt();
                let d = q.denom().sqrt();
                SquareClass(squarefree_part(n * d))
            }
            (ResidueField::Prime(p), Elem::Mod(v)) => {
                let r = mod_sqrt(*v, *p).expect("square has a root");
                let r = r.min(p - r);
                self.class_of(&Elem::Mod(r))?
            }
            _ => unreachable!(),
        }))
    }

    pub fn class_mul(&self, a: SquareClass, b: SquareClass) -> SquareClass {
        match *self {
            ResidueField::Complex => SquareClass(1),
            ResidueField::Reals => SquareClass(a.0 * b.0),
            ResidueField::Rationals => {
                let g = a.0.gcd(&b.0);
                SquareClass((a.0 / g) * (b.0 / g))
            }
            ResidueField::Prime(p) => {
                let n = least_nonresidue(p) as i128;
                let odd = (a.0 == n) != (b.0 == n);
                SquareClass(if odd { n } else { 1 })
            }
        }
    }

    pub fn minus_one_class(&self) -> SquareClass {
        self.class_of_rational(&Rational::from_integer(-1)).expect("-1 is nonzero")
    }

    pub fn class_neg(&self, a: SquareClass) -> SquareClass {
        self.class_mul(a, self.minus_one_class())
    }

    /// All square classes when there are finitely many of them.
    pub fn finite_classes(&self) -> Option<Vec<SquareClass>> {
        match *self {
            ResidueField::Complex => Some(vec![SquareClass(1)]),
            ResidueField::Reals => Some(vec![SquareClass(1), SquareClass(-1)]),
            ResidueField::Prime(p) => Some(vec![SquareClass(1), SquareClass(least_nonresidue(p) as i128)]),
            ResidueField::Rationals => None,
        }
    }
}

/// Legendre symbol via Euler's criterion.
pub fn legendre(a: i128, p: u64) -> Result<i8, ResidueError> {
    let r = a.rem_euclid(p as i128) as u64;
    if r == 0 {
        return Err(ResidueError::DivisibleByP { a, p });
    }
    Ok(if mod_pow(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&n| mod_pow(n, (p - 1) / 2, p) == p - 1).expect("odd prime has a non-residue")
}

pub(crate) fn mod_pow(b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let m = p as u128;
    let mut base = (b % p) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// Tonelli-Shanks square root modulo an odd prime.
pub(crate) fn mod_sqrt(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = least_nonresidue(p);
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul(tt, tt);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mul(b, b);
        }
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

fn rational_mod(q: &Rational, p: u64) -> Result<u64, ResidueError> {
    let pm = p as i128;
    let n = q.numer().rem_euclid(pm) as u64;
    let d = q.denom().rem_euclid(pm) as u64;
    if d == 0 {
        return Err(ResidueError::DivisibleByP { a: *q.denom(), p });
    }
    Ok(((n as u128 * mod_pow(d, p - 2, p) as u128) % p as u128) as u64)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Signed squarefree part of a nonzero integer.
///
/// Trial division runs up to `10^6`; a remaining cofactor is dropped if it is a
/// perfect square and otherwise treated as squarefree.
pub fn squarefree_part(n: i128) -> i128 {
    assert!(n != 0, "squarefree part of zero");
    let sign = n.signum();
    let mut m = n.abs();
    let mut out: i128 = 1;
    let mut d: i128 = 2;
    while d * d <= m && d <= 1_000_000 {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let r = m.sqrt();
        if r * r != m {
            out *= m;
        }
    }
    sign * out
}

/// Values of the initials `a_ij` in a residue field.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InitialAssignment {
    values: BTreeMap<Symbol, Rational>,
}

impl InitialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every `a_ij` of a degree-`d` curve set to one.
    pub fn ones(degree: u8) -> Self {
        let mut asg = Self::new();
        for i in 0..=degree {
            for j in 0..=(degree - i) {
                asg.set(Symbol::new(i, j), Rational::one());
            }
        }
        asg
    }

    pub fn set(&mut self, s: Symbol, v: Rational) -> &mut Self {
        self.values.insert(s, v);
        self
    }

    pub fn with(mut self, s: Symbol, v: i128) -> Self {
        self.values.insert(s, Rational::from_integer(v));
        self
    }

    pub fn get(&self, s: Symbol) -> Option<&Rational> {
        self.values.get(&s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Rational)> {
        self.values.iter()
    }

    pub fn value(&self, s: Symbol, k: ResidueField) -> Result<Elem, ResidueError> {
        let q = self.values.get(&s).ok_or(ResidueError::UnboundSymbol(s))?;
        let e = k.elem(q)?;
        if k.is_zero(&e) {
            return Err(ResidueError::ZeroEvaluation);
        }
        Ok(e)
    }
}

impl FromIterator<(Symbol, Rational)> for InitialAssignment {
    fn from_iter<T: IntoIterator<Item = (Symbol, Rational)>>(iter: T) -> Self {
        InitialAssignment { values: iter.into_iter().collect() }
    }
}

/// A Laurent monomial in the symbols `a_ij`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<Symbol, i32>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(s: Symbol) -> Self {
        Monomial([(s, 1)].into_iter().collect())
    }

    pub fn from_exponents(it: impl IntoIterator<Item = (Symbol, i32)>) -> Self {
        let mut m = Self::one();
        for (s, e) in it {
            m.add_exponent(s, e);
        }
        m
    }

    fn add_exponent(&mut self, s: Symbol, e: i32) {
        let v = self.0.entry(s).or_insert(0);
        *v += e;
        if *v == 0 {
            self.0.remove(&s);
        }
    }

    pub fn exponent(&self, s: Symbol) -> i32 {
        self.0.get(&s).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, i32)> + '_ {
        self.0.iter().map(|(s, e)| (*s, *e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.clone();
        for (s, e) in other.iter() {
            m.add_exponent(s, e);
        }
        m
    }

    pub fn pow(&self, k: i32) -> Monomial {
        Monomial(self.0.iter().filter(|_| k != 0).map(|(s, e)| (*s, e * k)).collect())
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }

    /// Splits into `(outside, inside)` with `self = outside^2 * inside` and inside exponents in `{0, 1}`.
    pub fn split_square(&self) -> (Monomial, Monomial) {
        let outside = Monomial(
            self.0.iter().filter(|(_, e)| e.div_euclid(2) != 0).map(|(s, e)| (*s, e.div_euclid(2))).collect(),
        );
        let inside = Monomial(self.0.iter().filter(|(_, e)| e.rem_euclid(2) != 0).map(|(s, _)| (*s, 1)).collect());
        (outside, inside)
    }

    pub fn is_square(&self) -> bool {
        self.0.values().all(|e| e % 2 == 0)
    }

    pub fn eval(&self, asg: &InitialAssignment, k: ResidueField) -> Result<Elem, ResidueError> {
        let mut acc = k.one();
        for (s, e) in self.iter() {
            acc = k.mul(&acc, &k.pow(&asg.value(s, k)?, e)?);
        }
        Ok(acc)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.keys().copied()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, e) in self.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Splits a nonzero rational `q` as `s^2 * f` with `f` a signed squarefree integer.
pub(crate) fn split_rational_square(q: &Rational) -> (Rational, i128) {
    let nd = q.numer() * q.denom();
    let f = squarefree_part(nd);
    let s = (nd / f).sqrt();
    (Rational::new(s, *q.denom()), f)
}

/// A single Laurent term `c * m`, optionally times the square root of a radicand-free term.
///
/// Radicands are kept normalized: a squarefree integer times a product of distinct
/// symbols, so two expressions agree exactly when their normal forms agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareClassExpr {
    coeff: Rational,
    mono: Monomial,
    radicand: Option<Box<SquareClassExpr>>,
}

impl SquareClassExpr {
    pub fn new(coeff: Rational, mono: Monomial) -> Self {
        assert!(!coeff.is_zero(), "zero coefficient");
        SquareClassExpr { coeff, mono, radicand: None }
    }

    pub fn constant(c: i128) -> Self {
        Self::new(Rational::from_integer(c), Monomial::one())
    }

    pub fn rational(c: Rational) -> Self {
        Self::new(c, Monomial::one())
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::new(Rational::one(), Monomial::var(s))
    }

    pub fn a(i: u8, j: u8) -> Self {
        Self::symbol(Symbol::new(i, j))
    }

    /// `sqrt(inner)`, with square factors moved out of the root.
    pub fn sqrt(inner: &SquareClassExpr) -> Result<Self, ResidueError> {
        if inner.radicand.is_some() {
            return Err(ResidueError::NestedRadicand);
        }
        let (s, f) = split_rational_square(&inner.coeff);
        let (out, ins) = inner.mono.split_square();
        let radicand = if f == 1 && ins.is_one() {
            None
        } else {
            Some(Box::new(SquareClassExpr::new(Rational::from_integer(f), ins)))
        };
        Ok(SquareClassExpr { coeff: s, mono: out, radicand })
    }

    pub fn coeff(&self) -> Rational {
        self.coeff
    }

    pub fn monomial(&self) -> &Monomial {
        &self.mono
    }

    pub fn radicand(&self) -> Option<&SquareClassExpr> {
        self.radicand.as_deref()
    }

    pub fn mul(&self, other: &SquareClassExpr) -> SquareClassExpr {
        let base = SquareClassExpr::new(self.coeff * other.coeff, self.mono.mul(&other.mono));
        match (&self.radicand, &other.radicand) {
            (None, None) => base,
            (Some(r), None) | (None, Some(r)) => SquareClassExpr { radicand: Some(r.clone()), ..base },
            (Some(r1), Some(r2)) if r1 == r2 => base.mul(r1),
            (Some(r1), Some(r2)) => {
                let root = SquareClassExpr::sqrt(&r1.mul(r2)).expect("radicands are radicand-free");
                base.mul(&root)
            }
        }
    }

    pub fn inv(&self) -> SquareClassExpr {
        let base = SquareClassExpr::new(self.coeff.recip(), self.mono.inv());
        match &self.radicand {
            None => base,
            // 1/sqrt(r) = sqrt(r)/r
            Some(r) => SquareClassExpr { radicand: Some(r.clone()), ..base.mul(&r.inv()) },
        }
    }

    pub fn div(&self, other: &SquareClassExpr) -> SquareClassExpr {
        self.mul(&other.inv())
    }

    pub fn neg(&self) -> SquareClassExpr {
        SquareClassExpr { coeff: -self.coeff, ..self.clone() }
    }

    pub fn pow(&self, k: i32) -> SquareClassExpr {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = SquareClassExpr::constant(1);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn scale(&self, c: Rational) -> SquareClassExpr {
        SquareClassExpr { coeff: self.coeff * c, ..self.clone() }
    }

    /// True when `self / other` is the square of a radicand-free term.
    pub fn equal_up_to_squares(&self, other: &SquareClassExpr) -> bool {
        let q = self.div(other);
        if q.radicand.is_some() || !q.mono.is_square() {
            return false;
        }
        let (_, f) = split_rational_square(&q.coeff);
        f == 1
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.mono.symbols().collect();
        if let Some(r) = &self.radicand {
            v.extend(r.mono.symbols());
        }
        v.sort();
        v.dedup();
        v
    }

    fn eval_plain(&self, asg: &InitialAssignment, k: ResidueField) -> Result<Elem, ResidueError> {
        let c = k.elem(&self.coeff)?;
        if k.is_zero(&c) {
            return Err(ResidueError::ZeroEvaluation);
        }
        Ok(k.mul(&c, &self.mono.eval(asg, k)?))
    }
}

impl fmt::Display for SquareClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if !self.mono.is_one() {
            write!(f, "*{}", self.mono)?;
        }
        if let Some(r) = &self.radicand {
            write!(f, "*sqrt({r})")?;
        }
        Ok(())
    }
}

/// The square class of an evaluated expression, or `None` when its radicand is not a square in `k`.
pub fn square_class(
    e: &SquareClassExpr,
    asg: &InitialAssignment,
    k: ResidueField,
) -> Result<Option<SquareClass>, ResidueError> {
    let plain = k.class_of(&e.eval_plain(asg, k)?)?;
    match &e.radicand {
        None => Ok(Some(plain)),
        Some(r) => {
            let rv = r.eval_plain(asg, k)?;
            Ok(k.root_class(&rv)?.map(|rc| k.class_mul(plain, rc)))
        }
    }
}

/// Whether `e` evaluates to a square in `k`; a radicand outside `k` counts as not a square.
pub fn is_square(e: &SquareClassExpr, asg: &InitialAssignment, k: ResidueField) -> Result<bool, ResidueError> {
    Ok(square_class(e, asg, k)? == Some(SquareClass::ONE))
}

/// Whether `sqrt(e)` lies in `k` (for a radicand-free `e`).
pub fn has_root(e: &SquareClassExpr, asg: &InitialAssignment, k: ResidueField) -> Result<bool, ResidueError> {
    is_square(e, asg, k)
}
