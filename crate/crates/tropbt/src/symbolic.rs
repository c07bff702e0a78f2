//! Laurent terms in the initials `a_ij` times products of adjoined square roots,
//! and small Laurent polynomials in `x, y` over such terms.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::quartic::Lattice;
use crate::residue::{
    square_class, InitialAssignment, Monomial, Rational, ResidueError, ResidueField, SquareClass, SquareClassExpr,
    Symbol,
};

/// `coeff * mono * prod_{i in roots} rho_i`, where `rho_i^2` is the `i`-th radicand
/// of a [`RootTable`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rational,
    pub mono: Monomial,
    pub roots: u32,
}

impl Term {
    pub fn new(coeff: Rational, mono: Monomial) -> Self {
        Term { coeff, mono, roots: 0 }
    }

    pub fn int(c: i128) -> Self {
        Term::new(Rational::from_integer(c), Monomial::one())
    }

    pub fn one() -> Self {
        Term::int(1)
    }

    pub fn a(p: Lattice) -> Self {
        Term::new(Rational::one(), Monomial::var(Symbol::new(p.0 as u8, p.1 as u8)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn neg(&self) -> Term {
        Term { coeff: -self.coeff, ..self.clone() }
    }

    pub fn scale(&self, c: Rational) -> Term {
        Term { coeff: self.coeff * c, ..self.clone() }
    }

    pub fn is_root_free(&self) -> bool {
        self.roots == 0
    }

    /// The term as a single-radicand expression, when it involves at most one root.
    pub fn to_expr(&self, table: &RootTable) -> Option<SquareClassExpr> {
        let base = SquareClassExpr::new(self.coeff, self.mono.clone());
        match self.roots.count_ones() {
            0 => Some(base),
            1 => {
                let r = &table.radicands[self.roots.trailing_zeros() as usize];
                let root = SquareClassExpr::sqrt(&SquareClassExpr::new(r.coeff, r.mono.clone())).ok()?;
                Some(base.mul(&root))
            }
            _ => None,
        }
    }

    pub fn from_expr(e: &SquareClassExpr) -> Option<Term> {
        e.radicand().is_none().then(|| Term::new(e.coeff(), e.monomial().clone()))
    }

    /// Square class of the root-free part `coeff * mono` under an assignment.
    pub fn base_class(&self, asg: &InitialAssignment, k: ResidueField) -> Result<SquareClass, ResidueError> {
        let e = SquareClassExpr::new(self.coeff, self.mono.clone());
        Ok(square_class(&e, asg, k)?.expect("root-free expression"))
    }

    /// Valuation when `a_ij` has valuation `val[(i, j)]` and each root half that of its radicand.
    pub fn valuation(&self, val: &BTreeMap<Lattice, Rational>, table: &RootTable) -> Rational {
        let mut v: Rational = self
            .mono
            .iter()
            .map(|(s, e)| val[&(s.i as i64, s.j as i64)] * Rational::from_integer(e as i128))
            .sum();
        for i in bits(self.roots) {
            v += table.radicands[i].valuation(val, table) / Rational::from_integer(2);
        }
        v
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if !self.mono.is_one() {
            write!(f, "*{}", self.mono)?;
        }
        for i in bits(self.roots) {
            write!(f, "*r{i}")?;
        }
        Ok(())
    }
}

pub fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// Adjoined square roots `rho_i` with root-free radicands `rho_i^2 = R_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootTable {
    pub radicands: Vec<Term>,
}

impl RootTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adjoins `sqrt(r)` and returns it as a term.
    pub fn adjoin(&mut self, r: Term) -> Term {
        assert!(r.is_root_free(), "nested radicand {r}");
        assert!(!r.is_zero());
        assert!(self.radicands.len() < 32);
        self.radicands.push(r);
        Term { coeff: Rational::one(), mono: Monomial::one(), roots: 1 << (self.radicands.len() - 1) }
    }

    pub fn mul(&self, a: &Term, b: &Term) -> Term {
        let mut t = Term { coeff: a.coeff * b.coeff, mono: a.mono.mul(&b.mono), roots: a.roots ^ b.roots };
        for i in bits(a.roots & b.roots) {
            let r = &self.radicands[i];
            t.coeff *= r.coeff;
            t.mono = t.mono.mul(&r.mono);
        }
        t
    }

    pub fn inv(&self, a: &Term) -> Term {
        assert!(!a.is_zero(), "inverting zero");
        let mut t = Term { coeff: a.coeff.recip(), mono: a.mono.inv(), roots: a.roots };
        // 1/rho = rho/R
        for i in bits(a.roots) {
            let r = &self.radicands[i];
            t.coeff /= r.coeff;
            t.mono = t.mono.mul(&r.mono.inv());
        }
        t
    }

    pub fn div(&self, a: &Term, b: &Term) -> Term {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &Term, k: i64) -> Term {
        let base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut acc = Term::one();
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    pub fn product<'a>(&self, it: impl IntoIterator<Item = &'a Term>) -> Term {
        it.into_iter().fold(Term::one(), |acc, t| self.mul(&acc, t))
    }
}

/// A Laurent polynomial `sum_k c_k x^k` with [`Term`] coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    pub terms: BTreeMap<Lattice, Term>,
}

impl LaurentPoly {
    pub fn from_terms(it: impl IntoIterator<Item = (Lattice, Term)>) -> Self {
        let mut p = LaurentPoly::default();
        for (k, t) in it {
            p.terms.insert(k, t);
        }
        p
    }

    pub fn d_dx(&self) -> LaurentPoly {
        self.derive(|k| k.0)
    }

    pub fn d_dy(&self) -> LaurentPoly {
        self.derive(|k| k.1)
    }

    fn derive(&self, which: impl Fn(Lattice) -> i64) -> LaurentPoly {
        let mut out = LaurentPoly::default();
        for (&k, t) in &self.terms {
            let e = which(k);
            if e != 0 {
                let nk = if which((1, 0)) == 1 { (k.0 - 1, k.1) } else { (k.0, k.1 - 1) };
                out.terms.insert(nk, t.scale(Rational::from_integer(e as i128)));
            }
        }
        out
    }

    /// Evaluates at `(x, y)`, returning the value as a sum of terms.
    pub fn eval(&self, x: &Term, y: &Term, table: &RootTable) -> TermSum {
        let mut s = TermSum::default();
        for (&k, c) in &self.terms {
            let v = table.product([c, &table.pow(x, k.0), &table.pow(y, k.1)]);
            s.add(v);
        }
        s
    }
}

/// A sum of terms with like terms combined.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermSum {
    parts: BTreeMap<(Vec<(Symbol, i32)>, u32), Rational>,
}

impl TermSum {
    pub fn add(&mut self, t: Term) {
        let key = (t.mono.iter().collect::<Vec<_>>(), t.roots);
        let e = self.parts.entry(key).or_insert_with(Rational::zero);
        *e += t.coeff;
    }

    pub fn add_sum(&mut self, o: &TermSum, table: &RootTable, factor: &Term) {
        for t in o.terms() {
            self.add(table.mul(&t, factor));
        }
    }

    pub fn terms(&self) -> Vec<Term> {
        self.parts
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((m, r), c)| Term { coeff: *c, mono: Monomial::from_exponents(m.iter().copied()), roots: *r })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|c| c.is_zero())
    }

    /// The single surviving term, if exactly one remains.
    pub fn single(&self) -> Option<Term> {
        let t = self.terms();
        (t.len() == 1).then(|| t[0].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_square_to_radicands() {
        let mut tab = RootTable::new();
        let r = Term::a((0, 1)).scale(Rational::from_integer(-3));
        let rho = tab.adjoin(r.clone());
        assert_eq!(tab.mul(&rho, &rho), r);
        let inv = tab.inv(&rho);
        assert_eq!(tab.mul(&inv, &rho), Term::one());
        assert_eq!(tab.pow(&rho, -2), tab.inv(&r));
    }

    #[test]
    fn like_terms_cancel() {
        let tab = RootTable::new();
        // (y - a01) at y = a01
        let p = LaurentPoly::from_terms([((0, 1), Term::one()), ((0, 0), Term::a((0, 1)).neg())]);
        assert!(p.eval(&Term::one(), &Term::a((0, 1)), &tab).is_zero());
        let d = p.d_dy();
        assert_eq!(d.eval(&Term::int(5), &Term::int(7), &tab).single(), Some(Term::one()));
    }
}
