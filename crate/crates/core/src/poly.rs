//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` from exponent vector to nonzero
//! coefficient, so iteration order, equality and printing are all
//! deterministic. The zero polynomial is the empty map; normalization is
//! eager — no operation ever leaves a zero coefficient behind.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::order::MonomialOrderSpec;
use crate::rational::{fmt_rat, Rat};

/// Shared, immutable list of variable names fixing a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        VarSet(names.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// New variable set with `extra` names appended.
    pub fn extend<S: Into<String>>(&self, extra: impl IntoIterator<Item = S>) -> VarSet {
        let mut names: Vec<String> = self.0.to_vec();
        names.extend(extra.into_iter().map(Into::into));
        VarSet::new(names)
    }
}

/// Exponent vector; length equals the ring's variable count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Componentwise `other <= self`.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Componentwise difference; caller must ensure divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: &VarSet) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: Rat) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &VarSet) -> Self {
        MultiPoly::constant(vars, Rat::one())
    }

    pub fn var(vars: &VarSet, i: usize) -> Self {
        let mut p = MultiPoly::zero(vars);
        p.terms.insert(Monomial::var(vars.len(), i), Rat::one());
        p
    }

    pub fn from_terms(vars: &VarSet, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = MultiPoly::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::one(self.nvars()))
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert_eq!(m.0.len(), self.nvars());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_ring(&self, other: &MultiPoly) {
        assert_eq!(
            self.vars, other.vars,
            "polynomials from different rings: {:?} vs {:?}",
            self.vars.names(),
            other.vars.names()
        );
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(other);
        let mut out = MultiPoly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one(&self.vars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] = e - 1;
            out.add_term(dm, c * Rat::from_integer(e.into()));
        }
        out
    }

    pub fn evaluate(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.nvars() {
            return Err(Error::precondition(format!(
                "evaluation point has {} coordinates, ring has {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term().is_zero()
    }

    /// Substitutes constants for the trailing `vals.len()` variables and
    /// returns a polynomial in the leading variables.
    pub fn specialize_last(&self, vals: &[Rat]) -> MultiPoly {
        let keep = self.nvars() - vals.len();
        let new_vars = VarSet::new(self.vars.names()[..keep].iter().cloned());
        let mut out = MultiPoly::zero(&new_vars);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            for (j, v) in vals.iter().enumerate() {
                for _ in 0..m.0[keep + j] {
                    coeff *= v;
                }
            }
            out.add_term(Monomial(m.0[..keep].to_vec()), coeff);
        }
        out
    }

    /// Reads the polynomial into a larger ring whose leading variables are
    /// this ring's variables.
    pub fn embed(&self, vars: &VarSet) -> MultiPoly {
        assert!(vars.len() >= self.nvars());
        assert_eq!(&vars.names()[..self.nvars()], self.vars.names());
        let mut out = MultiPoly::zero(vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.resize(vars.len(), 0);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Leading monomial under `ord`; `None` for the zero polynomial.
    pub fn leading_monomial(&self, ord: &MonomialOrderSpec) -> Option<&Monomial> {
        self.terms
            .keys()
            .max_by(|a, b| ord.cmp(&a.0, &b.0))
    }

    /// Divides out the rational content, making coefficients integral,
    /// primitive and the first (BTreeMap-ordered) coefficient positive.
    pub fn primitive_part(&self) -> MultiPoly {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&(c.numer() * &den_lcm / c.denom()));
        }
        let mut scale = Rat::new(den_lcm, num_gcd);
        if self.terms.values().next().unwrap().numer().sign() == num_bigint::Sign::Minus {
            scale = -scale;
        }
        self.scale(&scale)
    }

    fn fmt_with(&self, f: &mut std::fmt::Formatter<'_>, names: &[String]) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // largest monomial first reads naturally
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(fmt_rat(&mag));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl std::fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.fmt_with(f, self.vars.names())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn xy() -> VarSet {
        VarSet::new(["x", "y"])
    }

    #[test]
    fn arithmetic_normalizes_eagerly() {
        let v = xy();
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let p = x.add(&y);
        let q = x.sub(&y);
        // (x+y)(x-y) = x^2 - y^2
        let prod = p.mul(&q);
        assert_eq!(prod.num_terms(), 2);
        assert!(prod.sub(&prod).is_zero());
        assert_eq!(prod.coeff(&Monomial(vec![2, 0])), rat_int(1));
        assert_eq!(prod.coeff(&Monomial(vec![0, 2])), rat_int(-1));
        assert_eq!(prod.coeff(&Monomial(vec![1, 1])), rat_int(0));
    }

    #[test]
    fn partial_derivative() {
        let v = xy();
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        // d/dy (x^3 + x*y^2) = 2xy
        let p = x.pow(3).add(&x.mul(&y.pow(2)));
        let dy = p.partial(1);
        assert_eq!(dy, x.mul(&y).scale(&rat_int(2)));
        assert!(MultiPoly::constant(&v, rat_int(7)).partial(0).is_zero());
    }

    #[test]
    fn evaluation_and_specialization() {
        let v = VarSet::new(["x", "y", "u1", "u2"]);
        // x^3 + u1*x*y + u2
        let p = MultiPoly::var(&v, 0).pow(3).add(
            &MultiPoly::var(&v, 2)
                .mul(&MultiPoly::var(&v, 0))
                .mul(&MultiPoly::var(&v, 1))
                .add(&MultiPoly::var(&v, 3)),
        );
        let at = p
            .evaluate(&[rat_int(2), rat_int(3), rat(1, 2), rat_int(-1)])
            .unwrap();
        assert_eq!(at, rat_int(8) + rat(1, 2) * rat_int(6) - rat_int(1));

        let spec = p.specialize_last(&[rat(1, 2), rat_int(-1)]);
        assert_eq!(spec.nvars(), 2);
        assert_eq!(spec.coeff(&Monomial(vec![1, 1])), rat(1, 2));
        assert_eq!(spec.constant_term(), rat_int(-1));
    }

    #[test]
    fn primitive_part_scales_to_integer_gcd_one() {
        let v = xy();
        let p = MultiPoly::var(&v, 0)
            .scale(&rat(2, 3))
            .add(&MultiPoly::var(&v, 1).scale(&rat(4, 9)));
        let pp = p.primitive_part();
        assert_eq!(pp.coeff(&Monomial(vec![1, 0])), rat_int(3));
        assert_eq!(pp.coeff(&Monomial(vec![0, 1])), rat_int(2));
        // sign normalization: leading BTreeMap coefficient positive
        assert_eq!(p.neg().primitive_part(), pp);
    }

    #[test]
    fn display_is_readable() {
        let v = xy();
        let p = MultiPoly::var(&v, 0)
            .pow(2)
            .sub(&MultiPoly::var(&v, 1).scale(&rat(1, 2)));
        assert_eq!(p.to_string(), "x^2 - 1/2*y");
    }
}
