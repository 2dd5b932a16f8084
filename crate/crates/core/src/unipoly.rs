//! Dense univariate polynomials over the rationals, plus exact rational
//! root extraction.
//!
//! Root finding never enumerates integer divisors: the constant and leading
//! coefficients of b-function generators are products of many root
//! numerators and blow past anything a divisor sweep could handle. Instead
//! the primitive integer form is made square-free, its roots are found
//! modulo a small prime, Hensel-lifted until the modulus passes the
//! rational-root bound `max(|constant|, |leading|)`, and recovered by
//! rational reconstruction; every candidate is verified by exact division,
//! so a bad prime can only cost time, never correctness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, Rat};

/// Coefficients ascending by degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        UniPoly::constant(Rat::one())
    }

    /// `x - root`, the monic linear polynomial with the given root.
    pub fn linear(root: &Rat) -> Self {
        UniPoly::from_coeffs(vec![-root.clone(), Rat::one()])
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn monic_from_roots<'a>(roots: impl IntoIterator<Item = &'a Rat>) -> Self {
        let mut p = UniPoly::one();
        for r in roots {
            p = p.mul(&UniPoly::linear(r));
        }
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading_coeff(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|k| k * c).collect(),
        }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    pub fn divrem(&self, div: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if div.is_zero() {
            return Err(Error::precondition("division by zero polynomial"));
        }
        let dlc = div.leading_coeff();
        let dd = div.degree();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() >= dd + 1 && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &dlc;
            if factor.is_zero() {
                rem.pop();
                continue;
            }
            for (i, c) in div.coeffs.iter().enumerate() {
                let idx = shift + i;
                let sub = c * &factor;
                rem[idx] -= sub;
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
            quot[shift] = factor;
        }
        Ok((UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem)))
    }

    /// Division that must leave no remainder.
    pub fn exact_divide(&self, div: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.divrem(div)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!(
                "({}) by ({})",
                self, div
            )));
        }
        Ok(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiset of rational roots with multiplicity.
    ///
    /// Fails with `IrrationalResidual` when a nonconstant factor survives
    /// deflation by every rational root.
    pub fn rational_roots(&self) -> Result<RootList> {
        if self.is_zero() {
            return Err(Error::precondition(
                "rational_roots requires a nonzero polynomial",
            ));
        }
        if self.degree() == 0 {
            return Ok(RootList::new(Vec::new()));
        }
        let mut roots: Vec<Rat> = Vec::new();

        // strip x^k
        let val = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero polynomial");
        let mut work = UniPoly::from_coeffs(self.coeffs[val..].to_vec());
        for _ in 0..val {
            roots.push(Rat::zero());
        }
        if work.degree() == 0 {
            return Ok(RootList::new(roots));
        }

        let b = work.primitive_integer_coeffs();
        for gamma in distinct_rational_roots(&b)? {
            let lin = UniPoly::linear(&gamma);
            loop {
                let (q, r) = work.divrem(&lin)?;
                if r.is_zero() {
                    roots.push(gamma.clone());
                    work = q;
                } else {
                    break;
                }
            }
        }
        if work.degree() > 0 {
            return Err(Error::IrrationalResidual(work.to_string()));
        }
        Ok(RootList::new(roots))
    }

    /// Integer, content-free coefficient vector (ascending), leading
    /// coefficient positive.
    fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * &den_lcm / c.denom())
            .collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if ints.last().map(|c| c.is_negative()).unwrap_or(false) {
            content = -content;
        }
        for c in &mut ints {
            *c /= &content;
        }
        ints
    }
}

impl std::fmt::Display for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
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
            match i {
                0 => write!(f, "{}", fmt_rat(&mag))?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", fmt_rat(&mag))?;
                    }
                    if i == 1 {
                        write!(f, "s")?;
                    } else {
                        write!(f, "s^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sorted multiset of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootList {
    roots: Vec<Rat>,
}

impl RootList {
    pub fn new(mut roots: Vec<Rat>) -> Self {
        roots.sort();
        RootList { roots }
    }

    pub fn empty() -> Self {
        RootList { roots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.roots
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rat> {
        self.roots.iter()
    }

    pub fn contains(&self, r: &Rat) -> bool {
        self.roots.binary_search(r).is_ok()
    }

    /// Root -> multiplicity.
    pub fn counts(&self) -> std::collections::BTreeMap<Rat, usize> {
        let mut out = std::collections::BTreeMap::new();
        for r in &self.roots {
            *out.entry(r.clone()).or_insert(0) += 1;
        }
        out
    }

    /// Distinct roots, still sorted.
    pub fn distinct(&self) -> RootList {
        let mut v = self.roots.clone();
        v.dedup();
        RootList { roots: v }
    }

    pub fn is_squarefree(&self) -> bool {
        self.roots.windows(2).all(|w| w[0] != w[1])
    }

    /// Set inclusion of distinct roots.
    pub fn subset_of(&self, other: &RootList) -> bool {
        self.roots.iter().all(|r| other.contains(r))
    }
}

impl std::fmt::Display for RootList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.roots.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_rat(r))?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<Rat> for RootList {
    fn from_iter<T: IntoIterator<Item = Rat>>(iter: T) -> Self {
        RootList::new(iter.into_iter().collect())
    }
}

impl IntoIterator for RootList {
    type Item = Rat;
    type IntoIter = std::vec::IntoIter<Rat>;
    fn into_iter(self) -> Self::IntoIter {
        self.roots.into_iter()
    }
}

impl<'a> IntoIterator for &'a RootList {
    type Item = &'a Rat;
    type IntoIter = std::slice::Iter<'a, Rat>;
    fn into_iter(self) -> Self::IntoIter {
        self.roots.iter()
    }
}

// ---- modular root finding --------------------------------------------------

const ROOT_PRIMES: [u64; 8] = [
    10007, 10009, 10037, 10039, 31013, 31019, 65537, 1000003,
];

/// Distinct rational roots of the primitive integer polynomial `b`
/// (ascending coefficients, `b[0] != 0`, degree >= 1).
fn distinct_rational_roots(b: &[BigInt]) -> Result<Vec<Rat>> {
    debug_assert!(!b[0].is_zero());
    let sqfree = integer_squarefree_part(b);
    if sqfree.len() < 2 {
        return Ok(Vec::new());
    }
    let bound = {
        let c0 = b[0].abs();
        let lc = b.last().unwrap().abs();
        c0.max(lc)
    };
    for &p in &ROOT_PRIMES {
        if let Some(roots) = try_prime(&sqfree, b, p, &bound) {
            return Ok(roots);
        }
    }
    // Every prime in the table divided a resultant-like quantity; with
    // eight primes above 10^4 this needs astronomically contrived input.
    Err(Error::inconsistency(
        "no usable prime for modular root finding",
    ))
}

/// Square-free part `b / gcd(b, b')` as integer coefficients.
fn integer_squarefree_part(b: &[BigInt]) -> Vec<BigInt> {
    let p = UniPoly::from_coeffs(b.iter().map(|c| Rat::from_integer(c.clone())).collect());
    let g = p.gcd(&p.derivative());
    let s = p.exact_divide(&g).expect("gcd divides");
    s.primitive_integer_coeffs()
}

/// `None` when `p` is unusable (leading coefficient vanishes or the
/// square-free part degenerates mod `p`).
fn try_prime(sqfree: &[BigInt], full: &[BigInt], p: u64, bound: &BigInt) -> Option<Vec<Rat>> {
    let sp = reduce_mod(sqfree, p);
    if sp.len() != sqfree.len() {
        return None; // leading coefficient vanished mod p
    }
    let dsp = derivative_mod(&sp, p);
    if poly_gcd_mod(&sp, &dsp, p).len() > 1 {
        return None; // not square-free mod p
    }
    let mut out = Vec::new();
    for r in roots_mod(&sp, p) {
        if let Some(gamma) = lift_root(sqfree, r, p, bound) {
            // verified against the full polynomial, not just the lift
            if eval_rat(full, &gamma).is_zero() {
                out.push(gamma);
            }
        }
    }
    Some(out)
}

fn eval_rat(b: &[BigInt], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in b.iter().rev() {
        acc = acc * x + Rat::from_integer(c.clone());
    }
    acc
}

fn reduce_mod(b: &[BigInt], p: u64) -> Vec<u64> {
    let pp = BigInt::from(p);
    let mut v: Vec<u64> = b
        .iter()
        .map(|c| c.mod_floor(&pp).to_u64().expect("residue fits in u64"))
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn eval_mod(b: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in b.iter().rev() {
        acc = (mulmod(acc, x, p) + c) % p;
    }
    acc
}

fn derivative_mod(b: &[u64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = b
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(c, (i as u64) % p, p))
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn invmod(a: u64, p: u64) -> u64 {
    // Fermat: p prime, a != 0 mod p
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        // a mod b
        while a.len() >= b.len() && !a.is_empty() {
            let lc_inv = invmod(*b.last().unwrap(), p);
            let factor = mulmod(*a.last().unwrap(), lc_inv, p);
            let shift = a.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                let sub = mulmod(factor, c, p);
                let idx = shift + i;
                a[idx] = (a[idx] + p - sub) % p;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn roots_mod(b: &[u64], p: u64) -> Vec<u64> {
    (0..p).filter(|&x| eval_mod(b, x, p) == 0).collect()
}

/// Newton-lifts a simple root of `sqfree` from mod `p` to a modulus past
/// the reconstruction bound, then reads off a rational.
fn lift_root(sqfree: &[BigInt], r: u64, p: u64, bound: &BigInt) -> Option<Rat> {
    let target = BigInt::from(2) * bound * bound;
    let mut modulus = BigInt::from(p);
    let mut root = BigInt::from(r);
    let deriv: Vec<BigInt> = sqfree
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    while modulus <= target {
        modulus = &modulus * &modulus;
        let fval = eval_bigint_mod(sqfree, &root, &modulus);
        let dval = eval_bigint_mod(&deriv, &root, &modulus);
        let dinv = modinv_big(&dval, &modulus)?;
        root = (&root - fval * dinv).mod_floor(&modulus);
    }
    rational_reconstruct(&root, &modulus, bound)
}

fn eval_bigint_mod(b: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in b.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn modinv_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Unique `n/d` with `n ≡ r*d (mod m)`, `|n| <= bound`, `0 < d <= bound`,
/// assuming `m > 2*bound^2`.
fn rational_reconstruct(r: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Rat> {
    let mut r0 = m.clone();
    let mut r1 = r.mod_floor(m);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while &r1.abs() > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rat::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn poly(cs: &[(i64, i64)]) -> UniPoly {
        UniPoly::from_coeffs(cs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let a = poly(&[(6, 1), (11, 1), (6, 1), (1, 1)]); // (x+1)(x+2)(x+3)
        let b = poly(&[(2, 1), (1, 1)]);
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q.mul(&b), a);
        assert!(a.exact_divide(&poly(&[(5, 1), (1, 1)])).is_err());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let common = poly(&[(1, 2), (1, 1)]); // x + 1/2
        let a = common.mul(&poly(&[(3, 1), (1, 1)]));
        let b = common.mul(&poly(&[(-4, 1), (1, 1)]));
        assert_eq!(a.gcd(&b), common.monic());
    }

    #[test]
    fn roots_of_small_products() {
        // long-division oracle: build from known roots, recover them
        let roots = vec![rat(-5, 6), rat(-7, 6), rat_int(-1)];
        let b = UniPoly::monic_from_roots(roots.iter());
        assert_eq!(b.rational_roots().unwrap(), RootList::new(roots));
    }

    #[test]
    fn roots_with_multiplicity() {
        let b = UniPoly::linear(&rat_int(-1)).mul(&UniPoly::linear(&rat_int(-1)));
        let rl = b.rational_roots().unwrap();
        assert_eq!(rl.as_slice(), &[rat_int(-1), rat_int(-1)]);
        assert!(!rl.is_squarefree());
    }

    #[test]
    fn scaled_polynomials_have_same_roots() {
        let b = UniPoly::monic_from_roots([rat(-19, 21), rat(-4, 3)].iter()).scale(&rat(-63, 5));
        let rl = b.rational_roots().unwrap();
        assert_eq!(rl.as_slice(), &[rat(-4, 3), rat(-19, 21)]);
    }

    #[test]
    fn irrational_factor_is_an_error() {
        // (x^2 - 2)(x + 1)
        let b = poly(&[(-2, 1), (0, 1), (1, 1)]).mul(&UniPoly::linear(&rat_int(-1)));
        assert!(matches!(
            b.rational_roots(),
            Err(Error::IrrationalResidual(_))
        ));
    }

    #[test]
    fn zero_roots_and_huge_coefficients() {
        // x^2 * prod of 18 roots with denominator 30: mimics a b-function
        let nums: [i64; 18] = [
            13, 16, 19, 22, 23, 25, 26, 28, 29, 31, 32, 34, 35, 37, 38, 41, 44, 47,
        ];
        let mut roots: Vec<Rat> = nums.iter().map(|&n| rat(-n, 30)).collect();
        let mut b = UniPoly::monic_from_roots(roots.iter());
        b = b.mul(&poly(&[(0, 1), (0, 1), (1, 1)])); // times x^2
        roots.push(Rat::zero());
        roots.push(Rat::zero());
        assert_eq!(b.rational_roots().unwrap(), RootList::new(roots));
    }
}
