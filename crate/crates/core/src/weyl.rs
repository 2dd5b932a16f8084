//! The Weyl algebra D extended by the commuting symbol `s` and an extra
//! partial `dt`, in the PBW presentation used for annihilator and
//! b-function computation.
//!
//! Generators over `Q`: `x_1..x_n`, `d_1..d_n` (`d_i` differentiates along
//! `x_i`), `s`, `dt`. Relations:
//!
//! ```text
//! d_i x_i = x_i d_i + 1        dt s = s dt - dt
//! ```
//!
//! and every other generator pair commutes. Elements are kept in the
//! canonical basis `x^a d^b s^j dt^k`; multiplication rewrites straight
//! into that basis via the closed forms
//!
//! ```text
//! d^b x^a  = sum_{v <= min(a,b)} prod_i C(b_i,v_i) * a_i!/(a_i-v_i)! * x^{a-v} d^{b-v}
//! dt^k s^j = (s-k)^j dt^k
//! ```
//!
//! Monomials are flat exponent vectors laid out `[x | d | s | dt]`, so one
//! order spec of width `2n+2` covers the whole ring.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::order::{BaseOrder, Block, MonomialOrderSpec};
use crate::poly::{Monomial, MultiPoly, VarSet};
use crate::rational::Rat;
use crate::unipoly::UniPoly;

/// Ring context: the `x`-variable names fix everything else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylRing {
    x: VarSet,
}

impl WeylRing {
    pub fn new(x: &VarSet) -> Result<WeylRing> {
        if x.is_empty() {
            return Err(Error::precondition("Weyl algebra needs >= 1 variable"));
        }
        for (i, name) in x.names().iter().enumerate() {
            if name.is_empty() || name == "s" || name == "dt" {
                return Err(Error::precondition(format!(
                    "variable name `{name}` is reserved"
                )));
            }
            if x.names()[..i].contains(name) {
                return Err(Error::precondition(format!(
                    "duplicate variable name `{name}`"
                )));
            }
        }
        Ok(WeylRing { x: x.clone() })
    }

    pub fn nvars(&self) -> usize {
        self.x.len()
    }

    /// Slot count of the flattened exponent layout.
    pub fn width(&self) -> usize {
        2 * self.x.len() + 2
    }

    pub fn x_slot(&self, i: usize) -> usize {
        i
    }

    pub fn d_slot(&self, i: usize) -> usize {
        self.x.len() + i
    }

    pub fn s_slot(&self) -> usize {
        2 * self.x.len()
    }

    pub fn t_slot(&self) -> usize {
        2 * self.x.len() + 1
    }

    pub fn xvars(&self) -> &VarSet {
        &self.x
    }

    /// Ring of `apply_to_fs` numerators: the `x` variables plus `s`.
    pub fn fs_vars(&self) -> VarSet {
        self.x.extend(["s"])
    }

    pub fn slot_name(&self, slot: usize) -> String {
        let n = self.x.len();
        if slot < n {
            self.x.name(slot).to_string()
        } else if slot < 2 * n {
            format!("d{}", self.x.name(slot - n))
        } else if slot == 2 * n {
            "s".to_string()
        } else {
            "dt".to_string()
        }
    }

    /// Elimination order for `dt`: block `{dt}` over one degree-reverse-lex
    /// block holding everything else.
    pub fn elim_dt_order(&self) -> MonomialOrderSpec {
        let n = self.nvars();
        let mut lower: Vec<usize> = (0..n).map(|i| self.d_slot(i)).collect();
        lower.extend((0..n).map(|i| self.x_slot(i)));
        lower.push(self.s_slot());
        MonomialOrderSpec::new(
            self.width(),
            vec![
                Block {
                    vars: vec![self.t_slot()],
                    base: BaseOrder::DegLex,
                },
                Block {
                    vars: lower,
                    base: BaseOrder::DegRevLex,
                },
            ],
        )
        .expect("valid partition")
    }

    /// The b-function block order `{d} >> {x} >> {s}`: degree-lex blocks
    /// with `d_1 > ... > d_n` and `x_n > ... > x_1`. (`dt` tops the tower so
    /// the same spec also serves operators that still mention it.)
    pub fn bf_order(&self) -> MonomialOrderSpec {
        let n = self.nvars();
        MonomialOrderSpec::new(
            self.width(),
            vec![
                Block {
                    vars: vec![self.t_slot()],
                    base: BaseOrder::DegLex,
                },
                Block {
                    vars: (0..n).map(|i| self.d_slot(i)).collect(),
                    base: BaseOrder::DegLex,
                },
                Block {
                    vars: (0..n).rev().map(|i| self.x_slot(i)).collect(),
                    base: BaseOrder::DegLex,
                },
                Block {
                    vars: vec![self.s_slot()],
                    base: BaseOrder::DegLex,
                },
            ],
        )
        .expect("valid partition")
    }

    /// Slot mask selecting `x`, `d` and `s` (drops `dt`).
    pub fn ds_mask(&self) -> Vec<bool> {
        let mut m = vec![true; self.width()];
        m[self.t_slot()] = false;
        m
    }

    /// Slot mask selecting only the `x` block.
    pub fn x_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.width()];
        for i in 0..self.nvars() {
            m[self.x_slot(i)] = true;
        }
        m
    }

    /// Slot mask selecting only `s`.
    pub fn s_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.width()];
        m[self.s_slot()] = true;
        m
    }
}

/// Canonical-basis monomial `x^a d^b s^j dt^k` as a flat exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PBWMonomial(pub Vec<u32>);

impl PBWMonomial {
    pub fn one(width: usize) -> Self {
        PBWMonomial(vec![0; width])
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn divisible_by(&self, other: &PBWMonomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn div(&self, other: &PBWMonomial) -> PBWMonomial {
        PBWMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &PBWMonomial) -> PBWMonomial {
        PBWMonomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// Exponent-vector sum: the leading monomial of a product.
    pub fn mul(&self, other: &PBWMonomial) -> PBWMonomial {
        PBWMonomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// True when every slot outside `mask` is zero.
    pub fn within(&self, mask: &[bool]) -> bool {
        self.0
            .iter()
            .zip(mask)
            .all(|(&e, &keep)| keep || e == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PBWOperator {
    ring: WeylRing,
    terms: BTreeMap<PBWMonomial, Rat>,
}

impl PBWOperator {
    pub fn zero(ring: &WeylRing) -> Self {
        PBWOperator {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &WeylRing, c: Rat) -> Self {
        let mut op = PBWOperator::zero(ring);
        op.add_term(PBWMonomial::one(ring.width()), c);
        op
    }

    pub fn one(ring: &WeylRing) -> Self {
        PBWOperator::constant(ring, Rat::one())
    }

    fn generator(ring: &WeylRing, slot: usize) -> Self {
        let mut e = vec![0; ring.width()];
        e[slot] = 1;
        let mut op = PBWOperator::zero(ring);
        op.add_term(PBWMonomial(e), Rat::one());
        op
    }

    pub fn x(ring: &WeylRing, i: usize) -> Self {
        PBWOperator::generator(ring, ring.x_slot(i))
    }

    pub fn d(ring: &WeylRing, i: usize) -> Self {
        PBWOperator::generator(ring, ring.d_slot(i))
    }

    pub fn s(ring: &WeylRing) -> Self {
        PBWOperator::generator(ring, ring.s_slot())
    }

    pub fn dt(ring: &WeylRing) -> Self {
        PBWOperator::generator(ring, ring.t_slot())
    }

    /// Embeds a polynomial in the `x` variables as a multiplication operator.
    pub fn from_poly(ring: &WeylRing, f: &MultiPoly) -> Result<Self> {
        if f.vars() != ring.xvars() {
            return Err(Error::precondition(
                "polynomial ring does not match Weyl ring variables",
            ));
        }
        let mut op = PBWOperator::zero(ring);
        for (m, c) in f.terms() {
            let mut e = vec![0; ring.width()];
            e[..ring.nvars()].copy_from_slice(&m.0);
            op.add_term(PBWMonomial(e), c.clone());
        }
        Ok(op)
    }

    pub fn ring(&self) -> &WeylRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PBWMonomial, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: PBWMonomial, c: Rat) {
        debug_assert_eq!(m.0.len(), self.ring.width());
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

    fn assert_same_ring(&self, other: &PBWOperator) {
        assert_eq!(self.ring, other.ring, "operators from different rings");
    }

    pub fn add(&self, other: &PBWOperator) -> PBWOperator {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> PBWOperator {
        PBWOperator {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &PBWOperator) -> PBWOperator {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> PBWOperator {
        if c.is_zero() {
            return PBWOperator::zero(&self.ring);
        }
        PBWOperator {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    /// Noncommutative product, rewritten into the canonical basis.
    pub fn mul(&self, other: &PBWOperator) -> PBWOperator {
        self.assert_same_ring(other);
        let mut out = PBWOperator::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                term_mul_into(&self.ring, ma, mb, &(ca * cb), &mut out);
            }
        }
        out
    }

    pub fn commutator(&self, other: &PBWOperator) -> PBWOperator {
        self.mul(other).sub(&other.mul(self))
    }

    /// True when no term involves `dt` (the operator lies in `D[s]`).
    pub fn in_ds(&self) -> bool {
        let t = self.ring.t_slot();
        self.terms.keys().all(|m| m.0[t] == 0)
    }

    /// True when no term involves `dt` or `s` (the operator lies in `D`).
    pub fn in_d(&self) -> bool {
        let s = self.ring.s_slot();
        self.in_ds() && self.terms.keys().all(|m| m.0[s] == 0)
    }

    /// True for pure `x`-polynomials.
    pub fn is_polynomial(&self) -> bool {
        let mask = self.ring.x_mask();
        self.terms.keys().all(|m| m.within(&mask))
    }

    /// True for pure `s`-polynomials.
    pub fn is_s_polynomial(&self) -> bool {
        let mask = self.ring.s_mask();
        self.terms.keys().all(|m| m.within(&mask))
    }

    /// Substitutes the central symbol `s := gamma`. Requires the operator
    /// to lie in `D[s]`: past `dt` the substitution would not be a ring map.
    pub fn substitute_s(&self, gamma: &Rat) -> Result<PBWOperator> {
        if !self.in_ds() {
            return Err(Error::precondition(
                "s-substitution requires an operator free of dt",
            ));
        }
        let s = self.ring.s_slot();
        let mut out = PBWOperator::zero(&self.ring);
        for (m, c) in &self.terms {
            let j = m.0[s];
            let mut coeff = c.clone();
            for _ in 0..j {
                coeff *= gamma;
            }
            let mut e = m.0.clone();
            e[s] = 0;
            out.add_term(PBWMonomial(e), coeff);
        }
        Ok(out)
    }

    /// Reads a pure `x`-polynomial back into the commutative ring.
    pub fn to_poly(&self) -> Result<MultiPoly> {
        if !self.is_polynomial() {
            return Err(Error::precondition("operator is not an x-polynomial"));
        }
        let n = self.ring.nvars();
        Ok(MultiPoly::from_terms(
            self.ring.xvars(),
            self.terms
                .iter()
                .map(|(m, c)| (Monomial(m.0[..n].to_vec()), c.clone())),
        ))
    }

    /// Reads a pure `s`-polynomial as a univariate polynomial.
    pub fn to_unipoly_s(&self) -> Result<UniPoly> {
        if !self.is_s_polynomial() {
            return Err(Error::precondition("operator is not an s-polynomial"));
        }
        let s = self.ring.s_slot();
        let deg = self
            .terms
            .keys()
            .map(|m| m.0[s] as usize)
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![Rat::zero(); deg + 1];
        for (m, c) in &self.terms {
            coeffs[m.0[s] as usize] = c.clone();
        }
        Ok(UniPoly::from_coeffs(coeffs))
    }

    /// Divides out rational content (see `MultiPoly::primitive_part`).
    pub fn primitive_part(&self) -> PBWOperator {
        use num_integer::Integer;
        use num_traits::Signed;
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
        if self.terms.values().next().unwrap().is_negative() {
            scale = -scale;
        }
        self.scale(&scale)
    }
}

impl std::fmt::Display for PBWOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::rational::fmt_rat;
        if self.is_zero() {
            return write!(f, "0");
        }
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
            if !mag.is_one() || m.total_degree() == 0 {
                factors.push(fmt_rat(&mag));
            }
            for (slot, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.slot_name(slot)),
                    _ => factors.push(format!("{}^{}", self.ring.slot_name(slot), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn falling(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
    }
    acc
}

/// Accumulates `coeff * (m1 * m2)` into `out`, rewriting into the canonical
/// basis. `m1 = x^a d^b s^j dt^k`, `m2 = x^a' d^b' s^j' dt^k'`.
pub(crate) fn term_mul_into(
    ring: &WeylRing,
    m1: &PBWMonomial,
    m2: &PBWMonomial,
    coeff: &Rat,
    out: &mut PBWOperator,
) {
    let n = ring.nvars();
    let (s_slot, t_slot) = (ring.s_slot(), ring.t_slot());
    let k = m1.0[t_slot];
    let j2 = m2.0[s_slot];

    // v ranges over the componentwise box min(b, a'); odometer enumeration
    let vmax: Vec<u32> = (0..n)
        .map(|i| m1.0[ring.d_slot(i)].min(m2.0[ring.x_slot(i)]))
        .collect();

    // dt^k s^j2 = (s-k)^j2 dt^k, expanded binomially over powers of s
    let mut s_terms: Vec<(u32, BigInt)> = Vec::with_capacity(j2 as usize + 1);
    if k == 0 || j2 == 0 {
        s_terms.push((j2, BigInt::one()));
    } else {
        let minus_k = -BigInt::from(k);
        for m in 0..=j2 {
            let mut c = binomial(j2, m);
            for _ in 0..(j2 - m) {
                c *= &minus_k;
            }
            s_terms.push((m, c));
        }
    }

    let mut v = vec![0u32; n];
    loop {
        let mut weyl_coeff = BigInt::one();
        for i in 0..n {
            if v[i] > 0 {
                weyl_coeff *= binomial(m1.0[ring.d_slot(i)], v[i])
                    * falling(m2.0[ring.x_slot(i)], v[i]);
            }
        }
        for (sm, sc) in &s_terms {
            let mut e = vec![0u32; ring.width()];
            for i in 0..n {
                e[ring.x_slot(i)] = m1.0[ring.x_slot(i)] + m2.0[ring.x_slot(i)] - v[i];
                e[ring.d_slot(i)] = m1.0[ring.d_slot(i)] + m2.0[ring.d_slot(i)] - v[i];
            }
            e[s_slot] = m1.0[s_slot] + sm;
            e[t_slot] = m1.0[t_slot] + m2.0[t_slot];
            let c = coeff * Rat::from_integer(&weyl_coeff * sc);
            out.add_term(PBWMonomial(e), c);
        }
        // advance odometer
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if v[i] < vmax[i] {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// `p * f^s` written as `numerator * f^(s - shift)`: the numerator is a
/// polynomial in the `x` variables and `s`, computed by the Leibniz rule
///
/// ```text
/// d_i (h f^(s-m)) = (d_i h) f^(s-m) + (s-m) h (d_i f) f^(s-m-1)
/// ```
///
/// `p` must lie in `D[s]`. The operator annihilates `f^s` exactly when the
/// numerator is zero, which makes this an independent oracle for
/// annihilator computations.
#[derive(Debug, Clone)]
pub struct FsImage {
    pub numerator: MultiPoly,
    pub shift: u32,
}

impl FsImage {
    pub fn annihilated(&self) -> bool {
        self.numerator.is_zero()
    }
}

pub fn apply_to_fs(p: &PBWOperator, f: &MultiPoly) -> Result<FsImage> {
    let ring = p.ring();
    if f.vars() != ring.xvars() {
        return Err(Error::precondition(
            "f must live in the Weyl ring's x variables",
        ));
    }
    if f.is_zero() {
        return Err(Error::precondition("f must be nonzero"));
    }
    if !p.in_ds() {
        return Err(Error::precondition(
            "apply_to_fs requires an operator in D[s]",
        ));
    }
    let n = ring.nvars();
    let fs_vars = ring.fs_vars();
    let s_poly = MultiPoly::var(&fs_vars, n);
    let f_ext = f.embed(&fs_vars);
    let df_ext: Vec<MultiPoly> = (0..n).map(|i| f.partial(i).embed(&fs_vars)).collect();

    let mut images: Vec<(MultiPoly, u32)> = Vec::new();
    for (m, c) in p.terms() {
        // rightmost factor first: s^j, then d^b, then x^a
        let mut h = MultiPoly::constant(&fs_vars, c.clone());
        for _ in 0..m.0[ring.s_slot()] {
            h = h.mul(&s_poly);
        }
        let mut shift = 0u32;
        for i in 0..n {
            for _ in 0..m.0[ring.d_slot(i)] {
                let s_minus_m =
                    s_poly.sub(&MultiPoly::constant(&fs_vars, Rat::from_integer(shift.into())));
                h = h.partial(i).mul(&f_ext).add(&s_minus_m.mul(&h).mul(&df_ext[i]));
                shift += 1;
            }
        }
        for i in 0..n {
            for _ in 0..m.0[ring.x_slot(i)] {
                h = h.mul(&MultiPoly::var(&fs_vars, i));
            }
        }
        images.push((h, shift));
    }

    let max_shift = images.iter().map(|(_, s)| *s).max().unwrap_or(0);
    let mut numerator = MultiPoly::zero(&fs_vars);
    for (h, shift) in images {
        let mut lifted = h;
        for _ in 0..(max_shift - shift) {
            lifted = lifted.mul(&f_ext);
        }
        numerator = numerator.add(&lifted);
    }
    Ok(FsImage {
        numerator,
        shift: max_shift,
    })
}
