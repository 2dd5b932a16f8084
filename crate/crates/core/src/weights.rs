//! Weight systems and semi-weighted-homogeneous classification.
//!
//! A weight system `(d; w_1..w_n)` assigns variable `x_i` the weight `w_i`;
//! a monomial's weighted degree is the weight-dot of its exponent vector.
//! A germ `f` with `f(0) = 0` is semi-weighted-homogeneous of type
//! `(d; w)` when its weighted-degree-`d` part `f0` is nonzero and has an
//! isolated singularity, and every remaining term has weighted degree
//! strictly above `d`. The classifier checks the combinatorial split; the
//! isolatedness of `f0` is the caller's concern (it is certified separately
//! through the Milnor number).

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub d: u64,
    pub w: Vec<u64>,
}

impl WeightSystem {
    pub fn new(d: u64, w: Vec<u64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::precondition("weight system needs >= 1 weight"));
        }
        if w.iter().any(|&wi| wi == 0) {
            return Err(Error::precondition("weights must be positive"));
        }
        if w.iter().any(|&wi| wi > d) {
            return Err(Error::precondition(
                "weighted degree d must dominate every weight",
            ));
        }
        Ok(WeightSystem { d, w })
    }

    pub fn nvars(&self) -> usize {
        self.w.len()
    }

    /// Sum of the weights, the shift appearing in spectral-root formulas.
    pub fn weight_sum(&self) -> u64 {
        self.w.iter().sum()
    }
}

pub fn weighted_degree(m: &Monomial, ws: &WeightSystem) -> Result<u64> {
    if m.0.len() != ws.nvars() {
        return Err(Error::precondition(format!(
            "monomial has {} exponents, weight system has {}",
            m.0.len(),
            ws.nvars()
        )));
    }
    Ok(m.0
        .iter()
        .zip(&ws.w)
        .map(|(&e, &w)| e as u64 * w)
        .sum())
}

/// Split of `f` into its initial weighted-homogeneous part and the tail.
#[derive(Debug, Clone)]
pub struct SwhSplit {
    /// Terms of weighted degree exactly `d`.
    pub f0: MultiPoly,
    /// The remaining terms, `f - f0`.
    pub tail: MultiPoly,
    /// True when `f0 != 0` and every tail term has weighted degree `> d`.
    pub ok: bool,
}

/// Splits `f` by weighted degree against `ws`.
///
/// Requires `f(0) = 0` and matching variable counts.
pub fn classify_swh(f: &MultiPoly, ws: &WeightSystem) -> Result<SwhSplit> {
    if f.nvars() != ws.nvars() {
        return Err(Error::precondition(
            "variable count differs from weight system",
        ));
    }
    if !f.vanishes_at_origin() {
        return Err(Error::precondition("f must vanish at the origin"));
    }
    let mut f0 = MultiPoly::zero(f.vars());
    let mut tail = MultiPoly::zero(f.vars());
    let mut all_above = true;
    for (m, c) in f.terms() {
        let wd = weighted_degree(m, ws)?;
        if wd == ws.d {
            f0.add_term(m.clone(), c.clone());
        } else {
            if wd < ws.d {
                all_above = false;
            }
            tail.add_term(m.clone(), c.clone());
        }
    }
    let ok = !f0.is_zero() && all_above;
    Ok(SwhSplit { f0, tail, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::VarSet;

    #[test]
    fn weight_system_validation() {
        assert!(WeightSystem::new(30, vec![10, 3]).is_ok());
        assert!(WeightSystem::new(5, vec![10, 3]).is_err());
        assert!(WeightSystem::new(5, vec![0, 3]).is_err());
    }

    #[test]
    fn split_recognizes_mu_constant_deformation() {
        let v = VarSet::new(["x", "y"]);
        let ws = WeightSystem::new(30, vec![10, 3]).unwrap();
        // x^3 and y^10 sit at weighted degree 30; x*y^7 at 31
        let f = parse_poly("x^3 + y^10 + 2*x*y^7", &v).unwrap();
        let s = classify_swh(&f, &ws).unwrap();
        assert!(s.ok);
        assert_eq!(s.f0, parse_poly("x^3 + y^10", &v).unwrap());
        assert_eq!(s.tail, parse_poly("2*x*y^7", &v).unwrap());
    }

    #[test]
    fn split_flags_terms_below_degree() {
        let v = VarSet::new(["x", "y"]);
        let ws = WeightSystem::new(30, vec![10, 3]).unwrap();
        let f = parse_poly("x^3 + y^3", &v).unwrap(); // y^3 has wdeg 9 < 30
        let s = classify_swh(&f, &ws).unwrap();
        assert!(!s.ok);
    }

    #[test]
    fn requires_vanishing_at_origin() {
        let v = VarSet::new(["x", "y"]);
        let ws = WeightSystem::new(6, vec![2, 3]).unwrap();
        let f = parse_poly("x^3 + 1", &v).unwrap();
        assert!(classify_swh(&f, &ws).is_err());
    }
}
