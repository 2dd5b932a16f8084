//! The annihilator of `f^s` in D[s].
//!
//! Start in the extended algebra D<s, dt> from the ideal
//!
//!   I(f) = < f*dt + s,  d_i + (df/dx_i)*dt  (i = 1..n) >
//!
//! whose solutions encode the graph embedding t = f(x). Eliminating `dt`
//! from I(f) lands exactly on Ann(f^s): every element of the intersection
//! with D[s] kills f^s, and conversely.

use crate::error::{Error, Result};
use crate::groebner::{buchberger, extract_subring, GroebnerBasis, GroebnerConfig};
use crate::poly::MultiPoly;
use crate::weyl::{PBWOperator, WeylRing};

/// Generators of the graph ideal I(f) in D<s, dt>.
pub fn bm_ideal(ring: &WeylRing, f: &MultiPoly) -> Result<Vec<PBWOperator>> {
    if f.vars() != ring.xvars() {
        return Err(Error::precondition(
            "polynomial variables do not match the ring",
        ));
    }
    if f.is_zero() {
        return Err(Error::precondition("f must be nonzero"));
    }
    let dt = PBWOperator::dt(ring);
    let s = PBWOperator::s(ring);
    let mut gens = Vec::with_capacity(ring.nvars() + 1);
    gens.push(PBWOperator::from_poly(ring, f)?.mul(&dt).add(&s));
    for i in 0..ring.nvars() {
        let di = PBWOperator::d(ring, i);
        let fi = PBWOperator::from_poly(ring, &f.partial(i))?;
        gens.push(di.add(&fi.mul(&dt)));
    }
    Ok(gens)
}

/// Reduced Groebner basis of Ann(f^s) inside D[s], via dt-elimination.
pub fn ann_fs(ring: &WeylRing, f: &MultiPoly, cfg: &GroebnerConfig) -> Result<Vec<PBWOperator>> {
    let gens = bm_ideal(ring, f)?;
    let ord = ring.elim_dt_order();
    let gb = buchberger(&gens, &ord, cfg)?;
    let keep = ring.ds_mask();
    let ann = extract_subring(&gb, &keep)?;
    if ann.is_empty() {
        return Err(Error::inconsistency(
            "dt-elimination produced no operators in D[s]",
        ));
    }
    Ok(ann)
}

/// `ann_fs` rebased: same generators re-reduced under `ord` so downstream
/// eliminations can rely on their own order.
pub fn ann_fs_under(
    ring: &WeylRing,
    f: &MultiPoly,
    ord: &crate::order::MonomialOrderSpec,
    cfg: &GroebnerConfig,
) -> Result<GroebnerBasis> {
    let ann = ann_fs(ring, f, cfg)?;
    buchberger(&ann, ord, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::VarSet;

    fn setup(vars: &[&str], f: &str) -> (WeylRing, MultiPoly) {
        let vs = VarSet::new(vars.iter().copied());
        let ring = WeylRing::new(&vs).unwrap();
        let poly = parse_poly(f, &vs).unwrap();
        (ring, poly)
    }

    #[test]
    fn bm_generators_shape() {
        let (ring, f) = setup(&["x", "y"], "x^2 + y^2");
        let gens = bm_ideal(&ring, &f).unwrap();
        assert_eq!(gens.len(), 3);
        // first generator: x^2 dt + y^2 dt + s
        assert_eq!(gens[0].num_terms(), 3);
    }

    #[test]
    fn ann_elements_annihilate() {
        for (vars, f) in [
            (vec!["x"], "x"),
            (vec!["x"], "x^3"),
            (vec!["x", "y"], "x*y"),
            (vec!["x", "y"], "x^2 + y^2"),
            (vec!["x", "y"], "x^3 + y^2"),
            (vec!["x", "y"], "x^3 + y^4"),
        ] {
            let (ring, poly) = setup(&vars.iter().map(|s| *s).collect::<Vec<_>>(), f);
            let ann = ann_fs(&ring, &poly, &GroebnerConfig::default()).unwrap();
            assert!(!ann.is_empty(), "empty annihilator for {f}");
            for p in &ann {
                assert!(p.in_ds(), "dt survived elimination in {p}");
                let img = crate::weyl::apply_to_fs(p, &poly).unwrap();
                assert!(img.annihilated(), "{p} does not kill ({f})^s");
            }
        }
    }

    #[test]
    fn euler_operator_membership_smooth_case() {
        // f = x: Ann(x^s) = < x dx - s >
        let (ring, f) = setup(&["x"], "x");
        let ann = ann_fs(&ring, &f, &GroebnerConfig::default()).unwrap();
        let x = PBWOperator::x(&ring, 0);
        let dx = PBWOperator::d(&ring, 0);
        let s = PBWOperator::s(&ring);
        let euler = x.mul(&dx).sub(&s);
        let gb = buchberger(&ann, &ring.bf_order(), &GroebnerConfig::default()).unwrap();
        assert!(gb.contains(&euler));
    }
}
