//! Global and local b-functions.
//!
//! The global b-function b_f is the monic generator of
//! (Ann(f^s) + <f>) ∩ Q[s]; the reduced one divides out the universal
//! (s+1) factor by adjoining the partial derivatives instead. Both come
//! from one elimination Groebner basis under the block order
//! {∂} ≫ {x} ≫ {s}: with s in the last block the unique pure-s element of
//! the reduced basis is the generator of the intersection.
//!
//! Local b-functions at the origin are computed two ways: by filtering
//! global roots through the support test (certify_root), and — for
//! semi-weighted homogeneous f — by the candidate-root loop that certifies
//! shifts of the weighted-homogeneous exponents and accounts dimensions
//! until the Milnor number is exhausted.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::annihilator::ann_fs;
use crate::cohomology::cohomology_solution_space;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, extract_subring, GroebnerBasis, GroebnerConfig};
use crate::order::MonomialOrderSpec;
use crate::poly::MultiPoly;
use crate::rational::{rat_int, Rat};
use crate::unipoly::{RootList, UniPoly};
use crate::weights::{classify_swh, WeightSystem};
use crate::weyl::{PBWOperator, WeylRing};

/// Outcome of the root test for one candidate γ: the reduced basis of
/// Ann(f^s) + <f, ∂f> + <s − γ>, its polynomial part, and the two derived
/// flags. `is_factor` answers for the global b-function; adding the origin
/// test answers for the local one.
#[derive(Debug, Clone)]
pub struct RootCertificate {
    pub gamma: Rat,
    pub is_factor: bool,
    pub basis: GroebnerBasis,
    pub polynomial_part: Vec<MultiPoly>,
    pub origin_in_support: bool,
}

/// Local b-function data: square-free root set, the solution-space
/// dimension at each root, and their total μ.
#[derive(Debug, Clone)]
pub struct LocalBFResult {
    pub roots: RootList,
    pub dims: BTreeMap<Rat, usize>,
    pub milnor: usize,
}

/// The monic generator of (ideal ∩ Q[s]) read off an elimination basis.
fn univariate_generator(
    ring: &WeylRing,
    gens: &[PBWOperator],
    ord: &MonomialOrderSpec,
    cfg: &GroebnerConfig,
) -> Result<UniPoly> {
    let gb = buchberger(gens, ord, cfg)?;
    let pure = extract_subring(&gb, &ring.s_mask())?;
    let Some(b) = pure.first() else {
        return Err(Error::inconsistency(
            "elimination produced no univariate element in s",
        ));
    };
    debug_assert_eq!(pure.len(), 1, "reduced basis has one pure-s element");
    Ok(b.to_unipoly_s()?.monic())
}

fn ideal_with_f(ring: &WeylRing, f: &MultiPoly, ann: &[PBWOperator]) -> Result<Vec<PBWOperator>> {
    let mut gens = ann.to_vec();
    gens.push(PBWOperator::from_poly(ring, f)?);
    Ok(gens)
}

fn ideal_with_f_and_jacobian(
    ring: &WeylRing,
    f: &MultiPoly,
    ann: &[PBWOperator],
) -> Result<Vec<PBWOperator>> {
    let mut gens = ideal_with_f(ring, f, ann)?;
    for i in 0..ring.nvars() {
        gens.push(PBWOperator::from_poly(ring, &f.partial(i))?);
    }
    Ok(gens)
}

/// Multiset of roots of the global b-function b_f.
pub fn global_bfunction(f: &MultiPoly, cfg: &GroebnerConfig) -> Result<RootList> {
    let ring = WeylRing::new(f.vars())?;
    global_bfunction_under(f, &ring.bf_order(), cfg)
}

/// `global_bfunction` under a caller-chosen elimination order; the order
/// must put the s slot in a final singleton block.
pub fn global_bfunction_under(
    f: &MultiPoly,
    ord: &MonomialOrderSpec,
    cfg: &GroebnerConfig,
) -> Result<RootList> {
    let ring = WeylRing::new(f.vars())?;
    let ann = ann_fs(&ring, f, cfg)?;
    let b = univariate_generator(&ring, &ideal_with_f(&ring, f, &ann)?, ord, cfg)?;
    b.rational_roots()
}

/// Roots of the reduced b-function b̃_f = b_f / (s+1).
pub fn global_reduced_bfunction(f: &MultiPoly, cfg: &GroebnerConfig) -> Result<RootList> {
    let ring = WeylRing::new(f.vars())?;
    global_reduced_bfunction_under(f, &ring.bf_order(), cfg)
}

/// `global_reduced_bfunction` under a caller-chosen elimination order.
pub fn global_reduced_bfunction_under(
    f: &MultiPoly,
    ord: &MonomialOrderSpec,
    cfg: &GroebnerConfig,
) -> Result<RootList> {
    let ring = WeylRing::new(f.vars())?;
    let ann = ann_fs(&ring, f, cfg)?;
    reduced_roots(&ring, f, &ann, ord, cfg)
}

/// Reduced-b-function roots from a precomputed annihilator basis; skips the
/// dt-elimination, which dominates the cost when several quantities are read
/// off the same Ann(f^s).
pub fn global_reduced_bfunction_from_ann(
    f: &MultiPoly,
    ann: &[PBWOperator],
    ord: &MonomialOrderSpec,
    cfg: &GroebnerConfig,
) -> Result<RootList> {
    let Some(first) = ann.first() else {
        return Err(Error::precondition("empty annihilator basis"));
    };
    let ring = first.ring().clone();
    reduced_roots(&ring, f, ann, ord, cfg)
}

fn reduced_roots(
    ring: &WeylRing,
    f: &MultiPoly,
    ann: &[PBWOperator],
    ord: &MonomialOrderSpec,
    cfg: &GroebnerConfig,
) -> Result<RootList> {
    let b = univariate_generator(ring, &ideal_with_f_and_jacobian(ring, f, ann)?, ord, cfg)?;
    b.rational_roots()
}

/// P(t) = Π (t^{d−w_i} − 1) / (t^{w_i} − 1). The full numerator product is
/// divided by the denominator factors sequentially: individual factors need
/// not divide each other, but the whole product always does for a valid
/// weight type.
pub fn poincare_polynomial(ws: &WeightSystem) -> Result<UniPoly> {
    let d = ws.d;
    if ws.w.iter().any(|&w| w >= d) {
        return Err(Error::precondition(
            "each weight must be smaller than the weighted degree",
        ));
    }
    let tpow_minus_one = |e: u64| {
        let mut coeffs = vec![Rat::zero(); e as usize + 1];
        coeffs[0] = rat_int(-1);
        coeffs[e as usize] = rat_int(1);
        UniPoly::from_coeffs(coeffs)
    };
    let mut p = UniPoly::one();
    for &w in &ws.w {
        p = p.mul(&tpow_minus_one(d - w));
    }
    for &w in &ws.w {
        p = p.exact_divide(&tpow_minus_one(w))?;
    }
    Ok(p)
}

/// Roots of the local b-function of a weighted homogeneous polynomial of
/// type (d; w) with isolated singularity: −(α + w₀)/d over the exponents α
/// of the Poincaré polynomial, w₀ = Σ w_i.
pub fn wh_bfunction_roots(ws: &WeightSystem) -> Result<RootList> {
    let p = poincare_polynomial(ws)?;
    let w0 = ws.weight_sum() as i64;
    let d = ws.d as i64;
    Ok(p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(alpha, _)| Rat::new((-(alpha as i64 + w0)).into(), d.into()))
        .collect())
}

/// Candidate local roots: integer shifts γ + k of the weighted-homogeneous
/// roots that stay inside the admissible window (−n, 0).
pub fn candidate_roots(e0: &RootList, n: usize, kmax: u32) -> RootList {
    let lower = rat_int(-(n as i64));
    let zero = Rat::zero();
    let mut out = BTreeSet::new();
    for g in e0.distinct() {
        for k in 0..=kmax {
            let v = &g + rat_int(k as i64);
            if v > lower && v < zero {
                out.insert(v);
            }
        }
    }
    out.into_iter().collect()
}

/// Reduced basis of Ann(f^s) + <f, ∂f> + <s − γ> with the derived factor
/// and support flags.
pub fn certify_root(
    ann: &[PBWOperator],
    f: &MultiPoly,
    gamma: &Rat,
    cfg: &GroebnerConfig,
) -> Result<RootCertificate> {
    let Some(first) = ann.first() else {
        return Err(Error::precondition("empty annihilator basis"));
    };
    let ord = first.ring().bf_order();
    certify_root_under(ann, f, gamma, &ord, cfg)
}

/// `certify_root` under a caller-chosen admissible order; the membership
/// flags do not depend on the order, the printed basis does.
pub fn certify_root_under(
    ann: &[PBWOperator],
    f: &MultiPoly,
    gamma: &Rat,
    ord: &MonomialOrderSpec,
    cfg: &GroebnerConfig,
) -> Result<RootCertificate> {
    let Some(first) = ann.first() else {
        return Err(Error::precondition("empty annihilator basis"));
    };
    let ring = first.ring().clone();
    // s is central, so modding out s - γ is the same as evaluating the
    // annihilator at s = γ; the Groebner run then never carries s around.
    let evaluated: Vec<PBWOperator> = ann
        .iter()
        .map(|p| p.substitute_s(gamma))
        .collect::<Result<_>>()?;
    let gens = ideal_with_f_and_jacobian(&ring, f, &evaluated)?;
    let mut gb = buchberger(&gens, ord, cfg)?;
    let is_factor = !gb.is_unit_ideal();
    if is_factor {
        // the reduced basis of the unevaluated ideal is s - γ plus the
        // s-free generators; s has the smallest head, so it goes first
        let s_minus_gamma =
            PBWOperator::s(&ring).sub(&PBWOperator::constant(&ring, gamma.clone()));
        gb.generators.insert(0, s_minus_gamma);
    }
    let polynomial_part: Vec<MultiPoly> = gb
        .generators
        .iter()
        .filter(|g| g.is_polynomial())
        .map(|g| g.to_poly())
        .collect::<Result<_>>()?;
    let origin_in_support =
        is_factor && polynomial_part.iter().all(|p| p.vanishes_at_origin());
    Ok(RootCertificate {
        gamma: gamma.clone(),
        is_factor,
        basis: gb,
        polynomial_part,
        origin_in_support,
    })
}

/// Local roots by support filtering: global reduced roots whose certificate
/// places the origin in the module support.
pub fn local_bfunction_via_support(
    f: &MultiPoly,
    cfg: &GroebnerConfig,
    degree_cap: u32,
) -> Result<RootList> {
    let ring = WeylRing::new(f.vars())?;
    local_bfunction_via_support_under(f, &ring.bf_order(), cfg, degree_cap)
}

/// `local_bfunction_via_support` under a caller-chosen elimination order.
pub fn local_bfunction_via_support_under(
    f: &MultiPoly,
    ord: &MonomialOrderSpec,
    cfg: &GroebnerConfig,
    degree_cap: u32,
) -> Result<RootList> {
    // terminating Milnor computation doubles as the isolatedness check
    crate::cohomology::milnor_number(f, degree_cap)?;
    let ring = WeylRing::new(f.vars())?;
    let ann = ann_fs(&ring, f, cfg)?;
    let global = reduced_roots(&ring, f, &ann, ord, cfg)?;
    let mut local = Vec::new();
    for gamma in global.distinct() {
        let cert = certify_root_under(&ann, f, &gamma, ord, cfg)?;
        if cert.origin_in_support {
            local.push(gamma);
        }
    }
    Ok(local.into_iter().collect())
}

/// Local b-function of a semi-weighted homogeneous polynomial by the
/// candidate-shift loop: certify each admissible γ + k, require the origin
/// in the support, and accumulate solution-space dimensions until they sum
/// to μ = P(1).
pub fn local_bfunction_swh(
    f: &MultiPoly,
    ws: &WeightSystem,
    kmax: u32,
    cfg: &GroebnerConfig,
    degree_cap: u32,
) -> Result<LocalBFResult> {
    let ring = WeylRing::new(f.vars())?;
    local_bfunction_swh_under(f, ws, kmax, &ring.bf_order(), cfg, degree_cap)
}

/// `local_bfunction_swh` under a caller-chosen elimination order.
pub fn local_bfunction_swh_under(
    f: &MultiPoly,
    ws: &WeightSystem,
    kmax: u32,
    ord: &MonomialOrderSpec,
    cfg: &GroebnerConfig,
    degree_cap: u32,
) -> Result<LocalBFResult> {
    let ring = WeylRing::new(f.vars())?;
    let ann = ann_fs(&ring, f, cfg)?;
    local_bfunction_swh_from_ann(f, ws, kmax, &ann, ord, cfg, degree_cap)
}

/// The candidate-shift loop from a precomputed annihilator basis.
pub fn local_bfunction_swh_from_ann(
    f: &MultiPoly,
    ws: &WeightSystem,
    kmax: u32,
    ann: &[PBWOperator],
    ord: &MonomialOrderSpec,
    cfg: &GroebnerConfig,
    degree_cap: u32,
) -> Result<LocalBFResult> {
    let split = classify_swh(f, ws)?;
    if !split.ok {
        return Err(Error::precondition(
            "polynomial is not semi-weighted homogeneous of the given type",
        ));
    }
    let n = f.nvars();
    let mu = {
        let p = poincare_polynomial(ws)?;
        let val = p.eval(&rat_int(1));
        let int = val.to_integer();
        use num_traits::ToPrimitive;
        int.to_usize().ok_or_else(|| {
            Error::precondition("weight type has non-positive Milnor number")
        })?
    };
    if mu == 0 {
        return Err(Error::precondition("weight type gives μ = 0"));
    }
    let e0 = wh_bfunction_roots(ws)?;

    let mut checked: BTreeSet<Rat> = BTreeSet::new();
    let mut roots: Vec<Rat> = Vec::new();
    let mut dims: BTreeMap<Rat, usize> = BTreeMap::new();
    let mut total = 0usize;
    let lower = rat_int(-(n as i64));

    for k in 0..=kmax {
        let level: BTreeSet<Rat> = e0
            .distinct()
            .into_iter()
            .map(|g| g + rat_int(k as i64))
            .filter(|v| *v > lower && *v < Rat::zero() && !checked.contains(v))
            .collect();
        for gamma in level {
            checked.insert(gamma.clone());
            let cert = certify_root_under(&ann, f, &gamma, ord, cfg)?;
            if !cert.origin_in_support {
                continue;
            }
            let basis = cohomology_solution_space(f, &gamma, &cert, degree_cap)?;
            let dim = basis.dim();
            if dim == 0 {
                continue;
            }
            roots.push(gamma.clone());
            dims.insert(gamma, dim);
            total += dim;
            if total == mu {
                return Ok(LocalBFResult {
                    roots: roots.into_iter().collect(),
                    dims,
                    milnor: mu,
                });
            }
        }
        if total == mu {
            break;
        }
    }
    if total == mu {
        return Ok(LocalBFResult {
            roots: roots.into_iter().collect(),
            dims,
            milnor: mu,
        });
    }
    Err(Error::inconsistency(format!(
        "dimension sum {total} ≠ μ = {mu} after shifts up to {kmax}; roots so far: [{}]",
        roots
            .iter()
            .map(|r| crate::rational::fmt_rat(r))
            .collect::<Vec<_>>()
            .join(", ")
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::VarSet;
    use crate::rational::rat;

    fn wsys(d: u64, w: &[u64]) -> WeightSystem {
        WeightSystem::new(d, w.to_vec()).unwrap()
    }

    #[test]
    fn poincare_small() {
        // (6,(2,3)): ((t^4-1)(t^3-1)) / ((t^2-1)(t^3-1)) = t^2 + 1
        let p = poincare_polynomial(&wsys(6, &[2, 3])).unwrap();
        assert_eq!(p, UniPoly::from_coeffs(vec![rat_int(1), rat_int(0), rat_int(1)]));
        assert_eq!(p.eval(&rat_int(1)), rat_int(2));
    }

    #[test]
    fn poincare_e18_type() {
        let p = poincare_polynomial(&wsys(30, &[10, 3])).unwrap();
        assert_eq!(p.eval(&rat_int(1)), rat_int(18));
        assert_eq!(p.degree(), 34);
        let nonzero = p.coeffs().iter().filter(|c| !c.is_zero()).count();
        assert_eq!(nonzero, 18);
    }

    #[test]
    fn poincare_sequential_division_handles_uneven_factors() {
        // (21,(7,2)): (t^19 - 1) is divisible by neither denominator factor
        // alone; only the assembled numerator product is
        let p = poincare_polynomial(&wsys(21, &[7, 2])).unwrap();
        assert_eq!(p.eval(&rat_int(1)), rat_int(19));
    }

    #[test]
    fn wh_roots_small() {
        let roots = wh_bfunction_roots(&wsys(6, &[2, 3])).unwrap();
        assert_eq!(roots, [rat(-5, 6), rat(-7, 6)].into_iter().collect());
    }

    #[test]
    fn wh_roots_e18_type() {
        let roots = wh_bfunction_roots(&wsys(30, &[10, 3])).unwrap();
        assert_eq!(roots.len(), 18);
        assert!(roots.contains(&rat(-44, 30)));
        assert!(roots.contains(&rat(-47, 30)));
        assert!(roots.contains(&rat(-13, 30)));
        let min = roots.as_slice().first().unwrap();
        assert_eq!(min, &rat(-47, 30));
    }

    #[test]
    fn candidates_window() {
        let e0: RootList = [rat(-5, 6), rat(-7, 6)].into_iter().collect();
        let cand = candidate_roots(&e0, 2, 2);
        let expected: RootList = [rat(-5, 6), rat(-7, 6), rat(-1, 6)].into_iter().collect();
        assert_eq!(cand, expected);

        let single: RootList = [rat(-1, 2)].into_iter().collect();
        assert_eq!(candidate_roots(&single, 1, 2), single);
    }

    #[test]
    fn candidates_e18_count() {
        let e0 = wh_bfunction_roots(&wsys(30, &[10, 3])).unwrap();
        let cand = candidate_roots(&e0, 2, 2);
        // brute-force recount
        let mut brute = BTreeSet::new();
        for g in e0.distinct() {
            for k in 0..=2 {
                let v = &g + rat_int(k);
                if v > rat_int(-2) && v < Rat::zero() {
                    brute.insert(v);
                }
            }
        }
        assert_eq!(cand.len(), brute.len());
        assert_eq!(cand.len(), 27);
    }

    #[test]
    fn global_roots_smooth_and_quadric() {
        let cfg = GroebnerConfig::default();
        let vx = VarSet::new(["x"]);
        let fx = parse_poly("x", &vx).unwrap();
        let b = global_bfunction(&fx, &cfg).unwrap();
        assert_eq!(b, [rat_int(-1)].into_iter().collect());

        let vxy = VarSet::new(["x", "y"]);
        let q = parse_poly("x^2+y^2", &vxy).unwrap();
        let b = global_bfunction(&q, &cfg).unwrap();
        assert_eq!(b, [rat_int(-1), rat_int(-1)].into_iter().collect());
        let br = global_reduced_bfunction(&q, &cfg).unwrap();
        assert_eq!(br, [rat_int(-1)].into_iter().collect());

        let r = parse_poly("x*y", &vxy).unwrap();
        let b = global_bfunction(&r, &cfg).unwrap();
        assert_eq!(b, [rat_int(-1), rat_int(-1)].into_iter().collect());
    }

    #[test]
    fn cusp_pipeline() {
        let cfg = GroebnerConfig::default();
        let vars = VarSet::new(["x", "y"]);
        let f = parse_poly("x^3+y^2", &vars).unwrap();
        let expected: RootList = [rat(-5, 6), rat(-7, 6)].into_iter().collect();

        let reduced = global_reduced_bfunction(&f, &cfg).unwrap();
        assert_eq!(reduced, expected);

        let by_support = local_bfunction_via_support(&f, &cfg, 32).unwrap();
        assert_eq!(by_support, expected);

        let swh = local_bfunction_swh(&f, &wsys(6, &[2, 3]), 2, &cfg, 32).unwrap();
        assert_eq!(swh.roots, expected);
        assert_eq!(swh.milnor, 2);
        assert!(swh.dims.values().all(|&d| d == 1));
    }

    #[test]
    fn certificates_for_cusp() {
        let cfg = GroebnerConfig::default();
        let vars = VarSet::new(["x", "y"]);
        let f = parse_poly("x^3+y^2", &vars).unwrap();
        let ring = WeylRing::new(&vars).unwrap();
        let ann = ann_fs(&ring, &f, &cfg).unwrap();

        let yes = certify_root(&ann, &f, &rat(-5, 6), &cfg).unwrap();
        assert!(yes.is_factor);
        assert!(yes.origin_in_support);
        assert!(yes.polynomial_part.iter().all(|p| p.vanishes_at_origin()));

        let no = certify_root(&ann, &f, &rat(-1, 3), &cfg).unwrap();
        assert!(!no.is_factor);
        assert!(!no.origin_in_support);
        assert!(no.basis.is_unit_ideal());
    }
}
