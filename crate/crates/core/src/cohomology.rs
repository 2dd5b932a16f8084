//! Algebraic local cohomology supported at the origin.
//!
//! A class is a finite sum Σ c_λ ξ^λ standing for Σ c_λ [1/x^{λ+1}].
//! Polynomials act by exponent lowering — x^α ∗ ξ^λ is ξ^{λ-α} when
//! λ ≥ α componentwise and 0 otherwise — and partial derivatives act by
//! raising: ∂_i ∗ ξ^λ = -(λ_i + 1) ξ^{λ+e_i}. Dual variables print as the
//! uppercased polynomial variable names.
//!
//! `solve_h_f0` computes the joint annihilated space of a polynomial family
//! degree by degree. Once the solution dimension repeats, larger spans add
//! nothing: a new solution of minimal higher degree would have every
//! x_i-lowering inside the stabilized space, forcing its top homogeneous
//! part to be killed by all x_i and hence to vanish.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::bfunction::RootCertificate;
use crate::error::{CapKind, Error, Result};
use crate::linalg::Matrix;
use crate::order::{BaseOrder, MonomialOrderSpec};
use crate::poly::{Monomial, MultiPoly, VarSet};
use crate::rational::Rat;
use crate::weyl::PBWOperator;

/// Degree-lexicographic order on dual monomials with the first variable
/// highest (ξ ≻ η ≻ ζ for x, y, z).
pub fn xi_order(n: usize) -> MonomialOrderSpec {
    MonomialOrderSpec::single_block(n, BaseOrder::DegLex, (0..n).collect())
        .expect("full block is a partition")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomClass {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rat>,
}

impl CohomClass {
    pub fn zero(vars: &VarSet) -> CohomClass {
        CohomClass {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// The class 1 = ξ^0 (the delta function of the origin).
    pub fn one(vars: &VarSet) -> CohomClass {
        CohomClass::monomial(vars, Monomial::one(vars.len()))
    }

    pub fn monomial(vars: &VarSet, m: Monomial) -> CohomClass {
        let mut c = CohomClass::zero(vars);
        c.add_term(m, Rat::one());
        c
    }

    pub fn from_terms(vars: &VarSet, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> CohomClass {
        let mut c = CohomClass::zero(vars);
        for (m, coeff) in terms {
            c.add_term(m, coeff);
        }
        c
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
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

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert_eq!(m.0.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &CohomClass) -> CohomClass {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CohomClass) -> CohomClass {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> CohomClass {
        if c.is_zero() {
            return CohomClass::zero(&self.vars);
        }
        CohomClass {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    /// Head (largest) monomial under `ord`.
    pub fn head(&self, ord: &MonomialOrderSpec) -> Option<&Monomial> {
        self.terms
            .keys()
            .max_by(|a, b| ord.cmp(&a.0, &b.0))
    }

    pub fn head_coeff(&self, ord: &MonomialOrderSpec) -> Option<&Rat> {
        self.head(ord).map(|m| &self.terms[m])
    }
}

impl std::fmt::Display for CohomClass {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dual = VarSet::new(self.vars.names().iter().map(|n| n.to_uppercase()));
        let poly = MultiPoly::from_terms(
            &dual,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        );
        write!(out, "{poly}")
    }
}

/// Linear extension of the lowering rule.
pub fn act_polynomial(p: &MultiPoly, psi: &CohomClass) -> CohomClass {
    debug_assert_eq!(p.nvars(), psi.vars.len());
    let mut out = CohomClass::zero(&psi.vars);
    for (alpha, c) in p.terms() {
        for (lambda, v) in &psi.terms {
            if lambda.divisible_by(alpha) {
                out.add_term(lambda.div(alpha), c * v);
            }
        }
    }
    out
}

/// Action of an operator in D: for a canonical term x^α ∂^β, the raising
/// part ∂^β applies first, then the lowering part x^α.
pub fn act_operator(p: &PBWOperator, psi: &CohomClass) -> Result<CohomClass> {
    let ring = p.ring();
    if ring.xvars() != &psi.vars {
        return Err(Error::precondition(
            "operator and class live over different variables",
        ));
    }
    if !p.in_d() {
        return Err(Error::precondition(
            "operator action requires s and dt to be absent",
        ));
    }
    let n = ring.nvars();
    let mut out = CohomClass::zero(&psi.vars);
    for (mono, c) in p.terms() {
        let alpha = &mono.0[..n];
        let beta = &mono.0[n..2 * n];
        for (lambda, v) in &psi.terms {
            // ∂^β: each step in direction i contributes -(current λ_i + 1)
            let mut coeff = c * v;
            let mut raised = lambda.clone();
            for i in 0..n {
                for _ in 0..beta[i] {
                    coeff = -coeff * Rat::from_integer(((raised.0[i] as i64) + 1).into());
                    raised.0[i] += 1;
                }
            }
            // then x^α lowers
            let mut keep = true;
            for i in 0..n {
                if raised.0[i] < alpha[i] {
                    keep = false;
                    break;
                }
                raised.0[i] -= alpha[i];
            }
            if keep {
                out.add_term(raised, coeff);
            }
        }
    }
    Ok(out)
}

/// Basis with strictly increasing head monomials; each head appears in no
/// other class, so linear independence is structural.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    pub classes: Vec<CohomClass>,
    pub order: MonomialOrderSpec,
}

impl EchelonBasis {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    /// Builds an echelon basis spanning the given classes (RREF over the
    /// union of supports, columns descending under `ord`).
    pub fn from_span(classes: &[CohomClass], ord: &MonomialOrderSpec) -> EchelonBasis {
        let vars = classes
            .first()
            .map(|c| c.vars.clone())
            .unwrap_or_else(|| VarSet::new(Vec::<String>::new()));
        let mut support: Vec<Monomial> = classes
            .iter()
            .flat_map(|c| c.terms.keys().cloned())
            .collect();
        support.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        support.dedup();
        let col: BTreeMap<&Monomial, usize> =
            support.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = Matrix::zeros(classes.len(), support.len());
        for (i, cls) in classes.iter().enumerate() {
            for (m, c) in &cls.terms {
                mat.set(i, col[m], c.clone());
            }
        }
        mat.rref();
        let mut out = Vec::new();
        for i in 0..mat.rows {
            let row = mat.row(i);
            if row.iter().all(|c| c.is_zero()) {
                continue;
            }
            out.push(CohomClass::from_terms(
                &vars,
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (support[j].clone(), c.clone())),
            ));
        }
        // RREF rows come out with decreasing heads
        out.reverse();
        EchelonBasis {
            classes: out,
            order: ord.clone(),
        }
    }

    /// Exact membership of `target` in the span: reduce by each class's
    /// head and check the remainder vanishes.
    pub fn span_contains(&self, target: &CohomClass) -> bool {
        let mut rem = target.clone();
        for cls in self.classes.iter().rev() {
            let head = cls.head(&self.order).expect("nonzero class");
            let c = rem.coeff(head);
            if !c.is_zero() {
                let hc = cls.head_coeff(&self.order).unwrap();
                rem = rem.sub(&cls.scale(&(c / hc)));
            }
        }
        rem.is_zero()
    }
}

fn monomials_upto(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, left: u32) {
        if pos == cur.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(out, cur, pos + 1, left - e);
            cur[pos] = 0;
        }
    }
    rec(&mut out, &mut cur, 0, d);
    out
}

/// Kernel of the joint action of `f0` on the span of dual monomials of
/// total degree ≤ d, as an echelon basis.
fn kernel_at_degree(
    f0: &[MultiPoly],
    vars: &VarSet,
    ord: &MonomialOrderSpec,
    d: u32,
) -> EchelonBasis {
    let mut cols = monomials_upto(vars.len(), d);
    cols.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    let colidx: BTreeMap<&Monomial, usize> =
        cols.iter().enumerate().map(|(i, m)| (m, i)).collect();

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for h in f0 {
        // conditions grouped by result monomial μ: Σ_λ v_λ coeff(h, λ-μ) = 0
        let mut by_result: BTreeMap<Monomial, Vec<(usize, Rat)>> = BTreeMap::new();
        for (j, lambda) in cols.iter().enumerate() {
            for (alpha, c) in h.terms() {
                if lambda.divisible_by(alpha) {
                    by_result
                        .entry(lambda.div(alpha))
                        .or_default()
                        .push((j, c.clone()));
                }
            }
        }
        for (_, entries) in by_result {
            let mut row = vec![Rat::zero(); cols.len()];
            for (j, c) in entries {
                row[j] = &row[j] + c;
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        // no constraint reaches this degree window; keep the column count
        // visible so the kernel is the whole span, not the empty one
        rows.push(vec![Rat::zero(); cols.len()]);
    }
    let kernel = Matrix::from_rows(rows).kernel();
    let classes: Vec<CohomClass> = kernel
        .iter()
        .map(|v| {
            CohomClass::from_terms(
                vars,
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (cols[j].clone(), c.clone())),
            )
        })
        .collect();
    let _ = colidx;
    EchelonBasis::from_span(&classes, ord)
}

/// Echelon basis of H_{F₀} = {ψ : h ∗ ψ = 0 for all h ∈ F₀}, computed
/// degree by degree until the dimension stabilizes.
pub fn solve_h_f0(
    f0: &[MultiPoly],
    ord: &MonomialOrderSpec,
    degree_cap: u32,
) -> Result<EchelonBasis> {
    let Some(first) = f0.iter().find(|h| !h.is_zero()) else {
        return Err(Error::precondition(
            "empty annihilator family has infinite-dimensional solution space",
        ));
    };
    let vars = first.vars().clone();
    if ord.width() != vars.len() {
        return Err(Error::precondition("order width mismatch"));
    }
    let gens: Vec<MultiPoly> = f0.iter().filter(|h| !h.is_zero()).cloned().collect();
    for h in &gens {
        if h.vars() != &vars {
            return Err(Error::precondition("mixed variable sets in F0"));
        }
        if !h.vanishes_at_origin() {
            return Err(Error::precondition(
                "F0 element with nonzero constant term: solution space is trivial",
            ));
        }
    }
    let mut prev = kernel_at_degree(&gens, &vars, ord, 0);
    for d in 1..=degree_cap {
        let cur = kernel_at_degree(&gens, &vars, ord, d);
        if cur.dim() == prev.dim() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Resource {
        kind: CapKind::Degree,
        detail: format!(
            "solution dimension still growing at degree {degree_cap}; singularity may not be isolated"
        ),
        partial: prev.classes.iter().map(|c| c.to_string()).collect(),
    })
}

/// μ = dim H_{Jacobian}: the length of the local Milnor algebra.
pub fn milnor_number(f: &MultiPoly, degree_cap: u32) -> Result<usize> {
    let partials: Vec<MultiPoly> = (0..f.nvars()).map(|i| f.partial(i)).collect();
    for p in &partials {
        if !p.vanishes_at_origin() {
            return Err(Error::precondition(
                "gradient does not vanish at the origin",
            ));
        }
    }
    let basis = solve_h_f0(&partials, &xi_order(f.nvars()), degree_cap)?;
    Ok(basis.dim())
}

/// Basis of H_{M(γ,f)} from a root certificate: the linear-system loop over
/// the echelon basis of H_{F₀}.
///
/// The certificate's reduced basis contains s − γ and otherwise s-free
/// operators; removing it and substituting s = γ leaves the operator family
/// P₁ in D. Polynomial members P₀ join f and its gradient as F₀. Candidates
/// from H_{F₀} are processed by increasing head; a failed candidate joins
/// the correction list L and may be revived as part of a later ansatz
/// φ = ψ + Σ c_i ς_i.
pub fn cohomology_solution_space(
    f: &MultiPoly,
    gamma: &Rat,
    cert: &RootCertificate,
    degree_cap: u32,
) -> Result<EchelonBasis> {
    if !cert.is_factor {
        return Err(Error::precondition(
            "candidate is not a b-function root: module is zero",
        ));
    }
    if &cert.gamma != gamma {
        return Err(Error::precondition("certificate is for a different root"));
    }
    let n = f.nvars();
    let ord = xi_order(n);

    let mut p1: Vec<PBWOperator> = Vec::new();
    let mut p0: Vec<MultiPoly> = Vec::new();
    for g in &cert.basis.generators {
        if g.is_s_polynomial() {
            // the unique pure-s element of the reduced basis is s - γ
            continue;
        }
        let gd = g.substitute_s(gamma)?;
        if gd.is_polynomial() {
            p0.push(gd.to_poly()?);
        } else {
            p1.push(gd);
        }
    }

    let mut f0 = p0.clone();
    f0.push(f.clone());
    for i in 0..n {
        f0.push(f.partial(i));
    }
    let g0 = solve_h_f0(&f0, &ord, degree_cap)?;

    let mut psi_out: Vec<CohomClass> = Vec::new();
    let mut failed: Vec<CohomClass> = Vec::new();
    for psi in &g0.classes {
        // conditions p ∗ (ψ + Σ c_i ς_i) = 0 over all p ∈ P₁
        let images_psi: Vec<CohomClass> = p1
            .iter()
            .map(|p| act_operator(p, psi))
            .collect::<Result<_>>()?;
        let images_failed: Vec<Vec<CohomClass>> = failed
            .iter()
            .map(|s| p1.iter().map(|p| act_operator(p, s)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut rhs: Vec<Rat> = Vec::new();
        for (pi, img) in images_psi.iter().enumerate() {
            let mut support: Vec<Monomial> = img.terms.keys().cloned().collect();
            for fi in &images_failed {
                support.extend(fi[pi].terms.keys().cloned());
            }
            support.sort();
            support.dedup();
            for mu in support {
                rows.push(
                    images_failed
                        .iter()
                        .map(|fi| fi[pi].coeff(&mu))
                        .collect(),
                );
                rhs.push(-img.coeff(&mu));
            }
        }
        let mat = if rows.is_empty() {
            Matrix::zeros(0, failed.len())
        } else {
            Matrix::from_rows(rows)
        };
        match mat.solve(&rhs) {
            Some(c) => {
                let mut phi = psi.clone();
                for (ci, si) in c.iter().zip(failed.iter()) {
                    phi = phi.add(&si.scale(ci));
                }
                psi_out.push(phi);
            }
            None => failed.push(psi.clone()),
        }
    }
    Ok(EchelonBasis {
        classes: psi_out,
        order: ord,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::rational::{rat, rat_int};

    fn vs2() -> VarSet {
        VarSet::new(["x", "y"])
    }

    fn class(vars: &VarSet, terms: &[(&[u32], Rat)]) -> CohomClass {
        CohomClass::from_terms(
            vars,
            terms
                .iter()
                .map(|(e, c)| (Monomial(e.to_vec()), c.clone())),
        )
    }

    #[test]
    fn polynomial_action_lowers() {
        let vars = vs2();
        let x = parse_poly("x", &vars).unwrap();
        let psi = class(&vars, &[(&[2, 1], rat_int(1))]);
        let res = act_polynomial(&x, &psi);
        assert_eq!(res, class(&vars, &[(&[1, 1], rat_int(1))]));

        let y2 = parse_poly("y^2", &vars).unwrap();
        assert!(act_polynomial(&y2, &class(&vars, &[(&[1, 1], rat_int(1))])).is_zero());
    }

    #[test]
    fn operator_action_raises_then_lowers() {
        let vars = vs2();
        let ring = crate::weyl::WeylRing::new(&vars).unwrap();
        let dy = PBWOperator::d(&ring, 1);
        // ∂_y ∗ η = -2 η²
        let eta = class(&vars, &[(&[0, 1], rat_int(1))]);
        assert_eq!(
            act_operator(&dy, &eta).unwrap(),
            class(&vars, &[(&[0, 2], rat_int(-2))])
        );
        // ∂_x ∗ 1 = -ξ
        let dx = PBWOperator::d(&ring, 0);
        assert_eq!(
            act_operator(&dx, &CohomClass::one(&vars)).unwrap(),
            class(&vars, &[(&[1, 0], rat_int(-1))])
        );
        // module axiom: (∂_x x) ∗ ψ = ∂_x ∗ (x ∗ ψ)
        let x = PBWOperator::x(&ring, 0);
        let op = dx.mul(&x);
        let psi = class(&vars, &[(&[1, 0], rat_int(1)), (&[0, 2], rat(1, 3))]);
        let lhs = act_operator(&op, &psi).unwrap();
        let rhs = act_operator(&dx, &act_polynomial(&x.to_poly().unwrap(), &psi)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn act_operator_rejects_s() {
        let vars = vs2();
        let ring = crate::weyl::WeylRing::new(&vars).unwrap();
        let s = PBWOperator::s(&ring);
        let res = act_operator(&s, &CohomClass::one(&vars));
        assert!(res.is_err());
    }

    #[test]
    fn solve_maximal_ideal() {
        let vars = vs2();
        let f0 = [
            parse_poly("x", &vars).unwrap(),
            parse_poly("y", &vars).unwrap(),
        ];
        let basis = solve_h_f0(&f0, &xi_order(2), 16).unwrap();
        assert_eq!(basis.dim(), 1);
        assert_eq!(basis.classes[0], CohomClass::one(&vars));
    }

    #[test]
    fn solve_cusp_jacobian() {
        let vars = vs2();
        let f0 = [
            parse_poly("3*x^2", &vars).unwrap(),
            parse_poly("2*y", &vars).unwrap(),
        ];
        let basis = solve_h_f0(&f0, &xi_order(2), 16).unwrap();
        assert_eq!(basis.dim(), 2);
        assert_eq!(basis.classes[0], CohomClass::one(&vars));
        assert_eq!(
            basis.classes[1],
            class(&vars, &[(&[1, 0], rat_int(1))])
        );
    }

    #[test]
    fn milnor_numbers() {
        let vars = vs2();
        assert_eq!(
            milnor_number(&parse_poly("x^3+y^2", &vars).unwrap(), 16).unwrap(),
            2
        );
        assert_eq!(
            milnor_number(&parse_poly("x^3+y^10+x*y^7+x*y^8", &vars).unwrap(), 32).unwrap(),
            18
        );
        // smooth point: gradient precondition fails
        assert!(milnor_number(&parse_poly("x+y^2", &vars).unwrap(), 16).is_err());
    }

    #[test]
    fn nonisolated_hits_degree_cap() {
        // f = x^2: Jacobian {2x} has infinite-dimensional annihilated space
        let vars = vs2();
        let res = solve_h_f0(&[parse_poly("2*x", &vars).unwrap()], &xi_order(2), 6);
        assert!(matches!(
            res,
            Err(Error::Resource {
                kind: CapKind::Degree,
                ..
            })
        ));
    }

    #[test]
    fn nonvanishing_constant_rejected() {
        let vars = vs2();
        let res = solve_h_f0(&[parse_poly("1+x", &vars).unwrap()], &xi_order(2), 6);
        assert!(matches!(res, Err(Error::Precondition(_))));
    }

    #[test]
    fn lowering_closure() {
        let vars = vs2();
        let f0 = [
            parse_poly("3*x^2 + y^7", &vars).unwrap(),
            parse_poly("7*x*y^6 + 10*y^9", &vars).unwrap(),
        ];
        let basis = solve_h_f0(&f0, &xi_order(2), 32).unwrap();
        for cls in &basis.classes {
            for v in 0..2 {
                let lowered = act_polynomial(&MultiPoly::var(&vars, v), cls);
                assert!(basis.span_contains(&lowered));
            }
        }
    }

    #[test]
    fn example_solution_space_matches_printed_basis() {
        // f = x³ + yz² + y⁷ + xy⁵ + xz² with the quadratic relations of its
        // certificate at γ = -4/3
        let vars = VarSet::new(["x", "y", "z"]);
        let f = parse_poly("x^3 + y*z^2 + y^7 + x*y^5 + x*z^2", &vars).unwrap();
        let mut f0 = vec![
            parse_poly("z^2", &vars).unwrap(),
            parse_poly("z*y", &vars).unwrap(),
            parse_poly("z*x", &vars).unwrap(),
            parse_poly("y*x", &vars).unwrap(),
            parse_poly("x^2", &vars).unwrap(),
            parse_poly("12*x - y^3", &vars).unwrap(),
            f.clone(),
        ];
        for i in 0..3 {
            f0.push(f.partial(i));
        }
        let basis = solve_h_f0(&f0, &xi_order(3), 16).unwrap();
        assert_eq!(basis.dim(), 5);
        let expected = [
            CohomClass::one(&vars),
            class(&vars, &[(&[0, 0, 1], rat_int(1))]),
            class(&vars, &[(&[0, 1, 0], rat_int(1))]),
            class(&vars, &[(&[0, 2, 0], rat_int(1))]),
            class(&vars, &[(&[0, 3, 0], rat_int(1)), (&[1, 0, 0], rat(1, 12))]),
        ];
        for (got, want) in basis.classes.iter().zip(expected.iter()) {
            assert_eq!(got, want);
        }
    }

    #[test]
    fn display_uses_uppercase_duals() {
        let vars = vs2();
        let c = class(&vars, &[(&[1, 0], rat(1, 12)), (&[0, 3], rat_int(1))]);
        assert_eq!(c.to_string(), "1/12*X + Y^3");
    }
}
