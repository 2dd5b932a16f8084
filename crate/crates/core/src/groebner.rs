//! Left Groebner bases in the PBW algebra by Buchberger's algorithm.
//!
//! Admissible orders make leading monomials multiplicative
//! (`lm(pq) = lm(p) + lm(q)` as exponent vectors: every commutation the
//! rewrite introduces strictly drops below the straight product monomial),
//! so S-pairs and left reduction work as in the commutative case. Pair
//! pruning uses only the chain criterion in its Gebauer-Moeller form — the
//! coprime-leading-term product criterion is unsound here because
//! `lm(f) + lm(g)` coprime does not make `f` and `g` commute.
//!
//! Reduction divides by the reducer's leading coefficient and keeps every
//! coefficient as a reduced rational; S-polynomials cross-multiply so the
//! heads cancel exactly. Every returned basis is reduced: minimal leading
//! monomials, tails in normal form, leading coefficients 1.

use std::cmp::Ordering;
use std::time::Instant;

use num_traits::One;

use crate::error::{CapKind, Error, Result};
use crate::order::MonomialOrderSpec;
use crate::rational::Rat;
use crate::weyl::{term_mul_into, PBWMonomial, PBWOperator, WeylRing};

/// Caps that turn runaway computations into structured errors.
#[derive(Debug, Clone)]
pub struct GroebnerConfig {
    /// Maximum number of S-pairs reduced.
    pub max_pairs: usize,
    /// Maximum term count of any intermediate operator.
    pub max_support: usize,
    /// Optional wall-clock cutoff.
    pub deadline: Option<Instant>,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            max_pairs: 1_000_000,
            max_support: 5_000_000,
            deadline: None,
        }
    }
}

impl GroebnerConfig {
    fn check_deadline(&self) -> Result<()> {
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(Error::Resource {
                    kind: CapKind::Deadline,
                    detail: "Groebner deadline exceeded".into(),
                    partial: Vec::new(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub generators: Vec<PBWOperator>,
    pub order: MonomialOrderSpec,
    /// Always true for bases produced here; kept explicit so callers can
    /// rely on reducedness in comparisons.
    pub reduced: bool,
}

impl GroebnerBasis {
    /// Normal form of `op` against this basis.
    pub fn reduce(&self, op: &PBWOperator) -> PBWOperator {
        left_normal_form(op, &self.generators, &self.order)
    }

    /// Left-ideal membership test.
    pub fn contains(&self, op: &PBWOperator) -> bool {
        self.reduce(op).is_zero()
    }

    /// True when the basis is exactly `{1}`.
    pub fn is_unit_ideal(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].num_terms() == 1 && {
            let (m, c) = self.generators[0].terms().next().unwrap();
            m.total_degree() == 0 && c.is_one()
        }
    }
}

// Internal representation: terms sorted descending under the active order.
#[derive(Debug, Clone)]
struct OrdOp {
    terms: Vec<(PBWMonomial, Rat)>,
}

impl OrdOp {
    fn from_op(op: &PBWOperator, ord: &MonomialOrderSpec) -> OrdOp {
        let mut terms: Vec<(PBWMonomial, Rat)> =
            op.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| ord.cmp(&b.0 .0, &a.0 .0));
        OrdOp { terms }
    }

    fn to_op(&self, ring: &WeylRing) -> PBWOperator {
        let mut op = PBWOperator::zero(ring);
        for (m, c) in &self.terms {
            op.add_term(m.clone(), c.clone());
        }
        op
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &PBWMonomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &Rat {
        &self.terms[0].1
    }

    /// Strips rational content, leaving primitive integer coefficients with
    /// positive lead.
    fn make_primitive(&mut self, ring: &WeylRing) {
        if self.terms.is_empty() {
            return;
        }
        let op = self.to_op(ring).primitive_part();
        let lead = self.terms[0].0.clone();
        let mut terms: Vec<(PBWMonomial, Rat)> =
            op.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        // the term set is unchanged, so re-sorting per the cached layout is
        // just a matter of restoring the previous order
        let pos: std::collections::BTreeMap<&PBWMonomial, usize> = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, (m, _))| (m, i))
            .collect();
        terms.sort_by_key(|(m, _)| pos[m]);
        debug_assert_eq!(&terms[0].0, &lead);
        self.terms = terms;
        if self.terms[0].1 < Rat::from_integer(0.into()) {
            for (_, c) in &mut self.terms {
                *c = -c.clone();
            }
        }
    }
}

/// Merges `f − factor·g` where both are sorted descending; the result stays
/// sorted. Consumes `f` so surviving terms move instead of cloning their
/// coefficients.
fn sub_scaled(f: OrdOp, factor: &Rat, g: &OrdOp, ord: &MonomialOrderSpec) -> OrdOp {
    let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
    let mut fi = f.terms.into_iter().peekable();
    let mut j = 0;
    while let Some(ft) = fi.peek() {
        if j >= g.terms.len() {
            break;
        }
        match ord.cmp(&ft.0 .0, &g.terms[j].0 .0) {
            Ordering::Greater => {
                out.push(fi.next().expect("peeked"));
            }
            Ordering::Less => {
                out.push((g.terms[j].0.clone(), -(factor * &g.terms[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let (m, c) = fi.next().expect("peeked");
                let c = c - factor * &g.terms[j].1;
                if !c.is_zero() {
                    out.push((m, c));
                }
                j += 1;
            }
        }
    }
    out.extend(fi);
    for (m, c) in &g.terms[j..] {
        out.push((m.clone(), -(factor * c)));
    }
    OrdOp { terms: out }
}

use num_traits::Zero;

/// `monomial * g` in the PBW algebra, sorted under `ord`.
fn mono_mul(ring: &WeylRing, m: &PBWMonomial, g: &OrdOp, ord: &MonomialOrderSpec) -> OrdOp {
    let mut acc = PBWOperator::zero(ring);
    for (gm, gc) in &g.terms {
        term_mul_into(ring, m, gm, gc, &mut acc);
    }
    OrdOp::from_op(&acc, ord)
}

struct Reducer<'a> {
    ring: &'a WeylRing,
    ord: &'a MonomialOrderSpec,
    cfg: &'a GroebnerConfig,
}

impl<'a> Reducer<'a> {
    /// Full left normal form: head reduction plus tail reduction, fraction
    /// free. The result is primitive unless zero.
    fn normal_form(&self, h: OrdOp, basis: &[OrdOp]) -> Result<OrdOp> {
        let mut done: Vec<(PBWMonomial, Rat)> = Vec::new();
        let mut work = h;
        let mut steps = 0usize;
        while !work.is_zero() {
            if work.terms.len() + done.len() > self.cfg.max_support {
                return Err(Error::Resource {
                    kind: CapKind::Support,
                    detail: format!(
                        "normal form support exceeded {} terms",
                        self.cfg.max_support
                    ),
                    partial: Vec::new(),
                });
            }
            steps += 1;
            if steps % 256 == 0 {
                self.cfg.check_deadline()?;
            }
            let reducer = basis
                .iter()
                .find(|g| !g.is_zero() && work.lm().divisible_by(g.lm()));
            match reducer {
                None => {
                    let (m, c) = work.terms.remove(0);
                    done.push((m, c));
                }
                Some(g) => {
                    let q = work.lm().div(g.lm());
                    let factor = work.lc() / g.lc();
                    let prod = mono_mul(self.ring, &q, g, self.ord);
                    debug_assert_eq!(prod.lm(), work.lm());
                    work = sub_scaled(work, &factor, &prod, self.ord);
                    debug_assert!(
                        work.is_zero() || self.ord.cmp(&work.lm().0, &prod.lm().0) == Ordering::Less
                    );
                }
            }
        }
        let mut out = OrdOp { terms: done };
        out.make_primitive(self.ring);
        Ok(out)
    }
}

/// Normal form of `op` modulo `basis` under `ord` (no caps).
pub fn left_normal_form(
    op: &PBWOperator,
    basis: &[PBWOperator],
    ord: &MonomialOrderSpec,
) -> PBWOperator {
    let ring = op.ring().clone();
    let cfg = GroebnerConfig::default();
    let red = Reducer {
        ring: &ring,
        ord,
        cfg: &cfg,
    };
    let obasis: Vec<OrdOp> = basis.iter().map(|g| OrdOp::from_op(g, ord)).collect();
    let nf = red
        .normal_form(OrdOp::from_op(op, ord), &obasis)
        .expect("default caps");
    nf.to_op(&ring)
}

/// The S-polynomial of `f` and `g`: both are lifted to the lcm of their
/// leading monomials and cross-scaled so the heads cancel.
pub fn s_polynomial(
    f: &PBWOperator,
    g: &PBWOperator,
    ord: &MonomialOrderSpec,
) -> Result<PBWOperator> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::precondition("S-polynomial of zero operator"));
    }
    let ring = f.ring().clone();
    let of = OrdOp::from_op(f, ord);
    let og = OrdOp::from_op(g, ord);
    let spair = spoly(&ring, &of, &og, ord);
    Ok(spair.to_op(&ring))
}

fn spoly(ring: &WeylRing, f: &OrdOp, g: &OrdOp, ord: &MonomialOrderSpec) -> OrdOp {
    let l = f.lm().lcm(g.lm());
    let uf = l.div(f.lm());
    let ug = l.div(g.lm());
    let pf = mono_mul(ring, &uf, f, ord);
    let pg = mono_mul(ring, &ug, g, ord);
    // lc(pf) = lc(f), lc(pg) = lc(g) since monomial lifting preserves heads
    let factor = pf.lc() / pg.lc();
    let mut s = sub_scaled(pf, &factor, &pg, ord);
    s.make_primitive(ring);
    s
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: PBWMonomial,
}

/// Buchberger with normal pair selection and Gebauer-Moeller chain-criterion
/// pruning (no product criterion). Returns the reduced basis.
pub fn buchberger(
    gens: &[PBWOperator],
    ord: &MonomialOrderSpec,
    cfg: &GroebnerConfig,
) -> Result<GroebnerBasis> {
    let ring = match gens.iter().find(|g| !g.is_zero()) {
        Some(g) => g.ring().clone(),
        None => {
            return Err(Error::precondition(
                "Groebner basis of the zero ideal: supply a ring via nonzero input",
            ))
        }
    };
    if ord.width() != ring.width() {
        return Err(Error::precondition(
            "order width does not match ring layout",
        ));
    }
    for g in gens {
        if !g.is_zero() && g.ring() != &ring {
            return Err(Error::precondition("generators from different rings"));
        }
    }

    let red = Reducer {
        ring: &ring,
        ord,
        cfg,
    };

    let mut basis: Vec<OrdOp> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut seed: Vec<OrdOp> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| OrdOp::from_op(g, ord))
        .collect();
    // feeding inputs through the updater in ascending head order keeps the
    // pair queue small from the start
    seed.sort_by(|a, b| ord.cmp(&a.lm().0, &b.lm().0));
    for mut g in seed {
        g.make_primitive(&ring);
        let nf = red.normal_form(g, &basis)?;
        if !nf.is_zero() {
            add_generator(&mut basis, &mut pairs, nf, ord);
        }
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        cfg.check_deadline().map_err(|e| attach_partial(e, &basis, &ring))?;
        processed += 1;
        if processed > cfg.max_pairs {
            return Err(attach_partial(
                Error::Resource {
                    kind: CapKind::Pairs,
                    detail: format!("more than {} S-pairs reduced", cfg.max_pairs),
                    partial: Vec::new(),
                },
                &basis,
                &ring,
            ));
        }
        // normal strategy: smallest lcm first
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| ord.cmp(&a.lcm.0, &b.lcm.0))
            .map(|(idx, _)| idx)
            .expect("pairs nonempty");
        let pair = pairs.swap_remove(best);
        let s = spoly(&ring, &basis[pair.i], &basis[pair.j], ord);
        let nf = match red.normal_form(s, &basis) {
            Ok(nf) => nf,
            Err(e) => return Err(attach_partial(e, &basis, &ring)),
        };
        if !nf.is_zero() {
            add_generator(&mut basis, &mut pairs, nf, ord);
        }
    }

    let reduced = interreduce(basis, &red)?;
    Ok(GroebnerBasis {
        generators: reduced.iter().map(|g| g.to_op(&ring)).collect(),
        order: ord.clone(),
        reduced: true,
    })
}

fn attach_partial(e: Error, basis: &[OrdOp], ring: &WeylRing) -> Error {
    match e {
        Error::Resource { kind, detail, .. } => Error::Resource {
            kind,
            detail,
            partial: basis.iter().map(|g| g.to_op(ring).to_string()).collect(),
        },
        other => other,
    }
}

/// Gebauer-Moeller update on arrival of generator `t` (chain criterion
/// only).
fn add_generator(
    basis: &mut Vec<OrdOp>,
    pairs: &mut Vec<Pair>,
    t: OrdOp,
    ord: &MonomialOrderSpec,
) {
    let t_idx = basis.len();
    let lt = t.lm().clone();

    // drop old pairs strictly refined through t
    pairs.retain(|p| {
        if !p.lcm.divisible_by(&lt) {
            return true;
        }
        let li = basis[p.i].lm().lcm(&lt);
        let lj = basis[p.j].lm().lcm(&lt);
        li == p.lcm || lj == p.lcm
    });

    // candidate new pairs (i, t)
    let cand: Vec<Pair> = (0..t_idx)
        .map(|i| Pair {
            i,
            j: t_idx,
            lcm: basis[i].lm().lcm(&lt),
        })
        .collect();
    // keep only lcm-minimal candidates, one representative per lcm
    let mut kept: Vec<Pair> = Vec::new();
    for p in &cand {
        let strictly_dominated = cand.iter().any(|q| {
            q.lcm != p.lcm && p.lcm.divisible_by(&q.lcm)
        });
        if strictly_dominated {
            continue;
        }
        if kept.iter().any(|q| q.lcm == p.lcm) {
            continue;
        }
        kept.push(p.clone());
    }
    let _ = ord;
    pairs.extend(kept);
    basis.push(t);
}

/// Minimalizes leading monomials, tail-reduces every survivor against the
/// rest, and makes them monic. With a fixed minimal head set a single pass
/// yields the unique reduced basis.
fn interreduce(mut basis: Vec<OrdOp>, red: &Reducer) -> Result<Vec<OrdOp>> {
    basis.retain(|g| !g.is_zero());
    basis.sort_by(|a, b| red.ord.cmp(&a.lm().0, &b.lm().0));
    let mut minimal: Vec<OrdOp> = Vec::new();
    for g in basis {
        if minimal.iter().any(|h| g.lm().divisible_by(h.lm())) {
            continue;
        }
        minimal.push(g);
    }
    // tail-reduce with primitive reducers (reduction is invariant under
    // reducer scaling); go monic only once the set is stable
    for i in 0..minimal.len() {
        let g = minimal[i].clone();
        let others: Vec<OrdOp> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| h.clone())
            .collect();
        let nf = red.normal_form(g, &others)?;
        debug_assert!(!nf.is_zero(), "minimal generator reduced to zero");
        minimal[i] = nf;
    }
    for g in &mut minimal {
        let lc = g.lc().clone();
        for (_, c) in &mut g.terms {
            *c = &*c / &lc;
        }
    }
    Ok(minimal)
}

/// Generators of `gb` whose monomials involve only kept slots; valid as a
/// basis of the intersection ideal because the order eliminates the rest.
pub fn extract_subring(gb: &GroebnerBasis, keep: &[bool]) -> Result<Vec<PBWOperator>> {
    let elim: Vec<bool> = keep.iter().map(|k| !k).collect();
    if !gb.order.is_elimination_for(&elim) {
        return Err(Error::precondition(
            "order does not eliminate the discarded variables",
        ));
    }
    Ok(restrict_to_slots(&gb.generators, keep))
}

/// Plain filter: operators supported entirely on the kept slots. No
/// elimination guarantee — use `extract_subring` when one is needed.
pub fn restrict_to_slots(gens: &[PBWOperator], keep: &[bool]) -> Vec<PBWOperator> {
    gens.iter()
        .filter(|g| g.terms().all(|(m, _)| m.within(keep)))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarSet;
    use crate::rational::rat_int;

    fn ring1() -> WeylRing {
        WeylRing::new(&VarSet::new(["x"])).unwrap()
    }

    #[test]
    fn commutative_example_reduces() {
        // in the x-block of D: ideal (x^2, x y ... ) needs 2 vars; use
        // operators x^2 and x^3 + x: gb should be (x)
        let r = ring1();
        let x = PBWOperator::x(&r, 0);
        let g1 = x.mul(&x);
        let g2 = x.mul(&x).mul(&x).add(&x);
        let gb = buchberger(&[g1, g2], &r.bf_order(), &GroebnerConfig::default()).unwrap();
        assert_eq!(gb.generators.len(), 1);
        assert_eq!(gb.generators[0], x);
    }

    #[test]
    fn weyl_relation_collapses_to_unit() {
        // x dx and dx x = x dx + 1 together contain 1
        let r = ring1();
        let x = PBWOperator::x(&r, 0);
        let dx = PBWOperator::d(&r, 0);
        let gb = buchberger(
            &[x.mul(&dx), dx.mul(&x)],
            &r.bf_order(),
            &GroebnerConfig::default(),
        )
        .unwrap();
        assert!(gb.is_unit_ideal());
    }

    #[test]
    fn spair_heads_cancel() {
        let r = ring1();
        let x = PBWOperator::x(&r, 0);
        let dx = PBWOperator::d(&r, 0);
        let ord = r.bf_order();
        let f = dx.mul(&dx).add(&x); // dx^2 + x
        let g = dx.mul(&x); // x dx + 1
        let s = s_polynomial(&f, &g, &ord).unwrap();
        // heads dx^2 and x dx lift to lcm x dx^2 and cancel
        let lead = OrdOp::from_op(&s, &ord);
        assert!(ord.cmp(&lead.lm().0, &PBWMonomial(vec![1, 2, 0, 0]).0) == Ordering::Less);
    }

    #[test]
    fn all_spolys_of_output_reduce_to_zero() {
        let r = WeylRing::new(&VarSet::new(["x", "y"])).unwrap();
        let x = PBWOperator::x(&r, 0);
        let y = PBWOperator::x(&r, 1);
        let dx = PBWOperator::d(&r, 0);
        let dy = PBWOperator::d(&r, 1);
        let s = PBWOperator::s(&r);
        // a small non-trivial mixed system
        let gens = [
            x.mul(&dx).add(&y.mul(&dy)).sub(&s.scale(&rat_int(2))),
            y.mul(&dx).sub(&x.mul(&dy)),
            x.mul(&x).add(&y.mul(&y)),
        ];
        let ord = r.bf_order();
        let gb = buchberger(&gens, &ord, &GroebnerConfig::default()).unwrap();
        for f in &gb.generators {
            for g in &gb.generators {
                if std::ptr::eq(f, g) {
                    continue;
                }
                let sp = s_polynomial(f, g, &ord).unwrap();
                assert!(gb.contains(&sp));
            }
        }
        for g in &gens {
            assert!(gb.contains(g));
        }
    }

    #[test]
    fn caps_produce_resource_errors() {
        let r = ring1();
        let x = PBWOperator::x(&r, 0);
        let dx = PBWOperator::d(&r, 0);
        let cfg = GroebnerConfig {
            max_pairs: 0,
            ..GroebnerConfig::default()
        };
        let res = buchberger(&[x.mul(&dx), dx.mul(&x)], &r.bf_order(), &cfg);
        assert!(matches!(
            res,
            Err(Error::Resource {
                kind: CapKind::Pairs,
                ..
            })
        ));
    }
}
