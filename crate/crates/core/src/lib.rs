//! Exact computation of Bernstein–Sato polynomials (b-functions) for
//! isolated hypersurface singularities, with a specialized fast path for
//! semi-weighted homogeneous polynomials and their μ-constant deformations.
//!
//! The pipeline: build the annihilator Ann(f^s) in the Weyl algebra
//! extended by s and ∂_t (Briançon–Maisonobe graph ideal, ∂_t
//! elimination), then either eliminate everything but s to get the global
//! b-function, or certify candidate roots one at a time and account for
//! their local-cohomology solution dimensions until the Milnor number is
//! exhausted. All arithmetic is exact over the rationals.

pub mod annihilator;
pub mod bfunction;
pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod order;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod unipoly;
pub mod weights;
pub mod weyl;

pub use annihilator::{ann_fs, ann_fs_under, bm_ideal};
pub use bfunction::{
    candidate_roots, certify_root, certify_root_under, global_bfunction, global_bfunction_under,
    global_reduced_bfunction, global_reduced_bfunction_from_ann, global_reduced_bfunction_under,
    local_bfunction_swh, local_bfunction_swh_from_ann, local_bfunction_swh_under,
    local_bfunction_via_support, local_bfunction_via_support_under, poincare_polynomial,
    wh_bfunction_roots, LocalBFResult, RootCertificate,
};
pub use catalog::{
    find_entry, load_catalog, verify_entry, CatalogEntry, SampleResult, SampleStatus,
    StratumSpec, VerificationReport, VerifySettings,
};
pub use cohomology::{
    act_operator, act_polynomial, cohomology_solution_space, milnor_number, solve_h_f0,
    xi_order, CohomClass, EchelonBasis,
};
pub use error::{CapKind, Error, Result};
pub use groebner::{
    buchberger, extract_subring, left_normal_form, restrict_to_slots, s_polynomial,
    GroebnerBasis, GroebnerConfig,
};
pub use order::{BaseOrder, Block, MonomialOrderSpec};
pub use parse::parse_poly;
pub use poly::{Monomial, MultiPoly, VarSet};
pub use rational::{fmt_rat, parse_rat, rat, rat_int, Rat};
pub use unipoly::{RootList, UniPoly};
pub use weights::{classify_swh, weighted_degree, SwhSplit, WeightSystem};
pub use weyl::{apply_to_fs, FsImage, PBWMonomial, PBWOperator, WeylRing};
