//! Lines on the degree-d Fermat surface `x^d − y^d − z^d + w^d = 0` and the
//! combinatorics of pairwise skew (disjoint) subsets of them.
//!
//! The 3d² lines fall into three strata indexed by residue pairs, and two
//! lines meet exactly when a small residue congruence holds ([`line::meets`]).
//! An independent exact oracle re-derives incidence from plane pairs with
//! cyclotomic coefficients ([`oracle::meets_geometric`]). On top of the
//! predicate sit validators and constructors for skew families
//! ([`family`]) and an exact branch-and-bound maximum-skew-set solver over
//! the full intersection graph ([`mis`]), reproducing the extremal counts
//! 6 (d=3), 13 (d=5) and 3d otherwise.

pub mod cyclo;
pub mod error;
pub mod family;
pub mod line;
pub mod mis;
pub mod oracle;
pub mod residue;

pub use error::{Error, Result};
pub use family::{
    complete_family, construct_2d, construct_auto, construct_builtin, construct_even,
    construct_odd_1mod4, construct_odd_3mod4, is_skew_family, validate_structured, Family,
    TwoDVariant, ValidationReport,
};
pub use line::{degree_of, enumerate_lines, meets, resolve_view, LineId, LineSetView, Stratum};
pub use mis::{
    build_graph, build_graph_with_cap, export_dimacs, max_independent_set, structural_upper_bound,
    verify_certificate, Certificate, IntersectionGraph, MisOptions, SearchStatus,
    DEFAULT_VERTEX_CAP,
};
pub use oracle::{
    meets_geometric, meets_modular, on_surface, oracle_primes, plane_pair_on_surface, planes_of,
    PlanePair,
};
pub use residue::{phi_minus, phi_plus, psi, reduce, Residue, SurfaceParams};
