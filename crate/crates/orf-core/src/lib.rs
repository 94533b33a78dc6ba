//! Spectral theory of orthogonal rational functions on the unit circle and
//! the real line.
//!
//! The crate provides the scalar and operator Moebius machinery attached to a
//! sequence of poles, the recurrence for the orthonormal rational functions,
//! their banded matrix representations (Hessenberg and five-diagonal), the
//! rational quadrature formulas driven by those representations, and the
//! conversions that carry the whole theory from the unit circle to the
//! extended real line.

pub mod error;
pub mod matrices;
pub mod measures;
pub mod moebius;
pub mod opmoebius;
pub mod orfcore;
pub mod realline;
pub mod spectral;

pub use error::{OrfError, Result};
pub use matrices::{
    build_matrix, matrix_to_csv, matrix_to_json, pair_rep, theta_block, tridiagonal_pair,
    truncated_rep, Family, RepKind, RepSpec,
};
pub use measures::{
    circle_grid_measure, inner_product, lebesgue_orf, orf_from_measure, DiscreteMeasure,
    GramSchmidtResult,
};
pub use moebius::{blaschke, eta, mobius_forward, mobius_inverse, BlaschkeVariant, CPoint, Domain, PoleSeq};
pub use opmoebius::{conjugate_by_eta, op_eta, op_mobius_forward, op_mobius_inverse, DenseMatrix, DiagParam};
pub use orfcore::{derived_params, eval_chi, eval_chi_sequence, eval_orf, eval_orf_sequence, eval_porf, normalize_standard, porf_u, DerivedParams, OrfValue, ParamSeq};
pub use realline::{
    cayley, circle_line_params, mass_at_infinity_check, rl_excluded_v, rl_mobius, rl_op_mobius,
    rl_quadrature, rl_quadrature_via_circle, rl_reconstruct_measure, Direction, LineConversion,
    MassAtInfinityReport,
};
pub use spectral::{
    cluster_limit_points, compare_truncated_spectra, eigensolve, krein_two_point,
    limit_point_sequence, lopez_arc, mass_point_weight, match_eigenvalues, matched_distance,
    min_cost_assignment, pair_spectrum, porf_quadrature, reconstruct_measure, zeros_orf,
    EigenResult, Eigensolver, KreinSequences, LopezArc, Quadrature, ZeroRoute,
};
