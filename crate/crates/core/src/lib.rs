//! Exact-arithmetic engine for the deformative Schrödinger–Virasoro Lie
//! algebras `L(lambda, mu, s)`: bracket computations over the rationals,
//! finite-window structure probes (center, derived subalgebra,
//! abelianization), and brute-force classification of skew-symmetric
//! biderivations and linear commuting maps.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod halfint;
pub mod linalg;
pub mod maps;
pub mod report;
pub mod scalar;
pub mod structure;

pub use algebra::{bracket, bracket_basis, jacobi_residual, BasisVector, Family, LinComb, Params};
pub use classify::{
    classify_biderivations, classify_commuting, detect_case, BiderCase, CaseTag,
    ClassificationReport, Mode, SpanVerdict,
};
pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use linalg::{
    in_span, nullspace_exact, rank_exact, rank_mod_p, solve_exact, ModularConfig, SparseMatrix,
    SubspaceBasis,
};
pub use maps::{
    bider_from_commuting, bider_residual_1, bider_residual_2, commuting_residual, inner_bider,
    lemma25_residual, lemma26_check, phi0, phi1, polarized_commuting_residual, psi0, psi1,
    skew_check, standard_commuting, BilinearMap, FunctionalSpec, LinearSelfMap, SymmetryFlag,
};
pub use scalar::{format_rat, parse_rat, Rat};
pub use structure::{
    abelianization_dim, center_window, centralizer_of_derived, derived_window, jacobi_check_window,
    JacobiCheck, Window,
};
