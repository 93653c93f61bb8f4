//! Exact linear algebra for Leonard pairs.
//!
//! A Leonard pair is an ordered pair of linear maps (A, A*) on a
//! finite-dimensional vector space such that some basis makes A irreducible
//! tridiagonal while A* is diagonal, and another basis swaps the roles. This
//! crate builds such pairs from parameter arrays, recovers the parameter
//! array from a raw matrix pair, and checks the classical identities for the
//! commutator AA* - A*A (its determinant when the diameter is odd, its
//! one-dimensional null space when the diameter is even) against independent
//! dense linear-algebra oracles.
//!
//! Everything runs over an exact field: arbitrary-precision rationals or a
//! prime field F_p. There is no floating point anywhere, so every check is an
//! exact equality.
//!
//! The crate is `no_std` (it needs only `alloc`); IO, JSON formats and the
//! command-line front end live in the companion `leonard-lab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod linalg;
pub mod pair;
pub mod qbracket;
pub mod scalar;
pub mod search;
mod spectrum;
pub mod theorems;

pub use linalg::{ExactMatrix, ExactVector, LinalgError};
pub use pair::{
    build_split_form, extract_parameter_array, krawtchouk_pair, verify_leonard_pair, BasisTag,
    LeonardError, LeonardPairMatrices, PairVerification, ParameterArray, SplitKind,
    TridiagonalData, VerifiedPair,
};
pub use qbracket::{
    assert_odd_brackets_nonzero, beta_of, q_bracket_odd, BetaContext, BetaProvenance,
    QBracketError,
};
pub use scalar::{FieldElement, FieldSpec, ScalarError};
pub use search::search_parameter_arrays;
pub use theorems::{
    bc_product, det_commutator_recursive, eq_left_eval, eta_star_eval, gamma_star_vector,
    gamma_vector, psi, rhs_det1, rhs_det1_star, rhs_det2, tau_star_eval, verify_all, CheckRow,
    CheckStatus, TheoremError, VerificationReport, VerifyOptions, CHECK_NAMES,
};
