//! Linear codes of matrices intertwining two families of linear maps over a
//! finite field: `C(A, B) = { X : A_i X = X B_i for all i }`.

pub mod canonical;
pub mod code;
pub mod construct;
pub mod error;
pub mod gf;
pub mod json;
pub mod matrix;
pub mod partition;
pub mod poly;

pub use canonical::{
    generalized_jordan_matrix, nilpotent_matrix, primary_decomposition, spectral_summary, PrimaryComponent,
    PrimaryDecomposition, SpectralEntry,
};
pub use code::{
    bounds_rank, bounds_spectral, char_gcd, code_conjugate, dim_via_formula, intertwiner_basis, is_zero_code_fast,
    min_distance, syndrome, Bounds, CodeParams, FormulaDimension, IntertwiningCode, MinDistance, DEFAULT_BUDGET,
};
pub use construct::{
    construct_code, construct_diagonal_seed, construct_extremal, verify_certificate, CheckStatus,
    ConstructionCertificate, VerificationReport,
};
pub use error::{Error, Result};
pub use gf::{Elem, Field, FieldElement};
pub use matrix::{companion, Matrix, Orientation};
pub use partition::{conjprod, minsum, nilpotent_pair_dim, Partition};
pub use poly::{poly_gcd, FactoredPolynomial, Poly};
