//! Exact symbolic machinery for cyclic cocycles on polynomial Weyl algebras.
//!
//! The crate provides, over the ground ring Q(i)[hbar, hbar^-1]:
//!
//! * exact scalars ([`Scalar`]: Laurent polynomials in `hbar` with
//!   Gaussian-rational coefficients) and multivariate polynomials generic
//!   over the coefficient ring;
//! * the Moyal-Weyl star product and symplectic linear actions
//!   ([`weyl`]);
//! * exact integration of polynomials over ordered simplices ([`simplex`]);
//! * Hochschild/cyclic chain operators, Koszul-graded shuffles, and their
//!   twisted variants ([`homalg`]);
//! * the simplex-integral cyclic cocycles `tau_k` together with matrix and
//!   twisted extensions ([`tau`]);
//! * evaluation of the cocycles on matrix Lie algebras, Chevalley-Eilenberg
//!   differentials, and characteristic power series ([`liecw`]);
//! * Chern characters of idempotents and the cocycle/K-theory pairing
//!   ([`ktheory`]);
//! * polynomial Alexander-Spanier complexes with their map to differential
//!   forms and to cyclic cochains ([`aspanier`]);
//! * the flat-model Fedosov connection on the Weyl bundle and the
//!   form-valued cochains it produces ([`fedosov`]).
//!
//! All arithmetic is exact; no floating point is used anywhere.

pub mod aspanier;
pub mod checks;
pub mod fedosov;
pub mod graded;
pub mod homalg;
pub mod ktheory;
pub mod liecw;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod simplex;
pub mod tau;
pub mod weyl;

pub use graded::GradedElement;
pub use matrix::Matrix;
pub use poly::{Monomial, Polynomial, VarSet};
pub use scalar::{GaussianRational, Scalar};

/// Multivariate polynomial with exact [`Scalar`] coefficients, the
/// concrete instantiation used throughout the crate.
pub type Poly = Polynomial<Scalar>;

/// Exterior-algebra-valued polynomial (differential form with polynomial
/// coefficients) over exact scalars.
pub type PolyForm = GradedElement<Scalar>;

/// Square matrix over the Gaussian rationals, used for symplectic and
/// unitary twist data.
pub type QiMatrix = Matrix<GaussianRational>;

/// Errors reported by fallible operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Inversion was requested for an element that is not a unit.
    #[error("not a unit: {0}")]
    NotAUnit(String),
    /// Two values built over different generator contexts were mixed.
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    /// A square matrix was singular where an inverse was required.
    #[error("singular matrix")]
    SingularMatrix,
    /// An argument had the wrong degree or shape for the operation.
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    /// A matrix failed a structural requirement (symplectic, idempotent, ...).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    /// A series was truncated below the order needed for the evaluation.
    #[error("truncation too short: {0}")]
    Truncation(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
