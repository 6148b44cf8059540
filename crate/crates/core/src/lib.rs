//! Truncated path signatures and the algebraic certificates built on them.
//!
//! The crate is layered bottom-up:
//!
//! * [`words`]: the free tensor algebra over words with exact rational
//!   coefficients (concatenation, shuffle, right half-shuffle).
//! * [`poly`]: sparse multivariate polynomials, translation, and the ring
//!   homomorphism into the shuffle algebra.
//! * [`path`]: piecewise-linear and sampled paths, plus constructions on them
//!   (inverse, concatenation, backtracking removal, projection, jets).
//! * [`signature`]: dense truncated signatures, Chen products and the pairing
//!   with tensor elements.
//! * [`pushforward`]: the symbolic map sending words on `d + 1` letters to
//!   tensor elements on `d` letters along a graph map `x -> (x, g(x))`.
//! * [`certify`]: residual reports for variety membership, holonomy, Cauchy
//!   problems, and linear or Hamiltonian vector fields.

pub mod certify;
mod error;
pub mod path;
pub mod poly;
pub mod pushforward;
pub mod signature;
pub mod words;

pub use error::{Error, ParseError, Result};

pub use certify::{
    CauchyProblem, CheckConfig, HamiltonianSystem, LinearField, ProjectableReport, ResidualReport,
    ResidualRow, VarietySpec, Verdict,
};
pub use path::{FdScheme, PathModel, PiecewiseLinearPath, SampledPath};
pub use poly::MultiPoly;
pub use pushforward::GraphMap;
pub use signature::{SignatureMethod, TruncSig};
pub use words::{TensorElem, Word};

/// Exact coefficient type shared by the symbolic layer.
pub type Rational = num_rational::BigRational;
