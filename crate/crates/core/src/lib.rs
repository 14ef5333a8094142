//! Numerics for the Bargmann transform between `L²(ℝ)` and the Fock space `F²`.
//!
//! The crate carries functions on both sides of the transform in two forms:
//! truncated coefficient vectors (Hermite functions `h_n` on the real line,
//! normalized monomials `e_n(z) = zⁿ/√n!` on the Fock side) and plain closures
//! evaluated through Gaussian quadrature. Every operator is implemented along
//! at least two independent routes so the routes can be checked against each
//! other:
//!
//! - [`frft`]: fractional Fourier transform as a diagonal phase on Hermite
//!   coefficients, as a chirp integral, and as the rotation `f(z) ↦ f(e^{-iα}z)`.
//! - [`hilbert`]: classical and fractional Hilbert transforms through the
//!   Heaviside phase multiplier, the FFT grid multiplier, and the Fock-space
//!   kernel built from the error-function primitive.
//! - [`singular`]: the operators `S_φ f(z) = ∫ f(w) e^{z w̄} φ(z − w̄) dλ(w)`,
//!   their rotated variants, the wavelet transform and the symbols it induces.
//! - [`verify`]: the named identity checks behind `fockbridge verify`.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

#![forbid(unsafe_code)]

pub mod cli;
pub mod error;
pub mod formats;
pub mod frft;
pub mod hilbert;
#[doc(hidden)]
pub mod oracle;
pub mod quadrature;
pub mod representation;
pub mod singular;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use frft::{FrftAngle, BranchedPrefactor};
pub use hilbert::{HilbertParams, HilbertWork};
pub use quadrature::{LineRule, HalfLineRule, PlaneRule};
pub use representation::{FockCoeffs, GridGeometry, HermiteCoeffs, SampledSignal};
pub use singular::{FockSymbol, OperatorMatrix, SymbolKind, WaveletSpec};
pub use special::{BranchConvention, NormConstant};
