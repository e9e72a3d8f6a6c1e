//! Asymptotics of random Young diagrams under Schur–Weyl measures: exact
//! observables of diagrams, the limit shape family, RSK sampling and the
//! Gaussian fluctuation machinery around the limit shape.
//!
//! Algebraic code is generic over [`Scalar`], so the same routines run on
//! exact rationals, on polynomials in the parameter `c` and on floats.

pub mod cpoly;
pub mod error;
pub mod fluctuations;
pub mod identities;
pub mod limitshape;
pub mod montecarlo;
pub mod observables;
pub mod partition;
pub mod quadrature;
pub mod rsk;
pub mod scalar;
pub mod series;
pub mod stats;

use num_rational::BigRational;

pub use cpoly::CPolynomial;
pub use error::{Error, Result};
pub use partition::{InterlacingCoords, Partition, Profile};
pub use scalar::Scalar;
pub use series::FormalSeries;

pub type Rational = BigRational;
pub type ExactSeries = FormalSeries<Rational>;
pub type FloatSeries = FormalSeries<f64>;
pub type F32Series = FormalSeries<f32>;
pub type CSeries = FormalSeries<CPolynomial>;
