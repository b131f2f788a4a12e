//! Left-definite scales of self-adjoint operators in their spectral representations.
//!
//! Numerical routines are generic over [`scalar::Real`] where the arithmetic
//! allows it; the aliases below fix the scalar to `f64`.

pub mod error;
pub mod function;
pub mod halfline;
pub mod hermite;
pub mod interpolation;
pub mod jet;
pub mod periodic;
pub mod quad;
pub mod rng;
pub mod scalar;
pub mod sobolev;
pub mod special;
pub mod spectral;
pub mod sum;

pub use error::{Error, Result};
pub use function::{catalog, CatalogSpec, TestFunction};
pub use rng::SplitMix64;
pub use spectral::{DivergencePolicy, MembershipStatus, MembershipVerdict, Prediction};

pub type Measure = spectral::SpectralMeasure<f64>;
pub type Coefficients = spectral::CoefficientVector<f64>;
pub type Scale = spectral::ScaleIndex<f64>;
pub type Atom = spectral::Atom<f64>;
