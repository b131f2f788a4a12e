//! Hermite polynomials, the harmonic oscillator and the Hermite expression `τ_H`.

pub mod basis;
pub mod form;
pub mod mehler;
pub mod oscillator;
pub mod quadrature;
pub mod stirling;

pub use basis::{hermite_eval, hermite_functions, normalized_eval, HermiteBasis};
pub use form::{form_constants, form_inequality_check, random_combination, FormReport};
pub use mehler::{mehler_eigensum, mehler_kernel, MehlerSide};
pub use oscillator::{
    gauss_hermite_transform, left_definite_inner_product, oscillator_coefficients,
    oscillator_domain_membership, oscillator_fractional_norm, resolvent_trace_membership,
    sobolev_side_membership, OscillatorState, Side,
};
pub use quadrature::GaussHermite;
pub use stirling::{stirling_coefficients, LeftDefiniteCoefficients, StirlingTable};
