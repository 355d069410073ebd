//! Closed-form frequency-domain Green tensors for viscoelastic media with
//! power-law attenuation and simple anisotropy (orthorhombic "Medium I",
//! two transversely isotropic media "II" and "III", and the isotropic limit).
//!
//! The pipeline mirrors the construction of the tensor:
//!
//! * [`attenuation`]: the causal power-law loss operator, its frequency symbol
//!   and the complex wavenumber of each mode.
//! * [`christoffel`]: the media catalog, Christoffel tensors and their
//!   closed-form eigenstructure.
//! * [`scalarwave`]: ellipsoidal travel times and the scalar Helmholtz
//!   solutions of each mode.
//! * [`potential`]: inversion of the quadratic polarization operator through
//!   ellipsoidal potentials, with closed-form Hessians.
//! * [`green`]: spectral assembly of the Green tensor and time-domain
//!   synthesis.
//! * [`validation`]: independent numerical oracles used to certify every
//!   closed form.
//!
//! Fourier convention: `F[f](ω) = ∫ f(t) e^{iωt} dt`, so that the outgoing
//! factor `e^{iK(ω)τ}` decays for `Im K > 0` and `∂/∂t` maps to `-iω`.

// `!(x > 0.0)` rejects NaN on purpose; index loops mirror the tensor notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod attenuation;
pub mod christoffel;
mod error;
pub mod green;
pub mod potential;
pub mod quadrature;
pub mod scalarwave;
pub mod tensor;
pub mod validation;
pub mod volume;

pub use error::{Error, Result};
pub use num_complex::Complex64;
