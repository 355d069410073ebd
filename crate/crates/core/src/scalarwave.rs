//! Ellipsoidal travel times and scalar Helmholtz solutions of each mode.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::attenuation::{wavenumber, ComplexWavenumber, PowerLawExponent};
use crate::christoffel::MediumSpec;
use crate::tensor::Vec3;
use crate::{Error, Result};

/// Travel times below this (s) are treated as the source point.
pub const TAU_MIN: f64 = 1e-9;

/// `τ(x) = sqrt(Σ xⱼ² / bⱼ²)`.
pub fn travel_time(b: &[f64; 3], x: &Vec3) -> f64 {
    (0..3).map(|j| (x[j] / b[j]).powi(2)).sum::<f64>().sqrt()
}

/// Travel time together with its velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelTime {
    pub b: [f64; 3],
    pub value: f64,
}

impl TravelTime {
    pub fn new(b: [f64; 3], x: &Vec3) -> Self {
        Self { b, value: travel_time(&b, x) }
    }
}

/// Parameters of one scalar wave problem: the mode velocities, density,
/// loss ratio and exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMode {
    pub b: [f64; 3],
    pub rho: f64,
    pub beta: f64,
    pub gamma: PowerLawExponent,
}

impl ScalarMode {
    /// Mode `mode` (1-based) of a medium.
    pub fn of(medium: &MediumSpec, mode: usize) -> Result<Self> {
        let s = medium.mode_constants(mode)?;
        Ok(Self {
            b: s.b,
            rho: medium.rho,
            beta: medium.beta[mode - 1],
            gamma: medium.gamma,
        })
    }

    pub fn b_product(&self) -> f64 {
        self.b[0] * self.b[1] * self.b[2]
    }

    pub fn travel_time(&self, x: &Vec3) -> f64 {
        travel_time(&self.b, x)
    }

    pub fn wavenumber(&self, omega: f64) -> Result<ComplexWavenumber> {
        wavenumber(omega, self.beta, self.gamma)
    }

    /// `Φ(x, ω) = (1 - βÂ) e^{iKτ} / (4π b ρ τ)`.
    pub fn phi(&self, x: &Vec3, omega: f64) -> Result<Complex64> {
        let k = self.wavenumber(omega)?;
        self.phi_with(&k, x)
    }

    /// `Φ` with a precomputed wavenumber.
    pub fn phi_with(&self, k: &ComplexWavenumber, x: &Vec3) -> Result<Complex64> {
        let tau = self.travel_time(x);
        if !(tau >= TAU_MIN) {
            return Err(Error::Singular { tau });
        }
        Ok(self.phi_at_tau(k, tau))
    }

    /// `Φ` as a function of travel time.
    pub fn phi_at_tau(&self, k: &ComplexWavenumber, tau: f64) -> Complex64 {
        let phase = (Complex64::i() * k.value * tau).exp();
        k.loss_factor * phase / (4.0 * PI * self.b_product() * self.rho * tau)
    }
}

/// A scalar field value of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarField {
    pub mode: usize,
    pub omega: f64,
    pub value: Complex64,
}

/// `Φᵢ(x, ω)` of mode `mode` of a medium.
pub fn phi(medium: &MediumSpec, mode: usize, x: &Vec3, omega: f64) -> Result<ScalarField> {
    let value = ScalarMode::of(medium, mode)?.phi(x, omega)?;
    Ok(ScalarField { mode, omega, value })
}
