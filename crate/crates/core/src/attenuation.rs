//! Causal power-law loss operator.
//!
//! The operator `A` acts by convolution in time with a causal kernel whose
//! form depends on the exponent `γ`:
//!
//! * even integer `γ`: `A = -(-1)^{γ/2} ∂^{γ-1}/∂t^{γ-1}` (γ = 2 is the Voigt model),
//! * odd integer `γ`: kernel `(2/π)(γ-1)! (-1)^{(γ+1)/2} H(t)/t^γ`,
//! * otherwise: kernel `-(2/π) Γ(γ) sin(γπ/2) H(t)/|t|^γ`.
//!
//! The power kernels are not locally integrable; their transforms are taken
//! in the Hadamard finite-part sense with a unit (1 s) reference scale, which
//! only matters for odd integer `γ` where a logarithm appears.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerance on `|γ - round(γ)|` for classifying an exponent as an integer.
pub const INTEGER_TOLERANCE: f64 = 1e-12;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentClass {
    EvenInteger(u32),
    OddInteger(u32),
    NonInteger,
}

/// Power-law exponent `γ > 1` of the frequency-dependent loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawExponent {
    gamma: f64,
    class: ExponentClass,
}

impl PowerLawExponent {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 1.0 {
            return Err(Error::Domain(format!(
                "power-law exponent must be finite and > 1, got {gamma}"
            )));
        }
        let nearest = gamma.round();
        let class = if (gamma - nearest).abs() <= INTEGER_TOLERANCE {
            let n = nearest as u32;
            if n.is_multiple_of(2) {
                ExponentClass::EvenInteger(n)
            } else {
                ExponentClass::OddInteger(n)
            }
        } else {
            ExponentClass::NonInteger
        };
        Ok(Self { gamma, class })
    }

    /// The Voigt model, `γ = 2`.
    pub fn voigt() -> Self {
        Self {
            gamma: 2.0,
            class: ExponentClass::EvenInteger(2),
        }
    }

    pub fn value(&self) -> f64 {
        self.gamma
    }

    pub fn class(&self) -> ExponentClass {
        self.class
    }
}

/// The frequency symbol `Â(ω)` of the loss operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSymbol {
    pub gamma: PowerLawExponent,
}

impl LossSymbol {
    pub fn new(gamma: PowerLawExponent) -> Self {
        Self { gamma }
    }

    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        loss_symbol(self.gamma, omega)
    }
}

/// Evaluates `Â(ω)`.
///
/// `Â(-ω) = conj(Â(ω))` holds for every branch since the kernel is real, and
/// `Â(0) = 0` for every `γ > 1`.
pub fn loss_symbol(gamma: PowerLawExponent, omega: f64) -> Result<Complex64> {
    if !omega.is_finite() {
        return Err(Error::Domain(format!("frequency must be finite, got {omega}")));
    }
    if omega == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let minus_i_omega = Complex64::new(0.0, -omega);
    let value = match gamma.class {
        ExponentClass::EvenInteger(n) => {
            let sign = if (n / 2) % 2 == 0 { -1.0 } else { 1.0 };
            minus_i_omega.powu(n - 1) * sign
        }
        ExponentClass::OddInteger(n) => {
            let sign = if n.div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 };
            let digamma = -EULER_GAMMA + (1..n).map(|k| 1.0 / k as f64).sum::<f64>();
            let log = Complex64::new(omega.abs().ln(), -0.5 * PI * omega.signum());
            Complex64::new(0.0, omega).powu(n - 1) * (digamma - log) * (2.0 / PI * sign)
        }
        ExponentClass::NonInteger => {
            let g = gamma.gamma;
            let power = Complex64::from_polar(
                omega.abs().powf(g - 1.0),
                -0.5 * PI * omega.signum() * (g - 1.0),
            );
            -power / (0.5 * g * PI).cos()
        }
    };
    Ok(value)
}

/// Complex wavenumber `K(ω) = sqrt(ω²(1 - βÂ(ω)))` of a mode, normalized by
/// unit velocity (the phase `K τ` uses travel time `τ`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexWavenumber {
    pub omega: f64,
    pub beta: f64,
    pub value: Complex64,
    /// The source-strength factor `1 - βÂ(ω)`.
    pub loss_factor: Complex64,
}

/// Computes `K(ω)` on the branch with `Im K ≥ 0`.
///
/// Fails when `β|Â(ω)| ≥ 1`, where the truncated (first-order in β) model
/// breaks down.
pub fn wavenumber(omega: f64, beta: f64, gamma: PowerLawExponent) -> Result<ComplexWavenumber> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!("loss ratio must be finite and >= 0, got {beta}")));
    }
    let symbol = loss_symbol(gamma, omega)?;
    let loss = beta * symbol.norm();
    if loss >= 1.0 {
        return Err(Error::OutOfRegime { omega, loss });
    }
    let loss_factor = Complex64::new(1.0, 0.0) - symbol * beta;
    let mut value = loss_factor.sqrt() * omega;
    if beta == 0.0 {
        value = Complex64::new(omega, 0.0);
    }
    if value.im < 0.0 {
        value = -value;
    }
    Ok(ComplexWavenumber {
        omega,
        beta,
        value,
        loss_factor,
    })
}
