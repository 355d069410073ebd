//! Spectral assembly of the Green tensor and time-domain synthesis.
//!
//! Every medium is assembled from the mode projectors as
//! `Ĝ = Φ₃I + E₁(Φ₁ - Φ₃) + E₂(Φ₂ - Φ₃)`, so the polarization operator of
//! mode 3 is never inverted. `Eᵢ(Φ) = Dᵢ⊗Dᵢ Mᵢ⁻¹ Φ` reduces to second
//! derivatives of the potentials in [`crate::potential`].
//!
//! `Ĝ` solves `Γᶜ(∇)Ĝ + Â(ω)Γᵛ(∇)Ĝ + ρω²Ĝ = -δ(x)I` and has units of s²/kg
//! (m per N·s in the frequency domain).

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::christoffel::{MediumKind, MediumSpec};
use crate::potential::{hessian_case1_with, hessian_case2_with, HessianValue};
use crate::scalarwave::ScalarMode;
use crate::tensor::{ComplexTensor3, Vec3};
use crate::{Error, Result};

/// `Ĝ(x, ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenTensor {
    pub x: Vec3,
    pub omega: f64,
    pub g: ComplexTensor3,
    /// Set when an in-plane block used the on-axis limit.
    pub axis_limit: bool,
}

fn modes(medium: &MediumSpec) -> Result<[ScalarMode; 3]> {
    Ok([
        ScalarMode::of(medium, 1)?,
        ScalarMode::of(medium, 2)?,
        ScalarMode::of(medium, 3)?,
    ])
}

fn wrong_kind(expected: &str, medium: &MediumSpec) -> Error {
    Error::InvalidMedium(format!("expected medium {expected}, got {}", medium.kind()))
}

/// `Ĝ = Σᵢ Φᵢ eᵢ⊗eᵢ` for the orthorhombic medium.
pub fn green_medium1(medium: &MediumSpec, x: &Vec3, omega: f64) -> Result<GreenTensor> {
    if medium.kind() != MediumKind::I {
        return Err(wrong_kind("I", medium));
    }
    let mut g = ComplexTensor3::zero();
    for (i, mode) in modes(medium)?.iter().enumerate() {
        g.0[i][i] = mode.phi(x, omega)?;
    }
    Ok(GreenTensor { x: *x, omega, g, axis_limit: false })
}

/// Embeds an in-plane Hessian difference into rows/columns 1 and 2.
fn in_plane(a: &HessianValue, b: &HessianValue) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for k in 0..2 {
        for l in 0..2 {
            out[k][l] = a.h.0[k][l] - b.h.0[k][l];
        }
    }
    out
}

/// Medium II: `Ĝ = Φ₃J + Φ₁e₃⊗e₃ + ∇⊥∇⊥(M⁻¹Φ₂ - M⁻¹Φ₃)` with `J = I - e₃⊗e₃`
/// and `M = ∂₁² + ∂₂²`.
pub fn green_medium2(medium: &MediumSpec, x: &Vec3, omega: f64) -> Result<GreenTensor> {
    if medium.kind() != MediumKind::II {
        return Err(wrong_kind("II", medium));
    }
    let [m1, m2, m3] = modes(medium)?;
    let k1 = m1.wavenumber(omega)?;
    let k2 = m2.wavenumber(omega)?;
    let k3 = m3.wavenumber(omega)?;
    let phi1 = m1.phi_with(&k1, x)?;
    let phi3 = m3.phi_with(&k3, x)?;
    let h2 = hessian_case2_with(&m2, &k2, x)?;
    let h3 = hessian_case2_with(&m3, &k3, x)?;
    let block = in_plane(&h2, &h3);
    let mut g = ComplexTensor3::zero();
    for k in 0..2 {
        for l in 0..2 {
            g.0[k][l] = block[k][l];
        }
        g.0[k][k] += phi3;
    }
    g.0[1][0] = g.0[0][1];
    g.0[2][2] = phi1;
    Ok(GreenTensor { x: *x, omega, g, axis_limit: h2.axis_limit })
}

/// Medium III (and its isotropic limit):
/// `Ĝ = Φ₃I + ∇∇(Δ⁻¹Φ₁ - Δ⁻¹Φ₃) + curl⊥curl⊥(M⁻¹Φ₂ - M⁻¹Φ₃)`, where the
/// in-plane curl block is the cofactor `[[H₂₂, -H₁₂], [-H₁₂, H₁₁]]`.
pub fn green_medium3(medium: &MediumSpec, x: &Vec3, omega: f64) -> Result<GreenTensor> {
    if !matches!(medium.kind(), MediumKind::III | MediumKind::Isotropic) {
        return Err(wrong_kind("III", medium));
    }
    let [m1, m2, m3] = modes(medium)?;
    let k1 = m1.wavenumber(omega)?;
    let k2 = m2.wavenumber(omega)?;
    let k3 = m3.wavenumber(omega)?;
    let phi3 = m3.phi_with(&k3, x)?;
    let p1 = hessian_case1_with(&m1, &k1, x)?;
    let p3 = hessian_case1_with(&m3, &k3, x)?;
    let s2 = hessian_case2_with(&m2, &k2, x)?;
    let s3 = hessian_case2_with(&m3, &k3, x)?;
    let d = in_plane(&s2, &s3);
    let mut g = ComplexTensor3::identity().scale(phi3) + (p1.h - p3.h);
    g.0[0][0] += d[1][1];
    g.0[1][1] += d[0][0];
    g.0[0][1] -= d[0][1];
    g.0[1][0] = g.0[0][1];
    Ok(GreenTensor { x: *x, omega, g, axis_limit: s2.axis_limit })
}

/// Isotropic medium: `Ĝ = Φ₂I + ∇∇(Δ⁻¹Φ₁ - Δ⁻¹Φ₂)`.
pub fn green_isotropic(medium: &MediumSpec, x: &Vec3, omega: f64) -> Result<GreenTensor> {
    if medium.kind() != MediumKind::Isotropic {
        return Err(wrong_kind("isotropic", medium));
    }
    let [m1, m2, _] = modes(medium)?;
    let k1 = m1.wavenumber(omega)?;
    let k2 = m2.wavenumber(omega)?;
    let phi2 = m2.phi_with(&k2, x)?;
    let p1 = hessian_case1_with(&m1, &k1, x)?;
    let p2 = hessian_case1_with(&m2, &k2, x)?;
    let g = ComplexTensor3::identity().scale(phi2) + (p1.h - p2.h);
    Ok(GreenTensor { x: *x, omega, g, axis_limit: false })
}

/// Dispatches on the medium kind.
pub fn green_tensor(medium: &MediumSpec, x: &Vec3, omega: f64) -> Result<GreenTensor> {
    match medium.kind() {
        MediumKind::I => green_medium1(medium, x, omega),
        MediumKind::II => green_medium2(medium, x, omega),
        MediumKind::III => green_medium3(medium, x, omega),
        MediumKind::Isotropic => green_isotropic(medium, x, omega),
    }
}

/// Source time function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wavelet {
    /// `w(t) = (1 - 2a(t-t₀)²) e^{-a(t-t₀)²}`, `a = π²f₀²`.
    Ricker { peak_frequency: f64, delay: f64 },
}

impl Wavelet {
    fn ricker_a(f0: f64) -> f64 {
        (std::f64::consts::PI * f0).powi(2)
    }

    pub fn sample(&self, t: f64) -> f64 {
        match *self {
            Wavelet::Ricker { peak_frequency, delay } => {
                let a = Self::ricker_a(peak_frequency);
                let s = a * (t - delay).powi(2);
                (1.0 - 2.0 * s) * (-s).exp()
            }
        }
    }

    /// `Ŵ(ω) = ∫ w(t) e^{iωt} dt`.
    pub fn spectrum(&self, omega: f64) -> Complex64 {
        match *self {
            Wavelet::Ricker { peak_frequency, delay } => {
                let a = Self::ricker_a(peak_frequency);
                let amp = omega * omega / (2.0 * a) * (std::f64::consts::PI / a).sqrt() * (-omega * omega / (4.0 * a)).exp();
                Complex64::from_polar(amp, omega * delay)
            }
        }
    }

    /// Angular frequency of the spectral peak.
    pub fn peak_omega(&self) -> f64 {
        match *self {
            Wavelet::Ricker { peak_frequency, .. } => 2.0 * Self::ricker_a(peak_frequency).sqrt(),
        }
    }

    /// Dominant period, used as the wavelet width.
    pub fn width(&self) -> f64 {
        match *self {
            Wavelet::Ricker { peak_frequency, .. } => 1.0 / peak_frequency,
        }
    }
}

/// Real displacement response `(w * G)(x, t)` sampled at `t = n dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Seismogram {
    pub x: Vec3,
    pub dt: f64,
    pub samples: Vec<[[f64; 3]; 3]>,
    pub wavelet: Wavelet,
}

impl Seismogram {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn trace(&self, k: usize, l: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[k][l]).collect()
    }
}

/// Spectral bins whose wavelet amplitude is below this fraction of the
/// maximum are treated as zero.
pub const BAND_THRESHOLD: f64 = 1e-10;

/// Synthesizes `w * G` on `[0, duration)` by inverse FFT of `Ŵ(ω)Ĝ(x, ω)`
/// over a power-of-two Hermitian frequency grid.
pub fn time_domain(medium: &MediumSpec, x: &Vec3, wavelet: Wavelet, dt: f64, duration: f64) -> Result<Seismogram> {
    if !(dt > 0.0) || !(duration > dt) {
        return Err(Error::Domain(format!("need 0 < dt < duration, got dt = {dt}, duration = {duration}")));
    }
    let n = ((duration / dt).ceil() as usize).next_power_of_two();
    let half = n / 2;
    let d_omega = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    let amplitudes: Vec<Complex64> = (0..=half).map(|k| wavelet.spectrum(k as f64 * d_omega)).collect();
    let peak = amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max);

    let mut spectra = vec![vec![Complex64::new(0.0, 0.0); n]; 9];
    let mut offending = Vec::new();
    for (k, w) in amplitudes.iter().enumerate() {
        if w.norm() <= BAND_THRESHOLD * peak {
            continue;
        }
        let omega = k as f64 * d_omega;
        let g = match green_tensor(medium, x, omega) {
            Ok(g) => g,
            Err(Error::OutOfRegime { .. }) => {
                offending.push(omega);
                continue;
            }
            Err(e) => return Err(e),
        };
        for (c, v) in g.g.entries().iter().enumerate() {
            let mut s = v * w;
            if k == half {
                s = Complex64::new(s.re, 0.0);
            }
            spectra[c][k] = s;
            if k > 0 && k < half {
                spectra[c][n - k] = s.conj();
            }
        }
    }
    if !offending.is_empty() {
        return Err(Error::BandOutOfRegime { omegas: offending });
    }

    // f(t_j) = (1/(N dt)) Σ_k F(ω_k) e^{-iω_k t_j}: a forward DFT.
    let fft = FftPlanner::new().plan_fft_forward(n);
    let scale = 1.0 / (n as f64 * dt);
    let len = ((duration / dt).ceil() as usize).min(n);
    let mut samples = vec![[[0.0; 3]; 3]; len];
    for (c, spectrum) in spectra.iter_mut().enumerate() {
        fft.process(spectrum);
        for (j, s) in samples.iter_mut().enumerate() {
            s[c / 3][c % 3] = spectrum[j].re * scale;
        }
    }
    Ok(Seismogram { x: *x, dt, samples, wavelet })
}

/// Magnitude of the analytic signal of a real trace.
pub fn envelope(trace: &[f64]) -> Vec<f64> {
    let n = trace.len();
    if n == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex64> = trace.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, b) in buf.iter_mut().enumerate() {
        let weight = if k == 0 || (n.is_multiple_of(2) && k == n / 2) {
            1.0
        } else if k < n.div_ceil(2) {
            2.0
        } else {
            0.0
        };
        *b *= weight;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|z| z.norm() / n as f64).collect()
}
