//! Inversion of the polarization operator `M = Σⱼ mⱼ² ∂ⱼ²` applied to the
//! scalar solutions, `MΨ = Φ`, and the Hessian `∂²Ψ/∂xₖ∂xₗ` that enters the
//! Green tensor.
//!
//! Since `Φ` is constant on the travel-time ellipsoids, `Ψ` is the potential
//! of a layered ellipsoid and can be written with confocal ellipsoidal
//! coordinates: for `h < τ(x)` let `S(h, x)` be the largest root of
//!
//! ```text
//! F(s) = Σⱼ xⱼ² / Vⱼ(s) - h²,   Vⱼ(s) = bⱼ² + mⱼ² s,   G(s) = Πⱼ Vⱼ(s).
//! ```
//!
//! Then, up to an additive constant,
//! `Ψ(x) = (1 - βÂ)/(8πρ) ∫₀^τ e^{iKh} ∫₀^{S(h)} G(s)^{-1/2} ds dh`,
//! and differentiating twice gives a boundary term at `h = τ` plus a regular
//! integral over `h ∈ (0, τ)` ([`hessian_general`]). Two families of modes
//! admit closed forms: spherical fronts with `M = Δ` ([`hessian_case1`]) and
//! cylindrical operators `M = ∂₁² + ∂₂²` ([`hessian_case2`]).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::attenuation::ComplexWavenumber;
use crate::quadrature::{integrate, QuadratureConfig};
use crate::scalarwave::{ScalarMode, TAU_MIN};
use crate::tensor::{ComplexTensor3, Vec3};
use crate::{Error, Result};

/// Below this `|z| = |Kτ|` the closed integrals use their power series.
pub const SERIES_SWITCH: f64 = 2.0;

/// `(I₀, I₁, I₂)` with `Iₙ = ∫₀^τ hⁿ e^{iKh} dh`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedIntegrals {
    pub i0: Complex64,
    pub i1: Complex64,
    pub i2: Complex64,
}

/// `Eₙ(z) = ∫₀¹ uⁿ e^{zu} du` for n = 0, 1, 2.
fn moments(z: Complex64) -> [Complex64; 3] {
    if z.norm() < SERIES_SWITCH {
        series_moments(z)
    } else {
        recursive_moments(z)
    }
}

fn series_moments(z: Complex64) -> [Complex64; 3] {
    let mut out = [Complex64::new(0.0, 0.0); 3];
    let mut term = Complex64::new(1.0, 0.0); // z^k / k!
    for k in 0..48 {
        for (n, o) in out.iter_mut().enumerate() {
            *o += term / (k + n + 1) as f64;
        }
        term *= z / (k + 1) as f64;
        if term.norm() < 1e-18 {
            break;
        }
    }
    out
}

// Integration by parts; stable once |z| is not small.
fn recursive_moments(z: Complex64) -> [Complex64; 3] {
    let ez = z.exp();
    let e0 = (ez - 1.0) / z;
    let e1 = (ez - e0) / z;
    let e2 = (ez - 2.0 * e1) / z;
    [e0, e1, e2]
}

/// Closed forms of `∫₀^τ hⁿ e^{iKh} dh`, n = 0, 1, 2.
pub fn closed_integrals(k: Complex64, tau: f64) -> ClosedIntegrals {
    let z = Complex64::i() * k * tau;
    let [e0, e1, e2] = moments(z);
    ClosedIntegrals {
        i0: e0 * tau,
        i1: e1 * tau * tau,
        i2: e2 * tau * tau * tau,
    }
}

/// Confocal family of a mode: velocities `b` and operator coefficients `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidalFrame {
    pub b: [f64; 3],
    pub m: [f64; 3],
}

/// `F`, its derivatives and `G` at one value of `s`.
#[derive(Debug, Clone, Copy)]
struct FrameValues {
    v: [f64; 3],
    df: f64,
    ddf: f64,
    g: f64,
    dlog_g: f64,
}

impl EllipsoidalFrame {
    pub fn new(b: [f64; 3], m: [f64; 3]) -> Result<Self> {
        if b.iter().any(|x| !(*x > 0.0)) || m.iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::Domain(format!("invalid ellipsoidal frame b = {b:?}, m = {m:?}")));
        }
        Ok(Self { b, m })
    }

    pub fn v(&self, s: f64) -> [f64; 3] {
        [0, 1, 2].map(|j| self.b[j] * self.b[j] + self.m[j] * self.m[j] * s)
    }

    /// `F(s) = Σ xⱼ²/Vⱼ(s) - h²`.
    pub fn f(&self, x: &Vec3, h: f64, s: f64) -> f64 {
        let v = self.v(s);
        (0..3).map(|j| x[j] * x[j] / v[j]).sum::<f64>() - h * h
    }

    /// `F'(s) = -Σ mⱼ² xⱼ² / Vⱼ²`.
    pub fn df(&self, x: &Vec3, s: f64) -> f64 {
        let v = self.v(s);
        -(0..3).map(|j| (self.m[j] * x[j] / v[j]).powi(2)).sum::<f64>()
    }

    fn values(&self, x: &Vec3, s: f64) -> FrameValues {
        let v = self.v(s);
        let mut df = 0.0;
        let mut ddf = 0.0;
        let mut dlog_g = 0.0;
        for j in 0..3 {
            let m2 = self.m[j] * self.m[j];
            let x2 = x[j] * x[j];
            df -= m2 * x2 / (v[j] * v[j]);
            ddf += 2.0 * m2 * m2 * x2 / (v[j] * v[j] * v[j]);
            dlog_g += m2 / v[j];
        }
        FrameValues {
            v,
            df,
            ddf,
            g: v[0] * v[1] * v[2],
            dlog_g,
        }
    }

    /// Travel time through the directions with `mⱼ = 0`; the confocal
    /// equation has no root for `h` below it.
    pub fn axial_travel_time(&self, x: &Vec3) -> f64 {
        (0..3)
            .filter(|&j| self.m[j] == 0.0)
            .map(|j| (x[j] / self.b[j]).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Largest root `S(h, x)` of `F(s) = 0` for `0 < h < τ(x)`, by Newton's
/// method safeguarded with bisection on a bracket `[0, s_max]`.
pub fn largest_root_s(frame: &EllipsoidalFrame, x: &Vec3, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("h must be positive, got {h}")));
    }
    let tau = crate::scalarwave::travel_time(&frame.b, x);
    if h >= tau {
        return Err(Error::WrongBranch { h, tau });
    }
    let tau0 = frame.axial_travel_time(x);
    if h <= tau0 {
        return Err(Error::Domain(format!(
            "no confocal root: h = {h} is below the axial travel time {tau0}"
        )));
    }
    let tol = 1e-12 * h * h;

    // Upper bracket: every term with m_j > 0 satisfies x_j²/V_j <= x_j²/(min b² + min m² s).
    let active = (0..3).filter(|&j| frame.m[j] > 0.0 && x[j] != 0.0);
    let (mut sum_x2, mut min_b2, mut min_m2) = (0.0, f64::INFINITY, f64::INFINITY);
    for j in active {
        sum_x2 += x[j] * x[j];
        min_b2 = min_b2.min(frame.b[j] * frame.b[j]);
        min_m2 = min_m2.min(frame.m[j] * frame.m[j]);
    }
    let mut hi = ((sum_x2 / (h * h - tau0 * tau0) - min_b2) / min_m2).max(1.0);
    let mut f_hi = frame.f(x, h, hi);
    let mut guard = 0;
    while f_hi > 0.0 {
        hi *= 2.0;
        f_hi = frame.f(x, h, hi);
        guard += 1;
        if guard > 200 || !hi.is_finite() {
            return Err(Error::Accuracy { what: "confocal root bracket", achieved: f_hi, requested: tol });
        }
    }
    let mut lo = 0.0;
    // F is convex and decreasing: Newton from the left end never overshoots.
    let mut s = lo;
    for _ in 0..400 {
        let fv = frame.f(x, h, s);
        if fv.abs() <= tol {
            return Ok(s);
        }
        if fv > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let df = frame.df(x, s);
        let newton = s - fv / df;
        s = if newton > lo && newton < hi && df < 0.0 {
            newton
        } else if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(s);
        }
    }
    Err(Error::Accuracy {
        what: "confocal root",
        achieved: frame.f(x, h, s).abs(),
        requested: tol,
    })
}

/// Second derivatives `∂²Ψ/∂xₖ∂xₗ` of a mode potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianValue {
    pub h: ComplexTensor3,
    pub omega: f64,
    /// Set when the value is the on-axis limit of the cylindrical closed form.
    pub axis_limit: bool,
}

impl HessianValue {
    /// `Σⱼ mⱼ² Hⱼⱼ`, which must reproduce `Φ`.
    pub fn apply_m(&self, m: &[f64; 3]) -> Complex64 {
        (0..3).map(|j| self.h.0[j][j] * (m[j] * m[j])).sum()
    }
}

fn symmetric(entries: impl Fn(usize, usize) -> Complex64) -> ComplexTensor3 {
    let mut t = ComplexTensor3::zero();
    for k in 0..3 {
        for l in k..3 {
            let v = entries(k, l);
            t.0[k][l] = v;
            t.0[l][k] = v;
        }
    }
    t
}

fn is_spherical(mode: &ScalarMode) -> bool {
    let b = mode.b;
    (b[0] - b[1]).abs() <= 1e-12 * b[0] && (b[0] - b[2]).abs() <= 1e-12 * b[0]
}

/// Hessian for `M = Δ` and a spherical front `b₁ = b₂ = b₃`:
///
/// `4πρ Hₖₗ = (1-βÂ)[ r̂ₖr̂ₗ e^{iKτ}/(b³τ) + (δₖₗ - 3r̂ₖr̂ₗ)/r³ ∫₀^τ h e^{iKh} dh ]`.
pub fn hessian_case1(mode: &ScalarMode, x: &Vec3, omega: f64) -> Result<HessianValue> {
    if !is_spherical(mode) {
        return Err(Error::Domain(format!("spherical closed form needs b1 = b2 = b3, got {:?}", mode.b)));
    }
    let k = mode.wavenumber(omega)?;
    hessian_case1_with(mode, &k, x)
}

pub(crate) fn hessian_case1_with(mode: &ScalarMode, k: &ComplexWavenumber, x: &Vec3) -> Result<HessianValue> {
    let tau = mode.travel_time(x);
    if !(tau >= TAU_MIN) {
        return Err(Error::Singular { tau });
    }
    let r = crate::tensor::norm(x);
    let rhat = [x[0] / r, x[1] / r, x[2] / r];
    let scale = k.loss_factor / (4.0 * PI * mode.rho);
    let far = (Complex64::i() * k.value * tau).exp() / (mode.b_product() * tau) * scale;
    let near = closed_integrals(k.value, tau).i1 / (r * r * r) * scale;
    let h = symmetric(|a, b| {
        let d = if a == b { 1.0 } else { 0.0 };
        far * (rhat[a] * rhat[b]) + near * (d - 3.0 * rhat[a] * rhat[b])
    });
    Ok(HessianValue { h, omega: k.omega, axis_limit: false })
}

/// In-plane Hessian (k, l ∈ {1, 2}) for `M = ∂₁² + ∂₂²` and `b₁ = b₂`:
///
/// `4πρ Hₖₗ = (1-βÂ)[ R̂ₖR̂ₗ e^{iKτ}/(b₁²b₃τ) + (δₖₗ - 2R̂ₖR̂ₗ)/(b₃R²) ∫_{τ₀}^τ e^{iKh} dh ]`
///
/// with `R² = x₁² + x₂²` and `τ₀ = |x₃|/b₃`, the travel time of the axis
/// point at the same height. The third row and column are zero. On the axis
/// the continuous limit `Hₖₗ = δₖₗ Φ/2` is returned and flagged.
pub fn hessian_case2(mode: &ScalarMode, x: &Vec3, omega: f64) -> Result<HessianValue> {
    if (mode.b[0] - mode.b[1]).abs() > 1e-12 * mode.b[0] {
        return Err(Error::Domain(format!("cylindrical closed form needs b1 = b2, got {:?}", mode.b)));
    }
    let k = mode.wavenumber(omega)?;
    hessian_case2_with(mode, &k, x)
}

pub(crate) fn hessian_case2_with(mode: &ScalarMode, k: &ComplexWavenumber, x: &Vec3) -> Result<HessianValue> {
    let tau = mode.travel_time(x);
    if !(tau >= TAU_MIN) {
        return Err(Error::Singular { tau });
    }
    let [b1, _, b3] = mode.b;
    let r2 = x[0] * x[0] + x[1] * x[1];
    let mut h = ComplexTensor3::zero();
    if r2 == 0.0 {
        let half = mode.phi_at_tau(k, tau) * 0.5;
        h.0[0][0] = half;
        h.0[1][1] = half;
        return Ok(HessianValue { h, omega: k.omega, axis_limit: true });
    }
    let r = r2.sqrt();
    let rhat = [x[0] / r, x[1] / r];
    let tau0 = x[2].abs() / b3;
    // τ - τ₀ without cancellation near the axis
    let gap = (r2 / (b1 * b1)) / (tau + tau0);
    let i = Complex64::i();
    let scale = k.loss_factor / (4.0 * PI * mode.rho);
    let far = (i * k.value * tau).exp() / (b1 * b1 * b3 * tau) * scale;
    let shell = (i * k.value * tau0).exp() * closed_integrals(k.value, gap).i0;
    let near = shell / (b3 * r2) * scale;
    for a in 0..2 {
        for b in 0..2 {
            let d = if a == b { 1.0 } else { 0.0 };
            h.0[a][b] = far * (rhat[a] * rhat[b]) + near * (d - 2.0 * rhat[a] * rhat[b]);
        }
    }
    h.0[1][0] = h.0[0][1];
    Ok(HessianValue { h, omega: k.omega, axis_limit: false })
}

/// Default quadrature for the general evaluator.
pub fn general_quadrature() -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: 1e-10,
        abs_tol: 0.0,
        max_evaluations: 100_000,
    }
}

const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// Hessian of `Ψ = M⁻¹Φ` for any quadratic operator, by the boundary term
/// at the wavefront plus adaptive quadrature of the regular integrand over
/// `h ∈ (τ₀, τ)` (τ₀ = 0 unless some `mⱼ = 0`). Entries along directions with
/// `mⱼ = 0` are returned as zero.
pub fn hessian_general(mode: &ScalarMode, m: [f64; 3], x: &Vec3, omega: f64) -> Result<HessianValue> {
    hessian_general_with(mode, m, x, omega, &general_quadrature())
}

pub fn hessian_general_with(
    mode: &ScalarMode,
    m: [f64; 3],
    x: &Vec3,
    omega: f64,
    config: &QuadratureConfig,
) -> Result<HessianValue> {
    let frame = EllipsoidalFrame::new(mode.b, m)?;
    let k = mode.wavenumber(omega)?;
    let tau = mode.travel_time(x);
    if !(tau >= TAU_MIN) {
        return Err(Error::Singular { tau });
    }
    let df0 = frame.df(x, 0.0);
    if df0 == 0.0 {
        return Err(Error::AxisDegenerate { radius: 0.0 });
    }
    let b = mode.b;
    let i = Complex64::i();
    let lead = (i * k.value * tau).exp() / tau;
    let tau0 = frame.axial_travel_time(x);

    // Ψ is only determined up to functions of the coordinates with m_j = 0;
    // the entries along them are left at zero.
    let active = |a: usize, c: usize| m[a] > 0.0 && m[c] > 0.0;
    let integrand = |h: f64| -> Result<[Complex64; 6]> {
        let s = largest_root_s(&frame, x, h)?;
        let fv = frame.values(x, s);
        let phase = (i * k.value * h).exp();
        let pre = 1.0 / (fv.df * fv.g.sqrt());
        let mut out = [Complex64::new(0.0, 0.0); 6];
        for (n, &(a, c)) in PAIRS.iter().enumerate() {
            if !active(a, c) {
                continue;
            }
            let (va, vc) = (fv.v[a], fv.v[c]);
            let curly = fv.ddf / fv.df + m[a] * m[a] / va + m[c] * m[c] / vc + 0.5 * fv.dlog_g;
            let mut bracket = 2.0 * x[a] * x[c] / (va * vc * fv.df) * curly;
            if a == c {
                bracket += 1.0 / va;
            }
            out[n] = phase * (pre * bracket);
        }
        Ok(out)
    };

    let mut points = vec![tau0];
    // A sharp transition sits near the axial travel time of nearly-vanishing m_j.
    let mmax = m.iter().cloned().fold(0.0, f64::max);
    let soft: f64 = (0..3)
        .filter(|&j| m[j] > 0.0 && m[j] < 1e-2 * mmax)
        .map(|j| (x[j] / b[j]).powi(2))
        .sum::<f64>()
        .sqrt();
    if soft > tau0 && soft < tau {
        points.push(soft);
    }
    points.push(tau);
    let quad = integrate::<6, _>(integrand, &points, config)?;

    let scale = k.loss_factor / (4.0 * PI * mode.rho);
    let bprod = mode.b_product();
    let mut h = ComplexTensor3::zero();
    for (n, &(a, c)) in PAIRS.iter().enumerate() {
        if !active(a, c) {
            continue;
        }
        let boundary = -lead * (x[a] * x[c] / (bprod * b[a] * b[a] * b[c] * b[c] * df0));
        let v = (boundary - quad.value[n]) * scale;
        h.0[a][c] = v;
        h.0[c][a] = v;
    }
    Ok(HessianValue { h, omega, axis_limit: false })
}

/// The potential `Ψ(x)` itself, up to an `x`-independent constant. Needs all
/// `mⱼ > 0`. Used for finite-difference cross-checks of the Hessians.
pub fn potential_value(mode: &ScalarMode, m: [f64; 3], x: &Vec3, omega: f64, config: &QuadratureConfig) -> Result<Complex64> {
    if m.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Domain("potential value needs all m_j > 0".into()));
    }
    let frame = EllipsoidalFrame::new(mode.b, m)?;
    let k = mode.wavenumber(omega)?;
    let tau = mode.travel_time(x);
    if !(tau >= TAU_MIN) {
        return Err(Error::Singular { tau });
    }
    let i = Complex64::i();
    let inner_cfg = QuadratureConfig {
        rel_tol: config.rel_tol * 1e-2,
        ..*config
    };
    // ∫₀^S G^{-1/2} ds with u = (1 + s)^{-1/2}, smooth as S → ∞.
    let inner = |s_top: f64| -> Result<f64> {
        let u_lo = 1.0 / (1.0 + s_top).sqrt();
        let r = integrate::<1, _>(
            |u| {
                let s = 1.0 / (u * u) - 1.0;
                let v = frame.v(s);
                Ok([Complex64::new(2.0 / (u * u * u * (v[0] * v[1] * v[2]).sqrt()), 0.0)])
            },
            &[u_lo, 1.0],
            &inner_cfg,
        )?;
        Ok(r.value[0].re)
    };
    let outer = integrate::<1, _>(
        |h| {
            let s = largest_root_s(&frame, x, h)?;
            Ok([(i * k.value * h).exp() * inner(s)?])
        },
        &[0.0, tau],
        config,
    )?;
    Ok(outer.value[0] * k.loss_factor / (8.0 * PI * mode.rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attenuation::PowerLawExponent;

    fn mode(b: [f64; 3], beta: f64) -> ScalarMode {
        ScalarMode { b, rho: 1.3, beta, gamma: PowerLawExponent::voigt() }
    }

    #[test]
    fn closed_integrals_at_zero_wavenumber() {
        let c = closed_integrals(Complex64::new(0.0, 0.0), 1.7);
        assert!((c.i0.re - 1.7).abs() < 1e-15);
        assert!((c.i1.re - 1.7f64.powi(2) / 2.0).abs() < 1e-15);
        assert!((c.i2.re - 1.7f64.powi(3) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn closed_integrals_continuous_at_switch() {
        for angle in [0.0, 0.7, 1.4, std::f64::consts::FRAC_PI_2, 2.5] {
            let z = Complex64::from_polar(SERIES_SWITCH, angle);
            let a = series_moments(z);
            let b = recursive_moments(z);
            for n in 0..3 {
                assert!((a[n] - b[n]).norm() < 1e-12 * a[n].norm(), "angle {angle} n {n}");
            }
        }
    }

    #[test]
    fn root_scalar_case() {
        let frame = EllipsoidalFrame::new([1.0; 3], [1.0; 3]).unwrap();
        let s = largest_root_s(&frame, &[1.0, 0.0, 0.0], 0.5).unwrap();
        assert!((s - 3.0).abs() < 1e-12);
    }

    #[test]
    fn root_near_wavefront() {
        let frame = EllipsoidalFrame::new([1.2, 0.8, 1.5], [1.0, 1.0, 0.0]).unwrap();
        let x = [0.4, -0.3, 0.9];
        let tau = crate::scalarwave::travel_time(&frame.b, &x);
        let s = largest_root_s(&frame, &x, tau * (1.0 - 1e-9)).unwrap();
        assert!((0.0..1e-7).contains(&s));
    }

    #[test]
    fn root_errors() {
        let frame = EllipsoidalFrame::new([1.0; 3], [1.0; 3]).unwrap();
        let x = [1.0, 0.0, 0.0];
        assert!(matches!(largest_root_s(&frame, &x, 1.0), Err(Error::WrongBranch { .. })));
        assert!(matches!(largest_root_s(&frame, &x, 2.0), Err(Error::WrongBranch { .. })));
        assert!(matches!(largest_root_s(&frame, &x, 0.0), Err(Error::Domain(_))));
        assert!(matches!(largest_root_s(&frame, &x, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn root_residual_small_h() {
        let frame = EllipsoidalFrame::new([1.0, 2.0, 0.5], [1.0, 0.3, 2.0]).unwrap();
        let x = [0.7, -1.1, 0.2];
        for h in [1e-6, 1e-3, 0.1, 0.9] {
            let s = largest_root_s(&frame, &x, h).unwrap();
            assert!(frame.f(&x, h, s).abs() <= 1e-12 * h * h, "h = {h}");
        }
    }

    #[test]
    fn case1_symmetry_and_trace() {
        let md = mode([1.4; 3], 1e-3);
        let x = [0.3, -0.2, 0.5];
        let hv = hessian_case1(&md, &x, 5.0).unwrap();
        assert!(hv.h.is_symmetric());
        let phi = md.phi(&x, 5.0).unwrap();
        assert!((hv.apply_m(&[1.0; 3]) - phi).norm() < 1e-13 * phi.norm());
    }

    #[test]
    fn case1_rejects_non_spherical() {
        assert!(hessian_case1(&mode([1.0, 1.0, 2.0], 0.0), &[1.0, 0.0, 0.0], 1.0).is_err());
        assert!(matches!(hessian_case1(&mode([1.0; 3], 0.0), &[0.0; 3], 1.0), Err(Error::Singular { .. })));
    }

    #[test]
    fn case2_trace_and_structure() {
        let md = mode([1.3, 1.3, 0.7], 2e-3);
        let x = [0.4, 0.0, -0.6];
        let hv = hessian_case2(&md, &x, 3.0).unwrap();
        assert_eq!(hv.h.0[0][1], Complex64::new(0.0, 0.0));
        let phi = md.phi(&x, 3.0).unwrap();
        assert!((hv.apply_m(&[1.0, 1.0, 0.0]) - phi).norm() < 1e-13 * phi.norm());
        for k in 0..3 {
            assert_eq!(hv.h.0[2][k], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn case2_axis_limit_is_continuous() {
        let md = mode([1.3, 1.3, 0.7], 1e-3);
        let on = hessian_case2(&md, &[0.0, 0.0, 0.8], 4.0).unwrap();
        assert!(on.axis_limit);
        let off = hessian_case2(&md, &[0.8e-6, 0.0, 0.8], 4.0).unwrap();
        assert!(!off.axis_limit);
        assert!(on.h.max_abs_diff(&off.h) < 1e-9 * on.h.norm());
    }

    #[test]
    fn general_matches_case1() {
        let md = mode([1.1; 3], 1e-3);
        let x = [0.5, -0.4, 0.3];
        let a = hessian_case1(&md, &x, 4.0).unwrap();
        let b = hessian_general(&md, [1.0; 3], &x, 4.0).unwrap();
        assert!(a.h.max_abs_diff(&b.h) < 1e-8 * a.h.norm(), "{:?}\n{:?}", a.h, b.h);
    }

    #[test]
    fn general_matches_case2() {
        let md = mode([1.3, 1.3, 0.7], 1e-3);
        let x = [0.5, -0.4, 0.3];
        let a = hessian_case2(&md, &x, 4.0).unwrap();
        let b = hessian_general(&md, [1.0, 1.0, 0.0], &x, 4.0).unwrap();
        for p in 0..2 {
            for q in 0..2 {
                assert!((a.h.0[p][q] - b.h.0[p][q]).norm() < 1e-8 * a.h.norm(), "{:?}\n{:?}", a.h, b.h);
            }
        }
    }

    #[test]
    fn general_trace_identity() {
        let md = mode([1.0, 1.7, 0.6], 5e-4);
        let m = [0.8, 1.2, 0.5];
        let x = [0.3, 0.9, -0.4];
        let hv = hessian_general(&md, m, &x, 2.5).unwrap();
        let phi = md.phi(&x, 2.5).unwrap();
        assert!((hv.apply_m(&m) - phi).norm() < 1e-8 * phi.norm());
    }
}
