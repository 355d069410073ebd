use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::gamma as gamma_fn;

use super::reference::gauss_legendre;
use crate::attenuation::{ExponentClass, PowerLawExponent};
use crate::{Error, Result};

/// Numerical transform of the loss kernel with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTransform {
    pub value: Complex64,
    pub error: f64,
}

/// Geometric halvings of the window towards t = 0.
const PANELS: i32 = 64;

/// Transform of the causal loss kernel `∫ κ(t) e^{iωt} dt` by direct
/// numerical quadrature.
///
/// Power kernels `c H(t) t^{-γ}` are regularized by Hadamard's finite part:
/// the Taylor polynomial of `e^{iωt}` is subtracted on `[0, T]` (Gauss–Legendre
/// on geometric panels) and integrated in closed form, the tail `[T, ∞)` is
/// rotated into the complex plane `t = T + iu/ω`. The error estimate is the
/// change when the window `T` is halved, which leaves the exact value
/// unchanged. Even integer exponents (derivative kernels) are transformed as
/// mollified derivatives of a Gaussian and deconvolved.
pub fn kernel_ft_oracle(gamma: PowerLawExponent, omega: f64, window: f64, nodes: usize) -> Result<KernelTransform> {
    if !omega.is_finite() || !(window > 0.0) || nodes < 2 {
        return Err(Error::Domain(format!("invalid oracle parameters omega = {omega}, window = {window}")));
    }
    if omega == 0.0 {
        return Ok(KernelTransform { value: Complex64::new(0.0, 0.0), error: 0.0 });
    }
    if omega < 0.0 {
        let t = kernel_ft_oracle(gamma, -omega, window, nodes)?;
        return Ok(KernelTransform { value: t.value.conj(), error: t.error });
    }
    let (x, w) = gauss_legendre(nodes);
    let (value, error) = match gamma.class() {
        ExponentClass::EvenInteger(n) => {
            let sign = if (n / 2) % 2 == 0 { -1.0 } else { 1.0 };
            let sigma = window.min(0.5 / omega);
            let a = derivative_transform(n - 1, omega, sigma, &x, &w);
            let b = derivative_transform(n - 1, omega, 0.5 * sigma, &x, &w);
            (b * sign, (a - b).norm())
        }
        ExponentClass::OddInteger(n) => {
            let sign = if n.div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 };
            let coefficient = 2.0 / PI * gamma_fn(n as f64) * sign;
            let a = finite_part(n as f64, omega, window, &x, &w);
            let b = finite_part(n as f64, omega, 0.5 * window, &x, &w);
            (b * coefficient, (a - b).norm() * coefficient.abs())
        }
        ExponentClass::NonInteger => {
            let g = gamma.value();
            let coefficient = -2.0 / PI * gamma_fn(g) * (0.5 * g * PI).sin();
            let a = finite_part(g, omega, window, &x, &w);
            let b = finite_part(g, omega, 0.5 * window, &x, &w);
            (b * coefficient, (a - b).norm() * coefficient.abs())
        }
    };
    if !(error <= 1e-6 * value.norm()) {
        return Err(Error::Accuracy {
            what: "loss kernel transform",
            achieved: error / value.norm(),
            requested: 1e-6,
        });
    }
    Ok(KernelTransform { value, error })
}

/// Gauss–Legendre on `[a, b]`, split so each piece spans at most one radian
/// of oscillation.
fn panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, omega: f64, x: &[f64], w: &[f64]) -> Complex64 {
    let pieces = ((omega * (b - a)).ceil() as usize).max(1);
    let step = (b - a) / pieces as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..pieces {
        let lo = a + p as f64 * step;
        let half = 0.5 * step;
        let mid = lo + half;
        for (xi, wi) in x.iter().zip(w) {
            sum += f(mid + half * xi) * (wi * half);
        }
    }
    sum
}

/// `FP ∫₀^∞ t^{-γ} e^{iωt} dt` for ω > 0 with a 1 s reference scale.
fn finite_part(g: f64, omega: f64, window: f64, x: &[f64], w: &[f64]) -> Complex64 {
    let i = Complex64::i();
    let kmax = (g.ceil() as usize).saturating_sub(1);
    let taylor = |k: usize| -> Complex64 {
        let mut c = Complex64::new(1.0, 0.0);
        for j in 1..=k {
            c *= i * omega / j as f64;
        }
        c
    };
    // Remainder e^{iωt} - Σ_{k ≤ kmax} (iωt)^k/k!, by series when small.
    let remainder = |t: f64| -> Complex64 {
        let z = i * omega * t;
        if z.norm() < 0.5 {
            let mut term = Complex64::new(1.0, 0.0);
            for j in 1..=kmax + 1 {
                term *= z / j as f64;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            let mut j = kmax + 1;
            while term.norm() > 1e-20 * sum.norm().max(1e-300) {
                sum += term;
                j += 1;
                term *= z / j as f64;
            }
            sum
        } else {
            let mut poly = Complex64::new(0.0, 0.0);
            let mut term = Complex64::new(1.0, 0.0);
            for j in 0..=kmax {
                if j > 0 {
                    term *= z / j as f64;
                }
                poly += term;
            }
            z.exp() - poly
        }
    };
    let f = |t: f64| remainder(t) * t.powf(-g);
    let mut near = Complex64::new(0.0, 0.0);
    for p in 0..PANELS {
        let b = window * 0.5f64.powi(p);
        near += panel(&f, 0.5 * b, b, omega, x, w);
    }
    // Leading behavior on the innermost sliver [0, ε].
    let eps = window * 0.5f64.powi(PANELS);
    let p = (kmax + 1) as f64 - g;
    near += taylor(kmax + 1) * eps.powf(p + 1.0) / (p + 1.0);

    let mut polynomial = Complex64::new(0.0, 0.0);
    for k in 0..=kmax {
        let e = k as f64 - g + 1.0;
        let fp = if e.abs() < 1e-12 { window.ln() } else { window.powf(e) / e };
        polynomial += taylor(k) * fp;
    }

    // ∫_T^∞ t^{-γ} e^{iωt} dt = (i/ω) e^{iωT} ∫₀^∞ (T + iu/ω)^{-γ} e^{-u} du
    let tail_integrand = |u: f64| (Complex64::new(window, u / omega)).powf(-g) * (-u).exp();
    let mut tail = Complex64::new(0.0, 0.0);
    let mut lo = 0.0;
    let mut hi = 0.5;
    while lo < 80.0 {
        tail += panel(&tail_integrand, lo, hi, 0.0, x, w);
        lo = hi;
        hi *= 2.0;
    }
    let tail = tail * (i / omega) * (i * omega * window).exp();
    near + polynomial + tail
}

/// `∫ g_σ^{(n)}(t) e^{iωt} dt · e^{σ²ω²/2}`, which equals `(-iω)^n`.
fn derivative_transform(n: u32, omega: f64, sigma: f64, x: &[f64], w: &[f64]) -> Complex64 {
    let hermite = |s: f64| -> f64 {
        let (mut h0, mut h1) = (1.0, s);
        if n == 0 {
            return 1.0;
        }
        for k in 1..n {
            let h2 = s * h1 - k as f64 * h0;
            h0 = h1;
            h1 = h2;
        }
        h1
    };
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let f = |t: f64| {
        let s = t / sigma;
        let g = (-0.5 * s * s).exp() / (sigma * (2.0 * PI).sqrt());
        Complex64::from_polar(sign * sigma.powi(-(n as i32)) * hermite(s) * g, omega * t)
    };
    let reach = 12.0 * sigma;
    let pieces = 48;
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..pieces {
        let a = -reach + 2.0 * reach * p as f64 / pieces as f64;
        let b = a + 2.0 * reach / pieces as f64;
        sum += panel(&f, a, b, omega, x, w);
    }
    sum * (0.5 * sigma * sigma * omega * omega).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attenuation::loss_symbol;

    #[test]
    fn voigt_kernel() {
        let g = PowerLawExponent::voigt();
        for w in [0.5, 3.0, 20.0] {
            let t = kernel_ft_oracle(g, w, 1.0, 20).unwrap();
            assert!((t.value - Complex64::new(0.0, -w)).norm() < 1e-8 * w, "{t:?}");
        }
    }

    #[test]
    fn non_integer_kernel() {
        let g = PowerLawExponent::new(1.5).unwrap();
        let w = 2.0 * PI;
        let t = kernel_ft_oracle(g, w, 1.0, 20).unwrap();
        let a = loss_symbol(g, w).unwrap();
        assert!((t.value - a).norm() < 1e-6 * a.norm(), "{t:?} vs {a}");
    }

    #[test]
    fn odd_kernel_window_independent() {
        let g = PowerLawExponent::new(3.0).unwrap();
        let w = 1.3;
        let a = kernel_ft_oracle(g, w, 1.0, 20).unwrap();
        let b = kernel_ft_oracle(g, w, 3.0, 20).unwrap();
        assert!((a.value - b.value).norm() < 1e-8 * a.value.norm());
        let s = loss_symbol(g, w).unwrap();
        assert!((a.value - s).norm() < 1e-6 * s.norm(), "{a:?} vs {s}");
    }

    #[test]
    fn negative_frequency_conjugate() {
        let g = PowerLawExponent::new(1.7).unwrap();
        let a = kernel_ft_oracle(g, 4.0, 1.0, 20).unwrap();
        let b = kernel_ft_oracle(g, -4.0, 1.0, 20).unwrap();
        assert_eq!(a.value.conj(), b.value);
    }
}
