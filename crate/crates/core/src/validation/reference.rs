use num_complex::Complex64;

use crate::tensor::{Mat3, Vec3};
use crate::{Error, Result};

/// Adaptive Simpson quadrature with Richardson correction, to absolute
/// tolerance `tol`.
pub fn reference_quadrature<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    const MAX_EVALUATIONS: usize = 20_000_000;
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut evaluations = 3;
    // Explicit stack: (a, b, fa, fm, fb, whole, tol, depth)
    let mut stack = vec![(a, b, fa, fm, fb, whole, tol, 0u32)];
    let mut total = Complex64::new(0.0, 0.0);
    while let Some((a, b, fa, fm, fb, whole, tol, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        evaluations += 2;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if diff.norm() <= 15.0 * tol || depth >= 60 || !(lm > a && rm < b) {
            total += left + right + diff / 15.0;
            continue;
        }
        if evaluations > MAX_EVALUATIONS {
            return Err(Error::Accuracy {
                what: "reference Simpson quadrature",
                achieved: diff.norm(),
                requested: tol,
            });
        }
        stack.push((a, m, fa, flm, fm, left, 0.5 * tol, depth + 1));
        stack.push((m, b, fm, frm, fb, right, 0.5 * tol, depth + 1));
    }
    Ok(total)
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Largest root of `Σ xⱼ²/(bⱼ² + mⱼ²s) = h²` by plain bisection.
pub fn bisection_root(b: &[f64; 3], m: &[f64; 3], x: &Vec3, h: f64) -> f64 {
    let g = |s: f64| -> f64 { (0..3).map(|j| x[j] * x[j] / (b[j] * b[j] + m[j] * m[j] * s)).sum::<f64>() - h * h };
    let mut lo = 0.0;
    let mut hi = 1.0;
    while g(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `Γᵢₖ(n) = Σⱼₗ C_ijkl nⱼ nₗ` by explicit Voigt contraction.
pub fn christoffel_from_voigt(voigt: &[[f64; 6]; 6], n: &Vec3) -> Mat3 {
    const PAIR: [[usize; 3]; 3] = [[0, 5, 4], [5, 1, 3], [4, 3, 2]];
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    g[i][k] += voigt[PAIR[i][j]][PAIR[k][l]] * n[j] * n[l];
                }
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_exponential() {
        let v = reference_quadrature(|x| (Complex64::i() * x).exp(), 0.0, 1.0, 1e-14).unwrap();
        let expected = Complex64::new(1f64.sin(), 1.0 - 1f64.cos());
        assert!((v - expected).norm() < 1e-12);
    }

    #[test]
    fn legendre_nodes_integrate_polynomials() {
        for n in [1, 2, 5, 20] {
            let (x, w) = gauss_legendre(n);
            let deg = 2 * n - 1;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            // ∫ x^{2n-2} = 2/(2n-1)
            assert!((s - 2.0 / (deg as f64)).abs() < 1e-14, "n = {n}");
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn bisection_scalar_case() {
        let s = bisection_root(&[1.0; 3], &[1.0; 3], &[1.0, 0.0, 0.0], 0.5);
        assert!((s - 3.0).abs() < 1e-14);
    }

    #[test]
    fn isotropic_voigt_christoffel() {
        let (l, mu) = (2.0, 1.0);
        let mut v = [[0.0; 6]; 6];
        for i in 0..3 {
            for j in 0..3 {
                v[i][j] = if i == j { l + 2.0 * mu } else { l };
            }
            v[i + 3][i + 3] = mu;
        }
        let n = [0.6, 0.0, 0.8];
        let g = christoffel_from_voigt(&v, &n);
        for i in 0..3 {
            for k in 0..3 {
                let d = if i == k { mu } else { 0.0 };
                assert!((g[i][k] - (d + (l + mu) * n[i] * n[k])).abs() < 1e-14);
            }
        }
    }
}
