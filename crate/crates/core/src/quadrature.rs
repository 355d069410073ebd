//! Globally adaptive Gauss–Kronrod (7/15) quadrature for vector-valued
//! complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evaluations: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_evaluations: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult<const N: usize> {
    pub value: [Complex64; N],
    pub error: f64,
    pub evaluations: usize,
}

struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [Complex64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Segment<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Segment<N> {}
impl<const N: usize> PartialOrd for Segment<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Segment<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn norm<const N: usize>(v: &[Complex64; N]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn gk15<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Result<Segment<N>>
where
    F: FnMut(f64) -> Result<[Complex64; N]>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let zero = [Complex64::new(0.0, 0.0); N];
    let mut kronrod = zero;
    let mut gauss = zero;
    let fc = f(center)?;
    for n in 0..N {
        kronrod[n] = fc[n] * WGK[7];
        gauss[n] = fc[n] * WG[3];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        for n in 0..N {
            let s = f1[n] + f2[n];
            kronrod[n] += s * WGK[j];
            if j % 2 == 1 {
                gauss[n] += s * WG[j / 2];
            }
        }
    }
    let mut diff = zero;
    for n in 0..N {
        kronrod[n] *= half;
        gauss[n] *= half;
        diff[n] = kronrod[n] - gauss[n];
    }
    Ok(Segment {
        a,
        b,
        value: kronrod,
        error: norm(&diff),
    })
}

/// Integrates `f` over the intervals delimited by `points` (sorted, at least
/// two). Interior points are used as initial breakpoints.
pub fn integrate<const N: usize, F>(mut f: F, points: &[f64], config: &QuadratureConfig) -> Result<QuadratureResult<N>>
where
    F: FnMut(f64) -> Result<[Complex64; N]>,
{
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gk15(&mut f, w[0], w[1])?);
            evaluations += 15;
        }
    }
    loop {
        let mut total = [Complex64::new(0.0, 0.0); N];
        let mut error = 0.0;
        for s in heap.iter() {
            for n in 0..N {
                total[n] += s.value[n];
            }
            error += s.error;
        }
        let target = config.abs_tol.max(config.rel_tol * norm(&total));
        if error <= target || heap.is_empty() {
            return Ok(QuadratureResult { value: total, error, evaluations });
        }
        if evaluations + 30 > config.max_evaluations {
            return Err(Error::Accuracy {
                what: "adaptive Gauss-Kronrod quadrature",
                achieved: error / norm(&total).max(f64::MIN_POSITIVE),
                requested: config.rel_tol,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval below floating-point resolution; accept it as is.
            heap.push(Segment { error: 0.0, ..worst });
            continue;
        }
        heap.push(gk15(&mut f, worst.a, mid)?);
        heap.push(gk15(&mut f, mid, worst.b)?);
        evaluations += 30;
    }
}

/// Scalar convenience wrapper over [`integrate`].
pub fn integrate_scalar<F>(mut f: F, a: f64, b: f64, config: &QuadratureConfig) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let r = integrate::<1, _>(|x| Ok([f(x)?]), &[a, b], config)?;
    Ok((r.value[0], r.error))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let (v, _) = integrate_scalar(|x| Ok(Complex64::new(x.powi(5), 0.0)), 0.0, 2.0, &QuadratureConfig::default()).unwrap();
        assert!((v.re - 64.0 / 6.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory() {
        let cfg = QuadratureConfig { rel_tol: 1e-12, ..Default::default() };
        let (v, _) = integrate_scalar(|x| Ok((Complex64::i() * x).exp()), 0.0, 1.0, &cfg).unwrap();
        let expected = Complex64::new(1f64.sin(), 1.0 - 1f64.cos());
        assert!((v - expected).norm() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        let cfg = QuadratureConfig { rel_tol: 1e-10, ..Default::default() };
        let (v, _) = integrate_scalar(|x| Ok(Complex64::new(1.0 / x.sqrt(), 0.0)), 0.0, 1.0, &cfg).unwrap();
        assert!((v.re - 2.0).abs() < 1e-8);
    }

    #[test]
    fn budget_exhaustion() {
        let cfg = QuadratureConfig { rel_tol: 1e-15, abs_tol: 0.0, max_evaluations: 100 };
        let err = integrate_scalar(|x| Ok(Complex64::new((50.0 * x).sin().abs(), 0.0)), 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }));
    }

    #[test]
    fn breakpoints() {
        let cfg = QuadratureConfig { rel_tol: 1e-12, ..Default::default() };
        let r = integrate::<2, _>(
            |x| Ok([Complex64::new(if x < 0.3 { 0.0 } else { 1.0 }, 0.0), Complex64::new(x, 0.0)]),
            &[0.0, 0.3, 1.0],
            &cfg,
        )
        .unwrap();
        assert!((r.value[0].re - 0.7).abs() < 1e-14);
        assert!((r.value[1].re - 0.5).abs() < 1e-14);
    }
}
