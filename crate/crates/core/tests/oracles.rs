//! Closed forms against their independent oracles.

use anisogreen::attenuation::PowerLawExponent;
use anisogreen::christoffel::{MediumSpec, Stiffness};
use anisogreen::green::green_tensor;
use anisogreen::potential::{
    general_quadrature, hessian_case1, hessian_general, largest_root_s, potential_value, EllipsoidalFrame,
};
use anisogreen::quadrature::QuadratureConfig;
use anisogreen::scalarwave::ScalarMode;
use anisogreen::tensor::{ComplexTensor3, Vec3};
use anisogreen::validation::{bisection_root, fd_hessian, fd_residual, reference_quadrature, FdOrder, OracleConfig};
use anisogreen::Complex64;
use proptest::prelude::*;

fn mode(b: [f64; 3], beta: f64) -> ScalarMode {
    ScalarMode { b, rho: 1.4, beta, gamma: PowerLawExponent::voigt() }
}

fn tight() -> QuadratureConfig {
    QuadratureConfig { rel_tol: 1e-12, abs_tol: 0.0, max_evaluations: 2_000_000 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn root_finders_agree(
        b in prop::array::uniform3(0.5f64..3.0),
        m in prop::array::uniform3(0.1f64..2.0),
        x in prop::array::uniform3(-2.0f64..2.0),
        frac in 0.01f64..0.99,
    ) {
        let tau = anisogreen::scalarwave::travel_time(&b, &x);
        prop_assume!(tau > 1e-3);
        let h = frac * tau;
        let frame = EllipsoidalFrame::new(b, m).unwrap();
        let newton = largest_root_s(&frame, &x, h).unwrap();
        let plain = bisection_root(&b, &m, &x, h);
        prop_assert!((newton - plain).abs() <= 1e-9 * plain.max(1.0), "{newton} vs {plain}");
    }
}

/// Relative FD-vs-closed differences at spacings `h` and `h/2`; the second
/// must be small and the pair must show fourth-order convergence.
fn fd_errors(md: &ScalarMode, m: [f64; 3], x: &Vec3, omega: f64, closed: &ComplexTensor3, h: f64) -> (f64, f64) {
    let err = |h: f64| {
        let fd = fd_hessian(|y: &Vec3| potential_value(md, m, y, omega, &tight()), x, h, FdOrder::Fourth).unwrap();
        closed.max_abs_diff(&fd) / closed.norm()
    };
    (err(h), err(0.5 * h))
}

#[test]
fn static_hessian_matches_fd_potential() {
    let md = mode([1.3; 3], 0.0);
    let x = [0.6, -0.4, 0.5];
    let closed = hessian_case1(&md, &x, 0.0).unwrap();
    let (coarse, fine) = fd_errors(&md, [1.0; 3], &x, 0.0, &closed.h, 0.04);
    assert!(fine < 2e-6, "{coarse:.2e} -> {fine:.2e}");
    assert!((10.0..22.0).contains(&(coarse / fine)), "{coarse:.2e} -> {fine:.2e}");
}

#[test]
fn general_hessian_matches_fd_potential() {
    let md = mode([1.0, 1.6, 0.7], 1e-3);
    let m = [0.9, 1.3, 0.6];
    let x = [0.5, 0.8, -0.3];
    let general = hessian_general(&md, m, &x, 1.5).unwrap();
    let (coarse, fine) = fd_errors(&md, m, &x, 1.5, &general.h, 0.04);
    assert!(fine < 2e-6, "{coarse:.2e} -> {fine:.2e}");
    assert!((10.0..22.0).contains(&(coarse / fine)), "{coarse:.2e} -> {fine:.2e}");
}

/// The general Hessian recomputed from its defining integral with an
/// independent root finder and adaptive Simpson quadrature.
#[test]
fn general_integrand_reference_quadrature() {
    let md = mode([1.2, 0.9, 1.7], 5e-4);
    let m = [1.1, 0.7, 0.5];
    let x = [-0.4, 0.7, 0.9];
    let omega = 2.2;
    let k = md.wavenumber(omega).unwrap();
    let b = md.b;
    let tau = md.travel_time(&x);
    let ik = Complex64::i() * k.value;
    let vs = |s: f64| [0, 1, 2].map(|j| b[j] * b[j] + m[j] * m[j] * s);
    let dfs = |s: f64| {
        let v = vs(s);
        -(0..3).map(|j| m[j] * m[j] * x[j] * x[j] / (v[j] * v[j])).sum::<f64>()
    };
    let general = hessian_general(&md, m, &x, omega).unwrap();
    let scale = k.loss_factor / (4.0 * std::f64::consts::PI * md.rho);
    for a in 0..3 {
        for c in a..3 {
            let integral = reference_quadrature(
                |h| {
                    if h <= 0.0 || h >= tau {
                        return Complex64::new(0.0, 0.0);
                    }
                    let s = bisection_root(&b, &m, &x, h);
                    let v = vs(s);
                    let df = dfs(s);
                    let ddf: f64 = (0..3).map(|j| 2.0 * m[j].powi(4) * x[j] * x[j] / v[j].powi(3)).sum();
                    let dlog_g: f64 = (0..3).map(|j| m[j] * m[j] / v[j]).sum();
                    let g = v[0] * v[1] * v[2];
                    let curly = ddf / df + m[a] * m[a] / v[a] + m[c] * m[c] / v[c] + 0.5 * dlog_g;
                    let mut bracket = 2.0 * x[a] * x[c] / (v[a] * v[c] * df) * curly;
                    if a == c {
                        bracket += 1.0 / v[a];
                    }
                    (ik * h).exp() * (bracket / (df * g.sqrt()))
                },
                0.0,
                tau,
                1e-12,
            )
            .unwrap();
            let boundary = -(ik * tau).exp() / tau * (x[a] * x[c] / (md.b_product() * (b[a] * b[c]).powi(2) * dfs(0.0)));
            let expected = (boundary - integral) * scale;
            let err = (general.h.0[a][c] - expected).norm() / general.h.norm();
            assert!(err < 1e-8, "entry ({a},{c}): {err:.2e}");
        }
    }
}

#[test]
fn isotropic_residual() {
    let points = [[1.3, 0.7, -0.9], [-0.4, 1.6, 0.8], [0.9, -1.1, 1.2], [1.5, 0.2, 0.4]];
    let config = OracleConfig { spacing: 0.08, refinements: 3, ..Default::default() };
    for (rho, c11, c44, omega) in [(2.0, 6.0, 2.0, 3.0), (1.0, 9.0, 1.5, 1.2)] {
        let medium = MediumSpec::new(rho, Stiffness::Isotropic { c11, c44 }, [0.0; 3], PowerLawExponent::voigt()).unwrap();
        let rep = fd_residual(&medium, |x: &Vec3| Ok(green_tensor(&medium, x, omega)?.g), &points, omega, &config).unwrap();
        assert!(rep.slopes.iter().all(|s| (s - 4.0).abs() <= 0.3), "{:?}", rep.slopes);
    }
}

#[test]
fn general_quadrature_is_the_documented_default() {
    let q = general_quadrature();
    assert_eq!(q.rel_tol, 1e-10);
}
