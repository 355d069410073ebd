use num_complex::Complex64;

use crate::attenuation::loss_symbol;
use crate::christoffel::MediumSpec;
use crate::tensor::{ComplexTensor3, Vec3};
use crate::{Error, Result};

/// Accuracy order of the central stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdOrder {
    Second,
    Fourth,
}

impl FdOrder {
    pub fn order(&self) -> u32 {
        match self {
            FdOrder::Second => 2,
            FdOrder::Fourth => 4,
        }
    }

    /// First-derivative weights at offsets `-r..=r`, divided by h.
    fn first(&self) -> &'static [f64] {
        match self {
            FdOrder::Second => &[-0.5, 0.0, 0.5],
            FdOrder::Fourth => &[1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0],
        }
    }

    /// Second-derivative weights at offsets `-r..=r`, divided by h².
    fn second(&self) -> &'static [f64] {
        match self {
            FdOrder::Second => &[1.0, -2.0, 1.0],
            FdOrder::Fourth => &[-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0],
        }
    }

    fn reach(&self) -> i32 {
        match self {
            FdOrder::Second => 1,
            FdOrder::Fourth => 2,
        }
    }
}

/// Oracle settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub fd_order: FdOrder,
    /// Coarsest stencil spacing, m.
    pub spacing: f64,
    /// Number of dyadic spacings `h, h/2, ...` (at least 3 for slopes).
    pub refinements: usize,
    pub quadrature_tol: f64,
    pub max_sweeps: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            fd_order: FdOrder::Fourth,
            spacing: 0.1,
            refinements: 3,
            quadrature_tol: 1e-10,
            max_sweeps: 64,
        }
    }
}

/// Normalized residuals `‖Γᶜ(∇)Ĝ + ÂΓᵛ(∇)Ĝ + ρω²Ĝ‖ / ‖ρω²Ĝ‖` over a ladder
/// of spacings.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub points: Vec<Vec3>,
    pub omega: f64,
    pub beta: [f64; 3],
    pub spacings: Vec<f64>,
    /// `residuals[i][p]`: spacing `i`, point `p`.
    pub residuals: Vec<Vec<f64>>,
    /// Least-squares slope of log₂(residual) against log₂(h), per point.
    pub slopes: Vec<f64>,
}

impl ResidualReport {
    pub fn min_slope(&self) -> f64 {
        self.slopes.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_slope(&self) -> f64 {
        self.slopes.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest residual at the finest spacing.
    pub fn floor(&self) -> f64 {
        self.residuals.last().map(|r| r.iter().cloned().fold(0.0, f64::max)).unwrap_or(0.0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("point,x1,x2,x3,h,residual\n");
        for (i, h) in self.spacings.iter().enumerate() {
            for (p, x) in self.points.iter().enumerate() {
                out.push_str(&format!("{p},{},{},{},{h},{}\n", x[0], x[1], x[2], self.residuals[i][p]));
            }
        }
        out
    }
}

fn voigt_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (1, 2) => 3,
        (0, 2) => 4,
        _ => 5,
    }
}

/// `C_ijkl` from a Voigt matrix.
fn full_tensor(v: &[[f64; 6]; 6]) -> [[[[f64; 3]; 3]; 3]; 3] {
    let mut c = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    c[i][j][k][l] = v[voigt_index(i, j)][voigt_index(k, l)];
                }
            }
        }
    }
    c
}

/// Second derivatives `∂ⱼ∂ₗ f` at `x` by central stencils.
fn second_derivatives<F>(f: &F, x: &Vec3, h: f64, order: FdOrder) -> Result<[[ComplexTensor3; 3]; 3]>
where
    F: Fn(&Vec3) -> Result<ComplexTensor3>,
{
    let r = order.reach();
    let at = |offsets: [i32; 3]| -> Result<ComplexTensor3> {
        f(&[
            x[0] + offsets[0] as f64 * h,
            x[1] + offsets[1] as f64 * h,
            x[2] + offsets[2] as f64 * h,
        ])
    };
    let mut out = [[ComplexTensor3::zero(); 3]; 3];
    for j in 0..3 {
        let mut acc = ComplexTensor3::zero();
        for (n, w) in order.second().iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            let mut off = [0; 3];
            off[j] = n as i32 - r;
            acc = acc + at(off)?.scale(Complex64::new(*w / (h * h), 0.0));
        }
        out[j][j] = acc;
    }
    let d1 = order.first();
    for j in 0..3 {
        for l in j + 1..3 {
            let mut acc = ComplexTensor3::zero();
            for (a, wa) in d1.iter().enumerate() {
                for (b, wb) in d1.iter().enumerate() {
                    if *wa == 0.0 || *wb == 0.0 {
                        continue;
                    }
                    let mut off = [0; 3];
                    off[j] = a as i32 - r;
                    off[l] = b as i32 - r;
                    acc = acc + at(off)?.scale(Complex64::new(wa * wb / (h * h), 0.0));
                }
            }
            out[j][l] = acc;
            out[l][j] = acc;
        }
    }
    Ok(out)
}

fn apply_operator(c: &[[[[f64; 3]; 3]; 3]; 3], d2: &[[ComplexTensor3; 3]; 3]) -> ComplexTensor3 {
    let mut out = ComplexTensor3::zero();
    for i in 0..3 {
        for m in 0..3 {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let w = c[i][j][k][l];
                        if w != 0.0 {
                            s += d2[j][l].0[k][m] * w;
                        }
                    }
                }
            }
            out.0[i][m] = s;
        }
    }
    out
}

/// Normalized residual of a sampled field at one point and spacing.
pub fn residual_at<F>(medium: &MediumSpec, field: &F, x: &Vec3, omega: f64, h: f64, order: FdOrder) -> Result<f64>
where
    F: Fn(&Vec3) -> Result<ComplexTensor3>,
{
    let r = crate::tensor::norm(x);
    if r < 10.0 * h {
        return Err(Error::Geometry(format!(
            "point {x:?} is within 10h = {} of the source",
            10.0 * h
        )));
    }
    let elastic = full_tensor(&medium.stiffness.voigt());
    let viscous = full_tensor(&medium.viscosity()?.voigt());
    let symbol = loss_symbol(medium.gamma, omega)?;
    let d2 = second_derivatives(field, x, h, order)?;
    let g = field(x)?;
    let inertia = g.scale(Complex64::new(medium.rho * omega * omega, 0.0));
    let res = apply_operator(&elastic, &d2) + apply_operator(&viscous, &d2).scale(symbol) + inertia;
    Ok(res.norm() / inertia.norm())
}

/// Residual of the wave equation for `field` at `points` over the dyadic
/// spacings of `config`.
pub fn fd_residual<F>(medium: &MediumSpec, field: F, points: &[Vec3], omega: f64, config: &OracleConfig) -> Result<ResidualReport>
where
    F: Fn(&Vec3) -> Result<ComplexTensor3>,
{
    if config.refinements < 3 {
        return Err(Error::Domain("slopes need at least 3 spacings".into()));
    }
    let spacings: Vec<f64> = (0..config.refinements).map(|i| config.spacing / (1u64 << i) as f64).collect();
    let mut residuals = Vec::with_capacity(spacings.len());
    for &h in &spacings {
        let row = points
            .iter()
            .map(|x| residual_at(medium, &field, x, omega, h, config.fd_order))
            .collect::<Result<Vec<_>>>()?;
        residuals.push(row);
    }
    let lx: Vec<f64> = spacings.iter().map(|h| h.log2()).collect();
    let mean_x = lx.iter().sum::<f64>() / lx.len() as f64;
    let slopes = (0..points.len())
        .map(|p| {
            let ly: Vec<f64> = residuals.iter().map(|row| row[p].log2()).collect();
            let mean_y = ly.iter().sum::<f64>() / ly.len() as f64;
            let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mean_x) * (b - mean_y)).sum();
            let den: f64 = lx.iter().map(|a| (a - mean_x).powi(2)).sum();
            num / den
        })
        .collect();
    Ok(ResidualReport {
        points: points.to_vec(),
        omega,
        beta: medium.beta,
        spacings,
        residuals,
        slopes,
    })
}

/// Hessian of a scalar field by central stencils.
pub fn fd_hessian<F>(f: F, x: &Vec3, h: f64, order: FdOrder) -> Result<ComplexTensor3>
where
    F: Fn(&Vec3) -> Result<Complex64>,
{
    let lifted = |y: &Vec3| -> Result<ComplexTensor3> { Ok(ComplexTensor3::identity().scale(f(y)?)) };
    let d2 = second_derivatives(&lifted, x, h, order)?;
    let mut out = ComplexTensor3::zero();
    for j in 0..3 {
        for l in 0..3 {
            out.0[j][l] = d2[j][l].0[0][0];
        }
    }
    Ok(out)
}
