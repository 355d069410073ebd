//! Media catalog, Christoffel tensors and their closed-form eigenstructure.
//!
//! Four media are supported, all with material axes along the Cartesian
//! axes: an orthorhombic medium (I), two transversely isotropic media with
//! symmetry axis `e₃` (II and III), and the isotropic limit of III. For each
//! of them the Christoffel eigenvalues are quadratic forms
//! `Lᵢ(n) = ρ Σⱼ bⱼ² nⱼ²` and the (unnormalized) eigenvectors `Dᵢ(n)` do not
//! depend on the material constants.

use std::fmt;

use crate::attenuation::PowerLawExponent;
use crate::tensor::{dot, norm, outer, Mat3, Vec3};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MediumKind {
    I,
    II,
    III,
    Isotropic,
}

impl MediumKind {
    pub const ALL: [MediumKind; 4] = [MediumKind::I, MediumKind::II, MediumKind::III, MediumKind::Isotropic];

    /// Stiffness constants a configuration must supply for this kind.
    pub fn required_constants(&self) -> &'static [&'static str] {
        match self {
            MediumKind::I => &["c11", "c22", "c33", "c44", "c55", "c66"],
            MediumKind::II => &["c11", "c12", "c33", "c44"],
            MediumKind::III => &["c11", "c44", "c66"],
            MediumKind::Isotropic => &["c11", "c44"],
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            MediumKind::I => "orthorhombic, diagonal Christoffel tensor",
            MediumKind::II => "transversely isotropic (axis e3), c66 = (c11 - c12)/2",
            MediumKind::III => "transversely isotropic (axis e3), spherical qP front",
            MediumKind::Isotropic => "isotropic limit of medium III (c66 = c44)",
        }
    }
}

impl fmt::Display for MediumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MediumKind::I => "I",
            MediumKind::II => "II",
            MediumKind::III => "III",
            MediumKind::Isotropic => "isotropic",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for MediumKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(MediumKind::I),
            "ii" | "2" => Ok(MediumKind::II),
            "iii" | "3" => Ok(MediumKind::III),
            "isotropic" | "iso" => Ok(MediumKind::Isotropic),
            other => Err(Error::InvalidMedium(format!("unknown medium kind `{other}`"))),
        }
    }
}

/// Independent stiffness constants (Pa) of each medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stiffness {
    I { c11: f64, c22: f64, c33: f64, c44: f64, c55: f64, c66: f64 },
    II { c11: f64, c12: f64, c33: f64, c44: f64 },
    III { c11: f64, c44: f64, c66: f64 },
    Isotropic { c11: f64, c44: f64 },
}

/// Diagonal stiffness constants `c_pp`, p = 1..6 (index 0 unused).
pub type DiagonalConstants = [f64; 7];

impl Stiffness {
    pub fn kind(&self) -> MediumKind {
        match self {
            Stiffness::I { .. } => MediumKind::I,
            Stiffness::II { .. } => MediumKind::II,
            Stiffness::III { .. } => MediumKind::III,
            Stiffness::Isotropic { .. } => MediumKind::Isotropic,
        }
    }

    /// The diagonal constants `c_pp`, with derived ones filled in.
    pub fn diagonal(&self) -> DiagonalConstants {
        match *self {
            Stiffness::I { c11, c22, c33, c44, c55, c66 } => [0.0, c11, c22, c33, c44, c55, c66],
            Stiffness::II { c11, c12, c33, c44 } => {
                let c66 = 0.5 * (c11 - c12);
                [0.0, c11, c11, c33, c44, c44, c66]
            }
            Stiffness::III { c11, c44, c66 } => [0.0, c11, c11, c11, c44, c44, c66],
            Stiffness::Isotropic { c11, c44 } => [0.0, c11, c11, c11, c44, c44, c44],
        }
    }

    /// Full 6×6 Voigt matrix with the structure of the medium. The same
    /// structure is used for the viscosity tensor.
    pub fn voigt(&self) -> [[f64; 6]; 6] {
        let c = self.diagonal();
        let mut v = [[0.0; 6]; 6];
        for p in 0..6 {
            v[p][p] = c[p + 1];
        }
        let (c12, c13, c23) = match *self {
            Stiffness::I { c44, c55, c66, .. } => (-c66, -c55, -c44),
            Stiffness::II { c12, c44, .. } => (c12, -c44, -c44),
            Stiffness::III { c11, c44, c66 } => (c11 - 2.0 * c66, c11 - 2.0 * c44, c11 - 2.0 * c44),
            Stiffness::Isotropic { c11, c44 } => {
                let l = c11 - 2.0 * c44;
                (l, l, l)
            }
        };
        v[0][1] = c12;
        v[1][0] = c12;
        v[0][2] = c13;
        v[2][0] = c13;
        v[1][2] = c23;
        v[2][1] = c23;
        v
    }

    fn validate(&self) -> Result<()> {
        let named: Vec<(&str, f64)> = match *self {
            Stiffness::I { c11, c22, c33, c44, c55, c66 } => {
                vec![("c11", c11), ("c22", c22), ("c33", c33), ("c44", c44), ("c55", c55), ("c66", c66)]
            }
            Stiffness::II { c11, c12, c33, c44 } => {
                if !c12.is_finite() {
                    return Err(Error::InvalidMedium("c12 must be finite".into()));
                }
                vec![("c11", c11), ("c33", c33), ("c44", c44), ("c66 = (c11 - c12)/2", 0.5 * (c11 - c12))]
            }
            Stiffness::III { c11, c44, c66 } => vec![("c11", c11), ("c44", c44), ("c66", c66)],
            Stiffness::Isotropic { c11, c44 } => vec![("c11", c11), ("c44", c44)],
        };
        for (name, value) in named {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidMedium(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }
}

/// A homogeneous viscoelastic medium: density, stiffness, per-mode loss
/// ratios `βᵢ` (viscous eigenvalues are `βᵢ` times the elastic ones) and the
/// power-law exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec {
    pub rho: f64,
    pub stiffness: Stiffness,
    pub beta: [f64; 3],
    pub gamma: PowerLawExponent,
}

/// Number of sample directions for the positive-definiteness check.
const PD_SAMPLES: usize = 64;

impl MediumSpec {
    /// Validates and normalizes a medium. Medium III with `c66 == c44` (and
    /// `β₂ == β₃`) becomes [`MediumKind::Isotropic`].
    pub fn new(rho: f64, stiffness: Stiffness, beta: [f64; 3], gamma: PowerLawExponent) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidMedium(format!("rho must be positive, got {rho}")));
        }
        stiffness.validate()?;
        if beta.iter().any(|b| !(*b >= 0.0) || !b.is_finite()) {
            return Err(Error::InvalidMedium(format!("loss ratios must be >= 0, got {beta:?}")));
        }
        let stiffness = match stiffness {
            Stiffness::III { c11, c44, c66 } if c66 == c44 && beta[1] == beta[2] => {
                Stiffness::Isotropic { c11, c44 }
            }
            s => s,
        };
        if stiffness.kind() == MediumKind::Isotropic && beta[1] != beta[2] {
            return Err(Error::InvalidMedium(
                "isotropic medium needs equal shear loss ratios (beta2 == beta3)".into(),
            ));
        }
        let medium = Self { rho, stiffness, beta, gamma };
        medium.check_positive_definite()?;
        Ok(medium)
    }

    /// Builds a medium from stiffness and viscosity constants sharing the same
    /// structure. The viscosity must be proportional to the stiffness on each
    /// mode (`L_i^v = β_i L_i^c`) to relative accuracy 1e-9.
    pub fn from_viscosity(rho: f64, stiffness: Stiffness, viscosity: Stiffness, gamma: PowerLawExponent) -> Result<Self> {
        if stiffness.kind() != viscosity.kind() {
            return Err(Error::InvalidMedium("stiffness and viscosity must share the same structure".into()));
        }
        let probe = Self::new(rho, stiffness, [0.0; 3], gamma)?;
        let c = stiffness.diagonal();
        let v = viscosity.diagonal();
        let mut beta = [0.0; 3];
        for (i, b) in beta.iter_mut().enumerate() {
            let mode = probe.mode_constants(i + 1)?;
            // Each eigenvalue is a quadratic form whose coefficients are c_pp values.
            let coefficients: Vec<usize> = mode_coefficient_indices(stiffness.kind(), i + 1).to_vec();
            let ratios: Vec<f64> = coefficients.iter().map(|&p| v[p] / c[p]).collect();
            let first = ratios[0];
            if ratios.iter().any(|r| (r - first).abs() > 1e-9 * first.abs().max(f64::MIN_POSITIVE)) {
                return Err(Error::InvalidMedium(format!(
                    "viscosity is not proportional to stiffness on mode {} (ratios {ratios:?})",
                    mode.mode
                )));
            }
            *b = first;
        }
        Self::new(rho, stiffness, beta, gamma)
    }

    pub fn kind(&self) -> MediumKind {
        self.stiffness.kind()
    }

    /// Density-normalized velocities `c_p = sqrt(c_pp / ρ)`, p = 1..6.
    pub fn velocities(&self) -> [f64; 7] {
        let c = self.stiffness.diagonal();
        let mut out = [0.0; 7];
        for p in 1..7 {
            out[p] = (c[p] / self.rho).sqrt();
        }
        out
    }

    /// Viscosity constants in the same structure, `v = β c` per mode.
    ///
    /// Only exists when the loss ratios are compatible with a local viscosity
    /// tensor: all equal for media I and II, `β₂ = β₃` for III.
    pub fn viscosity(&self) -> Result<Stiffness> {
        let [b1, b2, b3] = self.beta;
        let same = |a: f64, b: f64| a == b;
        match self.stiffness {
            Stiffness::I { c11, c22, c33, c44, c55, c66 } if same(b1, b2) && same(b2, b3) => Ok(Stiffness::I {
                c11: b1 * c11,
                c22: b1 * c22,
                c33: b1 * c33,
                c44: b1 * c44,
                c55: b1 * c55,
                c66: b1 * c66,
            }),
            Stiffness::II { c11, c12, c33, c44 } if same(b1, b2) && same(b2, b3) => Ok(Stiffness::II {
                c11: b1 * c11,
                c12: b1 * c12,
                c33: b1 * c33,
                c44: b1 * c44,
            }),
            Stiffness::III { c11, c44, c66 } if same(b2, b3) => Ok(Stiffness::III {
                c11: b1 * c11,
                c44: b3 * c44,
                c66: b2 * c66,
            }),
            // Not normalized to `Isotropic` since the viscous c66 may be zero.
            Stiffness::Isotropic { c11, c44 } => Ok(Stiffness::III {
                c11: b1 * c11,
                c44: b2 * c44,
                c66: b2 * c44,
            }),
            _ => Err(Error::InvalidMedium(format!(
                "loss ratios {:?} admit no viscosity tensor with the structure of medium {}",
                self.beta,
                self.kind()
            ))),
        }
    }

    fn check_positive_definite(&self) -> Result<()> {
        for n in fibonacci_sphere(PD_SAMPLES) {
            let g = christoffel_tensor(self, &n);
            if !is_positive_definite(&g) {
                return Err(Error::InvalidMedium(format!(
                    "Christoffel tensor is not positive definite in direction {n:?}"
                )));
            }
        }
        Ok(())
    }

    /// Table constants `(b, m)` of mode `mode` (1-based).
    pub fn mode_constants(&self, mode: usize) -> Result<ModeStructure> {
        mode_constants(self, mode)
    }
}

/// Deterministic, nearly uniform directions on the unit sphere.
pub fn fibonacci_sphere(count: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn is_positive_definite(m: &Mat3) -> bool {
    // Sylvester's criterion
    let d1 = m[0][0];
    let d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let d3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    d1 > 0.0 && d2 > 0.0 && d3 > 0.0
}

/// Christoffel tensor `Γᶜ(n)`; quadratic and homogeneous in `n`.
pub fn christoffel_tensor(medium: &MediumSpec, n: &Vec3) -> Mat3 {
    christoffel_from_constants(&medium.stiffness, n)
}

/// Christoffel tensor of any constants sharing a medium structure (used for
/// both stiffness and viscosity).
pub fn christoffel_from_constants(constants: &Stiffness, n: &Vec3) -> Mat3 {
    let [n1, n2, n3] = *n;
    let (s1, s2, s3) = (n1 * n1, n2 * n2, n3 * n3);
    match *constants {
        Stiffness::I { c11, c22, c33, c44, c55, c66 } => [
            [c11 * s1 + c66 * s2 + c55 * s3, 0.0, 0.0],
            [0.0, c66 * s1 + c22 * s2 + c44 * s3, 0.0],
            [0.0, 0.0, c55 * s1 + c44 * s2 + c33 * s3],
        ],
        Stiffness::II { c11, c12, c33, c44 } => {
            let c66 = 0.5 * (c11 - c12);
            let off = (c11 - c66) * n1 * n2;
            [
                [c11 * s1 + c66 * s2 + c44 * s3, off, 0.0],
                [off, c66 * s1 + c11 * s2 + c44 * s3, 0.0],
                [0.0, 0.0, c44 * (s1 + s2) + c33 * s3],
            ]
        }
        Stiffness::III { c11, c44, c66 } => transverse_iii(c11, c44, c66, n),
        Stiffness::Isotropic { c11, c44 } => transverse_iii(c11, c44, c44, n),
    }
}

fn transverse_iii(c11: f64, c44: f64, c66: f64, n: &Vec3) -> Mat3 {
    let [n1, n2, n3] = *n;
    let (s1, s2, s3) = (n1 * n1, n2 * n2, n3 * n3);
    let a = (c11 - c66) * n1 * n2;
    let b = (c11 - c44) * n1 * n3;
    let c = (c11 - c44) * n2 * n3;
    [
        [c11 * s1 + c66 * s2 + c44 * s3, a, b],
        [a, c66 * s1 + c11 * s2 + c44 * s3, c],
        [b, c, c44 * (s1 + s2) + c11 * s3],
    ]
}

/// How the eigenvector `Dᵢ(n)` is formed from the direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    /// Constant Cartesian axis `e_k` (0-based index).
    Axis(usize),
    /// `n` itself.
    Radial,
    /// `(n₁, n₂, 0)`.
    InPlaneGradient,
    /// `(n₂, -n₁, 0)`.
    InPlaneCurl,
    /// `(-n₁n₃, -n₂n₃, n₁² + n₂²)`.
    Meridional,
}

impl Polarization {
    pub fn vector(&self, n: &Vec3) -> Vec3 {
        let [n1, n2, n3] = *n;
        match *self {
            Polarization::Axis(k) => {
                let mut e = [0.0; 3];
                e[k] = 1.0;
                e
            }
            Polarization::Radial => *n,
            Polarization::InPlaneGradient => [n1, n2, 0.0],
            Polarization::InPlaneCurl => [n2, -n1, 0.0],
            Polarization::Meridional => [-n1 * n3, -n2 * n3, n1 * n1 + n2 * n2],
        }
    }
}

/// The polarization operator `Mᵢ = Dᵢ·Dᵢ` of a mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolarizationOperator {
    /// `Mᵢ = 1`.
    Identity,
    /// `Mᵢ = Σⱼ mⱼ² ∂ⱼ²`.
    Quadratic([f64; 3]),
    /// Quartic operator; never inverted (the assembly avoids it).
    Unsupported,
}

/// Table constants of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeStructure {
    /// 1-based mode number.
    pub mode: usize,
    /// Density-normalized velocities `b = (b₁, b₂, b₃)`, m/s.
    pub b: [f64; 3],
    /// Tabulated `m`; `None` for rows that are never used.
    pub m: Option<[f64; 3]>,
    pub operator: PolarizationOperator,
    pub polarization: Polarization,
}

impl ModeStructure {
    /// `b₁b₂b₃`.
    pub fn b_product(&self) -> f64 {
        self.b[0] * self.b[1] * self.b[2]
    }

    /// The `m` coefficients of a quadratic polarization operator.
    pub fn quadratic_m(&self) -> Result<[f64; 3]> {
        match self.operator {
            PolarizationOperator::Quadratic(m) => Ok(m),
            _ => Err(Error::UnsupportedMode { mode: self.mode }),
        }
    }

    /// `Mᵢ(n) = Dᵢ(n)·Dᵢ(n)`.
    pub fn m_value(&self, n: &Vec3) -> f64 {
        let d = self.polarization.vector(n);
        dot(&d, &d)
    }

    /// Eigenvalue `Lᵢ(n) = ρ Σⱼ bⱼ² nⱼ²` (Pa for unit `n`).
    pub fn eigenvalue(&self, rho: f64, n: &Vec3) -> f64 {
        rho * (0..3).map(|j| self.b[j] * self.b[j] * n[j] * n[j]).sum::<f64>()
    }
}

/// Indices `p` of the `c_pp` that appear in mode `mode`'s eigenvalue.
fn mode_coefficient_indices(kind: MediumKind, mode: usize) -> &'static [usize] {
    match (kind, mode) {
        (MediumKind::I, 1) => &[1, 6, 5],
        (MediumKind::I, 2) => &[6, 2, 4],
        (MediumKind::I, 3) => &[5, 4, 3],
        (MediumKind::II, 1) => &[4, 3],
        (MediumKind::II, 2) => &[1, 4],
        (MediumKind::II, 3) => &[6, 4],
        (_, 1) => &[1],
        (_, 2) => &[6, 4],
        _ => &[4],
    }
}

/// Mode constants of the catalog table.
pub fn mode_constants(medium: &MediumSpec, mode: usize) -> Result<ModeStructure> {
    if !(1..=3).contains(&mode) {
        return Err(Error::Domain(format!("mode must be 1, 2 or 3, got {mode}")));
    }
    let c = medium.velocities();
    let e = |k: usize| {
        let mut v = [0.0; 3];
        v[k] = 1.0;
        v
    };
    let s = match (medium.kind(), mode) {
        (MediumKind::I, 1) => ([c[1], c[6], c[5]], Some(e(0)), PolarizationOperator::Identity, Polarization::Axis(0)),
        (MediumKind::I, 2) => ([c[6], c[2], c[4]], Some(e(1)), PolarizationOperator::Identity, Polarization::Axis(1)),
        (MediumKind::I, 3) => ([c[5], c[4], c[3]], Some(e(2)), PolarizationOperator::Identity, Polarization::Axis(2)),
        (MediumKind::II, 1) => ([c[4], c[4], c[3]], Some(e(2)), PolarizationOperator::Identity, Polarization::Axis(2)),
        (MediumKind::II, 2) => (
            [c[1], c[1], c[4]],
            Some([1.0, 1.0, 0.0]),
            PolarizationOperator::Quadratic([1.0, 1.0, 0.0]),
            Polarization::InPlaneGradient,
        ),
        (MediumKind::II, 3) => ([c[6], c[6], c[4]], None, PolarizationOperator::Unsupported, Polarization::InPlaneCurl),
        (_, 1) => (
            [c[1], c[1], c[1]],
            Some([1.0, 1.0, 1.0]),
            PolarizationOperator::Quadratic([1.0, 1.0, 1.0]),
            Polarization::Radial,
        ),
        (_, 2) => (
            [c[6], c[6], c[4]],
            Some([1.0, 1.0, 0.0]),
            PolarizationOperator::Quadratic([1.0, 1.0, 0.0]),
            Polarization::InPlaneCurl,
        ),
        (_, _) => ([c[4], c[4], c[4]], None, PolarizationOperator::Unsupported, Polarization::Meridional),
    };
    Ok(ModeStructure {
        mode,
        b: s.0,
        m: s.1,
        operator: s.2,
        polarization: s.3,
    })
}

/// Value of the Christoffel tensor and its closed-form eigenstructure in one
/// direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelValue {
    pub direction: Vec3,
    pub gamma_c: Mat3,
    /// Eigenvalues `Lᵢ(n)` in the medium's mode order.
    pub eigenvalues: [f64; 3],
    /// Unnormalized eigenvectors `Dᵢ(n)`.
    pub eigenvectors: [Vec3; 3],
    /// `Mᵢ(n) = Dᵢ·Dᵢ`.
    pub m_values: [f64; 3],
    /// `true` where `Dᵢ(n)` vanishes (e.g. on the symmetry axis).
    pub degenerate: [bool; 3],
}

impl ChristoffelValue {
    /// Projector `Eᵢ = DᵢDᵢᵀ / Mᵢ`, or `None` for a vanishing `Dᵢ`.
    pub fn projector(&self, i: usize) -> Option<Mat3> {
        if self.degenerate[i] {
            return None;
        }
        let d = &self.eigenvectors[i];
        let mut p = outer(d, d);
        p.iter_mut().flatten().for_each(|x| *x /= self.m_values[i]);
        Some(p)
    }
}

/// Relative size below which an eigenvector is treated as vanishing.
const DEGENERATE_TOLERANCE: f64 = 1e-12;

pub fn eigenstructure(medium: &MediumSpec, n: &Vec3) -> Result<ChristoffelValue> {
    let scale = norm(n);
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::DegenerateDirection);
    }
    let mut eigenvalues = [0.0; 3];
    let mut eigenvectors = [[0.0; 3]; 3];
    let mut m_values = [0.0; 3];
    let mut degenerate = [false; 3];
    for i in 0..3 {
        let mode = mode_constants(medium, i + 1)?;
        eigenvalues[i] = mode.eigenvalue(medium.rho, n);
        eigenvectors[i] = mode.polarization.vector(n);
        m_values[i] = mode.m_value(n);
        // The polarization vectors have degree 0, 1 or 2 in n.
        let degree = match mode.polarization {
            Polarization::Axis(_) => 0,
            Polarization::Meridional => 2,
            _ => 1,
        };
        degenerate[i] = m_values[i].sqrt() <= DEGENERATE_TOLERANCE * scale.powi(degree);
    }
    Ok(ChristoffelValue {
        direction: *n,
        gamma_c: christoffel_tensor(medium, n),
        eigenvalues,
        eigenvectors,
        m_values,
        degenerate,
    })
}

/// Viscous Christoffel tensor `Γᵛ(n) = Σᵢ βᵢ Lᵢᶜ(n) Eᵢ(n)` under the
/// proportional-loss assumption. Vanishing eigenvectors (on the symmetry
/// axis) are handled by continuity of the sum.
pub fn viscous_christoffel(medium: &MediumSpec, n: &Vec3) -> Result<Mat3> {
    if let Ok(v) = medium.viscosity() {
        return Ok(christoffel_from_constants(&v, n));
    }
    let value = eigenstructure(medium, n)?;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        let p = value.projector(i).ok_or_else(|| {
            Error::Geometry(format!("mode {} polarization vanishes in direction {n:?}", i + 1))
        })?;
        for a in 0..3 {
            for b in 0..3 {
                out[a][b] += medium.beta[i] * value.eigenvalues[i] * p[a][b];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{frobenius, identity, mat_vec};

    fn medium1() -> MediumSpec {
        MediumSpec::new(
            1.2,
            Stiffness::I { c11: 9.0, c22: 7.0, c33: 8.0, c44: 2.0, c55: 2.5, c66: 3.0 },
            [0.0; 3],
            PowerLawExponent::voigt(),
        )
        .unwrap()
    }

    fn medium2() -> MediumSpec {
        MediumSpec::new(1.1, Stiffness::II { c11: 10.0, c12: 4.0, c33: 7.0, c44: 2.0 }, [0.0; 3], PowerLawExponent::voigt())
            .unwrap()
    }

    fn medium3() -> MediumSpec {
        MediumSpec::new(0.9, Stiffness::III { c11: 6.0, c44: 1.5, c66: 2.2 }, [0.0; 3], PowerLawExponent::voigt()).unwrap()
    }

    #[test]
    fn medium1_axis_direction() {
        let m = medium1();
        let g = christoffel_tensor(&m, &[1.0, 0.0, 0.0]);
        assert_eq!(g, [[9.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 2.5]]);
    }

    #[test]
    fn zero_direction() {
        for m in [medium1(), medium2(), medium3()] {
            assert_eq!(christoffel_tensor(&m, &[0.0; 3]), [[0.0; 3]; 3]);
            assert_eq!(eigenstructure(&m, &[0.0; 3]).unwrap_err(), Error::DegenerateDirection);
        }
    }

    #[test]
    fn medium2_axis_eigenvalues() {
        let m = medium2();
        let v = eigenstructure(&m, &[0.0, 0.0, 1.0]).unwrap();
        assert!((v.eigenvalues[0] - 7.0).abs() < 1e-12);
        assert!((v.eigenvalues[1] - 2.0).abs() < 1e-12);
        assert!((v.eigenvalues[2] - 2.0).abs() < 1e-12);
        assert_eq!(v.degenerate, [false, true, true]);
        let v = eigenstructure(&m, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(v.eigenvectors[1], [1.0, 0.0, 0.0]);
        assert_eq!(v.m_values[1], 1.0);
    }

    #[test]
    fn table_rows() {
        let m = medium2();
        let c = m.velocities();
        let s = m.mode_constants(1).unwrap();
        assert_eq!(s.b, [c[4], c[4], c[3]]);
        assert_eq!(s.m, Some([0.0, 0.0, 1.0]));
        let s = m.mode_constants(3).unwrap();
        assert_eq!(s.m, None);
        assert_eq!(s.quadratic_m().unwrap_err(), Error::UnsupportedMode { mode: 3 });

        let m = medium3();
        let c = m.velocities();
        let s = m.mode_constants(1).unwrap();
        assert_eq!(s.b, [c[1], c[1], c[1]]);
        assert_eq!(s.m, Some([1.0, 1.0, 1.0]));

        let m = medium1();
        for mode in 1..=3 {
            let s = m.mode_constants(mode).unwrap();
            let mv = s.m.unwrap();
            assert_eq!(mv.iter().filter(|&&x| x == 1.0).count(), 1);
            assert_eq!(mv.iter().sum::<f64>(), 1.0);
            assert_eq!(s.operator, PolarizationOperator::Identity);
            assert_eq!(s.m_value(&[0.3, -0.5, 0.7]), 1.0);
        }
        assert!(m.mode_constants(0).is_err());
        assert!(m.mode_constants(4).is_err());
    }

    #[test]
    fn quadratic_operator_matches_polarization() {
        for m in [medium2(), medium3()] {
            for n in fibonacci_sphere(50) {
                for mode in 1..=3 {
                    let s = m.mode_constants(mode).unwrap();
                    if let PolarizationOperator::Quadratic(mm) = s.operator {
                        let q: f64 = (0..3).map(|j| mm[j] * mm[j] * n[j] * n[j]).sum();
                        assert!((q - s.m_value(&n)).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn eigen_residual_and_completeness() {
        for m in [medium1(), medium2(), medium3()] {
            for n in fibonacci_sphere(200) {
                let v = eigenstructure(&m, &n).unwrap();
                let mut sum = [[0.0; 3]; 3];
                for i in 0..3 {
                    let d = v.eigenvectors[i];
                    let gd = mat_vec(&v.gamma_c, &d);
                    let r: f64 = (0..3).map(|k| (gd[k] - v.eigenvalues[i] * d[k]).powi(2)).sum::<f64>().sqrt();
                    assert!(r <= 1e-12 * frobenius(&v.gamma_c) * norm(&d));
                    let p = v.projector(i).unwrap();
                    for a in 0..3 {
                        for b in 0..3 {
                            sum[a][b] += p[a][b];
                        }
                    }
                }
                let id = identity();
                let err: f64 = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| (sum[a][b] - id[a][b]).powi(2)).sum::<f64>().sqrt();
                assert!(err <= 1e-12);
            }
        }
    }

    #[test]
    fn isotropic_normalization() {
        let m = MediumSpec::new(1.0, Stiffness::III { c11: 4.0, c44: 1.0, c66: 1.0 }, [0.0; 3], PowerLawExponent::voigt()).unwrap();
        assert_eq!(m.kind(), MediumKind::Isotropic);
        for n in fibonacci_sphere(20) {
            let v = eigenstructure(&m, &n).unwrap();
            assert!((v.eigenvalues[1] - v.eigenvalues[2]).abs() < 1e-14);
        }
        let m = MediumSpec::new(1.0, Stiffness::III { c11: 4.0, c44: 1.0, c66: 1.0 }, [0.0, 1e-3, 2e-3], PowerLawExponent::voigt());
        assert_eq!(m.unwrap().kind(), MediumKind::III);
    }

    #[test]
    fn invalid_media_rejected() {
        let g = PowerLawExponent::voigt();
        assert!(MediumSpec::new(-1.0, Stiffness::Isotropic { c11: 4.0, c44: 1.0 }, [0.0; 3], g).is_err());
        assert!(MediumSpec::new(1.0, Stiffness::Isotropic { c11: 0.0, c44: 1.0 }, [0.0; 3], g).is_err());
        // c66 = (c11 - c12)/2 <= 0
        assert!(MediumSpec::new(1.0, Stiffness::II { c11: 2.0, c12: 3.0, c33: 1.0, c44: 1.0 }, [0.0; 3], g).is_err());
        assert!(MediumSpec::new(1.0, Stiffness::Isotropic { c11: 4.0, c44: 1.0 }, [-1e-3, 0.0, 0.0], g).is_err());
        assert!("IV".parse::<MediumKind>().is_err());
    }

    #[test]
    fn viscosity_from_table() {
        let g = PowerLawExponent::voigt();
        let c = Stiffness::III { c11: 6.0, c44: 1.5, c66: 2.2 };
        let v = Stiffness::III { c11: 6e-3, c44: 3e-3, c66: 4.4e-3 };
        let m = MediumSpec::from_viscosity(1.0, c, v, g).unwrap();
        assert!((m.beta[0] - 1e-3).abs() < 1e-15);
        assert!((m.beta[1] - 2e-3).abs() < 1e-15);
        assert!((m.beta[2] - 2e-3).abs() < 1e-15);
        let bad = Stiffness::III { c11: 6e-3, c44: 3e-3, c66: 2.2e-3 };
        assert!(MediumSpec::from_viscosity(1.0, c, bad, g).is_err());
        let c = Stiffness::I { c11: 9.0, c22: 7.0, c33: 8.0, c44: 2.0, c55: 2.5, c66: 3.0 };
        let v = Stiffness::I { c11: 9e-3, c22: 7e-3, c33: 8e-3, c44: 2e-3, c55: 2.5e-3, c66: 3e-3 };
        let m = MediumSpec::from_viscosity(1.0, c, v, g).unwrap();
        assert!(m.beta.iter().all(|b| (b - 1e-3).abs() < 1e-15));
    }

    #[test]
    fn viscous_tensor_symmetric_psd() {
        let g = PowerLawExponent::voigt();
        let media = [
            MediumSpec::new(1.0, Stiffness::II { c11: 10.0, c12: 4.0, c33: 7.0, c44: 2.0 }, [1e-3, 2e-3, 5e-4], g).unwrap(),
            MediumSpec::new(1.0, Stiffness::III { c11: 6.0, c44: 1.5, c66: 2.2 }, [1e-3, 2e-3, 2e-3], g).unwrap(),
            MediumSpec::new(1.0, Stiffness::I { c11: 9.0, c22: 7.0, c33: 8.0, c44: 2.0, c55: 2.5, c66: 3.0 }, [1e-3; 3], g).unwrap(),
        ];
        for m in media {
            for n in fibonacci_sphere(100) {
                let v = viscous_christoffel(&m, &n).unwrap();
                for a in 0..3 {
                    for b in 0..3 {
                        assert!((v[a][b] - v[b][a]).abs() <= 1e-15 * frobenius(&v));
                    }
                }
                let (d1, d2) = (v[0][0], v[0][0] * v[1][1] - v[0][1] * v[1][0]);
                assert!(d1 >= 0.0 && d2 >= -1e-15);
                // Eigenvectors of the elastic tensor are eigenvectors of the viscous one.
                let e = eigenstructure(&m, &n).unwrap();
                for i in 0..3 {
                    let d = e.eigenvectors[i];
                    let vd = mat_vec(&v, &d);
                    let expected = m.beta[i] * e.eigenvalues[i];
                    for k in 0..3 {
                        assert!((vd[k] - expected * d[k]).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn viscosity_requires_compatible_ratios() {
        let g = PowerLawExponent::voigt();
        let m = MediumSpec::new(1.0, Stiffness::II { c11: 10.0, c12: 4.0, c33: 7.0, c44: 2.0 }, [1e-3, 2e-3, 1e-3], g).unwrap();
        assert!(m.viscosity().is_err());
        let m = MediumSpec::new(1.0, Stiffness::III { c11: 6.0, c44: 1.5, c66: 2.2 }, [1e-3, 2e-3, 2e-3], g).unwrap();
        assert!(m.viscosity().is_ok());
    }
}
