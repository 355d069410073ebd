//! Flat `section.key = value` run configuration.
//!
//! ```text
//! # comment
//! run.task = eval-grid
//! medium.kind = II
//! medium.rho = 2000
//! medium.c11 = 2.0e10
//! medium.c12 = 8.0e9
//! medium.c33 = 1.6e10
//! medium.c44 = 4.0e9
//! medium.beta = 1e-4, 1e-4, 1e-4
//! grid.origin = -0.875, -0.875, -0.875
//! grid.spacing = 0.25, 0.25, 0.25
//! grid.dims = 8, 8, 8
//! frequency.omega = 30
//! output.formats = bin, csv
//! ```
//!
//! Keys are unique, unknown keys are rejected and every error names the key
//! and line.


use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anisogreen::attenuation::PowerLawExponent;
use anisogreen::christoffel::{MediumKind, MediumSpec, Stiffness};
use anisogreen::tensor::Vec3;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.key, self.line) {
            (Some(k), Some(l)) => write!(f, "line {l}: `{k}`: {}", self.message),
            (Some(k), None) => write!(f, "`{k}`: {}", self.message),
            (None, Some(l)) => write!(f, "line {l}: {}", self.message),
            (None, None) => write!(f, "{}", self.message),
        }
    }
}

fn err(line: Option<usize>, key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        key: Some(key.to_string()),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    EvalGrid,
    Seismogram,
    Validate,
    EigenCheck,
}

impl std::str::FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eval-grid" => Ok(Task::EvalGrid),
            "seismogram" => Ok(Task::Seismogram),
            "validate" => Ok(Task::Validate),
            "eigen-check" => Ok(Task::EigenCheck),
            _ => Err(format!("unknown task `{s}` (eval-grid, seismogram, validate, eigen-check)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub origin: Vec3,
    pub spacing: Vec3,
    pub dims: [u32; 3],
}

impl GridSpec {
    pub fn node(&self, i: usize, j: usize, k: usize) -> Vec3 {
        [
            self.origin[0] + self.spacing[0] * i as f64,
            self.origin[1] + self.spacing[1] * j as f64,
            self.origin[2] + self.spacing[2] * k as f64,
        ]
    }

    pub fn node_count(&self) -> usize {
        self.dims.iter().map(|&d| d as usize).product()
    }

    /// Node indices in x-fastest order.
    pub fn indices(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let [n1, n2, n3] = self.dims.map(|d| d as usize);
        (0..n3).flat_map(move |k| (0..n2).flat_map(move |j| (0..n1).map(move |i| [i, j, k])))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Bin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub directory: Option<PathBuf>,
    pub formats: Vec<OutputFormat>,
    pub plot_scripts: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeismogramSpec {
    pub receiver: Vec3,
    pub peak_frequency: f64,
    pub delay: f64,
    pub dt: f64,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateSpec {
    pub points: Vec<Vec3>,
    pub spacing: f64,
    pub refinements: usize,
    pub fd_order: u32,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub medium: MediumSpec,
    pub grid: Option<GridSpec>,
    pub omegas: Vec<f64>,
    pub output: OutputSpec,
    pub seismogram: Option<SeismogramSpec>,
    pub validate: ValidateSpec,
    /// SHA-256 of the configuration text, hex.
    pub hash: String,
}

const KNOWN_KEYS: &[&str] = &[
    "run.task",
    "medium.kind",
    "medium.rho",
    "medium.c11",
    "medium.c12",
    "medium.c22",
    "medium.c33",
    "medium.c44",
    "medium.c55",
    "medium.c66",
    "medium.beta",
    "medium.gamma",
    "grid.origin",
    "grid.spacing",
    "grid.dims",
    "frequency.omega",
    "frequency.omega_min",
    "frequency.omega_max",
    "frequency.count",
    "output.directory",
    "output.formats",
    "output.plot_scripts",
    "seismogram.receiver",
    "seismogram.peak_frequency",
    "seismogram.delay",
    "seismogram.dt",
    "seismogram.duration",
    "validate.points",
    "validate.spacing",
    "validate.refinements",
    "validate.fd_order",
    "validate.samples",
    "validate.seed",
];

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<T>().map(Some).map_err(|e| err(Some(line), key, format!("invalid value `{v}`: {e}"))),
        }
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.parse(key)?.ok_or_else(|| err(None, key, "missing required key"))
    }

    fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let v: f64 = self.required(key)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(err(self.line(key), key, format!("must be positive, got {v}")));
        }
        Ok(v)
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.raw(key).map(|(l, _)| l)
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let Some((line, v)) = self.raw(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|s| s.trim().parse::<T>().map_err(|e| err(Some(line), key, format!("invalid element `{}`: {e}", s.trim()))))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn triple(&self, key: &str) -> Result<Option<Vec3>, ConfigError> {
        match self.list::<f64>(key)? {
            None => Ok(None),
            Some(v) if v.len() == 3 && v.iter().all(|x| x.is_finite()) => Ok(Some([v[0], v[1], v[2]])),
            Some(v) => Err(err(self.line(key), key, format!("expected 3 finite numbers, got {}", v.len()))),
        }
    }
}

fn tokenize(text: &str) -> Result<Entries, ConfigError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError {
                line: Some(line),
                key: None,
                message: format!("expected `section.key = value`, got `{content}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(err(Some(line), key, "unknown key"));
        }
        if value.is_empty() {
            return Err(err(Some(line), key, "empty value"));
        }
        if let Some((first, _)) = map.get(key) {
            return Err(err(Some(line), key, format!("duplicate key (first set on line {first})")));
        }
        map.insert(key.to_string(), (line, value.to_string()));
    }
    Ok(Entries { map })
}

fn stiffness(e: &Entries, kind: MediumKind) -> Result<Stiffness, ConfigError> {
    let allowed = kind.required_constants();
    for key in ["c11", "c12", "c22", "c33", "c44", "c55", "c66"] {
        let full = format!("medium.{key}");
        if e.has(&full) && !allowed.contains(&key) {
            let why = if kind == MediumKind::II && key == "c66" {
                "medium II derives c66 = (c11 - c12)/2 and does not accept it".to_string()
            } else {
                format!("not a constant of medium {kind}")
            };
            return Err(err(e.line(&full), &full, why));
        }
    }
    let c = |key: &str| -> Result<f64, ConfigError> {
        let full = format!("medium.{key}");
        let v: f64 = e.required(&full)?;
        if !v.is_finite() || (key != "c12" && !(v > 0.0)) {
            return Err(err(e.line(&full), &full, format!("must be positive, got {v}")));
        }
        Ok(v)
    };
    Ok(match kind {
        MediumKind::I => Stiffness::I {
            c11: c("c11")?,
            c22: c("c22")?,
            c33: c("c33")?,
            c44: c("c44")?,
            c55: c("c55")?,
            c66: c("c66")?,
        },
        MediumKind::II => Stiffness::II {
            c11: c("c11")?,
            c12: c("c12")?,
            c33: c("c33")?,
            c44: c("c44")?,
        },
        MediumKind::III => Stiffness::III {
            c11: c("c11")?,
            c44: c("c44")?,
            c66: c("c66")?,
        },
        MediumKind::Isotropic => Stiffness::Isotropic {
            c11: c("c11")?,
            c44: c("c44")?,
        },
    })
}

/// Parses configuration text.
pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let e = tokenize(text)?;
    let task: Task = e.required("run.task")?;

    let kind: MediumKind = e.required("medium.kind")?;
    let rho = e.positive("medium.rho")?;
    let stiffness = stiffness(&e, kind)?;
    let beta = match e.list::<f64>("medium.beta")? {
        None => [0.0; 3],
        Some(v) if v.len() == 1 => [v[0]; 3],
        Some(v) if v.len() == 3 => [v[0], v[1], v[2]],
        Some(_) => return Err(err(e.line("medium.beta"), "medium.beta", "expected 1 or 3 values")),
    };
    if beta.iter().any(|b| !(*b >= 0.0) || !b.is_finite()) {
        return Err(err(e.line("medium.beta"), "medium.beta", "loss ratios must be >= 0"));
    }
    let gamma_value: f64 = e.parse("medium.gamma")?.unwrap_or(2.0);
    let gamma = PowerLawExponent::new(gamma_value).map_err(|x| err(e.line("medium.gamma"), "medium.gamma", x.to_string()))?;
    let medium = MediumSpec::new(rho, stiffness, beta, gamma).map_err(|x| ConfigError {
        line: e.line("medium.kind"),
        key: Some("medium".into()),
        message: x.to_string(),
    })?;

    let grid = match (e.triple("grid.origin")?, e.triple("grid.spacing")?, e.list::<u32>("grid.dims")?) {
        (None, None, None) => None,
        (Some(origin), Some(spacing), Some(dims)) => {
            if dims.len() != 3 || dims.contains(&0) {
                return Err(err(e.line("grid.dims"), "grid.dims", "expected 3 positive integers"));
            }
            if spacing.iter().any(|s| !(*s > 0.0)) {
                return Err(err(e.line("grid.spacing"), "grid.spacing", "spacings must be positive"));
            }
            let g = GridSpec { origin, spacing, dims: [dims[0], dims[1], dims[2]] };
            let scale = spacing.iter().cloned().fold(0.0, f64::max);
            if let Some(n) = g.indices().find(|&[i, j, k]| anisogreen::tensor::norm(&g.node(i, j, k)) <= 1e-12 * scale) {
                return Err(err(
                    e.line("grid.origin"),
                    "grid.origin",
                    format!("grid node {n:?} coincides with the source at the origin"),
                ));
            }
            Some(g)
        }
        _ => {
            return Err(ConfigError {
                line: None,
                key: Some("grid".into()),
                message: "grid.origin, grid.spacing and grid.dims must be given together".into(),
            })
        }
    };

    let omegas = if let Some(w) = e.parse::<f64>("frequency.omega")? {
        if ["frequency.omega_min", "frequency.omega_max", "frequency.count"].iter().any(|k| e.has(k)) {
            return Err(err(e.line("frequency.omega"), "frequency.omega", "give either a single omega or a band"));
        }
        if !w.is_finite() {
            return Err(err(e.line("frequency.omega"), "frequency.omega", "must be finite"));
        }
        vec![w]
    } else if e.has("frequency.omega_min") || e.has("frequency.omega_max") || e.has("frequency.count") {
        let lo: f64 = e.required("frequency.omega_min")?;
        let hi: f64 = e.required("frequency.omega_max")?;
        let n: usize = e.required("frequency.count")?;
        if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
            return Err(err(e.line("frequency.omega_max"), "frequency.omega_max", "needs omega_min <= omega_max"));
        }
        if n == 0 {
            return Err(err(e.line("frequency.count"), "frequency.count", "must be at least 1"));
        }
        if n == 1 {
            vec![lo]
        } else {
            (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
        }
    } else {
        Vec::new()
    };

    let formats = match e.list::<String>("output.formats")? {
        None => vec![OutputFormat::Bin],
        Some(v) => {
            let mut out = Vec::new();
            for f in v {
                let f = match f.as_str() {
                    "bin" => OutputFormat::Bin,
                    "csv" => OutputFormat::Csv,
                    other => return Err(err(e.line("output.formats"), "output.formats", format!("unknown format `{other}`"))),
                };
                if !out.contains(&f) {
                    out.push(f);
                }
            }
            out
        }
    };
    let output = OutputSpec {
        directory: e.parse::<String>("output.directory")?.map(PathBuf::from),
        formats,
        plot_scripts: e.parse("output.plot_scripts")?.unwrap_or(false),
    };

    let seismogram = if e.has("seismogram.receiver") {
        let receiver = e.triple("seismogram.receiver")?.expect("present");
        let spec = SeismogramSpec {
            receiver,
            peak_frequency: e.positive("seismogram.peak_frequency")?,
            delay: e.parse("seismogram.delay")?.unwrap_or(0.0),
            dt: e.positive("seismogram.dt")?,
            duration: e.positive("seismogram.duration")?,
        };
        if spec.duration <= spec.dt {
            return Err(err(e.line("seismogram.duration"), "seismogram.duration", "must exceed seismogram.dt"));
        }
        Some(spec)
    } else {
        None
    };

    let points = match e.list::<f64>("validate.points")? {
        None => vec![[1.3, 0.7, -0.9], [-0.4, 1.6, 0.8], [0.9, -1.1, 1.2]],
        Some(v) if !v.is_empty() && v.len() % 3 == 0 => v.chunks(3).map(|c| [c[0], c[1], c[2]]).collect(),
        Some(_) => return Err(err(e.line("validate.points"), "validate.points", "expected a multiple of 3 numbers")),
    };
    let fd_order = e.parse("validate.fd_order")?.unwrap_or(4u32);
    if fd_order != 2 && fd_order != 4 {
        return Err(err(e.line("validate.fd_order"), "validate.fd_order", "must be 2 or 4"));
    }
    let validate = ValidateSpec {
        points,
        spacing: e.parse("validate.spacing")?.unwrap_or(0.08),
        refinements: e.parse("validate.refinements")?.unwrap_or(3),
        fd_order,
        samples: e.parse("validate.samples")?.unwrap_or(1000),
        seed: e.parse("validate.seed")?.unwrap_or(1),
    };
    if !(validate.spacing > 0.0) || validate.refinements < 3 {
        return Err(err(None, "validate", "needs spacing > 0 and at least 3 refinements"));
    }

    let hash = hex(&Sha256::digest(text.as_bytes()));
    Ok(RunConfig { task, medium, grid, omegas, output, seismogram, validate, hash })
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        line: None,
        key: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config_str(&text)
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODULE_EXAMPLE: &str = "# comment\nrun.task = eval-grid\nmedium.kind = II\nmedium.rho = 2000\nmedium.c11 = 2.0e10\n\
        medium.c12 = 8.0e9\nmedium.c33 = 1.6e10\nmedium.c44 = 4.0e9\nmedium.beta = 1e-4, 1e-4, 1e-4\n\
        grid.origin = -0.875, -0.875, -0.875\ngrid.spacing = 0.25, 0.25, 0.25\ngrid.dims = 8, 8, 8\n\
        frequency.omega = 30\noutput.formats = bin, csv\n";

    const MINIMAL: &str = "run.task = eval-grid\n\
        medium.kind = I\n\
        medium.rho = 1.0\n\
        medium.c11 = 9\nmedium.c22 = 7.5\nmedium.c33 = 8\nmedium.c44 = 2\nmedium.c55 = 2.6\nmedium.c66 = 3.1\n\
        grid.origin = 0.1, 0.1, 0.1\ngrid.spacing = 0.2, 0.2, 0.2\ngrid.dims = 2, 2, 2\n\
        frequency.omega = 3\n";

    #[test]
    fn module_example_parses() {
        let c = parse_config_str(MODULE_EXAMPLE).unwrap();
        assert_eq!(c.grid.unwrap().node_count(), 512);
    }

    #[test]
    fn minimal_medium1() {
        let c = parse_config_str(MINIMAL).unwrap();
        assert_eq!(c.task, Task::EvalGrid);
        assert_eq!(c.medium.kind(), MediumKind::I);
        assert_eq!(c.omegas, vec![3.0]);
        assert_eq!(c.output.formats, vec![OutputFormat::Bin]);
        assert_eq!(c.hash.len(), 64);
    }

    #[test]
    fn negative_density_names_key() {
        let text = MINIMAL.replace("medium.rho = 1.0", "medium.rho = -1.0");
        let e = parse_config_str(&text).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("medium.rho"));
        assert_eq!(e.line, Some(3));
    }

    #[test]
    fn medium2_rejects_c66() {
        let text = "run.task = eval-grid\nmedium.kind = II\nmedium.rho = 1\nmedium.c11 = 10\nmedium.c12 = 4\n\
            medium.c33 = 7\nmedium.c44 = 2\nmedium.c66 = 3\n";
        let e = parse_config_str(text).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("medium.c66"));
        assert_eq!(e.line, Some(8));
    }

    #[test]
    fn unknown_and_duplicate_keys() {
        let e = parse_config_str(&format!("{MINIMAL}medium.rh0 = 2\n")).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("medium.rh0"));
        let e = parse_config_str(&format!("{MINIMAL}medium.rho = 2\n")).unwrap_err();
        assert!(e.message.contains("duplicate"));
        let e = parse_config_str("just words\n").unwrap_err();
        assert_eq!(e.line, Some(1));
    }

    #[test]
    fn type_mismatch() {
        let text = MINIMAL.replace("grid.dims = 2, 2, 2", "grid.dims = 2, x, 2");
        let e = parse_config_str(&text).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("grid.dims"));
    }

    #[test]
    fn grid_through_source_rejected() {
        let text = MINIMAL.replace("grid.origin = 0.1, 0.1, 0.1", "grid.origin = -0.2, -0.2, 0");
        let e = parse_config_str(&text).unwrap_err();
        assert!(e.message.contains("source"), "{e}");
    }

    #[test]
    fn missing_key() {
        let text = MINIMAL.replace("medium.c44 = 2\n", "");
        let e = parse_config_str(&text).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("medium.c44"));
        assert!(e.message.contains("missing"));
    }

    #[test]
    fn band_frequencies() {
        let text = MINIMAL.replace("frequency.omega = 3", "frequency.omega_min = 1\nfrequency.omega_max = 3\nfrequency.count = 3");
        assert_eq!(parse_config_str(&text).unwrap().omegas, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn gamma_must_exceed_one() {
        let e = parse_config_str(&format!("{MINIMAL}medium.gamma = 1\n")).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("medium.gamma"));
    }
}
