//! Task drivers behind the subcommands.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anisogreen::attenuation::{loss_symbol, PowerLawExponent};
use anisogreen::christoffel::{eigenstructure, MediumKind};
use anisogreen::green::{green_tensor, time_domain, Wavelet};
use anisogreen::potential::closed_integrals;
use anisogreen::validation::{
    best_assignment, dense_eigensolver, fd_residual, kernel_ft_oracle, reference_quadrature, FdOrder, OracleConfig,
};
use anisogreen::volume::FieldVolume;
use anisogreen::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{GridSpec, OutputFormat, RunConfig};
use crate::error::CliError;
use crate::plot;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const THREADS_VAR: &str = "ANISOGREEN_THREADS";

/// Worker count: the machine's parallelism, capped by `ANISOGREEN_THREADS`.
pub fn worker_count() -> usize {
    let available = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var(THREADS_VAR).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(cap) if cap > 0 => available.min(cap),
        _ => available,
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn provenance(config: &RunConfig) -> String {
    format!(
        "tool = anisogreen {TOOL_VERSION}\nconfig_sha256 = {}\nmedium = {}\n",
        config.hash,
        config.medium.kind()
    )
}

/// Evaluates Ĝ at every grid node for one frequency, in x-fastest order.
pub fn evaluate_grid(config: &RunConfig, grid: &GridSpec, omega: f64, threads: usize) -> Result<FieldVolume, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))?;
    let nodes: Vec<[usize; 3]> = grid.indices().collect();
    let medium = config.medium;
    let values: Vec<anisogreen::Result<[Complex64; 9]>> = pool.install(|| {
        nodes
            .par_iter()
            .map(|&[i, j, k]| green_tensor(&medium, &grid.node(i, j, k), omega).map(|g| g.g.entries()))
            .collect()
    });
    let mut data = Vec::with_capacity(nodes.len() * 9);
    for (node, v) in nodes.iter().zip(values) {
        let entries = v.map_err(|e| CliError::numerical(format!("node {node:?} at omega = {omega}"), e))?;
        data.extend_from_slice(&entries);
    }
    FieldVolume::new(grid.dims, 9, data).map_err(|e| CliError::numerical("volume assembly", e))
}

/// `eval-grid`: one volume per frequency under `out`.
pub fn eval_grid(config: &RunConfig, out: &Path, threads: usize) -> Result<Vec<PathBuf>, CliError> {
    let grid = config.grid.as_ref().ok_or_else(|| {
        CliError::Config(crate::config::ConfigError {
            line: None,
            key: Some("grid".into()),
            message: "eval-grid needs a grid block".into(),
        })
    })?;
    if config.omegas.is_empty() {
        return Err(CliError::Config(crate::config::ConfigError {
            line: None,
            key: Some("frequency".into()),
            message: "eval-grid needs frequency.omega or a band".into(),
        }));
    }
    ensure_dir(out)?;
    let mut written = Vec::new();
    for (n, &omega) in config.omegas.iter().enumerate() {
        let volume = evaluate_grid(config, grid, omega, threads)?;
        let stem = format!("green_{n:03}");
        let mut meta = provenance(config);
        let _ = write!(
            meta,
            "omega = {omega:e}\norigin = {:e}, {:e}, {:e}\nspacing = {:e}, {:e}, {:e}\ndims = {}, {}, {}\ncomponents = 9\nlayout = G11 G12 G13 G21 G22 G23 G31 G32 G33, x1 fastest\n",
            grid.origin[0], grid.origin[1], grid.origin[2], grid.spacing[0], grid.spacing[1], grid.spacing[2],
            grid.dims[0], grid.dims[1], grid.dims[2]
        );
        let meta_path = out.join(format!("{stem}.meta"));
        write_file(&meta_path, meta.as_bytes())?;
        written.push(meta_path);
        if config.output.formats.contains(&OutputFormat::Bin) {
            let p = out.join(format!("{stem}.agrn"));
            write_file(&p, &volume.encode())?;
            written.push(p);
        }
        if config.output.formats.contains(&OutputFormat::Csv) {
            let p = out.join(format!("{stem}.csv"));
            let csv = format!(
                "# config_sha256 = {}\n# omega = {omega:e}\n{}",
                config.hash,
                volume.to_csv(grid.origin, grid.spacing)
            );
            write_file(&p, csv.as_bytes())?;
            written.push(p);
            if config.output.plot_scripts {
                let script = out.join(format!("plot_{stem}.py"));
                let file = format!("{stem}.csv");
                write_file(&script, plot::slice_script(&file, grid.dims, grid.dims[2] as usize / 2, &config.hash).as_bytes())?;
                written.push(script);
            }
        }
    }
    Ok(written)
}

/// `seismogram`: the nine traces at the receiver as CSV.
pub fn seismogram(config: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let spec = config.seismogram.as_ref().ok_or_else(|| {
        CliError::Config(crate::config::ConfigError {
            line: None,
            key: Some("seismogram".into()),
            message: "seismogram needs seismogram.receiver and its wavelet keys".into(),
        })
    })?;
    let wavelet = Wavelet::Ricker { peak_frequency: spec.peak_frequency, delay: spec.delay };
    let s = time_domain(&config.medium, &spec.receiver, wavelet, spec.dt, spec.duration)
        .map_err(|e| CliError::numerical(format!("receiver {:?}", spec.receiver), e))?;
    ensure_dir(out)?;
    let mut csv = format!("# config_sha256 = {}\nt", config.hash);
    for k in 1..=3 {
        for l in 1..=3 {
            let _ = write!(csv, ",g{k}{l}");
        }
    }
    csv.push('\n');
    for (n, sample) in s.samples.iter().enumerate() {
        let _ = write!(csv, "{:e}", n as f64 * s.dt);
        for v in sample.iter().flatten() {
            let _ = write!(csv, ",{v:e}");
        }
        csv.push('\n');
    }
    let path = out.join("seismogram.csv");
    write_file(&path, csv.as_bytes())?;
    let mut written = vec![path];
    if config.output.plot_scripts {
        let script = out.join("plot_seismogram.py");
        write_file(&script, plot::trace_script("seismogram.csv", &config.hash).as_bytes())?;
        written.push(script);
    }
    Ok(written)
}

/// Checks run by `validate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Residual,
    Eigen,
    Quadrature,
    KernelFt,
}

impl std::str::FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "residual" => Ok(Check::Residual),
            "eigen" => Ok(Check::Eigen),
            "quadrature" => Ok(Check::Quadrature),
            "kernel-ft" => Ok(Check::KernelFt),
            _ => Err(format!("unknown check `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub summary: String,
    pub csv: String,
    pub passed: bool,
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = anisogreen::tensor::norm(&v);
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

pub fn run_check(check: Check, config: &RunConfig) -> Result<CheckReport, CliError> {
    let v = &config.validate;
    let mut rng = ChaCha8Rng::seed_from_u64(v.seed);
    match check {
        Check::Residual => {
            let omega = config.omegas.first().copied().unwrap_or(3.0);
            let oc = OracleConfig {
                fd_order: if v.fd_order == 2 { FdOrder::Second } else { FdOrder::Fourth },
                spacing: v.spacing,
                refinements: v.refinements,
                ..Default::default()
            };
            let medium = config.medium;
            let rep = fd_residual(&medium, |x| Ok(green_tensor(&medium, x, omega)?.g), &v.points, omega, &oc)
                .map_err(|e| CliError::numerical("residual", e))?;
            let elastic = medium.beta.iter().all(|&b| b == 0.0);
            let order = v.fd_order as f64;
            let passed = !elastic || rep.slopes.iter().all(|s| (s - order).abs() <= 0.3);
            let summary = format!(
                "residual: medium {} omega {omega}: slopes {:.3}..{:.3} (expected {order} for beta = 0), finest floor {:.3e}",
                medium.kind(),
                rep.min_slope(),
                rep.max_slope(),
                rep.floor()
            );
            Ok(CheckReport { summary, csv: rep.to_csv(), passed })
        }
        Check::Eigen => {
            let mut worst: f64 = 0.0;
            let mut worst_completeness: f64 = 0.0;
            let mut csv = String::from("n1,n2,n3,rel_error,completeness\n");
            for _ in 0..v.samples {
                let n = random_unit(&mut rng);
                let cv = eigenstructure(&config.medium, &n).map_err(|e| CliError::numerical("eigen", e))?;
                let dense = dense_eigensolver(&cv.gamma_c);
                let p = best_assignment(&cv.eigenvalues, &dense.values);
                let scale = dense.values.iter().cloned().fold(0.0, |a: f64, b| a.max(b.abs()));
                let rel = (0..3).map(|i| (cv.eigenvalues[i] - dense.values[p[i]]).abs() / scale).fold(0.0, f64::max);
                let mut sum = [[0.0; 3]; 3];
                for i in 0..3 {
                    if let Some(e) = cv.projector(i) {
                        for a in 0..3 {
                            for b in 0..3 {
                                sum[a][b] += e[a][b];
                            }
                        }
                    }
                }
                let completeness = (0..3)
                    .flat_map(|a| (0..3).map(move |b| (a, b)))
                    .map(|(a, b)| (sum[a][b] - if a == b { 1.0 } else { 0.0 }).powi(2))
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(rel);
                worst_completeness = worst_completeness.max(completeness);
                let _ = writeln!(csv, "{:e},{:e},{:e},{rel:e},{completeness:e}", n[0], n[1], n[2]);
            }
            let passed = worst <= 1e-10 && worst_completeness <= 1e-12;
            let summary = format!(
                "eigen: {} directions, max relative eigenvalue error {worst:.3e}, max completeness defect {worst_completeness:.3e}",
                v.samples
            );
            Ok(CheckReport { summary, csv, passed })
        }
        Check::Quadrature => {
            let mut worst: f64 = 0.0;
            let mut csv = String::from("k_re,k_im,tau,error\n");
            for _ in 0..v.samples.min(100) {
                let k = Complex64::new(rng.gen_range(-20.0..20.0), rng.gen_range(0.0..2.0));
                let tau = rng.gen_range(1e-3..2.0);
                let c = closed_integrals(k, tau);
                let mut err: f64 = 0.0;
                for (n, value) in [c.i0, c.i1, c.i2].iter().enumerate() {
                    let reference = reference_quadrature(
                        |h| (Complex64::i() * k * h).exp() * h.powi(n as i32),
                        0.0,
                        tau,
                        1e-15 * tau.powi(n as i32 + 1),
                    )
                    .map_err(|e| CliError::numerical("reference quadrature", e))?;
                    err = err.max((value - reference).norm() / reference.norm().max(tau.powi(n as i32 + 1)));
                }
                worst = worst.max(err);
                let _ = writeln!(csv, "{:e},{:e},{tau:e},{err:e}", k.re, k.im);
            }
            let summary = format!("quadrature: closed integrals vs adaptive Simpson, max relative error {worst:.3e}");
            Ok(CheckReport { summary, csv, passed: worst <= 1e-12 })
        }
        Check::KernelFt => {
            let gamma: PowerLawExponent = config.medium.gamma;
            let mut worst: f64 = 0.0;
            let mut csv = String::from("omega,symbol_re,symbol_im,oracle_re,oracle_im,rel_error\n");
            for n in 0..10 {
                let omega = 10f64.powf(-0.5 + 2.0 * n as f64 / 9.0);
                let a = loss_symbol(gamma, omega).map_err(|e| CliError::numerical("loss symbol", e))?;
                let o = kernel_ft_oracle(gamma, omega, 1.0, 20).map_err(|e| CliError::numerical("kernel transform", e))?;
                let rel = (a - o.value).norm() / a.norm();
                worst = worst.max(rel);
                let _ = writeln!(csv, "{omega:e},{:e},{:e},{:e},{:e},{rel:e}", a.re, a.im, o.value.re, o.value.im);
            }
            let summary = format!("kernel-ft: gamma {}: max relative error {worst:.3e}", gamma.value());
            Ok(CheckReport { summary, csv, passed: worst <= 1e-6 })
        }
    }
}

/// The media catalog as text.
pub fn media_list() -> String {
    let mut s = String::new();
    for kind in MediumKind::ALL {
        let _ = writeln!(s, "{:<10} {:<52} constants: {}", kind.to_string(), kind.description(), kind.required_constants().join(", "));
    }
    s
}
