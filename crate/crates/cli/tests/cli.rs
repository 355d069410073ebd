//! The binary end to end.

use std::path::Path;
use std::process::Command;

use anisogreen::volume::FieldVolume;

const BIN: &str = env!("CARGO_BIN_EXE_anisogreen");

const MEDIUM: &str = "medium.kind = III\nmedium.rho = 0.9\nmedium.c11 = 8\nmedium.c44 = 2\nmedium.c66 = 3\nmedium.beta = 1e-3\n";

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("run.cfg");
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).env("ANISOGREEN_THREADS", "3").output().unwrap()
}

#[test]
fn eval_grid_writes_volumes_csv_and_scripts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!(
            "run.task = eval-grid\n{MEDIUM}grid.origin = -0.5, -0.5, 0.25\ngrid.spacing = 0.25, 0.25, 0.25\ngrid.dims = 5, 5, 3\n\
             frequency.omega = 2.5\noutput.formats = bin, csv\noutput.plot_scripts = true\n"
        ),
    );
    let out = dir.path().join("out");
    let o = run(&["eval-grid", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = FieldVolume::decode(&std::fs::read(out.join("green_000.agrn")).unwrap()).unwrap();
    assert_eq!(v.dims, [5, 5, 3]);
    let meta = std::fs::read_to_string(out.join("green_000.meta")).unwrap();
    assert!(meta.contains("omega = 2.5e0"));
    let script = std::fs::read_to_string(out.join("plot_green_000.py")).unwrap();
    assert!(script.contains("green_000.csv"));
    assert!(out.join("green_000.csv").exists());
}

#[test]
fn seismogram_writes_traces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!(
            "run.task = seismogram\n{MEDIUM}seismogram.receiver = 1.0, 0.5, 0.4\nseismogram.peak_frequency = 3\n\
             seismogram.delay = 0.5\nseismogram.dt = 0.004\nseismogram.duration = 3\n"
        ),
    );
    let o = run(&["seismogram", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("seismogram.csv")).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header.split(',').count(), 10);
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 750);
}

#[test]
fn validate_checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!(
            "run.task = validate\n{MEDIUM}frequency.omega = 3\n\
             validate.points = 1.3, 0.7, -0.9, -0.4, 1.6, 0.8\nvalidate.samples = 200\n"
        ),
    );
    for kind in ["residual", "eigen", "quadrature", "kernel-ft"] {
        let o = run(&["validate", kind, "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        assert!(o.status.success(), "{kind}: {}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr));
    }
    assert!(dir.path().join("validate_kernelft.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "run.task = eval-grid\nmedium.kind = I\nmedium.rho = -1\n");
    let o = run(&["eval-grid", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("medium.rho") && stderr.contains("line 3"), "{stderr}");

    let lossy = write_config(
        dir.path(),
        "run.task = eval-grid\nmedium.kind = isotropic\nmedium.rho = 1\nmedium.c11 = 3\nmedium.c44 = 1\nmedium.beta = 0.5\n\
         grid.origin = 1, 0, 0\ngrid.spacing = 1, 1, 1\ngrid.dims = 1, 1, 1\nfrequency.omega = 5\n",
    );
    let o = run(&["eval-grid", "--config", lossy.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn media_list_names_every_kind() {
    let o = run(&["media", "list"]);
    let text = String::from_utf8_lossy(&o.stdout);
    for kind in ["I ", "II ", "III ", "isotropic"] {
        assert!(text.contains(kind), "{text}");
    }
}
