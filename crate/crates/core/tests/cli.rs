use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pfsim_core::cli::config::{ConfigFile, NEON_JSON};
use pfsim_core::wavefield::sinc_sq;

const OUTPUTS: [&str; 5] = [
    "events.csv",
    "summary.json",
    "histogram.svg",
    "density.svg",
    "impacts.svg",
];

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn pfsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfsim")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_is_byte_identical_across_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let neon = configs().join("neon.json");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, workers) in [(&a, "1"), (&b, "4")] {
        let o = pfsim(&[
            "simulate",
            "--config",
            path(&neon),
            "--seed",
            "7",
            "--out-dir",
            path(out),
            "--workers",
            workers,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in OUTPUTS {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    let csv = std::fs::read_to_string(a.join("events.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 5000 + 1);
    assert_eq!(rows[0], "particle_id,slit_index,y_eps_m,theta_rad,y_det_m,x_det_m");
    assert!(csv.contains("# seed=7\n"));
}

#[test]
fn svg_panels_are_self_contained_and_labelled() {
    let dir = tempfile::tempdir().unwrap();
    let electron = configs().join("electron.json");
    let o = pfsim(&[
        "simulate",
        "--config",
        path(&electron),
        "--particles",
        "300",
        "--out-dir",
        path(dir.path()),
    ]);
    assert!(o.status.success());
    for (f, label) in [
        ("histogram.svg", "screen position y (m)"),
        ("density.svg", "scattering angle theta (rad)"),
        ("impacts.svg", "screen position y (m)"),
    ] {
        let svg = std::fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(label), "{f}");
        assert!(!svg.contains("href"), "{f} references external assets");
    }
    let impacts = std::fs::read_to_string(dir.path().join("impacts.svg")).unwrap();
    assert_eq!(impacts.matches("<circle").count(), 300);
}

#[test]
fn analyze_reproduces_simulate_summary() {
    let dir = tempfile::tempdir().unwrap();
    let electron = configs().join("electron.json");
    let o = pfsim(&[
        "simulate",
        "--config",
        path(&electron),
        "--seed",
        "11",
        "--out-dir",
        path(dir.path()),
    ]);
    assert!(o.status.success());
    let events = dir.path().join("events.csv");
    let again = dir.path().join("again.json");
    let o = pfsim(&[
        "analyze",
        "--events",
        path(&events),
        "--config",
        path(&electron),
        "--out",
        path(&again),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        std::fs::read(dir.path().join("summary.json")).unwrap(),
        std::fs::read(&again).unwrap()
    );
}

#[test]
fn invalid_inputs_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let neon = configs().join("neon.json");
    let electron = configs().join("electron.json");

    let o = pfsim(&[
        "simulate",
        "--config",
        path(&neon),
        "--particles",
        "0",
        "--out-dir",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("events.csv").exists());

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        NEON_JSON.replace("\"bins\": 100", "\"bins\": 100,\n  \"colour\": \"red\""),
    )
    .unwrap();
    let o = pfsim(&["simulate", "--config", path(&bad), "--out-dir", path(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("line 12") && stderr.contains("colour"), "{stderr}");

    let tight = dir.path().join("tight.json");
    std::fs::write(
        &tight,
        NEON_JSON.replace("\"slit_width_m\": 2e-6", "\"slit_width_m\": 1.8e-9"),
    )
    .unwrap();
    assert_eq!(
        pfsim(&[
            "density",
            "--config",
            path(&tight),
            "--out",
            path(&dir.path().join("d.csv"))
        ])
        .status
        .code(),
        Some(2)
    );

    let run_dir = dir.path().join("run");
    assert!(pfsim(&[
        "simulate",
        "--config",
        path(&neon),
        "--particles",
        "50",
        "--out-dir",
        path(&run_dir)
    ])
    .status
    .success());
    let events = run_dir.join("events.csv");
    let text = std::fs::read_to_string(&events).unwrap();

    let cut = dir.path().join("cut.csv");
    std::fs::write(&cut, &text[..text.len() / 2]).unwrap();
    let o = pfsim(&[
        "analyze",
        "--events",
        path(&cut),
        "--config",
        path(&neon),
        "--out",
        path(&dir.path().join("x.json")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));

    let lines: Vec<&str> = text.lines().collect();
    let short = dir.path().join("short.csv");
    std::fs::write(&short, lines[..lines.len() - 1].join("\n") + "\n").unwrap();
    let o = pfsim(&[
        "analyze",
        "--events",
        path(&short),
        "--config",
        path(&neon),
        "--out",
        path(&dir.path().join("x.json")),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = pfsim(&[
        "analyze",
        "--events",
        path(&events),
        "--config",
        path(&electron),
        "--out",
        path(&dir.path().join("x.json")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("digest mismatch"));

    assert_eq!(pfsim(&["simulate"]).status.code(), Some(2));
}

fn read_density(file: &Path) -> (Vec<f64>, Vec<f64>) {
    let text = std::fs::read_to_string(file).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta_rad,density_per_rad"));
    lines
        .map(|l| {
            let (t, d) = l.split_once(',').unwrap();
            (t.parse::<f64>().unwrap(), d.parse::<f64>().unwrap())
        })
        .unzip()
}

#[test]
fn density_table_is_normalised_and_even() {
    let dir = tempfile::tempdir().unwrap();
    for (name, mode) in [("electron.json", "approximate"), ("neon.json", "exact")] {
        let out = dir.path().join(format!("{name}.csv"));
        let o = pfsim(&[
            "density",
            "--config",
            path(&configs().join(name)),
            "--points",
            "20001",
            "--out",
            path(&out),
            "--mode",
            mode,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let (t, d) = read_density(&out);
        assert_eq!(t.len(), 20001);
        let integral: f64 = (1..t.len()).map(|i| 0.5 * (d[i] + d[i - 1]) * (t[i] - t[i - 1])).sum();
        assert!((integral - 1.0).abs() < 1e-6, "{name}: {integral}");
        for i in 0..t.len() {
            assert_eq!(d[i], d[t.len() - 1 - i]);
        }
    }
}

#[test]
fn single_slit_density_is_proportional_to_sinc_squared() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("single.json");
    std::fs::write(
        &cfg,
        NEON_JSON.replace("\"slit_separation_m\": 6e-6", "\"slit_separation_m\": 0"),
    )
    .unwrap();
    let out = dir.path().join("d.csv");
    assert!(pfsim(&[
        "density",
        "--config",
        path(&cfg),
        "--points",
        "1001",
        "--out",
        path(&out)
    ])
    .status
    .success());
    let run = ConfigFile::parse(&std::fs::read_to_string(&cfg).unwrap())
        .unwrap()
        .to_run_config()
        .unwrap();
    let (t, d) = read_density(&out);
    let ratio0 = d[500] / sinc_sq(0.0);
    for (theta, rho) in t.iter().zip(&d) {
        let alpha = run.geometry.width * std::f64::consts::PI * theta.sin() / (2.0 * run.beam.lambda0);
        let expected = ratio0 * sinc_sq(alpha);
        assert!((rho - expected).abs() <= 1e-12 * ratio0, "θ={theta}");
    }
}
