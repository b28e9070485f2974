//! End-to-end runs of the command-line binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectroqsim"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// The reduced study shrunk to a few seconds of work.
fn tiny_config(dir: &Path) {
    let text = String::from_utf8(run(dir, &["configs", "paper-2site-reduced"]).stdout).unwrap();
    let text = text
        .replace("samples = 200", "samples = 24")
        .replace("samples = 10", "samples = 3");
    fs::write(dir.join("tiny.toml"), text).unwrap();
}

#[test]
fn lists_and_prints_bundled_configs() {
    let dir = tempfile::tempdir().unwrap();
    let names = stdout(&run(dir.path(), &["configs"]));
    assert_eq!(
        names.lines().collect::<Vec<_>>(),
        ["paper-2site", "paper-2site-reduced", "fmo-appendixE"]
    );
    assert!(stdout(&run(dir.path(), &["configs", "fmo-appendixE.cfg"])).contains("[resources]"));
}

#[test]
fn validate_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&run(dir.path(), &["validate"]));
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
}

#[test]
fn resources_writes_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&run(
        dir.path(),
        &[
            "resources",
            "--scenario",
            "fmo",
            "--dw3-min",
            "40",
            "--dw3-max",
            "40",
            "--out",
            "r.csv",
        ],
    ));
    assert!(
        out.contains("N1 = 515") && out.contains("N3 = 464"),
        "{out}"
    );
    assert!(out.contains("SQSP = 1237  PQP = 1403"), "{out}");
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);

    let out = stdout(&run(
        dir.path(),
        &["resources", "--config", "fmo-appendixE", "--out", "all.csv"],
    ));
    assert!(out.contains("delta_omega3 = 10"), "{out}");
    assert_eq!(
        fs::read_to_string(dir.path().join("all.csv"))
            .unwrap()
            .lines()
            .count(),
        52
    );
}

#[test]
fn simulate_postprocess_compare() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    tiny_config(d);
    for p in ["sqsp", "pqp"] {
        let ledger = format!("{p}.csv");
        let out = stdout(&run(
            d,
            &[
                "simulate",
                "--config",
                "tiny.toml",
                "--protocol",
                p,
                "--ledger",
                &ledger,
                "--max-blocks",
                "100",
            ],
        ));
        assert!(out.contains("100 blocks computed"), "{out}");
        // an interrupted ledger cannot be overwritten by accident
        let o = run(
            d,
            &[
                "simulate",
                "--config",
                "tiny.toml",
                "--protocol",
                p,
                "--ledger",
                &ledger,
            ],
        );
        assert!(!o.status.success() && String::from_utf8_lossy(&o.stderr).contains("--resume"));
        let out = stdout(&run(
            d,
            &[
                "simulate",
                "--config",
                "tiny.toml",
                "--protocol",
                p,
                "--ledger",
                &ledger,
                "--resume",
                "--workers",
                "2",
            ],
        ));
        assert!(out.contains("100 reused, 0 remaining"), "{out}");
    }

    let pp = d.join("pp");
    stdout(&run(
        d,
        &[
            "postprocess",
            "--ledger",
            "pqp.csv",
            "--out",
            "pp",
            "--shot-noise-eps",
            "1e-5",
            "--noise-seed",
            "3",
        ],
    ));
    let spectrum = fs::read_to_string(pp.join("spectrum.csv")).unwrap();
    assert_eq!(
        spectrum.lines().next().unwrap(),
        "omega1_cm,t2_fs,omega3_cm,re,im,abs"
    );
    assert_eq!(spectrum.lines().count(), 1 + 24 * 3 * 3);
    let meta = fs::read_to_string(pp.join("spectrum_meta.toml")).unwrap();
    assert!(
        meta.contains("normalized = true")
            && meta.contains("shot_noise_eps = 0.00001")
            && meta.contains("noise_seed = 3"),
        "{meta}"
    );
    let peaks = fs::read_to_string(pp.join("peaks.csv")).unwrap();
    assert_eq!(peaks.lines().count(), 1 + 2 * 3 * 3);

    let out = stdout(&run(
        d,
        &[
            "compare", "--sqsp", "sqsp.csv", "--pqp", "pqp.csv", "--out", ".",
        ],
    ));
    assert!(
        out.contains("peak correlations") && out.contains("detuned"),
        "{out}"
    );
    assert_eq!(
        fs::read_to_string(d.join("compare.csv"))
            .unwrap()
            .lines()
            .count(),
        5
    );

    // ledgers in the wrong order are refused
    let o = run(d, &["compare", "--sqsp", "pqp.csv", "--pqp", "sqsp.csv"]);
    assert!(!o.status.success());
}

#[test]
fn bad_config_reports_the_field() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "protocol = \"sqsp\"\n[grids.t3]\nsamples = 4\nstep_fs = 1.25\nlayers_per_sample = 1\n[noise]\ngama_z_cm = 1.0\n").unwrap();
    let o = run(dir.path(), &["simulate", "--config", "bad.toml"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("gama_z_cm") && err.contains("line 7"), "{err}");
}
