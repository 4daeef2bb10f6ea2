//! End-to-end runs through the configuration and output layer.

use std::fs;

use rtstokes::harness::output::{read_norms_csv, NORMS_HEADER};
use rtstokes::harness::{self, experiment_decay_fit, experiment_reversal, Mode, SimConfig};
use rtstokes::InterfaceState;

fn config(dir: &std::path::Path, amp: f64) -> SimConfig {
    let mut c = SimConfig::single_mode(32, 4.0, 1, amp, 1e-2, 0.5);
    c.out_dir = dir.to_path_buf();
    c.output_every = 10;
    c
}

#[test]
fn flat_start_writes_zero_norms() {
    let dir = tempfile::tempdir().unwrap();
    let s = harness::run(&config(dir.path(), 0.0)).unwrap();
    assert!(s.completed());
    let rows = read_norms_csv(&dir.path().join("norms.csv")).unwrap();
    assert!(!rows.is_empty());
    for r in rows {
        assert_eq!([r.l2, r.h3, r.a0, r.a0_nu, r.mean], [0.0; 5]);
    }
}

#[test]
fn stable_run_has_nonincreasing_l2_and_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), 0.1);
    let s = harness::run(&cfg).unwrap();
    let text = fs::read_to_string(dir.path().join("norms.csv")).unwrap();
    assert_eq!(text.lines().next(), Some(NORMS_HEADER));
    let rows = read_norms_csv(&dir.path().join("norms.csv")).unwrap();
    assert!(rows.windows(2).all(|w| w[1].l2 <= w[0].l2 + 1e-12));
    // 50 steps at a stride of 10, endpoints included
    assert_eq!(s.snapshots_written, 6);
    let first = fs::read_to_string(dir.path().join("snapshot_000000.csv")).unwrap();
    assert_eq!(first.lines().next(), Some("alpha,h"));
    assert_eq!(first.lines().count(), 33);
    assert!(dir.path().join("snapshot_000005.csv").exists());
}

#[test]
fn curve_mode_snapshots_carry_both_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), 0.1);
    cfg.mode = Mode::Curve;
    let s = harness::run(&cfg).unwrap();
    assert!(matches!(s.final_state, InterfaceState::Curve(_)));
    let first = fs::read_to_string(dir.path().join("snapshot_000000.csv")).unwrap();
    assert_eq!(first.lines().next(), Some("alpha,z1,z2"));
}

#[test]
fn runs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let text = "mode = \"graph\"\nrho_minus = 3.0\nrho_plus = 1.0\nn = 32\ndt = 0.01\nt_end = 0.2\n\
                initial = \"random_analytic\"\namp = 0.05\ninitial_nu = 0.5\nseed = 7\n";
    for dir in [&a, &b] {
        let mut cfg = SimConfig::from_toml_str(text).unwrap();
        cfg.out_dir = dir.path().to_path_buf();
        harness::run(&cfg).unwrap();
    }
    for name in ["norms.csv", "snapshot_000000.csv", "snapshot_000001.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn result_json_has_the_documented_keys() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = SimConfig::single_mode(32, 4.0, 2, 1e-5, 1e-2, 1.0);
    cfg.out_dir = dir.path().to_path_buf();
    let r = experiment_decay_fit(&cfg, 0.01).unwrap();
    assert!(r.pass, "{:?}", r.failures());
    let path = dir.path().join("result.json");
    r.write_json(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    for key in ["name", "pass", "measured", "expected", "tolerance", "runtime_seconds"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["name"], "decay_fit");
    assert!(v["measured"]["rate_k2"].as_f64().is_some());
}

#[test]
fn reversal_over_zero_time_is_the_identity() {
    let cfg = SimConfig::single_mode(32, 4.0, 1, 0.1, 1e-2, 1.0);
    let r = experiment_reversal(&cfg, 0.0).unwrap();
    assert_eq!(r.measured["recovery_error"], 0.0);
    assert!(r.pass);
}

#[test]
fn config_round_trips_through_toml() {
    let cfg = SimConfig::single_mode(64, 2.0, 3, 0.01, 1e-3, 2.0);
    let back = SimConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
    assert_eq!(cfg, back);
    assert!(SimConfig::from_toml_str("mode = \"graph\"\nbogus = 1\n").is_err());
}
