use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bbforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbforge"))
        .args(args)
        .env("BBFORGE_THREADS", "2")
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(dir: &Path, cmd: &str, config: &Path, extra: &[&str]) -> Output {
    let out = dir.join("out");
    let mut args = vec![cmd, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    bbforge(&args, dir)
}

fn read_json(path: PathBuf) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const DEPHASING: &str = r#"{"model": {"preset": "dephasing", "g": 1.0}, "probe_time": 0.01}"#;

#[test]
fn malformed_json_exits_2() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "bad.json", r#"{"model": {"preset": "deph"#);
    let out = run(tmp.path(), "simulate", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed config"));
}

#[test]
fn missing_config_and_bad_flags_exit_2() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(bbforge(&["simulate"], tmp.path()).status.code(), Some(2));
    assert_eq!(bbforge(&["frobnicate"], tmp.path()).status.code(), Some(2));
    let cfg = write_config(tmp.path(), "c.json", DEPHASING);
    assert_eq!(run(tmp.path(), "tomography", &cfg, &["--probe-time", "-1"]).status.code(), Some(2));
}

#[test]
fn zero_hamiltonian_trajectory_is_constant() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"model": {"preset": "zero_noise"}, "probe_time": 0.01, "simulation": {"duration": 2.0, "steps": 20}}"#,
    );
    let out = run(tmp.path(), "simulate", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(tmp.path().join("out/trajectory.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["time", "trace_distance"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 21);
    for r in rows {
        assert_eq!(r[1].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn tomography_of_dephasing_and_identity() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", DEPHASING);
    assert_eq!(run(tmp.path(), "tomography", &cfg, &[]).status.code(), Some(0));
    let chi = read_json(tmp.path().join("out/chi.json"));
    assert_eq!(chi["basis"][3], "Z");
    let im_z0 = chi["entries"][3][0][1].as_f64().unwrap();
    assert!((im_z0 + 0.005).abs() < 1e-6, "{im_z0}");

    let id = write_config(tmp.path(), "id.json", r#"{"model": {"preset": "zero_noise"}, "probe_time": 0.01}"#);
    assert_eq!(run(tmp.path(), "tomography", &id, &[]).status.code(), Some(0));
    let chi = read_json(tmp.path().join("out/chi.json"));
    assert!((chi["entries"][0][0][0].as_f64().unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn synthesize_storage_on_dephasing() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", DEPHASING);
    let out = run(tmp.path(), "synthesize", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("|G| = 2"));
    let res = read_json(tmp.path().join("out/synthesis.json"));
    let axis = &res["group"]["axis_angles"][1]["axis"];
    assert!(axis[2].as_f64().unwrap().abs() < 1e-9);
    assert!((res["group"]["axis_angles"][1]["angle"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn synthesize_heisenberg_and_zero_noise() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "heis.json",
        r#"{"model": {"preset": "heisenberg_dephasing", "j": 1.0, "g1": 0.3, "g2": 0.2},
            "target": {"kind": "two_qubit",
                       "wanted": [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]},
            "probe_time": 1e-5}"#,
    );
    let out = run(tmp.path(), "synthesize", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let res = read_json(tmp.path().join("out/synthesis.json"));
    assert_eq!(res["group"]["size"], 2);
    // −XX: anti-diagonal with entries −1
    let g1 = &res["group"]["pulses"][1];
    for i in 0..4 {
        for j in 0..4 {
            let re = g1[i][j][0].as_f64().unwrap();
            let want = if i + j == 3 { -1.0 } else { 0.0 };
            assert!((re - want).abs() < 1e-6, "({i},{j}) = {re}");
        }
    }

    let zero = write_config(tmp.path(), "zero.json", r#"{"model": {"preset": "zero_noise"}, "probe_time": 0.01}"#);
    assert_eq!(run(tmp.path(), "synthesize", &zero, &[]).status.code(), Some(0));
    assert_eq!(read_json(tmp.path().join("out/synthesis.json"))["group"]["size"], 1);
}

#[test]
fn verify_reads_a_synthesis_result() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", DEPHASING);
    assert_eq!(run(tmp.path(), "synthesize", &cfg, &[]).status.code(), Some(0));
    let ver = write_config(
        tmp.path(),
        "v.json",
        r#"{"model": {"preset": "dephasing", "g": 1.0}, "probe_time": 0.01, "group": {"file": "out/synthesis.json"}}"#,
    );
    assert_eq!(run(tmp.path(), "verify", &ver, &[]).status.code(), Some(0));
    let v = read_json(tmp.path().join("out/verify.json"));
    assert!(v["decoupled"]["value"].as_f64().unwrap() < 1e-12);
    assert!(v["free"]["value"].as_f64().unwrap() > 0.1);
}

#[test]
fn optimize_converges_and_reruns_byte_identically() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", DEPHASING);
    let out = run(tmp.path(), "optimize", &cfg, &["--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv1 = std::fs::read(tmp.path().join("out/generations.csv")).unwrap();
    let best1 = std::fs::read(tmp.path().join("out/best.json")).unwrap();
    assert!(String::from_utf8_lossy(&csv1).starts_with("generation,best_J,mean_J,group_size,converged\n"));
    let best = read_json(tmp.path().join("out/best.json"));
    assert_eq!(best["best_group"]["size"], 2);
    assert!(best["records"].as_array().unwrap().len() <= 20);

    assert_eq!(run(tmp.path(), "optimize", &cfg, &["--seed", "42"]).status.code(), Some(0));
    assert_eq!(std::fs::read(tmp.path().join("out/generations.csv")).unwrap(), csv1);
    assert_eq!(std::fs::read(tmp.path().join("out/best.json")).unwrap(), best1);
}

#[test]
fn zero_tolerance_with_one_generation_exits_4() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"model": {"preset": "dephasing", "g": 1.0}, "probe_time": 0.01,
            "loop": {"generations": 1, "tolerance": 0.0, "population": 8}}"#,
    );
    let out = run(tmp.path(), "optimize", &cfg, &[]);
    assert_eq!(out.status.code(), Some(4));
    let best = read_json(tmp.path().join("out/best.json"));
    assert_eq!(best["converged"], false);
    assert!(best["best_group"]["size"].as_u64().unwrap() >= 1);
}

#[test]
fn shipped_configs_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = bbforge::cli::ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        cfg.build_model().unwrap();
        cfg.build_group().unwrap();
    }
}
