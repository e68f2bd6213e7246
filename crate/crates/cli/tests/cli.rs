use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ffvar(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffvar")).current_dir(dir).args(args).output().expect("spawn ffvar")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn selftest_passes() {
    let dir = TempDir::new().unwrap();
    let o = ffvar(dir.path(), &["selftest", "--out", "self.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("self.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("check,status,detail"));
    let rows: Vec<_> = lines.collect();
    assert!(rows.len() >= 10);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("pass")), "{csv}");
}

#[test]
fn sidecar_records_configuration() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "v.toml", "kind = \"variance\"\nn = [1, 2]\nseed = 4\n");
    let o = ffvar(dir.path(), &["--config", "v.toml", "--q", "5", "--out", "out/v.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/v.json")).unwrap()).unwrap();
    assert_eq!(side["kind"], "variance");
    assert_eq!(side["config"]["seed"], 4);
    assert_eq!(side["config"]["q"][0], 5);
    assert!(side["failures"].as_array().unwrap().is_empty());
    let csv = fs::read_to_string(dir.path().join("out/v.csv")).unwrap();
    assert!(csv.starts_with("q,n,phi,mean,trivial_trace,brute_variance,spectral_variance"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "s.toml", "kind = \"sweep\"\nq = [3, 5]\nn = [1, 2, 3]\nseed = 7\n");
    write(dir.path(), "r.toml", "kind = \"rmt\"\nseed = 3\n[rmt]\ndims = [2, 3]\nmax_n = 4\nsamples = 9000\n");
    for (cfg, threads) in [("s.toml", ["1", "4"]), ("r.toml", ["1", "3"])] {
        let mut outputs = Vec::new();
        for (i, t) in threads.iter().enumerate() {
            let out = format!("{cfg}.{i}.csv");
            let o = ffvar(dir.path(), &["--config", cfg, "--threads", t, "--out", &out]);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            outputs.push(fs::read(dir.path().join(&out)).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{cfg}");
    }
}

#[test]
fn config_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "typo.toml", "kind = \"lfun\"\nqq = 3\n");
    write(dir.path(), "notsf.toml", "kind = \"lfun\"\n[modulus]\ncoeffs = [0, 0, 1]\n");
    write(dir.path(), "thm.toml", "kind = \"variance\"\ntheorem_mode = true\n[modulus]\ncoeffs = [1, 0, 1]\n");
    let cases: [&[&str]; 6] = [
        &["--config", "typo.toml"],
        &["--config", "notsf.toml"],
        &["--config", "missing.toml"],
        &["lfun", "--q", "3,5"],
        &["lfun", "--kind", "rmt"],
        &["--q", "6"],
    ];
    for args in cases {
        let o = ffvar(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = ffvar(dir.path(), &["--config", "thm.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("theorem mode requires gcd(Q, s) = t"), "{}", stderr(&o));
    assert!(!dir.path().join("variance.csv").exists());
}

#[test]
fn oversized_runs_exit_3() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "big.toml", "kind = \"variance\"\nq = [13]\nn = [12]\n");
    let o = ffvar(dir.path(), &["--config", "big.toml"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    write(dir.path(), "wide.toml", "kind = \"lfun\"\n[modulus]\ndegree = 16\n");
    let o = ffvar(dir.path(), &["--config", "wide.toml"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn euler_and_lfun_kinds_run() {
    let dir = TempDir::new().unwrap();
    for kind in ["euler", "lfun"] {
        let o = ffvar(dir.path(), &[kind, "--q", "5"]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stderr(&o));
        assert!(dir.path().join(format!("{kind}.csv")).exists());
        assert!(dir.path().join(format!("{kind}.json")).exists());
    }
}
