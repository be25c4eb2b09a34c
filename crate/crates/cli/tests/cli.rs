use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qas")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    p.canonicalize().unwrap().display().to_string()
}

fn write_config(dir: &Path, kind: &str, extra: &str) -> PathBuf {
    let body = format!(
        r#"kind = "{kind}"
name = "cli_{kind}"
{extra}
[system]
fcidump = "{}"
split = "{}"
orbital_names = ["1s", "2s"]

[initial]
electrons = 2
ms2 = 0
eigen_indices = [0, -1]

[basis]
times = [0.0, 0.5]

[time]
t_final = 0.6
dt = 0.001

[shots]
shots = 10000
seed = 5
samples = 5
"#,
        fixture("he_631g.fcidump"),
        fixture("he_631g.split")
    );
    let path = dir.join(format!("{kind}.toml"));
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dynamics_is_reproducible_across_workers_and_verifies() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "dynamics", "");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let out = qas(&["dynamics", "--config", s(&cfg), "--workers", "1", "--out", s(&a)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("dynamics.csv  sha256:"), "{stdout}");
    let out = qas(&["dynamics", "--config", s(&cfg), "--workers", "3", "--out", s(&b)]);
    assert!(out.status.success());
    for f in ["dynamics.csv", "summary.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }

    let ok = qas(&["verify", "--dir", s(&a)]);
    assert!(ok.status.success());
    fs::write(a.join("summary.json"), "{}").unwrap();
    let bad = qas(&["verify", "--dir", s(&a)]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("summary.json"));
}

#[test]
fn seed_flag_is_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "dynamics", "");
    let out_dir = tmp.path().join("o");
    let out = qas(&["dynamics", "--config", s(&cfg), "--seed", "77", "--out", s(&out_dir)]);
    assert!(out.status.success());
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["master_seed"], 77);
}

#[test]
fn every_subcommand_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("variance_scan", "variance-scan", "[variance_scan]\nshots = [1000, 10000]\n", "variance_slopes.json"),
        ("trotter_scan", "trotter-scan", "[trotter_scan]\nsteps = [1, 10]\nshots = [10000]\n", "trotter_scan.csv"),
        ("resource_table", "resource-table", "", "resource_table.csv"),
        ("lindep_report", "lindep-report", "[lindep]\ns1_values = [0.5]\n", "lindep.json"),
    ];
    for (kind, sub, extra, file) in cases {
        let cfg = write_config(tmp.path(), kind, extra);
        let out_dir = tmp.path().join(kind);
        let out = qas(&[sub, "--config", s(&cfg), "--out", s(&out_dir)]);
        assert!(out.status.success(), "{sub}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out_dir.join(file).exists(), "{sub}");
        assert!(qas(&["verify", "--dir", s(&out_dir)]).status.success());
    }
}

#[test]
fn kind_mismatch_and_bad_config_fail_cleanly() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "dynamics", "");
    let out = qas(&["trotter-scan", "--config", s(&cfg)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not trotter_scan"));

    let missing = qas(&["dynamics", "--config", s(&tmp.path().join("nope.toml"))]);
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));

    fs::write(tmp.path().join("broken.toml"), "kind = \"dynamics\"\n[time]\nt_final = -1\n").unwrap();
    let broken = qas(&["dynamics", "--config", s(&tmp.path().join("broken.toml"))]);
    assert!(!broken.status.success());
}
