use std::process::Command;

fn cli() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cftp-lab"));
    c.env_remove("CFTP_LAB_SEED");
    c
}

#[test]
fn validate_passes_and_prints_csv() {
    let out = cli().arg("validate").output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("check,mode,value,tolerance,pass\n"));
    assert!(!csv.contains(",false\n"));
}

#[test]
fn output_files_and_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "extents = 15x15\nreplicas = 200\nmax_r = 3\n").unwrap();
    let target = dir.path().join("diag.csv");
    let status = cli()
        .args(["diagonal", "--config"])
        .arg(&conf)
        .args(["--set", "seed=5", "--workers", "2", "-o"])
        .arg(&target)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let csv = std::fs::read_to_string(&target).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let env: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(target.with_extension("json")).unwrap()).unwrap();
    assert_eq!(env["experiment"], "diagonal");
    assert_eq!(env["seed"], 5);
    assert_eq!(env["config"]["extents"], serde_json::json!([15, 15]));
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        let out = cli()
            .env("CFTP_LAB_SEED", seed)
            .args(["sample", "--extents", "9x9", "--replicas", "50"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("12"), run("12"));
    assert_ne!(run("12"), run("13"));
}

#[test]
fn exit_codes() {
    let bad = cli().args(["radius", "--p", "1.5"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let unknown = cli().args(["radius", "--set", "colour=3"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    let capped = cli()
        .args(["sample", "--extents", "9x9", "--replicas", "20", "--set", "horizon_cap=1", "--set", "model=ising", "--set", "beta=2"])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(1), "{}", String::from_utf8_lossy(&capped.stderr));
}
