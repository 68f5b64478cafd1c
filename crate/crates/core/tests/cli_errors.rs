//! Exit-code taxonomy of the CLI: 0 success, 1 domain/connectivity
//! failure, 2 usage/parse failure. Scripts regenerating plot data rely on
//! the distinction.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .join("fixtures")
}

fn run(args: &[&str]) -> (i32, String) {
    let out_dir = tempfile::tempdir().unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_stratoplan"))
        .args(args)
        .arg("--out")
        .arg(out_dir.path())
        .output()
        .expect("CLI runs");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stderr).into_owned(),
    )
}

fn study() -> String {
    fixtures().join("study.json").to_str().unwrap().to_string()
}

#[test]
fn success_is_exit_zero() {
    let (code, _) = run(&["--config", &study(), "plan"]);
    assert_eq!(code, 0);
}

#[test]
fn missing_config_flag_is_usage() {
    let (code, err) = run(&["plan"]);
    assert_eq!(code, 2, "stderr: {err}");
    assert!(err.contains("--config"));
}

#[test]
fn unknown_subcommand_is_usage() {
    let (code, _) = run(&["--config", &study(), "frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn missing_route_file_is_usage() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("study.json");
    fs::write(
        &config,
        r#"{
            "route": "no_such_route.geojson",
            "fso_params": "also_missing.json",
            "payload_catalog": "missing.json"
        }"#,
    )
    .unwrap();
    let (code, err) = run(&["--config", config.to_str().unwrap(), "plan"]);
    assert_eq!(code, 2, "stderr: {err}");
    assert!(err.contains("no_such_route.geojson"));
}

#[test]
fn degenerate_route_is_domain_failure() {
    let dir = tempfile::tempdir().unwrap();
    let route = dir.path().join("route.csv");
    fs::write(&route, "lat,lon\n0.0,0.0\n").unwrap();
    let config = dir.path().join("study.json");
    fs::write(
        &config,
        format!(
            r#"{{
                "route": "{}",
                "fso_params": "{}",
                "payload_catalog": "{}"
            }}"#,
            route.display(),
            fixtures().join("fso/fso_params.json").display(),
            fixtures().join("payload/payload_catalog.json").display()
        ),
    )
    .unwrap();
    let (code, err) = run(&["--config", config.to_str().unwrap(), "plan"]);
    assert_eq!(code, 1, "stderr: {err}");
    assert!(err.contains("at least 2 vertices"));
}

#[test]
fn invalid_sweep_range_is_usage() {
    let (code, err) = run(&[
        "--config",
        &study(),
        "linkbudget",
        "--kind",
        "h2g",
        "--d-min",
        "300",
        "--d-max",
        "25",
    ]);
    assert_eq!(code, 2, "stderr: {err}");
    assert!(err.contains("invalid sweep range"));
}

#[test]
fn stranded_nodes_are_domain_failure_listing_ids() {
    // Two-hop plan against a study whose gateway cannot reach either node.
    let dir = tempfile::tempdir().unwrap();
    let gw = dir.path().join("gw.json");
    fs::write(
        &gw,
        r#"[{"id":"gw-far","lat":0.0,"lon":30.0,"terminal":"h2g"}]"#,
    )
    .unwrap();
    let config = dir.path().join("study.json");
    fs::write(
        &config,
        format!(
            r#"{{
                "route": "{}",
                "gateways": "{}",
                "fso_params": "{}",
                "payload_catalog": "{}",
                "h2g_max_slant_km": 100.0,
                "h2h_max_range_km": 100.0
            }}"#,
            fixtures().join("routes/straight_4504km.geojson").display(),
            gw.display(),
            fixtures().join("fso/fso_params.json").display(),
            fixtures().join("payload/payload_catalog.json").display()
        ),
    )
    .unwrap();
    let plan = fixtures().join("plans/two_hop_plan.json");
    let (code, err) = run(&[
        "--config",
        config.to_str().unwrap(),
        "backhaul",
        "--plan",
        plan.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "stderr: {err}");
    assert!(
        err.contains("haps-001") && err.contains("haps-002"),
        "stranded ids should be listed: {err}"
    );
}

#[test]
fn unreachable_anchor_is_domain_failure() {
    let (code, err) = run(&[
        "--config",
        &study(),
        "calibrate",
        "--h2g-rate-bps",
        "1e40",
    ]);
    assert_eq!(code, 1, "stderr: {err}");
    assert!(err.contains("reachable"));
}

#[test]
fn help_documents_units() {
    let output = Command::new(env!("CARGO_BIN_EXE_stratoplan"))
        .arg("--help")
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    for unit in ["km", "dBm", "bit/s"] {
        assert!(text.contains(unit), "--help should document {unit}");
    }
    for sub in ["plan", "linkbudget", "backhaul", "dimension", "calibrate"] {
        assert!(text.contains(sub), "--help should list {sub}");
    }
}

#[test]
fn no_output_files_on_failure() {
    let out_dir = tempfile::tempdir().unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_stratoplan"))
        .args([
            "--config",
            &study(),
            "linkbudget",
            "--kind",
            "h2g",
            "--d-min",
            "300",
            "--d-max",
            "25",
        ])
        .arg("--out")
        .arg(out_dir.path())
        .output()
        .unwrap();
    assert!(!output.status.success());
    let leftovers: Vec<_> = fs::read_dir(out_dir.path()).unwrap().collect();
    assert!(leftovers.is_empty(), "failed command left partial artifacts");
}
