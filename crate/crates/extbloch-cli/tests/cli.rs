//! CLI behaviors: exit codes, output determinism, method agreement.

use std::process::Command;

fn fixture_path() -> String {
    format!(
        "{}/../extbloch/fixtures/m004.tri.json",
        env!("CARGO_MANIFEST_DIR")
    )
}

fn run(args: &[&str]) -> (String, String, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_extbloch"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code(),
    )
}

#[test]
fn parse_errors_exit_1_with_location() {
    let dir = std::env::temp_dir().join("extbloch-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(
        &path,
        r#"{
            "name": "broken",
            "tetrahedra": [
                { "neighbors": [1,1,1,1], "gluings": [[1,2,3],[0,2,3],[0,1,3],[0,2,1]] },
                { "neighbors": [0,0,0,0], "gluings": [[1,2,3],[0,2,3],[0,1,3],[0,1,2]] }
            ]
        }"#,
    )
    .unwrap();
    let (_, stderr, code) = run(&["invariants", path.to_str().unwrap()]);
    assert_eq!(code, Some(1));
    assert!(
        stderr.contains("tet 0") && stderr.contains("face 3"),
        "error should name the offending face: {stderr}"
    );

    let (_, _, code) = run(&["invariants", "/nonexistent/file.json"]);
    assert_eq!(code, Some(1));
}

#[test]
fn bad_fill_specs_rejected() {
    let fx = fixture_path();
    let (_, stderr, code) = run(&["invariants", &fx, "--fill", "0=4,2"]);
    assert_eq!(code, Some(1), "non-coprime filling: {stderr}");
    let (_, _, code) = run(&["invariants", &fx, "--fill", "3=1,2"]);
    assert_eq!(code, Some(1), "filling a nonexistent cusp");
    let (_, _, code) = run(&["invariants", &fx, "--fill", "junk"]);
    assert_eq!(code, Some(1));
}

#[test]
fn json_output_is_deterministic() {
    let fx = fixture_path();
    let args = [
        "invariants",
        fx.as_str(),
        "--fill",
        "0=5,1",
        "--method",
        "both",
        "--format",
        "json",
        "--seed",
        "11",
    ];
    let (out1, _, code1) = run(&args);
    let (out2, _, code2) = run(&args);
    assert_eq!(code1, Some(0));
    assert_eq!(code2, Some(0));
    assert_eq!(out1, out2, "reruns must be byte-identical");
    // Schema keys present in order.
    let doc: serde_json::Value = serde_json::from_str(&out1).unwrap();
    let reports = doc.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for (r, method) in reports.iter().zip(["direct", "corrected"]) {
        assert_eq!(r["method"].as_str().unwrap(), method);
        assert!(r["volume"].is_f64());
        assert!(r["cs_mod_pi2"].is_f64());
        assert!(r["cs_over_2pi2_mod_half"].is_f64());
        assert!(r["beta"].is_array());
        assert!(r["warnings"].as_array().unwrap().is_empty());
    }
    // Both methods report the same filled volume.
    let v0 = reports[0]["volume"].as_f64().unwrap();
    let v1 = reports[1]["volume"].as_f64().unwrap();
    assert!((v0 - v1).abs() < 1e-9);
}

#[test]
fn lens_and_five_term_commands() {
    let (out, _, code) = run(&["lens", "5", "--format", "json"]);
    assert_eq!(code, Some(0));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(doc["residual"].as_f64().unwrap() < 1e-9);

    let (out, _, code) = run(&["five-term-check", "100", "--seed", "7"]);
    assert_eq!(code, Some(0));
    assert!(out.contains("max |sum R|"));

    let (out, _, code) = run(&["pachner", &fixture_path(), "--move", "23:face=0/2"]);
    assert_eq!(code, Some(0), "pachner failed: {out}");
    assert!(out.contains("invariant delta"));
}

#[test]
fn env_tolerance_is_honored() {
    let fx = fixture_path();
    let out = Command::new(env!("CARGO_BIN_EXE_extbloch"))
        .args(["invariants", &fx, "--method", "both", "--format", "json"])
        .env("EXTBLOCH_TOL", "1e-3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn labeled_document_through_cli() {
    // Serialize a lens complex (with its G-labels) and run invariants on it.
    let chain = extbloch::tricomplex::lens_chain(5, 0.37, 1.01).unwrap();
    let tri = extbloch::tricomplex::cycle_from_homogeneous_chain(&chain).unwrap();
    let text = extbloch::tricomplex::serialize(&tri);
    let dir = std::env::temp_dir().join("extbloch-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lens5.tri.json");
    std::fs::write(&path, text).unwrap();

    let (out, stderr, code) = run(&[
        "invariants",
        path.to_str().unwrap(),
        "--format",
        "json",
        "--seed",
        "3",
    ]);
    assert_eq!(code, Some(0), "labeled run failed: {stderr}");
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let vol = doc["volume"].as_f64().unwrap();
    assert!(vol.abs() < 1e-9, "lens volume {vol}");
    let cs = doc["cs_mod_pi2"].as_f64().unwrap();
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    // cs = −Re R(β̂) ≡ −π²/5 mod π².
    let want = (-pi2 / 5.0f64).rem_euclid(pi2);
    let d = (cs - want).rem_euclid(pi2);
    assert!(d.min(pi2 - d) < 1e-9, "cs {cs} vs {want}");

    // Filling a labeled document is rejected as unsupported (exit 2).
    let (_, _, code) = run(&["invariants", path.to_str().unwrap(), "--fill", "0=1,2"]);
    assert_eq!(code, Some(2));
}

#[test]
fn lens_n1_is_trivial() {
    let (out, _, code) = run(&["lens", "1", "--format", "json"]);
    assert_eq!(code, Some(0));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(doc["residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(doc["report"]["beta"].as_array().unwrap().len(), 0);
}
