use cohomcli::gallery::{gallery, gallery_spec};
use cohomcli::spec::{SpecParseError, VarietySpec};
use cohomcli::{run, run_gallery, Sections};
use std::process::Command;

fn logfrob(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_logfrob")).args(args).output().expect("binary runs")
}

fn bad_fan_json() -> String {
    r#"{"p": 5, "fan": {"rays": [[2, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2], [0, 2]]}, "divisor_rays": []}"#.into()
}

#[test]
fn malformed_fan_names_the_ray() {
    let spec = VarietySpec::from_json(&bad_fan_json()).unwrap();
    let err = spec.validate(None, None).unwrap_err();
    assert!(matches!(err, SpecParseError::Geometry { .. }), "{err:?}");
    let msg = err.to_string();
    assert!(msg.contains("ray 0") && msg.contains("[2, 0]"), "{msg}");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, bad_fan_json()).unwrap();
    let out = logfrob(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ray 0"));
}

#[test]
fn unknown_fields_and_checks_are_usage_errors() {
    let extra = bad_fan_json().replace("\"divisor_rays\": []", "\"divisor_rays\": [], \"colour\": 3");
    assert!(matches!(VarietySpec::from_json(&extra), Err(SpecParseError::Json(_))));
    assert_eq!(logfrob(&["verify", "--id", "gm_p5", "--checks", "nonsense"]).status.code(), Some(2));
    assert_eq!(logfrob(&["verify", "--id", "no_such_member"]).status.code(), Some(2));
    assert_eq!(logfrob(&["verify"]).status.code(), Some(2));
    assert!(matches!(gallery_spec("no_such_member"), Err(SpecParseError::UnknownGalleryId(_))));
}

#[test]
fn non_prime_is_rejected() {
    let json = bad_fan_json().replace("\"p\": 5", "\"p\": 6");
    let err = VarietySpec::from_json(&json).and_then(|s| s.validate(None, None)).unwrap_err();
    assert!(matches!(err, SpecParseError::NotPrime(6)), "{err:?}");
}

#[test]
fn spec_round_trips_through_json() {
    for (_, spec) in gallery() {
        assert_eq!(VarietySpec::from_json(&spec.to_json()).unwrap(), spec);
    }
}

#[test]
fn exit_code_reflects_failures() {
    assert_eq!(logfrob(&["verify", "--id", "gm_p5"]).status.code(), Some(0));
    // A radius of one cuts through the support of P².
    let out = logfrob(&["verify", "--id", "p2_p5_d0", "--weight-radius", "1", "--checks", "shell"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "FAIL");
    assert!(report["checks"][0]["artifact"]["witness"].is_array());
}

#[test]
fn report_layout() {
    let out = logfrob(&["verify", "--id", "gm_p5"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "logfrob.report.v1");
    assert_eq!(v["tool"]["name"], "logfrob");
    assert_eq!(v["id"], "gm_p5");
    assert_eq!(v["cohomology"]["de_rham"], serde_json::json!([1, 1, 0]));
    assert_eq!(v["checks"].as_array().unwrap().len(), 10);

    let tsv = logfrob(&["cohomology", "--id", "gm_p5", "--format", "tsv"]);
    let text = String::from_utf8(tsv.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id\ttable\tkey\tvalue"));
    assert!(text.contains("gm_p5\tde_rham\tq=1\t1"));
    assert!(lines.all(|l| l.split('\t').count() == 4));

    let ss = logfrob(&["weight-ss", "--id", "gm_p5"]);
    let v: serde_json::Value = serde_json::from_slice(&ss.stdout).unwrap();
    assert_eq!(v["weight_ss"]["degeneration"], 2);
    assert_eq!(v["hodge_ss"]["degeneration"], 1);
    assert!(v.get("cohomology").is_none());
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let to_file = logfrob(&["verify", "--id", "p2_p5_d1", "--out", path.to_str().unwrap()]);
    assert!(to_file.stdout.is_empty());
    let to_stdout = logfrob(&["verify", "--id", "p2_p5_d1"]);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let a = logfrob(&["--threads", "1", "gallery", "--id", "gm_p5", "--id", "p2_p5_d2"]);
    let b = logfrob(&["--threads", "4", "gallery", "--id", "gm_p5", "--id", "p2_p5_d2"]);
    let c = Command::new(env!("CARGO_BIN_EXE_logfrob"))
        .env("LOGFROB_THREADS", "3")
        .args(["gallery", "--id", "gm_p5", "--id", "p2_p5_d2"])
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn library_and_binary_agree() {
    let p = gallery_spec("p1_p5_noD").unwrap().validate(None, None).unwrap();
    let lib = run(&p, Some("p1_p5_noD"), Sections::Full).to_json();
    let bin = logfrob(&["verify", "--id", "p1_p5_noD"]);
    assert_eq!(lib.as_bytes(), bin.stdout.as_slice());
}

#[test]
fn gallery_subset_and_unknown_id() {
    let ids = vec!["p1_p5_noD".to_string()];
    let r = run_gallery(Some(&ids), None, Some(&["shell".to_string()])).unwrap();
    assert_eq!(r.members.len(), 1);
    assert_eq!(r.members[0].checks.len(), 1);
    let bad = vec!["zzz".to_string()];
    assert!(matches!(run_gallery(Some(&bad), None, None), Err(SpecParseError::UnknownGalleryId(_))));
}
