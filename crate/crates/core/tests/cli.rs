use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sothardy::cli::{parse_spec, run_spec, Claim, Command as Cmd, ParsedSpec, RunConfig};
use sothardy::gallery::{GalleryName, GallerySpec};

const BIN: &str = env!("CARGO_BIN_EXE_sothardy");

fn schemas_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas")
}

fn validator(name: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(schemas_dir().join(format!("{name}.schema.json"))).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn sothardy(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn isometry_example_passes_with_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "rotation4.json", r#"{"type":"rotation_symbol","dim":4}"#);
    let out = dir.path().join("report.json");
    let o = sothardy(&["verify", "--claim", "isometry", "--spec", s(&spec), "--p", "2", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1, "one-line summary: {stdout:?}");
    assert!(stdout.contains("PASS"));
    let report: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert!(validator("verification_report").is_valid(&report));
    let top = report["rows"].as_array().unwrap().last().unwrap();
    assert_eq!(top["n_points"], 4096);
    assert!(top["rel_dev"].as_f64().unwrap() <= 1e-3);
}

#[test]
fn arc_norm_csv_has_harmonic_row() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "arc3.json", r#"{"type":"arc_multiplier","dim":3}"#);
    let o = sothardy(&["norm", "--spec", s(&spec), "--p", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "quantity,radius,value");
    assert!(lines[1].starts_with("name,"));
    let row = lines.iter().find(|l| l.starts_with("sot_norm_pow_p,")).unwrap();
    let value: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    let expected = 0.5 + 1.0 + 1.0 / 2.0 + 1.0 / 3.0;
    assert!((value - expected).abs() < 1e-12, "{value} vs {expected}");
    // Summary goes to stderr when the artifact takes stdout.
    assert!(String::from_utf8(o.stderr).unwrap().starts_with("norm:"));
}

#[test]
fn poisson_of_constant_echoes_the_constant() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "const.json", r#"{"type":"constant","value":[[[1,2],[0,-1]],[[0.5,0],[3,0]]]}"#);
    let o = sothardy(&["poisson", "--spec", s(&spec), "--zeta", "0.3", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let expected = [[(1.0, 2.0), (0.0, -1.0)], [(0.5, 0.0), (3.0, 0.0)]];
    for (i, row) in expected.iter().enumerate() {
        for (j, (re, im)) in row.iter().enumerate() {
            let got = &v["value"][i][j];
            assert!((got[0].as_f64().unwrap() - re).abs() < 1e-13);
            assert!((got[1].as_f64().unwrap() - im).abs() < 1e-13);
        }
    }
}

#[test]
fn exit_status_contract() {
    let dir = tempfile::tempdir().unwrap();
    let rot = write_spec(dir.path(), "rot.json", r#"{"type":"rotation_symbol","dim":3}"#);
    let bad = write_spec(dir.path(), "bad.json", r#"{"type":"spiral","dim":3}"#);
    let ragged = write_spec(
        dir.path(),
        "ragged.json",
        r#"{"type":"matrix_polynomial","coeffs":{"0":[[[1,0]]],"2":[[[1,0],[0,1]]]}}"#,
    );
    let arc = write_spec(dir.path(), "arc.json", r#"{"type":"arc_multiplier","dim":2}"#);

    let o = sothardy(&["norm", "--spec", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("$.type"));
    assert!(o.stdout.is_empty());

    assert_eq!(sothardy(&["norm", "--spec", s(&ragged)]).status.code(), Some(2));
    assert_eq!(sothardy(&["norm", "--spec", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(sothardy(&["spin", "--spec", s(&rot)]).status.code(), Some(2));
    assert_eq!(sothardy(&["poisson", "--spec", s(&rot), "--zeta", "0.8", "0.8"]).status.code(), Some(2));
    assert_eq!(sothardy(&["poisson", "--spec", s(&rot)]).status.code(), Some(2));
    assert_eq!(sothardy(&["verify", "--spec", s(&rot)]).status.code(), Some(2));
    assert_eq!(sothardy(&["norm", "--spec", s(&rot), "--p", "0.5"]).status.code(), Some(2));
    // Isometry of a non-analytic function is a precondition failure, not a verdict.
    assert_eq!(sothardy(&["verify", "--claim", "isometry", "--spec", s(&arc)]).status.code(), Some(2));

    let failing = sothardy(&[
        "verify", "--claim", "roundtrip", "--spec", s(&rot), "--grid", "64", "--ladder", "3", "--tol", "1e-15",
    ]);
    assert_eq!(failing.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&failing.stdout).unwrap();
    assert_eq!(report["verdict"]["passed"], false);

    let boundary_fail = sothardy(&["boundary", "--spec", s(&arc), "--grid", "32", "--ladder", "6", "--tol", "1e-12"]);
    assert_eq!(boundary_fail.status.code(), Some(1));

    for claim in ["contraction", "adjoint", "containment", "poisson_convergence", "roundtrip"] {
        let o = sothardy(&["verify", "--claim", claim, "--spec", s(&rot)]);
        assert_eq!(o.status.code(), Some(0), "{claim}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn failed_run_leaves_no_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_spec(dir.path(), "bad.json", r#"{"type":"rotation_symbol"}"#);
    let out = dir.path().join("out.json");
    assert_eq!(sothardy(&["norm", "--spec", s(&bad), "--out", s(&out)]).status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn every_command_writes_csv_with_two_header_lines() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "poly.json", r#"{"type":"matrix_polynomial","dim":2,"degree":3}"#);
    let cases: [&[&str]; 6] = [
        &["fourier"],
        &["poisson", "--zeta", "0.1", "-0.2"],
        &["norm", "--p", "1"],
        &["boundary", "--grid", "64"],
        &["gallery"],
        &["verify", "--claim", "adjoint"],
    ];
    for case in cases {
        let mut args = case.to_vec();
        args.extend(["--spec", s(&spec), "--format", "csv", "--seed", "5"]);
        let o = sothardy(&args);
        assert_eq!(o.status.code(), Some(0), "{case:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = String::from_utf8(o.stdout).unwrap();
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
        let records: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
        assert!(records.len() >= 3, "{case:?}");
        assert_eq!(records[0].len(), records[1].len());
    }
}

const VALID_CIRCLE: [&str; 8] = [
    r#"{"type":"rotation_symbol","dim":4}"#,
    r#"{"type":"arc_multiplier","dim":3}"#,
    r#"{"type":"unbounded_row","dim":5}"#,
    r#"{"type":"matrix_polynomial","coeffs":{"0":[[[1,0]]] ,"1":[[[0,1]]]}}"#,
    r#"{"type":"matrix_polynomial","dim":3,"degree":2,"seed":11}"#,
    r#"{"type":"fourier_polynomial","coeffs":{"-1":[[[1,0],[0,0]]],"2":[[[0,0],[0,2.5]]]}}"#,
    r#"{"type":"sampled","values":[[[[1,0]]],[[[0,1]]],[[[-1,0]]],[[[0,-1]]]]}"#,
    r#"{"type":"banach_transpose","of":{"type":"scaled","factor":[0,1],"of":{"type":"unbounded_row","dim":2}}}"#,
];

const VALID_DISK: [&str; 4] = [
    r#"{"type":"diagonal_disk","dim":3}"#,
    r#"{"type":"evaluation_functional","dim":6}"#,
    r#"{"type":"taylor_polynomial","coeffs":[[[[1,0],[0,0]]],[[[0,0],[1,0]]]]}"#,
    r#"{"type":"poisson_extension","boundary":{"type":"rotation_symbol","dim":2}}"#,
];

const INVALID: [&str; 10] = [
    r#"{"type":"spiral","dim":2}"#,
    r#"{"dim":2}"#,
    r#"{"type":"rotation_symbol","dim":0}"#,
    r#"{"type":"rotation_symbol","dim":2,"extra":true}"#,
    r#"{"type":"matrix_polynomial","coeffs":{"-1":[[[1,0]]]}}"#,
    r#"{"type":"matrix_polynomial","coeffs":{"0":[[[1,0]]]},"seed":3}"#,
    r#"{"type":"fourier_polynomial","coeffs":{"x":[[[1,0]]]}}"#,
    r#"{"type":"constant","value":[[[1,0,0]]]}"#,
    r#"{"type":"taylor_polynomial","coeffs":[]}"#,
    r#"{"type":"poisson_extension","boundary":{"type":"diagonal_disk","dim":2}}"#,
];

#[test]
fn ingestion_agrees_with_schemas() {
    let circle = validator("circle_function");
    let disk = validator("disk_function");
    let gallery = validator("gallery_spec");
    for doc in VALID_CIRCLE {
        let v: Value = serde_json::from_str(doc).unwrap();
        assert!(circle.is_valid(&v), "{doc}");
        assert!(!disk.is_valid(&v), "{doc}");
        assert!(matches!(
            parse_spec(doc.as_bytes(), 0).unwrap().build().unwrap(),
            sothardy::gallery::GalleryObject::Circle(_)
        ));
    }
    for doc in VALID_DISK {
        let v: Value = serde_json::from_str(doc).unwrap();
        assert!(disk.is_valid(&v), "{doc}");
        assert!(matches!(
            parse_spec(doc.as_bytes(), 0).unwrap().build().unwrap(),
            sothardy::gallery::GalleryObject::Disk(_)
        ));
    }
    for doc in VALID_CIRCLE.iter().chain(&VALID_DISK) {
        let v: Value = serde_json::from_str(doc).unwrap();
        let is_gallery = matches!(parse_spec(doc.as_bytes(), 0).unwrap(), ParsedSpec::Gallery(_));
        assert_eq!(gallery.is_valid(&v), is_gallery, "{doc}");
    }
    for doc in INVALID {
        let v: Value = serde_json::from_str(doc).unwrap();
        assert!(!circle.is_valid(&v) && !disk.is_valid(&v), "{doc}");
        assert!(parse_spec(doc.as_bytes(), 0).is_err(), "{doc}");
    }
}

#[test]
fn serialized_functions_validate() {
    let circle = validator("circle_function");
    let disk = validator("disk_function");
    for doc in VALID_CIRCLE.iter().chain(&VALID_DISK) {
        let config = RunConfig::new(Cmd::Gallery, "unused.json");
        let spec = parse_spec(doc.as_bytes(), 0).unwrap();
        let out = run_spec(&config, &spec).unwrap();
        let function = &out.artifact.json["function"];
        let ok = match out.artifact.json["kind"].as_str().unwrap() {
            "circle" => circle.is_valid(function),
            _ => disk.is_valid(function),
        };
        assert!(ok, "{doc} -> {function}");
    }
}

#[test]
fn every_claim_report_validates() {
    let report_schema = validator("verification_report");
    let spec = ParsedSpec::Gallery(GallerySpec::new(GalleryName::RotationSymbol, 2));
    for claim in [
        Claim::Isometry,
        Claim::Contraction,
        Claim::Adjoint,
        Claim::Roundtrip,
        Claim::Containment,
        Claim::PoissonConvergence,
    ] {
        let mut config = RunConfig::new(Cmd::Verify, "unused.json");
        config.claim = Some(claim);
        if !matches!(claim, Claim::Containment | Claim::PoissonConvergence) {
            config.grid_n = Some(64);
            config.ladder_k = Some(8);
        }
        let out = run_spec(&config, &spec).unwrap();
        assert!(out.passed, "{claim}: {}", out.summary);
        let errors: Vec<String> = report_schema.iter_errors(&out.artifact.json).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{claim}: {errors:?}");
        assert_eq!(out.artifact.json["claim"], claim.as_str());
    }
}
