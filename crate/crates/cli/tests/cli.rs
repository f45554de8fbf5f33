use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use xmodcat_cli::{parse, ParseError};
use xmodcat_core::Cyclotomic;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn xmodcat(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_xmodcat")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn fixture_arg(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn exit_codes_over_fixture_corpus() {
    let expected = [
        ("broken_action_range.json", 2),
        ("broken_boundary_length.json", 2),
        ("broken_missing_field.json", 2),
        ("broken_syntax.json", 2),
        ("broken_unknown_group.json", 2),
        ("broken_not_a_group.json", 1),
        ("broken_not_an_action.json", 1),
        ("broken_xmod2.json", 1),
    ];
    let mut seen = 0;
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        let want = expected.iter().find(|(n, _)| *n == name).map(|(_, c)| *c).unwrap_or(0);
        for cmd in ["validate", "verify"] {
            let (code, _, stderr) = xmodcat(&[cmd, &fixture_arg(&name), "--fast"]);
            assert_eq!(code, want, "{cmd} {name}: {stderr}");
            for line in stderr.lines() {
                let v: Value = serde_json::from_str(line).unwrap_or_else(|_| panic!("stderr line is not JSON: {line}"));
                assert!(v["error"].is_string());
            }
        }
        seen += 1;
    }
    assert!(seen >= 20);
}

#[test]
fn missing_file_is_a_parse_level_error() {
    let (code, _, stderr) = xmodcat(&["validate", "/nonexistent/doc.json"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("\"io\""));
}

#[test]
fn parse_errors_are_located() {
    let text = std::fs::read_to_string(fixture("broken_boundary_length.json")).unwrap();
    assert!(matches!(parse(&text), Err(ParseError::Schema { path, .. }) if path == "boundary"));
    let text = std::fs::read_to_string(fixture("broken_action_range.json")).unwrap();
    assert!(matches!(parse(&text), Err(ParseError::Range { path, .. }) if path == "action[0][1]"));
    assert!(matches!(parse("[1,"), Err(ParseError::Syntax(_))));
    assert!(matches!(parse(r#"{"kind":"XG","group":{"kind":"named","name":"S3"}}"#), Err(ParseError::Schema { path, .. }) if path == "kind"));
    assert!(matches!(
        parse(r#"{"kind":"DG","group":{"kind":"table","table":[[0,1],[1,-1]]}}"#),
        Err(ParseError::Range { path, .. }) if path == "group.table[1][1]"
    ));
    assert!(matches!(
        parse(r#"{"kind":"DG","group":{"kind":"perm","degree":3,"generators":[[0,1]]}}"#),
        Err(ParseError::Schema { path, .. }) if path == "group.generators[0]"
    ));
}

#[test]
fn late_range_checks_for_permutation_groups() {
    let doc = r#"{"x1":{"kind":"perm","degree":2,"generators":[[1,0]]},"x2":{"kind":"perm","degree":2,"generators":[[1,0]]},
                  "action":[[0,0],[1,5]],"boundary":[0,1]}"#;
    let d = parse(doc).unwrap();
    match d.build() {
        Err(xmodcat_cli::DocumentError::Parse(ParseError::Range { path, .. })) => assert_eq!(path, "action[1][1]"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn constructor_document_expands_to_conjugation() {
    let d = parse(r#"{"kind":"DG","group":{"kind":"named","name":"S3"}}"#).unwrap();
    let x = d.build().unwrap();
    assert!(x.validate().is_ok());
    for m in 0..6 {
        for g in 0..6 {
            assert_eq!(x.act(m, g), x.x1().conjugate(m, g));
        }
        assert_eq!(x.boundary(m), m);
    }
    assert_eq!(d.display_name(&x), "DG(S3)");
}

#[test]
fn verify_examples() {
    let (code, stdout, _) = xmodcat(&["verify", &fixture_arg("dg_s3.json"), "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["summary"]["irreducibles"], 8);
    assert_eq!(v["summary"]["sum_of_squares"], 36);
    assert_eq!(v["summary"]["s_invertible"], true);
    assert_eq!(v["summary"]["verdict"], "Modular");
    assert_eq!(v["verification"]["objects"]["status"], "passed");

    let (code, stdout, _) = xmodcat(&["verify", &fixture_arg("rg_s3.json"), "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["summary"]["verdict"], "ModularizablePremodular");
    assert_eq!(v["summary"]["rank_S"], 1);

    let (code, _, stderr) = xmodcat(&["validate", &fixture_arg("broken_xmod2.json")]);
    assert_eq!(code, 1);
    let line: Value = serde_json::from_str(stderr.lines().next().unwrap()).unwrap();
    assert_eq!(line["failure"], "XMod2Violation");
    assert!(line["m"].is_u64() && line["n"].is_u64());
}

#[test]
fn fusion_csv_export() {
    let dir = std::env::temp_dir().join(format!("xmodcat-csv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("n.csv");
    let (code, _, _) = xmodcat(&["fusion", &fixture_arg("rg_s3.json"), "--csv", &csv.display().to_string()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("p,q,r,N\n"));
    assert!(text.contains("2,2,0,1\n") && text.contains("2,2,1,1\n") && text.contains("2,2,2,1\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

fn cyc(v: &Value) -> Cyclotomic {
    serde_json::from_value(v.clone()).unwrap()
}

/// Recomputes S from the reported character table and boundary alone.
#[test]
fn report_round_trip_recomputes_s() {
    for name in ["dg_s3.json", "z4_to_z2.json", "rg_q8.json", "dg_z3.json"] {
        let (code, stdout, _) = xmodcat(&["report", &fixture_arg(name)]);
        assert_eq!(code, 0, "{name}");
        let r: Value = serde_json::from_str(&stdout).unwrap();
        let boundary: Vec<usize> = serde_json::from_value(r["xmod"]["boundary"].clone()).unwrap();
        let order = r["exactness"]["global_order"].as_i64().unwrap();
        let chars: Vec<Vec<Vec<Cyclotomic>>> = r["irreducibles"]["characters"]
            .as_array()
            .unwrap()
            .iter()
            .map(|psi| psi.as_array().unwrap().iter().map(|row| row.as_array().unwrap().iter().map(cyc).collect()).collect())
            .collect();
        let n2 = boundary.len();
        for (p, psi_p) in chars.iter().enumerate() {
            for (q, psi_q) in chars.iter().enumerate() {
                let mut total = Cyclotomic::zero();
                for m in 0..n2 {
                    for k in 0..n2 {
                        total = total + (&psi_p[m][boundary[k]] * &psi_q[k][boundary[m]]).conj();
                    }
                }
                let s = total.checked_div(&Cyclotomic::from_integer(order)).unwrap();
                assert_eq!(s, cyc(&r["modular"]["S"][p][q]), "{name}: S[{p}][{q}]");
            }
        }
    }
}

fn strip_timing(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn output_is_deterministic_across_jobs() {
    for name in ["dg_s3.json", "dg_d4.json", "z4_to_z2.json"] {
        let (_, base, _) = xmodcat(&["report", &fixture_arg(name), "--jobs", "1"]);
        for jobs in ["1", "2", "4", "8"] {
            let (code, again, _) = xmodcat(&["report", &fixture_arg(name), "--jobs", jobs]);
            assert_eq!(code, 0);
            assert_eq!(strip_timing(&again), strip_timing(&base), "{name} with --jobs {jobs}");
        }
        for cmd in ["irr", "modular", "fusion", "vacuum", "verify"] {
            let (_, a, _) = xmodcat(&[cmd, &fixture_arg(name), "--jobs", "1"]);
            let (_, b, _) = xmodcat(&[cmd, &fixture_arg(name), "--jobs", "3"]);
            assert_eq!(a, b, "{cmd} {name}");
        }
    }
}

#[test]
fn report_to_file_and_invalid_report() {
    let path = std::env::temp_dir().join(format!("xmodcat-report-{}.json", std::process::id()));
    let (code, stdout, _) = xmodcat(&["report", &fixture_arg("dg_z2.json"), "--out", &path.display().to_string()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("written to"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["document", "xmod", "validation", "exactness", "irreducibles", "modular", "fusion", "vacuum", "verification", "timing"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    let s00 = &r["modular"]["S"][0][0];
    assert_eq!(s00["approx"][0].as_f64().unwrap(), 0.5);
    std::fs::remove_file(&path).unwrap();

    let (code, stdout, _) = xmodcat(&["report", &fixture_arg("broken_xmod2.json")]);
    assert_eq!(code, 1);
    let r: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r["validation"]["valid"], false);
    assert!(r.get("modular").is_none());
}
