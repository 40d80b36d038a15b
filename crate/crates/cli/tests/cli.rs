use std::process::{Command, Output};

use jones_core::circuit::{emit_text, parse_text};
use num_complex::Complex64;
use serde_json::Value;

fn jones(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jones")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = jones(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn complex(v: &Value) -> Complex64 {
    Complex64::new(v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

#[test]
fn jones_exact_of_trefoil() {
    let doc = json(&["jones-exact", "2: 1 1 1", "--closure", "trace"]);
    assert_eq!(doc["command"], "jones-exact");
    let terms = &doc["jones"]["terms"];
    assert_eq!((terms["16"].as_i64(), terms["12"].as_i64(), terms["4"].as_i64()), (Some(-1), Some(1), Some(1)));
    assert_eq!(terms.as_object().unwrap().len(), 3);
    assert_eq!(doc["jones"]["in_t"], "-1*t^-4 + 1*t^-3 + 1*t^-1");
    assert_eq!(doc["writhe"], 3);
}

#[test]
fn approx_exact_mode_agrees_with_exact_command() {
    let exact = json(&["jones-exact", "2: 1 1 1", "--closure", "trace", "--k", "5"]);
    let approx = json(&["jones-approx", "2: 1 1 1", "--closure", "trace", "--k", "5", "--mode", "exact", "--seed", "0"]);
    let a = complex(&exact["evaluation"]["value"]);
    let b = complex(&approx["estimate"]);
    assert!((a - b).norm() < 1e-9, "{a} vs {b}");
    let tl = json(&["jones-tl", "2: 1 1 1", "--k", "5"]);
    assert_eq!(tl["jones"]["terms"], exact["jones"]["terms"]);
}

#[test]
fn plat_closures_through_every_command() {
    let exact = json(&["jones-exact", "4: 2 -1 3", "--closure", "plat", "--k", "7"]);
    let tl = json(&["jones-tl", "4: 2 -1 3", "--closure", "plat", "--k", "7"]);
    assert_eq!(tl["jones"]["terms"], exact["jones"]["terms"]);
    let approx = json(&["jones-approx", "4: 2 -1 3", "--closure", "plat", "--k", "7", "--mode", "exact", "--seed", "1"]);
    assert!((complex(&approx["estimate"]) - complex(&exact["evaluation"]["value"])).norm() < 1e-9);
}

#[test]
fn seeded_output_is_byte_identical() {
    let args = ["jones-approx", "3: 1 -2 1 2", "--k", "5", "--seed", "42", "--epsilon", "0.2"];
    let a = jones(&args);
    let b = jones(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains(r#""epsilon":2.0000000000000001e-1"#));
}

#[test]
fn missing_seed_is_drawn_and_reported() {
    let out = jones(&["sample-path", "--n", "4", "--k", "5"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["seed_from_entropy"], true);
    let seed = doc["seed"].as_u64().unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains(&format!("seed: {seed}")));
}

#[test]
fn every_command_carries_conventions() {
    let runs: [&[&str]; 6] = [
        &["bracket", "2: 1"],
        &["jones-exact", "2: 1"],
        &["jones-tl", "2: 1"],
        &["jones-approx", "2: 1", "--k", "5", "--seed", "1", "--epsilon", "0.5"],
        &["sample-path", "--n", "3", "--k", "4", "--seed", "1"],
        &["emit-circuit", "2: 1", "--k", "5"],
    ];
    for args in runs {
        let doc = json(args);
        let conv = &doc["conventions"];
        for key in ["chirality", "a_value", "orientation"] {
            assert!(conv[key].is_string(), "{args:?} lacks {key}");
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(jones(&["bracket", "2: 3"]).status.code(), Some(2));
    assert_eq!(jones(&["bracket"]).status.code(), Some(2));
    assert_eq!(jones(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(jones(&["jones-approx", "3: 1", "--k", "5", "--closure", "plat", "--seed", "0"]).status.code(), Some(2));
    assert_eq!(jones(&["jones-approx", "2: 1", "--k", "5", "--epsilon", "0"]).status.code(), Some(2));
    assert_eq!(jones(&["bracket", "2: 1 1 1", "--max-crossings", "2"]).status.code(), Some(1));
    assert_eq!(jones(&["jones-tl", "4: 1", "--max-strands", "3"]).status.code(), Some(1));
    assert_eq!(jones(&["--help"]).status.code(), Some(0));
}

#[test]
fn circuit_text_round_trips() {
    let out = jones(&["emit-circuit", "4: 1 -3 2", "--k", "5", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("JONES-CIRCUIT 1\nregisters path=4 counter=4 ancilla=0\n"));
    let circuit = parse_text(&text).unwrap();
    assert_eq!(emit_text(&circuit), text);
    assert_eq!(circuit.local_crossing_count(), 3);

    let doc = json(&["emit-circuit", "3: 2", "--k", "4", "--hadamard", "im"]);
    assert_eq!(doc["registers"]["ancilla"], true);
    assert_eq!(doc["registers"]["counter_modulus"], 8);
    parse_text(doc["ir"].as_str().unwrap()).unwrap();
}

#[test]
fn braid_from_file() {
    let dir = std::env::temp_dir().join(format!("jones-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("braid.json");
    std::fs::write(&path, r#"{"strands": 2, "word": [1, 1, 1]}"#).unwrap();
    let doc = json(&["jones-exact", "--braid-file", path.to_str().unwrap()]);
    assert_eq!(doc["jones"]["in_t"], "-1*t^-4 + 1*t^-3 + 1*t^-1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn csv_and_text_formats() {
    let out = jones(&["sample-path", "--n", "4", "--k", "5", "--count", "3", "--seed", "7", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "path,endpoint,probability");
    assert_eq!(lines.len(), 4);

    let out = jones(&["bracket", "2: 1", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("bracket.text") && l.ends_with("-1*A^-3")));
}

#[test]
fn quick_verify_is_green() {
    let out = jones(&["verify", "--level", "quick"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{doc}");
    assert_eq!(doc["passed"], true);
    let rows = doc["rows"].as_array().unwrap();
    assert!(rows.len() >= 10);
    assert!(rows.iter().all(|r| r["passed"] == true));
}
