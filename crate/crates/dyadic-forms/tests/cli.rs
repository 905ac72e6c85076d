//! End-to-end checks of the command-line binary: output shapes, exit codes,
//! and the element / lattice round-trip property.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyadic-forms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn invariants_golden() {
    let out = run(&["invariants", "--field", "q2", "--bong", "1,1,2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("R: (0, 0, 1)"), "{text}");
    assert!(text.contains("alpha: (1, 1)"), "{text}");
}

#[test]
fn classify_examples() {
    let out = run(&["classify", "--field", "q2(sqrt2)", "--bong", "1,1,2+sqrt(2)", "--n", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("universal: true"));

    let out = run(&["classify", "--field", "q2(sqrt(2))", "--bong", "1,1,1", "--n", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("universal: false") && text.contains("failing: (i)"), "{text}");
}

#[test]
fn testset_listing() {
    let out = run(&["testset", "--field", "q2", "--n", "3", "--list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("members (enumerated): 16"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with('C')).count(), 16, "{text}");
}

#[test]
fn exit_codes() {
    // parse error (bad element syntax) -> 1
    let out = run(&["defect", "--field", "q2", "1+%"]);
    assert_eq!(out.status.code(), Some(1));
    // domain error (unsupported field) -> 2
    let out = run(&["defect", "--field", "q7", "3"]);
    assert_eq!(out.status.code(), Some(2));
    // domain error (invalid BONG) -> 2
    let out = run(&["bong-validate", "--field", "q2", "--bong", "1,1/8"]);
    assert_eq!(out.status.code(), Some(2));
    // bad usage -> 1
    let out = run(&["classify", "--field", "q2"]);
    assert_eq!(out.status.code(), Some(1));
    // success -> 0
    let out = run(&["hilbert", "--field", "q2", "3", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("-1"));
}

/// Every element printed by the CLI re-parses to an equal element; a lattice
/// JSON file reloads with identical invariants.
#[test]
fn round_trip() {
    use dyadic_forms::localfield::{parse_elem, Field};

    for (field, bong) in [
        ("q2", "3/20,-1/5,7"),
        ("q2(sqrt(5))", "1,(5+sqrt(5))/2,2"),
        ("q2(sqrt(2))", "3+sqrt(2),7,(3+sqrt(2))/7"),
    ] {
        let out = run(&["--json", "invariants", "--field", field, "--bong", bong]);
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        let f = Field::shared(field);
        let printed: Vec<String> = v["bong"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s.as_str().unwrap().to_string())
            .collect();
        for (orig, shown) in bong.split(',').zip(&printed) {
            let a = parse_elem(f, orig).unwrap();
            let b = parse_elem(f, shown).unwrap();
            assert_eq!(a, b, "{field}: '{orig}' printed as '{shown}' re-parses differently");
        }
    }

    // Lattice JSON reload: blocks form and its printed BONG agree on invariants.
    let dir = std::env::temp_dir().join("dyadic-forms-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lat.json");
    std::fs::write(&path, r#"{"field":"q2","blocks":[{"diag":["1","3"]},{"H":1}]}"#).unwrap();
    let out = run(&["--json", "invariants", "--file", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["r"], serde_json::json!([0, 0, 0, 0]));
    assert_eq!(v["classic"], serde_json::json!(true));
    // Reload from the printed BONG entries and compare invariants.
    let printed: Vec<String> = v["bong"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect();
    let out2 = run(&["--json", "invariants", "--field", "q2", "--bong", &printed.join(",")]);
    assert!(out2.status.success());
    let v2: serde_json::Value = serde_json::from_str(&stdout(&out2)).unwrap();
    assert_eq!(v["r"], v2["r"]);
    assert_eq!(v["alpha"], v2["alpha"]);
    assert_eq!(v["space"], v2["space"]);
}
