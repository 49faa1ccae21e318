use std::process::Command;

use slicetower_cli::document::TowerDocument;
use slicetower_cli::render::{render_latex, render_text};

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_slicetower"))
        .args(args)
        .env_remove("SLICETOWER_VERIFY_N")
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exited normally"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn tower_json(p: &str, k: &str, n: &str, verify: bool) -> serde_json::Value {
    let mut args = vec!["tower", "--p", p, "--k", k, "--n", n, "--format", "json"];
    if verify {
        args.push("--verify");
    }
    let (code, out, _) = run(&args);
    assert_eq!(code, 0);
    serde_json::from_str(&out).unwrap()
}

#[test]
fn s7_text_table() {
    let (code, out, _) = run(&["tower", "--p", "3", "--k", "2", "--n", "7", "--format", "text"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(2).collect();
    assert_eq!(rows.len(), 5);
    let dims: Vec<i64> = rows.iter().map(|r| r.split_whitespace().next().unwrap().parse().unwrap()).collect();
    assert_eq!(dims, [44, 26, 14, 8, 7]);
    assert!(rows[0].contains("S^{5ρ − 1} ∧ HB(1,1)"));
    assert!(rows[3].contains("S^{ρ − 1} ∧ HB(2,0)"));
    assert!(rows[4].ends_with("S^{1 + λ_1 + 2λ_0} ∧ HZ"));
}

fn normalize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[test]
fn s7_latex_matches_example_labels() {
    let (code, out, _) = run(&["tower", "--p", "3", "--k", "2", "--n", "7", "--format", "latex"]);
    assert_eq!(code, 0);
    // node labels of the printed diagram, with \HZ and \HB expanded
    let expected = [
        r"S^{5\rho - 1} \wedge H\underline{B}(1,1)",
        r"S^{7} \wedge H\underline{\mathbb{Z}}",
        r"S^{3\rho - 1} \wedge H\underline{B}(1,1)",
        r"S^{5 + \lambda_1} \wedge H\underline{\mathbb{Z}}",
        r"S^{2 + \lambda_1} \wedge H\underline{B}(1,0)",
        r"S^{3 + 2\lambda_1} \wedge H\underline{\mathbb{Z}}",
        r"S^{\rho - 1} \wedge H\underline{B}(2,0)",
        r"S^{3 + \lambda_1 + \lambda_0} \wedge H\underline{\mathbb{Z}}",
        r"S^{1 + \lambda_1 + 2\lambda_0} \wedge H\underline{\mathbb{Z}}",
    ];
    let norm = normalize(&out);
    let mut pos = 0;
    for label in expected {
        let found = norm[pos..].find(&normalize(label)).unwrap_or_else(|| panic!("{label} missing or out of order"));
        pos += found + label.len();
    }
    assert!(norm.starts_with(r"\[ \xymatrix{"));
    assert!(norm.contains(r"(5(3)^2 - 1) &"));
    assert_eq!(norm.matches(r"\ar[r]").count(), 4);
}

#[test]
fn zero_is_single_stage() {
    let doc = tower_json("3", "2", "0", true);
    let stages = doc["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 1);
    assert_eq!(stages[0]["slice"]["dim"], 0);
    assert_eq!(stages[0]["verification"]["passed"], true);
}

#[test]
fn json_validates_against_schema() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../schema/tower-document.schema.json")).unwrap();
    let validator = jsonschema::JSONSchema::compile(&schema).unwrap();
    for (p, k, n) in [("3", "2", "7"), ("3", "2", "16"), ("5", "1", "9"), ("3", "1", "1"), ("3", "2", "0")] {
        for verify in [false, true] {
            let doc = tower_json(p, k, n, verify);
            let msgs: Vec<String> = match validator.validate(&doc) {
                Ok(()) => Vec::new(),
                Err(errors) => errors.map(|e| e.to_string()).collect(),
            };
            assert!(msgs.is_empty(), "p={p} k={k} n={n}: {msgs:?}");
        }
    }
    let mut bad = tower_json("3", "2", "7", false);
    bad["stages"][0]["slice"]["coefficient"] = "Q".into();
    assert!(!validator.is_valid(&bad));
}

#[test]
fn renderers_depend_only_on_the_document() {
    let (_, json, _) = run(&["tower", "--p", "3", "--k", "2", "--n", "16", "--format", "json"]);
    let doc: TowerDocument = serde_json::from_str(&json).unwrap();
    let (_, text, _) = run(&["tower", "--p", "3", "--k", "2", "--n", "16", "--format", "text"]);
    let (_, latex, _) = run(&["tower", "--p", "3", "--k", "2", "--n", "16", "--format", "latex"]);
    assert_eq!(render_text(&doc), text);
    assert_eq!(render_latex(&doc), latex);
}

#[test]
fn section_text_round_trips_through_the_parser() {
    let g = slicetower::Group::new(3, 2).unwrap();
    let doc = tower_json("3", "2", "16", false);
    for stage in doc["stages"].as_array().unwrap() {
        for entry in [&stage["section"], &stage["slice"]["rep"]] {
            let r = slicetower::parse_rep(entry["text"].as_str().unwrap(), &g).unwrap();
            assert_eq!(r.trivial_mult(), entry["trivial"].as_i64().unwrap());
            let lambda: Vec<i64> = entry["lambda"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
            assert_eq!(r.lambdas(), lambda.as_slice());
        }
    }
}

#[test]
fn even_prime_is_rejected() {
    let (code, _, err) = run(&["tower", "--p", "2", "--k", "2", "--n", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("odd prime"), "{err}");
    let (code, _, _) = run(&["tower", "--p", "9", "--k", "1", "--n", "7"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["tower", "--p", "3"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    let (code, _, err) = run(&["homology", "--rep", "3+2L", "--degree", "0", "--p", "3", "--k", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("position 4"), "{err}");
    let (code, _, err) = run(&["mackey", "--show", "B(0,2)", "--p", "3", "--k", "2"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn mackey_b20() {
    let (code, out, _) = run(&["mackey", "--show", "B(2,0)", "--p", "3", "--k", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["levels"], serde_json::json!(["0", "Z/3", "Z/9"]));
    let (_, text, _) = run(&["mackey", "--show", "B(2,0)", "--p", "3", "--k", "2"]);
    assert!(text.contains("G/C_9  Z/9"));
}

#[test]
fn homology_of_negative_regular_sphere() {
    // S^{-ρ} over C_3: the top-level cochains Z -1-> Z -0-> Z start in degree -1,
    // so the fixed-level class sits in degree -3 and H_0 vanishes
    let h = |d: &str| run(&["homology", "--rep", "-(rho)", "--coeff", "Z", "--degree", d, "--level", "top", "--p", "3", "--k", "1"]);
    assert_eq!(h("-3"), (0, "Z\n".into(), String::new()));
    assert_eq!(h("0").1, "0\n");
    for d in ["-4", "-2", "-1"] {
        assert_eq!(h(d).1, "0\n", "degree {d}");
    }
    let (_, out, _) = run(&["homology", "--rep", "-(rho)", "--degree", "-3", "--level", "0", "--p", "3", "--k", "1"]);
    assert_eq!(out, "Z\n");
}

#[test]
fn verify_range() {
    let (code, out, _) = run(&["verify", "--p", "3", "--k", "2", "--n", "3..12"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.trim_end().ends_with("50 slices checked, 0 failed"));
    let out = Command::new(env!("CARGO_BIN_EXE_slicetower"))
        .args(["verify", "--p", "5", "--k", "1", "--format", "json"])
        .env("SLICETOWER_VERIFY_N", "4..6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["towers"].as_array().unwrap().len(), 3);
    assert_eq!(v["failures"], 0);
}
