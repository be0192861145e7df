use std::process::Command;

use serde_json::Value;

use priccati_cli::{cmd_factor, cmd_solve, cmd_verify, Claim, InstanceSpec, EXIT_INCOMPLETE, EXIT_INPUT, EXIT_OK};

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_priccati")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap() + &String::from_utf8(out.stderr).unwrap();
    (out.status.code().unwrap(), text)
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, text) = run(&all);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["irreducible", "--p", "5", "--nstar", "Y^2 - x"]).0, 0);
    assert_eq!(run(&["irreducible", "--p", "5", "--nstar", "x*Y - 1"]).0, 0);
    assert_eq!(run(&["solve", "--p", "4", "--nstar", "Y - x"]).0, 1);
    assert_eq!(run(&["solve", "--p", "5", "--nstar", "Y^2 -"]).0, 1);
    assert_eq!(run(&["solve", "--p", "5", "--nstar", "Y^2 - x^2"]).0, 1);
    assert_eq!(run(&["solve", "--p", "3", "--nstar", "x*Y^3 - x*Y - 1"]).0, 2);
    assert_eq!(run(&["solve", "--p", "7", "--nstar", "Y^3 - x^2 - 1", "--max-level", "0"]).0, 3);
}

#[test]
fn json_reports_are_deterministic() {
    let args = ["factor", "--p", "7", "--nstar", "Y^3 - x^2 - 1"];
    let (c1, a) = json(&args);
    let (c2, b) = json(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert_eq!(a["verdict"], "reducible");
    assert_eq!(a["witness"]["order"], 3);
    assert_eq!(a["witness"]["verified"], true);
    assert_eq!(a["timings"].as_array().unwrap().len(), 0);
}

#[test]
fn verbose_records_timings() {
    let (_, v) = json(&["solve", "--p", "5", "--nstar", "Y^2 - x", "--verbose"]);
    assert!(!v["timings"].as_array().unwrap().is_empty());
}

#[test]
fn irreducible_report_lists_places() {
    let (code, v) = json(&["irreducible", "--p", "7", "--nstar", "x*Y - 1"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "irreducible");
    let places = v["places"].as_array().unwrap();
    assert_eq!(places.len(), 2);
    assert!(places.iter().any(|p| p["local"] == "unsolvable"));
}

#[test]
fn solutions_and_factors_verify() {
    let cases = [(5u64, 1usize, "Y^2 - x"), (7, 1, "Y^3 - x^2 - 1"), (3, 3, "x*Y - 1"), (11, 1, "Y - x^2 - x - 1")];
    for (p, b, nstar) in cases {
        let spec = InstanceSpec::new(p, nstar).with_ext_degree(b);
        let sol = cmd_solve(&spec);
        assert_eq!(sol.code, EXIT_OK, "{}", sol.text);
        let s = sol.report.witness.unwrap().solution.unwrap();
        let v = cmd_verify(&spec, &Claim::Solution(s.clone()));
        assert_eq!(v.code, EXIT_OK, "{s}: {}", v.text);

        let fac = cmd_factor(&spec);
        let coeffs = fac.report.witness.unwrap().coefficients.unwrap().join("; ");
        let v = cmd_verify(&spec, &Claim::Factor(coeffs.clone()));
        assert_eq!(v.code, EXIT_OK, "{coeffs}: {}", v.text);
    }
}

#[test]
fn invalid_claims_are_rejected() {
    let spec = InstanceSpec::new(5, "Y^2 - x");
    assert_eq!(cmd_verify(&spec, &Claim::Solution("a + 1".into())).code, EXIT_INPUT);
    assert_eq!(cmd_verify(&spec, &Claim::Solution("a +".into())).code, EXIT_INPUT);
    // D itself does not divide, the identity is trivial, and N(D^p) is the whole operator
    assert_eq!(cmd_verify(&spec, &Claim::Factor("0; 1".into())).code, EXIT_INPUT);
    assert_eq!(cmd_verify(&spec, &Claim::Factor("1".into())).code, EXIT_INPUT);
    let whole = "4*x^5; 0; 0; 0; 0; 0; 0; 0; 0; 0; 1";
    assert_eq!(cmd_verify(&spec, &Claim::Factor(whole.into())).code, EXIT_INPUT);
}

#[test]
fn incomplete_search_is_reported() {
    let mut spec = InstanceSpec::new(7, "Y^3 - x^2 - 1");
    spec.max_level = Some(0);
    let out = cmd_solve(&spec);
    assert_eq!(out.code, EXIT_INCOMPLETE);
    assert!(out.report.error.is_some());
}

#[test]
fn explicit_modulus() {
    let (code, v) =
        json(&["solve", "--p", "3", "--ext-degree", "3", "--ext-modulus", "z^3 + 2*z + 1", "--nstar", "x*Y - 1"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "reducible");
    let (code, _) = run(&["solve", "--p", "3", "--ext-degree", "2", "--ext-modulus", "z^2 + 2", "--nstar", "Y - x"]);
    assert_eq!(code, 1);
}
