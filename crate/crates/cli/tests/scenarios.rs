use std::path::Path;

use defectwb::checks::{parse_rational, Check};
use defectwb::{load_dir, parse_scenarios, run_scenario, run_scenarios, Expect};
use defectwb_algebra::{q, qi};
use proptest::prelude::*;

const EPS: f64 = 1e-9;

fn toml(text: &str) -> Result<Vec<defectwb::Scenario>, defectwb::UsageError> {
    parse_scenarios(text, Path::new("test.toml"))
}

#[test]
fn toml_and_json_agree() {
    let t = toml(
        r#"
[[scenario]]
name = "monopole-charge"
check = "monopole"
params = { charge = 1, grid = 64 }
golden = [{ pointer = "/charge/estimate", value = 1.0, tol = 1e-6 }]
"#,
    )
    .unwrap();
    let j = parse_scenarios(
        r#"{"scenario": [{"name": "monopole-charge", "check": "monopole", "params": {"charge": 1, "grid": 64},
            "golden": [{"pointer": "/charge/estimate", "value": 1.0, "tol": 1e-6}]}]}"#,
        Path::new("test.json"),
    )
    .unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].golden, j[0].golden);
    let (a, b) = (run_scenario(&t[0], EPS), run_scenario(&j[0], EPS));
    assert!(a.passed, "{:?}", a.diagnostics);
    assert_eq!(a.payload, b.payload);
    let est = a.payload.pointer("/charge/estimate").unwrap().as_f64().unwrap();
    assert!((est - 1.0).abs() < 1e-6);
}

#[test]
fn defaults_fill_missing_params() {
    let s = toml("[[scenario]]\nname = \"fact-line-axioms\"\ncheck = \"fact_line\"\n").unwrap();
    match &s[0].check {
        Check::FactLine(p) => assert_eq!((p.v_dim, p.depth, p.cap), (2, 3, 6)),
        other => panic!("parsed as {}", other.name()),
    }
    assert_eq!(s[0].expect, Expect::Pass);
    let r = run_scenario(&s[0], EPS);
    assert!(r.passed && r.check_passed);
}

#[test]
fn unknown_parameter_is_rejected_with_its_line() {
    let err = toml(
        r#"[[scenario]]
name = "scalar"
check = "scalar_defect"
params = { modes = 3 }

[[scenario]]
name = "typo"
check = "scalar_defect"
[scenario.params]
radiius = 1
"#,
    )
    .unwrap_err()
    .to_string();
    assert!(err.contains("radiius"), "{err}");
    assert!(err.contains("line 10"), "{err}");
}

#[test]
fn malformed_scenarios_are_usage_errors() {
    for text in [
        "[[scenario]]\nname = \"x\"\ncheck = \"no_such_check\"\n",
        "[[scenario]]\nname = \"x\"\ncheck = \"wilson\"\nexpect = \"maybe\"\n",
        "[[scenario]]\nname = \"x\"\ncheck = \"wilson\"\nextra = 1\n",
        "[[scenario]]\ncheck = \"wilson\"\n",
        "[[scenario]]\nname = \"x\"\ncheck = \"ym\"\nparams = { coupling = \"1/0\" }\n",
        "name = ",
    ] {
        assert!(toml(text).is_err(), "{text}");
    }
}

#[test]
fn expectations_and_goldens_decide_the_verdict() {
    let s = toml(
        r#"
[[scenario]]
name = "massive"
check = "annulus"
params = { theory = "massive", quadruples = [[0.5, 2.5, 1.0, 2.0]] }
expect = "fail"

[[scenario]]
name = "massive-expected-to-pass"
check = "annulus"
params = { theory = "massive", quadruples = [[0.5, 2.5, 1.0, 2.0]] }

[[scenario]]
name = "wrong-golden"
check = "monopole"
params = { charge = 2 }
golden = [{ pointer = "/charge/estimate", value = 1.0, tol = 1e-6 }]

[[scenario]]
name = "missing-golden"
check = "wilson"
golden = [{ pointer = "/nowhere", value = 0 }]

[[scenario]]
name = "module-error"
check = "monopole"
params = { grid = 7 }
expect = "fail"
"#,
    )
    .unwrap();
    let r = run_scenarios(&s, 2, EPS);
    let passed: Vec<(&str, bool)> = r.scenarios.iter().map(|x| (x.scenario.as_str(), x.passed)).collect();
    assert_eq!(
        passed,
        [("massive", true), ("massive-expected-to-pass", false), ("missing-golden", false), ("module-error", false), ("wrong-golden", false)]
    );
    assert_eq!(r.summary.failed, 4);
    assert_eq!(r.exit_code(), 1);
    let err = r.scenarios.iter().find(|x| x.scenario == "module-error").unwrap();
    assert!(!err.diagnostics.is_empty());
}

#[test]
fn suite_reports_are_deterministic() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../default");
    let scenarios: Vec<_> = load_dir(Path::new(dir)).unwrap().into_iter().filter(|s| !s.name.starts_with("annulus-bf")).collect();
    let a = run_scenarios(&scenarios, 4, EPS).to_json();
    let b = run_scenarios(&scenarios, 1, EPS).to_json();
    assert_eq!(a, b);
    assert!(!a.contains("duration"));
}

#[test]
fn rationals_parse_exactly() {
    assert_eq!(parse_rational("3").unwrap(), qi(3));
    assert_eq!(parse_rational("-1/2").unwrap(), q(-1, 2));
    assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
    assert_eq!(parse_rational("-1.5").unwrap(), q(-3, 2));
    assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
    for bad in ["", "1.", "1.2.3", "a/b", "1/0", "1e3"] {
        assert!(parse_rational(bad).is_err(), "{bad}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fractions_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        prop_assert_eq!(parse_rational(&format!("{n}/{d}")).unwrap(), q(n, d));
    }

    #[test]
    fn decimals_are_exact(whole in 0i64..1000, frac in 0u32..10000) {
        let text = format!("{whole}.{frac:04}");
        prop_assert_eq!(parse_rational(&text).unwrap(), qi(whole) + q(frac as i64, 10000));
    }

    #[test]
    fn report_order_ignores_file_order(rot in 0usize..4) {
        let mut names = ["d", "b", "a", "c"];
        names.rotate_left(rot);
        let text: String = names.iter().map(|n| format!("[[scenario]]\nname = \"{n}\"\ncheck = \"wilson\"\n\n")).collect();
        let r = run_scenarios(&toml(&text).unwrap(), 2, EPS);
        let order: Vec<&str> = r.scenarios.iter().map(|s| s.scenario.as_str()).collect();
        prop_assert_eq!(order, vec!["a", "b", "c", "d"]);
    }
}
