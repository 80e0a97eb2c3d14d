//! End-to-end behavior of the binary: output values, exit codes,
//! determinism, and the generate/parse round trip.

mod common;

use common::{fixture, omnicap, run_fail, run_json};
use omnicap_cli::problem::parse_problem;

fn fx(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn decide_reports_the_crossover_instance() {
    let v = run_json(&["decide", &fx("dsbs_delta01.json"), "--set", "1,2"]);
    assert_eq!(v["verdict"], "SecurelyComputable");
    let h_g = v["H_G"].as_f64().unwrap();
    let c = v["C"].as_f64().unwrap();
    assert!((h_g - 0.468_995_593_589_281_2).abs() < 1e-9);
    assert!((c - 0.531_004_406_410_718_8).abs() < 1e-9);
}

#[test]
fn negative_verdicts_still_exit_zero() {
    let out = omnicap(&["decide", &fx("example2.json")]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "NotSecurelyComputable");
    assert_eq!(v["C"].as_f64().unwrap(), 0.0);
}

#[test]
fn malformed_json_exits_2() {
    let path = std::env::temp_dir().join("omnicap_malformed.json");
    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(run_fail(&["decide", path.to_str().unwrap()]), 2);
}

#[test]
fn low_mass_pmf_exits_2() {
    let path = std::env::temp_dir().join("omnicap_lowmass.json");
    std::fs::write(
        &path,
        r#"{"alphabets": [["0","1"],["0","1"]],
            "pmf": [{"x":["0","0"],"p":0.49},{"x":["1","1"],"p":0.49}]}"#,
    )
    .unwrap();
    assert_eq!(run_fail(&["entropy", path.to_str().unwrap(), "--set", "1"]), 2);
}

#[test]
fn missing_file_exits_2() {
    assert_eq!(run_fail(&["decide", "/nonexistent/omnicap.json"]), 2);
}

#[test]
fn unknown_subcommand_exits_2() {
    assert_eq!(run_fail(&["frobnicate"]), 2);
}

#[test]
fn conflicting_flags_exit_2() {
    assert_eq!(
        run_fail(&[
            "entropy",
            &fx("dsbs_delta01.json"),
            "--set",
            "1",
            "--given",
            "2",
            "--mi-with",
            "2"
        ]),
        2
    );
}

#[test]
fn decoder_space_cap_exits_3() {
    assert_eq!(
        run_fail(&[
            "simulate-binning",
            &fx("dsbs_delta01.json"),
            "--rates",
            "0.9,0.9",
            "--n",
            "24",
            "--trials",
            "5"
        ]),
        3
    );
}

#[test]
fn auction_cap_exits_3() {
    assert_eq!(run_fail(&["gen-auction", "--m", "9", "--k", "8"]), 3);
}

#[test]
fn seeded_simulations_are_byte_identical() {
    let args = [
        "simulate-binning",
        &fx("dsbs_delta01.json"),
        "--margin",
        "0.2",
        "--n",
        "5",
        "--trials",
        "80",
        "--seed",
        "11",
    ];
    let a = omnicap(&args.iter().map(|s| &**s).collect::<Vec<_>>());
    let b = omnicap(&args.iter().map(|s| &**s).collect::<Vec<_>>());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let mut other = args;
    other[9] = "12";
    let c = omnicap(&other.iter().map(|s| &**s).collect::<Vec<_>>());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn generated_auction_round_trips() {
    let v = run_json(&["gen-auction", "--m", "4", "--k", "2"]);
    let path = std::env::temp_dir().join("omnicap_auction_roundtrip.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();

    let regenerated = parse_problem(&path).unwrap();
    let bundled = parse_problem(&fixture("auction_m4_k2.json")).unwrap();
    assert_eq!(regenerated.dist, bundled.dist);
    assert_eq!(regenerated.functions, bundled.functions);
    assert_eq!(regenerated.computing_set, bundled.computing_set);

    let d = run_json(&["decide", path.to_str().unwrap(), "--function", "max"]);
    assert_eq!(d["verdict"], "SecurelyComputable");
}

#[test]
fn singleton_secrecy_set_reports_marginal_entropy() {
    let v = run_json(&["capacity", "sk", &fx("dsbs_delta01.json"), "--set", "1"]);
    assert_eq!(v["capacity_bits"].as_f64().unwrap(), 1.0);
    assert!(v["rates"].is_null());
}

#[test]
fn aided_capacity_uses_the_file_assignment() {
    // Terminal 2 recovers with a copy of terminal 1's variable, lifting the
    // capacity from 1 - h(0.2) to the full bit.
    let v = run_json(&["capacity", "ask", &fx("ask_example.json")]);
    assert!((v["capacity_bits"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let sk = run_json(&["capacity", "sk", &fx("ask_example.json"), "--set", "1,2"]);
    assert!(sk["capacity_bits"].as_f64().unwrap() < 0.5);
}

#[test]
fn entropy_values_are_rounded_to_twelve_digits() {
    let v = run_json(&["entropy", &fx("dsbs_delta01.json"), "--set", "1,2"]);
    let text = format!("{}", v["value_bits"]);
    assert_eq!(text, "1.46899559359");
}

#[test]
fn mcf_defaults_to_singleton_groups() {
    let v = run_json(&["mcf", &fx("example2.json")]);
    // X1 = X2 share one bit; X3 is independent, so nothing is common to all
    // three.
    assert_eq!(v["class_count"], 1);
    assert_eq!(v["entropy_bits"].as_f64().unwrap(), 0.0);
}
