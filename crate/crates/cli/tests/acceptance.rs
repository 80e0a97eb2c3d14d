//! Acceptance suite: one test per shipping criterion, each asserting its
//! stated tolerance and runtime budget and printing one line with the
//! measured quantities (visible with `--nocapture`).

mod common;

use std::time::Instant;

use common::{fixture, run_json};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use omnicap_cli::problem::parse_problem;
use omnicap_core::capacity::{
    decompose, minimize_sum_rate, omniscience_constraints, secret_key_capacity,
    secure_computation_capacity, RateVector, VerdictKind, DECISION_TOL,
};
use omnicap_core::dist::{binary_entropy, TerminalSubset};
use omnicap_core::mcf::mcf_all;
use omnicap_core::oracles::{
    brute_force_min_sum_rate, exhaustive_common_function_entropy, random_distribution,
    random_function, random_nonempty_subset,
};
use omnicap_core::protocols::{exact_coset_secrecy, run_balance_check, run_binning, LinearCodeScheme};
use omnicap_core::JointDistribution;

fn fx(name: &str) -> String {
    fixture(name).display().to_string()
}

fn h01() -> f64 {
    binary_entropy(0.1)
}

#[test]
fn criterion_01_crossover_verdicts() {
    let start = Instant::now();
    let v = run_json(&["decide", &fx("dsbs_delta01.json"), "--set", "1,2"]);
    assert_eq!(v["verdict"], "SecurelyComputable");
    let c = v["C"].as_f64().unwrap();
    let h_g = v["H_G"].as_f64().unwrap();
    assert!((c - (1.0 - h01())).abs() <= 1e-9, "C = {c}");
    assert!((h_g - h01()).abs() <= 1e-9, "H_G = {h_g}");

    let v25 = run_json(&["decide", &fx("dsbs_delta025.json"), "--set", "1,2"]);
    assert_eq!(v25["verdict"], "NotSecurelyComputable");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "acceptance 1: PASS ({elapsed:?}) — delta=0.1 SecurelyComputable with C={c:.12}, H_G={h_g:.12}; delta=0.25 NotSecurelyComputable"
    );
}

#[test]
fn criterion_02_counterexample_capacity_is_zero() {
    let start = Instant::now();
    let v = run_json(&["decide", &fx("example2.json"), "--set", "1,2"]);
    let c = v["C"].as_f64().unwrap();
    assert!(c.abs() <= 1e-9, "C = {c}");
    assert_eq!(v["verdict"], "NotSecurelyComputable");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("acceptance 2: PASS ({elapsed:?}) — aided capacity {c} and a negative verdict");
}

#[test]
fn criterion_03_auction_verdicts_and_capacities() {
    let start = Instant::now();
    let auction = fx("auction_m4_k2.json");

    let sk = run_json(&["capacity", "sk", &auction, "--set", "1,2,3,4"]);
    let c_m = sk["capacity_bits"].as_f64().unwrap();
    assert!((c_m - 1.0).abs() <= 1e-9, "C(M) = {c_m}");

    for function in ["max", "argmax"] {
        let sc = run_json(&[
            "capacity", "sc", &auction, "--set", "1,2,3", "--function", function,
        ]);
        let c = sc["capacity_bits"].as_f64().unwrap();
        assert!((c - 1.0).abs() <= 1e-9, "{function}: C(M; Z_M) = {c}");
    }

    let max_bid = run_json(&["decide", &auction, "--function", "max"]);
    assert_eq!(max_bid["verdict"], "SecurelyComputable");
    let winner = run_json(&["decide", &auction, "--function", "argmax"]);
    assert_eq!(winner["verdict"], "NotSecurelyComputable");

    // Per-bidder singletons: the aided capacity collapses to one bid's worth
    // of entropy.
    for i in ["1", "2", "3"] {
        for function in ["max", "argmax"] {
            let sc = run_json(&[
                "capacity", "sc", &auction, "--set", i, "--function", function,
            ]);
            let c = sc["capacity_bits"].as_f64().unwrap();
            assert!((c - 1.0).abs() <= 1e-9, "A = {{{i}}}, {function}: C = {c}");
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "acceptance 3: PASS ({elapsed:?}) — C(M) = C(M;Z) = 1 bit, max computable, argmax not, singleton capacities = 1 bit"
    );
}

#[test]
fn criterion_04_rate_program_matches_vertex_enumeration() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x04ac);
    let mut worst: f64 = 0.0;
    for trial in 0..200 {
        let m = 2 + (trial % 2);
        let d = random_distribution(&mut rng, m, 3);
        let aprime = random_nonempty_subset(&mut rng, m);
        let set = omniscience_constraints(&d, m, &aprime, None).unwrap();
        let sol = minimize_sum_rate(&set);
        let rows: Vec<(u32, f64)> = set
            .constraints()
            .iter()
            .map(|c| {
                (
                    c.subset.iter().fold(0u32, |acc, i| acc | 1 << (i - 1)),
                    c.bound_bits,
                )
            })
            .collect();
        let oracle = brute_force_min_sum_rate(m, &rows);
        let gap = (sol.total_bits - oracle).abs();
        worst = worst.max(gap);
        assert!(gap <= 1e-7, "trial {trial}: simplex {} vs vertices {oracle}", sol.total_bits);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "acceptance 4: PASS ({elapsed:?}) — 200 random programs, worst simplex/vertex gap {worst:.2e}"
    );
}

#[test]
fn criterion_05_common_function_matches_exhaustive_search() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x05ac);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let m = 2 + (trial % 2);
        let d = random_distribution(&mut rng, m, 4);
        let groups: Vec<Vec<usize>> = (1..=m).map(|v| vec![v]).collect();
        let labeling = mcf_all(&d, &groups).unwrap();
        let oracle = exhaustive_common_function_entropy(&d);
        let gap = (labeling.entropy_bits() - oracle).abs();
        worst = worst.max(gap);
        assert!(
            gap <= 1e-12,
            "trial {trial}: union-find {} vs exhaustive {oracle}",
            labeling.entropy_bits()
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "acceptance 5: PASS ({elapsed:?}) — 100 random instances, worst entropy gap {worst:.2e}"
    );
}

#[test]
fn criterion_06_aided_capacity_is_sandwiched() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x06ac);
    for trial in 0..200 {
        let m = 2 + (trial % 3);
        let d = random_distribution(&mut rng, m, 3);
        let g = random_function(&mut rng, &d, 2);
        let a = random_nonempty_subset(&mut rng, m);
        let aided = secure_computation_capacity(&d, &g, &a).unwrap();
        let lower = secret_key_capacity(&d, &TerminalSubset::full(m)).unwrap();
        let upper = secret_key_capacity(&d, &a).unwrap();
        assert!(
            lower.capacity_bits <= aided.capacity_bits + 1e-7
                && aided.capacity_bits <= upper.capacity_bits + 1e-7,
            "trial {trial}: {} !<= {} !<= {}",
            lower.capacity_bits,
            aided.capacity_bits,
            upper.capacity_bits
        );
    }
    let elapsed = start.elapsed();
    println!("acceptance 6: PASS ({elapsed:?}) — sandwich held on 200 random instances");
}

#[test]
fn criterion_07_total_entropy_decomposition() {
    let start = Instant::now();

    // Bundled securely computable fixtures.
    let dsbs = parse_problem(&fixture("dsbs_delta01.json")).unwrap();
    let g = dsbs.select_function(None).unwrap();
    let a = dsbs.computing_set.clone().unwrap();
    let dec = decompose(&dsbs.dist, g, &a, DECISION_TOL).unwrap();
    assert_eq!(dec.verdict.kind, VerdictKind::SecurelyComputable);
    assert!(dec.identity_gap_bits.abs() <= 1e-9, "gap {}", dec.identity_gap_bits);

    let auction = parse_problem(&fixture("auction_m4_k2.json")).unwrap();
    let g = auction.select_function(Some("max")).unwrap();
    let a = auction.computing_set.clone().unwrap();
    let dec = decompose(&auction.dist, g, &a, DECISION_TOL).unwrap();
    assert_eq!(dec.verdict.kind, VerdictKind::SecurelyComputable);
    assert!(dec.identity_gap_bits.abs() <= 1e-9, "gap {}", dec.identity_gap_bits);

    // Random securely computable instances.
    let mut rng = ChaCha12Rng::seed_from_u64(0x07ac);
    let mut found = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..400 {
        if found >= 50 {
            break;
        }
        let m = 2 + (found % 3);
        let d = random_distribution(&mut rng, m, 3);
        let g = random_function(&mut rng, &d, 2);
        let a = random_nonempty_subset(&mut rng, m);
        let dec = decompose(&d, &g, &a, DECISION_TOL).unwrap();
        if dec.verdict.kind == VerdictKind::SecurelyComputable {
            found += 1;
            worst = worst.max(dec.identity_gap_bits.abs());
            assert!(dec.identity_gap_bits.abs() <= 1e-9);
        }
    }
    assert!(found >= 20, "only {found} securely computable instances found");
    let elapsed = start.elapsed();
    println!(
        "acceptance 7: PASS ({elapsed:?}) — identity gap <= 1e-9 on both fixtures and {found} random computable instances (worst {worst:.2e})"
    );
}

#[test]
fn criterion_08_exact_coset_secrecy() {
    let start = Instant::now();
    let code = LinearCodeScheme::hamming_7_4();
    let s = exact_coset_secrecy(0.1, &code).unwrap();
    assert_eq!(s.pairs, 1 << 14);
    assert!(
        s.key_syndrome_mi_bits.abs() <= 1e-12,
        "I(K; F1) = {}",
        s.key_syndrome_mi_bits
    );
    assert!(
        s.function_syndrome_mi_bits.abs() <= 1e-12,
        "I(G; F1) = {}",
        s.function_syndrome_mi_bits
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "acceptance 8: PASS ({elapsed:?}) — exhaustive over 2^14 pairs: I(K;F1) = {:.1e}, I(G;F1) = {:.1e}",
        s.key_syndrome_mi_bits, s.function_syndrome_mi_bits
    );
}

#[test]
fn criterion_09_binning_regression() {
    let start = Instant::now();
    let problem = parse_problem(&fixture("dsbs_delta01.json")).unwrap();
    let g = problem.select_function(None).unwrap();
    let full = TerminalSubset::full(2);
    let trials = 2000u64;

    // Optimal omniscience rates plus 0.15 bits/symbol margin per terminal.
    let optimal = secure_computation_capacity(&problem.dist, g, &full)
        .unwrap()
        .rates
        .unwrap();
    let rates = RateVector::new(
        optimal.as_slice().iter().map(|r| r + 0.15).collect(),
    )
    .unwrap();

    let err = |n: usize| {
        let rep = run_binning(&problem.dist, g, &full, &rates, n, trials, 0, false).unwrap();
        rep.omniscience_error.iter().sum::<f64>() / rep.omniscience_error.len() as f64
    };
    let err4 = err(4);
    let err10 = err(10);
    // At desk scale the decay guarantee is asymptotic; the regression pins
    // the direction within Monte Carlo noise.
    let sigma = |e: f64| (e * (1.0 - e) / trials as f64).sqrt();
    let tolerance = 3.0 * (sigma(err4).powi(2) + sigma(err10).powi(2)).sqrt();
    assert!(
        err10 < err4 + tolerance,
        "error at n=10 ({err10}) above n=4 ({err4}) beyond 3 sigma ({tolerance})"
    );

    let rep8 = run_binning(&problem.dist, g, &full, &rates, 8, trials, 0, false).unwrap();
    let leak = rep8.leakage.corrected_bits;
    assert!(leak < 0.1, "bias-corrected leakage {leak} bits at n=8");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!(
        "acceptance 9: PASS ({elapsed:?}) — err(n=4)={err4:.4}, err(n=10)={err10:.4} (3σ={tolerance:.4}), corrected leakage at n=8 = {leak:.6} bits (raw plug-in {:.3}, bias {:.3})",
        rep8.leakage.plugin_bits, rep8.leakage.bias_bits
    );
}

#[test]
fn criterion_10_balanced_colorings_stay_under_threshold() {
    let start = Instant::now();
    let size = 1usize << 12;
    let dist = JointDistribution::new(
        vec![
            (0..size).map(|u| u.to_string()).collect(),
            vec!["v".to_string()],
        ],
        vec![1.0 / size as f64; size],
    )
    .unwrap();
    let coarsening = vec![0usize; size]; // constant h, r' = 1
    let r = 4;
    let lambda = 0.04;
    let d = size as f64;
    assert!(d / (r as f64 * 1.0) >= 256.0, "d/(r r') ratio too small");

    let check = run_balance_check(&dist, &coarsening, r, d, lambda, 200, 0).unwrap();
    assert!(check.hypothesis_holds);
    assert_eq!(
        check.failure_frequency, 0.0,
        "max statistic {} vs threshold {}",
        check.max_statistic, check.threshold
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "acceptance 10: PASS ({elapsed:?}) — 200 colorings, max statistic {:.4} < threshold {:.2}",
        check.max_statistic, check.threshold
    );
}
