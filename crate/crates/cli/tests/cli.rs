use std::process::Command;

use gitmilnor_cli::corpus::{generate, CorpusItem, CorpusSpec, Family};
use gitmilnor_cli::harness::{verify_assoc_theorem, verify_assoc_theorem_on, verify_gradient_theorem};
use gitmilnor_core::lambda::sorted_grid;
use gitmilnor_core::milnor::{hilbert_point, socle_degree};
use gitmilnor_core::poly::parse_polynomial;
use gitmilnor_core::stability::SearchConfig;
use gitmilnor_core::ExponentVector;
use serde_json::Value;

fn gitmilnor(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gitmilnor")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, stdout, stderr) = gitmilnor(args);
    assert_eq!(code, 0, "{args:?}: {stderr}");
    serde_json::from_str(&stdout).expect("valid JSON")
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn assoc_of_binary_fermat_cubic() {
    let v = json(&["assoc", "--form", "x^3+y^3"]);
    assert_eq!(v["result"]["dual_form"], "1/36*u1*u2");
    assert_eq!(v["result"]["normalization"], "hessian");
    assert_eq!(v["input"]["degree"], 3);
}

#[test]
fn assoc_of_generators_is_monomial_normalized() {
    let v = json(&["assoc", "--gens", "x^2;y^2"]);
    assert_eq!(v["result"]["dual_form"], "u1*u2");
    assert_eq!(v["result"]["normalization"], "monomial");
}

#[test]
fn stability_of_x2y_without_random_frames() {
    let v = json(&["stability", "--form", "x^2*y", "--budget", "0"]);
    assert_eq!(v["result"]["status"], "unstable");
    assert_eq!(v["certificate"]["lambda"], serde_json::json!([1, -1]));
    assert_eq!(v["certificate"]["frame"], serde_json::json!([["1", "0"], ["0", "1"]]));
    assert_eq!(v["result"]["binary"]["max_multiplicity"], 2);
}

#[test]
fn stability_of_smooth_binary_cubic_is_stable() {
    let v = json(&["stability", "--form", "x^3+y^3", "--budget", "2"]);
    assert_eq!(v["result"]["status"], "stable");
    assert!(v["certificate"].is_null());
}

#[test]
fn stability_without_exact_oracle_reports_unknown() {
    let (code, stdout, _) = gitmilnor(&["stability", "--form", "x^3+y^3+z^3", "--budget", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["result"]["status"], "unknown");
    assert_eq!(v["result"]["search"]["certificate"]["kind"], "budget");
    assert_eq!(v["result"]["search"]["certificate"]["frames_tried"], 3);
}

#[test]
fn hilbert_of_squares() {
    let v = json(&["hilbert", "--gens", "x^2;y^2", "--m", "2"]);
    assert_eq!(v["result"]["codim"], 1);
    assert_eq!(v["result"]["pivots"], serde_json::json!(["x1^2", "x2^2"]));
    assert_eq!(v["result"]["non_pivots"], serde_json::json!(["x1*x2"]));
    assert_eq!(v["result"]["hilbert_function"], serde_json::json!([1, 2, 1, 0]));
    assert_eq!(v["result"]["lambda"], serde_json::json!([-1, 1]));
}

#[test]
fn hilbert_accepts_an_explicit_lambda() {
    let v = json(&["hilbert", "--gens", "x^2;x*y+y^2", "--m", "2", "--lambda", "-1,1"]);
    assert_eq!(v["result"]["non_pivots"], serde_json::json!(["x2^2"]));
}

#[test]
fn gradient_reports_degenerate_forms_with_certificate() {
    let v = json(&["gradient", "--form", "x^3", "--n", "2"]);
    assert_eq!(v["result"]["status"], "degenerate");
    assert_eq!(v["result"]["rank"], 1);
    assert!(v["certificate"]["lambda"].is_array());
}

#[test]
fn gradient_of_smooth_form() {
    let v = json(&["gradient", "--form", "x^3+y^3+z^3"]);
    assert_eq!(v["result"]["rank"], 3);
    assert_eq!(v["result"]["hm_weight"], 0);
}

#[test]
fn text_format() {
    let (code, stdout, _) = gitmilnor(&["stability", "--form", "x^2*y", "--budget", "0", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("result.status: unstable"));
    assert!(stdout.contains("certificate.lambda: [1,-1]"));
}

#[test]
fn identical_seeds_give_identical_reports() {
    let args = ["stability", "--form", "x*y*z+y^3-2*x*z^2", "--budget", "6", "--seed", "17"];
    assert_eq!(without_timing(json(&args)), without_timing(json(&args)));
    let args = ["verify-gradient-theorem", "--family", "random-sparse", "--count", "15", "--seed", "3"];
    assert_eq!(without_timing(json(&args)), without_timing(json(&args)));
}

#[test]
fn rationals_round_trip_through_json() {
    let v = json(&["assoc", "--form", "x^3+y^3+z^3"]);
    let text = serde_json::to_string(&v).unwrap();
    let back: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v, back);
    assert_eq!(back["result"]["dual_form"], "1/216*u1*u2*u3");
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        vec!["gradient", "--form", "x^2+y^3"],
        vec!["gradient", "--form", "x^^2"],
        vec!["assoc", "--gens", "x^2;x*y"],
        vec!["verify-gradient-theorem", "--family", "nope"],
        vec!["stability", "--form", "x^2*y", "--entry-bound", "0"],
        vec!["assoc"],
        vec!["frobnicate"],
    ] {
        let (code, _, stderr) = gitmilnor(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn verification_runs_exit_with_zero() {
    let v = json(&["verify-gradient-theorem", "--family", "binary-catalog", "--degree", "3", "--count", "0"]);
    assert_eq!(v["result"]["ok"], true);
    assert_eq!(v["result"]["tally"]["items"], 272);
    let v = json(&["verify-assoc-theorem", "--family", "fermat", "--n", "3", "--degree", "3"]);
    assert_eq!(v["result"]["ok"], true);
}

#[test]
fn binary_catalog_of_degree_three_has_no_violations() {
    let spec = CorpusSpec::new(Family::BinaryCatalog, 2, 3, 0, 0);
    let report = verify_gradient_theorem(&spec, &SearchConfig::default()).unwrap();
    assert!(report.ok(), "{:?}", report.violations);
    assert_eq!(report.tally.binary_checks, 272);
}

#[test]
fn disjoint_sums_are_strictly_semistable_under_the_boundary_one_ps() {
    let spec = CorpusSpec::new(Family::DisjointSums, 4, 3, 15, 5);
    let report = verify_gradient_theorem(&spec, &SearchConfig { frame_budget: 2, ..Default::default() }).unwrap();
    assert!(report.ok(), "{:?}", report.violations);
    assert_eq!(report.tally.decomposition_checks, 15);
}

#[test]
fn random_smooth_ternary_quadrics_have_no_violations() {
    let spec = CorpusSpec::new(Family::RandomSmooth, 3, 3, 50, 9);
    let report = verify_gradient_theorem(&spec, &SearchConfig { frame_budget: 2, ..Default::default() }).unwrap();
    assert!(report.ok(), "{:?}", report.violations);
    assert_eq!(report.tally.items, 50);
}

#[test]
fn fermat_socle_monomial_is_balanced() {
    for n in 2..=3 {
        for degree in 3..=4u32 {
            let items = generate(&CorpusSpec::new(Family::Fermat, n, degree, 1, 0)).unwrap();
            let gens = items[0].generators();
            let point = hilbert_point(&gens, socle_degree(n, degree - 1), true).unwrap();
            for lambda in sorted_grid(n, 6) {
                let report = point.socle_monomial(&lambda).unwrap();
                assert!(report.dominates);
                assert_eq!(report.missing, ExponentVector::balanced(n, degree - 2));
            }
            let spec = CorpusSpec::new(Family::Fermat, n, degree, 1, 0);
            let report = verify_assoc_theorem(&spec, &SearchConfig::default(), 6, 3).unwrap();
            assert!(report.ok(), "{:?}", report.violations);
        }
    }
}

#[test]
fn random_smooth_binary_forms_satisfy_the_associated_form_theorem() {
    for degree in 3..=5 {
        let spec = CorpusSpec::new(Family::RandomSmooth, 2, degree, 100, degree as u64);
        let report = verify_assoc_theorem(&spec, &SearchConfig::default(), 6, 1).unwrap();
        assert!(report.ok(), "{:?}", report.violations);
        assert_eq!(report.tally.items, 100);
    }
}

#[test]
fn single_item_x2_plus_y2_and_xy() {
    let gens = vec![parse_polynomial("x^2+y^2", None).unwrap(), parse_polynomial("x*y", None).unwrap()];
    let point = hilbert_point(&gens, 2, true).unwrap();
    for lambda in sorted_grid(2, 6) {
        let report = point.socle_monomial(&lambda).unwrap();
        assert!(report.dominates);
        assert_eq!(report.missing, ExponentVector::new(vec![0, 2]));
    }
    let report = verify_assoc_theorem_on(vec![CorpusItem::Generators(gens)], &SearchConfig::default(), 6, 0);
    assert!(report.ok(), "{:?}", report.violations);
}

#[test]
fn corpus_forms_round_trip_through_text() {
    for family in [Family::Fermat, Family::RandomSmooth, Family::RandomSparse, Family::DisjointSums] {
        for item in generate(&CorpusSpec::new(family, 3, 4, 10, 1)).unwrap() {
            for g in item.generators() {
                assert_eq!(parse_polynomial(&g.to_string(), Some(3)).unwrap(), g);
            }
        }
    }
}
