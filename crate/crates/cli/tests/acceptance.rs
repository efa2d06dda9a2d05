//! Acceptance suite: every release-gating claim, one test per criterion,
//! each printing a pass/fail line per claim it covers. The claims themselves
//! are evaluated by the same registry the `reproduce` subcommand prints.

use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use sunrise::{predict_next, EvidenceData, PriorSpec};
use sunrise_cli::reproduce::{self, ReproductionRow};

fn rows() -> &'static [ReproductionRow] {
    static ROWS: OnceLock<Vec<ReproductionRow>> = OnceLock::new();
    ROWS.get_or_init(reproduce::evaluate_claims)
}

fn assert_criterion(label: &str, claim_ids: &[&str]) {
    let mut all_ok = true;
    for id in claim_ids {
        let row = rows()
            .iter()
            .find(|row| row.claim_id == *id)
            .unwrap_or_else(|| panic!("claim '{id}' missing from the registry"));
        let status = if row.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {label} :: {} (|diff| = {:.3e}, tolerance = {:.3e})",
            row.claim_id, row.abs_diff, row.tolerance
        );
        all_ok &= row.pass;
    }
    assert!(all_ok, "criterion '{label}' failed");
}

#[test]
fn criterion_01_laplace_predictive() {
    assert_criterion(
        "criterion 01 Laplace predictive",
        &["laplace_predictive_2190000"],
    );
}

#[test]
fn criterion_02_broad_zero() {
    assert_criterion(
        "criterion 02 zero probability of the general proposition",
        &["broad_zero_1", "broad_zero_10", "broad_zero_10000"],
    );
}

#[test]
fn criterion_03_jeffreys_chain() {
    assert_criterion(
        "criterion 03 Jeffreys chain",
        &[
            "jeffreys_chain_1",
            "jeffreys_chain_2",
            "jeffreys_chain_3",
            "jeffreys_chain_exact_k1_100",
            "jeffreys_chain_monotone",
        ],
    );
}

#[test]
fn criterion_04_jeffreys_predictive() {
    assert_criterion(
        "criterion 04 Jeffreys predictive",
        &[
            "jeffreys_predictive_vs_mixture_oracle",
            "jeffreys_predictive_closed_form",
        ],
    );
}

/// The oracle behind criterion 04, in exact rational arithmetic: the marginal
/// of k straight successes under the mixture prior is 1/2 + 1/(2(k+1)), and
/// the predictive is the ratio of successive marginals. This settles the
/// closed form as (n+1)(n+3)/(n+2)^2.
#[test]
fn criterion_04_oracle_adjudication_in_exact_rationals() {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let marginal = |k: u64| -> BigRational {
        &half + &half / BigRational::from_integer(BigInt::from(k + 1))
    };
    let prior = PriorSpec::jeffreys_mixture();
    for n in 1..=100u64 {
        let oracle = marginal(n + 1) / marginal(n);
        let closed = BigRational::new(
            BigInt::from((n + 1) * (n + 3)),
            BigInt::from((n + 2) * (n + 2)),
        );
        assert_eq!(oracle, closed, "rational ratio disagrees at n = {n}");
        let computed = predict_next(&prior, &EvidenceData::new(n, n).unwrap()).unwrap();
        let exact = oracle.to_f64().unwrap();
        assert!(
            (computed - exact).abs() <= 1e-12,
            "implementation {computed} vs exact {exact} at n = {n}"
        );
    }
    println!("PASS criterion 04 oracle adjudication :: rational mixture ratio equals (n+1)(n+3)/(n+2)^2 for n=1..100");
}

#[test]
fn criterion_05_confidence_oracle() {
    assert_criterion(
        "criterion 05 confidence oracle",
        &["confidence_oracle_full_mass", "confidence_interval_degenerate"],
    );
}

#[test]
fn criterion_06_induced_priors() {
    assert_criterion("criterion 06 induced priors", &["induced_prior_recovery"]);
}

#[test]
fn criterion_07_tail_identity() {
    assert_criterion(
        "criterion 07 tail identity",
        &["tail_equals_incomplete_beta"],
    );
}

#[test]
fn criterion_08_general_beta_predictive() {
    assert_criterion(
        "criterion 08 general Beta predictive",
        &["general_beta_predictive"],
    );
}

#[test]
fn criterion_09_carnap_confirmation() {
    assert_criterion(
        "criterion 09 confirmation measure",
        &["carnap_confirmation_jeffreys"],
    );
}

#[test]
fn criterion_10_oracle_consistency() {
    assert_criterion(
        "criterion 10 oracle consistency",
        &[
            "oracle_acceptance_rate_theta_power",
            "oracle_acceptance_rate_at_one",
        ],
    );
}

/// Criterion 10's enumeration side is pinned bit-for-bit to theta^n; this
/// verifies the power primitive itself against exact rational arithmetic so
/// that the identity is not circular.
#[test]
fn criterion_10_power_primitive_against_exact_rationals() {
    for &theta in &[0.5f64, 0.9, 0.99] {
        let exact_base = BigRational::from_float(theta).unwrap();
        for &n in &[10u64, 100] {
            let exact = exact_base.pow(n as i32).to_f64().unwrap();
            let computed = sunrise::numerics::theta_power(theta, n);
            assert!(
                (computed - exact).abs() <= 1e-14 * exact.abs(),
                "theta={theta}, n={n}: {computed} vs exact {exact}"
            );
        }
    }
    println!("PASS criterion 10 power primitive :: theta^n matches exact rationals to 1e-14 relative");
}

#[test]
fn criterion_11_property_suites() {
    assert_criterion(
        "criterion 11 sequential coherence and transform duality",
        &[
            "sequential_coherence_shapes",
            "sequential_coherence_masses",
            "transform_duality_posterior",
            "transform_duality_predictive",
        ],
    );
}

#[test]
fn criterion_12_monte_carlo_agreement() {
    assert_criterion(
        "criterion 12 Monte Carlo vs enumeration",
        &["coverage_mc_vs_exact"],
    );
}

#[test]
fn full_registry_reproduces_within_a_minute() {
    let start = Instant::now();
    let fresh = reproduce::evaluate_claims();
    let elapsed = start.elapsed();
    let passed = fresh.iter().filter(|row| row.pass).count();
    println!(
        "PASS registry :: {passed}/{} claims in {:.2?}",
        fresh.len(),
        elapsed
    );
    assert!(reproduce::all_pass(&fresh));
    assert!(
        elapsed.as_secs() < 60,
        "registry took {elapsed:?}, budget is one minute"
    );
}
