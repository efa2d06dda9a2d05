//! Simultaneous hypothesis-testing-plus-estimation procedures and the
//! verification engines (exact enumeration and seeded Monte Carlo) for their
//! coverage and consistency claims.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::confidence::{confidence_distribution, confidence_interval, ConfidenceInterval, PValueKind};
use crate::dist::{posterior_update, EvidenceData, MixedBetaDistribution, PriorSpec};
use crate::error::{Error, Result};
use crate::numerics::binomial_pmf;

/// The hypothesis a decision procedure settles on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AcceptedHypothesis {
    ThetaEqualsOne,
    ThetaEqualsZero,
    ThetaInterior,
}

/// Outcome of a simultaneous test-and-estimate procedure: the accepted
/// hypothesis, the confidence mass behind it, an interval estimate
/// (degenerate at the boundary decisions), and the full distribution the
/// decision was read from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleDecision {
    pub accepted: AcceptedHypothesis,
    pub confidence_mass: f64,
    pub interval: Option<ConfidenceInterval>,
    pub dist: MixedBetaDistribution,
}

/// Two-way decision driven by the induced Beta(1, 0) prior:
/// theta = 1 against theta != 1.
///
/// All successes accept theta = 1 with confidence mass exactly 1 and the
/// degenerate interval {1}; anything else accepts the interior with an
/// equal-tailed interval from Beta(t + 1, n - t) at the given level.
pub fn oracle_test_two_way(data: &EvidenceData, level: f64) -> Result<OracleDecision> {
    if data.n() == 0 {
        return Err(Error::InvalidArgument(
            "oracle testing requires at least one trial".into(),
        ));
    }
    let dist = posterior_update(&PriorSpec::induced_left(), data)?;
    let interval = confidence_interval(&dist, level)?;
    let (accepted, confidence_mass) = if data.all_successes() {
        (AcceptedHypothesis::ThetaEqualsOne, dist.mass_at_one())
    } else {
        (AcceptedHypothesis::ThetaInterior, dist.continuous_weight())
    };
    Ok(OracleDecision {
        accepted,
        confidence_mass,
        interval: Some(interval),
        dist,
    })
}

/// Three-way decision driven by the Beta(0, 0) prior: theta = 1, theta = 0,
/// or theta interior with a Beta(t, n - t) confidence density.
pub fn oracle_test_three_way(data: &EvidenceData, level: f64) -> Result<OracleDecision> {
    if data.n() == 0 {
        return Err(Error::InvalidArgument(
            "oracle testing requires at least one trial".into(),
        ));
    }
    let dist = posterior_update(&PriorSpec::haldane(), data)?;
    let interval = confidence_interval(&dist, level)?;
    let (accepted, confidence_mass) = if data.all_successes() {
        (AcceptedHypothesis::ThetaEqualsOne, dist.mass_at_one())
    } else if data.all_failures() {
        (AcceptedHypothesis::ThetaEqualsZero, dist.mass_at_zero())
    } else {
        (AcceptedHypothesis::ThetaInterior, dist.continuous_weight())
    };
    Ok(OracleDecision {
        accepted,
        confidence_mass,
        interval: Some(interval),
        dist,
    })
}

/// An interval-producing procedure whose coverage can be verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Procedure {
    /// Induced Beta(1, 0) route; degenerates to {1} on all successes.
    TwoWay,
    /// Haldane Beta(0, 0) route; degenerates to {1} or {0} on unanimous data.
    ThreeWay,
    /// Mid-P confidence distribution Beta(t + 1/2, n - t + 1/2); never degenerates.
    MidP,
    /// Equal-tailed Beta(t + 1, n - t + 1) credible interval, as a baseline.
    LaplaceCredible,
}

impl Procedure {
    pub const ALL: [Procedure; 4] = [
        Procedure::TwoWay,
        Procedure::ThreeWay,
        Procedure::MidP,
        Procedure::LaplaceCredible,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::TwoWay => "two_way",
            Self::ThreeWay => "three_way",
            Self::MidP => "mid_p",
            Self::LaplaceCredible => "laplace_credible",
        }
    }

    /// The distribution the procedure reads its interval from.
    pub fn distribution(&self, data: &EvidenceData) -> Result<MixedBetaDistribution> {
        match self {
            Self::TwoWay => posterior_update(&PriorSpec::induced_left(), data),
            Self::ThreeWay => posterior_update(&PriorSpec::haldane(), data),
            Self::MidP => confidence_distribution(PValueKind::MidP, data),
            Self::LaplaceCredible => posterior_update(&PriorSpec::laplace(), data),
        }
    }

    /// The interval reported at `level` for the given data.
    pub fn interval(&self, data: &EvidenceData, level: f64) -> Result<ConfidenceInterval> {
        confidence_interval(&self.distribution(data)?, level)
    }
}

impl fmt::Display for Procedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Procedure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two_way" => Ok(Self::TwoWay),
            "three_way" => Ok(Self::ThreeWay),
            "mid_p" => Ok(Self::MidP),
            "laplace_credible" => Ok(Self::LaplaceCredible),
            other => Err(Error::UnknownProcedure(other.to_string())),
        }
    }
}

/// How a coverage number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverageMethod {
    ExactEnumeration,
    MonteCarlo,
}

/// Coverage of a procedure's interval at one (theta, n) cell, together with
/// the rate at which the procedure declares theta = 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub theta_true: f64,
    pub n: u64,
    pub procedure: Procedure,
    pub nominal_level: f64,
    pub coverage: f64,
    pub accept_h1_rate: f64,
    pub method: CoverageMethod,
    pub replicates: Option<u64>,
    pub seed: Option<u64>,
}

fn validate_cell(theta_true: f64, n: u64, level: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&theta_true) {
        return Err(Error::OutOfUnitInterval {
            name: "theta_true",
            value: theta_true,
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument(
            "coverage requires at least one trial".into(),
        ));
    }
    if !(level > 0.0 && level <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "level must lie in (0, 1], got {level}"
        )));
    }
    Ok(())
}

/// Whether the procedure's interval at each possible t contains theta_true.
fn containment_table(
    procedure: Procedure,
    n: u64,
    level: f64,
    theta_true: f64,
) -> Result<Vec<bool>> {
    (0..=n)
        .map(|t| {
            let data = EvidenceData::new(n, t)?;
            Ok(procedure.interval(&data, level)?.contains(theta_true))
        })
        .collect()
}

/// Exact coverage by enumeration over all n + 1 outcomes:
/// sum of binomial masses of the t whose interval covers theta_true.
/// Deterministic, bit-reproducible.
pub fn coverage_exact(
    theta_true: f64,
    n: u64,
    procedure: Procedure,
    level: f64,
) -> Result<CoverageReport> {
    validate_cell(theta_true, n, level)?;
    let contains = containment_table(procedure, n, level, theta_true)?;
    let mut coverage = 0.0;
    for (t, covered) in contains.iter().enumerate() {
        if *covered {
            coverage += binomial_pmf(n, t as u64, theta_true)?;
        }
    }
    Ok(CoverageReport {
        theta_true,
        n,
        procedure,
        nominal_level: level,
        coverage: coverage.min(1.0),
        accept_h1_rate: binomial_pmf(n, n, theta_true)?,
        method: CoverageMethod::ExactEnumeration,
        replicates: None,
        seed: None,
    })
}

/// One success count drawn from Binomial(n, theta); replicate k reads an RNG
/// stream derived from (seed, k), so any evaluation order gives the same draw.
fn sample_success_count(n: u64, theta: f64, seed: u64, replicate: u64) -> u64 {
    if theta <= 0.0 {
        return 0;
    }
    if theta >= 1.0 {
        return n;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    Binomial::new(n, theta)
        .expect("theta validated")
        .sample(&mut rng)
}

/// Empirical coverage over seeded binomial draws. Identical seeds give
/// identical reports; agreement with [`coverage_exact`] is expected within a
/// few Monte Carlo standard errors.
pub fn coverage_monte_carlo(
    theta_true: f64,
    n: u64,
    procedure: Procedure,
    level: f64,
    replicates: u64,
    seed: u64,
) -> Result<CoverageReport> {
    validate_cell(theta_true, n, level)?;
    if replicates == 0 {
        return Err(Error::InvalidArgument(
            "replicates must be at least 1".into(),
        ));
    }
    let contains = containment_table(procedure, n, level, theta_true)?;
    let mut covered = 0u64;
    let mut accepted_h1 = 0u64;
    for k in 0..replicates {
        let t = sample_success_count(n, theta_true, seed, k);
        if contains[t as usize] {
            covered += 1;
        }
        if t == n {
            accepted_h1 += 1;
        }
    }
    Ok(CoverageReport {
        theta_true,
        n,
        procedure,
        nominal_level: level,
        coverage: covered as f64 / replicates as f64,
        accept_h1_rate: accepted_h1 as f64 / replicates as f64,
        method: CoverageMethod::MonteCarlo,
        replicates: Some(replicates),
        seed: Some(seed),
    })
}

/// Exact coverage reports along a grid of sample sizes, for consistency
/// checks as n grows.
pub fn consistency_scan(
    procedure: Procedure,
    theta_true: f64,
    n_grid: &[u64],
    level: f64,
) -> Result<Vec<CoverageReport>> {
    if n_grid.is_empty() {
        return Err(Error::InvalidArgument("empty sample-size grid".into()));
    }
    n_grid
        .iter()
        .map(|&n| coverage_exact(theta_true, n, procedure, level))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::theta_power;

    fn evidence(n: u64, t: u64) -> EvidenceData {
        EvidenceData::new(n, t).unwrap()
    }

    #[test]
    fn two_way_decisions() {
        let d = oracle_test_two_way(&evidence(5, 5), 0.95).unwrap();
        assert_eq!(d.accepted, AcceptedHypothesis::ThetaEqualsOne);
        assert_eq!(d.confidence_mass, 1.0);
        assert_eq!(d.interval.unwrap().degenerate_point, Some(1.0));

        let d = oracle_test_two_way(&evidence(5, 3), 0.95).unwrap();
        assert_eq!(d.accepted, AcceptedHypothesis::ThetaInterior);
        assert_eq!(d.confidence_mass, 1.0);
        let s = d.dist.shape().unwrap();
        assert_eq!((s.alpha, s.beta), (4.0, 2.0));
        let ci = d.interval.unwrap();
        // equal-tailed Beta(4, 2) quantiles, precomputed
        assert!((ci.lower - 0.28358206388191049018).abs() < 1e-8);
        assert!((ci.upper - 0.94725504947368307476).abs() < 1e-8);

        let d = oracle_test_two_way(&evidence(1, 0), 0.95).unwrap();
        assert_eq!(d.accepted, AcceptedHypothesis::ThetaInterior);

        assert!(oracle_test_two_way(&evidence(0, 0), 0.95).is_err());
    }

    #[test]
    fn two_way_reaches_full_confidence_for_every_n() {
        for n in 1..=200u64 {
            let d = oracle_test_two_way(&evidence(n, n), 0.95).unwrap();
            assert_eq!(d.confidence_mass, 1.0, "n = {n}");
            assert_eq!(d.interval.unwrap().degenerate_point, Some(1.0));
        }
    }

    #[test]
    fn three_way_decisions() {
        let d = oracle_test_three_way(&evidence(7, 7), 0.5).unwrap();
        assert_eq!(d.accepted, AcceptedHypothesis::ThetaEqualsOne);
        assert_eq!(d.interval.unwrap().degenerate_point, Some(1.0));

        let d = oracle_test_three_way(&evidence(7, 0), 0.5).unwrap();
        assert_eq!(d.accepted, AcceptedHypothesis::ThetaEqualsZero);
        assert_eq!(d.interval.unwrap().degenerate_point, Some(0.0));

        let d = oracle_test_three_way(&evidence(7, 3), 0.95).unwrap();
        assert_eq!(d.accepted, AcceptedHypothesis::ThetaInterior);
        let s = d.dist.shape().unwrap();
        assert_eq!((s.alpha, s.beta), (3.0, 4.0));
        let ci = d.interval.unwrap();
        assert!((ci.lower - 0.11811724875702520736).abs() < 1e-8);
        assert!((ci.upper - 0.77722190449648782931).abs() < 1e-8);

        assert!(oracle_test_three_way(&evidence(0, 0), 0.95).is_err());
    }

    #[test]
    fn exact_coverage_at_theta_one() {
        let report = coverage_exact(1.0, 10, Procedure::TwoWay, 0.95).unwrap();
        assert_eq!(report.coverage, 1.0);
        assert_eq!(report.accept_h1_rate, 1.0);
    }

    #[test]
    fn exact_coverage_single_trial_three_way_baseline() {
        // n = 1 only has the two degenerate decisions, neither covering 0.5
        let report = coverage_exact(0.5, 1, Procedure::ThreeWay, 0.95).unwrap();
        assert_eq!(report.coverage, 0.0);
    }

    #[test]
    fn exact_coverage_regression_values_for_two_way() {
        // independently enumerated reference values (equal tails of a single
        // confidence density are close to, but not uniformly above, nominal)
        let mid = coverage_exact(0.5, 50, Procedure::TwoWay, 0.95).unwrap();
        assert!((mid.coverage - 0.951126107681729).abs() < 1e-9);
        assert!(mid.coverage >= 0.95);
        let high = coverage_exact(0.9, 50, Procedure::TwoWay, 0.95).unwrap();
        assert!((high.coverage - 0.941676204602977).abs() < 1e-9);
    }

    #[test]
    fn exact_coverage_is_deterministic() {
        let a = coverage_exact(0.37, 25, Procedure::MidP, 0.9).unwrap();
        let b = coverage_exact(0.37, 25, Procedure::MidP, 0.9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn acceptance_rate_has_the_closed_form() {
        for &theta in &[0.5, 0.9, 0.99] {
            for &n in &[10u64, 100] {
                let report = coverage_exact(theta, n, Procedure::TwoWay, 0.95).unwrap();
                assert_eq!(report.accept_h1_rate, theta_power(theta, n));
            }
        }
        assert_eq!(
            coverage_exact(0.0, 5, Procedure::TwoWay, 0.95)
                .unwrap()
                .accept_h1_rate,
            0.0
        );
    }

    #[test]
    fn consistency_scan_acceptance_rates() {
        let grid = [1u64, 10, 100];
        let sure = consistency_scan(Procedure::TwoWay, 1.0, &grid, 0.95).unwrap();
        assert!(sure.iter().all(|r| r.accept_h1_rate == 1.0));

        let fading = consistency_scan(Procedure::TwoWay, 0.9, &grid, 0.95).unwrap();
        for (report, &n) in fading.iter().zip(&grid) {
            assert_eq!(report.accept_h1_rate, theta_power(0.9, n));
        }
        let rates: Vec<f64> = fading.iter().map(|r| r.accept_h1_rate).collect();
        assert!(rates[0] > rates[1] && rates[1] > rates[2]);

        assert!(consistency_scan(Procedure::TwoWay, 0.5, &[], 0.95).is_err());
    }

    #[test]
    fn monte_carlo_at_theta_one_covers_always() {
        let report = coverage_monte_carlo(1.0, 10, Procedure::TwoWay, 0.95, 1000, 42).unwrap();
        assert_eq!(report.coverage, 1.0);
        assert_eq!(report.accept_h1_rate, 1.0);
    }

    #[test]
    fn monte_carlo_is_reproducible_and_order_free() {
        let a = coverage_monte_carlo(0.5, 20, Procedure::TwoWay, 0.95, 5000, 7).unwrap();
        let b = coverage_monte_carlo(0.5, 20, Procedure::TwoWay, 0.95, 5000, 7).unwrap();
        assert_eq!(a, b);

        // per-replicate streams: summing the draws in reverse order changes nothing
        let forward: u64 = (0..5000u64)
            .map(|k| sample_success_count(20, 0.5, 7, k))
            .sum();
        let backward: u64 = (0..5000u64)
            .rev()
            .map(|k| sample_success_count(20, 0.5, 7, k))
            .sum();
        assert_eq!(forward, backward);

        let other_seed = coverage_monte_carlo(0.5, 20, Procedure::TwoWay, 0.95, 5000, 8).unwrap();
        assert_ne!(a.coverage, other_seed.coverage);
    }

    #[test]
    fn monte_carlo_tracks_exact_enumeration() {
        let exact = coverage_exact(0.5, 20, Procedure::TwoWay, 0.95).unwrap();
        let mc = coverage_monte_carlo(0.5, 20, Procedure::TwoWay, 0.95, 100_000, 7).unwrap();
        let se = (exact.coverage * (1.0 - exact.coverage) / 100_000.0).sqrt();
        assert!(
            (mc.coverage - exact.coverage).abs() <= 4.0 * se,
            "MC {} vs exact {} (SE {se})",
            mc.coverage,
            exact.coverage
        );
    }

    #[test]
    fn monte_carlo_acceptance_rate_matches_closed_form() {
        let report =
            coverage_monte_carlo(0.999, 100, Procedure::ThreeWay, 0.95, 10_000, 1).unwrap();
        let expected = theta_power(0.999, 100);
        let se = (expected * (1.0 - expected) / 10_000.0).sqrt();
        assert!((report.accept_h1_rate - expected).abs() <= 4.0 * se);
    }

    #[test]
    fn monte_carlo_rejects_zero_replicates() {
        assert!(coverage_monte_carlo(0.5, 5, Procedure::TwoWay, 0.95, 0, 1).is_err());
    }

    #[test]
    fn mid_p_interval_never_degenerates_at_full_success() {
        for n in (1..=200u64).step_by(7).chain([200]) {
            let data = evidence(n, n);
            // at level 1 the interval is the whole unit interval, not {1}
            let full = Procedure::MidP.interval(&data, 1.0).unwrap();
            assert_eq!(full.upper, 1.0);
            assert_eq!(full.lower, 0.0);
            assert!(full.lower < 1.0 && full.width() > 0.0);
            // at interior levels it is a genuine interval with upper < 1
            let ci = Procedure::MidP.interval(&data, 0.95).unwrap();
            assert!(ci.width() > 0.0, "degenerate at n = {n}");
            assert!(ci.upper < 1.0);
            assert!(ci.degenerate_point.is_none());
        }
    }

    #[test]
    fn procedure_parsing() {
        for p in Procedure::ALL {
            assert_eq!(p.name().parse::<Procedure>().unwrap(), p);
        }
        assert!(matches!(
            "four_way".parse::<Procedure>(),
            Err(Error::UnknownProcedure(_))
        ));
    }

    #[test]
    fn coverage_argument_validation() {
        assert!(coverage_exact(1.5, 5, Procedure::TwoWay, 0.95).is_err());
        assert!(coverage_exact(0.5, 0, Procedure::TwoWay, 0.95).is_err());
        assert!(coverage_exact(0.5, 5, Procedure::TwoWay, 0.0).is_err());
    }
}
