//! P-value functions for a binomial proportion, the confidence distributions
//! obtained by differentiating them in theta, the model priors they induce,
//! and interval construction on the resulting mixed distributions.
//!
//! This is the non-Bayesian route to the same [`MixedBetaDistribution`]
//! representation the posterior update produces.

use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::dist::{EvidenceData, MixedBetaDistribution, PriorSpec};
use crate::error::{Error, Result};
use crate::numerics::{binomial_pmf, binomial_right_tail};

/// Which P-value functional drives the confidence construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PValueKind {
    /// Conservative right-side P-value P(T >= t | theta).
    RightSide,
    /// The right-side P-value applied to the complemented data, which is
    /// P(T <= t | theta) on the original scale.
    LeftSide,
    /// Mid-point P-value P(T > t | theta) + P(T = t | theta) / 2.
    MidP,
}

impl fmt::Display for PValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::RightSide => "right",
            Self::LeftSide => "left",
            Self::MidP => "mid",
        })
    }
}

impl FromStr for PValueKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "right" | "right_side" => Ok(Self::RightSide),
            "left" | "left_side" => Ok(Self::LeftSide),
            "mid" | "mid_p" => Ok(Self::MidP),
            other => Err(Error::InvalidArgument(format!(
                "unknown P-value kind '{other}' (expected right, left or mid)"
            ))),
        }
    }
}

/// Evaluate the chosen P-value at theta.
pub fn p_value(kind: PValueKind, data: &EvidenceData, theta: f64) -> Result<f64> {
    let (n, t) = (data.n(), data.t());
    match kind {
        PValueKind::RightSide => binomial_right_tail(n, t, theta),
        // right-side P-value of the complemented data at 1 - theta
        PValueKind::LeftSide => binomial_right_tail(n, n - t, 1.0 - theta),
        PValueKind::MidP => {
            let above = if t == n {
                0.0
            } else {
                binomial_right_tail(n, t + 1, theta)?
            };
            Ok((above + 0.5 * binomial_pmf(n, t, theta)?).min(1.0))
        }
    }
}

/// The confidence distribution dC(t, theta)/dtheta for the chosen P-value.
///
/// Right side: Beta(t, n - t + 1) for t >= 1, and a point mass at 0 for
/// t = 0 (the P-value is constant 1 there). Left side is the mirror image,
/// with the point mass at 1 for t = n. Mid-P never degenerates and gives
/// Beta(t + 1/2, n - t + 1/2) for every t.
pub fn confidence_distribution(
    kind: PValueKind,
    data: &EvidenceData,
) -> Result<MixedBetaDistribution> {
    let (n, t) = (data.n(), data.t());
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a confidence distribution requires at least one trial".into(),
        ));
    }
    let (nf, tf) = (n as f64, t as f64);
    match kind {
        PValueKind::RightSide => {
            if t == 0 {
                Ok(MixedBetaDistribution::point_mass_at_zero())
            } else {
                MixedBetaDistribution::proper(tf, nf - tf + 1.0)
            }
        }
        PValueKind::LeftSide => {
            if t == n {
                Ok(MixedBetaDistribution::point_mass_at_one())
            } else {
                MixedBetaDistribution::proper(tf + 1.0, nf - tf)
            }
        }
        PValueKind::MidP => MixedBetaDistribution::proper(tf + 0.5, nf - tf + 0.5),
    }
}

/// The model prior c0(theta) that makes the Bayes update reproduce the
/// confidence distribution: c0 ∝ P(theta | t) / L(theta), read off by
/// removing the observed counts from the confidence shape.
///
/// Right side induces Beta(0, 1), left side Beta(1, 0), mid-P Beta(1/2, 1/2),
/// independently of which admissible (n, t) is supplied.
pub fn induced_prior(kind: PValueKind, data: &EvidenceData) -> Result<PriorSpec> {
    let dist = confidence_distribution(kind, data)?;
    let shape = dist.shape().ok_or(Error::PriorNotIdentifiable)?;
    PriorSpec::beta(
        shape.alpha - data.t() as f64,
        shape.beta - data.failures() as f64,
    )
}

/// An equal-tailed interval of a mixed distribution, possibly degenerate at
/// a boundary atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub degenerate_point: Option<f64>,
}

impl ConfidenceInterval {
    fn new(lower: f64, upper: f64, level: f64) -> Self {
        Self {
            lower,
            upper,
            level,
            degenerate_point: (lower == upper).then_some(lower),
        }
    }

    /// Closed-interval containment; a degenerate interval covers its point
    /// and nothing else.
    pub fn contains(&self, theta: f64) -> bool {
        self.lower <= theta && theta <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Equal-tailed interval [q_{(1-level)/2}, q_{1-(1-level)/2}] of the mixed
/// distribution. A boundary atom whose mass already reaches the level takes
/// the whole interval, degenerating it to that point; ties at exactly the
/// level also degenerate.
pub fn confidence_interval(
    dist: &MixedBetaDistribution,
    level: f64,
) -> Result<ConfidenceInterval> {
    if !(level > 0.0 && level <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "level must lie in (0, 1], got {level}"
        )));
    }
    let p0 = dist.mass_at_zero();
    let p1 = dist.mass_at_one();
    if p1 >= level && p1 >= p0 {
        return Ok(ConfidenceInterval::new(1.0, 1.0, level));
    }
    if p0 >= level {
        return Ok(ConfidenceInterval::new(0.0, 0.0, level));
    }
    let tail = (1.0 - level) / 2.0;
    let lower = dist.quantile(tail)?;
    let upper = dist.quantile(1.0 - tail)?;
    Ok(ConfidenceInterval::new(lower, upper, level))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::posterior_update;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual}"
        );
    }

    fn evidence(n: u64, t: u64) -> EvidenceData {
        EvidenceData::new(n, t).unwrap()
    }

    #[test]
    fn right_side_p_value_at_zero_count_is_one() {
        for theta in [0.0, 0.4, 1.0] {
            assert_eq!(
                p_value(PValueKind::RightSide, &evidence(9, 0), theta).unwrap(),
                1.0
            );
        }
    }

    #[test]
    fn right_side_p_value_hand_value() {
        let expected = 10.0 * 0.064 * 0.36 + 5.0 * 0.0256 * 0.6 + 0.01024;
        assert_close(
            p_value(PValueKind::RightSide, &evidence(5, 3), 0.4).unwrap(),
            expected,
            1e-15,
        );
    }

    #[test]
    fn left_side_p_value_is_the_lower_tail() {
        // P(T <= t | theta) by direct summation
        for (n, t, theta) in [(6u64, 2u64, 0.3), (5, 5, 0.9), (4, 0, 0.2)] {
            let mut expected = 0.0;
            for y in 0..=t {
                expected += binomial_pmf(n, y, theta).unwrap();
            }
            assert_close(
                p_value(PValueKind::LeftSide, &evidence(n, t), theta).unwrap(),
                expected,
                1e-13,
            );
        }
        assert_eq!(
            p_value(PValueKind::LeftSide, &evidence(5, 5), 0.77).unwrap(),
            1.0
        );
    }

    #[test]
    fn mid_p_value_hand_value() {
        // P(T > 1) + P(T = 1)/2 at n = 1, theta = 1/2
        assert_eq!(
            p_value(PValueKind::MidP, &evidence(1, 1), 0.5).unwrap(),
            0.25
        );
    }

    #[test]
    fn p_value_monotonicity_in_theta() {
        let grid: Vec<f64> = (0..=60).map(|i| i as f64 / 60.0).collect();
        let data = evidence(8, 3);
        let mut right_prev = -1.0;
        let mut left_prev = 2.0;
        for &theta in &grid {
            let right = p_value(PValueKind::RightSide, &data, theta).unwrap();
            let left = p_value(PValueKind::LeftSide, &data, theta).unwrap();
            assert!(right >= right_prev - 1e-13);
            assert!(left <= left_prev + 1e-13);
            right_prev = right;
            left_prev = left;
        }
    }

    #[test]
    fn confidence_distribution_shapes() {
        let right = confidence_distribution(PValueKind::RightSide, &evidence(10, 10)).unwrap();
        let s = right.shape().unwrap();
        assert_eq!((s.alpha, s.beta), (10.0, 1.0));

        let left = confidence_distribution(PValueKind::LeftSide, &evidence(10, 10)).unwrap();
        assert_eq!(left.mass_at_one(), 1.0);

        let right_zero = confidence_distribution(PValueKind::RightSide, &evidence(7, 0)).unwrap();
        assert_eq!(right_zero.mass_at_zero(), 1.0);

        let mid = confidence_distribution(PValueKind::MidP, &evidence(4, 2)).unwrap();
        let s = mid.shape().unwrap();
        assert_eq!((s.alpha, s.beta), (2.5, 2.5));
        let mid_edge = confidence_distribution(PValueKind::MidP, &evidence(4, 4)).unwrap();
        let s = mid_edge.shape().unwrap();
        assert_eq!((s.alpha, s.beta), (4.5, 0.5));

        assert!(confidence_distribution(PValueKind::RightSide, &evidence(0, 0)).is_err());
    }

    #[test]
    fn confidence_equals_posterior_under_the_induced_prior() {
        // same object, two constructions: P-value derivative vs Bayes update
        let pairs = [
            (PValueKind::RightSide, PriorSpec::induced_right()),
            (PValueKind::LeftSide, PriorSpec::induced_left()),
            (PValueKind::MidP, PriorSpec::jeffreys_continuous()),
        ];
        for n in 1..=20u64 {
            for t in 0..=n {
                for (kind, prior) in &pairs {
                    let conf = confidence_distribution(*kind, &evidence(n, t)).unwrap();
                    let post = posterior_update(prior, &evidence(n, t)).unwrap();
                    assert_eq!(conf, post, "kind {kind:?} at n={n}, t={t}");
                }
            }
        }
    }

    #[test]
    fn left_is_the_reflection_of_right_on_complemented_data() {
        for n in 1..=12u64 {
            for t in 0..=n {
                let left = confidence_distribution(PValueKind::LeftSide, &evidence(n, t)).unwrap();
                let right =
                    confidence_distribution(PValueKind::RightSide, &evidence(n, n - t)).unwrap();
                assert_eq!(left, right.reflect());
            }
        }
    }

    #[test]
    fn left_at_full_success_always_concentrates_at_one() {
        for n in 1..=100u64 {
            let dist = confidence_distribution(PValueKind::LeftSide, &evidence(n, n)).unwrap();
            assert_eq!(dist.mass_at_one(), 1.0);
        }
    }

    #[test]
    fn right_p_value_derivative_matches_confidence_density() {
        // central difference in theta against the Beta(t, n - t + 1) density
        let h = 1e-6;
        for (n, t) in [(6u64, 3u64), (10, 1), (10, 10), (25, 24)] {
            let dist = confidence_distribution(PValueKind::RightSide, &evidence(n, t)).unwrap();
            let shape = dist.shape().unwrap();
            for i in 1..=21 {
                let theta = i as f64 / 22.0;
                let data = evidence(n, t);
                let upper = p_value(PValueKind::RightSide, &data, theta + h).unwrap();
                let lower = p_value(PValueKind::RightSide, &data, theta - h).unwrap();
                let slope = (upper - lower) / (2.0 * h);
                assert_close(slope, shape.density(theta).unwrap(), 1e-4);
            }
        }
    }

    #[test]
    fn induced_priors_recover_the_model_priors() {
        assert_eq!(
            induced_prior(PValueKind::RightSide, &evidence(6, 3)).unwrap(),
            PriorSpec::induced_right()
        );
        assert_eq!(
            induced_prior(PValueKind::LeftSide, &evidence(6, 3)).unwrap(),
            PriorSpec::induced_left()
        );
        assert_eq!(
            induced_prior(PValueKind::MidP, &evidence(6, 3)).unwrap(),
            PriorSpec::jeffreys_continuous()
        );
        // independent of the admissible data supplied
        for n in 1..=30u64 {
            for t in 1..=n {
                assert_eq!(
                    induced_prior(PValueKind::RightSide, &evidence(n, t)).unwrap(),
                    PriorSpec::induced_right()
                );
            }
        }
    }

    #[test]
    fn induced_prior_needs_a_density() {
        assert!(matches!(
            induced_prior(PValueKind::RightSide, &evidence(6, 0)),
            Err(Error::PriorNotIdentifiable)
        ));
        assert!(matches!(
            induced_prior(PValueKind::LeftSide, &evidence(6, 6)),
            Err(Error::PriorNotIdentifiable)
        ));
    }

    #[test]
    fn degenerate_interval_at_full_level() {
        let atom = MixedBetaDistribution::point_mass_at_one();
        let ci = confidence_interval(&atom, 1.0).unwrap();
        assert_eq!((ci.lower, ci.upper), (1.0, 1.0));
        assert_eq!(ci.degenerate_point, Some(1.0));
        assert!(ci.contains(1.0));
        assert!(!ci.contains(0.999999));

        let zero_atom = MixedBetaDistribution::point_mass_at_zero();
        let ci = confidence_interval(&zero_atom, 0.9).unwrap();
        assert_eq!(ci.degenerate_point, Some(0.0));
    }

    #[test]
    fn uniform_equal_tails() {
        let uniform = MixedBetaDistribution::proper(1.0, 1.0).unwrap();
        let ci = confidence_interval(&uniform, 0.9).unwrap();
        assert_close(ci.lower, 0.05, 1e-9);
        assert_close(ci.upper, 0.95, 1e-9);
        assert_eq!(ci.degenerate_point, None);
    }

    #[test]
    fn clopper_pearson_style_bounds() {
        // right-side confidence distribution for (n, t) = (20, 17) is
        // Beta(17, 4); reference quantiles precomputed at high precision
        let dist = confidence_distribution(PValueKind::RightSide, &evidence(20, 17)).unwrap();
        let ci = confidence_interval(&dist, 0.95).unwrap();
        assert_close(ci.lower, 0.62107317345468606296, 1e-8);
        assert_close(ci.upper, 0.94266600294996722665, 1e-8);
    }

    #[test]
    fn atom_tie_at_exact_level_degenerates() {
        // posterior of the Jeffreys mixture after (2, 2): atom 3/4 at 1
        let dist = posterior_update(
            &PriorSpec::jeffreys_mixture(),
            &EvidenceData::new(2, 2).unwrap(),
        )
        .unwrap();
        let ci = confidence_interval(&dist, 0.75).unwrap();
        assert_eq!(ci.degenerate_point, Some(1.0));
        // above the atom mass the interval opens up
        let ci = confidence_interval(&dist, 0.9).unwrap();
        assert!(ci.lower < 1.0 && ci.upper == 1.0);
        assert!(ci.degenerate_point.is_none());
    }

    #[test]
    fn mixed_quantile_interval() {
        // F(theta) = theta^3 / 4 below 1 for the (2, 2) Jeffreys posterior
        let dist = posterior_update(
            &PriorSpec::jeffreys_mixture(),
            &EvidenceData::new(2, 2).unwrap(),
        )
        .unwrap();
        let ci = confidence_interval(&dist, 0.95).unwrap();
        assert_close(ci.lower, 0.1f64.powf(1.0 / 3.0), 1e-9);
        assert_eq!(ci.upper, 1.0);
    }

    #[test]
    fn interval_level_validation() {
        let uniform = MixedBetaDistribution::proper(1.0, 1.0).unwrap();
        assert!(confidence_interval(&uniform, 0.0).is_err());
        assert!(confidence_interval(&uniform, 1.0 + 1e-9).is_err());
        assert!(confidence_interval(&uniform, -0.5).is_err());
        assert!(confidence_interval(&uniform, f64::NAN).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("right".parse::<PValueKind>().unwrap(), PValueKind::RightSide);
        assert_eq!("left_side".parse::<PValueKind>().unwrap(), PValueKind::LeftSide);
        assert_eq!("mid".parse::<PValueKind>().unwrap(), PValueKind::MidP);
        assert!("upper".parse::<PValueKind>().is_err());
    }
}
