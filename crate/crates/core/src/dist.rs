//! Priors and posteriors over the success probability, represented as mixed
//! discrete-continuous distributions, and the Bayes update between them.
//!
//! Improper priors (a Beta shape parameter exactly zero) are kept symbolic:
//! updates take the analytic limit of the proper-prior update, so a posterior
//! that collapses onto a boundary comes out as an exact point mass rather
//! than an epsilon approximation.

use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{log_beta, log_choose, regularized_incomplete_beta};

/// Observation summary: `t` successes in `n` Bernoulli trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EvidenceData {
    n: u64,
    t: u64,
}

impl EvidenceData {
    pub fn new(n: u64, t: u64) -> Result<Self> {
        if t > n {
            return Err(Error::CountExceedsTrials { t, n });
        }
        Ok(Self { n, t })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn failures(&self) -> u64 {
        self.n - self.t
    }

    pub fn all_successes(&self) -> bool {
        self.t == self.n
    }

    pub fn all_failures(&self) -> bool {
        self.t == 0
    }

    /// The same trials with success and failure swapped: (n, t) -> (n, n - t).
    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            t: self.n - self.t,
        }
    }

    /// Pooled counts of two independent batches.
    pub fn combined(&self, other: &Self) -> Self {
        Self {
            n: self.n + other.n,
            t: self.t + other.t,
        }
    }
}

impl fmt::Display for EvidenceData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} successes in {} trials", self.t, self.n)
    }
}

/// A prior over the success probability: optional point masses at 0 and 1
/// plus a weighted Beta(alpha, beta) continuous part.
///
/// `alpha` or `beta` may be zero, which makes the prior improper; improper
/// priors carry no point masses and their continuous weight is fixed at 1
/// (an improper density is only defined up to scale anyway).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PriorSpec {
    mass_at_zero: f64,
    mass_at_one: f64,
    continuous_weight: f64,
    alpha: f64,
    beta: f64,
}

impl PriorSpec {
    /// Uniform Beta(1, 1) prior.
    pub fn laplace() -> Self {
        Self::beta(1.0, 1.0).expect("valid shape")
    }

    /// Beta(1/2, 1/2) prior.
    pub fn jeffreys_continuous() -> Self {
        Self::beta(0.5, 0.5).expect("valid shape")
    }

    /// Mass 1/2 on theta = 1 plus weight 1/2 on a uniform continuous part.
    pub fn jeffreys_mixture() -> Self {
        Self::mixture(0.0, 0.5, 1.0, 1.0).expect("valid mixture")
    }

    /// Improper Beta(0, 0) prior.
    pub fn haldane() -> Self {
        Self::beta(0.0, 0.0).expect("valid shape")
    }

    /// Improper Beta(0, 1) prior (one failure observed a priori).
    pub fn induced_right() -> Self {
        Self::beta(0.0, 1.0).expect("valid shape")
    }

    /// Improper Beta(1, 0) prior (one success observed a priori).
    pub fn induced_left() -> Self {
        Self::beta(1.0, 0.0).expect("valid shape")
    }

    /// Pure Beta(alpha, beta) prior with no point masses; either shape may be
    /// zero, giving an improper prior.
    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::InvalidPrior(format!(
                "alpha must be nonnegative, got {alpha}"
            )));
        }
        if !(beta >= 0.0) {
            return Err(Error::InvalidPrior(format!(
                "beta must be nonnegative, got {beta}"
            )));
        }
        Ok(Self {
            mass_at_zero: 0.0,
            mass_at_one: 0.0,
            continuous_weight: 1.0,
            alpha,
            beta,
        })
    }

    /// Proper mixture: point masses at the boundaries plus the remaining
    /// weight on a proper Beta(alpha, beta) continuous part.
    pub fn mixture(mass_at_zero: f64, mass_at_one: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mass_at_zero) || !(0.0..=1.0).contains(&mass_at_one) {
            return Err(Error::InvalidPrior(format!(
                "point masses must lie in [0, 1], got {mass_at_zero} and {mass_at_one}"
            )));
        }
        let continuous_weight = 1.0 - mass_at_zero - mass_at_one;
        if continuous_weight < -1e-12 {
            return Err(Error::InvalidPrior(format!(
                "point masses sum to {} > 1",
                mass_at_zero + mass_at_one
            )));
        }
        let continuous_weight = continuous_weight.max(0.0);
        if continuous_weight > 0.0 && !(alpha > 0.0 && beta > 0.0) {
            return Err(Error::InvalidPrior(
                "the continuous part of a mixture prior must be a proper Beta".into(),
            ));
        }
        Ok(Self {
            mass_at_zero,
            mass_at_one,
            continuous_weight,
            alpha,
            beta,
        })
    }

    pub fn mass_at_zero(&self) -> f64 {
        self.mass_at_zero
    }

    pub fn mass_at_one(&self) -> f64 {
        self.mass_at_one
    }

    pub fn continuous_weight(&self) -> f64 {
        self.continuous_weight
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta_param(&self) -> f64 {
        self.beta
    }

    /// True iff the continuous part integrates to a finite value.
    pub fn is_proper(&self) -> bool {
        self.alpha > 0.0 && self.beta > 0.0
    }

    pub fn has_point_masses(&self) -> bool {
        self.mass_at_zero > 0.0 || self.mass_at_one > 0.0
    }

    /// Fold observed counts into the shape parameters: Beta(alpha, beta)
    /// becomes Beta(alpha + t, beta + n - t), possibly still improper.
    ///
    /// This is the prior-parameter route to sequential updating and is only
    /// defined for atom-free priors; mixtures go through [`posterior_update`]
    /// and [`MixedBetaDistribution::as_prior`] instead.
    pub fn absorb(&self, data: &EvidenceData) -> Result<Self> {
        if self.has_point_masses() {
            return Err(Error::InvalidArgument(
                "absorb is defined for atom-free priors; update mixtures via posterior_update"
                    .into(),
            ));
        }
        Self::beta(self.alpha + data.t() as f64, self.beta + data.failures() as f64)
    }

    /// The named priors, in the order the command-line grammar lists them.
    pub fn registry() -> Vec<(&'static str, Self)> {
        vec![
            ("laplace", Self::laplace()),
            ("jeffreys-mixture", Self::jeffreys_mixture()),
            ("jeffreys-continuous", Self::jeffreys_continuous()),
            ("haldane", Self::haldane()),
            ("induced-right", Self::induced_right()),
            ("induced-left", Self::induced_left()),
        ]
    }
}

impl FromStr for PriorSpec {
    type Err = Error;

    /// Grammar: `laplace | jeffreys-mixture | jeffreys-continuous | haldane |
    /// induced-right | induced-left | beta:<alpha>,<beta>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laplace" => return Ok(Self::laplace()),
            "jeffreys-mixture" => return Ok(Self::jeffreys_mixture()),
            "jeffreys-continuous" => return Ok(Self::jeffreys_continuous()),
            "haldane" => return Ok(Self::haldane()),
            "induced-right" => return Ok(Self::induced_right()),
            "induced-left" => return Ok(Self::induced_left()),
            _ => {}
        }
        if let Some(params) = s.strip_prefix("beta:") {
            let mut parts = params.splitn(2, ',');
            let alpha = parts
                .next()
                .and_then(|p| p.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::InvalidPrior(format!("cannot parse '{s}'")))?;
            let beta = parts
                .next()
                .and_then(|p| p.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::InvalidPrior(format!("cannot parse '{s}'")))?;
            return Self::beta(alpha, beta);
        }
        Err(Error::InvalidPrior(format!(
            "unknown prior '{s}' (expected laplace, jeffreys-mixture, jeffreys-continuous, \
             haldane, induced-right, induced-left or beta:<alpha>,<beta>)"
        )))
    }
}

/// Shape of a proper Beta density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaShape {
    pub alpha: f64,
    pub beta: f64,
}

impl BetaShape {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::NonPositive {
                name: "alpha",
                value: alpha,
            });
        }
        if !(beta > 0.0) {
            return Err(Error::NonPositive {
                name: "beta",
                value: beta,
            });
        }
        Ok(Self { alpha, beta })
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// Density at an interior point.
    pub fn density(&self, theta: f64) -> Result<f64> {
        if !(0.0 < theta && theta < 1.0) {
            return Err(Error::OutOfUnitInterval {
                name: "theta",
                value: theta,
            });
        }
        let log_density = (self.alpha - 1.0) * theta.ln() + (self.beta - 1.0) * (-theta).ln_1p()
            - log_beta(self.alpha, self.beta)?;
        Ok(log_density.exp())
    }

    pub fn cdf(&self, theta: f64) -> Result<f64> {
        regularized_incomplete_beta(theta, self.alpha, self.beta)
    }
}

/// One record of a density grid export: either a boundary atom or the value
/// of the continuous density at an interior grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridEntry {
    Atom { theta: f64, mass: f64 },
    Density { theta: f64, value: f64 },
}

/// Posterior or confidence distribution over the success probability:
/// point masses `p0` at 0 and `p1` at 1, plus weight `w` on a proper
/// Beta continuous part; p0 + p1 + w = 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedBetaDistribution {
    p0: f64,
    p1: f64,
    w: f64,
    shape: Option<BetaShape>,
}

impl MixedBetaDistribution {
    pub fn new(p0: f64, p1: f64, w: f64, shape: Option<BetaShape>) -> Result<Self> {
        for (name, value) in [("p0", p0), ("p1", p1), ("w", w)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfUnitInterval { name, value });
            }
        }
        if (p0 + p1 + w - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "masses must sum to 1, got {}",
                p0 + p1 + w
            )));
        }
        if w > 0.0 && shape.is_none() {
            return Err(Error::InvalidArgument(
                "a continuous weight needs a Beta shape".into(),
            ));
        }
        let shape = if w > 0.0 { shape } else { None };
        Ok(Self { p0, p1, w, shape })
    }

    pub fn point_mass_at_zero() -> Self {
        Self {
            p0: 1.0,
            p1: 0.0,
            w: 0.0,
            shape: None,
        }
    }

    pub fn point_mass_at_one() -> Self {
        Self {
            p0: 0.0,
            p1: 1.0,
            w: 0.0,
            shape: None,
        }
    }

    /// A pure proper Beta(alpha, beta), no atoms.
    pub fn proper(alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self {
            p0: 0.0,
            p1: 0.0,
            w: 1.0,
            shape: Some(BetaShape::new(alpha, beta)?),
        })
    }

    pub fn mass_at_zero(&self) -> f64 {
        self.p0
    }

    pub fn mass_at_one(&self) -> f64 {
        self.p1
    }

    pub fn continuous_weight(&self) -> f64 {
        self.w
    }

    pub fn shape(&self) -> Option<&BetaShape> {
        self.shape.as_ref()
    }

    pub fn is_point_mass(&self) -> bool {
        self.w == 0.0
    }

    /// Mean of the mixed distribution.
    pub fn mean(&self) -> f64 {
        self.p1
            + match &self.shape {
                Some(shape) => self.w * shape.mean(),
                None => 0.0,
            }
    }

    /// Cumulative distribution function F(theta) = p0 + w I_theta + p1 [theta >= 1].
    pub fn cdf(&self, theta: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::OutOfUnitInterval {
                name: "theta",
                value: theta,
            });
        }
        let continuous = match &self.shape {
            Some(shape) => self.w * shape.cdf(theta)?,
            None => 0.0,
        };
        Ok(self.p0 + continuous + if theta >= 1.0 { self.p1 } else { 0.0 })
    }

    /// Quantile of the mixed distribution, q(p) = inf { theta : F(theta) >= p }.
    ///
    /// Atom crossings are resolved first; the continuous stretch in between is
    /// inverted by bisection on the incomplete beta to a width of 1e-10.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfUnitInterval { name: "p", value: p });
        }
        if p <= self.p0 {
            return Ok(0.0);
        }
        if p >= self.p0 + self.w {
            return Ok(1.0);
        }
        let shape = self.shape.as_ref().expect("w > 0 here");
        let target = (p - self.p0) / self.w;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if shape.cdf(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The distribution of 1 - theta: atoms swap and the Beta shape reverses.
    pub fn reflect(&self) -> Self {
        Self {
            p0: self.p1,
            p1: self.p0,
            w: self.w,
            shape: self.shape.map(|s| BetaShape {
                alpha: s.beta,
                beta: s.alpha,
            }),
        }
    }

    /// Reinterpret this (necessarily proper) distribution as a prior for
    /// further updating.
    pub fn as_prior(&self) -> Result<PriorSpec> {
        if self.w == 0.0 {
            // placeholder proper shape; with zero weight it never enters an update
            return PriorSpec::mixture(self.p0, self.p1, 1.0, 1.0);
        }
        let shape = self.shape.as_ref().expect("w > 0 here");
        PriorSpec::mixture(self.p0, self.p1, shape.alpha, shape.beta)
    }

    /// Evenly spaced interior density values plus explicit atom records.
    ///
    /// The grid has `points` values at i / (points + 1), i = 1..=points; atoms
    /// at 0 and 1 are emitted before and after the continuous block whenever
    /// they carry mass.
    pub fn density_grid(&self, points: u64) -> Result<Vec<GridEntry>> {
        if points < 2 {
            return Err(Error::InvalidArgument(format!(
                "a density grid needs at least 2 points, got {points}"
            )));
        }
        let mut entries = Vec::new();
        if self.p0 > 0.0 {
            entries.push(GridEntry::Atom {
                theta: 0.0,
                mass: self.p0,
            });
        }
        if let Some(shape) = &self.shape {
            let step = 1.0 / (points as f64 + 1.0);
            for i in 1..=points {
                let theta = i as f64 * step;
                entries.push(GridEntry::Density {
                    theta,
                    value: self.w * shape.density(theta)?,
                });
            }
        }
        if self.p1 > 0.0 {
            entries.push(GridEntry::Atom {
                theta: 1.0,
                mass: self.p1,
            });
        }
        Ok(entries)
    }
}

/// Marginal likelihood of the data under the continuous part of a proper
/// prior, C(n, t) b(alpha + t, beta + n - t) / b(alpha, beta), returned as a
/// numerator/denominator pair.
///
/// The fraction form lets [`posterior_update`] scale all mixture weights by
/// the denominator before normalising, so cases like beta = 1, t = n reduce
/// to a single division and the posterior atom weights come out correctly
/// rounded rather than dragged through exp/ln.
fn continuous_marginal(alpha: f64, beta: f64, n: u64, t: u64) -> Result<(f64, f64)> {
    let nf = n as f64;
    if n == 0 {
        return Ok((1.0, 1.0));
    }
    if t == n && beta == 1.0 {
        // b(alpha + n, 1) / b(alpha, 1) = alpha / (alpha + n)
        return Ok((alpha, alpha + nf));
    }
    if t == 0 && alpha == 1.0 {
        return Ok((beta, beta + nf));
    }
    let log_marginal = log_choose(n, t)?
        + log_beta(alpha + t as f64, beta + (n - t) as f64)?
        - log_beta(alpha, beta)?;
    Ok((log_marginal.exp(), 1.0))
}

/// Bayes update of a prior by binomial evidence.
///
/// Proper priors (with or without point masses) reweight each component by
/// its marginal likelihood: an atom at 1 survives only under all successes,
/// an atom at 0 only under all failures, and the continuous part becomes
/// Beta(alpha + t, beta + n - t).
///
/// Improper priors update by analytic limit: while both posterior shape
/// parameters stay positive the limit is the proper Beta(alpha + t,
/// beta + n - t); once one of them is still zero the posterior collapses to
/// the matching boundary point mass. Beta(0, 0) with no data has no limit
/// and is rejected.
pub fn posterior_update(prior: &PriorSpec, data: &EvidenceData) -> Result<MixedBetaDistribution> {
    let n = data.n();
    let t = data.t();

    if !prior.is_proper() {
        let alpha_post = prior.alpha() + t as f64;
        let beta_post = prior.beta_param() + data.failures() as f64;
        return if alpha_post == 0.0 && beta_post == 0.0 {
            Err(Error::NoUpdatePossible)
        } else if beta_post == 0.0 {
            Ok(MixedBetaDistribution::point_mass_at_one())
        } else if alpha_post == 0.0 {
            Ok(MixedBetaDistribution::point_mass_at_zero())
        } else {
            MixedBetaDistribution::proper(alpha_post, beta_post)
        };
    }

    // proper prior: component marginal likelihoods, all scaled by the
    // denominator of the continuous marginal
    let like_one = if t == n { 1.0 } else { 0.0 };
    let like_zero = if t == 0 { 1.0 } else { 0.0 };
    let (num, den) = continuous_marginal(prior.alpha(), prior.beta_param(), n, t)?;
    let weight_one = prior.mass_at_one() * like_one * den;
    let weight_zero = prior.mass_at_zero() * like_zero * den;
    let weight_cont = prior.continuous_weight() * num;
    let total = weight_zero + weight_one + weight_cont;
    if total == 0.0 {
        return Err(Error::InvalidArgument(
            "posterior undefined: the data contradict a pure point-mass prior".into(),
        ));
    }
    let w = weight_cont / total;
    let shape = if w > 0.0 {
        Some(BetaShape::new(
            prior.alpha() + t as f64,
            prior.beta_param() + data.failures() as f64,
        )?)
    } else {
        None
    };
    MixedBetaDistribution::new(weight_zero / total, weight_one / total, w, shape)
}
