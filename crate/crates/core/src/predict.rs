//! Predictive probabilities for future successes, their infinite-horizon
//! limit (the probability that every future trial succeeds), and the
//! confirmation that limit lends to the general proposition.

use std::str::FromStr;

use crate::dist::{posterior_update, BetaShape, EvidenceData, PriorSpec};
use crate::error::{Error, Result};
use crate::numerics::log_beta;

/// How far ahead a run prediction looks: a fixed number of future trials, or
/// the full infinite horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Horizon {
    Finite(u64),
    Infinite,
}

impl FromStr for Horizon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" => Ok(Self::Infinite),
            other => other
                .parse::<u64>()
                .map(Self::Finite)
                .map_err(|_| Error::InvalidArgument(format!("cannot parse horizon '{other}'"))),
        }
    }
}

/// A run-of-successes question: given the evidence, how likely is it that the
/// next `horizon` trials all succeed?
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionQuery {
    pub data: EvidenceData,
    pub horizon: Horizon,
}

impl PredictionQuery {
    pub fn evaluate(&self, prior: &PriorSpec) -> Result<f64> {
        match self.horizon {
            Horizon::Finite(m) => predict_run(prior, &self.data, m),
            Horizon::Infinite => prob_general(prior, &self.data),
        }
    }
}

/// E[theta^m] under Beta(alpha, beta), i.e. b(alpha + m, beta) / b(alpha, beta).
///
/// For integer beta the ratio telescopes into a short product, which keeps
/// the closed forms like alpha / (alpha + m) exact; otherwise exp/ln.
fn beta_power_moment(shape: &BetaShape, m: u64) -> Result<f64> {
    if m == 0 {
        return Ok(1.0);
    }
    let (a, b) = (shape.alpha, shape.beta);
    let mf = m as f64;
    if b.fract() == 0.0 && b <= 64.0 {
        let mut ratio = 1.0;
        for j in 0..b as u64 {
            let jf = j as f64;
            ratio *= (a + jf) / (a + mf + jf);
        }
        Ok(ratio)
    } else {
        Ok((log_beta(a + mf, b)? - log_beta(a, b)?).exp())
    }
}

/// P(next trial succeeds | data) = p1 + w E[theta | continuous part].
pub fn predict_next(prior: &PriorSpec, data: &EvidenceData) -> Result<f64> {
    Ok(posterior_update(prior, data)?.mean())
}

/// P(next m trials all succeed | data) = p1 + w E[theta^m | continuous part].
pub fn predict_run(prior: &PriorSpec, data: &EvidenceData, m: u64) -> Result<f64> {
    let posterior = posterior_update(prior, data)?;
    if m == 0 {
        return Ok(1.0);
    }
    let continuous = match posterior.shape() {
        Some(shape) => posterior.continuous_weight() * beta_power_moment(shape, m)?,
        None => 0.0,
    };
    Ok(posterior.mass_at_one() + continuous)
}

/// The m -> infinity limit of [`predict_run`]: the probability that every
/// future trial succeeds. The continuous part contributes nothing in the
/// limit, so this is exactly the posterior mass at theta = 1.
pub fn prob_general(prior: &PriorSpec, data: &EvidenceData) -> Result<f64> {
    Ok(posterior_update(prior, data)?.mass_at_one())
}

/// Success/failure swap: (n, t) -> (n, n - t).
///
/// Any inference about theta under the transformed data with prior
/// Beta(alpha, beta) equals the inference about 1 - theta under the original
/// data with prior Beta(beta, alpha).
pub fn transform_complement(data: &EvidenceData) -> EvidenceData {
    data.complement()
}

/// Confirmation of the general proposition by the evidence:
/// P(G | data) - P(G).
///
/// Defined only for proper priors; an improper prior has no prior probability
/// of the general proposition to subtract.
pub fn confirmation_measure(prior: &PriorSpec, data: &EvidenceData) -> Result<f64> {
    if !prior.is_proper() {
        return Err(Error::ConfirmationUndefined);
    }
    Ok(prob_general(prior, data)? - prior.mass_at_one())
}
