//! Induction probabilities for Bernoulli sequences.
//!
//! Given `t` successes in `n` trials, this crate computes side by side:
//!
//! - Bayesian posteriors under proper, improper and mixture priors, with the
//!   improper cases resolved by analytic limits ([`dist`]);
//! - confidence distributions derived from exact binomial P-values, the
//!   model priors they induce, and interval estimates ([`confidence`]);
//! - predictive probabilities for runs of future successes and their
//!   infinite-horizon limit, the probability that every future trial
//!   succeeds, plus the confirmation that limit lends ([`predict`]);
//! - oracle-style hypothesis decisions that reach full confidence in finite
//!   samples, with exact-enumeration and seeded Monte Carlo coverage
//!   verification ([`oracle`]);
//! - the numerically careful special functions underneath ([`numerics`]).

pub mod confidence;
pub mod dist;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod predict;

pub use confidence::{
    confidence_distribution, confidence_interval, induced_prior, p_value, ConfidenceInterval,
    PValueKind,
};
pub use dist::{
    posterior_update, BetaShape, EvidenceData, GridEntry, MixedBetaDistribution, PriorSpec,
};
pub use error::{Error, Result};
pub use oracle::{
    consistency_scan, coverage_exact, coverage_monte_carlo, oracle_test_three_way,
    oracle_test_two_way, AcceptedHypothesis, CoverageMethod, CoverageReport, OracleDecision,
    Procedure,
};
pub use predict::{
    confirmation_measure, predict_next, predict_run, prob_general, transform_complement, Horizon,
    PredictionQuery,
};
