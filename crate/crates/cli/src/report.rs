//! Output records for the command-line surface and their CSV rendering.
//!
//! JSON serialization goes through serde with these exact field names; the
//! CSV column orders below are fixed and covered by golden tests.

use serde::Serialize;
use sunrise::{CoverageReport, GridEntry};

/// A float with exactly 15 significant digits, for CSV cells.
pub fn fmt_sig15(value: f64) -> String {
    format!("{value:.14e}")
}

/// Quote a CSV field when it contains a delimiter, quote or newline.
pub fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn opt_sig15(value: Option<f64>) -> String {
    value.map(fmt_sig15).unwrap_or_default()
}

fn opt_string(value: &Option<String>) -> String {
    value.as_deref().map(csv_escape).unwrap_or_default()
}

/// Output of `sunrise predict`.
#[derive(Debug, Clone, Serialize)]
pub struct InferenceReport {
    pub prior: String,
    pub n: u64,
    pub t: u64,
    pub predict_next: f64,
    pub horizon: Option<String>,
    pub predict_run: Option<f64>,
    pub prob_general: f64,
    pub confirmation: Option<f64>,
    pub note: Option<String>,
}

impl InferenceReport {
    pub const CSV_HEADER: &'static str =
        "prior,n,t,predict_next,horizon,predict_run,prob_general,confirmation,note";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            csv_escape(&self.prior),
            self.n,
            self.t,
            fmt_sig15(self.predict_next),
            self.horizon.clone().unwrap_or_default(),
            opt_sig15(self.predict_run),
            fmt_sig15(self.prob_general),
            opt_sig15(self.confirmation),
            opt_string(&self.note),
        )
    }
}

/// Output of `sunrise posterior`.
#[derive(Debug, Clone, Serialize)]
pub struct PosteriorReport {
    pub prior: String,
    pub n: u64,
    pub t: u64,
    pub mass_at_zero: f64,
    pub mass_at_one: f64,
    pub continuous_weight: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub mean: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<GridEntry>>,
}

impl PosteriorReport {
    pub const CSV_HEADER: &'static str =
        "prior,n,t,mass_at_zero,mass_at_one,continuous_weight,alpha,beta,mean";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            csv_escape(&self.prior),
            self.n,
            self.t,
            fmt_sig15(self.mass_at_zero),
            fmt_sig15(self.mass_at_one),
            fmt_sig15(self.continuous_weight),
            opt_sig15(self.alpha),
            opt_sig15(self.beta),
            fmt_sig15(self.mean),
        )
    }
}

/// Output of `sunrise confidence`.
#[derive(Debug, Clone, Serialize)]
pub struct ConfidenceCommandReport {
    pub pvalue: String,
    pub n: u64,
    pub t: u64,
    pub mass_at_zero: f64,
    pub mass_at_one: f64,
    pub continuous_weight: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
    pub degenerate_point: Option<f64>,
    pub induced_prior: Option<String>,
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<GridEntry>>,
}

impl ConfidenceCommandReport {
    pub const CSV_HEADER: &'static str = "pvalue,n,t,mass_at_zero,mass_at_one,continuous_weight,\
         alpha,beta,level,lower,upper,degenerate_point,induced_prior,note";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.pvalue,
            self.n,
            self.t,
            fmt_sig15(self.mass_at_zero),
            fmt_sig15(self.mass_at_one),
            fmt_sig15(self.continuous_weight),
            opt_sig15(self.alpha),
            opt_sig15(self.beta),
            fmt_sig15(self.level),
            fmt_sig15(self.lower),
            fmt_sig15(self.upper),
            opt_sig15(self.degenerate_point),
            opt_string(&self.induced_prior),
            opt_string(&self.note),
        )
    }
}

pub const COVERAGE_CSV_HEADER: &str =
    "theta_true,n,procedure,nominal_level,coverage,accept_h1_rate,method,replicates,seed";

pub fn coverage_csv_row(report: &CoverageReport) -> String {
    let method = match report.method {
        sunrise::CoverageMethod::ExactEnumeration => "exact_enumeration",
        sunrise::CoverageMethod::MonteCarlo => "monte_carlo",
    };
    format!(
        "{},{},{},{},{},{},{},{},{}",
        fmt_sig15(report.theta_true),
        report.n,
        report.procedure,
        fmt_sig15(report.nominal_level),
        fmt_sig15(report.coverage),
        fmt_sig15(report.accept_h1_rate),
        method,
        replicates_cell(report.replicates),
        replicates_cell(report.seed),
    )
}

fn replicates_cell(value: Option<u64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}
