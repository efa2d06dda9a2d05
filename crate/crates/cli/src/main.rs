use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

use sunrise::{
    confidence_distribution, confidence_interval, confirmation_measure, coverage_exact,
    coverage_monte_carlo, induced_prior, posterior_update, predict_next, EvidenceData, Horizon,
    PValueKind, PredictionQuery, PriorSpec, Procedure,
};
use sunrise_cli::report::{
    coverage_csv_row, ConfidenceCommandReport, InferenceReport, PosteriorReport,
    COVERAGE_CSV_HEADER,
};
use sunrise_cli::reproduce::{self, ReproductionRow};

#[derive(Parser)]
#[command(
    name = "sunrise",
    version,
    about = "Bernoulli-sequence induction at the command line: Bayesian and \
             confidence-distribution inference, oracle decisions, and coverage checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Predictive probabilities, their infinite-horizon limit, and confirmation
    Predict {
        /// laplace | jeffreys-mixture | jeffreys-continuous | haldane |
        /// induced-right | induced-left | beta:<alpha>,<beta>
        #[arg(long)]
        prior: String,
        /// Trial count
        #[arg(long)]
        n: u64,
        /// Success count
        #[arg(long)]
        t: u64,
        /// Future run length to score: a count or 'inf'
        #[arg(long)]
        m: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Posterior distribution for a prior and observed counts
    Posterior {
        #[arg(long)]
        prior: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: u64,
        /// Also export the density on an interior grid of this many points (JSON only)
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Confidence distribution, interval and induced prior from a P-value
    Confidence {
        /// right | left | mid
        #[arg(long)]
        pvalue: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        /// Also export the density on an interior grid of this many points (JSON only)
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exact or Monte Carlo coverage of a decision procedure over a (theta, n) grid
    Coverage {
        /// two_way | three_way | mid_p | laplace_credible
        #[arg(long = "proc")]
        procedure: String,
        /// True success probabilities, comma separated
        #[arg(long)]
        theta: String,
        /// Sample sizes, comma separated
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        /// Monte Carlo replicates; omit for exact enumeration
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Re-derive every registered headline number and check it; exits 1 on any miss
    Reproduce {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Predict {
            prior,
            n,
            t,
            m,
            format,
        } => cmd_predict(&prior, n, t, m.as_deref(), format),
        Command::Posterior {
            prior,
            n,
            t,
            grid,
            format,
        } => cmd_posterior(&prior, n, t, grid, format),
        Command::Confidence {
            pvalue,
            n,
            t,
            level,
            grid,
            format,
        } => cmd_confidence(&pvalue, n, t, level, grid, format),
        Command::Coverage {
            procedure,
            theta,
            n,
            level,
            reps,
            seed,
            format,
        } => cmd_coverage(&procedure, &theta, &n, level, reps, seed, format),
        Command::Reproduce { format } => Ok(cmd_reproduce(format)),
    }
}

fn stringify(error: sunrise::Error) -> String {
    error.to_string()
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable report")
}

fn prior_label(prior: &PriorSpec) -> String {
    for (name, registered) in PriorSpec::registry() {
        if *prior == registered {
            return name.to_string();
        }
    }
    format!("beta:{},{}", prior.alpha(), prior.beta_param())
}

fn cmd_predict(
    prior_spec: &str,
    n: u64,
    t: u64,
    m: Option<&str>,
    format: Format,
) -> Result<ExitCode, String> {
    let prior: PriorSpec = prior_spec.parse().map_err(stringify)?;
    let data = EvidenceData::new(n, t).map_err(stringify)?;
    let next = predict_next(&prior, &data).map_err(stringify)?;
    let general = sunrise::prob_general(&prior, &data).map_err(stringify)?;

    let (horizon, run) = match m {
        Some(raw) => {
            let horizon: Horizon = raw.parse().map_err(stringify)?;
            let query = PredictionQuery { data, horizon };
            (
                Some(raw.to_string()),
                Some(query.evaluate(&prior).map_err(stringify)?),
            )
        }
        None => (None, None),
    };

    let (confirmation, note) = match confirmation_measure(&prior, &data) {
        Ok(value) => (Some(value), None),
        Err(sunrise::Error::ConfirmationUndefined) => (
            None,
            Some("confirmation undefined: improper prior has no P(G)".to_string()),
        ),
        Err(other) => return Err(stringify(other)),
    };

    let report = InferenceReport {
        prior: prior_spec.to_string(),
        n,
        t,
        predict_next: next,
        horizon,
        predict_run: run,
        prob_general: general,
        confirmation,
        note,
    };
    match format {
        Format::Json => println!("{}", to_json(&report)),
        Format::Csv => {
            println!("{}", InferenceReport::CSV_HEADER);
            println!("{}", report.csv_row());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_posterior(
    prior_spec: &str,
    n: u64,
    t: u64,
    grid: Option<u64>,
    format: Format,
) -> Result<ExitCode, String> {
    if grid.is_some() && format == Format::Csv {
        return Err("grid export requires --format json".to_string());
    }
    let prior: PriorSpec = prior_spec.parse().map_err(stringify)?;
    let data = EvidenceData::new(n, t).map_err(stringify)?;
    let posterior = posterior_update(&prior, &data).map_err(stringify)?;
    let grid = match grid {
        Some(points) => Some(posterior.density_grid(points).map_err(stringify)?),
        None => None,
    };
    let report = PosteriorReport {
        prior: prior_spec.to_string(),
        n,
        t,
        mass_at_zero: posterior.mass_at_zero(),
        mass_at_one: posterior.mass_at_one(),
        continuous_weight: posterior.continuous_weight(),
        alpha: posterior.shape().map(|s| s.alpha),
        beta: posterior.shape().map(|s| s.beta),
        mean: posterior.mean(),
        grid,
    };
    match format {
        Format::Json => println!("{}", to_json(&report)),
        Format::Csv => {
            println!("{}", PosteriorReport::CSV_HEADER);
            println!("{}", report.csv_row());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_confidence(
    pvalue: &str,
    n: u64,
    t: u64,
    level: f64,
    grid: Option<u64>,
    format: Format,
) -> Result<ExitCode, String> {
    if grid.is_some() && format == Format::Csv {
        return Err("grid export requires --format json".to_string());
    }
    let kind: PValueKind = pvalue.parse().map_err(stringify)?;
    let data = EvidenceData::new(n, t).map_err(stringify)?;
    let dist = confidence_distribution(kind, &data).map_err(stringify)?;
    let interval = confidence_interval(&dist, level).map_err(stringify)?;
    let (induced, note) = match induced_prior(kind, &data) {
        Ok(prior) => (Some(prior_label(&prior)), None),
        Err(sunrise::Error::PriorNotIdentifiable) => (
            None,
            Some("induced prior not identifiable from a point mass".to_string()),
        ),
        Err(other) => return Err(stringify(other)),
    };
    let grid = match grid {
        Some(points) => Some(dist.density_grid(points).map_err(stringify)?),
        None => None,
    };
    let report = ConfidenceCommandReport {
        pvalue: kind.to_string(),
        n,
        t,
        mass_at_zero: dist.mass_at_zero(),
        mass_at_one: dist.mass_at_one(),
        continuous_weight: dist.continuous_weight(),
        alpha: dist.shape().map(|s| s.alpha),
        beta: dist.shape().map(|s| s.beta),
        level,
        lower: interval.lower,
        upper: interval.upper,
        degenerate_point: interval.degenerate_point,
        induced_prior: induced,
        note,
        grid,
    };
    match format {
        Format::Json => println!("{}", to_json(&report)),
        Format::Csv => {
            println!("{}", ConfidenceCommandReport::CSV_HEADER);
            println!("{}", report.csv_row());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, String> {
    let values: Result<Vec<T>, _> = raw.split(',').map(|item| item.trim().parse::<T>()).collect();
    values.map_err(|_| format!("cannot parse {what} list '{raw}'"))
}

fn cmd_coverage(
    procedure: &str,
    theta: &str,
    n: &str,
    level: f64,
    reps: Option<u64>,
    seed: u64,
    format: Format,
) -> Result<ExitCode, String> {
    let procedure: Procedure = procedure.parse().map_err(stringify)?;
    let thetas: Vec<f64> = parse_list(theta, "theta")?;
    let sizes: Vec<u64> = parse_list(n, "n")?;
    if format == Format::Csv {
        println!("{COVERAGE_CSV_HEADER}");
    }
    for &theta_true in &thetas {
        for &size in &sizes {
            let report = match reps {
                Some(replicates) => {
                    coverage_monte_carlo(theta_true, size, procedure, level, replicates, seed)
                        .map_err(stringify)?
                }
                None => coverage_exact(theta_true, size, procedure, level).map_err(stringify)?,
            };
            match format {
                Format::Json => println!("{}", to_json(&report)),
                Format::Csv => println!("{}", coverage_csv_row(&report)),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(format: Format) -> ExitCode {
    let rows = reproduce::evaluate_claims();
    match format {
        Format::Json => {
            for row in &rows {
                println!("{}", to_json(row));
            }
        }
        Format::Csv => {
            println!("{}", ReproductionRow::CSV_HEADER);
            for row in &rows {
                println!("{}", row.csv_row());
            }
        }
    }
    let passed = rows.iter().filter(|row| row.pass).count();
    eprintln!("{passed}/{} claims reproduced", rows.len());
    if reproduce::all_pass(&rows) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
