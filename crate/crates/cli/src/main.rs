use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mockq::cyclo::F3Variant;
use mockq::mocklib::RankSign;
use mockq_cli::{cmd_check, cmd_list, cmd_radial, cmd_report_all, emit, Format, Overrides, RunConfig, UsageError, EXIT_USAGE};

/// Exact verification of mock theta identities and their radial limits.
#[derive(Parser, Debug)]
#[command(name = "mockq", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand. Precedence: flag, then `MOCKQ_*` variable,
/// then the config file, then the built-in default.
#[derive(Args, Debug)]
struct Common {
    /// Truncation order for identity checks (at least 10).
    #[arg(long, global = true, env = "MOCKQ_ORDER")]
    order: Option<i64>,
    /// Working precision of radial samples, in bits (at least 64).
    #[arg(long, global = true, env = "MOCKQ_PRECISION")]
    precision: Option<u32>,
    /// Largest accepted distance between a radial limit and its exact value.
    #[arg(long, global = true, env = "MOCKQ_TOLERANCE")]
    tolerance: Option<f64>,
    /// Worker threads.
    #[arg(long, global = true, env = "MOCKQ_JOBS")]
    jobs: Option<usize>,
    /// Output format: text or json.
    #[arg(long, global = true, env = "MOCKQ_FORMAT", value_parser = parse::<Format>)]
    format: Option<Format>,
    /// File of `key = value` settings.
    #[arg(long, global = true, env = "MOCKQ_CONFIG")]
    config: Option<PathBuf>,
    /// Reading of the l = 3 branch of the tenth-order sum: paper or corrected.
    #[arg(long, global = true, env = "MOCKQ_F3_VARIANT", value_parser = parse_core::<F3Variant>)]
    f3_variant: Option<F3Variant>,
    /// Rank convention for unimodal sequences: right-minus-left or left-minus-right.
    #[arg(long, global = true, env = "MOCKQ_RANK_SIGN", value_parser = parse_core::<RankSign>)]
    rank_sign: Option<RankSign>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the registered identities and radial-limit statements.
    List,
    /// Check identities coefficientwise.
    Check {
        /// Identity ids, or `all`.
        ids: Vec<String>,
        /// Check at this specialization instead of the defaults, e.g. `x=-q,M=2`.
        #[arg(long)]
        at: Option<String>,
    },
    /// Check one radial limit at a root of unity.
    Radial {
        /// FOR, W3, EX1, EX2, EX3, EX4, B2 or PSI10.
        theorem: String,
        #[arg(long)]
        k: u64,
        /// Residue l of the order mod 10 (PSI10 only).
        #[arg(long)]
        ell: Option<u64>,
        /// Use zeta = e^{2 pi i j/n} with this j.
        #[arg(long, default_value_t = 1)]
        root_index: u64,
    },
    /// Run everything and write one JSON report.
    ReportAll {
        /// Write the JSON here and print a text summary instead.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse<T: std::str::FromStr<Err = UsageError>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: UsageError| e.0)
}

fn parse_core<T: std::str::FromStr<Err = mockq::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: mockq::Error| e.to_string())
}

fn run(cli: Cli) -> Result<i32, UsageError> {
    let c = cli.common;
    let cfg = RunConfig::resolve(&Overrides {
        order: c.order,
        precision: c.precision,
        tolerance: c.tolerance,
        jobs: c.jobs,
        format: c.format,
        config: c.config,
        f3_variant: c.f3_variant,
        rank_sign: c.rank_sign,
    })?;
    let report = match cli.command {
        Command::List => {
            let l = cmd_list();
            let text = match cfg.format {
                Format::Text => l.to_text(),
                Format::Json => serde_json::to_string_pretty(&l).expect("listing serializes") + "\n",
            };
            emit(&text, None)?;
            return Ok(0);
        }
        Command::Check { ids, at } => cmd_check(&ids, at.as_deref(), &cfg)?,
        Command::Radial { theorem, k, ell, root_index } => cmd_radial(&theorem, k, ell, root_index, &cfg)?,
        Command::ReportAll { output } => {
            let r = cmd_report_all(&cfg);
            match output {
                Some(p) => {
                    emit(&(r.to_json() + "\n"), Some(&p))?;
                    emit(&r.to_text(), None)?;
                }
                None => emit(&(r.to_json() + "\n"), None)?,
            }
            return Ok(r.exit_code());
        }
    };
    emit(&report.render(cfg.format), None)?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    // clap exits with status 2 on malformed arguments.
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
