//! Command-line front end: solves relay pricing and allocation problems
//! from JSON scenario descriptions and reproduces the packaged numerical
//! experiments as CSV or JSON tables.

mod config;
mod output;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use relay_market::baselines::{even_allocation, sumrate_optimal_allocation};
use relay_market::harness::{
    montecarlo_sweep, per_user_rates, static_rate_table, sweep_budget, sweep_price, fairness,
    SweepParameter,
};
use relay_market::ksbs::{allocate, Allocation, Scheme};
use relay_market::model::{utility, Scenario};
use relay_market::pricing::optimal_price;
use relay_market::scenarios::{static_network_geometry, FadingSpec};

use config::{load_config, load_scenario_file, resolve_scenario, ConfigFile, RunSection};
use output::{
    allocation_csv, fmt as fnum, price_csv, rate_table_csv, sweep_csv, AllocateReport,
    PriceReport, SchemeReport, SweepReport,
};

#[derive(Debug)]
pub enum CliError {
    /// Malformed flags or configuration: exit code 2.
    Config(String),
    /// A well-formed problem the solvers reject: exit code 3.
    Domain(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Domain(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

fn domain(e: relay_market::Error) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Parser)]
#[command(name = "relay-market", version, about = "Relay power pricing and allocation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the revenue-optimal relay power price
    Price(PriceArgs),
    /// Allocate relay power at a price under a chosen scheme
    Allocate(AllocateArgs),
    /// Reproduce a packaged experiment table
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Full run configuration file (JSON with scenario and run sections)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario-only JSON file
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Write the report to this path instead of only printing a summary
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format for --out
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// RNG seed used when the scenario is a fading ensemble
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct PriceArgs {
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct AllocateArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Unit power price; defaults to the computed optimum
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Allocation scheme to highlight
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Experiment selector
    #[arg(value_enum)]
    selector: Selector,
    /// Write the table to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Table format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Monte Carlo trials per swept value
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Monte Carlo seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Ksbs,
    Even,
    Sumrate,
}

impl SchemeArg {
    fn to_scheme(self) -> Scheme {
        match self {
            SchemeArg::Ksbs => Scheme::Ksbs,
            SchemeArg::Even => Scheme::Even,
            SchemeArg::Sumrate => Scheme::SumrateOptimal,
        }
    }

    fn parse_name(name: &str) -> Result<Self, CliError> {
        match name {
            "ksbs" => Ok(SchemeArg::Ksbs),
            "even" => Ok(SchemeArg::Even),
            "sumrate" => Ok(SchemeArg::Sumrate),
            other => Err(CliError::Config(format!(
                "unknown scheme {other:?}; expected ksbs, even, or sumrate"
            ))),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Selector {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig8,
    Fig9,
    Table1,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Price(args) => cmd_price(args),
        Command::Allocate(args) => cmd_allocate(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Loads the config file (if any) and the scenario from exactly one source.
fn resolve(io: &IoArgs) -> Result<(Scenario, RunSection), CliError> {
    let mut file = match &io.config {
        Some(path) => load_config(path)?,
        None => ConfigFile::default(),
    };
    let section = match (&io.scenario, file.scenario.take()) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "scenario given both via --scenario and --config".into(),
            ))
        }
        (Some(path), None) => load_scenario_file(path)?,
        (None, Some(section)) => section,
        (None, None) => {
            return Err(CliError::Config(
                "no scenario: pass --config or --scenario".into(),
            ))
        }
    };
    let seed = io.seed.or(file.run.seed).unwrap_or(42);
    if file.run.trials.is_some() {
        eprintln!("warning: run.trials has no effect on this command");
    }
    let scenario = resolve_scenario(&section, seed)?;
    Ok((scenario, file.run))
}

fn write_report(io: &IoArgs, csv: String, json: impl FnOnce() -> String) -> Result<(), CliError> {
    if let Some(path) = &io.out {
        let body = match io.format {
            OutputFormat::Csv => csv,
            OutputFormat::Json => json(),
        };
        fs::write(path, body)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_price(args: PriceArgs) -> Result<(), CliError> {
    let (scenario, run) = resolve(&args.io)?;
    if run.lambda_grid.is_some() {
        eprintln!("warning: lambda_grid has no effect on price; ignoring");
    }
    let solution = optimal_price(&scenario).map_err(domain)?;
    println!("lambda_star {}", fnum(solution.lambda_star));
    println!("b_lb {}", fnum(solution.b_lb));
    println!("revenue {}", fnum(solution.revenue));
    println!("participants {}", solution.m);
    for c in &solution.candidates {
        println!(
            "candidate interval={} lambda={} revenue={}",
            c.interval,
            fnum(c.lambda),
            fnum(c.revenue)
        );
    }
    let report = PriceReport { scenario, solution };
    write_report(&args.io, price_csv(&report), || {
        serde_json::to_string_pretty(&report).expect("report serializes")
    })
}

fn scheme_allocation(scenario: &Scenario, lambda: f64, scheme: Scheme) -> Result<Allocation, CliError> {
    match scheme {
        Scheme::Ksbs => allocate(scenario, lambda).map_err(domain),
        Scheme::Even => even_allocation(scenario, lambda).map_err(domain),
        Scheme::SumrateOptimal => sumrate_optimal_allocation(scenario).map_err(domain),
    }
}

fn scheme_report(
    scenario: &Scenario,
    lambda: f64,
    scheme: Scheme,
) -> Result<SchemeReport, CliError> {
    let allocation = scheme_allocation(scenario, lambda, scheme)?;
    let rates = per_user_rates(scenario, &allocation.powers).map_err(domain)?;
    let utilities = scenario
        .users()
        .iter()
        .zip(&allocation.powers)
        .map(|(u, &p)| utility(u, p, lambda))
        .collect::<Result<Vec<_>, _>>()
        .map_err(domain)?;
    let power_sold = allocation.power_sold();
    Ok(SchemeReport {
        scheme: scheme.tag(),
        powers: allocation.powers,
        rates: rates.clone(),
        utilities,
        power_sold,
        revenue: lambda * power_sold,
        sum_rate: rates.iter().sum(),
        fairness: fairness(&rates),
    })
}

fn cmd_allocate(args: AllocateArgs) -> Result<(), CliError> {
    let (scenario, run) = resolve(&args.io)?;
    let sources = [
        args.lambda.is_some(),
        run.lambda.is_some(),
        run.lambda_grid.is_some(),
    ];
    if sources.iter().filter(|&&s| s).count() > 1 {
        return Err(CliError::Config(
            "lambda given more than once (flag, run.lambda, run.lambda_grid)".into(),
        ));
    }

    if let Some(grid) = &run.lambda_grid {
        let records = sweep_price(&scenario, grid).map_err(domain)?;
        for r in &records {
            println!(
                "lambda {} scheme {} power_sold {} revenue {} sum_rate {} fairness {}",
                fnum(r.lambda),
                r.scheme.tag(),
                fnum(r.power_sold),
                fnum(r.revenue),
                fnum(r.sum_rate),
                fnum(r.fairness)
            );
        }
        let report = SweepReport { scenario, records };
        return write_report(&args.io, sweep_csv(&report.records), || {
            serde_json::to_string_pretty(&report).expect("report serializes")
        });
    }

    let lambda = match args.lambda.or(run.lambda) {
        Some(l) => l,
        None => optimal_price(&scenario).map_err(domain)?.lambda_star,
    };
    let selected = match args.scheme {
        Some(s) => s,
        None => match &run.scheme {
            Some(name) => SchemeArg::parse_name(name)?,
            None => SchemeArg::Ksbs,
        },
    }
    .to_scheme();

    let mut schemes = Vec::with_capacity(3);
    for scheme in [Scheme::Ksbs, Scheme::Even, Scheme::SumrateOptimal] {
        schemes.push(scheme_report(&scenario, lambda, scheme)?);
    }
    let highlighted = schemes
        .iter()
        .position(|s| s.scheme == selected.tag())
        .expect("all schemes reported");
    if schemes[highlighted].power_sold == 0.0 {
        eprintln!("warning: every user is priced out at lambda {}", fnum(lambda));
    }

    println!("lambda {}", fnum(lambda));
    println!("scheme {}", selected.tag());
    for i in 0..scenario.n_users() {
        println!(
            "user {} power {} rate {} utility {}",
            i + 1,
            fnum(schemes[highlighted].powers[i]),
            fnum(schemes[highlighted].rates[i]),
            fnum(schemes[highlighted].utilities[i])
        );
    }
    for s in &schemes {
        println!(
            "scheme {} power_sold {} revenue {} sum_rate {} fairness {}",
            s.scheme,
            fnum(s.power_sold),
            fnum(s.revenue),
            fnum(s.sum_rate),
            fnum(s.fairness)
        );
    }

    let report = AllocateReport {
        scenario,
        lambda,
        selected: selected.tag(),
        schemes,
    };
    write_report(&args.io, allocation_csv(&report), || {
        serde_json::to_string_pretty(&report).expect("report serializes")
    })
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<(), CliError> {
    enum Table {
        Sweep(Vec<relay_market::harness::SweepRecord>),
        Rates(Vec<relay_market::harness::RateRow>),
    }

    let fading = |n: usize, p_db: f64| FadingSpec::new(n, 1.0, 1.0, 1.0, 10.0, p_db, args.seed);
    let table = match args.selector {
        // The price/supply and rate/fairness figures read off the same
        // Monte Carlo sweep over the relay power budget.
        Selector::Fig3 | Selector::Fig4 => {
            let spec = fading(3, 15.0).map_err(domain)?;
            Table::Sweep(
                montecarlo_sweep(
                    &spec,
                    SweepParameter::RelayPowerDb,
                    &[10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0],
                    args.trials,
                )
                .map_err(domain)?,
            )
        }
        Selector::Fig5 => {
            let spec = fading(3, 20.0).map_err(domain)?;
            Table::Sweep(
                montecarlo_sweep(
                    &spec,
                    SweepParameter::VarF,
                    &[1.0, 5.0, 10.0, 15.0, 20.0],
                    args.trials,
                )
                .map_err(domain)?,
            )
        }
        Selector::Fig6 => {
            let spec = fading(3, 20.0).map_err(domain)?;
            Table::Sweep(
                montecarlo_sweep(
                    &spec,
                    SweepParameter::NUsers,
                    &[5.0, 7.0, 9.0, 11.0, 13.0, 15.0],
                    args.trials,
                )
                .map_err(domain)?,
            )
        }
        Selector::Fig8 => {
            let scenario = relay_market::scenarios::pathloss_scenario(
                &static_network_geometry(),
                10.0,
                15.0,
            )
            .map_err(domain)?;
            let grid: Vec<f64> = (0..200).map(|j| 0.008 * j as f64 / 199.0).collect();
            Table::Sweep(sweep_price(&scenario, &grid).map_err(domain)?)
        }
        Selector::Fig9 => {
            let p_dbs: Vec<f64> = (0..=15).map(|k| 10.0 + 2.0 * k as f64).collect();
            Table::Sweep(sweep_budget(&static_network_geometry(), 10.0, &p_dbs).map_err(domain)?)
        }
        Selector::Table1 => Table::Rates(static_rate_table().map_err(domain)?),
    };

    let body = match (&table, args.format) {
        (Table::Sweep(records), OutputFormat::Csv) => sweep_csv(records),
        (Table::Sweep(records), OutputFormat::Json) => {
            serde_json::to_string_pretty(records).expect("records serialize")
        }
        (Table::Rates(rows), OutputFormat::Csv) => rate_table_csv(rows),
        (Table::Rates(rows), OutputFormat::Json) => {
            serde_json::to_string_pretty(rows).expect("rows serialize")
        }
    };
    match &args.out {
        Some(path) => {
            fs::write(path, &body)
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
            let rows = match &table {
                Table::Sweep(records) => records.len(),
                Table::Rates(rows) => rows.len(),
            };
            println!("wrote {rows} rows to {}", path.display());
        }
        None => print!("{body}"),
    }
    Ok(())
}
