use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::Context;
use asianvol::benchmark::{self, BenchmarkReport, Method, ReportRow, Status};
use asianvol::bspricer::equivalent_vol;
use asianvol::mcoracle::DEFAULT_BUDGET;
use asianvol::{asian_price, forward_price, mc_asian_price, MarketParams, McConfig, OptionSide, Order, VolSource};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod output;

use output::Record;

#[derive(Parser, Debug)]
#[command(
    name = "asianvol",
    version,
    about = "Asian option pricing from short-maturity volatility asymptotics"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for Monte Carlo runs.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Cap on paths × steps for Monte Carlo runs.
    #[arg(long, global = true, env = "ASIANVOL_MC_BUDGET", default_value_t = DEFAULT_BUDGET, hide_env_values = true)]
    mc_budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Side {
    Call,
    Put,
}

impl From<Side> for OptionSide {
    fn from(s: Side) -> Self {
        match s {
            Side::Call => OptionSide::Call,
            Side::Put => OptionSide::Put,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PriceMethod {
    Lead,
    Atm,
    Lin,
    Quad,
    Nlo,
    Mc,
}

impl PriceMethod {
    fn vol_source(self) -> Option<VolSource> {
        match self {
            PriceMethod::Lead => Some(VolSource::Expansion(Order::Leading)),
            PriceMethod::Atm => Some(VolSource::Expansion(Order::AtmCorrection)),
            PriceMethod::Lin => Some(VolSource::Expansion(Order::Linear)),
            PriceMethod::Quad => Some(VolSource::Expansion(Order::Quadratic)),
            PriceMethod::Nlo => Some(VolSource::Nlo),
            PriceMethod::Mc => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            PriceMethod::Lead => "lead",
            PriceMethod::Atm => "atm",
            PriceMethod::Lin => "lin",
            PriceMethod::Quad => "quad",
            PriceMethod::Nlo => "nlo",
            PriceMethod::Mc => "mc",
        }
    }
}

#[derive(clap::Args, Debug)]
struct McArgs {
    /// Monte Carlo path count.
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    /// Monte Carlo time steps.
    #[arg(long, default_value_t = 252)]
    steps: usize,
    /// Disable antithetic pairing.
    #[arg(long)]
    no_antithetic: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Price a single Asian option.
    Price {
        #[arg(long)]
        strike: f64,
        #[arg(long)]
        spot: f64,
        #[arg(long)]
        rate: f64,
        #[arg(long, default_value_t = 0.0)]
        dividend: f64,
        #[arg(long)]
        vol: f64,
        #[arg(long)]
        maturity: f64,
        #[arg(long, value_enum, default_value_t = Side::Call)]
        side: Side,
        #[arg(long, value_enum, default_value_t = PriceMethod::Lin)]
        method: PriceMethod,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Recompute the reference benchmark tables.
    Bench {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: u8,
        #[arg(long, default_value_t = benchmark::DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Emit an equivalent-volatility smile as (k, sigma_ln, price) rows.
    Smile {
        /// Take market inputs from a benchmark case and add its benchmark point.
        #[arg(long)]
        case: Option<u32>,
        #[arg(long)]
        spot: Option<f64>,
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long)]
        dividend: Option<f64>,
        #[arg(long)]
        vol: Option<f64>,
        #[arg(long)]
        maturity: Option<f64>,
        #[arg(long, default_value_t = 0.7)]
        k_min: f64,
        #[arg(long, default_value_t = 1.3)]
        k_max: f64,
        #[arg(long, default_value_t = 61)]
        n_points: usize,
        #[arg(long, value_enum, default_value_t = PriceMethod::Atm)]
        method: PriceMethod,
    },
    /// Compare a Monte Carlo price with the linear-order expansion on a benchmark case.
    McCheck {
        #[arg(long, default_value_t = 1)]
        case: u32,
        #[arg(long, default_value_t = 1_000_000)]
        paths: usize,
        #[arg(long, default_value_t = 252)]
        steps: usize,
        #[arg(long)]
        no_antithetic: bool,
    },
}

/// Failure classes mapped onto process exit codes.
#[derive(Debug)]
enum Failure {
    /// Flag validation: exit 2.
    Usage(String),
    /// Domain error from the library: exit 3.
    Domain(asianvol::Error),
    /// A check that ran but did not pass: exit 1.
    Check(String),
    Io(anyhow::Error),
}

impl From<asianvol::Error> for Failure {
    fn from(e: asianvol::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn require_positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

fn require_finite(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be finite, got {v}")))
    }
}

fn market(spot: f64, rate: f64, dividend: f64, vol: f64, maturity: f64) -> Result<MarketParams, Failure> {
    Ok(MarketParams {
        spot: require_positive("spot", spot)?,
        rate: require_finite("rate", rate)?,
        dividend: require_finite("dividend", dividend)?,
        sigma: require_positive("vol", vol)?,
        maturity: require_positive("maturity", maturity)?,
    })
}

fn mc_config(cli: &Cli, paths: usize, steps: usize, no_antithetic: bool) -> Result<McConfig, Failure> {
    if paths < 1 {
        return Err(usage("--paths must be at least 1"));
    }
    if steps < 2 {
        return Err(usage("--steps must be at least 2"));
    }
    Ok(McConfig {
        paths,
        steps,
        seed: cli.seed,
        antithetic: !no_antithetic,
        budget: cli.mc_budget,
        ..McConfig::default()
    })
}

fn find_case(id: u32) -> Result<benchmark::BenchmarkCase, Failure> {
    benchmark::load_cases()?
        .into_iter()
        .find(|c| c.case_id == id)
        .ok_or_else(|| usage(format!("unknown benchmark case {id}; expected 1..7")))
}

fn cmd_price(cli: &Cli, out: &mut impl Write) -> Result<(), Failure> {
    let Command::Price {
        strike,
        spot,
        rate,
        dividend,
        vol,
        maturity,
        side,
        method,
        ref mc,
    } = cli.command
    else {
        unreachable!()
    };
    let strike = require_positive("strike", strike)?;
    let params = market(spot, rate, dividend, vol, maturity)?;
    let forward = forward_price(&params);
    let mut rec = Record::new(&["method", "strike", "forward", "sigma_ln", "price", "std_error"]);
    rec.set("method", Value::from(method.name()));
    rec.set("strike", json!(strike));
    rec.set("forward", json!(forward));
    match method.vol_source() {
        Some(source) => {
            let sigma = equivalent_vol(strike, &params, source)?;
            let price = asian_price(strike, &params, source, side.into())?;
            rec.set("sigma_ln", json!(sigma));
            rec.set_price("price", price);
        }
        None => {
            let config = mc_config(cli, mc.paths, mc.steps, mc.no_antithetic)?;
            let res = mc_asian_price(strike, &params, side.into(), &config)?;
            rec.set_price("price", res.price);
            rec.set("std_error", json!(res.std_error));
        }
    }
    output::write_records(out, cli.format, &[rec])?;
    Ok(())
}

fn report_record(row: &ReportRow) -> Record {
    let mut rec = Record::new(&[
        "case", "k", "r", "sigma", "T", "method", "price", "ref", "err_bps", "status",
    ]);
    rec.set("case", json!(row.case_id));
    rec.set_fixed("k", row.k, 6);
    rec.set("r", json!(row.rate));
    rec.set("sigma", json!(row.sigma));
    rec.set("T", json!(row.maturity));
    rec.set("method", Value::from(row.method.as_str()));
    match row.price {
        Some(p) => rec.set_price("price", p),
        None => rec.set("price", Value::Null),
    }
    rec.set_price("ref", row.reference);
    match row.err_bps {
        Some(e) => rec.set_fixed("err_bps", e, 1),
        None => rec.set("err_bps", Value::Null),
    }
    rec.set("status", Value::from(row.status.as_str()));
    rec
}

fn cmd_bench(cli: &Cli, table: u8, tolerance: f64, out: &mut impl Write) -> Result<(), Failure> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(usage(format!("--tolerance must be nonnegative, got {tolerance}")));
    }
    let report: BenchmarkReport = benchmark::run_table(table, tolerance)?;
    let records: Vec<Record> = report.rows.iter().map(report_record).collect();
    output::write_records(out, cli.format, &records)?;
    for row in &report.rows {
        if let Some(note) = &row.note {
            eprintln!("case {} {}: {}: {}", row.case_id, row.method, row.status.as_str(), note);
        }
    }
    let failed = report.rows.iter().filter(|r| r.status == Status::Fail).count();
    if failed > 0 {
        return Err(Failure::Check(format!(
            "table {table}: {failed} cell(s) outside tolerance {tolerance:e}"
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_smile(
    cli: &Cli,
    case: Option<u32>,
    inputs: [Option<f64>; 5],
    k_min: f64,
    k_max: f64,
    n_points: usize,
    method: PriceMethod,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let source = match method.vol_source() {
        Some(VolSource::Expansion(order)) => VolSource::Expansion(order),
        _ => return Err(usage("smile supports --method lead, atm, lin or quad")),
    };
    if n_points < 2 {
        return Err(usage("--n-points must be at least 2"));
    }
    let k_min = require_positive("k-min", k_min)?;
    let k_max = require_positive("k-max", k_max)?;
    if k_max <= k_min {
        return Err(usage("--k-max must exceed --k-min"));
    }
    let bench_case = case.map(find_case).transpose()?;
    let [spot, rate, dividend, vol, maturity] = inputs;
    let params = match &bench_case {
        Some(c) => {
            let p = c.params();
            market(
                spot.unwrap_or(p.spot),
                rate.unwrap_or(p.rate),
                dividend.unwrap_or(p.dividend),
                vol.unwrap_or(p.sigma),
                maturity.unwrap_or(p.maturity),
            )?
        }
        None => {
            let need =
                |name: &str, v: Option<f64>| v.ok_or_else(|| usage(format!("--{name} is required without --case")));
            market(
                spot.unwrap_or(1.0),
                need("rate", rate)?,
                dividend.unwrap_or(0.0),
                need("vol", vol)?,
                need("maturity", maturity)?,
            )?
        }
    };

    let mut points: Vec<(f64, Option<&'static str>)> = (0..n_points)
        .map(|i| (k_min + (k_max - k_min) * i as f64 / (n_points - 1) as f64, None))
        .collect();
    points.push((forward_price(&params) / params.spot, Some("atm")));
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut records = Vec::with_capacity(points.len() + 1);
    for (k, marker) in points {
        let strike = k * params.spot;
        let sigma = equivalent_vol(strike, &params, source)?;
        let price = asian_price(strike, &params, source, OptionSide::Call)?;
        let mut rec = Record::new(&["k", "sigma_ln", "price", "marker"]);
        rec.set("k", json!(k));
        rec.set("sigma_ln", json!(sigma));
        rec.set("price", json!(price));
        rec.set("marker", marker.map(Value::from).unwrap_or(Value::Null));
        records.push(rec);
    }
    if let Some(c) = &bench_case {
        let mut rec = Record::new(&["k", "sigma_ln", "price", "marker"]);
        rec.set("k", json!(c.k()));
        rec.set("sigma_ln", json!(c.benchmark_vol()?));
        rec.set("price", json!(c.benchmark));
        rec.set("marker", Value::from("benchmark"));
        records.push(rec);
    }
    output::write_records(out, cli.format, &records)?;
    Ok(())
}

fn cmd_mc_check(
    cli: &Cli,
    case: u32,
    paths: usize,
    steps: usize,
    no_antithetic: bool,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let c = find_case(case)?;
    let config = mc_config(cli, paths, steps, no_antithetic)?;
    let params = c.params();
    let mc = mc_asian_price(c.strike, &params, OptionSide::Call, &config)?;
    let lin = c.price(Method::Lin)?;
    let forward = forward_price(&params);
    let diff = mc.price - lin;
    let allowance = (3.0 * mc.std_error).max(2e-4);
    let mean_ok = (mc.mean_average - forward).abs() <= 3.0 * mc.mean_average_std_error;
    let ok = diff.abs() <= allowance && mean_ok;

    let mut rec = Record::new(&[
        "case",
        "paths",
        "steps",
        "mc_price",
        "std_error",
        "lin_price",
        "diff",
        "mean_average",
        "forward",
        "status",
    ]);
    rec.set("case", json!(case));
    rec.set("paths", json!(paths));
    rec.set("steps", json!(steps));
    rec.set("mc_price", json!(mc.price));
    rec.set("std_error", json!(mc.std_error));
    rec.set("lin_price", json!(lin));
    rec.set("diff", json!(diff));
    rec.set("mean_average", json!(mc.mean_average));
    rec.set("forward", json!(forward));
    rec.set("status", Value::from(if ok { "PASS" } else { "FAIL" }));
    output::write_records(out, cli.format, &[rec])?;
    if !ok {
        return Err(Failure::Check(format!(
            "Monte Carlo disagrees with the linear expansion by {diff:e}"
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Price { .. } => cmd_price(cli, &mut out)?,
        Command::Bench { table, tolerance } => cmd_bench(cli, *table, *tolerance, &mut out)?,
        Command::Smile {
            case,
            spot,
            rate,
            dividend,
            vol,
            maturity,
            k_min,
            k_max,
            n_points,
            method,
        } => cmd_smile(
            cli,
            *case,
            [*spot, *rate, *dividend, *vol, *maturity],
            *k_min,
            *k_max,
            *n_points,
            *method,
            &mut out,
        )?,
        Command::McCheck {
            case,
            paths,
            steps,
            no_antithetic,
        } => cmd_mc_check(cli, *case, *paths, *steps, *no_antithetic, &mut out)?,
    }
    out.flush().context("flushing stdout")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
            {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
