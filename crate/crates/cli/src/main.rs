use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use bess_core::baselines::{npb_cost, npb_schedule};
use bess_core::cost::{no_ess_cost, saving_percent};
use bess_core::domain::{Scenario, Schedule};
use bess_core::dp::{dp_solve, DpConfig, SnapMode};
use bess_core::rcga::{run as rcga_run, RcgaConfig};

use bess_cli::builtins::{self, DemandLevel, Season};
use bess_cli::document::{parse_scenario, ScenarioDocument, TariffRef};
use bess_cli::profile_csv::parse_profile_csv;
use bess_cli::report::{report_csv, series_csv, table, ReportRow};
use bess_cli::synth::{synth_profile, DayType, Weather};

#[derive(Parser)]
#[command(
    name = "bess",
    version,
    about = "Battery dispatch scheduling under time-of-use tariffs with a demand charge"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run schedulers on a scenario and report cost breakdowns and savings.
    Run(RunArgs),
    /// Write a synthetic scenario document.
    Gen(GenArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario document to solve.
    #[arg(long)]
    scenario: PathBuf,
    /// Comma-separated list of algorithms: rcga, npb, noess, dp, or all.
    #[arg(long, default_value = "all")]
    algo: String,
    /// Base RNG seed for the genetic algorithm.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repeat the genetic algorithm over this many consecutive seeds and
    /// report the mean cost with its standard deviation.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Population size.
    #[arg(long, default_value_t = 100)]
    pop: usize,
    /// Number of generations.
    #[arg(long, default_value_t = 2000)]
    gens: usize,
    /// BLX blend width factor.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Per-gene mutation probability (default 0.1/T).
    #[arg(long)]
    pm: Option<f64>,
    /// Battery-state grid step for the DP solver, kWh.
    #[arg(long, default_value_t = 0.05)]
    grid_step: f64,
    /// Bill the demand charge on the raw peak even when it is negative.
    #[arg(long)]
    literal_demand_formula: bool,
    /// Evaluate offspring fitness on worker threads (same results, faster).
    #[arg(long)]
    parallel_fitness: bool,
    /// Write the summary report CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the hourly series CSV here (requires a single algorithm).
    #[arg(long)]
    emit_series: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    season: SeasonArg,
    #[arg(long, value_enum)]
    weather: WeatherArg,
    #[arg(long, value_enum)]
    day: DayArg,
    /// Demand-charge level of the built-in tariff.
    #[arg(long, value_enum, default_value = "low")]
    demand: DemandArg,
    /// Daily load total, kWh.
    #[arg(long, default_value_t = 30.0)]
    scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Take load and generation from a 'hour,load_kwh,gen_kwh' CSV instead
    /// of the synthetic generator.
    #[arg(long)]
    profile_csv: Option<PathBuf>,
    #[arg(long)]
    name: Option<String>,
    /// Output path for the scenario document.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SeasonArg {
    Summer,
    Winter,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum WeatherArg {
    Sunny,
    Cloudy,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum DayArg {
    Weekday,
    Weekend,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum DemandArg {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Algo {
    NoEss,
    Npb,
    Rcga,
    Dp,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::NoEss => "noess",
            Algo::Npb => "npb",
            Algo::Rcga => "rcga",
            Algo::Dp => "dp",
        }
    }
}

fn parse_algos(list: &str) -> Result<Vec<Algo>> {
    let mut algos = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token {
            "noess" => algos.push(Algo::NoEss),
            "npb" => algos.push(Algo::Npb),
            "rcga" => algos.push(Algo::Rcga),
            "dp" => algos.push(Algo::Dp),
            "all" => algos.extend([Algo::NoEss, Algo::Npb, Algo::Rcga, Algo::Dp]),
            other => bail!("unknown algorithm '{other}'; expected rcga, npb, noess, dp, or all"),
        }
    }
    if algos.is_empty() {
        bail!("no algorithm requested");
    }
    Ok(algos)
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Gen(args) => gen_command(args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

/// Mean cost row over repeated seeds plus the schedule of the cheapest run.
fn rcga_study(scenario: &Scenario, args: &RunArgs) -> Result<(ReportRow, Schedule)> {
    let runs: Vec<_> = (0..args.seeds.max(1))
        .into_par_iter()
        .map(|offset| {
            let config = RcgaConfig {
                population: args.pop,
                generations: args.gens,
                alpha: args.alpha,
                mutation_rate: args.pm,
                seed: args.seed.wrapping_add(offset),
                parallel_fitness: args.parallel_fitness,
            };
            rcga_run(scenario, &config)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let totals: Vec<f64> = runs.iter().map(|r| r.best.total_cost()).collect();
    let n = totals.len() as f64;
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / n;
    let breakdowns: Vec<_> = runs
        .iter()
        .map(|r| {
            bess_core::cost::evaluate(scenario, r.best.schedule())
                .expect("run outputs are feasible")
        })
        .collect();
    let mean_total = mean(&totals);
    let std = if totals.len() > 1 {
        let var =
            totals.iter().map(|t| (t - mean_total) * (t - mean_total)).sum::<f64>() / (n - 1.0);
        Some(var.sqrt())
    } else {
        None
    };

    let best_index = (0..runs.len())
        .min_by(|&a, &b| totals[a].partial_cmp(&totals[b]).expect("finite totals"))
        .expect("at least one run");
    let row = ReportRow {
        algo: Algo::Rcga.name().into(),
        energy_charge: mean(&breakdowns.iter().map(|b| b.energy_charge).collect::<Vec<_>>()),
        demand_charge: mean(&breakdowns.iter().map(|b| b.demand_charge).collect::<Vec<_>>()),
        total: mean_total,
        peak_net: mean(&breakdowns.iter().map(|b| b.peak_net).collect::<Vec<_>>()),
        saving_pct: None,
        total_std: std,
    };
    Ok((row, runs[best_index].best.schedule().clone()))
}

fn run_command(args: RunArgs) -> Result<()> {
    let bytes = fs::read(&args.scenario)
        .with_context(|| format!("reading scenario '{}'", args.scenario.display()))?;
    let mut scenario = parse_scenario(&bytes)
        .with_context(|| format!("loading scenario '{}'", args.scenario.display()))?;
    if args.literal_demand_formula {
        scenario.literal_demand = true;
    }

    let algos = parse_algos(&args.algo)?;
    if args.emit_series.is_some() && algos.len() != 1 {
        bail!("--emit-series needs exactly one algorithm, got '{}'", args.algo);
    }

    let reference = no_ess_cost(&scenario);
    let mut rows = Vec::with_capacity(algos.len());
    let mut series_schedule = None;
    for algo in &algos {
        let (mut row, schedule) = match algo {
            Algo::NoEss => {
                let row = ReportRow {
                    algo: Algo::NoEss.name().into(),
                    energy_charge: reference.energy_charge,
                    demand_charge: reference.demand_charge,
                    total: reference.total,
                    peak_net: reference.peak_net,
                    saving_pct: None,
                    total_std: None,
                };
                (row, Schedule::flat(scenario.initial_charge, scenario.horizon))
            }
            Algo::Npb => {
                let breakdown = npb_cost(&scenario).context("net-power-based schedule")?;
                let row = ReportRow {
                    algo: Algo::Npb.name().into(),
                    energy_charge: breakdown.energy_charge,
                    demand_charge: breakdown.demand_charge,
                    total: breakdown.total,
                    peak_net: breakdown.peak_net,
                    saving_pct: None,
                    total_std: None,
                };
                (row, npb_schedule(&scenario))
            }
            Algo::Rcga => rcga_study(&scenario, &args)?,
            Algo::Dp => {
                let solution = dp_solve(
                    &scenario,
                    &DpConfig { grid_step: args.grid_step, snap_mode: SnapMode::Nearest },
                )?;
                if solution.snap_distance > 0.0 {
                    println!(
                        "note: initial charge snapped to {} (moved {} kWh) for the DP grid",
                        solution.snapped_initial_charge, solution.snap_distance
                    );
                }
                let row = ReportRow {
                    algo: Algo::Dp.name().into(),
                    energy_charge: solution.cost.energy_charge,
                    demand_charge: solution.cost.demand_charge,
                    total: solution.cost.total,
                    peak_net: solution.cost.peak_net,
                    saving_pct: None,
                    total_std: None,
                };
                (row, solution.schedule)
            }
        };
        row.saving_pct = saving_percent(reference.total, row.total).ok();
        rows.push(row);
        series_schedule = Some(schedule);
    }

    print!("{}", table(&rows));

    if let Some(path) = &args.out {
        fs::write(path, report_csv(&rows))
            .with_context(|| format!("writing report '{}'", path.display()))?;
    }
    if let Some(path) = &args.emit_series {
        let schedule = series_schedule.expect("one algorithm was run");
        let text = series_csv(&scenario, &schedule).context("emitting hourly series")?;
        fs::write(path, text)
            .with_context(|| format!("writing series '{}'", path.display()))?;
    }
    Ok(())
}

fn gen_command(args: GenArgs) -> Result<()> {
    let season = match args.season {
        SeasonArg::Summer => Season::Summer,
        SeasonArg::Winter => Season::Winter,
    };
    let weather = match args.weather {
        WeatherArg::Sunny => Weather::Sunny,
        WeatherArg::Cloudy => Weather::Cloudy,
    };
    let day_type = match args.day {
        DayArg::Weekday => DayType::Weekday,
        DayArg::Weekend => DayType::Weekend,
    };
    let demand = match args.demand {
        DemandArg::Low => DemandLevel::Low,
        DemandArg::High => DemandLevel::High,
    };

    let (load, generation) = match &args.profile_csv {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading profile '{}'", path.display()))?;
            parse_profile_csv(&text)
                .with_context(|| format!("parsing profile '{}'", path.display()))?
        }
        None => synth_profile(season, weather, day_type, args.scale, args.seed),
    };

    let tariff_name = format!(
        "{}-{}",
        match season {
            Season::Summer => "summer",
            Season::Winter => "winter",
        },
        match demand {
            DemandLevel::Low => "low",
            DemandLevel::High => "high",
        }
    );
    let default_name = format!(
        "{tariff_name}-{}-{}",
        serde_token(&weather),
        serde_token(&day_type)
    );
    let battery = builtins::battery();
    let document = ScenarioDocument {
        format_version: bess_cli::document::FORMAT_VERSION,
        name: args.name.clone().unwrap_or(default_name),
        season: Some(season),
        weather: Some(weather),
        day_type: Some(day_type),
        load_kwh: load,
        generation_kwh: generation,
        tariff: TariffRef::Builtin(tariff_name),
        battery: bess_cli::document::BatteryDoc {
            capacity_kwh: battery.capacity,
            charge_limit_kw: battery.charge_limit,
            discharge_limit_kw: battery.discharge_limit,
        },
        initial_charge_kwh: 0.0,
        cyclic: false,
        literal_demand_formula: false,
    };
    document
        .to_scenario()
        .context("generated scenario failed validation")?;
    fs::write(&args.out, document.to_json())
        .with_context(|| format!("writing scenario '{}'", args.out.display()))?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn serde_token<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value)
        .expect("enum tokens always serialize")
        .trim_matches('"')
        .to_owned()
}
