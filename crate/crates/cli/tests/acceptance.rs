//! Acceptance gate: one test per criterion, each printing a PASS line with
//! its measurements. Timed criteria serialize on a global lock so parallel
//! test scheduling cannot distort their wall-clock budgets.

use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use bess_core::baselines::npb_cost;
use bess_core::cost::{no_ess_cost, saving_percent};
use bess_core::domain::{BatterySpec, Scenario, Tariff};
use bess_core::dp::{brute_force_solve, dp_solve, DpConfig, SnapMode};
use bess_core::feasibility::is_feasible;
use bess_core::rcga::{blx_crossover, gaussian_mutate, initialize_population, run, Individual, RcgaConfig};

use bess_cli::builtins::{self, DemandLevel, Season};
use bess_cli::synth::{synth_scenario, DayType, Weather};

fn gate() -> MutexGuard<'static, ()> {
    static GATE: Mutex<()> = Mutex::new(());
    GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn paper_battery() -> BatterySpec {
    builtins::battery()
}

fn random_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    let horizon = rng.random_range(1..=24);
    let load = (0..horizon).map(|_| rng.random_range(0.0..3.0)).collect();
    let generation = (0..horizon).map(|_| rng.random_range(0.0..3.0)).collect();
    let prices = (0..horizon).map(|_| rng.random_range(0.0..20.0)).collect();
    let battery = paper_battery();
    Scenario::new(load, generation, Tariff::new(prices, rng.random_range(0.0..40.0)), battery)
        .with_initial_charge(rng.random_range(0.0..=1.8))
}

/// Criterion 1 — every operator keeps schedules feasible, 10,000 times each.
#[test]
fn criterion_1_feasibility_closure() {
    let _gate = gate();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let config = RcgaConfig { population: 4, ..RcgaConfig::default() };
    for round in 0..10_000 {
        let scenario = random_scenario(&mut rng);
        let pop = initialize_population(&scenario, &config, &mut rng);
        for individual in &pop {
            assert!(
                is_feasible(individual.schedule(), &scenario),
                "round {round}: initialization broke feasibility"
            );
        }
        let child = blx_crossover(&pop[0], &pop[1], &scenario, 0.5, &mut rng);
        assert!(
            is_feasible(child.schedule(), &scenario),
            "round {round}: crossover broke feasibility"
        );
        let pm = [0.1 / scenario.horizon as f64, 0.5, 1.0][round % 3];
        let mutated = gaussian_mutate(&child, &scenario, pm, &mut rng);
        assert!(
            is_feasible(mutated.schedule(), &scenario),
            "round {round}: mutation broke feasibility"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "closure sweep took {elapsed:?}");
    println!("criterion 1 (feasibility closure): PASS — 10000 rounds in {elapsed:?}");
}

/// Criterion 2 — the DP solver agrees with exhaustive enumeration.
#[test]
fn criterion_2_oracle_agreement() {
    let _gate = gate();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    let mut worst_gap: f64 = 0.0;
    for round in 0..200 {
        let horizon = rng.random_range(1..=4);
        let states = rng.random_range(2..=10usize);
        let step = rng.random_range(0.05..0.5);
        let capacity = (states - 1) as f64 * step;
        let battery = BatterySpec::new(
            capacity,
            rng.random_range(0.0..=capacity.max(0.1)),
            rng.random_range(0.0..=capacity.max(0.1)),
        );
        let load = (0..horizon).map(|_| rng.random_range(0.0..2.0)).collect();
        let generation = (0..horizon).map(|_| rng.random_range(0.0..2.0)).collect();
        let prices = (0..horizon).map(|_| rng.random_range(0.0..20.0)).collect();
        let mut scenario =
            Scenario::new(load, generation, Tariff::new(prices, rng.random_range(0.0..40.0)), battery)
                .with_initial_charge(rng.random_range(0.0..=capacity));
        scenario.literal_demand = rng.random_range(0.0..1.0) < 0.5;
        scenario.cyclic = rng.random_range(0.0..1.0) < 0.1;

        let config = DpConfig { grid_step: step, snap_mode: SnapMode::Nearest };
        let dp = dp_solve(&scenario, &config).unwrap();
        let brute = brute_force_solve(&scenario, &config).unwrap();
        let gap = (dp.cost.total - brute.cost.total).abs();
        worst_gap = worst_gap.max(gap);
        assert!(
            gap < 1e-9,
            "round {round}: dp {} vs brute force {}",
            dp.cost.total,
            brute.cost.total
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "oracle sweep took {elapsed:?}");
    println!(
        "criterion 2 (oracle agreement): PASS — 200 instances, worst gap {worst_gap:.2e}, {elapsed:?}"
    );
}

struct Case {
    name: String,
    noess_total: f64,
    npb_total: f64,
    rcga_best: f64,
    dp_total: f64,
}

struct Fixture {
    cases: Vec<Case>,
    build_time: Duration,
}

/// Twenty synthetic desk-scale days: all sixteen tariff/season/weather/
/// day-type combinations plus four scale and seed variants. Each carries
/// the no-battery bill, the heuristic bill, the best of ten seeded
/// optimizer runs, and the grid optimum.
fn fixture() -> &'static Fixture {
    static FIXTURE: OnceLock<Fixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let mut specs = Vec::new();
        let mut seed = 0u64;
        for season in [Season::Summer, Season::Winter] {
            for weather in [Weather::Sunny, Weather::Cloudy] {
                for day_type in [DayType::Weekday, DayType::Weekend] {
                    for demand in [DemandLevel::Low, DemandLevel::High] {
                        seed += 1;
                        specs.push((season, weather, day_type, demand, 30.0, seed));
                    }
                }
            }
        }
        specs.push((Season::Summer, Weather::Sunny, DayType::Weekday, DemandLevel::Low, 18.0, 101));
        specs.push((Season::Winter, Weather::Cloudy, DayType::Weekday, DemandLevel::High, 40.0, 102));
        specs.push((Season::Summer, Weather::Cloudy, DayType::Weekend, DemandLevel::Low, 24.0, 103));
        specs.push((Season::Winter, Weather::Sunny, DayType::Weekend, DemandLevel::High, 36.0, 104));

        let start = Instant::now();
        let cases: Vec<Case> = specs
            .par_iter()
            .map(|&(season, weather, day_type, demand, scale, seed)| {
                let scenario = synth_scenario(season, weather, day_type, demand, scale, seed);
                let rcga_best = (0..10u64)
                    .map(|s| {
                        run(&scenario, &RcgaConfig { seed: s, ..RcgaConfig::default() })
                            .expect("valid scenario and config")
                            .best
                            .total_cost()
                    })
                    .fold(f64::INFINITY, f64::min);
                let dp = dp_solve(&scenario, &DpConfig::default()).expect("valid scenario");
                Case {
                    name: format!("{season:?}-{weather:?}-{day_type:?}-{demand:?}-{scale}kWh"),
                    noess_total: no_ess_cost(&scenario).total,
                    npb_total: npb_cost(&scenario).expect("npb is feasible here").total,
                    rcga_best,
                    dp_total: dp.cost.total,
                }
            })
            .collect();
        Fixture { cases, build_time: start.elapsed() }
    })
}

/// Criterion 3 — best-of-ten optimizer cost within 2% of the grid optimum.
#[test]
fn criterion_3_rcga_quality() {
    let _gate = gate();
    let fixture = fixture();
    let mut worst_ratio: f64 = 0.0;
    for case in &fixture.cases {
        let ratio = case.rcga_best / case.dp_total;
        worst_ratio = worst_ratio.max(ratio);
        assert!(
            case.rcga_best <= 1.02 * case.dp_total,
            "{}: best-of-10 {} vs grid optimum {} (ratio {ratio:.5})",
            case.name,
            case.rcga_best,
            case.dp_total
        );
    }
    assert!(
        fixture.build_time < Duration::from_secs(300),
        "fixture took {:?}",
        fixture.build_time
    );
    println!(
        "criterion 3 (rcga quality): PASS — {} scenarios, worst ratio {worst_ratio:.5}, fixture {:?}",
        fixture.cases.len(),
        fixture.build_time
    );
}

/// Criterion 4 — heuristic never loses to no battery, optimizer never loses
/// to the heuristic.
#[test]
fn criterion_4_dominance_ordering() {
    let _gate = gate();
    let fixture = fixture();
    let mut npb_wins = 0;
    for case in &fixture.cases {
        assert!(
            case.npb_total <= case.noess_total,
            "{}: npb {} above no-ess {}",
            case.name,
            case.npb_total,
            case.noess_total
        );
        assert!(
            case.rcga_best <= case.npb_total,
            "{}: rcga {} above npb {}",
            case.name,
            case.rcga_best,
            case.npb_total
        );
        if case.npb_total < case.noess_total {
            npb_wins += 1;
        }
    }
    println!(
        "criterion 4 (dominance ordering): PASS — {} scenarios, npb strictly saves on {}",
        fixture.cases.len(),
        npb_wins
    );
}

/// Criterion 5 — the savings formula reproduces the published roundings.
#[test]
fn criterion_5_savings_formula() {
    let _gate = gate();
    let npb = saving_percent(83.69, 68.76).unwrap();
    assert_eq!(npb.round() as i64, 18, "npb saving {npb}");
    let rcga = saving_percent(83.69, 63.87).unwrap();
    assert_eq!(rcga.round() as i64, 24, "rcga saving {rcga}");
    println!("criterion 5 (savings formula): PASS — {npb:.4}% -> 18, {rcga:.4}% -> 24");
}

/// Criterion 6 — both built-in seasonal price vectors and both demand rates,
/// cell by cell against an independently transcribed table.
#[test]
fn criterion_6_tariff_fidelity() {
    let _gate = gate();
    #[rustfmt::skip]
    let summer = [
        5.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0,
        10.0, 10.0, 10.0, 10.0,
        15.0, 15.0, 15.0, 15.0, 15.0, 15.0,
        10.0, 10.0,
        5.0, 5.0, 5.0, 5.0, 5.0,
    ];
    #[rustfmt::skip]
    let winter = [
        5.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0,
        15.0, 15.0, 15.0, 15.0,
        10.0, 10.0, 10.0, 10.0, 10.0, 10.0,
        15.0, 15.0,
        5.0, 5.0, 5.0, 5.0, 5.0,
    ];
    for demand in [DemandLevel::Low, DemandLevel::High] {
        let s = builtins::tariff(Season::Summer, demand);
        let w = builtins::tariff(Season::Winter, demand);
        for hour in 0..24 {
            assert_eq!(s.energy_price[hour], summer[hour], "summer hour {hour}");
            assert_eq!(w.energy_price[hour], winter[hour], "winter hour {hour}");
        }
    }
    assert_eq!(builtins::tariff(Season::Summer, DemandLevel::Low).demand_rate, 20.0);
    assert_eq!(builtins::tariff(Season::Summer, DemandLevel::High).demand_rate, 30.0);
    assert_eq!(builtins::tariff(Season::Winter, DemandLevel::Low).demand_rate, 20.0);
    assert_eq!(builtins::tariff(Season::Winter, DemandLevel::High).demand_rate, 30.0);
    println!("criterion 6 (tariff fidelity): PASS — 48 price cells and both demand rates exact");
}

/// Criterion 7 — identical invocations produce byte-identical reports, with
/// fitness evaluation parallel and sequential.
#[test]
fn criterion_7_determinism() {
    let _gate = gate();
    let dir = tempfile::tempdir().unwrap();
    let scenario = synth_scenario(
        Season::Summer,
        Weather::Sunny,
        DayType::Weekday,
        DemandLevel::Low,
        30.0,
        7,
    );
    let path = dir.path().join("day.json");
    std::fs::write(&path, bess_cli::document::write_scenario(&scenario)).unwrap();

    let invoke = |tag: &str, parallel: bool| {
        let report = dir.path().join(format!("report-{tag}.csv"));
        let series = dir.path().join(format!("series-{tag}.csv"));
        let mut args = vec![
            "run".to_owned(),
            "--scenario".to_owned(), path.to_str().unwrap().to_owned(),
            "--algo".to_owned(), "rcga".to_owned(),
            "--seed".to_owned(), "3".to_owned(),
            "--seeds".to_owned(), "2".to_owned(),
            "--gens".to_owned(), "400".to_owned(),
            "--out".to_owned(), report.to_str().unwrap().to_owned(),
            "--emit-series".to_owned(), series.to_str().unwrap().to_owned(),
        ];
        if parallel {
            args.push("--parallel-fitness".to_owned());
        }
        let output = std::process::Command::new(env!("CARGO_BIN_EXE_bess"))
            .args(&args)
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
        (
            std::fs::read(&report).unwrap(),
            std::fs::read(&series).unwrap(),
            output.stdout,
        )
    };

    let a = invoke("a", false);
    let b = invoke("b", false);
    let c = invoke("c", true);
    let d = invoke("d", true);
    assert_eq!(a, b, "sequential runs differ");
    assert_eq!(c, d, "parallel runs differ");
    assert_eq!(a, c, "parallel fitness changed the reports");
    println!("criterion 7 (determinism): PASS — reports byte-identical across 4 invocations");
}

/// Criterion 8 — a full default run stays within the runtime budget.
#[test]
fn criterion_8_runtime() {
    let _gate = gate();
    let scenario = synth_scenario(
        Season::Winter,
        Weather::Sunny,
        DayType::Weekday,
        DemandLevel::High,
        30.0,
        11,
    );
    let config = RcgaConfig::default();
    let start = Instant::now();
    let outcome = run(&scenario, &config).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(config.population, 100);
    assert_eq!(config.generations, 2000);
    assert!(elapsed < Duration::from_secs(2), "run took {elapsed:?}");
    println!(
        "criterion 8 (runtime): PASS — N=100, 2000 generations, T=24 in {elapsed:?} (best {:.2})",
        outcome.best.total_cost()
    );
}

/// Criterion 9 — flat prices, no demand charge, no generation: cycling the
/// battery cannot beat not having one.
#[test]
fn criterion_9_zero_arbitrage_sanity() {
    let _gate = gate();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC9);
    let mut worst_gap: f64 = 0.0;
    for _ in 0..5 {
        let horizon = 24;
        let load: Vec<f64> = (0..horizon).map(|_| rng.random_range(0.0..3.0)).collect();
        let price = rng.random_range(1.0..20.0);
        let scenario = Scenario::new(
            load,
            vec![0.0; horizon],
            Tariff::new(vec![price; horizon], 0.0),
            paper_battery(),
        );
        let dp = dp_solve(&scenario, &DpConfig::default()).unwrap();
        let reference = no_ess_cost(&scenario);
        let gap = (dp.cost.total - reference.total).abs();
        worst_gap = worst_gap.max(gap);
        assert!(gap < 1e-9, "dp {} vs no-ess {}", dp.cost.total, reference.total);
    }
    println!("criterion 9 (zero-arbitrage sanity): PASS — worst gap {worst_gap:.2e}");
}

/// Evaluating a stored schedule reproduces its cached fitness.
#[test]
fn fitness_cache_is_consistent() {
    let scenario = synth_scenario(
        Season::Summer,
        Weather::Cloudy,
        DayType::Weekend,
        DemandLevel::Low,
        30.0,
        5,
    );
    let outcome = run(&scenario, &RcgaConfig { generations: 50, ..RcgaConfig::default() }).unwrap();
    let recomputed = bess_core::cost::evaluate(&scenario, outcome.best.schedule()).unwrap();
    assert_eq!(outcome.best.total_cost(), recomputed.total);
    let _: &Individual = &outcome.best;
}
