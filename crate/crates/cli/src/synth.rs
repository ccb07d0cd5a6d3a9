//! Synthetic residential profiles.
//!
//! Real utility load traces and PV production data are not bundled, so the
//! generator below produces plausible stand-ins: a double-peaked daily load
//! curve (morning and evening peaks, evening dominant) scaled to a requested
//! daily total, and a solar bell centred near noon that vanishes outside
//! daylight. Cloud cover cuts production to roughly a third. Output is
//! deterministic per seed.

use bess_core::domain::Scenario;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::builtins::{self, DemandLevel, Season};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weather {
    Sunny,
    Cloudy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DayType {
    Weekday,
    Weekend,
}

fn bell(hour: f64, centre: f64, spread: f64) -> f64 {
    (-((hour - centre) * (hour - centre)) / (2.0 * spread * spread)).exp()
}

/// Hourly load and generation arrays, each of 24 entries; the load sums to
/// `scale_kwh` exactly up to rounding.
pub fn synth_profile(
    season: Season,
    weather: Weather,
    day_type: DayType,
    scale_kwh: f64,
    seed: u64,
) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (morning_peak, morning_weight) = match day_type {
        DayType::Weekday => (7.5, 0.8),
        DayType::Weekend => (9.5, 0.55),
    };
    let base = match season {
        Season::Summer => 0.45,
        Season::Winter => 0.6,
    };
    let mut load: Vec<f64> = (0..24)
        .map(|h| {
            let hour = h as f64;
            let shape = base
                + morning_weight * bell(hour, morning_peak, 1.6)
                + 1.4 * bell(hour, 19.5, 2.0);
            shape * (1.0 + 0.08 * rng.random_range(-1.0..1.0))
        })
        .collect();
    let load_total: f64 = load.iter().sum();
    for l in &mut load {
        *l *= scale_kwh / load_total;
    }

    let (daylight, solar_spread, season_yield) = match season {
        Season::Summer => (6..=19, 3.0, 0.45),
        Season::Winter => (8..=17, 2.2, 0.25),
    };
    let weather_yield = match weather {
        Weather::Sunny => 1.0,
        Weather::Cloudy => 0.3,
    };
    let mut generation: Vec<f64> = (0..24)
        .map(|h| {
            if daylight.contains(&h) {
                bell(h as f64, 12.5, solar_spread) * (1.0 + 0.05 * rng.random_range(-1.0..1.0))
            } else {
                0.0
            }
        })
        .collect();
    let gen_total: f64 = generation.iter().sum();
    let target = scale_kwh * season_yield * weather_yield;
    for g in &mut generation {
        *g *= target / gen_total;
    }

    (load, generation)
}

/// Assembles a full scenario from a synthetic profile, the built-in tariff
/// for the season and demand level, and the built-in battery starting empty.
pub fn synth_scenario(
    season: Season,
    weather: Weather,
    day_type: DayType,
    demand: DemandLevel,
    scale_kwh: f64,
    seed: u64,
) -> Scenario {
    let (load, generation) = synth_profile(season, weather, day_type, scale_kwh, seed);
    Scenario::new(load, generation, builtins::tariff(season, demand), builtins::battery())
}
