//! Built-in tariffs and battery.
//!
//! Two seasonal time-of-use price schedules with three levels each
//! (off-peak 5, mid-peak 10, on-peak 15 cents/kWh) and two demand-charge
//! rates. The battery is a nominal 2 kWh cell of which 1.8 kWh is usable,
//! charged and discharged at up to 0.6 kW.

use bess_core::domain::{BatterySpec, Tariff};
use serde::{Deserialize, Serialize};

/// Nominal cell capacity, kWh. Metadata only: dispatch uses the usable
/// capacity of [`battery`].
pub const NOMINAL_CELL_CAPACITY_KWH: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Season {
    Summer,
    Winter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DemandLevel {
    Low,
    High,
}

pub fn battery() -> BatterySpec {
    BatterySpec::new(1.8, 0.6, 0.6)
}

/// 24-hour price vector for the season plus the demand rate. Interval
/// `h -- h+1` maps to index `h`.
pub fn tariff(season: Season, demand: DemandLevel) -> Tariff {
    let mut prices = vec![5.0; 24];
    let (morning, midday) = match season {
        Season::Summer => (10.0, 15.0),
        Season::Winter => (15.0, 10.0),
    };
    prices[7..11].fill(morning);
    prices[11..17].fill(midday);
    prices[17..19].fill(morning);
    let demand_rate = match demand {
        DemandLevel::Low => 20.0,
        DemandLevel::High => 30.0,
    };
    Tariff::new(prices, demand_rate)
}

/// Names accepted wherever a scenario document references a tariff.
pub const TARIFF_NAMES: [&str; 4] = ["summer-low", "summer-high", "winter-low", "winter-high"];

pub fn tariff_by_name(name: &str) -> Option<Tariff> {
    match name {
        "summer-low" => Some(tariff(Season::Summer, DemandLevel::Low)),
        "summer-high" => Some(tariff(Season::Summer, DemandLevel::High)),
        "winter-low" => Some(tariff(Season::Winter, DemandLevel::Low)),
        "winter-high" => Some(tariff(Season::Winter, DemandLevel::High)),
        _ => None,
    }
}
