//! The objective function: indicator-gated energy charge plus demand charge.
//!
//! The net grid draw during hour `i` is `x_i - x_{i-1} + l_i - g_i`. Hours
//! with positive net draw are billed at that hour's price; exported energy
//! earns nothing (feed-in compensation is assumed zero). On top of the
//! energy charge, the demand rate is applied to the day's peak net draw.
//!
//! Everything here is a pure function of immutable inputs and may be called
//! from many threads simultaneously.

use alloc::vec::Vec;

use crate::domain::{CostBreakdown, Scenario, Schedule};
use crate::feasibility::{check_schedule, Violation};

/// Hourly net grid draw for a feasible schedule. Entry `i` equals
/// `x_i - x_{i-1} + l_i - g_i` with `x_0` the scenario's initial charge.
pub fn net_series(scenario: &Scenario, x: &Schedule) -> Result<Vec<f64>, Violation> {
    check_schedule(x, scenario)?;
    Ok(raw_net_series(scenario, x.residual()))
}

pub(crate) fn raw_net_series(scenario: &Scenario, residual: &[f64]) -> Vec<f64> {
    let mut prev = scenario.initial_charge;
    residual
        .iter()
        .zip(&scenario.load)
        .zip(&scenario.generation)
        .map(|((&x, &load), &gen)| {
            let net = x - prev + load - gen;
            prev = x;
            net
        })
        .collect()
}

/// Full bill for a feasible schedule.
pub fn evaluate(scenario: &Scenario, x: &Schedule) -> Result<CostBreakdown, Violation> {
    Ok(breakdown_from_nets(scenario, net_series(scenario, x)?))
}

pub(crate) fn breakdown_from_nets(scenario: &Scenario, net_series: Vec<f64>) -> CostBreakdown {
    let mut energy_charge = 0.0;
    let mut peak_net = f64::NEG_INFINITY;
    for (&net, &price) in net_series.iter().zip(&scenario.tariff.energy_price) {
        if net > 0.0 {
            energy_charge += net * price;
        }
        if net > peak_net {
            peak_net = net;
        }
    }
    let billed_peak = if scenario.literal_demand { peak_net } else { peak_net.max(0.0) };
    let demand_charge = billed_peak * scenario.tariff.demand_rate;
    CostBreakdown {
        energy_charge,
        demand_charge,
        total: energy_charge + demand_charge,
        peak_net,
        net_series,
    }
}

/// Bill with no battery at all: net draw is simply `l_i - g_i`. Equivalent
/// to evaluating the flat schedule held at the initial charge, with battery
/// limits ignored.
pub fn no_ess_cost(scenario: &Scenario) -> CostBreakdown {
    let nets = scenario
        .load
        .iter()
        .zip(&scenario.generation)
        .map(|(&load, &gen)| load - gen)
        .collect();
    breakdown_from_nets(scenario, nets)
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("reference cost {0} must be positive for a saving to be defined")]
pub struct UndefinedSaving(pub f64);

/// Percentage saved relative to a reference bill:
/// `100 * (reference - algo) / reference`.
pub fn saving_percent(reference: f64, algo: f64) -> Result<f64, UndefinedSaving> {
    if reference <= 0.0 || reference.is_nan() {
        return Err(UndefinedSaving(reference));
    }
    Ok(100.0 * (reference - algo) / reference)
}
