//! Scenario and solution data types.
//!
//! All quantities use one-hour intervals, so a power limit in kW is
//! numerically interchangeable with an energy bound in kWh. Money is in
//! cents throughout. Every type here is immutable after construction and
//! safe to share across concurrent readers.

use alloc::vec::Vec;
use core::fmt;

/// Usable battery limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatterySpec {
    /// Usable storage capacity, kWh.
    pub capacity: f64,
    /// Maximum energy accepted in one interval, kW.
    pub charge_limit: f64,
    /// Maximum energy delivered in one interval, kW.
    pub discharge_limit: f64,
}

impl BatterySpec {
    pub fn new(capacity: f64, charge_limit: f64, discharge_limit: f64) -> Self {
        Self { capacity, charge_limit, discharge_limit }
    }
}

/// Per-hour energy prices plus the demand-charge rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Tariff {
    /// One price per interval, cents/kWh.
    pub energy_price: Vec<f64>,
    /// Rate applied to the billing period's peak net draw, cents/kW.
    pub demand_rate: f64,
}

impl Tariff {
    pub fn new(energy_price: Vec<f64>, demand_rate: f64) -> Self {
        Self { energy_price, demand_rate }
    }
}

/// One day's inputs: hourly load and generation, the tariff, battery limits,
/// and the battery's charge at the start of the day.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Energy consumed during each interval, kWh.
    pub load: Vec<f64>,
    /// Energy generated during each interval, kWh.
    pub generation: Vec<f64>,
    pub tariff: Tariff,
    pub battery: BatterySpec,
    /// Residual battery energy before the first interval, kWh.
    pub initial_charge: f64,
    /// Number of intervals; 24 for a full day, but any positive count works.
    pub horizon: usize,
    /// Require the final residual to be at least the initial charge.
    /// Off by default: with no terminal constraint an optimizer will simply
    /// drain the battery by the last hour.
    pub cyclic: bool,
    /// Bill the demand charge on the raw peak net draw even when it is
    /// negative. Off by default: a negative peak is clamped to zero, since a
    /// utility never pays the customer a demand credit.
    pub literal_demand: bool,
}

impl Scenario {
    /// Builds a scenario with the horizon taken from `load`, the battery
    /// starting empty, and default billing flags.
    pub fn new(
        load: Vec<f64>,
        generation: Vec<f64>,
        tariff: Tariff,
        battery: BatterySpec,
    ) -> Self {
        let horizon = load.len();
        Self {
            load,
            generation,
            tariff,
            battery,
            initial_charge: 0.0,
            horizon,
            cyclic: false,
            literal_demand: false,
        }
    }

    pub fn with_initial_charge(mut self, initial_charge: f64) -> Self {
        self.initial_charge = initial_charge;
        self
    }

    /// Checks every structural invariant and reports all violations found.
    pub fn validate(&self) -> Result<(), InvalidScenario> {
        let mut defects = Vec::new();
        if self.horizon == 0 {
            defects.push(ScenarioDefect::ZeroHorizon);
        }
        if self.load.len() != self.horizon {
            defects.push(ScenarioDefect::LoadLength {
                expected: self.horizon,
                got: self.load.len(),
            });
        }
        if self.generation.len() != self.horizon {
            defects.push(ScenarioDefect::GenerationLength {
                expected: self.horizon,
                got: self.generation.len(),
            });
        }
        if self.tariff.energy_price.len() != self.horizon {
            defects.push(ScenarioDefect::PriceLength {
                expected: self.horizon,
                got: self.tariff.energy_price.len(),
            });
        }
        for (index, &value) in self.load.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                defects.push(ScenarioDefect::BadLoad { index, value });
            }
        }
        for (index, &value) in self.generation.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                defects.push(ScenarioDefect::BadGeneration { index, value });
            }
        }
        for (index, &value) in self.tariff.energy_price.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                defects.push(ScenarioDefect::BadPrice { index, value });
            }
        }
        if !(self.tariff.demand_rate.is_finite() && self.tariff.demand_rate >= 0.0) {
            defects.push(ScenarioDefect::BadDemandRate { value: self.tariff.demand_rate });
        }
        let b = &self.battery;
        if !(b.capacity.is_finite() && b.capacity >= 0.0) {
            defects.push(ScenarioDefect::BadCapacity { value: b.capacity });
        }
        if !(b.charge_limit.is_finite() && b.charge_limit >= 0.0) {
            defects.push(ScenarioDefect::BadChargeLimit { value: b.charge_limit });
        }
        if !(b.discharge_limit.is_finite() && b.discharge_limit >= 0.0) {
            defects.push(ScenarioDefect::BadDischargeLimit { value: b.discharge_limit });
        }
        if !(self.initial_charge.is_finite()
            && self.initial_charge >= 0.0
            && self.initial_charge <= b.capacity)
        {
            defects.push(ScenarioDefect::InitialChargeOutOfRange {
                value: self.initial_charge,
                capacity: b.capacity,
            });
        }
        if defects.is_empty() {
            Ok(())
        } else {
            Err(InvalidScenario { defects })
        }
    }
}

/// A single named violation of a [`Scenario`] invariant.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioDefect {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("load has {got} entries, expected horizon {expected}")]
    LoadLength { expected: usize, got: usize },
    #[error("generation has {got} entries, expected horizon {expected}")]
    GenerationLength { expected: usize, got: usize },
    #[error("energy price has {got} entries, expected horizon {expected}")]
    PriceLength { expected: usize, got: usize },
    #[error("load[{index}] = {value} is negative or not finite")]
    BadLoad { index: usize, value: f64 },
    #[error("generation[{index}] = {value} is negative or not finite")]
    BadGeneration { index: usize, value: f64 },
    #[error("energy_price[{index}] = {value} is negative or not finite")]
    BadPrice { index: usize, value: f64 },
    #[error("demand rate {value} is negative or not finite")]
    BadDemandRate { value: f64 },
    #[error("battery capacity {value} is negative or not finite")]
    BadCapacity { value: f64 },
    #[error("charge limit {value} is negative or not finite")]
    BadChargeLimit { value: f64 },
    #[error("discharge limit {value} is negative or not finite")]
    BadDischargeLimit { value: f64 },
    #[error("initial charge {value} outside [0, {capacity}]")]
    InitialChargeOutOfRange { value: f64, capacity: f64 },
}

/// Collection of every defect found by [`Scenario::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct InvalidScenario {
    pub defects: Vec<ScenarioDefect>,
}

impl fmt::Display for InvalidScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid scenario:")?;
        for defect in &self.defects {
            write!(f, " [{defect}]")?;
        }
        Ok(())
    }
}

impl core::error::Error for InvalidScenario {}

/// The decision vector: residual battery energy at each hour boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub(crate) residual: Vec<f64>,
}

impl Schedule {
    pub fn new(residual: Vec<f64>) -> Self {
        Self { residual }
    }

    /// A schedule holding `level` at every hour boundary.
    pub fn flat(level: f64, horizon: usize) -> Self {
        Self { residual: alloc::vec![level; horizon] }
    }

    pub fn residual(&self) -> &[f64] {
        &self.residual
    }

    pub fn len(&self) -> usize {
        self.residual.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residual.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.residual
    }
}

impl From<Vec<f64>> for Schedule {
    fn from(residual: Vec<f64>) -> Self {
        Self { residual }
    }
}

/// Itemized bill for one schedule on one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct CostBreakdown {
    /// Sum of positive hourly net draws weighted by their prices, cents.
    pub energy_charge: f64,
    /// Demand rate applied to the billed peak, cents.
    pub demand_charge: f64,
    /// `energy_charge + demand_charge`, cents.
    pub total: f64,
    /// Largest hourly net draw, kWh (may be negative on an all-export day).
    pub peak_net: f64,
    /// Hourly net grid draw, kWh; positive means energy purchased.
    pub net_series: Vec<f64>,
}
