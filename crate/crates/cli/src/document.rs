//! On-disk scenario format.
//!
//! A scenario document is a single JSON object (see `ScenarioDocument` for
//! the exact field set; unknown fields are rejected). Numbers are written
//! with shortest-round-trip formatting, so writing and re-parsing a scenario
//! reproduces it bit for bit. The `tariff` field is either the name of a
//! built-in (`"summer-low"`, …) or an inline object with the 24 prices and
//! the demand rate.

use bess_core::domain::{BatterySpec, InvalidScenario, Scenario, Tariff};
use serde::{Deserialize, Serialize};

use crate::builtins::{self, Season};
use crate::synth::{DayType, Weather};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub format_version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub season: Option<Season>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weather: Option<Weather>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub day_type: Option<DayType>,
    pub load_kwh: Vec<f64>,
    pub generation_kwh: Vec<f64>,
    pub tariff: TariffRef,
    pub battery: BatteryDoc,
    #[serde(default)]
    pub initial_charge_kwh: f64,
    #[serde(default)]
    pub cyclic: bool,
    #[serde(default)]
    pub literal_demand_formula: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TariffRef {
    Builtin(String),
    Inline(TariffDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TariffDoc {
    pub energy_price_cents: Vec<f64>,
    pub demand_rate_cents_per_kw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatteryDoc {
    pub capacity_kwh: f64,
    pub charge_limit_kw: f64,
    pub discharge_limit_kw: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("scenario document is not valid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unsupported format_version {0}; this reader understands version {FORMAT_VERSION}")]
    Version(u32),
    #[error("unknown built-in tariff '{0}'; known names: summer-low, summer-high, winter-low, winter-high")]
    UnknownTariff(String),
    #[error(transparent)]
    Invalid(#[from] InvalidScenario),
}

impl ScenarioDocument {
    pub fn parse(bytes: &[u8]) -> Result<Self, DocumentError> {
        let doc: ScenarioDocument = serde_json::from_slice(bytes)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(doc.format_version));
        }
        Ok(doc)
    }

    /// Resolves the tariff reference and validates the result.
    pub fn to_scenario(&self) -> Result<Scenario, DocumentError> {
        let tariff = match &self.tariff {
            TariffRef::Builtin(name) => builtins::tariff_by_name(name)
                .ok_or_else(|| DocumentError::UnknownTariff(name.clone()))?,
            TariffRef::Inline(doc) => {
                Tariff::new(doc.energy_price_cents.clone(), doc.demand_rate_cents_per_kw)
            }
        };
        let battery = BatterySpec::new(
            self.battery.capacity_kwh,
            self.battery.charge_limit_kw,
            self.battery.discharge_limit_kw,
        );
        let mut scenario =
            Scenario::new(self.load_kwh.clone(), self.generation_kwh.clone(), tariff, battery)
                .with_initial_charge(self.initial_charge_kwh);
        scenario.cyclic = self.cyclic;
        scenario.literal_demand = self.literal_demand_formula;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Captures a scenario with its tariff inlined.
    pub fn from_scenario(scenario: &Scenario, name: &str) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            name: name.to_owned(),
            season: None,
            weather: None,
            day_type: None,
            load_kwh: scenario.load.clone(),
            generation_kwh: scenario.generation.clone(),
            tariff: TariffRef::Inline(TariffDoc {
                energy_price_cents: scenario.tariff.energy_price.clone(),
                demand_rate_cents_per_kw: scenario.tariff.demand_rate,
            }),
            battery: BatteryDoc {
                capacity_kwh: scenario.battery.capacity,
                charge_limit_kw: scenario.battery.charge_limit,
                discharge_limit_kw: scenario.battery.discharge_limit,
            },
            initial_charge_kwh: scenario.initial_charge,
            cyclic: scenario.cyclic,
            literal_demand_formula: scenario.literal_demand,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("documents always serialize");
        text.push('\n');
        text
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(bytes: &[u8]) -> Result<Scenario, DocumentError> {
    ScenarioDocument::parse(bytes)?.to_scenario()
}

/// Writes a valid scenario as a document that parses back identically.
pub fn write_scenario(scenario: &Scenario) -> Vec<u8> {
    ScenarioDocument::from_scenario(scenario, "scenario")
        .to_json()
        .into_bytes()
}
