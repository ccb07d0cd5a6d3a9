//! Report and plot-data files.
//!
//! The summary report is a CSV with the fixed schema
//! `algo,energy_charge,demand_charge,total,peak_net,saving_pct`; the series
//! file has one row per hour with `hour,load,gen,price,residual,net_grid`.
//! Numbers are written with shortest-round-trip formatting, so identical
//! runs produce byte-identical files.

use bess_core::cost::net_series;
use bess_core::domain::{Scenario, Schedule};
use bess_core::feasibility::Violation;
use std::fmt::Write as _;

/// One summary line per algorithm. `total_std` is populated by
/// repeated-seed studies; `saving_pct` is empty when the reference bill is
/// not positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub algo: String,
    pub energy_charge: f64,
    pub demand_charge: f64,
    pub total: f64,
    pub peak_net: f64,
    pub saving_pct: Option<f64>,
    pub total_std: Option<f64>,
}

pub fn report_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from("algo,energy_charge,demand_charge,total,peak_net,saving_pct\n");
    for row in rows {
        let saving = row.saving_pct.map(|s| s.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.algo, row.energy_charge, row.demand_charge, row.total, row.peak_net, saving
        );
    }
    out
}

/// Fixed-width comparison table for stdout. Repeated-seed rows print the
/// mean with the standard deviation in parentheses; savings appear at full
/// precision and rounded to whole percent.
pub fn table(rows: &[ReportRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:>10} {:>10} {:>16} {:>9} {:>20} {:>8}",
        "algo", "energy", "demand", "total", "peak", "saving%", "saving"
    );
    for row in rows {
        let total = match row.total_std {
            Some(std) => format!("{:.2} ({:.2})", row.total, std),
            None => format!("{:.2}", row.total),
        };
        let (saving_full, saving_round) = match row.saving_pct {
            Some(s) => (s.to_string(), format!("{}", s.round() as i64)),
            None => ("n/a".to_owned(), "n/a".to_owned()),
        };
        let _ = writeln!(
            out,
            "{:<6} {:>10.2} {:>10.2} {:>16} {:>9.3} {:>20} {:>8}",
            row.algo, row.energy_charge, row.demand_charge, total, row.peak_net, saving_full,
            saving_round
        );
    }
    out
}

/// Plot-ready hourly data for one schedule on one scenario.
pub fn series_csv(scenario: &Scenario, schedule: &Schedule) -> Result<String, Violation> {
    let nets = net_series(scenario, schedule)?;
    let mut out = String::from("hour,load,gen,price,residual,net_grid\n");
    for (hour, &net) in nets.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            hour,
            scenario.load[hour],
            scenario.generation[hour],
            scenario.tariff.energy_price[hour],
            schedule.residual()[hour],
            net
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bess_core::domain::{BatterySpec, Tariff};

    #[test]
    fn report_csv_has_the_pinned_schema() {
        let rows = vec![ReportRow {
            algo: "noess".into(),
            energy_charge: 10.0,
            demand_charge: 5.5,
            total: 15.5,
            peak_net: 0.25,
            saving_pct: Some(0.0),
            total_std: None,
        }];
        let text = report_csv(&rows);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "algo,energy_charge,demand_charge,total,peak_net,saving_pct"
        );
        assert_eq!(lines.next().unwrap(), "noess,10,5.5,15.5,0.25,0");
    }

    #[test]
    fn undefined_saving_leaves_the_column_empty() {
        let rows = vec![ReportRow {
            algo: "npb".into(),
            energy_charge: 0.0,
            demand_charge: 0.0,
            total: 0.0,
            peak_net: 0.0,
            saving_pct: None,
            total_std: None,
        }];
        assert!(report_csv(&rows).lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn repeated_seed_rows_print_mean_and_std() {
        let rows = vec![ReportRow {
            algo: "rcga".into(),
            energy_charge: 50.0,
            demand_charge: 13.87,
            total: 63.87,
            peak_net: 1.1,
            saving_pct: Some(23.68),
            total_std: Some(0.63),
        }];
        assert!(table(&rows).contains("63.87 (0.63)"));
    }

    #[test]
    fn series_csv_lists_every_hour() {
        let s = Scenario::new(
            vec![1.0, 0.5],
            vec![0.0, 0.25],
            Tariff::new(vec![5.0, 10.0], 20.0),
            BatterySpec::new(1.8, 0.6, 0.6),
        );
        let text = series_csv(&s, &Schedule::new(vec![0.5, 0.0])).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "hour,load,gen,price,residual,net_grid");
        assert_eq!(lines[1], "0,1,0,5,0.5,1.5");
        assert_eq!(lines[2], "1,0.5,0.25,10,0,-0.25");
    }

    #[test]
    fn series_csv_rejects_infeasible_schedules() {
        let s = Scenario::new(
            vec![1.0, 0.5],
            vec![0.0, 0.25],
            Tariff::new(vec![5.0, 10.0], 20.0),
            BatterySpec::new(1.8, 0.6, 0.6),
        );
        assert!(series_csv(&s, &Schedule::new(vec![1.0, 0.0])).is_err());
    }
}
