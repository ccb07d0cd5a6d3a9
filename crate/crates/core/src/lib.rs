//! Hourly charge/discharge scheduling for a battery energy-storage system
//! under time-of-use pricing with a demand charge.
//!
//! A day is modelled as `T` one-hour intervals. The decision variable is the
//! residual battery energy at the end of each interval; the bill to minimize
//! is the indicator-gated energy charge (exports earn nothing) plus a demand
//! charge on the peak net draw from the grid.
//!
//! The crate provides:
//!
//! - [`domain`] — scenario and solution types shared by every solver.
//! - [`cost`] — the objective function and the savings metric.
//! - [`feasibility`] — per-gene feasible intervals and the cascade repair
//!   that keeps schedules inside the battery's operating envelope.
//! - [`rcga`] — a real-coded genetic algorithm with feasibility-constrained
//!   BLX-α crossover and Gaussian mutation.
//! - [`baselines`] — the net-power-based heuristic and the no-battery
//!   reference cost.
//! - [`dp`] — an exact dynamic-programming solver over a discretized battery
//!   state grid, used as ground truth for solution quality.
//!
//! The crate is `no_std`-compatible (with `alloc`). The default `std` feature
//! enables standard-library error integration; the optional `parallel`
//! feature lets the genetic algorithm fan fitness evaluation out to worker
//! threads without changing results.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod baselines;
pub mod cost;
pub mod domain;
pub mod dp;
pub mod feasibility;
pub mod rcga;

pub use domain::{BatterySpec, CostBreakdown, Scenario, Schedule, Tariff};
