//! Real-coded genetic algorithm over battery schedules.
//!
//! Each individual is an array of `T` residual-energy genes. Gene `i` only
//! makes sense relative to its left neighbour, so every operator walks the
//! genome left to right and samples inside the feasible interval of
//! [`crate::feasibility::gene_bounds_at`]; the population never contains an
//! infeasible schedule.
//!
//! One generation draws a random perfect matching of the `N` individuals,
//! produces one offspring per pair (BLX-α crossover followed by Gaussian
//! mutation with cascade repair), evaluates the offspring, and keeps the
//! best `N` of parents and offspring together. Ties rank parents first, so
//! runs are fully reproducible from the seed alone.
//!
//! All randomness flows through a single [`ChaCha8Rng`] owned by the run.
//! With the `parallel` feature, offspring evaluation may fan out to worker
//! threads; results are gathered in index order, so the trajectory is
//! bit-identical with parallelism on or off.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::cost::evaluate;
use crate::domain::{InvalidScenario, Scenario, Schedule};
use crate::feasibility::{gene_bounds_at, is_feasible, GeneBounds};

/// Search parameters. The defaults are population 100, 2000 generations,
/// α = 0.5, and a mutation rate of `0.1 / T` resolved at run time.
#[derive(Debug, Clone, PartialEq)]
pub struct RcgaConfig {
    /// Population size `N`; must be even so `N/2` pairs can be formed.
    pub population: usize,
    pub generations: usize,
    /// BLX blend width factor.
    pub alpha: f64,
    /// Per-gene mutation probability; `None` means `0.1 / horizon`.
    pub mutation_rate: Option<f64>,
    pub seed: u64,
    /// Evaluate offspring on worker threads (needs the `parallel` feature;
    /// silently sequential without it). Never changes results.
    pub parallel_fitness: bool,
}

impl Default for RcgaConfig {
    fn default() -> Self {
        Self {
            population: 100,
            generations: 2000,
            alpha: 0.5,
            mutation_rate: None,
            seed: 0,
            parallel_fitness: false,
        }
    }
}

impl RcgaConfig {
    pub fn mutation_rate_for(&self, horizon: usize) -> f64 {
        self.mutation_rate.unwrap_or(0.1 / horizon as f64)
    }

    pub fn validate(&self) -> Result<(), InvalidConfig> {
        if self.population < 2 || !self.population.is_multiple_of(2) {
            return Err(InvalidConfig::Population(self.population));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(InvalidConfig::Alpha(self.alpha));
        }
        if let Some(pm) = self.mutation_rate {
            if !(0.0..=1.0).contains(&pm) {
                return Err(InvalidConfig::MutationRate(pm));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum InvalidConfig {
    #[error("population {0} must be even and at least 2")]
    Population(usize),
    #[error("alpha {0} must be finite and nonnegative")]
    Alpha(f64),
    #[error("mutation rate {0} must lie in [0, 1]")]
    MutationRate(f64),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RcgaError {
    #[error(transparent)]
    Scenario(#[from] InvalidScenario),
    #[error(transparent)]
    Config(#[from] InvalidConfig),
}

/// A feasible schedule with its cached bill total.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    schedule: Schedule,
    total_cost: f64,
}

impl Individual {
    /// Evaluates and wraps a schedule produced by one of the operators.
    /// Panics if the schedule is infeasible, which would mean an operator
    /// broke its closure contract.
    pub fn from_schedule(schedule: Schedule, scenario: &Scenario) -> Self {
        debug_assert!(is_feasible(&schedule, scenario), "operator produced {schedule:?}");
        let total_cost = evaluate(scenario, &schedule)
            .expect("every operator ends with a feasible schedule")
            .total;
        Self { schedule, total_cost }
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    pub fn into_schedule(self) -> Schedule {
        self.schedule
    }
}

fn sample_uniform<R: Rng>(bounds: GeneBounds, rng: &mut R) -> f64 {
    if bounds.width() <= 0.0 {
        bounds.lower
    } else {
        rng.random_range(bounds.lower..=bounds.upper)
    }
}

fn random_schedule<R: Rng>(scenario: &Scenario, rng: &mut R) -> Schedule {
    let mut residual = Vec::with_capacity(scenario.horizon);
    let mut prev = scenario.initial_charge;
    for i in 0..scenario.horizon {
        let gene = sample_uniform(gene_bounds_at(prev, i, scenario), rng);
        residual.push(gene);
        prev = gene;
    }
    Schedule::new(residual)
}

fn crossover_schedule<R: Rng>(
    a: &Schedule,
    b: &Schedule,
    scenario: &Scenario,
    alpha: f64,
    rng: &mut R,
) -> Schedule {
    let mut residual = Vec::with_capacity(scenario.horizon);
    let mut prev = scenario.initial_charge;
    for i in 0..scenario.horizon {
        let feasible = gene_bounds_at(prev, i, scenario);
        let (lo_gene, hi_gene) = {
            let (x, y) = (a.residual()[i], b.residual()[i]);
            if x <= y { (x, y) } else { (y, x) }
        };
        let width = hi_gene - lo_gene;
        let blended = GeneBounds {
            lower: feasible.lower.max(lo_gene - alpha * width),
            upper: feasible.upper.min(hi_gene + alpha * width),
        };
        // The blend interval can miss the feasible one entirely when the
        // offspring's neighbour drifted away from both parents; fall back to
        // the plain feasible interval so closure is never lost.
        let gene = if blended.lower > blended.upper {
            sample_uniform(feasible, rng)
        } else {
            sample_uniform(blended, rng)
        };
        residual.push(gene);
        prev = gene;
    }
    Schedule::new(residual)
}

fn mutate_schedule<R: Rng>(
    x: &Schedule,
    scenario: &Scenario,
    mutation_rate: f64,
    rng: &mut R,
) -> Schedule {
    let mut residual = Vec::with_capacity(scenario.horizon);
    let mut prev = scenario.initial_charge;
    for i in 0..scenario.horizon {
        let bounds = gene_bounds_at(prev, i, scenario);
        let mut gene = x.residual()[i];
        if rng.random::<f64>() < mutation_rate {
            // The noise scale is the width of the feasible interval.
            let sigma = bounds.width();
            if sigma > 0.0 {
                gene += Normal::new(0.0, sigma)
                    .expect("interval width is finite and nonnegative")
                    .sample(rng);
            }
        }
        // Clamping unconditionally doubles as the cascade repair: genes whose
        // neighbour moved are pulled back into their shifted interval.
        let gene = bounds.clamp(gene);
        residual.push(gene);
        prev = gene;
    }
    Schedule::new(residual)
}

fn evaluate_batch(
    schedules: Vec<Schedule>,
    scenario: &Scenario,
    parallel: bool,
) -> Vec<Individual> {
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return schedules
            .into_par_iter()
            .map(|x| Individual::from_schedule(x, scenario))
            .collect();
    }
    let _ = parallel;
    schedules
        .into_iter()
        .map(|x| Individual::from_schedule(x, scenario))
        .collect()
}

fn rank(pop: &mut [Individual]) {
    pop.sort_by(|a, b| {
        a.total_cost
            .partial_cmp(&b.total_cost)
            .expect("bill totals are finite")
    });
}

/// Draws `N` schedules gene by gene, uniformly inside each gene's feasible
/// interval, and evaluates them.
pub fn initialize_population<R: Rng>(
    scenario: &Scenario,
    config: &RcgaConfig,
    rng: &mut R,
) -> Vec<Individual> {
    let schedules: Vec<Schedule> = (0..config.population)
        .map(|_| random_schedule(scenario, rng))
        .collect();
    evaluate_batch(schedules, scenario, config.parallel_fitness)
}

/// One offspring by feasibility-constrained BLX-α: gene `i` is drawn
/// uniformly from the blend interval of the parents' genes intersected with
/// the feasible interval of the offspring's own left neighbour.
pub fn blx_crossover<R: Rng>(
    parent_a: &Individual,
    parent_b: &Individual,
    scenario: &Scenario,
    alpha: f64,
    rng: &mut R,
) -> Individual {
    let child = crossover_schedule(&parent_a.schedule, &parent_b.schedule, scenario, alpha, rng);
    Individual::from_schedule(child, scenario)
}

/// Adds zero-mean Gaussian noise to each gene with probability
/// `mutation_rate`, then clamps left to right so the result stays feasible.
pub fn gaussian_mutate<R: Rng>(
    individual: &Individual,
    scenario: &Scenario,
    mutation_rate: f64,
    rng: &mut R,
) -> Individual {
    let mutated = mutate_schedule(&individual.schedule, scenario, mutation_rate, rng);
    Individual::from_schedule(mutated, scenario)
}

/// Advances the population by one generation: random perfect matching,
/// one offspring per pair (crossover then mutation), then ranked survivor
/// selection keeping the best `N` of parents and offspring. The population
/// is left sorted by ascending cost.
pub fn step_generation<R: Rng>(
    pop: &mut Vec<Individual>,
    scenario: &Scenario,
    config: &RcgaConfig,
    rng: &mut R,
) {
    let n = pop.len();
    debug_assert!(n >= 2 && n.is_multiple_of(2), "population of {n} cannot be paired");
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mutation_rate = config.mutation_rate_for(scenario.horizon);
    let mut offspring = Vec::with_capacity(n / 2);
    for pair in order.chunks_exact(2) {
        let child = crossover_schedule(
            &pop[pair[0]].schedule,
            &pop[pair[1]].schedule,
            scenario,
            config.alpha,
            rng,
        );
        offspring.push(mutate_schedule(&child, scenario, mutation_rate, rng));
    }

    pop.extend(evaluate_batch(offspring, scenario, config.parallel_fitness));
    // Stable sort: on equal cost, parents (inserted first) outrank offspring.
    rank(pop);
    pop.truncate(n);
}

/// Outcome of a full run: the best individual found and the best cost after
/// the initial population and after each generation (`generations + 1`
/// entries, monotone non-increasing).
#[derive(Debug, Clone, PartialEq)]
pub struct RcgaRun {
    pub best: Individual,
    pub trace: Vec<f64>,
}

/// Runs the full algorithm. Reproducible: the same scenario, config, and
/// seed give a bit-identical best schedule and trace.
pub fn run(scenario: &Scenario, config: &RcgaConfig) -> Result<RcgaRun, RcgaError> {
    scenario.validate()?;
    config.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut pop = initialize_population(scenario, config, &mut rng);
    rank(&mut pop);

    let mut trace = Vec::with_capacity(config.generations + 1);
    trace.push(pop[0].total_cost);
    for _ in 0..config.generations {
        step_generation(&mut pop, scenario, config, &mut rng);
        trace.push(pop[0].total_cost);
    }

    Ok(RcgaRun { best: pop.swap_remove(0), trace })
}
