//! Population-based optimizers over the unit hypercube.
//!
//! Four solvers share one contract: minimize a fitness function over
//! `[0,1]^dim`, trace the best-so-far value per generation, and reproduce
//! bit-identically from a seed regardless of how many worker threads
//! evaluate fitness. All random draws happen in a fixed serial order on the
//! coordinating thread; only the (pure) fitness evaluations fan out.

mod de;
mod pso;
mod sga;

use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::distance::{evaluate, EvalConfig};
use crate::encoding::Chromosome;
use crate::instance::Instance;

pub use de::{DeParams, DeVariant, SadeParams};
pub use pso::PsoParams;
pub use sga::SgaParams;

/// Fitness functions must be callable from worker threads.
pub trait Fitness: Sync {
    fn eval(&self, genes: &[f64]) -> f64;
}

impl<F> Fitness for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn eval(&self, genes: &[f64]) -> f64 {
        self(genes)
    }
}

/// Which solver to run, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Algo {
    Sga(SgaParams),
    De(DeParams),
    Sade(SadeParams),
    Pso(PsoParams),
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::Sga(_) => "sga",
            Algo::De(_) => "de",
            Algo::Sade(_) => "sade",
            Algo::Pso(_) => "pso",
        }
    }

    /// Solver with default parameters, by name.
    pub fn from_name(name: &str) -> Option<Algo> {
        match name {
            "sga" => Some(Algo::Sga(SgaParams::default())),
            "de" => Some(Algo::De(DeParams::default())),
            "sade" => Some(Algo::Sade(SadeParams::default())),
            "pso" => Some(Algo::Pso(PsoParams::default())),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("population size {0} too small: need at least {1}")]
    PopulationTooSmall(usize, usize),
    #[error("max_generations must be at least 1")]
    NoGenerations,
    #[error("{0} must lie in [0, 1], found {1}")]
    RateOutOfRange(&'static str, f64),
    #[error("mutation factor F must lie in [0, 2], found {0}")]
    MutationFactorOutOfRange(f64),
    #[error("max velocity must lie in (0, 1], found {0}")]
    MaxVelocityOutOfRange(f64),
}

/// A complete run description. `pop_size` and `max_generations` default to
/// 50 and 500; the per-algorithm parameter records carry the tuned values.
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub algo: Algo,
    pub pop_size: usize,
    pub max_generations: usize,
    pub seed: u64,
    /// Optional wall-clock budget; checked between generations.
    pub time_limit: Option<Duration>,
}

impl OptimizerConfig {
    pub fn new(algo: Algo, seed: u64) -> Self {
        OptimizerConfig {
            algo,
            pop_size: 50,
            max_generations: 500,
            seed,
            time_limit: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_generations == 0 {
            return Err(ConfigError::NoGenerations);
        }
        let min_pop = match &self.algo {
            Algo::De(p) => (p.variant.partners() + 1).max(5),
            Algo::Sade(p) => (p.variant.partners() + 1).max(5),
            _ => 5,
        };
        if self.pop_size < min_pop {
            return Err(ConfigError::PopulationTooSmall(self.pop_size, min_pop));
        }
        match &self.algo {
            Algo::Sga(p) => p.validate(),
            Algo::De(p) => p.validate(),
            Algo::Sade(p) => p.validate(),
            Algo::Pso(p) => p.validate(),
        }
    }
}

/// One generation's trace record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenRecord {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub evaluations: usize,
}

/// Everything a run produced: per-generation records plus the final best.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub seed: u64,
    pub generations: Vec<GenRecord>,
    pub best_genes: Vec<f64>,
    pub best_fitness: f64,
    pub evaluations: usize,
    pub elapsed: Duration,
}

impl RunTrace {
    /// Canonical CSV rendering of the per-generation records. Runs with the
    /// same seed must produce identical strings regardless of thread count.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("generation,best_fitness,mean_fitness,evaluations\n");
        for rec in &self.generations {
            out.push_str(&format!(
                "{},{},{},{}\n",
                rec.generation, rec.best_fitness, rec.mean_fitness, rec.evaluations
            ));
        }
        out
    }

    pub fn mean_generation_ms(&self) -> f64 {
        if self.generations.is_empty() {
            return 0.0;
        }
        self.elapsed.as_secs_f64() * 1e3 / self.generations.len() as f64
    }
}

/// Book-keeping shared by all solvers: best-so-far tracking, per-generation
/// records and the wall clock.
pub(crate) struct Tracer {
    records: Vec<GenRecord>,
    best_genes: Vec<f64>,
    best_fitness: f64,
    evaluations: usize,
    started: Instant,
    time_limit: Option<Duration>,
}

impl Tracer {
    pub(crate) fn new(time_limit: Option<Duration>) -> Self {
        Tracer {
            records: Vec::new(),
            best_genes: Vec::new(),
            best_fitness: f64::INFINITY,
            evaluations: 0,
            started: Instant::now(),
            time_limit,
        }
    }

    /// Fold one generation into the trace. `new_evals` is the number of
    /// fitness calls the generation actually spent (an elite carried over
    /// unchanged is not re-evaluated).
    pub(crate) fn record(&mut self, generation: usize, pop: &[Vec<f64>], fits: &[f64], new_evals: usize) {
        self.evaluations += new_evals;
        let mut sum = 0.0;
        for (genes, &fit) in pop.iter().zip(fits) {
            sum += fit;
            if fit < self.best_fitness {
                self.best_fitness = fit;
                self.best_genes = genes.clone();
            }
        }
        self.records.push(GenRecord {
            generation,
            best_fitness: self.best_fitness,
            mean_fitness: sum / fits.len() as f64,
            evaluations: self.evaluations,
        });
    }

    pub(crate) fn out_of_time(&self) -> bool {
        self.time_limit
            .map(|limit| self.started.elapsed() >= limit)
            .unwrap_or(false)
    }

    pub(crate) fn finish(self, seed: u64) -> RunTrace {
        RunTrace {
            seed,
            best_fitness: self.best_fitness,
            best_genes: self.best_genes,
            evaluations: self.evaluations,
            elapsed: self.started.elapsed(),
            generations: self.records,
        }
    }
}

pub(crate) fn init_population(rng: &mut ChaCha8Rng, pop: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..pop)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

/// Evaluate a whole population; order-preserving, so results are identical
/// no matter how many rayon workers execute it.
pub(crate) fn evaluate_all<F: Fitness + ?Sized>(fitness: &F, pop: &[Vec<f64>]) -> Vec<f64> {
    pop.par_iter().map(|genes| fitness.eval(genes)).collect()
}

pub(crate) fn clamp_unit(genes: &mut [f64]) {
    for g in genes {
        *g = g.clamp(0.0, 1.0);
    }
}

/// Run one solver against an arbitrary fitness over `[0,1]^dim`.
pub fn run<F: Fitness + ?Sized>(
    fitness: &F,
    dim: usize,
    config: &OptimizerConfig,
) -> Result<RunTrace, ConfigError> {
    config.validate()?;
    Ok(match &config.algo {
        Algo::Sga(p) => sga::run_sga(fitness, dim, config, p),
        Algo::De(p) => de::run_de(fitness, dim, config, p),
        Algo::Sade(p) => de::run_sade(fitness, dim, config, p),
        Algo::Pso(p) => pso::run_pso(fitness, dim, config, p),
    })
}

/// Run a solver against a layout instance: fitness is the full decode /
/// graph / shortest-path / objective pipeline.
pub fn run_on_instance(
    instance: &Instance,
    eval_config: &EvalConfig,
    config: &OptimizerConfig,
) -> Result<RunTrace, ConfigError> {
    let dim = 3 * instance.len();
    let fitness = move |genes: &[f64]| {
        evaluate(&Chromosome::new(genes.to_vec()), instance, eval_config)
    };
    run(&fitness, dim, config)
}

/// Repeat a run with consecutive seeds `seed, seed+1, ...`, one trace each.
pub fn run_experiment(
    instance: &Instance,
    eval_config: &EvalConfig,
    config: &OptimizerConfig,
    repeats: usize,
) -> Result<Vec<RunTrace>, ConfigError> {
    assert!(repeats >= 1, "need at least one repeat");
    let mut traces = Vec::with_capacity(repeats);
    for k in 0..repeats {
        let mut run_config = config.clone();
        run_config.seed = config.seed.wrapping_add(k as u64);
        traces.push(run_on_instance(instance, eval_config, &run_config)?);
    }
    Ok(traces)
}
