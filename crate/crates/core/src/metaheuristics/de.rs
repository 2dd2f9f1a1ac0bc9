//! Differential evolution, fixed-parameter and self-adaptive.
//!
//! Strategy variants follow the conventional ten-entry numbering used by the
//! established optimization libraries:
//!
//! | # | strategy           | # | strategy           |
//! |---|--------------------|---|--------------------|
//! | 1 | best/1/exp         | 6 | best/1/bin         |
//! | 2 | rand/1/exp         | 7 | rand/1/bin         |
//! | 3 | rand-to-best/1/exp | 8 | rand-to-best/1/bin |
//! | 4 | best/2/exp         | 9 | best/2/bin         |
//! | 5 | rand/2/exp         | 10| rand/2/bin         |
//!
//! The fixed-parameter solver defaults to variant 9 with `F = 0.11`,
//! `CR = 0.86`; the self-adaptive solver defaults to variant 1 and draws
//! per-individual `F ~ N(μF, 0.1)` and `CR ~ N(μCR, 0.1)`, with the means
//! re-estimated from the successful trials of the last `L` generations.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{clamp_unit, evaluate_all, init_population, ConfigError, Fitness, OptimizerConfig, Tracer};

/// Base vector choice for the differential mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Base {
    Best,
    Rand,
    RandToBest,
}

/// Crossover scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Crossover {
    Exponential,
    Binomial,
}

/// One of the ten conventional DE strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeVariant {
    base: Base,
    difference_pairs: usize,
    crossover: Crossover,
}

impl DeVariant {
    /// Look up a strategy by its conventional number (1..=10).
    pub fn from_number(number: usize) -> Option<DeVariant> {
        let (base, pairs, crossover) = match number {
            1 => (Base::Best, 1, Crossover::Exponential),
            2 => (Base::Rand, 1, Crossover::Exponential),
            3 => (Base::RandToBest, 1, Crossover::Exponential),
            4 => (Base::Best, 2, Crossover::Exponential),
            5 => (Base::Rand, 2, Crossover::Exponential),
            6 => (Base::Best, 1, Crossover::Binomial),
            7 => (Base::Rand, 1, Crossover::Binomial),
            8 => (Base::RandToBest, 1, Crossover::Binomial),
            9 => (Base::Best, 2, Crossover::Binomial),
            10 => (Base::Rand, 2, Crossover::Binomial),
            _ => return None,
        };
        Some(DeVariant {
            base,
            difference_pairs: pairs,
            crossover,
        })
    }

    /// Distinct partners (excluding the target) the mutation draws.
    pub fn partners(&self) -> usize {
        let base_draws = match self.base {
            Base::Rand => 1,
            Base::Best | Base::RandToBest => 0,
        };
        base_draws + 2 * self.difference_pairs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeParams {
    pub mutation_factor: f64,
    pub crossover_rate: f64,
    pub variant: DeVariant,
}

impl Default for DeParams {
    fn default() -> Self {
        DeParams {
            mutation_factor: 0.11,
            crossover_rate: 0.86,
            variant: DeVariant::from_number(9).unwrap(),
        }
    }
}

impl DeParams {
    pub(super) fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=2.0).contains(&self.mutation_factor) {
            return Err(ConfigError::MutationFactorOutOfRange(self.mutation_factor));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(ConfigError::RateOutOfRange("crossover_rate", self.crossover_rate));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SadeParams {
    pub variant: DeVariant,
    /// Success memory length in generations.
    pub learning_period: usize,
    pub init_mu_f: f64,
    pub init_mu_cr: f64,
    /// Standard deviation of the per-individual F and CR draws.
    pub sigma: f64,
}

impl Default for SadeParams {
    fn default() -> Self {
        SadeParams {
            variant: DeVariant::from_number(1).unwrap(),
            learning_period: 20,
            init_mu_f: 0.5,
            init_mu_cr: 0.5,
            sigma: 0.1,
        }
    }
}

impl SadeParams {
    pub(super) fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=2.0).contains(&self.init_mu_f) {
            return Err(ConfigError::MutationFactorOutOfRange(self.init_mu_f));
        }
        if !(0.0..=1.0).contains(&self.init_mu_cr) {
            return Err(ConfigError::RateOutOfRange("init_mu_cr", self.init_mu_cr));
        }
        if self.learning_period == 0 {
            return Err(ConfigError::NoGenerations);
        }
        Ok(())
    }
}

/// Draw `count` distinct indices from `0..pop`, all different from `target`.
fn distinct_partners(rng: &mut ChaCha8Rng, pop: usize, target: usize, count: usize) -> Vec<usize> {
    let mut picked = Vec::with_capacity(count);
    while picked.len() < count {
        let idx = rng.gen_range(0..pop);
        if idx != target && !picked.contains(&idx) {
            picked.push(idx);
        }
    }
    picked
}

fn mutant(
    rng: &mut ChaCha8Rng,
    pop: &[Vec<f64>],
    target: usize,
    best: usize,
    f: f64,
    variant: &DeVariant,
) -> Vec<f64> {
    let dim = pop[0].len();
    let partners = distinct_partners(rng, pop.len(), target, variant.partners());
    let (base_vec, diffs): (&[f64], &[usize]) = match variant.base {
        Base::Best => (&pop[best], &partners[..]),
        Base::Rand => (&pop[partners[0]], &partners[1..]),
        Base::RandToBest => (&pop[target], &partners[..]),
    };

    let mut v = vec![0.0; dim];
    for j in 0..dim {
        let mut value = base_vec[j];
        if variant.base == Base::RandToBest {
            value += f * (pop[best][j] - pop[target][j]);
        }
        for pair in diffs.chunks_exact(2) {
            value += f * (pop[pair[0]][j] - pop[pair[1]][j]);
        }
        v[j] = value;
    }
    v
}

fn crossover(
    rng: &mut ChaCha8Rng,
    target: &[f64],
    mutant: Vec<f64>,
    cr: f64,
    scheme: Crossover,
) -> Vec<f64> {
    let dim = target.len();
    match scheme {
        Crossover::Binomial => {
            let j_rand = rng.gen_range(0..dim);
            (0..dim)
                .map(|j| {
                    if j == j_rand || rng.gen::<f64>() <= cr {
                        mutant[j]
                    } else {
                        target[j]
                    }
                })
                .collect()
        }
        Crossover::Exponential => {
            let start = rng.gen_range(0..dim);
            let mut len = 1;
            while len < dim && rng.gen::<f64>() <= cr {
                len += 1;
            }
            let mut trial = target.to_vec();
            for k in 0..len {
                let j = (start + k) % dim;
                trial[j] = mutant[j];
            }
            trial
        }
    }
}

fn best_index(fits: &[f64]) -> usize {
    fits.iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap()
}

/// One DE generation: build all trials serially (fixed RNG order), evaluate
/// in parallel, then apply greedy `f(u) <= f(x)` selection. Returns the
/// parameters of strictly improving trials for the self-adaptive variant.
fn de_generation<F: Fitness + ?Sized>(
    fitness: &F,
    rng: &mut ChaCha8Rng,
    pop: &mut [Vec<f64>],
    fits: &mut [f64],
    per_individual: &[(f64, f64)],
    variant: &DeVariant,
) -> (Vec<f64>, Vec<f64>) {
    let best = best_index(fits);
    let trials: Vec<Vec<f64>> = (0..pop.len())
        .map(|i| {
            let (f, cr) = per_individual[i];
            let v = mutant(rng, pop, i, best, f, variant);
            let mut trial = crossover(rng, &pop[i], v, cr, variant.crossover);
            clamp_unit(&mut trial);
            trial
        })
        .collect();

    let trial_fits = evaluate_all(fitness, &trials);

    let mut success_f = Vec::new();
    let mut success_cr = Vec::new();
    for (i, (trial, trial_fit)) in trials.into_iter().zip(trial_fits).enumerate() {
        if trial_fit <= fits[i] {
            if trial_fit < fits[i] {
                success_f.push(per_individual[i].0);
                success_cr.push(per_individual[i].1);
            }
            pop[i] = trial;
            fits[i] = trial_fit;
        }
    }
    (success_f, success_cr)
}

pub(super) fn run_de<F: Fitness + ?Sized>(
    fitness: &F,
    dim: usize,
    config: &OptimizerConfig,
    params: &DeParams,
) -> super::RunTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracer = Tracer::new(config.time_limit);

    let mut pop = init_population(&mut rng, config.pop_size, dim);
    let mut fits = evaluate_all(fitness, &pop);
    tracer.record(0, &pop, &fits, fits.len());

    let fixed = vec![(params.mutation_factor, params.crossover_rate); config.pop_size];
    for generation in 1..=config.max_generations {
        if tracer.out_of_time() {
            break;
        }
        de_generation(fitness, &mut rng, &mut pop, &mut fits, &fixed, &params.variant);
        tracer.record(generation, &pop, &fits, fits.len());
    }

    tracer.finish(config.seed)
}

pub(super) fn run_sade<F: Fitness + ?Sized>(
    fitness: &F,
    dim: usize,
    config: &OptimizerConfig,
    params: &SadeParams,
) -> super::RunTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracer = Tracer::new(config.time_limit);

    let mut pop = init_population(&mut rng, config.pop_size, dim);
    let mut fits = evaluate_all(fitness, &pop);
    tracer.record(0, &pop, &fits, fits.len());

    let mut mu_f = params.init_mu_f;
    let mut mu_cr = params.init_mu_cr;
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>)> = VecDeque::new();

    for generation in 1..=config.max_generations {
        if tracer.out_of_time() {
            break;
        }

        let per_individual: Vec<(f64, f64)> = (0..config.pop_size)
            .map(|_| {
                let f = Normal::new(mu_f, params.sigma)
                    .unwrap()
                    .sample(&mut rng)
                    .clamp(0.0, 2.0);
                let cr = Normal::new(mu_cr, params.sigma)
                    .unwrap()
                    .sample(&mut rng)
                    .clamp(0.0, 1.0);
                (f, cr)
            })
            .collect();

        let successes = de_generation(
            fitness,
            &mut rng,
            &mut pop,
            &mut fits,
            &per_individual,
            &params.variant,
        );

        memory.push_back(successes);
        if memory.len() > params.learning_period {
            memory.pop_front();
        }
        let all_f: Vec<f64> = memory.iter().flat_map(|(f, _)| f.iter().copied()).collect();
        let all_cr: Vec<f64> = memory.iter().flat_map(|(_, cr)| cr.iter().copied()).collect();
        if !all_f.is_empty() {
            mu_f = all_f.iter().sum::<f64>() / all_f.len() as f64;
            mu_cr = all_cr.iter().sum::<f64>() / all_cr.len() as f64;
        }

        tracer.record(generation, &pop, &fits, fits.len());
    }

    tracer.finish(config.seed)
}

#[cfg(test)]
mod tests {
    use super::super::test_support::sphere;
    use super::super::{Algo, OptimizerConfig};
    use super::*;

    #[test]
    fn variant_table_matches_partner_counts() {
        assert_eq!(DeVariant::from_number(9).unwrap().partners(), 4); // best/2
        assert_eq!(DeVariant::from_number(7).unwrap().partners(), 3); // rand/1
        assert_eq!(DeVariant::from_number(10).unwrap().partners(), 5); // rand/2
        assert_eq!(DeVariant::from_number(1).unwrap().partners(), 2); // best/1
        assert!(DeVariant::from_number(11).is_none());
        assert!(DeVariant::from_number(0).is_none());
    }

    #[test]
    fn zero_f_mutant_equals_base() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pop: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64 * 0.1; 4]).collect();
        let fits: Vec<f64> = pop.iter().map(|g| sphere(g)).collect();
        let best = best_index(&fits);
        let variant = DeVariant::from_number(9).unwrap();
        let v = mutant(&mut rng, &pop, 3, best, 0.0, &variant);
        assert_eq!(v, pop[best]);
    }

    #[test]
    fn full_crossover_copies_the_mutant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let target = vec![0.0; 6];
        let m = vec![0.5; 6];
        let trial = crossover(&mut rng, &target, m.clone(), 1.0, Crossover::Binomial);
        assert_eq!(trial, m);
    }

    #[test]
    fn exponential_crossover_copies_a_contiguous_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let target = vec![0.0; 8];
        let m = vec![1.0; 8];
        let trial = crossover(&mut rng, &target, m, 0.5, Crossover::Exponential);
        let copied: usize = trial.iter().filter(|&&g| g == 1.0).count();
        assert!(copied >= 1);
        // The copied positions must be contiguous modulo the length.
        let gaps = (0..8)
            .filter(|&j| trial[j] == 1.0 && trial[(j + 1) % 8] == 0.0)
            .count();
        assert!(gaps <= 1);
    }

    #[test]
    fn population_best_never_worsens() {
        let params = DeParams::default();
        let config = OptimizerConfig {
            algo: Algo::De(params.clone()),
            pop_size: 12,
            max_generations: 40,
            seed: 5,
            time_limit: None,
        };
        let trace = run_de(&sphere, 5, &config, &params);
        for w in trace.generations.windows(2) {
            assert!(w[1].best_fitness <= w[0].best_fitness);
        }
    }

    #[test]
    fn sade_means_stay_put_without_successes() {
        // A constant fitness never improves strictly, so the success memory
        // stays empty and the adapted means remain at initialization. The
        // run must still complete and trace cleanly.
        let flat = |_: &[f64]| 1.0;
        let params = SadeParams::default();
        let config = OptimizerConfig {
            algo: Algo::Sade(params.clone()),
            pop_size: 8,
            max_generations: 25,
            seed: 6,
            time_limit: None,
        };
        let trace = run_sade(&flat, 4, &config, &params);
        assert_eq!(trace.best_fitness, 1.0);
        for rec in &trace.generations {
            assert_eq!(rec.best_fitness, 1.0);
        }
    }
}
