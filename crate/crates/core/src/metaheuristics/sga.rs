//! Simple genetic algorithm: tournament selection, uniform-mask crossover,
//! uniform-reset mutation, generational replacement with one elite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{clamp_unit, evaluate_all, init_population, ConfigError, Fitness, OptimizerConfig, Tracer};

#[derive(Debug, Clone, PartialEq)]
pub struct SgaParams {
    /// Probability of crossing two parents instead of cloning the first.
    pub crossover_rate: f64,
    /// Per-gene reset probability; `None` means `1/dim`.
    pub mutation_rate: Option<f64>,
    pub tournament_size: usize,
}

impl Default for SgaParams {
    fn default() -> Self {
        SgaParams {
            crossover_rate: 0.9,
            mutation_rate: None,
            tournament_size: 2,
        }
    }
}

impl SgaParams {
    pub(super) fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(ConfigError::RateOutOfRange("crossover_rate", self.crossover_rate));
        }
        if let Some(pm) = self.mutation_rate {
            if !(0.0..=1.0).contains(&pm) {
                return Err(ConfigError::RateOutOfRange("mutation_rate", pm));
            }
        }
        if self.tournament_size == 0 {
            return Err(ConfigError::PopulationTooSmall(0, 1));
        }
        Ok(())
    }
}

fn tournament(rng: &mut ChaCha8Rng, fits: &[f64], size: usize) -> usize {
    let mut best = rng.gen_range(0..fits.len());
    for _ in 1..size {
        let challenger = rng.gen_range(0..fits.len());
        if fits[challenger] < fits[best] {
            best = challenger;
        }
    }
    best
}

pub(super) fn run_sga<F: Fitness + ?Sized>(
    fitness: &F,
    dim: usize,
    config: &OptimizerConfig,
    params: &SgaParams,
) -> super::RunTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let pm = params.mutation_rate.unwrap_or(1.0 / dim.max(1) as f64);
    let mut tracer = Tracer::new(config.time_limit);

    let mut pop = init_population(&mut rng, config.pop_size, dim);
    let mut fits = evaluate_all(fitness, &pop);
    tracer.record(0, &pop, &fits, fits.len());

    for generation in 1..=config.max_generations {
        if tracer.out_of_time() {
            break;
        }

        let elite_idx = fits
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let elite = pop[elite_idx].clone();
        let elite_fit = fits[elite_idx];

        let mut children: Vec<Vec<f64>> = Vec::with_capacity(config.pop_size - 1);
        for _ in 0..config.pop_size - 1 {
            let a = tournament(&mut rng, &fits, params.tournament_size);
            let b = tournament(&mut rng, &fits, params.tournament_size);
            let mut child: Vec<f64> = if rng.gen::<f64>() < params.crossover_rate {
                (0..dim)
                    .map(|j| if rng.gen::<f64>() < 0.5 { pop[a][j] } else { pop[b][j] })
                    .collect()
            } else {
                pop[a].clone()
            };
            for gene in child.iter_mut() {
                if rng.gen::<f64>() < pm {
                    *gene = rng.gen::<f64>();
                }
            }
            clamp_unit(&mut child);
            children.push(child);
        }

        let child_fits = evaluate_all(fitness, &children);
        let new_evals = child_fits.len();

        pop = std::iter::once(elite).chain(children).collect();
        fits = std::iter::once(elite_fit).chain(child_fits).collect();
        tracer.record(generation, &pop, &fits, new_evals);
    }

    tracer.finish(config.seed)
}

#[cfg(test)]
mod tests {
    use super::super::test_support::sphere;
    use super::super::{Algo, OptimizerConfig};
    use super::*;

    #[test]
    fn no_variation_keeps_best_constant() {
        let params = SgaParams {
            crossover_rate: 0.0,
            mutation_rate: Some(0.0),
            tournament_size: 2,
        };
        let config = OptimizerConfig {
            algo: Algo::Sga(params.clone()),
            pop_size: 10,
            max_generations: 20,
            seed: 4,
            time_limit: None,
        };
        let trace = run_sga(&sphere, 5, &config, &params);
        let first = trace.generations[0].best_fitness;
        for rec in &trace.generations {
            assert_eq!(rec.best_fitness, first);
        }
    }

    #[test]
    fn elitism_preserves_the_incumbent() {
        let params = SgaParams::default();
        let config = OptimizerConfig {
            algo: Algo::Sga(params.clone()),
            pop_size: 8,
            max_generations: 30,
            seed: 9,
            time_limit: None,
        };
        let trace = run_sga(&sphere, 4, &config, &params);
        for w in trace.generations.windows(2) {
            assert!(w[1].best_fitness <= w[0].best_fitness);
        }
    }
}
