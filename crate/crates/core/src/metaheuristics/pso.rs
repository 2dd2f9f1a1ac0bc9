//! Particle swarm optimization with an lbest ring topology.
//!
//! Each particle is pulled toward its own best position and toward the best
//! personal best within its ring neighbourhood (`radius` particles on each
//! side). Velocities are clamped per dimension to `max_velocity` (a fraction
//! of the unit box), positions to `[0, 1]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate_all, init_population, ConfigError, Fitness, OptimizerConfig, Tracer};

#[derive(Debug, Clone, PartialEq)]
pub struct PsoParams {
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub max_velocity: f64,
    /// Ring neighbourhood radius (particles on each side).
    pub neighborhood_radius: usize,
}

impl Default for PsoParams {
    fn default() -> Self {
        PsoParams {
            inertia: 0.51,
            cognitive: 2.42,
            social: 2.37,
            max_velocity: 0.31,
            neighborhood_radius: 4,
        }
    }
}

impl PsoParams {
    pub(super) fn validate(&self) -> Result<(), ConfigError> {
        if !(self.max_velocity > 0.0 && self.max_velocity <= 1.0) {
            return Err(ConfigError::MaxVelocityOutOfRange(self.max_velocity));
        }
        Ok(())
    }
}

/// Index of the best personal best within the ring around `i`.
fn ring_best(pbest_fits: &[f64], i: usize, radius: usize) -> usize {
    let pop = pbest_fits.len();
    let mut best = i;
    for offset in 1..=radius.min(pop / 2) {
        for neighbor in [(i + offset) % pop, (i + pop - offset) % pop] {
            if pbest_fits[neighbor] < pbest_fits[best] {
                best = neighbor;
            }
        }
    }
    best
}

/// One velocity/position update, exposed for the unit tests.
fn update_particle(
    rng: &mut ChaCha8Rng,
    position: &mut [f64],
    velocity: &mut [f64],
    personal: &[f64],
    neighborhood: &[f64],
    params: &PsoParams,
) {
    for j in 0..position.len() {
        let r1 = rng.gen::<f64>();
        let r2 = rng.gen::<f64>();
        let v = params.inertia * velocity[j]
            + params.cognitive * r1 * (personal[j] - position[j])
            + params.social * r2 * (neighborhood[j] - position[j]);
        velocity[j] = v.clamp(-params.max_velocity, params.max_velocity);
        position[j] = (position[j] + velocity[j]).clamp(0.0, 1.0);
    }
}

pub(super) fn run_pso<F: Fitness + ?Sized>(
    fitness: &F,
    dim: usize,
    config: &OptimizerConfig,
    params: &PsoParams,
) -> super::RunTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracer = Tracer::new(config.time_limit);

    let mut positions = init_population(&mut rng, config.pop_size, dim);
    let mut velocities = vec![vec![0.0; dim]; config.pop_size];
    let mut fits = evaluate_all(fitness, &positions);
    tracer.record(0, &positions, &fits, fits.len());

    let mut pbest = positions.clone();
    let mut pbest_fits = fits.clone();

    for generation in 1..=config.max_generations {
        if tracer.out_of_time() {
            break;
        }

        for i in 0..config.pop_size {
            let leader = ring_best(&pbest_fits, i, params.neighborhood_radius);
            let neighborhood = pbest[leader].clone();
            let personal = pbest[i].clone();
            update_particle(
                &mut rng,
                &mut positions[i],
                &mut velocities[i],
                &personal,
                &neighborhood,
                params,
            );
        }

        fits = evaluate_all(fitness, &positions);
        for i in 0..config.pop_size {
            if fits[i] < pbest_fits[i] {
                pbest_fits[i] = fits[i];
                pbest[i] = positions[i].clone();
            }
        }
        tracer.record(generation, &positions, &fits, fits.len());
    }

    tracer.finish(config.seed)
}
