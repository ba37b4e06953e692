//! Particle swarm optimisation with a global-best topology:
//! `v <- w v + c1 r1 (pbest - s) + c2 r2 (gbest - s)`, `s <- s + v`,
//! fresh uniform draws per dimension per iteration.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::{llwnn_forward, LlwnnModel, SCALE_FLOOR};

#[derive(Debug, Clone)]
pub struct PsoConfig {
    pub n_particles: usize,
    /// Inertia weight w.
    pub inertia: f64,
    /// Cognitive acceleration c1.
    pub cognitive: f64,
    /// Social acceleration c2.
    pub social: f64,
    pub max_iterations: usize,
    /// Velocity clamp as a fraction of the per-dimension box width; initial
    /// velocities are drawn uniformly within the clamp.
    pub velocity_clamp: f64,
    pub seed: u64,
    /// Neighbourhood size carried in reported configurations; the
    /// implemented topology is global-best, so the value is recorded but not
    /// acted upon.
    pub loc_best: Option<usize>,
}

impl Default for PsoConfig {
    fn default() -> Self {
        PsoConfig {
            n_particles: 20,
            inertia: 0.7,
            cognitive: 1.5,
            social: 1.5,
            max_iterations: 500,
            velocity_clamp: 0.5,
            seed: 0,
            loc_best: None,
        }
    }
}

impl PsoConfig {
    fn validate(&self) -> Result<()> {
        if self.n_particles < 2 {
            return Err(Error::invalid("need at least 2 particles"));
        }
        if !(0.0..=1.2).contains(&self.inertia) {
            return Err(Error::invalid("inertia must lie in [0, 1.2]"));
        }
        if self.cognitive < 0.0 || self.social < 0.0 {
            return Err(Error::invalid("acceleration coefficients must be non-negative"));
        }
        if self.velocity_clamp < 0.0 {
            return Err(Error::invalid("velocity clamp must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PsoResult {
    pub best: Vec<f64>,
    pub best_value: f64,
    /// Global-best objective value after initialisation and after each
    /// iteration; non-increasing by construction.
    pub trace: Vec<f64>,
    pub evaluations: usize,
}

/// Minimise `objective` over the box `[lo, hi]`.
pub fn pso_train<F>(objective: F, lo: &[f64], hi: &[f64], config: &PsoConfig) -> Result<PsoResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pso_train_seeded(objective, lo, hi, config, &[])
}

/// As [`pso_train`], with explicit starting positions occupying the first
/// swarm slots (used to seed the search with a known-good candidate).
pub fn pso_train_seeded<F>(
    objective: F,
    lo: &[f64],
    hi: &[f64],
    config: &PsoConfig,
    seed_points: &[Vec<f64>],
) -> Result<PsoResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    config.validate()?;
    let dim = lo.len();
    if dim == 0 || hi.len() != dim {
        return Err(Error::invalid("inconsistent box bounds"));
    }
    if seed_points.len() > config.n_particles {
        return Err(Error::invalid("more seed points than particles"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let vmax: Vec<f64> = (0..dim).map(|d| config.velocity_clamp * (hi[d] - lo[d])).collect();

    let n = config.n_particles;
    let mut positions: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            if let Some(seeded) = seed_points.get(i) {
                seeded.iter().zip(lo.iter().zip(hi)).map(|(&v, (&l, &h))| v.clamp(l, h)).collect()
            } else {
                (0..dim).map(|d| rng.gen_range(lo[d]..=hi[d])).collect()
            }
        })
        .collect();
    let mut velocities: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..dim)
                .map(|d| if vmax[d] > 0.0 { rng.gen_range(-vmax[d]..=vmax[d]) } else { 0.0 })
                .collect()
        })
        .collect();

    let evaluate = |pts: &[Vec<f64>]| -> Vec<f64> {
        pts.par_iter()
            .map(|p| {
                let v = objective(p);
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    v
                }
            })
            .collect()
    };

    let mut values = evaluate(&positions);
    let mut evaluations = n;
    let mut pbest = positions.clone();
    let mut pbest_values = values.clone();
    let mut gbest_index = 0;
    for i in 1..n {
        if pbest_values[i] < pbest_values[gbest_index] {
            gbest_index = i;
        }
    }
    let mut gbest = pbest[gbest_index].clone();
    let mut gbest_value = pbest_values[gbest_index];
    let mut trace = vec![gbest_value];

    for _ in 0..config.max_iterations {
        for i in 0..n {
            for d in 0..dim {
                let r1: f64 = rng.gen();
                let r2: f64 = rng.gen();
                let mut v = config.inertia * velocities[i][d]
                    + config.cognitive * r1 * (pbest[i][d] - positions[i][d])
                    + config.social * r2 * (gbest[d] - positions[i][d]);
                if vmax[d] > 0.0 {
                    v = v.clamp(-vmax[d], vmax[d]);
                }
                velocities[i][d] = v;
                positions[i][d] = (positions[i][d] + v).clamp(lo[d], hi[d]);
            }
        }
        values = evaluate(&positions);
        evaluations += n;
        for i in 0..n {
            if values[i] < pbest_values[i] {
                pbest_values[i] = values[i];
                pbest[i] = positions[i].clone();
                if values[i] < gbest_value {
                    gbest_value = values[i];
                    gbest = positions[i].clone();
                }
            }
        }
        trace.push(gbest_value);
    }

    Ok(PsoResult { best: gbest, best_value: gbest_value, trace, evaluations })
}

// search box for the flattened LLWNN parameter vector
const WEIGHT_BOUND: f64 = 1.0;
const LOG_SCALE_LO: f64 = -3.0; // scales in [e^-3, e^2.3] ~ [0.05, 10]
const LOG_SCALE_HI: f64 = 2.3;
const TRANSLATION_LO: f64 = -0.5;
const TRANSLATION_HI: f64 = 1.5;

fn flatten(model: &LlwnnModel) -> Vec<f64> {
    let mut v = Vec::with_capacity(model.parameter_count());
    for row in &model.weights {
        v.extend_from_slice(row);
    }
    for row in &model.scales {
        v.extend(row.iter().map(|&a| a.ln()));
    }
    for row in &model.translations {
        v.extend_from_slice(row);
    }
    v
}

fn unflatten(template: &LlwnnModel, params: &[f64]) -> LlwnnModel {
    let mut model = template.clone();
    let p = model.n_inputs;
    let m = model.n_hidden;
    let mut idx = 0;
    for i in 0..m {
        for j in 0..=p {
            model.weights[i][j] = params[idx];
            idx += 1;
        }
    }
    for i in 0..m {
        for j in 0..p {
            model.scales[i][j] = params[idx].exp().max(SCALE_FLOOR * 2.0);
            idx += 1;
        }
    }
    for i in 0..m {
        for j in 0..p {
            model.translations[i][j] = params[idx];
            idx += 1;
        }
    }
    model
}

/// Mean squared one-step error of the network on the dataset.
pub fn dataset_mse(model: &LlwnnModel, dataset: &[(Vec<f64>, f64)]) -> f64 {
    let mut acc = 0.0;
    for (x, target) in dataset {
        match llwnn_forward(model, x) {
            Ok(y) => {
                let e = target - y;
                acc += e * e;
            }
            Err(_) => return f64::INFINITY,
        }
    }
    acc / dataset.len() as f64
}

/// Swarm-train every network parameter (weights, log-scales, translations)
/// against the dataset MSE; the template model occupies the first particle,
/// so the result can never be worse than the template.
pub fn pso_train_llwnn(
    template: &LlwnnModel,
    dataset: &[(Vec<f64>, f64)],
    config: &PsoConfig,
) -> Result<(LlwnnModel, PsoResult)> {
    if dataset.is_empty() {
        return Err(Error::invalid("dataset must be non-empty"));
    }
    let p = template.n_inputs;
    let m = template.n_hidden;
    let dim = template.parameter_count();
    let mut lo = Vec::with_capacity(dim);
    let mut hi = Vec::with_capacity(dim);
    for _ in 0..m * (p + 1) {
        lo.push(-WEIGHT_BOUND);
        hi.push(WEIGHT_BOUND);
    }
    for _ in 0..m * p {
        lo.push(LOG_SCALE_LO);
        hi.push(LOG_SCALE_HI);
    }
    for _ in 0..m * p {
        lo.push(TRANSLATION_LO);
        hi.push(TRANSLATION_HI);
    }

    let objective = |params: &[f64]| dataset_mse(&unflatten(template, params), dataset);
    let seeded = [flatten(template)];
    let result = pso_train_seeded(objective, &lo, &hi, config, &seeded)?;
    let model = unflatten(template, &result.best);
    Ok((model, result))
}
