//! Derivative-free minimisers used by the estimation routines: a bounded
//! Nelder-Mead simplex with seeded multi-start, and golden-section search
//! for one-dimensional problems.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::rng::derive_seed;

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Convergence tolerance on the spread of simplex objective values.
    pub f_tol: f64,
    /// Convergence tolerance on the simplex diameter, relative to the box.
    pub x_tol: f64,
    /// Number of starts: the supplied point plus jittered copies.
    pub restarts: usize,
    /// Jitter amplitude as a fraction of the per-dimension box width.
    pub jitter: f64,
    pub seed: u64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iterations: 500,
            f_tol: 1e-6,
            x_tol: 1e-6,
            restarts: 5,
            jitter: 0.25,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

fn clamp_into(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for i in 0..x.len() {
        x[i] = x[i].clamp(lo[i], hi[i]);
    }
}

/// Nelder-Mead simplex restricted to the box `[lo, hi]` (candidate points are
/// projected back onto the box). Deterministic for a fixed starting point.
pub fn nelder_mead<F>(f: F, x0: &[f64], lo: &[f64], hi: &[f64], opts: &SimplexOptions) -> OptimResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(n > 0 && lo.len() == n && hi.len() == n);
    let mut evals = 0usize;
    let mut eval = |x: &[f64]| {
        evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    // initial simplex: x0 plus one vertex per axis, stepped by 5% of box width
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut start = x0.to_vec();
    clamp_into(&mut start, lo, hi);
    simplex.push(start.clone());
    for i in 0..n {
        let mut v = start.clone();
        let width = hi[i] - lo[i];
        let step = if width > 0.0 { 0.05 * width } else { 0.05 * v[i].abs().max(1.0) };
        v[i] += if v[i] + step <= hi[i] { step } else { -step };
        clamp_into(&mut v, lo, hi);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        iterations += 1;
        // order ascending by objective
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;

        let spread = values[n] - values[0];
        if spread.abs() <= opts.f_tol * (1.0 + values[0].abs()) {
            // also require the simplex to have collapsed in parameter space
            let mut diameter = 0.0f64;
            for v in simplex.iter().skip(1) {
                for i in 0..n {
                    let width = (hi[i] - lo[i]).max(1.0);
                    diameter = diameter.max((v[i] - simplex[0][i]).abs() / width);
                }
            }
            if diameter <= opts.x_tol {
                converged = true;
                break;
            }
        }

        // centroid of all but worst
        let mut centroid = vec![0.0; n];
        for v in simplex.iter().take(n) {
            for i in 0..n {
                centroid[i] += v[i] / n as f64;
            }
        }

        let mut reflected = vec![0.0; n];
        for i in 0..n {
            reflected[i] = centroid[i] + ALPHA * (centroid[i] - simplex[n][i]);
        }
        clamp_into(&mut reflected, lo, hi);
        let fr = eval(&reflected);

        if fr < values[0] {
            let mut expanded = vec![0.0; n];
            for i in 0..n {
                expanded[i] = centroid[i] + GAMMA * (reflected[i] - centroid[i]);
            }
            clamp_into(&mut expanded, lo, hi);
            let fe = eval(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            // contraction toward the better of (worst, reflected)
            let (base, fb) = if fr < values[n] { (&reflected, fr) } else { (&simplex[n], values[n]) };
            let mut contracted = vec![0.0; n];
            for i in 0..n {
                contracted[i] = centroid[i] + RHO * (base[i] - centroid[i]);
            }
            clamp_into(&mut contracted, lo, hi);
            let fc = eval(&contracted);
            if fc < fb {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                for k in 1..=n {
                    for i in 0..n {
                        simplex[k][i] = simplex[0][i] + SIGMA * (simplex[k][i] - simplex[0][i]);
                    }
                    let vk = simplex[k].clone();
                    values[k] = eval(&vk);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    OptimResult {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        evaluations: evals,
        converged,
    }
}

/// Multi-start Nelder-Mead: the supplied point plus `restarts - 1` jittered
/// copies, run concurrently, best result wins (ties broken by start index so
/// the outcome is deterministic).
pub fn multi_start<F>(f: F, x0: &[f64], lo: &[f64], hi: &[f64], opts: &SimplexOptions) -> OptimResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let n = x0.len();
    let starts: Vec<Vec<f64>> = (0..opts.restarts.max(1))
        .map(|r| {
            if r == 0 {
                let mut s = x0.to_vec();
                clamp_into(&mut s, lo, hi);
                return s;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, r as u64));
            let mut s = vec![0.0; n];
            for i in 0..n {
                let width = hi[i] - lo[i];
                s[i] = x0[i] + rng.gen_range(-1.0..1.0) * opts.jitter * width;
            }
            clamp_into(&mut s, lo, hi);
            s
        })
        .collect();

    let results: Vec<OptimResult> = starts
        .par_iter()
        .map(|s| nelder_mead(&f, s, lo, hi, opts))
        .collect();

    let mut best = 0;
    for i in 1..results.len() {
        if results[i].value < results[best].value {
            best = i;
        }
    }
    results.into_iter().nth(best).expect("at least one start")
}

/// Golden-section minimisation of a unimodal function on `[lo, hi]`.
pub fn golden_section<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
