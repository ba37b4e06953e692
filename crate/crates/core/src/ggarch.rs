//! Gegenbauer log-GARCH conditional variance: filter weights, variance
//! recursion, Gaussian quasi-likelihood, fitting, simulation and forecasting.
//!
//! The log-variance recursion is
//! `ln s2_t = gamma + sum_i beta_i ln s2_{t-i} + sum_j Lambda_j (ln e2_{t-j} - tau)`
//! with `Lambda(L) = 1 - beta(L) - P_v(L) psi(L)`. Positivity of the variance
//! is structural: the recursion lives entirely on the log scale.
//!
//! Polynomial convention: `beta(L) = sum_{i>=1} beta_i L^i` (no leading one)
//! and `psi(L) = 1 - sum_{i>=1} psi_i L^i`, which makes the lag-0 coefficient
//! of `Lambda` exactly zero and the recursion causal.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gegenbauer::{factor_expansion, GegenbauerFactor};
use crate::optim::{multi_start, SimplexOptions};
use crate::poly::convolve_trunc;
use crate::timeseries::TimeSeries;
use crate::wavelet::detect_gegenbauer_frequencies;

/// Expectation of `ln z^2` for standard Gaussian innovations.
pub const TAU_GAUSSIAN: f64 = -1.27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Innovation {
    Gaussian,
}

/// Gegenbauer log-GARCH model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GGarchModel {
    /// Intercept of the log-variance equation.
    pub gamma: f64,
    /// GARCH coefficients `beta_1..beta_p`.
    pub beta: Vec<f64>,
    /// ARCH-side coefficients entering `psi(L) = 1 - sum psi_i L^i`.
    pub psi: Vec<f64>,
    /// Long-memory factors of the variance filter (exponents enter with +d).
    pub variance_factors: Vec<GegenbauerFactor>,
    /// `E[ln z^2]`; -1.27 under Gaussian innovations.
    pub tau: f64,
    /// Seasonal cycle length bookkeeping (S = 1 recovers FIGARCH-type filters).
    pub season_length: usize,
    /// Truncation M of the Lambda weights.
    pub truncation: usize,
    pub innovation: Innovation,
}

impl GGarchModel {
    /// Constant-log-variance model `ln s2 = gamma`.
    pub fn constant(gamma: f64) -> Self {
        GGarchModel {
            gamma,
            beta: Vec::new(),
            psi: Vec::new(),
            variance_factors: Vec::new(),
            tau: TAU_GAUSSIAN,
            season_length: 1,
            truncation: 1000,
            innovation: Innovation::Gaussian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation < 100 {
            return Err(Error::invalid("truncation M must be at least 100"));
        }
        let beta_sum: f64 = self.beta.iter().sum();
        if beta_sum.abs() >= 1.0 {
            return Err(Error::invalid(format!(
                "|sum beta| = {} breaks the recursion stability guard",
                beta_sum.abs()
            )));
        }
        for (i, f) in self.variance_factors.iter().enumerate() {
            if f.nu.abs() > 1.0 {
                return Err(Error::invalid(format!("variance factor {i}: |nu| must be <= 1")));
            }
            if f.d >= 0.5 {
                return Err(Error::invalid(format!("variance factor {i}: d must be < 1/2")));
            }
        }
        Ok(())
    }
}

/// Coefficients of `Lambda(L) = 1 - beta(L) - P_v(L) psi(L)` to lag M;
/// index 0 is structurally zero.
pub fn ggarch_filter_weights(model: &GGarchModel) -> Result<Vec<f64>> {
    model.validate()?;
    let m = model.truncation;
    // P_v(L) psi(L) with psi(L) = 1 - sum psi_i L^i
    let mut arch_side = vec![0.0; m + 1];
    arch_side[0] = 1.0;
    for (i, &p) in model.psi.iter().enumerate() {
        if i + 1 <= m {
            arch_side[i + 1] = -p;
        }
    }
    for f in &model.variance_factors {
        arch_side = convolve_trunc(&arch_side, &factor_expansion(f.nu, f.d, m + 1)?, m + 1);
    }
    let mut lambda = vec![0.0; m + 1];
    for j in 1..=m {
        let beta_j = model.beta.get(j - 1).copied().unwrap_or(0.0);
        lambda[j] = -beta_j - arch_side[j];
    }
    Ok(lambda)
}

fn log_floored_squares(eps: &[f64]) -> Vec<f64> {
    let n = eps.len() as f64;
    let mean = eps.iter().sum::<f64>() / n;
    let var = eps.iter().map(|&e| (e - mean).powi(2)).sum::<f64>() / n;
    let floor = 1e-12 * var.max(1e-300);
    eps.iter().map(|&e| (e * e).max(floor).ln()).collect()
}

/// Log-variance recursion given explicit Lambda weights; kept separate so
/// the beta recursion can be exercised with the filter switched off.
pub(crate) fn variance_path_given_weights(
    gamma: f64,
    beta: &[f64],
    lambda: &[f64],
    eps: &[f64],
    tau: f64,
) -> Vec<f64> {
    let n = eps.len();
    let x = log_floored_squares(eps);
    let init = x.iter().sum::<f64>() / n as f64 - tau;
    // trim trailing zeros of Lambda so short filters cost O(p+q), not O(M)
    let mut last = lambda.len();
    while last > 1 && lambda[last - 1] == 0.0 {
        last -= 1;
    }
    let lambda = &lambda[..last];

    let mut log_var: Vec<f64> = Vec::with_capacity(n);
    for t in 0..n {
        let mut acc = gamma;
        for (i, &b) in beta.iter().enumerate() {
            let lag = i + 1;
            acc += b * if t >= lag { log_var[t - lag] } else { init };
        }
        for (j, &l) in lambda.iter().enumerate().skip(1) {
            if l == 0.0 {
                continue;
            }
            acc += l * if t >= j { x[t - j] - tau } else { init };
        }
        log_var.push(acc);
    }
    log_var
}

/// Conditional variance path `s2_t` implied by the model on a residual
/// series; strictly positive by construction.
pub fn ggarch_variance_path(model: &GGarchModel, residuals: &TimeSeries) -> Result<Vec<f64>> {
    if residuals.len() < 2 {
        return Err(Error::invalid("need at least 2 residuals"));
    }
    let lambda = ggarch_filter_weights(model)?;
    let log_var =
        variance_path_given_weights(model.gamma, &model.beta, &lambda, residuals.values(), model.tau);
    Ok(log_var.into_iter().map(f64::exp).collect())
}

/// Gaussian quasi-log-likelihood over the post-burn-in sample
/// (the first `max(p, 50)` observations are excluded from the sum).
pub fn ggarch_loglik(model: &GGarchModel, residuals: &TimeSeries) -> Result<f64> {
    let n = residuals.len();
    if n < 50 {
        return Err(Error::invalid("need at least 50 residuals"));
    }
    let burn = model.beta.len().max(50);
    if n <= burn {
        return Err(Error::invalid(format!("need more than {burn} residuals")));
    }
    let sigma2 = ggarch_variance_path(model, residuals)?;
    let eps = residuals.values();
    let mut ll = 0.0;
    for t in burn..n {
        ll += -0.5 * (2.0 * PI).ln() - 0.5 * sigma2[t].ln() - eps[t] * eps[t] / (2.0 * sigma2[t]);
    }
    if !ll.is_finite() {
        return Err(Error::numerical("non-finite quasi-likelihood"));
    }
    Ok(ll)
}

/// Fit configuration for [`fit_ggarch`].
#[derive(Debug, Clone)]
pub struct GgarchFitConfig {
    pub p: usize,
    pub q: usize,
    pub truncation: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for GgarchFitConfig {
    fn default() -> Self {
        GgarchFitConfig { p: 1, q: 1, truncation: 1000, restarts: 5, max_iterations: 400, seed: 0 }
    }
}

/// One estimated parameter in the fit report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FittedParameter {
    pub name: String,
    pub estimate: f64,
    pub hit_bound: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GgarchFitReport {
    pub parameters: Vec<FittedParameter>,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
    pub frequencies: Vec<f64>,
    pub warnings: Vec<String>,
}

impl GgarchFitReport {
    /// `parameter,estimate,bound_hit,log_likelihood,converged` CSV rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("parameter,estimate,bound_hit,log_likelihood,converged\n");
        for p in &self.parameters {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                p.name, p.estimate, p.hit_bound, self.log_likelihood, self.converged
            ));
        }
        out
    }
}

const D_LO: f64 = 1e-4;
const D_HI: f64 = 0.489;
const COEF_BOUND: f64 = 0.999;
const PENALTY: f64 = 1e12;

/// Quasi-maximum-likelihood fit of a k-factor G-GARCH model on a residual
/// series. Variance-side frequencies are fixed from periodogram peaks of
/// `ln e2` unless supplied; `k = 0` reduces to a plain log-GARCH(p, q).
pub fn fit_ggarch(
    residuals: &TimeSeries,
    k: usize,
    fixed_frequencies: Option<&[f64]>,
    config: &GgarchFitConfig,
) -> Result<(GGarchModel, GgarchFitReport)> {
    let n = residuals.len();
    if n < 200 {
        return Err(Error::invalid("need at least 200 residuals to fit"));
    }
    let mut warnings = Vec::new();

    let frequencies: Vec<f64> = if k == 0 {
        Vec::new()
    } else {
        match fixed_frequencies {
            Some(fs) => {
                if fs.len() != k {
                    return Err(Error::invalid(format!(
                        "{} fixed frequencies supplied for k = {k}",
                        fs.len()
                    )));
                }
                fs.to_vec()
            }
            None => {
                let logs = log_floored_squares(residuals.values());
                detect_gegenbauer_frequencies(&logs, k)?
                    .iter()
                    .map(|p| p.frequency)
                    .collect()
            }
        }
    };
    let nus: Vec<f64> = frequencies.iter().map(|&f| (2.0 * PI * f).cos()).collect();

    // parameter packing: gamma, beta_1..p, psi_1..q, d_1..k
    let dim = 1 + config.p + config.q + k;
    let values = residuals.values();
    let var = {
        let mean = values.iter().sum::<f64>() / n as f64;
        values.iter().map(|&e| (e - mean).powi(2)).sum::<f64>() / n as f64
    };
    let mut x0 = vec![0.0; dim];
    let mut lo = vec![0.0; dim];
    let mut hi = vec![0.0; dim];
    x0[0] = var.max(1e-12).ln() * 0.5;
    lo[0] = -30.0;
    hi[0] = 30.0;
    for i in 0..config.p {
        x0[1 + i] = 0.1;
        lo[1 + i] = -COEF_BOUND;
        hi[1 + i] = COEF_BOUND;
    }
    for i in 0..config.q {
        x0[1 + config.p + i] = 0.2;
        lo[1 + config.p + i] = -COEF_BOUND;
        hi[1 + config.p + i] = COEF_BOUND;
    }
    for i in 0..k {
        x0[1 + config.p + config.q + i] = 0.15;
        lo[1 + config.p + config.q + i] = D_LO;
        hi[1 + config.p + config.q + i] = D_HI;
    }

    let build = |theta: &[f64]| -> GGarchModel {
        GGarchModel {
            gamma: theta[0],
            beta: theta[1..1 + config.p].to_vec(),
            psi: theta[1 + config.p..1 + config.p + config.q].to_vec(),
            variance_factors: theta[1 + config.p + config.q..]
                .iter()
                .zip(&nus)
                .map(|(&d, &nu)| GegenbauerFactor { d, nu })
                .collect(),
            tau: TAU_GAUSSIAN,
            season_length: 1,
            truncation: config.truncation,
            innovation: Innovation::Gaussian,
        }
    };
    let objective = |theta: &[f64]| -> f64 {
        let model = build(theta);
        if model.validate().is_err() {
            return PENALTY;
        }
        match ggarch_loglik(&model, residuals) {
            Ok(ll) if ll.is_finite() => -ll,
            _ => PENALTY,
        }
    };

    let opts = SimplexOptions {
        max_iterations: config.max_iterations,
        restarts: config.restarts,
        jitter: 0.2,
        seed: config.seed,
        ..Default::default()
    };
    let result = multi_start(objective, &x0, &lo, &hi, &opts);
    if result.value >= PENALTY {
        return Err(Error::Convergence("quasi-likelihood degenerate at every point tried".into()));
    }
    if !result.converged {
        warnings.push(format!(
            "simplex search hit the iteration cap ({}); best point reported",
            config.max_iterations
        ));
    }

    let model = build(&result.x);
    let mut parameters = Vec::with_capacity(dim);
    let mut push = |name: String, value: f64, lo: f64, hi: f64| {
        let hit = (value - lo).abs() < 1e-6 || (hi - value).abs() < 1e-6;
        parameters.push(FittedParameter { name, estimate: value, hit_bound: hit });
    };
    push("gamma".into(), result.x[0], lo[0], hi[0]);
    for i in 0..config.p {
        push(format!("beta_{}", i + 1), result.x[1 + i], -COEF_BOUND, COEF_BOUND);
    }
    for i in 0..config.q {
        push(format!("psi_{}", i + 1), result.x[1 + config.p + i], -COEF_BOUND, COEF_BOUND);
    }
    for i in 0..k {
        push(format!("d_v_{}", i + 1), result.x[1 + config.p + config.q + i], D_LO, D_HI);
    }

    let report = GgarchFitReport {
        parameters,
        log_likelihood: -result.value,
        converged: result.converged,
        iterations: result.iterations,
        frequencies,
        warnings,
    };
    Ok((model, report))
}

pub(crate) fn variance_forecast_given_weights(
    gamma: f64,
    beta: &[f64],
    lambda: &[f64],
    eps: &[f64],
    tau: f64,
    horizon: usize,
) -> Vec<f64> {
    let n = eps.len();
    let x = log_floored_squares(eps);
    let init = x.iter().sum::<f64>() / n as f64 - tau;
    let mut log_var = variance_path_given_weights(gamma, beta, lambda, eps, tau);

    let mut last = lambda.len();
    while last > 1 && lambda[last - 1] == 0.0 {
        last -= 1;
    }
    let lambda = &lambda[..last];

    let mut forecasts = Vec::with_capacity(horizon);
    for h in 0..horizon {
        let t = n + h;
        let mut acc = gamma;
        for (i, &b) in beta.iter().enumerate() {
            let lag = i + 1;
            acc += b * if t >= lag { log_var[t - lag] } else { init };
        }
        for (j, &l) in lambda.iter().enumerate().skip(1) {
            if l == 0.0 {
                continue;
            }
            if t < j {
                acc += l * init;
                continue;
            }
            let idx = t - j;
            // past: observed ln e2 - tau; future: its conditional expectation,
            // which is the forecast log-variance itself
            acc += l * if idx < n { x[idx] - tau } else { log_var[idx] };
        }
        log_var.push(acc);
        forecasts.push(acc.exp());
    }
    forecasts
}

/// Iterated variance forecast: unobserved `ln e2 - tau` terms are replaced by
/// their conditional expectation (the forecast log-variance). Deterministic
/// and strictly positive.
pub fn ggarch_variance_forecast(
    model: &GGarchModel,
    residual_history: &TimeSeries,
    horizon: usize,
) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    if residual_history.len() < 2 {
        return Err(Error::invalid("need at least 2 residuals"));
    }
    let lambda = ggarch_filter_weights(model)?;
    Ok(variance_forecast_given_weights(
        model.gamma,
        &model.beta,
        &lambda,
        residual_history.values(),
        model.tau,
        horizon,
    ))
}

/// Simulate residuals and their conditional variances from the model;
/// `burn_in` initial draws are discarded.
pub fn simulate_ggarch(
    model: &GGarchModel,
    n: usize,
    burn_in: usize,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    model.validate()?;
    if n < 2 {
        return Err(Error::invalid("need n >= 2"));
    }
    let lambda_full = ggarch_filter_weights(model)?;
    let mut last = lambda_full.len();
    while last > 1 && lambda_full[last - 1] == 0.0 {
        last -= 1;
    }
    let lambda = &lambda_full[..last];

    // unconditional mean of ln s2 seeds the recursion
    let load: f64 = model.beta.iter().sum::<f64>() + lambda.iter().sum::<f64>();
    let mean_log_var =
        if (1.0 - load).abs() > 1e-6 { model.gamma / (1.0 - load) } else { model.gamma };

    let total = n + burn_in;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut log_var: Vec<f64> = Vec::with_capacity(total);
    let mut x_centered: Vec<f64> = Vec::with_capacity(total); // ln e2 - tau
    let mut eps = Vec::with_capacity(total);
    let mut sigma2 = Vec::with_capacity(total);
    for t in 0..total {
        let mut acc = model.gamma;
        for (i, &b) in model.beta.iter().enumerate() {
            let lag = i + 1;
            acc += b * if t >= lag { log_var[t - lag] } else { mean_log_var };
        }
        for (j, &l) in lambda.iter().enumerate().skip(1) {
            if l == 0.0 {
                continue;
            }
            acc += l * if t >= j { x_centered[t - j] } else { mean_log_var };
        }
        let z: f64 = StandardNormal.sample(&mut rng);
        let s2 = acc.exp();
        log_var.push(acc);
        x_centered.push((z * z).max(1e-300).ln() + acc - model.tau);
        eps.push(s2.sqrt() * z);
        sigma2.push(s2);
    }
    Ok((eps.split_off(burn_in), sigma2.split_off(burn_in)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::binomial_series;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;

    fn base_model() -> GGarchModel {
        GGarchModel::constant(0.0)
    }

    #[test]
    fn weights_vanish_for_constant_model() {
        let lambda = ggarch_filter_weights(&base_model()).unwrap();
        assert!(lambda.iter().all(|&l| l == 0.0));
    }

    #[test]
    fn pure_factor_weights_match_gegenbauer_expansion() {
        let mut model = base_model();
        model.variance_factors = vec![GegenbauerFactor { d: 0.3, nu: 0.4 }];
        model.truncation = 128;
        let lambda = ggarch_filter_weights(&model).unwrap();
        let c = factor_expansion(0.4, 0.3, 129).unwrap();
        assert_eq!(lambda[0], 0.0);
        for j in 1..=128 {
            assert_relative_eq!(lambda[j], -c[j], epsilon = 1e-14);
        }
    }

    #[test]
    fn figarch_specialisation_matches_binomial() {
        // one factor (nu = 1, d = d_v/2) gives (1 - L)^{d_v}
        let d_v = 0.4;
        let mut model = base_model();
        model.variance_factors = vec![GegenbauerFactor { d: d_v / 2.0, nu: 1.0 }];
        model.truncation = 128;
        let lambda = ggarch_filter_weights(&model).unwrap();
        let bin = binomial_series(d_v, -1.0, 129);
        for j in 1..=128 {
            assert!((lambda[j] + bin[j]).abs() < 1e-10, "lag {j}: {} vs {}", lambda[j], -bin[j]);
        }
    }

    #[test]
    fn log_garch_nesting_with_zero_memory() {
        // d = 0 everywhere, S = 1: Lambda_j = psi_j - beta_j exactly
        let mut model = base_model();
        model.beta = vec![0.3];
        model.psi = vec![0.2];
        model.variance_factors = vec![GegenbauerFactor { d: 0.0, nu: 0.5 }];
        let lambda = ggarch_filter_weights(&model).unwrap();
        assert_relative_eq!(lambda[1], 0.2 - 0.3, epsilon = 1e-14);
        for &l in &lambda[2..] {
            assert!(l.abs() < 1e-14);
        }
    }

    #[test]
    fn constant_model_path_is_exp_gamma() {
        let mut model = base_model();
        model.gamma = -0.7;
        let residuals = TimeSeries::hourly(vec![0.5, -1.0, 2.0, 0.1], "r").unwrap();
        let path = ggarch_variance_path(&model, &residuals).unwrap();
        for &s2 in &path {
            assert_relative_eq!(s2, (-0.7f64).exp(), epsilon = 1e-14);
        }
    }

    #[test]
    fn beta_recursion_hand_oracle() {
        // beta-only recursion with the filter off:
        // ln s2_t = gamma (1 - b^{t+1})/(1 - b) + b^{t+1} init
        let gamma = 0.4;
        let b = 0.6;
        let eps = [1.0, -0.5, 0.25, 2.0, -1.5];
        let x = log_floored_squares(&eps);
        let init = x.iter().sum::<f64>() / 5.0 - TAU_GAUSSIAN;
        let log_var = variance_path_given_weights(gamma, &[b], &[0.0], &eps, TAU_GAUSSIAN);
        for t in 0..4 {
            let k = t as i32 + 1;
            let expected = gamma * (1.0 - b.powi(k)) / (1.0 - b) + b.powi(k) * init;
            assert_relative_eq!(log_var[t], expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn variance_path_is_structurally_positive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let model = GGarchModel {
                gamma: rng.gen_range(-2.0..2.0),
                beta: vec![rng.gen_range(-0.9..0.9)],
                psi: vec![rng.gen_range(-0.9..0.9)],
                variance_factors: vec![GegenbauerFactor {
                    d: rng.gen_range(0.0..0.45),
                    nu: rng.gen_range(-1.0..1.0),
                }],
                tau: TAU_GAUSSIAN,
                season_length: 1,
                truncation: 200,
                innovation: Innovation::Gaussian,
            };
            let eps: Vec<f64> = (0..100).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let residuals = TimeSeries::hourly(eps, "r").unwrap();
            let path = ggarch_variance_path(&model, &residuals).unwrap();
            assert!(path.iter().all(|&s2| s2 > 0.0));
        }
    }

    #[test]
    fn constant_loglik_peaks_at_log_sample_variance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let sd = 0.8f64;
        let eps: Vec<f64> = (0..400)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                sd * z
            })
            .collect();
        let residuals = TimeSeries::hourly(eps.clone(), "r").unwrap();
        // the likelihood sums over t >= 50, so its argmax is the sample
        // second moment over that range
        let target = (eps[50..].iter().map(|e| e * e).sum::<f64>() / (eps.len() - 50) as f64).ln();
        let mut best = (f64::NEG_INFINITY, f64::NAN);
        let mut g = target - 0.5;
        while g <= target + 0.5 {
            let mut model = base_model();
            model.gamma = g;
            let ll = ggarch_loglik(&model, &residuals).unwrap();
            if ll > best.0 {
                best = (ll, g);
            }
            g += 1e-3;
        }
        assert!((best.1 - target).abs() <= 1.5e-3, "argmax {} vs {}", best.1, target);
    }

    #[test]
    fn doubling_the_variance_path_lowers_the_likelihood() {
        let mut model = base_model();
        model.gamma = -0.5;
        model.beta = vec![0.3];
        model.psi = vec![0.5];
        let (eps, _) = simulate_ggarch(&model, 2000, 500, 21).unwrap();
        let residuals = TimeSeries::hourly(eps.clone(), "r").unwrap();
        let sigma2 = ggarch_variance_path(&model, &residuals).unwrap();
        let ll = |scale: f64| -> f64 {
            (50..eps.len())
                .map(|t| {
                    let s2 = scale * sigma2[t];
                    -0.5 * (2.0 * PI).ln() - 0.5 * s2.ln() - eps[t] * eps[t] / (2.0 * s2)
                })
                .sum()
        };
        assert!(ll(2.0) < ll(1.0));
    }

    #[test]
    fn loglik_ignores_residual_signs() {
        let mut model = base_model();
        model.beta = vec![0.2];
        model.psi = vec![0.4];
        let eps: Vec<f64> = (0..120).map(|i| ((i * 37 % 17) as f64 - 8.0) / 4.0 + 0.1).collect();
        let flipped: Vec<f64> = eps.iter().map(|&e| -e).collect();
        let a = ggarch_loglik(&model, &TimeSeries::hourly(eps, "r").unwrap()).unwrap();
        let b = ggarch_loglik(&model, &TimeSeries::hourly(flipped, "r").unwrap()).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-10);
    }

    #[test]
    fn constant_model_forecast_is_flat() {
        let mut model = base_model();
        model.gamma = 0.3;
        let residuals = TimeSeries::hourly(vec![1.0, -2.0, 0.5, 0.2], "r").unwrap();
        let f = ggarch_variance_forecast(&model, &residuals, 5).unwrap();
        for &s2 in &f {
            assert_relative_eq!(s2, 0.3f64.exp(), epsilon = 1e-12);
        }
    }

    #[test]
    fn beta_only_forecast_converges_to_fixed_point() {
        let gamma = 0.5;
        let b = 0.7;
        let eps = [1.0, 0.5, -0.3, 1.2, 0.8, -1.1];
        let forecasts = variance_forecast_given_weights(gamma, &[b], &[0.0], &eps, TAU_GAUSSIAN, 20);
        let fixed_point = gamma / (1.0 - b);
        let mut prev_gap = f64::INFINITY;
        for (h, &s2) in forecasts.iter().enumerate() {
            let gap = (s2.ln() - fixed_point).abs();
            assert!(gap <= prev_gap + 1e-12, "horizon {h} moved away from the fixed point");
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-2, "gap after 20 steps: {prev_gap}");
    }

    #[test]
    fn forecasts_are_positive_for_random_models() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(123);
        for _ in 0..20 {
            let model = GGarchModel {
                gamma: rng.gen_range(-1.0..1.0),
                beta: vec![rng.gen_range(-0.8..0.8)],
                psi: vec![rng.gen_range(-0.8..0.8)],
                variance_factors: vec![GegenbauerFactor {
                    d: rng.gen_range(0.0..0.4),
                    nu: rng.gen_range(-1.0..1.0),
                }],
                tau: TAU_GAUSSIAN,
                season_length: 1,
                truncation: 150,
                innovation: Innovation::Gaussian,
            };
            let eps: Vec<f64> = (0..80).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let residuals = TimeSeries::hourly(eps, "r").unwrap();
            let f = ggarch_variance_forecast(&model, &residuals, 12).unwrap();
            assert!(f.iter().all(|&s2| s2 > 0.0));
        }
    }

    #[test]
    fn tau_matches_simulated_expectation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let n = 10_000_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let z: f64 = StandardNormal.sample(&mut rng);
            sum += (z * z).max(1e-300).ln();
        }
        let mean = sum / n as f64;
        assert!((mean - TAU_GAUSSIAN).abs() < 0.01, "E[ln z^2] = {mean}");
    }

    #[test]
    fn simulation_is_deterministic() {
        let mut model = base_model();
        model.beta = vec![0.4];
        model.psi = vec![0.7];
        let (a, _) = simulate_ggarch(&model, 100, 50, 5).unwrap();
        let (b, _) = simulate_ggarch(&model, 100, 50, 5).unwrap();
        assert_eq!(a, b);
    }
}
