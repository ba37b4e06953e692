//! Gegenbauer polynomial expansions, k-factor GARMA models, spectral
//! densities, simulation, residual extraction and mean forecasting.
//!
//! A k-factor GARMA process satisfies
//! `Phi(L) prod_i (1 - 2 nu_i L + L^2)^{d_i} (y_t - mu) = Theta(L) eps_t`,
//! long memory appearing at the angular frequencies `omega_i = arccos(nu_i)`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{
    ar_polynomial, binomial_series, convolve_trunc, invert_series, ma_polynomial,
    roots_outside_unit_circle, squared_modulus_at,
};
use crate::timeseries::TimeSeries;

/// One `(1 - 2 nu L + L^2)^d` factor of the long-memory operator.
///
/// `nu` is the cosine of the Gegenbauer angular frequency; `d` is the memory
/// exponent at that frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GegenbauerFactor {
    pub d: f64,
    pub nu: f64,
}

impl GegenbauerFactor {
    pub fn new(d: f64, nu: f64) -> Result<Self> {
        if nu.abs() > 1.0 {
            return Err(Error::invalid(format!("|nu| must be <= 1, got {nu}")));
        }
        Ok(GegenbauerFactor { d, nu })
    }

    /// Factor located by angular frequency `omega = arccos(nu)` in [0, pi].
    pub fn from_angular(d: f64, omega: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&omega) {
            return Err(Error::invalid(format!("omega must lie in [0, pi], got {omega}")));
        }
        GegenbauerFactor::new(d, omega.cos())
    }

    /// Factor located by frequency in cycles/sample (in [0, 1/2]).
    pub fn from_cycles(d: f64, cycles: f64) -> Result<Self> {
        GegenbauerFactor::from_angular(d, 2.0 * PI * cycles)
    }

    /// Angular frequency of the spectral pole, radians/sample in [0, pi].
    pub fn omega(&self) -> f64 {
        self.nu.clamp(-1.0, 1.0).acos()
    }

    /// Pole location in cycles/sample.
    pub fn cycles(&self) -> f64 {
        self.omega() / (2.0 * PI)
    }

    /// Cycle period in samples (infinite at the origin).
    pub fn period(&self) -> f64 {
        let f = self.cycles();
        if f > 0.0 {
            1.0 / f
        } else {
            f64::INFINITY
        }
    }

    /// Stationarity: `|nu| < 1 && d < 1/2`, or `|nu| = 1 && d < 1/4`.
    pub fn is_stationary(&self) -> bool {
        if self.nu.abs() < 1.0 {
            self.d < 0.5
        } else {
            self.d < 0.25
        }
    }
}

/// k-factor GARMA model: ARMA polynomials, Gegenbauer factors, mean and
/// innovation variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarmaModel {
    pub mu: f64,
    /// AR coefficients: `Phi(L) = 1 - sum ar[i] L^{i+1}`.
    pub ar: Vec<f64>,
    /// MA coefficients: `Theta(L) = 1 + sum ma[i] L^{i+1}`.
    pub ma: Vec<f64>,
    pub factors: Vec<GegenbauerFactor>,
    pub sigma2: f64,
}

impl GarmaModel {
    pub fn new(
        mu: f64,
        ar: Vec<f64>,
        ma: Vec<f64>,
        factors: Vec<GegenbauerFactor>,
        sigma2: f64,
    ) -> Result<Self> {
        let model = GarmaModel { mu, ar, ma, factors, sigma2 };
        model.validate()?;
        Ok(model)
    }

    /// White noise with the given mean and variance.
    pub fn white_noise(mu: f64, sigma2: f64) -> Self {
        GarmaModel { mu, ar: Vec::new(), ma: Vec::new(), factors: Vec::new(), sigma2 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 > 0.0) {
            return Err(Error::invalid("sigma2 must be positive"));
        }
        for (i, f) in self.factors.iter().enumerate() {
            if f.nu.abs() > 1.0 {
                return Err(Error::invalid(format!("factor {i}: |nu| must be <= 1")));
            }
            if !f.is_stationary() {
                return Err(Error::invalid(format!(
                    "factor {i} (d = {}, nu = {}) violates stationarity",
                    f.d, f.nu
                )));
            }
        }
        if !self.ar.is_empty() && !roots_outside_unit_circle(&ar_polynomial(&self.ar), 1e-8) {
            return Err(Error::invalid("AR polynomial has a root on or inside the unit circle"));
        }
        Ok(())
    }

    /// MA invertibility, required for the AR(infinity) representation.
    pub fn check_invertible(&self) -> Result<()> {
        if !self.ma.is_empty() && !roots_outside_unit_circle(&ma_polynomial(&self.ma), 1e-8) {
            return Err(Error::invalid("MA polynomial has a root on or inside the unit circle"));
        }
        Ok(())
    }

    /// Angular frequencies at which the spectral density is unbounded.
    pub fn pole_frequencies(&self) -> Vec<f64> {
        self.factors.iter().filter(|f| f.d != 0.0).map(|f| f.omega()).collect()
    }
}

/// Coefficients `C_0..C_{n-1}` of `(1 - 2 nu z + z^2)^{-d}` via the
/// three-term recursion
/// `C_0 = 1, C_1 = 2 d nu,
///  C_j = 2 nu (1 + (d-1)/j) C_{j-1} - (1 + 2(d-1)/j) C_{j-2}`.
pub fn gegenbauer_coefficients(d: f64, nu: f64, n_terms: usize) -> Result<Vec<f64>> {
    if nu.abs() > 1.0 {
        return Err(Error::invalid(format!("|nu| must be <= 1, got {nu}")));
    }
    if n_terms == 0 {
        return Err(Error::invalid("n_terms must be at least 1"));
    }
    let mut c = vec![0.0; n_terms];
    c[0] = 1.0;
    if n_terms > 1 {
        c[1] = 2.0 * d * nu;
    }
    for j in 2..n_terms {
        let jf = j as f64;
        c[j] = 2.0 * nu * (1.0 + (d - 1.0) / jf) * c[j - 1] - (1.0 + 2.0 * (d - 1.0) / jf) * c[j - 2];
    }
    Ok(c)
}

/// Expansion of a single factor `(1 - 2 nu L + L^2)^{exponent}`.
///
/// Degenerate `nu = +-1` factors are rewritten as `(1 -+ L)^{2 exponent}` and
/// expanded by the generalized binomial series, which avoids the cancellation
/// the generic recursion suffers at the boundary.
pub(crate) fn factor_expansion(nu: f64, exponent: f64, n_terms: usize) -> Result<Vec<f64>> {
    if nu.abs() > 1.0 {
        return Err(Error::invalid(format!("|nu| must be <= 1, got {nu}")));
    }
    if (nu - 1.0).abs() < 1e-12 {
        return Ok(binomial_series(2.0 * exponent, -1.0, n_terms));
    }
    if (nu + 1.0).abs() < 1e-12 {
        return Ok(binomial_series(2.0 * exponent, 1.0, n_terms));
    }
    gegenbauer_coefficients(-exponent, nu, n_terms)
}

/// Which infinite-order representation to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// psi-weights of the MA(infinity) form `y_t - mu = sum psi_j eps_{t-j}`.
    MaInfinity,
    /// pi-weights of the AR(infinity) form `eps_t = sum pi_j (y_{t-j} - mu)`.
    ArInfinity,
}

/// Truncated psi- or pi-weights of a k-factor GARMA filter.
pub fn long_memory_weights(
    factors: &[GegenbauerFactor],
    ar: &[f64],
    ma: &[f64],
    kind: WeightKind,
    n_terms: usize,
) -> Result<Vec<f64>> {
    if n_terms == 0 {
        return Err(Error::invalid("n_terms must be at least 1"));
    }
    let mut weights = vec![0.0; n_terms];
    weights[0] = 1.0;
    match kind {
        WeightKind::MaInfinity => {
            // psi(L) = Theta(L) / [Phi(L) * prod (1 - 2 nu L + L^2)^{d}]
            if !ar.is_empty() {
                if !roots_outside_unit_circle(&ar_polynomial(ar), 1e-8) {
                    return Err(Error::invalid("non-stationary AR polynomial"));
                }
                weights = convolve_trunc(&weights, &invert_series(&ar_polynomial(ar), n_terms), n_terms);
            }
            if !ma.is_empty() {
                weights = convolve_trunc(&weights, &ma_polynomial(ma), n_terms);
            }
            for f in factors {
                weights = convolve_trunc(&weights, &factor_expansion(f.nu, -f.d, n_terms)?, n_terms);
            }
        }
        WeightKind::ArInfinity => {
            // pi(L) = Phi(L) * prod (1 - 2 nu L + L^2)^{d} / Theta(L)
            if !ma.is_empty() {
                if !roots_outside_unit_circle(&ma_polynomial(ma), 1e-8) {
                    return Err(Error::invalid("non-invertible MA polynomial"));
                }
                weights = convolve_trunc(&weights, &invert_series(&ma_polynomial(ma), n_terms), n_terms);
            }
            if !ar.is_empty() {
                weights = convolve_trunc(&weights, &ar_polynomial(ar), n_terms);
            }
            for f in factors {
                weights = convolve_trunc(&weights, &factor_expansion(f.nu, f.d, n_terms)?, n_terms);
            }
        }
    }
    Ok(weights)
}

/// Spectral density at a single angular frequency, without pole-distance
/// checks (values near poles are large but finite; exact poles yield inf).
pub fn spectral_density_at(model: &GarmaModel, omega: f64) -> f64 {
    let mut value = model.sigma2 / (2.0 * PI);
    value *= squared_modulus_at(&ma_polynomial(&model.ma), omega);
    value /= squared_modulus_at(&ar_polynomial(&model.ar), omega);
    for f in &model.factors {
        let base = 4.0 * (omega.cos() - f.nu).powi(2);
        value *= base.powf(-f.d);
    }
    value
}

/// Spectral density on a grid of angular frequencies in (0, pi].
///
/// Errors if any grid point sits within 1e-12 of a spectral pole.
pub fn garma_spectral_density(model: &GarmaModel, omegas: &[f64]) -> Result<Vec<f64>> {
    let poles = model.pole_frequencies();
    let mut out = Vec::with_capacity(omegas.len());
    for &omega in omegas {
        if !(omega > 0.0 && omega <= PI) {
            return Err(Error::invalid(format!("omega = {omega} outside (0, pi]")));
        }
        if poles.iter().any(|&p| (omega - p).abs() < 1e-12) {
            return Err(Error::numerical(format!("grid point {omega} coincides with a spectral pole")));
        }
        out.push(spectral_density_at(model, omega));
    }
    Ok(out)
}

/// Simulate a stationary GARMA path via the truncated MA(infinity)
/// representation with Gaussian innovations; `burn_in` is the truncation
/// length of the psi-weights (default choice in this crate: 2000).
pub fn simulate_garma(model: &GarmaModel, n: usize, burn_in: usize, seed: u64) -> Result<TimeSeries> {
    model.validate()?;
    if n < 2 {
        return Err(Error::invalid("need n >= 2"));
    }
    let trunc = burn_in.max(1);
    let psi = long_memory_weights(&model.factors, &model.ar, &model.ma, WeightKind::MaInfinity, trunc)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let sd = model.sigma2.sqrt();
    let eps: Vec<f64> = (0..n + trunc)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sd * z
        })
        .collect();
    let mut values = Vec::with_capacity(n);
    for t in 0..n {
        let mut acc = 0.0;
        for (j, &w) in psi.iter().enumerate() {
            acc += w * eps[trunc + t - j];
        }
        values.push(model.mu + acc);
    }
    TimeSeries::hourly(values, "garma simulation")
}

/// Residual extraction plus any non-fatal warnings raised along the way.
#[derive(Debug, Clone)]
pub struct Residuals {
    pub series: TimeSeries,
    pub warnings: Vec<String>,
}

/// Innovations implied by the AR(infinity) representation:
/// `eps_t = sum_j pi_j (y_{t-j} - mu)`, pre-sample deviations taken as zero.
pub fn garma_residuals(model: &GarmaModel, series: &TimeSeries, truncation: usize) -> Result<Residuals> {
    if truncation < 100 {
        return Err(Error::invalid("truncation must be at least 100"));
    }
    model.check_invertible()?;
    let pi = long_memory_weights(&model.factors, &model.ar, &model.ma, WeightKind::ArInfinity, truncation)?;
    let dev: Vec<f64> = series.values().iter().map(|&y| y - model.mu).collect();
    let n = dev.len();
    let mut warnings = Vec::new();
    if n < 2 * truncation {
        warnings.push(format!(
            "series length {n} is below twice the truncation {truncation}; early residuals are conditioned on a short history"
        ));
    }
    let mut eps = Vec::with_capacity(n);
    for t in 0..n {
        let mut acc = 0.0;
        for j in 0..=t.min(truncation - 1) {
            acc += pi[j] * dev[t - j];
        }
        eps.push(acc);
    }
    Ok(Residuals { series: series.derive(eps, 0, format!("{} residuals", series.label()))?, warnings })
}

/// Iterated multi-step mean forecast: one-step AR(infinity) predictions with
/// forecasts substituted for unobserved values. Returns the h-step path
/// `[y_hat(1), .., y_hat(horizon)]`.
pub fn garma_mean_forecast(
    model: &GarmaModel,
    history: &TimeSeries,
    horizon: usize,
    truncation: usize,
) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    model.check_invertible()?;
    let pi = long_memory_weights(&model.factors, &model.ar, &model.ma, WeightKind::ArInfinity, truncation)?;
    // predictor weights: y_t - mu = -sum_{j>=1} pi_j (y_{t-j} - mu) + eps_t
    let mut dev: Vec<f64> = history.values().iter().map(|&y| y - model.mu).collect();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let len = dev.len();
        let mut acc = 0.0;
        for j in 1..pi.len().min(len + 1) {
            acc -= pi[j] * dev[len - j];
        }
        dev.push(acc);
        out.push(model.mu + acc);
    }
    Ok(out)
}

/// Export a weight vector as `lag,weight` CSV rows.
pub fn weights_to_csv(weights: &[f64]) -> String {
    let mut out = String::from("lag,weight\n");
    for (j, w) in weights.iter().enumerate() {
        out.push_str(&format!("{j},{w}\n"));
    }
    out
}
