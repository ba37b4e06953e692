//! Spectral and long-memory diagnostics: periodogram, GPH log-periodogram
//! regression, local Whittle estimation, Ljung-Box and Jarque-Bera tests.

use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::optim::golden_section;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LongMemoryMethod {
    Gph,
    LocalWhittle,
}

/// Semiparametric estimate of the long-memory exponent d.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LongMemoryEstimate {
    pub d_hat: f64,
    pub std_error: f64,
    /// Two-sided p-value for the null d = 0.
    pub p_value: f64,
    pub bandwidth: usize,
    pub method: LongMemoryMethod,
}

/// Periodogram of the demeaned series at the Fourier frequencies
/// `f_j = j/n, j = 1..floor(n/2)`, in cycles per sample:
/// `I(f_j) = |sum_t x_t e^{-i 2 pi f_j t}|^2 / (2 pi n)`.
pub fn periodogram(series: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = series.len();
    if n < 8 {
        return Err(Error::invalid("periodogram needs at least 8 observations"));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> =
        series.iter().map(|&v| Complex::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    let norm = 1.0 / (2.0 * PI * n as f64);
    let freqs: Vec<f64> = (1..=half).map(|j| j as f64 / n as f64).collect();
    let ords: Vec<f64> = (1..=half).map(|j| buf[j].norm_sqr() * norm).collect();
    Ok((freqs, ords))
}

/// Daniell-smoothed periodogram (centred moving average, truncated at the
/// edges) used for peak detection.
pub fn smoothed_periodogram(series: &[f64], span: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (freqs, ords) = periodogram(series)?;
    let half_span = span / 2;
    let n = ords.len();
    let smoothed: Vec<f64> = (0..n)
        .map(|j| {
            let lo = j.saturating_sub(half_span);
            let hi = (j + half_span).min(n - 1);
            ords[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect();
    Ok((freqs, smoothed))
}

/// Log-periodogram regression estimate of d (slope on the exact regressor
/// `-ln(4 sin^2(pi f))`), with the asymptotic standard error `pi/sqrt(24 m)`.
pub fn gph_estimate(series: &[f64], bandwidth_exponent: f64) -> Result<LongMemoryEstimate> {
    if !(0.4..0.9).contains(&bandwidth_exponent) {
        return Err(Error::invalid("bandwidth exponent must lie in (0.4, 0.9)"));
    }
    let n = series.len();
    let m = (n as f64).powf(bandwidth_exponent).floor() as usize;
    if m < 10 {
        return Err(Error::invalid(format!("bandwidth m = {m} too small (need >= 10)")));
    }
    let (freqs, ords) = periodogram(series)?;
    if m > ords.len() {
        return Err(Error::invalid("bandwidth exceeds the number of Fourier frequencies"));
    }
    let mut xs = Vec::with_capacity(m);
    let mut ys = Vec::with_capacity(m);
    for j in 0..m {
        if ords[j] <= 0.0 {
            return Err(Error::numerical(format!(
                "zero periodogram ordinate at frequency index {}",
                j + 1
            )));
        }
        xs.push(-(4.0 * (PI * freqs[j]).sin().powi(2)).ln());
        ys.push(ords[j].ln());
    }
    let x_bar = xs.iter().sum::<f64>() / m as f64;
    let y_bar = ys.iter().sum::<f64>() / m as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for j in 0..m {
        sxx += (xs[j] - x_bar).powi(2);
        sxy += (xs[j] - x_bar) * (ys[j] - y_bar);
    }
    let d_hat = sxy / sxx;
    let std_error = PI / (24.0 * m as f64).sqrt();
    let z = d_hat / std_error;
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let p_value = 2.0 * (1.0 - normal.cdf(z.abs()));
    Ok(LongMemoryEstimate { d_hat, std_error, p_value, bandwidth: m, method: LongMemoryMethod::Gph })
}

fn lw_objective(freqs: &[f64], ords: &[f64], m: usize, d: f64) -> f64 {
    let mut g = 0.0;
    let mut log_sum = 0.0;
    for j in 0..m {
        g += freqs[j].powf(2.0 * d) * ords[j];
        log_sum += freqs[j].ln();
    }
    (g / m as f64).ln() - 2.0 * d * log_sum / m as f64
}

/// Local Whittle estimate of d on the first `m` Fourier frequencies
/// (golden-section search over (-0.49, 0.49); standard error `1/(2 sqrt m)`).
pub fn local_whittle(series: &[f64], m: usize) -> Result<LongMemoryEstimate> {
    let n = series.len();
    if m < 10 || m >= n / 2 {
        return Err(Error::invalid(format!("bandwidth m = {m} must satisfy 10 <= m < n/2")));
    }
    let (freqs, ords) = periodogram(series)?;
    if ords[..m].iter().all(|&o| o <= 0.0) {
        return Err(Error::numerical("degenerate periodogram: all ordinates zero"));
    }
    let obj = |d: f64| lw_objective(&freqs, &ords, m, d);
    let (d_hat, _) = golden_section(obj, -0.49, 0.49, 1e-6);
    let std_error = 1.0 / (2.0 * (m as f64).sqrt());
    let z = d_hat / std_error;
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let p_value = 2.0 * (1.0 - normal.cdf(z.abs()));
    Ok(LongMemoryEstimate {
        d_hat,
        std_error,
        p_value,
        bandwidth: m,
        method: LongMemoryMethod::LocalWhittle,
    })
}

/// Ljung-Box portmanteau statistic `Q = n(n+2) sum_h rho_h^2/(n-h)` with its
/// chi-square(lags) p-value.
pub fn ljung_box(series: &[f64], lags: usize) -> Result<(f64, f64)> {
    let n = series.len();
    if lags < 1 {
        return Err(Error::invalid("need at least one lag"));
    }
    if n <= 2 * lags {
        return Err(Error::invalid(format!("series length {n} too short for {lags} lags")));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let denom: f64 = series.iter().map(|&v| (v - mean).powi(2)).sum();
    if denom <= 0.0 {
        return Err(Error::numerical("zero-variance input"));
    }
    let mut q = 0.0;
    for h in 1..=lags {
        let mut num = 0.0;
        for t in h..n {
            num += (series[t] - mean) * (series[t - h] - mean);
        }
        let rho = num / denom;
        q += rho * rho / (n - h) as f64;
    }
    q *= n as f64 * (n as f64 + 2.0);
    let chi2 = ChiSquared::new(lags as f64).expect("valid dof");
    Ok((q, 1.0 - chi2.cdf(q)))
}

/// Jarque-Bera normality statistic with asymptotic chi-square(2) p-value.
pub fn jarque_bera(series: &[f64]) -> Result<(f64, f64)> {
    crate::timeseries::jb_stat(series)
}
