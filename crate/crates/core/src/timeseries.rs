//! Canonical series representation, CSV ingestion, elementary transforms and
//! descriptive statistics.

use std::io::{BufRead, BufReader, Read, Write};

use chrono::{Duration, NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Uniformly sampled real-valued series with a time origin and fixed step.
///
/// Values are guaranteed finite after construction; any transform requires
/// at least two observations.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    start_time: NaiveDateTime,
    step: Duration,
    label: String,
}

impl TimeSeries {
    pub fn new(
        values: Vec<f64>,
        start_time: NaiveDateTime,
        step: Duration,
        label: impl Into<String>,
    ) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid("a series needs at least 2 observations"));
        }
        if step <= Duration::zero() {
            return Err(Error::invalid("step must be a positive duration"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite value at index {i}")));
        }
        Ok(TimeSeries { values, start_time, step, label: label.into() })
    }

    /// Convenience constructor for synthetic data: hourly from 2015-01-01.
    pub fn hourly(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        let origin = NaiveDate::from_ymd_opt(2015, 1, 1)
            .unwrap()
            .and_hms_opt(0, 0, 0)
            .unwrap();
        TimeSeries::new(values, origin, Duration::hours(1), label)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start_time(&self) -> NaiveDateTime {
        self.start_time
    }

    pub fn step(&self) -> Duration {
        self.step
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn time_at(&self, index: usize) -> NaiveDateTime {
        self.start_time + self.step * index as i32
    }

    /// New series sharing this one's time metadata, starting `offset` steps in.
    pub fn derive(&self, values: Vec<f64>, offset: usize, label: impl Into<String>) -> Result<Self> {
        TimeSeries::new(values, self.time_at(offset), self.step, label)
    }

    /// Contiguous sub-series `[from, to)`.
    pub fn segment(&self, from: usize, to: usize) -> Result<Self> {
        if from >= to || to > self.values.len() {
            return Err(Error::invalid(format!(
                "segment [{from}, {to}) out of range for length {}",
                self.values.len()
            )));
        }
        self.derive(self.values[from..to].to_vec(), from, self.label.clone())
    }
}

/// Column mapping and gap policy for CSV ingestion.
#[derive(Debug, Clone)]
pub struct CsvSchema {
    pub timestamp_col: usize,
    pub value_col: usize,
    pub has_header: bool,
    pub forward_fill: bool,
    pub label: String,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            timestamp_col: 0,
            value_col: 1,
            has_header: true,
            forward_fill: false,
            label: "series".to_string(),
        }
    }
}

/// A loaded series plus what ingestion had to do to it.
#[derive(Debug, Clone)]
pub struct LoadedSeries {
    pub series: TimeSeries,
    /// Timestamps that were absent in the input and bridged by forward-fill.
    pub filled_gaps: Vec<NaiveDateTime>,
}

const TIMESTAMP_FORMATS: &[&str] = &[
    "%Y-%m-%dT%H:%M:%S%.f",
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%dT%H",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%d %H:%M",
];

fn parse_timestamp(text: &str) -> Option<NaiveDateTime> {
    let trimmed = text.trim();
    for fmt in TIMESTAMP_FORMATS {
        if let Ok(dt) = NaiveDateTime::parse_from_str(trimmed, fmt) {
            return Some(dt);
        }
    }
    // hour-only stamps ("2015-01-01T00") need an explicit minute for chrono
    if trimmed.len() == 13 && trimmed.as_bytes()[10] == b'T' {
        let padded = format!("{trimmed}:00:00");
        if let Ok(dt) = NaiveDateTime::parse_from_str(&padded, "%Y-%m-%dT%H:%M:%S") {
            return Some(dt);
        }
    }
    NaiveDate::parse_from_str(trimmed, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
}

/// Parse a UTF-8 CSV stream into a uniformly sampled series.
///
/// Timestamps must be ISO-8601 and strictly increasing at a single fixed
/// step. Missing stamps are an error unless `schema.forward_fill` is set, in
/// which case each gap is bridged with the previous value and reported in
/// [`LoadedSeries::filled_gaps`].
pub fn load_csv<R: Read>(reader: R, schema: &CsvSchema) -> Result<LoadedSeries> {
    let buf = BufReader::new(reader);
    let mut rows: Vec<(NaiveDateTime, f64)> = Vec::new();
    let max_col = schema.timestamp_col.max(schema.value_col);
    let mut header_pending = schema.has_header;

    for (line_idx, line) in buf.lines().enumerate() {
        let line = line?;
        let row = line_idx + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        if header_pending {
            header_pending = false;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() <= max_col {
            return Err(Error::Csv {
                row,
                message: format!("expected at least {} columns, found {}", max_col + 1, fields.len()),
            });
        }
        let ts = parse_timestamp(fields[schema.timestamp_col]).ok_or_else(|| Error::Csv {
            row,
            message: format!("unparseable timestamp {:?}", fields[schema.timestamp_col]),
        })?;
        let value: f64 = fields[schema.value_col].trim().parse().map_err(|_| Error::Csv {
            row,
            message: format!("non-numeric value {:?}", fields[schema.value_col]),
        })?;
        if !value.is_finite() {
            return Err(Error::Csv { row, message: format!("non-finite value {value}") });
        }
        rows.push((ts, value));
    }

    if rows.len() < 2 {
        return Err(Error::invalid("need at least 2 data rows"));
    }

    let step = rows[1].0 - rows[0].0;
    if step <= Duration::zero() {
        return Err(Error::invalid("timestamps must be strictly increasing"));
    }

    let mut values = vec![rows[0].1];
    let mut filled = Vec::new();
    for w in rows.windows(2) {
        let (prev_t, prev_v) = w[0];
        let (cur_t, cur_v) = w[1];
        let gap = cur_t - prev_t;
        if gap == step {
            values.push(cur_v);
            continue;
        }
        if gap <= Duration::zero() {
            return Err(Error::invalid(format!("timestamps not increasing at {cur_t}")));
        }
        let missing = prev_t + step;
        if !schema.forward_fill {
            return Err(Error::TimeGap(missing.format("%Y-%m-%dT%H:%M:%S").to_string()));
        }
        // only exact multiples of the step can be bridged
        let ms = gap.num_milliseconds();
        let sms = step.num_milliseconds();
        if ms % sms != 0 {
            return Err(Error::TimeGap(missing.format("%Y-%m-%dT%H:%M:%S").to_string()));
        }
        let mut t = missing;
        while t < cur_t {
            filled.push(t);
            values.push(prev_v);
            t += step;
        }
        values.push(cur_v);
    }

    let series = TimeSeries::new(values, rows[0].0, step, schema.label.clone())?;
    Ok(LoadedSeries { series, filled_gaps: filled })
}

/// Write `timestamp,value` rows with a header; values use the shortest
/// decimal representation that round-trips exactly.
pub fn save_csv<W: Write>(series: &TimeSeries, mut writer: W) -> Result<()> {
    writeln!(writer, "timestamp,value")?;
    for (i, v) in series.values().iter().enumerate() {
        writeln!(writer, "{},{}", series.time_at(i).format("%Y-%m-%dT%H:%M:%S"), v)?;
    }
    Ok(())
}

/// Log-return transform: element t is `ln(p_{t+1}) - ln(p_t)`.
pub fn log_returns(series: &TimeSeries) -> Result<TimeSeries> {
    if let Some(i) = series.values().iter().position(|&v| v <= 0.0) {
        return Err(Error::NonPositive { index: i, value: series.values()[i] });
    }
    let returns: Vec<f64> = series
        .values()
        .windows(2)
        .map(|w| w[1].ln() - w[0].ln())
        .collect();
    series.derive(returns, 1, format!("{} log-returns", series.label()))
}

/// Min-max state captured by [`normalize`]; maps `[y_min, y_max]` onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub y_min: f64,
    pub y_max: f64,
}

impl MinMaxScaler {
    pub fn fit(values: &[f64]) -> Result<Self> {
        let y_min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let y_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(y_max > y_min) {
            return Err(Error::invalid("constant (or empty) input cannot be min-max scaled"));
        }
        Ok(MinMaxScaler { y_min, y_max })
    }

    pub fn transform(&self, y: f64) -> f64 {
        (y - self.y_min) / (self.y_max - self.y_min)
    }

    pub fn inverse(&self, y_norm: f64) -> f64 {
        self.y_min + y_norm * (self.y_max - self.y_min)
    }

    pub fn transform_slice(&self, ys: &[f64]) -> Vec<f64> {
        ys.iter().map(|&y| self.transform(y)).collect()
    }

    pub fn inverse_slice(&self, ys: &[f64]) -> Vec<f64> {
        ys.iter().map(|&y| self.inverse(y)).collect()
    }
}

/// Scale a vector onto `[0, 1]`, returning the scaler for denormalization.
pub fn normalize(values: &[f64]) -> Result<(Vec<f64>, MinMaxScaler)> {
    let scaler = MinMaxScaler::fit(values)?;
    Ok((scaler.transform_slice(values), scaler))
}

/// Moment-based summary statistics with the Jarque-Bera normality test.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StatsSummary {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std_dev: f64,
    pub skewness: f64,
    /// Raw kurtosis by default (normal = 3); see `kurtosis_is_excess`.
    pub kurtosis: f64,
    pub kurtosis_is_excess: bool,
    pub jarque_bera: f64,
    pub jb_p_value: f64,
    pub n: usize,
}

pub(crate) fn central_moments(x: &[f64]) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    (mean, m2 / n, m3 / n, m4 / n)
}

/// Jarque-Bera statistic and asymptotic chi-square(2) p-value.
pub(crate) fn jb_stat(x: &[f64]) -> Result<(f64, f64)> {
    let n = x.len();
    if n < 4 {
        return Err(Error::invalid("Jarque-Bera needs at least 4 observations"));
    }
    let (_, m2, m3, m4) = central_moments(x);
    if m2 <= 0.0 {
        return Err(Error::numerical("zero variance: moments undefined"));
    }
    let skew = m3 / m2.powf(1.5);
    let kurt = m4 / (m2 * m2);
    let jb = n as f64 / 6.0 * (skew * skew + (kurt - 3.0).powi(2) / 4.0);
    let chi2 = ChiSquared::new(2.0).expect("valid dof");
    let p = 1.0 - chi2.cdf(jb);
    Ok((jb, p))
}

/// Descriptive statistics with raw-kurtosis convention.
pub fn describe(series: &TimeSeries) -> Result<StatsSummary> {
    describe_values(series.values(), false)
}

/// As [`describe`] but with an explicit kurtosis convention
/// (`excess = true` reports kurtosis - 3).
pub fn describe_values(x: &[f64], excess: bool) -> Result<StatsSummary> {
    let n = x.len();
    if n < 4 {
        return Err(Error::invalid("describe needs at least 4 observations"));
    }
    let (mean, m2, m3, m4) = central_moments(x);
    if m2 <= 0.0 {
        return Err(Error::numerical("zero variance: moments undefined"));
    }
    let skewness = m3 / m2.powf(1.5);
    let raw_kurt = m4 / (m2 * m2);
    let (jarque_bera, jb_p_value) = jb_stat(x)?;
    let var_sample = m2 * n as f64 / (n as f64 - 1.0);
    Ok(StatsSummary {
        mean,
        std_dev: var_sample.sqrt(),
        skewness,
        kurtosis: if excess { raw_kurt - 3.0 } else { raw_kurt },
        kurtosis_is_excess: excess,
        jarque_bera,
        jb_p_value,
        n,
    })
}
