//! Dataset splitting, end-to-end pipeline orchestration (GARMA mean followed
//! by a G-GARCH or LLWNN variance stage), multi-horizon iterative forecasting
//! and the six out-of-sample evaluation criteria.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gegenbauer::{
    garma_mean_forecast, garma_residuals, long_memory_weights, simulate_garma, GarmaModel,
    WeightKind,
};
use crate::ggarch::{
    fit_ggarch, ggarch_variance_forecast, simulate_ggarch, GGarchModel, GgarchFitConfig,
    GgarchFitReport,
};
use crate::llwnn::{
    bp_train, lag_dataset, llwnn_init, llwnn_variance_forecast, pso_train_llwnn, InitRanges,
    LlwnnModel, PsoConfig,
};
use crate::rng::derive_seed;
use crate::timeseries::{normalize, MinMaxScaler, TimeSeries};
use crate::wavelet::{wavelet_whittle_fit, WhittleConfig, WhittleFitReport};

/// How to carve a series into initialisation, training and test segments.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitSpec {
    pub init_length: usize,
    /// Fraction of the post-initialisation sample used for training.
    pub train_fraction: f64,
    pub horizons: Vec<usize>,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { init_length: 200, train_fraction: 0.6, horizons: vec![6, 12, 24, 48, 72] }
    }
}

#[derive(Debug, Clone)]
pub struct SplitResult {
    pub init: TimeSeries,
    pub train: TimeSeries,
    pub test: TimeSeries,
    /// (end of init, end of train) as indices into the input series.
    pub boundaries: (usize, usize),
}

/// Contiguous, order-preserving three-way split.
pub fn split(series: &TimeSeries, spec: &SplitSpec) -> Result<SplitResult> {
    let n = series.len();
    let max_h = spec.horizons.iter().copied().max().unwrap_or(1);
    if spec.init_length >= n {
        return Err(Error::invalid("init segment does not fit in the series"));
    }
    if !(0.0 < spec.train_fraction && spec.train_fraction < 1.0) {
        return Err(Error::invalid("train fraction must lie in (0, 1)"));
    }
    let remaining = n - spec.init_length;
    let train_len = (remaining as f64 * spec.train_fraction).floor() as usize;
    let train_end = spec.init_length + train_len;
    if train_len < 2 || n - train_end < max_h {
        return Err(Error::invalid(format!(
            "series too short: {n} observations leave {} for testing, need {max_h}",
            n - train_end
        )));
    }
    Ok(SplitResult {
        init: series.segment(0, spec.init_length)?,
        train: series.segment(spec.init_length, train_end)?,
        test: series.segment(train_end, n)?,
        boundaries: (spec.init_length, train_end),
    })
}

/// The six out-of-sample criteria for one (model, horizon) cell.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MetricsRow {
    /// Out-of-sample R^2 against the supplied benchmark forecast.
    pub r2: f64,
    /// Mean absolute percentage error, in percent.
    pub mape: f64,
    /// Logarithmic loss: mean of `ln((predicted/actual)^2)`.
    pub ll: f64,
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    pub n_eval: usize,
    /// Observations excluded from MAPE and LL because `|actual| < 1e-12`.
    pub excluded: usize,
}

/// Evaluate predictions against actuals, with a benchmark forecast for the
/// R^2 denominator. MAPE and LL skip near-zero actuals and report the count.
pub fn evaluate_metrics(actual: &[f64], predicted: &[f64], benchmark: &[f64]) -> Result<MetricsRow> {
    let n = actual.len();
    if n == 0 {
        return Err(Error::invalid("cannot evaluate zero-length forecasts"));
    }
    if predicted.len() != n || benchmark.len() != n {
        return Err(Error::invalid("actual, predicted and benchmark lengths must match"));
    }
    let mut sse = 0.0;
    let mut ssb = 0.0;
    let mut abs_sum = 0.0;
    let mut mape_sum = 0.0;
    let mut ll_sum = 0.0;
    let mut included = 0usize;
    for t in 0..n {
        let err = actual[t] - predicted[t];
        sse += err * err;
        ssb += (actual[t] - benchmark[t]).powi(2);
        abs_sum += err.abs();
        if actual[t].abs() >= 1e-12 {
            included += 1;
            mape_sum += (err / actual[t]).abs() * 100.0;
            ll_sum += (predicted[t] / actual[t]).powi(2).ln();
        }
    }
    if included == 0 {
        return Err(Error::invalid("all actuals are zero: MAPE undefined"));
    }
    let mse = sse / n as f64;
    Ok(MetricsRow {
        r2: if ssb > 0.0 { 1.0 - sse / ssb } else { f64::NAN },
        mape: mape_sum / included as f64,
        ll: ll_sum / included as f64,
        mae: abs_sum / n as f64,
        mse,
        rmse: mse.sqrt(),
        n_eval: n,
        excluded: n - included,
    })
}

/// Mean-model stage configuration.
#[derive(Debug, Clone)]
pub struct MeanSpec {
    pub k: usize,
    /// Gegenbauer frequencies in cycles/sample; detected from the data when
    /// absent.
    pub frequencies: Option<Vec<f64>>,
    pub whittle: WhittleConfig,
    /// Truncation for residual extraction and mean forecasting.
    pub truncation: usize,
}

impl Default for MeanSpec {
    fn default() -> Self {
        MeanSpec { k: 1, frequencies: None, whittle: WhittleConfig::default(), truncation: 2000 }
    }
}

/// Conditional-variance stage configuration.
#[derive(Debug, Clone)]
pub enum VarianceSpec {
    GGarch { k: usize, frequencies: Option<Vec<f64>>, config: GgarchFitConfig },
    LlwnnBp { lags: usize, epochs: usize, learning_rate: f64 },
    LlwnnPso { lags: usize, config: PsoConfig },
}

impl VarianceSpec {
    pub fn label(&self) -> &'static str {
        match self {
            VarianceSpec::GGarch { .. } => "garma-ggarch",
            VarianceSpec::LlwnnBp { .. } => "garma-llwnn-bp",
            VarianceSpec::LlwnnPso { .. } => "garma-llwnn-pso",
        }
    }
}

/// A fitted variance stage.
#[derive(Debug, Clone)]
pub enum VarianceModel {
    GGarch(GGarchModel),
    Llwnn { model: LlwnnModel, scaler: MinMaxScaler },
}

/// The fitted two-stage model, sufficient to forecast and evaluate.
#[derive(Debug, Clone)]
pub struct FittedModels {
    pub garma: GarmaModel,
    pub variance: VarianceModel,
    pub label: String,
    /// Truncation for residual extraction and mean forecasting.
    pub truncation: usize,
}

/// Fit output: the models plus the per-stage reports.
#[derive(Debug, Clone)]
pub struct PipelineFit {
    pub models: FittedModels,
    pub mean_report: WhittleFitReport,
    pub ggarch_report: Option<GgarchFitReport>,
}

/// Fit the two stages: the GARMA mean on the training window
/// `[init_end, train_end)`, then the chosen variance model on the
/// training-part mean residuals (the initialisation segment `[0, init_end)`
/// only warms up the residual filter and the network lags).
pub fn fit_pipeline(
    series: &TimeSeries,
    mean_spec: &MeanSpec,
    variance_spec: &VarianceSpec,
    init_end: usize,
    train_end: usize,
    seed: u64,
) -> Result<PipelineFit> {
    if !(init_end < train_end && train_end <= series.len()) {
        return Err(Error::invalid("invalid fit boundaries"));
    }
    let train = series.segment(init_end, train_end)?;
    let mut whittle = mean_spec.whittle.clone();
    whittle.seed = derive_seed(seed, 0);
    let (garma, mean_report) =
        wavelet_whittle_fit(&train, mean_spec.k, mean_spec.frequencies.as_deref(), &whittle)?;

    let history = series.segment(0, train_end)?;
    let residuals_all = garma_residuals(&garma, &history, mean_spec.truncation)?;
    let residuals_train = residuals_all.series.segment(init_end, train_end)?;

    let variance_seed = derive_seed(seed, 1);
    let (variance, ggarch_report) = match variance_spec {
        VarianceSpec::GGarch { k, frequencies, config } => {
            let mut config = config.clone();
            config.seed = variance_seed;
            let (model, report) = fit_ggarch(&residuals_train, *k, frequencies.as_deref(), &config)?;
            (VarianceModel::GGarch(model), Some(report))
        }
        VarianceSpec::LlwnnBp { lags, epochs, learning_rate } => {
            let squared: Vec<f64> = residuals_train.values().iter().map(|&e| e * e).collect();
            let (normed, scaler) = normalize(&squared)?;
            let dataset = lag_dataset(&normed, *lags)?;
            let template = llwnn_init(*lags, variance_seed, &InitRanges::default())?;
            let (model, _) = bp_train(&template, &dataset, *learning_rate, *epochs)?;
            (VarianceModel::Llwnn { model, scaler }, None)
        }
        VarianceSpec::LlwnnPso { lags, config } => {
            let squared: Vec<f64> = residuals_train.values().iter().map(|&e| e * e).collect();
            let (normed, scaler) = normalize(&squared)?;
            let dataset = lag_dataset(&normed, *lags)?;
            let template = llwnn_init(*lags, variance_seed, &InitRanges::default())?;
            let mut config = config.clone();
            config.seed = derive_seed(seed, 2);
            let (model, _) = pso_train_llwnn(&template, &dataset, &config)?;
            (VarianceModel::Llwnn { model, scaler }, None)
        }
    };

    Ok(PipelineFit {
        models: FittedModels {
            garma,
            variance,
            label: variance_spec.label().to_string(),
            truncation: mean_spec.truncation,
        },
        mean_report,
        ggarch_report,
    })
}

/// Mean and variance forecast paths from the end of `[0, train_end)`.
pub fn pipeline_forecasts(
    models: &FittedModels,
    series: &TimeSeries,
    train_end: usize,
    horizon: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let history = series.segment(0, train_end)?;
    let mean_path = garma_mean_forecast(&models.garma, &history, horizon, models.truncation)?;
    let residual_history = garma_residuals(&models.garma, &history, models.truncation)?.series;
    let variance_path = match &models.variance {
        VarianceModel::GGarch(model) => ggarch_variance_forecast(model, &residual_history, horizon)?,
        VarianceModel::Llwnn { model, scaler } => {
            let squared: Vec<f64> = residual_history.values().iter().map(|&e| e * e).collect();
            llwnn_variance_forecast(model, scaler, &squared, horizon)?
        }
    };
    Ok((mean_path, variance_path))
}

/// Multi-horizon out-of-sample scores for one fitted pipeline.
///
/// Horizon `h` scores the iterated forecast path over the first `h` test
/// steps. The mean layer is scored on the observed series against the
/// expanding historical mean; the variance layer is scored on squared mean
/// residuals (the observable volatility proxy), with the training residual
/// variance kept alongside as the constant baseline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForecastReport {
    pub model_label: String,
    pub horizons: Vec<usize>,
    pub mean_rows: Vec<(usize, MetricsRow)>,
    pub variance_rows: Vec<(usize, MetricsRow)>,
    /// MSE of the constant (training residual variance) predictor against
    /// the same squared-residual targets, per horizon.
    pub variance_baseline_mse: Vec<(usize, f64)>,
}

pub fn evaluate_pipeline(
    models: &FittedModels,
    series: &TimeSeries,
    init_end: usize,
    train_end: usize,
    horizons: &[usize],
) -> Result<ForecastReport> {
    let max_h = horizons.iter().copied().max().unwrap_or(0);
    if max_h == 0 {
        return Err(Error::invalid("need at least one horizon"));
    }
    if series.len() < train_end + max_h {
        return Err(Error::invalid("test segment shorter than the largest horizon"));
    }
    let (mean_path, variance_path) = pipeline_forecasts(models, series, train_end, max_h)?;

    // targets
    let values = series.values();
    let actual_mean: Vec<f64> = values[train_end..train_end + max_h].to_vec();
    let residuals_full = garma_residuals(&models.garma, series, models.truncation)?.series;
    let actual_sq: Vec<f64> =
        residuals_full.values()[train_end..train_end + max_h].iter().map(|&e| e * e).collect();

    // expanding historical means, one per target index
    let mut bench_mean = Vec::with_capacity(max_h);
    let mut run_sum: f64 = values[..train_end].iter().sum();
    let mut run_n = train_end as f64;
    for t in 0..max_h {
        bench_mean.push(run_sum / run_n);
        run_sum += values[train_end + t];
        run_n += 1.0;
    }
    let sq_all: Vec<f64> = residuals_full.values().iter().map(|&e| e * e).collect();
    let mut bench_sq = Vec::with_capacity(max_h);
    let mut sq_sum: f64 = sq_all[init_end..train_end].iter().sum();
    let mut sq_n = (train_end - init_end) as f64;
    for t in 0..max_h {
        bench_sq.push(sq_sum / sq_n);
        sq_sum += sq_all[train_end + t];
        sq_n += 1.0;
    }
    // constant baseline: training residual variance (mean of squares)
    let baseline: f64 =
        sq_all[init_end..train_end].iter().sum::<f64>() / (train_end - init_end) as f64;

    let mut mean_rows = Vec::new();
    let mut variance_rows = Vec::new();
    let mut variance_baseline_mse = Vec::new();
    for &h in horizons {
        mean_rows.push((h, evaluate_metrics(&actual_mean[..h], &mean_path[..h], &bench_mean[..h])?));
        variance_rows
            .push((h, evaluate_metrics(&actual_sq[..h], &variance_path[..h], &bench_sq[..h])?));
        let b_mse = actual_sq[..h].iter().map(|&a| (a - baseline).powi(2)).sum::<f64>() / h as f64;
        variance_baseline_mse.push((h, b_mse));
    }
    Ok(ForecastReport {
        model_label: models.label.clone(),
        horizons: horizons.to_vec(),
        mean_rows,
        variance_rows,
        variance_baseline_mse,
    })
}

/// Fit + evaluate in one call; deterministic given `(inputs, seed)`.
pub fn run_pipeline(
    series: &TimeSeries,
    mean_spec: &MeanSpec,
    variance_spec: &VarianceSpec,
    split_spec: &SplitSpec,
    seed: u64,
) -> Result<(ForecastReport, PipelineFit)> {
    let split_result = split(series, split_spec)?;
    let (init_end, train_end) = split_result.boundaries;
    let fit = fit_pipeline(series, mean_spec, variance_spec, init_end, train_end, seed)?;
    let report = evaluate_pipeline(&fit.models, series, init_end, train_end, &split_spec.horizons)?;
    Ok((report, fit))
}

const CRITERIA: [&str; 6] = ["R2", "MAPE", "LL", "MAE", "MSE", "RMSE"];

fn criterion_value(row: &MetricsRow, criterion: &str) -> f64 {
    match criterion {
        "R2" => row.r2,
        "MAPE" => row.mape,
        "LL" => row.ll,
        "MAE" => row.mae,
        "MSE" => row.mse,
        "RMSE" => row.rmse,
        _ => f64::NAN,
    }
}

/// Comparison matrix across models: one row per (model, layer, criterion),
/// one column per horizon, plus best-model flags per column. Row order is
/// the insertion order of the reports.
pub fn compare_report(reports: &[ForecastReport]) -> Result<String> {
    if reports.is_empty() {
        return Err(Error::invalid("nothing to compare"));
    }
    let horizons = &reports[0].horizons;
    for r in reports {
        if r.horizons != *horizons {
            return Err(Error::invalid("reports have mismatched horizon sets"));
        }
    }
    let mut out = String::from("model,layer,criterion");
    for h in horizons {
        out.push_str(&format!(",h{h}"));
    }
    out.push('\n');

    let layers: [(&str, fn(&ForecastReport) -> &Vec<(usize, MetricsRow)>); 2] =
        [("mean", |r| &r.mean_rows), ("variance", |r| &r.variance_rows)];
    for (layer, rows_of) in layers {
        for report in reports {
            for criterion in CRITERIA {
                out.push_str(&format!("{},{layer},{criterion}", report.model_label));
                for &(_, row) in rows_of(report) {
                    out.push_str(&format!(",{}", criterion_value(&row, criterion)));
                }
                out.push('\n');
            }
        }
        // best flags: max for R2, min for the error criteria
        for criterion in CRITERIA {
            out.push_str(&format!("best,{layer},{criterion}"));
            for (hi, _) in horizons.iter().enumerate() {
                let mut best: Option<(&str, f64)> = None;
                for report in reports {
                    let v = criterion_value(&rows_of(report)[hi].1, criterion);
                    if !v.is_finite() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((_, b)) => {
                            if criterion == "R2" {
                                v > b
                            } else {
                                v < b
                            }
                        }
                    };
                    if better {
                        best = Some((&report.model_label, v));
                    }
                }
                out.push_str(&format!(",{}", best.map(|(l, _)| l).unwrap_or("-")));
            }
            out.push('\n');
        }
    }
    Ok(out)
}

/// Jointly simulate a GARMA mean process driven by G-GARCH innovations;
/// returns the observed series and the true conditional variances.
pub fn simulate_joint(
    mean_model: &GarmaModel,
    variance_model: &GGarchModel,
    n: usize,
    burn_in: usize,
    seed: u64,
) -> Result<(TimeSeries, Vec<f64>)> {
    mean_model.validate()?;
    let trunc = burn_in.max(1);
    let (eps, sigma2) = simulate_ggarch(variance_model, n + trunc, trunc, seed)?;
    let psi = long_memory_weights(
        &mean_model.factors,
        &mean_model.ar,
        &mean_model.ma,
        WeightKind::MaInfinity,
        trunc,
    )?;
    let mut values = Vec::with_capacity(n);
    for t in 0..n {
        let mut acc = 0.0;
        for (j, &w) in psi.iter().enumerate() {
            acc += w * eps[trunc + t - j];
        }
        values.push(mean_model.mu + acc);
    }
    let series = TimeSeries::hourly(values, "joint simulation")?;
    Ok((series, sigma2[trunc..].to_vec()))
}

/// Plain GARMA path with Gaussian innovations (re-export for CLI symmetry
/// with [`simulate_joint`]).
pub fn simulate_mean_only(
    model: &GarmaModel,
    n: usize,
    burn_in: usize,
    seed: u64,
) -> Result<TimeSeries> {
    simulate_garma(model, n, burn_in, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn series_of_len(n: usize) -> TimeSeries {
        let values: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin() + 0.01 * i as f64).collect();
        TimeSeries::hourly(values, "synthetic").unwrap()
    }

    #[test]
    fn split_arithmetic() {
        let series = series_of_len(1000);
        let spec = SplitSpec { init_length: 200, train_fraction: 0.6, horizons: vec![6] };
        let result = split(&series, &spec).unwrap();
        assert_eq!(result.init.len(), 200);
        assert_eq!(result.train.len(), 480);
        assert_eq!(result.test.len(), 320);
        assert_eq!(result.boundaries, (200, 680));
    }

    #[test]
    fn split_segments_partition_the_input() {
        let series = series_of_len(500);
        let spec = SplitSpec { init_length: 100, train_fraction: 0.5, horizons: vec![12] };
        let result = split(&series, &spec).unwrap();
        let mut rebuilt = result.init.values().to_vec();
        rebuilt.extend_from_slice(result.train.values());
        rebuilt.extend_from_slice(result.test.values());
        assert_eq!(rebuilt, series.values());
    }

    #[test]
    fn split_rejects_oversized_init() {
        let series = series_of_len(100);
        let spec = SplitSpec { init_length: 100, train_fraction: 0.5, horizons: vec![6] };
        assert!(split(&series, &spec).is_err());
    }

    #[test]
    fn perfect_forecast_metrics() {
        let row = evaluate_metrics(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(row.r2, 1.0);
        assert_eq!(row.mape, 0.0);
        assert_eq!(row.ll, 0.0);
        assert_eq!(row.mae, 0.0);
        assert_eq!(row.mse, 0.0);
        assert_eq!(row.rmse, 0.0);
        assert_eq!(row.n_eval, 3);
    }

    #[test]
    fn hand_computed_metrics() {
        let row = evaluate_metrics(&[1.0, 2.0], &[2.0, 4.0], &[1.5, 1.5]).unwrap();
        assert_eq!(row.mape, 100.0);
        assert_eq!(row.ll, 4f64.ln());
        assert_eq!(row.mae, 1.5);
        assert_eq!(row.mse, 2.5);
        assert_eq!(row.rmse, 2.5f64.sqrt());
        assert_eq!(row.excluded, 0);
    }

    #[test]
    fn zero_actuals_are_excluded_and_counted() {
        let row = evaluate_metrics(&[0.0, 2.0], &[1.0, 4.0], &[1.0, 1.0]).unwrap();
        assert_eq!(row.excluded, 1);
        assert_eq!(row.mape, 100.0);
        assert!(evaluate_metrics(&[0.0, 0.0], &[1.0, 1.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn metrics_reject_degenerate_inputs() {
        assert!(evaluate_metrics(&[], &[], &[]).is_err());
        assert!(evaluate_metrics(&[1.0], &[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn metrics_scale_behaviour() {
        let actual = [1.0, 2.0, 4.0];
        let predicted = [1.5, 1.0, 5.0];
        let bench = [2.0, 2.0, 2.0];
        let base = evaluate_metrics(&actual, &predicted, &bench).unwrap();
        let c = 7.0;
        let scaled = evaluate_metrics(
            &actual.map(|v| c * v),
            &predicted.map(|v| c * v),
            &bench.map(|v| c * v),
        )
        .unwrap();
        assert_relative_eq!(scaled.mape, base.mape, epsilon = 1e-10);
        assert_relative_eq!(scaled.ll, base.ll, epsilon = 1e-10);
        assert_relative_eq!(scaled.mae, c * base.mae, epsilon = 1e-10);
        assert_relative_eq!(scaled.mse, c * c * base.mse, epsilon = 1e-9);
    }

    #[test]
    fn metrics_permutation_invariant() {
        let base = evaluate_metrics(&[1.0, 2.0, 3.0], &[1.1, 2.2, 2.7], &[2.0, 2.1, 2.2]).unwrap();
        let permuted =
            evaluate_metrics(&[3.0, 1.0, 2.0], &[2.7, 1.1, 2.2], &[2.2, 2.0, 2.1]).unwrap();
        assert_relative_eq!(base.r2, permuted.r2, epsilon = 1e-12);
        assert_relative_eq!(base.mape, permuted.mape, epsilon = 1e-12);
        assert_relative_eq!(base.mse, permuted.mse, epsilon = 1e-12);
    }

    #[test]
    fn compare_report_single_and_dominance() {
        let row_good = MetricsRow {
            r2: 0.9,
            mape: 1.0,
            ll: 0.1,
            mae: 0.1,
            mse: 0.01,
            rmse: 0.1,
            n_eval: 6,
            excluded: 0,
        };
        let row_bad =
            MetricsRow { r2: 0.5, mape: 5.0, ll: 0.5, mae: 0.5, mse: 0.25, rmse: 0.5, ..row_good };
        let a = ForecastReport {
            model_label: "alpha".into(),
            horizons: vec![6, 12],
            mean_rows: vec![(6, row_good), (12, row_good)],
            variance_rows: vec![(6, row_good), (12, row_good)],
            variance_baseline_mse: vec![(6, 1.0), (12, 1.0)],
        };
        let mut b = a.clone();
        b.model_label = "beta".into();
        b.mean_rows = vec![(6, row_bad), (12, row_bad)];
        b.variance_rows = vec![(6, row_bad), (12, row_bad)];

        let single = compare_report(&[a.clone()]).unwrap();
        assert!(single.contains("alpha,mean,R2,0.9,0.9"));

        let table = compare_report(&[a, b]).unwrap();
        for line in table.lines().filter(|l| l.starts_with("best,")) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[3], "alpha", "line: {line}");
            assert_eq!(fields[4], "alpha", "line: {line}");
        }
    }

    #[test]
    fn compare_report_rejects_mismatched_horizons() {
        let row = MetricsRow {
            r2: 0.0,
            mape: 0.0,
            ll: 0.0,
            mae: 0.0,
            mse: 0.0,
            rmse: 0.0,
            n_eval: 1,
            excluded: 0,
        };
        let a = ForecastReport {
            model_label: "a".into(),
            horizons: vec![6],
            mean_rows: vec![(6, row)],
            variance_rows: vec![(6, row)],
            variance_baseline_mse: vec![(6, 0.0)],
        };
        let mut b = a.clone();
        b.horizons = vec![12];
        b.mean_rows = vec![(12, row)];
        b.variance_rows = vec![(12, row)];
        assert!(compare_report(&[a, b]).is_err());
    }

    #[test]
    fn joint_simulation_is_deterministic() {
        let mean = GarmaModel::new(
            0.0,
            vec![],
            vec![],
            vec![crate::gegenbauer::GegenbauerFactor::new(0.2, 0.5).unwrap()],
            1.0,
        )
        .unwrap();
        let mut var = GGarchModel::constant(-0.5);
        var.beta = vec![0.3];
        var.psi = vec![0.6];
        let (a, sa) = simulate_joint(&mean, &var, 64, 128, 9).unwrap();
        let (b, sb) = simulate_joint(&mean, &var, 64, 128, 9).unwrap();
        assert_eq!(a.values(), b.values());
        assert_eq!(sa, sb);
        assert!(sa.iter().all(|&s| s > 0.0));
    }
}
