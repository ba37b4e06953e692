//! Local-linear wavelet neural network: one hidden layer of wavelet units
//! whose output weights are affine functions of the input,
//! `y = sum_i (w_i0 + w_i1 x_1 + .. + w_ip x_p) * B_i(x)`.
//!
//! Two hidden-unit activations are provided. `MexicanHat` is the product-form
//! wavelet `B_i(x) = |a_i|^{-1/2} prod_j psi((x_j - b_ij)/a_ij)` with
//! `psi(u) = (1 - u^2) e^{-u^2/2}`. `GaussianPaper` is the kernel
//! `B_i(x) = (1/2)||x||^2 exp(-sum_j ((x_j - b_ij)/a_ij)^2)`, the form the
//! backpropagation update equations of the source method are written
//! against (their widths fixed at 1); the two do not coincide, so both are
//! exposed and the choice is recorded on the model.

mod pso;

pub use pso::{pso_train, pso_train_llwnn, pso_train_seeded, PsoConfig, PsoResult};

use rand::Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timeseries::MinMaxScaler;

pub const SCALE_FLOOR: f64 = 1e-6;
/// Variance forecasts are floored here to stay strictly positive.
pub const VARIANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MotherWavelet {
    MexicanHat,
    GaussianPaper,
}

/// Hidden-unit parameters and local-linear output weights.
///
/// `n_hidden` equals `n_inputs` unless explicitly overridden; the override is
/// visible through [`LlwnnModel::hidden_overridden`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlwnnModel {
    pub n_inputs: usize,
    pub n_hidden: usize,
    /// Scale matrix, `n_hidden x n_inputs`, entries > [`SCALE_FLOOR`].
    pub scales: Vec<Vec<f64>>,
    /// Translation matrix, `n_hidden x n_inputs`.
    pub translations: Vec<Vec<f64>>,
    /// Local-linear weights, `n_hidden x (n_inputs + 1)`; column 0 is the
    /// intercept.
    pub weights: Vec<Vec<f64>>,
    pub mother_wavelet: MotherWavelet,
}

impl LlwnnModel {
    pub fn hidden_overridden(&self) -> bool {
        self.n_hidden != self.n_inputs
    }

    pub fn parameter_count(&self) -> usize {
        self.n_hidden * (self.n_inputs + 1) + 2 * self.n_hidden * self.n_inputs
    }

    fn check_shapes(&self) -> Result<()> {
        let m = self.n_hidden;
        let p = self.n_inputs;
        let ok = self.scales.len() == m
            && self.translations.len() == m
            && self.weights.len() == m
            && self.scales.iter().all(|r| r.len() == p)
            && self.translations.iter().all(|r| r.len() == p)
            && self.weights.iter().all(|r| r.len() == p + 1);
        if !ok {
            return Err(Error::invalid("inconsistent LLWNN parameter shapes"));
        }
        if self.scales.iter().flatten().any(|&a| a <= SCALE_FLOOR) {
            return Err(Error::invalid(format!("all scales must exceed {SCALE_FLOOR}")));
        }
        Ok(())
    }
}

/// Initialisation ranges used by [`llwnn_init`]; defaults assume inputs
/// normalized to [0, 1].
#[derive(Debug, Clone)]
pub struct InitRanges {
    pub scale: (f64, f64),
    pub translation: (f64, f64),
    pub weight: (f64, f64),
    /// Override for the hidden-layer width (defaults to the input count).
    pub n_hidden: Option<usize>,
    pub mother_wavelet: MotherWavelet,
}

impl Default for InitRanges {
    fn default() -> Self {
        InitRanges {
            scale: (0.5, 2.0),
            translation: (0.0, 1.0),
            weight: (-0.1, 0.1),
            n_hidden: None,
            mother_wavelet: MotherWavelet::MexicanHat,
        }
    }
}

/// Random initialisation, reproducible for a fixed seed.
pub fn llwnn_init(n_inputs: usize, seed: u64, ranges: &InitRanges) -> Result<LlwnnModel> {
    if n_inputs == 0 {
        return Err(Error::invalid("need at least one input"));
    }
    let n_hidden = ranges.n_hidden.unwrap_or(n_inputs);
    if n_hidden == 0 {
        return Err(Error::invalid("need at least one hidden unit"));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut matrix = |rows: usize, cols: usize, range: (f64, f64)| -> Vec<Vec<f64>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(range.0..range.1)).collect())
            .collect()
    };
    let scales = matrix(n_hidden, n_inputs, ranges.scale);
    let translations = matrix(n_hidden, n_inputs, ranges.translation);
    let weights = matrix(n_hidden, n_inputs + 1, ranges.weight);
    let model = LlwnnModel {
        n_inputs,
        n_hidden,
        scales,
        translations,
        weights,
        mother_wavelet: ranges.mother_wavelet,
    };
    model.check_shapes()?;
    Ok(model)
}

fn mexican_hat(u: f64) -> f64 {
    (1.0 - u * u) * (-0.5 * u * u).exp()
}

/// d/du of the Mexican-hat wavelet: `u (u^2 - 3) e^{-u^2/2}`.
fn mexican_hat_deriv(u: f64) -> f64 {
    u * (u * u - 3.0) * (-0.5 * u * u).exp()
}

/// Activation of hidden unit `i` at input `x`.
fn unit_activation(model: &LlwnnModel, i: usize, x: &[f64]) -> f64 {
    let a = &model.scales[i];
    let b = &model.translations[i];
    match model.mother_wavelet {
        MotherWavelet::MexicanHat => {
            let norm = a.iter().product::<f64>().abs().sqrt().recip();
            let mut prod = 1.0;
            for j in 0..x.len() {
                prod *= mexican_hat((x[j] - b[j]) / a[j]);
            }
            norm * prod
        }
        MotherWavelet::GaussianPaper => {
            let half_norm2 = 0.5 * x.iter().map(|v| v * v).sum::<f64>();
            let expo: f64 = (0..x.len()).map(|j| ((x[j] - b[j]) / a[j]).powi(2)).sum();
            half_norm2 * (-expo).exp()
        }
    }
}

/// Network output for a p-dimensional input.
pub fn llwnn_forward(model: &LlwnnModel, x: &[f64]) -> Result<f64> {
    if x.len() != model.n_inputs {
        return Err(Error::invalid(format!(
            "input dimension {} does not match model inputs {}",
            x.len(),
            model.n_inputs
        )));
    }
    model.check_shapes()?;
    let mut y = 0.0;
    for i in 0..model.n_hidden {
        let w = &model.weights[i];
        let mut local = w[0];
        for j in 0..model.n_inputs {
            local += w[j + 1] * x[j];
        }
        y += local * unit_activation(model, i, x);
    }
    if !y.is_finite() {
        return Err(Error::numerical("non-finite network output"));
    }
    Ok(y)
}

/// Gradient of the squared-error loss `E = (target - y)^2 / 2` with respect
/// to every trainable parameter, plus the forward value.
#[derive(Debug, Clone)]
pub struct LossGradient {
    pub output: f64,
    pub error: f64,
    /// dE/dw, `n_hidden x (n_inputs + 1)`.
    pub d_weights: Vec<Vec<f64>>,
    /// dE/da, `n_hidden x n_inputs`.
    pub d_scales: Vec<Vec<f64>>,
    /// dE/db, `n_hidden x n_inputs`.
    pub d_translations: Vec<Vec<f64>>,
}

pub fn llwnn_loss_gradient(model: &LlwnnModel, x: &[f64], target: f64) -> Result<LossGradient> {
    let p = model.n_inputs;
    let m = model.n_hidden;
    let y = llwnn_forward(model, x)?;
    let e = target - y;

    let mut d_weights = vec![vec![0.0; p + 1]; m];
    let mut d_scales = vec![vec![0.0; p]; m];
    let mut d_translations = vec![vec![0.0; p]; m];

    for i in 0..m {
        let a = &model.scales[i];
        let b = &model.translations[i];
        let w = &model.weights[i];
        let mut local = w[0];
        for j in 0..p {
            local += w[j + 1] * x[j];
        }
        let activation = unit_activation(model, i, x);

        // dE/dtheta = -e * dy/dtheta
        d_weights[i][0] = -e * activation;
        for j in 0..p {
            d_weights[i][j + 1] = -e * x[j] * activation;
        }

        match model.mother_wavelet {
            MotherWavelet::MexicanHat => {
                let norm = a.iter().product::<f64>().abs().sqrt().recip();
                let psis: Vec<f64> = (0..p).map(|j| mexican_hat((x[j] - b[j]) / a[j])).collect();
                for j in 0..p {
                    let u = (x[j] - b[j]) / a[j];
                    // product of psi over all dimensions except j
                    let mut loo = 1.0;
                    for (l, &psi_l) in psis.iter().enumerate() {
                        if l != j {
                            loo *= psi_l;
                        }
                    }
                    let dpsi = mexican_hat_deriv(u);
                    let dy_db = local * norm * (-dpsi / a[j]) * loo;
                    let dy_da =
                        local * (-activation / (2.0 * a[j]) - (u / a[j]) * norm * dpsi * loo);
                    d_translations[i][j] = -e * dy_db;
                    d_scales[i][j] = -e * dy_da;
                }
            }
            MotherWavelet::GaussianPaper => {
                for j in 0..p {
                    let u = (x[j] - b[j]) / a[j];
                    let dy_db = local * activation * 2.0 * u / a[j];
                    let dy_da = local * activation * 2.0 * u * u / a[j];
                    d_translations[i][j] = -e * dy_db;
                    d_scales[i][j] = -e * dy_da;
                }
            }
        }
    }
    Ok(LossGradient { output: y, error: e, d_weights, d_scales, d_translations })
}

/// Outcome of one backpropagation pass over the dataset.
#[derive(Debug, Clone, Copy)]
pub struct BpEpochReport {
    /// Mean squared error measured before each sample's update.
    pub mse: f64,
    /// Samples skipped because their gradient was non-finite.
    pub skipped: usize,
}

/// One stochastic-gradient pass over the dataset in data order
/// (`theta <- theta - r dE/dtheta` per sample). Scales are clamped away from
/// zero after each update to preserve the positivity invariant.
pub fn bp_epoch(
    model: &LlwnnModel,
    dataset: &[(Vec<f64>, f64)],
    learning_rate: f64,
) -> Result<(LlwnnModel, BpEpochReport)> {
    if dataset.is_empty() {
        return Err(Error::invalid("dataset must be non-empty"));
    }
    if !(learning_rate > 0.0) {
        return Err(Error::invalid("learning rate must be positive"));
    }
    let mut current = model.clone();
    let mut sum_sq = 0.0;
    let mut skipped = 0usize;
    for (x, target) in dataset {
        let grad = llwnn_loss_gradient(&current, x, *target)?;
        sum_sq += grad.error * grad.error;
        let finite = grad.d_weights.iter().flatten().all(|g| g.is_finite())
            && grad.d_scales.iter().flatten().all(|g| g.is_finite())
            && grad.d_translations.iter().flatten().all(|g| g.is_finite());
        if !finite {
            skipped += 1;
            continue;
        }
        for i in 0..current.n_hidden {
            for j in 0..=current.n_inputs {
                current.weights[i][j] -= learning_rate * grad.d_weights[i][j];
            }
            for j in 0..current.n_inputs {
                current.translations[i][j] -= learning_rate * grad.d_translations[i][j];
                current.scales[i][j] =
                    (current.scales[i][j] - learning_rate * grad.d_scales[i][j]).max(SCALE_FLOOR * 2.0);
            }
        }
    }
    let report = BpEpochReport { mse: sum_sq / dataset.len() as f64, skipped };
    Ok((current, report))
}

/// Train by repeated [`bp_epoch`] passes, returning the final model and the
/// per-epoch MSE trace.
pub fn bp_train(
    model: &LlwnnModel,
    dataset: &[(Vec<f64>, f64)],
    learning_rate: f64,
    epochs: usize,
) -> Result<(LlwnnModel, Vec<f64>)> {
    let mut current = model.clone();
    let mut trace = Vec::with_capacity(epochs);
    for _ in 0..epochs {
        let (next, report) = bp_epoch(&current, dataset, learning_rate)?;
        current = next;
        trace.push(report.mse);
    }
    Ok((current, trace))
}

/// Sliding-window samples `(values[t-p..t], values[t])` for one-step-ahead
/// training.
pub fn lag_dataset(values: &[f64], p: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    if values.len() <= p {
        return Err(Error::invalid(format!(
            "need more than {p} observations to build lagged samples"
        )));
    }
    Ok((p..values.len())
        .map(|t| (values[t - p..t].to_vec(), values[t]))
        .collect())
}

/// Iterative variance forecast on the normalized squared-residual scale:
/// each one-step prediction is denormalized, floored at [`VARIANCE_FLOOR`]
/// and fed back as the newest lag.
pub fn llwnn_variance_forecast(
    model: &LlwnnModel,
    scaler: &MinMaxScaler,
    recent_sq_residuals: &[f64],
    horizon: usize,
) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let p = model.n_inputs;
    if recent_sq_residuals.len() < p {
        return Err(Error::invalid(format!(
            "need at least {p} recent squared residuals, got {}",
            recent_sq_residuals.len()
        )));
    }
    let mut window: Vec<f64> = recent_sq_residuals[recent_sq_residuals.len() - p..]
        .iter()
        .map(|&v| scaler.transform(v))
        .collect();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let y = llwnn_forward(model, &window)?;
        let sigma2 = scaler.inverse(y).max(VARIANCE_FLOOR);
        out.push(sigma2);
        window.remove(0);
        window.push(scaler.transform(sigma2));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;

    fn tiny_model(wavelet: MotherWavelet) -> LlwnnModel {
        LlwnnModel {
            n_inputs: 1,
            n_hidden: 1,
            scales: vec![vec![1.0]],
            translations: vec![vec![0.0]],
            weights: vec![vec![0.0, 1.0]],
            mother_wavelet: wavelet,
        }
    }

    #[test]
    fn init_is_deterministic_and_in_range() {
        let ranges = InitRanges::default();
        let a = llwnn_init(10, 7, &ranges).unwrap();
        let b = llwnn_init(10, 7, &ranges).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n_hidden, 10);
        assert!(!a.hidden_overridden());
        for row in &a.scales {
            for &s in row {
                assert!((0.5..2.0).contains(&s));
            }
        }
        for row in &a.weights {
            for &w in row {
                assert!((-0.1..0.1).contains(&w));
            }
        }
    }

    #[test]
    fn zero_weights_give_zero_output() {
        let mut model = llwnn_init(4, 3, &InitRanges::default()).unwrap();
        for row in &mut model.weights {
            row.iter_mut().for_each(|w| *w = 0.0);
        }
        let y = llwnn_forward(&model, &[0.2, 0.4, 0.6, 0.8]).unwrap();
        assert_eq!(y, 0.0);
    }

    #[test]
    fn scalar_mexican_hat_hand_values() {
        let model = tiny_model(MotherWavelet::MexicanHat);
        // y(x) = x (1 - x^2) e^{-x^2/2}
        assert_eq!(llwnn_forward(&model, &[0.0]).unwrap(), 0.0);
        assert_relative_eq!(llwnn_forward(&model, &[1.0]).unwrap(), 0.0, epsilon = 1e-15);
        let y = llwnn_forward(&model, &[0.5]).unwrap();
        assert_relative_eq!(y, 0.5 * 0.75 * (-0.125f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn output_is_additive_over_hidden_units() {
        let joint = llwnn_init(3, 11, &InitRanges { n_hidden: Some(4), ..Default::default() })
            .unwrap();
        let x = [0.3, 0.6, 0.9];
        let total = llwnn_forward(&joint, &x).unwrap();
        let mut by_parts = 0.0;
        for i in 0..4 {
            let single = LlwnnModel {
                n_inputs: 3,
                n_hidden: 1,
                scales: vec![joint.scales[i].clone()],
                translations: vec![joint.translations[i].clone()],
                weights: vec![joint.weights[i].clone()],
                mother_wavelet: joint.mother_wavelet,
            };
            by_parts += llwnn_forward(&single, &x).unwrap();
        }
        assert_relative_eq!(total, by_parts, epsilon = 1e-12);
    }

    #[test]
    fn forward_is_homogeneous_in_weights() {
        let mut model = llwnn_init(5, 2, &InitRanges::default()).unwrap();
        let x = [0.1, 0.9, 0.4, 0.5, 0.7];
        let y = llwnn_forward(&model, &x).unwrap();
        for row in &mut model.weights {
            row.iter_mut().for_each(|w| *w *= 3.0);
        }
        let y3 = llwnn_forward(&model, &x).unwrap();
        assert_relative_eq!(y3, 3.0 * y, epsilon = 1e-12);
    }

    #[test]
    fn forward_rejects_dimension_mismatch() {
        let model = llwnn_init(3, 1, &InitRanges::default()).unwrap();
        assert!(llwnn_forward(&model, &[0.1, 0.2]).is_err());
    }

    #[test]
    fn zero_error_means_zero_gradient() {
        let model = tiny_model(MotherWavelet::MexicanHat);
        let x = [0.5];
        let y = llwnn_forward(&model, &x).unwrap();
        let grad = llwnn_loss_gradient(&model, &x, y).unwrap();
        assert_eq!(grad.error, 0.0);
        assert!(grad.d_weights.iter().flatten().all(|&g| g == 0.0));
        assert!(grad.d_scales.iter().flatten().all(|&g| g == 0.0));
        assert!(grad.d_translations.iter().flatten().all(|&g| g == 0.0));
        let (updated, report) = bp_epoch(&model, &[(x.to_vec(), y)], 0.5).unwrap();
        assert_eq!(updated, model);
        assert_eq!(report.mse, 0.0);
    }

    /// Central finite differences of the loss, matched against the analytic
    /// gradient entry by entry.
    fn check_gradients(wavelet: MotherWavelet, seed: u64) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let p = rng.gen_range(1..5);
            let mut model = llwnn_init(p, rng.gen(), &InitRanges::default()).unwrap();
            model.mother_wavelet = wavelet;
            let x: Vec<f64> = (0..p).map(|_| rng.gen_range(0.0..1.0)).collect();
            let target: f64 = rng.gen_range(-1.0..1.0);
            let analytic = llwnn_loss_gradient(&model, &x, target).unwrap();

            let h = 1e-6;
            let mut check = |get: &dyn Fn(&LlwnnModel) -> f64,
                             set: &dyn Fn(&mut LlwnnModel, f64),
                             expected: f64| {
                let base = get(&model);
                let mut plus = model.clone();
                set(&mut plus, base + h);
                let mut minus = model.clone();
                set(&mut minus, base - h);
                let loss = |m: &LlwnnModel| {
                    let e = target - llwnn_forward(m, &x).unwrap();
                    0.5 * e * e
                };
                let fd = (loss(&plus) - loss(&minus)) / (2.0 * h);
                let denom = expected.abs().max(fd.abs()).max(1e-3);
                assert!(
                    (expected - fd).abs() <= 1e-4 * denom,
                    "{wavelet:?}: analytic {expected} vs fd {fd}"
                );
            };

            for i in 0..model.n_hidden {
                for j in 0..=p {
                    check(
                        &|m| m.weights[i][j],
                        &|m, v| m.weights[i][j] = v,
                        analytic.d_weights[i][j],
                    );
                }
                for j in 0..p {
                    check(&|m| m.scales[i][j], &|m, v| m.scales[i][j] = v, analytic.d_scales[i][j]);
                    check(
                        &|m| m.translations[i][j],
                        &|m, v| m.translations[i][j] = v,
                        analytic.d_translations[i][j],
                    );
                }
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences_mexican_hat() {
        check_gradients(MotherWavelet::MexicanHat, 101);
    }

    #[test]
    fn gradients_match_finite_differences_gaussian_paper() {
        check_gradients(MotherWavelet::GaussianPaper, 202);
    }

    #[test]
    fn bp_training_reduces_mse_on_quadratic_target() {
        let dataset: Vec<(Vec<f64>, f64)> = (0..64)
            .map(|i| {
                let x = i as f64 / 63.0;
                (vec![x], x * x)
            })
            .collect();
        let model = llwnn_init(1, 5, &InitRanges { n_hidden: Some(4), ..Default::default() })
            .unwrap();
        let (_, trace) = bp_train(&model, &dataset, 0.5, 200).unwrap();
        let initial = trace[0];
        let last = *trace.last().unwrap();
        assert!(last < 0.1 * initial, "initial {initial}, final {last}");
    }

    #[test]
    fn bp_is_deterministic() {
        let dataset: Vec<(Vec<f64>, f64)> =
            (0..32).map(|i| (vec![i as f64 / 31.0], (i as f64 / 31.0).sin())).collect();
        let model = llwnn_init(1, 9, &InitRanges::default()).unwrap();
        let (a, _) = bp_train(&model, &dataset, 0.3, 50).unwrap();
        let (b, _) = bp_train(&model, &dataset, 0.3, 50).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn variance_forecast_zero_weights_is_floored_constant() {
        let mut model = llwnn_init(3, 2, &InitRanges::default()).unwrap();
        for row in &mut model.weights {
            row.iter_mut().for_each(|w| *w = 0.0);
        }
        let scaler = MinMaxScaler { y_min: 0.002, y_max: 0.01 };
        let f = llwnn_variance_forecast(&model, &scaler, &[0.004, 0.006, 0.008], 5).unwrap();
        for &v in &f {
            assert_relative_eq!(v, 0.002, epsilon = 1e-15); // denormalize(0) = y_min
        }
    }

    #[test]
    fn variance_forecast_first_step_matches_forward() {
        let model = llwnn_init(2, 13, &InitRanges::default()).unwrap();
        let scaler = MinMaxScaler { y_min: 0.0, y_max: 2.0 };
        let recent = [0.5, 1.5];
        let f = llwnn_variance_forecast(&model, &scaler, &recent, 1).unwrap();
        let x: Vec<f64> = recent.iter().map(|&v| scaler.transform(v)).collect();
        let direct = scaler.inverse(llwnn_forward(&model, &x).unwrap()).max(VARIANCE_FLOOR);
        assert_eq!(f[0], direct);
    }

    #[test]
    fn lag_dataset_shapes() {
        let data = [1.0, 2.0, 3.0, 4.0, 5.0];
        let samples = lag_dataset(&data, 2).unwrap();
        assert_eq!(samples.len(), 3);
        assert_eq!(samples[0], (vec![1.0, 2.0], 3.0));
        assert_eq!(samples[2], (vec![3.0, 4.0], 5.0));
        assert!(lag_dataset(&data, 5).is_err());
    }
}
