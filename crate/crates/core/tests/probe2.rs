// scratch calibration probes; removed before final delivery
use std::f64::consts::PI;

use garmex_core::derive_seed;
use garmex_core::diagnostics::{ljung_box, periodogram};
use garmex_core::gegenbauer::{
    garma_mean_forecast, garma_residuals, simulate_garma, GarmaModel, GegenbauerFactor,
};
use garmex_core::llwnn::{
    bp_train, lag_dataset, llwnn_init, pso_train, pso_train_llwnn, InitRanges, PsoConfig,
};
use garmex_core::timeseries::normalize;
use garmex_core::wavelet::{best_basis, daubechies_filters, dwpt};
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

#[test]
#[ignore]
fn probe_pso_sphere() {
    let t0 = std::time::Instant::now();
    let wins: usize = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let config = PsoConfig { max_iterations: 500, seed, ..Default::default() };
            let sphere = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
            let r = pso_train(sphere, &[-5.0; 10], &[5.0; 10], &config).unwrap();
            usize::from(r.best_value <= 1e-3)
        })
        .sum();
    println!("pso sphere10: {wins}/100 reach 1e-3, elapsed {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn probe_best_basis_pole_split() {
    let t0 = std::time::Instant::now();
    let model = GarmaModel {
        mu: 0.0,
        ar: vec![],
        ma: vec![],
        factors: vec![GegenbauerFactor::from_angular(0.4, PI / 2.0).unwrap()],
        sigma2: 1.0,
    };
    let filters = daubechies_filters(4).unwrap();
    let splits: usize = (0..100u64)
        .into_par_iter()
        .map(|rep| {
            let sim = simulate_garma(&model, 1024, 2000, derive_seed(9001, rep)).unwrap();
            let tree = dwpt(sim.values(), &filters, 5).unwrap();
            let sel = best_basis(&tree, 0.05).unwrap();
            // pole at f = 0.25: the level-1 node (1, 0) covers [0, 0.25] and
            // (1, 1) covers [0.25, 0.5]; "split at least once" = no leaf at
            // level <= 1 whose band contains 0.25
            let split = sel
                .basis
                .nodes()
                .iter()
                .all(|&(j, n)| {
                    let lo = n as f64 / (1u64 << (j + 1)) as f64;
                    let hi = (n + 1) as f64 / (1u64 << (j + 1)) as f64;
                    !(lo < 0.25 && 0.25 < hi) || j >= 2
                });
            usize::from(split)
        })
        .sum();
    println!("pole-band split in {splits}/100 runs, elapsed {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn probe_simulation_peak_location() {
    let t0 = std::time::Instant::now();
    let model = GarmaModel {
        mu: 0.0,
        ar: vec![],
        ma: vec![],
        factors: vec![GegenbauerFactor::from_angular(0.35, PI / 5.0).unwrap()],
        sigma2: 1.0,
    };
    let hits: usize = (0..100u64)
        .into_par_iter()
        .map(|rep| {
            let sim = simulate_garma(&model, 8192, 2000, derive_seed(9101, rep)).unwrap();
            let (freqs, ords) = periodogram(sim.values()).unwrap();
            let argmax = ords
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            let target = 0.1; // pi/5 in cycles/sample
            usize::from((freqs[argmax] - target).abs() <= 3.0 / 8192.0 + 1e-12)
        })
        .sum();
    println!("periodogram peak within 3 bins in {hits}/100 runs, elapsed {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn probe_whiteness_of_degenerate_simulation() {
    let t0 = std::time::Instant::now();
    let model = GarmaModel {
        mu: 0.0,
        ar: vec![],
        ma: vec![],
        factors: vec![GegenbauerFactor { d: 0.0, nu: 0.5 }],
        sigma2: 1.0,
    };
    let ok: usize = (0..100u64)
        .into_par_iter()
        .map(|rep| {
            let sim = simulate_garma(&model, 512, 64, derive_seed(9201, rep)).unwrap();
            let (_, p) = ljung_box(sim.values(), 20).unwrap();
            usize::from(p > 0.01)
        })
        .sum();
    println!("whiteness pass in {ok}/100 runs, elapsed {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn probe_residual_round_trip() {
    let t0 = std::time::Instant::now();
    let model = GarmaModel {
        mu: 0.5,
        ar: vec![0.2],
        ma: vec![],
        factors: vec![GegenbauerFactor::from_cycles(0.3, 0.15).unwrap()],
        sigma2: 2.0,
    };
    let mut ratios = Vec::new();
    for rep in 0..5u64 {
        let sim = simulate_garma(&model, 4096, 2000, derive_seed(9301, rep)).unwrap();
        let res = garma_residuals(&model, &sim, 2000).unwrap();
        let v = res.series.values();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|&e| (e - mean).powi(2)).sum::<f64>() / v.len() as f64;
        ratios.push(var / model.sigma2);
    }
    println!("residual variance ratios {ratios:?}, elapsed {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn probe_forecast_mse_monotone() {
    let t0 = std::time::Instant::now();
    let model = GarmaModel {
        mu: 0.0,
        ar: vec![0.3],
        ma: vec![],
        factors: vec![GegenbauerFactor::from_cycles(0.25, 0.1).unwrap()],
        sigma2: 1.0,
    };
    let horizons = [1usize, 2, 3, 12];
    let max_h = 12;
    let reps = 50u64;
    let totals: Vec<(Vec<f64>, usize)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let sim = simulate_garma(&model, 2048, 2000, derive_seed(9401, rep)).unwrap();
            let mut sums = vec![0.0; horizons.len()];
            let mut count = 0;
            let mut origin = 1024;
            while origin + max_h <= 2048 {
                let history = sim.segment(0, origin).unwrap();
                let forecast = garma_mean_forecast(&model, &history, max_h, 1000).unwrap();
                for (i, &h) in horizons.iter().enumerate() {
                    sums[i] += (sim.values()[origin + h - 1] - forecast[h - 1]).powi(2);
                }
                count += 1;
                origin += 16;
            }
            (sums, count)
        })
        .collect();
    let total_count: usize = totals.iter().map(|t| t.1).sum();
    let mut mse = vec![0.0; horizons.len()];
    for (sums, _) in &totals {
        for (i, s) in sums.iter().enumerate() {
            mse[i] += s;
        }
    }
    for v in &mut mse {
        *v /= total_count as f64;
    }
    println!("forecast mse by horizon {mse:?} over {total_count} origins, elapsed {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn probe_llwnn_beats_constant_on_arch() {
    let t0 = std::time::Instant::now();
    let outcomes: Vec<(f64, f64)> = (0..20u64)
        .into_par_iter()
        .map(|rep| {
            // ARCH(1): s2_t = 0.2 + 0.7 e2_{t-1}
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(9501, rep));
            let mut eps2: Vec<f64> = vec![0.2 / (1.0 - 0.7)];
            let mut eps: Vec<f64> = vec![eps2[0].sqrt()];
            for _ in 1..800 {
                let s2 = 0.2 + 0.7 * eps[eps.len() - 1] * eps[eps.len() - 1];
                let z: f64 = StandardNormal.sample(&mut rng);
                eps.push(s2.sqrt() * z);
                eps2.push(s2);
            }
            let squared: Vec<f64> = eps.iter().map(|e| e * e).collect();
            let (normed, _) = normalize(&squared).unwrap();
            let dataset = lag_dataset(&normed, 3).unwrap();
            let template = llwnn_init(3, derive_seed(9502, rep), &InitRanges::default()).unwrap();
            let (trained, trace) = bp_train(&template, &dataset, 0.1, 100).unwrap();
            let _ = trained;
            let final_mse = *trace.last().unwrap();
            let target_mean =
                dataset.iter().map(|(_, t)| *t).sum::<f64>() / dataset.len() as f64;
            let target_var = dataset
                .iter()
                .map(|(_, t)| (t - target_mean).powi(2))
                .sum::<f64>()
                / dataset.len() as f64;
            (final_mse, target_var)
        })
        .collect();
    let wins = outcomes.iter().filter(|(m, v)| m < v).count();
    println!("llwnn beats constant in {wins}/20 runs, elapsed {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn probe_pso_vs_bp_toy() {
    let t0 = std::time::Instant::now();
    let dataset: Vec<(Vec<f64>, f64)> = (0..64)
        .map(|i| {
            let x = i as f64 / 63.0;
            (vec![x], x * x)
        })
        .collect();
    let template = llwnn_init(1, 77, &InitRanges::default()).unwrap();
    let (_, bp_trace) = bp_train(&template, &dataset, 0.5, 200).unwrap();
    let pso_cfg = PsoConfig { max_iterations: 640, seed: 77, ..Default::default() };
    let (_, pso_res) = pso_train_llwnn(&template, &dataset, &pso_cfg).unwrap();
    println!(
        "toy task: bp final {:.2e}, pso final {:.2e}, elapsed {:?}",
        bp_trace.last().unwrap(),
        pso_res.best_value,
        t0.elapsed()
    );
}

#[test]
#[ignore]
fn probe_lw_on_squared_ggarch_residuals() {
    use garmex_core::ggarch::{simulate_ggarch, GGarchModel};
    use garmex_core::diagnostics::local_whittle;
    let t0 = std::time::Instant::now();
    let mut truth = GGarchModel::constant(-0.3);
    truth.beta = vec![0.2];
    truth.psi = vec![0.4];
    truth.variance_factors = vec![GegenbauerFactor { d: 0.15, nu: 1.0 }]; // (1-L)^{0.3}
    truth.truncation = 1000;
    let n = 4096usize;
    let m = (n as f64).powf(0.6) as usize;
    let estimates: Vec<f64> = (0..25u64)
        .into_par_iter()
        .map(|rep| {
            let (eps, _) = simulate_ggarch(&truth, n, 2000, derive_seed(9601, rep)).unwrap();
            let squared: Vec<f64> = eps.iter().map(|e| e * e).collect();
            local_whittle(&squared, m).unwrap().d_hat
        })
        .collect();
    let mean_d = estimates.iter().sum::<f64>() / estimates.len() as f64;
    println!("lw on squared ggarch residuals: mean d = {mean_d:.4}, elapsed {:?}", t0.elapsed());
}
