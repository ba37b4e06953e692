use std::path::PathBuf;

use clap::{Args, ValueEnum};

use garmex_core::bench::{fit_pipeline, MeanSpec, VarianceModel, VarianceSpec};
use garmex_core::ggarch::GgarchFitConfig;
use garmex_core::llwnn::PsoConfig;
use garmex_core::wavelet::WhittleConfig;

use crate::bundle::{LlwnnBundle, ModelBundle, Provenance, SCHEMA_VERSION};
use crate::commands::InputArgs;
use crate::config::parse_list;
use crate::failure::{CliFailure, CliResult};
use crate::{provenance, Ctx, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VarianceKind {
    Ggarch,
    LlwnnBp,
    LlwnnPso,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Number of Gegenbauer factors in the conditional mean.
    #[arg(long = "mean-k", default_value_t = 1)]
    pub mean_k: usize,

    /// Gegenbauer frequencies in cycles/sample, or `auto` to detect them
    /// from periodogram peaks.
    #[arg(long, default_value = "auto")]
    pub freqs: String,

    /// Conditional-variance model.
    #[arg(long, value_enum, default_value_t = VarianceKind::Ggarch)]
    pub variance: VarianceKind,

    /// Number of Gegenbauer factors in the variance filter (ggarch only).
    #[arg(long = "variance-k", default_value_t = 1)]
    pub variance_k: usize,

    /// Variance-side frequencies, or `auto`.
    #[arg(long, default_value = "auto")]
    pub variance_freqs: String,

    /// Output path for the model bundle (default: <out-dir>/model.toml).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// AR order of the mean model.
    #[arg(long)]
    pub ar_order: Option<usize>,

    /// MA order of the mean model.
    #[arg(long)]
    pub ma_order: Option<usize>,

    /// Re-estimate the Gegenbauer frequencies jointly after detection.
    #[arg(long)]
    pub refine_freqs: bool,
}

fn parse_freqs(text: &str) -> CliResult<Option<Vec<f64>>> {
    if text.trim().eq_ignore_ascii_case("auto") {
        return Ok(None);
    }
    let freqs: Vec<f64> = parse_list(text, "frequency")?;
    for &f in &freqs {
        if !(0.0..=0.5).contains(&f) {
            return Err(CliFailure::Usage(format!(
                "frequency {f} outside [0, 0.5] cycles/sample"
            )));
        }
    }
    Ok(Some(freqs))
}

pub struct StageSpecs {
    pub mean: MeanSpec,
    pub variance: VarianceSpec,
    pub init_length: usize,
}

/// Resolve the two stage configurations from flags + config file.
pub fn build_specs(args: &FitArgs, ctx: &Ctx, series_len: usize) -> CliResult<StageSpecs> {
    let cfg = &ctx.config;
    let whittle = WhittleConfig {
        daubechies_order: cfg.resolve("daubechies_order", None, 4usize)?,
        alpha: cfg.resolve("alpha", None, 0.05f64)?,
        max_depth: None,
        ar_order: cfg.resolve("ar_order", args.ar_order, 0usize)?,
        ma_order: cfg.resolve("ma_order", args.ma_order, 0usize)?,
        refine_frequencies: args.refine_freqs
            || cfg.resolve("refine_frequencies", None, false)?,
        quadrature_points: cfg.resolve("quadrature_points", None, 32usize)?,
        restarts: cfg.resolve("restarts", None, 5usize)?,
        max_iterations: cfg.resolve("max_iterations", None, 400usize)?,
        seed: 0, // overwritten inside fit_pipeline from the master seed
    };
    let mean = MeanSpec {
        k: args.mean_k,
        frequencies: parse_freqs(&args.freqs)?,
        whittle,
        truncation: cfg.resolve("truncation", None, 2000usize)?,
    };
    let variance = match args.variance {
        VarianceKind::Ggarch => VarianceSpec::GGarch {
            k: args.variance_k,
            frequencies: parse_freqs(&args.variance_freqs)?,
            config: GgarchFitConfig {
                p: cfg.resolve("ggarch_p", None, 1usize)?,
                q: cfg.resolve("ggarch_q", None, 1usize)?,
                truncation: cfg.resolve("ggarch_truncation", None, 1000usize)?,
                restarts: cfg.resolve("restarts", None, 5usize)?,
                max_iterations: cfg.resolve("max_iterations", None, 400usize)?,
                seed: 0,
            },
        },
        VarianceKind::LlwnnBp => VarianceSpec::LlwnnBp {
            lags: cfg.resolve("llwnn_lags", None, 10usize)?,
            epochs: cfg.resolve("llwnn_epochs", None, 200usize)?,
            learning_rate: cfg.resolve("learning_rate", None, 0.5f64)?,
        },
        VarianceKind::LlwnnPso => VarianceSpec::LlwnnPso {
            lags: cfg.resolve("llwnn_lags", None, 10usize)?,
            config: PsoConfig {
                n_particles: cfg.resolve("pso_particles", None, 20usize)?,
                inertia: cfg.resolve("pso_inertia", None, 0.7f64)?,
                cognitive: cfg.resolve("pso_cognitive", None, 1.5f64)?,
                social: cfg.resolve("pso_social", None, 1.5f64)?,
                max_iterations: cfg.resolve("pso_iterations", None, 500usize)?,
                velocity_clamp: cfg.resolve("pso_velocity_clamp", None, 0.5f64)?,
                seed: 0,
                loc_best: cfg.resolve("loc_best", None, 0usize).map(|v| if v == 0 { None } else { Some(v) })?,
            },
        },
    };
    // the initialisation window warms up the residual filter; clamp it for
    // short inputs so training still has data
    let init_default = 200usize.min(series_len / 5);
    let init_length = cfg.resolve("init_length", None, init_default)?.min(series_len / 2);
    Ok(StageSpecs { mean, variance, init_length })
}

pub fn run(args: &FitArgs, ctx: &Ctx) -> CliResult<()> {
    let series = args.input.load(ctx)?;
    let specs = build_specs(args, ctx, series.len())?;

    let fit = fit_pipeline(
        &series,
        &specs.mean,
        &specs.variance,
        specs.init_length,
        series.len(),
        ctx.seed,
    )?;

    let out_path = args.out.clone().unwrap_or_else(|| ctx.out_path("model.toml"));
    let (ggarch, llwnn) = match &fit.models.variance {
        VarianceModel::GGarch(m) => (Some(m.clone()), None),
        VarianceModel::Llwnn { model, scaler } => {
            (None, Some(LlwnnBundle { model: model.clone(), scaler: *scaler }))
        }
    };
    let bundle = ModelBundle {
        schema_version: SCHEMA_VERSION,
        label: fit.models.label.clone(),
        step_seconds: series.step().num_seconds(),
        truncation: fit.models.truncation,
        provenance: Provenance {
            tool_version: VERSION.into(),
            input_digest: args.input.digest()?,
            seed: ctx.seed.to_string(),
            created: provenance::timestamp(),
            config_digest: ctx.config_digest.clone(),
            config: ctx.config.raw().clone(),
        },
        garma: Some(fit.models.garma.clone()),
        ggarch,
        llwnn,
    };
    bundle.save(&out_path)?;
    ctx.say(format!("wrote {}", out_path.display()));

    // fit report: frequencies with periods, memory exponents, stage summary
    let garma = &fit.models.garma;
    let step_hours = series.step().num_seconds() as f64 / 3600.0;
    let mut report = String::new();
    report.push_str(&format!(
        "mean model: {} factor(s), mu = {:+.6e}, sigma2 = {:.6e}\n",
        garma.factors.len(),
        garma.mu,
        garma.sigma2
    ));
    for (i, f) in garma.factors.iter().enumerate() {
        let cycles = f.cycles();
        report.push_str(&format!(
            "  lambda_{} = {:.4} cycles/sample (period {:.2} samples = {:.2} h), d_{} = {:.4}\n",
            i + 1,
            cycles,
            f.period(),
            f.period() * step_hours,
            i + 1,
            f.d
        ));
    }
    if !garma.ar.is_empty() {
        report.push_str(&format!("  ar = {:?}\n", garma.ar));
    }
    if !garma.ma.is_empty() {
        report.push_str(&format!("  ma = {:?}\n", garma.ma));
    }
    if fit.mean_report.usable_length < fit.mean_report.input_length {
        report.push_str(&format!(
            "  (estimated on the dyadic prefix: {} of {} observations)\n",
            fit.mean_report.usable_length, fit.mean_report.input_length
        ));
    }
    report.push_str(&format!("variance model: {}\n", fit.models.label));
    if let Some(grep) = &fit.ggarch_report {
        for p in &grep.parameters {
            report.push_str(&format!(
                "  {} = {:+.4}{}\n",
                p.name,
                p.estimate,
                if p.hit_bound { " (at bound)" } else { "" }
            ));
        }
        report.push_str(&format!(
            "  log-likelihood = {:.3}, converged = {}\n",
            grep.log_likelihood, grep.converged
        ));
    }
    for w in fit
        .mean_report
        .warnings
        .iter()
        .chain(fit.ggarch_report.iter().flat_map(|r| r.warnings.iter()))
    {
        report.push_str(&format!("  note: {w}\n"));
    }
    ctx.say(report.trim_end());
    Ok(())
}
