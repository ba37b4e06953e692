use std::path::PathBuf;

use clap::Args;

use garmex_core::bench::{compare_report, evaluate_pipeline, split, SplitSpec};

use crate::bundle::ModelBundle;
use crate::commands::{write_output, InputArgs};
use crate::config::parse_list;
use crate::failure::{CliFailure, CliResult};
use crate::{provenance, Ctx, VERSION};

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Model bundle(s) to score; repeat the flag to compare several.
    #[arg(long = "bundle", required = true)]
    pub bundles: Vec<PathBuf>,

    /// Observations reserved to initialise the residual filter.
    #[arg(long)]
    pub init_length: Option<usize>,

    /// Fraction of the post-initialisation sample treated as training.
    #[arg(long)]
    pub train_fraction: Option<f64>,

    /// Forecast horizons evaluated on the test segment.
    #[arg(long, default_value = "6,12,24,48,72")]
    pub horizons: String,
}

pub fn run(args: &EvaluateArgs, ctx: &Ctx) -> CliResult<()> {
    let series = args.input.load(ctx)?;
    let horizons: Vec<usize> = parse_list(&args.horizons, "horizon")?;
    if horizons.is_empty() || horizons.contains(&0) {
        return Err(CliFailure::Usage("horizons must be positive integers".into()));
    }
    let spec = SplitSpec {
        init_length: ctx.config.resolve(
            "init_length",
            args.init_length,
            200usize.min(series.len() / 5),
        )?,
        train_fraction: ctx.config.resolve("train_fraction", args.train_fraction, 0.6f64)?,
        horizons: horizons.clone(),
    };
    let split_result = split(&series, &spec)?;
    let (init_end, train_end) = split_result.boundaries;

    let mut reports = Vec::new();
    for path in &args.bundles {
        let bundle = ModelBundle::load(path)?;
        let models = bundle.fitted_models()?;
        if series.step().num_seconds() != bundle.step_seconds {
            return Err(CliFailure::Data(format!(
                "{}: bundle step does not match the series step",
                path.display()
            )));
        }
        reports.push(evaluate_pipeline(&models, &series, init_end, train_end, &horizons)?);
    }

    let table = compare_report(&reports)?;
    let mut csv = provenance::header(
        VERSION,
        ctx.seed,
        &ctx.config_digest,
        &[
            ("input".into(), args.input.input.display().to_string()),
            ("split".into(), format!("init {init_end}, train {}", train_end - init_end)),
        ],
    );
    csv.push_str(&table);
    write_output(ctx, &ctx.out_path("evaluation.csv"), &csv)?;

    let mut summary = format!(
        "split: init {} / train {} / test {}\n",
        init_end,
        train_end - init_end,
        series.len() - train_end
    );
    for report in &reports {
        summary.push_str(&format!("{}\n", report.model_label));
        for (h, row) in &report.mean_rows {
            summary.push_str(&format!(
                "  mean     h={h:>3}: R2 {:+.4}  MAPE {:.3}%  RMSE {:.4e}\n",
                row.r2, row.mape, row.rmse
            ));
        }
        for ((h, row), (_, baseline)) in
            report.variance_rows.iter().zip(&report.variance_baseline_mse)
        {
            summary.push_str(&format!(
                "  variance h={h:>3}: MSE {:.4e} (constant baseline {:.4e})\n",
                row.mse, baseline
            ));
        }
    }
    ctx.say(summary.trim_end());
    Ok(())
}
