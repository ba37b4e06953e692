use std::path::PathBuf;

use clap::Args;

use garmex_core::bench::pipeline_forecasts;

use crate::bundle::ModelBundle;
use crate::commands::{write_output, InputArgs};
use crate::config::parse_list;
use crate::failure::{CliFailure, CliResult};
use crate::{provenance, Ctx, VERSION};

#[derive(Debug, Args)]
pub struct ForecastArgs {
    /// Model bundle produced by `fit`.
    pub bundle: PathBuf,

    #[command(flatten)]
    pub input: InputArgs,

    /// Forecast horizons in steps ahead of the last observation.
    #[arg(long, default_value = "6,12,24,48,72")]
    pub horizons: String,
}

pub fn run(args: &ForecastArgs, ctx: &Ctx) -> CliResult<()> {
    let bundle = ModelBundle::load(&args.bundle)?;
    let models = bundle.fitted_models()?;
    let series = args.input.load(ctx)?;
    if series.step().num_seconds() != bundle.step_seconds {
        return Err(CliFailure::Data(format!(
            "series step ({} s) does not match the bundle's training step ({} s)",
            series.step().num_seconds(),
            bundle.step_seconds
        )));
    }
    let horizons: Vec<usize> = parse_list(&args.horizons, "horizon")?;
    if horizons.is_empty() || horizons.contains(&0) {
        return Err(CliFailure::Usage("horizons must be positive integers".into()));
    }
    let max_h = *horizons.iter().max().unwrap();

    let (mean_path, variance_path) = pipeline_forecasts(&models, &series, series.len(), max_h)?;

    let mut csv = provenance::header(
        VERSION,
        ctx.seed,
        &ctx.config_digest,
        &[
            ("bundle".into(), args.bundle.display().to_string()),
            ("model".into(), bundle.label.clone()),
            ("horizons".into(), args.horizons.clone()),
        ],
    );
    csv.push_str("horizon,timestamp,mean_forecast,variance_forecast\n");
    let last_index = series.len() - 1;
    for &h in &horizons {
        let stamp = series.time_at(last_index + h).format("%Y-%m-%dT%H:%M:%S");
        csv.push_str(&format!("{h},{stamp},{},{}\n", mean_path[h - 1], variance_path[h - 1]));
    }
    write_output(ctx, &ctx.out_path("forecasts.csv"), &csv)?;

    let mut summary = format!("{} forecasts from {}\n", bundle.label, series.time_at(last_index));
    for &h in &horizons {
        summary.push_str(&format!(
            "  h = {h:>3}: mean {:+.6e}, variance {:.6e}\n",
            mean_path[h - 1],
            variance_path[h - 1]
        ));
    }
    ctx.say(summary.trim_end());
    Ok(())
}
