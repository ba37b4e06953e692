pub mod diagnose;
pub mod evaluate;
pub mod fit;
pub mod forecast;
pub mod simulate;

use std::path::Path;

use clap::Args;
use garmex_core::timeseries::{load_csv, log_returns, CsvSchema, TimeSeries};

use crate::failure::{CliFailure, CliResult};
use crate::Ctx;

/// CSV ingestion flags shared by the commands that read a series.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input CSV file (timestamp and value columns).
    pub input: std::path::PathBuf,

    /// Zero-based column index of the timestamp.
    #[arg(long, default_value_t = 0)]
    pub timestamp_col: usize,

    /// Zero-based column index of the value.
    #[arg(long, default_value_t = 1)]
    pub value_col: usize,

    /// The file has no header row.
    #[arg(long)]
    pub no_header: bool,

    /// Bridge missing timestamps with the previous value instead of
    /// rejecting the file.
    #[arg(long)]
    pub forward_fill: bool,

    /// Work on log-returns of the input instead of the raw values.
    #[arg(long)]
    pub log_returns: bool,
}

impl InputArgs {
    pub fn load(&self, ctx: &Ctx) -> CliResult<TimeSeries> {
        let bytes = std::fs::read(&self.input).map_err(|e| {
            CliFailure::Data(format!("cannot read {}: {e}", self.input.display()))
        })?;
        let schema = CsvSchema {
            timestamp_col: self.timestamp_col,
            value_col: self.value_col,
            has_header: !self.no_header,
            forward_fill: self.forward_fill,
            label: self
                .input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "series".into()),
        };
        let loaded = load_csv(bytes.as_slice(), &schema)?;
        if !loaded.filled_gaps.is_empty() {
            ctx.say(format!("forward-filled {} missing observations", loaded.filled_gaps.len()));
        }
        let series = if self.log_returns { log_returns(&loaded.series)? } else { loaded.series };
        Ok(series)
    }

    pub fn digest(&self) -> CliResult<String> {
        let bytes = std::fs::read(&self.input).map_err(|e| {
            CliFailure::Data(format!("cannot read {}: {e}", self.input.display()))
        })?;
        Ok(crate::provenance::sha256_hex(&bytes))
    }
}

pub fn write_output(ctx: &Ctx, path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliFailure::Data(format!("cannot write {}: {e}", path.display())))?;
    ctx.say(format!("wrote {}", path.display()));
    Ok(())
}
