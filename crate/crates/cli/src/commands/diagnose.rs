use clap::Args;

use garmex_core::diagnostics::{gph_estimate, jarque_bera, ljung_box, local_whittle};
use garmex_core::timeseries::describe;
use garmex_core::wavelet::detect_gegenbauer_frequencies;

use crate::commands::{write_output, InputArgs};
use crate::config::parse_list;
use crate::failure::CliResult;
use crate::{provenance, Ctx, VERSION};

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Bandwidth exponents for the GPH and local Whittle tests
    /// (bandwidth m = floor(n^e)).
    #[arg(long, default_value = "0.5,0.6,0.7,0.8")]
    pub bandwidth_exponents: String,

    /// Lag count for the Ljung-Box portmanteau test.
    #[arg(long)]
    pub lags: Option<usize>,

    /// How many periodogram peaks to list.
    #[arg(long)]
    pub peaks: Option<usize>,
}

pub fn run(args: &DiagnoseArgs, ctx: &Ctx) -> CliResult<()> {
    let series = args.input.load(ctx)?;
    let values = series.values();
    let n = values.len();
    let exponents: Vec<f64> = parse_list(&args.bandwidth_exponents, "bandwidth exponent")?;
    let lags = ctx.config.resolve("lags", args.lags, 10usize)?;
    let max_peaks = ctx.config.resolve("peaks", args.peaks, 5usize)?;

    let stats = describe(&series)?;
    let (jb, jb_p) = jarque_bera(values)?;
    let (lb_q, lb_p) = ljung_box(values, lags)?;

    // list as many separated peaks as exist, up to the requested count
    let mut peaks = Vec::new();
    for k in (1..=max_peaks).rev() {
        if let Ok(found) = detect_gegenbauer_frequencies(values, k) {
            peaks = found;
            break;
        }
    }

    let mut csv = provenance::header(
        VERSION,
        ctx.seed,
        &ctx.config_digest,
        &[("input".into(), args.input.input.display().to_string()), ("n".into(), n.to_string())],
    );
    csv.push_str("section,name,v1,v2,v3,v4\n");
    csv.push_str(&format!("stats,n,{n},,,\n"));
    csv.push_str(&format!("stats,mean,{},,,\n", stats.mean));
    csv.push_str(&format!("stats,std_dev,{},,,\n", stats.std_dev));
    csv.push_str(&format!("stats,skewness,{},,,\n", stats.skewness));
    csv.push_str(&format!("stats,kurtosis,{},,,\n", stats.kurtosis));
    csv.push_str(&format!("stats,jarque_bera,{jb},{jb_p},,\n"));
    csv.push_str(&format!("ljung_box,lags{lags},{lb_q},{lb_p},,\n"));
    for p in &peaks {
        csv.push_str(&format!(
            "peak,bin{},{},{},{},{}\n",
            p.bin,
            p.frequency,
            1.0 / p.frequency,
            p.height,
            p.height_to_median
        ));
    }

    let mut summary = String::new();
    summary.push_str(&format!("{} (n = {n})\n", series.label()));
    summary.push_str(&format!(
        "  mean {:+.6e}  sd {:.6}  skew {:.4}  kurt {:.3}  JB {:.1} (p = {:.4})\n",
        stats.mean, stats.std_dev, stats.skewness, stats.kurtosis, jb, jb_p
    ));
    summary.push_str(&format!("  Ljung-Box({lags}): Q = {lb_q:.2}, p = {lb_p:.4}\n"));
    if !peaks.is_empty() {
        summary.push_str("  periodogram peaks (cycles/sample, period in samples):\n");
        for p in &peaks {
            summary.push_str(&format!(
                "    f = {:.4}  period = {:.2}  height/median = {:.1}\n",
                p.frequency,
                1.0 / p.frequency,
                p.height_to_median
            ));
        }
    }
    summary.push_str("  long-memory tests (two-sided p for d = 0):\n");

    // columns: v1 = m, v2 = d_hat, v3 = std error, v4 = p-value
    for &e in &exponents {
        let gph = gph_estimate(values, e)?;
        csv.push_str(&format!(
            "gph,T^{e},{},{},{},{}\n",
            gph.bandwidth, gph.d_hat, gph.std_error, gph.p_value
        ));
        let m = (n as f64).powf(e).floor() as usize;
        let lw = local_whittle(values, m)?;
        csv.push_str(&format!(
            "local_whittle,T^{e},{},{},{},{}\n",
            lw.bandwidth, lw.d_hat, lw.std_error, lw.p_value
        ));
        summary.push_str(&format!(
            "    T^{e} (m = {m}): GPH d = {:+.4} (se {:.4}, p {:.3}); LW d = {:+.4} (se {:.4}, p {:.3})\n",
            gph.d_hat, gph.std_error, gph.p_value, lw.d_hat, lw.std_error, lw.p_value
        ));
    }

    write_output(ctx, &ctx.out_path("diagnostics.csv"), &csv)?;
    ctx.say(summary.trim_end());
    Ok(())
}
