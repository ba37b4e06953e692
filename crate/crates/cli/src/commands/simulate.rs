use clap::{Args, ValueEnum};

use garmex_core::bench::simulate_joint;
use garmex_core::gegenbauer::{simulate_garma, GarmaModel, GegenbauerFactor};
use garmex_core::ggarch::{simulate_ggarch, GGarchModel, Innovation, TAU_GAUSSIAN};
use garmex_core::timeseries::TimeSeries;

use crate::commands::write_output;
use crate::config::parse_list;
use crate::failure::{CliFailure, CliResult};
use crate::{provenance, Ctx, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimulateModel {
    Garma,
    Ggarch,
    Joint,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Which generator to run.
    #[arg(long, value_enum, default_value_t = SimulateModel::Garma)]
    pub model: SimulateModel,

    /// Number of observations to emit.
    #[arg(long, default_value_t = 1024)]
    pub n: usize,

    /// Burn-in draws discarded before the sample (also the MA truncation).
    #[arg(long, default_value_t = 2000)]
    pub burn_in: usize,

    /// Process mean of the GARMA stage.
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,

    /// Innovation variance of the GARMA stage (ignored for joint).
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,

    /// AR coefficients, comma-separated.
    #[arg(long, default_value = "")]
    pub ar: String,

    /// MA coefficients, comma-separated.
    #[arg(long, default_value = "")]
    pub ma: String,

    /// Mean-side Gegenbauer factor `d@f` with f in cycles/sample;
    /// repeatable.
    #[arg(long = "factor")]
    pub factors: Vec<String>,

    /// Log-variance intercept of the G-GARCH stage.
    #[arg(long, default_value_t = -0.5)]
    pub gamma: f64,

    /// GARCH coefficients beta_i, comma-separated.
    #[arg(long, default_value = "")]
    pub beta: String,

    /// ARCH-side coefficients psi_i, comma-separated.
    #[arg(long, default_value = "")]
    pub psi: String,

    /// Variance-side Gegenbauer factor `d@f`; repeatable.
    #[arg(long = "vfactor")]
    pub vfactors: Vec<String>,

    /// Expectation of ln z^2 (Gaussian default).
    #[arg(long, default_value_t = TAU_GAUSSIAN)]
    pub tau: f64,

    /// Seasonal cycle length recorded on the variance model.
    #[arg(long, default_value_t = 1)]
    pub season: usize,
}

fn parse_factor(text: &str) -> CliResult<GegenbauerFactor> {
    let (d_text, f_text) = text
        .split_once('@')
        .ok_or_else(|| CliFailure::Usage(format!("factor {text:?} must look like d@f")))?;
    let d: f64 = d_text
        .trim()
        .parse()
        .map_err(|e| CliFailure::Usage(format!("bad memory exponent in {text:?}: {e}")))?;
    let f: f64 = f_text
        .trim()
        .parse()
        .map_err(|e| CliFailure::Usage(format!("bad frequency in {text:?}: {e}")))?;
    if !(0.0..=0.5).contains(&f) {
        return Err(CliFailure::Usage(format!("frequency {f} outside [0, 0.5] cycles/sample")));
    }
    GegenbauerFactor::from_cycles(d, f).map_err(CliFailure::from)
}

fn parse_coeffs(text: &str, what: &str) -> CliResult<Vec<f64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    parse_list(text, what)
}

pub fn run(args: &SimulateArgs, ctx: &Ctx) -> CliResult<()> {
    let mean_factors: Vec<GegenbauerFactor> =
        args.factors.iter().map(|t| parse_factor(t)).collect::<CliResult<_>>()?;
    let var_factors: Vec<GegenbauerFactor> =
        args.vfactors.iter().map(|t| parse_factor(t)).collect::<CliResult<_>>()?;

    let garma = GarmaModel {
        mu: args.mu,
        ar: parse_coeffs(&args.ar, "ar coefficient")?,
        ma: parse_coeffs(&args.ma, "ma coefficient")?,
        factors: mean_factors,
        sigma2: args.sigma2,
    };
    let ggarch = GGarchModel {
        gamma: args.gamma,
        beta: parse_coeffs(&args.beta, "beta coefficient")?,
        psi: parse_coeffs(&args.psi, "psi coefficient")?,
        variance_factors: var_factors,
        tau: args.tau,
        season_length: args.season,
        truncation: ctx.config.resolve("ggarch_truncation", None, 1000usize)?,
        innovation: Innovation::Gaussian,
    };

    // parameter echo for the output header
    let mut echo: Vec<(String, String)> = vec![
        ("model".into(), format!("{:?}", args.model).to_lowercase()),
        ("n".into(), args.n.to_string()),
        ("burn_in".into(), args.burn_in.to_string()),
    ];
    let uses_mean = matches!(args.model, SimulateModel::Garma | SimulateModel::Joint);
    let uses_var = matches!(args.model, SimulateModel::Ggarch | SimulateModel::Joint);
    if uses_mean {
        echo.push(("mu".into(), args.mu.to_string()));
        if args.model == SimulateModel::Garma {
            echo.push(("sigma2".into(), args.sigma2.to_string()));
        }
        echo.push(("ar".into(), format!("{:?}", garma.ar)));
        echo.push(("ma".into(), format!("{:?}", garma.ma)));
        for (i, f) in garma.factors.iter().enumerate() {
            echo.push((format!("factor_{}", i + 1), format!("d={} f={}", f.d, f.cycles())));
        }
    }
    if uses_var {
        echo.push(("gamma".into(), args.gamma.to_string()));
        echo.push(("beta".into(), format!("{:?}", ggarch.beta)));
        echo.push(("psi".into(), format!("{:?}", ggarch.psi)));
        echo.push(("tau".into(), args.tau.to_string()));
        echo.push(("season".into(), args.season.to_string()));
        for (i, f) in ggarch.variance_factors.iter().enumerate() {
            echo.push((format!("vfactor_{}", i + 1), format!("d={} f={}", f.d, f.cycles())));
        }
    }

    let mut csv = provenance::header(VERSION, ctx.seed, &ctx.config_digest, &echo);
    match args.model {
        SimulateModel::Garma => {
            let series = simulate_garma(&garma, args.n, args.burn_in, ctx.seed)?;
            csv.push_str("timestamp,value\n");
            for (i, v) in series.values().iter().enumerate() {
                csv.push_str(&format!(
                    "{},{v}\n",
                    series.time_at(i).format("%Y-%m-%dT%H:%M:%S")
                ));
            }
        }
        SimulateModel::Ggarch => {
            let (eps, sigma2) = simulate_ggarch(&ggarch, args.n, args.burn_in, ctx.seed)?;
            let series = TimeSeries::hourly(eps, "ggarch simulation")?;
            csv.push_str("timestamp,value,true_sigma2\n");
            for (i, v) in series.values().iter().enumerate() {
                csv.push_str(&format!(
                    "{},{v},{}\n",
                    series.time_at(i).format("%Y-%m-%dT%H:%M:%S"),
                    sigma2[i]
                ));
            }
        }
        SimulateModel::Joint => {
            let (series, sigma2) = simulate_joint(&garma, &ggarch, args.n, args.burn_in, ctx.seed)?;
            csv.push_str("timestamp,value,true_sigma2\n");
            for (i, v) in series.values().iter().enumerate() {
                csv.push_str(&format!(
                    "{},{v},{}\n",
                    series.time_at(i).format("%Y-%m-%dT%H:%M:%S"),
                    sigma2[i]
                ));
            }
        }
    }
    write_output(ctx, &ctx.out_path("simulated.csv"), &csv)?;
    ctx.say(format!("simulated {} observations (seed {})", args.n, ctx.seed));
    Ok(())
}
