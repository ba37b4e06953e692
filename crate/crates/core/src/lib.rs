//! Seasonal long-memory modelling and forecasting for high-frequency series.
//!
//! The crate is organised around a two-stage pipeline: a k-factor GARMA model
//! for the conditional mean, estimated in the wavelet-packet domain, followed
//! by a conditional-variance model for the mean residuals — either a
//! Gegenbauer log-GARCH recursion or a local-linear wavelet network trained
//! by backpropagation or particle swarm optimisation. The [`bench`] module
//! ties the stages together and scores multi-horizon forecasts.

pub mod bench;
pub mod diagnostics;
pub mod error;
pub mod gegenbauer;
pub mod ggarch;
pub mod llwnn;
pub mod optim;
pub mod poly;
pub mod timeseries;
pub mod wavelet;

mod rng;

pub use error::{Error, Result};
pub use rng::derive_seed;
