//! Bernoulli newsvendor offering strategies for renewable energy producers.
//!
//! The crate covers the whole chain from a predictive distribution of
//! normalized generation to a market offer:
//!
//! * [`dist`]: distributions on `[0, 1]` (quantile forecasts, Beta, uniform,
//!   point masses) with CDF, quantile, mean, sampling and partial expectations.
//! * [`ambiguity`]: FSD ambiguity sets built with double-power deformation
//!   operators, and interval balls around the Bernoulli chance of success.
//! * [`solvers`]: closed-form offers (direct, robust to the generation
//!   forecast, robust to the chance of success, and their robust limits).
//! * [`economics`]: two-price settlement, penalties and opportunity loss.
//! * [`estimation`]: chance-of-success estimators from market history.
//! * [`montecarlo`]: the stylized simulation study (ε sweep, γ, m sweep).
//! * [`backtest`]: protocol for trading on historical or synthetic markets.

pub mod ambiguity;
pub mod backtest;
pub mod dist;
pub mod economics;
pub mod error;
pub mod estimation;
pub mod montecarlo;
pub mod quad;
pub mod solvers;

pub use error::{Error, Result};
