use chrono::{Days, NaiveDate, NaiveTime};

use super::MarketRecord;
use crate::dist::{standard_forecast_levels, Cdf, PredictiveCdf, RngStream};
use crate::error::{check_probability, Error, Result};

/// Generation law of a synthetic market.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SynthGeneration {
    /// The same Beta(a, b) forecast every hour.
    Fixed { a: f64, b: f64 },
    /// A Beta forecast per hour with mean in `[0.15, 0.6]` and concentration
    /// in `[6, 20]`.
    Varying,
}

/// Stationary synthetic market.
///
/// Each hour's Beta forecast is summarized by its quantiles at the standard
/// levels; generation is drawn from that summarized forecast, so forecasts
/// are calibrated. The system is
/// long with probability `tau`, penalties are a uniform fraction of the
/// day-ahead price with mean `mean_penalty_ratio`, and a share of hours has
/// no balancing penalty at all.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub start: NaiveDate,
    pub days: u32,
    pub tau: f64,
    pub generation: SynthGeneration,
    pub mean_penalty_ratio: f64,
    pub no_balancing_share: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            start: NaiveDate::from_ymd_opt(2019, 1, 1).expect("valid date"),
            days: 731,
            tau: 0.75,
            generation: SynthGeneration::Fixed { a: 2.0, b: 6.0 },
            mean_penalty_ratio: 0.135,
            no_balancing_share: 0.05,
            seed: 0,
        }
    }
}

pub fn generate_synthetic(cfg: &SynthConfig) -> Result<Vec<MarketRecord>> {
    check_probability("chance of a long system", cfg.tau)?;
    check_probability("no-balancing share", cfg.no_balancing_share)?;
    if !(cfg.mean_penalty_ratio >= 0.0 && cfg.mean_penalty_ratio <= 0.5) {
        return Err(Error::Config(format!(
            "mean penalty ratio {} must lie in [0, 0.5]",
            cfg.mean_penalty_ratio
        )));
    }
    let levels = standard_forecast_levels();
    let summarize = |beta: PredictiveCdf| -> Result<PredictiveCdf> {
        let values: Vec<f64> = levels.iter().map(|&l| beta.inverse(l)).collect();
        PredictiveCdf::piecewise_linear(&levels, &values)
    };
    let fixed = match cfg.generation {
        SynthGeneration::Fixed { a, b } => Some(summarize(PredictiveCdf::beta(a, b)?)?),
        SynthGeneration::Varying => None,
    };
    let mut out = Vec::with_capacity(cfg.days as usize * 24);
    for d in 0..cfg.days {
        let date = cfg.start + Days::new(u64::from(d));
        let mut rng = RngStream::new(cfg.seed, u64::from(d));
        for h in 0..24u32 {
            let forecast = match &fixed {
                Some(f) => f.clone(),
                None => {
                    let mean = 0.15 + 0.45 * rng.uniform();
                    let concentration = 6.0 + 14.0 * rng.uniform();
                    summarize(PredictiveCdf::beta(
                        mean * concentration,
                        (1.0 - mean) * concentration,
                    )?)?
                }
            };
            let omega_star = forecast.inverse(rng.uniform());

            let phase = std::f64::consts::TAU * (f64::from(h) - 8.0) / 24.0;
            let pi_s = (45.0 + 12.0 * phase.sin() + 16.0 * (rng.uniform() - 0.5)).max(5.0);
            let long = rng.bernoulli(cfg.tau);
            let balanced = !rng.bernoulli(cfg.no_balancing_share);
            let penalty = if balanced {
                2.0 * cfg.mean_penalty_ratio * rng.uniform() * pi_s
            } else {
                0.0
            };
            let s_l = if long { 1.0 } else { -1.0 } * (50.0 + 450.0 * rng.uniform());
            let pi_b = if long { pi_s - penalty } else { pi_s + penalty };
            out.push(MarketRecord {
                timestamp: date.and_time(NaiveTime::from_hms_opt(h, 0, 0).expect("valid hour")),
                pi_s,
                pi_b,
                s_l,
                omega_star,
                forecast,
            });
        }
    }
    Ok(out)
}
