//! Estimating the chance of success `τ̂` from settled market outcomes.

use serde::{Deserialize, Serialize};

use crate::economics::{bernoulli_outcome, PenaltyPair};
use crate::error::{Error, Result};

/// Sample mean of binary outcomes.
pub fn estimate_tau(samples: &[bool]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let k = samples.iter().filter(|&&s| s).count();
    Ok(k as f64 / samples.len() as f64)
}

/// How periods without a balancing penalty enter the estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exclusion {
    /// Dropped from the sample.
    #[default]
    Skip,
    /// Counted as underage-penalized (`s = 0`).
    AsFailure,
    /// Counted as overage-penalized (`s = 1`).
    AsSuccess,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauEstimatorConfig {
    /// Moving-average window in days; at least 1.
    pub window_days: u32,
    /// One model per hour of the day, or a single pooled one.
    pub per_hour: bool,
    pub exclusion: Exclusion,
    /// Returned instead of an error when the window holds no usable outcome.
    pub fallback: Option<f64>,
}

impl Default for TauEstimatorConfig {
    fn default() -> Self {
        TauEstimatorConfig {
            window_days: 90,
            per_hour: true,
            exclusion: Exclusion::Skip,
            fallback: None,
        }
    }
}

impl TauEstimatorConfig {
    fn validate(&self) -> Result<()> {
        if self.window_days == 0 {
            return Err(Error::Config("estimation window must be at least one day".into()));
        }
        if let Some(p) = self.fallback {
            crate::error::check_probability("fallback chance of success", p)?;
        }
        Ok(())
    }
}

/// One settled hour: day number (any consistent epoch), hour of day, penalties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HourlyObservation {
    pub day: i64,
    pub hour: u32,
    pub penalties: PenaltyPair,
}

/// `τ̂` with the counts behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauEstimate {
    pub tau_hat: f64,
    pub successes: u32,
    pub trials: u32,
    pub used_fallback: bool,
    /// Average overage penalty over every period in the window.
    pub mean_pi_o: f64,
    /// Average underage penalty over every period in the window.
    pub mean_pi_u: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    successes: u32,
    trials: u32,
    periods: u32,
    sum_pi_o: f64,
    sum_pi_u: f64,
}

impl Tally {
    fn add(&mut self, p: PenaltyPair, exclusion: Exclusion) {
        self.periods += 1;
        self.sum_pi_o += p.pi_o;
        self.sum_pi_u += p.pi_u;
        let s = match (bernoulli_outcome(p), exclusion) {
            (Some(s), _) => s,
            (None, Exclusion::Skip) => return,
            (None, Exclusion::AsFailure) => false,
            (None, Exclusion::AsSuccess) => true,
        };
        self.trials += 1;
        self.successes += u32::from(s);
    }

    fn sub(self, other: Tally) -> Tally {
        Tally {
            successes: self.successes - other.successes,
            trials: self.trials - other.trials,
            periods: self.periods - other.periods,
            sum_pi_o: self.sum_pi_o - other.sum_pi_o,
            sum_pi_u: self.sum_pi_u - other.sum_pi_u,
        }
    }

    fn finish(self, cfg: &TauEstimatorConfig, day: i64, hour: u32) -> Result<TauEstimate> {
        let (mean_pi_o, mean_pi_u) = if self.periods == 0 {
            (0.0, 0.0)
        } else {
            let n = self.periods as f64;
            (self.sum_pi_o / n, self.sum_pi_u / n)
        };
        let (tau_hat, used_fallback) = if self.trials > 0 {
            (self.successes as f64 / self.trials as f64, false)
        } else if let Some(p) = cfg.fallback {
            (p, true)
        } else {
            return Err(Error::NoUsableObservations {
                day,
                hour,
                window: cfg.window_days,
            });
        };
        Ok(TauEstimate {
            tau_hat,
            successes: self.successes,
            trials: self.trials,
            used_fallback,
            mean_pi_o,
            mean_pi_u,
        })
    }
}

/// Moving-average `τ̂` for `(target_day, target_hour)` over the days
/// `[target_day − m, target_day − 1]`.
///
/// With `per_hour`, only observations at `target_hour` count.
pub fn hourly_tau_forecast(
    history: &[HourlyObservation],
    cfg: &TauEstimatorConfig,
    target_day: i64,
    target_hour: u32,
) -> Result<TauEstimate> {
    cfg.validate()?;
    let first = target_day - i64::from(cfg.window_days);
    let mut tally = Tally::default();
    for obs in history {
        if obs.day < first || obs.day >= target_day {
            continue;
        }
        if cfg.per_hour && obs.hour != target_hour {
            continue;
        }
        tally.add(obs.penalties, cfg.exclusion);
    }
    tally.finish(cfg, target_day, target_hour)
}

/// Prefix sums of outcomes per hour of day, answering any window query in
/// constant time. Equivalent to [`hourly_tau_forecast`] on the same history.
#[derive(Debug, Clone)]
pub struct HourlyTauTable {
    first_day: i64,
    exclusion: Exclusion,
    // prefix[d][h]: tally over days < first_day + d, per hour; index 24 pools all hours
    prefix: Vec<[Tally; 25]>,
}

impl HourlyTauTable {
    pub fn new(history: &[HourlyObservation], exclusion: Exclusion) -> Result<Self> {
        let Some(first_day) = history.iter().map(|o| o.day).min() else {
            return Ok(HourlyTauTable {
                first_day: 0,
                exclusion,
                prefix: vec![[Tally::default(); 25]],
            });
        };
        let last_day = history.iter().map(|o| o.day).max().unwrap_or(first_day);
        let n_days = (last_day - first_day + 1) as usize;
        let mut per_day = vec![[Tally::default(); 25]; n_days];
        for obs in history {
            if obs.hour >= 24 {
                return Err(Error::domain(format!("hour {} is not in 0..24", obs.hour)));
            }
            let row = &mut per_day[(obs.day - first_day) as usize];
            row[obs.hour as usize].add(obs.penalties, exclusion);
            row[24].add(obs.penalties, exclusion);
        }
        let mut prefix = Vec::with_capacity(n_days + 1);
        prefix.push([Tally::default(); 25]);
        for row in &per_day {
            let mut next = *prefix.last().expect("non-empty");
            for (acc, t) in next.iter_mut().zip(row) {
                acc.successes += t.successes;
                acc.trials += t.trials;
                acc.periods += t.periods;
                acc.sum_pi_o += t.sum_pi_o;
                acc.sum_pi_u += t.sum_pi_u;
            }
            prefix.push(next);
        }
        Ok(HourlyTauTable {
            first_day,
            exclusion,
            prefix,
        })
    }

    fn index(&self, day: i64) -> usize {
        (day - self.first_day).clamp(0, self.prefix.len() as i64 - 1) as usize
    }

    /// Same contract as [`hourly_tau_forecast`]. `cfg.exclusion` must match
    /// the rule the table was built with.
    pub fn forecast(&self, cfg: &TauEstimatorConfig, target_day: i64, target_hour: u32) -> Result<TauEstimate> {
        cfg.validate()?;
        if cfg.exclusion != self.exclusion {
            return Err(Error::Config(
                "exclusion rule differs from the one the table was built with".into(),
            ));
        }
        if target_hour >= 24 {
            return Err(Error::domain(format!("hour {target_hour} is not in 0..24")));
        }
        let col = if cfg.per_hour { target_hour as usize } else { 24 };
        let hi = self.index(target_day);
        let lo = self.index(target_day - i64::from(cfg.window_days));
        let tally = self.prefix[hi][col].sub(self.prefix[lo][col]);
        tally.finish(cfg, target_day, target_hour)
    }
}
