//! Trading strategies evaluated on hourly market history.
//!
//! Timing: offers for every hour of delivery day `D` are fixed on day `D − 1`
//! from that day's forecast. Settled outcomes are published with a one-day
//! lag, so the `τ̂` window and the cross-validation window both end on day
//! `D − 2`. The first `warm_start_days` days are never evaluated.

mod data;
mod synth;

use std::collections::BTreeMap;
use std::io::Write;

use chrono::{NaiveDate, NaiveDateTime, Timelike};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambiguity::ball_bounds;
use crate::dist::{Cdf, PredictiveCdf};
use crate::economics::{
    penalties, regret_and_ratio, revenue, two_price_balancing_price, PerformanceRow,
    SettlementInput,
};
use crate::error::{Error, Result};
use crate::estimation::{Exclusion, HourlyObservation, HourlyTauTable, TauEstimatorConfig};
use crate::montecarlo::epsilon_grid;
use crate::solvers::{dr_omega_offer, dr_s_offer};

pub use data::{
    load_market_data, scale_penalties, write_market_data, LoadedMarket, FORECAST_FILE_FORMAT,
    TIMESTAMP_FORMAT,
};
pub use synth::{generate_synthetic, SynthConfig, SynthGeneration};

/// Shown with every report: the reference case-study figures came from
/// private market data.
pub const REFERENCE_NOTE: &str = "Reference case-study figures (oracle 31.63, direct 29.25, \
regret 2.38 EUR/MWh) were computed on private market data and cannot be reproduced here; \
they are not used as targets.";

/// One delivery hour.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketRecord {
    pub timestamp: NaiveDateTime,
    pub pi_s: f64,
    pub pi_b: f64,
    pub s_l: f64,
    pub omega_star: f64,
    /// Forecast issued before gate closure for this hour.
    pub forecast: PredictiveCdf,
}

impl MarketRecord {
    pub fn date(&self) -> NaiveDate {
        self.timestamp.date()
    }

    pub fn hour(&self) -> u32 {
        self.timestamp.hour()
    }

    /// Revenue of offer `y` under two-price settlement. Balancing prices on
    /// the wrong side of the day-ahead price count as the day-ahead price.
    pub fn settle(&self, y: f64) -> f64 {
        revenue(&SettlementInput {
            pi_s: self.pi_s,
            pi_b: two_price_balancing_price(self.pi_s, self.pi_b, self.s_l),
            s_l: self.s_l,
            y,
            omega_star: self.omega_star,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Oracle,
    Bn,
    DrOmega,
    DrSUniform,
    DrSLevelAdjusted,
    RobustS,
    RobustOmega,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::Oracle,
        Strategy::Bn,
        Strategy::DrOmega,
        Strategy::DrSUniform,
        Strategy::DrSLevelAdjusted,
        Strategy::RobustS,
        Strategy::RobustOmega,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Oracle => "oracle",
            Strategy::Bn => "bn",
            Strategy::DrOmega => "dr-omega",
            Strategy::DrSUniform => "dr-s-uniform",
            Strategy::DrSLevelAdjusted => "dr-s-level-adjusted",
            Strategy::RobustS => "robust-s",
            Strategy::RobustOmega => "robust-omega",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown strategy `{s}`")))
    }

    fn is_tuned(self) -> bool {
        matches!(
            self,
            Strategy::DrOmega | Strategy::DrSUniform | Strategy::DrSLevelAdjusted
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CvMode {
    /// Parameters chosen once on the window preceding the evaluation period.
    FixedWindow,
    /// Parameters re-chosen every evaluation day on the trailing window.
    Sliding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterGrids {
    pub rho: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub theta: Vec<f64>,
    /// Candidate `τ̂` windows in days.
    pub m: Vec<u32>,
}

impl Default for ParameterGrids {
    fn default() -> Self {
        ParameterGrids {
            rho: epsilon_grid(0.02, 0.5),
            epsilon: epsilon_grid(0.01, 0.3),
            theta: vec![0.0, 0.3, 0.6, 0.9],
            m: vec![7, 14, 30, 60, 90],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestPlan {
    pub warm_start_days: u32,
    pub tau_window_days: u32,
    pub cv_days: u32,
    pub cv_mode: CvMode,
    pub grids: ParameterGrids,
    pub strategies: Vec<Strategy>,
    pub per_hour: bool,
    pub exclusion: Exclusion,
    /// `τ̂` used when a window holds no usable outcome; `None` makes that an error.
    pub fallback_tau: Option<f64>,
}

impl Default for BacktestPlan {
    fn default() -> Self {
        BacktestPlan {
            warm_start_days: 131,
            tau_window_days: 91,
            cv_days: 40,
            cv_mode: CvMode::FixedWindow,
            grids: ParameterGrids::default(),
            strategies: Strategy::ALL.to_vec(),
            per_hour: true,
            exclusion: Exclusion::Skip,
            fallback_tau: Some(0.5),
        }
    }
}

impl BacktestPlan {
    pub fn validate(&self) -> Result<()> {
        if self.warm_start_days != self.tau_window_days + self.cv_days {
            return Err(Error::Config(format!(
                "warm start ({}) must equal estimation window ({}) plus cross-validation window ({})",
                self.warm_start_days, self.tau_window_days, self.cv_days
            )));
        }
        if self.cv_days == 0 {
            return Err(Error::Config("cross-validation window must be at least one day".into()));
        }
        let g = &self.grids;
        if g.m.is_empty() || g.m.contains(&0) {
            return Err(Error::Config("m grid must be non-empty with values ≥ 1".into()));
        }
        check_grid("m", &g.m.iter().map(|&m| f64::from(m)).collect::<Vec<_>>(), f64::INFINITY)?;
        if self.strategies.contains(&Strategy::DrOmega) {
            check_grid("ρ", &g.rho, 1.0)?;
        }
        if self.strategies.contains(&Strategy::DrSUniform)
            || self.strategies.contains(&Strategy::DrSLevelAdjusted)
        {
            check_grid("ε", &g.epsilon, 1.0)?;
        }
        if self.strategies.contains(&Strategy::DrSLevelAdjusted) {
            check_grid("θ", &g.theta, 1.0)?;
            if g.theta.iter().any(|&t| t >= 1.0) {
                return Err(Error::Config("θ grid values must be below 1".into()));
            }
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("no strategy selected".into()));
        }
        if let Some(p) = self.fallback_tau {
            crate::error::check_probability("fallback chance of success", p)?;
        }
        Ok(())
    }

    fn estimator(&self, m: u32) -> TauEstimatorConfig {
        TauEstimatorConfig {
            window_days: m,
            per_hour: self.per_hour,
            exclusion: self.exclusion,
            fallback: self.fallback_tau,
        }
    }
}

fn check_grid(name: &str, g: &[f64], max: f64) -> Result<()> {
    if g.is_empty() {
        return Err(Error::Config(format!("{name} grid is empty")));
    }
    if g.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(format!("{name} grid must be strictly increasing")));
    }
    if g.iter().any(|&v| !(v >= 0.0 && v <= max)) {
        return Err(Error::Config(format!("{name} grid values must lie in [0, {max}]")));
    }
    Ok(())
}

/// Tuned parameters of one strategy; unused fields are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StrategyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

/// Grid points for a strategy, ordered by increasing radius.
fn candidates(strategy: Strategy, grids: &ParameterGrids) -> Vec<StrategyParams> {
    match strategy {
        Strategy::DrOmega => grids
            .rho
            .iter()
            .map(|&r| StrategyParams { rho: Some(r), ..Default::default() })
            .collect(),
        Strategy::DrSUniform => grids
            .epsilon
            .iter()
            .map(|&e| StrategyParams { epsilon: Some(e), ..Default::default() })
            .collect(),
        Strategy::DrSLevelAdjusted => grids
            .epsilon
            .iter()
            .flat_map(|&e| {
                grids.theta.iter().map(move |&t| StrategyParams {
                    epsilon: Some(e),
                    theta: Some(t),
                    rho: None,
                })
            })
            .collect(),
        _ => vec![StrategyParams::default()],
    }
}

/// Offer of a strategy for one hour. The oracle offer needs the outcome and
/// is handled by the caller.
fn offer(strategy: Strategy, p: StrategyParams, f: &PredictiveCdf, tau_hat: f64) -> f64 {
    match strategy {
        Strategy::Oracle => unreachable!("oracle offers the realized generation"),
        Strategy::Bn => f.inverse(tau_hat),
        Strategy::DrOmega => dr_omega_offer(f, tau_hat, p.rho.unwrap_or(0.0)),
        Strategy::DrSUniform | Strategy::DrSLevelAdjusted => {
            let (lo, hi) = ball_bounds(tau_hat, p.epsilon.unwrap_or(0.0), p.theta.unwrap_or(0.0));
            dr_s_offer(f, lo, hi, f.mean()).0
        }
        Strategy::RobustS => f.mean(),
        Strategy::RobustOmega => tau_hat,
    }
}

/// Parameters in force from `first_day` on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvSelection {
    pub first_day: NaiveDate,
    /// Inclusive range of days whose revenue decided the selection.
    pub window: (NaiveDate, NaiveDate),
    pub m: u32,
    pub params: BTreeMap<Strategy, StrategyParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvOutcome {
    pub mode: CvMode,
    pub selections: Vec<CvSelection>,
}

impl CvOutcome {
    /// Fixed parameters applied to every evaluation day.
    pub fn fixed(first_day: NaiveDate, m: u32, params: BTreeMap<Strategy, StrategyParams>) -> Self {
        CvOutcome {
            mode: CvMode::FixedWindow,
            selections: vec![CvSelection {
                first_day,
                window: (first_day, first_day),
                m,
                params,
            }],
        }
    }

    fn in_force(&self, date: NaiveDate) -> Option<&CvSelection> {
        self.selections.iter().rev().find(|s| s.first_day <= date)
    }
}

/// Records indexed by day with the `τ̂` table prebuilt.
struct Market<'a> {
    records: &'a [MarketRecord],
    first_date: NaiveDate,
    day_of: Vec<i64>,
    /// Record range of day `d` is `day_start[d]..day_start[d + 1]`.
    day_start: Vec<usize>,
    table: HourlyTauTable,
}

impl<'a> Market<'a> {
    fn new(records: &'a [MarketRecord], exclusion: Exclusion) -> Result<Self> {
        let first = records
            .first()
            .ok_or_else(|| Error::InsufficientHistory("no market records".into()))?;
        for w in records.windows(2) {
            if w[1].timestamp <= w[0].timestamp {
                return Err(Error::Misaligned(format!(
                    "records not strictly ordered at {}",
                    w[1].timestamp
                )));
            }
        }
        let first_date = first.date();
        let day_of: Vec<i64> = records
            .iter()
            .map(|r| (r.date() - first_date).num_days())
            .collect();
        let n_days = day_of.last().map_or(0, |d| d + 1) as usize;
        let day_start: Vec<usize> = (0..=n_days)
            .map(|d| day_of.partition_point(|&x| x < d as i64))
            .collect();
        let obs: Vec<HourlyObservation> = records
            .iter()
            .zip(&day_of)
            .map(|(r, &day)| HourlyObservation {
                day,
                hour: r.hour(),
                penalties: penalties(r.pi_s, r.pi_b, r.s_l),
            })
            .collect();
        let table = HourlyTauTable::new(&obs, exclusion)?;
        Ok(Market {
            records,
            first_date,
            day_of,
            day_start,
            table,
        })
    }

    fn n_days(&self) -> i64 {
        self.day_start.len() as i64 - 1
    }

    fn day_range(&self, d: i64) -> std::ops::Range<usize> {
        self.day_start[d as usize]..self.day_start[d as usize + 1]
    }

    fn date(&self, d: i64) -> NaiveDate {
        self.first_date + chrono::Days::new(d as u64)
    }

    fn day_index(&self, date: NaiveDate) -> i64 {
        (date - self.first_date).num_days()
    }

    /// `τ̂` for record `i` from outcomes settled by its decision day.
    fn tau_hat(&self, plan: &BacktestPlan, m: u32, i: usize) -> Result<(f64, bool)> {
        let est = self
            .table
            .forecast(&plan.estimator(m), self.day_of[i] - 1, self.records[i].hour())?;
        Ok((est.tau_hat, est.used_fallback))
    }

    fn tau_hats(&self, plan: &BacktestPlan, m: u32, range: std::ops::Range<usize>) -> Result<Vec<f64>> {
        range.map(|i| self.tau_hat(plan, m, i).map(|t| t.0)).collect()
    }
}

fn prefix(v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(v.len() + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for x in v {
        acc += x;
        out.push(acc);
    }
    out
}

/// Index of the first maximum.
fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Chooses `m` on the direct strategy's revenue, then each tuned
/// strategy's grid point given that `m`. Ties go to the smallest value.
pub fn cross_validate(records: &[MarketRecord], plan: &BacktestPlan) -> Result<CvOutcome> {
    plan.validate()?;
    let market = Market::new(records, plan.exclusion)?;
    let eval_start = i64::from(plan.warm_start_days);
    let cv = i64::from(plan.cv_days);
    if market.n_days() <= eval_start {
        return Err(Error::InsufficientHistory(format!(
            "{} days of data leave no evaluation period after a {}-day warm start",
            market.n_days(),
            eval_start
        )));
    }
    if eval_start - 1 - cv < 0 {
        return Err(Error::InsufficientHistory(format!(
            "a {cv}-day cross-validation window does not fit before day {eval_start}"
        )));
    }
    let decision_days: Vec<i64> = match plan.cv_mode {
        CvMode::FixedWindow => vec![eval_start],
        CvMode::Sliding => (eval_start..market.n_days()).collect(),
    };
    let window = |d: i64| (d - 1 - cv, d - 2);
    // records needed: every day any window touches
    let (lo_day, hi_day) = (window(decision_days[0]).0, window(*decision_days.last().unwrap()).1);
    let needed = market.day_start[lo_day as usize]..market.day_start[hi_day as usize + 1];

    let all_taus: Vec<Vec<f64>> = plan
        .grids
        .m
        .par_iter()
        .map(|&m| {
            let mut t = vec![f64::NAN; records.len()];
            let vals = market.tau_hats(plan, m, needed.clone())?;
            t[needed.clone()].copy_from_slice(&vals);
            Ok(t)
        })
        .collect::<Result<_>>()?;

    let bn_prefix: Vec<Vec<f64>> = all_taus
        .par_iter()
        .map(|t| prefix(&daily_revenue_span(&market, t, Strategy::Bn, StrategyParams::default(), lo_day, hi_day)))
        .collect();

    let tuned: Vec<Strategy> = plan.strategies.iter().copied().filter(|s| s.is_tuned()).collect();
    // [strategy][m][candidate] -> prefix sums of daily revenue
    let tuned_prefix: Vec<Vec<Vec<Vec<f64>>>> = tuned
        .iter()
        .map(|&s| {
            let cands = candidates(s, &plan.grids);
            all_taus
                .iter()
                .map(|t| {
                    cands
                        .par_iter()
                        .map(|&p| prefix(&daily_revenue_span(&market, t, s, p, lo_day, hi_day)))
                        .collect()
                })
                .collect()
        })
        .collect();

    let sum = |pre: &[f64], (a, b): (i64, i64)| pre[(b - lo_day + 1) as usize] - pre[(a - lo_day) as usize];
    let selections = decision_days
        .iter()
        .map(|&d| {
            let w = window(d);
            let mi = argmax(bn_prefix.iter().map(|p| sum(p, w)));
            let mut params = BTreeMap::new();
            for (si, &s) in tuned.iter().enumerate() {
                let cands = candidates(s, &plan.grids);
                let ci = argmax(tuned_prefix[si][mi].iter().map(|p| sum(p, w)));
                params.insert(s, cands[ci]);
            }
            CvSelection {
                first_day: market.date(d),
                window: (market.date(w.0), market.date(w.1)),
                m: plan.grids.m[mi],
                params,
            }
        })
        .collect();
    Ok(CvOutcome {
        mode: plan.cv_mode,
        selections,
    })
}

fn daily_revenue_span(
    market: &Market,
    taus: &[f64],
    strategy: Strategy,
    p: StrategyParams,
    lo_day: i64,
    hi_day: i64,
) -> Vec<f64> {
    (lo_day..=hi_day)
        .map(|d| {
            market
                .day_range(d)
                .map(|i| {
                    let r = &market.records[i];
                    r.settle(offer(strategy, p, &r.forecast, taus[i]))
                })
                .sum()
        })
        .collect()
}

/// Offer of one strategy for one delivery hour.
#[derive(Debug, Clone, PartialEq)]
pub struct HourDecision {
    pub timestamp: NaiveDateTime,
    pub strategy: Strategy,
    pub tau_hat: f64,
    pub offer: f64,
}

fn decisions_for_day(
    market: &Market,
    plan: &BacktestPlan,
    cv: &CvOutcome,
    d: i64,
) -> Result<(Vec<HourDecision>, usize)> {
    let date = market.date(d);
    let sel = cv
        .in_force(date)
        .ok_or_else(|| Error::Config(format!("no cross-validated parameters in force on {date}")))?;
    let mut out = Vec::new();
    let mut fallbacks = 0;
    for i in market.day_range(d) {
        let r = &market.records[i];
        let (tau_hat, fell_back) = market.tau_hat(plan, sel.m, i)?;
        fallbacks += usize::from(fell_back);
        for &s in &plan.strategies {
            if s == Strategy::Oracle {
                continue;
            }
            let p = sel.params.get(&s).copied().unwrap_or_default();
            out.push(HourDecision {
                timestamp: r.timestamp,
                strategy: s,
                tau_hat,
                offer: offer(s, p, &r.forecast, tau_hat),
            });
        }
    }
    Ok((out, fallbacks))
}

/// Offers for every hour of `date`, excluding the oracle, which needs the
/// realized generation.
pub fn decide_day(
    records: &[MarketRecord],
    plan: &BacktestPlan,
    cv: &CvOutcome,
    date: NaiveDate,
) -> Result<Vec<HourDecision>> {
    plan.validate()?;
    let market = Market::new(records, plan.exclusion)?;
    let d = market.day_index(date);
    if d < 0 || d >= market.n_days() {
        return Err(Error::Config(format!("{date} is outside the data")));
    }
    Ok(decisions_for_day(&market, plan, cv, d)?.0)
}

/// Hourly settlement of one strategy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRow {
    pub timestamp: String,
    pub strategy: Strategy,
    pub revenue: f64,
    pub regret: f64,
    pub cum_delta_regret: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BacktestReport {
    pub evaluation_start: NaiveDate,
    pub evaluation_end: NaiveDate,
    pub hours: usize,
    pub energy: f64,
    /// Hours whose `τ̂` came from the fallback value.
    pub fallback_hours: usize,
    pub rows: Vec<PerformanceRow>,
    pub cv: CvOutcome,
    pub note: &'static str,
    #[serde(skip)]
    pub series: Vec<SeriesRow>,
}

impl BacktestReport {
    pub fn row(&self, s: Strategy) -> Option<&PerformanceRow> {
        self.rows.iter().find(|r| r.strategy == s.name())
    }
}

/// Settles every evaluation hour for each strategy with the parameters in
/// force on its delivery day. The advantage ratio and Δ-regret are relative
/// to the direct strategy.
pub fn run_backtest(records: &[MarketRecord], plan: &BacktestPlan, cv: &CvOutcome) -> Result<BacktestReport> {
    plan.validate()?;
    let market = Market::new(records, plan.exclusion)?;
    let eval_start = i64::from(plan.warm_start_days);
    if market.n_days() <= eval_start {
        return Err(Error::InsufficientHistory(format!(
            "{} days of data leave no evaluation period after a {eval_start}-day warm start",
            market.n_days()
        )));
    }
    let mut strategies = plan.strategies.clone();
    if !strategies.contains(&Strategy::Bn) {
        strategies.push(Strategy::Bn);
    }
    let eval_plan = BacktestPlan {
        strategies: strategies.clone(),
        ..plan.clone()
    };
    let per_day: Vec<(Vec<HourDecision>, usize)> = (eval_start..market.n_days())
        .into_par_iter()
        .map(|d| decisions_for_day(&market, &eval_plan, cv, d))
        .collect::<Result<_>>()?;
    let range = market.day_start[eval_start as usize]..records.len();
    let hours = range.len();
    let index_of = |ts: NaiveDateTime| range.start + records[range.clone()].partition_point(|r| r.timestamp < ts);

    let mut revenues: BTreeMap<Strategy, Vec<f64>> =
        strategies.iter().map(|&s| (s, vec![0.0; hours])).collect();
    let mut fallback_hours = 0;
    for (decisions, fb) in &per_day {
        fallback_hours += fb;
        for h in decisions {
            let i = index_of(h.timestamp);
            revenues.get_mut(&h.strategy).expect("strategy registered")[i - range.start] =
                records[i].settle(h.offer);
        }
    }
    let oracle: Vec<f64> = records[range.clone()].iter().map(|r| r.settle(r.omega_star)).collect();
    if let Some(v) = revenues.get_mut(&Strategy::Oracle) {
        v.clone_from(&oracle);
    }
    let generation: Vec<f64> = records[range.clone()].iter().map(|r| r.omega_star).collect();
    let baseline = revenues[&Strategy::Bn].clone();
    let named: Vec<(&str, &[f64])> = plan
        .strategies
        .iter()
        .map(|s| (s.name(), revenues[s].as_slice()))
        .collect();
    let rows = regret_and_ratio(&named, &oracle, &generation, &baseline)?;

    let mut series = Vec::with_capacity(hours * rows.len());
    for (j, r) in records[range.clone()].iter().enumerate() {
        let ts = r.timestamp.format(TIMESTAMP_FORMAT).to_string();
        for (s, row) in plan.strategies.iter().zip(&rows) {
            let rev = revenues[s][j];
            series.push(SeriesRow {
                timestamp: ts.clone(),
                strategy: *s,
                revenue: rev,
                regret: oracle[j] - rev,
                cum_delta_regret: row.cum_delta_regret[j],
            });
        }
    }
    Ok(BacktestReport {
        evaluation_start: market.date(eval_start),
        evaluation_end: market.date(market.n_days() - 1),
        hours,
        energy: generation.iter().sum(),
        fallback_hours,
        rows,
        cv: cv.clone(),
        note: REFERENCE_NOTE,
        series,
    })
}

/// CSV with header `timestamp,strategy,revenue,regret,cum_delta_regret`.
pub fn write_report_csv<W: Write>(w: W, report: &BacktestReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["timestamp", "strategy", "revenue", "regret", "cum_delta_regret"])?;
    for r in &report.series {
        out.write_record([
            r.timestamp.clone(),
            r.strategy.name().to_string(),
            r.revenue.to_string(),
            r.regret.to_string(),
            r.cum_delta_regret.to_string(),
        ])?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests;
