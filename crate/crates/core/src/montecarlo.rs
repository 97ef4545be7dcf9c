//! Monte-Carlo study of how noise in `τ̂` hurts the direct offer and how much
//! of that loss the DR-s offers recover.
//!
//! Each replicate draws `m` Bernoulli outcomes and forms `τ̂ = k/m`. Offers are
//! scored analytically with the expected loss under the true generation
//! distribution, so a replicate is fully summarized by its success count `k`.
//! Replicates are reduced to integer histograms of `k`, which makes every
//! result independent of the number of worker threads.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambiguity::ball_bounds;
use crate::dist::{BernoulliThreshold, Cdf, PredictiveCdf, RngStream};
use crate::economics::expected_loss_unchecked;
use crate::error::{check_probability, Error, Result};
use crate::solvers::dr_s_offer;

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arm {
    /// Knows the true chance of success.
    Oracle,
    /// Direct offer at `τ̂`.
    Bn,
    /// Offers `E[ω]`.
    Robust,
    DrUniform,
    DrLevelAdjusted,
}

impl Arm {
    pub const ALL: [Arm; 5] = [
        Arm::Oracle,
        Arm::Bn,
        Arm::Robust,
        Arm::DrUniform,
        Arm::DrLevelAdjusted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Arm::Oracle => "oracle",
            Arm::Bn => "bn",
            Arm::Robust => "robust",
            Arm::DrUniform => "dr-uniform",
            Arm::DrLevelAdjusted => "dr-level-adjusted",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub true_dist: PredictiveCdf,
    pub true_tau: f64,
    /// Bernoulli draws per replicate.
    pub m: u32,
    /// Number of replicates.
    pub replicates: u64,
    pub epsilon_grid: Vec<f64>,
    /// Shape of the level-adjusted ball.
    pub theta: f64,
    pub master_seed: u64,
    /// Replicate batches used for standard errors.
    pub batches: u32,
}

impl SimConfig {
    /// Beta(2, 6) generation, `τ = 0.75`, `m = 10`, `θ = 0.9`, `ε ∈ {0, 0.01, …, 1}`.
    pub fn reference_study(replicates: u64, master_seed: u64) -> Self {
        SimConfig {
            true_dist: PredictiveCdf::beta(2.0, 6.0).expect("valid parameters"),
            true_tau: 0.75,
            m: 10,
            replicates,
            epsilon_grid: epsilon_grid(0.01, 1.0),
            theta: 0.9,
            master_seed,
            batches: 20,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("true chance of success", self.true_tau)?;
        if self.m == 0 {
            return Err(Error::Config("m must be at least 1".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Config("at least one replicate is required".into()));
        }
        if self.batches == 0 || u64::from(self.batches) > self.replicates {
            return Err(Error::Config(format!(
                "batches = {} must be in 1..={}",
                self.batches, self.replicates
            )));
        }
        if !(0.0..1.0).contains(&self.theta) {
            return Err(Error::Config(format!("θ = {} is not in [0, 1)", self.theta)));
        }
        if self.epsilon_grid.is_empty() {
            return Err(Error::Config("ε grid is empty".into()));
        }
        for w in self.epsilon_grid.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Config("ε grid must be strictly increasing".into()));
            }
        }
        if self.epsilon_grid.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return Err(Error::Config("ε grid values must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// `{0, step, 2·step, …, max}` computed by index to avoid accumulated drift.
pub fn epsilon_grid(step: f64, max: f64) -> Vec<f64> {
    let n = (max / step).round() as usize;
    (0..=n).map(|i| i as f64 * step).collect()
}

/// Stream id of a replicate; distinct for every `(m, replicate)` pair.
pub fn replicate_stream_id(m: u32, replicate: u64) -> u64 {
    (u64::from(m) << 40) | replicate
}

/// Success count of one replicate.
pub fn replicate_successes(master_seed: u64, m: u32, true_tau: f64, replicate: u64) -> u32 {
    let mut rng = RngStream::new(master_seed, replicate_stream_id(m, replicate));
    let t = BernoulliThreshold::new(true_tau);
    (0..m).map(|_| u32::from(t.draw(&mut rng))).sum()
}

/// Histogram of success counts, one row per batch; replicate `r` belongs to
/// batch `r mod batches`.
pub fn success_histograms(cfg: &SimConfig) -> Vec<Vec<u64>> {
    let m = cfg.m;
    let batches = cfg.batches as usize;
    let n_chunks = cfg.replicates.div_ceil(CHUNK);
    let empty = || vec![vec![0u64; m as usize + 1]; batches];
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut h = empty();
            let end = ((c + 1) * CHUNK).min(cfg.replicates);
            for r in c * CHUNK..end {
                let k = replicate_successes(cfg.master_seed, m, cfg.true_tau, r);
                h[(r % batches as u64) as usize][k as usize] += 1;
            }
            h
        })
        .reduce(empty, |mut a, b| {
            for (ra, rb) in a.iter_mut().zip(&b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    *x += y;
                }
            }
            a
        })
}

/// Expected loss of every arm for each possible success count, per ε.
struct LossTable {
    oracle: f64,
    robust: f64,
    // [k]
    bn: Vec<f64>,
    // [ε][k]
    dr_uniform: Vec<Vec<f64>>,
    dr_level_adjusted: Vec<Vec<f64>>,
}

impl LossTable {
    fn new(cfg: &SimConfig) -> Self {
        let f = &cfg.true_dist;
        let tau = cfg.true_tau;
        let mean = f.mean();
        let score = |y: f64| expected_loss_unchecked(f, y, tau);
        let tau_hats: Vec<f64> = (0..=cfg.m).map(|k| f64::from(k) / f64::from(cfg.m)).collect();
        let dr = |theta: f64| -> Vec<Vec<f64>> {
            cfg.epsilon_grid
                .par_iter()
                .map(|&eps| {
                    tau_hats
                        .iter()
                        .map(|&th| {
                            let (lo, hi) = ball_bounds(th, eps, theta);
                            score(dr_s_offer(f, lo, hi, mean).0)
                        })
                        .collect()
                })
                .collect()
        };
        LossTable {
            oracle: score(f.inverse(tau)),
            robust: score(mean),
            bn: tau_hats.iter().map(|&th| score(f.inverse(th))).collect(),
            dr_uniform: dr(0.0),
            dr_level_adjusted: dr(cfg.theta),
        }
    }
}

fn weighted_mean(losses: &[f64], hist: &[u64]) -> f64 {
    let n: u64 = hist.iter().sum();
    let s: f64 = losses.iter().zip(hist).map(|(l, &c)| l * c as f64).sum();
    s / n as f64
}

/// Expected-loss curve of one arm over the ε grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmCurve {
    pub arm: Arm,
    pub losses: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub epsilon_grid: Vec<f64>,
    pub curves: Vec<ArmCurve>,
    /// Replicate count per success count `k`.
    pub tau_hat_histogram: Vec<u64>,
    pub gamma_u: f64,
    pub gamma_la: f64,
    pub best_epsilon_u: f64,
    pub best_epsilon_la: f64,
    /// Batch standard errors of the two γ values and of `γ_LA − γ_U`.
    pub gamma_u_se: f64,
    pub gamma_la_se: f64,
    pub gamma_diff_se: f64,
    pub master_seed: u64,
    #[serde(skip)]
    pub runtime_secs: f64,
}

impl SimResult {
    pub fn curve(&self, arm: Arm) -> &[f64] {
        &self
            .curves
            .iter()
            .find(|c| c.arm == arm)
            .expect("every arm has a curve")
            .losses
    }
}

/// `γ = (L_BN − L_DR*) / (L_BN − L_O)`: the share of the direct offer's
/// excess loss recovered by the DR offer.
pub fn gamma(l_bn: f64, l_o: f64, l_dr_star: f64) -> Result<f64> {
    if l_bn <= l_o || !(l_bn - l_o).is_finite() {
        return Err(Error::UndefinedGamma { l_bn, l_o });
    }
    Ok((l_bn - l_dr_star) / (l_bn - l_o))
}

fn argmin(v: &[f64]) -> usize {
    // first minimum, so ties go to the smallest radius
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[best] {
            best = i;
        }
    }
    best
}

fn sample_sd(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return f64::NAN;
    }
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Runs the ε sweep for all five arms on common `τ̂` draws.
pub fn run_epsilon_sweep(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let start = Instant::now();
    let batches = success_histograms(cfg);
    let table = LossTable::new(cfg);
    let mut hist = vec![0u64; cfg.m as usize + 1];
    for b in &batches {
        for (h, c) in hist.iter_mut().zip(b) {
            *h += c;
        }
    }
    let n_eps = cfg.epsilon_grid.len();
    let l_o = table.oracle;
    let l_bn = weighted_mean(&table.bn, &hist);
    let l_robust = weighted_mean(&vec![table.robust; hist.len()], &hist);
    let dr_u: Vec<f64> = table.dr_uniform.iter().map(|l| weighted_mean(l, &hist)).collect();
    let dr_la: Vec<f64> = table
        .dr_level_adjusted
        .iter()
        .map(|l| weighted_mean(l, &hist))
        .collect();
    let (iu, ila) = (argmin(&dr_u), argmin(&dr_la));
    let gamma_u = gamma(l_bn, l_o, dr_u[iu])?;
    let gamma_la = gamma(l_bn, l_o, dr_la[ila])?;

    // per-batch γ at the selected radii
    let mut gu = Vec::with_capacity(batches.len());
    let mut gla = Vec::with_capacity(batches.len());
    for b in &batches {
        let bn = weighted_mean(&table.bn, b);
        if bn <= l_o {
            continue;
        }
        gu.push((bn - weighted_mean(&table.dr_uniform[iu], b)) / (bn - l_o));
        gla.push((bn - weighted_mean(&table.dr_level_adjusted[ila], b)) / (bn - l_o));
    }
    let diffs: Vec<f64> = gu.iter().zip(&gla).map(|(u, la)| la - u).collect();
    let root = (gu.len() as f64).sqrt();

    Ok(SimResult {
        epsilon_grid: cfg.epsilon_grid.clone(),
        curves: vec![
            ArmCurve { arm: Arm::Oracle, losses: vec![l_o; n_eps] },
            ArmCurve { arm: Arm::Bn, losses: vec![l_bn; n_eps] },
            ArmCurve { arm: Arm::Robust, losses: vec![l_robust; n_eps] },
            ArmCurve { arm: Arm::DrUniform, losses: dr_u },
            ArmCurve { arm: Arm::DrLevelAdjusted, losses: dr_la },
        ],
        tau_hat_histogram: hist,
        gamma_u,
        gamma_la,
        best_epsilon_u: cfg.epsilon_grid[iu],
        best_epsilon_la: cfg.epsilon_grid[ila],
        gamma_u_se: sample_sd(&gu) / root,
        gamma_la_se: sample_sd(&gla) / root,
        gamma_diff_se: sample_sd(&diffs) / root,
        master_seed: cfg.master_seed,
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}

/// One point of the m sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MSweepPoint {
    pub m: u32,
    pub gamma_u: f64,
    pub gamma_la: f64,
    pub best_epsilon_u: f64,
    pub best_epsilon_la: f64,
    pub gamma_u_se: f64,
    pub gamma_la_se: f64,
    pub gamma_diff_se: f64,
}

/// γ of both ball kinds for each `m`, with the radius re-optimized per `m`.
pub fn run_m_sweep(base: &SimConfig, ms: &[u32]) -> Result<Vec<MSweepPoint>> {
    ms.iter()
        .map(|&m| {
            let cfg = SimConfig { m, ..base.clone() };
            let r = run_epsilon_sweep(&cfg)?;
            Ok(MSweepPoint {
                m,
                gamma_u: r.gamma_u,
                gamma_la: r.gamma_la,
                best_epsilon_u: r.best_epsilon_u,
                best_epsilon_la: r.best_epsilon_la,
                gamma_u_se: r.gamma_u_se,
                gamma_la_se: r.gamma_la_se,
                gamma_diff_se: r.gamma_diff_se,
            })
        })
        .collect()
}

/// Expected loss over a grid of offers, one row per chance of success.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossCurves {
    pub taus: Vec<f64>,
    pub y_grid: Vec<f64>,
    /// `losses[i][j]` is the expected loss at `taus[i]`, `y_grid[j]`.
    pub losses: Vec<Vec<f64>>,
}

pub fn loss_curve<C: Cdf + ?Sized>(f: &C, taus: &[f64], y_grid: &[f64]) -> Result<LossCurves> {
    for &t in taus {
        check_probability("chance of success", t)?;
    }
    for &y in y_grid {
        check_probability("offer", y)?;
    }
    let losses = taus
        .iter()
        .map(|&t| y_grid.iter().map(|&y| expected_loss_unchecked(f, y, t)).collect())
        .collect();
    Ok(LossCurves {
        taus: taus.to_vec(),
        y_grid: y_grid.to_vec(),
        losses,
    })
}

/// Worst case over the ball `[τ̲, τ̄]`: the larger of the two endpoint curves.
pub fn worst_case_envelope<C: Cdf + ?Sized>(
    f: &C,
    tau_lower: f64,
    tau_upper: f64,
    y_grid: &[f64],
) -> Result<Vec<f64>> {
    let c = loss_curve(f, &[tau_lower, tau_upper], y_grid)?;
    Ok(c.losses[0]
        .iter()
        .zip(&c.losses[1])
        .map(|(a, b)| a.max(*b))
        .collect())
}

/// CSV with header `epsilon,arm,expected_loss`.
pub fn write_sweep_csv<W: Write>(w: W, result: &SimResult) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["epsilon", "arm", "expected_loss"])?;
    for curve in &result.curves {
        for (eps, loss) in result.epsilon_grid.iter().zip(&curve.losses) {
            out.write_record([eps.to_string(), curve.arm.name().to_string(), loss.to_string()])?;
        }
    }
    out.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Machine-readable summary of a sweep; contains no timing so reruns are
/// byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub gamma_u: f64,
    pub gamma_la: f64,
    pub best_epsilon_u: f64,
    pub best_epsilon_la: f64,
    pub gamma_u_se: f64,
    pub gamma_la_se: f64,
    pub gamma_diff_se: f64,
    pub seed: u64,
    pub config: ConfigEcho,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub dist: String,
    pub tau: f64,
    pub m: u32,
    pub replicates: u64,
    pub theta: f64,
    pub batches: u32,
    pub epsilon_min: f64,
    pub epsilon_max: f64,
    pub epsilon_points: usize,
}

impl ConfigEcho {
    pub fn new(cfg: &SimConfig) -> Self {
        ConfigEcho {
            dist: cfg.true_dist.to_string(),
            tau: cfg.true_tau,
            m: cfg.m,
            replicates: cfg.replicates,
            theta: cfg.theta,
            batches: cfg.batches,
            epsilon_min: cfg.epsilon_grid.first().copied().unwrap_or(f64::NAN),
            epsilon_max: cfg.epsilon_grid.last().copied().unwrap_or(f64::NAN),
            epsilon_points: cfg.epsilon_grid.len(),
        }
    }
}

pub fn summarize(cfg: &SimConfig, r: &SimResult) -> SimSummary {
    SimSummary {
        gamma_u: r.gamma_u,
        gamma_la: r.gamma_la,
        best_epsilon_u: r.best_epsilon_u,
        best_epsilon_la: r.best_epsilon_la,
        gamma_u_se: r.gamma_u_se,
        gamma_la_se: r.gamma_la_se,
        gamma_diff_se: r.gamma_diff_se,
        seed: r.master_seed,
        config: ConfigEcho::new(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::economics::expected_loss;
    use crate::solvers::solve_dr_s;
    use crate::ambiguity::BernoulliBall;

    fn small(replicates: u64, seed: u64) -> SimConfig {
        SimConfig {
            epsilon_grid: epsilon_grid(0.05, 1.0),
            ..SimConfig::reference_study(replicates, seed)
        }
    }

    fn binomial_pmf(m: u32, tau: f64) -> Vec<f64> {
        let mut pmf = vec![0.0; m as usize + 1];
        let mut c = 1.0f64;
        for k in 0..=m {
            if k > 0 {
                c = c * f64::from(m - k + 1) / f64::from(k);
            }
            pmf[k as usize] = c * tau.powi(k as i32) * (1.0 - tau).powi((m - k) as i32);
        }
        pmf
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(2.0, 1.0, 2.0).unwrap(), 0.0);
        assert_eq!(gamma(2.0, 1.0, 1.0).unwrap(), 1.0);
        assert!(matches!(gamma(1.0, 1.0, 0.5), Err(Error::UndefinedGamma { .. })));
        assert!(gamma(0.5, 1.0, 0.5).is_err());
    }

    #[test]
    fn epsilon_grid_is_exact() {
        let g = epsilon_grid(0.01, 1.0);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 1.0);
        assert_eq!(g[37], 0.37);
    }

    #[test]
    fn histogram_counts_every_replicate() {
        let cfg = small(10_000, 3);
        let h = success_histograms(&cfg);
        assert_eq!(h.len(), 20);
        let total: u64 = h.iter().flatten().sum();
        assert_eq!(total, 10_000);
        let direct: u64 = (0..10_000)
            .filter(|&r| replicate_successes(3, 10, 0.75, r) == 7)
            .count() as u64;
        assert_eq!(h.iter().map(|b| b[7]).sum::<u64>(), direct);
    }

    #[test]
    fn arms_match_direct_solver_scoring() {
        // common τ̂: each arm's loss equals the histogram-weighted scoring of the
        // library solvers at the same τ̂ values
        let cfg = small(5_000, 11);
        let r = run_epsilon_sweep(&cfg).unwrap();
        let f = &cfg.true_dist;
        let n: u64 = r.tau_hat_histogram.iter().sum();
        for (j, &eps) in cfg.epsilon_grid.iter().enumerate() {
            let mut acc = 0.0;
            for (k, &c) in r.tau_hat_histogram.iter().enumerate() {
                let th = k as f64 / 10.0;
                let y = solve_dr_s(f, &BernoulliBall::uniform(th, eps).unwrap()).unwrap().y_star;
                acc += c as f64 * expected_loss(f, y, 0.75).unwrap();
            }
            let mc = r.curve(Arm::DrUniform)[j];
            assert!((acc / n as f64 - mc).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_matches_exact_binomial_expectation() {
        let cfg = small(200_000, 5);
        let r = run_epsilon_sweep(&cfg).unwrap();
        let f = &cfg.true_dist;
        let pmf = binomial_pmf(10, 0.75);
        let exact_bn: f64 = pmf
            .iter()
            .enumerate()
            .map(|(k, p)| p * expected_loss(f, f.inverse(k as f64 / 10.0), 0.75).unwrap())
            .sum();
        // loss per k is bounded by E[ω] + 1, so 5 binomial sd's is generous
        let mc = r.curve(Arm::Bn)[0];
        let sd: f64 = pmf
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let l = expected_loss(f, f.inverse(k as f64 / 10.0), 0.75).unwrap();
                p * (l - exact_bn).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        assert!((mc - exact_bn).abs() < 5.0 * sd / (200_000f64).sqrt(), "{mc} vs {exact_bn}");
    }

    #[test]
    fn endpoints_and_constant_arms() {
        let cfg = small(20_000, 1);
        let r = run_epsilon_sweep(&cfg).unwrap();
        let bn = r.curve(Arm::Bn);
        let robust = r.curve(Arm::Robust);
        let dr_u = r.curve(Arm::DrUniform);
        assert_eq!(dr_u[0], bn[0]);
        assert_eq!(*dr_u.last().unwrap(), robust[0]);
        assert_eq!(r.curve(Arm::DrLevelAdjusted)[0], bn[0]);
        for arm in [Arm::Oracle, Arm::Bn, Arm::Robust] {
            let c = r.curve(arm);
            assert!(c.iter().all(|x| *x == c[0]));
        }
        let oracle = r.curve(Arm::Oracle)[0];
        for arm in Arm::ALL {
            assert!(r.curve(arm).iter().all(|x| *x >= oracle));
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let cfg = small(30_000, 99);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_epsilon_sweep(&cfg).unwrap())
        };
        let mut a = run(1);
        let mut b = run(4);
        a.runtime_secs = 0.0;
        b.runtime_secs = 0.0;
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        let mut cfg = small(10, 0);
        cfg.batches = 20;
        assert!(cfg.validate().is_err());
        let mut cfg = small(100, 0);
        cfg.epsilon_grid = vec![0.0, 0.5, 0.4];
        assert!(run_epsilon_sweep(&cfg).is_err());
        cfg.epsilon_grid = vec![0.0, 1.5];
        assert!(cfg.validate().is_err());
        cfg.epsilon_grid = vec![0.0];
        cfg.m = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn loss_curves_cross_at_mean() {
        let f = PredictiveCdf::beta(2.0, 6.0).unwrap();
        let taus = [0.1, 0.3, 0.5, 0.75, 0.9];
        let c = loss_curve(&f, &taus, &[0.25]).unwrap();
        for row in &c.losses {
            assert!((row[0] - c.losses[0][0]).abs() < 1e-12);
        }
        let y_grid = epsilon_grid(0.01, 1.0);
        let env = worst_case_envelope(&f, 0.7, 0.8, &y_grid).unwrap();
        let hi = loss_curve(&f, &[0.8], &y_grid).unwrap();
        let lo = loss_curve(&f, &[0.7], &y_grid).unwrap();
        for (j, y) in y_grid.iter().enumerate() {
            if *y < 0.249 {
                assert_eq!(env[j], hi.losses[0][j]);
            } else if *y > 0.251 {
                assert_eq!(env[j], lo.losses[0][j]);
            }
        }
    }

    #[test]
    fn csv_export_layout() {
        let cfg = small(1_000, 2);
        let r = run_epsilon_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("epsilon,arm,expected_loss"));
        assert_eq!(lines.count(), 5 * cfg.epsilon_grid.len());
        let json = serde_json::to_string(&summarize(&cfg, &r)).unwrap();
        assert!(json.contains("\"gamma_u\""));
        assert!(!json.contains("runtime"));
    }
}
