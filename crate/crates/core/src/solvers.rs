//! Closed-form offers for the Bernoulli newsvendor and its robust variants.
//!
//! Every solver is a pure function of the forecast and the estimated chance
//! of success `τ̂`. The `*_offer` helpers return the bare offer for hot loops;
//! the `solve_*` functions validate their inputs and record diagnostics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ambiguity::{
    self, lower_operator, make_fsd_set, upper_operator, BernoulliBall, BoundCdf,
};
use crate::dist::{Cdf, PartialExpectations, PredictiveCdf};
use crate::error::{check_probability, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    DrOmega,
    DrS,
    RobustOmega,
    RobustS,
}

/// Which piece of the DR-s solution is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DrsBranch {
    /// `F⁻¹(τ̄) < E[ω]`: the offer is the quantile at the upper ball bound.
    UpperBound,
    /// `F⁻¹(τ̲) > E[ω]`: the offer is the quantile at the lower ball bound.
    LowerBound,
    /// The ball straddles the crossing point; the offer is `E[ω]`.
    Mean,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OfferDecision {
    pub y_star: f64,
    pub method: Method,
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<DrsBranch>,
}

impl OfferDecision {
    fn new(y_star: f64, method: Method) -> Self {
        OfferDecision {
            y_star,
            method,
            diagnostics: BTreeMap::new(),
            branch: None,
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }
}

/// Offer minimizing the expected loss: `y* = F⁻¹(τ̂)`.
pub fn solve_direct<C: Cdf + ?Sized>(f: &C, tau_hat: f64) -> Result<OfferDecision> {
    check_probability("estimated chance of success", tau_hat)?;
    Ok(OfferDecision::new(f.inverse(tau_hat), Method::Direct).with("tau_hat", tau_hat))
}

fn check_fsd_radius(rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::domain(format!("ball radius ρ = {rho} is not in [0, 1]")))
    }
}

/// Quantiles at `τ̂` of the upper and lower bounding CDFs, `(F̄⁻¹, F̲⁻¹)`.
///
/// The upper CDF has the smaller quantile. At `ρ = 1` these are the support
/// bounds.
pub(crate) fn deformed_quantiles<C: Cdf + ?Sized>(f: &C, tau_hat: f64, rho: f64) -> (f64, f64) {
    if rho >= 1.0 {
        return (0.0, 1.0);
    }
    (
        f.inverse(lower_operator(tau_hat, rho)),
        f.inverse(upper_operator(tau_hat, rho)),
    )
}

/// `y* = τ̂·F̲⁻¹(τ̂) + (1 − τ̂)·F̄⁻¹(τ̂)`, with the limit `y* = τ̂` at `ρ = 1`.
pub(crate) fn dr_omega_offer<C: Cdf + ?Sized>(f: &C, tau_hat: f64, rho: f64) -> f64 {
    if rho >= 1.0 {
        return tau_hat;
    }
    let (q_upper, q_lower) = deformed_quantiles(f, tau_hat, rho);
    // exact when the two quantiles coincide
    q_upper + tau_hat * (q_lower - q_upper)
}

/// Offer minimizing the worst-case expected loss over the FSD set of radius `ρ`.
pub fn solve_dr_omega<C: Cdf + ?Sized>(f: &C, tau_hat: f64, rho: f64) -> Result<OfferDecision> {
    check_probability("estimated chance of success", tau_hat)?;
    check_fsd_radius(rho)?;
    let (q_upper, q_lower) = deformed_quantiles(f, tau_hat, rho);
    Ok(
        OfferDecision::new(dr_omega_offer(f, tau_hat, rho), Method::DrOmega)
            .with("tau_hat", tau_hat)
            .with("rho", rho)
            .with("upper_cdf_quantile", q_upper)
            .with("lower_cdf_quantile", q_lower),
    )
}

/// The robust limit of DR-ω: the offer equals `τ̂`.
pub fn solve_robust_omega(tau_hat: f64) -> Result<OfferDecision> {
    check_probability("estimated chance of success", tau_hat)?;
    Ok(OfferDecision::new(tau_hat, Method::RobustOmega).with("tau_hat", tau_hat))
}

/// DR-s offer from the ball bounds; ties with the mean resolve to the mean.
#[inline]
pub(crate) fn dr_s_offer<C: Cdf + ?Sized>(
    f: &C,
    tau_lower: f64,
    tau_upper: f64,
    mean: f64,
) -> (f64, DrsBranch) {
    let q_hi = f.inverse(tau_upper);
    if q_hi < mean {
        return (q_hi, DrsBranch::UpperBound);
    }
    let q_lo = f.inverse(tau_lower);
    if q_lo > mean {
        (q_lo, DrsBranch::LowerBound)
    } else {
        (mean, DrsBranch::Mean)
    }
}

/// Offer minimizing the worst case over the chance-of-success ball.
///
/// Expected-loss curves for different `τ` all cross at `y = E[ω]`, so the
/// worst case is the `τ̄` curve left of the mean and the `τ̲` curve right of it.
pub fn solve_dr_s<C: Cdf + ?Sized>(f: &C, ball: &BernoulliBall) -> Result<OfferDecision> {
    let mean = f.mean();
    let (y, branch) = dr_s_offer(f, ball.lower, ball.upper, mean);
    let mut d = OfferDecision::new(y, Method::DrS)
        .with("tau_hat", ball.center)
        .with("tau_lower", ball.lower)
        .with("tau_upper", ball.upper)
        .with("epsilon", ball.radius)
        .with("mean", mean)
        .with("quantile_at_tau_lower", f.inverse(ball.lower))
        .with("quantile_at_tau_upper", f.inverse(ball.upper));
    if let Some(t) = ball.theta {
        d = d.with("theta", t);
    }
    d.branch = Some(branch);
    Ok(d)
}

/// The robust limit of DR-s: the offer equals `E[ω]`.
pub fn solve_robust_s<C: Cdf + ?Sized>(f: &C) -> OfferDecision {
    let mean = f.mean();
    OfferDecision::new(mean, Method::RobustS).with("mean", mean)
}

/// Worst-case distribution of the FSD set for the DR-ω offer.
///
/// Follows the upper CDF until it reaches `τ̂`, stays flat at `τ̂`, then
/// follows the lower CDF: `F(x) = max(F̲(x), min(F̄(x), τ̂))`.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseCdf {
    tau_hat: f64,
    upper: BoundCdf,
    lower: BoundCdf,
    plateau: (f64, f64),
    breaks: Vec<f64>,
}

impl WorstCaseCdf {
    pub fn tau_hat(&self) -> f64 {
        self.tau_hat
    }

    /// `(F̄⁻¹(τ̂), F̲⁻¹(τ̂))`, the interval on which the CDF equals `τ̂`.
    pub fn plateau(&self) -> (f64, f64) {
        self.plateau
    }
}

pub fn worst_case_cdf(f: &PredictiveCdf, tau_hat: f64, rho: f64) -> Result<WorstCaseCdf> {
    check_probability("estimated chance of success", tau_hat)?;
    let set = make_fsd_set(f, rho)?;
    let plateau = (set.upper.inverse(tau_hat), set.lower.inverse(tau_hat));
    let mut breaks = set.upper.breakpoints();
    breaks.extend(set.lower.breakpoints());
    breaks.extend([plateau.0, plateau.1]);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    Ok(WorstCaseCdf {
        tau_hat,
        upper: set.upper,
        lower: set.lower,
        plateau,
        breaks,
    })
}

impl Cdf for WorstCaseCdf {
    fn cdf(&self, x: f64) -> f64 {
        self.lower
            .cdf(x)
            .max(self.upper.cdf(x).min(self.tau_hat))
    }

    fn inverse(&self, p: f64) -> f64 {
        if p <= self.tau_hat {
            self.upper.inverse(p)
        } else {
            self.lower.inverse(p)
        }
    }

    fn mean(&self) -> f64 {
        1.0 - ambiguity::integrate_cdf(self, 0.0, 1.0, &self.breaks)
    }

    fn partial_integrals(&self, y: f64) -> PartialExpectations {
        ambiguity::numeric_partials(self, y, &self.breaks)
    }
}
