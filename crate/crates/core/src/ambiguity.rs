//! Ambiguity sets around the two forecasts that drive an offer.
//!
//! For the generation forecast, an FSD set is the band between two CDFs
//! obtained from the reference with the double-power deformation operators
//!
//! ```text
//! upper:  Ō_ρ(u) = (1 − (1 − u)^{1/(1−ρ)})^{1−ρ}
//! lower:  O̲_ρ(u) = 1 − (1 − u^{1/(1−ρ)})^{1−ρ}
//! ```
//!
//! They satisfy `Ō_ρ(1 − u) = 1 − O̲_ρ(u)` and are each other's inverse:
//! `Ō_ρ⁻¹ = O̲_ρ`. Deformed quantiles are therefore the reference quantile
//! composed with the opposite operator, with no root finding.
//!
//! For the chance of success, the set is an interval ball `[τ̲, τ̄]`.

use serde::{Deserialize, Serialize};

use crate::dist::{Cdf, PartialExpectations, PredictiveCdf};
use crate::error::{check_probability, Error, Result};
use crate::quad;

const QUAD_TOL: f64 = 1e-12;

/// Largest radius accepted for level-adjusted balls; beyond it both bounds
/// are clipped to `[0, 1]` anyway.
pub const MAX_LEVEL_ADJUSTED_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

/// Upper double-power operator applied to a CDF value `u`.
pub fn upper_operator(u: f64, rho: f64) -> f64 {
    let r = 1.0 - rho;
    // 1 - (1-u)^(1/r)
    let base = -(ln_one_minus(u.min(1.0)) / r).exp_m1();
    base.max(0.0).powf(r)
}

/// Lower double-power operator applied to a CDF value `u`.
pub fn lower_operator(u: f64, rho: f64) -> f64 {
    let r = 1.0 - rho;
    let t = u.max(0.0).powf(1.0 / r);
    // 1 - (1-t)^r
    -(r * ln_one_minus(t.min(1.0))).exp_m1()
}

/// Inverse of [`upper_operator`], which is the lower operator.
pub fn upper_operator_inverse(p: f64, rho: f64) -> f64 {
    lower_operator(p, rho)
}

/// Inverse of [`lower_operator`], which is the upper operator.
pub fn lower_operator_inverse(p: f64, rho: f64) -> f64 {
    upper_operator(p, rho)
}

#[inline]
fn ln_one_minus(x: f64) -> f64 {
    (-x).ln_1p()
}

fn check_radius(rho: f64) -> Result<()> {
    if (0.0..1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "deformation radius ρ = {rho} is not in [0, 1)"
        )))
    }
}

/// A reference CDF passed through one of the deformation operators.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedCdf {
    reference: PredictiveCdf,
    rho: f64,
    side: Side,
}

impl DeformedCdf {
    pub fn reference(&self) -> &PredictiveCdf {
        &self.reference
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn side(&self) -> Side {
        self.side
    }

    fn operator(&self, u: f64) -> f64 {
        match self.side {
            Side::Upper => upper_operator(u, self.rho),
            Side::Lower => lower_operator(u, self.rho),
        }
    }

    fn operator_inverse(&self, p: f64) -> f64 {
        match self.side {
            Side::Upper => upper_operator_inverse(p, self.rho),
            Side::Lower => lower_operator_inverse(p, self.rho),
        }
    }
}

pub fn deform_upper(reference: &PredictiveCdf, rho: f64) -> Result<DeformedCdf> {
    check_radius(rho)?;
    Ok(DeformedCdf {
        reference: reference.clone(),
        rho,
        side: Side::Upper,
    })
}

pub fn deform_lower(reference: &PredictiveCdf, rho: f64) -> Result<DeformedCdf> {
    check_radius(rho)?;
    Ok(DeformedCdf {
        reference: reference.clone(),
        rho,
        side: Side::Lower,
    })
}

impl Cdf for DeformedCdf {
    fn cdf(&self, x: f64) -> f64 {
        self.operator(self.reference.cdf(x))
    }

    fn inverse(&self, p: f64) -> f64 {
        self.reference.inverse(self.operator_inverse(p))
    }

    fn mean(&self) -> f64 {
        1.0 - integrate_cdf(self, 0.0, 1.0, &breakpoints(&self.reference))
    }

    fn partial_integrals(&self, y: f64) -> PartialExpectations {
        numeric_partials(self, y, &breakpoints(&self.reference))
    }
}

/// One side of an FSD set: a deformed CDF, or the point-mass limit at `ρ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundCdf {
    Deformed(DeformedCdf),
    Limit(PredictiveCdf),
}

impl Cdf for BoundCdf {
    fn cdf(&self, x: f64) -> f64 {
        match self {
            BoundCdf::Deformed(d) => d.cdf(x),
            BoundCdf::Limit(h) => h.cdf(x),
        }
    }

    fn inverse(&self, p: f64) -> f64 {
        match self {
            BoundCdf::Deformed(d) => d.inverse(p),
            BoundCdf::Limit(h) => h.inverse(p),
        }
    }

    fn mean(&self) -> f64 {
        match self {
            BoundCdf::Deformed(d) => d.mean(),
            BoundCdf::Limit(h) => h.mean(),
        }
    }

    fn partial_integrals(&self, y: f64) -> PartialExpectations {
        match self {
            BoundCdf::Deformed(d) => d.partial_integrals(y),
            BoundCdf::Limit(h) => h.partial_integrals(y),
        }
    }
}

impl BoundCdf {
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match self {
            BoundCdf::Deformed(d) => breakpoints(&d.reference),
            BoundCdf::Limit(h) => breakpoints(h),
        }
    }
}

/// First-order stochastic dominance band `lower ≤ reference ≤ upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct FsdAmbiguitySet {
    pub reference: PredictiveCdf,
    pub rho: f64,
    pub upper: BoundCdf,
    pub lower: BoundCdf,
}

pub fn make_fsd_set(reference: &PredictiveCdf, rho: f64) -> Result<FsdAmbiguitySet> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::domain(format!("ball radius ρ = {rho} is not in [0, 1]")));
    }
    let (upper, lower) = if rho == 1.0 {
        (
            BoundCdf::Limit(PredictiveCdf::Heaviside(0.0)),
            BoundCdf::Limit(PredictiveCdf::Heaviside(1.0)),
        )
    } else {
        (
            BoundCdf::Deformed(deform_upper(reference, rho)?),
            BoundCdf::Deformed(deform_lower(reference, rho)?),
        )
    };
    Ok(FsdAmbiguitySet {
        reference: reference.clone(),
        rho,
        upper,
        lower,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallKind {
    Uniform,
    LevelAdjusted,
}

/// Interval ball `[τ̲, τ̄]` around an estimated chance of success.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BernoulliBall {
    pub center: f64,
    pub radius: f64,
    pub kind: BallKind,
    /// Shape parameter, level-adjusted balls only.
    pub theta: Option<f64>,
    pub lower: f64,
    pub upper: f64,
}

impl BernoulliBall {
    pub fn uniform(tau_hat: f64, eps: f64) -> Result<Self> {
        make_bernoulli_ball(tau_hat, eps, BallKind::Uniform, None)
    }

    pub fn level_adjusted(tau_hat: f64, eps: f64, theta: f64) -> Result<Self> {
        make_bernoulli_ball(tau_hat, eps, BallKind::LevelAdjusted, Some(theta))
    }

    /// Half-width before clipping to `[0, 1]`.
    pub fn half_width(&self) -> f64 {
        half_width(self.center, self.radius, self.theta.unwrap_or(0.0))
    }
}

#[inline]
fn half_width(tau_hat: f64, eps: f64, theta: f64) -> f64 {
    eps * (1.0 - 4.0 * theta * tau_hat * (1.0 - tau_hat))
}

/// Ball bounds without validation, for hot loops over pre-validated grids.
#[inline]
pub(crate) fn ball_bounds(tau_hat: f64, eps: f64, theta: f64) -> (f64, f64) {
    let hw = half_width(tau_hat, eps, theta);
    ((tau_hat - hw).max(0.0), (tau_hat + hw).min(1.0))
}

pub fn make_bernoulli_ball(
    tau_hat: f64,
    eps: f64,
    kind: BallKind,
    theta: Option<f64>,
) -> Result<BernoulliBall> {
    check_probability("estimated chance of success", tau_hat)?;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("ball radius ε = {eps} must be finite and ≥ 0")));
    }
    let theta_value = match (kind, theta) {
        (BallKind::Uniform, Some(t)) => {
            return Err(Error::domain(format!(
                "shape θ = {t} given for a uniform ball; θ only applies to level-adjusted balls"
            )))
        }
        (BallKind::Uniform, None) => 0.0,
        (BallKind::LevelAdjusted, None) => {
            return Err(Error::domain("level-adjusted ball needs a shape θ"))
        }
        (BallKind::LevelAdjusted, Some(t)) => {
            if !(0.0..1.0).contains(&t) {
                return Err(Error::domain(format!("shape θ = {t} is not in [0, 1)")));
            }
            if eps > MAX_LEVEL_ADJUSTED_RADIUS {
                return Err(Error::domain(format!(
                    "level-adjusted radius ε = {eps} exceeds {MAX_LEVEL_ADJUSTED_RADIUS}"
                )));
            }
            t
        }
    };
    let (lower, upper) = ball_bounds(tau_hat, eps, theta_value);
    Ok(BernoulliBall {
        center: tau_hat,
        radius: eps,
        kind,
        theta,
        lower,
        upper,
    })
}

pub(crate) fn breakpoints(f: &PredictiveCdf) -> Vec<f64> {
    match f {
        PredictiveCdf::PiecewiseLinear(c) => c.values().to_vec(),
        PredictiveCdf::Heaviside(c) => vec![*c],
        PredictiveCdf::Beta(_) | PredictiveCdf::Uniform01 => Vec::new(),
    }
}

pub(crate) fn integrate_cdf<C: Cdf>(f: &C, a: f64, b: f64, breaks: &[f64]) -> f64 {
    quad::integrate_with_breaks(|x| f.cdf(x), a, b, breaks, QUAD_TOL)
}

pub(crate) fn numeric_partials<C: Cdf>(f: &C, y: f64, breaks: &[f64]) -> PartialExpectations {
    let under = integrate_cdf(f, 0.0, y, breaks);
    let over = quad::integrate_with_breaks(|x| 1.0 - f.cdf(x), y, 1.0, breaks, QUAD_TOL);
    PartialExpectations { under, over }
}
