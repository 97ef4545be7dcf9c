//! Two-price imbalance settlement and the Bernoulli opportunity loss.

use serde::Serialize;

use crate::dist::Cdf;
use crate::error::{check_probability, Error, Result};

/// One settlement period seen by a price-taking producer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettlementInput {
    /// Day-ahead price.
    pub pi_s: f64,
    /// Balancing price.
    pub pi_b: f64,
    /// System length; only the sign is used (positive = long).
    pub s_l: f64,
    /// Offered energy, as a fraction of capacity.
    pub y: f64,
    /// Realized generation, as a fraction of capacity.
    pub omega_star: f64,
}

/// Overage and underage penalties of one period. At most one is non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PenaltyPair {
    pub pi_o: f64,
    pub pi_u: f64,
}

/// Price applied to the imbalance `ω* − y` under two-price settlement.
///
/// Imbalances in the same direction as the system pay the balancing price;
/// the others settle at the day-ahead price.
pub fn effective_balancing_price(pi_s: f64, pi_b: f64, s_l: f64, y: f64, omega_star: f64) -> f64 {
    if (omega_star - y) * s_l > 0.0 {
        pi_b
    } else {
        pi_s
    }
}

/// `R = π_s·y + π̃_b·(ω* − y)`.
pub fn revenue(input: &SettlementInput) -> f64 {
    let SettlementInput {
        pi_s,
        pi_b,
        s_l,
        y,
        omega_star,
    } = *input;
    pi_s * y + effective_balancing_price(pi_s, pi_b, s_l, y, omega_star) * (omega_star - y)
}

/// Penalties from prices and system state, negative values clamped to zero.
///
/// `s_L = 0` counts as a long system.
pub fn penalties(pi_s: f64, pi_b: f64, s_l: f64) -> PenaltyPair {
    let raw = raw_penalties(pi_s, pi_b, s_l);
    PenaltyPair {
        pi_o: raw.pi_o.max(0.0),
        pi_u: raw.pi_u.max(0.0),
    }
}

/// Penalties before clamping; may be negative on one-price style data.
pub fn raw_penalties(pi_s: f64, pi_b: f64, s_l: f64) -> PenaltyPair {
    if s_l >= 0.0 {
        PenaltyPair {
            pi_o: pi_s - pi_b,
            pi_u: 0.0,
        }
    } else {
        PenaltyPair {
            pi_o: 0.0,
            pi_u: pi_b - pi_s,
        }
    }
}

/// Balancing price adapted to two-price settlement: a long system never
/// pays more than the day-ahead price for surplus, a short one never less
/// for deficits. Equivalent to clamping negative penalties to zero.
pub fn two_price_balancing_price(pi_s: f64, pi_b: f64, s_l: f64) -> f64 {
    if s_l >= 0.0 {
        pi_b.min(pi_s)
    } else {
        pi_b.max(pi_s)
    }
}

/// `Some(true)` when overage is penalized, `Some(false)` for underage,
/// `None` for a period without balancing penalty.
pub fn bernoulli_outcome(p: PenaltyPair) -> Option<bool> {
    if p.pi_o > 0.0 {
        Some(true)
    } else if p.pi_u > 0.0 {
        Some(false)
    } else {
        None
    }
}

/// `L = s(ω − y)₊ + (1 − s)(y − ω)₊`; `s` may be an outcome in {0, 1} or a
/// chance of success for the expectation over `s`.
pub fn scaled_loss(y: f64, omega: f64, s: f64) -> f64 {
    s * (omega - y).max(0.0) + (1.0 - s) * (y - omega).max(0.0)
}

/// `E_ω[L(y, ω, τ)] = (1 − τ)·E[(y − ω)₊] + τ·E[(ω − y)₊]`.
pub fn expected_loss<C: Cdf + ?Sized>(f: &C, y: f64, tau: f64) -> Result<f64> {
    check_probability("chance of success", tau)?;
    let pe = f.partial_expectations(y)?;
    Ok((1.0 - tau) * pe.under + tau * pe.over)
}

/// Same as [`expected_loss`] with arguments already known to be valid.
#[inline]
pub(crate) fn expected_loss_unchecked<C: Cdf + ?Sized>(f: &C, y: f64, tau: f64) -> f64 {
    let pe = f.partial_integrals(y);
    (1.0 - tau) * pe.under + tau * pe.over
}

/// Aggregate performance of one strategy against the oracle and a baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerformanceRow {
    pub strategy: String,
    pub total_revenue: f64,
    pub revenue_per_mwh: f64,
    pub regret_per_mwh: f64,
    /// Share of periods, in percent, where revenue is at least the baseline's.
    pub advantage_ratio_pct: f64,
    /// `Σ (R_strategy − R_baseline)` up to each period, i.e. the cumulative
    /// regret of the baseline minus that of the strategy.
    #[serde(skip)]
    pub cum_delta_regret: Vec<f64>,
}

/// Per-MWh revenue and regret, advantage ratio and cumulative Δ-regret.
pub fn regret_and_ratio(
    strategies: &[(&str, &[f64])],
    oracle: &[f64],
    generation: &[f64],
    baseline: &[f64],
) -> Result<Vec<PerformanceRow>> {
    let n = oracle.len();
    if generation.len() != n || baseline.len() != n {
        return Err(Error::Misaligned(format!(
            "oracle has {n} periods, generation {}, baseline {}",
            generation.len(),
            baseline.len()
        )));
    }
    let energy: f64 = generation.iter().sum();
    if energy <= 0.0 {
        return Err(Error::domain("total generation must be positive"));
    }
    let oracle_total: f64 = oracle.iter().sum();
    strategies
        .iter()
        .map(|(name, revenues)| {
            if revenues.len() != n {
                return Err(Error::Misaligned(format!(
                    "strategy `{name}` has {} periods, expected {n}",
                    revenues.len()
                )));
            }
            let total: f64 = revenues.iter().sum();
            let wins = revenues
                .iter()
                .zip(baseline)
                .filter(|(r, b)| r >= b)
                .count();
            let mut acc = 0.0;
            let cum_delta_regret = revenues
                .iter()
                .zip(baseline)
                .map(|(r, b)| {
                    acc += r - b;
                    acc
                })
                .collect();
            Ok(PerformanceRow {
                strategy: name.to_string(),
                total_revenue: total,
                revenue_per_mwh: total / energy,
                regret_per_mwh: (oracle_total - total) / energy,
                advantage_ratio_pct: if n == 0 {
                    100.0
                } else {
                    100.0 * wins as f64 / n as f64
                },
                cum_delta_regret,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::PredictiveCdf;

    fn input(pi_s: f64, pi_b: f64, s_l: f64, y: f64, omega_star: f64) -> SettlementInput {
        SettlementInput {
            pi_s,
            pi_b,
            s_l,
            y,
            omega_star,
        }
    }

    #[test]
    fn balancing_price_cases() {
        assert_eq!(effective_balancing_price(50.0, 40.0, 1.0, 0.3, 0.5), 40.0);
        assert_eq!(effective_balancing_price(50.0, 70.0, 1.0, 0.5, 0.3), 50.0);
        assert_eq!(effective_balancing_price(50.0, 70.0, 0.0, 0.5, 0.3), 50.0);
        assert_eq!(effective_balancing_price(50.0, 70.0, 0.0, 0.3, 0.5), 50.0);
    }

    #[test]
    fn revenue_cases() {
        let r = revenue(&input(50.0, 40.0, 1.0, 0.3, 0.5));
        assert!((r - 23.0).abs() < 1e-12);
        assert_eq!(revenue(&input(50.0, 10.0, -1.0, 0.4, 0.4)), 20.0);
        // deficit while the system is long helps it
        let r = revenue(&input(50.0, 40.0, 1.0, 0.5, 0.3));
        assert!((r - 50.0 * 0.3).abs() < 1e-12);
    }

    #[test]
    fn penalty_cases() {
        assert_eq!(penalties(50.0, 40.0, 1.0), PenaltyPair { pi_o: 10.0, pi_u: 0.0 });
        assert_eq!(penalties(50.0, 70.0, -1.0), PenaltyPair { pi_o: 0.0, pi_u: 20.0 });
        assert_eq!(penalties(50.0, 60.0, 1.0), PenaltyPair { pi_o: 0.0, pi_u: 0.0 });
        assert_eq!(penalties(50.0, 40.0, 0.0).pi_o, 10.0);
    }

    #[test]
    fn outcomes() {
        assert_eq!(bernoulli_outcome(PenaltyPair { pi_o: 10.0, pi_u: 0.0 }), Some(true));
        assert_eq!(bernoulli_outcome(PenaltyPair { pi_o: 0.0, pi_u: 20.0 }), Some(false));
        assert_eq!(bernoulli_outcome(PenaltyPair::default()), None);
    }

    #[test]
    fn scaled_loss_cases() {
        assert_eq!(scaled_loss(0.4, 0.4, 1.0), 0.0);
        assert!((scaled_loss(0.3, 0.5, 1.0) - 0.2).abs() < 1e-15);
        assert_eq!(scaled_loss(0.5, 0.3, 1.0), 0.0);
    }

    #[test]
    fn expected_loss_uniform_center() {
        let v = expected_loss(&PredictiveCdf::Uniform01, 0.5, 0.5).unwrap();
        assert_eq!(v, 0.125);
        assert!(expected_loss(&PredictiveCdf::Uniform01, 0.5, 1.5).is_err());
        assert!(expected_loss(&PredictiveCdf::Uniform01, -0.5, 0.5).is_err());
    }

    #[test]
    fn two_period_report() {
        // period 1: long system, surplus of 0.2 settled at 40 -> 15 + 8 = 23 vs oracle 25
        // period 2: short system, deficit of 0.1 settled at 80 -> 24 - 8 = 16 vs oracle 20
        let oracle = [
            revenue(&input(50.0, 40.0, 1.0, 0.5, 0.5)),
            revenue(&input(60.0, 80.0, -1.0, 0.3333333333333333, 0.3333333333333333)),
        ];
        let strat = [
            revenue(&input(50.0, 40.0, 1.0, 0.3, 0.5)),
            revenue(&input(60.0, 80.0, -1.0, 0.4, 0.3)),
        ];
        assert!((strat[0] - 23.0).abs() < 1e-12);
        assert!((strat[1] - 16.0).abs() < 1e-12);
        let generation = [0.5, 0.3333333333333333];
        let rows = regret_and_ratio(&[("s", &strat[..]), ("o", &oracle[..])], &oracle, &generation, &strat)
            .unwrap();
        let energy = 0.5 + 0.3333333333333333;
        assert!((rows[0].revenue_per_mwh - 39.0 / energy).abs() < 1e-9);
        assert!((rows[0].regret_per_mwh - 6.0 / energy).abs() < 1e-9);
        assert_eq!(rows[0].advantage_ratio_pct, 100.0);
        assert_eq!(rows[1].regret_per_mwh, 0.0);
        assert_eq!(rows[1].cum_delta_regret.len(), 2);
        assert!((rows[1].cum_delta_regret[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn misaligned_series() {
        let err = regret_and_ratio(&[("a", &[1.0][..])], &[1.0, 2.0], &[0.1, 0.2], &[1.0, 2.0]);
        assert!(matches!(err, Err(Error::Misaligned(_))));
        let err = regret_and_ratio(&[], &[1.0, 2.0], &[0.1], &[1.0, 2.0]);
        assert!(matches!(err, Err(Error::Misaligned(_))));
    }
}
