use chrono::NaiveDate;
use drnews_core::ambiguity::BernoulliBall;
use drnews_core::backtest::{
    cross_validate, generate_synthetic, run_backtest, scale_penalties, BacktestPlan, MarketRecord,
    ParameterGrids, Strategy, SynthConfig,
};
use drnews_core::economics::{penalties, revenue, two_price_balancing_price, SettlementInput};
use drnews_core::estimation::{hourly_tau_forecast, HourlyObservation, TauEstimatorConfig};
use drnews_core::solvers::{solve_dr_omega, solve_dr_s};

fn plan() -> BacktestPlan {
    BacktestPlan {
        warm_start_days: 30,
        tau_window_days: 20,
        cv_days: 10,
        grids: ParameterGrids {
            rho: (0..=10).map(|i| f64::from(i) * 0.05).collect(),
            epsilon: (0..=30).map(|i| f64::from(i) * 0.01).collect(),
            theta: vec![0.0, 0.5, 0.9],
            m: vec![5],
        },
        ..BacktestPlan::default()
    }
}

fn day_number(d: NaiveDate, start: NaiveDate) -> i64 {
    (d - start).num_days()
}

/// Revenue over the CV window of an offer rule, built only from the
/// estimator, the solvers and the settlement functions.
fn window_revenue(
    records: &[MarketRecord],
    window: (NaiveDate, NaiveDate),
    m: u32,
    offer: &dyn Fn(&MarketRecord, f64) -> f64,
) -> f64 {
    let start = records[0].date();
    let history: Vec<HourlyObservation> = records
        .iter()
        .map(|r| HourlyObservation {
            day: day_number(r.date(), start),
            hour: r.hour(),
            penalties: penalties(r.pi_s, r.pi_b, r.s_l),
        })
        .collect();
    let cfg = TauEstimatorConfig {
        window_days: m,
        fallback: Some(0.5),
        ..Default::default()
    };
    records
        .iter()
        .filter(|r| r.date() >= window.0 && r.date() <= window.1)
        .map(|r| {
            // decided the day before delivery, with one day of settlement lag
            let decided = day_number(r.date(), start) - 1;
            let tau_hat = hourly_tau_forecast(&history, &cfg, decided, r.hour()).unwrap().tau_hat;
            revenue(&SettlementInput {
                pi_s: r.pi_s,
                pi_b: two_price_balancing_price(r.pi_s, r.pi_b, r.s_l),
                s_l: r.s_l,
                y: offer(r, tau_hat),
                omega_star: r.omega_star,
            })
        })
        .sum()
}

fn first_argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

#[test]
fn chosen_parameters_match_exhaustive_grid_evaluation() {
    let plan = plan();
    for seed in 0..3 {
        let records = generate_synthetic(&SynthConfig {
            days: 40,
            seed,
            ..SynthConfig::default()
        })
        .unwrap();
        let cv = cross_validate(&records, &plan).unwrap();
        let sel = &cv.selections[0];

        let eps_revenue: Vec<f64> = plan
            .grids
            .epsilon
            .iter()
            .map(|&e| {
                window_revenue(&records, sel.window, 5, &|r, t| {
                    solve_dr_s(&r.forecast, &BernoulliBall::uniform(t, e).unwrap()).unwrap().y_star
                })
            })
            .collect();
        let best = plan.grids.epsilon[first_argmax(&eps_revenue)];
        let chosen = sel.params[&Strategy::DrSUniform].epsilon.unwrap();
        assert!((chosen - best).abs() <= 0.01 + 1e-12, "seed {seed}: chose {chosen}, grid best {best}");

        let rho_revenue: Vec<f64> = plan
            .grids
            .rho
            .iter()
            .map(|&rho| {
                window_revenue(&records, sel.window, 5, &|r, t| {
                    solve_dr_omega(&r.forecast, t, rho).unwrap().y_star
                })
            })
            .collect();
        let best = plan.grids.rho[first_argmax(&rho_revenue)];
        let chosen = sel.params[&Strategy::DrOmega].rho.unwrap();
        assert!((chosen - best).abs() <= 0.05 + 1e-12, "seed {seed}: chose {chosen}, grid best {best}");
    }
}

#[test]
fn penalty_scaling_scales_the_gap_to_the_direct_offer() {
    let plan = plan();
    let records = generate_synthetic(&SynthConfig {
        days: 60,
        seed: 5,
        ..SynthConfig::default()
    })
    .unwrap();
    let gap = |records: &[MarketRecord]| {
        let cv = cross_validate(records, &plan).unwrap();
        let report = run_backtest(records, &plan, &cv).unwrap();
        let bn = report.row(Strategy::Bn).unwrap().total_revenue;
        assert!(report.row(Strategy::Bn).unwrap().regret_per_mwh > 0.0);
        [Strategy::DrOmega, Strategy::DrSUniform, Strategy::DrSLevelAdjusted]
            .map(|s| report.row(s).unwrap().total_revenue - bn)
    };
    let base = gap(&records);
    let tripled = gap(&scale_penalties(&records, 3.0).unwrap());
    for (b, t) in base.iter().zip(&tripled) {
        assert!((t - 3.0 * b).abs() <= 1e-6 * (1.0 + b.abs()), "{t} vs 3 × {b}");
    }
}
