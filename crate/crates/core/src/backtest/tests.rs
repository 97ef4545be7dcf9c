use std::fs;

use super::*;
use crate::economics::penalties;

fn small_plan() -> BacktestPlan {
    BacktestPlan {
        warm_start_days: 30,
        tau_window_days: 20,
        cv_days: 10,
        grids: ParameterGrids {
            rho: vec![0.0, 0.1, 0.3],
            epsilon: vec![0.0, 0.05, 0.1],
            theta: vec![0.0, 0.9],
            m: vec![5, 10, 20],
        },
        ..BacktestPlan::default()
    }
}

fn synth(days: u32, seed: u64) -> Vec<MarketRecord> {
    generate_synthetic(&SynthConfig {
        days,
        seed,
        ..SynthConfig::default()
    })
    .unwrap()
}

#[test]
fn settle_clamps_wrong_side_balancing_prices() {
    let r = MarketRecord {
        timestamp: NaiveDate::from_ymd_opt(2020, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap(),
        pi_s: 50.0,
        pi_b: 60.0,
        s_l: 1.0,
        omega_star: 0.5,
        forecast: PredictiveCdf::Uniform01,
    };
    // long system, surplus, balancing price above day-ahead: settles at π_s
    assert!((r.settle(0.3) - 25.0).abs() < 1e-12);
}

#[test]
fn oracle_has_zero_regret_and_dominates() {
    let records = synth(45, 1);
    let plan = small_plan();
    let cv = cross_validate(&records, &plan).unwrap();
    let report = run_backtest(&records, &plan, &cv).unwrap();
    let oracle = report.row(Strategy::Oracle).unwrap();
    assert_eq!(oracle.regret_per_mwh, 0.0);
    for row in &report.rows {
        assert!(row.revenue_per_mwh <= oracle.revenue_per_mwh + 1e-12, "{}", row.strategy);
    }
    assert_eq!(report.row(Strategy::Bn).unwrap().advantage_ratio_pct, 100.0);
    assert_eq!(report.hours, 15 * 24);
}

#[test]
fn report_totals_match_hourly_settlements() {
    let records = synth(40, 2);
    let plan = small_plan();
    let cv = cross_validate(&records, &plan).unwrap();
    let report = run_backtest(&records, &plan, &cv).unwrap();
    for row in &report.rows {
        let s = Strategy::parse(&row.strategy).unwrap();
        let sum: f64 = report
            .series
            .iter()
            .filter(|r| r.strategy == s)
            .map(|r| r.revenue)
            .sum();
        assert!((sum - row.total_revenue).abs() <= 1e-6 * row.total_revenue.abs());
    }
}

#[test]
fn penalty_free_market_pays_every_strategy_the_same() {
    let records: Vec<_> = synth(40, 3)
        .into_iter()
        .map(|r| MarketRecord { pi_b: r.pi_s, ..r })
        .collect();
    let plan = small_plan();
    let cv = cross_validate(&records, &plan).unwrap();
    // all grid points tie, so the smallest radius wins
    let sel = &cv.selections[0];
    assert_eq!(sel.params[&Strategy::DrSUniform].epsilon, Some(0.0));
    assert_eq!(sel.params[&Strategy::DrOmega].rho, Some(0.0));
    assert_eq!(sel.m, 5);
    let report = run_backtest(&records, &plan, &cv).unwrap();
    let oracle = report.row(Strategy::Oracle).unwrap().total_revenue;
    for row in &report.rows {
        assert!((row.total_revenue - oracle).abs() < 1e-9 * oracle);
    }
}

#[test]
fn single_point_grid_is_chosen() {
    let records = synth(40, 4);
    let mut plan = small_plan();
    plan.grids = ParameterGrids {
        rho: vec![0.2],
        epsilon: vec![0.07],
        theta: vec![0.5],
        m: vec![9],
    };
    let cv = cross_validate(&records, &plan).unwrap();
    let sel = &cv.selections[0];
    assert_eq!(sel.m, 9);
    assert_eq!(sel.params[&Strategy::DrOmega].rho, Some(0.2));
    assert_eq!(sel.params[&Strategy::DrSLevelAdjusted].theta, Some(0.5));
    assert_eq!(sel.params[&Strategy::DrSLevelAdjusted].epsilon, Some(0.07));
}

#[test]
fn cv_window_precedes_evaluation_with_settlement_lag() {
    let records = synth(40, 5);
    let plan = small_plan();
    let cv = cross_validate(&records, &plan).unwrap();
    let start = records[0].date();
    let sel = &cv.selections[0];
    assert_eq!(sel.first_day, start + chrono::Days::new(30));
    assert_eq!(sel.window, (start + chrono::Days::new(19), start + chrono::Days::new(28)));

    let sliding = BacktestPlan { cv_mode: CvMode::Sliding, ..plan };
    let cv = cross_validate(&records, &sliding).unwrap();
    assert_eq!(cv.selections.len(), 10);
    assert_eq!(cv.selections[9].window.1, start + chrono::Days::new(37));
}

#[test]
fn insufficient_history() {
    let records = synth(30, 6);
    assert!(matches!(
        cross_validate(&records, &small_plan()),
        Err(Error::InsufficientHistory(_))
    ));
    let mut plan = small_plan();
    plan.tau_window_days = 10;
    assert!(matches!(cross_validate(&synth(40, 6), &plan), Err(Error::Config(_))));
}

#[test]
fn scale_penalties_is_linear() {
    let records = synth(2, 7);
    assert_eq!(scale_penalties(&records, 1.0).unwrap(), records);
    let doubled = scale_penalties(&records, 2.0).unwrap();
    for (a, b) in records.iter().zip(&doubled) {
        let pa = penalties(a.pi_s, a.pi_b, a.s_l);
        let pb = penalties(b.pi_s, b.pi_b, b.s_l);
        assert!((pb.pi_o - 2.0 * pa.pi_o).abs() < 1e-9);
        assert!((pb.pi_u - 2.0 * pa.pi_u).abs() < 1e-9);
    }
    assert!(scale_penalties(&records, 0.0).is_err());
}

#[test]
fn synthetic_market_statistics() {
    let records = synth(200, 8);
    assert_eq!(records.len(), 200 * 24);
    let mut long = 0usize;
    let mut balanced = 0usize;
    let mut ratio = 0.0;
    for r in &records {
        let p = penalties(r.pi_s, r.pi_b, r.s_l);
        if p.pi_o > 0.0 || p.pi_u > 0.0 {
            balanced += 1;
            long += usize::from(p.pi_o > 0.0);
            ratio += (p.pi_o + p.pi_u) / r.pi_s;
        }
    }
    let n = records.len() as f64;
    assert!((balanced as f64 / n - 0.95).abs() < 0.01);
    assert!((long as f64 / balanced as f64 - 0.75).abs() < 0.02);
    assert!((ratio / balanced as f64 - 0.135).abs() < 0.005);
}

#[test]
fn load_round_trip_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let records = synth(1, 9);
    let (market, forecasts) = write_market_data(dir.path(), &records[..2]).unwrap();
    let loaded = load_market_data(&market, &forecasts, true).unwrap();
    assert_eq!(loaded.records.len(), 2);
    assert!(loaded.warnings.is_empty());
    assert_eq!(loaded.records[1].omega_star, records[1].omega_star);
    assert_eq!(loaded.records[0].forecast, records[0].forecast);

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    assert!(load_market_data(&empty, &forecasts, false).is_err());
    fs::write(&empty, "timestamp,pi_s,pi_b,s_L,omega_star\n").unwrap();
    assert!(matches!(load_market_data(&empty, &forecasts, false), Err(Error::Data { .. })));

    let bad = dir.path().join("bad.csv");
    fs::write(
        &bad,
        "timestamp,pi_s,pi_b,s_L,omega_star\n2019-01-01T00:00,50,40,1,0.3\n2019-01-01T01:00,50,x,1,0.3\n",
    )
    .unwrap();
    match load_market_data(&bad, &forecasts, false) {
        Err(Error::Schema { row, column, .. }) => {
            assert_eq!(row, 3);
            assert_eq!(column, "pi_b");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn gaps_warn_or_fail() {
    let dir = tempfile::tempdir().unwrap();
    let records = synth(1, 10);
    let subset = [records[0].clone(), records[3].clone()];
    let (market, forecasts) = write_market_data(dir.path(), &subset).unwrap();
    let loaded = load_market_data(&market, &forecasts, false).unwrap();
    assert_eq!(loaded.warnings.len(), 1);
    assert!(loaded.warnings[0].contains("2 missing"));
    assert!(load_market_data(&market, &forecasts, true).is_err());
}

#[test]
fn decide_day_skips_the_oracle() {
    let records = synth(40, 11);
    let plan = small_plan();
    let cv = cross_validate(&records, &plan).unwrap();
    let day = records[0].date() + chrono::Days::new(35);
    let decisions = decide_day(&records, &plan, &cv, day).unwrap();
    assert_eq!(decisions.len(), 24 * 6);
    assert!(decisions.iter().all(|d| d.strategy != Strategy::Oracle));
    assert!(decisions.iter().all(|d| (0.0..=1.0).contains(&d.offer)));
}
