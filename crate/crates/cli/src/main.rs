mod args;
mod config;

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::Parser;
use serde::Serialize;

use args::{
    Ball, BacktestArgs, Cli, Command, Common, CvModeArg, DeformArgs, DistArgs, Format, MsweepArgs,
    SimArgs, SimulateArgs, SolveArgs, SolveStrategy, SynthArgs,
};
use drnews_core::ambiguity::{make_bernoulli_ball, make_fsd_set, BallKind};
use drnews_core::backtest::{
    self, BacktestPlan, CvMode, CvOutcome, MarketRecord, ParameterGrids, Strategy, SynthConfig,
    SynthGeneration,
};
use drnews_core::dist::{read_quantile_forecast, Cdf, PredictiveCdf};
use drnews_core::montecarlo::{self, epsilon_grid, SimConfig};
use drnews_core::solvers;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag combinations; exit status 2.
    Usage(String),
    /// Data or domain failure; exit status 1.
    Core(drnews_core::Error),
}

impl From<drnews_core::Error> for CliError {
    fn from(e: drnews_core::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let result = config::expand(argv).and_then(|argv| {
        let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
        // synth writes a directory and leaves stdout free
        let to_file = matches!(cli.command, Command::Synth(_)) || common(&cli.command).out.is_some();
        run(cli).map(|summary| (summary, to_file))
    });
    match result {
        Ok((summary, true)) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Ok((summary, false)) => {
            // stdout carries the artifact itself
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error[usage]: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(1)
        }
    }
}

fn common(command: &Command) -> &Common {
    match command {
        Command::Solve(a) => &a.common,
        Command::Deform(a) => &a.common,
        Command::Simulate(a) => &a.common,
        Command::Msweep(a) => &a.common,
        Command::Backtest(a) | Command::Crossval(a) => &a.common,
        Command::Synth(a) => &a.common,
    }
}

fn run(cli: Cli) -> CliResult<String> {
    let common = common(&cli.command);
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = common.threads {
            if n == 0 {
                return Err(CliError::Usage("--threads must be at least 1".into()));
            }
            b = b.num_threads(n);
        }
        b.build()
            .map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))?
    };
    pool.install(|| match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Deform(a) => deform(a),
        Command::Simulate(a) => simulate(a),
        Command::Msweep(a) => msweep(a),
        Command::Backtest(a) => run_backtest(a),
        Command::Crossval(a) => crossval(a),
        Command::Synth(a) => synth(a),
    })
}

/// Writes the artifact to `--out` through a temporary file and rename, or to
/// standard output.
fn emit(common: &Common, bytes: &[u8]) -> CliResult<()> {
    let Some(path) = &common.out else {
        std::io::stdout()
            .write_all(bytes)
            .map_err(|e| io_error(Path::new("<stdout>"), e))?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_error(dir, e))?;
    tmp.write_all(bytes).map_err(|e| io_error(path, e))?;
    tmp.persist(path).map_err(|e| io_error(path, e.error))?;
    Ok(())
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Core(drnews_core::Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value).map_err(drnews_core::Error::from)?;
    v.push(b'\n');
    Ok(v)
}

fn load_dist(d: &DistArgs) -> CliResult<PredictiveCdf> {
    match (&d.dist, &d.forecast) {
        (Some(name), None) => Ok(name.parse()?),
        (None, Some(path)) => Ok(read_quantile_forecast(path)?),
        _ => Err(CliError::Usage("give exactly one of --dist or --forecast".into())),
    }
}

fn solve(a: &SolveArgs) -> CliResult<String> {
    let f = load_dist(&a.dist)?;
    let d = match a.strategy {
        SolveStrategy::Direct => solvers::solve_direct(&f, a.tau)?,
        SolveStrategy::DrOmega => solvers::solve_dr_omega(&f, a.tau, a.rho)?,
        SolveStrategy::DrS => {
            let kind = match a.ball {
                Ball::Uniform => BallKind::Uniform,
                Ball::LevelAdjusted => BallKind::LevelAdjusted,
            };
            let ball = make_bernoulli_ball(a.tau, a.eps, kind, a.theta)?;
            solvers::solve_dr_s(&f, &ball)?
        }
        SolveStrategy::RobustOmega => solvers::solve_robust_omega(a.tau)?,
        SolveStrategy::RobustS => solvers::solve_robust_s(&f),
    };
    let bytes = match a.common.output {
        Format::Json => json(&d)?,
        Format::Csv => {
            let mut s = String::from("key,value\n");
            let _ = writeln!(s, "y_star,{}", d.y_star);
            for (k, v) in &d.diagnostics {
                let _ = writeln!(s, "{k},{v}");
            }
            s.into_bytes()
        }
    };
    emit(&a.common, &bytes)?;
    Ok(format!("y*={}", d.y_star))
}

fn deform(a: &DeformArgs) -> CliResult<String> {
    let f = load_dist(&a.dist)?;
    if !(a.grid_step > 0.0 && a.grid_step <= 1.0) {
        return Err(CliError::Usage("--grid-step must be in (0, 1]".into()));
    }
    let set = make_fsd_set(&f, a.rho)?;
    let x = epsilon_grid(a.grid_step, 1.0);
    #[derive(Serialize)]
    struct Band {
        rho: f64,
        x: Vec<f64>,
        reference: Vec<f64>,
        upper: Vec<f64>,
        lower: Vec<f64>,
    }
    let band = Band {
        rho: a.rho,
        reference: x.iter().map(|&v| f.cdf(v)).collect(),
        upper: x.iter().map(|&v| set.upper.cdf(v)).collect(),
        lower: x.iter().map(|&v| set.lower.cdf(v)).collect(),
        x,
    };
    let bytes = match a.common.output {
        Format::Json => json(&band)?,
        Format::Csv => {
            let mut s = String::from("x,reference,upper,lower\n");
            for i in 0..band.x.len() {
                let _ = writeln!(s, "{},{},{},{}", band.x[i], band.reference[i], band.upper[i], band.lower[i]);
            }
            s.into_bytes()
        }
    };
    emit(&a.common, &bytes)?;
    Ok(format!("deformed band at rho={} on {} points", a.rho, band.x.len()))
}

fn sim_config(s: &SimArgs, m: u32, seed: u64) -> CliResult<SimConfig> {
    if !(s.eps_step > 0.0 && s.eps_max >= 0.0 && s.eps_max <= 1.0) {
        return Err(CliError::Usage("need --eps-step > 0 and --eps-max in [0, 1]".into()));
    }
    let cfg = SimConfig {
        true_dist: s.dist.parse()?,
        true_tau: s.tau,
        m,
        replicates: s.n,
        epsilon_grid: epsilon_grid(s.eps_step, s.eps_max),
        theta: s.theta,
        master_seed: seed,
        batches: s.batches,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn simulate(a: &SimulateArgs) -> CliResult<String> {
    let cfg = sim_config(&a.sim, a.m, a.common.seed)?;
    let r = montecarlo::run_epsilon_sweep(&cfg)?;
    let bytes = match a.common.output {
        Format::Json => json(&montecarlo::summarize(&cfg, &r))?,
        Format::Csv => {
            let mut buf = Vec::new();
            montecarlo::write_sweep_csv(&mut buf, &r)?;
            buf
        }
    };
    emit(&a.common, &bytes)?;
    Ok(format!(
        "gamma_u={:.4} gamma_la={:.4} eps_u={} eps_la={} replicates={} seed={} runtime={:.1}s",
        r.gamma_u, r.gamma_la, r.best_epsilon_u, r.best_epsilon_la, cfg.replicates, cfg.master_seed, r.runtime_secs
    ))
}

fn msweep(a: &MsweepArgs) -> CliResult<String> {
    if a.m_min == 0 || a.m_max < a.m_min {
        return Err(CliError::Usage("need 1 ≤ --m-min ≤ --m-max".into()));
    }
    let base = sim_config(&a.sim, a.m_min, a.common.seed)?;
    let ms: Vec<u32> = (a.m_min..=a.m_max).collect();
    let points = montecarlo::run_m_sweep(&base, &ms)?;
    let bytes = match a.common.output {
        Format::Json => json(&points)?,
        Format::Csv => {
            let mut s = String::from(
                "m,gamma_u,gamma_la,best_epsilon_u,best_epsilon_la,gamma_u_se,gamma_la_se,gamma_diff_se\n",
            );
            for p in &points {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    p.m, p.gamma_u, p.gamma_la, p.best_epsilon_u, p.best_epsilon_la, p.gamma_u_se, p.gamma_la_se, p.gamma_diff_se
                );
            }
            s.into_bytes()
        }
    };
    emit(&a.common, &bytes)?;
    let last = points.last().expect("non-empty range");
    Ok(format!(
        "m={}..{} gamma_u(m={})={:.4} gamma_la(m={})={:.4}",
        a.m_min, a.m_max, last.m, last.gamma_u, last.m, last.gamma_la
    ))
}

fn parse_grid(name: &str, s: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("--{name}: expected `start:stop:step` or a comma list, got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let n: Vec<f64> = parts.iter().map(|p| p.trim().parse().map_err(|_| bad())).collect::<CliResult<_>>()?;
        let (start, stop, step) = (n[0], n[1], n[2]);
        if !(step > 0.0 && stop >= start) {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| start + i as f64 * step).collect());
    }
    s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

fn plan_from(a: &BacktestArgs) -> CliResult<BacktestPlan> {
    let defaults = ParameterGrids::default();
    let grids = ParameterGrids {
        rho: a.rho_grid.as_deref().map_or(Ok(defaults.rho), |s| parse_grid("rho-grid", s))?,
        epsilon: a.eps_grid.as_deref().map_or(Ok(defaults.epsilon), |s| parse_grid("eps-grid", s))?,
        theta: a.theta_grid.as_deref().map_or(Ok(defaults.theta), |s| parse_grid("theta-grid", s))?,
        m: match &a.m_grid {
            None => defaults.m,
            Some(s) => s
                .split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| CliError::Usage(format!("--m-grid: bad value `{p}`"))))
                .collect::<CliResult<_>>()?,
        },
    };
    let strategies = match &a.strategies {
        None => Strategy::ALL.to_vec(),
        Some(s) => s
            .split(',')
            .map(|p| Strategy::parse(p.trim()).map_err(|e| CliError::Usage(e.to_string())))
            .collect::<CliResult<_>>()?,
    };
    let plan = BacktestPlan {
        warm_start_days: a.warm_start,
        tau_window_days: a.tau_window,
        cv_days: a.cv_days,
        cv_mode: match a.cv_mode {
            CvModeArg::Fixed => CvMode::FixedWindow,
            CvModeArg::Sliding => CvMode::Sliding,
        },
        grids,
        strategies,
        per_hour: !a.pooled,
        fallback_tau: if a.no_fallback { None } else { Some(0.5) },
        ..BacktestPlan::default()
    };
    plan.validate()?;
    Ok(plan)
}

fn load_records(a: &BacktestArgs) -> CliResult<(Vec<MarketRecord>, Vec<String>)> {
    let (records, warnings) = match (&a.market, a.synthetic_days) {
        (_, Some(days)) => {
            let cfg = SynthConfig {
                days,
                tau: a.synthetic_tau,
                generation: generation(a.varying_forecasts),
                seed: a.common.seed,
                ..SynthConfig::default()
            };
            (backtest::generate_synthetic(&cfg)?, Vec::new())
        }
        (Some(market), None) => {
            let forecasts = match &a.forecasts {
                Some(d) => d.clone(),
                None => market
                    .parent()
                    .unwrap_or_else(|| Path::new("."))
                    .join("forecasts"),
            };
            let loaded = backtest::load_market_data(market, &forecasts, a.strict)?;
            (loaded.records, loaded.warnings)
        }
        (None, None) => return Err(CliError::Usage("give --market or --synthetic-days".into())),
    };
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    Ok((backtest::scale_penalties(&records, a.penalty_scale)?, warnings))
}

fn run_backtest(a: &BacktestArgs) -> CliResult<String> {
    let plan = plan_from(a)?;
    let (records, warnings) = load_records(a)?;
    let cv = backtest::cross_validate(&records, &plan)?;
    let report = backtest::run_backtest(&records, &plan, &cv)?;
    #[derive(Serialize)]
    struct Out<'a> {
        plan: &'a BacktestPlan,
        penalty_scale: f64,
        warnings: &'a [String],
        report: &'a backtest::BacktestReport,
    }
    let bytes = match a.common.output {
        Format::Json => json(&Out {
            plan: &plan,
            penalty_scale: a.penalty_scale,
            warnings: &warnings,
            report: &report,
        })?,
        Format::Csv => {
            let mut buf = Vec::new();
            backtest::write_report_csv(&mut buf, &report)?;
            buf
        }
    };
    emit(&a.common, &bytes)?;
    let mut summary = format!("{} evaluation hours from {}", report.hours, report.evaluation_start);
    for s in [Strategy::Bn, Strategy::DrSUniform, Strategy::DrSLevelAdjusted, Strategy::DrOmega] {
        if let Some(r) = report.row(s) {
            let _ = write!(summary, "; {} regret/MWh={:.4}", r.strategy, r.regret_per_mwh);
        }
    }
    Ok(summary)
}

fn crossval(a: &BacktestArgs) -> CliResult<String> {
    let plan = plan_from(a)?;
    let (records, _) = load_records(a)?;
    let cv: CvOutcome = backtest::cross_validate(&records, &plan)?;
    let bytes = match a.common.output {
        Format::Json => json(&cv)?,
        Format::Csv => {
            let mut s = String::from("first_day,window_start,window_end,m,strategy,rho,epsilon,theta\n");
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            for sel in &cv.selections {
                for (strategy, p) in &sel.params {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{}",
                        sel.first_day, sel.window.0, sel.window.1, sel.m, strategy.name(),
                        opt(p.rho), opt(p.epsilon), opt(p.theta)
                    );
                }
            }
            s.into_bytes()
        }
    };
    emit(&a.common, &bytes)?;
    let first = &cv.selections[0];
    Ok(format!("{} selection(s); first in force from {} with m={}", cv.selections.len(), first.first_day, first.m))
}

fn generation(varying: bool) -> SynthGeneration {
    if varying {
        SynthGeneration::Varying
    } else {
        SynthConfig::default().generation
    }
}

fn synth(a: &SynthArgs) -> CliResult<String> {
    let start = NaiveDate::parse_from_str(&a.start, "%Y-%m-%d")
        .map_err(|_| CliError::Usage(format!("--start: expected YYYY-MM-DD, got `{}`", a.start)))?;
    let cfg = SynthConfig {
        start,
        days: a.days,
        tau: a.tau,
        generation: generation(a.varying_forecasts),
        seed: a.common.seed,
        ..SynthConfig::default()
    };
    let records = backtest::generate_synthetic(&cfg)?;
    // build next to the target, then swap in
    let parent = match a.dir.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => Path::new(".").to_path_buf(),
    };
    std::fs::create_dir_all(&parent).map_err(|e| io_error(&parent, e))?;
    let staging = tempfile::tempdir_in(&parent).map_err(|e| io_error(&parent, e))?;
    backtest::write_market_data(staging.path(), &records)?;
    if a.dir.exists() {
        std::fs::remove_dir_all(&a.dir).map_err(|e| io_error(&a.dir, e))?;
    }
    let staged = staging.keep();
    std::fs::rename(&staged, &a.dir).map_err(|e| io_error(&a.dir, e))?;
    Ok(format!("{} records over {} days written to {}", records.len(), a.days, a.dir.display()))
}
