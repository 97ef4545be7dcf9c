use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn drnews(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drnews"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn direct_offer_on_uniform_is_the_level() {
    let o = drnews(&["solve", "--strategy", "direct", "--dist", "uniform", "--tau", "0.75"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&o)["y_star"], 0.75);
    assert_eq!(stderr(&o).trim(), "y*=0.75");
}

#[test]
fn summary_goes_to_stdout_when_writing_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("offer.json");
    let o = drnews(&[
        "solve", "--strategy", "direct", "--dist", "uniform", "--tau", "0.75", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "y*=0.75");
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["method"], "direct");
}

#[test]
fn full_uniform_ball_offers_the_mean() {
    let o = drnews(&[
        "solve", "--strategy", "dr-s", "--dist", "beta:2,6", "--tau", "0.75", "--eps", "1",
        "--ball", "uniform",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["y_star"], 0.25);
    assert_eq!(v["branch"], "mean");
}

#[test]
fn solve_csv_layout() {
    let o = drnews(&[
        "solve", "--strategy", "dr-omega", "--dist", "beta:2,6", "--tau", "0.75", "--rho", "0.3",
        "--output", "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("key,value"));
    assert!(lines.next().unwrap().starts_with("y_star,"));
}

#[test]
fn usage_errors_exit_with_two() {
    let o = drnews(&["solve", "--strategy", "nope", "--tau", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = drnews(&["solve", "--strategy", "direct", "--tau", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[usage]"));
    let o = drnews(&["backtest", "--synthetic-days", "200", "--m-grid", "7,x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_and_data_errors_exit_with_one() {
    let o = drnews(&["solve", "--strategy", "direct", "--dist", "uniform", "--tau", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[domain]"), "{}", stderr(&o));

    let dir = tempfile::tempdir().unwrap();
    let market = dir.path().join("market.csv");
    fs::write(&market, "").unwrap();
    let o = drnews(&["backtest", "--market", market.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error["));
}

#[test]
fn deform_band_is_ordered() {
    let o = drnews(&[
        "deform", "--dist", "beta:2,6", "--rho", "0.4", "--grid-step", "0.1", "--output", "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,reference,upper,lower"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    for r in rows {
        assert!(r[3] <= r[1] && r[1] <= r[2], "{r:?}");
    }
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let out = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--out", out.to_str().unwrap()]);
    let o = drnews(&all);
    assert!(o.status.success(), "{}", stderr(&o));
    fs::read(out).unwrap()
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let sim = ["simulate", "--n", "20000", "--seed", "9", "--output", "csv"];
    let a = run_to(dir.path(), "a.csv", &sim);
    let b = run_to(dir.path(), "b.csv", &sim);
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with("epsilon,arm,expected_loss\n"));

    let bt = [
        "backtest", "--synthetic-days", "60", "--warm-start", "30", "--tau-window", "20",
        "--cv-days", "10", "--m-grid", "5,10", "--eps-grid", "0:0.1:0.05", "--rho-grid", "0,0.2",
        "--theta-grid", "0.9", "--seed", "4",
    ];
    let a = run_to(dir.path(), "a.json", &bt);
    let b = run_to(dir.path(), "b.json", &bt);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["report"]["hours"], 30 * 24);
}

#[test]
fn config_file_supplies_flags_and_command_line_wins() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("solve.conf");
    fs::write(&conf, "# offer\nstrategy = direct\ndist = uniform\ntau = 0.3\n").unwrap();
    let c = conf.to_str().unwrap();
    let o = drnews(&["solve", "--config", c]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&o)["y_star"], 0.3);
    let o = drnews(&["solve", "--config", c, "--tau", "0.6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&o)["y_star"], 0.6);
}

#[test]
fn synthetic_directory_round_trips_through_backtest() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let o = drnews(&["synth", "--dir", data.to_str().unwrap(), "--days", "45", "--seed", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("1080 records"));
    assert_eq!(fs::read_dir(data.join("forecasts")).unwrap().count(), 1080);

    let flags = [
        "--warm-start", "30", "--tau-window", "20", "--cv-days", "10", "--m-grid", "5",
        "--eps-grid", "0,0.05", "--rho-grid", "0", "--theta-grid", "0.9", "--seed", "2",
    ];
    let mut from_disk = vec!["backtest", "--market"];
    let market = data.join("market.csv");
    from_disk.push(market.to_str().unwrap());
    from_disk.extend(flags);
    let mut in_memory = vec!["backtest", "--synthetic-days", "45"];
    in_memory.extend(flags);
    let a = json(&drnews(&from_disk));
    let b = json(&drnews(&in_memory));
    assert_eq!(a["report"]["rows"], b["report"]["rows"]);
}

#[test]
fn crossval_csv_lists_each_tuned_strategy() {
    let o = drnews(&[
        "crossval", "--synthetic-days", "60", "--warm-start", "30", "--tau-window", "20",
        "--cv-days", "10", "--m-grid", "5", "--eps-grid", "0,0.05", "--rho-grid", "0",
        "--theta-grid", "0.9", "--cv-mode", "sliding", "--output", "csv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    // 30 evaluation days, three tuned strategies each
    assert_eq!(text.lines().count(), 1 + 30 * 3);
}
