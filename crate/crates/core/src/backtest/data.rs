use std::fs;
use std::path::{Path, PathBuf};

use chrono::{NaiveDateTime, Timelike};

use super::MarketRecord;
use crate::dist::{read_quantile_forecast, standard_forecast_levels, write_quantile_forecast, Cdf,
    PredictiveCdf, QuantileCurve};
use crate::error::{Error, Result};

/// Timestamp format written to market and report files.
pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M";

/// File name of the forecast for one delivery hour, with `.csv` appended.
pub const FORECAST_FILE_FORMAT: &str = "%Y-%m-%dT%H";

const ACCEPTED_TIMESTAMPS: [&str; 4] = [
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M",
    "%Y-%m-%d %H:%M:%S",
];

const HEADER: [&str; 5] = ["timestamp", "pi_s", "pi_b", "s_L", "omega_star"];

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedMarket {
    pub records: Vec<MarketRecord>,
    /// Missing hours, one message per gap.
    pub warnings: Vec<String>,
}

fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    let s = s.strip_suffix('Z').unwrap_or(s);
    ACCEPTED_TIMESTAMPS
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
        .filter(|t| t.minute() == 0 && t.second() == 0)
}

pub(crate) fn forecast_path(dir: &Path, ts: NaiveDateTime) -> PathBuf {
    dir.join(format!("{}.csv", ts.format(FORECAST_FILE_FORMAT)))
}

/// Reads the market CSV and the forecast of every listed hour.
///
/// Records must be strictly increasing in time. Missing hours are reported
/// as warnings, or as an error when `strict` is set.
pub fn load_market_data(market_csv: &Path, forecast_dir: &Path, strict: bool) -> Result<LoadedMarket> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(market_csv)
        .map_err(|e| crate::dist::csv_open_error(market_csv, e))?;
    let headers = rdr.headers()?.clone();
    for (i, expected) in HEADER.iter().enumerate() {
        if headers.get(i) != Some(*expected) {
            return Err(Error::Schema {
                path: market_csv.to_path_buf(),
                row: 1,
                column: headers.get(i).unwrap_or("<missing>").to_string(),
                message: format!("expected header `{}`", HEADER.join(",")),
            });
        }
    }
    if headers.len() != HEADER.len() {
        return Err(Error::Schema {
            path: market_csv.to_path_buf(),
            row: 1,
            column: headers.get(HEADER.len()).unwrap_or("").to_string(),
            message: format!("unexpected extra column; expected `{}`", HEADER.join(",")),
        });
    }

    let mut records: Vec<MarketRecord> = Vec::new();
    let mut warnings = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 2;
        let schema = |column: &str, message: String| Error::Schema {
            path: market_csv.to_path_buf(),
            row,
            column: column.to_string(),
            message,
        };
        let raw = |idx: usize| rec.get(idx).unwrap_or("");
        let timestamp = parse_timestamp(raw(0)).ok_or_else(|| {
            schema("timestamp", format!("not an ISO-8601 whole-hour timestamp: `{}`", raw(0)))
        })?;
        let number = |idx: usize| -> Result<f64> {
            raw(idx)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| schema(HEADER[idx], format!("not a number: `{}`", raw(idx))))
        };
        let (pi_s, pi_b, s_l, omega_star) = (number(1)?, number(2)?, number(3)?, number(4)?);
        if !(0.0..=1.0).contains(&omega_star) {
            return Err(schema("omega_star", format!("{omega_star} is not in [0, 1]")));
        }
        if let Some(prev) = records.last() {
            if timestamp <= prev.timestamp {
                return Err(schema(
                    "timestamp",
                    format!("{timestamp} does not follow {}", prev.timestamp),
                ));
            }
            let missing = (timestamp - prev.timestamp).num_hours() - 1;
            if missing > 0 {
                let msg = format!(
                    "{missing} missing hour(s) between {} and {timestamp}",
                    prev.timestamp
                );
                if strict {
                    return Err(Error::Data {
                        path: market_csv.to_path_buf(),
                        message: msg,
                    });
                }
                warnings.push(msg);
            }
        }
        let forecast = read_quantile_forecast(&forecast_path(forecast_dir, timestamp))?;
        records.push(MarketRecord {
            timestamp,
            pi_s,
            pi_b,
            s_l,
            omega_star,
            forecast,
        });
    }
    if records.is_empty() {
        return Err(Error::Data {
            path: market_csv.to_path_buf(),
            message: "no market records".into(),
        });
    }
    Ok(LoadedMarket { records, warnings })
}

/// Writes `market.csv` and a `forecasts/` directory under `dir`. Forecasts
/// that are not quantile curves are written at the standard levels.
pub fn write_market_data(dir: &Path, records: &[MarketRecord]) -> Result<(PathBuf, PathBuf)> {
    let forecast_dir = dir.join("forecasts");
    fs::create_dir_all(&forecast_dir).map_err(|e| Error::io(&forecast_dir, e))?;
    let market = dir.join("market.csv");
    let mut w = csv::Writer::from_path(&market).map_err(|e| crate::dist::csv_open_error(&market, e))?;
    w.write_record(HEADER)?;
    let levels = standard_forecast_levels();
    for r in records {
        w.write_record([
            r.timestamp.format(TIMESTAMP_FORMAT).to_string(),
            r.pi_s.to_string(),
            r.pi_b.to_string(),
            r.s_l.to_string(),
            r.omega_star.to_string(),
        ])?;
        let path = forecast_path(&forecast_dir, r.timestamp);
        match &r.forecast {
            PredictiveCdf::PiecewiseLinear(c) => write_quantile_forecast(&path, c)?,
            other => {
                let values: Vec<f64> = levels.iter().map(|&l| other.inverse(l)).collect();
                write_quantile_forecast(&path, &QuantileCurve::new(&levels, &values)?)?
            }
        }
    }
    w.flush().map_err(|e| Error::io(&market, e))?;
    Ok((market, forecast_dir))
}

/// Scales every balancing price's distance from the day-ahead price by
/// `factor`, which scales every penalty by the same factor.
pub fn scale_penalties(records: &[MarketRecord], factor: f64) -> Result<Vec<MarketRecord>> {
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::domain(format!("penalty scale factor {factor} must be positive")));
    }
    if factor == 1.0 {
        return Ok(records.to_vec());
    }
    Ok(records
        .iter()
        .map(|r| MarketRecord {
            pi_b: r.pi_s + factor * (r.pi_b - r.pi_s),
            ..r.clone()
        })
        .collect())
}
