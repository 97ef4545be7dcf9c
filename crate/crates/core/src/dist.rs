//! Distributions of normalized generation on the unit interval.
//!
//! Every distribution here has support `[0, 1]`: `cdf(0⁻) = 0` and
//! `cdf(1) = 1`. Quantiles are generalized inverses restricted to the
//! support, so `quantile(0) = 0` for every distribution.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::beta::{beta_reg, ln_beta};

use crate::error::{check_probability, Error, Result};

/// Expected shortfall and excess of `ω` around an offer `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialExpectations {
    /// `E[(y − ω)₊] = ∫₀^y F(x) dx`, the expected overage volume.
    pub under: f64,
    /// `E[(ω − y)₊] = ∫_y^1 (1 − F(x)) dx`, the expected underage volume.
    pub over: f64,
}

/// A CDF on `[0, 1]`.
///
/// Implementors provide the unchecked primitives; the provided methods
/// validate their arguments.
pub trait Cdf {
    /// `P[ω ≤ x]`. Arguments outside `[0, 1]` are clamped to the support.
    fn cdf(&self, x: f64) -> f64;

    /// Generalized inverse `inf{x ∈ [0,1] : cdf(x) ≥ p}` for `p ∈ [0, 1]`.
    fn inverse(&self, p: f64) -> f64;

    fn mean(&self) -> f64;

    /// Partial expectations for `y ∈ [0, 1]`.
    fn partial_integrals(&self, y: f64) -> PartialExpectations;

    fn quantile(&self, p: f64) -> Result<f64> {
        check_probability("quantile level", p)?;
        Ok(self.inverse(p))
    }

    fn partial_expectations(&self, y: f64) -> Result<PartialExpectations> {
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::domain(format!("offer y = {y} is not in [0, 1]")));
        }
        Ok(self.partial_integrals(y))
    }

    /// `n` i.i.d. draws by inverse-transform sampling.
    fn sample(&self, rng: &mut RngStream, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.inverse(rng.uniform())).collect()
    }
}

impl<T: Cdf + ?Sized> Cdf for &T {
    fn cdf(&self, x: f64) -> f64 {
        (**self).cdf(x)
    }
    fn inverse(&self, p: f64) -> f64 {
        (**self).inverse(p)
    }
    fn mean(&self) -> f64 {
        (**self).mean()
    }
    fn partial_integrals(&self, y: f64) -> PartialExpectations {
        (**self).partial_integrals(y)
    }
}

/// Predictive distribution of generation for one delivery period.
#[derive(Debug, Clone, PartialEq)]
pub enum PredictiveCdf {
    /// Linear interpolation of quantile forecasts, anchored at `(0, 0)`
    /// and `(1, 1)`.
    PiecewiseLinear(QuantileCurve),
    Beta(BetaDist),
    Uniform01,
    /// Point mass at `location`.
    Heaviside(f64),
}

impl PredictiveCdf {
    pub fn piecewise_linear(levels: &[f64], values: &[f64]) -> Result<Self> {
        QuantileCurve::new(levels, values).map(PredictiveCdf::PiecewiseLinear)
    }

    pub fn beta(a: f64, b: f64) -> Result<Self> {
        BetaDist::new(a, b).map(PredictiveCdf::Beta)
    }

    pub fn heaviside(location: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&location) {
            return Err(Error::InvalidDistribution(format!(
                "point mass location {location} is outside [0, 1]"
            )));
        }
        Ok(PredictiveCdf::Heaviside(location))
    }
}

impl Cdf for PredictiveCdf {
    fn cdf(&self, x: f64) -> f64 {
        match self {
            PredictiveCdf::PiecewiseLinear(c) => c.cdf(x),
            PredictiveCdf::Beta(b) => b.cdf(x),
            PredictiveCdf::Uniform01 => x.clamp(0.0, 1.0),
            PredictiveCdf::Heaviside(c) => {
                if x >= *c {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn inverse(&self, p: f64) -> f64 {
        match self {
            PredictiveCdf::PiecewiseLinear(c) => c.inverse(p),
            PredictiveCdf::Beta(b) => b.inverse(p),
            PredictiveCdf::Uniform01 => p,
            PredictiveCdf::Heaviside(c) => {
                if p > 0.0 {
                    *c
                } else {
                    0.0
                }
            }
        }
    }

    fn mean(&self) -> f64 {
        match self {
            PredictiveCdf::PiecewiseLinear(c) => c.mean(),
            PredictiveCdf::Beta(b) => b.mean(),
            PredictiveCdf::Uniform01 => 0.5,
            PredictiveCdf::Heaviside(c) => *c,
        }
    }

    fn partial_integrals(&self, y: f64) -> PartialExpectations {
        match self {
            PredictiveCdf::PiecewiseLinear(c) => c.partial_integrals(y),
            PredictiveCdf::Beta(b) => b.partial_integrals(y),
            PredictiveCdf::Uniform01 => PartialExpectations {
                under: 0.5 * y * y,
                over: 0.5 * (1.0 - y) * (1.0 - y),
            },
            PredictiveCdf::Heaviside(c) => PartialExpectations {
                under: (y - c).max(0.0),
                over: (c - y).max(0.0),
            },
        }
    }
}

impl fmt::Display for PredictiveCdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictiveCdf::PiecewiseLinear(c) => {
                write!(f, "piecewise:{}", c.levels().len())
            }
            PredictiveCdf::Beta(b) => write!(f, "beta:{},{}", b.a(), b.b()),
            PredictiveCdf::Uniform01 => f.write_str("uniform"),
            PredictiveCdf::Heaviside(c) => write!(f, "heaviside:{c}"),
        }
    }
}

/// Parses `uniform`, `beta:A,B` and `heaviside:LOC` (alias `point:LOC`).
impl FromStr for PredictiveCdf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<f64>> {
            params
                .split(',')
                .map(|t| {
                    t.trim().parse::<f64>().map_err(|_| {
                        Error::InvalidDistribution(format!("bad parameter `{t}` in `{s}`"))
                    })
                })
                .collect()
        };
        match name.to_ascii_lowercase().as_str() {
            "uniform" | "uniform01" => {
                if params.is_empty() {
                    Ok(PredictiveCdf::Uniform01)
                } else {
                    Err(Error::InvalidDistribution(format!(
                        "uniform takes no parameters: `{s}`"
                    )))
                }
            }
            "beta" => match nums()?.as_slice() {
                [a, b] => PredictiveCdf::beta(*a, *b),
                _ => Err(Error::InvalidDistribution(format!(
                    "beta needs two parameters: `{s}`"
                ))),
            },
            "heaviside" | "point" => match nums()?.as_slice() {
                [c] => PredictiveCdf::heaviside(*c),
                _ => Err(Error::InvalidDistribution(format!(
                    "heaviside needs one location: `{s}`"
                ))),
            },
            _ => Err(Error::InvalidDistribution(format!(
                "unknown distribution `{s}` (expected uniform, beta:A,B or heaviside:LOC)"
            ))),
        }
    }
}

/// Quantile function interpolated linearly between forecast quantiles.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileCurve {
    // Knots including the (0, 0) and (1, 1) anchors.
    probs: Vec<f64>,
    values: Vec<f64>,
}

impl QuantileCurve {
    /// `levels` strictly increasing in `(0, 1)`, `values` non-decreasing in `[0, 1]`.
    pub fn new(levels: &[f64], values: &[f64]) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidDistribution(msg));
        if levels.len() != values.len() {
            return bad(format!(
                "{} levels but {} values",
                levels.len(),
                values.len()
            ));
        }
        if levels.is_empty() {
            return bad("quantile forecast has no quantiles".into());
        }
        for (i, (&l, &v)) in levels.iter().zip(values).enumerate() {
            if !(l > 0.0 && l < 1.0) {
                return bad(format!("level {l} (index {i}) is not in (0, 1)"));
            }
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("value {v} (index {i}) is not in [0, 1]"));
            }
            if i > 0 {
                if l <= levels[i - 1] {
                    return bad(format!("levels not strictly increasing at index {i}"));
                }
                if v < values[i - 1] {
                    return bad(format!("values decreasing at index {i}"));
                }
            }
        }
        let mut probs = Vec::with_capacity(levels.len() + 2);
        let mut vals = Vec::with_capacity(levels.len() + 2);
        probs.push(0.0);
        vals.push(0.0);
        probs.extend_from_slice(levels);
        vals.extend_from_slice(values);
        probs.push(1.0);
        vals.push(1.0);
        Ok(QuantileCurve {
            probs,
            values: vals,
        })
    }

    /// Forecast levels, without the anchors.
    pub fn levels(&self) -> &[f64] {
        &self.probs[1..self.probs.len() - 1]
    }

    /// Forecast values, without the anchors.
    pub fn values(&self) -> &[f64] {
        &self.values[1..self.values.len() - 1]
    }

    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        // last knot with value <= x; values[0] = 0 so i >= 0
        let i = self.values.partition_point(|&v| v <= x) - 1;
        if i + 1 >= self.values.len() {
            return 1.0;
        }
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let (p0, p1) = (self.probs[i], self.probs[i + 1]);
        p0 + (p1 - p0) * (x - v0) / (v1 - v0)
    }

    fn inverse(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return self.values[0];
        }
        if p >= 1.0 {
            return 1.0;
        }
        let j = self.probs.partition_point(|&q| q < p);
        let (p0, p1) = (self.probs[j - 1], self.probs[j]);
        let (v0, v1) = (self.values[j - 1], self.values[j]);
        v0 + (v1 - v0) * (p - p0) / (p1 - p0)
    }

    fn mean(&self) -> f64 {
        self.segments()
            .map(|(p0, p1, v0, v1)| (p1 - p0) * 0.5 * (v0 + v1))
            .sum()
    }

    // E[(y-ω)+] and E[(ω-y)+] integrated exactly over the linear quantile segments.
    fn partial_integrals(&self, y: f64) -> PartialExpectations {
        let mut under = 0.0;
        let mut over = 0.0;
        for (p0, p1, v0, v1) in self.segments() {
            let dp = p1 - p0;
            if v1 <= y {
                under += dp * (y - 0.5 * (v0 + v1));
            } else if v0 >= y {
                over += dp * (0.5 * (v0 + v1) - y);
            } else {
                let cross = p0 + dp * (y - v0) / (v1 - v0);
                under += 0.5 * (cross - p0) * (y - v0);
                over += 0.5 * (p1 - cross) * (v1 - y);
            }
        }
        PartialExpectations { under, over }
    }

    fn segments(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.probs
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(p, v)| (p[0], p[1], v[0], v[1]))
    }
}

/// Beta(a, b) distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaDist {
    a: f64,
    b: f64,
    ln_norm: f64,
}

impl BetaDist {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidDistribution(format!(
                "beta parameters must be positive and finite, got ({a}, {b})"
            )));
        }
        Ok(BetaDist {
            a,
            b,
            ln_norm: ln_beta(a, b),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn variance(&self) -> f64 {
        let s = self.a + self.b;
        self.a * self.b / (s * s * (s + 1.0))
    }

    pub fn density(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        ((self.a - 1.0) * x.ln() + (self.b - 1.0) * (1.0 - x).ln() - self.ln_norm).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x >= 1.0 {
            1.0
        } else {
            beta_reg(self.a, self.b, x)
        }
    }

    fn mean(&self) -> f64 {
        self.a / (self.a + self.b)
    }

    // Newton on I_x(a,b) = p, falling back to bisection whenever a step
    // leaves the current bracket.
    fn inverse(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut x = self.mean();
        for _ in 0..200 {
            let f = self.cdf(x) - p;
            if f == 0.0 {
                return x;
            }
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.density(x);
            let newton = x - f / d;
            let next = if d.is_finite() && d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - x).abs() <= 1e-15 * x.max(1e-300) || hi - lo <= 1e-16 {
                return next;
            }
            x = next;
        }
        x
    }

    fn partial_integrals(&self, y: f64) -> PartialExpectations {
        let mu = self.mean();
        let (i_a, i_a1) = if y <= 0.0 {
            (0.0, 0.0)
        } else if y >= 1.0 {
            (1.0, 1.0)
        } else {
            (beta_reg(self.a, self.b, y), beta_reg(self.a + 1.0, self.b, y))
        };
        // E[ω 1{ω ≤ y}] = mean · I_y(a+1, b)
        PartialExpectations {
            under: (y * i_a - mu * i_a1).max(0.0),
            over: (mu * (1.0 - i_a1) - y * (1.0 - i_a)).max(0.0),
        }
    }
}

/// Reproducible random stream keyed by `(master_seed, stream_id)`.
///
/// Streams with distinct ids are independent ChaCha8 streams under the same key.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        RngStream {
            master_seed,
            stream_id,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        BernoulliThreshold::new(p).draw(self)
    }
}

/// Precomputed integer threshold for fast Bernoulli draws.
#[derive(Debug, Clone, Copy)]
pub struct BernoulliThreshold(Option<u64>);

impl BernoulliThreshold {
    pub fn new(p: f64) -> Self {
        if p >= 1.0 {
            BernoulliThreshold(None)
        } else {
            // saturating float-to-int cast; p <= 0 gives 0
            BernoulliThreshold(Some((p * 18_446_744_073_709_551_616.0) as u64))
        }
    }

    #[inline]
    pub fn draw(self, rng: &mut RngStream) -> bool {
        match self.0 {
            None => {
                rng.next_u64();
                true
            }
            Some(t) => rng.next_u64() < t,
        }
    }
}

/// Reads a `level,value` quantile forecast file into a piecewise-linear CDF.
pub fn read_quantile_forecast(path: &Path) -> Result<PredictiveCdf> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_open_error(path, e))?;
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "level" || &headers[1] != "value" {
        return Err(Error::Schema {
            path: path.to_path_buf(),
            row: 1,
            column: headers.iter().collect::<Vec<_>>().join(","),
            message: "expected header `level,value`".into(),
        });
    }
    let mut levels = Vec::new();
    let mut values = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 2;
        let field = |idx: usize, name: &str| -> Result<f64> {
            rec.get(idx)
                .and_then(|s| s.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Schema {
                    path: path.to_path_buf(),
                    row,
                    column: name.into(),
                    message: format!("not a number: `{}`", rec.get(idx).unwrap_or("")),
                })
        };
        levels.push(field(0, "level")?);
        values.push(field(1, "value")?);
    }
    if levels.is_empty() {
        return Err(Error::Data {
            path: path.to_path_buf(),
            message: "quantile forecast file has no rows".into(),
        });
    }
    PredictiveCdf::piecewise_linear(&levels, &values).map_err(|e| Error::Data {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Writes forecast quantiles in the `level,value` format.
pub fn write_quantile_forecast(path: &Path, curve: &QuantileCurve) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_open_error(path, e))?;
    w.write_record(["level", "value"])?;
    for (l, v) in curve.levels().iter().zip(curve.values()) {
        w.write_record([l.to_string(), v.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub(crate) fn csv_open_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Data {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    }
}

/// The quantile levels used by the case-study forecasts: 0.025, 0.075, …, 0.975.
pub fn standard_forecast_levels() -> Vec<f64> {
    (0..20).map(|i| f64::from(1 + 2 * i) / 40.0).collect()
}
