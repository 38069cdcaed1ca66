//! Parametric laws for inter-arrival, service, patience and vacation times.

use serde::{Deserialize, Serialize};
use statrs::function::erf::{erfc, erfc_inv};
use statrs::function::gamma::{gamma, gamma_lr, gamma_ur};

use crate::error::{Error, Result};
use crate::quad;
use crate::rng::VariateStream;

/// Absolute tolerance for numeric transforms.
pub const QUAD_TOL: f64 = 1e-10;
/// Numeric transforms integrate up to this quantile.
const QUAD_CAP_LEVEL: f64 = 1.0 - 1e-9;
const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Exponential {
        rate: f64,
    },
    Deterministic {
        value: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    Pareto {
        shape: f64,
        scale: f64,
    },
    Lognormal {
        mu: f64,
        sigma: f64,
    },
    Weibull {
        shape: f64,
        scale: f64,
    },
    HyperExponential {
        weights: Vec<f64>,
        rates: Vec<f64>,
    },
    /// Every draw is `+∞`. As a patience law it means nobody balks.
    PointMassAtInfinity,
}

/// A validated probability law on `[0, ∞]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistParts", into = "DistParts")]
pub struct DistSpec {
    family: Family,
}

/// Flat `{family, params}` form used in configuration files and manifests.
///
/// Hyper-exponential parameters are interleaved `(weight, rate)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistParts {
    pub family: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} > 0 (got {v})")))
    }
}

fn nonnegative(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} >= 0 (got {v})")))
    }
}

/// Rewrites a named-parameter error in terms of the flat `params[i]` list.
fn positional(e: Error, family: &str) -> Error {
    let Error::InvalidParameter(msg) = &e else {
        return e;
    };
    let Some((field, rest)) = msg.split_once(' ') else {
        return e;
    };
    let pair = |prefix: &str, offset: usize| {
        field
            .strip_prefix(prefix)
            .and_then(|t| t.strip_suffix(']'))
            .and_then(|i| i.parse::<usize>().ok())
            .map(|i| 2 * i + offset)
    };
    let index = match (family, field) {
        (_, "rate" | "value" | "lo" | "shape" | "mu") => Some(0),
        (_, "hi" | "scale" | "sigma") => Some(1),
        ("HyperExponential", _) => pair("weights[", 0).or_else(|| pair("rates[", 1)),
        _ => None,
    };
    match index {
        Some(i) => Error::InvalidParameter(format!("params[{i}] {rest} ({field})")),
        None => e,
    }
}

impl DistSpec {
    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(Family::Exponential { rate })
    }

    pub fn deterministic(value: f64) -> Result<Self> {
        Self::new(Family::Deterministic { value })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Self::new(Family::Uniform { lo, hi })
    }

    pub fn pareto(shape: f64, scale: f64) -> Result<Self> {
        Self::new(Family::Pareto { shape, scale })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::Lognormal { mu, sigma })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        Self::new(Family::Weibull { shape, scale })
    }

    pub fn hyper_exponential(weights: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        Self::new(Family::HyperExponential { weights, rates })
    }

    pub fn infinite() -> Self {
        Self {
            family: Family::PointMassAtInfinity,
        }
    }

    pub fn new(family: Family) -> Result<Self> {
        match &family {
            Family::Exponential { rate } => {
                positive("rate", *rate)?;
            }
            Family::Deterministic { value } => {
                nonnegative("value", *value)?;
            }
            Family::Uniform { lo, hi } => {
                nonnegative("lo", *lo)?;
                if !(hi.is_finite() && hi > lo) {
                    return Err(Error::InvalidParameter(format!("hi > lo (got {lo}, {hi})")));
                }
            }
            Family::Pareto { shape, scale } | Family::Weibull { shape, scale } => {
                positive("shape", *shape)?;
                positive("scale", *scale)?;
            }
            Family::Lognormal { mu, sigma } => {
                if !mu.is_finite() {
                    return Err(Error::InvalidParameter(format!("mu finite (got {mu})")));
                }
                positive("sigma", *sigma)?;
            }
            Family::HyperExponential { weights, rates } => {
                if weights.is_empty() || weights.len() != rates.len() {
                    return Err(Error::InvalidParameter(
                        "weights and rates non-empty with equal length".into(),
                    ));
                }
                for (i, (&w, &r)) in weights.iter().zip(rates).enumerate() {
                    nonnegative(&format!("weights[{i}]"), w)?;
                    positive(&format!("rates[{i}]"), r)?;
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > WEIGHT_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "weights sum to 1 (got {total})"
                    )));
                }
            }
            Family::PointMassAtInfinity => {}
        }
        Ok(Self { family })
    }

    /// Builds a law from its configuration name and flat parameter list.
    pub fn from_parts(name: &str, params: &[f64]) -> Result<Self> {
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} takes {n} parameters (got {})",
                    params.len()
                )))
            }
        };
        let family = match name {
            "Exponential" => {
                want(1)?;
                Family::Exponential { rate: params[0] }
            }
            "Deterministic" => {
                want(1)?;
                Family::Deterministic { value: params[0] }
            }
            "Uniform" => {
                want(2)?;
                Family::Uniform {
                    lo: params[0],
                    hi: params[1],
                }
            }
            "Pareto" => {
                want(2)?;
                Family::Pareto {
                    shape: params[0],
                    scale: params[1],
                }
            }
            "Lognormal" => {
                want(2)?;
                Family::Lognormal {
                    mu: params[0],
                    sigma: params[1],
                }
            }
            "Weibull" => {
                want(2)?;
                Family::Weibull {
                    shape: params[0],
                    scale: params[1],
                }
            }
            "HyperExponential" => {
                if params.is_empty() || !params.len().is_multiple_of(2) {
                    return Err(Error::InvalidParameter(
                        "HyperExponential takes (weight, rate) pairs".into(),
                    ));
                }
                Family::HyperExponential {
                    weights: params.iter().step_by(2).copied().collect(),
                    rates: params.iter().skip(1).step_by(2).copied().collect(),
                }
            }
            "PointMassAtInfinity" => {
                want(0)?;
                Family::PointMassAtInfinity
            }
            other => return Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
        };
        Self::new(family).map_err(|e| positional(e, name))
    }

    pub fn to_parts(&self) -> DistParts {
        let (name, params) = match &self.family {
            Family::Exponential { rate } => ("Exponential", vec![*rate]),
            Family::Deterministic { value } => ("Deterministic", vec![*value]),
            Family::Uniform { lo, hi } => ("Uniform", vec![*lo, *hi]),
            Family::Pareto { shape, scale } => ("Pareto", vec![*shape, *scale]),
            Family::Lognormal { mu, sigma } => ("Lognormal", vec![*mu, *sigma]),
            Family::Weibull { shape, scale } => ("Weibull", vec![*shape, *scale]),
            Family::HyperExponential { weights, rates } => (
                "HyperExponential",
                weights
                    .iter()
                    .zip(rates)
                    .flat_map(|(w, r)| [*w, *r])
                    .collect(),
            ),
            Family::PointMassAtInfinity => ("PointMassAtInfinity", vec![]),
        };
        DistParts {
            family: name.to_string(),
            params,
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.family, Family::PointMassAtInfinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.family, Family::Deterministic { value } if value == 0.0)
    }

    pub fn exponential_rate(&self) -> Option<f64> {
        match self.family {
            Family::Exponential { rate } => Some(rate),
            _ => None,
        }
    }

    /// Maps two uniforms on (0, 1) to a draw by inversion. The second uniform
    /// only picks the phase of a hyper-exponential.
    pub fn sample_from(&self, u: [f64; 2]) -> f64 {
        match &self.family {
            Family::Exponential { rate } => -u[0].ln() / rate,
            Family::Deterministic { value } => *value,
            Family::Uniform { lo, hi } => lo + (hi - lo) * u[0],
            Family::Pareto { shape, scale } => scale * u[0].powf(-1.0 / shape),
            Family::Lognormal { mu, sigma } => (mu + sigma * std_normal_quantile(u[0])).exp(),
            Family::Weibull { shape, scale } => scale * (-u[0].ln()).powf(1.0 / shape),
            Family::HyperExponential { weights, rates } => {
                let mut acc = 0.0;
                let mut phase = rates.len() - 1;
                for (i, w) in weights.iter().enumerate() {
                    acc += w;
                    if u[1] < acc {
                        phase = i;
                        break;
                    }
                }
                -u[0].ln() / rates[phase]
            }
            Family::PointMassAtInfinity => f64::INFINITY,
        }
    }

    /// Draws from the next slot of `stream`.
    pub fn sample(&self, stream: &mut VariateStream) -> f64 {
        self.sample_from(stream.next_uniforms())
    }

    /// `P(X > x)`.
    pub fn tail(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 1.0;
        }
        match &self.family {
            Family::Exponential { rate } => (-rate * x).exp(),
            Family::Deterministic { value } => {
                if x < *value {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Uniform { lo, hi } => {
                if x <= *lo {
                    1.0
                } else if x >= *hi {
                    0.0
                } else {
                    (hi - x) / (hi - lo)
                }
            }
            Family::Pareto { shape, scale } => {
                if x <= *scale {
                    1.0
                } else {
                    (scale / x).powf(*shape)
                }
            }
            Family::Lognormal { mu, sigma } => {
                if x == 0.0 {
                    1.0
                } else {
                    0.5 * erfc((x.ln() - mu) / (sigma * std::f64::consts::SQRT_2))
                }
            }
            Family::Weibull { shape, scale } => (-(x / scale).powf(*shape)).exp(),
            Family::HyperExponential { weights, rates } => weights
                .iter()
                .zip(rates)
                .map(|(w, r)| w * (-r * x).exp())
                .sum(),
            Family::PointMassAtInfinity => 1.0,
        }
    }

    /// `P(X ≤ x)`, computed as the complement of [`Self::tail`].
    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.tail(x)
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Ok(0.0);
        }
        Ok(match &self.family {
            Family::Exponential { rate } => rate * (-rate * x).exp(),
            Family::Deterministic { .. } => return Err(Error::NoDensity),
            Family::Uniform { lo, hi } => {
                if x >= *lo && x <= *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Family::Pareto { shape, scale } => {
                if x < *scale {
                    0.0
                } else {
                    shape * scale.powf(*shape) / x.powf(shape + 1.0)
                }
            }
            Family::Lognormal { mu, sigma } => {
                if x == 0.0 {
                    0.0
                } else {
                    let z = (x.ln() - mu) / sigma;
                    (-0.5 * z * z).exp() / (x * sigma * (2.0 * std::f64::consts::PI).sqrt())
                }
            }
            Family::Weibull { shape, scale } => {
                let z = x / scale;
                if x == 0.0 && *shape < 1.0 {
                    f64::INFINITY
                } else {
                    shape / scale * z.powf(shape - 1.0) * (-z.powf(*shape)).exp()
                }
            }
            Family::HyperExponential { weights, rates } => weights
                .iter()
                .zip(rates)
                .map(|(w, r)| w * r * (-r * x).exp())
                .sum(),
            Family::PointMassAtInfinity => 0.0,
        })
    }

    pub fn mean(&self) -> Result<f64> {
        match &self.family {
            Family::Exponential { rate } => Ok(1.0 / rate),
            Family::Deterministic { value } => Ok(*value),
            Family::Uniform { lo, hi } => Ok(0.5 * (lo + hi)),
            Family::Pareto { shape, scale } => {
                if *shape <= 1.0 {
                    Err(Error::NoFiniteMean)
                } else {
                    Ok(shape * scale / (shape - 1.0))
                }
            }
            Family::Lognormal { mu, sigma } => Ok((mu + 0.5 * sigma * sigma).exp()),
            Family::Weibull { shape, scale } => Ok(scale * gamma(1.0 + 1.0 / shape)),
            Family::HyperExponential { weights, rates } => {
                Ok(weights.iter().zip(rates).map(|(w, r)| w / r).sum())
            }
            Family::PointMassAtInfinity => Err(Error::NoFiniteMean),
        }
    }

    /// Inverse of the distribution function, `inf{x : F(x) ≥ p}`.
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        match &self.family {
            Family::Exponential { rate } => -(-p).ln_1p() / rate,
            Family::Deterministic { value } => *value,
            Family::Uniform { lo, hi } => lo + (hi - lo) * p,
            Family::Pareto { shape, scale } => scale * (1.0 - p).powf(-1.0 / shape),
            Family::Lognormal { mu, sigma } => (mu + sigma * std_normal_quantile(p)).exp(),
            Family::Weibull { shape, scale } => scale * (-(-p).ln_1p()).powf(1.0 / shape),
            Family::HyperExponential { .. } => bisect_decreasing(|x| self.tail(x), 1.0 - p),
            Family::PointMassAtInfinity => f64::INFINITY,
        }
    }

    /// `∫₀ˣ P(X > y) dy`; finite for every law, including infinite-mean ones.
    pub fn tail_integral(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match &self.family {
            Family::Exponential { rate } => -(-rate * x).exp_m1() / rate,
            Family::Deterministic { value } => x.min(*value),
            Family::Uniform { lo, hi } => {
                if x <= *lo {
                    x
                } else {
                    let y = x.min(*hi);
                    lo + ((hi - lo) * (y - lo) - 0.5 * ((y - lo) * (y - lo))) / (hi - lo)
                }
            }
            Family::Pareto { shape, scale } => {
                if x <= *scale {
                    x
                } else if *shape == 1.0 {
                    scale * (1.0 + (x / scale).ln())
                } else {
                    scale + scale * (1.0 - (scale / x).powf(shape - 1.0)) / (shape - 1.0)
                }
            }
            Family::Lognormal { mu, sigma } => {
                let m = (mu + 0.5 * sigma * sigma).exp();
                let z = (x.ln() - mu - sigma * sigma) / sigma;
                x * self.tail(x) + m * std_normal_cdf(z)
            }
            Family::Weibull { shape, scale } => {
                scale * gamma(1.0 + 1.0 / shape) * gamma_lr(1.0 / shape, (x / scale).powf(*shape))
            }
            Family::HyperExponential { weights, rates } => weights
                .iter()
                .zip(rates)
                .map(|(w, r)| -w * (-r * x).exp_m1() / r)
                .sum(),
            Family::PointMassAtInfinity => x,
        }
    }

    /// Integrated tail distribution `Fʳ(x) = (1/E X) ∫₀ˣ F̄(y) dy`.
    pub fn integrated_tail(&self, x: f64) -> Result<f64> {
        let mean = self.mean()?;
        if x <= 0.0 {
            return Ok(0.0);
        }
        if mean == 0.0 {
            return Ok(1.0);
        }
        Ok((self.tail_integral(x) / mean).min(1.0))
    }

    /// `1 − Fʳ(x)`, in closed form so that far tails keep relative accuracy.
    pub fn integrated_tail_tail(&self, x: f64) -> Result<f64> {
        let mean = self.mean()?;
        if x <= 0.0 {
            return Ok(1.0);
        }
        if mean == 0.0 {
            return Ok(0.0);
        }
        let v = match &self.family {
            Family::Exponential { rate } => (-rate * x).exp(),
            Family::Deterministic { value } => ((value - x) / value).max(0.0),
            Family::Uniform { hi, .. } => {
                if x >= *hi {
                    0.0
                } else {
                    1.0 - self.tail_integral(x) / mean
                }
            }
            Family::Pareto { shape, scale } => {
                if x <= *scale {
                    1.0 - x / mean
                } else {
                    scale * (scale / x).powf(shape - 1.0) / ((shape - 1.0) * mean)
                }
            }
            Family::Lognormal { mu, sigma } => {
                let z = (mu + sigma * sigma - x.ln()) / sigma;
                (std_normal_cdf(z) - x * self.tail(x) / mean).max(0.0)
            }
            Family::Weibull { shape, scale } => gamma_ur(1.0 / shape, (x / scale).powf(*shape)),
            Family::HyperExponential { weights, rates } => {
                weights
                    .iter()
                    .zip(rates)
                    .map(|(w, r)| w * (-r * x).exp() / r)
                    .sum::<f64>()
                    / mean
            }
            Family::PointMassAtInfinity => unreachable!("rejected by mean()"),
        };
        Ok(v.clamp(0.0, 1.0))
    }

    /// Quantile of the integrated tail distribution.
    pub fn integrated_tail_quantile(&self, p: f64) -> Result<f64> {
        self.mean()?;
        Ok(bisect_decreasing(
            |x| self.integrated_tail_tail(x).unwrap_or(0.0),
            1.0 - p,
        ))
    }

    /// Laplace–Stieltjes transform `E[e^{−sX}]`.
    pub fn lst(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::Domain(format!(
                "transform argument s >= 0 (got {s})"
            )));
        }
        self.mean()?;
        if s == 0.0 {
            return Ok(1.0);
        }
        Ok(match &self.family {
            Family::Exponential { rate } => rate / (rate + s),
            Family::Deterministic { value } => (-s * value).exp(),
            Family::Uniform { lo, hi } => ((-s * lo).exp() - (-s * hi).exp()) / (s * (hi - lo)),
            Family::HyperExponential { weights, rates } => weights
                .iter()
                .zip(rates)
                .map(|(w, r)| w * r / (r + s))
                .sum(),
            _ => (1.0 - s * self.numeric_tail_transform(s)).clamp(0.0, 1.0),
        })
    }

    /// `∫₀^∞ e^{−sx} F̄(x) dx = (1 − F*(s))/s`, equal to the mean at `s = 0`.
    /// Evaluated without the cancellation of the right-hand form.
    pub fn tail_transform(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::Domain(format!(
                "transform argument s >= 0 (got {s})"
            )));
        }
        let mean = self.mean()?;
        if s == 0.0 {
            return Ok(mean);
        }
        Ok(match &self.family {
            Family::Exponential { rate } => 1.0 / (rate + s),
            Family::Deterministic { value } => -(-s * value).exp_m1() / s,
            Family::HyperExponential { weights, rates } => {
                weights.iter().zip(rates).map(|(w, r)| w / (r + s)).sum()
            }
            Family::Uniform { lo, hi } => {
                // tail = 1 on [0, lo], then linear down to 0 at hi
                let head = -(-s * lo).exp_m1() / s;
                let width = hi - lo;
                let t = s * width;
                let ramp = if t < 1e-3 {
                    width * (0.5 - t / 6.0 + t * t / 24.0)
                } else {
                    (t + (-t).exp_m1()) / (s * t)
                };
                head + (-s * lo).exp() * ramp
            }
            _ => self.numeric_tail_transform(s),
        })
    }

    fn numeric_tail_transform(&self, s: f64) -> f64 {
        let upper = self.quantile(QUAD_CAP_LEVEL);
        let scale = match &self.family {
            Family::Pareto { scale, .. } => *scale,
            _ => self.quantile(0.5),
        };
        let f = |x: f64| (-s * x).exp() * self.tail(x);
        quad::integrate_panels(&f, scale, upper, QUAD_TOL)
    }
}

impl TryFrom<DistParts> for DistSpec {
    type Error = Error;
    fn try_from(p: DistParts) -> Result<Self> {
        Self::from_parts(&p.family, &p.params)
    }
}

impl From<DistSpec> for DistParts {
    fn from(d: DistSpec) -> Self {
        d.to_parts()
    }
}

pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

pub fn std_normal_quantile(p: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p)
}

/// Smallest `x ≥ 0` with `g(x) ≤ target` for a nonincreasing `g`.
fn bisect_decreasing<G: Fn(f64) -> f64>(g: G, target: f64) -> f64 {
    if g(0.0) <= target {
        return 0.0;
    }
    let mut hi = 1.0;
    while g(hi) > target {
        hi *= 2.0;
        if hi > 1e300 {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    hi
}

/// The four input laws of the queue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QueueModelParts", into = "QueueModelParts")]
pub struct QueueModel {
    pub arrival: DistSpec,
    pub service: DistSpec,
    pub patience: DistSpec,
    pub vacation: DistSpec,
    poisson_rate: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueueModelParts {
    pub arrival: DistSpec,
    pub service: DistSpec,
    pub patience: DistSpec,
    pub vacation: DistSpec,
}

impl QueueModel {
    pub fn new(
        arrival: DistSpec,
        service: DistSpec,
        patience: DistSpec,
        vacation: DistSpec,
    ) -> Result<Self> {
        if arrival.is_infinite() || service.is_infinite() || vacation.is_infinite() {
            return Err(Error::InvalidParameter(
                "only the patience law may be PointMassAtInfinity".into(),
            ));
        }
        if matches!(arrival.family(), Family::Deterministic { value } if *value == 0.0) {
            return Err(Error::InvalidParameter("arrival.params[0] > 0".into()));
        }
        let poisson_rate = arrival.exponential_rate();
        Ok(Self {
            arrival,
            service,
            patience,
            vacation,
            poisson_rate,
        })
    }

    /// `λ`, present iff arrivals are Poisson.
    pub fn poisson_rate(&self) -> Option<f64> {
        self.poisson_rate
    }

    /// `E(V − τ)` when both means are finite.
    pub fn vacation_drift(&self) -> Option<f64> {
        Some(self.vacation.mean().ok()? - self.arrival.mean().ok()?)
    }

    /// `E σ / E τ`.
    pub fn offered_load(&self) -> Option<f64> {
        Some(self.service.mean().ok()? / self.arrival.mean().ok()?)
    }
}

impl TryFrom<QueueModelParts> for QueueModel {
    type Error = Error;
    fn try_from(p: QueueModelParts) -> Result<Self> {
        Self::new(p.arrival, p.service, p.patience, p.vacation)
    }
}

impl From<QueueModel> for QueueModelParts {
    fn from(m: QueueModel) -> Self {
        Self {
            arrival: m.arrival,
            service: m.service,
            patience: m.patience,
            vacation: m.vacation,
        }
    }
}
