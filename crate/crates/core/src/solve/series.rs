//! Transform series for Exponential(γ) patience.
//!
//! Transforming the stationary equation gives the shift recursion
//! `φ(s) = a(s) + c(s)·φ(s+γ)` for the density transform `φ`, with
//! `a(s) = λP(0)T_B(s) + λ₂T_V(s)`, `c(s) = λT_B(s)` and
//! `T(s) = ∫e^{−sx}F̄(x)dx = (1 − F*(s))/s`. Unrolling it,
//! `φ(θ) = Σ_j a(θ+jγ) Π_{m<j} c(θ+mγ)`.
//!
//! The forms `Σ_j (P(0) + λ₂V*(s_j)/(λB*(s_j))) Π λB*(s_m)` with the product
//! over `m ≤ j` or `m < j` are kept for comparison.

use serde::{Deserialize, Serialize};

use super::{q_for, Lambda2Rule, SolveResult};
use crate::dist::QueueModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SeriesForm {
    #[default]
    ShiftRecursion,
    /// `Π_{m=0}^{j}`.
    ProductInclusive,
    /// `Π_{m=0}^{j−1}`.
    ProductExclusive,
}

impl SeriesForm {
    pub const ALL: [SeriesForm; 3] = [
        SeriesForm::ShiftRecursion,
        SeriesForm::ProductInclusive,
        SeriesForm::ProductExclusive,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeriesConfig {
    pub form: SeriesForm,
    pub trunc_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            form: SeriesForm::ShiftRecursion,
            trunc_tol: 1e-14,
            max_terms: 100_000,
        }
    }
}

/// `f*(θ)` split into the atom `P(0)` and the density part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LstValue {
    pub atom: f64,
    pub density: f64,
    /// Terms summed before truncation.
    pub terms: usize,
}

impl LstValue {
    pub fn total(&self) -> f64 {
        self.atom + self.density
    }
}

/// `(λ, γ)`; patience without balking counts as `γ = 0`.
fn rates(model: &QueueModel) -> Result<(f64, f64)> {
    let lambda = model.poisson_rate().ok_or(Error::NotPoissonArrivals)?;
    let gamma = if model.patience.is_infinite() {
        0.0
    } else {
        model
            .patience
            .exponential_rate()
            .ok_or(Error::PatienceNotExponential)?
    };
    Ok((lambda, gamma))
}

fn density_sum(
    model: &QueueModel,
    lambda: f64,
    gamma: f64,
    theta: f64,
    p0: f64,
    lambda2: f64,
    cfg: &SeriesConfig,
) -> Result<(f64, usize)> {
    let (b, v) = (&model.service, &model.vacation);
    let mut prod = 1.0;
    let mut sum = 0.0;
    for j in 0..cfg.max_terms {
        let s = theta + j as f64 * gamma;
        match cfg.form {
            SeriesForm::ShiftRecursion => {
                let tb = b.tail_transform(s)?;
                sum += prod * (lambda * p0 * tb + lambda2 * v.tail_transform(s)?);
                prod *= lambda * tb;
            }
            SeriesForm::ProductInclusive => {
                let lb = lambda * b.lst(s)?;
                sum += p0 * prod * lb + lambda2 * v.lst(s)? * prod;
                prod *= lb;
            }
            SeriesForm::ProductExclusive => {
                let lb = lambda * b.lst(s)?;
                if lb == 0.0 {
                    return Ok((sum + p0 * prod, j + 1));
                }
                sum += (p0 + lambda2 * v.lst(s)? / lb) * prod;
                prod *= lb;
            }
        }
        if prod < cfg.trunc_tol {
            return Ok((sum, j + 1));
        }
    }
    Err(Error::SeriesDiverges {
        terms: cfg.max_terms,
    })
}

/// `f*(θ) = P(0) + ∫e^{−θx} f(x) dx` from the series.
pub fn lst_series(
    model: &QueueModel,
    theta: f64,
    p0: f64,
    lambda2: f64,
    cfg: &SeriesConfig,
) -> Result<LstValue> {
    if !(theta >= 0.0) {
        return Err(Error::Domain(format!("theta >= 0 (got {theta})")));
    }
    let (lambda, gamma) = rates(model)?;
    let (density, terms) = density_sum(model, lambda, gamma, theta, p0, lambda2, cfg)?;
    Ok(LstValue {
        atom: p0,
        density,
        terms,
    })
}

/// `P(0) = 1 / (1 + S)`, where `S` is the density sum at `θ = 0` with
/// `P(0) = 1` and `λ₂ = λ/q` from the chosen rule.
pub fn f0_from_series(model: &QueueModel, rule: Lambda2Rule, cfg: &SeriesConfig) -> Result<f64> {
    let (lambda, gamma) = rates(model)?;
    let q = q_for(model, lambda, rule)?
        .ok_or_else(|| Error::InvalidParameter("the series needs a closed-form λ₂ rule".into()))?;
    let (s, _) = density_sum(model, lambda, gamma, 0.0, 1.0, lambda / q, cfg)?;
    Ok(1.0 / (1.0 + s))
}

/// Worst relative error of each form against the numerical transform of a
/// solved density over `thetas`, best first.
pub fn calibrate_series_form(
    model: &QueueModel,
    solved: &SolveResult,
    thetas: &[f64],
    trunc_tol: f64,
) -> Result<Vec<(SeriesForm, f64)>> {
    let mut out = Vec::new();
    for form in SeriesForm::ALL {
        let cfg = SeriesConfig {
            form,
            trunc_tol,
            ..SeriesConfig::default()
        };
        let mut worst: f64 = 0.0;
        for &t in thetas {
            let series = lst_series(model, t, solved.p0, solved.lambda2, &cfg)?.total();
            let numeric = solved.p0 + solved.density_transform(t);
            worst = worst.max((series - numeric).abs() / numeric);
        }
        out.push((form, worst));
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(out)
}
