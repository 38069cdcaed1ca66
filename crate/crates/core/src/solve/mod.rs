//! Stationary density of the workload for Poisson arrivals.
//!
//! The density solves
//!
//! ```text
//! f(x) = λ P(0) B̄(x) + λ₂ V̄(x) + λ ∫₀ˣ Ḡ(u) B̄(x−u) f(u) du,   P(0) + ∫ f = 1,
//! ```
//!
//! where `λ₂` is the rate at which vacations start. The equation is linear
//! in `(P(0), λ₂)`, so two Volterra solves give `f = P(0)·f_a + λ₂·f_b` and
//! the constants come from normalization and the chosen [`Lambda2Rule`].

pub mod series;
pub mod volterra;

use serde::{Deserialize, Serialize};

use crate::dist::QueueModel;
use crate::error::{Error, Result};
use crate::quad::{cumulative_trapezoid, integrate_panels, trapezoid};
use crate::recursion::{step_w, InputStreams, PathState};

pub use series::{
    calibrate_series_form, f0_from_series, lst_series, LstValue, SeriesConfig, SeriesForm,
};

const TAIL_MASS_LIMIT: f64 = 1e-4;
const PILOT_CUSTOMERS: u64 = 1_000_000;

/// How the vacation-start rate `λ₂` is tied to `P(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Lambda2Rule {
    /// Idle balance `λP(0) = λ₂·q` with `q = E exp(−λ∫₀^V Ḡ)`, the chance
    /// that nobody joins during a vacation.
    #[default]
    IdleBalance,
    /// `q = V*(λ)`: nobody arrives during the vacation. Exact without balking.
    VacationTransform,
    /// Damped fixed point on the level-crossing constants
    /// `λ₂ = λP(0)B*(λ) + λB*(λ)∫Ḡ f e^{−λu} + λ∫f e^{−λu}`.
    LevelConstants,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    /// Right end of the grid; estimated from a pilot simulation when absent.
    pub x_max: Option<f64>,
    pub n_grid: usize,
    pub fp_tol: f64,
    pub fp_max_iter: usize,
    pub series_trunc_tol: f64,
    pub lambda2_rule: Lambda2Rule,
    pub pilot_seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            x_max: None,
            n_grid: 4096,
            fp_tol: 1e-8,
            fp_max_iter: 200,
            series_trunc_tol: 1e-14,
            lambda2_rule: Lambda2Rule::IdleBalance,
            pilot_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub grid: Vec<f64>,
    pub f: Vec<f64>,
    pub p0: f64,
    pub lambda2: f64,
    /// `λ·E σ`.
    pub rho1: f64,
    /// `λ₂·E V`.
    pub rho2: f64,
    /// `P(0) + ∫e^{−γx} f` for Exponential(γ) patience.
    pub f_star_gamma: Option<f64>,
    pub residual: f64,
    pub normalization_error: f64,
    /// Largest negative value clipped from `f`.
    pub clip_magnitude: f64,
    /// Extrapolated density mass beyond the grid.
    pub tail_mass: f64,
    /// `ρ₁ + ρ₂ < 1`.
    pub load_condition: bool,
    pub lambda2_rule: Lambda2Rule,
    /// `q` of the idle balance, when the rule uses one.
    pub idle_return_probability: Option<f64>,
    pub iterations: usize,
}

impl SolveResult {
    pub fn step(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    pub fn cdf(&self) -> Vec<f64> {
        cumulative_trapezoid(&self.f, self.step())
            .into_iter()
            .map(|c| self.p0 + c)
            .collect()
    }

    /// Piecewise-linear CDF; 1 − tail mass beyond the grid.
    pub fn cdf_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let h = self.step();
        let cdf = self.cdf();
        let t = x / h;
        let i = t.floor() as usize;
        if i + 1 >= cdf.len() {
            return *cdf.last().unwrap();
        }
        let w = t - i as f64;
        cdf[i] * (1.0 - w) + cdf[i + 1] * w
    }

    /// Trapezoid transform of the density part, `∫e^{−θx} f(x) dx`.
    pub fn density_transform(&self, theta: f64) -> f64 {
        let g: Vec<f64> = self
            .grid
            .iter()
            .zip(&self.f)
            .map(|(x, f)| (-theta * x).exp() * f)
            .collect();
        trapezoid(&g, self.step())
    }
}

/// `q = E exp(−λ H(V))` with `H(v) = ∫₀^v Ḡ`.
pub fn idle_return_probability(model: &QueueModel, lambda: f64) -> Result<f64> {
    let v = &model.vacation;
    let g = &model.patience;
    if let crate::dist::Family::Deterministic { value } = v.family() {
        return Ok((-lambda * g.tail_integral(*value)).exp());
    }
    let upper = v.quantile(1.0 - 1e-13);
    let scale = v.mean()?.min(upper);
    let integrand = |x: f64| g.tail(x) * (-lambda * g.tail_integral(x)).exp() * v.tail(x);
    Ok(1.0 - lambda * integrate_panels(&integrand, scale, upper, 1e-13))
}

fn q_for(model: &QueueModel, lambda: f64, rule: Lambda2Rule) -> Result<Option<f64>> {
    match rule {
        Lambda2Rule::IdleBalance => idle_return_probability(model, lambda).map(Some),
        Lambda2Rule::VacationTransform => model.vacation.lst(lambda).map(Some),
        Lambda2Rule::LevelConstants => Ok(None),
    }
}

/// 1.25× the largest workload seen in a 10⁶-customer pilot path.
pub fn pilot_x_max(model: &QueueModel, seed: u64) -> Result<f64> {
    let mut inputs = InputStreams::new(model, seed, 0);
    let mut state = PathState::new(0.0);
    let mut top: f64 = 0.0;
    for k in 0..PILOT_CUSTOMERS {
        state = step_w(&state, &inputs.input(k));
        top = top.max(state.w);
    }
    if !top.is_finite() {
        return Err(Error::UnstableModel("pilot workload diverged".into()));
    }
    Ok(if top > 0.0 { 1.25 * top } else { 1.0 })
}

/// Mass beyond the last node from a local power-law fit over the top 20%.
fn extrapolated_tail_mass(grid: &[f64], f: &[f64]) -> f64 {
    let n = f.len() - 1;
    let m = (0.8 * n as f64) as usize;
    let (fn_, fm) = (f[n], f[m]);
    if fn_ <= 0.0 {
        return 0.0;
    }
    if fm <= fn_ {
        return f64::INFINITY;
    }
    let a = (fm / fn_).ln() / (grid[n] / grid[m]).ln();
    if a <= 1.0 {
        f64::INFINITY
    } else {
        grid[n] * fn_ / (a - 1.0)
    }
}

fn validate(cfg: &SolveConfig) -> Result<()> {
    if cfg.n_grid < 64 {
        return Err(Error::InvalidParameter(format!(
            "n_grid >= 64 (got {})",
            cfg.n_grid
        )));
    }
    if let Some(x) = cfg.x_max {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::InvalidParameter(format!("x_max > 0 (got {x})")));
        }
    }
    if !(cfg.fp_tol > 0.0 && cfg.series_trunc_tol > 0.0) {
        return Err(Error::InvalidParameter(
            "tolerances must be positive".into(),
        ));
    }
    Ok(())
}

/// Solves the stationary equation for a general patience law.
pub fn solve_stationary(model: &QueueModel, cfg: &SolveConfig) -> Result<SolveResult> {
    let lambda = model.poisson_rate().ok_or(Error::NotPoissonArrivals)?;
    let patience = model.patience.clone();
    solve_with_kernel(model, lambda, cfg, |x| patience.tail(x))
}

/// Same equation with the kernel `e^{−γu}` of Exponential(γ) patience.
pub fn solve_exponential_patience(model: &QueueModel, cfg: &SolveConfig) -> Result<SolveResult> {
    let lambda = model.poisson_rate().ok_or(Error::NotPoissonArrivals)?;
    let gamma = model
        .patience
        .exponential_rate()
        .ok_or(Error::PatienceNotExponential)?;
    solve_with_kernel(model, lambda, cfg, |x| (-gamma * x).exp())
}

fn solve_with_kernel(
    model: &QueueModel,
    lambda: f64,
    cfg: &SolveConfig,
    patience_tail: impl Fn(f64) -> f64,
) -> Result<SolveResult> {
    validate(cfg)?;
    let beta = model.service.mean()?;
    let theta = model.vacation.mean()?;
    let x_max = match cfg.x_max {
        Some(x) => x,
        None => pilot_x_max(model, cfg.pilot_seed)?,
    };
    let n = cfg.n_grid;
    let h = x_max / n as f64;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    let gbar: Vec<f64> = grid.iter().map(|&x| patience_tail(x)).collect();
    let bbar: Vec<f64> = grid.iter().map(|&x| model.service.tail(x)).collect();
    let vbar: Vec<f64> = grid.iter().map(|&x| model.vacation.tail(x)).collect();

    let rhs_a: Vec<f64> = bbar.iter().map(|b| lambda * b).collect();
    let f_a = volterra::march(lambda, &gbar, &bbar, &rhs_a, h);
    let f_b = volterra::march(lambda, &gbar, &bbar, &vbar, h);
    let mass_a = trapezoid(&f_a, h);
    let mass_b = trapezoid(&f_b, h);
    let normalized = |ratio: f64| {
        let p0 = 1.0 / (1.0 + mass_a + ratio * mass_b);
        let f: Vec<f64> = f_a
            .iter()
            .zip(&f_b)
            .map(|(a, b)| p0 * (a + ratio * b))
            .collect();
        (p0, f)
    };

    let q = q_for(model, lambda, cfg.lambda2_rule)?;
    let (ratio, iterations) = match q {
        Some(q) => (lambda / q, 0),
        None => {
            let bs = model.service.lst(lambda)?;
            let damp: Vec<f64> = grid.iter().map(|&x| (-lambda * x).exp()).collect();
            let mut ratio = lambda / model.vacation.lst(lambda)?;
            let mut it = 0;
            loop {
                if it == cfg.fp_max_iter {
                    return Err(Error::NoConvergence { iterations: it });
                }
                it += 1;
                let (p0, f) = normalized(ratio);
                let with_g: Vec<f64> = (0..=n).map(|i| damp[i] * gbar[i] * f[i]).collect();
                let plain: Vec<f64> = (0..=n).map(|i| damp[i] * f[i]).collect();
                let l2 = lambda * p0 * bs
                    + lambda * bs * trapezoid(&with_g, h)
                    + lambda * trapezoid(&plain, h);
                let next = 0.5 * ratio + 0.5 * l2 / p0;
                let (p0_next, f_next) = normalized(next);
                let df = f
                    .iter()
                    .zip(&f_next)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                let change = (p0_next - p0)
                    .abs()
                    .max((next * p0_next - ratio * p0).abs())
                    .max(df);
                ratio = next;
                if change < cfg.fp_tol {
                    break;
                }
            }
            (ratio, it)
        }
    };

    let (p0, mut f) = normalized(ratio);
    let lambda2 = ratio * p0;
    let mut clip_magnitude: f64 = 0.0;
    for v in f.iter_mut() {
        if *v < 0.0 {
            clip_magnitude = clip_magnitude.max(-*v);
            *v = 0.0;
        }
    }
    let normalization_error = (p0 + trapezoid(&f, h) - 1.0).abs();
    let rhs: Vec<f64> = (0..=n)
        .map(|i| lambda * p0 * bbar[i] + lambda2 * vbar[i])
        .collect();
    let residual = volterra::residual(lambda, &gbar, &bbar, &rhs, &f, h);

    let tail_mass = extrapolated_tail_mass(&grid, &f);
    if tail_mass > TAIL_MASS_LIMIT {
        return Err(Error::TailMassTooLarge {
            mass: tail_mass,
            x_max,
        });
    }
    let f_star_gamma = model.patience.exponential_rate().map(|gamma| {
        let g: Vec<f64> = grid
            .iter()
            .zip(&f)
            .map(|(x, f)| (-gamma * x).exp() * f)
            .collect();
        p0 + trapezoid(&g, h)
    });
    let rho1 = lambda * beta;
    let rho2 = lambda2 * theta;
    Ok(SolveResult {
        grid,
        f,
        p0,
        lambda2,
        rho1,
        rho2,
        f_star_gamma,
        residual,
        normalization_error,
        clip_magnitude,
        tail_mass,
        load_condition: rho1 + rho2 < 1.0,
        lambda2_rule: cfg.lambda2_rule,
        idle_return_probability: q,
        iterations,
    })
}
