//! Monte Carlo estimation of the stationary workload law seen by arrivals.

pub mod des;
pub mod ecdf;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::dist::QueueModel;
use crate::error::{Error, Result};
use crate::recursion::{step_w, InputStreams, PathState};
use crate::stability::{check_stability, Verdict};

pub use des::{des_oracle, des_oracle_from};
pub use ecdf::{dkw_halfwidth, ks_two_sample, EcdfAccumulator, EcdfSummary};

const GATE_PATHS: usize = 200;
const GATE_HORIZON: usize = 1000;
const PILOT: usize = 100_000;
const DEFAULT_GRID_POINTS: usize = 257;

/// Settings for one simulated path.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Total customers, burn-in included.
    pub n_customers: usize,
    /// Defaults to 10% of `n_customers`, at least 10⁴ (capped at half the run).
    pub burn_in: Option<usize>,
    pub seed: u64,
    pub w0: f64,
    /// Skip the stability gate.
    pub force: bool,
    /// ECDF grid; chosen from a pilot run when absent.
    pub grid: Option<Vec<f64>>,
    pub n_batches: usize,
}

impl RunConfig {
    pub fn new(n_customers: usize, seed: u64) -> Self {
        Self {
            n_customers,
            burn_in: None,
            seed,
            w0: 0.0,
            force: false,
            grid: None,
            n_batches: 32,
        }
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in
            .unwrap_or_else(|| (self.n_customers / 10).max(10_000.min(self.n_customers / 2)))
    }
}

/// A scalar estimate with its 95% batch-means half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub ci_halfwidth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossEstimate {
    pub loss_fraction: Estimate,
    pub atom_at_zero: Estimate,
    pub mean_workload: Estimate,
    /// `E[e^{−γW}]` when the patience law is Exponential(γ).
    pub f_star_gamma: Option<Estimate>,
    pub n_effective: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryEstimate {
    pub ecdf: EcdfSummary,
    pub scalars: LossEstimate,
    pub burn_in: usize,
    pub seed: u64,
}

/// Refuses models that are not known to be stable. Finite deadlines go
/// through [`check_stability`]; without balking the load must be below one.
pub fn stability_gate(model: &QueueModel, seed: u64) -> Result<()> {
    if model.patience.is_infinite() {
        return match model.offered_load() {
            Some(rho) if rho < 1.0 => Ok(()),
            Some(rho) => Err(Error::UnstableModel(format!("offered load {rho:.4} >= 1"))),
            None => Err(Error::UnstableModel("offered load is infinite".into())),
        };
    }
    let report = check_stability(model, GATE_PATHS, GATE_HORIZON, seed)?;
    match report.verdict {
        Verdict::StableSufficient => Ok(()),
        v => Err(Error::UnstableModel(format!(
            "{v:?} (drift {:.4} ± {:.4}, renovation {:.4} ± {:.4}); pass force to override",
            report.mean_drift,
            report.drift_ci_halfwidth,
            report.p_renovation,
            report.p_renovation_ci
        ))),
    }
}

/// Batch-means accumulator for one scalar.
struct Batches {
    sums: Vec<f64>,
    counts: Vec<u64>,
}

impl Batches {
    fn new(n: usize) -> Self {
        Self {
            sums: vec![0.0; n],
            counts: vec![0; n],
        }
    }

    fn push(&mut self, batch: usize, x: f64) {
        self.sums[batch] += x;
        self.counts[batch] += 1;
    }

    fn estimate(&self, t: f64) -> Estimate {
        let total: u64 = self.counts.iter().sum();
        let value = self.sums.iter().sum::<f64>() / total.max(1) as f64;
        let means: Vec<f64> = self
            .sums
            .iter()
            .zip(&self.counts)
            .filter(|(_, &c)| c > 0)
            .map(|(s, &c)| s / c as f64)
            .collect();
        let k = means.len() as f64;
        let ci_halfwidth = if means.len() < 2 {
            f64::INFINITY
        } else {
            let var = means.iter().map(|m| (m - value).powi(2)).sum::<f64>() / (k - 1.0);
            t * (var / k).sqrt()
        };
        Estimate {
            value,
            ci_halfwidth,
        }
    }
}

fn check_config(cfg: &RunConfig) -> Result<usize> {
    let burn_in = cfg.burn_in();
    if burn_in >= cfg.n_customers {
        return Err(Error::InvalidParameter(format!(
            "burn_in ({burn_in}) < n_customers ({})",
            cfg.n_customers
        )));
    }
    if cfg.n_batches < 2 {
        return Err(Error::InvalidParameter("n_batches >= 2".into()));
    }
    if !(cfg.w0 >= 0.0 && cfg.w0.is_finite()) {
        return Err(Error::InvalidParameter(format!("w0 >= 0 (got {})", cfg.w0)));
    }
    if let Some(g) = &cfg.grid {
        if g.is_empty() || g.windows(2).any(|w| !(w[0] < w[1])) || !g[0].is_finite() {
            return Err(Error::InvalidParameter(
                "grid must be nonempty and increasing".into(),
            ));
        }
    }
    Ok(burn_in)
}

/// Uniform grid from 0 to 1.5× the 0.9999 quantile of a pilot prefix of the
/// same path.
fn pilot_grid(model: &QueueModel, cfg: &RunConfig, burn_in: usize) -> Vec<f64> {
    let n = cfg.n_customers.min(burn_in + PILOT);
    let mut inputs = InputStreams::new(model, cfg.seed, 0);
    let mut state = PathState::new(cfg.w0);
    let mut xs = Vec::with_capacity(n - burn_in);
    for k in 0..n as u64 {
        if k as usize >= burn_in {
            xs.push(state.w);
        }
        state = step_w(&state, &inputs.input(k));
    }
    xs.sort_by(f64::total_cmp);
    let q = xs[((xs.len() - 1) as f64 * 0.9999) as usize];
    let top = if q > 0.0 { 1.5 * q } else { 1.0 };
    let h = top / (DEFAULT_GRID_POINTS - 1) as f64;
    (0..DEFAULT_GRID_POINTS).map(|i| i as f64 * h).collect()
}

/// One pass along replication 0 collecting the ECDF and the scalar estimates.
pub fn simulate_stationary(model: &QueueModel, cfg: &RunConfig) -> Result<StationaryEstimate> {
    let burn_in = check_config(cfg)?;
    if !cfg.force {
        stability_gate(model, cfg.seed)?;
    }
    let grid = match &cfg.grid {
        Some(g) => g.clone(),
        None => pilot_grid(model, cfg, burn_in),
    };
    let gamma = model.patience.exponential_rate();
    let kept = (cfg.n_customers - burn_in) as u64;
    let nb = cfg.n_batches.min(kept as usize).max(1);

    let mut acc = EcdfAccumulator::new(grid.clone());
    let mut loss = Batches::new(nb);
    let mut atom = Batches::new(nb);
    let mut mean = Batches::new(nb);
    let mut fstar = Batches::new(nb);

    let mut inputs = InputStreams::new(model, cfg.seed, 0);
    let mut state = PathState::new(cfg.w0);
    for k in 0..cfg.n_customers as u64 {
        let input = inputs.input(k);
        if k as usize >= burn_in {
            let i = k - burn_in as u64;
            let b = (i as u128 * nb as u128 / kept as u128) as usize;
            let w = state.w;
            acc.push(w);
            loss.push(b, f64::from(u8::from(w > input.deadline)));
            atom.push(b, f64::from(u8::from(w == 0.0)));
            mean.push(b, w);
            if let Some(g) = gamma {
                fstar.push(b, (-g * w).exp());
            }
        }
        state = step_w(&state, &input);
    }

    let t = if nb >= 2 {
        StudentsT::new(0.0, 1.0, (nb - 1) as f64)
            .map_err(|e| Error::Domain(e.to_string()))?
            .inverse_cdf(0.975)
    } else {
        f64::INFINITY
    };
    let scalars = LossEstimate {
        loss_fraction: loss.estimate(t),
        atom_at_zero: atom.estimate(t),
        mean_workload: mean.estimate(t),
        f_star_gamma: gamma.map(|_| fstar.estimate(t)),
        n_effective: kept,
    };
    let ecdf = EcdfSummary {
        cdf: acc.cdf(),
        grid,
        atom_at_zero: acc.atom_at_zero(),
        loss_fraction: scalars.loss_fraction.value,
        n_effective: kept,
        ci_halfwidth: dkw_halfwidth(kept),
    };
    Ok(StationaryEstimate {
        ecdf,
        scalars,
        burn_in,
        seed: cfg.seed,
    })
}

/// Empirical stationary CDF of `{W_n : n ≥ burn_in}`.
pub fn estimate_stationary(model: &QueueModel, cfg: &RunConfig) -> Result<EcdfSummary> {
    Ok(simulate_stationary(model, cfg)?.ecdf)
}

/// Loss fraction, `P(0)` and (for Exponential patience) `f*(γ)` with CIs.
pub fn estimate_loss_and_fzero(model: &QueueModel, cfg: &RunConfig) -> Result<LossEstimate> {
    Ok(simulate_stationary(model, cfg)?.scalars)
}
