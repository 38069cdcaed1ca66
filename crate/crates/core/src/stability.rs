//! Loynes construction for the auxiliary sequence `Y` and Monte Carlo checks
//! of the sufficient stability conditions: negative vacation drift and a
//! positive renovation probability.

use serde::Serialize;

use crate::dist::QueueModel;
use crate::error::{Error, Result};
use crate::recursion::{step_y, InputStreams};
use crate::simulate::ecdf::ks_two_sample;

const Z95: f64 = 1.959963984540054;

const RENOVATION_NOTE: &str =
    "p_renovation is the fraction of paths whose Loynes sequence is still 0 \
at the horizon; the infinite-horizon event is smaller, so this over-estimates it. \
fixed_point_ks corroborates convergence.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    StableSufficient,
    Inconclusive,
    DriftNonnegative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    /// Sample mean of `V − τ`.
    pub mean_drift: f64,
    pub drift_ci_halfwidth: f64,
    /// `E V − E τ` from the laws, when both means are finite.
    pub analytic_drift: Option<f64>,
    pub p_renovation: f64,
    pub p_renovation_ci: f64,
    /// Largest index at which some path's Loynes sequence last moved.
    pub loynes_horizon: u64,
    /// KS distance between `M_h` and `ψ(M_h)` across paths.
    pub fixed_point_ks: f64,
    pub n_paths: usize,
    pub horizon: usize,
    pub verdict: Verdict,
    pub note: &'static str,
}

/// Running Loynes maximum along one replication. Backward input `j ≥ 1` is
/// read from stream index `j`; index 0 is left for the forward step.
fn loynes_path(inputs: &mut InputStreams, j_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(j_max + 1);
    out.push(0.0);
    let mut drift_sum = 0.0;
    let mut running_max = f64::NEG_INFINITY;
    for j in 1..=j_max as u64 {
        let inp = inputs.input(j);
        drift_sum += inp.vacation - inp.tau;
        running_max = running_max.max(inp.sigma + inp.deadline + drift_sum);
        out.push(running_max.max(0.0));
    }
    out
}

fn require_finite_deadline(model: &QueueModel) -> Result<()> {
    if model.patience.is_infinite() {
        Err(Error::InfiniteDeadline)
    } else {
        Ok(())
    }
}

/// `M_0..M_{j_max}` for replication 0.
pub fn loynes_m(model: &QueueModel, j_max: usize, seed: u64) -> Result<Vec<f64>> {
    require_finite_deadline(model)?;
    Ok(loynes_path(&mut InputStreams::new(model, seed, 0), j_max))
}

pub fn check_stability(
    model: &QueueModel,
    n_paths: usize,
    horizon: usize,
    seed: u64,
) -> Result<StabilityReport> {
    require_finite_deadline(model)?;
    if n_paths < 100 {
        return Err(Error::InvalidParameter(format!(
            "n_paths >= 100 (got {n_paths})"
        )));
    }
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon >= 1".into()));
    }

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut renovated = 0usize;
    let mut last_move = 0u64;
    let mut m_h = Vec::with_capacity(n_paths);
    let mut advanced = Vec::with_capacity(n_paths);
    for rep in 0..n_paths as u64 {
        let mut inputs = InputStreams::new(model, seed, rep);
        let path = loynes_path(&mut inputs, horizon);
        for j in 1..=horizon as u64 {
            let inp = inputs.input(j);
            let d = inp.vacation - inp.tau;
            sum += d;
            sum_sq += d * d;
        }
        if let Some(j) = path.windows(2).rposition(|w| w[1] > w[0]) {
            last_move = last_move.max(j as u64 + 1);
        }
        let m = path[horizon];
        if m == 0.0 {
            renovated += 1;
        }
        m_h.push(m);
        advanced.push(step_y(m, &inputs.input(0))?);
    }

    let n = (n_paths * horizon) as f64;
    let mean_drift = sum / n;
    let var = ((sum_sq - n * mean_drift * mean_drift) / (n - 1.0)).max(0.0);
    let drift_ci_halfwidth = Z95 * (var / n).sqrt();
    let p_renovation = renovated as f64 / n_paths as f64;
    let p_renovation_ci = Z95 * (p_renovation * (1.0 - p_renovation) / n_paths as f64).sqrt();
    let analytic_drift = model.vacation_drift();

    let verdict =
        if analytic_drift.is_some_and(|d| d >= 0.0) || mean_drift - drift_ci_halfwidth >= 0.0 {
            Verdict::DriftNonnegative
        } else if mean_drift + drift_ci_halfwidth < 0.0 && p_renovation - p_renovation_ci > 0.0 {
            Verdict::StableSufficient
        } else {
            Verdict::Inconclusive
        };

    Ok(StabilityReport {
        mean_drift,
        drift_ci_halfwidth,
        analytic_drift,
        p_renovation,
        p_renovation_ci,
        loynes_horizon: last_move,
        fixed_point_ks: ks_two_sample(&m_h, &advanced),
        n_paths,
        horizon,
        verdict,
        note: RENOVATION_NOTE,
    })
}
