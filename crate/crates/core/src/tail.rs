//! Heavy-tail diagnostics: long-tail and Λ-regularity checks, the tail
//! assumptions on `V`, `B` and `F`, and the empirical check of
//! `F̄(x) ~ ρ₁ f*(γ) B̄ʳ(x)`.
//!
//! Asymptotic statements are checked at finite `x` on a high-quantile grid;
//! the tolerances used by callers are policy, not limits.

use serde::Serialize;

use crate::dist::{DistSpec, QueueModel};
use crate::error::{Error, Result};
use crate::simulate::EcdfSummary;
use crate::solve::SolveResult;

const MIN_USABLE: usize = 16;
const MIN_EXCEEDANCES: u64 = 200;
const LONG_TAIL_SHIFTS: [f64; 2] = [1.0, 5.0];
const LONG_TAIL_TOL: f64 = 0.05;
const LONG_TAIL_TOP_POINTS: usize = 3;

/// Geometric grid of `n` points between the `lo` and `hi` quantiles of the
/// integrated-tail law of `service`.
pub fn tail_quantile_grid(service: &DistSpec, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(0.0 < lo && lo < hi && hi < 1.0) || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need 0 < lo < hi < 1 and n >= 2 (got {lo}, {hi}, {n})"
        )));
    }
    let a = service.integrated_tail_quantile(lo)?;
    let b = service.integrated_tail_quantile(hi)?;
    if !(a > 0.0 && b > a) {
        return Err(Error::Domain(format!(
            "degenerate quantile range [{a}, {b}]"
        )));
    }
    let r = (b / a).ln() / (n - 1) as f64;
    Ok((0..n).map(|i| a * (r * i as f64).exp()).collect())
}

const CLASS_GRID_LO: f64 = 0.9;
const CLASS_GRID_HI: f64 = 1.0 - 1e-8;
const CLASS_GRID_POINTS: usize = 32;

/// The default grid: 24 points from the 0.9 to the 1 − 10⁻⁴ quantile.
pub fn default_tail_grid(service: &DistSpec) -> Result<Vec<f64>> {
    tail_quantile_grid(service, 0.9, 1.0 - 1e-4, 24)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongTailCheck {
    pub long_tailed: bool,
    /// `max Λ(2x)/Λ(x)` with `Λ = −ln F̄`.
    pub lambda_regularity_sup: f64,
    pub usable_points: usize,
}

/// Long-tail proxy `F̄(x−y)/F̄(x) ≈ 1` at the top grid points and the
/// regularity statistic over the whole grid.
pub fn check_long_tail(grid: &[f64], tail: impl Fn(f64) -> f64) -> Result<LongTailCheck> {
    let usable: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&x| {
            let t = tail(x);
            t > 0.0 && t < 1.0 && tail(2.0 * x) > 0.0
        })
        .collect();
    if usable.len() < MIN_USABLE {
        return Err(Error::GridTooShort {
            usable: usable.len(),
        });
    }
    let lambda = |x: f64| -tail(x).ln();
    let lambda_regularity_sup = usable
        .iter()
        .map(|&x| lambda(2.0 * x) / lambda(x))
        .fold(f64::NEG_INFINITY, f64::max);
    let long_tailed = usable.iter().rev().take(LONG_TAIL_TOP_POINTS).all(|&x| {
        LONG_TAIL_SHIFTS
            .iter()
            .all(|&y| (tail(x - y) / tail(x) - 1.0).abs() <= LONG_TAIL_TOL)
    });
    Ok(LongTailCheck {
        long_tailed,
        lambda_regularity_sup,
        usable_points: usable.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Trend {
    Decreasing,
    Flat,
    Increasing,
}

impl Trend {
    /// Compares the last value with the first, with a 10% dead band.
    fn of(values: &[f64]) -> Trend {
        let (first, last) = (values[0], values[values.len() - 1]);
        if last < 0.9 * first {
            Trend::Decreasing
        } else if last > 1.1 * first {
            Trend::Increasing
        } else {
            Trend::Flat
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub grid: Vec<f64>,
    /// `V̄ʳ/B̄ʳ`; expected to vanish.
    pub h1_ratios: Vec<f64>,
    /// `V̄ʳ/F̄`; expected to vanish.
    pub h2_ratios: Vec<f64>,
    /// `F̄/B̄`; expected to stay bounded.
    pub h3_ratios: Vec<f64>,
    pub h1_ratio_max: f64,
    pub h2_ratio_max: f64,
    pub h3_ratio_max: f64,
    pub h1_trend: Trend,
    pub h2_trend: Trend,
    pub h3_trend: Trend,
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Ratios behind the three tail assumptions, with `F̄` from any source.
pub fn verify_assumptions(
    model: &QueueModel,
    grid: &[f64],
    workload_tail: impl Fn(f64) -> f64,
) -> Result<AssumptionReport> {
    if grid.len() < 2 {
        return Err(Error::GridTooShort { usable: grid.len() });
    }
    let (b, v) = (&model.service, &model.vacation);
    b.mean()?;
    v.mean()?;
    let mut h1 = Vec::with_capacity(grid.len());
    let mut h2 = Vec::with_capacity(grid.len());
    let mut h3 = Vec::with_capacity(grid.len());
    for &x in grid {
        let vr = v.integrated_tail_tail(x)?;
        let br = b.integrated_tail_tail(x)?;
        let f = workload_tail(x);
        h1.push(ratio(vr, br));
        h2.push(ratio(vr, f));
        h3.push(ratio(f, b.tail(x)));
    }
    Ok(AssumptionReport {
        grid: grid.to_vec(),
        h1_ratio_max: max_of(&h1),
        h2_ratio_max: max_of(&h2),
        h3_ratio_max: max_of(&h3),
        h1_trend: Trend::of(&h1),
        h2_trend: Trend::of(&h2),
        h3_trend: Trend::of(&h3),
        h1_ratios: h1,
        h2_ratios: h2,
        h3_ratios: h3,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub quantile_grid: Vec<f64>,
    /// Monte Carlo `F̄(x)`.
    pub mc_tail: Vec<f64>,
    /// `B̄ʳ(x)`.
    pub br_tail: Vec<f64>,
    /// `F̄(x)/B̄ʳ(x)`.
    pub ratio_estimates: Vec<f64>,
    /// `ratio/target − 1`.
    pub relative_gaps: Vec<f64>,
    /// `ρ₁ f*(γ)`.
    pub target_constant: f64,
    pub exceedances: Vec<u64>,
    /// Relative standard error of the Monte Carlo tail at the top point.
    pub top_relative_se: f64,
    /// Mean |gap| on the upper half of the grid is at most the lower-half
    /// mean plus two top-point relative standard errors.
    pub gap_trend_ok: bool,
    /// Smallest ratio over the upper half of the grid divided by the target.
    pub liminf_proxy: f64,
    pub lambda_regularity_sup: f64,
    pub in_long_tail_class: bool,
    /// Whether the Monte Carlo tail itself looks long-tailed on the grid.
    pub mc_long_tailed: bool,
    /// `min B̄ʳ/F̄ · ρ₁f*(γ)` over the upper half, reported when
    /// `mc_long_tailed`; the converse direction expects values near 1 or more.
    pub converse_proxy: Option<f64>,
    pub h1_ratio_max: f64,
    pub h2_ratio_max: f64,
    pub h3_ratio_max: f64,
}

impl TailReport {
    /// Worst |gap| over grid points in `[lo, hi]`.
    pub fn max_gap_between(&self, lo: f64, hi: f64) -> Option<f64> {
        self.quantile_grid
            .iter()
            .zip(&self.relative_gaps)
            .filter(|(x, _)| **x >= lo && **x <= hi)
            .map(|(_, g)| g.abs())
            .reduce(f64::max)
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Compares a Monte Carlo workload tail with `ρ₁ f*(γ) B̄ʳ` on the grid of `mc`.
pub fn verify_theorem2(
    model: &QueueModel,
    mc: &EcdfSummary,
    sr: &SolveResult,
) -> Result<TailReport> {
    model
        .patience
        .exponential_rate()
        .ok_or(Error::PatienceNotExponential)?;
    let f_star = sr.f_star_gamma.ok_or(Error::PatienceNotExponential)?;
    let b = &model.service;
    let grid = &mc.grid;
    let n = grid.len();
    if n < 2 {
        return Err(Error::GridTooShort { usable: n });
    }
    let exceedances: Vec<u64> = (0..n).map(|i| mc.exceedances(i)).collect();
    let top = exceedances[n - 1];
    if top < MIN_EXCEEDANCES {
        return Err(Error::InsufficientTailData { exceedances: top });
    }
    let target_constant = sr.rho1 * f_star;
    let mc_tail: Vec<f64> = (0..n).map(|i| mc.tail(i)).collect();
    let br_tail = grid
        .iter()
        .map(|&x| b.integrated_tail_tail(x))
        .collect::<Result<Vec<_>>>()?;
    let ratio_estimates: Vec<f64> = mc_tail.iter().zip(&br_tail).map(|(f, br)| f / br).collect();
    let relative_gaps: Vec<f64> = ratio_estimates
        .iter()
        .map(|r| r / target_constant - 1.0)
        .collect();

    let half = n / 2;
    let abs_gaps: Vec<f64> = relative_gaps.iter().map(|g| g.abs()).collect();
    let top_relative_se = ((1.0 - mc_tail[n - 1]) / top as f64).sqrt();
    let gap_trend_ok = mean(&abs_gaps[half..]) <= mean(&abs_gaps[..half]) + 2.0 * top_relative_se;
    let liminf_proxy = ratio_estimates[half..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
        / target_constant;

    // Bʳ is analytic, so its class is judged further out than Monte Carlo can reach
    let class_grid = tail_quantile_grid(b, CLASS_GRID_LO, CLASS_GRID_HI, CLASS_GRID_POINTS)?;
    let br_check = check_long_tail(&class_grid, |x| b.integrated_tail_tail(x).unwrap_or(0.0));
    let (in_long_tail_class, lambda_regularity_sup) = match br_check {
        Ok(c) => (c.long_tailed, c.lambda_regularity_sup),
        Err(Error::GridTooShort { .. }) => (false, f64::NAN),
        Err(e) => return Err(e),
    };
    let mc_long_tailed = check_long_tail(grid, |x| 1.0 - mc.cdf_at(x)).is_ok_and(|c| c.long_tailed);
    let converse_proxy = mc_long_tailed.then(|| {
        (half..n)
            .map(|i| br_tail[i] / mc_tail[i])
            .fold(f64::INFINITY, f64::min)
            * target_constant
    });
    let assumptions = verify_assumptions(model, grid, |x| 1.0 - mc.cdf_at(x))?;

    Ok(TailReport {
        quantile_grid: grid.clone(),
        mc_tail,
        br_tail,
        ratio_estimates,
        relative_gaps,
        target_constant,
        exceedances,
        top_relative_se,
        gap_trend_ok,
        liminf_proxy,
        lambda_regularity_sup,
        in_long_tail_class,
        mc_long_tailed,
        converse_proxy,
        h1_ratio_max: assumptions.h1_ratio_max,
        h2_ratio_max: assumptions.h2_ratio_max,
        h3_ratio_max: assumptions.h3_ratio_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pareto_integrated_tail_is_long_tailed() {
        let p = DistSpec::pareto(2.5, 1.0).unwrap();
        let grid = default_tail_grid(&p).unwrap();
        // closed form: B̄ʳ(x) = (1/x)^{1.5} / 2.5 for x ≥ 1 (mean 5/3)
        for &x in &grid {
            let exact = (1.0 / x).powf(1.5) / 2.5;
            assert!(
                (p.integrated_tail_tail(x).unwrap() - exact).abs()
                    < 1e-12 * exact.max(1e-300) + 1e-15
            );
        }
        let c = check_long_tail(&grid, |x| p.integrated_tail_tail(x).unwrap()).unwrap();
        assert!(c.long_tailed);
        assert!(c.lambda_regularity_sup < 2.0);
    }

    #[test]
    fn exponential_is_not_long_tailed() {
        let e = DistSpec::exponential(1.0).unwrap();
        let grid = default_tail_grid(&e).unwrap();
        let c = check_long_tail(&grid, |x| e.integrated_tail_tail(x).unwrap()).unwrap();
        assert!(!c.long_tailed);
        assert!((c.lambda_regularity_sup - 2.0).abs() < 1e-9);
        // memoryless: the integrated tail is the tail
        for &x in &grid {
            assert!((e.integrated_tail_tail(x).unwrap() - e.tail(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn deterministic_tail_runs_out() {
        let d = DistSpec::deterministic(2.0).unwrap();
        let grid: Vec<f64> = (1..40).map(|i| i as f64 * 0.1).collect();
        assert!(matches!(
            check_long_tail(&grid, |x| d.tail(x)),
            Err(Error::GridTooShort { .. })
        ));
    }

    #[test]
    fn assumption_trends() {
        let pareto = DistSpec::pareto(2.5, 0.6).unwrap();
        let light = QueueModel::new(
            DistSpec::exponential(0.5).unwrap(),
            pareto.clone(),
            DistSpec::exponential(1.0).unwrap(),
            DistSpec::exponential(5.0).unwrap(),
        )
        .unwrap();
        let grid = default_tail_grid(&pareto).unwrap();
        let br = |x: f64| pareto.integrated_tail_tail(x).unwrap();
        let r = verify_assumptions(&light, &grid, |x| 0.4 * br(x)).unwrap();
        assert_eq!(r.h1_trend, Trend::Decreasing);
        assert_eq!(r.h2_trend, Trend::Decreasing);
        assert!(*r.h1_ratios.last().unwrap() < 1e-12);

        let same = QueueModel::new(
            DistSpec::exponential(0.5).unwrap(),
            pareto.clone(),
            DistSpec::exponential(1.0).unwrap(),
            pareto.clone(),
        )
        .unwrap();
        let r = verify_assumptions(&same, &grid, |x| 0.4 * br(x)).unwrap();
        assert!((r.h1_ratio_max - 1.0).abs() < 1e-12);
        assert_eq!(r.h1_trend, Trend::Flat);

        let heavy_vacation = QueueModel::new(
            DistSpec::exponential(0.5).unwrap(),
            pareto.clone(),
            DistSpec::exponential(1.0).unwrap(),
            DistSpec::pareto(0.9, 0.1).unwrap(),
        )
        .unwrap();
        assert_eq!(
            verify_assumptions(&heavy_vacation, &grid, br).unwrap_err(),
            Error::NoFiniteMean
        );
    }

    #[test]
    fn grid_is_geometric_between_quantiles() {
        let p = DistSpec::pareto(2.5, 0.6).unwrap();
        let g = tail_quantile_grid(&p, 0.99, 0.999, 5).unwrap();
        assert!((p.integrated_tail_tail(g[0]).unwrap() - 0.01).abs() < 1e-9);
        assert!((p.integrated_tail_tail(g[4]).unwrap() - 0.001).abs() < 1e-9);
        let r = g[1] / g[0];
        assert!(g.windows(2).all(|w| (w[1] / w[0] - r).abs() < 1e-12));
        assert!(tail_quantile_grid(&p, 0.9, 0.5, 5).is_err());
    }

    proptest! {
        #[test]
        fn cumulative_hazard_is_monotone(rate in 0.1f64..5.0, shape in 1.2f64..4.0, k in 0.3f64..3.0) {
            for d in [
                DistSpec::exponential(rate).unwrap(),
                DistSpec::pareto(shape, 1.0 / rate).unwrap(),
                DistSpec::weibull(k, 1.0 / rate).unwrap(),
            ] {
                let grid = default_tail_grid(&d).unwrap();
                let lam: Vec<f64> = grid.iter().map(|&x| -d.integrated_tail_tail(x).unwrap().ln()).collect();
                prop_assert!(lam.iter().all(|&l| l >= 0.0));
                prop_assert!(lam.windows(2).all(|w| w[1] >= w[0] - 1e-12));
            }
        }
    }
}
