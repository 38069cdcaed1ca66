//! wasm-bindgen bindings for the demo page in `www/`. Each export has a plain
//! Rust twin returning `Result<_, String>` so it can be tested natively.
//!
//! Models are Poisson arrivals with exponential laws throughout, except the
//! tail demo which uses Pareto service. A patience rate of 0 means customers
//! never balk; a vacation mean of 0 means no vacations.

use serde::Serialize;
use vacq::recursion::{workload_path, InputStreams};
use vacq::simulate::{simulate_stationary, RunConfig};
use vacq::solve::{solve_exponential_patience, solve_stationary, SolveConfig};
use vacq::tail::{tail_quantile_grid, verify_theorem2};
use vacq::{DistSpec, QueueModel};
use wasm_bindgen::prelude::*;

const MAX_PATH: usize = 100_000;
const MAX_TAIL_CUSTOMERS: usize = 5_000_000;

fn law(mean: f64) -> vacq::Result<DistSpec> {
    if mean == 0.0 {
        DistSpec::deterministic(0.0)
    } else {
        DistSpec::exponential(1.0 / mean)
    }
}

fn patience(rate: f64) -> vacq::Result<DistSpec> {
    if rate == 0.0 {
        Ok(DistSpec::infinite())
    } else {
        DistSpec::exponential(rate)
    }
}

fn model(
    arrival_rate: f64,
    service_mean: f64,
    patience_rate: f64,
    vacation_mean: f64,
) -> Result<QueueModel, String> {
    (|| {
        QueueModel::new(
            DistSpec::exponential(arrival_rate)?,
            DistSpec::exponential(1.0 / service_mean)?,
            patience(patience_rate)?,
            law(vacation_mean)?,
        )
    })()
    .map_err(|e| e.to_string())
}

#[derive(Serialize)]
pub struct Density {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub cdf: Vec<f64>,
    pub p0: f64,
    pub residual: f64,
    pub f_star_gamma: Option<f64>,
}

pub fn density_curve(
    arrival_rate: f64,
    service_mean: f64,
    patience_rate: f64,
    vacation_mean: f64,
    x_max: f64,
    n_grid: usize,
) -> Result<Density, String> {
    let m = model(arrival_rate, service_mean, patience_rate, vacation_mean)?;
    let cfg = SolveConfig {
        x_max: Some(x_max),
        n_grid,
        ..SolveConfig::default()
    };
    let r = solve_stationary(&m, &cfg).map_err(|e| e.to_string())?;
    Ok(Density {
        cdf: r.cdf(),
        p0: r.p0,
        residual: r.residual,
        f_star_gamma: r.f_star_gamma,
        x: r.grid,
        f: r.f,
    })
}

pub fn workload_sample(
    arrival_rate: f64,
    service_mean: f64,
    patience_rate: f64,
    vacation_mean: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    if n > MAX_PATH {
        return Err(format!("path length at most {MAX_PATH}"));
    }
    let m = model(arrival_rate, service_mean, patience_rate, vacation_mean)?;
    Ok(workload_path(&mut InputStreams::new(&m, seed, 0), n, 0.0))
}

#[derive(Serialize)]
pub struct TailRatios {
    pub x: Vec<f64>,
    pub ratio: Vec<f64>,
    pub target: f64,
    pub exceedances: Vec<u64>,
}

/// Monte Carlo `F̄/B̄ʳ` on the 0.9..0.999 integrated-tail quantiles of a
/// Pareto(shape, scale) service law.
pub fn tail_ratios(
    shape: f64,
    scale: f64,
    arrival_rate: f64,
    patience_rate: f64,
    vacation_mean: f64,
    n_customers: usize,
    seed: u64,
) -> Result<TailRatios, String> {
    if n_customers > MAX_TAIL_CUSTOMERS {
        return Err(format!("at most {MAX_TAIL_CUSTOMERS} customers"));
    }
    let run = || -> vacq::Result<TailRatios> {
        let service = DistSpec::pareto(shape, scale)?;
        let m = QueueModel::new(
            DistSpec::exponential(arrival_rate)?,
            service.clone(),
            DistSpec::exponential(patience_rate)?,
            law(vacation_mean)?,
        )?;
        let grid = tail_quantile_grid(&service, 0.9, 0.999, 24)?;
        let mc = simulate_stationary(
            &m,
            &RunConfig {
                grid: Some(grid),
                ..RunConfig::new(n_customers, seed)
            },
        )?
        .ecdf;
        let sr = solve_exponential_patience(&m, &SolveConfig::default())?;
        let report = verify_theorem2(&m, &mc, &sr)?;
        Ok(TailRatios {
            x: report.quantile_grid,
            ratio: report.ratio_estimates,
            target: report.target_constant,
            exceedances: report.exceedances,
        })
    };
    run().map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.map(|v| serde_json::to_string(&v).expect("plain data"))
        .map_err(|e| JsError::new(&e))
}

/// JSON `{x, f, cdf, p0, residual, f_star_gamma}`.
#[wasm_bindgen]
pub fn density(
    arrival_rate: f64,
    service_mean: f64,
    patience_rate: f64,
    vacation_mean: f64,
    x_max: f64,
    n_grid: usize,
) -> Result<String, JsError> {
    to_json(density_curve(
        arrival_rate,
        service_mean,
        patience_rate,
        vacation_mean,
        x_max,
        n_grid,
    ))
}

#[wasm_bindgen]
pub fn workload(
    arrival_rate: f64,
    service_mean: f64,
    patience_rate: f64,
    vacation_mean: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<f64>, JsError> {
    workload_sample(
        arrival_rate,
        service_mean,
        patience_rate,
        vacation_mean,
        n,
        seed,
    )
    .map_err(|e| JsError::new(&e))
}

/// JSON `{x, ratio, target, exceedances}`.
#[wasm_bindgen]
pub fn tail(
    shape: f64,
    scale: f64,
    arrival_rate: f64,
    patience_rate: f64,
    vacation_mean: f64,
    n_customers: usize,
    seed: u64,
) -> Result<String, JsError> {
    to_json(tail_ratios(
        shape,
        scale,
        arrival_rate,
        patience_rate,
        vacation_mean,
        n_customers,
        seed,
    ))
}
