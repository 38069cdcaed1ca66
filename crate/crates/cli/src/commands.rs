use serde::Serialize;
use serde_json::{json, Value};
use vacq::io::{csv_columns, ecdf_csv, sequences_csv, solve_csv, tail_csv};
use vacq::recursion::{run_sequences, workload_path, InputStreams};
use vacq::simulate::{des_oracle, simulate_stationary, RunConfig as SimRun};
use vacq::solve::{
    calibrate_series_form, f0_from_series, lst_series, solve_exponential_patience,
    solve_stationary, SeriesConfig, SolveResult,
};
use vacq::stability::{check_stability, loynes_m};
use vacq::tail::{tail_quantile_grid, verify_theorem2};
use vacq::{Family, QueueModel};

use crate::config::{Command, RunConfig};
use crate::CliError;

/// Files to write plus a JSON digest for the manifest.
pub struct Artifacts {
    pub files: Vec<(String, String)>,
    pub results: Value,
    /// Set when a `validate` check failed; files are still written.
    pub failure: Option<String>,
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn linspace(hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| hi * i as f64 / (n - 1) as f64).collect()
}

struct Out<'a> {
    cfg: &'a RunConfig,
    files: Vec<(String, String)>,
}

impl Out<'_> {
    fn csv(&mut self, name: &str, body: String) {
        if self.cfg.format.csv() {
            self.files.push((name.into(), body));
        }
    }

    fn json(&mut self, name: &str, v: &Value) {
        if self.cfg.format.json() {
            self.files.push((name.into(), pretty(v)));
        }
    }

    fn done(self, results: Value) -> Artifacts {
        Artifacts {
            files: self.files,
            results,
            failure: None,
        }
    }
}

pub fn dispatch(cfg: &RunConfig, model: &QueueModel) -> Result<Artifacts, CliError> {
    let out = Out {
        cfg,
        files: Vec::new(),
    };
    match cfg.command {
        Command::Simulate => simulate(cfg, model, out),
        Command::Solve => solve(cfg, model, out),
        Command::Lst => lst(cfg, model, out),
        Command::Tail => tail(cfg, model, out),
        Command::Stability => stability(cfg, model, out),
        Command::Validate => validate(cfg, model, out),
    }
}

fn simulate(cfg: &RunConfig, model: &QueueModel, mut out: Out) -> Result<Artifacts, CliError> {
    let s = &cfg.simulate;
    let run = SimRun {
        n_customers: s.n_customers,
        burn_in: s.burn_in,
        seed: cfg.seed,
        w0: s.w0,
        force: s.skip_stability_gate,
        grid: s.x_max.map(|x| linspace(x, s.grid_points)),
        n_batches: s.n_batches,
    };
    let est = simulate_stationary(model, &run)?;
    let header = json!({
        "seed": cfg.seed,
        "burn_in": est.burn_in,
        "n_effective": est.ecdf.n_effective,
        "atom_at_zero": est.ecdf.atom_at_zero,
        "loss_fraction": est.ecdf.loss_fraction,
        "dkw_band": est.ecdf.ci_halfwidth,
        "estimates": est.scalars,
    });
    out.csv("ecdf.csv", ecdf_csv(&est.ecdf));
    out.json("simulate.json", &header);
    if s.path_len > 0 {
        let y0 = (!model.patience.is_infinite()).then_some(0.0);
        let records = run_sequences(model, s.path_len, cfg.seed, s.w0, y0)?;
        out.csv("path.csv", sequences_csv(&records));
    }
    Ok(out.done(header))
}

fn solve_header(cfg: &RunConfig, sr: &SolveResult) -> Value {
    json!({
        "p0": sr.p0,
        "lambda2": sr.lambda2,
        "rho1": sr.rho1,
        "rho2": sr.rho2,
        "f_star_gamma": sr.f_star_gamma,
        "residual": sr.residual,
        "normalization_error": sr.normalization_error,
        "clip_magnitude": sr.clip_magnitude,
        "tail_mass": sr.tail_mass,
        "load_condition": sr.load_condition,
        "lambda2_rule": sr.lambda2_rule,
        "idle_return_probability": sr.idle_return_probability,
        "iterations": sr.iterations,
        "x_max": sr.grid.last(),
        "n_grid": sr.grid.len() - 1,
        "omega2_binding": crate::OMEGA2_BINDING,
        "product_convention": cfg.series.form,
    })
}

fn solve(cfg: &RunConfig, model: &QueueModel, mut out: Out) -> Result<Artifacts, CliError> {
    let sr = solve_stationary(model, &cfg.solve)?;
    let header = solve_header(cfg, &sr);
    out.csv("density.csv", solve_csv(&sr));
    out.json("solve.json", &header);
    Ok(out.done(header))
}

fn lst(cfg: &RunConfig, model: &QueueModel, mut out: Out) -> Result<Artifacts, CliError> {
    if cfg.series.thetas.is_empty() {
        return Err(CliError::Validation(
            "series.thetas must be non-empty".into(),
        ));
    }
    let sr = solve_exponential_patience(model, &cfg.solve)?;
    let sc = SeriesConfig {
        form: cfg.series.form,
        trunc_tol: cfg.solve.series_trunc_tol,
        ..SeriesConfig::default()
    };
    let thetas = &cfg.series.thetas;
    let mut total = Vec::new();
    let mut density = Vec::new();
    let mut numeric = Vec::new();
    let mut gap = Vec::new();
    for &t in thetas {
        let v = lst_series(model, t, sr.p0, sr.lambda2, &sc)?;
        let n = sr.p0 + sr.density_transform(t);
        total.push(v.total());
        density.push(v.density);
        numeric.push(n);
        gap.push((v.total() - n).abs() / n);
    }
    let f0 = match f0_from_series(model, cfg.solve.lambda2_rule, &sc) {
        Ok(p) => Some(p),
        Err(vacq::Error::InvalidParameter(_)) => None,
        Err(e) => return Err(e.into()),
    };
    // the series' own P(0) closes f*(0) = 1 − P(0) exactly
    let at_zero = match f0 {
        Some(p) => Some(lst_series(model, 0.0, p, p * sr.lambda2 / sr.p0, &sc)?.density),
        None => None,
    };
    let ranking = calibrate_series_form(model, &sr, thetas, cfg.solve.series_trunc_tol)?;
    let header = json!({
        "p0_solver": sr.p0,
        "lambda2": sr.lambda2,
        "f0_series": f0,
        "f0_relative_gap": f0.map(|p| (p - sr.p0).abs() / sr.p0),
        "density_transform_at_zero": at_zero,
        "max_relative_gap": gap.iter().copied().fold(0.0, f64::max),
        "calibration": ranking.iter().map(|(f, e)| json!({"form": f, "max_relative_error": e})).collect::<Vec<_>>(),
        "calibrated_form": ranking[0].0,
        "omega2_binding": crate::OMEGA2_BINDING,
        "product_convention": cfg.series.form,
    });
    out.csv(
        "lst.csv",
        csv_columns(
            &[
                "theta",
                "series",
                "series_density",
                "numeric",
                "relative_gap",
            ],
            &[thetas, &total, &density, &numeric, &gap],
        ),
    );
    out.json("lst.json", &header);
    Ok(out.done(header))
}

fn tail(cfg: &RunConfig, model: &QueueModel, mut out: Out) -> Result<Artifacts, CliError> {
    let t = &cfg.tail;
    let grid = tail_quantile_grid(&model.service, t.lo, t.hi, t.points)?;
    let sr = solve_exponential_patience(model, &cfg.solve)?;
    let run = SimRun {
        grid: Some(grid),
        force: cfg.simulate.skip_stability_gate,
        ..SimRun::new(t.n_customers, cfg.seed)
    };
    let mc = simulate_stationary(model, &run)?.ecdf;
    let report = verify_theorem2(model, &mc, &sr)?;
    let header = json!({
        "report": report,
        "n_customers": t.n_customers,
    });
    out.csv("tail.csv", tail_csv(&report));
    out.json("tail.json", &header);
    Ok(out.done(json!({
        "target_constant": report.target_constant,
        "in_long_tail_class": report.in_long_tail_class,
        "gap_trend_ok": report.gap_trend_ok,
    })))
}

fn stability(cfg: &RunConfig, model: &QueueModel, mut out: Out) -> Result<Artifacts, CliError> {
    let s = &cfg.stability;
    let report = check_stability(model, s.n_paths, s.horizon, cfg.seed)?;
    let m = loynes_m(model, s.horizon, cfg.seed)?;
    let j: Vec<f64> = (0..m.len()).map(|j| j as f64).collect();
    let header = serde_json::to_value(&report).expect("report serializes");
    out.csv("loynes.csv", csv_columns(&["j", "m"], &[&j, &m]));
    out.json("stability.json", &header);
    Ok(out.done(header))
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    limit: f64,
    pass: bool,
}

impl Check {
    fn at_most(name: &'static str, value: f64, limit: f64) -> Self {
        Check {
            name,
            value,
            limit,
            pass: value <= limit,
        }
    }
}

fn validate(cfg: &RunConfig, model: &QueueModel, mut out: Out) -> Result<Artifacts, CliError> {
    let n = cfg.validate.n_customers;
    let srs = workload_path(&mut InputStreams::new(model, cfg.seed, 0), n, 0.0);
    let des = des_oracle(model, n, cfg.seed)?;
    let gap = srs
        .iter()
        .zip(&des)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mut checks = vec![Check::at_most("srs_vs_des_max_abs", gap, 1e-9)];

    if let Some(lambda) = model.poisson_rate() {
        let sr = solve_stationary(model, &cfg.solve)?;
        checks.push(Check::at_most(
            "solver_normalization_error",
            sr.normalization_error,
            1e-6,
        ));
        let grid = linspace(*sr.grid.last().unwrap() * 0.5, 201);
        let mc_n = cfg.validate.n_monte_carlo;
        let run = SimRun {
            grid: Some(grid),
            burn_in: Some(mc_n / 10),
            ..SimRun::new(mc_n + mc_n / 10, cfg.seed)
        };
        let mc = simulate_stationary(model, &run)?.ecdf;
        checks.push(Check::at_most(
            "solver_vs_monte_carlo_sup",
            mc.sup_distance(|x| sr.cdf_at(x)),
            2.0 * mc.ci_halfwidth,
        ));

        if model.patience.is_infinite() && model.vacation.is_zero() {
            let rho = lambda * model.service.mean()?;
            checks.push(Check::at_most(
                "p0_vs_one_minus_rho",
                (sr.p0 - (1.0 - rho)).abs(),
                1e-3,
            ));
            if let Family::Exponential { rate: mu } = *model.service.family() {
                // f(x) = ρ(μ − λ) e^{−(μ−λ)x}
                let worst = sr
                    .grid
                    .iter()
                    .zip(&sr.f)
                    .filter(|(x, _)| **x <= 10.0)
                    .map(|(x, f)| {
                        let exact = rho * (mu - lambda) * (-(mu - lambda) * x).exp();
                        (f - exact).abs() / exact
                    })
                    .fold(0.0, f64::max);
                checks.push(Check::at_most("density_vs_closed_form_rel", worst, 1e-2));
            }
        }
    }

    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    let names: Vec<String> = checks.iter().map(|c| c.name.to_string()).collect();
    let value: Vec<f64> = checks.iter().map(|c| c.value).collect();
    let limit: Vec<f64> = checks.iter().map(|c| c.limit).collect();
    let mut csv = String::from("check,value,limit,pass\r\n");
    for (i, c) in checks.iter().enumerate() {
        csv.push_str(&format!(
            "{},{},{},{}\r\n",
            names[i],
            vacq::io::fmt_f64(value[i]),
            vacq::io::fmt_f64(limit[i]),
            c.pass
        ));
    }
    let header = json!({ "checks": checks, "all_passed": failed.is_empty() });
    out.csv("validate.csv", csv);
    out.json("validate.json", &header);
    let mut artifacts = out.done(header);
    if !failed.is_empty() {
        artifacts.failure = Some(failed.join(", "));
    }
    Ok(artifacts)
}
