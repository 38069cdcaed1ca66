//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Tolerances are pinned below.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use vacq::recursion::{run_sequences, workload_path, InputStreams};
use vacq::rng::{kind, VariateStream};
use vacq::simulate::{des_oracle, simulate_stationary, RunConfig};
use vacq::solve::{
    f0_from_series, lst_series, solve_exponential_patience, solve_stationary, Lambda2Rule,
    SeriesConfig, SolveConfig,
};
use vacq::stability::{check_stability, loynes_m, Verdict};
use vacq::tail::{check_long_tail, default_tail_grid, verify_theorem2};
use vacq::{DistSpec, QueueModel};

const SRS_DES_TOL: f64 = 1e-9;
const SRS_DES_BUDGET_S: f64 = 30.0;
const LOYNES_ORACLE_N: usize = 2000;
const LOYNES_KS_MAX: f64 = 0.02;
const MG1_P0_TOL: f64 = 1e-3;
const MG1_DENSITY_REL: f64 = 1e-2;
const DKW_MULTIPLE: f64 = 2.0;
const MC_CUSTOMERS: usize = 1_000_000;
const RESIDUAL_MAX: f64 = 1e-6;
const FULL_MODEL_BUDGET_S: f64 = 60.0;
const LST_REL: f64 = 1e-3;
const LST_THETAS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];
const LST_AT_ZERO: f64 = 1e-6;
const F0_REL_GAP: f64 = 1e-2;
const TAIL_CUSTOMERS: usize = 20_000_000;
const TAIL_REL: f64 = 0.15;
const TAIL_BUDGET_S: f64 = 900.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn exp(rate: f64) -> DistSpec {
    DistSpec::exponential(rate).unwrap()
}

struct Draws(VariateStream);

impl Draws {
    fn new(seed: u64) -> Self {
        Draws(VariateStream::for_input(seed, 0, kind::AUX))
    }

    fn unit(&mut self) -> f64 {
        self.0.next_uniforms()[0]
    }

    fn pick(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }

    fn law(&mut self, mean: f64) -> DistSpec {
        match self.pick(7) {
            0 => exp(1.0 / mean),
            1 => DistSpec::deterministic(mean).unwrap(),
            2 => DistSpec::uniform(0.0, 2.0 * mean).unwrap(),
            3 => DistSpec::pareto(2.5, mean * 0.6).unwrap(),
            4 => DistSpec::lognormal(mean.ln() - 0.125, 0.5).unwrap(),
            5 => DistSpec::weibull(1.5, mean / 0.9027452929509336).unwrap(),
            _ => DistSpec::hyper_exponential(vec![0.4, 0.6], vec![0.8 / mean, 1.2 / mean]).unwrap(),
        }
    }

    /// Interarrival mean 1, load below 0.8 and vacations shorter than
    /// interarrivals on average.
    fn stable_model(&mut self, finite_patience: bool) -> QueueModel {
        let es = 0.2 + 0.6 * self.unit();
        let ev = 0.05 + 0.8 * self.unit();
        let patience = if !finite_patience && self.pick(5) == 0 {
            DistSpec::infinite()
        } else {
            let mean = 0.5 + 3.0 * self.unit();
            self.law(mean)
        };
        let arrival = self.law(1.0);
        let service = self.law(es);
        let vacation = self.law(ev);
        QueueModel::new(arrival, service, patience, vacation).unwrap()
    }
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let mut draws = Draws::new(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let model = draws.stable_model(false);
        let seed = (draws.unit() * 1e9) as u64;
        let srs = workload_path(&mut InputStreams::new(&model, seed, 0), 10_000, 0.0);
        let des = des_oracle(&model, 10_000, seed).unwrap();
        worst = srs
            .iter()
            .zip(&des)
            .map(|(a, b)| (a - b).abs())
            .fold(worst, f64::max);
    }
    let secs = started.elapsed().as_secs_f64();
    outcome(
        worst <= SRS_DES_TOL && secs < SRS_DES_BUDGET_S,
        format!("SRS vs DES on 50 models x 1e4: max |diff| {worst:.2e} (<= {SRS_DES_TOL:.0e}), {secs:.1} s"),
    )
}

fn criterion_2() -> Outcome {
    let mut draws = Draws::new(2);
    let mut violations = 0usize;
    let mut steps = 0usize;
    for _ in 0..20 {
        let model = draws.stable_model(true);
        let seed = (draws.unit() * 1e9) as u64;
        for r in run_sequences(&model, 100_000, seed, 0.0, Some(0.0)).unwrap() {
            steps += 1;
            if r.z > r.y.unwrap() {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("Z <= Y on 20 models x 1e5 steps: {violations} violations in {steps} steps"),
    )
}

fn calibration_model() -> QueueModel {
    QueueModel::new(
        exp(1.0),
        exp(5.0),
        exp(4.0),
        DistSpec::deterministic(0.2).unwrap(),
    )
    .unwrap()
}

fn criterion_3() -> Outcome {
    let model = QueueModel::new(
        exp(1.0),
        DistSpec::lognormal(-1.0, 0.5).unwrap(),
        exp(2.0),
        DistSpec::uniform(0.0, 1.2).unwrap(),
    )
    .unwrap();
    let m = loynes_m(&model, LOYNES_ORACLE_N, 23).unwrap();
    let monotone = m.windows(2).all(|w| w[1] >= w[0]);
    // brute force: max over j <= k of σ_j + D_j + Σ_{i<=j}(V_i − τ_i), floored at 0
    let mut inputs = InputStreams::new(&model, 23, 0);
    let xi: Vec<_> = (0..=LOYNES_ORACLE_N as u64)
        .map(|j| inputs.input(j))
        .collect();
    let mut oracle_gap: f64 = 0.0;
    for (k, mk) in m.iter().enumerate().skip(1) {
        let mut best = f64::NEG_INFINITY;
        for j in 1..=k {
            let s: f64 = (1..=j).map(|i| xi[i].vacation - xi[i].tau).sum();
            best = best.max(xi[j].sigma + xi[j].deadline + s);
        }
        oracle_gap = oracle_gap.max((mk - best.max(0.0)).abs());
    }
    let ks = check_stability(&calibration_model(), 10_000, 400, 8)
        .unwrap()
        .fixed_point_ks;
    outcome(
        monotone && oracle_gap < 1e-9 && ks <= LOYNES_KS_MAX,
        format!(
            "Loynes: monotone {monotone}, brute-force gap {oracle_gap:.1e} for n <= {LOYNES_ORACLE_N}, \
             fixed-point KS {ks:.4} (<= {LOYNES_KS_MAX})"
        ),
    )
}

/// Monte Carlo CDF at `MC_CUSTOMERS` post-burn-in customers against the solver.
fn mc_sup(model: &QueueModel, cdf: impl Fn(f64) -> f64, seed: u64) -> (f64, f64) {
    let burn = MC_CUSTOMERS / 10;
    let run = RunConfig {
        burn_in: Some(burn),
        ..RunConfig::new(MC_CUSTOMERS + burn, seed)
    };
    let mc = simulate_stationary(model, &run).unwrap().ecdf;
    (mc.sup_distance(cdf), mc.ci_halfwidth)
}

fn criterion_4() -> Outcome {
    let model = QueueModel::new(
        exp(0.5),
        exp(1.0),
        DistSpec::infinite(),
        DistSpec::deterministic(0.0).unwrap(),
    )
    .unwrap();
    let sr = solve_stationary(&model, &SolveConfig::default()).unwrap();
    let p0_err = (sr.p0 - 0.5).abs();
    let density_rel = sr
        .grid
        .iter()
        .zip(&sr.f)
        .filter(|(x, _)| **x <= 10.0)
        .map(|(x, f)| {
            let exact = 0.25 * (-0.5 * x).exp();
            (f - exact).abs() / exact
        })
        .fold(0.0, f64::max);
    let (sup, band) = mc_sup(&model, |x| sr.cdf_at(x), 41);
    outcome(
        p0_err <= MG1_P0_TOL && density_rel <= MG1_DENSITY_REL && sup <= DKW_MULTIPLE * band,
        format!(
            "M/M/1: |P0 - 0.5| {p0_err:.1e}, density rel err {density_rel:.1e} on [0, 10], \
             MC sup {sup:.5} vs 2xDKW {:.5}",
            DKW_MULTIPLE * band
        ),
    )
}

fn full_model() -> QueueModel {
    QueueModel::new(exp(0.6), exp(1.0), exp(1.0), exp(2.0)).unwrap()
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let model = full_model();
    let sr = solve_stationary(&model, &SolveConfig::default()).unwrap();
    let (sup, band) = mc_sup(&model, |x| sr.cdf_at(x), 51);
    let secs = started.elapsed().as_secs_f64();
    outcome(
        sup <= DKW_MULTIPLE * band && sr.residual <= RESIDUAL_MAX && secs < FULL_MODEL_BUDGET_S,
        format!(
            "M/M/1+M with vacations: MC sup {sup:.5} vs 2xDKW {:.5}, residual {:.2e} (<= {RESIDUAL_MAX:.0e}), {secs:.1} s",
            DKW_MULTIPLE * band,
            sr.residual
        ),
    )
}

fn write_config(dir: &Path, name: &str, body: String) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const FULL_MODEL_JSON: &str = r#""model": {
    "arrival": {"family": "Exponential", "params": [0.6]},
    "service": {"family": "Exponential", "params": [1.0]},
    "patience": {"family": "Exponential", "params": [1.0]},
    "vacation": {"family": "Exponential", "params": [2.0]}}"#;

fn criterion_6() -> Outcome {
    let model = full_model();
    let sr = solve_exponential_patience(&model, &SolveConfig::default()).unwrap();
    let sc = SeriesConfig::default();
    let mut worst: f64 = 0.0;
    for t in LST_THETAS {
        let series = lst_series(&model, t, sr.p0, sr.lambda2, &sc)
            .unwrap()
            .total();
        let numeric = sr.p0 + sr.density_transform(t);
        worst = worst.max((series - numeric).abs() / numeric);
    }
    let f0 = f0_from_series(&model, Lambda2Rule::IdleBalance, &sc).unwrap();
    let at_zero_series = lst_series(&model, 0.0, f0, f0 * sr.lambda2 / sr.p0, &sc)
        .unwrap()
        .density;
    let at_zero = (at_zero_series - (1.0 - f0))
        .abs()
        .max((sr.density_transform(0.0) - (1.0 - sr.p0)).abs());
    let f0_gap = (f0 - sr.p0).abs() / sr.p0;

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "lst.json",
        format!(r#"{{"command": "lst", {FULL_MODEL_JSON}}}"#),
    );
    let out = dir.path().join("out");
    let opts = vqueue::Options {
        config: cfg,
        seed: None,
        out: out.clone(),
        force: false,
    };
    let recorded = vqueue::run(&opts).is_ok() && {
        let m: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap())
                .unwrap();
        m["omega2_binding"] == "gamma" && m["product_convention"] == m["results"]["calibrated_form"]
    };
    outcome(
        worst <= LST_REL && at_zero <= LST_AT_ZERO && f0_gap <= F0_REL_GAP && recorded,
        format!(
            "LST: series vs numeric max rel {worst:.1e} (<= {LST_REL:.0e}), |f*(0+) - (1 - F(0))| {at_zero:.1e}, \
             P(0) gap {f0_gap:.1e} (<= {F0_REL_GAP:.0e}), binding in manifest {recorded}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let started = Instant::now();
    let service = DistSpec::pareto(2.5, 0.6).unwrap();
    let model = QueueModel::new(exp(0.5), service.clone(), exp(1.0), exp(5.0)).unwrap();
    let grid = default_tail_grid(&service).unwrap();
    let run = RunConfig {
        grid: Some(grid),
        ..RunConfig::new(TAIL_CUSTOMERS, 71)
    };
    let mc = simulate_stationary(&model, &run).unwrap().ecdf;
    let sr = solve_exponential_patience(&model, &SolveConfig::default()).unwrap();
    let report = match verify_theorem2(&model, &mc, &sr) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("tail: {e}")),
    };
    let lo = service.integrated_tail_quantile(0.99).unwrap();
    let hi = service.integrated_tail_quantile(0.999).unwrap();
    let gap = report.max_gap_between(lo, hi).unwrap_or(f64::INFINITY);
    let top = *report.exceedances.last().unwrap();
    let e = exp(1.0);
    let exp_grid = default_tail_grid(&e).unwrap();
    let exp_class = check_long_tail(&exp_grid, |x| e.integrated_tail_tail(x).unwrap())
        .unwrap()
        .long_tailed;
    let secs = started.elapsed().as_secs_f64();
    outcome(
        gap <= TAIL_REL
            && report.gap_trend_ok
            && top >= 200
            && report.in_long_tail_class
            && !exp_class
            && secs <= TAIL_BUDGET_S,
        format!(
            "Pareto(2.5) tail: max gap {gap:.3} on the 99%-99.9% band (<= {TAIL_REL}), trend ok {}, \
             {top} exceedances at top, target {:.4}, Pareto long-tailed {}, Exp long-tailed {exp_class}, {secs:.1} s",
            report.gap_trend_ok, report.target_constant, report.in_long_tail_class
        ),
    )
}

fn criterion_8() -> Outcome {
    let nonneg = [
        QueueModel::new(exp(1.0), exp(5.0), exp(4.0), exp(0.5)).unwrap(),
        QueueModel::new(
            exp(1.0),
            exp(5.0),
            exp(4.0),
            DistSpec::deterministic(1.0).unwrap(),
        )
        .unwrap(),
    ];
    let verdicts: Vec<Verdict> = nonneg
        .iter()
        .map(|m| check_stability(m, 1000, 2000, 81).unwrap().verdict)
        .collect();
    let never_certified = verdicts.iter().all(|v| *v != Verdict::StableSufficient);
    let r = check_stability(&calibration_model(), 1000, 2000, 82).unwrap();
    let certified =
        r.verdict == Verdict::StableSufficient && r.p_renovation - r.p_renovation_ci > 0.0;
    outcome(
        never_certified && certified,
        format!(
            "stability: E(V - tau) >= 0 verdicts {verdicts:?}; calibration model {:?} with p_renovation {:.3} +- {:.3}",
            r.verdict, r.p_renovation, r.p_renovation_ci
        ),
    )
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let commands = [
        (
            "simulate",
            r#", "simulate": {"n_customers": 200000, "path_len": 200}"#,
        ),
        ("solve", ""),
        ("lst", ""),
        ("tail", r#", "tail": {"n_customers": 2000000, "hi": 0.999}"#),
        (
            "stability",
            r#", "stability": {"n_paths": 200, "horizon": 500}"#,
        ),
        ("validate", ""),
    ];
    let mut mismatched = Vec::new();
    let mut compared = 0;
    for (command, extra) in commands {
        let model = if command == "tail" {
            FULL_MODEL_JSON.replace(
                r#""service": {"family": "Exponential", "params": [1.0]}"#,
                r#""service": {"family": "Pareto", "params": [2.5, 0.6]}"#,
            )
        } else {
            FULL_MODEL_JSON.to_string()
        };
        let cfg = write_config(
            dir.path(),
            &format!("{command}.json"),
            format!(r#"{{"command": "{command}", "seed": 99, {model}{extra}}}"#),
        );
        let mut csvs = Vec::new();
        for pass in ["a", "b"] {
            let out = dir.path().join(format!("{command}-{pass}"));
            let opts = vqueue::Options {
                config: cfg.clone(),
                seed: None,
                out: out.clone(),
                force: false,
            };
            if let Err(e) = vqueue::run(&opts) {
                return outcome(false, format!("determinism: {command} failed: {e}"));
            }
            let mut files: Vec<_> = std::fs::read_dir(&out)
                .unwrap()
                .map(|e| e.unwrap().path())
                .filter(|p| p.extension().is_some_and(|x| x == "csv"))
                .collect();
            files.sort();
            csvs.push(
                files
                    .iter()
                    .map(|p| (p.file_name().unwrap().to_owned(), std::fs::read(p).unwrap()))
                    .collect::<Vec<_>>(),
            );
        }
        compared += csvs[0].len();
        if csvs[0].is_empty() || csvs[0] != csvs[1] {
            mismatched.push(command);
        }
    }
    outcome(
        mismatched.is_empty(),
        format!(
            "determinism: {compared} CSV files over 6 commands, mismatched commands {mismatched:?}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        let o = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            outcome(false, format!("panicked: {:?}", p.downcast_ref::<String>()))
        });
        println!(
            "{} criterion {n}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
