use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vacq::recursion::{workload_path, InputStreams};
use vacq::simulate::{des_oracle, des_oracle_from, simulate_stationary, RunConfig};
use vacq::stability::{check_stability, Verdict};
use vacq::{DistSpec, QueueModel};

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// A law from a random family with mean `mean`.
fn random_law(rng: &mut ChaCha8Rng, mean: f64) -> DistSpec {
    match rng.next_u64() % 7 {
        0 => DistSpec::exponential(1.0 / mean).unwrap(),
        1 => DistSpec::deterministic(mean).unwrap(),
        2 => DistSpec::uniform(0.0, 2.0 * mean).unwrap(),
        3 => DistSpec::pareto(2.5, mean * 0.6).unwrap(),
        4 => DistSpec::lognormal(mean.ln() - 0.125, 0.5).unwrap(),
        5 => DistSpec::weibull(1.5, mean / 0.9027452929509336).unwrap(),
        _ => DistSpec::hyper_exponential(vec![0.4, 0.6], vec![0.8 / mean, 1.2 / mean]).unwrap(),
    }
}

fn random_model(rng: &mut ChaCha8Rng) -> QueueModel {
    let ea = 1.0;
    let es = 0.2 + 0.6 * unit(rng);
    let ev = 0.05 + 0.8 * unit(rng);
    let patience = if rng.next_u64().is_multiple_of(5) {
        DistSpec::infinite()
    } else {
        let mean = 0.5 + 3.0 * unit(rng);
        random_law(rng, mean)
    };
    QueueModel::new(
        random_law(rng, ea),
        random_law(rng, es),
        patience,
        random_law(rng, ev),
    )
    .unwrap()
}

#[test]
fn srs_matches_event_simulation_on_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..50 {
        let model = random_model(&mut rng);
        let seed = rng.next_u64();
        let srs = workload_path(&mut InputStreams::new(&model, seed, 0), 10_000, 0.0);
        let des = des_oracle(&model, 10_000, seed).unwrap();
        let worst = srs
            .iter()
            .zip(&des)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-9, "case {case}: {model:?} differs by {worst}");
    }
}

#[test]
fn srs_matches_event_simulation_from_residual_vacation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let model = random_model(&mut rng);
        let srs = workload_path(&mut InputStreams::new(&model, 3, 0), 5_000, 4.0);
        let des = des_oracle_from(&model, 5_000, 3, 4.0).unwrap();
        for (a, b) in srs.iter().zip(&des) {
            assert!((a - b).abs() <= 1e-9);
        }
    }
}

#[test]
fn event_simulation_reduces_to_lindley() {
    let model = QueueModel::new(
        DistSpec::exponential(1.0).unwrap(),
        DistSpec::uniform(0.0, 1.6).unwrap(),
        DistSpec::infinite(),
        DistSpec::deterministic(0.0).unwrap(),
    )
    .unwrap();
    let des = des_oracle(&model, 10_000, 99).unwrap();
    let mut inputs = InputStreams::new(&model, 99, 0);
    let mut w: f64 = 0.0;
    for (n, d) in des.iter().enumerate() {
        assert!((w - d).abs() <= 1e-9, "n = {n}");
        let i = inputs.input(n as u64);
        w = (w + i.sigma - i.tau).max(0.0);
    }
}

fn exp_model() -> QueueModel {
    QueueModel::new(
        DistSpec::exponential(0.6).unwrap(),
        DistSpec::exponential(1.0).unwrap(),
        DistSpec::exponential(1.0).unwrap(),
        DistSpec::exponential(2.0).unwrap(),
    )
    .unwrap()
}

#[test]
fn dkw_band_shrinks_by_root_two_when_doubled() {
    let grid: Vec<f64> = (0..=60).map(|i| i as f64 * 0.1).collect();
    let run = |n| {
        let cfg = RunConfig {
            grid: Some(grid.clone()),
            burn_in: Some(10_000),
            ..RunConfig::new(n, 1)
        };
        simulate_stationary(&exp_model(), &cfg).unwrap().ecdf
    };
    let a = run(110_000);
    let b = run(210_000);
    let ratio = b.ci_halfwidth / a.ci_halfwidth;
    assert!((ratio / 0.5f64.sqrt() - 1.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn initial_condition_is_forgotten() {
    let grid: Vec<f64> = (0..=80).map(|i| i as f64 * 0.1).collect();
    let run = |w0| {
        let cfg = RunConfig {
            grid: Some(grid.clone()),
            burn_in: Some(100_000),
            w0,
            ..RunConfig::new(400_000, 21)
        };
        simulate_stationary(&exp_model(), &cfg).unwrap().ecdf
    };
    let a = run(0.0);
    let b = run(50.0);
    let sup = a
        .cdf
        .iter()
        .zip(&b.cdf)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(sup <= 2.0 * a.ci_halfwidth, "sup {sup}");
}

#[test]
fn loynes_limit_is_a_fixed_point_of_psi() {
    let model = QueueModel::new(
        DistSpec::exponential(1.0).unwrap(),
        DistSpec::exponential(5.0).unwrap(),
        DistSpec::exponential(4.0).unwrap(),
        DistSpec::deterministic(0.2).unwrap(),
    )
    .unwrap();
    let r = check_stability(&model, 10_000, 400, 8).unwrap();
    assert_eq!(r.verdict, Verdict::StableSufficient);
    assert!(r.fixed_point_ks <= 0.02, "ks {}", r.fixed_point_ks);
}

#[test]
fn renovation_matches_returns_of_y_to_zero() {
    // independent sanity check: forward Y from 0 hits 0 with positive frequency
    let model = QueueModel::new(
        DistSpec::exponential(1.0).unwrap(),
        DistSpec::exponential(5.0).unwrap(),
        DistSpec::exponential(4.0).unwrap(),
        DistSpec::deterministic(0.2).unwrap(),
    )
    .unwrap();
    let recs = vacq::recursion::run_sequences(&model, 20_000, 4, 0.0, Some(0.0)).unwrap();
    let zeros = recs.iter().filter(|r| r.y == Some(0.0)).count();
    assert!(zeros > 1000);
    let r = check_stability(&model, 500, 300, 4).unwrap();
    assert!(r.p_renovation > 0.0);
}
