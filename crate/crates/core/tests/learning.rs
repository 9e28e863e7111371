mod common;

use common::rng;
use rand::Rng;
use wsrank::harness::{gen_dataset2, h0_superlevel};
use wsrank::learning::{
    grad_fd, loss, train, Bounds, LabeledDataset, MetricParams, Sample, TrainOptions, TrainingConfig,
};

fn toy(n_per_class: usize, seed: u64) -> LabeledDataset {
    LabeledDataset::new(
        gen_dataset2(n_per_class, seed)
            .into_iter()
            .map(|s| Sample { barcode: h0_superlevel(&s.image), id: s.id, label: s.label })
            .collect(),
    )
    .unwrap()
}

/// Richardson check of the finite-difference gradient along a random
/// direction: the central quotients at `h` and `h/2` agree to `O(h²)` and
/// match the gradient's directional derivative.
fn directional_check(data: &LabeledDataset, theta: &MetricParams, u: &[f64], h: f64) -> Result<(), String> {
    let k = theta.k();
    let base = theta.to_vec();
    let at = |s: f64| {
        let v: Vec<f64> = base.iter().zip(u).map(|(b, d)| b + s * d).collect();
        loss(data, &MetricParams::from_vec(k, &v).unwrap(), 1e-4).unwrap()
    };
    let d1 = (at(h) - at(-h)) / (2.0 * h);
    let d2 = (at(h / 2.0) - at(-h / 2.0)) / h;
    let g = grad_fd(data, theta, 1e-4).unwrap();
    let dg: f64 = g.iter().zip(u).map(|(a, b)| a * b).sum();
    let scale = 1.0 + d2.abs();
    if (d1 - d2).abs() > 1e-4 * scale || (dg - d2).abs() > 1e-3 * scale {
        return Err(format!("d(h)={d1} d(h/2)={d2} <g,u>={dg} at {theta:?}"));
    }
    Ok(())
}

fn random_feasible<R: Rng>(r: &mut R, range: f64, b: &Bounds) -> MetricParams {
    let mut t = MetricParams::random(r, 2, range).project(b);
    t.p = r.random_range(1.2..4.0);
    t
}

fn random_direction<R: Rng>(r: &mut R, range: f64) -> Vec<f64> {
    let u: Vec<f64> = (0..6).map(|i| r.random_range(-1.0..1.0) * if i < 4 { range } else { 1.0 }).collect();
    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    u.iter().map(|x| x / norm).collect()
}

#[test]
fn fd_gradient_passes_richardson_check() {
    let data = toy(6, 21);
    let range = data.filtration_range();
    let b = Bounds::for_range(range);
    let mut r = rng(22);
    let mut failures = Vec::new();
    for _ in 0..20 {
        let t = random_feasible(&mut r, range, &b);
        let u = random_direction(&mut r, range);
        if let Err(e) = directional_check(&data, &t, &u, 1e-3) {
            failures.push(e);
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn global_rescale_direction_is_flat() {
    // scaling every distance by c leaves the loss unchanged: with the
    // standard-like flat contour, moving the floor is such a rescale
    let data = toy(4, 23);
    let t = MetricParams::new(vec![-1e4, -2e4], vec![1.0, 1.0], vec![1.0], 2.0).unwrap();
    let a = loss(&data, &t, 1e-4).unwrap();
    let b = loss(&data, &t, 3e-4).unwrap();
    assert!((a - b).abs() < 1e-12, "{a} {b}");
}

#[test]
fn training_lowers_the_loss_and_stays_in_range() {
    let data = toy(8, 24);
    let cfg = TrainingConfig { iters: 150, seed: 3, ..TrainingConfig::default() };
    let (opts, theta0): (TrainOptions, MetricParams) = cfg.resolve(&data, &mut rng(cfg.seed)).unwrap();
    let out = train(&data, &theta0, &opts).unwrap();
    let first = out.trace[0].loss;
    eprintln!("loss {first} -> {}", out.best_loss);
    assert!(out.best_loss <= first);
    assert!(out.trace.iter().all(|row| (0.0..=2.0).contains(&row.loss)));
    assert!(out.trace.windows(2).all(|w| w[1].best_loss <= w[0].best_loss));
    assert!(out.best.is_feasible(&opts.bounds));
    // reproducible
    let again = train(&data, &theta0, &opts).unwrap();
    assert_eq!(again.best, out.best);
}
