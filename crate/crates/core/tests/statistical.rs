//! Monte Carlo checks of the statistical claims that are not part of the
//! acceptance gate: subsampling variance against a direct replication oracle,
//! the information gain inequality on averages, and convergence sanity.

use multidep::*;
use rayon::prelude::*;

fn equicorr_model() -> ModelId {
    ModelId::Gauss(
        EquicorrSpec::new(5, 2, 0.5, 0.2, 0.5)
            .unwrap()
            .to_gaussian()
            .unwrap(),
    )
}

#[test]
fn subsampling_variance_tracks_direct_monte_carlo() {
    let model = equicorr_model();
    let n = 5000;

    // oracle: variance of sqrt(n) * T_n over independent replications
    let reps = 500;
    let summary = mc_estimate(
        &model,
        n,
        reps,
        &EstimatorChoice::T,
        TiePolicy::SmallestIndex,
        RngConfig::new(11),
        false,
    )
    .unwrap();
    let direct = n as f64 * summary.sd * summary.sd;

    // one dataset, m-out-of-n subsamples
    let data = gen_model(&model, n, RngConfig::new(12).root()).unwrap();
    let boot = bootstrap_variance(
        &data.responses(),
        &data.predictors(),
        500,
        300,
        &EstimatorChoice::T,
        TiePolicy::SmallestIndex,
        RngConfig::new(13),
        false,
    )
    .unwrap();

    let ratio = boot.variance / direct;
    assert!(
        (0.5..=2.0).contains(&ratio),
        "bootstrap {} vs direct {} (ratio {ratio})",
        boot.variance,
        direct
    );
}

#[test]
fn information_gain_on_averages() {
    // Y depends on X1 and Z; conditioning on (X1, Z) must not predict worse
    // than conditioning on X1 alone, up to Monte Carlo noise.
    let reps = 60;
    let n = 500;
    let values: Vec<(f64, f64)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let stream = RngConfig::new(40).root().fork(rep);
            let mut rng = stream.fork(0).rng();
            use rand::RngExt;
            let mut x1 = Vec::with_capacity(n);
            let mut z = Vec::with_capacity(n);
            let mut y1 = Vec::with_capacity(n);
            let mut y2 = Vec::with_capacity(n);
            for _ in 0..n {
                let a: f64 = rng.random::<f64>() - 0.5;
                let b: f64 = rng.random::<f64>() - 0.5;
                let noise: f64 = rng.random::<f64>() - 0.5;
                x1.push(a);
                z.push(b);
                y1.push(a + b + 0.1 * noise);
                y2.push(a * b + 0.1 * noise);
            }
            let responses = Matrix::from_columns(&[&y1, &y2]).unwrap();
            let with_z = Matrix::from_columns(&[&x1, &z]).unwrap();
            let without_z = Matrix::from_columns(&[&x1]).unwrap();
            let a = t_n(&responses, &with_z, TiePolicy::SmallestIndex, stream.fork(1), false)
                .unwrap()
                .value;
            let b = t_n(
                &responses,
                &without_z,
                TiePolicy::SmallestIndex,
                stream.fork(2),
                false,
            )
            .unwrap()
            .value;
            (a, b)
        })
        .collect();
    let mean_with: f64 = values.iter().map(|v| v.0).sum::<f64>() / reps as f64;
    let mean_without: f64 = values.iter().map(|v| v.1).sum::<f64>() / reps as f64;
    assert!(
        mean_with >= mean_without - 0.02,
        "with Z {mean_with} vs without {mean_without}"
    );
    // Z carries genuinely new information here, so the gain must be real
    assert!(
        mean_with > mean_without + 0.05,
        "informative Z added no predictability: {mean_with} vs {mean_without}"
    );
}

#[test]
fn conditionally_independent_extension_adds_nothing() {
    // Z = X1 + independent noise is conditionally independent of Y given X1,
    // so conditioning on (X1, Z) estimates the same quantity as X1 alone.
    let reps = 60;
    let n = 600;
    let values: Vec<(f64, f64)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let stream = RngConfig::new(45).root().fork(rep);
            let mut rng = stream.fork(0).rng();
            use rand::RngExt;
            let mut x1 = Vec::with_capacity(n);
            let mut z = Vec::with_capacity(n);
            let mut y1 = Vec::with_capacity(n);
            let mut y2 = Vec::with_capacity(n);
            for _ in 0..n {
                let a: f64 = rng.random::<f64>() - 0.5;
                let ez: f64 = rng.random::<f64>() - 0.5;
                let e1: f64 = rng.random::<f64>() - 0.5;
                let e2: f64 = rng.random::<f64>() - 0.5;
                x1.push(a);
                z.push(a + ez);
                y1.push(a + 0.3 * e1);
                y2.push(a * a + 0.3 * e2);
            }
            let responses = Matrix::from_columns(&[&y1, &y2]).unwrap();
            let with_z = Matrix::from_columns(&[&x1, &z]).unwrap();
            let without_z = Matrix::from_columns(&[&x1]).unwrap();
            let a = t_n(&responses, &with_z, TiePolicy::SmallestIndex, stream.fork(1), false)
                .unwrap()
                .value;
            let b = t_n(
                &responses,
                &without_z,
                TiePolicy::SmallestIndex,
                stream.fork(2),
                false,
            )
            .unwrap()
            .value;
            (a, b)
        })
        .collect();
    let mean_with: f64 = values.iter().map(|v| v.0).sum::<f64>() / reps as f64;
    let mean_without: f64 = values.iter().map(|v| v.1).sum::<f64>() / reps as f64;
    assert!(
        (mean_with - mean_without).abs() < 0.03,
        "with Z {mean_with} vs without {mean_without}"
    );
}

#[test]
fn population_invariance_under_monotone_marginal_transforms() {
    // transforming every column by a strictly increasing map leaves the
    // population value unchanged; the raw estimator recovers it on average
    let model = equicorr_model();
    let reps = 50;
    let n = 1000;
    let values: Vec<(f64, f64)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let stream = RngConfig::new(46).root().fork(rep);
            let data = gen_model(&model, n, stream.fork(0)).unwrap();
            let raw_y = data.responses();
            let raw_x = data.predictors();
            let map_col = |col: &[f64], kind: usize| -> Vec<f64> {
                match kind % 3 {
                    0 => col.iter().map(|v| v.atan()).collect(),
                    1 => col.iter().map(|v| v.exp()).collect(),
                    _ => col.iter().map(|v| 3.0 * v + 1.0).collect(),
                }
            };
            let ty: Vec<Vec<f64>> = (0..raw_y.d()).map(|j| map_col(&raw_y.column(j), j)).collect();
            let tx: Vec<Vec<f64>> = (0..raw_x.d()).map(|j| map_col(&raw_x.column(j), j)).collect();
            let tyr: Vec<&[f64]> = ty.iter().map(Vec::as_slice).collect();
            let txr: Vec<&[f64]> = tx.iter().map(Vec::as_slice).collect();
            let a = t_n(&raw_y, &raw_x, TiePolicy::SmallestIndex, stream.fork(1), false)
                .unwrap()
                .value;
            let b = t_n(
                &Matrix::from_columns(&tyr).unwrap(),
                &Matrix::from_columns(&txr).unwrap(),
                TiePolicy::SmallestIndex,
                stream.fork(2),
                false,
            )
            .unwrap()
            .value;
            (a, b)
        })
        .collect();
    let mean_raw: f64 = values.iter().map(|v| v.0).sum::<f64>() / reps as f64;
    let mean_mapped: f64 = values.iter().map(|v| v.1).sum::<f64>() / reps as f64;
    assert!(
        (mean_raw - mean_mapped).abs() < 0.02,
        "raw {mean_raw} vs transformed {mean_mapped}"
    );
}

#[test]
fn perfect_functional_dependence_approaches_one() {
    use rand::RngExt;
    let n = 2000;
    let mut rng = RngConfig::new(50).root().rng();
    let mut x1 = Vec::with_capacity(n);
    let mut x2 = Vec::with_capacity(n);
    for _ in 0..n {
        x1.push(rng.random::<f64>());
        x2.push(rng.random::<f64>());
    }
    let y1: Vec<f64> = x1.iter().map(|v| v * v).collect();
    let y2: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| (a + b).sin()).collect();
    let responses = Matrix::from_columns(&[&y1, &y2]).unwrap();
    let predictors = Matrix::from_columns(&[&x1, &x2]).unwrap();
    let est = t_n(
        &responses,
        &predictors,
        TiePolicy::SmallestIndex,
        RngConfig::new(51).root(),
        false,
    )
    .unwrap();
    assert!(est.value > 0.9, "got {}", est.value);
}

#[test]
fn tbar_cyclic_close_to_tbar_full_on_exchangeable_model() {
    // exchangeable responses: every ordering has the same distribution, so
    // the two averages estimate the same quantity
    let spec = EquicorrSpec::new(3, 3, 0.4, 0.4, 0.3).unwrap();
    let model = ModelId::Gauss(spec.to_gaussian().unwrap());
    let full = mc_estimate(
        &model,
        800,
        40,
        &EstimatorChoice::TBar(PermSelector::Full),
        TiePolicy::SmallestIndex,
        RngConfig::new(60),
        false,
    )
    .unwrap();
    let cyclic = mc_estimate(
        &model,
        800,
        40,
        &EstimatorChoice::TBar(PermSelector::Cyclic),
        TiePolicy::SmallestIndex,
        RngConfig::new(60),
        false,
    )
    .unwrap();
    assert!(
        (full.mean - cyclic.mean).abs() < 0.02,
        "full {} vs cyclic {}",
        full.mean,
        cyclic.mean
    );
}
