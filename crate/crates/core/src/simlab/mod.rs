//! Monte Carlo harness: estimator distributions over replications,
//! selection-rate studies, subsampling variance, and a normality diagnostic.
//!
//! Replications are embarrassingly parallel; every replication derives its
//! own stream from the master seed, so serial and parallel runs agree.

pub mod models;

pub use models::{gen_model, GeneratedData, ModelId};

use crate::dataset::Matrix;
use crate::error::{Error, Result};
use crate::estimator::EstimatorChoice;
use crate::mfoci::{mfoci, SelectionConfig};
use crate::neighbors::TiePolicy;
use crate::rng::{tags, RngConfig};
use rand::RngExt;
use rayon::prelude::*;

/// Replication values with their summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub values: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
    /// (level in percent, value) for the 5/25/50/75/95 levels.
    pub quantiles: Vec<(u8, f64)>,
}

impl McSummary {
    pub fn quantile(&self, level: u8) -> f64 {
        self.quantiles
            .iter()
            .find(|(l, _)| *l == level)
            .map(|(_, v)| *v)
            .expect("unknown quantile level")
    }

    /// Interquartile range, the boxplot spread.
    pub fn iqr(&self) -> f64 {
        self.quantile(75) - self.quantile(25)
    }
}

/// Summarizes replication values (mean, sd, standard quantiles).
pub fn summarize(values: Vec<f64>) -> McSummary {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = if n > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let quantiles = [5u8, 25, 50, 75, 95]
        .iter()
        .map(|&level| (level, empirical_quantile(&sorted, level as f64 / 100.0)))
        .collect();
    McSummary {
        values,
        mean,
        sd,
        quantiles,
    }
}

fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = p * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let w = h - lo as f64;
    sorted[lo] + w * (sorted[hi] - sorted[lo])
}

/// Estimator distribution over `reps` independent datasets of size `n`.
pub fn mc_estimate(
    id: &ModelId,
    n: usize,
    reps: usize,
    choice: &EstimatorChoice,
    policy: TiePolicy,
    rng: RngConfig,
    rank_predictors: bool,
) -> Result<McSummary> {
    if reps == 0 {
        return Err(Error::Config("need at least one replication".into()));
    }
    let values: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let stream = rng.root().fork(tags::REP).fork(rep as u64);
            let run = || -> Result<f64> {
                let data = gen_model(id, n, stream.fork(tags::MODEL))?;
                choice.evaluate(
                    &data.responses(),
                    &data.predictors(),
                    policy,
                    stream.fork(tags::ESTIMATE),
                    rank_predictors,
                )
            };
            run().map_err(|e| e.at_replication(rep))
        })
        .collect::<Result<_>>()?;
    Ok(summarize(values))
}

/// Aggregated selection rates over replications.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    /// Fraction of runs with the true set contained in the selection.
    pub prop_superset: f64,
    /// Fraction of runs selecting exactly the true set and nothing else.
    pub prop_exact: f64,
    /// Fraction of runs whose first `|S*|` selections are exactly the true
    /// set. This is the ranking-quality number the benchmark tables report
    /// next to the containment rate.
    pub prop_prefix_exact: f64,
    pub avg_selected: f64,
    /// For ten-variable truths: fraction of runs recovering at least
    /// 3/5/8/10 of the true predictors.
    pub prop_k_correct: Option<Vec<(usize, f64)>>,
    pub reps: usize,
}

/// Runs the forward selection on `reps` fresh datasets and aggregates the
/// reported rates.
pub fn selection_study(
    id: &ModelId,
    n: usize,
    reps: usize,
    cfg: &SelectionConfig,
) -> Result<SelectionReport> {
    if reps == 0 {
        return Err(Error::Config("need at least one replication".into()));
    }
    struct Outcome {
        selected: usize,
        hits: usize,
        superset: bool,
        exact: bool,
        prefix_exact: bool,
    }
    let outcomes: Vec<Outcome> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let stream = cfg.rng.root().fork(tags::REP).fork(rep as u64);
            let run = || -> Result<Outcome> {
                let data = gen_model(id, n, stream.fork(tags::MODEL))?;
                let mut rep_cfg = cfg.clone();
                rep_cfg.rng = stream.fork(tags::ESTIMATE).into_config();
                let trace = mfoci(&data.responses(), &data.predictors(), &rep_cfg)?;
                let selected = trace.selected();
                let truth = &data.true_predictors;
                let hits = truth.iter().filter(|t| selected.contains(t)).count();
                let superset = hits == truth.len();
                let prefix_exact = selected.len() >= truth.len()
                    && truth
                        .iter()
                        .all(|t| selected[..truth.len()].contains(t));
                Ok(Outcome {
                    selected: selected.len(),
                    hits,
                    superset,
                    exact: superset && selected.len() == truth.len(),
                    prefix_exact,
                })
            };
            run().map_err(|e| e.at_replication(rep))
        })
        .collect::<Result<_>>()?;

    let repf = reps as f64;
    let prop_superset = outcomes.iter().filter(|o| o.superset).count() as f64 / repf;
    let prop_exact = outcomes.iter().filter(|o| o.exact).count() as f64 / repf;
    let prop_prefix_exact = outcomes.iter().filter(|o| o.prefix_exact).count() as f64 / repf;
    let avg_selected = outcomes.iter().map(|o| o.selected as f64).sum::<f64>() / repf;
    let truth_len = gen_model(id, 8, cfg.rng.root())?.true_predictors.len();
    let prop_k_correct = (truth_len == 10).then(|| {
        [3usize, 5, 8, 10]
            .iter()
            .map(|&k| {
                let prop = outcomes.iter().filter(|o| o.hits >= k).count() as f64 / repf;
                (k, prop)
            })
            .collect()
    });
    Ok(SelectionReport {
        prop_superset,
        prop_exact,
        prop_prefix_exact,
        avg_selected,
        prop_k_correct,
        reps,
    })
}

/// m-out-of-n subsampling estimate of the limiting variance of
/// `sqrt(n) * T_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapVariance {
    /// `m * Var(T_n over subsamples)`.
    pub variance: f64,
    pub draws: Vec<f64>,
    pub m: usize,
    pub b: usize,
}

/// Draws `b` subsamples of size `m` without replacement and rescales their
/// estimator variance. The naive full-resample bootstrap is inconsistent for
/// this class of rank statistics; subsampling is not.
#[allow(clippy::too_many_arguments)]
pub fn bootstrap_variance(
    responses: &Matrix,
    predictors: &Matrix,
    m: usize,
    b: usize,
    choice: &EstimatorChoice,
    policy: TiePolicy,
    rng: RngConfig,
    rank_predictors: bool,
) -> Result<BootstrapVariance> {
    let n = responses.n();
    if m < 2 || m > n {
        return Err(Error::Config(format!(
            "subsample size m = {m} must lie in [2, {n}]"
        )));
    }
    if b < 2 {
        return Err(Error::Config("need at least B = 2 subsamples".into()));
    }
    let y_cols = responses.columns();
    let x_cols = predictors.columns();
    let draws: Vec<f64> = (0..b)
        .into_par_iter()
        .map(|rep| {
            let stream = rng.root().fork(tags::BOOTSTRAP).fork(rep as u64);
            let run = || -> Result<f64> {
                let mut pool: Vec<usize> = (0..n).collect();
                let mut gen = stream.rng();
                for i in 0..m {
                    let j = gen.random_range(i..n);
                    pool.swap(i, j);
                }
                let mut idx: Vec<usize> = pool[..m].to_vec();
                idx.sort_unstable();
                let sub_y: Vec<Vec<f64>> = y_cols
                    .iter()
                    .map(|col| idx.iter().map(|&i| col[i]).collect())
                    .collect();
                let sub_x: Vec<Vec<f64>> = x_cols
                    .iter()
                    .map(|col| idx.iter().map(|&i| col[i]).collect())
                    .collect();
                let yrefs: Vec<&[f64]> = sub_y.iter().map(Vec::as_slice).collect();
                let xrefs: Vec<&[f64]> = sub_x.iter().map(Vec::as_slice).collect();
                choice.evaluate(
                    &Matrix::from_columns(&yrefs)?,
                    &Matrix::from_columns(&xrefs)?,
                    policy,
                    stream.fork(tags::ESTIMATE),
                    rank_predictors,
                )
            };
            run().map_err(|e| e.at_replication(rep))
        })
        .collect::<Result<_>>()?;
    let mean = draws.iter().sum::<f64>() / b as f64;
    let var = draws.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (b - 1) as f64;
    Ok(BootstrapVariance {
        variance: m as f64 * var,
        draws,
        m,
        b,
    })
}

/// Standardized replication draws with their distance to the standard normal.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalityDiagnostic {
    pub standardized: Vec<f64>,
    pub ks_distance: f64,
    pub mean: f64,
    pub sd: f64,
    /// Set when the sampled dependence is essentially perfect, where the
    /// normal limit does not apply.
    pub perfect_dependence_warning: bool,
}

/// Distribution check: estimates over `reps` replications, standardized by
/// their own mean and sd, against `N(0, 1)`.
pub fn normality_diagnostic(
    id: &ModelId,
    n: usize,
    reps: usize,
    choice: &EstimatorChoice,
    policy: TiePolicy,
    rng: RngConfig,
    rank_predictors: bool,
) -> Result<NormalityDiagnostic> {
    if reps < 50 {
        return Err(Error::Config(format!(
            "normality diagnostic needs reps >= 50, got {reps}"
        )));
    }
    let summary = mc_estimate(id, n, reps, choice, policy, rng, rank_predictors)?;
    if summary.sd == 0.0 {
        return Err(Error::Config(
            "replication values are constant; nothing to standardize".into(),
        ));
    }
    let standardized: Vec<f64> = summary
        .values
        .iter()
        .map(|v| (v - summary.mean) / summary.sd)
        .collect();
    let ks_distance = ks_distance_to_standard_normal(&standardized);
    Ok(NormalityDiagnostic {
        standardized,
        ks_distance,
        mean: summary.mean,
        sd: summary.sd,
        perfect_dependence_warning: summary.mean > 0.99,
    })
}

/// Standard normal distribution function.
pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / std::f64::consts::SQRT_2))
}

/// Kolmogorov-Smirnov distance of the sample to `N(0, 1)`.
pub fn ks_distance_to_standard_normal(draws: &[f64]) -> f64 {
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = standard_normal_cdf(x);
        d = d.max(((i + 1) as f64 / n - cdf).abs());
        d = d.max((cdf - i as f64 / n).abs());
    }
    d
}
