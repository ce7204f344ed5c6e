//! Dependence of a response vector on a predictor vector, measured through
//! rank statistics.
//!
//! The crate estimates how well a `q`-dimensional response `Y` can be
//! predicted from a `p`-dimensional predictor `X`: `0` for independence, `1`
//! when `Y` is a function of `X`. The statistic chains nearest-neighbor rank
//! correlations of each response on the predictors and the previous
//! responses, runs in `O(n log n)`, and needs no tuning parameters.
//!
//! Main entry points:
//!
//! - [`estimator::xi_n`] / [`estimator::t_n`] / [`estimator::t_bar_n`]: the
//!   single- and multi-response statistics;
//! - [`mfoci::mfoci`]: greedy forward feature selection with the
//!   first-non-increase stopping rule;
//! - [`gauss`]: closed-form values under multivariate normal models, used as
//!   ground truth;
//! - [`simlab`]: synthetic models, Monte Carlo studies, subsampling variance
//!   and a normality diagnostic.
//!
//! Everything randomized takes an [`rng::RngConfig`]; identical seeds give
//! identical results regardless of thread count.

pub mod dataset;
pub mod error;
pub mod estimator;
pub mod gauss;
pub mod mfoci;
pub mod neighbors;
pub mod rng;
pub mod simlab;

pub use dataset::{compute_ranks, rank_transform_columns, Dataset, Matrix, RankProfile};
pub use error::{Error, Result};
pub use estimator::{
    t_bar_n, t_bar_n_values, t_n, t_sigma_n, xi_n, xi_n_oracle, EstimatorChoice, PermSelector,
    PermutationSet, TEstimate, TSigmaEstimate, XiEstimate,
};
pub use gauss::{
    classify_extremes, sample_mvn, t_gauss_equicorr, t_gauss_general, xi_gauss, EquicorrSpec,
    ExtremeClass, GaussOracle, GaussianSpec,
};
pub use mfoci::{
    evaluate_candidates, mfoci, CandidateScore, SelectionConfig, SelectionStep, SelectionTrace,
    TerminalState,
};
pub use neighbors::{nearest_neighbors, NeighborMap, TiePolicy, DIM_THRESHOLD};
pub use rng::{RngConfig, RngStream};
pub use simlab::{
    bootstrap_variance, gen_model, mc_estimate, normality_diagnostic, selection_study,
    BootstrapVariance, GeneratedData, McSummary, ModelId, NormalityDiagnostic, SelectionReport,
};
