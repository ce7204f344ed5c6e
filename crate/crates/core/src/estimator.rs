//! Estimators of the multi-response dependence measure.
//!
//! The scalar building block is `xi_n`, the graph-based rank statistic
//!
//! ```text
//! xi_n(Y|X) = sum_k (n * min{R_k, R_{N(k)}} - L_k^2) / sum_k L_k (n - L_k)
//! ```
//!
//! with `R`/`L` the `<=`/`>=` rank counts of the response column and `N(k)`
//! the nearest neighbor of row k in the conditioning matrix. The
//! multi-response statistic chains conditional `xi_n` terms:
//!
//! ```text
//! t_n = 1 - (q - sum_i xi_n(Y_i | (X, Y_{i-1},..,Y_1)))
//!         / (q - sum_{i>=2} xi_n(Y_i | (Y_{i-1},..,Y_1)))
//! ```
//!
//! Numerator and denominator of each `xi_n` are accumulated in exact integer
//! arithmetic, so every estimator value is independent of summation order and
//! thread schedule.

use crate::dataset::{compute_ranks, interleave_columns, rank_transform, Matrix, RankProfile};
use crate::error::{Error, Result};
use crate::neighbors::{nearest_neighbors, nearest_neighbors_brute, NeighborMap, TiePolicy};
use crate::rng::{tags, RngStream};
use rayon::prelude::*;

/// Result of a single `xi_n` evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct XiEstimate {
    pub value: f64,
    pub n: usize,
    /// Number of conditioning columns.
    pub conditioning_dim: usize,
    /// Observations whose nearest neighbor was tied.
    pub ties_encountered: usize,
}

/// Result of a `t_n` evaluation with its term breakdown.
///
/// `value = 1 - (q - sum(lambda_terms)) / (q - sum(alpha_terms))` holds
/// exactly as written for `q >= 2`; for `q = 1` the value is the single
/// lambda term itself.
#[derive(Debug, Clone, PartialEq)]
pub struct TEstimate {
    pub value: f64,
    /// `lambda_terms[i] = xi_n(Y_{i+1} | (X, Y_i, .., Y_1))`, one per response.
    pub lambda_terms: Vec<f64>,
    /// `alpha_terms[i] = xi_n(Y_{i+2} | (Y_{i+1}, .., Y_1))`, `q - 1` entries.
    pub alpha_terms: Vec<f64>,
    pub q: usize,
    pub p: usize,
    pub n: usize,
}

/// Result of the naive per-response average.
#[derive(Debug, Clone, PartialEq)]
pub struct TSigmaEstimate {
    pub value: f64,
    /// `xi_terms[i] = xi_n(Y_{i+1} | X)`.
    pub xi_terms: Vec<f64>,
}

fn check_response_finite(y: &[f64]) -> Result<()> {
    if let Some(pos) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: pos + 1,
            column: "response".into(),
        });
    }
    Ok(())
}

fn xi_from_parts(ranks: &RankProfile, map: &NeighborMap, label: &str) -> Result<f64> {
    let n = ranks.len() as i128;
    let r = ranks.r();
    let l = ranks.l();
    let mut num: i128 = 0;
    let mut den: i128 = 0;
    for k in 0..ranks.len() {
        let rk = r[k] as i128;
        let rn = r[map.neighbor_of(k)] as i128;
        let lk = l[k] as i128;
        num += n * rk.min(rn) - lk * lk;
        den += lk * (n - lk);
    }
    if den == 0 {
        return Err(Error::DegenerateResponse(label.to_string()));
    }
    Ok(num as f64 / den as f64)
}

/// `xi_n(y | x)` with ranks from a sort and neighbors from the dispatched
/// exact search.
pub fn xi_n(y: &[f64], x: &Matrix, policy: TiePolicy, stream: RngStream) -> Result<XiEstimate> {
    check_response_finite(y)?;
    if y.len() != x.n() {
        return Err(Error::ShapeMismatch(format!(
            "response has {} rows, conditioning matrix has {}",
            y.len(),
            x.n()
        )));
    }
    let ranks = compute_ranks(y)?;
    let map = nearest_neighbors(x, policy, stream)?;
    let value = xi_from_parts(&ranks, &map, "y")?;
    Ok(XiEstimate {
        value,
        n: y.len(),
        conditioning_dim: x.d(),
        ties_encountered: map.ties_encountered(),
    })
}

/// Quadratic-time reference for `xi_n`: ranks by definitional pair counting
/// and neighbors by full scan. Bit-identical to [`xi_n`] under the
/// smallest-index policy.
pub fn xi_n_oracle(
    y: &[f64],
    x: &Matrix,
    policy: TiePolicy,
    stream: RngStream,
) -> Result<XiEstimate> {
    check_response_finite(y)?;
    if y.len() != x.n() {
        return Err(Error::ShapeMismatch(format!(
            "response has {} rows, conditioning matrix has {}",
            y.len(),
            x.n()
        )));
    }
    let n = y.len();
    let map = nearest_neighbors_brute(x, policy, stream)?;
    // definitional O(n^2) counts
    let mut r = vec![0i128; n];
    let mut l = vec![0i128; n];
    for k in 0..n {
        for j in 0..n {
            if y[j] <= y[k] {
                r[k] += 1;
            }
            if y[j] >= y[k] {
                l[k] += 1;
            }
        }
    }
    let ni = n as i128;
    let mut num: i128 = 0;
    let mut den: i128 = 0;
    for k in 0..n {
        let rn = r[map.neighbor_of(k)];
        num += ni * r[k].min(rn) - l[k] * l[k];
        den += l[k] * (ni - l[k]);
    }
    if den == 0 {
        return Err(Error::DegenerateResponse("y".into()));
    }
    Ok(XiEstimate {
        value: num as f64 / den as f64,
        n,
        conditioning_dim: x.d(),
        ties_encountered: map.ties_encountered(),
    })
}

/// Which permutations of the response columns to average over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermSelector {
    /// All `q!` orderings. Rejected for `q > 8`.
    Full,
    /// The `q` rotations of `(1, .., q)`.
    Cyclic,
    /// Caller-supplied list (0-based internally).
    Explicit(Vec<Vec<usize>>),
}

/// A validated, materialized set of response orderings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationSet {
    perms: Vec<Vec<usize>>,
    q: usize,
}

impl PermutationSet {
    pub fn new(selector: &PermSelector, q: usize) -> Result<PermutationSet> {
        if q == 0 {
            return Err(Error::Config("permutation set needs q >= 1".into()));
        }
        let perms = match selector {
            PermSelector::Full => {
                if q > 8 {
                    return Err(Error::Config(format!(
                        "full permutation set has {q}! orderings; use cyclic or an explicit list for q > 8"
                    )));
                }
                let mut perms = Vec::new();
                let mut current = Vec::with_capacity(q);
                let mut used = vec![false; q];
                lex_permutations(q, &mut current, &mut used, &mut perms);
                perms
            }
            PermSelector::Cyclic => (0..q)
                .map(|shift| (0..q).map(|i| (i + shift) % q).collect())
                .collect(),
            PermSelector::Explicit(list) => {
                if list.is_empty() {
                    return Err(Error::Config("explicit permutation list is empty".into()));
                }
                for perm in list {
                    if !is_permutation(perm, q) {
                        return Err(Error::Config(format!(
                            "{perm:?} is not a permutation of 0..{q}"
                        )));
                    }
                }
                list.clone()
            }
        };
        Ok(PermutationSet { perms, q })
    }

    pub fn full(q: usize) -> Result<PermutationSet> {
        Self::new(&PermSelector::Full, q)
    }

    pub fn cyclic(q: usize) -> Result<PermutationSet> {
        Self::new(&PermSelector::Cyclic, q)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn orderings(&self) -> &[Vec<usize>] {
        &self.perms
    }
}

fn lex_permutations(
    q: usize,
    current: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == q {
        out.push(current.clone());
        return;
    }
    for i in 0..q {
        if !used[i] {
            used[i] = true;
            current.push(i);
            lex_permutations(q, current, used, out);
            current.pop();
            used[i] = false;
        }
    }
}

fn is_permutation(perm: &[usize], q: usize) -> bool {
    if perm.len() != q {
        return false;
    }
    let mut seen = vec![false; q];
    for &i in perm {
        if i >= q || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// Response columns prepared for estimation: raw values for ranking and the
/// conditioning variant (rank-transformed when `rank_predictors` is set).
struct PreparedResponses {
    raw: Vec<Vec<f64>>,
    cond: Vec<Vec<f64>>,
}

fn prepare_responses(responses: &Matrix, rank_predictors: bool) -> Result<PreparedResponses> {
    let raw = responses.columns();
    for (i, col) in raw.iter().enumerate() {
        let first = col[0];
        if col.iter().all(|&v| v == first) {
            return Err(Error::DegenerateResponse(format!("Y{}", i + 1)));
        }
    }
    let cond = if rank_predictors {
        raw.iter()
            .map(|col| rank_transform(col))
            .collect::<Result<_>>()?
    } else {
        raw.clone()
    };
    Ok(PreparedResponses { raw, cond })
}

fn prepare_predictors(predictors: &Matrix, rank_predictors: bool) -> Result<Vec<Vec<f64>>> {
    if rank_predictors {
        predictors
            .columns()
            .iter()
            .map(|col| rank_transform(col))
            .collect()
    } else {
        Ok(predictors.columns())
    }
}

fn check_rows(responses: &Matrix, predictors: &Matrix) -> Result<()> {
    if responses.n() != predictors.n() {
        return Err(Error::ShapeMismatch(format!(
            "responses have {} rows, predictors {}",
            responses.n(),
            predictors.n()
        )));
    }
    if responses.n() < 2 {
        return Err(Error::InsufficientObservations {
            needed: 2,
            got: responses.n(),
        });
    }
    if responses.d() == 0 || predictors.d() == 0 {
        return Err(Error::ShapeMismatch(
            "need at least one response and one predictor column".into(),
        ));
    }
    Ok(())
}

/// Conditioning matrix for the i-th lambda term: the predictor columns
/// followed by the previous responses `Y_{i-1}, .., Y_1` right to left.
fn lambda_conditioning(x_cols: &[Vec<f64>], y_cond: &[Vec<f64>], i: usize, n: usize) -> Matrix {
    let mut refs: Vec<&[f64]> = x_cols.iter().map(Vec::as_slice).collect();
    for j in (0..i).rev() {
        refs.push(&y_cond[j]);
    }
    let d = refs.len();
    Matrix::from_vec(interleave_columns(&refs), n, d).expect("columns validated")
}

fn alpha_conditioning(y_cond: &[Vec<f64>], i: usize, n: usize) -> Matrix {
    let refs: Vec<&[f64]> = (0..i).rev().map(|j| y_cond[j].as_slice()).collect();
    let d = refs.len();
    Matrix::from_vec(interleave_columns(&refs), n, d).expect("columns validated")
}

fn compose_t(lambda_terms: &[f64], alpha_terms: &[f64], q: usize) -> f64 {
    if q == 1 {
        return lambda_terms[0];
    }
    let lambda_sum: f64 = lambda_terms.iter().sum();
    let alpha_sum: f64 = alpha_terms.iter().sum();
    1.0 - (q as f64 - lambda_sum) / (q as f64 - alpha_sum)
}

/// The multi-response statistic `t_n(Y | X)` with its term breakdown.
///
/// Response columns are taken in the order given. With `rank_predictors`
/// every conditioning column (predictors and previous responses) is replaced
/// by its ranks before the neighbor search.
pub fn t_n(
    responses: &Matrix,
    predictors: &Matrix,
    policy: TiePolicy,
    stream: RngStream,
    rank_predictors: bool,
) -> Result<TEstimate> {
    check_rows(responses, predictors)?;
    let q = responses.d();
    let prepared = prepare_responses(responses, rank_predictors)?;
    let x_cols = prepare_predictors(predictors, rank_predictors)?;
    let n = responses.n();

    let lambda_terms: Vec<f64> = (0..q)
        .into_par_iter()
        .map(|i| {
            let cond = lambda_conditioning(&x_cols, &prepared.cond, i, n);
            xi_n(
                &prepared.raw[i],
                &cond,
                policy,
                stream.fork(tags::LAMBDA).fork(i as u64),
            )
            .map(|e| e.value)
        })
        .collect::<Result<_>>()?;
    let alpha_terms: Vec<f64> = (1..q)
        .into_par_iter()
        .map(|i| {
            let cond = alpha_conditioning(&prepared.cond, i, n);
            xi_n(
                &prepared.raw[i],
                &cond,
                policy,
                stream.fork(tags::ALPHA).fork(i as u64),
            )
            .map(|e| e.value)
        })
        .collect::<Result<_>>()?;

    Ok(TEstimate {
        value: compose_t(&lambda_terms, &alpha_terms, q),
        lambda_terms,
        alpha_terms,
        q,
        p: predictors.d(),
        n,
    })
}

/// Mean of `t_n` over the response orderings in `perms`.
pub fn t_bar_n(
    responses: &Matrix,
    predictors: &Matrix,
    perms: &PermutationSet,
    policy: TiePolicy,
    stream: RngStream,
    rank_predictors: bool,
) -> Result<f64> {
    let values = t_bar_n_values(responses, predictors, perms, policy, stream, rank_predictors)?;
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// The per-ordering `t_n` values behind [`t_bar_n`], aligned with
/// `perms.orderings()`.
pub fn t_bar_n_values(
    responses: &Matrix,
    predictors: &Matrix,
    perms: &PermutationSet,
    policy: TiePolicy,
    stream: RngStream,
    rank_predictors: bool,
) -> Result<Vec<f64>> {
    check_rows(responses, predictors)?;
    if perms.q() != responses.d() {
        return Err(Error::Config(format!(
            "permutation set built for q = {}, responses have q = {}",
            perms.q(),
            responses.d()
        )));
    }
    let y_cols = responses.columns();
    perms
        .orderings()
        .par_iter()
        .enumerate()
        .map(|(j, perm)| {
            let refs: Vec<&[f64]> = perm.iter().map(|&i| y_cols[i].as_slice()).collect();
            let permuted = Matrix::from_columns(&refs)?;
            t_n(
                &permuted,
                predictors,
                policy,
                stream.fork(tags::PERM).fork(j as u64),
                rank_predictors,
            )
            .map(|e| e.value)
        })
        .collect::<Result<_>>()
}

/// The naive per-response average `(1/q) sum_i xi_n(Y_i | X)`. Kept as the
/// baseline that cannot detect jointly-dependent but pairwise-independent
/// structure.
pub fn t_sigma_n(
    responses: &Matrix,
    predictors: &Matrix,
    policy: TiePolicy,
    stream: RngStream,
) -> Result<TSigmaEstimate> {
    check_rows(responses, predictors)?;
    let q = responses.d();
    let prepared = prepare_responses(responses, false)?;
    let xi_terms: Vec<f64> = (0..q)
        .into_par_iter()
        .map(|i| {
            xi_n(
                &prepared.raw[i],
                predictors,
                policy,
                stream.fork(tags::SIGMA).fork(i as u64),
            )
            .map(|e| e.value)
        })
        .collect::<Result<_>>()?;
    Ok(TSigmaEstimate {
        value: xi_terms.iter().sum::<f64>() / q as f64,
        xi_terms,
    })
}

/// Estimator selection shared by the simulation lab, MFOCI and the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EstimatorChoice {
    T,
    TBar(PermSelector),
    TSigma,
}

impl EstimatorChoice {
    /// Default for feature selection: full averaging while `q!` is small,
    /// cyclic rotations beyond that.
    pub fn default_for(q: usize) -> EstimatorChoice {
        if q <= 3 {
            EstimatorChoice::TBar(PermSelector::Full)
        } else {
            EstimatorChoice::TBar(PermSelector::Cyclic)
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            EstimatorChoice::T => "t",
            EstimatorChoice::TBar(PermSelector::Full) => "tbar-full",
            EstimatorChoice::TBar(PermSelector::Cyclic) => "tbar-cyclic",
            EstimatorChoice::TBar(PermSelector::Explicit(_)) => "tbar-explicit",
            EstimatorChoice::TSigma => "tsigma",
        }
    }

    /// Evaluates the chosen statistic.
    pub fn evaluate(
        &self,
        responses: &Matrix,
        predictors: &Matrix,
        policy: TiePolicy,
        stream: RngStream,
        rank_predictors: bool,
    ) -> Result<f64> {
        match self {
            EstimatorChoice::T => {
                t_n(responses, predictors, policy, stream, rank_predictors).map(|e| e.value)
            }
            EstimatorChoice::TBar(selector) => {
                let perms = PermutationSet::new(selector, responses.d())?;
                t_bar_n(responses, predictors, &perms, policy, stream, rank_predictors)
            }
            EstimatorChoice::TSigma => {
                t_sigma_n(responses, predictors, policy, stream).map(|e| e.value)
            }
        }
    }
}

/// Precomputed scorer for repeated `t_n`/`t_bar_n` evaluations against a
/// fixed response block, as in greedy selection. The alpha terms do not
/// depend on the predictors, so they are evaluated once per ordering.
pub(crate) struct TScorer {
    y_raw: Vec<Vec<f64>>,
    y_cond: Vec<Vec<f64>>,
    perms: Vec<Vec<usize>>,
    /// `q - sum(alpha_terms)` per ordering.
    alpha_denoms: Vec<f64>,
    q: usize,
    n: usize,
    policy: TiePolicy,
}

impl TScorer {
    pub(crate) fn new(
        responses: &Matrix,
        choice: &EstimatorChoice,
        policy: TiePolicy,
        rank_predictors: bool,
        alpha_stream: RngStream,
    ) -> Result<TScorer> {
        let q = responses.d();
        if responses.n() < 2 {
            return Err(Error::InsufficientObservations {
                needed: 2,
                got: responses.n(),
            });
        }
        let perms = match choice {
            EstimatorChoice::T => vec![(0..q).collect::<Vec<usize>>()],
            EstimatorChoice::TBar(selector) => {
                PermutationSet::new(selector, q)?.orderings().to_vec()
            }
            EstimatorChoice::TSigma => {
                return Err(Error::Config(
                    "tsigma is not a valid selection estimator".into(),
                ))
            }
        };
        let prepared = prepare_responses(responses, rank_predictors)?;
        let n = responses.n();
        let alpha_denoms: Vec<f64> = perms
            .par_iter()
            .enumerate()
            .map(|(j, perm)| {
                let mut alpha_sum = 0.0;
                for i in 1..q {
                    let refs: Vec<&[f64]> = (0..i)
                        .rev()
                        .map(|t| prepared.cond[perm[t]].as_slice())
                        .collect();
                    let cond = Matrix::from_vec(interleave_columns(&refs), n, refs.len())
                        .expect("columns validated");
                    let term = xi_n(
                        &prepared.raw[perm[i]],
                        &cond,
                        policy,
                        alpha_stream
                            .fork(tags::PERM)
                            .fork(j as u64)
                            .fork(tags::ALPHA)
                            .fork(i as u64),
                    )?;
                    alpha_sum += term.value;
                }
                Ok(q as f64 - alpha_sum)
            })
            .collect::<Result<_>>()?;
        Ok(TScorer {
            y_raw: prepared.raw,
            y_cond: prepared.cond,
            perms,
            alpha_denoms,
            q,
            n,
            policy,
        })
    }

    /// Statistic value for the given conditioning columns (already
    /// rank-transformed when that option is active).
    pub(crate) fn score(&self, x_cols: &[&[f64]], stream: RngStream) -> Result<f64> {
        let mut total = 0.0;
        for (j, perm) in self.perms.iter().enumerate() {
            let perm_stream = stream.fork(tags::PERM).fork(j as u64);
            let mut lambda_sum = 0.0;
            for i in 0..self.q {
                let mut refs: Vec<&[f64]> = x_cols.to_vec();
                for t in (0..i).rev() {
                    refs.push(&self.y_cond[perm[t]]);
                }
                let cond = Matrix::from_vec(interleave_columns(&refs), self.n, refs.len())
                    .expect("columns validated");
                let term = xi_n(
                    &self.y_raw[perm[i]],
                    &cond,
                    self.policy,
                    perm_stream.fork(tags::LAMBDA).fork(i as u64),
                )?;
                lambda_sum += term.value;
            }
            let t_value = if self.q == 1 {
                lambda_sum
            } else {
                1.0 - (self.q as f64 - lambda_sum) / self.alpha_denoms[j]
            };
            total += t_value;
        }
        Ok(total / self.perms.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngConfig;

    fn stream() -> RngStream {
        RngConfig::new(99).root()
    }

    fn col_matrix(cols: &[&[f64]]) -> Matrix {
        Matrix::from_columns(cols).unwrap()
    }

    #[test]
    fn xi_hand_value_doubling() {
        let y = [2.0, 4.0, 8.0, 16.0];
        let x = col_matrix(&[&y]);
        let est = xi_n(&y, &x, TiePolicy::SmallestIndex, stream()).unwrap();
        assert_eq!(est.value, -0.2);
        assert_eq!(est.n, 4);
        assert_eq!(est.conditioning_dim, 1);
    }

    #[test]
    fn xi_lower_bound_attained_at_n2() {
        let y = [0.0, 1.0];
        let x = col_matrix(&[&y]);
        let est = xi_n(&y, &x, TiePolicy::SmallestIndex, stream()).unwrap();
        assert_eq!(est.value, -1.0);
    }

    #[test]
    fn xi_oracle_matches_hand_values() {
        let y = [2.0, 4.0, 8.0, 16.0];
        let x = col_matrix(&[&y]);
        let est = xi_n_oracle(&y, &x, TiePolicy::SmallestIndex, stream()).unwrap();
        assert_eq!(est.value, -0.2);
        let y2 = [0.0, 1.0];
        let x2 = col_matrix(&[&y2]);
        assert_eq!(
            xi_n_oracle(&y2, &x2, TiePolicy::SmallestIndex, stream())
                .unwrap()
                .value,
            -1.0
        );
    }

    #[test]
    fn xi_degenerate_response() {
        let y = [3.0, 3.0, 3.0];
        let x = col_matrix(&[&[1.0, 2.0, 3.0][..]]);
        assert!(matches!(
            xi_n(&y, &x, TiePolicy::SmallestIndex, stream()),
            Err(Error::DegenerateResponse(_))
        ));
    }

    #[test]
    fn xi_shape_mismatch() {
        let y = [1.0, 2.0, 3.0];
        let x = col_matrix(&[&[1.0, 2.0][..]]);
        assert!(matches!(
            xi_n(&y, &x, TiePolicy::SmallestIndex, stream()),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn t_reduces_to_xi_for_single_response() {
        let y = [2.0, 4.0, 8.0, 16.0];
        let x = col_matrix(&[&y]);
        let t = t_n(
            &col_matrix(&[&y]),
            &x,
            TiePolicy::SmallestIndex,
            stream(),
            false,
        )
        .unwrap();
        let xi = xi_n(&y, &x, TiePolicy::SmallestIndex, stream()).unwrap();
        assert_eq!(t.value, xi.value);
        assert_eq!(t.lambda_terms, vec![xi.value]);
        assert!(t.alpha_terms.is_empty());
    }

    #[test]
    fn t_identity_holds_for_duplicated_response() {
        let y = [2.0, 4.0, 8.0, 16.0];
        let x = col_matrix(&[&y]);
        let t = t_n(
            &col_matrix(&[&y, &y]),
            &x,
            TiePolicy::SmallestIndex,
            stream(),
            false,
        )
        .unwrap();
        assert_eq!(t.lambda_terms[0], -0.2);
        assert_eq!(t.lambda_terms.len(), 2);
        assert_eq!(t.alpha_terms.len(), 1);
        let recomposed = 1.0
            - (2.0 - (t.lambda_terms[0] + t.lambda_terms[1])) / (2.0 - t.alpha_terms[0]);
        assert_eq!(t.value, recomposed);
        // conditioning on (x, y) or on y alone leaves the neighbor graph of
        // these four points unchanged, so every term is the hand value
        assert_eq!(t.lambda_terms[1], -0.2);
        assert_eq!(t.alpha_terms[0], -0.2);
        assert_eq!(t.value, 1.0 - 2.4 / 2.2);
    }

    #[test]
    fn t_names_degenerate_column() {
        let y1 = [1.0, 2.0, 3.0];
        let y2 = [5.0, 5.0, 5.0];
        let x = col_matrix(&[&[0.5, 0.2, 0.9][..]]);
        let err = t_n(
            &col_matrix(&[&y1, &y2]),
            &x,
            TiePolicy::SmallestIndex,
            stream(),
            false,
        )
        .unwrap_err();
        match err {
            Error::DegenerateResponse(name) => assert_eq!(name, "Y2"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn tbar_full_q2_is_the_two_term_mean() {
        let y1 = [1.0, 3.0, 2.0, 5.0, 4.0];
        let y2 = [2.0, 1.0, 4.0, 3.0, 5.0];
        let x = col_matrix(&[&[0.3, 1.2, -0.5, 2.0, 0.7][..]]);
        let responses = col_matrix(&[&y1, &y2]);
        let perms = PermutationSet::full(2).unwrap();
        let bar = t_bar_n(
            &responses,
            &x,
            &perms,
            TiePolicy::SmallestIndex,
            stream(),
            false,
        )
        .unwrap();
        let t12 = t_n(&responses, &x, TiePolicy::SmallestIndex, stream().fork(tags::PERM).fork(0), false)
            .unwrap()
            .value;
        let t21 = t_n(
            &col_matrix(&[&y2, &y1]),
            &x,
            TiePolicy::SmallestIndex,
            stream().fork(tags::PERM).fork(1),
            false,
        )
        .unwrap()
        .value;
        assert_eq!(bar, (t12 + t21) / 2.0);
    }

    #[test]
    fn tbar_q1_equals_t() {
        let y = [2.0, 4.0, 8.0, 16.0];
        let x = col_matrix(&[&y]);
        let responses = col_matrix(&[&y]);
        for perms in [PermutationSet::full(1).unwrap(), PermutationSet::cyclic(1).unwrap()] {
            let bar = t_bar_n(
                &responses,
                &x,
                &perms,
                TiePolicy::SmallestIndex,
                stream(),
                false,
            )
            .unwrap();
            assert_eq!(bar, -0.2);
        }
    }

    #[test]
    fn cyclic_set_is_the_rotations() {
        let set = PermutationSet::cyclic(3).unwrap();
        assert_eq!(
            set.orderings(),
            &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]
        );
        let full = PermutationSet::full(3).unwrap();
        assert_eq!(full.orderings().len(), 6);
        assert_eq!(full.orderings()[0], vec![0, 1, 2]);
    }

    #[test]
    fn explicit_set_rejects_non_permutation() {
        let bad = PermSelector::Explicit(vec![vec![0, 0]]);
        assert!(matches!(
            PermutationSet::new(&bad, 2),
            Err(Error::Config(_))
        ));
        let short = PermSelector::Explicit(vec![vec![0]]);
        assert!(PermutationSet::new(&short, 2).is_err());
        let ok = PermSelector::Explicit(vec![vec![1, 0]]);
        assert!(PermutationSet::new(&ok, 2).is_ok());
    }

    #[test]
    fn tsigma_equals_xi_for_duplicated_response() {
        let y = [2.0, 4.0, 8.0, 16.0];
        let x = col_matrix(&[&[1.0, 5.0, 2.0, 9.0][..]]);
        let sigma = t_sigma_n(
            &col_matrix(&[&y, &y]),
            &x,
            TiePolicy::SmallestIndex,
            stream(),
        )
        .unwrap();
        let xi = xi_n(&y, &x, TiePolicy::SmallestIndex, stream().fork(tags::SIGMA).fork(0))
            .unwrap();
        assert_eq!(sigma.value, xi.value);
        assert_eq!(sigma.xi_terms, vec![xi.value, xi.value]);
    }

    #[test]
    fn scorer_matches_direct_t_under_smallest_index() {
        let y1 = [1.0, 3.0, 2.0, 5.0, 4.0, 0.5];
        let y2 = [2.0, 1.0, 4.0, 3.0, 5.0, 2.5];
        let x1 = [0.3, 1.2, -0.5, 2.0, 0.7, 1.1];
        let x2 = [4.0, -2.0, 0.1, 0.4, 3.3, -1.0];
        let responses = col_matrix(&[&y1, &y2]);
        let scorer = TScorer::new(
            &responses,
            &EstimatorChoice::TBar(PermSelector::Full),
            TiePolicy::SmallestIndex,
            false,
            stream().fork(77),
        )
        .unwrap();
        let score = scorer.score(&[&x1, &x2], stream()).unwrap();
        let direct = t_bar_n(
            &responses,
            &col_matrix(&[&x1, &x2]),
            &PermutationSet::full(2).unwrap(),
            TiePolicy::SmallestIndex,
            stream(),
            false,
        )
        .unwrap();
        assert_eq!(score, direct);
    }

    #[test]
    fn upper_bound_never_exceeded() {
        // heavily tied data still respects xi_n <= 1
        let y = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 1.0];
        let x = col_matrix(&[&[1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 1.0][..]]);
        for policy in [TiePolicy::SmallestIndex, TiePolicy::SeededRandom] {
            let est = xi_n(&y, &x, policy, stream()).unwrap();
            assert!(est.value <= 1.0);
        }
    }
}
