//! Greedy forward feature selection maximizing the multi-response statistic.
//!
//! Each round scores every unchosen predictor appended to the current set and
//! keeps the best one; selection stops at the first round whose best value no
//! longer increases (`<=`, no epsilon). An empty set is returned when already
//! the first round cannot exceed zero.

use crate::dataset::{rank_transform, Matrix};
use crate::error::{Error, Result};
use crate::estimator::{EstimatorChoice, TScorer};
use crate::neighbors::TiePolicy;
use crate::rng::{tags, RngConfig};
use rayon::prelude::*;

/// Configuration of a selection run.
#[derive(Debug, Clone)]
pub struct SelectionConfig {
    pub estimator: EstimatorChoice,
    pub tie_policy: TiePolicy,
    pub rng: RngConfig,
    pub rank_predictors: bool,
    /// Cap on the number of selected predictors; defaults to all of them.
    pub max_steps: Option<usize>,
}

impl SelectionConfig {
    /// Paper-style defaults: permutation-averaged statistic, random ties.
    pub fn default_for(q: usize, seed: u64) -> SelectionConfig {
        SelectionConfig {
            estimator: EstimatorChoice::default_for(q),
            tie_policy: TiePolicy::SeededRandom,
            rng: RngConfig::new(seed),
            rank_predictors: false,
            max_steps: None,
        }
    }
}

/// One accepted greedy step.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionStep {
    /// 0-based predictor column index.
    pub index: usize,
    /// Statistic value after adding the column.
    pub value: f64,
}

/// Why the selection ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalState {
    /// First non-increase hit.
    Stopped,
    /// Ran out of candidates or hit the step cap while still increasing.
    Exhausted,
    /// First-round best was `<= 0`.
    Empty,
}

impl TerminalState {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminalState::Stopped => "stopped",
            TerminalState::Exhausted => "exhausted",
            TerminalState::Empty => "empty",
        }
    }
}

/// Ordered record of a selection run.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionTrace {
    pub steps: Vec<SelectionStep>,
    pub terminal: TerminalState,
}

impl SelectionTrace {
    /// The selected subset, in selection order.
    pub fn selected(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.index).collect()
    }

    /// Checks the structural invariants of a trace against `p` predictors.
    pub fn validate(&self, p: usize) -> Result<()> {
        let mut seen = vec![false; p];
        let mut last = f64::NEG_INFINITY;
        for step in &self.steps {
            if step.index >= p {
                return Err(Error::Config(format!(
                    "step index {} out of range for p = {p}",
                    step.index
                )));
            }
            if seen[step.index] {
                return Err(Error::Config(format!(
                    "predictor {} chosen twice",
                    step.index + 1
                )));
            }
            seen[step.index] = true;
            if step.value <= last {
                return Err(Error::Config(
                    "trace values must strictly increase".into(),
                ));
            }
            last = step.value;
        }
        if self.terminal == TerminalState::Empty && !self.steps.is_empty() {
            return Err(Error::Config("empty terminal state with steps".into()));
        }
        Ok(())
    }
}

/// A candidate extension and its statistic value.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateScore {
    /// 0-based predictor column index.
    pub index: usize,
    pub value: f64,
}

fn conditioning_columns(predictors: &Matrix, rank_predictors: bool) -> Result<Vec<Vec<f64>>> {
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

fn score_round(
    scorer: &TScorer,
    x_cols: &[Vec<f64>],
    current: &[usize],
    cfg: &SelectionConfig,
) -> Result<Vec<CandidateScore>> {
    let p = x_cols.len();
    let chosen: Vec<bool> = {
        let mut mask = vec![false; p];
        for &j in current {
            mask[j] = true;
        }
        mask
    };
    let round = current.len() as u64;
    let root = cfg.rng.root();
    let mut scored: Vec<CandidateScore> = (0..p)
        .into_par_iter()
        .filter(|j| !chosen[*j])
        .map(|j| {
            let mut cols: Vec<&[f64]> = current.iter().map(|&c| x_cols[c].as_slice()).collect();
            cols.push(&x_cols[j]);
            let stream = root.fork(tags::CANDIDATE).fork(round).fork(j as u64);
            scorer
                .score(&cols, stream)
                .map(|value| CandidateScore { index: j, value })
        })
        .collect::<Result<_>>()?;
    // descending by value, stable on the index for deterministic argmax ties
    scored.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.index.cmp(&b.index)));
    Ok(scored)
}

/// Scores every extension of `current` by one predictor, best first.
pub fn evaluate_candidates(
    responses: &Matrix,
    predictors: &Matrix,
    current: &[usize],
    cfg: &SelectionConfig,
) -> Result<Vec<CandidateScore>> {
    let p = predictors.d();
    for &j in current {
        if j >= p {
            return Err(Error::Config(format!(
                "current set contains column {} but p = {p}",
                j + 1
            )));
        }
    }
    let scorer = TScorer::new(
        responses,
        &cfg.estimator,
        cfg.tie_policy,
        cfg.rank_predictors,
        cfg.rng.root().fork(tags::ALPHA),
    )?;
    let x_cols = conditioning_columns(predictors, cfg.rank_predictors)?;
    score_round(&scorer, &x_cols, current, cfg)
}

/// Runs the forward selection and returns its trace.
pub fn mfoci(responses: &Matrix, predictors: &Matrix, cfg: &SelectionConfig) -> Result<SelectionTrace> {
    let p = predictors.d();
    let max_steps = cfg.max_steps.unwrap_or(p);
    if max_steps > p {
        return Err(Error::Config(format!(
            "max_steps = {max_steps} exceeds p = {p}"
        )));
    }
    let scorer = TScorer::new(
        responses,
        &cfg.estimator,
        cfg.tie_policy,
        cfg.rank_predictors,
        cfg.rng.root().fork(tags::ALPHA),
    )?;
    if responses.n() != predictors.n() {
        return Err(Error::ShapeMismatch(format!(
            "responses have {} rows, predictors {}",
            responses.n(),
            predictors.n()
        )));
    }
    let x_cols = conditioning_columns(predictors, cfg.rank_predictors)?;

    let mut steps: Vec<SelectionStep> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    loop {
        if current.len() >= max_steps {
            return Ok(SelectionTrace {
                steps,
                terminal: TerminalState::Exhausted,
            });
        }
        let scored = score_round(&scorer, &x_cols, &current, cfg)?;
        let Some(best) = scored.first() else {
            return Ok(SelectionTrace {
                steps,
                terminal: TerminalState::Exhausted,
            });
        };
        if current.is_empty() && best.value <= 0.0 {
            return Ok(SelectionTrace {
                steps: Vec::new(),
                terminal: TerminalState::Empty,
            });
        }
        if let Some(last) = steps.last() {
            if best.value <= last.value {
                return Ok(SelectionTrace {
                    steps,
                    terminal: TerminalState::Stopped,
                });
            }
        }
        current.push(best.index);
        steps.push(SelectionStep {
            index: best.index,
            value: best.value,
        });
    }
}
