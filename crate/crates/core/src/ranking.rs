//! Greedy forward ranking of features on the prognostic and predictive axes.
//!
//! Prognostic criteria score a candidate `X_k` by how much it tells about `Y`:
//!
//! | order  | score                                   |
//! |--------|-----------------------------------------|
//! | first  | `I(X_k;Y)`                              |
//! | second | `Σ_{j ∈ S} I(X_k;Y|X_j)`                |
//! | full   | `I(X_k;Y|X_S)`                          |
//!
//! Predictive criteria replace `I(X_k;Y|·)` with `I(T;Y|X_k,·)`. `S` is the set of
//! features already ranked on that axis. The second-order sum is empty on the first
//! step, where the first-order score is used instead.

use rayon::prelude::*;

use crate::dataset::{TrialDataset, Variable};
use crate::error::{Error, Result};
use crate::prob::{build_contingency, EstimatorKind};

/// Scores closer than this are treated as tied; ties go to the lowest feature index.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Default cap on the number of cells in a full-conditioning table.
pub const DEFAULT_CELL_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankAxis {
    Prognostic,
    Predictive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriterionOrder {
    First,
    Second,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedEntry {
    /// Zero-based feature index.
    pub feature: usize,
    /// Criterion value at selection time, in nats.
    pub score: f64,
    /// 1-based position in the ranking.
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    pub entries: Vec<RankedEntry>,
    pub axis: RankAxis,
    pub order: CriterionOrder,
    pub estimator: EstimatorKind,
}

impl RankedList {
    pub fn features(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.feature).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankingConfig {
    pub order: CriterionOrder,
    pub estimator: EstimatorKind,
    pub cell_budget: usize,
}

impl RankingConfig {
    pub fn new(order: CriterionOrder, estimator: EstimatorKind) -> Self {
        Self {
            order,
            estimator,
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }
}

pub fn rank_prognostic(dataset: &TrialDataset, config: RankingConfig) -> Result<RankedList> {
    Ranker::new(dataset, config).rank(RankAxis::Prognostic)
}

pub fn rank_predictive(dataset: &TrialDataset, config: RankingConfig) -> Result<RankedList> {
    Ranker::new(dataset, config).rank(RankAxis::Predictive)
}

/// The criterion value the greedy loop uses for `candidate` once `selected`
/// (in selection order) has been ranked.
pub fn score_feature(
    dataset: &TrialDataset,
    axis: RankAxis,
    config: RankingConfig,
    candidate: usize,
    selected: &[usize],
) -> Result<f64> {
    let ranker = Ranker::new(dataset, config);
    ranker.validate(axis)?;
    if candidate >= dataset.p() {
        return Err(Error::UnknownVariable(Variable::Feature(candidate).to_string()));
    }
    if selected.contains(&candidate) {
        return Err(Error::InvalidRanking(format!(
            "candidate X{} is already selected",
            candidate + 1
        )));
    }
    if let Some(&j) = selected.iter().find(|&&j| j >= dataset.p()) {
        return Err(Error::UnknownVariable(Variable::Feature(j).to_string()));
    }
    ranker.score(axis, candidate, selected)
}

struct Ranker<'a> {
    data: &'a TrialDataset,
    config: RankingConfig,
}

impl<'a> Ranker<'a> {
    fn new(data: &'a TrialDataset, config: RankingConfig) -> Self {
        Self { data, config }
    }

    fn validate(&self, axis: RankAxis) -> Result<()> {
        if self.data.n() == 0 {
            return Err(Error::EmptyDataset);
        }
        if self.data.p() == 0 {
            return Err(Error::InvalidRanking("dataset has no features".into()));
        }
        if axis == RankAxis::Predictive && !self.data.has_both_arms() {
            return Err(Error::SingleArm);
        }
        Ok(())
    }

    /// `I(X_k;Y|X_cond)` or `I(T;Y|X_k,X_cond)` under the configured estimator.
    fn term(&self, axis: RankAxis, candidate: usize, cond: &[usize]) -> Result<f64> {
        let mut vars = match axis {
            RankAxis::Prognostic => vec![Variable::Feature(candidate), Variable::Y],
            RankAxis::Predictive => vec![Variable::T, Variable::Y, Variable::Feature(candidate)],
        };
        vars.extend(cond.iter().map(|&j| Variable::Feature(j)));

        let needed = vars.iter().try_fold(1u128, |acc, &v| {
            self.data
                .cardinality(v)
                .map(|c| acc.saturating_mul(c as u128))
                .ok_or_else(|| Error::UnknownVariable(v.to_string()))
        })?;
        if needed > self.config.cell_budget as u128 {
            return Err(Error::CellBudgetExceeded {
                needed,
                budget: self.config.cell_budget,
            });
        }

        let table = build_contingency(self.data, &vars)?;
        let dist = self.config.estimator.estimate(&table)?;
        let rest: Vec<usize> = (2..vars.len()).collect();
        dist.conditional_mutual_information(&[0], &[1], &rest)
    }

    fn score(&self, axis: RankAxis, candidate: usize, selected: &[usize]) -> Result<f64> {
        match (self.config.order, selected) {
            (CriterionOrder::First, _) | (CriterionOrder::Second, []) => {
                self.term(axis, candidate, &[])
            }
            (CriterionOrder::Second, _) => selected.iter().try_fold(0.0, |acc, &j| {
                Ok(acc + self.term(axis, candidate, &[j])?)
            }),
            (CriterionOrder::Full, _) => self.term(axis, candidate, selected),
        }
    }

    fn rank(&self, axis: RankAxis) -> Result<RankedList> {
        self.validate(axis)?;
        let p = self.data.p();
        let mut remaining: Vec<usize> = (0..p).collect();
        let mut selected: Vec<usize> = Vec::with_capacity(p);
        let mut entries = Vec::with_capacity(p);
        // running second-order sums, accumulated in selection order
        let mut partial = vec![0.0f64; p];

        for step in 1..=p {
            let scores: Vec<f64> = match (self.config.order, selected.last()) {
                (CriterionOrder::Second, Some(&last)) => {
                    let added = remaining
                        .par_iter()
                        .map(|&k| self.term(axis, k, &[last]))
                        .collect::<Result<Vec<_>>>()?;
                    remaining
                        .iter()
                        .zip(added)
                        .map(|(&k, t)| {
                            partial[k] += t;
                            partial[k]
                        })
                        .collect()
                }
                _ => remaining
                    .par_iter()
                    .map(|&k| self.score(axis, k, &selected))
                    .collect::<Result<Vec<_>>>()?,
            };

            let (pos, score) = argmax(&scores);
            let feature = remaining.remove(pos);
            selected.push(feature);
            entries.push(RankedEntry {
                feature,
                score,
                step,
            });
        }

        Ok(RankedList {
            entries,
            axis,
            order: self.config.order,
            estimator: self.config.estimator,
        })
    }
}

/// Index of the largest score; scores within [`TIE_TOLERANCE`] of the current best
/// keep the earlier (lower-index) candidate.
fn argmax(scores: &[f64]) -> (usize, f64) {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] + TIE_TOLERANCE {
            best = i;
        }
    }
    (best, scores[best])
}
