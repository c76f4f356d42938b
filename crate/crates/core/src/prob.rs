//! Contingency tables, cell-probability estimators and plug-in information measures.
//!
//! All information quantities are in nats. Tables and distributions are dense and
//! row-major: the last axis varies fastest.

use crate::dataset::{TrialDataset, Variable};
use crate::error::{Error, Result};

/// Allowed deviation of a distribution's total mass from 1.
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxisSpec {
    pub variable: Variable,
    pub cardinality: usize,
}

impl AxisSpec {
    pub fn new(variable: Variable, cardinality: usize) -> Self {
        Self {
            variable,
            cardinality,
        }
    }
}

fn cell_count(axes: &[AxisSpec]) -> Result<usize> {
    axes.iter().try_fold(1usize, |acc, ax| {
        if ax.cardinality == 0 {
            return Err(Error::InvalidDistribution(format!(
                "axis {} has cardinality 0",
                ax.variable
            )));
        }
        acc.checked_mul(ax.cardinality)
            .ok_or_else(|| Error::InvalidDistribution("table size overflows".into()))
    })
}

/// Integer cell counts over the cross-product of the axes' categories.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    axes: Vec<AxisSpec>,
    counts: Vec<u64>,
    n: u64,
}

impl ContingencyTable {
    pub fn from_counts(axes: Vec<AxisSpec>, counts: Vec<u64>) -> Result<Self> {
        let k = cell_count(&axes)?;
        if counts.len() != k {
            return Err(Error::InvalidDistribution(format!(
                "expected {k} cells, got {}",
                counts.len()
            )));
        }
        let n = counts.iter().sum();
        if n == 0 {
            return Err(Error::ZeroTotal);
        }
        Ok(Self { axes, counts, n })
    }

    pub fn axes(&self) -> &[AxisSpec] {
        &self.axes
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of cells `K`.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Counts subjects by the joint codes of `variables`, in the requested axis order.
pub fn build_contingency(dataset: &TrialDataset, variables: &[Variable]) -> Result<ContingencyTable> {
    if dataset.n() == 0 {
        return Err(Error::EmptyDataset);
    }
    let axes = variables
        .iter()
        .map(|&v| {
            dataset
                .cardinality(v)
                .map(|c| AxisSpec::new(v, c))
                .ok_or_else(|| Error::UnknownVariable(v.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let k = cell_count(&axes)?;
    let strides = strides(&axes);
    let mut counts = vec![0u64; k];
    for i in 0..dataset.n() {
        let mut idx = 0;
        for ((&v, ax), &s) in variables.iter().zip(&axes).zip(&strides) {
            let code = dataset.code(v, i);
            if code as usize >= ax.cardinality {
                let feature = match v {
                    Variable::Feature(j) => j,
                    _ => usize::MAX,
                };
                return Err(Error::CodeOutOfRange {
                    feature,
                    code,
                    cardinality: ax.cardinality,
                });
            }
            idx += code as usize * s;
        }
        counts[idx] += 1;
    }
    ContingencyTable::from_counts(axes, counts)
}

fn strides(axes: &[AxisSpec]) -> Vec<usize> {
    let mut s = vec![1; axes.len()];
    for i in (0..axes.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * axes[i + 1].cardinality;
    }
    s
}

/// Nonnegative cell probabilities summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    axes: Vec<AxisSpec>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(axes: Vec<AxisSpec>, probs: Vec<f64>) -> Result<Self> {
        let k = cell_count(&axes)?;
        if probs.len() != k {
            return Err(Error::InvalidDistribution(format!(
                "expected {k} cells, got {}",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("cell probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("mass sums to {total}")));
        }
        Ok(Self { axes, probs })
    }

    pub fn axes(&self) -> &[AxisSpec] {
        &self.axes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Position of the first axis holding `var`.
    pub fn axis_of(&self, var: Variable) -> Option<usize> {
        self.axes.iter().position(|a| a.variable == var)
    }

    /// Plug-in entropy `-Σ p ln p` with `0 ln 0 = 0`.
    pub fn entropy(&self) -> f64 {
        -self
            .probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln())
            .sum::<f64>()
    }

    /// Distribution of the listed axes (in the listed order), summing out the rest.
    pub fn marginal(&self, keep: &[usize]) -> Result<JointDistribution> {
        check_group(self.axes.len(), keep, "marginal")?;
        let (size, _) = self.group_layout(keep);
        let mut out = vec![0.0; size];
        self.for_each_cell(|codes, p| {
            out[self.group_index(keep, codes)] += p;
        });
        Ok(JointDistribution {
            axes: keep.iter().map(|&i| self.axes[i]).collect(),
            probs: out,
        })
    }

    /// `I(A;B)` between two disjoint, nonempty axis groups.
    pub fn mutual_information(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        self.conditional_mutual_information(a, b, &[])
    }

    /// `I(A;B|C)`; with an empty `c` this is the unconditional mutual information.
    ///
    /// Axes outside all three groups are marginalized out. Strata with zero mass
    /// contribute nothing.
    pub fn conditional_mutual_information(&self, a: &[usize], b: &[usize], c: &[usize]) -> Result<f64> {
        let m = self.axes.len();
        check_group(m, a, "A")?;
        check_group(m, b, "B")?;
        if !c.is_empty() {
            check_group(m, c, "C")?;
        }
        if a.iter().any(|x| b.contains(x) || c.contains(x)) || b.iter().any(|x| c.contains(x)) {
            return Err(Error::InvalidGroups("groups overlap".into()));
        }
        // canonical role order keeps I(A;B|C) and I(B;A|C) bit-identical
        let (a, b) = if a <= b { (a, b) } else { (b, a) };

        let (na, _) = self.group_layout(a);
        let (nb, _) = self.group_layout(b);
        let (nc, _) = self.group_layout(c);
        let mut pabc = vec![0.0; na * nb * nc];
        self.for_each_cell(|codes, p| {
            let ia = self.group_index(a, codes);
            let ib = self.group_index(b, codes);
            let ic = self.group_index(c, codes);
            pabc[(ia * nb + ib) * nc + ic] += p;
        });

        let mut pac = vec![0.0; na * nc];
        let mut pbc = vec![0.0; nb * nc];
        let mut pc = vec![0.0; nc];
        for ia in 0..na {
            for ib in 0..nb {
                for ic in 0..nc {
                    let p = pabc[(ia * nb + ib) * nc + ic];
                    pac[ia * nc + ic] += p;
                    pbc[ib * nc + ic] += p;
                    pc[ic] += p;
                }
            }
        }

        let mut total = 0.0;
        for ia in 0..na {
            for ib in 0..nb {
                for ic in 0..nc {
                    let p = pabc[(ia * nb + ib) * nc + ic];
                    if p > 0.0 {
                        total += p * (p * pc[ic] / (pac[ia * nc + ic] * pbc[ib * nc + ic])).ln();
                    }
                }
            }
        }
        Ok(total)
    }

    /// Calls `f(codes, p)` for every cell in row-major order.
    fn for_each_cell(&self, mut f: impl FnMut(&[usize], f64)) {
        let mut codes = vec![0usize; self.axes.len()];
        for &p in &self.probs {
            f(&codes, p);
            for d in (0..codes.len()).rev() {
                codes[d] += 1;
                if codes[d] < self.axes[d].cardinality {
                    break;
                }
                codes[d] = 0;
            }
        }
    }

    fn group_layout(&self, group: &[usize]) -> (usize, Vec<usize>) {
        let sub: Vec<AxisSpec> = group.iter().map(|&i| self.axes[i]).collect();
        let size = sub.iter().map(|a| a.cardinality).product();
        (size, strides(&sub))
    }

    fn group_index(&self, group: &[usize], codes: &[usize]) -> usize {
        group
            .iter()
            .fold(0, |acc, &ax| acc * self.axes[ax].cardinality + codes[ax])
    }
}

fn check_group(m: usize, group: &[usize], name: &str) -> Result<()> {
    if group.is_empty() {
        return Err(Error::InvalidGroups(format!("group {name} is empty")));
    }
    for (i, &ax) in group.iter().enumerate() {
        if ax >= m {
            return Err(Error::InvalidGroups(format!(
                "axis {ax} out of range in group {name}"
            )));
        }
        if group[..i].contains(&ax) {
            return Err(Error::InvalidGroups(format!(
                "axis {ax} repeated in group {name}"
            )));
        }
    }
    Ok(())
}

/// Maximum-likelihood cell probabilities `count / n`.
pub fn ml_estimate(table: &ContingencyTable) -> Result<JointDistribution> {
    if table.n == 0 {
        return Err(Error::ZeroTotal);
    }
    let n = table.n as f64;
    Ok(JointDistribution {
        axes: table.axes.clone(),
        probs: table.counts.iter().map(|&c| c as f64 / n).collect(),
    })
}

/// Shrinkage intensity and target used by [`shrinkage_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkageReport {
    pub lambda: f64,
    /// Uniform target probability `1/K`.
    pub target: f64,
    pub n: u64,
}

/// James-Stein shrinkage of the cell frequencies toward the uniform distribution.
///
/// The intensity is `λ* = (1 - Σ θ²) / ((n - 1) Σ (1/K - θ)²)` clipped to `[0, 1]`,
/// with `λ* = 1` when `n = 1` or the ML frequencies already equal the target.
pub fn shrinkage_estimate(table: &ContingencyTable) -> Result<(JointDistribution, ShrinkageReport)> {
    let k = table.counts.len();
    if k < 2 {
        return Err(Error::DegenerateShrinkageTarget(k));
    }
    if table.n == 0 {
        return Err(Error::ZeroTotal);
    }
    let n = table.n as f64;
    let target = 1.0 / k as f64;
    let ml: Vec<f64> = table.counts.iter().map(|&c| c as f64 / n).collect();
    let sum_sq: f64 = ml.iter().map(|u| u * u).sum();
    let dist_sq: f64 = ml.iter().map(|u| (target - u) * (target - u)).sum();
    let lambda = if table.n == 1 || dist_sq == 0.0 {
        1.0
    } else {
        ((1.0 - sum_sq) / ((n - 1.0) * dist_sq)).clamp(0.0, 1.0)
    };
    let probs = ml
        .iter()
        .map(|&u| lambda * target + (1.0 - lambda) * u)
        .collect();
    Ok((
        JointDistribution {
            axes: table.axes.clone(),
            probs,
        },
        ShrinkageReport {
            lambda,
            target,
            n: table.n,
        },
    ))
}

/// Which cell-probability estimator feeds the plug-in information measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    MaximumLikelihood,
    Shrinkage,
}

impl EstimatorKind {
    pub fn estimate(self, table: &ContingencyTable) -> Result<JointDistribution> {
        match self {
            EstimatorKind::MaximumLikelihood => ml_estimate(table),
            EstimatorKind::Shrinkage => shrinkage_estimate(table).map(|(d, _)| d),
        }
    }
}
