//! Synthetic randomized-trial generation and equal-width discretization.
//!
//! Subjects are drawn from a logistic model with prognostic (`β`) and predictive
//! (`δ`, treatment-interaction) terms. The random stream is `ChaCha8Rng` seeded with
//! `seed_from_u64`; per subject it draws the `p` features (standard normal, Ziggurat
//! via `rand_distr::StandardNormal`) in feature order, then the treatment, then the
//! outcome. Replicate `r` of a run seeded with `s` uses seed `s + r` (wrapping).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dataset::TrialDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Greater,
    Less,
}

/// One condition `x_feature > value` or `x_feature < value` (zero-based feature).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub feature: usize,
    pub comparison: Comparison,
    pub value: f64,
}

impl Threshold {
    pub fn holds(&self, x: &[f64]) -> bool {
        match self.comparison {
            Comparison::Greater => x[self.feature] > self.value,
            Comparison::Less => x[self.feature] < self.value,
        }
    }
}

/// Extra treatment effect `coefficient · t · 𝕀(all conditions hold)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorBoost {
    pub coefficient: f64,
    pub conditions: Vec<Threshold>,
}

/// Coefficient on the product `x_i x_j` (zero-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    pub coefficient: f64,
}

/// Logistic outcome model
/// `logit P(y=1|t,x) = α + Σ β_i x_i + Σ β_ij x_i x_j + γ t + (Σ δ_i x_i + Σ δ_ij x_i x_j) t`
/// plus an optional indicator-region treatment boost.
#[derive(Debug, Clone, PartialEq)]
pub struct LogitModelSpec {
    pub p: usize,
    pub n: usize,
    /// Probability of assignment to the treatment arm.
    pub allocation: f64,
    pub intercept: f64,
    /// `β_i`, length `p`.
    pub prognostic: Vec<f64>,
    pub prognostic_pairs: Vec<PairTerm>,
    /// `γ`
    pub treatment: f64,
    /// `δ_i`, length `p`.
    pub predictive: Vec<f64>,
    pub predictive_pairs: Vec<PairTerm>,
    pub boost: Option<IndicatorBoost>,
}

impl LogitModelSpec {
    /// A model with `p` standard-normal features and no effects besides the intercept.
    pub fn null(p: usize, n: usize, intercept: f64) -> Self {
        Self {
            p,
            n,
            allocation: 0.5,
            intercept,
            prognostic: vec![0.0; p],
            prognostic_pairs: vec![],
            treatment: 0.0,
            predictive: vec![0.0; p],
            predictive_pairs: vec![],
            boost: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if !(self.allocation > 0.0 && self.allocation < 1.0) {
            return bad(format!("allocation {} outside (0, 1)", self.allocation));
        }
        if self.prognostic.len() != self.p || self.predictive.len() != self.p {
            return bad("linear coefficient vectors must have length p".into());
        }
        let coefs = std::iter::once(self.intercept)
            .chain(std::iter::once(self.treatment))
            .chain(self.prognostic.iter().copied())
            .chain(self.predictive.iter().copied());
        if coefs.clone().any(|c| !c.is_finite()) {
            return bad("non-finite coefficient".into());
        }
        for pt in self.prognostic_pairs.iter().chain(&self.predictive_pairs) {
            if pt.i >= self.p || pt.j >= self.p || !pt.coefficient.is_finite() {
                return bad(format!("invalid pair term ({}, {})", pt.i + 1, pt.j + 1));
            }
        }
        if let Some(boost) = &self.boost {
            if !boost.coefficient.is_finite() {
                return bad("non-finite boost coefficient".into());
            }
            for c in &boost.conditions {
                if c.feature >= self.p || !c.value.is_finite() {
                    return bad(format!("invalid threshold on feature {}", c.feature + 1));
                }
            }
        }
        Ok(())
    }

    /// Log-odds of `y = 1` for covariates `x` and treatment `t`.
    pub fn logit(&self, x: &[f64], t: u8) -> f64 {
        let pair_sum = |terms: &[PairTerm]| -> f64 {
            terms.iter().map(|pt| pt.coefficient * x[pt.i] * x[pt.j]).sum()
        };
        let lin = |coefs: &[f64]| -> f64 { coefs.iter().zip(x).map(|(c, v)| c * v).sum() };

        let mut eta = self.intercept + lin(&self.prognostic) + pair_sum(&self.prognostic_pairs);
        if t == 1 {
            eta += self.treatment + lin(&self.predictive) + pair_sum(&self.predictive_pairs);
            if let Some(boost) = &self.boost {
                if boost.conditions.iter().all(|c| c.holds(x)) {
                    eta += boost.coefficient;
                }
            }
        }
        eta
    }

    pub fn probability(&self, x: &[f64], t: u8) -> f64 {
        sigmoid(self.logit(x, t))
    }
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// The enhanced-treatment-effect subgroup model: 15 standard-normal covariates,
/// 1000 subjects, 1:1 allocation and
/// `logit = -1 + 0.5x1 + 0.5x2 - 0.5x7 + 0.5x2x7 + 0.1t + 1.5t·𝕀(x1>0, x2<0, x3>0)`.
pub fn foster_spec() -> LogitModelSpec {
    let mut spec = LogitModelSpec::null(15, 1000, -1.0);
    spec.prognostic[0] = 0.5;
    spec.prognostic[1] = 0.5;
    spec.prognostic[6] = -0.5;
    spec.prognostic_pairs.push(PairTerm {
        i: 1,
        j: 6,
        coefficient: 0.5,
    });
    spec.treatment = 0.1;
    spec.boost = Some(IndicatorBoost {
        coefficient: 1.5,
        conditions: vec![
            Threshold {
                feature: 0,
                comparison: Comparison::Greater,
                value: 0.0,
            },
            Threshold {
                feature: 1,
                comparison: Comparison::Less,
                value: 0.0,
            },
            Threshold {
                feature: 2,
                comparison: Comparison::Greater,
                value: 0.0,
            },
        ],
    });
    spec
}

/// Simulated trial with real-valued covariates, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousDataset {
    pub y: Vec<u8>,
    pub t: Vec<u8>,
    pub features: Vec<Vec<f64>>,
}

impl ContinuousDataset {
    pub fn n(&self) -> usize {
        self.y.len()
    }
}

/// Draws `spec.n` subjects. Bit-identical for equal `(spec, seed)`.
pub fn simulate(spec: &LogitModelSpec, seed: u64) -> Result<ContinuousDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut features = vec![Vec::with_capacity(spec.n); spec.p];
    let mut y = Vec::with_capacity(spec.n);
    let mut t = Vec::with_capacity(spec.n);
    let mut x = vec![0.0; spec.p];
    for _ in 0..spec.n {
        for (xj, col) in x.iter_mut().zip(features.iter_mut()) {
            *xj = rng.sample(StandardNormal);
            col.push(*xj);
        }
        let ti = u8::from(rng.gen::<f64>() < spec.allocation);
        let yi = u8::from(rng.gen::<f64>() < spec.probability(&x, ti));
        t.push(ti);
        y.push(yi);
    }
    Ok(ContinuousDataset { y, t, features })
}

/// Seed used for replicate `replicate` of a run seeded with `seed`.
pub fn replicate_seed(seed: u64, replicate: u64) -> u64 {
    seed.wrapping_add(replicate)
}

/// Equal-width bin codes and the interior bin edges for each column.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    pub codes: Vec<Vec<u32>>,
    /// `bins - 1` interior edges per column, ascending.
    pub edges: Vec<Vec<f64>>,
}

/// Bins one column: intervals `[min + i·w, min + (i+1)·w)` with `w = (max - min)/bins`;
/// the maximum goes to the last bin.
pub fn discretize_column(values: &[f64], bins: usize, name: &str) -> Result<(Vec<u32>, Vec<f64>)> {
    if bins < 2 {
        return Err(Error::TooFewBins(bins));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(name.to_string()));
    }
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if values.is_empty() || max <= min {
        return Err(Error::ConstantColumn(name.to_string()));
    }
    let width = (max - min) / bins as f64;
    let last = (bins - 1) as u32;
    let codes = values
        .iter()
        .map(|&v| (((v - min) / width).floor() as u32).min(last))
        .collect();
    let edges = (1..bins).map(|i| min + width * i as f64).collect();
    Ok((codes, edges))
}

pub fn discretize_equal_width(columns: &[Vec<f64>], bins: usize) -> Result<Discretization> {
    let mut codes = Vec::with_capacity(columns.len());
    let mut edges = Vec::with_capacity(columns.len());
    for (j, col) in columns.iter().enumerate() {
        let (c, e) = discretize_column(col, bins, &format!("x{}", j + 1))?;
        codes.push(c);
        edges.push(e);
    }
    Ok(Discretization { codes, edges })
}

/// Discretizes every covariate into `bins` equal-width bins.
pub fn discretize_dataset(data: &ContinuousDataset, bins: usize) -> Result<TrialDataset> {
    let disc = discretize_equal_width(&data.features, bins)?;
    let p = disc.codes.len();
    TrialDataset::new(data.y.clone(), data.t.clone(), disc.codes, vec![bins; p])
}
