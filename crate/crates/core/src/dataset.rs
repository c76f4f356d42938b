//! Categorical two-arm trial data.

use std::fmt;

use crate::error::{Error, Result};

/// A column of a [`TrialDataset`] that can appear as a contingency-table axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    /// Binary outcome.
    Y,
    /// Binary treatment indicator.
    T,
    /// Zero-based feature index.
    Feature(usize),
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Y => f.write_str("Y"),
            Variable::T => f.write_str("T"),
            Variable::Feature(j) => write!(f, "X{}", j + 1),
        }
    }
}

/// Per-subject binary outcome, binary treatment and `p` categorical feature codes.
///
/// Features are stored column-major: `features[j][i]` is the code of feature `j`
/// for subject `i`, and lies in `0..cardinalities[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDataset {
    y: Vec<u8>,
    t: Vec<u8>,
    features: Vec<Vec<u32>>,
    cardinalities: Vec<usize>,
    names: Vec<String>,
}

impl TrialDataset {
    /// Validates and assembles a dataset. Feature names default to `x1..xp`.
    pub fn new(
        y: Vec<u8>,
        t: Vec<u8>,
        features: Vec<Vec<u32>>,
        cardinalities: Vec<usize>,
    ) -> Result<Self> {
        let names = (1..=features.len()).map(|j| format!("x{j}")).collect();
        Self::with_names(y, t, features, cardinalities, names)
    }

    pub fn with_names(
        y: Vec<u8>,
        t: Vec<u8>,
        features: Vec<Vec<u32>>,
        cardinalities: Vec<usize>,
        names: Vec<String>,
    ) -> Result<Self> {
        let n = y.len();
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        if t.len() != n || features.iter().any(|c| c.len() != n) {
            return Err(Error::Format("columns have different lengths".into()));
        }
        if features.len() != cardinalities.len() || features.len() != names.len() {
            return Err(Error::Format(
                "feature, cardinality and name counts differ".into(),
            ));
        }
        if y.iter().any(|&v| v > 1) {
            return Err(Error::NotBinary("y"));
        }
        if t.iter().any(|&v| v > 1) {
            return Err(Error::NotBinary("t"));
        }
        for (j, (col, &card)) in features.iter().zip(&cardinalities).enumerate() {
            if card == 0 {
                return Err(Error::Format(format!("feature {} has cardinality 0", j + 1)));
            }
            if let Some(&code) = col.iter().find(|&&c| c as usize >= card) {
                return Err(Error::CodeOutOfRange {
                    feature: j,
                    code,
                    cardinality: card,
                });
            }
        }
        Ok(Self {
            y,
            t,
            features,
            cardinalities,
            names,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Number of features.
    pub fn p(&self) -> usize {
        self.features.len()
    }

    pub fn y(&self) -> &[u8] {
        &self.y
    }

    pub fn t(&self) -> &[u8] {
        &self.t
    }

    pub fn feature(&self, j: usize) -> &[u32] {
        &self.features[j]
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of categories of `var`, or `None` for an unknown feature index.
    pub fn cardinality(&self, var: Variable) -> Option<usize> {
        match var {
            Variable::Y | Variable::T => Some(2),
            Variable::Feature(j) => self.cardinalities.get(j).copied(),
        }
    }

    /// Code of `var` for subject `i`.
    pub fn code(&self, var: Variable, i: usize) -> u32 {
        match var {
            Variable::Y => u32::from(self.y[i]),
            Variable::T => u32::from(self.t[i]),
            Variable::Feature(j) => self.features[j][i],
        }
    }

    /// True when both treatment arms are present.
    pub fn has_both_arms(&self) -> bool {
        self.t.contains(&0) && self.t.contains(&1)
    }

    /// Returns a copy with subjects reordered as `order[i]`.
    pub fn permute_rows(&self, order: &[usize]) -> Self {
        let pick_u8 = |col: &[u8]| order.iter().map(|&i| col[i]).collect::<Vec<_>>();
        Self {
            y: pick_u8(&self.y),
            t: pick_u8(&self.t),
            features: self
                .features
                .iter()
                .map(|col| order.iter().map(|&i| col[i]).collect())
                .collect(),
            cardinalities: self.cardinalities.clone(),
            names: self.names.clone(),
        }
    }
}
