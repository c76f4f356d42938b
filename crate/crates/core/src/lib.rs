//! Information-theoretic ranking of prognostic and predictive biomarkers in
//! two-arm trials.
//!
//! Features are ranked greedily on two axes: prognostic (`I(X;Y)` and its
//! conditional refinements) and predictive (`I(T;Y|X)` and refinements). Cell
//! probabilities come from maximum likelihood or James-Stein shrinkage toward the
//! uniform table, and averaged rankings are drawn as PP-graphs.
//!
//! ```
//! use biorank::{datagen, prob::EstimatorKind, ranking};
//!
//! let mut spec = datagen::foster_spec();
//! spec.n = 300;
//! let data = datagen::discretize_dataset(&datagen::simulate(&spec, 1).unwrap(), 4).unwrap();
//! let cfg = ranking::RankingConfig::new(ranking::CriterionOrder::Second, EstimatorKind::Shrinkage);
//! let ranked = ranking::rank_predictive(&data, cfg).unwrap();
//! assert_eq!(ranked.len(), 15);
//! ```

pub mod bench;
pub mod cli;
pub mod datagen;
pub mod dataset;
pub mod error;
pub mod io;
pub mod ppgraph;
pub mod prob;
pub mod ranking;

pub use dataset::{TrialDataset, Variable};
pub use error::{Error, Result};
pub use prob::{ContingencyTable, EstimatorKind, JointDistribution};
pub use ranking::{CriterionOrder, RankAxis, RankedList, RankingConfig};
