//! Mean squared error of the ML and shrinkage plug-in estimates of `I(T;Y|X)` when
//! the true value is zero.

use std::fmt::Write as _;
use std::path::Path;

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::dataset::Variable;
use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::prob::{ml_estimate, shrinkage_estimate, AxisSpec, ContingencyTable, JointDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullGenerator {
    /// `p(x)`, `p(t|x)` and `p(y|x)` each drawn from a flat Dirichlet.
    IndependentDirichlet,
    /// Every cell has probability `1 / (|T||Y||X|)`.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NullCards {
    pub t: usize,
    pub y: usize,
    pub x: usize,
}

impl Default for NullCards {
    fn default() -> Self {
        Self { t: 2, y: 2, x: 25 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MseBenchConfig {
    pub cards: NullCards,
    /// Ascending sample sizes.
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub generator: NullGenerator,
}

impl Default for MseBenchConfig {
    fn default() -> Self {
        Self {
            cards: NullCards::default(),
            sizes: (5..=12).map(|e| 1usize << e).collect(),
            replicates: 500,
            seed: 0,
            generator: NullGenerator::IndependentDirichlet,
        }
    }
}

impl MseBenchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidBenchConfig(m.to_string()));
        let NullCards { t, y, x } = self.cards;
        if t < 2 || y < 2 || x < 2 {
            return bad("all cardinalities must be at least 2");
        }
        if self.sizes.is_empty() || self.sizes[0] == 0 {
            return bad("sizes must be positive");
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return bad("sizes must be strictly ascending");
        }
        if self.replicates == 0 {
            return bad("replicates must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseRow {
    pub n: usize,
    pub mse_ml: f64,
    pub mse_shrinkage: f64,
    pub replicates: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MseBenchResult {
    pub rows: Vec<MseRow>,
}

fn flat_dirichlet(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

fn null_axes(cards: NullCards) -> Vec<AxisSpec> {
    vec![
        AxisSpec::new(Variable::T, cards.t),
        AxisSpec::new(Variable::Y, cards.y),
        AxisSpec::new(Variable::Feature(0), cards.x),
    ]
}

/// A distribution over axes `(T, Y, X)` with `T ⊥ Y | X`.
pub fn sample_null_distribution_with(
    cards: NullCards,
    generator: NullGenerator,
    rng: &mut ChaCha8Rng,
) -> JointDistribution {
    let k = cards.t * cards.y * cards.x;
    let probs = match generator {
        NullGenerator::Uniform => vec![1.0 / k as f64; k],
        NullGenerator::IndependentDirichlet => {
            let px = flat_dirichlet(rng, cards.x);
            let pt: Vec<Vec<f64>> = (0..cards.x).map(|_| flat_dirichlet(rng, cards.t)).collect();
            let py: Vec<Vec<f64>> = (0..cards.x).map(|_| flat_dirichlet(rng, cards.y)).collect();
            let mut probs = Vec::with_capacity(k);
            for ti in 0..cards.t {
                for yi in 0..cards.y {
                    for xi in 0..cards.x {
                        probs.push(px[xi] * pt[xi][ti] * py[xi][yi]);
                    }
                }
            }
            probs
        }
    };
    JointDistribution::new(null_axes(cards), probs)
        .expect("product of normalized factors is a distribution")
}

pub fn sample_null_distribution(cards: NullCards, generator: NullGenerator, seed: u64) -> JointDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_null_distribution_with(cards, generator, &mut rng)
}

/// Squared ML and shrinkage estimates for one replicate.
fn replicate(config: &MseBenchConfig, size_index: usize, n: usize, rep: usize) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(rep as u64));
    rng.set_stream(size_index as u64);
    let dist = sample_null_distribution_with(config.cards, config.generator, &mut rng);
    let sampler = WeightedIndex::new(dist.probs()).expect("valid weights");
    let mut counts = vec![0u64; dist.probs().len()];
    for _ in 0..n {
        counts[sampler.sample(&mut rng)] += 1;
    }
    let table = ContingencyTable::from_counts(null_axes(config.cards), counts)
        .expect("n >= 1 draws");
    let cmi = |d: JointDistribution| {
        d.conditional_mutual_information(&[0], &[1], &[2])
            .expect("fixed disjoint groups")
    };
    let ml = cmi(ml_estimate(&table).expect("nonzero total"));
    let sh = cmi(shrinkage_estimate(&table).expect("K >= 8").0);
    (ml * ml, sh * sh)
}

/// Neumaier compensated sum.
fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub fn run_mse_bench(config: &MseBenchConfig) -> Result<MseBenchResult> {
    config.validate()?;
    let rows = config
        .sizes
        .iter()
        .enumerate()
        .map(|(si, &n)| {
            let sq: Vec<(f64, f64)> = (0..config.replicates)
                .into_par_iter()
                .map(|rep| replicate(config, si, n, rep))
                .collect();
            let r = config.replicates as f64;
            MseRow {
                n,
                mse_ml: compensated_sum(sq.iter().map(|s| s.0)) / r,
                mse_shrinkage: compensated_sum(sq.iter().map(|s| s.1)) / r,
                replicates: config.replicates,
            }
        })
        .collect();
    Ok(MseBenchResult { rows })
}

pub fn bench_csv_string(result: &MseBenchResult) -> String {
    let mut out = String::from("n,mse_ml,mse_shrinkage,replicates\n");
    for r in &result.rows {
        let _ = writeln!(out, "{},{:e},{:e},{}", r.n, r.mse_ml, r.mse_shrinkage, r.replicates);
    }
    out
}

pub fn export_bench_csv(result: &MseBenchResult, path: &Path) -> Result<()> {
    write_atomic(path, bench_csv_string(result).as_bytes())
}
