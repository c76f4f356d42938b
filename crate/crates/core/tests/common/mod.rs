//! Test-only brute-force reimplementation of the ranking criteria.
//!
//! Counts are taken from raw rows into hash maps, CMI is evaluated through the
//! entropy identity `H(AC) + H(BC) - H(ABC) - H(C)`, and every greedy score is
//! recomputed from scratch at every step. Nothing here calls into `biorank::prob`
//! or `biorank::ranking`.

#![allow(dead_code)]

use std::collections::HashMap;

use biorank::{CriterionOrder, RankAxis, TrialDataset, Variable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ORACLE_TIE: f64 = 1e-12;

fn code(ds: &TrialDataset, v: Variable, i: usize) -> u32 {
    match v {
        Variable::Y => ds.y()[i] as u32,
        Variable::T => ds.t()[i] as u32,
        Variable::Feature(j) => ds.feature(j)[i],
    }
}

fn card(ds: &TrialDataset, v: Variable) -> usize {
    match v {
        Variable::Y | Variable::T => 2,
        Variable::Feature(j) => ds.cardinalities()[j],
    }
}

fn all_cells(cards: &[usize]) -> Vec<Vec<u32>> {
    let mut cells = vec![vec![]];
    for &c in cards {
        cells = cells
            .into_iter()
            .flat_map(|prefix| {
                (0..c as u32).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    cells
}

/// Cell probabilities over `vars`, keyed by code tuple. Shrinkage spreads mass over
/// the whole cross-product, including empty cells.
pub fn cell_probs(ds: &TrialDataset, vars: &[Variable], shrink: bool) -> HashMap<Vec<u32>, f64> {
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for i in 0..ds.n() {
        let key: Vec<u32> = vars.iter().map(|&v| code(ds, v, i)).collect();
        *counts.entry(key).or_default() += 1;
    }
    let n = ds.n() as f64;
    if !shrink {
        return counts.into_iter().map(|(k, c)| (k, c as f64 / n)).collect();
    }
    let cards: Vec<usize> = vars.iter().map(|&v| card(ds, v)).collect();
    let cells = all_cells(&cards);
    let target = 1.0 / cells.len() as f64;
    let freq = |cell: &Vec<u32>| counts.get(cell).copied().unwrap_or(0) as f64 / n;
    let mut var_sum = 0.0;
    let mut msd = 0.0;
    for cell in &cells {
        let u = freq(cell);
        var_sum += u * (1.0 - u);
        msd += (u - target).powi(2);
    }
    let lambda = if ds.n() == 1 || msd == 0.0 {
        1.0
    } else {
        (var_sum / ((n - 1.0) * msd)).clamp(0.0, 1.0)
    };
    cells
        .into_iter()
        .map(|cell| {
            let p = lambda * target + (1.0 - lambda) * freq(&cell);
            (cell, p)
        })
        .collect()
}

fn marginal_entropy(probs: &HashMap<Vec<u32>, f64>, keep: &[usize]) -> f64 {
    if keep.is_empty() {
        return 0.0;
    }
    let mut m: HashMap<Vec<u32>, f64> = HashMap::new();
    for (cell, &p) in probs {
        *m.entry(keep.iter().map(|&i| cell[i]).collect()).or_default() += p;
    }
    m.values().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}

/// `I(A;B|C)` where A is position 0, B position 1 and C the rest of `vars`.
pub fn cmi(ds: &TrialDataset, vars: &[Variable], shrink: bool) -> f64 {
    let probs = cell_probs(ds, vars, shrink);
    let c: Vec<usize> = (2..vars.len()).collect();
    let with = |extra: &[usize]| -> Vec<usize> { extra.iter().copied().chain(c.iter().copied()).collect() };
    marginal_entropy(&probs, &with(&[0])) + marginal_entropy(&probs, &with(&[1]))
        - marginal_entropy(&probs, &with(&[0, 1]))
        - marginal_entropy(&probs, &c)
}

fn term(ds: &TrialDataset, axis: RankAxis, k: usize, cond: &[usize], shrink: bool) -> f64 {
    let mut vars = match axis {
        RankAxis::Prognostic => vec![Variable::Feature(k), Variable::Y],
        RankAxis::Predictive => vec![Variable::T, Variable::Y, Variable::Feature(k)],
    };
    vars.extend(cond.iter().map(|&j| Variable::Feature(j)));
    cmi(ds, &vars, shrink)
}

pub fn oracle_score(
    ds: &TrialDataset,
    axis: RankAxis,
    order: CriterionOrder,
    shrink: bool,
    k: usize,
    selected: &[usize],
) -> f64 {
    match order {
        CriterionOrder::First => term(ds, axis, k, &[], shrink),
        CriterionOrder::Second if selected.is_empty() => term(ds, axis, k, &[], shrink),
        CriterionOrder::Second => selected.iter().map(|&j| term(ds, axis, k, &[j], shrink)).sum(),
        CriterionOrder::Full => term(ds, axis, k, selected, shrink),
    }
}

pub fn oracle_rank(ds: &TrialDataset, axis: RankAxis, order: CriterionOrder, shrink: bool) -> Vec<usize> {
    let mut selected = vec![];
    while selected.len() < ds.p() {
        let mut best: Option<(usize, f64)> = None;
        for k in (0..ds.p()).filter(|k| !selected.contains(k)) {
            let s = oracle_score(ds, axis, order, shrink, k, &selected);
            match best {
                Some((_, b)) if s <= b + ORACLE_TIE => {}
                _ => best = Some((k, s)),
            }
        }
        selected.push(best.unwrap().0);
    }
    selected
}

/// Random categorical dataset where y depends on a couple of features and on
/// a treatment-by-feature interaction.
pub fn random_small_dataset(seed: u64, p: usize, n: usize, max_card: usize) -> TrialDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cards: Vec<usize> = (0..p).map(|_| rng.gen_range(1..=max_card)).collect();
    let features: Vec<Vec<u32>> = cards
        .iter()
        .map(|&c| (0..n).map(|_| rng.gen_range(0..c as u32)).collect())
        .collect();
    let weights: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let inter: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut y = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    for i in 0..n {
        let ti: u8 = rng.gen_range(0..2);
        let mut eta = 0.0;
        for j in 0..p {
            let x = features[j][i] as f64;
            eta += weights[j] * x + inter[j] * x * ti as f64;
        }
        let prob = 1.0 / (1.0 + (-eta).exp());
        y.push(u8::from(rng.gen::<f64>() < prob));
        t.push(ti);
    }
    TrialDataset::new(y, t, features, cards).unwrap()
}
