//! Predictive-prognostic graphs: per-feature normalized rank scores on both axes,
//! averaged over replicate rankings, with top-k bands at `(p - k) / p`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::ranking::{RankAxis, RankedList};

/// Score of the feature at 1-based rank `rank` out of `p`: `(p - rank + 1) / p`.
pub fn rank_score(rank: usize, p: usize) -> f64 {
    (p - rank + 1) as f64 / p as f64
}

/// Band boundary `(p - k) / p`; a feature is in the top-k band when its score is
/// strictly greater.
pub fn cutoff(p: usize, k: usize) -> f64 {
    (p - k) as f64 / p as f64
}

/// Per-feature normalized score indexed by zero-based feature id.
pub fn normalize_ranks(ranking: &RankedList, p: usize) -> Result<Vec<f64>> {
    if ranking.len() != p {
        return Err(Error::InvalidRanking(format!(
            "ranking has {} entries, expected {p}",
            ranking.len()
        )));
    }
    let mut scores = vec![f64::NAN; p];
    for (r, e) in ranking.entries.iter().enumerate() {
        if e.feature >= p || !scores[e.feature].is_nan() {
            return Err(Error::InvalidRanking(format!(
                "ranking is not a permutation of {p} features"
            )));
        }
        scores[e.feature] = rank_score(r + 1, p);
    }
    Ok(scores)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PPPoint {
    pub feature: usize,
    pub label: String,
    pub prog: f64,
    pub pred: f64,
}

/// Result of picking the `k` largest scores on one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct TopK {
    /// The k features in descending score order (lowest index first among equals).
    pub features: Vec<usize>,
    /// Features sharing the k-th score when that score straddles the boundary.
    pub ties: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PPGraph {
    pub points: Vec<PPPoint>,
    pub p: usize,
    pub k: usize,
    pub cutoff: f64,
    pub method: String,
}

impl PPGraph {
    fn axis_score(&self, feature: usize, axis: RankAxis) -> f64 {
        let pt = &self.points[feature];
        match axis {
            RankAxis::Prognostic => pt.prog,
            RankAxis::Predictive => pt.pred,
        }
    }

    /// Whether `feature` lies strictly above the cutoff on `axis`.
    pub fn in_band(&self, feature: usize, axis: RankAxis) -> bool {
        self.axis_score(feature, axis) > self.cutoff
    }

    pub fn band(&self, axis: RankAxis) -> Vec<usize> {
        (0..self.p).filter(|&j| self.in_band(j, axis)).collect()
    }

    pub fn top_k(&self, axis: RankAxis) -> TopK {
        let mut order: Vec<usize> = (0..self.p).collect();
        order.sort_by(|&a, &b| {
            self.axis_score(b, axis)
                .total_cmp(&self.axis_score(a, axis))
                .then(a.cmp(&b))
        });
        let features = order[..self.k].to_vec();
        let kth = self.axis_score(order[self.k - 1], axis);
        let ties = if self.k < self.p && self.axis_score(order[self.k], axis) == kth {
            order
                .iter()
                .copied()
                .filter(|&j| self.axis_score(j, axis) == kth)
                .collect()
        } else {
            vec![]
        };
        TopK { features, ties }
    }
}

/// Averages normalized rank scores over replicates on each axis.
pub fn build_ppgraph(
    prog_rankings: &[RankedList],
    pred_rankings: &[RankedList],
    k: usize,
    labels: &[String],
    method: &str,
) -> Result<PPGraph> {
    if prog_rankings.is_empty() || prog_rankings.len() != pred_rankings.len() {
        return Err(Error::InvalidRanking(format!(
            "need equally many prognostic and predictive rankings, got {} and {}",
            prog_rankings.len(),
            pred_rankings.len()
        )));
    }
    let p = prog_rankings[0].len();
    if labels.len() != p {
        return Err(Error::InvalidRanking(format!(
            "{} labels for {p} features",
            labels.len()
        )));
    }
    if k == 0 || k > p {
        return Err(Error::InvalidK { k, p });
    }
    let average = |lists: &[RankedList]| -> Result<Vec<f64>> {
        let mut sum = vec![0.0; p];
        for list in lists {
            for (s, v) in sum.iter_mut().zip(normalize_ranks(list, p)?) {
                *s += v;
            }
        }
        Ok(sum.into_iter().map(|s| s / lists.len() as f64).collect())
    };
    let prog = average(prog_rankings)?;
    let pred = average(pred_rankings)?;
    let points = (0..p)
        .map(|j| PPPoint {
            feature: j,
            label: labels[j].clone(),
            prog: prog[j],
            pred: pred[j],
        })
        .collect();
    Ok(PPGraph {
        points,
        p,
        k,
        cutoff: cutoff(p, k),
        method: method.to_string(),
    })
}

pub fn csv_string(graph: &PPGraph) -> String {
    let mut out = String::from("feature,prog_score,pred_score\n");
    for pt in &graph.points {
        let _ = writeln!(out, "{},{:.10},{:.10}", pt.label, pt.prog, pt.pred);
    }
    out
}

pub fn export_csv(graph: &PPGraph, path: &Path) -> Result<()> {
    write_atomic(path, csv_string(graph).as_bytes())
}

/// Fill colors and opacity of the shaded regions.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    pub prognostic_band: String,
    pub predictive_band: String,
    pub intersection: String,
    pub band_opacity: f64,
    pub marker: String,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            prognostic_band: "#e41a1c".into(),
            predictive_band: "#4daf4a".into(),
            intersection: "#ff7f00".into(),
            band_opacity: 0.3,
            marker: "#1f3b73".into(),
        }
    }
}

const SIZE: f64 = 400.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Unit-square scatter of (prognostic, predictive) scores with the top-k bands.
pub fn svg_string(graph: &PPGraph, style: &SvgStyle) -> String {
    let sx = |v: f64| MARGIN + v * SIZE;
    let sy = |v: f64| MARGIN + (1.0 - v) * SIZE;
    let c = graph.cutoff;
    let band = SIZE * (1.0 - c);
    let total = SIZE + 2.0 * MARGIN;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&graph.method));
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{total}" height="{total}" fill="white"/>"#);

    let _ = writeln!(
        s,
        r#"<rect class="band prognostic" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}" fill-opacity="{}"/>"#,
        sx(c), sy(1.0), band, SIZE, style.prognostic_band, style.band_opacity
    );
    let _ = writeln!(
        s,
        r#"<rect class="band predictive" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}" fill-opacity="{}"/>"#,
        sx(0.0), sy(1.0), SIZE, band, style.predictive_band, style.band_opacity
    );
    let _ = writeln!(
        s,
        r#"<rect class="band intersection" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
        sx(c), sy(1.0), band, band, style.intersection
    );

    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line class="cutoff" x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}" stroke="gray" stroke-dasharray="4 3"/>"#,
        sy(0.0), sy(1.0), x = sx(c)
    );
    let _ = writeln!(
        s,
        r#"<line class="cutoff" x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="gray" stroke-dasharray="4 3"/>"#,
        sx(0.0), sx(1.0), y = sy(c)
    );

    for tick in [0.0, 0.2, 0.4, 0.6, 0.8, 1.0] {
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-size="10" text-anchor="middle">{tick:.1}</text>"#,
            sx(tick),
            sy(0.0) + 14.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-size="10" text-anchor="end">{tick:.1}</text>"#,
            sx(0.0) - 6.0,
            sy(tick) + 3.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text class="axis-label" x="{:.3}" y="{:.3}" font-size="13" text-anchor="middle">prognostic score</text>"#,
        sx(0.5),
        total - 18.0
    );
    let _ = writeln!(
        s,
        r#"<text class="axis-label" x="18" y="{y:.3}" font-size="13" text-anchor="middle" transform="rotate(-90 18 {y:.3})">predictive score</text>"#,
        y = sy(0.5)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="30" font-size="14" text-anchor="middle">{} (k={}, cutoff={:.2})</text>"#,
        sx(0.5),
        escape(&graph.method),
        graph.k,
        c
    );

    for pt in &graph.points {
        let (x, y) = (sx(pt.prog), sy(pt.pred));
        let _ = writeln!(
            s,
            r#"<circle class="marker" data-feature="{}" cx="{x:.3}" cy="{y:.3}" r="4" fill="{}"/>"#,
            escape(&pt.label),
            style.marker
        );
        let _ = writeln!(
            s,
            r#"<text class="marker-label" x="{:.3}" y="{:.3}" font-size="10">{}</text>"#,
            x + 6.0,
            y - 6.0,
            escape(&pt.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_svg(graph: &PPGraph, style: &SvgStyle, path: &Path) -> Result<()> {
    write_atomic(path, svg_string(graph, style).as_bytes())
}
