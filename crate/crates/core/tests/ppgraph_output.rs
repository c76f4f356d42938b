use biorank::ppgraph::{build_ppgraph, csv_string, export_csv, render_svg, svg_string, PPGraph, SvgStyle};
use biorank::ranking::RankedEntry;
use biorank::{CriterionOrder, EstimatorKind, RankAxis, RankedList};
use proptest::prelude::*;

fn list(order: &[usize], axis: RankAxis) -> RankedList {
    RankedList {
        entries: order
            .iter()
            .enumerate()
            .map(|(i, &f)| RankedEntry {
                feature: f,
                score: 0.0,
                step: i + 1,
            })
            .collect(),
        axis,
        order: CriterionOrder::Second,
        estimator: EstimatorKind::Shrinkage,
    }
}

fn labels(p: usize) -> Vec<String> {
    (1..=p).map(|j| format!("x{j}")).collect()
}

fn graph(prog: &[usize], pred: &[usize], k: usize) -> PPGraph {
    build_ppgraph(
        &[list(prog, RankAxis::Prognostic)],
        &[list(pred, RankAxis::Predictive)],
        k,
        &labels(prog.len()),
        "test",
    )
    .unwrap()
}

fn parse_csv(text: &str) -> Vec<(String, f64, f64)> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        vec!["feature", "prog_score", "pred_score"]
    );
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].parse().unwrap(), r[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn svg_is_well_formed_with_one_marker_per_feature() {
    let prog: Vec<usize> = (0..15).collect();
    let pred: Vec<usize> = (0..15).rev().collect();
    let g = graph(&prog, &pred, 3);
    let text = svg_string(&g, &SvgStyle::default());
    let doc = roxmltree::Document::parse(&text).unwrap();
    let markers = doc
        .descendants()
        .filter(|n| n.has_tag_name("circle") && n.attribute("class") == Some("marker"))
        .count();
    assert_eq!(markers, 15);
}

#[test]
fn band_boundary_sits_at_cutoff_fraction() {
    let prog: Vec<usize> = (0..15).collect();
    let g = graph(&prog, &prog, 3);
    let text = svg_string(&g, &SvgStyle::default());
    let doc = roxmltree::Document::parse(&text).unwrap();
    let frame = doc
        .descendants()
        .find(|n| n.attribute("class") == Some("frame"))
        .unwrap();
    let num = |n: roxmltree::Node, a: &str| n.attribute(a).unwrap().parse::<f64>().unwrap();
    let (fx, fy, fw, fh) = (num(frame, "x"), num(frame, "y"), num(frame, "width"), num(frame, "height"));
    let band = doc
        .descendants()
        .find(|n| n.attribute("class") == Some("band prognostic"))
        .unwrap();
    assert!(((num(band, "x") - fx) / fw - 0.8).abs() < 1e-6);
    let band = doc
        .descendants()
        .find(|n| n.attribute("class") == Some("band predictive"))
        .unwrap();
    // y axis points up: band spans the top 20%
    assert!((num(band, "height") / fh - 0.2).abs() < 1e-6);
    assert!((num(band, "y") - fy).abs() < 1e-6);
}

#[test]
fn empty_intersection_still_drawn() {
    // top prognostic features are the bottom predictive ones
    let prog: Vec<usize> = (0..6).collect();
    let pred: Vec<usize> = (0..6).rev().collect();
    let g = graph(&prog, &pred, 2);
    let both: Vec<usize> = (0..6)
        .filter(|&j| g.in_band(j, RankAxis::Prognostic) && g.in_band(j, RankAxis::Predictive))
        .collect();
    assert!(both.is_empty());
    let text = svg_string(&g, &SvgStyle::default());
    let doc = roxmltree::Document::parse(&text).unwrap();
    let inter = doc
        .descendants()
        .find(|n| n.attribute("class") == Some("band intersection"))
        .unwrap();
    let num = |a: &str| inter.attribute(a).unwrap().parse::<f64>().unwrap();
    let (x0, y0, x1, y1) = (num("x"), num("y"), num("x") + num("width"), num("y") + num("height"));
    let inside = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("marker"))
        .filter(|n| {
            let cx: f64 = n.attribute("cx").unwrap().parse().unwrap();
            let cy: f64 = n.attribute("cy").unwrap().parse().unwrap();
            cx > x0 && cx <= x1 && cy >= y0 && cy < y1
        })
        .count();
    assert_eq!(inside, 0);
}

#[test]
fn files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let g = graph(&[1, 0], &[0, 1], 1);
    let svg = dir.path().join("g.svg");
    let csv = dir.path().join("g.csv");
    render_svg(&g, &SvgStyle::default(), &svg).unwrap();
    export_csv(&g, &csv).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(roxmltree::Document::parse(&std::fs::read_to_string(&svg).unwrap()).is_ok());
    assert!(export_csv(&g, &dir.path().join("missing/dir/g.csv")).is_err());
}

proptest! {
    #[test]
    fn csv_round_trip((prog, pred) in (1usize..20).prop_flat_map(|p| {
        let ids: Vec<usize> = (0..p).collect();
        (Just(ids.clone()).prop_shuffle(), Just(ids).prop_shuffle())
    })) {
        let g = graph(&prog, &pred, 1);
        let rows = parse_csv(&csv_string(&g));
        prop_assert_eq!(rows.len(), g.p);
        for (row, pt) in rows.iter().zip(&g.points) {
            prop_assert_eq!(&row.0, &pt.label);
            prop_assert!((row.1 - pt.prog).abs() < 1e-6);
            prop_assert!((row.2 - pt.pred).abs() < 1e-6);
            prop_assert!(pt.prog >= 1.0 / g.p as f64 - 1e-15 && pt.prog <= 1.0);
        }
    }
}
