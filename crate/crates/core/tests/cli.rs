use std::path::Path;
use std::process::Command;

use biorank::cli::{cmd_rank, AxisArg, CriterionArgs, DatasetFile, EstimatorArg, OrderArg, RankArgs};
use biorank::ppgraph::rank_score;
use biorank::prob::{build_contingency, ml_estimate};
use biorank::ranking::DEFAULT_CELL_BUDGET;
use biorank::Variable;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_biorank"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn run_err(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    String::from_utf8(out.stderr).unwrap()
}

fn simulate(dir: &Path, reps: usize, seed: u64) -> String {
    let prefix = dir.join("foster");
    run_ok(&[
        "simulate", "--model", "foster", "--n", "1000", "--seed", &seed.to_string(),
        "--reps", &reps.to_string(), "--out", prefix.to_str().unwrap(),
    ]);
    format!("{}/foster_*.csv", dir.display())
}

#[test]
fn simulate_writes_foster_shape() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), 2, 4);
    let a = std::fs::read_to_string(dir.path().join("foster_000.csv")).unwrap();
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines.len(), 1001);
    assert_eq!(lines[0].split(',').count(), 17);
    assert!(lines[0].starts_with("y,t,x1,"));
    assert!(dir.path().join("foster_001.csv").exists());
    assert!(!dir.path().join("foster_002.csv").exists());
}

#[test]
fn simulate_is_byte_reproducible() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    simulate(d1.path(), 1, 11);
    simulate(d2.path(), 1, 11);
    assert_eq!(
        std::fs::read(d1.path().join("foster_000.csv")).unwrap(),
        std::fs::read(d2.path().join("foster_000.csv")).unwrap()
    );
}

#[test]
fn rank_prints_one_row_per_feature() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), 1, 2);
    let data = dir.path().join("foster_000.csv");
    let out = run_ok(&[
        "rank", "--data", data.to_str().unwrap(), "--axis", "pred", "--order", "2", "--estimator", "shrink",
        "--bins", "4",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "rank,feature,score");
    assert_eq!(lines.len(), 16);
    assert!(lines[1].starts_with("1,x"));
}

#[test]
fn first_order_prognostic_rank_is_descending_mi() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), 1, 3);
    let path = dir.path().join("foster_000.csv");
    let args = RankArgs {
        data: path.clone(),
        axis: AxisArg::Prog,
        criterion: CriterionArgs {
            order: OrderArg::First,
            estimator: EstimatorArg::Ml,
            bins: Some(4),
            cell_budget: DEFAULT_CELL_BUDGET,
        },
    };
    let mut buf = Vec::new();
    cmd_rank(&args, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();

    let ds = DatasetFile::read(&path).unwrap().into_trial(Some(4)).unwrap();
    let mut mi: Vec<(usize, f64)> = (0..15)
        .map(|k| {
            let t = build_contingency(&ds, &[Variable::Feature(k), Variable::Y]).unwrap();
            (k, ml_estimate(&t).unwrap().mutual_information(&[0], &[1]).unwrap())
        })
        .collect();
    mi.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let names: Vec<String> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_string()).collect();
    let expected: Vec<String> = mi.iter().map(|m| format!("x{}", m.0 + 1)).collect();
    assert_eq!(names, expected);
}

#[test]
fn ppgraph_single_file_equals_normalized_ranks() {
    let dir = tempfile::tempdir().unwrap();
    let glob = simulate(dir.path(), 1, 5);
    let svg = dir.path().join("g.svg");
    let csv = dir.path().join("g.csv");
    let out = run_ok(&[
        "ppgraph", "--data-glob", &glob, "--k", "3", "--order", "2", "--estimator", "shrink", "--bins", "4",
        "--svg", svg.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert!(out.contains("cutoff=0.8"));

    let rank = run_ok(&[
        "rank", "--data", dir.path().join("foster_000.csv").to_str().unwrap(), "--axis", "prog", "--order", "2",
        "--estimator", "shrink", "--bins", "4",
    ]);
    let mut rdr = csv::Reader::from_path(&csv).unwrap();
    let prog: std::collections::HashMap<String, f64> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].parse().unwrap())
        })
        .collect();
    for line in rank.lines().skip(1) {
        let mut f = line.split(',');
        let r: usize = f.next().unwrap().parse().unwrap();
        let name = f.next().unwrap();
        assert!((prog[name] - rank_score(r, 15)).abs() < 1e-9);
    }
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(roxmltree::Document::parse(&svg_text).is_ok());
    assert!(svg_text.contains("cutoff=0.80"));
}

#[test]
fn msebench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("mse.csv");
    run_ok(&["msebench", "--sizes", "32,64,128", "--reps", "20", "--seed", "1", "--csv", csv.to_str().unwrap()]);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "n,mse_ml,mse_shrinkage,replicates");
    let ns: Vec<usize> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ns, vec![32, 64, 128]);
}

#[test]
fn error_paths_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let no_y = dir.path().join("no_y.csv");
    std::fs::write(&no_y, "t,x1\n0,1\n1,0\n").unwrap();
    assert!(run_err(&["rank", "--data", no_y.to_str().unwrap(), "--axis", "prog"]).contains("missing required column y"));

    let constant = dir.path().join("const.csv");
    std::fs::write(&constant, "y,t,x1\n0,1,0.5\n1,0,0.5\n").unwrap();
    assert!(run_err(&["rank", "--data", constant.to_str().unwrap(), "--axis", "prog", "--bins", "4"])
        .contains("constant"));

    let real = dir.path().join("real.csv");
    std::fs::write(&real, "y,t,x1\n0,1,0.5\n1,0,1.5\n").unwrap();
    assert!(run_err(&["rank", "--data", real.to_str().unwrap(), "--axis", "prog"]).contains("--bins"));

    let pattern = format!("{}/nothing_*.csv", dir.path().display());
    assert!(run_err(&[
        "ppgraph", "--data-glob", &pattern, "--svg", "a.svg", "--csv", "a.csv"
    ])
    .contains("no files matched"));

    run_err(&["rank", "--data", dir.path().join("absent.csv").to_str().unwrap(), "--axis", "prog"]);
    run_err(&["simulate", "--out", "/nonexistent-dir/x", "--n", "10"]);
    run_err(&["msebench", "--sizes", "64,32", "--csv", dir.path().join("m.csv").to_str().unwrap()]);
    run_err(&["rank", "--axis", "prog"]);
}
