//! Command-line surface: `simulate`, `rank`, `ppgraph` and `msebench`.

pub mod dataset_file;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bench::{export_bench_csv, run_mse_bench, MseBenchConfig, MseBenchResult, NullCards, NullGenerator};
use crate::datagen::{foster_spec, replicate_seed, simulate};
use crate::error::{Error, Result};
use crate::ppgraph::{build_ppgraph, export_csv, render_svg, PPGraph, SvgStyle};
use crate::prob::EstimatorKind;
use crate::ranking::{
    rank_predictive, rank_prognostic, CriterionOrder, RankedList, RankingConfig, DEFAULT_CELL_BUDGET,
};

pub use dataset_file::DatasetFile;

#[derive(Debug, Parser)]
#[command(name = "biorank", version, about = "Prognostic and predictive biomarker ranking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate randomized-trial datasets.
    Simulate(SimulateArgs),
    /// Rank the features of one dataset on one axis.
    Rank(RankArgs),
    /// Average rankings over many datasets into a PP-graph.
    Ppgraph(PpgraphArgs),
    /// Compare ML and shrinkage CMI estimators under a null model.
    Msebench(MsebenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Model {
    Foster,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Prog,
    Pred,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    #[value(name = "1")]
    First,
    #[value(name = "2")]
    Second,
    Full,
}

impl From<OrderArg> for CriterionOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::First => CriterionOrder::First,
            OrderArg::Second => CriterionOrder::Second,
            OrderArg::Full => CriterionOrder::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Ml,
    Shrink,
}

impl From<EstimatorArg> for EstimatorKind {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Ml => EstimatorKind::MaximumLikelihood,
            EstimatorArg::Shrink => EstimatorKind::Shrinkage,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorArg {
    Dirichlet,
    Uniform,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path prefix; files are written as `<prefix>_000.csv`, `<prefix>_001.csv`, ...
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Model::Foster)]
    pub model: Model,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CriterionArgs {
    #[arg(long, value_enum, default_value_t = OrderArg::Second)]
    pub order: OrderArg,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Shrink)]
    pub estimator: EstimatorArg,
    /// Equal-width bins for real-valued feature columns.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Largest table allowed by the full-conditioning criterion.
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
    pub cell_budget: usize,
}

impl CriterionArgs {
    fn config(&self) -> RankingConfig {
        RankingConfig {
            order: self.order.into(),
            estimator: self.estimator.into(),
            cell_budget: self.cell_budget,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    #[command(flatten)]
    pub criterion: CriterionArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PpgraphArgs {
    /// Glob pattern selecting the replicate dataset files.
    #[arg(long)]
    pub data_glob: String,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[command(flatten)]
    pub criterion: CriterionArgs,
    #[arg(long)]
    pub svg: PathBuf,
    #[arg(long)]
    pub csv: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct MsebenchArgs {
    /// Comma-separated ascending sample sizes.
    #[arg(long, value_delimiter = ',', default_values_t = (5..=12).map(|e| 1usize << e))]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 500)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 25)]
    pub x_levels: usize,
    #[arg(long, value_enum, default_value_t = GeneratorArg::Dirichlet)]
    pub generator: GeneratorArg,
    #[arg(long)]
    pub csv: PathBuf,
}

/// Path of replicate `rep` for an output prefix (a trailing `.csv` is dropped).
pub fn replicate_path(prefix: &Path, rep: usize) -> PathBuf {
    let stem = match prefix.extension() {
        Some(ext) if ext == "csv" => prefix.with_extension(""),
        _ => prefix.to_path_buf(),
    };
    let mut name = stem.into_os_string();
    name.push(format!("_{rep:03}.csv"));
    PathBuf::from(name)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Vec<PathBuf>> {
    let mut spec = match args.model {
        Model::Foster => foster_spec(),
    };
    spec.n = args.n;
    if args.reps == 0 {
        return Err(Error::InvalidSpec("--reps must be at least 1".into()));
    }
    (0..args.reps)
        .into_par_iter()
        .map(|rep| {
            let data = simulate(&spec, replicate_seed(args.seed, rep as u64))?;
            let path = replicate_path(&args.out, rep);
            dataset_file::write_continuous(&data, &path)?;
            Ok(path)
        })
        .collect()
}

fn rank_file(path: &Path, axis: AxisArg, criterion: &CriterionArgs) -> Result<(RankedList, Vec<String>)> {
    let data = DatasetFile::read(path)?.into_trial(criterion.bins)?;
    let ranked = match axis {
        AxisArg::Prog => rank_prognostic(&data, criterion.config())?,
        AxisArg::Pred => rank_predictive(&data, criterion.config())?,
    };
    Ok((ranked, data.names().to_vec()))
}

/// Writes `rank,feature,score` rows.
pub fn cmd_rank(args: &RankArgs, out: &mut impl Write) -> Result<RankedList> {
    let (ranked, names) = rank_file(&args.data, args.axis, &args.criterion)?;
    let io = |e| Error::io("<stdout>", e);
    writeln!(out, "rank,feature,score").map_err(io)?;
    for e in &ranked.entries {
        writeln!(out, "{},{},{:.10}", e.step, names[e.feature], e.score).map_err(io)?;
    }
    Ok(ranked)
}

fn method_label(c: &CriterionArgs) -> String {
    let order = match c.order {
        OrderArg::First => "1st-order",
        OrderArg::Second => "2nd-order",
        OrderArg::Full => "full-conditioning",
    };
    let est = match c.estimator {
        EstimatorArg::Ml => "ML",
        EstimatorArg::Shrink => "shrinkage",
    };
    format!("{order}, {est}")
}

pub fn cmd_ppgraph(args: &PpgraphArgs) -> Result<PPGraph> {
    let mut paths: Vec<PathBuf> = glob::glob(&args.data_glob)
        .map_err(|e| Error::Format(format!("bad glob {}: {e}", args.data_glob)))?
        .filter_map(|p| p.ok())
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::NoFilesMatched(args.data_glob.clone()));
    }

    let per_file: Vec<(RankedList, RankedList, Vec<String>)> = paths
        .par_iter()
        .map(|path| {
            let (prog, names) = rank_file(path, AxisArg::Prog, &args.criterion)?;
            let (pred, _) = rank_file(path, AxisArg::Pred, &args.criterion)?;
            Ok((prog, pred, names))
        })
        .collect::<Result<_>>()?;

    let labels = per_file[0].2.clone();
    if let Some((_, _, names)) = per_file.iter().find(|f| f.2 != labels) {
        return Err(Error::InvalidRanking(format!(
            "datasets have different feature columns: {labels:?} vs {names:?}"
        )));
    }
    let (prog, pred): (Vec<_>, Vec<_>) = per_file.into_iter().map(|(a, b, _)| (a, b)).unzip();
    let graph = build_ppgraph(&prog, &pred, args.k, &labels, &method_label(&args.criterion))?;
    render_svg(&graph, &SvgStyle::default(), &args.svg)?;
    export_csv(&graph, &args.csv)?;
    Ok(graph)
}

pub fn cmd_msebench(args: &MsebenchArgs) -> Result<MseBenchResult> {
    let config = MseBenchConfig {
        cards: NullCards {
            x: args.x_levels,
            ..NullCards::default()
        },
        sizes: args.sizes.clone(),
        replicates: args.reps,
        seed: args.seed,
        generator: match args.generator {
            GeneratorArg::Dirichlet => NullGenerator::IndependentDirichlet,
            GeneratorArg::Uniform => NullGenerator::Uniform,
        },
    };
    let result = run_mse_bench(&config)?;
    export_bench_csv(&result, &args.csv)?;
    Ok(result)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => {
            for p in cmd_simulate(&a)? {
                println!("{}", p.display());
            }
        }
        Command::Rank(a) => {
            let stdout = std::io::stdout();
            cmd_rank(&a, &mut stdout.lock())?;
        }
        Command::Ppgraph(a) => {
            let g = cmd_ppgraph(&a)?;
            println!("cutoff={}", g.cutoff);
            let names = |v: Vec<usize>| {
                v.iter()
                    .map(|&j| g.points[j].label.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            println!("prognostic band: {}", names(g.band(crate::ranking::RankAxis::Prognostic)));
            println!("predictive band: {}", names(g.band(crate::ranking::RankAxis::Predictive)));
        }
        Command::Msebench(a) => {
            let r = cmd_msebench(&a)?;
            for row in r.rows {
                println!("n={} mse_ml={:.3e} mse_shrinkage={:.3e}", row.n, row.mse_ml, row.mse_shrinkage);
            }
        }
    }
    Ok(())
}
