//! CSV trial datasets: a header with `y` and `t` columns (0/1) plus feature columns.
//!
//! A feature column is categorical when every value is an integer in `[0, 32)`;
//! anything else is real-valued and must be discretized before ranking.

use std::fmt::Write as _;
use std::path::Path;

use crate::dataset::TrialDataset;
use crate::datagen::{discretize_column, ContinuousDataset};
use crate::error::{Error, Result};
use crate::io::write_atomic;

/// Exclusive upper bound on integer codes treated as categorical.
pub const MAX_CATEGORICAL_CODE: f64 = 32.0;

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureColumn {
    Categorical { codes: Vec<u32>, cardinality: usize },
    Real(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetFile {
    pub y: Vec<u8>,
    pub t: Vec<u8>,
    pub names: Vec<String>,
    pub columns: Vec<FeatureColumn>,
}

fn parse_binary(raw: &str, column: &str, row: usize) -> Result<u8> {
    match raw.trim().parse::<f64>() {
        Ok(v) if v == 0.0 => Ok(0),
        Ok(v) if v == 1.0 => Ok(1),
        _ => Err(Error::Format(format!(
            "row {row}: column {column} must be 0 or 1, got {raw:?}"
        ))),
    }
}

fn classify(values: Vec<f64>) -> FeatureColumn {
    let categorical = values
        .iter()
        .all(|&v| v.fract() == 0.0 && (0.0..MAX_CATEGORICAL_CODE).contains(&v));
    if categorical {
        let codes: Vec<u32> = values.iter().map(|&v| v as u32).collect();
        let cardinality = codes.iter().copied().max().unwrap_or(0) as usize + 1;
        FeatureColumn::Categorical { codes, cardinality }
    } else {
        FeatureColumn::Real(values)
    }
}

impl DatasetFile {
    pub fn parse(reader: impl std::io::Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers()?.clone();
        let find = |name: &str| {
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Format(format!("missing required column {name}")))
        };
        let (yi, ti) = (find("y")?, find("t")?);
        let feature_idx: Vec<usize> = (0..header.len()).filter(|&i| i != yi && i != ti).collect();
        let names = feature_idx.iter().map(|&i| header[i].to_string()).collect();

        let mut y = Vec::new();
        let mut t = Vec::new();
        let mut raw: Vec<Vec<f64>> = vec![Vec::new(); feature_idx.len()];
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = row + 2;
            y.push(parse_binary(&rec[yi], "y", line)?);
            t.push(parse_binary(&rec[ti], "t", line)?);
            for (col, &i) in raw.iter_mut().zip(&feature_idx) {
                let v = rec[i].parse::<f64>().map_err(|_| {
                    Error::Format(format!("row {line}: column {} is not numeric: {:?}", &header[i], &rec[i]))
                })?;
                col.push(v);
            }
        }
        if y.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(Self {
            y,
            t,
            names,
            columns: raw.into_iter().map(classify).collect(),
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(std::io::BufReader::new(file)).map_err(|e| match e {
            Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Categorical dataset with real columns binned into `bins` equal-width bins.
    pub fn into_trial(self, bins: Option<usize>) -> Result<TrialDataset> {
        let mut features = Vec::with_capacity(self.columns.len());
        let mut cards = Vec::with_capacity(self.columns.len());
        for (col, name) in self.columns.into_iter().zip(&self.names) {
            match col {
                FeatureColumn::Categorical { codes, cardinality } => {
                    features.push(codes);
                    cards.push(cardinality);
                }
                FeatureColumn::Real(values) => {
                    let bins = bins.ok_or_else(|| {
                        Error::Format(format!(
                            "column {name} is real-valued; pass --bins to discretize it"
                        ))
                    })?;
                    features.push(discretize_column(&values, bins, name)?.0);
                    cards.push(bins);
                }
            }
        }
        TrialDataset::with_names(self.y, self.t, features, cards, self.names)
    }
}

pub fn continuous_csv_string(data: &ContinuousDataset) -> String {
    let p = data.features.len();
    let mut out = String::from("y,t");
    for j in 1..=p {
        let _ = write!(out, ",x{j}");
    }
    out.push('\n');
    for i in 0..data.n() {
        let _ = write!(out, "{},{}", data.y[i], data.t[i]);
        for col in &data.features {
            let _ = write!(out, ",{}", col[i]);
        }
        out.push('\n');
    }
    out
}

pub fn write_continuous(data: &ContinuousDataset, path: &Path) -> Result<()> {
    write_atomic(path, continuous_csv_string(data).as_bytes())
}
