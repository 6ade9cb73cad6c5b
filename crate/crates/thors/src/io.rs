//! CSV ingestion for feature tables and external score files.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use thors_core::classifiers::Dataset;
use thors_core::{Class, LabeledScore};

use crate::error::{HarnessError, Result};

/// Treatment of `na` and empty feature cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NaPolicy {
    /// Store as NaN for later imputation.
    #[default]
    Missing,
    /// Fail with [`HarnessError::UnparseableCell`].
    Reject,
}

fn is_na(cell: &str) -> bool {
    cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("nan")
}

fn label_matches(cell: &str, positive: &str) -> bool {
    if cell == positive {
        return true;
    }
    match (cell.parse::<f64>(), positive.parse::<f64>()) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| HarnessError::io(path, e))
}

pub fn load_csv(
    path: impl AsRef<Path>,
    label_col: &str,
    positive_value: &str,
    na: NaPolicy,
) -> Result<Dataset> {
    let path = path.as_ref();
    read_csv(open(path)?, label_col, positive_value, na)
}

/// Every column except `label_col` becomes a feature. Rows whose label
/// equals `positive_value` (as text, or numerically) are class 1.
pub fn read_csv<R: Read>(
    reader: R,
    label_col: &str,
    positive_value: &str,
    na: NaPolicy,
) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let label_idx = header
        .iter()
        .position(|h| h == label_col)
        .ok_or_else(|| HarnessError::MissingColumn(label_col.to_owned()))?;
    let names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.to_owned())
        .collect();

    let mut features = Vec::new();
    let mut labels = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec
            .position()
            .map_or(labels.len() + 2, |p| p.line() as usize);
        for (i, cell) in rec.iter().enumerate() {
            if i == label_idx {
                continue;
            }
            let value = if is_na(cell) && na == NaPolicy::Missing {
                f64::NAN
            } else {
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| HarnessError::UnparseableCell {
                        row,
                        column: header[i].to_owned(),
                        value: cell.to_owned(),
                    })?
            };
            features.push(value);
        }
        let cell = &rec[label_idx];
        if cell.is_empty() {
            return Err(HarnessError::UnparseableCell {
                row,
                column: label_col.to_owned(),
                value: String::new(),
            });
        }
        labels.push(if label_matches(cell, positive_value) {
            Class::Positive
        } else {
            Class::Negative
        });
    }
    let n1 = labels.iter().filter(|c| c.is_positive()).count();
    if n1 == 0 || n1 == labels.len() {
        return Err(HarnessError::SingleClassData);
    }
    Ok(Dataset::new(features, names.len(), labels, names)?)
}

/// Reads a `score,label` file; labels are `0`/`1`.
pub fn load_scores(path: impl AsRef<Path>) -> Result<Vec<LabeledScore>> {
    let path = path.as_ref();
    read_scores(open(path)?)
}

pub fn read_scores<R: Read>(reader: R) -> Result<Vec<LabeledScore>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| HarnessError::MissingColumn(name.to_owned()))
    };
    let (si, li) = (find("score")?, find("label")?);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec.position().map_or(out.len() + 2, |p| p.line() as usize);
        let bad = |col: usize| HarnessError::UnparseableCell {
            row,
            column: header[col].to_owned(),
            value: rec[col].to_owned(),
        };
        let score: f64 = rec[si].parse().map_err(|_| bad(si))?;
        let label = match &rec[li] {
            "0" => Class::Negative,
            "1" => Class::Positive,
            _ => return Err(bad(li)),
        };
        out.push(LabeledScore::new(score, label));
    }
    Ok(out)
}
