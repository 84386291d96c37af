//! CSV ingestion and tabular output.
//!
//! Feature cells must be numeric, with one documented exception: the
//! categorical votes `y` / `n` / `?` are encoded 1 / 0 / 0.5, so files such
//! as the congressional voting records load without preprocessing. The label
//! column (selected by name or index) maps distinct strings to class ids in
//! order of first appearance.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bhc_core::{Dataset, Metrics, Partition};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: String,
        source: csv::Error,
    },
    #[error("{path}: row {row} has {got} columns, expected {expected}")]
    RaggedRows {
        path: String,
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("{path}: cannot parse '{value}' at row {row}, column {col} as a feature")]
    ParseError {
        path: String,
        row: usize,
        col: usize,
        value: String,
    },
    #[error("{path}: label column '{column}' not found")]
    MissingLabelColumn { path: String, column: String },
    #[error("{path}: file has no data rows")]
    Empty { path: String },
}

/// Which column holds the ground-truth labels.
#[derive(Debug, Clone)]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

impl ColumnSelector {
    /// Parse a CLI argument: a number selects by position, anything else by
    /// header name.
    pub fn parse(s: &str) -> Self {
        match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub delimiter: u8,
    pub has_header: bool,
    pub label_column: Option<ColumnSelector>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
            label_column: None,
        }
    }
}

fn parse_feature(value: &str) -> Option<f64> {
    let trimmed = value.trim();
    if let Ok(x) = trimmed.parse::<f64>() {
        return Some(x);
    }
    // vote encoding: yes 1, no 0, unknown 0.5
    match trimmed {
        "y" | "Y" => Some(1.0),
        "n" | "N" => Some(0.0),
        "?" => Some(0.5),
        _ => None,
    }
}

/// Load a delimited file into a dataset. Non-label columns become features;
/// the label column, when selected, becomes ground truth.
pub fn load_csv(path: &Path, opts: &LoadOptions) -> Result<Dataset, LoadError> {
    let path_str = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(opts.has_header)
        .flexible(true)
        .from_path(path)
        .map_err(|source| match source.kind() {
            csv::ErrorKind::Io(_) => LoadError::Io {
                path: path_str.clone(),
                source: std::io::Error::other(source.to_string()),
            },
            _ => LoadError::Csv {
                path: path_str.clone(),
                source,
            },
        })?;

    let headers: Vec<String> = if opts.has_header {
        reader
            .headers()
            .map_err(|source| LoadError::Csv {
                path: path_str.clone(),
                source,
            })?
            .iter()
            .map(|h| h.trim().to_string())
            .collect()
    } else {
        Vec::new()
    };

    let label_index = match &opts.label_column {
        None => None,
        Some(ColumnSelector::Index(i)) => Some(*i),
        Some(ColumnSelector::Name(name)) => Some(
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| LoadError::MissingLabelColumn {
                    path: path_str.clone(),
                    column: name.clone(),
                })?,
        ),
    };

    let mut features: Vec<Vec<f64>> = Vec::new();
    let mut label_strings: Vec<String> = Vec::new();
    let mut width: Option<usize> = None;
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|source| LoadError::Csv {
            path: path_str.clone(),
            source,
        })?;
        let row_no = row_idx + if opts.has_header { 2 } else { 1 };
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(LoadError::RaggedRows {
                path: path_str,
                row: row_no,
                expected,
                got: record.len(),
            });
        }
        let mut row = Vec::with_capacity(record.len().saturating_sub(1));
        for (col, value) in record.iter().enumerate() {
            if Some(col) == label_index {
                label_strings.push(value.trim().to_string());
                continue;
            }
            match parse_feature(value) {
                Some(x) => row.push(x),
                None => {
                    return Err(LoadError::ParseError {
                        path: path_str,
                        row: row_no,
                        col: col + 1,
                        value: value.to_string(),
                    })
                }
            }
        }
        features.push(row);
    }
    if features.is_empty() {
        return Err(LoadError::Empty { path: path_str });
    }

    let dataset = Dataset::new(features).expect("equal widths enforced above");
    if label_index.is_some() {
        let mut seen: Vec<String> = Vec::new();
        let labels: Vec<usize> = label_strings
            .iter()
            .map(|s| match seen.iter().position(|t| t == s) {
                Some(i) => i,
                None => {
                    seen.push(s.clone());
                    seen.len() - 1
                }
            })
            .collect();
        Ok(dataset
            .with_labels(labels)
            .expect("one label per data row"))
    } else {
        Ok(dataset)
    }
}

/// Partition as CSV: one `object,cluster` line per object.
pub fn partition_to_csv(partition: &Partition) -> String {
    let mut out = String::from("object,cluster\n");
    for (object, &cluster) in partition.labels().iter().enumerate() {
        let _ = writeln!(out, "{object},{cluster}");
    }
    out
}

/// Read a partition written by [`partition_to_csv`].
pub fn partition_from_csv(text: &str) -> anyhow::Result<Partition> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let (obj, cluster) = line
            .split_once(',')
            .ok_or_else(|| anyhow::anyhow!("line {}: expected 'object,cluster'", i + 1))?;
        pairs.push((obj.trim().parse()?, cluster.trim().parse()?));
    }
    pairs.sort_unstable();
    for (expect, (obj, _)) in pairs.iter().enumerate() {
        anyhow::ensure!(
            *obj == expect,
            "partition file must cover objects 0..n exactly once (missing {expect})"
        );
    }
    let labels: Vec<usize> = pairs.into_iter().map(|(_, c)| c).collect();
    Ok(Partition::from_labels(&labels)?)
}

/// One evaluated configuration, as written to metrics CSV files.
#[derive(Debug, Clone)]
pub struct MetricsRow {
    pub dataset: String,
    pub algorithm: String,
    pub linkage: String,
    pub k_init: Option<usize>,
    pub f_c: usize,
    pub seed: u64,
    pub gamma: String,
    pub metrics: Metrics,
}

pub const METRICS_HEADER: &str =
    "dataset,algorithm,linkage,k_init,fc,seed,gamma,precision,recall,rand_index";

impl MetricsRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.4},{:.4},{:.4}",
            self.dataset,
            self.algorithm,
            self.linkage,
            self.k_init.map_or_else(|| "-".to_string(), |k| k.to_string()),
            self.f_c,
            self.seed,
            self.gamma,
            self.metrics.precision,
            self.metrics.recall,
            self.metrics.rand_index,
        )
    }
}

pub fn metrics_to_csv(rows: &[MetricsRow]) -> String {
    let mut out = String::from(METRICS_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, text)?;
    Ok(())
}
