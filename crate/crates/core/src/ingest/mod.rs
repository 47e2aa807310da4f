//! Input files, the validated [`Dataset`], and run configuration.

mod config;
mod csvio;

pub use config::{validate_config, ClusterSpace, ConfigError, RawOptions, RunConfig, ValidatedConfig};
pub use csvio::{load_dataset, read_labels, read_matrix, write_dataset, write_labels, write_matrix, NumericTable};

use std::collections::HashSet;
use std::path::PathBuf;

use thiserror::Error;

use crate::numstats::{Matrix, NumError};

/// Smallest number of observations a dataset may hold.
pub const MIN_ROWS: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error("cannot read '{path}': {message}")]
    Io { path: PathBuf, message: String },
    #[error("malformed CSV in '{path}' at line {line}: {message}")]
    Csv {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("'{path}' has no data rows")]
    NoRows { path: PathBuf },
    #[error("'{path}': non-numeric value '{value}' at row {row}, column {col}")]
    NonNumeric {
        path: PathBuf,
        row: usize,
        col: usize,
        value: String,
    },
    #[error("'{path}': missing value at row {row}, column {col}")]
    MissingValue { path: PathBuf, row: usize, col: usize },
    #[error("'{path}': non-finite value at row {row}, column {col}")]
    NonFinite { path: PathBuf, row: usize, col: usize },
    #[error("'{path}': duplicate feature name '{name}'")]
    DuplicateFeature { path: PathBuf, name: String },
    #[error("'{path}': empty feature name in column {col}")]
    EmptyFeatureName { path: PathBuf, col: usize },
    #[error("'{path}': embedding must have exactly 2 columns, found {found}")]
    EmbeddingColumns { path: PathBuf, found: usize },
    #[error("'{path}': label file must have exactly 1 column, found {found}")]
    LabelColumns { path: PathBuf, found: usize },
    #[error("'{path}': empty label at row {row}")]
    EmptyLabel { path: PathBuf, row: usize },
    #[error("row-count mismatch: '{path}' has {found} rows, expected {expected}")]
    RowCountMismatch {
        path: PathBuf,
        expected: usize,
        found: usize,
    },
    #[error("dataset has {found} rows, at least {MIN_ROWS} required")]
    TooFewRows { found: usize },
    #[error("invalid dataset: {0}")]
    Invalid(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Where a dataset came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    pub x_path: Option<PathBuf>,
    pub y_path: Option<PathBuf>,
    pub labels_path: Option<PathBuf>,
    pub rows: usize,
}

/// High-dimensional features, their 2D embedding, and optional point labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    feature_names: Vec<String>,
    x: Matrix,
    y: Matrix,
    labels: Option<Vec<String>>,
    provenance: Provenance,
}

impl Dataset {
    pub fn new(
        feature_names: Vec<String>,
        x: Matrix,
        y: Matrix,
        labels: Option<Vec<String>>,
    ) -> Result<Self, IngestError> {
        let n = x.rows();
        if feature_names.len() != x.cols() {
            return Err(IngestError::Invalid(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                x.cols()
            )));
        }
        let mut seen = HashSet::new();
        for (col, name) in feature_names.iter().enumerate() {
            if name.trim().is_empty() {
                return Err(IngestError::EmptyFeatureName {
                    path: PathBuf::new(),
                    col: col + 1,
                });
            }
            if !seen.insert(name.as_str()) {
                return Err(IngestError::DuplicateFeature {
                    path: PathBuf::new(),
                    name: name.clone(),
                });
            }
        }
        if y.cols() != 2 {
            return Err(IngestError::EmbeddingColumns {
                path: PathBuf::new(),
                found: y.cols(),
            });
        }
        if y.rows() != n {
            return Err(IngestError::RowCountMismatch {
                path: PathBuf::from("<embedding>"),
                expected: n,
                found: y.rows(),
            });
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(IngestError::RowCountMismatch {
                    path: PathBuf::from("<labels>"),
                    expected: n,
                    found: labels.len(),
                });
            }
        }
        if n < MIN_ROWS {
            return Err(IngestError::TooFewRows { found: n });
        }
        Ok(Self {
            feature_names,
            x,
            y,
            labels,
            provenance: Provenance {
                rows: n,
                ..Provenance::default()
            },
        })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn with_labels(self, labels: Vec<String>) -> Result<Self, IngestError> {
        let provenance = self.provenance.clone();
        Ok(Self::new(self.feature_names, self.x, self.y, Some(labels))?.with_provenance(provenance))
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn d(&self) -> usize {
        self.x.cols()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &Matrix {
        &self.y
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}
