use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::{Dataset, IngestError, Provenance};
use crate::numstats::Matrix;

/// A numeric CSV table: header names plus an n x d matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub header: Vec<String>,
    pub matrix: Matrix,
}

fn open(path: &Path) -> Result<File, IngestError> {
    File::open(path).map_err(|e| IngestError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn csv_error(path: &Path, err: csv::Error) -> IngestError {
    let line = err.position().map_or(0, |p| p.line());
    let message = match err.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            format!("expected {expected_len} fields, found {len}")
        }
        csv::ErrorKind::Utf8 { .. } => "invalid UTF-8".to_string(),
        _ => err.to_string(),
    };
    IngestError::Csv {
        path: path.to_path_buf(),
        line,
        message,
    }
}

fn reader<R: Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source)
}

/// Parses a header row plus numeric data rows from any reader.
pub(crate) fn parse_matrix<R: Read>(source: R, path: &Path) -> Result<NumericTable, IngestError> {
    let mut rdr = reader(source);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let cols = header.len();
    let mut data = Vec::new();
    let mut rows = 0;
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        rows += 1;
        for (c, cell) in record.iter().enumerate() {
            if cell.is_empty() {
                return Err(IngestError::MissingValue {
                    path: path.to_path_buf(),
                    row: rows,
                    col: c + 1,
                });
            }
            let value: f64 = cell.parse().map_err(|_| IngestError::NonNumeric {
                path: path.to_path_buf(),
                row: rows,
                col: c + 1,
                value: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(IngestError::NonFinite {
                    path: path.to_path_buf(),
                    row: rows,
                    col: c + 1,
                });
            }
            data.push(value);
        }
    }
    if rows == 0 || cols == 0 {
        return Err(IngestError::NoRows {
            path: path.to_path_buf(),
        });
    }
    let matrix = Matrix::from_row_major(rows, cols, data)?;
    Ok(NumericTable { header, matrix })
}

pub(crate) fn parse_labels<R: Read>(source: R, path: &Path) -> Result<Vec<String>, IngestError> {
    let mut rdr = reader(source);
    let width = rdr.headers().map_err(|e| csv_error(path, e))?.len();
    if width != 1 {
        return Err(IngestError::LabelColumns {
            path: path.to_path_buf(),
            found: width,
        });
    }
    let mut labels = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let token = record.get(0).unwrap_or("");
        if token.is_empty() {
            return Err(IngestError::EmptyLabel {
                path: path.to_path_buf(),
                row: labels.len() + 1,
            });
        }
        labels.push(token.to_string());
    }
    if labels.is_empty() {
        return Err(IngestError::NoRows {
            path: path.to_path_buf(),
        });
    }
    Ok(labels)
}

pub fn read_matrix(path: &Path) -> Result<NumericTable, IngestError> {
    parse_matrix(open(path)?, path)
}

pub fn read_labels(path: &Path) -> Result<Vec<String>, IngestError> {
    parse_labels(open(path)?, path)
}

pub(crate) fn assemble(
    x: NumericTable,
    y: NumericTable,
    labels: Option<Vec<String>>,
    x_path: &Path,
    y_path: &Path,
    labels_path: Option<&Path>,
) -> Result<Dataset, IngestError> {
    if y.matrix.cols() != 2 {
        return Err(IngestError::EmbeddingColumns {
            path: y_path.to_path_buf(),
            found: y.matrix.cols(),
        });
    }
    let n = x.matrix.rows();
    if y.matrix.rows() != n {
        return Err(IngestError::RowCountMismatch {
            path: y_path.to_path_buf(),
            expected: n,
            found: y.matrix.rows(),
        });
    }
    if let (Some(labels), Some(lp)) = (&labels, labels_path) {
        if labels.len() != n {
            return Err(IngestError::RowCountMismatch {
                path: lp.to_path_buf(),
                expected: n,
                found: labels.len(),
            });
        }
    }
    let relabel = |err: IngestError| match err {
        IngestError::DuplicateFeature { name, .. } => IngestError::DuplicateFeature {
            path: x_path.to_path_buf(),
            name,
        },
        IngestError::EmptyFeatureName { col, .. } => IngestError::EmptyFeatureName {
            path: x_path.to_path_buf(),
            col,
        },
        other => other,
    };
    let dataset = Dataset::new(x.header, x.matrix, y.matrix, labels).map_err(relabel)?;
    Ok(dataset.with_provenance(Provenance {
        x_path: Some(x_path.to_path_buf()),
        y_path: Some(y_path.to_path_buf()),
        labels_path: labels_path.map(Path::to_path_buf),
        rows: n,
    }))
}

/// Loads and validates the feature matrix, the embedding, and optional labels.
pub fn load_dataset(
    x_path: &Path,
    y_path: &Path,
    labels_path: Option<&Path>,
) -> Result<Dataset, IngestError> {
    let x = read_matrix(x_path)?;
    let y = read_matrix(y_path)?;
    let labels = labels_path.map(read_labels).transpose()?;
    assemble(x, y, labels, x_path, y_path, labels_path)
}

fn create(path: &Path) -> Result<csv::Writer<File>, IngestError> {
    let file = File::create(path).map_err(|e| IngestError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(csv::Writer::from_writer(file))
}

fn write_err(path: &Path) -> impl Fn(csv::Error) -> IngestError + '_ {
    move |e| IngestError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Writes a numeric table; values use the shortest round-trip representation.
pub fn write_matrix(path: &Path, header: &[String], m: &Matrix) -> Result<(), IngestError> {
    let mut w = create(path)?;
    w.write_record(header).map_err(write_err(path))?;
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(|v| v.to_string()))
            .map_err(write_err(path))?;
    }
    w.flush().map_err(|e| IngestError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn write_labels(path: &Path, labels: &[String]) -> Result<(), IngestError> {
    let mut w = create(path)?;
    w.write_record(["label"]).map_err(write_err(path))?;
    for l in labels {
        w.write_record([l]).map_err(write_err(path))?;
    }
    w.flush().map_err(|e| IngestError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Writes a dataset back to the three CSV files it can be loaded from.
pub fn write_dataset(
    dataset: &Dataset,
    x_path: &Path,
    y_path: &Path,
    labels_path: Option<&Path>,
) -> Result<(), IngestError> {
    write_matrix(x_path, dataset.feature_names(), dataset.x())?;
    write_matrix(y_path, &["x".to_string(), "y".to_string()], dataset.y())?;
    if let (Some(path), Some(labels)) = (labels_path, dataset.labels()) {
        write_labels(path, labels)?;
    }
    Ok(())
}
