//! Bundled example data.

use crate::ingest::Dataset;
use crate::numstats::Matrix;
use crate::pipeline::pca_embedding;

const IRIS_X: &str = include_str!("../data/iris_X.csv");
const IRIS_LABELS: &str = include_str!("../data/iris_labels.csv");

/// Fisher's Iris measurements as `(feature names, 150 x 4 matrix)`.
pub fn iris_features() -> (Vec<String>, Matrix) {
    let mut reader = csv::Reader::from_reader(IRIS_X.as_bytes());
    let header = reader
        .headers()
        .expect("bundled header")
        .iter()
        .map(str::to_string)
        .collect();
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| {
            r.expect("bundled row")
                .iter()
                .map(|v| v.parse().expect("bundled value"))
                .collect()
        })
        .collect();
    (header, Matrix::from_rows(&rows).expect("bundled matrix"))
}

pub fn iris_labels() -> Vec<String> {
    IRIS_LABELS.lines().skip(1).map(str::to_string).collect()
}

/// Iris with species labels, embedded by PCA on standardized features.
pub fn iris() -> Dataset {
    let (names, x) = iris_features();
    let y = pca_embedding(&x, true).expect("iris PCA");
    Dataset::new(names, x, y, Some(iris_labels())).expect("bundled dataset")
}
