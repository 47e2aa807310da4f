//! Point groupings for local and inter-group clocks.
//!
//! Groups come from an external label file or from one of the built-in
//! clusterers. Every group carries its 2D center in the embedding, and the
//! minimum spanning tree over those centers decides which group pairs get an
//! inter-group clock.

mod dbscan;
mod kmeans;
mod mst;

pub use dbscan::dbscan;
pub use kmeans::kmeans;
pub use mst::{mst_over_centers, MstEdge, MstEdges, UnionFind};

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ingest::{ClusterSpace, Dataset};
use crate::numstats::{standardize_columns, Matrix, NumError};

/// Reserved label token for points that belong to no group.
pub const NOISE_TOKEN: &str = "noise";

/// Default DBSCAN neighborhood size when only `eps` is given.
pub const DEFAULT_MIN_PTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupingError {
    #[error("{found} labels for {expected} points")]
    LabelCount { expected: usize, found: usize },
    #[error("k must be at least 1")]
    ZeroClusters,
    #[error("k = {k} exceeds the number of points ({n})")]
    TooManyClusters { k: usize, n: usize },
    #[error("eps must be positive and finite, got {0}")]
    InvalidEps(f64),
    #[error("min_pts must be at least 1")]
    ZeroMinPts,
    #[error("grouping has no groups")]
    NoGroups,
    #[error("invalid cluster spec '{0}': expected 'kmeans:K' or 'dbscan:EPS[,MIN_PTS]'")]
    BadSpec(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupingSource {
    External,
    Kmeans,
    Dbscan,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Group {
    pub id: usize,
    pub name: String,
    pub members: Vec<usize>,
    /// Centroid of the members' embedding coordinates.
    pub center: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupingResult {
    /// Group id per point; `None` marks noise.
    pub labels: Vec<Option<usize>>,
    pub groups: Vec<Group>,
    pub source: GroupingSource,
}

impl GroupingResult {
    /// Builds groups from per-point ids (`None` = noise). Ids must be dense
    /// and are kept as given; `names[id]` names each group.
    pub(crate) fn from_assignments(
        labels: Vec<Option<usize>>,
        names: Vec<String>,
        y: &Matrix,
        source: GroupingSource,
    ) -> Self {
        let mut members = vec![Vec::new(); names.len()];
        for (i, l) in labels.iter().enumerate() {
            if let Some(g) = l {
                members[*g].push(i);
            }
        }
        let groups = names
            .into_iter()
            .zip(members)
            .enumerate()
            .map(|(id, (name, members))| {
                let center = centroid(y, &members);
                Group {
                    id,
                    name,
                    members,
                    center,
                }
            })
            .collect();
        Self {
            labels,
            groups,
            source,
        }
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }
}

pub(crate) fn centroid(y: &Matrix, members: &[usize]) -> (f64, f64) {
    let n = members.len() as f64;
    let (sx, sy) = members
        .iter()
        .fold((0.0, 0.0), |(a, b), &i| (a + y.get(i, 0), b + y.get(i, 1)));
    (sx / n, sy / n)
}

/// Renumbers raw cluster ids by first appearance in point order.
pub(crate) fn relabel_by_first_appearance(raw: &[Option<usize>]) -> (Vec<Option<usize>>, usize) {
    let mut map = HashMap::new();
    let labels = raw
        .iter()
        .map(|l| {
            l.map(|id| {
                let next = map.len();
                *map.entry(id).or_insert(next)
            })
        })
        .collect();
    (labels, map.len())
}

/// Groups points by label token, in first-appearance order; "noise" (any case) is noise.
pub fn from_labels(tokens: &[String], y: &Matrix) -> Result<GroupingResult, GroupingError> {
    if tokens.len() != y.rows() {
        return Err(GroupingError::LabelCount {
            expected: y.rows(),
            found: tokens.len(),
        });
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut names = Vec::new();
    let labels = tokens
        .iter()
        .map(|t| {
            if t.eq_ignore_ascii_case(NOISE_TOKEN) {
                None
            } else {
                Some(*index.entry(t.as_str()).or_insert_with(|| {
                    names.push(t.clone());
                    names.len() - 1
                }))
            }
        })
        .collect();
    Ok(GroupingResult::from_assignments(
        labels,
        names,
        y,
        GroupingSource::External,
    ))
}

/// A built-in clustering request.
#[derive(Debug, Clone, PartialEq)]
pub enum ClusterSpec {
    Kmeans { k: usize },
    Dbscan { eps: f64, min_pts: usize },
}

impl fmt::Display for ClusterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterSpec::Kmeans { k } => write!(f, "kmeans:{k}"),
            ClusterSpec::Dbscan { eps, min_pts } => write!(f, "dbscan:{eps},{min_pts}"),
        }
    }
}

impl std::str::FromStr for ClusterSpec {
    type Err = GroupingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupingError::BadSpec(s.to_string());
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        match kind.trim().to_ascii_lowercase().as_str() {
            "kmeans" => {
                let k: usize = args.trim().parse().map_err(|_| bad())?;
                Ok(ClusterSpec::Kmeans { k })
            }
            "dbscan" => {
                let mut parts = args.split(',');
                let eps: f64 = parts
                    .next()
                    .ok_or_else(bad)?
                    .trim()
                    .parse()
                    .map_err(|_| bad())?;
                let min_pts = match parts.next() {
                    Some(p) => p.trim().parse().map_err(|_| bad())?,
                    None => DEFAULT_MIN_PTS,
                };
                if parts.next().is_some() {
                    return Err(bad());
                }
                Ok(ClusterSpec::Dbscan { eps, min_pts })
            }
            _ => Err(bad()),
        }
    }
}

/// Runs the requested clusterer in the requested space. High-dimensional
/// points are standardized first when `standardize_x` is set.
pub fn cluster_dataset(
    dataset: &Dataset,
    spec: &ClusterSpec,
    space: ClusterSpace,
    standardize_x: bool,
    seed: u64,
) -> Result<GroupingResult, GroupingError> {
    let points = match space {
        ClusterSpace::Y => dataset.y().clone(),
        ClusterSpace::X if standardize_x => standardize_columns(dataset.x())?.matrix,
        ClusterSpace::X => dataset.x().clone(),
    };
    match *spec {
        ClusterSpec::Kmeans { k } => kmeans(&points, dataset.y(), k, seed),
        ClusterSpec::Dbscan { eps, min_pts } => dbscan(&points, dataset.y(), eps, min_pts),
    }
}
