use std::collections::VecDeque;

use super::{GroupingError, GroupingResult, GroupingSource};
use crate::numstats::Matrix;

/// Density-based clustering. A point with at least `min_pts` neighbors
/// (itself included) within `eps` is a core point; points that are neither
/// core nor reachable from one are noise.
pub fn dbscan(points: &Matrix, y: &Matrix, eps: f64, min_pts: usize) -> Result<GroupingResult, GroupingError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(GroupingError::InvalidEps(eps));
    }
    if min_pts == 0 {
        return Err(GroupingError::ZeroMinPts);
    }
    let n = points.rows();
    let eps2 = eps * eps;
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| {
                    points
                        .row(i)
                        .iter()
                        .zip(points.row(j))
                        .map(|(a, b)| (a - b).powi(2))
                        .sum::<f64>()
                        <= eps2
                })
                .collect()
        })
        .collect();
    let is_core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= min_pts).collect();

    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut clusters = 0;
    for start in 0..n {
        if labels[start].is_some() || !is_core[start] {
            continue;
        }
        let id = clusters;
        clusters += 1;
        labels[start] = Some(id);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            if !is_core[p] {
                continue;
            }
            for &q in &neighbors[p] {
                if labels[q].is_none() {
                    labels[q] = Some(id);
                    queue.push_back(q);
                }
            }
        }
    }

    let names = (0..clusters).map(|i| format!("cluster_{i}")).collect();
    Ok(GroupingResult::from_assignments(labels, names, y, GroupingSource::Dbscan))
}
