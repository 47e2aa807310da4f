use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{relabel_by_first_appearance, GroupingError, GroupingResult, GroupingSource};
use crate::numstats::Matrix;

const MAX_ITER: usize = 300;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// Index of the nearest center; ties go to the lower index.
fn nearest(point: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, center) in centers.iter().enumerate() {
        let d = sq_dist(point, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus_init(points: &Matrix, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.rows();
    let mut centers = vec![points.row(rng.random_range(0..n)).to_vec()];
    let mut dist: Vec<f64> = (0..n).map(|i| sq_dist(points.row(i), &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = dist.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, d) in dist.iter().enumerate() {
                acc += d;
                if acc > target && *d > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        let c = points.row(pick).to_vec();
        for (i, d) in dist.iter_mut().enumerate() {
            *d = d.min(sq_dist(points.row(i), &c));
        }
        centers.push(c);
    }
    centers
}

/// Lloyd's k-means from a seeded k-means++ start. Clustering happens on
/// `points`; group centers are reported in the embedding `y`.
pub fn kmeans(points: &Matrix, y: &Matrix, k: usize, seed: u64) -> Result<GroupingResult, GroupingError> {
    let n = points.rows();
    if k == 0 {
        return Err(GroupingError::ZeroClusters);
    }
    if k > n {
        return Err(GroupingError::TooManyClusters { k, n });
    }
    let d = points.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = plus_plus_init(points, k, &mut rng);
    let mut assign = vec![usize::MAX; n];

    for _ in 0..MAX_ITER {
        let mut changed = false;
        for (i, a) in assign.iter_mut().enumerate() {
            let (c, _) = nearest(points.row(i), &centers);
            if *a != c {
                *a = c;
                changed = true;
            }
        }

        let mut sums = vec![vec![0.0; d]; k];
        let mut counts = vec![0usize; k];
        for (i, &a) in assign.iter().enumerate() {
            counts[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(points.row(i)) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }

        // reseed empty clusters at the point farthest from its own center
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let Some((far, _)) = (0..n)
                .filter(|&i| counts[assign[i]] > 1)
                .map(|i| (i, sq_dist(points.row(i), &centers[assign[i]])))
                .fold(None, |best: Option<(usize, f64)>, cur| match best {
                    Some(b) if b.1 >= cur.1 => Some(b),
                    _ => Some(cur),
                })
            else {
                continue;
            };
            counts[assign[far]] -= 1;
            assign[far] = c;
            counts[c] = 1;
            centers[c] = points.row(far).to_vec();
            changed = true;
        }

        if !changed {
            break;
        }
    }

    let raw: Vec<Option<usize>> = assign.into_iter().map(Some).collect();
    let (labels, count) = relabel_by_first_appearance(&raw);
    let names = (0..count).map(|i| format!("cluster_{i}")).collect();
    Ok(GroupingResult::from_assignments(labels, names, y, GroupingSource::Kmeans))
}
