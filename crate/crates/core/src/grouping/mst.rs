use serde::Serialize;

use super::{GroupingError, GroupingResult};

/// Disjoint-set forest with path halving and union by rank.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MstEdge {
    /// Group ids, `a < b`.
    pub a: usize,
    pub b: usize,
    /// Euclidean distance between the two centers in the embedding.
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct MstEdges {
    pub edges: Vec<MstEdge>,
}

impl MstEdges {
    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }
}

/// Kruskal over all pairs of group centers; ties resolve by smaller id pair.
pub fn mst_over_centers(grouping: &GroupingResult) -> Result<MstEdges, GroupingError> {
    let centers: Vec<(f64, f64)> = grouping.groups.iter().map(|g| g.center).collect();
    if centers.is_empty() {
        return Err(GroupingError::NoGroups);
    }
    Ok(kruskal(&centers))
}

pub(crate) fn kruskal(centers: &[(f64, f64)]) -> MstEdges {
    let k = centers.len();
    let mut candidates: Vec<MstEdge> = (0..k)
        .flat_map(|a| ((a + 1)..k).map(move |b| (a, b)))
        .map(|(a, b)| MstEdge {
            a,
            b,
            length: (centers[a].0 - centers[b].0).hypot(centers[a].1 - centers[b].1),
        })
        .collect();
    candidates.sort_by(|x, y| {
        x.length
            .total_cmp(&y.length)
            .then(x.a.cmp(&y.a))
            .then(x.b.cmp(&y.b))
    });
    let mut uf = UnionFind::new(k);
    let mut edges = Vec::with_capacity(k.saturating_sub(1));
    for e in candidates {
        if edges.len() + 1 == k {
            break;
        }
        if uf.union(e.a, e.b) {
            edges.push(e);
        }
    }
    MstEdges { edges }
}
