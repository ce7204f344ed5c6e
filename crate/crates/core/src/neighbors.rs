//! Exact nearest-neighbor search with a configurable tie policy.
//!
//! Both search paths (k-d tree for low dimension, brute force above
//! [`DIM_THRESHOLD`]) find the full set of candidates at the minimal
//! Euclidean distance and resolve ties through the same policy, so they are
//! interchangeable. Distance ties are detected by exact comparison on the
//! squared distance.

use crate::dataset::Matrix;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use rand::RngExt;
use rand_chacha::ChaCha12Rng;

/// Above this dimension the k-d tree degrades and brute force takes over.
pub const DIM_THRESHOLD: usize = 12;

const LEAF_SIZE: usize = 12;

/// How equidistant nearest neighbors are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiePolicy {
    /// Uniform pick from the tie set, using the derived stream.
    SeededRandom,
    /// Least index achieving the minimum; fully deterministic.
    SmallestIndex,
}

impl TiePolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            TiePolicy::SeededRandom => "seeded-random",
            TiePolicy::SmallestIndex => "smallest-index",
        }
    }
}

impl std::str::FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seeded-random" => Ok(TiePolicy::SeededRandom),
            "smallest-index" => Ok(TiePolicy::SmallestIndex),
            other => Err(Error::Config(format!(
                "unknown tie policy `{other}` (expected seeded-random or smallest-index)"
            ))),
        }
    }
}

/// Index of each observation's nearest neighbor (self excluded).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborMap {
    neighbors: Vec<u32>,
    ties_encountered: usize,
    policy: TiePolicy,
}

impl NeighborMap {
    /// 0-based neighbor indices.
    pub fn indices(&self) -> &[u32] {
        &self.neighbors
    }

    pub fn neighbor_of(&self, k: usize) -> usize {
        self.neighbors[k] as usize
    }

    /// Observations whose nearest neighbor was not unique.
    pub fn ties_encountered(&self) -> usize {
        self.ties_encountered
    }

    pub fn policy(&self) -> TiePolicy {
        self.policy
    }

    /// 1-based indices for serialized output.
    pub fn one_based(&self) -> Vec<u32> {
        self.neighbors.iter().map(|&i| i + 1).collect()
    }
}

#[inline]
fn dist2(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        let diff = a[i] - b[i];
        acc += diff * diff;
    }
    acc
}

fn resolve_tie(ties: &mut [u32], policy: TiePolicy, rng: &mut ChaCha12Rng) -> u32 {
    debug_assert!(!ties.is_empty());
    match policy {
        TiePolicy::SmallestIndex => *ties.iter().min().expect("non-empty tie set"),
        TiePolicy::SeededRandom => {
            if ties.len() == 1 {
                ties[0]
            } else {
                // sort so the draw does not depend on discovery order
                ties.sort_unstable();
                ties[rng.random_range(0..ties.len())]
            }
        }
    }
}

/// Exact 1-NN map; dispatches on dimension.
pub fn nearest_neighbors(x: &Matrix, policy: TiePolicy, stream: RngStream) -> Result<NeighborMap> {
    if x.d() <= DIM_THRESHOLD {
        nearest_neighbors_kdtree(x, policy, stream)
    } else {
        nearest_neighbors_brute(x, policy, stream)
    }
}

/// Brute-force path: full pairwise scan.
pub fn nearest_neighbors_brute(
    x: &Matrix,
    policy: TiePolicy,
    stream: RngStream,
) -> Result<NeighborMap> {
    let n = x.n();
    if n < 2 {
        return Err(Error::InsufficientObservations { needed: 2, got: n });
    }
    let mut rng = stream.rng();
    let mut neighbors = Vec::with_capacity(n);
    let mut ties_encountered = 0;
    let mut ties: Vec<u32> = Vec::new();
    for k in 0..n {
        let query = x.row(k);
        let mut best = f64::INFINITY;
        ties.clear();
        for l in 0..n {
            if l == k {
                continue;
            }
            let d2 = dist2(query, x.row(l));
            if d2 < best {
                best = d2;
                ties.clear();
                ties.push(l as u32);
            } else if d2 == best {
                ties.push(l as u32);
            }
        }
        if ties.len() > 1 {
            ties_encountered += 1;
        }
        neighbors.push(resolve_tie(&mut ties, policy, &mut rng));
    }
    Ok(NeighborMap {
        neighbors,
        ties_encountered,
        policy,
    })
}

/// k-d tree path: exact search collecting the full tie set per query.
pub fn nearest_neighbors_kdtree(
    x: &Matrix,
    policy: TiePolicy,
    stream: RngStream,
) -> Result<NeighborMap> {
    let n = x.n();
    if n < 2 {
        return Err(Error::InsufficientObservations { needed: 2, got: n });
    }
    let tree = KdTree::build(x);
    let mut rng = stream.rng();
    let mut neighbors = Vec::with_capacity(n);
    let mut ties_encountered = 0;
    let mut ties: Vec<u32> = Vec::new();
    for k in 0..n {
        ties.clear();
        let mut best = f64::INFINITY;
        tree.query(x.row(k), k as u32, 0, n, 0, &mut best, &mut ties);
        if ties.len() > 1 {
            ties_encountered += 1;
        }
        neighbors.push(resolve_tie(&mut ties, policy, &mut rng));
    }
    Ok(NeighborMap {
        neighbors,
        ties_encountered,
        policy,
    })
}

/// Median-split k-d tree over a reordered index array. The segment
/// `[lo, hi)` stores a subtree with its splitting point at the midpoint.
struct KdTree<'a> {
    x: &'a Matrix,
    order: Vec<u32>,
}

impl<'a> KdTree<'a> {
    fn build(x: &'a Matrix) -> KdTree<'a> {
        let mut order: Vec<u32> = (0..x.n() as u32).collect();
        let n = x.n();
        Self::split(x, &mut order, 0, n, 0);
        KdTree { x, order }
    }

    fn split(x: &Matrix, order: &mut [u32], lo: usize, hi: usize, depth: usize) {
        if hi - lo <= LEAF_SIZE {
            return;
        }
        let axis = depth % x.d();
        let mid = (lo + hi) / 2;
        order[lo..hi].select_nth_unstable_by(mid - lo, |&a, &b| {
            x.row(a as usize)[axis].total_cmp(&x.row(b as usize)[axis])
        });
        Self::split(x, order, lo, mid, depth + 1);
        Self::split(x, order, mid + 1, hi, depth + 1);
    }

    #[allow(clippy::too_many_arguments)]
    fn query(
        &self,
        q: &[f64],
        skip: u32,
        lo: usize,
        hi: usize,
        depth: usize,
        best: &mut f64,
        ties: &mut Vec<u32>,
    ) {
        if hi - lo <= LEAF_SIZE {
            for &idx in &self.order[lo..hi] {
                if idx == skip {
                    continue;
                }
                self.consider(q, idx, best, ties);
            }
            return;
        }
        let axis = depth % self.x.d();
        let mid = (lo + hi) / 2;
        let pivot = self.order[mid];
        if pivot != skip {
            self.consider(q, pivot, best, ties);
        }
        let delta = q[axis] - self.x.row(pivot as usize)[axis];
        let plane = delta * delta;
        let (near, far) = if delta < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.query(q, skip, near.0, near.1, depth + 1, best, ties);
        // equality must be visited so cross-plane ties are collected
        if plane <= *best {
            self.query(q, skip, far.0, far.1, depth + 1, best, ties);
        }
    }

    #[inline]
    fn consider(&self, q: &[f64], idx: u32, best: &mut f64, ties: &mut Vec<u32>) {
        let d2 = dist2(q, self.x.row(idx as usize));
        if d2 < *best {
            *best = d2;
            ties.clear();
            ties.push(idx);
        } else if d2 == *best {
            ties.push(idx);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngConfig;

    fn matrix(rows: &[Vec<f64>]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn stream() -> RngStream {
        RngConfig::new(17).root()
    }

    #[test]
    fn geometric_doubling_points() {
        let x = matrix(&[vec![2.0], vec![4.0], vec![8.0], vec![16.0]]);
        let map = nearest_neighbors(&x, TiePolicy::SmallestIndex, stream()).unwrap();
        assert_eq!(map.one_based(), vec![2, 1, 2, 3]);
        assert_eq!(map.ties_encountered(), 0);
    }

    #[test]
    fn two_points() {
        let x = matrix(&[vec![0.0], vec![1.0]]);
        let map = nearest_neighbors(&x, TiePolicy::SmallestIndex, stream()).unwrap();
        assert_eq!(map.one_based(), vec![2, 1]);
    }

    #[test]
    fn equidistant_tie_smallest_index() {
        let x = matrix(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]);
        let map = nearest_neighbors(&x, TiePolicy::SmallestIndex, stream()).unwrap();
        assert_eq!(map.one_based(), vec![2, 1, 1]);
        assert_eq!(map.ties_encountered(), 1);
    }

    #[test]
    fn single_point_rejected() {
        let x = matrix(&[vec![0.0]]);
        assert!(matches!(
            nearest_neighbors(&x, TiePolicy::SmallestIndex, stream()),
            Err(Error::InsufficientObservations { .. })
        ));
    }

    #[test]
    fn no_self_neighbors_with_duplicates() {
        let x = matrix(&[vec![1.0], vec![1.0], vec![1.0], vec![5.0]]);
        for policy in [TiePolicy::SmallestIndex, TiePolicy::SeededRandom] {
            let map = nearest_neighbors(&x, policy, stream()).unwrap();
            for (k, &n) in map.indices().iter().enumerate() {
                assert_ne!(n as usize, k);
            }
        }
    }

    #[test]
    fn seeded_random_is_reproducible() {
        let x = matrix(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ]);
        let a = nearest_neighbors(&x, TiePolicy::SeededRandom, stream()).unwrap();
        let b = nearest_neighbors(&x, TiePolicy::SeededRandom, stream()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.ties_encountered(), 4);
    }

    #[test]
    fn kd_and_brute_agree_on_ties() {
        // grid data forces many exact distance ties
        let mut rows = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                rows.push(vec![i as f64, j as f64]);
            }
        }
        let x = matrix(&rows);
        let kd = nearest_neighbors_kdtree(&x, TiePolicy::SeededRandom, stream()).unwrap();
        let brute = nearest_neighbors_brute(&x, TiePolicy::SeededRandom, stream()).unwrap();
        assert_eq!(kd, brute);
    }
}
