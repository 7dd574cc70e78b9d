//! Annular locality graph over the points.
//!
//! Each point is linked to its `B` nearest points among those strictly
//! farther than `e`. Queries run against an exact k-d tree.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::cloud::{dist2, PointCloud};

const LEAF_SIZE: usize = 16;

#[derive(Debug)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { left: usize, right: usize },
}

/// Exact k-d tree over the rows of a [`PointCloud`].
#[derive(Debug)]
pub struct KdTree<'a> {
    cloud: &'a PointCloud,
    order: Vec<usize>,
    nodes: Vec<Node>,
    /// Per-node bounding boxes, `lo` then `hi`, `2 * dim` values each.
    boxes: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq)]
struct Candidate {
    d2: f64,
    idx: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d2
            .total_cmp(&other.d2)
            .then_with(|| self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> KdTree<'a> {
    pub fn new(cloud: &'a PointCloud) -> Self {
        Self::with_subset(cloud, (0..cloud.len()).collect())
    }

    /// Indexes only the points listed in `subset`.
    pub fn with_subset(cloud: &'a PointCloud, subset: Vec<usize>) -> Self {
        let mut tree = KdTree {
            cloud,
            order: subset,
            nodes: Vec::new(),
            boxes: Vec::new(),
        };
        if !tree.order.is_empty() {
            let n = tree.order.len();
            tree.build(0, n);
        }
        tree
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        let dim = self.cloud.dim();
        let (lo, hi) = self.bounds(start, end);
        self.boxes.extend_from_slice(&lo);
        self.boxes.extend_from_slice(&hi);
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let split = (0..dim)
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
            .unwrap_or(0);
        let mid = start + (end - start) / 2;
        let cloud = self.cloud;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            cloud.point(a)[split].total_cmp(&cloud.point(b)[split])
        });
        self.nodes.push(Node::Leaf { start, end });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id] = Node::Split { left, right };
        id
    }

    fn bounds(&self, start: usize, end: usize) -> (Vec<f64>, Vec<f64>) {
        let dim = self.cloud.dim();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &i in &self.order[start..end] {
            for (k, &v) in self.cloud.point(i).iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        (lo, hi)
    }

    /// Smallest and largest squared distance from `query` to the box of
    /// `node`.
    fn box_range2(&self, node: usize, query: &[f64]) -> (f64, f64) {
        let dim = self.cloud.dim();
        let b = &self.boxes[2 * dim * node..2 * dim * (node + 1)];
        let (lo, hi) = b.split_at(dim);
        let (mut near, mut far) = (0.0, 0.0);
        for k in 0..dim {
            let (a, z) = (lo[k] - query[k], query[k] - hi[k]);
            let gap = a.max(z).max(0.0);
            let reach = a.abs().max(z.abs());
            near += gap * gap;
            far += reach * reach;
        }
        (near, far)
    }

    /// The `k` nearest indexed points to `query`, as `(squared distance,
    /// index)` ascending with ties broken by index. `skip` is excluded, and
    /// when `exclude_within2` is set only points with squared distance
    /// strictly greater than it are eligible.
    pub fn knn(
        &self,
        query: &[f64],
        k: usize,
        skip: Option<usize>,
        exclude_within2: Option<f64>,
    ) -> Vec<(f64, usize)> {
        if k == 0 || self.nodes.is_empty() {
            return Vec::new();
        }
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.search(0, query, k, skip, exclude_within2, &mut heap);
        let mut out: Vec<_> = heap.into_iter().map(|c| (c.d2, c.idx)).collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        out
    }

    fn search(
        &self,
        node: usize,
        query: &[f64],
        k: usize,
        skip: Option<usize>,
        floor2: Option<f64>,
        heap: &mut BinaryHeap<Candidate>,
    ) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &idx in &self.order[start..end] {
                    if Some(idx) == skip {
                        continue;
                    }
                    let d2 = dist2(query, self.cloud.point(idx));
                    if floor2.is_some_and(|f| d2 <= f) {
                        continue;
                    }
                    let c = Candidate { d2, idx };
                    if heap.len() < k {
                        heap.push(c);
                    } else if c < *heap.peek().expect("full heap") {
                        heap.pop();
                        heap.push(c);
                    }
                }
            }
            Node::Split { left, right, .. } => {
                let mut kids = [
                    (left, self.box_range2(left, query)),
                    (right, self.box_range2(right, query)),
                ];
                if kids[1].1 .0 < kids[0].1 .0 {
                    kids.swap(0, 1);
                }
                for (child, (near, far)) in kids {
                    if floor2.is_some_and(|f| far <= f) {
                        continue;
                    }
                    if heap.len() == k && near > heap.peek().expect("full heap").d2 {
                        continue;
                    }
                    self.search(child, query, k, skip, floor2, heap);
                }
            }
        }
    }
}

/// Directed annular kNN graph `G_X(e, B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnularGraph {
    neighbors: Vec<Vec<u32>>,
    e: f64,
    b: usize,
}

impl AnnularGraph {
    /// Builds the graph from explicit adjacency lists (used for testing
    /// simplex enumeration on hand-made graphs).
    pub fn from_lists(neighbors: Vec<Vec<u32>>, e: f64, b: usize) -> Self {
        AnnularGraph { neighbors, e, b }
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[i]
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn b(&self) -> usize {
        self.b
    }
}

/// For every point, the `b` nearest points at distance strictly greater
/// than `e` (ties by smaller index).
pub fn build_annular_graph(cloud: &PointCloud, e: f64, b: usize) -> AnnularGraph {
    let tree = KdTree::new(cloud);
    let e2 = e * e;
    let neighbors = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            tree.knn(cloud.point(i), b, Some(i), Some(e2))
                .into_iter()
                .map(|(_, j)| j as u32)
                .collect()
        })
        .collect();
    AnnularGraph { neighbors, e, b }
}
