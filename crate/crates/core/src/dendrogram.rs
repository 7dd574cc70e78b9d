//! Exact largest-angle path distances as a union-find merge dendrogram.
//!
//! Sweeping the simplex graph's edges in ascending weight order and
//! recording every successful union yields the single-linkage dendrogram of
//! the minimax path metric: the distance between two simplices is the
//! weight of the event that first puts them in one component. The union
//! forest is kept without path compression (union by size), so each node's
//! parent link, stamped with the event that created it, answers distance
//! and threshold queries in `O(log n)`.

use std::path::Path;

use crate::anglegraph::SimplexGraph;
use crate::error::{Error, Result};
use crate::io::fmt_g17;

const ROOT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MergeEvent {
    pub w: f64,
    /// Root of the first endpoint's component before the merge.
    pub a: u32,
    /// Root of the second endpoint's component before the merge.
    pub b: u32,
    /// Size of the merged component.
    pub size: u32,
    /// Graph edge that caused the merge (`i` on the `a` side).
    pub i: u32,
    pub j: u32,
}

impl MergeEvent {
    /// Root that survives the merge.
    pub fn into_root(&self, parent: &[u32]) -> u32 {
        if parent[self.a as usize] == self.b {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Clone, Debug)]
pub struct MergeDendrogram {
    events: Vec<MergeEvent>,
    parent: Vec<u32>,
    /// Index of the event that attached a node to its parent.
    attach: Vec<u32>,
}

/// Kruskal sweep over `graph`. Ties in weight are broken by `(i, j)`.
pub fn build_dendrogram(graph: &SimplexGraph) -> MergeDendrogram {
    let n = graph.node_count();
    let mut edges: Vec<(f64, u32, u32)> = graph
        .edges()
        .iter()
        .map(|e| (e.w, e.i.min(e.j), e.i.max(e.j)))
        .collect();
    edges.sort_unstable_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut parent = vec![ROOT; n];
    let mut attach = vec![ROOT; n];
    let mut size = vec![1u32; n];
    let mut events = Vec::with_capacity(n.saturating_sub(1));
    let root = |parent: &[u32], mut x: u32| {
        while parent[x as usize] != ROOT {
            x = parent[x as usize];
        }
        x
    };
    for (w, i, j) in edges {
        let (ra, rb) = (root(&parent, i), root(&parent, j));
        if ra == rb {
            continue;
        }
        let merged = size[ra as usize] + size[rb as usize];
        let (big, small) = if size[rb as usize] > size[ra as usize] {
            (rb, ra)
        } else {
            (ra, rb)
        };
        parent[small as usize] = big;
        attach[small as usize] = events.len() as u32;
        size[big as usize] = merged;
        events.push(MergeEvent {
            w,
            a: ra,
            b: rb,
            size: merged,
            i,
            j,
        });
        if events.len() + 1 == n {
            break;
        }
    }
    MergeDendrogram {
        events,
        parent,
        attach,
    }
}

impl MergeDendrogram {
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn events(&self) -> &[MergeEvent] {
        &self.events
    }

    /// Parent links of the union forest (`u32::MAX` for roots).
    pub fn parents(&self) -> &[u32] {
        &self.parent
    }

    /// Number of connected components of the underlying graph.
    pub fn component_count(&self) -> usize {
        self.node_count() - self.events.len()
    }

    /// Minimax path distance: `0` on the diagonal, `+inf` across
    /// components.
    pub fn query(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.node_count();
        for id in [i, j] {
            if id >= n {
                return Err(Error::OutOfRange { id, len: n });
            }
        }
        Ok(self.distance(i, j))
    }

    pub(crate) fn distance(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (mut x, mut y) = (i as u32, j as u32);
        let mut last = 0u32;
        while x != y {
            let (ax, ay) = (self.attach[x as usize], self.attach[y as usize]);
            if ax == ROOT && ay == ROOT {
                return f64::INFINITY;
            }
            if ax < ay {
                last = ax;
                x = self.parent[x as usize];
            } else {
                last = ay;
                y = self.parent[y as usize];
            }
        }
        self.events[last as usize].w
    }

    /// Component representative of `i` in the subgraph of edges with
    /// weight `<= t`.
    pub fn root_at(&self, i: usize, t: f64) -> usize {
        let mut x = i as u32;
        loop {
            let a = self.attach[x as usize];
            if a == ROOT || self.events[a as usize].w > t {
                return x as usize;
            }
            x = self.parent[x as usize];
        }
    }

    /// Component ids (compacted in order of first appearance) of the
    /// subgraph with weights `<= t`.
    pub fn components_at(&self, t: f64) -> Vec<usize> {
        let n = self.node_count();
        let mut id = vec![usize::MAX; n];
        let mut next = 0;
        (0..n)
            .map(|i| {
                let r = self.root_at(i, t);
                if id[r] == usize::MAX {
                    id[r] = next;
                    next += 1;
                }
                id[r]
            })
            .collect()
    }

    /// Dump: one event per line, `w rootA rootB size`.
    pub fn write_dump(&self, path: &Path) -> Result<()> {
        crate::io::write_lines(path, &self.events, |w, e| {
            writeln!(w, "{} {} {} {}", fmt_g17(e.w), e.a, e.b, e.size)
        })
    }
}

/// Distance from each node to its `kappa`-th nearest other node under the
/// minimax metric: the weight of the event at which its component first
/// reaches `kappa + 1` members, `+inf` if it never does.
pub fn knn_lapd(dendrogram: &MergeDendrogram, kappa: usize) -> Vec<f64> {
    let n = dendrogram.node_count();
    let mut out = vec![f64::INFINITY; n];
    let target = kappa as u32 + 1;
    let mut size = vec![1u32; n];
    // Members of components still below the target size.
    let mut pending: Vec<Vec<u32>> = (0..n as u32).map(|i| vec![i]).collect();
    for e in dendrogram.events() {
        let (a, b) = (e.a as usize, e.b as usize);
        let into = e.into_root(dendrogram.parents()) as usize;
        let other = if into == a { b } else { a };
        if e.size >= target {
            for r in [a, b] {
                if size[r] < target {
                    for m in pending[r].drain(..) {
                        out[m as usize] = e.w;
                    }
                }
            }
        } else {
            let moved = std::mem::take(&mut pending[other]);
            pending[into].extend(moved);
        }
        size[into] = e.size;
    }
    out
}

/// Component counts of the dendrogram sliced at `k` thresholds.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleProfile {
    pub scales: Vec<f64>,
    /// Nontrivial-component count at each scale.
    pub counts: Vec<usize>,
    /// Components of this size or smaller are trivial.
    pub trivial_size: usize,
}

impl ScaleProfile {
    /// Per-simplex component ids at scale `index`.
    pub fn labels(&self, dendrogram: &MergeDendrogram, index: usize) -> Vec<usize> {
        dendrogram.components_at(self.scales[index])
    }
}

/// `k` thresholds spaced geometrically from `delta` to `pi/2` inclusive.
pub fn geometric_scales(k: usize, delta: f64) -> Vec<f64> {
    let top = std::f64::consts::FRAC_PI_2;
    let ratio = (top / delta).ln();
    (0..k)
        .map(|i| {
            if i + 1 == k {
                top
            } else {
                delta * (ratio * i as f64 / (k - 1) as f64).exp()
            }
        })
        .collect()
}

/// `max(1, ceil(nu * n))`.
pub fn trivial_size(nu: f64, n: usize) -> usize {
    ((nu * n as f64).ceil() as usize).max(1)
}

/// Counts components larger than `max(1, ceil(nu * n))` at each of `k`
/// geometric scales.
pub fn scale_profile(dendrogram: &MergeDendrogram, k: usize, delta: f64, nu: f64) -> ScaleProfile {
    profile_at(dendrogram, geometric_scales(k, delta), nu)
}

/// Like [`scale_profile`] with explicit ascending thresholds.
pub fn profile_at(dendrogram: &MergeDendrogram, scales: Vec<f64>, nu: f64) -> ScaleProfile {
    let n = dendrogram.node_count();
    let floor = trivial_size(nu, n) as u32;
    let mut size = vec![1u32; n];
    let mut count = if floor < 1 { n } else { 0 };
    let mut counts = Vec::with_capacity(scales.len());
    let mut events = dendrogram.events().iter().peekable();
    for &t in &scales {
        while let Some(e) = events.next_if(|e| e.w <= t) {
            let (a, b) = (e.a as usize, e.b as usize);
            count -= (size[a] > floor) as usize + (size[b] > floor) as usize;
            count += (e.size > floor) as usize;
            let into = e.into_root(dendrogram.parents()) as usize;
            size[into] = e.size;
        }
        counts.push(count);
    }
    ScaleProfile {
        scales,
        counts,
        trivial_size: floor as usize,
    }
}
