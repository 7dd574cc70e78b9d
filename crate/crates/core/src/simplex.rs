//! Candidate simplices from the annular graph and the valid set `S`.

use std::path::Path;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::cloud::{PointCloud, Simplex};
use crate::error::{Error, Result};
use crate::geometry::{regular_simplex_volume, simplex_volume};
use crate::neighborhood::AnnularGraph;

/// Deduplicated valid simplices with cached edge-length extremes.
#[derive(Clone, Debug)]
pub struct SimplexSet {
    d: usize,
    simplices: Vec<Simplex>,
    min_edge: Vec<f64>,
    max_edge: Vec<f64>,
    pub filter: ValidityFilter,
}

/// Size and shape constraints a valid simplex must satisfy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidityFilter {
    pub d: usize,
    pub e: f64,
    pub q: f64,
    /// Volume distortion floor; `0` disables the volume check.
    pub r0: f64,
}

impl ValidityFilter {
    pub fn max_edge(&self) -> f64 {
        self.e / self.q
    }

    fn edge_ok(&self, len: f64) -> bool {
        len >= self.e && len <= self.max_edge()
    }

    /// Full check of one simplex; returns `(min edge, max edge)` when valid.
    pub fn check(&self, s: &Simplex, cloud: &PointCloud) -> Option<(f64, f64)> {
        let (lo, hi) = edge_extremes(s, cloud);
        if !(self.edge_ok(lo) && self.edge_ok(hi)) {
            return None;
        }
        if hi <= 0.0 || lo / hi < self.q {
            return None;
        }
        if self.r0 > 0.0 {
            let vol = volume(s, cloud);
            let v0 = regular_simplex_volume(self.d);
            let d = self.d as i32;
            if vol < self.r0 * v0 * self.e.powi(d) || vol > v0 * self.max_edge().powi(d) {
                return None;
            }
            if distortion2(s, cloud) < self.r0 {
                return None;
            }
        }
        Some((lo, hi))
    }
}

impl SimplexSet {
    /// Wraps an explicit list; every simplex must have `d + 1` vertices.
    pub fn from_simplices(
        mut simplices: Vec<Simplex>,
        cloud: &PointCloud,
        filter: ValidityFilter,
    ) -> Self {
        simplices.sort_unstable();
        simplices.dedup();
        assert!(simplices.iter().all(|s| s.dim() == filter.d));
        let (min_edge, max_edge) = simplices.iter().map(|s| edge_extremes(s, cloud)).unzip();
        SimplexSet {
            d: filter.d,
            simplices,
            min_edge,
            max_edge,
            filter,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn get(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn min_edge(&self, i: usize) -> f64 {
        self.min_edge[i]
    }

    pub fn max_edge(&self, i: usize) -> f64 {
        self.max_edge[i]
    }

    /// The simplices at positions `keep`, in that order.
    pub fn subset(&self, keep: &[usize]) -> SimplexSet {
        SimplexSet {
            d: self.d,
            simplices: keep.iter().map(|&i| self.simplices[i].clone()).collect(),
            min_edge: keep.iter().map(|&i| self.min_edge[i]).collect(),
            max_edge: keep.iter().map(|&i| self.max_edge[i]).collect(),
            filter: self.filter,
        }
    }

    /// Debug dump: one simplex per line, space-separated vertex indices.
    pub fn write_dump(&self, path: &Path) -> Result<()> {
        crate::io::write_lines(path, &self.simplices, |w, s| writeln!(w, "{s}"))
    }
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All `(d + 1)`-sets containing a point together with `d` of its annular
/// neighbors, canonicalized and deduplicated.
pub fn enumerate_candidates(graph: &AnnularGraph, d: usize) -> Vec<Simplex> {
    let mut out: Vec<Simplex> = (0..graph.len())
        .into_par_iter()
        .flat_map_iter(|x| {
            let nb = graph.neighbors(x);
            let mut local = Vec::new();
            for_each_combination(nb.len(), d, |c| {
                let mut v: SmallVec<[u32; 4]> = c.iter().map(|&k| nb[k]).collect();
                v.push(x as u32);
                v.sort_unstable();
                if v.windows(2).all(|w| w[0] < w[1]) {
                    local.push(Simplex::from_sorted(v));
                }
            });
            local
        })
        .collect();
    out.par_sort_unstable();
    out.dedup();
    out
}

fn edge_extremes(s: &Simplex, cloud: &PointCloud) -> (f64, f64) {
    let v = s.vertices();
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            let l = cloud.dist(v[a] as usize, v[b] as usize);
            lo = lo.min(l);
            hi = hi.max(l);
        }
    }
    (lo, hi)
}

/// Edge-length regularity: shortest edge over longest edge.
pub fn distortion1(s: &Simplex, cloud: &PointCloud) -> f64 {
    let (lo, hi) = edge_extremes(s, cloud);
    if hi == 0.0 {
        0.0
    } else {
        lo / hi
    }
}

fn volume(s: &Simplex, cloud: &PointCloud) -> f64 {
    let pts: SmallVec<[&[f64]; 4]> = s
        .vertices()
        .iter()
        .map(|&i| cloud.point(i as usize))
        .collect();
    simplex_volume(&pts)
}

/// Volume regularity: `vol_d / (V0 * min_edge^d)`.
pub fn distortion2(s: &Simplex, cloud: &PointCloud) -> f64 {
    let (lo, _) = edge_extremes(s, cloud);
    if lo == 0.0 {
        return 0.0;
    }
    let d = s.dim();
    volume(s, cloud) / (regular_simplex_volume(d) * lo.powi(d as i32))
}

/// The valid simplex set: candidates whose pairwise edges all lie in
/// `[e, e/q]`, with distortion at least `q` and, when `r0 > 0`, volume
/// distortion at least `r0`.
pub fn build_valid_set(
    graph: &AnnularGraph,
    cloud: &PointCloud,
    filter: ValidityFilter,
) -> Result<SimplexSet> {
    let d = filter.d;
    let mut found: Vec<(Simplex, f64, f64)> = (0..graph.len())
        .into_par_iter()
        .flat_map_iter(|x| {
            // Neighbors within reach of the center.
            let nb: Vec<u32> = graph
                .neighbors(x)
                .iter()
                .copied()
                .filter(|&j| filter.edge_ok(cloud.dist(x, j as usize)))
                .collect();
            let k = nb.len();
            let mut pair = vec![false; k * k];
            for a in 0..k {
                for b in a + 1..k {
                    let ok = filter.edge_ok(cloud.dist(nb[a] as usize, nb[b] as usize));
                    pair[a * k + b] = ok;
                    pair[b * k + a] = ok;
                }
            }
            let mut local = Vec::new();
            let mut chosen: SmallVec<[usize; 4]> = SmallVec::new();
            extend_cliques(k, d, 0, &pair, &mut chosen, &mut |c| {
                let mut v: SmallVec<[u32; 4]> = c.iter().map(|&a| nb[a]).collect();
                v.push(x as u32);
                v.sort_unstable();
                if v.windows(2).any(|w| w[0] == w[1]) {
                    return;
                }
                let s = Simplex::from_sorted(v);
                if let Some((lo, hi_e)) = filter.check(&s, cloud) {
                    local.push((s, lo, hi_e));
                }
            });
            local
        })
        .collect();
    found.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
    found.dedup_by(|a, b| a.0 == b.0);
    if found.is_empty() {
        return Err(Error::EmptyValidSet);
    }
    let mut simplices = Vec::with_capacity(found.len());
    let mut min_edge = Vec::with_capacity(found.len());
    let mut max_edge = Vec::with_capacity(found.len());
    for (s, lo, hi) in found {
        simplices.push(s);
        min_edge.push(lo);
        max_edge.push(hi);
    }
    Ok(SimplexSet {
        d,
        simplices,
        min_edge,
        max_edge,
        filter,
    })
}

/// Enumerates `size`-cliques of the compatibility matrix `pair` in
/// lexicographic order, pruning as soon as a pair fails.
fn extend_cliques(
    k: usize,
    size: usize,
    from: usize,
    pair: &[bool],
    chosen: &mut SmallVec<[usize; 4]>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if chosen.len() == size {
        emit(chosen);
        return;
    }
    for a in from..k {
        if chosen.iter().all(|&c| pair[c * k + a]) {
            chosen.push(a);
            extend_cliques(k, size, a + 1, pair, chosen, emit);
            chosen.pop();
        }
    }
}
