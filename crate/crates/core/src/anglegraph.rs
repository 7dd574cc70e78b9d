//! Simplex graph `G_S`: face-sharing simplices joined by angle-based
//! weights.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::cloud::{PointCloud, Simplex};
use crate::error::{Error, Result};
use crate::geometry::{angle_between, norm, orthonormal_basis, project_out, sub};
use crate::io::fmt_g17;
use crate::params::WeightMode;
use crate::simplex::SimplexSet;

/// Residuals shorter than this mean the apex lies in the face's span.
pub const APEX_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub i: u32,
    pub j: u32,
    pub w: f64,
}

#[derive(Clone, Debug)]
pub struct SimplexGraph {
    nodes: usize,
    edges: Vec<Edge>,
    mode: WeightMode,
}

/// Two simplices sharing a `(d-1)`-face.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Adjacency {
    pub i: usize,
    pub j: usize,
    pub face: SmallVec<[u32; 4]>,
}

impl SimplexGraph {
    pub fn from_edges(nodes: usize, edges: Vec<Edge>, mode: WeightMode) -> Self {
        debug_assert!(edges
            .iter()
            .all(|e| e.i != e.j && (e.i as usize) < nodes && (e.j as usize) < nodes));
        SimplexGraph { nodes, edges, mode }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    /// Induced subgraph on `keep` (ascending node ids); node `keep[k]`
    /// becomes node `k`.
    pub fn restrict(&self, keep: &[usize]) -> SimplexGraph {
        const GONE: u32 = u32::MAX;
        let mut map = vec![GONE; self.nodes];
        for (k, &old) in keep.iter().enumerate() {
            map[old] = k as u32;
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                let (a, b) = (map[e.i as usize], map[e.j as usize]);
                (a != GONE && b != GONE).then_some(Edge { i: a, j: b, w: e.w })
            })
            .collect();
        SimplexGraph {
            nodes: keep.len(),
            edges,
            mode: self.mode,
        }
    }

    /// Edge-list dump: `i j w` per line.
    pub fn write_dump(&self, path: &Path) -> Result<()> {
        crate::io::write_lines(path, &self.edges, |w, e| {
            writeln!(w, "{} {} {}", e.i, e.j, fmt_g17(e.w))
        })
    }
}

type FaceEntry = (SmallVec<[u32; 4]>, u32);

/// Every simplex listed under each of its faces, sorted by face.
fn face_entries(set: &SimplexSet) -> Vec<FaceEntry> {
    let mut entries: Vec<FaceEntry> = set
        .simplices()
        .par_iter()
        .enumerate()
        .flat_map_iter(|(idx, s)| {
            let v = s.vertices();
            (0..v.len()).map(move |skip| {
                let face: SmallVec<[u32; 4]> = v
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != skip)
                    .map(|(_, &x)| x)
                    .collect();
                (face, idx as u32)
            })
        })
        .collect();
    entries.par_sort_unstable();
    entries
}

/// Runs of entries sharing a face, with at least two members.
fn face_groups(entries: &[FaceEntry]) -> Vec<&[FaceEntry]> {
    entries
        .chunk_by(|a, b| a.0 == b.0)
        .filter(|g| g.len() > 1)
        .collect()
}

/// Node pairs `(i, j)`, `i < j`, sharing exactly `d` vertices.
fn adjacent_pairs(set: &SimplexSet) -> Vec<(u32, u32)> {
    let entries = face_entries(set);
    let mut pairs = Vec::new();
    for g in face_groups(&entries) {
        for (a, x) in g.iter().enumerate() {
            for y in &g[a + 1..] {
                pairs.push((x.1.min(y.1), x.1.max(y.1)));
            }
        }
    }
    pairs.par_sort_unstable();
    pairs
}

fn shared_face(a: &Simplex, b: &Simplex) -> SmallVec<[u32; 4]> {
    a.vertices()
        .iter()
        .copied()
        .filter(|&v| b.contains(v))
        .collect()
}

/// All unordered face-sharing pairs with their shared face.
pub fn find_adjacent_pairs(set: &SimplexSet) -> Vec<Adjacency> {
    adjacent_pairs(set)
        .into_iter()
        .map(|(i, j)| Adjacency {
            i: i as usize,
            j: j as usize,
            face: shared_face(set.get(i as usize), set.get(j as usize)),
        })
        .collect()
}

fn apex(s: &Simplex, face: &[u32]) -> u32 {
    *s.vertices()
        .iter()
        .find(|v| !face.contains(v))
        .expect("simplex has a vertex outside the shared face")
}

/// Face centroid and an orthonormal basis of the face's directions.
struct FaceFrame {
    centroid: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

impl FaceFrame {
    fn new(face: &[u32], cloud: &PointCloud) -> Result<Self> {
        let d = face.len();
        let mut centroid = vec![0.0; cloud.dim()];
        for &s in face {
            for (ck, x) in centroid.iter_mut().zip(cloud.point(s as usize)) {
                *ck += x;
            }
        }
        centroid.iter_mut().for_each(|x| *x /= d as f64);
        let basis = if d >= 2 {
            let spans: Vec<Vec<f64>> = face
                .iter()
                .map(|&s| sub(cloud.point(s as usize), &centroid))
                .collect();
            let q = orthonormal_basis(&spans);
            if q.len() + 1 < d {
                return Err(Error::Degenerate(format!(
                    "shared face {face:?} has rank {} < {}",
                    q.len(),
                    d - 1
                )));
            }
            q
        } else {
            Vec::new()
        };
        Ok(FaceFrame { centroid, basis })
    }

    /// Apex of `s` relative to the centroid, with the face's span
    /// projected out.
    fn residual(&self, s: &Simplex, face: &[u32], cloud: &PointCloud) -> Result<Vec<f64>> {
        let x = apex(s, face);
        let mut v = sub(cloud.point(x as usize), &self.centroid);
        project_out(&mut v, &self.basis);
        if norm(&v) < APEX_TOL {
            return Err(Error::Degenerate(format!(
                "apex {x} lies in the span of face {face:?}"
            )));
        }
        Ok(v)
    }
}

/// Dihedral angle in `[0, pi]` between two simplices sharing `face`: the
/// angle between the apex residuals after projecting out the face's span
/// (basepoint at the face centroid).
pub fn dihedral_angle(a: &Simplex, b: &Simplex, face: &[u32], cloud: &PointCloud) -> Result<f64> {
    let frame = FaceFrame::new(face, cloud)?;
    let (va, vb) = (
        frame.residual(a, face, cloud)?,
        frame.residual(b, face, cloud)?,
    );
    Ok(angle_between(&va, &vb))
}

/// Weight of an adjacency with dihedral angle `theta`, or `None` when the
/// mode leaves the pair unconnected.
pub fn edge_weight(theta: f64, mode: WeightMode, delta: f64) -> Option<f64> {
    match mode {
        WeightMode::OneSided => (theta >= FRAC_PI_2).then(|| (PI - theta).max(delta)),
        WeightMode::TwoSided => Some((PI - theta).min(theta).max(delta)),
    }
}

type PairAngles = Vec<(u32, u32, f64)>;

/// Dihedral angles for every adjacent pair, sorted by pair; degenerate
/// pairs are dropped with a warning. Each face's frame and each member's
/// residual are computed once per face.
pub fn pair_angles(set: &SimplexSet, cloud: &PointCloud) -> PairAngles {
    let entries = face_entries(set);
    let groups = face_groups(&entries);
    // Angles of each group and how many of its pairs were dropped.
    let per_group: Vec<(PairAngles, usize)> = groups
        .par_iter()
        .map(|g| {
            let face = &g[0].0;
            let pairs = g.len() * (g.len() - 1) / 2;
            let frame = match FaceFrame::new(face, cloud) {
                Ok(f) => f,
                Err(e) => {
                    log::debug!("dropping {pairs} pairs on face {face:?}: {e}");
                    return (Vec::new(), pairs);
                }
            };
            let residuals: Vec<Option<Vec<f64>>> = g
                .iter()
                .map(
                    |&(_, idx)| match frame.residual(set.get(idx as usize), face, cloud) {
                        Ok(v) => Some(v),
                        Err(e) => {
                            log::debug!("dropping pairs of simplex {idx}: {e}");
                            None
                        }
                    },
                )
                .collect();
            let mut out = Vec::with_capacity(pairs);
            for a in 0..g.len() {
                for b in a + 1..g.len() {
                    if let (Some(va), Some(vb)) = (&residuals[a], &residuals[b]) {
                        let (i, j) = (g[a].1, g[b].1);
                        out.push((i.min(j), i.max(j), angle_between(va, vb)));
                    }
                }
            }
            let dropped = pairs - out.len();
            (out, dropped)
        })
        .collect();
    let dropped: usize = per_group.iter().map(|(_, k)| k).sum();
    if dropped > 0 {
        log::warn!("dropped {dropped} degenerate simplex pairs");
    }
    let mut out: PairAngles = per_group.into_iter().flat_map(|(v, _)| v).collect();
    out.par_sort_unstable_by_key(|&(i, j, _)| (i, j));
    out
}

/// Weighted graph from precomputed pair angles.
pub fn graph_from_angles(
    nodes: usize,
    angles: &[(u32, u32, f64)],
    mode: WeightMode,
    delta: f64,
) -> SimplexGraph {
    let edges = angles
        .iter()
        .filter_map(|&(i, j, theta)| edge_weight(theta, mode, delta).map(|w| Edge { i, j, w }))
        .collect();
    SimplexGraph { nodes, edges, mode }
}

pub fn build_simplex_graph(
    set: &SimplexSet,
    cloud: &PointCloud,
    mode: WeightMode,
    delta: f64,
) -> SimplexGraph {
    graph_from_angles(set.len(), &pair_angles(set, cloud), mode, delta)
}
