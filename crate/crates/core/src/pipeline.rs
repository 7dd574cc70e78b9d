//! End-to-end clustering: simplices, angle graph, denoising, recomputed
//! path distances, cluster count, cut and point labels.

use std::time::Instant;

use serde::Serialize;

use crate::anglegraph::{graph_from_angles, pair_angles, SimplexGraph};
use crate::cloud::PointCloud;
use crate::dendrogram::{
    build_dendrogram, knn_lapd, scale_profile, trivial_size, MergeDendrogram, ScaleProfile,
};
use crate::error::{Error, Result};
use crate::eval::{gap_report, GapReport};
use crate::io::json_f64;
use crate::neighborhood::{build_annular_graph, KdTree};
use crate::params::{ClusterCount, Eta, Params, Settings};
use crate::simplex::{build_valid_set, SimplexSet, ValidityFilter};

/// Point-level path distances are only offered up to this many points.
pub const NLAPD_LIMIT: usize = 2000;

/// Elbow of a sorted curve: normalizes both axes of the finite values to
/// `[0, 1]`, finds the index `i` farthest from the chord, and returns the
/// midpoint between the `i`-th and next value (the `i`-th if it is last).
/// Everything up to the elbow stays below the threshold.
pub fn default_eta(values: &[f64]) -> Result<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return Err(Error::AllInfinite);
    }
    if v.len() < 3 {
        return Err(Error::TooFewValues(v.len()));
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let (lo, hi) = (v[0], v[n - 1]);
    if hi == lo {
        return Ok(lo);
    }
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, &x) in v.iter().enumerate() {
        let gap = (i as f64 / (n - 1) as f64 - (x - lo) / (hi - lo)).abs();
        if gap > best.1 {
            best = (i, gap);
        }
    }
    let i = best.0;
    Ok(if i + 1 < n {
        0.5 * (v[i] + v[i + 1])
    } else {
        v[i]
    })
}

/// Indices with `knn <= eta`.
pub fn denoise(knn: &[f64], eta: f64) -> Result<Vec<usize>> {
    let keep: Vec<usize> = (0..knn.len()).filter(|&i| knn[i] <= eta).collect();
    if keep.is_empty() {
        return Err(Error::NoSurvivors { eta });
    }
    Ok(keep)
}

/// Persistence estimate of the cluster count from per-scale counts.
///
/// Returns `m_hat` and the histogram `c` with `c[j]` = number of scales at
/// which exactly `j` nontrivial components exist. Ties go to the larger `j`.
pub fn estimate_m(counts: &[usize]) -> Result<(usize, Vec<usize>)> {
    let top = counts.iter().copied().max().unwrap_or(0);
    let mut c = vec![0usize; top + 1];
    for &k in counts {
        c[k] += 1;
    }
    let m = (1..=top)
        .max_by(|&a, &b| c[a].cmp(&c[b]).then(a.cmp(&b)))
        .ok_or(Error::NoClusters)?;
    Ok((m, c))
}

/// A flat clustering read off a dendrogram.
#[derive(Clone, Debug, PartialEq)]
pub struct Cut {
    /// Cluster per node; `None` for nodes whose component never reaches a
    /// cluster.
    pub labels: Vec<Option<usize>>,
    pub threshold: f64,
    pub clusters: usize,
    /// Whether exactly the requested number of nontrivial components was
    /// found.
    pub exact: bool,
}

/// Cuts the dendrogram into `m` clusters.
///
/// Only thresholds that fall between distinct event weights are
/// considered. Scanning from the fully merged end, the first maximal run of
/// such states with exactly `m` nontrivial components is located and its
/// smallest threshold is used; failing that, the count closest to `m` from
/// above, then from below. Nontrivial components become clusters, ordered
/// by decreasing size and then by smallest member. Every other node joins
/// the first cluster its component merges into later in the sweep.
pub fn cut(dendrogram: &MergeDendrogram, m: usize, nu: f64) -> Result<Cut> {
    let n = dendrogram.node_count();
    let events = dendrogram.events();
    let floor = trivial_size(nu, n) as u32;
    // counts[s]: nontrivial components after the first s events.
    let mut counts = Vec::with_capacity(events.len() + 1);
    let mut size = vec![1u32; n];
    let mut count = 0usize;
    counts.push(count);
    for e in events {
        let (a, b) = (e.a as usize, e.b as usize);
        count -= (size[a] > floor) as usize + (size[b] > floor) as usize;
        count += (e.size > floor) as usize;
        size[e.into_root(dendrogram.parents()) as usize] = e.size;
        counts.push(count);
    }
    let states: Vec<usize> = (0..=events.len())
        .filter(|&s| s == 0 || s == events.len() || events[s].w != events[s - 1].w)
        .collect();
    let lowest_of_top_run = |target: usize| -> Option<usize> {
        let top = states.iter().rposition(|&s| counts[s] == target)?;
        let mut k = top;
        while k > 0 && counts[states[k - 1]] == target {
            k -= 1;
        }
        Some(states[k])
    };
    let (state, exact) = match lowest_of_top_run(m) {
        Some(s) => (s, true),
        None => {
            let above = states.iter().map(|&s| counts[s]).filter(|&c| c > m).min();
            let below = states.iter().map(|&s| counts[s]).filter(|&c| c < m).max();
            let target = above
                .or(below)
                .filter(|&c| c > 0)
                .ok_or(Error::NoClusters)?;
            log::warn!("no cut yields {m} clusters; using {target}");
            (lowest_of_top_run(target).expect("count exists"), false)
        }
    };
    let threshold = if state == 0 { 0.0 } else { events[state - 1].w };

    let roots: Vec<usize> = (0..n).map(|i| dendrogram.root_at(i, threshold)).collect();
    let mut sizes = vec![0u32; n];
    let mut first = vec![usize::MAX; n];
    for (i, &r) in roots.iter().enumerate() {
        sizes[r] += 1;
        first[r] = first[r].min(i);
    }
    let mut clusters: Vec<usize> = (0..n).filter(|&r| sizes[r] > floor).collect();
    clusters.sort_by(|&x, &y| sizes[y].cmp(&sizes[x]).then(first[x].cmp(&first[y])));
    let mut labels: Vec<Option<usize>> = vec![None; n];
    for (k, &r) in clusters.iter().enumerate() {
        labels[r] = Some(k);
    }
    for i in 0..n {
        labels[i] = labels[roots[i]];
    }
    let mut pending: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, &r) in roots.iter().enumerate() {
        if labels[r].is_none() {
            pending[r].push(i as u32);
        }
    }
    // A component is labeled iff its root is.
    for e in &events[state..] {
        let (a, b) = (e.a as usize, e.b as usize);
        let into = e.into_root(dendrogram.parents()) as usize;
        let l = match (labels[a], labels[b]) {
            (Some(_), None) => labels[e.i as usize],
            (None, Some(_)) => labels[e.j as usize],
            (None, None) => {
                let other = if into == a { b } else { a };
                let moved = std::mem::take(&mut pending[other]);
                pending[into].extend(moved);
                continue;
            }
            (Some(_), Some(_)) => continue,
        };
        for r in [a, b] {
            for p in pending[r].drain(..) {
                labels[p as usize] = l;
            }
        }
    }
    Ok(Cut {
        labels,
        threshold,
        clusters: clusters.len(),
        exact,
    })
}

/// Point labels by majority over the labeled simplices containing each
/// point (ties to the smaller label); points in no labeled simplex copy
/// their nearest labeled point.
pub fn majority_vote(
    labels: &[Option<usize>],
    set: &SimplexSet,
    cloud: &PointCloud,
) -> Result<Vec<usize>> {
    let n = cloud.len();
    let mut tally: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for (s, l) in set.simplices().iter().zip(labels) {
        let Some(l) = *l else { continue };
        for &p in s.vertices() {
            let t = &mut tally[p as usize];
            match t.iter_mut().find(|(x, _)| *x == l) {
                Some((_, c)) => *c += 1,
                None => t.push((l, 1)),
            }
        }
    }
    let mut out: Vec<Option<usize>> = tally
        .iter()
        .map(|t| {
            t.iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .map(|&(l, _)| l)
        })
        .collect();
    let labeled: Vec<usize> = (0..n).filter(|&i| out[i].is_some()).collect();
    if labeled.is_empty() {
        return Err(Error::NoLabels);
    }
    if labeled.len() < n {
        let tree = KdTree::with_subset(cloud, labeled);
        let fill: Vec<(usize, usize)> = (0..n)
            .filter(|&i| out[i].is_none())
            .map(|i| {
                let nn = tree.knn(cloud.point(i), 1, None, None);
                (i, out[nn[0].1].expect("labeled"))
            })
            .collect();
        for (i, l) in fill {
            out[i] = Some(l);
        }
    }
    Ok(out
        .into_iter()
        .map(|l| l.expect("every point labeled"))
        .collect())
}

/// Point-to-point path distance: the smallest simplex distance between a
/// simplex containing `i` and one containing `j`. Quadratic in the number
/// of incident simplices, so only allowed for small clouds.
pub fn nlapd(
    dendrogram: &MergeDendrogram,
    set: &SimplexSet,
    n_points: usize,
    i: usize,
    j: usize,
) -> Result<f64> {
    if n_points > NLAPD_LIMIT {
        return Err(Error::TooLarge {
            n: n_points,
            limit: NLAPD_LIMIT,
        });
    }
    let cover = |p: usize| -> Result<Vec<usize>> {
        let v: Vec<usize> = (0..set.len())
            .filter(|&s| set.get(s).contains(p as u32))
            .collect();
        if v.is_empty() {
            Err(Error::Uncovered(p))
        } else {
            Ok(v)
        }
    };
    let (a, b) = (cover(i)?, cover(j)?);
    let mut best = f64::INFINITY;
    for &x in &a {
        for &y in &b {
            best = best.min(dendrogram.distance(x, y));
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageTiming {
    pub stage: &'static str,
    pub ms: f64,
}

/// Summary of a clustering run. Contains no timing data, so identical
/// inputs give identical documents.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterResult {
    pub point_labels: Vec<usize>,
    /// Label per surviving simplex, in the order of `survivor_ids`.
    pub simplex_labels: Vec<usize>,
    pub m_hat: usize,
    /// Count from the persistence estimate, whether or not it was used.
    pub m_estimated: Option<usize>,
    pub simplex_count: usize,
    pub survivors: usize,
    pub survivor_ids: Vec<usize>,
    pub removed: Vec<usize>,
    #[serde(with = "json_f64")]
    pub e: f64,
    pub kappa: usize,
    #[serde(with = "json_f64")]
    pub eta: f64,
    #[serde(with = "json_f64")]
    pub cut_threshold: f64,
    pub cut_exact: bool,
    /// Scales per nontrivial-component count, indexed by the count.
    pub persistence: Vec<usize>,
    pub scale_counts: Vec<usize>,
    /// Min, quartiles and max of the kNN distances before denoising.
    #[serde(serialize_with = "json_f64::seq::serialize")]
    pub knn_quantiles: Vec<f64>,
    #[serde(with = "json_f64::opt")]
    pub wlapd: Option<f64>,
    #[serde(with = "json_f64::opt")]
    pub blapd: Option<f64>,
    pub gap_before: Option<GapReport>,
    pub gap_after: Option<GapReport>,
}

/// Everything a run computes, for inspection.
#[derive(Clone, Debug)]
pub struct Run {
    pub params: Params,
    pub settings: Settings,
    pub set: SimplexSet,
    /// `(i, j, dihedral angle)` for every adjacent pair of `set`.
    pub angles: Vec<(u32, u32, f64)>,
    pub graph: SimplexGraph,
    pub dendrogram: MergeDendrogram,
    pub knn: Vec<f64>,
    pub survivors: Vec<usize>,
    pub dns_set: SimplexSet,
    pub dns_graph: SimplexGraph,
    pub dns_dendrogram: MergeDendrogram,
    pub profile: ScaleProfile,
    pub cut: Cut,
    pub result: ClusterResult,
    pub timings: Vec<StageTiming>,
}

struct Clock {
    last: Instant,
    out: Vec<StageTiming>,
}

impl Clock {
    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        let ms = (now - self.last).as_secs_f64() * 1e3;
        log::info!("{stage}: {ms:.1} ms");
        self.out.push(StageTiming { stage, ms });
        self.last = now;
    }
}

/// Clusters `cloud`; see [`run_detailed`].
pub fn run(cloud: &PointCloud, params: &Params) -> Result<ClusterResult> {
    run_detailed(cloud, params).map(|r| r.result)
}

/// Runs every stage and keeps the intermediates.
pub fn run_detailed(cloud: &PointCloud, params: &Params) -> Result<Run> {
    let mut clock = Clock {
        last: Instant::now(),
        out: Vec::new(),
    };
    let params = params
        .resolve_for(cloud)
        .map_err(|e| e.in_stage("resolve"))?;
    let st = params.settings().map_err(|e| e.in_stage("resolve"))?;
    cloud
        .check_for_dimension(st.d)
        .map_err(|e| e.in_stage("resolve"))?;
    clock.lap("resolve");

    let annular = build_annular_graph(cloud, st.e, st.b);
    clock.lap("neighborhood");

    let filter = ValidityFilter {
        d: st.d,
        e: st.e,
        q: st.q,
        r0: st.r0,
    };
    let set = build_valid_set(&annular, cloud, filter).map_err(|e| e.in_stage("simplices"))?;
    drop(annular);
    clock.lap("simplices");

    let angles = pair_angles(&set, cloud);
    let graph = graph_from_angles(set.len(), &angles, st.weight_mode, st.delta);
    clock.lap("angles");

    let dendrogram = build_dendrogram(&graph);
    clock.lap("dendrogram");

    let knn = knn_lapd(&dendrogram, st.kappa);
    let eta = match st.eta {
        Eta::Fixed(eta) => eta,
        Eta::Auto => default_eta(&knn).map_err(|e| e.in_stage("denoise"))?,
    };
    let survivors = denoise(&knn, eta).map_err(|e| e.in_stage("denoise"))?;
    let dns_set = set.subset(&survivors);
    clock.lap("denoise");

    let dns_graph = graph.restrict(&survivors);
    let dns_dendrogram = build_dendrogram(&dns_graph);
    clock.lap("recompute");

    let profile = scale_profile(&dns_dendrogram, st.k, st.delta, st.nu);
    let estimate = estimate_m(&profile.counts);
    let (m_estimated, persistence) = match &estimate {
        Ok((m, c)) => (Some(*m), c.clone()),
        Err(_) => (None, vec![profile.counts.len()]),
    };
    let m = match st.m {
        ClusterCount::Fixed(m) => m,
        ClusterCount::Auto => estimate.map_err(|e| e.in_stage("estimate"))?.0,
    };
    clock.lap("estimate");

    let cut = cut(&dns_dendrogram, m, st.nu).map_err(|e| e.in_stage("cut"))?;
    clock.lap("cut");

    let votes = majority_vote(&cut.labels, &dns_set, cloud).map_err(|e| e.in_stage("vote"))?;
    let (point_labels, simplex_labels) = finalize_labels(&cut.labels, votes, &dns_set);
    let m_hat = point_labels.iter().max().map_or(0, |&l| l + 1);
    clock.lap("vote");

    let (gap_before, gap_after) = match cloud.truth() {
        Some(truth) => (
            Some(gap_report(&graph, &dendrogram, &set, truth)),
            Some(gap_report(&dns_graph, &dns_dendrogram, &dns_set, truth)),
        ),
        None => (None, None),
    };
    clock.lap("diagnostics");

    let mut keep = vec![false; set.len()];
    survivors.iter().for_each(|&i| keep[i] = true);
    let result = ClusterResult {
        point_labels,
        simplex_labels,
        m_hat,
        m_estimated,
        simplex_count: set.len(),
        survivors: survivors.len(),
        survivor_ids: survivors.clone(),
        removed: (0..set.len()).filter(|&i| !keep[i]).collect(),
        e: st.e,
        kappa: st.kappa,
        eta,
        cut_threshold: cut.threshold,
        cut_exact: cut.exact,
        persistence,
        scale_counts: profile.counts.clone(),
        knn_quantiles: quantiles(&knn),
        wlapd: gap_after.as_ref().map(|g| g.wlapd),
        blapd: gap_after.as_ref().map(|g| g.blapd),
        gap_before,
        gap_after,
    };
    Ok(Run {
        params,
        settings: st,
        set,
        angles,
        graph,
        dendrogram,
        knn,
        survivors,
        dns_set,
        dns_graph,
        dns_dendrogram,
        profile,
        cut,
        result,
        timings: clock.out,
    })
}

/// Compacts point labels to `0..m` (keeping their relative order) and
/// labels every surviving simplex: clustered simplices keep their cluster
/// when it survived the vote, the rest take the majority of their points.
fn finalize_labels(
    cut: &[Option<usize>],
    votes: Vec<usize>,
    set: &SimplexSet,
) -> (Vec<usize>, Vec<usize>) {
    let top = votes.iter().max().map_or(0, |&l| l + 1);
    let mut remap = vec![usize::MAX; top];
    votes.iter().for_each(|&l| remap[l] = 0);
    let mut next = 0;
    for r in remap.iter_mut().filter(|r| **r == 0) {
        *r = next;
        next += 1;
    }
    let points: Vec<usize> = votes.iter().map(|&l| remap[l]).collect();
    let simplices = set
        .simplices()
        .iter()
        .zip(cut)
        .map(|(s, l)| match l.and_then(|l| remap.get(l).copied()) {
            Some(l) if l != usize::MAX => l,
            _ => {
                let mut c = vec![0usize; next];
                s.vertices()
                    .iter()
                    .for_each(|&p| c[points[p as usize]] += 1);
                (0..next)
                    .max_by(|&a, &b| c[a].cmp(&c[b]).then(b.cmp(&a)))
                    .unwrap_or(0)
            }
        })
        .collect();
    (points, simplices)
}

/// Nearest-rank min, quartiles and max; infinities sort last.
fn quantiles(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|p| s[((p * (n - 1) as f64).round() as usize).min(n - 1)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anglegraph::Edge;
    use crate::params::WeightMode;

    fn dendro(n: usize, edges: &[(u32, u32, f64)]) -> MergeDendrogram {
        build_dendrogram(&SimplexGraph::from_edges(
            n,
            edges.iter().map(|&(i, j, w)| Edge { i, j, w }).collect(),
            WeightMode::OneSided,
        ))
    }

    #[test]
    fn elbow_separates_a_step() {
        let mut v = vec![0.01; 90];
        v.extend([1.0; 10]);
        let eta = default_eta(&v).unwrap();
        assert!(eta > 0.01 && eta < 1.0);
        assert_eq!(denoise(&v, eta).unwrap().len(), 90);
    }

    #[test]
    fn elbow_flat_and_degenerate() {
        assert_eq!(default_eta(&[0.3; 5]).unwrap(), 0.3);
        assert!(matches!(
            default_eta(&[f64::INFINITY; 4]),
            Err(Error::AllInfinite)
        ));
        assert!(matches!(
            default_eta(&[1.0, 2.0]),
            Err(Error::TooFewValues(2))
        ));
    }

    #[test]
    fn denoise_examples() {
        assert_eq!(denoise(&[0.1, 0.1, 0.9], 0.5).unwrap(), vec![0, 1]);
        assert_eq!(
            denoise(&[0.1, f64::INFINITY], f64::INFINITY).unwrap(),
            vec![0, 1]
        );
        assert!(denoise(&[0.9], 0.5).is_err());
    }

    #[test]
    fn persistence_examples() {
        assert_eq!(estimate_m(&[0, 6, 5, 3, 2, 2, 2, 1]).unwrap().0, 2);
        assert_eq!(estimate_m(&[3, 3, 3, 3]).unwrap().0, 3);
        assert_eq!(estimate_m(&[5, 4, 2, 2, 2, 1]).unwrap().0, 2);
        assert_eq!(estimate_m(&[2, 2, 1, 1]).unwrap().0, 2);
        assert!(estimate_m(&[0, 0]).is_err());
    }

    fn two_cliques() -> MergeDendrogram {
        let mut edges = Vec::new();
        for base in [0u32, 4] {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((base + i, base + j, 1e-8));
                }
            }
        }
        edges.push((3, 4, 0.8));
        dendro(8, &edges)
    }

    #[test]
    fn cut_two_cliques() {
        let c = cut(&two_cliques(), 2, 0.0).unwrap();
        assert!(c.exact);
        assert_eq!(c.threshold, 1e-8);
        let l: Vec<usize> = c.labels.iter().map(|l| l.unwrap()).collect();
        assert_eq!(l, vec![0, 0, 0, 0, 1, 1, 1, 1]);
        let c = cut(&two_cliques(), 1, 0.0).unwrap();
        assert!(c.labels.iter().all(|&l| l == Some(0)));
    }

    #[test]
    fn stragglers_follow_their_first_merge() {
        // Two pairs plus node 4 which joins the second pair later.
        let d = dendro(5, &[(0, 1, 0.1), (2, 3, 0.1), (3, 4, 0.3), (1, 2, 0.9)]);
        let c = cut(&d, 2, 0.0).unwrap();
        assert_eq!(c.threshold, 0.1);
        assert_eq!(c.labels[4], c.labels[3]);
        let d = dendro(5, &[(0, 1, 0.1), (2, 3, 0.1), (1, 2, 0.2), (3, 4, 0.3)]);
        let c = cut(&d, 2, 0.0).unwrap();
        assert_eq!(c.threshold, 0.1);
        assert_eq!(c.labels[4], c.labels[3]);
    }

    #[test]
    fn unreachable_count_falls_back() {
        let c = cut(&two_cliques(), 5, 0.0).unwrap();
        assert!(!c.exact);
        assert_eq!(c.clusters, 2);
    }

    #[test]
    fn vote_rules() {
        let cloud =
            PointCloud::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.1, 0.0], [9.0, 9.0]])
                .unwrap();
        let filter = ValidityFilter {
            d: 1,
            e: 0.01,
            q: 0.001,
            r0: 0.0,
        };
        let set = SimplexSet::from_simplices(
            vec![
                crate::Simplex::new([0, 1]).unwrap(),
                crate::Simplex::new([0, 2]).unwrap(),
                crate::Simplex::new([1, 2]).unwrap(),
            ],
            &cloud,
            filter,
        );
        let l = majority_vote(&[Some(1), Some(2), Some(1)], &set, &cloud).unwrap();
        // Point 0 sees {1, 2}: tie to 1. Point 2 sees {2, 1}: tie to 1.
        assert_eq!(l[0], 1);
        assert_eq!(l[1], 1);
        assert_eq!(l[2], 1);
        // Orphan 3 is next to point 0.
        assert_eq!(l[3], 1);
        assert!(majority_vote(&[None, None, None], &set, &cloud).is_err());
    }

    #[test]
    fn nlapd_basics() {
        let cloud = PointCloud::from_rows(&[[0.0], [1.0], [2.0], [3.0]]).unwrap();
        let filter = ValidityFilter {
            d: 1,
            e: 0.5,
            q: 0.5,
            r0: 0.0,
        };
        let set = SimplexSet::from_simplices(
            vec![
                crate::Simplex::new([0, 1]).unwrap(),
                crate::Simplex::new([1, 2]).unwrap(),
            ],
            &cloud,
            filter,
        );
        let d = dendro(2, &[(0, 1, 0.4)]);
        assert_eq!(nlapd(&d, &set, 4, 0, 0).unwrap(), 0.0);
        assert_eq!(nlapd(&d, &set, 4, 1, 2).unwrap(), 0.0);
        assert_eq!(nlapd(&d, &set, 4, 0, 2).unwrap(), 0.4);
        assert!(matches!(nlapd(&d, &set, 4, 0, 3), Err(Error::Uncovered(3))));
        assert!(nlapd(&d, &set, 5000, 0, 1).is_err());
    }
}
