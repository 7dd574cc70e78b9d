//! Clustering accuracy and within/between-manifold path-distance gaps.

use std::collections::BTreeMap;

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;
use serde::Serialize;

use crate::anglegraph::SimplexGraph;
use crate::dendrogram::MergeDendrogram;
use crate::error::{Error, Result};
use crate::io::json_f64;
use crate::simplex::SimplexSet;

/// Alphabets at or below this size are matched by brute force.
pub const EXHAUSTIVE_LIMIT: usize = 6;

/// Confusion counts with rows indexed by compacted `pred` labels and
/// columns by compacted `truth` labels.
fn confusion(pred: &[usize], truth: &[usize]) -> Result<Vec<Vec<i64>>> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: pred.len(),
            right: truth.len(),
        });
    }
    let compact = |v: &[usize]| {
        let ids: BTreeMap<usize, usize> = v
            .iter()
            .copied()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        (v.iter().map(|l| ids[l]).collect::<Vec<_>>(), ids.len())
    };
    let (p, a) = compact(pred);
    let (t, b) = compact(truth);
    let k = a.max(b);
    let mut m = vec![vec![0i64; k]; k];
    for (&i, &j) in p.iter().zip(&t) {
        m[i][j] += 1;
    }
    Ok(m)
}

/// Fraction of points labeled correctly under the best one-to-one matching
/// of predicted to true labels.
pub fn accuracy(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let m = confusion(pred, truth)?;
    let best = if m.len() <= EXHAUSTIVE_LIMIT {
        best_permutation(&m)
    } else {
        best_assignment(&m)
    };
    Ok(ratio(best, pred.len()))
}

/// [`accuracy`] computed with the assignment solver regardless of size.
pub fn accuracy_assignment(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let m = confusion(pred, truth)?;
    Ok(ratio(best_assignment(&m), pred.len()))
}

/// [`accuracy`] computed by trying every permutation. Factorial cost.
pub fn accuracy_exhaustive(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let m = confusion(pred, truth)?;
    Ok(ratio(best_permutation(&m), pred.len()))
}

fn ratio(hits: i64, n: usize) -> f64 {
    if n == 0 {
        1.0
    } else {
        hits as f64 / n as f64
    }
}

fn best_assignment(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 0;
    }
    let matrix = Matrix::from_rows(m.iter().cloned()).expect("square confusion matrix");
    kuhn_munkres(&matrix).0
}

fn best_permutation(m: &[Vec<i64>]) -> i64 {
    fn go(m: &[Vec<i64>], row: usize, used: &mut [bool], acc: i64, best: &mut i64) {
        if row == m.len() {
            *best = (*best).max(acc);
            return;
        }
        for col in 0..m.len() {
            if !used[col] {
                used[col] = true;
                go(m, row + 1, used, acc + m[row][col], best);
                used[col] = false;
            }
        }
    }
    let mut best = 0;
    go(m, 0, &mut vec![false; m.len()], 0, &mut best);
    best
}

/// Largest within-class and smallest between-class path distance over pure
/// simplices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    /// Max distance over same-class pure pairs, with paths restricted to
    /// pure simplices of that class. Pairs such paths cannot connect are
    /// skipped; see `pure_fragments`.
    #[serde(with = "json_f64")]
    pub wlapd: f64,
    /// Max distance over same-class pure pairs in the whole graph; `inf` if
    /// some class is split across graph components.
    #[serde(with = "json_f64")]
    pub wlapd_graph: f64,
    /// Like `wlapd_graph` but over pairs that are connected at all.
    #[serde(with = "json_f64")]
    pub wlapd_connected: f64,
    /// Min distance over pure pairs of different classes.
    #[serde(with = "json_f64")]
    pub blapd: f64,
    /// Pure simplices per truth class.
    pub pure_counts: Vec<usize>,
    /// Components of the subgraph induced by each class's pure simplices.
    pub pure_fragments: Vec<usize>,
    pub mixed_count: usize,
    /// Truth classes without a single pure simplex.
    pub excluded: Vec<usize>,
}

/// Truth class of each simplex, `None` for mixed ones.
pub fn simplex_classes(set: &SimplexSet, truth: &[usize]) -> Vec<Option<usize>> {
    set.simplices()
        .iter()
        .map(|s| {
            let v = s.vertices();
            let c = truth[v[0] as usize];
            v.iter().all(|&p| truth[p as usize] == c).then_some(c)
        })
        .collect()
}

/// Gap report for `graph` over `set` and its dendrogram.
pub fn gap_report(
    graph: &SimplexGraph,
    dendrogram: &MergeDendrogram,
    set: &SimplexSet,
    truth: &[usize],
) -> GapReport {
    let classes = simplex_classes(set, truth);
    gap_from_classes(
        graph,
        dendrogram,
        &classes,
        truth.iter().max().map_or(0, |m| m + 1),
    )
}

/// Gap report for nodes labeled with `classes` (`None` = mixed). The
/// whole-graph values come from one pass over the merge events.
pub fn gap_from_classes(
    graph: &SimplexGraph,
    dendrogram: &MergeDendrogram,
    classes: &[Option<usize>],
    class_count: usize,
) -> GapReport {
    let mut pure_counts = vec![0usize; class_count];
    for c in classes.iter().flatten() {
        pure_counts[*c] += 1;
    }
    let mixed_count = classes.iter().filter(|c| c.is_none()).count();
    // Per-root composition, sorted by class.
    let mut comp: Vec<Vec<(usize, usize)>> = classes
        .iter()
        .map(|c| c.map(|c| vec![(c, 1)]).unwrap_or_default())
        .collect();
    let mut joined = vec![0.0f64; class_count];
    let mut wlapd_connected = 0.0f64;
    let mut blapd = f64::INFINITY;
    for e in dendrogram.events() {
        let into = e.into_root(dendrogram.parents()) as usize;
        let other = if into == e.a as usize {
            e.b as usize
        } else {
            e.a as usize
        };
        let (x, y) = (
            std::mem::take(&mut comp[into]),
            std::mem::take(&mut comp[other]),
        );
        if blapd.is_infinite() && !x.is_empty() && !y.is_empty() {
            let distinct = x
                .iter()
                .chain(&y)
                .map(|&(c, _)| c)
                .collect::<std::collections::BTreeSet<_>>();
            if distinct.len() > 1 {
                blapd = e.w;
            }
        }
        let mut merged: BTreeMap<usize, usize> = x.into_iter().collect();
        for (c, k) in y {
            match merged.get_mut(&c) {
                Some(prev) => {
                    *prev += k;
                    wlapd_connected = wlapd_connected.max(e.w);
                    if *prev == pure_counts[c] {
                        joined[c] = e.w;
                    }
                }
                None => {
                    merged.insert(c, k);
                }
            }
        }
        comp[into] = merged.into_iter().collect();
    }
    let mut wlapd_graph = 0.0f64;
    let mut excluded = Vec::new();
    for (c, &count) in pure_counts.iter().enumerate() {
        if count == 0 {
            excluded.push(c);
        } else if count > 1 {
            let w = if joined[c] > 0.0 {
                joined[c]
            } else {
                f64::INFINITY
            };
            wlapd_graph = wlapd_graph.max(w);
        }
    }
    let (wlapd, pure_fragments) = pure_merges(graph, classes, &pure_counts);
    GapReport {
        wlapd,
        wlapd_graph,
        wlapd_connected,
        blapd,
        pure_counts,
        pure_fragments,
        mixed_count,
        excluded,
    }
}

/// Kruskal over edges joining two pure simplices of one class. Returns the
/// heaviest merging edge and the final fragment count per class.
fn pure_merges(
    graph: &SimplexGraph,
    classes: &[Option<usize>],
    pure_counts: &[usize],
) -> (f64, Vec<usize>) {
    let mut edges: Vec<_> = graph
        .edges()
        .iter()
        .filter(|e| {
            let c = classes[e.i as usize];
            c.is_some() && c == classes[e.j as usize]
        })
        .collect();
    edges.sort_by(|a, b| a.w.total_cmp(&b.w));
    let mut parent: Vec<usize> = (0..classes.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut fragments = pure_counts.to_vec();
    let mut worst = 0.0f64;
    for e in edges {
        let (a, b) = (
            find(&mut parent, e.i as usize),
            find(&mut parent, e.j as usize),
        );
        if a != b {
            parent[a] = b;
            worst = worst.max(e.w);
            fragments[classes[e.i as usize].expect("pure")] -= 1;
        }
    }
    (worst, fragments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anglegraph::{Edge, SimplexGraph};
    use crate::dendrogram::build_dendrogram;
    use crate::params::WeightMode;

    #[test]
    fn accuracy_examples() {
        assert_eq!(accuracy(&[0, 0, 1, 1], &[0, 0, 1, 1]).unwrap(), 1.0);
        assert_eq!(accuracy(&[1, 1, 0, 0], &[0, 0, 1, 1]).unwrap(), 1.0);
        assert_eq!(accuracy(&[0, 1, 1, 1], &[0, 0, 1, 1]).unwrap(), 0.75);
        assert!(accuracy(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn more_predicted_labels_than_true() {
        let pred = [0, 1, 2, 2, 3, 3];
        let truth = [0, 0, 0, 1, 1, 1];
        assert_eq!(accuracy(&pred, &truth).unwrap(), 0.5);
        assert_eq!(accuracy_assignment(&pred, &truth).unwrap(), 0.5);
    }

    #[test]
    fn large_alphabets_use_the_solver() {
        let truth: Vec<usize> = (0..40).map(|i| i % 8).collect();
        let pred: Vec<usize> = truth.iter().map(|&t| (t + 3) % 8).collect();
        assert_eq!(accuracy(&pred, &truth).unwrap(), 1.0);
    }

    fn gap(n: usize, edges: &[(u32, u32, f64)], classes: &[Option<usize>], k: usize) -> GapReport {
        let g = SimplexGraph::from_edges(
            n,
            edges.iter().map(|&(i, j, w)| Edge { i, j, w }).collect(),
            WeightMode::OneSided,
        );
        gap_from_classes(&g, &build_dendrogram(&g), classes, k)
    }

    #[test]
    fn two_classes_bridged_by_a_mixed_node() {
        // 0,1 class 0; 3,4 class 1; 2 mixed.
        let edges = [(0, 1, 0.1), (3, 4, 0.2), (1, 2, 0.5), (2, 3, 0.7)];
        let g = gap(5, &edges, &[Some(0), Some(0), None, Some(1), Some(1)], 2);
        assert_eq!(g.wlapd, 0.2);
        assert_eq!(g.wlapd_graph, 0.2);
        assert_eq!(g.pure_fragments, vec![1, 1]);
        assert_eq!(g.blapd, 0.7);
        assert_eq!(g.pure_counts, vec![2, 2]);
        assert_eq!(g.mixed_count, 1);
    }

    #[test]
    fn split_class_is_infinite() {
        let g = gap(4, &[(0, 1, 0.1)], &[Some(0), Some(0), Some(0), Some(1)], 3);
        assert_eq!(g.wlapd_graph, f64::INFINITY);
        assert_eq!(g.wlapd_connected, 0.1);
        assert_eq!(g.wlapd, 0.1);
        assert_eq!(g.pure_fragments, vec![2, 1, 0]);
        assert_eq!(g.blapd, f64::INFINITY);
        assert_eq!(g.excluded, vec![2]);
    }

    #[test]
    fn pure_paths_ignore_mixed_detours() {
        // 0 and 1 only meet through mixed node 2.
        let g = gap(3, &[(0, 2, 0.3), (2, 1, 0.4)], &[Some(0), Some(0), None], 1);
        assert_eq!(g.wlapd_graph, 0.4);
        assert_eq!(g.wlapd, 0.0);
        assert_eq!(g.pure_fragments, vec![2]);
    }
}
