//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use lapd::anglegraph::{Edge, SimplexGraph};
use lapd::WeightMode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DELTA: f64 = 1e-8;

/// Random simple graph with at most `max_nodes` nodes and `max_edges`
/// edges, weights uniform in `[DELTA, pi/2]`.
pub fn random_graph(seed: u64, max_nodes: usize, max_edges: usize) -> SimplexGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_nodes);
    let all: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|i| (i + 1..n as u32).map(move |j| (i, j)))
        .collect();
    let m = rng.random_range(0..=max_edges.min(all.len()));
    let mut pool = all;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let k = rng.random_range(0..pool.len());
        let (i, j) = pool.swap_remove(k);
        let w = rng.random_range(DELTA..=std::f64::consts::FRAC_PI_2);
        edges.push(Edge { i, j, w });
    }
    SimplexGraph::from_edges(n, edges, WeightMode::OneSided)
}

/// All-pairs minimax path distances by Floyd-Warshall; 0 on the diagonal,
/// `inf` between components.
pub fn floyd_minimax(graph: &SimplexGraph) -> Vec<Vec<f64>> {
    let n = graph.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in graph.edges() {
        let (i, j) = (e.i as usize, e.j as usize);
        d[i][j] = d[i][j].min(e.w);
        d[j][i] = d[i][j];
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k].max(d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Distance from each node to its `kappa`-th nearest other node.
pub fn brute_knn(dist: &[Vec<f64>], kappa: usize) -> Vec<f64> {
    dist.iter()
        .enumerate()
        .map(|(i, row)| {
            let mut others: Vec<f64> = row
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .collect();
            others.sort_by(f64::total_cmp);
            others.get(kappa - 1).copied().unwrap_or(f64::INFINITY)
        })
        .collect()
}

/// The 16-node graph whose merge profile over the scales below is
/// `[0, 6, 5, 3, 2, 2, 2, 1]`.
pub fn toy_graph() -> SimplexGraph {
    let merges: [(f64, &[(u32, u32)]); 5] = [
        (
            1e-7,
            &[
                (0, 1),
                (1, 2),
                (3, 4),
                (5, 6),
                (6, 7),
                (8, 9),
                (10, 11),
                (11, 12),
                (13, 14),
            ],
        ),
        (1e-6, &[(9, 10), (14, 15)]),
        (1e-4, &[(4, 5), (12, 13)]),
        (0.01, &[(2, 3)]),
        (1.2, &[(7, 8)]),
    ];
    let edges = merges
        .iter()
        .flat_map(|&(w, pairs)| pairs.iter().map(move |&(i, j)| Edge { i, j, w }))
        .collect();
    SimplexGraph::from_edges(16, edges, WeightMode::OneSided)
}

// The last scale is the printed 1.5707, not pi/2.
#[allow(clippy::approx_constant)]
pub const TOY_SCALES: [f64; 8] = [1e-8, 3e-7, 1.4e-5, 6.3e-4, 0.028, 0.3418, 0.8866, 1.5707];

/// Best matching accuracy by trying every bijection between label sets.
pub fn brute_accuracy(pred: &[usize], truth: &[usize]) -> f64 {
    let k = pred.iter().chain(truth).max().map_or(0, |m| m + 1);
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = 0;
    permute(&mut perm, 0, &mut |p| {
        let hits = pred
            .iter()
            .zip(truth)
            .filter(|(a, b)| p[**a] == **b)
            .count();
        best = best.max(hits);
    });
    best as f64 / pred.len() as f64
}

fn permute(v: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}
