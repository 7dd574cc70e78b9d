//! Minimax path distances, the merge profile over fixed scales and the
//! persistence estimate of the cluster count on a 16-node toy graph.

use lapd::anglegraph::{Edge, SimplexGraph};
use lapd::dendrogram::{build_dendrogram, knn_lapd, profile_at};
use lapd::pipeline::estimate_m;
use lapd::WeightMode;

fn main() -> lapd::Result<()> {
    // Nodes 0..16 merge into the groups listed under each weight.
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
    let graph = SimplexGraph::from_edges(16, edges, WeightMode::OneSided);
    let dendro = build_dendrogram(&graph);

    println!("d(0, 2) = {}", dendro.query(0, 2)?);
    println!("d(0, 15) = {}", dendro.query(0, 15)?);
    println!("3-NN distances: {:?}", knn_lapd(&dendro, 3));

    #[allow(clippy::approx_constant)]
    let scales = vec![1e-8, 3e-7, 1.4e-5, 6.3e-4, 0.028, 0.3418, 0.8866, 1.5707];
    let profile = profile_at(&dendro, scales, 0.0);
    println!("nontrivial components per scale: {:?}", profile.counts);
    for i in 0..profile.scales.len() {
        let labels = profile.labels(&dendro, i);
        println!("  t = {:<8} {:?}", profile.scales[i], labels);
    }
    let (m, persistence) = estimate_m(&profile.counts)?;
    println!("scales per count {persistence:?} -> m_hat = {m}");
    Ok(())
}
