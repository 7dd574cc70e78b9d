//! Annular neighbor graph and the valid simplex set on a noisy square pair.

use lapd::datasets::{generate, ShapeKind, ShapeSpec};
use lapd::neighborhood::build_annular_graph;
use lapd::simplex::{build_valid_set, distortion1, enumerate_candidates, ValidityFilter};

fn main() -> lapd::Result<()> {
    let spec = ShapeSpec::new(ShapeKind::Hypercubes, 2, 20, 1000)
        .with_theta(std::f64::consts::FRAC_PI_2)
        .with_sigma(0.01)
        .with_seed(3);
    let cloud = generate(&spec)?;
    let (e, b, q) = (0.12, 15, 0.8);

    let graph = build_annular_graph(&cloud, e, b);
    let shortest = (0..cloud.len())
        .flat_map(|i| graph.neighbors(i).iter().map(move |&j| (i, j as usize)))
        .map(|(i, j)| cloud.dist(i, j))
        .fold(f64::INFINITY, f64::min);
    println!(
        "annular graph: {} points, B = {b}, shortest edge {shortest:.6} > e = {e}",
        graph.len()
    );

    let candidates = enumerate_candidates(&graph, 2);
    let filter = ValidityFilter {
        d: 2,
        e,
        q,
        r0: 0.0,
    };
    let set = build_valid_set(&graph, &cloud, filter)?;
    println!(
        "{} candidate triangles, {} valid",
        candidates.len(),
        set.len()
    );

    let worst = set
        .simplices()
        .iter()
        .map(|s| distortion1(s, &cloud))
        .fold(f64::INFINITY, f64::min);
    println!(
        "edges within [{e}, {:.3}], smallest edge ratio {worst:.3} >= q = {q}",
        filter.max_edge()
    );
    Ok(())
}
