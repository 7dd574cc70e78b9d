//! Within- and between-manifold path distances on two orthogonal noiseless
//! squares, before and after denoising.

use lapd::datasets::{generate, ShapeKind, ShapeSpec};
use lapd::eval::GapReport;
use lapd::pipeline::run_detailed;
use lapd::Params;

fn show(tag: &str, g: &GapReport) {
    println!(
        "{tag:<7} wlapd {:.3e}  wlapd over the whole graph {}  blapd {:.4}  mixed {}",
        g.wlapd, g.wlapd_graph, g.blapd, g.mixed_count
    );
}

fn main() -> lapd::Result<()> {
    let spec = ShapeSpec::new(ShapeKind::Hypercubes, 2, 10, 3000).with_seed(4);
    let cloud = generate(&spec)?;
    let params = Params::new(2).with_e(0.08).with_m(2);
    let run = run_detailed(&cloud, &params)?;
    let r = &run.result;
    show("before", r.gap_before.as_ref().expect("truth"));
    show("after", r.gap_after.as_ref().expect("truth"));
    println!("eta {:.4}, kNN quantiles {:?}", r.eta, r.knn_quantiles);
    Ok(())
}
