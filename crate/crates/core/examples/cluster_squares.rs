//! End-to-end clustering of two noisy unit squares hinged at pi/4.

use lapd::datasets::{generate, ShapeKind, ShapeSpec};
use lapd::eval::accuracy;
use lapd::pipeline::run_detailed;
use lapd::Params;

fn main() -> lapd::Result<()> {
    let spec = ShapeSpec::new(ShapeKind::Hypercubes, 2, 20, 4000)
        .with_theta(std::f64::consts::FRAC_PI_4)
        .with_sigma(0.03)
        .with_seed(1);
    let cloud = generate(&spec)?;
    let params = Params::new(2)
        .with_tau(spec.tau())
        .with_e(0.2)
        .with_eta(0.3);
    let params = Params {
        b: Some(40),
        ..params
    };

    let run = run_detailed(&cloud, &params)?;
    let r = &run.result;
    let acc = accuracy(&r.point_labels, cloud.truth().expect("truth"))?;
    println!("m_hat {} (estimated {:?})", r.m_hat, r.m_estimated);
    println!(
        "simplices {} -> {} after denoising",
        r.simplex_count, r.survivors
    );
    println!("persistence {:?}", r.persistence);
    println!("accuracy {acc:.4}");
    for t in &run.timings {
        println!("  {:<13}{:>9.1} ms", t.stage, t.ms);
    }
    Ok(())
}
