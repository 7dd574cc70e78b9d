//! Samples each synthetic geometry and reports how far points sit from
//! their clean structure.

use lapd::datasets::{generate, structure_distance, ShapeKind, ShapeSpec};

fn main() -> lapd::Result<()> {
    let specs = [
        ShapeSpec::new(ShapeKind::Hypercubes, 1, 20, 2000).with_sigma(0.02),
        ShapeSpec::new(ShapeKind::Hypercubes, 2, 20, 4000)
            .with_theta(std::f64::consts::FRAC_PI_4)
            .with_sigma(0.03),
        ShapeSpec::new(ShapeKind::Spheres, 1, 10, 2000).with_sigma(0.01),
        ShapeSpec::new(ShapeKind::DollarSign, 1, 10, 2000).with_sigma(0.01),
        ShapeSpec::new(ShapeKind::ThreePlanes, 2, 10, 3000).with_sigma(0.01),
    ];
    for spec in specs {
        let cloud = generate(&spec)?;
        let truth = cloud.truth().expect("generated data has truth");
        let mut sizes = vec![0usize; spec.kind.structures()];
        let mut worst = 0.0f64;
        for (i, &s) in truth.iter().enumerate() {
            sizes[s] += 1;
            worst = worst.max(structure_distance(&spec, s, cloud.point(i)));
        }
        println!(
            "{:<13} d={} D={:<3} sizes {:?}  max offset {:.4} (tau {:.4})",
            spec.kind.name(),
            spec.d,
            spec.ambient,
            sizes,
            worst,
            spec.tau()
        );
    }
    Ok(())
}
