//! Dihedral angles between triangles sharing an edge, and the weights each
//! mode assigns them.

use lapd::anglegraph::{dihedral_angle, edge_weight};
use lapd::{PointCloud, Simplex, WeightMode};

fn main() -> lapd::Result<()> {
    for deg in [180.0f64, 150.0, 120.0, 90.0, 45.0] {
        let phi = deg.to_radians();
        // Shared edge along x; apexes at +y and rotated by phi about x.
        let cloud = PointCloud::from_rows(&[
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.5, 1.0, 0.0],
            [0.5, phi.cos(), phi.sin()],
        ])?;
        let a = Simplex::new([0, 1, 2])?;
        let b = Simplex::new([0, 1, 3])?;
        let theta = dihedral_angle(&a, &b, &[0, 1], &cloud)?;
        let fmt = |w: Option<f64>| w.map_or("none".to_string(), |w| format!("{w:.4}"));
        println!(
            "opening {deg:>5.1} deg: theta {theta:.4}  one-sided {}  two-sided {}",
            fmt(edge_weight(theta, WeightMode::OneSided, 1e-8)),
            fmt(edge_weight(theta, WeightMode::TwoSided, 1e-8)),
        );
    }

    // Worst pure-pair angle for d = 1: two unit segments whose far ends are
    // pushed to opposite sides of the tube.
    let (tau, e) = (0.05f64, 0.5);
    println!(
        "closed form 2 asin(2 tau / e) = {:.4}",
        2.0 * (2.0 * tau / e).asin()
    );
    Ok(())
}
