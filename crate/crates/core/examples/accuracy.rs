//! Clustering accuracy under the best matching of predicted to true labels.

use lapd::eval::{accuracy, accuracy_assignment, accuracy_exhaustive};

fn main() -> lapd::Result<()> {
    let truth = [0, 0, 0, 1, 1, 1, 2, 2];
    let cases: [(&str, [usize; 8]); 4] = [
        ("identical", [0, 0, 0, 1, 1, 1, 2, 2]),
        ("renamed", [2, 2, 2, 0, 0, 0, 1, 1]),
        ("one wrong", [1, 1, 1, 0, 0, 2, 2, 2]),
        ("split cluster", [0, 0, 3, 1, 1, 1, 2, 2]),
    ];
    for (name, pred) in cases {
        println!(
            "{name:<14} {:.4}  (assignment {:.4}, exhaustive {:.4})",
            accuracy(&pred, &truth)?,
            accuracy_assignment(&pred, &truth)?,
            accuracy_exhaustive(&pred, &truth)?,
        );
    }
    Ok(())
}
