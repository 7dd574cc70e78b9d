//! Property tests for the invariants every stage must keep.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use lapd::anglegraph::{dihedral_angle, edge_weight};
use lapd::datasets::{generate, structure_distance, ShapeKind, ShapeSpec};
use lapd::dendrogram::{build_dendrogram, knn_lapd};
use lapd::eval::accuracy;
use lapd::neighborhood::build_annular_graph;
use lapd::params::default_q;
use lapd::pipeline::{denoise, run};
use lapd::simplex::{build_valid_set, ValidityFilter};
use lapd::{Params, PointCloud, Simplex, WeightMode};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use common::*;

fn cloud_strategy(max_n: usize, dim: usize) -> impl Strategy<Value = PointCloud> {
    (10..max_n).prop_flat_map(move |n| {
        prop::collection::vec(0.0..1.0f64, n * dim)
            .prop_map(move |c| PointCloud::new(dim, c).unwrap())
    })
}

fn choose(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resolve_is_idempotent(
        d in 1usize..5,
        tau in prop::option::of(0.001..0.5f64),
        e in prop::option::of(0.01..1.0f64),
        n in 10usize..100_000,
    ) {
        let mut p = Params::new(d);
        p.tau = tau;
        p.e = e;
        match p.resolve(n) {
            Ok(r) => prop_assert_eq!(r.resolve(n).unwrap(), r),
            Err(_) => prop_assert!(e.is_none() && tau.is_none()),
        }
    }

    #[test]
    fn default_q_shrinks_with_dimension(d in 1usize..30) {
        let (a, b) = (default_q(d), default_q(d + 1));
        prop_assert!(b < a && b > 0.0 && a < 1.0);
    }

    #[test]
    fn generator_is_deterministic(seed in 0u64..1000, sigma in 0.0..0.2f64, kind in 0usize..4) {
        let kind = [ShapeKind::Hypercubes, ShapeKind::Spheres, ShapeKind::DollarSign, ShapeKind::ThreePlanes][kind];
        let d = if kind == ShapeKind::DollarSign { 1 } else { 2 };
        let spec = ShapeSpec::new(kind, d, 6, 60).with_sigma(sigma).with_seed(seed);
        let a = generate(&spec).unwrap();
        prop_assert_eq!(&a, &generate(&spec).unwrap());
        if sigma == 0.0 {
            for (r, &t) in a.rows().zip(a.truth().unwrap()) {
                prop_assert!(structure_distance(&spec, t, r) < 1e-12);
            }
        }
    }

    #[test]
    fn clean_samples_lie_on_their_structure(seed in 0u64..1000, theta in 0.1..FRAC_PI_2) {
        let spec = ShapeSpec::new(ShapeKind::Hypercubes, 2, 4, 50).with_theta(theta).with_seed(seed);
        let c = generate(&spec).unwrap();
        for (r, &t) in c.rows().zip(c.truth().unwrap()) {
            prop_assert!(structure_distance(&spec, t, r) < 1e-12);
        }
    }

    #[test]
    fn annular_lists_respect_the_hole(cloud in cloud_strategy(120, 3), e in 0.0..0.4f64, b in 1usize..12) {
        let g = build_annular_graph(&cloud, e, b);
        for i in 0..cloud.len() {
            let nb = g.neighbors(i);
            let eligible = (0..cloud.len()).filter(|&j| j != i && cloud.dist2(i, j) > e * e).count();
            prop_assert_eq!(nb.len(), b.min(eligible));
            let far = nb.iter().map(|&j| cloud.dist2(i, j as usize)).fold(0.0, f64::max);
            for j in 0..cloud.len() {
                let d2 = cloud.dist2(i, j);
                if nb.contains(&(j as u32)) {
                    prop_assert!(d2 > e * e && j != i);
                } else if j != i && d2 > e * e {
                    prop_assert!(d2 >= far);
                }
            }
        }
    }

    #[test]
    fn annular_lists_ignore_point_order(
        cloud in cloud_strategy(100, 2),
        e in 0.0..0.3f64,
        b in 1usize..8,
        shift in 1usize..50,
    ) {
        let n = cloud.len();
        // Rotate the order; new index k holds old point (k + shift) % n.
        let old = |k: usize| (k + shift) % n;
        let rows: Vec<Vec<f64>> = (0..n).map(|k| cloud.point(old(k)).to_vec()).collect();
        let moved = PointCloud::from_rows(&rows).unwrap();
        let (g, h) = (build_annular_graph(&cloud, e, b), build_annular_graph(&moved, e, b));
        for k in 0..n {
            let mut a: Vec<usize> = h.neighbors(k).iter().map(|&j| old(j as usize)).collect();
            let mut want: Vec<usize> = g.neighbors(old(k)).iter().map(|&j| j as usize).collect();
            a.sort_unstable();
            want.sort_unstable();
            prop_assert_eq!(a, want);
        }
    }

    #[test]
    fn valid_sets_are_valid_and_bounded(
        cloud in cloud_strategy(150, 2),
        e in 0.03..0.2f64,
        q in 0.4..0.9f64,
        r0 in prop_oneof![Just(0.0), 0.1..0.9f64],
        b in 2usize..10,
    ) {
        let g = build_annular_graph(&cloud, e, b);
        let filter = ValidityFilter { d: 2, e, q, r0 };
        if let Ok(set) = build_valid_set(&g, &cloud, filter) {
            prop_assert!(set.simplices().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(set.len() <= cloud.len() * choose(b, 2));
            for (k, s) in set.simplices().iter().enumerate() {
                let (lo, hi) = filter.check(s, &cloud).expect("member passes the filter");
                prop_assert!(lo >= e && hi <= e / q && lo / hi >= q);
                prop_assert_eq!((set.min_edge(k), set.max_edge(k)), (lo, hi));
            }
        }
    }

    #[test]
    fn dihedral_angle_is_a_geometric_invariant(
        pts in prop::collection::vec(-1.0..1.0f64, 12),
        shift in prop::collection::vec(-5.0..5.0f64, 3),
        scale in 0.1..10.0f64,
        rot in prop::collection::vec(-1.0..1.0f64, 9),
        pad in 0usize..4,
    ) {
        let rows: Vec<[f64; 3]> = pts.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        let cloud = PointCloud::from_rows(&rows).unwrap();
        // Skip near-degenerate pairs: short face or apex close to its line.
        let axis = DVector::from_row_slice(&rows[1]) - DVector::from_row_slice(&rows[0]);
        prop_assume!(axis.norm() > 0.1);
        for apex in [2, 3] {
            let v = DVector::from_row_slice(&rows[apex]) - DVector::from_row_slice(&rows[0]);
            prop_assume!(v.cross(&axis).norm() / axis.norm() > 0.1);
        }
        let (a, b) = (Simplex::new([0, 1, 2]).unwrap(), Simplex::new([0, 1, 3]).unwrap());
        let theta = dihedral_angle(&a, &b, &[0, 1], &cloud).unwrap();
        prop_assert!((0.0..=PI).contains(&theta));
        prop_assert_eq!(theta, dihedral_angle(&b, &a, &[0, 1], &cloud).unwrap());
        let q = DMatrix::from_row_slice(3, 3, &rot).qr().q();
        prop_assume!(q.determinant().abs() > 0.5);
        let moved: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                let v = &q * DVector::from_row_slice(r) * scale;
                (0..3).map(|k| v[k] + shift[k]).collect()
            })
            .collect();
        let moved = PointCloud::from_rows(&moved).unwrap().padded(3 + pad);
        let other = dihedral_angle(&a, &b, &[0, 1], &moved).unwrap();
        prop_assert!((theta - other).abs() < 1e-7, "{} vs {}", theta, other);
    }

    #[test]
    fn weights_stay_in_range(theta in 0.0..=PI, delta in 1e-10..1e-3f64) {
        let two = edge_weight(theta, WeightMode::TwoSided, delta).expect("always connected");
        prop_assert!((delta..=FRAC_PI_2).contains(&two));
        match edge_weight(theta, WeightMode::OneSided, delta) {
            Some(one) => {
                prop_assert!((delta..=FRAC_PI_2).contains(&one));
                prop_assert!(two <= one);
            }
            None => prop_assert!(theta < FRAC_PI_2),
        }
    }

    #[test]
    fn path_distance_is_a_symmetric_ultrametric(seed in 0u64..10_000) {
        let g = random_graph(seed, 15, 40);
        let d = build_dendrogram(&g);
        let n = g.node_count();
        for i in 0..n {
            for j in 0..n {
                let ij = d.query(i, j).unwrap();
                prop_assert_eq!(ij, d.query(j, i).unwrap());
                for k in 0..n {
                    prop_assert!(ij <= d.query(i, k).unwrap().max(d.query(k, j).unwrap()));
                }
            }
        }
    }

    #[test]
    fn knn_distance_grows_with_kappa(seed in 0u64..10_000) {
        let g = random_graph(seed, 30, 60);
        let d = build_dendrogram(&g);
        let mut prev = vec![0.0; g.node_count()];
        for kappa in 1..g.node_count() {
            let cur = knn_lapd(&d, kappa);
            prop_assert!(cur.iter().zip(&prev).all(|(c, p)| c >= p));
            prev = cur;
        }
    }

    #[test]
    fn denoising_is_monotone_in_eta(
        knn in prop::collection::vec(prop_oneof![0.0..2.0f64, Just(f64::INFINITY)], 1..60),
        a in 0.0..2.0f64,
        b in 0.0..2.0f64,
    ) {
        let (lo, hi) = (a.min(b), a.max(b));
        let small = denoise(&knn, lo).unwrap_or_default();
        let large = denoise(&knn, hi).unwrap_or_default();
        prop_assert!(small.iter().all(|i| large.contains(i)));
        prop_assert!(small.iter().all(|&i| knn[i] <= lo));
    }

    #[test]
    fn removing_nodes_never_shortens_paths(seed in 0u64..10_000, mask in prop::collection::vec(any::<bool>(), 30)) {
        let g = random_graph(seed, 30, 70);
        let keep: Vec<usize> = (0..g.node_count()).filter(|&i| mask[i]).collect();
        let (full, sub) = (build_dendrogram(&g), build_dendrogram(&g.restrict(&keep)));
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                prop_assert!(sub.query(a, b).unwrap() >= full.query(i, j).unwrap());
            }
        }
    }

    #[test]
    fn accuracy_ignores_label_names(
        pairs in prop::collection::vec((0usize..4, 0usize..4), 1..50),
        perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let (pred, truth): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
        let base = accuracy(&pred, &truth).unwrap();
        let renamed: Vec<usize> = pred.iter().map(|&l| perm[l] + 10).collect();
        prop_assert_eq!(accuracy(&renamed, &truth).unwrap(), base);
        prop_assert_eq!(accuracy(&truth, &pred).unwrap(), base);
        prop_assert!((0.0..=1.0).contains(&base));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn runs_are_deterministic(seed in 0u64..100) {
        let spec = ShapeSpec::new(ShapeKind::Hypercubes, 1, 5, 1500).with_sigma(0.01).with_seed(seed);
        let cloud = generate(&spec).unwrap();
        let p = Params::new(1).with_tau(spec.tau()).with_m(2);
        prop_assert_eq!(run(&cloud, &p).unwrap(), run(&cloud, &p).unwrap());
    }
}
