//! Acceptance criteria 1 through 10. Runs without the libtest harness so the
//! criteria execute one after another (criterion 8 measures wall-clock) and
//! every verdict line is printed. Exits nonzero if any criterion fails.
#![allow(clippy::needless_range_loop)]

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::panic;
use std::sync::OnceLock;
use std::time::Instant;

use lapd::anglegraph::graph_from_angles;
use lapd::datasets::{generate, ShapeKind, ShapeSpec};
use lapd::dendrogram::{build_dendrogram, knn_lapd, profile_at};
use lapd::eval::{accuracy, accuracy_assignment, accuracy_exhaustive, GapReport};
use lapd::pipeline::{estimate_m, run, run_detailed, Run};
use lapd::{Params, PointCloud, WeightMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

const SEEDS: u64 = 5;

// Criterion-5 setting. The edge scale, neighbor count and denoising
// threshold are tuned; everything else is default.
const C5_N: usize = 4000;
const C5_SIGMA: f64 = 0.03;
const C5_E: f64 = 0.2;
const C5_B: usize = 40;
const C5_ETA: f64 = 0.3;

fn squares(n: usize, sigma: f64, seed: u64) -> PointCloud {
    let spec = ShapeSpec::new(ShapeKind::Hypercubes, 2, 20, n)
        .with_theta(FRAC_PI_4)
        .with_sigma(sigma)
        .with_seed(seed);
    generate(&spec).expect("valid spec")
}

fn c5_params(sigma: f64) -> Params {
    let mut p = Params::new(2).with_e(C5_E).with_eta(C5_ETA);
    if sigma > 0.0 {
        p = p.with_tau(3f64.sqrt() * sigma);
    }
    Params { b: Some(C5_B), ..p }
}

struct C5Run {
    m_hat: usize,
    accuracy: f64,
    secs: f64,
    before: GapReport,
    after: GapReport,
}

/// Criterion-5 runs, shared with criteria 6, 7 and 10. The first seed's
/// full run is kept for criterion 10.
fn c5_runs() -> &'static (Vec<C5Run>, Run) {
    static RUNS: OnceLock<(Vec<C5Run>, Run)> = OnceLock::new();
    RUNS.get_or_init(|| {
        let mut out = Vec::new();
        let mut first = None;
        for seed in 0..SEEDS {
            let cloud = squares(C5_N, C5_SIGMA, seed);
            let t = Instant::now();
            let r = run_detailed(&cloud, &c5_params(C5_SIGMA)).expect("criterion-5 run");
            let secs = t.elapsed().as_secs_f64();
            let res = &r.result;
            out.push(C5Run {
                m_hat: res.m_hat,
                accuracy: accuracy(&res.point_labels, cloud.truth().unwrap()).unwrap(),
                secs,
                before: res.gap_before.clone().unwrap(),
                after: res.gap_after.clone().unwrap(),
            });
            if first.is_none() {
                first = Some(r);
            }
        }
        (out, first.unwrap())
    })
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_minimax() -> Verdict {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..30 {
        let g = random_graph(seed, 12, 30);
        let dendro = build_dendrogram(&g);
        let fw = floyd_minimax(&g);
        for i in 0..g.node_count() {
            for j in 0..g.node_count() {
                let q = dendro.query(i, j).unwrap();
                let diff = if q == fw[i][j] {
                    0.0
                } else {
                    (q - fw[i][j]).abs()
                };
                worst = worst.max(diff);
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    check(
        worst <= 1e-12 && secs < 5.0,
        format!("30 graphs, max |query - Floyd-Warshall| = {worst:e}, {secs:.3} s"),
    )
}

fn c2_knn() -> Verdict {
    let mut mismatches = 0;
    for seed in 0..30 {
        let g = random_graph(seed, 12, 30);
        let dendro = build_dendrogram(&g);
        let fw = floyd_minimax(&g);
        for kappa in 1..=3 {
            let got = knn_lapd(&dendro, kappa);
            let want = brute_knn(&fw, kappa);
            mismatches += got.iter().zip(&want).filter(|(a, b)| a != b).count();
        }
    }
    check(
        mismatches == 0,
        format!("30 graphs x kappa 1..3, {mismatches} mismatches"),
    )
}

fn c3_toy_profile() -> Verdict {
    let dendro = build_dendrogram(&toy_graph());
    // nu = 0 makes every component of size >= 2 nontrivial.
    let profile = profile_at(&dendro, TOY_SCALES.to_vec(), 0.0);
    let (m, _) = estimate_m(&profile.counts).map_err(|e| e.to_string())?;
    check(
        profile.counts == [0, 6, 5, 3, 2, 2, 2, 1] && m == 2,
        format!("counts {:?}, m_hat {m}", profile.counts),
    )
}

fn c4_segments() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for sigma in [0.0, 0.02, 0.05] {
        let mut accs = Vec::new();
        let mut slowest = 0.0f64;
        for seed in 0..SEEDS {
            let spec = ShapeSpec::new(ShapeKind::Hypercubes, 1, 20, 2000)
                .with_theta(FRAC_PI_2)
                .with_sigma(sigma)
                .with_seed(seed);
            let cloud = generate(&spec).unwrap();
            let mut p = Params::new(1).with_m(2);
            if sigma > 0.0 {
                p = p.with_tau(spec.tau());
            }
            let t = Instant::now();
            let r = run(&cloud, &p).map_err(|e| e.to_string())?;
            slowest = slowest.max(t.elapsed().as_secs_f64());
            accs.push(accuracy(&r.point_labels, cloud.truth().unwrap()).unwrap());
        }
        let mean = accs.iter().sum::<f64>() / accs.len() as f64;
        ok &= mean >= 0.97 && slowest < 30.0;
        lines.push(format!(
            "sigma {sigma}: mean {mean:.4} (slowest {slowest:.2} s)"
        ));
    }
    check(ok, lines.join("; "))
}

fn c5_squares() -> Verdict {
    let runs = &c5_runs().0;
    let hits = runs.iter().filter(|r| r.m_hat == 2).count();
    let mean = runs.iter().map(|r| r.accuracy).sum::<f64>() / runs.len() as f64;
    let slowest = runs.iter().map(|r| r.secs).fold(0.0, f64::max);
    let m: Vec<usize> = runs.iter().map(|r| r.m_hat).collect();
    check(
        hits >= 4 && mean >= 0.90 && slowest < 120.0,
        format!("m_hat {m:?}, mean accuracy {mean:.4}, slowest {slowest:.2} s"),
    )
}

fn c6_within_bound() -> Verdict {
    let d = 2.0f64;
    let tau = 3f64.sqrt() * C5_SIGMA;
    let bound = 4.0 * (32.0 * d / (d + 1.0)).sqrt() * tau / C5_E;
    let runs = &c5_runs().0;
    let noisy: Vec<f64> = runs.iter().map(|r| r.before.wlapd).collect();
    let whole: Vec<f64> = runs.iter().map(|r| r.before.wlapd_graph).collect();
    let mut clean = Vec::new();
    for seed in 0..SEEDS {
        let cloud = squares(C5_N, 0.0, seed);
        let r = run(&cloud, &c5_params(0.0)).map_err(|e| e.to_string())?;
        clean.push(r.gap_before.unwrap().wlapd);
    }
    let ok = noisy.iter().all(|&w| w <= bound) && clean.iter().all(|&w| w <= 2.0 * DELTA);
    let clean: Vec<String> = clean.iter().map(|w| format!("{w:.1e}")).collect();
    check(
        ok,
        format!(
            "wlapd {noisy:.3?} <= {bound:.3}; sigma 0: {clean:?} <= 2e-8 \
             (whole-graph wlapd {whole:?})"
        ),
    )
}

fn c7_gap() -> Verdict {
    let runs = &c5_runs().0;
    let floor = FRAC_PI_4 / 8.0;
    let good = runs
        .iter()
        .filter(|r| {
            let w = r.after.wlapd.max(r.after.wlapd_graph);
            r.after.blapd >= floor && r.after.blapd >= 2.0 * w
        })
        .count();
    let pairs: Vec<String> = runs
        .iter()
        .map(|r| {
            format!(
                "{:.3}/{:.3}",
                r.after.blapd,
                r.after.wlapd.max(r.after.wlapd_graph)
            )
        })
        .collect();
    check(
        good >= 4,
        format!("{good}/5 seeds, blapd/wlapd after denoising {pairs:?}"),
    )
}

fn c8_scaling() -> Verdict {
    let p = Params {
        b: Some(10),
        q: Some(0.5),
        ..Params::new(2)
            .with_tau(3f64.sqrt() * C5_SIGMA)
            .with_e(0.15)
            .with_m(2)
    };
    let median = |n: usize| -> Result<f64, String> {
        // Unlabeled, so the run does no truth-based diagnostics.
        let labeled = squares(n, C5_SIGMA, 0);
        let cloud = PointCloud::new(labeled.dim(), labeled.coords().to_vec()).unwrap();
        let mut t: Vec<f64> = (0..3)
            .map(|_| {
                let s = Instant::now();
                run(&cloud, &p).map(|_| s.elapsed().as_secs_f64())
            })
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        t.sort_by(f64::total_cmp);
        Ok(t[1])
    };
    let (small, large) = (median(2000)?, median(8000)?);
    let ratio = large / small;
    check(
        ratio <= 6.0,
        format!("median {small:.3} s at n=2000, {large:.3} s at n=8000, ratio {ratio:.2}"),
    )
}

fn c9_accuracy() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bad = 0;
    for _ in 0..50 {
        let len = rng.random_range(1..40);
        let m = rng.random_range(1..=4);
        let pred: Vec<usize> = (0..len).map(|_| rng.random_range(0..m)).collect();
        let truth: Vec<usize> = (0..len).map(|_| rng.random_range(0..m)).collect();
        let a = accuracy_assignment(&pred, &truth).unwrap();
        let b = accuracy_exhaustive(&pred, &truth).unwrap();
        bad += usize::from(a != b || a != brute_accuracy(&pred, &truth));
    }
    check(bad == 0, format!("50 cases, {bad} disagreements"))
}

fn c10_one_vs_two_sided() -> Verdict {
    let r = &c5_runs().1;
    let n = r.set.len();
    let one = build_dendrogram(&graph_from_angles(
        n,
        &r.angles,
        WeightMode::OneSided,
        r.settings.delta,
    ));
    let two = build_dendrogram(&graph_from_angles(
        n,
        &r.angles,
        WeightMode::TwoSided,
        r.settings.delta,
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bad = 0;
    for _ in 0..200 {
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        if one.query(i, j).unwrap() < two.query(i, j).unwrap() - 1e-12 {
            bad += 1;
        }
    }
    check(
        bad == 0,
        format!("200 pairs over {n} simplices, {bad} violations"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("minimax exactness", c1_minimax),
        ("kNN path distance exactness", c2_knn),
        ("toy merge profile", c3_toy_profile),
        ("segments, d = 1", c4_segments),
        ("squares, d = 2, m auto", c5_squares),
        ("within-class bound", c6_within_bound),
        ("gap after denoising", c7_gap),
        ("quasi-linear scaling", c8_scaling),
        ("accuracy matching", c9_accuracy),
        ("one-sided >= two-sided", c10_one_vs_two_sided),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match &verdict {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(verdict.is_err());
        println!(
            "criterion {:>2} {tag} [{name}] {detail} ({secs:.1} s)",
            k + 1
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
