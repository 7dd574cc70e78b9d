//! Synthetic intersecting-manifold datasets with ground truth.
//!
//! Every structure lives in a small host space `R^h` embedded in `R^D` by
//! zero padding. Points are sampled uniformly on each clean structure and
//! then pushed off it by uniform noise along the `D - d` directions
//! orthogonal to the local tangent space, with half-width
//! `sqrt(3) sigma / sqrt(D - d)` per direction, so the total noise variance
//! is `sigma^2`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::geometry::{dot, norm, orthonormal_basis, project_out};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    /// Two unit `d`-cubes with a corner at the origin, hinged at angle
    /// `theta` along a shared `(d-1)`-face.
    Hypercubes,
    /// Two unit `d`-spheres whose centers are one unit apart.
    Spheres,
    /// An S-shaped curve crossed by a vertical segment (`d = 1`).
    DollarSign,
    /// Three unit squares through a common line at angles `pi/2`, `pi/5`
    /// and `3 pi / 10` (`d = 2`).
    ThreePlanes,
}

impl ShapeKind {
    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Hypercubes => "hypercubes",
            ShapeKind::Spheres => "spheres",
            ShapeKind::DollarSign => "dollar_sign",
            ShapeKind::ThreePlanes => "three_planes",
        }
    }

    pub fn structures(self) -> usize {
        match self {
            ShapeKind::ThreePlanes => 3,
            _ => 2,
        }
    }

    /// Dimension of the host space the clean structures live in.
    pub fn host_dim(self, d: usize) -> usize {
        match self {
            ShapeKind::Hypercubes | ShapeKind::Spheres => d + 1,
            ShapeKind::DollarSign => 2,
            ShapeKind::ThreePlanes => 3,
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShapeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "hypercubes" => ShapeKind::Hypercubes,
            "spheres" => ShapeKind::Spheres,
            "dollar_sign" => ShapeKind::DollarSign,
            "three_planes" => ShapeKind::ThreePlanes,
            other => return Err(Error::InvalidSpec(format!("unknown shape kind `{other}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub d: usize,
    #[serde(rename = "D")]
    pub ambient: usize,
    pub n: usize,
    /// Crossing angle (hypercubes only).
    pub theta: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl ShapeSpec {
    pub fn new(kind: ShapeKind, d: usize, ambient: usize, n: usize) -> Self {
        ShapeSpec {
            kind,
            d,
            ambient,
            n,
            theta: FRAC_PI_2,
            sigma: 0.0,
            seed: 0,
        }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Noise level of the tube the points live in, `sqrt(3) sigma`.
    pub fn tau(&self) -> f64 {
        3f64.sqrt() * self.sigma
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        let (kind, d) = (self.kind, self.d);
        if d == 0 {
            return bad("d must be positive".into());
        }
        match kind {
            ShapeKind::DollarSign if d != 1 => {
                return bad(format!("dollar_sign needs d = 1, got {d}"))
            }
            ShapeKind::ThreePlanes if d != 2 => {
                return bad(format!("three_planes needs d = 2, got {d}"))
            }
            _ => {}
        }
        let host = kind.host_dim(d);
        if self.ambient < host {
            return bad(format!(
                "{kind} with d = {d} needs D >= {host}, got {}",
                self.ambient
            ));
        }
        let per = kind.structures();
        if self.n < 2 * per {
            return bad(format!(
                "n = {} leaves fewer than 2 points per structure",
                self.n
            ));
        }
        if kind == ShapeKind::Hypercubes && !(self.theta > 0.0 && self.theta <= FRAC_PI_2) {
            return bad(format!("theta = {} is outside (0, pi/2]", self.theta));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma = {} must be finite and >= 0", self.sigma));
        }
        Ok(())
    }

    /// Number of points drawn from structure `s`.
    pub fn share(&self, s: usize) -> usize {
        let k = self.kind.structures();
        self.n / k + usize::from(s < self.n % k)
    }
}

/// Samples the dataset described by `spec`; truth labels are the index of
/// the structure each point was drawn from.
pub fn generate(spec: &ShapeSpec) -> Result<PointCloud> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (h, big_d, d) = (spec.kind.host_dim(spec.d), spec.ambient, spec.d);
    let half = if spec.sigma > 0.0 {
        3f64.sqrt() * spec.sigma / ((big_d - d) as f64).sqrt()
    } else {
        0.0
    };
    let mut coords = Vec::with_capacity(spec.n * big_d);
    let mut truth = Vec::with_capacity(spec.n);
    for s in 0..spec.kind.structures() {
        for _ in 0..spec.share(s) {
            let (clean, tangent) = sample(spec, s, &mut rng);
            let mut x = clean;
            x.resize(big_d, 0.0);
            if half > 0.0 {
                for dir in normal_directions(&tangent, h, big_d) {
                    let c = rng.random_range(-half..=half);
                    x.iter_mut().zip(&dir).for_each(|(xi, di)| *xi += c * di);
                }
            }
            coords.extend_from_slice(&x);
            truth.push(s);
        }
    }
    PointCloud::new(big_d, coords)?.with_truth(truth)
}

/// Orthonormal basis of the `D - d` directions orthogonal to `tangent`
/// (vectors in `R^h`), returned as vectors in `R^D`.
fn normal_directions(tangent: &[Vec<f64>], h: usize, big_d: usize) -> Vec<Vec<f64>> {
    let mut basis = tangent.to_vec();
    let d = tangent.len();
    for k in 0..h {
        if basis.len() == h {
            break;
        }
        let mut v = vec![0.0; h];
        v[k] = 1.0;
        project_out(&mut v, &basis);
        let len = norm(&v);
        if len > 1e-6 {
            v.iter_mut().for_each(|x| *x /= len);
            basis.push(v);
        }
    }
    let mut out: Vec<Vec<f64>> = basis[d..]
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.resize(big_d, 0.0);
            w
        })
        .collect();
    for k in h..big_d {
        let mut w = vec![0.0; big_d];
        w[k] = 1.0;
        out.push(w);
    }
    out
}

fn unit(h: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; h];
    v[k] = 1.0;
    v
}

/// One clean point on structure `s` in the host space, with an orthonormal
/// tangent basis there.
fn sample(spec: &ShapeSpec, s: usize, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = spec.d;
    let h = spec.kind.host_dim(d);
    match spec.kind {
        ShapeKind::Hypercubes | ShapeKind::ThreePlanes => {
            let frame = flat_frame(spec, s);
            let (lo, _) = box_range(spec.kind);
            let mut x = vec![0.0; h];
            for f in &frame {
                let u: f64 = rng.random::<f64>() + lo;
                x.iter_mut().zip(f).for_each(|(xi, fi)| *xi += u * fi);
            }
            (x, frame)
        }
        ShapeKind::Spheres => {
            let mut g: Vec<f64> = (0..h).map(|_| rng.sample(StandardNormal)).collect();
            while norm(&g) < 1e-12 {
                g = (0..h).map(|_| rng.sample(StandardNormal)).collect();
            }
            let len = norm(&g);
            g.iter_mut().for_each(|v| *v /= len);
            let mut x = g.clone();
            x[0] += sphere_center(s);
            let mut span = vec![g];
            span.extend((0..h).map(|k| unit(h, k)));
            let tangent = orthonormal_basis(&span).split_off(1);
            (x, tangent)
        }
        ShapeKind::DollarSign => {
            if s == 1 {
                let y = 2.5 * rng.random::<f64>() - 1.25;
                return (vec![0.0, y], vec![vec![0.0, 1.0]]);
            }
            // Upper arc runs counterclockwise from angle 0 to 3pi/2 about
            // (0, 0.5); the lower arc clockwise from pi/2 to -pi about
            // (0, -0.5). Each is three quarters of a circle of radius 1/2.
            let t = rng.random::<f64>() * 2.0;
            let (cy, phi, sign) = if t < 1.0 {
                (0.5, 1.5 * PI * t, 1.0)
            } else {
                (-0.5, FRAC_PI_2 - 1.5 * PI * (t - 1.0), -1.0)
            };
            let x = vec![0.5 * phi.cos(), cy + 0.5 * phi.sin()];
            (x, vec![vec![-sign * phi.sin(), sign * phi.cos()]])
        }
    }
}

/// Coordinate range of a flat structure along each frame direction.
fn box_range(kind: ShapeKind) -> (f64, f64) {
    match kind {
        ShapeKind::Hypercubes => (0.0, 1.0),
        _ => (-0.5, 0.5),
    }
}

fn sphere_center(s: usize) -> f64 {
    if s == 0 {
        -0.5
    } else {
        0.5
    }
}

/// Orthonormal frame spanning flat structure `s` in the host space.
fn flat_frame(spec: &ShapeSpec, s: usize) -> Vec<Vec<f64>> {
    let d = spec.d;
    let h = spec.kind.host_dim(d);
    match spec.kind {
        ShapeKind::Hypercubes => {
            let mut frame: Vec<Vec<f64>> = (0..d - 1).map(|k| unit(h, k)).collect();
            let mut last = vec![0.0; h];
            if s == 0 {
                last[d - 1] = 1.0;
            } else {
                last[d - 1] = spec.theta.cos();
                last[d] = spec.theta.sin();
            }
            frame.push(last);
            frame
        }
        ShapeKind::ThreePlanes => {
            let second = match s {
                0 => vec![0.0, 1.0, 0.0],
                1 => vec![0.0, 0.0, 1.0],
                _ => vec![0.0, (PI / 5.0).cos(), (PI / 5.0).sin()],
            };
            vec![vec![1.0, 0.0, 0.0], second]
        }
        _ => unreachable!("not a flat structure"),
    }
}

/// Euclidean distance from `x` (in `R^D`) to clean structure `s` of `spec`.
pub fn structure_distance(spec: &ShapeSpec, s: usize, x: &[f64]) -> f64 {
    let h = spec.kind.host_dim(spec.d);
    let outside: f64 = x[h..].iter().map(|v| v * v).sum();
    let y = &x[..h];
    let inside = match spec.kind {
        ShapeKind::Hypercubes | ShapeKind::ThreePlanes => {
            let frame = flat_frame(spec, s);
            let (lo, hi) = box_range(spec.kind);
            let mut r = y.to_vec();
            let mut box_excess = 0.0;
            for f in &frame {
                let c = dot(f, y);
                r.iter_mut().zip(f).for_each(|(ri, fi)| *ri -= c * fi);
                let over = (lo - c).max(c - hi).max(0.0);
                box_excess += over * over;
            }
            dot(&r, &r) + box_excess
        }
        ShapeKind::Spheres => {
            let mut c = y.to_vec();
            c[0] -= sphere_center(s);
            (norm(&c) - 1.0).powi(2)
        }
        ShapeKind::DollarSign => {
            if s == 1 {
                let over = (y[1].abs() - 1.25).max(0.0);
                y[0] * y[0] + over * over
            } else {
                arc_distance(y, 0.5, 0.0, 1.5 * PI).min(arc_distance(y, -0.5, -PI, FRAC_PI_2))
            }
        }
    };
    (inside + outside).sqrt()
}

/// Squared distance from `y` to the radius-1/2 arc about `(0, cy)` over
/// angles `[lo, hi]`.
fn arc_distance(y: &[f64], cy: f64, lo: f64, hi: f64) -> f64 {
    let (dx, dy) = (y[0], y[1] - cy);
    let mut phi = dy.atan2(dx);
    if phi < lo {
        phi += 2.0 * PI;
    }
    if phi > hi {
        phi -= 2.0 * PI;
    }
    if (lo..=hi).contains(&phi) {
        let r = (dx * dx + dy * dy).sqrt();
        (r - 0.5).powi(2)
    } else {
        [lo, hi]
            .iter()
            .map(|&a| (dx - 0.5 * a.cos()).powi(2) + (dy - 0.5 * a.sin()).powi(2))
            .fold(f64::INFINITY, f64::min)
    }
}
