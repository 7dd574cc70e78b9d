//! Parameter set of the clustering pipeline and its defaults.
//!
//! [`Params`] holds user-facing, possibly unset fields. [`Params::resolve`]
//! fills every unset field with its default and is idempotent; the two
//! data-driven fields (`eta`, `m`) may stay [`Eta::Auto`] /
//! [`ClusterCount::Auto`] and are settled by the pipeline.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::neighborhood::KdTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WeightMode {
    /// Edges only for dihedral angles `>= pi/2`, weight `pi - theta`.
    #[default]
    OneSided,
    /// Edges for every adjacent pair, weight `min(pi - theta, theta)`.
    TwoSided,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub enum Eta {
    /// Elbow of the sorted kNN-LAPD curve.
    #[default]
    Auto,
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ClusterCount {
    /// Persistence estimate over the scale profile.
    #[default]
    Auto,
    Fixed(usize),
}

/// Algorithm parameters. `None` means "use the default".
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Params {
    /// Intrinsic dimension of the manifolds.
    pub d: usize,
    /// Noise level (tube radius) in ambient length units.
    pub tau: Option<f64>,
    /// Minimal simplex edge length.
    pub e: Option<f64>,
    /// Distortion ratio; valid edges lie in `[e, e/q]`.
    pub q: Option<f64>,
    /// Volume distortion floor; 0 disables the volume filter.
    pub r0: Option<f64>,
    /// Annular neighbor count.
    pub b: Option<usize>,
    pub kappa: Option<usize>,
    pub eta: Option<Eta>,
    /// Number of scales in the quantized profile.
    pub k: Option<usize>,
    pub m: Option<ClusterCount>,
    pub weight_mode: Option<WeightMode>,
    /// Weight floor.
    pub delta: Option<f64>,
    /// Components of size `<= max(1, ceil(nu * |S|))` count as trivial.
    pub nu: Option<f64>,
    pub seed: Option<u64>,
}

pub const DEFAULT_B: usize = 25;
pub const DEFAULT_K: usize = 100;
pub const DEFAULT_DELTA: f64 = 1e-8;
pub const DEFAULT_NU: f64 = 0.01;

/// `q = 1 / (1.25 + 0.15 (d - 2))`.
pub fn default_q(d: usize) -> f64 {
    1.0 / (1.25 + 0.15 * (d as f64 - 2.0))
}

/// `kappa = ceil(10 ln n)`.
pub fn default_kappa(n: usize) -> usize {
    ((10.0 * (n.max(1) as f64).ln()).ceil() as usize).max(1)
}

impl Params {
    pub fn new(d: usize) -> Self {
        Params {
            d,
            ..Default::default()
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_e(mut self, e: f64) -> Self {
        self.e = Some(e);
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(ClusterCount::Fixed(m));
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = Some(Eta::Fixed(eta));
        self
    }

    pub fn with_weight_mode(mut self, mode: WeightMode) -> Self {
        self.weight_mode = Some(mode);
        self
    }

    /// Fills every unset field from the defaults for a cloud of `n` points.
    ///
    /// Fails with [`Error::EdgeScaleUnknown`] when neither `e` nor a positive
    /// `tau` is available; use [`Params::resolve_for`] to fall back on a
    /// data-driven edge scale instead.
    pub fn resolve(&self, n: usize) -> Result<Params> {
        let e = match (self.e, self.tau) {
            (Some(e), _) => e,
            (None, Some(tau)) if tau > 0.0 => std::f64::consts::SQRT_2 * tau,
            _ => return Err(Error::EdgeScaleUnknown),
        };
        self.fill(n, e)
    }

    /// Like [`Params::resolve`], but when `tau` is zero or unset and `e` is
    /// unset, derives `e` from the cloud with [`fallback_edge_scale`].
    pub fn resolve_for(&self, cloud: &PointCloud) -> Result<Params> {
        match self.resolve(cloud.len()) {
            Err(Error::EdgeScaleUnknown) => {
                let q = self.q.unwrap_or_else(|| default_q(self.d));
                let b = self.b.unwrap_or(DEFAULT_B);
                self.validate_shape(q, b)?;
                let e = fallback_edge_scale(cloud, self.d, q, b);
                if e.is_nan() || e <= 0.0 {
                    return Err(Error::EdgeScaleUnknown);
                }
                self.fill(cloud.len(), e)
            }
            other => other,
        }
    }

    fn validate_shape(&self, q: f64, b: usize) -> Result<()> {
        if self.d == 0 {
            return Err(Error::param("d", "must be a positive integer"));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::param("q", format!("{q} is outside (0, 1)")));
        }
        if b < self.d {
            return Err(Error::param(
                "B",
                format!("{b} < d = {}; no simplex can form", self.d),
            ));
        }
        Ok(())
    }

    fn fill(&self, n: usize, e: f64) -> Result<Params> {
        let q = self.q.unwrap_or_else(|| default_q(self.d));
        let b = self.b.unwrap_or(DEFAULT_B);
        self.validate_shape(q, b)?;
        let out = Params {
            d: self.d,
            tau: self.tau,
            e: Some(e),
            q: Some(q),
            r0: Some(self.r0.unwrap_or(0.0)),
            b: Some(b),
            kappa: Some(self.kappa.unwrap_or_else(|| default_kappa(n))),
            eta: Some(self.eta.unwrap_or_default()),
            k: Some(self.k.unwrap_or(DEFAULT_K)),
            m: Some(self.m.unwrap_or_default()),
            weight_mode: Some(self.weight_mode.unwrap_or_default()),
            delta: Some(self.delta.unwrap_or(DEFAULT_DELTA)),
            nu: Some(self.nu.unwrap_or(DEFAULT_NU)),
            seed: Some(self.seed.unwrap_or(0)),
        };
        out.settings().map(|_| out)
    }

    /// Concrete view of a resolved parameter set.
    pub fn settings(&self) -> Result<Settings> {
        fn need<T>(v: Option<T>, name: &'static str) -> Result<T> {
            v.ok_or_else(|| Error::param(name, "unresolved"))
        }
        let s = Settings {
            d: self.d,
            tau: self.tau,
            e: need(self.e, "e")?,
            q: need(self.q, "q")?,
            r0: need(self.r0, "r0")?,
            b: need(self.b, "B")?,
            kappa: need(self.kappa, "kappa")?,
            eta: need(self.eta, "eta")?,
            k: need(self.k, "k")?,
            m: need(self.m, "m")?,
            weight_mode: need(self.weight_mode, "weight_mode")?,
            delta: need(self.delta, "delta")?,
            nu: need(self.nu, "nu")?,
            seed: need(self.seed, "seed")?,
        };
        s.validate()?;
        Ok(s)
    }

    /// Flat `key = value` config text; unset fields are omitted.
    pub fn to_config(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        put("d", self.d.to_string());
        if let Some(v) = self.tau {
            put("tau", fmt_f64(v));
        }
        if let Some(v) = self.e {
            put("e", fmt_f64(v));
        }
        if let Some(v) = self.q {
            put("q", fmt_f64(v));
        }
        if let Some(v) = self.r0 {
            put("r0", fmt_f64(v));
        }
        if let Some(v) = self.b {
            put("B", v.to_string());
        }
        if let Some(v) = self.kappa {
            put("kappa", v.to_string());
        }
        if let Some(v) = self.eta {
            put("eta", v.to_string());
        }
        if let Some(v) = self.k {
            put("k", v.to_string());
        }
        if let Some(v) = self.m {
            put("m", v.to_string());
        }
        if let Some(v) = self.weight_mode {
            put("weight_mode", v.to_string());
        }
        if let Some(v) = self.delta {
            put("delta", fmt_f64(v));
        }
        if let Some(v) = self.nu {
            put("nu", fmt_f64(v));
        }
        if let Some(v) = self.seed {
            put("seed", v.to_string());
        }
        out
    }

    pub fn from_config(text: &str) -> std::result::Result<Params, String> {
        let mut p = Params::default();
        let mut have_d = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: &dyn fmt::Display| format!("line {}: {key}: {e}", lineno + 1);
            match key {
                "d" => {
                    p.d = value.parse().map_err(|e| bad(&e))?;
                    have_d = true;
                }
                "tau" => p.tau = Some(value.parse().map_err(|e| bad(&e))?),
                "e" => p.e = Some(value.parse().map_err(|e| bad(&e))?),
                "q" => p.q = Some(value.parse().map_err(|e| bad(&e))?),
                "r0" => p.r0 = Some(value.parse().map_err(|e| bad(&e))?),
                "B" | "b" => p.b = Some(value.parse().map_err(|e| bad(&e))?),
                "kappa" => p.kappa = Some(value.parse().map_err(|e| bad(&e))?),
                "eta" => p.eta = Some(value.parse().map_err(|e| bad(&e))?),
                "k" => p.k = Some(value.parse().map_err(|e| bad(&e))?),
                "m" => p.m = Some(value.parse().map_err(|e| bad(&e))?),
                "weight_mode" => p.weight_mode = Some(value.parse().map_err(|e| bad(&e))?),
                "delta" => p.delta = Some(value.parse().map_err(|e| bad(&e))?),
                "nu" => p.nu = Some(value.parse().map_err(|e| bad(&e))?),
                "seed" => p.seed = Some(value.parse().map_err(|e| bad(&e))?),
                other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
            }
        }
        if !have_d {
            return Err("missing required key `d`".into());
        }
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<Params> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Params::from_config(&text).map_err(|reason| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            reason,
        })
    }
}

/// Fully resolved parameters with concrete values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub d: usize,
    pub tau: Option<f64>,
    pub e: f64,
    pub q: f64,
    pub r0: f64,
    pub b: usize,
    pub kappa: usize,
    pub eta: Eta,
    pub k: usize,
    pub m: ClusterCount,
    pub weight_mode: WeightMode,
    pub delta: f64,
    pub nu: f64,
    pub seed: u64,
}

impl Settings {
    fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::param("d", "must be a positive integer"));
        }
        if let Some(t) = self.tau {
            if t.is_nan() || t < 0.0 {
                return Err(Error::param("tau", format!("{t} is negative")));
            }
        }
        if !(self.e > 0.0 && self.e.is_finite()) {
            return Err(Error::param("e", format!("{} is not positive", self.e)));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::param("q", format!("{} is outside (0, 1)", self.q)));
        }
        if !(0.0..=1.0).contains(&self.r0) {
            return Err(Error::param("r0", format!("{} is outside [0, 1]", self.r0)));
        }
        if self.b < self.d {
            return Err(Error::param("B", format!("{} < d = {}", self.b, self.d)));
        }
        if self.kappa == 0 {
            return Err(Error::param("kappa", "must be at least 1"));
        }
        if let Eta::Fixed(eta) = self.eta {
            if eta.is_nan() || eta < 0.0 {
                return Err(Error::param("eta", format!("{eta} is not a threshold")));
            }
        }
        if self.k < 2 {
            return Err(Error::param("k", "need at least 2 scales"));
        }
        if self.m == ClusterCount::Fixed(0) {
            return Err(Error::param("m", "must be at least 1"));
        }
        if self.delta.is_nan() || self.delta <= 0.0 {
            return Err(Error::param(
                "delta",
                format!("{} is not positive", self.delta),
            ));
        }
        if !(0.0..1.0).contains(&self.nu) {
            return Err(Error::param("nu", format!("{} is outside [0, 1)", self.nu)));
        }
        Ok(())
    }
}

/// Data-driven edge scale for noiseless or unknown-noise data.
///
/// Picks the neighbor rank `j` at which the shell `[e, e/q]` is expected to
/// hold `B/2` points under `d`-dimensional volume growth,
/// `j (q^-d - 1) = B/2`, and returns the median distance from a point to
/// its `j`-th nearest neighbor.
pub fn fallback_edge_scale(cloud: &PointCloud, d: usize, q: f64, b: usize) -> f64 {
    let n = cloud.len();
    if n < 2 {
        return 0.0;
    }
    let j = fallback_rank(d, q, b).min(n - 1);
    let tree = KdTree::new(cloud);
    let mut dists: Vec<f64> = (0..n)
        .map(|i| {
            let nn = tree.knn(cloud.point(i), j, Some(i), None);
            nn.last().map(|&(d2, _)| d2.sqrt()).unwrap_or(0.0)
        })
        .collect();
    median(&mut dists)
}

/// Neighbor rank used by [`fallback_edge_scale`].
pub fn fallback_rank(d: usize, q: f64, b: usize) -> usize {
    let growth = q.powi(-(d as i32)) - 1.0;
    ((b as f64 / 2.0) / growth - 1e-9).ceil().max(1.0) as usize
}

pub(crate) fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn fmt_f64(v: f64) -> String {
    crate::io::fmt_g17(v)
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightMode::OneSided => "one-sided",
            WeightMode::TwoSided => "two-sided",
        })
    }
}

impl FromStr for WeightMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "one-sided" | "one_sided" | "1" => Ok(WeightMode::OneSided),
            "two-sided" | "two_sided" | "2" => Ok(WeightMode::TwoSided),
            _ => Err(format!("unknown weight mode `{s}` (one-sided | two-sided)")),
        }
    }
}

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eta::Auto => f.write_str("auto"),
            Eta::Fixed(v) if v.is_infinite() => f.write_str("inf"),
            Eta::Fixed(v) => f.write_str(&fmt_f64(*v)),
        }
    }
}

impl FromStr for Eta {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Eta::Auto),
            "inf" => Ok(Eta::Fixed(f64::INFINITY)),
            _ => s
                .parse()
                .map(Eta::Fixed)
                .map_err(|e| format!("eta `{s}`: {e}")),
        }
    }
}

impl fmt::Display for ClusterCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterCount::Auto => f.write_str("auto"),
            ClusterCount::Fixed(m) => write!(f, "{m}"),
        }
    }
}

impl FromStr for ClusterCount {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(ClusterCount::Auto),
            _ => s
                .parse()
                .map(ClusterCount::Fixed)
                .map_err(|e| format!("m `{s}`: {e}")),
        }
    }
}
