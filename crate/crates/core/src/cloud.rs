//! Point clouds and canonical simplices.

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// `n` points in `D`-dimensional ambient space, stored row-major, with
/// optional ground-truth labels.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    truth: Option<Vec<usize>>,
}

impl PointCloud {
    /// Builds a cloud from a flat row-major buffer.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCloud(
                "ambient dimension must be positive".into(),
            ));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidCloud(format!(
                "buffer of {} values is not a multiple of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidCloud("non-finite coordinate".into()));
        }
        Ok(PointCloud {
            dim,
            coords,
            truth: None,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows
            .first()
            .map(|r| r.as_ref().len())
            .ok_or_else(|| Error::InvalidCloud("no points".into()))?;
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::InvalidCloud(format!(
                    "row {i} has {} coordinates, expected {dim}",
                    r.len()
                )));
            }
            coords.extend_from_slice(r);
        }
        Self::new(dim, coords)
    }

    pub fn with_truth(mut self, truth: Vec<usize>) -> Result<Self> {
        if truth.len() != self.len() {
            return Err(Error::LengthMismatch {
                left: truth.len(),
                right: self.len(),
            });
        }
        self.truth = Some(truth);
        Ok(self)
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Ambient dimension `D`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn truth(&self) -> Option<&[usize]> {
        self.truth.as_deref()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn dist2(&self, i: usize, j: usize) -> f64 {
        dist2(self.point(i), self.point(j))
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist2(i, j).sqrt()
    }

    /// Checks the `n >= d + 2` requirement for clustering with `d`-simplices.
    pub fn check_for_dimension(&self, d: usize) -> Result<()> {
        if self.len() < d + 2 {
            return Err(Error::InvalidCloud(format!(
                "{} points cannot carry {d}-simplices (need at least {})",
                self.len(),
                d + 2
            )));
        }
        Ok(())
    }

    /// Zero-pads every point to `dim` coordinates.
    pub fn padded(&self, dim: usize) -> PointCloud {
        assert!(dim >= self.dim);
        let mut coords = Vec::with_capacity(self.len() * dim);
        for row in self.rows() {
            coords.extend_from_slice(row);
            coords.resize(coords.len() + dim - self.dim, 0.0);
        }
        PointCloud {
            dim,
            coords,
            truth: self.truth.clone(),
        }
    }
}

#[inline]
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// A `d`-simplex: `d + 1` distinct point indices in strictly increasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(SmallVec<[u32; 4]>);

impl Simplex {
    /// Canonicalizes `vertices`; fails on repeated indices.
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: SmallVec<[u32; 4]> = vertices
            .into_iter()
            .map(|i| u32::try_from(i).expect("point index exceeds u32"))
            .collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCloud(format!(
                "repeated vertex in simplex {v:?}"
            )));
        }
        Ok(Simplex(v))
    }

    pub(crate) fn from_sorted(v: SmallVec<[u32; 4]>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Simplex(v)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    /// Intrinsic dimension `d` (vertex count minus one).
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, p: u32) -> bool {
        self.0.binary_search(&p).is_ok()
    }
}

impl std::fmt::Display for Simplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
