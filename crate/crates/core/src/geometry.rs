//! Small dense linear algebra for simplices living in `R^D` with `d << D`.

/// Relative rank tolerance for Gram-Schmidt.
pub const RANK_TOL: f64 = 1e-10;

/// Gram determinants below this are treated as degenerate.
pub const GRAM_DET_FLOOR: f64 = 1e-24;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `a - b`
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `v -= (q . v) q` for each `q`, twice (re-orthogonalization).
pub fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, v);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= c * qi;
            }
        }
    }
}

/// Orthonormal basis of `span(vectors)` by modified Gram-Schmidt with
/// re-orthogonalization. Columns whose residual falls below
/// `RANK_TOL * max column norm` are dropped, so `basis.len()` is the
/// numerical rank.
pub fn orthonormal_basis(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    if scale == 0.0 {
        return basis;
    }
    for v in vectors {
        let mut r = v.clone();
        project_out(&mut r, &basis);
        let len = norm(&r);
        if len > RANK_TOL * scale {
            r.iter_mut().for_each(|x| *x /= len);
            basis.push(r);
        }
    }
    basis
}

/// Determinant of a small square matrix (row-major) by Gaussian
/// elimination with partial pivoting.
pub fn determinant(mut a: Vec<f64>, n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .expect("non-empty");
        let p = a[pivot * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let f = a[row * n + col] / p;
            if f != 0.0 {
                for k in col..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
            }
        }
    }
    det
}

pub fn factorial(d: usize) -> f64 {
    (1..=d).map(|k| k as f64).product()
}

/// `d`-volume of the simplex spanned by `vertices` (d + 1 points), via
/// `sqrt(det(G^T G)) / d!` on the edge vectors from the first vertex.
/// Degenerate Gram matrices give 0.
pub fn simplex_volume(vertices: &[&[f64]]) -> f64 {
    let d = vertices.len().saturating_sub(1);
    if d == 0 {
        return 0.0;
    }
    let edges: Vec<Vec<f64>> = vertices[1..].iter().map(|v| sub(v, vertices[0])).collect();
    let mut gram = vec![0.0; d * d];
    for i in 0..d {
        for j in i..d {
            let g = dot(&edges[i], &edges[j]);
            gram[i * d + j] = g;
            gram[j * d + i] = g;
        }
    }
    let det = determinant(gram, d);
    if det < GRAM_DET_FLOOR {
        return 0.0;
    }
    det.sqrt() / factorial(d)
}

/// Volume of the regular `d`-simplex with unit edges,
/// `sqrt(d + 1) / (d! sqrt(2^d))`.
pub fn regular_simplex_volume(d: usize) -> f64 {
    ((d + 1) as f64).sqrt() / (factorial(d) * 2f64.powi(d as i32).sqrt())
}

/// Angle in `[0, pi]` between two nonzero vectors, computed as
/// `2 atan2(|a^ - b^|, |a^ + b^|)`, which stays accurate near 0 and pi
/// where `acos` of the cosine loses half its digits.
pub fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm(a), norm(b));
    let mut diff = 0.0;
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        let (u, v) = (x / na, y / nb);
        diff += (u - v) * (u - v);
        sum += (u + v) * (u + v);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}
