//! Small dense linear algebra: symmetric matrices, Cholesky factors,
//! Householder least squares and the closed-form 2×2 eigendecomposition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// Dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    /// Builds a matrix from row-major entries, checking symmetry to 1e-12
    /// relative. The stored matrix is exactly symmetrized.
    pub fn from_row_major(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("matrix dimension must be at least 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Domain(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        let scale = entries.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut m = SymMatrix { dim, entries };
        for i in 0..dim {
            for j in (i + 1)..dim {
                let (a, b) = (m.get(i, j), m.get(j, i));
                if (a - b).abs() > SYMMETRY_TOL * scale.max(f64::MIN_POSITIVE) {
                    return Err(Error::Domain(format!(
                        "matrix is not symmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
                let avg = 0.5 * (a + b);
                m.entries[i * dim + j] = avg;
                m.entries[j * dim + i] = avg;
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Domain("matrix rows must form a square".into()));
        }
        Self::from_row_major(dim, rows.concat())
    }

    /// Builds a symmetric matrix from the upper triangle produced by `f(i, j)`
    /// with `i <= j`.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                entries[i * dim + j] = v;
                entries[j * dim + i] = v;
            }
        }
        SymMatrix { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_upper_fn(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Self::from_upper_fn(diag.len(), |i, j| if i == j { diag[i] } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SymMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn add(&self, other: &SymMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        SymMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        self.entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `vᵀ M v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.entries
            .chunks(self.dim)
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn cholesky(&self) -> Result<LowerTriangular> {
        cholesky(self)
    }

    /// Inverse through the Cholesky factor.
    pub fn inverse(&self) -> Result<SymMatrix> {
        Ok(self.cholesky()?.inverse_of_product())
    }

    pub fn determinant(&self) -> Result<f64> {
        let l = self.cholesky()?;
        Ok(l.diag().iter().map(|d| d * d).product())
    }
}

/// Lower-triangular matrix stored row-major (upper part is zero).
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular {
    dim: usize,
    entries: Vec<f64>,
}

impl LowerTriangular {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// `L z`.
    pub fn mul_vec(&self, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.mul_vec_into(z, &mut out);
        out
    }

    pub fn mul_vec_into(&self, z: &[f64], out: &mut [f64]) {
        for i in 0..self.dim {
            let row = &self.entries[i * self.dim..i * self.dim + i + 1];
            out[i] = row.iter().zip(z).map(|(a, b)| a * b).sum();
        }
    }

    /// Solves `L x = b` by forward substitution.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        for i in 0..self.dim {
            let mut s = b[i];
            for (k, xk) in x.iter().enumerate().take(i) {
                s -= self.get(i, k) * xk;
            }
            x[i] = s / self.get(i, i);
        }
        x
    }

    /// Solves `Lᵀ x = b` by back substitution.
    pub fn solve_upper_transposed(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s -= self.get(k, i) * x[k];
            }
            x[i] = s / self.get(i, i);
        }
        x
    }

    /// Solves `(L Lᵀ) x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.solve_upper_transposed(&self.solve_lower(b))
    }

    /// `(L Lᵀ)⁻¹`.
    pub fn inverse_of_product(&self) -> SymMatrix {
        let n = self.dim;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            cols.push(self.solve(&e));
        }
        SymMatrix::from_upper_fn(n, |i, j| 0.5 * (cols[j][i] + cols[i][j]))
    }

    /// `L Lᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.dim;
        SymMatrix::from_upper_fn(n, |i, j| (0..=i.min(j)).map(|k| self.get(i, k) * self.get(j, k)).sum())
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }
}

/// Cholesky factorization `m = L Lᵀ`.
pub fn cholesky(m: &SymMatrix) -> Result<LowerTriangular> {
    let n = m.dim();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = m.get(j, j);
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { row: j, pivot: d });
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in (j + 1)..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    Ok(LowerTriangular { dim: n, entries: l })
}

/// Closed-form eigendecomposition of a symmetric 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen2 {
    /// Larger eigenvalue.
    pub lambda1: f64,
    /// Smaller eigenvalue.
    pub lambda2: f64,
    /// Orthogonal matrix whose columns are the eigenvectors, row-major.
    pub vectors: [[f64; 2]; 2],
}

pub fn sym_eig_2x2(m: &SymMatrix) -> Result<Eigen2> {
    if m.dim() != 2 {
        return Err(Error::Domain(format!("expected a 2x2 matrix, got {0}x{0}", m.dim())));
    }
    let (a, b, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
    let half_trace = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let radius = half_diff.hypot(b);
    let lambda1 = half_trace + radius;
    // det / lambda1 avoids cancellation when the eigenvalues are far apart
    let lambda2 = if lambda1 != 0.0 && half_trace.abs() > radius {
        (a * d - b * b) / lambda1
    } else {
        half_trace - radius
    };
    // eigenvector angle of the larger eigenvalue
    let theta = 0.5 * (2.0 * b).atan2(a - d);
    let (s, c) = theta.sin_cos();
    Ok(Eigen2 {
        lambda1,
        lambda2,
        vectors: [[c, -s], [s, c]],
    })
}

/// Householder QR least-squares solve of `X β ≈ y`.
#[derive(Debug, Clone)]
pub struct QrSolution {
    pub coefficients: Vec<f64>,
    /// Upper-triangular `R` (p×p, row-major) with `X = Q R`.
    pub r: Vec<f64>,
    pub cols: usize,
}

impl QrSolution {
    /// `(XᵀX)⁻¹ = R⁻¹ R⁻ᵀ`.
    pub fn xtx_inverse(&self) -> SymMatrix {
        let p = self.cols;
        // invert R column by column (upper triangular)
        let mut rinv = vec![0.0; p * p];
        for j in 0..p {
            for i in (0..=j).rev() {
                let mut s = if i == j { 1.0 } else { 0.0 };
                for k in (i + 1)..=j {
                    s -= self.r[i * p + k] * rinv[k * p + j];
                }
                rinv[i * p + j] = s / self.r[i * p + i];
            }
        }
        SymMatrix::from_upper_fn(p, |i, j| (j..p).map(|k| rinv[i * p + k] * rinv[j * p + k]).sum())
    }
}

/// Solves the least-squares problem for a row-major `n × p` design matrix.
/// Returns `RankDeficient` when a diagonal entry of `R` falls below
/// `1e-12 · max|R_kk|`.
pub fn least_squares_qr(design: &[f64], n: usize, p: usize, y: &[f64]) -> Result<QrSolution> {
    assert_eq!(design.len(), n * p);
    assert_eq!(y.len(), n);
    if n < p {
        return Err(Error::RankDeficient(format!("{n} rows for {p} columns")));
    }
    // column-major working copy
    let mut a: Vec<f64> = (0..p).flat_map(|j| (0..n).map(move |i| design[i * p + j])).collect();
    let mut qty = y.to_vec();
    let mut diag = vec![0.0; p];
    for k in 0..p {
        let col = &mut a[k * n..(k + 1) * n];
        let norm = col[k..].iter().fold(0.0_f64, |acc, v| acc.hypot(*v));
        if norm == 0.0 {
            diag[k] = 0.0;
            continue;
        }
        let alpha = if col[k] > 0.0 { -norm } else { norm };
        col[k] -= alpha;
        let vnorm2: f64 = col[k..].iter().map(|v| v * v).sum();
        diag[k] = alpha;
        if vnorm2 == 0.0 {
            continue;
        }
        let v: Vec<f64> = col[k..].to_vec();
        for j in (k + 1)..p {
            let cj = &mut a[j * n + k..(j + 1) * n];
            let dot: f64 = v.iter().zip(cj.iter()).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vi) in cj.iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
        let dot: f64 = v.iter().zip(&qty[k..]).map(|(a, b)| a * b).sum();
        let f = 2.0 * dot / vnorm2;
        for (c, vi) in qty[k..].iter_mut().zip(&v) {
            *c -= f * vi;
        }
    }
    let mut r = vec![0.0; p * p];
    for i in 0..p {
        r[i * p + i] = diag[i];
        for j in (i + 1)..p {
            r[i * p + j] = a[j * n + i];
        }
    }
    let max_diag = diag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if let Some(k) = diag.iter().position(|d| d.abs() <= 1e-12 * max_diag || *d == 0.0) {
        return Err(Error::RankDeficient(format!("column {k} is linearly dependent")));
    }
    let mut beta = vec![0.0; p];
    for i in (0..p).rev() {
        let mut s = qty[i];
        for j in (i + 1)..p {
            s -= r[i * p + j] * beta[j];
        }
        beta[i] = s / r[i * p + i];
    }
    Ok(QrSolution {
        coefficients: beta,
        r,
        cols: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_diff(a: &SymMatrix, b: &SymMatrix) -> f64 {
        a.entries().iter().zip(b.entries()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn cholesky_identity_and_diagonal() {
        let l = cholesky(&SymMatrix::identity(2)).unwrap();
        assert_eq!(l.rows(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let l = cholesky(&SymMatrix::diagonal(&[4.0, 9.0])).unwrap();
        assert_eq!(l.rows(), vec![vec![2.0, 0.0], vec![0.0, 3.0]]);
    }

    #[test]
    fn cholesky_reconstructs() {
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let l = cholesky(&m).unwrap();
        assert_eq!(l.get(0, 1), 0.0);
        assert!(max_abs_diff(&l.reconstruct(), &m) <= 1e-12);
        let m3 = SymMatrix::from_rows(&[
            vec![4.0, 1.2, -0.3],
            vec![1.2, 3.0, 0.5],
            vec![-0.3, 0.5, 2.0],
        ])
        .unwrap();
        let l = cholesky(&m3).unwrap();
        assert!(max_abs_diff(&l.reconstruct(), &m3) <= 1e-10 * m3.norm_inf());
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&m), Err(Error::NotPositiveDefinite { row: 1, .. })));
        let zero = SymMatrix::diagonal(&[0.0, 1.0]);
        assert!(matches!(cholesky(&zero), Err(Error::NotPositiveDefinite { row: 0, .. })));
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let err = SymMatrix::from_rows(&[vec![1.0, 0.5], vec![0.4, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let inv = m.inverse().unwrap();
        let expect = SymMatrix::from_rows(&[vec![2.0 / 3.0, -1.0 / 3.0], vec![-1.0 / 3.0, 2.0 / 3.0]])
            .unwrap();
        assert!(max_abs_diff(&inv, &expect) < 1e-15);
        assert!((m.determinant().unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eig_diagonal() {
        let e = sym_eig_2x2(&SymMatrix::diagonal(&[3.0, 1.0])).unwrap();
        assert_eq!((e.lambda1, e.lambda2), (3.0, 1.0));
        assert!((e.vectors[0][0].abs() - 1.0).abs() < 1e-15);
        assert!(e.vectors[1][0].abs() < 1e-15);
        let e = sym_eig_2x2(&SymMatrix::diagonal(&[1.0, 3.0])).unwrap();
        assert_eq!((e.lambda1, e.lambda2), (3.0, 1.0));
    }

    #[test]
    fn eig_reconstructs_and_preserves_invariants() {
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = sym_eig_2x2(&m).unwrap();
        assert!((e.lambda1 - 3.0).abs() < 1e-15 && (e.lambda2 - 1.0).abs() < 1e-15);
        for rows in [
            [[2.0, 1.0], [1.0, 2.0]],
            [[1.2e-4, -7.0e-5], [-7.0e-5, 4.9e-5]],
            [[5.0, 0.0], [0.0, 5.0]],
            [[-1.0, 3.0], [3.0, 2.0]],
        ] {
            let m = SymMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).unwrap();
            let e = sym_eig_2x2(&m).unwrap();
            let u = e.vectors;
            let scale = m.norm_inf();
            for i in 0..2 {
                for j in 0..2 {
                    let rec = u[i][0] * e.lambda1 * u[j][0] + u[i][1] * e.lambda2 * u[j][1];
                    assert!((rec - m.get(i, j)).abs() <= 1e-12 * scale);
                    let ortho = u[0][i] * u[0][j] + u[1][i] * u[1][j];
                    assert!((ortho - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
                }
            }
            assert!(e.lambda1 >= e.lambda2);
            assert!((e.lambda1 + e.lambda2 - (m.get(0, 0) + m.get(1, 1))).abs() <= 1e-12 * scale);
            let det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
            assert!((e.lambda1 * e.lambda2 - det).abs() <= 1e-12 * scale * scale);
        }
    }

    #[test]
    fn qr_solves_exact_line() {
        let x = [1.0, 0.0, 1.0, 1.0, 1.0, 2.0];
        let y = [2.0, 3.5, 5.0];
        let sol = least_squares_qr(&x, 3, 2, &y).unwrap();
        assert!((sol.coefficients[0] - 2.0).abs() < 1e-14);
        assert!((sol.coefficients[1] - 1.5).abs() < 1e-14);
        let inv = sol.xtx_inverse();
        assert!((inv.get(0, 0) - 5.0 / 6.0).abs() < 1e-14);
        assert!((inv.get(0, 1) + 0.5).abs() < 1e-14);
        assert!((inv.get(1, 1) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn qr_flags_rank_deficiency() {
        let x = [1.0, 2.0, 1.0, 2.0, 1.0, 2.0];
        assert!(matches!(
            least_squares_qr(&x, 3, 2, &[1.0, 2.0, 3.0]),
            Err(Error::RankDeficient(_))
        ));
    }
}
