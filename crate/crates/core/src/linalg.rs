//! Dense complex linear algebra for the small matrices used here
//! (operators on three qubits, 64×64 superoperators).
//!
//! The eigensolver is a cyclic complex Jacobi method; singular values and
//! right singular vectors come from one-sided (Hestenes) Jacobi. Both are
//! slow for large matrices and unconditionally robust at these sizes.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix stored in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4e}{:+.4e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows·cols");
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_diag(&diag.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// `‖M − M†‖_F`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Column-stacking vectorization: `vec(ρ)[i + n·j] = ρ[i][j]`.
    pub fn vectorize(&self) -> Vec<C64> {
        let mut v = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    /// Inverse of [`ComplexMatrix::vectorize`] for an `n×n` matrix.
    pub fn unvectorize(v: &[C64], n: usize) -> Self {
        assert_eq!(v.len(), n * n);
        Self::from_fn(n, n, |i, j| v[i + n * j])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape());
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape());
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Parameters `(c, s, phase)` of the unitary `[[c, s], [−s·ē, c·ē]]` that
/// diagonalizes the Hermitian block `[[app, apq], [conj(apq), aqq]]`.
/// Returns the rotation and `t = s / c`.
#[inline]
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64, f64) {
    let r = apq.norm();
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, phase.conj(), t)
}

pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    hermitian_eig_with(h, &Tolerances::DEFAULT)
}

/// Cyclic Jacobi eigensolver.
pub fn hermitian_eig_with(h: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            context: "hermitian_eig",
            expected: (h.rows(), h.rows()),
            found: h.shape(),
        });
    }
    let norm = h.frobenius_norm();
    let deviation = h.hermitian_deviation();
    if deviation > tol.hermitian * norm {
        return Err(Error::NotHermitian { deviation, norm });
    }

    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol.jacobi_offdiag * norm;

    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[(i, j)].norm_sqr();
                }
            }
        }
        if off.sqrt() <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let (c, s, ebar, t) = jacobi_rotation(app, aqq, apq);
                let e = ebar.conj();
                // A ← A U
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * ebar * s;
                    a[(k, q)] = akp * s + akq * ebar * c;
                }
                // A ← U† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * e * s;
                    a[(q, k)] = apk * s + aqk * e * c;
                }
                let r = apq.norm();
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(app - t * r, 0.0);
                a[(q, q)] = C64::new(aqq + t * r, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * ebar * s;
                    v[(k, q)] = vkp * s + vkq * ebar * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// Singular values and right singular vectors.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending, one per column of the input.
    pub values: Vec<f64>,
    /// Right singular vectors as columns, in the order of `values`.
    pub right_vectors: ComplexMatrix,
}

/// One-sided Jacobi SVD. Column pairs are rotated until mutually orthogonal;
/// the final column norms are the singular values.
pub fn svd(m: &ComplexMatrix) -> Svd {
    let (rows, n) = m.shape();
    // column-major working copies
    let mut a: Vec<C64> = (0..n).flat_map(|j| m.column(j)).collect();
    let mut v = vec![ZERO; n * n];
    for j in 0..n {
        v[j * n + j] = ONE;
    }
    let ortho_tol = (rows.max(n) as f64) * f64::EPSILON;
    let mut norms = vec![0.0; n];

    for _sweep in 0..80 {
        for (j, nj) in norms.iter_mut().enumerate() {
            *nj = a[j * rows..(j + 1) * rows].iter().map(|z| z.norm_sqr()).sum();
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let (head, tail) = a.split_at_mut(q * rows);
                let col_p = &mut head[p * rows..(p + 1) * rows];
                let col_q = &mut tail[..rows];
                let gamma: C64 = col_p.iter().zip(col_q.iter()).map(|(x, y)| x.conj() * y).sum();
                if gamma.norm() <= ortho_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, ebar, t) = jacobi_rotation(alpha, beta, gamma);
                let es = ebar * s;
                let ec = ebar * c;
                for (x, y) in col_p.iter_mut().zip(col_q.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = xp * c - yq * es;
                    *y = xp * s + yq * ec;
                }
                let (vhead, vtail) = v.split_at_mut(q * n);
                let vp = &mut vhead[p * n..(p + 1) * n];
                let vq = &mut vtail[..n];
                for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = xp * c - yq * es;
                    *y = xp * s + yq * ec;
                }
                let r = gamma.norm();
                norms[p] = (alpha - t * r).max(0.0);
                norms[q] = (beta + t * r).max(0.0);
            }
        }
        if !rotated {
            break;
        }
    }

    let sv: Vec<f64> = (0..n)
        .map(|j| vec_norm(&a[j * rows..(j + 1) * rows]))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    Svd {
        values: order.iter().map(|&j| sv[j]).collect(),
        right_vectors: ComplexMatrix::from_fn(n, n, |i, k| v[order[k] * n + i]),
    }
}

/// Singular values in descending order (`min(rows, cols)` of them).
pub fn svd_values(m: &ComplexMatrix) -> Vec<f64> {
    let k = m.rows().min(m.cols());
    let mut values = svd(m).values;
    values.truncate(k);
    values
}

/// Unit vector minimizing `‖Mv‖` plus the two smallest singular values.
#[derive(Debug, Clone)]
pub struct NullVector {
    pub vector: Vec<C64>,
    /// `[σ_min, σ_second]`.
    pub smallest: [f64; 2],
}

pub fn min_norm_null_vector(m: &ComplexMatrix) -> NullVector {
    let n = m.cols();
    let svd = svd(m);
    let last = n - 1;
    let vector = svd.right_vectors.column(last);
    let second = if n >= 2 { svd.values[last - 1] } else { f64::INFINITY };
    NullVector {
        vector,
        smallest: [svd.values[last], second],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sx() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    fn sz() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    #[test]
    fn kron_identity() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_zz_is_diagonal() {
        let zz = kron(&sz(), &sz());
        assert_eq!(zz, ComplexMatrix::from_real_diag(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn kron_xz_is_block_antidiagonal() {
        let xz = kron(&sx(), &sz());
        let expected = ComplexMatrix::from_real(
            4,
            4,
            &[
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, -1.0, //
                1.0, 0.0, 0.0, 0.0, //
                0.0, -1.0, 0.0, 0.0,
            ],
        );
        assert_eq!(xz, expected);
    }

    #[test]
    fn eig_pauli_z() {
        let e = hermitian_eig(&sz()).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
    }

    #[test]
    fn eig_pauli_x_vectors() {
        let e = hermitian_eig(&sx()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // (|e⟩ − |g⟩)/√2 and (|e⟩ + |g⟩)/√2 up to phase
        let minus = [C64::new(h, 0.0), C64::new(-h, 0.0)];
        let plus = [C64::new(h, 0.0), C64::new(h, 0.0)];
        assert!((dot(&minus, &e.vector(0)).norm() - 1.0).abs() < 1e-12);
        assert!((dot(&plus, &e.vector(1)).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        match hermitian_eig(&m) {
            Err(Error::NotHermitian { deviation, .. }) => assert!((deviation - 2f64.sqrt()).abs() < 1e-12),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn eig_zero_matrix() {
        let e = hermitian_eig(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
    }

    #[test]
    fn eig_complex_hermitian_residuals() {
        let h = ComplexMatrix::from_vec(
            3,
            3,
            vec![
                C64::new(2.0, 0.0),
                C64::new(0.5, -1.0),
                C64::new(0.0, 0.3),
                C64::new(0.5, 1.0),
                C64::new(-1.0, 0.0),
                C64::new(0.7, 0.2),
                C64::new(0.0, -0.3),
                C64::new(0.7, -0.2),
                C64::new(0.4, 0.0),
            ],
        );
        let e = hermitian_eig(&h).unwrap();
        let norm = h.frobenius_norm();
        for k in 0..3 {
            let v = e.vector(k);
            let hv = h.mul_vec(&v);
            let res: f64 = hv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * e.values[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-10 * norm, "residual {res}");
        }
        let vtv = &e.vectors.adjoint() * &e.vectors;
        assert!(close(&vtv, &ComplexMatrix::identity(3), 1e-10));
    }

    #[test]
    fn svd_diagonal() {
        let m = ComplexMatrix::from_real_diag(&[-0.5, 0.3, 0.1]);
        let s = svd_values(&m);
        for (a, b) in s.iter().zip([0.5, 0.3, 0.1]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn svd_zero() {
        assert_eq!(svd_values(&ComplexMatrix::zeros(3, 3)), vec![0.0; 3]);
    }

    #[test]
    fn null_vector_of_projector() {
        let m = ComplexMatrix::from_real_diag(&[1.0, 1.0, 0.0]);
        let nv = min_norm_null_vector(&m);
        assert!((nv.vector[2].norm() - 1.0).abs() < 1e-15);
        assert_eq!(nv.smallest[0], 0.0);
        assert_eq!(nv.smallest[1], 1.0);
    }

    #[test]
    fn null_vector_of_full_rank() {
        let nv = min_norm_null_vector(&sz());
        let mv = sz().mul_vec(&nv.vector);
        assert!((vec_norm(&mv) - 1.0).abs() < 1e-15);
        assert!((nv.smallest[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vectorize_is_column_stacking() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let v: Vec<f64> = m.vectorize().iter().map(|z| z.re).collect();
        assert_eq!(v, vec![1.0, 3.0, 2.0, 4.0]);
        assert_eq!(ComplexMatrix::unvectorize(&m.vectorize(), 2), m);
    }
}
