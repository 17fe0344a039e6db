//! Dense real/complex kernels: inner products, small matrices, the cyclic
//! Jacobi Hermitian eigensolver and a one-sided Jacobi singular value routine
//! used for numerical rank and null spaces.
//!
//! Every vector is stored over `Complex64`; real data simply carries zero
//! imaginary parts. Inner products are linear in the first argument:
//! `<x, y> = sum_k x_k * conj(y_k)`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};

pub type C64 = Complex64;
pub type Vector = Vec<C64>;

/// Default relative threshold on singular values for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn real_vector(xs: &[f64]) -> Vector {
    xs.iter().map(|&x| c(x)).collect()
}

pub fn basis_vector(dim: usize, k: usize) -> Vector {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[k] = c(1.0);
    v
}

pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(x: &[C64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum()
}

pub fn norm(x: &[C64]) -> f64 {
    norm_sqr(x).sqrt()
}

/// Returns `x / ||x||`, or `None` for a (numerically) zero vector.
pub fn normalized(x: &[C64]) -> Option<Vector> {
    let n = norm(x);
    if n <= f64::MIN_POSITIVE || !n.is_finite() {
        return None;
    }
    Some(x.iter().map(|a| a / n).collect())
}

pub fn scaled(x: &[C64], s: C64) -> Vector {
    x.iter().map(|a| a * s).collect()
}

pub fn add(x: &[C64], y: &[C64]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub(x: &[C64], y: &[C64]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// `y += a * x`
pub fn axpy(a: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn is_real(x: &[C64]) -> bool {
    x.iter().all(|a| a.im == 0.0)
}

/// Dense row-major matrix over `Complex64`.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let cl = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, cl, |i, j| c(rows[i][j]))
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Self {
        let rows = cols.first().map_or(0, |v| v.len());
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c(v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mat_vec(&self, x: &[C64]) -> Vector {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Largest `|S_ij - conj(S_ji)|`, including imaginary parts on the diagonal.
    pub fn max_asymmetry(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.rows == self.cols && self.max_asymmetry() <= rel_tol * self.max_abs().max(1.0)
    }

    fn scale_column(&mut self, q: usize, phase: C64) {
        for i in 0..self.rows {
            self.data[i * self.cols + q] *= phase;
        }
    }

    fn rotate_columns(&mut self, p: usize, q: usize, cs: f64, sn: f64) {
        for i in 0..self.rows {
            let a = self.data[i * self.cols + p];
            let b = self.data[i * self.cols + q];
            self.data[i * self.cols + p] = a * cs - b * sn;
            self.data[i * self.cols + q] = a * sn + b * cs;
        }
    }

    fn rotate_rows(&mut self, p: usize, q: usize, cs: f64, sn: f64) {
        for j in 0..self.cols {
            let a = self.data[p * self.cols + j];
            let b = self.data[q * self.cols + j];
            self.data[p * self.cols + j] = a * cs - b * sn;
            self.data[q * self.cols + j] = a * sn + b * cs;
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                if z.im == 0.0 {
                    write!(f, "{:>12.6} ", z.re)?;
                } else {
                    write!(f, "{:>12.6}{:+.6}i ", z.re, z.im)?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigenvalues in non-increasing order with matching orthonormal eigenvector
/// columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vector {
        self.vectors.column(k)
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation that annihilates
/// it. Real symmetric input therefore never acquires imaginary parts.
pub fn hermitian_eigen(s: &Matrix) -> Result<Eigen> {
    if s.rows != s.cols {
        return Err(FrameError::DimensionMismatch {
            expected: s.rows,
            found: s.cols,
        });
    }
    let asym = s.max_asymmetry();
    if asym > HERMITIAN_TOL * s.max_abs().max(1.0) {
        return Err(FrameError::NotHermitian { asymmetry: asym });
    }
    let n = s.rows;
    // symmetrize so the rotations act on an exactly Hermitian matrix
    let mut a = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            c(s[(i, i)].re)
        } else {
            (s[(i, j)] + s[(j, i)].conj()) * 0.5
        }
    });
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || scale == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // B = D* A D with D_qq = conj(phase) makes b_pq = |a_pq|
                let phase = apq / mag;
                a.scale_column(q, phase.conj());
                for j in 0..n {
                    a.data[q * n + j] *= phase;
                }
                v.scale_column(q, phase.conj());

                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                a.rotate_columns(p, q, cs, sn);
                a.rotate_rows(p, q, cs, sn);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                v.rotate_columns(p, q, cs, sn);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = Matrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Eigen { values, vectors })
}

/// Singular values (non-increasing) of the matrix whose columns are `cols`,
/// together with the right singular vectors, by one-sided (Hestenes) Jacobi.
///
/// This works on the columns directly instead of forming `A*A`, so singular
/// values far below `sqrt(eps) * sigma_max` are still resolved.
pub fn right_singular(cols: &[Vector]) -> (Vec<f64>, Vec<Vector>) {
    let n = cols.len();
    let mut a: Vec<Vector> = cols.to_vec();
    let mut w: Vec<Vector> = (0..n).map(|k| basis_vector(n, k)).collect();
    // columns below this are zero to working precision, and rotating against
    // them only feeds subnormal phases into `w`
    let floor = 1e-30 * a.iter().map(|c| norm_sqr(c)).sum::<f64>();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sqr(&a[p]);
                let beta = norm_sqr(&a[q]);
                // gamma = a_p^* a_q
                let gamma = inner(&a[q], &a[p]);
                let mag = gamma.norm();
                if alpha.min(beta) <= floor || mag <= 1e-15 * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / mag;
                for z in a[q].iter_mut() {
                    *z *= phase.conj();
                }
                for z in w[q].iter_mut() {
                    *z *= phase.conj();
                }
                let theta = (beta - alpha) / (2.0 * mag);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                rotate_pair(&mut a, p, q, cs, sn);
                rotate_pair(&mut w, p, q, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigmas: Vec<f64> = a.iter().map(|col| norm(col)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigmas[j].total_cmp(&sigmas[i]).then(i.cmp(&j)));
    (
        order.iter().map(|&i| sigmas[i]).collect(),
        order.iter().map(|&i| w[i].clone()).collect(),
    )
}

fn rotate_pair(cols: &mut [Vector], p: usize, q: usize, cs: f64, sn: f64) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let a = *x;
        let b = *y;
        *x = a * cs - b * sn;
        *y = a * sn + b * cs;
    }
}

/// Columns of `V*` for vectors `V = {v_i}` in dimension `dim`: column `j`
/// holds `conj(v_i[j])` over `i`.
fn adjoint_columns(vectors: &[Vector], dim: usize) -> Vec<Vector> {
    (0..dim)
        .map(|j| vectors.iter().map(|v| v[j].conj()).collect())
        .collect()
}

/// Singular values of the matrix with the given vectors as columns.
pub fn singular_values(vectors: &[Vector]) -> Vec<f64> {
    let Some(dim) = vectors.first().map(|v| v.len()) else {
        return Vec::new();
    };
    if vectors.len() <= dim {
        right_singular(vectors).0
    } else {
        right_singular(&adjoint_columns(vectors, dim)).0
    }
}

fn rank_from_sigmas(sigmas: &[f64], tol: f64) -> usize {
    let top = sigmas.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    sigmas.iter().filter(|&&s| s > tol * top).count()
}

/// Number of singular values above `tol * sigma_max`. The empty list has
/// rank 0.
pub fn numerical_rank(vectors: &[Vector], tol: f64) -> usize {
    rank_from_sigmas(&singular_values(vectors), tol)
}

pub fn rank(vectors: &[Vector]) -> usize {
    numerical_rank(vectors, RANK_TOL)
}

/// Orthonormal bases of `span(V)` and of its orthogonal complement in
/// dimension `dim`, in that order.
pub fn span_and_complement(vectors: &[Vector], dim: usize) -> (Vec<Vector>, Vec<Vector>) {
    if vectors.is_empty() {
        return (Vec::new(), (0..dim).map(|k| basis_vector(dim, k)).collect());
    }
    let (sigmas, w) = right_singular(&adjoint_columns(vectors, dim));
    let r = rank_from_sigmas(&sigmas, RANK_TOL);
    let mut w = w;
    let complement = w.split_off(r);
    (w, complement)
}

/// Orthonormal basis of the orthogonal complement of `span(V)`; empty when
/// `V` spans.
pub fn null_space_basis(vectors: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
        return Err(FrameError::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    Ok(span_and_complement(vectors, dim).1)
}

/// `|z|` through `sqrt(|z|^2)`, which skips the overflow guards of `hypot`.
/// Fine for frame coefficients, which are nowhere near overflow.
#[inline]
pub fn modulus(z: C64) -> f64 {
    z.norm_sqr().sqrt()
}

/// Appends the normalized component of `v` orthogonal to the orthonormal
/// `basis` (two Gram-Schmidt passes). Returns false, leaving `basis` alone,
/// when that component is below `RANK_TOL * ||v||`.
pub fn gram_schmidt_push(basis: &mut Vec<Vector>, v: &[C64]) -> bool {
    let scale = norm(v);
    if scale == 0.0 {
        return false;
    }
    let mut r = v.to_vec();
    for _ in 0..2 {
        for b in basis.iter() {
            let p = inner(&r, b);
            axpy(-p, b, &mut r);
        }
    }
    let n = norm(&r);
    if n <= RANK_TOL * scale {
        return false;
    }
    for z in r.iter_mut() {
        *z /= n;
    }
    basis.push(r);
    true
}

/// `x` minus its projection onto the span of an orthonormal `basis`.
pub fn remove_span(x: &[C64], basis: &[Vector]) -> Vector {
    let mut out = x.to_vec();
    for b in basis {
        let p = inner(&out, b);
        axpy(-p, b, &mut out);
    }
    out
}

/// Orthogonal projection of `x` onto the complement of `span(V)`.
pub fn project_out(x: &[C64], complement_basis: &[Vector]) -> Vector {
    let mut out = vec![C64::new(0.0, 0.0); x.len()];
    for b in complement_basis {
        axpy(inner(x, b), b, &mut out);
    }
    out
}

/// Gram matrix `G_ij = <v_i, v_j>`.
pub fn gram(vectors: &[Vector]) -> Matrix {
    let n = vectors.len();
    Matrix::from_fn(n, n, |i, j| inner(&vectors[i], &vectors[j]))
}
