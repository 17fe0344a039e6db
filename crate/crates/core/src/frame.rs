//! Frames and their spectral summary.

use crate::error::{FrameError, Result};
use crate::linalg::{self, hermitian_eigen, inner, norm, Field, Matrix, Vector, C64};

/// Relative tolerance for frames built in memory from exact recipes.
pub const CONSTRUCTED_TOL: f64 = 1e-9;
/// Relative tolerance for frames read back from decimal files.
pub const FILE_TOL: f64 = 1e-6;

/// An ordered family of `N >= 1` vectors in an `M`-dimensional real or
/// complex space. Spanning is not assumed; see [`SpectralSummary::is_frame`].
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    field: Field,
    dim: usize,
    vectors: Vec<Vector>,
    label: Option<String>,
}

impl Frame {
    pub fn new(field: Field, dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(FrameError::InvalidParameter("dimension must be at least 1".into()));
        }
        if vectors.is_empty() {
            return Err(FrameError::InvalidParameter("a frame needs at least one vector".into()));
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(FrameError::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(FrameError::InvalidParameter("non-finite frame entry".into()));
            }
            if field == Field::Real && !linalg::is_real(v) {
                return Err(FrameError::InvalidParameter(
                    "real frame has a vector with non-zero imaginary part".into(),
                ));
            }
        }
        Ok(Frame {
            field,
            dim,
            vectors,
            label: None,
        })
    }

    /// Real frame from rows of coordinates, one row per frame vector.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let vectors = rows.iter().map(|r| linalg::real_vector(r.as_ref())).collect();
        Frame::new(Field::Real, dim, vectors)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_real(&self) -> bool {
        self.field == Field::Real
    }

    /// `M`
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `N`
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &Vector {
        &self.vectors[i]
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Label if present, otherwise a shape description.
    pub fn descriptor(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => format!("{} frame M={} N={}", self.field, self.dim, self.len()),
        }
    }

    pub fn select(&self, indices: &[usize]) -> Vec<Vector> {
        indices.iter().map(|&i| self.vectors[i].clone()).collect()
    }

    /// `sum_i phi_i`
    pub fn vector_sum(&self) -> Vector {
        let mut s = vec![C64::new(0.0, 0.0); self.dim];
        for v in &self.vectors {
            linalg::axpy(C64::new(1.0, 0.0), v, &mut s);
        }
        s
    }

    /// Applies the linear map `u` to every frame vector. The field tag is
    /// kept only when the images stay real.
    pub fn transformed(&self, u: &Matrix) -> Result<Frame> {
        if u.cols() != self.dim || u.rows() != self.dim {
            return Err(FrameError::DimensionMismatch {
                expected: self.dim,
                found: u.cols(),
            });
        }
        let vectors: Vec<Vector> = self.vectors.iter().map(|v| u.mat_vec(v)).collect();
        let field = if self.field == Field::Real && vectors.iter().all(|v| linalg::is_real(v)) {
            Field::Real
        } else {
            Field::Complex
        };
        let mut f = Frame::new(field, self.dim, vectors)?;
        f.label = self.label.clone();
        Ok(f)
    }

    pub fn permuted(&self, perm: &[usize]) -> Frame {
        assert_eq!(perm.len(), self.len());
        Frame {
            field: self.field,
            dim: self.dim,
            vectors: perm.iter().map(|&i| self.vectors[i].clone()).collect(),
            label: self.label.clone(),
        }
    }

    pub(crate) fn check_dim(&self, x: &[C64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(FrameError::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// `S = sum_i phi_i phi_i^*`
pub fn frame_operator(frame: &Frame) -> Matrix {
    let m = frame.dim();
    let mut s = Matrix::zeros(m, m);
    for v in frame.vectors() {
        for j in 0..m {
            for k in 0..m {
                s[(j, k)] += v[j] * v[k].conj();
            }
        }
    }
    s
}

/// Eigenvalues of the frame operator, non-increasing.
pub fn frame_spectrum(frame: &Frame) -> Vec<f64> {
    hermitian_eigen(&frame_operator(frame))
        .expect("frame operator is Hermitian by construction")
        .values
}

/// `(A, B) = (lambda_min(S), lambda_max(S))`. `A` is zero (up to rounding)
/// for families that do not span.
pub fn optimal_frame_bounds(frame: &Frame) -> (f64, f64) {
    let ev = frame_spectrum(frame);
    (*ev.last().unwrap(), ev[0])
}

/// The frame coefficients `<x, phi_i>` in frame order.
pub fn analysis_coefficients(frame: &Frame, x: &[C64]) -> Result<Vec<C64>> {
    frame.check_dim(x)?;
    Ok(frame.vectors().iter().map(|v| inner(x, v)).collect())
}

pub(crate) fn coefficients_unchecked(frame: &Frame, x: &[C64]) -> Vec<C64> {
    frame.vectors().iter().map(|v| inner(x, v)).collect()
}

#[derive(Debug, Clone)]
pub struct SpectralSummary {
    pub frame_operator: Matrix,
    /// `lambda_1 >= ... >= lambda_M`
    pub eigenvalues: Vec<f64>,
    /// `A`
    pub lower_bound: f64,
    /// `B`
    pub upper_bound: f64,
    pub is_frame: bool,
    pub is_unit_norm: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub is_equiangular: bool,
    /// Common `|<phi_i, phi_j>|` when equiangular.
    pub coherence: Option<f64>,
    /// Largest `|<phi_i, phi_j>|` over `i != j` (0 for a single vector).
    pub max_coherence: f64,
    /// `max_i ||phi_i||^2`
    pub max_norm_sqr: f64,
    pub tolerance: f64,
}

impl SpectralSummary {
    pub fn is_untf(&self) -> bool {
        self.is_frame && self.is_unit_norm && self.is_tight
    }

    /// Equiangular tight frame (unit norm implied by equiangularity).
    pub fn is_etf(&self) -> bool {
        self.is_untf() && self.is_equiangular
    }

    /// One-line description used by the CLI.
    pub fn headline(&self) -> String {
        let mut parts = vec![format!(
            "A={} B={}",
            format_number(self.lower_bound.max(0.0)),
            format_number(self.upper_bound)
        )];
        if !self.is_frame {
            parts.push("(not a frame)".into());
        }
        if self.is_parseval {
            parts.push("parseval".into());
        }
        if self.is_tight {
            parts.push("tight".into());
        }
        if self.is_unit_norm {
            parts.push("unit-norm".into());
        }
        if self.is_equiangular {
            parts.push("equiangular".into());
            if let Some(d) = self.coherence {
                parts.push(format!("d={}", format_number(d)));
            }
        }
        parts.join(" ")
    }
}

/// Prints at most 12 significant decimals and drops trailing zeros, so that
/// `1.4999999999999998` shows as `1.5`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let s = format!("{:.12}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Spectral summary with structural flags decided at relative tolerance
/// `tol`.
pub fn classify(frame: &Frame, tol: f64) -> SpectralSummary {
    let s = frame_operator(frame);
    let eigenvalues = hermitian_eigen(&s).expect("frame operator is Hermitian").values;
    let lower_bound = *eigenvalues.last().unwrap();
    let upper_bound = eigenvalues[0];
    let is_frame = linalg::rank(frame.vectors()) == frame.dim();

    let norms: Vec<f64> = frame.vectors().iter().map(|v| norm(v)).collect();
    let max_norm_sqr = norms.iter().map(|n| n * n).fold(0.0, f64::max);
    let is_unit_norm = norms.iter().all(|n| (n - 1.0).abs() <= tol);

    let is_tight = upper_bound > 0.0 && (upper_bound - lower_bound) / upper_bound <= tol;
    let is_parseval =
        is_tight && (upper_bound - 1.0).abs() <= tol && (lower_bound - 1.0).abs() <= tol;

    let n = frame.len();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let g = inner(frame.vector(i), frame.vector(j)).norm();
            lo = lo.min(g);
            hi = hi.max(g);
        }
    }
    let is_equiangular = n >= 2 && is_unit_norm && hi - lo <= tol;
    SpectralSummary {
        frame_operator: s,
        eigenvalues,
        lower_bound,
        upper_bound,
        is_frame,
        is_unit_norm,
        is_tight,
        is_parseval,
        is_equiangular,
        coherence: is_equiangular.then_some(hi),
        max_coherence: hi,
        max_norm_sqr,
        tolerance: tol,
    }
}
