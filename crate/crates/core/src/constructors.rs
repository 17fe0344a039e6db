//! Deterministic builders for the frame families used throughout the crate.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::frame::{classify, Frame, CONSTRUCTED_TOL};
use crate::linalg::{self, basis_vector, c, inner, Field, Vector, C64};
use crate::rng::SplitMix64;

/// A serializable description of how a frame was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FrameRecipe {
    OnbCopies { dim: usize, copies: usize },
    Simplex { dim: usize },
    Harmonic { dim: usize, count: usize, drop_dc: bool, real: bool },
    Etf { dim: usize, count: usize },
    Random { dim: usize, count: usize, seed: u64, field: Field },
}

impl FrameRecipe {
    pub fn build(&self) -> Result<Frame> {
        match *self {
            FrameRecipe::OnbCopies { dim, copies } => onb_copies(dim, copies),
            FrameRecipe::Simplex { dim } => simplex_frame(dim),
            FrameRecipe::Harmonic {
                dim,
                count,
                drop_dc,
                real,
            } => {
                if real {
                    real_harmonic_frame(dim, count)
                } else {
                    harmonic_frame(dim, count, drop_dc)
                }
            }
            FrameRecipe::Etf { dim, count } => etf_catalog(dim, count),
            FrameRecipe::Random {
                dim,
                count,
                seed,
                field,
            } => random_frame_in(field, dim, count, seed),
        }
    }
}

/// `K` copies of the standard basis of dimension `M`, basis-major:
/// `e_1 .. e_M, e_1 .. e_M, ...`.
pub fn onb_copies(m: usize, k: usize) -> Result<Frame> {
    if m == 0 || k == 0 {
        return Err(FrameError::Infeasible("onb-copies needs M >= 1 and K >= 1".into()));
    }
    let vectors = (0..k).flat_map(|_| (0..m).map(move |i| basis_vector(m, i))).collect();
    Ok(Frame::new(Field::Real, m, vectors)?.with_label(format!("onb-copies(M={m},K={k})")))
}

/// The `M + 1` vector simplex frame in `R^M`.
///
/// With `P` the projection onto the all-ones direction of `R^{M+1}`, the
/// vectors `(I - P) e_i / ||(I - P) e_i||` are written in the orthonormal basis
/// of the complement formed by the first `M` columns of the Householder
/// reflection sending the normalized all-ones vector to `e_{M+1}`.
pub fn simplex_frame(m: usize) -> Result<Frame> {
    if m == 0 {
        return Err(FrameError::Infeasible("simplex needs M >= 1".into()));
    }
    let n = m + 1;
    let a = 1.0 / (n as f64).sqrt();
    // u = ones/sqrt(n) - e_n, H = I - 2 u u^T / (u^T u)
    let mut u = vec![a; n];
    u[n - 1] -= 1.0;
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let household = |i: usize, k: usize| -> f64 {
        let delta = if i == k { 1.0 } else { 0.0 };
        delta - 2.0 * u[i] * u[k] / uu
    };
    let proj_norm = (m as f64 / n as f64).sqrt();
    let vectors = (0..n)
        .map(|i| {
            // (I - P) e_i has entries delta_ij - 1/n
            let projected: Vec<f64> = (0..n)
                .map(|j| if i == j { 1.0 } else { 0.0 } - 1.0 / n as f64)
                .collect();
            (0..m)
                .map(|k| {
                    let coord: f64 = (0..n).map(|j| projected[j] * household(j, k)).sum();
                    c(coord / proj_norm)
                })
                .collect()
        })
        .collect();
    Ok(Frame::new(Field::Real, m, vectors)?.with_label(format!("simplex(M={m})")))
}

/// Harmonic frame from `M` rows of the `N`-point character table
/// `omega^{kj} / sqrt(M)`, `omega = exp(2 pi i / N)`.
///
/// Rows `0..M` are used, or `1..=M` with `drop_dc`, in which case the vectors
/// sum to zero.
pub fn harmonic_frame(m: usize, n: usize, drop_dc: bool) -> Result<Frame> {
    if m == 0 || n < m {
        return Err(FrameError::Infeasible(format!("harmonic frame needs 1 <= M <= N (M={m}, N={n})")));
    }
    if drop_dc && n < m + 1 {
        return Err(FrameError::Infeasible(format!(
            "harmonic frame without the constant row needs N >= M + 1 (M={m}, N={n})"
        )));
    }
    let first = usize::from(drop_dc);
    let scale = 1.0 / (m as f64).sqrt();
    let vectors = (0..n)
        .map(|j| {
            (first..first + m)
                .map(|k| {
                    let angle = TAU * ((k * j) % n) as f64 / n as f64;
                    C64::from_polar(scale, angle)
                })
                .collect()
        })
        .collect();
    let tag = if drop_dc { ",drop-dc" } else { "" };
    Ok(Frame::new(Field::Complex, m, vectors)?.with_label(format!("harmonic(M={m},N={n}{tag})")))
}

/// Real zero-sum unit norm tight frame from cosine/sine row pairs of the
/// `N`-point character table at frequencies `1..=M/2`; odd `M` adds the
/// alternating row `(-1)^j`, which requires even `N`.
pub fn real_harmonic_frame(m: usize, n: usize) -> Result<Frame> {
    if m == 0 || n <= m {
        return Err(FrameError::Infeasible(format!("real harmonic frame needs 1 <= M < N (M={m}, N={n})")));
    }
    if m % 2 == 1 && n % 2 == 1 {
        return Err(FrameError::Infeasible(format!(
            "real harmonic frame with odd M needs even N (M={m}, N={n})"
        )));
    }
    let pairs = m / 2;
    let alpha = (2.0 / m as f64).sqrt();
    let beta = (1.0 / m as f64).sqrt();
    let vectors = (0..n)
        .map(|j| {
            let mut v = Vec::with_capacity(m);
            for k in 1..=pairs {
                let angle = TAU * ((k * j) % n) as f64 / n as f64;
                v.push(c(alpha * angle.cos()));
                v.push(c(alpha * angle.sin()));
            }
            if m % 2 == 1 {
                v.push(c(if j % 2 == 0 { beta } else { -beta }));
            }
            v
        })
        .collect();
    Ok(Frame::new(Field::Real, m, vectors)?.with_label(format!("real-harmonic(M={m},N={n})")))
}

/// Catalogued real equiangular tight frames: the simplex for `(2, 3)` and six
/// icosahedral diagonals for `(3, 6)`.
pub fn etf_catalog(m: usize, n: usize) -> Result<Frame> {
    let frame = match (m, n) {
        (2, 3) => simplex_frame(2)?.with_label("etf(M=2,N=3)"),
        (3, 6) => {
            let g = (1.0 + 5f64.sqrt()) / 2.0;
            let s = 1.0 / (1.0 + g * g).sqrt();
            let rows = [
                [0.0, 1.0, g],
                [0.0, -1.0, g],
                [1.0, g, 0.0],
                [-1.0, g, 0.0],
                [g, 0.0, 1.0],
                [g, 0.0, -1.0],
            ];
            let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|x| x * s).collect()).collect();
            Frame::from_real_rows(&rows)?.with_label("etf(M=3,N=6)")
        }
        _ => return Err(FrameError::Unsupported { m, n }),
    };
    let summary = classify(&frame, CONSTRUCTED_TOL);
    let expected = (((n - m) as f64) / ((m * (n - 1)) as f64)).sqrt();
    match summary.coherence {
        Some(d) if summary.is_etf() && (d - expected).abs() <= 1e-9 => Ok(frame),
        _ => Err(FrameError::Infeasible(format!(
            "catalogued frame ({m},{n}) failed its equiangular self-check"
        ))),
    }
}

pub fn random_vector_in(rng: &mut SplitMix64, field: Field, m: usize) -> Vector {
    (0..m)
        .map(|_| match field {
            Field::Real => c(rng.normal()),
            Field::Complex => C64::new(rng.normal(), rng.normal()),
        })
        .collect()
}

pub fn random_unit_vector_in(rng: &mut SplitMix64, field: Field, m: usize) -> Vector {
    loop {
        if let Some(v) = linalg::normalized(&random_vector_in(rng, field, m)) {
            return v;
        }
    }
}

/// Real unit vector with Gaussian direction.
pub fn random_unit_vector(m: usize, seed: u64) -> Vector {
    random_unit_vector_in(&mut SplitMix64::new(seed), Field::Real, m)
}

/// Real random unit norm frame, Gaussian entries, columns normalized.
pub fn random_frame(m: usize, n: usize, seed: u64) -> Result<Frame> {
    random_frame_in(Field::Real, m, n, seed)
}

pub fn random_frame_in(field: Field, m: usize, n: usize, seed: u64) -> Result<Frame> {
    if m == 0 || n == 0 {
        return Err(FrameError::Infeasible("random frame needs M >= 1 and N >= 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let vectors = (0..n).map(|_| random_unit_vector_in(&mut rng, field, m)).collect();
    Ok(Frame::new(field, m, vectors)?.with_label(format!("random-{field}(M={m},N={n},seed={seed})")))
}

/// Frame in `H_{M1} (+) H_{M2}` whose first vectors live in the first summand
/// and the rest in the second.
pub fn direct_sum(a: &Frame, b: &Frame) -> Result<Frame> {
    let m = a.dim() + b.dim();
    let zero = C64::new(0.0, 0.0);
    let mut vectors: Vec<Vector> = a
        .vectors()
        .iter()
        .map(|v| v.iter().copied().chain(std::iter::repeat(zero).take(b.dim())).collect())
        .collect();
    vectors.extend(
        b.vectors()
            .iter()
            .map(|v| std::iter::repeat(zero).take(a.dim()).chain(v.iter().copied()).collect()),
    );
    let field = if a.is_real() && b.is_real() {
        Field::Real
    } else {
        Field::Complex
    };
    Ok(Frame::new(field, m, vectors)?.with_label(format!("{} (+) {}", a.descriptor(), b.descriptor())))
}

/// Pairwise inner product matrix entries `<phi_i, phi_j>` for `i != j`.
pub fn off_diagonal_inner_products(frame: &Frame) -> Vec<C64> {
    let n = frame.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(inner(frame.vector(i), frame.vector(j)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::optimal_frame_bounds;
    use crate::linalg::{gram, norm};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn onb_copies_examples() {
        let f = onb_copies(2, 3).unwrap();
        assert_eq!(f.len(), 6);
        let (a, b) = optimal_frame_bounds(&f);
        assert_close(a, 3.0, 1e-12);
        assert_close(b, 3.0, 1e-12);
        assert_eq!(f.vector(2), &basis_vector(2, 0));

        let one = onb_copies(1, 1).unwrap();
        assert_eq!(optimal_frame_bounds(&one), (1.0, 1.0));

        let (_, b) = optimal_frame_bounds(&onb_copies(2, 2).unwrap());
        assert_close(b, 2.0, 1e-12);
        assert!(onb_copies(0, 1).is_err());
    }

    #[test]
    fn simplex_gram_matches_explicit_construction() {
        // Gram of {(0,1), (-sqrt3/2,-1/2), (sqrt3/2,-1/2)} is 1 on the diagonal
        // and -1/2 off it; congruent frames share it
        let g = gram(simplex_frame(2).unwrap().vectors());
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { -0.5 };
                assert_close(g[(i, j)].re, want, 1e-12);
            }
        }
    }

    #[test]
    fn simplex_small_cases() {
        let f = simplex_frame(1).unwrap();
        let mut vals: Vec<f64> = f.vectors().iter().map(|v| v[0].re).collect();
        vals.sort_by(f64::total_cmp);
        assert_close(vals[0], -1.0, 1e-15);
        assert_close(vals[1], 1.0, 1e-15);

        let f = simplex_frame(3).unwrap();
        for z in off_diagonal_inner_products(&f) {
            assert_close(z.re, -1.0 / 3.0, 1e-12);
        }
        let (a, b) = optimal_frame_bounds(&f);
        assert_close(a, 4.0 / 3.0, 1e-12);
        assert_close(b, 4.0 / 3.0, 1e-12);
    }

    #[test]
    fn harmonic_examples() {
        let f = harmonic_frame(2, 4, true).unwrap();
        let (a, b) = optimal_frame_bounds(&f);
        assert_close(a, 2.0, 1e-12);
        assert_close(b, 2.0, 1e-12);
        assert!(norm(&f.vector_sum()) < 1e-12);

        let u = harmonic_frame(3, 3, false).unwrap();
        let (a, b) = optimal_frame_bounds(&u);
        assert_close(a, 1.0, 1e-12);
        assert_close(b, 1.0, 1e-12);

        let f = harmonic_frame(3, 7, true).unwrap();
        let (a, b) = optimal_frame_bounds(&f);
        assert_close(a, 7.0 / 3.0, 1e-12);
        assert_close(b, 7.0 / 3.0, 1e-12);

        assert!(harmonic_frame(3, 2, false).is_err());
        assert!(harmonic_frame(3, 3, true).is_err());
    }

    #[test]
    fn real_harmonic_is_zero_sum_untf() {
        for (m, n) in [(1, 4), (2, 3), (2, 5), (3, 6), (4, 9), (5, 8)] {
            let f = real_harmonic_frame(m, n).unwrap();
            let s = classify(&f, 1e-10);
            assert!(s.is_untf(), "({m},{n})");
            assert_close(s.upper_bound, n as f64 / m as f64, 1e-10);
            assert!(norm(&f.vector_sum()) < 1e-10, "({m},{n})");
        }
        assert!(real_harmonic_frame(3, 7).is_err());
        assert!(real_harmonic_frame(4, 4).is_err());
    }

    #[test]
    fn etf_catalog_examples() {
        let f = etf_catalog(3, 6).unwrap();
        let s = classify(&f, CONSTRUCTED_TOL);
        assert_close(s.coherence.unwrap(), 0.4472135955, 1e-10);
        let f = etf_catalog(2, 3).unwrap();
        assert_close(classify(&f, CONSTRUCTED_TOL).coherence.unwrap(), 0.5, 1e-12);
        assert_eq!(etf_catalog(4, 5).unwrap_err(), FrameError::Unsupported { m: 4, n: 5 });
    }

    #[test]
    fn random_is_deterministic_and_unit() {
        assert_eq!(random_frame(3, 5, 9).unwrap(), random_frame(3, 5, 9).unwrap());
        assert_ne!(random_frame(3, 5, 9).unwrap(), random_frame(3, 5, 10).unwrap());
        assert_close(norm(&random_unit_vector(4, 1)), 1.0, 1e-12);
        let cf = random_frame_in(Field::Complex, 2, 3, 5).unwrap();
        assert!(cf.vectors().iter().all(|v| (norm(v) - 1.0).abs() < 1e-12));
        assert!(cf.vectors().iter().any(|v| v.iter().any(|z| z.im != 0.0)));
    }

    #[test]
    fn random_frames_are_generically_not_tight() {
        for seed in 0..100 {
            let s = classify(&random_frame(2, 6, seed).unwrap(), CONSTRUCTED_TOL);
            assert!(s.is_unit_norm);
            assert!((s.upper_bound - s.lower_bound) / s.upper_bound > 1e-3, "seed {seed}");
        }
    }

    #[test]
    fn direct_sum_blocks() {
        let f = direct_sum(&simplex_frame(2).unwrap(), &onb_copies(1, 2).unwrap()).unwrap();
        assert_eq!((f.dim(), f.len()), (3, 5));
        assert_eq!(f.vector(4), &basis_vector(3, 2));
    }

    #[test]
    fn recipe_round_trip_builds_same_frame() {
        let r = FrameRecipe::Harmonic {
            dim: 2,
            count: 6,
            drop_dc: true,
            real: false,
        };
        assert_eq!(r.build().unwrap(), harmonic_frame(2, 6, true).unwrap());
    }
}
