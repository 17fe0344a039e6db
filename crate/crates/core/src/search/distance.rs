//! Sums of squared distances from a unit vector to the frame vectors.

use super::{multistart, BoundLedger, Direction, SearchConfig, SearchResult, SphereObjective};
use crate::coefficients::check_unit;
use crate::constructors::random_unit_vector_in;
use crate::error::{FrameError, Result};
use crate::frame::{classify, Frame, SpectralSummary, CONSTRUCTED_TOL, FILE_TOL};
use crate::linalg::{self, inner, norm, norm_sqr, Field, Vector, C64};
use crate::report::TheoremReport;
use crate::rng::SplitMix64;

pub const CLAIM_ZERO_SUM: &str = "sec6.zero-sum-2N";
pub const CLAIM_SIMPLEX: &str = "sec6.simplex-identity";
pub const CLAIM_PRODUCT_DISTANCE: &str = "sec6.product-distance-4N";
pub const CLAIM_ETF_DISTANCE: &str = "sec6.etf-distance-bounds";

/// Frame vectors count as unit when `| ||phi_i|| - 1 |` stays below this.
const UNIT_FRAME_TOL: f64 = FILE_TOL;
const ZERO_SUM_TOL: f64 = 1e-9;

fn require_unit_norm(frame: &Frame) -> Result<()> {
    let deviation = frame
        .vectors()
        .iter()
        .map(|v| (norm(v) - 1.0).abs())
        .fold(0.0, f64::max);
    if deviation > UNIT_FRAME_TOL {
        return Err(FrameError::NotUnitNormFrame { deviation });
    }
    Ok(())
}

fn direct_sum(frame: &Frame, x: &[C64]) -> f64 {
    frame
        .vectors()
        .iter()
        .map(|v| norm_sqr(&linalg::sub(x, v)))
        .sum()
}

/// `sum_i ||x - phi_i||^2`, summed term by term.
pub fn distance_sum(frame: &Frame, x: &[C64]) -> Result<f64> {
    require_unit_norm(frame)?;
    frame.check_dim(x)?;
    check_unit(x)?;
    Ok(direct_sum(frame, x))
}

/// `2N - 2 Re <x, sum_i phi_i>`
pub fn distance_sum_identity(frame: &Frame, x: &[C64]) -> Result<f64> {
    require_unit_norm(frame)?;
    frame.check_dim(x)?;
    check_unit(x)?;
    Ok(2.0 * frame.len() as f64 - 2.0 * inner(x, &frame.vector_sum()).re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceExtrema {
    /// `2N - 2 ||sum_i phi_i||`
    pub low: f64,
    /// `2N + 2 ||sum_i phi_i||`
    pub high: f64,
    pub sum_norm: f64,
}

/// Exact extrema over unit `x`, attained at `x = -+ s/||s||` with `s` the sum
/// of the frame vectors.
pub fn distance_sum_extrema(frame: &Frame) -> Result<DistanceExtrema> {
    require_unit_norm(frame)?;
    let n = frame.len() as f64;
    let sum_norm = norm(&frame.vector_sum());
    Ok(DistanceExtrema {
        low: 2.0 * n - 2.0 * sum_norm,
        high: 2.0 * n + 2.0 * sum_norm,
        sum_norm,
    })
}

struct DistanceObjective<'a> {
    frame: &'a Frame,
    sum: Vector,
}

impl SphereObjective for DistanceObjective<'_> {
    fn dim(&self) -> usize {
        self.frame.dim()
    }
    fn field(&self) -> Field {
        self.frame.field()
    }
    fn factors(&self) -> usize {
        1
    }
    fn value(&self, pts: &[Vector]) -> f64 {
        direct_sum(self.frame, &pts[0])
    }
    fn gradient(&self, pts: &[Vector]) -> Vec<Vector> {
        // 2 sum_i (x - phi_i)
        let n = self.frame.len() as f64;
        let mut g = linalg::scaled(&pts[0], linalg::c(2.0 * n));
        linalg::axpy(linalg::c(-2.0), &self.sum, &mut g);
        vec![g]
    }
}

/// Multistart minimum and maximum of the distance sum.
pub fn search_distance_extrema(frame: &Frame, cfg: &SearchConfig) -> Result<(SearchResult, SearchResult)> {
    require_unit_norm(frame)?;
    let obj = DistanceObjective {
        frame,
        sum: frame.vector_sum(),
    };
    Ok((
        multistart(&obj, Direction::Min, cfg)?,
        multistart(&obj, Direction::Max, cfg)?,
    ))
}

fn etf_summary(frame: &Frame) -> Result<SpectralSummary> {
    if !frame.is_real() {
        return Err(FrameError::Hypothesis("the ETF distance bounds are stated for real frames".into()));
    }
    let s = classify(frame, CONSTRUCTED_TOL);
    if !s.is_etf() {
        return Err(FrameError::Hypothesis("needs an equiangular tight frame".into()));
    }
    Ok(s)
}

/// Whether the weaker ETF distance interval `2N(1 -+ sqrt(2c))` is claimed:
/// `M >= 4`, or `M = 3` with `N <= 6`, or `M = 2` with `N <= 3` (the latter
/// through the improved factor at `N = 3`), and in all cases `N > M`.
pub fn cor242_gate(m: usize, n: usize) -> bool {
    let case = m >= 4 || (m == 3 && n <= 6) || (m == 2 && n <= 3);
    case && n > m
}

/// Distance-sum bounds for a real equiangular tight frame.
///
/// `prop226_*` is `2(N -+ sqrt(N[1 + (N-1)c]))` with `c` the common modulus
/// of the inner products; `cor242_*` is `2N(1 -+ sqrt(2c))`, using
/// `sqrt(5c/3)` for `M = 2, N = 3`; `exact_*` are the true extrema.
pub fn etf_distance_bounds(frame: &Frame) -> Result<BoundLedger> {
    let s = etf_summary(frame)?;
    let (m, n) = (frame.dim(), frame.len());
    let nf = n as f64;
    let c = s.coherence.unwrap_or(0.0);
    let radius = (nf * (1.0 + (nf - 1.0) * c)).sqrt();
    let gate = cor242_gate(m, n);
    let (factor, tag) = if m == 2 && n == 3 {
        ((5.0 * c / 3.0).sqrt(), "M=2, N=3 (improved factor)")
    } else {
        ((2.0 * c).sqrt(), "M>=4, or M=3 and N<=6, with N>M")
    };
    let exact = distance_sum_extrema(frame)?;

    let mut l = BoundLedger::default();
    l.push("prop226_low", 2.0 * (nf - radius), "real ETF", true);
    l.push("prop226_high", 2.0 * (nf + radius), "real ETF", true);
    l.push("cor242_low", 2.0 * nf * (1.0 - factor), tag, gate);
    l.push("cor242_high", 2.0 * nf * (1.0 + factor), tag, gate);
    l.push("exact_low", exact.low, "unit norm", true);
    l.push("exact_high", exact.high, "unit norm", true);
    l.push("coherence", c, "real ETF", true);
    l.best_upper = Some(2.0 * (nf + radius));
    Ok(l)
}

/// Checks the ETF distance claims on `frame`: the exact extrema lie inside
/// the `prop226` interval, its lower end is positive when `c < 1`, and where
/// the gate holds the `prop226` interval sits strictly inside `cor242`.
/// `margin` is the smallest slack over the parts that apply.
pub fn check_etf_distance_bounds(frame: &Frame) -> Result<TheoremReport> {
    let l = etf_distance_bounds(frame)?;
    let v = |name: &str| l.value(name);
    let (p_lo, p_hi) = (v("prop226_low").unwrap(), v("prop226_high").unwrap());
    let (e_lo, e_hi) = (v("exact_low").unwrap(), v("exact_high").unwrap());
    let c = v("coherence").unwrap();
    let tol = 1e-9;

    let mut parts = vec!["contains-exact"];
    let mut margin = (e_lo - p_lo).min(p_hi - e_hi);
    let mut pass = margin >= -tol;
    if c < 1.0 {
        parts.push("positive");
        margin = margin.min(p_lo);
        pass &= p_lo > 0.0;
    }
    if let (Some(c_lo), Some(c_hi)) = (v("cor242_low"), v("cor242_high")) {
        parts.push("nested");
        let nest = (p_lo - c_lo).min(c_hi - p_hi);
        margin = margin.min(nest);
        pass &= nest > 0.0;
    }
    Ok(TheoremReport::evaluated(CLAIM_ETF_DISTANCE, frame, p_lo, p_hi, margin, tol)
        .with_pass(pass)
        .with_reason(parts.join(",")))
}

fn sweep_deviation(frame: &Frame, target: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    (0..samples)
        .map(|_| {
            let x = random_unit_vector_in(&mut rng, frame.field(), frame.dim());
            (direct_sum(frame, &x) - target).abs()
        })
        .fold(0.0, f64::max)
}

/// For a unit norm tight frame whose vectors sum to zero the distance sum is
/// `2N` at every unit `x`. Frames outside the hypothesis get a violated report.
pub fn zero_sum_identity(frame: &Frame, samples: usize, seed: u64) -> Result<TheoremReport> {
    let s = classify(frame, CONSTRUCTED_TOL);
    let sum_norm = norm(&frame.vector_sum());
    if !s.is_untf() || sum_norm > ZERO_SUM_TOL {
        return Ok(TheoremReport::violated(
            CLAIM_ZERO_SUM,
            frame,
            format!(
                "needs a unit norm tight frame with zero sum (tight: {}, unit norm: {}, |sum| = {:.3e})",
                s.is_tight, s.is_unit_norm, sum_norm
            ),
        ));
    }
    let target = 2.0 * frame.len() as f64;
    let dev = sweep_deviation(frame, target, samples, seed);
    Ok(TheoremReport::evaluated(CLAIM_ZERO_SUM, frame, target + dev, target, 0.0 - dev, 1e-8).with_samples(samples, seed))
}

/// For the simplex, `sum_i ||x - phi_i||^2 = 2(M+1)`. The hypothesis is a
/// real frame of `M+1` unit vectors with all inner products `-1/M`.
pub fn simplex_identity(frame: &Frame, samples: usize, seed: u64) -> Result<TheoremReport> {
    let (m, n) = (frame.dim(), frame.len());
    let target_ip = -1.0 / m as f64;
    let is_simplex = frame.is_real()
        && n == m + 1
        && classify(frame, CONSTRUCTED_TOL).is_unit_norm
        && (0..n).all(|i| {
            (0..n)
                .filter(|&j| j != i)
                .all(|j| (inner(frame.vector(i), frame.vector(j)).re - target_ip).abs() <= 1e-9)
        });
    if !is_simplex {
        return Ok(TheoremReport::violated(
            CLAIM_SIMPLEX,
            frame,
            "needs M+1 real unit vectors with inner products -1/M",
        ));
    }
    let target = 2.0 * (m as f64 + 1.0);
    let dev = sweep_deviation(frame, target, samples, seed);
    Ok(TheoremReport::evaluated(CLAIM_SIMPLEX, frame, target + dev, target, 0.0 - dev, 1e-9).with_samples(samples, seed))
}

/// `sum_i ||x - phi_i||^2 ||y - phi_i||^2` for a real zero-sum unit norm
/// tight frame, checked against `4N(1 + <x,y>/M)` and the interval
/// `[4N(1 - 1/M), 4N(1 + 1/M)]`.
pub fn product_distance_sum(frame: &Frame, x: &[C64], y: &[C64]) -> Result<(f64, TheoremReport)> {
    let s = classify(frame, CONSTRUCTED_TOL);
    if !frame.is_real() || !s.is_untf() || norm(&frame.vector_sum()) > ZERO_SUM_TOL {
        return Err(FrameError::Hypothesis(
            "needs a real unit norm tight frame whose vectors sum to zero".into(),
        ));
    }
    frame.check_dim(x)?;
    frame.check_dim(y)?;
    check_unit(x)?;
    check_unit(y)?;
    let value: f64 = frame
        .vectors()
        .iter()
        .map(|v| norm_sqr(&linalg::sub(x, v)) * norm_sqr(&linalg::sub(y, v)))
        .sum();
    let (m, n) = (frame.dim() as f64, frame.len() as f64);
    let predicted = 4.0 * n * (1.0 + inner(x, y).re / m);
    let (lo, hi) = (4.0 * n * (1.0 - 1.0 / m), 4.0 * n * (1.0 + 1.0 / m));
    let tol = 1e-8;
    let identity_gap = (value - predicted).abs();
    let margin = (tol - identity_gap).min(value - lo).min(hi - value);
    let pass = identity_gap <= tol && value >= lo - tol && value <= hi + tol;
    let report = TheoremReport::evaluated(CLAIM_PRODUCT_DISTANCE, frame, value, predicted, margin, tol).with_pass(pass);
    Ok((value, report))
}
