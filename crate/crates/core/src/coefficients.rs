//! Distribution of frame coefficients: support counts, weak majorization
//! against flat vectors, tail equality, the modulus-one count and the
//! orthogonality-inflated flat bound.

use crate::error::{FrameError, Result};
use crate::frame::{classify, coefficients_unchecked, Frame, SpectralSummary, CONSTRUCTED_TOL};
use crate::linalg::{self, norm, C64};
use crate::report::TheoremReport;

/// Slack used when certifying an integer count against a real bound.
pub const INTEGRALITY_EPS: f64 = 1e-9;
const UNIT_TOL: f64 = 1e-9;
const PREFIX_TOL: f64 = 1e-10;

pub const CLAIM_FLAT: &str = "sec4.flat-majorization";
pub const CLAIM_UNTF_FLAT: &str = "sec4.untf-majorization";
pub const CLAIM_INFLATION: &str = "sec4.orthogonal-inflation";

/// Default threshold for treating `<x, phi_i>` as zero: `1e-9 * sqrt(B)`.
pub fn default_zero_tol(upper_bound: f64) -> f64 {
    1e-9 * upper_bound.max(0.0).sqrt()
}

pub(crate) fn check_unit(x: &[C64]) -> Result<()> {
    let n = norm(x);
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(FrameError::NotUnit { norm: n });
    }
    Ok(())
}

fn summary_of_frame(frame: &Frame) -> Result<SpectralSummary> {
    let s = classify(frame, CONSTRUCTED_TOL);
    if !s.is_frame {
        return Err(FrameError::NotAFrame {
            lower_bound: s.lower_bound,
        });
    }
    Ok(s)
}

/// Squared coefficient moduli in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientProfile {
    /// `a_1 >= a_2 >= ... >= a_N >= 0`
    pub values: Vec<f64>,
    /// `values[k] = |<x, phi_{permutation[k]}>|^2`; ties keep frame order.
    pub permutation: Vec<usize>,
    pub x_norm: f64,
}

impl CoefficientProfile {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn prefix_sums(&self) -> Vec<f64> {
        prefix_sums(&self.values)
    }
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

pub fn profile(frame: &Frame, x: &[C64]) -> Result<CoefficientProfile> {
    frame.check_dim(x)?;
    check_unit(x)?;
    let sq: Vec<f64> = coefficients_unchecked(frame, x).iter().map(|z| z.norm_sqr()).collect();
    let mut permutation: Vec<usize> = (0..sq.len()).collect();
    // sort_by is stable, so equal values stay in frame order
    permutation.sort_by(|&i, &j| sq[j].total_cmp(&sq[i]));
    Ok(CoefficientProfile {
        values: permutation.iter().map(|&i| sq[i]).collect(),
        permutation,
        x_norm: norm(x),
    })
}

/// A flat comparison vector: `value` repeated `multiplicity` times followed by
/// `zeros` zeros.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatComparison {
    pub value: f64,
    pub multiplicity: usize,
    pub zeros: usize,
}

impl FlatComparison {
    pub fn new(value: f64, multiplicity: usize, zeros: usize) -> Self {
        assert!(value >= 0.0);
        FlatComparison {
            value,
            multiplicity,
            zeros,
        }
    }

    pub fn len(&self) -> usize {
        self.multiplicity + self.zeros
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![self.value; self.multiplicity];
        v.resize(self.len(), 0.0);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorizationCheck {
    pub holds: bool,
    /// First `k` (1-based) with `sum_{i<=k} a_i < sum_{i<=k} b_i`.
    pub failing_prefix: Option<usize>,
    /// `min_k (prefix_a(k) - prefix_b(k))`
    pub min_margin: f64,
}

fn validate_sorted(v: &[f64]) -> Result<()> {
    for (i, &x) in v.iter().enumerate() {
        if x < 0.0 || !x.is_finite() || (i > 0 && x > v[i - 1]) {
            return Err(FrameError::NotSorted { index: i });
        }
    }
    Ok(())
}

fn padded(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len().max(b.len());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.resize(n, 0.0);
    b.resize(n, 0.0);
    (a, b)
}

/// `a >_W b`: every prefix sum of `a` dominates that of `b`, after padding the
/// shorter vector with zeros. Equality is accepted up to a relative `1e-10`.
pub fn weakly_majorizes(a: &[f64], b: &[f64]) -> Result<MajorizationCheck> {
    validate_sorted(a)?;
    validate_sorted(b)?;
    let (a, b) = padded(a, b);
    let pa = prefix_sums(&a);
    let pb = prefix_sums(&b);
    let mut failing_prefix = None;
    let mut min_margin = f64::INFINITY;
    for k in 0..pa.len() {
        let margin = pa[k] - pb[k];
        min_margin = min_margin.min(margin);
        if failing_prefix.is_none() && margin < -PREFIX_TOL * pb[k].abs().max(1.0) {
            failing_prefix = Some(k + 1);
        }
    }
    if pa.is_empty() {
        min_margin = 0.0;
    }
    Ok(MajorizationCheck {
        holds: failing_prefix.is_none(),
        failing_prefix,
        min_margin,
    })
}

/// `a > b`: weak majorization plus equal totals within `1e-10`.
pub fn majorizes(a: &[f64], b: &[f64]) -> Result<bool> {
    let weak = weakly_majorizes(a, b)?;
    let ta: f64 = a.iter().sum();
    let tb: f64 = b.iter().sum();
    Ok(weak.holds && (ta - tb).abs() <= PREFIX_TOL * ta.abs().max(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport {
    /// `J_x = {i : |<x, phi_i>| > zero_tol}`
    pub j_indices: Vec<usize>,
    /// `K_x = {i : |<x, phi_i>|^2 > C A / N}`
    pub k_indices: Vec<usize>,
    /// `A / D`
    pub j_bound: f64,
    /// `(1 - C) A / D`
    pub k_bound: f64,
    /// `C A / N`
    pub k_threshold: f64,
    pub c: f64,
    /// `max_i ||phi_i||^2`
    pub d: f64,
    pub zero_tol: f64,
    /// `|J_x| - ceil(A/D - eps)`
    pub j_margin: i64,
    /// `|K_x| - ceil((1-C)A/D - eps)`
    pub k_margin: i64,
    /// Every inequality in `A <= sum_J |<x,phi_i>|^2 <= sum_J ||phi_i||^2 <= D |J_x|`
    /// is tight to `1e-9`.
    pub equality_case: bool,
    /// Whether `{phi_i : i in J_x}` has rank one; checked in the equality case.
    pub rank_one: Option<bool>,
}

impl SupportReport {
    pub fn j_count(&self) -> usize {
        self.j_indices.len()
    }

    pub fn k_count(&self) -> usize {
        self.k_indices.len()
    }

    pub fn certified(&self) -> bool {
        self.j_margin >= 0 && self.k_margin >= 0 && self.rank_one != Some(false)
    }
}

fn ceil_count(bound: f64) -> i64 {
    (bound - INTEGRALITY_EPS).ceil() as i64
}

pub fn support_counts(frame: &Frame, x: &[C64], c: f64, zero_tol: f64) -> Result<SupportReport> {
    let summary = summary_of_frame(frame)?;
    support_counts_with(frame, &summary, x, c, zero_tol)
}

/// [`support_counts`] with a precomputed spectral summary.
pub fn support_counts_with(
    frame: &Frame,
    summary: &SpectralSummary,
    x: &[C64],
    c: f64,
    zero_tol: f64,
) -> Result<SupportReport> {
    if !(c > 0.0 && c < 1.0) {
        return Err(FrameError::InvalidParameter(format!("C must lie in (0, 1), got {c}")));
    }
    if !summary.is_frame {
        return Err(FrameError::NotAFrame {
            lower_bound: summary.lower_bound,
        });
    }
    frame.check_dim(x)?;
    check_unit(x)?;
    let a = summary.lower_bound;
    let d = summary.max_norm_sqr;
    let n = frame.len() as f64;
    let coeffs = coefficients_unchecked(frame, x);
    let k_threshold = c * a / n;

    let j_indices: Vec<usize> = (0..coeffs.len()).filter(|&i| coeffs[i].norm() > zero_tol).collect();
    let k_indices: Vec<usize> = j_indices
        .iter()
        .copied()
        .filter(|&i| coeffs[i].norm_sqr() > k_threshold)
        .collect();
    let j_bound = a / d;
    let k_bound = (1.0 - c) * a / d;

    let j_count = j_indices.len() as f64;
    let coeff_mass: f64 = j_indices.iter().map(|&i| coeffs[i].norm_sqr()).sum();
    let norm_mass: f64 = j_indices.iter().map(|&i| linalg::norm_sqr(frame.vector(i))).sum();
    let close = |p: f64, q: f64| (p - q).abs() <= 1e-9 * p.abs().max(q.abs()).max(1.0);
    let equality_case = close(a, coeff_mass) && close(coeff_mass, norm_mass) && close(norm_mass, d * j_count);
    let rank_one = equality_case.then(|| linalg::rank(&frame.select(&j_indices)) == 1);

    Ok(SupportReport {
        j_margin: j_indices.len() as i64 - ceil_count(j_bound),
        k_margin: k_indices.len() as i64 - ceil_count(k_bound),
        j_indices,
        k_indices,
        j_bound,
        k_bound,
        k_threshold,
        c,
        d,
        zero_tol,
        equality_case,
        rank_one,
    })
}

/// Weak majorization of the coefficient profile over `flat`, reported as
/// `claim`. `lhs` is `a_1`, `rhs` the flat value, `margin` the smallest prefix
/// slack.
pub fn flat_majorization_report(
    frame: &Frame,
    x: &[C64],
    flat: FlatComparison,
    claim: &str,
) -> Result<TheoremReport> {
    let a = profile(frame, x)?;
    let check = weakly_majorizes(&a.values, &flat.to_vec())?;
    let mut report = TheoremReport::evaluated(claim, frame, a.values[0], flat.value, check.min_margin, 1e-9);
    if !check.holds {
        report = report.with_pass(false);
    }
    Ok(report)
}

/// Checks `a >_W (A/N, ..., A/N)`; for unit norm tight frames the comparison
/// is `(1/M, ..., 1/M)`.
pub fn check_flat_majorization(frame: &Frame, x: &[C64]) -> Result<TheoremReport> {
    let s = summary_of_frame(frame)?;
    let n = frame.len();
    if s.is_untf() {
        let flat = FlatComparison::new(1.0 / frame.dim() as f64, n, 0);
        flat_majorization_report(frame, x, flat, CLAIM_UNTF_FLAT)
    } else {
        let flat = FlatComparison::new(s.lower_bound / n as f64, n, 0);
        flat_majorization_report(frame, x, flat, CLAIM_FLAT)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEquality {
    /// Smallest `m` (1-based) with `sum_{i<=m} a_i = m A/N`.
    pub m: usize,
    /// `a_i = A/N` for all `i > m`, within `1e-9`.
    pub verified: bool,
    pub max_tail_deviation: f64,
}

pub fn tail_equality(frame: &Frame, x: &[C64]) -> Result<Option<TailEquality>> {
    let s = summary_of_frame(frame)?;
    let a = profile(frame, x)?;
    let flat = s.lower_bound / frame.len() as f64;
    let prefixes = a.prefix_sums();
    let hit = prefixes
        .iter()
        .enumerate()
        .find(|(k, &p)| (p - (*k as f64 + 1.0) * flat).abs() <= PREFIX_TOL * p.abs().max(1.0));
    Ok(hit.map(|(k, _)| {
        let m = k + 1;
        let max_tail_deviation = a.values[m..].iter().map(|v| (v - flat).abs()).fold(0.0, f64::max);
        TailEquality {
            m,
            verified: max_tail_deviation <= 1e-9,
            max_tail_deviation,
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusOne {
    /// Number of `a_i >= 1 - 1e-9`.
    pub count: usize,
    pub floor_lambda1: usize,
    pub pass: bool,
}

/// At most `floor(lambda_1)` squared coefficients of a unit vector against a
/// unit norm frame can equal one.
pub fn modulus_one_bound(frame: &Frame, x: &[C64]) -> Result<ModulusOne> {
    let s = classify(frame, CONSTRUCTED_TOL);
    if !s.is_unit_norm {
        let deviation = frame
            .vectors()
            .iter()
            .map(|v| (norm(v) - 1.0).abs())
            .fold(0.0, f64::max);
        return Err(FrameError::NotUnitNormFrame { deviation });
    }
    let a = profile(frame, x)?;
    let count = a.values.iter().filter(|&&v| v >= 1.0 - 1e-9).count();
    // lambda_1 = 2 may come out as 1.9999999999999996
    let floor_lambda1 = (s.upper_bound + INTEGRALITY_EPS).floor() as usize;
    Ok(ModulusOne {
        count,
        floor_lambda1,
        pass: count <= floor_lambda1,
    })
}

/// With `K` frame vectors orthogonal to `x`, the profile weakly majorizes
/// `(A/(N-K), ..., A/(N-K), 0, ..., 0)`.
pub fn orthogonal_inflation(frame: &Frame, x: &[C64], zero_tol: f64) -> Result<TheoremReport> {
    let s = summary_of_frame(frame)?;
    frame.check_dim(x)?;
    check_unit(x)?;
    let n = frame.len();
    let k = coefficients_unchecked(frame, x)
        .iter()
        .filter(|z| z.norm() <= zero_tol)
        .count();
    if k == n {
        return Err(FrameError::NotAFrame {
            lower_bound: s.lower_bound,
        });
    }
    let flat = FlatComparison::new(s.lower_bound / (n - k) as f64, n - k, k);
    let report = flat_majorization_report(frame, x, flat, CLAIM_INFLATION)?;
    Ok(report.with_reason(format!("K={k}")))
}
