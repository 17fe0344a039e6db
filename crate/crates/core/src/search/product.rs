//! The bilinear product sum `sum_i |<x,phi_i>| |<y,phi_i>|` over pairs of unit
//! vectors, its upper bounds, the tight-frame lower bound and the fixed-vector
//! objective for equiangular frames.

use super::{multistart, BoundLedger, Direction, SearchConfig, SearchResult, SphereObjective};
use crate::coefficients::check_unit;
use crate::error::{FrameError, Result};
use crate::frame::{classify, coefficients_unchecked, Frame, CONSTRUCTED_TOL};
use crate::linalg::{self, inner, modulus, normalized, Field, Vector, C64};
use crate::report::TheoremReport;
use crate::spark::{annihilating_pair, complement_property, subset_cap, COMPLEMENT_CAP};

pub const CLAIM_UNTF_LOWER: &str = "sec5.untf-lower";
pub const CLAIM_ETF_FIXED: &str = "sec5.etf-fixed-vector";

/// Coefficients this small (relative to the largest frame vector) count as
/// exact zeros in the active set.
const ACTIVE_TOL: f64 = 1e-12;

pub fn product_sum(frame: &Frame, x: &[C64], y: &[C64]) -> Result<f64> {
    frame.check_dim(x)?;
    frame.check_dim(y)?;
    check_unit(x)?;
    check_unit(y)?;
    Ok(product_sum_unchecked(frame, x, y))
}

fn product_sum_unchecked(frame: &Frame, x: &[C64], y: &[C64]) -> f64 {
    frame
        .vectors()
        .iter()
        .map(|v| modulus(inner(x, v)) * modulus(inner(y, v)))
        .sum()
}

fn phase(t: C64) -> C64 {
    let r = modulus(t);
    if r == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        t / r
    }
}

/// `sum_i w_i sgn(<x,phi_i>) phi_i`, the gradient of `x -> sum_i w_i |<x,phi_i>|`
/// away from its kinks.
fn weighted_abs_gradient(frame: &Frame, x: &[C64], weights: &[f64]) -> Vector {
    let mut g = vec![C64::new(0.0, 0.0); frame.dim()];
    for (v, &w) in frame.vectors().iter().zip(weights) {
        if w != 0.0 {
            linalg::axpy(phase(inner(x, v)) * w, v, &mut g);
        }
    }
    g
}

/// Gradient of the product sum in `x` and in `y`. Terms with a vanishing
/// coefficient contribute nothing.
pub fn product_sum_gradient(frame: &Frame, x: &[C64], y: &[C64]) -> Result<(Vector, Vector)> {
    frame.check_dim(x)?;
    frame.check_dim(y)?;
    let wx: Vec<f64> = coefficients_unchecked(frame, y).iter().map(|&t| modulus(t)).collect();
    let wy: Vec<f64> = coefficients_unchecked(frame, x).iter().map(|&t| modulus(t)).collect();
    Ok((weighted_abs_gradient(frame, x, &wx), weighted_abs_gradient(frame, y, &wy)))
}

fn active_set(frame: &Frame, x: &[C64], weights: &[f64], scale: f64) -> Vec<Vector> {
    frame
        .vectors()
        .iter()
        .zip(weights)
        .filter(|(v, &w)| w > 0.0 && modulus(inner(x, v)) <= ACTIVE_TOL * scale)
        .map(|(v, _)| v.clone())
        .collect()
}

/// Unit vectors orthogonal to the `r` frame vectors with the smallest
/// coefficients against `x`, for `r = 1..M-1`. Only indices with positive
/// weight are considered, since the others do not enter the objective.
fn vertex_snaps(frame: &Frame, x: &[C64], weights: &[f64], scale: f64) -> Vec<Vector> {
    let m = frame.dim();
    let coeffs: Vec<f64> = coefficients_unchecked(frame, x).iter().map(|&t| modulus(t)).collect();
    let mut order: Vec<usize> = (0..frame.len()).filter(|&i| weights[i] > ACTIVE_TOL * scale).collect();
    order.sort_by(|&i, &j| coeffs[i].total_cmp(&coeffs[j]));
    let mut basis = Vec::with_capacity(m);
    let mut out = Vec::new();
    for &i in &order {
        if basis.len() + 1 >= m {
            break;
        }
        if !linalg::gram_schmidt_push(&mut basis, frame.vector(i)) {
            continue;
        }
        if let Some(p) = normalized(&linalg::remove_span(x, &basis)) {
            out.push(p);
        }
    }
    out
}

fn frame_scale(frame: &Frame) -> f64 {
    frame.vectors().iter().map(|v| linalg::norm(v)).fold(f64::MIN_POSITIVE, f64::max)
}

struct ProductObjective<'a> {
    frame: &'a Frame,
    scale: f64,
}

impl ProductObjective<'_> {
    fn weights_for(&self, pts: &[Vector], k: usize) -> Vec<f64> {
        coefficients_unchecked(self.frame, &pts[1 - k]).iter().map(|&t| modulus(t)).collect()
    }
}

impl SphereObjective for ProductObjective<'_> {
    fn dim(&self) -> usize {
        self.frame.dim()
    }
    fn field(&self) -> Field {
        self.frame.field()
    }
    fn factors(&self) -> usize {
        2
    }
    fn value(&self, pts: &[Vector]) -> f64 {
        product_sum_unchecked(self.frame, &pts[0], &pts[1])
    }
    fn gradient(&self, pts: &[Vector]) -> Vec<Vector> {
        let (gx, gy) = product_sum_gradient(self.frame, &pts[0], &pts[1]).expect("dimensions checked");
        vec![gx, gy]
    }
    fn active(&self, pts: &[Vector], k: usize) -> Vec<Vector> {
        active_set(self.frame, &pts[k], &self.weights_for(pts, k), self.scale)
    }
    fn snaps(&self, pts: &[Vector], k: usize) -> Vec<Vector> {
        vertex_snaps(self.frame, &pts[k], &self.weights_for(pts, k), self.scale)
    }
}

/// `x -> sum_i w_i |<x, phi_i>|` for fixed weights.
struct WeightedAbsObjective<'a> {
    frame: &'a Frame,
    weights: Vec<f64>,
    scale: f64,
}

impl SphereObjective for WeightedAbsObjective<'_> {
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
        weighted_abs_sum(self.frame, &self.weights, &pts[0])
    }
    fn gradient(&self, pts: &[Vector]) -> Vec<Vector> {
        vec![weighted_abs_gradient(self.frame, &pts[0], &self.weights)]
    }
    fn active(&self, pts: &[Vector], _k: usize) -> Vec<Vector> {
        active_set(self.frame, &pts[0], &self.weights, self.scale)
    }
    fn snaps(&self, pts: &[Vector], _k: usize) -> Vec<Vector> {
        vertex_snaps(self.frame, &pts[0], &self.weights, self.scale)
    }
}

fn weighted_abs_sum(frame: &Frame, weights: &[f64], x: &[C64]) -> f64 {
    frame
        .vectors()
        .iter()
        .zip(weights)
        .map(|(v, w)| w * modulus(inner(x, v)))
        .sum()
}

fn require_frame(frame: &Frame) -> Result<()> {
    let s = classify(frame, CONSTRUCTED_TOL);
    if !s.is_frame {
        return Err(FrameError::NotAFrame {
            lower_bound: s.lower_bound,
        });
    }
    Ok(())
}

/// Multistart search for the extreme product sum, without certificates.
pub fn search_product_sum(frame: &Frame, dir: Direction, cfg: &SearchConfig) -> Result<SearchResult> {
    require_frame(frame)?;
    let obj = ProductObjective {
        frame,
        scale: frame_scale(frame),
    };
    multistart(&obj, dir, cfg)
}

/// [`search_product_sum`], except that a minimum is replaced by the exact
/// value 0 when the complement property fails and an annihilating pair is
/// available. Frames above the subset cap keep the searched value.
pub fn extremize_product_sum(frame: &Frame, dir: Direction, cfg: &SearchConfig) -> Result<SearchResult> {
    let mut result = search_product_sum(frame, dir, cfg)?;
    if dir == Direction::Min && frame.len() <= subset_cap(COMPLEMENT_CAP) {
        if let Some(w) = complement_property(frame)?.witness {
            let (x, y) = annihilating_pair(frame, &w)?;
            result.witness = vec![x, y];
            result.value = 0.0;
            result.certified = true;
        }
    }
    Ok(result)
}

/// Upper bounds on the supremum of the product sum. `best_upper` follows the
/// comparison `N - sqrt(N) + 2 >= 2M` for unit norm tight frames and takes
/// the smaller bound otherwise.
pub fn product_sum_bounds(frame: &Frame) -> Result<BoundLedger> {
    let s = classify(frame, CONSTRUCTED_TOL);
    let (m, n) = (frame.dim() as f64, frame.len() as f64);
    let b = s.upper_bound;
    let mut ledger = BoundLedger::default();
    ledger.push("hoelder_B", b, "frame", s.is_frame);
    let count_ok = s.is_frame && frame.len() + 1 >= 2 * frame.dim();
    let count = (n - 2.0 * m + 2.0) * (b / m).sqrt();
    ledger.push("count_bound", count, "N >= 2M-1", count_ok);
    if s.is_etf() {
        let c = s.coherence.unwrap_or(0.0);
        ledger.push("etf_fixed_lower", n / m * c, "equiangular tight", true);
    }
    ledger.best_upper = match (s.is_frame, count_ok) {
        (false, _) => None,
        (true, false) => Some(b),
        (true, true) if s.is_untf() => Some(if n - n.sqrt() + 2.0 >= 2.0 * m { b } else { count }),
        (true, true) => Some(b.min(count)),
    };
    Ok(ledger)
}

/// For a unit norm tight frame, `(N/M) |<x,y>|` is at most the product sum.
pub fn untf_pair_lower(frame: &Frame, x: &[C64], y: &[C64]) -> Result<TheoremReport> {
    let s = classify(frame, CONSTRUCTED_TOL);
    if !s.is_untf() {
        return Err(FrameError::Hypothesis("needs a unit norm tight frame".into()));
    }
    let p = product_sum(frame, x, y)?;
    let lower = frame.len() as f64 / frame.dim() as f64 * inner(x, y).norm();
    Ok(TheoremReport::evaluated(CLAIM_UNTF_LOWER, frame, lower, p, p - lower, 1e-9))
}

/// `x -> sum_i |<phi_j, phi_i>| |<x, phi_i>|`
pub fn etf_fixed_vector_objective(frame: &Frame, j: usize, x: &[C64]) -> Result<f64> {
    frame.check_dim(x)?;
    check_unit(x)?;
    let w = fixed_weights(frame, j)?;
    Ok(weighted_abs_sum(frame, &w, x))
}

fn fixed_weights(frame: &Frame, j: usize) -> Result<Vec<f64>> {
    if j >= frame.len() {
        return Err(FrameError::InvalidParameter(format!(
            "index {j} out of range for N={}",
            frame.len()
        )));
    }
    let pj = frame.vector(j);
    Ok(frame.vectors().iter().map(|v| inner(pj, v).norm()).collect())
}

/// `(N/M) sqrt((N-M)/(M(N-1)))`
pub fn etf_fixed_vector_value(m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    let c = if n > 1.0 { ((n - m) / (m * (n - 1.0))).sqrt() } else { 0.0 };
    n / m * c
}

/// Closed forms of the fixed-vector bound for `N = 2M` and `N = M(M+1)/2`,
/// when they apply.
pub fn etf_fixed_vector_special_cases(m: usize, n: usize) -> Vec<(&'static str, f64)> {
    let mf = m as f64;
    let mut out = Vec::new();
    if n == 2 * m {
        out.push(("N=2M", 2.0 / (2.0 * mf - 1.0).sqrt()));
    }
    if 2 * n == m * (m + 1) {
        out.push(("N=M(M+1)/2", (mf + 1.0) / (2.0 * (mf + 2.0).sqrt())));
    }
    out
}

/// Minimizes the fixed-vector objective for index `j` and compares with
/// `(N/M) c`. Special-case closed forms must agree with the general formula
/// to `1e-12`.
pub fn etf_fixed_vector_bound(frame: &Frame, j: usize, cfg: &SearchConfig) -> Result<TheoremReport> {
    let s = classify(frame, CONSTRUCTED_TOL);
    if !s.is_etf() {
        return Err(FrameError::Hypothesis("needs an equiangular tight frame".into()));
    }
    let (m, n) = (frame.dim(), frame.len());
    let bound = n as f64 / m as f64 * s.coherence.unwrap_or(0.0);
    let general = etf_fixed_vector_value(m, n);
    let specials = etf_fixed_vector_special_cases(m, n);
    let agree = (bound - general).abs() <= 1e-9 && specials.iter().all(|(_, v)| (v - general).abs() <= 1e-12);

    let obj = WeightedAbsObjective {
        frame,
        weights: fixed_weights(frame, j)?,
        scale: frame_scale(frame),
    };
    let found = multistart(&obj, Direction::Min, cfg)?;
    let mut reason = format!("j={j}");
    for (name, v) in &specials {
        reason.push_str(&format!(" {name}:{}", crate::frame::format_number(*v)));
    }
    let report = TheoremReport::evaluated(CLAIM_ETF_FIXED, frame, found.value, bound, found.value - bound, 1e-6);
    let pass = report.pass && agree;
    Ok(report
        .with_pass(pass)
        .with_reason(reason)
        .with_samples(cfg.starts, cfg.seed)
        .with_witness("x", found.x(), frame.field()))
}

/// Minimizer of the fixed-vector objective, for callers that want the
/// search result itself.
pub fn search_etf_fixed_vector(frame: &Frame, j: usize, cfg: &SearchConfig) -> Result<SearchResult> {
    require_frame(frame)?;
    let obj = WeightedAbsObjective {
        frame,
        weights: fixed_weights(frame, j)?,
        scale: frame_scale(frame),
    };
    multistart(&obj, Direction::Min, cfg)
}
