//! Span structure of frame subsets: full spark, the complement property and
//! the annihilating pairs it rules out.

use rayon::prelude::*;

use crate::error::{FrameError, Result};
use crate::frame::{coefficients_unchecked, Frame};
use crate::linalg::{self, normalized, Vector, C64};

pub const FULL_SPARK_CAP: usize = 24;
pub const COMPLEMENT_CAP: usize = 20;
/// Overrides both subset caps when set to a positive integer.
pub const CAP_ENV: &str = "FRAME_SUBSET_CAP";

/// `default`, unless `FRAME_SUBSET_CAP` holds a positive integer.
pub fn subset_cap(default: usize) -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(default)
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(FrameError::CapExceeded { n, cap });
    }
    Ok(())
}

fn spans(frame: &Frame, indices: &[usize]) -> bool {
    indices.len() >= frame.dim() && linalg::rank(&frame.select(indices)) == frame.dim()
}

fn zero_vectors(frame: &Frame) -> Vec<usize> {
    (0..frame.len())
        .filter(|&i| frame.vector(i).iter().all(|z| *z == C64::new(0.0, 0.0)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullSpark {
    pub is_full_spark: bool,
    /// Lexicographically first dependent `M`-subset (0-based).
    pub failing_subset: Option<Vec<usize>>,
}

/// Calls `f` on every `k`-subset of `lo..n` in lexicographic order, each
/// prefixed by `prefix`, stopping at the first `Some`.
fn first_combination<T>(
    prefix: &mut Vec<usize>,
    lo: usize,
    n: usize,
    k: usize,
    f: &impl Fn(&[usize]) -> Option<T>,
) -> Option<T> {
    if k == 0 {
        return f(prefix);
    }
    for i in lo..=(n - k) {
        prefix.push(i);
        let hit = first_combination(prefix, i + 1, n, k - 1, f);
        prefix.pop();
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// First `k`-subset of `0..n` (lexicographic) on which `f` returns `Some`.
/// Blocks sharing the leading two indices run in parallel; the coordinator
/// keeps the first block with a hit, so the answer does not depend on
/// scheduling.
fn first_subset_par<T: Send>(n: usize, k: usize, f: impl Fn(&[usize]) -> Option<T> + Sync) -> Option<T> {
    if k == 0 || k > n {
        return first_combination(&mut Vec::new(), 0, n, k, &f);
    }
    if k == 1 {
        return (0..n).into_par_iter().find_map_first(|i| f(&[i]));
    }
    let heads: Vec<(usize, usize)> = (0..=(n - k))
        .flat_map(|i| ((i + 1)..=(n - k + 1)).map(move |j| (i, j)))
        .collect();
    heads.into_par_iter().find_map_first(|(i, j)| {
        let mut prefix = vec![i, j];
        first_combination(&mut prefix, j + 1, n, k - 2, &f)
    })
}

pub fn full_spark(frame: &Frame) -> Result<FullSpark> {
    full_spark_with_cap(frame, subset_cap(FULL_SPARK_CAP))
}

pub fn full_spark_with_cap(frame: &Frame, cap: usize) -> Result<FullSpark> {
    let (m, n) = (frame.dim(), frame.len());
    if n < m {
        return Err(FrameError::InvalidParameter(format!(
            "full spark needs N >= M, got N={n}, M={m}"
        )));
    }
    check_cap(n, cap)?;
    let failing_subset = first_subset_par(n, m, |s| (!spans(frame, s)).then(|| s.to_vec()));
    Ok(FullSpark {
        is_full_spark: failing_subset.is_none(),
        failing_subset,
    })
}

/// A partition `I, I^c` of the frame indices. When neither side spans, `x` is
/// orthogonal to the vectors indexed by `I` and `y` to those indexed by `I^c`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionWitness {
    /// `I`, 0-based and increasing.
    pub subset: Vec<usize>,
    pub n: usize,
    pub spans_i: bool,
    pub spans_ic: bool,
    pub x: Option<Vector>,
    pub y: Option<Vector>,
}

impl PartitionWitness {
    pub fn complement(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.subset.contains(i)).collect()
    }

    pub fn both_deficient(&self) -> bool {
        !self.spans_i && !self.spans_ic
    }
}

fn unit_normal(frame: &Frame, indices: &[usize]) -> Option<Vector> {
    let basis = linalg::null_space_basis(&frame.select(indices), frame.dim()).ok()?;
    basis.first().and_then(|b| normalized(b))
}

/// Builds the witness for `I = subset`, computing both span flags.
pub fn partition_witness(frame: &Frame, subset: &[usize]) -> Result<PartitionWitness> {
    let n = frame.len();
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if let Some(&bad) = subset.iter().find(|&&i| i >= n) {
        return Err(FrameError::InvalidWitness(format!("index {bad} out of range for N={n}")));
    }
    let mut w = PartitionWitness {
        subset,
        n,
        spans_i: false,
        spans_ic: false,
        x: None,
        y: None,
    };
    let ic = w.complement();
    w.spans_i = spans(frame, &w.subset);
    w.spans_ic = spans(frame, &ic);
    if w.both_deficient() {
        w.x = unit_normal(frame, &w.subset);
        w.y = unit_normal(frame, &ic);
    }
    Ok(w)
}

/// Which subsets the complement property quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CpMode {
    /// Every `I` in `[N]`.
    #[default]
    AllSubsets,
    /// Only `|I| = M`.
    Strict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplementProperty {
    pub holds: bool,
    pub mode: CpMode,
    pub witness: Option<PartitionWitness>,
    /// Indices of zero vectors, which make every subset holding them deficient.
    pub zero_vectors: Vec<usize>,
}

pub fn complement_property(frame: &Frame) -> Result<ComplementProperty> {
    complement_property_with(frame, CpMode::AllSubsets, subset_cap(COMPLEMENT_CAP))
}

/// Checks the complement property. In all-subsets mode the partitions are
/// visited as bitmasks `I` containing index 0, in increasing order, and the
/// lowest failing mask is reported. Strict mode visits `M`-subsets
/// lexicographically.
pub fn complement_property_with(frame: &Frame, mode: CpMode, cap: usize) -> Result<ComplementProperty> {
    let n = frame.len();
    check_cap(n, cap)?;
    let failing = match mode {
        CpMode::AllSubsets => {
            let half: u64 = 1u64 << (n - 1);
            (0..half).into_par_iter().find_map_first(|rest| {
                let mask = (rest << 1) | 1;
                let (inside, outside): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| mask >> i & 1 == 1);
                (!spans(frame, &inside) && !spans(frame, &outside)).then_some(inside)
            })
        }
        CpMode::Strict => {
            let m = frame.dim();
            first_subset_par(n, m.min(n), |s| {
                let outside: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
                (!spans(frame, s) && !spans(frame, &outside)).then(|| s.to_vec())
            })
        }
    };
    let witness = failing.map(|s| partition_witness(frame, &s)).transpose()?;
    Ok(ComplementProperty {
        holds: witness.is_none(),
        mode,
        witness,
        zero_vectors: zero_vectors(frame),
    })
}

/// Unit `x, y` with `<x, phi_i> <y, phi_i> = 0` for every `i`, built from a
/// partition where neither side spans.
pub fn annihilating_pair(frame: &Frame, witness: &PartitionWitness) -> Result<(Vector, Vector)> {
    let w = partition_witness(frame, &witness.subset)?;
    if w.spans_i || w.spans_ic {
        return Err(FrameError::InvalidWitness(format!(
            "a side spans (I spans: {}, complement spans: {})",
            w.spans_i, w.spans_ic
        )));
    }
    match (w.x, w.y) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(FrameError::InvalidWitness("no unit normal found".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductCount {
    /// Number of `i` with `|<x,phi_i>| |<y,phi_i>| > zero_tol^2`.
    pub count: usize,
    /// `N - (2M - 2)` (floored at 0) when the frame is full spark.
    pub bound: Option<usize>,
}

impl ProductCount {
    pub fn pass(&self) -> bool {
        self.bound.map_or(true, |b| self.count >= b)
    }
}

pub fn nonzero_product_count(frame: &Frame, x: &[C64], y: &[C64], zero_tol: f64) -> Result<ProductCount> {
    let fs = full_spark(frame)?.is_full_spark;
    nonzero_product_count_with(frame, fs, x, y, zero_tol)
}

/// [`nonzero_product_count`] with the full spark flag supplied by the caller.
pub fn nonzero_product_count_with(
    frame: &Frame,
    is_full_spark: bool,
    x: &[C64],
    y: &[C64],
    zero_tol: f64,
) -> Result<ProductCount> {
    frame.check_dim(x)?;
    frame.check_dim(y)?;
    let cx = coefficients_unchecked(frame, x);
    let cy = coefficients_unchecked(frame, y);
    let thr = zero_tol * zero_tol;
    let count = cx.iter().zip(&cy).filter(|(a, b)| a.norm() * b.norm() > thr).count();
    let (m, n) = (frame.dim(), frame.len());
    let bound = is_full_spark.then(|| (n + 2).saturating_sub(2 * m));
    Ok(ProductCount { count, bound })
}

/// Injectivity of `x -> (|<x,phi_i>|)_i` up to sign, for real frames.
pub fn phase_retrieval_injective(frame: &Frame) -> Result<bool> {
    if !frame.is_real() {
        return Err(FrameError::InvalidParameter(
            "phase retrieval injectivity is only decided for real frames".into(),
        ));
    }
    Ok(complement_property(frame)?.holds)
}
