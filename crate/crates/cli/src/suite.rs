//! Runs every claim of a suite against one frame and collects the reports.
//!
//! Each claim draws its random points from its own stream
//! `derive_seed(seed, k)`, `k` being the claim's position in [`CLAIMS`], so a
//! report depends only on the frame, the suite, the seed and the budget.
//! Claims may run in parallel; the report lists them sorted by claim id.

use std::fmt;
use std::sync::OnceLock;

use framedist_core::coefficients::{
    default_zero_tol, flat_majorization_report, modulus_one_bound, orthogonal_inflation, support_counts_with,
    tail_equality, FlatComparison, CLAIM_FLAT, CLAIM_UNTF_FLAT,
};
use framedist_core::constructors::random_unit_vector_in;
use framedist_core::frame::CONSTRUCTED_TOL;
use framedist_core::linalg::{basis_vector, normalized};
use framedist_core::oracle::vertex_normals;
use framedist_core::rng::{derive_seed, SplitMix64};
use framedist_core::search::{
    check_etf_distance_bounds, distance_sum, distance_sum_extrema, distance_sum_identity, etf_fixed_vector_bound,
    product_distance_sum, product_sum, product_sum_bounds, search_distance_extrema, search_product_sum,
    simplex_identity, untf_pair_lower, zero_sum_identity,
};
use framedist_core::spark::{
    annihilating_pair, complement_property, full_spark, nonzero_product_count_with, ComplementProperty,
};
use framedist_core::{
    classify, Direction, Frame, FrameError, HypothesisStatus, Result, SearchConfig, SearchResult, SpectralSummary,
    TheoremReport, Vector,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Sec3,
    Sec4,
    Sec5,
    Sec6,
}

impl Suite {
    pub fn includes(self, claim: &str) -> bool {
        match self {
            Suite::All => true,
            other => claim.starts_with(&format!("{other}.")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::All => "all",
            Suite::Sec3 => "sec3",
            Suite::Sec4 => "sec4",
            Suite::Sec5 => "sec5",
            Suite::Sec6 => "sec6",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    /// Random points (or pairs) per sampled claim.
    pub samples: usize,
    pub seed: u64,
    /// Multistart budget for searched extrema.
    pub starts: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            samples: 1000,
            seed: 42,
            starts: 256,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(claims: &[TheoremReport]) -> Self {
        let mut s = Summary::default();
        for c in claims {
            match (c.hypothesis, c.pass) {
                (HypothesisStatus::Met, true) => s.pass += 1,
                (HypothesisStatus::Met, false) => s.fail += 1,
                (HypothesisStatus::Violated, _) => s.not_applicable += 1,
                (HypothesisStatus::Skipped, _) => s.skipped += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub frame: String,
    pub field: framedist_core::Field,
    pub dim: usize,
    pub count: usize,
    pub suite: Suite,
    pub seed: u64,
    pub samples: usize,
    pub starts: usize,
    pub summary: Summary,
    pub claims: Vec<TheoremReport>,
}

impl SuiteReport {
    pub fn has_failures(&self) -> bool {
        self.claims.iter().any(|c| c.is_failure())
    }
}

type ClaimFn = fn(&Ctx, u64) -> Result<TheoremReport>;

/// Claim ids in sorted order with their checkers.
pub const CLAIMS: &[(&str, ClaimFn)] = &[
    ("sec3.jx-equality", jx_equality),
    ("sec3.jx-lower", jx_lower),
    ("sec3.kx-lower", kx_lower),
    ("sec4.flat-majorization", flat_majorization),
    ("sec4.modulus-one", modulus_one),
    ("sec4.orthogonal-inflation", inflation),
    ("sec4.tail-equality", tail),
    ("sec4.untf-majorization", untf_majorization),
    ("sec5.complement-property", complement),
    ("sec5.count-upper", count_upper),
    ("sec5.cp-equivalence", cp_equivalence),
    ("sec5.etf-fixed-vector", etf_fixed),
    ("sec5.full-spark-count", full_spark_count),
    ("sec5.hoelder-upper", hoelder_upper),
    ("sec5.untf-lower", untf_lower),
    ("sec6.distance-extrema", distance_extrema),
    ("sec6.distance-identity", distance_identity),
    ("sec6.etf-distance-bounds", etf_distance),
    ("sec6.product-distance-4N", product_distance),
    ("sec6.simplex-identity", simplex),
    ("sec6.zero-sum-2N", zero_sum),
];

/// Vertex normals are added to the structured points when there are at most
/// this many `(M-1)`-subsets.
const MAX_VERTEX_SUBSETS: u128 = 4096;

/// Search slack for searched extrema against closed forms and bounds.
const SEARCH_TOL: f64 = 1e-6;

pub struct Ctx<'a> {
    frame: &'a Frame,
    summary: SpectralSummary,
    cfg: SuiteConfig,
    structured: Vec<Vector>,
    product_max: OnceLock<Result<SearchResult>>,
    product_min_raw: OnceLock<Result<SearchResult>>,
    cp: OnceLock<Result<ComplementProperty>>,
}

impl<'a> Ctx<'a> {
    fn new(frame: &'a Frame, cfg: &SuiteConfig) -> Self {
        Ctx {
            frame,
            summary: classify(frame, CONSTRUCTED_TOL),
            cfg: cfg.clone(),
            structured: structured_points(frame),
            product_max: OnceLock::new(),
            product_min_raw: OnceLock::new(),
            cp: OnceLock::new(),
        }
    }

    fn search(&self, seed: u64) -> SearchConfig {
        SearchConfig::default().with_starts(self.cfg.starts).with_seed(seed)
    }

    fn units(&self, seed: u64) -> Vec<Vector> {
        let mut rng = SplitMix64::new(seed);
        (0..self.cfg.samples)
            .map(|_| random_unit_vector_in(&mut rng, self.frame.field(), self.frame.dim()))
            .collect()
    }

    /// Random points followed by the structured ones.
    fn points(&self, seed: u64) -> Vec<Vector> {
        let mut v = self.units(seed);
        v.extend(self.structured.iter().cloned());
        v
    }

    fn pairs(&self, seed: u64) -> Vec<(Vector, Vector)> {
        let mut rng = SplitMix64::new(seed);
        let (f, m) = (self.frame.field(), self.frame.dim());
        (0..self.cfg.samples)
            .map(|_| (random_unit_vector_in(&mut rng, f, m), random_unit_vector_in(&mut rng, f, m)))
            .collect()
    }

    // Shared searches use fixed sub-streams so every claim sees the same result.
    fn product_max(&self) -> Result<&SearchResult> {
        self.product_max
            .get_or_init(|| search_product_sum(self.frame, Direction::Max, &self.search(derive_seed(self.cfg.seed, 1001))))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn product_min_raw(&self) -> Result<&SearchResult> {
        self.product_min_raw
            .get_or_init(|| search_product_sum(self.frame, Direction::Min, &self.search(derive_seed(self.cfg.seed, 1002))))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn cp(&self) -> Result<&ComplementProperty> {
        self.cp
            .get_or_init(|| complement_property(self.frame))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn require_frame(&self) -> Result<()> {
        if !self.summary.is_frame {
            return Err(FrameError::NotAFrame {
                lower_bound: self.summary.lower_bound,
            });
        }
        Ok(())
    }
}

/// Basis vectors, normalized frame vectors and, for small real frames, the
/// unit normals of `(M-1)`-subsets: points where supports shrink and
/// coefficients hit their extremes.
fn structured_points(frame: &Frame) -> Vec<Vector> {
    let m = frame.dim();
    let mut out: Vec<Vector> = (0..m).map(|k| basis_vector(m, k)).collect();
    out.extend(frame.vectors().iter().filter_map(|v| normalized(v)));
    if frame.is_real() && binomial(frame.len(), m.saturating_sub(1)) <= MAX_VERTEX_SUBSETS {
        if let Ok(normals) = vertex_normals(frame) {
            out.extend(normals);
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

pub fn run_suite(frame: &Frame, suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    let ctx = Ctx::new(frame, cfg);
    let mut claims: Vec<TheoremReport> = CLAIMS
        .par_iter()
        .enumerate()
        .filter(|(_, (id, _))| suite.includes(id))
        .map(|(k, (id, check))| settle(id, frame, check(&ctx, derive_seed(cfg.seed, k as u64))))
        .collect();
    claims.sort_by(|a, b| a.claim.cmp(&b.claim));
    SuiteReport {
        frame: frame.descriptor(),
        field: frame.field(),
        dim: frame.dim(),
        count: frame.len(),
        suite,
        seed: cfg.seed,
        samples: cfg.samples,
        starts: cfg.starts,
        summary: Summary::of(&claims),
        claims,
    }
}

/// Turns checker errors into first-class statuses: unmet hypotheses become
/// `violated`, caps and anything else become `skipped` with the reason.
fn settle(claim: &str, frame: &Frame, r: Result<TheoremReport>) -> TheoremReport {
    match r {
        Ok(mut rep) => {
            rep.claim = claim.to_string();
            rep
        }
        Err(
            e @ (FrameError::Hypothesis(_) | FrameError::NotUnitNormFrame { .. } | FrameError::NotAFrame { .. }),
        ) => TheoremReport::violated(claim, frame, e.to_string()),
        Err(e @ FrameError::CapExceeded { .. }) => TheoremReport::skipped(claim, frame, e.to_string()),
        Err(e) => TheoremReport::skipped(claim, frame, format!("error: {e}")),
    }
}

/// The report with the smallest margin, a failing one whenever any failed.
fn worst(reports: impl IntoIterator<Item = TheoremReport>) -> Option<TheoremReport> {
    reports.into_iter().reduce(|a, b| {
        let key = |r: &TheoremReport| (r.pass, r.margin.unwrap_or(f64::INFINITY));
        if key(&b).0 < key(&a).0 || (key(&b).0 == key(&a).0 && key(&b).1 < key(&a).1) {
            b
        } else {
            a
        }
    })
}

fn sampled(r: Option<TheoremReport>, claim: &str, frame: &Frame, count: usize, seed: u64) -> TheoremReport {
    r.map(|r| r.with_samples(count, seed))
        .unwrap_or_else(|| TheoremReport::violated(claim, frame, "no sample points"))
}

fn support_claim(ctx: &Ctx, seed: u64, claim: &str, cs: &[f64], k: bool) -> Result<TheoremReport> {
    ctx.require_frame()?;
    let tol = default_zero_tol(ctx.summary.upper_bound);
    let pts = ctx.points(seed);
    let mut reports = Vec::new();
    for x in &pts {
        for &c in cs {
            let r = support_counts_with(ctx.frame, &ctx.summary, x, c, tol)?;
            let (count, bound, margin) = if k {
                (r.k_count(), r.k_bound, r.k_margin)
            } else {
                (r.j_count(), r.j_bound, r.j_margin)
            };
            reports.push(TheoremReport::evaluated(claim, ctx.frame, count as f64, bound, margin as f64, 0.0));
        }
    }
    Ok(sampled(worst(reports), claim, ctx.frame, pts.len(), seed))
}

fn jx_lower(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    support_claim(ctx, seed, "sec3.jx-lower", &[0.5], false)
}

fn kx_lower(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    Ok(support_claim(ctx, seed, "sec3.kx-lower", &[0.1, 0.5, 0.9], true)?.with_reason("C in {0.1, 0.5, 0.9}"))
}

/// Wherever `|J_x| = A/D` is attained with every inequality tight, the
/// support vectors must be parallel.
fn jx_equality(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    ctx.require_frame()?;
    let tol = default_zero_tol(ctx.summary.upper_bound);
    let pts = ctx.points(seed);
    let (mut hits, mut rank_one) = (0usize, 0usize);
    for x in &pts {
        let r = support_counts_with(ctx.frame, &ctx.summary, x, 0.5, tol)?;
        if r.equality_case {
            hits += 1;
            rank_one += usize::from(r.rank_one == Some(true));
        }
    }
    if hits == 0 {
        return Err(FrameError::Hypothesis(format!(
            "no equality case among {} sample points",
            pts.len()
        )));
    }
    let margin = rank_one as f64 - hits as f64;
    Ok(TheoremReport::evaluated("sec3.jx-equality", ctx.frame, hits as f64, rank_one as f64, margin, 0.0)
        .with_samples(pts.len(), seed)
        .with_reason(format!("{hits} equality cases")))
}

fn flat_claim(ctx: &Ctx, seed: u64, claim: &str, flat: f64) -> Result<TheoremReport> {
    let pts = ctx.points(seed);
    let n = ctx.frame.len();
    let reports = pts
        .iter()
        .map(|x| flat_majorization_report(ctx.frame, x, FlatComparison::new(flat, n, 0), claim))
        .collect::<Result<Vec<_>>>()?;
    Ok(sampled(worst(reports), claim, ctx.frame, pts.len(), seed))
}

fn flat_majorization(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    ctx.require_frame()?;
    flat_claim(ctx, seed, CLAIM_FLAT, ctx.summary.lower_bound / ctx.frame.len() as f64)
}

fn untf_majorization(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    if !ctx.summary.is_untf() {
        return Err(FrameError::Hypothesis("needs a unit norm tight frame".into()));
    }
    flat_claim(ctx, seed, CLAIM_UNTF_FLAT, 1.0 / ctx.frame.dim() as f64)
}

/// Whenever a proper prefix sum meets `m A/N`, every later coefficient is
/// `A/N`. The full prefix of a tight frame always meets it and says nothing.
fn tail(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    ctx.require_frame()?;
    let pts = ctx.points(seed);
    let mut fired = 0usize;
    let mut dev: f64 = 0.0;
    for x in &pts {
        if let Some(t) = tail_equality(ctx.frame, x)?.filter(|t| t.m < ctx.frame.len()) {
            fired += 1;
            dev = dev.max(t.max_tail_deviation);
        }
    }
    if fired == 0 {
        return Err(FrameError::Hypothesis(format!(
            "no prefix equality among {} sample points",
            pts.len()
        )));
    }
    Ok(TheoremReport::evaluated("sec4.tail-equality", ctx.frame, dev, 0.0, 0.0 - dev, 1e-9)
        .with_samples(pts.len(), seed)
        .with_reason(format!("fired {fired} times")))
}

fn modulus_one(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    let pts = ctx.points(seed);
    let mut reports = Vec::new();
    for x in &pts {
        let r = modulus_one_bound(ctx.frame, x)?;
        let margin = r.floor_lambda1 as f64 - r.count as f64;
        reports.push(TheoremReport::evaluated("sec4.modulus-one", ctx.frame, r.count as f64, r.floor_lambda1 as f64, margin, 0.0));
    }
    Ok(sampled(worst(reports), "sec4.modulus-one", ctx.frame, pts.len(), seed))
}

fn inflation(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    ctx.require_frame()?;
    let tol = default_zero_tol(ctx.summary.upper_bound);
    let pts = ctx.points(seed);
    let mut reports = Vec::new();
    for x in &pts {
        match orthogonal_inflation(ctx.frame, x, tol) {
            Ok(r) => reports.push(r),
            // every vector orthogonal to x cannot happen for a frame
            Err(FrameError::NotAFrame { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(sampled(worst(reports), "sec4.orthogonal-inflation", ctx.frame, pts.len(), seed))
}

fn complement(ctx: &Ctx, _seed: u64) -> Result<TheoremReport> {
    let (m, n) = (ctx.frame.dim(), ctx.frame.len());
    if n + 1 < 2 * m {
        return Err(FrameError::Hypothesis("needs N >= 2M-1".into()));
    }
    let cp = ctx.cp()?;
    let claim = "sec5.complement-property";
    match &cp.witness {
        None => Ok(TheoremReport::evaluated(claim, ctx.frame, 1.0, 1.0, 0.0, 0.0).with_reason("every partition has a spanning side")),
        Some(w) => {
            let (x, y) = annihilating_pair(ctx.frame, w)?;
            let p = product_sum(ctx.frame, &x, &y)?;
            Ok(TheoremReport::evaluated(claim, ctx.frame, p, 0.0, -1.0, 0.0)
                .with_pass(false)
                .with_reason("neither side of the partition spans")
                .with_subset(w.subset.clone())
                .with_witness("x", &x, ctx.frame.field())
                .with_witness("y", &y, ctx.frame.field()))
        }
    }
}

/// The complement property holds exactly when the searched minimum of the
/// product sum stays away from zero; failures must come with a certified
/// annihilating pair.
fn cp_equivalence(ctx: &Ctx, _seed: u64) -> Result<TheoremReport> {
    if !ctx.frame.is_real() {
        return Err(FrameError::Hypothesis("the equivalence is stated for real frames".into()));
    }
    let cp = ctx.cp()?;
    let found = ctx.product_min_raw()?;
    let positive = found.value > SEARCH_TOL;
    let mut pass = positive == cp.holds;
    let mut reason = format!("complement property: {}", cp.holds);
    if let Some(w) = &cp.witness {
        let (x, y) = annihilating_pair(ctx.frame, w)?;
        let p = product_sum(ctx.frame, &x, &y)?;
        pass &= p <= 1e-12;
        reason.push_str(&format!(", certificate {p:.3e}"));
    }
    let margin = if cp.holds { found.value - SEARCH_TOL } else { SEARCH_TOL - found.value };
    Ok(TheoremReport::evaluated("sec5.cp-equivalence", ctx.frame, found.value, SEARCH_TOL, margin, 0.0)
        .with_pass(pass)
        .with_reason(reason)
        .with_samples(ctx.cfg.starts, derive_seed(ctx.cfg.seed, 1002))
        .with_witness("x", found.x(), ctx.frame.field())
        .with_witness("y", found.y(), ctx.frame.field()))
}

fn upper_claim(ctx: &Ctx, claim: &str, bound_name: &str) -> Result<TheoremReport> {
    let ledger = product_sum_bounds(ctx.frame)?;
    let bound = ledger.get(bound_name).expect("ledger lists its bounds");
    if !bound.applicable {
        return Err(FrameError::Hypothesis(format!("needs {}", bound.hypothesis)));
    }
    let found = ctx.product_max()?;
    Ok(TheoremReport::evaluated(claim, ctx.frame, found.value, bound.value, bound.value - found.value, SEARCH_TOL)
        .with_samples(ctx.cfg.starts, derive_seed(ctx.cfg.seed, 1001))
        .with_witness("x", found.x(), ctx.frame.field())
        .with_witness("y", found.y(), ctx.frame.field()))
}

fn hoelder_upper(ctx: &Ctx, _seed: u64) -> Result<TheoremReport> {
    upper_claim(ctx, "sec5.hoelder-upper", "hoelder_B")
}

fn count_upper(ctx: &Ctx, _seed: u64) -> Result<TheoremReport> {
    upper_claim(ctx, "sec5.count-upper", "count_bound")
}

fn untf_lower(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    let pairs = ctx.pairs(seed);
    let reports = pairs
        .iter()
        .map(|(x, y)| untf_pair_lower(ctx.frame, x, y))
        .collect::<Result<Vec<_>>>()?;
    Ok(sampled(worst(reports), "sec5.untf-lower", ctx.frame, pairs.len(), seed))
}

fn full_spark_count(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    let fs = full_spark(ctx.frame)?;
    if !fs.is_full_spark {
        return Err(FrameError::Hypothesis("needs a full spark frame".into()));
    }
    let tol = default_zero_tol(ctx.summary.upper_bound);
    let pairs = ctx.pairs(seed);
    let mut reports = Vec::new();
    for (x, y) in &pairs {
        let c = nonzero_product_count_with(ctx.frame, true, x, y, tol)?;
        let bound = c.bound.unwrap_or(0) as f64;
        reports.push(TheoremReport::evaluated("sec5.full-spark-count", ctx.frame, c.count as f64, bound, c.count as f64 - bound, 0.0));
    }
    Ok(sampled(worst(reports), "sec5.full-spark-count", ctx.frame, pairs.len(), seed))
}

fn etf_fixed(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    let reports = (0..ctx.frame.len())
        .map(|j| etf_fixed_vector_bound(ctx.frame, j, &ctx.search(derive_seed(seed, j as u64))))
        .collect::<Result<Vec<_>>>()?;
    Ok(sampled(worst(reports), "sec5.etf-fixed-vector", ctx.frame, ctx.cfg.starts, seed))
}

fn distance_identity(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    let pts = ctx.units(seed);
    let mut dev: f64 = 0.0;
    for x in &pts {
        dev = dev.max((distance_sum(ctx.frame, x)? - distance_sum_identity(ctx.frame, x)?).abs());
    }
    Ok(TheoremReport::evaluated("sec6.distance-identity", ctx.frame, dev, 0.0, 0.0 - dev, 1e-10).with_samples(pts.len(), seed))
}

/// Searched extrema of the distance sum against `2N -+ 2 ||sum phi_i||`.
fn distance_extrema(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    let exact = distance_sum_extrema(ctx.frame)?;
    let (lo, hi) = search_distance_extrema(ctx.frame, &ctx.search(seed))?;
    let gap = (lo.value - exact.low).abs().max((hi.value - exact.high).abs());
    Ok(TheoremReport::evaluated("sec6.distance-extrema", ctx.frame, lo.value, exact.low, 0.0 - gap, 1e-7)
        .with_samples(ctx.cfg.starts, seed)
        .with_reason(format!("max found {} vs {}", hi.value, exact.high))
        .with_witness("argmin", lo.x(), ctx.frame.field())
        .with_witness("argmax", hi.x(), ctx.frame.field()))
}

fn zero_sum(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    zero_sum_identity(ctx.frame, ctx.cfg.samples, seed)
}

fn simplex(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    simplex_identity(ctx.frame, ctx.cfg.samples, seed)
}

fn product_distance(ctx: &Ctx, seed: u64) -> Result<TheoremReport> {
    let pairs = ctx.pairs(seed);
    let reports = pairs
        .iter()
        .map(|(x, y)| product_distance_sum(ctx.frame, x, y).map(|(_, r)| r))
        .collect::<Result<Vec<_>>>()?;
    Ok(sampled(worst(reports), "sec6.product-distance-4N", ctx.frame, pairs.len(), seed))
}

fn etf_distance(ctx: &Ctx, _seed: u64) -> Result<TheoremReport> {
    check_etf_distance_bounds(ctx.frame)
}
