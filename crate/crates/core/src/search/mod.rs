//! Extremal problems on the unit sphere: product sums, the fixed-vector
//! objective for equiangular frames and distance sums.
//!
//! Numerical extrema come from a multistart projected (sub)gradient method on
//! one or two copies of the sphere. Each start draws its initial point from
//! its own stream `derive_seed(seed, start)`, so the best result is
//! independent of how the starts are scheduled.

pub mod distance;
pub mod product;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructors::random_unit_vector_in;
use crate::error::{FrameError, Result};
use crate::linalg::{self, inner, norm_sqr, normalized, Field, Vector};
use crate::rng::{derive_seed, SplitMix64};

pub use distance::*;
pub use product::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Min => 1.0,
            Direction::Max => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub starts: usize,
    /// Iteration cap per start.
    pub iterations: usize,
    /// Initial backtracking step.
    pub step: f64,
    pub shrink: f64,
    /// Stop once an iteration improves the objective by less than this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            starts: 256,
            iterations: 200,
            step: 1.0,
            shrink: 0.5,
            tol: 1e-10,
            seed: 42,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(FrameError::InvalidParameter("starts must be at least 1".into()));
        }
        if !(self.step > 0.0) || !(self.shrink > 0.0 && self.shrink < 1.0) || !(self.tol > 0.0) {
            return Err(FrameError::InvalidParameter(format!(
                "bad step rule: step={}, shrink={}, tol={}",
                self.step, self.shrink, self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub value: f64,
    /// One unit vector per sphere factor (`x`, then `y` for pair objectives).
    pub witness: Vec<Vector>,
    pub starts_used: usize,
    pub best_start: usize,
    /// The best start stopped on the tolerance rather than the iteration cap.
    pub converged: bool,
    /// The value was replaced by an exact certificate.
    pub certified: bool,
}

impl SearchResult {
    pub fn x(&self) -> &Vector {
        &self.witness[0]
    }

    pub fn y(&self) -> &Vector {
        self.witness.last().expect("search results carry a witness")
    }
}

/// A named bound together with the hypothesis it needs and whether that
/// hypothesis holds for the frame at hand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub name: String,
    pub value: f64,
    pub hypothesis: String,
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundLedger {
    pub bounds: Vec<Bound>,
    /// Smallest applicable upper bound, when the ledger has upper bounds.
    pub best_upper: Option<f64>,
}

impl BoundLedger {
    pub(crate) fn push(&mut self, name: &str, value: f64, hypothesis: &str, applicable: bool) {
        self.bounds.push(Bound {
            name: name.to_string(),
            value,
            hypothesis: hypothesis.to_string(),
            applicable,
        });
    }

    pub fn get(&self, name: &str) -> Option<&Bound> {
        self.bounds.iter().find(|b| b.name == name)
    }

    /// Value of `name` if its hypothesis holds.
    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).filter(|b| b.applicable).map(|b| b.value)
    }

    pub fn applicable(&self) -> impl Iterator<Item = &Bound> {
        self.bounds.iter().filter(|b| b.applicable)
    }
}

/// An objective on a product of unit spheres.
pub(crate) trait SphereObjective: Sync {
    fn dim(&self) -> usize;
    fn field(&self) -> Field;
    fn factors(&self) -> usize;
    fn value(&self, pts: &[Vector]) -> f64;
    /// Euclidean gradient per factor: the derivative along `d` is
    /// `sum_k Re <d_k, g_k>`. Kinks contribute zero.
    fn gradient(&self, pts: &[Vector]) -> Vec<Vector>;
    /// Vectors the `k`-th factor currently sits orthogonal to. Minimizing
    /// steps keep these orthogonalities.
    fn active(&self, _pts: &[Vector], _k: usize) -> Vec<Vector> {
        Vec::new()
    }
    /// Candidate replacements for the `k`-th factor tried when gradient
    /// steps stall during minimization.
    fn snaps(&self, _pts: &[Vector], _k: usize) -> Vec<Vector> {
        Vec::new()
    }
}

const ARMIJO: f64 = 0.1;
const MAX_BACKTRACK: usize = 40;

struct Step {
    pts: Vec<Vector>,
    value: f64,
}


struct Local {
    value: f64,
    pts: Vec<Vector>,
    converged: bool,
}

pub(crate) fn multistart(obj: &impl SphereObjective, dir: Direction, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let runs: Vec<Local> = (0..cfg.starts)
        .into_par_iter()
        .map(|s| {
            let mut rng = SplitMix64::new(derive_seed(cfg.seed, s as u64));
            let pts: Vec<Vector> = (0..obj.factors())
                .map(|_| random_unit_vector_in(&mut rng, obj.field(), obj.dim()))
                .collect();
            local_search(obj, dir, pts, cfg)
        })
        .collect();
    let (best_start, best) = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .expect("at least one start");
    Ok(SearchResult {
        value: obj.value(&best.pts),
        witness: best.pts.clone(),
        starts_used: cfg.starts,
        best_start,
        converged: best.converged,
        certified: false,
    })
}

/// Runs the local method from `pts`; `value` in the result is sign-adjusted
/// so that smaller is better.
fn local_search(obj: &impl SphereObjective, dir: Direction, mut pts: Vec<Vector>, cfg: &SearchConfig) -> Local {
    let sign = dir.sign();
    let minimizing = dir == Direction::Min;
    let f = |p: &[Vector]| sign * obj.value(p);
    let mut val = f(&pts);
    let mut converged = false;
    for _ in 0..cfg.iterations {
        let prev = val;
        let mut step = gradient_step(obj, &f, sign, &pts, val, cfg, minimizing);
        if minimizing && step.is_none() {
            step = gradient_step(obj, &f, sign, &pts, val, cfg, false);
        }
        if let Some(s) = step {
            pts = s.pts;
            val = s.value;
        }
        if prev - val < cfg.tol {
            if minimizing {
                // stalled at or near a kink: jump onto a nearby face
                if let Some((p, v)) = snap(obj, &f, &pts, val) {
                    pts = p;
                    val = v;
                    continue;
                }
            }
            converged = true;
            break;
        }
    }
    Local {
        value: val,
        pts,
        converged,
    }
}

fn gradient_step(
    obj: &impl SphereObjective,
    f: &impl Fn(&[Vector]) -> f64,
    sign: f64,
    pts: &[Vector],
    val: f64,
    cfg: &SearchConfig,
    use_active: bool,
) -> Option<Step> {
    let mut g = obj.gradient(pts);
    let mut gsq = 0.0;
    for (k, gk) in g.iter_mut().enumerate() {
        let x = &pts[k];
        for z in gk.iter_mut() {
            *z *= sign;
        }
        let radial = inner(gk, x).re;
        linalg::axpy(linalg::c(-radial), x, gk);
        if use_active {
            let mut basis = Vec::new();
            for v in obj.active(pts, k) {
                linalg::gram_schmidt_push(&mut basis, &v);
            }
            if !basis.is_empty() {
                *gk = linalg::remove_span(gk, &basis);
            }
        }
        gsq += norm_sqr(gk);
    }
    if gsq < 1e-28 {
        return None;
    }
    // the first step with Armijo-type decrease wins; failing that, the
    // largest step with any decrease (the objective may have kinks)
    let mut fallback = None;
    let mut eta = cfg.step;
    for _ in 0..MAX_BACKTRACK {
        let cand: Option<Vec<Vector>> = pts
            .iter()
            .zip(&g)
            .map(|(x, gk)| {
                let mut y = x.clone();
                linalg::axpy(linalg::c(-eta), gk, &mut y);
                normalized(&y)
            })
            .collect();
        if let Some(cand) = cand {
            let v = f(&cand);
            if v <= val - ARMIJO * eta * gsq {
                return Some(Step {
                    pts: cand,
                    value: v,
                });
            }
            if v < val && fallback.is_none() {
                fallback = Some(Step {
                    pts: cand,
                    value: v,
                });
            }
        }
        eta *= cfg.shrink;
    }
    fallback
}

fn snap(obj: &impl SphereObjective, f: &impl Fn(&[Vector]) -> f64, pts: &[Vector], val: f64) -> Option<(Vec<Vector>, f64)> {
    let mut best: Option<(Vec<Vector>, f64)> = None;
    for k in 0..pts.len() {
        for cand in obj.snaps(pts, k) {
            let mut p = pts.to_vec();
            p[k] = cand;
            let v = f(&p);
            let bar = best.as_ref().map_or(val, |b| b.1);
            if v < bar {
                best = Some((p, v));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    /// Rayleigh quotient of diag(3, 1) on the circle.
    struct Rayleigh;

    impl SphereObjective for Rayleigh {
        fn dim(&self) -> usize {
            2
        }
        fn field(&self) -> Field {
            Field::Real
        }
        fn factors(&self) -> usize {
            1
        }
        fn value(&self, pts: &[Vector]) -> f64 {
            let x = &pts[0];
            3.0 * x[0].norm_sqr() + x[1].norm_sqr()
        }
        fn gradient(&self, pts: &[Vector]) -> Vec<Vector> {
            let x = &pts[0];
            vec![vec![x[0] * c(6.0), x[1] * c(2.0)]]
        }
    }

    #[test]
    fn finds_both_ends_of_a_rayleigh_quotient() {
        let cfg = SearchConfig::default().with_starts(8);
        let lo = multistart(&Rayleigh, Direction::Min, &cfg).unwrap();
        let hi = multistart(&Rayleigh, Direction::Max, &cfg).unwrap();
        assert!((lo.value - 1.0).abs() < 1e-9, "{}", lo.value);
        assert!((hi.value - 3.0).abs() < 1e-9, "{}", hi.value);
        assert!((linalg::norm(lo.x()) - 1.0).abs() < 1e-12);
        assert_eq!(lo.starts_used, 8);
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = SearchConfig::default().with_starts(16).with_seed(5);
        let a = multistart(&Rayleigh, Direction::Min, &cfg).unwrap();
        let b = multistart(&Rayleigh, Direction::Min, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::default().with_starts(0).validate().is_err());
        let mut cfg = SearchConfig::default();
        cfg.shrink = 1.0;
        assert!(cfg.validate().is_err());
        assert!(SearchConfig::default().validate().is_ok());
    }

    #[test]
    fn ledger_hides_inapplicable_bounds() {
        let mut l = BoundLedger::default();
        l.push("a", 1.0, "always", true);
        l.push("b", 2.0, "N >= 2M-1", false);
        assert_eq!(l.value("a"), Some(1.0));
        assert_eq!(l.value("b"), None);
        assert!(l.get("b").is_some());
        assert_eq!(l.applicable().count(), 1);
    }
}
