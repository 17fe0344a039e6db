//! Brute-force references for the sphere searches: angle grids on the circle,
//! a Fibonacci lattice on the 2-sphere, and exact vertex enumeration for the
//! real product-sum minimum.
//!
//! For real frames, `x -> sum_i w_i |<x,phi_i>|` is piecewise linear with
//! kinks on the hyperplanes `phi_i^perp`, so its minimum over the sphere sits
//! on a line cut out by `M-1` independent hyperplanes. Alternating the
//! argument over `x` and `y` shows that the product-sum minimum is attained
//! on pairs of such unit normals.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{FrameError, Result};
use crate::frame::Frame;
use crate::linalg::{self, inner, normalized, real_vector, Vector, C64};
use crate::search::Direction;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub witness: Vec<Vector>,
}

fn require_real_dim(frame: &Frame, m: usize) -> Result<()> {
    if !frame.is_real() || frame.dim() != m {
        return Err(FrameError::InvalidParameter(format!(
            "this oracle needs a real frame in dimension {m}"
        )));
    }
    Ok(())
}

fn better(dir: Direction, a: f64, b: f64) -> bool {
    match dir {
        Direction::Min => a < b,
        Direction::Max => a > b,
    }
}

fn worst(dir: Direction) -> f64 {
    match dir {
        Direction::Min => f64::INFINITY,
        Direction::Max => f64::NEG_INFINITY,
    }
}

fn circle(theta: f64) -> Vector {
    real_vector(&[theta.cos(), theta.sin()])
}

/// Coarse cells kept for refinement, and refinement depth.
const ZOOM_CELLS: usize = 48;
const ZOOM_LEVELS: usize = 8;
const ZOOM_POINTS: usize = 33;

/// Grid over angle pairs `(s, t)` in `[0, pi)^2` (antipodes give the same
/// product sum) with `points` values per circle, followed by a zoom around
/// the best coarse cells.
pub fn grid_product_sum(frame: &Frame, dir: Direction, points: usize) -> Result<OracleResult> {
    require_real_dim(frame, 2)?;
    let h = PI / points as f64;
    let table: Vec<Vec<f64>> = (0..points)
        .map(|p| {
            let x = circle(p as f64 * h);
            frame.vectors().iter().map(|v| inner(&x, v).norm()).collect()
        })
        .collect();
    // best q for each p, then the best cells overall
    let rows: Vec<(f64, usize, usize)> = (0..points)
        .into_par_iter()
        .map(|p| {
            let a = &table[p];
            let mut best = (worst(dir), p, 0);
            for (q, b) in table.iter().enumerate() {
                let v: f64 = a.iter().zip(b).map(|(s, t)| s * t).sum();
                if better(dir, v, best.0) {
                    best = (v, p, q);
                }
            }
            best
        })
        .collect();
    let mut cells = rows;
    cells.sort_by(|a, b| match dir {
        Direction::Min => a.0.total_cmp(&b.0),
        Direction::Max => b.0.total_cmp(&a.0),
    });
    cells.truncate(ZOOM_CELLS);

    let f = |s: f64, t: f64| -> f64 {
        let (x, y) = (circle(s), circle(t));
        frame
            .vectors()
            .iter()
            .map(|v| inner(&x, v).norm() * inner(&y, v).norm())
            .sum()
    };
    let refined: Vec<(f64, f64, f64)> = cells
        .par_iter()
        .map(|&(v, p, q)| {
            let (mut s, mut t, mut best) = (p as f64 * h, q as f64 * h, v);
            let mut radius = h;
            for _ in 0..ZOOM_LEVELS {
                let (s0, t0) = (s, t);
                for a in 0..ZOOM_POINTS {
                    let ds = radius * (2.0 * a as f64 / (ZOOM_POINTS - 1) as f64 - 1.0);
                    for b in 0..ZOOM_POINTS {
                        let dt = radius * (2.0 * b as f64 / (ZOOM_POINTS - 1) as f64 - 1.0);
                        let val = f(s0 + ds, t0 + dt);
                        if better(dir, val, best) {
                            best = val;
                            s = s0 + ds;
                            t = t0 + dt;
                        }
                    }
                }
                radius *= 4.0 / (ZOOM_POINTS - 1) as f64;
            }
            (best, s, t)
        })
        .collect();
    let (value, s, t) = refined
        .into_iter()
        .reduce(|a, b| if better(dir, b.0, a.0) { b } else { a })
        .expect("grid is non-empty");
    Ok(OracleResult {
        value,
        witness: vec![circle(s), circle(t)],
    })
}

/// Grid over `[0, 2 pi)` for an objective of one unit vector in the real
/// plane, refined around the best coarse points.
pub fn grid_circle(points: usize, dir: Direction, f: impl Fn(&[C64]) -> f64 + Sync) -> OracleResult {
    let h = 2.0 * PI / points as f64;
    let coarse: Vec<(f64, usize)> = (0..points).into_par_iter().map(|p| (f(&circle(p as f64 * h)), p)).collect();
    let mut cells = coarse;
    cells.sort_by(|a, b| match dir {
        Direction::Min => a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)),
        Direction::Max => b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)),
    });
    cells.truncate(ZOOM_CELLS);
    let (value, theta) = cells
        .into_iter()
        .map(|(v, p)| {
            let (mut theta, mut best, mut radius) = (p as f64 * h, v, h);
            for _ in 0..ZOOM_LEVELS {
                let t0 = theta;
                for a in 0..ZOOM_POINTS {
                    let t = t0 + radius * (2.0 * a as f64 / (ZOOM_POINTS - 1) as f64 - 1.0);
                    let val = f(&circle(t));
                    if better(dir, val, best) {
                        best = val;
                        theta = t;
                    }
                }
                radius *= 4.0 / (ZOOM_POINTS - 1) as f64;
            }
            (best, theta)
        })
        .reduce(|a, b| if better(dir, b.0, a.0) { b } else { a })
        .expect("grid is non-empty");
    OracleResult {
        value,
        witness: vec![circle(theta)],
    }
}

/// `n` nearly uniform points on the unit 2-sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Vector> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            real_vector(&[r * phi.cos(), r * phi.sin(), z])
        })
        .collect()
}

/// Best value of `f` over a Fibonacci lattice of `points` points.
pub fn lattice_sphere(points: usize, dir: Direction, f: impl Fn(&[C64]) -> f64 + Sync) -> OracleResult {
    let pts = fibonacci_sphere(points);
    let (value, k) = pts
        .par_iter()
        .enumerate()
        .map(|(k, x)| (f(x), k))
        .reduce(
            || (worst(dir), usize::MAX),
            |a, b| {
                if better(dir, b.0, a.0) || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    OracleResult {
        value,
        witness: vec![pts[k].clone()],
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Unit normals of all `(M-1)`-subsets of a real frame that span a
/// hyperplane.
pub fn vertex_normals(frame: &Frame) -> Result<Vec<Vector>> {
    if !frame.is_real() {
        return Err(FrameError::InvalidParameter("vertex enumeration needs a real frame".into()));
    }
    let m = frame.dim();
    if m == 1 {
        return Ok(vec![real_vector(&[1.0])]);
    }
    let mut out = Vec::new();
    for s in combinations(frame.len(), m - 1) {
        let vs = frame.select(&s);
        if linalg::rank(&vs) != m - 1 {
            continue;
        }
        let (_, complement) = linalg::span_and_complement(&vs, m);
        if let Some(x) = complement.first().and_then(|b| normalized(b)) {
            // the complement basis of a real subset may carry a phase
            let phase = x.iter().find(|z| z.norm() > 1e-8).map(|z| z.conj() / z.norm()).unwrap();
            out.push(x.iter().map(|z| C64::new((z * phase).re, 0.0)).collect());
        }
    }
    Ok(out)
}

/// Exact minimum of the product sum for a real frame, by vertex enumeration.
pub fn exact_product_sum_min(frame: &Frame) -> Result<OracleResult> {
    let xs = vertex_normals(frame)?;
    let table: Vec<Vec<f64>> = xs
        .iter()
        .map(|x| frame.vectors().iter().map(|v| inner(x, v).norm()).collect())
        .collect();
    let (value, a, b) = (0..xs.len())
        .into_par_iter()
        .map(|a| {
            let mut best = (f64::INFINITY, a, a);
            for b in a..xs.len() {
                let v: f64 = table[a].iter().zip(&table[b]).map(|(s, t)| s * t).sum();
                if v < best.0 {
                    best = (v, a, b);
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, usize::MAX, usize::MAX), |p, q| if q.0 < p.0 || (q.0 == p.0 && q.1 < p.1) { q } else { p });
    if a == usize::MAX {
        return Err(FrameError::NotAFrame { lower_bound: 0.0 });
    }
    Ok(OracleResult {
        value,
        witness: vec![xs[a].clone(), xs[b].clone()],
    })
}

/// Exact minimum of `x -> sum_i w_i |<x, phi_i>|` for a real frame.
pub fn exact_weighted_min(frame: &Frame, weights: &[f64]) -> Result<OracleResult> {
    let xs = vertex_normals(frame)?;
    let (value, k) = xs
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let v: f64 = frame.vectors().iter().zip(weights).map(|(p, w)| w * inner(x, p).norm()).sum();
            (v, k)
        })
        .fold((f64::INFINITY, usize::MAX), |a, b| if b.0 < a.0 { b } else { a });
    if k == usize::MAX {
        return Err(FrameError::NotAFrame { lower_bound: 0.0 });
    }
    Ok(OracleResult {
        value,
        witness: vec![xs[k].clone()],
    })
}
