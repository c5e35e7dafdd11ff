//! The Jacobian `∂Q/∂β` of the logit fixed-point surface of a two-by-two game,
//! its critical set `f¹₁f¹₂ = 1`, and the projection of that set onto the
//! `(β₁, β₂)` plane.
//!
//! The critical set is traced in `(Q₁, Q₂)` coordinates: every interior `Q`
//! determines at most one `β` through `β_i = 2·artanh(Q_i)/Δ_i(Q₋ᵢ)`, so the
//! surface is a graph over `Q` and the critical set is the zero contour of
//! `c(Q) = f¹₁f¹₂ − 1` there.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::logit::LogitParams;
use super::two_by_two::{solve_qre_fixed_points, LogitGame2x2, QCoordinates};
use crate::catastrophe::AxisRange;
use crate::error::QreError;

/// `|f¹₁f¹₂ − 1|` below this is reported as singular.
pub const SINGULAR_TOL: f64 = 1e-12;
/// Refined contour points satisfy `|c| ≤` this.
pub const CONTOUR_TOL: f64 = 1e-8;
pub const MIN_RESOLUTION: usize = 64;
pub const DEFAULT_BETA_MAX: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Jacobian {
    Regular([[f64; 2]; 2]),
    /// On the critical set; `det = f¹₁f¹₂ − 1`.
    Singular { det: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobianTerms {
    /// `f¹_i = ∂f_i/∂Q₋ᵢ`.
    pub f1: [f64; 2],
    /// `f²_i = ∂f_i/∂β_i`.
    pub f2: [f64; 2],
    pub jacobian: Jacobian,
}

impl JacobianTerms {
    pub fn critical_value(&self) -> f64 {
        self.f1[0] * self.f1[1] - 1.0
    }
}

/// Partials of `f_i(Q₋ᵢ, β_i) = tanh(β_iΔ_i(Q₋ᵢ)/2)` and the matrix
/// `∂Q_i/∂β_j` obtained by differentiating the fixed-point equations:
/// `J = [[f²₁, f¹₁f²₂], [f¹₂f²₁, f²₂]] / (1 − f¹₁f¹₂)`.
pub fn jacobian_terms(game: &LogitGame2x2, q: QCoordinates, betas: &LogitParams) -> JacobianTerms {
    let mut f1 = [0.0; 2];
    let mut f2 = [0.0; 2];
    for i in 0..2 {
        let other = q.get(1 - i);
        let t = game.response_q(i, betas.beta(i), other);
        let sech2 = 1.0 - t * t;
        f1[i] = 0.5 * sech2 * betas.beta(i) * game.gamma(i);
        f2[i] = 0.5 * sech2 * game.delta(i, other);
    }
    let det = f1[0] * f1[1] - 1.0;
    let jacobian = if det.abs() < SINGULAR_TOL {
        Jacobian::Singular { det }
    } else {
        let k = -1.0 / det;
        Jacobian::Regular([[k * f2[0], k * f1[0] * f2[1]], [k * f1[1] * f2[0], k * f2[1]]])
    };
    JacobianTerms { f1, f2, jacobian }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SurfaceRejection {
    /// `|Q_i| ≥ 1`.
    NotInterior,
    /// `Δ_i = 0` but `Q_i ≠ 0`: no `β` reaches this point.
    OffSurface { agent: usize },
    /// `Δ_i = 0` and `Q_i = 0`: every `β_i` works.
    Indeterminate { agent: usize },
    /// The required `β_i` is negative.
    NegativeBeta { agent: usize, beta: f64 },
}

/// The unique `β` making `Q` a logit fixed point, if it is admissible.
pub fn invert_beta_on_surface(game: &LogitGame2x2, q: QCoordinates) -> Result<LogitParams, SurfaceRejection> {
    if !q.is_interior() {
        return Err(SurfaceRejection::NotInterior);
    }
    let mut betas = [0.0; 2];
    for (i, beta) in betas.iter_mut().enumerate() {
        let d = game.delta(i, q.get(1 - i));
        let qi = q.get(i);
        if d == 0.0 {
            return Err(if qi == 0.0 {
                SurfaceRejection::Indeterminate { agent: i }
            } else {
                SurfaceRejection::OffSurface { agent: i }
            });
        }
        let b = 2.0 * qi.atanh() / d;
        if b < 0.0 {
            return Err(SurfaceRejection::NegativeBeta { agent: i, beta: b });
        }
        // −0.0 from a zero numerator is still zero
        *beta = b.abs();
    }
    Ok(LogitParams::pair(betas[0], betas[1]).expect("finite nonnegative"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub q1: f64,
    pub q2: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// `f¹₁f¹₂ − 1` at the point.
    pub critical_value: f64,
    /// `max_i |Q_i − tanh(β_iΔ_i(Q₋ᵢ)/2)|`.
    pub surface_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    OpenArc,
    ClosedLoop,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalCurve {
    pub points: Vec<CriticalPoint>,
    pub closure: Closure,
}

/// `c(Q)` with the surface's `β`, or `None` off the admissible surface.
fn critical_at(game: &LogitGame2x2, q1: f64, q2: f64) -> Option<(f64, LogitParams)> {
    let q = QCoordinates::new(q1, q2);
    let betas = invert_beta_on_surface(game, q).ok()?;
    let c = jacobian_terms(game, q, &betas).critical_value();
    c.is_finite().then_some((c, betas))
}

fn critical_point(game: &LogitGame2x2, q1: f64, q2: f64) -> Option<CriticalPoint> {
    let (c, betas) = critical_at(game, q1, q2)?;
    let residual = (q1 - game.response_q(0, betas.beta(0), q2))
        .abs()
        .max((q2 - game.response_q(1, betas.beta(1), q1)).abs());
    Some(CriticalPoint {
        q1,
        q2,
        beta1: betas.beta(0),
        beta2: betas.beta(1),
        critical_value: c,
        surface_residual: residual,
    })
}

/// Edge of the node lattice: `(i, j, horizontal)` joins node `(i, j)` to
/// `(i + 1, j)` when horizontal, else to `(i, j + 1)`.
type EdgeKey = (usize, usize, bool);

/// Zero contours of `c` over the admissible part of `(−1, 1)²`, sampled on
/// `resolution × resolution` cell-centred nodes, extracted by marching
/// squares and refined along grid edges by bisection.
pub fn trace_critical_set(game: &LogitGame2x2, resolution: usize) -> Result<Vec<CriticalCurve>, QreError> {
    if resolution < MIN_RESOLUTION {
        return Err(QreError::ResolutionTooSmall {
            min: MIN_RESOLUTION,
            found: resolution,
        });
    }
    let n = resolution;
    let coord = |i: usize| -1.0 + (2 * i + 1) as f64 / n as f64;
    // values[i][j] at (Q1, Q2) = (coord(i), coord(j))
    let values: Vec<Vec<Option<f64>>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| critical_at(game, coord(i), coord(j)).map(|(c, _)| c)).collect())
        .collect();

    let edge_ends = |e: EdgeKey| -> ((usize, usize), (usize, usize)) {
        let (i, j, horizontal) = e;
        if horizontal {
            ((i, j), (i + 1, j))
        } else {
            ((i, j), (i, j + 1))
        }
    };
    let crosses = |e: EdgeKey| -> bool {
        let (a, b) = edge_ends(e);
        match (values[a.0][a.1], values[b.0][b.1]) {
            (Some(x), Some(y)) => (x < 0.0) != (y < 0.0),
            _ => false,
        }
    };

    // segments per cell, in cell order
    let cells: Vec<Vec<(EdgeKey, EdgeKey)>> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let mut segs = Vec::new();
            for j in 0..n - 1 {
                let corners = [values[i][j], values[i + 1][j], values[i + 1][j + 1], values[i][j + 1]];
                if corners.iter().any(Option::is_none) {
                    continue;
                }
                let bottom = (i, j, true);
                let right = (i + 1, j, false);
                let top = (i, j + 1, true);
                let left = (i, j, false);
                let hits: Vec<EdgeKey> = [bottom, right, top, left].into_iter().filter(|&e| crosses(e)).collect();
                match hits.len() {
                    2 => segs.push((hits[0], hits[1])),
                    4 => {
                        // saddle: the centre's sign decides the pairing
                        let centre: f64 = corners.iter().map(|c| c.unwrap()).sum::<f64>() / 4.0;
                        let bl_negative = corners[0].unwrap() < 0.0;
                        if (centre < 0.0) == bl_negative {
                            segs.push((bottom, right));
                            segs.push((top, left));
                        } else {
                            segs.push((bottom, left));
                            segs.push((right, top));
                        }
                    }
                    _ => {}
                }
            }
            segs
        })
        .collect();
    let segments: Vec<(EdgeKey, EdgeKey)> = cells.into_iter().flatten().collect();

    // refine one point per crossed edge
    let mut edges: Vec<EdgeKey> = segments.iter().flat_map(|&(a, b)| [a, b]).collect();
    edges.sort_unstable();
    edges.dedup();
    let refined: Vec<Option<CriticalPoint>> = edges
        .par_iter()
        .map(|&e| {
            let (a, b) = edge_ends(e);
            let (pa, pb) = ((coord(a.0), coord(a.1)), (coord(b.0), coord(b.1)));
            let va = values[a.0][a.1]?;
            refine_edge(game, pa, pb, va)
        })
        .collect();
    let point_of: HashMap<EdgeKey, Option<CriticalPoint>> = edges.iter().copied().zip(refined).collect();

    Ok(chain(&segments)
        .into_iter()
        .filter_map(|(keys, closure)| {
            let points: Vec<CriticalPoint> = keys.iter().filter_map(|k| point_of[k]).collect();
            if points.is_empty() {
                return None;
            }
            let closure = if points.len() == keys.len() { closure } else { Closure::OpenArc };
            Some(CriticalCurve { points, closure })
        })
        .collect())
}

fn refine_edge(game: &LogitGame2x2, a: (f64, f64), b: (f64, f64), va: f64) -> Option<CriticalPoint> {
    let at = |t: f64| (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let lo_neg = va < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (q1, q2) = at(mid);
        let (c, _) = critical_at(game, q1, q2)?;
        if c.abs() <= CONTOUR_TOL * 1e-2 || hi - lo <= f64::EPSILON {
            lo = mid;
            hi = mid;
            break;
        }
        if (c < 0.0) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (q1, q2) = at(0.5 * (lo + hi));
    let p = critical_point(game, q1, q2)?;
    (p.critical_value.abs() <= CONTOUR_TOL).then_some(p)
}

/// Joins segments sharing an edge into polylines. Open chains start at the
/// lowest-keyed free end; loops start at their lowest key.
fn chain(segments: &[(EdgeKey, EdgeKey)]) -> Vec<(Vec<EdgeKey>, Closure)> {
    let mut adjacent: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        adjacent.entry(a).or_default().push(s);
        adjacent.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();

    let walk = |start: EdgeKey, used: &mut Vec<bool>| -> Vec<EdgeKey> {
        let mut keys = vec![start];
        let mut cur = start;
        loop {
            let next = adjacent[&cur].iter().copied().find(|&s| !used[s]);
            let Some(s) = next else { break };
            used[s] = true;
            let (a, b) = segments[s];
            cur = if a == cur { b } else { a };
            keys.push(cur);
        }
        keys
    };

    let mut ends: Vec<EdgeKey> = adjacent.iter().filter(|(_, v)| v.len() == 1).map(|(&k, _)| k).collect();
    ends.sort_unstable();
    for e in ends {
        if adjacent[&e].iter().all(|&s| used[s]) {
            continue;
        }
        out.push((walk(e, &mut used), Closure::OpenArc));
    }
    let mut rest: Vec<EdgeKey> = adjacent.keys().copied().collect();
    rest.sort_unstable();
    for k in rest {
        if adjacent[&k].iter().all(|&s| used[s]) {
            continue;
        }
        let keys = walk(k, &mut used);
        let closure = if keys.len() > 2 && keys.first() == keys.last() {
            Closure::ClosedLoop
        } else {
            Closure::OpenArc
        };
        out.push((keys, closure));
    }
    out
}

/// Projects critical curves to `(β₁, β₂)` polylines, splitting wherever a
/// point leaves `[0, beta_max]²`.
pub fn branch_locus(curves: &[CriticalCurve], beta_max: f64) -> Vec<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for curve in curves {
        let mut current: Vec<(f64, f64)> = Vec::new();
        for p in &curve.points {
            if p.beta1 <= beta_max && p.beta2 <= beta_max {
                current.push((p.beta1, p.beta2));
            } else if !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() {
            out.push(current);
        }
    }
    out
}

/// Fixed-point counts over a `(β₁, β₂)` grid; `counts[i * beta2.n + j]` is
/// the count at `(beta1.value(i), beta2.value(j))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionMap {
    pub beta1: AxisRange,
    pub beta2: AxisRange,
    pub counts: Vec<usize>,
}

impl RegionMap {
    pub fn count(&self, i: usize, j: usize) -> usize {
        self.counts[i * self.beta2.n + j]
    }
}

pub fn count_fixed_points_region(game: &LogitGame2x2, beta1: AxisRange, beta2: AxisRange) -> Result<RegionMap, QreError> {
    let rows: Result<Vec<Vec<usize>>, QreError> = (0..beta1.n)
        .into_par_iter()
        .map(|i| {
            (0..beta2.n)
                .map(|j| {
                    let b = LogitParams::pair(beta1.value(i), beta2.value(j))?;
                    Ok(solve_qre_fixed_points(game, &b)?.len())
                })
                .collect()
        })
        .collect();
    Ok(RegionMap {
        beta1,
        beta2,
        counts: rows?.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCheck {
    /// Adjacent grid-node pairs whose counts differ.
    pub transitions: usize,
    /// Largest distance, in grid cells, from such a pair's midpoint to the
    /// nearest locus segment.
    pub max_cells: f64,
}

impl BoundaryCheck {
    pub fn within_one_cell(&self) -> bool {
        self.max_cells <= 1.0
    }
}

/// Distance from `p` to the polyline set, with both axes scaled to grid cells.
pub fn distance_to_locus(p: (f64, f64), locus: &[Vec<(f64, f64)>], scale: (f64, f64)) -> f64 {
    let s = |q: (f64, f64)| (q.0 / scale.0, q.1 / scale.1);
    let p = s(p);
    let mut best = f64::INFINITY;
    for line in locus {
        if line.len() == 1 {
            let a = s(line[0]);
            best = best.min(((p.0 - a.0).powi(2) + (p.1 - a.1).powi(2)).sqrt());
        }
        for w in line.windows(2) {
            let (a, b) = (s(w[0]), s(w[1]));
            let d = (b.0 - a.0, b.1 - a.1);
            let len2 = d.0 * d.0 + d.1 * d.1;
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((p.0 - a.0) * d.0 + (p.1 - a.1) * d.1) / len2).clamp(0.0, 1.0)
            };
            let c = (a.0 + t * d.0, a.1 + t * d.1);
            best = best.min(((p.0 - c.0).powi(2) + (p.1 - c.1).powi(2)).sqrt());
        }
    }
    best
}

/// Checks that every count change on the grid lies next to the projected
/// critical set.
pub fn validate_region_boundary(map: &RegionMap, locus: &[Vec<(f64, f64)>]) -> BoundaryCheck {
    let scale = (map.beta1.step(), map.beta2.step());
    let mut transitions = 0;
    let mut max_cells: f64 = 0.0;
    for i in 0..map.beta1.n {
        for j in 0..map.beta2.n {
            let here = map.count(i, j);
            let mut neighbours = Vec::new();
            if i + 1 < map.beta1.n {
                neighbours.push((i + 1, j));
            }
            if j + 1 < map.beta2.n {
                neighbours.push((i, j + 1));
            }
            for (a, b) in neighbours {
                if map.count(a, b) != here {
                    transitions += 1;
                    let mid = (
                        0.5 * (map.beta1.value(i) + map.beta1.value(a)),
                        0.5 * (map.beta2.value(j) + map.beta2.value(b)),
                    );
                    max_cells = max_cells.max(distance_to_locus(mid, locus, scale));
                }
            }
        }
    }
    BoundaryCheck { transitions, max_cells }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub at: (f64, f64),
    pub before: usize,
    pub after: usize,
}

fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let orient = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0);
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    (o1 > 0.0) != (o2 > 0.0) && (o3 > 0.0) != (o4 > 0.0)
}

/// Number of locus segments the segment `a–b` crosses.
pub fn locus_crossings(a: (f64, f64), b: (f64, f64), locus: &[Vec<(f64, f64)>]) -> usize {
    locus
        .iter()
        .flat_map(|line| line.windows(2))
        .filter(|w| segments_cross(a, b, w[0], w[1]))
        .count()
}

/// Counts fixed points at `±offset` along the normal of every `stride`-th
/// locus segment midpoint. Probes that would cross the locus more than once
/// (near the cusp tip, where the branches are closer than `offset`) or leave
/// the positive quadrant are skipped.
pub fn sample_crossings(
    game: &LogitGame2x2,
    locus: &[Vec<(f64, f64)>],
    offset: f64,
    stride: usize,
) -> Result<Vec<Crossing>, QreError> {
    let mut out = Vec::new();
    for line in locus {
        for w in line.windows(2).step_by(stride.max(1)) {
            let (a, b) = (w[0], w[1]);
            let d = (b.0 - a.0, b.1 - a.1);
            let len = (d.0 * d.0 + d.1 * d.1).sqrt();
            if len == 0.0 {
                continue;
            }
            let normal = (-d.1 / len, d.0 / len);
            let mid = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
            let side = |s: f64| (mid.0 + s * offset * normal.0, mid.1 + s * offset * normal.1);
            let (p, m) = (side(1.0), side(-1.0));
            if p.0 <= 0.0 || p.1 <= 0.0 || m.0 <= 0.0 || m.1 <= 0.0 || locus_crossings(m, p, locus) != 1 {
                continue;
            }
            let count = |x: (f64, f64)| -> Result<usize, QreError> {
                Ok(solve_qre_fixed_points(game, &LogitParams::pair(x.0, x.1)?)?.len())
            };
            out.push(Crossing {
                at: mid,
                before: count(m)?,
                after: count(p)?,
            });
        }
    }
    Ok(out)
}
