//! Stationary points of the cusp potential `G(x) = x⁴/4 − u₁x²/2 − u₂x`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

/// `|Δ|` at or below this is reported as the fold boundary.
pub const BOUNDARY_BAND: f64 = 1e-12;

/// Roots closer than this (relative) inside the boundary band are merged.
const MERGE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CuspControl {
    pub u1: f64,
    pub u2: f64,
}

impl CuspControl {
    pub fn new(u1: f64, u2: f64) -> Self {
        Self { u1, u2 }
    }

    /// `4u₁³ − 27u₂²`; three real stationary points iff positive.
    pub fn discriminant(&self) -> f64 {
        4.0 * self.u1.powi(3) - 27.0 * self.u2 * self.u2
    }

    /// The drift `−∂G/∂x = −x³ + u₁x + u₂`.
    pub fn drift(&self, x: f64) -> f64 {
        -x * x * x + self.u1 * x + self.u2
    }

    pub fn potential(&self, x: f64) -> f64 {
        0.25 * x.powi(4) - 0.5 * self.u1 * x * x - self.u2 * x
    }

    /// `∂²G/∂x² = 3x² − u₁`.
    pub fn curvature(&self, x: f64) -> f64 {
        3.0 * x * x - self.u1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryPoint {
    pub x: f64,
    pub stability: Stability,
    pub multiplicity: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarySet {
    pub control: CuspControl,
    /// Distinct roots in ascending order.
    pub roots: Vec<StationaryPoint>,
    /// `max |−x³ + u₁x + u₂|` over the roots.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CuspRegion {
    /// Three equilibria.
    AThree,
    /// One equilibrium.
    BOne,
    Boundary,
}

pub fn cusp_region(c: CuspControl) -> CuspRegion {
    let d = c.discriminant();
    if d.abs() <= BOUNDARY_BAND {
        CuspRegion::Boundary
    } else if d > 0.0 {
        CuspRegion::AThree
    } else {
        CuspRegion::BOne
    }
}

fn polish(c: &CuspControl, x: f64) -> f64 {
    let f = c.drift(x);
    let df = u1_minus_3x2(c, x);
    if df == 0.0 {
        return x;
    }
    let next = x - f / df;
    if c.drift(next).abs() < f.abs() {
        next
    } else {
        x
    }
}

fn u1_minus_3x2(c: &CuspControl, x: f64) -> f64 {
    c.u1 - 3.0 * x * x
}

/// Real roots of `x³ − u₁x − u₂ = 0` in closed form (trigonometric when the
/// discriminant is positive, Cardano otherwise), each with one Newton step.
pub fn cusp_stationary_points(c: CuspControl) -> StationarySet {
    let d = c.discriminant();
    // (root, multiplicity)
    let mut xs: Vec<(f64, u8)> = if c.u1 == 0.0 && c.u2 == 0.0 {
        vec![(0.0, 3)]
    } else if d > 0.0 {
        // d > 0 forces u1 > 0
        let m = 2.0 * (c.u1 / 3.0).sqrt();
        let arg = (1.5 * c.u2 / c.u1 * (3.0 / c.u1).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| (m * (theta - 2.0 * PI * k as f64 / 3.0).cos(), 1))
            .collect()
    } else if d < 0.0 {
        let disc = (c.u2 * c.u2 / 4.0 - c.u1.powi(3) / 27.0).sqrt();
        // the larger cube root avoids cancellation; the other is −p/(3t)
        let t = (c.u2.abs() / 2.0 + disc).cbrt();
        let t = if c.u2 < 0.0 { -t } else { t };
        vec![(t + c.u1 / (3.0 * t), 1)]
    } else {
        // exactly on the fold: simple root plus double root
        let simple = 3.0 * c.u2 / c.u1;
        vec![(simple, 1), (-simple / 2.0, 2)]
    };
    for (x, _) in xs.iter_mut() {
        *x = polish(&c, *x);
    }
    xs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let boundary = cusp_region(c) == CuspRegion::Boundary;
    let mut roots: Vec<StationaryPoint> = Vec::with_capacity(3);
    for (x, mult) in xs {
        if let Some(last) = roots.last_mut() {
            let close = (x - last.x).abs() <= MERGE_TOL * x.abs().max(1.0);
            if (boundary && close) || x == last.x {
                last.multiplicity += mult;
                last.stability = Stability::Unstable;
                continue;
            }
        }
        let stability = if mult == 1 && c.curvature(x) > 0.0 {
            Stability::Stable
        } else {
            Stability::Unstable
        };
        roots.push(StationaryPoint {
            x,
            stability,
            multiplicity: mult,
        });
    }
    let residual = roots.iter().map(|r| c.drift(r.x).abs()).fold(0.0, f64::max);
    StationarySet {
        control: c,
        roots,
        residual,
    }
}

/// Evenly spaced samples `lo, …, hi` (`n ≥ 2`), parsed from `"LO:HI:N"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64, n: usize) -> Self {
        Self { lo, hi, n }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.n <= 1 {
            return self.lo;
        }
        if i + 1 == self.n {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n.max(2) - 1) as f64
    }
}

impl std::str::FromStr for AxisRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(format!("expected LO:HI:N, got `{s}`"));
        };
        let lo: f64 = lo.parse().map_err(|e| format!("bad LO `{lo}`: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("bad HI `{hi}`: {e}"))?;
        let n: usize = n.parse().map_err(|e| format!("bad N `{n}`: {e}"))?;
        if !lo.is_finite() || !hi.is_finite() || hi < lo {
            return Err(format!("invalid range {lo}..{hi}"));
        }
        if n < 2 {
            return Err(format!("need at least 2 samples, got {n}"));
        }
        Ok(Self { lo, hi, n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceRow {
    pub u1: f64,
    pub u2: f64,
    pub root: f64,
    pub stability: Stability,
}

/// Samples the equilibrium surface over a control grid, one row per root,
/// ordered by `u1` then `u2` then root.
pub fn sweep_cusp_surface(u1: AxisRange, u2: AxisRange) -> Vec<SurfaceRow> {
    (0..u1.n)
        .into_par_iter()
        .map(|i| {
            let a = u1.value(i);
            let mut rows = Vec::new();
            for j in 0..u2.n {
                let b = u2.value(j);
                for r in cusp_stationary_points(CuspControl::new(a, b)).roots {
                    rows.push(SurfaceRow {
                        u1: a,
                        u2: b,
                        root: r.x,
                        stability: r.stability,
                    });
                }
            }
            rows
        })
        .flatten()
        .collect()
}

/// Closed-form fold points `u₂ = ±√(4u₁³/27)` on a slice of constant `u₁ > 0`.
pub fn fold_points(u1: f64) -> Option<(f64, f64)> {
    if u1 <= 0.0 {
        return None;
    }
    let u2 = (4.0 * u1.powi(3) / 27.0).sqrt();
    Some((-u2, u2))
}

/// Locates changes in the equilibrium count along `u₂` at fixed `u₁` by a grid
/// scan followed by bisection on the root count.
pub fn locate_folds(u1: f64, u2: AxisRange) -> Vec<f64> {
    let count = |b: f64| cusp_stationary_points(CuspControl::new(u1, b)).roots.len();
    let mut out = Vec::new();
    let mut prev = count(u2.value(0));
    for j in 1..u2.n {
        let cur = count(u2.value(j));
        if cur != prev {
            let (mut lo, mut hi) = (u2.value(j - 1), u2.value(j));
            let c_lo = prev;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if count(mid) == c_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev = cur;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_point_single_root() {
        let s = cusp_stationary_points(CuspControl::new(0.0, 0.0));
        assert_eq!(s.roots.len(), 1);
        assert_eq!(s.roots[0].x, 0.0);
        assert_eq!(s.roots[0].multiplicity, 3);
        assert_eq!(cusp_region(CuspControl::new(0.0, 0.0)), CuspRegion::Boundary);
    }

    #[test]
    fn pitchfork_roots() {
        let s = cusp_stationary_points(CuspControl::new(1.0, 0.0));
        let xs: Vec<f64> = s.roots.iter().map(|r| r.x).collect();
        assert_eq!(xs.len(), 3);
        for (x, want) in xs.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((x - want).abs() < 1e-15, "{xs:?}");
        }
        let st: Vec<Stability> = s.roots.iter().map(|r| r.stability).collect();
        assert_eq!(st, vec![Stability::Stable, Stability::Unstable, Stability::Stable]);
        assert_eq!(cusp_region(CuspControl::new(1.0, 0.0)), CuspRegion::AThree);
    }

    #[test]
    fn region_b_single_root() {
        let c = CuspControl::new(-1.0, 1.0);
        let s = cusp_stationary_points(c);
        assert_eq!(s.roots.len(), 1);
        // x³ + x − 1 = 0
        assert!((s.roots[0].x - 0.682_327_803_828_019_3).abs() < 1e-14);
        assert!(s.residual <= 1e-10);
        assert_eq!(cusp_region(CuspControl::new(-1.0, 0.0)), CuspRegion::BOne);
    }

    #[test]
    fn exact_fold_has_double_root() {
        // x³ − 3x − 2 = (x + 1)²(x − 2)
        let s = cusp_stationary_points(CuspControl::new(3.0, 2.0));
        assert_eq!(s.roots.len(), 2);
        assert!((s.roots[0].x + 1.0).abs() < 1e-7);
        assert_eq!(s.roots[0].multiplicity, 2);
        assert_eq!(s.roots[0].stability, Stability::Unstable);
        assert!((s.roots[1].x - 2.0).abs() < 1e-12);
        assert_eq!(s.roots[1].stability, Stability::Stable);
    }

    #[test]
    fn slices() {
        let rows = sweep_cusp_surface(AxisRange::new(-1.0, -1.0, 2), AxisRange::new(-2.0, 2.0, 41));
        assert_eq!(rows.len(), 82);
        let (lo, hi) = fold_points(1.0).unwrap();
        let found = locate_folds(1.0, AxisRange::new(-1.0, 1.0, 101));
        assert_eq!(found.len(), 2);
        assert!((found[0] - lo).abs() < 1e-9 && (found[1] - hi).abs() < 1e-9, "{found:?}");
    }

    #[test]
    fn axis_parse() {
        let r: AxisRange = "-2:2:100".parse().unwrap();
        assert_eq!(r.values().len(), 100);
        assert_eq!(r.value(99), 2.0);
        assert!("1:0:3".parse::<AxisRange>().is_err());
        assert!("0:1".parse::<AxisRange>().is_err());
        assert!("0:1:1".parse::<AxisRange>().is_err());
    }
}
