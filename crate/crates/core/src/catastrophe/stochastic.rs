//! Stationary densities and Euler–Maruyama paths of `dx = g(x)dt + σ(x)dW`.
//!
//! The stationary density is
//! `p(x) ∝ exp(∫ₐˣ 2(g(z) − ½ d/dz σ²(z)) / σ²(z) dz)`, with the lower limit
//! `a` taken as the lower end of the support. When `σ` is constant this
//! reduces to `exp(ξ ∫ g)` with `ξ = 2/σ²`.
//!
//! Simulation draws its normal increments from ChaCha8 (`rand_chacha`) seeded
//! with `seed_from_u64`, through `rand_distr::StandardNormal`, so a given
//! `(seed, dt, steps)` reproduces the same path on every platform.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::StochasticError;

pub const MIN_GRID: usize = 3;
const SIMPSON_TOL: f64 = 1e-12;
const SIMPSON_DEPTH: u32 = 40;

/// Diffusion coefficient `σ(x)`.
#[derive(Clone)]
pub enum Diffusion {
    Constant(f64),
    Variable(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Diffusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diffusion::Constant(s) => write!(f, "Constant({s})"),
            Diffusion::Variable(_) => f.write_str("Variable(..)"),
        }
    }
}

impl Diffusion {
    pub fn sigma(&self, x: f64) -> f64 {
        match self {
            Diffusion::Constant(s) => *s,
            Diffusion::Variable(f) => f(x),
        }
    }

    /// `d/dx σ²(x)` by central difference.
    fn d_sigma2(&self, x: f64) -> f64 {
        match self {
            Diffusion::Constant(_) => 0.0,
            Diffusion::Variable(f) => {
                let h = 1e-5 * x.abs().max(1.0);
                let (a, b) = (f(x + h), f(x - h));
                (a * a - b * b) / (2.0 * h)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn new(lo: f64, hi: f64) -> Result<Self, StochasticError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(StochasticError::InvalidSupport { lo, hi });
        }
        Ok(Self { lo, hi })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryDensity {
    pub support: Support,
    /// `2/σ²` when `σ` is constant.
    pub xi: Option<f64>,
    /// `(x, p(x))` on an even grid spanning the support.
    pub grid: Vec<(f64, f64)>,
    /// Natural log of the normalization constant of `exp(∫ …)`.
    pub log_z: f64,
}

impl StationaryDensity {
    pub fn spacing(&self) -> f64 {
        (self.support.hi - self.support.lo) / (self.grid.len() - 1) as f64
    }

    /// Linear interpolation; zero outside the support.
    pub fn density_at(&self, x: f64) -> f64 {
        let Support { lo, hi } = self.support;
        if !(lo..=hi).contains(&x) {
            return 0.0;
        }
        let h = self.spacing();
        let k = (((x - lo) / h).floor() as usize).min(self.grid.len() - 2);
        let (x0, p0) = self.grid[k];
        let (_, p1) = self.grid[k + 1];
        let t = ((x - x0) / h).clamp(0.0, 1.0);
        p0 + t * (p1 - p0)
    }

    /// Trapezoidal integral of the grid density.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid)
    }

    /// Mass of the interpolated density on `[a, b]`.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        let a = a.max(self.support.lo);
        let b = b.min(self.support.hi);
        if b <= a {
            return 0.0;
        }
        let mut pts = vec![(a, self.density_at(a))];
        pts.extend(self.grid.iter().copied().filter(|&(x, _)| x > a && x < b));
        pts.push((b, self.density_at(b)));
        trapezoid(&pts)
    }

    /// Interior grid points that are strict local maxima.
    pub fn modes(&self) -> Vec<f64> {
        self.grid
            .windows(3)
            .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
            .map(|w| w[1].0)
            .collect()
    }
}

fn trapezoid(pts: &[(f64, f64)]) -> f64 {
    pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    fn step(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol || !delta.is_finite() {
            return left + right + delta / 15.0;
        }
        step(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + step(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, fa, b, fb, m, fm, whole, SIMPSON_TOL, SIMPSON_DEPTH)
}

/// Stationary density of the diffusion on `support`, sampled at `grid_size`
/// evenly spaced points.
pub fn stationary_density(
    drift: &dyn Fn(f64) -> f64,
    diffusion: &Diffusion,
    support: Support,
    grid_size: usize,
) -> Result<StationaryDensity, StochasticError> {
    if grid_size < MIN_GRID {
        return Err(StochasticError::GridTooSmall {
            min: MIN_GRID,
            found: grid_size,
        });
    }
    let Support { lo, hi } = Support::new(support.lo, support.hi)?;
    let h = (hi - lo) / (grid_size - 1) as f64;
    let xs: Vec<f64> = (0..grid_size)
        .map(|k| if k + 1 == grid_size { hi } else { lo + k as f64 * h })
        .collect();

    // reject σ ≤ 0 on the grid and half-grid before integrating
    for k in 0..grid_size {
        for x in [xs[k], xs[k] + 0.5 * h] {
            if x > hi {
                continue;
            }
            let s = diffusion.sigma(x);
            if !(s > 0.0) || !s.is_finite() {
                return Err(StochasticError::NonPositiveSigma { x, sigma: s });
            }
        }
    }

    let xi = match diffusion {
        Diffusion::Constant(s) => Some(2.0 / (s * s)),
        Diffusion::Variable(_) => None,
    };
    let integrand = |z: f64| -> f64 {
        match xi {
            Some(xi) => xi * drift(z),
            None => {
                let s = diffusion.sigma(z);
                let s2 = s * s;
                if !(s > 0.0) {
                    return f64::NAN;
                }
                2.0 * (drift(z) - 0.5 * diffusion.d_sigma2(z)) / s2
            }
        }
    };

    let mut exponent = Vec::with_capacity(grid_size);
    exponent.push(0.0);
    for k in 1..grid_size {
        let piece = simpson(&integrand, xs[k - 1], xs[k]);
        let e = exponent[k - 1] + piece;
        if e.is_nan() {
            let s = diffusion.sigma(xs[k]);
            if !(s > 0.0) {
                return Err(StochasticError::NonPositiveSigma { x: xs[k], sigma: s });
            }
            return Err(StochasticError::NonFinite(xs[k]));
        }
        exponent.push(e);
    }
    let emax = exponent.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !emax.is_finite() {
        return Err(StochasticError::NonFinite(xs[exponent.iter().position(|e| !e.is_finite()).unwrap_or(0)]));
    }
    let mut grid: Vec<(f64, f64)> = xs.iter().zip(&exponent).map(|(&x, &e)| (x, (e - emax).exp())).collect();
    let z = trapezoid(&grid);
    for p in grid.iter_mut() {
        p.1 /= z;
    }
    Ok(StationaryDensity {
        support: Support { lo, hi },
        xi,
        grid,
        log_z: emax + z.ln(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdeConfig {
    pub x0: f64,
    pub dt: f64,
    pub steps: usize,
    pub seed: u64,
    /// Leaving this interval aborts the run.
    pub guard: (f64, f64),
}

impl SdeConfig {
    pub fn new(x0: f64, dt: f64, steps: usize, seed: u64) -> Self {
        Self {
            x0,
            dt,
            steps,
            seed,
            guard: (-1e6, 1e6),
        }
    }

    pub fn with_guard(mut self, lo: f64, hi: f64) -> Self {
        self.guard = (lo, hi);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SdeRun {
    pub config: SdeConfig,
    /// `steps + 1` states, starting at `x0`.
    pub trajectory: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    /// Normalized so that `Σ density·width = 1`.
    pub density: Vec<f64>,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// `∫|h − p|` with `p` averaged per bin, plus whatever mass `p` puts
    /// outside the binned range.
    pub fn l1_distance(&self, p: &StationaryDensity) -> f64 {
        let (first, last) = (self.edges[0], *self.edges.last().unwrap());
        let mut total = p.mass(f64::NEG_INFINITY, first) + p.mass(last, f64::INFINITY);
        for (w, h) in self.edges.windows(2).zip(&self.density) {
            total += (h * (w[1] - w[0]) - p.mass(w[0], w[1])).abs();
        }
        total
    }
}

impl SdeRun {
    /// Histogram of every visited state over `[lo, hi]` (the visited range
    /// when `None`).
    pub fn histogram(&self, bins: usize, range: Option<(f64, f64)>) -> Histogram {
        let bins = bins.max(1);
        let (lo, hi) = range.unwrap_or_else(|| {
            let lo = self.trajectory.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = self.trajectory.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, lo + 0.5)
            }
        });
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|k| if k == bins { hi } else { lo + k as f64 * width }).collect();
        let mut counts = vec![0usize; bins];
        for &x in &self.trajectory {
            if x < lo || x > hi {
                continue;
            }
            let k = (((x - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
        let n = self.trajectory.len() as f64;
        Histogram {
            edges,
            density: counts.iter().map(|&c| c as f64 / (n * width)).collect(),
        }
    }
}

/// Euler–Maruyama integration of `dx = g(x)dt + σ(x)dW`.
pub fn simulate_sde(
    drift: &dyn Fn(f64) -> f64,
    diffusion: &Diffusion,
    config: SdeConfig,
) -> Result<SdeRun, StochasticError> {
    let SdeConfig { x0, dt, steps, seed, guard } = config;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(StochasticError::InvalidStep(dt));
    }
    if steps == 0 {
        return Err(StochasticError::GridTooSmall { min: 1, found: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sqrt_dt = dt.sqrt();
    let mut x = x0;
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(x);
    for step in 1..=steps {
        let z: f64 = StandardNormal.sample(&mut rng);
        x += drift(x) * dt + diffusion.sigma(x) * sqrt_dt * z;
        if !x.is_finite() || x < guard.0 || x > guard.1 {
            return Err(StochasticError::Escaped {
                lo: guard.0,
                hi: guard.1,
                step,
                time: step as f64 * dt,
                value: x,
            });
        }
        trajectory.push(x);
    }
    Ok(SdeRun { config, trajectory })
}
