use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::GameError;
use crate::game::BimatrixGame;

pub type Rational = BigRational;

/// Payoffs are snapped to multiples of `1 / PAYOFF_SCALE` before pivoting.
pub const PAYOFF_SCALE: i64 = 1_000_000;

pub fn rational_from_f64(v: f64) -> Result<Rational, GameError> {
    let scaled = (v * PAYOFF_SCALE as f64).round();
    let numer = BigInt::from_f64(scaled).ok_or_else(|| GameError::NonFinite {
        location: format!("payoff {v}"),
    })?;
    Ok(Rational::new(numer, BigInt::from(PAYOFF_SCALE)))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `"p/q"`, always with an explicit denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: BigInt = p.trim().parse().ok()?;
    let q: BigInt = q.trim().parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(Rational::new(p, q))
}

/// A bimatrix game with exact rational payoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalBimatrix {
    pub(crate) a: Vec<Vec<Rational>>,
    pub(crate) b: Vec<Vec<Rational>>,
}

impl RationalBimatrix {
    pub fn from_game(game: &BimatrixGame) -> Result<Self, GameError> {
        let conv = |m: &crate::game::Matrix| -> Result<Vec<Vec<Rational>>, GameError> {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|&v| rational_from_f64(v)).collect())
                .collect()
        };
        Ok(Self {
            a: conv(game.a())?,
            b: conv(game.b())?,
        })
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.a[0].len()
    }

    pub fn a(&self, i: usize, j: usize) -> &Rational {
        &self.a[i][j]
    }

    pub fn b(&self, i: usize, j: usize) -> &Rational {
        &self.b[i][j]
    }

    pub fn is_positive(&self) -> bool {
        self.a.iter().chain(&self.b).flatten().all(Signed::is_positive)
    }

    /// `(xᵀB)_j` for every column.
    pub fn xb(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.cols())
            .map(|j| x.iter().enumerate().map(|(i, xi)| xi * &self.b[i][j]).sum())
            .collect()
    }

    /// `(Ay)_i` for every row.
    pub fn ay(&self, y: &[Rational]) -> Vec<Rational> {
        self.a
            .iter()
            .map(|row| row.iter().zip(y).map(|(a, yj)| a * yj).sum())
            .collect()
    }
}

/// Solves the square system `m · z = rhs` exactly. Returns `None` when `m`
/// is singular.
pub fn solve(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].recip();
        for c in col..n {
            m[col][c] = &m[col][c] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
            let t = &f * &rhs[col];
            rhs[r] -= t;
        }
    }
    Some(rhs)
}

pub fn normalize(v: &[Rational]) -> Option<Vec<Rational>> {
    let s: Rational = v.iter().sum();
    if s.is_zero() {
        return None;
    }
    Some(v.iter().map(|t| t / &s).collect())
}

pub fn one() -> Rational {
    Rational::one()
}
