//! Dictionaries for the polytopes `X = {x ≥ 0, xᵀB ≤ 1}` and
//! `Y = {y ≥ 0, Ay ≤ 1}`.
//!
//! Both tableaux index their columns by label: column `c` carries label
//! `c + 1`. On the X side columns `0..l` are the `x_i` and `l..l+m` the slacks
//! of `xᵀB ≤ 1`; on the Y side columns `0..l` are the slacks of `Ay ≤ 1` and
//! `l..l+m` the `y_j`. A label belongs to a vertex exactly when its column is
//! nonbasic.

use std::cmp::Ordering;
use std::ops::Range;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::rational::{one, Rational, RationalBimatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

/// Result of one pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pivot {
    /// Zero-based column that left the basis.
    pub leaving: usize,
    /// The plain ratio test tied and the lexicographic rule decided.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelledTableau {
    side: Side,
    l: usize,
    m: usize,
    /// One row per constraint: `l + m` coefficients followed by the rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Columns of the starting slack basis; their current entries form the
    /// basis inverse used for lexicographic ties.
    reference: Range<usize>,
}

impl LabelledTableau {
    /// The dictionary at the origin, where every slack is basic.
    pub fn at_origin(game: &RationalBimatrix, side: Side) -> Self {
        let (l, m) = (game.rows(), game.cols());
        let width = l + m + 1;
        let (rows, basis, reference) = match side {
            Side::X => {
                let rows = (0..m)
                    .map(|j| {
                        let mut row = vec![Rational::zero(); width];
                        for (i, cell) in row.iter_mut().enumerate().take(l) {
                            *cell = game.b(i, j).clone();
                        }
                        row[l + j] = one();
                        row[l + m] = one();
                        row
                    })
                    .collect();
                (rows, (l..l + m).collect(), l..l + m)
            }
            Side::Y => {
                let rows = (0..l)
                    .map(|i| {
                        let mut row = vec![Rational::zero(); width];
                        row[i] = one();
                        for j in 0..m {
                            row[l + j] = game.a(i, j).clone();
                        }
                        row[l + m] = one();
                        row
                    })
                    .collect();
                (rows, (0..l).collect(), 0..l)
            }
        };
        Self {
            side,
            l,
            m,
            rows,
            basis,
            reference,
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn is_basic(&self, col: usize) -> bool {
        self.basis.contains(&col)
    }

    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.l + self.m]
    }

    /// Zero-based labels of the current vertex (its nonbasic columns).
    pub fn labels(&self) -> Vec<usize> {
        (0..self.l + self.m).filter(|c| !self.is_basic(*c)).collect()
    }

    /// Values of every column at the current vertex.
    pub fn column_values(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.l + self.m];
        for (r, &c) in self.basis.iter().enumerate() {
            v[c] = self.rhs(r).clone();
        }
        v
    }

    /// The strategy coordinates of the vertex: `x` on the X side, `y` on the Y side.
    pub fn point(&self) -> Vec<Rational> {
        let v = self.column_values();
        match self.side {
            Side::X => v[..self.l].to_vec(),
            Side::Y => v[self.l..].to_vec(),
        }
    }

    /// Compares the lexicographic keys `(rhs, reference row) / pivot` of two rows.
    fn lex_cmp(&self, r1: usize, r2: usize, col: usize) -> Ordering {
        let p1 = &self.rows[r1][col];
        let p2 = &self.rows[r2][col];
        let keys = std::iter::once(self.l + self.m).chain(self.reference.clone());
        for k in keys {
            let a = &self.rows[r1][k] / p1;
            let b = &self.rows[r2][k] / p2;
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Brings nonbasic column `col` into the basis by the lexicographic
    /// minimum-ratio rule.
    pub fn pivot(&mut self, col: usize) -> Pivot {
        assert!(!self.is_basic(col), "column {col} is already basic");
        let candidates: Vec<usize> = (0..self.rows.len())
            .filter(|&r| self.rows[r][col].is_positive())
            .collect();
        // X and Y are bounded, so some row always limits the step.
        assert!(!candidates.is_empty(), "unbounded pivot on column {col}");
        let ratio = |r: usize| self.rhs(r) / &self.rows[r][col];
        let min = candidates.iter().map(|&r| ratio(r)).min().expect("nonempty");
        // only a tie at the minimum ratio needs the lexicographic rule
        let degenerate = candidates.iter().filter(|&&r| ratio(r) == min).count() > 1;
        let mut best = candidates[0];
        for &r in &candidates[1..] {
            if self.lex_cmp(r, best, col) == Ordering::Less {
                best = r;
            }
        }
        let leaving = self.basis[best];
        self.eliminate(best, col);
        Pivot { leaving, degenerate }
    }

    fn eliminate(&mut self, pr: usize, col: usize) {
        let inv = self.rows[pr][col].recip();
        for v in self.rows[pr].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = self.rows[pr].clone();
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r == pr || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[pr] = col;
    }
}
