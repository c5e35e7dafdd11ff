//! Shapley labels and brute-force vertex enumeration of `X` and `Y`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::rational::{format_rational, solve, Rational, RationalBimatrix};
use super::tableau::Side;
use crate::error::PolytopeError;

/// Vertex enumeration is exhaustive over constraint subsets; keep it small.
pub const VERTEX_ENUMERATION_LIMIT: usize = 10;

/// One-based labels drawn from `K = {1..l} ∪ {l+1..l+m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct LabelSet(pub BTreeSet<usize>);

impl LabelSet {
    pub fn from_zero_based(labels: impl IntoIterator<Item = usize>) -> Self {
        Self(labels.into_iter().map(|c| c + 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: usize) -> bool {
        self.0.contains(&label)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self(self.0.intersection(&other.0).copied().collect())
    }
}

/// Labels of a point of `X` (`side = X`) or `Y` (`side = Y`). The point must
/// satisfy its polytope's inequalities exactly.
pub fn labels_of(vertex: &[Rational], side: Side, game: &RationalBimatrix) -> Result<LabelSet, PolytopeError> {
    let (l, m) = (game.rows(), game.cols());
    let (dim, own_offset, other_offset) = match side {
        Side::X => (l, 0, l),
        Side::Y => (m, l, 0),
    };
    if vertex.len() != dim {
        return Err(PolytopeError::VertexDimension {
            expected: dim,
            found: vertex.len(),
        });
    }
    let name = match side {
        Side::X => "x",
        Side::Y => "y",
    };
    let mut labels = BTreeSet::new();
    for (i, v) in vertex.iter().enumerate() {
        if v.is_negative() {
            return Err(PolytopeError::Infeasible {
                constraint: format!("{name}_{} >= 0", i + 1),
                detail: format!("value {}", format_rational(v)),
            });
        }
        if v.is_zero() {
            labels.insert(own_offset + i + 1);
        }
    }
    let products = match side {
        Side::X => game.xb(vertex),
        Side::Y => game.ay(vertex),
    };
    for (j, s) in products.iter().enumerate() {
        if *s > Rational::one() {
            let constraint = match side {
                Side::X => format!("(xᵀB)_{} <= 1", j + 1),
                Side::Y => format!("(Ay)_{} <= 1", j + 1),
            };
            return Err(PolytopeError::Infeasible {
                constraint,
                detail: format!("value {}", format_rational(s)),
            });
        }
        if s.is_one() {
            labels.insert(other_offset + j + 1);
        }
    }
    Ok(LabelSet(labels))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeVertex {
    pub side: Side,
    pub point: Vec<Rational>,
    pub labels: LabelSet,
}

/// Every vertex of `X` or `Y`, found by solving each choice of `dim` tight
/// constraints.
pub fn enumerate_vertices(game: &RationalBimatrix, side: Side) -> Result<Vec<PolytopeVertex>, PolytopeError> {
    let (l, m) = (game.rows(), game.cols());
    if l > VERTEX_ENUMERATION_LIMIT || m > VERTEX_ENUMERATION_LIMIT {
        return Err(PolytopeError::TooLarge {
            what: "vertex enumeration",
            limit: VERTEX_ENUMERATION_LIMIT,
            rows: l,
            cols: m,
        });
    }
    let (dim, others) = match side {
        Side::X => (l, m),
        Side::Y => (m, l),
    };
    // constraint c < dim: coordinate c is zero; c >= dim: product row c - dim is one
    let coefficient = |c: usize, var: usize| -> Rational {
        if c < dim {
            if c == var {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else {
            let k = c - dim;
            match side {
                Side::X => game.b(var, k).clone(),
                Side::Y => game.a(k, var).clone(),
            }
        }
    };
    let mut found: Vec<PolytopeVertex> = Vec::new();
    for subset in combinations(dim + others, dim) {
        let mat = subset
            .iter()
            .map(|&c| (0..dim).map(|v| coefficient(c, v)).collect())
            .collect();
        let rhs = subset
            .iter()
            .map(|&c| if c < dim { Rational::zero() } else { Rational::one() })
            .collect();
        let Some(point) = solve(mat, rhs) else { continue };
        if found.iter().any(|v| v.point == point) {
            continue;
        }
        match labels_of(&point, side, game) {
            Ok(labels) => found.push(PolytopeVertex { side, point, labels }),
            Err(PolytopeError::Infeasible { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(found)
}

/// A vertex with more tight constraints than its dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyWitness {
    pub vertex: PolytopeVertex,
    pub expected_labels: usize,
}

/// `None` when every vertex of `X` has exactly `l` labels and every vertex of
/// `Y` exactly `m`; otherwise the first offending vertex.
pub fn degeneracy_witness(game: &RationalBimatrix) -> Result<Option<DegeneracyWitness>, PolytopeError> {
    for (side, expected) in [(Side::X, game.rows()), (Side::Y, game.cols())] {
        for v in enumerate_vertices(game, side)? {
            if v.labels.len() != expected {
                return Ok(Some(DegeneracyWitness {
                    vertex: v,
                    expected_labels: expected,
                }));
            }
        }
    }
    Ok(None)
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let next = {
            let mut c = out.clone();
            let mut i = k;
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if c[i] < n - k + i {
                    c[i] += 1;
                    for t in i + 1..k {
                        c[t] = c[t - 1] + 1;
                    }
                    break Some(c);
                }
            }
        };
        current = next;
        Some(out)
    })
}
