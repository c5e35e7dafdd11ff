//! Support enumeration: an exhaustive equilibrium oracle for small games.
//!
//! For every pair of equal-size supports the indifference systems are solved
//! exactly; a solution is kept when it is strictly positive on its support and
//! no pure strategy outside the support does better.

use num_traits::{One, Signed, Zero};

use super::rational::{solve, Rational, RationalBimatrix};
use super::vertices::combinations;
use super::BimatrixEquilibrium;
use crate::error::PolytopeError;
use crate::game::BimatrixGame;

pub const SUPPORT_ENUMERATION_LIMIT: usize = 6;

/// Mixed strategy over `support` making every strategy in `targets`
/// indifferent, with `payoff(target, s)` the payoff of the opponent's `target`
/// against own strategy `s`. Returns the full-length strategy and the common
/// payoff value.
fn indifference(
    len: usize,
    support: &[usize],
    targets: &[usize],
    payoff: impl Fn(usize, usize) -> Rational,
) -> Option<(Vec<Rational>, Rational)> {
    let s = support.len();
    // unknowns: weights on the support, then the common value
    let mut mat = Vec::with_capacity(s + 1);
    let mut rhs = Vec::with_capacity(s + 1);
    for &t in targets {
        let mut row: Vec<Rational> = support.iter().map(|&k| payoff(t, k)).collect();
        row.push(-Rational::one());
        mat.push(row);
        rhs.push(Rational::zero());
    }
    let mut sum_row = vec![Rational::one(); s];
    sum_row.push(Rational::zero());
    mat.push(sum_row);
    rhs.push(Rational::one());
    let sol = solve(mat, rhs)?;
    if sol[..s].iter().any(|w| !w.is_positive()) {
        return None;
    }
    let mut full = vec![Rational::zero(); len];
    for (&k, w) in support.iter().zip(&sol) {
        full[k] = w.clone();
    }
    Some((full, sol[s].clone()))
}

/// All equilibria of a nondegenerate game with at most
/// [`SUPPORT_ENUMERATION_LIMIT`] strategies per agent. Payoffs need not be
/// positive.
pub fn support_enumeration(game: &BimatrixGame) -> Result<Vec<BimatrixEquilibrium>, PolytopeError> {
    let (l, m) = (game.rows(), game.cols());
    if l > SUPPORT_ENUMERATION_LIMIT || m > SUPPORT_ENUMERATION_LIMIT {
        return Err(PolytopeError::TooLarge {
            what: "support enumeration",
            limit: SUPPORT_ENUMERATION_LIMIT,
            rows: l,
            cols: m,
        });
    }
    let rg = RationalBimatrix::from_game(game)?;
    let mut out: Vec<BimatrixEquilibrium> = Vec::new();
    for size in 1..=l.min(m) {
        for rows in combinations(l, size) {
            for cols in combinations(m, size) {
                // y on `cols` makes agent 1 indifferent across `rows`
                let Some((y, v)) = indifference(m, &cols, &rows, |i, j| rg.a(i, j).clone()) else {
                    continue;
                };
                let Some((x, u)) = indifference(l, &rows, &cols, |j, i| rg.b(i, j).clone()) else {
                    continue;
                };
                if rg.ay(&y).iter().any(|r| *r > v) || rg.xb(&x).iter().any(|c| *c > u) {
                    continue;
                }
                if out.iter().any(|e| e.x == x && e.y == y) {
                    continue;
                }
                out.push(BimatrixEquilibrium::verified(game, x, y)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{chicken, prisoners_dilemma, EquilibriumKind};

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn chicken_has_three() {
        let eqs = support_enumeration(&chicken()).unwrap();
        assert_eq!(eqs.len(), 3);
        let mixed: Vec<_> = eqs.iter().filter(|e| e.point.kind == EquilibriumKind::Mixed).collect();
        assert_eq!(mixed.len(), 1);
        assert_eq!(mixed[0].x, vec![q(9, 10), q(1, 10)]);
        assert_eq!(mixed[0].y, vec![q(9, 10), q(1, 10)]);
    }

    #[test]
    fn pd_has_one() {
        let eqs = support_enumeration(&prisoners_dilemma()).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].x, vec![q(0, 1), q(1, 1)]);
        assert_eq!(eqs[0].y, vec![q(0, 1), q(1, 1)]);
    }

    #[test]
    fn matching_pennies_style() {
        let g = BimatrixGame::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]], &[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let eqs = support_enumeration(&g).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].x, vec![q(1, 2), q(1, 2)]);
        assert_eq!(eqs[0].y, vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn guard() {
        let big = BimatrixGame::new(
            crate::game::Matrix::from_fn(7, 2, |i, j| (i + j) as f64),
            crate::game::Matrix::from_fn(7, 2, |i, j| (i * j) as f64),
        )
        .unwrap();
        assert!(matches!(support_enumeration(&big), Err(PolytopeError::TooLarge { .. })));
    }
}
