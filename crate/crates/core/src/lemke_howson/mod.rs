//! Lemke–Howson path following on the labelled polytopes of a bimatrix game.
//!
//! All pivoting is done in exact rational arithmetic. Payoffs are snapped to
//! multiples of `1e-6` first (see [`rational::PAYOFF_SCALE`]), which is exact
//! for games with integer or short decimal payoffs. Ties in the ratio test are
//! broken lexicographically against the starting slack basis, which is the
//! standard symbolic perturbation and makes every path well defined even for
//! degenerate games.

pub mod rational;
pub mod support;
pub mod tableau;
pub mod vertices;

use std::collections::{HashSet, VecDeque};

use num_traits::Zero;

pub use rational::{format_rational, Rational, RationalBimatrix};
pub use support::support_enumeration;
pub use tableau::{LabelledTableau, Side};
pub use vertices::{
    degeneracy_witness, enumerate_vertices, labels_of, DegeneracyWitness, LabelSet, PolytopeVertex,
};

use crate::error::{GameError, PolytopeError};
use crate::game::{BimatrixGame, EquilibriumPoint, MixedStrategyProfile, NashVerdict};

/// Tolerance for the floating-point cross-check of exact equilibria.
pub const VERIFY_TOL: f64 = 1e-9;

/// An equilibrium with exact strategies and its verified floating-point view.
#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixEquilibrium {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub point: EquilibriumPoint,
}

impl BimatrixEquilibrium {
    /// Wraps exact strategies after confirming them with `is_nash` on `game`.
    pub fn verified(game: &BimatrixGame, x: Vec<Rational>, y: Vec<Rational>) -> Result<Self, GameError> {
        let profile = MixedStrategyProfile::new_unchecked(vec![
            x.iter().map(rational::to_f64).collect(),
            y.iter().map(rational::to_f64).collect(),
        ]);
        match game.to_normal_form().is_nash(&profile, VERIFY_TOL)? {
            NashVerdict::Accepted(point) => Ok(Self { x, y, point }),
            NashVerdict::Rejected(d) => Err(GameError::NotNormalizedEquilibrium(format!(
                "agent {} gains {} by deviating to choice {}",
                d.agent + 1,
                d.gain,
                d.choice + 1
            ))),
        }
    }

    pub fn same_strategies(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }
}

/// A pair of dictionaries, one per polytope. Together their bases are
/// complementary: every label is nonbasic on exactly one side.
#[derive(Debug, Clone, PartialEq)]
pub struct TableauPair {
    pub x: LabelledTableau,
    pub y: LabelledTableau,
}

impl TableauPair {
    fn side(&self, side: Side) -> &LabelledTableau {
        match side {
            Side::X => &self.x,
            Side::Y => &self.y,
        }
    }

    fn side_mut(&mut self, side: Side) -> &mut LabelledTableau {
        match side {
            Side::X => &mut self.x,
            Side::Y => &mut self.y,
        }
    }

    pub fn vertex(&self) -> VertexPair {
        VertexPair {
            x: self.x.point(),
            y: self.y.point(),
        }
    }

    pub fn labels(&self) -> (LabelSet, LabelSet) {
        (
            LabelSet::from_zero_based(self.x.labels()),
            LabelSet::from_zero_based(self.y.labels()),
        )
    }

    fn basis_key(&self) -> (Vec<usize>, Vec<usize>) {
        let mut bx = self.x.basis().to_vec();
        let mut by = self.y.basis().to_vec();
        bx.sort_unstable();
        by.sort_unstable();
        (bx, by)
    }
}

/// A point of `X × Y` in the unnormalized `(u, v)` coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexPair {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
}

impl VertexPair {
    pub fn is_artificial(&self) -> bool {
        self.x.iter().chain(&self.y).all(Zero::is_zero)
    }
}

/// One complementary pivot: `entering` (one-based label) came into the basis
/// on `side` and `leaving` left it, arriving at `vertex`.
#[derive(Debug, Clone, PartialEq)]
pub struct LhStep {
    pub side: Side,
    pub entering: usize,
    pub leaving: usize,
    pub vertex: VertexPair,
    pub labels: (LabelSet, LabelSet),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LhPath {
    /// The dropped label, one-based.
    pub label: usize,
    pub start: VertexPair,
    pub steps: Vec<LhStep>,
    pub end: VertexPair,
    /// Some ratio test tied and was settled lexicographically.
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct LhRun {
    pub path: LhPath,
    pub end: TableauPair,
}

/// Complementary pivoting on a positive bimatrix game.
#[derive(Debug, Clone)]
pub struct LemkeHowson {
    game: BimatrixGame,
    exact: RationalBimatrix,
}

impl LemkeHowson {
    pub fn new(game: &BimatrixGame) -> Result<Self, PolytopeError> {
        if !game.is_positive() {
            return Err(GameError::NotPositive { min: game.min_entry() }.into());
        }
        let exact = RationalBimatrix::from_game(game)?;
        if !exact.is_positive() {
            return Err(GameError::NotPositive { min: game.min_entry() }.into());
        }
        Ok(Self {
            game: game.clone(),
            exact,
        })
    }

    pub fn game(&self) -> &BimatrixGame {
        &self.game
    }

    pub fn exact_game(&self) -> &RationalBimatrix {
        &self.exact
    }

    pub fn num_labels(&self) -> usize {
        self.exact.rows() + self.exact.cols()
    }

    /// The artificial equilibrium `(0, 0)`.
    pub fn artificial(&self) -> TableauPair {
        TableauPair {
            x: LabelledTableau::at_origin(&self.exact, Side::X),
            y: LabelledTableau::at_origin(&self.exact, Side::Y),
        }
    }

    /// Follows the path that drops `label` (one-based) from a completely
    /// labelled `start` until the next completely labelled pair.
    pub fn follow(&self, start: &TableauPair, label: usize) -> Result<LhRun, PolytopeError> {
        let k = self.num_labels();
        if label == 0 || label > k {
            return Err(PolytopeError::LabelOutOfRange { label, max: k });
        }
        let dropped = label - 1;
        let mut state = start.clone();
        let mut side = if state.x.is_basic(dropped) { Side::Y } else { Side::X };
        debug_assert!(!state.side(side).is_basic(dropped));
        let mut entering = dropped;
        let mut seen = HashSet::new();
        seen.insert(state.basis_key());
        let mut steps = Vec::new();
        let mut degenerate = false;
        loop {
            let pivot = state.side_mut(side).pivot(entering);
            degenerate |= pivot.degenerate;
            steps.push(LhStep {
                side,
                entering: entering + 1,
                leaving: pivot.leaving + 1,
                vertex: state.vertex(),
                labels: state.labels(),
            });
            if pivot.leaving == dropped {
                break;
            }
            if !seen.insert(state.basis_key()) {
                return Err(PolytopeError::PivotCycle { steps: steps.len() });
            }
            // the leaving label is now duplicated; pick it up on the other side
            entering = pivot.leaving;
            side = side.other();
        }
        Ok(LhRun {
            path: LhPath {
                label,
                start: start.vertex(),
                end: state.vertex(),
                steps,
                degenerate,
            },
            end: state,
        })
    }

    /// Normalizes the strategy part of a completely labelled pair.
    pub fn equilibrium_of(&self, pair: &VertexPair) -> Result<BimatrixEquilibrium, PolytopeError> {
        let (Some(x), Some(y)) = (rational::normalize(&pair.x), rational::normalize(&pair.y)) else {
            return Err(GameError::ArtificialEquilibrium.into());
        };
        Ok(BimatrixEquilibrium::verified(&self.game, x, y)?)
    }
}

#[derive(Debug, Clone)]
pub struct LhOutcome {
    pub equilibrium: BimatrixEquilibrium,
    pub path: LhPath,
}

/// Runs Lemke–Howson from the artificial equilibrium dropping `label`
/// (one-based, `1..=l+m`). The game must have strictly positive payoffs.
pub fn lemke_howson(game: &BimatrixGame, label: usize) -> Result<LhOutcome, PolytopeError> {
    let lh = LemkeHowson::new(game)?;
    let run = lh.follow(&lh.artificial(), label)?;
    let equilibrium = lh.equilibrium_of(&run.path.end)?;
    Ok(LhOutcome {
        equilibrium,
        path: run.path,
    })
}

#[derive(Debug, Clone)]
pub struct LhEnumeration {
    pub equilibria: Vec<BimatrixEquilibrium>,
    /// A degenerate ratio test occurred on some path; completeness is not
    /// guaranteed.
    pub degenerate: bool,
}

/// Equilibria reachable from the artificial equilibrium through almost
/// completely labelled paths for every label, restarting from each
/// equilibrium found.
pub fn enumerate_equilibria_lh(game: &BimatrixGame) -> Result<LhEnumeration, PolytopeError> {
    let lh = LemkeHowson::new(game)?;
    let (l, m) = (game.rows(), game.cols());
    if l > vertices::VERTEX_ENUMERATION_LIMIT || m > vertices::VERTEX_ENUMERATION_LIMIT {
        return Err(PolytopeError::TooLarge {
            what: "Lemke-Howson enumeration",
            limit: vertices::VERTEX_ENUMERATION_LIMIT,
            rows: l,
            cols: m,
        });
    }
    let mut found: Vec<BimatrixEquilibrium> = Vec::new();
    let mut visited: HashSet<VertexPair> = HashSet::new();
    let mut queue = VecDeque::new();
    let origin = lh.artificial();
    visited.insert(origin.vertex());
    queue.push_back(origin);
    let mut degenerate = false;
    while let Some(state) = queue.pop_front() {
        for label in 1..=lh.num_labels() {
            let run = lh.follow(&state, label)?;
            degenerate |= run.path.degenerate;
            let end = run.end.vertex();
            if visited.insert(end.clone()) {
                found.push(lh.equilibrium_of(&end)?);
                queue.push_back(run.end);
            }
        }
    }
    Ok(LhEnumeration {
        equilibria: found,
        degenerate,
    })
}
