//! Two agents with two choices each.
//!
//! With `p₁, p₂` the probabilities of each agent's first choice and
//! `Q_i = 2p_i − 1`, agent `i`'s payoff advantage of its first choice is
//! linear in the opponent's coordinate, `Δ_i(Q₋ᵢ) = α_i + γ_i·Q₋ᵢ`, and the
//! logit fixed point reads `Q_i = tanh(β_i·Δ_i(Q₋ᵢ)/2)`.
//!
//! All fixed points are found through the scalar equation
//! `x = R₁(R₂(x))`, where `R_i` is agent `i`'s logit response in probability
//! coordinates.

use serde::Serialize;

use super::logit::{fixed_point_residual, LogitParams};
use crate::error::{GameError, QreError};
use crate::game::{BimatrixGame, MixedStrategyProfile, NormalFormGame};
use crate::lemke_howson::rational::RationalBimatrix;
use crate::lemke_howson::{degeneracy_witness, support_enumeration};

pub const SCAN_POINTS: usize = 4096;
/// Slopes of the composed response within this of 1 are marginal.
pub const MARGINAL_TOL: f64 = 1e-8;
/// `|δq| ≤` this counts as a tie in the best-response map.
pub const HEAVISIDE_TOL: f64 = 1e-12;

/// Rescaled first-choice probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QCoordinates {
    pub q1: f64,
    pub q2: f64,
}

impl QCoordinates {
    pub fn new(q1: f64, q2: f64) -> Self {
        Self { q1, q2 }
    }

    pub fn get(&self, agent: usize) -> f64 {
        if agent == 0 {
            self.q1
        } else {
            self.q2
        }
    }

    pub fn from_probabilities(p1: f64, p2: f64) -> Self {
        Self::new(2.0 * p1 - 1.0, 2.0 * p2 - 1.0)
    }

    pub fn from_profile(profile: &MixedStrategyProfile) -> Self {
        Self::from_probabilities(profile.agent(0)[0], profile.agent(1)[0])
    }

    /// First-choice probabilities `(p₁, p₂)`.
    pub fn probabilities(&self) -> (f64, f64) {
        ((self.q1 + 1.0) / 2.0, (self.q2 + 1.0) / 2.0)
    }

    pub fn to_profile(&self) -> MixedStrategyProfile {
        let (p1, p2) = self.probabilities();
        MixedStrategyProfile::new_unchecked(vec![vec![p1, 1.0 - p1], vec![p2, 1.0 - p2]])
    }

    pub fn is_interior(&self) -> bool {
        self.q1.abs() < 1.0 && self.q2.abs() < 1.0
    }
}

/// Numerically stable `1/(1 + e^{−z})`.
pub(crate) fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// The payoff-difference form of a two-by-two game.
#[derive(Debug, Clone, PartialEq)]
pub struct LogitGame2x2 {
    game: BimatrixGame,
    alpha: [f64; 2],
    gamma: [f64; 2],
}

impl LogitGame2x2 {
    pub fn new(game: &BimatrixGame) -> Result<Self, QreError> {
        if !game.is_2x2() {
            return Err(GameError::WrongShape {
                expected: "2x2",
                found: format!("{}x{}", game.rows(), game.cols()),
            }
            .into());
        }
        let (a, b) = (game.a(), game.b());
        // Δ in the opponent's probability: d0 + d1·p
        let d1 = [
            a.get(0, 0) - a.get(0, 1) - a.get(1, 0) + a.get(1, 1),
            b.get(0, 0) - b.get(1, 0) - b.get(0, 1) + b.get(1, 1),
        ];
        let d0 = [a.get(0, 1) - a.get(1, 1), b.get(1, 0) - b.get(1, 1)];
        Ok(Self {
            game: game.clone(),
            alpha: [d0[0] + d1[0] / 2.0, d0[1] + d1[1] / 2.0],
            gamma: [d1[0] / 2.0, d1[1] / 2.0],
        })
    }

    pub fn game(&self) -> &BimatrixGame {
        &self.game
    }

    pub fn alpha(&self, agent: usize) -> f64 {
        self.alpha[agent]
    }

    pub fn gamma(&self, agent: usize) -> f64 {
        self.gamma[agent]
    }

    /// `Δ_i` at the opponent's coordinate `q`.
    pub fn delta(&self, agent: usize, q_other: f64) -> f64 {
        self.alpha[agent] + self.gamma[agent] * q_other
    }

    /// `Δ_i` at the opponent's first-choice probability `p`.
    pub fn delta_p(&self, agent: usize, p_other: f64) -> f64 {
        self.delta(agent, 2.0 * p_other - 1.0)
    }

    /// `tanh(β Δ_i(q)/2)`.
    pub fn response_q(&self, agent: usize, beta: f64, q_other: f64) -> f64 {
        (0.5 * beta * self.delta(agent, q_other)).tanh()
    }

    /// Logit probability of agent `agent`'s first choice.
    pub fn response_p(&self, agent: usize, beta: f64, p_other: f64) -> f64 {
        logistic(beta * self.delta_p(agent, p_other))
    }

    /// `d response_p / d p_other`.
    pub fn response_slope(&self, agent: usize, beta: f64, p_other: f64) -> f64 {
        let s = self.response_p(agent, beta, p_other);
        beta * s * (1.0 - s) * 2.0 * self.gamma[agent]
    }

    pub fn is_constant(&self) -> bool {
        self.alpha.iter().chain(&self.gamma).all(|&v| v == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedPointStability {
    Stable,
    Unstable,
    Marginal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QreFixedPoint {
    pub profile: MixedStrategyProfile,
    pub q: QCoordinates,
    pub betas: LogitParams,
    pub residual: f64,
    pub stability: FixedPointStability,
    /// `d R₁(R₂(x))/dx` at the root.
    pub slope: f64,
    /// Within two scan pitches of another root, or marginal; such roots may
    /// be missed or merged by the scan.
    pub near_tangent: bool,
}

fn check_pair(betas: &LogitParams) -> Result<(f64, f64), QreError> {
    if betas.betas().len() != 2 {
        return Err(QreError::BetaArity {
            expected: 2,
            found: betas.betas().len(),
        });
    }
    Ok((betas.beta(0), betas.beta(1)))
}

/// Every logit fixed point of a two-by-two game, by sign scan of
/// `h(x) = x − R₁(R₂(x))` on [`SCAN_POINTS`] nodes, bisection, and a Newton
/// polish. Sorted by agent 1's first-choice probability.
pub fn solve_qre_fixed_points(game: &LogitGame2x2, betas: &LogitParams) -> Result<Vec<QreFixedPoint>, QreError> {
    let (b1, b2) = check_pair(betas)?;
    let h = |x: f64| x - game.response_p(0, b1, game.response_p(1, b2, x));
    let dh = |x: f64| 1.0 - game.response_slope(0, b1, game.response_p(1, b2, x)) * game.response_slope(1, b2, x);

    let n = SCAN_POINTS;
    let nodes: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let values: Vec<f64> = nodes.iter().map(|&x| h(x)).collect();
    let mut roots = Vec::new();
    for k in 0..n {
        if values[k] == 0.0 {
            roots.push(nodes[k]);
            continue;
        }
        if k + 1 < n && values[k + 1] != 0.0 && (values[k] < 0.0) != (values[k + 1] < 0.0) {
            let (mut lo, mut hi) = (nodes[k], nodes[k + 1]);
            let lo_neg = values[k] < 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let v = h(mid);
                if v == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (v < 0.0) == lo_neg {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let mut x = if h(lo).abs() <= h(hi).abs() { lo } else { hi };
            let d = dh(x);
            if d != 0.0 {
                let nx = x - h(x) / d;
                if (0.0..=1.0).contains(&nx) && h(nx).abs() < h(x).abs() {
                    x = nx;
                }
            }
            roots.push(x);
        }
    }

    let nf = game.game().to_normal_form();
    let pitch = 1.0 / (n - 1) as f64;
    let mut out = Vec::with_capacity(roots.len());
    for (idx, &x) in roots.iter().enumerate() {
        let y = game.response_p(1, b2, x);
        let slope = game.response_slope(0, b1, y) * game.response_slope(1, b2, x);
        let stability = if (slope.abs() - 1.0).abs() <= MARGINAL_TOL {
            FixedPointStability::Marginal
        } else if slope.abs() < 1.0 {
            FixedPointStability::Stable
        } else {
            FixedPointStability::Unstable
        };
        let crowded = roots
            .iter()
            .enumerate()
            .any(|(j, &r)| j != idx && (r - x).abs() <= 2.0 * pitch);
        let profile = MixedStrategyProfile::new_unchecked(vec![vec![x, 1.0 - x], vec![y, 1.0 - y]]);
        let residual = fixed_point_residual(&nf, &profile, betas)?;
        out.push(QreFixedPoint {
            q: QCoordinates::from_probabilities(x, y),
            profile,
            betas: betas.clone(),
            residual,
            stability,
            slope,
            near_tangent: crowded || stability == FixedPointStability::Marginal,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedPair {
    pub qre: usize,
    pub nash: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NashLimitReport {
    pub beta_max: f64,
    pub fixed_points: Vec<QreFixedPoint>,
    pub nash: Vec<MixedStrategyProfile>,
    pub pairs: Vec<MatchedPair>,
    pub max_distance: f64,
    pub cardinality_match: bool,
    /// The game is degenerate, so its equilibrium set may be a continuum and
    /// the matching is not meaningful.
    pub degenerate: bool,
}

/// Matches the fixed points at `β = (beta_max, beta_max)` to the game's
/// equilibria, greedily by smallest max-norm distance.
pub fn nash_limit_check(game: &LogitGame2x2, beta_max: f64) -> Result<NashLimitReport, QreError> {
    let betas = LogitParams::pair(beta_max, beta_max)?;
    let fixed_points = solve_qre_fixed_points(game, &betas)?;
    let exact = RationalBimatrix::from_game(&game.game().positivize())?;
    let degenerate = degeneracy_witness(&exact)?.is_some();
    let nash: Vec<MixedStrategyProfile> = support_enumeration(game.game())?
        .into_iter()
        .map(|e| e.point.profile)
        .collect();

    let mut candidates: Vec<MatchedPair> = Vec::new();
    for (i, f) in fixed_points.iter().enumerate() {
        for (j, n) in nash.iter().enumerate() {
            candidates.push(MatchedPair {
                qre: i,
                nash: j,
                distance: f.profile.max_distance(n),
            });
        }
    }
    candidates.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.qre.cmp(&b.qre)).then(a.nash.cmp(&b.nash)));
    let mut used_q = vec![false; fixed_points.len()];
    let mut used_n = vec![false; nash.len()];
    let mut pairs = Vec::new();
    for c in candidates {
        if !used_q[c.qre] && !used_n[c.nash] {
            used_q[c.qre] = true;
            used_n[c.nash] = true;
            pairs.push(c);
        }
    }
    pairs.sort_by_key(|p| p.qre);
    let max_distance = pairs.iter().map(|p| p.distance).fold(0.0, f64::max);
    Ok(NashLimitReport {
        beta_max,
        cardinality_match: fixed_points.len() == nash.len(),
        fixed_points,
        nash,
        pairs,
        max_distance,
        degenerate,
    })
}

/// How the best-response map resolves an exact tie.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TieRule {
    /// Keep the current coordinate.
    Current,
    /// Use a fixed value in `[0, 1]`.
    Fixed(f64),
}

fn heaviside(x: f64, tie: f64) -> f64 {
    if x > HEAVISIDE_TOL {
        1.0
    } else if x < -HEAVISIDE_TOL {
        0.0
    } else {
        tie
    }
}

/// Nash's best-response map on first-choice probabilities `(x, y)`:
/// `(H(δq₁(y)), H(δq₂(x)))`.
pub fn heaviside_best_response_map(game: &LogitGame2x2, point: (f64, f64), tie: TieRule) -> (f64, f64) {
    let (x, y) = point;
    let (tx, ty) = match tie {
        TieRule::Current => (x, y),
        TieRule::Fixed(a) => (a, a),
    };
    (heaviside(game.delta_p(0, y), tx), heaviside(game.delta_p(1, x), ty))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeavisideFixedPoints {
    pub points: Vec<(f64, f64)>,
    /// Some `δq` vanishes identically, so fixed points form a continuum and
    /// `points` lists only the candidates checked.
    pub degenerate: bool,
}

/// Fixed points of the best-response map with [`TieRule::Current`]; these are
/// exactly the Nash equilibria.
pub fn heaviside_fixed_points(game: &LogitGame2x2) -> HeavisideFixedPoints {
    // candidates: pure coordinates, plus where the opponent is indifferent
    let candidates = |agent: usize| -> Vec<f64> {
        // δq of the *other* agent as a function of this agent's probability
        let other = 1 - agent;
        let mut c = vec![0.0, 1.0];
        let (a, g) = (game.alpha(other), game.gamma(other));
        if g != 0.0 {
            let p = (1.0 - a / g) / 2.0;
            if p > 0.0 && p < 1.0 {
                c.push(p);
            }
        }
        c
    };
    let degenerate = (0..2).any(|i| game.alpha(i) == 0.0 && game.gamma(i) == 0.0);
    let mut points = Vec::new();
    for &x in &candidates(0) {
        for &y in &candidates(1) {
            if heaviside_best_response_map(game, (x, y), TieRule::Current) == (x, y) {
                points.push((x, y));
            }
        }
    }
    HeavisideFixedPoints { points, degenerate }
}

/// Any two-by-two [`NormalFormGame`] as a bimatrix game for the solvers here.
pub fn logit_game(game: &NormalFormGame) -> Result<LogitGame2x2, QreError> {
    LogitGame2x2::new(&BimatrixGame::from_normal_form(game)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{chicken, prisoners_dilemma};
    use crate::qre::logit::logit_response;

    fn chicken2() -> LogitGame2x2 {
        LogitGame2x2::new(&chicken()).unwrap()
    }

    #[test]
    fn chicken_coefficients() {
        let g = chicken2();
        assert_eq!((g.alpha(0), g.gamma(0)), (4.0, -5.0));
        assert_eq!((g.alpha(1), g.gamma(1)), (4.0, -5.0));
    }

    #[test]
    fn tanh_form_matches_softmax() {
        let g = chicken2();
        let nf = chicken().to_normal_form();
        let q = QCoordinates::new(0.3, -0.6);
        let b = LogitParams::pair(1.7, 0.4).unwrap();
        let r = logit_response(&nf, &q.to_profile(), &b).unwrap();
        let rq = QCoordinates::from_profile(&r);
        assert!((rq.q1 - g.response_q(0, 1.7, q.q2)).abs() < 1e-15);
        assert!((rq.q2 - g.response_q(1, 0.4, q.q1)).abs() < 1e-15);
    }

    #[test]
    fn q_round_trip() {
        let p = MixedStrategyProfile::new(vec![vec![0.3, 0.7], vec![0.123, 0.877]]).unwrap();
        let back = QCoordinates::from_profile(&p).to_profile();
        assert!(p.max_distance(&back) <= 1e-15);
    }

    #[test]
    fn counts_at_known_betas() {
        let g = chicken2();
        let at = |b: f64| solve_qre_fixed_points(&g, &LogitParams::pair(b, b).unwrap()).unwrap();
        let zero = at(0.0);
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].q, QCoordinates::new(0.0, 0.0));
        assert_eq!(at(0.01).len(), 1);
        let ten = at(10.0);
        assert_eq!(ten.len(), 3);
        for f in &ten {
            assert!(f.residual <= 1e-10, "{f:?}");
        }
        let st: Vec<_> = ten.iter().map(|f| f.stability).collect();
        assert_eq!(
            st,
            vec![FixedPointStability::Stable, FixedPointStability::Unstable, FixedPointStability::Stable]
        );
    }

    #[test]
    fn nash_limits() {
        let r = nash_limit_check(&chicken2(), 50.0).unwrap();
        assert!(r.cardinality_match && !r.degenerate);
        assert_eq!(r.pairs.len(), 3);
        assert!(r.max_distance <= 1e-2, "{r:?}");

        let pd = nash_limit_check(&LogitGame2x2::new(&prisoners_dilemma()).unwrap(), 50.0).unwrap();
        assert_eq!(pd.pairs.len(), 1);
        assert!(pd.max_distance <= 1e-2);
        assert!(pd.nash[0].agent(0)[1] == 1.0);

        let flat = BimatrixGame::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]], &[vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap();
        let flat = LogitGame2x2::new(&flat).unwrap();
        let r = nash_limit_check(&flat, 50.0).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.fixed_points.len(), 1);
        assert!((r.fixed_points[0].q.q1).abs() < 1e-15);
    }

    #[test]
    fn heaviside_matches_nash() {
        let pd = heaviside_fixed_points(&LogitGame2x2::new(&prisoners_dilemma()).unwrap());
        assert_eq!(pd.points, vec![(0.0, 0.0)]);
        let ch = heaviside_fixed_points(&chicken2());
        assert_eq!(ch.points.len(), 3);
        assert!(ch.points.contains(&(0.0, 1.0)) && ch.points.contains(&(1.0, 0.0)));
        assert!(ch.points.iter().any(|&(x, y)| (x - 0.9).abs() < 1e-12 && (y - 0.9).abs() < 1e-12));
        let flat = BimatrixGame::from_rows(&[vec![0.0; 2], vec![0.0; 2]], &[vec![0.0; 2], vec![0.0; 2]]).unwrap();
        assert!(heaviside_fixed_points(&LogitGame2x2::new(&flat).unwrap()).degenerate);
        assert_eq!(
            heaviside_best_response_map(&chicken2(), (0.9, 0.9), TieRule::Fixed(0.25)),
            (0.25, 0.25)
        );
    }

    #[test]
    fn wrong_shape() {
        let g = BimatrixGame::from_rows(&[vec![1.0, 2.0, 3.0]], &[vec![1.0, 2.0, 3.0]]).unwrap();
        assert!(LogitGame2x2::new(&g).is_err());
    }
}
