//! Finite normal-form games, mixed strategies and equilibrium verification.
//!
//! Payoffs are stored densely in row-major order: the first agent's choice is
//! the outermost index and each cell holds one payoff per agent.

use serde::{Deserialize, Serialize};

use crate::error::GameError;

/// Tolerance used when checking that a distribution sums to one.
pub const DISTRIBUTION_TOL: f64 = 1e-12;

/// Absolute tolerance for ties between conditional payoffs.
pub const TIE_TOL: f64 = 1e-9;

/// A dense real matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, GameError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(GameError::Ragged {
                    row: r,
                    expected: cols,
                    found: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(GameError::NonFinite {
                        location: format!("[{r}][{c}]"),
                    });
                }
                data.push(v);
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

/// An n-agent game in normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormGame {
    choices: Vec<usize>,
    payoffs: Vec<f64>,
}

impl NormalFormGame {
    /// Builds a game from per-agent choice counts and the flattened payoff
    /// tensor (`∏k_i` cells of `n` payoffs each, first agent outermost).
    pub fn new(choices: Vec<usize>, payoffs: Vec<f64>) -> Result<Self, GameError> {
        if choices.len() < 2 {
            return Err(GameError::TooFewAgents(choices.len()));
        }
        if let Some(agent) = choices.iter().position(|&k| k == 0) {
            return Err(GameError::EmptyChoiceSet { agent });
        }
        let expected = choices.iter().product::<usize>() * choices.len();
        if payoffs.len() != expected {
            return Err(GameError::PayoffSize {
                expected,
                found: payoffs.len(),
            });
        }
        if let Some(pos) = payoffs.iter().position(|v| !v.is_finite()) {
            return Err(GameError::NonFinite {
                location: format!("flat index {pos}"),
            });
        }
        Ok(Self { choices, payoffs })
    }

    pub fn num_agents(&self) -> usize {
        self.choices.len()
    }

    pub fn choice_counts(&self) -> &[usize] {
        &self.choices
    }

    pub fn num_cells(&self) -> usize {
        self.choices.iter().product()
    }

    fn cell_index(&self, joint: &[usize]) -> usize {
        joint
            .iter()
            .zip(&self.choices)
            .fold(0, |acc, (&c, &k)| acc * k + c)
    }

    /// Payoff vector at a joint pure choice.
    pub fn payoff(&self, joint: &[usize]) -> &[f64] {
        let n = self.num_agents();
        let cell = self.cell_index(joint);
        &self.payoffs[cell * n..(cell + 1) * n]
    }

    pub fn flat_payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    /// Calls `f` for every joint pure choice in row-major order.
    pub fn for_each_cell(&self, mut f: impl FnMut(&[usize], &[f64])) {
        let n = self.num_agents();
        let mut joint = vec![0usize; n];
        for cell in 0..self.num_cells() {
            f(&joint, &self.payoffs[cell * n..(cell + 1) * n]);
            for a in (0..n).rev() {
                joint[a] += 1;
                if joint[a] < self.choices[a] {
                    break;
                }
                joint[a] = 0;
            }
        }
    }

    fn check_profile(&self, profile: &MixedStrategyProfile, skip: Option<usize>) -> Result<(), GameError> {
        if profile.distributions.len() != self.num_agents() {
            return Err(GameError::AgentCountMismatch {
                expected: self.num_agents(),
                found: profile.distributions.len(),
            });
        }
        for (agent, (dist, &k)) in profile.distributions.iter().zip(&self.choices).enumerate() {
            if Some(agent) == skip {
                continue;
            }
            if dist.len() != k {
                return Err(GameError::DimensionMismatch {
                    agent,
                    expected: k,
                    found: dist.len(),
                });
            }
        }
        Ok(())
    }

    /// Expected payoff to every agent under a mixed profile.
    pub fn expected_payoff(&self, profile: &MixedStrategyProfile) -> Result<Vec<f64>, GameError> {
        self.check_profile(profile, None)?;
        let n = self.num_agents();
        let mut out = vec![0.0; n];
        self.for_each_cell(|joint, pay| {
            let w: f64 = joint
                .iter()
                .enumerate()
                .map(|(a, &c)| profile.distributions[a][c])
                .product();
            if w != 0.0 {
                for (o, &g) in out.iter_mut().zip(pay) {
                    *o += w * g;
                }
            }
        });
        Ok(out)
    }

    /// Expected payoff to `agent` for each of its pure choices, with every
    /// other agent playing its distribution in `profile`. The agent's own
    /// entry in `profile` is ignored.
    pub fn conditional_payoff(
        &self,
        agent: usize,
        profile: &MixedStrategyProfile,
    ) -> Result<Vec<f64>, GameError> {
        if agent >= self.num_agents() {
            return Err(GameError::AgentOutOfRange {
                agent,
                agents: self.num_agents(),
            });
        }
        self.check_profile(profile, Some(agent))?;
        let mut out = vec![0.0; self.choices[agent]];
        self.for_each_cell(|joint, pay| {
            let w: f64 = joint
                .iter()
                .enumerate()
                .filter(|&(a, _)| a != agent)
                .map(|(a, &c)| profile.distributions[a][c])
                .product();
            if w != 0.0 {
                out[joint[agent]] += w * pay[agent];
            }
        });
        Ok(out)
    }

    /// Pure choices of `agent` within [`TIE_TOL`] of the best conditional payoff.
    pub fn best_response_set(
        &self,
        agent: usize,
        profile: &MixedStrategyProfile,
    ) -> Result<Vec<usize>, GameError> {
        let cond = self.conditional_payoff(agent, profile)?;
        let best = cond.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(cond
            .iter()
            .enumerate()
            .filter(|(_, &v)| best - v <= TIE_TOL)
            .map(|(j, _)| j)
            .collect())
    }

    /// Checks the support characterization of equilibrium: every pure choice
    /// played with positive probability must be a best response within `tol`.
    pub fn is_nash(&self, profile: &MixedStrategyProfile, tol: f64) -> Result<NashVerdict, GameError> {
        self.check_profile(profile, None)?;
        let payoffs = self.expected_payoff(profile)?;
        let mut epsilon: f64 = 0.0;
        let mut witness: Option<Deviation> = None;
        for agent in 0..self.num_agents() {
            let cond = self.conditional_payoff(agent, profile)?;
            let (best_choice, best) = cond
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (j, v)| if v > acc.1 { (j, v) } else { acc });
            let gain = (best - payoffs[agent]).max(0.0);
            epsilon = epsilon.max(gain);
            let violated = profile.distributions[agent]
                .iter()
                .zip(&cond)
                .any(|(&p, &v)| p > 0.0 && best - v > tol);
            if violated && witness.as_ref().is_none_or(|w| gain > w.gain) {
                witness = Some(Deviation {
                    agent,
                    choice: best_choice,
                    gain,
                });
            }
        }
        Ok(match witness {
            Some(w) => NashVerdict::Rejected(w),
            None => NashVerdict::Accepted(EquilibriumPoint {
                kind: profile.kind(),
                profile: profile.clone(),
                payoffs,
                epsilon,
            }),
        })
    }
}

/// One probability vector per agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedStrategyProfile {
    distributions: Vec<Vec<f64>>,
}

impl MixedStrategyProfile {
    pub fn new(distributions: Vec<Vec<f64>>) -> Result<Self, GameError> {
        for (agent, d) in distributions.iter().enumerate() {
            validate_distribution(agent, d)?;
        }
        Ok(Self { distributions })
    }

    pub(crate) fn new_unchecked(distributions: Vec<Vec<f64>>) -> Self {
        Self { distributions }
    }

    pub fn pure(counts: &[usize], choices: &[usize]) -> Result<Self, GameError> {
        if counts.len() != choices.len() {
            return Err(GameError::AgentCountMismatch {
                expected: counts.len(),
                found: choices.len(),
            });
        }
        let mut distributions = Vec::with_capacity(counts.len());
        for (agent, (&k, &c)) in counts.iter().zip(choices).enumerate() {
            if c >= k {
                return Err(GameError::DimensionMismatch {
                    agent,
                    expected: k,
                    found: c + 1,
                });
            }
            let mut d = vec![0.0; k];
            d[c] = 1.0;
            distributions.push(d);
        }
        Ok(Self { distributions })
    }

    pub fn uniform(counts: &[usize]) -> Self {
        Self {
            distributions: counts.iter().map(|&k| vec![1.0 / k as f64; k]).collect(),
        }
    }

    pub fn distributions(&self) -> &[Vec<f64>] {
        &self.distributions
    }

    pub fn agent(&self, i: usize) -> &[f64] {
        &self.distributions[i]
    }

    pub fn num_agents(&self) -> usize {
        self.distributions.len()
    }

    pub fn kind(&self) -> EquilibriumKind {
        let pure = self
            .distributions
            .iter()
            .flatten()
            .all(|&p| p == 0.0 || p == 1.0);
        if pure {
            EquilibriumKind::Pure
        } else {
            EquilibriumKind::Mixed
        }
    }

    /// Largest absolute coordinate difference between two profiles of equal shape.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.distributions
            .iter()
            .flatten()
            .zip(other.distributions.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn validate_distribution(agent: usize, d: &[f64]) -> Result<(), GameError> {
    if d.is_empty() {
        return Err(GameError::NotADistribution {
            agent,
            reason: "empty".into(),
        });
    }
    if let Some(p) = d.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(GameError::NotADistribution {
            agent,
            reason: format!("entry {p} is negative or non-finite"),
        });
    }
    let sum: f64 = d.iter().sum();
    if (sum - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(GameError::NotADistribution {
            agent,
            reason: format!("sums to {sum}"),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumKind {
    Pure,
    Mixed,
}

/// An accepted equilibrium with its payoffs and the largest unilateral gain
/// the verifier observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumPoint {
    pub profile: MixedStrategyProfile,
    pub payoffs: Vec<f64>,
    pub kind: EquilibriumKind,
    pub epsilon: f64,
}

/// A profitable unilateral deviation found by [`NormalFormGame::is_nash`].
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub agent: usize,
    pub choice: usize,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NashVerdict {
    Accepted(EquilibriumPoint),
    Rejected(Deviation),
}

impl NashVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, NashVerdict::Accepted(_))
    }

    pub fn accepted(self) -> Option<EquilibriumPoint> {
        match self {
            NashVerdict::Accepted(e) => Some(e),
            NashVerdict::Rejected(_) => None,
        }
    }
}

/// A two-agent game given by the row agent's matrix `A` and the column
/// agent's matrix `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixGame {
    a: Matrix,
    b: Matrix,
}

impl BimatrixGame {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self, GameError> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(GameError::ShapeMismatch {
                a_rows: a.rows(),
                a_cols: a.cols(),
                b_rows: b.rows(),
                b_cols: b.cols(),
            });
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(GameError::EmptyChoiceSet {
                agent: usize::from(a.rows() != 0),
            });
        }
        Ok(Self { a, b })
    }

    pub fn from_rows(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<Self, GameError> {
        Self::new(Matrix::from_rows(a)?, Matrix::from_rows(b)?)
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    /// Number of row-agent strategies (`l`).
    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    /// Number of column-agent strategies (`m`).
    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn min_entry(&self) -> f64 {
        self.a.min_entry().min(self.b.min_entry())
    }

    pub fn is_positive(&self) -> bool {
        self.min_entry() > 0.0
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self {
            a: self.a.map(|v| v + c),
            b: self.b.map(|v| v + c),
        }
    }

    /// Shifts every payoff by `1 - min` when some entry is `<= 0`, so that all
    /// entries are at least one. Equilibria are unchanged.
    pub fn positivize(&self) -> Self {
        let min = self.min_entry();
        if min > 0.0 {
            self.clone()
        } else {
            self.shifted(1.0 - min)
        }
    }

    pub fn to_normal_form(&self) -> NormalFormGame {
        let (l, m) = (self.rows(), self.cols());
        let mut payoffs = Vec::with_capacity(2 * l * m);
        for i in 0..l {
            for j in 0..m {
                payoffs.push(self.a.get(i, j));
                payoffs.push(self.b.get(i, j));
            }
        }
        NormalFormGame {
            choices: vec![l, m],
            payoffs,
        }
    }

    pub fn from_normal_form(game: &NormalFormGame) -> Result<Self, GameError> {
        if game.num_agents() != 2 {
            return Err(GameError::WrongShape {
                expected: "two-agent",
                found: format!("{}-agent", game.num_agents()),
            });
        }
        let (l, m) = (game.choices[0], game.choices[1]);
        let a = Matrix::from_fn(l, m, |i, j| game.payoff(&[i, j])[0]);
        let b = Matrix::from_fn(l, m, |i, j| game.payoff(&[i, j])[1]);
        Self::new(a, b)
    }

    pub fn is_symmetric(&self) -> bool {
        self.a.is_square() && self.b == self.a.transpose()
    }

    /// `(xᵀAy, xᵀBy)`.
    pub fn bilinear_payoffs(&self, x: &[f64], y: &[f64]) -> (f64, f64) {
        let mut pa = 0.0;
        let mut pb = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                pa += xi * self.a.get(i, j) * yj;
                pb += xi * self.b.get(i, j) * yj;
            }
        }
        (pa, pb)
    }

    pub fn is_2x2(&self) -> bool {
        self.rows() == 2 && self.cols() == 2
    }
}

const UV_TOL: f64 = 1e-9;

fn check_uv_relations(game: &BimatrixGame, u: &[f64], v: &[f64]) -> Result<(), GameError> {
    let (l, m) = (game.rows(), game.cols());
    if u.len() != l || v.len() != m {
        return Err(GameError::NotNormalizedEquilibrium(format!(
            "expected u in R^{l} and v in R^{m}, got {} and {}",
            u.len(),
            v.len()
        )));
    }
    if u.iter().chain(v).any(|&t| !(t >= -UV_TOL)) {
        return Err(GameError::NotNormalizedEquilibrium("negative coordinate".into()));
    }
    for j in 0..m {
        let ub: f64 = (0..l).map(|i| u[i] * game.b.get(i, j)).sum();
        if ub > 1.0 + UV_TOL {
            return Err(GameError::NotNormalizedEquilibrium(format!("(uᵀB)_{} = {ub} > 1", j + 1)));
        }
        if v[j] > UV_TOL && (ub - 1.0).abs() > UV_TOL {
            return Err(GameError::NotNormalizedEquilibrium(format!(
                "v_{} > 0 but (uᵀB)_{} = {ub}",
                j + 1,
                j + 1
            )));
        }
    }
    for i in 0..l {
        let av: f64 = (0..m).map(|j| game.a.get(i, j) * v[j]).sum();
        if av > 1.0 + UV_TOL {
            return Err(GameError::NotNormalizedEquilibrium(format!("(Av)_{} = {av} > 1", i + 1)));
        }
        if u[i] > UV_TOL && (av - 1.0).abs() > UV_TOL {
            return Err(GameError::NotNormalizedEquilibrium(format!(
                "u_{} > 0 but (Av)_{} = {av}",
                i + 1,
                i + 1
            )));
        }
    }
    Ok(())
}

/// Maps an equilibrium of a positive game to the normalized pair
/// `u = x / xᵀBy`, `v = y / xᵀAy`.
pub fn nash_to_uv(game: &BimatrixGame, eq: &EquilibriumPoint) -> Result<(Vec<f64>, Vec<f64>), GameError> {
    if !game.is_positive() {
        return Err(GameError::NotPositive {
            min: game.min_entry(),
        });
    }
    if eq.profile.num_agents() != 2 {
        return Err(GameError::AgentCountMismatch {
            expected: 2,
            found: eq.profile.num_agents(),
        });
    }
    let (x, y) = (eq.profile.agent(0), eq.profile.agent(1));
    if x.len() != game.rows() || y.len() != game.cols() {
        return Err(GameError::DimensionMismatch {
            agent: usize::from(x.len() == game.rows()),
            expected: if x.len() != game.rows() { game.rows() } else { game.cols() },
            found: if x.len() != game.rows() { x.len() } else { y.len() },
        });
    }
    let (xay, xby) = game.bilinear_payoffs(x, y);
    let u: Vec<f64> = x.iter().map(|&t| t / xby).collect();
    let v: Vec<f64> = y.iter().map(|&t| t / xay).collect();
    check_uv_relations(game, &u, &v)?;
    Ok((u, v))
}

/// Inverse of [`nash_to_uv`]: normalizes `u` and `v` to strategies.
pub fn uv_to_nash(game: &BimatrixGame, u: &[f64], v: &[f64]) -> Result<EquilibriumPoint, GameError> {
    let su: f64 = u.iter().sum();
    let sv: f64 = v.iter().sum();
    if !(su > 0.0) || !(sv > 0.0) {
        return Err(GameError::ArtificialEquilibrium);
    }
    check_uv_relations(game, u, v)?;
    let x: Vec<f64> = u.iter().map(|&t| t / su).collect();
    let y: Vec<f64> = v.iter().map(|&t| t / sv).collect();
    let profile = MixedStrategyProfile::new_unchecked(vec![x, y]);
    match game.to_normal_form().is_nash(&profile, UV_TOL)? {
        NashVerdict::Accepted(eq) => Ok(eq),
        NashVerdict::Rejected(d) => Err(GameError::NotNormalizedEquilibrium(format!(
            "agent {} gains {} by switching to choice {}",
            d.agent + 1,
            d.gain,
            d.choice + 1
        ))),
    }
}

/// `V(p) = ½ Σ a_ij p_i p_j`.
pub fn game_potential(a: &Matrix, p: &[f64]) -> Result<f64, GameError> {
    if !a.is_square() {
        return Err(GameError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if p.len() != a.rows() {
        return Err(GameError::DimensionMismatch {
            agent: 0,
            expected: a.rows(),
            found: p.len(),
        });
    }
    validate_distribution(0, p)?;
    let mut v = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        for (j, &pj) in p.iter().enumerate() {
            v += a.get(i, j) * pi * pj;
        }
    }
    Ok(0.5 * v)
}

/// A triple `(i, j, k)` (zero-based) and `lhs - rhs` of the cyclic condition
/// `a_ij + a_jk + a_ki = a_ik + a_kj + a_ji`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TripleViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialCheck {
    pub holds: bool,
    /// The maximally violating triple; `None` when the condition holds.
    pub witness: Option<TripleViolation>,
}

/// Tests the cyclic triple condition under which `½ pᵀAp` is a potential.
/// Ties in the worst violation go to the lexicographically first triple.
pub fn has_potential_condition(a: &Matrix, tol: f64) -> Result<PotentialCheck, GameError> {
    if !a.is_square() {
        return Err(GameError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut worst: Option<TripleViolation> = None;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = a.get(i, j) + a.get(j, k) + a.get(k, i);
                let rhs = a.get(i, k) + a.get(k, j) + a.get(j, i);
                let violation = lhs - rhs;
                if worst.is_none_or(|w| violation.abs() > w.violation.abs()) {
                    worst = Some(TripleViolation { i, j, k, violation });
                }
            }
        }
    }
    let holds = worst.is_none_or(|w| w.violation.abs() <= tol);
    Ok(PotentialCheck {
        holds,
        witness: if holds { None } else { worst },
    })
}

/// A member of the symmetric 2×2 family with `R = 1` and `P = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TsFamilyPoint {
    pub t: f64,
    pub s: f64,
}

/// `A = [[1, S], [T, 0]]`, `B = Aᵀ`. Row/column 1 is "cooperate".
pub fn ts_family_game(point: TsFamilyPoint) -> BimatrixGame {
    let a = Matrix::from_rows(&[vec![1.0, point.s], vec![point.t, 0.0]]).expect("2x2 rows");
    let b = a.transpose();
    BimatrixGame { a, b }
}

/// Named regions of the `(T, S)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TsRegion {
    PrisonersDilemma,
    Snowdrift,
    StagHunt,
    Harmony,
    Boundary,
}

impl TsRegion {
    pub fn of(point: TsFamilyPoint) -> Self {
        match (point.t.partial_cmp(&1.0), point.s.partial_cmp(&0.0)) {
            (Some(std::cmp::Ordering::Greater), Some(std::cmp::Ordering::Less)) => TsRegion::PrisonersDilemma,
            (Some(std::cmp::Ordering::Greater), Some(std::cmp::Ordering::Greater)) => TsRegion::Snowdrift,
            (Some(std::cmp::Ordering::Less), Some(std::cmp::Ordering::Less)) => TsRegion::StagHunt,
            (Some(std::cmp::Ordering::Less), Some(std::cmp::Ordering::Greater)) => TsRegion::Harmony,
            _ => TsRegion::Boundary,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TsRegion::PrisonersDilemma => "Prisoner's Dilemma",
            TsRegion::Snowdrift => "Snowdrift (Chicken)",
            TsRegion::StagHunt => "Stag Hunt",
            TsRegion::Harmony => "Harmony",
            TsRegion::Boundary => "boundary",
        }
    }
}

/// For a symmetric 2×2 game with `R > P`, the `(T, S)` coordinates after the
/// affine normalization `R -> 1`, `P -> 0`.
pub fn ts_coordinates(game: &BimatrixGame) -> Option<TsFamilyPoint> {
    if !game.is_2x2() || !game.is_symmetric() {
        return None;
    }
    let a = game.a();
    let (r, s, t, p) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    if r <= p {
        return None;
    }
    let scale = r - p;
    Some(TsFamilyPoint {
        t: (t - p) / scale,
        s: (s - p) / scale,
    })
}

/// Cooperate/defect game with joint payoffs (-1,-1), (-3,0), (0,-3), (-2,-2).
pub fn prisoners_dilemma() -> BimatrixGame {
    BimatrixGame::from_rows(
        &[vec![-1.0, -3.0], vec![0.0, -2.0]],
        &[vec![-1.0, 0.0], vec![-3.0, -2.0]],
    )
    .expect("static game")
}

/// Swerve/straight game with joint payoffs (0,0), (-1,1), (1,-1), (-10,-10).
pub fn chicken() -> BimatrixGame {
    BimatrixGame::from_rows(
        &[vec![0.0, -1.0], vec![1.0, -10.0]],
        &[vec![0.0, 1.0], vec![-1.0, -10.0]],
    )
    .expect("static game")
}
