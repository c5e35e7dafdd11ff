//! Logit response for any finite normal-form game, and damped iteration to a
//! quantal response equilibrium.

use serde::Serialize;

use crate::error::QreError;
use crate::game::{MixedStrategyProfile, NormalFormGame};

pub const ITERATION_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 100_000;

/// One noise parameter per agent; `0` is uniform play, larger is sharper.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogitParams {
    betas: Vec<f64>,
}

impl LogitParams {
    pub fn new(betas: Vec<f64>) -> Result<Self, QreError> {
        for (agent, &value) in betas.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(QreError::InvalidBeta { agent, value });
            }
        }
        Ok(Self { betas })
    }

    pub fn pair(b1: f64, b2: f64) -> Result<Self, QreError> {
        Self::new(vec![b1, b2])
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn beta(&self, agent: usize) -> f64 {
        self.betas[agent]
    }

    fn check(&self, agents: usize) -> Result<(), QreError> {
        if self.betas.len() != agents {
            return Err(QreError::BetaArity {
                expected: agents,
                found: self.betas.len(),
            });
        }
        Ok(())
    }
}

/// Softmax of `β·v` with the maximum subtracted before exponentiating.
pub fn softmax(beta: f64, values: &[f64]) -> Vec<f64> {
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = values.iter().map(|v| (beta * (v - top)).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Each agent's logit response to the others' distributions in `profile`.
pub fn logit_response(
    game: &NormalFormGame,
    profile: &MixedStrategyProfile,
    betas: &LogitParams,
) -> Result<MixedStrategyProfile, QreError> {
    betas.check(game.num_agents())?;
    let mut out = Vec::with_capacity(game.num_agents());
    for agent in 0..game.num_agents() {
        let payoffs = game.conditional_payoff(agent, profile)?;
        out.push(softmax(betas.beta(agent), &payoffs));
    }
    Ok(MixedStrategyProfile::new_unchecked(out))
}

/// `max |p − logit_response(p)|`.
pub fn fixed_point_residual(
    game: &NormalFormGame,
    profile: &MixedStrategyProfile,
    betas: &LogitParams,
) -> Result<f64, QreError> {
    Ok(profile.max_distance(&logit_response(game, profile, betas)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationOutcome {
    pub profile: MixedStrategyProfile,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Damped iteration `p ← (1 − λ)p + λ·L(p)` until the residual drops to
/// [`ITERATION_TOL`] or [`MAX_ITERATIONS`] is reached. Finds the fixed point
/// whose basin contains `start`, if the iteration converges at all.
pub fn qre_iterate(
    game: &NormalFormGame,
    start: &MixedStrategyProfile,
    betas: &LogitParams,
    damping: f64,
) -> Result<IterationOutcome, QreError> {
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(QreError::InvalidDamping(damping));
    }
    let mut p = start.clone();
    for it in 0..MAX_ITERATIONS {
        let r = logit_response(game, &p, betas)?;
        let residual = p.max_distance(&r);
        if residual <= ITERATION_TOL {
            return Ok(IterationOutcome {
                profile: p,
                residual,
                iterations: it,
                converged: true,
            });
        }
        let next = p
            .distributions()
            .iter()
            .zip(r.distributions())
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (1.0 - damping) * x + damping * y).collect())
            .collect();
        p = MixedStrategyProfile::new_unchecked(next);
    }
    let residual = fixed_point_residual(game, &p, betas)?;
    Ok(IterationOutcome {
        profile: p,
        residual,
        iterations: MAX_ITERATIONS,
        converged: residual <= ITERATION_TOL,
    })
}
