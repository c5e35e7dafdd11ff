//! Thom's seven elementary catastrophes as polynomial data.

use serde::Serialize;

use crate::error::UnfoldingError;

/// `coeff · control · x^px · y^py`; `control` indexes the unfolding parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    pub coeff: f64,
    pub control: Option<usize>,
    pub px: u32,
    pub py: u32,
}

const fn mono(coeff: f64, px: u32, py: u32) -> Term {
    Term {
        coeff,
        control: None,
        px,
        py,
    }
}

const fn ctl(control: usize, px: u32, py: u32) -> Term {
    Term {
        coeff: 1.0,
        control: Some(control),
        px,
        py,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Catastrophe {
    Fold,
    Cusp,
    SwallowTail,
    Butterfly,
    HyperbolicUmbilic,
    EllipticUmbilic,
    ParabolicUmbilic,
}

impl Catastrophe {
    pub const ALL: [Catastrophe; 7] = [
        Catastrophe::Fold,
        Catastrophe::Cusp,
        Catastrophe::SwallowTail,
        Catastrophe::Butterfly,
        Catastrophe::HyperbolicUmbilic,
        Catastrophe::EllipticUmbilic,
        Catastrophe::ParabolicUmbilic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Catastrophe::Fold => "fold",
            Catastrophe::Cusp => "cusp",
            Catastrophe::SwallowTail => "swallowtail",
            Catastrophe::Butterfly => "butterfly",
            Catastrophe::HyperbolicUmbilic => "hyperbolic umbilic",
            Catastrophe::EllipticUmbilic => "elliptic umbilic",
            Catastrophe::ParabolicUmbilic => "parabolic umbilic",
        }
    }

    pub fn spec(self) -> UnfoldingSpec {
        use Catastrophe::*;
        // germ terms come first so that zero controls reproduce the germ sum bit for bit
        let (germ, controls): (Vec<Term>, Vec<Term>) = match self {
            Fold => (vec![mono(1.0, 3, 0)], vec![ctl(0, 1, 0)]),
            Cusp => (vec![mono(1.0, 4, 0)], vec![ctl(0, 2, 0), ctl(1, 1, 0)]),
            SwallowTail => (
                vec![mono(1.0, 5, 0)],
                vec![ctl(0, 3, 0), ctl(1, 2, 0), ctl(2, 1, 0)],
            ),
            Butterfly => (
                vec![mono(1.0, 6, 0)],
                vec![ctl(0, 4, 0), ctl(1, 3, 0), ctl(2, 2, 0), ctl(3, 1, 0)],
            ),
            HyperbolicUmbilic => (
                vec![mono(1.0, 3, 0), mono(1.0, 0, 3)],
                vec![ctl(0, 1, 1), ctl(1, 1, 0), ctl(2, 0, 1)],
            ),
            EllipticUmbilic => (
                vec![mono(1.0, 3, 0), mono(-3.0, 1, 2)],
                vec![ctl(0, 2, 0), ctl(0, 0, 2), ctl(1, 1, 0), ctl(2, 0, 1)],
            ),
            ParabolicUmbilic => (
                vec![mono(1.0, 2, 1), mono(1.0, 0, 4)],
                vec![ctl(0, 2, 0), ctl(1, 0, 2), ctl(2, 1, 0), ctl(3, 0, 1)],
            ),
        };
        let codimension = match self {
            Fold => 1,
            Cusp => 2,
            SwallowTail | HyperbolicUmbilic | EllipticUmbilic => 3,
            Butterfly | ParabolicUmbilic => 4,
        };
        let state_dim = match self {
            Fold | Cusp | SwallowTail | Butterfly => 1,
            _ => 2,
        };
        let mut unfolding = germ.clone();
        unfolding.extend(controls);
        UnfoldingSpec {
            name: self,
            codimension,
            state_dim,
            germ,
            unfolding,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnfoldingSpec {
    pub name: Catastrophe,
    pub codimension: usize,
    pub state_dim: usize,
    pub germ: Vec<Term>,
    pub unfolding: Vec<Term>,
}

fn powu(base: f64, p: u32) -> f64 {
    let mut out = 1.0;
    for _ in 0..p {
        out *= base;
    }
    out
}

fn monomial(t: &Term, controls: &[f64]) -> f64 {
    match t.control {
        Some(c) => t.coeff * controls[c],
        None => t.coeff,
    }
}

impl UnfoldingSpec {
    fn check_state(&self, state: &[f64]) -> Result<(f64, f64), UnfoldingError> {
        if state.len() != self.state_dim {
            return Err(UnfoldingError::StateArity {
                name: self.name.name(),
                expected: self.state_dim,
                found: state.len(),
            });
        }
        Ok((state[0], state.get(1).copied().unwrap_or(0.0)))
    }

    /// The germ `f*` at `state`.
    pub fn evaluate_germ(&self, state: &[f64]) -> Result<f64, UnfoldingError> {
        let (x, y) = self.check_state(state)?;
        Ok(self
            .germ
            .iter()
            .map(|t| t.coeff * powu(x, t.px) * powu(y, t.py))
            .fold(0.0, |acc, v| acc + v))
    }

    /// Human-readable `G*`.
    pub fn describe(&self) -> String {
        let names = ['a', 'b', 'c', 'd'];
        let mut out = String::new();
        for t in &self.unfolding {
            let mut piece = String::new();
            if t.coeff != 1.0 {
                piece.push_str(&format!("{}", t.coeff.abs()));
            }
            if let Some(c) = t.control {
                piece.push(names[c]);
            }
            for (v, p) in [('x', t.px), ('y', t.py)] {
                match p {
                    0 => {}
                    1 => piece.push(v),
                    _ => piece.push_str(&format!("{v}^{p}")),
                }
            }
            if out.is_empty() {
                if t.coeff < 0.0 {
                    out.push('-');
                }
            } else {
                out.push_str(if t.coeff < 0.0 { " - " } else { " + " });
            }
            out.push_str(&piece);
        }
        out
    }
}

/// Value of `G*(state | controls)` and its gradient in the state variables.
pub fn evaluate_unfolding(
    spec: &UnfoldingSpec,
    controls: &[f64],
    state: &[f64],
) -> Result<(f64, Vec<f64>), UnfoldingError> {
    if controls.len() != spec.codimension {
        return Err(UnfoldingError::ControlArity {
            name: spec.name.name(),
            expected: spec.codimension,
            found: controls.len(),
        });
    }
    let (x, y) = spec.check_state(state)?;
    let mut value = 0.0;
    let mut grad = vec![0.0; spec.state_dim];
    for t in &spec.unfolding {
        let k = monomial(t, controls);
        value += k * powu(x, t.px) * powu(y, t.py);
        if t.px > 0 {
            grad[0] += k * t.px as f64 * powu(x, t.px - 1) * powu(y, t.py);
        }
        if t.py > 0 {
            grad[1] += k * t.py as f64 * powu(x, t.px) * powu(y, t.py - 1);
        }
    }
    Ok((value, grad))
}
