//! Equilibrium structures of small games: Nash equilibria of bimatrix games
//! by Lemke–Howson pivoting, logit quantal response equilibria and their
//! critical sets, and deterministic and stochastic catastrophe surfaces.

pub mod catastrophe;
pub mod error;
pub mod game;
pub mod io;
pub mod lemke_howson;
pub mod qre;

pub use error::{GameError, GameFileError, PolytopeError, QreError, StochasticError, UnfoldingError};
pub use game::{
    BimatrixGame, EquilibriumKind, EquilibriumPoint, Matrix, MixedStrategyProfile, NashVerdict, NormalFormGame,
};
