use thiserror::Error;

/// Errors raised by the game model and the solvers built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("a game needs at least two agents, got {0}")]
    TooFewAgents(usize),

    #[error("agent {agent} has no choices")]
    EmptyChoiceSet { agent: usize },

    #[error("payoff tensor has {found} entries, expected {expected}")]
    PayoffSize { expected: usize, found: usize },

    #[error("non-finite payoff at {location}")]
    NonFinite { location: String },

    #[error("matrix is ragged: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrices A and B differ in shape: {a_rows}x{a_cols} vs {b_rows}x{b_cols}")]
    ShapeMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },

    #[error("agent {agent}: expected a distribution over {expected} choices, got {found}")]
    DimensionMismatch {
        agent: usize,
        expected: usize,
        found: usize,
    },

    #[error("profile has {found} distributions, game has {expected} agents")]
    AgentCountMismatch { expected: usize, found: usize },

    #[error("agent {agent}: not a probability distribution ({reason})")]
    NotADistribution { agent: usize, reason: String },

    #[error("agent index {agent} out of range for a {agents}-agent game")]
    AgentOutOfRange { agent: usize, agents: usize },

    #[error("game has non-positive payoffs (min {min}); positivize it first")]
    NotPositive { min: f64 },

    #[error("artificial equilibrium has no strategy image")]
    ArtificialEquilibrium,

    #[error("vector pair violates the normalized equilibrium relations: {0}")]
    NotNormalizedEquilibrium(String),

    #[error("expected a {expected} game, got {found}")]
    WrongShape {
        expected: &'static str,
        found: String,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// Errors raised by the labelled-polytope machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolytopeError {
    #[error(transparent)]
    Game(#[from] GameError),

    #[error("label {label} is not in 1..={max}")]
    LabelOutOfRange { label: usize, max: usize },

    #[error("vertex violates constraint {constraint}: {detail}")]
    Infeasible { constraint: String, detail: String },

    #[error("{what} is limited to {limit} strategies per agent, game is {rows}x{cols}; use a sampled check instead")]
    TooLarge {
        what: &'static str,
        limit: usize,
        rows: usize,
        cols: usize,
    },

    #[error("pivoting revisited a basis after {steps} steps")]
    PivotCycle { steps: usize },

    #[error("vertex has {found} coordinates, expected {expected}")]
    VertexDimension { expected: usize, found: usize },
}

/// Errors raised by the stochastic catastrophe routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StochasticError {
    #[error("diffusion must be positive on the support, sigma({x}) = {sigma}")]
    NonPositiveSigma { x: f64, sigma: f64 },

    #[error("invalid support [{lo}, {hi}]")]
    InvalidSupport { lo: f64, hi: f64 },

    #[error("grid needs at least {min} points, got {found}")]
    GridTooSmall { min: usize, found: usize },

    #[error("invalid step size {0}")]
    InvalidStep(f64),

    #[error("trajectory left [{lo}, {hi}] at step {step} (t = {time}, x = {value})")]
    Escaped {
        lo: f64,
        hi: f64,
        step: usize,
        time: f64,
        value: f64,
    },

    #[error("non-finite value encountered at x = {0}")]
    NonFinite(f64),
}

/// Errors raised when evaluating catastrophe unfoldings.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnfoldingError {
    #[error("{name} takes {expected} controls, got {found}")]
    ControlArity {
        name: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{name} takes {expected} state variables, got {found}")]
    StateArity {
        name: &'static str,
        expected: usize,
        found: usize,
    },
}

/// Errors raised by the quantal response solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QreError {
    #[error(transparent)]
    Game(#[from] GameError),

    #[error(transparent)]
    Polytope(#[from] PolytopeError),

    #[error("beta for agent {agent} must be finite and nonnegative, got {value}")]
    InvalidBeta { agent: usize, value: f64 },

    #[error("expected {expected} betas, got {found}")]
    BetaArity { expected: usize, found: usize },

    #[error("damping must lie in (0, 1], got {0}")]
    InvalidDamping(f64),

    #[error("grid resolution must be at least {min}, got {found}")]
    ResolutionTooSmall { min: usize, found: usize },
}

/// Errors raised while reading a game description.
#[derive(Debug, Error)]
pub enum GameFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("field `{path}`: {message}")]
    Field { path: String, message: String },

    #[error(transparent)]
    Game(#[from] GameError),
}
