//! `sg`: Nash, quantal response and catastrophe computations on small games.
//!
//! Exit codes: 0 on success, 1 when a numerical method fails to converge,
//! 2 on bad input.

mod manifest;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use sg_core::catastrophe::{
    simulate_sde, stationary_density, AxisRange, CuspControl, Diffusion, SdeConfig, Support,
};
use sg_core::error::{GameError, GameFileError, PolytopeError, QreError, StochasticError};
use sg_core::game::{chicken, has_potential_condition, prisoners_dilemma, ts_coordinates, ts_family_game, TsFamilyPoint, TsRegion, TIE_TOL};
use sg_core::io::{game_to_json, parse_game_str, ParsedGame};
use sg_core::lemke_howson::{
    enumerate_equilibria_lh, format_rational, support_enumeration, BimatrixEquilibrium, LemkeHowson, Side,
};
use sg_core::qre::{
    logit_game, qre_iterate, solve_qre_fixed_points, trace_critical_set, LogitParams, DEFAULT_BETA_MAX,
};
use sg_core::{BimatrixGame, MixedStrategyProfile};

use manifest::{sha256_hex, RunManifest};

#[derive(Parser)]
#[command(name = "sg", version, about = "Equilibrium structures of small games")]
struct Cli {
    /// Worker threads for grid sweeps; 0 picks one per core. Falls back to SG_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GameSource {
    /// JSON game file.
    #[arg(long)]
    game: Option<PathBuf>,
    /// Built-in game: pd, chicken or ts:T,S.
    #[arg(long)]
    builtin: Option<Builtin>,
}

#[derive(Debug, Clone)]
enum Builtin {
    Pd,
    Chicken,
    Ts(f64, f64),
}

impl FromStr for Builtin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pd" => Ok(Builtin::Pd),
            "chicken" => Ok(Builtin::Chicken),
            _ => {
                let rest = s
                    .strip_prefix("ts:")
                    .ok_or_else(|| format!("unknown game `{s}` (expected pd, chicken or ts:T,S)"))?;
                let (t, sv) = rest.split_once(',').ok_or_else(|| format!("expected ts:T,S, got `{s}`"))?;
                let t: f64 = t.trim().parse().map_err(|e| format!("bad T `{t}`: {e}"))?;
                let sv: f64 = sv.trim().parse().map_err(|e| format!("bad S `{sv}`: {e}"))?;
                if !t.is_finite() || !sv.is_finite() {
                    return Err("T and S must be finite".into());
                }
                Ok(Builtin::Ts(t, sv))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Lh,
    Support,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DriftKind {
    /// −x³ + u1·x + u2
    Cusp,
    /// −x
    Ou,
}

#[derive(Debug, Clone, Copy)]
struct Interval(f64, f64);

impl FromStr for Interval {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
        let lo: f64 = lo.parse().map_err(|e| format!("bad LO `{lo}`: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("bad HI `{hi}`: {e}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("invalid interval {lo}:{hi}"));
        }
        Ok(Interval(lo, hi))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Lemke–Howson from the artificial equilibrium, dropping one label.
    SolveNash {
        #[command(flatten)]
        source: GameSource,
        /// One-based label to drop.
        #[arg(long)]
        label: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All equilibria of a bimatrix game.
    EnumerateNash {
        #[command(flatten)]
        source: GameSource,
        #[arg(long, value_enum, default_value = "support")]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Logit fixed points at one (β1, β2).
    QreSolve {
        #[command(flatten)]
        source: GameSource,
        /// Comma-separated betas, one per agent.
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<f64>,
        /// Damping for games other than two-by-two, which use iteration.
        #[arg(long, default_value_t = 0.5)]
        damping: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixed points over a square (β1, β2) grid.
    QreSweep {
        #[command(flatten)]
        source: GameSource,
        #[arg(long, value_name = "LO:HI:N")]
        beta_grid: AxisRange,
        #[arg(long)]
        out: PathBuf,
    },
    /// Critical set of the logit equilibrium surface.
    QreCritical {
        #[command(flatten)]
        source: GameSource,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Drop points whose β exceeds this.
        #[arg(long, default_value_t = DEFAULT_BETA_MAX)]
        beta_max: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Stationary points of the cusp potential over a control grid.
    CuspSurface {
        #[arg(long, value_name = "LO:HI:N", allow_hyphen_values = true)]
        u1: AxisRange,
        #[arg(long, value_name = "LO:HI:N", allow_hyphen_values = true)]
        u2: AxisRange,
        #[arg(long)]
        out: PathBuf,
    },
    /// Stationary density of the noisy cusp (or Ornstein–Uhlenbeck) process.
    SctDensity {
        #[arg(long, value_enum, default_value = "cusp")]
        drift: DriftKind,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u2: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, value_name = "LO:HI", allow_hyphen_values = true)]
        support: Interval,
        #[arg(long, default_value_t = 2001)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Euler–Maruyama simulation with a histogram of visited states.
    SctSim {
        #[arg(long, value_enum, default_value = "cusp")]
        drift: DriftKind,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u1: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u2: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1_000_000)]
        steps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 60)]
        bins: usize,
        #[arg(long, value_name = "LO:HI", allow_hyphen_values = true)]
        guard: Option<Interval>,
        /// Also write the trajectory as t,x rows.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pure equilibrium count and (T, S) region of a symmetric two-by-two game.
    ClassifyGame {
        #[command(flatten)]
        source: GameSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cyclic triple condition on the first agent's payoff matrix.
    PotentialCheck {
        #[command(flatten)]
        source: GameSource,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Numerical(_) => 1,
            Failure::Input(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<GameFileError> for Failure {
    fn from(e: GameFileError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<PolytopeError> for Failure {
    fn from(e: PolytopeError) -> Self {
        match e {
            PolytopeError::PivotCycle { .. } => Failure::Numerical(e.to_string()),
            PolytopeError::Infeasible { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<QreError> for Failure {
    fn from(e: QreError) -> Self {
        match e {
            QreError::Polytope(p) => p.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<StochasticError> for Failure {
    fn from(e: StochasticError) -> Self {
        match e {
            StochasticError::Escaped { .. } | StochasticError::NonFinite(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(format!("cannot write output: {e}"))
    }
}

struct Run {
    command_line: String,
    game_sha256: Option<String>,
    seed: Option<u64>,
    start: Instant,
}

impl Run {
    fn manifest(&self) -> RunManifest {
        RunManifest {
            command_line: self.command_line.clone(),
            game_sha256: self.game_sha256.clone(),
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_seconds: self.start.elapsed().as_secs_f64(),
        }
    }

    fn write_file(&self, path: &Path, contents: &str) -> Result<(), Failure> {
        std::fs::write(path, contents)?;
        self.manifest().write_for(path)?;
        Ok(())
    }

    /// To `out` with a manifest, or to stdout.
    fn emit_json(&self, out: Option<&Path>, value: &Value) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(value).expect("json value serializes") + "\n";
        match out {
            Some(path) => self.write_file(path, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn load_game(source: &GameSource, run: &mut Run) -> Result<ParsedGame, Failure> {
    let game = if let Some(path) = &source.game {
        let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        run.game_sha256 = Some(sha256_hex(&bytes));
        let text = String::from_utf8(bytes).map_err(|_| Failure::Input(format!("{} is not UTF-8", path.display())))?;
        parse_game_str(&text)?
    } else {
        let game = match source.builtin.as_ref().expect("clap enforces one source") {
            Builtin::Pd => prisoners_dilemma(),
            Builtin::Chicken => chicken(),
            Builtin::Ts(t, s) => ts_family_game(TsFamilyPoint { t: *t, s: *s }),
        };
        let parsed = ParsedGame::Bimatrix(game);
        run.game_sha256 = Some(sha256_hex(game_to_json(&parsed).to_string().as_bytes()));
        parsed
    };
    Ok(game)
}

fn bimatrix(game: &ParsedGame) -> Result<BimatrixGame, Failure> {
    Ok(game.to_bimatrix()?)
}

fn rationals(v: &[sg_core::lemke_howson::Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn equilibrium_json(e: &BimatrixEquilibrium) -> Value {
    json!({
        "x": rationals(&e.x),
        "y": rationals(&e.y),
        "payoffs": e.point.payoffs,
        "kind": e.point.kind,
    })
}

fn configure_threads(flag: Option<usize>) -> Result<(), Failure> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("SG_THREADS") {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| Failure::Input(format!("SG_THREADS must be a non-negative integer, got `{v}`")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

fn drift_fn(kind: DriftKind, u1: f64, u2: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| match kind {
        DriftKind::Cusp => CuspControl::new(u1, u2).drift(x),
        DriftKind::Ou => -x,
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    configure_threads(cli.threads)?;
    let mut run = Run {
        command_line: std::env::args().collect::<Vec<_>>().join(" "),
        game_sha256: None,
        seed: None,
        start: Instant::now(),
    };
    match cli.command {
        Command::SolveNash { source, label, out } => {
            let game = bimatrix(&load_game(&source, &mut run)?)?;
            let lh = LemkeHowson::new(&game.positivize())?;
            let result = lh.follow(&lh.artificial(), label)?;
            let end = lh.equilibrium_of(&result.path.end)?;
            let eq = BimatrixEquilibrium::verified(&game, end.x, end.y)?;
            let steps: Vec<Value> = result
                .path
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "side": match s.side { Side::X => "x", Side::Y => "y" },
                        "entering": s.entering,
                        "leaving": s.leaving,
                        "x": rationals(&s.vertex.x),
                        "y": rationals(&s.vertex.y),
                    })
                })
                .collect();
            run.emit_json(
                out.as_deref(),
                &json!({
                    "label": label,
                    "equilibrium": equilibrium_json(&eq),
                    "steps": steps,
                    "degenerate": result.path.degenerate,
                }),
            )
        }
        Command::EnumerateNash { source, method, out } => {
            let game = bimatrix(&load_game(&source, &mut run)?)?;
            let (equilibria, degenerate) = match method {
                Method::Support => (support_enumeration(&game)?, None),
                Method::Lh => {
                    let found = enumerate_equilibria_lh(&game.positivize())?;
                    let eqs = found
                        .equilibria
                        .into_iter()
                        .map(|e| BimatrixEquilibrium::verified(&game, e.x, e.y))
                        .collect::<Result<Vec<_>, _>>()?;
                    (eqs, Some(found.degenerate))
                }
            };
            let list: Vec<Value> = equilibria.iter().map(equilibrium_json).collect();
            run.emit_json(
                out.as_deref(),
                &json!({
                    "method": match method { Method::Lh => "lh", Method::Support => "support" },
                    "count": list.len(),
                    "degenerate": degenerate,
                    "equilibria": list,
                }),
            )
        }
        Command::QreSolve {
            source,
            beta,
            damping,
            out,
        } => {
            let parsed = load_game(&source, &mut run)?;
            let betas = LogitParams::new(beta)?;
            let nf = parsed.to_normal_form();
            if nf.choice_counts() == [2, 2] {
                let game = logit_game(&nf)?;
                let points = solve_qre_fixed_points(&game, &betas)?;
                let worst = points.iter().map(|p| p.residual).fold(0.0, f64::max);
                run.emit_json(out.as_deref(), &json!({ "method": "scalar", "fixed_points": points }))?;
                if worst > 1e-10 {
                    return Err(Failure::Numerical(format!("fixed-point residual {worst:e} exceeds 1e-10")));
                }
                Ok(())
            } else {
                let start = MixedStrategyProfile::uniform(nf.choice_counts());
                let outcome = qre_iterate(&nf, &start, &betas, damping)?;
                run.emit_json(out.as_deref(), &json!({ "method": "iteration", "outcome": outcome }))?;
                if !outcome.converged {
                    return Err(Failure::Numerical(format!(
                        "iteration stopped after {} steps with residual {:e}",
                        outcome.iterations, outcome.residual
                    )));
                }
                Ok(())
            }
        }
        Command::QreSweep { source, beta_grid, out } => {
            let game = logit_game(&load_game(&source, &mut run)?.to_normal_form())?;
            let rows: Result<Vec<String>, QreError> = (0..beta_grid.n)
                .into_par_iter()
                .map(|i| {
                    let mut block = String::new();
                    for j in 0..beta_grid.n {
                        let (b1, b2) = (beta_grid.value(i), beta_grid.value(j));
                        let points = solve_qre_fixed_points(&game, &LogitParams::pair(b1, b2)?)?;
                        for p in &points {
                            let _ = writeln!(
                                block,
                                "{},{},{},{},{}",
                                num(b1),
                                num(b2),
                                points.len(),
                                num(p.q.q1),
                                num(p.q.q2)
                            );
                        }
                    }
                    Ok(block)
                })
                .collect();
            let mut csv = String::from("beta1,beta2,count,q1,q2\n");
            csv.extend(rows?);
            run.write_file(&out, &csv)
        }
        Command::QreCritical {
            source,
            resolution,
            beta_max,
            out,
        } => {
            let game = logit_game(&load_game(&source, &mut run)?.to_normal_form())?;
            let curves = trace_critical_set(&game, resolution)?;
            let mut csv = String::from("q1,q2,beta1,beta2,curve_id\n");
            for (id, c) in curves.iter().enumerate() {
                for p in c.points.iter().filter(|p| p.beta1 <= beta_max && p.beta2 <= beta_max) {
                    let _ = writeln!(csv, "{},{},{},{},{id}", num(p.q1), num(p.q2), num(p.beta1), num(p.beta2));
                }
            }
            run.write_file(&out, &csv)
        }
        Command::CuspSurface { u1, u2, out } => {
            let mut csv = String::from("u1,u2,root,stability\n");
            for row in sg_core::catastrophe::sweep_cusp_surface(u1, u2) {
                let _ = writeln!(csv, "{},{},{},{}", num(row.u1), num(row.u2), num(row.root), row.stability.as_str());
            }
            run.write_file(&out, &csv)
        }
        Command::SctDensity {
            drift,
            u1,
            u2,
            sigma,
            support,
            grid,
            out,
        } => {
            let density = stationary_density(
                &drift_fn(drift, u1, u2),
                &Diffusion::Constant(sigma),
                Support::new(support.0, support.1)?,
                grid,
            )?;
            let mut csv = String::from("x,density\n");
            for (x, p) in &density.grid {
                let _ = writeln!(csv, "{},{}", num(*x), num(*p));
            }
            run.write_file(&out, &csv)
        }
        Command::SctSim {
            drift,
            u1,
            u2,
            sigma,
            x0,
            dt,
            steps,
            seed,
            bins,
            guard,
            trajectory,
            out,
        } => {
            run.seed = Some(seed);
            let mut config = SdeConfig::new(x0, dt, steps, seed);
            if let Some(Interval(lo, hi)) = guard {
                config = config.with_guard(lo, hi);
            }
            let sim = simulate_sde(&drift_fn(drift, u1, u2), &Diffusion::Constant(sigma), config)?;
            let hist = sim.histogram(bins, None);
            let mut csv = String::from("bin_lo,bin_hi,density\n");
            for (w, d) in hist.edges.windows(2).zip(&hist.density) {
                let _ = writeln!(csv, "{},{},{}", num(w[0]), num(w[1]), num(*d));
            }
            run.write_file(&out, &csv)?;
            if let Some(path) = trajectory {
                let mut csv = String::from("t,x\n");
                for (k, x) in sim.trajectory.iter().enumerate() {
                    let _ = writeln!(csv, "{},{}", num(k as f64 * dt), num(*x));
                }
                run.write_file(&path, &csv)?;
            }
            Ok(())
        }
        Command::ClassifyGame { source, out } => {
            let parsed = load_game(&source, &mut run)?;
            let nf = parsed.to_normal_form();
            let mut pure = 0usize;
            let counts = nf.choice_counts().to_vec();
            let mut joint = vec![0usize; counts.len()];
            'cells: loop {
                let profile = MixedStrategyProfile::pure(&counts, &joint)?;
                if nf.is_nash(&profile, TIE_TOL)?.is_accepted() {
                    pure += 1;
                }
                for a in (0..counts.len()).rev() {
                    joint[a] += 1;
                    if joint[a] < counts[a] {
                        continue 'cells;
                    }
                    joint[a] = 0;
                }
                break;
            }
            let ts = parsed.to_bimatrix().ok().and_then(|g| ts_coordinates(&g));
            let region = ts.map(TsRegion::of);
            let region_name = region.map_or("n/a", |r| r.name());
            println!("{pure} pure NE, region: {region_name}");
            if let Some(path) = out {
                run.emit_json(
                    Some(&path),
                    &json!({
                        "pure_equilibria": pure,
                        "region": region_name,
                        "t": ts.map(|p| p.t),
                        "s": ts.map(|p| p.s),
                    }),
                )?;
            }
            Ok(())
        }
        Command::PotentialCheck { source, tol, out } => {
            let game = bimatrix(&load_game(&source, &mut run)?)?;
            let check = has_potential_condition(game.a(), tol)?;
            let witness = check.witness.map(|w| {
                json!({ "i": w.i + 1, "j": w.j + 1, "k": w.k + 1, "violation": w.violation })
            });
            run.emit_json(out.as_deref(), &json!({ "holds": check.holds, "witness": witness }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
