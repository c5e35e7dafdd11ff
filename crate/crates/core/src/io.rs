//! JSON game files.
//!
//! Two layouts are accepted:
//!
//! ```text
//! {"agents": 2, "choices": [2, 2], "payoffs": [[[0, 0], [-1, 1]], [[1, -1], [-10, -10]]]}
//! {"A": [[0, -1], [1, -10]], "B": [[0, 1], [-1, -10]]}
//! ```
//!
//! In the first, `payoffs` nests one array level per agent (agent 1
//! outermost) and ends in the vector of agent payoffs.

use std::path::Path;

use serde_json::Value;

use crate::error::GameFileError;
use crate::game::{BimatrixGame, Matrix, NormalFormGame};

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedGame {
    Normal(NormalFormGame),
    Bimatrix(BimatrixGame),
}

impl ParsedGame {
    pub fn to_normal_form(&self) -> NormalFormGame {
        match self {
            ParsedGame::Normal(g) => g.clone(),
            ParsedGame::Bimatrix(g) => g.to_normal_form(),
        }
    }

    /// The bimatrix view of a two-agent game.
    pub fn to_bimatrix(&self) -> Result<BimatrixGame, GameFileError> {
        match self {
            ParsedGame::Normal(g) => Ok(BimatrixGame::from_normal_form(g)?),
            ParsedGame::Bimatrix(g) => Ok(g.clone()),
        }
    }
}

fn field_err(path: impl Into<String>, message: impl Into<String>) -> GameFileError {
    GameFileError::Field {
        path: path.into(),
        message: message.into(),
    }
}

pub fn read_game_file(path: &Path) -> Result<ParsedGame, GameFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| GameFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_game_str(&text)
}

pub fn parse_game_str(text: &str) -> Result<ParsedGame, GameFileError> {
    let value: Value = serde_json::from_str(text).map_err(|e| GameFileError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| field_err("$", "top level must be an object"))?;
    if obj.contains_key("A") || obj.contains_key("B") {
        let a = matrix_field(obj.get("A"), "A")?;
        let b = matrix_field(obj.get("B"), "B")?;
        return Ok(ParsedGame::Bimatrix(BimatrixGame::new(a, b)?));
    }
    let agents = obj
        .get("agents")
        .and_then(Value::as_u64)
        .ok_or_else(|| field_err("agents", "expected a positive integer"))? as usize;
    let choices: Vec<usize> = obj
        .get("choices")
        .and_then(Value::as_array)
        .ok_or_else(|| field_err("choices", "expected an array of positive integers"))?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_u64()
                .filter(|&k| k > 0)
                .map(|k| k as usize)
                .ok_or_else(|| field_err(format!("choices[{i}]"), "expected a positive integer"))
        })
        .collect::<Result<_, _>>()?;
    if choices.len() != agents {
        return Err(field_err(
            "choices",
            format!("has {} entries but agents = {agents}", choices.len()),
        ));
    }
    let payoffs = obj.get("payoffs").ok_or_else(|| field_err("payoffs", "missing"))?;
    let mut flat = Vec::with_capacity(choices.iter().product::<usize>() * agents);
    flatten_payoffs(payoffs, &choices, agents, "payoffs".to_string(), &mut flat)?;
    Ok(ParsedGame::Normal(NormalFormGame::new(choices, flat)?))
}

fn flatten_payoffs(
    value: &Value,
    dims: &[usize],
    agents: usize,
    path: String,
    out: &mut Vec<f64>,
) -> Result<(), GameFileError> {
    let arr = value
        .as_array()
        .ok_or_else(|| field_err(&path, "expected an array"))?;
    let expected = dims.first().copied().unwrap_or(agents);
    if arr.len() != expected {
        return Err(field_err(
            &path,
            format!("ragged: has {} entries, expected {expected}", arr.len()),
        ));
    }
    for (i, v) in arr.iter().enumerate() {
        let p = format!("{path}[{i}]");
        if dims.is_empty() {
            out.push(finite_number(v, &p)?);
        } else {
            flatten_payoffs(v, &dims[1..], agents, p, out)?;
        }
    }
    Ok(())
}

fn finite_number(v: &Value, path: &str) -> Result<f64, GameFileError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| field_err(path, format!("expected a finite number, got {v}")))
}

fn matrix_field(value: Option<&Value>, name: &str) -> Result<Matrix, GameFileError> {
    let rows = value
        .and_then(Value::as_array)
        .ok_or_else(|| field_err(name, "expected an array of rows"))?;
    if rows.is_empty() {
        return Err(field_err(name, "matrix has no rows"));
    }
    let mut out = Vec::with_capacity(rows.len());
    let mut width = None;
    for (i, row) in rows.iter().enumerate() {
        let path = format!("{name}[{i}]");
        let row = row
            .as_array()
            .ok_or_else(|| field_err(&path, "expected an array"))?;
        if let Some(w) = width {
            if row.len() != w {
                return Err(field_err(
                    &path,
                    format!("ragged: has {} entries, expected {w}", row.len()),
                ));
            }
        } else if row.is_empty() {
            return Err(field_err(&path, "row is empty"));
        }
        width = Some(row.len());
        out.push(
            row.iter()
                .enumerate()
                .map(|(j, v)| finite_number(v, &format!("{path}[{j}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(Matrix::from_rows(&out)?)
}

/// Serializes a game to the file layout accepted by [`parse_game_str`].
pub fn game_to_json(game: &ParsedGame) -> Value {
    match game {
        ParsedGame::Bimatrix(g) => serde_json::json!({ "A": g.a().to_rows(), "B": g.b().to_rows() }),
        ParsedGame::Normal(g) => {
            fn nest(g: &NormalFormGame, prefix: &mut Vec<usize>) -> Value {
                let depth = prefix.len();
                if depth == g.num_agents() {
                    return serde_json::json!(g.payoff(prefix));
                }
                let items = (0..g.choice_counts()[depth])
                    .map(|c| {
                        prefix.push(c);
                        let v = nest(g, prefix);
                        prefix.pop();
                        v
                    })
                    .collect();
                Value::Array(items)
            }
            serde_json::json!({
                "agents": g.num_agents(),
                "choices": g.choice_counts(),
                "payoffs": nest(g, &mut Vec::new()),
            })
        }
    }
}
