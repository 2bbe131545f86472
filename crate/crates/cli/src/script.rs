//! Move scripts: whitespace-separated steps applied to a garden in order.
//!
//! Steps are `V<i>` and `V<i>^-1` (also `V<i>⁻¹`) for the tine reordering
//! at position i, `L`, `R` and `S` for moving the base triangle across that
//! side, `flip:<edge>` for reversing an edge orientation, `braid<i>` for the
//! braid relation witness at position i, and `full_twist` for the full twist
//! witness.

use thiserror::Error;
use trivalent_dga::garden::Side;

/// Errors from reading a move script.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScriptError {
    #[error("unknown move `{0}`")]
    Unknown(String),
    #[error("the move script is empty")]
    Empty,
}

/// One scripted step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    MoveV { index: usize, inverse: bool },
    Base(Side),
    Flip(String),
    Braid(usize),
    FullTwist,
}

impl Step {
    /// Whether the step changes the garden, as opposed to checking a witness.
    pub fn is_move(&self) -> bool {
        matches!(self, Step::MoveV { .. } | Step::Base(_) | Step::Flip(_))
    }
}

/// Parses a script into its steps.
pub fn parse_script(text: &str) -> Result<Vec<Step>, ScriptError> {
    let steps = text.split_whitespace().map(parse_step).collect::<Result<Vec<_>, _>>()?;
    if steps.is_empty() {
        return Err(ScriptError::Empty);
    }
    Ok(steps)
}

fn parse_step(token: &str) -> Result<Step, ScriptError> {
    let unknown = || ScriptError::Unknown(token.to_string());
    match token {
        "L" => return Ok(Step::Base(Side::L)),
        "R" => return Ok(Step::Base(Side::R)),
        "S" => return Ok(Step::Base(Side::S)),
        "full_twist" => return Ok(Step::FullTwist),
        _ => {}
    }
    if let Some(edge) = token.strip_prefix("flip:") {
        return if edge.is_empty() { Err(unknown()) } else { Ok(Step::Flip(edge.to_string())) };
    }
    if let Some(i) = token.strip_prefix("braid") {
        return i.parse().ok().filter(|&i| i > 0).map(Step::Braid).ok_or_else(unknown);
    }
    let body = token.strip_prefix('V').ok_or_else(unknown)?;
    let (digits, inverse) = match body.strip_suffix("^-1").or_else(|| body.strip_suffix("⁻¹")) {
        Some(d) => (d, true),
        None => (body, false),
    };
    let index = digits.parse().ok().filter(|&i| i > 0).ok_or_else(unknown)?;
    Ok(Step::MoveV { index, inverse })
}
