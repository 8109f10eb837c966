//! Line-oriented model files:
//!
//! ```text
//! worlds 3
//! rel 0>=0 1>=0 2>=1
//! val p = {1,2}
//! val q = {}
//! ```
//!
//! `#` starts a comment. A bare `val` line assigns nothing. Files without
//! `val` lines describe frames.

use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use super::{PreferenceModel, Relation, WorldSet, MAX_WORLDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: malformed header, expected `worlds <n>` with 1 <= n <= {MAX_WORLDS}")]
    BadHeader { line: usize },
    #[error("line {line}: expected `rel` line")]
    MissingRelation { line: usize },
    #[error("line {line}: malformed pair `{token}`, expected `i>=j`")]
    BadPair { line: usize, token: String },
    #[error("line {line}: world index {index} out of range for {worlds} worlds")]
    WorldOutOfRange { line: usize, index: usize, worlds: usize },
    #[error("line {line}: malformed valuation, expected `val <atom> = {{i,j,...}}`")]
    BadValuation { line: usize },
    #[error("line {line}: duplicate atom `{atom}`")]
    DuplicateAtom { line: usize, atom: String },
    #[error("unexpected end of input")]
    Truncated,
}

fn parse_index(s: &str, line: usize, worlds: usize) -> Result<usize, ModelError> {
    let index: usize = s.trim().parse().map_err(|_| ModelError::BadValuation { line })?;
    if index >= worlds {
        return Err(ModelError::WorldOutOfRange { line, index, worlds });
    }
    Ok(index)
}

fn valid_atom(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && name != "T"
        && name != "F"
}

pub fn parse_model(text: &str) -> Result<PreferenceModel, ModelError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, raw)| (k + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or(ModelError::Truncated)?;
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["worlds", count] => count.parse::<usize>().map_err(|_| ModelError::BadHeader { line })?,
        _ => return Err(ModelError::BadHeader { line }),
    };
    if !(1..=MAX_WORLDS).contains(&n) {
        return Err(ModelError::BadHeader { line });
    }

    let (line, rel_line) = lines.next().ok_or(ModelError::Truncated)?;
    let mut tokens = rel_line.split_whitespace();
    if tokens.next() != Some("rel") {
        return Err(ModelError::MissingRelation { line });
    }
    let mut betterness = Relation::empty(n);
    for token in tokens {
        let bad = || ModelError::BadPair { line, token: token.to_string() };
        let (i, j) = token.split_once(">=").ok_or_else(bad)?;
        let i: usize = i.parse().map_err(|_| bad())?;
        let j: usize = j.parse().map_err(|_| bad())?;
        for index in [i, j] {
            if index >= n {
                return Err(ModelError::WorldOutOfRange { line, index, worlds: n });
            }
        }
        betterness.set(i, j, true);
    }

    let mut model = PreferenceModel::new(betterness);
    let mut seen = BTreeSet::new();
    for (line, l) in lines {
        let rest = l.strip_prefix("val").ok_or(ModelError::BadValuation { line })?;
        if rest.trim().is_empty() {
            continue;
        }
        if !rest.starts_with(char::is_whitespace) {
            return Err(ModelError::BadValuation { line });
        }
        let (atom, set) = rest.split_once('=').ok_or(ModelError::BadValuation { line })?;
        let atom = atom.trim();
        if !valid_atom(atom) {
            return Err(ModelError::BadValuation { line });
        }
        let inner = set
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or(ModelError::BadValuation { line })?;
        let mut worlds = WorldSet::EMPTY;
        if !inner.trim().is_empty() {
            for part in inner.split(',') {
                worlds = worlds.union(WorldSet::singleton(parse_index(part, line, n)?));
            }
        }
        if !seen.insert(atom.to_string()) {
            return Err(ModelError::DuplicateAtom { line, atom: atom.to_string() });
        }
        model.assign(atom, worlds);
    }
    Ok(model)
}

pub fn serialize_model(model: &PreferenceModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "worlds {}", model.world_count());
    out.push_str("rel");
    for (i, j) in model.betterness().pairs() {
        let _ = write!(out, " {i}>={j}");
    }
    out.push('\n');
    for (atom, set) in model.valuation() {
        let _ = writeln!(out, "val {atom} = {set}");
    }
    out
}
