//! Text formats shared with the command line.
//!
//! Family files are JSON lines: a header object `{"d":2,"r":2}` followed by
//! one tuple per line, e.g. `[[1,2],[1,3]]`. Lattices are a single object
//! `{"d":2,"extreme":[[1,2],[2,1]]}`; step profiles are
//! `{"breakpoints":[0,…],"heights":[…]}`; layered sets are
//! `{"layers":[{"thickness":1,"breakpoints":[…],"heights":[…]},…]}`.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colex::RSet;
use crate::shadow::{Tuple, TupleFamily};

/// A malformed input, with the position it was detected at.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyHeader {
    d: usize,
    r: usize,
}

fn at(line: usize, err: serde_json::Error) -> ParseError {
    // serde_json appends its own position; ours replaces it
    let mut message = err.to_string();
    if err.line() > 0 {
        if let Some((head, _)) = message.rsplit_once(" at line ") {
            message = head.to_string();
        }
    }
    ParseError { line: line + err.line().saturating_sub(1), column: err.column().max(1), message }
}

pub fn parse_family(text: &str) -> Result<TupleFamily, ParseError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines
        .next()
        .ok_or(ParseError { line: 1, column: 1, message: "missing header line".into() })?;
    let header: FamilyHeader = serde_json::from_str(header).map_err(|e| at(hline + 1, e))?;
    let mut fam = TupleFamily::empty(header.d, header.r)
        .map_err(|e| ParseError { line: hline + 1, column: 1, message: e.to_string() })?;
    for (i, l) in lines {
        let tuple: Vec<RSet> = serde_json::from_str(l).map_err(|e| at(i + 1, e))?;
        fam.insert(tuple).map_err(|e| ParseError { line: i + 1, column: 1, message: e.to_string() })?;
    }
    Ok(fam)
}

pub fn write_family(family: &TupleFamily) -> String {
    let mut out = serde_json::to_string(&FamilyHeader { d: family.d(), r: family.r() }).unwrap();
    out.push('\n');
    for t in family.iter() {
        let t: &Tuple = t;
        writeln!(out, "{}", serde_json::to_string(t).unwrap()).unwrap();
    }
    out
}

/// Any single-object JSON format (lattice, profile, layered set).
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    serde_json::from_str(text).map_err(|e| at(1, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{LayeredSet, StepProfile};
    use crate::lattice::MonotoneLattice;

    #[test]
    fn family_round_trip() {
        let text = "{\"d\":2,\"r\":2}\n[[1,2],[1,3]]\n[[1,2],[1,2]]\n";
        let fam = parse_family(text).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(write_family(&fam), "{\"d\":2,\"r\":2}\n[[1,2],[1,2]]\n[[1,2],[1,3]]\n");
        assert_eq!(parse_family(&write_family(&fam)).unwrap(), fam);
    }

    #[test]
    fn family_errors_carry_positions() {
        let err = parse_family("{\"d\":2,\"r\":2}\n[[1,2],[1,3]]\n[[1,2],[1,3\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_family("{\"d\":2,\"r\":2}\n[[1,2],[3,1]]\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("strictly increasing"));
        let err = parse_family("{\"d\":2,\"r\":2}\n[[1,2]]\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(parse_family("").is_err());
        assert!(parse_family("{\"d\":2}\n").is_err());
    }

    #[test]
    fn lattice_format() {
        let l: MonotoneLattice = parse_json(r#"{"d":2,"extreme":[[1,2],[2,1]]}"#).unwrap();
        assert_eq!(l.size().unwrap(), 3);
        assert_eq!(serde_json::to_string(&l).unwrap(), r#"{"d":2,"extreme":[[1,2],[2,1]]}"#);
        let err = parse_json::<MonotoneLattice>(r#"{"d":2,"extreme":[[1,1],[2,2]]}"#).unwrap_err();
        assert!(err.message.contains("incomparable"));
    }

    #[test]
    fn layered_format() {
        let m: LayeredSet = parse_json(
            r#"{"layers":[{"thickness":1,"breakpoints":[0,4],"heights":[1]},
                          {"thickness":1,"breakpoints":[0,1],"heights":[1]}]}"#,
        )
        .unwrap();
        assert_eq!(m.volume(), 5.0);
        let back: LayeredSet = parse_json(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        let err = parse_json::<StepProfile>("{\"breakpoints\":[0,1],\n\"heights\":[1,]}").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_json::<StepProfile>(r#"{"breakpoints":[0,1],"heights":[-1]}"#).unwrap_err();
        assert!(err.message.contains("nonnegative"));
    }
}
