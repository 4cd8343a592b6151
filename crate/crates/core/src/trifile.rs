//! Text format for fill-in sets: a `tri <network>` header followed by one
//! `fill <u> <v>` line per fill edge.

use std::fmt::Write as _;

use thiserror::Error;

use crate::elimination::Triangulation;
use crate::graph::{edge, EdgeSet, GraphError, UGraph};
use crate::model::Network;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, name: String },
    #[error("triangulation is for network `{found}`, expected `{expected}`")]
    NetworkMismatch { expected: String, found: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn write_triangulation(fill: &EdgeSet, net: &Network) -> String {
    let mut lines: Vec<(String, String)> = fill
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (&net.vertex(u).name, &net.vertex(v).name);
            if a <= b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            }
        })
        .collect();
    lines.sort();
    let mut out = format!("tri {}\n", net.name());
    for (a, b) in lines {
        writeln!(out, "fill {a} {b}").unwrap();
    }
    out
}

/// Reads the fill edges named in `text`.
pub fn parse_fill(text: &str, net: &Network) -> Result<EdgeSet, TriFileError> {
    let mut header = false;
    let mut fill = EdgeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |msg: &str| TriFileError::Syntax {
            line: line_no,
            msg: msg.to_string(),
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["tri", name] if !header => {
                if *name != net.name() {
                    return Err(TriFileError::NetworkMismatch {
                        expected: net.name().to_string(),
                        found: name.to_string(),
                    });
                }
                header = true;
            }
            ["fill", a, b] if header => {
                let lookup = |s: &str| {
                    net.id_of(s).ok_or_else(|| TriFileError::UnknownVertex {
                        line: line_no,
                        name: s.to_string(),
                    })
                };
                let (u, v) = (lookup(a)?, lookup(b)?);
                if u == v {
                    return Err(syntax("fill edge is a self-loop"));
                }
                fill.insert(edge(u, v));
            }
            ["tri", ..] => return Err(syntax("malformed or repeated `tri` header")),
            ["fill", ..] if !header => return Err(syntax("`fill` before `tri` header")),
            _ => return Err(syntax("expected `fill <u> <v>`")),
        }
    }
    if !header {
        return Err(TriFileError::Syntax {
            line: 1,
            msg: "missing `tri` header".into(),
        });
    }
    Ok(fill)
}

/// Reads a fill set and checks it triangulates `base`.
pub fn parse_triangulation(
    text: &str,
    net: &Network,
    base: &UGraph,
) -> Result<Triangulation, TriFileError> {
    let fill = parse_fill(text, net)?;
    Ok(Triangulation::new(base.clone(), fill)?)
}
