//! Lattice files:
//!
//! ```text
//! elements 0 a b 1
//! leq 0 a
//! leq a 1
//! leq 0 b
//! leq b 1
//! join 1 = a b
//! meet 0 = a b
//! ```
//!
//! `leq` lines give generating pairs (the reflexive-transitive closure is
//! computed); `join`/`meet` lines declare the designated joins and meets.

use thiserror::Error;

use super::{DesignatedJoins, FinLattice, LatticeError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LatticeFileError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("{0}")]
    Lattice(#[from] LatticeError),
}

fn malformed(line: usize, msg: impl Into<String>) -> LatticeFileError {
    LatticeFileError::Malformed { line, msg: msg.into() }
}

pub fn parse_lattice(text: &str) -> Result<(FinLattice, DesignatedJoins), LatticeFileError> {
    let mut names: Vec<String> = Vec::new();
    let mut pairs: Vec<(String, String, usize)> = Vec::new();
    let mut joins: Vec<(String, Vec<String>, usize)> = Vec::new();
    let mut meets: Vec<(String, Vec<String>, usize)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix("elements") {
            names.extend(rest.split_whitespace().map(|s| s.to_string()));
        } else if let Some(rest) = l.strip_prefix("leq ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let [a, b] = parts.as_slice() else {
                return Err(malformed(lineno, "leq lines take exactly two elements"));
            };
            pairs.push((a.to_string(), b.to_string(), lineno));
        } else if let Some(rest) = l.strip_prefix("join ") {
            let (target, family) = rest
                .split_once('=')
                .ok_or_else(|| malformed(lineno, "join lines need `target = members`"))?;
            joins.push((
                target.trim().to_string(),
                family.split_whitespace().map(|s| s.to_string()).collect(),
                lineno,
            ));
        } else if let Some(rest) = l.strip_prefix("meet ") {
            let (target, family) = rest
                .split_once('=')
                .ok_or_else(|| malformed(lineno, "meet lines need `target = members`"))?;
            meets.push((
                target.trim().to_string(),
                family.split_whitespace().map(|s| s.to_string()).collect(),
                lineno,
            ));
        } else {
            return Err(malformed(lineno, format!("unrecognized line `{l}`")));
        }
    }

    let n = names.len();
    let index = |name: &str, line: usize| {
        names
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| malformed(line, format!("unknown element `{name}`")))
    };
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b, line) in &pairs {
        let (i, j) = (index(a, *line)?, index(b, *line)?);
        leq[i][j] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    let lattice = FinLattice::from_leq(names, leq)?;
    let mut designated = DesignatedJoins::default();
    for (t, fam, line) in joins {
        let t = index_of(&lattice, &t, line)?;
        let fam: Result<Vec<_>, _> =
            fam.iter().map(|x| index_of(&lattice, x, line)).collect();
        designated.joins.push((t, fam?));
    }
    for (t, fam, line) in meets {
        let t = index_of(&lattice, &t, line)?;
        let fam: Result<Vec<_>, _> =
            fam.iter().map(|x| index_of(&lattice, x, line)).collect();
        designated.meets.push((t, fam?));
    }
    designated.validate(&lattice)?;
    Ok((lattice, designated))
}

fn index_of(l: &FinLattice, name: &str, line: usize) -> Result<usize, LatticeFileError> {
    l.element(name)
        .ok_or_else(|| malformed(line, format!("unknown element `{name}`")))
}

pub fn write_lattice(l: &FinLattice, s: &DesignatedJoins) -> String {
    let mut out = String::new();
    out.push_str(&format!("elements {}\n", l.names().join(" ")));
    // covering pairs are enough; closure is recomputed on parse
    for a in 0..l.size() {
        for b in 0..l.size() {
            if a != b && l.le(a, b) {
                let covering = (0..l.size())
                    .all(|c| c == a || c == b || !(l.le(a, c) && l.le(c, b)));
                if covering {
                    out.push_str(&format!("leq {} {}\n", l.name(a), l.name(b)));
                }
            }
        }
    }
    for (t, fam) in &s.joins {
        let members: Vec<&str> = fam.iter().map(|&x| l.name(x)).collect();
        out.push_str(&format!("join {} = {}\n", l.name(*t), members.join(" ")));
    }
    for (t, fam) in &s.meets {
        let members: Vec<&str> = fam.iter().map(|&x| l.name(x)).collect();
        out.push_str(&format!("meet {} = {}\n", l.name(*t), members.join(" ")));
    }
    out
}
