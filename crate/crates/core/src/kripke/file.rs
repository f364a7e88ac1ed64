//! Kripke model files. A file carries the signature declarations followed
//! by the model sections:
//!
//! ```text
//! sort S
//! rel P : S
//! const c : S
//!
//! worlds w0 w1
//! order w0 w1
//! domain w0 S = {a}
//! rel w0 P = {}
//! fun w0 c = {() -> a}
//! map w0 <= w1 S = {a -> a}
//! ```
//!
//! `order` lines give generating pairs; the reflexive-transitive closure is
//! computed. Transition maps must be given for every strictly related pair
//! (also the composites, which are validated against composition).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{KripkeModel, Transition, World};
use crate::syntax::{parse_signature, ParseError, Signature};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelFileError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("{0}")]
    Signature(#[from] ParseError),
    #[error("model file declares no worlds")]
    NoWorlds,
}

fn malformed(line: usize, msg: impl Into<String>) -> ModelFileError {
    ModelFileError::Malformed { line, msg: msg.into() }
}

const SIG_PREFIXES: [&str; 4] = ["sort ", "rel ", "fun ", "const "];

/// Model-section lines also start with `rel`/`fun`, but always carry a
/// `{...}` body; signature declarations never do.
fn is_signature_line(l: &str) -> bool {
    !l.contains('{')
}

pub fn parse_model(text: &str) -> Result<KripkeModel, ModelFileError> {
    let mut sig_text = String::new();
    let mut world_names: Vec<String> = Vec::new();
    let mut order_pairs: Vec<(String, String, usize)> = Vec::new();
    struct Section {
        line: usize,
        world: String,
        symbol: String,
        body: String,
        kind: SectionKind,
        to_world: String,
    }
    enum SectionKind {
        Domain,
        Rel,
        Fun,
        Map,
    }
    let mut sections: Vec<Section> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        if SIG_PREFIXES.iter().any(|p| l.starts_with(p)) && is_signature_line(l) {
            sig_text.push_str(l);
            sig_text.push('\n');
            continue;
        }
        if let Some(rest) = l.strip_prefix("worlds") {
            world_names.extend(rest.split_whitespace().map(|s| s.to_string()));
            continue;
        }
        if let Some(rest) = l.strip_prefix("order ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let [a, b] = parts.as_slice() else {
                return Err(malformed(lineno, "order lines take exactly two worlds"));
            };
            order_pairs.push((a.to_string(), b.to_string(), lineno));
            continue;
        }
        if let Some(rest) = l.strip_prefix("map ") {
            // head is `w0 <= w1 S`; the `<=` contains '=', so split at `{`
            let brace = rest
                .find('{')
                .ok_or_else(|| malformed(lineno, "map line needs a `{...}` body"))?;
            let head = rest[..brace].trim().trim_end_matches('=').trim();
            let body = rest[brace..].trim();
            let (pair, sort) = head
                .rsplit_once(char::is_whitespace)
                .ok_or_else(|| malformed(lineno, "map line needs `w <= w' S`"))?;
            let (from, to) = pair
                .split_once("<=")
                .ok_or_else(|| malformed(lineno, "map line needs `w <= w'`"))?;
            sections.push(Section {
                line: lineno,
                world: from.trim().to_string(),
                symbol: sort.trim().to_string(),
                body: body.to_string(),
                kind: SectionKind::Map,
                to_world: to.trim().to_string(),
            });
            continue;
        }
        // domain / rel / fun sections: `<kw> <world> <symbol> = {...}`
        let (head, body) = l
            .split_once('=')
            .ok_or_else(|| malformed(lineno, format!("unrecognized line `{l}`")))?;
        let words: Vec<&str> = head.split_whitespace().collect();
        let [kw, world, symbol] = words.as_slice() else {
            return Err(malformed(lineno, format!("expected `<kind> <world> <symbol> = ...` in `{l}`")));
        };
        let kind = match *kw {
            "domain" => SectionKind::Domain,
            "rel" => SectionKind::Rel,
            "fun" => SectionKind::Fun,
            other => return Err(malformed(lineno, format!("unrecognized section `{other}`"))),
        };
        sections.push(Section {
            line: lineno,
            world: world.to_string(),
            symbol: symbol.to_string(),
            body: body.trim().to_string(),
            kind,
            to_world: String::new(),
        });
    }

    let signature: Signature = parse_signature(&sig_text)?;
    if world_names.is_empty() {
        return Err(ModelFileError::NoWorlds);
    }
    let index = |name: &str, line: usize| {
        world_names
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| malformed(line, format!("unknown world `{name}`")))
    };

    let n = world_names.len();
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b, line) in &order_pairs {
        let (i, j) = (index(a, *line)?, index(b, *line)?);
        leq[i][j] = true;
    }
    // reflexive-transitive closure
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }

    let mut worlds: Vec<World> = world_names
        .iter()
        .map(|name| World {
            name: name.clone(),
            domains: BTreeMap::new(),
            relations: signature.relations().map(|(r, _)| (r.to_string(), BTreeSet::new())).collect(),
            functions: signature.functions().map(|(f, _, _)| (f.to_string(), BTreeMap::new())).collect(),
        })
        .collect();
    let mut transitions: BTreeMap<(usize, usize), Transition> = BTreeMap::new();

    let strip_braces = |s: &str, line: usize| -> Result<String, ModelFileError> {
        s.trim()
            .strip_prefix('{')
            .and_then(|x| x.strip_suffix('}'))
            .map(|x| x.trim().to_string())
            .ok_or_else(|| malformed(line, "expected `{...}`"))
    };

    // domains first so element names are known
    for s in &sections {
        if let SectionKind::Domain = s.kind {
            let w = index(&s.world, s.line)?;
            let inner = strip_braces(&s.body, s.line)?;
            let elems: Vec<String> = if inner.is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|e| e.trim().to_string()).collect()
            };
            worlds[w].domains.insert(s.symbol.clone(), elems);
        }
    }
    let elem_index = |worlds: &[World], w: usize, sort: &str, name: &str, line: usize| {
        worlds[w]
            .domains
            .get(sort)
            .and_then(|d| d.iter().position(|e| e == name))
            .ok_or_else(|| {
                malformed(line, format!("unknown element `{name}` of sort `{sort}` at world `{}`", worlds[w].name))
            })
    };

    for s in &sections {
        match s.kind {
            SectionKind::Domain => {}
            SectionKind::Rel => {
                let w = index(&s.world, s.line)?;
                let arg_sorts = signature
                    .relation(&s.symbol)
                    .ok_or_else(|| malformed(s.line, format!("undeclared relation `{}`", s.symbol)))?
                    .to_vec();
                let inner = strip_braces(&s.body, s.line)?;
                let mut table = BTreeSet::new();
                for tup in split_tuples(&inner) {
                    let tup = tup.trim();
                    if tup.is_empty() {
                        continue;
                    }
                    let inner_t = tup
                        .strip_prefix('(')
                        .and_then(|x| x.strip_suffix(')'))
                        .ok_or_else(|| malformed(s.line, format!("expected a tuple, found `{tup}`")))?;
                    let names: Vec<&str> = if inner_t.trim().is_empty() {
                        Vec::new()
                    } else {
                        inner_t.split(',').map(|x| x.trim()).collect()
                    };
                    if names.len() != arg_sorts.len() {
                        return Err(malformed(s.line, format!("tuple arity mismatch for `{}`", s.symbol)));
                    }
                    let mut t = Vec::with_capacity(names.len());
                    for (name, sort) in names.iter().zip(&arg_sorts) {
                        t.push(elem_index(&worlds, w, sort, name, s.line)?);
                    }
                    table.insert(t);
                }
                worlds[w].relations.insert(s.symbol.clone(), table);
            }
            SectionKind::Fun => {
                let w = index(&s.world, s.line)?;
                let (arg_sorts, result) = signature
                    .function(&s.symbol)
                    .map(|(a, r)| (a.to_vec(), r.to_string()))
                    .ok_or_else(|| malformed(s.line, format!("undeclared function `{}`", s.symbol)))?;
                let inner = strip_braces(&s.body, s.line)?;
                let mut table = BTreeMap::new();
                for entry in split_tuples(&inner) {
                    let entry = entry.trim();
                    if entry.is_empty() {
                        continue;
                    }
                    let (args, val) = entry
                        .split_once("->")
                        .ok_or_else(|| malformed(s.line, format!("expected `(args) -> value`, found `{entry}`")))?;
                    let args = args.trim();
                    let inner_a = args
                        .strip_prefix('(')
                        .and_then(|x| x.strip_suffix(')'))
                        .ok_or_else(|| malformed(s.line, format!("expected an argument tuple in `{entry}`")))?;
                    let names: Vec<&str> = if inner_a.trim().is_empty() {
                        Vec::new()
                    } else {
                        inner_a.split(',').map(|x| x.trim()).collect()
                    };
                    if names.len() != arg_sorts.len() {
                        return Err(malformed(s.line, format!("argument arity mismatch for `{}`", s.symbol)));
                    }
                    let mut t = Vec::with_capacity(names.len());
                    for (name, sort) in names.iter().zip(&arg_sorts) {
                        t.push(elem_index(&worlds, w, sort, name, s.line)?);
                    }
                    let v = elem_index(&worlds, w, &result, val.trim(), s.line)?;
                    table.insert(t, v);
                }
                worlds[w].functions.insert(s.symbol.clone(), table);
            }
            SectionKind::Map => {
                let from = index(&s.world, s.line)?;
                let to = index(&s.to_world, s.line)?;
                let sort = s.symbol.clone();
                let inner = strip_braces(&s.body, s.line)?;
                let size = worlds[from]
                    .domains
                    .get(&sort)
                    .map(|d| d.len())
                    .ok_or_else(|| malformed(s.line, format!("no domain for sort `{sort}` at `{}`", s.world)))?;
                let mut map = vec![usize::MAX; size];
                for entry in inner.split(',') {
                    let entry = entry.trim();
                    if entry.is_empty() {
                        continue;
                    }
                    let (a, b) = entry
                        .split_once("->")
                        .ok_or_else(|| malformed(s.line, format!("expected `a -> b`, found `{entry}`")))?;
                    let ia = elem_index(&worlds, from, &sort, a.trim(), s.line)?;
                    let ib = elem_index(&worlds, to, &sort, b.trim(), s.line)?;
                    map[ia] = ib;
                }
                if map.iter().any(|&e| e == usize::MAX) {
                    return Err(malformed(s.line, format!("transition map for sort `{sort}` is not total")));
                }
                transitions.entry((from, to)).or_default().insert(sort, map);
            }
        }
    }

    Ok(KripkeModel { signature, worlds, leq, transitions })
}

/// Splits `(a,b), (c,d)` style lists on commas outside parentheses.
fn split_tuples(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Writes a model in the file format (signature first, then sections).
pub fn write_model(m: &KripkeModel) -> String {
    let mut out = String::new();
    for s in m.signature.sorts() {
        out.push_str(&format!("sort {s}\n"));
    }
    for (r, args) in m.signature.relations() {
        out.push_str(&format!("rel {r} : {}\n", args.join(",")));
    }
    for (f, args, result) in m.signature.functions() {
        if args.is_empty() {
            out.push_str(&format!("const {f} : {result}\n"));
        } else {
            out.push_str(&format!("fun {f} : {} -> {result}\n", args.join(",")));
        }
    }
    out.push('\n');
    let names: Vec<&str> = m.worlds.iter().map(|w| w.name.as_str()).collect();
    out.push_str(&format!("worlds {}\n", names.join(" ")));
    for i in 0..m.worlds.len() {
        for j in 0..m.worlds.len() {
            if i != j && m.leq[i][j] {
                out.push_str(&format!("order {} {}\n", names[i], names[j]));
            }
        }
    }
    for w in &m.worlds {
        for (sort, elems) in &w.domains {
            out.push_str(&format!("domain {} {} = {{{}}}\n", w.name, sort, elems.join(", ")));
        }
    }
    for w in &m.worlds {
        for (r, table) in &w.relations {
            let arg_sorts = m.signature.relation(r).unwrap();
            let tuples: Vec<String> = table
                .iter()
                .map(|t| {
                    let names: Vec<&str> = t
                        .iter()
                        .zip(arg_sorts)
                        .map(|(&e, s)| w.domains[s][e].as_str())
                        .collect();
                    format!("({})", names.join(", "))
                })
                .collect();
            out.push_str(&format!("rel {} {} = {{{}}}\n", w.name, r, tuples.join(", ")));
        }
        for (f, table) in &w.functions {
            let (arg_sorts, result) = m.signature.function(f).unwrap();
            let entries: Vec<String> = table
                .iter()
                .map(|(args, &v)| {
                    let names: Vec<&str> = args
                        .iter()
                        .zip(arg_sorts)
                        .map(|(&e, s)| w.domains[s][e].as_str())
                        .collect();
                    format!("({}) -> {}", names.join(", "), w.domains[result][v])
                })
                .collect();
            out.push_str(&format!("fun {} {} = {{{}}}\n", w.name, f, entries.join(", ")));
        }
    }
    for ((i, j), t) in &m.transitions {
        for (sort, map) in t {
            let entries: Vec<String> = map
                .iter()
                .enumerate()
                .map(|(a, &b)| {
                    format!(
                        "{} -> {}",
                        m.worlds[*i].domains[sort][a],
                        m.worlds[*j].domains[sort][b]
                    )
                })
                .collect();
            out.push_str(&format!(
                "map {} <= {} {} = {{{}}}\n",
                m.worlds[*i].name, m.worlds[*j].name, sort, entries.join(", ")
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = "\
sort S
rel P : S
const c : S

worlds w0 w1
order w0 w1
domain w0 S = {a}
domain w1 S = {a}
rel w0 P = {}
rel w1 P = {(a)}
fun w0 c = {() -> a}
fun w1 c = {() -> a}
map w0 <= w1 S = {a -> a}
";

    #[test]
    fn parse_and_validate_chain() {
        let m = parse_model(CHAIN).unwrap();
        assert_eq!(m.worlds.len(), 2);
        m.validate().unwrap();
    }

    #[test]
    fn write_parse_roundtrip() {
        let m = parse_model(CHAIN).unwrap();
        let text = write_model(&m);
        let back = parse_model(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn unknown_world_reported_with_line() {
        let bad = "sort S\nworlds w0\ndomain w9 S = {a}\n";
        match parse_model(bad) {
            Err(ModelFileError::Malformed { line: 3, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }
}
