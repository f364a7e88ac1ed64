//! Recursive-descent parser for terms, formulas, sequents and signature
//! files, with sort inference for unannotated free variables.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! formula ::= true | false | R | R(term,...) | eq(term,term)
//!           | and(formula,...) | or(formula,...) | imp(formula,formula)
//!           | ex([x:S,...], formula) | all([x:S,...], formula)
//! term    ::= x | c | f(term,...)
//! sequent ::= formula |- [x:S,...] formula
//! ```
//!
//! Signature files have one declaration per line: `sort S`,
//! `rel R : S,S`, `fun f : S,S -> S`, `const c : S`. Blank lines and
//! `#` comments are skipped. When a file declares no `sort` line, sorts
//! mentioned elsewhere are declared implicitly, and a signature with a
//! single sort lets variable annotations be dropped.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{Formula, Sequent, Signature, SortError, Term, Var};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("sort error: {0}")]
    Sort(#[from] SortError),
}

impl ParseError {
    fn at(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError::Syntax { line: pos.line, col: pos.col, msg: msg.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Turnstile,
    Arrow,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Turnstile => write!(f, "`|-`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    i: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, bytes: src.as_bytes(), i: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) {
        if self.bytes[self.i] == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        self.i += 1;
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Pos)>, ParseError> {
        let mut out = Vec::new();
        while self.i < self.bytes.len() {
            let c = self.bytes[self.i];
            let pos = Pos { line: self.line, col: self.col };
            match c {
                b' ' | b'\t' | b'\r' | b'\n' => self.bump(),
                b'(' => {
                    out.push((Tok::LParen, pos));
                    self.bump();
                }
                b')' => {
                    out.push((Tok::RParen, pos));
                    self.bump();
                }
                b'[' => {
                    out.push((Tok::LBracket, pos));
                    self.bump();
                }
                b']' => {
                    out.push((Tok::RBracket, pos));
                    self.bump();
                }
                b',' => {
                    out.push((Tok::Comma, pos));
                    self.bump();
                }
                b':' => {
                    out.push((Tok::Colon, pos));
                    self.bump();
                }
                b'|' => {
                    self.bump();
                    if self.i < self.bytes.len() && self.bytes[self.i] == b'-' {
                        self.bump();
                        out.push((Tok::Turnstile, pos));
                    } else {
                        return Err(ParseError::at(pos, "expected `|-`"));
                    }
                }
                b'-' => {
                    self.bump();
                    if self.i < self.bytes.len() && self.bytes[self.i] == b'>' {
                        self.bump();
                        out.push((Tok::Arrow, pos));
                    } else {
                        return Err(ParseError::at(pos, "expected `->`"));
                    }
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.i;
                    while self.i < self.bytes.len() {
                        let c = self.bytes[self.i];
                        if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    out.push((Tok::Ident(self.src[start..self.i].to_string()), pos));
                }
                other => {
                    return Err(ParseError::at(pos, format!("unexpected character `{}`", other as char)));
                }
            }
        }
        out.push((Tok::Eof, Pos { line: self.line, col: self.col }));
        Ok(out)
    }
}

const KEYWORDS: &[&str] = &["true", "false", "and", "or", "imp", "ex", "all", "eq"];

// Raw trees carry unresolved variable/constant identifiers; sorts are
// attached in a second pass.
#[derive(Debug, Clone)]
enum RawTerm {
    Name(String, Pos),
    App(String, Vec<RawTerm>, Pos),
}

#[derive(Debug, Clone)]
enum RawFormula {
    True,
    False,
    Atom(String, Vec<RawTerm>, Pos),
    Eq(RawTerm, RawTerm),
    And(Vec<RawFormula>),
    Or(Vec<RawFormula>),
    Imp(Box<RawFormula>, Box<RawFormula>),
    Exists(Vec<(String, Option<String>, Pos)>, Box<RawFormula>),
    Forall(Vec<(String, Option<String>, Pos)>, Box<RawFormula>),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        let (t, p) = self.next();
        if t == tok {
            Ok(p)
        } else {
            Err(ParseError::at(p, format!("expected {tok}, found {t}")))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        let (t, p) = self.next();
        match t {
            Tok::Ident(s) => Ok((s, p)),
            other => Err(ParseError::at(p, format!("expected identifier, found {other}"))),
        }
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let (name, pos) = self.ident()?;
        if KEYWORDS.contains(&name.as_str()) {
            return Err(ParseError::at(pos, format!("keyword `{name}` cannot be a term")));
        }
        if *self.peek() == Tok::LParen {
            self.next();
            let mut args = Vec::new();
            if *self.peek() != Tok::RParen {
                loop {
                    args.push(self.term()?);
                    if *self.peek() == Tok::Comma {
                        self.next();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen)?;
            Ok(RawTerm::App(name, args, pos))
        } else {
            Ok(RawTerm::Name(name, pos))
        }
    }

    fn block(&mut self) -> Result<Vec<(String, Option<String>, Pos)>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if *self.peek() != Tok::RBracket {
            loop {
                let (name, pos) = self.ident()?;
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(ParseError::at(pos, format!("keyword `{name}` cannot be a variable")));
                }
                let sort = if *self.peek() == Tok::Colon {
                    self.next();
                    Some(self.ident()?.0)
                } else {
                    None
                };
                out.push((name, sort, pos));
                if *self.peek() == Tok::Comma {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket)?;
        Ok(out)
    }

    fn formula(&mut self) -> Result<RawFormula, ParseError> {
        let (name, pos) = self.ident()?;
        match name.as_str() {
            "true" => Ok(RawFormula::True),
            "false" => Ok(RawFormula::False),
            "eq" => {
                self.expect(Tok::LParen)?;
                let s = self.term()?;
                self.expect(Tok::Comma)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(RawFormula::Eq(s, t))
            }
            "and" | "or" => {
                self.expect(Tok::LParen)?;
                let mut fs = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        fs.push(self.formula()?);
                        if *self.peek() == Tok::Comma {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen)?;
                if name == "and" {
                    Ok(RawFormula::And(fs))
                } else {
                    Ok(RawFormula::Or(fs))
                }
            }
            "imp" => {
                self.expect(Tok::LParen)?;
                let a = self.formula()?;
                self.expect(Tok::Comma)?;
                let b = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(RawFormula::Imp(Box::new(a), Box::new(b)))
            }
            "ex" | "all" => {
                self.expect(Tok::LParen)?;
                let block = self.block()?;
                self.expect(Tok::Comma)?;
                let body = self.formula()?;
                self.expect(Tok::RParen)?;
                if name == "ex" {
                    Ok(RawFormula::Exists(block, Box::new(body)))
                } else {
                    Ok(RawFormula::Forall(block, Box::new(body)))
                }
            }
            _ => {
                // relation atom, possibly 0-ary written bare
                if *self.peek() == Tok::LParen {
                    self.next();
                    let mut args = Vec::new();
                    if *self.peek() != Tok::RParen {
                        loop {
                            args.push(self.term()?);
                            if *self.peek() == Tok::Comma {
                                self.next();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen)?;
                    Ok(RawFormula::Atom(name, args, pos))
                } else {
                    Ok(RawFormula::Atom(name, Vec::new(), pos))
                }
            }
        }
    }
}

/// Union-find over free-variable names, carrying the inferred sort per class.
struct Inference<'a> {
    sig: &'a Signature,
    names: Vec<String>,
    parent: Vec<usize>,
    sort: Vec<Option<String>>,
    index: BTreeMap<String, usize>,
}

impl<'a> Inference<'a> {
    fn new(sig: &'a Signature) -> Self {
        Inference { sig, names: Vec::new(), parent: Vec::new(), sort: Vec::new(), index: BTreeMap::new() }
    }

    fn node(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.parent.push(i);
        self.sort.push(None);
        self.index.insert(name.to_string(), i);
        i
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let r = self.find(self.parent[i]);
            self.parent[i] = r;
        }
        self.parent[i]
    }

    fn assign(&mut self, i: usize, sort: &str) -> Result<(), SortError> {
        let r = self.find(i);
        match &self.sort[r] {
            None => {
                self.sort[r] = Some(sort.to_string());
                Ok(())
            }
            Some(s) if s == sort => Ok(()),
            Some(s) => Err(SortError::SortConflict {
                name: self.names[i].clone(),
                sort1: s.clone(),
                sort2: sort.to_string(),
            }),
        }
    }

    fn union(&mut self, i: usize, j: usize) -> Result<(), SortError> {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri == rj {
            return Ok(());
        }
        match (self.sort[ri].clone(), self.sort[rj].clone()) {
            (Some(a), Some(b)) if a != b => Err(SortError::SortConflict {
                name: self.names[rj].clone(),
                sort1: a,
                sort2: b,
            }),
            (Some(a), _) => {
                self.parent[rj] = ri;
                self.sort[ri] = Some(a);
                Ok(())
            }
            (None, b) => {
                self.parent[rj] = ri;
                self.sort[ri] = b;
                Ok(())
            }
        }
    }

    fn resolved(&mut self, name: &str) -> Result<String, SortError> {
        let i = self.node(name);
        let r = self.find(i);
        if let Some(s) = &self.sort[r] {
            return Ok(s.clone());
        }
        // fall back to the implicit default sort of single-sorted signatures
        if self.sig.sorts().len() == 1 {
            return Ok(self.sig.sorts()[0].clone());
        }
        Err(SortError::CannotInfer(name.to_string()))
    }
}

/// Scope stack of binders; inner entries shadow outer ones.
type Scope = Vec<Var>;

fn default_sort(sig: &Signature, pos: Pos) -> Result<String, ParseError> {
    if sig.sorts().len() == 1 {
        Ok(sig.sorts()[0].clone())
    } else {
        Err(ParseError::at(pos, "variable needs a sort annotation in a multi-sorted signature"))
    }
}

fn constrain_term(
    sig: &Signature,
    t: &RawTerm,
    expected: Option<&str>,
    scope: &Scope,
    inf: &mut Inference,
) -> Result<(), ParseError> {
    match t {
        RawTerm::Name(name, pos) => {
            if let Some((args, result)) = sig.function(name) {
                if !args.is_empty() {
                    return Err(ParseError::at(
                        *pos,
                        format!("function `{name}` expects {} arguments", args.len()),
                    ));
                }
                if let Some(exp) = expected {
                    if exp != result {
                        return Err(ParseError::Sort(SortError::SortMismatch {
                            symbol: name.clone(),
                            expected: exp.to_string(),
                            got: result.to_string(),
                        }));
                    }
                }
                return Ok(());
            }
            // a variable: bound occurrences take the binder's sort
            if let Some(v) = scope.iter().rev().find(|v| v.name == *name) {
                if let Some(exp) = expected {
                    if exp != v.sort {
                        return Err(ParseError::Sort(SortError::SortMismatch {
                            symbol: name.clone(),
                            expected: exp.to_string(),
                            got: v.sort.clone(),
                        }));
                    }
                }
            } else {
                let i = inf.node(name);
                if let Some(exp) = expected {
                    inf.assign(i, exp)?;
                }
            }
            Ok(())
        }
        RawTerm::App(name, args, pos) => {
            let Some((arg_sorts, result)) = sig.function(name) else {
                return Err(ParseError::at(*pos, format!("unknown function or constant `{name}`")));
            };
            if arg_sorts.len() != args.len() {
                return Err(ParseError::at(
                    *pos,
                    format!("function `{name}` expects {} arguments, got {}", arg_sorts.len(), args.len()),
                ));
            }
            if let Some(exp) = expected {
                if exp != result {
                    return Err(ParseError::Sort(SortError::SortMismatch {
                        symbol: name.clone(),
                        expected: exp.to_string(),
                        got: result.to_string(),
                    }));
                }
            }
            let arg_sorts: Vec<String> = arg_sorts.to_vec();
            for (s, a) in arg_sorts.iter().zip(args) {
                constrain_term(sig, a, Some(s), scope, inf)?;
            }
            Ok(())
        }
    }
}

// For eq(s,t) with neither side pinned by the signature we link the two
// variable classes so a later constraint fixes both.
fn term_sort_hint(sig: &Signature, t: &RawTerm, scope: &Scope) -> Option<String> {
    match t {
        RawTerm::Name(name, _) => {
            if let Some((args, result)) = sig.function(name) {
                if args.is_empty() {
                    return Some(result.to_string());
                }
            }
            scope.iter().rev().find(|v| v.name == *name).map(|v| v.sort.clone())
        }
        RawTerm::App(name, _, _) => sig.function(name).map(|(_, r)| r.to_string()),
    }
}

fn constrain_formula(
    sig: &Signature,
    phi: &RawFormula,
    scope: &mut Scope,
    inf: &mut Inference,
) -> Result<(), ParseError> {
    match phi {
        RawFormula::True | RawFormula::False => Ok(()),
        RawFormula::Atom(name, args, pos) => {
            let Some(arg_sorts) = sig.relation(name) else {
                return Err(ParseError::at(*pos, format!("unknown relation `{name}`")));
            };
            if arg_sorts.len() != args.len() {
                return Err(ParseError::at(
                    *pos,
                    format!("relation `{name}` expects {} arguments, got {}", arg_sorts.len(), args.len()),
                ));
            }
            let arg_sorts: Vec<String> = arg_sorts.to_vec();
            for (s, a) in arg_sorts.iter().zip(args) {
                constrain_term(sig, a, Some(s), scope, inf)?;
            }
            Ok(())
        }
        RawFormula::Eq(s, t) => {
            let hs = term_sort_hint(sig, s, scope);
            let ht = term_sort_hint(sig, t, scope);
            match (hs, ht) {
                (Some(a), _) => {
                    constrain_term(sig, s, Some(&a), scope, inf)?;
                    constrain_term(sig, t, Some(&a), scope, inf)
                }
                (None, Some(b)) => {
                    constrain_term(sig, s, Some(&b), scope, inf)?;
                    constrain_term(sig, t, Some(&b), scope, inf)
                }
                (None, None) => {
                    constrain_term(sig, s, None, scope, inf)?;
                    constrain_term(sig, t, None, scope, inf)?;
                    // both must be free variables here; link their classes
                    if let (RawTerm::Name(a, _), RawTerm::Name(b, _)) = (s, t) {
                        let ia = inf.node(a);
                        let ib = inf.node(b);
                        inf.union(ia, ib)?;
                    }
                    Ok(())
                }
            }
        }
        RawFormula::And(fs) | RawFormula::Or(fs) => {
            fs.iter().try_for_each(|f| constrain_formula(sig, f, scope, inf))
        }
        RawFormula::Imp(a, b) => {
            constrain_formula(sig, a, scope, inf)?;
            constrain_formula(sig, b, scope, inf)
        }
        RawFormula::Exists(block, body) | RawFormula::Forall(block, body) => {
            let depth = scope.len();
            for (name, sort, pos) in block {
                let sort = match sort {
                    Some(s) => s.clone(),
                    None => default_sort(sig, *pos)?,
                };
                scope.push(Var::new(name.clone(), sort));
            }
            let r = constrain_formula(sig, body, scope, inf);
            scope.truncate(depth);
            r
        }
    }
}

fn build_term(
    sig: &Signature,
    t: &RawTerm,
    scope: &Scope,
    inf: &mut Inference,
) -> Result<Term, ParseError> {
    match t {
        RawTerm::Name(name, _) => {
            if let Some((args, _)) = sig.function(name) {
                if args.is_empty() {
                    return Ok(Term::constant(name.clone()));
                }
            }
            if let Some(v) = scope.iter().rev().find(|v| v.name == *name) {
                return Ok(Term::Var(v.clone()));
            }
            Ok(Term::Var(Var::new(name.clone(), inf.resolved(name)?)))
        }
        RawTerm::App(name, args, _) => {
            let built: Result<Vec<_>, _> =
                args.iter().map(|a| build_term(sig, a, scope, inf)).collect();
            Ok(Term::App(name.clone(), built?))
        }
    }
}

fn build_formula(
    sig: &Signature,
    phi: &RawFormula,
    scope: &mut Scope,
    inf: &mut Inference,
) -> Result<Formula, ParseError> {
    match phi {
        RawFormula::True => Ok(Formula::True),
        RawFormula::False => Ok(Formula::False),
        RawFormula::Atom(name, args, _) => {
            let built: Result<Vec<_>, _> =
                args.iter().map(|a| build_term(sig, a, scope, inf)).collect();
            Ok(Formula::Atom(name.clone(), built?))
        }
        RawFormula::Eq(s, t) => {
            Ok(Formula::Eq(build_term(sig, s, scope, inf)?, build_term(sig, t, scope, inf)?))
        }
        RawFormula::And(fs) => {
            let built: Result<Vec<_>, _> =
                fs.iter().map(|f| build_formula(sig, f, scope, inf)).collect();
            Ok(Formula::And(built?))
        }
        RawFormula::Or(fs) => {
            let built: Result<Vec<_>, _> =
                fs.iter().map(|f| build_formula(sig, f, scope, inf)).collect();
            Ok(Formula::Or(built?))
        }
        RawFormula::Imp(a, b) => Ok(Formula::imp(
            build_formula(sig, a, scope, inf)?,
            build_formula(sig, b, scope, inf)?,
        )),
        RawFormula::Exists(block, body) | RawFormula::Forall(block, body) => {
            let depth = scope.len();
            let mut vars = Vec::with_capacity(block.len());
            for (name, sort, pos) in block {
                let sort = match sort {
                    Some(s) => s.clone(),
                    None => default_sort(sig, *pos)?,
                };
                let v = Var::new(name.clone(), sort);
                scope.push(v.clone());
                vars.push(v);
            }
            let body = build_formula(sig, body, scope, inf)?;
            scope.truncate(depth);
            Ok(match phi {
                RawFormula::Exists(..) => Formula::exists(vars, body),
                _ => Formula::forall(vars, body),
            })
        }
    }
}

fn finish_formula(sig: &Signature, raw: &RawFormula) -> Result<Formula, ParseError> {
    let mut inf = Inference::new(sig);
    let mut scope = Scope::new();
    constrain_formula(sig, raw, &mut scope, &mut inf)?;
    let phi = build_formula(sig, raw, &mut scope, &mut inf)?;
    sig.check_formula(&phi)?;
    Ok(phi)
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, i: 0 };
    let raw = p.formula()?;
    let pos = p.pos();
    if *p.peek() != Tok::Eof {
        return Err(ParseError::at(pos, format!("trailing input: {}", p.peek())));
    }
    finish_formula(sig, &raw)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, i: 0 };
    let raw = p.term()?;
    let pos = p.pos();
    if *p.peek() != Tok::Eof {
        return Err(ParseError::at(pos, format!("trailing input: {}", p.peek())));
    }
    let mut inf = Inference::new(sig);
    let scope = Scope::new();
    constrain_term(sig, &raw, None, &scope, &mut inf)?;
    let t = build_term(sig, &raw, &scope, &mut inf)?;
    sig.sort_of(&t)?;
    Ok(t)
}

pub fn parse_sequent(text: &str, sig: &Signature) -> Result<Sequent, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, i: 0 };
    parse_sequent_tokens(&mut p, sig)
}

fn parse_sequent_tokens(p: &mut Parser, sig: &Signature) -> Result<Sequent, ParseError> {
    let ante = p.formula()?;
    p.expect(Tok::Turnstile)?;
    let block = p.block()?;
    let succ = p.formula()?;
    let pos = p.pos();
    if *p.peek() != Tok::Eof {
        return Err(ParseError::at(pos, format!("trailing input: {}", p.peek())));
    }

    // context annotations pin the sorts of free variables in both formulas
    let mut inf = Inference::new(sig);
    let mut context = Vec::with_capacity(block.len());
    for (name, sort, pos) in &block {
        let sort = match sort {
            Some(s) => s.clone(),
            None => default_sort(sig, *pos)?,
        };
        let i = inf.node(name);
        inf.assign(i, &sort)?;
        context.push(Var::new(name.clone(), sort));
    }
    let mut scope = Scope::new();
    constrain_formula(sig, &ante, &mut scope, &mut inf)?;
    constrain_formula(sig, &succ, &mut scope, &mut inf)?;
    let ante = build_formula(sig, &ante, &mut scope, &mut inf)?;
    let succ = build_formula(sig, &succ, &mut scope, &mut inf)?;
    sig.check_formula(&ante)?;
    sig.check_formula(&succ)?;
    let seq = Sequent::new(ante, context, succ)?;
    sig.check_sequent(&seq)?;
    Ok(seq)
}

/// Parses a signature file. Lines: `sort S`, `rel R : S,S`,
/// `fun f : S,S -> S`, `const c : S`.
pub fn parse_signature(text: &str) -> Result<Signature, ParseError> {
    // Two passes: sorts can be implicit when no `sort` line appears.
    let decls: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();

    let explicit_sorts = decls.iter().any(|(_, l)| l.starts_with("sort "));
    let mut sig = Signature::with_defaults();

    let err = |line: usize, msg: String| ParseError::Syntax { line, col: 1, msg };

    if !explicit_sorts {
        // collect every sort name mentioned and declare them in order
        let mut seen = Vec::new();
        for (n, l) in &decls {
            let rhs = l
                .split_once(':')
                .map(|(_, r)| r)
                .ok_or_else(|| err(*n, format!("malformed declaration `{l}`")))?;
            for part in rhs.split("->") {
                for s in part.split(',') {
                    let s = s.trim();
                    if !s.is_empty() && !seen.iter().any(|x| x == s) {
                        seen.push(s.to_string());
                    }
                }
            }
        }
        for s in seen {
            sig.add_sort(s).map_err(ParseError::Sort)?;
        }
    }

    for (n, l) in decls {
        if let Some(rest) = l.strip_prefix("sort ") {
            let name = rest.trim();
            sig.add_sort(name).map_err(ParseError::Sort)?;
        } else if let Some(rest) = l.strip_prefix("rel ") {
            let (name, args) = rest
                .split_once(':')
                .ok_or_else(|| err(n, format!("malformed relation declaration `{l}`")))?;
            let args: Vec<String> = if args.trim().is_empty() {
                Vec::new()
            } else {
                args.split(',').map(|s| s.trim().to_string()).collect()
            };
            sig.add_relation(name.trim(), args).map_err(ParseError::Sort)?;
        } else if let Some(rest) = l.strip_prefix("fun ") {
            let (name, ty) = rest
                .split_once(':')
                .ok_or_else(|| err(n, format!("malformed function declaration `{l}`")))?;
            let (args, result) = ty
                .split_once("->")
                .ok_or_else(|| err(n, format!("function declaration needs `->` in `{l}`")))?;
            let args: Vec<String> = if args.trim().is_empty() {
                Vec::new()
            } else {
                args.split(',').map(|s| s.trim().to_string()).collect()
            };
            sig.add_function(name.trim(), args, result.trim()).map_err(ParseError::Sort)?;
        } else if let Some(rest) = l.strip_prefix("const ") {
            let (name, sort) = rest
                .split_once(':')
                .ok_or_else(|| err(n, format!("malformed constant declaration `{l}`")))?;
            sig.add_constant(name.trim(), sort.trim()).map_err(ParseError::Sort)?;
        } else {
            return Err(err(n, format!("unrecognized declaration `{l}`")));
        }
    }
    Ok(sig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Substitution;

    fn sig() -> Signature {
        parse_signature(
            "sort S\n\
             rel P : S\n\
             rel Q : S\n\
             rel R : S,S\n\
             const c : S\n",
        )
        .unwrap()
    }

    #[test]
    fn parse_truth() {
        assert_eq!(parse_formula("true", &sig()).unwrap(), Formula::True);
    }

    #[test]
    fn parse_disjunction_of_atoms() {
        let phi = parse_formula("or(P(c), Q(c))", &sig()).unwrap();
        assert_eq!(
            phi,
            Formula::Or(vec![
                Formula::Atom("P".into(), vec![Term::constant("c")]),
                Formula::Atom("Q".into(), vec![Term::constant("c")]),
            ])
        );
    }

    #[test]
    fn parse_exists_with_free_var_oracle() {
        let phi = parse_formula("ex([x:S], and(R(x,c), P(x)))", &sig()).unwrap();
        let x = Var::new("x", "S");
        assert_eq!(
            phi,
            Formula::exists(
                vec![x.clone()],
                Formula::And(vec![
                    Formula::Atom("R".into(), vec![Term::Var(x.clone()), Term::constant("c")]),
                    Formula::Atom("P".into(), vec![Term::Var(x)]),
                ])
            )
        );
        assert!(phi.free_vars().is_empty());
    }

    #[test]
    fn free_variable_sort_is_inferred() {
        let phi = parse_formula("R(x, c)", &sig()).unwrap();
        assert_eq!(
            phi.free_vars().into_iter().collect::<Vec<_>>(),
            vec![Var::new("x", "S")]
        );
    }

    #[test]
    fn eq_links_variable_sorts() {
        let mut s = sig();
        s.add_sort("T").unwrap();
        // x only constrained via eq with a relation-pinned y
        let phi = parse_formula("and(eq(x, y), P(y))", &s).unwrap();
        let vars: Vec<_> = phi.free_vars().into_iter().collect();
        assert_eq!(vars, vec![Var::new("x", "S"), Var::new("y", "S")]);
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_formula("and(P(c), ", &sig()).unwrap_err();
        match e {
            ParseError::Syntax { line: 1, col, .. } => assert!(col >= 10),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn arity_violation_reported() {
        let e = parse_formula("P(c, c)", &sig()).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { .. }));
    }

    #[test]
    fn sequent_roundtrip() {
        let s = sig();
        let seq = parse_sequent("P(x) |- [x:S] or(P(x), Q(x))", &s).unwrap();
        let printed = seq.to_string();
        let again = parse_sequent(&printed, &s).unwrap();
        assert_eq!(seq, again);
    }

    #[test]
    fn print_parse_identity() {
        let s = sig();
        for text in [
            "true",
            "false",
            "P(c)",
            "and()",
            "or()",
            "eq(c, c)",
            "imp(P(c), false)",
            "ex([x:S], R(x,x))",
            "all([x:S, y:S], imp(R(x,y), R(y,x)))",
            "ex([], P(c))",
        ] {
            let phi = parse_formula(text, &s).unwrap();
            let printed = phi.to_string();
            assert_eq!(parse_formula(&printed, &s).unwrap(), phi, "round trip for `{text}`");
        }
    }

    #[test]
    fn fresh_vars_reparse() {
        let s = sig();
        let phi = parse_formula("ex([y:S], R(x,y))", &s).unwrap();
        let sub: Substitution =
            [(Var::new("x", "S"), Term::Var(Var::new("y", "S")))].into();
        let renamed = crate::syntax::substitute(&phi, &sub);
        let printed = renamed.to_string();
        assert_eq!(parse_formula(&printed, &s).unwrap(), renamed);
    }

    #[test]
    fn multi_sorted_signature_parses() {
        let s = parse_signature(
            "sort A\nsort B\nrel F : A,B\nconst a : A\nfun g : A -> B\n",
        )
        .unwrap();
        let phi = parse_formula("F(a, g(a))", &s).unwrap();
        assert!(phi.free_vars().is_empty());
        let t = parse_term("g(a)", &s).unwrap();
        assert_eq!(s.sort_of(&t).unwrap(), "B");
    }

    #[test]
    fn implicit_sorts_without_sort_lines() {
        let s = parse_signature("rel P : S\nconst c : S\n").unwrap();
        assert_eq!(s.sorts(), ["S".to_string()]);
        assert!(parse_formula("P(c)", &s).is_ok());
    }
}
