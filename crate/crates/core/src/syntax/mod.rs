//! Sorted first-order syntax with wide conjunctions and disjunctions.
//!
//! Formulas are built over a [`Signature`] of sorts, relation symbols and
//! function symbols (constants are 0-ary functions). Conjunction and
//! disjunction take an ordered list of arguments whose width is bounded by
//! the signature's `conn_bound`; quantifier blocks and symbol arities are
//! bounded by `arity_bound`. The empty conjunction plays the role of truth
//! and the empty disjunction the role of falsity, next to the explicit
//! `true`/`false` constructors.
//!
//! All values are immutable after construction and every operation here is
//! a pure function.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

mod parse;
mod theory;

pub use parse::{parse_formula, parse_sequent, parse_signature, parse_term, ParseError};
pub use theory::{parse_theory, Theory};

/// Prefix reserved for variables invented during capture-avoiding
/// substitution. Signature symbols may not start with it; variables may
/// (so that printed formulas re-parse to themselves).
pub const FRESH_PREFIX: char = '_';

/// A typed variable. Identity is the pair (name, sort).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub sort: String,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Var { name: name.into(), sort: sort.into() }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    /// Function application; constants are 0-ary applications.
    App(String, Vec<Term>),
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v.name),
            Term::App(name, args) => {
                if args.is_empty() {
                    write!(f, "{name}")
                } else {
                    write!(f, "{name}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
    Forall(Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn exists(block: Vec<Var>, body: Formula) -> Formula {
        Formula::Exists(block, Box::new(body))
    }

    pub fn forall(block: Vec<Var>, body: Formula) -> Formula {
        Formula::Forall(block, Box::new(body))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::False)
    }

    /// Free variables, in canonical (name, sort) order.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => {
                for t in args {
                    t.collect_vars(out);
                }
            }
            Formula::Eq(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(out);
                }
            }
            Formula::Imp(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Exists(block, body) | Formula::Forall(block, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                for v in block {
                    inner.remove(v);
                }
                out.extend(inner);
            }
        }
    }

    /// Canonical context for a formula: its free variables in order.
    pub fn canonical_context(&self) -> Vec<Var> {
        self.free_vars().into_iter().collect()
    }

    /// All variables bound somewhere in the formula.
    pub fn bound_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => {}
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_bound(out);
                }
            }
            Formula::Imp(a, b) => {
                a.collect_bound(out);
                b.collect_bound(out);
            }
            Formula::Exists(block, body) | Formula::Forall(block, body) => {
                out.extend(block.iter().cloned());
                body.collect_bound(out);
            }
        }
    }

    /// Structural equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        fn go(a: &Formula, b: &Formula, la: &mut Vec<Var>, lb: &mut Vec<Var>) -> bool {
            fn term_eq(s: &Term, t: &Term, la: &[Var], lb: &[Var]) -> bool {
                match (s, t) {
                    (Term::Var(x), Term::Var(y)) => {
                        let ia = la.iter().rposition(|v| v == x);
                        let ib = lb.iter().rposition(|v| v == y);
                        match (ia, ib) {
                            (Some(i), Some(j)) => i == j && x.sort == y.sort,
                            (None, None) => x == y,
                            _ => false,
                        }
                    }
                    (Term::App(f, xs), Term::App(g, ys)) => {
                        f == g
                            && xs.len() == ys.len()
                            && xs.iter().zip(ys).all(|(s, t)| term_eq(s, t, la, lb))
                    }
                    _ => false,
                }
            }
            match (a, b) {
                (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
                (Formula::Atom(r, xs), Formula::Atom(s, ys)) => {
                    r == s
                        && xs.len() == ys.len()
                        && xs.iter().zip(ys).all(|(s, t)| term_eq(s, t, la, lb))
                }
                (Formula::Eq(s1, t1), Formula::Eq(s2, t2)) => {
                    term_eq(s1, s2, la, lb) && term_eq(t1, t2, la, lb)
                }
                (Formula::And(xs), Formula::And(ys)) | (Formula::Or(xs), Formula::Or(ys)) => {
                    xs.len() == ys.len()
                        && xs.iter().zip(ys).all(|(x, y)| go(x, y, la, lb))
                }
                (Formula::Imp(a1, b1), Formula::Imp(a2, b2)) => {
                    go(a1, a2, la, lb) && go(b1, b2, la, lb)
                }
                (Formula::Exists(v1, b1), Formula::Exists(v2, b2))
                | (Formula::Forall(v1, b1), Formula::Forall(v2, b2)) => {
                    if v1.len() != v2.len() {
                        return false;
                    }
                    if v1.iter().zip(v2).any(|(x, y)| x.sort != y.sort) {
                        return false;
                    }
                    la.extend(v1.iter().cloned());
                    lb.extend(v2.iter().cloned());
                    let r = go(b1, b2, la, lb);
                    la.truncate(la.len() - v1.len());
                    lb.truncate(lb.len() - v2.len());
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(name, args) => {
                if args.is_empty() {
                    write!(f, "{name}")
                } else {
                    write!(f, "{name}(")?;
                    for (i, t) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{t}")?;
                    }
                    write!(f, ")")
                }
            }
            Formula::Eq(s, t) => write!(f, "eq({s}, {t})"),
            Formula::And(fs) => write_family(f, "and", fs),
            Formula::Or(fs) => write_family(f, "or", fs),
            Formula::Imp(a, b) => write!(f, "imp({a}, {b})"),
            Formula::Exists(block, body) => write_quant(f, "ex", block, body),
            Formula::Forall(block, body) => write_quant(f, "all", block, body),
        }
    }
}

fn write_family(f: &mut fmt::Formatter<'_>, head: &str, fs: &[Formula]) -> fmt::Result {
    write!(f, "{head}(")?;
    for (i, x) in fs.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

fn write_quant(f: &mut fmt::Formatter<'_>, head: &str, block: &[Var], body: &Formula) -> fmt::Result {
    write!(f, "{head}([")?;
    for (i, v) in block.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, "], {body})")
}

/// A sequent `phi |- [ctx] psi`: the context must list every free variable
/// of both formulas, without repetition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub antecedent: Formula,
    pub context: Vec<Var>,
    pub succedent: Formula,
}

impl Sequent {
    pub fn new(
        antecedent: Formula,
        context: Vec<Var>,
        succedent: Formula,
    ) -> Result<Self, SortError> {
        let mut seen = BTreeSet::new();
        for v in &context {
            if !seen.insert(v.clone()) {
                return Err(SortError::DuplicateContextVar(v.clone()));
            }
        }
        for v in antecedent.free_vars().union(&succedent.free_vars()) {
            if !seen.contains(v) {
                return Err(SortError::ContextMissingVar(v.clone()));
            }
        }
        Ok(Sequent { antecedent, context, succedent })
    }

    /// Sequent over the canonical context of the two formulas.
    pub fn closed(antecedent: Formula, succedent: Formula) -> Self {
        let mut vars = antecedent.free_vars();
        vars.extend(succedent.free_vars());
        Sequent {
            antecedent,
            context: vars.into_iter().collect(),
            succedent,
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- [", self.antecedent)?;
        for (i, v) in self.context.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "] {}", self.succedent)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SortError {
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown relation symbol `{0}`")]
    UnknownRelation(String),
    #[error("unknown function or constant symbol `{0}`")]
    UnknownFunction(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("symbol `{symbol}` expects {expected} arguments, got {got}")]
    ArityMismatch { symbol: String, expected: usize, got: usize },
    #[error("arity bound violated: `{symbol}` has arity {arity}, bound is {bound}")]
    ArityBound { symbol: String, arity: usize, bound: usize },
    #[error("connective width {width} exceeds bound {bound}")]
    WidthBound { width: usize, bound: usize },
    #[error("quantifier block of size {size} exceeds arity bound {bound}")]
    BlockBound { size: usize, bound: usize },
    #[error("variable `{0}` repeated in quantifier block")]
    DuplicateBlockVar(Var),
    #[error("sort mismatch for `{symbol}`: expected {expected}, got {got}")]
    SortMismatch { symbol: String, expected: String, got: String },
    #[error("cannot infer a sort for variable `{0}`")]
    CannotInfer(String),
    #[error("variable `{name}` used at sorts `{sort1}` and `{sort2}`")]
    SortConflict { name: String, sort1: String, sort2: String },
    #[error("context variable `{0}` repeated")]
    DuplicateContextVar(Var),
    #[error("free variable `{0}` missing from context")]
    ContextMissingVar(Var),
    #[error("symbol `{0}` starts with the reserved prefix `_`")]
    ReservedName(String),
}

/// The ambient vocabulary: sorts, relations and functions with their types,
/// plus the two size bounds every formula must respect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<String>,
    relations: BTreeMap<String, Vec<String>>,
    functions: BTreeMap<String, (Vec<String>, String)>,
    arity_bound: usize,
    conn_bound: usize,
}

pub const DEFAULT_ARITY_BOUND: usize = 16;
pub const DEFAULT_CONN_BOUND: usize = 16;

impl Signature {
    pub fn new(arity_bound: usize, conn_bound: usize) -> Self {
        assert!(arity_bound > 0 && conn_bound > 0);
        Signature {
            sorts: Vec::new(),
            relations: BTreeMap::new(),
            functions: BTreeMap::new(),
            arity_bound,
            conn_bound,
        }
    }

    pub fn with_defaults() -> Self {
        Self::new(DEFAULT_ARITY_BOUND, DEFAULT_CONN_BOUND)
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn conn_bound(&self) -> usize {
        self.conn_bound
    }

    pub fn sorts(&self) -> &[String] {
        &self.sorts
    }

    pub fn add_sort(&mut self, name: impl Into<String>) -> Result<(), SortError> {
        let name = name.into();
        check_symbol_name(&name)?;
        if self.sorts.contains(&name) {
            return Err(SortError::DuplicateSymbol(name));
        }
        self.sorts.push(name);
        Ok(())
    }

    pub fn add_relation(
        &mut self,
        name: impl Into<String>,
        arg_sorts: Vec<String>,
    ) -> Result<(), SortError> {
        let name = name.into();
        check_symbol_name(&name)?;
        if arg_sorts.len() >= self.arity_bound {
            return Err(SortError::ArityBound {
                symbol: name,
                arity: arg_sorts.len(),
                bound: self.arity_bound,
            });
        }
        for s in &arg_sorts {
            self.check_sort(s)?;
        }
        if self.relations.contains_key(&name) {
            return Err(SortError::DuplicateSymbol(name));
        }
        self.relations.insert(name, arg_sorts);
        Ok(())
    }

    pub fn add_function(
        &mut self,
        name: impl Into<String>,
        arg_sorts: Vec<String>,
        result: impl Into<String>,
    ) -> Result<(), SortError> {
        let name = name.into();
        let result = result.into();
        check_symbol_name(&name)?;
        if arg_sorts.len() >= self.arity_bound {
            return Err(SortError::ArityBound {
                symbol: name,
                arity: arg_sorts.len(),
                bound: self.arity_bound,
            });
        }
        for s in arg_sorts.iter().chain([&result]) {
            self.check_sort(s)?;
        }
        if self.functions.contains_key(&name) {
            return Err(SortError::DuplicateSymbol(name));
        }
        self.functions.insert(name, (arg_sorts, result));
        Ok(())
    }

    pub fn add_constant(
        &mut self,
        name: impl Into<String>,
        sort: impl Into<String>,
    ) -> Result<(), SortError> {
        self.add_function(name, Vec::new(), sort)
    }

    fn check_sort(&self, s: &str) -> Result<(), SortError> {
        if self.sorts.iter().any(|x| x == s) {
            Ok(())
        } else {
            Err(SortError::UnknownSort(s.to_string()))
        }
    }

    pub fn relation(&self, name: &str) -> Option<&[String]> {
        self.relations.get(name).map(|v| v.as_slice())
    }

    pub fn function(&self, name: &str) -> Option<(&[String], &str)> {
        self.functions.get(name).map(|(a, r)| (a.as_slice(), r.as_str()))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.relations.iter().map(|(n, a)| (n.as_str(), a.as_slice()))
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &[String], &str)> {
        self.functions
            .iter()
            .map(|(n, (a, r))| (n.as_str(), a.as_slice(), r.as_str()))
    }

    /// Constants (0-ary functions) of the given sort.
    pub fn constants_of(&self, sort: &str) -> Vec<String> {
        self.functions
            .iter()
            .filter(|(_, (args, res))| args.is_empty() && res == sort)
            .map(|(n, _)| n.clone())
            .collect()
    }

    pub fn has_proper_functions(&self) -> bool {
        self.functions.values().any(|(args, _)| !args.is_empty())
    }

    /// Sort of a term, checking argument sorts along the way.
    pub fn sort_of(&self, t: &Term) -> Result<String, SortError> {
        match t {
            Term::Var(v) => {
                self.check_sort(&v.sort)?;
                Ok(v.sort.clone())
            }
            Term::App(name, args) => {
                let (arg_sorts, result) = self
                    .functions
                    .get(name)
                    .ok_or_else(|| SortError::UnknownFunction(name.clone()))?;
                if arg_sorts.len() != args.len() {
                    return Err(SortError::ArityMismatch {
                        symbol: name.clone(),
                        expected: arg_sorts.len(),
                        got: args.len(),
                    });
                }
                for (expected, arg) in arg_sorts.iter().zip(args) {
                    let got = self.sort_of(arg)?;
                    if &got != expected {
                        return Err(SortError::SortMismatch {
                            symbol: name.clone(),
                            expected: expected.clone(),
                            got,
                        });
                    }
                }
                Ok(result.clone())
            }
        }
    }

    /// Full well-sortedness check for a formula.
    pub fn check_formula(&self, phi: &Formula) -> Result<(), SortError> {
        match phi {
            Formula::True | Formula::False => Ok(()),
            Formula::Atom(name, args) => {
                let arg_sorts = self
                    .relations
                    .get(name)
                    .ok_or_else(|| SortError::UnknownRelation(name.clone()))?;
                if arg_sorts.len() != args.len() {
                    return Err(SortError::ArityMismatch {
                        symbol: name.clone(),
                        expected: arg_sorts.len(),
                        got: args.len(),
                    });
                }
                for (expected, arg) in arg_sorts.iter().zip(args) {
                    let got = self.sort_of(arg)?;
                    if &got != expected {
                        return Err(SortError::SortMismatch {
                            symbol: name.clone(),
                            expected: expected.clone(),
                            got,
                        });
                    }
                }
                Ok(())
            }
            Formula::Eq(s, t) => {
                let s1 = self.sort_of(s)?;
                let s2 = self.sort_of(t)?;
                if s1 != s2 {
                    return Err(SortError::SortMismatch {
                        symbol: "eq".to_string(),
                        expected: s1,
                        got: s2,
                    });
                }
                Ok(())
            }
            Formula::And(fs) | Formula::Or(fs) => {
                if fs.len() > self.conn_bound {
                    return Err(SortError::WidthBound { width: fs.len(), bound: self.conn_bound });
                }
                fs.iter().try_for_each(|f| self.check_formula(f))
            }
            Formula::Imp(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::Exists(block, body) | Formula::Forall(block, body) => {
                if block.len() >= self.arity_bound {
                    return Err(SortError::BlockBound {
                        size: block.len(),
                        bound: self.arity_bound,
                    });
                }
                let mut seen = BTreeSet::new();
                for v in block {
                    self.check_sort(&v.sort)?;
                    if !seen.insert(v.clone()) {
                        return Err(SortError::DuplicateBlockVar(v.clone()));
                    }
                }
                self.check_formula(body)
            }
        }
    }

    pub fn check_sequent(&self, s: &Sequent) -> Result<(), SortError> {
        self.check_formula(&s.antecedent)?;
        self.check_formula(&s.succedent)?;
        // re-validate the context invariant
        Sequent::new(s.antecedent.clone(), s.context.clone(), s.succedent.clone())?;
        for v in &s.context {
            self.check_sort(&v.sort)?;
        }
        Ok(())
    }
}

fn check_symbol_name(name: &str) -> Result<(), SortError> {
    if name.starts_with(FRESH_PREFIX) {
        return Err(SortError::ReservedName(name.to_string()));
    }
    Ok(())
}

/// A sort-respecting finite substitution of terms for variables.
pub type Substitution = BTreeMap<Var, Term>;

/// Checks that a substitution sends each variable to a term of its sort.
pub fn check_substitution(sig: &Signature, sub: &Substitution) -> Result<(), SortError> {
    for (v, t) in sub {
        let got = sig.sort_of(t)?;
        if got != v.sort {
            return Err(SortError::SortMismatch {
                symbol: v.name.clone(),
                expected: v.sort.clone(),
                got,
            });
        }
    }
    Ok(())
}

pub fn substitute_term(t: &Term, sub: &Substitution) -> Term {
    match t {
        Term::Var(v) => sub.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => {
            Term::App(f.clone(), args.iter().map(|a| substitute_term(a, sub)).collect())
        }
    }
}

/// Capture-avoiding substitution. Bound variables that would capture a
/// variable of the substitution range are renamed into the reserved `_`
/// namespace, picking the first unused `_name<k>`.
pub fn substitute(phi: &Formula, sub: &Substitution) -> Formula {
    if sub.is_empty() {
        return phi.clone();
    }
    match phi {
        Formula::True | Formula::False => phi.clone(),
        Formula::Atom(r, args) => {
            Formula::Atom(r.clone(), args.iter().map(|t| substitute_term(t, sub)).collect())
        }
        Formula::Eq(s, t) => Formula::Eq(substitute_term(s, sub), substitute_term(t, sub)),
        Formula::And(fs) => Formula::And(fs.iter().map(|f| substitute(f, sub)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|f| substitute(f, sub)).collect()),
        Formula::Imp(a, b) => Formula::imp(substitute(a, sub), substitute(b, sub)),
        Formula::Exists(block, body) => {
            let (block, body) = substitute_under_binder(block, body, sub);
            Formula::Exists(block, Box::new(body))
        }
        Formula::Forall(block, body) => {
            let (block, body) = substitute_under_binder(block, body, sub);
            Formula::Forall(block, Box::new(body))
        }
    }
}

fn substitute_under_binder(
    block: &[Var],
    body: &Formula,
    sub: &Substitution,
) -> (Vec<Var>, Formula) {
    // Only the part of the substitution touching free occurrences matters.
    let mut inner: Substitution = sub
        .iter()
        .filter(|(v, _)| !block.contains(v))
        .map(|(v, t)| (v.clone(), t.clone()))
        .collect();
    let body_free = body.free_vars();
    inner.retain(|v, _| body_free.contains(v));
    if inner.is_empty() {
        return (block.to_vec(), body.clone());
    }

    // Variables we must not collide with when renaming a bound variable.
    let mut avoid: BTreeSet<Var> = body_free.clone();
    for t in inner.values() {
        avoid.extend(t.free_vars());
    }
    avoid.extend(inner.keys().cloned());
    avoid.extend(block.iter().cloned());

    let range_vars: BTreeSet<Var> =
        inner.values().flat_map(|t| t.free_vars()).collect();

    let mut new_block = Vec::with_capacity(block.len());
    for v in block {
        if range_vars.contains(v) {
            let fresh = fresh_var(v, &avoid);
            avoid.insert(fresh.clone());
            inner.insert(v.clone(), Term::Var(fresh.clone()));
            new_block.push(fresh);
        } else {
            new_block.push(v.clone());
        }
    }
    (new_block, substitute(body, &inner))
}

/// First `_base<k>` (k = 1, 2, ...) of the same sort not in `avoid`.
pub fn fresh_var(base: &Var, avoid: &BTreeSet<Var>) -> Var {
    let stem: String = base.name.trim_start_matches(FRESH_PREFIX).to_string();
    let stem: String = stem
        .chars()
        .take_while(|c| !c.is_ascii_digit())
        .collect();
    let stem = if stem.is_empty() { "v".to_string() } else { stem };
    for k in 1.. {
        let candidate = Var::new(format!("{FRESH_PREFIX}{stem}{k}"), base.sort.clone());
        if !avoid.contains(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        let mut s = Signature::with_defaults();
        s.add_sort("S").unwrap();
        s.add_relation("P", vec!["S".into()]).unwrap();
        s.add_relation("R", vec!["S".into(), "S".into()]).unwrap();
        s.add_constant("c", "S").unwrap();
        s
    }

    fn x() -> Var {
        Var::new("x", "S")
    }

    fn y() -> Var {
        Var::new("y", "S")
    }

    #[test]
    fn free_vars_truth_is_empty() {
        assert!(Formula::True.free_vars().is_empty());
    }

    #[test]
    fn free_vars_atom() {
        let phi = Formula::Atom("R".into(), vec![Term::Var(x()), Term::constant("c")]);
        assert_eq!(phi.free_vars().into_iter().collect::<Vec<_>>(), vec![x()]);
    }

    #[test]
    fn free_vars_mixed_binders() {
        // all x R(x,y) -> P(y) has exactly y free
        let phi = Formula::imp(
            Formula::forall(
                vec![x()],
                Formula::Atom("R".into(), vec![Term::Var(x()), Term::Var(y())]),
            ),
            Formula::Atom("P".into(), vec![Term::Var(y())]),
        );
        assert_eq!(phi.free_vars().into_iter().collect::<Vec<_>>(), vec![y()]);
    }

    #[test]
    fn substitute_atom() {
        let phi = Formula::Atom("P".into(), vec![Term::Var(x())]);
        let sub: Substitution = [(x(), Term::constant("c"))].into();
        assert_eq!(
            substitute(&phi, &sub),
            Formula::Atom("P".into(), vec![Term::constant("c")])
        );
    }

    #[test]
    fn substitute_bound_occurrence_unchanged() {
        let phi = Formula::exists(vec![y()], Formula::Atom("P".into(), vec![Term::Var(y())]));
        let sub: Substitution = [(y(), Term::constant("c"))].into();
        assert_eq!(substitute(&phi, &sub), phi);
    }

    #[test]
    fn substitute_renames_on_capture() {
        // ex y R(x,y) [x -> y]  ==>  ex _y1 R(y,_y1)
        let phi = Formula::exists(
            vec![y()],
            Formula::Atom("R".into(), vec![Term::Var(x()), Term::Var(y())]),
        );
        let sub: Substitution = [(x(), Term::Var(y()))].into();
        let got = substitute(&phi, &sub);
        let fresh = Var::new("_y1", "S");
        let expected = Formula::exists(
            vec![fresh.clone()],
            Formula::Atom("R".into(), vec![Term::Var(y()), Term::Var(fresh)]),
        );
        assert_eq!(got, expected);
        // free-variable oracle: FV(result) == (FV(phi) \ dom) ∪ FV(range)
        assert_eq!(got.free_vars().into_iter().collect::<Vec<_>>(), vec![y()]);
    }

    #[test]
    fn substitution_sort_checked() {
        let mut s = sig();
        s.add_sort("T").unwrap();
        s.add_constant("k", "T").unwrap();
        let sub: Substitution = [(x(), Term::constant("k"))].into();
        assert!(check_substitution(&s, &sub).is_err());
    }

    #[test]
    fn sequent_context_must_cover() {
        let phi = Formula::Atom("P".into(), vec![Term::Var(x())]);
        assert!(Sequent::new(phi.clone(), vec![], phi.clone()).is_err());
        assert!(Sequent::new(phi.clone(), vec![x()], phi).is_ok());
    }

    #[test]
    fn well_sorted_checks_widths() {
        let s = Signature::new(4, 2);
        let wide = Formula::And(vec![Formula::True, Formula::True, Formula::True]);
        assert!(matches!(s.check_formula(&wide), Err(SortError::WidthBound { .. })));
    }

    #[test]
    fn reserved_prefix_rejected_for_symbols() {
        let mut s = Signature::with_defaults();
        assert!(matches!(s.add_sort("_S"), Err(SortError::ReservedName(_))));
    }

    #[test]
    fn alpha_eq_detects_renaming() {
        let a = Formula::exists(vec![x()], Formula::Atom("P".into(), vec![Term::Var(x())]));
        let b = Formula::exists(vec![y()], Formula::Atom("P".into(), vec![Term::Var(y())]));
        assert!(a.alpha_eq(&b));
        assert_ne!(a, b);
    }
}
