//! Decidable desk-scale coherent fragment under domain-closed semantics:
//! quantifiers range over the named constants, which makes entailment
//! decidable by two independent routes (model enumeration and forward
//! chaining with disjunction splitting). On top of that sit Lindenbaum
//! lattices with designated joins, term-model countermodels read off prime
//! filters, the Morley-style predicate translation of full first-order
//! theories, the canonical Kripke model over Herbrand worlds, and the
//! disjunction/existence property checks.
//!
//! Equality is syntactic identity of constants by default; the optional
//! congruence mode treats asserted equalities as a partition of the
//! constants.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::resource::{Budget, Exhausted};
use crate::syntax::{Formula, Sequent, Signature, SortError, Term, Theory, Var};

mod chase;
mod ipc;
mod lindenbaum;
mod morley;

pub use chase::entails_by_chase;
pub use lindenbaum::{lindenbaum, Lindenbaum};
pub use morley::{
    canonical_kripke, countermodel, disjunction_property, existence_property, morley_canonical,
    morley_correspondence, morleyize, provable_ik, CountermodelOutcome, Fragment,
    KripkeCertificate, MorleyCanonical, MorleyTheory, PropertyOutcome, ProvableOutcome,
};

/// True iff the formula avoids implication and universal quantification.
pub fn is_coherent(phi: &Formula) -> bool {
    match phi {
        Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => true,
        Formula::And(fs) | Formula::Or(fs) => fs.iter().all(is_coherent),
        Formula::Imp(..) | Formula::Forall(..) => false,
        Formula::Exists(_, body) => is_coherent(body),
    }
}

pub fn is_coherent_sequent(s: &Sequent) -> bool {
    is_coherent(&s.antecedent) && is_coherent(&s.succedent)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SaturateError {
    #[error("axiom `{0}` is not coherent")]
    NonCoherent(String),
    #[error("signature has a proper function symbol `{0}`; only constants are supported")]
    ProperFunction(String),
    #[error("ground atom universe has {atoms} atoms, over the bound {bound}")]
    UniverseTooLarge { atoms: usize, bound: usize },
    #[error("{0}")]
    Resource(#[from] Exhausted),
    #[error("entailment oracles disagree on `{sequent}`: enumeration={enumeration}, chase={chase}")]
    OracleDisagreement { sequent: String, enumeration: bool, chase: bool },
    #[error("{0}")]
    Sort(#[from] SortError),
    #[error("countermodel failed re-verification: {0}")]
    BadCountermodel(String),
    #[error("property violated: {0}")]
    PropertyFailure(String),
    #[error("sequent `{0}` is outside the coherent fragment")]
    NotCoherentSequent(String),
    #[error("{0}")]
    Lattice(#[from] crate::lattice::LatticeError),
}

/// How equality of constants is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EqMode {
    #[default]
    Syntactic,
    Congruence,
}

/// A coherent theory over a constants-only signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentTheory {
    theory: Theory,
}

impl CoherentTheory {
    pub fn new(theory: Theory) -> Result<Self, SaturateError> {
        for (f, args, _) in theory.signature.functions() {
            if !args.is_empty() {
                return Err(SaturateError::ProperFunction(f.to_string()));
            }
        }
        for (name, ax) in &theory.axioms {
            if !is_coherent_sequent(ax) {
                return Err(SaturateError::NonCoherent(name.clone()));
            }
        }
        Ok(CoherentTheory { theory })
    }

    pub fn signature(&self) -> &Signature {
        &self.theory.signature
    }

    pub fn axioms(&self) -> &[(String, Sequent)] {
        &self.theory.axioms
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }
}

/// The ground relational atoms over a constants-only signature, in a fixed
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomUniverse {
    atoms: Vec<(String, Vec<String>)>,
    index: BTreeMap<(String, Vec<String>), usize>,
}

pub const MAX_UNIVERSE_ATOMS: usize = 22;

impl AtomUniverse {
    pub fn new(sig: &Signature) -> Result<Self, SaturateError> {
        let mut atoms = Vec::new();
        for (r, arg_sorts) in sig.relations() {
            let mut tuples = vec![Vec::new()];
            for s in arg_sorts {
                let consts = sig.constants_of(s);
                let mut next = Vec::with_capacity(tuples.len() * consts.len());
                for t in &tuples {
                    for c in &consts {
                        let mut t2: Vec<String> = t.clone();
                        t2.push(c.clone());
                        next.push(t2);
                    }
                }
                tuples = next;
            }
            for t in tuples {
                atoms.push((r.to_string(), t));
            }
        }
        if atoms.len() > MAX_UNIVERSE_ATOMS {
            return Err(SaturateError::UniverseTooLarge {
                atoms: atoms.len(),
                bound: MAX_UNIVERSE_ATOMS,
            });
        }
        let index = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        Ok(AtomUniverse { atoms, index })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, i: usize) -> &(String, Vec<String>) {
        &self.atoms[i]
    }

    pub fn index_of(&self, rel: &str, tuple: &[String]) -> Option<usize> {
        self.index.get(&(rel.to_string(), tuple.to_vec())).copied()
    }
}

/// A classical set-valued structure on the constants: a set of ground
/// atoms, plus a partition of the constants in congruence mode (the
/// identity partition otherwise). Atom tuples are stored with canonical
/// representatives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HerbrandModel {
    pub atoms: BTreeSet<(String, Vec<String>)>,
    pub classes: BTreeMap<String, String>,
}

impl HerbrandModel {
    pub fn new(atoms: BTreeSet<(String, Vec<String>)>) -> Self {
        HerbrandModel { atoms, classes: BTreeMap::new() }
    }

    pub fn with_classes(
        atoms: BTreeSet<(String, Vec<String>)>,
        classes: BTreeMap<String, String>,
    ) -> Self {
        let canon = |c: &String| classes.get(c).cloned().unwrap_or_else(|| c.clone());
        let atoms = atoms
            .into_iter()
            .map(|(r, t)| (r, t.iter().map(&canon).collect()))
            .collect();
        HerbrandModel { atoms, classes }
    }

    pub fn canon<'a>(&'a self, c: &'a str) -> &'a str {
        self.classes.get(c).map(|s| s.as_str()).unwrap_or(c)
    }

    fn eval_term<'a>(&'a self, env: &'a BTreeMap<Var, String>, t: &'a Term) -> &'a str {
        match t {
            Term::Var(v) => self.canon(&env[v]),
            Term::App(c, args) => {
                debug_assert!(args.is_empty(), "constants-only evaluation");
                self.canon(c)
            }
        }
    }

    /// Classical satisfaction with quantifiers ranging over the constants.
    pub fn eval(
        &self,
        sig: &Signature,
        env: &BTreeMap<Var, String>,
        phi: &Formula,
    ) -> bool {
        match phi {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(r, args) => {
                let tuple: Vec<String> =
                    args.iter().map(|t| self.eval_term(env, t).to_string()).collect();
                self.atoms.contains(&(r.clone(), tuple))
            }
            Formula::Eq(s, t) => self.eval_term(env, s) == self.eval_term(env, t),
            Formula::And(fs) => fs.iter().all(|f| self.eval(sig, env, f)),
            Formula::Or(fs) => fs.iter().any(|f| self.eval(sig, env, f)),
            Formula::Imp(a, b) => !self.eval(sig, env, a) || self.eval(sig, env, b),
            Formula::Exists(block, body) => assignments(sig, block)
                .into_iter()
                .any(|ext| {
                    let mut env2 = env.clone();
                    env2.extend(ext);
                    self.eval(sig, &env2, body)
                }),
            Formula::Forall(block, body) => assignments(sig, block)
                .into_iter()
                .all(|ext| {
                    let mut env2 = env.clone();
                    env2.extend(ext);
                    self.eval(sig, &env2, body)
                }),
        }
    }

    pub fn satisfies_sequent(&self, sig: &Signature, s: &Sequent) -> bool {
        assignments(sig, &s.context).into_iter().all(|env| {
            !self.eval(sig, &env, &s.antecedent) || self.eval(sig, &env, &s.succedent)
        })
    }

    pub fn satisfies_theory(&self, t: &CoherentTheory) -> bool {
        t.axioms().iter().all(|(_, ax)| self.satisfies_sequent(t.signature(), ax))
    }
}

/// All assignments of the block variables to constants of their sorts.
pub fn assignments(sig: &Signature, block: &[Var]) -> Vec<BTreeMap<Var, String>> {
    let mut out = vec![BTreeMap::new()];
    for v in block {
        let consts = sig.constants_of(&v.sort);
        let mut next = Vec::with_capacity(out.len() * consts.len());
        for env in &out {
            for c in &consts {
                let mut env2 = env.clone();
                env2.insert(v.clone(), c.clone());
                next.push(env2);
            }
        }
        out = next;
    }
    out
}

/// All partitions of the constants (per sort) as representative maps, the
/// identity partition first.
fn all_partitions(sig: &Signature) -> Vec<BTreeMap<String, String>> {
    let mut out: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for sort in sig.sorts() {
        let consts = sig.constants_of(sort);
        // set partitions by assigning each constant to an existing block
        // or a fresh one
        let mut sort_parts: Vec<Vec<Vec<String>>> = vec![Vec::new()];
        for c in &consts {
            let mut next = Vec::new();
            for part in &sort_parts {
                for (i, _) in part.iter().enumerate() {
                    let mut p2 = part.clone();
                    p2[i].push(c.clone());
                    next.push(p2);
                }
                let mut p2 = part.clone();
                p2.push(vec![c.clone()]);
                next.push(p2);
            }
            sort_parts = next;
        }
        let mut combined = Vec::with_capacity(out.len() * sort_parts.len());
        for base in &out {
            for part in &sort_parts {
                let mut m = base.clone();
                for block in part {
                    let rep = block.iter().min().unwrap().clone();
                    for c in block {
                        m.insert(c.clone(), rep.clone());
                    }
                }
                combined.push(m);
            }
        }
        out = combined;
    }
    // identity partition (every class a singleton) sorts first
    out.sort_by_key(|m| {
        let merged = m.iter().filter(|(c, r)| c != r).count();
        (merged, m.clone())
    });
    out
}

/// All Herbrand models of the theory, by enumeration of atom subsets
/// (and of constant partitions in congruence mode).
pub fn all_models(
    t: &CoherentTheory,
    mode: EqMode,
    budget: &Budget,
) -> Result<Vec<HerbrandModel>, SaturateError> {
    let sig = t.signature();
    let universe = AtomUniverse::new(sig)?;
    let n = universe.len();
    let partitions = match mode {
        EqMode::Syntactic => vec![BTreeMap::new()],
        EqMode::Congruence => all_partitions(sig),
    };
    let mut out = Vec::new();
    for classes in partitions {
        // quotient atoms: distinct canonical tuples
        let canon = |c: &String| classes.get(c).cloned().unwrap_or_else(|| c.clone());
        let mut quotient: Vec<usize> = Vec::new();
        let mut seen = BTreeSet::new();
        for i in 0..n {
            let (r, tup) = universe.atom(i);
            let key = (r.clone(), tup.iter().map(&canon).collect::<Vec<_>>());
            if seen.insert(key) {
                quotient.push(i);
            }
        }
        let k = quotient.len();
        budget.charge(1u64 << k.min(60))?;
        for mask in 0u64..(1 << k) {
            let atoms: BTreeSet<(String, Vec<String>)> = (0..k)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| universe.atom(quotient[i]).clone())
                .collect();
            let m = HerbrandModel::with_classes(atoms, classes.clone());
            if m.satisfies_theory(t) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// Entailment by model enumeration: true iff every Herbrand model of the
/// theory satisfies the sequent.
pub fn entails_by_enumeration(
    t: &CoherentTheory,
    s: &Sequent,
    mode: EqMode,
    budget: &Budget,
) -> Result<bool, SaturateError> {
    require_coherent(s)?;
    for m in all_models(t, mode, budget)? {
        if !m.satisfies_sequent(t.signature(), s) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_coherent(s: &Sequent) -> Result<(), SaturateError> {
    if !is_coherent_sequent(s) {
        return Err(SaturateError::NotCoherentSequent(s.to_string()));
    }
    Ok(())
}

/// Semantic entailment, computed by forward chaining and, whenever the
/// ground universe is small enough to enumerate, cross-checked against
/// model enumeration. A disagreement is a hard error.
pub fn entails(
    t: &CoherentTheory,
    s: &Sequent,
    mode: EqMode,
    budget: &Budget,
) -> Result<bool, SaturateError> {
    require_coherent(s)?;
    let chase = entails_by_chase(t, s, mode, budget)?;
    let universe = AtomUniverse::new(t.signature())?;
    if universe.len() <= 16 {
        let enumeration = entails_by_enumeration(t, s, mode, budget)?;
        if enumeration != chase {
            return Err(SaturateError::OracleDisagreement {
                sequent: s.to_string(),
                enumeration,
                chase,
            });
        }
    }
    Ok(chase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent, parse_signature, parse_theory};

    fn sig() -> Signature {
        parse_signature("sort S\nrel P : S\nrel Q : S\nconst c : S\n").unwrap()
    }

    pub(crate) fn theory(text: &str) -> CoherentTheory {
        CoherentTheory::new(parse_theory(text).unwrap()).unwrap()
    }

    #[test]
    fn coherence_judgments() {
        let s = sig();
        assert!(is_coherent(&parse_formula("or(P(c), Q(c))", &s).unwrap()));
        assert!(!is_coherent(&parse_formula("imp(P(c), Q(c))", &s).unwrap()));
        assert!(is_coherent(&parse_formula("ex([x:S], and(P(x), true))", &s).unwrap()));
        assert!(!is_coherent(&parse_formula("all([x:S], P(x))", &s).unwrap()));
    }

    #[test]
    fn non_coherent_axiom_rejected() {
        let t = parse_theory("rel P : S\nconst c : S\nax: true |- [] imp(P(c), P(c))\n").unwrap();
        assert!(matches!(CoherentTheory::new(t), Err(SaturateError::NonCoherent(_))));
    }

    #[test]
    fn enumeration_on_split_theory() {
        // or-axiom plus a killer for one disjunct entails the other
        let t = theory(
            "rel P : S\nrel Q : S\nconst c : S\n\
             split: true |- [] or(P(c), Q(c))\n\
             noq: Q(c) |- [] false\n",
        );
        let budget = Budget::default();
        let goal = parse_sequent("true |- [] P(c)", t.signature()).unwrap();
        assert!(entails_by_enumeration(&t, &goal, EqMode::Syntactic, &budget).unwrap());
    }

    #[test]
    fn enumeration_finds_refuting_model() {
        let t = theory(
            "rel P : S\nrel Q : S\nconst c : S\nsplit: true |- [] or(P(c), Q(c))\n",
        );
        let budget = Budget::default();
        let goal = parse_sequent("true |- [] P(c)", t.signature()).unwrap();
        assert!(!entails_by_enumeration(&t, &goal, EqMode::Syntactic, &budget).unwrap());
        // the refuting model {Q(c)} is among the enumerated models
        let models = all_models(&t, EqMode::Syntactic, &budget).unwrap();
        assert!(models.iter().any(|m| {
            m.atoms.contains(&("Q".to_string(), vec!["c".to_string()]))
                && !m.atoms.contains(&("P".to_string(), vec!["c".to_string()]))
        }));
    }

    #[test]
    fn identity_sequent_entailed_by_empty_theory() {
        let t = theory("rel P : S\nconst c : S\n");
        let budget = Budget::default();
        let goal = parse_sequent("P(c) |- [] P(c)", t.signature()).unwrap();
        assert!(entails(&t, &goal, EqMode::Syntactic, &budget).unwrap());
    }

    #[test]
    fn congruence_mode_merges_constants() {
        let t = theory(
            "rel P : S\nconst c : S\nconst d : S\n\
             eqcd: true |- [] eq(c, d)\n\
             pc: true |- [] P(c)\n",
        );
        let budget = Budget::default();
        let goal = parse_sequent("true |- [] P(d)", t.signature()).unwrap();
        // entailed with congruence, vacuously true with syntactic identity
        // (no syntactic model satisfies eq(c,d))
        assert!(entails_by_enumeration(&t, &goal, EqMode::Congruence, &budget).unwrap());
        assert!(entails_by_enumeration(&t, &goal, EqMode::Syntactic, &budget).unwrap());
        let models = all_models(&t, EqMode::Congruence, &budget).unwrap();
        assert!(!models.is_empty());
        assert!(all_models(&t, EqMode::Syntactic, &budget).unwrap().is_empty());
    }

    #[test]
    fn domain_closed_existentials() {
        let t = theory("rel P : S\nconst c : S\nwitness: true |- [] ex([x:S], P(x))\n");
        let budget = Budget::default();
        let goal = parse_sequent("true |- [] P(c)", t.signature()).unwrap();
        // with one constant, the existential forces its only instance
        assert!(entails_by_enumeration(&t, &goal, EqMode::Syntactic, &budget).unwrap());
    }
}
