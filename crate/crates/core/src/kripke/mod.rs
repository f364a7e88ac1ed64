//! Finite Kripke models and the forcing relation.
//!
//! A model is a finite poset of worlds, a first-order structure per world,
//! and a transition homomorphism for every related pair. Transitions need
//! not be injective; equality is evaluated in the current world and is then
//! persistent because transitions are functions.
//!
//! Forcing follows the standard clauses: atoms and equality by the world's
//! tables, wide conjunction/disjunction pointwise, implication and universal
//! quantification over all future worlds (with the environment transported
//! along the transition), existential quantification witnessed in the
//! current world.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::calculus::RuleInstance;
use crate::syntax::{Formula, Sequent, Signature, Term, Var};

mod file;
pub mod generate;

pub use file::{parse_model, write_model, ModelFileError};

/// One world's structure: domains, relation tables, function tables.
/// Elements are indices into the per-sort domain; `domains` holds their
/// display names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    pub name: String,
    pub domains: BTreeMap<String, Vec<String>>,
    pub relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
    pub functions: BTreeMap<String, BTreeMap<Vec<usize>, usize>>,
}

impl World {
    pub fn domain_size(&self, sort: &str) -> usize {
        self.domains.get(sort).map(|d| d.len()).unwrap_or(0)
    }
}

/// Transition maps for one related pair, per sort.
pub type Transition = BTreeMap<String, Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub signature: Signature,
    pub worlds: Vec<World>,
    /// Reflexive-transitive order as an adjacency matrix.
    pub leq: Vec<Vec<bool>>,
    /// Transition maps for every strictly related pair.
    pub transitions: BTreeMap<(usize, usize), Transition>,
}

/// Assignment of domain elements to typed variables, at some world.
pub type Environment = BTreeMap<Var, usize>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("order not reflexive at world `{0}`")]
    NotReflexive(String),
    #[error("order not antisymmetric between `{0}` and `{1}`")]
    NotAntisymmetric(String, String),
    #[error("order not transitive via `{0}` <= `{1}` <= `{2}`")]
    NotTransitive(String, String, String),
    #[error("missing transition map for `{from}` <= `{to}` on sort `{sort}`")]
    MissingTransition { from: String, to: String, sort: String },
    #[error("transition for `{from}` <= `{to}` on sort `{sort}` is not well-formed")]
    BadTransition { from: String, to: String, sort: String },
    #[error("transition for reflexive pair at `{0}` must be the identity")]
    NotIdentity(String),
    #[error("transitions do not compose along `{from}` <= `{via}` <= `{to}` on sort `{sort}`")]
    CompositionMismatch { from: String, via: String, to: String, sort: String },
    #[error("relation `{rel}` not preserved from `{from}` to `{to}`")]
    RelationNotPreserved { rel: String, from: String, to: String },
    #[error("function `{func}` does not commute with the transition from `{from}` to `{to}`")]
    FunctionNotCommuting { func: String, from: String, to: String },
    #[error("world `{world}`: function `{func}` is not total or out of range")]
    BadFunction { world: String, func: String },
    #[error("world `{world}`: relation `{rel}` has a malformed tuple")]
    BadRelation { world: String, rel: String },
    #[error("world `{world}`: missing table for `{symbol}`")]
    MissingTable { world: String, symbol: String },
    #[error("world `{world}`: missing domain for sort `{sort}`")]
    MissingDomain { world: String, sort: String },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ForceError {
    #[error("environment misses variable `{0}`")]
    MissingVar(Var),
    #[error("unknown symbol `{0}` during evaluation")]
    UnknownSymbol(String),
}

impl KripkeModel {
    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w.name == name)
    }

    pub fn le(&self, w1: usize, w2: usize) -> bool {
        self.leq[w1][w2]
    }

    /// Image of element `e` of `sort` along the transition `from <= to`.
    pub fn transport(&self, from: usize, to: usize, sort: &str, e: usize) -> usize {
        if from == to {
            return e;
        }
        self.transitions[&(from, to)][sort][e]
    }

    pub fn transport_env(&self, from: usize, to: usize, env: &Environment) -> Environment {
        env.iter()
            .map(|(v, &e)| (v.clone(), self.transport(from, to, &v.sort, e)))
            .collect()
    }

    /// Checks every structural invariant; reports the first violation.
    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.worlds.len();
        let name = |i: usize| self.worlds[i].name.clone();
        for i in 0..n {
            if !self.leq[i][i] {
                return Err(ModelError::NotReflexive(name(i)));
            }
            for j in 0..n {
                if i != j && self.leq[i][j] && self.leq[j][i] {
                    return Err(ModelError::NotAntisymmetric(name(i), name(j)));
                }
                for k in 0..n {
                    if self.leq[i][j] && self.leq[j][k] && !self.leq[i][k] {
                        return Err(ModelError::NotTransitive(name(i), name(j), name(k)));
                    }
                }
            }
        }
        // per-world structure
        for w in &self.worlds {
            for s in self.signature.sorts() {
                if !w.domains.contains_key(s) {
                    return Err(ModelError::MissingDomain { world: w.name.clone(), sort: s.clone() });
                }
            }
            for (r, arg_sorts) in self.signature.relations() {
                let Some(table) = w.relations.get(r) else {
                    return Err(ModelError::MissingTable { world: w.name.clone(), symbol: r.to_string() });
                };
                for tuple in table {
                    if tuple.len() != arg_sorts.len()
                        || tuple.iter().zip(arg_sorts).any(|(&e, s)| e >= w.domain_size(s))
                    {
                        return Err(ModelError::BadRelation { world: w.name.clone(), rel: r.to_string() });
                    }
                }
            }
            for (f, arg_sorts, result) in self.signature.functions() {
                let Some(table) = w.functions.get(f) else {
                    return Err(ModelError::MissingTable { world: w.name.clone(), symbol: f.to_string() });
                };
                let mut expected = 1usize;
                for s in arg_sorts {
                    expected = expected.saturating_mul(w.domain_size(s));
                }
                if table.len() != expected {
                    return Err(ModelError::BadFunction { world: w.name.clone(), func: f.to_string() });
                }
                for (args, &val) in table {
                    let ok = args.len() == arg_sorts.len()
                        && args.iter().zip(arg_sorts).all(|(&e, s)| e < w.domain_size(s))
                        && val < w.domain_size(result);
                    if !ok {
                        return Err(ModelError::BadFunction { world: w.name.clone(), func: f.to_string() });
                    }
                }
            }
        }
        // transitions
        for i in 0..n {
            for j in 0..n {
                if !self.leq[i][j] {
                    continue;
                }
                if i == j {
                    if let Some(t) = self.transitions.get(&(i, i)) {
                        for (sort, map) in t {
                            let sz = self.worlds[i].domain_size(sort);
                            if map.len() != sz || map.iter().enumerate().any(|(a, &b)| a != b) {
                                return Err(ModelError::NotIdentity(name(i)));
                            }
                        }
                    }
                    continue;
                }
                let Some(t) = self.transitions.get(&(i, j)) else {
                    return Err(ModelError::MissingTransition {
                        from: name(i),
                        to: name(j),
                        sort: String::new(),
                    });
                };
                for s in self.signature.sorts() {
                    let Some(map) = t.get(s) else {
                        return Err(ModelError::MissingTransition { from: name(i), to: name(j), sort: s.clone() });
                    };
                    if map.len() != self.worlds[i].domain_size(s)
                        || map.iter().any(|&e| e >= self.worlds[j].domain_size(s))
                    {
                        return Err(ModelError::BadTransition { from: name(i), to: name(j), sort: s.clone() });
                    }
                }
                // structure preservation
                for (r, _) in self.signature.relations() {
                    for tuple in &self.worlds[i].relations[r] {
                        let arg_sorts = self.signature.relation(r).unwrap();
                        let mapped: Vec<usize> = tuple
                            .iter()
                            .zip(arg_sorts)
                            .map(|(&e, s)| t[s][e])
                            .collect();
                        if !self.worlds[j].relations[r].contains(&mapped) {
                            return Err(ModelError::RelationNotPreserved {
                                rel: r.to_string(),
                                from: name(i),
                                to: name(j),
                            });
                        }
                    }
                }
                for (f, arg_sorts, result) in self.signature.functions() {
                    for (args, &val) in &self.worlds[i].functions[f] {
                        let mapped_args: Vec<usize> = args
                            .iter()
                            .zip(arg_sorts)
                            .map(|(&e, s)| t[s][e])
                            .collect();
                        let there = self.worlds[j].functions[f].get(&mapped_args).copied();
                        if there != Some(t[result][val]) {
                            return Err(ModelError::FunctionNotCommuting {
                                func: f.to_string(),
                                from: name(i),
                                to: name(j),
                            });
                        }
                    }
                }
            }
        }
        // composition
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || !self.leq[i][j] || !self.leq[j][k] {
                        continue;
                    }
                    for s in self.signature.sorts() {
                        for e in 0..self.worlds[i].domain_size(s) {
                            let direct = self.transport(i, k, s, e);
                            let via = self.transport(j, k, s, self.transport(i, j, s, e));
                            if direct != via {
                                return Err(ModelError::CompositionMismatch {
                                    from: name(i),
                                    via: name(j),
                                    to: name(k),
                                    sort: s.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn eval_term(&self, w: usize, env: &Environment, t: &Term) -> Result<usize, ForceError> {
        match t {
            Term::Var(v) => env.get(v).copied().ok_or_else(|| ForceError::MissingVar(v.clone())),
            Term::App(f, args) => {
                let vals: Result<Vec<usize>, _> =
                    args.iter().map(|a| self.eval_term(w, env, a)).collect();
                self.worlds[w]
                    .functions
                    .get(f)
                    .and_then(|table| table.get(&vals.ok()?).copied())
                    .ok_or_else(|| ForceError::UnknownSymbol(f.clone()))
            }
        }
    }

    /// Forcing at a world under an environment covering the free variables.
    pub fn force(&self, w: usize, env: &Environment, phi: &Formula) -> Result<bool, ForceError> {
        match phi {
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Atom(r, args) => {
                let vals: Result<Vec<usize>, _> =
                    args.iter().map(|a| self.eval_term(w, env, a)).collect();
                let table = self.worlds[w]
                    .relations
                    .get(r)
                    .ok_or_else(|| ForceError::UnknownSymbol(r.clone()))?;
                Ok(table.contains(&vals?))
            }
            Formula::Eq(s, t) => {
                Ok(self.eval_term(w, env, s)? == self.eval_term(w, env, t)?)
            }
            Formula::And(fs) => {
                for f in fs {
                    if !self.force(w, env, f)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or(fs) => {
                for f in fs {
                    if self.force(w, env, f)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Imp(a, b) => {
                for w2 in 0..self.worlds.len() {
                    if !self.leq[w][w2] {
                        continue;
                    }
                    let env2 = self.transport_env(w, w2, env);
                    if self.force(w2, &env2, a)? && !self.force(w2, &env2, b)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Forall(block, body) => {
                for w2 in 0..self.worlds.len() {
                    if !self.leq[w][w2] {
                        continue;
                    }
                    let env2 = self.transport_env(w, w2, env);
                    for ext in self.assignments(w2, block) {
                        let mut env3 = env2.clone();
                        env3.extend(ext);
                        if !self.force(w2, &env3, body)? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Formula::Exists(block, body) => {
                for ext in self.assignments(w, block) {
                    let mut env2 = env.clone();
                    env2.extend(ext);
                    if self.force(w, &env2, body)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// All assignments of a variable block into a world's domains.
    pub fn assignments(&self, w: usize, block: &[Var]) -> Vec<Environment> {
        let mut out = vec![Environment::new()];
        for v in block {
            let size = self.worlds[w].domain_size(&v.sort);
            let mut next = Vec::with_capacity(out.len() * size);
            for env in &out {
                for e in 0..size {
                    let mut env2 = env.clone();
                    env2.insert(v.clone(), e);
                    next.push(env2);
                }
            }
            out = next;
        }
        out
    }

    /// True iff the sequent holds: at every world, every environment over
    /// the context forcing the antecedent also forces the succedent.
    pub fn holds_sequent(&self, s: &Sequent) -> Result<bool, ForceError> {
        Ok(self.sequent_counterexample(s)?.is_none())
    }

    /// A world and environment where the sequent fails, if any.
    pub fn sequent_counterexample(
        &self,
        s: &Sequent,
    ) -> Result<Option<(usize, Environment)>, ForceError> {
        for w in 0..self.worlds.len() {
            for env in self.assignments(w, &s.context) {
                if self.force(w, &env, &s.antecedent)? && !self.force(w, &env, &s.succedent)? {
                    return Ok(Some((w, env)));
                }
            }
        }
        Ok(None)
    }
}

/// Result of testing one rule application against one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SoundnessOutcome {
    /// Premises held and the conclusion held.
    Engaged,
    /// Some premise failed, so the instance says nothing about this model.
    Vacuous,
    /// Premises held but the conclusion failed: a soundness violation.
    Violation { world: usize, env: Environment },
}

/// If every premise of the instance holds in the model, the conclusion must
/// hold too; reports the counterexample world and environment otherwise.
pub fn check_soundness(
    model: &KripkeModel,
    instance: &RuleInstance,
) -> Result<SoundnessOutcome, ForceError> {
    for p in &instance.premises {
        if !model.holds_sequent(p)? {
            return Ok(SoundnessOutcome::Vacuous);
        }
    }
    match model.sequent_counterexample(&instance.conclusion)? {
        None => Ok(SoundnessOutcome::Engaged),
        Some((world, env)) => Ok(SoundnessOutcome::Violation { world, env }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent, parse_signature};

    fn sig() -> Signature {
        parse_signature("sort S\nrel P : S\nconst c : S\n").unwrap()
    }

    /// Two-world chain w0 <= w1 over one element; P empty at w0, full at w1.
    fn chain_model() -> KripkeModel {
        let s = sig();
        let mk_world = |name: &str, p_full: bool| World {
            name: name.to_string(),
            domains: [("S".to_string(), vec!["a".to_string()])].into(),
            relations: [(
                "P".to_string(),
                if p_full { BTreeSet::from([vec![0]]) } else { BTreeSet::new() },
            )]
            .into(),
            functions: [("c".to_string(), BTreeMap::from([(vec![], 0)]))].into(),
        };
        KripkeModel {
            signature: s,
            worlds: vec![mk_world("w0", false), mk_world("w1", true)],
            leq: vec![vec![true, true], vec![false, true]],
            transitions: [((0, 1), BTreeMap::from([("S".to_string(), vec![0])]))].into(),
        }
    }

    #[test]
    fn chain_model_validates() {
        assert_eq!(chain_model().validate(), Ok(()));
    }

    #[test]
    fn non_preserving_transition_rejected() {
        let mut m = chain_model();
        // make the atom true below and false above
        m.worlds[0].relations.get_mut("P").unwrap().insert(vec![0]);
        m.worlds[1].relations.get_mut("P").unwrap().clear();
        assert!(matches!(m.validate(), Err(ModelError::RelationNotPreserved { .. })));
    }

    #[test]
    fn falsity_never_forced() {
        let m = chain_model();
        assert_eq!(m.force(0, &Environment::new(), &Formula::False), Ok(false));
    }

    #[test]
    fn excluded_middle_fails_on_chain() {
        let m = chain_model();
        let s = sig();
        let phi = parse_formula("or(P(c), imp(P(c), false))", &s).unwrap();
        // P(c) not yet true at w0, but becomes true later, so neither
        // disjunct is forced at the root
        assert_eq!(m.force(0, &Environment::new(), &phi), Ok(false));
        assert_eq!(m.force(1, &Environment::new(), &phi), Ok(true));
    }

    #[test]
    fn sequent_holding_and_failing() {
        let m = chain_model();
        let s = sig();
        let id = parse_sequent("P(x) |- [x:S] P(x)", &s).unwrap();
        assert_eq!(m.holds_sequent(&id), Ok(true));
        let bad = parse_sequent("true |- [] P(c)", &s).unwrap();
        let cex = m.sequent_counterexample(&bad).unwrap();
        assert_eq!(cex, Some((0, Environment::new())));
    }

    #[test]
    fn eq_reflexivity_holds() {
        let m = chain_model();
        let s = sig();
        let seq = parse_sequent("true |- [x:S] eq(x,x)", &s).unwrap();
        assert_eq!(m.holds_sequent(&seq), Ok(true));
    }

    #[test]
    fn empty_domain_quantifiers() {
        let s = sig();
        let m = KripkeModel {
            signature: parse_signature("sort S\nrel P : S\n").unwrap(),
            worlds: vec![World {
                name: "w0".into(),
                domains: [("S".to_string(), vec![])].into(),
                relations: [("P".to_string(), BTreeSet::new())].into(),
                functions: BTreeMap::new(),
            }],
            leq: vec![vec![true]],
            transitions: BTreeMap::new(),
        };
        m.validate().unwrap();
        let all = parse_formula("all([x:S], P(x))", &m.signature).unwrap();
        let ex = parse_formula("ex([x:S], P(x))", &m.signature).unwrap();
        assert_eq!(m.force(0, &Environment::new(), &all), Ok(true));
        assert_eq!(m.force(0, &Environment::new(), &ex), Ok(false));
        let _ = s;
    }
}
