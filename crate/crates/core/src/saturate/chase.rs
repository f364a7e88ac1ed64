//! Entailment by forward chaining with disjunction splitting.
//!
//! To decide `T, phi |- psi` at a context assignment, the search starts
//! from the empty atom set, repeatedly picks the first axiom instance whose
//! antecedent holds and succedent fails, and branches over the minimal ways
//! of making the succedent true (adding atoms, choosing a disjunct or an
//! existential witness, merging constants in congruence mode). Saturated
//! branches are models of the theory; the sequent is entailed iff every
//! saturated branch satisfies the goal. States only grow, so the search
//! terminates; visited states are memoized.

use std::collections::{BTreeMap, BTreeSet};

use crate::resource::Budget;
use crate::syntax::{Formula, Sequent, Signature, Term, Var};

use super::{assignments, CoherentTheory, EqMode, HerbrandModel, SaturateError};

type Env = BTreeMap<Var, String>;

/// A chase state: canonical atoms plus the constant partition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    atoms: BTreeSet<(String, Vec<String>)>,
    classes: BTreeMap<String, String>,
}

impl State {
    fn initial() -> Self {
        State { atoms: BTreeSet::new(), classes: BTreeMap::new() }
    }

    fn canon(&self, c: &str) -> String {
        self.classes.get(c).cloned().unwrap_or_else(|| c.to_string())
    }

    fn eval_term(&self, env: &Env, t: &Term) -> String {
        match t {
            Term::Var(v) => self.canon(&env[v]),
            Term::App(c, args) => {
                debug_assert!(args.is_empty());
                self.canon(c)
            }
        }
    }

    fn holds(&self, sig: &Signature, env: &Env, phi: &Formula) -> bool {
        match phi {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(r, args) => {
                let tuple: Vec<String> = args.iter().map(|t| self.eval_term(env, t)).collect();
                self.atoms.contains(&(r.clone(), tuple))
            }
            Formula::Eq(s, t) => self.eval_term(env, s) == self.eval_term(env, t),
            Formula::And(fs) => fs.iter().all(|f| self.holds(sig, env, f)),
            Formula::Or(fs) => fs.iter().any(|f| self.holds(sig, env, f)),
            Formula::Exists(block, body) => assignments(sig, block).into_iter().any(|ext| {
                let mut env2 = env.clone();
                env2.extend(ext);
                self.holds(sig, &env2, body)
            }),
            Formula::Imp(..) | Formula::Forall(..) => {
                unreachable!("chase runs on coherent formulas")
            }
        }
    }

    /// Applies a choice; returns None when an equality demand cannot be
    /// honored in syntactic mode.
    fn apply(&self, choice: &Choice, mode: EqMode) -> Option<State> {
        let mut classes = self.classes.clone();
        let canon = |classes: &BTreeMap<String, String>, c: &str| -> String {
            classes.get(c).cloned().unwrap_or_else(|| c.to_string())
        };
        for (a, b) in &choice.merges {
            let (ra, rb) = (canon(&classes, a), canon(&classes, b));
            if ra == rb {
                continue;
            }
            match mode {
                EqMode::Syntactic => return None,
                EqMode::Congruence => {
                    let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    // remap every constant pointing at `drop`
                    let all: Vec<String> = classes.keys().cloned().collect();
                    for c in all {
                        if canon(&classes, &c) == drop {
                            classes.insert(c, keep.clone());
                        }
                    }
                    classes.insert(drop, keep.clone());
                }
            }
        }
        let mut atoms: BTreeSet<(String, Vec<String>)> = self
            .atoms
            .iter()
            .map(|(r, t)| (r.clone(), t.iter().map(|c| canon(&classes, c)).collect()))
            .collect();
        for (r, t) in &choice.adds {
            atoms.insert((r.clone(), t.iter().map(|c| canon(&classes, c)).collect()));
        }
        Some(State { atoms, classes })
    }
}

/// One way of making a coherent formula true: atoms to add and constants
/// to merge.
#[derive(Debug, Clone, Default)]
struct Choice {
    adds: Vec<(String, Vec<String>)>,
    merges: Vec<(String, String)>,
}

/// The minimal ways of satisfying a coherent formula. An empty result
/// means the formula cannot be made true (a dead branch).
fn ways(sig: &Signature, state: &State, env: &Env, phi: &Formula) -> Vec<Choice> {
    match phi {
        Formula::True => vec![Choice::default()],
        Formula::False => vec![],
        Formula::Atom(r, args) => {
            let tuple: Vec<String> = args.iter().map(|t| state.eval_term(env, t)).collect();
            vec![Choice { adds: vec![(r.clone(), tuple)], merges: vec![] }]
        }
        Formula::Eq(s, t) => {
            let (a, b) = (state.eval_term(env, s), state.eval_term(env, t));
            if a == b {
                vec![Choice::default()]
            } else {
                vec![Choice { adds: vec![], merges: vec![(a, b)] }]
            }
        }
        Formula::And(fs) => {
            let mut acc = vec![Choice::default()];
            for f in fs {
                let sub = ways(sig, state, env, f);
                let mut next = Vec::with_capacity(acc.len() * sub.len());
                for c1 in &acc {
                    for c2 in &sub {
                        let mut c = c1.clone();
                        c.adds.extend(c2.adds.iter().cloned());
                        c.merges.extend(c2.merges.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
        Formula::Or(fs) => fs.iter().flat_map(|f| ways(sig, state, env, f)).collect(),
        Formula::Exists(block, body) => assignments(sig, block)
            .into_iter()
            .flat_map(|ext| {
                let mut env2 = env.clone();
                env2.extend(ext);
                ways(sig, state, &env2, body)
            })
            .collect(),
        Formula::Imp(..) | Formula::Forall(..) => {
            unreachable!("chase runs on coherent formulas")
        }
    }
}

struct Chase<'a> {
    sig: &'a Signature,
    /// (context, antecedent, succedent) instances to saturate against.
    obligations: Vec<(Env, Formula, Formula)>,
    goal_env: Env,
    goal: &'a Formula,
    mode: EqMode,
    budget: &'a Budget,
    /// state -> does some saturated descendant refute the goal?
    memo: BTreeMap<State, bool>,
    refuting: Option<State>,
}

impl Chase<'_> {
    /// True iff some saturated extension of `state` fails the goal.
    fn refutes(&mut self, state: &State) -> Result<bool, SaturateError> {
        if let Some(&r) = self.memo.get(state) {
            return Ok(r);
        }
        self.budget.charge(1)?;
        // first unsatisfied obligation
        let mut pending: Option<(Env, Formula)> = None;
        for (env, ante, succ) in &self.obligations {
            if state.holds(self.sig, env, ante) && !state.holds(self.sig, env, succ) {
                pending = Some((env.clone(), succ.clone()));
                break;
            }
        }
        let result = match pending {
            None => {
                // saturated: a model of the theory
                !state.holds(self.sig, &self.goal_env, self.goal)
            }
            Some((env, succ)) => {
                let mut found = false;
                for choice in ways(self.sig, state, &env, &succ) {
                    if let Some(next) = state.apply(&choice, self.mode) {
                        if self.refutes(&next)? {
                            found = true;
                            break;
                        }
                    }
                }
                found
            }
        };
        if result && self.refuting.is_none() {
            // remember the first refuting saturated state we bottom out in
            if !self
                .obligations
                .iter()
                .any(|(env, a, s)| state.holds(self.sig, env, a) && !state.holds(self.sig, env, s))
            {
                self.refuting = Some(state.clone());
            }
        }
        self.memo.insert(state.clone(), result);
        Ok(result)
    }
}

/// Forward-chaining entailment; also returns a refuting saturated model
/// through [`chase_countermodel`].
pub fn entails_by_chase(
    t: &CoherentTheory,
    s: &Sequent,
    mode: EqMode,
    budget: &Budget,
) -> Result<bool, SaturateError> {
    Ok(chase_refutation(t, s, mode, budget)?.is_none())
}

/// A saturated model of the theory refuting the sequent at some context
/// assignment, if one exists.
pub(crate) fn chase_refutation(
    t: &CoherentTheory,
    s: &Sequent,
    mode: EqMode,
    budget: &Budget,
) -> Result<Option<(Env, HerbrandModel)>, SaturateError> {
    super::require_coherent(s)?;
    let sig = t.signature();
    let mut obligations = Vec::new();
    for (_, ax) in t.axioms() {
        for env in assignments(sig, &ax.context) {
            obligations.push((env, ax.antecedent.clone(), ax.succedent.clone()));
        }
    }
    for goal_env in assignments(sig, &s.context) {
        // the antecedent instance becomes one more obligation to saturate
        let mut obs = obligations.clone();
        obs.push((goal_env.clone(), Formula::True, s.antecedent.clone()));
        let mut chase = Chase {
            sig,
            obligations: obs,
            goal_env: goal_env.clone(),
            goal: &s.succedent,
            mode,
            budget,
            memo: BTreeMap::new(),
            refuting: None,
        };
        if chase.refutes(&State::initial())? {
            let state = chase.refuting.expect("refutation recorded");
            let model = HerbrandModel::with_classes(state.atoms, state.classes);
            return Ok(Some((goal_env, model)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::saturate::tests::theory;
    use crate::saturate::{all_models, entails_by_enumeration};
    use crate::syntax::parse_sequent;

    #[test]
    fn chase_agrees_on_split_theory() {
        let t = theory(
            "rel P : S\nrel Q : S\nconst c : S\n\
             split: true |- [] or(P(c), Q(c))\n\
             noq: Q(c) |- [] false\n",
        );
        let budget = Budget::default();
        let goal = parse_sequent("true |- [] P(c)", t.signature()).unwrap();
        assert!(entails_by_chase(&t, &goal, EqMode::Syntactic, &budget).unwrap());
    }

    #[test]
    fn chase_finds_refutation() {
        let t = theory("rel P : S\nrel Q : S\nconst c : S\nsplit: true |- [] or(P(c), Q(c))\n");
        let budget = Budget::default();
        let goal = parse_sequent("true |- [] P(c)", t.signature()).unwrap();
        let (_, model) =
            chase_refutation(&t, &goal, EqMode::Syntactic, &budget).unwrap().unwrap();
        assert!(model.satisfies_theory(&t));
        assert!(!model.satisfies_sequent(t.signature(), &goal));
    }

    #[test]
    fn chase_handles_existential_succedents() {
        let t = theory(
            "rel P : S\nrel Q : S\nconst c : S\nconst d : S\n\
             w: true |- [] ex([x:S], P(x))\n\
             killc: P(c) |- [] false\n",
        );
        let budget = Budget::default();
        let goal = parse_sequent("true |- [] P(d)", t.signature()).unwrap();
        assert!(entails_by_chase(&t, &goal, EqMode::Syntactic, &budget).unwrap());
    }

    #[test]
    fn chase_congruence_merging() {
        let t = theory(
            "rel P : S\nconst c : S\nconst d : S\n\
             eqcd: true |- [] eq(c, d)\n\
             pc: true |- [] P(c)\n",
        );
        let budget = Budget::default();
        let goal = parse_sequent("true |- [] P(d)", t.signature()).unwrap();
        assert!(entails_by_chase(&t, &goal, EqMode::Congruence, &budget).unwrap());
        // syntactic mode: the equality axiom kills every branch, so the
        // theory is vacuously entailing
        assert!(entails_by_chase(&t, &goal, EqMode::Syntactic, &budget).unwrap());
    }

    #[test]
    fn chase_agrees_with_enumeration_on_inconsistent_theory() {
        let t = theory("rel P : S\nconst c : S\nboom: true |- [] false\n");
        let budget = Budget::default();
        let goal = parse_sequent("true |- [] P(c)", t.signature()).unwrap();
        assert!(entails_by_chase(&t, &goal, EqMode::Syntactic, &budget).unwrap());
        assert!(entails_by_enumeration(&t, &goal, EqMode::Syntactic, &budget).unwrap());
        assert!(all_models(&t, EqMode::Syntactic, &budget).unwrap().is_empty());
    }
}
