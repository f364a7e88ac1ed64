//! Predicate translation of full first-order theories into the coherent
//! fragment, the canonical Kripke model over Herbrand worlds, and the
//! decision procedure for desk-scale provability with Kripke certificates.
//!
//! Each fragment formula gets a fresh predicate over its free variables.
//! Atoms, truth constants, equality, conjunction, disjunction and
//! existentials are linked bidirectionally; implication and universal
//! quantification only get elimination axioms, which is all the coherent
//! fragment can say. On top of the base translation, the ground closure
//! step adds, for every candidate world whose true formulas derive (in the
//! ground intuitionistic calculus, with existentials expanded over the
//! constants and universals kept opaque behind their elimination axioms) a
//! formula the world does not contain, one cutting sequent. The worlds of
//! the resulting theory are exactly the deductively closed consistent prime
//! fragment states, which is what makes the canonical model refute
//! underivable sequents instead of validating them.

use std::collections::{BTreeMap, BTreeSet};

use crate::kripke::{Environment, KripkeModel, Transition, World};
use crate::resource::Budget;
use crate::syntax::{
    substitute, Formula, Sequent, Signature, Substitution, Term, Theory, Var,
};

use super::ipc::{PropId, Props};
use super::{assignments, CoherentTheory, HerbrandModel, SaturateError};

/// A finite, subformula-closed formula universe, with its observed bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub formulas: Vec<Formula>,
    pub max_depth: usize,
    pub max_width: usize,
    pub max_block: usize,
}

fn depth(phi: &Formula) -> usize {
    match phi {
        Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => 0,
        Formula::And(fs) | Formula::Or(fs) => {
            1 + fs.iter().map(depth).max().unwrap_or(0)
        }
        Formula::Imp(a, b) => 1 + depth(a).max(depth(b)),
        Formula::Exists(_, body) | Formula::Forall(_, body) => 1 + depth(body),
    }
}

impl Fragment {
    /// Subformula closure of the seeds, first-seen order.
    pub fn closure(seeds: &[Formula]) -> Fragment {
        let mut formulas: Vec<Formula> = Vec::new();
        fn walk(phi: &Formula, out: &mut Vec<Formula>) {
            if !out.contains(phi) {
                out.push(phi.clone());
            }
            match phi {
                Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => {}
                Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| walk(f, out)),
                Formula::Imp(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Formula::Exists(_, body) | Formula::Forall(_, body) => walk(body, out),
            }
        }
        for s in seeds {
            walk(s, &mut formulas);
        }
        let max_depth = formulas.iter().map(depth).max().unwrap_or(0);
        let max_width = formulas
            .iter()
            .map(|f| match f {
                Formula::And(fs) | Formula::Or(fs) => fs.len(),
                _ => 0,
            })
            .max()
            .unwrap_or(0);
        let max_block = formulas
            .iter()
            .map(|f| match f {
                Formula::Exists(b, _) | Formula::Forall(b, _) => b.len(),
                _ => 0,
            })
            .max()
            .unwrap_or(0);
        Fragment { formulas, max_depth, max_width, max_block }
    }

    pub fn for_theory(t: &Theory, extra: &[Formula]) -> Fragment {
        let mut seeds: Vec<Formula> = Vec::new();
        for (_, ax) in &t.axioms {
            seeds.push(ax.antecedent.clone());
            seeds.push(ax.succedent.clone());
        }
        seeds.extend(extra.iter().cloned());
        Fragment::closure(&seeds)
    }
}

/// The base predicate translation of a theory over a fragment.
#[derive(Debug, Clone)]
pub struct MorleyTheory {
    /// Linkage axioms plus the translated theory axioms.
    pub coherent: CoherentTheory,
    pub fragment: Fragment,
    /// fragment formula -> (predicate name, canonical free variables).
    pub predicates: Vec<(Formula, String, Vec<Var>)>,
    original: Theory,
}

impl MorleyTheory {
    pub fn predicate_of(&self, phi: &Formula) -> Option<(&str, &[Var])> {
        self.predicates
            .iter()
            .find(|(f, _, _)| f == phi)
            .map(|(_, n, vs)| (n.as_str(), vs.as_slice()))
    }
}

fn fresh_rel_name(sig: &Signature, index: usize) -> String {
    let mut name = format!("Fm{index}");
    while sig.relation(&name).is_some() || sig.function(&name).is_some() {
        name.push('x');
    }
    name
}

/// Builds the base translation: a fresh predicate per fragment formula,
/// bidirectional linkage for the coherent connectives, elimination-only
/// linkage for implication and universal quantification, and one translated
/// sequent per theory axiom.
pub fn morleyize(t_full: &Theory, fragment: &Fragment) -> Result<MorleyTheory, SaturateError> {
    for (f, args, _) in t_full.signature.functions() {
        if !args.is_empty() {
            return Err(SaturateError::ProperFunction(f.to_string()));
        }
    }
    // make sure the fragment covers the axioms
    let mut seeds: Vec<Formula> = fragment.formulas.clone();
    for (_, ax) in &t_full.axioms {
        seeds.push(ax.antecedent.clone());
        seeds.push(ax.succedent.clone());
    }
    let fragment = Fragment::closure(&seeds);

    let mut sig = t_full.signature.clone();
    let mut predicates = Vec::with_capacity(fragment.formulas.len());
    for (i, phi) in fragment.formulas.iter().enumerate() {
        sig.check_formula(phi)?;
        let fv: Vec<Var> = phi.canonical_context();
        let name = fresh_rel_name(&sig, i);
        sig.add_relation(name.clone(), fv.iter().map(|v| v.sort.clone()).collect())?;
        predicates.push((phi.clone(), name, fv));
    }

    let mt_atom = |phi: &Formula| -> Formula {
        let (_, name, fv) =
            predicates.iter().find(|(f, _, _)| f == phi).expect("fragment formula");
        Formula::Atom(name.clone(), fv.iter().map(|v| Term::Var(v.clone())).collect())
    };

    let mut axioms: Vec<(String, Sequent)> = Vec::new();
    let mut push = |name: String, ante: Formula, succ: Formula| {
        let seq = Sequent::closed(ante, succ);
        axioms.push((name, seq));
    };

    for (i, phi) in fragment.formulas.iter().enumerate() {
        let x = mt_atom(phi);
        match phi {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => {
                push(format!("lnk{i}a"), x.clone(), phi.clone());
                push(format!("lnk{i}b"), phi.clone(), x);
            }
            Formula::And(fs) => {
                let folded = Formula::And(fs.iter().map(&mt_atom).collect());
                push(format!("lnk{i}a"), x.clone(), folded.clone());
                push(format!("lnk{i}b"), folded, x);
            }
            Formula::Or(fs) => {
                let folded = Formula::Or(fs.iter().map(&mt_atom).collect());
                push(format!("lnk{i}a"), x.clone(), folded.clone());
                push(format!("lnk{i}b"), folded, x);
            }
            Formula::Exists(block, body) => {
                let folded = Formula::exists(block.clone(), mt_atom(body));
                push(format!("lnk{i}a"), x.clone(), folded.clone());
                push(format!("lnk{i}b"), folded, x);
            }
            Formula::Imp(a, b) => {
                let ante = Formula::And(vec![x, mt_atom(a)]);
                push(format!("lnk{i}"), ante, mt_atom(b));
            }
            Formula::Forall(block, body) => {
                for (k, env) in assignments(&sig, block).into_iter().enumerate() {
                    let sub: Substitution = env
                        .into_iter()
                        .map(|(v, c)| (v, Term::constant(c)))
                        .collect();
                    let inst = substitute(&mt_atom(body), &sub);
                    push(format!("lnk{i}i{k}"), x.clone(), inst);
                }
            }
        }
    }
    for (name, ax) in &t_full.axioms {
        push(format!("ax_{name}"), mt_atom(&ax.antecedent), mt_atom(&ax.succedent));
    }

    let theory = Theory { signature: sig, axioms };
    let coherent = CoherentTheory::new(theory)?;
    Ok(MorleyTheory { coherent, fragment, predicates, original: t_full.clone() })
}

/// Ground instances of every fragment formula, deduplicated, first-seen.
fn ground_fragment(sig: &Signature, fragment: &Fragment) -> Vec<Formula> {
    let mut out = Vec::new();
    for phi in &fragment.formulas {
        let fv: Vec<Var> = phi.canonical_context();
        for env in assignments(sig, &fv) {
            let sub: Substitution =
                env.into_iter().map(|(v, c)| (v, Term::constant(c))).collect();
            let g = substitute(phi, &sub);
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}

/// Machinery shared by the closure step and the world enumeration: the
/// ground fragment split into free bits (original atoms, implication and
/// universal nodes) and everything else derived.
struct GroundSpace<'a> {
    mt: &'a MorleyTheory,
    ground: Vec<Formula>,
    /// free bits: ground original atoms
    atoms: Vec<(String, Vec<String>)>,
    /// free bits: ground implication / universal fragment instances
    nodes: Vec<Formula>,
    props: Props,
    prop_of: BTreeMap<Formula, PropId>,
    /// hypotheses available to every derivation: theory axiom instances
    /// and universal eliminations
    hyps: Vec<PropId>,
}

pub const MAX_FREE_BITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Mask {
    atoms: u64,
    nodes: u64,
}

impl<'a> GroundSpace<'a> {
    fn new(mt: &'a MorleyTheory, budget: &Budget) -> Result<Self, SaturateError> {
        let sig = &mt.original.signature;
        let ground = ground_fragment(sig, &mt.fragment);
        let universe = super::AtomUniverse::new(sig)?;
        let atoms: Vec<(String, Vec<String>)> =
            (0..universe.len()).map(|i| universe.atom(i).clone()).collect();
        let nodes: Vec<Formula> = ground
            .iter()
            .filter(|g| matches!(g, Formula::Imp(..) | Formula::Forall(..)))
            .cloned()
            .collect();
        if atoms.len() + nodes.len() > MAX_FREE_BITS {
            return Err(SaturateError::UniverseTooLarge {
                atoms: atoms.len() + nodes.len(),
                bound: MAX_FREE_BITS,
            });
        }

        let mut space = GroundSpace {
            mt,
            ground,
            atoms,
            nodes,
            props: Props::new(),
            prop_of: BTreeMap::new(),
            hyps: Vec::new(),
        };
        // translate all ground fragment formulas; collect universal nodes
        // reachable through instantiation as well
        let mut pending: Vec<Formula> = space.ground.clone();
        let mut translated: BTreeSet<Formula> = BTreeSet::new();
        while let Some(g) = pending.pop() {
            budget.charge(1)?;
            if !translated.insert(g.clone()) {
                continue;
            }
            space.translate(&g, &mut pending);
        }
        // theory axiom instances as implication hypotheses
        for (_, ax) in &space.mt.original.axioms {
            for env in assignments(sig, &ax.context) {
                let sub: Substitution = env
                    .into_iter()
                    .map(|(v, c)| (v, Term::constant(c)))
                    .collect();
                let a = substitute(&ax.antecedent, &sub);
                let s = substitute(&ax.succedent, &sub);
                let mut pending = Vec::new();
                let pa = space.translate(&a, &mut pending);
                let ps = space.translate(&s, &mut pending);
                while let Some(g) = pending.pop() {
                    space.translate(&g, &mut Vec::new());
                }
                let hyp = space.props.imp(pa, ps);
                space.hyps.push(hyp);
            }
        }
        // universal eliminations for every translated universal node
        let mut i = 0;
        let mut forall_nodes: Vec<Formula> = space
            .prop_of
            .keys()
            .filter(|f| matches!(f, Formula::Forall(..)))
            .cloned()
            .collect();
        while i < forall_nodes.len() {
            let g = forall_nodes[i].clone();
            let Formula::Forall(block, body) = &g else { unreachable!() };
            let opaque = space.prop_of[&g];
            for env in assignments(sig, block) {
                let sub: Substitution = env
                    .into_iter()
                    .map(|(v, c)| (v, Term::constant(c)))
                    .collect();
                let inst = substitute(body, &sub);
                let mut pending = Vec::new();
                let pi = space.translate(&inst, &mut pending);
                while let Some(g2) = pending.pop() {
                    space.translate(&g2, &mut Vec::new());
                    if matches!(g2, Formula::Forall(..)) && !forall_nodes.contains(&g2) {
                        forall_nodes.push(g2);
                    }
                }
                if matches!(inst, Formula::Forall(..)) && !forall_nodes.contains(&inst) {
                    forall_nodes.push(inst.clone());
                }
                let hyp = space.props.imp(opaque, pi);
                space.hyps.push(hyp);
            }
            i += 1;
        }
        Ok(space)
    }

    /// Prop translation of a ground formula: existentials expand over the
    /// constants, universals become opaque atoms.
    fn translate(&mut self, g: &Formula, pending: &mut Vec<Formula>) -> PropId {
        if let Some(&p) = self.prop_of.get(g) {
            return p;
        }
        let p = match g {
            Formula::True => self.props.top(),
            Formula::False => self.props.bot(),
            Formula::Atom(r, args) => {
                let tuple: Vec<String> = args
                    .iter()
                    .map(|t| match t {
                        Term::App(c, a) if a.is_empty() => c.clone(),
                        _ => unreachable!("ground atoms have constant arguments"),
                    })
                    .collect();
                self.props.atom(format!("{r}({})", tuple.join(",")))
            }
            Formula::Eq(s, t) => {
                if s == t {
                    self.props.top()
                } else {
                    self.props.bot()
                }
            }
            Formula::And(fs) => {
                let ps: Vec<PropId> =
                    fs.iter().map(|f| self.translate(f, pending)).collect();
                self.props.and_all(&ps)
            }
            Formula::Or(fs) => {
                let ps: Vec<PropId> =
                    fs.iter().map(|f| self.translate(f, pending)).collect();
                self.props.or_all(&ps)
            }
            Formula::Imp(a, b) => {
                let pa = self.translate(a, pending);
                let pb = self.translate(b, pending);
                self.props.imp(pa, pb)
            }
            Formula::Exists(block, body) => {
                let sig = &self.mt.original.signature;
                let insts: Vec<PropId> = assignments(sig, block)
                    .into_iter()
                    .map(|env| {
                        let sub: Substitution = env
                            .into_iter()
                            .map(|(v, c)| (v, Term::constant(c)))
                            .collect();
                        let inst = substitute(body, &sub);
                        let p = self.translate(&inst, pending);
                        pending.push(inst);
                        p
                    })
                    .collect();
                self.props.or_all(&insts)
            }
            Formula::Forall(..) => self.props.atom(format!("!{g}")),
        };
        self.prop_of.insert(g.clone(), p);
        p
    }

    /// Truth value of a ground fragment formula under a free-bit mask.
    fn value(&self, m: Mask, g: &Formula) -> bool {
        match g {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(r, args) => {
                let tuple: Vec<String> = args
                    .iter()
                    .map(|t| match t {
                        Term::App(c, a) if a.is_empty() => c.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                match self.atoms.iter().position(|a| a.0 == *r && a.1 == tuple) {
                    Some(i) => m.atoms & (1 << i) != 0,
                    None => false,
                }
            }
            Formula::Eq(s, t) => s == t,
            Formula::And(fs) => fs.iter().all(|f| self.value(m, f)),
            Formula::Or(fs) => fs.iter().any(|f| self.value(m, f)),
            Formula::Exists(block, body) => {
                let sig = &self.mt.original.signature;
                assignments(sig, block).into_iter().any(|env| {
                    let sub: Substitution = env
                        .into_iter()
                        .map(|(v, c)| (v, Term::constant(c)))
                        .collect();
                    self.value(m, &substitute(body, &sub))
                })
            }
            Formula::Imp(..) | Formula::Forall(..) => {
                match self.nodes.iter().position(|n| n == g) {
                    Some(i) => m.nodes & (1 << i) != 0,
                    None => unreachable!("implication node outside the fragment"),
                }
            }
        }
    }

    /// Does the mask satisfy the base constraints: implication and
    /// universal eliminations, and the translated theory axioms?
    fn satisfies_base(&self, m: Mask) -> bool {
        for (i, node) in self.nodes.iter().enumerate() {
            if m.nodes & (1 << i) == 0 {
                continue;
            }
            match node {
                Formula::Imp(a, b) => {
                    if self.value(m, a) && !self.value(m, b) {
                        return false;
                    }
                }
                Formula::Forall(block, body) => {
                    let sig = &self.mt.original.signature;
                    for env in assignments(sig, block) {
                        let sub: Substitution = env
                            .into_iter()
                            .map(|(v, c)| (v, Term::constant(c)))
                            .collect();
                        if !self.value(m, &substitute(body, &sub)) {
                            return false;
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
        let sig = &self.mt.original.signature;
        for (_, ax) in &self.mt.original.axioms {
            for env in assignments(sig, &ax.context) {
                let sub: Substitution = env
                    .into_iter()
                    .map(|(v, c)| (v, Term::constant(c)))
                    .collect();
                if self.value(m, &substitute(&ax.antecedent, &sub))
                    && !self.value(m, &substitute(&ax.succedent, &sub))
                {
                    return false;
                }
            }
        }
        true
    }

    /// The free-bit formulas true under the mask, as prover hypotheses.
    fn true_free_props(&mut self, m: Mask) -> Vec<PropId> {
        let mut hyps = self.hyps.clone();
        for (i, a) in self.atoms.iter().enumerate() {
            if m.atoms & (1 << i) != 0 {
                let p = self.props.atom(format!("{}({})", a.0, a.1.join(",")));
                hyps.push(p);
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if m.nodes & (1 << i) != 0 {
                hyps.push(self.prop_of[n]);
            }
        }
        hyps
    }

    /// First ground fragment formula false under the mask but derivable
    /// from what is true (or a derivation of absurdity).
    fn closure_violation(&mut self, m: Mask, budget: &Budget) -> Result<Option<Formula>, SaturateError> {
        let hyps = self.true_free_props(m);
        let bot = self.props.bot();
        budget.charge(1)?;
        if self.props.prove(&hyps, bot) {
            return Ok(Some(Formula::False));
        }
        for g in self.ground.clone() {
            if self.value(m, &g) {
                continue;
            }
            let goal = self.prop_of[&g];
            budget.charge(1)?;
            if self.props.prove(&hyps, goal) {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }

    /// Morley atoms (predicate, constant tuple) of the formulas true under
    /// the mask, plus the true original atoms — one Herbrand world.
    fn world_atoms(&self, m: Mask) -> BTreeSet<(String, Vec<String>)> {
        let mut out = BTreeSet::new();
        for (i, a) in self.atoms.iter().enumerate() {
            if m.atoms & (1 << i) != 0 {
                out.insert(a.clone());
            }
        }
        for phi in &self.mt.fragment.formulas {
            let (_, name, fv) = self
                .mt
                .predicates
                .iter()
                .find(|(f, _, _)| f == phi)
                .expect("fragment formula");
            let sig = &self.mt.original.signature;
            for env in assignments(sig, fv) {
                let sub: Substitution = env
                    .iter()
                    .map(|(v, c)| (v.clone(), Term::constant(c.clone())))
                    .collect();
                if self.value(m, &substitute(phi, &sub)) {
                    out.insert((name.clone(), fv.iter().map(|v| env[v].clone()).collect()));
                }
            }
        }
        out
    }
}

/// The enriched coherent theory together with its canonical Kripke model.
#[derive(Debug, Clone)]
pub struct MorleyCanonical {
    pub enriched: CoherentTheory,
    pub model: KripkeModel,
    pub worlds: Vec<HerbrandModel>,
}

/// Runs the ground closure step and builds the canonical Kripke model in
/// one pass over the candidate worlds.
pub fn morley_canonical(
    mt: &MorleyTheory,
    budget: &Budget,
) -> Result<MorleyCanonical, SaturateError> {
    let mut space = GroundSpace::new(mt, budget)?;
    let na = space.atoms.len();
    let nn = space.nodes.len();
    let mut cut_axioms: Vec<(String, Sequent)> = Vec::new();
    let mut world_atom_sets: Vec<BTreeSet<(String, Vec<String>)>> = Vec::new();
    let mut cut_id = 0usize;
    for bits in 0u64..(1u64 << (na + nn)) {
        budget.charge(1)?;
        let m = Mask { atoms: bits & ((1 << na) - 1), nodes: bits >> na };
        if !space.satisfies_base(m) {
            continue;
        }
        match space.closure_violation(m, budget)? {
            None => world_atom_sets.push(space.world_atoms(m)),
            Some(missing) => {
                // one cutting sequent per violating candidate: the true
                // free bits entail the missing formula
                let mut conjuncts: Vec<Formula> = Vec::new();
                for (i, a) in space.atoms.iter().enumerate() {
                    if m.atoms & (1 << i) != 0 {
                        conjuncts.push(Formula::Atom(
                            a.0.clone(),
                            a.1.iter().map(|c| Term::constant(c.clone())).collect(),
                        ));
                    }
                }
                for (i, n) in space.nodes.iter().enumerate() {
                    if m.nodes & (1 << i) != 0 {
                        conjuncts.push(ground_morley_atom(mt, n));
                    }
                }
                let succ = if missing == Formula::False {
                    Formula::False
                } else {
                    ground_morley_atom(mt, &missing)
                };
                let seq = Sequent::closed(Formula::And(conjuncts), succ);
                cut_axioms.push((format!("cut{cut_id}"), seq));
                cut_id += 1;
            }
        }
    }

    let mut theory = mt.coherent.theory().clone();
    theory.axioms.extend(cut_axioms);
    let enriched = CoherentTheory::new(theory)?;

    world_atom_sets.sort();
    let worlds: Vec<HerbrandModel> =
        world_atom_sets.into_iter().map(HerbrandModel::new).collect();
    let model = herbrand_poset_model(enriched.signature(), &worlds);
    Ok(MorleyCanonical { enriched, model, worlds })
}

/// The Morley atom of the fragment formula matching a ground instance.
fn ground_morley_atom(mt: &MorleyTheory, ground: &Formula) -> Formula {
    let sig = &mt.original.signature;
    for (phi, name, fv) in &mt.predicates {
        for env in assignments(sig, fv) {
            let sub: Substitution = env
                .iter()
                .map(|(v, c)| (v.clone(), Term::constant(c.clone())))
                .collect();
            if &substitute(phi, &sub) == ground {
                return Formula::Atom(
                    name.clone(),
                    fv.iter().map(|v| Term::constant(env[v].clone())).collect(),
                );
            }
        }
    }
    unreachable!("ground instance `{ground}` outside the fragment")
}

/// The Kripke model whose worlds are the given Herbrand models ordered by
/// atom-set inclusion, with constant domains and identity transitions.
fn herbrand_poset_model(sig: &Signature, models: &[HerbrandModel]) -> KripkeModel {
    let n = models.len();
    let domains: BTreeMap<String, Vec<String>> = sig
        .sorts()
        .iter()
        .map(|s| (s.clone(), sig.constants_of(s)))
        .collect();
    let const_index = |sort: &str, c: &str| -> usize {
        domains[sort].iter().position(|x| x == c).expect("constant")
    };
    let worlds: Vec<World> = models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut relations: BTreeMap<String, BTreeSet<Vec<usize>>> = sig
                .relations()
                .map(|(r, _)| (r.to_string(), BTreeSet::new()))
                .collect();
            for (r, tuple) in &m.atoms {
                let arg_sorts = sig.relation(r).expect("declared relation");
                let t: Vec<usize> = tuple
                    .iter()
                    .zip(arg_sorts)
                    .map(|(c, s)| const_index(s, c))
                    .collect();
                relations.get_mut(r).unwrap().insert(t);
            }
            let functions: BTreeMap<String, BTreeMap<Vec<usize>, usize>> = sig
                .functions()
                .map(|(f, _, result)| {
                    (f.to_string(), BTreeMap::from([(vec![], const_index(result, f))]))
                })
                .collect();
            World { name: format!("w{i}"), domains: domains.clone(), relations, functions }
        })
        .collect();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            leq[i][j] = models[i].atoms.is_subset(&models[j].atoms);
        }
    }
    let mut transitions: BTreeMap<(usize, usize), Transition> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i][j] {
                let t: Transition = sig
                    .sorts()
                    .iter()
                    .map(|s| (s.clone(), (0..domains[s].len()).collect()))
                    .collect();
                transitions.insert((i, j), t);
            }
        }
    }
    KripkeModel { signature: sig.clone(), worlds, leq, transitions }
}

/// The canonical Kripke model of a coherent theory: all its Herbrand models
/// as worlds, ordered by inclusion, with identity transitions.
pub fn canonical_kripke(
    t: &CoherentTheory,
    budget: &Budget,
) -> Result<KripkeModel, SaturateError> {
    let mut models = super::all_models(t, super::EqMode::Syntactic, budget)?;
    models.sort();
    Ok(herbrand_poset_model(t.signature(), &models))
}

/// A refutation certificate: the canonical model, a world and an
/// environment where the sequent fails.
#[derive(Debug, Clone)]
pub struct KripkeCertificate {
    pub model: KripkeModel,
    pub world: usize,
    pub env: Environment,
}

impl KripkeCertificate {
    /// Model file plus a machine-readable refutation line.
    pub fn to_file_string(&self, sequent: &Sequent) -> String {
        let mut out = crate::kripke::write_model(&self.model);
        let world = &self.model.worlds[self.world];
        let bindings: Vec<String> = self
            .env
            .iter()
            .map(|(v, &e)| format!("{} -> {}", v.name, world.domains[&v.sort][e]))
            .collect();
        out.push_str(&format!(
            "# refuted-at {} env={{{}}} sequent={}\n",
            world.name,
            bindings.join(", "),
            sequent
        ));
        out
    }
}

#[derive(Debug, Clone)]
pub enum ProvableOutcome {
    /// Valid in the canonical model; reports how many worlds were checked.
    Provable { worlds: usize },
    Unprovable { certificate: KripkeCertificate },
}

impl ProvableOutcome {
    pub fn is_provable(&self) -> bool {
        matches!(self, ProvableOutcome::Provable { .. })
    }
}

/// Decides validity of a sequent in the canonical Kripke model of the
/// enriched translation of the theory over the fragment (extended with the
/// sequent's own subformulas). Provability here is relative to the
/// fragment and to domain closure; the refutation certificate is a model
/// file checkable independently.
pub fn provable_ik(
    t_full: &Theory,
    fragment: &Fragment,
    s: &Sequent,
    budget: &Budget,
) -> Result<ProvableOutcome, SaturateError> {
    let mut seeds = fragment.formulas.clone();
    seeds.push(s.antecedent.clone());
    seeds.push(s.succedent.clone());
    let fragment = Fragment::closure(&seeds);
    let mt = morleyize(t_full, &fragment)?;
    let canonical = morley_canonical(&mt, budget)?;
    match canonical.model.sequent_counterexample(s).map_err(|e| {
        SaturateError::PropertyFailure(format!("forcing failed on the canonical model: {e}"))
    })? {
        None => Ok(ProvableOutcome::Provable { worlds: canonical.model.worlds.len() }),
        Some((world, env)) => Ok(ProvableOutcome::Unprovable {
            certificate: KripkeCertificate { model: canonical.model, world, env },
        }),
    }
}

/// Checks the forcing correspondence on the canonical model: a world
/// contains the Morley atom of a ground fragment instance exactly when it
/// forces the instance. Universally quantified formulas are excluded: under
/// domain closure their elimination-only translation is strictly weaker
/// than forcing, which ranges over grown domains in the unrestricted
/// semantics.
pub fn morley_correspondence(
    mt: &MorleyTheory,
    canonical: &MorleyCanonical,
    budget: &Budget,
) -> Result<Vec<(usize, Formula)>, SaturateError> {
    let sig = &mt.original.signature;
    let mut violations = Vec::new();
    for (w, hm) in canonical.worlds.iter().enumerate() {
        for (phi, name, fv) in &mt.predicates {
            if contains_forall(phi) {
                continue;
            }
            for env in assignments(sig, fv) {
                budget.charge(1)?;
                let sub: Substitution = env
                    .iter()
                    .map(|(v, c)| (v.clone(), Term::constant(c.clone())))
                    .collect();
                let ground = substitute(phi, &sub);
                let tuple: Vec<String> = fv.iter().map(|v| env[v].clone()).collect();
                let has_atom = hm.atoms.contains(&(name.clone(), tuple));
                let forced = canonical
                    .model
                    .force(w, &Environment::new(), &ground)
                    .map_err(|e| SaturateError::PropertyFailure(e.to_string()))?;
                if has_atom != forced {
                    violations.push((w, ground));
                }
            }
        }
    }
    Ok(violations)
}

fn contains_forall(phi: &Formula) -> bool {
    match phi {
        Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => false,
        Formula::And(fs) | Formula::Or(fs) => fs.iter().any(contains_forall),
        Formula::Imp(a, b) => contains_forall(a) || contains_forall(b),
        Formula::Forall(..) => true,
        Formula::Exists(_, body) => contains_forall(body),
    }
}

#[derive(Debug, Clone)]
pub enum CountermodelOutcome {
    Entailed,
    Refuted {
        model: HerbrandModel,
        /// Context assignment under which the sequent fails.
        assignment: BTreeMap<Var, String>,
    },
}

/// When the sequent is not entailed, reads a refuting term model off a
/// prime filter of the Lindenbaum lattice (containing the antecedent class,
/// excluding the succedent class, preserving the designated joins), then
/// re-verifies it by direct evaluation.
pub fn countermodel(
    t: &CoherentTheory,
    s: &Sequent,
    budget: &Budget,
) -> Result<CountermodelOutcome, SaturateError> {
    if super::entails(t, s, super::EqMode::Syntactic, budget)? {
        return Ok(CountermodelOutcome::Entailed);
    }
    let (assignment, _) = super::chase::chase_refutation(t, s, super::EqMode::Syntactic, budget)?
        .expect("refutation exists when not entailed");
    let sub: Substitution = assignment
        .iter()
        .map(|(v, c)| (v.clone(), Term::constant(c.clone())))
        .collect();
    let ante = substitute(&s.antecedent, &sub);
    let succ = substitute(&s.succedent, &sub);

    let lin = super::lindenbaum(t, s, budget)?;
    let sig = t.signature();
    let a = lin.class_of(sig, &ante).expect("antecedent instance in the lattice");
    let b = lin.class_of(sig, &succ).expect("succedent instance in the lattice");
    let filter = match crate::lattice::rs_filter(&lin.lattice, &lin.designated, a, b)? {
        crate::lattice::RsOutcome::Found(f) => f,
        crate::lattice::RsOutcome::NoneExists { .. } => {
            return Err(SaturateError::PropertyFailure(
                "no designated-join-preserving prime filter separates the classes".into(),
            ))
        }
    };

    // term model: the ground atoms whose classes lie in the filter; atoms
    // outside the fragment are unconstrained and stay false
    let mut atoms = BTreeSet::new();
    for (r, arg_sorts) in sig.relations() {
        let block: Vec<Var> = arg_sorts
            .iter()
            .enumerate()
            .map(|(i, srt)| Var::new(format!("q{i}"), srt.clone()))
            .collect();
        for env in assignments(sig, &block) {
            let tuple: Vec<String> = block.iter().map(|v| env[v].clone()).collect();
            let atom = Formula::Atom(
                r.to_string(),
                tuple.iter().map(|c| Term::constant(c.clone())).collect(),
            );
            if let Some(class) = lin.class_of(sig, &atom) {
                if filter.contains(class) {
                    atoms.insert((r.to_string(), tuple));
                }
            }
        }
    }
    let model = HerbrandModel::new(atoms);

    // never trust the construction: re-verify by direct evaluation
    if !model.satisfies_theory(t) {
        return Err(SaturateError::BadCountermodel("term model violates the theory".into()));
    }
    if !model.eval(sig, &BTreeMap::new(), &ante) {
        return Err(SaturateError::BadCountermodel(
            "term model does not satisfy the antecedent".into(),
        ));
    }
    if model.eval(sig, &BTreeMap::new(), &succ) {
        return Err(SaturateError::BadCountermodel(
            "term model satisfies the succedent".into(),
        ));
    }
    Ok(CountermodelOutcome::Refuted { model, assignment })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyOutcome<W> {
    NotProvable,
    Witness(W),
}

/// When the disjunction is provable, finds a provable disjunct. Failure to
/// find one would refute the disjunction property at desk scale and is a
/// hard error.
pub fn disjunction_property(
    t_full: &Theory,
    fragment: &Fragment,
    disjuncts: &[Formula],
    budget: &Budget,
) -> Result<PropertyOutcome<usize>, SaturateError> {
    let goal = Sequent::closed(Formula::True, Formula::Or(disjuncts.to_vec()));
    if !provable_ik(t_full, fragment, &goal, budget)?.is_provable() {
        return Ok(PropertyOutcome::NotProvable);
    }
    for (i, d) in disjuncts.iter().enumerate() {
        let g = Sequent::closed(Formula::True, d.clone());
        if provable_ik(t_full, fragment, &g, budget)?.is_provable() {
            return Ok(PropertyOutcome::Witness(i));
        }
    }
    Err(SaturateError::PropertyFailure(
        "provable disjunction with no provable disjunct".into(),
    ))
}

/// When the existential is provable, finds constants witnessing a provable
/// instance.
pub fn existence_property(
    t_full: &Theory,
    fragment: &Fragment,
    exists: &Formula,
    budget: &Budget,
) -> Result<PropertyOutcome<Vec<String>>, SaturateError> {
    let Formula::Exists(block, body) = exists else {
        return Err(SaturateError::PropertyFailure("expected an existential formula".into()));
    };
    let goal = Sequent::closed(Formula::True, exists.clone());
    if !provable_ik(t_full, fragment, &goal, budget)?.is_provable() {
        return Ok(PropertyOutcome::NotProvable);
    }
    for env in assignments(&t_full.signature, block) {
        let sub: Substitution = env
            .iter()
            .map(|(v, c)| (v.clone(), Term::constant(c.clone())))
            .collect();
        let inst = substitute(body, &sub);
        let g = Sequent::closed(Formula::True, inst);
        if provable_ik(t_full, fragment, &g, budget)?.is_provable() {
            return Ok(PropertyOutcome::Witness(
                block.iter().map(|v| env[v].clone()).collect(),
            ));
        }
    }
    Err(SaturateError::PropertyFailure(
        "provable existential with no provable instance".into(),
    ))
}
