//! Lindenbaum lattices of ground coherent formulas modulo semantic mutual
//! entailment over the theory's Herbrand models, with the designated joins
//! of every disjunction node and every existential node (joined over its
//! constant instances) and the designated meets of every conjunction node.
//!
//! Under domain closure the ground instances carry all the information, so
//! the lattice is built over ground formulas: each class is identified by
//! its satisfaction bit-vector across the theory's models, entailment is
//! bit-vector inclusion, and binary closure is bitwise and/or, which keeps
//! the quotient a genuine sublattice of the powerset of models.

use std::collections::BTreeMap;

use crate::lattice::{DesignatedJoins, Elem, FinLattice};
use crate::resource::Budget;
use crate::syntax::{substitute, Formula, Sequent, Signature, Substitution, Term, Var};

use super::{all_models, assignments, CoherentTheory, EqMode, HerbrandModel, SaturateError};

/// The Lindenbaum lattice of a ground fragment: the lattice of semantic
/// classes, the designated joins and meets, representatives per element,
/// and the model list the classes are measured against.
#[derive(Debug, Clone)]
pub struct Lindenbaum {
    pub lattice: FinLattice,
    pub designated: DesignatedJoins,
    pub representatives: Vec<Formula>,
    pub models: Vec<HerbrandModel>,
    sig_index: BTreeMap<Vec<u64>, Elem>,
}

pub const MAX_CLASSES: usize = 320;

impl Lindenbaum {
    /// The class of a ground coherent formula, if its signature already
    /// names a class of the lattice.
    pub fn class_of(&self, sig: &Signature, phi: &Formula) -> Option<Elem> {
        let bits = signature_of(sig, &self.models, phi);
        self.sig_index.get(&bits).copied()
    }
}

fn signature_of(sig: &Signature, models: &[HerbrandModel], phi: &Formula) -> Vec<u64> {
    let mut bits = vec![0u64; models.len().div_ceil(64)];
    for (i, m) in models.iter().enumerate() {
        if m.eval(sig, &BTreeMap::new(), phi) {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

fn ground_instances(sig: &Signature, phi: &Formula) -> Vec<Formula> {
    let free: Vec<Var> = phi.free_vars().into_iter().collect();
    assignments(sig, &free)
        .into_iter()
        .map(|env| {
            let sub: Substitution =
                env.into_iter().map(|(v, c)| (v, Term::constant(c))).collect();
            substitute(phi, &sub)
        })
        .collect()
}

fn subformulas(phi: &Formula, out: &mut Vec<Formula>) {
    out.push(phi.clone());
    match phi {
        Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => {}
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| subformulas(f, out)),
        Formula::Imp(a, b) => {
            subformulas(a, out);
            subformulas(b, out);
        }
        Formula::Exists(_, body) | Formula::Forall(_, body) => subformulas(body, out),
    }
}

/// Builds the Lindenbaum lattice of the ground fragment generated by the
/// theory's axioms and the goal sequent: subformula closure, ground
/// instantiation, all ground atoms, and closure under binary meet and join
/// of classes.
pub fn lindenbaum(
    t: &CoherentTheory,
    goal: &Sequent,
    budget: &Budget,
) -> Result<Lindenbaum, SaturateError> {
    let sig = t.signature();
    let models = all_models(t, EqMode::Syntactic, budget)?;

    // ground seed formulas, in deterministic first-seen order
    let mut seeds: Vec<Formula> = Vec::new();
    let push_closed = |phi: &Formula, seeds: &mut Vec<Formula>| {
        let mut subs = Vec::new();
        subformulas(phi, &mut subs);
        for sub in subs {
            for ground in ground_instances(sig, &sub) {
                if !seeds.contains(&ground) {
                    seeds.push(ground);
                }
            }
        }
    };
    push_closed(&Formula::True, &mut seeds);
    push_closed(&Formula::False, &mut seeds);
    for (_, ax) in t.axioms() {
        push_closed(&ax.antecedent, &mut seeds);
        push_closed(&ax.succedent, &mut seeds);
    }
    push_closed(&goal.antecedent, &mut seeds);
    push_closed(&goal.succedent, &mut seeds);

    // classes by semantic signature
    let mut signatures: Vec<Vec<u64>> = Vec::new();
    let mut representatives: Vec<Formula> = Vec::new();
    let mut sig_index: BTreeMap<Vec<u64>, Elem> = BTreeMap::new();
    let mut class_of_seed: BTreeMap<Formula, Elem> = BTreeMap::new();
    for seed in &seeds {
        budget.charge(models.len() as u64 + 1)?;
        let bits = signature_of(sig, &models, seed);
        let class = *sig_index.entry(bits.clone()).or_insert_with(|| {
            signatures.push(bits);
            representatives.push(seed.clone());
            signatures.len() - 1
        });
        class_of_seed.insert(seed.clone(), class);
    }

    // close under binary meet and join on signatures
    let mut i = 0;
    while i < signatures.len() {
        let mut j = 0;
        while j <= i {
            budget.charge(1)?;
            if signatures.len() > MAX_CLASSES {
                return Err(SaturateError::UniverseTooLarge {
                    atoms: signatures.len(),
                    bound: MAX_CLASSES,
                });
            }
            let meet: Vec<u64> = signatures[i]
                .iter()
                .zip(&signatures[j])
                .map(|(a, b)| a & b)
                .collect();
            let join: Vec<u64> = signatures[i]
                .iter()
                .zip(&signatures[j])
                .map(|(a, b)| a | b)
                .collect();
            for (bits, mk) in [(meet, true), (join, false)] {
                if !sig_index.contains_key(&bits) {
                    let rep = if mk {
                        Formula::And(vec![representatives[i].clone(), representatives[j].clone()])
                    } else {
                        Formula::Or(vec![representatives[i].clone(), representatives[j].clone()])
                    };
                    signatures.push(bits.clone());
                    representatives.push(rep);
                    sig_index.insert(bits, signatures.len() - 1);
                }
            }
            j += 1;
        }
        i += 1;
    }

    let n = signatures.len();
    let mut leq = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            leq[a][b] = signatures[a].iter().zip(&signatures[b]).all(|(x, y)| x & !y == 0);
        }
    }
    let names: Vec<String> = representatives
        .iter()
        .enumerate()
        .map(|(k, f)| format!("c{k}:{f}"))
        .collect();
    let lattice = FinLattice::from_leq(names, leq)
        .expect("signature classes form a lattice");

    // designated joins and meets from the structure of the seeds
    let mut designated = DesignatedJoins::default();
    let mut seen_j = std::collections::BTreeSet::new();
    let mut seen_m = std::collections::BTreeSet::new();
    for seed in &seeds {
        let class = class_of_seed[seed];
        match seed {
            Formula::Or(fs) => {
                let family: Vec<Elem> = fs.iter().map(|f| class_of_seed[f]).collect();
                if seen_j.insert((class, family.clone())) {
                    designated.joins.push((class, family));
                }
            }
            Formula::And(fs) => {
                let family: Vec<Elem> = fs.iter().map(|f| class_of_seed[f]).collect();
                if seen_m.insert((class, family.clone())) {
                    designated.meets.push((class, family));
                }
            }
            Formula::Exists(block, body) => {
                let family: Vec<Elem> = assignments(sig, block)
                    .into_iter()
                    .map(|env| {
                        let sub: Substitution = env
                            .into_iter()
                            .map(|(v, c)| (v, Term::constant(c)))
                            .collect();
                        class_of_seed[&substitute(body, &sub)]
                    })
                    .collect();
                if seen_j.insert((class, family.clone())) {
                    designated.joins.push((class, family));
                }
            }
            _ => {}
        }
    }
    designated.validate(&lattice).expect("designated families are semantic joins/meets");

    Ok(Lindenbaum { lattice, designated, representatives, models, sig_index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::saturate::tests::theory;
    use crate::syntax::{parse_formula, parse_sequent};

    #[test]
    fn split_theory_lindenbaum() {
        let t = theory("rel P : S\nrel Q : S\nconst c : S\nsplit: true |- [] or(P(c), Q(c))\n");
        let budget = Budget::default();
        let goal = parse_sequent("true |- [] P(c)", t.signature()).unwrap();
        let lin = lindenbaum(&t, &goal, &budget).unwrap();
        // top class is the class of the axiom disjunction
        let top_class = lin
            .class_of(t.signature(), &parse_formula("or(P(c), Q(c))", t.signature()).unwrap())
            .unwrap();
        assert_eq!(top_class, lin.lattice.top());
        let t_class = lin.class_of(t.signature(), &Formula::True).unwrap();
        assert_eq!(t_class, lin.lattice.top());
        assert!(lin.lattice.is_distributive());
    }

    #[test]
    fn empty_theory_two_classes_for_truth_constants() {
        let t = theory("rel P : S\nconst c : S\n");
        let budget = Budget::default();
        let goal = parse_sequent("true |- [] true", t.signature()).unwrap();
        let lin = lindenbaum(&t, &goal, &budget).unwrap();
        let top = lin.class_of(t.signature(), &Formula::True).unwrap();
        let bot = lin.class_of(t.signature(), &Formula::False).unwrap();
        assert_eq!(top, lin.lattice.top());
        assert_eq!(bot, lin.lattice.bottom());
        assert_ne!(top, bot);
    }

    #[test]
    fn rs_filter_on_split_lindenbaum_contains_the_other_disjunct() {
        // prime filter containing the top class but not the P-class must
        // contain the Q-class, matching the countermodel {Q(c)}
        let t = theory("rel P : S\nrel Q : S\nconst c : S\nsplit: true |- [] or(P(c), Q(c))\n");
        let budget = Budget::default();
        let sig = t.signature();
        let goal = parse_sequent("true |- [] P(c)", sig).unwrap();
        let lin = lindenbaum(&t, &goal, &budget).unwrap();
        let top = lin.class_of(sig, &Formula::True).unwrap();
        let pc = lin.class_of(sig, &parse_formula("P(c)", sig).unwrap()).unwrap();
        let qc = lin.class_of(sig, &parse_formula("Q(c)", sig).unwrap()).unwrap();
        match crate::lattice::rs_filter(&lin.lattice, &lin.designated, top, pc).unwrap() {
            crate::lattice::RsOutcome::Found(f) => {
                assert!(f.contains(qc), "filter must contain the Q-class");
                assert!(!f.contains(pc));
            }
            other => panic!("expected a filter, got {other:?}"),
        }
    }

    #[test]
    fn existential_designated_join() {
        let t = theory("rel P : S\nconst c : S\nconst d : S\n");
        let budget = Budget::default();
        let goal =
            parse_sequent("ex([x:S], P(x)) |- [] P(c)", t.signature()).unwrap();
        let lin = lindenbaum(&t, &goal, &budget).unwrap();
        let sig = t.signature();
        let ex_class = lin
            .class_of(sig, &parse_formula("ex([x:S], P(x))", sig).unwrap())
            .unwrap();
        let pc = lin.class_of(sig, &parse_formula("P(c)", sig).unwrap()).unwrap();
        let pd = lin.class_of(sig, &parse_formula("P(d)", sig).unwrap()).unwrap();
        // the existential is a designated join of its instances
        assert!(lin
            .designated
            .joins
            .iter()
            .any(|(t2, fam)| *t2 == ex_class && fam.contains(&pc) && fam.contains(&pd)));
        assert!(lin.lattice.le(pc, ex_class));
        assert!(lin.lattice.le(pd, ex_class));
    }
}
