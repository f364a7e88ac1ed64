//! Programmatic derivation building, and the derived distributivity law
//! `and(or(phi,psi_0),...) |- or(phi, and(psi_0,...))` routed through a
//! dual-dist node.

use thiserror::Error;

use crate::syntax::{Formula, Sequent, Signature, SortError, Var};

use super::{Bar, Derivation, Payload, RuleTag, TreeFamily};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DeriveError {
    #[error("family width {width} outside 1..={bound}")]
    Width { width: usize, bound: usize },
    #[error("{0}")]
    Sort(#[from] SortError),
}

/// Builds derivations over one fixed context. Constructors panic on shape
/// misuse (they are internal plumbing); the result is validated by
/// `check_derivation` in tests and callers.
pub struct DerivationBuilder {
    ctx: Vec<Var>,
}

impl DerivationBuilder {
    pub fn new(ctx: Vec<Var>) -> Self {
        DerivationBuilder { ctx }
    }

    fn seq(&self, ante: Formula, succ: Formula) -> Sequent {
        Sequent::new(ante, self.ctx.clone(), succ).expect("context covers free variables")
    }

    pub fn identity(&self, phi: Formula) -> Derivation {
        Derivation {
            conclusion: self.seq(phi.clone(), phi),
            rule: RuleTag::Identity,
            payload: Payload::None,
            premises: vec![],
        }
    }

    /// `and(fam) |- fam[j]`
    pub fn conj_elim(&self, fam: Vec<Formula>, j: usize) -> Derivation {
        let succ = fam[j].clone();
        Derivation {
            conclusion: self.seq(Formula::And(fam), succ),
            rule: RuleTag::ConjElim,
            payload: Payload::Index(j),
            premises: vec![],
        }
    }

    /// From `phi |- psi_i` for each i: `phi |- and(psi_0,...)`.
    pub fn conj_intro(&self, antecedent: Formula, premises: Vec<Derivation>) -> Derivation {
        let fam: Vec<Formula> =
            premises.iter().map(|d| d.conclusion.succedent.clone()).collect();
        Derivation {
            conclusion: self.seq(antecedent, Formula::And(fam)),
            rule: RuleTag::ConjIntro,
            payload: Payload::None,
            premises,
        }
    }

    /// `fam[j] |- or(fam)`
    pub fn disj_intro(&self, fam: Vec<Formula>, j: usize) -> Derivation {
        let ante = fam[j].clone();
        Derivation {
            conclusion: self.seq(ante, Formula::Or(fam)),
            rule: RuleTag::DisjIntro,
            payload: Payload::Index(j),
            premises: vec![],
        }
    }

    /// From `fam[i] |- theta` for each i: `or(fam) |- theta`.
    pub fn disj_elim(&self, theta: Formula, premises: Vec<Derivation>) -> Derivation {
        let fam: Vec<Formula> =
            premises.iter().map(|d| d.conclusion.antecedent.clone()).collect();
        Derivation {
            conclusion: self.seq(Formula::Or(fam), theta),
            rule: RuleTag::DisjElim,
            payload: Payload::None,
            premises,
        }
    }

    /// From `phi |- psi` and `psi |- theta`: `phi |- theta`.
    pub fn cut(&self, d1: Derivation, d2: Derivation) -> Derivation {
        assert_eq!(d1.conclusion.succedent, d2.conclusion.antecedent, "cut mismatch");
        let conclusion =
            self.seq(d1.conclusion.antecedent.clone(), d2.conclusion.succedent.clone());
        Derivation {
            conclusion,
            rule: RuleTag::Cut,
            payload: Payload::None,
            premises: vec![d1, d2],
        }
    }

    /// From `and(phi, psi) |- eta`: `phi |- imp(psi, eta)`.
    pub fn imp_intro(&self, d: Derivation) -> Derivation {
        let Formula::And(fam) = &d.conclusion.antecedent else {
            panic!("imp_intro premise must have a binary conjunction antecedent")
        };
        let [phi, psi] = fam.as_slice() else { panic!("imp_intro needs width 2") };
        let conclusion = self.seq(
            phi.clone(),
            Formula::imp(psi.clone(), d.conclusion.succedent.clone()),
        );
        Derivation { conclusion, rule: RuleTag::ImpIntro, payload: Payload::None, premises: vec![d] }
    }

    /// From `phi |- imp(psi, eta)`: `and(phi, psi) |- eta`.
    pub fn imp_elim(&self, d: Derivation) -> Derivation {
        let Formula::Imp(psi, eta) = &d.conclusion.succedent else {
            panic!("imp_elim premise must conclude an implication")
        };
        let conclusion = self.seq(
            Formula::And(vec![d.conclusion.antecedent.clone(), psi.as_ref().clone()]),
            eta.as_ref().clone(),
        );
        Derivation { conclusion, rule: RuleTag::ImpElim, payload: Payload::None, premises: vec![d] }
    }

    /// `and(a, b) |- and(b, a)`
    pub fn and_swap(&self, a: Formula, b: Formula) -> Derivation {
        let fam = vec![a.clone(), b.clone()];
        self.conj_intro(
            Formula::And(fam.clone()),
            vec![self.conj_elim(fam.clone(), 1), self.conj_elim(fam, 0)],
        )
    }

    /// From `chi |- goal`: `chi |- imp(b_0, imp(b_1, ... goal))`.
    pub fn weaken_under_imps(&self, d: Derivation, bs: &[Formula]) -> Derivation {
        match bs.split_first() {
            None => d,
            Some((b, rest)) => {
                let chi = d.conclusion.antecedent.clone();
                let fam = vec![chi.clone(), b.clone()];
                let widened = self.cut(self.conj_elim(fam, 0), d);
                self.imp_intro(self.weaken_under_imps(widened, rest))
            }
        }
    }
}

/// A checked derivation of the distributivity law
/// `and(or(phi,psi_0), ..., or(phi,psi_{n-1})) |- or(phi, and(psi_0,...,psi_{n-1}))`,
/// built by discharging the disjunctions one at a time and passing the
/// result through a height-1 dual-dist instance whose bar is the full
/// first level.
pub fn derive_distributive_law(
    sig: &Signature,
    phi: &Formula,
    psis: &[Formula],
) -> Result<Derivation, DeriveError> {
    let n = psis.len();
    if n == 0 || n > sig.conn_bound() {
        return Err(DeriveError::Width { width: n, bound: sig.conn_bound() });
    }
    sig.check_formula(phi)?;
    let mut ctx = phi.free_vars();
    for psi in psis {
        sig.check_formula(psi)?;
        ctx.extend(psi.free_vars());
    }
    let b = DerivationBuilder::new(ctx.into_iter().collect());

    let disjuncts: Vec<Formula> =
        psis.iter().map(|p| Formula::Or(vec![phi.clone(), p.clone()])).collect();
    let big_and = Formula::And(disjuncts.clone());
    let all_psis = Formula::And(psis.to_vec());
    let goal = Formula::Or(vec![phi.clone(), all_psis.clone()]);

    // rest(k) = imp(A_k, rest(k+1)), rest(n) = goal
    let mut rest = vec![goal.clone()];
    for k in (0..n).rev() {
        let inner = rest.last().unwrap().clone();
        rest.push(Formula::imp(disjuncts[k].clone(), inner));
    }
    rest.reverse(); // rest[k] for k = 0..=n

    let prefix = |k: usize| Formula::And(psis[..k].to_vec());

    // claim(k): and(psi_0..psi_{k-1}) |- rest(k), downward from k = n
    let mut claim = b.disj_intro(vec![phi.clone(), all_psis.clone()], 1);
    for k in (0..n).rev() {
        let p_k = prefix(k);

        // case phi: phi |- imp(P_k, rest(k+1))
        let phi_to_goal = b.disj_intro(vec![phi.clone(), all_psis.clone()], 0);
        let mut tail = vec![p_k.clone()];
        tail.extend(disjuncts[k + 1..].iter().cloned());
        let case_phi = b.weaken_under_imps(phi_to_goal, &tail);

        // case psi_k: psi_k |- imp(P_k, rest(k+1))
        // and(psi_k, P_k) proves each of psi_0..psi_k, hence P_{k+1}
        let pair = vec![psis[k].clone(), p_k.clone()];
        let mut parts = Vec::with_capacity(k + 1);
        for i in 0..k {
            let get_pk = b.conj_elim(pair.clone(), 1);
            let get_i = b.conj_elim(psis[..k].to_vec(), i);
            parts.push(b.cut(get_pk, get_i));
        }
        parts.push(b.conj_elim(pair.clone(), 0));
        let to_next_prefix = b.conj_intro(Formula::And(pair.clone()), parts);
        let case_psi = b.imp_intro(b.cut(to_next_prefix, claim.clone()));

        let curried = Formula::imp(p_k.clone(), rest[k + 1].clone());
        let split = b.disj_elim(curried, vec![case_phi, case_psi]);
        let applied = b.imp_elim(split);
        let swapped = b.cut(b.and_swap(p_k.clone(), disjuncts[k].clone()), applied);
        claim = b.imp_intro(swapped);
    }

    // big_and |- rest(0), then peel the implications off one by one
    let empty_prefix = b.conj_intro(big_and.clone(), vec![]);
    let mut cur = b.cut(empty_prefix, claim);
    for k in 0..n {
        let stepped = b.imp_elim(cur);
        let pick = b.conj_intro(
            big_and.clone(),
            vec![b.identity(big_and.clone()), b.conj_elim(disjuncts.clone(), k)],
        );
        cur = b.cut(pick, stepped);
    }
    debug_assert_eq!(cur.conclusion.succedent, goal);

    // dual-dist wrapper: height-1 tree, root labeled with the goal,
    // level-1 nodes labeled with the or-conjuncts, bar = full level 1
    let mut tree = TreeFamily { gamma: n, height: 1, ..TreeFamily::default() };
    tree.labels.insert(Vec::new(), goal.clone());
    for (i, d) in disjuncts.iter().enumerate() {
        tree.labels.insert(vec![i], d.clone());
    }
    let bar = Bar::full_level(n, 1);
    let wrapped_ante =
        Formula::And(disjuncts.iter().map(|d| Formula::Or(vec![d.clone()])).collect());
    let wrapper = Derivation {
        conclusion: Sequent::new(wrapped_ante.clone(), b.ctx.clone(), goal.clone())
            .expect("context covers free variables"),
        rule: RuleTag::DualDist,
        payload: Payload::Tree(tree, bar),
        premises: vec![cur],
    };

    // glue: big_and |- and(or(A_0), ..., or(A_{n-1})), then cut
    let glue_children: Vec<Derivation> = (0..n)
        .map(|i| {
            b.cut(
                b.conj_elim(disjuncts.clone(), i),
                b.disj_intro(vec![disjuncts[i].clone()], 0),
            )
        })
        .collect();
    let glue = b.conj_intro(big_and, glue_children);
    Ok(b.cut(glue, wrapper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_derivation, RuleTag};
    use crate::syntax::{parse_formula, parse_signature, Theory};

    fn sig() -> Signature {
        parse_signature("sort S\nrel P : S\nrel Q : S\nrel R : S,S\nconst c : S\n").unwrap()
    }

    fn contains_dual_dist(d: &Derivation) -> bool {
        d.rule == RuleTag::DualDist || d.premises.iter().any(contains_dual_dist)
    }

    #[test]
    fn law_width_one() {
        let s = sig();
        let phi = parse_formula("P(c)", &s).unwrap();
        let psi = parse_formula("Q(c)", &s).unwrap();
        let d = derive_distributive_law(&s, &phi, std::slice::from_ref(&psi)).unwrap();
        let expected_ante = Formula::And(vec![Formula::Or(vec![phi.clone(), psi.clone()])]);
        let expected_succ = Formula::Or(vec![phi, Formula::And(vec![psi])]);
        assert_eq!(d.conclusion.antecedent, expected_ante);
        assert_eq!(d.conclusion.succedent, expected_succ);
        let theory = Theory::empty(s.clone());
        check_derivation(&s, &theory, &d).unwrap();
        assert!(contains_dual_dist(&d));
    }

    #[test]
    fn law_checks_for_widths_up_to_four() {
        let s = sig();
        let phi = parse_formula("P(x)", &s).unwrap();
        let theory = Theory::empty(s.clone());
        for n in 1..=4usize {
            let psis: Vec<Formula> = (0..n)
                .map(|i| {
                    if i % 2 == 0 {
                        parse_formula("Q(x)", &s).unwrap()
                    } else {
                        parse_formula("R(x,c)", &s).unwrap()
                    }
                })
                .collect();
            let d = derive_distributive_law(&s, &phi, &psis).unwrap();
            check_derivation(&s, &theory, &d)
                .unwrap_or_else(|e| panic!("width {n}: {e}"));
            assert_eq!(
                d.conclusion.antecedent,
                Formula::And(
                    psis.iter()
                        .map(|p| Formula::Or(vec![phi.clone(), p.clone()]))
                        .collect()
                )
            );
            assert_eq!(
                d.conclusion.succedent,
                Formula::Or(vec![phi.clone(), Formula::And(psis.clone())])
            );
            assert!(contains_dual_dist(&d));
        }
    }

    #[test]
    fn width_zero_rejected() {
        let s = sig();
        let phi = parse_formula("P(c)", &s).unwrap();
        assert!(matches!(
            derive_distributive_law(&s, &phi, &[]),
            Err(DeriveError::Width { .. })
        ));
    }
}
