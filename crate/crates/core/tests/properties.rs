//! Property tests over generated formulas: print/parse identity,
//! substitution laws, and the monotonicity facts about sequent evaluation.

use std::collections::BTreeSet;

use proptest::prelude::*;

use ik_core::kripke::generate::{random_model, ModelParams};
use ik_core::syntax::{
    check_substitution, parse_formula, parse_sequent, parse_signature, substitute, Formula,
    Sequent, Signature, Substitution, Term, Var,
};

fn sig() -> Signature {
    parse_signature("sort S\nrel P : S\nrel Q : S\nrel R : S,S\nconst c : S\nconst d : S\n")
        .unwrap()
}

fn var(name: &str) -> Var {
    Var::new(name, "S")
}

fn arb_term(vars: Vec<Var>) -> impl Strategy<Value = Term> {
    let consts = prop_oneof![Just(Term::constant("c")), Just(Term::constant("d"))];
    if vars.is_empty() {
        consts.boxed()
    } else {
        prop_oneof![
            2 => proptest::sample::select(vars).prop_map(Term::Var),
            1 => consts,
        ]
        .boxed()
    }
}

/// Formulas over the fixed variable pool, all quantifier-free so that
/// substitution composition is easy to state, plus a separate recursive
/// generator that includes binders.
fn arb_open_formula(vars: Vec<Var>) -> impl Strategy<Value = Formula> {
    let atom = {
        let vs = vars.clone();
        prop_oneof![
            (arb_term(vs.clone())).prop_map(|t| Formula::Atom("P".into(), vec![t])),
            (arb_term(vs.clone()), arb_term(vs.clone()))
                .prop_map(|(a, b)| Formula::Atom("R".into(), vec![a, b])),
            (arb_term(vs.clone()), arb_term(vs)).prop_map(|(a, b)| Formula::Eq(a, b)),
            Just(Formula::True),
            Just(Formula::False),
        ]
    };
    atom.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 0..3).prop_map(Formula::And),
            proptest::collection::vec(inner.clone(), 0..3).prop_map(Formula::Or),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

fn arb_formula(vars: Vec<Var>) -> impl Strategy<Value = Formula> {
    let open = arb_open_formula(vars.clone());
    let quantified = {
        let inner = arb_open_formula({
            let mut vs = vars;
            vs.push(var("b1"));
            vs.push(var("b2"));
            vs
        });
        (inner, any::<bool>(), 1usize..=2).prop_map(|(body, ex, n)| {
            let block: Vec<Var> = (1..=n).map(|i| var(&format!("b{i}"))).collect();
            if ex {
                Formula::exists(block, body)
            } else {
                Formula::forall(block, body)
            }
        })
    };
    prop_oneof![3 => open, 1 => quantified]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_parse_is_identity(phi in arb_formula(vec![var("x"), var("y")])) {
        let s = sig();
        prop_assume!(s.check_formula(&phi).is_ok());
        let printed = phi.to_string();
        let back = parse_formula(&printed, &s).unwrap();
        prop_assert_eq!(back, phi);
    }

    #[test]
    fn sequent_print_parse_is_identity(
        a in arb_formula(vec![var("x")]),
        b in arb_formula(vec![var("x")]),
    ) {
        let s = sig();
        prop_assume!(s.check_formula(&a).is_ok() && s.check_formula(&b).is_ok());
        let seq = Sequent::closed(a, b);
        let back = parse_sequent(&seq.to_string(), &s).unwrap();
        prop_assert_eq!(back, seq);
    }

    #[test]
    fn substitution_respects_free_variables(
        phi in arb_formula(vec![var("x"), var("y")]),
        tx in arb_term(vec![var("y"), var("z")]),
    ) {
        let s = sig();
        prop_assume!(s.check_formula(&phi).is_ok());
        let sub: Substitution = [(var("x"), tx.clone())].into();
        check_substitution(&s, &sub).unwrap();
        let out = substitute(&phi, &sub);
        // FV(result) == (FV(phi) \ {x}) ∪ (FV(tx) if x was free)
        let mut expected: BTreeSet<Var> = phi.free_vars();
        let had_x = expected.remove(&var("x"));
        if had_x {
            expected.extend(tx.free_vars());
        }
        prop_assert_eq!(out.free_vars(), expected);
    }

    #[test]
    fn substitution_composes_on_disjoint_domains(
        phi in arb_open_formula(vec![var("x"), var("y")]),
        tx in arb_term(vec![]),
        ty in arb_term(vec![]),
    ) {
        // ground substituents keep the composed map simple
        let s = sig();
        prop_assume!(s.check_formula(&phi).is_ok());
        let sigma: Substitution = [(var("x"), tx.clone())].into();
        let tau: Substitution = [(var("y"), ty.clone())].into();
        let lhs = substitute(&substitute(&phi, &sigma), &tau);
        let composed: Substitution = [(var("x"), tx), (var("y"), ty)].into();
        let rhs = substitute(&phi, &composed);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_composition_up_to_bound_renaming(
        phi in arb_formula(vec![var("x"), var("y")]),
        tx in arb_term(vec![var("y")]),
    ) {
        // with capture-avoidance in play the composite agrees up to
        // renaming of bound variables
        let s = sig();
        prop_assume!(s.check_formula(&phi).is_ok());
        let sigma: Substitution = [(var("x"), tx.clone())].into();
        let tau: Substitution = [(var("y"), Term::constant("c"))].into();
        let lhs = substitute(&substitute(&phi, &sigma), &tau);
        let tx_after: Term = ik_core::syntax::substitute_term(&tx, &tau);
        let composed: Substitution =
            [(var("x"), tx_after), (var("y"), Term::constant("c"))].into();
        let rhs = substitute(&phi, &composed);
        prop_assert!(lhs.alpha_eq(&rhs), "{lhs} vs {rhs}");
    }
}

/// Sequent evaluation is antitone in the antecedent and monotone in the
/// succedent under pointwise forcing implication.
#[test]
fn sequent_evaluation_monotonicity() {
    use rand::SeedableRng;
    let s = sig();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let params = ModelParams::default();
    let mut checked = 0usize;
    for _ in 0..400 {
        let m = random_model(&s, &mut rng, &params);
        // phi' = phi ∧ extra implies phi pointwise; psi implies psi ∨ extra
        let fparams = ik_core::kripke::generate::FormulaParams {
            max_depth: 1,
            max_width: 2,
            ..Default::default()
        };
        let pool = vec![var("x")];
        let phi =
            ik_core::kripke::generate::random_formula(&s, &mut rng, &fparams, &pool);
        let psi =
            ik_core::kripke::generate::random_formula(&s, &mut rng, &fparams, &pool);
        let extra =
            ik_core::kripke::generate::random_formula(&s, &mut rng, &fparams, &pool);
        let stronger = Formula::And(vec![phi.clone(), extra.clone()]);
        let weaker = Formula::Or(vec![psi.clone(), extra]);
        let base = Sequent::closed(phi, psi.clone());
        let anti = Sequent::closed(stronger.clone(), psi);
        let mono = Sequent::closed(base.antecedent.clone(), weaker);
        if m.holds_sequent(&base).unwrap() {
            checked += 1;
            assert!(
                m.holds_sequent(&anti).unwrap(),
                "antitone failure: {anti} on a model where {base} holds"
            );
            assert!(
                m.holds_sequent(&mono).unwrap(),
                "monotone failure: {mono} on a model where {base} holds"
            );
        }
    }
    assert!(checked > 50, "too few engaged trials: {checked}");
}
