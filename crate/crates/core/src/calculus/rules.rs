//! Schema checks, one per rule tag.
//!
//! Degenerate widths follow the empty-family conventions: a width-0
//! conjunction introduction may conclude `true` or `and()`, a width-0
//! disjunction elimination may start from `false` or `or()`.

use std::collections::BTreeSet;

use crate::syntax::{
    check_substitution, substitute, Formula, Signature, Substitution, Theory, Var,
};

use super::{
    check_bar, format_address, payload_err, schema, Bar, CheckError, Payload,
    RuleInstance, RuleTag, TreeFamily, MAX_TREE_NODES,
};

pub(super) fn check(
    sig: &Signature,
    theory: &Theory,
    inst: &RuleInstance,
) -> Result<(), CheckError> {
    let tag = inst.tag;
    match tag {
        RuleTag::Identity => {
            expect_premises(inst, 0)?;
            if inst.conclusion.antecedent != inst.conclusion.succedent {
                return Err(schema(tag, "antecedent and succedent must be identical"));
            }
            Ok(())
        }

        RuleTag::Substitution => {
            expect_premises(inst, 1)?;
            let p = &inst.premises[0];
            let (terms, target) = match &inst.payload {
                Payload::Subst { terms, context } => (terms, context),
                _ => return Err(payload_err(tag, "expected terms and a target context")),
            };
            if terms.len() != p.context.len() {
                return Err(payload_err(
                    tag,
                    format!(
                        "substitution provides {} terms for a context of {} variables",
                        terms.len(),
                        p.context.len()
                    ),
                ));
            }
            let sub: Substitution =
                p.context.iter().cloned().zip(terms.iter().cloned()).collect();
            check_substitution(sig, &sub)?;
            if inst.conclusion.context != *target {
                return Err(schema(tag, "conclusion context differs from the payload context"));
            }
            // the target context must include all variables of the terms
            let mut term_vars = BTreeSet::new();
            for t in terms {
                term_vars.extend(t.free_vars());
            }
            for v in &term_vars {
                if !target.contains(v) {
                    return Err(schema(
                        tag,
                        format!("target context misses term variable `{}`", v.name),
                    ));
                }
            }
            let want_ante = substitute(&p.antecedent, &sub);
            let want_succ = substitute(&p.succedent, &sub);
            if inst.conclusion.antecedent != want_ante {
                return Err(schema(tag, "antecedent is not the substituted premise antecedent"));
            }
            if inst.conclusion.succedent != want_succ {
                return Err(schema(tag, "succedent is not the substituted premise succedent"));
            }
            Ok(())
        }

        RuleTag::Cut => {
            expect_premises(inst, 2)?;
            let (p1, p2) = (&inst.premises[0], &inst.premises[1]);
            same_context(tag, &p1.context, &inst.conclusion.context)?;
            same_context(tag, &p2.context, &inst.conclusion.context)?;
            if p1.succedent != p2.antecedent {
                return Err(schema(tag, "cut formula mismatch between the premises"));
            }
            if inst.conclusion.antecedent != p1.antecedent {
                return Err(schema(tag, "conclusion antecedent differs from first premise"));
            }
            if inst.conclusion.succedent != p2.succedent {
                return Err(schema(tag, "conclusion succedent differs from second premise"));
            }
            Ok(())
        }

        RuleTag::EqRefl => {
            expect_premises(inst, 0)?;
            if inst.conclusion.antecedent != Formula::True {
                return Err(schema(tag, "antecedent must be true"));
            }
            let [x] = inst.conclusion.context.as_slice() else {
                return Err(schema(tag, "context must be a single variable"));
            };
            let want = Formula::Eq(
                crate::syntax::Term::Var(x.clone()),
                crate::syntax::Term::Var(x.clone()),
            );
            if inst.conclusion.succedent != want {
                return Err(schema(tag, "succedent must equate the context variable with itself"));
            }
            Ok(())
        }

        RuleTag::EqSubst => {
            expect_premises(inst, 0)?;
            let (xs, ys, ws, phi) = match &inst.payload {
                Payload::EqSubst { xs, ys, ws, formula } => (xs, ys, ws, formula),
                _ => return Err(payload_err(tag, "expected blocks x, y, w and a formula")),
            };
            if xs.len() != ys.len() || xs.len() != ws.len() {
                return Err(payload_err(tag, "blocks x, y, w must have equal length"));
            }
            for block in [xs, ys, ws] {
                distinct_vars(tag, block)?;
            }
            for i in 0..xs.len() {
                if xs[i].sort != ys[i].sort || xs[i].sort != ws[i].sort {
                    return Err(schema(tag, "blocks x, y, w must agree in sorts positionwise"));
                }
            }
            let to_x: Substitution = ws
                .iter()
                .cloned()
                .zip(xs.iter().map(|v| crate::syntax::Term::Var(v.clone())))
                .collect();
            let to_y: Substitution = ws
                .iter()
                .cloned()
                .zip(ys.iter().map(|v| crate::syntax::Term::Var(v.clone())))
                .collect();
            let eqs = Formula::And(
                xs.iter()
                    .zip(ys)
                    .map(|(x, y)| {
                        Formula::Eq(
                            crate::syntax::Term::Var(x.clone()),
                            crate::syntax::Term::Var(y.clone()),
                        )
                    })
                    .collect(),
            );
            let want_ante = Formula::And(vec![eqs, substitute(phi, &to_x)]);
            if inst.conclusion.antecedent != want_ante {
                return Err(schema(tag, "antecedent must be and(block equalities, phi[x/w])"));
            }
            if inst.conclusion.succedent != substitute(phi, &to_y) {
                return Err(schema(tag, "succedent must be phi[y/w]"));
            }
            let ctx: BTreeSet<&Var> = inst.conclusion.context.iter().collect();
            for v in xs.iter().chain(ys).chain(phi.free_vars().iter()) {
                if !ctx.contains(v) {
                    return Err(schema(
                        tag,
                        format!("context must contain x, y and the free variables of phi; missing `{}`", v.name),
                    ));
                }
            }
            Ok(())
        }

        RuleTag::ConjElim => {
            expect_premises(inst, 0)?;
            let j = index_payload(tag, &inst.payload)?;
            let Formula::And(fam) = &inst.conclusion.antecedent else {
                return Err(schema(tag, "antecedent must be a conjunction"));
            };
            if j >= fam.len() {
                return Err(schema(tag, format!("index {j} out of range for width {}", fam.len())));
            }
            if inst.conclusion.succedent != fam[j] {
                return Err(schema(tag, "succedent must be the selected conjunct"));
            }
            Ok(())
        }

        RuleTag::ConjIntro => {
            if inst.premises.is_empty() {
                if !matches!(inst.conclusion.succedent, Formula::True)
                    && inst.conclusion.succedent != Formula::And(vec![])
                {
                    return Err(schema(tag, "width-0 introduction must conclude true or and()"));
                }
                return Ok(());
            }
            for p in &inst.premises {
                same_context(tag, &p.context, &inst.conclusion.context)?;
                if p.antecedent != inst.conclusion.antecedent {
                    return Err(schema(tag, "all premises must share the conclusion antecedent"));
                }
            }
            let want =
                Formula::And(inst.premises.iter().map(|p| p.succedent.clone()).collect());
            if inst.conclusion.succedent != want {
                return Err(schema(tag, "succedent must conjoin the premise succedents in order"));
            }
            Ok(())
        }

        RuleTag::DisjIntro => {
            expect_premises(inst, 0)?;
            let j = index_payload(tag, &inst.payload)?;
            let Formula::Or(fam) = &inst.conclusion.succedent else {
                return Err(schema(tag, "succedent must be a disjunction"));
            };
            if j >= fam.len() {
                return Err(schema(tag, format!("index {j} out of range for width {}", fam.len())));
            }
            if inst.conclusion.antecedent != fam[j] {
                return Err(schema(tag, "antecedent must be the selected disjunct"));
            }
            Ok(())
        }

        RuleTag::DisjElim => {
            if inst.premises.is_empty() {
                if !matches!(inst.conclusion.antecedent, Formula::False)
                    && inst.conclusion.antecedent != Formula::Or(vec![])
                {
                    return Err(schema(tag, "width-0 elimination must start from false or or()"));
                }
                return Ok(());
            }
            for p in &inst.premises {
                same_context(tag, &p.context, &inst.conclusion.context)?;
                if p.succedent != inst.conclusion.succedent {
                    return Err(schema(tag, "all premises must share the conclusion succedent"));
                }
            }
            let want =
                Formula::Or(inst.premises.iter().map(|p| p.antecedent.clone()).collect());
            if inst.conclusion.antecedent != want {
                return Err(schema(tag, "antecedent must disjoin the premise antecedents in order"));
            }
            Ok(())
        }

        RuleTag::ImpIntro => {
            expect_premises(inst, 1)?;
            let p = &inst.premises[0];
            same_context(tag, &p.context, &inst.conclusion.context)?;
            let Formula::And(fam) = &p.antecedent else {
                return Err(schema(tag, "premise antecedent must be a binary conjunction"));
            };
            let [phi, psi] = fam.as_slice() else {
                return Err(schema(tag, "premise antecedent must be a binary conjunction"));
            };
            if inst.conclusion.antecedent != *phi {
                return Err(schema(tag, "conclusion antecedent must be the first conjunct"));
            }
            let want = Formula::imp(psi.clone(), p.succedent.clone());
            if inst.conclusion.succedent != want {
                return Err(schema(tag, "succedent must be imp(second conjunct, premise succedent)"));
            }
            Ok(())
        }

        RuleTag::ImpElim => {
            expect_premises(inst, 1)?;
            let p = &inst.premises[0];
            same_context(tag, &p.context, &inst.conclusion.context)?;
            let Formula::Imp(psi, eta) = &p.succedent else {
                return Err(schema(tag, "premise succedent must be an implication"));
            };
            let want_ante = Formula::And(vec![p.antecedent.clone(), psi.as_ref().clone()]);
            if inst.conclusion.antecedent != want_ante {
                return Err(schema(
                    tag,
                    "antecedent must be and(premise antecedent, implication hypothesis)",
                ));
            }
            if inst.conclusion.succedent != **eta {
                return Err(schema(tag, "succedent must be the implication conclusion"));
            }
            Ok(())
        }

        RuleTag::ExIntro | RuleTag::ExElim => {
            expect_premises(inst, 1)?;
            let p = &inst.premises[0];
            // downward: phi |-(x y) psi  ==>  ex y phi |-(x) psi
            let (wide, narrow) = match tag {
                RuleTag::ExIntro => (p, &inst.conclusion),
                _ => (&inst.conclusion, p),
            };
            let Formula::Exists(block, body) = &narrow.antecedent else {
                return Err(schema(tag, "expected an existential antecedent"));
            };
            if narrow.succedent != wide.succedent {
                return Err(schema(tag, "succedents must coincide"));
            }
            if wide.antecedent != **body {
                return Err(schema(tag, "antecedent must be the existential body"));
            }
            split_context(tag, &wide.context, &narrow.context, block)?;
            let succ_free = narrow.succedent.free_vars();
            for v in block {
                if succ_free.contains(v) {
                    return Err(schema(
                        tag,
                        format!("variable `{}` of the block is free in the succedent", v.name),
                    ));
                }
            }
            Ok(())
        }

        RuleTag::AllIntro | RuleTag::AllElim => {
            expect_premises(inst, 1)?;
            let p = &inst.premises[0];
            // downward: phi |-(x y) psi  ==>  phi |-(x) all y psi
            let (wide, narrow) = match tag {
                RuleTag::AllIntro => (p, &inst.conclusion),
                _ => (&inst.conclusion, p),
            };
            let Formula::Forall(block, body) = &narrow.succedent else {
                return Err(schema(tag, "expected a universal succedent"));
            };
            if narrow.antecedent != wide.antecedent {
                return Err(schema(tag, "antecedents must coincide"));
            }
            if wide.succedent != **body {
                return Err(schema(tag, "succedent must be the universal body"));
            }
            split_context(tag, &wide.context, &narrow.context, block)?;
            let ante_free = narrow.antecedent.free_vars();
            for v in block {
                if ante_free.contains(v) {
                    return Err(schema(
                        tag,
                        format!("variable `{}` of the block is free in the antecedent", v.name),
                    ));
                }
            }
            Ok(())
        }

        RuleTag::DualDist => {
            let (tree, bar) = tree_payload(tag, &inst.payload)?;
            check_tree(tag, tree, bar)?;
            let ctx = &inst.conclusion.context;
            let mut k = 0usize;
            for level in 0..tree.height {
                for f in super::addresses_of_length(tree.gamma, level) {
                    let Some(p) = inst.premises.get(k) else {
                        return Err(schema(tag, format!("missing premise for node {}", format_address(&f))));
                    };
                    same_context(tag, &p.context, ctx)?;
                    let succs: Vec<Formula> = (0..tree.gamma)
                        .map(|i| {
                            let mut g = f.clone();
                            g.push(i);
                            tree.labels[&g].clone()
                        })
                        .collect();
                    if p.antecedent != Formula::And(succs) {
                        return Err(schema(
                            tag,
                            format!("premise for node {} must conjoin the successor labels", format_address(&f)),
                        ));
                    }
                    if p.succedent != tree.labels[&f] {
                        return Err(schema(
                            tag,
                            format!("premise for node {} must conclude its label", format_address(&f)),
                        ));
                    }
                    k += 1;
                }
            }
            if inst.premises.len() != k {
                return Err(schema(
                    tag,
                    format!("expected {} premises, got {}", k, inst.premises.len()),
                ));
            }
            if inst.conclusion.succedent != tree.labels[&Vec::new()] {
                return Err(schema(tag, "conclusion succedent must be the root label"));
            }
            let conjuncts: Vec<Formula> = bar
                .addresses
                .iter()
                .map(|f| {
                    Formula::Or((1..=f.len()).map(|k| tree.labels[&f[..k].to_vec()].clone()).collect())
                })
                .collect();
            if inst.conclusion.antecedent != Formula::And(conjuncts) {
                return Err(schema(
                    tag,
                    "conclusion antecedent must conjoin, over the bar, the disjunctions of branch labels",
                ));
            }
            Ok(())
        }

        RuleTag::TransTrans => {
            let (tree, bar) = tree_payload(tag, &inst.payload)?;
            check_tree(tag, tree, bar)?;
            // side conditions: FV(phi_g) = FV(phi_f) ∪ x_g and x_g fresh for phi_f
            for (g, label) in &tree.labels {
                if g.is_empty() {
                    continue;
                }
                let f = g[..g.len() - 1].to_vec();
                let parent_free = tree.labels[&f].free_vars();
                let block = tree.block(g);
                distinct_vars(tag, block)?;
                for v in block {
                    if parent_free.contains(v) {
                        return Err(schema(
                            tag,
                            format!(
                                "block variable `{}` at {} is free in the parent label",
                                v.name,
                                format_address(g)
                            ),
                        ));
                    }
                }
                let mut want = parent_free.clone();
                want.extend(block.iter().cloned());
                if label.free_vars() != want {
                    return Err(schema(
                        tag,
                        format!(
                            "free variables at {} must be the parent's plus the block",
                            format_address(g)
                        ),
                    ));
                }
            }
            let mut k = 0usize;
            for level in 0..tree.height {
                for f in super::addresses_of_length(tree.gamma, level) {
                    let Some(p) = inst.premises.get(k) else {
                        return Err(schema(tag, format!("missing premise for node {}", format_address(&f))));
                    };
                    let label = &tree.labels[&f];
                    if p.antecedent != *label {
                        return Err(schema(
                            tag,
                            format!("premise for node {} must start from its label", format_address(&f)),
                        ));
                    }
                    if p.context != label.canonical_context() {
                        return Err(schema(
                            tag,
                            format!(
                                "premise context at {} must be the canonical context of its label",
                                format_address(&f)
                            ),
                        ));
                    }
                    let disjuncts: Vec<Formula> = (0..tree.gamma)
                        .map(|i| {
                            let mut g = f.clone();
                            g.push(i);
                            Formula::exists(tree.block(&g).to_vec(), tree.labels[&g].clone())
                        })
                        .collect();
                    if p.succedent != Formula::Or(disjuncts) {
                        return Err(schema(
                            tag,
                            format!(
                                "premise for node {} must disjoin the quantified successor labels",
                                format_address(&f)
                            ),
                        ));
                    }
                    k += 1;
                }
            }
            if inst.premises.len() != k {
                return Err(schema(
                    tag,
                    format!("expected {} premises, got {}", k, inst.premises.len()),
                ));
            }
            let root = &tree.labels[&Vec::new()];
            if inst.conclusion.antecedent != *root {
                return Err(schema(tag, "conclusion antecedent must be the root label"));
            }
            if inst.conclusion.context != root.canonical_context() {
                return Err(schema(tag, "conclusion context must be the canonical context of the root"));
            }
            let disjuncts: Vec<Formula> = bar
                .addresses
                .iter()
                .map(|f| {
                    let mut block: Vec<Var> = Vec::new();
                    let mut chain: Vec<Formula> = Vec::new();
                    for k in 1..=f.len() {
                        let prefix = f[..k].to_vec();
                        block.extend(tree.block(&prefix).iter().cloned());
                        chain.push(tree.labels[&prefix].clone());
                    }
                    Formula::exists(block, Formula::And(chain))
                })
                .collect();
            if inst.conclusion.succedent != Formula::Or(disjuncts) {
                return Err(schema(
                    tag,
                    "conclusion succedent must disjoin, over the bar, the quantified branch conjunctions",
                ));
            }
            Ok(())
        }

        RuleTag::TheoryAxiom => {
            expect_premises(inst, 0)?;
            match &inst.payload {
                Payload::TheoryAxiom { name: Some(name) } => match theory.axiom(name) {
                    Some(ax) if *ax == inst.conclusion => Ok(()),
                    Some(_) => Err(schema(tag, format!("conclusion differs from axiom `{name}`"))),
                    None => Err(schema(tag, format!("theory has no axiom named `{name}`"))),
                },
                Payload::TheoryAxiom { name: None } | Payload::None => {
                    if theory.contains(&inst.conclusion) {
                        Ok(())
                    } else {
                        Err(schema(tag, "conclusion is not an axiom of the theory"))
                    }
                }
                _ => Err(payload_err(tag, "expected an optional axiom name")),
            }
        }
    }
}

fn expect_premises(inst: &RuleInstance, n: usize) -> Result<(), CheckError> {
    if inst.premises.len() != n {
        return Err(schema(
            inst.tag,
            format!("expected {n} premises, got {}", inst.premises.len()),
        ));
    }
    Ok(())
}

fn index_payload(tag: RuleTag, payload: &Payload) -> Result<usize, CheckError> {
    match payload {
        Payload::Index(j) => Ok(*j),
        _ => Err(payload_err(tag, "expected a family index")),
    }
}

fn tree_payload<'a>(tag: RuleTag, payload: &'a Payload) -> Result<(&'a TreeFamily, &'a Bar), CheckError> {
    match payload {
        Payload::Tree(tree, bar) => Ok((tree, bar)),
        _ => Err(payload_err(tag, "expected a labeled tree and a bar")),
    }
}

fn check_tree(tag: RuleTag, tree: &TreeFamily, bar: &Bar) -> Result<(), CheckError> {
    if tree.gamma == 0 || tree.height == 0 {
        return Err(payload_err(tag, "branching and height must be positive"));
    }
    if tree.node_count() > MAX_TREE_NODES {
        return Err(payload_err(tag, "tree too large"));
    }
    for level in 0..=tree.height {
        for f in super::addresses_of_length(tree.gamma, level) {
            if !tree.labels.contains_key(&f) {
                return Err(payload_err(tag, format!("missing label at {}", format_address(&f))));
            }
        }
    }
    for addr in tree.labels.keys() {
        if addr.len() > tree.height || addr.iter().any(|&i| i >= tree.gamma) {
            return Err(payload_err(tag, format!("label address {} out of range", format_address(addr))));
        }
    }
    for addr in tree.blocks.keys() {
        if addr.is_empty() || addr.len() > tree.height || addr.iter().any(|&i| i >= tree.gamma) {
            return Err(payload_err(tag, format!("block address {} out of range", format_address(addr))));
        }
    }
    check_bar(tree.gamma, tree.height, bar)?;
    Ok(())
}

fn same_context(tag: RuleTag, a: &[Var], b: &[Var]) -> Result<(), CheckError> {
    if a != b {
        return Err(schema(tag, "contexts must coincide"));
    }
    Ok(())
}

/// Wide context must be narrow ++ block, exactly.
fn split_context(tag: RuleTag, wide: &[Var], narrow: &[Var], block: &[Var]) -> Result<(), CheckError> {
    if wide.len() != narrow.len() + block.len()
        || &wide[..narrow.len()] != narrow
        || &wide[narrow.len()..] != block
    {
        return Err(schema(tag, "premise context must extend the conclusion context by the block"));
    }
    Ok(())
}

fn distinct_vars(tag: RuleTag, block: &[Var]) -> Result<(), CheckError> {
    let mut seen = BTreeSet::new();
    for v in block {
        if !seen.insert(v) {
            return Err(schema(tag, format!("variable `{}` repeated in a block", v.name)));
        }
    }
    Ok(())
}
