//! Random Kripke models and formulas for the property suites.
//!
//! Models are built over a stage chain: a random poset of at most
//! `max_worlds` worlds is ranked by chain height, one chain of domains and
//! maps per sort is drawn, and every world takes the structure of its rank.
//! Transitions compose along the chain, so functoriality holds by
//! construction; maximal worlds get extra random tuples for variety.
//! The generator handles constants-only signatures.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::syntax::{Formula, Signature, Term, Var};

use super::{KripkeModel, Transition, World};

#[derive(Debug, Clone)]
pub struct ModelParams {
    pub max_worlds: usize,
    pub max_elems: usize,
    pub density: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams { max_worlds: 4, max_elems: 3, density: 0.5 }
    }
}

pub fn random_model(sig: &Signature, rng: &mut impl Rng, params: &ModelParams) -> KripkeModel {
    assert!(
        !sig.has_proper_functions(),
        "the random generator only covers constants-only signatures"
    );
    let n = rng.gen_range(1..=params.max_worlds);
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                leq[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    // rank = longest chain strictly below; ranks strictly increase along <
    let mut rank = vec![0usize; n];
    for i in 0..n {
        for j in 0..i {
            if leq[j][i] && rank[j] + 1 > rank[i] {
                rank[i] = rank[j] + 1;
            }
        }
    }
    let stages = rank.iter().max().copied().unwrap_or(0) + 1;

    // one chain of domains and forward maps per sort
    let mut sizes: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut chain_maps: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
    for sort in sig.sorts() {
        let mut szs = Vec::with_capacity(stages);
        let mut maps = Vec::new();
        for k in 0..stages {
            szs.push(rng.gen_range(1..=params.max_elems));
            if k > 0 {
                let map: Vec<usize> =
                    (0..szs[k - 1]).map(|_| rng.gen_range(0..szs[k])).collect();
                maps.push(map);
            }
        }
        sizes.insert(sort.clone(), szs);
        chain_maps.insert(sort.clone(), maps);
    }
    let map_between = |sort: &str, from: usize, to: usize, e: usize| -> usize {
        let maps = &chain_maps[sort];
        (from..to).fold(e, |acc, k| maps[k][acc])
    };

    // constants live at stage 0 and are pushed forward
    let mut const_at: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (f, _, result) in sig.functions() {
        let mut vals = Vec::with_capacity(stages);
        let mut v = rng.gen_range(0..sizes[result][0]);
        vals.push(v);
        for k in 1..stages {
            v = chain_maps[result][k - 1][v];
            vals.push(v);
        }
        const_at.insert(f.to_string(), vals);
    }

    // relation tables per stage, growing along the chain
    let mut rel_at: BTreeMap<String, Vec<BTreeSet<Vec<usize>>>> = BTreeMap::new();
    for (r, arg_sorts) in sig.relations() {
        let mut tables: Vec<BTreeSet<Vec<usize>>> = Vec::with_capacity(stages);
        for k in 0..stages {
            let mut table = BTreeSet::new();
            if k > 0 {
                for tuple in &tables[k - 1] {
                    let mapped: Vec<usize> = tuple
                        .iter()
                        .zip(arg_sorts)
                        .map(|(&e, s)| chain_maps[s][k - 1][e])
                        .collect();
                    table.insert(mapped);
                }
            }
            for tuple in all_tuples(arg_sorts, &sizes, k) {
                if !table.contains(&tuple) && rng.gen_bool(params.density) {
                    table.insert(tuple);
                }
            }
            tables.push(table);
        }
        rel_at.insert(r.to_string(), tables);
    }

    let mut worlds: Vec<World> = Vec::with_capacity(n);
    for (i, &rk) in rank.iter().enumerate() {
        let domains: BTreeMap<String, Vec<String>> = sig
            .sorts()
            .iter()
            .map(|s| {
                let names = (0..sizes[s][rk]).map(|e| format!("e{e}")).collect();
                (s.clone(), names)
            })
            .collect();
        let mut relations: BTreeMap<String, BTreeSet<Vec<usize>>> = sig
            .relations()
            .map(|(r, _)| (r.to_string(), rel_at[r][rk].clone()))
            .collect();
        // maximal worlds have no successors to preserve into
        let is_maximal = (0..n).all(|j| j == i || !leq[i][j]);
        if is_maximal {
            for (r, arg_sorts) in sig.relations() {
                let table = relations.get_mut(r).unwrap();
                for tuple in all_tuples(arg_sorts, &sizes, rk) {
                    if !table.contains(&tuple) && rng.gen_bool(params.density / 2.0) {
                        table.insert(tuple);
                    }
                }
            }
        }
        let functions: BTreeMap<String, BTreeMap<Vec<usize>, usize>> = sig
            .functions()
            .map(|(f, _, _)| (f.to_string(), BTreeMap::from([(vec![], const_at[f][rk])])))
            .collect();
        worlds.push(World { name: format!("w{i}"), domains, relations, functions });
    }

    let mut transitions: BTreeMap<(usize, usize), Transition> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i][j] {
                let t: Transition = sig
                    .sorts()
                    .iter()
                    .map(|s| {
                        let m: Vec<usize> = (0..sizes[s][rank[i]])
                            .map(|e| map_between(s, rank[i], rank[j], e))
                            .collect();
                        (s.clone(), m)
                    })
                    .collect();
                transitions.insert((i, j), t);
            }
        }
    }

    KripkeModel { signature: sig.clone(), worlds, leq, transitions }
}

fn all_tuples(
    arg_sorts: &[String],
    sizes: &BTreeMap<String, Vec<usize>>,
    stage: usize,
) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for s in arg_sorts {
        let size = sizes[s][stage];
        let mut next = Vec::with_capacity(out.len() * size);
        for t in &out {
            for e in 0..size {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone)]
pub struct FormulaParams {
    pub max_depth: usize,
    pub max_width: usize,
    pub max_block: usize,
    /// Draw implications and universals too (full first-order shape);
    /// disable for coherent formulas.
    pub full_first_order: bool,
    pub allow_equality: bool,
}

impl Default for FormulaParams {
    fn default() -> Self {
        FormulaParams {
            max_depth: 2,
            max_width: 3,
            max_block: 2,
            full_first_order: true,
            allow_equality: true,
        }
    }
}

/// A random well-sorted formula whose free variables come from `pool`.
pub fn random_formula(
    sig: &Signature,
    rng: &mut impl Rng,
    params: &FormulaParams,
    pool: &[Var],
) -> Formula {
    let mut counter = 0usize;
    go(sig, rng, params, &mut pool.to_vec(), params.max_depth, &mut counter)
}

fn random_term(sig: &Signature, rng: &mut impl Rng, scope: &[Var], sort: &str) -> Option<Term> {
    let vars: Vec<&Var> = scope.iter().filter(|v| v.sort == sort).collect();
    let consts = sig.constants_of(sort);
    let total = vars.len() + consts.len();
    if total == 0 {
        return None;
    }
    let pick = rng.gen_range(0..total);
    if pick < vars.len() {
        Some(Term::Var(vars[pick].clone()))
    } else {
        Some(Term::constant(consts[pick - vars.len()].clone()))
    }
}

fn random_atom(
    sig: &Signature,
    rng: &mut impl Rng,
    params: &FormulaParams,
    scope: &[Var],
) -> Formula {
    let rels: Vec<(&str, &[String])> = sig.relations().collect();
    for _ in 0..8 {
        if params.allow_equality && !sig.sorts().is_empty() && rng.gen_ratio(1, 6) {
            let sort = &sig.sorts()[rng.gen_range(0..sig.sorts().len())];
            if let (Some(a), Some(b)) = (
                random_term(sig, rng, scope, sort),
                random_term(sig, rng, scope, sort),
            ) {
                return Formula::Eq(a, b);
            }
        }
        if rels.is_empty() {
            break;
        }
        let (name, arg_sorts) = rels[rng.gen_range(0..rels.len())];
        let args: Option<Vec<Term>> = arg_sorts
            .iter()
            .map(|s| random_term(sig, rng, scope, s))
            .collect();
        if let Some(args) = args {
            return Formula::Atom(name.to_string(), args);
        }
    }
    if rng.gen_bool(0.5) {
        Formula::True
    } else {
        Formula::False
    }
}

fn go(
    sig: &Signature,
    rng: &mut impl Rng,
    params: &FormulaParams,
    scope: &mut Vec<Var>,
    depth: usize,
    counter: &mut usize,
) -> Formula {
    if depth == 0 {
        return match rng.gen_range(0..8) {
            0 => Formula::True,
            1 => Formula::False,
            _ => random_atom(sig, rng, params, scope),
        };
    }
    let n_kinds = if params.full_first_order { 6 } else { 3 };
    match rng.gen_range(0..n_kinds) {
        0 => random_atom(sig, rng, params, scope),
        1 => {
            let w = rng.gen_range(0..=params.max_width);
            let fs = (0..w)
                .map(|_| go(sig, rng, params, scope, depth - 1, counter))
                .collect();
            Formula::And(fs)
        }
        2 => {
            let w = rng.gen_range(0..=params.max_width);
            let fs = (0..w)
                .map(|_| go(sig, rng, params, scope, depth - 1, counter))
                .collect();
            Formula::Or(fs)
        }
        3 if !params.full_first_order => unreachable!(),
        3 => {
            let a = go(sig, rng, params, scope, depth - 1, counter);
            let b = go(sig, rng, params, scope, depth - 1, counter);
            Formula::imp(a, b)
        }
        k => {
            // quantifier: fresh block over the first sort with a constant
            let block_len = rng.gen_range(1..=params.max_block);
            let sort = sig.sorts()[rng.gen_range(0..sig.sorts().len())].clone();
            let block: Vec<Var> = (0..block_len)
                .map(|_| {
                    *counter += 1;
                    Var::new(format!("u{counter}"), sort.clone())
                })
                .collect();
            scope.extend(block.iter().cloned());
            let body = go(sig, rng, params, scope, depth - 1, counter);
            scope.truncate(scope.len() - block.len());
            if k == 4 {
                Formula::exists(block, body)
            } else {
                Formula::forall(block, body)
            }
        }
    }
}

/// Coherent variant of [`random_formula`]: no implication, no universal.
pub fn random_coherent_formula(
    sig: &Signature,
    rng: &mut impl Rng,
    params: &FormulaParams,
    pool: &[Var],
) -> Formula {
    let params = FormulaParams { full_first_order: false, ..params.clone() };
    let mut counter = 0usize;
    let mut scope = pool.to_vec();
    let phi = go(sig, rng, &params, &mut scope, params.max_depth, &mut counter);
    debug_assert!(crate::saturate::is_coherent(&phi));
    phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_signature;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sig() -> Signature {
        parse_signature("sort S\nrel P : S\nrel Q : S\nrel R : S,S\nconst c : S\nconst d : S\n")
            .unwrap()
    }

    #[test]
    fn random_models_validate() {
        let s = sig();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let params = ModelParams::default();
        for _ in 0..100 {
            let m = random_model(&s, &mut rng, &params);
            m.validate().unwrap_or_else(|e| panic!("generated model invalid: {e}"));
        }
    }

    #[test]
    fn random_formulas_are_well_sorted() {
        let s = sig();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pool = vec![Var::new("x", "S"), Var::new("y", "S")];
        let params = FormulaParams::default();
        for _ in 0..200 {
            let phi = random_formula(&s, &mut rng, &params, &pool);
            s.check_formula(&phi).unwrap();
        }
    }

    #[test]
    fn monotonicity_on_random_models() {
        // w <= w' and forcing at w imply forcing at w' after transport
        let s = sig();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mparams = ModelParams::default();
        let fparams = FormulaParams::default();
        let pool = vec![Var::new("x", "S")];
        for _ in 0..150 {
            let m = random_model(&s, &mut rng, &mparams);
            let phi = random_formula(&s, &mut rng, &fparams, &pool);
            for w in 0..m.worlds.len() {
                for env in m.assignments(w, &pool) {
                    if m.force(w, &env, &phi).unwrap() {
                        for w2 in 0..m.worlds.len() {
                            if m.leq[w][w2] {
                                let env2 = m.transport_env(w, w2, &env);
                                assert!(
                                    m.force(w2, &env2, &phi).unwrap(),
                                    "monotonicity violated for {phi}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}
