//! Command-line interface: derivation checking, forcing and sequent
//! evaluation on model files, the lattice toolbox, coherent entailment
//! with countermodels, canonical models, provability with Kripke
//! certificates, and the seeded property suites.
//!
//! Exit codes: 0 accept/true/found, 1 reject/false/none, 2 usage or
//! format errors. Reports start with a stable `key: value` block.
//! `IK_RESOURCE_LIMIT` caps search work.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ik_core::calculus::{check_derivation, parse_derivation};
use ik_core::kripke::{parse_model, write_model, Environment};
use ik_core::lattice::{
    construct_filter, duality_roundtrip, extend_filter, is_tree_distributive, parse_lattice,
    prime_filters, rs_filter, spectrum, DesignatedJoins, Filter, FinLattice, Ideal, RsOutcome,
    TreeDistVerdict,
};
use ik_core::props;
use ik_core::resource::Budget;
use ik_core::saturate::{
    canonical_kripke, countermodel, entails, provable_ik, CoherentTheory, CountermodelOutcome,
    EqMode, Fragment, ProvableOutcome,
};
use ik_core::syntax::{parse_formula, parse_sequent, parse_theory, Theory};

#[derive(Parser)]
#[command(name = "ik", version, about = "desk-scale workbench for intuitionistic first-order logic")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a derivation file against a theory
    Check {
        derivation: PathBuf,
        #[arg(long)]
        theory: PathBuf,
    },
    /// Force a closed formula at every world of a model
    Force {
        model: PathBuf,
        formula: String,
    },
    /// Evaluate a sequent on a model
    Holds {
        model: PathBuf,
        sequent: String,
    },
    /// Finite lattice toolbox
    Lattice {
        #[command(subcommand)]
        sub: LatticeCmd,
    },
    /// Coherent entailment by the two oracles
    Entails {
        theory: PathBuf,
        sequent: String,
    },
    /// Refuting term model for a coherent sequent
    Countermodel {
        theory: PathBuf,
        sequent: String,
        /// Also write the countermodel as a one-world model file
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Canonical Kripke model of a coherent theory
    Canonical {
        theory: PathBuf,
    },
    /// Decide a sequent in the canonical model of the translated theory
    Provable {
        theory: PathBuf,
        sequent: String,
        /// Reject if the needed fragment exceeds this connective depth
        #[arg(long)]
        fragment_depth: Option<usize>,
        /// Write the refutation certificate to a file
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Run the seeded property suites
    Props {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Run a single suite by name
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
        #[arg(long, default_value_t = 3)]
        max_elems: usize,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Binary distributivity check
    Distributive { file: PathBuf },
    /// Tree-indexed distributivity at the given branching and depth
    TreeDist {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        gamma: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// All prime filters preserving the designated joins
    Primes { file: PathBuf },
    /// Stepwise filter construction separating a from b
    Construct { file: PathBuf, a: String, b: String },
    /// Extend a filter to a prime filter disjoint from an ideal
    Extend {
        file: PathBuf,
        /// Generator of the filter to extend
        #[arg(long)]
        filter: String,
        /// Generator of the ideal to avoid
        #[arg(long)]
        ideal: String,
    },
    /// Poset of prime filters and the separation check
    Spectrum { file: PathBuf },
    /// Duality round trip through the spectrum's upsets
    Dual { file: PathBuf },
    /// Designated joins-and-meets filter search
    Rs { file: PathBuf, a: String, b: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_theory(path: &PathBuf) -> Result<Theory, String> {
    parse_theory(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_coherent(path: &PathBuf) -> Result<CoherentTheory, String> {
    CoherentTheory::new(load_theory(path)?).map_err(|e| e.to_string())
}

fn env_string(env: &Environment, model: &ik_core::kripke::KripkeModel, w: usize) -> String {
    let bindings: Vec<String> = env
        .iter()
        .map(|(v, &e)| format!("{} -> {}", v.name, model.worlds[w].domains[&v.sort][e]))
        .collect();
    format!("{{{}}}", bindings.join(", "))
}

fn run(cli: Cli) -> Result<u8, String> {
    let budget = Budget::from_env();
    match cli.cmd {
        Cmd::Check { derivation, theory } => {
            let th = load_theory(&theory)?;
            let d = parse_derivation(&read(&derivation)?, &th.signature)
                .map_err(|e| e.to_string())?;
            println!("command: check");
            println!("derivation: {}", derivation.display());
            println!("theory: {}", theory.display());
            match check_derivation(&th.signature, &th, &d) {
                Ok(()) => {
                    println!("result: accept");
                    Ok(0)
                }
                Err(e) => {
                    println!("result: reject");
                    println!("reason: {e}");
                    Ok(1)
                }
            }
        }

        Cmd::Force { model, formula } => {
            let m = parse_model(&read(&model)?).map_err(|e| e.to_string())?;
            m.validate().map_err(|e| e.to_string())?;
            let phi = parse_formula(&formula, &m.signature).map_err(|e| e.to_string())?;
            if !phi.free_vars().is_empty() {
                return Err("force takes a closed formula".to_string());
            }
            println!("command: force");
            println!("model: {}", model.display());
            println!("formula: {phi}");
            let mut all = true;
            for w in 0..m.worlds.len() {
                let forced = m
                    .force(w, &Environment::new(), &phi)
                    .map_err(|e| e.to_string())?;
                println!("world {}: {}", m.worlds[w].name, forced);
                all &= forced;
            }
            println!("result: {all}");
            Ok(if all { 0 } else { 1 })
        }

        Cmd::Holds { model, sequent } => {
            let m = parse_model(&read(&model)?).map_err(|e| e.to_string())?;
            m.validate().map_err(|e| e.to_string())?;
            let s = parse_sequent(&sequent, &m.signature).map_err(|e| e.to_string())?;
            println!("command: holds");
            println!("model: {}", model.display());
            println!("sequent: {s}");
            match m.sequent_counterexample(&s).map_err(|e| e.to_string())? {
                None => {
                    println!("result: holds");
                    Ok(0)
                }
                Some((w, env)) => {
                    println!("result: fails");
                    println!("world: {}", m.worlds[w].name);
                    println!("env: {}", env_string(&env, &m, w));
                    Ok(1)
                }
            }
        }

        Cmd::Lattice { sub } => run_lattice(sub, &budget),

        Cmd::Entails { theory, sequent } => {
            let t = load_coherent(&theory)?;
            let s = parse_sequent(&sequent, t.signature()).map_err(|e| e.to_string())?;
            println!("command: entails");
            println!("theory: {}", theory.display());
            println!("sequent: {s}");
            let yes = entails(&t, &s, EqMode::Syntactic, &budget).map_err(|e| e.to_string())?;
            println!("result: {}", if yes { "entailed" } else { "not-entailed" });
            Ok(if yes { 0 } else { 1 })
        }

        Cmd::Countermodel { theory, sequent, output } => {
            let t = load_coherent(&theory)?;
            let s = parse_sequent(&sequent, t.signature()).map_err(|e| e.to_string())?;
            println!("command: countermodel");
            println!("theory: {}", theory.display());
            println!("sequent: {s}");
            match countermodel(&t, &s, &budget).map_err(|e| e.to_string())? {
                CountermodelOutcome::Entailed => {
                    println!("result: entailed");
                    Ok(1)
                }
                CountermodelOutcome::Refuted { model, assignment } => {
                    println!("result: refuted");
                    for (v, c) in &assignment {
                        println!("assign: {} -> {c}", v.name);
                    }
                    let atoms: Vec<String> = model
                        .atoms
                        .iter()
                        .map(|(r, t)| {
                            if t.is_empty() {
                                r.clone()
                            } else {
                                format!("{r}({})", t.join(", "))
                            }
                        })
                        .collect();
                    println!("atoms: {{{}}}", atoms.join(", "));
                    if let Some(path) = output {
                        let text = one_world_model(t.signature(), &model);
                        std::fs::write(&path, text)
                            .map_err(|e| format!("{}: {e}", path.display()))?;
                        println!("written: {}", path.display());
                    }
                    Ok(0)
                }
            }
        }

        Cmd::Canonical { theory } => {
            let t = load_coherent(&theory)?;
            let m = canonical_kripke(&t, &budget).map_err(|e| e.to_string())?;
            println!("command: canonical");
            println!("theory: {}", theory.display());
            println!("worlds: {}", m.worlds.len());
            print!("{}", write_model(&m));
            Ok(0)
        }

        Cmd::Provable { theory, sequent, fragment_depth, certificate } => {
            let t = load_theory(&theory)?;
            let s = parse_sequent(&sequent, &t.signature).map_err(|e| e.to_string())?;
            let fragment =
                Fragment::closure(&[s.antecedent.clone(), s.succedent.clone()]);
            if let Some(limit) = fragment_depth {
                if fragment.max_depth > limit {
                    return Err(format!(
                        "fragment needs depth {}, over the limit {limit}",
                        fragment.max_depth
                    ));
                }
            }
            println!("command: provable");
            println!("theory: {}", theory.display());
            println!("sequent: {s}");
            match provable_ik(&t, &fragment, &s, &budget).map_err(|e| e.to_string())? {
                ProvableOutcome::Provable { worlds } => {
                    println!("result: provable");
                    println!("worlds: {worlds}");
                    Ok(0)
                }
                ProvableOutcome::Unprovable { certificate: cert } => {
                    println!("result: unprovable");
                    println!("worlds: {}", cert.model.worlds.len());
                    println!("refuted-at: {}", cert.model.worlds[cert.world].name);
                    println!("env: {}", env_string(&cert.env, &cert.model, cert.world));
                    if let Some(path) = certificate {
                        std::fs::write(&path, cert.to_file_string(&s))
                            .map_err(|e| format!("{}: {e}", path.display()))?;
                        println!("certificate: {}", path.display());
                    }
                    Ok(1)
                }
            }
        }

        Cmd::Props { seed, trials, suite, max_worlds, max_elems } => {
            println!("command: props");
            println!("seed: {seed}");
            println!("trials: {trials}");
            let mparams = ik_core::kripke::generate::ModelParams {
                max_worlds,
                max_elems,
                density: 0.5,
            };
            let reports = match suite.as_deref() {
                None => props::run_all(seed, trials),
                Some("soundness") => {
                    vec![props::soundness_suite_with(seed, trials, &mparams)]
                }
                Some("axiom-distributivity") => {
                    vec![props::axiom_distributivity_suite(seed, trials, 4)]
                }
                Some("distributive-law") => {
                    vec![props::distributive_law_suite(seed, 4, trials.min(200))]
                }
                Some("roundtrip") => vec![props::roundtrip_suite(seed, trials)],
                Some("monotonicity") => vec![props::monotonicity_suite(seed, trials)],
                Some("level-bars") => vec![props::level_bar_suite(seed, trials)],
                Some("lattice-catalog") => vec![props::lattice_catalog_suite(6)],
                Some("construct-filter") => vec![props::construct_filter_suite(6)],
                Some("duality") => vec![props::duality_suite(8, 4)],
                Some("baire") => vec![props::baire_suite(5)],
                Some("rs-filter") => vec![props::rs_filter_suite(seed, 8)],
                Some("coherent-oracles") => {
                    vec![props::coherent_oracle_suite(seed, trials)]
                }
                Some("monotone-growth") => {
                    vec![props::monotone_growth_suite(seed, trials)]
                }
                Some("morley") => vec![props::morley_suite(false)],
                Some("properties") => vec![props::properties_suite(seed, trials)],
                Some(other) => return Err(format!("unknown suite `{other}`")),
            };
            let mut all = true;
            for r in &reports {
                println!("{r}");
                all &= r.passed();
            }
            println!("result: {}", if all { "pass" } else { "fail" });
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn load_lattice(path: &PathBuf) -> Result<(FinLattice, DesignatedJoins), String> {
    parse_lattice(&read(path)?).map_err(|e| e.to_string())
}

fn element(l: &FinLattice, name: &str) -> Result<usize, String> {
    l.element(name).ok_or_else(|| format!("unknown element `{name}`"))
}

fn run_lattice(sub: LatticeCmd, budget: &Budget) -> Result<u8, String> {
    match sub {
        LatticeCmd::Distributive { file } => {
            let (l, _) = load_lattice(&file)?;
            println!("command: lattice distributive");
            println!("lattice: {}", file.display());
            match l.distributivity_witness() {
                None => {
                    println!("result: distributive");
                    Ok(0)
                }
                Some((a, b, c)) => {
                    println!("result: not-distributive");
                    println!("witness: a={} b={} c={}", l.name(a), l.name(b), l.name(c));
                    Ok(1)
                }
            }
        }
        LatticeCmd::TreeDist { file, gamma, depth } => {
            let (l, _) = load_lattice(&file)?;
            println!("command: lattice tree-dist");
            println!("lattice: {}", file.display());
            println!("gamma: {gamma}");
            println!("depth: {depth}");
            match is_tree_distributive(&l, gamma, depth, budget).map_err(|e| e.to_string())? {
                TreeDistVerdict::Holds => {
                    println!("result: tree-distributive");
                    Ok(0)
                }
                TreeDistVerdict::Fails { labeling, bar } => {
                    println!("result: fails");
                    for (addr, e) in labeling {
                        println!(
                            "label: {} -> {}",
                            ik_core::calculus::format_address(&addr),
                            l.name(e)
                        );
                    }
                    let bar_s: Vec<String> =
                        bar.iter().map(|a| ik_core::calculus::format_address(a)).collect();
                    println!("bar: {}", bar_s.join(" "));
                    Ok(1)
                }
            }
        }
        LatticeCmd::Primes { file } => {
            let (l, s) = load_lattice(&file)?;
            println!("command: lattice primes");
            println!("lattice: {}", file.display());
            let ps = prime_filters(&l, &s);
            println!("count: {}", ps.len());
            for f in &ps {
                println!("filter: {}", f.format(&l));
            }
            Ok(if ps.is_empty() { 1 } else { 0 })
        }
        LatticeCmd::Construct { file, a, b } => {
            let (l, s) = load_lattice(&file)?;
            let (a, b) = (element(&l, &a)?, element(&l, &b)?);
            println!("command: lattice construct");
            println!("lattice: {}", file.display());
            match construct_filter(&l, &s, a, b, budget) {
                Ok((f, trace)) => {
                    println!("result: found");
                    println!("filter: {}", f.format(&l));
                    let values: Vec<&str> =
                        trace.values().iter().map(|&e| l.name(e)).collect();
                    println!("trace: {}", values.join(" >= "));
                    println!("stabilized: {}", l.name(trace.stabilized));
                    Ok(0)
                }
                Err(e) => {
                    println!("result: failed");
                    println!("reason: {e}");
                    Ok(1)
                }
            }
        }
        LatticeCmd::Extend { file, filter, ideal } => {
            let (l, s) = load_lattice(&file)?;
            let f = Filter::up_of(&l, element(&l, &filter)?);
            let i = Ideal::down_of(&l, element(&l, &ideal)?);
            println!("command: lattice extend");
            println!("lattice: {}", file.display());
            match extend_filter(&l, &s, &f, &i, budget) {
                Ok(g) => {
                    println!("result: found");
                    println!("filter: {}", g.format(&l));
                    Ok(0)
                }
                Err(e) => {
                    println!("result: failed");
                    println!("reason: {e}");
                    Ok(1)
                }
            }
        }
        LatticeCmd::Spectrum { file } => {
            let (l, s) = load_lattice(&file)?;
            println!("command: lattice spectrum");
            println!("lattice: {}", file.display());
            let spec = spectrum(&l, &s);
            println!("points: {}", spec.filters.len());
            for (i, f) in spec.filters.iter().enumerate() {
                let above: Vec<&str> = (0..spec.filters.len())
                    .filter(|&j| i != j && spec.poset.leq[i][j])
                    .map(|j| spec.poset.names[j].as_str())
                    .collect();
                println!("point: {} <= [{}]", f.format(&l), above.join(", "));
            }
            match spec.separation_failure {
                None => {
                    println!("separation: ok");
                    Ok(0)
                }
                Some((a, b)) => {
                    println!("separation: fails at a={} b={}", l.name(a), l.name(b));
                    Ok(1)
                }
            }
        }
        LatticeCmd::Dual { file } => {
            let (l, s) = load_lattice(&file)?;
            println!("command: lattice dual");
            println!("lattice: {}", file.display());
            match duality_roundtrip(&l, &s) {
                Ok(report) => {
                    println!("result: isomorphic");
                    for (name, filters) in &report.element_map {
                        let pts: Vec<String> =
                            filters.iter().map(|i| format!("p{i}")).collect();
                        println!("map: {name} -> {{{}}}", pts.join(", "));
                    }
                    Ok(0)
                }
                Err(e) => {
                    println!("result: failed");
                    println!("reason: {e}");
                    Ok(1)
                }
            }
        }
        LatticeCmd::Rs { file, a, b } => {
            let (l, s) = load_lattice(&file)?;
            let (a, b) = (element(&l, &a)?, element(&l, &b)?);
            println!("command: lattice rs");
            println!("lattice: {}", file.display());
            match rs_filter(&l, &s, a, b).map_err(|e| e.to_string())? {
                RsOutcome::Found(f) => {
                    println!("result: found");
                    println!("filter: {}", f.format(&l));
                    Ok(0)
                }
                RsOutcome::NoneExists { examined, hypothesis_vacuous } => {
                    println!("result: none");
                    println!("hypothesis-vacuous: {hypothesis_vacuous}");
                    for (gen, reason) in examined {
                        println!("examined: {} rejected: {reason}", l.name(gen));
                    }
                    Ok(1)
                }
            }
        }
    }
}

/// A refuting term model as a one-world Kripke model file: forcing there is
/// classical satisfaction, so `holds` re-validates the countermodel.
fn one_world_model(
    sig: &ik_core::syntax::Signature,
    model: &ik_core::saturate::HerbrandModel,
) -> String {
    let mut out = String::new();
    for s in sig.sorts() {
        out.push_str(&format!("sort {s}\n"));
    }
    for (r, args) in sig.relations() {
        out.push_str(&format!("rel {r} : {}\n", args.join(",")));
    }
    for (f, args, result) in sig.functions() {
        if args.is_empty() {
            out.push_str(&format!("const {f} : {result}\n"));
        }
    }
    out.push_str("\nworlds w0\n");
    for s in sig.sorts() {
        let consts = sig.constants_of(s);
        out.push_str(&format!("domain w0 {s} = {{{}}}\n", consts.join(", ")));
    }
    let mut by_rel: std::collections::BTreeMap<&str, Vec<String>> = Default::default();
    for (r, _) in sig.relations() {
        by_rel.insert(r, Vec::new());
    }
    for (r, tuple) in &model.atoms {
        by_rel
            .get_mut(r.as_str())
            .expect("declared relation")
            .push(format!("({})", tuple.join(", ")));
    }
    for (r, tuples) in by_rel {
        out.push_str(&format!("rel w0 {r} = {{{}}}\n", tuples.join(", ")));
    }
    for (f, args, _) in sig.functions() {
        if args.is_empty() {
            out.push_str(&format!("fun w0 {f} = {{() -> {f}}}\n"));
        }
    }
    out
}
