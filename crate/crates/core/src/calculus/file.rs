//! Line-oriented derivation files. One node per line:
//!
//! ```text
//! <id>: <rule-tag> premises=[id,...] payload={...} conclusion=<sequent>
//! ```
//!
//! `premises` and `payload` may be omitted. Premises must refer to ids
//! defined on earlier lines (sharing is allowed); the last line is the root.
//! Payload keys by rule:
//!
//! * `j=<n>` — conj-elim / disj-intro index
//! * `terms=[t; ...], context=[x:S; ...]` — substitution
//! * `xs=[...], ys=[...], ws=[...], formula=<formula>` — eq-subst
//! * `gamma=<n>, height=<n>, labels=[<0,1> -> <formula>; ...],`
//!   `bar=[<0>; <1,0>], blocks=[<0> -> [x:S]; ...], limits=[]` — tree rules
//! * `axiom=<name>` — theory-axiom
//!
//! Addresses are written `<...>` with comma-separated branch indices; the
//! root is `<>`. List entries are separated by `;`. The optional `limits`
//! key states the (vacuous at finite height) limit-premise payload and must
//! be the empty list.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{
    parse_formula, parse_sequent, parse_term, ParseError, Signature, Term, Var,
};

use super::{Address, Bar, Derivation, Payload, RuleTag, TreeFamily};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DerivationFileError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("derivation file has no nodes")]
    Empty,
}

fn malformed(line: usize, msg: impl Into<String>) -> DerivationFileError {
    DerivationFileError::Malformed { line, msg: msg.into() }
}

/// Splits on `sep` at paren/bracket/brace depth zero. Addresses `<...>`
/// never nest other separators except commas, which their own parser handles.
fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_address(s: &str, line: usize) -> Result<Address, DerivationFileError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('<')
        .and_then(|r| r.strip_suffix('>'))
        .ok_or_else(|| malformed(line, format!("expected an address `<...>`, found `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| malformed(line, format!("bad branch index `{p}` in address")))
        })
        .collect()
}

fn parse_var_list(s: &str, line: usize, sig: &Signature) -> Result<Vec<Var>, DerivationFileError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| malformed(line, format!("expected a variable list `[...]`, found `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(';')
        .map(|entry| {
            let entry = entry.trim();
            match entry.split_once(':') {
                Some((name, sort)) => Ok(Var::new(name.trim(), sort.trim())),
                None if sig.sorts().len() == 1 => {
                    Ok(Var::new(entry, sig.sorts()[0].clone()))
                }
                None => Err(malformed(line, format!("variable `{entry}` needs a sort"))),
            }
        })
        .collect()
}

struct PayloadFields {
    fields: BTreeMap<String, String>,
    line: usize,
}

impl PayloadFields {
    fn parse(body: &str, line: usize) -> Result<Self, DerivationFileError> {
        let mut fields = BTreeMap::new();
        for part in split_top_level(body, ',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| malformed(line, format!("payload entry `{part}` is not key=value")))?;
            if fields.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(malformed(line, format!("duplicate payload key `{}`", k.trim())));
            }
        }
        Ok(PayloadFields { fields, line })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.fields.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<String, DerivationFileError> {
        self.take(key)
            .ok_or_else(|| malformed(self.line, format!("payload misses key `{key}`")))
    }

    fn finish(self, rule: RuleTag) -> Result<(), DerivationFileError> {
        if let Some(k) = self.fields.keys().next() {
            return Err(malformed(self.line, format!("unexpected payload key `{k}` for {rule}")));
        }
        Ok(())
    }
}

fn list_entries(s: &str, line: usize) -> Result<Vec<String>, DerivationFileError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| malformed(line, format!("expected a list `[...]`, found `{s}`")))?;
    Ok(split_top_level(inner, ';')
        .into_iter()
        .map(|e| e.trim().to_string())
        .filter(|e| !e.is_empty())
        .collect())
}

fn parse_payload(
    rule: RuleTag,
    body: Option<&str>,
    line: usize,
    sig: &Signature,
) -> Result<Payload, DerivationFileError> {
    let mut f = match body {
        Some(b) => PayloadFields::parse(b, line)?,
        None => PayloadFields { fields: BTreeMap::new(), line },
    };
    let wrap = |e: ParseError| DerivationFileError::Parse { line, source: e };
    let payload = match rule {
        RuleTag::ConjElim | RuleTag::DisjIntro => {
            let j = f.require("j")?;
            let j = j
                .parse::<usize>()
                .map_err(|_| malformed(line, format!("bad index `{j}`")))?;
            Payload::Index(j)
        }
        RuleTag::Substitution => {
            let terms: Result<Vec<Term>, _> = list_entries(&f.require("terms")?, line)?
                .iter()
                .map(|t| parse_term(t, sig).map_err(wrap))
                .collect();
            let context = parse_var_list(&f.require("context")?, line, sig)?;
            Payload::Subst { terms: terms?, context }
        }
        RuleTag::EqSubst => {
            let xs = parse_var_list(&f.require("xs")?, line, sig)?;
            let ys = parse_var_list(&f.require("ys")?, line, sig)?;
            let ws = parse_var_list(&f.require("ws")?, line, sig)?;
            let formula = parse_formula(&f.require("formula")?, sig).map_err(wrap)?;
            Payload::EqSubst { xs, ys, ws, formula }
        }
        RuleTag::DualDist | RuleTag::TransTrans => {
            let gamma = f.require("gamma")?;
            let gamma = gamma
                .parse::<usize>()
                .map_err(|_| malformed(line, format!("bad gamma `{gamma}`")))?;
            let height = f.require("height")?;
            let height = height
                .parse::<usize>()
                .map_err(|_| malformed(line, format!("bad height `{height}`")))?;
            let mut labels = BTreeMap::new();
            for entry in list_entries(&f.require("labels")?, line)? {
                let (addr, formula) = entry
                    .split_once("->")
                    .ok_or_else(|| malformed(line, format!("label entry `{entry}` needs `->`")))?;
                let addr = parse_address(addr, line)?;
                let formula = parse_formula(formula.trim(), sig).map_err(wrap)?;
                if labels.insert(addr.clone(), formula).is_some() {
                    return Err(malformed(
                        line,
                        format!("duplicate label for {}", super::format_address(&addr)),
                    ));
                }
            }
            let mut bar_addrs = Vec::new();
            for entry in list_entries(&f.require("bar")?, line)? {
                bar_addrs.push(parse_address(&entry, line)?);
            }
            let mut blocks = BTreeMap::new();
            if let Some(bs) = f.take("blocks") {
                for entry in list_entries(&bs, line)? {
                    let (addr, vars) = entry
                        .split_once("->")
                        .ok_or_else(|| malformed(line, format!("block entry `{entry}` needs `->`")))?;
                    let addr = parse_address(addr, line)?;
                    let vars = parse_var_list(vars.trim(), line, sig)?;
                    blocks.insert(addr, vars);
                }
            }
            if let Some(limits) = f.take("limits") {
                if !list_entries(&limits, line)?.is_empty() {
                    return Err(malformed(
                        line,
                        "limit premises must be empty at finite height",
                    ));
                }
            }
            Payload::Tree(TreeFamily { gamma, height, labels, blocks }, Bar::new(bar_addrs))
        }
        RuleTag::TheoryAxiom => {
            let name = f.take("axiom");
            Payload::TheoryAxiom { name }
        }
        _ => Payload::None,
    };
    f.finish(rule)?;
    Ok(payload)
}

/// Parses a derivation file against a signature. Returns the root (the
/// last node in the file).
pub fn parse_derivation(text: &str, sig: &Signature) -> Result<Derivation, DerivationFileError> {
    let mut nodes: BTreeMap<String, Derivation> = BTreeMap::new();
    let mut last: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (id, rest) = line
            .split_once(':')
            .ok_or_else(|| malformed(lineno, "expected `<id>: <rule> ...`"))?;
        let id = id.trim().to_string();
        if nodes.contains_key(&id) {
            return Err(malformed(lineno, format!("duplicate node id `{id}`")));
        }
        let rest = rest.trim();
        let (tag_str, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        let rule = RuleTag::from_name(tag_str)
            .ok_or_else(|| malformed(lineno, format!("unknown rule tag `{tag_str}`")))?;
        let mut rest = rest.trim();

        let mut premise_ids: Vec<String> = Vec::new();
        if let Some(after) = rest.strip_prefix("premises=") {
            let close = matching_bracket(after, lineno)?;
            let inner = &after[1..close];
            premise_ids = split_top_level(inner, ',')
                .into_iter()
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            rest = after[close + 1..].trim();
        }
        let mut payload_body: Option<&str> = None;
        if let Some(after) = rest.strip_prefix("payload=") {
            let close = matching_brace(after, lineno)?;
            payload_body = Some(&after[1..close]);
            rest = after[close + 1..].trim();
        }
        let conclusion_text = rest
            .strip_prefix("conclusion=")
            .ok_or_else(|| malformed(lineno, "expected `conclusion=<sequent>`"))?;
        let conclusion = parse_sequent(conclusion_text, sig)
            .map_err(|e| DerivationFileError::Parse { line: lineno, source: e })?;
        let payload = parse_payload(rule, payload_body, lineno, sig)?;
        let premises: Result<Vec<Derivation>, _> = premise_ids
            .iter()
            .map(|pid| {
                nodes
                    .get(pid)
                    .cloned()
                    .ok_or_else(|| malformed(lineno, format!("premise id `{pid}` not defined yet")))
            })
            .collect();
        let d = Derivation { conclusion, rule, payload, premises: premises? };
        last = Some(id.clone());
        nodes.insert(id, d);
    }
    let root = last.ok_or(DerivationFileError::Empty)?;
    Ok(nodes.remove(&root).unwrap())
}

fn matching_bracket(s: &str, line: usize) -> Result<usize, DerivationFileError> {
    matching(s, '[', ']', line)
}

fn matching_brace(s: &str, line: usize) -> Result<usize, DerivationFileError> {
    matching(s, '{', '}', line)
}

fn matching(s: &str, open: char, close: char, line: usize) -> Result<usize, DerivationFileError> {
    if !s.starts_with(open) {
        return Err(malformed(line, format!("expected `{open}`")));
    }
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        if c == open {
            depth += 1;
        } else if c == close {
            depth -= 1;
            if depth == 0 {
                return Ok(i);
            }
        }
    }
    Err(malformed(line, format!("unbalanced `{open}...{close}`")))
}

fn format_var_list(vars: &[Var]) -> String {
    let inner: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    format!("[{}]", inner.join("; "))
}

fn format_payload(p: &Payload) -> Option<String> {
    match p {
        Payload::None => None,
        Payload::Index(j) => Some(format!("{{j={j}}}")),
        Payload::Subst { terms, context } => {
            let ts: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
            Some(format!("{{terms=[{}], context={}}}", ts.join("; "), format_var_list(context)))
        }
        Payload::EqSubst { xs, ys, ws, formula } => Some(format!(
            "{{xs={}, ys={}, ws={}, formula={formula}}}",
            format_var_list(xs),
            format_var_list(ys),
            format_var_list(ws)
        )),
        Payload::Tree(tree, bar) => {
            let labels: Vec<String> = tree
                .labels
                .iter()
                .map(|(a, f)| format!("{} -> {f}", super::format_address(a)))
                .collect();
            let bar_s: Vec<String> =
                bar.addresses.iter().map(|a| super::format_address(a)).collect();
            let mut out = format!(
                "{{gamma={}, height={}, labels=[{}], bar=[{}]",
                tree.gamma,
                tree.height,
                labels.join("; "),
                bar_s.join("; ")
            );
            if !tree.blocks.is_empty() {
                let blocks: Vec<String> = tree
                    .blocks
                    .iter()
                    .map(|(a, vs)| format!("{} -> {}", super::format_address(a), format_var_list(vs)))
                    .collect();
                out.push_str(&format!(", blocks=[{}]", blocks.join("; ")));
            }
            out.push('}');
            Some(out)
        }
        Payload::TheoryAxiom { name } => name.as_ref().map(|n| format!("{{axiom={n}}}")),
    }
}

/// Writes a derivation in the file format, one node per line in postorder;
/// the final line is the root.
pub fn write_derivation(d: &Derivation) -> String {
    fn walk(d: &Derivation, out: &mut String, next: &mut usize) -> usize {
        let premise_ids: Vec<usize> =
            d.premises.iter().map(|p| walk(p, out, next)).collect();
        let id = *next;
        *next += 1;
        out.push_str(&format!("n{id}: {}", d.rule.name()));
        if !premise_ids.is_empty() {
            let ids: Vec<String> = premise_ids.iter().map(|i| format!("n{i}")).collect();
            out.push_str(&format!(" premises=[{}]", ids.join(",")));
        }
        if let Some(p) = format_payload(&d.payload) {
            out.push_str(&format!(" payload={p}"));
        }
        out.push_str(&format!(" conclusion={}\n", d.conclusion));
        id
    }
    let mut out = String::new();
    let mut next = 0usize;
    walk(d, &mut out, &mut next);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_derivation, derive_distributive_law};
    use crate::syntax::{parse_signature, Theory};

    fn sig() -> Signature {
        parse_signature("sort S\nrel P : S\nrel Q : S\nrel R : S,S\nconst c : S\n").unwrap()
    }

    #[test]
    fn simple_file_parses_and_checks() {
        let s = sig();
        let text = "\
n0: identity conclusion=P(c) |- [] P(c)
n1: identity conclusion=Q(c) |- [] Q(c)
n2: conj-intro premises=[n0] conclusion=P(c) |- [] and(P(c))
n3: disj-intro payload={j=0} conclusion=P(c) |- [] or(P(c), Q(c))
";
        let d = parse_derivation(text, &s).unwrap();
        let theory = Theory::empty(s.clone());
        check_derivation(&s, &theory, &d).unwrap();
    }

    #[test]
    fn tree_payload_roundtrip() {
        let s = sig();
        let phi = parse_formula("P(c)", &s).unwrap();
        let psis = vec![parse_formula("Q(c)", &s).unwrap(), parse_formula("R(c,c)", &s).unwrap()];
        let d = derive_distributive_law(&s, &phi, &psis).unwrap();
        let text = write_derivation(&d);
        let back = parse_derivation(&text, &s).unwrap();
        assert_eq!(back, d);
        let theory = Theory::empty(s.clone());
        check_derivation(&s, &theory, &back).unwrap();
    }

    #[test]
    fn oversized_tree_payload_rejected_cleanly() {
        let s = sig();
        let text = "n0: dual-dist payload={gamma=999999, height=999999, labels=[<> -> P(c)], bar=[<>]} conclusion=P(c) |- [] P(c)\n";
        let d = parse_derivation(text, &s).unwrap();
        let theory = Theory::empty(s.clone());
        let err = check_derivation(&s, &theory, &d).unwrap_err();
        assert!(err.to_string().contains("tree too large"), "{err}");
    }

    #[test]
    fn forward_reference_rejected() {
        let s = sig();
        let text = "n0: cut premises=[n1,n2] conclusion=P(c) |- [] P(c)\n";
        assert!(parse_derivation(text, &s).is_err());
    }

    #[test]
    fn substitution_payload_parses() {
        let s = sig();
        let text = "\
n0: identity conclusion=P(x) |- [x:S] P(x)
n1: substitution premises=[n0] payload={terms=[c], context=[]} conclusion=P(c) |- [] P(c)
";
        let d = parse_derivation(text, &s).unwrap();
        let theory = Theory::empty(s.clone());
        check_derivation(&s, &theory, &d).unwrap();
    }

    use crate::syntax::parse_formula;
}
