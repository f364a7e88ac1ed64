//! Theory files: a signature block followed by named axiom sequents.

use super::{parse_signature, ParseError, Sequent, Signature};

/// A named set of axiom sequents over a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub signature: Signature,
    pub axioms: Vec<(String, Sequent)>,
}

impl Theory {
    pub fn empty(signature: Signature) -> Self {
        Theory { signature, axioms: Vec::new() }
    }

    pub fn axiom(&self, name: &str) -> Option<&Sequent> {
        self.axioms.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn contains(&self, s: &Sequent) -> bool {
        self.axioms.iter().any(|(_, a)| a == s)
    }
}

/// Parses a theory file: signature declarations first, then one axiom per
/// line as `name: formula |- [ctx] formula`.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let mut sig_lines = String::new();
    let mut axiom_lines: Vec<(usize, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let stripped = line.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        if ["sort ", "rel ", "fun ", "const "].iter().any(|p| stripped.starts_with(p)) {
            sig_lines.push_str(stripped);
            sig_lines.push('\n');
        } else {
            axiom_lines.push((i + 1, stripped.to_string()));
        }
    }
    let signature = parse_signature(&sig_lines)?;
    let mut axioms = Vec::new();
    for (lineno, line) in axiom_lines {
        let (name, rest) = line.split_once(':').ok_or(ParseError::Syntax {
            line: lineno,
            col: 1,
            msg: format!("expected `name: sequent`, found `{line}`"),
        })?;
        let name = name.trim().to_string();
        if axioms.iter().any(|(n, _)| *n == name) {
            return Err(ParseError::Syntax {
                line: lineno,
                col: 1,
                msg: format!("duplicate axiom name `{name}`"),
            });
        }
        let seq = super::parse_sequent(rest, &signature).map_err(|e| match e {
            ParseError::Syntax { col, msg, .. } => {
                ParseError::Syntax { line: lineno, col, msg }
            }
            other => other,
        })?;
        axioms.push((name, seq));
    }
    Ok(Theory { signature, axioms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_simple_theory() {
        let t = parse_theory(
            "sort S\n\
             rel P : S\n\
             rel Q : S\n\
             const c : S\n\
             \n\
             # axioms\n\
             split: true |- [] or(P(c), Q(c))\n\
             noq: Q(c) |- [] false\n",
        )
        .unwrap();
        assert_eq!(t.axioms.len(), 2);
        assert!(t.axiom("split").is_some());
    }

    #[test]
    fn duplicate_axiom_names_rejected() {
        let r = parse_theory("rel P : S\nconst c : S\na: true |- [] P(c)\na: P(c) |- [] true\n");
        assert!(r.is_err());
    }
}
