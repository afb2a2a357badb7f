//! The `.base` text format.

use crate::logic::parse::Tok;
use crate::logic::{ParseError, ParseErrorKind, Parser, Signature};

use super::rule::{AtomicBase, AtomicRule, AtomicSystem, IndividualDomain};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BaseFileError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
}

fn strip_comment(line: &str) -> &str {
    match line.find("//") {
        Some(i) => &line[..i],
        None => line,
    }
}

fn symbol_arity(item: &str, line: usize) -> Result<(String, usize), BaseFileError> {
    let bad = || BaseFileError::Line { line, message: format!("expected `name/arity`, found `{item}`") };
    let (name, arity) = item.rsplit_once('/').ok_or_else(bad)?;
    let arity = arity.parse::<usize>().map_err(|_| bad())?;
    if name.is_empty() {
        return Err(bad());
    }
    Ok((name.to_string(), arity))
}

pub fn parse_base(text: &str) -> Result<AtomicBase, BaseFileError> {
    let mut name = None;
    let mut sig = Signature::new();
    let mut nat = false;
    let mut rule_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let items: Vec<&str> = rest.split_whitespace().collect();
        match kw {
            "base" => name = Some(rest.trim().to_string()),
            "domain" => match rest.trim() {
                "nat" => nat = true,
                "consts" => nat = false,
                other => {
                    return Err(BaseFileError::Line { line, message: format!("unknown domain `{other}`") });
                }
            },
            "consts" => sig.constants.extend(items.iter().map(|s| s.to_string())),
            "funcs" => {
                for it in items {
                    let (f, n) = symbol_arity(it, line)?;
                    sig.functions.insert(f, n);
                }
            }
            "rels" => {
                for it in items {
                    let (r, n) = symbol_arity(it, line)?;
                    sig.relations.insert(r, n);
                }
            }
            "rule" => rule_lines.push((line, rest.to_string())),
            other => return Err(BaseFileError::Line { line, message: format!("unknown declaration `{other}`") }),
        }
    }
    sig.check_disjoint().map_err(|e| BaseFileError::Line { line: 0, message: e.to_string() })?;
    if nat && !sig.has_numerals() {
        return Err(BaseFileError::Line { line: 0, message: "`domain nat` needs `consts 0` and `funcs s/1`".into() });
    }
    let mut rules = Vec::new();
    for (line, text) in rule_lines {
        rules.push(parse_rule_line(&text, &sig).map_err(|e| match e {
            RuleLineError::Parse(source) => BaseFileError::Parse { line, source },
            RuleLineError::Other(message) => BaseFileError::Line { line, message },
        })?);
    }
    let system =
        AtomicSystem::new(sig.clone(), rules).map_err(|e| BaseFileError::Line { line: 0, message: e.to_string() })?;
    let domain = if nat {
        IndividualDomain::Numerals
    } else {
        IndividualDomain::Constants(sig.constants.iter().cloned().collect())
    };
    Ok(AtomicBase { name: name.unwrap_or_else(|| "unnamed".into()), signature: sig, system, domain })
}

enum RuleLineError {
    Parse(ParseError),
    Other(String),
}

/// `name: premise, premise => conclusion`.
fn parse_rule_line(text: &str, sig: &Signature) -> Result<AtomicRule, RuleLineError> {
    let mut p = Parser::new(text, sig).map_err(RuleLineError::Parse)?;
    let name = p.expect_ident().map_err(RuleLineError::Parse)?;
    p.expect_punct(":").map_err(RuleLineError::Parse)?;
    let mut premises = Vec::new();
    if !p.is_punct("=>") {
        loop {
            premises.push(p.formula().map_err(RuleLineError::Parse)?);
            if !p.eat_punct(",") {
                break;
            }
        }
    }
    if !matches!(p.peek(), Tok::Punct("=>")) {
        return Err(RuleLineError::Parse(
            p.error(ParseErrorKind::Syntax, format!("expected `=>`, found {}", p.peek())),
        ));
    }
    p.bump();
    let conclusion = p.formula().map_err(RuleLineError::Parse)?;
    p.expect_eof().map_err(RuleLineError::Parse)?;
    AtomicRule::new(&name, premises, conclusion).map_err(|e| RuleLineError::Other(e.to_string()))
}

/// Serializes a base in the format read by [`parse_base`].
pub fn print_base(b: &AtomicBase) -> String {
    let mut out = format!("base {}\n", b.name);
    match &b.domain {
        IndividualDomain::Numerals => out.push_str("domain nat\n"),
        IndividualDomain::Constants(_) => out.push_str("domain consts\n"),
    }
    if !b.signature.constants.is_empty() {
        let cs: Vec<_> = b.signature.constants.iter().cloned().collect();
        out.push_str(&format!("consts {}\n", cs.join(" ")));
    }
    if !b.signature.functions.is_empty() {
        let fs: Vec<_> = b.signature.functions.iter().map(|(k, v)| format!("{k}/{v}")).collect();
        out.push_str(&format!("funcs {}\n", fs.join(" ")));
    }
    if !b.signature.relations.is_empty() {
        let rs: Vec<_> = b.signature.relations.iter().map(|(k, v)| format!("{k}/{v}")).collect();
        out.push_str(&format!("rels {}\n", rs.join(" ")));
    }
    for r in &b.system.rules {
        out.push_str(&format!("rule {r}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ar_round_trips_through_text() {
        let ar = AtomicBase::arithmetic();
        let text = print_base(&ar);
        let back = parse_base(&text).unwrap();
        assert_eq!(back, ar);
    }

    #[test]
    fn small_propositional_base() {
        let text = "base ds\nconsts c\nrels p/0 q/0\nrule qa: => q\n// comment\nrule qb: => q\n";
        let b = parse_base(text).unwrap();
        assert_eq!(b.system.rules.len(), 2);
        assert_eq!(b.domain, IndividualDomain::Constants(vec!["c".into()]));
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_base("base x\nrels p/0\nrule bad: p => zz\n").unwrap_err();
        assert!(matches!(e, BaseFileError::Parse { line: 3, .. }));
        let e = parse_base("base x\nrels p/0\nrule a: => p\nrule a: => p\n").unwrap_err();
        assert!(e.to_string().contains("duplicate"));
    }
}
