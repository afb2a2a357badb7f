//! Text formats for ground terms (`.gterm`) and languages (`.glang`).

use crate::base::Derivation;
use crate::logic::{Formula, OpType, ParseError, ParseErrorKind, Parser, PreType};

use super::language::{GroundingLanguage, LanguageKind};
use super::symbol::{Binding, FamilyKind, OpSymbol, TypedVar};
use super::term::{DeltaRef, GroundTerm};

/// Parses one term against the labels and δ names of `lang`.
pub fn parse_gterm(text: &str, lang: &GroundingLanguage) -> Result<GroundTerm, ParseError> {
    let mut p = Parser::new(text, &lang.base.signature)?;
    let t = gterm(&mut p, lang)?;
    p.expect_eof()?;
    Ok(t)
}

pub fn gterm(p: &mut Parser<'_>, lang: &GroundingLanguage) -> Result<GroundTerm, ParseError> {
    if p.eat_punct("$") {
        return Ok(GroundTerm::Var(typed_var_rest(p)?));
    }
    let label = p.expect_ident()?;
    if label == "delta" {
        if p.is_punct("(") {
            let d = Derivation::parse(p)?;
            return Ok(GroundTerm::inline(d));
        }
        let name = p.expect_ident()?;
        return match lang.deltas.get(&name) {
            Some(d) => Ok(GroundTerm::Delta(DeltaRef { name: Some(name), derivation: d.clone() })),
            None => Err(p.error(ParseErrorKind::UnknownIdentifier, format!("unknown derivation name `{name}`"))),
        };
    }
    let Some(family) = lang.family(&label) else {
        return Err(p.error(ParseErrorKind::UnknownIdentifier, format!("unknown symbol `{label}`")));
    };
    p.expect_punct("[")?;
    let optype = optype(p)?;
    p.expect_punct("]")?;
    let n = optype.entries.len();
    let mut binds = vec![Binding::none(); n];
    if p.eat_punct("{") {
        loop {
            p.expect_keyword("bind")?;
            let entry = p.expect_num()? as usize;
            if entry == 0 || entry > n {
                return Err(p.syntax(format!("`{label}` has no entry {entry}")));
            }
            p.expect_punct(":")?;
            let b = &mut binds[entry - 1];
            loop {
                if p.eat_punct("$") {
                    b.typed.push(typed_var_rest(p)?);
                } else {
                    b.inds.push(p.expect_ident()?);
                }
                if !p.eat_punct(",") {
                    break;
                }
            }
            if !p.eat_punct(";") {
                break;
            }
        }
        p.expect_punct("}")?;
    }
    p.expect_punct("(")?;
    let mut args = Vec::new();
    if !p.is_punct(")") {
        loop {
            args.push(gterm(p, lang)?);
            if !p.eat_punct(",") {
                break;
            }
        }
    }
    p.expect_punct(")")?;
    Ok(GroundTerm::app(OpSymbol::new(&label, family, optype), binds, args))
}

/// After `$`: `ident:[formula]#index`.
fn typed_var_rest(p: &mut Parser<'_>) -> Result<TypedVar, ParseError> {
    p.expect_ident()?;
    p.expect_punct(":")?;
    p.expect_punct("[")?;
    let ty = p.formula()?;
    p.expect_punct("]")?;
    p.expect_punct("#")?;
    let index = p.expect_num()?;
    let index = u32::try_from(index).map_err(|_| p.syntax("typed-variable index too large"))?;
    Ok(TypedVar::new(ty, index))
}

/// `entry {";" entry} ">" head`, with `entry := [formula {"," formula} "|-"] formula`.
pub fn optype(p: &mut Parser<'_>) -> Result<OpType, ParseError> {
    let mut entries = vec![pretype(p)?];
    while p.eat_punct(";") {
        entries.push(pretype(p)?);
    }
    p.expect_punct(">")?;
    let head = p.formula()?;
    Ok(OpType::new(entries, PreType::bare(head)))
}

fn pretype(p: &mut Parser<'_>) -> Result<PreType, ParseError> {
    let mut fs = vec![p.formula()?];
    while p.eat_punct(",") {
        fs.push(p.formula()?);
    }
    if p.eat_punct("|-") {
        let head = p.formula()?;
        return Ok(PreType::new(fs, head));
    }
    if fs.len() > 1 {
        return Err(p.syntax("a list of formulas needs `|-` and a head"));
    }
    Ok(PreType::bare(fs.pop().expect("one formula")))
}

pub fn parse_optype(text: &str, sig: &crate::logic::Signature) -> Result<OpType, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let ot = optype(&mut p)?;
    p.expect_eof()?;
    Ok(ot)
}

/// Where a language finds its base.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseRef {
    Builtin(String),
    File(String),
}

/// A `.glang` file before its base is resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct LangDecl {
    pub name: String,
    pub base: Option<BaseRef>,
    pub kind: Option<LanguageKind>,
    pub symbols: Vec<(String, FamilyKind)>,
    pub schemes: Vec<(String, String)>,
    /// Name, s-expression text, line.
    pub deltas: Vec<(String, String, usize)>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LangFileError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
}

pub fn parse_glang(text: &str) -> Result<LangDecl, LangFileError> {
    let mut decl = LangDecl {
        name: "unnamed".into(),
        base: None,
        kind: None,
        symbols: Vec::new(),
        schemes: Vec::new(),
        deltas: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = match raw.find("//") {
            Some(k) => &raw[..k],
            None => raw,
        }
        .trim();
        if body.is_empty() {
            continue;
        }
        let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        let items: Vec<&str> = rest.split_whitespace().collect();
        let bad = |message: String| LangFileError::Line { line, message };
        match kw {
            "lang" => decl.name = rest.to_string(),
            "base" => {
                decl.base = Some(match rest {
                    "ar" | "empty" => BaseRef::Builtin(rest.to_string()),
                    "" => return Err(bad("`base` needs `ar`, `empty` or a file".into())),
                    file => BaseRef::File(file.to_string()),
                })
            }
            "kind" => decl.kind = Some(LanguageKind::parse(rest).ok_or_else(|| bad(format!("unknown kind `{rest}`")))?),
            "symbol" => match items.as_slice() {
                [label, fam] => {
                    let f = FamilyKind::from_name(fam).ok_or_else(|| bad(format!("unknown family `{fam}`")))?;
                    decl.symbols.push((label.to_string(), f));
                }
                _ => return Err(bad("expected `symbol LABEL FAMILY`".into())),
            },
            "scheme" => match items.as_slice() {
                [label, scheme] => decl.schemes.push((label.to_string(), scheme.to_string())),
                _ => return Err(bad("expected `scheme LABEL SCHEME`".into())),
            },
            "delta" => {
                let (name, sexpr) = rest.split_once('=').ok_or_else(|| bad("expected `delta NAME = (...)`".into()))?;
                decl.deltas.push((name.trim().to_string(), sexpr.trim().to_string(), line));
            }
            other => return Err(bad(format!("unknown declaration `{other}`"))),
        }
    }
    Ok(decl)
}

/// Builds the language of `decl` over an already resolved base. Schemes
/// are left to the denotation layer.
pub fn build_language(
    decl: &LangDecl,
    base: std::sync::Arc<crate::base::AtomicBase>,
) -> Result<GroundingLanguage, LangFileError> {
    let top = |message: String| LangFileError::Line { line: 0, message };
    let mut lang = match decl.kind {
        Some(k) => GroundingLanguage::make(k, base).map_err(|e| top(e.to_string()))?,
        None => GroundingLanguage::new(&decl.name, base),
    };
    lang.name = decl.name.clone();
    for (label, fam) in &decl.symbols {
        lang.add_symbol(label, *fam).map_err(|e| top(e.to_string()))?;
    }
    for (name, text, line) in &decl.deltas {
        let d = Derivation::parse_str(text, &lang.base.signature)
            .map_err(|source| LangFileError::Parse { line: *line, source })?;
        lang.add_delta(name, d).map_err(|e| LangFileError::Line { line: *line, message: e.to_string() })?;
    }
    Ok(lang)
}

/// Inverse of [`parse_glang`] for a resolved language.
pub fn print_glang(lang: &GroundingLanguage, base: &BaseRef, schemes: &[(String, String)]) -> String {
    let mut out = format!("lang {}\n", lang.name);
    match base {
        BaseRef::Builtin(b) | BaseRef::File(b) => out.push_str(&format!("base {b}\n")),
    }
    for (label, fam) in &lang.symbols {
        out.push_str(&format!("symbol {label} {fam}\n"));
    }
    for (label, s) in schemes {
        out.push_str(&format!("scheme {label} {s}\n"));
    }
    for (name, d) in &lang.deltas {
        out.push_str(&format!("delta {name} = {d}\n"));
    }
    out
}

/// Parses a formula in the language's signature.
pub fn parse_formula_in(text: &str, lang: &GroundingLanguage) -> Result<Formula, ParseError> {
    crate::logic::parse_formula(text, &lang.base.signature)
}
