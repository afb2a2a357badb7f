use std::collections::BTreeMap;
use std::sync::Arc;

use crate::eval::{DenotationMap, MapError};
use crate::ground::{typecheck, DeltaRef, GroundTerm, GroundingLanguage, Judgment, LanguageError, TypeError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MergeError {
    #[error("the languages are over different bases (`{0}` and `{1}`)")]
    BaseMismatch(String, String),
    #[error("the witness `{0}` is not canonical")]
    NotCanonical(String),
    #[error("{which} is ill-typed: {err}")]
    Type { which: &'static str, err: TypeError },
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Clone, Debug)]
pub struct Merged {
    pub lang: GroundingLanguage,
    pub map: DenotationMap,
    /// `u` with every clashing label replaced by its fresh one.
    pub u: GroundTerm,
    /// `(old, fresh)` for every relabelled symbol or `δ` name.
    pub minted: Vec<(String, String)>,
}

/// Renames symbol labels and `δ` names.
pub fn relabel(t: &GroundTerm, syms: &BTreeMap<String, String>, deltas: &BTreeMap<String, String>) -> GroundTerm {
    match t {
        GroundTerm::Var(_) => t.clone(),
        GroundTerm::Delta(d) => match d.name.as_ref().and_then(|n| deltas.get(n)) {
            Some(new) => GroundTerm::Delta(DeltaRef { name: Some(new.clone()), derivation: d.derivation.clone() }),
            None => t.clone(),
        },
        GroundTerm::App(a) => {
            let mut sym = a.sym.clone();
            if let Some(new) = syms.get(&sym.label) {
                sym.label = new.clone();
            }
            let args = a.args.iter().map(|u| relabel(u, syms, deltas)).collect();
            GroundTerm::app(sym, a.binds.clone(), args)
        }
    }
}

fn fresh(label: &str, taken: &dyn Fn(&str) -> bool) -> String {
    let mut out = format!("{label}_dag");
    while taken(&out) {
        out.push_str("_dag");
    }
    out
}

fn judge(t: &GroundTerm, lang: &GroundingLanguage, which: &'static str) -> Result<Judgment, MergeError> {
    typecheck(t, lang).map_err(|err| MergeError::Type { which, err })
}

/// The union of two languages over one base, where `lang1` keeps its
/// schemes and every label of `langs` whose scheme differs gets a fresh
/// label carrying the scheme of `langs`.
pub fn merge_languages(
    lang1: &GroundingLanguage,
    map1: &DenotationMap,
    langs: &GroundingLanguage,
    maps: &DenotationMap,
    t: &GroundTerm,
    u: &GroundTerm,
) -> Result<Merged, MergeError> {
    if *lang1.base != *langs.base {
        return Err(MergeError::BaseMismatch(lang1.base.name.clone(), langs.base.name.clone()));
    }
    judge(t, lang1, "t")?;
    judge(u, langs, "u")?;
    if !u.is_canonical() {
        return Err(MergeError::NotCanonical(u.to_string()));
    }
    let taken = |l: &str| lang1.symbols.contains_key(l) || langs.symbols.contains_key(l);
    let mut lang = lang1.clone();
    lang.name = format!("{}+{}", lang1.name, langs.name);
    let mut syms = BTreeMap::new();
    let mut minted = Vec::new();
    for (label, &kind) in &langs.symbols {
        match lang1.symbols.get(label) {
            None => lang.add_symbol(label, kind)?,
            Some(&k1) if k1 == kind && (kind.is_primitive() || map1.scheme(label) == maps.scheme(label)) => {}
            Some(_) => {
                let new = fresh(label, &|l| taken(l) || lang.symbols.contains_key(l));
                lang.add_symbol(&new, kind)?;
                syms.insert(label.clone(), new.clone());
                minted.push((label.clone(), new));
            }
        }
    }
    let mut deltas = BTreeMap::new();
    for (name, d) in &langs.deltas {
        match lang1.deltas.get(name) {
            None => {
                lang.deltas.insert(name.clone(), d.clone());
            }
            Some(d1) if Arc::ptr_eq(d1, d) || **d1 == **d => {}
            Some(_) => {
                let new = fresh(name, &|l| lang.deltas.contains_key(l) || langs.deltas.contains_key(l));
                lang.deltas.insert(new.clone(), d.clone());
                deltas.insert(name.clone(), new.clone());
                minted.push((name.clone(), new));
            }
        }
    }
    let mut map = DenotationMap::empty(&lang);
    for (label, e) in &map1.rules {
        map.register(&lang, label, e.scheme)?;
        map.set_universal(label, e.universal);
    }
    for (label, e) in &maps.rules {
        let target = syms.get(label).unwrap_or(label);
        if map.entry(target).is_none() {
            map.register(&lang, target, e.scheme)?;
            map.set_universal(target, e.universal);
        }
    }
    let u2 = relabel(u, &syms, &deltas);
    Ok(Merged { lang, map, u: u2, minted })
}
