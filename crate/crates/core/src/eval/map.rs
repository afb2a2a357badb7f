use std::collections::BTreeMap;

use crate::ground::{typecheck, FamilyKind, GroundingLanguage};
use crate::logic::FoTerm;

use super::scheme::{contract, generic_redexes, RhsContext, Scheme};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleEntry {
    pub scheme: Scheme,
    pub universal: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error("unknown symbol `{0}`")]
    UnknownLabel(String),
    #[error("`{0}` is an introduction or `⊥`, which has no defining equation")]
    Primitive(String),
    #[error("unknown rewrite scheme `{0}`")]
    UnknownScheme(String),
    #[error("scheme {scheme} does not fit `{label}`, a {family} symbol")]
    Incompatible { label: String, scheme: Scheme, family: FamilyKind },
    #[error("scheme {scheme} for `{label}` needs a {family} symbol in the language")]
    MissingFamily { label: String, scheme: Scheme, family: FamilyKind },
    #[error("scheme {scheme} for `{label}` does not preserve types: {detail}")]
    Unsound { label: String, scheme: Scheme, detail: String },
}

/// Rewrite schemes for the non-primitive labels of one language.
#[derive(Clone, Debug, PartialEq)]
pub struct DenotationMap {
    pub rules: BTreeMap<String, RuleEntry>,
    labels: BTreeMap<FamilyKind, String>,
    witness: Option<FoTerm>,
}

impl DenotationMap {
    pub fn empty(lang: &GroundingLanguage) -> Self {
        let labels = FamilyKind::ALL.iter().filter_map(|&k| lang.label_of(k).map(|l| (k, l.to_string()))).collect();
        DenotationMap { rules: BTreeMap::new(), labels, witness: lang.base.domain.first(1).pop() }
    }

    /// The default scheme of every non-primitive label.
    pub fn builtin(lang: &GroundingLanguage) -> Result<Self, MapError> {
        let mut map = DenotationMap::empty(lang);
        for (label, kind) in &lang.symbols {
            if let Some(s) = Scheme::default_for(*kind) {
                map.register(lang, label, s)?;
            }
        }
        Ok(map)
    }

    /// Builtin schemes with `(label, scheme name)` overrides.
    pub fn with_overrides(lang: &GroundingLanguage, overrides: &[(String, String)]) -> Result<Self, MapError> {
        let mut map = DenotationMap::builtin(lang)?;
        for (label, name) in overrides {
            let s = Scheme::from_name(name).ok_or_else(|| MapError::UnknownScheme(name.clone()))?;
            map.register(lang, label, s)?;
        }
        Ok(map)
    }

    /// Registers `scheme` for `label` after firing it on generic redexes
    /// and checking that every result keeps its type.
    pub fn register(&mut self, lang: &GroundingLanguage, label: &str, scheme: Scheme) -> Result<(), MapError> {
        let family = lang.family(label).ok_or_else(|| MapError::UnknownLabel(label.into()))?;
        if family.is_primitive() {
            return Err(MapError::Primitive(label.into()));
        }
        if !scheme.fits(family) {
            return Err(MapError::Incompatible { label: label.into(), scheme, family });
        }
        for &need in scheme.needs() {
            if !self.labels.contains_key(&need) {
                return Err(MapError::MissingFamily { label: label.into(), scheme, family: need });
            }
        }
        let unsound = |detail: String| MapError::Unsound { label: label.into(), scheme, detail };
        let cx = self.rhs();
        for redex in generic_redexes(scheme, label, &cx) {
            let before = typecheck(&redex, lang).map_err(|e| unsound(format!("generic redex: {e}")))?;
            let app = redex.as_app().expect("generic redexes are applications");
            let out = contract(scheme, app, &cx).map_err(|e| unsound(format!("did not fire: {e:?}")))?;
            let after = typecheck(&out, lang).map_err(|e| unsound(format!("result: {e}")))?;
            if after.codomain != before.codomain || !after.free_typed.is_subset(&before.free_typed) {
                return Err(unsound(format!("`{before}` became `{after}`")));
            }
        }
        self.rules.insert(label.to_string(), RuleEntry { scheme, universal: scheme.universal_by_default() });
        Ok(())
    }

    pub fn set_universal(&mut self, label: &str, universal: bool) {
        if let Some(e) = self.rules.get_mut(label) {
            e.universal = universal;
        }
    }

    pub fn entry(&self, label: &str) -> Option<&RuleEntry> {
        self.rules.get(label)
    }

    pub fn scheme(&self, label: &str) -> Option<Scheme> {
        self.rules.get(label).map(|e| e.scheme)
    }

    pub fn is_universal(&self, label: &str) -> bool {
        self.rules.get(label).is_some_and(|e| e.universal)
    }

    pub fn rhs(&self) -> RhsContext<'_> {
        RhsContext { labels: &self.labels, witness: self.witness.as_ref() }
    }

    /// Labels whose scheme differs from the builtin default.
    pub fn overrides(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (label, e) in &self.rules {
            let family = FamilyKind::ALL.iter().copied().find(|k| e.scheme.fits(*k));
            if family.and_then(Scheme::default_for) != Some(e.scheme) {
                out.push((label.clone(), e.scheme.name().to_string()));
            }
        }
        out
    }
}
