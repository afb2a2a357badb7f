use std::collections::BTreeMap;
use std::sync::Arc;

use crate::base::{AtomicBase, Derivation, DerivationError};

use super::symbol::FamilyKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LanguageKind {
    Core,
    Gen,
    Ha,
}

impl LanguageKind {
    pub fn parse(s: &str) -> Option<LanguageKind> {
        match s.to_ascii_lowercase().as_str() {
            "core" | "g" => Some(LanguageKind::Core),
            "gen" => Some(LanguageKind::Gen),
            "ha" => Some(LanguageKind::Ha),
            _ => None,
        }
    }

    pub fn families(self) -> Vec<FamilyKind> {
        use FamilyKind::*;
        let mut out = vec![AndI, OrI1, OrI2, ImpI, ExI, AllI, BotE];
        if self != LanguageKind::Core {
            out.extend([AndE1, AndE2, OrE, ImpE, ExE, AllE]);
        }
        if self == LanguageKind::Ha {
            out.push(Ind);
        }
        out
    }

    pub fn name(self) -> &'static str {
        match self {
            LanguageKind::Core => "core",
            LanguageKind::Gen => "gen",
            LanguageKind::Ha => "ha",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LanguageError {
    #[error("the HA language needs a base expanding the arithmetic system")]
    NotArithmetic,
    #[error("label `{0}` is already declared")]
    DuplicateLabel(String),
    #[error("derivation name `{0}` is already declared")]
    DuplicateDelta(String),
    #[error("derivation `{name}` is invalid: {source}")]
    BadDerivation { name: String, source: DerivationError },
    #[error("derivation `{0}` has assumptions or free individual variables")]
    OpenDerivation(String),
}

/// Labels mapped to their families, over a base, with named derivations.
#[derive(Clone, Debug)]
pub struct GroundingLanguage {
    pub name: String,
    pub base: Arc<AtomicBase>,
    pub symbols: BTreeMap<String, FamilyKind>,
    pub deltas: BTreeMap<String, Arc<Derivation>>,
}

impl GroundingLanguage {
    pub fn new(name: &str, base: Arc<AtomicBase>) -> Self {
        GroundingLanguage { name: name.to_string(), base, symbols: BTreeMap::new(), deltas: BTreeMap::new() }
    }

    pub fn make(kind: LanguageKind, base: Arc<AtomicBase>) -> Result<Self, LanguageError> {
        if kind == LanguageKind::Ha && !AtomicBase::arithmetic().is_expanded_by(&base) {
            return Err(LanguageError::NotArithmetic);
        }
        let mut lang = GroundingLanguage::new(kind.name(), base);
        for f in kind.families() {
            lang.add_symbol(f.default_label(), f)?;
        }
        Ok(lang)
    }

    pub fn add_symbol(&mut self, label: &str, family: FamilyKind) -> Result<(), LanguageError> {
        if self.symbols.contains_key(label) {
            return Err(LanguageError::DuplicateLabel(label.to_string()));
        }
        self.symbols.insert(label.to_string(), family);
        Ok(())
    }

    pub fn with_symbol(mut self, label: &str, family: FamilyKind) -> Result<Self, LanguageError> {
        self.add_symbol(label, family)?;
        Ok(self)
    }

    /// Registers a closed derivation of the base under `name`.
    pub fn add_delta(&mut self, name: &str, d: Derivation) -> Result<Arc<Derivation>, LanguageError> {
        if self.deltas.contains_key(name) {
            return Err(LanguageError::DuplicateDelta(name.to_string()));
        }
        d.check(&self.base.system).map_err(|source| LanguageError::BadDerivation { name: name.to_string(), source })?;
        if !d.is_closed() {
            return Err(LanguageError::OpenDerivation(name.to_string()));
        }
        let d = Arc::new(d);
        self.deltas.insert(name.to_string(), d.clone());
        Ok(d)
    }

    pub fn family(&self, label: &str) -> Option<FamilyKind> {
        self.symbols.get(label).copied()
    }

    pub fn has_family(&self, kind: FamilyKind) -> bool {
        self.symbols.values().any(|k| *k == kind)
    }

    /// A label of the family, preferring its default label.
    pub fn label_of(&self, kind: FamilyKind) -> Option<&str> {
        if self.symbols.get(kind.default_label()) == Some(&kind) {
            return Some(kind.default_label());
        }
        self.symbols.iter().find(|(_, k)| **k == kind).map(|(l, _)| l.as_str())
    }

    pub fn families(&self) -> Vec<FamilyKind> {
        let mut out: Vec<FamilyKind> = self.symbols.values().copied().collect();
        out.sort();
        out.dedup();
        out
    }

    /// Every label is primitive.
    pub fn is_core_only(&self) -> bool {
        self.symbols.values().all(|k| k.is_primitive())
    }

    /// Symbol inclusion plus base expansion.
    pub fn is_expanded_by(&self, other: &GroundingLanguage) -> bool {
        self.base.is_expanded_by(&other.base) && self.symbols.iter().all(|(l, k)| other.symbols.get(l) == Some(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_has_no_eliminators() {
        let g = GroundingLanguage::make(LanguageKind::Core, Arc::new(AtomicBase::builtin("empty").unwrap())).unwrap();
        assert!(g.symbols.values().all(|k| k.is_primitive()));
        assert_eq!(g.symbols.len(), 7);
    }

    #[test]
    fn gen_contains_implication_elimination() {
        let g = GroundingLanguage::make(LanguageKind::Gen, Arc::new(AtomicBase::builtin("empty").unwrap())).unwrap();
        assert_eq!(g.family("impE"), Some(FamilyKind::ImpE));
        assert!(!g.has_family(FamilyKind::Ind));
    }

    #[test]
    fn ha_needs_arithmetic() {
        let e = GroundingLanguage::make(LanguageKind::Ha, Arc::new(AtomicBase::builtin("empty").unwrap()));
        assert_eq!(e.unwrap_err(), LanguageError::NotArithmetic);
        let ha = GroundingLanguage::make(LanguageKind::Ha, Arc::new(AtomicBase::arithmetic())).unwrap();
        assert_eq!(ha.family("Ind"), Some(FamilyKind::Ind));
    }

    #[test]
    fn only_closed_derivations_are_named() {
        use crate::logic::FoTerm;
        let mut ha = GroundingLanguage::make(LanguageKind::Ha, Arc::new(AtomicBase::arithmetic())).unwrap();
        assert!(ha.add_delta("d", Derivation::axiom("plus1", &[("t", FoTerm::zero())])).is_ok());
        let open = Derivation::axiom("eqR", &[("t", FoTerm::var("x"))]);
        assert_eq!(ha.add_delta("e", open), Err(LanguageError::OpenDerivation("e".into())));
        assert!(matches!(
            ha.add_delta("d", Derivation::axiom("eqR", &[("t", FoTerm::zero())])),
            Err(LanguageError::DuplicateDelta(_))
        ));
    }
}
