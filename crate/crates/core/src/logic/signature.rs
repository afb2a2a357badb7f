use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::formula::EQ;
use super::term::{PLUS, SUCC, TIMES, ZERO};

/// Non-logical symbols of a first-order language. The three name sets are disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub constants: BTreeSet<String>,
    pub functions: BTreeMap<String, usize>,
    pub relations: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("symbol `{0}` is declared more than once")]
pub struct DuplicateSymbol(pub String);

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_constant(mut self, c: &str) -> Self {
        self.constants.insert(c.to_string());
        self
    }

    pub fn with_function(mut self, f: &str, arity: usize) -> Self {
        self.functions.insert(f.to_string(), arity);
        self
    }

    pub fn with_relation(mut self, r: &str, arity: usize) -> Self {
        self.relations.insert(r.to_string(), arity);
        self
    }

    /// `{0, s/1, +/2, */2, =/2}`.
    pub fn arithmetic() -> Self {
        Signature::new()
            .with_constant(ZERO)
            .with_function(SUCC, 1)
            .with_function(PLUS, 2)
            .with_function(TIMES, 2)
            .with_relation(EQ, 2)
    }

    /// Small language used when no base file is given: propositional atoms
    /// `p q r`, unary `P Q`, binary `R`, and one constant `c`.
    pub fn propositional() -> Self {
        Signature::new()
            .with_constant("c")
            .with_relation("p", 0)
            .with_relation("q", 0)
            .with_relation("r", 0)
            .with_relation("P", 1)
            .with_relation("Q", 1)
            .with_relation("R", 2)
    }

    pub fn has_numerals(&self) -> bool {
        self.constants.contains(ZERO) && self.functions.get(SUCC) == Some(&1)
    }

    pub fn check_disjoint(&self) -> Result<(), DuplicateSymbol> {
        for f in self.functions.keys() {
            if self.constants.contains(f) {
                return Err(DuplicateSymbol(f.clone()));
            }
        }
        for r in self.relations.keys() {
            if self.constants.contains(r) || self.functions.contains_key(r) {
                return Err(DuplicateSymbol(r.clone()));
            }
        }
        Ok(())
    }

    /// Inclusion: every symbol of `self` is in `other` with the same arity.
    pub fn is_subset_of(&self, other: &Signature) -> bool {
        self.constants.is_subset(&other.constants)
            && self.functions.iter().all(|(f, n)| other.functions.get(f) == Some(n))
            && self.relations.iter().all(|(r, n)| other.relations.get(r) == Some(n))
    }

    pub fn union(&self, other: &Signature) -> Signature {
        let mut out = self.clone();
        out.constants.extend(other.constants.iter().cloned());
        out.functions.extend(other.functions.iter().map(|(k, v)| (k.clone(), *v)));
        out.relations.extend(other.relations.iter().map(|(k, v)| (k.clone(), *v)));
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let consts: Vec<_> = self.constants.iter().cloned().collect();
        let funcs: Vec<_> = self.functions.iter().map(|(k, v)| format!("{k}/{v}")).collect();
        let rels: Vec<_> = self.relations.iter().map(|(k, v)| format!("{k}/{v}")).collect();
        write!(f, "consts {{{}}} funcs {{{}}} rels {{{}}}", consts.join(" "), funcs.join(" "), rels.join(" "))
    }
}
