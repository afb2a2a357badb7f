//! Atomic systems, bases and derivations.

mod derivation;
mod file;
mod rule;

pub use derivation::{Derivation, DerivationError};
pub use file::{parse_base, print_base, BaseFileError};
pub use rule::{base_expansion, subst_atom, AtomicBase, AtomicRule, AtomicSystem, IndividualDomain, RuleError};
