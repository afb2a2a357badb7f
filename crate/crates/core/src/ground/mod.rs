//! Ground terms over a language of grounding, and their typechecker.

pub mod build;
mod language;
mod symbol;
mod syntax;
mod term;
mod typecheck;

pub use language::{GroundingLanguage, LanguageError, LanguageKind};
pub use symbol::{iff_parts, Binding, FamilyKind, InstanceError, OpSymbol, TypedVar};
pub use syntax::{
    build_language, gterm, optype, parse_formula_in, parse_glang, parse_gterm, parse_optype, print_glang, BaseRef,
    LangDecl, LangFileError,
};
pub use term::{show_path, App, DeltaRef, GroundTerm, Path};
pub use typecheck::{check_application, typecheck, Judgment, TypeError, TypeErrorKind};

#[cfg(test)]
mod tests;
