//! First-order background languages: terms, formulas, signatures, operational types.

mod formula;
mod optype;
pub mod parse;
mod signature;
mod term;

pub use formula::{CaptureError, Formula, InstanceMatch, EQ};
pub use optype::{OpType, PreType};
pub use parse::{parse_formula, parse_term, ParseError, ParseErrorKind, Parser};
pub use signature::{DuplicateSymbol, Signature};
pub use term::{fresh_name, FoTerm, PLUS, SUCC, TIMES, ZERO};
