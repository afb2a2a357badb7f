//! Defining equations and evaluation of ground terms.

mod equiv;
mod identity;
mod map;
mod reduce;
mod scheme;

pub use equiv::{check_denotation_theorem, equivalent, instances, EquivError, Instance, ProbeConfig, Verdict};
pub use identity::{cross_base_identical, identical, same_rule};
pub use map::{DenotationMap, MapError, RuleEntry};
pub use reduce::{
    canonical_everywhere, contract_at, normalize, normalize_observed, normalize_open, step, whnf, EvalConfig,
    EvalError, Normalized, StepRecord, DEFAULT_FUEL,
};
pub use scheme::{contract, ds_composite, instantiate, ContractFailure, RhsContext, Scheme};
