use std::fmt;

use crate::ground::{show_path, FamilyKind, GroundTerm, Path};

use super::map::DenotationMap;
use super::scheme::{contract, ContractFailure};

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("the term is open; only closed terms are evaluated")]
    Open,
    #[error("fuel exhausted after {steps} steps")]
    FuelExhausted { steps: u64, last: GroundTerm },
    #[error("stuck at {}: no equation of `{label}` applies", show_path(path))]
    Stuck { path: Path, label: String },
    #[error(
        "at {}: a closed ground of an underivable formula was reached, so the base is inconsistent",
        show_path(path)
    )]
    BaseInconsistency { path: Path },
    #[error("no rewrite scheme for `{0}`")]
    NoRule(String),
}

#[derive(Clone, Copy, Debug)]
pub struct EvalConfig {
    pub fuel: u64,
    pub trace: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { fuel: DEFAULT_FUEL, trace: false }
    }
}

impl EvalConfig {
    /// Default fuel, or `GROUNDC_FUEL` when it is set to a number.
    pub fn from_env() -> Self {
        let fuel = std::env::var("GROUNDC_FUEL").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_FUEL);
        EvalConfig { fuel, trace: false }
    }
}

/// One rewrite: where it fired, which label, and the size afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub index: u64,
    pub path: Path,
    pub label: String,
    pub size: usize,
}

impl fmt::Display for StepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>4}  {:<10} {:<8} size {}", self.index, show_path(&self.path), self.label, self.size)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    pub term: GroundTerm,
    pub steps: u64,
    pub trace: Vec<StepRecord>,
}

/// What the head of a term is doing.
#[derive(Debug, PartialEq, Eq)]
enum Head {
    /// A redex at this path.
    Redex(Path),
    /// A canonical head.
    Value,
    /// Blocked on a typed variable.
    Neutral,
}

fn head(t: &GroundTerm, map: &DenotationMap, path: &mut Path) -> Result<Head, EvalError> {
    let GroundTerm::App(a) = t else {
        return Ok(if matches!(t, GroundTerm::Var(_)) { Head::Neutral } else { Head::Value });
    };
    let scrutinees: &[usize] = match a.sym.family {
        FamilyKind::BotE => &[0],
        k if k.is_primitive() => return Ok(Head::Value),
        _ => map.scheme(&a.sym.label).ok_or_else(|| EvalError::NoRule(a.sym.label.clone()))?.scrutinees(),
    };
    for &s in scrutinees {
        path.push(s);
        let h = head(&a.args[s], map, path)?;
        path.pop();
        match h {
            Head::Value if matches!(a.args[s], GroundTerm::Var(_)) => return Ok(Head::Neutral),
            Head::Value => {}
            other => return Ok(other),
        }
    }
    if a.sym.family == FamilyKind::BotE {
        return Err(EvalError::BaseInconsistency { path: path.clone() });
    }
    Ok(Head::Redex(path.clone()))
}

/// Leftmost-outermost redex, looking under canonical heads and neutral
/// terms once the head is done.
fn next_redex(t: &GroundTerm, map: &DenotationMap, path: &mut Path) -> Result<Option<Path>, EvalError> {
    if let Head::Redex(p) = head(t, map, path)? {
        return Ok(Some(p));
    }
    if let GroundTerm::App(a) = t {
        for (i, arg) in a.args.iter().enumerate() {
            path.push(i);
            let r = next_redex(arg, map, path)?;
            path.pop();
            if r.is_some() {
                return Ok(r);
            }
        }
    }
    Ok(None)
}

/// Contracts the redex at `path`.
pub fn contract_at(t: &GroundTerm, path: &[usize], map: &DenotationMap) -> Result<(GroundTerm, String), EvalError> {
    let sub =
        t.at(path).and_then(GroundTerm::as_app).ok_or(EvalError::Stuck { path: path.to_vec(), label: "?".into() })?;
    let label = sub.sym.label.clone();
    let scheme = map.scheme(&label).ok_or_else(|| EvalError::NoRule(label.clone()))?;
    match contract(scheme, sub, &map.rhs()) {
        Ok(new) => Ok((t.replace_at(path, new), label)),
        Err(ContractFailure::Shape) => Err(EvalError::Stuck { path: path.to_vec(), label }),
        Err(ContractFailure::Inconsistent) => Err(EvalError::BaseInconsistency { path: path.to_vec() }),
    }
}

/// One weak-head step. `None` when the head is canonical, or blocked on a
/// typed variable in an open term.
pub fn step(t: &GroundTerm, map: &DenotationMap) -> Result<Option<(GroundTerm, Path, String)>, EvalError> {
    match head(t, map, &mut Vec::new())? {
        Head::Redex(p) => {
            let (new, label) = contract_at(t, &p, map)?;
            Ok(Some((new, p, label)))
        }
        Head::Neutral if t.is_closed() => {
            Err(EvalError::Stuck { path: Vec::new(), label: t.head_label().unwrap_or("?").to_string() })
        }
        _ => Ok(None),
    }
}

/// Reduces a term to weak-head normal form.
pub fn whnf(t: &GroundTerm, map: &DenotationMap, cfg: EvalConfig) -> Result<Normalized, EvalError> {
    run(t, map, cfg, &mut |_, _| {}, true)
}

/// Full normal form of a closed term: weak-head normal form first, then
/// reduction under every binder.
pub fn normalize(t: &GroundTerm, map: &DenotationMap, cfg: EvalConfig) -> Result<Normalized, EvalError> {
    normalize_observed(t, map, cfg, &mut |_, _| {})
}

/// [`normalize`], calling `observe` with the term after every step.
pub fn normalize_observed(
    t: &GroundTerm,
    map: &DenotationMap,
    cfg: EvalConfig,
    observe: &mut dyn FnMut(&GroundTerm, &StepRecord),
) -> Result<Normalized, EvalError> {
    if !t.is_closed() {
        return Err(EvalError::Open);
    }
    run(t, map, cfg, observe, false)
}

/// Normalizes a possibly open term. Neutral subterms stay as they are.
pub fn normalize_open(t: &GroundTerm, map: &DenotationMap, cfg: EvalConfig) -> Result<Normalized, EvalError> {
    run(t, map, cfg, &mut |_, _| {}, false)
}

fn run(
    t: &GroundTerm,
    map: &DenotationMap,
    cfg: EvalConfig,
    observe: &mut dyn FnMut(&GroundTerm, &StepRecord),
    weak: bool,
) -> Result<Normalized, EvalError> {
    let mut cur = t.clone();
    let mut steps = 0u64;
    let mut trace = Vec::new();
    loop {
        let at = if weak {
            match head(&cur, map, &mut Vec::new())? {
                Head::Redex(p) => Some(p),
                _ => None,
            }
        } else {
            next_redex(&cur, map, &mut Vec::new())?
        };
        let Some(path) = at else {
            return Ok(Normalized { term: cur, steps, trace });
        };
        if steps >= cfg.fuel {
            return Err(EvalError::FuelExhausted { steps, last: cur });
        }
        let (next, label) = contract_at(&cur, &path, map)?;
        steps += 1;
        cur = next;
        let rec = StepRecord { index: steps, path, label, size: cur.size() };
        observe(&cur, &rec);
        if cfg.trace {
            trace.push(rec);
        }
    }
}

/// Every closed subterm has a canonical head.
pub fn canonical_everywhere(t: &GroundTerm) -> bool {
    t.subterms().iter().all(|(_, s)| !s.is_closed() || s.is_canonical())
}
