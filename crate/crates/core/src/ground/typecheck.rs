use std::collections::BTreeSet;
use std::fmt;

use crate::logic::Formula;

use super::language::GroundingLanguage;
use super::symbol::{Binding, FamilyKind, InstanceError, OpSymbol, TypedVar};
use super::term::{show_path, GroundTerm, Path};

/// `α_s, ..., α_t ⊢ β` on the free individuals of a term.
#[derive(Clone, Debug, PartialEq)]
pub struct Judgment {
    pub free_typed: BTreeSet<TypedVar>,
    pub free_inds: BTreeSet<String>,
    pub codomain: Formula,
}

impl Judgment {
    /// Types of the free typed variables, without repetition.
    pub fn context(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = Vec::new();
        for v in &self.free_typed {
            if !out.contains(&v.ty) {
                out.push(v.ty.clone());
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_typed.is_empty() && self.free_inds.is_empty()
    }

    /// Same context, individuals and codomain, up to alpha.
    pub fn same_shape(&self, other: &Judgment) -> bool {
        let (a, b) = (self.context(), other.context());
        self.codomain == other.codomain
            && self.free_inds == other.free_inds
            && a.len() == b.len()
            && a.iter().all(|f| b.contains(f))
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self.context().iter().map(|a| a.to_string()).collect();
        if ctx.is_empty() {
            write!(f, "⊢ {}", self.codomain)?;
        } else {
            write!(f, "{} ⊢ {}", ctx.join(", "), self.codomain)?;
        }
        if !self.free_inds.is_empty() {
            let xs: Vec<&str> = self.free_inds.iter().map(String::as_str).collect();
            write!(f, "  [individuals: {}]", xs.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TypeErrorKind {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("label `{label}` belongs to family {declared}, used as {used}")]
    FamilyMismatch { label: String, declared: FamilyKind, used: FamilyKind },
    #[error("unknown derivation name `{0}`")]
    UnknownDelta(String),
    #[error("invalid derivation: {0}")]
    BadDerivation(String),
    #[error("derivation has undischarged assumptions")]
    OpenDerivation,
    #[error("`{label}`: {reason}")]
    BadInstance { label: String, reason: InstanceError },
    #[error("`{label}` takes {expected} arguments, got {found}")]
    Arity { label: String, expected: usize, found: usize },
    #[error("entry {entry}: expected a ground for `{expected}`, found one for `{found}`")]
    Mismatch { entry: usize, expected: Formula, found: Formula },
    #[error("eigenvariable `{var}` bound on entry {entry} occurs in the type of {}, which entry {entry} does not bind", typed.greek())]
    Eigenvariable { entry: usize, var: String, typed: TypedVar },
    #[error("eigenvariable `{var}` bound on entry {entry} occurs free in the codomain `{codomain}`")]
    EigenvariableInCodomain { entry: usize, var: String, codomain: Formula },
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("at {}: {kind}", show_path(path))]
pub struct TypeError {
    pub path: Path,
    pub kind: TypeErrorKind,
}

pub fn typecheck(t: &GroundTerm, lang: &GroundingLanguage) -> Result<Judgment, TypeError> {
    check_at(t, lang, &mut Vec::new())
}

fn check_at(t: &GroundTerm, lang: &GroundingLanguage, path: &mut Path) -> Result<Judgment, TypeError> {
    let err = |path: &Path, kind| TypeError { path: path.clone(), kind };
    match t {
        GroundTerm::Delta(d) => {
            if let Some(name) = &d.name {
                match lang.deltas.get(name) {
                    Some(reg) if **reg == *d.derivation => {}
                    _ => return Err(err(path, TypeErrorKind::UnknownDelta(name.clone()))),
                }
            }
            let concl = d
                .derivation
                .check(&lang.base.system)
                .map_err(|e| err(path, TypeErrorKind::BadDerivation(e.to_string())))?;
            if d.derivation.has_assumptions() {
                return Err(err(path, TypeErrorKind::OpenDerivation));
            }
            Ok(Judgment { free_typed: BTreeSet::new(), free_inds: d.derivation.free_vars(), codomain: concl })
        }
        GroundTerm::Var(v) => Ok(Judgment {
            free_typed: BTreeSet::from([v.clone()]),
            free_inds: v.ty.free_vars(),
            codomain: v.ty.clone(),
        }),
        GroundTerm::App(a) => {
            let mut judgments = Vec::with_capacity(a.args.len());
            for (i, arg) in a.args.iter().enumerate() {
                path.push(i);
                let j = check_at(arg, lang, path);
                path.pop();
                judgments.push(j?);
            }
            check_application(&a.sym, &a.binds, &judgments, lang).map_err(|k| err(path, k))
        }
    }
}

/// Types one application node from the judgments of its arguments.
pub fn check_application(
    sym: &OpSymbol,
    binds: &[Binding],
    args: &[Judgment],
    lang: &GroundingLanguage,
) -> Result<Judgment, TypeErrorKind> {
    match lang.family(&sym.label) {
        None => return Err(TypeErrorKind::UnknownSymbol(sym.label.clone())),
        Some(k) if k != sym.family => {
            return Err(TypeErrorKind::FamilyMismatch { label: sym.label.clone(), declared: k, used: sym.family })
        }
        Some(_) => {}
    }
    let n = sym.optype.entries.len();
    if args.len() != n || binds.len() != n {
        return Err(TypeErrorKind::Arity { label: sym.label.clone(), expected: n, found: args.len() });
    }
    sym.family
        .check_instance(&sym.optype, binds, &lang.base)
        .map_err(|reason| TypeErrorKind::BadInstance { label: sym.label.clone(), reason })?;
    let codomain = &sym.optype.codomain.head;
    let mut free_typed = BTreeSet::new();
    let mut free_inds = codomain.free_vars();
    for (i, ((j, b), entry)) in args.iter().zip(binds).zip(&sym.optype.entries).enumerate() {
        if j.codomain != entry.head {
            return Err(TypeErrorKind::Mismatch {
                entry: i + 1,
                expected: entry.head.clone(),
                found: j.codomain.clone(),
            });
        }
        for x in &b.inds {
            for v in &j.free_typed {
                if v.ty.has_free(x) && !b.typed.contains(v) {
                    return Err(TypeErrorKind::Eigenvariable { entry: i + 1, var: x.clone(), typed: v.clone() });
                }
            }
            if codomain.has_free(x) {
                return Err(TypeErrorKind::EigenvariableInCodomain {
                    entry: i + 1,
                    var: x.clone(),
                    codomain: codomain.clone(),
                });
            }
        }
        free_typed.extend(j.free_typed.iter().filter(|v| !b.typed.contains(v)).cloned());
        free_inds.extend(j.free_inds.iter().filter(|x| !b.inds.contains(x)).cloned());
    }
    Ok(Judgment { free_typed, free_inds, codomain: codomain.clone() })
}
