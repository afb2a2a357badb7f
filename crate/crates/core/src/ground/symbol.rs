use std::fmt;
use std::sync::Arc;

use crate::base::AtomicBase;
use crate::logic::{FoTerm, Formula, InstanceMatch, OpType, PreType};

/// `ξ^α_i`: a type and an index. Types compare up to alpha-equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypedVar {
    pub ty: Formula,
    pub index: u32,
}

impl Ord for TypedVar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self == other {
            return std::cmp::Ordering::Equal;
        }
        (self.ty.alpha_key(), self.index).cmp(&(other.ty.alpha_key(), other.index))
    }
}

impl PartialOrd for TypedVar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl TypedVar {
    pub fn new(ty: Formula, index: u32) -> Self {
        TypedVar { ty, index }
    }

    /// `ξ^{α}#i`, as used in diagnostics.
    pub fn greek(&self) -> String {
        format!("ξ^{{{}}}#{}", self.ty, self.index)
    }
}

impl fmt::Display for TypedVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "$v:[{}]#{}", self.ty, self.index)
    }
}

/// Variables bound by an application on one entry.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Binding {
    pub inds: Vec<String>,
    pub typed: Vec<TypedVar>,
}

impl Binding {
    pub fn none() -> Self {
        Binding::default()
    }

    pub fn typed(v: TypedVar) -> Self {
        Binding { inds: Vec::new(), typed: vec![v] }
    }

    pub fn ind(x: &str) -> Self {
        Binding { inds: vec![x.to_string()], typed: Vec::new() }
    }

    pub fn both(x: &str, v: TypedVar) -> Self {
        Binding { inds: vec![x.to_string()], typed: vec![v] }
    }

    pub fn is_empty(&self) -> bool {
        self.inds.is_empty() && self.typed.is_empty()
    }
}

/// A label of some family together with one operational-type instance.
#[derive(Clone, Debug, PartialEq)]
pub struct OpSymbol {
    pub label: String,
    pub family: FamilyKind,
    /// Shared: terms clone their symbols often.
    pub optype: Arc<OpType>,
}

impl OpSymbol {
    pub fn new(label: &str, family: FamilyKind, optype: OpType) -> Self {
        OpSymbol { label: label.to_string(), family, optype: Arc::new(optype) }
    }

    /// Uses the family's default label.
    pub fn of(family: FamilyKind, optype: OpType) -> Self {
        OpSymbol::new(family.default_label(), family, optype)
    }

    pub fn is_primitive(&self) -> bool {
        self.family.is_primitive()
    }
}

/// Scheme families of operational symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    AndI,
    OrI1,
    OrI2,
    ImpI,
    ExI,
    AllI,
    BotE,
    AndE1,
    AndE2,
    OrE,
    ImpE,
    ExE,
    AllE,
    Ind,
    /// Disjunctive syllogism `α∨β, ¬α ▷ β`.
    DisjSyll,
    /// Biconditional introduction, `α↔β` read as `(α→β)∧(β→α)`.
    IffI,
    IffE1,
    IffE2,
    /// The empty operation `α ▷ β` for an atom `α` no rule can conclude.
    EmptyFn,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("not an instance of the scheme: {0}")]
    Shape(String),
    #[error("capture: {0}")]
    Capture(String),
    #[error("bad binding: {0}")]
    Binding(String),
    #[error("eigenvariable `{var}`: {reason}")]
    Eigenvariable { var: String, reason: String },
}

type Check = Result<(), InstanceError>;

fn shape(msg: impl Into<String>) -> InstanceError {
    InstanceError::Shape(msg.into())
}

fn bare(e: &PreType, i: usize) -> Result<&Formula, InstanceError> {
    if e.is_bare() {
        Ok(&e.head)
    } else {
        Err(shape(format!("entry {} must not have a domain", i + 1)))
    }
}

fn single_domain(e: &PreType, i: usize) -> Result<&Formula, InstanceError> {
    match e.domain.as_slice() {
        [d] => Ok(d),
        _ => Err(shape(format!("entry {} must have exactly one domain formula", i + 1))),
    }
}

fn same(a: &Formula, b: &Formula, what: &str) -> Check {
    if a == b {
        Ok(())
    } else {
        Err(shape(format!("{what}: `{a}` and `{b}` differ")))
    }
}

fn no_binding(binds: &[Binding], i: usize) -> Check {
    if binds[i].is_empty() {
        Ok(())
    } else {
        Err(InstanceError::Binding(format!("entry {} binds nothing", i + 1)))
    }
}

fn binds_typed(binds: &[Binding], i: usize, ty: &Formula) -> Check {
    match binds[i].typed.as_slice() {
        [v] if &v.ty == ty => Ok(()),
        _ => Err(InstanceError::Binding(format!("entry {} binds exactly one typed variable of type `{ty}`", i + 1))),
    }
}

fn binds_inds(binds: &[Binding], i: usize, n: usize) -> Result<Vec<String>, InstanceError> {
    if binds[i].inds.len() == n {
        Ok(binds[i].inds.clone())
    } else {
        Err(InstanceError::Binding(format!("entry {} binds exactly {n} individual variable(s)", i + 1)))
    }
}

fn no_typed(binds: &[Binding], i: usize) -> Check {
    if binds[i].typed.is_empty() {
        Ok(())
    } else {
        Err(InstanceError::Binding(format!("entry {} binds no typed variable", i + 1)))
    }
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 19] = [
        FamilyKind::AndI,
        FamilyKind::OrI1,
        FamilyKind::OrI2,
        FamilyKind::ImpI,
        FamilyKind::ExI,
        FamilyKind::AllI,
        FamilyKind::BotE,
        FamilyKind::AndE1,
        FamilyKind::AndE2,
        FamilyKind::OrE,
        FamilyKind::ImpE,
        FamilyKind::ExE,
        FamilyKind::AllE,
        FamilyKind::Ind,
        FamilyKind::DisjSyll,
        FamilyKind::IffI,
        FamilyKind::IffE1,
        FamilyKind::IffE2,
        FamilyKind::EmptyFn,
    ];

    pub fn default_label(self) -> &'static str {
        match self {
            FamilyKind::AndI => "andI",
            FamilyKind::OrI1 => "orI1",
            FamilyKind::OrI2 => "orI2",
            FamilyKind::ImpI => "impI",
            FamilyKind::ExI => "exI",
            FamilyKind::AllI => "allI",
            FamilyKind::BotE => "botE",
            FamilyKind::AndE1 => "andE1",
            FamilyKind::AndE2 => "andE2",
            FamilyKind::OrE => "orE",
            FamilyKind::ImpE => "impE",
            FamilyKind::ExE => "exE",
            FamilyKind::AllE => "allE",
            FamilyKind::Ind => "Ind",
            FamilyKind::DisjSyll => "DS",
            FamilyKind::IffI => "iffI",
            FamilyKind::IffE1 => "iffE1",
            FamilyKind::IffE2 => "iffE2",
            FamilyKind::EmptyFn => "empty",
        }
    }

    pub fn from_name(name: &str) -> Option<FamilyKind> {
        FamilyKind::ALL.iter().copied().find(|k| k.default_label() == name)
    }

    /// Primitive in the sense of the core language.
    pub fn is_primitive(self) -> bool {
        matches!(
            self,
            FamilyKind::AndI
                | FamilyKind::OrI1
                | FamilyKind::OrI2
                | FamilyKind::ImpI
                | FamilyKind::ExI
                | FamilyKind::AllI
                | FamilyKind::BotE
        )
    }

    /// Heads that make a term canonical.
    pub fn is_introduction(self) -> bool {
        self.is_primitive() && self != FamilyKind::BotE
    }

    pub fn arity(self) -> usize {
        match self {
            FamilyKind::OrI1
            | FamilyKind::OrI2
            | FamilyKind::ImpI
            | FamilyKind::ExI
            | FamilyKind::AllI
            | FamilyKind::BotE
            | FamilyKind::AndE1
            | FamilyKind::AndE2
            | FamilyKind::AllE
            | FamilyKind::EmptyFn => 1,
            FamilyKind::AndI
            | FamilyKind::ImpE
            | FamilyKind::ExE
            | FamilyKind::Ind
            | FamilyKind::DisjSyll
            | FamilyKind::IffI
            | FamilyKind::IffE1
            | FamilyKind::IffE2 => 2,
            FamilyKind::OrE => 3,
        }
    }

    /// Checks that `ot` with `binds` is an instance of this family's scheme,
    /// including the binding discipline and the substitution side conditions.
    pub fn check_instance(self, ot: &OpType, binds: &[Binding], base: &AtomicBase) -> Result<(), InstanceError> {
        let n = self.arity();
        if ot.entries.len() != n || binds.len() != n {
            return Err(shape(format!("expected {n} entries")));
        }
        if !ot.codomain.is_bare() {
            return Err(shape("codomain must not have a domain"));
        }
        let e = &ot.entries;
        let c = &ot.codomain.head;
        match self {
            FamilyKind::AndI => {
                let (a, b) = (bare(&e[0], 0)?, bare(&e[1], 1)?);
                no_binding(binds, 0)?;
                no_binding(binds, 1)?;
                match c {
                    Formula::And(l, r) => {
                        same(l, a, "left conjunct")?;
                        same(r, b, "right conjunct")
                    }
                    _ => Err(shape("codomain must be a conjunction")),
                }
            }
            FamilyKind::OrI1 | FamilyKind::OrI2 => {
                let a = bare(&e[0], 0)?;
                no_binding(binds, 0)?;
                match c {
                    Formula::Or(l, r) => same(if self == FamilyKind::OrI1 { l } else { r }, a, "disjunct"),
                    _ => Err(shape("codomain must be a disjunction")),
                }
            }
            FamilyKind::ImpI => {
                let d = single_domain(&e[0], 0)?;
                binds_typed(binds, 0, d)?;
                binds_inds(binds, 0, 0)?;
                match c {
                    Formula::Imp(l, r) => {
                        same(l, d, "antecedent")?;
                        same(r, &e[0].head, "consequent")
                    }
                    _ => Err(shape("codomain must be an implication")),
                }
            }
            FamilyKind::ExI => {
                let inst = bare(&e[0], 0)?;
                no_binding(binds, 0)?;
                match c {
                    Formula::Exists(x, body) => match body.match_instance(x, inst) {
                        InstanceMatch::Term(_) | InstanceMatch::Vacuous => Ok(()),
                        InstanceMatch::Captured(t) => {
                            Err(InstanceError::Capture(format!("witness `{t}` is not free for `{x}` in `{body}`")))
                        }
                        InstanceMatch::NoMatch => Err(shape(format!("`{inst}` is not an instance of `{body}`"))),
                    },
                    _ => Err(shape("codomain must be existential")),
                }
            }
            FamilyKind::AllI => {
                let a = bare(&e[0], 0)?;
                let x = binds_inds(binds, 0, 1)?.remove(0);
                no_typed(binds, 0)?;
                match c {
                    Formula::Forall(y, b) => {
                        let renamed = a
                            .substitute(&x, &FoTerm::Var(y.clone()))
                            .map_err(|_| InstanceError::Capture(format!("`{y}` is not free for `{x}` in `{a}`")))?;
                        same(b, &renamed, "quantified body")?;
                        if y != &x && a.has_free(y) {
                            return Err(InstanceError::Capture(format!("`{y}` already occurs free in `{a}`")));
                        }
                        Ok(())
                    }
                    _ => Err(shape("codomain must be universal")),
                }
            }
            FamilyKind::BotE => {
                same(bare(&e[0], 0)?, &Formula::Bot, "entry")?;
                no_binding(binds, 0)
            }
            FamilyKind::AndE1 | FamilyKind::AndE2 => {
                no_binding(binds, 0)?;
                match bare(&e[0], 0)? {
                    Formula::And(l, r) => same(c, if self == FamilyKind::AndE1 { l } else { r }, "projection"),
                    _ => Err(shape("entry 1 must be a conjunction")),
                }
            }
            FamilyKind::OrE => {
                no_binding(binds, 0)?;
                let (a, b) = match bare(&e[0], 0)? {
                    Formula::Or(a, b) => (a.as_ref(), b.as_ref()),
                    _ => return Err(shape("entry 1 must be a disjunction")),
                };
                same(single_domain(&e[1], 1)?, a, "entry 2 domain")?;
                same(single_domain(&e[2], 2)?, b, "entry 3 domain")?;
                binds_typed(binds, 1, a)?;
                binds_typed(binds, 2, b)?;
                binds_inds(binds, 1, 0)?;
                binds_inds(binds, 2, 0)?;
                same(&e[1].head, c, "entry 2")?;
                same(&e[2].head, c, "entry 3")
            }
            FamilyKind::ImpE => {
                no_binding(binds, 0)?;
                no_binding(binds, 1)?;
                match bare(&e[0], 0)? {
                    Formula::Imp(a, b) => {
                        same(bare(&e[1], 1)?, a, "minor premise")?;
                        same(c, b, "consequent")
                    }
                    _ => Err(shape("entry 1 must be an implication")),
                }
            }
            FamilyKind::ExE => {
                no_binding(binds, 0)?;
                let (x, a) = match bare(&e[0], 0)? {
                    Formula::Exists(x, a) => (x, a.as_ref()),
                    _ => return Err(shape("entry 1 must be existential")),
                };
                let y = binds_inds(binds, 1, 1)?.remove(0);
                let d = single_domain(&e[1], 1)?;
                binds_typed(binds, 1, d)?;
                let opened = a
                    .substitute(x, &FoTerm::Var(y.clone()))
                    .map_err(|_| InstanceError::Capture(format!("`{y}` is not free for `{x}` in `{a}`")))?;
                same(d, &opened, "entry 2 domain")?;
                if bare(&e[0], 0)?.has_free(&y) {
                    return Err(InstanceError::Eigenvariable {
                        var: y.clone(),
                        reason: format!("`{y}` occurs free in the major premise"),
                    });
                }
                same(&e[1].head, c, "entry 2")
            }
            FamilyKind::AllE => {
                no_binding(binds, 0)?;
                match bare(&e[0], 0)? {
                    Formula::Forall(x, a) => match a.match_instance(x, c) {
                        InstanceMatch::Term(k) if base.domain.contains(&k) => Ok(()),
                        InstanceMatch::Term(k) => {
                            Err(shape(format!("instantiation point `{k}` is not a name of an individual")))
                        }
                        InstanceMatch::Vacuous if !base.domain.is_empty() => Ok(()),
                        InstanceMatch::Vacuous => Err(shape("the base has no individuals to instantiate with")),
                        InstanceMatch::Captured(t) => {
                            Err(InstanceError::Capture(format!("`{t}` is not free for `{x}` in `{a}`")))
                        }
                        InstanceMatch::NoMatch => Err(shape(format!("`{c}` is not an instance of `{a}`"))),
                    },
                    _ => Err(shape("entry 1 must be universal")),
                }
            }
            FamilyKind::Ind => {
                if !base.signature.has_numerals() {
                    return Err(shape("induction needs numerals in the signature"));
                }
                no_binding(binds, 0)?;
                let y = binds_inds(binds, 1, 1)?.remove(0);
                let d = single_domain(&e[1], 1)?;
                binds_typed(binds, 1, d)?;
                let zero = d.subst(&y, &FoTerm::zero());
                same(bare(&e[0], 0)?, &zero, "base case")?;
                let succ = d
                    .substitute(&y, &FoTerm::succ(FoTerm::Var(y.clone())))
                    .map_err(|e| InstanceError::Capture(e.to_string()))?;
                same(&e[1].head, &succ, "step case")?;
                match d.match_instance(&y, c) {
                    InstanceMatch::Term(n) if n.as_numeral().is_some() => Ok(()),
                    InstanceMatch::Vacuous => Err(shape(format!("`{y}` must occur free in `{d}`"))),
                    _ => Err(shape(format!("codomain `{c}` is not `{d}` at a numeral"))),
                }
            }
            FamilyKind::DisjSyll => {
                no_binding(binds, 0)?;
                no_binding(binds, 1)?;
                match bare(&e[0], 0)? {
                    Formula::Or(a, b) => {
                        same(bare(&e[1], 1)?, &Formula::not((**a).clone()), "entry 2")?;
                        same(c, b, "codomain")
                    }
                    _ => Err(shape("entry 1 must be a disjunction")),
                }
            }
            FamilyKind::IffI => {
                no_binding(binds, 0)?;
                no_binding(binds, 1)?;
                match (bare(&e[0], 0)?, bare(&e[1], 1)?) {
                    (Formula::Imp(a, b), Formula::Imp(b2, a2)) => {
                        same(a, a2, "entry 2 consequent")?;
                        same(b, b2, "entry 2 antecedent")?;
                        same(c, &Formula::and(e[0].head.clone(), e[1].head.clone()), "codomain")
                    }
                    _ => Err(shape("entries must be implications")),
                }
            }
            FamilyKind::IffE1 | FamilyKind::IffE2 => {
                no_binding(binds, 0)?;
                no_binding(binds, 1)?;
                let (a, b) = iff_parts(bare(&e[0], 0)?).ok_or_else(|| shape("entry 1 must be a biconditional"))?;
                let (from, to) = if self == FamilyKind::IffE1 { (a, b) } else { (b, a) };
                same(bare(&e[1], 1)?, from, "entry 2")?;
                same(c, to, "codomain")
            }
            FamilyKind::EmptyFn => {
                no_binding(binds, 0)?;
                let a = bare(&e[0], 0)?;
                if !matches!(a, Formula::Atom(..)) {
                    return Err(shape("the empty operation needs an atomic domain"));
                }
                if base.system.may_conclude(a) {
                    return Err(shape(format!("`{a}` may be derivable, so the empty operation is not licensed")));
                }
                Ok(())
            }
        }
    }
}

/// `(α→β)∧(β→α)` as `(α, β)`.
pub fn iff_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::And(l, r) => match (l.as_ref(), r.as_ref()) {
            (Formula::Imp(a, b), Formula::Imp(b2, a2)) if a == a2 && b == b2 => Some((a, b)),
            _ => None,
        },
        _ => None,
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.default_label())
    }
}
