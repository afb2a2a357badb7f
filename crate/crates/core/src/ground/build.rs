//! Scheme instances for each symbol family, under default labels.

use crate::logic::{FoTerm, Formula, OpType, PreType};

use super::symbol::{FamilyKind, OpSymbol};

fn sym(kind: FamilyKind, entries: Vec<PreType>, codomain: Formula) -> OpSymbol {
    OpSymbol::of(kind, OpType::new(entries, PreType::bare(codomain)))
}

fn b(f: &Formula) -> PreType {
    PreType::bare(f.clone())
}

pub fn and_i(a: &Formula, c: &Formula) -> OpSymbol {
    sym(FamilyKind::AndI, vec![b(a), b(c)], Formula::and(a.clone(), c.clone()))
}

/// `∨I_i[α_i ▷ α_1∨α_2]`, `i` being 1 or 2.
pub fn or_i(i: u8, a1: &Formula, a2: &Formula) -> OpSymbol {
    let (kind, entry) = if i == 1 { (FamilyKind::OrI1, a1) } else { (FamilyKind::OrI2, a2) };
    sym(kind, vec![b(entry)], Formula::or(a1.clone(), a2.clone()))
}

/// `→I[α ▷ α→β]`; the entry is `{α} ▷ β`.
pub fn imp_i(a: &Formula, c: &Formula) -> OpSymbol {
    sym(FamilyKind::ImpI, vec![PreType::new(vec![a.clone()], c.clone())], Formula::imp(a.clone(), c.clone()))
}

/// `∃I[α(t) ▷ ∃x α(x)]`.
pub fn ex_i(x: &str, body: &Formula, t: &FoTerm) -> OpSymbol {
    sym(FamilyKind::ExI, vec![PreType::bare(body.subst(x, t))], Formula::exists(x, body.clone()))
}

/// `∀I[α(x) ▷ ∀y α(y/x)]`, binding `x`.
pub fn all_i(x: &str, a: &Formula, y: &str) -> OpSymbol {
    let body = a.subst(x, &FoTerm::var(y));
    sym(FamilyKind::AllI, vec![b(a)], Formula::forall(y, body))
}

pub fn bot_e(c: &Formula) -> OpSymbol {
    sym(FamilyKind::BotE, vec![PreType::bare(Formula::Bot)], c.clone())
}

pub fn and_e(i: u8, a1: &Formula, a2: &Formula) -> OpSymbol {
    let (kind, c) = if i == 1 { (FamilyKind::AndE1, a1) } else { (FamilyKind::AndE2, a2) };
    sym(kind, vec![PreType::bare(Formula::and(a1.clone(), a2.clone()))], c.clone())
}

/// `∨E[α∨β, γ, γ ▷ γ]`, binding `ξ^α` on entry 2 and `ξ^β` on entry 3.
pub fn or_e(a: &Formula, c: &Formula, g: &Formula) -> OpSymbol {
    sym(
        FamilyKind::OrE,
        vec![
            PreType::bare(Formula::or(a.clone(), c.clone())),
            PreType::new(vec![a.clone()], g.clone()),
            PreType::new(vec![c.clone()], g.clone()),
        ],
        g.clone(),
    )
}

pub fn imp_e(a: &Formula, c: &Formula) -> OpSymbol {
    sym(FamilyKind::ImpE, vec![PreType::bare(Formula::imp(a.clone(), c.clone())), b(a)], c.clone())
}

/// `∃E[∃x α(x), β ▷ β]`, binding `y` and `ξ^{α(y)}` on entry 2.
pub fn ex_e(x: &str, body: &Formula, y: &str, c: &Formula) -> OpSymbol {
    let opened = body.subst(x, &FoTerm::var(y));
    sym(
        FamilyKind::ExE,
        vec![PreType::bare(Formula::exists(x, body.clone())), PreType::new(vec![opened], c.clone())],
        c.clone(),
    )
}

/// `∀E[∀x α(x) ▷ α(k)]`.
pub fn all_e(x: &str, body: &Formula, k: &FoTerm) -> OpSymbol {
    sym(FamilyKind::AllE, vec![PreType::bare(Formula::forall(x, body.clone()))], body.subst(x, k))
}

/// `Ind[α(0), α(s(y)) ▷ α(n)]`, binding `y` and `ξ^{α(y)}` on entry 2.
pub fn ind(y: &str, d: &Formula, n: u64) -> OpSymbol {
    let yv = FoTerm::var(y);
    sym(
        FamilyKind::Ind,
        vec![PreType::bare(d.subst(y, &FoTerm::zero())), PreType::new(vec![d.clone()], d.subst(y, &FoTerm::succ(yv)))],
        d.subst(y, &FoTerm::numeral(n)),
    )
}

/// `DS[α∨β, ¬α ▷ β]`.
pub fn disj_syll(a: &Formula, c: &Formula) -> OpSymbol {
    sym(
        FamilyKind::DisjSyll,
        vec![PreType::bare(Formula::or(a.clone(), c.clone())), PreType::bare(Formula::not(a.clone()))],
        c.clone(),
    )
}

/// `(α→β)∧(β→α)`.
pub fn iff(a: &Formula, c: &Formula) -> Formula {
    Formula::and(Formula::imp(a.clone(), c.clone()), Formula::imp(c.clone(), a.clone()))
}

pub fn iff_i(a: &Formula, c: &Formula) -> OpSymbol {
    sym(
        FamilyKind::IffI,
        vec![PreType::bare(Formula::imp(a.clone(), c.clone())), PreType::bare(Formula::imp(c.clone(), a.clone()))],
        iff(a, c),
    )
}

/// `iffE_1[α↔β, α ▷ β]` and `iffE_2[α↔β, β ▷ α]`.
pub fn iff_e(i: u8, a: &Formula, c: &Formula) -> OpSymbol {
    let (kind, from, to) = if i == 1 { (FamilyKind::IffE1, a, c) } else { (FamilyKind::IffE2, c, a) };
    sym(kind, vec![PreType::bare(iff(a, c)), b(from)], to.clone())
}

pub fn empty_fn(a: &Formula, c: &Formula) -> OpSymbol {
    sym(FamilyKind::EmptyFn, vec![b(a)], c.clone())
}
