use crate::base::Derivation;
use crate::ground::{typecheck, GroundTerm, GroundingLanguage, OpSymbol};

use super::map::DenotationMap;

/// Heads agree: the same primitive symbol, or non-primitive symbols whose
/// rewrite schemes coincide.
pub fn same_rule(a: &OpSymbol, ma: &DenotationMap, b: &OpSymbol, mb: &DenotationMap) -> bool {
    if a.family != b.family {
        return false;
    }
    if a.is_primitive() {
        return a.label == b.label;
    }
    match (ma.scheme(&a.label), mb.scheme(&b.label)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

/// Syntactic identity of two well-typed terms of the same judgment, up to
/// bound names and local indices.
pub fn identical(t: &GroundTerm, u: &GroundTerm, lang: &GroundingLanguage, map: &DenotationMap) -> bool {
    match (typecheck(t, lang), typecheck(u, lang)) {
        (Ok(a), Ok(b)) if a.same_shape(&b) => t.alpha_eq_with(u, &|x, y| same_rule(x, map, y, map)),
        _ => false,
    }
}

/// [`identical`] across two languages; every δ leaf must be checked in its
/// own base and use rules of the same content there.
pub fn cross_base_identical(
    t: &GroundTerm,
    l1: &GroundingLanguage,
    m1: &DenotationMap,
    u: &GroundTerm,
    l2: &GroundingLanguage,
    m2: &DenotationMap,
) -> bool {
    let (Ok(a), Ok(b)) = (typecheck(t, l1), typecheck(u, l2)) else {
        return false;
    };
    if !a.same_shape(&b) || !t.alpha_eq_with(u, &|x, y| same_rule(x, m1, y, m2)) {
        return false;
    }
    t.subterms().iter().all(|(_, s)| match s {
        GroundTerm::Delta(d) => same_rule_content(&d.derivation, l1, l2),
        _ => true,
    })
}

fn same_rule_content(d: &Derivation, l1: &GroundingLanguage, l2: &GroundingLanguage) -> bool {
    match d {
        Derivation::Assume(_) => true,
        Derivation::Step { rule, premises, .. } => {
            let key = |l: &GroundingLanguage| l.base.system.rule(rule).map(|r| r.content_key());
            key(l1).is_some() && key(l1) == key(l2) && premises.iter().all(|p| same_rule_content(p, l1, l2))
        }
    }
}
