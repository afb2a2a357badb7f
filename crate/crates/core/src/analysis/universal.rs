use crate::eval::DenotationMap;
use crate::ground::{GroundTerm, GroundingLanguage};

/// No `δ` anywhere, and every non-primitive symbol is registered universal.
pub fn universal_term(t: &GroundTerm, lang: &GroundingLanguage, map: &DenotationMap) -> bool {
    t.subterms().into_iter().all(|(_, s)| match s {
        GroundTerm::Var(_) => true,
        GroundTerm::Delta(_) => false,
        GroundTerm::App(a) => {
            let kind = lang.family(&a.sym.label).unwrap_or(a.sym.family);
            kind.is_primitive() || map.is_universal(&a.sym.label)
        }
    })
}
