//! Internal and external properties of languages of grounding.

mod classify;
mod closure;
mod merge;
mod universal;
mod validity;


pub use classify::{classify_expansion, expansion_examples, ClassifyError, Evidence, ExpansionReport, SearchBounds};
pub use closure::{canonical_closure_report, closure_witness};
pub use merge::{merge_languages, relabel, MergeError, Merged};
pub use universal::universal_term;
pub use validity::{
    check_inference_validity, il_correctness_suite, il_rules, InferenceRule, Premise, Validity, ValidityError,
};

use crate::base::AtomicBase;
use crate::logic::{FoTerm, Formula};

/// Up to three closed atoms of the base: its nullary relations, else the
/// axioms at the first individual, else relations at the first individual.
pub fn sample_atoms(base: &AtomicBase) -> Vec<Formula> {
    let mut out: Vec<Formula> =
        base.signature.relations.iter().filter(|(_, &n)| n == 0).map(|(r, _)| Formula::prop(r)).collect();
    let first = base.domain.first(1).pop();
    if let Some(k) = &first {
        for rule in base.system.rules.iter().filter(|r| r.is_axiom()) {
            let inst = rule.conclusion.all_vars().into_iter().map(|x| (x, k.clone())).collect::<Vec<_>>();
            let f = rule.conclusion.subst_simultaneous(&inst);
            if f != Formula::Bot && !out.contains(&f) {
                out.push(f);
            }
        }
        for (r, &n) in &base.signature.relations {
            let f = Formula::atom(r, vec![k.clone(); n]);
            if n > 0 && !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out.truncate(3);
    out
}

/// An open atom in `x` for quantifier instances: the first unary relation,
/// else the first relation with `x` in every place.
pub fn sample_open_atom(base: &AtomicBase, x: &str) -> Option<Formula> {
    let rels = &base.signature.relations;
    let (r, n) = rels.iter().find(|(_, &n)| n == 1).or_else(|| rels.iter().find(|(_, &n)| n > 0))?;
    Some(Formula::atom(r, vec![FoTerm::var(x); *n]))
}

/// Sample formulas over the base: atoms and `⊥`, one binary connective over
/// atoms, and the two quantifiers over an open atom.
pub fn sample_formulas(base: &AtomicBase) -> Vec<Formula> {
    let atoms = sample_atoms(base);
    let mut out = atoms.clone();
    out.push(Formula::Bot);
    for a in &atoms {
        for b in &atoms {
            out.push(Formula::and(a.clone(), b.clone()));
            out.push(Formula::or(a.clone(), b.clone()));
            out.push(Formula::imp(a.clone(), b.clone()));
        }
        out.push(Formula::not(a.clone()));
    }
    if let Some(px) = sample_open_atom(base, "x") {
        out.push(Formula::forall("x", Formula::imp(px.clone(), px.clone())));
        out.push(Formula::exists("x", px));
    }
    out
}
