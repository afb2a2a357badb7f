use rayon::prelude::*;

use crate::enumerate::{Enumerator, SearchConfig};
use crate::eval::{canonical_everywhere, normalize, DenotationMap, EvalConfig, EvalError};
use crate::ground::{typecheck, GroundTerm, GroundingLanguage};
use crate::report::{Item, Report};

use super::{sample_atoms, sample_formulas};

/// Closed terms kept per sample type.
const PER_TYPE: usize = 48;

/// The closed canonical term standing for closed `t`: its normal form,
/// checked to be canonical at every level and of the same type.
pub fn closure_witness(
    t: &GroundTerm,
    lang: &GroundingLanguage,
    map: &DenotationMap,
    cfg: EvalConfig,
) -> Result<(GroundTerm, u64), String> {
    let j = typecheck(t, lang).map_err(|e| e.to_string())?;
    let nf = normalize(t, map, cfg).map_err(|e| e.to_string())?;
    let jn = typecheck(&nf.term, lang).map_err(|e| format!("normal form is ill-typed: {e}"))?;
    if jn.codomain != j.codomain || !jn.is_closed() {
        return Err(format!("normal form has type {}, wanted {}", jn.codomain, j.codomain));
    }
    if !canonical_everywhere(&nf.term) {
        return Err(format!("normal form {} is not canonical", nf.term));
    }
    Ok((nf.term, nf.steps))
}

fn check_one(id: String, t: &GroundTerm, map: &DenotationMap, lang: &GroundingLanguage, cfg: EvalConfig) -> Item {
    match normalize(t, map, cfg) {
        Err(e @ EvalError::FuelExhausted { .. }) => Item::new(id, "fuel exhausted", false).detail(format!("{t}: {e}")),
        Err(e) => Item::new(id, "stuck", false).detail(format!("{t}: {e}")),
        Ok(_) => match closure_witness(t, lang, map, cfg) {
            Ok((u, steps)) => Item::new(id, "canonical", true).detail(format!("{t} ↦ {u}")).steps(steps),
            Err(e) => Item::new(id, "not canonical", false).detail(format!("{t}: {e}")),
        },
    }
}

/// Normalizes closed terms of sample types up to `size_bound` and checks each
/// normal form is a closed canonical term of the same type.
pub fn canonical_closure_report(
    lang: &GroundingLanguage,
    map: &DenotationMap,
    size_bound: usize,
    cfg: EvalConfig,
) -> Report {
    let atoms = sample_atoms(&lang.base);
    let mut terms = Vec::new();
    for ty in sample_formulas(&lang.base) {
        let mut seeds = atoms.clone();
        seeds.push(ty.clone());
        let mut search = Enumerator::new(lang, SearchConfig::default(), &seeds);
        for t in search.closed(&ty, size_bound, PER_TYPE) {
            if !terms.contains(&t) {
                terms.push(t);
            }
        }
    }
    let items: Vec<Item> =
        terms.par_iter().enumerate().map(|(n, t)| check_one(format!("term {}", n + 1), t, map, lang, cfg)).collect();
    let mut report = Report::new(format!("canonical-closure {} (size ≤ {size_bound})", lang.name));
    for i in items {
        report.push(i);
    }
    report
}
