use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::base::AtomicBase;
use crate::enumerate::{Enumerator, SearchConfig};
use crate::eval::{
    contract, equivalent, normalize, same_rule, DenotationMap, EvalConfig, EvalError, MapError, ProbeConfig,
    RhsContext, Scheme, Verdict,
};
use crate::ground::{build, typecheck, FamilyKind, GroundTerm, GroundingLanguage, LanguageKind, OpSymbol};
use crate::logic::{Formula, Signature};
use crate::report::{Item, Report};

use super::{sample_atoms, sample_formulas};

#[derive(Clone, Debug)]
pub struct SearchBounds {
    pub size_bound: usize,
    pub probe: ProbeConfig,
    /// Types searched for gaps; `None` uses sample formulas of the smaller
    /// language's base.
    pub types: Option<Vec<Formula>>,
    /// Terms of the larger language tried per type.
    pub per_type: usize,
    pub eval: EvalConfig,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            size_bound: 6,
            probe: ProbeConfig::default(),
            types: None,
            per_type: 16,
            eval: EvalConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    /// Every new symbol with the composite standing for it.
    Witnessed(Vec<(String, GroundTerm)>),
    SearchedNoGap {
        bound: usize,
    },
    GapFound {
        term: GroundTerm,
        ty: Formula,
        bound: usize,
    },
    Unknown(String),
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Witnessed(ws) if ws.is_empty() => write!(f, "Witnessed(no new symbols)"),
            Evidence::Witnessed(ws) => {
                let parts: Vec<String> = ws.iter().map(|(l, c)| format!("{l} by {c}")).collect();
                write!(f, "Witnessed({})", parts.join("; "))
            }
            Evidence::SearchedNoGap { bound } => write!(f, "SearchedNoGap(size ≤ {bound})"),
            Evidence::GapFound { term, ty, bound } => {
                write!(f, "GapFound: {term} : {ty} has no counterpart up to size {bound}")
            }
            Evidence::Unknown(r) => write!(f, "Unknown({r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport {
    pub primitive: bool,
    pub evidence: Evidence,
}

impl fmt::Display for ExpansionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "primitive={}, {}", self.primitive, self.evidence)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("`{0}` is not an expansion of `{1}`")]
    NotExpansion(String, String),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// The scheme whose right-hand side, built from smaller-language symbols,
/// stands for a symbol defined by `s`.
fn witness_scheme(s: Scheme) -> Option<Scheme> {
    match s {
        Scheme::DisjSyll | Scheme::DisjSyllComposite => Some(Scheme::DisjSyllComposite),
        Scheme::IffIntro => Some(Scheme::IffIntro),
        Scheme::IffElim(i) => Some(Scheme::IffElim(i)),
        _ => None,
    }
}

fn generic_symbol(kind: FamilyKind, a: &Formula, b: &Formula) -> Option<OpSymbol> {
    Some(match kind {
        FamilyKind::DisjSyll => build::disj_syll(a, b),
        FamilyKind::IffI => build::iff_i(a, b),
        FamilyKind::IffE1 => build::iff_e(1, a, b),
        FamilyKind::IffE2 => build::iff_e(2, a, b),
        _ => return None,
    })
}

/// A composite over `lang1` that matches `label` on probed instances.
fn composition_witness(
    label: &str,
    lang1: &GroundingLanguage,
    lang2: &GroundingLanguage,
    map2: &DenotationMap,
    bounds: &SearchBounds,
) -> Result<GroundTerm, String> {
    let kind = lang2.family(label).ok_or("unknown label")?;
    let ws = map2.scheme(label).and_then(witness_scheme).ok_or("no registered composition")?;
    if let Some(k) = ws.needs().iter().find(|k| !lang1.has_family(**k)) {
        return Err(format!("the smaller language has no {k} symbol"));
    }
    let labels: BTreeMap<FamilyKind, String> =
        FamilyKind::ALL.iter().filter_map(|&k| lang1.label_of(k).map(|l| (k, l.to_string()))).collect();
    let first = lang1.base.domain.first(1).pop();
    let cx = RhsContext { labels: &labels, witness: first.as_ref() };
    let mut candidates = sample_atoms(&lang1.base);
    candidates.push(Formula::Bot);
    candidates.push(Formula::imp(Formula::Bot, Formula::Bot));
    let mut last = String::from("no candidate instance");
    for a in &candidates {
        for b in &candidates {
            let Some(mut sym) = generic_symbol(kind, a, b) else {
                return Err(format!("no generic instance for {kind}"));
            };
            sym.label = label.to_string();
            let args = sym
                .optype
                .entries
                .iter()
                .enumerate()
                .map(|(i, e)| GroundTerm::var(e.head.clone(), i as u32 + 1))
                .collect();
            let app = GroundTerm::apply(sym, args);
            let GroundTerm::App(node) = &app else { unreachable!() };
            let comp = contract(ws, node, &cx).map_err(|e| format!("{e:?}"))?;
            let (ja, jc) = match (typecheck(&app, lang2), typecheck(&comp, lang1)) {
                (Ok(ja), Ok(jc)) => (ja, jc),
                (Err(e), _) | (_, Err(e)) => return Err(e.to_string()),
            };
            if !ja.same_shape(&jc) {
                return Err(format!("the composite has judgment {jc}, wanted {ja}"));
            }
            match equivalent(&app, &comp, lang2, map2, bounds.probe, bounds.eval) {
                Ok(Verdict::Equivalent { .. }) => return Ok(comp),
                Ok(v @ Verdict::Counterexample { .. }) => return Err(v.to_string()),
                Ok(Verdict::Unknown { reason }) => last = reason,
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Err(last)
}

fn normal_form(t: &GroundTerm, map: &DenotationMap, cfg: EvalConfig) -> Result<GroundTerm, EvalError> {
    normalize(t, map, cfg).map(|n| n.term)
}

/// Primitive-or-not and evidence of conservativity for `lang1 ⊆ lang2`.
pub fn classify_expansion(
    lang1: &GroundingLanguage,
    lang2: &GroundingLanguage,
    map2: &DenotationMap,
    bounds: &SearchBounds,
) -> Result<ExpansionReport, ClassifyError> {
    if !lang1.is_expanded_by(lang2) {
        return Err(ClassifyError::NotExpansion(lang2.name.clone(), lang1.name.clone()));
    }
    let primitive = lang1.base.rules_strictly_grow_to(&lang2.base);
    let same_base = *lang1.base == *lang2.base;
    let new: Vec<&String> = lang2
        .symbols
        .iter()
        .filter(|(l, k)| !k.is_primitive() && !lang1.symbols.contains_key(*l))
        .map(|(l, _)| l)
        .collect();
    if same_base {
        let ws: Result<Vec<(String, GroundTerm)>, String> =
            new.iter().map(|l| composition_witness(l, lang1, lang2, map2, bounds).map(|c| ((*l).clone(), c))).collect();
        if let Ok(ws) = ws {
            return Ok(ExpansionReport { primitive, evidence: Evidence::Witnessed(ws) });
        }
    }
    let types = bounds.types.clone().unwrap_or_else(|| search_types(&lang1.base));
    let mut unknown = None;
    for ty in &types {
        let seeds = [ty.clone()];
        let theirs =
            Enumerator::new(lang2, SearchConfig::default(), &seeds).closed(ty, bounds.size_bound, bounds.per_type);
        if theirs.is_empty() {
            continue;
        }
        let mut ours: Option<Vec<GroundTerm>> = None;
        for t in theirs {
            let nt = match normal_form(&t, map2, bounds.eval) {
                Ok(n) => n,
                Err(e) => {
                    unknown = Some(format!("{t}: {e}"));
                    continue;
                }
            };
            // A normal form that is already a smaller-language term is its
            // own counterpart.
            if typecheck(&nt, lang1).is_ok() {
                continue;
            }
            let ours = ours.get_or_insert_with(|| {
                let mut small = Enumerator::new(lang1, SearchConfig::default(), &seeds);
                let mut out = Vec::new();
                for z in small.closed(ty, bounds.size_bound, usize::MAX) {
                    match normal_form(&z, map2, bounds.eval) {
                        Ok(n) => out.push(n),
                        Err(e) => unknown = Some(format!("{z}: {e}")),
                    }
                }
                out
            });
            if !ours.iter().any(|nz| nz.alpha_eq_with(&nt, &|x, y| same_rule(x, map2, y, map2))) {
                return Ok(ExpansionReport {
                    primitive,
                    evidence: Evidence::GapFound { term: t, ty: ty.clone(), bound: bounds.size_bound },
                });
            }
        }
    }
    let evidence = match unknown {
        Some(r) => Evidence::Unknown(r),
        None => Evidence::SearchedNoGap { bound: bounds.size_bound },
    };
    Ok(ExpansionReport { primitive, evidence })
}

/// Sample formulas plus one more connective on the binary ones.
pub(crate) fn search_types(base: &AtomicBase) -> Vec<Formula> {
    let atoms = sample_atoms(base);
    let mut out = sample_formulas(base);
    let binary: Vec<Formula> =
        out.iter().filter(|f| matches!(f, Formula::And(..) | Formula::Or(..) | Formula::Imp(..))).cloned().collect();
    for f in &binary {
        for a in &atoms {
            out.push(Formula::imp(f.clone(), a.clone()));
            out.push(Formula::imp(a.clone(), f.clone()));
        }
    }
    out
}

fn lang(kind: LanguageKind, base: &Arc<AtomicBase>) -> GroundingLanguage {
    GroundingLanguage::make(kind, base.clone()).expect("builtin language")
}

/// The four standard expansions with their expected classification.
pub fn expansion_examples(bounds: &SearchBounds) -> Report {
    let mut report = Report::new("expansion-examples");
    let empty = Arc::new(AtomicBase::builtin("empty").expect("builtin base"));
    let (p, q) = (Formula::prop("p"), Formula::prop("q"));
    let mut run = |id: &str,
                   l1: GroundingLanguage,
                   l2: GroundingLanguage,
                   types: Option<Vec<Formula>>,
                   want: &dyn Fn(&ExpansionReport) -> bool| {
        let b = SearchBounds { types, ..bounds.clone() };
        let item = match DenotationMap::builtin(&l2)
            .map_err(ClassifyError::from)
            .and_then(|m| classify_expansion(&l1, &l2, &m, &b))
        {
            Ok(r) => Item::new(id, r.to_string(), want(&r)),
            Err(e) => Item::new(id, "error", false).detail(e.to_string()),
        };
        report.push(item);
    };
    run(
        "G to Gen",
        lang(LanguageKind::Core, &empty),
        lang(LanguageKind::Gen, &empty),
        Some(vec![Formula::imp(Formula::and(p.clone(), q.clone()), p.clone())]),
        &|r| !r.primitive && matches!(r.evidence, Evidence::GapFound { .. }),
    );
    let ds = lang(LanguageKind::Gen, &empty).with_symbol("DS", FamilyKind::DisjSyll).expect("fresh label");
    run("Gen to Gen+DS", lang(LanguageKind::Gen, &empty), ds, None, &|r| {
        !r.primitive && matches!(r.evidence, Evidence::Witnessed(_))
    });
    let bare = Arc::new(AtomicBase::empty(Signature::arithmetic()));
    let ar = Arc::new(AtomicBase::arithmetic());
    run("empty to Ar", lang(LanguageKind::Gen, &bare), lang(LanguageKind::Gen, &ar), None, &|r| r.primitive);
    let iff = lang(LanguageKind::Gen, &empty)
        .with_symbol("iffI", FamilyKind::IffI)
        .and_then(|l| l.with_symbol("iffE1", FamilyKind::IffE1))
        .and_then(|l| l.with_symbol("iffE2", FamilyKind::IffE2))
        .expect("fresh labels");
    run("Gen to Gen+iff", lang(LanguageKind::Gen, &empty), iff, None, &|r| {
        !r.primitive && matches!(r.evidence, Evidence::Witnessed(_))
    });
    report
}
