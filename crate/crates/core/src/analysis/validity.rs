use std::collections::BTreeSet;
use std::fmt;

use crate::base::AtomicBase;
use crate::eval::DenotationMap;
use crate::ground::{
    check_application, Binding, FamilyKind, GroundingLanguage, Judgment, LanguageKind, OpSymbol, TypedVar,
};
use crate::logic::{FoTerm, Formula, OpType, PreType};
use crate::report::{Item, Report};

use super::{sample_atoms, sample_open_atom};

/// One premise: its formula, the assumptions it discharges and the
/// individual variables it binds.
#[derive(Clone, Debug, PartialEq)]
pub struct Premise {
    pub discharged: Vec<Formula>,
    pub bound_inds: Vec<String>,
    pub formula: Formula,
}

impl Premise {
    pub fn plain(f: Formula) -> Self {
        Premise { discharged: Vec::new(), bound_inds: Vec::new(), formula: f }
    }

    pub fn discharging(d: Formula, f: Formula) -> Self {
        Premise { discharged: vec![d], bound_inds: Vec::new(), formula: f }
    }

    pub fn binding(x: &str, discharged: Vec<Formula>, f: Formula) -> Self {
        Premise { discharged, bound_inds: vec![x.to_string()], formula: f }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InferenceRule {
    pub name: String,
    pub premises: Vec<Premise>,
    pub conclusion: Formula,
}

impl fmt::Display for InferenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self
            .premises
            .iter()
            .map(|p| {
                let mut s = String::new();
                if !p.bound_inds.is_empty() {
                    s.push_str(&format!("{}. ", p.bound_inds.join(",")));
                }
                if !p.discharged.is_empty() {
                    let ds: Vec<String> = p.discharged.iter().map(Formula::to_string).collect();
                    s.push_str(&format!("[{}] ", ds.join(", ")));
                }
                s.push_str(&p.formula.to_string());
                s
            })
            .collect();
        write!(f, "{}: {} ▷ {}", self.name, ps.join(", "), self.conclusion)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    LogicallyValid,
    Invalid(String),
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Validity::Valid => write!(f, "Valid"),
            Validity::LogicallyValid => write!(f, "LogicallyValid"),
            Validity::Invalid(r) => write!(f, "Invalid({r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidityError {
    #[error("unknown witness symbol `{0}`")]
    UnknownWitness(String),
}

/// Whether `witness` is an operation of the rule's type: the symbol at the
/// rule's entries and bindings must be a legal instance, and its generic
/// application to hypothetical premises must typecheck.
pub fn check_inference_validity(
    r: &InferenceRule,
    lang: &GroundingLanguage,
    map: &DenotationMap,
    witness: &str,
) -> Result<Validity, ValidityError> {
    let kind = lang.family(witness).ok_or_else(|| ValidityError::UnknownWitness(witness.to_string()))?;
    let entries = r.premises.iter().map(|p| PreType::new(p.discharged.clone(), p.formula.clone())).collect();
    let sym = OpSymbol::new(witness, kind, OpType::new(entries, PreType::bare(r.conclusion.clone())));
    let mut binds = Vec::new();
    let mut args = Vec::new();
    for p in &r.premises {
        let typed: Vec<TypedVar> =
            p.discharged.iter().enumerate().map(|(i, d)| TypedVar::new(d.clone(), i as u32 + 1)).collect();
        let mut free_inds: BTreeSet<String> = p.formula.free_vars();
        free_inds.extend(p.bound_inds.iter().cloned());
        binds.push(Binding { inds: p.bound_inds.clone(), typed: typed.clone() });
        args.push(Judgment { free_typed: typed.into_iter().collect(), free_inds, codomain: p.formula.clone() });
    }
    if let Err(e) = check_application(&sym, &binds, &args, lang) {
        return Ok(Validity::Invalid(e.to_string()));
    }
    Ok(if kind.is_primitive() || map.is_universal(witness) { Validity::LogicallyValid } else { Validity::Valid })
}

/// The rules of intuitionistic logic at small instances over `base`, each
/// with the family whose symbol should witness it.
pub fn il_rules(base: &AtomicBase) -> Vec<(InferenceRule, FamilyKind)> {
    let mut atoms = sample_atoms(base);
    while atoms.len() < 3 {
        atoms.push(Formula::prop(["p", "q", "r"][atoms.len()]));
    }
    let (p, q, r) = (atoms[0].clone(), atoms[1].clone(), atoms[2].clone());
    let px = sample_open_atom(base, "x").unwrap_or_else(|| Formula::atom("P", vec![FoTerm::var("x")]));
    let k = base.domain.first(1).pop().unwrap_or_else(|| FoTerm::constant("c"));
    let all = Formula::forall("x", px.clone());
    let ex = Formula::exists("x", px.clone());
    let rule = |name: &str, premises: Vec<Premise>, conclusion: Formula| InferenceRule {
        name: name.to_string(),
        premises,
        conclusion,
    };
    use FamilyKind as K;
    use Premise as P;
    vec![
        (rule("∧I", vec![P::plain(p.clone()), P::plain(q.clone())], Formula::and(p.clone(), q.clone())), K::AndI),
        (rule("∧E1", vec![P::plain(Formula::and(p.clone(), q.clone()))], p.clone()), K::AndE1),
        (rule("∧E2", vec![P::plain(Formula::and(p.clone(), q.clone()))], q.clone()), K::AndE2),
        (rule("∨I1", vec![P::plain(p.clone())], Formula::or(p.clone(), q.clone())), K::OrI1),
        (rule("∨I2", vec![P::plain(q.clone())], Formula::or(p.clone(), q.clone())), K::OrI2),
        (
            rule(
                "∨E",
                vec![
                    P::plain(Formula::or(p.clone(), q.clone())),
                    P::discharging(p.clone(), r.clone()),
                    P::discharging(q.clone(), r.clone()),
                ],
                r.clone(),
            ),
            K::OrE,
        ),
        (rule("→I", vec![P::discharging(p.clone(), q.clone())], Formula::imp(p.clone(), q.clone())), K::ImpI),
        (rule("→E", vec![P::plain(Formula::imp(p.clone(), q.clone())), P::plain(p.clone())], q.clone()), K::ImpE),
        (rule("∀I", vec![P::binding("x", Vec::new(), px.clone())], all.clone()), K::AllI),
        (rule("∀E", vec![P::plain(all)], px.subst("x", &k)), K::AllE),
        (rule("∃I", vec![P::plain(px.subst("x", &k))], ex.clone()), K::ExI),
        (rule("∃E", vec![P::plain(ex), P::binding("x", vec![px.clone()], r.clone())], r.clone()), K::ExE),
        (rule("⊥E", vec![P::plain(Formula::Bot)], p.clone()), K::BotE),
    ]
}

/// Every IL rule must be logically valid through its own family's symbol
/// in the general language over `base`.
pub fn il_correctness_suite(base: &AtomicBase) -> Report {
    let mut report = Report::new(format!("il-correctness over {}", base.name));
    let lang = match GroundingLanguage::make(LanguageKind::Gen, base.clone().into()) {
        Ok(l) => l,
        Err(e) => {
            report.push(Item::new("language", "error", false).detail(e.to_string()));
            return report;
        }
    };
    let map = match DenotationMap::builtin(&lang) {
        Ok(m) => m,
        Err(e) => {
            report.push(Item::new("map", "error", false).detail(e.to_string()));
            return report;
        }
    };
    for (rule, kind) in il_rules(base) {
        let label = lang.label_of(kind).unwrap_or(kind.default_label());
        let item = match check_inference_validity(&rule, &lang, &map, label) {
            Ok(v) => {
                let pass = v == Validity::LogicallyValid;
                Item::new(rule.name.clone(), v.to_string(), pass).detail(format!("{rule} via {label}"))
            }
            Err(e) => Item::new(rule.name.clone(), "error", false).detail(e.to_string()),
        };
        report.push(item);
    }
    report
}
