use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::logic::{FoTerm, Formula, Signature};

/// Instantiates metavariables inside an atom (or `bot`).
pub fn subst_atom(f: &Formula, inst: &BTreeMap<String, FoTerm>) -> Formula {
    match f {
        Formula::Atom(r, args) => Formula::Atom(r.clone(), args.iter().map(|a| a.subst_map(inst)).collect()),
        other => other.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("rule `{rule}`: premise `{premise}` is not an atom")]
    BadPremise { rule: String, premise: String },
    #[error("rule `{rule}`: conclusion `{conclusion}` is neither an atom nor bot")]
    BadConclusion { rule: String, conclusion: String },
    #[error("duplicate rule name `{0}`")]
    DuplicateRule(String),
    #[error("rule `{rule}` uses a symbol outside the signature")]
    ForeignSymbol { rule: String },
}

/// `α_1, ..., α_n ⇒ β` over schematic metavariables.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicRule {
    pub name: String,
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    pub metavars: BTreeSet<String>,
}

impl AtomicRule {
    pub fn new(name: &str, premises: Vec<Formula>, conclusion: Formula) -> Result<Self, RuleError> {
        for p in &premises {
            if !matches!(p, Formula::Atom(..)) {
                return Err(RuleError::BadPremise { rule: name.to_string(), premise: p.to_string() });
            }
        }
        if !conclusion.is_atomic() {
            return Err(RuleError::BadConclusion { rule: name.to_string(), conclusion: conclusion.to_string() });
        }
        let mut metavars = conclusion.free_vars();
        for p in &premises {
            metavars.extend(p.free_vars());
        }
        Ok(AtomicRule { name: name.to_string(), premises, conclusion, metavars })
    }

    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }

    /// Metavariables renamed by first occurrence, so that rules equal up to
    /// naming share a key.
    pub fn content_key(&self) -> String {
        let mut order: Vec<String> = Vec::new();
        let mut visit = |f: &Formula| {
            if let Formula::Atom(_, args) = f {
                for a in args {
                    collect_in_order(a, &mut order);
                }
            }
        };
        self.premises.iter().for_each(&mut visit);
        visit(&self.conclusion);
        let map: BTreeMap<String, FoTerm> =
            order.iter().enumerate().map(|(i, v)| (v.clone(), FoTerm::Var(format!("?{i}")))).collect();
        let ps: Vec<String> = self.premises.iter().map(|p| subst_atom(p, &map).to_string()).collect();
        format!("{} => {}", ps.join(", "), subst_atom(&self.conclusion, &map))
    }

    /// Instantiation making the conclusion equal to `goal`, if one exists.
    pub fn match_conclusion(&self, goal: &Formula) -> Option<BTreeMap<String, FoTerm>> {
        let mut inst = BTreeMap::new();
        match (&self.conclusion, goal) {
            (Formula::Bot, Formula::Bot) => Some(inst),
            (Formula::Atom(r, xs), Formula::Atom(s, ys)) if r == s && xs.len() == ys.len() => {
                for (x, y) in xs.iter().zip(ys) {
                    if !match_term(x, y, &mut inst) {
                        return None;
                    }
                }
                Some(inst)
            }
            _ => None,
        }
    }
}

fn collect_in_order(t: &FoTerm, out: &mut Vec<String>) {
    match t {
        FoTerm::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        FoTerm::Const(_) => {}
        FoTerm::App(_, args) => args.iter().for_each(|a| collect_in_order(a, out)),
    }
}

fn match_term(pattern: &FoTerm, t: &FoTerm, inst: &mut BTreeMap<String, FoTerm>) -> bool {
    match pattern {
        FoTerm::Var(v) => match inst.get(v) {
            Some(prev) => prev == t,
            None => {
                inst.insert(v.clone(), t.clone());
                true
            }
        },
        FoTerm::Const(c) => matches!(t, FoTerm::Const(d) if c == d),
        FoTerm::App(f, xs) => match t {
            FoTerm::App(g, ys) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys).all(|(x, y)| match_term(x, y, inst))
            }
            _ => false,
        },
    }
}

impl fmt::Display for AtomicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        write!(f, "{}: {} => {}", self.name, ps.join(", "), self.conclusion)
    }
}

/// `⟨L, R⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicSystem {
    pub signature: Signature,
    pub rules: Vec<AtomicRule>,
}

impl AtomicSystem {
    pub fn new(signature: Signature, rules: Vec<AtomicRule>) -> Result<Self, RuleError> {
        let mut seen = BTreeSet::new();
        for r in &rules {
            if !seen.insert(r.name.clone()) {
                return Err(RuleError::DuplicateRule(r.name.clone()));
            }
        }
        Ok(AtomicSystem { signature, rules })
    }

    pub fn rule(&self, name: &str) -> Option<&AtomicRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn content_keys(&self) -> BTreeSet<String> {
        self.rules.iter().map(AtomicRule::content_key).collect()
    }

    /// Whether some rule could conclude `goal`; false means `goal` is underivable.
    pub fn may_conclude(&self, goal: &Formula) -> bool {
        self.rules.iter().any(|r| r.match_conclusion(goal).is_some())
    }
}

/// Canonical names of individuals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndividualDomain {
    Numerals,
    Constants(Vec<String>),
}

impl IndividualDomain {
    pub fn contains(&self, t: &FoTerm) -> bool {
        match self {
            IndividualDomain::Numerals => t.as_numeral().is_some(),
            IndividualDomain::Constants(cs) => matches!(t, FoTerm::Const(c) if cs.contains(c)),
        }
    }

    /// The first `bound` individuals in canonical order.
    pub fn first(&self, bound: usize) -> Vec<FoTerm> {
        match self {
            IndividualDomain::Numerals => (0..bound as u64).map(FoTerm::numeral).collect(),
            IndividualDomain::Constants(cs) => cs.iter().take(bound).map(|c| FoTerm::Const(c.clone())).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, IndividualDomain::Constants(cs) if cs.is_empty())
    }
}

/// `⟨C, R, S⟩` together with its individual domain.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicBase {
    pub name: String,
    pub signature: Signature,
    pub system: AtomicSystem,
    pub domain: IndividualDomain,
}

impl AtomicBase {
    /// No rules over `sig`; the domain is the declared constants.
    pub fn empty(sig: Signature) -> Self {
        let domain = IndividualDomain::Constants(sig.constants.iter().cloned().collect());
        AtomicBase {
            name: "empty".into(),
            system: AtomicSystem { signature: sig.clone(), rules: Vec::new() },
            signature: sig,
            domain,
        }
    }

    /// Equality rules plus successor, addition and multiplication axioms.
    pub fn arithmetic() -> Self {
        let sig = Signature::arithmetic();
        let v = |n: &str| FoTerm::var(n);
        let (t, u, z) = (v("t"), v("u"), v("z"));
        let eq = Formula::eq;
        let rule = |n: &str, ps: Vec<Formula>, c: Formula| AtomicRule::new(n, ps, c).expect("builtin rule");
        let rules = vec![
            rule("eqR", vec![], eq(t.clone(), t.clone())),
            rule("eqS", vec![eq(t.clone(), u.clone())], eq(u.clone(), t.clone())),
            rule("eqT", vec![eq(t.clone(), u.clone()), eq(u.clone(), z.clone())], eq(t.clone(), z.clone())),
            rule("s1", vec![eq(FoTerm::zero(), FoTerm::succ(t.clone()))], Formula::Bot),
            rule("s2", vec![eq(FoTerm::succ(t.clone()), FoTerm::succ(u.clone()))], eq(t.clone(), u.clone())),
            rule("plus1", vec![], eq(FoTerm::plus(t.clone(), FoTerm::zero()), t.clone())),
            rule(
                "plus2",
                vec![],
                eq(FoTerm::plus(t.clone(), FoTerm::succ(u.clone())), FoTerm::succ(FoTerm::plus(t.clone(), u.clone()))),
            ),
            rule("times1", vec![], eq(FoTerm::times(t.clone(), FoTerm::zero()), FoTerm::zero())),
            rule(
                "times2",
                vec![],
                eq(
                    FoTerm::times(t.clone(), FoTerm::succ(u.clone())),
                    FoTerm::plus(FoTerm::times(t.clone(), u.clone()), t.clone()),
                ),
            ),
        ];
        AtomicBase {
            name: "ar".into(),
            system: AtomicSystem::new(sig.clone(), rules).expect("distinct names"),
            signature: sig,
            domain: IndividualDomain::Numerals,
        }
    }

    /// `"empty"` over the default propositional signature, or `"ar"`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "empty" => Some(AtomicBase::empty(Signature::propositional())),
            "ar" => Some(AtomicBase::arithmetic()),
            _ => None,
        }
    }

    /// Same language with `R1 ⊆ R2`, or a proper language
    /// expansion with `R1 ⊂ R2`.
    pub fn is_expanded_by(&self, other: &AtomicBase) -> bool {
        if !self.signature.is_subset_of(&other.signature) {
            return false;
        }
        let r1 = self.system.content_keys();
        let r2 = other.system.content_keys();
        if !r1.is_subset(&r2) {
            return false;
        }
        self.signature == other.signature || r1.len() < r2.len()
    }

    /// Strict growth of the rule set.
    pub fn rules_strictly_grow_to(&self, other: &AtomicBase) -> bool {
        let r1 = self.system.content_keys();
        let r2 = other.system.content_keys();
        r1.is_subset(&r2) && r1.len() < r2.len()
    }
}

/// The expansion relation between bases.
pub fn base_expansion(b1: &AtomicBase, b2: &AtomicBase) -> bool {
    b1.is_expanded_by(b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    #[test]
    fn ar_contains_successor_and_times_rules() {
        let ar = AtomicBase::arithmetic();
        let sig = &ar.signature;
        let s1 = ar.system.rule("s1").unwrap();
        assert_eq!(s1.premises, vec![parse_formula("0 = s(t)", sig).unwrap()]);
        assert_eq!(s1.conclusion, Formula::Bot);
        let t2 = ar.system.rule("times2").unwrap();
        assert!(t2.premises.is_empty());
        assert!(t2.conclusion.same_syntax(&parse_formula("t * s(u) = (t * u) + t", sig).unwrap()));
        assert_eq!(ar.system.rules.len(), 9);
    }

    #[test]
    fn empty_base_has_no_rules() {
        assert!(AtomicBase::builtin("empty").unwrap().system.rules.is_empty());
    }

    #[test]
    fn expansion_examples() {
        let ar = AtomicBase::arithmetic();
        let empty = AtomicBase::empty(crate::logic::Signature::new());
        assert!(base_expansion(&empty, &ar));
        assert!(base_expansion(&ar, &ar));
        assert!(!base_expansion(&ar, &empty));
        let empty_ar = AtomicBase::empty(crate::logic::Signature::arithmetic());
        assert!(base_expansion(&empty_ar, &ar));
        assert!(empty_ar.rules_strictly_grow_to(&ar));
    }

    #[test]
    fn content_keys_ignore_metavariable_names() {
        let a = AtomicRule::new("a", vec![], parse_formula("t = t", &Signature::arithmetic()).unwrap()).unwrap();
        let b = AtomicRule::new("b", vec![], parse_formula("w = w", &Signature::arithmetic()).unwrap()).unwrap();
        assert_eq!(a.content_key(), b.content_key());
    }

    #[test]
    fn underivable_atoms() {
        let ar = AtomicBase::arithmetic();
        let sig = &ar.signature;
        assert!(ar.system.may_conclude(&parse_formula("0 + 0 = 0", sig).unwrap()));
        let empty = AtomicBase::builtin("empty").unwrap();
        assert!(!empty.system.may_conclude(&Formula::prop("p")));
    }

    #[test]
    fn premises_must_be_atoms() {
        assert!(AtomicRule::new("bad", vec![Formula::Bot], Formula::Bot).is_err());
        assert!(AtomicRule::new("bad", vec![], Formula::and(Formula::Bot, Formula::Bot)).is_err());
    }
}
