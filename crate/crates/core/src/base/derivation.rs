use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::logic::{FoTerm, Formula, ParseError, Parser, Signature};

use super::rule::{subst_atom, AtomicSystem};

/// An atomic derivation tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Derivation {
    Assume(Formula),
    Step { rule: String, inst: BTreeMap<String, FoTerm>, premises: Vec<Derivation> },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DerivationError {
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("instantiation mismatch in `{rule}`: {detail}")]
    InstantiationMismatch { rule: String, detail: String },
    #[error("rule `{rule}` takes {expected} premises, got {found}")]
    PremiseCount { rule: String, expected: usize, found: usize },
    #[error("assumption `{0}` is not atomic")]
    NonAtomicAssumption(String),
}

impl Derivation {
    pub fn axiom(rule: &str, inst: &[(&str, FoTerm)]) -> Self {
        Derivation::Step {
            rule: rule.to_string(),
            inst: inst.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            premises: Vec::new(),
        }
    }

    pub fn step(rule: &str, inst: &[(&str, FoTerm)], premises: Vec<Derivation>) -> Self {
        Derivation::Step {
            rule: rule.to_string(),
            inst: inst.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            premises,
        }
    }

    /// Checks every step against `sys` and returns the conclusion.
    pub fn check(&self, sys: &AtomicSystem) -> Result<Formula, DerivationError> {
        match self {
            Derivation::Assume(f) => {
                if f.is_atomic() {
                    Ok(f.clone())
                } else {
                    Err(DerivationError::NonAtomicAssumption(f.to_string()))
                }
            }
            Derivation::Step { rule, inst, premises } => {
                let r = sys.rule(rule).ok_or_else(|| DerivationError::UnknownRule(rule.clone()))?;
                let keys: BTreeSet<&String> = inst.keys().collect();
                let wanted: BTreeSet<&String> = r.metavars.iter().collect();
                if keys != wanted {
                    let missing: Vec<_> = wanted.difference(&keys).map(|s| s.as_str()).collect();
                    let extra: Vec<_> = keys.difference(&wanted).map(|s| s.as_str()).collect();
                    return Err(DerivationError::InstantiationMismatch {
                        rule: rule.clone(),
                        detail: format!("missing {{{}}}, unexpected {{{}}}", missing.join(" "), extra.join(" ")),
                    });
                }
                if premises.len() != r.premises.len() {
                    return Err(DerivationError::PremiseCount {
                        rule: rule.clone(),
                        expected: r.premises.len(),
                        found: premises.len(),
                    });
                }
                for (i, (d, p)) in premises.iter().zip(&r.premises).enumerate() {
                    let got = d.check(sys)?;
                    let want = subst_atom(p, inst);
                    if got != want {
                        return Err(DerivationError::InstantiationMismatch {
                            rule: rule.clone(),
                            detail: format!("premise {} concludes `{got}`, rule needs `{want}`", i + 1),
                        });
                    }
                }
                Ok(subst_atom(&r.conclusion, inst))
            }
        }
    }

    pub fn has_assumptions(&self) -> bool {
        match self {
            Derivation::Assume(_) => true,
            Derivation::Step { premises, .. } => premises.iter().any(Derivation::has_assumptions),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out);
        out
    }

    fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Derivation::Assume(f) => out.extend(f.free_vars()),
            Derivation::Step { inst, premises, .. } => {
                inst.values().for_each(|t| t.vars_into(out));
                premises.iter().for_each(|d| d.free_vars_into(out));
            }
        }
    }

    /// No assumption leaves and no free individual variables.
    pub fn is_closed(&self) -> bool {
        !self.has_assumptions() && self.free_vars().is_empty()
    }

    pub fn subst_individual(&self, x: &str, k: &FoTerm) -> Derivation {
        match self {
            Derivation::Assume(f) => Derivation::Assume(f.subst(x, k)),
            Derivation::Step { rule, inst, premises } => Derivation::Step {
                rule: rule.clone(),
                inst: inst.iter().map(|(m, t)| (m.clone(), t.subst(x, k))).collect(),
                premises: premises.iter().map(|d| d.subst_individual(x, k)).collect(),
            },
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Derivation::Assume(_) => 1,
            Derivation::Step { premises, .. } => 1 + premises.iter().map(Derivation::size).sum::<usize>(),
        }
    }

    /// `(rule {mv=term ...} premise...)` or `(assume formula)`.
    pub fn parse(p: &mut Parser<'_>) -> Result<Derivation, ParseError> {
        p.expect_punct("(")?;
        let head = p.expect_ident()?;
        if head == "assume" {
            let f = p.formula()?;
            p.expect_punct(")")?;
            return Ok(Derivation::Assume(f));
        }
        let mut inst = BTreeMap::new();
        if p.eat_punct("{") {
            while !p.eat_punct("}") {
                let mv = p.expect_ident()?;
                p.expect_punct("=")?;
                let t = p.term()?;
                p.eat_punct(",");
                inst.insert(mv, t);
            }
        }
        let mut premises = Vec::new();
        while !p.eat_punct(")") {
            premises.push(Derivation::parse(p)?);
        }
        Ok(Derivation::Step { rule: head, inst, premises })
    }

    pub fn parse_str(text: &str, sig: &Signature) -> Result<Derivation, ParseError> {
        let mut p = Parser::new(text, sig)?;
        let d = Derivation::parse(&mut p)?;
        p.expect_eof()?;
        Ok(d)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Assume(a) => write!(f, "(assume {a})"),
            Derivation::Step { rule, inst, premises } => {
                write!(f, "({rule}")?;
                if !inst.is_empty() {
                    let parts: Vec<String> = inst.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    write!(f, " {{{}}}", parts.join(" "))?;
                }
                for d in premises {
                    write!(f, " {d}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::AtomicBase;
    use crate::logic::parse_formula;

    fn ar() -> AtomicBase {
        AtomicBase::arithmetic()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s, &Signature::arithmetic()).unwrap()
    }

    #[test]
    fn plus1_instance() {
        let d = Derivation::axiom("plus1", &[("t", FoTerm::zero())]);
        let c = d.check(&ar().system).unwrap();
        assert!(c.same_syntax(&Formula::eq(FoTerm::plus(FoTerm::zero(), FoTerm::zero()), FoTerm::zero())));
        assert!(d.is_closed());
    }

    #[test]
    fn transitivity_with_assumptions() {
        let d = Derivation::step(
            "eqT",
            &[
                ("t", FoTerm::plus(FoTerm::numeral(2), FoTerm::numeral(2))),
                ("u", FoTerm::numeral(4)),
                ("z", FoTerm::var("x")),
            ],
            vec![Derivation::Assume(f("2+2=4")), Derivation::Assume(f("4=x"))],
        );
        assert_eq!(d.check(&ar().system).unwrap(), f("2+2=x"));
        assert!(!d.is_closed());
    }

    #[test]
    fn axiom_with_premise_is_rejected() {
        let d = Derivation::step("plus1", &[("t", FoTerm::zero())], vec![Derivation::Assume(f("0=0"))]);
        assert!(matches!(d.check(&ar().system), Err(DerivationError::PremiseCount { .. })));
    }

    #[test]
    fn open_reflexivity_is_not_closed() {
        let d = Derivation::axiom("eqR", &[("t", FoTerm::var("x"))]);
        assert!(d.check(&ar().system).is_ok());
        assert!(!d.is_closed());
    }

    #[test]
    fn unknown_rule_and_bad_instantiation() {
        let d = Derivation::axiom("nope", &[]);
        assert!(matches!(d.check(&ar().system), Err(DerivationError::UnknownRule(_))));
        let d = Derivation::axiom("plus1", &[]);
        assert!(matches!(d.check(&ar().system), Err(DerivationError::InstantiationMismatch { .. })));
        let d = Derivation::step(
            "s2",
            &[("t", FoTerm::zero()), ("u", FoTerm::zero())],
            vec![Derivation::axiom("eqR", &[("t", FoTerm::zero())])],
        );
        assert!(matches!(d.check(&ar().system), Err(DerivationError::InstantiationMismatch { .. })));
    }

    #[test]
    fn sexpr_round_trip() {
        let sig = Signature::arithmetic();
        let text = "(eqT {t=2+2 u=4 z=x} (assume 2+2=4) (assume 4=x))";
        let d = Derivation::parse_str(text, &sig).unwrap();
        let again = Derivation::parse_str(&d.to_string(), &sig).unwrap();
        assert_eq!(d, again);
        assert_eq!(d.check(&ar().system).unwrap(), f("2+2=x"));
    }
}
