use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::term::{fresh_name, FoTerm};

pub const EQ: &str = "=";

/// First-order formulas. Negation is `A -> bot`.
///
/// `PartialEq` and `Hash` are alpha-invariant; use [`Formula::same_syntax`]
/// for exact comparison.
#[derive(Clone, Debug)]
pub enum Formula {
    Bot,
    Atom(String, Vec<FoTerm>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{term} is not free for {var} in {formula}")]
pub struct CaptureError {
    pub term: String,
    pub var: String,
    pub formula: String,
}

/// Outcome of matching `pattern` against an instance `pattern[t/x]`.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceMatch {
    NoMatch,
    /// `x` is not free in the pattern and the two formulas agree.
    Vacuous,
    Term(FoTerm),
    /// The instance exists only with `t` captured by a binder of the pattern.
    Captured(FoTerm),
}

impl Formula {
    pub fn atom(rel: &str, args: Vec<FoTerm>) -> Self {
        Formula::Atom(rel.to_string(), args)
    }

    pub fn prop(name: &str) -> Self {
        Formula::Atom(name.to_string(), vec![])
    }

    pub fn eq(a: FoTerm, b: FoTerm) -> Self {
        Formula::Atom(EQ.to_string(), vec![a, b])
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Self {
        Formula::imp(a, Formula::Bot)
    }

    pub fn forall(x: &str, body: Formula) -> Self {
        Formula::Forall(x.to_string(), Box::new(body))
    }

    pub fn exists(x: &str, body: Formula) -> Self {
        Formula::Exists(x.to_string(), Box::new(body))
    }

    /// Atoms and `bot`.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Bot | Formula::Atom(..))
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Bot | Formula::Atom(..) => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
        }
    }

    /// Exact syntactic equality, bound names included.
    pub fn same_syntax(&self, other: &Formula) -> bool {
        use Formula::*;
        match (self, other) {
            (Bot, Bot) => true,
            (Atom(r, a), Atom(s, b)) => r == s && a == b,
            (And(a1, b1), And(a2, b2)) | (Or(a1, b1), Or(a2, b2)) | (Imp(a1, b1), Imp(a2, b2)) => {
                a1.same_syntax(a2) && b1.same_syntax(b2)
            }
            (Forall(x, a), Forall(y, b)) | (Exists(x, a), Exists(y, b)) => x == y && a.same_syntax(b),
            _ => false,
        }
    }

    /// Alpha-equivalence under an initial stack of bound-variable pairs.
    pub fn alpha_eq_in(&self, other: &Formula, env: &mut Vec<(String, String)>) -> bool {
        use Formula::*;
        match (self, other) {
            (Bot, Bot) => true,
            (Atom(r, a), Atom(s, b)) => {
                r == s && a.len() == b.len() && a.iter().zip(b).all(|(x, y)| term_alpha(x, y, env))
            }
            (And(a1, b1), And(a2, b2)) | (Or(a1, b1), Or(a2, b2)) | (Imp(a1, b1), Imp(a2, b2)) => {
                a1.alpha_eq_in(a2, env) && b1.alpha_eq_in(b2, env)
            }
            (Forall(x, a), Forall(y, b)) | (Exists(x, a), Exists(y, b)) => {
                env.push((x.clone(), y.clone()));
                let r = a.alpha_eq_in(b, env);
                env.pop();
                r
            }
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Bot => {}
            Formula::Atom(_, args) => {
                for a in args {
                    for v in a.vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                bound.push(x.clone());
                a.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Formula::Bot => false,
            Formula::Atom(_, args) => args.iter().any(|a| a.has_var(x)),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => a.has_free(x) || b.has_free(x),
            Formula::Forall(y, a) | Formula::Exists(y, a) => y != x && a.has_free(x),
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.all_vars_into(&mut out);
        out
    }

    fn all_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Bot => {}
            Formula::Atom(_, args) => args.iter().for_each(|a| a.vars_into(out)),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.all_vars_into(out);
                b.all_vars_into(out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                out.insert(x.clone());
                a.all_vars_into(out);
            }
        }
    }

    /// True iff no free occurrence of `x` lies under a binder of a variable of `t`.
    pub fn free_for(&self, t: &FoTerm, x: &str) -> bool {
        let tv = t.vars();
        self.free_for_in(&tv, x, &mut Vec::new())
    }

    fn free_for_in(&self, tv: &BTreeSet<String>, x: &str, bound: &mut Vec<String>) -> bool {
        match self {
            Formula::Bot => true,
            Formula::Atom(_, args) => !args.iter().any(|a| a.has_var(x)) || !bound.iter().any(|b| tv.contains(b)),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.free_for_in(tv, x, bound) && b.free_for_in(tv, x, bound)
            }
            Formula::Forall(y, a) | Formula::Exists(y, a) => {
                if y == x {
                    return true;
                }
                bound.push(y.clone());
                let r = a.free_for_in(tv, x, bound);
                bound.pop();
                r
            }
        }
    }

    /// Strict substitution: fails when `t` is not free for `x`.
    pub fn substitute(&self, x: &str, t: &FoTerm) -> Result<Formula, CaptureError> {
        if !self.free_for(t, x) {
            return Err(CaptureError { term: t.to_string(), var: x.to_string(), formula: self.to_string() });
        }
        Ok(self.replace_free(x, t))
    }

    fn replace_free(&self, x: &str, t: &FoTerm) -> Formula {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Atom(r, args) => Formula::Atom(r.clone(), args.iter().map(|a| a.subst(x, t)).collect()),
            Formula::And(a, b) => Formula::and(a.replace_free(x, t), b.replace_free(x, t)),
            Formula::Or(a, b) => Formula::or(a.replace_free(x, t), b.replace_free(x, t)),
            Formula::Imp(a, b) => Formula::imp(a.replace_free(x, t), b.replace_free(x, t)),
            Formula::Forall(y, _) | Formula::Exists(y, _) if y == x => self.clone(),
            Formula::Forall(y, a) => Formula::Forall(y.clone(), Box::new(a.replace_free(x, t))),
            Formula::Exists(y, a) => Formula::Exists(y.clone(), Box::new(a.replace_free(x, t))),
        }
    }

    /// Capture-avoiding substitution, renaming bound variables on demand.
    pub fn subst(&self, x: &str, t: &FoTerm) -> Formula {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Atom(r, args) => Formula::Atom(r.clone(), args.iter().map(|a| a.subst(x, t)).collect()),
            Formula::And(a, b) => Formula::and(a.subst(x, t), b.subst(x, t)),
            Formula::Or(a, b) => Formula::or(a.subst(x, t), b.subst(x, t)),
            Formula::Imp(a, b) => Formula::imp(a.subst(x, t), b.subst(x, t)),
            Formula::Forall(y, a) | Formula::Exists(y, a) => {
                let rebuild = |v: String, body: Formula| match self {
                    Formula::Forall(..) => Formula::Forall(v, Box::new(body)),
                    _ => Formula::Exists(v, Box::new(body)),
                };
                if y == x || !a.has_free(x) {
                    return self.clone();
                }
                if t.has_var(y) {
                    let mut avoid = t.vars();
                    avoid.extend(a.all_vars());
                    avoid.insert(x.to_string());
                    let z = fresh_name(y, &avoid);
                    let renamed = a.subst(y, &FoTerm::Var(z.clone()));
                    rebuild(z, renamed.subst(x, t))
                } else {
                    rebuild(y.clone(), a.subst(x, t))
                }
            }
        }
    }

    /// Simultaneous substitution, done sequentially through fresh intermediates.
    pub fn subst_simultaneous(&self, pairs: &[(String, FoTerm)]) -> Formula {
        let mut avoid = self.all_vars();
        for (x, t) in pairs {
            avoid.insert(x.clone());
            avoid.extend(t.vars());
        }
        let mut staged = Vec::new();
        let mut f = self.clone();
        for (x, t) in pairs {
            let z = fresh_name(&format!("{x}_"), &avoid);
            avoid.insert(z.clone());
            f = f.subst(x, &FoTerm::Var(z.clone()));
            staged.push((z, t));
        }
        for (z, t) in staged {
            f = f.subst(&z, t);
        }
        f
    }

    /// Finds `t` with `self[t/x]` alpha-equal to `target`.
    pub fn match_instance(&self, x: &str, target: &Formula) -> InstanceMatch {
        let mut st = MatchState { x, found: None, captured: false };
        if !st.formula(self, target, &mut Vec::new()) {
            return InstanceMatch::NoMatch;
        }
        match st.found {
            None => InstanceMatch::Vacuous,
            Some(t) if st.captured => InstanceMatch::Captured(t),
            Some(t) => InstanceMatch::Term(t),
        }
    }

    /// A string equal for two formulas iff they are alpha-equivalent.
    pub fn alpha_key(&self) -> String {
        self.canonical_bound(&mut Vec::new()).to_string()
    }

    fn canonical_bound(&self, env: &mut Vec<(String, String)>) -> Formula {
        let rn = |t: &FoTerm, env: &Vec<(String, String)>| {
            let mut out = t.clone();
            for v in t.vars() {
                if let Some((_, to)) = env.iter().rev().find(|(from, _)| *from == v) {
                    out = out.rename(&v, to);
                }
            }
            out
        };
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Atom(r, args) => Formula::Atom(r.clone(), args.iter().map(|a| rn(a, env)).collect()),
            Formula::And(a, b) => Formula::and(a.canonical_bound(env), b.canonical_bound(env)),
            Formula::Or(a, b) => Formula::or(a.canonical_bound(env), b.canonical_bound(env)),
            Formula::Imp(a, b) => Formula::imp(a.canonical_bound(env), b.canonical_bound(env)),
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                let name = format!("#{}", env.len());
                env.push((x.clone(), name.clone()));
                let body = a.canonical_bound(env);
                env.pop();
                if matches!(self, Formula::Forall(..)) {
                    Formula::Forall(name, Box::new(body))
                } else {
                    Formula::Exists(name, Box::new(body))
                }
            }
        }
    }

    /// Immediate and transitive subformulas, including `self`.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.subformulas_into(&mut out);
        out
    }

    fn subformulas_into(&self, out: &mut Vec<Formula>) {
        if !out.contains(self) {
            out.push(self.clone());
        }
        match self {
            Formula::Bot | Formula::Atom(..) => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.subformulas_into(out);
                b.subformulas_into(out);
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.subformulas_into(out),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Bot | Formula::Atom(..) => 4,
        }
    }

    /// `followed`: more operator text comes after this subformula at the same level,
    /// so a trailing quantifier must be parenthesized.
    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8, followed: bool) -> fmt::Result {
        let p = self.prec();
        let quant = p == 0;
        if (quant && followed) || (!quant && p < min) {
            write!(f, "(")?;
            self.fmt_at(f, 0, false)?;
            return write!(f, ")");
        }
        match self {
            Formula::Bot => write!(f, "bot"),
            Formula::Atom(r, args) if r == EQ && args.len() == 2 => write!(f, "{} = {}", args[0], args[1]),
            Formula::Atom(r, args) if args.is_empty() => write!(f, "{r}"),
            Formula::Atom(r, args) => {
                write!(f, "{r}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Formula::Imp(a, b) => {
                a.fmt_at(f, 2, true)?;
                write!(f, " -> ")?;
                b.fmt_at(f, 1, followed)
            }
            Formula::Or(a, b) => {
                a.fmt_at(f, 2, true)?;
                write!(f, " | ")?;
                b.fmt_at(f, 3, followed)
            }
            Formula::And(a, b) => {
                a.fmt_at(f, 3, true)?;
                write!(f, " & ")?;
                b.fmt_at(f, 4, followed)
            }
            Formula::Forall(x, a) => {
                write!(f, "forall {x}. ")?;
                a.fmt_at(f, 0, false)
            }
            Formula::Exists(x, a) => {
                write!(f, "exists {x}. ")?;
                a.fmt_at(f, 0, false)
            }
        }
    }
}

impl FoTerm {
    /// Alpha-equality of terms under a stack of bound-variable pairs.
    pub fn alpha_eq_in(&self, other: &FoTerm, env: &[(String, String)]) -> bool {
        term_alpha(self, other, env)
    }
}

fn lookup(env: &[(String, String)], name: &str, left: bool) -> Option<usize> {
    env.iter().rposition(|(l, r)| if left { l == name } else { r == name })
}

fn term_alpha(a: &FoTerm, b: &FoTerm, env: &[(String, String)]) -> bool {
    match (a, b) {
        (FoTerm::Var(x), FoTerm::Var(y)) => match (lookup(env, x, true), lookup(env, y, false)) {
            (None, None) => x == y,
            (Some(i), Some(j)) => i == j,
            _ => false,
        },
        (FoTerm::Const(c), FoTerm::Const(d)) => c == d,
        (FoTerm::App(f, xs), FoTerm::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_alpha(x, y, env))
        }
        _ => false,
    }
}

struct MatchState<'a> {
    x: &'a str,
    found: Option<FoTerm>,
    captured: bool,
}

impl MatchState<'_> {
    fn formula(&mut self, p: &Formula, t: &Formula, env: &mut Vec<(String, String)>) -> bool {
        use Formula::*;
        match (p, t) {
            (Bot, Bot) => true,
            (Atom(r, a), Atom(s, b)) => {
                r == s && a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.term(x, y, env))
            }
            (And(a1, b1), And(a2, b2)) | (Or(a1, b1), Or(a2, b2)) | (Imp(a1, b1), Imp(a2, b2)) => {
                self.formula(a1, a2, env) && self.formula(b1, b2, env)
            }
            (Forall(x, a), Forall(y, b)) | (Exists(x, a), Exists(y, b)) => {
                env.push((x.clone(), y.clone()));
                let r = self.formula(a, b, env);
                env.pop();
                r
            }
            _ => false,
        }
    }

    fn term(&mut self, p: &FoTerm, t: &FoTerm, env: &[(String, String)]) -> bool {
        match p {
            FoTerm::Var(v) if v == self.x && lookup(env, v, true).is_none() => {
                if t.vars().iter().any(|w| lookup(env, w, false).is_some()) {
                    self.captured = true;
                }
                match &self.found {
                    Some(prev) => prev == t,
                    None => {
                        self.found = Some(t.clone());
                        true
                    }
                }
            }
            FoTerm::Var(_) => term_alpha(p, t, env),
            FoTerm::Const(c) => matches!(t, FoTerm::Const(d) if c == d),
            FoTerm::App(f, xs) => match t {
                FoTerm::App(g, ys) if f == g && xs.len() == ys.len() => {
                    xs.iter().zip(ys).all(|(x, y)| self.term(x, y, env))
                }
                _ => false,
            },
        }
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_eq_in(other, &mut Vec::new())
    }
}

impl Eq for Formula {}

fn hash_term<H: Hasher>(t: &FoTerm, bound: &[String], h: &mut H) {
    match t {
        FoTerm::Var(x) => match bound.iter().rposition(|b| b == x) {
            Some(i) => {
                0u8.hash(h);
                (bound.len() - i).hash(h);
            }
            None => {
                1u8.hash(h);
                x.hash(h);
            }
        },
        FoTerm::Const(c) => {
            2u8.hash(h);
            c.hash(h);
        }
        FoTerm::App(f, args) => {
            3u8.hash(h);
            f.hash(h);
            args.len().hash(h);
            args.iter().for_each(|a| hash_term(a, bound, h));
        }
    }
}

fn hash_formula<H: Hasher>(f: &Formula, bound: &mut Vec<String>, h: &mut H) {
    match f {
        Formula::Bot => 10u8.hash(h),
        Formula::Atom(r, args) => {
            11u8.hash(h);
            r.hash(h);
            args.len().hash(h);
            args.iter().for_each(|a| hash_term(a, bound, h));
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            let tag: u8 = match f {
                Formula::And(..) => 12,
                Formula::Or(..) => 13,
                _ => 14,
            };
            tag.hash(h);
            hash_formula(a, bound, h);
            hash_formula(b, bound, h);
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            (if matches!(f, Formula::Forall(..)) { 15u8 } else { 16u8 }).hash(h);
            bound.push(x.clone());
            hash_formula(a, bound, h);
            bound.pop();
        }
    }
}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        hash_formula(self, &mut Vec::new(), state)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> FoTerm {
        FoTerm::var("x")
    }
    fn y() -> FoTerm {
        FoTerm::var("y")
    }

    #[test]
    fn free_vars_examples() {
        assert!(Formula::forall("x", Formula::eq(x(), FoTerm::zero())).free_vars().is_empty());
        let f = Formula::imp(Formula::eq(x(), FoTerm::zero()), Formula::eq(y(), FoTerm::zero()));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["x", "y"]);
        let f = Formula::forall("x", Formula::eq(x(), y()));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["y"]);
    }

    #[test]
    fn substitute_examples() {
        let f = Formula::eq(x(), FoTerm::zero());
        let g = f.substitute("x", &FoTerm::numeral(1)).unwrap();
        assert!(g.same_syntax(&Formula::eq(FoTerm::numeral(1), FoTerm::zero())));
        let h = Formula::forall("x", Formula::eq(x(), y()));
        let g = h.substitute("y", &FoTerm::zero()).unwrap();
        assert!(g.same_syntax(&Formula::forall("x", Formula::eq(x(), FoTerm::zero()))));
        assert!(h.substitute("y", &x()).is_err());
    }

    #[test]
    fn auto_renaming_avoids_capture() {
        let h = Formula::forall("x", Formula::eq(x(), y()));
        let g = h.subst("y", &x());
        match &g {
            Formula::Forall(z, body) => {
                assert_ne!(z, "x");
                assert!(body.same_syntax(&Formula::eq(FoTerm::var(z), x())));
            }
            _ => panic!("expected a quantifier"),
        }
    }

    #[test]
    fn free_for_examples() {
        let f = Formula::forall("x", Formula::eq(y(), FoTerm::zero()));
        assert!(f.free_for(&FoTerm::zero(), "y"));
        assert!(!f.free_for(&x(), "y"));
        assert!(Formula::eq(y(), FoTerm::zero()).free_for(&x(), "y"));
    }

    #[test]
    fn alpha_equality_and_hash_agree() {
        use std::collections::hash_map::DefaultHasher;
        let a = Formula::forall("x", Formula::eq(x(), y()));
        let b = Formula::forall("z", Formula::eq(FoTerm::var("z"), y()));
        let c = Formula::forall("y", Formula::eq(y(), y()));
        assert_eq!(a, b);
        assert_ne!(a, c);
        let hash = |f: &Formula| {
            let mut h = DefaultHasher::new();
            f.hash(&mut h);
            h.finish()
        };
        assert_eq!(hash(&a), hash(&b));
    }

    #[test]
    fn simultaneous_swap() {
        let f = Formula::eq(x(), y());
        let g = f.subst_simultaneous(&[("x".into(), y()), ("y".into(), x())]);
        assert!(g.same_syntax(&Formula::eq(y(), x())));
    }

    #[test]
    fn instance_matching() {
        let body = Formula::eq(x(), FoTerm::zero());
        let inst = Formula::eq(FoTerm::numeral(2), FoTerm::zero());
        assert_eq!(body.match_instance("x", &inst), InstanceMatch::Term(FoTerm::numeral(2)));
        assert_eq!(body.match_instance("y", &body), InstanceMatch::Vacuous);
        assert_eq!(body.match_instance("x", &Formula::Bot), InstanceMatch::NoMatch);
        let q = Formula::forall("y", Formula::eq(x(), y()));
        let captured = Formula::forall("y", Formula::eq(y(), y()));
        assert_eq!(q.match_instance("x", &captured), InstanceMatch::Captured(y()));
    }

    #[test]
    fn printing_parenthesizes_trailing_quantifiers() {
        let q = Formula::forall("x", Formula::prop("p"));
        let f = Formula::and(q.clone(), Formula::prop("r"));
        assert_eq!(f.to_string(), "(forall x. p) & r");
        let g = Formula::and(Formula::and(Formula::prop("p"), q.clone()), Formula::prop("r"));
        assert_eq!(g.to_string(), "p & (forall x. p) & r");
        let h = Formula::imp(Formula::prop("p"), q);
        assert_eq!(h.to_string(), "p -> forall x. p");
    }
}
