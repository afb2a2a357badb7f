use std::fmt;

use super::formula::Formula;

/// `Γ ▷ α`; an empty domain stands for a bare formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreType {
    pub domain: Vec<Formula>,
    pub head: Formula,
}

/// `τ_1, ..., τ_n ▷ τ_{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpType {
    pub entries: Vec<PreType>,
    pub codomain: PreType,
}

impl PreType {
    pub fn bare(head: Formula) -> Self {
        PreType { domain: Vec::new(), head }
    }

    pub fn new(domain: Vec<Formula>, head: Formula) -> Self {
        let mut d: Vec<Formula> = Vec::new();
        for f in domain {
            if !d.contains(&f) {
                d.push(f);
            }
        }
        PreType { domain: d, head }
    }

    pub fn is_bare(&self) -> bool {
        self.domain.is_empty()
    }

    /// Same domain as a set and alpha-equal heads.
    pub fn same_as(&self, other: &PreType) -> bool {
        self.head == other.head
            && self.domain.iter().all(|f| other.domain.contains(f))
            && other.domain.iter().all(|f| self.domain.contains(f))
    }
}

impl OpType {
    pub fn new(entries: Vec<PreType>, codomain: PreType) -> Self {
        OpType { entries, codomain }
    }

    /// Entries all bare, codomain bare.
    pub fn simple(entries: Vec<Formula>, codomain: Formula) -> Self {
        OpType { entries: entries.into_iter().map(PreType::bare).collect(), codomain: PreType::bare(codomain) }
    }

    /// The codomain's domain is covered by the entry domains.
    pub fn is_wellformed(&self) -> bool {
        self.codomain.domain.iter().all(|f| self.entries.iter().any(|e| e.domain.contains(f)))
    }
}

impl fmt::Display for PreType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.domain.is_empty() {
            let d: Vec<String> = self.domain.iter().map(|x| x.to_string()).collect();
            write!(f, "{} |- ", d.join(", "))?;
        }
        write!(f, "{}", self.head)
    }
}

impl fmt::Display for OpType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, " > {}", self.codomain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::prop(n)
    }

    #[test]
    fn wellformedness_examples() {
        let proj = OpType::simple(vec![Formula::and(a("a1"), a("a2"))], a("a1"));
        assert!(proj.is_wellformed());
        let uncovered = OpType::new(vec![], PreType::new(vec![a("a")], a("b")));
        assert!(!uncovered.is_wellformed());
        let id = OpType::simple(vec![a("a")], a("a"));
        assert!(id.is_wellformed());
        let covered = OpType::new(vec![PreType::new(vec![a("a")], a("b"))], PreType::new(vec![a("a")], a("b")));
        assert!(covered.is_wellformed());
    }

    #[test]
    fn domains_are_sets() {
        let p = PreType::new(vec![a("a"), a("a"), a("b")], a("c"));
        assert_eq!(p.domain.len(), 2);
        let q = PreType::new(vec![a("b"), a("a")], a("c"));
        assert!(p.same_as(&q));
    }
}
