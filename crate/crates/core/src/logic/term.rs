use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Individual terms of the background language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoTerm {
    Var(String),
    Const(String),
    App(String, Vec<FoTerm>),
}

pub const ZERO: &str = "0";
pub const SUCC: &str = "s";
pub const PLUS: &str = "+";
pub const TIMES: &str = "*";

impl FoTerm {
    pub fn var(name: &str) -> Self {
        FoTerm::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Self {
        FoTerm::Const(name.to_string())
    }

    pub fn app(f: &str, args: Vec<FoTerm>) -> Self {
        FoTerm::App(f.to_string(), args)
    }

    pub fn zero() -> Self {
        FoTerm::Const(ZERO.to_string())
    }

    pub fn succ(t: FoTerm) -> Self {
        FoTerm::App(SUCC.to_string(), vec![t])
    }

    pub fn plus(a: FoTerm, b: FoTerm) -> Self {
        FoTerm::App(PLUS.to_string(), vec![a, b])
    }

    pub fn times(a: FoTerm, b: FoTerm) -> Self {
        FoTerm::App(TIMES.to_string(), vec![a, b])
    }

    /// `s^n(0)`.
    pub fn numeral(n: u64) -> Self {
        let mut t = FoTerm::zero();
        for _ in 0..n {
            t = FoTerm::succ(t);
        }
        t
    }

    /// Inverse of [`FoTerm::numeral`].
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0;
        let mut cur = self;
        loop {
            match cur {
                FoTerm::Const(c) if c == ZERO => return Some(n),
                FoTerm::App(f, args) if f == SUCC && args.len() == 1 => {
                    n += 1;
                    cur = &args[0];
                }
                _ => return None,
            }
        }
    }

    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            FoTerm::Var(x) => {
                out.insert(x.clone());
            }
            FoTerm::Const(_) => {}
            FoTerm::App(_, args) => args.iter().for_each(|a| a.vars_into(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.vars_into(&mut out);
        out
    }

    pub fn has_var(&self, x: &str) -> bool {
        match self {
            FoTerm::Var(y) => y == x,
            FoTerm::Const(_) => false,
            FoTerm::App(_, args) => args.iter().any(|a| a.has_var(x)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            FoTerm::Var(_) => false,
            FoTerm::Const(_) => true,
            FoTerm::App(_, args) => args.iter().all(FoTerm::is_ground),
        }
    }

    pub fn subst(&self, x: &str, t: &FoTerm) -> FoTerm {
        match self {
            FoTerm::Var(y) if y == x => t.clone(),
            FoTerm::Var(_) | FoTerm::Const(_) => self.clone(),
            FoTerm::App(f, args) => FoTerm::App(f.clone(), args.iter().map(|a| a.subst(x, t)).collect()),
        }
    }

    /// Simultaneous replacement of variables; unmapped variables stay.
    pub fn subst_map(&self, map: &BTreeMap<String, FoTerm>) -> FoTerm {
        match self {
            FoTerm::Var(y) => map.get(y).cloned().unwrap_or_else(|| self.clone()),
            FoTerm::Const(_) => self.clone(),
            FoTerm::App(f, args) => FoTerm::App(f.clone(), args.iter().map(|a| a.subst_map(map)).collect()),
        }
    }

    pub fn rename(&self, from: &str, to: &str) -> FoTerm {
        self.subst(from, &FoTerm::Var(to.to_string()))
    }

    pub fn size(&self) -> usize {
        match self {
            FoTerm::Var(_) | FoTerm::Const(_) => 1,
            FoTerm::App(_, args) => 1 + args.iter().map(FoTerm::size).sum::<usize>(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            FoTerm::App(f, args) if f == PLUS && args.len() == 2 => 1,
            FoTerm::App(f, args) if f == TIMES && args.len() == 2 => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        if p < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            FoTerm::Var(x) | FoTerm::Const(x) => write!(f, "{x}"),
            FoTerm::App(op, args) if p < 3 => {
                // left associative: the right operand needs a strictly tighter level
                args[0].fmt_at(f, p)?;
                write!(f, " {op} ")?;
                args[1].fmt_at(f, p + 1)
            }
            FoTerm::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    a.fmt_at(f, 0)?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for FoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// A name not in `avoid`, derived from `base`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..).map(|i| format!("{stem}{i}")).find(|n| !avoid.contains(n)).expect("unbounded supply of names")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerals_round_trip() {
        for n in 0..6 {
            assert_eq!(FoTerm::numeral(n).as_numeral(), Some(n));
        }
        assert_eq!(FoTerm::var("x").as_numeral(), None);
    }

    #[test]
    fn infix_printing() {
        let t = FoTerm::plus(FoTerm::times(FoTerm::var("t"), FoTerm::var("u")), FoTerm::var("t"));
        assert_eq!(t.to_string(), "t * u + t");
        let t = FoTerm::times(FoTerm::var("t"), FoTerm::plus(FoTerm::var("u"), FoTerm::zero()));
        assert_eq!(t.to_string(), "t * (u + 0)");
        let t = FoTerm::plus(FoTerm::var("a"), FoTerm::plus(FoTerm::var("b"), FoTerm::var("c")));
        assert_eq!(t.to_string(), "a + (b + c)");
    }

    #[test]
    fn fresh_names_skip_taken() {
        let avoid: BTreeSet<String> = ["x", "x1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_name("x", &avoid), "x2");
        assert_eq!(fresh_name("y", &avoid), "y");
    }
}
