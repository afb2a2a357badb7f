use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::base::Derivation;
use crate::logic::{fresh_name, FoTerm, Formula, PreType};

use super::symbol::{Binding, OpSymbol, TypedVar};

/// A δ constant: a registered name or an inline derivation.
#[derive(Clone, Debug)]
pub struct DeltaRef {
    pub name: Option<String>,
    pub derivation: Arc<Derivation>,
}

impl PartialEq for DeltaRef {
    fn eq(&self, other: &Self) -> bool {
        self.derivation == other.derivation
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct App {
    pub sym: OpSymbol,
    pub binds: Vec<Binding>,
    pub args: Vec<GroundTerm>,
}

/// Terms of a language of grounding.
///
/// `PartialEq` is structural: bound names and indices must coincide. Use
/// [`GroundTerm::alpha_eq`] to compare up to renaming.
#[derive(Clone, Debug, PartialEq)]
pub enum GroundTerm {
    Delta(DeltaRef),
    Var(TypedVar),
    App(Arc<App>),
}

/// Entry indices from the root, 0-based.
pub type Path = Vec<usize>;

pub fn show_path(p: &[usize]) -> String {
    if p.is_empty() {
        "-".to_string()
    } else {
        p.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(".")
    }
}

impl GroundTerm {
    pub fn delta(name: &str, d: Arc<Derivation>) -> Self {
        GroundTerm::Delta(DeltaRef { name: Some(name.to_string()), derivation: d })
    }

    pub fn inline(d: Derivation) -> Self {
        GroundTerm::Delta(DeltaRef { name: None, derivation: Arc::new(d) })
    }

    pub fn var(ty: Formula, index: u32) -> Self {
        GroundTerm::Var(TypedVar::new(ty, index))
    }

    pub fn app(sym: OpSymbol, binds: Vec<Binding>, args: Vec<GroundTerm>) -> Self {
        GroundTerm::App(Arc::new(App { sym, binds, args }))
    }

    /// Application without bindings on any entry.
    pub fn apply(sym: OpSymbol, args: Vec<GroundTerm>) -> Self {
        let binds = vec![Binding::none(); args.len()];
        GroundTerm::app(sym, binds, args)
    }

    pub fn as_app(&self) -> Option<&App> {
        match self {
            GroundTerm::App(a) => Some(a),
            _ => None,
        }
    }

    pub fn head_label(&self) -> Option<&str> {
        self.as_app().map(|a| a.sym.label.as_str())
    }

    /// δ, a typed variable, or an introduction-headed application.
    pub fn is_canonical(&self) -> bool {
        match self {
            GroundTerm::Delta(_) | GroundTerm::Var(_) => true,
            GroundTerm::App(a) => a.sym.family.is_introduction(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            GroundTerm::Delta(_) | GroundTerm::Var(_) => 1,
            GroundTerm::App(a) => 1 + a.args.iter().map(GroundTerm::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            GroundTerm::Delta(_) | GroundTerm::Var(_) => 1,
            GroundTerm::App(a) => 1 + a.args.iter().map(GroundTerm::depth).max().unwrap_or(0),
        }
    }

    /// `FV^I`: the codomain's variables, plus each argument's minus what its entry binds.
    pub fn fv_individual(&self) -> BTreeSet<String> {
        match self {
            GroundTerm::Delta(d) => d.derivation.free_vars(),
            GroundTerm::Var(v) => v.ty.free_vars(),
            GroundTerm::App(a) => {
                let mut out = a.sym.optype.codomain.head.free_vars();
                for (arg, b) in a.args.iter().zip(&a.binds) {
                    out.extend(arg.fv_individual().into_iter().filter(|x| !b.inds.contains(x)));
                }
                out
            }
        }
    }

    /// `FV^T`: each argument's free typed variables minus those its entry binds.
    pub fn fv_typed(&self) -> BTreeSet<TypedVar> {
        match self {
            GroundTerm::Delta(_) => BTreeSet::new(),
            GroundTerm::Var(v) => BTreeSet::from([v.clone()]),
            GroundTerm::App(a) => {
                let mut out = BTreeSet::new();
                for (arg, b) in a.args.iter().zip(&a.binds) {
                    out.extend(arg.fv_typed().into_iter().filter(|v| !b.typed.contains(v)));
                }
                out
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.fv_typed().is_empty() && self.fv_individual().is_empty()
    }

    pub fn has_delta(&self) -> bool {
        match self {
            GroundTerm::Delta(_) => true,
            GroundTerm::Var(_) => false,
            GroundTerm::App(a) => a.args.iter().any(GroundTerm::has_delta),
        }
    }

    /// Every subterm with its path, in pre-order.
    pub fn subterms(&self) -> Vec<(Path, &GroundTerm)> {
        let mut out = Vec::new();
        self.subterms_into(&mut Vec::new(), &mut out);
        out
    }

    fn subterms_into<'a>(&'a self, path: &mut Path, out: &mut Vec<(Path, &'a GroundTerm)>) {
        out.push((path.clone(), self));
        if let GroundTerm::App(a) = self {
            for (i, arg) in a.args.iter().enumerate() {
                path.push(i);
                arg.subterms_into(path, out);
                path.pop();
            }
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&GroundTerm> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.as_app()?.args.get(i)?.at(rest),
        }
    }

    /// Replaces the subterm at `path`. Binders on the way are not renamed.
    pub fn replace_at(&self, path: &[usize], new: GroundTerm) -> GroundTerm {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => match self {
                GroundTerm::App(a) => {
                    let mut args = a.args.clone();
                    args[i] = args[i].replace_at(rest, new);
                    GroundTerm::app(a.sym.clone(), a.binds.clone(), args)
                }
                _ => self.clone(),
            },
        }
    }

    /// Largest typed-variable index occurring anywhere, bound or free.
    pub fn max_index(&self) -> u32 {
        match self {
            GroundTerm::Delta(_) => 0,
            GroundTerm::Var(v) => v.index,
            GroundTerm::App(a) => {
                let binders = a.binds.iter().flat_map(|b| b.typed.iter().map(|v| v.index));
                let args = a.args.iter().map(GroundTerm::max_index);
                binders.chain(args).max().unwrap_or(0)
            }
        }
    }

    /// Every individual variable name occurring anywhere.
    pub fn all_inds(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.all_inds_into(&mut out);
        out
    }

    fn all_inds_into(&self, out: &mut BTreeSet<String>) {
        match self {
            GroundTerm::Delta(d) => out.extend(d.derivation.free_vars()),
            GroundTerm::Var(v) => out.extend(v.ty.all_vars()),
            GroundTerm::App(a) => {
                let ot = &a.sym.optype;
                for pt in ot.entries.iter().chain(std::iter::once(&ot.codomain)) {
                    for f in pt.domain.iter().chain(std::iter::once(&pt.head)) {
                        out.extend(f.all_vars());
                    }
                }
                for b in &a.binds {
                    out.extend(b.inds.iter().cloned());
                }
                a.args.iter().for_each(|t| t.all_inds_into(out));
            }
        }
    }

    /// Capture-avoiding replacement of the free occurrences of `v` by `u`.
    pub fn subst_typed(&self, v: &TypedVar, u: &GroundTerm) -> GroundTerm {
        match self {
            GroundTerm::Var(w) if w == v => u.clone(),
            GroundTerm::Var(_) | GroundTerm::Delta(_) => self.clone(),
            GroundTerm::App(a) => {
                let mut entries = a.sym.optype.entries.clone();
                let mut binds = a.binds.clone();
                let mut args = a.args.clone();
                let mut changed = false;
                for i in 0..args.len() {
                    if binds[i].typed.contains(v) || !args[i].fv_typed().contains(v) {
                        continue;
                    }
                    let u_inds = u.fv_individual();
                    for x in binds[i].inds.clone() {
                        if u_inds.contains(&x) {
                            let mut avoid = args[i].all_inds();
                            avoid.extend(u.all_inds());
                            avoid.extend(pretype_vars(&entries[i]));
                            let x2 = fresh_name(&x, &avoid);
                            rename_bound_ind(&mut entries[i], &mut binds[i], &mut args[i], &x, &x2);
                        }
                    }
                    let u_typed = u.fv_typed();
                    for j in 0..binds[i].typed.len() {
                        let w = binds[i].typed[j].clone();
                        if u_typed.contains(&w) {
                            let idx = 1 + args[i].max_index().max(u.max_index()).max(v.index);
                            let w2 = TypedVar::new(w.ty.clone(), idx);
                            args[i] = args[i].subst_typed(&w, &GroundTerm::Var(w2.clone()));
                            binds[i].typed[j] = w2;
                        }
                    }
                    args[i] = args[i].subst_typed(v, u);
                    changed = true;
                }
                if !changed {
                    return self.clone();
                }
                let mut sym = a.sym.clone();
                Arc::make_mut(&mut sym.optype).entries = entries;
                GroundTerm::app(sym, binds, args)
            }
        }
    }

    /// Capture-avoiding replacement of the free individual `x` by `k`, in
    /// every type annotation, symbol instance and δ instantiation.
    pub fn subst_individual(&self, x: &str, k: &FoTerm) -> GroundTerm {
        match self {
            GroundTerm::Delta(d) => {
                if d.derivation.free_vars().contains(x) {
                    GroundTerm::inline(d.derivation.subst_individual(x, k))
                } else {
                    self.clone()
                }
            }
            GroundTerm::Var(v) => GroundTerm::var(v.ty.subst(x, k), v.index),
            GroundTerm::App(a) => {
                let mut sym = a.sym.clone();
                let mut binds = a.binds.clone();
                let mut args = a.args.clone();
                let kv = k.vars();
                let c = subst_pretype(&sym.optype.codomain, x, k);
                Arc::make_mut(&mut sym.optype).codomain = c;
                for i in 0..args.len() {
                    if binds[i].inds.iter().any(|z| z == x) {
                        continue;
                    }
                    for z in binds[i].inds.clone() {
                        if kv.contains(&z) {
                            let mut avoid = args[i].all_inds();
                            avoid.extend(kv.iter().cloned());
                            avoid.extend(pretype_vars(&sym.optype.entries[i]));
                            avoid.insert(x.to_string());
                            let z2 = fresh_name(&z, &avoid);
                            rename_bound_ind(
                                &mut Arc::make_mut(&mut sym.optype).entries[i],
                                &mut binds[i],
                                &mut args[i],
                                &z,
                                &z2,
                            );
                        }
                    }
                    // A bound typed variable must not become equal to a free one.
                    let free: Vec<TypedVar> =
                        args[i].fv_typed().into_iter().filter(|w| !binds[i].typed.contains(w)).collect();
                    for j in 0..binds[i].typed.len() {
                        let w = binds[i].typed[j].clone();
                        let w_after = w.ty.subst(x, k);
                        let clash = free.iter().any(|f| f.index == w.index && f.ty.subst(x, k) == w_after);
                        if clash {
                            let idx = 1 + args[i].max_index().max(w.index);
                            let w2 = TypedVar::new(w.ty.clone(), idx);
                            args[i] = args[i].subst_typed(&w, &GroundTerm::Var(w2.clone()));
                            binds[i].typed[j] = w2;
                        }
                    }
                    let e = subst_pretype(&sym.optype.entries[i], x, k);
                    Arc::make_mut(&mut sym.optype).entries[i] = e;
                    for w in binds[i].typed.iter_mut() {
                        w.ty = w.ty.subst(x, k);
                    }
                    args[i] = args[i].subst_individual(x, k);
                }
                GroundTerm::app(sym, binds, args)
            }
        }
    }

    /// Alpha-equivalence: renaming of bound individuals and re-indexing of
    /// bound typed variables; symbols compare by label and instance.
    pub fn alpha_eq(&self, other: &GroundTerm) -> bool {
        self.alpha_eq_with(other, &|a, b| a.label == b.label && a.family == b.family)
    }

    /// As [`GroundTerm::alpha_eq`], with `same_head` deciding when two
    /// symbols count as the same operation. Types are always compared.
    pub fn alpha_eq_with(&self, other: &GroundTerm, same_head: &dyn Fn(&OpSymbol, &OpSymbol) -> bool) -> bool {
        AlphaCmp { inds: Vec::new(), typed: Vec::new(), same_head }.terms(self, other)
    }
}

fn subst_pretype(pt: &PreType, x: &str, k: &FoTerm) -> PreType {
    PreType { domain: pt.domain.iter().map(|f| f.subst(x, k)).collect(), head: pt.head.subst(x, k) }
}

fn pretype_vars(pt: &PreType) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for f in pt.domain.iter().chain(std::iter::once(&pt.head)) {
        out.extend(f.all_vars());
    }
    out
}

fn rename_bound_ind(pt: &mut PreType, b: &mut Binding, arg: &mut GroundTerm, from: &str, to: &str) {
    let k = FoTerm::var(to);
    *pt = subst_pretype(pt, from, &k);
    for w in b.typed.iter_mut() {
        w.ty = w.ty.subst(from, &k);
    }
    for x in b.inds.iter_mut() {
        if x == from {
            *x = to.to_string();
        }
    }
    *arg = arg.subst_individual(from, &k);
}

struct AlphaCmp<'h> {
    inds: Vec<(String, String)>,
    typed: Vec<(TypedVar, TypedVar)>,
    same_head: &'h dyn Fn(&OpSymbol, &OpSymbol) -> bool,
}

impl AlphaCmp<'_> {
    fn formula(&mut self, a: &Formula, b: &Formula) -> bool {
        a.alpha_eq_in(b, &mut self.inds)
    }

    fn pretype(&mut self, a: &PreType, b: &PreType) -> bool {
        if !self.formula(&a.head, &b.head) || a.domain.len() != b.domain.len() {
            return false;
        }
        let mut env = std::mem::take(&mut self.inds);
        let ok = a.domain.iter().all(|f| b.domain.iter().any(|g| f.alpha_eq_in(g, &mut env)))
            && b.domain.iter().all(|g| a.domain.iter().any(|f| f.alpha_eq_in(g, &mut env)));
        self.inds = env;
        ok
    }

    fn derivation(&self, a: &Derivation, b: &Derivation) -> bool {
        match (a, b) {
            (Derivation::Assume(f), Derivation::Assume(g)) => f.alpha_eq_in(g, &mut self.inds.clone()),
            (
                Derivation::Step { rule: r1, inst: i1, premises: p1 },
                Derivation::Step { rule: r2, inst: i2, premises: p2 },
            ) => {
                r1 == r2
                    && i1.len() == i2.len()
                    && i1.iter().zip(i2).all(|((m1, t1), (m2, t2))| m1 == m2 && t1.alpha_eq_in(t2, &self.inds))
                    && p1.len() == p2.len()
                    && p1.iter().zip(p2).all(|(x, y)| self.derivation(x, y))
            }
            _ => false,
        }
    }

    fn terms(&mut self, a: &GroundTerm, b: &GroundTerm) -> bool {
        match (a, b) {
            (GroundTerm::Delta(d), GroundTerm::Delta(e)) => self.derivation(&d.derivation, &e.derivation),
            (GroundTerm::Var(v), GroundTerm::Var(w)) => {
                let l = self.typed.iter().rposition(|(x, _)| x == v);
                let r = self.typed.iter().rposition(|(_, y)| y == w);
                match (l, r) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => v.index == w.index && self.formula(&v.ty, &w.ty),
                    _ => false,
                }
            }
            (GroundTerm::App(x), GroundTerm::App(y)) => {
                if !(self.same_head)(&x.sym, &y.sym)
                    || x.args.len() != y.args.len()
                    || x.sym.optype.entries.len() != y.sym.optype.entries.len()
                    || x.binds.len() != y.binds.len()
                    || !self.pretype(&x.sym.optype.codomain, &y.sym.optype.codomain)
                {
                    return false;
                }
                for i in 0..x.args.len() {
                    let (bx, by) = (&x.binds[i], &y.binds[i]);
                    if bx.inds.len() != by.inds.len() || bx.typed.len() != by.typed.len() {
                        return false;
                    }
                    let (ni, nt) = (self.inds.len(), self.typed.len());
                    self.inds.extend(bx.inds.iter().cloned().zip(by.inds.iter().cloned()));
                    let ok = self.pretype(&x.sym.optype.entries[i], &y.sym.optype.entries[i])
                        && bx.typed.iter().zip(&by.typed).all(|(v, w)| v.ty.alpha_eq_in(&w.ty, &mut self.inds.clone()));
                    self.typed.extend(bx.typed.iter().cloned().zip(by.typed.iter().cloned()));
                    let ok = ok && self.terms(&x.args[i], &y.args[i]);
                    self.inds.truncate(ni);
                    self.typed.truncate(nt);
                    if !ok {
                        return false;
                    }
                }
                true
            }
            _ => false,
        }
    }
}

impl fmt::Display for DeltaRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "delta {n}"),
            None => write!(f, "delta {}", self.derivation),
        }
    }
}

impl fmt::Display for GroundTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundTerm::Delta(d) => write!(f, "{d}"),
            GroundTerm::Var(v) => write!(f, "{v}"),
            GroundTerm::App(a) => {
                write!(f, "{}[{}]", a.sym.label, a.sym.optype)?;
                let clauses: Vec<String> = a
                    .binds
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| !b.is_empty())
                    .map(|(i, b)| {
                        let items: Vec<String> =
                            b.inds.iter().cloned().chain(b.typed.iter().map(|v| v.to_string())).collect();
                        format!("bind {}: {}", i + 1, items.join(", "))
                    })
                    .collect();
                if !clauses.is_empty() {
                    write!(f, "{{{}}}", clauses.join("; "))?;
                }
                write!(f, "(")?;
                for (i, t) in a.args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}
