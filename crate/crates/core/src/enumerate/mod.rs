//! Goal-directed enumeration of well-typed ground terms, and a seeded
//! generator of random closed terms.

mod prove;
mod random;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::base::{AtomicSystem, Derivation};
use crate::ground::{
    build, iff_parts, Binding, DeltaRef, FamilyKind, GroundTerm, GroundingLanguage, OpSymbol, TypedVar,
};
use crate::logic::{fresh_name, FoTerm, Formula, InstanceMatch};

pub use random::{RandomConfig, RandomTerms};

/// Closed atomic derivations of `goal`, searching backwards through rules
/// whose premises are fixed by the conclusion.
pub fn derive_atom(sys: &AtomicSystem, goal: &Formula, depth: usize, limit: usize) -> Vec<Derivation> {
    let mut out = Vec::new();
    if depth == 0 || limit == 0 {
        return out;
    }
    for r in &sys.rules {
        let Some(inst) = r.match_conclusion(goal) else { continue };
        if !r.metavars.iter().all(|m| inst.contains_key(m)) {
            continue;
        }
        let premises: Vec<Formula> = r.premises.iter().map(|p| crate::base::subst_atom(p, &inst)).collect();
        let mut partial: Vec<Vec<Derivation>> = vec![Vec::new()];
        for p in &premises {
            let subs = derive_atom(sys, p, depth - 1, limit);
            let mut next = Vec::new();
            for done in &partial {
                for s in &subs {
                    let mut d = done.clone();
                    d.push(s.clone());
                    next.push(d);
                }
            }
            partial = next;
            if partial.is_empty() {
                break;
            }
        }
        for ps in partial {
            out.push(Derivation::Step { rule: r.name.clone(), inst: inst.clone(), premises: ps });
            if out.len() >= limit {
                return out;
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Individuals tried as witnesses and instances.
    pub individuals: usize,
    /// Cap on the terms kept per context, type and size. `None` keeps all.
    pub bucket_limit: Option<usize>,
    /// Depth of the backward search for atomic derivations.
    pub derivation_depth: usize,
    /// Extra cut formulas for eliminations.
    pub extra_formulas: Vec<Formula>,
    /// Largest formula allowed as the type of any subterm. `None` uses the
    /// largest formula of the cut pool, plus one connective.
    pub max_type_size: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            individuals: 2,
            bucket_limit: Some(256),
            derivation_depth: 3,
            extra_formulas: Vec::new(),
            max_type_size: None,
        }
    }
}

/// Enumerates terms of a language by exact size. Results are memoized per
/// context, type and size, and come out in a fixed order.
pub struct Enumerator<'a> {
    lang: &'a GroundingLanguage,
    cfg: SearchConfig,
    pool: Vec<Formula>,
    labels: Vec<(String, FamilyKind)>,
    max_type: usize,
    memo: HashMap<MemoKey, Arc<Vec<GroundTerm>>>,
    /// Formulas up to renaming of bound variables, numbered.
    interned: HashMap<Formula, u32>,
    /// Closed derivations per atom, shared by every context.
    atoms: HashMap<String, Arc<Vec<GroundTerm>>>,
    prover: Option<prove::Prover>,
    /// Per context and type: whether some term might exist at all.
    possible: HashMap<(Vec<u32>, u32), bool>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct MemoKey {
    ctx: Vec<(u32, u32)>,
    inds: Vec<String>,
    ty: u32,
    size: usize,
}

struct Scope {
    ctx: Vec<TypedVar>,
    inds: Vec<String>,
}

impl Scope {
    fn visible(&self, ty: &Formula) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.inds.iter().cloned().collect();
        out.extend(ty.free_vars());
        for v in &self.ctx {
            out.extend(v.ty.free_vars());
        }
        out
    }

    fn next_index(&self) -> u32 {
        1 + self.ctx.iter().map(|v| v.index).max().unwrap_or(0)
    }

    /// A new binder shadows an older one of the same type: any use of the
    /// older one can use the newer, so no size class loses inhabitants.
    fn with_var(&self, v: TypedVar) -> Scope {
        let mut ctx: Vec<TypedVar> = self.ctx.iter().filter(|w| w.ty != v.ty).cloned().collect();
        ctx.push(v);
        Scope { ctx, inds: self.inds.clone() }
    }

    fn with_ind(&self, x: &str) -> Scope {
        let mut inds = self.inds.clone();
        inds.push(x.to_string());
        Scope { ctx: self.ctx.clone(), inds }
    }
}

fn atoms_of(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Bot => {}
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            atoms_of(a, out);
            atoms_of(b, out);
        }
        Formula::Forall(_, b) | Formula::Exists(_, b) => atoms_of(b, out),
        atom => {
            if !out.contains(atom) {
                out.push(atom.clone());
            }
        }
    }
}

/// Every way to write `total` as an ordered sum of `parts` positive sizes.
fn splits(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in splits(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl<'a> Enumerator<'a> {
    /// `seeds` supply the cut formulas: their subformulas, instances of
    /// their quantifiers, and `⊥`.
    pub fn new(lang: &'a GroundingLanguage, cfg: SearchConfig, seeds: &[Formula]) -> Self {
        let witnesses = lang.base.domain.first(cfg.individuals);
        let mut pool: Vec<Formula> = Vec::new();
        let push = |f: &Formula, pool: &mut Vec<Formula>| {
            for s in f.subformulas() {
                if !pool.contains(&s) {
                    pool.push(s);
                }
            }
        };
        for f in seeds.iter().chain(&cfg.extra_formulas) {
            push(f, &mut pool);
        }
        let mut i = 0;
        while i < pool.len() {
            if let Formula::Forall(x, b) | Formula::Exists(x, b) = pool[i].clone() {
                for t in &witnesses {
                    push(&b.subst(&x, t), &mut pool);
                }
            }
            i += 1;
        }
        if !pool.contains(&Formula::Bot) {
            pool.push(Formula::Bot);
        }
        let labels = lang.symbols.iter().map(|(l, k)| (l.clone(), *k)).collect();
        let max_type = cfg.max_type_size.unwrap_or_else(|| 2 + pool.iter().map(Formula::size).max().unwrap_or(0));
        Enumerator {
            lang,
            cfg,
            pool,
            labels,
            max_type,
            memo: HashMap::new(),
            interned: HashMap::new(),
            atoms: HashMap::new(),
            prover: (!lang.has_family(FamilyKind::Ind)).then(prove::Prover::default),
            possible: HashMap::new(),
        }
    }

    pub fn pool(&self) -> &[Formula] {
        &self.pool
    }

    /// Terms of `ty` of exactly `size` in the typed context `ctx`.
    pub fn of_size(&mut self, ctx: &[TypedVar], ty: &Formula, size: usize) -> Arc<Vec<GroundTerm>> {
        let scope = Scope { ctx: ctx.to_vec(), inds: Vec::new() };
        self.terms(&scope, ty, size)
    }

    /// Closed terms of `ty` up to `max_size`, smallest first, at most `limit`.
    pub fn closed(&mut self, ty: &Formula, max_size: usize, limit: usize) -> Vec<GroundTerm> {
        let mut out = Vec::new();
        for n in 1..=max_size {
            for t in self.of_size(&[], ty, n).iter() {
                if t.is_closed() {
                    out.push(t.clone());
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
        out
    }

    /// The first term of `ty` in `ctx` up to `max_size`.
    pub fn find(&mut self, ctx: &[TypedVar], ty: &Formula, max_size: usize) -> Option<GroundTerm> {
        (1..=max_size).find_map(|n| self.of_size(ctx, ty, n).first().cloned())
    }

    fn sym(&self, label: &str, mut s: OpSymbol) -> OpSymbol {
        s.label = label.to_string();
        s
    }

    fn witnesses(&self, scope: &Scope, ty: &Formula) -> Vec<FoTerm> {
        let mut out = self.lang.base.domain.first(self.cfg.individuals);
        for x in scope.visible(ty) {
            out.push(FoTerm::var(&x));
        }
        out
    }

    fn cuts(&self, scope: &Scope, ty: &Formula) -> Vec<Formula> {
        let vis = scope.visible(ty);
        self.pool.iter().filter(|f| f.free_vars().is_subset(&vis)).cloned().collect()
    }

    fn fresh_ind(&self, scope: &Scope, ty: &Formula, extra: &[&Formula]) -> String {
        let mut avoid = scope.visible(ty);
        avoid.extend(ty.all_vars());
        for f in extra {
            avoid.extend(f.all_vars());
        }
        for v in &scope.ctx {
            avoid.extend(v.ty.all_vars());
        }
        fresh_name("y", &avoid)
    }

    fn intern(&mut self, f: &Formula) -> u32 {
        if let Some(&n) = self.interned.get(f) {
            return n;
        }
        let n = self.interned.len() as u32;
        self.interned.insert(f.clone(), n);
        n
    }

    fn key(&mut self, scope: &Scope, ty: &Formula, size: usize) -> MemoKey {
        let mut ctx: Vec<(u32, u32)> = scope.ctx.iter().map(|v| (self.intern(&v.ty), v.index)).collect();
        ctx.sort_unstable();
        MemoKey { ctx, inds: scope.inds.clone(), ty: self.intern(ty), size }
    }

    fn terms(&mut self, scope: &Scope, ty: &Formula, size: usize) -> Arc<Vec<GroundTerm>> {
        if !self.might_inhabit(scope, ty) {
            return Arc::new(Vec::new());
        }
        let key = self.key(scope, ty, size);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut out = if size == 1 { self.leaves(scope, ty) } else { self.nodes(scope, ty, size) };
        if let Some(cap) = self.cfg.bucket_limit {
            out.truncate(cap);
        }
        let out = Arc::new(out);
        self.memo.insert(key, out.clone());
        out
    }

    /// False when `ty` is over the size cap, or when propositional logic
    /// already refutes it in the context, with derivable atoms as facts. Individual quantifiers and
    /// induction are not decided.
    fn might_inhabit(&mut self, scope: &Scope, ty: &Formula) -> bool {
        if ty.size() > self.max_type {
            return false;
        }
        if self.prover.is_none() {
            return true;
        }
        let mut ids: Vec<u32> = Vec::with_capacity(scope.ctx.len());
        for v in &scope.ctx {
            ids.push(self.intern(&v.ty));
        }
        ids.sort_unstable();
        ids.dedup();
        let key = (ids, self.intern(ty));
        if let Some(&b) = self.possible.get(&key) {
            return b;
        }
        let hyps: Vec<Formula> = scope.ctx.iter().map(|v| v.ty.clone()).collect();
        let mut atoms = Vec::new();
        for f in hyps.iter().chain(std::iter::once(ty)) {
            atoms_of(f, &mut atoms);
        }
        let mut facts = Vec::new();
        for a in atoms {
            if !facts.contains(&a) && !self.atom_leaves(&a).is_empty() {
                facts.push(a);
            }
        }
        let explosive = self.lang.has_family(FamilyKind::EmptyFn);
        let sys = &self.lang.base.system;
        let bot = |a: &Formula| explosive && !sys.may_conclude(a);
        let prover = self.prover.as_mut().expect("checked above");
        let b = prover.provable(&hyps, &facts, ty, &bot).unwrap_or(true);
        self.possible.insert(key, b);
        b
    }

    fn leaves(&mut self, scope: &Scope, ty: &Formula) -> Vec<GroundTerm> {
        let mut out: Vec<GroundTerm> = Vec::new();
        for v in &scope.ctx {
            if v.ty == *ty {
                out.push(GroundTerm::Var(v.clone()));
            }
        }
        if ty.is_atomic() {
            out.extend(self.atom_leaves(ty).iter().cloned());
        }
        out
    }

    fn atom_leaves(&mut self, ty: &Formula) -> Arc<Vec<GroundTerm>> {
        let key = ty.alpha_key();
        if let Some(hit) = self.atoms.get(&key) {
            return hit.clone();
        }
        let mut out = Vec::new();
        for (name, d) in &self.lang.deltas {
            if d.check(&self.lang.base.system).ok().as_ref() == Some(ty) {
                out.push(GroundTerm::Delta(DeltaRef { name: Some(name.clone()), derivation: d.clone() }));
            }
        }
        for d in derive_atom(&self.lang.base.system, ty, self.cfg.derivation_depth, 4) {
            if !self.lang.deltas.values().any(|n| **n == d) {
                out.push(GroundTerm::inline(d));
            }
        }
        let out = Arc::new(out);
        self.atoms.insert(key, out.clone());
        out
    }

    fn nodes(&mut self, scope: &Scope, ty: &Formula, size: usize) -> Vec<GroundTerm> {
        use FamilyKind as K;
        let inner = size - 1;
        let mut out = Vec::new();
        for (label, kind) in self.labels.clone() {
            match (kind, ty) {
                (K::AndI, Formula::And(a, b)) => {
                    let s = self.sym(&label, build::and_i(a, b));
                    self.product(&mut out, &s, vec![Binding::none(); 2], &[(scope, a), (scope, b)], inner);
                }
                (K::OrI1 | K::OrI2, Formula::Or(a, b)) => {
                    let i = if kind == K::OrI1 { 1 } else { 2 };
                    let s = self.sym(&label, build::or_i(i, a, b));
                    let arg = if i == 1 { a } else { b };
                    self.product(&mut out, &s, vec![Binding::none()], &[(scope, arg)], inner);
                }
                (K::ImpI, Formula::Imp(a, b)) => {
                    let v = TypedVar::new((**a).clone(), scope.next_index());
                    let s = self.sym(&label, build::imp_i(a, b));
                    let sc = scope.with_var(v.clone());
                    self.product(&mut out, &s, vec![Binding::typed(v)], &[(&sc, b)], inner);
                }
                (K::ExI, Formula::Exists(x, b)) => {
                    for t in self.witnesses(scope, ty) {
                        let s = self.sym(&label, build::ex_i(x, b, &t));
                        let inst = b.subst(x, &t);
                        self.product(&mut out, &s, vec![Binding::none()], &[(scope, &inst)], inner);
                    }
                }
                (K::AllI, Formula::Forall(x, b)) => {
                    let y = self.fresh_ind(scope, ty, &[]);
                    let body = b.subst(x, &FoTerm::var(&y));
                    let s = self.sym(&label, build::all_i(&y, &body, x));
                    let sc = scope.with_ind(&y);
                    self.product(&mut out, &s, vec![Binding::ind(&y)], &[(&sc, &body)], inner);
                }
                (K::BotE, _) => {
                    let s = self.sym(&label, build::bot_e(ty));
                    self.product(&mut out, &s, vec![Binding::none()], &[(scope, &Formula::Bot)], inner);
                }
                (K::AndE1 | K::AndE2, _) => {
                    for c in self.cuts(scope, ty) {
                        let (i, pair) = if kind == K::AndE1 {
                            (1, Formula::and(ty.clone(), c.clone()))
                        } else {
                            (2, Formula::and(c.clone(), ty.clone()))
                        };
                        if !self.might_inhabit(scope, &pair) {
                            continue;
                        }
                        let (l, r) = if i == 1 { (ty, &c) } else { (&c, ty) };
                        let s = self.sym(&label, build::and_e(i, l, r));
                        self.product(&mut out, &s, vec![Binding::none()], &[(scope, &pair)], inner);
                    }
                }
                (K::OrE, _) => {
                    for d in self.cuts(scope, ty) {
                        let Formula::Or(a, b) = &d else { continue };
                        if !self.might_inhabit(scope, &d) {
                            continue;
                        }
                        let k = scope.next_index();
                        let (va, vb) = (TypedVar::new((**a).clone(), k), TypedVar::new((**b).clone(), k));
                        let s = self.sym(&label, build::or_e(a, b, ty));
                        let (sa, sb) = (scope.with_var(va.clone()), scope.with_var(vb.clone()));
                        let binds = vec![Binding::none(), Binding::typed(va), Binding::typed(vb)];
                        self.product(&mut out, &s, binds, &[(scope, &d), (&sa, ty), (&sb, ty)], inner);
                    }
                }
                (K::ImpE, _) => {
                    for a in self.cuts(scope, ty) {
                        let f = Formula::imp(a.clone(), ty.clone());
                        if !self.might_inhabit(scope, &f) || !self.might_inhabit(scope, &a) {
                            continue;
                        }
                        let s = self.sym(&label, build::imp_e(&a, ty));
                        self.product(&mut out, &s, vec![Binding::none(); 2], &[(scope, &f), (scope, &a)], inner);
                    }
                }
                (K::ExE, _) => {
                    for e in self.cuts(scope, ty) {
                        let Formula::Exists(x, b) = &e else { continue };
                        if !self.might_inhabit(scope, &e) {
                            continue;
                        }
                        let y = self.fresh_ind(scope, ty, &[&e]);
                        let s = self.sym(&label, build::ex_e(x, b, &y, ty));
                        let v = TypedVar::new(b.subst(x, &FoTerm::var(&y)), scope.next_index());
                        let sc = scope.with_var(v.clone()).with_ind(&y);
                        let binds = vec![Binding::none(), Binding::both(&y, v)];
                        self.product(&mut out, &s, binds, &[(scope, &e), (&sc, ty)], inner);
                    }
                }
                (K::AllE, _) => {
                    for u in self.cuts(scope, ty) {
                        let Formula::Forall(x, b) = &u else { continue };
                        // Instances of ∀E are names of individuals.
                        let k = match b.match_instance(x, ty) {
                            InstanceMatch::Term(k) if self.lang.base.domain.contains(&k) => k,
                            InstanceMatch::Vacuous => match self.lang.base.domain.first(1).pop() {
                                Some(k) => k,
                                None => continue,
                            },
                            _ => continue,
                        };
                        let s = self.sym(&label, build::all_e(x, b, &k));
                        self.product(&mut out, &s, vec![Binding::none()], &[(scope, &u)], inner);
                    }
                }
                (K::Ind, _) => {
                    for d in self.pool.clone() {
                        for y in d.free_vars() {
                            let InstanceMatch::Term(n) = d.match_instance(&y, ty) else { continue };
                            let Some(n) = n.as_numeral() else { continue };
                            let z = self.fresh_ind(scope, ty, &[&d]);
                            let dz = d.subst(&y, &FoTerm::var(&z));
                            let s = self.sym(&label, build::ind(&z, &dz, n));
                            let v = TypedVar::new(dz.clone(), scope.next_index());
                            let sc = scope.with_var(v.clone()).with_ind(&z);
                            let zero = dz.subst(&z, &FoTerm::zero());
                            let succ = dz.subst(&z, &FoTerm::succ(FoTerm::var(&z)));
                            let binds = vec![Binding::none(), Binding::both(&z, v)];
                            self.product(&mut out, &s, binds, &[(scope, &zero), (&sc, &succ)], inner);
                        }
                    }
                }
                (K::DisjSyll, _) => {
                    for a in self.cuts(scope, ty) {
                        let s = self.sym(&label, build::disj_syll(&a, ty));
                        let (major, minor) = (Formula::or(a.clone(), ty.clone()), Formula::not(a.clone()));
                        self.product(
                            &mut out,
                            &s,
                            vec![Binding::none(); 2],
                            &[(scope, &major), (scope, &minor)],
                            inner,
                        );
                    }
                }
                (K::IffI, _) => {
                    let Some((a, b)) = iff_parts(ty) else { continue };
                    let s = self.sym(&label, build::iff_i(a, b));
                    let (f, g) = (Formula::imp(a.clone(), b.clone()), Formula::imp(b.clone(), a.clone()));
                    self.product(&mut out, &s, vec![Binding::none(); 2], &[(scope, &f), (scope, &g)], inner);
                }
                (K::IffE1 | K::IffE2, _) => {
                    for a in self.cuts(scope, ty) {
                        let (i, sym) =
                            if kind == K::IffE1 { (1, build::iff_e(1, &a, ty)) } else { (2, build::iff_e(2, ty, &a)) };
                        let both = if i == 1 { build::iff(&a, ty) } else { build::iff(ty, &a) };
                        let s = self.sym(&label, sym);
                        self.product(&mut out, &s, vec![Binding::none(); 2], &[(scope, &both), (scope, &a)], inner);
                    }
                }
                (K::EmptyFn, _) => {
                    for a in self.cuts(scope, ty) {
                        if !a.is_atomic() || self.lang.base.system.may_conclude(&a) {
                            continue;
                        }
                        let s = self.sym(&label, build::empty_fn(&a, ty));
                        self.product(&mut out, &s, vec![Binding::none()], &[(scope, &a)], inner);
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// All applications of `sym` whose argument sizes sum to `total`.
    fn product(
        &mut self,
        out: &mut Vec<GroundTerm>,
        sym: &OpSymbol,
        binds: Vec<Binding>,
        slots: &[(&Scope, &Formula)],
        total: usize,
    ) {
        let cap = self.cfg.bucket_limit.unwrap_or(usize::MAX);
        for sizes in splits(total, slots.len()) {
            let mut lists = Vec::with_capacity(slots.len());
            for ((sc, ty), n) in slots.iter().zip(&sizes) {
                let l = self.terms(sc, ty, *n);
                if l.is_empty() {
                    break;
                }
                lists.push(l);
            }
            if lists.len() != slots.len() {
                continue;
            }
            let mut idx = vec![0usize; lists.len()];
            loop {
                if out.len() >= cap {
                    return;
                }
                let args = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
                out.push(GroundTerm::app(sym.clone(), binds.clone(), args));
                let mut k = lists.len();
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < lists[k].len() {
                        break;
                    }
                    idx[k] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
    }
}

/// Counts, per size, of terms the enumerator yields.
pub fn census(e: &mut Enumerator<'_>, ctx: &[TypedVar], ty: &Formula, max_size: usize) -> BTreeMap<usize, usize> {
    (1..=max_size).map(|n| (n, e.of_size(ctx, ty, n).len())).collect()
}
