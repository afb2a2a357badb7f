use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::{subst_atom, Derivation};
use crate::ground::{
    build, typecheck, Binding, DeltaRef, FamilyKind, GroundTerm, GroundingLanguage, OpSymbol, TypedVar,
};
use crate::logic::{fresh_name, FoTerm, Formula};

#[derive(Clone, Debug)]
pub struct RandomConfig {
    pub seed: u64,
    pub max_size: usize,
    /// Nesting depth of connectives in the generated types.
    pub max_depth: usize,
    /// Chance of wrapping a subterm in an elimination of an introduction.
    pub detour_rate: f64,
    /// Individuals drawn as instances of axiom metavariables.
    pub individuals: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig { seed: 0, max_size: 30, max_depth: 3, detour_rate: 0.35, individuals: 4 }
    }
}

/// Seeded source of closed, well-typed terms with redexes inside them.
pub struct RandomTerms<'a> {
    lang: &'a GroundingLanguage,
    cfg: RandomConfig,
    rng: ChaCha8Rng,
    axioms: Vec<usize>,
}

struct Ctx {
    vars: Vec<TypedVar>,
    inds: Vec<String>,
}

impl<'a> RandomTerms<'a> {
    pub fn new(lang: &'a GroundingLanguage, cfg: RandomConfig) -> Self {
        let axioms = (0..lang.base.system.rules.len()).filter(|&i| lang.base.system.rules[i].is_axiom()).collect();
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        RandomTerms { lang, cfg, rng, axioms }
    }

    fn has(&self, k: FamilyKind) -> Option<String> {
        self.lang.label_of(k).map(str::to_string)
    }

    fn sym(&self, k: FamilyKind, s: OpSymbol) -> OpSymbol {
        let mut s = s;
        if let Some(l) = self.lang.label_of(k) {
            s.label = l.to_string();
        }
        s
    }

    fn individual(&mut self, ctx: &Ctx) -> Option<FoTerm> {
        let mut pool = self.lang.base.domain.first(self.cfg.individuals);
        pool.extend(ctx.inds.iter().map(|x| FoTerm::var(x)));
        pool.choose(&mut self.rng).cloned()
    }

    /// A random axiom instance, or a named derivation.
    fn atom(&mut self, ctx: &Ctx) -> Option<(Formula, GroundTerm)> {
        let named: Vec<_> = self.lang.deltas.iter().map(|(n, d)| (n.clone(), d.clone())).collect();
        if !named.is_empty() && (self.axioms.is_empty() || self.rng.gen_bool(0.3)) {
            let (n, d) = named.choose(&mut self.rng)?.clone();
            let f = d.check(&self.lang.base.system).ok()?;
            return Some((f, GroundTerm::Delta(DeltaRef { name: Some(n), derivation: d })));
        }
        let &i = self.axioms.choose(&mut self.rng)?;
        let rule = self.lang.base.system.rules[i].clone();
        let mut inst = std::collections::BTreeMap::new();
        for m in &rule.metavars {
            inst.insert(m.clone(), self.individual(ctx)?);
        }
        let f = subst_atom(&rule.conclusion, &inst);
        Some((f, GroundTerm::inline(Derivation::Step { rule: rule.name, inst, premises: Vec::new() })))
    }

    fn fresh(&self, ctx: &Ctx, f: &Formula) -> String {
        let mut avoid = f.all_vars();
        avoid.extend(ctx.inds.iter().cloned());
        for v in &ctx.vars {
            avoid.extend(v.ty.all_vars());
        }
        fresh_name("x", &avoid)
    }

    fn next_index(ctx: &Ctx) -> u32 {
        1 + ctx.vars.iter().map(|v| v.index).max().unwrap_or(0)
    }

    /// A type together with a ground for it, built introduction-first.
    fn pair(&mut self, ctx: &mut Ctx, depth: usize) -> Option<(Formula, GroundTerm)> {
        let choice = if depth == 0 { 0 } else { self.rng.gen_range(0..7) };
        let out = match choice {
            1 => {
                let (a, x) = self.pair(ctx, depth - 1)?;
                let (b, y) = self.pair(ctx, depth - 1)?;
                self.has(FamilyKind::AndI)?;
                let s = self.sym(FamilyKind::AndI, build::and_i(&a, &b));
                Some((Formula::and(a, b), GroundTerm::apply(s, vec![x, y])))
            }
            2 => {
                let (a, x) = self.pair(ctx, depth - 1)?;
                let (b, _) = self.pair(ctx, depth - 1)?;
                let i = if self.rng.gen_bool(0.5) { 1 } else { 2 };
                let (l, r) = if i == 1 { (a, b) } else { (b, a) };
                let k = if i == 1 { FamilyKind::OrI1 } else { FamilyKind::OrI2 };
                self.has(k)?;
                let s = self.sym(k, build::or_i(i, &l, &r));
                Some((Formula::or(l, r), GroundTerm::apply(s, vec![x])))
            }
            3 => {
                self.has(FamilyKind::ImpI)?;
                let (a, _) = self.pair(ctx, depth - 1)?;
                let v = TypedVar::new(a.clone(), Self::next_index(ctx));
                ctx.vars.push(v.clone());
                let body = self.pair(ctx, depth - 1);
                ctx.vars.pop();
                let (b, y) = body?;
                let s = self.sym(FamilyKind::ImpI, build::imp_i(&a, &b));
                Some((Formula::imp(a, b), GroundTerm::app(s, vec![Binding::typed(v)], vec![y])))
            }
            4 => {
                self.has(FamilyKind::AllI)?;
                let y = self.fresh(ctx, &Formula::Bot);
                ctx.inds.push(y.clone());
                let body = self.pair(ctx, depth - 1);
                ctx.inds.pop();
                let (b, t) = body?;
                let x = self.fresh(ctx, &b);
                let s = self.sym(FamilyKind::AllI, build::all_i(&y, &b, &x));
                let ty = s.optype.codomain.head.clone();
                Some((ty, GroundTerm::app(s, vec![Binding::ind(&y)], vec![t])))
            }
            5 => {
                self.has(FamilyKind::ExI)?;
                let (b, t) = self.pair(ctx, depth - 1)?;
                let k = self.individual(ctx)?;
                let x = self.fresh(ctx, &b);
                let body = abstract_term(&b, &k, &x);
                let s = self.sym(FamilyKind::ExI, build::ex_i(&x, &body, &k));
                Some((Formula::exists(&x, body), GroundTerm::apply(s, vec![t])))
            }
            6 => {
                let fits: Vec<TypedVar> = ctx.vars.clone();
                fits.choose(&mut self.rng).map(|v| (v.ty.clone(), GroundTerm::Var(v.clone())))
            }
            _ => None,
        };
        let (ty, t) = match out {
            Some(p) => p,
            None => self.atom(ctx)?,
        };
        if depth > 0 && self.rng.gen_bool(self.cfg.detour_rate) {
            if let Some(d) = self.detour(ctx, &ty, &t, depth - 1) {
                return Some((ty, d));
            }
        }
        Some((ty, t))
    }

    /// A redex of type `ty` that contracts to `t`, or to a term built from it.
    fn detour(&mut self, ctx: &mut Ctx, ty: &Formula, t: &GroundTerm, depth: usize) -> Option<GroundTerm> {
        match self.rng.gen_range(0..5) {
            0 => {
                let (c, u) = self.pair(ctx, depth)?;
                self.has(FamilyKind::AndE1)?;
                let pair = self.sym(FamilyKind::AndI, build::and_i(ty, &c));
                let proj = self.sym(FamilyKind::AndE1, build::and_e(1, ty, &c));
                Some(GroundTerm::apply(proj, vec![GroundTerm::apply(pair, vec![t.clone(), u])]))
            }
            1 => {
                let (c, u) = self.pair(ctx, depth)?;
                self.has(FamilyKind::ImpE)?;
                let v = TypedVar::new(c.clone(), 1 + t.max_index().max(Self::next_index(ctx)));
                let lam = GroundTerm::app(
                    self.sym(FamilyKind::ImpI, build::imp_i(&c, ty)),
                    vec![Binding::typed(v)],
                    vec![t.clone()],
                );
                Some(GroundTerm::apply(self.sym(FamilyKind::ImpE, build::imp_e(&c, ty)), vec![lam, u]))
            }
            2 => {
                let (c, u) = self.pair(ctx, depth)?;
                let (d, _) = self.pair(ctx, depth)?;
                self.has(FamilyKind::OrE)?;
                let k = 1 + t.max_index().max(Self::next_index(ctx));
                let inj = GroundTerm::apply(self.sym(FamilyKind::OrI1, build::or_i(1, &c, &d)), vec![u]);
                let binds = vec![
                    Binding::none(),
                    Binding::typed(TypedVar::new(c.clone(), k)),
                    Binding::typed(TypedVar::new(d.clone(), k)),
                ];
                Some(GroundTerm::app(
                    self.sym(FamilyKind::OrE, build::or_e(&c, &d, ty)),
                    binds,
                    vec![inj, t.clone(), t.clone()],
                ))
            }
            3 => {
                self.has(FamilyKind::AllE)?;
                let x = self.fresh(ctx, ty);
                let mut avoid = t.all_inds();
                avoid.insert(x.clone());
                let y = fresh_name("y", &avoid);
                let gen = GroundTerm::app(
                    self.sym(FamilyKind::AllI, build::all_i(&y, ty, &x)),
                    vec![Binding::ind(&y)],
                    vec![t.clone()],
                );
                let k = self.individual(&Ctx { vars: Vec::new(), inds: Vec::new() })?;
                Some(GroundTerm::apply(self.sym(FamilyKind::AllE, build::all_e(&x, ty, &k)), vec![gen]))
            }
            _ => {
                let (c, u) = self.pair(ctx, depth)?;
                self.has(FamilyKind::ExE)?;
                let k = self.individual(ctx)?;
                let x = self.fresh(ctx, &c);
                let body = abstract_term(&c, &k, &x);
                let pack = GroundTerm::apply(self.sym(FamilyKind::ExI, build::ex_i(&x, &body, &k)), vec![u]);
                let mut avoid = t.all_inds();
                avoid.extend(c.all_vars());
                avoid.extend(ty.all_vars());
                avoid.extend(ctx.inds.iter().cloned());
                let y = fresh_name("y", &avoid);
                let v = TypedVar::new(body.subst(&x, &FoTerm::var(&y)), 1 + t.max_index().max(Self::next_index(ctx)));
                let s = self.sym(FamilyKind::ExE, build::ex_e(&x, &body, &y, ty));
                Some(GroundTerm::app(s, vec![Binding::none(), Binding::both(&y, v)], vec![pack, t.clone()]))
            }
        }
    }

    /// The next closed, well-typed term within the size bound.
    pub fn next_term(&mut self) -> Option<GroundTerm> {
        for _ in 0..10_000 {
            let depth = self.rng.gen_range(1..=self.cfg.max_depth);
            let mut ctx = Ctx { vars: Vec::new(), inds: Vec::new() };
            let Some((_, t)) = self.pair(&mut ctx, depth) else { continue };
            if t.size() <= self.cfg.max_size && t.is_closed() && typecheck(&t, self.lang).is_ok() {
                return Some(t);
            }
        }
        None
    }

    pub fn take(&mut self, n: usize) -> Vec<GroundTerm> {
        (0..n).map_while(|_| self.next_term()).collect()
    }
}

/// Replaces every occurrence of `k` in `f` by the variable `x`.
fn abstract_term(f: &Formula, k: &FoTerm, x: &str) -> Formula {
    fn term(t: &FoTerm, k: &FoTerm, x: &str) -> FoTerm {
        if t == k {
            return FoTerm::var(x);
        }
        match t {
            FoTerm::App(g, args) => FoTerm::App(g.clone(), args.iter().map(|a| term(a, k, x)).collect()),
            other => other.clone(),
        }
    }
    match f {
        Formula::Bot => Formula::Bot,
        Formula::Atom(r, args) => Formula::Atom(r.clone(), args.iter().map(|a| term(a, k, x)).collect()),
        Formula::And(a, b) => Formula::and(abstract_term(a, k, x), abstract_term(b, k, x)),
        Formula::Or(a, b) => Formula::or(abstract_term(a, k, x), abstract_term(b, k, x)),
        Formula::Imp(a, b) => Formula::imp(abstract_term(a, k, x), abstract_term(b, k, x)),
        Formula::Forall(y, b) if k.has_var(y) => f.clone(),
        Formula::Forall(y, b) => Formula::forall(y, abstract_term(b, k, x)),
        Formula::Exists(y, b) if k.has_var(y) => f.clone(),
        Formula::Exists(y, b) => Formula::exists(y, abstract_term(b, k, x)),
    }
}
