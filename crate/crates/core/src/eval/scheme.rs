use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::ground::{build, iff_parts, App, Binding, FamilyKind, GroundTerm, OpSymbol, TypedVar};
use crate::logic::{FoTerm, Formula, InstanceMatch, PreType};

/// Defining-equation schemes. One scheme serves a whole family of
/// symbol instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// `∧E_i(∧I(g_1, g_2)) = g_i`.
    AndProj(u8),
    /// `∨E(∨I_i(g), h_1, h_2) = h_i(g)`.
    OrCase,
    /// `→E(→I ξ (h), g) = h(g)`.
    ImpBeta,
    /// `∀E_k(∀I x (h)) = h(k)`.
    AllInst,
    /// `∃E(∃I_t(g), h) = h(t, g)`.
    ExUnpack,
    /// `Ind^0(g, h) = g`, `Ind^{n+1}(g, h) = h(n, Ind^n(g, h))`.
    IndRec,
    /// `DS(∨I_2(g), h) = g`. The `∨I_1` case would need a closed ground
    /// for `⊥`, and is reported as an inconsistency of the base.
    DisjSyll,
    /// `DS(g, h) = ∨E(g, ⊥(→E(h, ξ^α)), ξ^β)`.
    DisjSyllComposite,
    /// `iffI(f, g) = ∧I(f, g)`.
    IffIntro,
    /// `iffE_i(h, g) = →E(∧E_i(h), g)`.
    IffElim(u8),
    /// The empty function: no equations.
    EmptyFn,
}

impl Scheme {
    pub const ALL: [Scheme; 13] = [
        Scheme::AndProj(1),
        Scheme::AndProj(2),
        Scheme::OrCase,
        Scheme::ImpBeta,
        Scheme::AllInst,
        Scheme::ExUnpack,
        Scheme::IndRec,
        Scheme::DisjSyll,
        Scheme::DisjSyllComposite,
        Scheme::IffIntro,
        Scheme::IffElim(1),
        Scheme::IffElim(2),
        Scheme::EmptyFn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::AndProj(1) => "and-proj1",
            Scheme::AndProj(_) => "and-proj2",
            Scheme::OrCase => "or-case",
            Scheme::ImpBeta => "imp-beta",
            Scheme::AllInst => "all-inst",
            Scheme::ExUnpack => "ex-unpack",
            Scheme::IndRec => "ind-rec",
            Scheme::DisjSyll => "ds-direct",
            Scheme::DisjSyllComposite => "ds-composite",
            Scheme::IffIntro => "iff-intro",
            Scheme::IffElim(1) => "iff-elim1",
            Scheme::IffElim(_) => "iff-elim2",
            Scheme::EmptyFn => "empty",
        }
    }

    pub fn from_name(s: &str) -> Option<Scheme> {
        Scheme::ALL.iter().copied().find(|k| k.name() == s)
    }

    /// The scheme a family gets when nothing else is registered.
    pub fn default_for(kind: FamilyKind) -> Option<Scheme> {
        use FamilyKind::*;
        match kind {
            AndE1 => Some(Scheme::AndProj(1)),
            AndE2 => Some(Scheme::AndProj(2)),
            OrE => Some(Scheme::OrCase),
            ImpE => Some(Scheme::ImpBeta),
            AllE => Some(Scheme::AllInst),
            ExE => Some(Scheme::ExUnpack),
            Ind => Some(Scheme::IndRec),
            DisjSyll => Some(Scheme::DisjSyll),
            IffI => Some(Scheme::IffIntro),
            IffE1 => Some(Scheme::IffElim(1)),
            IffE2 => Some(Scheme::IffElim(2)),
            EmptyFn => Some(Scheme::EmptyFn),
            AndI | OrI1 | OrI2 | ImpI | ExI | AllI | BotE => None,
        }
    }

    pub fn fits(self, kind: FamilyKind) -> bool {
        match self {
            Scheme::DisjSyllComposite => kind == FamilyKind::DisjSyll,
            other => Scheme::default_for(kind) == Some(other),
        }
    }

    /// Whether the same equation defines the operation on every base.
    pub fn universal_by_default(self) -> bool {
        !matches!(self, Scheme::IndRec | Scheme::EmptyFn)
    }

    /// Entries whose argument must be canonical before the rule fires.
    pub fn scrutinees(self) -> &'static [usize] {
        match self {
            Scheme::AndProj(_)
            | Scheme::OrCase
            | Scheme::ImpBeta
            | Scheme::AllInst
            | Scheme::ExUnpack
            | Scheme::DisjSyll
            | Scheme::EmptyFn => &[0],
            Scheme::IndRec | Scheme::DisjSyllComposite | Scheme::IffIntro | Scheme::IffElim(_) => &[],
        }
    }

    /// Families whose labels the right-hand side builds.
    pub fn needs(self) -> &'static [FamilyKind] {
        match self {
            Scheme::DisjSyllComposite => &[FamilyKind::OrE, FamilyKind::BotE, FamilyKind::ImpE],
            Scheme::IffIntro => &[FamilyKind::AndI],
            Scheme::IffElim(1) => &[FamilyKind::ImpE, FamilyKind::AndE1],
            Scheme::IffElim(_) => &[FamilyKind::ImpE, FamilyKind::AndE2],
            _ => &[],
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Why a redex could not be contracted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContractFailure {
    /// The scrutinee does not have the shape the scheme expects.
    Shape,
    /// Firing would need a closed ground for an underivable formula.
    Inconsistent,
}

/// Labels and the default individual a right-hand side may need.
pub struct RhsContext<'a> {
    pub labels: &'a BTreeMap<FamilyKind, String>,
    pub witness: Option<&'a FoTerm>,
}

impl RhsContext<'_> {
    fn relabel(&self, mut sym: OpSymbol) -> OpSymbol {
        if let Some(l) = self.labels.get(&sym.family) {
            sym.label = l.clone();
        }
        sym
    }
}

fn intro<'a>(t: &'a GroundTerm, kinds: &[FamilyKind]) -> Result<&'a App, ContractFailure> {
    match t {
        GroundTerm::App(a) if kinds.contains(&a.sym.family) => Ok(a),
        GroundTerm::Delta(_) if kinds.is_empty() => Err(ContractFailure::Inconsistent),
        _ => Err(ContractFailure::Shape),
    }
}

/// `h[y := k][ξ := g]`, with `ξ` first moved to an index that neither `h`
/// nor `g` uses so that instantiating `y` cannot identify it with another
/// variable.
pub fn instantiate(
    h: &GroundTerm,
    y: Option<(&str, &FoTerm)>,
    xi: Option<&TypedVar>,
    g: Option<&GroundTerm>,
) -> GroundTerm {
    let mut body = h.clone();
    let mut target = xi.cloned();
    if let Some(v) = xi {
        let idx = 1 + h.max_index().max(g.map_or(0, GroundTerm::max_index)).max(v.index);
        let fresh = TypedVar::new(v.ty.clone(), idx);
        body = body.subst_typed(v, &GroundTerm::Var(fresh.clone()));
        target = Some(fresh);
    }
    if let Some((y, k)) = y {
        body = body.subst_individual(y, k);
        if let Some(t) = target.as_mut() {
            t.ty = t.ty.subst(y, k);
        }
    }
    match (target, g) {
        (Some(v), Some(g)) => body.subst_typed(&v, g),
        _ => body,
    }
}

fn witness_of(body: &Formula, x: &str, inst: &Formula, cx: &RhsContext<'_>) -> Result<FoTerm, ContractFailure> {
    match body.match_instance(x, inst) {
        InstanceMatch::Term(k) => Ok(k),
        InstanceMatch::Vacuous => cx.witness.cloned().ok_or(ContractFailure::Shape),
        _ => Err(ContractFailure::Shape),
    }
}

/// Fires `scheme` on the application `a`.
pub fn contract(scheme: Scheme, a: &App, cx: &RhsContext<'_>) -> Result<GroundTerm, ContractFailure> {
    use FamilyKind as K;
    match scheme {
        Scheme::AndProj(i) => {
            let pair = intro(&a.args[0], &[K::AndI])?;
            Ok(pair.args[(i - 1) as usize].clone())
        }
        Scheme::OrCase => {
            let inj = intro(&a.args[0], &[K::OrI1, K::OrI2])?;
            let branch = if inj.sym.family == K::OrI1 { 1 } else { 2 };
            let v = a.binds[branch].typed.first().ok_or(ContractFailure::Shape)?;
            Ok(instantiate(&a.args[branch], None, Some(v), Some(&inj.args[0])))
        }
        Scheme::ImpBeta => {
            let lam = intro(&a.args[0], &[K::ImpI])?;
            let v = lam.binds[0].typed.first().ok_or(ContractFailure::Shape)?;
            Ok(instantiate(&lam.args[0], None, Some(v), Some(&a.args[1])))
        }
        Scheme::AllInst => {
            let gen = intro(&a.args[0], &[K::AllI])?;
            let x = gen.binds[0].inds.first().ok_or(ContractFailure::Shape)?;
            let Formula::Forall(y, b) = &a.sym.optype.entries[0].head else {
                return Err(ContractFailure::Shape);
            };
            let k = witness_of(b, y, &a.sym.optype.codomain.head, cx)?;
            Ok(gen.args[0].subst_individual(x, &k))
        }
        Scheme::ExUnpack => {
            let pack = intro(&a.args[0], &[K::ExI])?;
            let Formula::Exists(x, body) = &pack.sym.optype.codomain.head else {
                return Err(ContractFailure::Shape);
            };
            let t = witness_of(body, x, &pack.sym.optype.entries[0].head, cx)?;
            let y = a.binds[1].inds.first().ok_or(ContractFailure::Shape)?;
            let v = a.binds[1].typed.first().ok_or(ContractFailure::Shape)?;
            Ok(instantiate(&a.args[1], Some((y, &t)), Some(v), Some(&pack.args[0])))
        }
        Scheme::IndRec => {
            let y = a.binds[1].inds.first().ok_or(ContractFailure::Shape)?;
            let v = a.binds[1].typed.first().ok_or(ContractFailure::Shape)?;
            let n = match v.ty.match_instance(y, &a.sym.optype.codomain.head) {
                InstanceMatch::Term(n) => n.as_numeral().ok_or(ContractFailure::Shape)?,
                _ => return Err(ContractFailure::Shape),
            };
            if n == 0 {
                return Ok(a.args[0].clone());
            }
            let m = FoTerm::numeral(n - 1);
            let mut sym = a.sym.clone();
            Arc::make_mut(&mut sym.optype).codomain = PreType::bare(v.ty.subst(y, &m));
            let inner = GroundTerm::app(sym, a.binds.clone(), a.args.clone());
            Ok(instantiate(&a.args[1], Some((y, &m)), Some(v), Some(&inner)))
        }
        Scheme::DisjSyll => {
            let inj = intro(&a.args[0], &[K::OrI1, K::OrI2])?;
            if inj.sym.family == K::OrI1 {
                return Err(ContractFailure::Inconsistent);
            }
            Ok(inj.args[0].clone())
        }
        Scheme::DisjSyllComposite => {
            let Formula::Or(l, r) = &a.sym.optype.entries[0].head else {
                return Err(ContractFailure::Shape);
            };
            let (alpha, beta) = (l.as_ref(), r.as_ref());
            Ok(ds_composite(alpha, beta, &a.args[0], &a.args[1], cx))
        }
        Scheme::IffIntro => {
            let (f, g) = (&a.sym.optype.entries[0].head, &a.sym.optype.entries[1].head);
            let sym = cx.relabel(build::and_i(f, g));
            Ok(GroundTerm::apply(sym, a.args.clone()))
        }
        Scheme::IffElim(i) => {
            let (alpha, beta) = iff_parts(&a.sym.optype.entries[0].head).ok_or(ContractFailure::Shape)?;
            let (fwd, bwd) = (Formula::imp(alpha.clone(), beta.clone()), Formula::imp(beta.clone(), alpha.clone()));
            let proj = cx.relabel(build::and_e(i, &fwd, &bwd));
            let (from, to) = if i == 1 { (alpha, beta) } else { (beta, alpha) };
            let arrow = GroundTerm::apply(proj, vec![a.args[0].clone()]);
            let app = cx.relabel(build::imp_e(from, to));
            Ok(GroundTerm::apply(app, vec![arrow, a.args[1].clone()]))
        }
        Scheme::EmptyFn => match &a.args[0] {
            GroundTerm::Var(_) => Err(ContractFailure::Shape),
            _ => Err(ContractFailure::Inconsistent),
        },
    }
}

/// `∨E[α∨β; α ⊢ β; β ⊢ β > β](major, ξ^α.⊥_β(→E(minor, ξ^α)), ξ^β.ξ^β)`.
pub fn ds_composite(
    alpha: &Formula,
    beta: &Formula,
    major: &GroundTerm,
    minor: &GroundTerm,
    cx: &RhsContext<'_>,
) -> GroundTerm {
    let k = 1 + major.max_index().max(minor.max_index());
    let xa = TypedVar::new(alpha.clone(), k);
    let xb = TypedVar::new(beta.clone(), k);
    let imp = cx.relabel(build::imp_e(alpha, &Formula::Bot));
    let absurd = GroundTerm::apply(imp, vec![minor.clone(), GroundTerm::Var(xa.clone())]);
    let bot = GroundTerm::apply(cx.relabel(build::bot_e(beta)), vec![absurd]);
    GroundTerm::app(
        cx.relabel(build::or_e(alpha, beta, beta)),
        vec![Binding::none(), Binding::typed(xa), Binding::typed(xb.clone())],
        vec![major.clone(), bot, GroundTerm::Var(xb)],
    )
}

/// Generic redexes for a scheme at a symbol of `label`, over fresh atoms.
pub fn generic_redexes(scheme: Scheme, label: &str, cx: &RhsContext<'_>) -> Vec<GroundTerm> {
    let a = Formula::prop("_A");
    let b = Formula::prop("_B");
    let c = Formula::prop("_C");
    let v = |f: &Formula, i: u32| GroundTerm::var(f.clone(), i);
    let tv = |f: &Formula, i: u32| TypedVar::new(f.clone(), i);
    let own = |mut s: OpSymbol| {
        s.label = label.to_string();
        s
    };
    let pair = || GroundTerm::apply(cx.relabel(build::and_i(&a, &b)), vec![v(&a, 1), v(&b, 1)]);
    match scheme {
        Scheme::AndProj(i) => vec![GroundTerm::apply(own(build::and_e(i, &a, &b)), vec![pair()])],
        Scheme::OrCase => [1u8, 2]
            .iter()
            .map(|&i| {
                let inj =
                    GroundTerm::apply(cx.relabel(build::or_i(i, &a, &b)), vec![v(if i == 1 { &a } else { &b }, 1)]);
                GroundTerm::app(
                    own(build::or_e(&a, &b, &c)),
                    vec![Binding::none(), Binding::typed(tv(&a, 2)), Binding::typed(tv(&b, 2))],
                    vec![inj, v(&c, 1), v(&c, 2)],
                )
            })
            .collect(),
        Scheme::ImpBeta => {
            let lam =
                GroundTerm::app(cx.relabel(build::imp_i(&a, &a)), vec![Binding::typed(tv(&a, 2))], vec![v(&a, 2)]);
            vec![GroundTerm::apply(own(build::imp_e(&a, &a)), vec![lam, v(&a, 1)])]
        }
        Scheme::AllInst => {
            let px = Formula::atom("_P", vec![FoTerm::var("x")]);
            let c0 = cx.witness.cloned().unwrap_or(FoTerm::constant("_c"));
            let body = GroundTerm::app(
                cx.relabel(build::all_i("x", &Formula::imp(px.clone(), px.clone()), "x")),
                vec![Binding::ind("x")],
                vec![GroundTerm::app(
                    cx.relabel(build::imp_i(&px, &px)),
                    vec![Binding::typed(tv(&px, 1))],
                    vec![v(&px, 1)],
                )],
            );
            vec![GroundTerm::apply(own(build::all_e("x", &Formula::imp(px.clone(), px), &c0)), vec![body])]
        }
        Scheme::ExUnpack => {
            let px = Formula::atom("_P", vec![FoTerm::var("x")]);
            let py = px.subst("x", &FoTerm::var("y"));
            let c0 = cx.witness.cloned().unwrap_or(FoTerm::constant("_c"));
            let pack = GroundTerm::apply(cx.relabel(build::ex_i("x", &px, &c0)), vec![v(&px.subst("x", &c0), 1)]);
            let repack = GroundTerm::apply(cx.relabel(build::ex_i("x", &px, &FoTerm::var("y"))), vec![v(&py, 2)]);
            let goal = Formula::exists("x", px.clone());
            vec![GroundTerm::app(
                own(build::ex_e("x", &px, "y", &goal)),
                vec![Binding::none(), Binding::both("y", tv(&py, 2))],
                vec![pack, repack],
            )]
        }
        Scheme::IndRec => {
            let py = Formula::atom("_P", vec![FoTerm::var("y")]);
            let dy = Formula::imp(py.clone(), py);
            let refl = |f: &Formula| {
                let Formula::Imp(a, _) = f else { unreachable!() };
                GroundTerm::app(cx.relabel(build::imp_i(a, a)), vec![Binding::typed(tv(a, 3))], vec![v(a, 3)])
            };
            let g = refl(&dy.subst("y", &FoTerm::zero()));
            let h = refl(&dy.subst("y", &FoTerm::succ(FoTerm::var("y"))));
            (0..3)
                .map(|n| {
                    GroundTerm::app(
                        own(build::ind("y", &dy, n)),
                        vec![Binding::none(), Binding::both("y", tv(&dy, 2))],
                        vec![g.clone(), h.clone()],
                    )
                })
                .collect()
        }
        Scheme::DisjSyll | Scheme::DisjSyllComposite => {
            let inj = GroundTerm::apply(cx.relabel(build::or_i(2, &a, &b)), vec![v(&b, 1)]);
            vec![GroundTerm::apply(own(build::disj_syll(&a, &b)), vec![inj, v(&Formula::not(a.clone()), 1)])]
        }
        Scheme::IffIntro => vec![GroundTerm::apply(
            own(build::iff_i(&a, &b)),
            vec![v(&Formula::imp(a.clone(), b.clone()), 1), v(&Formula::imp(b.clone(), a.clone()), 1)],
        )],
        Scheme::IffElim(i) => {
            let from = if i == 1 { &a } else { &b };
            vec![GroundTerm::apply(own(build::iff_e(i, &a, &b)), vec![v(&build::iff(&a, &b), 1), v(from, 1)])]
        }
        Scheme::EmptyFn => Vec::new(),
    }
}
