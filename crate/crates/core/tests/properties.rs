//! Invariants over generated formulas, derivations and ground terms.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use groundc::analysis::{merge_languages, relabel, universal_term};
use groundc::base::{base_expansion, parse_base, AtomicBase, AtomicRule, AtomicSystem, Derivation};
use groundc::enumerate::{Enumerator, RandomConfig, RandomTerms, SearchConfig};
use groundc::eval::{
    canonical_everywhere, equivalent, identical, normalize, normalize_observed, step, DenotationMap, EvalConfig,
    ProbeConfig, Scheme, Verdict,
};
use groundc::ground::build::*;
use groundc::ground::{typecheck, Binding, FamilyKind, GroundTerm, GroundingLanguage, LanguageKind, TypedVar};
use groundc::logic::{parse_formula, FoTerm, Formula, Signature};

// Formulas over the default propositional signature.

fn fo_term() -> impl Strategy<Value = FoTerm> {
    prop_oneof![prop::sample::select(vec!["x", "y", "z"]).prop_map(FoTerm::var), Just(FoTerm::constant("c")),]
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bot),
        prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::prop),
        (prop::sample::select(vec!["P", "Q"]), fo_term()).prop_map(|(r, t)| Formula::atom(r, vec![t])),
        (fo_term(), fo_term()).prop_map(|(a, b)| Formula::atom("R", vec![a, b])),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let var = prop::sample::select(vec!["x", "y", "z"]);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (var.clone(), inner.clone()).prop_map(|(x, a)| Formula::forall(x, a)),
            (var, inner).prop_map(|(x, a)| Formula::exists(x, a)),
        ]
    })
}

proptest! {
    #[test]
    fn formulas_print_and_parse_back(a in formula()) {
        let back = parse_formula(&a.to_string(), &Signature::propositional()).unwrap();
        prop_assert!(back.same_syntax(&a), "{a} came back as {back}");
    }

    #[test]
    fn substitution_moves_free_variables(a in formula(), x in prop::sample::select(vec!["x", "y", "z"]), t in fo_term()) {
        let mut want = a.free_vars();
        if want.remove(x) {
            want.extend(t.vars());
        }
        prop_assert_eq!(a.subst(x, &t).free_vars(), want);
    }

    #[test]
    fn substituting_a_variable_for_itself_is_the_identity(a in formula(), x in prop::sample::select(vec!["x", "y", "z"])) {
        prop_assert!(a.subst(x, &FoTerm::var(x)).same_syntax(&a));
    }
}

// Arithmetic derivations.

fn numeral() -> impl Strategy<Value = FoTerm> {
    (0u64..4).prop_map(FoTerm::numeral)
}

/// Closed derivations built from the axioms with `eqS` and `eqT`.
fn ar_derivation() -> impl Strategy<Value = Derivation> {
    let axiom = prop_oneof![
        numeral().prop_map(|t| Derivation::axiom("eqR", &[("t", t)])),
        numeral().prop_map(|t| Derivation::axiom("plus1", &[("t", t)])),
        numeral().prop_map(|t| Derivation::axiom("times1", &[("t", t)])),
        (numeral(), numeral()).prop_map(|(t, u)| Derivation::axiom("plus2", &[("t", t), ("u", u)])),
        (numeral(), numeral()).prop_map(|(t, u)| Derivation::axiom("times2", &[("t", t), ("u", u)])),
    ];
    axiom.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|d| {
                let (t, u) = sides(&d);
                Derivation::step("eqS", &[("t", t), ("u", u)], vec![d])
            }),
            inner.prop_map(|d| {
                // d : t = u and its reverse give t = t.
                let (t, u) = sides(&d);
                let back = Derivation::step("eqS", &[("t", t.clone()), ("u", u.clone())], vec![d.clone()]);
                Derivation::step("eqT", &[("t", t.clone()), ("u", u), ("z", t)], vec![d, back])
            }),
        ]
    })
}

fn sides(d: &Derivation) -> (FoTerm, FoTerm) {
    match d.check(&AtomicBase::arithmetic().system).unwrap() {
        Formula::Atom(_, args) => (args[0].clone(), args[1].clone()),
        f => panic!("not an equation: {f}"),
    }
}

fn nodes(d: &Derivation) -> usize {
    d.size()
}

fn at(d: &Derivation, mut k: usize) -> &Derivation {
    fn go<'a>(d: &'a Derivation, k: &mut usize) -> Option<&'a Derivation> {
        if *k == 0 {
            return Some(d);
        }
        *k -= 1;
        match d {
            Derivation::Assume(_) => None,
            Derivation::Step { premises, .. } => premises.iter().find_map(|p| go(p, k)),
        }
    }
    go(d, &mut k).unwrap()
}

fn replace_at(d: &Derivation, k: &mut usize, new: &Derivation) -> Derivation {
    if *k == 0 {
        *k = usize::MAX;
        return new.clone();
    }
    *k -= 1;
    match d {
        Derivation::Assume(_) => d.clone(),
        Derivation::Step { rule, inst, premises } => Derivation::Step {
            rule: rule.clone(),
            inst: inst.clone(),
            premises: premises
                .iter()
                .map(|p| if *k == usize::MAX { p.clone() } else { replace_at(p, k, new) })
                .collect(),
        },
    }
}

#[derive(Clone, Debug)]
enum Corruption {
    Rule(&'static str),
    Inst(FoTerm),
    DropPremise,
}

fn corrupt(d: &Derivation, how: &Corruption) -> Derivation {
    let Derivation::Step { rule, inst, premises } = d else { return d.clone() };
    let (mut rule, mut inst, mut premises) = (rule.clone(), inst.clone(), premises.clone());
    match how {
        Corruption::Rule(r) => rule = r.to_string(),
        Corruption::Inst(t) => {
            if let Some(v) = inst.values_mut().next() {
                *v = t.clone();
            }
        }
        Corruption::DropPremise => {
            premises.pop();
        }
    }
    Derivation::Step { rule, inst, premises }
}

fn corruption() -> impl Strategy<Value = Corruption> {
    prop_oneof![
        prop::sample::select(vec!["eqR", "eqS", "eqT", "plus1", "plus2", "times1", "times2", "s2"])
            .prop_map(Corruption::Rule),
        numeral().prop_map(Corruption::Inst),
        Just(Corruption::DropPremise),
    ]
}

fn rule_pool() -> Vec<AtomicRule> {
    let sig = Signature::propositional();
    let f = |s: &str| parse_formula(s, &sig).unwrap();
    vec![
        AtomicRule::new("pa", vec![], f("p")).unwrap(),
        AtomicRule::new("qa", vec![], f("q")).unwrap(),
        AtomicRule::new("pq", vec![f("p")], f("q")).unwrap(),
        AtomicRule::new("qr", vec![f("q")], f("r")).unwrap(),
        AtomicRule::new("Pc", vec![], f("P(c)")).unwrap(),
        AtomicRule::new("PQ", vec![f("P(t)")], f("Q(t)")).unwrap(),
    ]
}

fn base_of(mask: u8) -> AtomicBase {
    let rules: Vec<AtomicRule> =
        rule_pool().into_iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, r)| r).collect();
    let mut b = AtomicBase::empty(Signature::propositional());
    b.system = AtomicSystem::new(b.signature.clone(), rules).unwrap();
    b
}

proptest! {
    #[test]
    fn corrupted_derivations_fail_unless_the_subtree_conclusion_survives(d in ar_derivation(), k in any::<prop::sample::Index>(), how in corruption()) {
        let sys = AtomicBase::arithmetic().system;
        let k = k.index(nodes(&d));
        let sub = at(&d, k);
        let bad_sub = corrupt(sub, &how);
        let bad = replace_at(&d, &mut k.clone(), &bad_sub);
        let whole = bad.check(&sys).ok() == d.check(&sys).ok();
        let local = bad_sub.check(&sys).ok() == sub.check(&sys).ok();
        prop_assert_eq!(whole, local, "{:?} at node {} of {:?}", how, k, d);
    }

    #[test]
    fn closed_derivations_conclude_closed_atoms(d in ar_derivation()) {
        prop_assert!(d.is_closed());
        let c = d.check(&AtomicBase::arithmetic().system).unwrap();
        prop_assert!(c.is_atomic() && c.free_vars().is_empty());
    }

    #[test]
    fn base_expansion_is_reflexive_and_transitive(a in any::<u8>(), b in any::<u8>(), c in any::<u8>()) {
        let (b1, b2, b3) = (base_of(a), base_of(b), base_of(c));
        prop_assert!(base_expansion(&b1, &b1));
        if base_expansion(&b1, &b2) && base_expansion(&b2, &b3) {
            prop_assert!(base_expansion(&b1, &b3));
        }
        // Nested rule sets always chain.
        let (n1, n2, n3) = (base_of(a), base_of(a | b), base_of(a | b | c));
        prop_assert!(base_expansion(&n1, &n2) && base_expansion(&n2, &n3) && base_expansion(&n1, &n3));
    }
}

// Ground terms.

fn gen_ar() -> GroundingLanguage {
    GroundingLanguage::make(LanguageKind::Gen, Arc::new(AtomicBase::arithmetic())).unwrap()
}

fn gen_props() -> GroundingLanguage {
    let base = parse_base("base props\nconsts c k\nrels p/0 q/0 r/0 P/1\nrule pa: => p\nrule qa: => q\nrule Pc: => P(c)\nrule pq: p => r\n");
    GroundingLanguage::make(LanguageKind::Gen, Arc::new(base.unwrap())).unwrap()
}

fn random_term(l: &GroundingLanguage, seed: u64, max_size: usize) -> GroundTerm {
    RandomTerms::new(l, RandomConfig { seed, max_size, ..RandomConfig::default() }).take(1).remove(0)
}

fn languages() -> impl Strategy<Value = GroundingLanguage> {
    prop_oneof![Just(()).prop_map(|_| gen_ar()), Just(()).prop_map(|_| gen_props())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn free_variables_match_the_judgment(l in languages(), seed in any::<u64>()) {
        let t = random_term(&l, seed, 24);
        for (path, s) in t.subterms() {
            let j = typecheck(s, &l).unwrap_or_else(|e| panic!("subterm at {path:?} of {t}: {e}"));
            prop_assert_eq!(&j.free_typed, &s.fv_typed());
            prop_assert_eq!(&j.free_inds, &s.fv_individual());
            // No weakening: the context is exactly the free assumptions.
            let mut ctx: Vec<Formula> = s.fv_typed().into_iter().map(|v| v.ty).collect();
            ctx.dedup();
            prop_assert_eq!(j.context().len(), ctx.len());
            prop_assert!(j.context().iter().all(|a| ctx.contains(a)));
            for v in s.fv_typed() {
                prop_assert!(v.ty.free_vars().is_subset(&j.free_inds), "{} escapes at {:?}", v.ty, path);
            }
            prop_assert!(j.codomain.free_vars().is_subset(&j.free_inds));
        }
    }

    #[test]
    fn typechecking_is_deterministic(l in languages(), seed in any::<u64>()) {
        let t = random_term(&l, seed, 24);
        prop_assert_eq!(typecheck(&t, &l).unwrap(), typecheck(&t, &l).unwrap());
    }

    #[test]
    fn conjunction_introduction_inverts(l in languages(), seed in any::<u64>()) {
        let t = random_term(&l, seed, 24);
        for (_, s) in t.subterms() {
            let GroundTerm::App(a) = s else { continue };
            if a.sym.family != FamilyKind::AndI {
                continue;
            }
            let j = typecheck(s, &l).unwrap();
            let Formula::And(x, y) = &j.codomain else { panic!("andI concludes {}", j.codomain) };
            let (j1, j2) = (typecheck(&a.args[0], &l).unwrap(), typecheck(&a.args[1], &l).unwrap());
            prop_assert!(j1.codomain == **x && j2.codomain == **y);
            prop_assert!(j1.free_typed.is_subset(&j.free_typed) && j2.free_typed.is_subset(&j.free_typed));
        }
    }

    #[test]
    fn reduction_preserves_judgments_and_reaches_canonical_forms(l in languages(), seed in any::<u64>()) {
        let map = DenotationMap::builtin(&l).unwrap();
        let t = random_term(&l, seed, 30);
        let j0 = typecheck(&t, &l).unwrap();
        let mut seen = Vec::new();
        let nf = normalize_observed(&t, &map, EvalConfig::default(), &mut |u, _| seen.push(typecheck(u, &l))).unwrap();
        for j in seen {
            let j = j.unwrap();
            prop_assert!(j.is_closed() && j.codomain == j0.codomain);
        }
        prop_assert!(canonical_everywhere(&nf.term));
        // Normal forms stay put, and reduction is a function.
        let again = normalize(&nf.term, &map, EvalConfig::default()).unwrap();
        prop_assert_eq!(again.steps, 0);
        prop_assert_eq!(&again.term, &nf.term);
        prop_assert_eq!(normalize(&t, &map, EvalConfig::default()).unwrap().term, nf.term);
        prop_assert_eq!(step(&t, &map).unwrap(), step(&t, &map).unwrap());
    }

    #[test]
    fn universality_is_hereditary_and_survives_normalization(l in languages(), seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let map = DenotationMap::builtin(&l).unwrap();
        // Random terms carry δs; enumerated ones of these types need not.
        let types = ["p -> p", "p & p -> p", "(p -> p) -> p -> p", "p -> p | p", "bot -> p"];
        let atom = if l.base.name == "ar" { "(0 = 0)" } else { "p" };
        let ty = types[seed as usize % types.len()].replace('p', atom);
        let ty = parse_formula(&ty, &l.base.signature).unwrap();
        let mut pool = Enumerator::new(&l, SearchConfig::default(), &[]).closed(&ty, 9, 60);
        pool.push(random_term(&l, seed, 24));
        let t = pick.get(&pool).clone();
        let u = universal_term(&t, &l, &map);
        prop_assert_eq!(u, t.subterms().iter().all(|(_, s)| universal_term(s, &l, &map)));
        if u {
            let nf = normalize(&t, &map, EvalConfig::default()).unwrap().term;
            prop_assert!(universal_term(&nf, &l, &map), "{t} normalizes to {nf}");
        }
    }
}

fn aliased() -> (GroundingLanguage, BTreeMap<String, String>) {
    let l = gen_ar()
        .with_symbol("fst", FamilyKind::AndE1)
        .unwrap()
        .with_symbol("snd", FamilyKind::AndE2)
        .unwrap()
        .with_symbol("app", FamilyKind::ImpE)
        .unwrap();
    let names = [("andE1", "fst"), ("andE2", "snd"), ("impE", "app")];
    (l, names.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect())
}

/// The DS language with `DS` read directly, and the pair that separates
/// identity from equivalence.
fn ds_pair() -> (GroundingLanguage, DenotationMap, GroundTerm, GroundTerm) {
    let base = parse_base("base ds\nconsts c\nrels p/0 q/0\nrule qa: => q\n").unwrap();
    let mut l = GroundingLanguage::make(LanguageKind::Gen, Arc::new(base))
        .unwrap()
        .with_symbol("DS", FamilyKind::DisjSyll)
        .unwrap()
        .with_symbol("empty", FamilyKind::EmptyFn)
        .unwrap();
    l.add_delta("qa", Derivation::axiom("qa", &[])).unwrap();
    let map = DenotationMap::builtin(&l).unwrap();
    let (p, q) = (Formula::prop("p"), Formula::prop("q"));
    let xi = TypedVar::new(p.clone(), 1);
    let refute = GroundTerm::app(
        imp_i(&p, &Formula::Bot),
        vec![Binding::typed(xi.clone())],
        vec![GroundTerm::apply(empty_fn(&p, &Formula::Bot), vec![GroundTerm::Var(xi)])],
    );
    let major = GroundTerm::apply(or_i(2, &p, &q), vec![GroundTerm::delta("qa", l.deltas["qa"].clone())]);
    let ds = GroundTerm::apply(disj_syll(&p, &q), vec![major.clone(), refute.clone()]);
    let (xp, xq) = (TypedVar::new(p.clone(), 9), TypedVar::new(q.clone(), 9));
    let comp = GroundTerm::app(
        or_e(&p, &q, &q),
        vec![Binding::none(), Binding::typed(xp.clone()), Binding::typed(xq.clone())],
        vec![
            major,
            GroundTerm::apply(
                bot_e(&q),
                vec![GroundTerm::apply(imp_e(&p, &Formula::Bot), vec![refute, GroundTerm::Var(xp)])],
            ),
            GroundTerm::Var(xq),
        ],
    );
    (l, map, ds, comp)
}

fn is_equivalent(v: &Verdict) -> bool {
    matches!(v, Verdict::Equivalent { .. })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identical_terms_are_equivalent(seed in any::<u64>()) {
        let (l, names) = aliased();
        let map = DenotationMap::builtin(&l).unwrap();
        let t = random_term(&l, seed, 16);
        let u = relabel(&t, &names, &BTreeMap::new());
        prop_assert!(identical(&t, &u, &l, &map));
        let v = equivalent(&t, &u, &l, &map, ProbeConfig::default(), EvalConfig::default()).unwrap();
        prop_assert!(is_equivalent(&v), "{v}");
    }

    #[test]
    fn equivalent_arguments_give_equivalent_applications(seed in any::<u64>(), shape in 0usize..5) {
        let (l, map, a, b) = ds_pair();
        let (p, q) = (Formula::prop("p"), Formula::prop("q"));
        let r = random_term(&l, seed, 10);
        let rt = typecheck(&r, &l).unwrap().codomain;
        let wrap = |h: &GroundTerm| match shape {
            0 => GroundTerm::apply(and_i(&q, &rt), vec![h.clone(), r.clone()]),
            1 => GroundTerm::apply(and_i(&rt, &q), vec![r.clone(), h.clone()]),
            2 => GroundTerm::apply(or_i(1, &q, &p), vec![h.clone()]),
            3 => GroundTerm::app(imp_i(&rt, &q), vec![Binding::typed(TypedVar::new(rt.clone(), 7))], vec![h.clone()]),
            _ => GroundTerm::apply(and_e(1, &q, &rt), vec![GroundTerm::apply(and_i(&q, &rt), vec![h.clone(), r.clone()])]),
        };
        let (ca, cb) = (wrap(&a), wrap(&b));
        let v = equivalent(&ca, &cb, &l, &map, ProbeConfig::default(), EvalConfig::default()).unwrap();
        prop_assert!(is_equivalent(&v), "{ca} against {cb}: {v}");
    }

    #[test]
    fn merging_keeps_both_judgments(seed in any::<u64>(), other in any::<u64>()) {
        let l1 = aliased().0.with_symbol("DS", FamilyKind::DisjSyll).unwrap();
        let m1 = DenotationMap::builtin(&l1).unwrap();
        // The same symbols, with `DS` read as its composite.
        let ls = l1.clone();
        let ms = DenotationMap::with_overrides(&ls, &[("DS".into(), "ds-composite".into())]).unwrap();
        prop_assert_eq!(ms.scheme("DS"), Some(Scheme::DisjSyllComposite));
        let t = random_term(&l1, seed, 16);
        let u = normalize(&random_term(&ls, other, 16), &ms, EvalConfig::default()).unwrap().term;
        let m = merge_languages(&l1, &m1, &ls, &ms, &t, &u).unwrap();
        prop_assert_eq!(m.minted, vec![("DS".to_string(), "DS_dag".to_string())]);
        prop_assert_eq!(typecheck(&t, &m.lang).unwrap(), typecheck(&t, &l1).unwrap());
        prop_assert_eq!(typecheck(&m.u, &m.lang).unwrap(), typecheck(&u, &ls).unwrap());
    }
}
