use std::sync::Arc;

use crate::base::{AtomicBase, Derivation};
use crate::logic::{parse_formula, FoTerm, Formula, Signature};

use super::build::*;
use super::*;

fn f(s: &str) -> Formula {
    parse_formula(s, &Signature::arithmetic().union(&Signature::propositional())).unwrap()
}

fn fp(s: &str) -> Formula {
    parse_formula(s, &Signature::propositional()).unwrap()
}

fn var(ty: &Formula, i: u32) -> GroundTerm {
    GroundTerm::var(ty.clone(), i)
}

fn tv(ty: &Formula, i: u32) -> TypedVar {
    TypedVar::new(ty.clone(), i)
}

fn gen_empty() -> GroundingLanguage {
    GroundingLanguage::make(LanguageKind::Gen, Arc::new(AtomicBase::builtin("empty").unwrap())).unwrap()
}

fn gen_ar() -> GroundingLanguage {
    let mut l = GroundingLanguage::make(LanguageKind::Ha, Arc::new(AtomicBase::arithmetic())).unwrap();
    l.add_delta("d0", Derivation::axiom("plus1", &[("t", FoTerm::zero())])).unwrap();
    l
}

fn identity(a: &Formula, i: u32) -> GroundTerm {
    GroundTerm::app(imp_i(a, a), vec![Binding::typed(tv(a, i))], vec![var(a, i)])
}

#[test]
fn fv_individual_examples() {
    let x0 = f("x = 0");
    let t = GroundTerm::app(all_i("x", &x0, "y"), vec![Binding::ind("x")], vec![var(&x0, 1)]);
    assert!(t.fv_individual().is_empty());
    assert_eq!(var(&f("x = y"), 1).fv_individual().into_iter().collect::<Vec<_>>(), vec!["x", "y"]);
    let d = GroundTerm::inline(Derivation::axiom("plus1", &[("t", FoTerm::zero())]));
    let pair = GroundTerm::apply(and_i(&x0, &f("0 + 0 = 0")), vec![var(&x0, 1), d]);
    assert_eq!(pair.fv_individual().into_iter().collect::<Vec<_>>(), vec!["x"]);
}

#[test]
fn fv_typed_examples() {
    let p = fp("p");
    assert!(identity(&p, 1).fv_typed().is_empty());
    let pq = fp("p & q");
    let t = GroundTerm::apply(and_e(1, &p, &fp("q")), vec![var(&pq, 1)]);
    assert_eq!(t.fv_typed().into_iter().collect::<Vec<_>>(), vec![tv(&pq, 1)]);
    let pp = fp("p | p");
    let t = GroundTerm::app(
        or_e(&p, &p, &p),
        vec![Binding::none(), Binding::typed(tv(&p, 1)), Binding::typed(tv(&p, 1))],
        vec![var(&pp, 1), var(&p, 1), var(&p, 1)],
    );
    assert_eq!(t.fv_typed().into_iter().collect::<Vec<_>>(), vec![tv(&pp, 1)]);
}

#[test]
fn typecheck_examples() {
    let lang = gen_empty();
    let p = fp("p");
    let j = typecheck(&identity(&p, 1), &lang).unwrap();
    assert!(j.is_closed());
    assert_eq!(j.codomain, fp("p -> p"));
    assert_eq!(j.to_string(), "⊢ p -> p");
    let pq = fp("p & q");
    let t = GroundTerm::apply(and_e(1, &p, &fp("q")), vec![var(&pq, 1)]);
    let j = typecheck(&t, &lang).unwrap();
    assert_eq!(j.context(), vec![pq]);
    assert_eq!(j.codomain, p);
}

#[test]
fn universal_introduction_counterexample() {
    let lang = gen_ar();
    let x0 = f("x = 0");
    let bad = GroundTerm::app(all_i("x", &x0, "x"), vec![Binding::ind("x")], vec![var(&x0, 1)]);
    let e = typecheck(&bad, &lang).unwrap_err();
    match &e.kind {
        TypeErrorKind::Eigenvariable { var, typed, .. } => {
            assert_eq!(var, "x");
            assert_eq!(typed.ty, x0);
        }
        other => panic!("unexpected {other:?}"),
    }
    let msg = e.to_string();
    assert!(msg.contains("`x`") && msg.contains("ξ^{x = 0}"), "{msg}");
    let body = f("x = 0 -> x = 0");
    let good = GroundTerm::app(all_i("x", &body, "x"), vec![Binding::ind("x")], vec![identity(&x0, 1)]);
    let j = typecheck(&good, &lang).unwrap();
    assert_eq!(j.codomain, f("forall x. x = 0 -> x = 0"));
    assert!(j.is_closed());
}

#[test]
fn eigenvariable_must_not_reach_the_codomain() {
    let lang = gen_ar();
    let px = f("x = 0");
    let ex = f("exists y. y = 0");
    // exE over ∃y.y=0 whose minor returns its own assumption ξ^{x=0}.
    let sym = ex_e("y", &f("y = 0"), "x", &px);
    let t = GroundTerm::app(sym, vec![Binding::none(), Binding::both("x", tv(&px, 1))], vec![var(&ex, 2), var(&px, 1)]);
    let e = typecheck(&t, &lang).unwrap_err();
    assert!(matches!(e.kind, TypeErrorKind::EigenvariableInCodomain { .. }), "{e}");
}

#[test]
fn entry_mismatch_names_the_entry() {
    let lang = gen_empty();
    let (p, q) = (fp("p"), fp("q"));
    let t = GroundTerm::apply(imp_e(&p, &q), vec![var(&fp("p -> q"), 1), var(&q, 2)]);
    let e = typecheck(&t, &lang).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::Mismatch { entry: 2, expected: p, found: q });
}

#[test]
fn unknown_symbols_and_bad_instances() {
    let g = GroundingLanguage::make(LanguageKind::Core, Arc::new(AtomicBase::builtin("empty").unwrap())).unwrap();
    let (p, q) = (fp("p"), fp("q"));
    let t = GroundTerm::apply(and_e(1, &p, &q), vec![var(&fp("p & q"), 1)]);
    assert!(matches!(typecheck(&t, &g).unwrap_err().kind, TypeErrorKind::UnknownSymbol(_)));
    let mut sym = and_i(&p, &q);
    Arc::make_mut(&mut sym.optype).codomain.head = fp("q & p");
    let t = GroundTerm::apply(sym, vec![var(&p, 1), var(&q, 1)]);
    assert!(matches!(typecheck(&t, &g).unwrap_err().kind, TypeErrorKind::BadInstance { .. }));
}

#[test]
fn universal_elimination_needs_an_individual() {
    let lang = gen_ar();
    let body = f("x + 0 = x");
    let ok = GroundTerm::apply(all_e("x", &body, &FoTerm::numeral(2)), vec![var(&f("forall x. x + 0 = x"), 1)]);
    assert!(typecheck(&ok, &lang).is_ok());
    let bad = GroundTerm::apply(
        all_e("x", &body, &FoTerm::plus(FoTerm::zero(), FoTerm::zero())),
        vec![var(&f("forall x. x + 0 = x"), 1)],
    );
    assert!(matches!(typecheck(&bad, &lang).unwrap_err().kind, TypeErrorKind::BadInstance { .. }));
}

#[test]
fn existential_introduction_rejects_capture() {
    let lang = gen_ar();
    // ∃y ∀x (y = x) from ∀x (x = x): the witness x would be captured.
    let sym = OpSymbol::of(
        FamilyKind::ExI,
        crate::logic::OpType::simple(vec![f("forall x. x = x")], f("exists y. forall x. y = x")),
    );
    let t = GroundTerm::apply(sym, vec![var(&f("forall x. x = x"), 1)]);
    let e = typecheck(&t, &lang).unwrap_err();
    assert!(matches!(e.kind, TypeErrorKind::BadInstance { reason: InstanceError::Capture(_), .. }), "{e}");
}

#[test]
fn induction_binds_on_the_second_entry() {
    let lang = gen_ar();
    let d = f("y + 0 = y");
    let step = GroundTerm::inline(Derivation::axiom("plus1", &[("t", FoTerm::succ(FoTerm::var("y")))]));
    let t = GroundTerm::app(
        ind("y", &d, 3),
        vec![Binding::none(), Binding::both("y", tv(&d, 1))],
        vec![GroundTerm::delta("d0", lang.deltas["d0"].clone()), step],
    );
    let j = typecheck(&t, &lang).unwrap();
    assert!(j.is_closed());
    assert_eq!(j.codomain, f("3 + 0 = 3"));
}

#[test]
fn unknown_delta_names() {
    let lang = gen_ar();
    let fake = GroundTerm::delta("nope", Arc::new(Derivation::axiom("plus1", &[("t", FoTerm::zero())])));
    assert_eq!(typecheck(&fake, &lang).unwrap_err().kind, TypeErrorKind::UnknownDelta("nope".into()));
    let e = parse_gterm("delta nope", &lang).unwrap_err();
    assert!(e.message.contains("unknown derivation name"));
}

#[test]
fn subst_typed_examples() {
    let p = fp("p");
    let d = GroundTerm::var(fp("q"), 9);
    assert_eq!(var(&p, 1).subst_typed(&tv(&p, 1), &d), d);
    let id = identity(&p, 1);
    assert_eq!(id.subst_typed(&tv(&p, 1), &d), id);
    let q = fp("q");
    let pair = GroundTerm::apply(and_i(&p, &q), vec![var(&p, 1), var(&q, 1)]);
    let t = GroundTerm::apply(and_e(1, &p, &q), vec![var(&fp("p & q"), 3)]);
    let out = pair.subst_typed(&tv(&p, 1), &t);
    assert_eq!(out, GroundTerm::apply(and_i(&p, &q), vec![t, var(&q, 1)]));
}

#[test]
fn subst_typed_avoids_capturing_typed_variables() {
    let p = fp("p");
    let q = fp("q");
    // →I ξ^p_1 (∧I(ξ^p_1, ξ^q_1)) with ξ^q_1 := ξ^p_1 must not capture.
    let body = GroundTerm::apply(and_i(&p, &q), vec![var(&p, 1), var(&q, 1)]);
    let t = GroundTerm::app(imp_i(&p, &fp("p & q")), vec![Binding::typed(tv(&p, 1))], vec![body]);
    let pq = fp("p -> q");
    let u = GroundTerm::apply(imp_e(&p, &q), vec![var(&pq, 5), var(&p, 1)]);
    let out = t.subst_typed(&tv(&q, 1), &u);
    let lang = gen_empty();
    let j = typecheck(&out, &lang).unwrap();
    assert_eq!(out.fv_typed().into_iter().collect::<Vec<_>>(), vec![tv(&p, 1), tv(&pq, 5)]);
    assert_eq!(j.context().len(), 2);
}

#[test]
fn subst_individual_examples() {
    let x0 = f("x = 0");
    assert_eq!(var(&x0, 1).subst_individual("x", &FoTerm::zero()), var(&f("0 = 0"), 1));
    let body = f("x = 0 -> x = 0");
    let t = GroundTerm::app(all_i("x", &body, "x"), vec![Binding::ind("x")], vec![identity(&x0, 1)]);
    assert_eq!(t.subst_individual("x", &FoTerm::zero()), t);
    let ax = f("x + 0 = x");
    let ex = GroundTerm::apply(ex_i("y", &f("y + 0 = y"), &FoTerm::var("x")), vec![var(&ax, 1)]);
    let k = FoTerm::numeral(1);
    let out = ex.subst_individual("x", &k);
    let expect = GroundTerm::apply(ex_i("y", &f("y + 0 = y"), &k), vec![var(&f("1 + 0 = 1"), 1)]);
    assert!(out.alpha_eq(&expect));
}

#[test]
fn subst_individual_renames_bound_eigenvariables() {
    let lang = gen_ar();
    // ∀I z (ξ^{z = z} ... ) style: ∀I binding y over a term mentioning free x.
    let a = f("y + x = y + x -> y + x = y + x");
    let inner = identity(&f("y + x = y + x"), 1);
    let t = GroundTerm::app(all_i("y", &a, "y"), vec![Binding::ind("y")], vec![inner]);
    let j = typecheck(&t, &lang).unwrap();
    assert_eq!(j.free_inds.iter().cloned().collect::<Vec<_>>(), vec!["x"]);
    let out = t.subst_individual("x", &FoTerm::var("y"));
    let j2 = typecheck(&out, &lang).unwrap();
    assert_eq!(j2.codomain, f("forall w. w + y = w + y -> w + y = w + y"));
    assert_eq!(j2.free_inds.iter().cloned().collect::<Vec<_>>(), vec!["y"]);
}

#[test]
fn alpha_eq_reindexing() {
    let p = fp("p");
    assert!(identity(&p, 1).alpha_eq(&identity(&p, 2)));
    let pp = fp("p -> p");
    let ppp = fp("p -> p -> p");
    let left = GroundTerm::app(imp_i(&p, &pp), vec![Binding::typed(tv(&p, 2))], vec![identity(&p, 1)]);
    let inner = GroundTerm::app(imp_i(&p, &p), vec![Binding::typed(tv(&p, 2))], vec![var(&p, 1)]);
    let right = GroundTerm::app(imp_i(&p, &pp), vec![Binding::typed(tv(&p, 1))], vec![inner]);
    assert_eq!(typecheck(&left, &gen_empty()).unwrap().codomain, ppp);
    assert!(!left.alpha_eq(&right));
    assert!(left.alpha_eq(&left));
}

#[test]
fn canonical_heads() {
    let ar = gen_ar();
    let d = GroundTerm::delta("d0", ar.deltas["d0"].clone());
    assert!(d.is_canonical());
    let e = f("0 + 0 = 0");
    let pair = GroundTerm::apply(and_i(&e, &e), vec![d.clone(), d.clone()]);
    assert!(pair.is_canonical());
    let proj = GroundTerm::apply(and_e(1, &e, &e), vec![pair]);
    assert!(!proj.is_canonical());
}

#[test]
fn gterm_round_trip() {
    let lang = gen_ar();
    let d = f("y + 0 = y");
    let step = GroundTerm::inline(Derivation::axiom("plus1", &[("t", FoTerm::succ(FoTerm::var("y")))]));
    let t = GroundTerm::app(
        ind("y", &d, 2),
        vec![Binding::none(), Binding::both("y", tv(&d, 1))],
        vec![GroundTerm::delta("d0", lang.deltas["d0"].clone()), step],
    );
    let text = t.to_string();
    let back = parse_gterm(&text, &lang).unwrap();
    assert_eq!(back, t, "{text}");
    let id = parse_gterm("impI[p |- p > p -> p]{bind 1: $v:[p]#1}($v:[p]#1)", &gen_empty()).unwrap();
    assert_eq!(id, identity(&fp("p"), 1));
}

#[test]
fn glang_files() {
    let text = "lang ds\nbase empty\nkind gen\nsymbol DS DS // syllogism\nscheme DS ds-direct\n";
    let decl = parse_glang(text).unwrap();
    assert_eq!(decl.base, Some(BaseRef::Builtin("empty".into())));
    let lang = build_language(&decl, Arc::new(AtomicBase::builtin("empty").unwrap())).unwrap();
    assert_eq!(lang.family("DS"), Some(FamilyKind::DisjSyll));
    assert_eq!(decl.schemes, vec![("DS".to_string(), "ds-direct".to_string())]);
    assert!(parse_glang("symbol X nofamily\n").is_err());
}
