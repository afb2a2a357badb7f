use super::*;

fn data(f: &str) -> String {
    format!("{}/data/{f}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("groundc").chain(args.iter().copied())).unwrap()
}

fn batch(args: &[&str]) -> Result<Outcome, CliError> {
    run(&mut Session::new(Config::default()), &cli(args))
}

#[test]
fn check_prints_the_judgment() {
    let out = batch(&["check", &data("identity.gterm")]).unwrap();
    assert_eq!((out.code, out.text.as_str()), (exit::OK, "⊢ p -> p\n"));
}

#[test]
fn static_errors_exit_two() {
    let e = batch(&["--lang", "ha", "check", &data("forall_counterexample.gterm")]).unwrap_err();
    assert_eq!(e.code, exit::STATIC);
    assert!(e.message.contains("eigenvariable `x`") && e.message.contains("ξ^{x = 0}"), "{}", e.message);
    assert!(batch(&["--lang", "ha", "check", &data("forall_legal.gterm")]).is_ok());
    let e = batch(&["check", &data("unknown_delta.gterm")]).unwrap_err();
    assert_eq!(e.code, exit::STATIC);
    assert!(e.message.contains("unknown derivation name"));
    let e = batch(&["check", "andI[p > p"]).unwrap_err();
    assert_eq!(e.code, exit::STATIC);
}

#[test]
fn normalize_codes() {
    let props = data("props.glang");
    let out = batch(&["--lang", &props, "normalize", &data("andE1_pair.gterm")]).unwrap();
    assert_eq!(out.text, "delta d1\n");
    let e = batch(&["--lang", &data("ds.glang"), "normalize", &data("ds.gterm")]).unwrap_err();
    assert_eq!(e.code, exit::USAGE);
    let e = batch(&["--lang", "ha", "--fuel", "2", "normalize", &data("ind3.gterm")]).unwrap_err();
    assert_eq!(e.code, exit::RESOURCE);
    let e = batch(&["check", "/nonexistent/x.gterm"]).unwrap_err();
    assert_eq!(e.code, exit::USAGE);
}

#[test]
fn induction_trace_unfolds_each_numeral() {
    let out = batch(&["--lang", "ha", "normalize", "--trace", &data("ind3.gterm")]).unwrap();
    let lines: Vec<&str> = out.text.lines().collect();
    let unfolds = lines.iter().filter(|l| l.split_whitespace().nth(2) == Some("Ind")).count();
    // n = 3, 2, 1 and the base case.
    assert_eq!(unfolds, 4);
    let nf = lines.last().unwrap();
    assert!(nf.starts_with("andI[") && nf.contains("delta (plus1 {t=s(s(s(0)))})"), "{nf}");
}

#[test]
fn ds_pair_is_equivalent_but_distinct() {
    let ds = data("ds.glang");
    let (a, b) = (data("ds.gterm"), data("ds_composite.gterm"));
    let out = batch(&["--lang", &ds, "equiv", &a, &b]).unwrap();
    let Some(n) = out.text.strip_prefix("equiv: Equivalent(").and_then(|s| s.strip_suffix(" instances)\n")) else {
        panic!("{}", out.text)
    };
    assert!(n.parse::<usize>().unwrap() >= 10);
    assert_eq!(batch(&["--lang", &ds, "ident", &a, &b]).unwrap().text, "ident: Distinct\n");
    assert_eq!(batch(&["--lang", &ds, "ident", &a, &a]).unwrap().text, "ident: Identical\n");
    let e = batch(&["equiv", &data("identity.gterm"), &data("identity_q.gterm")]).unwrap_err();
    assert_eq!(e.code, exit::STATIC);
    let e = batch(&["ident", &data("identity.gterm"), &data("identity_q.gterm")]).unwrap_err();
    assert_eq!(e.code, exit::STATIC);
}

#[test]
fn fewer_samples_probe_fewer_instances() {
    let ds = data("ds.glang");
    let out =
        batch(&["--lang", &ds, "equiv", &data("ds.gterm"), &data("ds_composite.gterm"), "--samples", "5"]).unwrap();
    assert_eq!(out.text, "equiv: Equivalent(5 instances)\n");
}

#[test]
fn suites_report_and_exit() {
    let out = batch(&["suite", "il-correctness"]).unwrap();
    assert_eq!(out.code, exit::OK);
    assert_eq!(out.report.items.len(), 13);
    let out = batch(&["--base", "ar", "--format", "records", "suite", "il"]).unwrap();
    assert_eq!(out.render(Format::Records).lines().count(), 13);
    let out = batch(&["suite", "denotation-theorem", "--term", &data("identity.gterm")]).unwrap();
    assert!(out.report.all_passed());
    assert_eq!(batch(&["suite", "denotation"]).unwrap_err().code, exit::USAGE);
}

#[test]
fn a_failing_item_exits_one() {
    let mut r = Report::new("x");
    r.push(Item::new("a", "bad", false));
    assert_eq!(Outcome::suite(r).code, exit::SUITE);
}

#[test]
fn classify_from_the_command_line() {
    let out = batch(&["classify", "core", "gen", "--type", "p & q -> p"]).unwrap();
    assert!(out.text.starts_with("primitive=false, GapFound:"), "{}", out.text);
    assert_eq!(batch(&["classify", "gen", "core"]).unwrap_err().code, exit::USAGE);
    assert_eq!(batch(&["classify", "core", "gen", "--type", "p &"]).unwrap_err().code, exit::STATIC);
}

#[test]
fn languages_follow_the_base_flag() {
    let mut s = Session::new(Config::default());
    assert_eq!(s.language().lang.base.name, "empty");
    s.set_base("ar").unwrap();
    assert_eq!(s.language().lang.base.name, "ar");
    s.use_language(&data("ds.glang")).unwrap();
    assert_eq!(s.language().lang.base.name, "ds");
    assert!(s.language().lang.deltas.contains_key("qa"));
    assert!(s.set_base("/nonexistent.base").is_err());
}

#[test]
fn named_terms_stay_with_their_language() {
    let mut s = Session::new(Config::default());
    s.use_language(&data("ds.glang")).unwrap();
    let t = s.term("delta qa").unwrap();
    s.define("g", t.clone());
    assert_eq!(s.term("g").unwrap(), t);
    s.use_language("gen").unwrap();
    assert_eq!(s.term("g").unwrap_err().code, exit::USAGE);
}

fn repl(script: &str) -> (String, u8) {
    let mut s = Session::new(Config::default());
    let mut out = Vec::new();
    let code = run_repl(&mut s, script.as_bytes(), &mut out, false).unwrap();
    (String::from_utf8(out).unwrap(), code)
}

#[test]
fn repl_matches_batch_mode() {
    let (ds, a, b) = (data("ds.glang"), data("ds.gterm"), data("ds_composite.gterm"));
    let script = format!(":load {ds}\n:load {a}\n:let comp = {b}\nequiv ds comp\nident ds comp\ncheck ds\n");
    let (out, code) = repl(&script);
    let want = [
        batch(&["--lang", &ds, "equiv", &a, &b]).unwrap().text,
        batch(&["--lang", &ds, "ident", &a, &b]).unwrap().text,
        batch(&["--lang", &ds, "check", &a]).unwrap().text,
    ]
    .concat();
    assert_eq!(out, format!("language ds\nds defined\ncomp defined\n{want}"));
    assert_eq!(code, exit::OK);
}

#[test]
fn repl_errors_do_not_stop_the_loop() {
    let (out, code) = repl("frob\n:bogus\nrepl\ncheck \"delta nope\"\n// comment\n\ncheck 'impI[p |- p > p -> p]{bind 1: $v:[p]#1}($v:[p]#1)'\n");
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with("error: ")).collect();
    assert_eq!(lines.len(), 4, "{out}");
    assert!(!out.contains("error: error:"));
    assert!(out.ends_with("⊢ p -> p\n"));
    assert_eq!(code, exit::OK);
    let (out, code) = repl("check 'delta nope'\n:quit\ncheck x\n");
    assert_eq!(out.lines().count(), 1);
    assert_eq!(code, exit::STATIC);
}

#[test]
fn global_flags_persist_in_the_repl() {
    let (out, _) = repl("--lang ha check 'delta (plus1 {t=0})'\ncheck 'delta (eqR {t=0})'\n--format records check 'delta (eqR {t=0})'\n");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "⊢ 0 + 0 = 0");
    assert_eq!(lines[1], "⊢ 0 = 0");
    assert!(lines[2].starts_with("{\"id\":\"check\""));
}
