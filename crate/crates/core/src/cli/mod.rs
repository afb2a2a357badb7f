//! The `groundc` front end: argument parsing, one function per subcommand,
//! and a line-oriented REPL over the same dispatch.

mod repl;
mod session;

#[cfg(test)]
mod tests;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    canonical_closure_report, classify_expansion, expansion_examples, il_correctness_suite, universal_term,
    ClassifyError, SearchBounds,
};
use crate::eval::{
    check_denotation_theorem, equivalent, identical, normalize, EquivError, EvalError, ProbeConfig, Verdict,
};
use crate::ground::{parse_formula_in, typecheck, GroundTerm, Judgment};
use crate::report::{Item, Report};

pub use repl::run_repl;
pub use session::{strip_comments, Config, LoadedLanguage, NamedTerm, Session};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    /// A suite ran and some item failed.
    pub const SUITE: u8 = 1;
    /// Parse and type errors.
    pub const STATIC: u8 = 2;
    /// Fuel ran out.
    pub const RESOURCE: u8 = 3;
    /// Bad invocation, IO, open terms and other domain errors.
    pub const USAGE: u8 = 4;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "error: {}", self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

#[derive(Debug, Parser)]
#[command(name = "groundc", version, about = "Typecheck, evaluate and analyse ground-terms over atomic bases")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GlobalArgs {
    /// `ar`, `empty` or a `.base` file; the base of builtin languages.
    #[arg(long, global = true, value_name = "FILE")]
    pub base: Option<String>,
    /// `gen`, `core`, `ha` or a `.glang` file.
    #[arg(long, global = true, value_name = "FILE|gen|core|ha")]
    pub lang: Option<String>,
    /// Rewrite steps allowed per normalization; overrides GROUNDC_FUEL.
    #[arg(long, global = true, value_name = "N")]
    pub fuel: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for suites.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args, Default, Clone)]
pub struct ProbeArgs {
    /// Individuals tried per free individual variable.
    #[arg(long)]
    pub individuals: Option<usize>,
    /// Size bound for the closed grounds substituted for typed variables.
    #[arg(long)]
    pub ground_size: Option<usize>,
    /// Maximum number of instances probed.
    #[arg(long)]
    pub samples: Option<usize>,
}

impl ProbeArgs {
    fn apply(&self, mut p: ProbeConfig) -> ProbeConfig {
        p.individual_bound = self.individuals.unwrap_or(p.individual_bound);
        p.ground_size_bound = self.ground_size.unwrap_or(p.ground_size_bound);
        p.sample_count = self.samples.unwrap_or(p.sample_count);
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    #[value(alias = "il")]
    IlCorrectness,
    #[value(alias = "closure")]
    CanonicalClosure,
    #[value(alias = "denotation")]
    DenotationTheorem,
    #[value(alias = "expansions")]
    ExpansionExamples,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the judgment of a term.
    Check { term: String },
    /// Reduce a closed term to normal form.
    Normalize {
        term: String,
        /// Print every rewrite step.
        #[arg(long)]
        trace: bool,
    },
    /// Compare two terms extensionally on probed instances.
    Equiv {
        a: String,
        b: String,
        #[command(flatten)]
        probe: ProbeArgs,
    },
    /// Compare two terms up to the rules their labels denote.
    Ident { a: String, b: String },
    /// Decide the syntactic universality criterion for a term.
    Universal { term: String },
    /// Classify the expansion of one language by another.
    Classify {
        from: String,
        to: String,
        /// Size bound of the gap search.
        #[arg(long)]
        size: Option<usize>,
        /// Closed terms examined per searched type.
        #[arg(long)]
        per_type: Option<usize>,
        /// Restrict the gap search to these types; repeatable.
        #[arg(long = "type", value_name = "FORMULA")]
        types: Vec<String>,
        #[command(flatten)]
        probe: ProbeArgs,
    },
    /// Run a named report.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
        /// Size bound for canonical-closure.
        #[arg(long)]
        size: Option<usize>,
        /// The term for denotation-theorem.
        #[arg(long)]
        term: Option<String>,
        #[command(flatten)]
        probe: ProbeArgs,
    },
    /// Read commands from standard input.
    Repl,
}

/// What a command printed and the code it exits with.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub report: Report,
}

impl Outcome {
    fn single(text: String, item: Item) -> Self {
        let mut report = Report::new(item.id.clone());
        report.push(item);
        Outcome { code: exit::OK, text, report }
    }

    fn suite(report: Report) -> Self {
        let code = if report.all_passed() { exit::OK } else { exit::SUITE };
        Outcome { code, text: report.to_text(), report }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Records => self.report.to_records(),
        }
    }
}

/// Applies the global flags to the session, then runs the command.
pub fn run(session: &mut Session, cli: &Cli) -> Result<Outcome, CliError> {
    apply_globals(session, &cli.global)?;
    match session.config.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::new(exit::USAGE, e.to_string()))?;
            pool.install(|| execute(session, &cli.command))
        }
        None => execute(session, &cli.command),
    }
}

/// Global flags persist in the session, so in the REPL they hold until
/// changed.
pub fn apply_globals(session: &mut Session, g: &GlobalArgs) -> Result<(), CliError> {
    if let Some(b) = &g.base {
        session.set_base(b)?;
    }
    if let Some(l) = &g.lang {
        session.use_language(l)?;
    }
    if let Some(f) = g.fuel {
        session.config.eval.fuel = f;
    }
    if let Some(f) = g.format {
        session.config.format = f;
    }
    if let Some(j) = g.jobs {
        session.config.jobs = Some(j.max(1));
    }
    Ok(())
}

fn judged(session: &Session, arg: &str) -> Result<(GroundTerm, Judgment), CliError> {
    let t = session.term(arg)?;
    let j = typecheck(&t, &session.language().lang)
        .map_err(|e| CliError::new(exit::STATIC, format!("{arg}: type error {e}")))?;
    Ok((t, j))
}

fn same_judgment(a: &Judgment, b: &Judgment) -> Result<(), CliError> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(CliError::new(exit::STATIC, format!("the judgments differ: `{a}` against `{b}`")))
    }
}

pub fn execute(session: &mut Session, cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Check { term } => cmd_check(session, term),
        Command::Normalize { term, trace } => cmd_normalize(session, term, *trace),
        Command::Equiv { a, b, probe } => cmd_equiv(session, a, b, probe),
        Command::Ident { a, b } => cmd_ident(session, a, b),
        Command::Universal { term } => cmd_universal(session, term),
        Command::Classify { from, to, size, per_type, types, probe } => {
            cmd_classify(session, from, to, *size, *per_type, types, probe)
        }
        Command::Suite { name, size, term, probe } => cmd_suite(session, *name, *size, term.as_deref(), probe),
        Command::Repl => Err(CliError::new(exit::USAGE, "already in the REPL")),
    }
}

pub fn cmd_check(session: &Session, arg: &str) -> Result<Outcome, CliError> {
    let (_, j) = judged(session, arg)?;
    Ok(Outcome::single(format!("{j}\n"), Item::new("check", j.to_string(), true)))
}

pub fn cmd_normalize(session: &Session, arg: &str, trace: bool) -> Result<Outcome, CliError> {
    let (t, j) = judged(session, arg)?;
    if !j.is_closed() {
        return Err(CliError::new(
            exit::USAGE,
            format!("{arg}: the term is open (`{j}`); only closed terms are evaluated"),
        ));
    }
    let cfg = crate::eval::EvalConfig { trace, ..session.config.eval };
    let nf = normalize(&t, &session.language().map, cfg).map_err(|e| {
        let code = match e {
            EvalError::FuelExhausted { .. } => exit::RESOURCE,
            _ => exit::USAGE,
        };
        CliError::new(code, format!("{arg}: {e}"))
    })?;
    let mut text = String::new();
    for r in &nf.trace {
        text.push_str(&format!("{r}\n"));
    }
    text.push_str(&format!("{}\n", nf.term));
    Ok(Outcome::single(text, Item::new("normalize", nf.term.to_string(), true).steps(nf.steps)))
}

pub fn cmd_equiv(session: &Session, a: &str, b: &str, probe: &ProbeArgs) -> Result<Outcome, CliError> {
    let ((t, _), (u, _)) = (judged(session, a)?, judged(session, b)?);
    let l = session.language();
    let v = equivalent(&t, &u, &l.lang, &l.map, probe.apply(session.config.probe), session.config.eval).map_err(
        |e| match e {
            EquivError::Judgment { left, right } => same_judgment(&left, &right).unwrap_err(),
            EquivError::Type(e) => CliError::new(exit::STATIC, format!("type error {e}")),
        },
    )?;
    let mut item = Item::new("equiv", v.to_string(), matches!(v, Verdict::Equivalent { .. }));
    if let Verdict::Equivalent { tested } = v {
        item = item.detail(format!("{tested} instances"));
    }
    Ok(Outcome::single(format!("equiv: {v}\n"), item))
}

pub fn cmd_ident(session: &Session, a: &str, b: &str) -> Result<Outcome, CliError> {
    let ((t, jt), (u, ju)) = (judged(session, a)?, judged(session, b)?);
    same_judgment(&jt, &ju)?;
    let l = session.language();
    let same = identical(&t, &u, &l.lang, &l.map);
    let verdict = if same { "Identical" } else { "Distinct" };
    Ok(Outcome::single(format!("ident: {verdict}\n"), Item::new("ident", verdict, same)))
}

pub fn cmd_universal(session: &Session, arg: &str) -> Result<Outcome, CliError> {
    let (t, _) = judged(session, arg)?;
    let l = session.language();
    let u = universal_term(&t, &l.lang, &l.map);
    let verdict = if u { "universal" } else { "not universal" };
    Ok(Outcome::single(format!("{verdict}\n"), Item::new("universal", verdict, u)))
}

pub fn cmd_classify(
    session: &mut Session,
    from: &str,
    to: &str,
    size: Option<usize>,
    per_type: Option<usize>,
    types: &[String],
    probe: &ProbeArgs,
) -> Result<Outcome, CliError> {
    let l1 = session.language_ref(from)?;
    let l2 = session.language_ref(to)?;
    let d = SearchBounds::default();
    let types = if types.is_empty() {
        None
    } else {
        let parsed = types
            .iter()
            .map(|s| parse_formula_in(s, &l2.lang).map_err(|e| CliError::new(exit::STATIC, format!("`{s}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Some(parsed)
    };
    let bounds = SearchBounds {
        size_bound: size.unwrap_or(d.size_bound),
        probe: probe.apply(session.config.probe),
        types,
        per_type: per_type.unwrap_or(d.per_type),
        eval: session.config.eval,
    };
    let r = classify_expansion(&l1.lang, &l2.lang, &l2.map, &bounds).map_err(|e| match e {
        ClassifyError::NotExpansion(..) => CliError::new(exit::USAGE, e.to_string()),
        ClassifyError::Map(_) => CliError::new(exit::STATIC, e.to_string()),
    })?;
    Ok(Outcome::single(format!("{r}\n"), Item::new("classify", r.to_string(), true)))
}

pub fn cmd_suite(
    session: &Session,
    name: SuiteName,
    size: Option<usize>,
    term: Option<&str>,
    probe: &ProbeArgs,
) -> Result<Outcome, CliError> {
    let l = session.language();
    let (eval, probe) = (session.config.eval, probe.apply(session.config.probe));
    let report = match name {
        SuiteName::IlCorrectness => il_correctness_suite(&l.lang.base),
        SuiteName::CanonicalClosure => canonical_closure_report(&l.lang, &l.map, size.unwrap_or(10), eval),
        SuiteName::DenotationTheorem => {
            let arg = term.ok_or_else(|| CliError::new(exit::USAGE, "denotation-theorem needs --term"))?;
            let t = session.term(arg)?;
            check_denotation_theorem(&t, &l.lang, &l.map, probe, eval)
        }
        SuiteName::ExpansionExamples => expansion_examples(&SearchBounds { probe, eval, ..SearchBounds::default() }),
    };
    Ok(Outcome::suite(report))
}
