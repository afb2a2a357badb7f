use std::io::{self, BufRead, Write};
use std::path::Path;

use clap::Parser;

use super::{exit, run, Cli, CliError, Command, Session};

const HELP: &str = "\
commands: check normalize equiv ident universal classify suite, with the same flags as batch mode
  :load FILE          a .base, .glang or .gterm file (terms are named by the file stem)
  :let NAME = TERM    name a term (term text, a .gterm file or another name)
  :help  :quit
";

/// `:load FILE`.
fn load(session: &mut Session, path: &str) -> Result<String, CliError> {
    let p = Path::new(path);
    match p.extension().and_then(|e| e.to_str()) {
        Some("base") => {
            session.set_base(path)?;
            Ok(format!("base {path}\n"))
        }
        Some("glang") => {
            session.use_language(path)?;
            Ok(format!("language {}\n", session.language().lang.name))
        }
        Some("gterm") => {
            let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or("it").to_string();
            let t = session.term(path)?;
            session.define(&name, t);
            Ok(format!("{name} defined\n"))
        }
        _ => Err(CliError::new(exit::USAGE, format!("{path}: expected a .base, .glang or .gterm file"))),
    }
}

fn line(session: &mut Session, input: &str) -> Result<Option<(String, u8)>, CliError> {
    if let Some(rest) = input.strip_prefix(':') {
        let (cmd, arg) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        let arg = arg.trim();
        return match cmd {
            "q" | "quit" => Ok(None),
            "help" => Ok(Some((HELP.to_string(), exit::OK))),
            "load" if !arg.is_empty() => load(session, arg).map(|s| Some((s, exit::OK))),
            "let" => {
                let (name, text) =
                    arg.split_once('=').ok_or_else(|| CliError::new(exit::USAGE, "expected `:let NAME = TERM`"))?;
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(CliError::new(exit::USAGE, format!("bad name `{name}`")));
                }
                let t = session.term(text.trim())?;
                session.define(name, t);
                Ok(Some((format!("{name} defined\n"), exit::OK)))
            }
            _ => Err(CliError::new(exit::USAGE, format!("unknown command `:{cmd}`; try :help"))),
        };
    }
    let words = shlex::split(input).ok_or_else(|| CliError::new(exit::USAGE, "unbalanced quotes"))?;
    let cli = Cli::try_parse_from(std::iter::once("groundc".to_string()).chain(words)).map_err(|e| {
        let msg = e.to_string();
        CliError::new(exit::USAGE, msg.trim_start_matches("error: ").trim_end().to_string())
    })?;
    if matches!(cli.command, Command::Repl) {
        return Err(CliError::new(exit::USAGE, "already in the REPL"));
    }
    let out = run(session, &cli)?;
    Ok(Some((out.render(session.config.format), out.code)))
}

/// Runs commands line by line. Output and errors both go to `out`; the
/// result is the code of the last command that ran.
pub fn run_repl(session: &mut Session, input: impl BufRead, mut out: impl Write, prompt: bool) -> io::Result<u8> {
    let mut code = exit::OK;
    let mut lines = input.lines();
    loop {
        if prompt {
            write!(out, "groundc> ")?;
            out.flush()?;
        }
        let Some(raw) = lines.next() else { break };
        let raw = raw?;
        let text = raw.trim();
        if text.is_empty() || text.starts_with("//") {
            continue;
        }
        match line(session, text) {
            Ok(None) => break,
            Ok(Some((s, c))) => {
                code = c;
                write!(out, "{s}")?;
            }
            Err(e) => {
                code = e.code;
                writeln!(out, "{e}")?;
            }
        }
    }
    Ok(code)
}
