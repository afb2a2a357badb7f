use std::io::{self, IsTerminal, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use groundc::cli::{apply_globals, exit, run, run_repl, Cli, Command, Config, Session};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(exit::USAGE),
            };
        }
    };
    let mut session = Session::new(Config::default());
    if matches!(cli.command, Command::Repl) {
        if let Err(e) = apply_globals(&mut session, &cli.global) {
            eprintln!("{e}");
            return ExitCode::from(e.code);
        }
        let stdin = io::stdin();
        let prompt = stdin.is_terminal();
        return match run_repl(&mut session, stdin.lock(), io::stdout().lock(), prompt) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit::USAGE)
            }
        };
    }
    match run(&mut session, &cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.render(session.config.format).as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code)
        }
    }
}
