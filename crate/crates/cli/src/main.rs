mod args;
mod commands;
mod render;
mod workflow;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fiberwise_core::Error;

use args::{Cli, Command};
use workflow::WorkflowConfig;

fn fail(msg: &str, code: u8) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn parse(argv: &[String]) -> Result<Cli, ExitCode> {
    Cli::try_parse_from(argv).map_err(|e| {
        let code = if e.use_stderr() { 1 } else { 0 };
        let _ = e.print();
        ExitCode::from(code)
    })
}

fn execute(cli: &Cli) -> ExitCode {
    if let Command::Run { workflow } = &cli.command {
        let text = match commands::read(workflow) {
            Ok(t) => t,
            Err(e) => return fail(&e.to_string(), 1),
        };
        let wf = match WorkflowConfig::parse(&text) {
            Ok(w) => w,
            Err(e) => return fail(&e.to_string(), 1),
        };
        if wf.command == "run" {
            return fail("workflows cannot be nested", 1);
        }
        let dir = workflow.parent().map(|p| p.to_path_buf()).unwrap_or_default();
        return match parse(&wf.argv(&dir)) {
            Ok(inner) => execute(&inner),
            Err(code) => code,
        };
    }
    let g = &cli.global;
    if g.verbose > 0 {
        eprintln!("fiberwise: running {:?}", cli.command);
    }
    let report = match commands::dispatch(&cli.command, g) {
        Ok(r) => r,
        Err(e) => return fail(&e.to_string(), e.exit_code() as u8),
    };
    let text = if g.table {
        render::table(&report)
    } else {
        let mut s = serde_json::to_string(&report).expect("reports serialize");
        s.push('\n');
        s
    };
    match &g.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                return fail(&Error::Config(format!("{}: {e}", path.display())).to_string(), 1);
            }
            if g.verbose > 0 {
                eprintln!("fiberwise: wrote {}", path.display());
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    match parse(&argv) {
        Ok(cli) => execute(&cli),
        Err(code) => code,
    }
}
