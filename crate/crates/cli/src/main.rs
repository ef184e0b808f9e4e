mod args;
mod run;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use dickson::Error;
use serde_json::{json, Value};

use args::{Cli, Format};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_FINDING: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::CoverageGap { .. } | Error::RankNegative { .. } | Error::NonTerminating(_) => EXIT_FINDING,
        _ => EXIT_USAGE,
    }
}

fn print_json(v: Value) {
    println!("{v}");
}

fn wants_json(raw: &[String]) -> bool {
    raw.windows(2).any(|w| w[0] == "--format" && w[1] == "json") || raw.iter().any(|a| a == "--format=json")
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&raw) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let inner = std::error::Error::source(&e).and_then(|s| s.downcast_ref::<Error>());
            if wants_json(&raw) {
                let name = inner.map_or("UsageError", Error::name);
                let message = e.to_string().lines().next().unwrap_or_default().to_string();
                print_json(json!({"record": "error", "error": name, "message": message, "exit": EXIT_USAGE}));
            } else {
                let _ = e.print();
            }
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let command = cli.command.name();
    if cli.format == Format::Json {
        print_json(json!({
            "record": "input",
            "command": command,
            "args": cli.canonical_args(),
            "max_bits": cli.max_bits,
            "max_steps": cli.max_steps,
            "exec": if cli.sequential { "sequential" } else { "parallel" },
        }));
    }
    match run::execute(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => {
                    let mut fields = report.fields;
                    fields.insert("record".into(), "result".into());
                    fields.insert("command".into(), command.into());
                    print_json(Value::Object(fields));
                }
                Format::Text => {
                    for l in &report.text {
                        println!("{l}");
                    }
                }
            }
            if report.failed {
                ExitCode::from(EXIT_VERIFY)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            match cli.format {
                Format::Json => print_json(json!({
                    "record": "error",
                    "command": command,
                    "error": e.name(),
                    "message": e.to_string(),
                    "exit": code,
                })),
                Format::Text => eprintln!("error: {}: {e}", e.name()),
            }
            ExitCode::from(code)
        }
    }
}
