use std::process::ExitCode;

use clap::Parser;
use cubeprog::{execute, render, Cli};
use serde_json::json;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&outcome.payload).expect("serializable"));
            } else {
                let text = render::verify_matrix(&outcome.payload).unwrap_or_else(|| render::text(&outcome.payload));
                print!("{text}");
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            if cli.json {
                let kind = if e.exit_code() == 1 { "internal" } else { "input" };
                println!("{}", serde_json::to_string_pretty(&json!({ "error": e.message(), "kind": kind })).expect("serializable"));
            } else {
                eprintln!("error: {}", e.message());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
