mod args;
mod commands;
mod config;
mod output;

use args::{Cli, Format};
use clap::{CommandFactory, FromArgMatches};
use commands::CliError;
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let parsed = Cli::command()
        .try_get_matches_from(argv)
        .and_then(|m| Cli::from_arg_matches(&m).map(|c| (c, m)));
    let (cli, matches) = match parsed {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let command_value = serde_json::to_value(&cli.command).expect("serialisable command");
    let hash = output::config_hash(&command_value);
    let label = command_label(&matches);
    let start = Instant::now();
    let out = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_invariant() { 2 } else { 1 });
        }
    };
    let wall = start.elapsed().as_secs_f64();
    let (format, path) = match cli.out.as_deref() {
        Some("csv") => (Some(Format::Csv), None),
        Some("json") => (Some(Format::Json), None),
        Some(p) => (None, Some(p)),
        None => (None, None),
    };
    let format = cli
        .format
        .or(format)
        .unwrap_or_else(|| out.default_format());
    let text = output::render(&out, format, &label, &hash, wall);
    match path {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("error: cannot write {p}: {e}");
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}

/// Subcommand words such as `perc theta`.
fn command_label(m: &clap::ArgMatches) -> String {
    let mut words = Vec::new();
    let mut cur = m;
    while let Some((name, sub)) = cur.subcommand() {
        words.push(name);
        cur = sub;
    }
    words.join(" ")
}
