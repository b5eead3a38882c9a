use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wallcross_cli::input::{parse_rational, parse_side, parse_sign};
use wallcross_cli::{parse_input, parse_input_lenient, render, report, run, Command, RunOptions};

#[derive(Parser, Debug)]
#[command(name = "wallcross", version, about = "Wall-crossing computations for Lawrence toric and hypertoric stacks")]
struct Args {
    command: Command,
    input: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Truncation bound on max |D_i·d|, as an integer or "p/q".
    #[arg(long)]
    bound: Option<String>,
    #[arg(long, value_parser = ["minus", "plus"])]
    sector_sign: Option<String>,
    /// Chamber for `ifunction`.
    #[arg(long, value_parser = ["plus", "minus"])]
    side: Option<String>,
    #[arg(long)]
    pretty: bool,
    /// Plain-text rendering instead of JSON.
    #[arg(long)]
    text: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = std::env::var("WALLCROSS_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match execute(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err((code, msg)) => {
            eprintln!("wallcross: {msg}");
            ExitCode::from(code as u8)
        }
    }
}

fn execute(args: &Args) -> Result<i32, (i32, String)> {
    let spec = if args.command == Command::Validate {
        parse_input_lenient(&args.input)
    } else {
        parse_input(&args.input)
    }
    .map_err(|e| (2, e.to_string()))?;
    let opts = RunOptions {
        bound: args
            .bound
            .as_deref()
            .map(|b| parse_rational(b, "--bound"))
            .transpose()
            .map_err(|e| (2, e.to_string()))?,
        sector_sign: args
            .sector_sign
            .as_deref()
            .map(|s| parse_sign(s, "--sector-sign"))
            .transpose()
            .map_err(|e| (2, e.to_string()))?,
        side_plus: args
            .side
            .as_deref()
            .map(|s| parse_side(s, "--side"))
            .transpose()
            .map_err(|e| (2, e.to_string()))?,
    };
    let outcome = run(args.command, &spec, &opts).map_err(|e| (e.exit_code(), e.to_string()))?;
    let mut body = if args.text {
        report::text(&outcome.report)
    } else {
        render(&outcome.report, args.pretty)
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &args.out {
        Some(path) => std::fs::write(path, body).map_err(|e| (3, format!("{}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    for c in outcome.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} ({})", c.name, c.detail);
    }
    Ok(outcome.exit_code())
}
