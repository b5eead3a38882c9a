//! Batch front end for `wallcross-core`: JSON input, one report per command.

pub mod commands;
pub mod input;
pub mod report;

pub use commands::{run, CliError, Command, Outcome, RunOptions};
pub use input::{parse_input, parse_input_lenient, parse_str, InputError, InputSpec};

/// Canonical JSON: sorted keys, compact unless `pretty`.
pub fn render(v: &serde_json::Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("values serialize")
    } else {
        v.to_string()
    }
}
