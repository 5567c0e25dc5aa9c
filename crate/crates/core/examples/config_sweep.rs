//! Parse a TOML sweep description, run it in parallel and print CSV.
//!
//! `cargo run --example config_sweep -- crates/core/configs/diode.toml`

use std::io::stdout;

use ptls::sweep::{run_sweep, write_csv, SweepSpec};

const DEFAULT: &str = include_str!("../configs/diode.toml");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let spec = SweepSpec::from_toml(&text)?;
    let rows = run_sweep(&spec)?;
    write_csv(&spec, &rows, stdout().lock())?;
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    eprintln!("{} rows, {failed} failed", rows.len());
    Ok(())
}
