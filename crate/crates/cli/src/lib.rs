//! Command-line front end: settings, exit codes and the reference suites.

pub mod suites;

use std::path::Path;

use gelpair::{Budget, Error};

/// Exit codes: 0 success, 1 data error, 2 budget or missing data, 3 strict skip.
pub mod exit {
    pub const OK: i32 = 0;
    pub const DATA: i32 = 1;
    pub const BUDGET: i32 = 2;
    pub const STRICT_SKIP: i32 = 3;
}

pub fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<Error>() {
        Some(Error::Budget { .. } | Error::MissingData(_)) => exit::BUDGET,
        _ => exit::DATA,
    }
}

/// Budget overrides from a TOML file; missing keys keep their defaults.
///
/// ```toml
/// max_order = 1000000000
/// lattice_budget = 8000
/// ```
pub fn load_budget(path: Option<&Path>) -> anyhow::Result<Budget> {
    let Some(path) = path else {
        return Ok(Budget::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let b: Budget = toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(b)
}
