//! Character tables of permutation groups and (strong) Gelfand pair
//! classification.

pub mod characters;
pub mod chartab;
pub mod config;
pub mod catalog;
pub mod cyclo;
pub mod error;
pub mod gelfand;
pub mod ingest;
pub mod perm;
pub mod subgroups;
pub mod util;

pub use config::Budget;
pub use error::{Error, Result};
