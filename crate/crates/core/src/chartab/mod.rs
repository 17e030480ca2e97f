//! Exact character tables.

pub mod classmat;
pub mod dixon;
pub mod table;

pub use classmat::class_matrix;
pub use dixon::{compute_table, table_from_classes};
pub use table::CharacterTable;
