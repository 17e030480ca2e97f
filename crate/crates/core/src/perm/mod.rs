//! Permutations and permutation groups.

pub mod backtrack;
pub mod classes;
pub mod coset;
pub mod group;
pub mod permutation;
pub mod text;

pub use backtrack::{are_conjugate, centralizer_order};
pub use classes::{conjugacy_classes, ClassData, Classes};
pub use coset::{coset_action, is_subconjugate, CosetAction};
pub use group::PermGroup;
pub use permutation::{Perm, Point, MAX_DEGREE};
