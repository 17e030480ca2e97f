use serde::{Deserialize, Serialize};

/// Compute limits. Anything beyond them is served by ingested tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Largest group order for which classes and tables are computed.
    pub max_order: u64,
    /// Largest number of conjugacy classes for a computed table.
    pub max_classes: usize,
    /// Largest index accepted by coset actions.
    pub max_index: u64,
    /// Largest order for which the whole subgroup lattice is enumerated.
    pub lattice_budget: u64,
    /// Largest conjugacy class that is materialized element by element.
    pub class_enum_budget: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_order: 1_000_000_000,
            max_classes: 30,
            max_index: 1_000_000,
            lattice_budget: 5000,
            class_enum_budget: 10_000_000,
        }
    }
}

impl Budget {
    /// Limits for tables of subgroups met during a classification: the class
    /// count limit is relaxed (abelian subgroups have as many classes as elements).
    pub fn for_subgroups(&self) -> Budget {
        Budget { max_classes: self.max_classes.max(SUBGROUP_CLASS_FLOOR), ..*self }
    }
}

pub const SUBGROUP_CLASS_FLOOR: usize = 256;
