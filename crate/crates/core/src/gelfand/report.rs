use serde::Serialize;

use super::classify::{Found, Strategy};
use super::{Mode, PairVerdict};

/// One row: subgroup classes sharing order, label and enclosing maximal subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub label: String,
    pub order: u64,
    /// Label of an enclosing maximal subgroup, `-` for maximal subgroups.
    pub maximal: String,
    /// Order of that maximal subgroup; `None` for maximal subgroups.
    pub maximal_order: Option<u64>,
    /// Number of conjugacy classes of subgroups in the row.
    pub multiplicity: u64,
    pub classes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TestRecord {
    pub descriptor: String,
    pub label: String,
    pub order: u64,
    pub maximal: bool,
    pub verdict: PairVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub group: String,
    pub order: u64,
    pub mode: Mode,
    pub strategy: Strategy,
    pub entries: Vec<ReportEntry>,
    pub pruned_count: usize,
    pub tested: Vec<TestRecord>,
    /// Exhaustiveness rests on curated maximal-subgroup lists.
    pub conditional_on_data: bool,
    pub multiplicity_counts: String,
}

pub(super) fn group_rows(found: &[Found]) -> Vec<ReportEntry> {
    let mut rows: Vec<ReportEntry> = Vec::new();
    for f in found {
        match rows.iter_mut().find(|r| r.order == f.order && r.label == f.label && r.maximal == f.maximal) {
            Some(r) => {
                r.multiplicity += 1;
                r.classes.push(f.descriptor.clone());
            }
            None => rows.push(ReportEntry {
                label: f.label.clone(),
                order: f.order,
                maximal: f.maximal.clone(),
                maximal_order: f.maximal_order,
                multiplicity: 1,
                classes: vec![f.descriptor.clone()],
            }),
        }
    }
    rows.sort_by(|a, b| b.order.cmp(&a.order).then_with(|| a.label.cmp(&b.label)).then_with(|| a.maximal.cmp(&b.maximal)));
    rows
}

impl ClassificationReport {
    /// Total number of subgroup classes found.
    pub fn class_count(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Aligned text table: Subgroup, Order, Max. Subgroup, Multiplicity.
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{} (order {}), {} subgroups, strategy {}\n",
            self.group, self.order, self.mode, self.strategy
        );
        out.push_str(&format!(
            "tested {}, pruned {}, multiplicity counts {}{}\n\n",
            self.tested.len(),
            self.pruned_count,
            self.multiplicity_counts,
            if self.conditional_on_data { ", conditional-on-data" } else { "" }
        ));
        let mut rows = vec![[
            "Subgroup".to_string(),
            "Order".to_string(),
            "Max. Subgroup".to_string(),
            "Multiplicity".to_string(),
        ]];
        for e in &self.entries {
            rows.push([e.label.clone(), e.order.to_string(), e.maximal.clone(), e.multiplicity.to_string()]);
        }
        let mut w = [0usize; 4];
        for r in &rows {
            for (i, c) in r.iter().enumerate() {
                w[i] = w[i].max(c.chars().count());
            }
        }
        for r in &rows {
            let line = format!("{:<a$}  {:>b$}  {:<c$}  {:>d$}", r[0], r[1], r[2], r[3], a = w[0], b = w[1], c = w[2], d = w[3]);
            out.push_str(line.trim_end());
            out.push('\n');
        }
        if self.entries.is_empty() {
            out.push_str("(no proper subgroups)\n");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
