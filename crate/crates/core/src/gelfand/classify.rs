use std::collections::HashSet;

use serde::Serialize;

use super::report::{group_rows, ClassificationReport, TestRecord};
use super::{verdict, Mode, PairVerdict};
use crate::characters::{permutation_character, GroupTable};
use crate::config::Budget;
use crate::error::{Error, Result};
use crate::perm::{is_subconjugate, PermGroup};
use crate::subgroups::Lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    FullLattice,
    Descent,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full-lattice" => Ok(Strategy::FullLattice),
            "descent" => Ok(Strategy::Descent),
            _ => Err(Error::Parse(format!("unknown strategy {s:?} (expected full-lattice or descent)"))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::FullLattice => "full-lattice",
            Strategy::Descent => "descent",
        })
    }
}

/// A curated subgroup: catalog name, display label, generators.
#[derive(Clone, Debug)]
pub struct CuratedSub {
    pub name: String,
    pub label: String,
    pub group: PermGroup,
}

/// Curated data consulted by the classifier.
pub trait Curated {
    /// Maximal subgroup class representatives of a catalog node, if curated.
    fn maximals(&self, node: &str) -> Result<Option<Vec<CuratedSub>>>;
    /// Perfect subgroups supplied to the lattice search of a node.
    fn seeds(&self, node: &str) -> Result<Vec<PermGroup>>;
    /// Display label for a subgroup of `root` with the given structure signature.
    fn label(&self, root: &str, signature: &str) -> Option<String>;
}

/// No curated data: full-lattice classification only.
pub struct NoCuratedData;

impl Curated for NoCuratedData {
    fn maximals(&self, _: &str) -> Result<Option<Vec<CuratedSub>>> {
        Ok(None)
    }
    fn seeds(&self, _: &str) -> Result<Vec<PermGroup>> {
        Ok(Vec::new())
    }
    fn label(&self, _: &str, _: &str) -> Option<String> {
        None
    }
}

pub(super) struct Found {
    pub descriptor: String,
    pub order: u64,
    pub label: String,
    pub maximal: String,
    pub maximal_order: Option<u64>,
    group: PermGroup,
    key: Vec<String>,
}

struct Ctx<'a> {
    g: GroupTable,
    name: String,
    mode: Mode,
    data: &'a dyn Curated,
    budget: Budget,
    sub_budget: Budget,
    found: Vec<Found>,
    tested: Vec<TestRecord>,
    pruned: usize,
    exact: bool,
}

impl Ctx<'_> {
    fn test(&mut self, descriptor: &str, label: &str, k: &PermGroup, maximal: bool) -> Result<(PairVerdict, GroupTable)> {
        log::info!("testing {} in {} (order {})", descriptor, self.name, k.order());
        let kt = GroupTable::compute(k, label, &self.sub_budget)?;
        let f = kt.fusion_into(&self.g)?;
        let mut v = verdict(&f, self.mode)?;
        v.group = self.name.clone();
        v.subgroup = descriptor.to_string();
        self.tested.push(TestRecord {
            descriptor: descriptor.to_string(),
            label: label.to_string(),
            order: k.order(),
            maximal,
            verdict: v.clone(),
        });
        Ok((v, kt))
    }

    /// Records a passing subgroup. During descent a subgroup can be reached
    /// more than once; G-conjugates are recognized by a fixed coset, after a
    /// permutation character prefilter.
    fn record(&mut self, kt: &GroupTable, descriptor: &str, label: &str, maximal: &(String, Option<u64>)) -> Result<()> {
        let f = kt.fusion_into(&self.g)?;
        let pi = permutation_character(&f)?;
        let key: Vec<String> = pi.values.iter().map(|v| v.to_string()).collect();
        let k = kt.group();
        if !self.exact {
            for seen in self.found.iter().filter(|s| s.order == kt.table.order && s.key == key) {
                if is_subconjugate(self.g.group(), k, &seen.group, &self.budget)? {
                    log::info!("{descriptor} is conjugate to {}", seen.descriptor);
                    return Ok(());
                }
            }
        }
        self.found.push(Found {
            descriptor: descriptor.to_string(),
            order: kt.table.order,
            label: label.to_string(),
            maximal: maximal.0.clone(),
            maximal_order: maximal.1,
            group: k.clone(),
            key,
        });
        Ok(())
    }

    fn label_for(&self, lat: &Lattice, i: usize) -> String {
        let s = lat.structure(i);
        self.data.label(&self.name, &s.signature()).unwrap_or_else(|| s.label())
    }

    /// Tests the proper subgroups of `lat`'s group against G, top down,
    /// skipping everything contained in a failure. Without `enclosing` the
    /// lattice is that of G itself.
    fn sweep_lattice(&mut self, lat: &Lattice, prefix: &str, enclosing: Option<&(String, Option<u64>)>) -> Result<()> {
        let n = lat.len();
        let maximal: HashSet<usize> = lat.maximal().into_iter().collect();
        let mut order: Vec<usize> = (0..n - 1).collect();
        order.sort_by(|&a, &b| lat.classes()[b].order.cmp(&lat.classes()[a].order).then(a.cmp(&b)));
        let mut failed: Vec<usize> = Vec::new();
        let mut passed: Vec<usize> = Vec::new();
        let labels: Vec<String> = (0..n).map(|i| self.label_for(lat, i)).collect();
        for i in order {
            if failed.iter().any(|&j| lat.is_subconjugate(i, j)) {
                self.pruned += 1;
                failed.push(i);
                continue;
            }
            let descriptor = format!("{prefix}#{}", i + 1);
            let k = lat.representative(i);
            let is_max = enclosing.is_none() && maximal.contains(&i);
            let (v, kt) = self.test(&descriptor, &labels[i], &k, is_max)?;
            if !v.passes(self.mode) {
                failed.push(i);
                continue;
            }
            passed.push(i);
            let col = match enclosing {
                Some(e) => e.clone(),
                None if is_max => ("-".to_string(), None),
                None => {
                    // a maximal class above i, preferring passing ones
                    let mut over: Vec<usize> =
                        maximal.iter().copied().filter(|&m| lat.is_subconjugate(i, m)).collect();
                    over.sort_by_key(|&m| (!passed.contains(&m), std::cmp::Reverse(lat.classes()[m].order), m));
                    over.first()
                        .map(|&m| (labels[m].clone(), Some(lat.classes()[m].order)))
                        .unwrap_or_else(|| ("-".into(), None))
                }
            };
            self.record(&kt, &descriptor, &labels[i], &col)?;
        }
        Ok(())
    }

    fn descend(&mut self, subs: Vec<CuratedSub>, enclosing: Option<&(String, Option<u64>)>) -> Result<()> {
        for m in subs {
            let (v, kt) = self.test(&m.name, &m.label, &m.group, enclosing.is_none())?;
            if !v.passes(self.mode) {
                if let Some(children) = self.data.maximals(&m.name)? {
                    self.pruned += children.len();
                }
                continue;
            }
            let col = enclosing.cloned().unwrap_or_else(|| ("-".to_string(), None));
            self.record(&kt, &m.name, &m.label, &col)?;
            let enc = enclosing.cloned().unwrap_or_else(|| (m.label.clone(), Some(m.group.order())));
            if m.group.order() <= self.budget.lattice_budget {
                let lat = Lattice::compute(&m.group, &self.data.seeds(&m.name)?, &self.budget)?;
                self.sweep_lattice(&lat, &m.name, Some(&enc))?;
            } else {
                let children = self.data.maximals(&m.name)?.ok_or_else(|| {
                    Error::MissingData(format!(
                        "maximal subgroups of {} (order {} exceeds the lattice budget {})",
                        m.name,
                        m.group.order(),
                        self.budget.lattice_budget
                    ))
                })?;
                self.descend(children, Some(&enc))?;
            }
        }
        Ok(())
    }
}

/// All conjugacy classes of proper subgroups `H < G` for which `(G, H)`
/// passes the mode's predicate.
pub fn classify(
    g: &PermGroup,
    name: &str,
    mode: Mode,
    strategy: Strategy,
    data: &dyn Curated,
    budget: &Budget,
) -> Result<ClassificationReport> {
    let gt = GroupTable::compute(g, name, budget)?;
    let mut ctx = Ctx {
        g: gt,
        name: name.to_string(),
        mode,
        data,
        budget: *budget,
        sub_budget: budget.for_subgroups(),
        found: Vec::new(),
        tested: Vec::new(),
        pruned: 0,
        exact: strategy == Strategy::FullLattice,
    };
    let conditional = match strategy {
        Strategy::FullLattice => {
            let lat = Lattice::compute(g, &data.seeds(name)?, budget)?;
            ctx.sweep_lattice(&lat, name, None)?;
            false
        }
        Strategy::Descent => {
            let subs = data
                .maximals(name)?
                .ok_or_else(|| Error::MissingData(format!("maximal subgroups of {name}")))?;
            ctx.descend(subs, None)?;
            true
        }
    };
    Ok(ClassificationReport {
        group: name.to_string(),
        order: g.order(),
        mode,
        strategy,
        entries: group_rows(&ctx.found),
        pruned_count: ctx.pruned,
        tested: ctx.tested,
        conditional_on_data: conditional,
        multiplicity_counts: "conjugacy classes of subgroups".to_string(),
    })
}
