//! Named groups backed by generator files and a manifest.
//!
//! Manifest lines (any file named `manifest*` in the catalog directory):
//!
//! ```text
//! entry <name> <file|-> <order> <label>
//! maxes <name> <child> <child> ...
//! seed <name> <subgroup>
//! label <signature> <display label>
//! ```
//!
//! An entry with file `-` records an order only. `maxes` lists maximal
//! subgroup class representatives, `seed` a perfect subgroup handed to lattice
//! searches, `label` the display label for a structure signature. Lines
//! starting with `#` are comments.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::config::Budget;
use crate::error::{Error, Result};
use crate::gelfand::{Curated, CuratedSub};
use crate::perm::text::{parse_group_file, GroupFile, SubgroupBody};
use crate::perm::{Perm, PermGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    /// Group file relative to `groups/`; `None` for order-only entries.
    pub file: Option<String>,
    pub expected_order: u64,
    pub label: String,
}

#[derive(Debug)]
pub struct Catalog {
    dir: PathBuf,
    entries: BTreeMap<String, CatalogEntry>,
    maxes: BTreeMap<String, Vec<String>>,
    seeds: BTreeMap<String, Vec<String>>,
    labels: HashMap<String, String>,
    cache: Mutex<HashMap<String, PermGroup>>,
}

/// Directory of the catalog shipped with the crate.
pub fn default_dir() -> PathBuf {
    if let Ok(d) = std::env::var("GELPAIR_DATA") {
        return PathBuf::from(d).join("catalog");
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("catalog")
}

impl Catalog {
    pub fn builtin() -> Result<Catalog> {
        Catalog::open(default_dir())
    }

    pub fn open(dir: impl AsRef<Path>) -> Result<Catalog> {
        let dir = dir.as_ref().to_path_buf();
        let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map_err(|e| Error::io(&dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("manifest")))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(Error::MissingData(format!("no manifest in {}", dir.display())));
        }
        let mut cat = Catalog {
            dir,
            entries: BTreeMap::new(),
            maxes: BTreeMap::new(),
            seeds: BTreeMap::new(),
            labels: HashMap::new(),
            cache: Mutex::new(HashMap::new()),
        };
        for f in files {
            let text = std::fs::read_to_string(&f).map_err(|e| Error::io(&f, e))?;
            cat.parse_manifest(&text).map_err(|e| Error::Data(format!("{}: {e}", f.display())))?;
        }
        Ok(cat)
    }

    fn parse_manifest(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| Error::Parse(format!("line {}: {m}", no + 1));
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "entry" => {
                    if words.len() != 5 {
                        return Err(bad("expected `entry <name> <file> <order> <label>`"));
                    }
                    let order = words[3].parse().map_err(|_| bad("bad order"))?;
                    let file = (words[2] != "-").then(|| words[2].to_string());
                    self.entries.insert(
                        words[1].to_string(),
                        CatalogEntry { name: words[1].into(), file, expected_order: order, label: words[4].into() },
                    );
                }
                "maxes" if words.len() >= 2 => {
                    self.maxes.insert(words[1].into(), words[2..].iter().map(|s| s.to_string()).collect());
                }
                "seed" if words.len() == 3 => {
                    self.seeds.entry(words[1].into()).or_default().push(words[2].into());
                }
                "label" if words.len() == 3 => {
                    self.labels.insert(words[1].into(), words[2].into());
                }
                _ => return Err(bad(&format!("unrecognized directive {:?}", words[0]))),
            }
        }
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|s| s.as_str())
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn has_maximals(&self, name: &str) -> bool {
        self.maxes.contains_key(name)
    }

    /// Builds the named group and checks its order against the manifest.
    pub fn resolve(&self, name: &str) -> Result<(PermGroup, CatalogEntry)> {
        self.resolve_with(name, &Budget::default())
    }

    pub fn resolve_with(&self, name: &str, budget: &Budget) -> Result<(PermGroup, CatalogEntry)> {
        let entry = self.entry(name)?.clone();
        if entry.expected_order > budget.max_order {
            return Err(Error::budget(&format!("order of {name}"), entry.expected_order, budget.max_order));
        }
        if let Some(g) = self.cache.lock().unwrap().get(name) {
            return Ok((g.clone(), entry));
        }
        let g = self.build(&entry, budget)?;
        self.cache.lock().unwrap().insert(name.to_string(), g.clone());
        Ok((g, entry))
    }

    fn build(&self, entry: &CatalogEntry, budget: &Budget) -> Result<PermGroup> {
        let file = entry.file.as_ref().ok_or_else(|| {
            Error::budget(
                &format!("{} has no generator data; order", entry.name),
                entry.expected_order,
                budget.max_order,
            )
        })?;
        let path = self.dir.join("groups").join(file);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let parsed = parse_group_file(&text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        let g = match parsed {
            GroupFile::Generators { degree, gens, .. } => {
                if gens.is_empty() {
                    PermGroup::trivial(degree)
                } else {
                    PermGroup::new(gens)?
                }
            }
            GroupFile::Subgroup { parent, body, .. } => {
                let (pg, _) = self.resolve_with(&parent, budget)?;
                match body {
                    SubgroupBody::Stabilizer(points) => {
                        let mut h = pg;
                        for p in points {
                            if p >= h.degree() {
                                return Err(Error::Data(format!("{}: stabilizer point out of range", path.display())));
                            }
                            h = h.point_stabilizer(p);
                        }
                        h
                    }
                    SubgroupBody::Generators(lines) => {
                        let gens = lines
                            .iter()
                            .map(|l| Perm::parse_cycles(l, pg.degree()))
                            .collect::<Result<Vec<_>>>()?;
                        let gens: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
                        for x in &gens {
                            if !pg.contains(x)? {
                                return Err(Error::Data(format!(
                                    "{}: generator {x} is not in {parent}",
                                    path.display()
                                )));
                            }
                        }
                        if gens.is_empty() {
                            PermGroup::trivial(pg.degree())
                        } else {
                            PermGroup::new(gens)?
                        }
                    }
                }
            }
        };
        if g.order() != entry.expected_order {
            return Err(Error::Data(format!(
                "{} has order {}, manifest says {}",
                entry.name,
                g.order(),
                entry.expected_order
            )));
        }
        Ok(g)
    }

    /// Catalog names of the curated maximal subgroups.
    pub fn maximal_names(&self, name: &str) -> Result<&[String]> {
        self.maxes
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::MissingData(format!("maximal subgroups of {name}")))
    }

    /// Curated maximal subgroups with their labels.
    pub fn maximal_subgroups(&self, name: &str) -> Result<Vec<(String, PermGroup)>> {
        let children = self
            .maxes
            .get(name)
            .ok_or_else(|| Error::MissingData(format!("maximal subgroups of {name}")))?;
        children
            .iter()
            .map(|c| {
                let (g, e) = self.resolve(c)?;
                Ok((e.label, g))
            })
            .collect()
    }

    /// Display label registered for a structure signature.
    pub fn label_for_signature(&self, signature: &str) -> Option<&str> {
        self.labels.get(signature).map(|s| s.as_str())
    }
}

impl Curated for Catalog {
    fn maximals(&self, node: &str) -> Result<Option<Vec<CuratedSub>>> {
        let Some(children) = self.maxes.get(node) else {
            return Ok(None);
        };
        children
            .iter()
            .map(|c| {
                let (group, e) = self.resolve(c)?;
                Ok(CuratedSub { name: c.clone(), label: e.label, group })
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn seeds(&self, node: &str) -> Result<Vec<PermGroup>> {
        let Some(list) = self.seeds.get(node) else {
            return Ok(Vec::new());
        };
        let (parent, _) = self.resolve(node)?;
        let mut out = Vec::new();
        for s in list {
            let (g, _) = self.resolve(s)?;
            if !g.is_subgroup_of(&parent) {
                return Err(Error::Data(format!("seed {s} is not a subgroup of {node}")));
            }
            out.push(g);
        }
        Ok(out)
    }

    fn label(&self, _root: &str, signature: &str) -> Option<String> {
        self.labels.get(signature).cloned()
    }
}
