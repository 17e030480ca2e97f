//! Text formats for character tables and class fusions.
//!
//! ```text
//! gelpair-table v1
//! # comment
//! name A5
//! order 60
//! exponent 30
//! class 1a 1 1 60
//! class 2a 15 2 4
//! ...
//! power 2 1a 1a 3a ...
//! char 1 1 1 1 1
//! ...
//! ```
//!
//! `class` lines give name, size, element order and centralizer order;
//! `power p` lists the class of the `p`-th power of each class; each `char`
//! line is an irreducible in class order. Comments are whole lines starting
//! with `#`.
//!
//! ```text
//! gelpair-fusion v1
//! # provenance
//! sub A4
//! super A5
//! map 1 2 3 3
//! ```
//!
//! `map` gives the 1-based class of `super` containing each class of `sub`.
//!
//! Values use the cyclotomic grammar `E(n)`, `^`, `*`, `+`, `-`, rationals and
//! parentheses; they contain no whitespace. Every loaded table passes the full
//! verification gate; every fusion passes the fusion checks.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use num_integer::Integer;

use crate::characters::ClassFusion;
use crate::chartab::CharacterTable;
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::perm::ClassData;
use crate::util::is_prime;

pub const TABLE_HEADER: &str = "gelpair-table v1";
pub const FUSION_HEADER: &str = "gelpair-fusion v1";

pub fn parse_cyclotomic(text: &str) -> Result<Cyclotomic> {
    crate::cyclo::parse(text)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn num<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| parse_err(line, format!("bad {what} {s:?}")))
}

/// Parses and verifies a table.
pub fn parse_table(text: &str) -> Result<CharacterTable> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, TABLE_HEADER)) => {}
        Some((n, other)) => return Err(parse_err(n, format!("expected header {TABLE_HEADER:?}, found {other:?}"))),
        None => return Err(Error::Parse("empty table file".into())),
    }
    let mut name = None;
    let mut order: Option<u64> = None;
    let mut exponent: Option<u64> = None;
    let mut class_names = Vec::new();
    let mut sizes = Vec::new();
    let mut orders = Vec::new();
    let mut cents = Vec::new();
    let mut power_names: Vec<(usize, u64, Vec<String>)> = Vec::new();
    let mut irr = Vec::new();
    for (n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "name" if words.len() == 2 => name = Some(words[1].to_string()),
            "order" if words.len() == 2 => order = Some(num(words[1], n, "order")?),
            "exponent" if words.len() == 2 => exponent = Some(num(words[1], n, "exponent")?),
            "class" if words.len() == 5 => {
                class_names.push(words[1].to_string());
                sizes.push(num(words[2], n, "class size")?);
                orders.push(num(words[3], n, "element order")?);
                cents.push(num(words[4], n, "centralizer order")?);
            }
            "power" if words.len() >= 2 => {
                let p: u64 = num(words[1], n, "prime")?;
                if !is_prime(p) {
                    return Err(parse_err(n, format!("power map for non-prime {p}")));
                }
                power_names.push((n, p, words[2..].iter().map(|s| s.to_string()).collect()));
            }
            "char" => {
                let row = words[1..]
                    .iter()
                    .map(|w| parse_cyclotomic(w).map_err(|e| parse_err(n, e)))
                    .collect::<Result<Vec<_>>>()?;
                irr.push(row);
            }
            other => return Err(parse_err(n, format!("unrecognized line starting with {other:?}"))),
        }
    }
    let name = name.ok_or_else(|| Error::Parse("missing `name`".into()))?;
    let order = order.ok_or_else(|| Error::Parse("missing `order`".into()))?;
    let exponent = exponent.ok_or_else(|| Error::Parse("missing `exponent`".into()))?;
    let index: HashMap<&str, usize> = class_names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    if index.len() != class_names.len() {
        return Err(Error::Parse("duplicate class names".into()));
    }
    let mut power_maps = BTreeMap::new();
    for (n, p, names) in power_names {
        if names.len() != class_names.len() {
            return Err(parse_err(n, format!("{p}-power map has {} entries for {} classes", names.len(), class_names.len())));
        }
        let map = names
            .iter()
            .map(|c| index.get(c.as_str()).copied().ok_or_else(|| parse_err(n, format!("unknown class {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        power_maps.insert(p, map);
    }
    let classes = ClassData { reps: Vec::new(), sizes, centralizer_orders: cents, element_orders: orders, power_maps };
    let mut table = CharacterTable { name, order, exponent, class_names, classes, irr };
    table.verify()?;
    complete_power_maps(&mut table)?;
    Ok(table)
}

/// Fills in `p`-power maps for primes `p ∤ |G|` from the Galois action on columns.
fn complete_power_maps(t: &mut CharacterTable) -> Result<()> {
    let max = t.classes.element_orders.iter().copied().max().unwrap_or(1);
    let cols: Vec<Vec<&Cyclotomic>> = (0..t.len()).map(|k| t.irr.iter().map(|r| &r[k]).collect()).collect();
    for p in (2..=max).filter(|&p| is_prime(p)) {
        if t.classes.power_maps.contains_key(&p) {
            continue;
        }
        if t.order % p == 0 {
            return Err(Error::Verification(format!("table {}: missing {p}-power map", t.name)));
        }
        let mut map = Vec::with_capacity(t.len());
        for k in 0..t.len() {
            let img: Vec<Cyclotomic> = t.irr.iter().map(|r| r[k].galois(p as i64)).collect();
            let j = (0..t.len())
                .find(|&j| cols[j].iter().zip(&img).all(|(a, b)| *a == b))
                .ok_or_else(|| Error::Verification(format!("table {}: no column for the {p}-th power of class {}", t.name, t.class_names[k])))?;
            map.push(j);
        }
        t.classes.power_maps.insert(p, map);
    }
    t.classes.check()
}

/// Canonical text form. Only power maps for primes dividing the order are written.
pub fn serialize_table(t: &CharacterTable, comment: Option<&str>) -> String {
    let mut s = String::new();
    s.push_str(TABLE_HEADER);
    s.push('\n');
    if let Some(c) = comment {
        for l in c.lines() {
            s.push_str(&format!("# {l}\n"));
        }
    }
    s.push_str(&format!("name {}\norder {}\nexponent {}\n", t.name, t.order, t.exponent));
    let cd = &t.classes;
    for k in 0..t.len() {
        s.push_str(&format!(
            "class {} {} {} {}\n",
            t.class_names[k], cd.sizes[k], cd.element_orders[k], cd.centralizer_orders[k]
        ));
    }
    for (p, map) in &cd.power_maps {
        if t.order % p != 0 {
            continue;
        }
        let names: Vec<&str> = map.iter().map(|&j| t.class_names[j].as_str()).collect();
        s.push_str(&format!("power {p} {}\n", names.join(" ")));
    }
    for row in &t.irr {
        let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&format!("char {}\n", vals.join(" ")));
    }
    s
}

pub fn load_table(path: impl AsRef<Path>) -> Result<CharacterTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_table(&text).map_err(|e| annotate(path, e))
}

fn annotate(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        Error::Verification(m) => Error::Verification(format!("{}: {m}", path.display())),
        other => other,
    }
}

/// A parsed fusion file before it is bound to tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionFile {
    pub sub: String,
    pub sup: String,
    pub map: Vec<usize>,
    pub comments: Vec<String>,
}

pub fn parse_fusion(text: &str) -> Result<FusionFile> {
    let mut comments = Vec::new();
    for l in text.lines() {
        if let Some(c) = l.trim().strip_prefix('#') {
            comments.push(c.trim().to_string());
        }
    }
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, FUSION_HEADER)) => {}
        Some((n, other)) => return Err(parse_err(n, format!("expected header {FUSION_HEADER:?}, found {other:?}"))),
        None => return Err(Error::Parse("empty fusion file".into())),
    }
    let (mut sub, mut sup, mut map) = (None, None, None);
    for (n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "sub" if words.len() == 2 => sub = Some(words[1].to_string()),
            "super" if words.len() == 2 => sup = Some(words[1].to_string()),
            "map" => {
                let m = words[1..]
                    .iter()
                    .map(|w| {
                        let k: usize = num(w, n, "class index")?;
                        k.checked_sub(1).ok_or_else(|| parse_err(n, "class indices are 1-based"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                map = Some(m);
            }
            other => return Err(parse_err(n, format!("unrecognized line starting with {other:?}"))),
        }
    }
    Ok(FusionFile {
        sub: sub.ok_or_else(|| Error::Parse("missing `sub`".into()))?,
        sup: sup.ok_or_else(|| Error::Parse("missing `super`".into()))?,
        map: map.ok_or_else(|| Error::Parse("missing `map`".into()))?,
        comments,
    })
}

pub fn serialize_fusion(f: &ClassFusion, comment: Option<&str>) -> String {
    let mut s = String::new();
    s.push_str(FUSION_HEADER);
    s.push('\n');
    if let Some(c) = comment {
        for l in c.lines() {
            s.push_str(&format!("# {l}\n"));
        }
    }
    let map: Vec<String> = f.map.iter().map(|k| (k + 1).to_string()).collect();
    s.push_str(&format!("sub {}\nsuper {}\nmap {}\n", f.sub.name, f.sup.name, map.join(" ")));
    s
}

/// Binds a fusion file to loaded tables (looked up by name) and checks it.
pub fn bind_fusion(file: &FusionFile, tables: &HashMap<String, Arc<CharacterTable>>) -> Result<ClassFusion> {
    let get = |n: &str| tables.get(n).cloned().ok_or_else(|| Error::MissingData(format!("table {n}")));
    ClassFusion::new(get(&file.sub)?, get(&file.sup)?, file.map.clone())
}

pub fn load_fusion(path: impl AsRef<Path>, tables: &HashMap<String, Arc<CharacterTable>>) -> Result<ClassFusion> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file = parse_fusion(&text).map_err(|e| annotate(path, e))?;
    bind_fusion(&file, tables).map_err(|e| annotate(path, e))
}

/// Whitespace-normalized form used for round-trip comparisons.
pub fn normalize(text: &str) -> String {
    text.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}

/// Exponent from element orders.
pub fn exponent_of(orders: &[u64]) -> u64 {
    orders.iter().fold(1u64, |a, &o| a.lcm(&o))
}

/// A subgroup shipped with its table and fusion into the parent.
#[derive(Clone, Debug)]
pub struct ShippedSubgroup {
    pub parent: String,
    pub name: String,
    pub label: String,
    pub maximal: bool,
    /// A shipped maximal subgroup containing this one, for non-maximal subgroups.
    pub enclosing: Option<String>,
    pub fusion: ClassFusion,
}

/// The tables listed in an `index` file:
///
/// ```text
/// group <name> <table file>
/// subgroup <parent> <name> <label> <table file> <fusion file> <maximal|enclosing>
/// ```
///
/// The last field is `maximal` or the name of a maximal subgroup containing
/// a conjugate of this one.
#[derive(Clone, Debug, Default)]
pub struct TableSet {
    pub tables: HashMap<String, Arc<CharacterTable>>,
    pub groups: Vec<String>,
    pub subgroups: Vec<ShippedSubgroup>,
}

/// Directory of the tables shipped with the crate.
pub fn default_tables_dir() -> std::path::PathBuf {
    if let Ok(d) = std::env::var("GELPAIR_DATA") {
        return Path::new(&d).join("tables");
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("tables")
}

impl TableSet {
    pub fn builtin() -> Result<TableSet> {
        TableSet::load(default_tables_dir())
    }

    /// Loads and verifies every table and fusion named in `dir/index`.
    pub fn load(dir: impl AsRef<Path>) -> Result<TableSet> {
        let dir = dir.as_ref();
        let index = dir.join("index");
        let text = std::fs::read_to_string(&index).map_err(|e| Error::io(&index, e))?;
        let mut set = TableSet::default();
        let mut pending = Vec::new();
        for (n, line) in content_lines(&text) {
            let w: Vec<&str> = line.split_whitespace().collect();
            match (w[0], w.len()) {
                ("group", 3) => {
                    let t = load_table(dir.join(w[2]))?;
                    check_name(&t, w[1])?;
                    set.groups.push(w[1].to_string());
                    set.tables.insert(w[1].to_string(), Arc::new(t));
                }
                ("subgroup", 7) => {
                    let t = load_table(dir.join(w[4]))?;
                    check_name(&t, w[2])?;
                    set.tables.insert(w[2].to_string(), Arc::new(t));
                    pending.push(w.iter().map(|s| s.to_string()).collect::<Vec<_>>());
                }
                _ => return Err(annotate(&index, parse_err(n, format!("bad index line {line:?}")))),
            }
        }
        for w in pending {
            let fusion = load_fusion(dir.join(&w[5]), &set.tables)?;
            if fusion.sub.name != w[2] || fusion.sup.name != w[1] {
                return Err(Error::Data(format!("{}: fusion does not go from {} to {}", w[5], w[2], w[1])));
            }
            set.subgroups.push(ShippedSubgroup {
                parent: w[1].clone(),
                name: w[2].clone(),
                label: w[3].clone(),
                maximal: w[6] == "maximal",
                enclosing: (w[6] != "maximal" && w[6] != "-").then(|| w[6].clone()),
                fusion,
            });
        }
        Ok(set)
    }

    pub fn table(&self, name: &str) -> Result<&Arc<CharacterTable>> {
        self.tables.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn subgroups_of<'a>(&'a self, parent: &'a str) -> impl Iterator<Item = &'a ShippedSubgroup> + 'a {
        self.subgroups.iter().filter(move |s| s.parent == parent)
    }
}

fn check_name(t: &CharacterTable, name: &str) -> Result<()> {
    if t.name != name {
        return Err(Error::Data(format!("table file names {:?}, index says {name:?}", t.name)));
    }
    Ok(())
}
