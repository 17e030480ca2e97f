//! Reference results for the Mathieu, sporadic, cover and Tits suites, and
//! the checks that reproduce them.

use std::collections::BTreeMap;
use std::time::Instant;

use gelpair::catalog::Catalog;
use gelpair::gelfand::{classify, verdict, ClassificationReport, Mode, Strategy};
use gelpair::ingest::TableSet;
use gelpair::{Budget, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Mathieu,
    SporadicCore,
    Covers,
    Tits,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mathieu" => Ok(Suite::Mathieu),
            "sporadic-core" => Ok(Suite::SporadicCore),
            "covers" => Ok(Suite::Covers),
            "tits" => Ok(Suite::Tits),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite {s:?} (mathieu, sporadic-core, covers, tits, all)")),
        }
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Mathieu => "mathieu",
            Suite::SporadicCore => "sporadic-core",
            Suite::Covers => "covers",
            Suite::Tits => "tits",
            Suite::All => "all",
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::SporadicCore, Suite::Covers, Suite::Mathieu, Suite::Tits],
            s => vec![s],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Claim {
    pub suite: &'static str,
    pub text: String,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
    /// Rests on curated maximal-subgroup lists or shipped tables.
    pub conditional: bool,
}

impl Claim {
    pub fn line(&self) -> String {
        let tag = if self.conditional { " [conditional-on-data]" } else { "" };
        let mut s = format!("{} {:>8.2}s  {}: {}{}", self.status, self.seconds, self.suite, self.text, tag);
        if !self.detail.is_empty() {
            s.push_str(&format!("\n       {}", self.detail));
        }
        s
    }
}

/// An expected report row. `under` is the order of the enclosing maximal
/// subgroup, `None` for maximal subgroups.
#[derive(Clone, Copy, Debug)]
pub struct Row {
    pub label: &'static str,
    pub order: u64,
    pub under: Option<u64>,
    pub multiplicity: u64,
}

const fn row(label: &'static str, order: u64, under: Option<u64>, multiplicity: u64) -> Row {
    Row { label, order, under, multiplicity }
}

/// Gelfand subgroups of the point-stabilizer Mathieu groups.
pub const MATHIEU_ROWS: &[(&str, Strategy, &[Row])] = &[
    ("M7", Strategy::FullLattice, &[]),
    ("M8", Strategy::FullLattice, &[row("4", 4, None, 3), row("2", 2, Some(4), 1)]),
    ("M9", Strategy::FullLattice, &[row("3^2:4", 36, None, 3)]),
    ("M10", Strategy::FullLattice, &[row("A6", 360, None, 1)]),
    (
        "M20",
        Strategy::FullLattice,
        &[
            row("2^4:D10", 160, None, 1),
            row("2^4:5", 80, Some(160), 1),
            row("4^2:A4", 192, None, 1),
            row("4^2:3", 48, Some(192), 2),
            row("2^4:3", 48, Some(192), 2),
        ],
    ),
    ("M21", Strategy::Descent, &[row("M20", 960, None, 2)]),
];

/// Strong Gelfand maximal subgroups of the sporadic Mathieu groups.
pub const SPORADIC_ROWS: &[(&str, &[Row])] = &[
    ("M11", &[row("M10", 720, None, 1), row("L2(11)", 660, None, 1)]),
    ("M12", &[row("M11", 7920, None, 2)]),
    ("M22", &[row("L3(4)", 20160, None, 1)]),
];

/// Strong Gelfand subgroups of the automorphism groups and the double cover.
pub const COVER_ROWS: &[(&str, &[Row])] = &[
    ("M12.2", &[row("M12", 95040, None, 1), row("M11", 7920, Some(95040), 1)]),
    ("M22.2", &[row("M22", 443520, None, 1)]),
    ("2.M12", &[row("2xM11", 15840, None, 2), row("M11", 7920, Some(15840), 2)]),
];

/// Gelfand subgroups of the Tits group.
pub const TITS_ROWS: &[Row] = &[
    row("L2(25)", 7800, None, 1),
    row("L3(3)", 5616, Some(11232), 2),
    row("L3(3):2", 11232, None, 2),
    row("2^5.2^3.A4", 3072, Some(6144), 1),
    row("2^5.2^3.S4", 6144, None, 1),
    row("2^5.2^4.F5", 10240, None, 1),
];

/// Number of Gelfand subgroup classes of 2F4(2).
pub const F42_GELFAND_COUNT: usize = 10;

/// Label spellings that name the same group.
const ALIASES: &[(&str, &str)] = &[("M20", "2^4:A5")];

fn same_label(a: &str, b: &str) -> bool {
    a == b || ALIASES.iter().any(|&(x, y)| (a == x && b == y) || (a == y && b == x))
}

type Key = (u64, Option<u64>, u64);

fn rows_of(report: &ClassificationReport) -> Vec<(String, Key)> {
    report
        .entries
        .iter()
        .map(|e| (e.label.clone(), (e.order, e.maximal_order, e.multiplicity)))
        .collect()
}

fn fmt_rows(rows: &[(String, Key)]) -> String {
    let parts: Vec<String> = rows
        .iter()
        .map(|(l, (o, u, m))| match u {
            Some(u) => format!("{l} {o} <{u} x{m}"),
            None => format!("{l} {o} x{m}"),
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

/// Compares rows as multisets of (label, order, enclosing order, multiplicity).
pub fn compare_rows(got: &[(String, Key)], want: &[Row]) -> std::result::Result<(), String> {
    let mut left: Vec<&(String, Key)> = got.iter().collect();
    let mut missing = Vec::new();
    for w in want {
        let key = (w.order, w.under, w.multiplicity);
        match left.iter().position(|(l, k)| *k == key && same_label(l, w.label)) {
            Some(i) => {
                left.remove(i);
            }
            None => missing.push((w.label.to_string(), key)),
        }
    }
    if missing.is_empty() && left.is_empty() {
        return Ok(());
    }
    let extra: Vec<(String, Key)> = left.into_iter().cloned().collect();
    Err(format!(
        "expected {}; got {}; missing {}; unexpected {}",
        fmt_rows(&want.iter().map(|w| (w.label.to_string(), (w.order, w.under, w.multiplicity))).collect::<Vec<_>>()),
        fmt_rows(got),
        fmt_rows(&missing),
        fmt_rows(&extra)
    ))
}

/// Catalog, shipped tables and budget shared by the suites.
pub struct Env {
    pub catalog: Catalog,
    pub tables: std::result::Result<TableSet, String>,
    pub budget: Budget,
    pub progress: bool,
}

impl Env {
    pub fn builtin(budget: Budget) -> Result<Env> {
        Ok(Env {
            catalog: Catalog::builtin()?,
            tables: TableSet::builtin().map_err(|e| e.to_string()),
            budget,
            progress: false,
        })
    }

    fn note(&self, msg: &str) {
        if self.progress {
            eprintln!("[verify] {msg}");
        }
    }

    fn classify(&self, name: &str, mode: Mode, strategy: Strategy) -> Result<ClassificationReport> {
        self.note(&format!("classify {name} ({mode}, {strategy})"));
        let (g, _) = self.catalog.resolve_with(name, &self.budget)?;
        classify(&g, name, mode, strategy, &self.catalog, &self.budget)
    }
}

struct Out<'a> {
    suite: &'static str,
    claims: &'a mut Vec<Claim>,
}

impl Out<'_> {
    fn push(&mut self, text: String, res: std::result::Result<(), String>, seconds: f64, conditional: bool) {
        let (status, detail) = match res {
            Ok(()) => (Status::Pass, String::new()),
            Err(d) => (Status::Fail, d),
        };
        self.claims.push(Claim { suite: self.suite, text, status, detail, seconds, conditional });
    }

    fn skip(&mut self, text: String, why: String, conditional: bool) {
        self.claims.push(Claim { suite: self.suite, text, status: Status::Skip, detail: why, seconds: 0.0, conditional });
    }

    /// Errors from missing data or budgets become SKIP lines, others FAIL.
    fn error(&mut self, text: String, e: &Error, seconds: f64, conditional: bool) {
        match e {
            Error::MissingData(_) | Error::Budget { .. } | Error::Io { .. } => self.skip(text, e.to_string(), conditional),
            _ => self.push(text, Err(e.to_string()), seconds, conditional),
        }
    }
}

/// Runs a suite; claims come back in a fixed order.
pub fn run(suite: Suite, env: &Env) -> Vec<Claim> {
    let mut claims = Vec::new();
    for part in suite.parts() {
        let mut out = Out { suite: part.name(), claims: &mut claims };
        match part {
            Suite::SporadicCore => sporadic_core(env, &mut out),
            Suite::Covers => covers(env, &mut out),
            Suite::Mathieu => mathieu(env, &mut out),
            Suite::Tits => tits(env, &mut out),
            Suite::All => unreachable!(),
        }
    }
    claims
}

fn mathieu(env: &Env, out: &mut Out) {
    for &(name, strategy, rows) in MATHIEU_ROWS {
        let conditional = strategy == Strategy::Descent;
        let t = Instant::now();
        match env.classify(name, Mode::Gelfand, strategy) {
            Ok(r) => out.push(
                format!("Gelfand subgroups of {name} ({strategy}) match the reference rows"),
                compare_rows(&rows_of(&r), rows),
                t.elapsed().as_secs_f64(),
                conditional,
            ),
            Err(e) => out.error(format!("Gelfand subgroups of {name}"), &e, t.elapsed().as_secs_f64(), conditional),
        }
        // strong pairs: the Gelfand rows, except M8 where only the maximal ones
        let strong: Vec<Row> = if name == "M8" {
            rows.iter().copied().filter(|r| r.under.is_none()).collect()
        } else {
            rows.to_vec()
        };
        let t = Instant::now();
        let what = if name == "M8" { "the maximal Gelfand rows" } else { "the Gelfand rows" };
        match env.classify(name, Mode::Strong, strategy) {
            Ok(r) => out.push(
                format!("strong Gelfand subgroups of {name} are {what}"),
                compare_rows(&rows_of(&r), &strong),
                t.elapsed().as_secs_f64(),
                conditional,
            ),
            Err(e) => out.error(format!("strong Gelfand subgroups of {name}"), &e, t.elapsed().as_secs_f64(), conditional),
        }
    }
}

fn sporadic_core(env: &Env, out: &mut Out) {
    for &(name, rows) in SPORADIC_ROWS {
        let t = Instant::now();
        let r = match env.classify(name, Mode::Strong, Strategy::Descent) {
            Ok(r) => r,
            Err(e) => {
                out.error(format!("strong Gelfand subgroups of {name}"), &e, t.elapsed().as_secs_f64(), true);
                continue;
            }
        };
        let secs = t.elapsed().as_secs_f64();
        maximal_claims(out, name, &r, rows, secs);
        out.push(
            format!("descent below the strong pairs of {name} finds no further strong Gelfand subgroups"),
            compare_rows(&rows_of(&r), rows),
            secs,
            true,
        );
    }
}

/// One claim per expected maximal pair, one for the rejection of the others.
fn maximal_claims(out: &mut Out, name: &str, r: &ClassificationReport, rows: &[Row], secs: f64) {
    let maxima: Vec<_> = r.tested.iter().filter(|t| t.maximal).collect();
    let mut passing: BTreeMap<&str, u64> = BTreeMap::new();
    for t in maxima.iter().filter(|t| t.verdict.passes(Mode::Strong)) {
        *passing.entry(t.label.as_str()).or_default() += 1;
    }
    for w in rows.iter().filter(|w| w.under.is_none()) {
        let got = passing.iter().find(|(l, _)| same_label(l, w.label)).map(|(_, &c)| c).unwrap_or(0);
        let times = if w.multiplicity > 1 { format!(", {} classes", w.multiplicity) } else { String::new() };
        out.push(
            format!("({name}, {}) is a strong Gelfand pair{times}", w.label),
            if got == w.multiplicity {
                Ok(())
            } else {
                Err(format!("{got} strong Gelfand maximal classes labelled {}", w.label))
            },
            secs,
            true,
        );
    }
    let mut bad = Vec::new();
    for t in &maxima {
        let expected = rows.iter().any(|w| w.under.is_none() && same_label(&t.label, w.label));
        if expected {
            continue;
        }
        match (&t.verdict.is_strong_gelfand, &t.verdict.witness) {
            (Some(false), Some(_)) => {}
            _ => bad.push(format!("{} ({})", t.descriptor, t.verdict.line())),
        }
    }
    out.push(
        format!("every other maximal subgroup of {name} ({} tested) fails with a witness", maxima.len()),
        if bad.is_empty() { Ok(()) } else { Err(bad.join("; ")) },
        secs,
        true,
    );
}

fn covers(env: &Env, out: &mut Out) {
    for &(name, rows) in COVER_ROWS {
        let t = Instant::now();
        let r = match env.classify(name, Mode::Strong, Strategy::Descent) {
            Ok(r) => r,
            Err(e) => {
                out.error(format!("strong Gelfand subgroups of {name}"), &e, t.elapsed().as_secs_f64(), true);
                continue;
            }
        };
        let secs = t.elapsed().as_secs_f64();
        let got = rows_of(&r);
        for w in rows {
            let found = got
                .iter()
                .find(|(l, (o, u, _))| same_label(l, w.label) && *o == w.order && *u == w.under)
                .map(|(_, (_, _, m))| *m)
                .unwrap_or(0);
            let times = if w.multiplicity > 1 { format!(", {} classes", w.multiplicity) } else { String::new() };
            out.push(
                format!("({name}, {}) is a strong Gelfand pair{times}", w.label),
                if found == w.multiplicity { Ok(()) } else { Err(format!("found {found} classes")) },
                secs,
                true,
            );
        }
        let total: u64 = rows.iter().map(|w| w.multiplicity).sum();
        out.push(
            format!(
                "{name} has exactly {total} strong Gelfand subgroup class{}",
                if total == 1 { "" } else { "es" }
            ),
            compare_rows(&got, rows),
            secs,
            true,
        );
    }
}

fn tits(env: &Env, out: &mut Out) {
    let set = match &env.tables {
        Ok(s) => s,
        Err(e) => {
            out.skip("Gelfand subgroups of the Tits group".into(), e.clone(), true);
            out.skip("the Tits group has no strong Gelfand subgroup".into(), e.clone(), true);
            out.skip("(2F4(2), Tits) is a strong Gelfand pair".into(), e.clone(), true);
            out.skip(format!("2F4(2) has {F42_GELFAND_COUNT} Gelfand subgroups"), e.clone(), true);
            co0(out);
            return;
        }
    };
    let t = Instant::now();
    let tits = shipped_verdicts(set, "Tits");
    let secs = t.elapsed().as_secs_f64();
    match &tits {
        Ok(v) => {
            let rows = shipped_rows(set, v, Mode::Gelfand);
            out.push(
                format!("Gelfand subgroups of the Tits group over {} shipped classes match the reference rows", v.len()),
                compare_rows(&rows, TITS_ROWS),
                secs,
                true,
            );
            let strong: Vec<&str> = v.iter().filter(|(_, p)| p.passes(Mode::Strong)).map(|(n, _)| n.as_str()).collect();
            out.push(
                format!("no shipped subgroup of the Tits group ({} classes) is strong Gelfand", v.len()),
                if strong.is_empty() { Ok(()) } else { Err(format!("strong: {}", strong.join(", "))) },
                secs,
                true,
            );
        }
        Err(e) => {
            out.error("Gelfand subgroups of the Tits group".into(), e, secs, true);
            out.error("the Tits group has no strong Gelfand subgroup".into(), e, secs, true);
        }
    }
    let t = Instant::now();
    let big = shipped_verdicts(set, "2F4(2)");
    let secs = t.elapsed().as_secs_f64();
    match &big {
        Ok(v) => {
            let strong: Vec<&str> = v
                .iter()
                .filter(|(_, p)| p.passes(Mode::Strong))
                .map(|(n, _)| set.subgroups.iter().find(|s| &s.name == n).map(|s| s.label.as_str()).unwrap_or(n))
                .collect();
            out.push(
                "(2F4(2), Tits) is a strong Gelfand pair, the only one among shipped subgroups".into(),
                if strong == ["Tits"] { Ok(()) } else { Err(format!("strong: [{}]", strong.join(", "))) },
                secs,
                true,
            );
            let gel = v.iter().filter(|(_, p)| p.is_gelfand).count();
            out.push(
                format!("2F4(2) has {F42_GELFAND_COUNT} Gelfand subgroups among {} shipped classes", v.len()),
                if gel == F42_GELFAND_COUNT { Ok(()) } else { Err(format!("found {gel}")) },
                secs,
                true,
            );
        }
        Err(e) => {
            out.error("(2F4(2), Tits) is a strong Gelfand pair".into(), e, secs, true);
            out.error(format!("2F4(2) has {F42_GELFAND_COUNT} Gelfand subgroups"), e, secs, true);
        }
    }
    co0(out);
}

fn co0(out: &mut Out) {
    out.skip(
        "Gelfand subgroups of Co0".into(),
        "no shipped tables for Co0 = 2.Co1 (order 8315553613086720000)".into(),
        true,
    );
}

/// Strong verdicts (which also carry the Gelfand bit) for every shipped subgroup.
pub fn shipped_verdicts(set: &TableSet, parent: &str) -> Result<Vec<(String, gelpair::gelfand::PairVerdict)>> {
    set.table(parent)?;
    set.subgroups_of(parent)
        .map(|s| Ok((s.name.clone(), verdict(&s.fusion, Mode::Strong)?)))
        .collect()
}

/// Passing shipped subgroups grouped like a classification report.
pub fn shipped_rows(
    set: &TableSet,
    verdicts: &[(String, gelpair::gelfand::PairVerdict)],
    mode: Mode,
) -> Vec<(String, Key)> {
    let mut rows: Vec<(String, Key)> = Vec::new();
    for (name, v) in verdicts {
        if !v.passes(mode) {
            continue;
        }
        let s = set.subgroups.iter().find(|s| &s.name == name).expect("verdict for a shipped subgroup");
        let under = s
            .enclosing
            .as_ref()
            .and_then(|e| set.tables.get(e))
            .map(|t| t.order);
        let key = (s.fusion.sub.order, under, 1);
        match rows.iter_mut().find(|(l, k)| *l == s.label && (k.0, k.1) == (key.0, key.1)) {
            Some(r) => r.1 .2 += 1,
            None => rows.push((s.label.clone(), key)),
        }
    }
    rows.sort_by(|a, b| b.1 .0.cmp(&a.1 .0).then_with(|| a.0.cmp(&b.0)));
    rows
}
