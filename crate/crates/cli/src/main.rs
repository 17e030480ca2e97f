use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use gelpair::catalog::Catalog;
use gelpair::characters::GroupTable;
use gelpair::chartab::{compute_table, CharacterTable};
use gelpair::gelfand::{classify, is_gelfand_pair, is_strong_gelfand_pair, Mode, NoCuratedData, Strategy};
use gelpair::ingest::{self, TableSet};
use gelpair::perm::text::{parse_group_file, GroupFile};
use gelpair::perm::PermGroup;
use gelpair::{Budget, Error};
use gelpair_cli::suites::{self, Env, Status, Suite};
use gelpair_cli::{exit, exit_code, load_budget};

#[derive(Parser)]
#[command(name = "gelpair", version, about = "Character tables and (strong) Gelfand pairs of permutation groups")]
struct Cli {
    /// TOML file with budget overrides (max_order, max_classes, max_index,
    /// lattice_budget, class_enum_budget).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Print the character table of a catalog group or a table file.
    Table {
        group: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Test whether (G, H) is a Gelfand pair, and with --strong a strong one.
    Check {
        group: String,
        subgroup: String,
        #[arg(long)]
        strong: bool,
    },
    /// All subgroup classes H with (G, H) a (strong) Gelfand pair.
    Classify {
        group: String,
        #[arg(long, default_value = "gelfand")]
        mode: String,
        /// full-lattice or descent; default: full-lattice when the group fits the lattice budget
        #[arg(long)]
        strategy: Option<String>,
        /// Directory for the text and JSON reports.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the reference results.
    VerifyPaper {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Exit with 3 when any claim is skipped.
        #[arg(long)]
        strict: bool,
    },
    /// Load and verify table, fusion or index files (default: the shipped tables).
    IngestVerify { paths: Vec<PathBuf> },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let budget = load_budget(cli.config.as_deref())?;
    match cli.command {
        Command::Table { group, format } => table(&group, format, &budget),
        Command::Check { group, subgroup, strong } => check(&group, &subgroup, strong, &budget),
        Command::Classify { group, mode, strategy, out } => {
            classify_cmd(&group, &mode, strategy.as_deref(), out.as_deref(), &budget)
        }
        Command::VerifyPaper { suite, strict } => verify(&suite, strict, budget),
        Command::IngestVerify { paths } => ingest_verify(&paths),
    }
}

fn is_table_file(s: &str) -> bool {
    Path::new(s).is_file() && s.ends_with(".tbl")
}

fn table(group: &str, format: Format, budget: &Budget) -> anyhow::Result<i32> {
    let t: CharacterTable = if is_table_file(group) {
        ingest::load_table(group)?
    } else {
        let cat = Catalog::builtin()?;
        match cat.entry(group) {
            Ok(_) => {
                let (g, _) = cat.resolve_with(group, budget)?;
                eprintln!("computing the character table of {group} (order {})", g.order());
                compute_table(&g, group, budget)?.1
            }
            Err(_) => {
                let set = TableSet::builtin()?;
                let t = set.table(group)?;
                (**t).clone()
            }
        }
    };
    match format {
        Format::Text => print!("{}", t.render()),
        Format::Machine => print!("{}", ingest::serialize_table(&t, None)),
    }
    Ok(exit::OK)
}

/// A subgroup given as a catalog name or a generator file.
fn resolve_group(cat: &Catalog, name: &str, budget: &Budget) -> anyhow::Result<PermGroup> {
    if Path::new(name).is_file() {
        let text = std::fs::read_to_string(name).map_err(|e| Error::io(name, e))?;
        return match parse_group_file(&text)? {
            GroupFile::Generators { degree, gens, .. } => {
                let gens: Vec<_> = gens.into_iter().filter(|g| !g.is_identity()).collect();
                Ok(if gens.is_empty() { PermGroup::trivial(degree) } else { PermGroup::new(gens)? })
            }
            GroupFile::Subgroup { .. } => bail!(Error::Data(format!(
                "{name}: subgroup files are read through the catalog manifest"
            ))),
        };
    }
    Ok(cat.resolve_with(name, budget)?.0)
}

/// `sub` itself when it lies in `g`, else a catalog subgroup of `group`
/// named `group/sub` or labelled `sub` among its maximal subgroups.
fn resolve_subgroup(
    cat: &Catalog,
    group: &str,
    g: &PermGroup,
    sub: &str,
    budget: &Budget,
) -> anyhow::Result<(String, PermGroup)> {
    let mut names = vec![sub.to_string(), format!("{group}/{sub}"), format!("{group}/{sub}#1")];
    if let Ok(maxes) = cat.maximal_names(group) {
        for m in maxes {
            if cat.entry(m).map(|e| e.label == sub).unwrap_or(false) {
                names.push(m.clone());
            }
        }
    }
    let mut found_any = false;
    for n in names {
        if Path::new(&n).is_file() || cat.entry(&n).is_ok() {
            found_any = true;
            let h = resolve_group(cat, &n, budget)?;
            if h.is_subgroup_of(g) {
                return Ok((n, h));
            }
        }
    }
    if found_any {
        bail!(Error::Data(format!("{sub} is not a subgroup of {group}")));
    }
    bail!(Error::UnknownName(sub.to_string()))
}

fn check(group: &str, subgroup: &str, strong: bool, budget: &Budget) -> anyhow::Result<i32> {
    let cat = Catalog::builtin()?;
    let shipped = cat.entry(group).is_err() && !Path::new(group).is_file();
    let fusion = if shipped {
        let set = TableSet::builtin()?;
        set.table(group)?;
        let s = set
            .subgroups_of(group)
            .find(|s| s.name == subgroup || s.name == format!("{group}/{subgroup}"))
            .ok_or_else(|| Error::UnknownName(format!("{subgroup} (shipped subgroups of {group})")))?;
        s.fusion.clone()
    } else {
        let g = resolve_group(&cat, group, budget)?;
        let (name, h) = resolve_subgroup(&cat, group, &g, subgroup, budget)?;
        if name != subgroup {
            eprintln!("using {name} for {subgroup}");
        }
        eprintln!("computing tables of {group} (order {}) and {name} (order {})", g.order(), h.order());
        let gt = GroupTable::compute(&g, group, budget)?;
        let ht = GroupTable::compute(&h, subgroup, &budget.for_subgroups())?;
        ht.fusion_into(&gt)?
    };
    let v = if strong { is_strong_gelfand_pair(&fusion)? } else { is_gelfand_pair(&fusion)? };
    println!("({group}, {subgroup}) {}", v.line());
    Ok(exit::OK)
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

fn classify_cmd(
    group: &str,
    mode: &str,
    strategy: Option<&str>,
    out: Option<&Path>,
    budget: &Budget,
) -> anyhow::Result<i32> {
    let mode: Mode = mode.parse()?;
    let cat = Catalog::builtin()?;
    let g = resolve_group(&cat, group, budget)?;
    let strategy: Strategy = match strategy {
        Some(s) => s.parse()?,
        None if g.order() <= budget.lattice_budget => Strategy::FullLattice,
        None => Strategy::Descent,
    };
    eprintln!("classifying {group} (order {}), {mode} mode, {strategy}", g.order());
    let t = Instant::now();
    let report = if Path::new(group).is_file() {
        classify(&g, group, mode, strategy, &NoCuratedData, budget)?
    } else {
        classify(&g, group, mode, strategy, &cat, budget)?
    };
    eprintln!("done in {:.2}s", t.elapsed().as_secs_f64());
    let text = report.render_text();
    print!("{text}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let stem = format!("{}-{mode}", slug(group));
        let txt = dir.join(format!("{stem}.txt"));
        let json = dir.join(format!("{stem}.json"));
        std::fs::write(&txt, &text).map_err(|e| Error::io(&txt, e))?;
        std::fs::write(&json, report.to_json() + "\n").map_err(|e| Error::io(&json, e))?;
        eprintln!("wrote {} and {}", txt.display(), json.display());
    }
    Ok(exit::OK)
}

fn verify(suite: &str, strict: bool, budget: Budget) -> anyhow::Result<i32> {
    let suite: Suite = suite.parse().map_err(|e: String| Error::Parse(e))?;
    let mut env = Env::builtin(budget)?;
    env.progress = true;
    let claims = suites::run(suite, &env);
    let (mut pass, mut fail, mut skip, mut cond) = (0, 0, 0, 0);
    for c in &claims {
        println!("{}", c.line());
        match c.status {
            Status::Pass => pass += 1,
            Status::Fail => fail += 1,
            Status::Skip => skip += 1,
        }
        if c.conditional {
            cond += 1;
        }
    }
    println!(
        "summary: {pass} passed, {fail} failed, {skip} skipped; {} fully computed, {cond} conditional-on-data",
        claims.len() - cond
    );
    Ok(if fail > 0 {
        exit::DATA
    } else if strict && skip > 0 {
        exit::STRICT_SKIP
    } else {
        exit::OK
    })
}

fn ingest_verify(paths: &[PathBuf]) -> anyhow::Result<i32> {
    if paths.is_empty() {
        let dir = ingest::default_tables_dir();
        return verify_index(&dir);
    }
    let mut tables: HashMap<String, Arc<CharacterTable>> = HashMap::new();
    let mut fusions = Vec::new();
    for p in paths {
        if p.is_dir() {
            verify_index(p)?;
        } else if p.extension().is_some_and(|e| e == "fus") {
            fusions.push(p.clone());
        } else {
            let t = ingest::load_table(p)?;
            println!("OK table {} order {} classes {} ({})", t.name, t.order, t.len(), p.display());
            tables.insert(t.name.clone(), Arc::new(t));
        }
    }
    for p in fusions {
        let f = ingest::load_fusion(&p, &tables).with_context(|| format!("fusion {}", p.display()))?;
        println!("OK fusion {} -> {} index {} ({})", f.sub.name, f.sup.name, f.index(), p.display());
    }
    Ok(exit::OK)
}

fn verify_index(dir: &Path) -> anyhow::Result<i32> {
    let set = TableSet::load(dir)?;
    for g in &set.groups {
        let t = set.table(g)?;
        println!("OK table {} order {} classes {}", t.name, t.order, t.len());
    }
    for s in &set.subgroups {
        println!(
            "OK fusion {} -> {} order {} index {}{}",
            s.name,
            s.parent,
            s.fusion.sub.order,
            s.fusion.index(),
            if s.maximal { " maximal" } else { "" }
        );
    }
    println!("{} tables, {} fusions verified", set.tables.len(), set.subgroups.len());
    Ok(exit::OK)
}
