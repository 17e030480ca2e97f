//! Text format for generator data.
//!
//! ```text
//! # comment
//! degree 11
//! (1,2,3,4,5,6,7,8,9,10,11)
//! (3,7,11,8)(4,10,5,6)
//! ```
//!
//! Subgroup files start with `subgroup-of <name>` and list either
//! permutations in the parent's degree or `stabilizer <point>` lines
//! (1-based, applied in order).

use super::permutation::Perm;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupFile {
    Generators {
        degree: usize,
        gens: Vec<Perm>,
        comments: Vec<String>,
    },
    Subgroup {
        parent: String,
        body: SubgroupBody,
        comments: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupBody {
    /// Cycle strings, parsed once the parent's degree is known.
    Generators(Vec<String>),
    /// 0-based points to stabilize, in order.
    Stabilizer(Vec<usize>),
}

impl GroupFile {
    pub fn comments(&self) -> &[String] {
        match self {
            GroupFile::Generators { comments, .. } | GroupFile::Subgroup { comments, .. } => comments,
        }
    }
}

pub fn parse_group_file(text: &str) -> Result<GroupFile> {
    let mut comments = Vec::new();
    let mut lines = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        lines.push((no + 1, line));
    }
    let (first_no, first) = *lines
        .first()
        .ok_or_else(|| Error::Parse("empty group file".into()))?;
    let err = |no: usize, msg: String| Error::Parse(format!("line {no}: {msg}"));

    if let Some(rest) = first.strip_prefix("degree") {
        let degree: usize = rest
            .trim()
            .parse()
            .map_err(|_| err(first_no, format!("bad degree {:?}", rest.trim())))?;
        if degree == 0 {
            return Err(err(first_no, "degree 0 is not allowed".into()));
        }
        let mut gens = Vec::new();
        for &(no, line) in &lines[1..] {
            gens.push(Perm::parse_cycles(line, degree).map_err(|e| err(no, e.to_string()))?);
        }
        return Ok(GroupFile::Generators {
            degree,
            gens,
            comments,
        });
    }
    if let Some(rest) = first.strip_prefix("subgroup-of") {
        let parent = rest.trim().to_string();
        if parent.is_empty() {
            return Err(err(first_no, "missing parent name".into()));
        }
        let mut perms = Vec::new();
        let mut stab = Vec::new();
        for &(no, line) in &lines[1..] {
            if let Some(p) = line.strip_prefix("stabilizer") {
                let pt: usize = p
                    .trim()
                    .parse()
                    .map_err(|_| err(no, format!("bad point {:?}", p.trim())))?;
                if pt == 0 {
                    return Err(err(no, "points are 1-based".into()));
                }
                stab.push(pt - 1);
            } else if line.starts_with('(') {
                perms.push(line.to_string());
            } else {
                return Err(err(no, format!("unexpected line {line:?}")));
            }
        }
        let body = match (perms.is_empty(), stab.is_empty()) {
            (false, true) => SubgroupBody::Generators(perms),
            (true, false) => SubgroupBody::Stabilizer(stab),
            (true, true) => return Err(err(first_no, "subgroup file lists no generators".into())),
            (false, false) => {
                return Err(err(first_no, "mixes generators and stabilizer directives".into()))
            }
        };
        return Ok(GroupFile::Subgroup {
            parent,
            body,
            comments,
        });
    }
    Err(err(first_no, format!("expected `degree N` or `subgroup-of NAME`, got {first:?}")))
}

/// Writes generators in the group file format.
pub fn write_group_file(degree: usize, gens: &[Perm], comment: &str) -> String {
    let mut s = String::new();
    for c in comment.lines() {
        s.push_str("# ");
        s.push_str(c);
        s.push('\n');
    }
    s.push_str(&format!("degree {degree}\n"));
    for g in gens {
        s.push_str(&g.to_cycle_string());
        s.push('\n');
    }
    s
}
