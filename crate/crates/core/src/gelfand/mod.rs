//! Gelfand and strong Gelfand pair predicates.

mod classify;
mod report;

use serde::Serialize;

pub use classify::{classify, Curated, CuratedSub, NoCuratedData, Strategy};
pub use report::{ClassificationReport, ReportEntry, TestRecord};

use crate::characters::{decompose, induce, permutation_character, restrict, Character, ClassFusion, GroupTable};
use crate::config::Budget;
use crate::error::{Error, Result};
use crate::perm::{coset_action, PermGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Gelfand,
    Strong,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gelfand" => Ok(Mode::Gelfand),
            "strong" => Ok(Mode::Strong),
            _ => Err(Error::Parse(format!("unknown mode {s:?} (expected gelfand or strong)"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Gelfand => "gelfand",
            Mode::Strong => "strong",
        })
    }
}

/// `⟨χ↓H, ψ⟩ = multiplicity ≥ 2`; indices into the irreducibles of G and H.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub chi: usize,
    pub psi: usize,
    pub multiplicity: u64,
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<X.{}|H, Y.{}> = {}", self.chi + 1, self.psi + 1, self.multiplicity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub group: String,
    pub subgroup: String,
    pub is_gelfand: bool,
    /// `None` when only the Gelfand property was tested.
    pub is_strong_gelfand: Option<bool>,
    pub witness: Option<Witness>,
}

impl PairVerdict {
    pub fn passes(&self, mode: Mode) -> bool {
        match mode {
            Mode::Gelfand => self.is_gelfand,
            Mode::Strong => self.is_strong_gelfand == Some(true),
        }
    }

    pub fn line(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let strong = match self.is_strong_gelfand {
            Some(b) => yn(b).to_string(),
            None => "(skipped)".to_string(),
        };
        let mut s = format!("GELFAND {} STRONG {}", yn(self.is_gelfand), strong);
        if let Some(w) = &self.witness {
            s.push_str(&format!(" witness {w}"));
        }
        s
    }
}

/// Multiplicity-freeness of `1_H↑G`.
pub fn gelfand_test(f: &ClassFusion) -> Result<Option<Witness>> {
    let pi = permutation_character(f)?;
    let first = decompose(&pi)?.into_iter().find(|&(_, m)| m > 1);
    Ok(first.map(|(chi, m)| Witness { chi, psi: 0, multiplicity: m }))
}

/// Every `χ↓H` multiplicity-free; stops at the first failure.
pub fn strong_test_restriction(f: &ClassFusion) -> Result<Option<Witness>> {
    for (chi, c) in Character::irreducibles(&f.sup).iter().enumerate() {
        let r = restrict(c, f)?;
        if let Some((psi, m)) = decompose(&r)?.into_iter().find(|&(_, m)| m > 1) {
            return Ok(Some(Witness { chi, psi, multiplicity: m }));
        }
    }
    Ok(None)
}

/// Every `ψ↑G` multiplicity-free (the loop over `Irr(H)`).
pub fn strong_test_induction(f: &ClassFusion) -> Result<Option<Witness>> {
    for (psi, p) in Character::irreducibles(&f.sub).iter().enumerate() {
        let ind = induce(p, f)?;
        if let Some((chi, m)) = decompose(&ind)?.into_iter().find(|&(_, m)| m > 1) {
            return Ok(Some(Witness { chi, psi, multiplicity: m }));
        }
    }
    Ok(None)
}

pub fn is_gelfand_pair(f: &ClassFusion) -> Result<PairVerdict> {
    let w = gelfand_test(f)?;
    Ok(PairVerdict {
        group: f.sup.name.clone(),
        subgroup: f.sub.name.clone(),
        is_gelfand: w.is_none(),
        is_strong_gelfand: None,
        witness: w,
    })
}

pub fn is_strong_gelfand_pair(f: &ClassFusion) -> Result<PairVerdict> {
    let w = strong_test_restriction(f)?;
    let is_gelfand = match &w {
        None => true,
        Some(w) if w.psi == 0 => false,
        Some(_) => gelfand_test(f)?.is_none(),
    };
    Ok(PairVerdict {
        group: f.sup.name.clone(),
        subgroup: f.sub.name.clone(),
        is_gelfand,
        is_strong_gelfand: Some(w.is_none()),
        witness: w,
    })
}

pub fn verdict(f: &ClassFusion, mode: Mode) -> Result<PairVerdict> {
    match mode {
        Mode::Gelfand => is_gelfand_pair(f),
        Mode::Strong => is_strong_gelfand_pair(f),
    }
}

/// `G ⊴ E` with `E/G` abelian; then `(E, G)` is expected to be a strong
/// Gelfand pair. A negative verdict is returned as an error. It cannot occur
/// for cyclic `E/G`; for other abelian quotients it can (`D8` over its centre).
pub fn verify_extension_theorem(e: &GroupTable, g: &GroupTable) -> Result<PairVerdict> {
    let (eg, gg) = (e.group(), g.group());
    if !gg.is_subgroup_of(eg) {
        return Err(Error::Precondition(format!("{} is not a subgroup of {}", g.table.name, e.table.name)));
    }
    if !gg.is_normalized_by(eg) {
        return Err(Error::Precondition(format!("{} is not normal in {}", g.table.name, e.table.name)));
    }
    let gens = eg.generators();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = a.inverse().mul(&b.inverse()).mul(a).mul(b);
            if !gg.is_member(&c) {
                return Err(Error::Precondition(format!(
                    "{}/{} is not abelian",
                    e.table.name, g.table.name
                )));
            }
        }
    }
    let f = g.fusion_into(e)?;
    let v = is_strong_gelfand_pair(&f)?;
    if v.is_strong_gelfand != Some(true) {
        return Err(Error::Verification(format!(
            "({}, {}) with abelian quotient is not strong Gelfand: {}",
            e.table.name,
            g.table.name,
            v.line()
        )));
    }
    Ok(v)
}

/// Images of `G` and `H` in `G/N` for `N ⊴ G`, `N ≤ H ≤ G`. The action on the
/// cosets of `H` is used when its kernel is exactly `N`, else the action on
/// the cosets of `N`.
pub fn quotient_reduce(g: &PermGroup, h: &PermGroup, n: &PermGroup, budget: &Budget) -> Result<(PermGroup, PermGroup)> {
    if !h.is_subgroup_of(g) {
        return Err(Error::Precondition("H is not a subgroup of G".into()));
    }
    if !n.is_subgroup_of(h) {
        return Err(Error::Precondition("N is not a subgroup of H".into()));
    }
    if !n.is_normalized_by(g) {
        return Err(Error::Precondition("N is not normal in G".into()));
    }
    let by_h = coset_action(g, h, budget)?;
    let act = if by_h.kernel_order == n.order() { by_h } else { coset_action(g, n, budget)? };
    let image_gens: Vec<_> = h.generators().iter().map(|x| act.image_of(x)).filter(|x| !x.is_identity()).collect();
    let hq = if image_gens.is_empty() {
        PermGroup::trivial(act.image.degree())
    } else {
        PermGroup::with_order(image_gens, h.order() / n.order())?
    };
    Ok((act.image, hq))
}
