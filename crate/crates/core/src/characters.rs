//! Class functions, class fusion, restriction, induction and inner products.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::chartab::CharacterTable;
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::perm::{Classes, PermGroup};

/// A class function on the classes of `table`.
#[derive(Clone, Debug)]
pub struct Character {
    pub table: Arc<CharacterTable>,
    pub values: Vec<Cyclotomic>,
}

/// Subgroup classes mapped to the classes of the parent group.
#[derive(Clone, Debug)]
pub struct ClassFusion {
    pub sub: Arc<CharacterTable>,
    pub sup: Arc<CharacterTable>,
    pub map: Vec<usize>,
}

fn same_table(a: &Arc<CharacterTable>, b: &Arc<CharacterTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn mismatch(a: &CharacterTable, b: &CharacterTable) -> Error {
    Error::TableMismatch(format!("{} vs {}", a.name, b.name))
}

impl Character {
    pub fn new(table: Arc<CharacterTable>, values: Vec<Cyclotomic>) -> Result<Self> {
        if values.len() != table.len() {
            return Err(Error::Precondition(format!(
                "class function has {} values, table {} has {} classes",
                values.len(),
                table.name,
                table.len()
            )));
        }
        Ok(Character { table, values })
    }

    pub fn irreducible(table: &Arc<CharacterTable>, i: usize) -> Self {
        Character { table: table.clone(), values: table.irr[i].clone() }
    }

    pub fn irreducibles(table: &Arc<CharacterTable>) -> Vec<Self> {
        (0..table.len()).map(|i| Self::irreducible(table, i)).collect()
    }

    pub fn trivial(table: &Arc<CharacterTable>) -> Self {
        Character { table: table.clone(), values: vec![Cyclotomic::one(); table.len()] }
    }

    /// Regular character: `|G|` at the identity, zero elsewhere.
    pub fn regular(table: &Arc<CharacterTable>) -> Self {
        let mut values = vec![Cyclotomic::zero(); table.len()];
        values[0] = Cyclotomic::from_int(table.order as i64);
        Character { table: table.clone(), values }
    }

    pub fn degree(&self) -> Option<u64> {
        self.values[0].as_rational_integer().and_then(|d| d.to_u64())
    }

    pub fn conj(&self) -> Self {
        Character { table: self.table.clone(), values: self.values.iter().map(|v| v.conj()).collect() }
    }

    pub fn add(&self, other: &Character) -> Result<Self> {
        if !same_table(&self.table, &other.table) {
            return Err(mismatch(&self.table, &other.table));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Character { table: self.table.clone(), values })
    }
}

/// `(1/|G|) Σ_k |K_k| α(g_k) conj(β(g_k))`.
pub fn inner_product(a: &Character, b: &Character) -> Result<Cyclotomic> {
    if !same_table(&a.table, &b.table) {
        return Err(mismatch(&a.table, &b.table));
    }
    let t = &a.table;
    let s: Cyclotomic = (0..t.len())
        .filter(|&k| !a.values[k].is_zero() && !b.values[k].is_zero())
        .map(|k| (&a.values[k] * &b.values[k].conj()).scale(&BigRational::from_integer(t.classes.sizes[k].into())))
        .sum();
    Ok(s.scale(&BigRational::new(BigInt::one(), BigInt::from(t.order))))
}

/// Inner product of two true characters, certified to be a non-negative integer.
pub fn multiplicity(a: &Character, b: &Character) -> Result<u64> {
    let v = inner_product(a, b)?;
    match v.as_rational_integer() {
        Some(m) if !m.is_negative() => m
            .to_u64()
            .ok_or_else(|| Error::Verification(format!("multiplicity {m} out of range"))),
        _ => Err(Error::Verification(format!(
            "inner product of characters of {} is {v}, not a non-negative integer",
            a.table.name
        ))),
    }
}

/// Multiplicities of the irreducibles in a true character; zero multiplicities omitted.
pub fn decompose(a: &Character) -> Result<Vec<(usize, u64)>> {
    let t = &a.table;
    let mut out = Vec::new();
    let mut deg = 0u64;
    for (i, row) in t.irr.iter().enumerate() {
        let chi = Character { table: t.clone(), values: row.clone() };
        let m = multiplicity(a, &chi)?;
        if m > 0 {
            deg += m * chi.degree().unwrap_or(0);
            out.push((i, m));
        }
    }
    match a.degree() {
        Some(d) if d == deg => Ok(out),
        _ => Err(Error::Verification(format!(
            "decomposition over {} accounts for degree {deg}, character has degree {}",
            t.name, a.values[0]
        ))),
    }
}

impl ClassFusion {
    pub fn identity(table: &Arc<CharacterTable>) -> Self {
        ClassFusion { sub: table.clone(), sup: table.clone(), map: (0..table.len()).collect() }
    }

    pub fn new(sub: Arc<CharacterTable>, sup: Arc<CharacterTable>, map: Vec<usize>) -> Result<Self> {
        let f = ClassFusion { sub, sup, map };
        f.check()?;
        Ok(f)
    }

    /// Identity to identity, element orders preserved, centralizer orders divide.
    pub fn check(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Verification(format!("fusion {} -> {}: {m}", self.sub.name, self.sup.name)));
        if self.map.len() != self.sub.len() {
            return fail(format!("{} entries for {} classes", self.map.len(), self.sub.len()));
        }
        if self.sup.order % self.sub.order != 0 {
            return fail(format!("order {} does not divide {}", self.sub.order, self.sup.order));
        }
        if self.map.first() != Some(&0) {
            return fail("identity class is not mapped to the identity class".into());
        }
        let (hc, gc) = (&self.sub.classes, &self.sup.classes);
        for (c, &k) in self.map.iter().enumerate() {
            if k >= self.sup.len() {
                return fail(format!("class index {} out of range", k + 1));
            }
            if hc.element_orders[c] != gc.element_orders[k] {
                return fail(format!(
                    "class {} of element order {} mapped to class {} of element order {}",
                    self.sub.class_names[c], hc.element_orders[c], self.sup.class_names[k], gc.element_orders[k]
                ));
            }
            if gc.centralizer_orders[k] % hc.centralizer_orders[c] != 0 {
                return fail(format!(
                    "centralizer order {} of class {} does not divide {}",
                    hc.centralizer_orders[c], self.sub.class_names[c], gc.centralizer_orders[k]
                ));
            }
        }
        // the classes fusing into each G-class cannot exceed it
        let mut count = vec![0u64; self.sup.len()];
        for (c, &k) in self.map.iter().enumerate() {
            count[k] += hc.sizes[c];
        }
        for (k, &n) in count.iter().enumerate() {
            if n > gc.sizes[k] {
                return fail(format!("{n} subgroup elements fuse into class {} of size {}", self.sup.class_names[k], gc.sizes[k]));
            }
        }
        Ok(())
    }

    pub fn index(&self) -> u64 {
        self.sup.order / self.sub.order
    }
}

/// Fusion of the classes of `h` into those of `g`, by locating each class
/// representative of `h`. Generators of `h` are membership-checked first.
pub fn compute_fusion(
    g: &Classes,
    h: &Classes,
    g_table: &Arc<CharacterTable>,
    h_table: &Arc<CharacterTable>,
) -> Result<ClassFusion> {
    let (gg, hg): (&PermGroup, &PermGroup) = (g.group(), h.group());
    for x in hg.generators() {
        if !gg.contains(x)? {
            return Err(Error::NotMember(format!("generator {} of {} in {}", x, h_table.name, g_table.name)));
        }
    }
    if g.data != g_table.classes || h.data != h_table.classes {
        return Err(Error::Precondition("tables were not computed from these classes".into()));
    }
    let map = h.data.reps.iter().map(|r| g.class_of(r)).collect::<Result<Vec<_>>>()?;
    ClassFusion::new(h_table.clone(), g_table.clone(), map)
}

pub fn restrict(chi: &Character, f: &ClassFusion) -> Result<Character> {
    if !same_table(&chi.table, &f.sup) {
        return Err(mismatch(&chi.table, &f.sup));
    }
    Ok(Character { table: f.sub.clone(), values: f.map.iter().map(|&k| chi.values[k].clone()).collect() })
}

/// `ψ↑G(g) = |C_G(g)| Σ_{c ↦ [g]} ψ(c) / |C_H(c)|`.
pub fn induce(psi: &Character, f: &ClassFusion) -> Result<Character> {
    if !same_table(&psi.table, &f.sub) {
        return Err(mismatch(&psi.table, &f.sub));
    }
    let mut values = vec![Cyclotomic::zero(); f.sup.len()];
    for (c, &k) in f.map.iter().enumerate() {
        if psi.values[c].is_zero() {
            continue;
        }
        let w = BigRational::new(
            BigInt::from(f.sup.classes.centralizer_orders[k]),
            BigInt::from(f.sub.classes.centralizer_orders[c]),
        );
        values[k] = &values[k] + &psi.values[c].scale(&w);
    }
    Ok(Character { table: f.sup.clone(), values })
}

/// `1_H↑G`.
pub fn permutation_character(f: &ClassFusion) -> Result<Character> {
    induce(&Character::trivial(&f.sub), f)
}

/// Character, classes and group kept together.
#[derive(Debug)]
pub struct GroupTable {
    pub classes: Classes,
    pub table: Arc<CharacterTable>,
}

impl GroupTable {
    pub fn compute(g: &PermGroup, name: &str, budget: &crate::Budget) -> Result<Self> {
        let (classes, table) = crate::chartab::compute_table(g, name, budget)?;
        Ok(GroupTable { classes, table: Arc::new(table) })
    }

    pub fn group(&self) -> &PermGroup {
        self.classes.group()
    }

    pub fn fusion_into(&self, parent: &GroupTable) -> Result<ClassFusion> {
        compute_fusion(&parent.classes, &self.classes, &parent.table, &self.table)
    }
}

/// True when every value is zero.
pub fn is_zero_function(a: &Character) -> bool {
    a.values.iter().all(|v| v.is_zero())
}
