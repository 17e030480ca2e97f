use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::perm::ClassData;

/// Irreducible characters of a group, rows = characters, columns = classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub name: String,
    pub order: u64,
    pub exponent: u64,
    pub class_names: Vec<String>,
    pub classes: ClassData,
    pub irr: Vec<Vec<Cyclotomic>>,
}

/// ATLAS-style names: element order followed by a letter per class of that order.
pub fn class_names(orders: &[u64]) -> Vec<String> {
    let mut seen: std::collections::HashMap<u64, usize> = Default::default();
    orders
        .iter()
        .map(|&o| {
            let c = seen.entry(o).or_insert(0);
            let name = format!("{o}{}", letters(*c));
            *c += 1;
            name
        })
        .collect()
}

fn letters(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.irr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irr.is_empty()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.irr
            .iter()
            .map(|row| row[0].as_rational_integer().and_then(|d| d.to_u64()).unwrap_or(0))
            .collect()
    }

    /// Index of the trivial character.
    pub fn trivial_index(&self) -> usize {
        0
    }

    /// Full invariant gate used for computed and ingested tables alike.
    pub fn verify(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Verification(format!("table {}: {m}", self.name)));
        self.classes.check()?;
        let r = self.classes.len();
        if self.classes.group_order() != self.order {
            return fail(format!(
                "class data gives order {}, header says {}",
                self.classes.group_order(),
                self.order
            ));
        }
        if self.irr.len() != r || self.irr.iter().any(|row| row.len() != r) {
            return fail(format!("table is not square ({} rows, {r} classes)", self.irr.len()));
        }
        if self.class_names.len() != r {
            return fail("class name count differs from class count".into());
        }
        let e = self.classes.element_orders.iter().fold(1u64, |a, &o| a.lcm(&o));
        if e != self.exponent {
            return fail(format!("exponent {} but element orders give {e}", self.exponent));
        }
        if self.irr[0].iter().any(|v| *v != Cyclotomic::one()) {
            return fail("first row is not the trivial character".into());
        }
        let mut sum = BigInt::zero();
        for (i, row) in self.irr.iter().enumerate() {
            let d = match row[0].as_rational_integer() {
                Some(d) if d > BigInt::zero() => d,
                _ => return fail(format!("character {} has degree {}", i + 1, row[0])),
            };
            if !(BigInt::from(self.order) % &d).is_zero() {
                return fail(format!("degree {d} of character {} does not divide |G|", i + 1));
            }
            sum += &d * &d;
            for (k, v) in row.iter().enumerate() {
                if self.exponent % v.conductor() != 0 {
                    return fail(format!(
                        "value {v} at character {}, class {} lies outside Q(E({}))",
                        i + 1,
                        self.class_names[k],
                        self.exponent
                    ));
                }
            }
        }
        if sum != BigInt::from(self.order) {
            return fail(format!("sum of squared degrees is {sum}, not {}", self.order));
        }
        self.check_row_orthogonality()?;
        self.check_column_orthogonality()?;
        self.check_galois_consistency()?;
        Ok(())
    }

    fn check_row_orthogonality(&self) -> Result<()> {
        let r = self.len();
        let order = BigRational::from_integer(BigInt::from(self.order));
        let conj: Vec<Vec<Cyclotomic>> = self
            .irr
            .iter()
            .map(|row| row.iter().map(|v| v.conj()).collect())
            .collect();
        for i in 0..r {
            for j in i..r {
                let s: Cyclotomic = (0..r)
                    .map(|k| {
                        (&self.irr[i][k] * &conj[j][k])
                            .scale(&BigRational::from_integer(BigInt::from(self.classes.sizes[k])))
                    })
                    .sum();
                let v = s.scale(&order.recip());
                let want = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
                if v != want {
                    return Err(Error::Verification(format!(
                        "table {}: row orthogonality fails for characters {} and {} (inner product {v})",
                        self.name,
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_column_orthogonality(&self) -> Result<()> {
        let r = self.len();
        let conj: Vec<Vec<Cyclotomic>> = self
            .irr
            .iter()
            .map(|row| row.iter().map(|v| v.conj()).collect())
            .collect();
        for k in 0..r {
            for l in k..r {
                let s: Cyclotomic = (0..r).map(|i| &self.irr[i][k] * &conj[i][l]).sum();
                let want = if k == l {
                    Cyclotomic::from_int(self.classes.centralizer_orders[k] as i64)
                } else {
                    Cyclotomic::zero()
                };
                if s != want {
                    return Err(Error::Verification(format!(
                        "table {}: column orthogonality fails for classes {} and {} (sum {s})",
                        self.name, self.class_names[k], self.class_names[l]
                    )));
                }
            }
        }
        Ok(())
    }

    /// `χ(g^p) = σ_p(χ(g))` whenever `p` is coprime to the order of `g`.
    fn check_galois_consistency(&self) -> Result<()> {
        for (&p, map) in &self.classes.power_maps {
            for k in 0..self.len() {
                if self.classes.element_orders[k] % p == 0 {
                    continue;
                }
                let j = map[k];
                for (i, row) in self.irr.iter().enumerate() {
                    if row[j] != row[k].galois(p as i64) {
                        return Err(Error::Verification(format!(
                            "table {}: character {} is not Galois-consistent with the {p}-power map at class {}",
                            self.name,
                            i + 1,
                            self.class_names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Aligned text rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\norder {}\nclasses {}\n\n", self.name, self.order, self.len()));
        let mut cols: Vec<Vec<String>> = Vec::new();
        let mut head = vec![String::new(), "|C|".to_string(), "p".to_string()];
        head.extend((1..=self.len()).map(|i| format!("X.{i}")));
        cols.push(head);
        for k in 0..self.len() {
            let mut c = vec![
                self.class_names[k].clone(),
                self.classes.centralizer_orders[k].to_string(),
                self.power_names(k),
            ];
            for row in &self.irr {
                c.push(row[k].to_string());
            }
            cols.push(c);
        }
        // long irrationalities become letters, listed below the table
        let mut legend: Vec<String> = Vec::new();
        for c in cols.iter_mut().skip(1) {
            for v in c.iter_mut().skip(3) {
                if v.len() <= 12 {
                    continue;
                }
                let i = match legend.iter().position(|l| l == v) {
                    Some(i) => i,
                    None => {
                        legend.push(v.clone());
                        legend.len() - 1
                    }
                };
                *v = letters(i).to_uppercase();
            }
        }
        let widths: Vec<usize> = cols.iter().map(|c| c.iter().map(|s| s.len()).max().unwrap_or(0)).collect();
        for line in 0..cols[0].len() {
            let cells: Vec<String> = cols
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{:>w$}", c[line]))
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        if !legend.is_empty() {
            out.push('\n');
            for (i, v) in legend.iter().enumerate() {
                out.push_str(&format!("{} = {v}\n", letters(i).to_uppercase()));
            }
        }
        out
    }

    fn power_names(&self, k: usize) -> String {
        let mut parts = Vec::new();
        for (&p, map) in &self.classes.power_maps {
            if self.order % p == 0 && self.classes.element_orders[k] % p == 0 {
                parts.push(self.class_names[map[k]].trim_start_matches(char::is_numeric).to_string());
            }
        }
        if parts.is_empty() {
            "-".into()
        } else {
            parts.join("")
        }
    }
}
