use crate::error::Result;
use crate::perm::Classes;

/// Class multiplication coefficients for class `i`:
/// `m[j][k] = #{x ∈ C_i : x⁻¹·g_k ∈ C_j}`, the number of pairs
/// `(x, y) ∈ C_i × C_j` with `xy = g_k`. Columns sum to `|C_i|`.
pub fn class_matrix(classes: &Classes, i: usize) -> Result<Vec<Vec<u64>>> {
    let r = classes.len();
    let mut m = vec![vec![0u64; r]; r];
    let reps = &classes.data.reps;
    for x in classes.elements(i)? {
        let xi = x.inverse();
        for (k, gk) in reps.iter().enumerate() {
            let j = classes.identify(&xi.mul(gk));
            m[j][k] += 1;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Budget;
    use crate::perm::{conjugacy_classes, Perm, PermGroup};

    #[test]
    fn s3_coefficients_match_brute_force() {
        let s3 = PermGroup::new(vec![
            Perm::parse_cycles("(1,2,3)", 3).unwrap(),
            Perm::parse_cycles("(1,2)", 3).unwrap(),
        ])
        .unwrap();
        let cl = conjugacy_classes(&s3, &Budget::default()).unwrap();
        let all = s3.elements();
        for i in 0..cl.len() {
            let m = class_matrix(&cl, i).unwrap();
            for j in 0..cl.len() {
                for k in 0..cl.len() {
                    let gk = &cl.data.reps[k];
                    let brute = all
                        .iter()
                        .flat_map(|x| all.iter().map(move |y| (x, y)))
                        .filter(|(x, y)| cl.identify(x) == i && cl.identify(y) == j && x.mul(y) == *gk)
                        .count() as u64;
                    assert_eq!(m[j][k], brute);
                }
            }
            if i == 0 {
                for j in 0..cl.len() {
                    for k in 0..cl.len() {
                        assert_eq!(m[j][k], (j == k) as u64);
                    }
                }
            }
        }
    }
}
