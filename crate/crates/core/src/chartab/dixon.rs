//! Dixon–Schneider: common eigenvectors of the class matrices modulo a
//! prime `p ≡ 1 (mod e)`, lifted to cyclotomic values by a discrete Fourier
//! sum over the powers of each class representative.

use num_integer::Integer;

use super::classmat::class_matrix;
use super::table::{class_names, CharacterTable};
use crate::config::Budget;
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::perm::{conjugacy_classes, ClassData, Classes, PermGroup};
use crate::util::{inv_mod, is_prime, isqrt, mul_mod, pow_mod, primitive_root};

/// Number of admissible primes tried before giving up.
const MAX_PRIMES: usize = 12;

/// Character table of a permutation group.
pub fn compute_table(g: &PermGroup, name: &str, budget: &Budget) -> Result<(Classes, CharacterTable)> {
    let classes = conjugacy_classes(g, budget)?;
    let table = table_from_classes(&classes, name)?;
    Ok((classes, table))
}

/// Smallest prime `p ≡ 1 (mod e)` with `p > 2√|G|`, then the next ones.
pub fn admissible_primes(order: u64, e: u64) -> impl Iterator<Item = u64> {
    let bound = 2 * isqrt(order) + 2;
    let start = bound.div_ceil(e).max(1);
    (start..).map(move |k| k * e + 1).filter(move |&p| p > bound && is_prime(p))
}

pub fn table_from_classes(classes: &Classes, name: &str) -> Result<CharacterTable> {
    let data = &classes.data;
    let r = data.len();
    let order = data.group_order();
    let e = data.element_orders.iter().fold(1u64, |a, &o| a.lcm(&o));
    let mut by_size: Vec<usize> = (1..r).collect();
    by_size.sort_by_key(|&i| (data.sizes[i], i));
    let mut mats: Vec<Option<Vec<Vec<u64>>>> = vec![None; r];
    let mut last_err = None;
    for p in admissible_primes(order, e).take(MAX_PRIMES) {
        match attempt(classes, &by_size, &mut mats, p, e) {
            Ok(irr) => {
                let table = assemble(name, data, e, irr);
                match table.verify() {
                    Ok(()) => return Ok(table),
                    Err(err) => {
                        log::warn!("prime {p}: lifted table rejected: {err}");
                        last_err = Some(err);
                    }
                }
            }
            Err(err) => {
                log::debug!("prime {p}: {err}");
                last_err = Some(err);
            }
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Verification("no admissible prime".into())))
}

fn assemble(name: &str, data: &ClassData, e: u64, mut irr: Vec<Vec<Cyclotomic>>) -> CharacterTable {
    irr.sort_by(|a, b| {
        let triv_a = a.iter().all(|v| *v == Cyclotomic::one());
        let triv_b = b.iter().all(|v| *v == Cyclotomic::one());
        (a[0].as_i64(), !triv_a, a).cmp(&(b[0].as_i64(), !triv_b, b))
    });
    CharacterTable {
        name: name.to_string(),
        order: data.group_order(),
        exponent: e,
        class_names: class_names(&data.element_orders),
        classes: data.clone(),
        irr,
    }
}

fn degenerate(p: u64, what: &str) -> Error {
    Error::Verification(format!("degenerate eigenspace split mod {p}: {what}"))
}

/// Subspace of `F_p^r` kept as row-reduced basis vectors with pivot columns.
struct Space {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn rref(mut rows: Vec<Vec<u64>>, p: u64) -> Space {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][c], p);
        for v in rows[rank].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    let t = mul_mod(f, rows[rank][j], p);
                    rows[i][j] = (rows[i][j] + p - t) % p;
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    Space { basis: rows, pivots }
}

/// Basis of the null space of a square matrix mod p (as column vectors).
fn null_space(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let red = rref(a.to_vec(), p);
    let free: Vec<usize> = (0..n).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in red.basis.iter().zip(&red.pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial mod p via reduction to Hessenberg form;
/// coefficients from the constant term up, monic.
fn charpoly(mut h: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let n = h.len();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m + 1..n).chain(std::iter::once(m)).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        let i = if h[m][m - 1] != 0 { m } else { i };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let t = h[m][m - 1];
        if t == 0 {
            continue;
        }
        let tinv = inv_mod(t, p);
        for i in m + 1..n {
            let u = mul_mod(h[i][m - 1], tinv, p);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let s = mul_mod(u, h[m][j], p);
                h[i][j] = (h[i][j] + p - s) % p;
            }
            for row in h.iter_mut() {
                let s = mul_mod(u, row[i], p);
                row[m] = (row[m] + s) % p;
            }
        }
    }
    // p_k(x) = (x - h_kk) p_{k-1}(x) - Σ_{i<k} h_ik (∏_{j=i+1}^{k} h_{j,j-1}) p_{i-1}(x)
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = (next[d + 1] + c) % p;
            next[d] = (next[d] + p - mul_mod(h[k][k], c, p)) % p;
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = mul_mod(prod, h[i + 1][i], p);
            if prod == 0 {
                break;
            }
            let coef = mul_mod(h[i][k], prod, p);
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = (next[d] + p - mul_mod(coef, c, p)) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn roots(poly: &[u64], p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for x in 0..p {
        let mut acc = 0u64;
        for &c in poly.iter().rev() {
            acc = (mul_mod(acc, x, p) + c) % p;
        }
        if acc == 0 {
            out.push(x);
            if out.len() == poly.len() - 1 {
                break;
            }
        }
    }
    out
}

fn attempt(
    classes: &Classes,
    by_size: &[usize],
    mats: &mut [Option<Vec<Vec<u64>>>],
    p: u64,
    e: u64,
) -> Result<Vec<Vec<Cyclotomic>>> {
    let data = &classes.data;
    let r = data.len();
    let identity: Vec<Vec<u64>> = (0..r)
        .map(|i| (0..r).map(|j| (i == j) as u64).collect())
        .collect();
    let mut done: Vec<Space> = Vec::new();
    let mut open: Vec<Space> = vec![rref(identity, p)];
    if r == 1 {
        done = std::mem::take(&mut open);
    }
    for &ci in by_size {
        if open.is_empty() {
            break;
        }
        if mats[ci].is_none() {
            log::debug!("class matrix {} of {} (class size {})", ci, r, data.sizes[ci]);
            mats[ci] = Some(class_matrix(classes, ci)?);
        }
        let m: Vec<Vec<u64>> = mats[ci]
            .as_ref()
            .unwrap()
            .iter()
            .map(|row| row.iter().map(|&v| v % p).collect())
            .collect();
        let mut next_open = Vec::new();
        for space in open {
            let d = space.basis.len();
            // images M·b for each basis vector b, in pivot coordinates
            let images: Vec<Vec<u64>> = space
                .basis
                .iter()
                .map(|b| {
                    (0..r)
                        .map(|j| m[j].iter().zip(b).fold(0u64, |a, (&x, &y)| (a + mul_mod(x, y, p)) % p))
                        .collect()
                })
                .collect();
            // A[t][c]: coordinate t of M·b_c
            let a: Vec<Vec<u64>> = (0..d)
                .map(|t| (0..d).map(|c| images[c][space.pivots[t]]).collect())
                .collect();
            let poly = charpoly(a.clone(), p);
            let lams = roots(&poly, p);
            let mut total = 0;
            for lam in lams {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|t| (0..d).map(|c| if t == c { (a[t][c] + p - lam) % p } else { a[t][c] }).collect())
                    .collect();
                let kernel = null_space(&shifted, p);
                total += kernel.len();
                let vecs: Vec<Vec<u64>> = kernel
                    .iter()
                    .map(|coef| {
                        (0..r)
                            .map(|j| {
                                (0..d).fold(0u64, |acc, c| (acc + mul_mod(coef[c], space.basis[c][j], p)) % p)
                            })
                            .collect()
                    })
                    .collect();
                let sub = rref(vecs, p);
                if sub.basis.len() == 1 {
                    done.push(sub);
                } else {
                    next_open.push(sub);
                }
            }
            if total != d {
                return Err(degenerate(p, "eigenspaces do not span"));
            }
        }
        open = next_open;
    }
    if !open.is_empty() {
        return Err(degenerate(p, "common eigenspace of dimension > 1"));
    }
    if done.len() != r {
        return Err(degenerate(p, "wrong number of characters"));
    }

    let order = data.group_order();
    let inv: Vec<usize> = (0..r).map(|k| data.inverse_class(k)).collect::<Result<_>>()?;
    let z = pow_mod(primitive_root(p), (p - 1) / e, p);
    let root = isqrt(order);
    let mut irr = Vec::with_capacity(r);
    for sp in done {
        let v = &sp.basis[0];
        if v[0] == 0 {
            return Err(degenerate(p, "eigenvector vanishes at the identity"));
        }
        let v0 = inv_mod(v[0], p);
        let w: Vec<u64> = v.iter().map(|&x| mul_mod(x, v0, p)).collect();
        let mut s = 0u64;
        for k in 0..r {
            let t = mul_mod(w[k], w[inv[k]], p);
            s = (s + mul_mod(t, inv_mod(data.sizes[k] % p, p), p)) % p;
        }
        if s == 0 {
            return Err(degenerate(p, "zero norm"));
        }
        let d2 = mul_mod(order % p, inv_mod(s, p), p);
        let d = (1..=root)
            .find(|&d| mul_mod(d, d, p) == d2)
            .ok_or_else(|| degenerate(p, "no admissible degree"))?;
        let chi: Vec<u64> = (0..r)
            .map(|k| mul_mod(mul_mod(w[k], d, p), inv_mod(data.sizes[k] % p, p), p))
            .collect();
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let n = data.element_orders[k];
            let zn = pow_mod(z, e / n, p);
            let zn_inv = inv_mod(zn, p);
            let ninv = inv_mod(n % p, p);
            let vals: Vec<u64> = (0..n).map(|l| data.pow_class(k, l).map(|c| chi[c])).collect::<Result<_>>()?;
            let mut coeffs = Vec::with_capacity(n as usize);
            for j in 0..n {
                let step = pow_mod(zn_inv, j, p);
                let mut acc = 0u64;
                let mut f = 1u64;
                for &x in &vals {
                    acc = (acc + mul_mod(x, f, p)) % p;
                    f = mul_mod(f, step, p);
                }
                let m = mul_mod(acc, ninv, p);
                if m > d {
                    return Err(degenerate(p, "eigenvalue multiplicity exceeds the degree"));
                }
                coeffs.push(m as i64);
            }
            row.push(Cyclotomic::from_int_coeffs(n, &coeffs));
        }
        irr.push(row);
    }
    Ok(irr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn cyc(s: &str, n: usize) -> Perm {
        Perm::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn cyclic_three() {
        let g = PermGroup::new(vec![cyc("(1,2,3)", 3)]).unwrap();
        let (_, t) = compute_table(&g, "C3", &Budget::default()).unwrap();
        let e3 = Cyclotomic::root(3, 1).unwrap();
        let e32 = Cyclotomic::root(3, 2).unwrap();
        let one = Cyclotomic::one();
        assert_eq!(t.irr[0], vec![one.clone(), one.clone(), one.clone()]);
        let mut rest = vec![t.irr[1].clone(), t.irr[2].clone()];
        rest.sort();
        let mut want = vec![vec![one.clone(), e3.clone(), e32.clone()], vec![one.clone(), e32, e3]];
        want.sort();
        assert_eq!(rest, want);
    }

    #[test]
    fn quaternion_table() {
        let g = PermGroup::new(vec![
            cyc("(1,2,4,7)(3,6,8,5)", 8),
            cyc("(1,3,4,8)(2,5,7,6)", 8),
        ])
        .unwrap();
        let (_, t) = compute_table(&g, "Q8", &Budget::default()).unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 1, 1, 2]);
        let two = &t.irr[4];
        for k in 2..5 {
            assert!(two[k].is_zero());
        }
    }

    #[test]
    fn m11_table() {
        let g = PermGroup::new(vec![
            cyc("(1,2,3,4,5,6,7,8,9,10,11)", 11),
            cyc("(3,7,11,8)(4,10,5,6)", 11),
        ])
        .unwrap();
        let (_, t) = compute_table(&g, "M11", &Budget::default()).unwrap();
        assert_eq!(t.degrees(), vec![1, 10, 10, 10, 11, 16, 16, 44, 45, 55]);
    }

    #[test]
    fn trivial_group() {
        let (_, t) = compute_table(&PermGroup::trivial(3), "1", &Budget::default()).unwrap();
        assert_eq!(t.irr, vec![vec![Cyclotomic::one()]]);
    }

    #[test]
    fn charpoly_small() {
        // [[2,1],[0,3]] has charpoly x^2 - 5x + 6
        let p = 101;
        assert_eq!(charpoly(vec![vec![2, 1], vec![0, 3]], p), vec![6, p - 5, 1]);
        let a = vec![vec![0, 1, 0], vec![0, 0, 1], vec![6, p - 11, 6]];
        let mut r = roots(&charpoly(a, p), p);
        r.sort();
        assert_eq!(r, vec![1, 2, 3]);
    }

    #[test]
    fn prime_choice() {
        let p = admissible_primes(7920, 1320).next().unwrap();
        assert_eq!(p % 1320, 1);
        assert!(p > 2 * 89);
    }
}
