//! Brute-force reference computations on groups of order at most 128,
//! straight from the definitions and the full multiplication table.

use std::collections::{HashMap, HashSet, VecDeque};

use gelpair::perm::{Perm, PermGroup};
use nalgebra::{Complex, DMatrix};

pub type Set = u128;

pub struct Brute {
    pub elems: Vec<Perm>,
    pub index: HashMap<Perm, usize>,
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    pub id: usize,
}

fn has(s: Set, i: usize) -> bool {
    s >> i & 1 == 1
}

pub fn members(s: Set) -> impl Iterator<Item = usize> {
    (0..128).filter(move |&i| has(s, i))
}

impl Brute {
    pub fn new(g: &PermGroup) -> Brute {
        let id = Perm::identity(g.degree());
        let mut elems = vec![id.clone()];
        let mut index = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for s in g.generators() {
                let x = elems[i].mul(s);
                if !index.contains_key(&x) {
                    index.insert(x.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(x);
                }
            }
        }
        assert!(elems.len() <= 128, "oracle limited to 128 elements");
        let mul: Vec<Vec<usize>> =
            elems.iter().map(|a| elems.iter().map(|b| index[&a.mul(b)]).collect()).collect();
        let inv = elems.iter().map(|a| index[&a.inverse()]).collect();
        Brute { elems, index, mul, inv, id: 0 }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn conj(&self, x: usize, t: usize) -> usize {
        self.mul[self.mul[self.inv[t]][x]][t]
    }

    /// Class id of every element, numbered by first appearance.
    pub fn classes(&self) -> Vec<usize> {
        let n = self.order();
        let mut id = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if id[x] != usize::MAX {
                continue;
            }
            for t in 0..n {
                id[self.conj(x, t)] = next;
            }
            next += 1;
        }
        id
    }

    pub fn power(&self, x: usize, e: u64) -> usize {
        (0..e).fold(self.id, |acc, _| self.mul[acc][x])
    }

    pub fn element_order(&self, x: usize) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != self.id {
            y = self.mul[y][x];
            k += 1;
        }
        k
    }

    pub fn closure(&self, gens: &[usize]) -> Set {
        let mut s: Set = 1 << self.id;
        let mut queue = VecDeque::from([self.id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul[x][g];
                if !has(s, y) {
                    s |= 1 << y;
                    queue.push_back(y);
                }
            }
        }
        s
    }

    /// Every subgroup, by adjoining one element at a time starting from the
    /// trivial subgroup.
    pub fn subgroups(&self) -> Vec<Set> {
        let mut seen: HashSet<Set> = HashSet::new();
        let mut queue: VecDeque<(Set, Vec<usize>)> = VecDeque::from([(1 << self.id, vec![])]);
        seen.insert(1 << self.id);
        let mut out = vec![1 << self.id];
        while let Some((s, gens)) = queue.pop_front() {
            for g in 0..self.order() {
                if has(s, g) {
                    continue;
                }
                let mut more = gens.clone();
                more.push(g);
                let t = self.closure(&more);
                if seen.insert(t) {
                    out.push(t);
                    queue.push_back((t, more));
                }
            }
        }
        out
    }

    pub fn conjugate_set(&self, s: Set, t: usize) -> Set {
        members(s).fold(0, |acc, x| acc | 1 << self.conj(x, t))
    }

    /// Subgroups grouped into conjugacy classes.
    pub fn subgroup_classes(&self, subs: &[Set]) -> Vec<Vec<Set>> {
        let mut done: HashSet<Set> = HashSet::new();
        let mut out = Vec::new();
        for &s in subs {
            if done.contains(&s) {
                continue;
            }
            let mut class: Vec<Set> = (0..self.order()).map(|t| self.conjugate_set(s, t)).collect();
            class.sort_unstable();
            class.dedup();
            done.extend(class.iter().copied());
            out.push(class);
        }
        out
    }

    /// Convolution of two subsets of the group algebra, as coefficient counts.
    fn convolve(&self, a: &[usize], b: &[usize]) -> Vec<u32> {
        let mut out = vec![0; self.order()];
        for &x in a {
            for &y in b {
                out[self.mul[x][y]] += 1;
            }
        }
        out
    }

    fn sums_commute(&self, parts: &[Vec<usize>]) -> bool {
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                if self.convolve(a, b) != self.convolve(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// The Hecke algebra of `H`-bi-invariant functions is commutative.
    pub fn is_gelfand(&self, h: Set) -> bool {
        let hs: Vec<usize> = members(h).collect();
        let mut seen = vec![false; self.order()];
        let mut parts = Vec::new();
        for x in 0..self.order() {
            if seen[x] {
                continue;
            }
            let mut d = Vec::new();
            for &a in &hs {
                for &b in &hs {
                    let y = self.mul[self.mul[a][x]][b];
                    if !seen[y] {
                        seen[y] = true;
                        d.push(y);
                    }
                }
            }
            parts.push(d);
        }
        self.sums_commute(&parts)
    }

    /// The centralizer of `H` in the group algebra is commutative.
    pub fn is_strong_gelfand(&self, h: Set) -> bool {
        let hs: Vec<usize> = members(h).collect();
        let mut seen = vec![false; self.order()];
        let mut parts = Vec::new();
        for x in 0..self.order() {
            if seen[x] {
                continue;
            }
            let mut o = Vec::new();
            for &t in &hs {
                let y = self.conj(x, t);
                if !seen[y] {
                    seen[y] = true;
                    o.push(y);
                }
            }
            parts.push(o);
        }
        self.sums_commute(&parts)
    }

    /// A small generating set of `h` and the subgroup it generates.
    pub fn to_group(&self, h: Set, degree: usize) -> PermGroup {
        let mut gens = Vec::new();
        let mut got: Set = 1 << self.id;
        for x in members(h) {
            if !has(got, x) {
                gens.push(x);
                got = self.closure(&gens);
            }
        }
        if gens.is_empty() {
            return PermGroup::trivial(degree);
        }
        PermGroup::new(gens.iter().map(|&i| self.elems[i].clone()).collect()).unwrap()
    }

    pub fn set_of(&self, g: &PermGroup) -> Set {
        let gens: Vec<usize> = g.generators().iter().map(|p| self.index[p]).collect();
        self.closure(&gens)
    }

    fn complex_convolve(&self, a: &[Complex<f64>], b: &[Complex<f64>]) -> Vec<Complex<f64>> {
        let n = self.order();
        let mut out = vec![Complex::new(0.0, 0.0); n];
        for x in 0..n {
            if a[x].norm() < 1e-15 {
                continue;
            }
            for y in 0..n {
                out[self.mul[x][y]] += a[x] * b[y];
            }
        }
        out
    }

    /// Checks that the given class functions (values per element) are the
    /// irreducible characters: their central idempotents are orthogonal,
    /// sum to the identity, number the conjugacy classes, and each cuts out a
    /// block of dimension `χ(1)²` of the regular representation.
    pub fn check_irreducibles(&self, chars: &[Vec<Complex<f64>>], class_count: usize) -> Result<(), String> {
        let n = self.order();
        if chars.len() != class_count {
            return Err(format!("{} characters for {class_count} classes", chars.len()));
        }
        let tol = 1e-8;
        let idem: Vec<Vec<Complex<f64>>> = chars
            .iter()
            .map(|chi| {
                let d = chi[self.id].re;
                (0..n).map(|g| chi[self.inv[g]] * (d / n as f64)).collect()
            })
            .collect();
        let close = |a: &[Complex<f64>], b: &[Complex<f64>]| a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol);
        let zero = vec![Complex::new(0.0, 0.0); n];
        let mut total = zero.clone();
        for (i, e) in idem.iter().enumerate() {
            if !close(&self.complex_convolve(e, e), e) {
                return Err(format!("character {} does not give an idempotent", i + 1));
            }
            for (j, f) in idem.iter().enumerate().skip(i + 1) {
                if !close(&self.complex_convolve(e, f), &zero) {
                    return Err(format!("idempotents {} and {} are not orthogonal", i + 1, j + 1));
                }
            }
            let left = DMatrix::from_fn(n, n, |row, col| {
                // e acting on basis vector col: coefficient of row is e[row * col^-1]
                e[self.mul[row][self.inv[col]]]
            });
            let rank = left.singular_values().iter().filter(|s| **s > 1e-6).count();
            let d = chars[i][self.id].re.round() as usize;
            if rank != d * d {
                return Err(format!("character {} has block rank {rank}, expected {}", i + 1, d * d));
            }
            for (t, x) in total.iter_mut().zip(e) {
                *t += x;
            }
        }
        let mut one = zero;
        one[self.id] = Complex::new(1.0, 0.0);
        if !close(&total, &one) {
            return Err("idempotents do not sum to the identity".into());
        }
        Ok(())
    }
}
