//! Conjugacy classes of subgroups of small groups, by cyclic extension.
//!
//! Works on element indices with a full multiplication table, so only
//! groups within the lattice budget are accepted. Perfect subgroups, which
//! cyclic extension cannot reach, come from caller-supplied seeds and from a
//! search over 2-generated subgroups of the perfect residuum.

use std::collections::{HashMap, HashSet};

use crate::config::Budget;
use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};
use crate::util::prime_factors;

/// Hard ceiling on the element count (the multiplication table is `n²` u16s).
pub const MAX_LATTICE_ORDER: u64 = 16384;

type Bits = Vec<u64>;

fn bit(b: &Bits, i: usize) -> bool {
    b[i >> 6] >> (i & 63) & 1 == 1
}

fn set_bit(b: &mut Bits, i: usize) {
    b[i >> 6] |= 1 << (i & 63);
}

fn is_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub order: u64,
    /// Number of subgroups in the class.
    pub length: u64,
    rep: Bits,
    conjugates: Vec<Bits>,
}

#[derive(Debug)]
pub struct Lattice {
    group: PermGroup,
    elements: Vec<Perm>,
    n: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    /// conjugation by each generator, on element indices
    conj: Vec<Vec<u16>>,
    gen_idx: Vec<usize>,
    classes: Vec<SubgroupClass>,
    known: HashMap<Bits, usize>,
}

impl Lattice {
    pub fn compute(g: &PermGroup, seeds: &[PermGroup], budget: &Budget) -> Result<Lattice> {
        let order = g.order();
        let limit = budget.lattice_budget.min(MAX_LATTICE_ORDER);
        if order > limit {
            return Err(Error::budget("group order for subgroup lattice", order, limit));
        }
        let mut lat = Lattice::tables(g);
        let triv = lat.closure(&[]);
        lat.add_class(triv);
        for s in seeds {
            if !s.is_subgroup_of(g) {
                return Err(Error::NotMember(format!("seed subgroup of order {}", s.order())));
            }
            let gens: Vec<usize> = s.generators().iter().map(|x| lat.index_of(x)).collect();
            let b = lat.closure(&gens);
            lat.add_class(b);
        }
        lat.perfect_search();
        lat.extend_cyclic();
        lat.classes.sort_by(|a, b| (a.order, a.length).cmp(&(b.order, b.length)).then(a.rep.cmp(&b.rep)));
        lat.known = lat
            .classes
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.conjugates.iter().map(move |b| (b.clone(), i)))
            .collect();
        log::debug!("lattice of order {order}: {} classes, {} subgroups", lat.classes.len(), lat.known.len());
        Ok(lat)
    }

    fn tables(g: &PermGroup) -> Lattice {
        let elements = g.elements();
        let n = elements.len();
        let index: HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let gen_idx: Vec<usize> = g.generators().iter().map(|x| index[x]).collect();
        // right multiplication by generators, then rows via a BFS spanning tree
        let right: Vec<Vec<u16>> = g
            .generators()
            .iter()
            .map(|s| elements.iter().map(|e| index[&e.mul(s)] as u16).collect())
            .collect();
        let id = index[&g.identity()];
        debug_assert_eq!(id, 0);
        let mut tree = vec![(id, usize::MAX, 0usize)];
        let mut seen = vec![false; n];
        seen[id] = true;
        let mut head = 0;
        while head < tree.len() {
            let x = tree[head].0;
            head += 1;
            for (s, r) in right.iter().enumerate() {
                let y = r[x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    tree.push((y, x, s));
                }
            }
        }
        let mut mul = vec![0u16; n * n];
        for i in 0..n {
            let row = &mut mul[i * n..(i + 1) * n];
            row[id] = i as u16;
            for &(y, parent, s) in &tree[1..] {
                row[y] = right[s][row[parent] as usize];
            }
        }
        let mut inv = vec![0u16; n];
        for i in 0..n {
            for j in 0..n {
                if mul[i * n + j] as usize == id {
                    inv[i] = j as u16;
                    break;
                }
            }
        }
        let conj = gen_idx
            .iter()
            .map(|&s| (0..n).map(|i| mul[mul[inv[s] as usize * n + i] as usize * n + s]).collect())
            .collect();
        Lattice {
            group: g.clone(),
            elements,
            n,
            mul,
            inv,
            conj,
            gen_idx,
            classes: Vec::new(),
            known: HashMap::new(),
        }
    }

    fn index_of(&self, x: &Perm) -> usize {
        self.elements.iter().position(|e| e == x).expect("element of the group")
    }

    fn m(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    fn empty(&self) -> Bits {
        vec![0; self.n.div_ceil(64)]
    }

    fn members(&self, b: &Bits) -> Vec<usize> {
        (0..self.n).filter(|&i| bit(b, i)).collect()
    }

    /// `PermGroup::elements` lists the identity first.
    fn identity_idx(&self) -> usize {
        0
    }

    fn closure(&self, gens: &[usize]) -> Bits {
        let mut b = self.empty();
        let id = self.identity_idx();
        set_bit(&mut b, id);
        let mut list = vec![id];
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            head += 1;
            for &s in gens {
                let y = self.m(x, s);
                if !bit(&b, y) {
                    set_bit(&mut b, y);
                    list.push(y);
                }
            }
        }
        b
    }

    fn conjugate_bits(&self, b: &Bits, s: usize) -> Bits {
        let mut out = self.empty();
        for i in self.members(b) {
            set_bit(&mut out, self.conj[s][i] as usize);
        }
        out
    }

    /// Registers the class of `b` unless known; returns its index.
    fn add_class(&mut self, b: Bits) -> usize {
        if let Some(&i) = self.known.get(&b) {
            return i;
        }
        let idx = self.classes.len();
        let mut orbit = vec![b.clone()];
        self.known.insert(b.clone(), idx);
        let mut head = 0;
        while head < orbit.len() {
            let cur = orbit[head].clone();
            head += 1;
            for s in 0..self.gen_idx.len() {
                let c = self.conjugate_bits(&cur, s);
                if !self.known.contains_key(&c) {
                    self.known.insert(c.clone(), idx);
                    orbit.push(c);
                }
            }
        }
        let order = b.iter().map(|w| w.count_ones() as u64).sum();
        self.classes.push(SubgroupClass { order, length: orbit.len() as u64, rep: b, conjugates: orbit });
        idx
    }

    /// Normalizer of the representative of class `c`, from Schreier generators
    /// of the conjugation orbit.
    fn normalizer(&self, c: usize) -> Bits {
        let cl = &self.classes[c];
        let pos: HashMap<&Bits, usize> = cl.conjugates.iter().enumerate().map(|(i, b)| (b, i)).collect();
        // transversal: element t_i with rep^{t_i} = conjugates[i]
        let id = self.identity_idx();
        let mut trans = vec![usize::MAX; cl.conjugates.len()];
        trans[0] = id;
        let mut queue = vec![0usize];
        let mut edges = Vec::new();
        let mut head = 0;
        while head < queue.len() {
            let i = queue[head];
            head += 1;
            for (s, &si) in self.gen_idx.iter().enumerate() {
                let j = pos[&self.conjugate_bits(&cl.conjugates[i], s)];
                if trans[j] == usize::MAX {
                    trans[j] = self.m(trans[i], si);
                    queue.push(j);
                } else {
                    edges.push((i, si, j));
                }
            }
        }
        let mut gens: Vec<usize> = self.members(&cl.rep);
        gens.retain(|&x| x != id);
        let mut nb = self.closure(&gens);
        for (i, s, j) in edges {
            let x = self.m(self.m(trans[i], s), self.inv[trans[j]] as usize);
            if !bit(&nb, x) {
                gens.push(x);
                nb = self.closure(&gens);
            }
        }
        nb
    }

    fn order_of(&self, x: usize) -> u64 {
        let id = self.identity_idx();
        let mut y = x;
        let mut k = 1;
        while y != id {
            y = self.m(y, x);
            k += 1;
        }
        k
    }

    fn power(&self, x: usize, e: u64) -> usize {
        let mut y = self.identity_idx();
        for _ in 0..e {
            y = self.m(y, x);
        }
        y
    }

    /// One generator per cyclic subgroup of prime-power order, with its prime.
    fn zuppos(&self) -> Vec<(usize, u64)> {
        let mut out = Vec::new();
        let mut taken = vec![false; self.n];
        for x in 0..self.n {
            if taken[x] {
                continue;
            }
            let o = self.order_of(x);
            let ps = prime_factors(o);
            if ps.len() != 1 {
                continue;
            }
            let mut y = x;
            for k in 1..o {
                if k % ps[0] != 0 {
                    taken[y] = true;
                }
                y = self.m(y, x);
            }
            out.push((x, ps[0]));
        }
        out
    }

    fn extend_cyclic(&mut self) {
        let zuppos = self.zuppos();
        let mut next = 0;
        while next < self.classes.len() {
            let c = next;
            next += 1;
            let rep = self.classes[c].rep.clone();
            let nb = self.normalizer(c);
            let mut seen: HashSet<Bits> = HashSet::new();
            for &(z, p) in &zuppos {
                if !bit(&nb, z) || bit(&rep, z) || !bit(&rep, self.power(z, p)) {
                    continue;
                }
                let mut b = rep.clone();
                let mut list = self.members(&rep);
                let mut head = 0;
                while head < list.len() {
                    let y = self.m(list[head], z);
                    head += 1;
                    if !bit(&b, y) {
                        set_bit(&mut b, y);
                        list.push(y);
                    }
                }
                if seen.insert(b.clone()) {
                    self.add_class(b);
                }
            }
        }
    }

    fn derived(&self, b: &Bits) -> Bits {
        let gens = self.small_gens(b);
        let mut comms = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &c in &gens[i + 1..] {
                let x = self.m(self.m(self.inv[a] as usize, self.inv[c] as usize), self.m(a, c));
                comms.push(x);
            }
        }
        // normal closure in <gens>
        let mut nb = self.closure(&comms);
        loop {
            let mut grew = false;
            for x in self.members(&nb) {
                for &g in &gens {
                    let y = self.m(self.m(self.inv[g] as usize, x), g);
                    if !bit(&nb, y) {
                        comms.push(y);
                        nb = self.closure(&comms);
                        grew = true;
                    }
                }
            }
            if !grew {
                return nb;
            }
        }
    }

    fn perfect_residuum(&self, b: &Bits) -> Bits {
        let mut cur = b.clone();
        loop {
            let d = self.derived(&cur);
            if d == cur {
                return cur;
            }
            cur = d;
        }
    }

    fn perfect_search(&mut self) {
        let all = self.closure(&self.gen_idx.clone());
        let res = self.perfect_residuum(&all);
        let res_members = self.members(&res);
        if res_members.len() == 1 {
            return;
        }
        // a runs over G-class representatives of elements in the residuum
        let mut reps = Vec::new();
        let mut covered = vec![false; self.n];
        for &x in &res_members {
            if covered[x] {
                continue;
            }
            reps.push(x);
            let mut orbit = vec![x];
            covered[x] = true;
            let mut head = 0;
            while head < orbit.len() {
                let y = orbit[head];
                head += 1;
                for s in 0..self.gen_idx.len() {
                    let z = self.conj[s][y] as usize;
                    if !covered[z] {
                        covered[z] = true;
                        orbit.push(z);
                    }
                }
            }
        }
        let id = self.identity_idx();
        let mut tried: HashSet<Bits> = HashSet::new();
        for &a in &reps {
            if a == id {
                continue;
            }
            for &b in &res_members {
                if b == id || b == a {
                    continue;
                }
                let k = self.closure(&[a, b]);
                let size: u32 = k.iter().map(|w| w.count_ones()).sum();
                if size % 12 != 0 || self.known.contains_key(&k) || !tried.insert(k.clone()) {
                    continue;
                }
                let p = self.perfect_residuum(&k);
                if p.iter().map(|w| w.count_ones()).sum::<u32>() > 1 {
                    self.add_class(p);
                }
            }
        }
    }

    fn small_gens(&self, b: &Bits) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = self.closure(&[]);
        for x in self.members(b) {
            if !bit(&cur, x) {
                gens.push(x);
                cur = self.closure(&gens);
            }
        }
        gens
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Total number of subgroups.
    pub fn subgroup_count(&self) -> u64 {
        self.classes.iter().map(|c| c.length).sum()
    }

    /// Representative of class `i` as a permutation group.
    pub fn representative(&self, i: usize) -> PermGroup {
        let gens: Vec<Perm> = self.small_gens(&self.classes[i].rep).into_iter().map(|x| self.elements[x].clone()).collect();
        if gens.is_empty() {
            return PermGroup::trivial(self.group.degree());
        }
        PermGroup::with_order(gens, self.classes[i].order).expect("subgroup of a finite group")
    }

    /// Some conjugate of class `k`'s representative lies in class `h`'s representative.
    pub fn is_subconjugate(&self, k: usize, h: usize) -> bool {
        let hrep = &self.classes[h].rep;
        self.classes[k].order <= self.classes[h].order
            && self.classes[h].order % self.classes[k].order == 0
            && self.classes[k].conjugates.iter().any(|b| is_subset(b, hrep))
    }

    /// Index of the class containing the subgroup generated by `gens`.
    pub fn class_of(&self, gens: &[Perm]) -> Result<usize> {
        for x in gens {
            if !self.group.contains(x)? {
                return Err(Error::NotMember(format!("{x}")));
            }
        }
        let idx: Vec<usize> = gens.iter().map(|x| self.index_of(x)).collect();
        Ok(self.known[&self.closure(&idx)])
    }

    /// Classes of maximal subgroups.
    pub fn maximal(&self) -> Vec<usize> {
        let top = self.classes.len() - 1;
        (0..top)
            .filter(|&k| (0..top).all(|h| h == k || self.classes[h].order == self.classes[k].order || !self.is_subconjugate(k, h)))
            .collect()
    }

    /// Element-level description of a subgroup, for invariants.
    pub fn structure(&self, i: usize) -> Structure {
        let b = &self.classes[i].rep;
        let members = self.members(b);
        let d = self.derived(b);
        let dorder = d.iter().map(|w| w.count_ones() as u64).sum();
        let mut orders: Vec<u64> = members.iter().map(|&x| self.order_of(x)).collect();
        orders.sort_unstable();
        Structure { order: self.classes[i].order, derived_order: dorder, element_orders: orders }
    }
}

/// Cheap isomorphism invariants of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    pub order: u64,
    pub derived_order: u64,
    pub element_orders: Vec<u64>,
}

impl Structure {
    pub fn is_abelian(&self) -> bool {
        self.derived_order == 1
    }

    /// Invariant factors of an abelian group from its element-order statistics.
    pub fn abelian_invariants(&self) -> Option<Vec<u64>> {
        if !self.is_abelian() {
            return None;
        }
        let mut parts: Vec<Vec<u64>> = Vec::new();
        for p in prime_factors(self.order) {
            // c_k = #{x : x^(p^k) = 1} = p^(Σ min(k, e_i))
            let mut exps = Vec::new();
            let mut prev_log = 0u32;
            let mut k = 1u32;
            let mut counts = Vec::new();
            loop {
                let pk = p.pow(k);
                let c = self.element_orders.iter().filter(|&&o| pk % o == 0).count() as u64;
                let lg = log_p(c, p);
                counts.push(lg - prev_log);
                if lg == prev_log {
                    break;
                }
                prev_log = lg;
                k += 1;
            }
            // counts[k-1] = #{i : e_i ≥ k}
            for k in 0..counts.len() {
                let ge = counts[k];
                let ge_next = counts.get(k + 1).copied().unwrap_or(0);
                for _ in 0..ge - ge_next {
                    exps.push(p.pow(k as u32 + 1));
                }
            }
            parts.push(exps);
        }
        // combine prime powers into invariant factors
        let len = parts.iter().map(|v| v.len()).max().unwrap_or(0);
        let mut inv = vec![1u64; len];
        for mut v in parts {
            v.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in v.into_iter().enumerate() {
                inv[i] *= q;
            }
        }
        inv.sort_unstable();
        Some(inv)
    }

    /// Short display label: `1`, `4`, `2^2`, `4x4`, or `[order]` for non-abelian groups.
    pub fn label(&self) -> String {
        match self.abelian_invariants() {
            Some(inv) if inv.is_empty() => "1".into(),
            Some(inv) => {
                if inv.len() > 1 && inv.iter().all(|&q| q == inv[0]) {
                    format!("{}^{}", inv[0], inv.len())
                } else {
                    inv.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("x")
                }
            }
            None => format!("[{}]", self.order),
        }
    }

    /// Key used to match catalog display labels.
    pub fn signature(&self) -> String {
        let mut counts: Vec<(u64, usize)> = Vec::new();
        for &o in &self.element_orders {
            match counts.last_mut() {
                Some((q, c)) if *q == o => *c += 1,
                _ => counts.push((o, 1)),
            }
        }
        let hist: Vec<String> = counts.iter().map(|(o, c)| format!("{o}^{c}")).collect();
        format!("{}/{}/{}", self.order, self.derived_order, hist.join("."))
    }
}

fn log_p(mut c: u64, p: u64) -> u32 {
    let mut k = 0;
    while c % p == 0 && c > 1 {
        c /= p;
        k += 1;
    }
    k
}
