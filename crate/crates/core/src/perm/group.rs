use std::collections::VecDeque;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::permutation::{Perm, Point};
use crate::error::{Error, Result};

/// Above this many stored points (orbit length × degree) a level keeps a
/// Schreier vector instead of explicit coset representatives.
const EXPLICIT_TRANSVERSAL_LIMIT: usize = 1 << 24;

const DEFAULT_SEED: u64 = 0x6765_6c70_6169_72;

#[derive(Clone, Debug)]
enum Transversal {
    /// `reps[x]` maps the level's base point to `x`.
    Explicit(Vec<Option<Perm>>),
    /// `label[x]` is the index of the generator that reached `x` from its
    /// parent, `-2` for the base point, `-1` outside the orbit.
    Schreier(Vec<i32>),
}

/// One level of a stabilizer chain: `G^(i)` with its basic orbit.
#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    trans: Transversal,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        let mut lvl = Level {
            point,
            gens: Vec::new(),
            orbit: Vec::new(),
            trans: Transversal::Explicit(Vec::new()),
        };
        lvl.rebuild(degree);
        lvl
    }

    fn rebuild(&mut self, degree: usize) {
        let mut orbit = vec![self.point];
        let mut label = vec![-1i32; degree];
        label[self.point] = -2;
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for (gi, g) in self.gens.iter().enumerate() {
                let y = g.apply(x);
                if label[y] == -1 {
                    label[y] = gi as i32;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        if orbit.len().saturating_mul(degree) <= EXPLICIT_TRANSVERSAL_LIMIT {
            let mut reps: Vec<Option<Perm>> = vec![None; degree];
            reps[self.point] = Some(Perm::identity(degree));
            for &x in &orbit[1..] {
                let g = &self.gens[label[x] as usize];
                // parent ↦ x under g; parents precede children in BFS order
                let parent = g.inverse().apply(x);
                let r = reps[parent].as_ref().expect("bfs order").mul(g);
                reps[x] = Some(r);
            }
            self.trans = Transversal::Explicit(reps);
        } else {
            self.trans = Transversal::Schreier(label);
        }
        self.orbit = orbit;
    }

    /// Coset representative mapping the base point to `x`.
    fn rep(&self, x: usize) -> Option<Perm> {
        match &self.trans {
            Transversal::Explicit(r) => r[x].clone(),
            Transversal::Schreier(label) => {
                if label[x] == -1 {
                    return None;
                }
                let degree = label.len();
                let mut word = Vec::new();
                let mut y = x;
                while label[y] != -2 {
                    let g = &self.gens[label[y] as usize];
                    word.push(label[y] as usize);
                    y = g.inverse().apply(y);
                }
                let mut r = Perm::identity(degree);
                for &gi in word.iter().rev() {
                    r = r.mul(&self.gens[gi]);
                }
                Some(r)
            }
        }
    }
}

/// A permutation group with a stabilizer-chain certificate.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: Vec<Level>,
    order: u64,
    orbits: OnceLock<Vec<usize>>,
}

impl PermGroup {
    /// Deterministic Schreier–Sims.
    pub fn new(gens: Vec<Perm>) -> Result<Self> {
        Self::with_base(gens, &[])
    }

    /// Deterministic Schreier–Sims with a prescribed base prefix.
    pub fn with_base(gens: Vec<Perm>, base_prefix: &[usize]) -> Result<Self> {
        let degree = check_gens(&gens)?;
        let mut chain = Chain::new(degree, base_prefix);
        for g in &gens {
            chain.add_generator(g.clone());
        }
        chain.schreier_sims();
        Self::from_chain(degree, gens, chain)
    }

    /// Randomized Schreier–Sims that stops once the known order is reached.
    /// Reaching the order certifies the chain; if it cannot be reached the
    /// deterministic algorithm decides and the mismatch is reported.
    pub fn with_order(gens: Vec<Perm>, order: u64) -> Result<Self> {
        Self::with_order_and_base(gens, order, &[])
    }

    pub fn with_order_and_base(gens: Vec<Perm>, order: u64, base_prefix: &[usize]) -> Result<Self> {
        let degree = check_gens(&gens)?;
        let mut chain = Chain::new(degree, base_prefix);
        for g in &gens {
            chain.add_generator(g.clone());
        }
        if chain.order()? != order {
            let mut pr = ProductReplacement::new(&gens, DEFAULT_SEED);
            let mut misses = 0;
            while chain.order()? < order && misses < 64 {
                let g = pr.next();
                if chain.sift_and_extend(g) {
                    misses = 0;
                } else {
                    misses += 1;
                }
            }
        }
        if chain.order()? != order {
            chain.schreier_sims();
        }
        let grp = Self::from_chain(degree, gens, chain)?;
        if grp.order != order {
            return Err(Error::Data(format!(
                "group order {} differs from expected {order}",
                grp.order
            )));
        }
        Ok(grp)
    }

    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            gens: Vec::new(),
            chain: Vec::new(),
            order: 1,
            orbits: OnceLock::new(),
        }
    }

    fn from_chain(degree: usize, gens: Vec<Perm>, chain: Chain) -> Result<Self> {
        let order = chain.order()?;
        let gens = gens.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermGroup {
            degree,
            gens,
            chain: chain.levels,
            order,
            orbits: OnceLock::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.iter().map(|l| l.point).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.chain.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn basic_orbit(&self, level: usize) -> &[usize] {
        &self.chain[level].orbit
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.chain {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    /// Membership test with a degree check.
    pub fn contains(&self, p: &Perm) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(self.is_member(p))
    }

    /// Membership by sifting; the caller guarantees the degree.
    pub fn is_member(&self, p: &Perm) -> bool {
        let mut g = p.clone();
        for lvl in &self.chain {
            let b = g.apply(lvl.point);
            match lvl.rep(b) {
                Some(u) => g = g.mul(&u.inverse()),
                None => return false,
            }
        }
        g.is_identity()
    }

    /// Transversal representative at `level` mapping its base point to `x`.
    pub(crate) fn level_rep(&self, level: usize, x: usize) -> Option<Perm> {
        self.chain[level].rep(x)
    }

    pub(crate) fn depth(&self) -> usize {
        self.chain.len()
    }

    /// Uniformly distributed element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut g = self.identity();
        for lvl in self.chain.iter().rev() {
            let x = lvl.orbit[rng.gen_range(0..lvl.orbit.len())];
            let u = lvl.rep(x).expect("orbit point");
            g = g.mul(&u);
        }
        g
    }

    /// Every element, in a deterministic order. Only for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![self.identity()];
        for lvl in self.chain.iter().rev() {
            let reps: Vec<Perm> = lvl.orbit.iter().map(|&x| lvl.rep(x).unwrap()).collect();
            let mut next = Vec::with_capacity(out.len() * reps.len());
            for g in &out {
                for u in &reps {
                    next.push(g.mul(u));
                }
            }
            out = next;
        }
        out
    }

    /// Orbit of a point under the group, in BFS order.
    pub fn orbit(&self, pt: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[pt] = true;
        let mut out = vec![pt];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for g in &self.gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    /// Orbit index of every point; orbits are numbered by their smallest point.
    pub fn orbit_ids(&self) -> &[usize] {
        self.orbits.get_or_init(|| {
            let mut id = vec![usize::MAX; self.degree];
            let mut next = 0;
            for p in 0..self.degree {
                if id[p] != usize::MAX {
                    continue;
                }
                for x in self.orbit(p) {
                    id[x] = next;
                }
                next += 1;
            }
            id
        })
    }

    pub fn is_transitive(&self) -> bool {
        self.degree > 0 && self.orbit(0).len() == self.degree
    }

    /// Equivalent chain whose base starts with `prefix`.
    pub fn rebase(&self, prefix: &[usize]) -> PermGroup {
        if self.base().starts_with(prefix) {
            return self.clone();
        }
        let mut chain = Chain::new(self.degree, prefix);
        for g in &self.gens {
            chain.add_generator(g.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        while chain.order().unwrap_or(u64::MAX) < self.order {
            chain.sift_and_extend(self.random_element(&mut rng));
        }
        PermGroup {
            degree: self.degree,
            gens: self.gens.clone(),
            chain: chain.levels,
            order: self.order,
            orbits: OnceLock::new(),
        }
    }

    /// Subgroup fixing `pt`, read off a chain based at `pt`.
    pub fn point_stabilizer(&self, pt: usize) -> PermGroup {
        let g = self.rebase(&[pt]);
        if g.chain.is_empty() || g.chain[0].point != pt {
            // pt is fixed by everything
            return g;
        }
        let rest: Vec<Level> = g.chain[1..].to_vec();
        let order = g.order / g.chain[0].orbit.len() as u64;
        let gens = rest.first().map(|l| l.gens.clone()).unwrap_or_default();
        PermGroup {
            degree: self.degree,
            gens,
            chain: rest,
            order,
            orbits: OnceLock::new(),
        }
    }

    /// Subgroup generated by `gens`, each of which must lie in `self`.
    pub fn subgroup(&self, gens: Vec<Perm>) -> Result<PermGroup> {
        for g in &gens {
            if !self.contains(g)? {
                return Err(Error::NotMember(format!("parent group (generator {g})")));
            }
        }
        if gens.iter().all(|g| g.is_identity()) {
            return Ok(PermGroup::trivial(self.degree));
        }
        PermGroup::new(gens)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && other.order % self.order == 0
            && self.gens.iter().all(|g| other.is_member(g))
    }

    /// `self` is normalized by every generator of `over`.
    pub fn is_normalized_by(&self, over: &PermGroup) -> bool {
        over.gens.iter().all(|t| {
            self.gens.iter().all(|g| self.is_member(&g.conjugate(t)))
        })
    }

    pub fn conjugate_by(&self, t: &Perm) -> PermGroup {
        let gens: Vec<Perm> = self.gens.iter().map(|g| g.conjugate(t)).collect();
        if gens.is_empty() {
            return PermGroup::trivial(self.degree);
        }
        PermGroup::with_order(gens, self.order).expect("conjugate has the same order")
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, a)| {
            self.gens[i + 1..].iter().all(|b| a.mul(b) == b.mul(a))
        })
    }

    /// Normal closure of `gens` in `self`.
    pub fn normal_closure(&self, gens: Vec<Perm>) -> Result<PermGroup> {
        let mut cur: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        if cur.is_empty() {
            return Ok(PermGroup::trivial(self.degree));
        }
        let mut n = PermGroup::new(cur.clone())?;
        loop {
            let mut grew = false;
            let snapshot = cur.clone();
            'outer: for g in &snapshot {
                for t in &self.gens {
                    let c = g.conjugate(t);
                    if !n.is_member(&c) {
                        cur.push(c);
                        n = PermGroup::new(cur.clone())?;
                        grew = true;
                        break 'outer;
                    }
                }
            }
            if !grew {
                return Ok(n);
            }
        }
    }

    pub fn derived_subgroup(&self) -> Result<PermGroup> {
        let mut comms = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                let c = a.inverse().mul(&b.inverse()).mul(a).mul(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(comms)
    }

    pub fn is_perfect(&self) -> Result<bool> {
        Ok(self.derived_subgroup()?.order() == self.order)
    }
}

fn check_gens(gens: &[Perm]) -> Result<usize> {
    let degree = gens
        .first()
        .map(|g| g.degree())
        .ok_or_else(|| Error::Precondition("empty generator list".into()))?;
    if degree == 0 {
        return Err(Error::Precondition("degree-0 generators".into()));
    }
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
    }
    Ok(degree)
}

/// Working chain used while building.
struct Chain {
    degree: usize,
    levels: Vec<Level>,
}

impl Chain {
    fn new(degree: usize, base_prefix: &[usize]) -> Self {
        Chain {
            degree,
            levels: base_prefix.iter().map(|&b| Level::new(b, degree)).collect(),
        }
    }

    fn order(&self) -> Result<u64> {
        self.levels.iter().try_fold(1u64, |acc, l| {
            acc.checked_mul(l.orbit.len() as u64)
                .ok_or_else(|| Error::Data("group order overflows u64".into()))
        })
    }

    /// Sift from `start`; returns the residue and the level where it dropped out
    /// (`levels.len()` if it passed every level).
    fn sift(&self, g: &Perm, start: usize) -> (Perm, usize) {
        let mut g = g.clone();
        for (i, lvl) in self.levels.iter().enumerate().skip(start) {
            let b = g.apply(lvl.point);
            match lvl.rep(b) {
                Some(u) => g = g.mul(&u.inverse()),
                None => return (g, i),
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    /// Adds a non-identity element fixing base points `< upto` as a strong
    /// generator of levels `from..=upto`, appending a base point if needed.
    fn insert(&mut self, g: Perm, from: usize, upto: usize) {
        if upto == self.levels.len() {
            let moved = (0..self.degree)
                .find(|&x| g.apply(x) != x)
                .expect("non-identity residue");
            self.levels.push(Level::new(moved, self.degree));
        }
        for j in from..=upto {
            self.levels[j].gens.push(g.clone());
            self.levels[j].rebuild(self.degree);
        }
    }

    fn add_generator(&mut self, g: Perm) {
        if g.is_identity() {
            return;
        }
        let upto = self
            .levels
            .iter()
            .position(|l| g.apply(l.point) != l.point)
            .unwrap_or(self.levels.len());
        self.insert(g, 0, upto);
    }

    fn sift_and_extend(&mut self, g: Perm) -> bool {
        let (res, lvl) = self.sift(&g, 0);
        if res.is_identity() {
            return false;
        }
        self.insert(res, 0, lvl);
        true
    }

    fn schreier_sims(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut dropped: Option<(Perm, usize)> = None;
            'scan: for oi in 0..self.levels[li].orbit.len() {
                let beta = self.levels[li].orbit[oi];
                let u_beta = self.levels[li].rep(beta).unwrap();
                for s in 0..self.levels[li].gens.len() {
                    let sg = &self.levels[li].gens[s];
                    let img = sg.apply(beta);
                    let u_img = self.levels[li].rep(img).unwrap();
                    let h = u_beta.mul(sg).mul(&u_img.inverse());
                    if h.is_identity() {
                        continue;
                    }
                    let (res, lvl) = self.sift(&h, li + 1);
                    if !res.is_identity() {
                        dropped = Some((res, lvl));
                        break 'scan;
                    }
                }
            }
            match dropped {
                Some((res, lvl)) => {
                    self.insert(res, li + 1, lvl);
                    i = lvl as isize;
                }
                None => i -= 1,
            }
        }
    }
}

/// Product-replacement generator of near-uniform random elements.
pub(crate) struct ProductReplacement {
    state: Vec<Perm>,
    acc: Perm,
    rng: ChaCha8Rng,
}

impl ProductReplacement {
    pub(crate) fn new(gens: &[Perm], seed: u64) -> Self {
        let degree = gens[0].degree();
        let mut state: Vec<Perm> = gens.to_vec();
        while state.len() < 10 {
            let k = state.len() % gens.len();
            state.push(gens[k].clone());
        }
        let mut pr = ProductReplacement {
            state,
            acc: Perm::identity(degree),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for _ in 0..60 {
            pr.next();
        }
        pr
    }

    pub(crate) fn next(&mut self) -> Perm {
        let n = self.state.len();
        let i = self.rng.gen_range(0..n);
        let mut j = self.rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let prod = if self.rng.gen_bool(0.5) {
            self.state[i].mul(&self.state[j])
        } else {
            self.state[j].mul(&self.state[i])
        };
        self.state[i] = prod;
        self.acc = self.acc.mul(&self.state[i]);
        self.acc.clone()
    }
}

/// Point type re-export for callers that index transversals.
pub type BasePoint = Point;

/// Seeded RNG used for all randomized group algorithms.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// Breadth-first closure of `start` under right multiplication by `gens`.
/// Only meant for small groups used in tests and oracles.
pub fn naive_closure(gens: &[Perm]) -> Vec<Perm> {
    use std::collections::HashSet;
    let degree = gens[0].degree();
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    let mut out = Vec::new();
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.mul(s);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
        out.push(g);
    }
    out
}
