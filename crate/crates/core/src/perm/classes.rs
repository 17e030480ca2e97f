use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Mutex;

use super::backtrack::{centralizer_order_unchecked, transporter};
use super::group::{default_seed, seeded_rng, PermGroup};
use super::permutation::Perm;
use crate::config::Budget;
use crate::error::{Error, Result};

/// Groups up to this order get their classes by enumerating every element.
const ENUMERATE_ORDER: u64 = 20_000;

/// Conjugacy class data of a group. `reps` is empty for ingested tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub reps: Vec<Perm>,
    pub sizes: Vec<u64>,
    pub centralizer_orders: Vec<u64>,
    pub element_orders: Vec<u64>,
    /// Prime → class index of the p-th power of each class.
    pub power_maps: BTreeMap<u64, Vec<usize>>,
}

impl ClassData {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn group_order(&self) -> u64 {
        self.sizes[0] * self.centralizer_orders[0]
    }

    /// Class of `g^e` for `g` in class `k`, composed from the stored prime power maps.
    pub fn pow_class(&self, k: usize, e: u64) -> Result<usize> {
        let ord = self.element_orders[k];
        let mut e = e % ord;
        if e == 0 {
            return Ok(0);
        }
        let mut cur = k;
        let mut p = 2;
        while e > 1 {
            if p * p > e {
                p = e;
            }
            while e % p == 0 {
                let map = self.power_maps.get(&p).ok_or_else(|| {
                    Error::Data(format!("no {p}-power map stored"))
                })?;
                cur = map[cur];
                e /= p;
            }
            p += 1;
        }
        Ok(cur)
    }

    pub fn inverse_class(&self, k: usize) -> Result<usize> {
        self.pow_class(k, self.element_orders[k] - 1)
    }

    /// Checks the class-equation invariants.
    pub fn check(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::Verification("no classes".into()));
        }
        if self.centralizer_orders.len() != n || self.element_orders.len() != n {
            return Err(Error::Verification("class record lengths differ".into()));
        }
        let order = self.group_order();
        if self.sizes[0] != 1 || self.element_orders[0] != 1 {
            return Err(Error::Verification("class 1 is not the identity class".into()));
        }
        let mut total = 0u64;
        for k in 0..n {
            if self.sizes[k].checked_mul(self.centralizer_orders[k]) != Some(order) {
                return Err(Error::Verification(format!(
                    "class {}: size {} times centralizer {} is not {order}",
                    k + 1,
                    self.sizes[k],
                    self.centralizer_orders[k]
                )));
            }
            total += self.sizes[k];
        }
        if total != order {
            return Err(Error::Verification(format!("class sizes sum to {total}, not {order}")));
        }
        for (p, map) in &self.power_maps {
            if map.len() != n {
                return Err(Error::Verification(format!("{p}-power map has wrong length")));
            }
            for k in 0..n {
                let j = map[k];
                if j >= n {
                    return Err(Error::Verification(format!("{p}-power map: index out of range")));
                }
                let o = self.element_orders[k];
                let expect = o / num_integer::gcd(o, *p);
                if self.element_orders[j] != expect {
                    return Err(Error::Verification(format!(
                        "{p}-power map sends class {} (order {o}) to order {}",
                        k + 1,
                        self.element_orders[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Per-orbit cycle type: a conjugacy invariant that is cheap to compute.
pub(crate) fn invariant(orbit_ids: &[usize], x: &Perm) -> Vec<u32> {
    let n = x.degree();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0u32;
        let mut y = s;
        while !seen[y] {
            seen[y] = true;
            len += 1;
            y = x.apply(y);
        }
        out.push(((orbit_ids[s] as u32) << 16) | len.min(0xffff));
    }
    out.sort_unstable();
    out
}

/// Elements of the conjugacy class of `rep`, or `None` past `limit`.
pub fn class_elements(g: &PermGroup, rep: &Perm, limit: u64) -> Option<Vec<Perm>> {
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(rep.clone());
    let mut out = vec![rep.clone()];
    let mut queue = VecDeque::from([rep.clone()]);
    while let Some(x) = queue.pop_front() {
        for s in g.generators() {
            let y = x.conjugate(s);
            if !seen.contains(&y) {
                if out.len() as u64 >= limit {
                    return None;
                }
                seen.insert(y.clone());
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Some(out)
}

/// Computed classes together with the means to locate any element's class.
pub struct Classes {
    pub data: ClassData,
    group: PermGroup,
    buckets: HashMap<Vec<u32>, Vec<usize>>,
    members: Vec<Option<HashSet<Perm>>>,
    cache: Mutex<HashMap<Perm, usize>>,
    budget: Budget,
}

impl std::fmt::Debug for Classes {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Classes").field("data", &self.data).finish()
    }
}

impl Classes {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Index of the class containing `x` (assumed to lie in the group).
    pub fn identify(&self, x: &Perm) -> usize {
        let key = invariant(self.group.orbit_ids(), x);
        let bucket = match self.buckets.get(&key) {
            Some(b) => b,
            None => panic!("element {x} has no class with its cycle structure"),
        };
        if bucket.len() == 1 {
            return bucket[0];
        }
        let mut open = Vec::new();
        for &c in bucket {
            match &self.members[c] {
                Some(set) => {
                    if set.contains(x) {
                        return c;
                    }
                }
                None => open.push(c),
            }
        }
        if open.len() == 1 {
            return open[0];
        }
        if let Some(&c) = self.cache.lock().unwrap().get(x) {
            return c;
        }
        for &c in &open {
            if transporter(&self.group, &self.data.reps[c], x).is_some() {
                self.cache.lock().unwrap().insert(x.clone(), c);
                return c;
            }
        }
        panic!("element {x} is in no class")
    }

    /// Checked variant of [`Classes::identify`].
    pub fn class_of(&self, x: &Perm) -> Result<usize> {
        if !self.group.contains(x)? {
            return Err(Error::NotMember("group".into()));
        }
        Ok(self.identify(x))
    }

    /// Materializes class `k` within the enumeration budget.
    pub fn elements(&self, k: usize) -> Result<Vec<Perm>> {
        let size = self.data.sizes[k];
        if size > self.budget.class_enum_budget {
            return Err(Error::budget(
                "conjugacy class size",
                size,
                self.budget.class_enum_budget,
            ));
        }
        if let Some(set) = &self.members[k] {
            let mut v: Vec<Perm> = set.iter().cloned().collect();
            v.sort_unstable();
            return Ok(v);
        }
        Ok(class_elements(&self.group, &self.data.reps[k], u64::MAX).unwrap())
    }
}

/// Conjugacy classes, sorted by (element order, size, representative).
pub fn conjugacy_classes(g: &PermGroup, budget: &Budget) -> Result<Classes> {
    if g.order() > budget.max_order {
        return Err(Error::budget("group order", g.order(), budget.max_order));
    }
    let raw = if g.order() <= ENUMERATE_ORDER {
        classes_by_enumeration(g)
    } else {
        classes_by_sampling(g, budget)?
    };
    if raw.len() > budget.max_classes {
        return Err(Error::budget("number of classes", raw.len(), budget.max_classes));
    }
    finish(g, raw, budget)
}

fn classes_by_enumeration(g: &PermGroup) -> Vec<(Perm, u64)> {
    let mut elems = g.elements();
    elems.sort_unstable();
    let mut done: HashSet<Perm> = HashSet::with_capacity(elems.len());
    let mut out = Vec::new();
    for x in elems {
        if done.contains(&x) {
            continue;
        }
        let cls = class_elements(g, &x, u64::MAX).unwrap();
        let size = cls.len() as u64;
        done.extend(cls);
        // x is the smallest unvisited element, hence the class minimum
        out.push((x, size));
    }
    out
}

fn classes_by_sampling(g: &PermGroup, budget: &Budget) -> Result<Vec<(Perm, u64)>> {
    let order = g.order();
    let ids = g.orbit_ids().to_vec();
    let mut rng = seeded_rng(default_seed());
    let mut reps: Vec<Perm> = vec![g.identity()];
    let mut sizes: Vec<u64> = vec![1];
    let mut buckets: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    buckets.insert(invariant(&ids, &g.identity()), vec![0]);
    let mut total = 1u64;
    let mut samples = 0u64;
    while total < order {
        samples += 1;
        if samples % 1000 == 0 {
            log::debug!("class sampling: {samples} samples, {} classes", reps.len());
        }
        let x = g.random_element(&mut rng);
        let n = x.order();
        let mut seen_here: HashSet<Perm> = HashSet::new();
        for k in 1..n {
            let h = x.pow(k as i64);
            if !seen_here.insert(h.clone()) {
                continue;
            }
            let key = invariant(&ids, &h);
            let bucket = buckets.entry(key).or_default();
            if bucket.iter().any(|&c| transporter(g, &reps[c], &h).is_some()) {
                continue;
            }
            let cent = centralizer_order_unchecked(g, &h);
            let size = order / cent;
            bucket.push(reps.len());
            reps.push(h);
            sizes.push(size);
            total += size;
            if reps.len() > budget.max_classes {
                return Err(Error::budget("number of classes", format!("> {}", budget.max_classes), budget.max_classes));
            }
            if total >= order {
                break;
            }
        }
    }
    if total != order {
        return Err(Error::Verification(format!("class sizes overshoot |G|: {total} vs {order}")));
    }
    // canonical representative: minimal element of the class when it fits
    let mut out = Vec::with_capacity(reps.len());
    for (r, s) in reps.into_iter().zip(sizes) {
        let rep = if s <= budget.class_enum_budget {
            class_elements(g, &r, u64::MAX).unwrap().into_iter().min().unwrap()
        } else {
            r
        };
        out.push((rep, s));
    }
    Ok(out)
}

fn finish(g: &PermGroup, mut raw: Vec<(Perm, u64)>, budget: &Budget) -> Result<Classes> {
    raw.sort_by(|a, b| {
        (a.0.order(), a.1, &a.0).cmp(&(b.0.order(), b.1, &b.0))
    });
    let order = g.order();
    let ids = g.orbit_ids().to_vec();
    let reps: Vec<Perm> = raw.iter().map(|r| r.0.clone()).collect();
    let sizes: Vec<u64> = raw.iter().map(|r| r.1).collect();
    let mut buckets: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    for (i, r) in reps.iter().enumerate() {
        buckets.entry(invariant(&ids, r)).or_default().push(i);
    }
    let mut members: Vec<Option<HashSet<Perm>>> = vec![None; reps.len()];
    for bucket in buckets.values() {
        if bucket.len() < 2 {
            continue;
        }
        let largest = *bucket.iter().max_by_key(|&&c| (sizes[c], c)).unwrap();
        for &c in bucket {
            if c != largest && sizes[c] <= budget.class_enum_budget {
                let els = class_elements(g, &reps[c], u64::MAX).unwrap();
                members[c] = Some(els.into_iter().collect());
            }
        }
    }
    let data = ClassData {
        element_orders: reps.iter().map(|r| r.order()).collect(),
        centralizer_orders: sizes.iter().map(|s| order / s).collect(),
        sizes,
        reps,
        power_maps: BTreeMap::new(),
    };
    let mut classes = Classes {
        data,
        group: g.clone(),
        buckets,
        members,
        cache: Mutex::new(HashMap::new()),
        budget: *budget,
    };
    let max_ord = classes.data.element_orders.iter().copied().max().unwrap_or(1);
    let mut maps = BTreeMap::new();
    for p in primes_upto(max_ord.max(2)) {
        let map: Vec<usize> = classes
            .data
            .reps
            .iter()
            .map(|r| classes.identify(&r.pow(p as i64)))
            .collect();
        maps.insert(p, map);
    }
    classes.data.power_maps = maps;
    classes.data.check()?;
    Ok(classes)
}

pub(crate) fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(s: &str, n: usize) -> Perm {
        Perm::parse_cycles(s, n).unwrap()
    }

    fn q8() -> PermGroup {
        PermGroup::new(vec![
            cyc("(1,2,4,7)(3,6,8,5)", 8),
            cyc("(1,3,4,8)(2,5,7,6)", 8),
        ])
        .unwrap()
    }

    #[test]
    fn quaternion_classes() {
        let g = q8();
        assert_eq!(g.order(), 8);
        let c = conjugacy_classes(&g, &Budget::default()).unwrap();
        assert_eq!(c.data.sizes, vec![1, 1, 2, 2, 2]);
        assert_eq!(c.data.element_orders, vec![1, 2, 4, 4, 4]);
        assert_eq!(c.data.power_maps[&2], vec![0, 0, 1, 1, 1]);
    }

    #[test]
    fn trivial_group_has_one_class() {
        let c = conjugacy_classes(&PermGroup::trivial(3), &Budget::default()).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn sampling_matches_enumeration() {
        let m11 = PermGroup::new(vec![
            cyc("(1,2,3,4,5,6,7,8,9,10,11)", 11),
            cyc("(3,7,11,8)(4,10,5,6)", 11),
        ])
        .unwrap();
        let a = classes_by_enumeration(&m11);
        let b = classes_by_sampling(&m11, &Budget::default()).unwrap();
        let fa = finish(&m11, a, &Budget::default()).unwrap();
        let fb = finish(&m11, b, &Budget::default()).unwrap();
        assert_eq!(fa.data, fb.data);
        assert_eq!(fa.len(), 10);
    }

    #[test]
    fn budget_is_enforced() {
        let b = Budget { max_order: 10, ..Budget::default() };
        let s4 = PermGroup::new(vec![cyc("(1,2,3,4)", 4), cyc("(1,2)", 4)]).unwrap();
        assert!(matches!(conjugacy_classes(&s4, &b), Err(Error::Budget { .. })));
    }
}
