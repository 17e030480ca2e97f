use std::collections::HashMap;

use super::group::PermGroup;
use super::permutation::{Perm, Point};
use crate::config::Budget;
use crate::error::{Error, Result};

/// The action of `G` on the right cosets `Hg` of a subgroup.
#[derive(Clone, Debug)]
pub struct CosetAction {
    /// Image of `G` acting on the cosets; coset 0 is `H` itself.
    pub image: PermGroup,
    pub kernel_order: u64,
    /// `H` with a chain based on `G`'s base, used for canonical representatives.
    sub: PermGroup,
    base: Vec<usize>,
    reps: Vec<Perm>,
    index: HashMap<Vec<Point>, usize>,
    normal: bool,
}

impl CosetAction {
    pub fn degree(&self) -> usize {
        self.reps.len()
    }

    /// True when `H` is normal, so the image is `G/H`.
    pub fn subgroup_is_normal(&self) -> bool {
        self.normal
    }

    /// Permutation induced on the cosets by an element of `G`.
    pub fn image_of(&self, g: &Perm) -> Perm {
        let imgs: Vec<Point> = self
            .reps
            .iter()
            .map(|r| self.index[&canonical_key(&self.sub, &self.base, &r.mul(g))] as Point)
            .collect();
        Perm::from_points(imgs)
    }

    /// Coset index of `Hg`.
    pub fn coset_of(&self, g: &Perm) -> usize {
        self.index[&canonical_key(&self.sub, &self.base, g)]
    }
}

/// Base images of the element of `Hg` whose base-image sequence is
/// lexicographically smallest; it identifies the coset.
fn canonical_key(sub: &PermGroup, base: &[usize], g: &Perm) -> Vec<Point> {
    let mut c = g.clone();
    for level in 0..sub.depth() {
        // sub's base coincides with `base` on its first `depth` points
        let b = base[level];
        let orbit = sub.basic_orbit(level);
        let best = *orbit.iter().min_by_key(|&&x| c.apply(x)).unwrap();
        if best != b {
            let u = sub.level_rep(level, best).unwrap();
            c = u.mul(&c);
        }
    }
    base.iter().map(|&b| c.apply(b) as Point).collect()
}

/// Acts `G` on the right cosets of `H`.
pub fn coset_action(g: &PermGroup, h: &PermGroup, budget: &Budget) -> Result<CosetAction> {
    if h.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            left: g.degree(),
            right: h.degree(),
        });
    }
    if !h.is_subgroup_of(g) {
        return Err(Error::NotMember("subgroup data is not contained in the group".into()));
    }
    let index = g.order() / h.order();
    if index > budget.max_index {
        return Err(Error::budget("coset index", index, budget.max_index));
    }
    let base = g.base();
    let sub = if h.is_trivial() {
        PermGroup::trivial(g.degree())
    } else {
        h.rebase(&base)
    };
    debug_assert!(sub.depth() <= base.len());
    let mut reps = vec![g.identity()];
    let mut idx: HashMap<Vec<Point>, usize> = HashMap::new();
    idx.insert(canonical_key(&sub, &base, &g.identity()), 0);
    let mut images: Vec<Vec<Point>> = vec![Vec::with_capacity(index as usize); g.generators().len()];
    let mut i = 0;
    while i < reps.len() {
        for (si, s) in g.generators().iter().enumerate() {
            let x = reps[i].mul(s);
            let key = canonical_key(&sub, &base, &x);
            let j = match idx.get(&key) {
                Some(&j) => j,
                None => {
                    let j = reps.len();
                    idx.insert(key, j);
                    reps.push(x);
                    j
                }
            };
            images[si].push(j as Point);
        }
        i += 1;
    }
    if reps.len() as u64 != index {
        return Err(Error::Verification(format!(
            "found {} cosets, expected {index}",
            reps.len()
        )));
    }
    let gens: Vec<Perm> = images.into_iter().map(Perm::from_points).collect();
    let normal = h.is_normalized_by(g);
    let image = if index == 1 {
        PermGroup::trivial(1)
    } else if normal {
        PermGroup::with_order(gens, index)?
    } else {
        PermGroup::new(gens)?
    };
    let kernel_order = g.order() / image.order();
    Ok(CosetAction {
        image,
        kernel_order,
        sub,
        base,
        reps,
        index: idx,
        normal,
    })
}

/// True when a conjugate of `k` lies in `h`, i.e. `k` fixes a right coset of
/// `h` in `g`. For `|k| = |h|` this decides conjugacy of `k` and `h`.
pub fn is_subconjugate(g: &PermGroup, k: &PermGroup, h: &PermGroup, budget: &Budget) -> Result<bool> {
    if h.order() % k.order() != 0 {
        return Ok(false);
    }
    let index = g.order() / h.order();
    if index > budget.max_index {
        return Err(Error::budget("coset index", index, budget.max_index));
    }
    let base = g.base();
    let sub = if h.is_trivial() { PermGroup::trivial(g.degree()) } else { h.rebase(&base) };
    let fixed = |x: &Perm, key: &Vec<Point>| {
        k.generators().iter().all(|t| canonical_key(&sub, &base, &x.mul(t)) == *key)
    };
    let mut reps = vec![g.identity()];
    let mut seen: HashMap<Vec<Point>, usize> = HashMap::new();
    let key0 = canonical_key(&sub, &base, &reps[0]);
    if fixed(&reps[0], &key0) {
        return Ok(true);
    }
    seen.insert(key0, 0);
    let mut i = 0;
    while i < reps.len() {
        for s in g.generators() {
            let x = reps[i].mul(s);
            let key = canonical_key(&sub, &base, &x);
            if seen.contains_key(&key) {
                continue;
            }
            if fixed(&x, &key) {
                return Ok(true);
            }
            seen.insert(key, reps.len());
            reps.push(x);
        }
        i += 1;
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(s: &str, n: usize) -> Perm {
        Perm::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn m11_on_cosets_of_m10() {
        let m11 = PermGroup::new(vec![
            cyc("(1,2,3,4,5,6,7,8,9,10,11)", 11),
            cyc("(3,7,11,8)(4,10,5,6)", 11),
        ])
        .unwrap();
        let m10 = m11.point_stabilizer(10);
        let act = coset_action(&m11, &m10, &Budget::default()).unwrap();
        assert_eq!(act.degree(), 11);
        assert_eq!(act.kernel_order, 1);
        assert_eq!(act.image.order(), 7920);
        assert!(act.image.is_transitive());
    }

    #[test]
    fn whole_group_gives_trivial_image() {
        let s3 = PermGroup::new(vec![cyc("(1,2,3)", 3), cyc("(1,2)", 3)]).unwrap();
        let act = coset_action(&s3, &s3, &Budget::default()).unwrap();
        assert_eq!(act.image.order(), 1);
        assert_eq!(act.kernel_order, 6);
    }

    #[test]
    fn quotient_by_normal_subgroup() {
        let s4 = PermGroup::new(vec![cyc("(1,2,3,4)", 4), cyc("(1,2)", 4)]).unwrap();
        let v4 = s4
            .subgroup(vec![cyc("(1,2)(3,4)", 4), cyc("(1,3)(2,4)", 4)])
            .unwrap();
        let act = coset_action(&s4, &v4, &Budget::default()).unwrap();
        assert!(act.subgroup_is_normal());
        assert_eq!(act.image.order(), 6);
        assert_eq!(act.kernel_order, 4);
        let x = cyc("(1,2)", 4);
        assert_eq!(act.image_of(&x).order(), 2);
    }
}
