//! Transporter search: elements `t` of a group with `t⁻¹ a t = b`.
//!
//! An element is enumerated as `t = w_k`, `w_i = u_i · w_{i-1}`, where `u_i`
//! runs over the transversal of level `i`. The image of base point `b_i`
//! under `t` is then `δ^{w_{i-1}}` for the chosen orbit point `δ`, so images
//! are fixed one base point at a time and checked against the cycle
//! structure of `a` and `b` before descending.

use super::group::PermGroup;
use super::permutation::Perm;
use crate::error::{Error, Result};

/// Partial bijection forced by conjugation: if `t(x) = y` then
/// `t(a^m(x)) = b^m(y)`.
struct Partial {
    fwd: Vec<u32>,
    used: Vec<bool>,
    trail: Vec<usize>,
}

const UNSET: u32 = u32::MAX;

impl Partial {
    fn new(n: usize) -> Self {
        Partial {
            fwd: vec![UNSET; n],
            used: vec![false; n],
            trail: Vec::new(),
        }
    }

    fn mark(&self) -> usize {
        self.trail.len()
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().unwrap();
            self.used[self.fwd[x] as usize] = false;
            self.fwd[x] = UNSET;
        }
    }

    /// Map the `a`-cycle through `x` onto the `b`-cycle through `y`.
    fn extend(&mut self, a: &Perm, b: &Perm, alen: &[u32], blen: &[u32], x: usize, y: usize) -> bool {
        if alen[x] != blen[y] || self.used[y] {
            return false;
        }
        let (mut p, mut q) = (x, y);
        for _ in 0..alen[x] {
            if self.fwd[p] != UNSET || self.used[q] {
                return false;
            }
            self.fwd[p] = q as u32;
            self.used[q] = true;
            self.trail.push(p);
            p = a.apply(p);
            q = b.apply(q);
        }
        true
    }
}

struct Search<'a> {
    g: &'a PermGroup,
    a: &'a Perm,
    b: &'a Perm,
    alen: Vec<u32>,
    blen: Vec<u32>,
    base: Vec<usize>,
    partial: Partial,
    count_only: bool,
    count: u64,
    found: Option<Perm>,
}

impl Search<'_> {
    fn run(&mut self, level: usize, w: &Perm) -> bool {
        if level == self.base.len() {
            if w.inverse().mul(self.a).mul(w) == *self.b {
                if self.count_only {
                    self.count += 1;
                } else {
                    self.found = Some(w.clone());
                    return true;
                }
            }
            return false;
        }
        let bi = self.base[level];
        let forced = self.partial.fwd[bi];
        let orbit: Vec<usize> = self.g.basic_orbit(level).to_vec();
        for delta in orbit {
            let gamma = w.apply(delta);
            if forced != UNSET {
                if gamma != forced as usize {
                    continue;
                }
            } else if self.alen[bi] != self.blen[gamma] || self.partial.used[gamma] {
                continue;
            }
            let mark = self.partial.mark();
            if forced == UNSET
                && !self.partial.extend(self.a, self.b, &self.alen, &self.blen, bi, gamma)
            {
                self.partial.undo(mark);
                continue;
            }
            let u = self.g.level_rep(level, delta).expect("orbit point");
            let next = u.mul(w);
            let stop = self.run(level + 1, &next);
            self.partial.undo(mark);
            if stop {
                return true;
            }
        }
        false
    }
}

fn check_member(g: &PermGroup, p: &Perm) -> Result<()> {
    if !g.contains(p)? {
        return Err(Error::NotMember(format!("group of order {} (element {p})", g.order())));
    }
    Ok(())
}

/// Returns `t` in `G` with `t⁻¹ a t = b`, or `None` if `a` and `b` are not conjugate.
pub fn are_conjugate(g: &PermGroup, a: &Perm, b: &Perm) -> Result<Option<Perm>> {
    check_member(g, a)?;
    check_member(g, b)?;
    Ok(transporter(g, a, b))
}

/// Unchecked variant for callers that already know `a, b ∈ G`.
pub(crate) fn transporter(g: &PermGroup, a: &Perm, b: &Perm) -> Option<Perm> {
    if a == b {
        return Some(g.identity());
    }
    if a.cycle_type() != b.cycle_type() {
        return None;
    }
    let mut s = Search {
        g,
        a,
        b,
        alen: a.cycle_lengths(),
        blen: b.cycle_lengths(),
        base: g.base(),
        partial: Partial::new(g.degree()),
        count_only: false,
        count: 0,
        found: None,
    };
    s.run(0, &g.identity());
    s.found
}

/// Order of `C_G(g)`, counted by enumerating the centralizer.
pub fn centralizer_order(g: &PermGroup, x: &Perm) -> Result<u64> {
    check_member(g, x)?;
    Ok(centralizer_order_unchecked(g, x))
}

pub(crate) fn centralizer_order_unchecked(g: &PermGroup, x: &Perm) -> u64 {
    if g.generators().iter().all(|s| s.mul(x) == x.mul(s)) {
        return g.order();
    }
    let mut s = Search {
        g,
        a: x,
        b: x,
        alen: x.cycle_lengths(),
        blen: x.cycle_lengths(),
        base: g.base(),
        partial: Partial::new(g.degree()),
        count_only: true,
        count: 0,
        found: None,
    };
    s.run(0, &g.identity());
    s.count
}
