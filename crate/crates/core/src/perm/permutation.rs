use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Points are stored as `u16`, so a permutation acts on at most 65535 points.
pub type Point = u16;

/// Largest supported degree.
pub const MAX_DEGREE: usize = u16::MAX as usize;

/// A permutation of `{0, …, n-1}` stored as its image list.
///
/// Products are applied left to right: `p.compose(&q)` maps `x` to `q(p(x))`,
/// and `x^(pq) = (x^p)^q`. Every group computation in the crate relies on
/// this convention.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Perm {
    images: Box<[Point]>,
}

impl Hash for Perm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "degree {degree} exceeds {MAX_DEGREE}");
        Perm {
            images: (0..degree as Point).collect(),
        }
    }

    /// Builds a permutation from an image list, checking that it is a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::Parse(format!("degree {n} exceeds {MAX_DEGREE}")));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Parse(format!("image list {images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.into_iter().map(|x| x as Point).collect(),
        })
    }

    /// Unchecked constructor for internal callers that already hold a bijection.
    pub(crate) fn from_points(images: Vec<Point>) -> Self {
        debug_assert!({
            let mut seen = vec![false; images.len()];
            images.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true))
        });
        Perm {
            images: images.into_boxed_slice(),
        }
    }

    /// Builds a permutation of the given degree from disjoint cycles of 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::Parse(format!("point {} outside degree {degree}", x + 1)));
                }
                if touched[x] {
                    return Err(Error::Parse(format!("point {} repeated in cycles", x + 1)));
                }
                touched[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Perm::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[Point] {
        &self.images
    }

    /// Image of a point.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Left-to-right product: `x ↦ q(p(x))`.
    pub fn compose(&self, q: &Perm) -> Result<Perm> {
        if self.degree() != q.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: q.degree(),
            });
        }
        Ok(self.mul(q))
    }

    /// Left-to-right product without the degree check.
    #[inline]
    pub fn mul(&self, q: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), q.degree());
        Perm {
            images: self.images.iter().map(|&x| q.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0 as Point; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as Point;
        }
        Perm {
            images: inv.into_boxed_slice(),
        }
    }

    /// `t⁻¹ · self · t`, i.e. `self` conjugated by `t`.
    pub fn conjugate(&self, t: &Perm) -> Perm {
        let mut out = vec![0 as Point; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            out[t.images[i] as usize] = t.images[x as usize];
        }
        Perm {
            images: out.into_boxed_slice(),
        }
    }

    pub fn pow(&self, e: i64) -> Perm {
        let n = self.degree();
        let mut out = vec![0 as Point; n];
        let mut done = vec![false; n];
        for start in 0..n {
            if done[start] {
                continue;
            }
            let mut cycle = vec![start];
            done[start] = true;
            let mut x = self.apply(start);
            while x != start {
                done[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            let len = cycle.len() as i64;
            let shift = e.rem_euclid(len) as usize;
            for (i, &p) in cycle.iter().enumerate() {
                out[p] = cycle[(i + shift) % cycle.len()] as Point;
            }
        }
        Perm {
            images: out.into_boxed_slice(),
        }
    }

    /// Disjoint cycles of length at least two, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut done = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if done[start] {
                continue;
            }
            let mut cycle = vec![start];
            done[start] = true;
            let mut x = self.apply(start);
            while x != start {
                done[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Length of the cycle through every point.
    pub fn cycle_lengths(&self) -> Vec<u32> {
        let n = self.degree();
        let mut len = vec![0u32; n];
        for start in 0..n {
            if len[start] != 0 {
                continue;
            }
            let mut l = 1;
            let mut x = self.apply(start);
            while x != start {
                l += 1;
                x = self.apply(x);
            }
            len[start] = l;
            let mut x = self.apply(start);
            while x != start {
                len[x] = l;
                x = self.apply(x);
            }
        }
        len
    }

    /// Sorted multiset of cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let lens = self.cycle_lengths();
        let mut done = vec![false; self.degree()];
        for start in 0..self.degree() {
            if done[start] {
                continue;
            }
            let mut x = start;
            loop {
                done[x] = true;
                x = self.apply(x);
                if x == start {
                    break;
                }
            }
            out.push(lens[start]);
        }
        out.sort_unstable();
        out
    }

    pub fn order(&self) -> u64 {
        use num_integer::Integer;
        self.cycle_lengths()
            .into_iter()
            .fold(1u64, |acc, l| acc.lcm(&(l as u64)))
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i == x as usize)
            .count()
    }

    /// Renders the permutation in 1-based disjoint-cycle notation.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            let parts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            s.push_str(&parts.join(","));
            s.push(')');
        }
        s
    }

    /// Parses 1-based disjoint-cycle notation such as `(1,2,3)(4,5)` or `()`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm> {
        if degree == 0 {
            return Err(Error::Parse("degree-0 permutations are not allowed".into()));
        }
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut cycles = Vec::new();
        let mut rest = text.as_str();
        if rest.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let end = body
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let inner = &body[..end];
            if !inner.is_empty() {
                let mut cycle = Vec::new();
                for tok in inner.split(',') {
                    let v: usize = tok
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad point {tok:?} in {text:?}")))?;
                    if v == 0 {
                        return Err(Error::Parse(format!("points are 1-based, got 0 in {text:?}")));
                    }
                    cycle.push(v - 1);
                }
                cycles.push(cycle);
            }
            rest = &body[end + 1..];
        }
        Perm::from_cycles(degree, &cycles)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Perm {
        Perm::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn compose_is_left_to_right() {
        assert_eq!(Perm::identity(3).compose(&p(&[2, 0, 1])).unwrap(), p(&[2, 0, 1]));
        assert_eq!(p(&[1, 0, 2]).compose(&p(&[0, 2, 1])).unwrap(), p(&[2, 0, 1]));
    }

    #[test]
    fn compose_matches_s3_table() {
        // exhaustive: (p*q)(x) == q(p(x)) for all of S3
        let all: Vec<Perm> = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
            .iter()
            .map(|v| p(v))
            .collect();
        for a in &all {
            for b in &all {
                let c = a.compose(b).unwrap();
                for x in 0..3 {
                    assert_eq!(c.apply(x), b.apply(a.apply(x)));
                }
                assert!(all.contains(&c));
            }
        }
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        assert!(matches!(
            Perm::identity(3).compose(&Perm::identity(4)),
            Err(Error::DegreeMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn inverse_and_conjugate() {
        let a = p(&[1, 2, 0, 4, 3]);
        assert!(a.mul(&a.inverse()).is_identity());
        let t = p(&[4, 3, 2, 1, 0]);
        let c = a.conjugate(&t);
        assert_eq!(c, t.inverse().mul(&a).mul(&t));
    }

    #[test]
    fn cycle_notation_round_trip() {
        let a = Perm::parse_cycles("(1,2,3)(4,5)", 6).unwrap();
        assert_eq!(a.images(), &[1, 2, 0, 4, 3, 5]);
        assert_eq!(a.to_cycle_string(), "(1,2,3)(4,5)");
        assert_eq!(a.order(), 6);
        assert_eq!(a.cycle_type(), vec![1, 2, 3]);
        assert_eq!(Perm::parse_cycles("()", 4).unwrap(), Perm::identity(4));
        assert!(Perm::parse_cycles("(1,2)", 0).is_err());
        assert!(Perm::parse_cycles("(1,1)", 3).is_err());
        assert!(Perm::parse_cycles("(0,1)", 3).is_err());
        assert!(Perm::parse_cycles("(1,4)", 3).is_err());
    }

    #[test]
    fn powers() {
        let a = Perm::parse_cycles("(1,2,3,4)(5,6)", 6).unwrap();
        assert_eq!(a.pow(2), a.mul(&a));
        assert_eq!(a.pow(-1), a.inverse());
        assert!(a.pow(4).is_identity());
    }
}
