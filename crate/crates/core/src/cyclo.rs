//! Exact arithmetic in cyclotomic fields.
//!
//! An element of `Q(ζ_n)` is stored as a sparse combination of powers of
//! `ζ_n` over the Zumbroich basis, with `n` always the smallest conductor.
//!
//! Write `n = ∏ p^a` and decompose an exponent additively as
//! `k ≡ Σ_p (n/p^a)·e_p (mod n)` with `e_p ∈ Z/p^a`. The top base-`p` digit of
//! `e_p` is `⌊e_p / p^(a-1)⌋`. A power `ζ_n^k` is a basis element when, for
//! every odd `p`, that digit is nonzero and, for `p = 2`, it is zero. The
//! relations used to reach this form are
//!
//! * odd `p`: `Σ_{i<p} ζ_n^(k + i·n/p) = 0`, so a digit-0 term becomes minus
//!   the sum of the other `p − 1`;
//! * `p = 2`: `ζ_n^(k + n/2) = −ζ_n^k`.
//!
//! Equality is coefficient-wise on this form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    n: u64,
    /// Sorted by exponent; coefficients are nonzero.
    terms: Vec<(u64, BigRational)>,
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

/// Top digit of `e_p` for each exponent, for one prime power `p^a ∥ n`.
struct Digit {
    p: u64,
    a: u32,
    q: u64,
    inv: u64,
    step: u64,
}

impl Digit {
    fn new(n: u64, p: u64, a: u32) -> Self {
        let q = p.pow(a);
        let m = n / q;
        Digit {
            p,
            a,
            q,
            inv: mod_inverse(m % q, q),
            step: n / p,
        }
    }

    fn of(&self, k: u64) -> u64 {
        let e = ((k % self.q) as u128 * self.inv as u128 % self.q as u128) as u64;
        e / self.p.pow(self.a - 1)
    }
}

type Acc = BTreeMap<u64, BigRational>;

fn acc_add(acc: &mut Acc, k: u64, c: &BigRational) {
    if c.is_zero() {
        return;
    }
    let remove = {
        let e = acc.entry(k).or_insert_with(BigRational::zero);
        *e += c;
        e.is_zero()
    };
    if remove {
        acc.remove(&k);
    }
}

/// Rewrites a combination of powers of `ζ_n` into the Zumbroich basis.
fn zumbroich(n: u64, mut acc: Acc) -> Acc {
    for (p, a) in factorize(n) {
        let d = Digit::new(n, p, a);
        let bad: Vec<u64> = acc
            .keys()
            .copied()
            .filter(|&k| {
                let t = d.of(k);
                if p == 2 {
                    t != 0
                } else {
                    t == 0
                }
            })
            .collect();
        for k in bad {
            let c = match acc.remove(&k) {
                Some(c) => c,
                None => continue,
            };
            let neg = -c;
            if p == 2 {
                acc_add(&mut acc, (k + d.step) % n, &neg);
            } else {
                for i in 1..p {
                    acc_add(&mut acc, (k + i * d.step) % n, &neg);
                }
            }
        }
    }
    acc
}

/// Lowers the conductor as far as possible; input must be in basis form.
fn reduce_conductor(mut n: u64, mut acc: Acc) -> (u64, Acc) {
    'outer: loop {
        if acc.is_empty() {
            return (1, acc);
        }
        if n == 1 {
            return (1, acc);
        }
        for (p, a) in factorize(n) {
            if a >= 2 || p == 2 {
                if acc.keys().all(|k| k % p == 0) {
                    acc = acc.into_iter().map(|(k, c)| (k / p, c)).collect();
                    n /= p;
                    continue 'outer;
                }
            } else {
                let d = Digit::new(n, p, 1);
                let mut ok = true;
                let mut next = Acc::new();
                for (&k, c) in &acc {
                    let t = d.of(k);
                    let k0 = (k + n - t * d.step) % n;
                    if t != 1 {
                        // checked via the orbit's digit-1 member
                        continue;
                    }
                    for i in 2..p {
                        match acc.get(&((k0 + i * d.step) % n)) {
                            Some(c2) if c2 == c => {}
                            _ => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        break;
                    }
                    next.insert(k0 / p, -c.clone());
                }
                // every term must belong to a complete orbit
                if ok && next.len() * (p as usize - 1) == acc.len() {
                    acc = next;
                    n /= p;
                    continue 'outer;
                }
            }
        }
        return (n, acc);
    }
}

impl Cyclotomic {
    fn from_acc(n: u64, acc: Acc) -> Self {
        let acc = zumbroich(n, acc);
        let (n, acc) = reduce_conductor(n, acc);
        Cyclotomic {
            n,
            terms: acc.into_iter().collect(),
        }
    }

    pub fn zero() -> Self {
        Cyclotomic {
            n: 1,
            terms: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(v))
    }

    pub fn from_rational(v: BigRational) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            n: 1,
            terms: vec![(0, v)],
        }
    }

    /// `ζ_n^k`.
    pub fn root(n: u64, k: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("conductor 0".into()));
        }
        let mut acc = Acc::new();
        acc.insert(k % n, BigRational::one());
        Ok(Self::from_acc(n, acc))
    }

    /// `Σ_j coeffs[j]·ζ_n^j` for integer coefficients.
    pub fn from_int_coeffs(n: u64, coeffs: &[i64]) -> Self {
        let mut acc = Acc::new();
        for (j, &c) in coeffs.iter().enumerate() {
            acc_add(&mut acc, j as u64 % n, &BigRational::from_integer(BigInt::from(c)));
        }
        Self::from_acc(n, acc)
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// Nonzero basis coefficients, sorted by exponent of `ζ_conductor`.
    pub fn terms(&self) -> &[(u64, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match (self.n, self.terms.as_slice()) {
            (1, []) => Some(BigRational::zero()),
            (1, [(0, c)]) => Some(c.clone()),
            _ => None,
        }
    }

    /// The value as an integer, if it is a rational integer.
    pub fn as_rational_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_rational_integer().and_then(|v| v.to_i64())
    }

    fn embedded(&self, n: u64) -> Acc {
        let f = n / self.n;
        self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect()
    }

    /// Image under `ζ ↦ ζ^k`; `k` must be coprime to the conductor.
    pub fn galois(&self, k: i64) -> Self {
        if self.n == 1 {
            return self.clone();
        }
        let n = self.n as i64;
        let k = k.rem_euclid(n) as u64;
        let mut acc = Acc::new();
        for (e, c) in &self.terms {
            acc_add(&mut acc, e * k % self.n, c);
        }
        Self::from_acc(self.n, acc)
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Floating-point value, for display and numerical cross-checks only.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in &self.terms {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = 2.0 * std::f64::consts::PI * (*k as f64) / (self.n as f64);
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }

    /// Value modulo a prime `p`, given `z`, a primitive `e`-th root of unity
    /// mod `p` with the conductor dividing `e`.
    pub fn mod_p(&self, p: u64, z: u64, e: u64) -> Option<u64> {
        if e % self.n != 0 {
            return None;
        }
        let zn = crate::util::pow_mod(z, e / self.n, p);
        let mut acc = 0u64;
        for (k, c) in &self.terms {
            let num = c.numer().mod_floor(&BigInt::from(p)).to_u64()?;
            let den = c.denom().mod_floor(&BigInt::from(p)).to_u64()?;
            if den == 0 {
                return None;
            }
            let v = num * crate::util::inv_mod(den, p) % p;
            acc = (acc + v * crate::util::pow_mod(zn, *k, p)) % p;
        }
        Some(acc)
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.terms.cmp(&other.terms))
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.n == 1 && rhs.n == 1 {
            let a = self.as_rational().unwrap();
            let b = rhs.as_rational().unwrap();
            return Cyclotomic::from_rational(a + b);
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let n = self.n.lcm(&rhs.n);
        let mut acc = self.embedded(n);
        for (k, c) in rhs.embedded(n) {
            acc_add(&mut acc, k, &c);
        }
        Cyclotomic::from_acc(n, acc)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero();
        }
        if self.n == 1 {
            return rhs.scale(&self.terms[0].1);
        }
        if rhs.n == 1 {
            return self.scale(&rhs.terms[0].1);
        }
        let n = self.n.lcm(&rhs.n);
        let a = self.embedded(n);
        let b = rhs.embedded(n);
        let mut acc = Acc::new();
        for (i, x) in &a {
            for (j, y) in &b {
                acc_add(&mut acc, (i + j) % n, &(x * y));
            }
        }
        Cyclotomic::from_acc(n, acc)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: Cyclotomic) -> Cyclotomic { (&self).$f(&rhs) }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: &Cyclotomic) -> Cyclotomic { (&self).$f(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        let mut n = 1u64;
        let mut acc = Acc::new();
        for x in iter {
            if x.n != n {
                let m = n.lcm(&x.n);
                if m != n {
                    let f = m / n;
                    acc = acc.into_iter().map(|(k, c)| (k * f, c)).collect();
                    n = m;
                }
            }
            for (k, c) in x.embedded(n) {
                acc_add(&mut acc, k, &c);
            }
        }
        Cyclotomic::from_acc(n, acc)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let term = if *k == 0 {
                fmt_rational(c)
            } else {
                let root = if *k == 1 {
                    format!("E({})", self.n)
                } else {
                    format!("E({})^{}", self.n, k)
                };
                if c.is_one() {
                    root
                } else if (-c).is_one() {
                    format!("-{root}")
                } else {
                    format!("{}*{root}", fmt_rational(c))
                }
            };
            if i > 0 && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses the expression grammar
///
/// ```text
/// expr   := ['+'|'-'] term (('+'|'-') term)*
/// term   := factor ('*' factor)*
/// factor := int ['/' int] | 'E(' int ')' ['^' int] | '(' expr ')'
/// ```
pub fn parse(text: &str) -> Result<Cyclotomic> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

impl std::str::FromStr for Cyclotomic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let t = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(t.parse().unwrap())
    }

    fn small(&mut self) -> Result<u64> {
        let start = self.pos;
        self.int()?.to_u64().ok_or_else(|| Error::Syntax {
            pos: start,
            msg: "integer too large".into(),
        })
    }

    fn expr(&mut self) -> Result<Cyclotomic> {
        let mut acc = if self.eat(b'-') {
            -self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Cyclotomic> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Cyclotomic> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(b'E') => {
                self.pos += 1;
                if !self.eat(b'(') {
                    return Err(self.err("expected '(' after E"));
                }
                let at = self.pos;
                let n = self.small()?;
                if n == 0 {
                    return Err(Error::Syntax {
                        pos: at,
                        msg: "conductor 0".into(),
                    });
                }
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                let k = if self.eat(b'^') { self.small()? } else { 1 };
                Cyclotomic::root(n, k % n)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.int()?;
                if self.eat(b'/') {
                    let at = self.pos;
                    let den = self.int()?;
                    if den.is_zero() {
                        return Err(Error::Syntax {
                            pos: at,
                            msg: "zero denominator".into(),
                        });
                    }
                    Ok(Cyclotomic::from_rational(BigRational::new(num, den)))
                } else {
                    Ok(Cyclotomic::from_bigint(num))
                }
            }
            _ => Err(self.err("expected number, E(n) or '('")),
        }
    }
}

/// Exact rational helper.
pub fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Non-negative integer test used by multiplicity checks.
pub fn is_nonneg_integer(c: &Cyclotomic) -> Option<u64> {
    c.as_rational_integer().filter(|v| !v.is_negative()).and_then(|v| v.to_u64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: u64, k: u64) -> Cyclotomic {
        Cyclotomic::root(n, k).unwrap()
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(e(4, 2), Cyclotomic::from_int(-1));
        assert_eq!(&e(3, 1) + &e(3, 2), Cyclotomic::from_int(-1));
        assert_eq!(&e(8, 1) * &e(8, 1), e(4, 1));
        assert_eq!(e(6, 1), -&e(3, 2));
        assert_eq!(e(1, 0), Cyclotomic::one());
    }

    #[test]
    fn golden_ratio_relation() {
        let b5 = &e(5, 1) + &e(5, 4);
        assert_eq!(b5.conductor(), 5);
        let sq = &b5 * &b5;
        assert_eq!(sq, &Cyclotomic::one() - &b5);
        assert_eq!(b5.conj(), b5);
    }

    #[test]
    fn galois_fixed_reduces_to_rational() {
        let s: Cyclotomic = (1..7).map(|k| e(7, k)).sum();
        assert_eq!(s, Cyclotomic::from_int(-1));
        let x = &e(12, 1) + &e(12, 11);
        // 2cos(pi/6) = sqrt(3)
        assert_eq!((&x * &x).as_i64(), Some(3));
    }

    #[test]
    fn conjugation_and_integers() {
        assert_eq!(e(5, 1).conj(), e(5, 4));
        let r = Cyclotomic::from_rational(rat(3, 7));
        assert_eq!(r.conj(), r);
        assert_eq!(Cyclotomic::from_int(-1).as_rational_integer(), Some(BigInt::from(-1)));
        assert_eq!(e(3, 1).as_rational_integer(), None);
        let v = &(&e(3, 1) + &e(3, 2)) + &Cyclotomic::from_int(2);
        assert_eq!(v.as_i64(), Some(1));
    }

    #[test]
    fn text_round_trip() {
        for s in ["E(4)", "E(5)+E(5)^4", "-1/2+1/2*E(3)", "3", "0", "-E(7)-E(7)^2-E(7)^4", "2*E(8)^3"] {
            let v = parse(s).unwrap();
            let back = parse(&v.to_string()).unwrap();
            assert_eq!(v, back, "{s}");
        }
        assert_eq!(parse("E(4)").unwrap(), e(4, 1));
        let z = parse("-1/2+1/2*E(3)").unwrap();
        let expect = &Cyclotomic::from_rational(rat(-1, 2)) + &e(3, 1).scale(&rat(1, 2));
        assert_eq!(z, expect);
        assert!(matches!(parse("E(0)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("1+"), Err(Error::Syntax { pos: 2, .. })));
        assert!(parse("(1+E(3)").is_err());
    }

    #[test]
    fn canonical_text() {
        assert_eq!(e(3, 1).to_string(), "E(3)");
        assert_eq!(Cyclotomic::from_rational(rat(-3, 2)).to_string(), "-3/2");
        assert_eq!(parse("E(5)^4+E(5)").unwrap().to_string(), "E(5)+E(5)^4");
        assert_eq!(e(9, 3).to_string(), "E(3)");
    }
}
