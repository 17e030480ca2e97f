//! A deterministic test set of small permutation groups.

use gelpair::perm::{Perm, PermGroup};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Named {
    pub name: String,
    pub group: PermGroup,
}

fn perm(images: Vec<usize>) -> Perm {
    Perm::from_images(images).unwrap()
}

fn group(gens: Vec<Perm>) -> PermGroup {
    let deg = gens[0].degree();
    let gens: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
    if gens.is_empty() {
        PermGroup::trivial(deg)
    } else {
        PermGroup::new(gens).unwrap()
    }
}

pub fn cyclic(n: usize) -> PermGroup {
    group(vec![perm((0..n).map(|i| (i + 1) % n).collect())])
}

pub fn dihedral(n: usize) -> PermGroup {
    group(vec![
        perm((0..n).map(|i| (i + 1) % n).collect()),
        perm((0..n).map(|i| (n - i) % n).collect()),
    ])
}

pub fn symmetric(n: usize) -> PermGroup {
    let mut t: Vec<usize> = (0..n).collect();
    t.swap(0, 1);
    group(vec![perm((0..n).map(|i| (i + 1) % n).collect()), perm(t)])
}

pub fn alternating(n: usize) -> PermGroup {
    let gens = (2..n)
        .map(|k| {
            let mut v: Vec<usize> = (0..n).collect();
            v[0] = 1;
            v[1] = k;
            v[k] = 0;
            perm(v)
        })
        .collect();
    group(gens)
}

/// `x ↦ ax + b` over Z/p for `a` in the subgroup generated by `a0`.
pub fn affine(p: usize, a0: usize) -> PermGroup {
    group(vec![
        perm((0..p).map(|x| (x + 1) % p).collect()),
        perm((0..p).map(|x| (a0 * x) % p).collect()),
    ])
}

/// Quaternion group in its regular representation.
pub fn quaternion() -> PermGroup {
    // elements ±1, ±i, ±j, ±k indexed 0..8 as (sign, unit)
    let idx = |s: usize, u: usize| s * 4 + u;
    let table = |a: usize, b: usize| -> (usize, usize) {
        // unit products: 0=1, 1=i, 2=j, 3=k
        match (a, b) {
            (0, x) | (x, 0) => (0, x),
            (x, y) if x == y => (1, 0),
            (1, 2) => (0, 3),
            (2, 1) => (1, 3),
            (2, 3) => (0, 1),
            (3, 2) => (1, 1),
            (3, 1) => (0, 2),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    };
    let right = |u: usize| {
        perm(
            (0..8)
                .map(|e| {
                    let (s, a) = (e / 4, e % 4);
                    let (t, c) = table(a, u);
                    idx((s + t) % 2, c)
                })
                .collect(),
        )
    };
    group(vec![right(1), right(2)])
}

/// Matrices over F_3 acting on the eight nonzero vectors.
fn gl23(mats: &[[usize; 4]]) -> PermGroup {
    let vecs: Vec<(usize, usize)> = (0..9).map(|i| (i / 3, i % 3)).filter(|&v| v != (0, 0)).collect();
    let gens = mats
        .iter()
        .map(|m| {
            perm(
                vecs.iter()
                    .map(|&(x, y)| {
                        let img = ((m[0] * x + m[2] * y) % 3, (m[1] * x + m[3] * y) % 3);
                        vecs.iter().position(|&v| v == img).unwrap()
                    })
                    .collect(),
            )
        })
        .collect();
    group(gens)
}

/// Direct product on the disjoint union of the point sets.
pub fn product(a: &PermGroup, b: &PermGroup) -> PermGroup {
    let (da, db) = (a.degree(), b.degree());
    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(perm((0..da + db).map(|i| if i < da { g.apply(i) } else { i }).collect()));
    }
    for g in b.generators() {
        gens.push(perm((0..da + db).map(|i| if i < da { i } else { da + g.apply(i - da) }).collect()));
    }
    if gens.is_empty() {
        return PermGroup::trivial(da + db);
    }
    group(gens)
}

/// `C_m ≀ C_2` on `2m` points.
pub fn wreath2(m: usize) -> PermGroup {
    let n = 2 * m;
    group(vec![
        perm((0..n).map(|i| if i < m { (i + 1) % m } else { i }).collect()),
        perm((0..n).map(|i| (i + m) % n).collect()),
    ])
}

fn named(name: impl Into<String>, group: PermGroup) -> Named {
    Named { name: name.into(), group }
}

/// Hand-picked groups followed by seeded random 2-generated subgroups of S6 and S7.
pub fn test_set() -> Vec<Named> {
    let mut v = vec![named("1", PermGroup::trivial(3))];
    for n in [2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 16] {
        v.push(named(format!("C{n}"), cyclic(n)));
    }
    for n in [3, 4, 5, 6, 7, 8, 10, 12] {
        v.push(named(format!("D{}", 2 * n), dihedral(n)));
    }
    v.push(named("Q8", quaternion()));
    v.push(named("S4", symmetric(4)));
    v.push(named("A4", alternating(4)));
    v.push(named("A5", alternating(5)));
    v.push(named("F20", affine(5, 2)));
    v.push(named("F21", affine(7, 2)));
    v.push(named("F42", affine(7, 3)));
    v.push(named("F55", affine(11, 3)));
    v.push(named("F39", affine(13, 3)));
    v.push(named("SL(2,3)", gl23(&[[1, 1, 0, 1], [0, 2, 1, 0]])));
    v.push(named("GL(2,3)", gl23(&[[1, 1, 0, 1], [0, 2, 1, 0], [2, 0, 0, 1]])));
    v.push(named("C2xC2", product(&cyclic(2), &cyclic(2))));
    v.push(named("C2^3", product(&product(&cyclic(2), &cyclic(2)), &cyclic(2))));
    v.push(named("C4xC2", product(&cyclic(4), &cyclic(2))));
    v.push(named("C3xC3", product(&cyclic(3), &cyclic(3))));
    v.push(named("S3xS3", product(&symmetric(3), &symmetric(3))));
    v.push(named("S3xC4", product(&symmetric(3), &cyclic(4))));
    v.push(named("A4xC2", product(&alternating(4), &cyclic(2))));
    v.push(named("A4xC3", product(&alternating(4), &cyclic(3))));
    v.push(named("S4xC2", product(&symmetric(4), &cyclic(2))));
    v.push(named("Q8xC3", product(&quaternion(), &cyclic(3))));
    v.push(named("D8xS3", product(&dihedral(4), &symmetric(3))));
    v.push(named("C3wrC2", wreath2(3)));
    v.push(named("C4wrC2", wreath2(4)));
    v.push(named("C5wrC2", wreath2(5)));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut found = 0;
    while found < 12 {
        let n = rng.gen_range(6..=7);
        let mut rand_perm = || {
            let mut img: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                img.swap(i, rng.gen_range(0..=i));
            }
            perm(img)
        };
        let (a, b) = (rand_perm(), rand_perm());
        let g = group(vec![a.clone(), b.clone()]);
        if g.order() > 100 || g.order() < 6 {
            let c = a.pow(2);
            let h = group(vec![c, b.pow(3)]);
            if h.order() <= 100 && h.order() >= 6 {
                v.push(named(format!("R{found}"), h));
                found += 1;
            }
            continue;
        }
        v.push(named(format!("R{found}"), g));
        found += 1;
    }
    v
}
