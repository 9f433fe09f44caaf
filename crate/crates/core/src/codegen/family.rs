//! Vector families with the pair/triple independence pattern needed by weak
//! decentralized codes.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::gf::{alpha, next_prime, Gf, Vec3, ALPHA_BAR};
use crate::partition::Subclass;
use crate::structure::complement_pair;

/// Sets B_1..B_K. `sets[i]` for i < 3 is `[α_i, sum of the other two]`; later
/// sets are `[β_{1,2}, β_{1,3}, β_{2,3}]` indexed like the source pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorFamily {
    pub p: u64,
    pub sets: Vec<Vec<Vec3>>,
}

/// The three fixed sets B_1, B_2, B_3.
pub fn base_sets() -> Vec<Vec<Vec3>> {
    (0..3)
        .map(|i| {
            let mut rest = ALPHA_BAR;
            rest[i] = 0;
            vec![alpha(i), rest]
        })
        .collect()
}

impl VectorFamily {
    /// Builds a family from integer vectors, reducing them mod p. The first
    /// three sets are the fixed ones; `extra` supplies B_4 onwards.
    pub fn from_extra_sets(p: u64, extra: &[[[i64; 3]; 3]]) -> Result<Self> {
        let gf = Gf::new(p)?;
        let mut sets = base_sets();
        sets.extend(extra.iter().map(|set| set.iter().map(|v| gf.vec(*v)).collect()));
        Ok(VectorFamily { p, sets })
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    /// Vector assigned to subclass `s` of the class using set `l` (0-based).
    pub fn vector(&self, l: usize, s: Subclass) -> Result<Vec3> {
        let set = self.sets.get(l).ok_or_else(|| Error::Precondition(format!("family has no set {}", l + 1)))?;
        match (l, s) {
            (0..=2, Subclass::Own(i)) if i == l => Ok(set[0]),
            (0..=2, Subclass::Pair(q)) if q == complement_pair(l) => Ok(set[1]),
            (3.., Subclass::Pair(q)) => Ok(set[q]),
            _ => Err(Error::Precondition(format!("subclass {s:?} does not belong to set {}", l + 1))),
        }
    }

    fn flat(&self) -> Vec<(usize, Vec3)> {
        self.sets.iter().enumerate().flat_map(|(l, s)| s.iter().map(move |v| (l, *v))).collect()
    }
}

/// Which property of the family fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyViolation {
    Shape { set: usize },
    ZeroVector { set: usize },
    Membership { set: usize, pair: usize },
    PairMissesSum { set: usize },
    DependentPair { a: Vec3, b: Vec3 },
    DependentTriple { a: Vec3, b: Vec3, c: Vec3 },
}

/// Exhaustive check of the four family properties over every pair and triple.
pub fn family_violation(f: &VectorFamily) -> Result<Option<FamilyViolation>> {
    let gf = Gf::new(f.p)?;
    for (l, set) in f.sets.iter().enumerate() {
        let want = if l < 3 { 2 } else { 3 };
        if set.len() != want {
            return Ok(Some(FamilyViolation::Shape { set: l }));
        }
        if set.iter().any(|v| v.iter().all(|&x| x % f.p == 0)) {
            return Ok(Some(FamilyViolation::ZeroVector { set: l }));
        }
        if l >= 3 {
            for (q, v) in set.iter().enumerate() {
                if v[2 - q] % f.p != 0 {
                    return Ok(Some(FamilyViolation::Membership { set: l, pair: q }));
                }
            }
        }
        for a in 0..set.len() {
            for b in a + 1..set.len() {
                if !gf.in_span(&ALPHA_BAR, &[set[a], set[b]]) {
                    return Ok(Some(FamilyViolation::PairMissesSum { set: l }));
                }
            }
        }
    }
    let all = f.flat();
    for x in 0..all.len() {
        for y in x + 1..all.len() {
            if !gf.independent(&all[x].1, &all[y].1) {
                return Ok(Some(FamilyViolation::DependentPair { a: all[x].1, b: all[y].1 }));
            }
        }
    }
    for x in 0..all.len() {
        for y in x + 1..all.len() {
            let cxy = gf.cross(&all[x].1, &all[y].1);
            for z in y + 1..all.len() {
                let (a, b, c) = (all[x].1, all[y].1, all[z].1);
                if (0..3).any(|k| a[k] == 0 && b[k] == 0 && c[k] == 0) {
                    continue;
                }
                let same_set = all[x].0 == all[y].0 && all[y].0 == all[z].0 && all[x].0 >= 3;
                if same_set {
                    continue;
                }
                let d = (gf.mul_s(cxy[0], c[0]) + gf.mul_s(cxy[1], c[1]) + gf.mul_s(cxy[2], c[2])) % f.p;
                if d == 0 {
                    return Ok(Some(FamilyViolation::DependentTriple { a, b, c }));
                }
            }
        }
    }
    Ok(None)
}

pub fn verify_family_properties(f: &VectorFamily) -> bool {
    matches!(family_violation(f), Ok(None))
}

/// Points of each coordinate line {x_k = 0} already ruled out. A point on
/// line k with remaining coordinates (u, w) sits at slot w/u, or at slot p
/// when u = 0; slots are scale-invariant, so points need not be normalized.
struct Excluded {
    p: u64,
    inv: Vec<u64>,
    lines: [Bits; 3],
}

impl Excluded {
    fn new(p: u64) -> Self {
        let w = p as usize + 1;
        let mut inv = vec![0u64; p as usize];
        if p > 1 {
            inv[1] = 1;
        }
        for i in 2..p {
            inv[i as usize] = (p - (p / i) * inv[(p % i) as usize] % p) % p;
        }
        Excluded { p, inv, lines: [Bits::new(w), Bits::new(w), Bits::new(w)] }
    }

    fn slot(&self, v: &Vec3, k: usize) -> usize {
        let (u, w) = match k {
            0 => (v[1], v[2]),
            1 => (v[0], v[2]),
            _ => (v[0], v[1]),
        };
        if u == 0 {
            self.p as usize
        } else {
            (w * self.inv[u as usize] % self.p) as usize
        }
    }

    fn insert(&mut self, v: &Vec3) {
        for k in 0..3 {
            if v[k] == 0 {
                let s = self.slot(v, k);
                self.lines[k].insert(s);
            }
        }
    }

    fn contains(&self, v: &Vec3, k: usize) -> bool {
        self.lines[k].contains(self.slot(v, k))
    }
}

fn shares_zero(a: &Vec3, b: &Vec3) -> bool {
    (0..3).any(|k| a[k] == 0 && b[k] == 0)
}

/// n × e_k: the point of the plane with normal n on the coordinate plane k.
fn meet(gf: &Gf, n: &Vec3, k: usize) -> Vec3 {
    let neg = |x: u64| gf.sub_s(0, x);
    match k {
        0 => [0, n[2], neg(n[1])],
        1 => [neg(n[2]), 0, n[0]],
        _ => [n[1], neg(n[0]), 0],
    }
}

/// Records where the plane ⟨a, b⟩ meets each coordinate plane. Fails when
/// `a` and `b` are dependent.
fn exclude_pair(gf: &Gf, ex: &mut Excluded, a: &Vec3, b: &Vec3) -> bool {
    if shares_zero(a, b) {
        return gf.independent(a, b);
    }
    let n = gf.cross(a, b);
    if n == [0; 3] {
        return false;
    }
    for k in 0..3 {
        ex.insert(&meet(gf, &n, k));
    }
    true
}

/// Builds B_1..B_K over GF(p).
///
/// Each new set comes from a plane through ᾱ: its three points on the
/// coordinate planes become β_{1,2}, β_{1,3}, β_{2,3}. Planes are scanned in a
/// fixed order and the first one avoiding every excluded point is taken.
pub fn build_vector_family(k: usize, p: u64) -> Result<VectorFamily> {
    if k < 3 {
        return Err(Error::Precondition("a vector family needs K >= 3".into()));
    }
    let gf = Gf::new(p)?;
    let mut sets = base_sets();
    let mut vecs: Vec<Vec3> = sets.iter().flatten().copied().collect();
    let mut ex = Excluded::new(p);
    for i in 0..vecs.len() {
        for j in 0..i {
            if !exclude_pair(&gf, &mut ex, &vecs[i], &vecs[j]) {
                return Err(Error::FamilyExhausted { step: 3, p });
            }
        }
    }
    for step in 4..=k {
        let mut found = None;
        let candidates = std::iter::once([0, 0, 1]).chain((0..p).map(|z| [0, 1, z]));
        for beta in candidates {
            let n = gf.cross(&beta, &ALPHA_BAR);
            if n == [0; 3] {
                continue;
            }
            let pts: Vec<Vec3> = (0..3).map(|k| meet(&gf, &n, k)).collect();
            if (0..3).all(|k| !ex.contains(&pts[k], k)) {
                found = Some(pts.iter().map(|v| gf.normalize(v)).collect::<Vec<_>>());
                break;
            }
        }
        let pts = found.ok_or(Error::FamilyExhausted { step, p })?;
        let new_set = vec![pts[2], pts[1], pts[0]];
        for v in &new_set {
            for w in &vecs {
                if !exclude_pair(&gf, &mut ex, v, w) {
                    return Err(Error::FamilyExhausted { step, p });
                }
            }
            vecs.push(*v);
        }
        sets.push(new_set);
    }
    Ok(VectorFamily { p, sets })
}

/// Smallest prime p >= max(5, K, `field_min`) for which the construction
/// succeeds and the family passes the property check.
pub fn choose_field(k: usize, field_min: u64) -> Result<VectorFamily> {
    const LIMIT: u64 = 1 << 24;
    let mut p = next_prime(5.max(k as u64).max(field_min));
    while p < LIMIT {
        if let Ok(f) = build_vector_family(k, p) {
            if verify_family_properties(&f) {
                return Ok(f);
            }
        }
        p = next_prime(p + 1);
    }
    Err(Error::FamilyExhausted { step: k, p })
}
