//! Weak decentralized codes: vectors on Π (or on a super region) that depend
//! only on each region's subclass.

use crate::code::RegionCode;
use crate::error::{Error, Result};
use crate::gf::{Gf, Vec3};
use crate::partition::{is_r_closed, PiPartition};
use crate::regions::RegionGraph;
use crate::structure::{closure_mask, StructureMap};

use super::family::VectorFamily;

/// Family set used by each class: [S_i] takes set i, the remaining classes
/// take sets 3, 4, ... in class order.
pub fn class_family_index(p: &PiPartition, sm: &StructureMap) -> Vec<usize> {
    let mut out = vec![usize::MAX; p.len()];
    for i in 0..3 {
        out[p.source_class(sm, i)] = i;
    }
    let mut next = 3;
    for slot in out.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    out
}

/// Assigns every region of Π the family vector of its subclass. The partition
/// must be R-closed and the family must have one set per class.
pub fn weak_code_on_pi(p: &PiPartition, f: &VectorFamily, sm: &StructureMap, rg: &RegionGraph) -> Result<RegionCode> {
    if !is_r_closed(p, sm, rg) {
        return Err(Error::Precondition("partition is not R-closed".into()));
    }
    if f.k() < p.len().max(3) {
        return Err(Error::Precondition(format!("family has {} sets but the partition has {} classes", f.k(), p.len())));
    }
    let ell = class_family_index(p, sm);
    let mut code = RegionCode::empty(f.p, rg.len());
    for &r in &sm.pi {
        code.set(r, f.vector(ell[p.class_of(r)], p.subclass_of(sm, r))?);
    }
    Ok(code)
}

/// Weak code on reg(Q1, Q2): `classes[j]` receives `vectors[j]`. Requires
/// Q1 in the first class, Q2 in the second, every class closed, vectors
/// pairwise independent and each inside ⟨d_1, d_2⟩.
pub fn weak_code_on_super_region(
    rg: &RegionGraph,
    q1: usize,
    q2: usize,
    classes: &[Vec<usize>],
    vectors: &[Vec3],
    p: u64,
) -> Result<RegionCode> {
    let gf = Gf::new(p)?;
    if classes.len() < 2 || classes.len() != vectors.len() {
        return Err(Error::Precondition("need at least two classes, one vector each".into()));
    }
    if !classes[0].contains(&q1) || !classes[1].contains(&q2) {
        return Err(Error::Precondition("Q1 and Q2 must lead the first two classes".into()));
    }
    let reg = closure_mask(rg, &[q1, q2]);
    let mut seen = vec![false; rg.len()];
    for c in classes {
        for &r in c {
            if !reg[r] || std::mem::replace(&mut seen[r], true) {
                return Err(Error::BadPartition(format!("{} misplaced in the super region partition", rg.id(r))));
            }
        }
        let closed = closure_mask(rg, c);
        if closed.iter().filter(|&&x| x).count() != c.len() {
            return Err(Error::Precondition("class is not closed".into()));
        }
    }
    if (0..rg.len()).any(|r| reg[r] && !seen[r]) {
        return Err(Error::BadPartition("classes do not cover the super region".into()));
    }
    for a in 0..vectors.len() {
        if !gf.in_span(&vectors[a], &vectors[..2]) {
            return Err(Error::Precondition("vector outside the span of the first two".into()));
        }
        for b in a + 1..vectors.len() {
            if !gf.independent(&vectors[a], &vectors[b]) {
                return Err(Error::Precondition("class vectors are not pairwise independent".into()));
            }
        }
    }
    let mut code = RegionCode::empty(p, rg.len());
    for (c, v) in classes.iter().zip(vectors) {
        for &r in c {
            code.set(r, *v);
        }
    }
    Ok(code)
}

