//! Routing a combination of parent vectors to one target region, and the
//! helpers that assemble and complete region codes.

use std::collections::VecDeque;

use crate::code::RegionCode;
use crate::error::{Error, Result};
use crate::gf::{Gf, Vec3, ALPHA_BAR};
use crate::regions::RegionGraph;

/// Routes the sum of `inputs` (region, scaled contribution) to `target`
/// through regions with `allowed[r]`.
///
/// Each input enters the allowed set at its child closest to the target and
/// then follows a shortest path; paths merge into a tree and every tree node
/// carries the sum of the contributions passing through it. Returns the tree
/// nodes with their vectors.
pub fn route_sum(
    rg: &RegionGraph,
    gf: &Gf,
    inputs: &[(usize, Vec3)],
    allowed: &[bool],
    target: usize,
) -> Result<Vec<(usize, Vec3)>> {
    if !allowed[target] {
        return Err(Error::Precondition(format!("target {} is not routable", rg.id(target))));
    }
    let mut dist = vec![usize::MAX; rg.len()];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(r) = queue.pop_front() {
        for &u in rg.parents(r) {
            if allowed[u] && dist[u] == usize::MAX {
                dist[u] = dist[r] + 1;
                queue.push_back(u);
            }
        }
    }
    let closest = |r: usize| -> Option<usize> {
        rg.children(r)
            .iter()
            .copied()
            .filter(|&c| allowed[c] && dist[c] != usize::MAX)
            .min_by_key(|&c| (dist[c], c))
    };
    let mut value: Vec<Option<Vec3>> = vec![None; rg.len()];
    let mut touched = Vec::new();
    for &(g, v) in inputs {
        let mut r = closest(g)
            .ok_or_else(|| Error::Precondition(format!("{} has no route to {}", rg.id(g), rg.id(target))))?;
        loop {
            let slot = &mut value[r];
            match slot {
                Some(x) => *x = gf.add(x, &v),
                None => {
                    *slot = Some(v);
                    touched.push(r);
                }
            }
            if r == target {
                break;
            }
            r = closest(r).expect("every node at finite distance has a closer child");
        }
    }
    touched.sort_unstable_by_key(|&r| rg.topo_pos(r));
    Ok(touched.into_iter().map(|r| (r, value[r].expect("touched nodes carry a value"))).collect())
}

/// Greedy independent subset of `regions` (in the given order) whose vectors
/// span ᾱ, with the nonzero coefficients expressing ᾱ.
pub fn alpha_bar_generators(gf: &Gf, code: &RegionCode, regions: &[usize]) -> Result<Vec<(usize, u64)>> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut vecs: Vec<Vec3> = Vec::new();
    for &r in regions {
        let v = *code.get(r).ok_or_else(|| Error::Missing(format!("vector of region index {r}")))?;
        vecs.push(v);
        if gf.rank(&vecs) == vecs.len() {
            chosen.push(r);
        } else {
            vecs.pop();
        }
    }
    let coeffs = gf
        .solve(&ALPHA_BAR, &vecs)
        .ok_or_else(|| Error::Precondition("the sum of the sources is outside the span".into()))?;
    Ok(chosen.into_iter().zip(coeffs).filter(|&(_, c)| c != 0).collect())
}

/// Extends a code on Λ to Ω: ᾱ is routed from Λ to `target`, and every other
/// region of `omega` copies its first parent. Returns a code defined on
/// `omega` only.
pub fn extend_to_omega(
    rg: &RegionGraph,
    code: &RegionCode,
    omega: &[usize],
    lambda: &[usize],
    target: usize,
) -> Result<RegionCode> {
    let gf = Gf::new(code.p)?;
    let gens = alpha_bar_generators(&gf, code, lambda)?;
    let inputs: Vec<(usize, Vec3)> =
        gens.iter().map(|&(r, c)| (r, gf.scale(c, code.get(r).expect("generators carry vectors")))).collect();
    let mut allowed = vec![false; rg.len()];
    for &r in omega {
        allowed[r] = true;
    }
    let mut out = RegionCode::empty(code.p, rg.len());
    for (r, v) in route_sum(rg, &gf, &inputs, &allowed, target)? {
        out.set(r, v);
    }
    let mut order = omega.to_vec();
    order.sort_unstable_by_key(|&r| rg.topo_pos(r));
    for r in order {
        if out.get(r).is_some() {
            continue;
        }
        let &u = rg.parents(r).first().ok_or_else(|| Error::Missing(format!("parent of {}", rg.id(r))))?;
        let v = out.get(u).or_else(|| code.get(u)).copied();
        let v = v.ok_or_else(|| Error::Internal(format!("parent {} of {} has no vector", rg.id(u), rg.id(r))))?;
        out.set(r, v);
    }
    Ok(out)
}

/// Union of codes on disjoint domains.
pub fn assemble(len: usize, p: u64, parts: &[RegionCode]) -> Result<RegionCode> {
    let mut out = RegionCode::empty(p, len);
    for part in parts {
        if part.p != p || part.vectors.len() != len {
            return Err(Error::Precondition("code parts disagree on field or size".into()));
        }
        for (r, v) in part.vectors.iter().enumerate() {
            if let Some(v) = v {
                if out.get(r).is_some() {
                    return Err(Error::Precondition(format!("region index {r} assigned twice")));
                }
                out.set(r, *v);
            }
        }
    }
    Ok(out)
}

/// Fills unassigned regions in topological order: ᾱ if some parent carries
/// ᾱ, otherwise the first parent's vector.
pub fn complete_code(rg: &RegionGraph, code: &mut RegionCode) -> Result<()> {
    for &r in rg.topo() {
        if code.get(r).is_some() {
            continue;
        }
        let ps = rg.parents(r);
        if ps.is_empty() {
            return Err(Error::Missing(format!("vector of parentless region {}", rg.id(r))));
        }
        let v = if ps.iter().any(|&u| code.get(u) == Some(&ALPHA_BAR)) {
            ALPHA_BAR
        } else {
            *code.get(ps[0]).expect("parents precede children")
        };
        code.set(r, v);
    }
    Ok(())
}
