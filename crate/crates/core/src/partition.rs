//! Partitions of Π: subclasses, R-closedness, connectedness, contraction,
//! normal partitions, compatibility and independent sets.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::regions::RegionGraph;
use crate::structure::{complement_pair, Closure, StructureMap, PAIRS};

/// A subclass of an equivalence class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subclass {
    /// [S_i]_i of the class holding source i.
    Own(usize),
    /// The part of a class inside reg of pair q (for a source class, only the
    /// pair opposite its source).
    Pair(usize),
}

/// A partition of Π into equivalence classes, kept sorted by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl PiPartition {
    /// Builds a partition from explicit classes; they must partition Π exactly.
    pub fn new(sm: &StructureMap, len: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut class_of = vec![usize::MAX; len];
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        if classes.iter().any(Vec::is_empty) {
            return Err(Error::BadPartition("empty class".into()));
        }
        classes.sort();
        for (k, c) in classes.iter().enumerate() {
            for &r in c {
                if r >= len || !sm.in_pi[r] {
                    return Err(Error::BadPartition(format!("region index {r} is not in Π")));
                }
                if class_of[r] != usize::MAX {
                    return Err(Error::BadPartition(format!("region index {r} in two classes")));
                }
                class_of[r] = k;
            }
        }
        if let Some(&r) = sm.pi.iter().find(|&&r| class_of[r] == usize::MAX) {
            return Err(Error::BadPartition(format!("region index {r} uncovered")));
        }
        Ok(PiPartition { classes, class_of })
    }

    /// The trivial partition: every region of Π on its own.
    pub fn trivial(sm: &StructureMap, len: usize) -> Self {
        let mut class_of = vec![usize::MAX; len];
        let classes = sm
            .pi
            .iter()
            .enumerate()
            .map(|(k, &r)| {
                class_of[r] = k;
                vec![r]
            })
            .collect();
        PiPartition { classes, class_of }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, r: usize) -> usize {
        self.class_of[r]
    }

    /// Index of [S_i].
    pub fn source_class(&self, sm: &StructureMap, i: usize) -> usize {
        self.class_of[sm.sources[i]]
    }

    /// The smallest source index whose class is `c`.
    pub fn source_of_class(&self, sm: &StructureMap, c: usize) -> Option<usize> {
        (0..3).find(|&i| self.source_class(sm, i) == c)
    }

    /// A pair of sources sharing a class, if any.
    pub fn merged_sources(&self, sm: &StructureMap) -> Option<(usize, usize)> {
        PAIRS.into_iter().find(|&(a, b)| self.source_class(sm, a) == self.source_class(sm, b))
    }

    /// Merges classes `a` and `b` into a new partition.
    pub fn contract(&self, a: usize, b: usize) -> Result<Self> {
        if a == b || a >= self.len() || b >= self.len() {
            return Err(Error::BadPartition(format!("cannot contract classes {a} and {b}")));
        }
        let mut merged: Vec<usize> = self.classes[a].iter().chain(&self.classes[b]).copied().collect();
        merged.sort_unstable();
        let mut classes: Vec<Vec<usize>> = self
            .classes
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != a && k != b)
            .map(|(_, c)| c.clone())
            .collect();
        let pos = classes.partition_point(|c| c[0] < merged[0]);
        classes.insert(pos, merged);
        let mut class_of = self.class_of.clone();
        for (k, c) in classes.iter().enumerate() {
            for &r in c {
                class_of[r] = k;
            }
        }
        Ok(PiPartition { classes, class_of })
    }

    /// Subclass of a region of Π.
    pub fn subclass_of(&self, sm: &StructureMap, r: usize) -> Subclass {
        let c = self.class_of[r];
        if let Some(i) = self.source_of_class(sm, c) {
            let (q1, q2) = own_pairs(i);
            if sm.in_pair[r][q1] || sm.in_pair[r][q2] {
                return Subclass::Own(i);
            }
            return Subclass::Pair(complement_pair(i));
        }
        let q = (0..3).find(|&q| sm.in_pair[r][q]).expect("every region of Π lies in a pair super region");
        Subclass::Pair(q)
    }

    /// Members of a subclass of class `c`.
    pub fn subclass(&self, sm: &StructureMap, c: usize, s: Subclass) -> Vec<usize> {
        self.classes[c].iter().copied().filter(|&r| self.subclass_of(sm, r) == s).collect()
    }

    /// [Δ]_{a,b} = Δ ∩ reg(S_a, S_b) for pair q.
    pub fn pair_part(&self, sm: &StructureMap, c: usize, q: usize) -> Vec<usize> {
        self.classes[c].iter().copied().filter(|&r| sm.in_pair[r][q]).collect()
    }

    /// All nonempty subclasses of every class, as (class, subclass, members).
    pub fn subclasses(&self, sm: &StructureMap) -> Vec<(usize, Subclass, Vec<usize>)> {
        let mut out: Vec<(usize, Subclass, Vec<usize>)> = Vec::new();
        let mut index: HashMap<(usize, Subclass), usize> = HashMap::new();
        for (c, members) in self.classes.iter().enumerate() {
            for &r in members {
                let s = self.subclass_of(sm, r);
                let k = *index.entry((c, s)).or_insert_with(|| {
                    out.push((c, s, Vec::new()));
                    out.len() - 1
                });
                out[k].2.push(r);
            }
        }
        out.sort_by_key(|(c, s, _)| (*c, *s));
        out
    }

    /// Class lists as region ids.
    pub fn class_ids(&self, rg: &RegionGraph) -> Vec<Vec<String>> {
        self.classes.iter().map(|c| c.iter().map(|&r| rg.id(r).to_string()).collect()).collect()
    }
}

/// The two pairs containing source i.
fn own_pairs(i: usize) -> (usize, usize) {
    let v: Vec<usize> = (0..3).filter(|&q| q != complement_pair(i)).collect();
    (v[0], v[1])
}

/// Both clauses of R-closedness: distinct source classes, and every pair part
/// equals its own super region.
pub fn is_r_closed(p: &PiPartition, sm: &StructureMap, rg: &RegionGraph) -> bool {
    if p.merged_sources(sm).is_some() {
        return false;
    }
    let mut closure = Closure::new(rg.len());
    for c in 0..p.len() {
        for q in 0..3 {
            let part = p.pair_part(sm, c, q);
            if !part.is_empty() && closure.compute(rg, &part).len() != part.len() {
                return false;
            }
        }
    }
    true
}

/// Why two classes are connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnectReason {
    /// Λ_j lies in one subclass of each class (or in a single subclass).
    Lambda { terminal: usize },
    /// The super regions of the two pair parts for pair q share `region`.
    Closure { pair: usize, region: usize },
}

/// Whether classes `a` and `b` are connected.
pub fn are_connected(
    p: &PiPartition,
    a: usize,
    b: usize,
    sm: &StructureMap,
    rg: &RegionGraph,
) -> Result<Option<ConnectReason>> {
    if a == b || a >= p.len() || b >= p.len() {
        return Err(Error::Precondition("connectedness needs two distinct classes".into()));
    }
    for (j, lam) in sm.singleton_lambdas() {
        if let Some(cover) = lambda_cover(p, sm, lam) {
            let hit = match cover {
                Cover::One(c) => c == a || c == b,
                Cover::Two(c, d) => (c == a && d == b) || (c == b && d == a),
            };
            if hit {
                return Ok(Some(ConnectReason::Lambda { terminal: j }));
            }
        }
    }
    let mut closure = Closure::new(rg.len());
    for q in 0..3 {
        let pa = p.pair_part(sm, a, q);
        let pb = p.pair_part(sm, b, q);
        if pa.is_empty() || pb.is_empty() {
            continue;
        }
        let ra = closure.compute(rg, &pa);
        let rb = closure.compute(rg, &pb);
        if let Some(&r) = ra.iter().filter(|r| rb.contains(r)).min() {
            return Ok(Some(ConnectReason::Closure { pair: q, region: r }));
        }
    }
    Ok(None)
}

enum Cover {
    One(usize),
    Two(usize, usize),
}

/// How Λ sits in the subclasses: inside one subclass, or inside one subclass
/// of each of two different classes.
fn lambda_cover(p: &PiPartition, sm: &StructureMap, lam: &[usize]) -> Option<Cover> {
    let mut hit: Vec<(usize, Subclass)> = Vec::with_capacity(2);
    for &r in lam {
        let key = (p.class_of(r), p.subclass_of(sm, r));
        if !hit.contains(&key) {
            if hit.len() == 2 {
                return None;
            }
            hit.push(key);
        }
    }
    match hit.as_slice() {
        [(c, _)] => Some(Cover::One(*c)),
        [(c, _), (d, _)] if c != d => Some(Cover::Two((*c).min(*d), (*c).max(*d))),
        _ => None,
    }
}

/// Every connected pair of classes (a < b), each with one reason.
pub fn connected_pairs(p: &PiPartition, sm: &StructureMap, rg: &RegionGraph) -> Vec<((usize, usize), ConnectReason)> {
    let mut found: std::collections::BTreeMap<(usize, usize), ConnectReason> = std::collections::BTreeMap::new();
    for (j, lam) in sm.singleton_lambdas() {
        match lambda_cover(p, sm, lam) {
            Some(Cover::Two(c, d)) => {
                found.entry((c, d)).or_insert(ConnectReason::Lambda { terminal: j });
            }
            Some(Cover::One(c)) => {
                for other in (0..p.len()).filter(|&o| o != c) {
                    found.entry((c.min(other), c.max(other))).or_insert(ConnectReason::Lambda { terminal: j });
                }
            }
            None => {}
        }
    }
    let mut closure = Closure::new(rg.len());
    for q in 0..3 {
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for c in 0..p.len() {
            let part = p.pair_part(sm, c, q);
            if part.is_empty() {
                continue;
            }
            for r in closure.compute(rg, &part) {
                match owner.get(&r) {
                    Some(&o) if o != c => {
                        found.entry((o.min(c), o.max(c))).or_insert(ConnectReason::Closure { pair: q, region: r });
                    }
                    Some(_) => {}
                    None => {
                        owner.insert(r, c);
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

/// Contracts `a` and `b` (order-insensitive).
pub fn contract(p: &PiPartition, a: usize, b: usize) -> Result<PiPartition> {
    p.contract(a, b)
}

/// One contraction step, recorded by class contents before the merge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionStep {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub reason: ConnectReason,
}

/// Output of the partitioning procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalPartition {
    pub partition: PiPartition,
    /// Sources whose classes merged, which stops the procedure.
    pub merged_sources: Option<(usize, usize)>,
    pub trace: Vec<ContractionStep>,
}

/// Contracts connected classes, starting from the trivial partition, until
/// none remain or two source classes merge. Among connected pairs the one
/// with the smallest (class a, class b) indices is merged first.
pub fn normal_partition(sm: &StructureMap, rg: &RegionGraph) -> Result<NormalPartition> {
    normal_partition_with(sm, rg, |_| 0)
}

/// Like [`normal_partition`], with `pick` choosing which connected pair to
/// merge from the sorted candidate list.
pub fn normal_partition_with(
    sm: &StructureMap,
    rg: &RegionGraph,
    mut pick: impl FnMut(&[((usize, usize), ConnectReason)]) -> usize,
) -> Result<NormalPartition> {
    let mut p = PiPartition::trivial(sm, rg.len());
    let mut trace = Vec::new();
    loop {
        let pairs = connected_pairs(&p, sm, rg);
        if pairs.is_empty() {
            return Ok(NormalPartition { partition: p, merged_sources: None, trace });
        }
        let k = pick(&pairs);
        let ((a, b), reason) = pairs.into_iter().nth(k).ok_or_else(|| Error::Internal("pair choice out of range".into()))?;
        trace.push(ContractionStep { a: p.classes[a].clone(), b: p.classes[b].clone(), reason });
        p = p.contract(a, b)?;
        if let Some(m) = p.merged_sources(sm) {
            return Ok(NormalPartition { partition: p, merged_sources: Some(m), trace });
        }
    }
}

/// Replays a contraction trace from the trivial partition, checking that each
/// step merges two connected classes.
pub fn replay_contractions(sm: &StructureMap, rg: &RegionGraph, trace: &[ContractionStep]) -> Result<PiPartition> {
    let mut p = PiPartition::trivial(sm, rg.len());
    for step in trace {
        let a = p.class_of(step.a[0]);
        let b = p.class_of(step.b[0]);
        if p.classes[a] != step.a || p.classes[b] != step.b {
            return Err(Error::BadPartition("trace class contents do not match".into()));
        }
        if are_connected(&p, a, b, sm, rg)?.is_none() {
            return Err(Error::BadPartition("trace merges classes that are not connected".into()));
        }
        p = p.contract(a, b)?;
    }
    Ok(p)
}

/// A failed compatibility condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Incompatibility {
    MergedSources { sources: (usize, usize) },
    Connected { a: usize, b: usize, reason: ConnectReason },
    /// Λ_j ⊆ [S_a]_a ∪ [S_b]_b ∪ reg(S_a, S_b).
    LambdaCovered { terminal: usize, sources: (usize, usize) },
}

/// Checks the three compatibility conditions; returns the first violation.
pub fn is_compatible(p: &PiPartition, sm: &StructureMap, rg: &RegionGraph) -> Option<Incompatibility> {
    if let Some(m) = p.merged_sources(sm) {
        return Some(Incompatibility::MergedSources { sources: m });
    }
    if let Some(((a, b), reason)) = connected_pairs(p, sm, rg).into_iter().next() {
        return Some(Incompatibility::Connected { a, b, reason });
    }
    lambda_covered(p, sm).map(|(terminal, sources)| Incompatibility::LambdaCovered { terminal, sources })
}

/// The first (terminal, source pair) for which Λ_j is covered by the two
/// source axes.
pub fn lambda_covered(p: &PiPartition, sm: &StructureMap) -> Option<(usize, (usize, usize))> {
    for (j, lam) in sm.singleton_lambdas() {
        for (q, (a, b)) in PAIRS.into_iter().enumerate() {
            let covered = lam.iter().all(|&r| {
                sm.in_pair[r][q]
                    || p.subclass_of(sm, r) == Subclass::Own(a) && p.source_class(sm, a) == p.class_of(r)
                    || p.subclass_of(sm, r) == Subclass::Own(b) && p.source_class(sm, b) == p.class_of(r)
            });
            if covered {
                return Some((j, (a, b)));
            }
        }
    }
    None
}

/// Which independent-set condition fails, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dependence {
    SameSubclass,
    SameClass,
    CoveredByAxes { sources: (usize, usize) },
}

/// Checks whether three regions of Π form an independent set.
pub fn independent_set_violation(p: &PiPartition, trio: [usize; 3], sm: &StructureMap) -> Result<Option<Dependence>> {
    if trio[0] == trio[1] || trio[0] == trio[2] || trio[1] == trio[2] {
        return Err(Error::Precondition("independent set needs three distinct regions".into()));
    }
    if trio.iter().any(|&r| !sm.in_pi[r]) {
        return Err(Error::Precondition("independent set regions must lie in Π".into()));
    }
    let key = |r: usize| (p.class_of(r), p.subclass_of(sm, r));
    if key(trio[0]) == key(trio[1]) || key(trio[0]) == key(trio[2]) || key(trio[1]) == key(trio[2]) {
        return Ok(Some(Dependence::SameSubclass));
    }
    if p.class_of(trio[0]) == p.class_of(trio[1]) && p.class_of(trio[1]) == p.class_of(trio[2]) {
        return Ok(Some(Dependence::SameClass));
    }
    for (q, (a, b)) in PAIRS.into_iter().enumerate() {
        let covered = trio.iter().all(|&r| {
            sm.in_pair[r][q]
                || (p.class_of(r) == p.source_class(sm, a) && p.subclass_of(sm, r) == Subclass::Own(a))
                || (p.class_of(r) == p.source_class(sm, b) && p.subclass_of(sm, r) == Subclass::Own(b))
        });
        if covered {
            return Ok(Some(Dependence::CoveredByAxes { sources: (a, b) }));
        }
    }
    Ok(None)
}

pub fn is_independent_set(p: &PiPartition, trio: [usize; 3], sm: &StructureMap) -> Result<bool> {
    Ok(independent_set_violation(p, trio, sm)?.is_none())
}
