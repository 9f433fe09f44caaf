//! Super regions and the Π / Ω_I / Λ_I decomposition of a basic region graph.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regions::RegionGraph;

/// The three unordered source pairs, in the order {1,2}, {1,3}, {2,3}.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Index into [`PAIRS`] of the pair {a, b}.
pub fn pair_index(a: usize, b: usize) -> usize {
    match (a.min(b), a.max(b)) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => panic!("not a source pair: {a},{b}"),
    }
}

/// The pair index not containing source `i`.
pub fn complement_pair(i: usize) -> usize {
    2 - i
}

/// reg(Θ) together with its generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperRegion {
    pub generators: Vec<usize>,
    /// Members, ascending by region index.
    pub members: Vec<usize>,
}

impl SuperRegion {
    /// reg°(Θ) = reg(Θ) minus Θ.
    pub fn interior(&self) -> Vec<usize> {
        self.members.iter().copied().filter(|r| !self.generators.contains(r)).collect()
    }

    pub fn contains(&self, r: usize) -> bool {
        self.members.binary_search(&r).is_ok()
    }
}

/// reg(Θ): Θ plus every region all of whose parents are already inside.
pub fn super_region(rg: &RegionGraph, theta: &[usize]) -> Result<SuperRegion> {
    if theta.is_empty() {
        return Err(Error::Precondition("super region of an empty set".into()));
    }
    if let Some(&r) = theta.iter().find(|&&r| r >= rg.len()) {
        return Err(Error::Precondition(format!("region index {r} out of range")));
    }
    let mask = closure_mask(rg, theta);
    let members = (0..rg.len()).filter(|&r| mask[r]).collect();
    let mut generators = theta.to_vec();
    generators.sort_unstable();
    generators.dedup();
    Ok(SuperRegion { generators, members })
}

/// Membership mask of reg(Θ), computed in one topological pass.
pub fn closure_mask(rg: &RegionGraph, theta: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; rg.len()];
    for &r in theta {
        inside[r] = true;
    }
    for &r in rg.topo() {
        if !inside[r] {
            let ps = rg.parents(r);
            inside[r] = !ps.is_empty() && ps.iter().all(|&q| inside[q]);
        }
    }
    inside
}

/// Repeated closure computation with reusable scratch space. Work is
/// proportional to the closure size and its out-edges.
pub struct Closure {
    count: Vec<u32>,
    touched: Vec<usize>,
    inside: Vec<bool>,
}

impl Closure {
    pub fn new(len: usize) -> Self {
        Closure { count: vec![0; len], touched: Vec::new(), inside: vec![false; len] }
    }

    /// reg(Θ) as a list (generators first, then discovery order).
    pub fn compute(&mut self, rg: &RegionGraph, theta: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(theta.len());
        for &r in theta {
            if !self.inside[r] {
                self.inside[r] = true;
                out.push(r);
            }
        }
        let mut k = 0;
        while k < out.len() {
            let r = out[k];
            k += 1;
            for &c in rg.children(r) {
                if self.inside[c] {
                    continue;
                }
                if self.count[c] == 0 {
                    self.touched.push(c);
                }
                self.count[c] += 1;
                if self.count[c] as usize == rg.parents(c).len() {
                    self.inside[c] = true;
                    out.push(c);
                }
            }
        }
        for &c in &self.touched {
            self.count[c] = 0;
        }
        self.touched.clear();
        for &r in &out {
            self.inside[r] = false;
        }
        out
    }
}

/// The (Π, Ω, Λ) decomposition of a three-source region graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureMap {
    /// reg(S_a, S_b) for each pair in [`PAIRS`], ascending.
    pub pair_regs: [Vec<usize>; 3],
    /// `in_pair[r][q]`: r lies in reg of pair q.
    pub in_pair: Vec<[bool; 3]>,
    /// Π, ascending.
    pub pi: Vec<usize>,
    pub in_pi: Vec<bool>,
    /// Nonempty Ω_I keyed by sorted 0-based terminal labels.
    pub omega: BTreeMap<Vec<usize>, Vec<usize>>,
    /// Λ_I for every key of `omega`.
    pub lambda: BTreeMap<Vec<usize>, Vec<usize>>,
    /// Demanded terminals as (label, region), one per terminal region.
    pub terminals: Vec<(usize, usize)>,
    pub sources: [usize; 3],
}

impl StructureMap {
    pub fn n(&self) -> usize {
        self.terminals.len()
    }

    pub fn in_pair_reg(&self, r: usize, q: usize) -> bool {
        self.in_pair[r][q]
    }

    /// reg°(S_a, S_b) for pair q.
    pub fn pair_interior(&self, q: usize) -> Vec<usize> {
        let (a, b) = PAIRS[q];
        self.pair_regs[q].iter().copied().filter(|&r| r != self.sources[a] && r != self.sources[b]).collect()
    }

    /// Λ_j for a single terminal label (empty when Ω_{j} is empty).
    pub fn lambda_of(&self, j: usize) -> &[usize] {
        self.lambda.get(&vec![j]).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Λ_j for every demanded terminal, in label order.
    pub fn singleton_lambdas(&self) -> Vec<(usize, &[usize])> {
        self.terminals.iter().map(|&(j, _)| (j, self.lambda_of(j))).collect()
    }

    pub fn to_doc(&self, rg: &RegionGraph) -> StructureDoc {
        let ids = |v: &[usize]| v.iter().map(|&r| rg.id(r).to_string()).collect::<Vec<_>>();
        let key = |k: &[usize]| k.iter().map(|j| (j + 1).to_string()).collect::<Vec<_>>().join(",");
        StructureDoc {
            pi: ids(&self.pi),
            omega: self.omega.iter().map(|(k, v)| (key(k), ids(v))).collect(),
            lambda: self.lambda.iter().map(|(k, v)| (key(k), ids(v))).collect(),
            terminal_separable: is_terminal_separable(self),
        }
    }
}

/// Document form of a [`StructureMap`]; labels are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDoc {
    pub pi: Vec<String>,
    pub omega: BTreeMap<String, Vec<String>>,
    pub lambda: BTreeMap<String, Vec<String>>,
    pub terminal_separable: bool,
}

/// Π and the three pairwise source super regions.
pub fn compute_pi(rg: &RegionGraph) -> Result<([Vec<usize>; 3], Vec<usize>)> {
    if rg.num_sources() != 3 {
        return Err(Error::UnsupportedSources(rg.num_sources()));
    }
    let mut closure = Closure::new(rg.len());
    let pair_regs: [Vec<usize>; 3] = PAIRS.map(|(a, b)| {
        let mut v = closure.compute(rg, &[rg.source(a), rg.source(b)]);
        v.sort_unstable();
        v
    });
    let sources = [rg.source(0), rg.source(1), rg.source(2)];
    for (q1, q2) in [(0, 1), (0, 2), (1, 2)] {
        let overlap = pair_regs[q1]
            .iter()
            .filter(|r| !sources.contains(r))
            .any(|r| pair_regs[q2].binary_search(r).is_ok());
        if overlap {
            return Err(Error::Internal("pairwise source super regions overlap off the sources".into()));
        }
    }
    let mut pi: Vec<usize> = pair_regs.iter().flatten().copied().collect();
    pi.sort_unstable();
    pi.dedup();
    Ok((pair_regs, pi))
}

/// Ω_I for the regions outside Π, keyed by the set of terminal labels each
/// region reaches. `terminals` lists (label, region) per terminal region.
pub fn label_omegas(
    rg: &RegionGraph,
    in_pi: &[bool],
    terminals: &[(usize, usize)],
) -> Result<BTreeMap<Vec<usize>, Vec<usize>>> {
    let targets: Vec<usize> = terminals.iter().map(|&(_, r)| r).collect();
    let reach = rg.reach_sets(&targets);
    let mut omega: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for r in 0..rg.len() {
        if in_pi[r] {
            continue;
        }
        let mut key: Vec<usize> = reach[r].ones().map(|k| terminals[k].0).collect();
        if key.is_empty() {
            return Err(Error::NotPruned(rg.id(r).to_string()));
        }
        key.sort_unstable();
        omega.entry(key).or_default().push(r);
    }
    Ok(omega)
}

/// Λ_I: regions of Π with a child in Ω_I.
pub fn compute_lambdas(
    rg: &RegionGraph,
    in_pi: &[bool],
    omega: &BTreeMap<Vec<usize>, Vec<usize>>,
) -> BTreeMap<Vec<usize>, Vec<usize>> {
    let mut key_of: Vec<Option<&Vec<usize>>> = vec![None; rg.len()];
    for (k, members) in omega {
        for &r in members {
            key_of[r] = Some(k);
        }
    }
    let mut lambda: BTreeMap<Vec<usize>, Vec<usize>> = omega.keys().map(|k| (k.clone(), Vec::new())).collect();
    for q in (0..rg.len()).filter(|&q| in_pi[q]) {
        let mut keys: Vec<&Vec<usize>> = rg.children(q).iter().filter_map(|&c| key_of[c]).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            lambda.get_mut(k).expect("key present").push(q);
        }
    }
    lambda
}

/// Builds the full structure map. The graph should be normalized so that
/// terminal regions have no children.
pub fn compute_structure(rg: &RegionGraph) -> Result<StructureMap> {
    let (pair_regs, pi) = compute_pi(rg)?;
    let mut in_pair = vec![[false; 3]; rg.len()];
    for (q, members) in pair_regs.iter().enumerate() {
        for &r in members {
            in_pair[r][q] = true;
        }
    }
    let mut in_pi = vec![false; rg.len()];
    for &r in &pi {
        in_pi[r] = true;
    }
    let terminals = rg.terminal_regions();
    let omega = label_omegas(rg, &in_pi, &terminals)?;
    let lambda = compute_lambdas(rg, &in_pi, &omega);
    let sources = [rg.source(0), rg.source(1), rg.source(2)];
    Ok(StructureMap { pair_regs, in_pair, pi, in_pi, omega, lambda, terminals, sources })
}

/// Every nonempty Ω_I has a single label.
pub fn is_terminal_separable(sm: &StructureMap) -> bool {
    sm.omega.keys().all(|k| k.len() == 1)
}

/// Source-to-terminal reachability on a region graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityReport {
    /// (source, terminal label) pairs with no path.
    pub disconnected: Vec<(usize, usize)>,
    /// Whether "outside Π" coincides with "reached by all three sources".
    pub pi_matches_reachability: bool,
}

impl ConnectivityReport {
    pub fn connected(&self) -> bool {
        self.disconnected.is_empty()
    }
}

/// Checks that every source region reaches every terminal region, and
/// cross-checks Π membership against reachability from all sources.
pub fn check_connectivity(rg: &RegionGraph) -> Result<ConnectivityReport> {
    let masks = rg.source_masks();
    let mut disconnected = Vec::new();
    for &(j, t) in rg.terminal_labels() {
        for i in 0..rg.num_sources() {
            if masks[t] >> i & 1 == 0 {
                disconnected.push((i, j));
            }
        }
    }
    disconnected.sort_unstable();
    let pi_matches_reachability = if rg.num_sources() == 3 {
        let (_, pi) = compute_pi(rg)?;
        let mut in_pi = vec![false; rg.len()];
        for r in pi {
            in_pi[r] = true;
        }
        (0..rg.len()).all(|r| in_pi[r] != (masks[r] == 0b111))
    } else {
        true
    };
    Ok(ConnectivityReport { disconnected, pi_matches_reachability })
}
