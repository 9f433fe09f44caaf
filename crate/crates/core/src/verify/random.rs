//! Seeded random instances: basic region graphs, DAG networks and a large
//! layered network.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{prune, LinkDoc, Network, NetworkDoc};
use crate::regions::{RegionGraph, RegionSpec, Role};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionGraphParams {
    pub terminals: usize,
    pub coding: usize,
    /// Chance of each extra parent beyond the first two.
    pub density: f64,
}

impl Default for RegionGraphParams {
    fn default() -> Self {
        RegionGraphParams { terminals: 3, coding: 4, density: 0.2 }
    }
}

/// A three-source region graph in which every non-source region has at
/// least two parents, every coding region has a child and every source
/// reaches every terminal.
pub fn random_region_graph(seed: u64, params: RegionGraphParams) -> Result<RegionGraph> {
    if params.terminals == 0 || !(0.0..=1.0).contains(&params.density) {
        return Err(Error::Precondition("need at least one terminal and a density in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (k, m, n) = (3, params.coding, params.terminals);
    let mut parents = draw_parents(&mut rng, k, m, n, params.density);
    for _ in 0..RESAMPLES {
        if repairs_needed(&parents, k, m, n) == 0 {
            break;
        }
        parents = draw_parents(&mut rng, k, m, n, params.density);
    }
    for c in k..k + m {
        if !parents.iter().any(|ps| ps.contains(&c)) {
            let t = k + m + rng.random_range(0..n);
            parents[t].push(c);
        }
    }
    for t in k + m..k + m + n {
        for s in 0..k {
            if !reaches(&parents, s, t) {
                parents[t].push(s);
            }
        }
        parents[t].sort_unstable();
    }
    let role = |r: usize| {
        if r < k {
            Role::source(r)
        } else if r < k + m {
            Role::coding()
        } else {
            Role::terminal(r - k - m)
        }
    };
    let id = |r: usize| {
        if r < k {
            format!("S{}", r + 1)
        } else if r < k + m {
            format!("R{}", r - k + 1)
        } else {
            format!("T{}", r - k - m + 1)
        }
    };
    let specs = (0..k + m + n).map(|r| RegionSpec { id: id(r), role: role(r), links: Vec::new(), leader: None }).collect();
    let edges: Vec<(usize, usize)> =
        parents.iter().enumerate().flat_map(|(r, ps)| ps.iter().map(move |&u| (u, r))).collect();
    RegionGraph::new(specs, &edges)
}

/// Fresh draws tried before falling back to repairing the last one.
const RESAMPLES: usize = 64;

fn draw_parents(rng: &mut ChaCha8Rng, k: usize, m: usize, n: usize, density: f64) -> Vec<Vec<usize>> {
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); k + m + n];
    for r in k..k + m + n {
        let pool = if r < k + m { r } else { k + m };
        let mut cand: Vec<usize> = (0..pool).collect();
        cand.shuffle(rng);
        let mut ps: Vec<usize> = cand[..2].to_vec();
        ps.extend(cand[2..].iter().copied().filter(|_| rng.random_bool(density)));
        ps.sort_unstable();
        parents[r] = ps;
    }
    parents
}

/// Childless coding regions plus disconnected (source, terminal) pairs.
fn repairs_needed(parents: &[Vec<usize>], k: usize, m: usize, n: usize) -> usize {
    let childless = (k..k + m).filter(|c| !parents.iter().any(|ps| ps.contains(c))).count();
    let cut = (k + m..k + m + n).map(|t| (0..k).filter(|&s| !reaches(parents, s, t)).count()).sum::<usize>();
    childless + cut
}

fn reaches(parents: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut stack = vec![to];
    let mut seen = vec![false; parents.len()];
    while let Some(r) = stack.pop() {
        if r == from {
            return true;
        }
        for &u in &parents[r] {
            if !std::mem::replace(&mut seen[u], true) {
                stack.push(u);
            }
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetworkParams {
    pub terminals: usize,
    pub relays: usize,
    /// Ordinary links drawn before connectivity repairs and pruning.
    pub links: usize,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams { terminals: 3, relays: 20, links: 60 }
    }
}

/// A random acyclic three-source network, pruned, in which every source
/// reaches every terminal.
pub fn random_network(seed: u64, params: NetworkParams) -> Result<Network> {
    if params.terminals == 0 {
        return Err(Error::Precondition("need at least one terminal".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (k, v, n) = (3, params.relays, params.terminals);
    let name = |x: usize| {
        if x < k {
            format!("s{}", x + 1)
        } else if x < k + v {
            format!("v{}", x - k + 1)
        } else {
            format!("t{}", x - k - v + 1)
        }
    };
    let total = k + v + n;
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for x in k..k + v {
        arcs.push((rng.random_range(0..x), x));
        arcs.push((x, rng.random_range((x + 1).max(k)..total)));
    }
    for _ in 0..params.links {
        let a = rng.random_range(0..k + v);
        let b = rng.random_range((a + 1).max(k)..total);
        arcs.push((a, b));
    }
    for t in k + v..total {
        for s in 0..k {
            if !arc_reaches(&arcs, total, s, t) {
                arcs.push((s, t));
            }
        }
    }
    let doc = NetworkDoc {
        nodes: (0..total).map(name).collect(),
        sources: (0..k).map(name).collect(),
        terminals: (k + v..total).map(name).collect(),
        links: arcs
            .iter()
            .enumerate()
            .map(|(e, &(a, b))| LinkDoc { id: format!("e{}", e + 1), tail: Some(name(a)), head: Some(name(b)) })
            .collect(),
    };
    Ok(prune(&Network::from_doc(doc)?))
}

fn arc_reaches(arcs: &[(usize, usize)], nodes: usize, from: usize, to: usize) -> bool {
    let mut out = vec![Vec::new(); nodes];
    for &(a, b) in arcs {
        out[a].push(b);
    }
    let mut seen = vec![false; nodes];
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        if x == to {
            return true;
        }
        for &y in &out[x] {
            if !std::mem::replace(&mut seen[y], true) {
                stack.push(y);
            }
        }
    }
    false
}

/// A three-source, three-terminal network with `width × layers` nodes per
/// terminal column (about 6·width·layers links). Each column is fed by one
/// mixed pair and the remaining source, so the instance is terminal-separable
/// and solvable.
pub fn layered_network(width: usize, layers: usize) -> Result<Network> {
    if width < 2 || layers == 0 {
        return Err(Error::Precondition("layered network needs width >= 2 and at least one layer".into()));
    }
    let mut nodes: Vec<String> = ["s1", "s2", "s3", "t1", "t2", "t3"].map(String::from).to_vec();
    let mut links = Vec::new();
    let mut link = |tail: &str, head: &str| {
        let id = format!("e{}", links.len() + 1);
        links.push(LinkDoc { id, tail: Some(tail.to_string()), head: Some(head.to_string()) });
    };
    // Mixing nodes: m{q} joins two sources, then forwards through one link.
    let mixes = [("s1", "s2"), ("s2", "s3"), ("s1", "s3")];
    for (q, (a, b)) in mixes.iter().enumerate() {
        let (m, out) = (format!("m{}", q + 1), format!("mo{}", q + 1));
        link(a, &m);
        link(b, &m);
        link(&m, &out);
        nodes.push(m);
        nodes.push(out);
    }
    let feeds = [("mo1", "s3"), ("mo2", "s1"), ("mo3", "s2")];
    for (c, (mix, src)) in feeds.iter().enumerate() {
        let (head, root) = (format!("c{}h", c + 1), format!("c{}r", c + 1));
        link(mix, &head);
        link(src, &head);
        link(&head, &root);
        nodes.push(head);
        nodes.push(root.clone());
        let cell = |l: usize, x: usize| format!("c{}_{}_{}", c + 1, l, x);
        for l in 0..layers {
            for x in 0..width {
                let me = cell(l, x);
                if l == 0 {
                    link(&root, &me);
                } else {
                    link(&cell(l - 1, x), &me);
                    link(&cell(l - 1, (x + 1) % width), &me);
                }
                nodes.push(me);
            }
        }
        for x in 0..width {
            link(&cell(layers - 1, x), &format!("t{}", c + 1));
        }
    }
    let doc = NetworkDoc {
        nodes,
        sources: vec!["s1".into(), "s2".into(), "s3".into()],
        terminals: vec!["t1".into(), "t2".into(), "t3".into()],
        links,
    };
    Network::from_doc(doc)
}
