//! Region decompositions of a network, the basic region graph, and lifting
//! region codes back to links.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::code::{LinkCode, RegionCode};
use crate::error::{Error, Result};
use crate::network::{topo_order, LinkKind, Network};

/// Role of a region. A region may hold several terminal links; a source
/// region holding a terminal link keeps its source role as well.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Role {
    pub source: Option<usize>,
    pub terminals: Vec<usize>,
}

impl Role {
    pub fn coding() -> Self {
        Role::default()
    }

    pub fn source(i: usize) -> Self {
        Role { source: Some(i), terminals: Vec::new() }
    }

    pub fn terminal(j: usize) -> Self {
        Role { source: None, terminals: vec![j] }
    }

    pub fn is_source(&self) -> bool {
        self.source.is_some()
    }

    pub fn is_terminal(&self) -> bool {
        !self.terminals.is_empty()
    }

    pub fn is_coding(&self) -> bool {
        !self.is_source() && !self.is_terminal()
    }

    /// Parses `coding`, `source:1`, `terminal:2,3` or `source:1|terminal:2`.
    pub fn parse(s: &str) -> Result<Role> {
        let bad = || Error::Malformed(format!("bad role `{s}`"));
        let mut role = Role::coding();
        if s == "coding" {
            return Ok(role);
        }
        for part in s.split('|') {
            let (kind, rest) = part.split_once(':').ok_or_else(bad)?;
            let nums = rest
                .split(',')
                .map(|x| x.trim().parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(bad)?;
            match kind {
                "source" if nums.len() == 1 && role.source.is_none() => role.source = Some(nums[0]),
                "terminal" if role.terminals.is_empty() => role.terminals = nums,
                _ => return Err(bad()),
            }
        }
        role.terminals.sort_unstable();
        role.terminals.dedup();
        Ok(role)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(i) = self.source {
            parts.push(format!("source:{}", i + 1));
        }
        if !self.terminals.is_empty() {
            let js: Vec<String> = self.terminals.iter().map(|j| (j + 1).to_string()).collect();
            parts.push(format!("terminal:{}", js.join(",")));
        }
        if parts.is_empty() {
            write!(f, "coding")
        } else {
            write!(f, "{}", parts.join("|"))
        }
    }
}

/// A set of links with a leader.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub id: String,
    /// Link indices, ascending.
    pub links: Vec<usize>,
    pub leader: usize,
    pub role: Role,
}

/// A partition of a network's links into regions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionDecomposition {
    pub regions: Vec<Region>,
    pub region_of: Vec<usize>,
}

impl RegionDecomposition {
    /// Builds a decomposition from explicit link sets. The leader of each
    /// region is its only member with no incoming link inside the region.
    pub fn from_link_sets(net: &Network, sets: &[Vec<usize>]) -> Result<Self> {
        let m = net.links().len();
        let mut region_of = vec![usize::MAX; m];
        for (r, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::BadDecomposition("empty region".into()));
            }
            for &e in set {
                if e >= m || region_of[e] != usize::MAX {
                    return Err(Error::BadDecomposition(format!("link index {e} repeated or out of range")));
                }
                region_of[e] = r;
            }
        }
        if let Some(e) = region_of.iter().position(|&r| r == usize::MAX) {
            return Err(Error::BadDecomposition(format!("link `{}` uncovered", net.link(e).id)));
        }
        let mut regions = Vec::with_capacity(sets.len());
        for (r, set) in sets.iter().enumerate() {
            let heads: Vec<usize> =
                set.iter().copied().filter(|&e| !net.incoming(e).iter().any(|&f| region_of[f] == r)).collect();
            if heads.len() != 1 {
                return Err(Error::BadDecomposition(format!("region {r} has {} leader candidates", heads.len())));
            }
            let mut links = set.clone();
            links.sort_unstable();
            regions.push(Region { id: format!("D{}", r + 1), links, leader: heads[0], role: role_of(net, set) });
        }
        Ok(RegionDecomposition { regions, region_of })
    }
}

fn role_of(net: &Network, links: &[usize]) -> Role {
    let mut role = Role::coding();
    for &e in links {
        match net.link(e).kind {
            LinkKind::Source(i) => role.source = Some(i),
            LinkKind::Terminal(j) => role.terminals.push(j),
            LinkKind::Ordinary => {}
        }
    }
    role.terminals.sort_unstable();
    role
}

/// The unique basic region decomposition, computed in canonical link order.
pub fn basic_region_decomposition(net: &Network) -> Result<RegionDecomposition> {
    let order = topo_order(net)?;
    basic_region_decomposition_in(net, &order)
}

/// Greedy construction along a caller-supplied topological order.
///
/// A link joins the region holding all of its incoming links when there is
/// exactly one such region; otherwise it leads a new region. The result is
/// canonicalized, so it does not depend on `order`.
pub fn basic_region_decomposition_in(net: &Network, order: &[usize]) -> Result<RegionDecomposition> {
    let m = net.links().len();
    if order.len() != m {
        return Err(Error::Precondition("order must list every link once".into()));
    }
    let mut region_of = vec![usize::MAX; m];
    let mut leaders: Vec<usize> = Vec::new();
    for &e in order {
        let ins = net.incoming(e);
        let mut joined = None;
        if !matches!(net.link(e).kind, LinkKind::Source(_)) && !ins.is_empty() {
            let r = region_of[ins[0]];
            if r == usize::MAX {
                return Err(Error::Precondition(format!("order places `{}` before an incoming link", net.link(e).id)));
            }
            if ins.iter().all(|&f| region_of[f] == r) {
                joined = Some(r);
            }
        }
        region_of[e] = joined.unwrap_or_else(|| {
            leaders.push(e);
            leaders.len() - 1
        });
    }
    canonicalize(net, region_of, leaders)
}

fn canonicalize(net: &Network, region_of: Vec<usize>, leaders: Vec<usize>) -> Result<RegionDecomposition> {
    let canon = topo_order(net)?;
    let mut pos = vec![0; canon.len()];
    for (k, &e) in canon.iter().enumerate() {
        pos[e] = k;
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); leaders.len()];
    for (e, &r) in region_of.iter().enumerate() {
        members[r].push(e);
    }
    let mut order: Vec<usize> = (0..leaders.len()).collect();
    order.sort_by_key(|&r| match net.link(leaders[r]).kind {
        LinkKind::Source(i) => (0, i),
        _ => (1, pos[leaders[r]]),
    });
    let mut new_index = vec![0; leaders.len()];
    let mut regions = Vec::with_capacity(leaders.len());
    let mut coding = 0;
    for (k, &r) in order.iter().enumerate() {
        new_index[r] = k;
        let role = role_of(net, &members[r]);
        let id = if let Some(i) = role.source {
            format!("S{}", i + 1)
        } else if let Some(&j) = role.terminals.first() {
            format!("T{}", j + 1)
        } else {
            coding += 1;
            format!("R{coding}")
        };
        regions.push(Region { id, links: std::mem::take(&mut members[r]), leader: leaders[r], role });
    }
    let region_of = region_of.into_iter().map(|r| new_index[r]).collect();
    Ok(RegionDecomposition { regions, region_of })
}

/// Why a decomposition fails to be basic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasicViolation {
    /// A non-leader link has an incoming link outside its region.
    NotInClosed { region: String, link: String },
    /// A non-source region has fewer than two parents.
    FewParents { region: String, parents: usize },
    /// A source link is not the leader of its region.
    SourceNotLeader { region: String },
}

/// Checks both conditions of a basic region decomposition.
pub fn check_basic(dec: &RegionDecomposition, net: &Network) -> Result<Option<BasicViolation>> {
    validate_cover(dec, net)?;
    for (r, reg) in dec.regions.iter().enumerate() {
        for &e in &reg.links {
            let link = net.link(e);
            if e == reg.leader {
                continue;
            }
            if matches!(link.kind, LinkKind::Source(_)) {
                return Ok(Some(BasicViolation::SourceNotLeader { region: reg.id.clone() }));
            }
            let ins = net.incoming(e);
            if ins.is_empty() || ins.iter().any(|&f| dec.region_of[f] != r) {
                return Ok(Some(BasicViolation::NotInClosed { region: reg.id.clone(), link: link.id.clone() }));
            }
        }
        if !matches!(net.link(reg.leader).kind, LinkKind::Source(_)) {
            let parents: HashSet<usize> = net.incoming(reg.leader).iter().map(|&f| dec.region_of[f]).collect();
            if parents.len() < 2 {
                return Ok(Some(BasicViolation::FewParents { region: reg.id.clone(), parents: parents.len() }));
            }
        } else if reg.role.source.is_none() {
            return Ok(Some(BasicViolation::SourceNotLeader { region: reg.id.clone() }));
        }
    }
    Ok(None)
}

pub fn is_basic(dec: &RegionDecomposition, net: &Network) -> Result<bool> {
    Ok(check_basic(dec, net)?.is_none())
}

fn validate_cover(dec: &RegionDecomposition, net: &Network) -> Result<()> {
    let m = net.links().len();
    if dec.region_of.len() != m {
        return Err(Error::BadDecomposition("link map does not cover the network".into()));
    }
    let mut seen = vec![false; m];
    for (r, reg) in dec.regions.iter().enumerate() {
        if !reg.links.contains(&reg.leader) {
            return Err(Error::BadDecomposition(format!("leader of `{}` not a member", reg.id)));
        }
        for &e in &reg.links {
            if e >= m || seen[e] || dec.region_of[e] != r {
                return Err(Error::BadDecomposition(format!("overlap or mismatch at link index {e}")));
            }
            seen[e] = true;
        }
    }
    if let Some(e) = seen.iter().position(|s| !s) {
        return Err(Error::BadDecomposition(format!("link `{}` uncovered", net.link(e).id)));
    }
    Ok(())
}

/// Input for [`RegionGraph::new`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSpec {
    pub id: String,
    pub role: Role,
    pub links: Vec<String>,
    pub leader: Option<String>,
}

/// A DAG over regions with source and terminal roles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionGraph {
    ids: Vec<String>,
    roles: Vec<Role>,
    links: Vec<Vec<String>>,
    leaders: Vec<Option<String>>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    topo: Vec<usize>,
    topo_pos: Vec<usize>,
    sources: Vec<usize>,
    terminals: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

impl RegionGraph {
    /// Builds a region graph. `edges` are (parent, child) index pairs.
    pub fn new(specs: Vec<RegionSpec>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = specs.len();
        let mut index = HashMap::with_capacity(n);
        for (r, s) in specs.iter().enumerate() {
            if index.insert(s.id.clone(), r).is_some() {
                return Err(Error::DuplicateId(s.id.clone()));
            }
        }
        let mut src: Vec<Option<usize>> = Vec::new();
        let mut terminals = Vec::new();
        let mut seen_labels = HashSet::new();
        for (r, s) in specs.iter().enumerate() {
            if let Some(i) = s.role.source {
                if src.len() <= i {
                    src.resize(i + 1, None);
                }
                if src[i].replace(r).is_some() {
                    return Err(Error::Malformed(format!("source {} assigned twice", i + 1)));
                }
            }
            for &j in &s.role.terminals {
                if !seen_labels.insert(j) {
                    return Err(Error::Malformed(format!("terminal {} assigned twice", j + 1)));
                }
                terminals.push((j, r));
            }
        }
        let sources = src
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| Error::Malformed(format!("source {} missing", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        if sources.is_empty() {
            return Err(Error::Malformed("no source region".into()));
        }
        if terminals.is_empty() {
            return Err(Error::Malformed("no terminal region".into()));
        }
        terminals.sort_unstable();

        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut edge_set = HashSet::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Malformed("edge endpoint out of range".into()));
            }
            if a == b {
                return Err(Error::Cycle(specs[a].id.clone()));
            }
            if edge_set.insert((a, b)) {
                parents[b].push(a);
                children[a].push(b);
            }
        }
        for r in 0..n {
            parents[r].sort_unstable();
            children[r].sort_unstable();
            if specs[r].role.is_source() && !parents[r].is_empty() {
                return Err(Error::Malformed(format!("source region `{}` has a parent", specs[r].id)));
            }
        }
        let topo = region_topo(&parents, &children).map_err(|r| Error::Cycle(specs[r].id.clone()))?;
        let mut topo_pos = vec![0; n];
        for (k, &r) in topo.iter().enumerate() {
            topo_pos[r] = k;
        }
        let mut ids = Vec::with_capacity(n);
        let mut roles = Vec::with_capacity(n);
        let mut links = Vec::with_capacity(n);
        let mut leaders = Vec::with_capacity(n);
        for s in specs {
            ids.push(s.id);
            roles.push(s.role);
            links.push(s.links);
            leaders.push(s.leader);
        }
        Ok(RegionGraph { ids, roles, links, leaders, parents, children, topo, topo_pos, sources, terminals, index })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, r: usize) -> &str {
        &self.ids[r]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Region indices for a list of ids; panics on unknown ids.
    pub fn ix(&self, ids: &[&str]) -> Vec<usize> {
        ids.iter().map(|id| self.index_of(id).unwrap_or_else(|| panic!("unknown region `{id}`"))).collect()
    }

    pub fn role(&self, r: usize) -> &Role {
        &self.roles[r]
    }

    pub fn region_links(&self, r: usize) -> &[String] {
        &self.links[r]
    }

    pub fn leader(&self, r: usize) -> Option<&str> {
        self.leaders[r].as_deref()
    }

    pub fn parents(&self, r: usize) -> &[usize] {
        &self.parents[r]
    }

    pub fn children(&self, r: usize) -> &[usize] {
        &self.children[r]
    }

    pub fn topo(&self) -> &[usize] {
        &self.topo
    }

    pub fn topo_pos(&self, r: usize) -> usize {
        self.topo_pos[r]
    }

    pub fn num_sources(&self) -> usize {
        self.sources.len()
    }

    /// Region of source `i`.
    pub fn source(&self, i: usize) -> usize {
        self.sources[i]
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    /// Every (terminal label, region) pair, ordered by label.
    pub fn terminal_labels(&self) -> &[(usize, usize)] {
        &self.terminals
    }

    /// Distinct terminal regions, each tagged with its smallest label.
    pub fn terminal_regions(&self) -> Vec<(usize, usize)> {
        let mut seen = HashSet::new();
        self.terminals.iter().copied().filter(|&(_, r)| seen.insert(r)).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|b| self.parents[b].iter().map(move |&a| (a, b))).collect()
    }

    /// Every non-source region has at least two parents.
    pub fn check_basic(&self) -> Result<()> {
        for r in 0..self.len() {
            if !self.roles[r].is_source() && self.parents[r].len() < 2 {
                return Err(Error::NotBasic(format!("region `{}` has {} parent(s)", self.ids[r], self.parents[r].len())));
            }
        }
        Ok(())
    }

    /// Bit i of `masks[r]` is set when source i reaches region r.
    pub fn source_masks(&self) -> Vec<u64> {
        assert!(self.sources.len() <= 64, "source masks hold at most 64 sources");
        let mut masks = vec![0u64; self.len()];
        for (i, &s) in self.sources.iter().enumerate() {
            masks[s] |= 1 << i;
        }
        for &r in &self.topo {
            for &c in &self.children[r] {
                masks[c] |= masks[r];
            }
        }
        masks
    }

    /// Whether `b` is reachable from `a` (every region reaches itself).
    pub fn reaches(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(r) = stack.pop() {
            for &c in &self.children[r] {
                if c == b {
                    return true;
                }
                if !seen[c] && self.topo_pos[c] < self.topo_pos[b] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    /// For each region, the set of terminal regions it reaches, as indices
    /// into `targets`.
    pub fn reach_sets(&self, targets: &[usize]) -> Vec<Bits> {
        let mut sets = vec![Bits::new(targets.len()); self.len()];
        for (k, &t) in targets.iter().enumerate() {
            sets[t].insert(k);
        }
        for &r in self.topo.iter().rev() {
            for &c in &self.children[r] {
                if c != r {
                    let child = sets[c].clone();
                    sets[r].union_with(&child);
                }
            }
        }
        sets
    }

    /// Subgraph on the regions with `keep[r]`; also returns each kept
    /// region's index in `self`.
    pub fn restrict(&self, keep: &[bool]) -> Result<(RegionGraph, Vec<usize>)> {
        let origin: Vec<usize> = (0..self.len()).filter(|&r| keep[r]).collect();
        let mut new_ix = vec![usize::MAX; self.len()];
        for (k, &r) in origin.iter().enumerate() {
            new_ix[r] = k;
        }
        let specs = origin.iter().map(|&r| self.spec(r)).collect();
        let edges: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .filter(|&(a, b)| keep[a] && keep[b])
            .map(|(a, b)| (new_ix[a], new_ix[b]))
            .collect();
        Ok((RegionGraph::new(specs, &edges)?, origin))
    }

    /// Copy of the graph with new roles and some edges removed.
    pub fn rewired(&self, roles: Vec<Role>, drop_out_edges_of: &[usize]) -> Result<RegionGraph> {
        let cut: HashSet<usize> = drop_out_edges_of.iter().copied().collect();
        let specs = (0..self.len()).map(|r| RegionSpec { role: roles[r].clone(), ..self.spec(r) }).collect();
        let edges: Vec<(usize, usize)> = self.edges().into_iter().filter(|(a, _)| !cut.contains(a)).collect();
        RegionGraph::new(specs, &edges)
    }

    fn spec(&self, r: usize) -> RegionSpec {
        RegionSpec {
            id: self.ids[r].clone(),
            role: self.roles[r].clone(),
            links: self.links[r].clone(),
            leader: self.leaders[r].clone(),
        }
    }

    pub fn to_doc(&self) -> RegionGraphDoc {
        RegionGraphDoc {
            regions: (0..self.len())
                .map(|r| RegionDoc {
                    id: self.ids[r].clone(),
                    role: self.roles[r].to_string(),
                    links: self.links[r].clone(),
                    leader: self.leaders[r].clone(),
                })
                .collect(),
            edges: self.edges().into_iter().map(|(a, b)| (self.ids[a].clone(), self.ids[b].clone())).collect(),
        }
    }

    pub fn from_doc(doc: RegionGraphDoc) -> Result<RegionGraph> {
        let index: HashMap<&str, usize> = doc.regions.iter().enumerate().map(|(r, d)| (d.id.as_str(), r)).collect();
        let edges = doc
            .edges
            .iter()
            .map(|(a, b)| {
                let ia = index.get(a.as_str()).ok_or_else(|| Error::UnknownId(a.clone()))?;
                let ib = index.get(b.as_str()).ok_or_else(|| Error::UnknownId(b.clone()))?;
                Ok((*ia, *ib))
            })
            .collect::<Result<Vec<_>>>()?;
        let specs = doc
            .regions
            .into_iter()
            .map(|d| Ok(RegionSpec { role: Role::parse(&d.role)?, id: d.id, links: d.links, leader: d.leader }))
            .collect::<Result<Vec<_>>>()?;
        RegionGraph::new(specs, &edges)
    }
}

fn region_topo(parents: &[Vec<usize>], children: &[Vec<usize>]) -> std::result::Result<Vec<usize>, usize> {
    let n = parents.len();
    let mut indeg: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n).filter(|&r| indeg[r] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(r)) = heap.pop() {
        order.push(r);
        for &c in &children[r] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                heap.push(Reverse(c));
            }
        }
    }
    if order.len() < n {
        return Err((0..n).find(|&r| indeg[r] > 0).expect("a region remains"));
    }
    Ok(order)
}

/// One region in a region-graph document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionDoc {
    pub id: String,
    pub role: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub links: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leader: Option<String>,
}

/// The JSON region-graph document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionGraphDoc {
    pub regions: Vec<RegionDoc>,
    pub edges: Vec<(String, String)>,
}

pub fn parse_region_graph(bytes: &[u8]) -> Result<RegionGraph> {
    let doc: RegionGraphDoc = serde_json::from_slice(bytes).map_err(|e| Error::Malformed(e.to_string()))?;
    RegionGraph::from_doc(doc)
}

/// Region graph of a decomposition: (R', R) is an edge when R' holds an
/// incoming link of lead(R). Region indices follow `dec`.
pub fn build_region_graph(dec: &RegionDecomposition, net: &Network) -> Result<RegionGraph> {
    validate_cover(dec, net)?;
    let mut edges = Vec::new();
    for (r, reg) in dec.regions.iter().enumerate() {
        let mut ps: Vec<usize> = net.incoming(reg.leader).iter().map(|&f| dec.region_of[f]).collect();
        ps.sort_unstable();
        ps.dedup();
        edges.extend(ps.into_iter().filter(|&q| q != r).map(|q| (q, r)));
    }
    let specs = dec
        .regions
        .iter()
        .map(|reg| RegionSpec {
            id: reg.id.clone(),
            role: reg.role.clone(),
            links: reg.links.iter().map(|&e| net.link(e).id.clone()).collect(),
            leader: Some(net.link(reg.leader).id.clone()),
        })
        .collect();
    RegionGraph::new(specs, &edges)
}

/// Drops every terminal region reachable from another terminal region and
/// every region that no longer reaches a remaining terminal region. Source
/// regions are always kept.
pub fn normalize_terminals(rg: &RegionGraph) -> Result<RegionGraph> {
    Ok(normalize_with_origin(rg)?.0)
}

/// [`normalize_terminals`] plus the original index of each kept region.
pub fn normalize_with_origin(rg: &RegionGraph) -> Result<(RegionGraph, Vec<usize>)> {
    let targets: Vec<usize> = rg.terminal_regions().into_iter().map(|(_, r)| r).collect();
    let reach = rg.reach_sets(&targets);
    if let Some(r) = (0..rg.len()).find(|&r| reach[r].is_empty()) {
        return Err(Error::NotPruned(rg.id(r).to_string()));
    }
    let mut dropped = vec![false; targets.len()];
    for (k, &t) in targets.iter().enumerate() {
        for other in reach[t].ones() {
            if other != k {
                dropped[other] = true;
            }
        }
    }
    let keep: Vec<bool> = (0..rg.len())
        .map(|r| rg.role(r).is_source() || reach[r].ones().any(|k| !dropped[k]))
        .collect();
    rg.restrict(&keep)
}

/// Lifts a region code to links: every link carries its region's vector.
/// `code` is indexed like `dec` (and the region graph built from it).
pub fn expand_code(code: &RegionCode, dec: &RegionDecomposition, net: &Network) -> Result<LinkCode> {
    if code.vectors.len() != dec.regions.len() {
        return Err(Error::Precondition("code and decomposition differ in size".into()));
    }
    let vectors = (0..net.links().len())
        .map(|e| {
            let r = dec.region_of[e];
            code.get(r).copied().map(Some).ok_or_else(|| Error::Missing(dec.regions[r].id.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LinkCode { p: code.p, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn role_round_trip() {
        for s in ["coding", "source:2", "terminal:1,3", "source:1|terminal:2"] {
            assert_eq!(Role::parse(s).unwrap().to_string(), s);
        }
        assert!(Role::parse("sink:1").is_err());
        assert!(Role::parse("source:0").is_err());
    }

    #[test]
    fn two_region_chain_has_one_edge() {
        let specs = vec![
            RegionSpec { id: "S1".into(), role: Role::source(0), links: vec![], leader: None },
            RegionSpec { id: "T1".into(), role: Role::terminal(0), links: vec![], leader: None },
        ];
        let rg = RegionGraph::new(specs, &[(0, 1)]).unwrap();
        assert_eq!(rg.edges(), vec![(0, 1)]);
        assert!(rg.check_basic().is_err());
    }
}
