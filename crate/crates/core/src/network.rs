//! Sum-network data model, JSON documents, validation, pruning and link ordering.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What a link carries. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkKind {
    /// Imaginary link injecting X_i at source node i.
    Source(usize),
    /// Imaginary link extracting the sum at terminal node j.
    Terminal(usize),
    Ordinary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub id: String,
    pub tail: Option<usize>,
    pub head: Option<usize>,
    pub kind: LinkKind,
}

/// A directed network with designated sources and terminals.
///
/// Imaginary source and terminal links are stored like any other link, with
/// the missing endpoint set to `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    nodes: Vec<String>,
    sources: Vec<usize>,
    terminals: Vec<usize>,
    links: Vec<Link>,
    node_ix: HashMap<String, usize>,
    link_ix: HashMap<String, usize>,
    into: Vec<Vec<usize>>,
    out_of: Vec<Vec<usize>>,
}

/// One link as it appears in a document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkDoc {
    pub id: String,
    #[serde(default)]
    pub tail: Option<String>,
    #[serde(default)]
    pub head: Option<String>,
}

/// The JSON network document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    pub nodes: Vec<String>,
    pub sources: Vec<String>,
    pub terminals: Vec<String>,
    pub links: Vec<LinkDoc>,
}

impl Network {
    /// Builds a network, materializing any imaginary link that is not given.
    pub fn from_doc(doc: NetworkDoc) -> Result<Network> {
        let mut node_ix = HashMap::new();
        for (i, n) in doc.nodes.iter().enumerate() {
            if node_ix.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateId(n.clone()));
            }
        }
        let lookup = |n: &String| node_ix.get(n).copied().ok_or_else(|| Error::UnknownId(n.clone()));
        let sources = doc.sources.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        let terminals = doc.terminals.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        if sources.is_empty() || terminals.is_empty() {
            return Err(Error::Malformed("at least one source and one terminal required".into()));
        }
        let distinct: HashSet<usize> = sources.iter().chain(&terminals).copied().collect();
        if distinct.len() != sources.len() + terminals.len() {
            return Err(Error::Malformed("source and terminal nodes must be distinct".into()));
        }
        let src_of: HashMap<usize, usize> = sources.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let term_of: HashMap<usize, usize> = terminals.iter().enumerate().map(|(j, &v)| (v, j)).collect();

        let mut links = Vec::with_capacity(doc.links.len() + sources.len() + terminals.len());
        let mut has_source = vec![false; sources.len()];
        let mut has_terminal = vec![false; terminals.len()];
        for l in &doc.links {
            let tail = l.tail.as_ref().map(lookup).transpose()?;
            let head = l.head.as_ref().map(lookup).transpose()?;
            let kind = match (tail, head) {
                (None, None) => return Err(Error::Malformed(format!("link `{}` has neither tail nor head", l.id))),
                (None, Some(h)) => {
                    let i = *src_of
                        .get(&h)
                        .ok_or_else(|| Error::Malformed(format!("source link `{}` enters non-source node", l.id)))?;
                    if has_source[i] {
                        return Err(Error::Malformed(format!("second source link `{}` at source {}", l.id, i + 1)));
                    }
                    has_source[i] = true;
                    LinkKind::Source(i)
                }
                (Some(t), None) => {
                    let j = *term_of
                        .get(&t)
                        .ok_or_else(|| Error::Malformed(format!("terminal link `{}` leaves non-terminal node", l.id)))?;
                    has_terminal[j] = true;
                    LinkKind::Terminal(j)
                }
                (Some(_), Some(_)) => LinkKind::Ordinary,
            };
            links.push(Link { id: l.id.clone(), tail, head, kind });
        }
        for (i, &v) in sources.iter().enumerate() {
            if !has_source[i] {
                links.push(Link { id: format!("src:{}", i + 1), tail: None, head: Some(v), kind: LinkKind::Source(i) });
            }
        }
        for (j, &v) in terminals.iter().enumerate() {
            if !has_terminal[j] {
                links.push(Link {
                    id: format!("term:{}:1", j + 1),
                    tail: Some(v),
                    head: None,
                    kind: LinkKind::Terminal(j),
                });
            }
        }
        Self::assemble(doc.nodes, node_ix, sources, terminals, links)
    }

    fn assemble(
        nodes: Vec<String>,
        node_ix: HashMap<String, usize>,
        sources: Vec<usize>,
        terminals: Vec<usize>,
        links: Vec<Link>,
    ) -> Result<Network> {
        let mut link_ix = HashMap::with_capacity(links.len());
        let mut into = vec![Vec::new(); nodes.len()];
        let mut out_of = vec![Vec::new(); nodes.len()];
        for (e, l) in links.iter().enumerate() {
            if link_ix.insert(l.id.clone(), e).is_some() {
                return Err(Error::DuplicateId(l.id.clone()));
            }
            if let Some(t) = l.tail {
                out_of[t].push(e);
            }
            if let Some(h) = l.head {
                into[h].push(e);
            }
        }
        Ok(Network { nodes, sources, terminals, links, node_ix, link_ix, into, out_of })
    }

    pub fn to_doc(&self) -> NetworkDoc {
        NetworkDoc {
            nodes: self.nodes.clone(),
            sources: self.sources.iter().map(|&v| self.nodes[v].clone()).collect(),
            terminals: self.terminals.iter().map(|&v| self.nodes[v].clone()).collect(),
            links: self
                .links
                .iter()
                .map(|l| LinkDoc {
                    id: l.id.clone(),
                    tail: l.tail.map(|v| self.nodes[v].clone()),
                    head: l.head.map(|v| self.nodes[v].clone()),
                })
                .collect(),
        }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, e: usize) -> &Link {
        &self.links[e]
    }

    pub fn link_index(&self, id: &str) -> Option<usize> {
        self.link_ix.get(id).copied()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_ix.get(id).copied()
    }

    pub fn num_sources(&self) -> usize {
        self.sources.len()
    }

    pub fn num_terminals(&self) -> usize {
        self.terminals.len()
    }

    pub fn source_nodes(&self) -> &[usize] {
        &self.sources
    }

    pub fn terminal_nodes(&self) -> &[usize] {
        &self.terminals
    }

    /// The source link of source `i`.
    pub fn source_link(&self, i: usize) -> usize {
        self.links
            .iter()
            .position(|l| l.kind == LinkKind::Source(i))
            .expect("every source has a source link")
    }

    /// In(e): links whose head is the tail of `e`.
    pub fn incoming(&self, e: usize) -> &[usize] {
        match self.links[e].tail {
            Some(t) => &self.into[t],
            None => &[],
        }
    }

    /// Links that have `e` as an incoming link.
    pub fn outgoing(&self, e: usize) -> &[usize] {
        match self.links[e].head {
            Some(h) => &self.out_of[h],
            None => &[],
        }
    }

    fn forward_from(&self, seeds: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut seen = vec![false; self.links.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for s in seeds {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(e) = queue.pop_front() {
            for &f in self.outgoing(e) {
                if !seen[f] {
                    seen[f] = true;
                    queue.push_back(f);
                }
            }
        }
        seen
    }

    fn backward_from(&self, seeds: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut seen = vec![false; self.links.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for s in seeds {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(e) = queue.pop_front() {
            for &f in self.incoming(e) {
                if !seen[f] {
                    seen[f] = true;
                    queue.push_back(f);
                }
            }
        }
        seen
    }

    fn links_of_kind(&self, pred: impl Fn(LinkKind) -> bool) -> Vec<usize> {
        (0..self.links.len()).filter(|&e| pred(self.links[e].kind)).collect()
    }
}

/// Parses a network document.
pub fn parse_network(bytes: &[u8]) -> Result<Network> {
    let doc: NetworkDoc = serde_json::from_slice(bytes).map_err(|e| Error::Malformed(e.to_string()))?;
    Network::from_doc(doc)
}

pub fn serialize_network(net: &Network) -> String {
    serde_json::to_string_pretty(&net.to_doc()).expect("network documents serialize")
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// A link on a cycle, if the network is cyclic.
    pub cycle_at: Option<String>,
    /// Number of source links per source.
    pub source_links: Vec<usize>,
    /// Ordinary links on no source-to-terminal path.
    pub dangling: Vec<String>,
    /// `connected[i][j]`: source i reaches terminal j.
    pub connected: Vec<Vec<bool>>,
}

impl ValidationReport {
    pub fn acyclic(&self) -> bool {
        self.cycle_at.is_none()
    }

    pub fn is_valid(&self) -> bool {
        self.acyclic() && self.source_links.iter().all(|&c| c == 1) && self.dangling.is_empty()
    }

    pub fn fully_connected(&self) -> bool {
        self.connected.iter().all(|row| row.iter().all(|&c| c))
    }
}

pub fn validate(net: &Network) -> ValidationReport {
    let cycle_at = topo_order(net).err().map(|e| match e {
        Error::Cycle(id) => id,
        other => other.to_string(),
    });
    let mut source_links = vec![0; net.num_sources()];
    for l in net.links() {
        if let LinkKind::Source(i) = l.kind {
            source_links[i] += 1;
        }
    }
    let (fwd, bwd) = path_masks(net);
    let dangling = net
        .links()
        .iter()
        .enumerate()
        .filter(|(e, l)| l.kind == LinkKind::Ordinary && !(fwd[*e] && bwd[*e]))
        .map(|(_, l)| l.id.clone())
        .collect();
    let terminal_links: Vec<Vec<usize>> = (0..net.num_terminals())
        .map(|j| net.links_of_kind(|k| k == LinkKind::Terminal(j)))
        .collect();
    let connected = (0..net.num_sources())
        .map(|i| {
            let reach = net.forward_from([net.source_link(i)]);
            terminal_links.iter().map(|ts| ts.iter().any(|&t| reach[t])).collect()
        })
        .collect();
    ValidationReport { cycle_at, source_links, dangling, connected }
}

fn path_masks(net: &Network) -> (Vec<bool>, Vec<bool>) {
    let fwd = net.forward_from(net.links_of_kind(|k| matches!(k, LinkKind::Source(_))));
    let bwd = net.backward_from(net.links_of_kind(|k| matches!(k, LinkKind::Terminal(_))));
    (fwd, bwd)
}

/// Removes ordinary links that lie on no source-to-terminal path, and nodes
/// left without links (sources and terminals are always kept).
pub fn prune(net: &Network) -> Network {
    let (fwd, bwd) = path_masks(net);
    let keep: Vec<bool> = net
        .links()
        .iter()
        .enumerate()
        .map(|(e, l)| l.kind != LinkKind::Ordinary || (fwd[e] && bwd[e]))
        .collect();
    let mut used = vec![false; net.nodes.len()];
    for &v in net.sources.iter().chain(&net.terminals) {
        used[v] = true;
    }
    for (e, l) in net.links.iter().enumerate() {
        if keep[e] {
            for v in l.tail.iter().chain(l.head.iter()) {
                used[*v] = true;
            }
        }
    }
    let mut remap = vec![usize::MAX; net.nodes.len()];
    let mut nodes = Vec::new();
    let mut node_ix = HashMap::new();
    for (v, name) in net.nodes.iter().enumerate() {
        if used[v] {
            remap[v] = nodes.len();
            node_ix.insert(name.clone(), nodes.len());
            nodes.push(name.clone());
        }
    }
    let links = net
        .links
        .iter()
        .enumerate()
        .filter(|(e, _)| keep[*e])
        .map(|(_, l)| Link { id: l.id.clone(), tail: l.tail.map(|v| remap[v]), head: l.head.map(|v| remap[v]), kind: l.kind })
        .collect();
    let sources = net.sources.iter().map(|&v| remap[v]).collect();
    let terminals = net.terminals.iter().map(|&v| remap[v]).collect();
    Network::assemble(nodes, node_ix, sources, terminals, links).expect("pruning preserves id uniqueness")
}

/// Link indices in topological order. Source links come first; other ties
/// are broken by link id.
pub fn topo_order(net: &Network) -> Result<Vec<usize>> {
    topo_order_by(net, |e| {
        let l = net.link(e);
        (!matches!(l.kind, LinkKind::Source(_)), l.id.clone())
    })
}

/// Link indices in topological order; among ready links the smallest `key` goes first.
pub fn topo_order_by<K: Ord>(net: &Network, key: impl Fn(usize) -> K) -> Result<Vec<usize>> {
    let n = net.links.len();
    let mut indeg: Vec<usize> = (0..n).map(|e| net.incoming(e).len()).collect();
    let mut heap = BinaryHeap::new();
    for (e, &d) in indeg.iter().enumerate() {
        if d == 0 {
            heap.push(Reverse((key(e), e)));
        }
    }
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((_, e))) = heap.pop() {
        order.push(e);
        for &f in net.outgoing(e) {
            indeg[f] -= 1;
            if indeg[f] == 0 {
                heap.push(Reverse((key(f), f)));
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&e| indeg[e] > 0).expect("some link remains");
        return Err(Error::Cycle(net.links[stuck].id.clone()));
    }
    Ok(order)
}
