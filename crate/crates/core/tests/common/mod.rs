#![allow(dead_code)]

use std::collections::BTreeSet;

use sumnet_core::fixtures;
use sumnet_core::network::{parse_network, Network};
use sumnet_core::regions::{parse_region_graph, RegionDecomposition, RegionGraph};

pub fn net(src: &str) -> Network {
    parse_network(src.as_bytes()).expect("fixture parses")
}

pub fn rg(src: &str) -> RegionGraph {
    parse_region_graph(src.as_bytes()).expect("fixture parses")
}

pub fn fix_a() -> Network {
    net(fixtures::FIX_A)
}

pub fn fix_b() -> Network {
    net(fixtures::FIX_B)
}

/// Region ids of a set of indices, as a sorted set.
pub fn names(rg: &RegionGraph, v: &[usize]) -> BTreeSet<String> {
    v.iter().map(|&r| rg.id(r).to_string()).collect()
}

pub fn set(ids: &[&str]) -> BTreeSet<String> {
    ids.iter().map(|s| s.to_string()).collect()
}

/// A decomposition as a set of link-id sets.
pub fn link_sets(dec: &RegionDecomposition, net: &Network) -> BTreeSet<BTreeSet<String>> {
    dec.regions
        .iter()
        .map(|r| r.links.iter().map(|&e| net.link(e).id.clone()).collect())
        .collect()
}

pub fn link_set(ids: &[&str]) -> BTreeSet<String> {
    set(ids)
}

/// A region graph from (id, role) pairs and (parent, child) id pairs.
pub fn graph(regions: &[(&str, &str)], edges: &[(&str, &str)]) -> RegionGraph {
    let doc = serde_json::json!({
        "regions": regions.iter().map(|(id, role)| serde_json::json!({"id": id, "role": role})).collect::<Vec<_>>(),
        "edges": edges,
    });
    rg(&doc.to_string())
}

/// A network whose basic region graph is `g`: every non-source region R
/// becomes a node `in:R` followed by its leader link to `out:R`, and every
/// region-graph edge becomes a link into `in:` of the child. Terminal region
/// with label j is the terminal node `t{j}`.
pub fn realize(g: &RegionGraph) -> Network {
    use sumnet_core::network::{LinkDoc, NetworkDoc};
    let link = |id: String, tail: Option<String>, head: Option<String>| LinkDoc { id, tail, head };
    let (mut nodes, mut sources, mut terminals, mut links) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let label = |r: usize| match g.role(r).terminals.as_slice() {
        [] => None,
        [j] => Some(*j),
        _ => panic!("one terminal label per region"),
    };
    let head_of = |r: usize| match (g.role(r).source, label(r)) {
        (Some(i), _) => format!("s{}", i + 1),
        (None, Some(j)) => format!("t{}", j + 1),
        _ => format!("in:{}", g.id(r)),
    };
    let tail_of = |r: usize| match g.role(r).source {
        Some(i) => format!("s{}", i + 1),
        None => format!("out:{}", g.id(r)),
    };
    for i in 0..g.num_sources() {
        nodes.push(format!("s{}", i + 1));
        sources.push(format!("s{}", i + 1));
        links.push(link(format!("src{}", i + 1), None, Some(format!("s{}", i + 1))));
    }
    for &r in g.topo() {
        let role = g.role(r);
        if role.is_source() {
            continue;
        }
        if let Some(j) = label(r) {
            nodes.push(format!("t{}", j + 1));
            terminals.push(format!("t{}", j + 1));
            links.push(link(format!("lead:{}", g.id(r)), Some(format!("t{}", j + 1)), None));
        } else {
            nodes.push(format!("in:{}", g.id(r)));
            nodes.push(format!("out:{}", g.id(r)));
            links.push(link(format!("lead:{}", g.id(r)), Some(format!("in:{}", g.id(r))), Some(format!("out:{}", g.id(r)))));
        }
    }
    for (u, v) in g.edges() {
        links.push(link(format!("{}>{}", g.id(u), g.id(v)), Some(tail_of(u)), Some(head_of(v))));
    }
    Network::from_doc(NetworkDoc { nodes, sources, terminals, links }).expect("realized network is valid")
}
