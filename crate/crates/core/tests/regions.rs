mod common;

use std::collections::BTreeSet;

use common::{fix_a, fix_b, link_set, link_sets, net, set};
use proptest::prelude::*;
use sumnet_core::code::RegionCode;
use sumnet_core::fixtures;
use sumnet_core::gf::{alpha, Gf, ALPHA_BAR};
use sumnet_core::network::{topo_order_by, LinkDoc, Network};
use sumnet_core::regions::{
    basic_region_decomposition, basic_region_decomposition_in, build_region_graph, check_basic, expand_code,
    is_basic, normalize_terminals, BasicViolation, RegionDecomposition, RegionGraph, RegionSpec, Role,
};
use sumnet_core::verify::random::{random_network, NetworkParams};
use sumnet_core::verify::{brute_force_feasible, verify_network_code, verify_region_code, OracleConfig, OracleOutcome};

fn ix(net: &Network, ids: &[&str]) -> Vec<usize> {
    ids.iter().map(|id| net.link_index(id).unwrap_or_else(|| panic!("no link {id}"))).collect()
}

/// Id of the region of `rg` (built from `dec`) holding link `link`.
fn region_with(dec: &RegionDecomposition, net: &Network, link: &str) -> String {
    dec.regions[dec.region_of[net.link_index(link).unwrap()]].id.clone()
}

fn parents_by_link(dec: &RegionDecomposition, rg: &RegionGraph, net: &Network, link: &str) -> BTreeSet<String> {
    let r = rg.index_of(&region_with(dec, net, link)).unwrap();
    rg.parents(r).iter().map(|&u| rg.id(u).to_string()).collect()
}

#[test]
fn fix_a_basic_decomposition() {
    let net = fix_a();
    let dec = basic_region_decomposition(&net).unwrap();
    let expected: BTreeSet<BTreeSet<String>> = [
        link_set(&["1", "(s1,v1)", "(s1,t2)"]),
        link_set(&["2", "(s2,v2)", "(s2,t1)"]),
        link_set(&["3", "(s3,v1)", "(s3,v2)"]),
        link_set(&["(v2,v4)", "(v4,t3)", "(v4,t2)"]),
        link_set(&["(v1,v3)", "(v3,t1)", "(v3,t3)"]),
        link_set(&["4"]),
        link_set(&["5"]),
        link_set(&["6"]),
    ]
    .into_iter()
    .collect();
    assert_eq!(link_sets(&dec, &net), expected);
    assert!(is_basic(&dec, &net).unwrap());
}

#[test]
fn fix_b_basic_decomposition() {
    let net = fix_b();
    let dec = basic_region_decomposition(&net).unwrap();
    let expected: BTreeSet<BTreeSet<String>> = [
        link_set(&["1", "(s1,v1)", "(s1,v2)", "(s1,t1)", "(s1,t2)"]),
        link_set(&["2", "(s2,v2)", "(s2,v3)"]),
        link_set(&["3", "(s3,v1)", "(s3,v3)"]),
        link_set(&["(v3,v5)", "(v5,t3)", "(v5,t2)"]),
        link_set(&["(v1,v4)", "(v4,t1)", "(v4,t3)"]),
        link_set(&["(v2,t1)"]),
        link_set(&["4"]),
        link_set(&["5"]),
        link_set(&["6"]),
    ]
    .into_iter()
    .collect();
    assert_eq!(link_sets(&dec, &net), expected);
    assert!(is_basic(&dec, &net).unwrap());
}

#[test]
fn separate_paths_form_whole_source_regions() {
    // Three disjoint paths s_i -> v_i -> t, meeting only at the terminal.
    let mut links = Vec::new();
    for i in 1..=3 {
        links.push(LinkDoc { id: format!("a{i}"), tail: Some(format!("s{i}")), head: Some(format!("v{i}")) });
        links.push(LinkDoc { id: format!("b{i}"), tail: Some(format!("v{i}")), head: Some("t".into()) });
    }
    let doc = sumnet_core::network::NetworkDoc {
        nodes: ["s1", "s2", "s3", "v1", "v2", "v3", "t"].map(String::from).to_vec(),
        sources: ["s1", "s2", "s3"].map(String::from).to_vec(),
        terminals: vec!["t".into()],
        links,
    };
    let net = Network::from_doc(doc).unwrap();
    let dec = basic_region_decomposition(&net).unwrap();
    assert_eq!(dec.regions.len(), 4);
    for i in 1..=3 {
        let id = format!("S{i}");
        let r = dec.regions.iter().find(|r| r.id == id).unwrap();
        let got: BTreeSet<String> = r.links.iter().map(|&e| net.link(e).id.clone()).collect();
        assert_eq!(got, link_set(&[&format!("src:{i}"), &format!("a{i}"), &format!("b{i}")]));
    }
    // Finer: the last path link alone has a single parent. Coarser: the
    // terminal region cannot absorb a path link.
    let base: Vec<Vec<usize>> = dec.regions.iter().map(|r| r.links.clone()).collect();
    let t = base.len() - 1;
    for r in 0..3 {
        let last = net.link_index(&format!("b{}", r + 1)).unwrap();
        let mut finer = base.clone();
        finer[r].retain(|&x| x != last);
        finer.push(vec![last]);
        let alt = RegionDecomposition::from_link_sets(&net, &finer).unwrap();
        assert!(matches!(check_basic(&alt, &net).unwrap(), Some(BasicViolation::FewParents { parents: 1, .. })));
        let mut coarser = base.clone();
        coarser[r].retain(|&x| x != last);
        coarser[t].push(last);
        let alt = RegionDecomposition::from_link_sets(&net, &coarser).unwrap();
        assert!(!is_basic(&alt, &net).unwrap());
    }
}

#[test]
fn moving_a_link_across_regions_breaks_in_closure() {
    let net = fix_a();
    let sets = vec![
        ix(&net, &["1", "(s1,v1)", "(s1,t2)"]),
        ix(&net, &["2", "(s2,v2)", "(s2,t1)"]),
        ix(&net, &["3", "(s3,v1)", "(s3,v2)"]),
        ix(&net, &["(v2,v4)", "(v4,t2)"]),
        ix(&net, &["(v1,v3)", "(v3,t1)", "(v3,t3)"]),
        ix(&net, &["4"]),
        ix(&net, &["5"]),
        ix(&net, &["(v4,t3)", "6"]),
    ];
    let dec = RegionDecomposition::from_link_sets(&net, &sets).unwrap();
    assert!(matches!(check_basic(&dec, &net).unwrap(), Some(BasicViolation::NotInClosed { .. })));
}

#[test]
fn all_singletons_have_single_parent_regions() {
    let net = fix_a();
    let sets: Vec<Vec<usize>> = (0..net.links().len()).map(|e| vec![e]).collect();
    let dec = RegionDecomposition::from_link_sets(&net, &sets).unwrap();
    assert!(matches!(check_basic(&dec, &net).unwrap(), Some(BasicViolation::FewParents { parents: 1, .. })));
}

#[test]
fn fix_a_region_graph_parents() {
    let net = fix_a();
    let dec = basic_region_decomposition(&net).unwrap();
    let rg = build_region_graph(&dec, &net).unwrap();
    let p1 = region_with(&dec, &net, "(v2,v4)");
    let p2 = region_with(&dec, &net, "(v1,v3)");
    assert_eq!(parents_by_link(&dec, &rg, &net, "(v1,v3)"), set(&["S1", "S3"]));
    assert_eq!(parents_by_link(&dec, &rg, &net, "(v2,v4)"), set(&["S2", "S3"]));
    assert_eq!(parents_by_link(&dec, &rg, &net, "4"), set(&["S2", &p2]));
    assert_eq!(parents_by_link(&dec, &rg, &net, "5"), set(&["S1", &p1]));
    assert_eq!(parents_by_link(&dec, &rg, &net, "6"), set(&[&p1, &p2]));
    assert_eq!(normalize_terminals(&rg).unwrap(), rg);
}

#[test]
fn fix_b_region_graph_parents() {
    let net = fix_b();
    let dec = basic_region_decomposition(&net).unwrap();
    let rg = build_region_graph(&dec, &net).unwrap();
    let p1 = region_with(&dec, &net, "(v3,v5)");
    let p2 = region_with(&dec, &net, "(v1,v4)");
    let p3 = region_with(&dec, &net, "(v2,t1)");
    assert_eq!(parents_by_link(&dec, &rg, &net, "4"), set(&["S1", &p2, &p3]));
    assert_eq!(parents_by_link(&dec, &rg, &net, "5"), set(&["S1", &p1]));
    assert_eq!(parents_by_link(&dec, &rg, &net, "6"), set(&[&p1, &p2]));
}

#[test]
fn two_region_chain_has_single_edge() {
    let specs = vec![
        RegionSpec { id: "S1".into(), role: Role::source(0), links: vec![], leader: None },
        RegionSpec { id: "T1".into(), role: Role::terminal(0), links: vec![], leader: None },
    ];
    let rg = RegionGraph::new(specs, &[(0, 1)]).unwrap();
    assert_eq!(rg.edges(), vec![(0, 1)]);
}

#[test]
fn terminal_reachable_from_another_is_dropped() {
    let specs = ["S1", "S2", "S3", "T1", "T2"]
        .iter()
        .enumerate()
        .map(|(k, id)| RegionSpec {
            id: id.to_string(),
            role: if k < 3 { Role::source(k) } else { Role::terminal(k - 3) },
            links: vec![],
            leader: None,
        })
        .collect();
    let rg = RegionGraph::new(specs, &[(0, 3), (1, 3), (2, 3), (3, 4), (0, 4)]).unwrap();
    let norm = normalize_terminals(&rg).unwrap();
    let ids: Vec<&str> = (0..norm.len()).map(|r| norm.id(r)).collect();
    assert_eq!(ids, ["S1", "S2", "S3", "T1"]);
    assert!(norm.children(norm.index_of("T1").unwrap()).is_empty());
}

/// The region decomposition D listed for the small three-terminal example.
fn g1_dec(net: &Network) -> RegionDecomposition {
    let sets: Vec<Vec<usize>> = [
        &["1", "4", "5"][..],
        &["2", "6", "7"],
        &["3", "8", "9"],
        &["10", "12", "13"],
        &["11", "14", "15", "16"],
        &["17"],
        &["18"],
        &["19"],
        &["20"],
    ]
    .iter()
    .map(|ids| ix(net, ids))
    .collect();
    RegionDecomposition::from_link_sets(net, &sets).unwrap()
}

#[test]
fn listed_solution_lifts_to_links() {
    let net = net(fixtures::G1);
    let dec = g1_dec(&net);
    assert!(is_basic(&dec, &net).unwrap());
    assert_eq!(link_sets(&dec, &net), link_sets(&basic_region_decomposition(&net).unwrap(), &net));
    let rg = build_region_graph(&dec, &net).unwrap();
    let gf = Gf::new(5).unwrap();
    let a23 = gf.add(&alpha(1), &alpha(2));
    let vectors = vec![alpha(0), alpha(1), alpha(2), alpha(0), a23, a23, ALPHA_BAR, ALPHA_BAR, ALPHA_BAR];
    let code = RegionCode { p: 5, vectors: vectors.into_iter().map(Some).collect() };
    assert_eq!(verify_region_code(&rg, &code).unwrap(), Ok(()));
    let links = expand_code(&code, &dec, &net).unwrap();
    assert_eq!(links.vectors.len(), 20);
    assert_eq!(verify_network_code(&net, &links).unwrap(), Ok(()));
}

#[test]
fn coarser_terminal_region_is_infeasible() {
    let net = net(fixtures::G1);
    let sets: Vec<Vec<usize>> = [
        &["1", "4", "5"][..],
        &["2", "6", "7"],
        &["3", "8", "9"],
        &["10", "12", "13"],
        &["11", "14", "15", "16"],
        &["18"],
        &["19"],
        &["17", "20"],
    ]
    .iter()
    .map(|ids| ix(&net, ids))
    .collect();
    let dec = RegionDecomposition::from_link_sets(&net, &sets).unwrap();
    let rg = build_region_graph(&dec, &net).unwrap();
    let t3 = rg.index_of("D8").unwrap();
    let mut ps: Vec<&str> = rg.parents(t3).iter().map(|&u| rg.id(u)).collect();
    ps.sort();
    assert_eq!(ps, ["D3", "D5"]);
    let out = brute_force_feasible(&rg, &[2, 3, 5, 7], OracleConfig::default()).unwrap();
    assert!(matches!(out.outcome, OracleOutcome::NoSolution { .. }));
}

#[test]
fn single_source_region_carries_alpha() {
    let doc = sumnet_core::network::NetworkDoc {
        nodes: ["s1", "s2", "s3", "t"].map(String::from).to_vec(),
        sources: ["s1", "s2", "s3"].map(String::from).to_vec(),
        terminals: vec!["t".into()],
        links: vec![LinkDoc { id: "x".into(), tail: Some("s1".into()), head: Some("t".into()) }],
    };
    let net = Network::from_doc(doc).unwrap();
    let dec = basic_region_decomposition(&net).unwrap();
    let s1 = dec.regions.iter().position(|r| r.id == "S1").unwrap();
    let mut code = RegionCode::empty(5, dec.regions.len());
    for (r, reg) in dec.regions.iter().enumerate() {
        code.set(r, if r == s1 { alpha(0) } else { alpha(reg.role.source.unwrap_or(0)) });
    }
    let links = expand_code(&code, &dec, &net).unwrap();
    for e in dec.regions[s1].links.iter() {
        assert_eq!(links.vectors[*e], Some(alpha(0)));
    }
}

fn canonical_sets(dec: &RegionDecomposition) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = dec.regions.iter().map(|r| r.links.clone()).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_is_order_independent(seed in any::<u64>(), salt in any::<u64>(), relays in 3usize..30) {
        let net = random_network(seed, NetworkParams { terminals: 3, relays, links: 2 * relays }).unwrap();
        let base = basic_region_decomposition(&net).unwrap();
        prop_assert!(is_basic(&base, &net).unwrap());
        for k in 0..10u64 {
            let mix = salt ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let order = topo_order_by(&net, |e| (e as u64 ^ mix).wrapping_mul(0xBF58_476D_1CE4_E5B9)).unwrap();
            let dec = basic_region_decomposition_in(&net, &order).unwrap();
            prop_assert_eq!(canonical_sets(&dec), canonical_sets(&base));
        }
    }

    #[test]
    fn region_graph_is_basic_and_acyclic(seed in any::<u64>(), terminals in 1usize..5) {
        let net = random_network(seed, NetworkParams { terminals, relays: 15, links: 40 }).unwrap();
        let dec = basic_region_decomposition(&net).unwrap();
        let covered: usize = dec.regions.iter().map(|r| r.links.len()).sum();
        prop_assert_eq!(covered, net.links().len());
        let rg = build_region_graph(&dec, &net).unwrap();
        prop_assert!(rg.check_basic().is_ok());
        let pos: Vec<usize> = (0..rg.len()).map(|r| rg.topo_pos(r)).collect();
        for (u, v) in rg.edges() {
            prop_assert!(pos[u] < pos[v]);
        }
        for &s in rg.sources() {
            prop_assert!(rg.parents(s).is_empty());
        }
    }
}
