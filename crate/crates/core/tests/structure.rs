mod common;

use std::collections::BTreeSet;

use common::{names, rg, set};
use proptest::prelude::*;
use sumnet_core::fixtures;
use sumnet_core::regions::RegionGraph;
use sumnet_core::structure::{
    check_connectivity, compute_lambdas, compute_pi, compute_structure, is_terminal_separable, label_omegas,
    super_region, StructureMap,
};
use sumnet_core::verify::random::{random_region_graph, RegionGraphParams};

/// reg(Θ) by naive fixed-point iteration.
fn closure_oracle(g: &RegionGraph, theta: &[usize]) -> BTreeSet<usize> {
    let mut inside: BTreeSet<usize> = theta.iter().copied().collect();
    loop {
        let add: Vec<usize> = (0..g.len())
            .filter(|r| !inside.contains(r))
            .filter(|&r| !g.parents(r).is_empty() && g.parents(r).iter().all(|u| inside.contains(u)))
            .collect();
        if add.is_empty() {
            return inside;
        }
        inside.extend(add);
    }
}

fn reg(g: &RegionGraph, ids: &[&str]) -> BTreeSet<String> {
    names(g, &super_region(g, &g.ix(ids)).unwrap().members)
}

fn omega(g: &RegionGraph, sm: &StructureMap, labels: &[usize]) -> BTreeSet<String> {
    let key: Vec<usize> = labels.iter().map(|j| j - 1).collect();
    names(g, sm.omega.get(&key).map(Vec::as_slice).unwrap_or(&[]))
}

fn lambda(g: &RegionGraph, sm: &StructureMap, labels: &[usize]) -> BTreeSet<String> {
    let key: Vec<usize> = labels.iter().map(|j| j - 1).collect();
    names(g, sm.lambda.get(&key).map(Vec::as_slice).unwrap_or(&[]))
}

fn pair_regs(g: &RegionGraph) -> [BTreeSet<String>; 3] {
    let (regs, _) = compute_pi(g).unwrap();
    regs.map(|v| names(g, &v))
}

#[test]
fn super_regions_of_the_small_graphs() {
    let a = rg(fixtures::RG5A);
    assert_eq!(reg(&a, &["R2", "R3", "R4"]), set(&["R2", "R3", "R4", "Q", "T2", "T3"]));
    let b = rg(fixtures::RG5B);
    assert_eq!(reg(&b, &["R2", "R4"]), set(&["R2", "R4", "Q1", "Q3", "T2"]));
    assert_eq!(reg(&b, &["R2", "R3", "R5"]), set(&["R2", "R3", "R5", "Q2", "Q4", "T3"]));
    let all: Vec<usize> = (0..b.len()).collect();
    assert_eq!(super_region(&b, &all).unwrap().members, all);
    assert!(super_region(&b, &[]).is_err());
}

#[test]
fn rg5a_structure() {
    let g = rg(fixtures::RG5A);
    assert_eq!(pair_regs(&g), [set(&["S1", "S2", "R1", "R4"]), set(&["S1", "S3", "R2"]), set(&["S2", "S3", "R3"])]);
    let sm = compute_structure(&g).unwrap();
    assert_eq!(names(&g, &sm.pi), set(&["S1", "S2", "S3", "R1", "R2", "R3", "R4"]));
    assert_eq!(omega(&g, &sm, &[1]), set(&["T1"]));
    assert_eq!(omega(&g, &sm, &[2]), set(&["T2"]));
    assert_eq!(omega(&g, &sm, &[3]), set(&["T3"]));
    assert_eq!(omega(&g, &sm, &[2, 3]), set(&["Q"]));
    assert_eq!(sm.omega.len(), 4);
    assert_eq!(lambda(&g, &sm, &[1]), set(&["R1", "R3"]));
    assert_eq!(lambda(&g, &sm, &[2]), set(&["R4"]));
    assert_eq!(lambda(&g, &sm, &[3]), set(&["R3"]));
    assert_eq!(lambda(&g, &sm, &[2, 3]), set(&["R2", "R3"]));
    assert!(!is_terminal_separable(&sm));
}

#[test]
fn rg5b_structure() {
    let g = rg(fixtures::RG5B);
    assert_eq!(
        pair_regs(&g),
        [set(&["S1", "S2", "R1", "R4"]), set(&["S1", "S3", "R2"]), set(&["S2", "S3", "R3", "R5"])]
    );
    let sm = compute_structure(&g).unwrap();
    assert_eq!(names(&g, &sm.pi), set(&["S1", "S2", "S3", "R1", "R2", "R3", "R4", "R5"]));
    assert_eq!(omega(&g, &sm, &[1]), set(&["T1"]));
    assert_eq!(omega(&g, &sm, &[2]), set(&["Q1", "Q3", "T2"]));
    assert_eq!(omega(&g, &sm, &[3]), set(&["Q2", "Q4", "T3"]));
    assert_eq!(sm.omega.len(), 3);
    assert_eq!(lambda(&g, &sm, &[1]), set(&["S1", "R5"]));
    assert_eq!(lambda(&g, &sm, &[2]), set(&["R2", "R4"]));
    assert_eq!(lambda(&g, &sm, &[3]), set(&["R2", "R3", "R5"]));
    assert!(is_terminal_separable(&sm));
}

#[test]
fn rg7_structure() {
    let g = rg(fixtures::RG7);
    assert_eq!(
        pair_regs(&g),
        [
            set(&["S1", "S2", "R1", "R2", "R6", "R7"]),
            set(&["S1", "S3", "R3", "R8"]),
            set(&["S2", "S3", "R4", "R5", "R9"]),
        ]
    );
    let sm = compute_structure(&g).unwrap();
    let pi: Vec<String> = ["S1", "S2", "S3"].iter().map(|s| s.to_string()).chain((1..=9).map(|k| format!("R{k}"))).collect();
    assert_eq!(names(&g, &sm.pi), pi.into_iter().collect());
    for j in 1..=6 {
        assert_eq!(omega(&g, &sm, &[j]), set(&[&format!("T{j}")]));
    }
    assert_eq!(sm.omega.len(), 6);
    let expected = [["R2", "R5"], ["R1", "R5"], ["R7", "R8"], ["S3", "R7"], ["R3", "R6"], ["R7", "R9"]];
    for (j, lam) in expected.iter().enumerate() {
        assert_eq!(lambda(&g, &sm, &[j + 1]), set(lam), "Λ_{}", j + 1);
    }
    assert!(is_terminal_separable(&sm));
}

#[test]
fn rg8a_structure() {
    let g = rg(fixtures::RG8A);
    assert_eq!(pair_regs(&g), [set(&["S1", "S2", "P2", "P3"]), set(&["S1", "S3"]), set(&["S2", "S3", "P1"])]);
    let sm = compute_structure(&g).unwrap();
    for j in 1..=3 {
        assert_eq!(omega(&g, &sm, &[j]), set(&[&format!("T{j}")]));
    }
    assert!(is_terminal_separable(&sm));
    assert_eq!(lambda(&g, &sm, &[1]), set(&["S1", "P1"]));
    assert_eq!(lambda(&g, &sm, &[2]), set(&["P1", "P2"]));
    assert_eq!(lambda(&g, &sm, &[3]), set(&["S3", "P3"]));
}

#[test]
fn rg8b_structure() {
    let g = rg(fixtures::RG8B);
    assert_eq!(
        pair_regs(&g),
        [set(&["S1", "S2", "P2", "P3"]), set(&["S1", "S3", "P4", "P5"]), set(&["S2", "S3", "P1"])]
    );
    let sm = compute_structure(&g).unwrap();
    assert!(is_terminal_separable(&sm));
    assert_eq!(lambda(&g, &sm, &[1]), set(&["S1", "P1"]));
    assert_eq!(lambda(&g, &sm, &[2]), set(&["P1", "P2"]));
    assert_eq!(lambda(&g, &sm, &[3]), set(&["P3", "P4", "P5"]));
}

#[test]
fn staged_operations_agree_with_the_full_map() {
    for src in [fixtures::RG5A, fixtures::RG5B, fixtures::RG7, fixtures::RG8A, fixtures::RG8B] {
        let g = rg(src);
        let sm = compute_structure(&g).unwrap();
        let (_, pi) = compute_pi(&g).unwrap();
        let om = label_omegas(&g, &sm.in_pi, &sm.terminals).unwrap();
        assert_eq!(pi, sm.pi);
        assert_eq!(om, sm.omega);
        assert_eq!(compute_lambdas(&g, &sm.in_pi, &om), sm.lambda);
    }
}

#[test]
fn fixtures_are_connected() {
    for src in [fixtures::RG5A, fixtures::RG5B, fixtures::RG7, fixtures::RG8A, fixtures::RG8B] {
        let rep = check_connectivity(&rg(src)).unwrap();
        assert!(rep.connected());
        assert!(rep.pi_matches_reachability);
    }
}

#[test]
fn missing_edge_disconnects() {
    let mut doc = rg(fixtures::RG8B).to_doc();
    doc.edges.retain(|(a, b)| !(a == "S1" && b == "T1"));
    // Without S1 -> T1, T1 is fed only by P1, which S1 does not reach.
    let g = RegionGraph::from_doc(doc).unwrap();
    assert_eq!(check_connectivity(&g).unwrap().disconnected, vec![(0, 0)]);
}

fn sample(seed: u64) -> RegionGraph {
    let coding = 1 + (seed % 7) as usize;
    let terminals = 1 + (seed % 4) as usize;
    random_region_graph(seed, RegionGraphParams { terminals, coding, density: 0.3 }).unwrap()
}

fn draw(g: &RegionGraph, bits: u64) -> Vec<usize> {
    let v: Vec<usize> = (0..g.len()).filter(|r| bits >> (r % 64) & 1 == 1).collect();
    if v.is_empty() {
        vec![(bits as usize) % g.len()]
    } else {
        v
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn super_region_matches_fixed_point(seed in any::<u64>(), bits in any::<u64>()) {
        let g = sample(seed);
        let theta = draw(&g, bits);
        let got: BTreeSet<usize> = super_region(&g, &theta).unwrap().members.into_iter().collect();
        prop_assert_eq!(got, closure_oracle(&g, &theta));
    }

    #[test]
    fn intersection_of_super_regions(seed in any::<u64>(), b1 in any::<u64>(), b2 in any::<u64>()) {
        let g = sample(seed);
        let (t1, t2) = (draw(&g, b1), draw(&g, b2));
        let r1 = closure_oracle(&g, &t1);
        let r2 = closure_oracle(&g, &t2);
        let lhs: BTreeSet<usize> = r1.intersection(&r2).copied().collect();
        let mut theta: Vec<usize> = t2.iter().copied().filter(|r| r1.contains(r)).collect();
        theta.extend(t1.iter().copied().filter(|r| r2.contains(r)));
        theta.sort_unstable();
        theta.dedup();
        let rhs: BTreeSet<usize> = if theta.is_empty() {
            BTreeSet::new()
        } else {
            super_region(&g, &theta).unwrap().members.into_iter().collect()
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn super_regions_are_monotone(seed in any::<u64>(), b1 in any::<u64>(), b2 in any::<u64>()) {
        let g = sample(seed);
        let t2 = draw(&g, b2);
        let r2 = closure_oracle(&g, &t2);
        let t1: Vec<usize> = draw(&g, b1).into_iter().filter(|r| r2.contains(r)).collect();
        prop_assume!(!t1.is_empty());
        let r1 = super_region(&g, &t1).unwrap();
        prop_assert!(r1.members.iter().all(|r| r2.contains(r)));
    }

    #[test]
    fn pi_and_omegas_partition_the_graph(seed in any::<u64>()) {
        let g = sample(seed);
        let sm = compute_structure(&g).unwrap();
        let mut count = vec![0usize; g.len()];
        for &r in &sm.pi {
            count[r] += 1;
        }
        for members in sm.omega.values() {
            for &r in members {
                count[r] += 1;
            }
        }
        prop_assert!(count.iter().all(|&c| c == 1));
        for &(j, t) in &sm.terminals {
            prop_assert!(sm.omega[&vec![j]].contains(&t));
        }
        for (key, lam) in &sm.lambda {
            for &q in lam {
                prop_assert!(sm.in_pi[q]);
                prop_assert!(g.children(q).iter().any(|c| sm.omega[key].contains(c)));
            }
        }
        // Outside Π exactly when every source reaches the region.
        let masks = g.source_masks();
        for r in 0..g.len() {
            prop_assert_eq!(!sm.in_pi[r], masks[r] == 0b111);
        }
        prop_assert!(check_connectivity(&g).unwrap().pi_matches_reachability);
    }

    #[test]
    fn separable_lambda_shape(seed in any::<u64>()) {
        let g = sample(seed);
        let sm = compute_structure(&g).unwrap();
        prop_assume!(is_terminal_separable(&sm));
        for (j, lam) in sm.singleton_lambdas() {
            prop_assert!(lam.len() >= 2, "Λ_{} = {:?}", j + 1, lam);
            for q in 0..3 {
                prop_assert!(!lam.iter().all(|&r| sm.in_pair[r][q]));
            }
        }
    }
}
