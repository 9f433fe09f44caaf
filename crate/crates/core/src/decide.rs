//! The decision pipeline: connectivity, structure, partitioning, code
//! synthesis, the three-terminal pattern detector and the reductions for
//! graphs that are not terminal-separable.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::code::{LinkCode, RegionCode};
use crate::codegen::{assemble, choose_field, complete_code, extend_to_omega, route_sum, weak_code_on_pi};
use crate::error::{Error, Result};
use crate::gf::{alpha, next_prime, Gf, Vec3};
use crate::network::Network;
use crate::partition::{
    is_compatible, lambda_covered, normal_partition, replay_contractions, ConnectReason, ContractionStep,
    Incompatibility, PiPartition,
};
use crate::regions::{
    basic_region_decomposition, build_region_graph, expand_code, normalize_with_origin, RegionDecomposition,
    RegionGraph, Role,
};
use crate::structure::{
    check_connectivity, closure_mask, compute_structure, is_terminal_separable, pair_index, StructureMap, PAIRS,
};
use crate::verify::{verify_network_code, verify_pi_code, verify_region_code};

/// The three-terminal infeasibility pattern under a renaming.
///
/// `sources[0..3]` and `terminals[0..3]` play the roles of S_1..S_3 and
/// T_1..T_3: Λ of `terminals[0]` is {S_1, P_1}, Λ of `terminals[1]` is
/// {P_1, P_2} and Λ of `terminals[2]` lies in reg(S_1, P_2) ∪ reg(S_1, S_3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirWitness {
    pub sources: [usize; 3],
    /// Terminal labels.
    pub terminals: [usize; 3],
    pub p1: usize,
    pub p2: usize,
}

/// Certificate of infeasibility. Region indices refer to the graph the
/// verdict was computed for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Disconnected { source: usize, terminal: usize },
    MergedSources { sources: (usize, usize), trace: Vec<ContractionStep> },
    LambdaCovered { terminal: usize, sources: (usize, usize) },
    Cir(CirWitness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible { code: RegionCode },
    Infeasible { witness: Witness, supporting: Option<Witness> },
    Unknown { reason: String },
}

impl Verdict {
    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Feasible { .. } => "feasible",
            Verdict::Infeasible { .. } => "infeasible",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Verdict::Infeasible { .. })
    }
}

/// A verdict with the steps that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub trace: Vec<String>,
    /// Final partition of Π, when one was computed.
    pub partition: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecideOptions {
    /// Lower bound on the field size.
    pub field_min: u64,
}

/// Which explicit sufficient condition matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimpleCondition {
    /// Distinct two-element Λ sets are pairwise disjoint.
    DisjointPairs,
    /// No Λ_j contains a source.
    AvoidSources,
    /// Every Λ_j meets reg° of one source pair.
    CommonInterior { pair: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleCase {
    pub condition: SimpleCondition,
    pub partition: PiPartition,
}

fn lambda_sets(sm: &StructureMap) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = sm.singleton_lambdas().into_iter().map(|(_, l)| l.to_vec()).collect();
    sets.sort();
    sets.dedup();
    sets
}

/// Fast sufficient conditions for feasibility of a terminal-separable graph,
/// each with its explicit compatible partition. Two-terminal instances (and
/// instances with at most two distinct Λ sets) always match one of them.
pub fn simple_case_check(sm: &StructureMap, rg: &RegionGraph) -> Result<Option<SimpleCase>> {
    if !is_terminal_separable(sm) {
        return Ok(None);
    }
    let sets = lambda_sets(sm);
    let found = simple_partition(sm, rg, &sets)?;
    if found.is_none() && (sm.n() <= 2 || sets.len() <= 2) {
        return Err(Error::Internal("a two-terminal instance matched no explicit condition".into()));
    }
    if let Some(case) = &found {
        if let Some(bad) = is_compatible(&case.partition, sm, rg) {
            return Err(Error::Internal(format!("explicit partition for {:?} is incompatible: {bad:?}", case.condition)));
        }
    }
    Ok(found)
}

fn simple_partition(sm: &StructureMap, rg: &RegionGraph, sets: &[Vec<usize>]) -> Result<Option<SimpleCase>> {
    let pairs: Vec<&Vec<usize>> = sets.iter().filter(|s| s.len() == 2).collect();
    let disjoint = pairs.iter().enumerate().all(|(x, a)| pairs[x + 1..].iter().all(|b| a.iter().all(|r| !b.contains(r))));
    if disjoint {
        let mut classes: Vec<Vec<usize>> = pairs.iter().map(|s| s.to_vec()).collect();
        let used: Vec<usize> = classes.iter().flatten().copied().collect();
        classes.extend(sm.pi.iter().filter(|r| !used.contains(r)).map(|&r| vec![r]));
        let partition = PiPartition::new(sm, rg.len(), classes)?;
        return Ok(Some(SimpleCase { condition: SimpleCondition::DisjointPairs, partition }));
    }
    if sets.iter().all(|s| s.iter().all(|r| !sm.sources.contains(r))) {
        let rest: Vec<usize> = sm.pi.iter().copied().filter(|r| !sm.sources.contains(r)).collect();
        let mut classes: Vec<Vec<usize>> = sm.sources.iter().map(|&s| vec![s]).collect();
        if !rest.is_empty() {
            classes.push(rest);
        }
        let partition = PiPartition::new(sm, rg.len(), classes)?;
        return Ok(Some(SimpleCase { condition: SimpleCondition::AvoidSources, partition }));
    }
    for q in 0..3 {
        let interior = sm.pair_interior(q);
        if sets.iter().all(|s| s.iter().any(|r| interior.contains(r))) {
            let (a, b) = PAIRS[q];
            let (sa, sb) = (sm.sources[a], sm.sources[b]);
            let big: Vec<usize> = sm.pi.iter().copied().filter(|&r| r != sa && r != sb).collect();
            let partition = PiPartition::new(sm, rg.len(), vec![big, vec![sa], vec![sb]])?;
            return Ok(Some(SimpleCase { condition: SimpleCondition::CommonInterior { pair: q }, partition }));
        }
    }
    Ok(None)
}

/// Searches every renaming of sources and terminals for the three-terminal
/// infeasibility pattern; returns the first match in lexicographic order of
/// (source renaming, terminal renaming).
pub fn detect_cir(sm: &StructureMap, rg: &RegionGraph) -> Result<Option<CirWitness>> {
    if sm.n() != 3 || !is_terminal_separable(sm) {
        return Err(Error::Precondition("pattern search needs a terminal-separable graph with three terminals".into()));
    }
    let labels: Vec<usize> = sm.terminals.iter().map(|&(j, _)| j).collect();
    for sigma in permutations3() {
        for tau in permutations3() {
            let w = CirWitness {
                sources: sigma,
                terminals: [labels[tau[0]], labels[tau[1]], labels[tau[2]]],
                p1: 0,
                p2: 0,
            };
            if let Some((p1, p2)) = match_cir(sm, rg, &w) {
                return Ok(Some(CirWitness { p1, p2, ..w }));
            }
        }
    }
    Ok(None)
}

fn permutations3() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// P_1 and P_2 for a fixed renaming, if the pattern holds.
fn match_cir(sm: &StructureMap, rg: &RegionGraph, w: &CirWitness) -> Option<(usize, usize)> {
    let [a, b, c] = w.sources;
    let s1 = sm.sources[a];
    let other = |set: &[usize], x: usize| -> Option<usize> {
        match set {
            [u, v] if *u == x => Some(*v),
            [u, v] if *v == x => Some(*u),
            _ => None,
        }
    };
    let p1 = other(sm.lambda_of(w.terminals[0]), s1)?;
    let p2 = other(sm.lambda_of(w.terminals[1]), p1)?;
    if p1 == s1 || p2 == p1 {
        return None;
    }
    let interior = |r: usize, x: usize, y: usize| sm.in_pair[r][pair_index(x, y)] && !sm.sources.contains(&r);
    if !interior(p1, b, c) || !interior(p2, a, b) {
        return None;
    }
    let near = closure_mask(rg, &[s1, p2]);
    let q13 = pair_index(a, c);
    let lam3 = sm.lambda_of(w.terminals[2]);
    if lam3.iter().all(|&r| near[r] || sm.in_pair[r][q13]) {
        Some((p1, p2))
    } else {
        None
    }
}

enum Core {
    Feasible(RegionCode),
    Infeasible(Witness, Option<Witness>),
    Unknown(String),
}

struct Outcome {
    core: Core,
    partition: Option<Vec<Vec<usize>>>,
}

/// Decides feasibility of a basic three-source region graph. Feasible
/// verdicts carry a code that passed [`verify_region_code`].
pub fn decide_region_graph(rg: &RegionGraph, opts: DecideOptions) -> Result<Decision> {
    if rg.num_sources() != 3 {
        return Err(Error::UnsupportedSources(rg.num_sources()));
    }
    rg.check_basic()?;
    let (g, origin) = normalize_with_origin(rg)?;
    let mut trace = Vec::new();
    if g.len() < rg.len() {
        trace.push(format!("normalized: kept {} of {} regions", g.len(), rg.len()));
    }
    let out = solve_core(&g, opts, &mut trace)?;
    let map = |r: usize| origin[r];
    let verdict = match out.core {
        Core::Feasible(code) => {
            let code = lift(rg, &origin, &code)?;
            check_code(rg, &code)?;
            Verdict::Feasible { code }
        }
        Core::Infeasible(w, s) => Verdict::Infeasible { witness: remap_witness(w, &map), supporting: s.map(|s| remap_witness(s, &map)) },
        Core::Unknown(reason) => Verdict::Unknown { reason },
    };
    let partition = out.partition.map(|cs| cs.into_iter().map(|c| c.into_iter().map(map).collect()).collect());
    Ok(Decision { verdict, trace, partition })
}

fn check_code(rg: &RegionGraph, code: &RegionCode) -> Result<()> {
    verify_region_code(rg, code)?.map_err(|v| Error::Internal(format!("synthesized code fails verification: {v}")))
}

/// Copies a code from a restricted graph back to `rg` and completes it.
fn lift(rg: &RegionGraph, origin: &[usize], code: &RegionCode) -> Result<RegionCode> {
    let mut out = RegionCode::empty(code.p, rg.len());
    for (r, v) in code.vectors.iter().enumerate() {
        if let Some(v) = v {
            out.set(origin[r], *v);
        }
    }
    complete_code(rg, &mut out)?;
    Ok(out)
}

fn remap_witness(w: Witness, map: &impl Fn(usize) -> usize) -> Witness {
    match w {
        Witness::MergedSources { sources, trace } => Witness::MergedSources {
            sources,
            trace: trace
                .into_iter()
                .map(|s| ContractionStep {
                    a: s.a.into_iter().map(map).collect(),
                    b: s.b.into_iter().map(map).collect(),
                    reason: match s.reason {
                        ConnectReason::Closure { pair, region } => ConnectReason::Closure { pair, region: map(region) },
                        other => other,
                    },
                })
                .collect(),
        },
        Witness::Cir(c) => Witness::Cir(CirWitness { p1: map(c.p1), p2: map(c.p2), ..c }),
        other => other,
    }
}

/// Pipeline on a normalized graph.
fn solve_core(g: &RegionGraph, opts: DecideOptions, trace: &mut Vec<String>) -> Result<Outcome> {
    let conn = check_connectivity(g)?;
    if let Some(&(source, terminal)) = conn.disconnected.first() {
        trace.push(format!("source {} does not reach terminal {}", source + 1, terminal + 1));
        return Ok(Outcome { core: Core::Infeasible(Witness::Disconnected { source, terminal }, None), partition: None });
    }
    let sm = compute_structure(g)?;
    if is_terminal_separable(&sm) {
        trace.push(format!("terminal-separable with {} terminal regions, |Π| = {}", sm.n(), sm.pi.len()));
        decide_separable(g, &sm, opts, trace)
    } else {
        trace.push("not terminal-separable".into());
        Ok(Outcome { core: reduce(g, &sm, opts, trace)?, partition: None })
    }
}

fn decide_separable(g: &RegionGraph, sm: &StructureMap, opts: DecideOptions, trace: &mut Vec<String>) -> Result<Outcome> {
    let np = normal_partition(sm, g)?;
    trace.push(format!("partitioning: {} contractions, {} classes", np.trace.len(), np.partition.len()));
    let cir = if sm.n() == 3 { detect_cir(sm, g)? } else { None };
    let simple = simple_case_check(sm, g)?;
    if let Some(case) = &simple {
        trace.push(format!("explicit sufficient condition holds: {:?}", case.condition));
    }
    let classes = np.partition.classes().to_vec();
    let witness = if let Some(m) = np.merged_sources {
        replay_contractions(sm, g, &np.trace)?;
        Some(Witness::MergedSources { sources: m, trace: np.trace.clone() })
    } else if let Some(bad) = is_compatible(&np.partition, sm, g) {
        match bad {
            Incompatibility::LambdaCovered { terminal, sources } => Some(Witness::LambdaCovered { terminal, sources }),
            other => return Err(Error::Internal(format!("partitioning stopped at an incompatible partition: {other:?}"))),
        }
    } else {
        debug_assert!(lambda_covered(&np.partition, sm).is_none());
        None
    };
    if sm.n() == 3 && witness.is_some() != cir.is_some() {
        return Err(Error::Internal(format!(
            "pattern detector ({}) disagrees with the partition verdict ({})",
            if cir.is_some() { "match" } else { "no match" },
            if witness.is_some() { "infeasible" } else { "feasible" }
        )));
    }
    if let Some(w) = witness {
        if simple.is_some() {
            return Err(Error::Internal("explicit sufficient condition holds on an infeasible graph".into()));
        }
        trace.push("partition incompatible".into());
        return Ok(Outcome { core: Core::Infeasible(w, cir.map(Witness::Cir)), partition: Some(classes) });
    }
    trace.push("partition compatible".into());
    let code = synthesize_separable(g, sm, &np.partition, opts, trace)?;
    Ok(Outcome { core: Core::Feasible(code), partition: Some(classes) })
}

/// Weak code on Π from a compatible partition, extended through every Ω_j.
pub fn synthesize_separable(
    g: &RegionGraph,
    sm: &StructureMap,
    partition: &PiPartition,
    opts: DecideOptions,
    trace: &mut Vec<String>,
) -> Result<RegionCode> {
    let family = choose_field(partition.len().max(3), opts.field_min)?;
    trace.push(format!("field GF({}) for {} family sets", family.p, family.k()));
    let pi_code = weak_code_on_pi(partition, &family, sm, g)?;
    verify_pi_code(sm, g, &pi_code)?.map_err(|v| Error::Internal(format!("code on Π fails verification: {v}")))?;
    let mut parts = vec![pi_code.clone()];
    for &(j, t) in &sm.terminals {
        let omega = sm.omega.get(&vec![j]).ok_or_else(|| Error::Internal(format!("Ω of terminal {} is empty", j + 1)))?;
        parts.push(extend_to_omega(g, &pi_code, omega, sm.lambda_of(j), t)?);
    }
    let code = assemble(g.len(), family.p, &parts)?;
    check_code(g, &code)?;
    Ok(code)
}

/// Handles graphs with some Ω_I, |I| > 1: routes the sum into a region that
/// reaches every terminal when one exists, otherwise turns representatives
/// of the largest Ω_I into terminals and recurses.
pub fn reduce_non_separable(rg: &RegionGraph, opts: DecideOptions) -> Result<Decision> {
    let (g, origin) = normalize_with_origin(rg)?;
    let sm = compute_structure(&g)?;
    if is_terminal_separable(&sm) {
        return Err(Error::Precondition("graph is terminal-separable".into()));
    }
    let mut trace = Vec::new();
    let verdict = match reduce(&g, &sm, opts, &mut trace)? {
        Core::Feasible(code) => {
            let code = lift(rg, &origin, &code)?;
            check_code(rg, &code)?;
            Verdict::Feasible { code }
        }
        Core::Unknown(reason) => Verdict::Unknown { reason },
        Core::Infeasible(..) => return Err(Error::Internal("reduction produced an infeasibility witness".into())),
    };
    Ok(Decision { verdict, trace, partition: None })
}

fn reduce(g: &RegionGraph, sm: &StructureMap, opts: DecideOptions, trace: &mut Vec<String>) -> Result<Core> {
    let n = sm.n();
    let all: Vec<usize> = sm.terminals.iter().map(|&(j, _)| j).collect();
    let earliest = |members: &[usize]| *members.iter().min_by_key(|&&r| g.topo_pos(r)).expect("Ω_I is nonempty");
    if let Some(members) = sm.omega.get(&all) {
        let p = earliest(members);
        trace.push(format!("routing the sum to {}, which reaches every terminal", g.id(p)));
        return Ok(Core::Feasible(route_to_common(g, p, opts)?));
    }
    let multi: Vec<&Vec<usize>> = sm.omega.keys().filter(|k| k.len() > 1).collect();
    let chosen: Vec<&Vec<usize>> = if n <= 3 {
        let best = multi.iter().copied().max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a))).expect("some Ω_I with |I| > 1");
        vec![best]
    } else {
        multi.iter().copied().filter(|k| !multi.iter().any(|o| o.len() > k.len() && k.iter().all(|j| o.contains(j)))).collect()
    };
    let reps: Vec<(usize, &Vec<usize>)> = chosen.iter().map(|k| (earliest(&sm.omega[*k]), *k)).collect();
    let mut roles: Vec<Role> = (0..g.len()).map(|r| g.role(r).clone()).collect();
    let covered: Vec<usize> = reps.iter().flat_map(|(_, k)| k.iter().copied()).collect();
    for &(j, t) in &sm.terminals {
        if covered.contains(&j) {
            roles[t] = Role::coding();
        }
    }
    let fresh = g.terminal_labels().iter().map(|&(j, _)| j).max().unwrap_or(0) + 1;
    for (k, &(r, key)) in reps.iter().enumerate() {
        roles[r] = Role::terminal(fresh + k);
        let names: Vec<String> = key.iter().map(|j| (j + 1).to_string()).collect();
        trace.push(format!("{} stands in for terminals {{{}}}", g.id(r), names.join(",")));
    }
    let cut: Vec<usize> = reps.iter().map(|&(r, _)| r).collect();
    let rewired = g.rewired(roles, &cut)?;
    let targets: Vec<usize> = rewired.terminal_regions().into_iter().map(|(_, r)| r).collect();
    let reach = rewired.reach_sets(&targets);
    let keep: Vec<bool> = (0..g.len()).map(|r| rewired.role(r).is_source() || !reach[r].is_empty()).collect();
    let (trimmed, o1) = rewired.restrict(&keep)?;
    let (reduced, o2) = normalize_with_origin(&trimmed)?;
    let origin: Vec<usize> = o2.iter().map(|&r| o1[r]).collect();
    trace.push(format!("reduced graph: {} regions, {} terminal regions", reduced.len(), reduced.terminal_regions().len()));
    let inner = solve_core(&reduced, opts, trace)?;
    match inner.core {
        Core::Feasible(code) => {
            let code = lift(g, &origin, &code)?;
            check_code(g, &code)?;
            Ok(Core::Feasible(code))
        }
        _ if n <= 3 => Err(Error::Internal("reduction of a graph with at most three terminals failed".into())),
        Core::Unknown(reason) => Ok(Core::Unknown(reason)),
        Core::Infeasible(..) => Ok(Core::Unknown("reduction incomplete for n>3".into())),
    }
}

/// Sends α_1 + α_2 + α_3 from the sources into `p` through its ancestors,
/// then completes the code downstream.
fn route_to_common(g: &RegionGraph, p: usize, opts: DecideOptions) -> Result<RegionCode> {
    let field = next_prime(opts.field_min.max(5));
    let gf = Gf::new(field)?;
    let mut allowed = vec![false; g.len()];
    allowed[p] = true;
    let mut stack = vec![p];
    while let Some(r) = stack.pop() {
        for &u in g.parents(r) {
            if !allowed[u] && !g.role(u).is_source() {
                allowed[u] = true;
                stack.push(u);
            }
        }
    }
    let inputs: Vec<(usize, Vec3)> = (0..3).map(|i| (g.source(i), alpha(i))).collect();
    let mut code = RegionCode::empty(field, g.len());
    for i in 0..3 {
        code.set(g.source(i), alpha(i));
    }
    for (r, v) in route_sum(g, &gf, &inputs, &allowed, p)? {
        code.set(r, v);
    }
    complete_code(g, &mut code)?;
    check_code(g, &code)?;
    Ok(code)
}

/// Result of [`solve_network`].
#[derive(Clone, Debug)]
pub struct NetworkDecision {
    pub decomposition: RegionDecomposition,
    pub region_graph: RegionGraph,
    pub decision: Decision,
    pub link_code: Option<LinkCode>,
}

/// Decomposes a network, decides its region graph and, when feasible,
/// expands the region code to a verified code on links. For three-terminal
/// infeasible graphs the pattern witness is reported first.
pub fn solve_network(net: &Network, opts: DecideOptions) -> Result<NetworkDecision> {
    if net.num_sources() != 3 {
        return Err(Error::UnsupportedSources(net.num_sources()));
    }
    let dec = basic_region_decomposition(net)?;
    let rg = build_region_graph(&dec, net)?;
    let mut decision = decide_region_graph(&rg, opts)?;
    if let Verdict::Infeasible { witness, supporting: Some(Witness::Cir(c)) } = &decision.verdict {
        decision.verdict = Verdict::Infeasible { witness: Witness::Cir(c.clone()), supporting: Some(witness.clone()) };
    }
    let link_code = match &decision.verdict {
        Verdict::Feasible { code } => {
            let lc = expand_code(code, &dec, net)?;
            verify_network_code(net, &lc)?
                .map_err(|v| Error::Internal(format!("expanded code fails link verification: {v}")))?;
            Some(lc)
        }
        _ => None,
    };
    Ok(NetworkDecision { decomposition: dec, region_graph: rg, decision, link_code })
}

/// Re-derives a witness from scratch on `rg` (indices as in `rg`).
pub fn check_witness(rg: &RegionGraph, w: &Witness) -> Result<bool> {
    let (g, origin) = normalize_with_origin(rg)?;
    let mut back = vec![usize::MAX; rg.len()];
    for (k, &r) in origin.iter().enumerate() {
        back[r] = k;
    }
    let to_g = |r: usize| back.get(r).copied().filter(|&x| x != usize::MAX);
    match w {
        Witness::Disconnected { source, terminal } => {
            let conn = check_connectivity(&g)?;
            Ok(conn.disconnected.contains(&(*source, *terminal)))
        }
        Witness::MergedSources { sources, trace } => {
            let sm = compute_structure(&g)?;
            let mut steps = Vec::with_capacity(trace.len());
            for s in trace {
                let conv = |v: &[usize]| v.iter().map(|&r| to_g(r)).collect::<Option<Vec<usize>>>();
                let (Some(a), Some(b)) = (conv(&s.a), conv(&s.b)) else {
                    return Ok(false);
                };
                let reason = match &s.reason {
                    ConnectReason::Closure { pair, region } => match to_g(*region) {
                        Some(region) => ConnectReason::Closure { pair: *pair, region },
                        None => return Ok(false),
                    },
                    other => other.clone(),
                };
                steps.push(ContractionStep { a, b, reason });
            }
            match replay_contractions(&sm, &g, &steps) {
                Ok(p) => Ok(p.source_class(&sm, sources.0) == p.source_class(&sm, sources.1)),
                Err(_) => Ok(false),
            }
        }
        Witness::LambdaCovered { terminal, sources } => {
            let sm = compute_structure(&g)?;
            let np = normal_partition(&sm, &g)?;
            if np.merged_sources.is_some() {
                return Ok(false);
            }
            Ok(lambda_covered(&np.partition, &sm) == Some((*terminal, *sources)))
        }
        Witness::Cir(c) => {
            let sm = compute_structure(&g)?;
            if sm.n() != 3 || !is_terminal_separable(&sm) {
                return Ok(false);
            }
            let (Some(p1), Some(p2)) = (to_g(c.p1), to_g(c.p2)) else {
                return Ok(false);
            };
            Ok(match_cir(&sm, &g, c) == Some((p1, p2)))
        }
    }
}

fn ids(rg: &RegionGraph, v: &[usize]) -> Vec<String> {
    v.iter().map(|&r| rg.id(r).to_string()).collect()
}

/// JSON form of a witness; labels are 1-based and regions are named by id.
pub fn witness_doc(rg: &RegionGraph, w: &Witness) -> Value {
    match w {
        Witness::Disconnected { source, terminal } => {
            json!({"kind": "disconnected", "source": source + 1, "terminal": terminal + 1})
        }
        Witness::MergedSources { sources, trace } => json!({
            "kind": "merged_sources",
            "sources": [format!("S{}", sources.0 + 1), format!("S{}", sources.1 + 1)],
            "trace": trace.iter().map(|s| json!({
                "merge": [ids(rg, &s.a), ids(rg, &s.b)],
                "reason": match &s.reason {
                    ConnectReason::Lambda { terminal } => json!({"lambda": terminal + 1}),
                    ConnectReason::Closure { pair, region } => {
                        let (a, b) = PAIRS[*pair];
                        json!({"pair": [a + 1, b + 1], "shared": rg.id(*region)})
                    }
                },
            })).collect::<Vec<_>>(),
        }),
        Witness::LambdaCovered { terminal, sources } => json!({
            "kind": "lambda_covered",
            "terminal": terminal + 1,
            "sources": [sources.0 + 1, sources.1 + 1],
        }),
        Witness::Cir(c) => {
            let naming: BTreeMap<String, String> = (0..3)
                .flat_map(|k| {
                    [
                        (format!("S{}", k + 1), rg.id(rg.source(c.sources[k])).to_string()),
                        (format!("T{}", k + 1), format!("terminal {}", c.terminals[k] + 1)),
                    ]
                })
                .collect();
            json!({
                "kind": "cir",
                "p1": rg.id(c.p1),
                "p2": rg.id(c.p2),
                "lead_p1": rg.leader(c.p1),
                "lead_p2": rg.leader(c.p2),
                "naming": naming,
            })
        }
    }
}

/// JSON verdict document.
pub fn decision_doc(rg: &RegionGraph, d: &Decision) -> Value {
    let mut doc = json!({"status": d.verdict.status(), "trace": d.trace});
    match &d.verdict {
        Verdict::Feasible { code } => {
            doc["p"] = json!(code.p);
        }
        Verdict::Infeasible { witness, supporting } => {
            doc["witness"] = witness_doc(rg, witness);
            if let Some(s) = supporting {
                doc["supporting"] = witness_doc(rg, s);
            }
        }
        Verdict::Unknown { reason } => {
            doc["reason"] = json!(reason);
        }
    }
    if let Some(classes) = &d.partition {
        doc["partition"] = json!(classes.iter().map(|c| ids(rg, c)).collect::<Vec<_>>());
    }
    doc
}
