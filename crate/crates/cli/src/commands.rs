//! One function per subcommand. Each returns the output document and the
//! exit status it implies.

use std::path::Path;

use anyhow::{bail, Result};
use serde_json::{json, Value};
use sumnet_core::code::{CodeDoc, LinkCode, RegionCode};
use sumnet_core::decide::{decide_region_graph, decision_doc, solve_network, DecideOptions, Verdict};
use sumnet_core::regions::{basic_region_decomposition, build_region_graph, RegionGraph};
use sumnet_core::structure::{check_connectivity, compute_structure};
use sumnet_core::verify::random::{layered_network, random_network, random_region_graph, NetworkParams, RegionGraphParams};
use sumnet_core::verify::{brute_force_feasible, verify_network_code, verify_region_code, OracleConfig, OracleOutcome};

use crate::io::{load_code, load_instance, Instance};

pub const OK: u8 = 0;
pub const NEGATIVE: u8 = 1;
pub const UNDECIDED: u8 = 2;

pub struct Output {
    pub doc: Value,
    pub status: u8,
}

fn ok(doc: Value) -> Output {
    Output { doc, status: OK }
}

fn region_graph(inst: Instance) -> Result<RegionGraph> {
    Ok(match inst {
        Instance::Regions(g) => g,
        Instance::Network(net) => build_region_graph(&basic_region_decomposition(&net)?, &net)?,
    })
}

fn verdict_status(v: &Verdict) -> u8 {
    match v {
        Verdict::Feasible { .. } => OK,
        Verdict::Infeasible { .. } => NEGATIVE,
        Verdict::Unknown { .. } => UNDECIDED,
    }
}

pub fn decompose(input: Option<&Path>) -> Result<Output> {
    let Instance::Network(net) = load_instance(input)? else { bail!("decompose expects a network document") };
    let g = build_region_graph(&basic_region_decomposition(&net)?, &net)?;
    Ok(ok(serde_json::to_value(g.to_doc())?))
}

pub fn analyze(input: Option<&Path>) -> Result<Output> {
    let g = region_graph(load_instance(input)?)?;
    let sm = compute_structure(&g)?;
    let conn = check_connectivity(&g)?;
    let disconnected: Vec<Value> =
        conn.disconnected.iter().map(|&(i, j)| json!({"source": i + 1, "terminal": j + 1})).collect();
    Ok(ok(json!({
        "regions": g.len(),
        "structure": sm.to_doc(&g),
        "disconnected": disconnected,
    })))
}

/// Decision plus, when feasible, the code as a document keyed by link id
/// (network input) or region id (region-graph input).
fn decide_any(inst: Instance, opts: DecideOptions) -> Result<(Value, Option<CodeDoc>, u8)> {
    match inst {
        Instance::Network(net) => {
            let nd = solve_network(&net, opts)?;
            let mut doc = decision_doc(&nd.region_graph, &nd.decision);
            doc["regions"] = json!(nd.region_graph.len());
            let code = nd.link_code.as_ref().map(|c| c.to_doc(&net));
            Ok((doc, code, verdict_status(&nd.decision.verdict)))
        }
        Instance::Regions(g) => {
            let d = decide_region_graph(&g, opts)?;
            let code = match &d.verdict {
                Verdict::Feasible { code } => Some(code.to_doc(&g)),
                _ => None,
            };
            Ok((decision_doc(&g, &d), code, verdict_status(&d.verdict)))
        }
    }
}

pub fn decide(input: Option<&Path>, opts: DecideOptions) -> Result<Output> {
    let (doc, _, status) = decide_any(load_instance(input)?, opts)?;
    Ok(Output { doc, status })
}

/// The code document when feasible, otherwise the verdict document. The
/// verdict is also returned for callers that store it separately.
pub fn synthesize(input: Option<&Path>, opts: DecideOptions) -> Result<(Output, Value)> {
    let (verdict, code, status) = decide_any(load_instance(input)?, opts)?;
    let doc = match code {
        Some(c) => serde_json::to_value(c)?,
        None => verdict.clone(),
    };
    Ok((Output { doc, status }, verdict))
}

pub fn verify(instance: &Path, code: Option<&Path>) -> Result<Output> {
    let inst = load_instance(Some(instance))?;
    let doc = load_code(code)?;
    let result = match &inst {
        Instance::Network(net) => verify_network_code(net, &LinkCode::from_doc(&doc, net)?)?,
        Instance::Regions(g) => verify_region_code(g, &RegionCode::from_doc(&doc, g)?)?,
    };
    Ok(match result {
        Ok(()) => ok(json!({"valid": true, "p": doc.p})),
        Err(v) => Output { doc: json!({"valid": false, "p": doc.p, "violation": v.to_string()}), status: NEGATIVE },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GenKind {
    RegionGraph,
    Network,
    Layered,
}

#[derive(Clone, Copy, Debug, clap::Args)]
pub struct GenParams {
    /// Terminal count.
    #[arg(long, default_value_t = 3)]
    pub terminals: usize,
    /// Coding regions (region-graph).
    #[arg(long, default_value_t = 4)]
    pub coding: usize,
    /// Chance of each extra parent (region-graph).
    #[arg(long, default_value_t = 0.2)]
    pub density: f64,
    /// Relay nodes (network).
    #[arg(long, default_value_t = 20)]
    pub relays: usize,
    /// Random links before repairs and pruning (network).
    #[arg(long, default_value_t = 60)]
    pub links: usize,
    /// Nodes per layer (layered).
    #[arg(long, default_value_t = 10)]
    pub width: usize,
    /// Layers per terminal column (layered).
    #[arg(long, default_value_t = 10)]
    pub layers: usize,
}

pub fn gen(kind: GenKind, seed: u64, p: GenParams) -> Result<Output> {
    let doc = match kind {
        GenKind::RegionGraph => {
            let params = RegionGraphParams { terminals: p.terminals, coding: p.coding, density: p.density };
            serde_json::to_value(random_region_graph(seed, params)?.to_doc())?
        }
        GenKind::Network => {
            let params = NetworkParams { terminals: p.terminals, relays: p.relays, links: p.links };
            serde_json::to_value(random_network(seed, params)?.to_doc())?
        }
        GenKind::Layered => serde_json::to_value(layered_network(p.width, p.layers)?.to_doc())?,
    };
    Ok(ok(doc))
}

pub fn oracle(input: Option<&Path>, primes: &[u64], config: OracleConfig) -> Result<Output> {
    let g = region_graph(load_instance(input)?)?;
    let res = brute_force_feasible(&g, primes, config)?;
    let nodes: Vec<Value> = res.nodes.iter().map(|&(p, n)| json!({"p": p, "nodes": n})).collect();
    Ok(match res.outcome {
        OracleOutcome::Solution { p, code } => {
            ok(json!({"outcome": "solution", "p": p, "code": code.to_doc(&g), "search": nodes}))
        }
        OracleOutcome::NoSolution { primes } => {
            Output { doc: json!({"outcome": "no_solution", "primes": primes, "search": nodes}), status: NEGATIVE }
        }
        OracleOutcome::BudgetExceeded { reason } => {
            Output { doc: json!({"outcome": "budget_exceeded", "reason": reason, "search": nodes}), status: UNDECIDED }
        }
    })
}

const DENSITIES: [f64; 4] = [0.0, 0.1, 0.2, 0.3];

/// Decides `count` random three-terminal region graphs and runs the oracle
/// on each, tabulating verdict against oracle outcome.
pub fn agreement(count: u64, seed: u64, primes: &[u64], config: OracleConfig, opts: DecideOptions) -> Result<Output> {
    let mut table = [[0u64; 3]; 3];
    let mut conflicts = Vec::new();
    let max_coding = config.max_coding.max(1) as u64;
    for s in seed..seed + count {
        let params = RegionGraphParams {
            terminals: 3,
            coding: 1 + (s % max_coding) as usize,
            density: DENSITIES[(s / max_coding) as usize % DENSITIES.len()],
        };
        let g = random_region_graph(s, params)?;
        let verdict = decide_region_graph(&g, opts)?.verdict;
        let row = verdict_status(&verdict) as usize;
        let outcome = brute_force_feasible(&g, primes, config)?.outcome;
        let col = match outcome {
            OracleOutcome::Solution { .. } => 0,
            OracleOutcome::NoSolution { .. } => 1,
            OracleOutcome::BudgetExceeded { .. } => 2,
        };
        table[row][col] += 1;
        let bad_code = match &verdict {
            Verdict::Feasible { code } => verify_region_code(&g, code)?.is_err(),
            _ => false,
        };
        if (row == 1 && col == 0) || bad_code {
            conflicts.push(s);
        }
    }
    let rows = ["feasible", "infeasible", "unknown"];
    let doc_table: serde_json::Map<String, Value> = rows
        .iter()
        .zip(table)
        .map(|(r, c)| (r.to_string(), json!({"solution": c[0], "no_solution": c[1], "budget_exceeded": c[2]})))
        .collect();
    eprintln!("{:<12}{:>10}{:>13}{:>8}", "decide", "solution", "no_solution", "budget");
    for (r, c) in rows.iter().zip(table) {
        eprintln!("{:<12}{:>10}{:>13}{:>8}", r, c[0], c[1], c[2]);
    }
    let budget: u64 = table.iter().map(|c| c[2]).sum();
    let status = if !conflicts.is_empty() {
        NEGATIVE
    } else if budget > 0 {
        UNDECIDED
    } else {
        OK
    };
    Ok(Output {
        doc: json!({"samples": count, "first_seed": seed, "table": doc_table, "conflicting_seeds": conflicts}),
        status,
    })
}
