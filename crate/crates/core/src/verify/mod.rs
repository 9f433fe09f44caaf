//! Independent checks of codes on region graphs, networks and Π, plus the
//! brute-force oracle and random instance generators.

pub mod oracle;
pub mod random;

use std::fmt;

use crate::code::{LinkCode, RegionCode};
use crate::error::{Error, Result};
use crate::gf::{alpha, Gf, Vec3, ALPHA_BAR};
use crate::network::{topo_order, LinkKind, Network};
use crate::regions::RegionGraph;
use crate::structure::StructureMap;

pub use oracle::{brute_force_feasible, OracleConfig, OracleOutcome, OracleResult};

/// The first condition a code breaks. Ids are region or link ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Missing { id: String },
    SourceVector { id: String, expected: Vec3, found: Vec3 },
    Span { id: String },
    TerminalVector { id: String, found: Vec3 },
    /// ᾱ is outside the span of Λ_j (label is 1-based).
    LambdaSpan { terminal: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Missing { id } => write!(f, "{id}: no coding vector"),
            Violation::SourceVector { id, expected, found } => {
                write!(f, "{id}: source vector {found:?}, expected {expected:?}")
            }
            Violation::Span { id } => write!(f, "{id}: vector outside the span of its parents"),
            Violation::TerminalVector { id, found } => write!(f, "{id}: terminal vector {found:?} is not the sum"),
            Violation::LambdaSpan { terminal } => write!(f, "terminal {terminal}: sum outside the span of its Λ"),
        }
    }
}

fn field(p: u64) -> Result<Gf> {
    Gf::new(p)
}

/// Source anchors, the span condition at every non-source region and ᾱ at
/// every terminal region.
pub fn verify_region_code(rg: &RegionGraph, code: &RegionCode) -> Result<std::result::Result<(), Violation>> {
    if code.vectors.len() != rg.len() {
        return Err(Error::Precondition("code size does not match the region graph".into()));
    }
    let gf = field(code.p)?;
    for &r in rg.topo() {
        let id = || rg.id(r).to_string();
        let Some(v) = code.get(r) else {
            return Ok(Err(Violation::Missing { id: id() }));
        };
        let role = rg.role(r);
        if let Some(i) = role.source {
            if *v != alpha(i) {
                return Ok(Err(Violation::SourceVector { id: id(), expected: alpha(i), found: *v }));
            }
        } else {
            let mut ps = Vec::with_capacity(rg.parents(r).len());
            for &u in rg.parents(r) {
                match code.get(u) {
                    Some(w) => ps.push(*w),
                    None => return Ok(Err(Violation::Missing { id: rg.id(u).to_string() })),
                }
            }
            if !gf.in_span(v, &ps) {
                return Ok(Err(Violation::Span { id: id() }));
            }
        }
        if role.is_terminal() && *v != ALPHA_BAR {
            return Ok(Err(Violation::TerminalVector { id: id(), found: *v }));
        }
    }
    Ok(Ok(()))
}

/// Link-level check: source links carry α_i, every other link lies in the
/// span of its incoming links, and terminal links carry ᾱ. Links are visited
/// in topological order.
pub fn verify_network_code(net: &Network, code: &LinkCode) -> Result<std::result::Result<(), Violation>> {
    if code.vectors.len() != net.links().len() {
        return Err(Error::Precondition("code size does not match the network".into()));
    }
    let gf = field(code.p)?;
    for e in topo_order(net)? {
        let link = net.link(e);
        let id = || link.id.clone();
        let Some(v) = code.get(e) else {
            return Ok(Err(Violation::Missing { id: id() }));
        };
        if let LinkKind::Source(i) = link.kind {
            if *v != alpha(i) {
                return Ok(Err(Violation::SourceVector { id: id(), expected: alpha(i), found: *v }));
            }
            continue;
        }
        let mut ps = Vec::with_capacity(net.incoming(e).len());
        for &f in net.incoming(e) {
            match code.get(f) {
                Some(w) => ps.push(*w),
                None => return Ok(Err(Violation::Missing { id: net.link(f).id.clone() })),
            }
        }
        if !gf.in_span(v, &ps) {
            return Ok(Err(Violation::Span { id: id() }));
        }
        if matches!(link.kind, LinkKind::Terminal(_)) && *v != ALPHA_BAR {
            return Ok(Err(Violation::TerminalVector { id: id(), found: *v }));
        }
    }
    Ok(Ok(()))
}

/// Feasible-code conditions on Π: source anchors, span condition inside Π and
/// ᾱ in the span of every Λ_j.
pub fn verify_pi_code(sm: &StructureMap, rg: &RegionGraph, code: &RegionCode) -> Result<std::result::Result<(), Violation>> {
    let gf = field(code.p)?;
    for &r in &sm.pi {
        let id = || rg.id(r).to_string();
        let Some(v) = code.get(r) else {
            return Ok(Err(Violation::Missing { id: id() }));
        };
        if let Some(i) = rg.role(r).source {
            if *v != alpha(i) {
                return Ok(Err(Violation::SourceVector { id: id(), expected: alpha(i), found: *v }));
            }
            continue;
        }
        let mut ps = Vec::new();
        for &u in rg.parents(r) {
            match code.get(u) {
                Some(w) if sm.in_pi[u] => ps.push(*w),
                _ => return Ok(Err(Violation::Missing { id: rg.id(u).to_string() })),
            }
        }
        if !gf.in_span(v, &ps) {
            return Ok(Err(Violation::Span { id: id() }));
        }
    }
    for (j, lam) in sm.singleton_lambdas() {
        let vs: Vec<Vec3> = lam.iter().filter_map(|&r| code.get(r).copied()).collect();
        if !gf.in_span(&ALPHA_BAR, &vs) {
            return Ok(Err(Violation::LambdaSpan { terminal: j + 1 }));
        }
    }
    Ok(Ok(()))
}
