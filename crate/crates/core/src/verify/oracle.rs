//! Exhaustive search for a linear solution of a small region graph.

use crate::code::RegionCode;
use crate::error::Result;
use crate::gf::{alpha, Gf, Vec3, ALPHA_BAR};
use crate::regions::RegionGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest number of coding (non-source, non-terminal) regions searched.
    pub max_coding: usize,
    /// Search nodes allowed per prime.
    pub budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_coding: 6, budget: 20_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Solution { p: u64, code: RegionCode },
    NoSolution { primes: Vec<u64> },
    BudgetExceeded { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub outcome: OracleOutcome,
    /// Search nodes visited, per prime tried.
    pub nodes: Vec<(u64, u64)>,
}

enum Flow {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Search<'a> {
    rg: &'a RegionGraph,
    gf: Gf,
    vectors: Vec<Option<Vec3>>,
    bound: Vec<Vec<Vec3>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn parent_vectors(&self, r: usize) -> Vec<Vec3> {
        self.rg.parents(r).iter().map(|&u| self.vectors[u].expect("parents are assigned first")).collect()
    }

    /// Upper bound on each later region's span; fails when some terminal can
    /// no longer reach ᾱ.
    fn lookahead(&mut self, from: usize) -> bool {
        let topo = self.rg.topo();
        for &r in &topo[from..] {
            if let Some(i) = self.rg.role(r).source {
                self.bound[r] = vec![alpha(i)];
                continue;
            }
            let mut span = Vec::new();
            for &u in self.rg.parents(r) {
                match self.vectors[u] {
                    Some(v) => span.push(v),
                    None => span.extend_from_slice(&self.bound[u]),
                }
            }
            let basis = self.gf.basis(&span);
            if self.rg.role(r).is_terminal() && !self.gf.in_span(&ALPHA_BAR, &basis) {
                return false;
            }
            self.bound[r] = basis;
        }
        true
    }

    fn dfs(&mut self, k: usize) -> Flow {
        let topo = self.rg.topo();
        if k == topo.len() {
            return Flow::Found;
        }
        let r = topo[k];
        let role = self.rg.role(r);
        if let Some(i) = role.source {
            if role.is_terminal() {
                return Flow::Exhausted;
            }
            self.vectors[r] = Some(alpha(i));
            return self.dfs(k + 1);
        }
        let ps = self.parent_vectors(r);
        if role.is_terminal() {
            if !self.gf.in_span(&ALPHA_BAR, &ps) {
                return Flow::Exhausted;
            }
            self.vectors[r] = Some(ALPHA_BAR);
            let flow = self.dfs(k + 1);
            if !matches!(flow, Flow::Found) {
                self.vectors[r] = None;
            }
            return flow;
        }
        for v in self.gf.projective_points(&ps) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Flow::OutOfBudget;
            }
            self.vectors[r] = Some(v);
            if self.lookahead(k + 1) {
                match self.dfs(k + 1) {
                    Flow::Exhausted => {}
                    other => return other,
                }
            }
        }
        self.vectors[r] = None;
        Flow::Exhausted
    }
}

/// Tries every prime in order; coding regions range over the projective
/// points of their parents' span and terminal regions take ᾱ when their
/// parents span it.
pub fn brute_force_feasible(rg: &RegionGraph, primes: &[u64], config: OracleConfig) -> Result<OracleResult> {
    let coding = (0..rg.len()).filter(|&r| rg.role(r).is_coding()).count();
    if coding > config.max_coding {
        return Ok(OracleResult {
            outcome: OracleOutcome::BudgetExceeded {
                reason: format!("{coding} coding regions exceed the cap of {}", config.max_coding),
            },
            nodes: Vec::new(),
        });
    }
    let mut nodes = Vec::new();
    for &p in primes {
        let mut s = Search {
            rg,
            gf: Gf::new(p)?,
            vectors: vec![None; rg.len()],
            bound: vec![Vec::new(); rg.len()],
            nodes: 0,
            budget: config.budget,
        };
        let flow = if s.lookahead(0) { s.dfs(0) } else { Flow::Exhausted };
        nodes.push((p, s.nodes));
        match flow {
            Flow::Found => {
                let code = RegionCode { p, vectors: s.vectors };
                return Ok(OracleResult { outcome: OracleOutcome::Solution { p, code }, nodes });
            }
            Flow::OutOfBudget => {
                let reason = format!("search budget of {} nodes exhausted over GF({p})", config.budget);
                return Ok(OracleResult { outcome: OracleOutcome::BudgetExceeded { reason }, nodes });
            }
            Flow::Exhausted => {}
        }
    }
    Ok(OracleResult { outcome: OracleOutcome::NoSolution { primes: primes.to_vec() }, nodes })
}
