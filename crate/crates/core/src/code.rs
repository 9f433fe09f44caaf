//! Coding-vector assignments on regions and links, and their JSON documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Gf, Vec3};
use crate::network::Network;
use crate::regions::RegionGraph;

/// Coding vectors indexed by region; `None` marks an unassigned region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionCode {
    pub p: u64,
    pub vectors: Vec<Option<Vec3>>,
}

/// Coding vectors indexed by link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkCode {
    pub p: u64,
    pub vectors: Vec<Option<Vec3>>,
}

/// The JSON code document, keyed by region or link id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeDoc {
    pub p: u64,
    pub vectors: BTreeMap<String, Vec3>,
}

impl RegionCode {
    pub fn empty(p: u64, len: usize) -> Self {
        RegionCode { p, vectors: vec![None; len] }
    }

    pub fn get(&self, r: usize) -> Option<&Vec3> {
        self.vectors.get(r).and_then(|v| v.as_ref())
    }

    pub fn set(&mut self, r: usize, v: Vec3) {
        self.vectors[r] = Some(v);
    }

    pub fn is_complete(&self) -> bool {
        self.vectors.iter().all(Option::is_some)
    }

    pub fn to_doc(&self, rg: &RegionGraph) -> CodeDoc {
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .filter_map(|(r, v)| v.map(|v| (rg.id(r).to_string(), v)))
            .collect();
        CodeDoc { p: self.p, vectors }
    }

    pub fn from_doc(doc: &CodeDoc, rg: &RegionGraph) -> Result<Self> {
        let gf = Gf::new(doc.p)?;
        let mut code = RegionCode::empty(gf.p(), rg.len());
        for (id, v) in &doc.vectors {
            let r = rg.index_of(id).ok_or_else(|| Error::UnknownId(id.clone()))?;
            code.set(r, reduced(&gf, v)?);
        }
        Ok(code)
    }
}

impl LinkCode {
    pub fn get(&self, e: usize) -> Option<&Vec3> {
        self.vectors.get(e).and_then(|v| v.as_ref())
    }

    pub fn to_doc(&self, net: &Network) -> CodeDoc {
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .filter_map(|(e, v)| v.map(|v| (net.link(e).id.clone(), v)))
            .collect();
        CodeDoc { p: self.p, vectors }
    }

    pub fn from_doc(doc: &CodeDoc, net: &Network) -> Result<Self> {
        let gf = Gf::new(doc.p)?;
        let mut vectors = vec![None; net.links().len()];
        for (id, v) in &doc.vectors {
            let e = net.link_index(id).ok_or_else(|| Error::UnknownId(id.clone()))?;
            vectors[e] = Some(reduced(&gf, v)?);
        }
        Ok(LinkCode { p: gf.p(), vectors })
    }
}

fn reduced(gf: &Gf, v: &Vec3) -> Result<Vec3> {
    if v.iter().any(|&x| x >= gf.p()) {
        return Err(Error::Malformed(format!("coefficient out of range for GF({})", gf.p())));
    }
    Ok(*v)
}
