//! Reading documents, detecting their kind and writing JSON.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::Value;
use sumnet_core::code::CodeDoc;
use sumnet_core::network::{Network, NetworkDoc};
use sumnet_core::regions::{RegionGraph, RegionGraphDoc};

/// A problem instance: a network or a region graph.
pub enum Instance {
    Network(Network),
    Regions(RegionGraph),
}

/// Reads a file, or stdin when `path` is `None` or `-`.
pub fn read_json(path: Option<&Path>) -> Result<Value> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
        }
    }
    serde_json::from_str(&text).context("input is not JSON")
}

fn has(v: &Value, keys: &[&str]) -> bool {
    keys.iter().all(|k| v.get(k).is_some())
}

pub fn instance(v: Value) -> Result<Instance> {
    if has(&v, &["nodes", "links"]) {
        let doc: NetworkDoc = serde_json::from_value(v).context("malformed network document")?;
        Ok(Instance::Network(Network::from_doc(doc)?))
    } else if has(&v, &["regions", "edges"]) {
        let doc: RegionGraphDoc = serde_json::from_value(v).context("malformed region-graph document")?;
        Ok(Instance::Regions(RegionGraph::from_doc(doc)?))
    } else {
        bail!("document is neither a network (nodes, links) nor a region graph (regions, edges)")
    }
}

pub fn load_instance(path: Option<&Path>) -> Result<Instance> {
    instance(read_json(path)?)
}

pub fn load_code(path: Option<&Path>) -> Result<CodeDoc> {
    let v = read_json(path)?;
    if !has(&v, &["p", "vectors"]) {
        bail!("document is not a code (p, vectors)");
    }
    serde_json::from_value(v).context("malformed code document")
}

pub fn to_json<T: Serialize>(doc: &T, indent: usize) -> Result<String> {
    if indent == 0 {
        return Ok(serde_json::to_string(doc)?);
    }
    let pad = vec![b' '; indent];
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, serde_json::ser::PrettyFormatter::with_indent(&pad));
    doc.serialize(&mut ser)?;
    Ok(String::from_utf8(buf)?)
}

/// Writes to a file, or stdout when `path` is `None` or `-`.
pub fn write_json<T: Serialize>(path: Option<&Path>, doc: &T, indent: usize) -> Result<()> {
    let mut text = to_json(doc, indent)?;
    text.push('\n');
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}
