//! JSON instance files.
//!
//! Vertex cover: `{"graph": {"n", "edges": [[u, v], ...]}, "agents": [{"nodes", "costs"}, ...]}`
//! with every edge listed smaller id first.
//! Facility location: `{"facilities": [{"agent", "open_cost"}, ...], "clients", "assign_cost"}`
//! where `assign_cost[l][j]` is the cost of serving client `j` from facility `l`.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::graph::Graph;
use super::ufl::{Facility, UflInstance};
use super::vc::{Ownership, VcInstance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Vc(VcInstance),
    Ufl(UflInstance),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentFile {
    nodes: Vec<usize>,
    costs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VcFile {
    graph: GraphFile,
    agents: Vec<AgentFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FacilityFile {
    agent: usize,
    open_cost: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UflFile {
    facilities: Vec<FacilityFile>,
    clients: usize,
    assign_cost: Vec<Vec<f64>>,
}

fn parse_err(context: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        context: context.into(),
        message: message.into(),
    }
}

fn json_err(e: serde_json::Error) -> Error {
    parse_err(
        format!("line {}, column {}", e.line(), e.column()),
        e.to_string(),
    )
}

pub fn to_json(inst: &Instance) -> String {
    let text = match inst {
        Instance::Vc(vc) => {
            let file = VcFile {
                graph: GraphFile {
                    n: vc.graph().n(),
                    edges: vc.graph().edges().iter().map(|&(u, v)| [u, v]).collect(),
                },
                agents: vc
                    .ownership()
                    .agents()
                    .iter()
                    .zip(vc.costs())
                    .map(|(nodes, costs)| AgentFile {
                        nodes: nodes.clone(),
                        costs: costs.clone(),
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&file)
        }
        Instance::Ufl(u) => {
            let file = UflFile {
                facilities: u
                    .facilities()
                    .iter()
                    .map(|f| FacilityFile {
                        agent: f.agent,
                        open_cost: f.open_cost,
                    })
                    .collect(),
                clients: u.clients(),
                assign_cost: u.assign_costs().to_vec(),
            };
            serde_json::to_string_pretty(&file)
        }
    };
    text.expect("instance files always serialize")
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
    let obj = value
        .as_object()
        .ok_or_else(|| parse_err("top level", "expected a JSON object"))?;
    if obj.contains_key("graph") {
        let file: VcFile = serde_json::from_str(text).map_err(json_err)?;
        vc_from_file(file).map(Instance::Vc)
    } else if obj.contains_key("facilities") {
        let file: UflFile = serde_json::from_str(text).map_err(json_err)?;
        ufl_from_file(file).map(Instance::Ufl)
    } else {
        Err(parse_err(
            "top level",
            "expected a \"graph\" or \"facilities\" field",
        ))
    }
}

fn vc_from_file(file: VcFile) -> Result<VcInstance> {
    let n = file.graph.n;
    let mut seen = HashSet::new();
    for (k, &[u, v]) in file.graph.edges.iter().enumerate() {
        let ctx = format!("graph.edges[{k}]");
        if u >= v {
            return Err(parse_err(
                ctx,
                format!("pair [{u}, {v}] must list the smaller id first"),
            ));
        }
        if v >= n {
            return Err(parse_err(ctx, format!("node {v} outside 0..{n}")));
        }
        if !seen.insert((u, v)) {
            return Err(parse_err(ctx, format!("duplicate edge [{u}, {v}]")));
        }
    }
    let graph = Graph::new(n, file.graph.edges.iter().map(|e| (e[0], e[1])))
        .map_err(|e| parse_err("graph", e.to_string()))?;
    for (i, a) in file.agents.iter().enumerate() {
        if a.costs.len() != a.nodes.len() {
            return Err(parse_err(
                format!("agents[{i}].costs"),
                format!("{} costs for {} owned nodes", a.costs.len(), a.nodes.len()),
            ));
        }
        if let Some(k) = a.nodes.iter().position(|&u| u >= n) {
            return Err(parse_err(
                format!("agents[{i}].nodes[{k}]"),
                format!("node outside 0..{n}"),
            ));
        }
        if let Some(k) = a.costs.iter().position(|c| !c.is_finite() || *c < 0.0) {
            return Err(parse_err(
                format!("agents[{i}].costs[{k}]"),
                "costs must be finite and nonnegative",
            ));
        }
    }
    // Costs follow the file's node order; the ownership stores sorted nodes.
    let mut agents = Vec::new();
    let mut costs = Vec::new();
    for a in &file.agents {
        let mut pairs: Vec<(usize, f64)> = a
            .nodes
            .iter()
            .copied()
            .zip(a.costs.iter().copied())
            .collect();
        pairs.sort_by_key(|p| p.0);
        agents.push(pairs.iter().map(|p| p.0).collect());
        costs.push(pairs.iter().map(|p| p.1).collect());
    }
    let own = Ownership::new(n, agents).map_err(|e| parse_err("agents", e.to_string()))?;
    VcInstance::new(graph, own, costs).map_err(|e| parse_err("agents", e.to_string()))
}

fn ufl_from_file(file: UflFile) -> Result<UflInstance> {
    for (l, row) in file.assign_cost.iter().enumerate() {
        if row.len() != file.clients {
            return Err(parse_err(
                format!("assign_cost[{l}]"),
                format!("{} entries for {} clients", row.len(), file.clients),
            ));
        }
    }
    let facilities = file
        .facilities
        .iter()
        .map(|f| Facility {
            agent: f.agent,
            open_cost: f.open_cost,
        })
        .collect();
    UflInstance::new(facilities, file.clients, file.assign_cost)
        .map_err(|e| parse_err("facilities", e.to_string()))
}

pub fn save_instance(path: impl AsRef<Path>, inst: &Instance) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_json(inst) + "\n").map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_instance(&text)
}
