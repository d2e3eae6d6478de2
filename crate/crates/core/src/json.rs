//! JSON forms of instances and witness trees.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Result, WitnessError};
use crate::rational::Rational;
use crate::tree::{EdgeSpec, NodeId, NodeSpec, Tree};
use crate::witness::WitnessTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Nwt,
    Ewt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: NodeId,
    pub terminal: bool,
    #[serde(rename = "final", default, skip_serializing_if = "is_false")]
    pub is_final: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: NodeId,
    pub v: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub kind: InstanceKind,
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
    /// Free-form generator metadata; ignored when building the tree.
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub meta: Value,
}

impl Instance {
    pub fn from_tree(kind: InstanceKind, tree: &Tree, meta: Value) -> Instance {
        Instance {
            kind,
            nodes: tree
                .node_specs()
                .into_iter()
                .map(|n| NodeJson { id: n.id, terminal: n.terminal, is_final: n.is_final })
                .collect(),
            edges: tree.edge_specs().into_iter().map(|e| EdgeJson { u: e.u, v: e.v, cost: e.cost }).collect(),
            meta,
        }
    }

    pub fn to_tree(&self) -> Result<Tree> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| NodeSpec { id: n.id, terminal: n.terminal, is_final: n.is_final })
            .collect();
        let edges = self.edges.iter().map(|e| EdgeSpec { u: e.u, v: e.v, cost: e.cost.clone() }).collect();
        Tree::new(nodes, edges)
    }

    pub fn parse(text: &str) -> Result<Instance> {
        serde_json::from_str(text).map_err(|e| WitnessError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }
}

pub fn parse_witness(text: &str) -> Result<WitnessTree> {
    serde_json::from_str(text).map_err(|e| WitnessError::Parse(e.to_string()))
}

pub fn witness_json(w: &WitnessTree) -> String {
    serde_json::to_string(w).expect("witness serializes")
}
