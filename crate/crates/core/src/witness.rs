//! Witness trees, imposed vectors and the two harmonic objectives.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WitnessError};
use crate::harmonic::harmonic;
use crate::rational::Rational;
use crate::tree::{NodeId, Tree};

/// Which imposed vector to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Steiner nodes strictly inside a witness path.
    Node,
    /// Every tree edge on a witness path.
    Edge,
    /// Non-terminal nodes on a path between final nodes, endpoints included, plus one per final node.
    ComponentNode,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Node => "node",
            Variant::Edge => "edge",
            Variant::ComponentNode => "component-node",
        })
    }
}

impl FromStr for Variant {
    type Err = WitnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "node" => Ok(Variant::Node),
            "edge" => Ok(Variant::Edge),
            "component-node" => Ok(Variant::ComponentNode),
            _ => Err(WitnessError::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

/// A spanning tree on the terminal set, stored as a sorted list of `(min, max)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "RawWitness")]
pub struct WitnessTree {
    edges: Vec<(NodeId, NodeId)>,
}

impl WitnessTree {
    /// Normalizes and sorts `edges`. Rejects self-loops and repeated edges; spanning
    /// is checked against a host by [`WitnessTree::validate`].
    pub fn new(edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let mut edges: Vec<(NodeId, NodeId)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        for &(a, b) in &edges {
            if a == b {
                return Err(WitnessError::InvalidWitness(format!("self-loop at {a}")));
            }
        }
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(WitnessError::InvalidWitness(format!("repeated edge {}-{}", w[0].0, w[0].1)));
            }
        }
        Ok(WitnessTree { edges })
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, a: NodeId, b: NodeId) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Checks that this is a spanning tree on the vertex set of `variant`
    /// (terminals, or final nodes for the component-node variant) and
    /// returns the edges as host indices.
    pub fn validate(&self, tree: &Tree, variant: Variant) -> Result<Vec<(usize, usize)>> {
        let vertices = witness_vertices(tree, variant)?;
        let mut slot = vec![usize::MAX; tree.node_count()];
        for (k, &v) in vertices.iter().enumerate() {
            slot[v] = k;
        }
        let mut dsu = Dsu::new(vertices.len());
        let mut out = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            let ia = tree.idx(a)?;
            let ib = tree.idx(b)?;
            for (id, i) in [(a, ia), (b, ib)] {
                if slot[i] == usize::MAX {
                    return Err(WitnessError::InvalidWitness(format!(
                        "endpoint {id} is not a {} of the host tree",
                        if variant == Variant::ComponentNode { "final node" } else { "terminal" }
                    )));
                }
            }
            if !dsu.union(slot[ia], slot[ib]) {
                return Err(WitnessError::InvalidWitness(format!("edge {a}-{b} closes a cycle")));
            }
            out.push((ia, ib));
        }
        if out.len() + 1 != vertices.len() {
            return Err(WitnessError::InvalidWitness(format!(
                "{} edges do not span {} vertices",
                out.len(),
                vertices.len()
            )));
        }
        Ok(out)
    }
}

#[derive(Deserialize)]
struct RawWitness {
    edges: Vec<(NodeId, NodeId)>,
}

impl TryFrom<RawWitness> for WitnessTree {
    type Error = WitnessError;

    fn try_from(raw: RawWitness) -> Result<Self> {
        WitnessTree::new(raw.edges)
    }
}

impl fmt::Display for WitnessTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Host indices of the vertices a witness tree must span.
pub fn witness_vertices(tree: &Tree, variant: Variant) -> Result<Vec<usize>> {
    let v = match variant {
        Variant::Node | Variant::Edge => tree.terminal_indices(),
        Variant::ComponentNode => {
            if !tree.has_final_flags() {
                return Err(WitnessError::InvalidWitness(
                    "component-node variant needs final-node flags on the host".into(),
                ));
            }
            tree.final_indices()
        }
    };
    Ok(v)
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Key of an imposed-vector entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Node(NodeId),
    Edge(NodeId, NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImposedVector {
    pub variant: Variant,
    pub counts: BTreeMap<Element, usize>,
}

impl ImposedVector {
    pub fn node(&self, id: NodeId) -> Option<usize> {
        self.counts.get(&Element::Node(id)).copied()
    }

    pub fn edge(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.counts.get(&Element::Edge(u.min(v), u.max(v))).copied()
    }
}

/// Imposed counts indexed by host node index (node variants) or edge index (edge variant).
/// Entries outside the variant's domain are left at zero.
pub fn impose_indexed(tree: &Tree, pairs: &[(usize, usize)], variant: Variant) -> Vec<usize> {
    match variant {
        Variant::Edge => {
            let mut c = vec![0usize; tree.edge_count()];
            for &(a, b) in pairs {
                for e in tree.path_edges(a, b) {
                    c[e] += 1;
                }
            }
            c
        }
        Variant::Node => {
            let mut c = vec![0usize; tree.node_count()];
            for &(a, b) in pairs {
                let p = tree.path_nodes(a, b);
                for &v in &p[1..p.len() - 1] {
                    c[v] += 1;
                }
            }
            c
        }
        Variant::ComponentNode => {
            let mut c = vec![0usize; tree.node_count()];
            for &(a, b) in pairs {
                for v in tree.path_nodes(a, b) {
                    c[v] += 1;
                }
            }
            for v in tree.final_indices() {
                c[v] += 1;
            }
            c
        }
    }
}

pub fn impose(tree: &Tree, w: &WitnessTree, variant: Variant) -> Result<ImposedVector> {
    let pairs = w.validate(tree, variant)?;
    let c = impose_indexed(tree, &pairs, variant);
    let counts = match variant {
        Variant::Edge => (0..tree.edge_count())
            .map(|e| {
                let (u, v) = tree.edge_ids(e);
                (Element::Edge(u, v), c[e])
            })
            .collect(),
        Variant::Node | Variant::ComponentNode => tree
            .steiner_indices()
            .into_iter()
            .map(|v| (Element::Node(tree.id(v)), c[v]))
            .collect(),
    };
    Ok(ImposedVector { variant, counts })
}

/// `(1/|S|) sum_{v in S} H_{w(v)}` from indexed counts.
pub fn nwt_from_counts(tree: &Tree, counts: &[usize]) -> Result<Rational> {
    let s = tree.steiner_indices();
    if s.is_empty() {
        return Err(WitnessError::NoSteinerNodes);
    }
    let total: Rational = s.iter().map(|&v| harmonic(counts[v])).sum();
    Ok(total / Rational::integer(s.len() as i64))
}

/// `sum_e c(e) H_{w(e)} / c(E)` from indexed counts.
pub fn ewt_from_counts(tree: &Tree, counts: &[usize]) -> Result<Rational> {
    let total = tree.total_cost();
    if total.is_zero() {
        return Err(WitnessError::ZeroTotalCost);
    }
    let num: Rational = (0..tree.edge_count())
        .filter(|&e| counts[e] > 0 && !tree.cost(e).is_zero())
        .map(|e| tree.cost(e) * harmonic(counts[e]))
        .sum();
    Ok(num / total)
}

pub fn eval_nwt(tree: &Tree, w: &WitnessTree, variant: Variant) -> Result<Rational> {
    if variant == Variant::Edge {
        return Err(WitnessError::InvalidParameters("eval_nwt takes a node variant".into()));
    }
    if tree.steiner_indices().is_empty() {
        return Err(WitnessError::NoSteinerNodes);
    }
    let pairs = w.validate(tree, variant)?;
    nwt_from_counts(tree, &impose_indexed(tree, &pairs, variant))
}

pub fn eval_ewt(tree: &Tree, w: &WitnessTree) -> Result<Rational> {
    if tree.total_cost().is_zero() {
        return Err(WitnessError::ZeroTotalCost);
    }
    let pairs = w.validate(tree, Variant::Edge)?;
    ewt_from_counts(tree, &impose_indexed(tree, &pairs, Variant::Edge))
}

/// Dispatches on the variant: node variants use the node objective, `Edge` the cost-weighted one.
pub fn eval(tree: &Tree, w: &WitnessTree, variant: Variant) -> Result<Rational> {
    match variant {
        Variant::Edge => eval_ewt(tree, w),
        v => eval_nwt(tree, w, v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::harmonic as h;
    use crate::rational::q;
    use crate::tree::{EdgeSpec, NodeSpec};

    // u=0, v=1, r1=11 and r3=13 on u, r2=12 and r4=14 on v
    fn spider() -> Tree {
        Tree::new(
            vec![
                NodeSpec::steiner(0),
                NodeSpec::steiner(1),
                NodeSpec::terminal(11),
                NodeSpec::terminal(12),
                NodeSpec::terminal(13),
                NodeSpec::terminal(14),
            ],
            vec![
                EdgeSpec::new(0, 1),
                EdgeSpec::new(0, 11),
                EdgeSpec::new(0, 13),
                EdgeSpec::new(1, 12),
                EdgeSpec::new(1, 14),
            ],
        )
        .unwrap()
    }

    // s_i = i, r_i = 10 + i for i = 0..n, O edges cost `o`, L edges cost 1
    fn claw_path(n: u64, o: Rational) -> Tree {
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        for i in 0..n {
            nodes.push(NodeSpec::steiner(i));
            nodes.push(NodeSpec::terminal(10 + i));
            edges.push(EdgeSpec::with_cost(i, 10 + i, Rational::one()));
            if i + 1 < n {
                edges.push(EdgeSpec::with_cost(i, i + 1, o.clone()));
            }
        }
        Tree::new(nodes, edges).unwrap()
    }

    #[test]
    fn spider_node_counts() {
        let t = spider();
        let w = WitnessTree::new([(11, 12), (12, 13), (13, 14)]).unwrap();
        let iv = impose(&t, &w, Variant::Node).unwrap();
        // every one of the three paths runs through both u and v
        assert_eq!(iv.node(0), Some(3));
        assert_eq!(iv.node(1), Some(3));
        assert_eq!(iv.counts.len(), 2);
    }

    #[test]
    fn star_on_shared_neighbour() {
        let t = spider();
        let w = WitnessTree::new([(11, 13), (11, 12), (11, 14)]).unwrap();
        let iv = impose(&t, &w, Variant::Node).unwrap();
        assert_eq!(iv.node(0), Some(3));
        assert_eq!(iv.node(1), Some(2));
    }

    #[test]
    fn claw_q1_edge_counts_and_value() {
        let alpha = q(32, 90);
        let t = claw_path(3, alpha.clone());
        let w = WitnessTree::new([(11, 10), (11, 12)]).unwrap();
        let iv = impose(&t, &w, Variant::Edge).unwrap();
        assert_eq!(iv.edge(1, 11), Some(2));
        assert_eq!(iv.edge(0, 10), Some(1));
        assert_eq!(iv.edge(2, 12), Some(1));
        assert_eq!(iv.edge(0, 1), Some(1));
        assert_eq!(iv.edge(1, 2), Some(1));
        assert_eq!(eval_ewt(&t, &w).unwrap(), q(379, 334));
    }

    #[test]
    fn claw_q3_chain() {
        let t = claw_path(3, q(3, 2));
        let w = WitnessTree::new([(10, 11), (11, 12)]).unwrap();
        assert_eq!(eval_ewt(&t, &w).unwrap(), q(13, 12));
    }

    #[test]
    fn component_node_path() {
        let nodes = vec![
            NodeSpec::final_steiner(1),
            NodeSpec::steiner(2),
            NodeSpec::final_steiner(3),
            NodeSpec::steiner(4),
            NodeSpec::final_steiner(5),
        ];
        let edges = vec![EdgeSpec::new(1, 2), EdgeSpec::new(2, 3), EdgeSpec::new(3, 4), EdgeSpec::new(4, 5)];
        let t = Tree::new(nodes, edges).unwrap();
        let w = WitnessTree::new([(1, 3), (3, 5)]).unwrap();
        assert_eq!(eval_nwt(&t, &w, Variant::ComponentNode).unwrap(), q(41, 30));
    }

    #[test]
    fn single_steiner_star() {
        let t = Tree::new(
            vec![NodeSpec::steiner(0), NodeSpec::terminal(1), NodeSpec::terminal(2), NodeSpec::terminal(3)],
            vec![EdgeSpec::new(0, 1), EdgeSpec::new(0, 2), EdgeSpec::new(0, 3)],
        )
        .unwrap();
        let w = WitnessTree::new([(1, 2), (1, 3)]).unwrap();
        assert_eq!(eval_nwt(&t, &w, Variant::Node).unwrap(), h(2));
    }

    #[test]
    fn rejects_bad_witnesses() {
        let t = spider();
        let not_spanning = WitnessTree::new([(11, 12), (13, 14)]).unwrap();
        assert!(matches!(eval_nwt(&t, &not_spanning, Variant::Node), Err(WitnessError::InvalidWitness(_))));
        let steiner_endpoint = WitnessTree::new([(0, 11), (11, 12), (12, 13)]).unwrap();
        assert!(matches!(impose(&t, &steiner_endpoint, Variant::Node), Err(WitnessError::InvalidWitness(_))));
        let cycle = WitnessTree::new([(11, 12), (12, 13), (11, 13)]).unwrap();
        assert!(matches!(impose(&t, &cycle, Variant::Edge), Err(WitnessError::InvalidWitness(_))));
        assert!(WitnessTree::new([(11, 12), (12, 11)]).is_err());
        assert!(WitnessTree::new([(11, 11)]).is_err());
    }

    #[test]
    fn zero_cost_is_an_error() {
        let t = claw_path(1, Rational::zero()).map_costs(|_, _| Rational::zero()).unwrap();
        assert_eq!(eval_ewt(&t, &WitnessTree::default()), Err(WitnessError::ZeroTotalCost));
    }
}
