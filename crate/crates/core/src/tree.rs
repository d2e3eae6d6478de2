//! Host trees: nodes with terminal/final flags, weighted edges, path queries.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Result, WitnessError};
use crate::rational::Rational;

pub type NodeId = u64;

/// Node description used to build a [`Tree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    pub id: NodeId,
    pub terminal: bool,
    pub is_final: bool,
}

impl NodeSpec {
    pub fn terminal(id: NodeId) -> Self {
        NodeSpec { id, terminal: true, is_final: false }
    }

    pub fn steiner(id: NodeId) -> Self {
        NodeSpec { id, terminal: false, is_final: false }
    }

    pub fn final_steiner(id: NodeId) -> Self {
        NodeSpec { id, terminal: false, is_final: true }
    }
}

/// Edge description used to build a [`Tree`]. Missing costs default to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: Option<Rational>,
}

impl EdgeSpec {
    pub fn new(u: NodeId, v: NodeId) -> Self {
        EdgeSpec { u, v, cost: None }
    }

    pub fn with_cost(u: NodeId, v: NodeId, cost: Rational) -> Self {
        EdgeSpec { u, v, cost: Some(cost) }
    }
}

/// An immutable host tree. Nodes are stored densely in increasing id order;
/// edges are stored in increasing `(min id, max id)` order.
#[derive(Debug, Clone)]
pub struct Tree {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    terminal: Vec<bool>,
    is_final: Vec<bool>,
    adj: Vec<Vec<(usize, usize)>>,
    edges: Vec<(usize, usize)>,
    costs: Vec<Rational>,
    explicit_cost: Vec<bool>,
    root: Option<NodeId>,
    // rooting at index 0, used for path queries
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
}

impl Tree {
    pub fn new(nodes: Vec<NodeSpec>, edges: Vec<EdgeSpec>) -> Result<Tree> {
        Tree::with_root(nodes, edges, None)
    }

    pub fn with_root(nodes: Vec<NodeSpec>, edges: Vec<EdgeSpec>, root: Option<NodeId>) -> Result<Tree> {
        let invalid = |m: String| WitnessError::InvalidTree(m);
        if nodes.is_empty() {
            return Err(invalid("no nodes".into()));
        }
        let mut nodes = nodes;
        nodes.sort_by_key(|n| n.id);
        for w in nodes.windows(2) {
            if w[0].id == w[1].id {
                return Err(invalid(format!("duplicate node id {}", w[0].id)));
            }
        }
        let ids: Vec<NodeId> = nodes.iter().map(|n| n.id).collect();
        let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let n = ids.len();
        if edges.len() + 1 != n {
            return Err(invalid(format!("{} nodes but {} edges", n, edges.len())));
        }

        let mut keyed: BTreeMap<(usize, usize), (Rational, bool)> = BTreeMap::new();
        for e in &edges {
            let a = *index.get(&e.u).ok_or(WitnessError::UnknownNode(e.u))?;
            let b = *index.get(&e.v).ok_or(WitnessError::UnknownNode(e.v))?;
            if a == b {
                return Err(invalid(format!("self-loop at {}", e.u)));
            }
            let cost = e.cost.clone().unwrap_or_else(Rational::one);
            if cost.is_negative() {
                return Err(invalid(format!("negative cost on edge {}-{}", e.u, e.v)));
            }
            let key = (a.min(b), a.max(b));
            if keyed.insert(key, (cost, e.cost.is_some())).is_some() {
                return Err(invalid(format!("duplicate edge {}-{}", e.u, e.v)));
            }
        }

        let mut adj = vec![Vec::new(); n];
        let mut edge_list = Vec::with_capacity(keyed.len());
        let mut costs = Vec::with_capacity(keyed.len());
        let mut explicit_cost = Vec::with_capacity(keyed.len());
        for (ei, ((a, b), (c, explicit))) in keyed.into_iter().enumerate() {
            adj[a].push((b, ei));
            adj[b].push((a, ei));
            edge_list.push((a, b));
            costs.push(c);
            explicit_cost.push(explicit);
        }
        for list in &mut adj {
            list.sort_unstable();
        }

        let mut parent = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, e));
                    depth[y] = depth[x] + 1;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        if reached != n {
            return Err(invalid("graph is not connected".into()));
        }

        let terminal: Vec<bool> = nodes.iter().map(|s| s.terminal).collect();
        let is_final: Vec<bool> = nodes.iter().map(|s| s.is_final).collect();
        for i in 0..n {
            if terminal[i] && adj[i].len() != 1 {
                return Err(invalid(format!(
                    "terminal {} has degree {} (must be 1)",
                    ids[i],
                    adj[i].len()
                )));
            }
            if terminal[i] && is_final[i] {
                return Err(invalid(format!("terminal {} cannot be flagged final", ids[i])));
            }
        }
        if !terminal.iter().any(|&t| t) && !is_final.iter().any(|&f| f) {
            return Err(invalid("terminal set is empty".into()));
        }
        if let Some(r) = root {
            if !index.contains_key(&r) {
                return Err(WitnessError::UnknownNode(r));
            }
        }

        Ok(Tree {
            ids,
            index,
            terminal,
            is_final,
            adj,
            edges: edge_list,
            costs,
            explicit_cost,
            root,
            parent,
            depth,
        })
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn id(&self, idx: usize) -> NodeId {
        self.ids[idx]
    }

    pub fn idx(&self, id: NodeId) -> Result<usize> {
        self.index.get(&id).copied().ok_or(WitnessError::UnknownNode(id))
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn is_terminal(&self, idx: usize) -> bool {
        self.terminal[idx]
    }

    pub fn is_final(&self, idx: usize) -> bool {
        self.is_final[idx]
    }

    pub fn has_final_flags(&self) -> bool {
        self.is_final.iter().any(|&f| f)
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.adj[idx].len()
    }

    /// Neighbours of `idx` as `(neighbour index, edge index)`, sorted by neighbour id.
    pub fn neighbors(&self, idx: usize) -> &[(usize, usize)] {
        &self.adj[idx]
    }

    pub fn terminals(&self) -> Vec<NodeId> {
        self.indices_where(|i| self.terminal[i]).into_iter().map(|i| self.ids[i]).collect()
    }

    pub fn terminal_indices(&self) -> Vec<usize> {
        self.indices_where(|i| self.terminal[i])
    }

    pub fn steiner_indices(&self) -> Vec<usize> {
        self.indices_where(|i| !self.terminal[i])
    }

    pub fn final_indices(&self) -> Vec<usize> {
        self.indices_where(|i| self.is_final[i])
    }

    /// Non-leaf nodes, i.e. nodes of degree at least two.
    pub fn internal_indices(&self) -> Vec<usize> {
        self.indices_where(|i| self.adj[i].len() >= 2)
    }

    fn indices_where(&self, pred: impl Fn(usize) -> bool) -> Vec<usize> {
        (0..self.ids.len()).filter(|&i| pred(i)).collect()
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_ids(&self, e: usize) -> (NodeId, NodeId) {
        let (a, b) = self.edges[e];
        (self.ids[a], self.ids[b])
    }

    pub fn cost(&self, e: usize) -> &Rational {
        &self.costs[e]
    }

    pub fn has_explicit_cost(&self, e: usize) -> bool {
        self.explicit_cost[e]
    }

    pub fn total_cost(&self) -> Rational {
        self.costs.iter().sum()
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a].iter().find(|&&(y, _)| y == b).map(|&(_, e)| e)
    }

    /// Ordered node indices of the unique `a`–`b` path, endpoints included.
    pub fn path_nodes(&self, a: usize, b: usize) -> Vec<usize> {
        let (mut x, mut y) = (a, b);
        let mut left = Vec::new();
        let mut right = Vec::new();
        while self.depth[x] > self.depth[y] {
            left.push(x);
            x = self.parent[x].unwrap().0;
        }
        while self.depth[y] > self.depth[x] {
            right.push(y);
            y = self.parent[y].unwrap().0;
        }
        while x != y {
            left.push(x);
            right.push(y);
            x = self.parent[x].unwrap().0;
            y = self.parent[y].unwrap().0;
        }
        left.push(x);
        left.extend(right.into_iter().rev());
        left
    }

    /// Edge indices along the `a`–`b` path, in order from `a`.
    pub fn path_edges(&self, a: usize, b: usize) -> Vec<usize> {
        let nodes = self.path_nodes(a, b);
        nodes
            .windows(2)
            .map(|w| self.edge_between(w[0], w[1]).expect("consecutive path nodes are adjacent"))
            .collect()
    }

    /// The unique simple `u`–`v` path as node ids, endpoints included.
    pub fn tree_path(&self, u: NodeId, v: NodeId) -> Result<Vec<NodeId>> {
        let a = self.idx(u)?;
        let b = self.idx(v)?;
        Ok(self.path_nodes(a, b).into_iter().map(|i| self.ids[i]).collect())
    }

    /// Orients the tree away from `root`.
    pub fn rooted(&self, root: usize) -> Rooted {
        let n = self.ids.len();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &(y, _) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    children[x].push(y);
                    queue.push_back(y);
                }
            }
        }
        Rooted { root, parent, children, order }
    }

    /// Node specs in id order, as accepted by [`Tree::new`].
    pub fn node_specs(&self) -> Vec<NodeSpec> {
        (0..self.ids.len())
            .map(|i| NodeSpec { id: self.ids[i], terminal: self.terminal[i], is_final: self.is_final[i] })
            .collect()
    }

    /// Edge specs in edge order; costs are included only where they were given explicitly.
    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        (0..self.edges.len())
            .map(|e| {
                let (u, v) = self.edge_ids(e);
                EdgeSpec { u, v, cost: self.explicit_cost[e].then(|| self.costs[e].clone()) }
            })
            .collect()
    }

    /// A copy with every edge cost replaced by `f(edge index, old cost)`.
    pub fn map_costs(&self, f: impl Fn(usize, &Rational) -> Rational) -> Result<Tree> {
        let edges = (0..self.edges.len())
            .map(|e| {
                let (u, v) = self.edge_ids(e);
                EdgeSpec::with_cost(u, v, f(e, &self.costs[e]))
            })
            .collect();
        Tree::with_root(self.node_specs(), edges, self.root)
    }
}

/// A tree oriented away from a chosen root.
#[derive(Debug, Clone)]
pub struct Rooted {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    /// Children sorted by id.
    pub children: Vec<Vec<usize>>,
    /// Breadth-first order starting at the root.
    pub order: Vec<usize>,
}
