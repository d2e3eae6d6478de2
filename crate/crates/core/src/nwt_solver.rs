//! Witness construction for CA-Node-Steiner trees: terminal stripping, component
//! decomposition, the bottom-up marking rule and exact audits of its analysis.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, WitnessError};
use crate::harmonic::harmonic;
use crate::laminar::crossing_pairs;
use crate::rational::{q, Rational};
use crate::tree::{EdgeSpec, NodeId, NodeSpec, Tree};
use crate::witness::{eval_nwt, Variant, WitnessTree};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgorithmConstants {
    pub phi: Rational,
    pub delta: Rational,
    /// `phi - delta - H_2`, the cut-off for preferring a non-final child.
    pub threshold: Rational,
}

impl AlgorithmConstants {
    pub fn new() -> Self {
        let phi = q(781, 420);
        let delta = q(97, 420);
        let threshold = &phi - &delta - harmonic(2);
        AlgorithmConstants { phi, delta, threshold }
    }

    pub fn beta(&self, k: usize) -> Rational {
        if k <= 8 {
            Rational::zero()
        } else {
            q(1, 3) - &self.delta
        }
    }
}

impl Default for AlgorithmConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// Steiner nodes adjacent to at least one terminal. A host without terminals is taken
/// as already stripped and its final flags are returned.
pub fn final_nodes(tree: &Tree) -> Result<BTreeSet<NodeId>> {
    if tree.terminal_indices().is_empty() {
        return Ok(tree.final_indices().into_iter().map(|i| tree.id(i)).collect());
    }
    let mut out = BTreeSet::new();
    for v in tree.steiner_indices() {
        let t = tree.neighbors(v).iter().filter(|&&(u, _)| tree.is_terminal(u)).count();
        if t >= 3 {
            return Err(WitnessError::CaViolation { node: tree.id(v), terminals: t });
        }
        if t > 0 {
            out.insert(tree.id(v));
        }
    }
    Ok(out)
}

/// Host restricted to its Steiner nodes, with final flags set.
#[derive(Debug, Clone)]
pub struct Stripped {
    pub tree: Tree,
    /// Terminals that were attached to each final node.
    pub terminals: BTreeMap<NodeId, Vec<NodeId>>,
}

pub fn strip_terminals(tree: &Tree) -> Result<Stripped> {
    let finals = final_nodes(tree)?;
    if tree.terminal_indices().is_empty() {
        return Ok(Stripped { tree: tree.clone(), terminals: BTreeMap::new() });
    }
    let mut terminals: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for t in tree.terminal_indices() {
        let (s, _) = tree.neighbors(t)[0];
        if tree.is_terminal(s) {
            return Err(WitnessError::InvalidTree("two adjacent terminals".into()));
        }
        terminals.entry(tree.id(s)).or_default().push(tree.id(t));
    }
    let nodes = tree
        .steiner_indices()
        .into_iter()
        .map(|v| {
            let id = tree.id(v);
            if finals.contains(&id) {
                NodeSpec::final_steiner(id)
            } else {
                NodeSpec::steiner(id)
            }
        })
        .collect();
    let edges = (0..tree.edge_count())
        .filter(|&e| {
            let (a, b) = tree.edge(e);
            !tree.is_terminal(a) && !tree.is_terminal(b)
        })
        .map(|e| {
            let (a, b) = tree.edge_ids(e);
            EdgeSpec::new(a, b)
        })
        .collect();
    Ok(Stripped { tree: Tree::new(nodes, edges)?, terminals })
}

/// Subtree whose leaves are final and whose other nodes are not; rooted at a final
/// node of degree one in the component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub root: NodeId,
    pub nodes: Vec<NodeId>,
    pub edges: Vec<(NodeId, NodeId)>,
}

/// Splits a stripped host at its final nodes. Components are listed breadth-first from
/// `root` over final nodes, so every prefix of the list is connected.
pub fn decompose(tree: &Tree, root: NodeId) -> Result<Vec<Component>> {
    let r = tree.idx(root)?;
    if !tree.is_final(r) {
        return Err(WitnessError::NotFinal(root));
    }
    let n = tree.node_count();
    let mut used = vec![false; tree.edge_count()];
    let mut queued = vec![false; n];
    let mut finals = VecDeque::from([r]);
    queued[r] = true;
    let mut out = Vec::new();
    while let Some(f) = finals.pop_front() {
        for &(first, e0) in tree.neighbors(f) {
            if used[e0] {
                continue;
            }
            used[e0] = true;
            let mut nodes = BTreeSet::from([tree.id(f), tree.id(first)]);
            let mut edges = vec![ordered(tree.edge_ids(e0))];
            let mut stack = vec![first];
            while let Some(x) = stack.pop() {
                if tree.is_final(x) {
                    if !queued[x] {
                        queued[x] = true;
                        finals.push_back(x);
                    }
                    continue;
                }
                for &(y, e) in tree.neighbors(x) {
                    if !used[e] {
                        used[e] = true;
                        nodes.insert(tree.id(y));
                        edges.push(ordered(tree.edge_ids(e)));
                        stack.push(y);
                    }
                }
            }
            edges.sort_unstable();
            out.push(Component { root: tree.id(f), nodes: nodes.into_iter().collect(), edges });
        }
    }
    Ok(out)
}

fn ordered((a, b): (NodeId, NodeId)) -> (NodeId, NodeId) {
    (a.min(b), a.max(b))
}

/// Per-node record of the bottom-up construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildState {
    pub node: NodeId,
    pub children: Vec<NodeId>,
    pub marked: Option<NodeId>,
    /// `P(u)`: marked path from `u` down to `leaf`.
    pub path: Vec<NodeId>,
    pub leaf: NodeId,
    /// Edges of the partial witness on the leaves of `Q_u`.
    pub partial: Vec<(NodeId, NodeId)>,
    /// `e^u = leaf(u) leaf(a(u))`.
    pub extra: (NodeId, NodeId),
    /// Nodes of `Q_u`, sorted.
    pub subtree: Vec<NodeId>,
    /// Vector imposed on `Q_u` by the partial witness.
    pub partial_counts: BTreeMap<NodeId, usize>,
    /// Vector imposed on `Q_u` by the partial witness plus `extra`.
    pub counts: BTreeMap<NodeId, usize>,
}

/// `C^u_j = sum over P(u) minus leaf(u) of 1 / (wbar(v) + j + 1)`.
pub fn c_value(state: &BuildState, j: usize) -> Rational {
    state
        .path
        .iter()
        .filter(|&&v| v != state.leaf)
        .map(|v| Rational::unit_fraction((state.partial_counts[v] + j + 1) as u64))
        .sum()
}

/// Sum of `H_{w^u(v)}` over `Q_u`.
pub fn h_value(state: &BuildState) -> Rational {
    state.counts.values().map(|&c| harmonic(c)).sum()
}

struct CompView {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// Non-root nodes, children before parents.
    post: Vec<usize>,
}

fn view(tree: &Tree, c: &Component) -> Result<CompView> {
    let n = tree.node_count();
    let r = tree.idx(c.root)?;
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &c.edges {
        let (ia, ib) = (tree.idx(a)?, tree.idx(b)?);
        adj[ia].push(ib);
        adj[ib].push(ia);
    }
    if adj[r].len() != 1 {
        return Err(WitnessError::InvalidComponent(format!(
            "root {} has degree {} in its component",
            c.root,
            adj[r].len()
        )));
    }
    let mut parent = vec![None; n];
    let mut children = vec![Vec::new(); n];
    let mut order = Vec::new();
    let mut seen = vec![false; n];
    seen[r] = true;
    let mut queue = VecDeque::from([r]);
    while let Some(x) = queue.pop_front() {
        let mut ch: Vec<usize> = adj[x].iter().copied().filter(|&y| !seen[y]).collect();
        ch.sort_by_key(|&y| tree.id(y));
        for &y in &ch {
            seen[y] = true;
            parent[y] = Some(x);
            order.push(y);
            queue.push_back(y);
        }
        children[x] = ch;
    }
    if order.len() + 1 != c.nodes.len() {
        return Err(WitnessError::InvalidComponent("component is not a tree".into()));
    }
    for &v in &order {
        let leaf = children[v].is_empty();
        if leaf != tree.is_final(v) {
            return Err(WitnessError::InvalidComponent(format!(
                "node {} is {} but {}",
                tree.id(v),
                if leaf { "a leaf" } else { "internal" },
                if tree.is_final(v) { "final" } else { "not final" }
            )));
        }
    }
    order.reverse();
    Ok(CompView { root: r, parent, children, post: order })
}

/// Component-node counts restricted to `scope`: nodes on each edge's path, plus one
/// for final nodes.
fn scoped_counts(tree: &Tree, edges: &[(NodeId, NodeId)], scope: &[NodeId]) -> BTreeMap<NodeId, usize> {
    let mut c: BTreeMap<NodeId, usize> = scope
        .iter()
        .map(|&v| (v, usize::from(tree.is_final(tree.idx(v).unwrap()))))
        .collect();
    for &(a, b) in edges {
        let p = tree.path_nodes(tree.idx(a).unwrap(), tree.idx(b).unwrap());
        for v in p {
            if let Some(x) = c.get_mut(&tree.id(v)) {
                *x += 1;
            }
        }
    }
    c
}

/// Picks the marked child among `children` (host indices) following the final/non-final rule;
/// ties go to the smallest id.
fn select_marked(tree: &Tree, children: &[usize], c1: &[Rational], k: &AlgorithmConstants) -> usize {
    let argmin = |pool: Vec<usize>| -> usize {
        pool.into_iter()
            .min_by(|&a, &b| c1[a].cmp(&c1[b]).then(tree.id(children[a]).cmp(&tree.id(children[b]))))
            .unwrap()
    };
    let fin: Vec<usize> = (0..children.len()).filter(|&j| tree.is_final(children[j])).collect();
    let non: Vec<usize> = (0..children.len()).filter(|&j| !tree.is_final(children[j])).collect();
    if fin.is_empty() {
        return argmin(non);
    }
    let cheap: Vec<usize> = non.iter().copied().filter(|&j| c1[j] < k.threshold).collect();
    if cheap.is_empty() {
        argmin(fin)
    } else {
        argmin(cheap)
    }
}

/// Runs the bottom-up construction on one component. Returns the component witness and
/// the state of every non-root node.
pub fn build_component_witness(tree: &Tree, comp: &Component) -> Result<(WitnessTree, BTreeMap<NodeId, BuildState>)> {
    let v = view(tree, comp)?;
    let consts = AlgorithmConstants::new();
    let n = tree.node_count();
    let mut leaf = vec![usize::MAX; n];
    let mut states: BTreeMap<NodeId, BuildState> = BTreeMap::new();
    for &u in &v.post {
        let uid = tree.id(u);
        let ch = &v.children[u];
        if ch.is_empty() {
            leaf[u] = u;
            states.insert(
                uid,
                BuildState {
                    node: uid,
                    children: Vec::new(),
                    marked: None,
                    path: vec![uid],
                    leaf: uid,
                    partial: Vec::new(),
                    extra: (uid, uid),
                    subtree: vec![uid],
                    partial_counts: BTreeMap::from([(uid, 1)]),
                    counts: BTreeMap::new(),
                },
            );
            continue;
        }
        let c1: Vec<Rational> = ch.iter().map(|&c| c_value(&states[&tree.id(c)], 1)).collect();
        let m = select_marked(tree, ch, &c1, &consts);
        let um = ch[m];
        leaf[u] = leaf[um];
        let mut partial = Vec::new();
        let mut subtree = vec![uid];
        for (j, &c) in ch.iter().enumerate() {
            let s = &states[&tree.id(c)];
            partial.extend_from_slice(&s.partial);
            subtree.extend_from_slice(&s.subtree);
            if j != m {
                partial.push(ordered((tree.id(leaf[um]), tree.id(leaf[c]))));
            }
        }
        partial.sort_unstable();
        subtree.sort_unstable();
        let mut path = vec![uid];
        path.extend_from_slice(&states[&tree.id(um)].path);
        let partial_counts = scoped_counts(tree, &partial, &subtree);
        states.insert(
            uid,
            BuildState {
                node: uid,
                children: ch.iter().map(|&c| tree.id(c)).collect(),
                marked: Some(tree.id(um)),
                path,
                leaf: tree.id(leaf[u]),
                partial,
                extra: (uid, uid),
                subtree,
                partial_counts,
                counts: BTreeMap::new(),
            },
        );
    }
    leaf[v.root] = v.root;
    for &u in &v.post {
        let mut a = v.parent[u].unwrap();
        while leaf[a] == leaf[u] {
            a = v.parent[a].unwrap();
        }
        let s = states.get_mut(&tree.id(u)).unwrap();
        s.extra = ordered((tree.id(leaf[u]), tree.id(leaf[a])));
        let mut with_extra = s.partial.clone();
        with_extra.push(s.extra);
        s.counts = scoped_counts(tree, &with_extra, &s.subtree);
    }
    let top = v.children[v.root][0];
    let s = &states[&tree.id(top)];
    let mut edges = s.partial.clone();
    edges.push(s.extra);
    Ok((WitnessTree::new(edges)?, states))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub node: NodeId,
    pub component: usize,
    pub children: usize,
    pub subtree_size: usize,
    pub residual: Rational,
}

/// `phi |Q_u| - h_{W^u}(Q_u) - C^u_1 - delta - beta(k)` for every state.
pub fn audit_invariant(states: &BTreeMap<NodeId, BuildState>) -> Vec<Residual> {
    let k = AlgorithmConstants::new();
    states
        .values()
        .map(|s| {
            let size = Rational::integer(s.subtree.len() as i64);
            let residual = &k.phi * &size - h_value(s) - c_value(s, 1) - &k.delta - k.beta(s.children.len());
            Residual { node: s.node, component: 0, children: s.children.len(), subtree_size: s.subtree.len(), residual }
        })
        .collect()
}

/// Exact checks made at one join of the bottom-up construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JoinAudit {
    pub node: NodeId,
    pub marked: NodeId,
    pub increase_a: bool,
    pub increase_b: bool,
    pub increase_c: bool,
    pub increase_d: bool,
    pub bounds_identity: bool,
    /// Only checked when every child is non-final, as in the proof that uses it.
    pub bounds_1: Option<bool>,
    /// Only checked when the marked child is non-final.
    pub bounds_2: Option<bool>,
}

impl JoinAudit {
    pub fn passed(&self) -> bool {
        self.increase_a
            && self.increase_b
            && self.increase_c
            && self.increase_d
            && self.bounds_identity
            && self.bounds_1 != Some(false)
            && self.bounds_2 != Some(false)
    }
}

fn hsum(counts: &BTreeMap<NodeId, usize>, nodes: impl IntoIterator<Item = NodeId>) -> Rational {
    nodes.into_iter().map(|v| harmonic(counts[&v])).sum()
}

pub fn audit_joins(tree: &Tree, states: &BTreeMap<NodeId, BuildState>) -> Vec<JoinAudit> {
    let mut out = Vec::new();
    for s in states.values() {
        let Some(m) = s.marked else { continue };
        let k = s.children.len();
        let sm = &states[&m];
        let on_path: BTreeSet<NodeId> = sm.path.iter().copied().collect();
        let increase_a = s.counts[&s.node] == k;
        let increase_b = s
            .children
            .iter()
            .filter(|&&c| c != m)
            .all(|c| states[c].counts.iter().all(|(v, &x)| s.counts[v] == x));
        let increase_c = sm.counts.iter().filter(|(v, _)| !on_path.contains(v)).all(|(v, &x)| s.counts[v] == x);
        let inner: Vec<NodeId> = sm.path.iter().copied().filter(|&v| v != sm.leaf).collect();
        let lhs = hsum(&s.counts, inner.iter().copied());
        let rhs = hsum(&sm.counts, inner.iter().copied()) + (1..k).map(|j| c_value(sm, j)).sum::<Rational>();
        let increase_d = lhs == rhs;
        let bounds_identity = c_value(s, 1) == c_value(sm, k) + Rational::unit_fraction(k as u64 + 1);
        let m_final = tree.is_final(tree.idx(m).unwrap());
        let d = sm.children.len() + 1;
        let all_non_final = s.children.iter().all(|c| !tree.is_final(tree.idx(*c).unwrap()));
        let bounds_1 = (all_non_final && !m_final).then(|| {
            let lhs: Rational = (1..=k)
                .map(|j| c_value(sm, j) - c_value(&states[&s.children[j - 1]], 1))
                .sum();
            let rhs: Rational = (1..k)
                .map(|j| Rational::unit_fraction((d + j) as u64) - Rational::unit_fraction(d as u64))
                .sum();
            lhs <= rhs
        });
        let bounds_2 = (!m_final).then(|| {
            let l = sm.leaf;
            let lhs = harmonic(s.counts[&l]) - harmonic(sm.counts[&l]);
            let rhs: Rational = (1..k).map(|j| Rational::unit_fraction((d + j) as u64)).sum();
            lhs <= rhs
        });
        out.push(JoinAudit {
            node: s.node,
            marked: m,
            increase_a,
            increase_b,
            increase_c,
            increase_d,
            bounds_identity,
            bounds_1,
            bounds_2,
        });
    }
    out
}

/// Check made when component `index` is added to the union of the earlier ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergeAudit {
    pub index: usize,
    pub root: NodeId,
    /// Count at the component root before the merge (`None` for the first component).
    pub root_count_before: Option<usize>,
    /// Objective of the merged prefix over its own nodes.
    pub prefix_value: Rational,
    /// Later merges: the root gains `1/(w'(r)+1)` with `w'(r) >= 2`. That gain must fit in
    /// `C_1 + delta + beta(k)` of the root's child, or in `phi - H_2` when the child is final.
    pub slack_ok: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NwtReport {
    pub witness: WitnessTree,
    pub value: Rational,
    pub phi: Rational,
    pub within_bound: bool,
    pub root: Option<NodeId>,
    pub components: Vec<Component>,
    pub component_laminar: Vec<bool>,
    pub residuals: Vec<Residual>,
    pub min_residual: Option<Rational>,
    pub joins: Vec<JoinAudit>,
    pub merges: Vec<MergeAudit>,
    /// Terminals stripped from each final node.
    pub terminals: BTreeMap<NodeId, Vec<NodeId>>,
    pub passed: bool,
}

fn prefix_value(tree: &Tree, nodes: &BTreeSet<NodeId>, edges: &[(NodeId, NodeId)]) -> (Rational, BTreeMap<NodeId, usize>) {
    let scope: Vec<NodeId> = nodes.iter().copied().collect();
    let c = scoped_counts(tree, edges, &scope);
    let total: Rational = c.values().map(|&x| harmonic(x)).sum();
    (total / Rational::integer(scope.len() as i64), c)
}

/// Strips terminals, decomposes at the smallest-id final node and joins the component
/// witnesses. Every lemma the analysis relies on is checked along the way.
pub fn solve_nwt(tree: &Tree) -> Result<NwtReport> {
    let consts = AlgorithmConstants::new();
    let stripped = strip_terminals(tree)?;
    let ts = &stripped.tree;
    let finals = ts.final_indices();
    if finals.is_empty() {
        return Err(WitnessError::InvalidTree("no final nodes".into()));
    }
    if ts.node_count() == 1 {
        let witness = WitnessTree::new(Vec::new())?;
        let value = eval_nwt(ts, &witness, Variant::ComponentNode)?;
        return Ok(NwtReport {
            within_bound: value <= consts.phi,
            passed: value <= consts.phi,
            witness,
            value,
            phi: consts.phi,
            root: Some(ts.id(0)),
            components: Vec::new(),
            component_laminar: Vec::new(),
            residuals: Vec::new(),
            min_residual: None,
            joins: Vec::new(),
            merges: Vec::new(),
            terminals: stripped.terminals,
        });
    }
    for v in 0..ts.node_count() {
        if ts.degree(v) == 1 && !ts.is_final(v) {
            return Err(WitnessError::InvalidTree(format!("Steiner leaf {} has no terminal", ts.id(v))));
        }
    }
    let root = ts.id(finals[0]);
    let components = decompose(ts, root)?;
    let built: Vec<(WitnessTree, BTreeMap<NodeId, BuildState>)> = components
        .par_iter()
        .map(|c| build_component_witness(ts, c))
        .collect::<Result<_>>()?;

    let mut residuals = Vec::new();
    let mut joins = Vec::new();
    let mut component_laminar = Vec::new();
    for (i, (w, states)) in built.iter().enumerate() {
        residuals.extend(audit_invariant(states).into_iter().map(|mut r| {
            r.component = i;
            r
        }));
        joins.extend(audit_joins(ts, states));
        let pairs: Vec<(usize, usize)> = w.edges().iter().map(|&(a, b)| (ts.idx(a).unwrap(), ts.idx(b).unwrap())).collect();
        component_laminar.push(crossing_pairs(ts, &pairs).is_empty());
    }

    let mut merges = Vec::new();
    let mut nodes: BTreeSet<NodeId> = BTreeSet::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut prev_counts: BTreeMap<NodeId, usize> = BTreeMap::new();
    for (i, (c, (w, states))) in components.iter().zip(&built).enumerate() {
        let before = (i > 0).then(|| prev_counts[&c.root]);
        let slack_ok = match before {
            None => true,
            Some(b) => {
                let gain = Rational::unit_fraction(b as u64 + 1);
                let child = c
                    .edges
                    .iter()
                    .find_map(|&(a, b)| if a == c.root { Some(b) } else if b == c.root { Some(a) } else { None })
                    .expect("component root has a child");
                match states.get(&child) {
                    Some(s) if !s.children.is_empty() => {
                        b >= 2 && gain <= c_value(s, 1) + &consts.delta + consts.beta(s.children.len())
                    }
                    _ => b >= 2 && harmonic(2) + gain <= consts.phi,
                }
            }
        };
        nodes.extend(c.nodes.iter().copied());
        edges.extend_from_slice(w.edges());
        let (prefix_value, counts) = prefix_value(ts, &nodes, &edges);
        prev_counts = counts;
        let ok = slack_ok && prefix_value <= consts.phi;
        merges.push(MergeAudit { index: i, root: c.root, root_count_before: before, prefix_value, slack_ok, ok });
    }

    let witness = WitnessTree::new(edges)?;
    let value = eval_nwt(ts, &witness, Variant::ComponentNode)?;
    let within_bound = value <= consts.phi;
    let min_residual = residuals.iter().map(|r| r.residual.clone()).min();
    let passed = within_bound
        && min_residual.as_ref().is_none_or(|m| !m.is_negative())
        && joins.iter().all(JoinAudit::passed)
        && merges.iter().all(|m| m.ok)
        && component_laminar.iter().all(|&b| b);
    Ok(NwtReport {
        witness,
        value,
        phi: consts.phi,
        within_bound,
        root: Some(root),
        components,
        component_laminar,
        residuals,
        min_residual,
        joins,
        merges,
        terminals: stripped.terminals,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_nwt_lb, nwt_ids};

    fn flagged(finals: &[NodeId], others: &[NodeId], edges: &[(NodeId, NodeId)]) -> Tree {
        let mut nodes: Vec<NodeSpec> = finals.iter().map(|&f| NodeSpec::final_steiner(f)).collect();
        nodes.extend(others.iter().map(|&s| NodeSpec::steiner(s)));
        Tree::new(nodes, edges.iter().map(|&(a, b)| EdgeSpec::new(a, b)).collect()).unwrap()
    }

    // f1=1, x=2, f2=3, y=4, f3=5
    fn path5() -> Tree {
        flagged(&[1, 3, 5], &[2, 4], &[(1, 2), (2, 3), (3, 4), (4, 5)])
    }

    #[test]
    fn constants() {
        let k = AlgorithmConstants::new();
        assert_eq!(k.threshold, q(9, 70));
        assert_eq!(k.beta(8), Rational::zero());
        assert_eq!(k.beta(9) + &k.delta, q(1, 3));
    }

    #[test]
    fn final_node_detection() {
        let star = Tree::new(
            vec![NodeSpec::steiner(0), NodeSpec::terminal(1), NodeSpec::terminal(2), NodeSpec::terminal(3)],
            vec![EdgeSpec::new(0, 1), EdgeSpec::new(0, 2), EdgeSpec::new(0, 3)],
        )
        .unwrap();
        assert_eq!(final_nodes(&star), Err(WitnessError::CaViolation { node: 0, terminals: 3 }));

        let path = Tree::new(
            vec![NodeSpec::steiner(1), NodeSpec::steiner(2), NodeSpec::steiner(3), NodeSpec::terminal(10), NodeSpec::terminal(11)],
            vec![EdgeSpec::new(1, 2), EdgeSpec::new(2, 3), EdgeSpec::new(1, 10), EdgeSpec::new(3, 11)],
        )
        .unwrap();
        assert_eq!(final_nodes(&path).unwrap(), BTreeSet::from([1, 3]));

        let g = gen_nwt_lb(1).unwrap();
        let want: BTreeSet<NodeId> = (1..=3).map(|j| nwt_ids::t(1, j)).collect();
        assert_eq!(final_nodes(&g).unwrap(), want);
    }

    #[test]
    fn decomposition() {
        let comps = decompose(&path5(), 1).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], Component { root: 1, nodes: vec![1, 2, 3], edges: vec![(1, 2), (2, 3)] });
        assert_eq!(comps[1], Component { root: 3, nodes: vec![3, 4, 5], edges: vec![(3, 4), (4, 5)] });

        let edge = flagged(&[1, 2], &[], &[(1, 2)]);
        assert_eq!(decompose(&edge, 1).unwrap().len(), 1);

        // final node 0 of degree 3 in the middle of three paths
        let spider = flagged(&[0, 2, 4, 6], &[1, 3, 5], &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
        let comps = decompose(&spider, 2).unwrap();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps.iter().filter(|c| c.nodes.contains(&0)).count(), 3);
        assert_eq!(decompose(&spider, 1), Err(WitnessError::NotFinal(1)));
    }

    #[test]
    fn path_component() {
        let t = path5();
        let comps = decompose(&t, 1).unwrap();
        let (w, states) = build_component_witness(&t, &comps[0]).unwrap();
        assert_eq!(w.edges(), &[(1, 3)]);
        assert_eq!(c_value(&states[&2], 1), q(1, 2));
        assert_eq!(c_value(&states[&3], 1), Rational::zero());
        let res: BTreeMap<NodeId, Rational> = audit_invariant(&states).into_iter().map(|r| (r.node, r.residual)).collect();
        assert_eq!(res[&3], q(9, 70));
        assert_eq!(res[&2], q(41, 84));
    }

    #[test]
    fn solve_examples() {
        let r = solve_nwt(&path5()).unwrap();
        assert_eq!(r.witness.edges(), &[(1, 3), (3, 5)]);
        assert_eq!(r.value, q(41, 30));
        assert!(r.passed);

        let edge = flagged(&[1, 2], &[], &[(1, 2)]);
        assert_eq!(solve_nwt(&edge).unwrap().value, q(3, 2));

        let g = gen_nwt_lb(3).unwrap();
        let r = solve_nwt(&g).unwrap();
        assert!(r.value >= q(53, 30) && r.value <= q(781, 420), "{}", r.value);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.terminals.len(), 9);
    }

    #[test]
    fn join_degree_and_ties() {
        // x=0 with non-final children a=1, b=2, each over two finals
        let t = flagged(&[9, 3, 4, 5, 6], &[0, 1, 2], &[(9, 0), (0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]);
        let comps = decompose(&t, 9).unwrap();
        let (_, states) = build_component_witness(&t, &comps[0]).unwrap();
        assert_eq!(states[&0].marked, Some(1));
        assert_eq!(states[&0].counts[&0], 2);
        assert!(audit_joins(&t, &states).iter().all(JoinAudit::passed));
    }
}
