//! Crossing witness edges, laminarity, marking-and-contraction, and uncrossing.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Result, WitnessError};
use crate::rational::Rational;
use crate::tree::{NodeId, Rooted, Tree};
use crate::witness::{eval, witness_vertices, Variant, WitnessTree};

fn internal_nodes(tree: &Tree, a: usize, b: usize) -> Vec<usize> {
    let p = tree.path_nodes(a, b);
    if p.len() <= 2 {
        Vec::new()
    } else {
        p[1..p.len() - 1].to_vec()
    }
}

fn check_vertex(tree: &Tree, id: NodeId) -> Result<usize> {
    let i = tree.idx(id)?;
    if tree.is_terminal(i) || tree.is_final(i) {
        Ok(i)
    } else {
        Err(WitnessError::InvalidWitness(format!("{id} is not a terminal")))
    }
}

/// True iff the two witness edges' tree paths share an internal node and no endpoint.
pub fn edges_cross(tree: &Tree, e1: (NodeId, NodeId), e2: (NodeId, NodeId)) -> Result<bool> {
    let n1 = (e1.0.min(e1.1), e1.0.max(e1.1));
    let n2 = (e2.0.min(e2.1), e2.0.max(e2.1));
    if n1 == n2 {
        return Err(WitnessError::IdenticalEdges(n1.0, n1.1));
    }
    let (a, b) = (check_vertex(tree, e1.0)?, check_vertex(tree, e1.1)?);
    let (c, d) = (check_vertex(tree, e2.0)?, check_vertex(tree, e2.1)?);
    Ok(cross_idx(tree, (a, b), (c, d)))
}

pub(crate) fn cross_idx(tree: &Tree, (a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let first: BTreeSet<usize> = internal_nodes(tree, a, b).into_iter().collect();
    internal_nodes(tree, c, d).iter().any(|v| first.contains(v))
}

/// All crossing pairs `(i, j)`, `i < j`, as positions in `pairs`.
pub(crate) fn crossing_pairs(tree: &Tree, pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let paths: Vec<Vec<usize>> = pairs.iter().map(|&(a, b)| internal_nodes(tree, a, b)).collect();
    let mut mark = vec![usize::MAX; tree.node_count()];
    let mut out = Vec::new();
    for i in 0..pairs.len() {
        for &v in &paths[i] {
            mark[v] = i;
        }
        let (a, b) = pairs[i];
        for j in i + 1..pairs.len() {
            let (c, d) = pairs[j];
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if paths[j].iter().any(|&v| mark[v] == i) {
                out.push((i, j));
            }
        }
    }
    out
}

fn vertex_set_variant(tree: &Tree) -> Variant {
    if tree.terminal_indices().is_empty() {
        Variant::ComponentNode
    } else {
        Variant::Node
    }
}

pub fn is_laminar(tree: &Tree, w: &WitnessTree) -> Result<bool> {
    let pairs = w.validate(tree, vertex_set_variant(tree))?;
    Ok(crossing_pairs(tree, &pairs).is_empty())
}

/// First crossing pair in sorted edge order, if any.
pub fn first_crossing(tree: &Tree, w: &WitnessTree) -> Result<Option<((NodeId, NodeId), (NodeId, NodeId))>> {
    let pairs = w.validate(tree, vertex_set_variant(tree))?;
    Ok(crossing_pairs(tree, &pairs).first().map(|&(i, j)| (w.edges()[i], w.edges()[j])))
}

/// One marked child per non-leaf node of the tree oriented away from `root`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Marking {
    pub root: NodeId,
    pub choice: BTreeMap<NodeId, NodeId>,
}

/// Smallest-id node of degree at least two.
pub fn default_root(tree: &Tree) -> Option<NodeId> {
    tree.internal_indices().first().map(|&i| tree.id(i))
}

/// Index-level view of a rooted host used by marking enumeration.
#[derive(Debug, Clone)]
pub struct Frame {
    pub root: usize,
    pub rooted: Rooted,
    /// Nodes with at least one child, in id order.
    pub internal: Vec<usize>,
    slot: Vec<usize>,
}

impl Frame {
    /// Orients `tree` from `root`. Every leaf must be a terminal and the root must be
    /// an internal node unless the tree has none.
    pub fn new(tree: &Tree, root: NodeId) -> Result<Frame> {
        let r = tree.idx(root)?;
        for v in 0..tree.node_count() {
            if tree.degree(v) <= 1 && !tree.is_terminal(v) {
                return Err(WitnessError::InvalidTree(format!(
                    "leaf {} is not a terminal; marking needs leaves = terminals",
                    tree.id(v)
                )));
            }
        }
        let has_internal = !tree.internal_indices().is_empty();
        if has_internal && tree.degree(r) < 2 {
            return Err(WitnessError::MarkingMismatch(format!("root {root} is not an internal node")));
        }
        let rooted = tree.rooted(r);
        let internal: Vec<usize> = if has_internal {
            (0..tree.node_count()).filter(|&v| !rooted.children[v].is_empty()).collect()
        } else {
            Vec::new()
        };
        let mut slot = vec![usize::MAX; tree.node_count()];
        for (k, &v) in internal.iter().enumerate() {
            slot[v] = k;
        }
        Ok(Frame { root: r, rooted, internal, slot })
    }

    pub fn radices(&self) -> Vec<usize> {
        self.internal.iter().map(|&v| self.rooted.children[v].len()).collect()
    }

    /// Number of markings, saturating at `u128::MAX`.
    pub fn space(&self) -> u128 {
        self.radices().iter().fold(1u128, |acc, &k| acc.saturating_mul(k as u128))
    }

    /// Witness pairs (host indices) for the marking whose `k`-th internal node marks
    /// child number `choice[k]`.
    pub fn pairs(&self, tree: &Tree, choice: &[usize]) -> Vec<(usize, usize)> {
        if self.internal.is_empty() {
            return (0..tree.edge_count()).map(|e| tree.edge(e)).collect();
        }
        let n = self.slot.len();
        let mut rep = vec![usize::MAX; n];
        for &v in self.rooted.order.iter().rev() {
            let ch = &self.rooted.children[v];
            rep[v] = if ch.is_empty() { v } else { rep[ch[choice[self.slot[v]]]] };
        }
        let mut out = Vec::with_capacity(n);
        for &c in &self.rooted.order {
            if let Some(p) = self.rooted.parent[c] {
                if self.rooted.children[p][choice[self.slot[p]]] != c {
                    out.push((rep[p], rep[c]));
                }
            }
        }
        out
    }

    fn choice_of(&self, tree: &Tree, m: &Marking) -> Result<Vec<usize>> {
        if tree.idx(m.root)? != self.root {
            return Err(WitnessError::MarkingMismatch("root differs from frame".into()));
        }
        let mut out = Vec::with_capacity(self.internal.len());
        if m.choice.len() != self.internal.len() {
            return Err(WitnessError::MarkingMismatch(format!(
                "marking has {} entries, rooted tree has {} non-leaf nodes",
                m.choice.len(),
                self.internal.len()
            )));
        }
        for &v in &self.internal {
            let id = tree.id(v);
            let c = *m
                .choice
                .get(&id)
                .ok_or_else(|| WitnessError::MarkingMismatch(format!("no choice for node {id}")))?;
            let ci = tree.idx(c)?;
            let pos = self.rooted.children[v]
                .iter()
                .position(|&x| x == ci)
                .ok_or_else(|| WitnessError::MarkingMismatch(format!("{c} is not a child of {id}")))?;
            out.push(pos);
        }
        Ok(out)
    }

    pub fn marking(&self, tree: &Tree, choice: &[usize]) -> Marking {
        Marking {
            root: tree.id(self.root),
            choice: self
                .internal
                .iter()
                .zip(choice)
                .map(|(&v, &k)| (tree.id(v), tree.id(self.rooted.children[v][k])))
                .collect(),
        }
    }
}

pub(crate) fn to_witness(tree: &Tree, pairs: &[(usize, usize)]) -> WitnessTree {
    WitnessTree::new(pairs.iter().map(|&(a, b)| (tree.id(a), tree.id(b))))
        .expect("contraction yields distinct non-loop edges")
}

/// Contracts the marked paths; the images of unmarked tree edges form the witness tree.
pub fn witness_from_marking(tree: &Tree, m: &Marking) -> Result<WitnessTree> {
    let frame = Frame::new(tree, m.root)?;
    let choice = frame.choice_of(tree, m)?;
    Ok(to_witness(tree, &frame.pairs(tree, &choice)))
}

/// Recovers a marking that contracts to `w`.
///
/// Marked edges are those lying on at least two witness paths. That rule leaves
/// degree-2 nodes undetermined; they get their forced child, and a degree-2 root
/// with no marked child edge takes its smallest child (both choices contract to
/// the same tree). Roots are tried in id order because not every laminar tree is
/// reachable from every root.
pub fn marking_from_witness(tree: &Tree, w: &WitnessTree) -> Result<Marking> {
    let pairs = w.validate(tree, Variant::Node)?;
    if let Some(&(i, j)) = crossing_pairs(tree, &pairs).first() {
        return Err(WitnessError::NotLaminar(w.edges()[i], w.edges()[j]));
    }
    let mut count = vec![0usize; tree.edge_count()];
    for &(a, b) in &pairs {
        for e in tree.path_edges(a, b) {
            count[e] += 1;
        }
    }
    let target = w.edges();
    let roots: Vec<usize> = {
        let internal = tree.internal_indices();
        if internal.is_empty() {
            vec![0]
        } else {
            internal
        }
    };
    for r in roots {
        let frame = Frame::new(tree, tree.id(r))?;
        let mut choice = Vec::with_capacity(frame.internal.len());
        let mut ok = true;
        for &v in &frame.internal {
            let ch = &frame.rooted.children[v];
            let pick = if ch.len() == 1 {
                Some(0)
            } else {
                let marked: Vec<usize> = (0..ch.len())
                    .filter(|&k| count[tree.edge_between(v, ch[k]).unwrap()] >= 2)
                    .collect();
                match marked.len() {
                    1 => Some(marked[0]),
                    0 if v == frame.root && ch.len() == 2 => Some(0),
                    _ => None,
                }
            };
            match pick {
                Some(k) => choice.push(k),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if to_witness(tree, &frame.pairs(tree, &choice)).edges() == target {
            return Ok(frame.marking(tree, &choice));
        }
    }
    Err(WitnessError::MarkingMismatch(format!("no rooting contracts to {w}")))
}

/// Region form of a laminar witness tree: every non-terminal node points at the
/// neighbour on its way to the single terminal of its region. No two nodes point
/// at each other, so following pointers always ends at a terminal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Regions {
    pub toward: BTreeMap<NodeId, NodeId>,
}

impl Regions {
    pub fn from_marking(tree: &Tree, m: &Marking) -> Result<Regions> {
        Frame::new(tree, m.root)?;
        Ok(Regions { toward: m.choice.clone() })
    }
}

/// Index form of [`Regions`]: `ptr[v]` is the pointed-to neighbour of non-terminal `v`.
pub(crate) fn region_pairs(tree: &Tree, ptr: &[Option<usize>]) -> Option<Vec<(usize, usize)>> {
    let n = tree.node_count();
    let mut term = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for v in 0..n {
        let mut x = v;
        while term[x] == usize::MAX {
            match ptr[x] {
                None => {
                    if !tree.is_terminal(x) {
                        return None;
                    }
                    term[x] = x;
                }
                Some(y) => {
                    if ptr[y] == Some(x) || stack.len() > n {
                        return None;
                    }
                    stack.push(x);
                    x = y;
                }
            }
        }
        let t = term[x];
        for y in stack.drain(..) {
            term[y] = t;
        }
    }
    let mut out = Vec::new();
    for e in 0..tree.edge_count() {
        let (a, b) = tree.edge(e);
        if ptr[a] != Some(b) && ptr[b] != Some(a) {
            out.push((term[a], term[b]));
        }
    }
    Some(out)
}

fn region_ptr(tree: &Tree, r: &Regions) -> Result<Vec<Option<usize>>> {
    let mut ptr = vec![None; tree.node_count()];
    for (&v, &u) in &r.toward {
        let (vi, ui) = (tree.idx(v)?, tree.idx(u)?);
        if tree.is_terminal(vi) {
            return Err(WitnessError::MarkingMismatch(format!("terminal {v} cannot point")));
        }
        if tree.edge_between(vi, ui).is_none() {
            return Err(WitnessError::MarkingMismatch(format!("{u} is not adjacent to {v}")));
        }
        ptr[vi] = Some(ui);
    }
    if let Some(v) = (0..tree.node_count()).find(|&v| !tree.is_terminal(v) && ptr[v].is_none()) {
        return Err(WitnessError::MarkingMismatch(format!("no pointer for node {}", tree.id(v))));
    }
    Ok(ptr)
}

/// Contracts each region to its terminal; cut edges become witness edges.
pub fn witness_from_regions(tree: &Tree, r: &Regions) -> Result<WitnessTree> {
    if tree.terminals().is_empty() {
        return Err(WitnessError::InvalidTree("regions need terminals".into()));
    }
    let ptr = region_ptr(tree, r)?;
    let pairs = region_pairs(tree, &ptr)
        .ok_or_else(|| WitnessError::MarkingMismatch("two nodes point at each other".into()))?;
    Ok(to_witness(tree, &pairs))
}

/// Recovers the region form of a laminar witness tree.
///
/// Edges on at least two witness paths join regions. Nodes left without a terminal
/// (degree-2 nodes on a single path) attach to an already placed neighbour; either
/// side contracts to the same tree.
pub fn regions_from_witness(tree: &Tree, w: &WitnessTree) -> Result<Regions> {
    let pairs = w.validate(tree, Variant::Node)?;
    if let Some(&(i, j)) = crossing_pairs(tree, &pairs).first() {
        return Err(WitnessError::NotLaminar(w.edges()[i], w.edges()[j]));
    }
    let n = tree.node_count();
    let mut count = vec![0usize; tree.edge_count()];
    for &(a, b) in &pairs {
        for e in tree.path_edges(a, b) {
            count[e] += 1;
        }
    }
    let mut ptr: Vec<Option<usize>> = vec![None; n];
    let mut placed = vec![false; n];
    for t in tree.terminal_indices() {
        placed[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in tree.neighbors(x) {
                if count[e] >= 2 && !placed[y] {
                    if tree.is_terminal(y) {
                        return Err(WitnessError::MarkingMismatch(format!("region holds two terminals in {w}")));
                    }
                    placed[y] = true;
                    ptr[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
    }
    loop {
        let mut progress = false;
        for v in 0..n {
            if placed[v] {
                continue;
            }
            if let Some(&(u, _)) = tree.neighbors(v).iter().filter(|&&(u, _)| placed[u]).min_by_key(|&&(u, _)| tree.id(u)) {
                ptr[v] = Some(u);
                placed[v] = true;
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    let regions = Regions {
        toward: (0..n).filter_map(|v| ptr[v].map(|u| (tree.id(v), tree.id(u)))).collect(),
    };
    if witness_from_regions(tree, &regions)?.edges() != w.edges() {
        return Err(WitnessError::MarkingMismatch(format!("regions do not contract to {w}")));
    }
    Ok(regions)
}

/// Bound on uncrossing iterations before [`laminarize`] reports non-termination.
pub const LAMINARIZE_GUARD: usize = 100_000;

struct Uncrosser<'a> {
    tree: &'a Tree,
    variant: Variant,
}

impl Uncrosser<'_> {
    fn value(&self, edges: &BTreeSet<(usize, usize)>) -> Rational {
        let w = to_witness(self.tree, &edges.iter().copied().collect::<Vec<_>>());
        eval(self.tree, &w, self.variant).expect("moves preserve witness validity")
    }

    fn crossings(&self, edges: &BTreeSet<(usize, usize)>) -> usize {
        crossing_pairs(self.tree, &edges.iter().copied().collect::<Vec<_>>()).len()
    }

    /// Terminal groups that must be stars: terminals sharing a Steiner neighbour
    /// (node variant) or terminals of one maximal zero-cost region (edge variant).
    /// Each group comes with the region's node set.
    fn groups(&self) -> Vec<(Vec<usize>, Vec<bool>)> {
        let t = self.tree;
        let n = t.node_count();
        let mut out = Vec::new();
        match self.variant {
            Variant::Edge => {
                let mut comp = vec![usize::MAX; n];
                let mut next = 0;
                for s in 0..n {
                    if comp[s] != usize::MAX {
                        continue;
                    }
                    let zero_incident = t.neighbors(s).iter().any(|&(_, e)| t.cost(e).is_zero());
                    if !zero_incident {
                        continue;
                    }
                    let mut queue = VecDeque::from([s]);
                    comp[s] = next;
                    let mut members = vec![false; n];
                    members[s] = true;
                    while let Some(x) = queue.pop_front() {
                        for &(y, e) in t.neighbors(x) {
                            if t.cost(e).is_zero() && comp[y] == usize::MAX {
                                comp[y] = next;
                                members[y] = true;
                                queue.push_back(y);
                            }
                        }
                    }
                    next += 1;
                    let terms: Vec<usize> = (0..n).filter(|&v| members[v] && t.is_terminal(v)).collect();
                    if !terms.is_empty() {
                        out.push((terms, members));
                    }
                }
            }
            _ => {
                for s in t.steiner_indices() {
                    let terms: Vec<usize> =
                        t.neighbors(s).iter().map(|&(y, _)| y).filter(|&y| t.is_terminal(y)).collect();
                    if terms.len() >= 2 {
                        let mut members = vec![false; n];
                        members[s] = true;
                        for &r in &terms {
                            members[r] = true;
                        }
                        out.push((terms, members));
                    }
                }
            }
        }
        out
    }

    fn normalize(&self, edges: &mut BTreeSet<(usize, usize)>) {
        for _ in 0..LAMINARIZE_GUARD {
            if !self.normalize_once(edges) {
                return;
            }
        }
    }

    /// One normalization step; returns whether anything changed.
    fn normalize_once(&self, edges: &mut BTreeSet<(usize, usize)>) -> bool {
        let t = self.tree;
        for (group, members) in self.groups() {
            let in_group = |v: usize| group.binary_search(&v).is_ok();
            let rep = group[0];

            if self.variant == Variant::Edge {
                // edges passing through the region without an endpoint in it
                for &(u, v) in edges.iter() {
                    if in_group(u) || in_group(v) {
                        continue;
                    }
                    let touches = t.path_nodes(u, v).iter().any(|&x| members[x]);
                    if touches {
                        let adj = adjacency(t.node_count(), edges, Some((u, v)));
                        let side = reach(&adj, u);
                        let (a, b) = if side[rep] { (rep, v) } else { (rep, u) };
                        edges.remove(&(u, v));
                        edges.insert(ordered(a, b));
                        return true;
                    }
                }
            }

            // connect the group inside W
            let adj = adjacency(t.node_count(), edges, None);
            let mut label = vec![usize::MAX; t.node_count()];
            for &g in &group {
                if label[g] == usize::MAX {
                    let mut queue = VecDeque::from([g]);
                    label[g] = g;
                    while let Some(x) = queue.pop_front() {
                        for &y in &adj[x] {
                            if in_group(y) && label[y] == usize::MAX {
                                label[y] = g;
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
            let mut best: Option<(usize, usize, usize, usize)> = None;
            for &x in &group {
                let (dist, prev) = bfs(&adj, x);
                for &y in &group {
                    if label[y] != label[x] && dist[y] != usize::MAX {
                        let cand = (dist[y], x, y, prev[y]);
                        if best.map_or(true, |b| (cand.0, cand.1, cand.2) < (b.0, b.1, b.2)) {
                            best = Some(cand);
                        }
                    }
                }
            }
            if let Some((_, x, y, p)) = best {
                edges.remove(&ordered(p, y));
                edges.insert(ordered(x, y));
                return true;
            }

            // star at the smallest member, external edges redirected to it
            let mut changed = false;
            let snapshot: Vec<(usize, usize)> = edges.iter().copied().collect();
            for (u, v) in snapshot {
                let (gu, gv) = (in_group(u), in_group(v));
                let new = match (gu, gv) {
                    (true, true) if u != rep && v != rep => None,
                    (true, false) if u != rep => Some(ordered(rep, v)),
                    (false, true) if v != rep => Some(ordered(rep, u)),
                    _ => continue,
                };
                edges.remove(&(u, v));
                if let Some(e) = new {
                    edges.insert(e);
                }
                changed = true;
            }
            if changed {
                for &g in &group {
                    if g != rep {
                        edges.insert(ordered(rep, g));
                    }
                }
                return true;
            }
        }
        false
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn adjacency(n: usize, edges: &BTreeSet<(usize, usize)>, skip: Option<(usize, usize)>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if Some((a, b)) == skip {
            continue;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    adj
}

fn reach(adj: &[Vec<usize>], s: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

fn bfs(adj: &[Vec<usize>], s: usize) -> (Vec<usize>, Vec<usize>) {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut prev = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::from([s]);
    dist[s] = 0;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    (dist, prev)
}

fn is_spanning_tree(n: usize, verts: &[usize], edges: &BTreeSet<(usize, usize)>) -> bool {
    if edges.len() + 1 != verts.len() {
        return false;
    }
    let adj = adjacency(n, edges, None);
    let seen = reach(&adj, verts[0]);
    verts.iter().all(|&v| seen[v])
}

/// Uncrosses `w` without increasing the chosen objective.
///
/// Terminal groups are first made into stars with every incident witness edge
/// moved to the star centre. Then the smallest crossing pair `r1r2`, `r3r4`
/// is replaced by the best of the single swaps `W + xy - e` and the double
/// swaps `{r1r3, r2r4}`, `{r1r4, r2r3}`, accepting only moves that lower
/// (objective, number of crossings) lexicographically.
pub fn laminarize(tree: &Tree, w: &WitnessTree, variant: Variant) -> Result<WitnessTree> {
    if variant == Variant::ComponentNode {
        return Err(WitnessError::InvalidParameters("laminarize takes the node or edge variant".into()));
    }
    let pairs = w.validate(tree, variant)?;
    eval(tree, w, variant)?;
    let verts = witness_vertices(tree, variant)?;
    let u = Uncrosser { tree, variant };
    let mut edges: BTreeSet<(usize, usize)> = pairs.into_iter().map(|(a, b)| ordered(a, b)).collect();
    if crossing_pairs(tree, &edges.iter().copied().collect::<Vec<_>>()).is_empty() {
        return Ok(w.clone());
    }

    for _ in 0..LAMINARIZE_GUARD {
        u.normalize(&mut edges);
        let list: Vec<(usize, usize)> = edges.iter().copied().collect();
        let crossings = crossing_pairs(tree, &list);
        if crossings.is_empty() {
            return Ok(to_witness(tree, &list));
        }
        let current = (u.value(&edges), crossings.len());
        let mut moved = false;
        // pairs are in sorted-edge lexicographic order already
        for &(i, j) in &crossings {
            let (e1, e2) = (list[i], list[j]);
            let ends = [e1.0, e1.1, e2.0, e2.1];
            let mut candidates: Vec<BTreeSet<(usize, usize)>> = Vec::new();
            for removed in [e1, e2] {
                for &x in &ends[..2] {
                    for &y in &ends[2..] {
                        let add = ordered(x, y);
                        let mut c = edges.clone();
                        c.remove(&removed);
                        if c.insert(add) && is_spanning_tree(tree.node_count(), &verts, &c) {
                            candidates.push(c);
                        }
                    }
                }
            }
            for (a, b) in [((e1.0, e2.0), (e1.1, e2.1)), ((e1.0, e2.1), (e1.1, e2.0))] {
                let mut c = edges.clone();
                c.remove(&e1);
                c.remove(&e2);
                if c.insert(ordered(a.0, a.1))
                    && c.insert(ordered(b.0, b.1))
                    && is_spanning_tree(tree.node_count(), &verts, &c)
                {
                    candidates.push(c);
                }
            }
            let best = candidates
                .into_iter()
                .map(|c| ((u.value(&c), u.crossings(&c)), c))
                .filter(|(key, _)| *key < current)
                .min();
            if let Some((_, c)) = best {
                edges = c;
                moved = true;
                break;
            }
        }
        if !moved {
            return Err(WitnessError::NonTermination(0));
        }
    }
    Err(WitnessError::NonTermination(LAMINARIZE_GUARD))
}
