//! Brute-force optimal witness trees: marking enumeration and labelled-tree enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, WitnessError};
use crate::harmonic::harmonic;
use crate::instances::Section;
use crate::laminar::{crossing_pairs, default_root, region_pairs, to_witness, Frame};
use crate::rational::{q, Rational};
use crate::tree::{NodeId, Tree};
use crate::witness::{eval, eval_ewt, impose_indexed, Variant, WitnessTree};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Largest terminal count accepted by [`optimal_exhaustive`].
pub const EXHAUSTIVE_MAX_TERMINALS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Optimum {
    pub value: Rational,
    pub witness: WitnessTree,
    /// Number of candidate witness trees scored.
    pub searched: u128,
}

/// Objective numerators scaled to integers: `H_k * L` with `L = lcm(1..=kmax)` and costs
/// multiplied by the lcm of their denominators. Comparing scaled sums is exact.
struct Scorer<T> {
    h: Vec<T>,
    weight: Vec<T>,
    variant: Variant,
}

trait Num: Clone + Ord + Zero + Send + Sync + std::ops::AddAssign + std::ops::Mul<Output = Self> {}
impl Num for i128 {}
impl Num for BigInt {}

fn lcm_upto(k: usize) -> BigInt {
    (1..=k.max(1)).fold(BigInt::from(1), |acc, i| acc.lcm(&BigInt::from(i)))
}

fn scaled_tables(tree: &Tree, variant: Variant, kmax: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let l = lcm_upto(kmax);
    let h: Vec<BigInt> = (0..=kmax)
        .map(|k| {
            let v = Rational::from_big(l.clone(), BigInt::from(1)).unwrap() * harmonic(k);
            debug_assert!(v.denom() == &BigInt::from(1));
            v.numer().clone()
        })
        .collect();
    let weight = match variant {
        Variant::Edge => {
            let d = (0..tree.edge_count()).fold(BigInt::from(1), |acc, e| acc.lcm(tree.cost(e).denom()));
            (0..tree.edge_count())
                .map(|e| {
                    let c = tree.cost(e);
                    c.numer() * (&d / c.denom())
                })
                .collect()
        }
        _ => (0..tree.node_count())
            .map(|v| BigInt::from(u8::from(!tree.is_terminal(v))))
            .collect(),
    };
    (h, weight)
}

impl<T: Num> Scorer<T> {
    fn score(&self, counts: &[usize]) -> T {
        let mut s = T::zero();
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 {
                s += self.weight[i].clone() * self.h[c].clone();
            }
        }
        s
    }
}

fn i128_scorer(h: &[BigInt], weight: &[BigInt], variant: Variant) -> Option<Scorer<i128>> {
    let bound: BigInt = weight.iter().sum::<BigInt>() * h.last().cloned().unwrap_or_default();
    bound.to_i128()?;
    Some(Scorer {
        h: h.iter().map(|x| x.to_i128().unwrap()).collect(),
        weight: weight.iter().map(|x| x.to_i128().unwrap()).collect(),
        variant,
    })
}

fn check_variant(tree: &Tree, variant: Variant) -> Result<()> {
    match variant {
        Variant::ComponentNode => Err(WitnessError::InvalidParameters(
            "the oracle takes the node or edge variant".into(),
        )),
        Variant::Node if tree.steiner_indices().is_empty() => Err(WitnessError::NoSteinerNodes),
        Variant::Edge if tree.total_cost().is_zero() => Err(WitnessError::ZeroTotalCost),
        _ => Ok(()),
    }
}

/// Imposed counts of the witness obtained from a marking, in one top-down pass.
///
/// A node `v` in the marked region headed by `z` lies strictly inside exactly the witness
/// paths of unmarked child edges hanging off `z..v`, plus the path entering `z` from its
/// parent. A marked edge below `x` has the count of `x`; unmarked edges have count 1.
fn marking_counts(tree: &Tree, f: &Frame, slot: &[usize], choice: &[usize], variant: Variant, out: &mut [usize]) {
    let r = &f.rooted;
    let mut acc = vec![0usize; tree.node_count()];
    for &v in &r.order {
        let ch = &r.children[v];
        let unmarked = ch.len().saturating_sub(1);
        let marked_child = if ch.is_empty() { usize::MAX } else { ch[choice[slot[v]]] };
        let inherited = match r.parent[v] {
            None => 0,
            Some(p) => {
                let pm = r.children[p][choice[slot[p]]];
                if pm == v {
                    acc[p]
                } else {
                    1
                }
            }
        };
        acc[v] = inherited + unmarked;
        match variant {
            Variant::Edge => {
                for &c in ch {
                    let e = tree.edge_between(v, c).unwrap();
                    out[e] = if c == marked_child { acc[v] } else { 1 };
                }
            }
            _ => out[v] = if ch.is_empty() { 0 } else { acc[v] },
        }
    }
}

fn decode(mut idx: u128, radices: &[usize], out: &mut [usize]) {
    for (k, &r) in radices.iter().enumerate() {
        out[k] = (idx % r as u128) as usize;
        idx /= r as u128;
    }
}

fn advance(choice: &mut [usize], radices: &[usize]) {
    for k in 0..radices.len() {
        choice[k] += 1;
        if choice[k] < radices[k] {
            return;
        }
        choice[k] = 0;
    }
}

fn search_markings<T: Num>(tree: &Tree, f: &Frame, sc: &Scorer<T>, total: u128) -> (T, Vec<(NodeId, NodeId)>) {
    let radices = f.radices();
    let mut slot = vec![usize::MAX; tree.node_count()];
    for (k, &v) in f.internal.iter().enumerate() {
        slot[v] = k;
    }
    let len = match sc.variant {
        Variant::Edge => tree.edge_count(),
        _ => tree.node_count(),
    };
    let chunks: u128 = total.clamp(1, 256);
    let per = total.div_ceil(chunks);
    (0..chunks as u64)
        .into_par_iter()
        .filter_map(|c| {
            let start = c as u128 * per;
            let end = (start + per).min(total);
            if start >= end {
                return None;
            }
            let mut choice = vec![0usize; radices.len()];
            decode(start, &radices, &mut choice);
            let mut counts = vec![0usize; len];
            let mut best: Option<(T, Vec<(NodeId, NodeId)>)> = None;
            for _ in start..end {
                marking_counts(tree, f, &slot, &choice, sc.variant, &mut counts);
                let s = sc.score(&counts);
                let better = match &best {
                    None => true,
                    Some((b, _)) => s <= *b,
                };
                if better {
                    let w = to_witness(tree, &f.pairs(tree, &choice)).edges().to_vec();
                    match &best {
                        Some((b, bw)) if s == *b && *bw <= w => {}
                        _ => best = Some((s, w)),
                    }
                }
                advance(&mut choice, &radices);
            }
            best
        })
        .min()
        .expect("at least one marking")
}

/// Minimum over all markings of `tree` rooted at `root` (default: smallest-id internal node).
/// Ties go to the lexicographically smallest sorted edge list.
pub fn optimal_marking_rooted(tree: &Tree, variant: Variant, root: Option<NodeId>, budget: u128) -> Result<Optimum> {
    check_variant(tree, variant)?;
    let root = match root.or_else(|| default_root(tree)) {
        Some(r) => r,
        None => tree.id(0),
    };
    let f = Frame::new(tree, root)?;
    if f.internal.is_empty() {
        let witness = to_witness(tree, &f.pairs(tree, &[]));
        let value = eval(tree, &witness, variant)?;
        return Ok(Optimum { value, witness, searched: 1 });
    }
    let total = f.space();
    if total > budget {
        return Err(WitnessError::BudgetExceeded { needed: total, budget });
    }
    let kmax = tree.terminal_indices().len().saturating_sub(1);
    let (h, weight) = scaled_tables(tree, variant, kmax);
    let edges = match i128_scorer(&h, &weight, variant) {
        Some(sc) => search_markings(tree, &f, &sc, total).1,
        None => search_markings(tree, &f, &Scorer { h, weight, variant }, total).1,
    };
    let witness = WitnessTree::new(edges)?;
    let value = eval(tree, &witness, variant)?;
    Ok(Optimum { value, witness, searched: total })
}

/// Minimum over every marking from every internal root; ties as in [`optimal_marking_rooted`].
pub fn optimal_marking_all_roots(tree: &Tree, variant: Variant, budget: u128) -> Result<Optimum> {
    let roots: Vec<NodeId> = tree.internal_indices().into_iter().map(|i| tree.id(i)).collect();
    if roots.is_empty() {
        return optimal_marking_rooted(tree, variant, None, budget);
    }
    let mut needed = 0u128;
    for &r in &roots {
        needed = needed.saturating_add(Frame::new(tree, r)?.space());
    }
    if needed > budget {
        return Err(WitnessError::BudgetExceeded { needed, budget });
    }
    let mut best: Option<Optimum> = None;
    for r in roots {
        let o = optimal_marking_rooted(tree, variant, Some(r), budget)?;
        best = match best {
            Some(b) if (&b.value, &b.witness) <= (&o.value, &o.witness) => Some(b),
            _ => Some(o),
        };
    }
    let mut b = best.unwrap();
    b.searched = needed;
    Ok(b)
}

/// Number of region assignments, by dynamic programming over the tree rooted at
/// index 0. `yes[v]` counts `v`'s subtree when the parent points at `v`.
fn region_space(tree: &Tree) -> u128 {
    let r = tree.rooted(0);
    let n = tree.node_count();
    let (mut yes, mut no) = (vec![0u128; n], vec![0u128; n]);
    for &v in r.order.iter().rev() {
        if tree.is_terminal(v) {
            yes[v] = 1;
            no[v] = 1;
            continue;
        }
        let ch = &r.children[v];
        let all_no = ch.iter().fold(1u128, |a, &c| a.saturating_mul(no[c]));
        let mut down = 0u128;
        for &c in ch {
            let rest = ch.iter().filter(|&&d| d != c).fold(1u128, |a, &d| a.saturating_mul(no[d]));
            down = down.saturating_add(yes[c].saturating_mul(rest));
        }
        yes[v] = down;
        no[v] = if r.parent[v].is_some() { down.saturating_add(all_no) } else { down };
    }
    no[0]
}

struct RegionSearch<'a, T> {
    tree: &'a Tree,
    sc: &'a Scorer<T>,
    /// Non-terminal nodes in breadth-first order from index 0.
    order: Vec<usize>,
}

impl<T: Num> RegionSearch<'_, T> {
    fn options(&self, ptr: &[Option<usize>], v: usize) -> Vec<usize> {
        self.tree
            .neighbors(v)
            .iter()
            .map(|&(u, _)| u)
            .filter(|&u| ptr[u] != Some(v))
            .collect()
    }

    fn counts(&self, ptr: &[Option<usize>], out: &mut [usize]) {
        out.iter_mut().for_each(|c| *c = 0);
        let tree = self.tree;
        let edge = self.sc.variant == Variant::Edge;
        for e in 0..tree.edge_count() {
            let (a, b) = tree.edge(e);
            if ptr[a] == Some(b) || ptr[b] == Some(a) {
                continue;
            }
            if edge {
                out[e] += 1;
            }
            for mut x in [a, b] {
                while let Some(y) = ptr[x] {
                    if edge {
                        out[tree.edge_between(x, y).unwrap()] += 1;
                    } else {
                        out[x] += 1;
                    }
                    x = y;
                }
            }
        }
    }

    fn visit(&self, k: usize, ptr: &mut Vec<Option<usize>>, counts: &mut [usize], best: &mut Option<(T, Vec<(NodeId, NodeId)>)>, seen: &mut u128) {
        if k == self.order.len() {
            *seen += 1;
            self.counts(ptr, counts);
            let s = self.sc.score(counts);
            if best.as_ref().is_some_and(|(b, _)| s > *b) {
                return;
            }
            let pairs = region_pairs(self.tree, ptr).expect("valid assignment");
            let w = to_witness(self.tree, &pairs).edges().to_vec();
            match best {
                Some((b, bw)) if s == *b && *bw <= w => {}
                _ => *best = Some((s, w)),
            }
            return;
        }
        let v = self.order[k];
        for u in self.options(ptr, v) {
            ptr[v] = Some(u);
            self.visit(k + 1, ptr, counts, best, seen);
        }
        ptr[v] = None;
    }

    fn run(&self) -> (T, Vec<(NodeId, NodeId)>, u128) {
        let n = self.tree.node_count();
        let mut prefixes: Vec<Vec<Option<usize>>> = vec![vec![None; n]];
        let mut depth = 0;
        while depth < self.order.len() && prefixes.len() < 256 {
            let v = self.order[depth];
            prefixes = prefixes
                .into_iter()
                .flat_map(|p| {
                    self.options(&p, v).into_iter().map(move |u| {
                        let mut q = p.clone();
                        q[v] = Some(u);
                        q
                    })
                })
                .collect();
            depth += 1;
        }
        let len = match self.sc.variant {
            Variant::Edge => self.tree.edge_count(),
            _ => n,
        };
        let results: Vec<(u128, Option<(T, Vec<(NodeId, NodeId)>)>)> = prefixes
            .into_par_iter()
            .map(|mut p| {
                let mut counts = vec![0usize; len];
                let mut best = None;
                let mut seen = 0u128;
                self.visit(depth, &mut p, &mut counts, &mut best, &mut seen);
                (seen, best)
            })
            .collect();
        let seen = results.iter().map(|r| r.0).sum();
        let (s, w) = results.into_iter().filter_map(|r| r.1).min().expect("at least one region assignment");
        (s, w, seen)
    }
}

/// Exact minimum over all laminar witness trees, enumerated in region form
/// (see [`crate::laminar::Regions`]). Ties go to the lexicographically smallest
/// sorted edge list. Unlike marking enumeration this does not depend on a root.
pub fn optimal_laminar(tree: &Tree, variant: Variant, budget: u128) -> Result<Optimum> {
    check_variant(tree, variant)?;
    if tree.terminal_indices().is_empty() {
        return Err(WitnessError::InvalidTree("the oracle needs terminals".into()));
    }
    let total = region_space(tree);
    if total > budget {
        return Err(WitnessError::BudgetExceeded { needed: total, budget });
    }
    let r = tree.rooted(0);
    let order: Vec<usize> = r.order.iter().copied().filter(|&v| !tree.is_terminal(v)).collect();
    let kmax = tree.terminal_indices().len().saturating_sub(1);
    let (h, weight) = scaled_tables(tree, variant, kmax);
    let (edges, searched) = match i128_scorer(&h, &weight, variant) {
        Some(sc) => {
            let (_, w, n) = RegionSearch { tree, sc: &sc, order }.run();
            (w, n)
        }
        None => {
            let sc = Scorer { h, weight, variant };
            let (_, w, n) = RegionSearch { tree, sc: &sc, order }.run();
            (w, n)
        }
    };
    let witness = WitnessTree::new(edges)?;
    let value = eval(tree, &witness, variant)?;
    Ok(Optimum { value, witness, searched })
}

/// Labelled tree on `0..n` encoded by a Prüfer sequence of length `n - 2`.
pub fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 2 && seq.len() == n - 2, "sequence length must be n - 2");
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Global minimum over all `|R|^(|R|-2)` witness trees.
pub fn optimal_exhaustive(tree: &Tree, variant: Variant) -> Result<Optimum> {
    check_variant(tree, variant)?;
    let terms = tree.terminal_indices();
    let r = terms.len();
    if r > EXHAUSTIVE_MAX_TERMINALS {
        return Err(WitnessError::TooManyTerminals(r));
    }
    if r <= 2 {
        let witness = to_witness(tree, &if r == 2 { vec![(terms[0], terms[1])] } else { vec![] });
        let value = eval(tree, &witness, variant)?;
        return Ok(Optimum { value, witness, searched: 1 });
    }
    let (h, weight) = scaled_tables(tree, variant, r - 1);
    let sc = i128_scorer(&h, &weight, variant).expect("small instances fit in i128");
    let total = (r as u128).pow(r as u32 - 2);
    let best = (0..r)
        .into_par_iter()
        .map(|first| {
            let mut seq = vec![0usize; r - 2];
            seq[0] = first;
            let rad = vec![r; r - 3];
            let sub = (r as u128).pow(r as u32 - 3);
            let mut best: Option<(i128, Vec<(NodeId, NodeId)>)> = None;
            for _ in 0..sub {
                let pairs: Vec<(usize, usize)> =
                    prufer_decode(&seq, r).into_iter().map(|(a, b)| (terms[a], terms[b])).collect();
                let counts = impose_indexed(tree, &pairs, variant);
                let s = sc.score(&counts);
                if best.as_ref().map_or(true, |(b, _)| s <= *b) {
                    let w = to_witness(tree, &pairs).edges().to_vec();
                    match &best {
                        Some((b, bw)) if s == *b && *bw <= w => {}
                        _ => best = Some((s, w)),
                    }
                }
                advance(&mut seq[1..], &rad);
            }
            best.unwrap()
        })
        .min()
        .unwrap();
    let witness = WitnessTree::new(best.1)?;
    let value = eval(tree, &witness, variant)?;
    Ok(Optimum { value, witness, searched: total })
}

/// Section decomposition of a witness on a claw lower-bound host and the structural checks on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClawStructure {
    pub q: usize,
    pub sections: Vec<(usize, usize, usize)>,
    pub value: Rational,
    pub value_bound: Rational,
    pub end_sections_trivial: bool,
    pub balanced: bool,
    pub small: bool,
    pub value_ok: bool,
    pub passed: bool,
}

/// Terminal ids of a Steiner path where every Steiner node carries exactly one terminal,
/// ordered from the path end with the smaller id.
pub fn claw_path_terminals(tree: &Tree) -> Result<Vec<NodeId>> {
    let steiner = tree.steiner_indices();
    let mismatch = |m: &str| WitnessError::HostMismatch(m.to_string());
    let mut ends = Vec::new();
    for &s in &steiner {
        let sn = tree.neighbors(s).iter().filter(|&&(y, _)| !tree.is_terminal(y)).count();
        let tn = tree.neighbors(s).len() - sn;
        if tn != 1 {
            return Err(mismatch("every path node needs exactly one terminal"));
        }
        if sn > 2 {
            return Err(mismatch("Steiner nodes do not induce a path"));
        }
        if sn <= 1 {
            ends.push(s);
        }
    }
    let start = *ends.iter().min_by_key(|&&s| tree.id(s)).ok_or_else(|| mismatch("no path end"))?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = tree
            .neighbors(cur)
            .iter()
            .map(|&(y, _)| y)
            .find(|&y| !tree.is_terminal(y) && y != prev);
        match next {
            Some(y) => {
                prev = cur;
                cur = y;
                order.push(y);
            }
            None => break,
        }
    }
    Ok(order
        .into_iter()
        .map(|s| {
            let t = tree.neighbors(s).iter().find(|&&(y, _)| tree.is_terminal(y)).unwrap().0;
            tree.id(t)
        })
        .collect())
}

/// Splits a laminar witness on a claw path host into maximal sections and checks that the end
/// sections are trivial, every section has `|x_L - x_R| <= 1` and size at most 5, and the value
/// is at least `(991/732) q / (q + 2)`.
pub fn structural_check_claw(tree: &Tree, w: &WitnessTree) -> Result<ClawStructure> {
    let order = claw_path_terminals(tree)?;
    let n = order.len();
    if n < 3 {
        return Err(WitnessError::HostMismatch("need q >= 1".into()));
    }
    let qn = n - 2;
    let pairs = w.validate(tree, Variant::Edge)?;
    if let Some(&(i, j)) = crossing_pairs(tree, &pairs).first() {
        return Err(WitnessError::NotLaminar(w.edges()[i], w.edges()[j]));
    }
    let pos: std::collections::HashMap<NodeId, usize> = order.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in w.edges() {
        adj[pos[&a]].push(pos[&b]);
        adj[pos[&b]].push(pos[&a]);
    }
    let is_center: Vec<bool> = (0..n).map(|i| i == 0 || i == n - 1 || adj[i].len() > 1).collect();
    let centers: Vec<usize> = (0..n).filter(|&i| is_center[i]).collect();
    let malformed = |m: String| Err(WitnessError::MalformedSections(m));

    let mut owner = vec![usize::MAX; n];
    for &c in &centers {
        owner[c] = c;
    }
    for i in 0..n {
        if !is_center[i] {
            match adj[i].as_slice() {
                [c] if is_center[*c] => owner[i] = *c,
                _ => return malformed(format!("r_{i} is neither a center nor a leaf of one")),
            }
        }
    }
    for (k, &c) in centers.iter().enumerate() {
        for &d in &adj[c] {
            if is_center[d] {
                let consecutive = (k > 0 && centers[k - 1] == d) || centers.get(k + 1) == Some(&d);
                if !consecutive {
                    return malformed(format!("centers r_{c} and r_{d} are joined out of order"));
                }
            }
        }
    }
    let mut sections = Vec::with_capacity(centers.len());
    for &c in &centers {
        let members: Vec<usize> = (0..n).filter(|&i| owner[i] == c).collect();
        let (lo, hi) = (members[0], members[members.len() - 1]);
        if hi - lo + 1 != members.len() {
            return malformed(format!("section of r_{c} is not a contiguous window"));
        }
        sections.push(Section::new(c, c - lo, hi - c));
    }

    let interior = &sections[1..sections.len() - 1];
    let end_sections_trivial =
        sections[0] == Section::new(0, 0, 0) && sections[sections.len() - 1] == Section::new(n - 1, 0, 0);
    let balanced = interior.iter().all(|s| s.x_l.abs_diff(s.x_r) <= 1);
    let small = interior.iter().all(|s| s.size() <= 5);
    let value = eval_ewt(tree, w)?;
    let value_bound = q(991, 732) * Rational::new(qn as i64, qn as i64 + 2);
    let value_ok = value >= value_bound;
    Ok(ClawStructure {
        q: qn,
        sections: sections.iter().map(|s| (s.center, s.x_l, s.x_r)).collect(),
        passed: end_sections_trivial && balanced && small && value_ok,
        value,
        value_bound,
        end_sections_trivial,
        balanced,
        small,
        value_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{
        build_section_witness, canonical_nwt_witness, claw_r, gen_claw_lb, gen_nwt_lb, tiling_11,
    };
    use crate::tree::{EdgeSpec, NodeSpec};

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

    #[test]
    fn prufer_counts_and_shape() {
        let mut seen = std::collections::BTreeSet::new();
        for a in 0..4 {
            for b in 0..4 {
                let mut e: Vec<(usize, usize)> =
                    prufer_decode(&[a, b], 4).into_iter().map(|(x, y)| (x.min(y), x.max(y))).collect();
                e.sort();
                assert_eq!(e.len(), 3);
                seen.insert(e);
            }
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn spider_optimum() {
        let t = spider();
        let ex = optimal_exhaustive(&t, Variant::Node).unwrap();
        assert_eq!(ex.searched, 16);
        assert_eq!(ex.value, harmonic(2));
        let lam = optimal_laminar(&t, Variant::Node, DEFAULT_BUDGET).unwrap();
        assert_eq!(lam.value, ex.value);
    }

    #[test]
    fn nwt_lb2_optimum_is_canonical_value() {
        let t = gen_nwt_lb(2).unwrap();
        let o = optimal_laminar(&t, Variant::Node, DEFAULT_BUDGET).unwrap();
        assert_eq!(o.value, q(83, 48));
        let canon = canonical_nwt_witness(2).unwrap();
        assert_eq!(eval(&t, &canon, Variant::Node).unwrap(), o.value);
    }

    #[test]
    fn marking_counts_match_path_counts() {
        let t = gen_nwt_lb(2).unwrap();
        for variant in [Variant::Node, Variant::Edge] {
            let root = default_root(&t).unwrap();
            let f = Frame::new(&t, root).unwrap();
            let radices = f.radices();
            let mut slot = vec![usize::MAX; t.node_count()];
            for (k, &v) in f.internal.iter().enumerate() {
                slot[v] = k;
            }
            let mut choice = vec![0; radices.len()];
            for _ in 0..200 {
                let pairs = f.pairs(&t, &choice);
                let want = impose_indexed(&t, &pairs, variant);
                let mut got = vec![0; want.len()];
                marking_counts(&t, &f, &slot, &choice, variant, &mut got);
                for i in 0..want.len() {
                    if variant == Variant::Edge || !t.is_terminal(i) {
                        assert_eq!(got[i], want[i]);
                    }
                }
                advance(&mut choice, &radices);
            }
        }
    }

    #[test]
    fn budget_and_size_guards() {
        let t = gen_nwt_lb(2).unwrap();
        assert!(matches!(optimal_laminar(&t, Variant::Node, 3), Err(WitnessError::BudgetExceeded { .. })));
        assert!(matches!(optimal_exhaustive(&t, Variant::Node), Err(WitnessError::TooManyTerminals(12))));
    }

    #[test]
    fn two_terminals() {
        let t = Tree::new(
            vec![NodeSpec::steiner(0), NodeSpec::terminal(1), NodeSpec::terminal(2)],
            vec![EdgeSpec::new(0, 1), EdgeSpec::new(0, 2)],
        )
        .unwrap();
        let o = optimal_exhaustive(&t, Variant::Node).unwrap();
        assert_eq!(o.value, Rational::one());
        assert_eq!(optimal_laminar(&t, Variant::Node, 10).unwrap().value, Rational::one());
    }

    #[test]
    fn claw_structure_checks() {
        let a = q(32, 90);
        let qq = 6;
        let t = gen_claw_lb(qq, &a).unwrap();
        let good = build_section_witness(qq, &tiling_11(qq)).unwrap();
        let rep = structural_check_claw(&t, &good).unwrap();
        assert!(rep.passed, "{rep:?}");

        // one star covering r_1..r_7 is too large
        let r = |i| claw_r(qq, i);
        let mut e: Vec<(NodeId, NodeId)> = (1..=6).filter(|&i| i != 4).map(|i| (r(4), r(i))).collect();
        e.push((r(0), r(4)));
        e.push((r(4), r(7)));
        let big = WitnessTree::new(e).unwrap();
        let rep = structural_check_claw(&t, &big).unwrap();
        assert!(!rep.small && !rep.passed);

        let q4 = gen_claw_lb(4, &a).unwrap();
        let o = optimal_laminar(&q4, Variant::Edge, DEFAULT_BUDGET).unwrap();
        assert!(structural_check_claw(&q4, &o.witness).unwrap().passed);
    }

    #[test]
    fn malformed_sections() {
        let a = q(32, 90);
        let t = gen_claw_lb(3, &a).unwrap();
        let r = |i| claw_r(3, i);
        // r_1 is a leaf of r_3 while r_2 is a leaf of r_0: windows interleave
        let w = WitnessTree::new([(r(0), r(2)), (r(0), r(3)), (r(3), r(1)), (r(3), r(4))]).unwrap();
        let res = structural_check_claw(&t, &w);
        assert!(matches!(res, Err(WitnessError::MalformedSections(_)) | Err(WitnessError::NotLaminar(_, _))));
    }
}
