//! Instance generators: both lower-bound families, their extremal witnesses, and random corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, WitnessError};
use crate::harmonic::harmonic;
use crate::rational::Rational;
use crate::tree::{EdgeSpec, NodeId, NodeSpec, Tree};
use crate::witness::WitnessTree;

/// Ids in block `i` (1-based) of the node-variant lower bound.
pub mod nwt_ids {
    use crate::tree::NodeId;

    pub fn base(i: usize) -> NodeId {
        (i as NodeId - 1) * 10
    }

    pub fn s(i: usize) -> NodeId {
        base(i)
    }

    /// `t_{ij}`, `j` in 1..=3.
    pub fn t(i: usize, j: usize) -> NodeId {
        base(i) + j as NodeId
    }

    /// `r_{ij}^k`, `j` in 1..=3, `k` in 1..=2.
    pub fn r(i: usize, j: usize, k: usize) -> NodeId {
        base(i) + 4 + 2 * (j as NodeId - 1) + (k as NodeId - 1)
    }
}

/// Spine `s_1..s_q`; each `s_i` has three children `t_{i1..i3}`, each with two terminals.
pub fn gen_nwt_lb(q: usize) -> Result<Tree> {
    if q == 0 {
        return Err(WitnessError::InvalidParameters("q must be at least 1".into()));
    }
    use nwt_ids::*;
    let mut nodes = Vec::with_capacity(10 * q);
    let mut edges = Vec::with_capacity(10 * q);
    for i in 1..=q {
        nodes.push(NodeSpec::steiner(s(i)));
        if i > 1 {
            edges.push(EdgeSpec::new(s(i - 1), s(i)));
        }
        for j in 1..=3 {
            nodes.push(NodeSpec::steiner(t(i, j)));
            edges.push(EdgeSpec::new(s(i), t(i, j)));
            for k in 1..=2 {
                nodes.push(NodeSpec::terminal(r(i, j, k)));
                edges.push(EdgeSpec::new(t(i, j), r(i, j, k)));
            }
        }
    }
    Tree::new(nodes, edges)
}

/// Every block a center: pair edges, a star at `r_{i2}^1`, and the spine of block centers.
pub fn canonical_nwt_witness(q: usize) -> Result<WitnessTree> {
    use nwt_ids::*;
    let mut e = Vec::with_capacity(6 * q);
    for i in 1..=q {
        for j in 1..=3 {
            e.push((r(i, j, 1), r(i, j, 2)));
        }
        e.push((r(i, 1, 1), r(i, 2, 1)));
        e.push((r(i, 3, 1), r(i, 2, 1)));
        if i < q {
            e.push((r(i, 2, 1), r(i + 1, 2, 1)));
        }
    }
    WitnessTree::new(e)
}

/// Checks that `tree` is `gen_nwt_lb(q)` for some `q` and returns that `q`.
pub fn nwt_lb_q(tree: &Tree) -> Result<usize> {
    let q = tree.node_count() / 10;
    if q == 0 || tree.node_count() % 10 != 0 {
        return Err(WitnessError::HostMismatch("node count is not a multiple of 10".into()));
    }
    let expected = gen_nwt_lb(q)?;
    if expected.node_specs() != tree.node_specs() || expected.edge_specs() != tree.edge_specs() {
        return Err(WitnessError::HostMismatch(format!("not the q = {q} node lower-bound instance")));
    }
    Ok(q)
}

/// Ids of the claw lower bound: `s_i = i`, `r_i = q + 2 + i` for `i` in `0..=q+1`.
pub fn claw_s(_q: usize, i: usize) -> NodeId {
    i as NodeId
}

pub fn claw_r(q: usize, i: usize) -> NodeId {
    (q + 2 + i) as NodeId
}

/// Path `s_0..s_{q+1}` with O edges of cost `alpha` and one terminal per path node on an L edge of cost 1.
pub fn gen_claw_lb(q: usize, alpha: &Rational) -> Result<Tree> {
    if q == 0 {
        return Err(WitnessError::InvalidParameters("q must be at least 1".into()));
    }
    if alpha.is_negative() {
        return Err(WitnessError::InvalidParameters("alpha must be nonnegative".into()));
    }
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for i in 0..=q + 1 {
        nodes.push(NodeSpec::steiner(claw_s(q, i)));
        nodes.push(NodeSpec::terminal(claw_r(q, i)));
        edges.push(EdgeSpec::with_cost(claw_s(q, i), claw_r(q, i), Rational::one()));
        if i > 0 {
            edges.push(EdgeSpec::with_cost(claw_s(q, i - 1), claw_s(q, i), alpha.clone()));
        }
    }
    Tree::new(nodes, edges)
}

/// A star at `r_center` covering `x_l` terminals to its left and `x_r` to its right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Section {
    pub center: usize,
    pub x_l: usize,
    pub x_r: usize,
}

impl Section {
    pub fn new(center: usize, x_l: usize, x_r: usize) -> Self {
        Section { center, x_l, x_r }
    }

    pub fn size(&self) -> usize {
        self.x_l + self.x_r + 1
    }
}

/// Cost-weighted harmonic mass of the edges owned by an interior maximal section.
pub fn section_value(alpha: &Rational, x_l: usize, x_r: usize) -> Rational {
    let left: Rational = (2..=x_l + 1).map(harmonic).sum();
    let right: Rational = (1..=x_r + 1).map(harmonic).sum();
    alpha * (left + right) + Rational::integer((x_l + x_r) as i64) + harmonic(x_l + x_r + 2)
}

/// Cost of the edges an interior section owns: one L and one O edge per covered terminal.
pub fn section_cost(alpha: &Rational, x_l: usize, x_r: usize) -> Rational {
    Rational::integer((x_l + x_r + 1) as i64) * (Rational::one() + alpha)
}

pub fn normalized_section_value(alpha: &Rational, x_l: usize, x_r: usize) -> Rational {
    section_value(alpha, x_l, x_r) / section_cost(alpha, x_l, x_r)
}

fn check_tiling(q: usize, sections: &[Section]) -> Result<()> {
    let bad = |m: String| Err(WitnessError::InvalidSections(m));
    if sections.len() < 2 {
        return bad("need at least the two end sections".into());
    }
    let mut next = 0usize;
    for s in sections {
        if s.x_l > s.center {
            return bad(format!("section at {} reaches left of r_0", s.center));
        }
        if s.center - s.x_l != next {
            return bad(format!("section at {} starts at {} but {} was expected", s.center, s.center - s.x_l, next));
        }
        next = s.center + s.x_r + 1;
    }
    if next != q + 2 {
        return bad(format!("sections end at {} instead of {}", next - 1, q + 1));
    }
    let first = sections[0];
    let last = sections[sections.len() - 1];
    if first != Section::new(0, 0, 0) || last != Section::new(q + 1, 0, 0) {
        return bad("end sections must be W(r_0,0,0) and W(r_{q+1},0,0)".into());
    }
    Ok(())
}

/// Union of the section stars and the path through their centers, in ids of `gen_claw_lb(q, _)`.
pub fn build_section_witness(q: usize, sections: &[Section]) -> Result<WitnessTree> {
    check_tiling(q, sections)?;
    let r = |i: usize| claw_r(q, i);
    let mut e = Vec::new();
    for s in sections {
        for j in s.center - s.x_l..=s.center + s.x_r {
            if j != s.center {
                e.push((r(s.center), r(j)));
            }
        }
    }
    for w in sections.windows(2) {
        e.push((r(w[0].center), r(w[1].center)));
    }
    WitnessTree::new(e)
}

/// `c(E) * objective` predicted from the section formula: interior section values plus the
/// two end sections `1 + alpha` and `1`.
pub fn section_closed_form(q: usize, alpha: &Rational, sections: &[Section]) -> Result<Rational> {
    check_tiling(q, sections)?;
    let interior: Rational = sections[1..sections.len() - 1]
        .iter()
        .map(|s| section_value(alpha, s.x_l, s.x_r))
        .sum();
    Ok(interior + Rational::one() + alpha + Rational::one())
}

/// Tiling of `1..=q` by `(1,1)` sections, with a shorter last section when `q` is not a multiple of 3.
pub fn tiling_11(q: usize) -> Vec<Section> {
    let mut out = vec![Section::new(0, 0, 0)];
    let mut start = 1;
    while start <= q {
        let len = (q + 1 - start).min(3);
        out.push(match len {
            3 => Section::new(start + 1, 1, 1),
            2 => Section::new(start, 0, 1),
            _ => Section::new(start, 0, 0),
        });
        start += len;
    }
    out.push(Section::new(q + 1, 0, 0));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    /// At most two terminals per Steiner node, unit costs.
    Ca,
    /// Up to three terminals per Steiner node, random rational costs.
    Ewt,
}

impl std::str::FromStr for RandomKind {
    type Err = WitnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ca" => Ok(RandomKind::Ca),
            "ewt" => Ok(RandomKind::Ewt),
            _ => Err(WitnessError::Parse(format!("unknown random kind {s:?}"))),
        }
    }
}

/// Costs are drawn from `lo + (hi - lo) * k / COST_STEPS`, `k` uniform in `0..=COST_STEPS`.
pub const COST_STEPS: i64 = 12;

/// A random tree with `n` Steiner nodes (ids `0..n`) and terminals (ids from `n`) on leaves.
/// Uses ChaCha8 seeded with `seed`, so output is reproducible across platforms.
pub fn gen_random(kind: RandomKind, n: usize, seed: u64, cost_range: (Rational, Rational)) -> Result<Tree> {
    if n == 0 {
        return Err(WitnessError::InvalidParameters("need at least one Steiner node".into()));
    }
    let (lo, hi) = cost_range;
    if lo.is_negative() || hi < lo || (kind == RandomKind::Ewt && !hi.is_positive()) {
        return Err(WitnessError::InvalidParameters(format!("bad cost range [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steiner_edges = Vec::with_capacity(n);
    let mut deg = vec![0usize; n];
    for v in 1..n {
        let p = rng.gen_range(0..v);
        steiner_edges.push((p as NodeId, v as NodeId));
        deg[p] += 1;
        deg[v] += 1;
    }
    let max_terms = match kind {
        RandomKind::Ca => 2,
        RandomKind::Ewt => 3,
    };
    let mut nodes: Vec<NodeSpec> = (0..n as NodeId).map(NodeSpec::steiner).collect();
    let mut edges: Vec<EdgeSpec> = steiner_edges.iter().map(|&(a, b)| EdgeSpec::new(a, b)).collect();
    let mut next = n as NodeId;
    for v in 0..n {
        let min = if deg[v] <= 1 { 1 } else { 0 };
        // a lone Steiner node needs two terminals for a nontrivial witness
        let min = if n == 1 { 2 } else { min };
        let k = rng.gen_range(min..=max_terms);
        for _ in 0..k {
            nodes.push(NodeSpec::terminal(next));
            edges.push(EdgeSpec::new(v as NodeId, next));
            next += 1;
        }
    }
    if kind == RandomKind::Ewt {
        let span = &hi - &lo;
        for e in edges.iter_mut() {
            let k = rng.gen_range(0..=COST_STEPS);
            e.cost = Some(&lo + &span * Rational::new(k, COST_STEPS));
        }
        if edges.iter().all(|e| e.cost.as_ref().is_some_and(|c| c.is_zero())) {
            edges[0].cost = Some(hi.clone());
        }
    }
    Tree::new(nodes, edges)
}
