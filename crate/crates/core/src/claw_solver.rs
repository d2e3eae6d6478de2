//! Steiner-claw-free witness construction: path normalization, the offset-star witness,
//! its exact expectation over the offset, and the small-q fallback.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, WitnessError};
use crate::harmonic::harmonic;
use crate::rational::{q, Rational};
use crate::tree::{EdgeSpec, NodeId, NodeSpec, Tree};
use crate::witness::{eval_ewt, impose_indexed, Variant, WitnessTree};

/// Steiner path `s_1..s_q`, each `s_i` with one terminal `r_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClawInstance {
    pub q: usize,
    /// Original id of `r_i` at position `i - 1`.
    pub terminals: Vec<NodeId>,
    /// `c(s_i r_i)`.
    pub l_costs: Vec<Rational>,
    /// `c(s_i s_{i+1})`, length `q - 1`.
    pub o_costs: Vec<Rational>,
}

impl ClawInstance {
    pub fn new(terminals: Vec<NodeId>, l_costs: Vec<Rational>, o_costs: Vec<Rational>) -> Result<Self> {
        let q = terminals.len();
        if q == 0 || l_costs.len() != q || o_costs.len() + 1 != q {
            return Err(WitnessError::InvalidParameters(format!(
                "{} terminals, {} L costs, {} O costs",
                q,
                l_costs.len(),
                o_costs.len()
            )));
        }
        if l_costs.iter().chain(&o_costs).any(Rational::is_negative) {
            return Err(WitnessError::InvalidParameters("negative cost".into()));
        }
        if l_costs.iter().all(Rational::is_zero) {
            return Err(WitnessError::InvalidParameters("c(L) = 0".into()));
        }
        Ok(ClawInstance { q, terminals, l_costs, o_costs })
    }

    /// Unit L costs and equal O costs `alpha q / (q - 1)`, so that `c(O)/c(L) = alpha`.
    pub fn uniform(q: usize, alpha: &Rational) -> Result<Self> {
        if q == 0 || (q == 1 && !alpha.is_zero()) || alpha.is_negative() {
            return Err(WitnessError::InvalidParameters(format!("no uniform instance with q = {q}, alpha = {alpha}")));
        }
        let o = if q == 1 {
            Rational::zero()
        } else {
            alpha * Rational::integer(q as i64) / Rational::integer(q as i64 - 1)
        };
        ClawInstance::new(
            (1..=q as NodeId).map(|i| q as NodeId + i).collect(),
            vec![Rational::one(); q],
            vec![o; q - 1],
        )
    }

    pub fn cost_l(&self) -> Rational {
        self.l_costs.iter().sum()
    }

    pub fn cost_o(&self) -> Rational {
        self.o_costs.iter().sum()
    }

    pub fn alpha(&self) -> Rational {
        self.cost_o() / self.cost_l()
    }

    pub fn s_id(&self, i: usize) -> NodeId {
        i as NodeId
    }

    pub fn r_id(&self, i: usize) -> NodeId {
        (self.q + i) as NodeId
    }

    /// Canonical host: `s_i = i`, `r_i = q + i` for `i` in `1..=q`.
    pub fn host(&self) -> Tree {
        let mut nodes = Vec::with_capacity(2 * self.q);
        let mut edges = Vec::with_capacity(2 * self.q);
        for i in 1..=self.q {
            nodes.push(NodeSpec::steiner(self.s_id(i)));
            nodes.push(NodeSpec::terminal(self.r_id(i)));
            edges.push(EdgeSpec::with_cost(self.s_id(i), self.r_id(i), self.l_costs[i - 1].clone()));
            if i > 1 {
                edges.push(EdgeSpec::with_cost(self.s_id(i - 1), self.s_id(i), self.o_costs[i - 2].clone()));
            }
        }
        Tree::new(nodes, edges).expect("canonical claw host is valid")
    }

    /// Maps a witness on positions `1..=q` to host ids.
    pub fn on_host(&self, w: &WitnessTree) -> WitnessTree {
        WitnessTree::new(w.edges().iter().map(|&(a, b)| (self.r_id(a as usize), self.r_id(b as usize)))).unwrap()
    }

    /// Maps a witness on positions `1..=q` to the ids of the tree this instance came from.
    pub fn on_original(&self, w: &WitnessTree) -> WitnessTree {
        let t = |i: NodeId| self.terminals[i as usize - 1];
        WitnessTree::new(w.edges().iter().map(|&(a, b)| (t(a), t(b)))).unwrap()
    }
}

/// Brings a claw-free host into path form. A Steiner node with `p >= 2` terminals becomes
/// `p` path nodes joined by 0-cost edges; a terminal-free path node is contracted and its
/// two path edges merge into one edge of the summed cost.
pub fn normalize(tree: &Tree) -> Result<ClawInstance> {
    let steiner = tree.steiner_indices();
    if steiner.is_empty() {
        return Err(WitnessError::InvalidTree("no Steiner nodes".into()));
    }
    let snbrs = |v: usize| -> Vec<(usize, usize)> {
        tree.neighbors(v).iter().copied().filter(|&(u, _)| !tree.is_terminal(u)).collect()
    };
    for &v in &steiner {
        if snbrs(v).len() >= 3 {
            return Err(WitnessError::NotClawFree(tree.id(v)));
        }
    }
    let start = *steiner.iter().find(|&&v| snbrs(v).len() <= 1).expect("a path has an end");
    let mut order = vec![(start, None)];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = snbrs(cur).into_iter().find(|&(u, _)| u != prev);
        match next {
            Some((u, e)) => {
                order.push((u, Some(e)));
                prev = cur;
                cur = u;
            }
            None => break,
        }
    }

    let mut terminals = Vec::new();
    let mut l_costs = Vec::new();
    let mut o_costs: Vec<Rational> = Vec::new();
    // cost of the path edge waiting to connect the last emitted node to the next one
    let mut pending: Option<Rational> = None;
    for (k, &(v, in_edge)) in order.iter().enumerate() {
        if let Some(e) = in_edge {
            let c = tree.cost(e).clone();
            pending = Some(match pending {
                Some(p) => p + c,
                None => c,
            });
        }
        let mut ts: Vec<(NodeId, Rational)> = tree
            .neighbors(v)
            .iter()
            .filter(|&&(u, _)| tree.is_terminal(u))
            .map(|&(u, e)| (tree.id(u), tree.cost(e).clone()))
            .collect();
        ts.sort();
        if ts.is_empty() {
            if k == 0 || k + 1 == order.len() {
                return Err(WitnessError::InvalidTree(format!("Steiner leaf {} has no terminal", tree.id(v))));
            }
            continue;
        }
        for (j, (id, c)) in ts.into_iter().enumerate() {
            if !terminals.is_empty() {
                o_costs.push(if j == 0 { pending.take().unwrap_or_else(Rational::zero) } else { Rational::zero() });
            }
            terminals.push(id);
            l_costs.push(c);
        }
        pending = None;
    }
    if l_costs.iter().all(Rational::is_zero) {
        return Err(WitnessError::InvalidTree("terminal edges have zero total cost".into()));
    }
    ClawInstance::new(terminals, l_costs, o_costs)
}

/// Star size for the cost ratio: 5 on `[0, 32/90]`, 3 on `(32/90, 1)`, 1 from 1 on.
pub fn t_for_alpha(alpha: &Rational) -> usize {
    if *alpha <= q(32, 90) {
        5
    } else if *alpha < Rational::one() {
        3
    } else {
        1
    }
}

/// Offset-`sigma` witness on positions `1..=q`: stars of radius `t/2` at `sigma, sigma + t, ...`
/// joined in sequence, with `r_1` and `r_q` collecting the uncovered ends.
pub fn build_sigma(qn: usize, t: usize, sigma: usize) -> Result<WitnessTree> {
    if qn == 0 || t == 0 || sigma == 0 || sigma > t || sigma > qn {
        return Err(WitnessError::InvalidSigma { sigma, t, q: qn });
    }
    let half = t / 2;
    let up = t.div_ceil(2);
    let mut e: Vec<(NodeId, NodeId)> = Vec::new();
    let star = |c: usize, e: &mut Vec<(NodeId, NodeId)>| {
        for k in 1..=half {
            if c > k {
                e.push((c as NodeId, (c - k) as NodeId));
            }
            if c + k <= qn {
                e.push((c as NodeId, (c + k) as NodeId));
            }
        }
    };
    star(sigma, &mut e);
    let jmax = (qn - sigma) / t;
    for j in 1..=jmax {
        let l = sigma + t * j;
        star(l, &mut e);
        e.push(((l - t) as NodeId, l as NodeId));
    }
    if sigma > up {
        for k in 2..=sigma - up {
            e.push((1, k as NodeId));
        }
        e.push((1, sigma as NodeId));
    }
    let last = sigma + t * jmax;
    if last + up <= qn {
        for k in last + up..qn {
            e.push((k as NodeId, qn as NodeId));
        }
        e.push((last as NodeId, qn as NodeId));
    }
    let w = WitnessTree::new(e)?;
    let mut dsu = crate::witness::Dsu::new(qn + 1);
    for &(a, b) in w.edges() {
        if !dsu.union(a as usize, b as usize) {
            return Err(WitnessError::InvalidWitness(format!("offset witness has a cycle: {w}")));
        }
    }
    if w.len() + 1 != qn {
        return Err(WitnessError::InvalidWitness(format!("offset witness is not spanning: {w}")));
    }
    Ok(w)
}

/// `(1/t) H_{t+1} + (t-1)/t`.
pub fn lambda_l(t: usize) -> Rational {
    let tr = Rational::integer(t as i64);
    harmonic(t + 1) / &tr + Rational::integer(t as i64 - 1) / tr
}

/// `1/t + (2/t) sum_{i=2}^{ceil(t/2)} H_i`.
pub fn lambda_o(t: usize) -> Rational {
    let tr = Rational::integer(t as i64);
    let s: Rational = (2..=t.div_ceil(2)).map(harmonic).sum();
    (Rational::one() + Rational::integer(2) * s) / tr
}

/// Expected `H_w` on the end edge `s_1 r_1`: `(1/t)(H_{ceil(t/2)} + floor(t/2) + sum_{k<=t-ceil(t/2)} H_k)`.
pub fn end_edge_expectation(t: usize) -> Rational {
    let up = t.div_ceil(2);
    let s: Rational = (1..=t - up).map(harmonic).sum();
    (harmonic(up) + Rational::integer((t / 2) as i64) + s) / Rational::integer(t as i64)
}

/// `(lambda_L(t) + alpha lambda_O(t)) / (1 + alpha)` with `t = t_for_alpha(alpha)`.
pub fn f_alpha(alpha: &Rational) -> Rational {
    let t = t_for_alpha(alpha);
    (lambda_l(t) + alpha * lambda_o(t)) / (Rational::one() + alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    L,
    O,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeExpectation {
    pub u: NodeId,
    pub v: NodeId,
    pub kind: EdgeKind,
    pub expected: Rational,
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClawExpectation {
    pub q: usize,
    pub alpha: Rational,
    pub t: usize,
    /// Objective of the offset witness for `sigma = 1..=t`.
    pub values: Vec<Rational>,
    pub expected: Rational,
    pub best_sigma: usize,
    pub edges: Vec<EdgeExpectation>,
    pub lambda_l: Rational,
    pub lambda_o: Rational,
    pub f_alpha: Rational,
    /// Every edge expectation is within its lambda bound.
    pub edges_ok: bool,
    /// `expected <= f(alpha) <= 991/732`.
    pub bound_ok: bool,
}

/// Exact average over all offsets, with per-edge expectations certified against the lambda bounds.
pub fn expected_value(inst: &ClawInstance) -> Result<ClawExpectation> {
    if inst.q < 5 {
        return Err(WitnessError::QTooSmall(inst.q));
    }
    let alpha = inst.alpha();
    let t = t_for_alpha(&alpha);
    let host = inst.host();
    let builds: Vec<(Rational, Vec<usize>)> = (1..=t)
        .into_par_iter()
        .map(|sigma| {
            let w = inst.on_host(&build_sigma(inst.q, t, sigma)?);
            let pairs = w.validate(&host, Variant::Edge)?;
            Ok((eval_ewt(&host, &w)?, impose_indexed(&host, &pairs, Variant::Edge)))
        })
        .collect::<Result<_>>()?;
    let tr = Rational::integer(t as i64);
    let values: Vec<Rational> = builds.iter().map(|b| b.0.clone()).collect();
    let expected = values.iter().sum::<Rational>() / &tr;
    let best_sigma = 1 + (0..t).min_by(|&a, &b| values[a].cmp(&values[b])).unwrap();
    let (ll, lo) = (lambda_l(t), lambda_o(t));
    let edges: Vec<EdgeExpectation> = (0..host.edge_count())
        .map(|e| {
            let (u, v) = host.edge_ids(e);
            let kind = if host.is_terminal(host.edge(e).0) || host.is_terminal(host.edge(e).1) { EdgeKind::L } else { EdgeKind::O };
            let expected = builds.iter().map(|b| harmonic(b.1[e])).sum::<Rational>() / &tr;
            let bound = if kind == EdgeKind::L { ll.clone() } else { lo.clone() };
            EdgeExpectation { u, v, kind, expected, bound }
        })
        .collect();
    let edges_ok = edges.iter().all(|x| x.expected <= x.bound);
    let fa = f_alpha(&alpha);
    let bound_ok = expected <= fa && fa <= q(991, 732);
    Ok(ClawExpectation {
        q: inst.q,
        alpha,
        t,
        values,
        expected,
        best_sigma,
        edges,
        lambda_l: ll,
        lambda_o: lo,
        f_alpha: fa,
        edges_ok,
        bound_ok,
    })
}

/// Draws the offset with ChaCha8 seeded by `seed`.
pub fn sample_sigma(t: usize, seed: u64) -> usize {
    ChaCha8Rng::seed_from_u64(seed).gen_range(1..=t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SmallKind {
    Chain,
    Stars,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallQ {
    pub kind: SmallKind,
    /// One witness for the chain; one star per center for the uniform distribution.
    pub witnesses: Vec<WitnessTree>,
    /// Chain objective, or the exact expectation over centers.
    pub value: Rational,
    /// `(H_2 + alpha)/(1 + alpha)` for the chain, `(29/24 + alpha H_2)/(1 + alpha)` for stars.
    pub bound: Rational,
}

/// Fallback for `q < 5`: the chain when `alpha >= 1/2`, else a star at a uniformly random center.
pub fn small_q(inst: &ClawInstance) -> Result<SmallQ> {
    if inst.q >= 5 {
        return Err(WitnessError::InvalidParameters(format!("small_q takes q < 5, got {}", inst.q)));
    }
    let alpha = inst.alpha();
    let host = inst.host();
    let one = Rational::one();
    if alpha >= q(1, 2) {
        let w = WitnessTree::new((1..inst.q).map(|i| (i as NodeId, i as NodeId + 1)))?;
        let value = eval_ewt(&host, &inst.on_host(&w))?;
        let bound = (harmonic(2) + &alpha) / (&one + &alpha);
        return Ok(SmallQ { kind: SmallKind::Chain, witnesses: vec![w], value, bound });
    }
    let mut witnesses = Vec::with_capacity(inst.q);
    let mut total = Rational::zero();
    for c in 1..=inst.q {
        let w = WitnessTree::new((1..=inst.q).filter(|&i| i != c).map(|i| (c as NodeId, i as NodeId)))?;
        total += eval_ewt(&host, &inst.on_host(&w))?;
        witnesses.push(w);
    }
    let value = total / Rational::integer(inst.q as i64);
    let bound = (q(29, 24) + &alpha * harmonic(2)) / (&one + &alpha);
    Ok(SmallQ { kind: SmallKind::Stars, witnesses, value, bound })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClawReport {
    pub instance: ClawInstance,
    pub alpha: Rational,
    /// Witness in the ids of the input tree: the sampled offset when a seed is given,
    /// otherwise the best offset.
    pub witness: WitnessTree,
    pub value: Rational,
    pub sigma: Option<usize>,
    pub expectation: Option<ClawExpectation>,
    pub small: Option<SmallQ>,
    pub passed: bool,
}

/// Normalizes `tree` and runs the offset construction (or the small-q fallback).
pub fn solve_claw(tree: &Tree, seed: Option<u64>) -> Result<ClawReport> {
    let inst = normalize(tree)?;
    let alpha = inst.alpha();
    if inst.q < 5 {
        let small = small_q(&inst)?;
        let (witness, value) = match small.kind {
            SmallKind::Chain => (small.witnesses[0].clone(), small.value.clone()),
            SmallKind::Stars => {
                let host = inst.host();
                let c = match seed {
                    Some(s) => ChaCha8Rng::seed_from_u64(s).gen_range(0..inst.q),
                    None => (0..inst.q)
                        .min_by_key(|&c| eval_ewt(&host, &inst.on_host(&small.witnesses[c])).unwrap())
                        .unwrap(),
                };
                let w = small.witnesses[c].clone();
                let v = eval_ewt(&host, &inst.on_host(&w))?;
                (w, v)
            }
        };
        let passed = small.value <= small.bound && small.value < q(991, 732);
        return Ok(ClawReport {
            witness: inst.on_original(&witness),
            value,
            sigma: None,
            expectation: None,
            small: Some(small),
            alpha,
            instance: inst,
            passed,
        });
    }
    let ex = expected_value(&inst)?;
    let sigma = match seed {
        Some(s) => sample_sigma(ex.t, s),
        None => ex.best_sigma,
    };
    let w = build_sigma(inst.q, ex.t, sigma)?;
    let value = ex.values[sigma - 1].clone();
    Ok(ClawReport {
        witness: inst.on_original(&w),
        value,
        sigma: Some(sigma),
        passed: ex.edges_ok && ex.bound_ok,
        expectation: Some(ex),
        small: None,
        alpha,
        instance: inst,
    })
}
