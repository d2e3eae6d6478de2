//! Exhaustive comparison of three descriptions of laminar witness trees on small hosts:
//! all laminar spanning trees, all region pointer assignments, and all markings.

use std::collections::{BTreeMap, BTreeSet};

use witness_core::instances::{gen_random, RandomKind};
use witness_core::laminar::{is_laminar, witness_from_marking, witness_from_regions, Frame, Regions};
use witness_core::oracle::{optimal_exhaustive, optimal_laminar, prufer_decode, DEFAULT_BUDGET};
use witness_core::{Rational, Tree, Variant, WitnessTree};

fn all_laminar(t: &Tree) -> BTreeSet<WitnessTree> {
    let ids = t.terminals();
    let k = ids.len();
    let mut out = BTreeSet::new();
    let len = k.saturating_sub(2);
    let mut seq = vec![0usize; len];
    loop {
        let w = WitnessTree::new(prufer_decode(&seq, k).into_iter().map(|(a, b)| (ids[a], ids[b]))).unwrap();
        if is_laminar(t, &w).unwrap() {
            out.insert(w);
        }
        let mut i = 0;
        while i < len && seq[i] == k - 1 {
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            return out;
        }
        seq[i] += 1;
    }
}

fn all_regions(t: &Tree) -> BTreeSet<WitnessTree> {
    let free: Vec<usize> = t.steiner_indices();
    let mut out = BTreeSet::new();
    let mut pick = vec![0usize; free.len()];
    loop {
        let toward: BTreeMap<u64, u64> =
            free.iter().zip(&pick).map(|(&v, &k)| (t.id(v), t.id(t.neighbors(v)[k].0))).collect();
        if let Ok(w) = witness_from_regions(t, &Regions { toward }) {
            out.insert(w);
        }
        let mut i = 0;
        while i < free.len() && pick[i] + 1 == t.neighbors(free[i]).len() {
            pick[i] = 0;
            i += 1;
        }
        if i == free.len() {
            return out;
        }
        pick[i] += 1;
    }
}

fn all_markings(t: &Tree) -> BTreeSet<WitnessTree> {
    let mut out = BTreeSet::new();
    for r in t.internal_indices() {
        let frame = Frame::new(t, t.id(r)).unwrap();
        let radices = frame.radices();
        let mut choice = vec![0usize; radices.len()];
        loop {
            out.insert(witness_from_marking(t, &frame.marking(t, &choice)).unwrap());
            let mut i = 0;
            while i < radices.len() && choice[i] + 1 == radices[i] {
                choice[i] = 0;
                i += 1;
            }
            if i == radices.len() {
                break;
            }
            choice[i] += 1;
        }
    }
    out
}

fn small_trees() -> Vec<Tree> {
    let mut out = Vec::new();
    for seed in 0..400u64 {
        let kind = if seed % 2 == 0 { RandomKind::Ca } else { RandomKind::Ewt };
        let t = gen_random(kind, 1 + (seed % 5) as usize, seed, (Rational::one(), Rational::one())).unwrap();
        let r = t.terminals().len();
        if (2..=7).contains(&r) && !t.internal_indices().is_empty() {
            out.push(t);
        }
    }
    out
}

#[test]
fn regions_describe_exactly_the_laminar_trees() {
    let trees = small_trees();
    assert!(trees.len() >= 100);
    let mut strict = 0;
    for t in &trees {
        let lam = all_laminar(t);
        assert_eq!(all_regions(t), lam, "{:?}", t.edge_specs());
        let marked = all_markings(t);
        assert!(marked.is_subset(&lam));
        strict += (marked != lam) as usize;
    }
    // some laminar trees are reachable by no marking from any root
    assert!(strict > 0);
}

#[test]
fn laminar_oracle_matches_exhaustive() {
    let mut compared = 0;
    for seed in 0..600u64 {
        for (kind, variant) in [(RandomKind::Ca, Variant::Node), (RandomKind::Ewt, Variant::Edge)] {
            let t = gen_random(kind, 1 + (seed % 6) as usize, seed, (Rational::zero(), Rational::integer(2))).unwrap();
            let r = t.terminals().len();
            if !(2..=7).contains(&r) || (variant == Variant::Edge && !t.total_cost().is_positive()) {
                continue;
            }
            let a = optimal_laminar(&t, variant, DEFAULT_BUDGET).unwrap();
            let b = optimal_exhaustive(&t, variant).unwrap();
            assert_eq!(a.value, b.value, "seed {seed} {variant}: {:?}", t.edge_specs());
            assert!(is_laminar(&t, &a.witness).unwrap());
            compared += 1;
        }
    }
    assert!(compared >= 300, "{compared}");
}
