use proptest::prelude::*;

use witness_core::instances::{gen_random, RandomKind};
use witness_core::json::{parse_witness, witness_json, Instance, InstanceKind};
use witness_core::laminar::{is_laminar, laminarize};
use witness_core::nwt_solver::{solve_nwt, strip_terminals};
use witness_core::oracle::prufer_decode;
use witness_core::{eval, harmonic, q, Rational, Tree, Variant, WitnessTree};

fn random_witness(t: &Tree, picks: &[usize]) -> WitnessTree {
    let ids = t.terminals();
    let k = ids.len();
    let seq: Vec<usize> = picks.iter().take(k.saturating_sub(2)).map(|p| p % k).collect();
    WitnessTree::new(prufer_decode(&seq, k).into_iter().map(|(a, b)| (ids[a], ids[b]))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_stays_within_phi(n in 1usize..14, seed in any::<u64>()) {
        let t = gen_random(RandomKind::Ca, n, seed, (Rational::one(), Rational::one())).unwrap();
        let r = solve_nwt(&t).unwrap();
        prop_assert!(r.passed);
        prop_assert!(r.value <= r.phi);
        for res in &r.residuals {
            prop_assert!(!res.residual.is_negative());
        }
        let stripped = strip_terminals(&t).unwrap().tree;
        prop_assert_eq!(eval(&stripped, &r.witness, Variant::ComponentNode).unwrap(), r.value);
    }

    #[test]
    fn laminarize_never_increases(n in 1usize..6, seed in any::<u64>(),
                                  picks in prop::collection::vec(any::<usize>(), 12), edge in any::<bool>()) {
        let (kind, variant) = if edge { (RandomKind::Ewt, Variant::Edge) } else { (RandomKind::Ca, Variant::Node) };
        let t = gen_random(kind, n, seed, (q(1, 2), Rational::integer(3))).unwrap();
        prop_assume!(t.terminals().len() >= 2);
        let w = random_witness(&t, &picks);
        let l = laminarize(&t, &w, variant).unwrap();
        prop_assert!(is_laminar(&t, &l).unwrap());
        prop_assert!(eval(&t, &l, variant).unwrap() <= eval(&t, &w, variant).unwrap());
    }

    #[test]
    fn rational_text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = q(n, d);
        let back: Rational = r.to_string().parse().unwrap();
        prop_assert_eq!(&back, &r);
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r);
    }

    #[test]
    fn instance_and_witness_json_round_trip(n in 1usize..8, seed in any::<u64>(),
                                            picks in prop::collection::vec(any::<usize>(), 20)) {
        let t = gen_random(RandomKind::Ewt, n, seed, (q(1, 3), Rational::integer(2))).unwrap();
        let inst = Instance::from_tree(InstanceKind::Ewt, &t, serde_json::Value::Null);
        let back = Instance::parse(&inst.to_json()).unwrap().to_tree().unwrap();
        prop_assert_eq!(back.edge_specs(), t.edge_specs());
        prop_assume!(t.terminals().len() >= 2);
        let w = random_witness(&t, &picks);
        prop_assert_eq!(parse_witness(&witness_json(&w)).unwrap(), w);
    }

    #[test]
    fn harmonic_steps(n in 1usize..500) {
        prop_assert_eq!(harmonic(n) - harmonic(n - 1), q(1, n as i64));
    }
}
