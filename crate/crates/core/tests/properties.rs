use graphpack::copies::{automorphism_count, enumerate_labeled_copies, enumerate_unlabeled_copies, DEFAULT_COPY_CAP};
use graphpack::exact::{exact_packing, greedy_packing, verify_integer_packing, SearchStatus, DEFAULT_NODE_BUDGET};
use graphpack::family::{parse_family_spec, Family};
use graphpack::graph::{named_pattern, parse_graph, Graph};
use graphpack::hypergraph::{greedy_matching, nibble_matching, NibbleParams, UniformHypergraph};
use graphpack::lp::{labeled_normalize, packing_weight, solve_fractional_packing, verify_fractional, Arithmetic};
use graphpack::partition::{equitable_partition, refine_partition};
use graphpack::seed::rng;
use graphpack::Rational;
use num_bigint::BigInt;
use proptest::prelude::*;

fn small_graph() -> impl Strategy<Value = Graph> {
    (3usize..9, 0.2f64..0.9, any::<u64>()).prop_map(|(n, p, seed)| Graph::gnp(n, p, &mut rng(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn labeled_counts_are_unlabeled_times_automorphisms(g in small_graph(), name in prop::sample::select(vec!["K3", "C4", "P3", "S3"])) {
        let pattern = named_pattern(name).unwrap();
        let labeled = enumerate_labeled_copies(&g, &pattern, DEFAULT_COPY_CAP).unwrap();
        let unlabeled = enumerate_unlabeled_copies(&g, &pattern, DEFAULT_COPY_CAP).unwrap();
        prop_assert_eq!(labeled.len(), unlabeled.len() * automorphism_count(&pattern).unwrap());
    }

    #[test]
    fn packing_numbers_are_ordered(g in small_graph(), seed in any::<u64>()) {
        let f = Family::single("K3").unwrap();
        let lp = solve_fractional_packing(&g, &f, Arithmetic::ExactRational, DEFAULT_COPY_CAP).unwrap();
        prop_assert_eq!(&lp.value, &lp.dual_value);
        prop_assert!(verify_fractional(&lp.packing, &f, 0.0).accepted);
        let exact = exact_packing(&g, &f, DEFAULT_NODE_BUDGET, DEFAULT_COPY_CAP).unwrap();
        prop_assert_eq!(exact.status, SearchStatus::Optimal);
        let greedy = greedy_packing(&g, &f, &mut rng(seed), DEFAULT_COPY_CAP).unwrap();
        prop_assert!(verify_integer_packing(&g, &f, &exact.packing).accepted);
        prop_assert!(verify_integer_packing(&g, &f, &greedy).accepted);
        prop_assert!(greedy.size() <= exact.size());
        prop_assert!(Rational::from_integer(BigInt::from(exact.size())) <= lp.value);
        // ν* is at most a third of the edge count for triangles.
        prop_assert!(lp.value.clone() * Rational::from_integer(BigInt::from(3)) <= Rational::from_integer(BigInt::from(g.edge_count())));
    }

    #[test]
    fn float_lp_tracks_exact(g in small_graph()) {
        let f = parse_family_spec("K3,C4", None).unwrap();
        let exact = solve_fractional_packing(&g, &f, Arithmetic::ExactRational, DEFAULT_COPY_CAP).unwrap();
        let float = solve_fractional_packing(&g, &f, Arithmetic::Float, DEFAULT_COPY_CAP).unwrap();
        prop_assert!((exact.value_f64() - float.value_f64()).abs() <= 1e-9 * exact.value_f64().max(1.0));
        prop_assert!(verify_fractional(&float.packing, &f, 0.0).accepted);
        let labeled = labeled_normalize(&exact.packing, &f).unwrap();
        prop_assert_eq!(packing_weight(&labeled), exact.value.clone());
        prop_assert!(verify_fractional(&labeled, &f, 0.0).accepted);
    }

    #[test]
    fn graph_text_round_trips(g in small_graph()) {
        prop_assert_eq!(parse_graph(&g.to_text()).unwrap().graph, g);
    }

    #[test]
    fn partitions_cover_every_vertex(n in 1usize..80, m in 1usize..10, factor in 1usize..4, seed in any::<u64>()) {
        prop_assume!(m * factor <= n);
        let p = equitable_partition(n, m, &mut rng(seed)).unwrap();
        prop_assert!(p.max_class_size() - p.min_class_size() <= 1);
        let q = refine_partition(&p, factor, &mut rng(seed)).unwrap();
        prop_assert_eq!(q.len(), m * factor);
        let mut seen: Vec<u32> = q.classes().iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..n as u32).collect::<Vec<_>>());
    }

    #[test]
    fn matchings_are_valid(q in 3usize..18, r in 2usize..4, keep in 0.1f64..1.0, seed in any::<u64>()) {
        let full = UniformHypergraph::complete(q, r);
        let mut pick = rng(seed);
        let edges: Vec<Vec<u32>> = full.edges().filter(|_| rand::Rng::gen_bool(&mut pick, keep)).map(|e| e.to_vec()).collect();
        let h = UniformHypergraph::new(q, r, edges).unwrap();
        let nibble = nibble_matching(&h, NibbleParams::default(), &mut rng(seed));
        prop_assert!(nibble.matching.is_valid_for(&h));
        prop_assert!(greedy_matching(&h, &mut rng(seed)).is_valid_for(&h));
    }
}
