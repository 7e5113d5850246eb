use proptest::prelude::*;
use qsym_core::correlation::{check_cptp, check_perfect, check_qns, compute_gamma};
use qsym_core::graph::{degree_compatibility, Graph, Permutation};
use qsym_core::linalg::{random_phase, random_unitary, Tolerance};
use qsym_core::nonlocal::certify_nonlocal;
use qsym_core::representation::{
    assemble_from_generators, build_diagonal, build_free_group_rep, build_k2_onedim, direct_sum,
    extract_magic_unitary, verify_representation, OneDimKind, Representation,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (Just(n), 0u64..(1u64 << pairs))
    })
    .prop_map(|(n, mask)| Graph::from_edge_mask(n, mask))
}

fn random_diagonal(g: &Graph, seed: u64, d: usize) -> Representation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<_> = (0..g.vertex_count()).map(|_| random_unitary(&mut rng, d)).collect();
    build_diagonal(g, &v, &tol()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_classes_cover_the_vertices(g in graph_strategy(8)) {
        let mut order = g.degree_partition().ordering();
        order.sort_unstable();
        prop_assert_eq!(order, (0..g.vertex_count()).collect::<Vec<_>>());
    }

    #[test]
    fn decomposition_leaves_are_regular_and_partition(g in graph_strategy(8)) {
        let tree = g.regular_decomposition();
        let mut seen = Vec::new();
        for leaf in tree.leaves() {
            let sub = g.induced_subgraph(&leaf.vertices).unwrap();
            prop_assert!(sub.is_regular());
            seen.extend(leaf.vertices.iter().copied());
        }
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..g.vertex_count()).collect::<Vec<_>>());
    }

    #[test]
    fn degree_compatibility_is_reflexive_and_relabelling_invariant(g in graph_strategy(8), seed in any::<u64>()) {
        prop_assert!(degree_compatibility(&g, &g).unwrap());
        let mut images: Vec<usize> = (0..g.vertex_count()).collect();
        images.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let moved = g.relabel(&Permutation::new(images).unwrap());
        prop_assert!(degree_compatibility(&g, &moved).unwrap());
    }

    #[test]
    fn automorphisms_are_closed_under_composition_and_inverse(g in graph_strategy(6)) {
        let group = g.automorphisms().unwrap();
        prop_assert!(group.contains(&Permutation::identity(g.vertex_count())));
        for s in &group {
            prop_assert!(group.contains(&s.inverse()));
            for t in &group {
                prop_assert!(group.contains(&s.compose(t)));
            }
        }
    }

    #[test]
    fn correlations_of_random_diagonal_reps_are_valid_channels(g in graph_strategy(4), seed in any::<u64>(), d in 1usize..4) {
        let rep = random_diagonal(&g, seed, d);
        let t = compute_gamma(&rep, &tol()).unwrap();
        prop_assert!(check_cptp(&t, &tol()).unwrap().passed());
        prop_assert!(check_qns(&t, &tol()).unwrap().passed());
        prop_assert!(check_perfect(&t, &g, &g, &tol()).unwrap().passed());
    }

    #[test]
    fn convex_mixtures_keep_linear_constraints(g in graph_strategy(4), s1 in any::<u64>(), s2 in any::<u64>(), t in 0.0f64..=1.0) {
        let a = compute_gamma(&random_diagonal(&g, s1, 2), &tol()).unwrap();
        let b = compute_gamma(&random_diagonal(&g, s2, 3), &tol()).unwrap();
        let mix = a.mix(&b, t).unwrap();
        prop_assert!(check_qns(&mix, &tol()).unwrap().passed());
        let cptp = check_cptp(&mix, &tol()).unwrap();
        prop_assert!(cptp.check("trace preserving").unwrap().pass);
        prop_assert!(cptp.check("conjugate symmetry").unwrap().pass);
    }

    #[test]
    fn magic_unitary_round_trip(seed in any::<u64>(), n in 2usize..6, d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: Vec<_> = (0..n - 1).map(|_| random_unitary(&mut rng, d)).collect();
        let rep = build_free_group_rep(n, &w, &tol()).unwrap();
        let report = verify_representation(&rep, &tol()).unwrap();
        prop_assert!(report.passed());
        let data = extract_magic_unitary(&rep, &tol()).unwrap();
        prop_assert!(data.check(&tol()).passed());
        let back = assemble_from_generators(n, &data.p, &data.chain_unitaries(), &tol()).unwrap();
        let again = extract_magic_unitary(&back, &tol()).unwrap();
        for (p, q) in data.p.iter().zip(&again.p) {
            prop_assert!(p.distance(q) <= 1e-9);
        }
    }

    #[test]
    fn k2_direct_sums_commute(seed in any::<u64>(), k in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let parts: Vec<_> = (0..k)
            .map(|_| {
                let kind = if rng.random_bool(0.5) { OneDimKind::Diagonal } else { OneDimKind::Antidiagonal };
                build_k2_onedim(random_phase(&mut rng), kind, &tol()).unwrap()
            })
            .collect();
        let rep = direct_sum(&parts).unwrap();
        prop_assert!(verify_representation(&rep, &tol()).unwrap().passed());
        let words: Vec<_> = (0..16)
            .map(|i| rep.word2(i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1))
            .collect();
        for p in &words {
            for q in &words {
                prop_assert!(p.commutator(q).frobenius_norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn certificates_are_relabelling_invariant(g in graph_strategy(6), seed in any::<u64>()) {
        prop_assume!(g.vertex_count() >= 3);
        let mut images: Vec<usize> = (0..g.vertex_count()).collect();
        images.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let moved = g.relabel(&Permutation::new(images).unwrap());
        let a = certify_nonlocal(&g, &tol()).unwrap();
        let b = certify_nonlocal(&moved, &tol()).unwrap();
        prop_assert!(a.passed() && b.passed());
        prop_assert_eq!(a.case, b.case);
        for (w, v) in a.witnesses.iter().zip(&b.witnesses) {
            prop_assert_eq!(w.computed, v.computed);
        }
    }
}
