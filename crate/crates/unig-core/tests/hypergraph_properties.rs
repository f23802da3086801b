//! Property checks of the structural operations: adjacency positivity
//! against a membership scan, degree-sum accounting, idempotent clique
//! expansion, and homophily invariance under class relabeling.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unig_core::toy::random_hypergraph;
use unig_core::{
    adjacency, build_incidence, clique_expansion, degrees, homophily_score, LabelVector,
};

#[test]
fn adjacency_is_positive_exactly_on_shared_edge_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    for case in 0..200 {
        let h = random_hypergraph(&mut rng, 20, 15);
        let adj = adjacency(&build_incidence(&h));
        for i in 0..h.num_nodes() {
            for j in 0..h.num_nodes() {
                if i == j {
                    continue;
                }
                let shared = h
                    .edges()
                    .iter()
                    .any(|e| e.contains(&i) && e.contains(&j));
                assert_eq!(
                    adj.get(i, j) > 0.0,
                    shared,
                    "case {case}: pair ({i}, {j}) disagrees with the membership scan"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn degree_sums_both_equal_the_total_incidence_entries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hypergraph(&mut rng, 25, 20);
        let inc = build_incidence(&h);
        let deg = degrees(&inc);
        let node_total: usize = deg.node_degrees.iter().sum();
        let edge_total: usize = deg.edge_degrees.iter().sum();
        let member_total: usize = h.edges().iter().map(|e| e.len()).sum();
        prop_assert_eq!(node_total, member_total);
        prop_assert_eq!(edge_total, member_total);
    }

    #[test]
    fn clique_expansion_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hypergraph(&mut rng, 25, 20);
        let once = clique_expansion(&h);
        let twice = clique_expansion(&once);
        prop_assert_eq!(once.num_nodes(), twice.num_nodes());
        prop_assert_eq!(once.edges(), twice.edges());
    }

    #[test]
    fn homophily_is_invariant_under_class_relabeling(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hypergraph(&mut rng, 25, 20);
        let num_classes = rng.random_range(1..=4usize);
        let labels: Vec<usize> = (0..h.num_nodes())
            .map(|_| rng.random_range(0..num_classes))
            .collect();

        let mut relabel: Vec<usize> = (0..num_classes).collect();
        for i in (1..num_classes).rev() {
            relabel.swap(i, rng.random_range(0..=i));
        }
        let relabeled: Vec<usize> = labels.iter().map(|&c| relabel[c]).collect();

        let original = homophily_score(&h, &LabelVector::new(labels, num_classes).unwrap()).unwrap();
        let renamed =
            homophily_score(&h, &LabelVector::new(relabeled, num_classes).unwrap()).unwrap();
        prop_assert_eq!(original.value, renamed.value);
        prop_assert_eq!(original.no_pairs, renamed.no_pairs);
    }
}
