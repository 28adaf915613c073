mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use proptest::sample::subsequence;
use rainbow_core::apps::translate_copy;
use rainbow_core::colouring::set_of;
use rainbow_core::embed::{embed_tree, layer_probabilities, sample_partitions, PipelineConfig, SIMPLEX_TOLERANCE, STAR_CLASS};
use rainbow_core::generators::{group_sum_colouring, nd_colouring, random_locally_k_bounded};
use rainbow_core::group::Group;
use rainbow_core::io::{colouring_to_json, parse_colouring_json};
use rainbow_core::matching::{greedy_rainbow_matching, switching_rainbow_matching, SwitchingParams};
use rainbow_core::tree::{canonical_form, split_tree, validate_decomposition};
use rainbow_core::verify::{check_harmonious, check_packing, check_rainbow_embedding};
use rainbow_core::{GroupSpec, Tree};

fn tree_strategy(max: usize) -> impl Strategy<Value = Tree> {
    (1..=max, any::<u64>()).prop_map(|(n, seed)| Tree::random(n, seed).unwrap())
}

/// A tree with an injective labelling into `Z_m`, `|T| <= m <= 2|T| + 2`.
fn labelled_tree() -> impl Strategy<Value = (Tree, usize, Vec<usize>)> {
    (tree_strategy(12), 0usize..=14)
        .prop_flat_map(|(tree, extra)| {
            let m = (tree.len() + extra).max(3);
            let labels = Just((0..m).collect::<Vec<_>>()).prop_shuffle();
            (Just(tree), Just(m), labels)
        })
        .prop_map(|(tree, m, mut labels)| {
            labels.truncate(tree.len());
            (tree, m, labels)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn nd_colourings_are_symmetric_and_locally_two_bounded(m in 1usize..40) {
        let c = nd_colouring(m).unwrap();
        prop_assert_eq!(c.n(), 2 * m + 1);
        prop_assert_eq!(c.num_colours(), m);
        for u in 0..c.n() {
            let mut seen = vec![0usize; m];
            for v in 0..c.n() {
                if u != v {
                    prop_assert_eq!(c.colour(u, v), c.colour(v, u));
                    seen[c.colour(u, v)] += 1;
                }
            }
            prop_assert!(seen.iter().all(|&d| d == 2));
        }
    }

    #[test]
    fn random_colourings_respect_their_bound(n in 2usize..40, k in 1usize..5, seed in any::<u64>()) {
        let c = random_locally_k_bounded(n, k, seed).unwrap();
        prop_assert!(c.verify_locally_k_bounded(64).unwrap() <= k);
        let again = random_locally_k_bounded(n, k, seed).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                prop_assert_eq!(c.colour(u, v), again.colour(u, v));
            }
        }
    }

    #[test]
    fn group_sum_colourings_are_proper(orders in prop::collection::vec(2usize..6, 1..4)) {
        let spec = GroupSpec::product(orders);
        prop_assume!(spec.order() >= 3);
        let c = group_sum_colouring(&spec).unwrap();
        prop_assert_eq!(c.verify_locally_k_bounded(256).unwrap(), 1);
    }

    #[test]
    fn neighbours_in_matches_a_filter(
        m in 2usize..30,
        v_pick in any::<prop::sample::Index>(),
        colour_mask in any::<u64>(),
        vertex_mask in any::<u64>(),
    ) {
        let c = nd_colouring(m).unwrap();
        let n = c.n();
        let v = v_pick.index(n);
        let colours = set_of(m, (0..m).filter(|i| colour_mask >> (i % 64) & 1 == 1));
        let within = set_of(n, (0..n).filter(|i| vertex_mask >> (i % 64) & 1 == 1));
        let got: Vec<usize> = c.neighbours_in(v, &colours, &within).unwrap().ones().collect();
        let expected: Vec<usize> =
            (0..n).filter(|&u| u != v && within.contains(u) && colours.contains(c.colour(u, v))).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn harmonious_exactly_when_rainbow_in_the_sum_colouring((tree, m, labels) in labelled_tree()) {
        let spec = GroupSpec::cyclic(m);
        let colouring = group_sum_colouring(&spec).unwrap();
        let rainbow = check_rainbow_embedding(&colouring, &tree, &labels).unwrap().passed();
        let harmonious = check_harmonious(&tree, &Group::new(spec).unwrap(), &labels).unwrap().passed();
        prop_assert_eq!(rainbow, harmonious);
        prop_assert_eq!(harmonious, common::is_cyclic_harmonious(&tree, m, &labels));
        prop_assert_eq!(rainbow, common::is_rainbow_copy(&colouring, &tree, &labels));
    }

    #[test]
    fn translates_of_a_rainbow_copy_pack(tree in tree_strategy(8), extra in 0usize..4, seed in any::<u64>()) {
        let m = tree.len() - 1 + extra;
        prop_assume!(m >= 1);
        let host = nd_colouring(m).unwrap();
        let config = PipelineConfig { seed, ..PipelineConfig::default() };
        let outcome = embed_tree(&host, &tree, &config).unwrap();
        let base = outcome.embedding.expect("small trees always embed in nd hosts");
        let group = Group::new(GroupSpec::cyclic(2 * m + 1)).unwrap();
        let copies: Vec<_> = (0..2 * m + 1).map(|s| translate_copy(&base.map, s, &group)).collect();
        for copy in &copies {
            prop_assert!(common::is_rainbow_copy(&host, &tree, copy));
        }
        prop_assert!(check_packing(2 * m + 1, &tree, &copies, false).unwrap().passed());
        let uses = common::edge_multiplicities(2 * m + 1, &tree, &copies).unwrap();
        prop_assert!(uses.values().all(|&c| c == 1));
    }

    #[test]
    fn rainbow_check_agrees_with_the_oracle(
        seed in any::<u64>(),
        tree in tree_strategy(10),
        map in Just((0..15).collect::<Vec<usize>>()).prop_shuffle(),
        k in 1usize..4,
    ) {
        let colouring = random_locally_k_bounded(15, k, seed).unwrap();
        let map = &map[..tree.len()];
        let verdict = check_rainbow_embedding(&colouring, &tree, map).unwrap();
        prop_assert_eq!(verdict.passed(), common::is_rainbow_copy(&colouring, &tree, map));
    }

    #[test]
    fn switching_is_sound_and_never_below_greedy(
        seed in any::<u64>(),
        sources in subsequence((0..20).collect::<Vec<usize>>(), 1..=8),
        colour_mask in any::<u64>(),
    ) {
        let c = random_locally_k_bounded(20, 2, seed).unwrap();
        let targets: Vec<usize> = (0..20).filter(|v| !sources.contains(v)).take(12).collect();
        let allowed: HashSet<usize> = (0..c.num_colours()).filter(|i| colour_mask >> (i % 64) & 1 == 1).collect();
        let a = set_of(20, sources.iter().copied());
        let x = set_of(20, targets.iter().copied());
        let cols = set_of(c.num_colours(), allowed.iter().copied());
        let greedy = greedy_rainbow_matching(&c, &a, &x, &cols).unwrap();
        let out = switching_rainbow_matching(&c, &a, &x, &cols, &SwitchingParams::default()).unwrap();
        prop_assert!(out.matching.validate(&c).is_ok());
        prop_assert!(out.matching.iter().all(|(u, v, col)| a.contains(u) && x.contains(v) && allowed.contains(&col)));
        prop_assert!(out.matching.len() >= greedy.len());
        prop_assert!(out.matching.len() <= common::max_rainbow_matching(&c, &sources, &targets, &allowed));
    }

    #[test]
    fn splits_validate_and_rebuild_prefixes(tree in tree_strategy(300), threshold in 1usize..12) {
        let n_target = tree.len().max(100) * 2;
        let d = split_tree(&tree, threshold, 0.05, n_target).unwrap();
        prop_assert_eq!(validate_decomposition(&tree, &d), Ok(()));
        let mut rebuilt = common::induced_edges(&tree, &d.prefix_membership(tree.len(), 0));
        for i in 1..=d.ell() {
            rebuilt.extend(common::layer_edges(&d.layers[i]));
            prop_assert_eq!(&rebuilt, &common::induced_edges(&tree, &d.prefix_membership(tree.len(), i)));
        }
        prop_assert_eq!(rebuilt.len(), tree.len() - 1);
    }

    #[test]
    fn canonical_forms_ignore_labels(tree in tree_strategy(14), perm_seed in any::<u64>()) {
        let n = tree.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = perm_seed | 1;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let relabelled = Tree::new(n, tree.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect()).unwrap();
        prop_assert_eq!(canonical_form(&tree), canonical_form(&relabelled));
        prop_assert_eq!(common::tree_class(&tree), common::tree_class(&relabelled));
    }

    #[test]
    fn text_and_json_round_trip(tree in tree_strategy(40), n in 2usize..25, k in 1usize..4, seed in any::<u64>()) {
        prop_assert_eq!(Tree::parse(&tree.to_text()).unwrap(), tree);
        let colouring = random_locally_k_bounded(n, k, seed).unwrap();
        let back = parse_colouring_json(&colouring_to_json(&colouring).to_string()).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                prop_assert_eq!(
                    colouring.colour_label(colouring.colour(u, v)),
                    back.colour_label(back.colour(u, v))
                );
            }
        }
    }

    #[test]
    fn layer_probabilities_lie_on_the_simplex(
        sizes in prop::collection::vec(1usize..200, 1..8),
        epsilon in 0.05f64..0.5,
        p0 in 0.01f64..0.2,
    ) {
        let n = 10_000;
        if let Ok(probs) = layer_probabilities(&sizes, n, 1, epsilon, p0) {
            prop_assert!(probs.iter().all(|&p| p > 0.0));
            prop_assert!((p0 + probs.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOLERANCE);
        }
    }

    #[test]
    fn paired_colours_share_the_star_class(m in 10usize..60, seed in any::<u64>()) {
        let colouring = nd_colouring(m).unwrap();
        let probs = vec![0.1, 0.3, 0.6];
        let pairing: Vec<(usize, usize)> = (0..m.min(colouring.n())).map(|i| (i, i)).collect();
        let plan = sample_partitions(&colouring, &probs, &pairing, seed).unwrap();
        for &(x, c) in &pairing {
            prop_assert_eq!(plan.vertex_class[x] == STAR_CLASS, plan.colour_class[c] == STAR_CLASS);
        }
        prop_assert!(plan.vertex_class.iter().chain(&plan.colour_class).all(|&i| i < probs.len()));
    }
}
