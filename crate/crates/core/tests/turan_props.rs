use hypergrid::turan::{
    all_rsets, aux_degree_formula, aux_profile_bruteforce, aux_profile_triple_scan, blow_up, build_free_graph,
    contains_h3r, density_check, has_complete_shadow, is_h3r_copy, FreeStrategy, RSet, UniformRGraph,
};
use proptest::prelude::*;

fn free_graph() -> impl Strategy<Value = UniformRGraph> {
    (2u32..=3, 0u64..500, any::<bool>()).prop_map(|(r, seed, greedy)| {
        let m = if r == 2 { 5 } else { 7 };
        let s = if greedy {
            FreeStrategy::PermutationGreedy { seed }
        } else {
            FreeStrategy::Deletion { p: 0.5, seed }
        };
        build_free_graph(r, m, s).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn blow_ups_stay_free_with_expected_size(g in free_graph(), t in 1u32..=3) {
        let b = blow_up(&g, t).unwrap();
        prop_assert_eq!(b.m, g.m * t);
        prop_assert_eq!(b.edge_count(), g.edge_count() * (t as usize).pow(g.r));
        prop_assert!(!contains_h3r(&b));
    }

    #[test]
    fn free_graphs_are_free(g in free_graph()) {
        prop_assert!(!contains_h3r(&g));
        prop_assert!(g.edges.iter().all(|e| e.len() == g.r && e.max_element() <= g.m));
    }

    #[test]
    fn rset_roundtrip(mut xs in prop::collection::btree_set(1u32..=512, 1..12)) {
        let members: Vec<u32> = std::mem::take(&mut xs).into_iter().collect();
        let s = RSet::new(&members).unwrap();
        prop_assert_eq!(s.members(), members.clone());
        prop_assert_eq!(s.len() as usize, members.len());
        prop_assert_eq!(s.max_element(), *members.last().unwrap());
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<RSet>(&json).unwrap(), s);
    }
}

#[test]
fn h3r_copies_by_definition() {
    // three r-sets forming H³ʳ span exactly r + 1 vertices
    for r in 2..=4 {
        let m = r + 2;
        let sets = all_rsets(m, r);
        for (i, &a) in sets.iter().enumerate() {
            for (j, &b) in sets.iter().enumerate().skip(i + 1) {
                for &c in &sets[j + 1..] {
                    let span = a.union(b).union(c).len();
                    assert_eq!(is_h3r_copy(a, b, c).unwrap(), span == r + 1, "{a} {b} {c}");
                }
            }
        }
    }
}

#[test]
fn degree_formula_matches_triple_scan() {
    for (r, m) in [(2, 5), (2, 9), (3, 6), (4, 7)] {
        let p = aux_profile_triple_scan(r, m).unwrap();
        assert_eq!(p.delta, aux_degree_formula(r, m), "(r, m) = ({r}, {m})");
        assert_eq!(p, aux_profile_bruteforce(r, m).unwrap());
    }
    assert_eq!(aux_degree_formula(3, 9), 18);
}

#[test]
fn density_check_on_complete_shadow_graphs() {
    let g = build_free_graph(3, 9, FreeStrategy::PermutationGreedy { seed: 3 }).unwrap();
    for t in 1..=3 {
        let d = density_check(&g, t).unwrap();
        assert!(d.holds, "t = {t}: {} vs {}", d.lhs, d.rhs);
    }
    let star = UniformRGraph::new(3, 2, [RSet::new(&[1, 2]).unwrap(), RSet::new(&[1, 3]).unwrap()]).unwrap();
    assert!(!has_complete_shadow(&star));
    assert!(!has_complete_shadow(&blow_up(&star, 2).unwrap()));
}
