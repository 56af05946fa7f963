use hypergrid::grid::GridHypergraphParams;
use hypergrid::lattice::GridPoint;
use hypergrid::search::{
    brute_g, distinct_by_configurations, distinct_by_slope_multiset, exact_g, greedy_insert,
    permutation_greedy_independent, zhang_deletion, DeletionParams, InsertOrder, SlopeSet,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn characterizations_agree_on_random_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cells: Vec<GridPoint> = (1..=8).flat_map(|x| (1..=8).map(move |y| GridPoint::new(x, y))).collect();
    let mut distinct = 0;
    for _ in 0..1000 {
        let k = rng.gen_range(0..=10);
        let pts: Vec<GridPoint> = cells.choose_multiple(&mut rng, k).cloned().collect();
        let a = distinct_by_slope_multiset(&pts);
        assert_eq!(a, distinct_by_configurations(&pts), "{pts:?}");
        distinct += a as usize;
    }
    assert!(distinct > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subsets_of_distinct_sets_stay_distinct(seed in 0u64..1000, drop in 0usize..8) {
        let r = greedy_insert(16, InsertOrder::Random(seed)).unwrap();
        let mut pts = r.set.points.clone();
        pts.remove(drop % pts.len());
        prop_assert!(distinct_by_slope_multiset(&pts));
        prop_assert!(SlopeSet::new(16, pts).unwrap().verified);
    }

    #[test]
    fn deletion_is_deterministic(seed in 0u64..1000, n in 8i64..40) {
        let params = DeletionParams::from_c(n, 2.0, seed).unwrap();
        let a = zhang_deletion(&params).unwrap();
        let b = zhang_deletion(&params).unwrap();
        prop_assert_eq!(a.set.points, b.set.points);
        prop_assert_eq!(a.stats, b.stats);
    }

    #[test]
    fn deletion_accounting(seed in 0u64..1000, n in 8i64..48, c in 0.5f64..8.0) {
        let r = zhang_deletion(&DeletionParams::from_c(n, c, seed).unwrap()).unwrap();
        let sampled = r.stats["sampled"];
        let bad = r.stats["deleted_triples"] + r.stats["deleted_trapezoids"];
        prop_assert_eq!(r.size as u64, sampled - r.stats["deleted_points"]);
        prop_assert!(r.stats["deleted_points"] <= bad);
        prop_assert!(r.size as u64 + bad >= sampled);
    }

    #[test]
    fn greedy_is_deterministic_and_maximal(seed in 0u64..1000) {
        let a = greedy_insert(10, InsertOrder::Random(seed)).unwrap();
        let b = greedy_insert(10, InsertOrder::Random(seed)).unwrap();
        prop_assert_eq!(&a.set.points, &b.set.points);
        for x in 1..=10 {
            for y in 1..=10 {
                let p = GridPoint::new(x, y);
                if a.set.points.contains(&p) {
                    continue;
                }
                let mut more = a.set.points.clone();
                more.push(p);
                prop_assert!(!distinct_by_slope_multiset(&more), "{p:?} could be added");
            }
        }
    }

    #[test]
    fn permutation_greedy_outputs_verify(seed in 0u64..1000, n in 2i64..=12) {
        let s = (n as f64).cbrt().ceil() as i64;
        let r = permutation_greedy_independent(&GridHypergraphParams::new(n, s).unwrap(), seed).unwrap();
        prop_assert!(r.set.verified);
        prop_assert!(r.size <= 2 * n as usize);
    }
}

#[test]
fn exact_values_are_monotone_and_frozen() {
    let g: Vec<usize> = (1..=5).map(|n| exact_g(n).unwrap()).collect();
    assert_eq!(g, [1, 3, 4, 5, 6]);
    assert!(g.windows(2).all(|w| w[0] <= w[1]));
    for n in 1..=4 {
        assert_eq!(brute_g(n).unwrap(), g[n as usize - 1], "n = {n}");
    }
}

#[test]
fn diagonal_sweep_is_reproducible() {
    let a = greedy_insert(24, InsertOrder::DiagonalSweep).unwrap();
    let b = greedy_insert(24, InsertOrder::DiagonalSweep).unwrap();
    assert_eq!(a.set.points, b.set.points);
    assert!(a.set.verified);
}
