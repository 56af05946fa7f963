use hypergrid::grid::{
    brute, dihedral, global_counts, is_trapezoid4, profile, CountMethod, GridHypergraph, GridHypergraphParams,
    ProfileMode,
};
use hypergrid::lattice::{canonical_slope, grid_points, GridPoint};
use proptest::prelude::*;

fn params(n: i64, s: i64) -> GridHypergraphParams {
    GridHypergraphParams::new(n, s).unwrap()
}

fn instance() -> impl Strategy<Value = (i64, i64)> {
    (2i64..=12).prop_flat_map(|n| (Just(n), 0..=n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degrees_invariant_under_square_symmetries((n, s) in instance(), x in 1i64..=12, y in 1i64..=12, k in 0u8..8) {
        prop_assume!(x <= n && y <= n);
        let g = GridHypergraph::new(params(n, s));
        let p = GridPoint::new(x, y);
        let q = dihedral(p, n, k);
        for ell in 2..=4 {
            prop_assert_eq!(g.degree(p, ell).unwrap(), g.degree(q, ell).unwrap());
        }
        prop_assert_eq!(g.triangles_at(p), g.triangles_at(q));
    }

    #[test]
    fn symmetries_preserve_slope_height((n, _s) in instance(), a in (1i64..=12, 1i64..=12), b in (1i64..=12, 1i64..=12), k in 0u8..8) {
        let (p, q) = (GridPoint::new(a.0, a.1), GridPoint::new(b.0, b.1));
        prop_assume!(p != q && p.in_grid(n) && q.in_grid(n));
        let before = canonical_slope(p, q).unwrap().height();
        let after = canonical_slope(dihedral(p, n, k), dihedral(q, n, k)).unwrap().height();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn trapezoids_invariant_under_symmetries(pts in prop::array::uniform4((1i64..=7, 1i64..=7)), s in 0i64..=7, k in 0u8..8) {
        let quad = pts.map(|(x, y)| GridPoint::new(x, y));
        let mut sorted = quad.to_vec();
        sorted.sort();
        sorted.dedup();
        prop_assume!(sorted.len() == 4);
        let pr = params(7, s);
        let image = quad.map(|p| dihedral(p, 7, k));
        prop_assert_eq!(is_trapezoid4(&quad, &pr).unwrap(), is_trapezoid4(&image, &pr).unwrap());
    }

    #[test]
    fn pair_codegrees_match_enumeration((n, s) in (2i64..=7).prop_flat_map(|n| (Just(n), 0..=n)), a in 0usize..49, b in 0usize..49) {
        let cells = (n * n) as usize;
        prop_assume!(a < cells && b < cells && a != b);
        let pr = params(n, s);
        let g = GridHypergraph::new(pr);
        let pair = [GridPoint::from_index(a, n), GridPoint::from_index(b, n)];
        for ell in 3..=4 {
            prop_assert_eq!(g.codegree(&pair, ell).unwrap(), brute::codegree(&pair, ell, &pr).unwrap());
        }
    }
}

#[test]
fn two_by_two_has_no_collinear_triples() {
    let c = global_counts(2, CountMethod::SlopeClass).unwrap();
    assert_eq!(c.collinear_triples, 0);
    let g = GridHypergraph::new(params(2, 0));
    for p in grid_points(2) {
        assert_eq!(g.degree(p, 3).unwrap(), 0);
    }
}

#[test]
fn count_methods_agree() {
    for n in 2..=7 {
        let a = global_counts(n, CountMethod::SlopeClass).unwrap();
        let b = global_counts(n, CountMethod::Brute).unwrap();
        assert_eq!(a, b, "n = {n}");
        assert_eq!(a, brute::global_counts(n), "n = {n}");
    }
}

#[test]
fn frozen_global_counts() {
    let expect = [(2, 0, 1), (3, 8, 50), (4, 44, 490)];
    for (n, c, t) in expect {
        let g = global_counts(n, CountMethod::SlopeClass).unwrap();
        assert_eq!((g.collinear_triples, g.trapezoids), (c, t), "n = {n}");
    }
}

#[test]
fn profile_monotone_in_threshold() {
    for n in 2..=8 {
        let profiles: Vec<_> = (0..=n)
            .map(|s| profile(&params(n, s), &ProfileMode::Exact).unwrap())
            .collect();
        for w in profiles.windows(2) {
            assert!(w[0].delta_2 <= w[1].delta_2, "n = {n}: delta_2 not monotone");
            assert!(w[0].delta_4 >= w[1].delta_4, "n = {n}: delta_4 not antitone");
            assert_eq!(w[0].delta_3, w[1].delta_3, "n = {n}: delta_3 depends on s*");
        }
    }
}

#[test]
fn codegree_inequality_on_exact_profiles() {
    for n in 2..=10 {
        for s in 0..=n {
            let p = profile(&params(n, s), &ProfileMode::Exact).unwrap();
            assert!(p.delta_24 <= (n * n) as u64 * p.delta_34, "n = {n}, s* = {s}");
            assert!(p.delta_23 <= (n - 2) as u64, "n = {n}: delta_23 exceeds a full line");
        }
    }
}

#[test]
fn exact_profile_matches_brute_profile() {
    for n in 2..=5 {
        for s in [0, 1, n] {
            let pr = params(n, s);
            let mut a = profile(&pr, &ProfileMode::Exact).unwrap();
            let mut b = brute::profile(&pr);
            a.mode.clear();
            b.mode.clear();
            assert_eq!(a, b, "n = {n}, s* = {s}");
        }
    }
}
