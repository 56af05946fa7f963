//! Enumeration oracles: every quantity here is obtained by testing each
//! candidate set against the edge predicates. Only for small grids.

use crate::error::{Error, Result};
use crate::lattice::{grid_points, GridPoint};

use super::counts::GlobalCounts;
use super::{
    edge_witness, is_collinear3, is_edge2, is_trapezoid4, parallel_matchings, DegreeProfile,
    GridHypergraphParams, ProfileMode,
};

/// Calls `f` on every `k`-subset of `items` (as index-ordered slices).
fn for_each_subset<T: Copy>(items: &[T], k: usize, f: &mut impl FnMut(&[T])) {
    fn rec<T: Copy>(items: &[T], k: usize, start: usize, buf: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - buf.len() {
                break;
            }
            buf.push(items[i]);
            rec(items, k, i + 1, buf, f);
            buf.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f);
}

/// Number of `ell`-edges containing all of `set`, by enumeration of completions.
pub fn codegree(set: &[GridPoint], ell: u8, params: &GridHypergraphParams) -> Result<u64> {
    let ell = ell as usize;
    if !(2..=4).contains(&ell) || set.is_empty() || set.len() >= ell {
        return Err(Error::Domain(format!("codegree of a {}-set in {ell}-edges", set.len())));
    }
    for &p in set {
        params.check_point(p)?;
    }
    let rest: Vec<_> = grid_points(params.n).filter(|p| !set.contains(p)).collect();
    let mut count = 0u64;
    let mut err = None;
    for_each_subset(&rest, ell - set.len(), &mut |extra| {
        let mut all = set.to_vec();
        all.extend_from_slice(extra);
        match edge_witness(&all, params) {
            Ok(Some(_)) => count += 1,
            Ok(None) => {}
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(count),
    }
}

pub fn degree(p: GridPoint, ell: u8, params: &GridHypergraphParams) -> Result<u64> {
    codegree(&[p], ell, params)
}

/// Triangles of the 2-edge graph through `p`.
pub fn triangles_at(p: GridPoint, params: &GridHypergraphParams) -> u64 {
    let rest: Vec<_> = grid_points(params.n).filter(|&q| q != p).collect();
    let mut count = 0;
    for_each_subset(&rest, 2, &mut |qr| {
        let (q, r) = (qr[0], qr[1]);
        if is_edge2(p, q, params).unwrap() && is_edge2(p, r, params).unwrap() && is_edge2(q, r, params).unwrap() {
            count += 1;
        }
    });
    count
}

/// Exact degree profile by full enumeration of candidate edges.
pub fn profile(params: &GridHypergraphParams) -> DegreeProfile {
    let pts: Vec<_> = grid_points(params.n).collect();
    let mut prof = DegreeProfile::empty(params, &ProfileMode::Exact);
    for &p in &pts {
        prof.delta_2 = prof.delta_2.max(degree(p, 2, params).unwrap());
        prof.delta_3 = prof.delta_3.max(degree(p, 3, params).unwrap());
        prof.delta_4 = prof.delta_4.max(degree(p, 4, params).unwrap());
        prof.delta_k3 = prof.delta_k3.max(triangles_at(p, params));
    }
    for_each_subset(&pts, 2, &mut |s| {
        prof.delta_23 = prof.delta_23.max(codegree(s, 3, params).unwrap());
        prof.delta_24 = prof.delta_24.max(codegree(s, 4, params).unwrap());
    });
    for_each_subset(&pts, 3, &mut |s| {
        prof.delta_34 = prof.delta_34.max(codegree(s, 4, params).unwrap());
    });
    prof
}

/// Global counts by scanning every triple and every quadruple of `[n]²`.
pub fn global_counts(n: i64) -> GlobalCounts {
    let pts: Vec<_> = grid_points(n).collect();
    let plain = GridHypergraphParams { n, s_star: 0 };
    let mut triples = 0u128;
    for_each_subset(&pts, 3, &mut |t| {
        if is_collinear3(t[0], t[1], t[2]).unwrap() {
            triples += 1;
        }
    });
    let (mut traps, mut matchings, mut paras) = (0u128, 0u128, 0u128);
    for_each_subset(&pts, 4, &mut |q| {
        let quad = [q[0], q[1], q[2], q[3]];
        if is_trapezoid4(&quad, &plain).unwrap() {
            let k = parallel_matchings(&quad).len() as u128;
            traps += 1;
            matchings += k;
            if k == 2 {
                paras += 1;
            }
        }
    });
    GlobalCounts {
        n,
        collinear_triples: triples,
        trapezoids: traps,
        parallel_matchings: matchings,
        parallelograms: paras,
    }
}
