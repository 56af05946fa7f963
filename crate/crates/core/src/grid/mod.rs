//! The rank-4 grid hypergraph on `[n]²` and its height-restricted variant.
//!
//! Edges of the restricted hypergraph with threshold `s*`:
//! - 2-sets on a line of height at most `s*`,
//! - collinear triples,
//! - trapezoids (4-sets with no collinear triple and a parallel matching) whose
//!   every parallel matching has height at least `s*`.
//!
//! `s* = 0` yields the plain hypergraph whose independent sets are exactly the
//! distinct-slope sets.

pub mod brute;
mod counts;
mod degree;
mod lp;
mod profile;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{canonical_slope, GridPoint, Slope};

pub use counts::{collinear_triples_by_lines, global_counts, global_counts_with, CountMethod, GlobalCounts};
pub use degree::GridHypergraph;
pub use lp::{check_lp_conditions, default_f, Condition, LpConditionReport};
pub use profile::{profile, profile_with, DegreeProfile, ProfileMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridHypergraphParams {
    pub n: i64,
    pub s_star: i64,
}

impl GridHypergraphParams {
    pub fn new(n: i64, s_star: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("grid side n = {n} must be at least 2")));
        }
        if !(0..=n).contains(&s_star) {
            return Err(Error::Domain(format!("s* = {s_star} must lie in 0..={n}")));
        }
        Ok(GridHypergraphParams { n, s_star })
    }

    /// The plain hypergraph (no 2-edges, unrestricted trapezoids).
    pub fn plain(n: i64) -> Result<Self> {
        Self::new(n, 0)
    }

    pub(crate) fn check_point(&self, p: GridPoint) -> Result<()> {
        if p.in_grid(self.n) {
            Ok(())
        } else {
            Err(Error::Domain(format!("point {p} outside [{}]²", self.n)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    Pair2,
    Collinear3,
    Trapezoid4,
}

/// An edge together with the slope classes that certify it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWitness {
    pub kind: EdgeKind,
    pub points: Vec<GridPoint>,
    pub slopes: Vec<Slope>,
}

fn require_distinct(points: &[GridPoint]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if points[i + 1..].contains(p) {
            return Err(Error::Degenerate(format!("repeated point {p}")));
        }
    }
    Ok(())
}

pub fn is_edge2(p: GridPoint, q: GridPoint, params: &GridHypergraphParams) -> Result<bool> {
    Ok(canonical_slope(p, q)?.height() <= params.s_star)
}

pub(crate) fn cross(p: GridPoint, q: GridPoint, r: GridPoint) -> i64 {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

pub fn is_collinear3(p: GridPoint, q: GridPoint, r: GridPoint) -> Result<bool> {
    require_distinct(&[p, q, r])?;
    Ok(cross(p, q, r) == 0)
}

const MATCHINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];

/// Slopes of the perfect matchings of `pts` whose two pairs are parallel.
/// Assumes the four points are distinct.
fn parallel_matchings(pts: &[GridPoint; 4]) -> Vec<Slope> {
    MATCHINGS
        .iter()
        .filter_map(|m| {
            let s1 = canonical_slope(pts[m[0]], pts[m[1]]).ok()?;
            let s2 = canonical_slope(pts[m[2]], pts[m[3]]).ok()?;
            (s1 == s2).then_some(s1)
        })
        .collect()
}

fn has_collinear_triple(pts: &[GridPoint; 4]) -> bool {
    (0..4).any(|skip| {
        let t: Vec<_> = (0..4).filter(|&i| i != skip).map(|i| pts[i]).collect();
        cross(t[0], t[1], t[2]) == 0
    })
}

pub fn is_trapezoid4(points: &[GridPoint; 4], params: &GridHypergraphParams) -> Result<bool> {
    require_distinct(points)?;
    if has_collinear_triple(points) {
        return Ok(false);
    }
    let matchings = parallel_matchings(points);
    Ok(!matchings.is_empty() && matchings.iter().all(|s| s.height() >= params.s_star))
}

/// Classifies `points` as an edge of the hypergraph, if it is one.
pub fn edge_witness(points: &[GridPoint], params: &GridHypergraphParams) -> Result<Option<EdgeWitness>> {
    require_distinct(points)?;
    let witness = match *points {
        [p, q] => {
            let s = canonical_slope(p, q)?;
            (s.height() <= params.s_star).then(|| (EdgeKind::Pair2, vec![s]))
        }
        [p, q, r] => is_collinear3(p, q, r)?.then(|| (EdgeKind::Collinear3, vec![canonical_slope(p, q).unwrap()])),
        [a, b, c, d] => {
            let pts = [a, b, c, d];
            is_trapezoid4(&pts, params)?.then(|| (EdgeKind::Trapezoid4, parallel_matchings(&pts)))
        }
        _ => return Err(Error::Domain(format!("edges have 2 to 4 points, got {}", points.len()))),
    };
    Ok(witness.map(|(kind, slopes)| EdgeWitness {
        kind,
        points: points.to_vec(),
        slopes,
    }))
}

/// One of the eight symmetries of the square `[n]²`, indexed by `k ∈ 0..8`.
pub fn dihedral(p: GridPoint, n: i64, k: u8) -> GridPoint {
    let (mut x, mut y) = (p.x, p.y);
    if k & 1 != 0 {
        std::mem::swap(&mut x, &mut y);
    }
    if k & 2 != 0 {
        x = n + 1 - x;
    }
    if k & 4 != 0 {
        y = n + 1 - y;
    }
    GridPoint::new(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn edge2_examples() {
        let p1 = GridHypergraphParams::new(4, 1).unwrap();
        let p2 = GridHypergraphParams::new(4, 2).unwrap();
        assert!(is_edge2(pt(1, 1), pt(2, 2), &p1).unwrap());
        assert!(!is_edge2(pt(1, 1), pt(2, 4), &p2).unwrap());
        let plain = GridHypergraphParams::plain(4).unwrap();
        assert!(!is_edge2(pt(1, 1), pt(1, 2), &plain).unwrap());
        assert!(is_edge2(pt(1, 1), pt(1, 1), &p1).is_err());
    }

    #[test]
    fn collinear_examples() {
        assert!(is_collinear3(pt(1, 1), pt(2, 2), pt(3, 3)).unwrap());
        assert!(!is_collinear3(pt(1, 1), pt(2, 2), pt(3, 4)).unwrap());
        assert!(is_collinear3(pt(1, 1), pt(1, 2), pt(1, 3)).unwrap());
        assert!(is_collinear3(pt(1, 1), pt(1, 2), pt(1, 1)).is_err());
    }

    #[test]
    fn trapezoid_examples() {
        let square = [pt(1, 1), pt(1, 2), pt(2, 1), pt(2, 2)];
        assert!(is_trapezoid4(&square, &GridHypergraphParams::new(2, 0).unwrap()).unwrap());
        assert!(!is_trapezoid4(&square, &GridHypergraphParams::new(2, 2).unwrap()).unwrap());
        let p = GridHypergraphParams::new(3, 0).unwrap();
        assert!(!is_trapezoid4(&[pt(1, 1), pt(2, 2), pt(3, 3), pt(2, 1)], &p).unwrap());
        // proper trapezoid: (1,1)-(3,1) parallel to (1,2)-(2,2)
        assert!(is_trapezoid4(&[pt(1, 1), pt(3, 1), pt(1, 2), pt(2, 2)], &p).unwrap());
        // no parallel pair at all
        assert!(!is_trapezoid4(&[pt(1, 1), pt(3, 1), pt(1, 2), pt(2, 3)], &p).unwrap());
        assert!(is_trapezoid4(&[pt(1, 1), pt(1, 1), pt(1, 2), pt(2, 2)], &p).is_err());
    }

    #[test]
    fn rhombus_needs_both_matchings_high() {
        // parallelogram with sides of direction (1,0) [height 1] and (1,2) [height 2]
        let para = [pt(1, 1), pt(2, 1), pt(2, 3), pt(3, 3)];
        assert!(is_trapezoid4(&para, &GridHypergraphParams::new(3, 1).unwrap()).unwrap());
        assert!(!is_trapezoid4(&para, &GridHypergraphParams::new(3, 2).unwrap()).unwrap());
        let w = edge_witness(&para, &GridHypergraphParams::new(3, 1).unwrap()).unwrap().unwrap();
        assert_eq!(w.kind, EdgeKind::Trapezoid4);
        assert_eq!(w.slopes.len(), 2);
    }

    #[test]
    fn params_validation() {
        assert!(GridHypergraphParams::new(1, 0).is_err());
        assert!(GridHypergraphParams::new(4, 5).is_err());
        assert!(GridHypergraphParams::new(4, -1).is_err());
        assert!(GridHypergraphParams::new(4, 4).is_ok());
    }

    #[test]
    fn dihedral_is_a_group_action_on_the_grid() {
        let n = 5;
        for k in 0..8 {
            let mut image: Vec<_> = crate::lattice::grid_points(n).map(|p| dihedral(p, n, k)).collect();
            image.sort();
            assert_eq!(image, crate::lattice::grid_points(n).collect::<Vec<_>>());
        }
    }
}
