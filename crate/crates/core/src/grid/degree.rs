//! Slope-class degree and codegree counting.
//!
//! Nothing here enumerates 3- or 4-edges. Points are grouped by the canonical
//! slope of the line joining them to a fixed point, and each class is counted
//! in closed form. The number of pairs spanning slope `s` anywhere in the grid
//! (`P_s`) is tabulated once per instance.
//!
//! For 4-edges through a fixed point or pair we count (4-set, parallel matching)
//! incidences with a high-enough slope and subtract one per parallelogram that
//! has at least one such matching. A non-degenerate 4-set has at most two
//! parallel matchings, and it has two exactly when it is a parallelogram, so
//! this leaves each admissible 4-set counted once.

use crate::error::{Error, Result};
use crate::lattice::{line_len, multiples_in_box, GridPoint, Slope};

use super::counts::pair_count;
use super::{cross, GridHypergraphParams};

fn choose2(k: i64) -> u64 {
    if k < 2 {
        0
    } else {
        (k * (k - 1) / 2) as u64
    }
}

/// Precomputed slope tables for one `(n, s*)` instance.
#[derive(Debug, Clone)]
pub struct GridHypergraph {
    params: GridHypergraphParams,
    slopes: Vec<Slope>,
    /// `P_s` indexed by dense slope index.
    pairs: Vec<u64>,
    /// Dense slope index of every displacement in `(-(n-1)..n)²`.
    disp_slope: Vec<u32>,
    disp_height: Vec<u32>,
    low_slopes: Vec<Slope>,
}

impl GridHypergraph {
    pub fn new(params: GridHypergraphParams) -> Self {
        let n = params.n;
        let slopes = crate::lattice::canonical_slopes(n);
        let width = (2 * n - 1) as usize;
        let mut pairs = vec![0u64; n as usize * width];
        for &s in &slopes {
            pairs[Self::dense_of(n, s)] = pair_count(n, s) as u64;
        }
        let mut disp_slope = vec![u32::MAX; width * width];
        let mut disp_height = vec![0u32; width * width];
        for dx in -(n - 1)..n {
            for dy in -(n - 1)..n {
                if let Some(s) = Slope::from_displacement(dx, dy) {
                    let i = ((dx + n - 1) as usize) * width + (dy + n - 1) as usize;
                    disp_slope[i] = Self::dense_of(n, s) as u32;
                    disp_height[i] = s.height() as u32;
                }
            }
        }
        let low_slopes = slopes
            .iter()
            .copied()
            .filter(|s| s.height() < params.s_star)
            .collect();
        GridHypergraph {
            params,
            slopes,
            pairs,
            disp_slope,
            disp_height,
            low_slopes,
        }
    }

    pub fn params(&self) -> &GridHypergraphParams {
        &self.params
    }

    pub fn n(&self) -> i64 {
        self.params.n
    }

    fn dense_of(n: i64, s: Slope) -> usize {
        (s.v * (2 * n - 1) + (s.u + n - 1)) as usize
    }

    fn slope_of_dense(&self, idx: u32) -> Slope {
        let w = 2 * self.n() - 1;
        let idx = idx as i64;
        Slope {
            u: idx % w - (self.n() - 1),
            v: idx / w,
        }
    }

    #[inline]
    fn disp(&self, dx: i64, dy: i64) -> (u32, i64) {
        let n = self.n();
        let i = ((dx + n - 1) * (2 * n - 1) + (dy + n - 1)) as usize;
        (self.disp_slope[i], self.disp_height[i] as i64)
    }

    /// Canonical slope and height of the line through two distinct points.
    #[inline]
    fn slope_between(&self, p: GridPoint, q: GridPoint) -> (Slope, i64) {
        let (idx, h) = self.disp(q.x - p.x, q.y - p.y);
        (self.slope_of_dense(idx), h)
    }

    /// Number of pairs of grid points spanning a line of slope `s`.
    pub fn pairs_with_slope(&self, s: Slope) -> u64 {
        self.pairs[Self::dense_of(self.n(), s)]
    }

    fn check(&self, pts: &[GridPoint]) -> Result<()> {
        for (i, &p) in pts.iter().enumerate() {
            self.params.check_point(p)?;
            if pts[i + 1..].contains(&p) {
                return Err(Error::Degenerate(format!("repeated point {p}")));
            }
        }
        Ok(())
    }

    /// Number of `ell`-edges containing `p`.
    pub fn degree(&self, p: GridPoint, ell: u8) -> Result<u64> {
        self.check(&[p])?;
        match ell {
            2 => Ok(self.degree2_unchecked(p)),
            3 => Ok(self.degree3_unchecked(p)),
            4 => Ok(self.degree4_unchecked(p)),
            _ => Err(Error::Domain(format!("edge size {ell} not in 2..=4"))),
        }
    }

    pub(crate) fn degree2_unchecked(&self, p: GridPoint) -> u64 {
        let (n, s_star) = (self.n(), self.params.s_star);
        self.slopes
            .iter()
            .filter(|s| s.height() <= s_star)
            .map(|&s| (line_len(p, s, n) - 1) as u64)
            .sum()
    }

    pub(crate) fn degree3_unchecked(&self, p: GridPoint) -> u64 {
        let n = self.n();
        self.slopes.iter().map(|&s| choose2(line_len(p, s, n) - 1)).sum()
    }

    pub(crate) fn degree4_unchecked(&self, p: GridPoint) -> u64 {
        let (n, s_star) = (self.n(), self.params.s_star);
        let matchings: u64 = self
            .slopes
            .iter()
            .filter(|s| s.height() >= s_star)
            .map(|&s| {
                let k = line_len(p, s, n);
                (k - 1) as u64 * (self.pairs_with_slope(s) - choose2(k))
            })
            .sum();
        matchings - self.parallelograms_at(p)
    }

    /// Parallelograms with a vertex at `p` and at least one parallel matching of height ≥ s*.
    ///
    /// Such a parallelogram is `p, p+u, p+w, p+u+w` for non-parallel `u, w`, and is
    /// seen twice as an ordered pair `(u, w)`. For a fixed `u` the admissible `w`
    /// fill a box, so all pairs are counted per `u` in O(1); pairs where both
    /// directions are low are subtracted slope by slope.
    fn parallelograms_at(&self, p: GridPoint) -> u64 {
        let (n, s_star) = (self.n(), self.params.s_star);
        let mut all: i64 = 0;
        let mut low_low: i64 = 0;
        for ux in (1 - p.x)..=(n - p.x) {
            for uy in (1 - p.y)..=(n - p.y) {
                if ux == 0 && uy == 0 {
                    continue;
                }
                let xlo = (1 - p.x).max(1 - p.x - ux);
                let xhi = (n - p.x).min(n - p.x - ux);
                let ylo = (1 - p.y).max(1 - p.y - uy);
                let yhi = (n - p.y).min(n - p.y - uy);
                let size = (xhi - xlo + 1) * (yhi - ylo + 1);
                let (idx, h) = self.disp(ux, uy);
                let s = self.slope_of_dense(idx);
                let (sx, sy) = s.step();
                all += size - multiples_in_box(sx, sy, xlo, xhi, ylo, yhi);
                if h < s_star {
                    for d in self.low_slopes.iter().filter(|&&d| d != s) {
                        let (dx, dy) = d.step();
                        low_low += multiples_in_box(dx, dy, xlo, xhi, ylo, yhi) - 1;
                    }
                }
            }
        }
        let twice = all - low_low;
        debug_assert!(twice >= 0 && twice % 2 == 0);
        (twice / 2) as u64
    }

    /// Number of `ell`-edges containing every point of `set`.
    pub fn codegree(&self, set: &[GridPoint], ell: u8) -> Result<u64> {
        self.check(set)?;
        match (set.len(), ell) {
            (1, _) => self.degree(set[0], ell),
            (2, 3) => Ok(self.codegree23(set[0], set[1])),
            (2, 4) => Ok(self.codegree24(set[0], set[1])),
            (3, 4) => Ok(self.codegree34(set[0], set[1], set[2])),
            (k, l) => Err(Error::Domain(format!("codegree of a {k}-set in {l}-edges"))),
        }
    }

    fn codegree23(&self, a: GridPoint, b: GridPoint) -> u64 {
        let (s, _) = self.slope_between(a, b);
        (line_len(a, s, self.n()) - 2) as u64
    }

    fn codegree24(&self, a: GridPoint, b: GridPoint) -> u64 {
        let (n, s_star) = (self.n(), self.params.s_star);
        let (s_ab, h_ab) = self.slope_between(a, b);
        let k_ab = line_len(a, s_ab, n);

        // matching {ab | cd}
        let mut matchings: u64 = if h_ab >= s_star {
            self.pairs_with_slope(s_ab) - choose2(k_ab)
        } else {
            0
        };
        // matchings pairing a with c and b with d
        let mut diagonal: u64 = 0;
        for c in crate::lattice::grid_points(n) {
            if cross(a, b, c) == 0 {
                continue;
            }
            let (s_ac, h_ac) = self.slope_between(a, c);
            if h_ac >= s_star {
                matchings += (line_len(b, s_ac, n) - 1) as u64;
            }
            // ab as a diagonal: c and a+b-c
            let d = GridPoint::new(a.x + b.x - c.x, a.y + b.y - c.y);
            if d.in_grid(n) && (h_ac >= s_star || self.slope_between(b, c).1 >= s_star) {
                diagonal += 1;
            }
        }
        debug_assert!(diagonal % 2 == 0);

        // ab as a side: a, b, a+w, b+w
        let xlo = (1 - a.x).max(1 - b.x);
        let xhi = (n - a.x).min(n - b.x);
        let ylo = (1 - a.y).max(1 - b.y);
        let yhi = (n - a.y).min(n - b.y);
        let side: u64 = if h_ab >= s_star {
            let (sx, sy) = s_ab.step();
            ((xhi - xlo + 1) * (yhi - ylo + 1) - multiples_in_box(sx, sy, xlo, xhi, ylo, yhi)) as u64
        } else {
            let mut count = 0u64;
            for wx in xlo..=xhi {
                for wy in ylo..=yhi {
                    if (wx != 0 || wy != 0) && self.disp(wx, wy).1 >= s_star {
                        count += 1;
                    }
                }
            }
            count
        };
        matchings - side - diagonal / 2
    }

    fn codegree34(&self, a: GridPoint, b: GridPoint, c: GridPoint) -> u64 {
        if cross(a, b, c) == 0 {
            return 0;
        }
        let (n, s_star) = (self.n(), self.params.s_star);
        let mut twice = 0u64;
        for (i, j, m) in [(a, b, c), (a, c, b), (b, c, a)] {
            let (s, h) = self.slope_between(i, j);
            if h < s_star {
                continue;
            }
            for d in crate::lattice::points_on_line(m, s, n) {
                if d == m || cross(i, m, d) == 0 || cross(j, m, d) == 0 {
                    continue;
                }
                // a second parallel matching makes {i, j, m, d} a parallelogram
                let other = if cross(i, d, GridPoint::new(i.x + m.x - j.x, i.y + m.y - j.y)) == 0 {
                    Some(self.slope_between(j, m).1)
                } else if cross(j, d, GridPoint::new(j.x + m.x - i.x, j.y + m.y - i.y)) == 0 {
                    Some(self.slope_between(i, m).1)
                } else {
                    None
                };
                match other {
                    None => twice += 2,
                    Some(h2) if h2 >= s_star => twice += 1,
                    Some(_) => {}
                }
            }
        }
        debug_assert!(twice % 2 == 0);
        twice / 2
    }

    /// Points joined to `p` by a 2-edge.
    pub fn neighbors2(&self, p: GridPoint) -> Vec<GridPoint> {
        let s_star = self.params.s_star;
        crate::lattice::grid_points(self.n())
            .filter(|&q| q != p && self.slope_between(p, q).1 <= s_star)
            .collect()
    }

    /// Triangles of the 2-edge graph containing `p`.
    pub fn triangles_at(&self, p: GridPoint) -> u64 {
        let s_star = self.params.s_star;
        let nb = self.neighbors2(p);
        let mut count = 0;
        for (i, &q) in nb.iter().enumerate() {
            for &r in &nb[i + 1..] {
                if self.slope_between(q, r).1 <= s_star {
                    count += 1;
                }
            }
        }
        count
    }

    #[inline]
    pub(crate) fn is_low_pair(&self, p: GridPoint, q: GridPoint) -> bool {
        self.slope_between(p, q).1 <= self.params.s_star
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::brute;

    fn pt(x: i64, y: i64) -> GridPoint {
        GridPoint::new(x, y)
    }

    fn hg(n: i64, s: i64) -> GridHypergraph {
        GridHypergraph::new(GridHypergraphParams::new(n, s).unwrap())
    }

    #[test]
    fn degree_examples_match_oracle() {
        let g = hg(4, 1);
        let oracle = brute::degree(pt(1, 1), 2, g.params()).unwrap();
        assert_eq!(oracle, 9);
        assert_eq!(g.degree(pt(1, 1), 2).unwrap(), oracle);

        let g = hg(3, 0);
        let oracle = brute::degree(pt(1, 1), 3, g.params()).unwrap();
        // row, column and diagonal through the corner, one triple each
        assert_eq!(oracle, 3);
        assert_eq!(g.degree(pt(1, 1), 3).unwrap(), oracle);

        let g = hg(3, 3);
        for p in crate::lattice::grid_points(3) {
            assert_eq!(g.degree(p, 4).unwrap(), 0);
        }
    }

    #[test]
    fn unit_square_degree() {
        let g = hg(2, 0);
        for p in crate::lattice::grid_points(2) {
            assert_eq!(g.degree(p, 4).unwrap(), 1);
            assert_eq!(g.degree(p, 3).unwrap(), 0);
        }
    }

    #[test]
    fn codegree_examples() {
        let g = hg(8, 0);
        let s = [pt(1, 1), pt(2, 2)];
        let oracle = brute::codegree(&s, 3, g.params()).unwrap();
        assert_eq!(oracle, 6);
        assert_eq!(g.codegree(&s, 3).unwrap(), oracle);

        let collinear = [pt(1, 1), pt(2, 2), pt(4, 4)];
        assert_eq!(g.codegree(&collinear, 4).unwrap(), 0);

        let n = 8;
        let g = hg(n, n);
        let tri = [pt(1, 1), pt(5, 2), pt(3, 7)];
        let v = g.codegree(&tri, 4).unwrap();
        assert!(v <= (3 * (1 + (n - 1) / n)) as u64);
    }

    #[test]
    fn bad_arguments() {
        let g = hg(4, 1);
        assert!(g.degree(pt(5, 1), 2).is_err());
        assert!(g.degree(pt(1, 1), 5).is_err());
        assert!(matches!(g.codegree(&[pt(1, 1), pt(1, 1)], 3), Err(Error::Degenerate(_))));
        assert!(g.codegree(&[pt(1, 1), pt(1, 2), pt(1, 3)], 3).is_err());
    }

    #[test]
    fn small_instances_agree_with_enumeration() {
        for n in 2..=5 {
            for s_star in [0, 1, 2, n] {
                let g = hg(n, s_star);
                let pts: Vec<_> = crate::lattice::grid_points(n).collect();
                for &p in &pts {
                    for ell in 2..=4 {
                        assert_eq!(
                            g.degree(p, ell).unwrap(),
                            brute::degree(p, ell, g.params()).unwrap(),
                            "n={n} s*={s_star} p={p} ell={ell}"
                        );
                    }
                    assert_eq!(g.triangles_at(p), brute::triangles_at(p, g.params()));
                }
                for (i, &a) in pts.iter().enumerate() {
                    for &b in &pts[i + 1..] {
                        for ell in 3..=4 {
                            assert_eq!(
                                g.codegree(&[a, b], ell).unwrap(),
                                brute::codegree(&[a, b], ell, g.params()).unwrap(),
                                "n={n} s*={s_star} {a} {b} ell={ell}"
                            );
                        }
                    }
                }
            }
        }
    }
}
