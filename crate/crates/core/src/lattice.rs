//! Exact slope arithmetic and point/line incidence on the grid `[n]²`.
//!
//! Coordinates are 1-indexed throughout: a grid of side `n` holds the points
//! `(x, y)` with `1 ≤ x, y ≤ n`, and the origin is `(1, 1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const ORIGIN: GridPoint = GridPoint { x: 1, y: 1 };

    pub const fn new(x: i64, y: i64) -> Self {
        GridPoint { x, y }
    }

    pub fn in_grid(self, n: i64) -> bool {
        (1..=n).contains(&self.x) && (1..=n).contains(&self.y)
    }

    /// Row-major index into a `n × n` array.
    pub fn index(self, n: i64) -> usize {
        ((self.x - 1) * n + (self.y - 1)) as usize
    }

    pub fn from_index(idx: usize, n: i64) -> Self {
        let idx = idx as i64;
        GridPoint::new(idx / n + 1, idx % n + 1)
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Every point of `[n]²` in lexicographic order.
pub fn grid_points(n: i64) -> impl Iterator<Item = GridPoint> {
    (1..=n).flat_map(move |x| (1..=n).map(move |y| GridPoint::new(x, y)))
}

/// Canonical primitive direction of a lattice line.
///
/// `u` is the rise and `v` the run, reduced so that `gcd(|u|, |v|) = 1` and
/// `v > 0`. Vertical lines, which that normalization cannot express, are
/// stored as `(u, v) = (1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slope {
    pub u: i64,
    pub v: i64,
}

impl Slope {
    pub const HORIZONTAL: Slope = Slope { u: 0, v: 1 };
    pub const VERTICAL: Slope = Slope { u: 1, v: 0 };

    /// Canonical slope of the displacement `(dx, dy)`. Returns `None` for the zero vector.
    pub fn from_displacement(dx: i64, dy: i64) -> Option<Slope> {
        if dx == 0 && dy == 0 {
            return None;
        }
        let g = gcd(dx.unsigned_abs(), dy.unsigned_abs()) as i64;
        let (mut dx, mut dy) = (dx / g, dy / g);
        if dx < 0 || (dx == 0 && dy < 0) {
            dx = -dx;
            dy = -dy;
        }
        Some(Slope { u: dy, v: dx })
    }

    /// `H(ℓ) = max(|u|, |v|)`.
    pub fn height(self) -> i64 {
        self.u.abs().max(self.v.abs())
    }

    /// Step vector `(dx, dy)` along the line.
    pub fn step(self) -> (i64, i64) {
        (self.v, self.u)
    }

    pub fn is_canonical(self) -> bool {
        if self == Slope::VERTICAL {
            return true;
        }
        self.v > 0 && gcd(self.u.unsigned_abs(), self.v.unsigned_abs()) == 1
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.u, self.v)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn canonical_slope(p: GridPoint, q: GridPoint) -> Result<Slope> {
    Slope::from_displacement(q.x - p.x, q.y - p.y)
        .ok_or_else(|| Error::Degenerate(format!("slope of identical points {p}")))
}

pub fn height(s: Slope) -> i64 {
    s.height()
}

pub fn mutually_visible(p: GridPoint, q: GridPoint) -> Result<bool> {
    if p == q {
        return Err(Error::Degenerate(format!("visibility of {p} with itself")));
    }
    Ok(gcd((q.x - p.x).unsigned_abs(), (q.y - p.y).unsigned_abs()) == 1)
}

pub(crate) fn floor_div(a: i64, b: i64) -> i64 {
    let q = a / b;
    if a % b != 0 && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}

/// Integers `t` with `lo ≤ c + t·d ≤ hi`, as an inclusive range (possibly empty).
pub(crate) fn step_range(c: i64, d: i64, lo: i64, hi: i64) -> (i64, i64) {
    if d == 0 {
        if lo <= c && c <= hi {
            (i64::MIN / 4, i64::MAX / 4)
        } else {
            (1, 0)
        }
    } else if d > 0 {
        (ceil_div(lo - c, d), floor_div(hi - c, d))
    } else {
        (ceil_div(hi - c, d), floor_div(lo - c, d))
    }
}

/// Number of integers `t` with `t·(dx, dy)` inside the box `[xlo, xhi] × [ylo, yhi]`.
pub(crate) fn multiples_in_box(dx: i64, dy: i64, xlo: i64, xhi: i64, ylo: i64, yhi: i64) -> i64 {
    let (a0, a1) = step_range(0, dx, xlo, xhi);
    let (b0, b1) = step_range(0, dy, ylo, yhi);
    (a1.min(b1) - a0.max(b0) + 1).max(0)
}

/// Number of grid points of `[n]²` on the line through `p` with direction `s`.
pub fn line_len(p: GridPoint, s: Slope, n: i64) -> i64 {
    let (dx, dy) = s.step();
    let (a0, a1) = step_range(p.x, dx, 1, n);
    let (b0, b1) = step_range(p.y, dy, 1, n);
    (a1.min(b1) - a0.max(b0) + 1).max(0)
}

/// All grid points on the line through `p` with direction `s`, ordered along the step vector.
pub fn points_on_line(p: GridPoint, s: Slope, n: i64) -> Vec<GridPoint> {
    let (dx, dy) = s.step();
    let (a0, a1) = step_range(p.x, dx, 1, n);
    let (b0, b1) = step_range(p.y, dy, 1, n);
    let (lo, hi) = (a0.max(b0), a1.min(b1));
    (lo..=hi)
        .map(|t| GridPoint::new(p.x + t * dx, p.y + t * dy))
        .collect()
}

/// Smallest integer `s` with `s³ ≥ n`.
pub fn ceil_cbrt(n: u64) -> u64 {
    let mut s = (n as f64).cbrt().round() as u64;
    while s > 0 && (s - 1).pow(3) >= n {
        s -= 1;
    }
    while s.pow(3) < n {
        s += 1;
    }
    s
}

/// Every canonical slope realised by some pair of points in `[n]²`.
pub fn canonical_slopes(n: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    out.push(Slope::VERTICAL);
    for v in 1..n {
        for u in -(n - 1)..n {
            if gcd(u.unsigned_abs(), v as u64) == 1 {
                out.push(Slope { u, v });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnulusReport {
    pub i: u32,
    pub visible_count: u64,
    pub total_count: u64,
}

impl AnnulusReport {
    pub fn density(&self) -> f64 {
        self.visible_count as f64 / self.total_count as f64
    }

    /// `|V_i| ≥ ¼·2^{2i}`.
    pub fn observation_holds(&self) -> bool {
        self.visible_count >= 1u64 << (2 * self.i - 2)
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{}", self.i, self.visible_count, self.total_count)
    }
}

/// Möbius function on `1..=limit` by a linear sieve.
fn mobius_table(limit: usize) -> Vec<i8> {
    let mut mu = vec![1i8; limit + 1];
    let mut is_comp = vec![false; limit + 1];
    let mut primes = Vec::new();
    if limit >= 1 {
        mu[0] = 0;
    }
    for i in 2..=limit {
        if !is_comp[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > limit {
                break;
            }
            is_comp[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

/// Points of `[side]²` other than the origin that see the origin.
fn visible_in_square(side: u64, mu: &[i8]) -> u64 {
    if side < 2 {
        return 0;
    }
    let m = side - 1;
    let interior: i64 = (1..=m)
        .map(|d| mu[d as usize] as i64 * ((m / d) * (m / d)) as i64)
        .sum();
    // the two axis neighbours (1,2) and (2,1)
    interior as u64 + 2
}

/// Exact count of points in `[2^i]² ∖ [2^{i−1}]²` visible from the origin.
pub fn annulus_visible_count(i: u32) -> Result<AnnulusReport> {
    if i == 0 || i > 30 {
        return Err(Error::Domain(format!("annulus index i = {i} must lie in 1..=30")));
    }
    let outer = 1u64 << i;
    let inner = 1u64 << (i - 1);
    let mu = mobius_table(outer as usize);
    let visible_count = visible_in_square(outer, &mu) - visible_in_square(inner, &mu);
    Ok(AnnulusReport {
        i,
        visible_count,
        total_count: outer * outer - inner * inner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn slope_examples() {
        assert_eq!(canonical_slope(pt(1, 1), pt(3, 5)).unwrap(), Slope { u: 2, v: 1 });
        assert_eq!(canonical_slope(pt(1, 1), pt(1, 5)).unwrap(), Slope::VERTICAL);
        assert_eq!(canonical_slope(pt(2, 3), pt(4, 3)).unwrap(), Slope::HORIZONTAL);
        assert_eq!(canonical_slope(pt(3, 1), pt(1, 3)).unwrap(), Slope { u: -1, v: 1 });
        assert!(matches!(canonical_slope(pt(2, 2), pt(2, 2)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn height_examples() {
        assert_eq!(height(Slope { u: 2, v: 1 }), 2);
        assert_eq!(height(Slope::HORIZONTAL), 1);
        assert_eq!(height(Slope::VERTICAL), 1);
    }

    #[test]
    fn line_examples() {
        assert_eq!(
            points_on_line(pt(1, 1), Slope { u: 1, v: 1 }, 4),
            vec![pt(1, 1), pt(2, 2), pt(3, 3), pt(4, 4)]
        );
        assert_eq!(
            points_on_line(pt(1, 1), Slope::VERTICAL, 3),
            vec![pt(1, 1), pt(1, 2), pt(1, 3)]
        );
        assert_eq!(points_on_line(pt(2, 1), Slope { u: 3, v: 1 }, 4), vec![pt(2, 1), pt(3, 4)]);
        // starting mid-line still returns the whole line
        assert_eq!(points_on_line(pt(3, 3), Slope { u: 1, v: 1 }, 4).len(), 4);
    }

    #[test]
    fn line_matches_scan() {
        // brute-force scan of [4]² for direction (3,1)
        let n = 4;
        let s = Slope { u: 3, v: 1 };
        for p in grid_points(n) {
            let mut scanned: Vec<_> = grid_points(n)
                .filter(|&q| q == p || canonical_slope(p, q).unwrap() == s)
                .collect();
            scanned.sort();
            assert_eq!(points_on_line(p, s, n), scanned);
            assert_eq!(line_len(p, s, n), scanned.len() as i64);
        }
    }

    #[test]
    fn visibility_examples() {
        assert!(mutually_visible(pt(1, 1), pt(2, 3)).unwrap());
        assert!(!mutually_visible(pt(1, 1), pt(3, 3)).unwrap());
        assert!(mutually_visible(pt(1, 1), pt(1, 2)).unwrap());
        assert!(mutually_visible(pt(1, 1), pt(1, 1)).is_err());
    }

    fn annulus_by_gcd(i: u32) -> u64 {
        let outer = 1i64 << i;
        let inner = 1i64 << (i - 1);
        grid_points(outer)
            .filter(|p| p.x > inner || p.y > inner)
            .filter(|&p| mutually_visible(GridPoint::ORIGIN, p).unwrap())
            .count() as u64
    }

    #[test]
    fn annulus_matches_gcd_enumeration() {
        let first = annulus_visible_count(1).unwrap();
        assert_eq!(first.visible_count, 3);
        assert_eq!(first.total_count, 3);
        for i in 1..=9 {
            let rep = annulus_visible_count(i).unwrap();
            assert_eq!(rep.visible_count, annulus_by_gcd(i), "i = {i}");
            assert_eq!(rep.total_count, (1u64 << (2 * i)) - (1u64 << (2 * (i - 1))));
        }
        assert!(annulus_visible_count(0).is_err());
    }

    #[test]
    fn cbrt_is_exact() {
        assert_eq!(ceil_cbrt(1), 1);
        assert_eq!(ceil_cbrt(8), 2);
        assert_eq!(ceil_cbrt(9), 3);
        assert_eq!(ceil_cbrt(16), 3);
        assert_eq!(ceil_cbrt(32), 4);
        assert_eq!(ceil_cbrt(64), 4);
        assert_eq!(ceil_cbrt(65), 5);
    }

    #[test]
    fn slope_list_is_complete() {
        let n = 5;
        let mut seen = std::collections::BTreeSet::new();
        for p in grid_points(n) {
            for q in grid_points(n) {
                if p != q {
                    seen.insert(canonical_slope(p, q).unwrap());
                }
            }
        }
        let mut listed = canonical_slopes(n);
        listed.sort();
        assert_eq!(listed, seen.into_iter().collect::<Vec<_>>());
        assert!(listed.iter().all(|s| s.is_canonical()));
    }
}
