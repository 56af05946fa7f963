//! Global counts of collinear triples and trapezoids in `[n]²`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::budget::{binomial, Budget};
use crate::error::{Error, Result};
use crate::lattice::{canonical_slopes, gcd, Slope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountMethod {
    Brute,
    SlopeClass,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::Brute => "brute",
            CountMethod::SlopeClass => "slope_class",
        })
    }
}

impl FromStr for CountMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(CountMethod::Brute),
            "slope_class" | "slope-class" => Ok(CountMethod::SlopeClass),
            other => Err(Error::Domain(format!("unknown count method {other:?}"))),
        }
    }
}

/// `trapezoids` counts 4-sets once; a parallelogram contributes two
/// `parallel_matchings` but one trapezoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalCounts {
    pub n: i64,
    pub collinear_triples: u128,
    pub trapezoids: u128,
    pub parallel_matchings: u128,
    pub parallelograms: u128,
}

impl GlobalCounts {
    fn zero(n: i64) -> Self {
        GlobalCounts {
            n,
            collinear_triples: 0,
            trapezoids: 0,
            parallel_matchings: 0,
            parallelograms: 0,
        }
    }
}

/// `Q_j`: ordered placements of the displacement `j·step(s)` inside `[n]²`,
/// equivalently `Σ_ℓ (k_ℓ − j)⁺` over the lines ℓ of slope `s`.
fn windows(n: i64, s: Slope, j: i64) -> u128 {
    let (dx, dy) = s.step();
    let a = n - j * dx.abs();
    let b = n - j * dy.abs();
    if a <= 0 || b <= 0 {
        0
    } else {
        (a * b) as u128
    }
}

/// Number of unordered pairs of grid points spanning slope `s`.
pub(crate) fn pair_count(n: i64, s: Slope) -> u128 {
    (1..).map(|j| windows(n, s, j)).take_while(|&w| w > 0).sum()
}

/// `Σ_ℓ f(k_ℓ)` over the lines of slope `s`, for `f` with `f(0) = f(1) = 0`.
///
/// Uses `#{ℓ : k_ℓ ≥ m} = Q_{m−1} − Q_m`.
fn sum_over_lines(n: i64, s: Slope, f: impl Fn(u128) -> u128) -> u128 {
    let mut total = 0u128;
    let mut prev = windows(n, s, 1);
    let mut m = 2u128;
    while prev > 0 {
        let next = windows(n, s, m as i64);
        total += (f(m) - f(m - 1)) * (prev - next);
        prev = next;
        m += 1;
    }
    total
}

/// Collinear triples by endpoint displacement: a displacement `w` with
/// `gcd(w) = g` has `g − 1` lattice points strictly inside it.
fn collinear_triples_by_displacement(n: i64) -> u128 {
    let mut total = 0u128;
    for dx in 0..n {
        for dy in -(n - 1)..n {
            if dx == 0 && dy <= 0 {
                continue;
            }
            let g = gcd(dx as u64, dy.unsigned_abs()) as u128;
            total += (g - 1) * ((n - dx) * (n - dy.abs())) as u128;
        }
    }
    total
}

/// Collinear triples as `Σ_s Σ_ℓ C(k_ℓ, 3)`.
pub fn collinear_triples_by_lines(n: i64) -> u128 {
    canonical_slopes(n)
        .into_iter()
        .map(|s| sum_over_lines(n, s, |k| binomial(k, 3)))
        .sum()
}

/// Parallelograms `{a, a+u, a+w, a+u+w}`: every ordered `(u, w)` of non-parallel
/// non-zero vectors fits in `(n−|u_x|−|w_x|)⁺·(n−|u_y|−|w_y|)⁺` ways, and each
/// parallelogram arises from 8 such triples `(a, u, w)`.
fn parallelograms(n: i64) -> u128 {
    let nn = n as u128;
    // Σ over all (u, w) ∈ Z² × Z², factorised by coordinate
    let s1: u128 = (-(n - 1)..n)
        .flat_map(|a| (-(n - 1)..n).map(move |b| (n - a.abs() - b.abs()).max(0) as u128))
        .sum();
    // u = 0 or w = 0: Σ_b (n − |b|)⁺ = n²
    let s0 = nn * nn;
    let with_zero = 2 * s0 * s0 - nn * nn;
    // both non-zero and parallel: u = i·d, w = j·d, with 4(k−1) sign/size choices for |i|+|j| = k
    let parallel: u128 = canonical_slopes(n)
        .into_iter()
        .map(|s| {
            (2..)
                .map(|k| (4 * (k - 1)) as u128 * windows(n, s, k))
                .take_while(|&v| v > 0)
                .sum::<u128>()
        })
        .sum();
    let ordered = s1 * s1 - with_zero - parallel;
    debug_assert!(ordered % 8 == 0);
    ordered / 8
}

fn slope_class_counts(n: i64) -> GlobalCounts {
    let matchings: u128 = canonical_slopes(n)
        .into_iter()
        .map(|s| {
            let p = pair_count(n, s);
            let same_line = sum_over_lines(n, s, |k| {
                let c = binomial(k, 2);
                c * c
            });
            (p * p - same_line) / 2
        })
        .sum();
    let para = parallelograms(n);
    GlobalCounts {
        n,
        collinear_triples: collinear_triples_by_displacement(n),
        trapezoids: matchings - para,
        parallel_matchings: matchings,
        parallelograms: para,
    }
}

pub fn global_counts(n: i64, method: CountMethod) -> Result<GlobalCounts> {
    global_counts_with(n, method, &Budget::default())
}

pub fn global_counts_with(n: i64, method: CountMethod, budget: &Budget) -> Result<GlobalCounts> {
    if n < 1 {
        return Err(Error::Domain(format!("grid side n = {n} must be positive")));
    }
    match method {
        CountMethod::Brute if n > budget.counts_brute_n => Err(Error::budget(
            "counts.brute n",
            n as u128,
            budget.counts_brute_n as u128,
        )),
        CountMethod::SlopeClass if n > budget.counts_slope_n => Err(Error::budget(
            "counts.slope_class n",
            n as u128,
            budget.counts_slope_n as u128,
        )),
        _ if n == 1 => Ok(GlobalCounts::zero(n)),
        CountMethod::Brute => Ok(super::brute::global_counts(n)),
        CountMethod::SlopeClass => Ok(slope_class_counts(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let c3 = global_counts(3, CountMethod::SlopeClass).unwrap();
        assert_eq!(c3.collinear_triples, 8);
        let c2 = global_counts(2, CountMethod::SlopeClass).unwrap();
        assert_eq!(c2.trapezoids, 1);
        assert_eq!(c2.parallel_matchings, 2);
        assert_eq!(c2.parallelograms, 1);
        for m in [CountMethod::Brute, CountMethod::SlopeClass] {
            let c1 = global_counts(1, m).unwrap();
            assert_eq!((c1.collinear_triples, c1.trapezoids), (0, 0));
        }
        assert!(global_counts(0, CountMethod::SlopeClass).is_err());
    }

    #[test]
    fn methods_agree() {
        for n in 1..=7 {
            let brute = global_counts(n, CountMethod::Brute).unwrap();
            let fast = global_counts(n, CountMethod::SlopeClass).unwrap();
            assert_eq!(brute, fast, "n = {n}");
            assert_eq!(collinear_triples_by_lines(n), fast.collinear_triples);
        }
    }

    #[test]
    fn budgets() {
        assert!(matches!(
            global_counts(9, CountMethod::Brute),
            Err(Error::Budget { .. })
        ));
        assert!(matches!(
            global_counts(513, CountMethod::SlopeClass),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn axis_lines_floor() {
        for n in 3..=40 {
            let c = global_counts(n, CountMethod::SlopeClass).unwrap();
            assert!(c.collinear_triples >= n as u128 * binomial(n as u128, 3));
        }
    }

    #[test]
    fn pair_counts_sum_to_all_pairs() {
        for n in 2..=12 {
            let total: u128 = canonical_slopes(n).into_iter().map(|s| pair_count(n, s)).sum();
            let nn = (n * n) as u128;
            assert_eq!(total, nn * (nn - 1) / 2);
        }
    }
}
