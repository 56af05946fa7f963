use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::GridPoint;
use crate::rng;

use super::{GridHypergraph, GridHypergraphParams};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileMode {
    Exact,
    /// Maxima over `samples` random vertices, pairs and triples; lower bounds on the true maxima.
    Sampled { samples: usize, seed: u64 },
}

impl fmt::Display for ProfileMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileMode::Exact => f.write_str("exact"),
            ProfileMode::Sampled { samples, seed } => write!(f, "sampled:{samples}:{seed}"),
        }
    }
}

/// Maximum degrees and codegrees of one grid hypergraph instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub n: i64,
    pub s_star: i64,
    pub mode: String,
    pub delta_2: u64,
    pub delta_3: u64,
    pub delta_4: u64,
    pub delta_23: u64,
    pub delta_34: u64,
    pub delta_24: u64,
    pub delta_k3: u64,
}

impl DegreeProfile {
    pub fn empty(params: &GridHypergraphParams, mode: &ProfileMode) -> Self {
        DegreeProfile {
            n: params.n,
            s_star: params.s_star,
            mode: mode.to_string(),
            delta_2: 0,
            delta_3: 0,
            delta_4: 0,
            delta_23: 0,
            delta_34: 0,
            delta_24: 0,
            delta_k3: 0,
        }
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "n", "s_star", "mode", "delta_2", "delta_3", "delta_4", "delta_23", "delta_34", "delta_24", "delta_K3",
    ];

    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.s_star.to_string(),
            self.mode.clone(),
            self.delta_2.to_string(),
            self.delta_3.to_string(),
            self.delta_4.to_string(),
            self.delta_23.to_string(),
            self.delta_34.to_string(),
            self.delta_24.to_string(),
            self.delta_k3.to_string(),
        ]
    }
}

pub fn profile(params: &GridHypergraphParams, mode: &ProfileMode) -> Result<DegreeProfile> {
    profile_with(params, mode, &Budget::default())
}

pub fn profile_with(params: &GridHypergraphParams, mode: &ProfileMode, budget: &Budget) -> Result<DegreeProfile> {
    let g = GridHypergraph::new(*params);
    match mode {
        ProfileMode::Exact => exact(&g, budget),
        ProfileMode::Sampled { samples, seed } => Ok(sampled(&g, *samples, *seed)),
    }
}

fn exact(g: &GridHypergraph, budget: &Budget) -> Result<DegreeProfile> {
    let n = g.n();
    if n > budget.profile_degree_n {
        return Err(Error::budget("delta_2 (exact degree maxima) n", n as u128, budget.profile_degree_n as u128));
    }
    if n > budget.profile_codegree_n {
        return Err(Error::budget(
            "delta_23 (exact codegree maxima) n",
            n as u128,
            budget.profile_codegree_n as u128,
        ));
    }
    let mut prof = DegreeProfile::empty(g.params(), &ProfileMode::Exact);
    let pts: Vec<GridPoint> = crate::lattice::grid_points(n).collect();

    let (d2, d3, d4) = pts
        .par_iter()
        .map(|&p| (g.degree2_unchecked(p), g.degree3_unchecked(p), g.degree4_unchecked(p)))
        .reduce(|| (0, 0, 0), |a, b| (a.0.max(b.0), a.1.max(b.1), a.2.max(b.2)));
    prof.delta_2 = d2;
    prof.delta_3 = d3;
    prof.delta_4 = d4;
    prof.delta_k3 = max_triangles_bitset(g, &pts);

    let (d23, d24) = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut best = (0, 0);
            for j in i + 1..pts.len() {
                let pair = [pts[i], pts[j]];
                best.0 = best.0.max(g.codegree(&pair, 3).unwrap());
                best.1 = best.1.max(g.codegree(&pair, 4).unwrap());
            }
            best
        })
        .reduce(|| (0, 0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    prof.delta_23 = d23;
    prof.delta_24 = d24;

    prof.delta_34 = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut best = 0;
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    best = best.max(g.codegree(&[pts[i], pts[j], pts[k]], 4).unwrap());
                }
            }
            best
        })
        .max()
        .unwrap_or(0);
    Ok(prof)
}

/// Triangle maxima of the 2-edge graph using neighbourhood bitsets.
fn max_triangles_bitset(g: &GridHypergraph, pts: &[GridPoint]) -> u64 {
    if g.params().s_star == 0 {
        return 0;
    }
    let nv = pts.len();
    let words = nv.div_ceil(64);
    let mut adj = vec![0u64; nv * words];
    for i in 0..nv {
        for j in i + 1..nv {
            if g.is_low_pair(pts[i], pts[j]) {
                adj[i * words + j / 64] |= 1 << (j % 64);
                adj[j * words + i / 64] |= 1 << (i % 64);
            }
        }
    }
    (0..nv)
        .into_par_iter()
        .map(|i| {
            let row = &adj[i * words..(i + 1) * words];
            let mut twice = 0u64;
            for (w, &bits) in row.iter().enumerate() {
                let mut b = bits;
                while b != 0 {
                    let j = w * 64 + b.trailing_zeros() as usize;
                    b &= b - 1;
                    let other = &adj[j * words..(j + 1) * words];
                    twice += row.iter().zip(other).map(|(x, y)| (x & y).count_ones() as u64).sum::<u64>();
                }
            }
            twice / 2
        })
        .max()
        .unwrap_or(0)
}

const KIND_VERTEX: u8 = 1;
const KIND_PAIR: u8 = 2;
const KIND_TRIPLE: u8 = 3;

fn random_points(n: i64, k: usize, rng: &mut impl Rng) -> Vec<GridPoint> {
    let mut out: Vec<GridPoint> = Vec::with_capacity(k);
    while out.len() < k {
        let p = GridPoint::new(rng.gen_range(1..=n), rng.gen_range(1..=n));
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn sampled(g: &GridHypergraph, samples: usize, seed: u64) -> DegreeProfile {
    let n = g.n();
    let mut prof = DegreeProfile::empty(g.params(), &ProfileMode::Sampled { samples, seed });
    let verts = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let p = random_points(n, 1, &mut rng::stream(seed, KIND_VERTEX, i))[0];
            (
                g.degree2_unchecked(p),
                g.degree3_unchecked(p),
                g.degree4_unchecked(p),
                g.triangles_at(p),
            )
        })
        .reduce(|| (0, 0, 0, 0), |a, b| (a.0.max(b.0), a.1.max(b.1), a.2.max(b.2), a.3.max(b.3)));
    (prof.delta_2, prof.delta_3, prof.delta_4, prof.delta_k3) = verts;

    let pairs = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let pair = random_points(n, 2, &mut rng::stream(seed, KIND_PAIR, i));
            (g.codegree(&pair, 3).unwrap(), g.codegree(&pair, 4).unwrap())
        })
        .reduce(|| (0, 0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    (prof.delta_23, prof.delta_24) = pairs;

    if n * n >= 3 {
        prof.delta_34 = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let tri = random_points(n, 3, &mut rng::stream(seed, KIND_TRIPLE, i));
                g.codegree(&tri, 4).unwrap()
            })
            .max()
            .unwrap_or(0);
    }
    prof
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::brute;

    #[test]
    fn exact_matches_enumeration_at_small_n() {
        for n in 2..=5 {
            for s in [0, 1, 2, n] {
                let params = GridHypergraphParams::new(n, s).unwrap();
                assert_eq!(profile(&params, &ProfileMode::Exact).unwrap(), brute::profile(&params));
            }
        }
    }

    #[test]
    fn no_pairs_without_threshold() {
        let params = GridHypergraphParams::new(2, 0).unwrap();
        let p = profile(&params, &ProfileMode::Exact).unwrap();
        assert_eq!(p.delta_2, 0);
        assert_eq!(p.delta_k3, 0);
    }

    #[test]
    fn codegree_inequality_at_four() {
        let params = GridHypergraphParams::new(4, 4).unwrap();
        let p = profile(&params, &ProfileMode::Exact).unwrap();
        assert!(p.delta_24 <= 16 * p.delta_34);
    }

    #[test]
    fn budget_names_the_field() {
        let params = GridHypergraphParams::new(17, 3).unwrap();
        match profile(&params, &ProfileMode::Exact) {
            Err(Error::Budget { field, .. }) => assert!(field.contains("delta_23")),
            other => panic!("expected budget error, got {other:?}"),
        }
        let params = GridHypergraphParams::new(65, 5).unwrap();
        match profile(&params, &ProfileMode::Exact) {
            Err(Error::Budget { field, .. }) => assert!(field.contains("delta_2")),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn sampled_is_a_lower_bound_and_reproducible() {
        let params = GridHypergraphParams::new(6, 2).unwrap();
        let exact = profile(&params, &ProfileMode::Exact).unwrap();
        let mode = ProfileMode::Sampled { samples: 20, seed: 9 };
        let a = profile(&params, &mode).unwrap();
        let b = profile(&params, &mode).unwrap();
        assert_eq!(a, b);
        assert!(a.delta_2 <= exact.delta_2 && a.delta_4 <= exact.delta_4);
        assert!(a.delta_24 <= exact.delta_24 && a.delta_34 <= exact.delta_34);
        assert!(a.delta_k3 <= exact.delta_k3);
        assert_eq!(a.mode, "sampled:20:9");
    }
}
