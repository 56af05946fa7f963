use serde::{Deserialize, Serialize};

/// Work limits for the enumeration-heavy operations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest `n` for exact per-vertex degree maxima.
    pub profile_degree_n: i64,
    /// Largest `n` for exact codegree maxima (all pairs / all triples).
    pub profile_codegree_n: i64,
    /// Largest `n` for the brute-force global counts.
    pub counts_brute_n: i64,
    /// Largest `n` for the slope-class global counts.
    pub counts_slope_n: i64,
    /// Largest `n` for the exact distinct-slope search.
    pub exact_g_n: i64,
    /// Largest `n` for the hypergraph-restricted permutation greedy.
    pub membership_n: i64,
    /// Largest number of r-sets enumerated on the Turán side.
    pub rset_count: u128,
    /// Ceiling on enumeration work inside a random sample (quadruples or copies).
    pub sample_ops: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            profile_degree_n: 64,
            profile_codegree_n: 16,
            counts_brute_n: 8,
            counts_slope_n: 512,
            exact_g_n: 5,
            membership_n: 256,
            rset_count: 100_000,
            sample_ops: 1_000_000_000,
        }
    }
}

impl Budget {
    /// Default limits with a custom operation ceiling.
    pub fn with_ops(ops: u128) -> Self {
        Budget {
            sample_ops: ops,
            ..Budget::default()
        }
    }
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
