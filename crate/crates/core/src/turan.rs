//! `H³ʳ`-free r-graphs: the 3-graph whose edges are the `H³ʳ`-copies of the
//! complete r-graph, greedy and deletion builders, and blow-ups.
//!
//! An r-set of `[m]` is stored as a fixed 512-bit set, so `m ≤ 512`. The
//! auxiliary 3-graph is never materialized; all of its statistics come from
//! scanning neighbours that share `r − 1` elements.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::budget::{binomial, Budget};
use crate::error::{Error, Result};
use crate::rng;
use crate::search::delete_hitting;

const WORDS: usize = 8;
pub const MAX_GROUND: u32 = 64 * WORDS as u32;

/// An r-subset of `[m]`, 1-indexed; element `x` is bit `x − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RSet([u64; WORDS]);

impl RSet {
    pub const EMPTY: RSet = RSet([0; WORDS]);

    pub fn new(members: &[u32]) -> Result<Self> {
        let mut set = RSet::EMPTY;
        for &x in members {
            if x == 0 || x > MAX_GROUND {
                return Err(Error::Domain(format!("element {x} outside [1, {MAX_GROUND}]")));
            }
            if set.contains(x) {
                return Err(Error::Degenerate(format!("element {x} repeated")));
            }
            set = set.with(x);
        }
        Ok(set)
    }

    #[inline]
    fn with(mut self, x: u32) -> Self {
        let b = (x - 1) as usize;
        self.0[b / 64] |= 1 << (b % 64);
        self
    }

    #[inline]
    fn without(mut self, x: u32) -> Self {
        let b = (x - 1) as usize;
        self.0[b / 64] &= !(1 << (b % 64));
        self
    }

    #[inline]
    pub fn union(mut self, other: RSet) -> Self {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a |= b;
        }
        self
    }

    #[inline]
    pub fn len(self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(self) -> bool {
        self == RSet::EMPTY
    }

    pub fn contains(self, x: u32) -> bool {
        if x == 0 || x > MAX_GROUND {
            return false;
        }
        let b = (x - 1) as usize;
        self.0[b / 64] >> (b % 64) & 1 == 1
    }

    /// Largest element, 0 for the empty set.
    pub fn max_element(self) -> u32 {
        self.0
            .iter()
            .rposition(|&w| w != 0)
            .map_or(0, |i| 64 * i as u32 + 64 - self.0[i].leading_zeros())
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.0.into_iter().enumerate().flat_map(|(i, w)| {
            let mut b = w;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let x = 64 * i as u32 + b.trailing_zeros() + 1;
                b &= b - 1;
                Some(x)
            })
        })
    }

    pub fn members(self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl Ord for RSet {
    /// Lexicographic order of the ascending member lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for RSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for RSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<u32>::deserialize(d)?;
        RSet::new(&members).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformRGraph {
    pub m: u32,
    pub r: u32,
    pub edges: BTreeSet<RSet>,
}

impl UniformRGraph {
    pub fn empty(m: u32, r: u32) -> Result<Self> {
        check_universe(m, r)?;
        Ok(UniformRGraph {
            m,
            r,
            edges: BTreeSet::new(),
        })
    }

    pub fn new(m: u32, r: u32, edges: impl IntoIterator<Item = RSet>) -> Result<Self> {
        let mut g = UniformRGraph::empty(m, r)?;
        for e in edges {
            g.insert(e)?;
        }
        Ok(g)
    }

    /// Adds `e`; returns whether it was new.
    pub fn insert(&mut self, e: RSet) -> Result<bool> {
        if e.len() != self.r || e.max_element() > self.m {
            return Err(Error::Domain(format!("{e} is not an {}-subset of [{}]", self.r, self.m)));
        }
        Ok(self.edges.insert(e))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|E| / C(m, r)`.
    pub fn density(&self) -> f64 {
        self.edges.len() as f64 / binomial(self.m as u128, self.r as u128) as f64
    }
}

fn check_universe(m: u32, r: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::Domain(format!("uniformity r = {r} must be at least 2")));
    }
    if m > MAX_GROUND {
        return Err(Error::Domain(format!("ground set size m = {m} exceeds {MAX_GROUND}")));
    }
    Ok(())
}

fn check_enumerable(m: u32, r: u32, budget: &Budget) -> Result<()> {
    check_universe(m, r)?;
    let count = binomial(m as u128, r as u128);
    if count > budget.rset_count {
        return Err(Error::budget(format!("C({m}, {r}) r-sets"), count, budget.rset_count));
    }
    Ok(())
}

/// All r-subsets of `[m]` in lexicographic order.
pub fn all_rsets(m: u32, r: u32) -> Vec<RSet> {
    fn rec(m: u32, r: u32, start: u32, set: RSet, out: &mut Vec<RSet>) {
        let have = set.len();
        if have == r {
            out.push(set);
            return;
        }
        let need = r - have;
        for x in start..=m {
            if m - x + 1 < need {
                break;
            }
            rec(m, r, x + 1, set.with(x), out);
        }
    }
    let mut out = Vec::with_capacity(binomial(m as u128, r as u128) as usize);
    if r <= m {
        rec(m, r, 1, RSet::EMPTY, &mut out);
    }
    out
}

/// Three distinct r-sets spanning exactly `r + 1` elements.
pub fn is_h3r_copy(e1: RSet, e2: RSet, e3: RSet) -> Result<bool> {
    if e1.len() != e2.len() || e2.len() != e3.len() {
        return Err(Error::Domain(format!("mixed uniformities {}, {}, {}", e1.len(), e2.len(), e3.len())));
    }
    Ok(copy_unchecked(e1, e2, e3))
}

#[inline]
fn copy_unchecked(e1: RSet, e2: RSet, e3: RSet) -> bool {
    e1 != e2 && e2 != e3 && e1 != e3 && e1.union(e2).union(e3).len() == e1.len() + 1
}

/// Number of `H³ʳ`-copies of `K_m^{(r)}` through one edge: `C(r, 2)·(m − r)`.
pub fn aux_degree_formula(r: u32, m: u32) -> u128 {
    if m <= r {
        0
    } else {
        binomial(r as u128, 2) * (m - r) as u128
    }
}

/// Sets `e − {a} + {x}` for `a ∈ e`, `x ∈ [m] ∖ e`.
fn neighbours(e: RSet, m: u32) -> impl Iterator<Item = RSet> {
    e.iter().flat_map(move |a| {
        let rest = e.without(a);
        (1..=m).filter(move |&x| !e.contains(x)).map(move |x| rest.with(x))
    })
}

/// The r-subsets of an `(r+1)`-set.
fn facets(union: RSet) -> impl Iterator<Item = RSet> {
    union.iter().map(move |x| union.without(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxProfile {
    pub r: u32,
    pub m: u32,
    pub delta: u128,
    pub delta_23: u128,
}

impl AuxProfile {
    pub const CSV_HEADER: [&'static str; 5] = ["r", "m", "delta_formula", "delta_brute", "delta_23"];

    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.r.to_string(),
            self.m.to_string(),
            aux_degree_formula(self.r, self.m).to_string(),
            self.delta.to_string(),
            self.delta_23.to_string(),
        ]
    }
}

pub fn aux_profile_bruteforce(r: u32, m: u32) -> Result<AuxProfile> {
    aux_profile_with(r, m, &Budget::default())
}

/// Exact maximum degree and (2,3)-codegree of the copy 3-graph.
///
/// Every copy `{A, B, C}` has `C ⊂ A ∪ B` and `|A ∩ B| = r − 1`, so the copies
/// through `A` are found by walking the neighbours `B` of `A` and testing each
/// r-subset of `A ∪ B`. Each copy through `A` is met twice, once per partner.
pub fn aux_profile_with(r: u32, m: u32, budget: &Budget) -> Result<AuxProfile> {
    check_enumerable(m, r, budget)?;
    let mut delta = 0u128;
    let mut delta_23 = 0u128;
    for a in all_rsets(m, r) {
        let mut twice = 0u128;
        for b in neighbours(a, m) {
            let cod = facets(a.union(b)).filter(|&c| copy_unchecked(a, b, c)).count() as u128;
            twice += cod;
            delta_23 = delta_23.max(cod);
        }
        delta = delta.max(twice / 2);
    }
    let profile = AuxProfile { r, m, delta, delta_23 };
    if delta != aux_degree_formula(r, m) {
        return Err(Error::Verification(format!(
            "enumerated degree {delta} differs from C(r,2)(m−r) = {}",
            aux_degree_formula(r, m)
        )));
    }
    if delta_23 > (r - 1) as u128 {
        return Err(Error::Verification(format!("codegree {delta_23} exceeds r − 1 = {}", r - 1)));
    }
    Ok(profile)
}

/// Number of copies containing both `e1` and `e2`, scanning every r-set of `[m]`.
pub fn aux_codegree_scan(e1: RSet, e2: RSet, m: u32, budget: &Budget) -> Result<u64> {
    let r = e1.len();
    if e2.len() != r {
        return Err(Error::Domain("edges of different uniformity".into()));
    }
    check_enumerable(m, r, budget)?;
    Ok(all_rsets(m, r).into_iter().filter(|&c| copy_unchecked(e1, e2, c)).count() as u64)
}

/// Full triple scan of the copy 3-graph, for very small `(r, m)` only.
pub fn aux_profile_triple_scan(r: u32, m: u32) -> Result<AuxProfile> {
    check_universe(m, r)?;
    let verts = all_rsets(m, r);
    if verts.len() > 40 {
        return Err(Error::budget("aux triple scan vertices", verts.len() as u128, 40));
    }
    let k = verts.len();
    let mut deg = vec![0u128; k];
    let mut cod = vec![vec![0u128; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                if copy_unchecked(verts[i], verts[j], verts[l]) {
                    for x in [i, j, l] {
                        deg[x] += 1;
                    }
                    cod[i][j] += 1;
                    cod[i][l] += 1;
                    cod[j][l] += 1;
                }
            }
        }
    }
    Ok(AuxProfile {
        r,
        m,
        delta: deg.into_iter().max().unwrap_or(0),
        delta_23: cod.into_iter().flatten().max().unwrap_or(0),
    })
}

/// Some copy of `H³ʳ` among the edges, if any.
pub fn find_h3r(g: &UniformRGraph) -> Option<[RSet; 3]> {
    let edges: Vec<RSet> = g.edges.iter().copied().collect();
    let set: HashSet<RSet> = edges.iter().copied().collect();
    for (i, &a) in edges.iter().enumerate() {
        for &b in &edges[i + 1..] {
            let union = a.union(b);
            if union.len() != g.r + 1 {
                continue;
            }
            if let Some(c) = facets(union).find(|c| *c != a && *c != b && set.contains(c)) {
                return Some([a, b, c]);
            }
        }
    }
    None
}

pub fn contains_h3r(g: &UniformRGraph) -> bool {
    find_h3r(g).is_some()
}

/// Whether `e` would close a copy with two edges of `edges`.
fn closes_copy(e: RSet, m: u32, edges: &HashSet<RSet>) -> bool {
    neighbours(e, m)
        .filter(|b| edges.contains(b))
        .any(|b| facets(e.union(b)).any(|c| c != e && c != b && edges.contains(&c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FreeStrategy {
    PermutationGreedy { seed: u64 },
    Deletion { p: f64, seed: u64 },
}

impl FreeStrategy {
    pub fn seed(&self) -> u64 {
        match *self {
            FreeStrategy::PermutationGreedy { seed } | FreeStrategy::Deletion { seed, .. } => seed,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FreeStrategy::PermutationGreedy { .. } => "permutation_greedy",
            FreeStrategy::Deletion { .. } => "deletion",
        }
    }
}

impl FromStr for FreeStrategy {
    type Err = Error;

    /// `greedy` or `deletion:P`; the seed is filled in later.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "greedy" || s == "permutation_greedy" => Ok(FreeStrategy::PermutationGreedy { seed: 0 }),
            Some(("deletion", p)) => {
                let p: f64 = p.parse().map_err(|_| Error::Domain(format!("bad probability {p:?}")))?;
                Ok(FreeStrategy::Deletion { p, seed: 0 })
            }
            _ => Err(Error::Domain(format!("unknown strategy {s:?}; use greedy or deletion:P"))),
        }
    }
}

pub fn build_free_graph(r: u32, m: u32, strategy: FreeStrategy) -> Result<UniformRGraph> {
    build_free_graph_with(r, m, strategy, &Budget::default())
}

pub fn build_free_graph_with(r: u32, m: u32, strategy: FreeStrategy, budget: &Budget) -> Result<UniformRGraph> {
    check_enumerable(m, r, budget)?;
    let all = all_rsets(m, r);
    let kept: Vec<RSet> = match strategy {
        FreeStrategy::PermutationGreedy { seed } => {
            let mut edges = HashSet::new();
            let mut kept = Vec::new();
            for e in rng::shuffled(&all, seed) {
                if !closes_copy(e, m, &edges) {
                    edges.insert(e);
                    kept.push(e);
                }
            }
            kept
        }
        FreeStrategy::Deletion { p, seed } => {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Domain(format!("sampling probability p = {p} not in (0, 1]")));
            }
            let mut rng = rng::seeded(seed);
            let sample: Vec<RSet> = all.into_iter().filter(|_| rng.gen_bool(p)).collect();
            let index: std::collections::HashMap<RSet, usize> =
                sample.iter().enumerate().map(|(i, e)| (*e, i)).collect();
            let mut copies: BTreeSet<[usize; 3]> = BTreeSet::new();
            for (i, &a) in sample.iter().enumerate() {
                for b in neighbours(a, m) {
                    let Some(&j) = index.get(&b) else { continue };
                    for c in facets(a.union(b)) {
                        if c == a || c == b {
                            continue;
                        }
                        if let Some(&l) = index.get(&c) {
                            let mut t = [i, j, l];
                            t.sort_unstable();
                            copies.insert(t);
                        }
                    }
                }
                if copies.len() as u128 > budget.sample_ops {
                    return Err(Error::budget("deletion copies", copies.len() as u128, budget.sample_ops));
                }
            }
            let bad: Vec<Vec<usize>> = copies.into_iter().map(|t| t.to_vec()).collect();
            let removed = delete_hitting(sample.len(), &bad);
            sample.into_iter().zip(removed).filter(|(_, gone)| !gone).map(|(e, _)| e).collect()
        }
    };
    let g = UniformRGraph::new(m, r, kept)?;
    if let Some(copy) = find_h3r(&g) {
        return Err(Error::Verification(format!(
            "builder output contains the copy {}, {}, {}",
            copy[0], copy[1], copy[2]
        )));
    }
    Ok(g)
}

/// One row of a free-graph search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuranResult {
    pub graph: UniformRGraph,
    pub strategy: FreeStrategy,
    pub elapsed_ms: u128,
}

impl TuranResult {
    pub const CSV_HEADER: [&'static str; 8] =
        ["r", "m", "strategy", "seed", "edges", "density", "floor_r_minus_2", "passes_floor"];

    pub fn run(r: u32, m: u32, strategy: FreeStrategy, budget: &Budget) -> Result<Self> {
        let started = Instant::now();
        let graph = build_free_graph_with(r, m, strategy, budget)?;
        Ok(TuranResult {
            graph,
            strategy,
            elapsed_ms: started.elapsed().as_millis(),
        })
    }

    /// `|E| / C(m, r) ≥ r^{−2}`, compared exactly.
    pub fn passes_floor(&self) -> bool {
        let r = self.graph.r as u128;
        self.graph.edge_count() as u128 * r * r >= binomial(self.graph.m as u128, r)
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let r = self.graph.r;
        vec![
            r.to_string(),
            self.graph.m.to_string(),
            self.strategy.name().to_string(),
            self.strategy.seed().to_string(),
            self.graph.edge_count().to_string(),
            format!("{:.6}", self.graph.density()),
            format!("{:.6}", 1.0 / (r * r) as f64),
            self.passes_floor().to_string(),
        ]
    }
}

/// Every pair of covered vertices lies in a common edge.
pub fn has_complete_shadow(h: &UniformRGraph) -> bool {
    let verts = h.edges.iter().fold(RSet::EMPTY, |acc, e| acc.union(*e)).members();
    verts.iter().enumerate().all(|(i, &x)| {
        verts[i + 1..]
            .iter()
            .all(|&y| h.edges.iter().any(|e| e.contains(x) && e.contains(y)))
    })
}

/// Replaces vertex `x` by `(x − 1)·t + 1, …, (x − 1)·t + t` and each edge by
/// the `tʳ` transversals of its clone classes.
pub fn blow_up(g: &UniformRGraph, t: u32) -> Result<UniformRGraph> {
    blow_up_with(g, t, &Budget::default())
}

pub fn blow_up_with(g: &UniformRGraph, t: u32, budget: &Budget) -> Result<UniformRGraph> {
    if t == 0 {
        return Err(Error::Domain("blow-up factor t must be at least 1".into()));
    }
    let size = g.m as u64 * t as u64;
    if size > MAX_GROUND as u64 {
        return Err(Error::budget("blow-up vertices m·t", size as u128, MAX_GROUND as u128));
    }
    let total = g.edge_count() as u128 * (t as u128).pow(g.r);
    if total > budget.rset_count {
        return Err(Error::budget("blow-up edges", total, budget.rset_count));
    }
    let mut out = UniformRGraph::empty(size as u32, g.r)?;
    for e in &g.edges {
        let members = e.members();
        let mut choice = vec![1u32; members.len()];
        loop {
            let clones: Vec<u32> = members.iter().zip(&choice).map(|(&x, &a)| (x - 1) * t + a).collect();
            out.insert(RSet::new(&clones)?)?;
            let Some(pos) = choice.iter().rposition(|&a| a < t) else { break };
            choice[pos] += 1;
            for a in &mut choice[pos + 1..] {
                *a = 1;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCheck {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    #[serde(skip)]
    pub exact: Option<(BigRational, BigRational)>,
}

fn big_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `|E(G(t))| / C(mt, r)` against `¼·|E(G)| / C(m, r)` in exact arithmetic.
pub fn density_check(g: &UniformRGraph, t: u32) -> Result<DensityCheck> {
    if t == 0 {
        return Err(Error::Domain("blow-up factor t must be at least 1".into()));
    }
    let (m, r) = (g.m as u64, g.r as u64);
    if m < r * r {
        return Err(Error::Precondition(format!("density check needs m ≥ r², got m = {m}, r = {r}")));
    }
    let e = BigInt::from(g.edge_count());
    let lhs = BigRational::new(&e * BigInt::from(t).pow(g.r), big_binomial(m * t as u64, r));
    let rhs = BigRational::new(e, big_binomial(m, r) * BigInt::from(4));
    let holds = lhs >= rhs;
    Ok(DensityCheck {
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        holds,
        exact: Some((lhs, rhs)),
    })
}

/// Exact comparisons along `Δ₂,₃ ≤ Δ^{1/3} ≤ Δ^{1/2}/Δ^{1/10}` at `m = r²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub r: u32,
    pub delta: u128,
    pub delta_23: u128,
    /// `(r − 1)³ ≤ Δ`.
    pub codegree_below_cube_root: bool,
    /// `Δ^{10} ≤ Δ^{12}`, i.e. `Δ^{1/3} ≤ Δ^{2/5}`.
    pub cube_root_below_rate: bool,
    /// `r⁴/3 ≤ Δ`.
    pub quartic_floor: bool,
}

impl ChainCheck {
    pub fn holds(&self) -> bool {
        self.codegree_below_cube_root && self.cube_root_below_rate
    }
}

pub fn chain_check(r: u32) -> Result<ChainCheck> {
    if r < 2 {
        return Err(Error::Domain(format!("uniformity r = {r} must be at least 2")));
    }
    let delta = aux_degree_formula(r, r * r);
    let delta_23 = (r - 1) as u128;
    let d = BigInt::from(delta);
    Ok(ChainCheck {
        r,
        delta,
        delta_23,
        codegree_below_cube_root: BigInt::from(delta_23).pow(3) <= d,
        cube_root_below_rate: d.pow(10) <= d.pow(12),
        quartic_floor: BigInt::from(r).pow(4) <= BigInt::from(3) * &d,
    })
}
