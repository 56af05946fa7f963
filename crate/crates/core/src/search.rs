//! Constructive searches for large distinct-slope subsets of `[n]²`.
//!
//! Every strategy returns a [`SearchResult`] whose point set has been checked
//! by both characterizations of distinct slopes before it is handed back.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::budget::{binomial, Budget};
use crate::error::{Error, Result};
use crate::grid::{cross, global_counts, is_trapezoid4, CountMethod, GridHypergraphParams};
use crate::lattice::{grid_points, GridPoint, Slope};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeSet {
    pub n: i64,
    /// Sorted lexicographically, no repeats.
    pub points: Vec<GridPoint>,
    pub verified: bool,
}

impl SlopeSet {
    /// Sorts and deduplicates `points`, then runs both distinct-slope checks.
    pub fn new(n: i64, mut points: Vec<GridPoint>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !p.in_grid(n)) {
            return Err(Error::Domain(format!("point ({}, {}) outside [{n}]²", p.x, p.y)));
        }
        points.sort();
        points.dedup();
        let by_slopes = distinct_by_slope_multiset(&points);
        let by_configs = distinct_by_configurations(&points);
        if by_slopes != by_configs {
            return Err(Error::Verification(format!(
                "slope-multiset check says {by_slopes}, configuration check says {by_configs}"
            )));
        }
        Ok(SlopeSet {
            n,
            points,
            verified: by_slopes,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn slope_of(p: GridPoint, q: GridPoint) -> Slope {
    Slope::from_displacement(q.x - p.x, q.y - p.y).expect("distinct points")
}

/// No slope occurs twice among the `C(k, 2)` pairs.
pub fn distinct_by_slope_multiset(points: &[GridPoint]) -> bool {
    let mut seen = HashSet::new();
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            if p == q || !seen.insert(slope_of(p, q)) {
                return false;
            }
        }
    }
    true
}

/// No collinear triple and no 4-subset forming a trapezoid.
pub fn distinct_by_configurations(points: &[GridPoint]) -> bool {
    let k = points.len();
    for i in 0..k {
        for j in i + 1..k {
            if points[i] == points[j] {
                return false;
            }
            for l in j + 1..k {
                if cross(points[i], points[j], points[l]) == 0 {
                    return false;
                }
            }
        }
    }
    if k < 4 {
        return true;
    }
    let side = points.iter().map(|p| p.x.max(p.y)).max().unwrap_or(2).max(2);
    let plain = GridHypergraphParams::plain(side).expect("side ≥ 2");
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    let quad = [points[a], points[b], points[c], points[d]];
                    if is_trapezoid4(&quad, &plain).expect("distinct points") {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Whether the set spans pairwise distinct slopes.
pub fn verify_distinct_slopes(set: &SlopeSet) -> bool {
    set.points.iter().all(|p| p.in_grid(set.n)) && distinct_by_slope_multiset(&set.points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    Deletion,
    GreedyRandom,
    GreedyDiagonal,
    PermutationGreedy,
    Exact,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Deletion => "deletion",
            Strategy::GreedyRandom => "greedy_random",
            Strategy::GreedyDiagonal => "greedy_diagonal",
            Strategy::PermutationGreedy => "permutation_greedy",
            Strategy::Exact => "exact",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "deletion" | "zhang" => Ok(Strategy::Deletion),
            "greedy_random" | "greedy" => Ok(Strategy::GreedyRandom),
            "greedy_diagonal" | "diagonal_sweep" => Ok(Strategy::GreedyDiagonal),
            "permutation_greedy" => Ok(Strategy::PermutationGreedy),
            "exact" => Ok(Strategy::Exact),
            other => Err(Error::Domain(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub set: SlopeSet,
    pub size: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub s_star: i64,
    pub p: Option<f64>,
    pub c: Option<f64>,
    pub elapsed: Duration,
    pub stats: BTreeMap<String, u64>,
}

impl SearchResult {
    pub const CSV_HEADER: [&'static str; 9] = ["strategy", "n", "s_star", "p", "c", "seed", "size", "elapsed_ms", "verified"];

    fn new(set: SlopeSet, strategy: Strategy, seed: u64, started: Instant) -> Result<Self> {
        if !set.verified {
            return Err(Error::Verification(format!(
                "{strategy} produced a set of size {} without distinct slopes",
                set.len()
            )));
        }
        Ok(SearchResult {
            size: set.len(),
            set,
            seed,
            strategy,
            s_star: 0,
            p: None,
            c: None,
            elapsed: started.elapsed(),
            stats: BTreeMap::new(),
        })
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.6e}")).unwrap_or_default();
        vec![
            self.strategy.to_string(),
            self.set.n.to_string(),
            self.s_star.to_string(),
            opt(self.p),
            opt(self.c),
            self.seed.to_string(),
            self.size.to_string(),
            self.elapsed.as_millis().to_string(),
            self.set.verified.to_string(),
        ]
    }
}

/// Largest result; ties go to the lexicographically least point list.
pub fn best_of(results: impl IntoIterator<Item = SearchResult>) -> Option<SearchResult> {
    results.into_iter().min_by(|a, b| b.size.cmp(&a.size).then_with(|| a.set.points.cmp(&b.set.points)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeletionParams {
    pub n: i64,
    pub p: f64,
    pub c: Option<f64>,
    pub seed: u64,
}

impl DeletionParams {
    pub fn new(n: i64, p: f64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("deletion needs n ≥ 2, got {n}")));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Domain(format!("sampling probability p = {p} not in (0, 1]")));
        }
        Ok(DeletionParams { n, p, c: None, seed })
    }

    /// `p = c · n^{−4/3} · (ln n)^{−1/3}`, capped at 1.
    pub fn from_c(n: i64, c: f64, seed: u64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Domain(format!("scale c = {c} must be positive")));
        }
        if n < 2 {
            return Err(Error::Domain(format!("deletion needs n ≥ 2, got {n}")));
        }
        let nf = n as f64;
        let p = (c * nf.powf(-4.0 / 3.0) * nf.ln().powf(-1.0 / 3.0)).min(1.0);
        let mut params = DeletionParams::new(n, p, seed)?;
        params.c = Some(c);
        Ok(params)
    }
}

/// `p·n² − p⁴·T − p³·C`, the expected size left after one deletion per bad configuration.
pub fn deletion_expectation(n: i64, p: f64) -> Result<f64> {
    let counts = global_counts(n, CountMethod::SlopeClass)?;
    let nn = (n * n) as f64;
    Ok(p * nn - p.powi(4) * counts.trapezoids as f64 - p.powi(3) * counts.collinear_triples as f64)
}

/// `n^{2/3} / (ln n)^{1/3}`.
pub fn deletion_scale(n: i64) -> f64 {
    let nf = n as f64;
    nf.powf(2.0 / 3.0) / nf.ln().cbrt()
}

pub fn zhang_deletion(params: &DeletionParams) -> Result<SearchResult> {
    zhang_deletion_with(params, &Budget::default())
}

pub fn zhang_deletion_with(params: &DeletionParams, budget: &Budget) -> Result<SearchResult> {
    let started = Instant::now();
    let DeletionParams { n, p, seed, .. } = *params;
    let mut rng = rng::seeded(seed);
    let sample: Vec<GridPoint> = grid_points(n).filter(|_| rng.gen_bool(p)).collect();
    let s = sample.len() as u128;
    if binomial(s, 4) > budget.sample_ops {
        return Err(Error::budget("deletion sample quadruples", binomial(s, 4), budget.sample_ops));
    }

    let mut bad: Vec<Vec<usize>> = Vec::new();
    let k = sample.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                if cross(sample[a], sample[b], sample[c]) == 0 {
                    bad.push(vec![a, b, c]);
                }
            }
        }
    }
    let triples = bad.len() as u64;

    let mut by_slope: HashMap<Slope, Vec<(usize, usize)>> = HashMap::new();
    for a in 0..k {
        for b in a + 1..k {
            by_slope.entry(slope_of(sample[a], sample[b])).or_default().push((a, b));
        }
    }
    let mut quads = HashSet::new();
    for pairs in by_slope.values() {
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for &(c, d) in &pairs[i + 1..] {
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                let mut q = [a, b, c, d];
                q.sort_unstable();
                let pts = q.map(|i| sample[i]);
                let degenerate = cross(pts[0], pts[1], pts[2]) == 0
                    || cross(pts[0], pts[1], pts[3]) == 0
                    || cross(pts[0], pts[2], pts[3]) == 0
                    || cross(pts[1], pts[2], pts[3]) == 0;
                if !degenerate {
                    quads.insert(q);
                }
            }
        }
    }
    let trapezoids = quads.len() as u64;
    let mut quads: Vec<_> = quads.into_iter().collect();
    quads.sort_unstable();
    bad.extend(quads.into_iter().map(|q| q.to_vec()));

    let removed = delete_hitting(k, &bad);
    let kept: Vec<GridPoint> = (0..k).filter(|i| !removed[*i]).map(|i| sample[i]).collect();
    let deleted = removed.iter().filter(|&&r| r).count() as u64;

    let set = SlopeSet::new(n, kept)?;
    let mut result = SearchResult::new(set, Strategy::Deletion, seed, started)?;
    result.p = Some(p);
    result.c = params.c;
    result.stats.insert("sampled".into(), k as u64);
    result.stats.insert("deleted_triples".into(), triples);
    result.stats.insert("deleted_trapezoids".into(), trapezoids);
    result.stats.insert("deleted_points".into(), deleted);
    Ok(result)
}

/// Deletes points until every configuration in `bad` is hit, always taking a
/// point of highest remaining multiplicity (lowest index on ties).
pub(crate) fn delete_hitting(k: usize, bad: &[Vec<usize>]) -> Vec<bool> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut count = vec![0usize; k];
    for (j, cfg) in bad.iter().enumerate() {
        for &i in cfg {
            incident[i].push(j);
            count[i] += 1;
        }
    }
    let mut alive = vec![true; bad.len()];
    let mut removed = vec![false; k];
    loop {
        let (best, &mult) = match count.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))) {
            Some(x) => x,
            None => break,
        };
        if mult == 0 {
            break;
        }
        removed[best] = true;
        for &j in &incident[best] {
            if alive[j] {
                alive[j] = false;
                for &i in &bad[j] {
                    count[i] -= 1;
                }
            }
        }
    }
    removed
}

/// Mean deletion size for each candidate `c` over `seeds`, plus the argmax.
pub fn tune_c(n: i64, candidates: &[f64], seeds: impl IntoIterator<Item = u64> + Clone) -> Result<(f64, Vec<(f64, f64)>)> {
    if candidates.is_empty() {
        return Err(Error::Domain("no candidate values of c".into()));
    }
    let mut table = Vec::with_capacity(candidates.len());
    for &c in candidates {
        let mut total = 0usize;
        let mut runs = 0usize;
        for seed in seeds.clone() {
            total += zhang_deletion(&DeletionParams::from_c(n, c, seed)?)?.size;
            runs += 1;
        }
        table.push((c, total as f64 / runs.max(1) as f64));
    }
    let best = table
        .iter()
        .fold(table[0], |acc, &x| if x.1 > acc.1 { x } else { acc });
    Ok((best.0, table))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InsertOrder {
    Random(u64),
    /// Anti-diagonals `x + y = 2, 3, …`, each by increasing `x`.
    DiagonalSweep,
}

pub fn greedy_insert(n: i64, order: InsertOrder) -> Result<SearchResult> {
    if n < 1 {
        return Err(Error::Domain(format!("grid side n = {n} must be positive")));
    }
    let started = Instant::now();
    let mut pts: Vec<GridPoint> = grid_points(n).collect();
    let (strategy, seed) = match order {
        InsertOrder::Random(seed) => {
            pts = rng::shuffled(&pts, seed);
            (Strategy::GreedyRandom, seed)
        }
        InsertOrder::DiagonalSweep => {
            pts.sort_by_key(|p| (p.x + p.y, p.x));
            (Strategy::GreedyDiagonal, 0)
        }
    };
    let mut chosen: Vec<GridPoint> = Vec::new();
    let mut used: HashSet<Slope> = HashSet::new();
    let mut fresh: Vec<Slope> = Vec::new();
    for p in pts {
        fresh.clear();
        let ok = chosen.iter().all(|&q| {
            let s = slope_of(p, q);
            if used.contains(&s) || fresh.contains(&s) {
                false
            } else {
                fresh.push(s);
                true
            }
        });
        if ok {
            used.extend(fresh.iter().copied());
            chosen.push(p);
        }
    }
    SearchResult::new(SlopeSet::new(n, chosen)?, strategy, seed, started)
}

/// Random permutation of `[n]²`; a vertex is kept iff it closes no 2-, 3- or
/// 4-edge of the grid hypergraph with the vertices kept so far.
pub fn permutation_greedy_independent(params: &GridHypergraphParams, seed: u64) -> Result<SearchResult> {
    permutation_greedy_with(params, seed, &Budget::default())
}

pub fn permutation_greedy_with(params: &GridHypergraphParams, seed: u64, budget: &Budget) -> Result<SearchResult> {
    let n = params.n;
    if n > budget.membership_n {
        return Err(Error::budget("permutation greedy n", n as u128, budget.membership_n as u128));
    }
    let started = Instant::now();
    let order = rng::shuffled(&grid_points(n).collect::<Vec<_>>(), seed);
    let mut chosen: Vec<GridPoint> = Vec::new();
    let mut pairs_by_slope: HashMap<Slope, Vec<(GridPoint, GridPoint)>> = HashMap::new();
    let mut slopes: Vec<Slope> = Vec::new();
    for v in order {
        slopes.clear();
        let mut ok = true;
        'scan: for &u in &chosen {
            let s = slope_of(v, u);
            // 2-edge, then a collinear triple through v
            if s.height() <= params.s_star || slopes.contains(&s) {
                ok = false;
                break;
            }
            slopes.push(s);
            for &(w, x) in pairs_by_slope.get(&s).map(Vec::as_slice).unwrap_or(&[]) {
                if w != u && x != u && is_trapezoid4(&[v, u, w, x], params)? {
                    ok = false;
                    break 'scan;
                }
            }
        }
        if ok {
            for (&u, &s) in chosen.iter().zip(&slopes) {
                pairs_by_slope.entry(s).or_default().push((v, u));
            }
            chosen.push(v);
        }
    }
    let mut result = SearchResult::new(SlopeSet::new(n, chosen)?, Strategy::PermutationGreedy, seed, started)?;
    result.s_star = params.s_star;
    Ok(result)
}

/// Exact `g(n)` with a witness, by branch and bound over lexicographically ordered points.
pub fn exact_g_set(n: i64) -> Result<SearchResult> {
    exact_g_with(n, &Budget::default())
}

pub fn exact_g(n: i64) -> Result<usize> {
    Ok(exact_g_set(n)?.size)
}

pub fn exact_g_with(n: i64, budget: &Budget) -> Result<SearchResult> {
    if n < 1 {
        return Err(Error::Domain(format!("grid side n = {n} must be positive")));
    }
    if n > budget.exact_g_n {
        return Err(Error::budget("exact_g n", n as u128, budget.exact_g_n as u128));
    }
    let started = Instant::now();
    let pts: Vec<GridPoint> = grid_points(n).collect();
    let mut search = BranchAndBound {
        pts: &pts,
        chosen: Vec::new(),
        used: HashSet::new(),
        best: Vec::new(),
        nodes: 0,
    };
    search.run(0);
    let nodes = search.nodes;
    let best = search.best;
    let mut result = SearchResult::new(SlopeSet::new(n, best)?, Strategy::Exact, 0, started)?;
    result.stats.insert("nodes".into(), nodes);
    Ok(result)
}

struct BranchAndBound<'a> {
    pts: &'a [GridPoint],
    chosen: Vec<GridPoint>,
    used: HashSet<Slope>,
    best: Vec<GridPoint>,
    nodes: u64,
}

impl BranchAndBound<'_> {
    fn run(&mut self, start: usize) {
        self.nodes += 1;
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        for i in start..self.pts.len() {
            if self.chosen.len() + (self.pts.len() - i) <= self.best.len() {
                return;
            }
            let p = self.pts[i];
            let new: Vec<Slope> = self.chosen.iter().map(|&q| slope_of(p, q)).collect();
            let clash = new.iter().enumerate().any(|(j, s)| self.used.contains(s) || new[..j].contains(s));
            if clash {
                continue;
            }
            self.used.extend(new.iter().copied());
            self.chosen.push(p);
            self.run(i + 1);
            self.chosen.pop();
            for s in &new {
                self.used.remove(s);
            }
        }
    }
}

/// `g(n)` by testing every subset of `[n]²`; `n ≤ 4`.
pub fn brute_g(n: i64) -> Result<usize> {
    if !(1..=4).contains(&n) {
        return Err(Error::budget("brute_g n", n.max(0) as u128, 4));
    }
    let pts: Vec<GridPoint> = grid_points(n).collect();
    let mut best = 0;
    let mut buf = Vec::with_capacity(pts.len());
    for mask in 0u32..(1u32 << pts.len()) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        buf.clear();
        buf.extend((0..pts.len()).filter(|i| mask >> i & 1 == 1).map(|i| pts[i]));
        if distinct_by_slope_multiset(&buf) {
            best = size;
        }
    }
    Ok(best)
}
