//! Experiment orchestration: a validated [`RunConfig`] is dispatched to the
//! library, producing table rows plus a [`Manifest`] describing the run.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::grid::{
    check_lp_conditions, default_f, global_counts_with, profile_with, CountMethod, DegreeProfile, GridHypergraphParams,
    LpConditionReport, ProfileMode,
};
use crate::lattice::{annulus_visible_count, ceil_cbrt};
use crate::search::{
    best_of, deletion_scale, exact_g_with, greedy_insert, permutation_greedy_with, tune_c, zhang_deletion_with,
    DeletionParams, InsertOrder, SearchResult, SlopeSet, Strategy,
};
use crate::turan::{
    aux_profile_with, blow_up_with, build_free_graph_with, contains_h3r, density_check, AuxProfile, FreeStrategy,
    TuranResult,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Directory used for output files when no explicit path is given.
pub const OUT_DIR_ENV: &str = "HYPERGRID_OUT_DIR";
pub const TUNING_GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
/// Offset separating tuning seeds from reported seeds.
pub const TUNING_SEED_OFFSET: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    Exact,
    Sampled,
}

impl FromStr for ModeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ModeKind::Exact),
            "sampled" => Ok(ModeKind::Sampled),
            other => Err(Error::Domain(format!("unknown profile mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    GridProfile {
        n: i64,
        s_star: Option<i64>,
        mode: Option<ModeKind>,
        samples: usize,
        seed: u64,
    },
    GridCounts {
        n: i64,
        method: CountMethod,
    },
    LpCheck {
        n: i64,
        s_star: Option<i64>,
        f: Option<f64>,
        mode: Option<ModeKind>,
        samples: usize,
        seed: u64,
    },
    SlopeSearch {
        n: i64,
        strategy: Strategy,
        s_star: Option<i64>,
        p: Option<f64>,
        c: Option<f64>,
        seed: u64,
        seeds: u64,
    },
    ExactG {
        n: i64,
    },
    Visible {
        i_min: u32,
        i_max: u32,
    },
    TuranAux {
        r: u32,
        m: Option<u32>,
    },
    TuranSearch {
        r: u32,
        m: Option<u32>,
        strategy: FreeStrategy,
        seed: u64,
        seeds: u64,
    },
    BlowupCheck {
        r: u32,
        m: Option<u32>,
        t: u32,
        seed: u64,
        seeds: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GridProfile { .. } => "grid-profile",
            Command::GridCounts { .. } => "grid-counts",
            Command::LpCheck { .. } => "lp-check",
            Command::SlopeSearch { .. } => "slope-search",
            Command::ExactG { .. } => "exact-g",
            Command::Visible { .. } => "visible",
            Command::TuranAux { .. } => "turan-aux",
            Command::TuranSearch { .. } => "turan-search",
            Command::BlowupCheck { .. } => "blowup-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub budget: Budget,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            budget: Budget::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderVariable {
    N,
    R,
}

impl FromStr for LadderVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(LadderVariable::N),
            "r" => Ok(LadderVariable::R),
            other => Err(Error::Domain(format!("ladder variable must be n or r, got {other:?}"))),
        }
    }
}

impl fmt::Display for LadderVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LadderVariable::N => "n",
            LadderVariable::R => "r",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderSpec {
    pub variable: LadderVariable,
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ladder: Option<LadderSpec>,
    pub version: String,
    pub rng: String,
    pub workers: usize,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub columns: Vec<String>,
    /// Columns whose values depend on timing rather than on the configuration.
    pub volatile_columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Best point set of a slope search, for `--emit-set`.
    #[serde(skip)]
    pub best_set: Option<SlopeSet>,
}

impl Manifest {
    /// Rows with volatile columns blanked; equal across re-runs of one config.
    pub fn data_rows(&self) -> Vec<Vec<String>> {
        let volatile: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .filter(|(_, c)| self.volatile_columns.contains(c))
            .map(|(i, _)| i)
            .collect();
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(i, v)| if volatile.contains(&i) { String::new() } else { v.clone() })
                    .collect()
            })
            .collect()
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Domain(format!("write failed: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Domain(format!("write failed: {e}")))
    }

    /// Rows as an array of column → value objects.
    pub fn rows_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), serde_json::Value::String(v.clone())))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

fn unix_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

fn default_s_star(n: i64, s_star: Option<i64>) -> Result<i64> {
    if n < 1 {
        return Err(Error::Domain(format!("grid side n = {n} must be positive")));
    }
    Ok(s_star.unwrap_or(ceil_cbrt(n as u64) as i64))
}

fn seed_range(seed: u64, seeds: u64) -> Result<Vec<u64>> {
    if seeds == 0 {
        return Err(Error::Domain("--seeds must be at least 1".into()));
    }
    Ok((0..seeds).map(|i| seed.wrapping_add(i)).collect())
}

fn resolve_m(r: u32, m: Option<u32>) -> Result<u32> {
    if r < 2 {
        return Err(Error::Domain(format!("uniformity r = {r} must be at least 2")));
    }
    Ok(m.unwrap_or(r.saturating_mul(r)))
}

fn strings<const K: usize>(cols: [&str; K]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

struct Table {
    columns: Vec<String>,
    volatile: Vec<String>,
    rows: Vec<Vec<String>>,
    best_set: Option<SlopeSet>,
}

impl Table {
    fn new(columns: Vec<String>) -> Self {
        Table {
            columns,
            volatile: Vec::new(),
            rows: Vec::new(),
            best_set: None,
        }
    }
}

fn profile_mode(n: i64, mode: Option<ModeKind>, samples: usize, seed: u64, budget: &Budget) -> Result<ProfileMode> {
    let kind = mode.unwrap_or(if n <= budget.profile_codegree_n {
        ModeKind::Exact
    } else {
        ModeKind::Sampled
    });
    match kind {
        ModeKind::Exact => Ok(ProfileMode::Exact),
        ModeKind::Sampled if samples == 0 => Err(Error::Domain("--samples must be at least 1".into())),
        ModeKind::Sampled => Ok(ProfileMode::Sampled { samples, seed }),
    }
}

fn measure_profile(n: i64, s_star: Option<i64>, mode: &ProfileMode, budget: &Budget) -> Result<DegreeProfile> {
    let params = GridHypergraphParams::new(n, default_s_star(n, s_star)?)?;
    profile_with(&params, mode, budget)
}

fn dispatch(cfg: &RunConfig) -> Result<Table> {
    let budget = &cfg.budget;
    match cfg.command {
        Command::GridProfile {
            n,
            s_star,
            mode,
            samples,
            seed,
        } => {
            let mode = profile_mode(n, Some(mode.unwrap_or(ModeKind::Exact)), samples, seed, budget)?;
            let prof = measure_profile(n, s_star, &mode, budget)?;
            let mut t = Table::new(strings(DegreeProfile::CSV_HEADER));
            t.rows.push(prof.csv_fields());
            Ok(t)
        }
        Command::GridCounts { n, method } => {
            let c = global_counts_with(n, method, budget)?;
            let mut t = Table::new(strings(["n", "method", "collinear_triples", "trapezoids"]));
            t.rows.push(vec![
                n.to_string(),
                method.to_string(),
                c.collinear_triples.to_string(),
                c.trapezoids.to_string(),
            ]);
            Ok(t)
        }
        Command::LpCheck {
            n,
            s_star,
            f,
            mode,
            samples,
            seed,
        } => {
            let mode = profile_mode(n, mode, samples, seed, budget)?;
            let prof = measure_profile(n, s_star, &mode, budget)?;
            let report = check_lp_conditions(&prof, f.unwrap_or_else(|| default_f(n)))?;
            let mut t = Table::new(strings(LpConditionReport::CSV_HEADER));
            t.rows.push(report.csv_fields());
            Ok(t)
        }
        Command::SlopeSearch {
            n,
            strategy,
            s_star,
            p,
            c,
            seed,
            seeds,
        } => slope_search(n, strategy, s_star, p, c, &seed_range(seed, seeds)?, budget),
        Command::ExactG { n } => {
            let res = exact_g_with(n, budget)?;
            let mut t = Table::new(strings(["n", "g", "nodes"]));
            t.rows.push(vec![n.to_string(), res.size.to_string(), res.stats["nodes"].to_string()]);
            t.best_set = Some(res.set);
            Ok(t)
        }
        Command::Visible { i_min, i_max } => {
            if i_min < 1 || i_min > i_max {
                return Err(Error::Domain(format!("need 1 ≤ i-min ≤ i-max, got {i_min}..{i_max}")));
            }
            let mut t = Table::new(strings(["i", "visible_count", "total_count", "observation_holds"]));
            for i in i_min..=i_max {
                let a = annulus_visible_count(i)?;
                t.rows.push(vec![
                    a.i.to_string(),
                    a.visible_count.to_string(),
                    a.total_count.to_string(),
                    a.observation_holds().to_string(),
                ]);
            }
            Ok(t)
        }
        Command::TuranAux { r, m } => {
            let m = resolve_m(r, m)?;
            if m <= r {
                return Err(Error::Domain(format!("need m ≥ r + 1, got m = {m}, r = {r}")));
            }
            let prof: AuxProfile = aux_profile_with(r, m, budget)?;
            let mut t = Table::new(strings(AuxProfile::CSV_HEADER));
            t.rows.push(prof.csv_fields());
            Ok(t)
        }
        Command::TuranSearch {
            r,
            m,
            strategy,
            seed,
            seeds,
        } => {
            let m = resolve_m(r, m)?;
            let seeds = seed_range(seed, seeds)?;
            let results: Vec<TuranResult> = seeds
                .par_iter()
                .map(|&s| TuranResult::run(r, m, with_seed(strategy, s), budget))
                .collect::<Result<_>>()?;
            let mut t = Table::new(strings(TuranResult::CSV_HEADER));
            t.rows = results.iter().map(TuranResult::csv_fields).collect();
            Ok(t)
        }
        Command::BlowupCheck { r, m, t: factor, seed, seeds } => {
            let m = resolve_m(r, m)?;
            if factor == 0 {
                return Err(Error::Domain("blow-up factor t must be at least 1".into()));
            }
            let seeds = seed_range(seed, seeds)?;
            let rows: Vec<Vec<String>> = seeds
                .par_iter()
                .map(|&s| -> Result<Vec<String>> {
                    let g = build_free_graph_with(r, m, FreeStrategy::PermutationGreedy { seed: s }, budget)?;
                    let b = blow_up_with(&g, factor, budget)?;
                    if contains_h3r(&b) {
                        return Err(Error::Verification(format!("blow-up of seed {s} contains H³ʳ")));
                    }
                    let holds = match density_check(&g, factor) {
                        Ok(d) => d.holds.to_string(),
                        Err(Error::Precondition(_)) => "n/a".to_string(),
                        Err(e) => return Err(e),
                    };
                    Ok(vec![
                        r.to_string(),
                        m.to_string(),
                        factor.to_string(),
                        g.edge_count().to_string(),
                        b.edge_count().to_string(),
                        holds,
                    ])
                })
                .collect::<Result<_>>()?;
            let mut t = Table::new(strings(["r", "m", "t", "edges_before", "edges_after", "density_holds"]));
            t.rows = rows;
            Ok(t)
        }
    }
}

fn with_seed(strategy: FreeStrategy, seed: u64) -> FreeStrategy {
    match strategy {
        FreeStrategy::PermutationGreedy { .. } => FreeStrategy::PermutationGreedy { seed },
        FreeStrategy::Deletion { p, .. } => FreeStrategy::Deletion { p, seed },
    }
}

fn slope_search(
    n: i64,
    strategy: Strategy,
    s_star: Option<i64>,
    p: Option<f64>,
    c: Option<f64>,
    seeds: &[u64],
    budget: &Budget,
) -> Result<Table> {
    let results: Vec<SearchResult> = match strategy {
        Strategy::Deletion => {
            let c = match (p, c) {
                (None, None) => {
                    let tuning = (0..seeds.len() as u64).map(|i| TUNING_SEED_OFFSET + i);
                    Some(tune_c(n, &TUNING_GRID, tuning)?.0)
                }
                _ => c,
            };
            seeds
                .par_iter()
                .map(|&s| {
                    let params = match (p, c) {
                        (Some(p), _) => DeletionParams::new(n, p, s)?,
                        (None, c) => DeletionParams::from_c(n, c.expect("resolved above"), s)?,
                    };
                    zhang_deletion_with(&params, budget)
                })
                .collect::<Result<_>>()?
        }
        Strategy::GreedyRandom => seeds
            .par_iter()
            .map(|&s| greedy_insert(n, InsertOrder::Random(s)))
            .collect::<Result<_>>()?,
        Strategy::GreedyDiagonal => vec![greedy_insert(n, InsertOrder::DiagonalSweep)?],
        Strategy::PermutationGreedy => {
            let params = GridHypergraphParams::new(n, default_s_star(n, s_star)?)?;
            seeds
                .par_iter()
                .map(|&s| permutation_greedy_with(&params, s, budget))
                .collect::<Result<_>>()?
        }
        Strategy::Exact => vec![exact_g_with(n, budget)?],
    };
    let mut t = Table::new(strings(SearchResult::CSV_HEADER));
    t.volatile.push("elapsed_ms".into());
    t.rows = results.iter().map(SearchResult::csv_fields).collect();
    t.best_set = best_of(results).map(|r| r.set);
    Ok(t)
}

/// Runs one configuration.
pub fn run(cfg: &RunConfig) -> Result<Manifest> {
    let started = unix_ms();
    let table = dispatch(cfg)?;
    Ok(Manifest {
        config: cfg.clone(),
        ladder: None,
        version: VERSION.to_string(),
        rng: crate::rng::RNG_ALGORITHM.to_string(),
        workers: rayon::current_num_threads(),
        started_unix_ms: started,
        finished_unix_ms: unix_ms(),
        columns: table.columns,
        volatile_columns: table.volatile,
        rows: table.rows,
        best_set: table.best_set,
    })
}

fn set_variable(command: &Command, variable: LadderVariable, value: i64) -> Result<Command> {
    let mut cmd = command.clone();
    let bad = || Error::Domain(format!("{} has no ladder variable {variable}", command.name()));
    match (variable, &mut cmd) {
        (
            LadderVariable::N,
            Command::GridProfile { n, .. }
            | Command::GridCounts { n, .. }
            | Command::LpCheck { n, .. }
            | Command::SlopeSearch { n, .. }
            | Command::ExactG { n },
        ) => *n = value,
        (
            LadderVariable::R,
            Command::TuranAux { r, .. } | Command::TuranSearch { r, .. } | Command::BlowupCheck { r, .. },
        ) => {
            *r = u32::try_from(value).map_err(|_| Error::Domain(format!("r = {value} out of range")))?;
        }
        _ => return Err(bad()),
    }
    Ok(cmd)
}

/// Growth-rate columns appended to ladder rows.
fn ratio_columns(command: &Command) -> Vec<String> {
    match command {
        Command::GridProfile { .. } => strings(["ratio_2", "ratio_3", "ratio_4"]),
        Command::GridCounts { .. } => strings(["ratio_c", "ratio_t"]),
        Command::SlopeSearch { .. } => strings(["ratio_size"]),
        Command::TuranAux { .. } => strings(["formula_matches"]),
        Command::TuranSearch { .. } => strings(["density_times_r2"]),
        _ => Vec::new(),
    }
}

fn ratios(command: &Command, columns: &[String], row: &[String]) -> Vec<String> {
    let get = |name: &str| -> f64 {
        columns
            .iter()
            .position(|c| c == name)
            .and_then(|i| row[i].parse().ok())
            .unwrap_or(f64::NAN)
    };
    let fmt = |x: f64| format!("{x:.6}");
    match command {
        Command::GridProfile { .. } => {
            let (n, s) = (get("n"), get("s_star"));
            let ln = n.ln();
            vec![
                fmt(get("delta_2") / (n * s)),
                fmt(get("delta_3") / (n * n * ln)),
                fmt(get("delta_4") / (n.powi(4) * ln)),
            ]
        }
        Command::GridCounts { .. } => {
            let n = get("n");
            let ln = n.ln();
            vec![
                fmt(get("collinear_triples") / (n.powi(4) * ln)),
                fmt(get("trapezoids") / (n.powi(6) * ln)),
            ]
        }
        Command::SlopeSearch { .. } => {
            let n = get("n");
            vec![fmt(get("size") / deletion_scale(n as i64))]
        }
        Command::TuranAux { .. } => vec![(row[2] == row[3]).to_string()],
        Command::TuranSearch { .. } => {
            let r = get("r");
            vec![fmt(get("density") * r * r)]
        }
        _ => Vec::new(),
    }
}

/// Runs `cfg` once per ladder value and concatenates the rows.
pub fn ladder(cfg: &RunConfig, variable: LadderVariable, values: &[i64]) -> Result<Manifest> {
    if values.is_empty() {
        return Err(Error::Domain("ladder needs at least one value".into()));
    }
    let started = unix_ms();
    let extra = ratio_columns(&cfg.command);
    let mut columns = Vec::new();
    let mut volatile = Vec::new();
    let mut rows = Vec::new();
    for &v in values {
        let step = RunConfig {
            command: set_variable(&cfg.command, variable, v)?,
            budget: cfg.budget.clone(),
        };
        let table = dispatch(&step)?;
        for row in table.rows {
            let mut row2 = row.clone();
            row2.extend(ratios(&step.command, &table.columns, &row));
            rows.push(row2);
        }
        columns = table.columns;
        volatile = table.volatile;
    }
    columns.extend(extra);
    Ok(Manifest {
        config: cfg.clone(),
        ladder: Some(LadderSpec {
            variable,
            values: values.to_vec(),
        }),
        version: VERSION.to_string(),
        rng: crate::rng::RNG_ALGORITHM.to_string(),
        workers: rayon::current_num_threads(),
        started_unix_ms: started,
        finished_unix_ms: unix_ms(),
        columns,
        volatile_columns: volatile,
        rows,
        best_set: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Domain(format!("unknown format {other:?}"))),
        }
    }
}

/// Output file for the rows: `out` if given, else `$HYPERGRID_OUT_DIR/<command>.<ext>`, else stdout.
pub fn output_path(out: Option<&Path>, command: &str, format: Format) -> Option<PathBuf> {
    if let Some(p) = out {
        return Some(p.to_path_buf());
    }
    let dir = std::env::var_os(OUT_DIR_ENV)?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    Some(Path::new(&dir).join(format!("{command}.{ext}")))
}

/// `rows.csv` → `rows.csv.manifest.json`.
pub fn manifest_path(data: &Path) -> PathBuf {
    let mut name = data.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    data.with_file_name(name)
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Domain(format!("cannot write {}: {e}", path.display()))
}

/// Writes rows to `path` (or stdout) and the manifest next to them.
pub fn write_outputs(manifest: &Manifest, path: Option<&Path>, format: Format) -> Result<()> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => manifest.write_csv(&mut buf)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &manifest.rows_json()).expect("in-memory write");
            buf.push(b'\n');
        }
    }
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
            }
            fs::write(p, &buf).map_err(|e| io_err(p, e))?;
            let mp = manifest_path(p);
            let json = serde_json::to_vec_pretty(manifest).expect("manifest serializes");
            fs::write(&mp, json).map_err(|e| io_err(&mp, e))?;
        }
        None => std::io::stdout()
            .write_all(&buf)
            .map_err(|e| io_err(Path::new("<stdout>"), e))?,
    }
    Ok(())
}

pub fn write_set(set: &SlopeSet, path: &Path) -> Result<()> {
    let json = serde_json::to_vec_pretty(set).expect("point set serializes");
    fs::write(path, json).map_err(|e| io_err(path, e))
}
