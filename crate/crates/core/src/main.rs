use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hypergrid::grid::CountMethod;
use hypergrid::harness::{self, Command, Format, LadderVariable, ModeKind, RunConfig};
use hypergrid::search::Strategy;
use hypergrid::turan::FreeStrategy;
use hypergrid::{Budget, Error};

const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "hypergrid", version, about = "Distinct-slope grid hypergraphs and H³ʳ-free r-graphs")]
struct Cli {
    /// Output format for the data rows.
    #[arg(long, global = true, default_value = "csv", value_parser = parse::<Format>)]
    format: Format,
    /// Data file; the manifest is written next to it. Defaults to $HYPERGRID_OUT_DIR/<command>.<ext>, else stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the best point set of a slope search as JSON.
    #[arg(long, global = true)]
    emit_set: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Operation ceiling for sample enumeration.
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[command(subcommand)]
    command: Cmd,
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Clone)]
struct Seeds {
    /// First seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of consecutive seeds.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
}

#[derive(Args, Clone)]
struct ProfileArgs {
    #[arg(long)]
    n: Option<i64>,
    /// Height threshold; defaults to ⌈n^{1/3}⌉.
    #[arg(long)]
    s_star: Option<i64>,
    #[arg(long, value_parser = parse::<ModeKind>)]
    mode: Option<ModeKind>,
    /// Random vertices, pairs and triples in sampled mode.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Clone)]
enum Cmd {
    #[command(flatten)]
    Run(RunCmd),
    /// Repeat a command over values of n or r.
    Ladder {
        #[arg(long, value_parser = parse::<LadderVariable>)]
        variable: LadderVariable,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<i64>,
        #[command(subcommand)]
        inner: RunCmd,
    },
}

#[derive(Subcommand, Clone)]
enum RunCmd {
    /// Degree and codegree maxima of the grid hypergraph.
    GridProfile(ProfileArgs),
    /// Collinear triples and trapezoids in [n]².
    GridCounts {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, default_value = "slope_class", value_parser = parse::<CountMethod>)]
        method: CountMethod,
    },
    /// Codegree conditions of the sparse-coloring theorem on a measured profile.
    LpCheck {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Defaults to (ln n)^{1/2}.
        #[arg(long)]
        f: Option<f64>,
    },
    /// Distinct-slope subset search.
    SlopeSearch {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, default_value = "deletion", value_parser = parse::<Strategy>)]
        strategy: Strategy,
        #[arg(long)]
        s_star: Option<i64>,
        /// Sampling probability for deletion.
        #[arg(long, conflicts_with = "c")]
        p: Option<f64>,
        /// Probability scale for deletion; tuned over a grid when neither p nor c is given.
        #[arg(long)]
        c: Option<f64>,
        #[command(flatten)]
        seeds: Seeds,
    },
    /// Exact size of the largest distinct-slope subset of [n]².
    ExactG {
        #[arg(long)]
        n: Option<i64>,
    },
    /// Points of each dyadic annulus visible from (1, 1).
    Visible {
        #[arg(long, default_value_t = 1)]
        i_min: u32,
        #[arg(long)]
        i_max: u32,
    },
    /// Degree and codegree of the H³ʳ-copy 3-graph by enumeration.
    TuranAux {
        #[arg(long)]
        r: Option<u32>,
        /// Ground set size; defaults to r².
        #[arg(long)]
        m: Option<u32>,
    },
    /// H³ʳ-free r-graphs on [m].
    TuranSearch {
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        /// `greedy` or `deletion:P`.
        #[arg(long, default_value = "greedy", value_parser = parse::<FreeStrategy>)]
        strategy: FreeStrategy,
        #[command(flatten)]
        seeds: Seeds,
    },
    /// Blow-ups of greedy H³ʳ-free graphs: freeness, edge count, density.
    BlowupCheck {
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        t: u32,
        #[command(flatten)]
        seeds: Seeds,
    },
}

fn required<T>(v: Option<T>, flag: &str, placeholder: Option<T>) -> Result<T, Error> {
    v.or(placeholder)
        .ok_or_else(|| Error::Domain(format!("missing required flag --{flag}")))
}

/// `placeholder` fills the ladder variable so it need not be passed twice.
fn to_command(cmd: &RunCmd, ladder: Option<LadderVariable>) -> Result<Command, Error> {
    let n0 = (ladder == Some(LadderVariable::N)).then_some(0);
    let r0 = (ladder == Some(LadderVariable::R)).then_some(2);
    Ok(match cmd.clone() {
        RunCmd::GridProfile(a) => Command::GridProfile {
            n: required(a.n, "n", n0)?,
            s_star: a.s_star,
            mode: a.mode,
            samples: a.samples,
            seed: a.seed,
        },
        RunCmd::GridCounts { n, method } => Command::GridCounts {
            n: required(n, "n", n0)?,
            method,
        },
        RunCmd::LpCheck { profile: a, f } => Command::LpCheck {
            n: required(a.n, "n", n0)?,
            s_star: a.s_star,
            f,
            mode: a.mode,
            samples: a.samples,
            seed: a.seed,
        },
        RunCmd::SlopeSearch {
            n,
            strategy,
            s_star,
            p,
            c,
            seeds,
        } => Command::SlopeSearch {
            n: required(n, "n", n0)?,
            strategy,
            s_star,
            p,
            c,
            seed: seeds.seed,
            seeds: seeds.seeds,
        },
        RunCmd::ExactG { n } => Command::ExactG {
            n: required(n, "n", n0)?,
        },
        RunCmd::Visible { i_min, i_max } => Command::Visible { i_min, i_max },
        RunCmd::TuranAux { r, m } => Command::TuranAux {
            r: required(r, "r", r0)?,
            m,
        },
        RunCmd::TuranSearch { r, m, strategy, seeds } => Command::TuranSearch {
            r: required(r, "r", r0)?,
            m,
            strategy,
            seed: seeds.seed,
            seeds: seeds.seeds,
        },
        RunCmd::BlowupCheck { r, m, t, seeds } => Command::BlowupCheck {
            r: required(r, "r", r0)?,
            m,
            t,
            seed: seeds.seed,
            seeds: seeds.seeds,
        },
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Verification(_) => EXIT_VERIFY,
        Error::Degenerate(_) | Error::Domain(_) | Error::Precondition(_) => EXIT_USAGE,
    }
}

fn execute(cli: &Cli) -> Result<(), (String, Error)> {
    let (command, ladder) = match &cli.command {
        Cmd::Ladder {
            variable,
            values,
            inner,
        } => {
            let c = to_command(inner, Some(*variable)).map_err(|e| ("ladder".to_string(), e))?;
            (c, Some((*variable, values.clone())))
        }
        Cmd::Run(other) => (to_command(other, None).map_err(|e| ("hypergrid".to_string(), e))?, None),
    };
    let name = command.name().to_string();
    let ctx = |e| (name.clone(), e);
    let mut budget = Budget::default();
    if let Some(ops) = cli.budget {
        budget.sample_ops = ops;
    }
    let cfg = RunConfig { command, budget };
    let manifest = match ladder {
        Some((variable, values)) => harness::ladder(&cfg, variable, &values),
        None => harness::run(&cfg),
    }
    .map_err(ctx)?;
    let path = harness::output_path(cli.out.as_deref(), &name, cli.format);
    harness::write_outputs(&manifest, path.as_deref(), cli.format).map_err(ctx)?;
    if let Some(set_path) = &cli.emit_set {
        match &manifest.best_set {
            Some(set) => harness::write_set(set, set_path).map_err(ctx)?,
            None => return Err(ctx(Error::Domain("--emit-set needs slope-search or exact-g".into()))),
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((ctx, e)) => {
            eprintln!("{ctx}: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
