use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use treesplit::experiments::{
    bounds_table, run_heatmap, run_histogram, run_walk_bounds, write_walk_csv, HeatmapConfig, HistogramConfig,
    WalkBoundsConfig,
};
use treesplit::{
    build_grid, compatibility_experiment, vertical_strips, LatticeKind, Orientation, PerfectSampler, PlaneGraphD,
    RngStream, UpDownSampler,
};

#[derive(Parser, Debug)]
#[command(name = "treesplit", version, about = "Balanced splits of uniform spanning trees on grids and lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-edge frequency of being the balanced split edge (vertical edges).
    Heatmap(HeatmapArgs),
    /// Component sizes after removing one edge from a uniform spanning tree.
    Histogram(HistogramArgs),
    /// Closed-form lower bounds for a grid.
    Bounds(BoundsArgs),
    /// Balanced partitions from the spanning tree distribution, as JSON lines.
    Sample(SampleArgs),
    /// First-exit probabilities of random walks from boxes.
    WalkBounds(WalkArgs),
    /// Compatibility of lattice-region trees with a drawing's faces.
    Lattice(LatticeArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "TREESPLIT_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Output file; stdout when omitted. Metadata goes to `<out>.meta.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct HeatmapArgs {
    #[arg(long, default_value_t = 10)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    #[arg(long)]
    svg_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Orient {
    V,
    H,
}

#[derive(Args, Debug, Serialize)]
struct HistogramArgs {
    #[arg(long, default_value_t = 10)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Column of the edge's lower-left endpoint; defaults to the middle.
    #[arg(long)]
    col: Option<usize>,
    /// Row of the edge's lower-left endpoint; defaults to the middle.
    #[arg(long)]
    row: Option<usize>,
    #[arg(long, value_enum, default_value = "v")]
    orientation: Orient,
    #[arg(long, default_value_t = 1)]
    bin_size: usize,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long, default_value_t = 10)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Also write the table as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Exact,
    Updown,
}

#[derive(Args, Debug, Serialize)]
struct SampleArgs {
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, default_value_t = treesplit::samplers::DEFAULT_MIXING_MULTIPLIER)]
    mixing_multiplier: f64,
    /// Number of partitions to emit.
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct WalkArgs {
    /// Box width.
    #[arg(long, default_value_t = 8)]
    m: usize,
    /// Box height.
    #[arg(long, default_value_t = 7)]
    n: usize,
    /// Start column in `1..=m`; defaults to the middle.
    #[arg(long)]
    i0: Option<usize>,
    #[arg(long, default_value_t = 4)]
    j0: usize,
    /// Half-width of the square.
    #[arg(long, default_value_t = 5)]
    ell: usize,
    #[arg(long, default_value_t = 4)]
    rect_m: usize,
    #[arg(long, default_value_t = 12)]
    rect_n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct LatticeArgs {
    #[arg(long, value_enum, default_value = "square")]
    lattice: Lattice,
    /// Lattice refinements, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
    n: Vec<usize>,
    /// Number of vertical strips of the unit square; ignored with --drawing.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Drawing as JSON; the unit square in `k` strips when omitted.
    #[arg(long)]
    drawing: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Required closeness of the boundary cycle; defaults to 2/n.
    #[arg(long)]
    delta: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Lattice {
    Square,
    Triangular,
    Hexagonal,
}

impl From<Lattice> for LatticeKind {
    fn from(l: Lattice) -> Self {
        match l {
            Lattice::Square => LatticeKind::Square,
            Lattice::Triangular => LatticeKind::Triangular,
            Lattice::Hexagonal => LatticeKind::Hexagonal,
        }
    }
}

fn check_common(c: &Common) -> Result<()> {
    if c.trials == 0 {
        bail!("--trials must be at least 1");
    }
    if c.workers == 0 {
        bail!("--workers must be at least 1");
    }
    Ok(())
}

fn open(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes `<out>.meta.json` echoing the command and its configuration.
fn write_meta(out: &Option<PathBuf>, command: &str, config: &impl Serialize, extra: Value) -> Result<()> {
    let Some(out) = out else { return Ok(()) };
    let meta = json!({
        "command": command,
        "config": config,
        "library": "treesplit",
        "version": treesplit::VERSION,
        "results": extra,
    });
    let path = meta_path(out);
    std::fs::write(&path, serde_json::to_string_pretty(&meta)? + "\n")
        .with_context(|| format!("writing {}", path.display()))
}

fn heatmap(a: HeatmapArgs) -> Result<()> {
    check_common(&a.common)?;
    if a.k != 2 {
        bail!("heatmap supports k = 2 only");
    }
    let start = Instant::now();
    let cfg = HeatmapConfig { m: a.m, n: a.n, trials: a.common.trials, seed: a.common.seed, workers: a.common.workers };
    let h = run_heatmap(&cfg)?;
    let mut w = open(&a.common.out)?;
    h.write_csv(&mut w)?;
    w.flush()?;
    if let Some(p) = &a.svg_out {
        std::fs::write(p, h.to_svg()).with_context(|| format!("writing {}", p.display()))?;
    }
    let (lo, hi) =
        h.cells.iter().fold((u64::MAX, 0), |(lo, hi), c| (lo.min(c.estimate.successes), hi.max(c.estimate.successes)));
    write_meta(
        &a.common.out,
        "heatmap",
        &a,
        json!({ "classes": h.classes.len(), "min_successes": lo, "max_successes": hi, "wall_clock_secs": start.elapsed().as_secs_f64() }),
    )
}

fn histogram(a: HistogramArgs) -> Result<()> {
    check_common(&a.common)?;
    if a.k != 2 {
        bail!("histogram supports k = 2 only");
    }
    let start = Instant::now();
    let orientation = match a.orientation {
        Orient::V => Orientation::Vertical,
        Orient::H => Orientation::Horizontal,
    };
    let cfg = HistogramConfig {
        m: a.m,
        n: a.n,
        col: a.col.unwrap_or(a.m.saturating_sub(1) / 2),
        row: a.row.unwrap_or(a.n.saturating_sub(1) / 2),
        orientation,
        trials: a.common.trials,
        seed: a.common.seed,
        workers: a.common.workers,
        bin_size: a.bin_size,
    };
    let h = run_histogram(&cfg)?;
    let mut w = open(&a.common.out)?;
    h.write_csv(a.bin_size, &mut w)?;
    w.flush()?;
    write_meta(
        &a.common.out,
        "histogram",
        &a,
        json!({
            "edge": { "col": cfg.col, "row": cfg.row, "orientation": orientation.as_str() },
            "mass": h.mass(),
            "reflected_tv": h.reflected_tv(),
            "balance_dominates_10_neighbours": h.balance_dominates(5),
            "wall_clock_secs": start.elapsed().as_secs_f64(),
        }),
    )
}

fn bounds(a: BoundsArgs) -> Result<()> {
    let t = bounds_table(a.m, a.n, a.k)?;
    print!("{t}");
    if let Some(p) = &a.out {
        std::fs::write(p, serde_json::to_string_pretty(&t)? + "\n")?;
        write_meta(&a.out, "bounds", &a, Value::Null)?;
    }
    Ok(())
}

fn sample(a: SampleArgs) -> Result<()> {
    if a.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let start = Instant::now();
    let g = build_grid(a.m, a.n)?;
    let mut w = open(&a.out)?;
    let mut total = treesplit::SamplerReport { seed: a.seed, ..Default::default() };
    let emit = |i: u64, p: &treesplit::Partition, w: &mut dyn Write| -> Result<()> {
        let line = json!({ "sample": i, "classes": p.classes(), "cut_edges": p.crossing_edges(g.graph()) });
        writeln!(w, "{line}")?;
        Ok(())
    };
    match a.mode {
        Mode::Exact => {
            let sampler = PerfectSampler::new(&g, a.k)?;
            for i in 0..a.trials {
                let (p, report) = sampler.sample(&mut RngStream::new(a.seed, i))?;
                emit(i, &p, &mut w)?;
                total.merge(&report);
            }
        }
        Mode::Updown => {
            let mut rng = RngStream::new(a.seed, 0);
            let mut sampler = UpDownSampler::new(g.graph(), a.k, a.mixing_multiplier, &mut rng)?;
            for i in 0..a.trials {
                let (p, report) = sampler.sample(&mut rng)?;
                emit(i, &p, &mut w)?;
                total.merge(&report);
            }
        }
    }
    total.seed = a.seed;
    // Timing is left out of the stream so fixed seeds give identical bytes.
    let mut footer = serde_json::to_value(&total)?;
    if let Some(obj) = footer.as_object_mut() {
        obj.remove("wall_clock_secs");
        obj.insert(
            "splittable_fraction".into(),
            json!(total.splittable_rounds() as f64 / total.rounds_attempted.max(1) as f64),
        );
    }
    writeln!(w, "{}", json!({ "report": footer }))?;
    w.flush()?;
    write_meta(&a.out, "sample", &a, json!({ "wall_clock_secs": start.elapsed().as_secs_f64() }))
}

fn walk_bounds(a: WalkArgs) -> Result<()> {
    check_common(&a.common)?;
    let cfg = WalkBoundsConfig {
        box_m: a.m,
        box_n: a.n,
        i0: a.i0.unwrap_or(a.m.div_ceil(2)),
        j0: a.j0,
        ell: a.ell,
        rect_m: a.rect_m,
        rect_n: a.rect_n,
        trials: a.common.trials,
        seed: a.common.seed,
        workers: a.common.workers,
    };
    let rows = run_walk_bounds(&cfg)?;
    let mut w = open(&a.common.out)?;
    write_walk_csv(&rows, &mut w)?;
    w.flush()?;
    write_meta(&a.common.out, "walk-bounds", &a, serde_json::to_value(&rows)?)
}

fn lattice(a: LatticeArgs) -> Result<()> {
    check_common(&a.common)?;
    let d = match &a.drawing {
        Some(p) => {
            PlaneGraphD::parse(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?
        }
        None => vertical_strips(a.k, 1.0, 1.0)?,
    };
    let mut w = open(&a.common.out)?;
    writeln!(w, "lattice,n,epsilon,vertices,boundary_distance,successes,trials,frequency,ci_lo,ci_hi")?;
    let mut runs = Vec::new();
    for &n in &a.n {
        let delta = a.delta.unwrap_or(2.0 / n as f64);
        let r = compatibility_experiment(
            a.lattice.into(),
            n,
            &d,
            delta,
            a.epsilon,
            a.common.trials,
            a.common.seed,
            a.common.workers,
        )?;
        let e = &r.estimate;
        writeln!(
            w,
            "{},{},{},{},{:.6e},{},{},{:.6},{:.6},{:.6}",
            r.kind,
            r.n,
            r.epsilon,
            r.vertices,
            r.boundary_distance,
            e.successes,
            e.trials,
            e.frequency,
            e.ci_lo,
            e.ci_hi
        )?;
        runs.push(r);
    }
    w.flush()?;
    write_meta(&a.common.out, "lattice", &a, serde_json::to_value(&runs)?)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Heatmap(a) => heatmap(a),
        Command::Histogram(a) => histogram(a),
        Command::Bounds(a) => bounds(a),
        Command::Sample(a) => sample(a),
        Command::WalkBounds(a) => walk_bounds(a),
        Command::Lattice(a) => lattice(a),
    }
}
