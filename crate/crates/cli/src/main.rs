//! `lgh`: labeled Gromov–Hausdorff computations on space files.
//!
//! Exit status is 0 on success, 1 when a checked property fails and 2 on
//! usage, parse or capacity errors.

mod table;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lgh_core::approximation::{approximation_implies_lgh, check_approximation};
use lgh_core::correspondence::{
    lgh_exact, lgh_lower_bound, lgh_upper_bound_heuristic, HeuristicOptions, DEFAULT_EXACT_CAP,
};
use lgh_core::generate::{
    gen_graph_space, gen_projection_family, gen_random_space, Boundary, EdgeWeights, GraphKind,
    RandomMethod,
};
use lgh_core::gluing::{dyadic_chain, Chain};
use lgh_core::io::{
    parse_raw, read_manifest, read_space, serialize_manifest, serialize_raw, serialize_space,
    write_space, Manifest,
};
use lgh_core::isometry::{find_l_isometry, IsometryOutcome, DEFAULT_ISOMETRY_CAP};
use lgh_core::precompact::{
    cauchy_subsequence_probe, equicontinuity_modulus, utb_report, Collection,
};
use lgh_core::space::{
    check_labeled_net, greedy_labeled_net, validate_space, CoverMode, LabeledMetricSpace,
    DEFAULT_TOL,
};
use lgh_core::traveltime::{
    embedding_distortion, reconstruct_from_data, stability_experiment, travel_time_data,
    TravelTimeData,
};
use lgh_core::Error;

use table::Table;

#[derive(Parser)]
#[command(
    name = "lgh",
    version,
    about = "Labeled Gromov-Hausdorff distances on finite spaces"
)]
struct Cli {
    /// Numerical tolerance.
    #[arg(long, global = true, env = "LGH_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Size cap for exhaustive searches (defaults depend on the command).
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Seed for heuristics and generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check space files for the metric and labeling axioms.
    Validate { files: Vec<PathBuf> },
    /// Labeled distance between two spaces (exact by default).
    Lgh {
        #[command(flatten)]
        mode: LghMode,
        a: PathBuf,
        b: PathBuf,
    },
    /// Search for a label-preserving isometry.
    Isom { a: PathBuf, b: PathBuf },
    /// Greedy labeled net and its verdict.
    Net {
        #[arg(long)]
        eps: f64,
        a: PathBuf,
    },
    /// Check an approximation witness.
    Approx {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        strong: bool,
        a: PathBuf,
        b: PathBuf,
        witness: PathBuf,
    },
    /// Glue a chain manifest into one space file.
    Glue {
        manifest: PathBuf,
        /// Merge points at distance zero.
        #[arg(long)]
        quotient: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tail bounds of a chain manifest against its last level.
    Limit {
        manifest: PathBuf,
        /// Write the proxy space here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Precompactness diagnostics for a sequence manifest.
    Precompact {
        manifest: PathBuf,
        #[command(flatten)]
        mode: PrecompactMode,
    },
    /// Travel time data and the related checks.
    Traveltime {
        #[command(flatten)]
        mode: TravelMode,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        what: Gen,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct LghMode {
    #[arg(long)]
    exact: bool,
    /// Lower bound and heuristic upper bound.
    #[arg(long)]
    bounds: bool,
    #[arg(long)]
    heuristic: bool,
}

#[derive(Args)]
#[group(multiple = false)]
struct PrecompactMode {
    /// Equicontinuity modulus at this label distance.
    #[arg(long)]
    delta: Option<f64>,
    /// Cluster the sequence at this resolution.
    #[arg(long)]
    probe: Option<f64>,
    /// Covering report at these radii (default 1, 0.5, 0.25).
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TravelMode {
    /// Print the travel time rows of a space.
    #[arg(long)]
    data: bool,
    /// Embedding distortion of a space.
    #[arg(long)]
    check: bool,
    /// Rebuild a space from a travel time CSV.
    #[arg(long)]
    reconstruct: bool,
    /// Stability table over a sequence manifest.
    #[arg(long)]
    stability: bool,
}

#[derive(Args)]
struct GraphArgs {
    /// unit, const:C or jitter:A (seeded by --seed).
    #[arg(long, default_value = "unit", value_parser = parse_weights)]
    weights: WeightSpec,
    /// endpoints, leaves, or a comma-separated vertex list such as 0,3.
    #[arg(long, default_value = "leaves", value_parser = parse_boundary)]
    boundary: Boundary,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Gen {
    Path {
        n: usize,
        #[command(flatten)]
        g: GraphArgs,
    },
    Cycle {
        n: usize,
        #[command(flatten)]
        g: GraphArgs,
    },
    Star {
        leaves: usize,
        #[command(flatten)]
        g: GraphArgs,
    },
    Tree {
        branching: usize,
        depth: usize,
        #[command(flatten)]
        g: GraphArgs,
    },
    Grid {
        rows: usize,
        cols: usize,
        #[command(flatten)]
        g: GraphArgs,
    },
    /// Seeded random space.
    Random {
        n: usize,
        /// Points in the unit cube of this dimension.
        #[arg(long, conflicts_with = "graph")]
        euclidean: Option<usize>,
        /// Random graph with this extra-edge probability.
        #[arg(long)]
        graph: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Coordinate projection family, written with a manifest.
    Projection {
        k: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Dyadic grids on [0, 1] with their links, written with a manifest.
    Dyadic {
        first: u32,
        last: u32,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy)]
enum WeightSpec {
    Unit,
    Constant(f64),
    Jitter(f64),
}

fn parse_weights(s: &str) -> Result<WeightSpec, String> {
    let num = |v: &str| {
        v.parse::<f64>()
            .map_err(|e| format!("bad number '{v}': {e}"))
    };
    match s.split_once(':') {
        None if s == "unit" => Ok(WeightSpec::Unit),
        Some(("const", v)) => Ok(WeightSpec::Constant(num(v)?)),
        Some(("jitter", v)) => Ok(WeightSpec::Jitter(num(v)?)),
        _ => Err(format!("expected unit, const:C or jitter:A, got '{s}'")),
    }
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    match s {
        "endpoints" => Ok(Boundary::Endpoints),
        "leaves" => Ok(Boundary::Leaves),
        "" | "none" => Ok(Boundary::Explicit(Vec::new())),
        _ => s
            .split(',')
            .map(|v| {
                let v = v.trim();
                v.strip_prefix('v')
                    .unwrap_or(v)
                    .parse::<usize>()
                    .map_err(|_| format!("bad vertex '{v}'"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Boundary::Explicit),
    }
}

struct Ctx {
    tol: f64,
    cap: Option<usize>,
    seed: u64,
    format: Format,
}

impl Ctx {
    fn exact_cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_EXACT_CAP)
    }

    fn heuristic(&self) -> HeuristicOptions {
        HeuristicOptions {
            seed: self.seed,
            ..HeuristicOptions::default()
        }
    }

    fn space(&self, p: &Path) -> anyhow::Result<LabeledMetricSpace> {
        Ok(read_space(p, self.tol)?)
    }

    fn manifest(&self, p: &Path) -> anyhow::Result<Manifest> {
        Ok(read_manifest(p, self.tol)?)
    }

    fn emit(&self, t: &Table) -> anyhow::Result<()> {
        let mut out = std::io::stdout().lock();
        match self.format {
            Format::Csv => t.write_csv(&mut out)?,
            Format::Text => t.write_text(&mut out)?,
        }
        Ok(())
    }
}

fn write_text(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// `Ok(false)` is a verdict failure.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let ctx = Ctx {
        tol: cli.tol,
        cap: cli.cap,
        seed: cli.seed,
        format: cli.format,
    };
    match cli.command {
        Command::Validate { files } => validate(&ctx, &files),
        Command::Lgh { mode, a, b } => lgh(&ctx, &mode, &a, &b),
        Command::Isom { a, b } => isom(&ctx, &a, &b),
        Command::Net { eps, a } => net(&ctx, eps, &a),
        Command::Approx {
            eps,
            delta,
            strong,
            a,
            b,
            witness,
        } => approx(&ctx, eps, delta, strong, &a, &b, &witness),
        Command::Glue {
            manifest,
            quotient,
            output,
        } => glue(&ctx, &manifest, quotient, output.as_deref()),
        Command::Limit { manifest, output } => limit(&ctx, &manifest, output.as_deref()),
        Command::Precompact { manifest, mode } => precompact(&ctx, &manifest, &mode),
        Command::Traveltime {
            mode,
            input,
            output,
        } => traveltime(&ctx, &mode, &input, output.as_deref()),
        Command::Gen { what } => generate(&ctx, what),
    }
}

fn validate(ctx: &Ctx, files: &[PathBuf]) -> anyhow::Result<bool> {
    if files.is_empty() {
        bail!("no files given");
    }
    let mut t = Table::new(["file", "ok", "violations"]);
    let mut all_ok = true;
    for f in files {
        let text =
            std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
        let raw = parse_raw(&text).with_context(|| f.display().to_string())?;
        let report = validate_space(&raw, ctx.tol).with_context(|| f.display().to_string())?;
        all_ok &= report.is_ok();
        if ctx.format == Format::Text {
            if report.is_ok() {
                println!("{}: ok", f.display());
            } else {
                println!("{}: {report}", f.display());
            }
        }
        t.row([
            f.display().to_string(),
            report.is_ok().to_string(),
            report.violations.len().to_string(),
        ]);
    }
    if ctx.format == Format::Csv {
        ctx.emit(&t)?;
    }
    Ok(all_ok)
}

fn lgh(ctx: &Ctx, mode: &LghMode, a: &Path, b: &Path) -> anyhow::Result<bool> {
    let (x, y) = (ctx.space(a)?, ctx.space(b)?);
    let mut t = Table::new(["method", "value"]);
    if mode.bounds {
        t.row(["lower".into(), fmt(lgh_lower_bound(&x, &y)?)]);
        t.row([
            "upper".into(),
            fmt(lgh_upper_bound_heuristic(&x, &y, &ctx.heuristic())?.value),
        ]);
    } else if mode.heuristic {
        t.row([
            "heuristic".into(),
            fmt(lgh_upper_bound_heuristic(&x, &y, &ctx.heuristic())?.value),
        ]);
    } else {
        let r = lgh_exact(&x, &y, ctx.exact_cap())?;
        if ctx.format == Format::Text {
            println!("{}", fmt(r.value));
            return Ok(true);
        }
        t.row(["exact".into(), fmt(r.value)]);
    }
    ctx.emit(&t)?;
    Ok(true)
}

fn isom(ctx: &Ctx, a: &Path, b: &Path) -> anyhow::Result<bool> {
    let (x, y) = (ctx.space(a)?, ctx.space(b)?);
    let cap = ctx.cap.unwrap_or(DEFAULT_ISOMETRY_CAP);
    match find_l_isometry(&x, &y, cap, ctx.tol)? {
        IsometryOutcome::Found(h) => {
            let mut t = Table::new(["x", "y"]);
            for (i, &j) in h.iter().enumerate() {
                t.row([x.points()[i].clone(), y.points()[j].clone()]);
            }
            ctx.emit(&t)?;
            Ok(true)
        }
        IsometryOutcome::NotFound(why) => {
            println!("no isometry: {why:?}");
            Ok(false)
        }
    }
}

fn net(ctx: &Ctx, eps: f64, a: &Path) -> anyhow::Result<bool> {
    let x = ctx.space(a)?;
    let n = greedy_labeled_net(&x, eps)?;
    let v = check_labeled_net(&x, &n.points, &n.relabel, eps)?;
    let mut t = Table::new(["role", "id", "point"]);
    for &p in &n.points {
        t.row(["net".into(), String::new(), x.points()[p].clone()]);
    }
    for (id, &p) in x.label_set().ids().iter().zip(&n.relabel) {
        t.row(["label".into(), id.clone(), x.points()[p].clone()]);
    }
    ctx.emit(&t)?;
    if ctx.format == Format::Text {
        println!(
            "covering radius {}, label displacement {}: {}",
            fmt(v.covering_radius),
            fmt(v.displacement),
            if v.ok { "ok" } else { "FAILED" }
        );
    }
    Ok(v.ok)
}

fn approx(
    ctx: &Ctx,
    eps: f64,
    delta: f64,
    strong: bool,
    a: &Path,
    b: &Path,
    w: &Path,
) -> anyhow::Result<bool> {
    let (x, y) = (ctx.space(a)?, ctx.space(b)?);
    let text = std::fs::read_to_string(w).with_context(|| format!("reading {}", w.display()))?;
    let witness = lgh_core::io::parse_witness(&text, &x, &y)?;
    let v = check_approximation(&x, &y, &witness, eps, delta, strong)?;
    let mut t = Table::new(["clause", "value", "ok"]);
    t.row([
        "x_net".into(),
        fmt(v.x_net.covering_radius.max(v.x_net.displacement)),
        v.x_net.ok.to_string(),
    ]);
    t.row([
        "y_net".into(),
        fmt(v.y_net.covering_radius.max(v.y_net.displacement)),
        v.y_net.ok.to_string(),
    ]);
    t.row([
        "distortion".into(),
        fmt(v.distortion),
        (v.distortion < delta).to_string(),
    ]);
    if let Some(s) = v.strong {
        t.row(["strong".into(), String::new(), s.to_string()]);
    }
    if v.is_ok() {
        let b = approximation_implies_lgh(&x, &y, &witness, eps, delta, ctx.exact_cap(), ctx.tol)?;
        let name = if b.exact {
            "lgh_exact"
        } else {
            "lgh_heuristic"
        };
        t.row([name.into(), fmt(b.lgh), b.holds.to_string()]);
        t.row(["bound".into(), fmt(b.bound), String::new()]);
    }
    ctx.emit(&t)?;
    if ctx.format == Format::Text {
        for f in &v.failures {
            println!("failed: {f}");
        }
    }
    Ok(v.is_ok())
}

fn chain(ctx: &Ctx, manifest: &Path) -> anyhow::Result<Chain> {
    let m = ctx.manifest(manifest)?;
    let links = match m.links {
        Some(l) => l,
        None if m.spaces.len() == 1 => Vec::new(),
        None => bail!("{}: a chain manifest needs links", manifest.display()),
    };
    Ok(Chain::new(m.spaces, links, ctx.tol)?)
}

fn glue(ctx: &Ctx, manifest: &Path, quotient: bool, output: Option<&Path>) -> anyhow::Result<bool> {
    let u = chain(ctx, manifest)?.glue_disjoint_union(ctx.tol)?;
    let text = if quotient {
        serialize_space(&u.quotient(ctx.tol)?)
    } else {
        serialize_raw(&u.to_raw())
    };
    write_text(output, &text)?;
    Ok(true)
}

fn limit(ctx: &Ctx, manifest: &Path, output: Option<&Path>) -> anyhow::Result<bool> {
    let p = chain(ctx, manifest)?.limit_proxy();
    let mut t = Table::new(["level", "tail_bound"]);
    for (n, b) in p.tail_bounds.iter().enumerate() {
        t.row([n.to_string(), fmt(*b)]);
    }
    ctx.emit(&t)?;
    if let Some(o) = output {
        write_space(o, &p.space)?;
    }
    Ok(true)
}

fn precompact(ctx: &Ctx, manifest: &Path, mode: &PrecompactMode) -> anyhow::Result<bool> {
    let c = Collection::new(ctx.manifest(manifest)?.spaces)?;
    if let Some(delta) = mode.delta {
        let r = equicontinuity_modulus(&c, delta)?;
        let mut t = Table::new(["item", "omega"]);
        for (n, w) in r.per_item.iter().enumerate() {
            t.row([n.to_string(), fmt(*w)]);
        }
        t.row(["all".into(), fmt(r.omega)]);
        ctx.emit(&t)?;
        return Ok(true);
    }
    if let Some(rho) = mode.probe {
        let r = cauchy_subsequence_probe(&c, rho, ctx.exact_cap())?;
        let mut t = Table::new(["cluster", "members"]);
        for (k, cl) in r.clusters.iter().enumerate() {
            let m: Vec<String> = cl.iter().map(usize::to_string).collect();
            t.row([k.to_string(), m.join(" ")]);
        }
        ctx.emit(&t)?;
        if ctx.format == Format::Text {
            let s: Vec<String> = r.subsequence.iter().map(usize::to_string).collect();
            println!(
                "subsequence [{}]{}: {}",
                s.join(", "),
                if r.conservative {
                    " (heuristic distances)"
                } else {
                    ""
                },
                if r.ok { "ok" } else { "FAILED" }
            );
        }
        return Ok(r.ok);
    }
    let eps = mode.eps.clone().unwrap_or_else(|| vec![1.0, 0.5, 0.25]);
    let r = utb_report(&c, &eps, CoverMode::default())?;
    let mut t = Table::new(["eps", "n_eps"]);
    for (e, n) in &r.covering {
        t.row([fmt(*e), n.to_string()]);
    }
    ctx.emit(&t)?;
    if ctx.format == Format::Text {
        println!("max diameter {}", fmt(r.diam_max));
    }
    Ok(true)
}

fn read_travel_csv(p: &Path) -> anyhow::Result<TravelTimeData> {
    let mut rdr = csv::Reader::from_path(p).with_context(|| format!("reading {}", p.display()))?;
    let header = rdr.headers()?.clone();
    if header.len() < 2 {
        bail!(
            "{}: expected a point column and at least one boundary column",
            p.display()
        );
    }
    let boundary_ids = header.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .skip(1)
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("{}: record {}", p.display(), k + 1))?;
        rows.push(row);
    }
    Ok(TravelTimeData { boundary_ids, rows })
}

fn traveltime(
    ctx: &Ctx,
    mode: &TravelMode,
    input: &Path,
    output: Option<&Path>,
) -> anyhow::Result<bool> {
    if mode.data {
        let x = ctx.space(input)?;
        let d = travel_time_data(&x)?;
        let mut t =
            Table::new(std::iter::once("point".to_string()).chain(d.boundary_ids.iter().cloned()));
        for (name, row) in x.points().iter().zip(&d.rows) {
            t.row(std::iter::once(name.clone()).chain(row.iter().map(|v| fmt(*v))));
        }
        let mut buf = Vec::new();
        t.write_csv(&mut buf)?;
        write_text(output, std::str::from_utf8(&buf)?)?;
        return Ok(true);
    }
    if mode.check {
        let x = ctx.space(input)?;
        let r = embedding_distortion(&x, ctx.tol)?;
        let (wi, wj) = r
            .witness
            .map(|(i, j)| (x.points()[i].clone(), x.points()[j].clone()))
            .unwrap_or_default();
        let mut t = Table::new(["worst", "witness_x", "witness_y", "resolved"]);
        t.row([fmt(r.worst), wi, wj, r.resolved.to_string()]);
        ctx.emit(&t)?;
        return Ok(r.resolved);
    }
    if mode.reconstruct {
        let d = read_travel_csv(input)?;
        let s = reconstruct_from_data(&d, ctx.tol)?;
        write_text(output, &serialize_space(&s))?;
        return Ok(true);
    }
    let family = ctx.manifest(input)?.spaces;
    let r = stability_experiment(&family, ctx.exact_cap(), ctx.tol)?;
    let mut t = Table::new(["i", "j", "d_data", "d_space", "slack"]);
    for row in &r.rows {
        t.row([
            row.i.to_string(),
            row.j.to_string(),
            fmt(row.d_data),
            fmt(row.d_space),
            fmt(row.slack),
        ]);
    }
    let mut buf = Vec::new();
    match ctx.format {
        Format::Csv => t.write_csv(&mut buf)?,
        Format::Text => t.write_text(&mut buf)?,
    }
    write_text(output, std::str::from_utf8(&buf)?)?;
    if !r.excluded.is_empty() {
        eprintln!("excluded (not boundary-resolved): {:?}", r.excluded);
    }
    Ok(r.holds)
}

fn graph(ctx: &Ctx, kind: GraphKind, g: &GraphArgs) -> anyhow::Result<bool> {
    let weights = match g.weights {
        WeightSpec::Unit => EdgeWeights::Unit,
        WeightSpec::Constant(c) => EdgeWeights::Constant(c),
        WeightSpec::Jitter(a) => EdgeWeights::Jitter {
            amplitude: a,
            seed: ctx.seed,
        },
    };
    let s = gen_graph_space(kind, weights, &g.boundary)?;
    write_text(g.output.as_deref(), &serialize_space(&s))?;
    Ok(true)
}

fn write_family(
    dir: &Path,
    prefix: &str,
    spaces: &[LabeledMetricSpace],
    links: Option<&[lgh_core::correspondence::AdmissiblePseudometric]>,
) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut names = Vec::new();
    for (n, s) in spaces.iter().enumerate() {
        let name = format!("{prefix}{}.lms", n + 1);
        write_space(&dir.join(&name), s)?;
        names.push(name);
    }
    let m = dir.join("manifest.json");
    std::fs::write(&m, serialize_manifest(&names, links))
        .with_context(|| format!("writing {}", m.display()))?;
    println!("{}", m.display());
    Ok(())
}

fn generate(ctx: &Ctx, what: Gen) -> anyhow::Result<bool> {
    match what {
        Gen::Path { n, g } => graph(ctx, GraphKind::Path { n }, &g),
        Gen::Cycle { n, g } => graph(ctx, GraphKind::Cycle { n }, &g),
        Gen::Star { leaves, g } => graph(ctx, GraphKind::Star { leaves }, &g),
        Gen::Tree {
            branching,
            depth,
            g,
        } => graph(ctx, GraphKind::Tree { branching, depth }, &g),
        Gen::Grid { rows, cols, g } => graph(ctx, GraphKind::Grid { rows, cols }, &g),
        Gen::Random {
            n,
            euclidean,
            graph,
            output,
        } => {
            let method = match (euclidean, graph) {
                (_, Some(p)) => RandomMethod::RandomGraph { p },
                (k, None) => RandomMethod::Euclidean { k: k.unwrap_or(2) },
            };
            let s = gen_random_space(n, method, ctx.seed)?;
            write_text(output.as_deref(), &serialize_space(&s))?;
            Ok(true)
        }
        Gen::Projection { k, out_dir } => {
            let c = gen_projection_family(k)?;
            write_family(&out_dir, "proj", c.items(), None)?;
            Ok(true)
        }
        Gen::Dyadic {
            first,
            last,
            out_dir,
        } => {
            let c = dyadic_chain(first, last, ctx.tol)?;
            write_family(&out_dir, "level", c.spaces(), Some(c.links()))?;
            Ok(true)
        }
    }
}

fn fmt(v: f64) -> String {
    format!("{}", lgh_core::io::round12(v))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            match e.downcast_ref::<Error>() {
                Some(Error::CapExceeded { .. }) => eprintln!("error: {e}; raise --cap to force"),
                _ => eprintln!("error: {e:#}"),
            }
            ExitCode::from(2)
        }
    }
}
