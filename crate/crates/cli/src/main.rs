mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use biis_core::agreement::{aa_decide, run_agreement};
use biis_core::distinguishability::{
    bits_for_image, clique_lower_bound, colors_all_graphs, degree_bounds, distinguishing_witness,
    greedy_clique, greedy_coloring, synth_encoding_schedule, ExactColoring, GreedyOrder, SynthOptions,
};
use biis_core::fvector::{f_star_ch_delta, fubini_asymptotic_ratio, fvec_ch_iterated, ratio_row};
use biis_core::io::{load_complex, load_encoding, load_schedule, write_complex, write_schedule};
use biis_core::partition::fubini;
use biis_core::protocol::{biis_round, iterate_protocol, theorem1_check, DecodePolicy, Mode, TraceLine};
use biis_core::subdivision::DEFAULT_MAX_FACETS;
use biis_core::{
    chromatic_iso, iterate_subdivide, ChromaticComplex, Color, Error, IndistGraph, IteratedSubdivision,
    Limits,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Cell, Format, Table};

#[derive(Parser)]
#[command(
    name = "biis",
    version,
    about = "Chromatic subdivisions and bounded iterated immediate snapshot"
)]
struct Cli {
    /// Largest number of facets any construction may produce.
    #[arg(long, global = true, env = "BIIS_MAX_FACETS", default_value_t = DEFAULT_MAX_FACETS)]
    max_facets: usize,

    /// Worker threads (default: one per core).
    #[arg(long, global = true, env = "BIIS_THREADS")]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write Ch^r of a complex in the complex file format.
    Subdivide {
        input: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        rounds: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// f-vector of Ch^r by recurrence, by enumeration, or both.
    Fvector {
        input: PathBuf,
        #[arg(short, long, default_value_t = 0)]
        rounds: usize,
        #[command(flatten)]
        mode: FvectorMode,
    },
    /// Indistinguishability graphs of Ch^r.
    IndistGraph {
        input: PathBuf,
        #[arg(short, long, default_value_t = 0)]
        rounds: usize,
        /// Only this process.
        #[arg(short = 'p', long)]
        color: Option<u32>,
        /// One row per process with size, degree and coloring bounds.
        #[arg(long)]
        summary: bool,
    },
    /// Synthesize a distinguishing encoding for every round and report bounds.
    Encode {
        input: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        rounds: usize,
        /// Also solve each graph exactly, up to this many nodes.
        #[arg(long, num_args = 0..=1, default_missing_value = "20")]
        exact: Option<usize>,
        #[arg(long, value_enum, default_value_t = OrderArg::Dsatur)]
        order: OrderArg,
        /// Write the encodings as a schedule file.
        #[arg(long)]
        schedule_out: Option<PathBuf>,
    },
    /// Check that an encoding distinguishes every vertex of a complex.
    Verify { input: PathBuf, encoding: PathBuf },
    /// Run the protocol over every schedule and compare with Ch^r.
    Simulate {
        input: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        rounds: usize,
        #[command(flatten)]
        bounded: BoundedArgs,
        /// Print every execution as a trace line.
        #[arg(long)]
        trace: bool,
    },
    /// Color-preserving isomorphism between two complexes.
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// Print the vertex map.
        #[arg(long)]
        map: bool,
    },
    /// Two-process approximate agreement with two-bit messages.
    Agree {
        #[arg(short, long, default_value_t = 1)]
        rounds: u32,
        #[arg(long)]
        trace: bool,
    },
    /// Open-star counts against the bounding function.
    Ratios {
        /// Face dimension; repeat for several (default 1, 2, 3).
        #[arg(short, long)]
        k: Vec<usize>,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// Fubini numbers, the open-star diagonal and their asymptotics.
    Fubini {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct FvectorMode {
    #[arg(long)]
    recurrence: bool,
    #[arg(long)]
    direct: bool,
    #[arg(long)]
    both: bool,
}

#[derive(Args)]
#[group(multiple = false)]
struct BoundedArgs {
    /// Bounded rounds driven by this schedule file.
    #[arg(long, value_name = "SCHEDULE")]
    bounded: Option<PathBuf>,
    /// One bounded round with this encoding; processes keep the raw codes they read.
    #[arg(long, value_name = "ENCODING")]
    encoding: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Dsatur,
    LargestDegree,
}

impl From<OrderArg> for GreedyOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Dsatur => GreedyOrder::Dsatur,
            OrderArg::LargestDegree => GreedyOrder::LargestDegreeFirst,
        }
    }
}

/// What a command produced, and whether its checks held.
struct Report {
    text: String,
    failure: Option<String>,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, failure: None }
    }

    fn check(text: String, pass: bool, failure: impl FnOnce() -> String) -> Self {
        Report {
            text,
            failure: (!pass).then(failure),
        }
    }
}

struct Ctx {
    limits: Limits,
    format: Format,
}

impl Ctx {
    fn render(&self, t: &Table) -> Result<String> {
        t.render(self.format)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{}", report.text);
            match report.failure {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    eprintln!("check failed: {msg}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Report> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let ctx = Ctx {
        limits: Limits::new(cli.max_facets),
        format: cli.format,
    };
    match cli.command {
        Command::Subdivide {
            input,
            rounds,
            output,
        } => subdivide(&ctx, &input, rounds, output.as_deref()),
        Command::Fvector { input, rounds, mode } => fvector(&ctx, &input, rounds, &mode),
        Command::IndistGraph {
            input,
            rounds,
            color,
            summary,
        } => indist_graph(&ctx, &input, rounds, color, summary),
        Command::Encode {
            input,
            rounds,
            exact,
            order,
            schedule_out,
        } => encode(&ctx, &input, rounds, exact, order.into(), schedule_out.as_deref()),
        Command::Verify { input, encoding } => verify(&ctx, &input, &encoding),
        Command::Simulate {
            input,
            rounds,
            bounded,
            trace,
        } => simulate(&ctx, &input, rounds, &bounded, trace),
        Command::Iso { a, b, map } => iso(&ctx, &a, &b, map),
        Command::Agree { rounds, trace } => agree(&ctx, rounds, trace),
        Command::Ratios { k, n_min, n_max } => ratios(&ctx, &k, n_min, n_max),
        Command::Fubini { n_max } => fubini_table(&ctx, n_max),
    }
}

fn load(path: &Path) -> Result<ChromaticComplex> {
    Ok(load_complex(path)?)
}

fn subdivide(ctx: &Ctx, input: &Path, rounds: usize, output: Option<&Path>) -> Result<Report> {
    let c = iterate_subdivide(&load(input)?, rounds, &ctx.limits)?;
    let text = write_complex(&c);
    match output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok(Report::ok(String::new()))
        }
        None => Ok(Report::ok(text)),
    }
}

fn fvector(ctx: &Ctx, input: &Path, rounds: usize, mode: &FvectorMode) -> Result<Report> {
    let c = load(input)?;
    let want_rec = mode.recurrence || mode.both || !mode.direct;
    let want_direct = mode.direct || mode.both || !mode.recurrence;
    let rec = want_rec
        .then(|| fvec_ch_iterated(&c.f_vector(), rounds))
        .transpose()?;
    let direct = want_direct
        .then(|| iterate_subdivide(&c, rounds, &ctx.limits).map(|s| s.f_vector()))
        .transpose()?;
    let top = rec.iter().chain(&direct).map(|f| f.top()).max().unwrap_or(-1);
    let mut headers = vec!["k"];
    if rec.is_some() {
        headers.push("recurrence");
    }
    if direct.is_some() {
        headers.push("direct");
    }
    let both = rec.is_some() && direct.is_some();
    if both {
        headers.push("match");
    }
    let mut t = Table::new(&headers);
    let mut mismatches = Vec::new();
    for k in -1..=top {
        let mut row: Vec<Cell> = vec![k.into()];
        let a = rec.as_ref().map(|f| f.get(k));
        let b = direct.as_ref().map(|f| f.get(k));
        row.extend(a.clone().map(Cell::from));
        row.extend(b.clone().map(Cell::from));
        if both {
            let ok = a == b;
            if !ok {
                mismatches.push(k);
            }
            row.push(ok.into());
        }
        t.push(row);
    }
    Ok(Report::check(ctx.render(&t)?, mismatches.is_empty(), || {
        format!("recurrence and enumeration differ at k = {mismatches:?}")
    }))
}

fn indist_graph(ctx: &Ctx, input: &Path, rounds: usize, color: Option<u32>, summary: bool) -> Result<Report> {
    let c = iterate_subdivide(&load(input)?, rounds, &ctx.limits)?;
    let colors: Vec<u32> = match color {
        Some(p) if p >= c.processes() => bail!("process {p} out of range (complex has {})", c.processes()),
        Some(p) => vec![p],
        None => (0..c.processes()).collect(),
    };
    let t = if summary {
        let mut t = Table::new(&["color", "nodes", "edges", "max_degree", "clique", "greedy_colors"]);
        for p in colors {
            let g = IndistGraph::build(&c, Color(p));
            let col = greedy_coloring(&g, GreedyOrder::Dsatur);
            t.push(vec![
                p.into(),
                g.len().into(),
                g.edges().len().into(),
                g.max_degree().into(),
                greedy_clique(&g).into(),
                col.iter().max().copied().unwrap_or(0).into(),
            ]);
        }
        t
    } else {
        let mut t = Table::new(&["color", "vertex", "neighbor"]);
        for p in colors {
            for (a, b) in IndistGraph::build(&c, Color(p)).edges() {
                t.push(vec![p.into(), a.0.into(), b.0.into()]);
            }
        }
        t
    };
    Ok(Report::ok(ctx.render(&t)?))
}

fn encode(
    ctx: &Ctx,
    input: &Path,
    rounds: usize,
    exact: Option<usize>,
    order: GreedyOrder,
    schedule_out: Option<&Path>,
) -> Result<Report> {
    let c = load(input)?;
    let opts = SynthOptions {
        order,
        exact_limit: exact,
    };
    let sched = synth_encoding_schedule(&c, rounds, &ctx.limits, opts)?;
    let mut headers = vec!["round", "vertices", "clique_lb", "delta_plus_1", "image", "bits"];
    if exact.is_some() {
        headers.push("exact");
    }
    let mut t = Table::new(&headers);
    for r in &sched.rounds {
        let mut row: Vec<Cell> = vec![
            r.round.into(),
            r.vertices.into(),
            r.clique_lb.into(),
            r.delta_plus_1.into(),
            r.image.into(),
            r.bits.into(),
        ];
        if let Some(e) = &r.exact {
            row.push(match e {
                ExactColoring::Solved(_) => e.colors_used().unwrap_or(0).into(),
                ExactColoring::Skipped { nodes, limit } => {
                    format!("skipped ({nodes} > {limit} nodes)").into()
                }
            });
        }
        t.push(row);
    }
    if let Some(path) = schedule_out {
        std::fs::write(path, write_schedule(&sched.encodings()))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(note) = &sched.truncated {
        eprintln!("warning: schedule truncated, {note}");
    }
    Ok(Report::ok(ctx.render(&t)?))
}

fn verify(ctx: &Ctx, input: &Path, encoding: &Path) -> Result<Report> {
    let c = load(input)?;
    let e = load_encoding(encoding)?;
    e.check_total(&c)?;
    let witness = distinguishing_witness(&c, &e)?;
    let proper = colors_all_graphs(&c, &e)?;
    let bounds = degree_bounds(&c)?;
    let image = e.image_size();
    let t = Table::record(vec![
        ("distinguishable", witness.is_none().into()),
        ("proper_coloring", proper.into()),
        ("image", image.into()),
        ("bits", bits_for_image(image).into()),
        ("clique_lb", clique_lower_bound(&c).into()),
        ("delta_plus_1", (bounds.from_graphs + 1).into()),
        (
            "witness",
            witness.as_ref().map_or(String::new(), |w| w.to_string()).into(),
        ),
    ]);
    let pass = witness.is_none() && proper;
    Ok(Report::check(ctx.render(&t)?, pass, || match witness {
        Some(w) => format!("encoding is not distinguishing: {w}"),
        None => "coloring check disagrees with the witness search".into(),
    }))
}

fn trace_text(lines: &[TraceLine]) -> String {
    lines.iter().map(|l| format!("{l}\n")).collect()
}

fn simulate(ctx: &Ctx, input: &Path, rounds: usize, bounded: &BoundedArgs, trace: bool) -> Result<Report> {
    let c = load(input)?;
    if let Some(path) = &bounded.encoding {
        if rounds != 1 {
            bail!("--encoding runs exactly one round");
        }
        let e = load_encoding(path)?;
        let mut text = String::new();
        if trace {
            text += &trace_text(&biis_round(&c, &e, DecodePolicy::RawView, 0, &ctx.limits, true)?.trace);
        }
        let rep = theorem1_check(&c, &e, &ctx.limits)?;
        let reference = iterate_subdivide(&c, 1, &ctx.limits)?;
        let (deg_vertex, degree) = rep.max_degree.map_or((String::new(), 0), |(v, d)| {
            (rep.bounded.label_of(v).unwrap_or("?").to_string(), d)
        });
        let t = Table::record(vec![
            ("verdict", if rep.isomorphic { "ISO" } else { "NOT-ISO" }.into()),
            ("rounds", 1usize.into()),
            ("protocol_facets", rep.bounded.facets().len().into()),
            ("reference_facets", reference.facets().len().into()),
            ("max_degree_vertex", deg_vertex.into()),
            ("max_degree", degree.into()),
            (
                "witness",
                rep.witness.map_or(String::new(), |w| w.to_string()).into(),
            ),
        ]);
        text += &ctx.render(&t)?;
        return Ok(Report::ok(text));
    }

    let schedule = bounded.bounded.as_deref().map(load_schedule).transpose()?;
    let mode = match &schedule {
        Some(s) => Mode::Bounded(s),
        None => Mode::FullInfo,
    };
    let reference = IteratedSubdivision::build(&c, rounds, &ctx.limits)?;
    let run = match iterate_protocol(&c, rounds, mode, &ctx.limits, trace) {
        Ok(run) => run,
        Err(Error::DecodeAmbiguity(w)) => {
            let t = Table::record(vec![
                ("verdict", "NOT-ISO".into()),
                ("rounds", rounds.into()),
                ("witness", w.to_string().into()),
            ]);
            return Ok(Report::check(ctx.render(&t)?, false, || {
                format!("decode fault: {w}")
            }));
        }
        Err(e) => return Err(e.into()),
    };
    let iso = chromatic_iso(&run.complex, reference.complex()).is_some();
    let mut text = trace_text(&run.trace);
    let t = Table::record(vec![
        ("verdict", if iso { "ISO" } else { "NOT-ISO" }.into()),
        ("rounds", rounds.into()),
        ("protocol_facets", run.complex.facets().len().into()),
        ("reference_facets", reference.complex().facets().len().into()),
    ]);
    text += &ctx.render(&t)?;
    Ok(Report::ok(text))
}

fn iso(ctx: &Ctx, a: &Path, b: &Path, show_map: bool) -> Result<Report> {
    let (ca, cb) = (load(a)?, load(b)?);
    let found = chromatic_iso(&ca, &cb);
    let t = match (&found, show_map) {
        (Some(m), true) => {
            let mut t = Table::new(&["a", "b"]);
            for (x, y) in m {
                t.push(vec![x.0.into(), y.0.into()]);
            }
            t
        }
        _ => Table::record(vec![
            ("verdict", if found.is_some() { "ISO" } else { "NOT-ISO" }.into()),
            ("vertices", ca.vertices().len().into()),
            ("facets", ca.facets().len().into()),
        ]),
    };
    Ok(Report::ok(ctx.render(&t)?))
}

fn agree(ctx: &Ctx, rounds: u32, trace: bool) -> Result<Report> {
    let rep = run_agreement(rounds, &ctx.limits, trace)?;
    let mut text = String::new();
    if let Some(run) = rep.run.as_ref().filter(|_| trace) {
        text += &trace_text(&run.trace);
        let mut states = Table::new(&["vertex", "process", "state", "decision"]);
        for v in run.complex.vertices() {
            let s = run.states[v.id.index()];
            states.push(vec![
                v.id.0.into(),
                v.color.0.into(),
                s.into(),
                aa_decide(v.color.0, s, rounds).to_string().into(),
            ]);
        }
        text += &ctx.render(&states)?;
    }
    let mut t = Table::new(&["check", "result", "detail"]);
    for c in &rep.checks {
        t.push(vec![
            c.name.into(),
            if c.pass { "PASS" } else { "FAIL" }.into(),
            c.detail.clone().into(),
        ]);
    }
    text += &ctx.render(&t)?;
    let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    Ok(Report::check(text, failed.is_empty(), || {
        format!("failed: {}", failed.join(", "))
    }))
}

fn ratios(ctx: &Ctx, ks: &[usize], n_min: Option<usize>, n_max: usize) -> Result<Report> {
    let ks = if ks.is_empty() { vec![1, 2, 3] } else { ks.to_vec() };
    let mut t = Table::new(&["k", "n", "T", "bound", "ratio", "ratio_alt"]);
    for k in ks {
        if k == 0 {
            bail!("k must be at least 1");
        }
        for n in n_min.unwrap_or(k).max(k)..=n_max {
            let row = ratio_row(k, n);
            t.push(vec![
                k.into(),
                n.into(),
                row.t.into(),
                row.bound.into(),
                row.ratio.into(),
                row.ratio_alt.into(),
            ]);
        }
    }
    Ok(Report::ok(ctx.render(&t)?))
}

fn fubini_table(ctx: &Ctx, n_max: usize) -> Result<Report> {
    let mut t = Table::new(&["n", "fubini", "star_diagonal", "asymptotic_ratio"]);
    let mut bad = Vec::new();
    for n in 0..=n_max {
        let f = fubini(n);
        let d = f_star_ch_delta(n, n);
        if f != d {
            bad.push(n);
        }
        t.push(vec![
            n.into(),
            f.into(),
            d.into(),
            fubini_asymptotic_ratio(n).into(),
        ]);
    }
    Ok(Report::check(ctx.render(&t)?, bad.is_empty(), || {
        format!("open-star diagonal differs from Fubini at n = {bad:?}")
    }))
}
