//! Command-line front end: instance generation, census, packing, matrix
//! class queries, the partition experiment, and verification sweeps, all
//! emitting a deterministic JSON envelope (see docs/report-schema.md).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::census::{arc_profile, evaluate_bounds, four_cycle_census};
use crate::error::{Error, Result};
use crate::interchange::{
    antipodal_audit, diameter, enumerate_matrix_class, walkup_distance, ClassLimits, MarginMatrix,
};
use crate::model::BipartiteTournament;
use crate::packing::{
    color_pack, exact_max_pack, greedy_pack, local_search_pack, verify_packing, PackLimits,
    Packing,
};
use crate::partition::run_partition_experiment;
use crate::report::{jf, sha256_hex, RunReport};
use crate::sampling::{
    canonical_bipartite, canonical_regular_tournament, default_bipartite_steps,
    default_tournament_steps, mix_seed, randomize_bipartite, randomize_tournament, SamplerConfig,
};
use crate::verify::{run_sweep, VerifyTarget};

#[derive(Debug, Parser)]
#[command(name = "cyclepack", version, about = "4-cycle packing and interchange distances")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for sweeps; the CYCLEPACK_JOBS env var overrides the default.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an instance file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Count 4-cycle orientation classes and evaluate the lower bounds.
    Census(CensusArgs),
    /// Pack arc-disjoint directed 4-cycles.
    Pack(PackArgs),
    /// Fixed-margin matrix class operations.
    #[command(subcommand)]
    Interchange(InterchangeCommand),
    /// Multi-stage experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Batch verification sweeps; exits nonzero on any failed check.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Balanced orientation of K_{m,n}, randomized by interchange moves.
    Bipartite(GenBipartiteArgs),
    /// Regular tournament, randomized by triangle reversals.
    Tournament(GenTournamentArgs),
}

#[derive(Debug, Args)]
struct GenBipartiteArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Attempted chain moves; defaults to 20*m*n.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct GenTournamentArgs {
    #[arg(long)]
    n: usize,
    /// Attempted chain moves; defaults to 20*n*n.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CensusArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Greedy,
    Local,
    Color,
    Exact,
}

#[derive(Debug, Args)]
struct PackArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Improvement attempts for the local method.
    #[arg(long, default_value_t = 200)]
    budget: u64,
    /// Cycle-count cap for certified exact search.
    #[arg(long, default_value_t = 64)]
    max_edges: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum InterchangeCommand {
    /// List every matrix with the given margins.
    Enumerate(MarginArgs),
    /// Distance between two matrices via the difference digraph.
    Distance(DistanceArgs),
    /// Diameter of the class's interchange graph.
    Diameter(MarginArgs),
    /// Distances across all complementary pairs of the balanced class.
    Antipodal(AntipodalArgs),
}

#[derive(Debug, Args)]
struct MarginArgs {
    /// Row sums, comma separated, e.g. 2,2,2,2.
    #[arg(long, value_delimiter = ',')]
    rows: Vec<usize>,
    /// Column sums, comma separated.
    #[arg(long, value_delimiter = ',')]
    cols: Vec<usize>,
    #[arg(long, default_value_t = 20_000)]
    max_class: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct DistanceArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Also compute the breadth-first-search distance and cross-check.
    #[arg(long)]
    bfs: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct AntipodalArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 20_000)]
    max_class: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum ExperimentCommand {
    /// Random-partition packing experiment on a regular tournament.
    Partition(PartitionArgs),
}

#[derive(Debug, Args)]
struct PartitionArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Balance threshold separating clean pair graphs from violators.
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    Lemma21,
    Lemma22,
    Walkup,
    #[value(name = "census_identities")]
    CensusIdentities,
}

impl From<TargetArg> for VerifyTarget {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Lemma21 => VerifyTarget::Lemma21,
            TargetArg::Lemma22 => VerifyTarget::Lemma22,
            TargetArg::Walkup => VerifyTarget::Walkup,
            TargetArg::CensusIdentities => VerifyTarget::CensusIdentities,
        }
    }
}

fn parse_size(text: &str) -> std::result::Result<(usize, usize), String> {
    let (m, n) = text
        .split_once('x')
        .ok_or_else(|| format!("expected MxN, got {text:?}"))?;
    Ok((
        m.parse().map_err(|e| format!("bad size {text:?}: {e}"))?,
        n.parse().map_err(|e| format!("bad size {text:?}: {e}"))?,
    ))
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    target: TargetArg,
    /// Extra sampled sizes, e.g. 8x8,6x10 (the exhaustive tiny sizes always run).
    #[arg(long, value_delimiter = ',', value_parser = parse_size)]
    sizes: Vec<(usize, usize)>,
    /// Sampled instances per size, or sampled pairs for the distance target.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

struct CommandOutput {
    report: RunReport,
    json: bool,
    human: String,
    exit: ExitCode,
}

/// Parses argv and runs; this is the whole binary.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match execute(cli) {
        Ok(mut output) => {
            output.report.wall_time_ms = started.elapsed().as_millis() as u64;
            if output.json {
                println!("{}", output.report.to_json_string());
            } else {
                print!("{}", output.human);
            }
            output.exit
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn resolve_jobs(flag: Option<usize>) -> usize {
    std::env::var("CYCLEPACK_JOBS")
        .ok()
        .and_then(|v| v.parse().ok())
        .or(flag)
        .filter(|&j| j > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
        })
}

fn execute(cli: Cli) -> Result<CommandOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_jobs(cli.jobs))
        .build()
        .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    pool.install(|| run_command(cli.command))
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn run_command(command: Command) -> Result<CommandOutput> {
    match command {
        Command::Gen(GenCommand::Bipartite(args)) => gen_bipartite(args),
        Command::Gen(GenCommand::Tournament(args)) => gen_tournament(args),
        Command::Census(args) => census_cmd(args),
        Command::Pack(args) => pack_cmd(args),
        Command::Interchange(InterchangeCommand::Enumerate(args)) => enumerate_cmd(args),
        Command::Interchange(InterchangeCommand::Distance(args)) => distance_cmd(args),
        Command::Interchange(InterchangeCommand::Diameter(args)) => diameter_cmd(args),
        Command::Interchange(InterchangeCommand::Antipodal(args)) => antipodal_cmd(args),
        Command::Experiment(ExperimentCommand::Partition(args)) => partition_cmd(args),
        Command::Verify(args) => verify_cmd(args),
    }
}

fn gen_bipartite(args: GenBipartiteArgs) -> Result<CommandOutput> {
    let steps = args.steps.unwrap_or_else(|| default_bipartite_steps(args.m, args.n));
    let g = randomize_bipartite(
        &canonical_bipartite(args.m, args.n)?,
        SamplerConfig::new(args.seed, steps),
    )?;
    let text = g.to_file_string();
    std::fs::write(&args.out, &text)?;
    let payload = json!({
        "family": "bipartite",
        "m": args.m,
        "n": args.n,
        "steps": steps,
        "seed": args.seed,
        "out": args.out.display().to_string(),
        "output_digest": sha256_hex(text.as_bytes()),
        "is_eulerian": g.is_eulerian(),
    });
    let digest = sha256_hex(format!("gen bipartite {} {} {} {}", args.m, args.n, steps, args.seed).as_bytes());
    Ok(CommandOutput {
        human: format!(
            "wrote balanced K_{{{},{}}} to {} (seed {}, {} steps)\n",
            args.m,
            args.n,
            args.out.display(),
            args.seed,
            steps
        ),
        report: RunReport::new("gen bipartite", digest, vec![args.seed], payload),
        json: args.json,
        exit: ExitCode::SUCCESS,
    })
}

fn gen_tournament(args: GenTournamentArgs) -> Result<CommandOutput> {
    let steps = args.steps.unwrap_or_else(|| default_tournament_steps(args.n));
    let t = randomize_tournament(
        &canonical_regular_tournament(args.n)?,
        SamplerConfig::new(args.seed, steps),
    )?;
    let text = t.to_file_string();
    std::fs::write(&args.out, &text)?;
    let payload = json!({
        "family": "tournament",
        "n": args.n,
        "steps": steps,
        "seed": args.seed,
        "out": args.out.display().to_string(),
        "output_digest": sha256_hex(text.as_bytes()),
        "is_regular": t.is_regular(),
    });
    let digest = sha256_hex(format!("gen tournament {} {} {}", args.n, steps, args.seed).as_bytes());
    Ok(CommandOutput {
        human: format!(
            "wrote regular tournament on {} vertices to {} (seed {}, {} steps)\n",
            args.n,
            args.out.display(),
            args.seed,
            steps
        ),
        report: RunReport::new("gen tournament", digest, vec![args.seed], payload),
        json: args.json,
        exit: ExitCode::SUCCESS,
    })
}

fn census_cmd(args: CensusArgs) -> Result<CommandOutput> {
    let text = read_file(&args.input)?;
    let g = BipartiteTournament::parse_str(&text)?;
    let census = four_cycle_census(&g);
    let eulerian = g.is_eulerian();
    let (alpha_g, argmin_arc, bound_baseline, bound_alpha) = if eulerian {
        let profile = arc_profile(&g)?;
        let bounds = evaluate_bounds(&g, &census, &profile);
        (
            jf(profile.alpha_g),
            json!(profile.argmin_arc),
            jf(bounds.baseline_bound),
            jf(bounds.alpha_bound),
        )
    } else {
        (Value::Null, Value::Null, Value::Null, Value::Null)
    };
    let identities_ok = census.identities_ok(eulerian);
    let payload = json!({
        "m": census.m,
        "n": census.n,
        "x": census.x,
        "h1": census.h1,
        "h2": census.h2,
        "h3": census.h3,
        "t": census.t,
        "alpha_G": alpha_g,
        "argmin_arc": argmin_arc,
        "bound_l21": bound_baseline,
        "bound_l22": bound_alpha,
        "identities_ok": identities_ok,
    });
    let human = format!(
        "K_{{{},{}}}: x={} h1={} h2={} h3={} t={} identities_ok={}\n",
        census.m, census.n, census.x, census.h1, census.h2, census.h3, census.t, identities_ok
    );
    Ok(CommandOutput {
        report: RunReport::new("census", sha256_hex(text.as_bytes()), vec![], payload),
        json: args.json,
        human,
        exit: ExitCode::SUCCESS,
    })
}

fn pack_cmd(args: PackArgs) -> Result<CommandOutput> {
    let text = read_file(&args.input)?;
    let g = BipartiteTournament::parse_str(&text)?;
    let packing: Packing = match args.method {
        MethodArg::Greedy => greedy_pack(&g, args.seed),
        MethodArg::Local => local_search_pack(&g, args.seed, args.budget),
        MethodArg::Color => color_pack(&g, args.seed),
        MethodArg::Exact => exact_max_pack(
            &g,
            &PackLimits { max_edges: args.max_edges, ..Default::default() },
        ),
    };
    verify_packing(&g, &packing)?;
    let mn = g.m() * g.n();
    let cycles: Vec<Vec<usize>> = packing
        .cycles
        .iter()
        .map(|cycle| cycle.iter().map(|a| a.index).collect())
        .collect();
    let payload = json!({
        "method": packing.method.name(),
        "size": packing.size(),
        "upper_bound_mn4": jf(mn as f64 / 4.0),
        "ratio_vs_target": jf(packing.ratio_vs_target(g.m(), g.n())),
        "colors_used": packing.colors_used,
        "certified_optimal": packing.certified_optimal,
        "cycles": cycles,
    });
    let human = format!(
        "{}: packed {} cycles of at most {} ({})\n",
        packing.method.name(),
        packing.size(),
        mn / 4,
        if packing.certified_optimal { "optimal" } else { "heuristic" },
    );
    Ok(CommandOutput {
        report: RunReport::new("pack", sha256_hex(text.as_bytes()), vec![args.seed], payload),
        json: args.json,
        human,
        exit: ExitCode::SUCCESS,
    })
}

fn matrix_rows(mat: &MarginMatrix) -> Vec<String> {
    mat.to_file_string().lines().skip(1).map(str::to_string).collect()
}

fn margins_digest(label: &str, rows: &[usize], cols: &[usize]) -> String {
    sha256_hex(format!("{label} rows={rows:?} cols={cols:?}").as_bytes())
}

fn enumerate_cmd(args: MarginArgs) -> Result<CommandOutput> {
    let limits = ClassLimits { max_class: args.max_class, ..Default::default() };
    let class = enumerate_matrix_class(&args.rows, &args.cols, &limits)?;
    let matrices: Vec<Vec<String>> = class.iter().map(matrix_rows).collect();
    let payload = json!({
        "rows": args.rows,
        "cols": args.cols,
        "class_size": class.len(),
        "matrices": matrices,
    });
    Ok(CommandOutput {
        human: format!("{} matrices with the given margins\n", class.len()),
        report: RunReport::new(
            "interchange enumerate",
            margins_digest("enumerate", &args.rows, &args.cols),
            vec![],
            payload,
        ),
        json: args.json,
        exit: ExitCode::SUCCESS,
    })
}

fn distance_cmd(args: DistanceArgs) -> Result<CommandOutput> {
    let text_a = read_file(&args.a)?;
    let text_b = read_file(&args.b)?;
    let a = MarginMatrix::parse_str(&text_a)?;
    let b = MarginMatrix::parse_str(&text_b)?;
    let limits = ClassLimits::default();
    let record = walkup_distance(&a, &b, &limits, args.bfs)?;
    let payload = json!({
        "d": record.d,
        "q": record.q,
        "q_certified": record.q_certified,
        "i_walkup": record.i_walkup,
        "i_bfs": record.i_bfs,
    });
    let human = format!(
        "d={} q={}{} distance={}{}\n",
        record.d,
        record.q,
        if record.q_certified { "" } else { " (heuristic)" },
        record.i_walkup,
        record
            .i_bfs
            .map(|b| format!(" bfs={b}"))
            .unwrap_or_default(),
    );
    let digest = sha256_hex([text_a.as_bytes(), text_b.as_bytes()].concat().as_slice());
    Ok(CommandOutput {
        report: RunReport::new("interchange distance", digest, vec![], payload),
        json: args.json,
        human,
        exit: ExitCode::SUCCESS,
    })
}

fn diameter_cmd(args: MarginArgs) -> Result<CommandOutput> {
    let limits = ClassLimits { max_class: args.max_class, ..Default::default() };
    let report = diameter(&args.rows, &args.cols, &limits)?;
    let payload = json!({
        "rows": args.rows,
        "cols": args.cols,
        "class_size": report.class_size,
        "diameter": report.diameter,
        "witness_a": matrix_rows(&report.witness_a),
        "witness_b": matrix_rows(&report.witness_b),
        "quarter_bound": jf(report.quarter_bound),
        "five_twelfths_bound": jf(report.five_twelfths_bound),
        "within_quarter_bound": report.within_quarter_bound,
    });
    Ok(CommandOutput {
        human: format!(
            "diameter {} over {} matrices (mn/4 = {})\n",
            report.diameter, report.class_size, report.quarter_bound
        ),
        report: RunReport::new(
            "interchange diameter",
            margins_digest("diameter", &args.rows, &args.cols),
            vec![],
            payload,
        ),
        json: args.json,
        exit: ExitCode::SUCCESS,
    })
}

fn antipodal_cmd(args: AntipodalArgs) -> Result<CommandOutput> {
    let limits = ClassLimits { max_class: args.max_class, ..Default::default() };
    let audit = antipodal_audit(args.m, args.n, &limits)?;
    let payload = json!({
        "m": audit.m,
        "n": audit.n,
        "class_size": audit.class_size,
        "pair_count": audit.pair_count,
        "min_distance": audit.min_distance,
        "max_distance": audit.max_distance,
        "floor": jf(audit.floor),
        "floor_ok": audit.floor_ok,
        "ceiling_reference": jf(audit.ceiling_reference),
        "all_q_certified": audit.all_q_certified,
    });
    Ok(CommandOutput {
        human: format!(
            "{} complementary pairs: distance range [{}, {}], floor {} {}\n",
            audit.pair_count,
            audit.min_distance,
            audit.max_distance,
            audit.floor,
            if audit.floor_ok { "met" } else { "VIOLATED" },
        ),
        report: RunReport::new(
            "interchange antipodal",
            sha256_hex(format!("antipodal {} {}", args.m, args.n).as_bytes()),
            vec![],
            payload,
        ),
        json: args.json,
        exit: ExitCode::SUCCESS,
    })
}

fn partition_cmd(args: PartitionArgs) -> Result<CommandOutput> {
    let steps = default_tournament_steps(args.n);
    let t = randomize_tournament(
        &canonical_regular_tournament(args.n)?,
        SamplerConfig::new(mix_seed(args.seed, 0x70, 0x61), steps),
    )?;
    let run = run_partition_experiment(&t, args.seed, args.delta)?;
    let r = &run.report;
    let per_pair: Vec<Value> = r
        .per_pair
        .iter()
        .map(|p| {
            json!({
                "class_a": p.class_a,
                "class_b": p.class_b,
                "rows": p.rows,
                "cols": p.cols,
                "arc_count": p.arc_count,
                "delta_margin": jf(p.delta_margin),
                "delta_clean": p.delta_clean,
                "packed": p.packed,
            })
        })
        .collect();
    let payload = json!({
        "n": r.n,
        "m": r.m,
        "seed": r.seed,
        "tournament_steps": steps,
        "delta_target": jf(r.delta_target),
        "delta_observed": jf(r.delta_observed),
        "class_sizes": r.class_sizes,
        "size_bounds_ok": r.size_bounds_ok,
        "size_lower": jf(r.size_lower),
        "size_upper": jf(r.size_upper),
        "all_pairs_delta_eulerian": r.all_pairs_delta_eulerian,
        "skipped_pairs": r.skipped_pairs,
        "per_pair": per_pair,
        "total_packed": r.total_packed,
        "target": jf(r.target),
        "ratio": jf(r.ratio),
        "chernoff_tail_estimate": jf(r.chernoff_tail_estimate),
        "sum_squared_class_sizes": r.sum_squared_class_sizes,
        "cross_arcs": r.cross_arcs,
        "cross_arcs_identity_ok": r.cross_arcs_identity_ok,
        "global_certificate_ok": r.global_certificate_ok,
        "packing_cap_ok": r.packing_cap_ok,
    });
    let human = format!(
        "n={} m={}: packed {} cycles across {} pairs, ratio {:.4} of target, verifier {}\n",
        r.n,
        r.m,
        r.total_packed,
        r.per_pair.len(),
        r.ratio,
        if r.global_certificate_ok { "ok" } else { "FAILED" },
    );
    Ok(CommandOutput {
        report: RunReport::new(
            "experiment partition",
            sha256_hex(format!("partition {} {} {}", args.n, args.seed, args.delta).as_bytes()),
            vec![args.seed],
            payload,
        ),
        json: args.json,
        human,
        exit: ExitCode::SUCCESS,
    })
}

fn verify_cmd(args: VerifyArgs) -> Result<CommandOutput> {
    let target: VerifyTarget = args.target.into();
    let outcome = run_sweep(target, &args.sizes, args.samples, args.seed)?;
    let mut written = Vec::new();
    if !outcome.all_pass {
        for (name, content) in &outcome.counterexamples {
            std::fs::write(name, content)?;
            written.push(name.clone());
        }
    }
    let checks: Vec<Value> = outcome
        .checks
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "pass": c.pass,
                "ratio": c.ratio.map(crate::report::sig12),
            })
        })
        .collect();
    let payload = json!({
        "target": target.name(),
        "total": outcome.checks.len(),
        "failures": outcome.failures(),
        "all_pass": outcome.all_pass,
        "min_ratio": outcome.min_ratio.map(crate::report::sig12),
        "checks": checks,
        "counterexample_files": written,
    });
    let mut human = format!(
        "{}: {}/{} checks passed",
        target.name(),
        outcome.checks.len() - outcome.failures(),
        outcome.checks.len()
    );
    if let Some(min) = outcome.min_ratio {
        let _ = write!(human, ", min ratio {min:.6}");
    }
    human.push('\n');
    for file in &written {
        let _ = writeln!(human, "counterexample written to {file}");
    }
    let digest = sha256_hex(
        format!(
            "verify {} sizes={:?} samples={} seed={}",
            target.name(),
            args.sizes,
            args.samples,
            args.seed
        )
        .as_bytes(),
    );
    Ok(CommandOutput {
        report: RunReport::new("verify", digest, vec![args.seed], payload),
        json: args.json,
        human,
        exit: if outcome.all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) },
    })
}
