//! Command-line front end: set distances and geodesics, certified metric
//! embeddings, Schreier family queries, tree and vine ranks, and the glued
//! ball-embedding demo.
//!
//! Output is JSON on stdout (stable key order, sorted sets) unless
//! `--pretty` asks for human-readable tables. Exit codes: 0 on success, 1 on
//! domain errors (bad data, failed verification), 2 on usage errors.

use std::fmt::Display;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use interlace::embedding::{
    self, all_pairs, assignment_sets, finish_verification, scan_pairs, EmbeddingResult,
    PairScan, VerifyReport,
};
use interlace::gluing::{choose_radii, glue_check, GlueCheck, MaxNormSpace};
use interlace::interlacing::{bfs_distance, d_sum, geodesic, is_adjacent, BFS_UNIVERSE_CAP};
use interlace::metric::FiniteMetric;
use interlace::modulus::LinearModulus;
use interlace::ordinal::OrdinalCNF;
use interlace::rational::{format_rational, parse_rational, rat, Rational};
use interlace::schreier::{
    schreier_enumerate, schreier_member, schreier_points, spreading_check, spreading_search,
};
use interlace::set::FinSet;
use interlace::tree::FinTree;
use interlace::vine::Vine;

#[derive(Parser)]
#[command(
    name = "interlace",
    version,
    about = "Interlacing-graph distances, certified metric embeddings, and transfinite set families"
)]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance and adjacency of two sets.
    Dist {
        /// First set, comma-separated increasing integers ("" for the empty set).
        #[arg(long)]
        a: String,
        /// Second set.
        #[arg(long)]
        b: String,
        /// Re-derive the distance by breadth-first search and insist the two
        /// routes agree.
        #[arg(long)]
        oracle: bool,
    },
    /// An explicit shortest path between two sets.
    Geodesic {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Embed a metric space into fixed-cardinality sets with certified
    /// distortion.
    Embed(EmbedArgs),
    /// Re-check a stored embedding against its metric.
    Verify {
        /// Metric JSON file.
        #[arg(long)]
        metric: PathBuf,
        /// Embedding result JSON file.
        #[arg(long)]
        result: PathBuf,
        /// Worker threads for the pairwise recomputation.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Schreier family queries.
    #[command(subcommand)]
    Schreier(SchreierCmd),
    /// Derivation rank of a tree or vine file.
    Rank {
        /// Tree JSON file (array of integer sequences).
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Vine JSON file (array of bunches).
        #[arg(long)]
        vine: Option<PathBuf>,
    },
    /// Glue identity ball embeddings of rational d-space and verify the
    /// two-sided bound on random pairs.
    GlueDemo {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Number of radii in the ladder.
        #[arg(long, default_value_t = 20)]
        ladder: usize,
        /// Number of random pairs.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Worker threads for pair verification.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Finitely supported points with supports in a Schreier family.
    Points {
        /// Family level, an ordinal like "2", "w", "w^2+w*3+1".
        #[arg(long)]
        alpha: String,
        /// Supports live inside {1..n}.
        #[arg(long)]
        n: u32,
        /// Integer coefficients range over -m..=m.
        #[arg(long)]
        m: u32,
    },
}

#[derive(Args)]
struct EmbedArgs {
    /// Metric JSON file: {"labels":[...],"dist":[["0","2"],...]}.
    #[arg(long)]
    metric: PathBuf,
    /// Distortion parameter in (0,1), e.g. "1/2".
    #[arg(long)]
    epsilon: String,
    /// Re-verify the produced certificate independently.
    #[arg(long)]
    verify: bool,
    /// Also write the result JSON to this file.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for verification.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum SchreierCmd {
    /// Does a set belong to the family?
    Member {
        #[arg(long)]
        alpha: String,
        /// The set, comma-separated increasing integers.
        #[arg(long)]
        set: String,
    },
    /// All members with elements in {1..n}.
    Enum {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u32,
        /// Abort if more members than this would be produced.
        #[arg(long, default_value_t = 1 << 20)]
        limit: usize,
    },
    /// Check or search for a spreading list carrying S_alpha into S_beta.
    Spread {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Members are taken with elements in {1..n}.
        #[arg(long)]
        n: u32,
        /// Candidate list to check; omitted, a greedy search runs instead.
        #[arg(long)]
        list: Option<String>,
        /// Search gives up past this element.
        #[arg(long, default_value_t = 64)]
        max_element: u32,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain(e: impl Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Dist { a, b, oracle } => cmd_dist(pretty, &a, &b, oracle),
        Command::Geodesic { a, b } => cmd_geodesic(pretty, &a, &b),
        Command::Embed(args) => cmd_embed(pretty, args),
        Command::Verify {
            metric,
            result,
            jobs,
        } => cmd_verify(pretty, &metric, &result, jobs),
        Command::Schreier(cmd) => cmd_schreier(pretty, cmd),
        Command::Rank { tree, vine } => cmd_rank(pretty, tree, vine),
        Command::GlueDemo {
            dim,
            ladder,
            samples,
            seed,
            jobs,
        } => cmd_glue_demo(pretty, dim, ladder, samples, seed, jobs),
        Command::Points { alpha, n, m } => cmd_points(pretty, &alpha, n, m),
    }
}

fn parse_set(text: &str) -> Result<FinSet, Failure> {
    FinSet::parse(text).map_err(usage)
}

/// Parses an ordinal, warning on stderr when the input was not in canonical
/// form (the canonical rendering is what gets used).
fn parse_ordinal(text: &str) -> Result<OrdinalCNF, Failure> {
    let (ord, canonical) = OrdinalCNF::parse(text).map_err(usage)?;
    if !canonical {
        eprintln!("warning: ordinal {text:?} is not in canonical form; using {ord}");
    }
    Ok(ord)
}

fn emit(pretty: bool, value: &Value, render: impl FnOnce() -> String) {
    if pretty {
        println!("{}", render());
    } else {
        println!("{value}");
    }
}

fn set_to_value(s: &FinSet) -> Value {
    json!(s.elements())
}

fn cmd_dist(pretty: bool, a: &str, b: &str, oracle: bool) -> Result<u8, Failure> {
    let a = parse_set(a)?;
    let b = parse_set(b)?;
    let d = d_sum(&a, &b);
    let adjacent = is_adjacent(&a, &b);
    let mut value = json!({"d": d, "adjacent": adjacent});
    if oracle {
        let u = a.union(&b).len();
        if u > BFS_UNIVERSE_CAP {
            return Err(domain(format!(
                "BFS oracle refuses a universe of {u} elements (cap {BFS_UNIVERSE_CAP})"
            )));
        }
        let bfs = bfs_distance(&a, &b);
        if bfs != d {
            return Err(domain(format!(
                "distance routes disagree: direct {d}, breadth-first search {bfs}"
            )));
        }
        value["bfs"] = json!(bfs);
    }
    emit(pretty, &value, || {
        let mut line = format!("d({a}, {b}) = {d}; adjacent: {adjacent}");
        if oracle {
            line.push_str("; BFS agrees");
        }
        line
    });
    Ok(0)
}

fn cmd_geodesic(pretty: bool, a: &str, b: &str) -> Result<u8, Failure> {
    let a = parse_set(a)?;
    let b = parse_set(b)?;
    let path = geodesic(&a, &b);
    let value = json!({
        "length": path.len(),
        "path": path.vertices().iter().map(set_to_value).collect::<Vec<_>>(),
    });
    emit(pretty, &value, || {
        let mut out = format!("length {}\n", path.len());
        for (i, v) in path.vertices().iter().enumerate() {
            out.push_str(&format!("  {i}: {v}\n"));
        }
        out.pop();
        out
    });
    Ok(0)
}

fn read_metric(path: &PathBuf) -> Result<FiniteMetric, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| domain(format!("{}: {e}", path.display())))?;
    FiniteMetric::from_json(&text).map_err(domain)
}

/// The independent certificate recomputation, fanned out over `jobs`
/// threads when more than one is requested.
fn run_verification(m: &FiniteMetric, result: &EmbeddingResult, jobs: usize) -> VerifyReport {
    if jobs <= 1 {
        return embedding::verify_embedding(m, result);
    }
    let sets = match assignment_sets(m, result) {
        Ok(sets) => sets,
        Err(errors) => {
            return VerifyReport {
                certified: false,
                distortion: None,
                errors,
            }
        }
    };
    let pairs = all_pairs(m.len());
    let chunk = (pairs.len() / (jobs * 4)).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let scan = pool.install(|| {
        pairs
            .par_chunks(chunk)
            .map(|c| scan_pairs(m, &sets, result.scale, c))
            .reduce(PairScan::default, PairScan::merge)
    });
    finish_verification(result, scan)
}

fn report_value(report: &VerifyReport) -> Value {
    json!({
        "certified": report.certified,
        "distortion": report.distortion.as_ref().map(format_rational),
        "errors": report.errors,
    })
}

fn cmd_embed(pretty: bool, args: EmbedArgs) -> Result<u8, Failure> {
    let m = read_metric(&args.metric)?;
    let epsilon: Rational = parse_rational(&args.epsilon).map_err(usage)?;
    if epsilon <= rat(0, 1) || epsilon >= rat(1, 1) {
        return Err(usage(format!(
            "EPSILON_OUT_OF_RANGE: epsilon must satisfy 0 < epsilon < 1, got {}",
            args.epsilon
        )));
    }
    let result = embedding::embed(&m, &epsilon).map_err(domain)?;
    let mut exit = 0u8;
    if args.verify {
        let report = run_verification(&m, &result, args.jobs);
        if report.certified {
            eprintln!(
                "verification: certified, distortion {}",
                report
                    .distortion
                    .as_ref()
                    .map(format_rational)
                    .unwrap_or_default()
            );
        } else {
            for e in &report.errors {
                eprintln!("verification: {e}");
            }
            exit = 1;
        }
    }
    let text = result.to_json();
    if let Some(out) = &args.output {
        fs::write(out, &text).map_err(|e| domain(format!("{}: {e}", out.display())))?;
    }
    let value: Value = serde_json::from_str(&text).expect("result JSON re-parses");
    emit(pretty, &value, || {
        let mut out = format!(
            "k = {}, scale = {}, distortion = {}, bound on k = {}\n",
            result.k,
            result.scale,
            format_rational(&result.distortion),
            result.bound_k
        );
        for (label, set) in &result.assignment {
            out.push_str(&format!("  {label}: {set}\n"));
        }
        out.pop();
        out
    });
    Ok(exit)
}

fn cmd_verify(
    pretty: bool,
    metric: &PathBuf,
    result: &PathBuf,
    jobs: usize,
) -> Result<u8, Failure> {
    let m = read_metric(metric)?;
    let text = fs::read_to_string(result)
        .map_err(|e| domain(format!("{}: {e}", result.display())))?;
    let stored = EmbeddingResult::from_json(&text).map_err(domain)?;
    let report = run_verification(&m, &stored, jobs);
    let value = report_value(&report);
    emit(pretty, &value, || {
        let mut out = if report.certified {
            "certified".to_owned()
        } else {
            "NOT certified".to_owned()
        };
        if let Some(d) = &report.distortion {
            out.push_str(&format!(", distortion {}", format_rational(d)));
        }
        for e in &report.errors {
            out.push_str(&format!("\n  {e}"));
        }
        out
    });
    Ok(if report.certified { 0 } else { 1 })
}

fn cmd_schreier(pretty: bool, cmd: SchreierCmd) -> Result<u8, Failure> {
    match cmd {
        SchreierCmd::Member { alpha, set } => {
            let ord = parse_ordinal(&alpha)?;
            let a = parse_set(&set)?;
            let member = schreier_member(&a, &ord);
            let value = json!({
                "alpha": ord.to_string(),
                "set": a.elements(),
                "member": member,
            });
            emit(pretty, &value, || {
                format!(
                    "{a} is {}a member of the level-{ord} family",
                    if member { "" } else { "not " }
                )
            });
            Ok(0)
        }
        SchreierCmd::Enum { alpha, n, limit } => {
            let ord = parse_ordinal(&alpha)?;
            let mut members = schreier_enumerate(&ord, n, limit).map_err(domain)?;
            members.sort();
            let value = json!({
                "alpha": ord.to_string(),
                "n": n,
                "count": members.len(),
                "members": members.iter().map(set_to_value).collect::<Vec<_>>(),
            });
            emit(pretty, &value, || {
                let mut out = format!("{} members over {{1..{n}}}\n", members.len());
                for m in &members {
                    out.push_str(&format!("  {m}\n"));
                }
                out.pop();
                out
            });
            Ok(0)
        }
        SchreierCmd::Spread {
            alpha,
            beta,
            n,
            list,
            max_element,
        } => {
            let a = parse_ordinal(&alpha)?;
            let b = parse_ordinal(&beta)?;
            let (l, valid) = match list {
                Some(text) => {
                    let l: Vec<u32> = text
                        .split(',')
                        .map(|tok| tok.trim().parse::<u32>())
                        .collect::<Result<_, _>>()
                        .map_err(usage)?;
                    let valid = spreading_check(&l, &a, &b, n).map_err(domain)?;
                    (l, valid)
                }
                None => {
                    let l = spreading_search(&a, &b, n, max_element).map_err(domain)?;
                    (l, true)
                }
            };
            let value = json!({
                "alpha": a.to_string(),
                "beta": b.to_string(),
                "n": n,
                "list": l,
                "valid": valid,
            });
            emit(pretty, &value, || {
                format!(
                    "list {:?} {} members of level {a} into level {b}",
                    l,
                    if valid { "carries" } else { "does NOT carry" }
                )
            });
            Ok(0)
        }
    }
}

fn cmd_rank(
    pretty: bool,
    tree: Option<PathBuf>,
    vine: Option<PathBuf>,
) -> Result<u8, Failure> {
    let (rank, what) = match (tree, vine) {
        (Some(path), None) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| domain(format!("{}: {e}", path.display())))?;
            let tree = FinTree::from_json(&text).map_err(domain)?;
            (tree.rank(), "tree")
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| domain(format!("{}: {e}", path.display())))?;
            let vine = Vine::from_json(&text).map_err(domain)?;
            (vine.rank(), "vine")
        }
        _ => {
            return Err(usage("pass exactly one of --tree or --vine"));
        }
    };
    let value = json!({ "rank": rank });
    emit(pretty, &value, || format!("{what} rank = {rank}"));
    Ok(0)
}

fn cmd_glue_demo(
    pretty: bool,
    dim: usize,
    ladder_len: usize,
    samples: usize,
    seed: u64,
    jobs: usize,
) -> Result<u8, Failure> {
    if dim == 0 || ladder_len == 0 {
        return Err(usage("dim and ladder must be positive"));
    }
    let space = MaxNormSpace::new(dim);
    let id = LinearModulus::identity();
    let ladder = choose_radii(&id, &id, ladder_len).map_err(domain)?;

    // Sampling is sequential so a seed fully determines the pair list,
    // whatever the thread count.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 100 * dim as i64;
    let point = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
        (0..dim)
            .map(|_| {
                let den = rng.gen_range(1..=8i64);
                let num = rng.gen_range(-span..=span);
                rat(num, den)
            })
            .collect()
    };
    let pairs: Vec<(Vec<Rational>, Vec<Rational>)> = (0..samples)
        .map(|_| (point(&mut rng), point(&mut rng)))
        .collect();

    let check =
        |(x, y): &(Vec<Rational>, Vec<Rational>)| glue_check(&space, &ladder, &id, &id, x, y);
    let checks: Vec<GlueCheck> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| pairs.par_iter().map(check).collect::<Result<_, _>>())
            .map_err(domain)?
    } else {
        pairs
            .iter()
            .map(check)
            .collect::<Result<_, _>>()
            .map_err(domain)?
    };

    let pair_values: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "t": format_rational(&c.distance),
                "observed": format_rational(&c.observed),
                "lower": format_rational(&c.lower),
                "upper": format_rational(&c.upper),
            })
        })
        .collect();
    let violations: Vec<Value> = checks
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.ok())
        .map(|(i, c)| {
            json!({
                "pair": i,
                "t": format_rational(&c.distance),
                "observed": format_rational(&c.observed),
                "lower": format_rational(&c.lower),
                "upper": format_rational(&c.upper),
            })
        })
        .collect();
    let violation_count = violations.len();
    let value = json!({
        "dim": dim,
        "ladder": ladder.radii(),
        "samples": samples,
        "seed": seed,
        "pairs": pair_values,
        "violations": violations,
    });
    emit(pretty, &value, || {
        format!(
            "{} pairs in dimension {dim}, ladder {:?}: {} violations",
            samples,
            ladder.radii(),
            violation_count
        )
    });
    Ok(if violation_count == 0 { 0 } else { 1 })
}

fn cmd_points(pretty: bool, alpha: &str, n: u32, m: u32) -> Result<u8, Failure> {
    let ord = parse_ordinal(alpha)?;
    let points = schreier_points(&ord, n, m, 1 << 20).map_err(domain)?;
    let point_values: Vec<Value> = points
        .iter()
        .map(|p| {
            let obj: serde_json::Map<String, Value> = p
                .coeffs()
                .iter()
                .map(|(i, c)| (i.to_string(), Value::String(format_rational(c))))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let value = json!({
        "alpha": ord.to_string(),
        "n": n,
        "m": m,
        "count": points.len(),
        "points": point_values,
    });
    emit(pretty, &value, || {
        let mut out = format!("{} points\n", points.len());
        for p in &points {
            let coeffs = p
                .coeffs()
                .iter()
                .map(|(i, c)| format!("{i}:{}", format_rational(c)))
                .collect::<Vec<_>>()
                .join(", ");
            out.push_str(&format!("  {{{coeffs}}}\n"));
        }
        out.pop();
        out
    });
    Ok(0)
}
