use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand_distr::StandardNormal;

use jlt_core::harness::{bench_embed, estimate_failure, Execution, FailureReport, VectorGen};
use jlt_core::kmeans::{jl_kmeans, LloydConfig};
use jlt_core::seed::rng_from_seed;
use jlt_core::sparse::fh_hard_instance;
use jlt_core::streaming::{sketch_merge, AmsSketch, CountSketch, Sketch};
use jlt_core::{derive_seed, target_dim_union, JlParams, LinearEmbedding, TransformKind};

use crate::error::{CliError, CliResult, ExitCode};
use crate::format::{InputFormat, StreamFile, VectorFile};

#[derive(Debug, Parser)]
#[command(name = "jlt", version, about = "Johnson-Lindenstrauss transforms and sketches")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a JLV1 vector file.
    Gen(GenArgs),
    /// Embed every row of a vector file with one sampled transform.
    Embed(EmbedArgs),
    /// Monte Carlo estimate of the failure probability.
    Verify(VerifyArgs),
    /// Sketch a turnstile stream and answer a query.
    Sketch(SketchArgs),
    /// Cluster a vector file before and after embedding.
    Kmeans(KmeansArgs),
    /// Time transform application.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Gaussian,
    Sphere,
    BinaryK,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub count: usize,
    #[arg(long, value_enum)]
    pub dist: Dist,
    /// Number of ones for binary-k.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Transform selection shared by embed, verify and kmeans.
#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, value_parser = parse_kind)]
    pub transform: TransformKind,
    /// Nonzeros per column for block, graph and dks.
    #[arg(long)]
    pub s: Option<usize>,
    /// Achlioptas nonzero probability.
    #[arg(long)]
    pub q: Option<f64>,
    /// FJLT density constant.
    #[arg(long)]
    pub c_q: Option<f64>,
}

impl TransformArgs {
    pub fn kind(&self) -> CliResult<TransformKind> {
        let mut kind = self.transform;
        let mut used = (self.s.is_none(), self.q.is_none(), self.c_q.is_none());
        match &mut kind {
            TransformKind::Block { s } | TransformKind::Graph { s } | TransformKind::Dks { s } => {
                if self.s.is_some() {
                    *s = self.s;
                    used.0 = true;
                }
            }
            TransformKind::Achlioptas { q } => {
                if let Some(v) = self.q {
                    *q = v;
                    used.1 = true;
                }
            }
            TransformKind::Fjlt { c_q } => {
                if let Some(v) = self.c_q {
                    *c_q = v;
                    used.2 = true;
                }
            }
            _ => {}
        }
        if used != (true, true, true) {
            return Err(CliError::usage(format!("flag not applicable to transform `{}`", kind.name())));
        }
        Ok(kind)
    }
}

fn parse_kind(s: &str) -> Result<TransformKind, String> {
    s.parse::<TransformKind>().map_err(|e| {
        let names: Vec<&str> = TransformKind::catalog().iter().map(|k| k.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub transform: TransformArgs,
    /// Expected input dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Target dimension; defaults to the union-bound formula.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: InputFormat,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Sphere,
    BinaryK,
    FhHard,
    LwtHard,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub transform: TransformArgs,
    #[arg(long)]
    pub d: usize,
    #[arg(long, conflicts_with = "auto_m", required_unless_present = "auto_m")]
    pub m: Option<usize>,
    #[arg(long)]
    pub auto_m: bool,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = GenKind::Sphere)]
    pub gen: GenKind,
    /// k for binary-k and fh-hard.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SketchKind {
    Ams,
    Cs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Query {
    F2,
    Point(u64),
    TopK(usize),
}

fn parse_query(s: &str) -> Result<Query, String> {
    match s.split_once(':') {
        None if s == "f2" => Ok(Query::F2),
        Some(("point", i)) => i.parse().map(Query::Point).map_err(|e| format!("bad index: {e}")),
        Some(("topk", k)) => match k.parse() {
            Ok(0) | Err(_) => Err(format!("bad k `{k}`")),
            Ok(k) => Ok(Query::TopK(k)),
        },
        _ => Err(format!("unknown query `{s}`; expected f2, point:<i> or topk:<k>")),
    }
}

#[derive(Debug, Args)]
pub struct SketchArgs {
    #[arg(long, value_enum)]
    pub kind: SketchKind,
    /// Universe size; may instead come from the stream header.
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stream shard; repeat to merge several.
    #[arg(long, required = true)]
    pub stream: Vec<PathBuf>,
    #[arg(long, value_parser = parse_query)]
    pub query: Query,
}

#[derive(Debug, Args)]
pub struct KmeansArgs {
    #[command(flatten)]
    pub transform: TransformArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: InputFormat,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_kind, required = true)]
    pub kinds: Vec<TransformKind>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub d_list: Vec<usize>,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Embed(a) => cmd_embed(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Sketch(a) => cmd_sketch(&a, &mut std::io::stdout().lock()),
        Command::Kmeans(a) => cmd_kmeans(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn generate(a: &GenArgs) -> CliResult<VectorFile> {
    if a.k.is_some() && a.dist != Dist::BinaryK {
        return Err(CliError::usage("--k only applies to --dist binary-k"));
    }
    let rows = (0..a.count)
        .map(|i| {
            let seed = derive_seed(a.seed, i as u64);
            Ok(match a.dist {
                Dist::Gaussian => {
                    let mut rng = rng_from_seed(seed);
                    (0..a.d).map(|_| rng.sample(StandardNormal)).collect()
                }
                Dist::Sphere => VectorGen::UnitSphere.generate(a.d, seed)?,
                Dist::BinaryK => {
                    let k = a.k.ok_or_else(|| CliError::usage("--dist binary-k needs --k"))?;
                    fh_hard_instance(k, a.d)?
                }
            })
        })
        .collect::<CliResult<Vec<Vec<f64>>>>()?;
    VectorFile::new(a.d, rows)
}

fn cmd_gen(a: &GenArgs) -> CliResult<ExitCode> {
    generate(a)?.write(&a.out)?;
    Ok(ExitCode::Pass)
}

fn cmd_embed(a: &EmbedArgs) -> CliResult<ExitCode> {
    let kind = a.transform.kind()?;
    let input = VectorFile::read(&a.input, a.format)?;
    if let Some(d) = a.d {
        if d != input.dim {
            return Err(CliError::dim(format!("--d {d} but input has dim {}", input.dim)));
        }
    }
    let m = match (kind, a.m) {
        (TransformKind::Identity, _) => input.dim,
        (_, Some(m)) => m,
        (_, None) => target_dim_union(a.eps, a.delta)?,
    };
    let f = kind.sample(&JlParams::new(input.dim, m, a.eps, a.delta, a.seed)?)?;
    let rows = input.rows.iter().map(|x| f.apply(x)).collect::<Result<Vec<_>, _>>()?;
    VectorFile::new(f.target_dim(), rows)?.write(&a.out)?;
    Ok(ExitCode::Pass)
}

/// Acceptance threshold for a measured failure rate: δ plus three binomial
/// standard deviations.
pub fn failure_threshold(delta: f64, trials: u64) -> f64 {
    delta + 3.0 * (delta / trials as f64).sqrt()
}

fn cmd_verify(a: &VerifyArgs) -> CliResult<ExitCode> {
    let kind = a.transform.kind()?;
    let gen = match (a.gen, a.k) {
        (GenKind::Sphere, None) => VectorGen::UnitSphere,
        (GenKind::BinaryK, Some(k)) => VectorGen::BinaryK(k),
        (GenKind::FhHard, Some(k)) => VectorGen::FhHard(k),
        (GenKind::LwtHard, None) => VectorGen::LwtHard { delta: a.delta },
        (GenKind::BinaryK | GenKind::FhHard, None) => {
            return Err(CliError::usage("this generator needs --k"))
        }
        (_, Some(_)) => return Err(CliError::usage("--k only applies to binary-k and fh-hard")),
    };
    let p = if a.auto_m || matches!(kind, TransformKind::Identity) {
        let m = if matches!(kind, TransformKind::Identity) { a.d } else { target_dim_union(a.eps, a.delta)? };
        JlParams::new(a.d, m, a.eps, a.delta, a.seed)?
    } else {
        JlParams::new(a.d, a.m.expect("clap enforces --m or --auto-m"), a.eps, a.delta, a.seed)?
    };
    let stats = estimate_failure(&kind, &p, &gen, a.trials, Execution::Parallel)?;
    let report = FailureReport::new(&kind, &p, &stats);
    let json = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
    write_text(a.json.as_deref(), &json)?;
    let pass = stats.failure_rate <= failure_threshold(a.delta, a.trials);
    if a.json.is_some() {
        println!(
            "{}: {} failures in {} trials (rate {:.5}, threshold {:.5})",
            if pass { "pass" } else { "fail" },
            stats.failures,
            stats.trials,
            stats.failure_rate,
            failure_threshold(a.delta, a.trials)
        );
    }
    Ok(if pass { ExitCode::Pass } else { ExitCode::StatisticalFail })
}

fn sketch_streams<S: Sketch + Clone>(
    shards: &[StreamFile],
    make: impl Fn() -> jlt_core::Result<S>,
) -> CliResult<S> {
    let mut merged: Option<S> = None;
    for shard in shards {
        let mut s = make()?;
        s.update_all(shard.updates.iter().copied())?;
        merged = Some(match merged {
            None => s,
            Some(acc) => sketch_merge(&acc, &s)?,
        });
    }
    Ok(merged.expect("at least one stream"))
}

pub fn cmd_sketch(a: &SketchArgs, out: &mut impl Write) -> CliResult<ExitCode> {
    let shards = a.stream.iter().map(|p| StreamFile::read(p)).collect::<CliResult<Vec<_>>>()?;
    let mut d = a.d;
    for s in &shards {
        match (d, s.d) {
            (None, h) => d = h,
            (Some(x), Some(h)) if x != h => {
                return Err(CliError::dim(format!("stream header d={h} disagrees with d={x}")))
            }
            _ => {}
        }
    }
    let d = d.ok_or_else(|| CliError::usage("universe size unknown; pass --d or a #d= header"))?;
    if let Some(u) = shards.iter().flat_map(|s| &s.updates).find(|u| u.index >= d) {
        return Err(CliError::dim(format!("index {} outside [0, {d})", u.index)));
    }
    let io_err = |e: std::io::Error| CliError::new(ExitCode::Io, e.to_string());
    match (a.kind, a.query) {
        (SketchKind::Ams, Query::F2) => {
            let s = sketch_streams(&shards, || AmsSketch::new(d, a.eps, a.delta, a.seed))?;
            writeln!(out, "{}", s.f2_query()).map_err(io_err)?;
        }
        (SketchKind::Ams, _) => return Err(CliError::usage("AMS sketches only answer f2")),
        (SketchKind::Cs, q) => {
            let s = sketch_streams(&shards, || CountSketch::new(d, a.eps, a.delta, a.seed))?;
            match q {
                Query::F2 => writeln!(out, "{}", s.f2_query()).map_err(io_err)?,
                Query::Point(i) => writeln!(out, "{}", s.point_query(i)?).map_err(io_err)?,
                Query::TopK(k) => {
                    // candidates are the indices that appear in the stream
                    let seen: BTreeSet<u64> =
                        shards.iter().flat_map(|s| &s.updates).map(|u| u.index).collect();
                    let mut est = seen
                        .into_iter()
                        .map(|i| Ok((i, s.point_query(i)?)))
                        .collect::<CliResult<Vec<(u64, f64)>>>()?;
                    est.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
                    for (i, e) in est.into_iter().take(k) {
                        writeln!(out, "{i},{e}").map_err(io_err)?;
                    }
                }
            }
        }
    }
    Ok(ExitCode::Pass)
}

fn cmd_kmeans(a: &KmeansArgs) -> CliResult<ExitCode> {
    let kind = a.transform.kind()?;
    let input = VectorFile::read(&a.input, a.format)?;
    let cfg = LloydConfig { max_iter: a.max_iter, ..LloydConfig::default() };
    let report = jl_kmeans(&input.rows, a.k, a.eps, kind, a.m, a.seed, &cfg)?;
    let json = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
    write_text(a.json.as_deref(), &json)?;
    Ok(ExitCode::Pass)
}

fn cmd_bench(a: &BenchArgs) -> CliResult<ExitCode> {
    if a.reps < 5 {
        return Err(CliError::usage("--reps must be at least 5"));
    }
    let recs = bench_embed(&a.kinds, &a.d_list, a.m, a.reps, a.seed)?;
    let mut csv = String::from("kind,d,m,median_ns\n");
    for r in recs {
        csv.push_str(&format!("{},{},{},{:.0}\n", r.kind, r.d, r.m, r.median_ns));
    }
    write_text(a.out.as_deref(), &csv)?;
    Ok(ExitCode::Pass)
}
