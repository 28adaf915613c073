use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use rainbow_core::apps::{harmonious_label, odc_construct, ringel_pack, smallest_harmonious, PackRegime};
use rainbow_core::embed::{embed_tree, AttemptTrace, Method, PipelineConfig};
use rainbow_core::group::Group;
use rainbow_core::io::{colouring_to_json, ColouringSpec};
use rainbow_core::stats::{
    stat_colour_diversity, stat_colour_multiplicity, stat_colour_neighbourhood, stat_edge_density, Coupling, SetShape,
    StatConfig,
};
use rainbow_core::verify::{check_harmonious, check_odc, check_packing, check_rainbow_embedding, Verdict};
use rainbow_core::{Error, GroupSpec, Tree};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::inputs::{load_colouring, load_tree, parse_group, tree_shape, InputDigest};
use crate::manifest::{emit, emit_json, RunManifest};
use crate::{
    BenchArgs, Cli, Command, CouplingArg, EmbedArgs, GenTarget, LabelArgs, LemmaArg, OdcArgs, PackArgs, SearchArgs,
    ShapeArg, StatsArgs, VerifyArgs, VerifyKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Failed,
}

impl Status {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Success
        } else {
            Status::Failed
        }
    }
}

struct Run {
    argv: Vec<String>,
    start: Instant,
}

impl Run {
    fn manifest(&self, subcommand: &str, config: Value, inputs: Vec<InputDigest>, seed: Option<u64>) -> RunManifest {
        RunManifest {
            subcommand: subcommand.into(),
            argv: self.argv.clone(),
            config,
            inputs,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_ms: self.start.elapsed().as_secs_f64() * 1000.0,
            output_sha256: None,
        }
    }
}

/// A result, or the reason none was produced, plus an optional validator verdict.
#[derive(Serialize)]
struct Report<T: Serialize> {
    success: bool,
    tree: Tree,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    result: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    validation: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl<T: Serialize> Report<T> {
    fn ok(tree: Tree, result: T, validation: Verdict) -> Self {
        Report { success: validation.passed(), tree, result: Some(result), validation: Some(validation), error: None }
    }

    fn failed(tree: Tree, error: String) -> Self {
        Report { success: false, tree, result: None, validation: None, error: Some(error) }
    }
}

pub fn run(cli: Cli) -> Result<Status> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().context("starting the worker pool")?;
    }
    let run = Run { argv: std::env::args().collect(), start: Instant::now() };
    match cli.command {
        Command::Gen(args) => gen(&run, args.what),
        Command::Embed(args) => embed(&run, args),
        Command::Pack(args) => pack(&run, args),
        Command::Label(args) => label(&run, args),
        Command::Odc(args) => odc(&run, args),
        Command::Verify(args) => verify(&run, args),
        Command::Stats(args) => stats(&run, args),
        Command::Bench(args) => bench(&run, args),
    }
}

fn pipeline_config(search: &SearchArgs) -> PipelineConfig {
    PipelineConfig {
        epsilon: search.epsilon,
        mu: search.mu,
        seed: search.seed,
        retries: search.retries,
        search_fallback: !search.no_fallback,
        ..PipelineConfig::default()
    }
}

/// Infeasibility is a validated outcome; every other library error is fatal.
fn infeasible<T>(result: rainbow_core::Result<T>) -> Result<std::result::Result<T, String>> {
    match result {
        Ok(value) => Ok(Ok(value)),
        Err(Error::Infeasible(msg)) => Ok(Err(msg)),
        Err(e) => Err(e.into()),
    }
}

fn write_dot(path: Option<&Path>, text: impl FnOnce() -> String) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, text()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn gen(run: &Run, target: GenTarget) -> Result<Status> {
    match target {
        GenTarget::Colouring { spec, explicit, out } => {
            let parsed = ColouringSpec::parse_inline(&spec)?;
            let colouring = parsed.build()?;
            let value = if explicit {
                let n = colouring.n();
                let edges: Vec<(usize, usize, u64)> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .map(|(u, v)| (u, v, colouring.colour_label(colouring.colour(u, v))))
                    .collect();
                json!({ "n": n, "k": colouring.k(), "edges": edges })
            } else {
                colouring_to_json(&colouring)
            };
            let manifest = run.manifest("gen colouring", json!({ "spec": parsed, "explicit": explicit }), vec![], None);
            emit_json(out.as_deref(), &value, manifest)?;
        }
        GenTarget::Tree { shape, seed, out } => {
            let tree = tree_shape(&shape, seed)?;
            let manifest = run.manifest("gen tree", json!({ "shape": shape }), vec![], Some(seed));
            emit(out.as_deref(), &tree.to_text(), manifest)?;
        }
    }
    Ok(Status::Success)
}

#[derive(Serialize)]
struct Trace<'a> {
    method: Method,
    attempts: &'a [AttemptTrace],
}

fn embed(run: &Run, args: EmbedArgs) -> Result<Status> {
    let (colouring, colouring_digest) = load_colouring(&args.colouring)?;
    let (tree, tree_digest) = load_tree(&args.tree, args.search.seed)?;
    let config = pipeline_config(&args.search);
    let manifest = run.manifest(
        "embed",
        serde_json::to_value(&config)?,
        vec![colouring_digest, tree_digest],
        Some(config.seed),
    );
    let outcome = match infeasible(embed_tree(&colouring, &tree, &config))? {
        Ok(outcome) => outcome,
        Err(msg) => {
            let body = json!({ "success": false, "tree": tree, "error": msg });
            emit_json(args.output.out.as_deref(), &body, manifest)?;
            return Ok(Status::Failed);
        }
    };
    let trace = Trace { method: outcome.method, attempts: &outcome.attempts };
    let body = match &outcome.embedding {
        Some(e) => {
            let verdict = check_rainbow_embedding(&colouring, &tree, &e.map)?;
            write_dot(args.output.dot.as_deref(), || crate::dot::embedding(&colouring, &tree, &e.map))?;
            json!({
                "success": verdict.passed(),
                "tree": tree,
                "map": e.map,
                "colours": e.colours,
                "validation": verdict,
                "trace": trace,
            })
        }
        None => json!({ "success": false, "tree": tree, "map": null, "colours": null, "trace": trace }),
    };
    let success = body["success"].as_bool().unwrap_or(false);
    emit_json(args.output.out.as_deref(), &body, manifest)?;
    Ok(Status::from_pass(success))
}

fn pack(run: &Run, args: PackArgs) -> Result<Status> {
    let (tree, digest) = load_tree(&args.tree, args.search.seed)?;
    let config = pipeline_config(&args.search);
    let regime = if args.exact { PackRegime::Exact } else { PackRegime::Asymptotic { epsilon: args.slack } };
    let manifest = run.manifest(
        "pack",
        json!({ "regime": regime, "pipeline": config }),
        vec![digest],
        Some(config.seed),
    );
    let report = match infeasible(ringel_pack(&tree, regime, &config))? {
        Ok(packing) => {
            let verdict = check_packing(packing.host, &tree, &packing.copies, packing.decomposition)?;
            write_dot(args.output.dot.as_deref(), || crate::dot::copies(packing.host, &tree, &packing.copies))?;
            Report::ok(tree.clone(), packing, verdict)
        }
        Err(msg) => Report::failed(tree.clone(), msg),
    };
    let success = report.success;
    emit_json(args.output.out.as_deref(), &report, manifest)?;
    Ok(Status::from_pass(success))
}

fn label(run: &Run, args: LabelArgs) -> Result<Status> {
    let (tree, digest) = load_tree(&args.tree, args.search.seed)?;
    let config = pipeline_config(&args.search);
    let group = args.group.as_deref().map(parse_group).transpose()?;
    let max_order = args.max_order.unwrap_or_else(|| (1.25 * tree.len() as f64).ceil() as usize);
    let manifest = run.manifest(
        "label",
        json!({ "group": group, "max_order": max_order, "pipeline": config }),
        vec![digest],
        Some(config.seed),
    );
    let found = match &group {
        Some(spec) => harmonious_label(&tree, spec, &config),
        None => smallest_harmonious(&tree, max_order, &config),
    };
    let report = match infeasible(found)? {
        Ok(labelling) => {
            let verdict = check_harmonious(&tree, &Group::new(labelling.group.clone())?, &labelling.labels)?;
            Report::ok(tree.clone(), labelling, verdict)
        }
        Err(msg) => Report::failed(tree.clone(), msg),
    };
    let success = report.success;
    emit_json(args.out.as_deref(), &report, manifest)?;
    Ok(Status::from_pass(success))
}

fn odc(run: &Run, args: OdcArgs) -> Result<Status> {
    let (tree, digest) = load_tree(&args.tree, args.search.seed)?;
    let config = pipeline_config(&args.search);
    let manifest = run.manifest("odc", json!({ "rank": args.rank, "pipeline": config }), vec![digest], Some(config.seed));
    let report = match infeasible(odc_construct(&tree, args.rank, &config))? {
        Ok(cover) => {
            let n = cover.copies.len();
            let verdict = check_odc(n, &tree, &cover.copies)?;
            write_dot(args.output.dot.as_deref(), || crate::dot::copies(n, &tree, &cover.copies))?;
            Report::ok(tree.clone(), cover, verdict)
        }
        Err(msg) => Report::failed(tree.clone(), msg),
    };
    let success = report.success;
    emit_json(args.output.out.as_deref(), &report, manifest)?;
    Ok(Status::from_pass(success))
}

fn field<T: DeserializeOwned>(value: &Value, name: &str) -> Result<T> {
    let raw = value.get(name).ok_or_else(|| anyhow!("input has no {name:?} field"))?;
    serde_json::from_value(raw.clone()).with_context(|| format!("malformed {name:?} field"))
}

fn verify(run: &Run, args: VerifyArgs) -> Result<Status> {
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", args.input.display()))?;
    let mut inputs = vec![InputDigest {
        flag: "--input".into(),
        source: args.input.display().to_string(),
        sha256: crate::inputs::digest(text.as_bytes()),
    }];
    let tree = match &args.tree {
        Some(arg) => {
            let (tree, digest) = load_tree(arg, 0)?;
            inputs.push(digest);
            tree
        }
        None => field::<Tree>(&value, "tree").context("pass --tree or verify a file that records its tree")?,
    };
    let verdict = match args.kind {
        VerifyKind::Embedding => {
            let spec = args.colouring.as_deref().ok_or_else(|| anyhow!("--colouring is required for embeddings"))?;
            let (colouring, digest) = load_colouring(spec)?;
            inputs.push(digest);
            check_rainbow_embedding(&colouring, &tree, &field::<Vec<usize>>(&value, "map")?)?
        }
        VerifyKind::Packing => {
            let host: usize = field(&value, "host")?;
            check_packing(host, &tree, &field::<Vec<Vec<usize>>>(&value, "copies")?, args.exact)?
        }
        VerifyKind::Odc => {
            let copies: Vec<Vec<usize>> = field(&value, "copies")?;
            let n = match value.get("rank") {
                Some(_) => 1usize << field::<u32>(&value, "rank")?,
                None => copies.len(),
            };
            check_odc(n, &tree, &copies)?
        }
        VerifyKind::Harmonious => {
            let spec: GroupSpec = match &args.group {
                Some(g) => parse_group(g)?,
                None => field(&value, "group")?,
            };
            check_harmonious(&tree, &Group::new(spec)?, &field::<Vec<usize>>(&value, "labels")?)?
        }
    };
    let kind = format!("{:?}", args.kind).to_lowercase();
    let manifest = run.manifest("verify", json!({ "kind": kind, "exact": args.exact }), inputs, None);
    let passed = verdict.passed();
    emit_json(args.out.as_deref(), &json!({ "kind": kind, "result": verdict }), manifest)?;
    Ok(Status::from_pass(passed))
}

fn stats(run: &Run, args: StatsArgs) -> Result<Status> {
    let (colouring, digest) = load_colouring(&args.colouring)?;
    let config = StatConfig {
        trials: args.trials,
        seed: args.seed,
        epsilon: args.epsilon,
        shape: match args.shape {
            ShapeArg::Random => SetShape::Random,
            ShapeArg::Interval => SetShape::Interval,
        },
        coupling: match args.coupling {
            CouplingArg::Independent => Coupling::Independent,
            CouplingArg::Paired => Coupling::Paired,
        },
    };
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("{flag} is required for this lemma"));
    let summary = match args.lemma {
        LemmaArg::EdgeDensity => stat_edge_density(&colouring, args.p, need(args.a, "--a")?, need(args.b, "--b")?, &config)?,
        LemmaArg::Multiplicity => stat_colour_multiplicity(&colouring, args.p, need(args.a, "--a")?, &config)?,
        LemmaArg::Diversity => stat_colour_diversity(&colouring, args.p, need(args.a, "--a")?, args.b, &config)?,
        LemmaArg::Neighbourhood => stat_colour_neighbourhood(&colouring, args.p, args.q.unwrap_or(args.p), &config)?,
    };
    let manifest = run.manifest(
        "stats",
        json!({ "stat": config, "p": args.p, "q": args.q, "a": args.a, "b": args.b, "min_pass_rate": args.min_pass_rate }),
        vec![digest],
        Some(args.seed),
    );
    let pass = summary.pass_rate >= args.min_pass_rate;
    emit_json(args.out.as_deref(), &summary, manifest)?;
    Ok(Status::from_pass(pass))
}

#[derive(Serialize)]
struct BenchRun {
    tree: String,
    seed: u64,
    vertices: usize,
    success: bool,
    method: Option<Method>,
    attempts: usize,
    failures: Vec<String>,
    millis: f64,
}

fn bench(run: &Run, args: BenchArgs) -> Result<Status> {
    let (colouring, digest) = load_colouring(&args.colouring)?;
    let mut jobs: Vec<(String, u64, Tree)> = Vec::new();
    let mut inputs = vec![digest];
    for arg in &args.tree {
        for seed in 0..args.seeds {
            let (tree, d) = load_tree(arg, seed)?;
            if seed == 0 {
                inputs.push(d);
            }
            jobs.push((arg.clone(), seed, tree));
        }
    }
    let base = PipelineConfig { epsilon: args.epsilon, mu: args.mu, retries: args.retries, ..PipelineConfig::default() };
    let runs: Vec<BenchRun> = jobs
        .par_iter()
        .map(|(name, seed, tree)| {
            let config = PipelineConfig { seed: *seed, ..base.clone() };
            let start = Instant::now();
            let result = embed_tree(&colouring, tree, &config);
            let millis = start.elapsed().as_secs_f64() * 1000.0;
            let mut bench = BenchRun {
                tree: name.clone(),
                seed: *seed,
                vertices: tree.len(),
                success: false,
                method: None,
                attempts: 0,
                failures: Vec::new(),
                millis,
            };
            match result {
                Ok(outcome) => {
                    bench.success = outcome.embedding.as_ref().is_some_and(|e| e.validate(&colouring, tree).is_ok());
                    bench.method = Some(outcome.method);
                    bench.attempts = outcome.attempts.len();
                    bench.failures = outcome.failures().iter().map(|f| format!("{:?}: {}", f.stage, f.detail)).collect();
                }
                Err(e) => bench.failures.push(e.to_string()),
            }
            bench
        })
        .collect();
    let successes = runs.iter().filter(|r| r.success).count();
    let rate = successes as f64 / runs.len().max(1) as f64;
    let manifest = run.manifest(
        "bench",
        json!({ "pipeline": base, "seeds": args.seeds, "min_success_rate": args.min_success_rate }),
        inputs,
        None,
    );
    let body = json!({ "runs": runs.len(), "successes": successes, "success_rate": rate, "results": runs });
    emit_json(args.out.as_deref(), &body, manifest)?;
    Ok(Status::from_pass(rate >= args.min_success_rate))
}
