use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use listchrom::error::ColourerError;
use listchrom::graph::{classify, classify_graph, realize, FamilySpec};
use listchrom::io::{ColourMap, GraphSource, Instance, InstanceFile, PathFile};
use listchrom::lists::{random_assignment, validate};
use listchrom::oracle::enumerate_bad_sets;
use listchrom::path::{colour_path, damage, decide_colourable, lower_bound, profile, PathInstance};
use listchrom::theta::colour_family;
use listchrom::verify::{run_check, Check};
use listchrom::ColourSet;

#[derive(Parser)]
#[command(name = "listchrom", version, about = "(a,b)-list colouring engine and statement checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a family member or an explicit graph
    Classify(GraphInput),
    /// Profile a path, decide (L,2m)-colourability, optionally colour it
    PathCheck {
        #[command(flatten)]
        path: PathInput,
        /// Also return a colouring when one exists
        #[arg(long)]
        colour: bool,
    },
    /// Colour a family member from 4m-lists
    Colour {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        m: Option<usize>,
        /// Seed for the random list assignment (with --spec)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Colour universe for the random list assignment (default 6m)
        #[arg(long)]
        universe: Option<usize>,
    },
    /// Damage of deleting S from the first list and T from the last
    Dam {
        #[command(flatten)]
        path: PathInput,
        #[arg(long = "s", value_name = "JSON")]
        s: String,
        #[arg(long = "t", value_name = "JSON")]
        t: String,
    },
    /// Bad 2m-subsets of W with respect to a path
    BadSets {
        #[command(flatten)]
        path: PathInput,
        #[arg(long = "w", value_name = "JSON")]
        w: String,
    },
    /// Seeded verification sweep for one statement
    Verify {
        #[arg(value_parser = parse_check)]
        check: Check,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long = "max-m")]
        max_m: Option<usize>,
    },
}

fn parse_check(s: &str) -> Result<Check, String> {
    s.parse()
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphInput {
    /// Family spec JSON, e.g. '{"theta":[2,4,4]}'
    #[arg(long)]
    spec: Option<String>,
    /// Instance JSON file {"graph": .., "a": .., "lists": {..}}
    #[arg(long)]
    instance: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PathInput {
    /// Path instance JSON, e.g. '{"m":1,"lists":[[1,2,3,4],[3,4,5,6],[5,6,7,8]]}'
    #[arg(long)]
    path: Option<String>,
    /// File holding a path instance JSON
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Outcome {
    Ok,
    Violation,
    Inconclusive,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RunReport {
    command: &'static str,
    input_digest: String,
    outcome: Outcome,
    payload: Value,
    elapsed: u128,
}

struct Finished {
    input: Value,
    outcome: Outcome,
    payload: Value,
    summary: String,
}

fn digest(input: &Value) -> String {
    hex::encode(Sha256::digest(input.to_string().as_bytes()))
}

fn read_instance(path: &PathBuf) -> Result<Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: InstanceFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file.load()?)
}

fn parse_spec(text: &str) -> Result<FamilySpec> {
    let spec: FamilySpec = serde_json::from_str(text).context("parsing --spec")?;
    spec.validate()?;
    Ok(spec)
}

fn read_path(input: &PathInput) -> Result<(PathInstance, ColourMap, Value)> {
    let text = match (&input.path, &input.file) {
        (Some(p), _) => p.clone(),
        (None, Some(f)) => std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?,
        (None, None) => bail!("one of --path or --file is required"),
    };
    let file: PathFile = serde_json::from_str(&text).context("parsing path instance")?;
    if file.m == 0 {
        bail!("m must be positive");
    }
    let (p, map) = file.load()?;
    Ok((p, map, serde_json::to_value(&file)?))
}

fn parse_set(text: &str, map: &ColourMap, flag: &str) -> Result<ColourSet> {
    let ids: Vec<u32> = serde_json::from_str(text).with_context(|| format!("parsing {flag}"))?;
    Ok(map.encode_set(&ids)?)
}

fn run_classify(input: &GraphInput) -> Result<Finished> {
    let (source, class) = match (&input.spec, &input.instance) {
        (Some(text), _) => {
            let spec = parse_spec(text)?;
            let class = classify(&spec);
            (GraphSource::Family(spec), class)
        }
        (None, Some(path)) => {
            let inst = read_instance(path)?;
            let class = classify_graph(&inst.graph);
            (inst.source, class)
        }
        (None, None) => bail!("one of --spec or --instance is required"),
    };
    let g = source.graph()?;
    let summary = format!("classify: {:?}", class.kind());
    let payload = json!({"graph": source, "vertices": g.vertex_count(), "edges": g.edge_count(), "classification": class});
    Ok(Finished { input: json!({"graph": source}), outcome: Outcome::Ok, payload, summary })
}

fn run_path_check(input: &PathInput, want_colouring: bool) -> Result<Finished> {
    let (p, map, raw) = read_path(input)?;
    let prof = profile(&p);
    let colourable = decide_colourable(&p)?;
    let mut payload = json!({
        "n": p.len(),
        "m": p.m,
        "profile": prof,
        "demand": p.demand(),
        "colourable": colourable,
    });
    if let Ok(bound) = lower_bound(&p) {
        payload["lowerBound"] = json!(bound);
    }
    if want_colouring && colourable {
        let phi = colour_path(&p)?;
        payload["colouring"] = json!(phi.chosen.iter().map(|s| map.decode_set(*s)).collect::<Vec<_>>());
    }
    if !map.is_identity() {
        payload["note"] = json!("colour ids were compacted; profile sets use compacted ids");
    }
    let summary = format!("path-check: n={} S_L={} 2nm={} colourable={colourable}", p.len(), prof.s_l, p.demand());
    Ok(Finished { input: raw, outcome: Outcome::Ok, payload, summary })
}

fn run_colour(input: &GraphInput, m: Option<usize>, seed: u64, universe: Option<usize>) -> Result<Finished> {
    let inst = match (&input.spec, &input.instance) {
        (Some(text), _) => {
            let spec = parse_spec(text)?;
            let m = m.context("--m is required with --spec")?;
            if m == 0 {
                bail!("m must be positive");
            }
            let g = realize(&spec)?;
            let universe = universe.unwrap_or(6 * m);
            let lists = random_assignment(&g, 4 * m, universe, seed)?;
            let file = InstanceFile::from_lists(GraphSource::Family(spec), &lists);
            file.load()?
        }
        (None, Some(path)) => read_instance(path)?,
        (None, None) => bail!("one of --spec or --instance is required"),
    };
    let Some(spec) = inst.source.family().cloned() else {
        bail!("colour needs a family spec graph; explicit adjacency is not decomposable");
    };
    let width = inst.lists.declared_width().or_else(|| (0..inst.lists.len()).map(|v| inst.lists.width(v)).max());
    let m = match (m, width) {
        (Some(m), _) => m,
        (None, Some(a)) if a % 4 == 0 && a > 0 => a / 4,
        _ => bail!("cannot infer m: lists must have 4m colours"),
    };
    let instance_json = serde_json::to_value(inst.to_file())?;
    let input_json = json!({"instance": instance_json, "m": m, "seed": seed});
    match colour_family(&spec, &inst.lists, m) {
        Ok(phi) => {
            // re-validated here, independently of the pipeline's own check
            if !validate(&inst.graph, &inst.lists, &phi)? {
                let payload = json!({"reproducer": input_json, "error": "colouring failed validation"});
                return Ok(Finished { input: input_json, outcome: Outcome::Violation, payload, summary: "colour: INVALID".into() });
            }
            let payload = json!({"instance": instance_json, "colouring": inst.colouring_file(&phi), "valid": true});
            let summary = format!("colour: {spec} m={m} valid (L,{})-colouring", 2 * m);
            Ok(Finished { input: input_json, outcome: Outcome::Ok, payload, summary })
        }
        Err(ColourerError::NotFound { reason, dump }) => {
            let payload = json!({"reproducer": input_json, "error": reason, "dump": dump});
            Ok(Finished { input: input_json, outcome: Outcome::Violation, payload, summary: format!("colour: NOT FOUND ({reason})") })
        }
        Err(e) => Err(e.into()),
    }
}

fn run_dam(input: &PathInput, s: &str, t: &str) -> Result<Finished> {
    let (p, map, raw) = read_path(input)?;
    let (s, t) = (parse_set(s, &map, "--s")?, parse_set(t, &map, "--t")?);
    let direct = damage(&p, s, t);
    let mut payload = json!({"damage": direct, "sL": profile(&p).s_l});
    let mut outcome = Outcome::Ok;
    if p.is_odd() {
        let closed = profile(&p).damage_closed_form(s, t)?;
        payload["closedForm"] = json!(closed);
        if closed != direct {
            outcome = Outcome::Violation;
            payload["reproducer"] = json!({"path": raw, "S": map.decode_set(s), "T": map.decode_set(t)});
        }
    }
    let input_json = json!({"path": raw, "S": map.decode_set(s), "T": map.decode_set(t)});
    Ok(Finished { input: input_json, outcome, payload, summary: format!("dam: {direct}") })
}

fn run_bad_sets(input: &PathInput, w: &str) -> Result<Finished> {
    let (p, map, raw) = read_path(input)?;
    let w = parse_set(w, &map, "--w")?;
    let report = enumerate_bad_sets(&p, w)?;
    let full_width = p.lists.iter().all(|l| l.len() == 4 * p.m);
    let outcome = match (report.within_bound, full_width) {
        (true, _) => Outcome::Ok,
        (false, true) => Outcome::Violation,
        // the half-bad bound only covers full-width lists
        (false, false) => Outcome::Inconclusive,
    };
    let input_json = json!({"path": raw, "W": map.decode_set(w)});
    let mut payload = json!({
        "W": map.decode_set(w),
        "count": report.count,
        "bound": report.bound,
        "withinBound": report.within_bound,
        "badSubsets": report.bad_subsets.iter().map(|s| map.decode_set(*s)).collect::<Vec<_>>(),
    });
    if outcome == Outcome::Violation {
        payload["reproducer"] = input_json.clone();
    }
    let summary = format!("bad-sets: {} bad of {} (bound {})", report.count, listchrom::colour::binomial(4 * p.m, 2 * p.m), report.bound);
    Ok(Finished { input: input_json, outcome, payload, summary })
}

fn run_verify(check: Check, seed: u64, trials: Option<usize>, max_m: Option<usize>) -> Result<Finished> {
    let report = run_check(check, seed, trials, max_m);
    let outcome = if report.ok() { Outcome::Ok } else { Outcome::Violation };
    let input = json!({"check": check, "seed": seed, "trials": report.trials, "maxM": report.max_m});
    let summary = format!(
        "verify {check}: {} ({} instances, {} comparisons, {} violations)",
        if report.ok() { "ok" } else { "VIOLATION" },
        report.instances,
        report.comparisons,
        report.violations
    );
    Ok(Finished { input, outcome, payload: serde_json::to_value(&report)?, summary })
}

fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var("LISTCHROM_THREADS") {
        let n: usize = value.parse().with_context(|| format!("LISTCHROM_THREADS={value:?} is not a number"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let (name, result) = match &cli.command {
        Command::Classify(input) => ("classify", run_classify(input)),
        Command::PathCheck { path, colour } => ("path-check", run_path_check(path, *colour)),
        Command::Colour { input, m, seed, universe } => ("colour", run_colour(input, *m, *seed, *universe)),
        Command::Dam { path, s, t } => ("dam", run_dam(path, s, t)),
        Command::BadSets { path, w } => ("bad-sets", run_bad_sets(path, w)),
        Command::Verify { check, seed, trials, max_m } => ("verify", run_verify(*check, *seed, *trials, *max_m)),
    };
    let done = match result {
        Ok(done) => done,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let report = RunReport {
        command: name,
        input_digest: digest(&done.input),
        outcome: done.outcome,
        payload: done.payload,
        elapsed: start.elapsed().as_millis(),
    };
    println!("{}", serde_json::to_string(&report).expect("reports serialize"));
    eprintln!("{} [{} ms]", done.summary, report.elapsed);
    match done.outcome {
        Outcome::Violation => ExitCode::from(1),
        Outcome::Ok | Outcome::Inconclusive => ExitCode::SUCCESS,
    }
}
