use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use steinmann_core::arrangement::{
    enumerate_shards_exhaustive, shard_from_json, shard_to_json, Atlas,
};
use steinmann_core::audit::{self, AuditReport, Counterexample, Suite};
use steinmann_core::calculus::{dual_forest_derivative, forest_derivative, ShardVector};
use steinmann_core::exactla::SparseVector;
use steinmann_core::forests::{parse_forest, parse_forest_over, LayeredForest};
use steinmann_core::ground::{parse_partition_inferring_ground, GroundSet, Partition};
use steinmann_core::io::{
    functional_from_json, functional_to_json, vector_from_json, vector_to_json, SCHEMA,
};
use steinmann_core::render::{render, Palette};
use steinmann_core::steinmann::steinmann_relations;
use steinmann_core::Error;

/// Directory for files written without an absolute path.
const OUT_DIR_VAR: &str = "STEINMANN_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "steinmann",
    version,
    about = "Shards, forest derivatives and Steinmann relations"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for randomized steps (enumeration traversal order).
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// List the shards of a flat, one JSON object per line.
    Enumerate {
        /// Support partition, e.g. "(12|34)".
        #[arg(long, conflicts_with = "n")]
        partition: Option<String>,
        /// Shorthand for the one-block partition of 1..n.
        #[arg(long)]
        n: Option<usize>,
        /// Use the exhaustive sign-pattern search instead.
        #[arg(long)]
        oracle: bool,
    },
    /// Forest derivative of a functional, or dual derivative of a vector.
    Derive {
        /// Layered forest, e.g. "[[1,2],[3,4]]@0,2,1".
        #[arg(long)]
        forest: String,
        /// Ground set size; inferred from the inputs when absent.
        #[arg(long)]
        n: Option<usize>,
        /// Source partition of the forest for dual derivatives.
        #[arg(long)]
        source: Option<String>,
        #[command(flatten)]
        input: DeriveInput,
    },
    /// Rank of the Steinmann relations and dimension of the quotient.
    SteinRank {
        #[arg(long)]
        n: usize,
    },
    /// Run verification suites; exit status 0 iff every claim holds.
    Verify {
        #[arg(long, required_unless_present = "replay")]
        n: Option<usize>,
        /// lie, module, kernel, factorization or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Also write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Re-check a counterexample file instead of running suites; exit
        /// status 0 iff every recorded failure reproduces.
        #[arg(long, conflicts_with = "json")]
        replay: Option<PathBuf>,
    },
    /// Dimension predicted by the generating function -log(2 - e^x).
    Oracle {
        #[arg(long)]
        n: usize,
        /// Report every size from 1 to n.
        #[arg(long)]
        upto: bool,
    },
    /// SVG picture of the chambers for n = 3 or 4.
    Render {
        #[arg(long)]
        n: usize,
        /// Shade chambers by this vector (JSON file).
        #[arg(long, conflicts_with = "forest")]
        highlight: Option<PathBuf>,
        /// Shade chambers by the dual derivative of the point shard.
        #[arg(long)]
        forest: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "#d62728")]
        plus: String,
        #[arg(long, default_value = "#1f77b4")]
        minus: String,
    },
}

#[derive(clap::Args)]
#[group(required = true, multiple = false)]
struct DeriveInput {
    /// Functional JSON file; prints its forest derivative.
    #[arg(long)]
    functional: Option<PathBuf>,
    /// Vector JSON file over the forest's target; prints its dual derivative.
    #[arg(long)]
    vector: Option<PathBuf>,
    /// A single shard (JSON object) over the forest's target.
    #[arg(long)]
    shard: Option<String>,
    /// The zero-dimensional shard over the forest's target.
    #[arg(long)]
    point: bool,
}

/// Failure with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            let f = classify(&e);
            eprintln!("error: {}", f.message);
            if f.code == 3 {
                match write_bundle(&e) {
                    Ok(path) => eprintln!("replay bundle: {}", path.display()),
                    Err(w) => eprintln!("could not write replay bundle: {:#}", w),
                }
            }
            ExitCode::from(f.code)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn classify(e: &anyhow::Error) -> Failure {
    let code = match e.downcast_ref::<Error>() {
        Some(Error::Invariant(_)) => 3,
        _ => 2,
    };
    Failure {
        code,
        message: format!("{:#}", e),
    }
}

fn out_path(p: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn write_bundle(e: &anyhow::Error) -> Result<PathBuf> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let bundle = json!({
        "schema": SCHEMA,
        "args": args,
        "error": format!("{:#}", e),
    });
    let path = out_path(Path::new("steinmann-replay.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&bundle)? + "\n")?;
    Ok(path)
}

fn run(cli: &Cli) -> Result<u8> {
    let mut out = std::io::stdout().lock();
    match &cli.command {
        Command::Enumerate {
            partition,
            n,
            oracle,
        } => {
            let (ground, p) = match (partition, n) {
                (Some(text), _) => parse_partition_inferring_ground(text)?,
                (None, Some(n)) => (GroundSet::numeric(*n)?, Partition::one_block(*n)),
                (None, None) => bail!(Error::Format("give --partition or --n".into())),
            };
            let atlas = Atlas::with_seed(ground.len(), cli.seed)?;
            let shards = if *oracle {
                let mut s = enumerate_shards_exhaustive(&p)?;
                s.sort();
                s
            } else {
                atlas.basis(&p)?.shards().to_vec()
            };
            for x in &shards {
                match cli.format {
                    Format::Json => writeln!(
                        out,
                        "{}",
                        serde_json::to_string(&shard_to_json(&ground, x))?
                    )?,
                    Format::Text => writeln!(out, "{}", x.sign_string())?,
                }
            }
            Ok(0)
        }
        Command::Derive {
            forest,
            n,
            source,
            input,
        } => {
            let doc = derive(cli.seed, forest, *n, source.as_deref(), input)?;
            emit(&mut out, cli.format, &doc)?;
            Ok(0)
        }
        Command::SteinRank { n } => {
            let atlas = Atlas::with_seed(*n, cli.seed)?;
            let rel = steinmann_relations(&atlas)?;
            let shards = rel.basis().len();
            let rank = rel.rank();
            let doc = json!({
                "schema": SCHEMA,
                "n": n,
                "shards": shards,
                "relations": rel.len(),
                "rank": rank,
                "quotient_dim": shards - rank,
            });
            emit(&mut out, cli.format, &doc)?;
            Ok(0)
        }
        Command::Verify {
            n,
            suite,
            json,
            replay,
        } => {
            if let Some(path) = replay {
                return replay_file(&mut out, cli, path, *n);
            }
            let n = n.expect("required by clap");
            let suites = Suite::parse_list(suite)?;
            let atlas = Atlas::with_seed(n, cli.seed)?;
            let report = audit::run_suites(&atlas, &suites)?;
            match cli.format {
                Format::Json => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&report.to_json())?)?
                }
                Format::Text => write!(out, "{}", report.to_text())?,
            }
            if let Some(path) = json {
                let path = out_path(path);
                std::fs::write(
                    &path,
                    serde_json::to_string_pretty(&report.to_json())? + "\n",
                )
                .with_context(|| format!("writing {}", path.display()))?;
            }
            if report.passed {
                Ok(0)
            } else {
                let path = write_counterexamples(&report)?;
                eprintln!("counterexamples: {}", path.display());
                Ok(1)
            }
        }
        Command::Oracle { n, upto } => {
            let sizes: Vec<usize> = if *upto { (1..=*n).collect() } else { vec![*n] };
            for k in sizes {
                let d = audit::zie_dimension(k)?;
                match cli.format {
                    Format::Json => writeln!(
                        out,
                        "{}",
                        serde_json::to_string(&json!({"schema": SCHEMA, "n": k, "dimension": d}))?
                    )?,
                    Format::Text => writeln!(out, "{} {}", k, d)?,
                }
            }
            Ok(0)
        }
        Command::Render {
            n,
            highlight,
            forest,
            out: target,
            plus,
            minus,
        } => {
            let atlas = Atlas::with_seed(*n, cli.seed)?;
            let ground = GroundSet::numeric(*n)?;
            let vector = match (highlight, forest) {
                (Some(path), _) => Some(vector_from_json(&atlas, &ground, &read_json(path)?)?),
                (None, Some(text)) => {
                    let f = parse_forest_over(&ground, &Partition::one_block(*n), text)?;
                    Some(dual_forest_derivative(&atlas, &f, &point(&atlas, &f)?)?)
                }
                (None, None) => None,
            };
            let palette = Palette {
                plus: plus.clone(),
                minus: minus.clone(),
            };
            let svg = render(&atlas, vector.as_ref(), &palette)?.to_svg();
            match target {
                Some(path) => {
                    let path = out_path(path);
                    std::fs::write(&path, svg)
                        .with_context(|| format!("writing {}", path.display()))?;
                }
                None => write!(out, "{}", svg)?,
            }
            Ok(0)
        }
    }
}

fn emit(out: &mut impl Write, format: Format, doc: &Value) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(doc)?)?,
        Format::Text => {
            for (k, v) in doc.as_object().expect("object") {
                if k == "schema" {
                    continue;
                }
                match v {
                    Value::Object(entries) => {
                        for (key, val) in entries {
                            writeln!(
                                out,
                                "{} {}",
                                key,
                                val.as_str().map(str::to_string).unwrap_or(val.to_string())
                            )?;
                        }
                    }
                    Value::String(s) => writeln!(out, "{} {}", k, s)?,
                    other => writeln!(out, "{} {}", k, other)?,
                }
            }
        }
    }
    Ok(())
}

fn read_json(path: &Path) -> Result<Value> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Ground set size from the largest label in a forest string; numeric
/// ground sets of at most nine elements use one digit per label.
fn infer_n(forest: &str) -> Result<usize> {
    let body = forest.split('@').next().unwrap_or("");
    body.chars()
        .filter_map(|c| c.to_digit(10))
        .max()
        .map(|d| d as usize)
        .ok_or_else(|| anyhow!(Error::Format(format!("no labels in {:?}", forest))))
}

fn support_ground(doc: &Value) -> Result<GroundSet> {
    let support = doc
        .get("support")
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!(Error::Format("missing \"support\"".into())))?;
    Ok(parse_partition_inferring_ground(support)?.0)
}

fn point(atlas: &Atlas, f: &LayeredForest) -> Result<ShardVector> {
    let basis = atlas.basis(f.target())?;
    if basis.len() != 1 {
        bail!(Error::Boundary(format!(
            "the forest's target has {} shards; --point needs a forest ending in singletons",
            basis.len()
        )));
    }
    Ok(ShardVector::from_coeffs(basis, SparseVector::unit(0))?)
}

fn derive(
    seed: u64,
    forest: &str,
    n: Option<usize>,
    source: Option<&str>,
    input: &DeriveInput,
) -> Result<Value> {
    if let Some(path) = &input.functional {
        let doc = read_json(path)?;
        let ground = match n {
            Some(n) => GroundSet::numeric(n)?,
            None => support_ground(&doc)?,
        };
        let atlas = Atlas::with_seed(ground.len(), seed)?;
        let f = functional_from_json(&atlas, &ground, &doc)?;
        let forest = parse_forest_over(&ground, f.support(), forest)?;
        return Ok(functional_to_json(
            &ground,
            &forest_derivative(&atlas, &forest, &f)?,
        ));
    }
    let vector_doc = input.vector.as_ref().map(|p| read_json(p)).transpose()?;
    let n = match (n, &vector_doc) {
        (Some(n), _) => n,
        (None, Some(doc)) => support_ground(doc)?.len(),
        (None, None) => infer_n(forest)?,
    };
    let ground = GroundSet::numeric(n)?;
    let atlas = Atlas::with_seed(n, seed)?;
    let forest = match source {
        Some(p) => parse_forest_over(&ground, &ground.parse_partition(p)?, forest)?,
        None => parse_forest(&ground, forest)?,
    };
    let x = if let Some(doc) = &vector_doc {
        vector_from_json(&atlas, &ground, doc)?
    } else if let Some(text) = &input.shard {
        let v: Value = serde_json::from_str(text).context("parsing --shard")?;
        ShardVector::from_shard(&atlas, &shard_from_json(&atlas, &ground, &v)?)?
    } else {
        point(&atlas, &forest)?
    };
    Ok(vector_to_json(
        &ground,
        &dual_forest_derivative(&atlas, &forest, &x)?,
    ))
}

fn write_counterexamples(report: &AuditReport) -> Result<PathBuf> {
    let items: Vec<Value> = report
        .failures()
        .map(|c| {
            json!({
                "claim": c.claim,
                "n": c.n,
                "counterexample": c.counterexample,
            })
        })
        .collect();
    let path = out_path(Path::new(&format!(
        "verify-n{}-counterexamples.json",
        report.n
    )));
    let doc = json!({"schema": SCHEMA, "failures": items});
    std::fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")?;
    Ok(path)
}

/// Accepts a bare counterexample, a report entry, or a counterexample file.
fn replay_file(out: &mut impl Write, cli: &Cli, path: &Path, n: Option<usize>) -> Result<u8> {
    let doc = read_json(path)?;
    let entries: Vec<(usize, Value)> = match doc.get("failures").and_then(Value::as_array) {
        Some(list) => list
            .iter()
            .map(|e| {
                let n = e.get("n").and_then(Value::as_u64).map(|k| k as usize).or(n);
                let n = n.ok_or_else(|| {
                    anyhow!(Error::Format("counterexample without n; pass --n".into()))
                })?;
                Ok((n, e.get("counterexample").cloned().unwrap_or(Value::Null)))
            })
            .collect::<Result<_>>()?,
        None => {
            let n = n.ok_or_else(|| {
                anyhow!(Error::Format("pass --n with a bare counterexample".into()))
            })?;
            vec![(n, doc.get("counterexample").cloned().unwrap_or(doc.clone()))]
        }
    };
    let mut reproduced = 0;
    for (n, v) in &entries {
        let cx: Counterexample =
            serde_json::from_value(v.clone()).context("reading counterexample")?;
        let atlas = Atlas::with_seed(*n, cli.seed)?;
        let fails = audit::replay(&atlas, &cx)?;
        reproduced += fails as usize;
        match cli.format {
            Format::Json => writeln!(
                out,
                "{}",
                json!({"n": n, "kind": cx.kind, "reproduced": fails})
            )?,
            Format::Text => writeln!(
                out,
                "{} n={} {:?}",
                if fails {
                    "REPRODUCED"
                } else {
                    "NOT REPRODUCED"
                },
                n,
                cx.kind
            )?,
        }
    }
    Ok(if reproduced == entries.len() { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_errors_exit_three() {
        assert_eq!(classify(&anyhow!(Error::Invariant("x".into()))).code, 3);
        assert_eq!(classify(&anyhow!(Error::Format("x".into()))).code, 2);
        assert_eq!(classify(&anyhow!("io")).code, 2);
    }

    #[test]
    fn infers_size_from_labels() {
        assert_eq!(infer_n("[[1,2],[3,4]]@0,2,1").unwrap(), 4);
        assert_eq!(infer_n("[12,3]").unwrap(), 3);
        assert!(infer_n("[]").is_err());
    }
}
