use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use psa_core::ideals::{ComponentStore, DiIdeal, Ideal, Subspace};
use psa_core::join::{secant_ideal, Join};
use psa_core::plucker::{self, GrassmannConfig, PluckerIdeal};
use psa_core::poset;
use psa_core::probe::{self, ProbeLimits, ProbeReport};
use psa_core::products::{self, IncFn, Split};
use psa_core::symmetry;
use psa_core::verify::{self, VerifyOptions};
use psa_core::{Element, SymElement, TensorMonomial};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "psa", version, about = "Shuffle-star algebra, reading-list poset and Grassmannian secant ideals")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample points per evaluation batch (default: block size + 4).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Directory for cached ideal components.
    #[arg(long, global = true, env = "PSA_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Abort when a coefficient needs more bits than this.
    #[arg(long, global = true)]
    max_coeff_bits: Option<u64>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// f ∗_g h on the symmetric side, or on tensors with --tensor.
    Star {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        /// Image of the increasing map g, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        g: Vec<u32>,
        #[arg(long)]
        tensor: bool,
    },
    /// Shuffle product; with --split, the tensor product ·_σ for that split.
    Shuffle {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        /// Slots of the left factor, comma separated.
        #[arg(long, value_delimiter = ',')]
        split: Option<Vec<u32>>,
    },
    /// Symmetrization π of a tensor element.
    Pi { input: PathBuf },
    /// 𝔊 from the symmetric side to invariants, or its inverse with --inverse.
    Gi {
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
    /// Coproduct of a symmetric element, or deconcatenation of an invariant with --invariant.
    Delta {
        input: PathBuf,
        #[arg(long)]
        invariant: bool,
    },
    /// Decide whether the rhs monomial is a multiple of the lhs monomial.
    Divides {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
    },
    /// Labeled tree of a monomial.
    Tree { input: PathBuf },
    /// Plücker ideal of Gr(d, N) in degree n.
    Plucker {
        #[arg(long)]
        d: usize,
        #[arg(long = "N")]
        ambient: usize,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// The quadric generators and their span.
        #[arg(long, conflicts_with_all = ["basic", "oracle"])]
        weyman: bool,
        /// The polynomial f_{d/2} (requires N = 2d, d even).
        #[arg(long, conflicts_with = "oracle")]
        basic: bool,
        /// Evaluation kernel at random points.
        #[arg(long)]
        oracle: bool,
    },
    /// Component of the join of two di-ideals given by generator files.
    Join {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Component of the ideal of Sec_r Gr(d, N).
    Secant {
        #[arg(long)]
        d: usize,
        #[arg(long = "N")]
        ambient: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        degree: usize,
        /// Evaluation kernel at random points instead of the join.
        #[arg(long)]
        oracle: bool,
    },
    /// Degrees at which the secant ideal needs new generators.
    Probe {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        #[arg(long = "M")]
        mult: Option<usize>,
        #[arg(long)]
        max_n: usize,
        /// Stop after this many seconds and report what was reached.
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Run the acceptance checks.
    Verify {
        #[arg(long)]
        only: Option<String>,
    },
}

struct Report {
    body: Value,
    ok: bool,
}

impl Report {
    fn ok(body: Value) -> Self {
        Self { body, ok: true }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    if let Some(jobs) = g.jobs {
        if jobs == 0 {
            bail!("--jobs must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let store = match &g.cache_dir {
        Some(dir) => Some(Arc::new(ComponentStore::new(dir)?)),
        None => None,
    };
    let start = Instant::now();
    let mut report = dispatch(&cli.command, g, store.clone())?;
    if let Some(limit) = g.max_coeff_bits {
        let bits = max_bits(&report.body);
        if bits > limit {
            report.ok = false;
            report.body["aborted"] = json!(format!("coefficient of {bits} bits exceeds --max-coeff-bits {limit}"));
        }
    }
    if let Some(s) = &store {
        if s.regenerated() > 0 {
            report.body["cache_regenerated"] = json!(s.regenerated());
        }
    }
    if g.timings {
        report.body["elapsed_s"] = json!(start.elapsed().as_secs_f64());
    }
    let mut out = io::stdout().lock();
    match writeln!(out, "{}", serde_json::to_string_pretty(&report.body)?) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    Ok(report.ok)
}

fn dispatch(cmd: &Command, g: &Global, store: Option<Arc<ComponentStore>>) -> Result<Report> {
    match cmd {
        Command::Star { lhs, rhs, g: image, tensor } => {
            let input = json!({ "command": "star", "lhs": lhs, "rhs": rhs, "g": image, "tensor": tensor });
            let result = if *tensor {
                let (f, h) = (read_element(lhs)?, read_element(rhs)?);
                let map = IncFn::new(f.bidegree().alphabet() + h.bidegree().alphabet(), image.clone())?;
                products::star_product(&f, &h, &map)?.to_json()
            } else {
                let (f, h) = (read_sym(lhs)?, read_sym(rhs)?);
                let map = IncFn::new(f.bidegree().alphabet() + h.bidegree().alphabet(), image.clone())?;
                products::sym_star(&f, &h, &map)?.to_json()
            };
            Ok(Report::ok(json!({ "input": input, "result": result })))
        }
        Command::Shuffle { lhs, rhs, split } => {
            let input = json!({ "command": "shuffle", "lhs": lhs, "rhs": rhs, "split": split });
            let result = match split {
                Some(left) => {
                    let (f, h) = (read_element(lhs)?, read_element(rhs)?);
                    let sigma = Split::new(f.bidegree().n + h.bidegree().n, left.clone())?;
                    products::shuffle_product(&f, &h, &sigma)?.to_json()
                }
                None => products::sym_shuffle(&read_sym(lhs)?, &read_sym(rhs)?)?.to_json(),
            };
            Ok(Report::ok(json!({ "input": input, "result": result })))
        }
        Command::Pi { input } => {
            let f = read_element(input)?;
            Ok(Report::ok(json!({
                "input": { "command": "pi", "file": input },
                "result": symmetry::pi(&f).to_json(),
            })))
        }
        Command::Gi { input, inverse } => {
            let result = if *inverse {
                symmetry::desymmetrize(&read_element(input)?)?.to_json()
            } else {
                symmetry::symmetrize(&read_sym(input)?).to_json()
            };
            Ok(Report::ok(json!({
                "input": { "command": "gi", "file": input, "inverse": inverse },
                "result": result,
            })))
        }
        Command::Delta { input, invariant } => {
            let result = if *invariant {
                serde_json::to_value(symmetry::delta_inv(&read_element(input)?)?.to_json())?
            } else {
                serde_json::to_value(symmetry::delta_sym(&read_sym(input)?).to_json())?
            };
            Ok(Report::ok(json!({
                "input": { "command": "delta", "file": input, "invariant": invariant },
                "result": result,
            })))
        }
        Command::Divides { lhs, rhs } => {
            let (s, t) = (read_monomial(lhs)?, read_monomial(rhs)?);
            let witness = poset::rl_leq(&s, &t)?;
            Ok(Report::ok(json!({
                "input": { "command": "divides", "lhs": lhs, "rhs": rhs },
                "divides": witness.is_some(),
                "witness": witness.map_or(json!("incomparable"), |w| json!(w)),
            })))
        }
        Command::Tree { input } => {
            let s = read_monomial(input)?;
            Ok(Report::ok(json!({
                "input": { "command": "tree", "file": input },
                "tree": poset::encode_tree(&s),
            })))
        }
        Command::Plucker { d, ambient, degree, weyman, basic, oracle } => {
            let cfg = GrassmannConfig::new(*d, *ambient, 0)?;
            let mut input = json!({ "command": "plucker", "d": d, "N": ambient, "degree": degree });
            if *basic {
                if *ambient != 2 * d || d % 2 != 0 {
                    bail!("--basic needs N = 2d with d even");
                }
                let f = plucker::basic_plucker(d / 2)?;
                input["mode"] = json!("basic");
                return Ok(Report::ok(json!({ "input": input, "terms": f.len(), "element": f.to_json() })));
            }
            if *weyman {
                let quadrics = plucker::weyman_quadrics(*d, *ambient)?;
                let span = Subspace::from_spanning(cfg.bidegree(2), quadrics.clone())?;
                input["mode"] = json!("weyman");
                return Ok(Report::ok(json!({
                    "input": input,
                    "generators": quadrics.len(),
                    "dim": span.dim(),
                    "quadrics": quadrics.iter().map(|q| q.to_json()).collect::<Vec<_>>(),
                })));
            }
            if *oracle {
                input["mode"] = json!("oracle");
                return kernel_report(input, &cfg, *degree, g);
            }
            input["mode"] = json!("ideal");
            let mut ideal = PluckerIdeal::new(cfg.mult);
            if let Some(s) = store {
                ideal = ideal.with_store(s);
            }
            Ok(Report::ok(component_report(input, &*ideal.component(*d, *degree)?)))
        }
        Command::Join { lhs, rhs, d, degree } => {
            let (a, b) = (read_generators(lhs)?, read_generators(rhs)?);
            let mut join = Join::new(Arc::new(a), Arc::new(b))?;
            if let Some(s) = store {
                join = join.with_store(s);
            }
            let input = json!({ "command": "join", "lhs": lhs, "rhs": rhs, "d": d, "degree": degree });
            Ok(Report::ok(component_report(input, &*join.component(*d, *degree)?)))
        }
        Command::Secant { d, ambient, r, degree, oracle } => {
            let cfg = GrassmannConfig::new(*d, *ambient, *r)?;
            let mut input =
                json!({ "command": "secant", "d": d, "N": ambient, "r": r, "M": cfg.mult, "degree": degree });
            if *oracle {
                input["mode"] = json!("oracle");
                return kernel_report(input, &cfg, *degree, g);
            }
            input["mode"] = json!("join");
            let mut base = PluckerIdeal::new(cfg.mult);
            if let Some(s) = &store {
                base = base.with_store(s.clone());
            }
            let sec = secant_ideal(Arc::new(base), *r, store)?;
            Ok(Report::ok(component_report(input, &*sec.component(*d, *degree)?)))
        }
        Command::Probe { d, r, mult, max_n, time_limit } => {
            let cfg = GrassmannConfig::with_mult(*d, *r, *mult)?;
            let limits = ProbeLimits {
                time: time_limit.map(Duration::from_secs_f64),
                max_coeff_bits: g.max_coeff_bits,
            };
            let report = probe::degree_probe(&cfg, *max_n, store, &limits)?;
            eprint!("{}", probe_table(&report));
            let input = json!({ "command": "probe", "d": d, "r": r, "M": cfg.mult, "max_n": max_n });
            let mut body = json!({ "input": input, "report": report });
            body["generators"] = json!(report.generators.iter().map(|f| f.to_json()).collect::<Vec<_>>());
            Ok(Report { body, ok: report.complete })
        }
        Command::Verify { only } => {
            let opts = VerifyOptions { seed: g.seed, samples: g.samples, store };
            let names: Vec<&str> = match only {
                Some(name) => vec![name.as_str()],
                None => verify::CHECKS.to_vec(),
            };
            let mut results = Vec::new();
            for name in names {
                let r = match verify::run_check(name, &opts) {
                    Ok(r) => r,
                    Err(psa_core::Error::Config(msg)) => bail!(msg),
                    Err(e) => {
                        log::warn!("check {name} failed with {e}; retrying once");
                        verify::run_check(name, &opts)?
                    }
                };
                eprintln!("{:>2} {:<9} {}  {}", r.id, r.name, if r.passed { "pass" } else { "FAIL" }, r.summary);
                let mut v = serde_json::to_value(&r)?;
                if g.timings {
                    v["elapsed_s"] = json!(r.elapsed.as_secs_f64());
                }
                results.push((r.passed, v));
            }
            let ok = results.iter().all(|(p, _)| *p);
            let passed = results.iter().filter(|(p, _)| *p).count();
            Ok(Report {
                body: json!({
                    "input": { "command": "verify", "only": only, "seed": g.seed, "samples": g.samples },
                    "passed": passed,
                    "total": results.len(),
                    "checks": results.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
                }),
                ok,
            })
        }
    }
}

fn component_report(input: Value, c: &Subspace) -> Value {
    json!({ "input": input, "dim": c.dim(), "basis": c.to_json() })
}

fn kernel_report(input: Value, cfg: &GrassmannConfig, n: usize, g: &Global) -> Result<Report> {
    let k = plucker::evaluation_kernel(cfg, n, g.samples, g.seed)?;
    Ok(Report::ok(json!({
        "input": input,
        "dim": k.subspace.dim(),
        "batches": k.batches,
        "points": k.points,
        "basis": k.subspace.to_json(),
    })))
}

fn probe_table(report: &ProbeReport) -> String {
    let mut out = format!("{:>3} {:>3} {:>8} {:>10} {:>4} {:>7}\n", "d", "n", "dim", "from_below", "new", "escaped");
    for row in &report.rows {
        out += &format!(
            "{:>3} {:>3} {:>8} {:>10} {:>4} {:>7}\n",
            row.d, row.n, row.dim, row.from_below, row.new_generators, row.escaped
        );
    }
    if let Some(why) = &report.stopped {
        out += &format!("incomplete: {why}\n");
    }
    out
}

/// Largest `bits` of any `"p/q"` coefficient string in the report.
fn max_bits(v: &Value) -> u64 {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| match (k.as_str(), x) {
                ("coeff", Value::String(s)) => coeff_bits(s),
                _ => max_bits(x),
            })
            .max()
            .unwrap_or(0),
        Value::Array(xs) => xs.iter().map(max_bits).max().unwrap_or(0),
        _ => 0,
    }
}

fn coeff_bits(s: &str) -> u64 {
    psa_core::rational::parse_fraction(s).map(|c| psa_core::rational::coeff_bits(&c)).unwrap_or(0)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_element(path: &Path) -> Result<Element> {
    Element::from_json_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_sym(path: &Path) -> Result<SymElement> {
    SymElement::from_json_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_monomial(path: &Path) -> Result<TensorMonomial> {
    let f = read_element(path)?;
    let mut terms = f.terms();
    match (terms.next(), terms.next()) {
        (Some((m, _)), None) => Ok(m.clone()),
        _ => bail!("{} must hold exactly one monomial", path.display()),
    }
}

/// A file with one Element JSON or an array of them.
fn read_generators(path: &Path) -> Result<DiIdeal> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let items = match value {
        Value::Array(xs) => xs,
        v => vec![v],
    };
    let gens = items
        .into_iter()
        .map(|v| Ok(SymElement::from_json(&serde_json::from_value(v)?)?))
        .collect::<Result<Vec<_>>>()?;
    let Some(first) = gens.first() else { bail!("{} has no generators", path.display()) };
    Ok(DiIdeal::new(first.bidegree().mult, gens)?)
}
