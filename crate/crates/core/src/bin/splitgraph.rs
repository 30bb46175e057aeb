use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use splitgraph::artal::{self, ArtalType};
use splitgraph::cover::GaloisCover;
use splitgraph::curvecomb::{self, CurveCombinatorics, COMPONENT_CLASS};
use splitgraph::cyclicnum::{self, DEFAULT_TOL};
use splitgraph::equivalence::{self, Limits, Verdict};
use splitgraph::fingroup::{coset_of, ConjugacyClass, GroupAutomorphism};
use splitgraph::io::{self, CoeffsJson, CoverJson, CurveFixture, GraphJson, WalkJson};
use splitgraph::Error;

const EXIT_INPUT: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_DISTINGUISHED: u8 = 3;
const EXIT_LIMIT: u8 = 4;

#[derive(Parser)]
#[command(name = "splitgraph", version, about = "Net voltage classes of graph covers and splitting graphs of curve arrangements")]
struct Cli {
    /// Write the JSON result to this file instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the covering axioms of a cover file.
    ValidateCover { cover: PathBuf },
    /// Frontier sets, net voltage set and class of a closed walk.
    Nv {
        cover: PathBuf,
        walk: PathBuf,
        /// Total-graph vertex to start from (default: first lift of the walk's start).
        #[arg(long)]
        lift: Option<String>,
    },
    /// Compare net voltage signatures of two covers.
    Distinguish(PairArgs),
    /// Exhaustive search for an equivalence between two covers.
    Equivalence {
        #[command(flatten)]
        pair: PairArgs,
        /// Maximum number of total-graph vertices.
        #[arg(long, default_value_t = Limits::default().max_total_vertices)]
        max_vertices: usize,
        /// Maximum number of base-graph vertices.
        #[arg(long, default_value_t = Limits::default().max_base_vertices)]
        max_base_vertices: usize,
    },
    #[command(subcommand)]
    Curve(CurveCommand),
    #[command(subcommand)]
    Artal(ArtalCommand),
}

#[derive(Args)]
struct PairArgs {
    cover1: PathBuf,
    cover2: PathBuf,
    /// plus, minus, all, or a JSON file mapping element labels to labels.
    #[arg(long, default_value = "all")]
    tau: String,
}

#[derive(Subcommand)]
enum CurveCommand {
    /// Incidence graph of a curve file.
    Incidence { curve: PathBuf },
    /// Splitting cover of a curve file with splitting data.
    SplittingGraph { curve: PathBuf },
}

#[derive(Subcommand)]
enum ArtalCommand {
    /// Class of an arrangement of the given type and offset.
    Classify {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        beta: usize,
    },
    /// All classes of a type.
    Family {
        #[arg(long = "type")]
        ty: String,
    },
    /// Splitting cover of the coordinate triangle.
    SplittingGraph {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        beta: usize,
    },
    /// Recover the offset from normal-form coefficients.
    NumericBeta {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Root branch used for each line, comma separated.
        #[arg(long, default_value = "0,0,0")]
        branches: String,
    },
    /// Random normal-form coefficients for a type and offset.
    SampleCoeffs {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        beta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A result document plus the exit code it should produce.
struct Outcome {
    doc: Value,
    code: u8,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Self { doc, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => match emit(cli.output.as_deref(), &outcome.doc) {
            Ok(()) => ExitCode::from(outcome.code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_INPUT)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::ResourceLimit(_) => EXIT_LIMIT,
                _ => EXIT_INPUT,
            })
        }
    }
}

fn emit(path: Option<&Path>, doc: &Value) -> splitgraph::Result<()> {
    match path {
        Some(p) => io::write_json(p, doc),
        None => {
            print!("{}", io::to_pretty(doc)?);
            Ok(())
        }
    }
}

fn run(command: Command) -> splitgraph::Result<Outcome> {
    match command {
        Command::ValidateCover { cover } => {
            let c = io::load_cover(&cover)?;
            let report = c.validate();
            let code = if report.passed() { 0 } else { EXIT_VALIDATION };
            for f in report.failures() {
                eprintln!("check {} failed: {}", f.name, f.witness.as_deref().unwrap_or(""));
            }
            Ok(Outcome { doc: io::report_json(&report), code })
        }
        Command::Nv { cover, walk, lift } => {
            let Some(c) = load_valid(&cover)? else { return Ok(invalid_cover()) };
            let w = io::read_json::<WalkJson>(&walk)?.build(c.base())?;
            let start = match lift {
                Some(id) => c.total().vertex(&id)?,
                None => *c.fiber_vertices(w.start)?.first().ok_or_else(|| Error::InvalidArgument("empty fiber".into()))?,
            };
            let frontiers = c.frontier_sets(&w, start)?;
            let set = c.net_voltage_set(&w, start)?;
            let class = ConjugacyClass::of_subset(c.group(), &set);
            let coset = if c.group().cyclic_modulus().is_some() {
                coset_of(c.group(), &set)?.map(|k| k.to_string())
            } else {
                None
            };
            let t = c.total();
            Ok(Outcome::ok(json!({
                "walk": w.display(c.base()).to_string(),
                "lift": t.vertex_id(start),
                "frontiers": frontiers.iter().map(|f| f.iter().map(|&v| t.vertex_id(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "set": io::labels(c.group(), &set),
                "class": io::class_json(&class),
                "coset": coset,
            })))
        }
        Command::Distinguish(pair) => {
            let Some((c1, c2)) = load_pair(&pair)? else { return Ok(invalid_cover()) };
            let taus = parse_tau(&pair.tau, &c1)?;
            let v = equivalence::distinguish_all(&c1, &c2, &taus)?;
            Ok(verdict_outcome(&v, &c1, &c2))
        }
        Command::Equivalence { pair, max_vertices, max_base_vertices } => {
            let Some((c1, c2)) = load_pair(&pair)? else { return Ok(invalid_cover()) };
            let taus = parse_tau(&pair.tau, &c1)?;
            let limits = Limits { max_base_vertices, max_total_vertices: max_vertices };
            let mut last = None;
            for tau in &taus {
                let v = equivalence::exhaustive_equivalence(&c1, &c2, tau, &limits)?;
                if v.is_equivalent() {
                    let mut out = verdict_outcome(&v, &c1, &c2);
                    out.doc["tau"] = json!(tau.describe());
                    return Ok(out);
                }
                last = Some(v);
            }
            let v = last.unwrap_or(Verdict::Inconclusive);
            Ok(verdict_outcome(&v, &c1, &c2))
        }
        Command::Curve(CurveCommand::Incidence { curve }) => {
            let curve = load_curve(&curve)?;
            let inc = curve.incidence_graph()?;
            let g = &inc.graph;
            let ids = |class: usize| {
                (0..g.vertex_count()).filter(|&v| inc.partition[v] == class).map(|v| g.vertex_id(v)).collect::<Vec<_>>()
            };
            Ok(Outcome::ok(json!({
                "graph": GraphJson::from_graph(g),
                "points": ids(curvecomb::POINT_CLASS),
                "components": ids(COMPONENT_CLASS),
            })))
        }
        Command::Curve(CurveCommand::SplittingGraph { curve }) => {
            let f: CurveFixture = io::read_json(&curve)?;
            let cover = curvecomb::build_splitting_cover(&f.curve, &f.splitting)?;
            Ok(Outcome::ok(serde_json::to_value(CoverJson::from_cover(&cover))?))
        }
        Command::Artal(cmd) => run_artal(cmd),
    }
}

fn run_artal(cmd: ArtalCommand) -> splitgraph::Result<Outcome> {
    match cmd {
        ArtalCommand::Classify { ty, beta } => {
            let ty = ArtalType::parse(&ty)?;
            let class = artal::classify(&ty, beta)?;
            Ok(Outcome::ok(json!({
                "type": ty.to_string(),
                "d": ty.d(),
                "s": ty.s(),
                "beta": beta,
                "alpha": class.alpha,
                "chirality": class.chirality.name(),
            })))
        }
        ArtalCommand::Family { ty } => {
            let ty = ArtalType::parse(&ty)?;
            let table = artal::family_table(&ty);
            let classes: Vec<Value> = table
                .iter()
                .map(|c| {
                    let betas: Vec<usize> = (0..ty.s()).filter(|&b| (b <= ty.s() / 2 && b == c.alpha) || ty.s() - b == c.alpha).collect();
                    json!({ "alpha": c.alpha, "betas": betas })
                })
                .collect();
            Ok(Outcome::ok(json!({
                "type": ty.to_string(),
                "d": ty.d(),
                "s": ty.s(),
                "size": table.len(),
                "classes": classes,
            })))
        }
        ArtalCommand::SplittingGraph { ty, beta } => {
            let ty = ArtalType::parse(&ty)?;
            let cover = artal::splitting_graph_of(&ty, beta)?;
            Ok(Outcome::ok(serde_json::to_value(CoverJson::from_cover(&cover))?))
        }
        ArtalCommand::NumericBeta { coeffs, tol, branches } => {
            let (ty, beta, c, _g0) = io::read_json::<CoeffsJson>(&coeffs)?.build()?;
            let branches = parse_branches(&branches)?;
            let r = cyclicnum::recover_beta(&ty, beta, &c, tol, branches)?;
            let code = if r.beta == beta { 0 } else { EXIT_VALIDATION };
            Ok(Outcome {
                doc: json!({
                    "type": ty.to_string(),
                    "beta_claimed": beta,
                    "beta": r.beta,
                    "net_voltage": r.net_voltage.to_string(),
                    "h_values": r.h_values.iter().map(|&z| io::ComplexJson::from(z)).collect::<Vec<_>>(),
                    "offsets": r.offsets.iter().map(|o| json!({
                        "alpha": o.alpha,
                        "residual": o.residual,
                        "margin": if o.margin.is_finite() { json!(o.margin) } else { Value::Null },
                    })).collect::<Vec<_>>(),
                }),
                code,
            })
        }
        ArtalCommand::SampleCoeffs { ty, beta, seed } => {
            let ty = ArtalType::parse(&ty)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (c, g0) = cyclicnum::sample_coefficients(&ty, beta, &mut rng)?;
            Ok(Outcome::ok(serde_json::to_value(CoeffsJson::new(&ty, beta, &c, &g0))?))
        }
    }
}

/// Loads a cover and reports its failed checks; `None` if it is invalid.
fn load_valid(path: &Path) -> splitgraph::Result<Option<GaloisCover>> {
    let c = io::load_cover(path)?;
    let report = c.validate();
    if report.passed() {
        return Ok(Some(c));
    }
    for f in report.failures() {
        eprintln!("{}: check {} failed: {}", path.display(), f.name, f.witness.as_deref().unwrap_or(""));
    }
    Ok(None)
}

fn load_pair(pair: &PairArgs) -> splitgraph::Result<Option<(GaloisCover, GaloisCover)>> {
    let c1 = load_valid(&pair.cover1)?;
    let c2 = load_valid(&pair.cover2)?;
    Ok(c1.zip(c2))
}

fn invalid_cover() -> Outcome {
    Outcome { doc: json!({ "error": "cover failed validation" }), code: EXIT_VALIDATION }
}

/// Accepts a bare curve or a curve with splitting data.
fn load_curve(path: &Path) -> splitgraph::Result<CurveCombinatorics> {
    let v: Value = io::read_json(path)?;
    let curve = if v.get("curve").is_some() { v["curve"].clone() } else { v };
    Ok(serde_json::from_value(curve)?)
}

fn parse_tau(spec: &str, c: &GaloisCover) -> splitgraph::Result<Vec<GroupAutomorphism>> {
    let g = c.group();
    let cyclic = g.cyclic_modulus().is_some();
    match spec {
        "plus" => Ok(vec![GroupAutomorphism::identity(g)]),
        "minus" if cyclic => Ok(vec![GroupAutomorphism::cyclic_multiplier(g, -1)?]),
        "minus" => Err(Error::InvalidArgument("--tau minus needs a cyclic group".into())),
        "all" if cyclic => artal::allowed_automorphisms(g),
        "all" => Ok(g.automorphisms()),
        path => {
            let map: std::collections::BTreeMap<String, String> = io::read_json(Path::new(path))?;
            let images = g
                .elements()
                .map(|x| match map.get(g.label(x)) {
                    Some(y) => g.index_of(y),
                    None => Err(Error::Parse(format!("automorphism file does not map {:?}", g.label(x)))),
                })
                .collect::<splitgraph::Result<Vec<_>>>()?;
            Ok(vec![GroupAutomorphism::new(g.clone(), images)?])
        }
    }
}

fn parse_branches(s: &str) -> splitgraph::Result<[usize; 3]> {
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad branch index {p:?}"))))
        .collect::<splitgraph::Result<Vec<_>>>()?;
    parts.try_into().map_err(|_| Error::Parse("--branches needs three comma-separated indices".into()))
}

fn verdict_outcome(v: &Verdict, c1: &GaloisCover, c2: &GaloisCover) -> Outcome {
    Outcome { doc: io::verdict_json(v, c1, c2), code: if v.is_distinguished() { EXIT_DISTINGUISHED } else { 0 } }
}
