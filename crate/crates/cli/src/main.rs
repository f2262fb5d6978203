use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use freeprod_core::conjugacy::find_conjugator;
use freeprod_core::diagram::{validate_diagram, LabeledDiagram};
use freeprod_core::factorization::{
    find_commutator_witness_with, mixed_genus_search, quasiperiodicity_search, search_roots,
    verify_theorem_instance, MixedFactorization, MixedRepr, QuasiRepr, QuasiperiodicFactorization,
    SearchOptions, TheoremInstance,
};
use freeprod_core::fixtures::{run_fixture, FIXTURE_NAMES};
use freeprod_core::map::ClosedMap;
use freeprod_core::motion::{check_lemma2, fuzz, simulate, uniform_motion_with_offsets};
use freeprod_core::surgery::{lemma1_pipeline, SeedInput};
use freeprod_core::{Context, Ctx, Error, Execution, Word};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "freeprod",
    version,
    about = "Words, factorizations and surface diagrams over free products of cyclic groups"
)]
struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct WordArgs {
    /// Factors, e.g. `Z,Z` or `a=Z3,b=Z`.
    #[arg(long, default_value = "Z,Z")]
    factors: String,
    /// Word such as `a b^-1 a^2`; the empty string is the identity.
    #[arg(long, allow_hyphen_values = true)]
    word: String,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    word: WordArgs,
    /// Bound on the length and the `Z` exponents of every component word.
    #[arg(long, default_value_t = 2)]
    radius: usize,
    /// Largest score examined.
    #[arg(long, default_value_t = 6)]
    cap: u32,
    /// Run inner loops on one thread.
    #[arg(long)]
    sequential: bool,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            execution: execution(self.sequential),
            ..SearchOptions::default()
        }
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduced form of a word.
    Reduce(WordArgs),
    /// Cyclic reduction, and a conjugator to `--other` if given.
    Conj {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, allow_hyphen_values = true)]
        other: Option<String>,
    },
    /// Least mixed genus within the search bounds.
    MgSearch(SearchArgs),
    /// Largest quasiperiodicity within the search bounds.
    PosSearch(SearchArgs),
    /// All `z` within the radius with `zⁿ = w`.
    RootSearch {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// Some `[x, y] = w` with `x` and `y` within the radius.
    CommutatorSearch {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// Check both sides and the inequality of an instance or a named fixture.
    Verify {
        #[arg(long, default_value = "Z,Z")]
        factors: String,
        #[arg(
            long,
            conflicts_with = "instance",
            required_unless_present = "instance"
        )]
        fixture: Option<String>,
        /// Size parameter of the fixture.
        #[arg(long)]
        param: Option<u32>,
        /// JSON file `{"mixed": …, "quasi": …}`.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Build and reduce the diagram of a seed input.
    Surgery {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Car motions on closed maps.
    #[command(subcommand)]
    Carmotion(CarCommand),
    /// Diagram files.
    #[command(subcommand)]
    Diagram(DiagramCommand),
    /// Named identities and diagrams.
    #[command(subcommand)]
    Fixtures(FixtureCommand),
}

#[derive(Subcommand)]
enum CarCommand {
    /// Complete collisions of a uniform motion.
    Simulate {
        /// Map or diagram JSON.
        #[arg(long)]
        map: PathBuf,
        /// Cars per face: one count for every face, or a comma list in face
        /// order; `d@o` starts the first car at offset `o`.
        #[arg(long, default_value = "1")]
        cars: String,
    },
    /// Random maps and motions checked against the collision bound.
    Fuzz {
        #[arg(long, default_value_t = 12)]
        edges: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Subcommand)]
enum DiagramCommand {
    /// Check the diagram conditions and report its invariants.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Graphviz rendering.
    Dot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FixtureCommand {
    List,
    Run {
        name: String,
        #[arg(long, default_value = "Z,Z")]
        factors: String,
        #[arg(long)]
        param: Option<u32>,
    },
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
    /// The command ran but its check failed.
    Check(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Parse { .. }) => 2,
            Failure::Io(..) => 3,
            _ => 1,
        }
    }
}

/// Result document and its one-line text rendering.
struct Output {
    command: &'static str,
    body: Value,
    text: String,
}

type Run = Result<Output, Failure>;

fn out(command: &'static str, body: Value, text: impl Display) -> Run {
    Ok(Output {
        command,
        body,
        text: text.to_string(),
    })
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn parse_word(args: &WordArgs) -> Result<(Ctx, Word), Failure> {
    let ctx = Context::parse(&args.factors)?;
    let w = Word::parse(&ctx, &args.word)?;
    Ok((ctx, w))
}

fn run(command: Command) -> Run {
    match command {
        Command::Reduce(args) => {
            let (_, w) = parse_word(&args)?;
            out(
                "reduce",
                json!({ "input": args.word, "reduced": w.to_string(), "length": w.len() }),
                &w,
            )
        }
        Command::Conj { word, other } => {
            let (ctx, w) = parse_word(&word)?;
            let c = w.cyclic_reduce();
            let mut body = json!({
                "word": w.to_string(),
                "core": c.core.to_string(),
                "conjugator": c.conjugator.to_string(),
                "conjugate_into_factor": w.conjugate_into_factor().is_some(),
            });
            let mut text = format!(
                "{w} = ({}) ({}) ({})^-1",
                c.conjugator, c.core, c.conjugator
            );
            if let Some(v) = other {
                let v = Word::parse(&ctx, &v)?;
                let g = find_conjugator(&w, &v);
                body["other"] = json!(v.to_string());
                body["conjugate"] = json!(g.is_some());
                body["conjugator_to_other"] = json!(g.as_ref().map(Word::to_string));
                text = match g {
                    Some(g) => format!("{v} = ({g}) ({w}) ({g})^-1"),
                    None => format!("{w} and {v} are not conjugate"),
                };
            }
            out("conj", body, text)
        }
        Command::MgSearch(args) => {
            let (_, w) = parse_word(&args.word)?;
            match mixed_genus_search(&w, args.radius, args.cap, args.options()) {
                Some(o) => out(
                    "mg-search",
                    json!({
                        "word": w.to_string(),
                        "radius": args.radius,
                        "cap": args.cap,
                        "score": o.score,
                        "lower_bound": o.lower_bound,
                        "witness": o.witness.to_repr(),
                    }),
                    format!("mg <= {}: {}", o.score, o.witness),
                ),
                None => Err(Failure::Check(json!({
                    "word": w.to_string(),
                    "radius": args.radius,
                    "cap": args.cap,
                    "message": "no mixed factorization within the bounds",
                }))),
            }
        }
        Command::PosSearch(args) => {
            let (_, w) = parse_word(&args.word)?;
            match quasiperiodicity_search(&w, args.radius, args.cap, args.options()) {
                Some((score, q)) => out(
                    "pos-search",
                    json!({
                        "word": w.to_string(),
                        "radius": args.radius,
                        "cap": args.cap,
                        "score": score,
                        "witness": q.to_repr(),
                    }),
                    format!("pos >= {score}: {q}"),
                ),
                None => Err(Failure::Check(json!({
                    "word": w.to_string(),
                    "message": "no quasiperiodic factorization within the bounds",
                }))),
            }
        }
        Command::RootSearch {
            word,
            n,
            radius,
            sequential,
        } => {
            let (_, w) = parse_word(&word)?;
            let roots = search_roots(&w, n, radius, execution(sequential));
            let nontrivial: Vec<String> = roots
                .iter()
                .filter(|z| z.conjugate_into_factor().is_none())
                .map(Word::to_string)
                .collect();
            let text = format!(
                "{} roots, {} not conjugate into a factor",
                roots.len(),
                nontrivial.len()
            );
            out(
                "root-search",
                json!({
                    "word": w.to_string(),
                    "n": n,
                    "radius": radius,
                    "roots": roots.iter().map(Word::to_string).collect::<Vec<_>>(),
                    "nontrivial_roots": nontrivial,
                }),
                text,
            )
        }
        Command::CommutatorSearch {
            word,
            radius,
            sequential,
        } => {
            let (_, w) = parse_word(&word)?;
            match find_commutator_witness_with(&w, radius, execution(sequential)) {
                Some((x, y)) => out(
                    "commutator-search",
                    json!({ "word": w.to_string(), "radius": radius, "x": x.to_string(), "y": y.to_string() }),
                    format!("{w} = [{x}, {y}]"),
                ),
                None => Err(Failure::Check(json!({
                    "word": w.to_string(),
                    "radius": radius,
                    "message": "no commutator witness within the radius",
                }))),
            }
        }
        Command::Verify {
            factors,
            fixture,
            param,
            instance,
        } => verify(&factors, fixture, param, instance),
        Command::Surgery {
            input,
            trace,
            out: out_path,
            dot,
        } => {
            let seed = SeedInput::from_json(&read(&input)?)?;
            let result = lemma1_pipeline(&seed)?;
            if let Some(p) = trace {
                write(&p, &result.trace.to_json())?;
            }
            if let Some(p) = out_path {
                write(&p, &result.diagram.to_json())?;
            }
            if let Some(p) = dot {
                write(&p, &result.diagram.to_dot())?;
            }
            let m = result.diagram.map();
            out(
                "surgery",
                json!({
                    "steps": result.trace.steps.len(),
                    "reduction_steps": result.trace.reduction_steps(),
                    "faces": m.face_count(),
                    "euler_characteristic": result.diagram.euler_characteristic(),
                    "r0": result.diagram.r0(),
                    "extended_genus": result.extended_genus,
                    "genus_bound": seed.genus_bound(),
                }),
                format!(
                    "eg = {} <= {} after {} reduction steps",
                    result.extended_genus,
                    seed.genus_bound(),
                    result.trace.reduction_steps()
                ),
            )
        }
        Command::Carmotion(CarCommand::Simulate { map, cars }) => {
            let m = ClosedMap::from_json(&read(&map)?)?;
            let (counts, offsets) = parse_cars(&cars, m.face_count())?;
            let motion = uniform_motion_with_offsets(&m, &counts, &offsets)?;
            motion.verify(&m)?;
            let report = simulate(&m, &motion);
            let check = check_lemma2(&m, &motion);
            let body = json!({ "motion": motion, "report": report, "lemma2": check });
            if !check.holds {
                return Err(Failure::Check(body));
            }
            out(
                "carmotion-simulate",
                body,
                format!(
                    "{} collision points, bound {}",
                    check.collisions, check.bound
                ),
            )
        }
        Command::Carmotion(CarCommand::Fuzz {
            edges,
            trials,
            seed,
            sequential,
        }) => {
            let s = fuzz(edges, trials, seed, execution(sequential));
            let body = serde_json::to_value(&s).expect("summary serializes");
            if !s.failures.is_empty() {
                return Err(Failure::Check(body));
            }
            out(
                "carmotion-fuzz",
                body,
                format!(
                    "{} trials, {} with several cars on a face, 0 violations, least margin {}",
                    s.trials, s.nontrivial, s.min_margin
                ),
            )
        }
        Command::Diagram(DiagramCommand::Validate { input }) => {
            let d = LabeledDiagram::from_json(&read(&input)?)?;
            let violations = validate_diagram(&d);
            let m = d.map();
            let body = json!({
                "valid": violations.is_empty(),
                "violations": violations,
                "vertices": m.vertex_count(),
                "edges": m.edge_count(),
                "faces": m.face_count(),
                "euler_characteristic": d.euler_characteristic(),
                "r0": d.r0(),
                "reduced": d.is_reduced(),
                "extended_genus": d.extended_genus().ok(),
            });
            if !violations.is_empty() {
                return Err(Failure::Check(body));
            }
            out("diagram-validate", body, "valid")
        }
        Command::Diagram(DiagramCommand::Dot {
            input,
            out: out_path,
        }) => {
            let d = LabeledDiagram::from_json(&read(&input)?)?;
            let dot = d.to_dot();
            match out_path {
                Some(p) => {
                    write(&p, &dot)?;
                    out("diagram-dot", json!({ "written": p }), p.display())
                }
                None => out("diagram-dot", json!({ "dot": dot }), dot.trim_end()),
            }
        }
        Command::Fixtures(FixtureCommand::List) => out(
            "fixtures-list",
            json!({ "fixtures": FIXTURE_NAMES }),
            FIXTURE_NAMES.join("\n"),
        ),
        Command::Fixtures(FixtureCommand::Run {
            name,
            factors,
            param,
        }) => {
            let r = run_fixture(&name, &factors, param)?;
            let body = serde_json::to_value(&r).expect("report serializes");
            if !r.holds {
                return Err(Failure::Check(body));
            }
            out("fixtures-run", body, format!("{}: {}", r.name, r.statement))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    mixed: MixedRepr,
    quasi: QuasiRepr,
}

fn verify(
    factors: &str,
    fixture: Option<String>,
    param: Option<u32>,
    instance: Option<PathBuf>,
) -> Run {
    let (name, t) = match (fixture, instance) {
        (Some(name), _) => {
            let ctx = Context::parse(factors)?;
            let t = match name.as_str() {
                "culler3" => freeprod_core::fixtures::culler3(&ctx)?,
                "abn" => freeprod_core::fixtures::abn(&ctx, param.unwrap_or(5))?,
                _ => {
                    let r = run_fixture(&name, factors, param)?;
                    let body = serde_json::to_value(&r).expect("report serializes");
                    if !r.holds {
                        return Err(Failure::Check(body));
                    }
                    return out("verify", body, format!("{}: {}", r.name, r.statement));
                }
            };
            (name, t)
        }
        (None, Some(path)) => {
            let text = read(&path)?;
            let file: InstanceFile = serde_json::from_str(&text).map_err(|e| {
                Failure::Core(Error::Parse {
                    position: 0,
                    message: format!("line {} column {}: {e}", e.line(), e.column()),
                })
            })?;
            let mixed = MixedFactorization::from_repr(&file.mixed)?;
            let q = QuasiperiodicFactorization::from_repr(&file.quasi)?;
            (
                path.display().to_string(),
                TheoremInstance::from_quasiperiodic(mixed, &q)?,
            )
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let v = verify_theorem_instance(&t);
    let body = json!({ "instance": name, "lhs": t.lhs.to_repr(), "verdict": v });
    if !v.equality_holds || !v.consistent() {
        return Err(Failure::Check(body));
    }
    let relation = if v.rhs_score as i64 == v.lhs_score as i64 - 2 {
        "with equality"
    } else {
        "strictly"
    };
    out(
        "verify",
        body,
        format!(
            "{} = {}; pos side {} <= mixed side {} - 2 {relation}",
            v.lhs_value, v.rhs_value, v.rhs_score, v.lhs_score
        ),
    )
}

fn parse_cars(spec: &str, faces: usize) -> Result<(Vec<usize>, Vec<usize>), Failure> {
    let mut counts = Vec::new();
    let mut offsets = Vec::new();
    let mut pos = 0;
    for item in spec.split(',') {
        let bad = |at: usize| {
            Failure::Core(Error::Parse {
                position: at,
                message: format!("bad car count `{}`", item.trim()),
            })
        };
        let (c, o) = match item.trim().split_once('@') {
            Some((c, o)) => (c, o.parse().map_err(|_| bad(pos))?),
            None => (item.trim(), 0),
        };
        counts.push(c.parse().map_err(|_| bad(pos))?);
        offsets.push(o);
        pos += item.len() + 1;
    }
    if counts.len() == 1 {
        counts = vec![counts[0]; faces];
        offsets = vec![offsets[0]; faces];
    }
    Ok((counts, offsets))
}

/// Prints a line, ignoring a closed stdout.
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(o) => {
            if cli.json {
                let mut doc =
                    json!({ "schema_version": SCHEMA_VERSION, "command": o.command, "ok": true });
                if let (Value::Object(d), Value::Object(b)) = (&mut doc, o.body) {
                    d.extend(b);
                }
                emit(&serde_json::to_string_pretty(&doc).expect("output serializes"));
            } else {
                emit(&o.text);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let code = f.exit_code();
            let (message, details) = match f {
                Failure::Core(e) => (e.to_string(), Value::Null),
                Failure::Io(p, e) => (format!("{}: {e}", p.display()), Value::Null),
                Failure::Check(v) => ("check failed".to_string(), v),
            };
            if cli.json {
                let doc = json!({ "schema_version": SCHEMA_VERSION, "ok": false, "error": message, "details": details });
                emit(&serde_json::to_string_pretty(&doc).expect("output serializes"));
            } else {
                eprintln!("error: {message}");
                if !details.is_null() {
                    eprintln!(
                        "{}",
                        serde_json::to_string_pretty(&details).expect("details serialize")
                    );
                }
            }
            ExitCode::from(code)
        }
    }
}
