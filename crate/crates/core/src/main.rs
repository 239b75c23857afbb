use clap::{Args, Parser, Subcommand};
use polymass::analysis::Analysis;
use polymass::build::{self, CorpusSpec};
use polymass::error::{Error, Result};
use polymass::polytope::{Polytope, PolytopeDoc};
use polymass::rat::{self, Rat};
use polymass::{report, toric, verify};
use serde_json::{json, Value};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "polymass", version, about = "Exact center of mass and mass linear functions on simple polytopes")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CorpusFlags {
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Generate smooth lattice polytopes only.
    #[arg(long)]
    smooth_only: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for a polytope document (path or `-` for stdin).
    Analyze { path: String },
    /// Basis of mass linear functions; optionally test one function.
    MassLinear {
        path: String,
        /// Comma separated rationals, e.g. `1,0,-1/2`.
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Classify mass linear functions on a polygon or smooth 3-polytope.
    Classify {
        path: String,
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Build a polytope document.
    #[command(subcommand)]
    Construct(Construct),
    /// Emit a generated corpus as a JSON array of polytope documents.
    Corpus {
        #[command(flatten)]
        flags: CorpusFlags,
    },
    /// Run a property suite (name, short id, or `all`) and report counterexamples.
    Verify {
        property: String,
        /// Preset `dimD_default` / `dimD_smooth`, or a path to a JSON array of polytopes.
        #[arg(long)]
        corpus: Option<String>,
        /// Half-width of the integer grid of `a` for the Y family suite.
        #[arg(long, default_value_t = 2)]
        grid: i64,
        #[command(flatten)]
        flags: CorpusFlags,
    },
    /// Lattice report: kernel torus, isometry shape and integrality flags.
    Toric {
        path: String,
        /// Integer function whose loop order is decided.
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Print the JSON Schema that every `--json` report validates against.
    Schema,
}

#[derive(Subcommand)]
enum Construct {
    /// Standard simplex with optional support numbers.
    Simplex {
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        support: Option<String>,
    },
    /// Product of simplices (`--dims 1,2`) or of two documents.
    Product {
        #[arg(long)]
        dims: Option<String>,
        left: Option<String>,
        right: Option<String>,
    },
    /// Triangle bundle over an interval with twist `a`.
    Y {
        #[arg(long, allow_hyphen_values = true, default_value = "1,2")]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        support: Option<String>,
    },
    /// Bundle over a `k`-simplex with the given fiber; twists separated by `;`.
    Bundle {
        fiber: String,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        twists: String,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
    /// `k`-fold expansion along a facet (1-based).
    Expansion {
        path: String,
        #[arg(long)]
        facet: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Blow up a face given by 1-based facet indices.
    Blowup {
        path: String,
        #[arg(long)]
        face: String,
        #[arg(long)]
        eps: Option<String>,
    },
}

fn read_input(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }
}

fn load(path: &str) -> Result<Polytope> {
    Polytope::from_json(&read_input(path)?)
}

fn parse_rats(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<Rat>().map_err(|_| Error::Parse(format!("not a rational number: {t:?}"))))
        .collect()
}

fn parse_indices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(Error::Parse(format!("not a 1-based index: {t:?}"))),
        })
        .collect()
}

fn doc_value(p: &Polytope) -> Value {
    serde_json::to_value(p.to_doc()).expect("documents serialize")
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn corpus_spec(flags: &CorpusFlags, default_dim: usize) -> CorpusSpec {
    let dim = flags.dim.unwrap_or(default_dim);
    let mut spec = CorpusSpec::new(dim, flags.count.unwrap_or(if dim >= 4 { 100 } else { 200 }), flags.seed);
    spec.smooth = flags.smooth_only;
    spec
}

fn construct(c: &Construct) -> Result<Polytope> {
    match c {
        Construct::Simplex { k, support } => match support {
            Some(s) => build::simplex_with(*k, parse_rats(s)?),
            None => build::simplex(*k),
        },
        Construct::Product { dims, left, right } => match (dims, left, right) {
            (Some(d), None, None) => {
                let dims: Vec<usize> = d.split(',').map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad dimension {t:?}")))).collect::<Result<_>>()?;
                build::product_of_simplices(&dims)
            }
            (None, Some(l), Some(r)) => build::product(&load(l)?, &load(r)?),
            _ => Err(Error::Parse("give either --dims or two polytope documents".into())),
        },
        Construct::Y { a, support } => {
            let a = parse_rats(a)?;
            if a.len() != 2 {
                return Err(Error::LengthMismatch { expected: 2, found: a.len() });
            }
            let kappa = match support {
                Some(s) => parse_rats(s)?,
                None => {
                    let top = a.iter().fold(Rat::from_integer(0.into()), |m, x| if *x > m { x.clone() } else { m });
                    vec![rat::int(0), rat::int(0), rat::int(1), rat::int(0), rat::int(5) + top * rat::int(2)]
                }
            };
            build::y_family([a[0].clone(), a[1].clone()], kappa)
        }
        Construct::Bundle { fiber, k, twists, base } => {
            let fiber = load(fiber)?;
            let twists: Vec<Vec<Rat>> = twists.split(';').map(parse_rats).collect::<Result<_>>()?;
            let base = match base {
                Some(b) => parse_rats(b)?,
                None => {
                    let mut b = vec![rat::int(0); *k];
                    b.push(rat::int(10));
                    b
                }
            };
            build::bundle_over_simplex(&fiber, *k, &twists, &base)
        }
        Construct::Expansion { path, facet, k } => {
            let p = load(path)?;
            build::expansion(&p, facet.checked_sub(1).ok_or(Error::Parse("facets are 1-based".into()))?, *k)
        }
        Construct::Blowup { path, face, eps } => {
            let p = load(path)?;
            let eps = eps.as_deref().map(|e| e.trim().parse::<Rat>().map_err(|_| Error::Parse(format!("not a rational number: {e:?}")))).transpose()?;
            build::blowup(&p, &parse_indices(face)?, eps)
        }
    }
}

fn verify_cmd(property: &str, corpus: Option<&str>, grid: i64, flags: &CorpusFlags, as_json: bool) -> Result<bool> {
    let props: Vec<&'static verify::Property> = if property == "all" { verify::PROPERTIES.iter().collect() } else { vec![verify::find(property)?] };
    let mut outcomes = Vec::new();
    for prop in props {
        let outcome = match prop.suite {
            verify::Suite::YGrid => verify::run(prop, &[], grid),
            verify::Suite::Corpus(_) => {
                let polys = match corpus {
                    Some(c) if std::path::Path::new(c).is_file() => {
                        let docs: Vec<PolytopeDoc> = serde_json::from_str(&read_input(c)?).map_err(|e| Error::Parse(e.to_string()))?;
                        docs.iter().map(Polytope::from_doc).collect::<Result<Vec<_>>>()?
                    }
                    Some(c) => verify::corpus_from_preset(c, flags.count, flags.seed)?,
                    None if flags.dim.is_some() || flags.smooth_only => build::random_corpus(&corpus_spec(flags, 3)),
                    None => verify::corpus_from_preset(prop.default_corpus, flags.count, flags.seed)?,
                };
                verify::run(prop, &polys, grid)
            }
        };
        outcomes.push(outcome);
    }
    let ok = outcomes.iter().all(|o| o.passed());
    if as_json {
        let list: Vec<Value> = outcomes.iter().map(|o| o.to_json()).collect();
        print_json(&if list.len() == 1 { list[0].clone() } else { json!({"passed": ok, "properties": list}) });
    } else {
        for o in &outcomes {
            let prop = verify::find(o.name)?;
            println!("{} {}: {} ({} checked, {} applicable, {} counterexamples)", if o.passed() { "PASS" } else { "FAIL" }, o.name, prop.summary, o.checked, o.applicable, o.failures.len());
            for f in &o.failures {
                println!("  item {}: {}", f.index, f.message);
                println!("  {}", serde_json::to_string(&f.polytope).expect("values serialize"));
            }
        }
    }
    Ok(ok)
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Analyze { path } => {
            let a = Analysis::new(load(path)?)?;
            if cli.json {
                print_json(&report::analysis_report(&a)?);
            } else {
                print!("{}", report::analysis_text(&a)?);
            }
        }
        Command::MassLinear { path, h } => {
            let a = Analysis::new(load(path)?)?;
            let h = h.as_deref().map(parse_rats).transpose()?;
            let v = report::mass_linear_report(&a, h.as_deref())?;
            if cli.json {
                print_json(&v);
            } else {
                println!("mass linear dimension: {}", a.space.dim());
                for b in &a.space.basis {
                    println!("  H = {}  gamma = {}", rat::show_vec(&b.h), rat::show_vec(&b.gamma));
                }
                if let Some(q) = v.get("query") {
                    println!("query: mass linear {}, essential {}, gamma {}", q["mass_linear"], q["essential"], q["gamma"]);
                }
            }
        }
        Command::Classify { path, h } => {
            let a = Analysis::new(load(path)?)?;
            let h = h.as_deref().map(parse_rats).transpose()?;
            let verdicts = report::classify(&a, h.as_deref())?;
            if cli.json {
                print_json(&report::classify_report(&a, &verdicts));
            } else {
                if verdicts.is_empty() {
                    println!("no nonzero mass linear functions");
                }
                for v in &verdicts {
                    let also: Vec<&str> = v.also_matches.iter().map(|c| c.name()).collect();
                    println!("{} ({}): gamma {}, asymmetric facets {:?}, {}{}", v.tag(), v.case.name(), rat::show_vec(&v.gamma), v.asymmetric.iter().map(|i| i + 1).collect::<Vec<_>>(), if v.inessential { "inessential" } else { "essential" }, if also.is_empty() { String::new() } else { format!(", also {}", also.join(", ")) });
                }
            }
        }
        Command::Construct(c) => {
            let p = construct(c)?;
            print_json(&doc_value(&p));
        }
        Command::Corpus { flags } => {
            let polys = build::random_corpus(&corpus_spec(flags, 3));
            print_json(&Value::Array(polys.iter().map(doc_value).collect()));
        }
        Command::Verify { property, corpus, grid, flags } => return verify_cmd(property, corpus.as_deref(), *grid, flags, cli.json),
        Command::Schema => print!("{}", report::SCHEMA),
        Command::Toric { path, h } => {
            let a = Analysis::new(load(path)?)?;
            let mut v = report::toric_report(&a)?;
            let order = h.as_deref().map(|h| -> Result<_> { toric::isom_triviality(&a.polytope, &a.classes, &parse_rats(h)?) }).transpose()?;
            if let Some(t) = &order {
                v["loop"] = t.to_json();
            }
            if cli.json {
                print_json(&v);
            } else {
                print!("{}", report::toric_text(&a)?);
                match order {
                    Some(toric::Triviality::Trivial) => println!("loop: trivial"),
                    Some(toric::Triviality::FiniteOrder(m)) => println!("loop: order {m}"),
                    Some(toric::Triviality::InfiniteOrder) => println!("loop: infinite order"),
                    None => {}
                }
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    // Exit quietly when stdout is closed early, e.g. piped into `head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
