mod json;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use intervaldyn_core::basic::basic_sets;
use intervaldyn_core::cycle::CycleOfIntervals;
use intervaldyn_core::decomp::spectral_decomposition;
use intervaldyn_core::entropy::entropy;
use intervaldyn_core::orbit::{has_l_scheme, period_set, sharkovskii_compare, sharkovskii_consistent, LOrientation};
use intervaldyn_core::prolong::{prolongation_set, Sides};
use intervaldyn_core::rat::{self, Rat};
use intervaldyn_core::shadow::spec_point;
use intervaldyn_core::transit::{boundary_a_set, classify_transitivity, Transitivity};
use intervaldyn_core::{fixtures, markovize, Error, MarkovSystem, PLMap, Result};

#[derive(Parser)]
#[command(name = "intervaldyn", version, about = "Exact dynamics of piecewise-linear interval maps")]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Refinement depth for cell-level answers.
    #[arg(long, global = true, default_value_t = 6)]
    depth: usize,
    /// Iteration budget.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget: usize,
    /// Knot cap for compositions.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap: usize,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct MapArg {
    /// Map file: one `x y` knot per line.
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    map: Option<PathBuf>,
    /// Built-in fixture name instead of a file.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    L,
    R,
    Both,
}

#[derive(Subcommand)]
enum Verb {
    /// f(x)
    Eval {
        #[command(flatten)]
        map: MapArg,
        #[arg(long)]
        x: String,
    },
    /// x, f(x), …, f^n(x)
    Orbit {
        #[command(flatten)]
        map: MapArg,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Minimal periods up to `max`.
    Periods {
        #[command(flatten)]
        map: MapArg,
        #[arg(long)]
        max: usize,
    },
    /// Search for an L-scheme.
    Lscheme {
        #[command(flatten)]
        map: MapArg,
    },
    /// Compare two periods, or check a map's periods for consistency with the order.
    Sharkovskii {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long, default_value_t = 12)]
        max: usize,
    },
    /// Topological entropy enclosure of a Markov map.
    Entropy {
        #[command(flatten)]
        map: MapArg,
    },
    /// Transitivity class and the boundary set of a mixing map.
    Classify {
        #[command(flatten)]
        map: MapArg,
    },
    /// Outer approximations of the basic sets.
    Basicset {
        #[command(flatten)]
        map: MapArg,
    },
    /// One-sided prolongation set at a point.
    Prolong {
        #[command(flatten)]
        map: MapArg,
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
    },
    /// Spectral decomposition report.
    Decompose {
        #[command(flatten)]
        map: MapArg,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Periodic point satisfying a shadowing request.
    Spec {
        #[command(flatten)]
        map: MapArg,
        #[arg(long)]
        request: PathBuf,
    },
    /// Compare fixture files with the built-in corpus.
    CheckFixtures {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::domain(format!("{}: {e}", path.display())))
}

fn load(path: Option<&PathBuf>, fixture: Option<&String>) -> Result<PLMap> {
    match (path, fixture) {
        (Some(p), _) => PLMap::parse_text(&read(p)?),
        (None, Some(name)) => {
            fixtures::by_name(name).ok_or_else(|| Error::domain(format!("no fixture named {name:?}")))
        }
        (None, None) => Err(Error::domain("give --map or --fixture")),
    }
}

fn load_arg(m: &MapArg) -> Result<PLMap> {
    load(m.map.as_ref(), m.fixture.as_ref())
}

fn parse_rat(s: &str) -> Result<Rat> {
    let x = rat::parse(s)?;
    if !rat::in_unit(&x) {
        return Err(Error::domain(format!("{s} is outside [0,1]")));
    }
    Ok(x)
}

fn markov(map: &PLMap, budget: usize) -> Result<MarkovSystem> {
    markovize(map, budget).ok_or_else(|| Error::resource("breakpoint orbits not eventually periodic within budget"))
}

fn run(cli: &Cli) -> Result<Value> {
    let (depth, budget, cap) = (cli.depth, cli.budget, cli.cap);
    match &cli.verb {
        Verb::Eval { map, x } => {
            let f = load_arg(map)?;
            Ok(json!({"y": json::r(&f.eval(&parse_rat(x)?)?)}))
        }
        Verb::Orbit { map, x, n } => {
            let f = load_arg(map)?;
            let mut y = parse_rat(x)?;
            let mut orbit = vec![y.clone()];
            for _ in 0..*n {
                y = f.at(&y);
                orbit.push(y.clone());
            }
            Ok(json!({"orbit": json::rats(&orbit)}))
        }
        Verb::Periods { map, max } => {
            let f = load_arg(map)?;
            Ok(json!({"periods": period_set(&f, *max, cap)?}))
        }
        Verb::Lscheme { map } => {
            let f = load_arg(map)?;
            let found = has_l_scheme(&f, cap)?.map(|l| {
                let orientation = match l.orientation {
                    LOrientation::Up => "up",
                    LOrientation::Down => "down",
                };
                json!({"x": json::r(&l.x), "y": json::r(&l.y), "orientation": orientation, "verified": l.holds(&f)})
            });
            Ok(json!({"lscheme": found}))
        }
        Verb::Sharkovskii { p, q, map, fixture, max } => {
            let mut out = serde_json::Map::new();
            if let (Some(p), Some(q)) = (p, q) {
                let ord = sharkovskii_compare(*p, *q)?;
                out.insert("p_precedes_q".into(), json!(ord == std::cmp::Ordering::Greater));
                out.insert("equal".into(), json!(p == q));
            } else if p.is_some() || q.is_some() {
                return Err(Error::domain("give both --p and --q"));
            }
            if map.is_some() || fixture.is_some() {
                let f = load(map.as_ref(), fixture.as_ref())?;
                let periods = period_set(&f, *max, cap)?;
                out.insert("consistent".into(), json!(sharkovskii_consistent(&periods, *max)));
                out.insert("periods".into(), json!(periods));
            }
            if out.is_empty() {
                return Err(Error::domain("nothing to do: give --p/--q or a map"));
            }
            Ok(Value::Object(out))
        }
        Verb::Entropy { map } => {
            let ms = markov(&load_arg(map)?, budget)?;
            let h = entropy(&ms);
            let cover: Vec<Vec<u8>> = ms.cover().iter().map(|row| row.iter().map(|&b| b as u8).collect()).collect();
            Ok(json!({
                "entropy": h.value,
                "enclosure": [h.lo, h.hi],
                "spectral_radius": [json::r(&h.rho_lo), json::r(&h.rho_hi)],
                "certified": h.certified,
                "partition": json::rats(ms.points()),
                "cover": cover,
            }))
        }
        Verb::Classify { map } => {
            let ms = markov(&load_arg(map)?, budget)?;
            let t = classify_transitivity(&ms);
            let (class, swap) = match &t {
                Transitivity::Mixing => ("mixing", Value::Null),
                Transitivity::TransitiveNotMixing(a) => ("transitive_not_mixing", json::r(a)),
                Transitivity::NotTransitive => ("not_transitive", Value::Null),
            };
            let boundary = match t {
                Transitivity::Mixing => {
                    let b = boundary_a_set(&ms, 4, cap)?;
                    json!({"a_set": json::rats(&b.a_set), "case": b.case, "approach": json::rats(&b.approach)})
                }
                _ => Value::Null,
            };
            Ok(json!({"transitivity": class, "swap_point": swap, "boundary": boundary, "period": ms.period()}))
        }
        Verb::Basicset { map } => {
            let ms = markov(&load_arg(map)?, budget)?;
            let bs = basic_sets(&ms, depth)?;
            Ok(json!({"basic_sets": bs.iter().map(json::basic).collect::<Vec<_>>()}))
        }
        Verb::Prolong { map, point, side } => {
            let ms = markov(&load_arg(map)?, budget)?;
            let x = parse_rat(point)?;
            let sides = match side {
                SideArg::L => Sides::L,
                SideArg::R => Sides::R,
                SideArg::Both => Sides::Both,
            };
            let p = prolongation_set(&ms, &CycleOfIntervals::whole(), &x, sides, budget)?;
            Ok(json::prolongation(&p))
        }
        Verb::Decompose { map, report } => {
            let ms = markov(&load_arg(map)?, budget)?;
            let d = json::decomposition(&spectral_decomposition(&ms, depth, budget)?);
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&d).expect("serializable");
                std::fs::write(path, text).map_err(|e| Error::domain(format!("{}: {e}", path.display())))?;
            }
            Ok(d)
        }
        Verb::Spec { map, request } => {
            let ms = markov(&load_arg(map)?, budget)?;
            let text = read(request)?;
            let v: Value =
                serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
            let req = json::spec_request(&v)?;
            let res = spec_point(&ms, &req)?;
            Ok(json!({"z": json::r(&res.z), "check": json::spec_check(&res.check)}))
        }
        Verb::CheckFixtures { dir } => {
            let mut rows = Vec::new();
            let mut all = true;
            for (name, f) in fixtures::corpus() {
                let path = dir.join(format!("{name}.map"));
                let status = match read(&path).and_then(|t| PLMap::parse_text(&t)) {
                    Ok(g) if g == f => "ok".to_string(),
                    Ok(_) => "differs".to_string(),
                    Err(e) => e.to_string(),
                };
                all &= status == "ok";
                rows.push(json!({"name": name, "status": status}));
            }
            if !all {
                return Err(Error::pre(format!("fixtures in {} do not match the corpus", dir.display())));
            }
            Ok(json!({"fixtures": rows}))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            let text = if cli.pretty { serde_json::to_string_pretty(&v) } else { serde_json::to_string(&v) };
            println!("{}", text.expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("intervaldyn: {e}");
            ExitCode::from(if e.is_resource() { 3 } else { 2 })
        }
    }
}
