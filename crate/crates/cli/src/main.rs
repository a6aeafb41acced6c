mod cache;
mod checks;
mod error;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use knotwidth::catalog::{Catalog, CatalogEntry, Rejected};
use knotwidth::skein::{skein_check, width_via_skein};
use knotwidth::states::{self, BigradingTable};
use knotwidth::turaev::{ribbon_graph, turaev_surface};
use knotwidth::{LinkDiagram, LocalGradings, PlaneMap, Splice, TaitPair};
use rayon::prelude::*;
use serde_json::{json, Value};

use cache::Cache;
use checks::{Check, Context, Failure, Outcome};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "knotwidth",
    version,
    about = "Kauffman-state width and Turaev genus of link diagrams"
)]
struct Cli {
    /// Directory for the ingested catalog and the result cache.
    #[arg(long, global = true, env = "KNOTWIDTH_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Format {
    /// Machine-readable output (default).
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Human-readable output.
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Width, Turaev surface and state count of a diagram.
    Report {
        /// PD code or catalog name.
        input: String,
        /// Arc label to use as the marked edge.
        #[arg(long)]
        marked_edge: Option<u32>,
        #[command(flatten)]
        format: Format,
    },
    /// Number of Kauffman states in each Alexander and Maslov grading.
    Table {
        input: String,
        #[arg(long)]
        marked_edge: Option<u32>,
        #[command(flatten)]
        format: Format,
    },
    /// Runs invariant checks over every catalog entry.
    Verify {
        /// Catalog CSV or JSON file (default: the ingested or bundled catalog).
        catalog: Option<PathBuf>,
        /// Comma-separated checks (default: all).
        #[arg(long, value_delimiter = ',')]
        checks: Vec<Check>,
        /// Local grading table to use instead of the bundled one.
        #[arg(long)]
        gradings: Option<PathBuf>,
        #[command(flatten)]
        format: Format,
    },
    /// Skein quadruples and residuals at one or all crossings.
    Skein {
        input: String,
        #[arg(long)]
        site: Option<usize>,
        #[command(flatten)]
        format: Format,
    },
    /// Validates a catalog, stores it in the cache and records its results.
    Ingest {
        /// Catalog CSV or JSON file (default: the bundled catalog).
        file: Option<PathBuf>,
        #[command(flatten)]
        format: Format,
    },
    /// Graphviz export of a Tait graph or a ribbon graph.
    ExportDot {
        input: String,
        #[arg(long, value_enum, default_value_t = DotGraph::T1)]
        graph: DotGraph,
        #[arg(long)]
        marked_edge: Option<u32>,
        /// Output file (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DotGraph {
    T1,
    T2,
    RibbonA,
    RibbonB,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Invariant {
                dump: Some(dump), ..
            } = &e
            {
                eprintln!("{}", pretty(dump));
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cache = Cache::open(&cli.cache_dir.unwrap_or_else(cache::default_dir))?;
    match cli.command {
        Command::Report {
            input,
            marked_edge,
            format,
        } => cmd_report(&cache, &input, marked_edge, format),
        Command::Table {
            input,
            marked_edge,
            format,
        } => cmd_table(&cache, &input, marked_edge, format),
        Command::Verify {
            catalog,
            checks,
            gradings,
            format,
        } => cmd_verify(&cache, catalog, checks, gradings, format),
        Command::Skein {
            input,
            site,
            format,
        } => cmd_skein(&cache, &input, site, format),
        Command::Ingest { file, format } => cmd_ingest(&cache, file, format),
        Command::ExportDot {
            input,
            graph,
            marked_edge,
            output,
        } => cmd_export_dot(&cache, &input, graph, marked_edge, output),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn print_json(v: &Value) {
    println!("{}", pretty(v));
}

/// `key: value` lines in key order.
fn print_fields(v: &Value) {
    if let Value::Object(map) = v {
        for (k, x) in map {
            match x {
                Value::String(s) => println!("{k}: {s}"),
                other => println!("{k}: {other}"),
            }
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn report_rejected(rejected: &[Rejected]) {
    for r in rejected {
        let name = r
            .name
            .as_deref()
            .map(|n| format!(" ({n})"))
            .unwrap_or_default();
        eprintln!("rejected row {}{name}: {}", r.row, r.reason);
    }
}

/// The ingested catalog if there is one, else the bundled one.
fn active_catalog(cache: &Cache) -> Result<Catalog, CliError> {
    match cache.read_catalog()? {
        Some(text) => Ok(Catalog::parse(&text)?.0),
        None => Ok(Catalog::bundled()),
    }
}

/// A catalog name, else PD text.
fn load_diagram(cache: &Cache, input: &str) -> Result<(String, LinkDiagram), CliError> {
    let catalog = active_catalog(cache)?;
    if let Some(e) = catalog.get(input.trim()) {
        return Ok((e.name().to_owned(), e.diagram.clone()));
    }
    let d = LinkDiagram::parse(input).map_err(|e| {
        CliError::Input(format!(
            "{input:?} is neither a catalog name nor a valid PD code: {e}"
        ))
    })?;
    Ok(("diagram".to_owned(), d))
}

fn table_for(d: &LinkDiagram, marked_edge: Option<u32>) -> Result<BigradingTable, CliError> {
    if d.crossing_count() == 0 {
        return Err(CliError::Input(
            "diagram has no crossings: its single trivial state sits at A = M = 0 by convention"
                .into(),
        ));
    }
    let states = match marked_edge {
        Some(arc) => states::states_with_marked_arc(d, arc)?,
        None => {
            let pair = TaitPair::of(d)?;
            states::enumerate_states(&pair, LocalGradings::bundled(), states::STATE_CAP)?
        }
    };
    Ok(BigradingTable::from_states(&states))
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|t| t.as_secs())
        .unwrap_or(0)
}

/// Computes a result record, refusing to emit one that breaks width = genus + 1.
fn compute_record(d: &LinkDiagram, marked_edge: Option<u32>) -> Result<Value, CliError> {
    let canonical = d.canonical_text();
    let table = table_for(d, marked_edge)?;
    let surface = turaev_surface(d)?;
    let width = table.width().map(i64::from);
    let genus = surface.genus();
    let dump = || {
        json!({
            "canonical": canonical,
            "width": width,
            "genus": genus,
            "surface": surface.to_json(),
            "table": table.to_json(),
        })
    };
    match (width, genus) {
        (Some(w), Some(g)) if w == g + 1 => {}
        _ => return Err(CliError::invariant("width differs from genus + 1", dump())),
    }
    let t = table.to_json();
    Ok(json!({
        "canonical": canonical,
        "V": surface.v(),
        "E": surface.e(),
        "F": surface.f(),
        "chi": surface.chi(),
        "genus": genus,
        "width": width,
        "state_count": table.total(),
        "Delta": t["Delta"],
        "delta": t["delta"],
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp": timestamp(),
    }))
}

fn cmd_report(
    cache: &Cache,
    input: &str,
    marked_edge: Option<u32>,
    format: Format,
) -> Result<ExitCode, CliError> {
    let (_, d) = load_diagram(cache, input)?;
    // Records are cached for the default marked arc only.
    let record = match marked_edge {
        Some(_) => compute_record(&d, marked_edge)?,
        None => match cache.lookup(&d.canonical_text())? {
            Some(r) => r,
            None => {
                let r = compute_record(&d, None)?;
                cache.append_new(std::slice::from_ref(&r))?;
                r
            }
        },
    };
    if format.text {
        print_fields(&record);
    } else {
        print_json(&record);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(
    cache: &Cache,
    input: &str,
    marked_edge: Option<u32>,
    format: Format,
) -> Result<ExitCode, CliError> {
    let (_, d) = load_diagram(cache, input)?;
    let table = table_for(&d, marked_edge)?;
    if format.text {
        print!("{}", table.to_text());
    } else {
        print_json(&table.to_json());
    }
    Ok(ExitCode::SUCCESS)
}

fn load_gradings(
    path: Option<PathBuf>,
) -> Result<Result<LocalGradings, knotwidth::Error>, CliError> {
    match path {
        None => Ok(Ok(LocalGradings::bundled().clone())),
        Some(p) => Ok(LocalGradings::from_csv(&read_file(&p)?)),
    }
}

fn cmd_verify(
    cache: &Cache,
    catalog: Option<PathBuf>,
    checks: Vec<Check>,
    gradings: Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, CliError> {
    let mut checks = if checks.is_empty() {
        Check::ALL.to_vec()
    } else {
        checks
    };
    checks.sort();
    checks.dedup();

    let gradings = match load_gradings(gradings)? {
        Ok(g) => g,
        Err(e) => {
            // The load-time validation is the eta-identity self-check.
            let failure = json!({
                "check": Check::EtaIdentity.name(),
                "stage": "startup self-check",
                "detail": e.to_string(),
            });
            if format.text {
                println!("FAIL {} (startup self-check): {e}", Check::EtaIdentity);
            } else {
                print_json(&json!({"passed": false, "failures": [failure]}));
            }
            return Ok(ExitCode::from(3));
        }
    };

    let catalog = match catalog {
        Some(path) => {
            let (c, rejected) = Catalog::parse(&read_file(&path)?)?;
            report_rejected(&rejected);
            c
        }
        None => active_catalog(cache)?,
    };
    if catalog.is_empty() {
        return Err(CliError::Input("catalog has no valid entries".into()));
    }

    let ctx = Context {
        gradings: &gradings,
    };
    let jobs: Vec<(&CatalogEntry, Check)> = catalog
        .entries
        .iter()
        .flat_map(|e| checks.iter().map(move |&c| (e, c)))
        .collect();
    let results: Vec<(Check, Outcome, Vec<Failure>)> = jobs
        .par_iter()
        .map(|&(e, c)| {
            let (outcome, failures) = checks::run(&ctx, c, e);
            (c, outcome, failures)
        })
        .collect();

    let mut counts: BTreeMap<Check, [usize; 3]> = checks.iter().map(|&c| (c, [0; 3])).collect();
    let mut failures = Vec::new();
    for (c, outcome, f) in results {
        let slot = match outcome {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Skip => 2,
        };
        counts.get_mut(&c).expect("selected check")[slot] += 1;
        failures.extend(f);
    }
    let passed = failures.is_empty();

    if format.text {
        for (c, [p, f, s]) in &counts {
            println!("{c}: {p} passed, {f} failed, {s} skipped");
        }
        for f in &failures {
            let site = f.site.map(|s| format!(" site {s}")).unwrap_or_default();
            println!(
                "FAIL {} {}{site}: {}\n  {}",
                f.check, f.name, f.detail, f.pd
            );
        }
        println!(
            "{} entries, {}",
            catalog.len(),
            if passed {
                "all checks passed"
            } else {
                "some checks failed"
            }
        );
    } else {
        let checks_json: serde_json::Map<String, Value> = counts
            .iter()
            .map(|(c, [p, f, s])| {
                (
                    c.name().to_owned(),
                    json!({"passed": p, "failed": f, "skipped": s}),
                )
            })
            .collect();
        print_json(&json!({
            "entries": catalog.len(),
            "checks": checks_json,
            "failures": failures.iter().map(Failure::to_json).collect::<Vec<_>>(),
            "passed": passed,
        }));
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn cmd_skein(
    cache: &Cache,
    input: &str,
    site: Option<usize>,
    format: Format,
) -> Result<ExitCode, CliError> {
    let (_, d) = load_diagram(cache, input)?;
    let sites: Vec<usize> = match site {
        Some(s) if s >= d.crossing_count() => {
            return Err(CliError::Input(format!(
                "site {s} out of range: diagram has {} crossings",
                d.crossing_count()
            )))
        }
        Some(s) => vec![s],
        None => (0..d.crossing_count()).collect(),
    };
    let reports = sites
        .iter()
        .map(|&s| skein_check(&d, s))
        .collect::<Result<Vec<_>, _>>()?;
    let exact = reports.iter().all(|r| r.is_exact());
    let w = width_via_skein(&d)?;

    if format.text {
        println!("pd: {d}");
        println!("width via skein: {w}");
        for r in &reports {
            let (x, g, wr) = r.residuals();
            let w_bars: Vec<String> = r.invariants.iter().map(|i| i.w_bar.to_string()).collect();
            println!(
                "site {}: w_bar(L+, L-, L0, Linf) = ({}); residuals chi {x}, g {g}, w {wr}; circle identities {}",
                r.quadruple.site,
                w_bars.join(", "),
                if r.circle_identities_hold() { "hold" } else { "fail" }
            );
        }
    } else {
        print_json(&json!({
            "pd": d.to_string(),
            "width_via_skein": w,
            "exact": exact,
            "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        }));
    }
    if exact {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Invariant {
            message: "skein relation residual is nonzero".into(),
            dump: None,
        })
    }
}

fn cmd_ingest(cache: &Cache, file: Option<PathBuf>, format: Format) -> Result<ExitCode, CliError> {
    let (incoming, rejected) = match &file {
        Some(path) => Catalog::parse(&read_file(path)?)?,
        None => (Catalog::bundled(), Vec::new()),
    };
    report_rejected(&rejected);
    if incoming.is_empty() {
        return Err(CliError::Input("no valid catalog rows".into()));
    }

    // Merge by name, incoming rows replacing stored ones.
    let mut merged: BTreeMap<String, CatalogEntry> = BTreeMap::new();
    if let Some(text) = cache.read_catalog()? {
        for e in Catalog::parse(&text)?.0.entries {
            merged.insert(e.name().to_owned(), e);
        }
    }
    for e in &incoming.entries {
        merged.insert(e.name().to_owned(), e.clone());
    }
    let catalog = Catalog {
        entries: merged.into_values().collect(),
    };
    cache.write_catalog(&catalog.to_json())?;

    let outcomes: Vec<Result<Value, (String, CliError)>> = incoming
        .entries
        .par_iter()
        .map(|e| compute_record(&e.diagram, None).map_err(|err| (e.name().to_owned(), err)))
        .collect();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => records.push(r),
            Err((name, CliError::Input(reason))) => {
                skipped.push(json!({"name": name, "reason": reason}))
            }
            Err((_, e)) => return Err(e),
        }
    }
    let new_records = cache.append_new(&records)?;

    let summary = json!({
        "catalog": cache.catalog_path().display().to_string(),
        "entries": catalog.len(),
        "ingested": incoming.len(),
        "rejected": rejected
            .iter()
            .map(|r| json!({"row": r.row, "name": r.name, "reason": r.reason}))
            .collect::<Vec<_>>(),
        "new_records": new_records,
        "skipped": skipped,
    });
    if format.text {
        print_fields(&summary);
    } else {
        print_json(&summary);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_export_dot(
    cache: &Cache,
    input: &str,
    graph: DotGraph,
    marked_edge: Option<u32>,
    output: Option<PathBuf>,
) -> Result<ExitCode, CliError> {
    let (name, d) = load_diagram(cache, input)?;
    let map = match marked_edge {
        Some(arc) => PlaneMap::with_marked_arc(&d, arc)?,
        None => PlaneMap::new(&d)?,
    };
    let dot = match graph {
        DotGraph::T1 | DotGraph::T2 => {
            let pair = TaitPair::new(map);
            let g = if matches!(graph, DotGraph::T1) {
                pair.t1()
            } else {
                pair.t2()
            };
            g.to_dot(&name)
        }
        DotGraph::RibbonA => ribbon_graph(&map, Splice::A)?.to_dot(&name),
        DotGraph::RibbonB => ribbon_graph(&map, Splice::B)?.to_dot(&name),
    };
    match output {
        Some(path) => std::fs::write(&path, dot)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => print!("{dot}"),
    }
    Ok(ExitCode::SUCCESS)
}
