//! `kplanar`: check, generate, glue, search and render k-planar drawings.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kplanar::families::{private_cell, Family, FamilyId};
use kplanar::layout::layout_or_circular;
use kplanar::metrics::verify_edge_count_identity;
use kplanar::search::search_tight;
use kplanar::{
    check_saturated, check_style, counts, emit, is_filled, is_tight, parse, render_svg, CellId, Document, DslError,
    NodeId, Planarization, Restrictions, StyleSpec,
};
use serde_json::json;

use kplanar_cli::table;

#[derive(Parser)]
#[command(name = "kplanar", version, about = "Verify and construct saturated k-planar drawings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Dsl,
    Svg,
    JsonReport,
}

#[derive(Args)]
struct StyleArgs {
    /// Crossing budget per edge; defaults to the `k` line of the input.
    #[arg(long)]
    k: Option<u32>,
    /// Restriction set, e.g. `s,i,m`; defaults to the `restrict` line.
    #[arg(long)]
    restrict: Option<Restrictions>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a drawing file.
    Validate { input: PathBuf },
    /// Print counted quantities (vertices, edges, cells by incidence, ...).
    Stats {
        input: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
        #[arg(long, value_enum, default_value = "dsl")]
        format: Format,
    },
    /// Check membership in a drawing style.
    CheckStyle {
        input: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
        #[arg(long, value_enum, default_value = "dsl")]
        format: Format,
    },
    /// Check that co-cellular vertices are joined by uncrossed boundary edges.
    CheckFilled {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "dsl")]
        format: Format,
    },
    /// Check that every edge has k crossings and every cell one vertex.
    CheckTight {
        input: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Decide whether an edge can still be added within the style.
    CheckSaturated {
        input: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
        #[arg(long, value_enum, default_value = "dsl")]
        format: Format,
    },
    /// Produce a tight drawing of a family.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dsl")]
        format: Format,
    },
    /// Identify vertex V1 of FIRST with vertex V2 of SECOND, nesting SECOND
    /// in a cell of FIRST whose only vertex is V1.
    Glue {
        first: PathBuf,
        v1: String,
        second: PathBuf,
        v2: String,
        /// Host cell id; defaults to the first cell whose only vertex is V1.
        #[arg(long)]
        cell: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dsl")]
        format: Format,
    },
    /// Enumerate tight drawings with few edges in a style.
    Search {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "")]
        restrict: Restrictions,
        /// Largest number of edges.
        #[arg(long, default_value_t = 2)]
        max_edges: usize,
        /// Refuse bounds that cannot be enumerated completely.
        #[arg(long)]
        exhaustive: bool,
        /// Step limit.
        #[arg(long, default_value_t = 2_000_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dsl")]
        format: Format,
    },
    /// Reproduce the table of extremal densities for a range of k.
    Table {
        #[arg(long, default_value_t = 4)]
        k_min: u32,
        #[arg(long, default_value_t = 12)]
        k_max: u32,
    },
    /// Write an SVG rendering.
    Render {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed check (exit 1) as opposed to a usage or parse error (exit 2).
struct CheckFailed;

type Outcome = anyhow::Result<Result<(), CheckFailed>>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(CheckFailed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &PathBuf) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

enum Loaded {
    Doc(Document),
    Invalid(String),
}

fn load(path: &PathBuf) -> anyhow::Result<Loaded> {
    let text = read_input(path)?;
    match parse(&text) {
        Ok(d) => Ok(Loaded::Doc(d)),
        Err(DslError::Validation(msg)) => Ok(Loaded::Invalid(msg)),
        Err(e) => Err(anyhow!("{}: {e}", path.display())),
    }
}

fn load_valid(path: &PathBuf) -> anyhow::Result<Document> {
    match load(path)? {
        Loaded::Doc(d) => Ok(d),
        Loaded::Invalid(msg) => bail!("{}: invalid drawing: {msg}", path.display()),
    }
}

fn style_of(doc: &Document, args: &StyleArgs) -> anyhow::Result<StyleSpec> {
    let k = args.k.or(doc.k).ok_or_else(|| anyhow!("no k given and the input has no `k` line"))?;
    let r = args.restrict.or(doc.restrictions).unwrap_or(Restrictions::NONE);
    Ok(StyleSpec::new(k, r))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn verdict(ok: bool) -> Result<(), CheckFailed> {
    if ok {
        Ok(())
    } else {
        Err(CheckFailed)
    }
}

fn print_json(v: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Report of the whole check pipeline for one drawing.
fn pipeline_report(p: &Planarization, s: &StyleSpec) -> anyhow::Result<serde_json::Value> {
    let c = counts(p, s.k)?;
    let style = check_style(p, s)?;
    let tight = is_tight(p, s.k)?;
    let filled = is_filled(p)?;
    let saturation = if style.in_style { Some(check_saturated(p, s)?) } else { None };
    let identity = verify_edge_count_identity(p, s.k).ok();
    Ok(json!({
        "style": s.to_string(),
        "counts": c,
        "style_verdict": style,
        "tight": tight,
        "filled": filled,
        "saturation": saturation,
        "edge_count_identity": identity,
    }))
}

fn render(p: &Planarization) -> anyhow::Result<String> {
    let (l, err) = layout_or_circular::<f64>(p)?;
    if let Some(e) = err {
        eprintln!("warning: {e}; using circular layout");
    }
    Ok(render_svg(p, &l))
}

fn output(p: &Planarization, s: Option<StyleSpec>, format: Format, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let text = match format {
        Format::Dsl => emit(p, s.map(|s| s.k), s.map(|s| s.restrictions)),
        Format::Svg => render(p)?,
        Format::JsonReport => {
            let s = s.ok_or_else(|| anyhow!("a JSON report needs a style"))?;
            serde_json::to_string_pretty(&pipeline_report(p, &s)?)? + "\n"
        }
    };
    write_out(out, &text)
}

/// Finds a vertex by label or by its `n<index>` name.
fn find_vertex(p: &Planarization, name: &str) -> anyhow::Result<NodeId> {
    if let Some(v) = p.nodes().find(|&v| p.node(v).label.as_deref() == Some(name)) {
        return Ok(v);
    }
    let idx: usize = name
        .strip_prefix('n')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| anyhow!("no vertex labelled `{name}`"))?;
    p.nodes().find(|v| v.index() == idx).ok_or_else(|| anyhow!("no node `{name}`"))
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { input } => match load(&input)? {
            Loaded::Doc(d) => {
                let p = &d.drawing;
                println!("valid: {} nodes, {} segments, {} edges", p.node_count(), p.dart_count() / 2, p.edge_count());
                Ok(Ok(()))
            }
            Loaded::Invalid(msg) => {
                println!("invalid: {msg}");
                Ok(Err(CheckFailed))
            }
        },
        Command::Stats { input, style, format } => {
            let d = load_valid(&input)?;
            let s = style_of(&d, &style)?;
            let c = counts(&d.drawing, s.k)?;
            if format == Format::JsonReport {
                print_json(&c)?;
            } else {
                println!("n={} (real {}, isolated {}) m={} (uncrossed {}, crossed {}) cr={}", c.n, c.n_real, c.iso, c.m, c.m_p, c.m_x, c.cr);
                println!("cells={} c0={} c1={} c2={} c3={} c4+={} c2'={} epsilon={}", c.cells, c.c_0, c.c_1, c.c_2, c.c_3, c.c_4plus, c.c2_prime, c.epsilon);
            }
            Ok(Ok(()))
        }
        Command::CheckStyle { input, style, format } => {
            let d = load_valid(&input)?;
            let s = style_of(&d, &style)?;
            let v = check_style(&d.drawing, &s)?;
            if format == Format::JsonReport {
                print_json(&v)?;
            } else {
                println!("{}: {}", s, if v.in_style { "in style" } else { "not in style" });
                for x in &v.violations {
                    println!("  {x:?}");
                }
            }
            Ok(verdict(v.in_style))
        }
        Command::CheckFilled { input, format } => {
            let d = load_valid(&input)?;
            let r = is_filled(&d.drawing)?;
            if format == Format::JsonReport {
                print_json(&r)?;
            } else {
                println!("{}", if r.filled { "filled" } else { "not filled" });
                for x in &r.violations {
                    println!("  {x:?}");
                }
            }
            Ok(verdict(r.filled))
        }
        Command::CheckTight { input, style } => {
            let d = load_valid(&input)?;
            let s = style_of(&d, &style)?;
            let t = is_tight(&d.drawing, s.k)?;
            println!("{}", if t { "tight" } else { "not tight" });
            Ok(verdict(t))
        }
        Command::CheckSaturated { input, style, format } => {
            let d = load_valid(&input)?;
            let s = style_of(&d, &style)?;
            let v = check_saturated(&d.drawing, &s)?;
            if format == Format::JsonReport {
                print_json(&v)?;
            } else {
                let word = match &v.status {
                    kplanar::SaturationStatus::Saturated => "SATURATED".to_string(),
                    kplanar::SaturationStatus::Insertable(w) => {
                        format!("INSERTABLE {} -- {} crossing {} segment(s)", w.endpoints.0, w.endpoints.1, w.walk.len())
                    }
                    kplanar::SaturationStatus::Unknown => "UNKNOWN".to_string(),
                };
                println!("{word}");
                for n in &v.notes {
                    println!("  {n}");
                }
            }
            Ok(verdict(v.is_saturated()))
        }
        Command::Generate { family, k, out, format } => {
            let id = FamilyId { family, k };
            let p = kplanar::generate(id)?;
            let style = StyleSpec::new(k, family.styles()[0]);
            output(&p, Some(style), format, &out)?;
            Ok(Ok(()))
        }
        Command::Glue { first, v1, second, v2, cell, out, format } => {
            let d1 = load_valid(&first)?;
            let d2 = load_valid(&second)?;
            let a = find_vertex(&d1.drawing, &v1)?;
            let b = find_vertex(&d2.drawing, &v2)?;
            let host = match cell {
                Some(c) => CellId(c),
                None => private_cell(&d1.drawing, a)?.ok_or_else(|| anyhow!("no cell has {v1} as its only vertex"))?,
            };
            let p = kplanar::glue(&d1.drawing, a, &d2.drawing, b, host)?;
            let style = match (d1.k, d1.restrictions) {
                (Some(k), r) => Some(StyleSpec::new(k, r.unwrap_or(Restrictions::NONE))),
                _ => None,
            };
            output(&p, style, format, &out)?;
            Ok(Ok(()))
        }
        Command::Search { k, restrict, max_edges, exhaustive, budget, out, format } => {
            if exhaustive && max_edges > kplanar::search::EXHAUSTIVE_MAX_EDGES {
                bail!("exhaustive search supports at most {} edges", kplanar::search::EXHAUSTIVE_MAX_EDGES);
            }
            let s = StyleSpec::new(k, restrict);
            let r = search_tight(&s, max_edges, budget)?;
            let mut text = String::new();
            match format {
                Format::JsonReport => {
                    let found: Vec<_> = r.found.iter().map(|p| counts(p, k)).collect::<Result<_, _>>()?;
                    text = serde_json::to_string_pretty(&json!({
                        "style": s.to_string(),
                        "max_edges": max_edges,
                        "exhaustive": r.exhaustive,
                        "steps": r.steps,
                        "found": found,
                    }))? + "\n";
                }
                Format::Dsl => {
                    text.push_str(&format!(
                        "# {} tight drawing(s) for {} with at most {} edges ({})\n",
                        r.found.len(),
                        s,
                        max_edges,
                        if r.exhaustive { "exhaustive" } else { "not exhaustive" }
                    ));
                    for p in &r.found {
                        text.push_str(&emit(p, Some(k), Some(restrict)));
                        text.push('\n');
                    }
                }
                Format::Svg => bail!("search results cannot be rendered as one SVG"),
            }
            write_out(&out, &text)?;
            Ok(Ok(()))
        }
        Command::Table { k_min, k_max } => {
            if k_min < 4 || k_max > 12 || k_min > k_max {
                bail!("k range must lie within 4..12");
            }
            let rows = table::rows(k_min..=k_max);
            print!("{}", table::format(&rows));
            Ok(verdict(rows.iter().all(|r| !matches!(r.status, table::Status::Fail(_)))))
        }
        Command::Render { input, out } => {
            let d = load_valid(&input)?;
            write_out(&out, &render(&d.drawing)?)?;
            Ok(Ok(()))
        }
    }
}
