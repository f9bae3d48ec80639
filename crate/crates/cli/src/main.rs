use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tesscode::builders::{build_bombin, build_family1, build_family2, build_family3, build_family4, closed_form, BuildError};
use tesscode::census::{emit_table, Family};
use tesscode::homology::{bombin_bounds, min_triangles_nontrivial, DualHomology, HomologyDecomposition, HomologyError, HomologyMode};
use tesscode::hypergraph::{FaceRegistry, Hypergraph, PlacementError};
use tesscode::pauli::{analyze_code, brute_min_dressed_weight, cycle_links, loop_operator, syndrome_order, AnalyzeError, SyndromeBudget, SyndromeOutcome};
use tesscode::surface_map::{color_by_size, load_map, three_color_faces, torus_tessellation, CombinatorialMap, FaceColoring};

const EXIT_USAGE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;
const EXIT_CLASS_MISMATCH: u8 = 5;
const EXIT_PLACEMENT: u8 = 6;

#[derive(Parser)]
#[command(name = "tesscode", version, about = "Subsystem codes from 3-colorable trivalent tessellations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form parameter table for a family over a genus range.
    Census(CensusArgs),
    /// Build a hypergraph from a generated torus or a map file.
    Build(BuildArgs),
    /// Gauge, stabilizer and logical dimensions of a hypergraph file.
    Analyze(AnalyzeArgs),
    /// Check the hypergraph conditions of a hypergraph file.
    Validate(ValidateArgs),
    /// Triangle-count bound, and the dual-loop bound for corner builds.
    Distance(DistanceArgs),
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Kv,
}

#[derive(Args)]
struct CensusArgs {
    /// 1, 2, 3, 4, bombin, thm5 or thm6.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// A genus or an inclusive range such as 2..5.
    #[arg(long, value_parser = parse_genus)]
    genus: RangeInclusive<i64>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BuildFamily {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    Bombin,
}

#[derive(Args)]
struct SourceArgs {
    #[arg(long, value_enum)]
    family: Option<BuildFamily>,
    /// Side counts of the red, green and blue faces, e.g. 6,12,4.
    #[arg(long, value_parser = parse_class, conflicts_with = "map", requires = "cells")]
    torus: Option<[usize; 3]>,
    /// Torus cell counts, e.g. 2x2.
    #[arg(long, value_parser = parse_cells, requires = "torus")]
    cells: Option<(usize, usize)>,
    /// A .tessmap file; family 4 expects the {p,3} map itself.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Color an uncolored map file by side counts (red, green, blue).
    #[arg(long, value_parser = parse_class, requires = "map")]
    class: Option<[usize; 3]>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Output .hypergraph path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Surface,
    Stabilizer,
}

impl From<Mode> for HomologyMode {
    fn from(m: Mode) -> HomologyMode {
        match m {
            Mode::Auto => HomologyMode::Auto,
            Mode::Surface => HomologyMode::Surface,
            Mode::Stabilizer => HomologyMode::Stabilizer,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    mode: Mode,
    /// Search nodes for the triangle-count bound.
    #[arg(long, default_value_t = 5_000_000)]
    node_budget: usize,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct ValidateArgs {
    file: PathBuf,
}

#[derive(Args)]
struct DistanceArgs {
    /// A .hypergraph file; omit to build from the source flags.
    #[arg(conflicts_with_all = ["family", "torus", "map"])]
    file: Option<PathBuf>,
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value = "auto")]
    mode: Mode,
    #[arg(long, default_value_t = 5_000_000)]
    node_budget: usize,
    /// Also search dressed logical operators up to this weight (exponential).
    #[arg(long)]
    dressed_cap: Option<usize>,
}

/// A failed command: message for standard error and the process exit code.
struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

type Run = Result<(), Failure>;

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| format!("unknown family {s:?}; expected 1, 2, 3, 4, bombin, thm5 or thm6"))
}

fn parse_genus(s: &str) -> Result<RangeInclusive<i64>, String> {
    let num = |x: &str| x.trim().parse::<i64>().map_err(|_| format!("bad genus {x:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if a < 1 || b < a {
        return Err(format!("genus range {s:?} is empty or below 1"));
    }
    Ok(a..=b)
}

fn parse_class(s: &str) -> Result<[usize; 3], String> {
    let v: Vec<usize> = s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| format!("bad class {s:?}"))?;
    v.try_into().map_err(|_| format!("class {s:?} needs three side counts"))
}

fn parse_cells(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('x').ok_or_else(|| format!("cells {s:?} should look like 2x2"))?;
    let num = |x: &str| x.parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| format!("bad cell count {x:?}"));
    Ok((num(a)?, num(b)?))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn load_hypergraph(path: &Path) -> Result<(Hypergraph, FaceRegistry), Failure> {
    Hypergraph::parse(&read(path)?).map_err(|e| fail(EXIT_VALIDATION, format!("{}: {e}", path.display())))
}

fn build_error(e: BuildError) -> Failure {
    let code = match e {
        BuildError::InvalidInput(_) => EXIT_VALIDATION,
        BuildError::ClassMismatch(_) | BuildError::FaceSize { .. } => EXIT_CLASS_MISMATCH,
        BuildError::Placement(PlacementError::Infeasible { .. } | PlacementError::TooFewSlots { .. }) => EXIT_PLACEMENT,
    };
    fail(code, format!("build failed: {e}"))
}

struct Built {
    map: CombinatorialMap,
    h: Hypergraph,
    reg: FaceRegistry,
}

fn build_from(src: &SourceArgs) -> Result<Built, Failure> {
    let family = src.family.ok_or_else(|| fail(EXIT_USAGE, "--family is required"))?;
    let (map, col): (CombinatorialMap, Option<FaceColoring>) = match (&src.torus, &src.map) {
        (Some(class), None) => {
            let (m, n) = src.cells.expect("clap requires --cells with --torus");
            let (map, col) = torus_tessellation(*class, m, n).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            (map, Some(col))
        }
        (None, Some(path)) => {
            let (map, col) = load_map(&read(path)?).map_err(|e| fail(EXIT_VALIDATION, format!("{}: {e}", path.display())))?;
            let col = match (col, src.class) {
                (Some(c), _) => Some(c),
                (None, Some(sizes)) => Some(color_by_size(&map, sizes).map_err(|e| fail(EXIT_CLASS_MISMATCH, e.to_string()))?),
                (None, None) if family != BuildFamily::Four => three_color_faces(&map),
                (None, None) => None,
            };
            (map, col)
        }
        _ => return Err(fail(EXIT_USAGE, "give either --torus with --cells, or --map")),
    };
    let colored = |col: Option<FaceColoring>| col.ok_or_else(|| fail(EXIT_VALIDATION, "map faces cannot be properly 3-colored"));
    let built = match family {
        BuildFamily::Four => build_family4(&map),
        BuildFamily::One => build_family1(&map, &colored(col)?),
        BuildFamily::Two => build_family2(&map, &colored(col)?),
        BuildFamily::Three => build_family3(&map, &colored(col)?),
        BuildFamily::Bombin => build_bombin(&map, &colored(col)?),
    };
    let (h, reg) = built.map_err(build_error)?;
    Ok(Built { map, h, reg })
}

fn census(args: &CensusArgs, out: &mut dyn Write) -> Run {
    let rows = emit_table(args.family, args.genus.clone());
    if let Format::Table = args.format {
        writeln!(out, "g\tclass\ts\tn\tk\tr\td").map_err(io_fail)?;
    }
    for row in &rows {
        if let Some(p) = row.params.iter().find(|p| p.n != p.k + p.r + p.s) {
            return Err(fail(EXIT_INCONSISTENT, format!("{} g={}: n={} but k+r+s={}", row.class_label(), row.g, p.n, p.k + p.r + p.s)));
        }
        let lines = match args.format {
            Format::Table => row.tsv_lines(),
            Format::Kv => row.kv_lines(),
        };
        for l in lines {
            writeln!(out, "{l}").map_err(io_fail)?;
        }
    }
    Ok(())
}

fn io_fail(e: io::Error) -> Failure {
    fail(1, format!("write failed: {e}"))
}

fn build(args: &BuildArgs, out: &mut dyn Write, err: &mut dyn Write) -> Run {
    let b = build_from(&args.source)?;
    let report = b.h.validate();
    for l in report.lines() {
        writeln!(err, "{l}").map_err(io_fail)?;
    }
    let text = b.h.serialize(Some(&b.reg));
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| fail(1, format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes()).map_err(io_fail)?,
    }
    writeln!(err, "qubits={} edges={} construction={}", b.h.vertex_count, b.h.edge_count(), b.h.construction).map_err(io_fail)?;
    if !report.passes() {
        return Err(fail(EXIT_VALIDATION, "built hypergraph fails validation"));
    }
    Ok(())
}

fn checked(h: &Hypergraph) -> Run {
    let report = h.validate();
    if report.passes() {
        Ok(())
    } else {
        Err(fail(EXIT_VALIDATION, format!("validation failed: {}", report.lines().join("; "))))
    }
}

fn analyze_error(e: AnalyzeError) -> Failure {
    match e {
        AnalyzeError::CommutationViolation(..) => fail(EXIT_VALIDATION, e.to_string()),
        AnalyzeError::NonIntegralGauge(_) => fail(EXIT_INCONSISTENT, e.to_string()),
    }
}

fn homology_error(e: HomologyError) -> Failure {
    match e {
        HomologyError::Analyze(a) => analyze_error(a),
        HomologyError::NotACycle | HomologyError::ProjectionNotClosed | HomologyError::NoEmbedding => fail(EXIT_VALIDATION, e.to_string()),
        _ => fail(EXIT_INCONSISTENT, e.to_string()),
    }
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Run {
    let (h, reg) = load_hypergraph(&args.file)?;
    checked(&h)?;
    let a = analyze_code(&h).map_err(analyze_error)?;
    let d = HomologyDecomposition::new(&h, args.mode.into()).map_err(homology_error)?;
    let l = match min_triangles_nontrivial(&h, &d, args.node_budget) {
        Ok(t) => Some(t),
        Err(HomologyError::TrivialHomology) => None,
        Err(e) => return Err(homology_error(e)),
    };
    let mut orderable = 0usize;
    let mut rows = Vec::new();
    for c in &reg.cycles {
        let m = h.edge_set(c.edges.iter().copied());
        let w = loop_operator(&h, &m).map_err(|e| fail(EXIT_VALIDATION, format!("{}: {e}", c.tag())))?;
        let verdict = match syndrome_order(&w, &cycle_links(&h, &m), SyndromeBudget::default()) {
            Ok(SyndromeOutcome::Found(_)) => {
                orderable += 1;
                "found"
            }
            Ok(SyndromeOutcome::Infeasible) => "infeasible",
            Ok(SyndromeOutcome::BudgetExhausted) => "budget",
            Err(_) => "error",
        };
        rows.push(format!("stabilizer={} order={verdict}", c.tag()));
    }
    let formula = closed_form(&h).map(|r| r.map_err(|e| fail(EXIT_INCONSISTENT, e.to_string())));
    let agree = match &formula {
        None => "n/a",
        Some(Ok(f)) if (f.n, f.s, f.r, f.k) == (a.n as i64, a.s as i64, a.r as i64, a.k as i64) => "yes",
        Some(_) => "no",
    };
    let d_field = match &l {
        Some(t) if t.proven_optimal => format!("d<={}", t.l),
        Some(t) => format!("d<={}?", t.l),
        None => "d".to_string(),
    };
    let text = |w: &mut dyn Write| -> io::Result<()> {
        match args.format {
            Format::Table => {
                for r in &rows {
                    writeln!(w, "{r}")?;
                }
                if let Some(Ok(f)) = &formula {
                    writeln!(w, "formula [[{},{},{}]] s={}", f.n, f.k, f.r, f.s)?;
                }
                writeln!(w, "orderable={orderable}/{} h1={} mode={:?}", rows.len(), d.h1_dim, d.mode)?;
                writeln!(w, "[[{},{},{},{d_field}]] s={} dimG={} agree={agree}", a.n, a.k, a.r, a.s, a.dim_gauge)
            }
            Format::Kv => {
                let l = l.as_ref().map_or("none".to_string(), |t| t.l.to_string());
                writeln!(
                    w,
                    "n={} k={} r={} s={} dimG={} l={l} h1={} orderable={orderable} generators={} agree={agree}",
                    a.n,
                    a.k,
                    a.r,
                    a.s,
                    a.dim_gauge,
                    d.h1_dim,
                    rows.len()
                )
            }
        }
    };
    text(out).map_err(io_fail)?;
    match formula {
        Some(Err(e)) => Err(e),
        Some(Ok(_)) if agree == "no" => Err(fail(EXIT_INCONSISTENT, "closed form and linear algebra disagree")),
        _ => Ok(()),
    }
}

fn validate(args: &ValidateArgs, out: &mut dyn Write) -> Run {
    let (h, _) = load_hypergraph(&args.file)?;
    let report = h.validate();
    for l in report.lines() {
        writeln!(out, "{l}").map_err(io_fail)?;
    }
    if report.passes() {
        Ok(())
    } else {
        Err(fail(EXIT_VALIDATION, "validation failed"))
    }
}

fn distance(args: &DistanceArgs, out: &mut dyn Write) -> Run {
    let (h, map) = match &args.file {
        Some(path) => (load_hypergraph(path)?.0, None),
        None => {
            let b = build_from(&args.source)?;
            (b.h, Some(b.map))
        }
    };
    checked(&h)?;
    let d = HomologyDecomposition::new(&h, args.mode.into()).map_err(homology_error)?;
    let t = min_triangles_nontrivial(&h, &d, args.node_budget).map_err(homology_error)?;
    let proven = if t.proven_optimal { "yes" } else { "no" };
    writeln!(out, "l={} proven={proven} h1={} mode={:?}", t.l, d.h1_dim, d.mode).map_err(io_fail)?;
    writeln!(out, "{}", d.report_row(&h, &t.witness).map_err(homology_error)?).map_err(io_fail)?;
    if let Some(map) = map.filter(|_| h.construction == "bombin") {
        let b = bombin_bounds(&h, &map, args.node_budget).map_err(homology_error)?;
        writeln!(out, "d_T={} d_L={} dual_h1={}", b.d_t.l, b.d_l, DualHomology::new(&map).h1_dim()).map_err(io_fail)?;
    }
    if let Some(cap) = args.dressed_cap {
        let a = analyze_code(&h).map_err(analyze_error)?;
        match brute_min_dressed_weight(&a, cap) {
            Ok(Some(w)) => writeln!(out, "dressed={w}"),
            Ok(None) => writeln!(out, "dressed>{cap}"),
            Err(e) => writeln!(out, "dressed=none ({e})"),
        }
        .map_err(io_fail)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let result = match &cli.command {
        Command::Census(a) => census(a, &mut out),
        Command::Build(a) => build(a, &mut out, &mut err),
        Command::Analyze(a) => analyze(a, &mut out),
        Command::Validate(a) => validate(a, &mut out),
        Command::Distance(a) => distance(a, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
