//! `tropico`: lattice-path counts and plane tropical curves from the command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tropico::real::parse_signs;
use tropico::svg::{curve_svg, subdivision_svg};
use tropico::{
    check_balancing, curve_of, dual_subdivision, genus_of_simple, Execution, LatticePolygon, LinearOrder, PathCounter,
    TropicalPolynomial,
};

#[derive(Parser, Debug)]
#[command(name = "tropico", version, about = "Tropical curve counts via lattice paths")]
struct Cli {
    /// Worker threads for path batches. 1 runs sequentially.
    #[arg(long, global = true, env = "TROPICO_JOBS")]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of tropical curves of genus g through s+g−1 generic points.
    Count {
        #[command(flatten)]
        target: Target,
        /// One row per contributing path with μ₊, μ₋, μ.
        #[arg(long)]
        per_path: bool,
    },
    /// Welschinger-signed count of real curves.
    Welschinger {
        #[command(flatten)]
        target: Target,
    },
    /// Real curves through points with prescribed quadrant signs.
    RealCount {
        #[command(flatten)]
        target: Target,
        /// Comma-separated quadrant tokens, one per point: `++,+-,-+,--`.
        #[arg(long, allow_hyphen_values = true)]
        signs: String,
    },
    /// The λ-increasing paths themselves.
    Paths {
        #[command(flatten)]
        target: Target,
        /// One row per path instead of a summary.
        #[arg(long)]
        list: bool,
        /// Attach the decoded subdivisions of each contributing path (JSON only).
        #[arg(long)]
        decode: bool,
    },
    /// Corner locus of a tropical polynomial.
    Curve {
        /// Polynomial JSON: {"terms":[{"exp":[i,j],"coeff":"p/q"},..]}.
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        subdivision_svg: Option<PathBuf>,
    },
    /// Counts for a family of polygons over every genus with at least one path step.
    Table {
        #[arg(long, value_enum, default_value_t = Family::Projective)]
        family: Family,
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        #[arg(long, default_value_t = 4)]
        ceiling: i64,
        #[arg(long, allow_hyphen_values = true)]
        min_genus: Option<i64>,
        #[arg(long)]
        no_verify: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Δ_d.
    Projective,
    /// [0,a]×[0,b], 1 ≤ a ≤ b ≤ d.
    Bidegree,
}

#[derive(Args, Debug)]
struct Target {
    /// Polygon JSON file: {"vertices":[[x,y],..]}.
    #[arg(long, conflicts_with_all = ["degree", "rect"])]
    polygon: Option<PathBuf>,
    /// Δ_d.
    #[arg(long, conflicts_with = "rect")]
    degree: Option<i64>,
    /// [0,a]×[0,b] given as `a,b`.
    #[arg(long)]
    rect: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    genus: i64,
    /// `a,b/c,d`: compare by ⟨(a,b),·⟩, then ⟨(c,d),·⟩.
    #[arg(long, allow_hyphen_values = true)]
    order: Option<String>,
    /// Skip the recount under a second order.
    #[arg(long)]
    no_verify: bool,
}

enum Failure {
    /// Malformed input.
    Input(String),
    /// Well-formed input outside the domain.
    Domain(String),
    /// An internal consistency check failed.
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
            Failure::Domain(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Domain(m) | Failure::Check(m) => m,
        }
    }
}

impl From<tropico::Error> for Failure {
    fn from(e: tropico::Error) -> Self {
        use tropico::Error as E;
        match e {
            E::NonInjectiveOrder(..) | E::InvalidGenus { .. } | E::DegenerateSupport => Failure::Domain(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_pair(s: &str) -> Outcome<(i64, i64)> {
    let bad = || Failure::Input(format!("expected a,b, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

impl Target {
    fn polygon(&self) -> Outcome<LatticePolygon> {
        if let Some(path) = &self.polygon {
            return read_json(path);
        }
        if let Some(d) = self.degree {
            if d < 1 {
                return Err(Failure::Input(format!("degree must be positive, got {d}")));
            }
            return Ok(LatticePolygon::projective(d));
        }
        if let Some(r) = &self.rect {
            let (a, b) = parse_pair(r)?;
            if a < 1 || b < 1 {
                return Err(Failure::Input(format!("rectangle sides must be positive, got {a},{b}")));
            }
            return Ok(LatticePolygon::rectangle(a, b));
        }
        Err(Failure::Input("one of --polygon, --degree, --rect is required".into()))
    }

    fn order(&self) -> Outcome<LinearOrder> {
        match &self.order {
            Some(s) => Ok(s.parse()?),
            None => Ok(LinearOrder::default()),
        }
    }

    fn counter(&self, exec: Execution) -> Outcome<PathCounter> {
        Ok(PathCounter::new(&self.polygon()?, self.order()?)?.with_execution(exec))
    }
}

/// An order that is injective on the polygon's lattice points, drawn from a fixed seed.
fn second_order(poly: &LatticePolygon, avoid: &LinearOrder) -> LinearOrder {
    let pts = poly.lattice_points();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7209_5eed);
    loop {
        let mut v = || (rng.gen_range(-9..=9), rng.gen_range(-9..=9));
        let (primary, tiebreak) = (v(), v());
        let Ok(order) = LinearOrder::new(primary, tiebreak) else {
            continue;
        };
        if order.primary().cross(order.tiebreak()) != 0 && order != *avoid && order.is_injective_on(&pts) {
            return order;
        }
    }
}

fn verify<T: PartialEq + std::fmt::Display>(
    what: &str,
    pc: &PathCounter,
    value: &T,
    recount: impl Fn(&PathCounter) -> tropico::Result<T>,
) -> Outcome<()> {
    let order = second_order(pc.polygon(), pc.order());
    let other = PathCounter::new(pc.polygon(), order)?.with_execution(pc.execution());
    let again = recount(&other)?;
    if again != *value {
        return Err(Failure::Check(format!(
            "{what} is {value} under order {} but {again} under order {order}",
            pc.order()
        )));
    }
    Ok(())
}

fn header(pc: &PathCounter, genus: i64) -> Value {
    json!({
        "polygon": pc.polygon().vertices(),
        "genus": genus,
        "order": pc.order().to_string(),
    })
}

fn cmd_count(t: &Target, per_path: bool, exec: Execution, format: Format) -> Outcome<String> {
    let pc = t.counter(exec)?;
    let paths = pc.enumerate(pc.steps_for_genus(t.genus)?);
    let rows: Vec<_> = pc.multiplicities(&paths).into_iter().filter(|m| m.total() > 0).collect();
    let total: u64 = rows.iter().map(|m| m.total()).sum();
    if !t.no_verify {
        verify("count", &pc, &total, |other| other.count(t.genus))?;
    }
    let mut out = String::new();
    match format {
        Format::Tsv => {
            if per_path {
                out.push_str("path\tmu_plus\tmu_minus\tmu\n");
                for m in &rows {
                    let _ = writeln!(out, "{}\t{}\t{}\t{}", m.path, m.plus, m.minus, m.total());
                }
                let _ = writeln!(out, "total\t\t\t{total}");
            } else {
                let _ = writeln!(out, "{total}");
            }
        }
        Format::Json => {
            let mut v = header(&pc, t.genus);
            v["count"] = json!(total.to_string());
            if per_path {
                v["paths"] = rows
                    .iter()
                    .map(|m| {
                        json!({
                            "path": m.path,
                            "mu_plus": m.plus.to_string(),
                            "mu_minus": m.minus.to_string(),
                            "mu": m.total().to_string(),
                        })
                    })
                    .collect();
            }
            out = pretty(&v);
        }
    }
    Ok(out)
}

fn cmd_welschinger(t: &Target, exec: Execution, format: Format) -> Outcome<String> {
    let pc = t.counter(exec)?;
    let w = pc.welschinger_count(t.genus)?;
    // Order independence is only expected for rational curves on smooth surfaces.
    if !t.no_verify && t.genus == 0 && pc.polygon().is_smooth() {
        verify("welschinger count", &pc, &w, |other| other.welschinger_count(0))?;
    }
    Ok(match format {
        Format::Tsv => format!("{w}\n"),
        Format::Json => {
            let mut v = header(&pc, t.genus);
            v["welschinger"] = json!(w.to_string());
            pretty(&v)
        }
    })
}

fn cmd_real_count(t: &Target, signs: &str, exec: Execution, format: Format) -> Outcome<String> {
    let pc = t.counter(exec)?;
    let quadrants = parse_signs(signs)?;
    let r = pc.real_signed_count(t.genus, &quadrants)?;
    Ok(match format {
        Format::Tsv => format!("{r}\n"),
        Format::Json => {
            let mut v = header(&pc, t.genus);
            v["signs"] = json!(quadrants.iter().map(ToString::to_string).collect::<Vec<_>>());
            v["real_count"] = json!(r.to_string());
            pretty(&v)
        }
    })
}

fn cmd_paths(t: &Target, list: bool, decode: bool, exec: Execution, format: Format) -> Outcome<String> {
    let pc = t.counter(exec)?;
    let paths = pc.enumerate(pc.steps_for_genus(t.genus)?);
    let mults = pc.multiplicities(&paths);
    let contributing = mults.iter().filter(|m| m.total() > 0).count();
    let mut out = String::new();
    match format {
        Format::Tsv if list => {
            out.push_str("path\tmu_plus\tmu_minus\tmu\n");
            for m in &mults {
                let _ = writeln!(out, "{}\t{}\t{}\t{}", m.path, m.plus, m.minus, m.total());
            }
        }
        Format::Tsv => {
            let _ = writeln!(out, "paths\t{}\ncontributing\t{contributing}", mults.len());
        }
        Format::Json => {
            let mut v = header(&pc, t.genus);
            v["paths_total"] = json!(mults.len());
            v["contributing"] = json!(contributing);
            if list || decode {
                v["paths"] = mults
                    .iter()
                    .map(|m| {
                        let mut row = json!({
                            "path": m.path,
                            "mu_plus": m.plus.to_string(),
                            "mu_minus": m.minus.to_string(),
                            "mu": m.total().to_string(),
                        });
                        if decode && m.total() > 0 {
                            let curves: Vec<Value> = pc
                                .decode(&m.path)
                                .iter()
                                .map(|c| serde_json::to_value(c.export()).expect("serializable"))
                                .collect();
                            row["curves"] = Value::Array(curves);
                        }
                        row
                    })
                    .collect();
            }
            out = pretty(&v);
        }
    }
    Ok(out)
}

fn cmd_curve(poly: &Path, svg: Option<&Path>, sub_svg: Option<&Path>, format: Format) -> Outcome<String> {
    let f: TropicalPolynomial = read_json(poly)?;
    let curve = curve_of(&f)?;
    if !check_balancing(&curve) {
        return Err(Failure::Check("constructed curve is not balanced".into()));
    }
    let sub = dual_subdivision(&f)?;
    let genus = genus_of_simple(&sub).ok();
    let write = |path: &Path, text: String| {
        fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    };
    if let Some(p) = svg {
        write(p, curve_svg(&curve))?;
    }
    if let Some(p) = sub_svg {
        write(p, subdivision_svg(&sub))?;
    }
    let mut out = String::new();
    match format {
        Format::Tsv => {
            for (i, v) in curve.vertices.iter().enumerate() {
                let kind = if v.crossing { "crossing" } else { "vertex" };
                let _ = writeln!(out, "{kind}\t{i}\t{}\t{}", v.point.x, v.point.y);
            }
            for e in &curve.edges {
                let _ = writeln!(out, "edge\t{}\t{}\t{}\t{}", e.from, e.to, e.direction, e.weight);
            }
            for r in &curve.rays {
                let _ = writeln!(out, "ray\t{}\t{}\t{}", r.from, r.direction, r.weight);
            }
            match genus {
                Some(g) => {
                    let _ = writeln!(out, "genus\t{g}");
                }
                None => out.push_str("genus\tnot simple\n"),
            }
        }
        Format::Json => {
            let mut v = serde_json::to_value(&curve).expect("serializable");
            v["subdivision"] = json!({ "cells": sub.cells, "nodes": sub.nodes });
            v["balanced"] = json!(true);
            v["genus"] = json!(genus);
            out = pretty(&v);
        }
    }
    Ok(out)
}

struct TableRow {
    label: String,
    genus: i64,
    count: u64,
}

fn cmd_table(
    family: Family,
    max_degree: i64,
    ceiling: i64,
    min_genus: Option<i64>,
    no_verify: bool,
    exec: Execution,
    format: Format,
) -> Outcome<String> {
    if max_degree < 1 || max_degree > ceiling {
        return Err(Failure::Input(format!("max degree must lie in 1..={ceiling}, got {max_degree}")));
    }
    let polygons: Vec<(String, LatticePolygon)> = match family {
        Family::Projective => (1..=max_degree).map(|d| (d.to_string(), LatticePolygon::projective(d))).collect(),
        Family::Bidegree => (1..=max_degree)
            .flat_map(|b| (1..=b).map(move |a| (format!("{a}x{b}"), LatticePolygon::rectangle(a, b))))
            .collect(),
    };
    let mut rows = Vec::new();
    for (label, poly) in &polygons {
        let pc = PathCounter::new(poly, LinearOrder::default())?.with_execution(exec);
        let (s, l) = poly.counts();
        let lowest = (2 - s as i64).max(min_genus.unwrap_or(i64::MIN));
        for genus in lowest..=l as i64 {
            let count = pc.count(genus)?;
            if !no_verify {
                verify("count", &pc, &count, |other| other.count(genus))?;
            }
            rows.push(TableRow { label: label.clone(), genus, count });
        }
    }
    let name = match family {
        Family::Projective => "projective",
        Family::Bidegree => "bidegree",
    };
    Ok(match format {
        Format::Tsv => {
            let mut out = String::from("family\tdegree\tgenus\tcount\n");
            for r in &rows {
                let _ = writeln!(out, "{name}\t{}\t{}\t{}", r.label, r.genus, r.count);
            }
            out
        }
        Format::Json => pretty(&json!({
            "family": name,
            "rows": rows
                .iter()
                .map(|r| json!({ "degree": r.label, "genus": r.genus, "count": r.count.to_string() }))
                .collect::<Vec<_>>(),
        })),
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn execution(jobs: Option<usize>) -> Outcome<Execution> {
    match jobs {
        Some(0) => Err(Failure::Input("--jobs must be positive".into())),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Check(format!("thread pool: {e}")))?;
            Ok(Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Execution::Sequential),
        None => Ok(Execution::default()),
    }
}

fn run(cli: &Cli) -> Outcome<String> {
    let exec = execution(cli.jobs)?;
    let format = cli.format;
    match &cli.command {
        Command::Count { target, per_path } => cmd_count(target, *per_path, exec, format),
        Command::Welschinger { target } => cmd_welschinger(target, exec, format),
        Command::RealCount { target, signs } => cmd_real_count(target, signs, exec, format),
        Command::Paths { target, list, decode } => cmd_paths(target, *list, *decode, exec, format),
        Command::Curve { poly, svg, subdivision_svg } => {
            cmd_curve(poly, svg.as_deref(), subdivision_svg.as_deref(), format)
        }
        Command::Table { family, max_degree, ceiling, min_genus, no_verify } => {
            cmd_table(*family, *max_degree, *ceiling, *min_genus, *no_verify, exec, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("tropico: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
