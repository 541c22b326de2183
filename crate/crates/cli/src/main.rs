use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cospan_core::algebra::{format_rational, parse_rational};
use cospan_core::cospan::flow_shift;
use cospan_core::decompose::check_witness;
use cospan_core::io::{parse_cospan, parse_scx, print_cospan};
use cospan_core::oracle::{boundary_samples, default_samples, random_rectangles, Oracle};
use cospan_core::{
    barcode_of, bottleneck, build_pinned_cospan, decompose, diagram_of, Diagram, FilteredCospan,
    Homeomorphism, Rational, Strip, StripPoint, Summand,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "cospan",
    version,
    about = "Decompose filtered cospans and compare their diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List the elementary summands of a cospan (`.scx` or cospan file).
    Decompose { input: PathBuf },
    /// Level-set barcode.
    Barcode { input: PathBuf },
    /// Points of the persistence diagram on the strip.
    Diagram { input: PathBuf },
    /// Bottleneck distance between two inputs; `.json` files are diagrams
    /// as printed by `diagram --format json`.
    Bottleneck {
        first: PathBuf,
        second: PathBuf,
        /// `arctan`, `linear`, or `table:u:t,u:t,...`.
        #[arg(long, default_value = "arctan")]
        phi: String,
    },
    /// Check a decomposition against the brute-force evaluation.
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Off-diagonal comparable pairs for the rank check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 30)]
        rectangles: usize,
        /// Points of the strip boundary where homology must vanish.
        #[arg(long, default_value_t = 20)]
        boundary: usize,
    },
    /// Print the cospan moved by the flow for time `eps`.
    Flow {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long, default_value = "arctan")]
        phi: String,
    },
    /// Interleaving distance of two strip points `x,y` and their distances
    /// to the boundary.
    Metric {
        #[arg(allow_hyphen_values = true)]
        v: String,
        #[arg(allow_hyphen_values = true)]
        w: String,
        #[arg(long, default_value = "2")]
        lambda: String,
        #[arg(long, default_value = "arctan")]
        phi: String,
    },
}

enum Failure {
    Input(String),
    Mismatch(String),
}

impl From<cospan_core::Error> for Failure {
    fn from(e: cospan_core::Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: cospan_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn extension(path: &Path) -> &str {
    path.extension().and_then(|e| e.to_str()).unwrap_or("")
}

fn load_cospan(path: &Path) -> Result<FilteredCospan, Failure> {
    let text = read(path)?;
    match extension(path) {
        "scx" => {
            let s = in_file(path, parse_scx(&text))?;
            in_file(path, build_pinned_cospan(&s))
        }
        "json" => Err(Failure::Input(format!(
            "{}: diagrams are only accepted by bottleneck",
            path.display()
        ))),
        _ => in_file(path, parse_cospan(&text)),
    }
}

fn load_diagram(path: &Path) -> Result<Diagram, Failure> {
    if extension(path) != "json" {
        let c = load_cospan(path)?;
        return Ok(diagram_of(&in_file(path, decompose(&c))?, c.lambda()));
    }
    let bad = |m: &str| Failure::Input(format!("{}: {m}", path.display()));
    let v: Value = serde_json::from_str(&read(path)?).map_err(|e| bad(&e.to_string()))?;
    let lambda = v["lambda"].as_str().ok_or_else(|| bad("missing lambda"))?;
    let lambda = in_file(path, parse_rational(lambda))?;
    let points = v["points"]
        .as_array()
        .ok_or_else(|| bad("missing points"))?;
    let mut summands = Vec::with_capacity(points.len());
    for p in points {
        let s = p["summand"]
            .as_str()
            .ok_or_else(|| bad("point without summand"))?;
        summands.push(in_file(path, s.parse::<Summand>())?);
    }
    let d = Diagram::from_summands(&summands, &lambda);
    // stored coordinates, when present, must agree with the summands
    for (p, dp) in points.iter().zip(&d.points) {
        for (key, want) in [("x", &dp.point.x), ("y", &dp.point.y)] {
            if let Some(s) = p[key].as_str() {
                if &in_file(path, parse_rational(s))? != want {
                    return Err(bad(&format!("point of {} has wrong {key}", dp.source)));
                }
            }
        }
    }
    Ok(d)
}

/// Twelve significant digits, shortest form.
fn distance(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

fn pretty(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
}

fn lines<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|i| i.to_string() + "\n").collect()
}

fn run_decompose(input: &Path, format: Format) -> Outcome {
    let d = in_file(input, decompose(&load_cospan(input)?))?;
    Ok(match format {
        Format::Text => lines(&d.summands),
        Format::Json => pretty(json!({
            "summands": d.summands.iter().map(|s| json!({
                "kind": s.kind(),
                "degree": s.degree(),
                "summand": s.to_string(),
            })).collect::<Vec<_>>()
        })),
    })
}

fn run_barcode(input: &Path, format: Format) -> Outcome {
    let c = load_cospan(input)?;
    let b = barcode_of(&in_file(input, decompose(&c))?, c.lambda());
    Ok(match format {
        Format::Text => b.to_string(),
        Format::Json => pretty(json!({
            "bars": b.bars.iter().map(|b| json!({
                "degree": b.degree,
                "interval": b.interval(),
            })).collect::<Vec<_>>()
        })),
    })
}

fn diagram_json(d: &Diagram) -> Result<Value, Failure> {
    let strip = Strip::new(&d.lambda);
    let mut points = Vec::new();
    for p in &d.points {
        let pl = strip.classify(&p.point)?;
        points.push(json!({
            "summand": p.source.to_string(),
            "x": format_rational(&p.point.x),
            "y": format_rational(&p.point.y),
            "k": pl.k,
            "region": pl.region.name(),
        }));
    }
    Ok(json!({ "lambda": format_rational(&d.lambda), "points": points }))
}

fn run_diagram(input: &Path, format: Format) -> Outcome {
    let c = load_cospan(input)?;
    let d = diagram_of(&in_file(input, decompose(&c))?, c.lambda());
    Ok(match format {
        Format::Text => d.to_string(),
        Format::Json => pretty(diagram_json(&d)?),
    })
}

fn run_bottleneck(first: &Path, second: &Path, phi: &str, format: Format) -> Outcome {
    let (d1, d2) = (load_diagram(first)?, load_diagram(second)?);
    let phi = Homeomorphism::parse(phi, &d1.lambda)?;
    let (dist, m) = bottleneck(&d1, &d2, &phi)?;
    let name1 = |i: usize| d1.points[i].source.to_string();
    let name2 = |i: usize| d2.points[i].source.to_string();
    Ok(match format {
        Format::Text => {
            let mut out = format!("distance {}\n", distance(dist));
            for &(i, j) in &m.pairs {
                out += &format!("match {} <-> {}\n", name1(i), name2(j));
            }
            for &i in &m.unmatched1 {
                out += &format!("unmatched first {}\n", name1(i));
            }
            for &j in &m.unmatched2 {
                out += &format!("unmatched second {}\n", name2(j));
            }
            out
        }
        Format::Json => pretty(json!({
            "distance": distance(dist),
            "pairs": m.pairs.iter().map(|&(i, j)| json!([name1(i), name2(j)])).collect::<Vec<_>>(),
            "unmatched_first": m.unmatched1.iter().map(|&i| name1(i)).collect::<Vec<_>>(),
            "unmatched_second": m.unmatched2.iter().map(|&j| name2(j)).collect::<Vec<_>>(),
        })),
    })
}

struct VerifyOptions {
    seed: u64,
    samples: usize,
    rectangles: usize,
    boundary: usize,
}

fn run_verify(input: &Path, o: &VerifyOptions, format: Format) -> Outcome {
    let c = load_cospan(input)?;
    let d = in_file(input, decompose(&c))?;
    let mut problems = check_witness(&c, &d)?
        .into_iter()
        .map(|w| format!("witness {w}"))
        .collect::<Vec<_>>();
    let mut oracle = Oracle::new(&c);
    let blocks = oracle.blocks(
        &diagram_of(&d, c.lambda()),
        &default_samples(&c, o.samples, o.seed),
    )?;
    for m in &blocks.mismatches {
        problems.push(format!(
            "rank {} -> {}: expected {} got {}",
            m.v, m.w, m.expected, m.actual
        ));
    }
    let rects = random_rectangles(&c, o.rectangles, o.seed);
    for (st, uv) in &rects {
        let r = oracle.exactness(st, uv)?;
        for f in r.failures {
            problems.push(format!("rectangle {st} {uv}: {f}"));
        }
    }
    let points = boundary_samples(&c, o.boundary, o.seed);
    for p in &points {
        let dim = oracle.h0_dim(p)?;
        if dim != 0 {
            problems.push(format!("boundary {p}: dimension {dim}"));
        }
    }
    let passed = problems.is_empty();
    let out = match format {
        Format::Text => {
            let mut out = format!(
                "summands {}\nranks {}\nrectangles {}\nboundary points {}\n",
                d.summands.len(),
                blocks.checked,
                rects.len(),
                points.len()
            );
            out += &lines(problems.iter().map(|p| format!("mismatch {p}")));
            out + if passed { "pass\n" } else { "fail\n" }
        }
        Format::Json => pretty(json!({
            "summands": d.summands.len(),
            "ranks": blocks.checked,
            "rectangles": rects.len(),
            "boundary_points": points.len(),
            "mismatches": problems,
            "passed": passed,
        })),
    };
    if passed {
        Ok(out)
    } else {
        Err(Failure::Mismatch(out))
    }
}

fn run_flow(input: &Path, eps: &str, phi: &str) -> Outcome {
    let c = load_cospan(input)?;
    let eps = parse_rational(eps)?;
    let phi = Homeomorphism::parse(phi, c.lambda())?;
    Ok(print_cospan(&flow_shift(&c, &eps).materialize(&phi)))
}

fn parse_point(s: &str) -> Result<StripPoint, Failure> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Failure::Input(format!("point {s:?} is not of the form x,y")))?;
    Ok(StripPoint::new(
        parse_rational(x.trim())?,
        parse_rational(y.trim())?,
    ))
}

fn run_metric(v: &str, w: &str, lambda: &str, phi: &str, format: Format) -> Outcome {
    let lambda: Rational = parse_rational(lambda)?;
    let phi = Homeomorphism::parse(phi, &lambda)?;
    let strip = Strip::new(&lambda);
    let (v, w) = (parse_point(v)?, parse_point(w)?);
    let (pv, pw) = (strip.classify(&v)?, strip.classify(&w)?);
    let d = distance(strip.d_int(&v, &w, &phi)?);
    let (bv, bw) = (
        distance(strip.d_boundary(&v, &phi)?),
        distance(strip.d_boundary(&w, &phi)?),
    );
    Ok(match format {
        Format::Text => format!(
            "v {v} k={} region={} d_boundary {bv}\nw {w} k={} region={} d_boundary {bw}\nd_int {d}\n",
            pv.k, pv.region, pw.k, pw.region
        ),
        Format::Json => pretty(json!({
            "v": { "point": v.to_string(), "k": pv.k, "region": pv.region.name(), "d_boundary": bv },
            "w": { "point": w.to_string(), "k": pw.k, "region": pw.region.name(), "d_boundary": bw },
            "d_int": d,
        })),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let f = cli.format;
    let outcome = match &cli.command {
        Command::Decompose { input } => run_decompose(input, f),
        Command::Barcode { input } => run_barcode(input, f),
        Command::Diagram { input } => run_diagram(input, f),
        Command::Bottleneck { first, second, phi } => run_bottleneck(first, second, phi, f),
        Command::Verify {
            input,
            seed,
            samples,
            rectangles,
            boundary,
        } => run_verify(
            input,
            &VerifyOptions {
                seed: *seed,
                samples: *samples,
                rectangles: *rectangles,
                boundary: *boundary,
            },
            f,
        ),
        Command::Flow { input, eps, phi } => run_flow(input, eps, phi),
        Command::Metric { v, w, lambda, phi } => run_metric(v, w, lambda, phi, f),
    };
    match outcome {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
