//! Text formats: the cospan document and the `.scx` simplicial input.
//!
//! Cospan document:
//!
//! ```text
//! lambda 2
//! field F5
//! up
//! gen 0 x -1
//! gen 1 y 1
//! d 1 0:0:1
//! down
//! mid
//! gen 0 k
//! psi_up 0 0:0:1
//! ```
//!
//! Triplets are `col:row:scalar`; `d <k>` is the boundary out of degree `k`.
//! Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::algebra::{format_rational, parse_rational, Field, Rational, SparseMatrix};
use crate::complex::{FilteredComplex, Flavor, Generator};
use crate::cospan::FilteredCospan;
use crate::error::{parse_err, Error, Result};
use crate::simplicial::SimplicialInput;

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

#[derive(Default)]
struct Block {
    gens: BTreeMap<i32, Vec<Generator>>,
    maps: BTreeMap<i32, (usize, Vec<(usize, usize, String)>)>,
}

fn parse_triplets(line: usize, toks: &[&str]) -> Result<Vec<(usize, usize, String)>> {
    toks.iter()
        .map(|t| {
            let parts: Vec<&str> = t.splitn(3, ':').collect();
            match parts.as_slice() {
                [c, r, s] => match (c.parse(), r.parse()) {
                    (Ok(c), Ok(r)) => Ok((r, c, s.to_string())),
                    _ => parse_err(line, format!("bad triplet {t:?}")),
                },
                _ => parse_err(line, format!("expected col:row:scalar, got {t:?}")),
            }
        })
        .collect()
}

fn parse_degree(line: usize, tok: Option<&&str>) -> Result<i32> {
    match tok.map(|t| t.parse::<i32>()) {
        Some(Ok(k)) => Ok(k),
        _ => parse_err(line, "expected an integer degree"),
    }
}

fn matrix(
    field: Field,
    rows: usize,
    cols: usize,
    line: usize,
    entries: &[(usize, usize, String)],
) -> Result<SparseMatrix> {
    let parsed = entries
        .iter()
        .map(|(r, c, s)| {
            Ok((
                *r,
                *c,
                field
                    .parse_scalar(s)
                    .or_else(|e| parse_err(line, e.to_string()))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    SparseMatrix::from_entries(field, rows, cols, parsed)
        .or_else(|e| parse_err(line, e.to_string()))
}

fn build_complex(
    block: &Block,
    flavor: Flavor,
    field: Field,
    lambda: &Rational,
) -> Result<FilteredComplex> {
    let dim = |k: i32| block.gens.get(&k).map_or(0, Vec::len);
    let mut bd = BTreeMap::new();
    for (k, (line, entries)) in &block.maps {
        bd.insert(*k, matrix(field, dim(k - 1), dim(*k), *line, entries)?);
    }
    FilteredComplex::from_parts(flavor, field, lambda.clone(), block.gens.clone(), bd)
}

/// Parse a cospan document.
pub fn parse_cospan(text: &str) -> Result<FilteredCospan> {
    let mut lambda: Option<Rational> = None;
    let mut field: Option<Field> = None;
    let mut blocks: [Block; 3] = Default::default();
    let mut psi: [BTreeMap<i32, (usize, Vec<(usize, usize, String)>)>; 2] = Default::default();
    let mut section: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = content(raw).split_whitespace().collect();
        let Some(head) = toks.first() else { continue };
        match *head {
            "lambda" => {
                let q = toks.get(1).map(|t| parse_rational(t));
                match q {
                    Some(Ok(q)) if q > Rational::default() => lambda = Some(q),
                    _ => return parse_err(line, "lambda must be a positive rational"),
                }
            }
            "field" => match toks.get(1).map(|t| t.parse::<Field>()) {
                Some(Ok(f)) => field = Some(f),
                Some(Err(e)) => return parse_err(line, e.to_string()),
                None => return parse_err(line, "missing field"),
            },
            "up" | "down" | "mid" if toks.len() == 1 => {
                section = Some(
                    ["up", "down", "mid"]
                        .iter()
                        .position(|s| s == head)
                        .expect("known"),
                );
            }
            "gen" => {
                let Some(s) = section else {
                    return parse_err(line, "gen outside a complex block");
                };
                let k = parse_degree(line, toks.get(1))?;
                let Some(name) = toks.get(2) else {
                    return parse_err(line, "missing generator name");
                };
                let level = match (s, toks.get(3)) {
                    (2, None) => Rational::default(),
                    (2, Some(_)) => return parse_err(line, "mid generators carry no level"),
                    (_, Some(t)) => {
                        parse_rational(t).or_else(|e| parse_err(line, e.to_string()))?
                    }
                    (_, None) => return parse_err(line, "missing level"),
                };
                blocks[s]
                    .gens
                    .entry(k)
                    .or_default()
                    .push(Generator::new(*name, level));
            }
            "d" => {
                let Some(s) = section else {
                    return parse_err(line, "d outside a complex block");
                };
                let k = parse_degree(line, toks.get(1))?;
                let entries = parse_triplets(line, &toks[2..])?;
                if blocks[s].maps.insert(k, (line, entries)).is_some() {
                    return parse_err(line, format!("repeated boundary for degree {k}"));
                }
            }
            "psi_up" | "psi_down" => {
                section = None;
                let j = usize::from(*head == "psi_down");
                let k = parse_degree(line, toks.get(1))?;
                let entries = parse_triplets(line, &toks[2..])?;
                if psi[j].insert(k, (line, entries)).is_some() {
                    return parse_err(line, format!("repeated {head} for degree {k}"));
                }
            }
            other => return parse_err(line, format!("unknown keyword {other:?}")),
        }
    }
    let lambda = lambda.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing lambda".into(),
    })?;
    let field = field.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing field".into(),
    })?;
    let up = build_complex(&blocks[0], Flavor::Ascending, field, &lambda)?;
    let down = build_complex(&blocks[1], Flavor::Descending, field, &lambda)?;
    let mid = build_complex(&blocks[2], Flavor::Unfiltered, field, &lambda)?;
    let maps = |j: usize, src: &FilteredComplex| -> Result<BTreeMap<i32, SparseMatrix>> {
        psi[j]
            .iter()
            .map(|(k, (line, e))| Ok((*k, matrix(field, mid.dim(*k), src.dim(*k), *line, e)?)))
            .collect()
    };
    let (pu, pd) = (maps(0, &up)?, maps(1, &down)?);
    FilteredCospan::new(up, down, mid, pu, pd)
}

fn write_triplets(out: &mut String, m: &SparseMatrix) {
    for (r, c, s) in m.entries() {
        let _ = write!(out, " {c}:{r}:{s}");
    }
}

fn write_complex(out: &mut String, name: &str, c: &FilteredComplex, levels: bool) {
    out.push_str(name);
    out.push('\n');
    for k in c.degrees() {
        for g in c.gens(k) {
            if levels {
                let _ = writeln!(out, "gen {k} {} {}", g.name, format_rational(&g.level));
            } else {
                let _ = writeln!(out, "gen {k} {}", g.name);
            }
        }
    }
    for k in c.degrees() {
        let d = c.boundary(k);
        if !d.is_zero() {
            let _ = write!(out, "d {k}");
            write_triplets(out, &d);
            out.push('\n');
        }
    }
}

/// Print a cospan document. Printing is canonical: parsing and printing
/// again reproduces the same bytes.
pub fn print_cospan(c: &FilteredCospan) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "lambda {}", format_rational(c.lambda()));
    let _ = writeln!(out, "field {}", c.field());
    write_complex(&mut out, "up", c.up(), true);
    write_complex(&mut out, "down", c.down(), true);
    write_complex(&mut out, "mid", c.mid(), false);
    let (lo, hi) = c.degree_range();
    for (name, get) in [("psi_up", 0), ("psi_down", 1)] {
        for k in lo..=hi {
            let m = if get == 0 { c.psi_up(k) } else { c.psi_down(k) };
            if !m.is_zero() {
                let _ = write!(out, "{name} {k}");
                write_triplets(&mut out, &m);
                out.push('\n');
            }
        }
    }
    out
}

/// Parse the `.scx` simplicial format.
pub fn parse_scx(text: &str) -> Result<SimplicialInput> {
    let mut lambda = None;
    let mut field = None;
    let mut vertices = Vec::new();
    let mut simplices = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = content(raw).split_whitespace().collect();
        let Some(head) = toks.first() else { continue };
        match (*head, toks.len()) {
            ("lambda", 2) => match parse_rational(toks[1]) {
                Ok(q) if q > Rational::default() => lambda = Some(q),
                _ => return parse_err(line, "lambda must be a positive rational"),
            },
            ("field", 2) => {
                field = Some(
                    toks[1]
                        .parse::<Field>()
                        .or_else(|e| parse_err(line, e.to_string()))?,
                )
            }
            ("v", 3) => {
                let id = toks[1]
                    .parse::<u64>()
                    .or_else(|_| parse_err(line, "vertex id must be a non-negative integer"))?;
                let v = parse_rational(toks[2]).or_else(|e| parse_err(line, e.to_string()))?;
                vertices.push((id, v));
            }
            ("s", n) if n >= 2 => {
                let ids = toks[1..]
                    .iter()
                    .map(|t| {
                        t.parse::<u64>()
                            .or_else(|_| parse_err(line, format!("bad vertex id {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if ids.len() > 1 {
                    simplices.push(ids);
                }
            }
            _ => return parse_err(line, format!("cannot parse {:?}", content(raw))),
        }
    }
    Ok(SimplicialInput {
        lambda: lambda.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing lambda".into(),
        })?,
        field: field.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing field".into(),
        })?,
        vertices,
        simplices,
    })
}

pub fn print_scx(s: &SimplicialInput) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "lambda {}", format_rational(&s.lambda));
    let _ = writeln!(out, "field {}", s.field);
    for (id, v) in &s.vertices {
        let _ = writeln!(out, "v {id} {}", format_rational(v));
    }
    for simplex in &s.simplices {
        let ids: Vec<String> = simplex.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "s {}", ids.join(" "));
    }
    out
}
