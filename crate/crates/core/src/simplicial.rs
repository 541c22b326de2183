//! Pinned simplicial cospans built from a finite simplicial complex with
//! rational vertex values.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{Field, Rational, SparseMatrix};
use crate::complex::{FilteredComplex, Flavor, Generator};
use crate::cospan::FilteredCospan;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialInput {
    pub lambda: Rational,
    pub field: Field,
    pub vertices: Vec<(u64, Rational)>,
    /// Simplices of dimension at least one, as vertex ids.
    pub simplices: Vec<Vec<u64>>,
}

impl SimplicialInput {
    fn values(&self) -> BTreeMap<u64, Rational> {
        self.vertices.iter().cloned().collect()
    }

    /// All simplices including vertices, each sorted, in (dimension, lex) order.
    fn closed(&self) -> Result<BTreeSet<(usize, Vec<u64>)>> {
        let values = self.values();
        if values.len() != self.vertices.len() {
            return Err(Error::Input("duplicate vertex id".into()));
        }
        for (id, v) in &self.vertices {
            if *v > self.lambda || *v < -self.lambda.clone() {
                return Err(Error::Input(format!(
                    "vertex {id} has value outside [-lambda, lambda]"
                )));
            }
        }
        let mut all: BTreeSet<(usize, Vec<u64>)> = values.keys().map(|v| (0, vec![*v])).collect();
        for s in &self.simplices {
            let mut t = s.clone();
            t.sort_unstable();
            t.dedup();
            if t.len() != s.len() {
                return Err(Error::Input(format!("simplex {s:?} repeats a vertex")));
            }
            if let Some(v) = t.iter().find(|v| !values.contains_key(v)) {
                return Err(Error::Input(format!(
                    "simplex {s:?} uses unknown vertex {v}"
                )));
            }
            if t.len() > 1 && !all.insert((t.len() - 1, t)) {
                return Err(Error::Input(format!("duplicate simplex {s:?}")));
            }
        }
        for (dim, s) in &all {
            if *dim < 2 {
                continue;
            }
            for j in 0..s.len() {
                let mut face = s.clone();
                face.remove(j);
                if !all.contains(&(dim - 1, face.clone())) {
                    return Err(Error::Input(format!(
                        "missing face {face:?} of simplex {s:?}"
                    )));
                }
            }
        }
        Ok(all)
    }
}

/// Quotient complex `C(sub) / C(killed)` with the given level function.
fn quotient(
    simplices: &[(usize, Vec<u64>)],
    keep: impl Fn(&[u64]) -> bool,
    level: impl Fn(&[u64]) -> Rational,
    flavor: Flavor,
    input: &SimplicialInput,
) -> Result<(FilteredComplex, BTreeMap<Vec<u64>, usize>)> {
    let field = input.field;
    let mut gens: BTreeMap<i32, Vec<Generator>> = BTreeMap::new();
    let mut index: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    for (dim, s) in simplices.iter().filter(|(_, s)| keep(s)) {
        let list = gens.entry(*dim as i32).or_default();
        index.insert(s.clone(), list.len());
        let name = s.iter().map(u64::to_string).collect::<Vec<_>>().join("-");
        list.push(Generator::new(name, level(s)));
    }
    let mut bd = BTreeMap::new();
    for (k, list) in &gens {
        if *k == 0 {
            continue;
        }
        let rows = gens.get(&(k - 1)).map_or(0, Vec::len);
        let mut entries = Vec::new();
        for (dim, s) in simplices.iter().filter(|(d, s)| *d as i32 == *k && keep(s)) {
            let col = index[s];
            for j in 0..=*dim {
                let mut face = s.clone();
                face.remove(j);
                if let Some(&row) = index.get(&face) {
                    entries.push((row, col, field.from_i64(if j % 2 == 0 { 1 } else { -1 })));
                }
            }
        }
        bd.insert(
            *k,
            SparseMatrix::from_entries(field, rows, list.len(), entries)?,
        );
    }
    let c = FilteredComplex::from_parts(flavor, field, input.lambda.clone(), gens, bd)?;
    Ok((c, index))
}

fn inclusion(
    field: Field,
    src: &BTreeMap<Vec<u64>, usize>,
    dst: &BTreeMap<Vec<u64>, usize>,
    src_c: &FilteredComplex,
    dst_c: &FilteredComplex,
) -> Result<BTreeMap<i32, SparseMatrix>> {
    let mut out = BTreeMap::new();
    for k in src_c.degrees() {
        let entries: Vec<_> = src
            .iter()
            .filter(|(s, _)| s.len() as i32 - 1 == k)
            .filter_map(|(s, &j)| dst.get(s).map(|&i| (i, j, field.one())))
            .collect();
        out.insert(
            k,
            SparseMatrix::from_entries(field, dst_c.dim(k), src_c.dim(k), entries)?,
        );
    }
    Ok(out)
}

/// Build the pinned simplicial cospan: the sublevel side drops everything
/// touching the top boundary and kills the bottom boundary, the superlevel
/// side symmetrically, and the middle kills both boundaries.
pub fn build_pinned_cospan(input: &SimplicialInput) -> Result<FilteredCospan> {
    let all: Vec<(usize, Vec<u64>)> = input.closed()?.into_iter().collect();
    let values = input.values();
    let lam = input.lambda.clone();
    let at = |s: &[u64], target: &Rational| s.iter().all(|v| values[v] == *target);
    let touches = |s: &[u64], target: &Rational| s.iter().any(|v| values[v] == *target);
    let max = |s: &[u64]| s.iter().map(|v| values[v].clone()).max().expect("nonempty");
    let min = |s: &[u64]| s.iter().map(|v| values[v].clone()).min().expect("nonempty");
    let neg = -lam.clone();
    let (up, up_idx) = quotient(
        &all,
        |s| !touches(s, &lam) && !at(s, &neg),
        max,
        Flavor::Ascending,
        input,
    )?;
    let (down, down_idx) = quotient(
        &all,
        |s| !touches(s, &neg) && !at(s, &lam),
        min,
        Flavor::Descending,
        input,
    )?;
    let (mid, mid_idx) = quotient(
        &all,
        |s| !at(s, &lam) && !at(s, &neg),
        |_| Rational::default(),
        Flavor::Unfiltered,
        input,
    )?;
    let psi_up = inclusion(input.field, &up_idx, &mid_idx, &up, &mid)?;
    let psi_down = inclusion(input.field, &down_idx, &mid_idx, &down, &mid)?;
    let c = FilteredCospan::new(up, down, mid, psi_up, psi_down)?;
    let bad = c.validate();
    if !bad.is_empty() {
        return Err(Error::Internal(format!(
            "pinned cospan is invalid: {}",
            bad.join("; ")
        )));
    }
    Ok(c)
}
