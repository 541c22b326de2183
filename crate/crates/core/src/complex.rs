//! Ascending and descending filtered chain complexes over a field.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::algebra::{column_reduce, rank, Field, Rational, SparseMatrix, SparseVec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Boundary does not raise the level; filtration of a vector is the max.
    Ascending,
    /// Boundary does not lower the level; filtration of a vector is the min.
    Descending,
    /// Plain chain complex; levels are ignored.
    Unfiltered,
}

impl Flavor {
    pub fn conjugate(self) -> Flavor {
        match self {
            Flavor::Ascending => Flavor::Descending,
            Flavor::Descending => Flavor::Ascending,
            Flavor::Unfiltered => Flavor::Unfiltered,
        }
    }
}

/// Filtration value, possibly infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Level {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Level::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn neg(&self) -> Level {
        match self {
            Level::NegInf => Level::PosInf,
            Level::PosInf => Level::NegInf,
            Level::Finite(q) => Level::Finite(-q),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::NegInf => f.write_str("-inf"),
            Level::PosInf => f.write_str("inf"),
            Level::Finite(q) => f.write_str(&crate::algebra::format_rational(q)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub level: Rational,
}

impl Generator {
    pub fn new(name: impl Into<String>, level: Rational) -> Generator {
        Generator {
            name: name.into(),
            level,
        }
    }
}

/// Finitely generated chain complex with one filtration level per generator.
/// `boundary(k)` maps degree `k` to degree `k - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    flavor: Flavor,
    field: Field,
    lambda: Rational,
    k_min: i32,
    gens: Vec<Vec<Generator>>,
    bd: Vec<SparseMatrix>,
}

impl FilteredComplex {
    pub fn zero(flavor: Flavor, field: Field, lambda: Rational) -> FilteredComplex {
        FilteredComplex {
            flavor,
            field,
            lambda,
            k_min: 0,
            gens: Vec::new(),
            bd: Vec::new(),
        }
    }

    /// Assemble from generators and boundaries keyed by degree. Degrees
    /// without generators in between are filled in as empty. Only shapes
    /// and fields are checked here; see [`Self::violations`].
    pub fn from_parts(
        flavor: Flavor,
        field: Field,
        lambda: Rational,
        gens: BTreeMap<i32, Vec<Generator>>,
        boundaries: BTreeMap<i32, SparseMatrix>,
    ) -> Result<FilteredComplex> {
        let mut out = FilteredComplex::zero(flavor, field, lambda);
        let occupied: Vec<i32> = gens
            .iter()
            .filter(|(_, g)| !g.is_empty())
            .map(|(k, _)| *k)
            .collect();
        if let (Some(&lo), Some(&hi)) = (occupied.first(), occupied.last()) {
            out.k_min = lo;
            out.gens = (lo..=hi)
                .map(|k| gens.get(&k).cloned().unwrap_or_default())
                .collect();
        }
        out.bd = (0..out.gens.len())
            .map(|i| {
                let k = out.k_min + i as i32;
                SparseMatrix::zeros(field, out.dim(k - 1), out.dim(k))
            })
            .collect();
        for (k, m) in boundaries {
            if m.field() != field {
                return Err(Error::FieldMismatch(field, m.field()));
            }
            if (m.rows(), m.cols()) != (out.dim(k - 1), out.dim(k)) {
                return Err(Error::Shape(format!(
                    "boundary in degree {k} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    out.dim(k - 1),
                    out.dim(k)
                )));
            }
            if m.cols() > 0 {
                let i = (k - out.k_min) as usize;
                out.bd[i] = m;
            } else if !m.is_zero() {
                return Err(Error::DegreeOutOfRange(k));
            }
        }
        Ok(out)
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    /// Inclusive degree range; empty complexes report `(0, -1)`.
    pub fn degree_range(&self) -> (i32, i32) {
        if self.gens.is_empty() {
            (0, -1)
        } else {
            (self.k_min, self.k_min + self.gens.len() as i32 - 1)
        }
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        let (lo, hi) = self.degree_range();
        lo..=hi
    }

    fn slot(&self, k: i32) -> Option<usize> {
        let i = k.checked_sub(self.k_min)?;
        (i >= 0 && (i as usize) < self.gens.len()).then_some(i as usize)
    }

    pub fn dim(&self, k: i32) -> usize {
        self.slot(k).map_or(0, |i| self.gens[i].len())
    }

    pub fn total_dim(&self) -> usize {
        self.gens.iter().map(Vec::len).sum()
    }

    pub fn gens(&self, k: i32) -> &[Generator] {
        self.slot(k).map_or(&[], |i| &self.gens[i])
    }

    pub fn level(&self, k: i32, i: usize) -> &Rational {
        &self.gens(k)[i].level
    }

    pub fn boundary(&self, k: i32) -> Cow<'_, SparseMatrix> {
        match self.slot(k) {
            Some(i) => Cow::Borrowed(&self.bd[i]),
            None => Cow::Owned(SparseMatrix::zeros(
                self.field,
                self.dim(k - 1),
                self.dim(k),
            )),
        }
    }

    /// Filtration of a chain: max (ascending) or min (descending) generator
    /// level over its support; the zero chain gets -inf (resp. +inf).
    pub fn filtration_of(&self, k: i32, v: &SparseVec) -> Result<Level> {
        if self.dim(k) == 0 && !v.is_zero() || v.last().is_some_and(|(i, _)| *i >= self.dim(k)) {
            return Err(Error::DegreeOutOfRange(k));
        }
        let levels = v.indices().map(|i| self.level(k, i));
        Ok(match self.flavor {
            Flavor::Ascending | Flavor::Unfiltered => levels
                .max()
                .map_or(Level::NegInf, |q| Level::Finite(q.clone())),
            Flavor::Descending => levels
                .min()
                .map_or(Level::PosInf, |q| Level::Finite(q.clone())),
        })
    }

    /// Same complex with levels negated and flavor swapped.
    pub fn conjugate(&self) -> FilteredComplex {
        let mut out = self.map_levels(|q| -q);
        out.flavor = self.flavor.conjugate();
        out
    }

    pub fn map_levels(&self, f: impl Fn(&Rational) -> Rational) -> FilteredComplex {
        let mut out = self.clone();
        for g in out.gens.iter_mut().flatten() {
            g.level = f(&g.level);
        }
        out
    }

    pub fn with_flavor(&self, flavor: Flavor) -> FilteredComplex {
        FilteredComplex {
            flavor,
            ..self.clone()
        }
    }

    /// Relabel generators: in degree `k`, old index `i` becomes `perms[k][i]`.
    pub fn permute(&self, perms: &BTreeMap<i32, Vec<usize>>) -> FilteredComplex {
        let ident = |k: i32| -> Vec<usize> { (0..self.dim(k)).collect() };
        let perm = |k: i32| perms.get(&k).cloned().unwrap_or_else(|| ident(k));
        let mut out = self.clone();
        for k in self.degrees() {
            let p = perm(k);
            let i = self.slot(k).expect("in range");
            let mut gens = self.gens[i].clone();
            for (old, g) in self.gens[i].iter().enumerate() {
                gens[p[old]] = g.clone();
            }
            out.gens[i] = gens;
            out.bd[i] = self.bd[i].permute(&perm(k - 1), &p);
        }
        out
    }

    /// Block-diagonal sum; generator order is concatenation order.
    pub fn direct_sum(
        parts: &[&FilteredComplex],
        flavor: Flavor,
        field: Field,
        lambda: Rational,
    ) -> FilteredComplex {
        let mut gens: BTreeMap<i32, Vec<Generator>> = BTreeMap::new();
        let mut entries: BTreeMap<i32, Vec<(usize, usize, crate::Scalar)>> = BTreeMap::new();
        let mut offsets: BTreeMap<i32, usize> = BTreeMap::new();
        for c in parts {
            for k in c.degrees() {
                let col_off = offsets.get(&k).copied().unwrap_or(0);
                let row_off = offsets.get(&(k - 1)).copied().unwrap_or(0);
                for (r, col, s) in c.boundary(k).entries() {
                    entries
                        .entry(k)
                        .or_default()
                        .push((r + row_off, col + col_off, s));
                }
            }
            for k in c.degrees() {
                gens.entry(k).or_default().extend(c.gens(k).iter().cloned());
                *offsets.entry(k).or_insert(0) += c.dim(k);
            }
        }
        let dims: BTreeMap<i32, usize> = gens.iter().map(|(k, g)| (*k, g.len())).collect();
        let dim = |k: i32| dims.get(&k).copied().unwrap_or(0);
        let boundaries = entries
            .into_iter()
            .map(|(k, e)| {
                let m = SparseMatrix::from_entries(field, dim(k - 1), dim(k), e)
                    .expect("disjoint blocks");
                (k, m)
            })
            .collect();
        FilteredComplex::from_parts(flavor, field, lambda, gens, boundaries)
            .expect("consistent blocks")
    }

    /// Human-readable list of broken invariants: nonzero squares of the
    /// boundary, filtration increases, and levels outside `(-lambda, lambda)`.
    pub fn violations(&self, label: &str) -> Vec<String> {
        let mut out = Vec::new();
        for k in self.degrees() {
            let sq = self.boundary(k - 1).mul(&self.boundary(k));
            if !sq.is_zero() {
                out.push(format!(
                    "{label}: boundary squares to nonzero in degree {k}"
                ));
            }
            if self.flavor == Flavor::Unfiltered {
                continue;
            }
            for (i, g) in self.gens(k).iter().enumerate() {
                if g.level >= self.lambda || g.level <= -self.lambda.clone() {
                    out.push(format!(
                        "{label}: generator {} in degree {k} has level {} outside (-lambda, lambda)",
                        g.name,
                        crate::algebra::format_rational(&g.level)
                    ));
                }
                let bd = self.boundary(k);
                let lv = self.filtration_of(k - 1, bd.column(i)).expect("shape");
                let ok = match (self.flavor, &lv) {
                    (_, Level::NegInf | Level::PosInf) => true,
                    (Flavor::Ascending, Level::Finite(q)) => *q <= g.level,
                    (_, Level::Finite(q)) => *q >= g.level,
                };
                if !ok {
                    out.push(format!(
                        "{label}: boundary of generator {} in degree {k} violates the filtration",
                        g.name
                    ));
                }
            }
        }
        if self.lambda <= Rational::zero() {
            out.push(format!("{label}: lambda must be positive"));
        }
        out
    }

    /// Generator indices of degree `k` sorted so that the filtration order is
    /// ascending: by level for ascending complexes, by reversed level for
    /// descending ones, ties by index.
    pub fn filtration_order(&self, k: i32) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.dim(k)).collect();
        match self.flavor {
            Flavor::Descending => {
                idx.sort_by(|&a, &b| self.level(k, b).cmp(self.level(k, a)).then(a.cmp(&b)))
            }
            _ => idx.sort_by(|&a, &b| self.level(k, a).cmp(self.level(k, b)).then(a.cmp(&b))),
        }
        idx
    }
}

/// One summand of the barcode decomposition of a single filtered complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalModule {
    pub degree: i32,
    pub birth: Level,
    pub death: Level,
}

impl IntervalModule {
    /// Birth equals death: homotopy equivalent to zero.
    pub fn is_degenerate(&self) -> bool {
        self.birth == self.death
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVector {
    pub chain: SparseVec,
    pub level: Rational,
}

/// Per-degree split of a basis into chains that bound nothing but have a
/// boundary (`a`), boundaries (`b`), and homology representatives (`h`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeBases {
    pub a: Vec<BasisVector>,
    pub b: Vec<BasisVector>,
    pub h: Vec<BasisVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredDecomposition {
    /// One entry per element of `a` in degree `k + 1`, reported in degree `k`,
    /// in the same order as `bases[k + 1].a` and `bases[k].b`.
    pub pairs: Vec<IntervalModule>,
    pub essentials: Vec<IntervalModule>,
    pub bases: BTreeMap<i32, DegreeBases>,
}

/// Checks that the levels of `vectors` agree, level by level, with the
/// dimensions of the filtered pieces of their span.
pub fn is_orthogonal_basis(c: &FilteredComplex, k: i32, vectors: &[SparseVec]) -> Result<bool> {
    let n = vectors.len();
    if n == 0 {
        return Ok(true);
    }
    let levels = vectors
        .iter()
        .map(|v| c.filtration_of(k, v))
        .collect::<Result<Vec<_>>>()?;
    let field = c.field();
    let as_matrix = |vs: Vec<SparseVec>| SparseMatrix::from_columns(field, c.dim(k), vs);
    if rank(&as_matrix(vectors.to_vec())) < n {
        return Ok(false);
    }
    if c.flavor() == Flavor::Unfiltered {
        return Ok(true);
    }
    let mut thresholds: Vec<&Rational> = c.gens(k).iter().map(|g| &g.level).collect();
    thresholds.sort();
    thresholds.dedup();
    let ascending = c.flavor() == Flavor::Ascending;
    for t in thresholds {
        // generators strictly beyond t on the "high" side
        let outside = |i: usize| {
            let l = c.level(k, i);
            if ascending {
                l > t
            } else {
                l < t
            }
        };
        let projected: Vec<SparseVec> = vectors
            .iter()
            .map(|v| v.remap(|i| outside(i).then_some(i)))
            .collect();
        let dim_inside = n - rank(&as_matrix(projected));
        let count = levels
            .iter()
            .filter(|l| match l.finite() {
                Some(q) => {
                    if ascending {
                        q <= t
                    } else {
                        q >= t
                    }
                }
                None => false,
            })
            .count();
        if count != dim_inside {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Split a filtered complex into elementary interval pieces by the standard
/// persistence reduction. Descending complexes are handled through their
/// conjugate.
pub fn decompose_filtered(c: &FilteredComplex) -> Result<FilteredDecomposition> {
    match c.flavor() {
        Flavor::Unfiltered => Err(Error::Input(
            "interval decomposition needs a filtered complex".into(),
        )),
        Flavor::Descending => {
            let asc = decompose_ascending(&c.conjugate())?;
            let neg = |m: &IntervalModule| IntervalModule {
                degree: m.degree,
                birth: m.birth.neg(),
                death: m.death.neg(),
            };
            let flip = |b: &BasisVector| BasisVector {
                chain: b.chain.clone(),
                level: -b.level.clone(),
            };
            Ok(FilteredDecomposition {
                pairs: asc.pairs.iter().map(neg).collect(),
                essentials: asc.essentials.iter().map(neg).collect(),
                bases: asc
                    .bases
                    .iter()
                    .map(|(k, d)| {
                        (
                            *k,
                            DegreeBases {
                                a: d.a.iter().map(flip).collect(),
                                b: d.b.iter().map(flip).collect(),
                                h: d.h.iter().map(flip).collect(),
                            },
                        )
                    })
                    .collect(),
            })
        }
        Flavor::Ascending => decompose_ascending(c),
    }
}

fn decompose_ascending(c: &FilteredComplex) -> Result<FilteredDecomposition> {
    let bad = c.violations("complex");
    if let Some(v) = bad.iter().find(|v| v.contains("squares")) {
        return Err(Error::NotAChainComplex(v.clone()));
    }
    if let Some(v) = bad.iter().find(|v| v.contains("filtration")) {
        return Err(Error::Filtration(v.clone()));
    }
    let (lo, hi) = c.degree_range();
    let mut reductions = BTreeMap::new();
    for k in lo..=hi + 1 {
        let cols = c.filtration_order(k);
        let rows = c.filtration_order(k - 1);
        reductions.insert(k, column_reduce(&c.boundary(k), &cols, &rows)?);
    }
    let mut pairs = Vec::new();
    let mut essentials = Vec::new();
    let mut bases: BTreeMap<i32, DegreeBases> = BTreeMap::new();
    for k in lo..=hi {
        let here = &reductions[&k];
        let above = &reductions[&(k + 1)];
        let mut d = DegreeBases::default();
        let paired_rows: std::collections::HashSet<usize> =
            above.pivots.iter().map(|(r, _)| *r).collect();
        for j in c.filtration_order(k) {
            let level = c.level(k, j).clone();
            let chain = here.change.column(j).clone();
            if !here.reduced.column(j).is_zero() {
                d.a.push(BasisVector { chain, level });
            } else if !paired_rows.contains(&j) {
                essentials.push(IntervalModule {
                    degree: k,
                    birth: Level::Finite(level.clone()),
                    death: Level::PosInf,
                });
                d.h.push(BasisVector { chain, level });
            }
        }
        for (r, j) in &above.pivots {
            let birth = c.level(k, *r).clone();
            pairs.push(IntervalModule {
                degree: k,
                birth: Level::Finite(birth.clone()),
                death: Level::Finite(c.level(k + 1, *j).clone()),
            });
            d.b.push(BasisVector {
                chain: above.reduced.column(*j).clone(),
                level: birth,
            });
        }
        let all: Vec<SparseVec> =
            d.a.iter()
                .chain(&d.b)
                .chain(&d.h)
                .map(|b| b.chain.clone())
                .collect();
        if all.len() != c.dim(k) || !is_orthogonal_basis(c, k, &all)? {
            return Err(Error::Internal(format!(
                "reduction basis in degree {k} is not orthogonal"
            )));
        }
        bases.insert(k, d);
    }
    // pairs were pushed degree by degree in pivot order, matching a/b order
    Ok(FilteredDecomposition {
        pairs,
        essentials,
        bases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn two_gen(levels: [i64; 2]) -> FilteredComplex {
        let gens = BTreeMap::from([(
            0,
            vec![
                Generator::new("e1", q(levels[0])),
                Generator::new("e2", q(levels[1])),
            ],
        )]);
        FilteredComplex::from_parts(
            Flavor::Ascending,
            Field::Prime(2),
            q(10),
            gens,
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn orthogonality_examples() {
        let c = two_gen([3, 5]);
        let f = Field::Prime(2);
        let e1 = SparseVec::unit(0, f);
        let e2 = SparseVec::unit(1, f);
        let sum = e1.add(&e2);
        assert!(is_orthogonal_basis(&c, 0, &[e1.clone(), sum.clone()]).unwrap());
        assert!(!is_orthogonal_basis(&c, 0, &[sum, e2]).unwrap());
        assert!(is_orthogonal_basis(&c, 0, &[]).unwrap());
    }

    #[test]
    fn elementary_pair() {
        let f = Field::Rational;
        let gens = BTreeMap::from([
            (0, vec![Generator::new("x", q(0))]),
            (1, vec![Generator::new("y", q(1))]),
        ]);
        let bd = BTreeMap::from([(1, SparseMatrix::identity(f, 1))]);
        let c = FilteredComplex::from_parts(Flavor::Ascending, f, q(2), gens, bd).unwrap();
        let d = decompose_filtered(&c).unwrap();
        assert_eq!(
            d.pairs,
            vec![IntervalModule {
                degree: 0,
                birth: Level::Finite(q(0)),
                death: Level::Finite(q(1))
            }]
        );
        assert!(d.essentials.is_empty());
    }

    #[test]
    fn zero_vector_levels() {
        let c = two_gen([3, 5]);
        assert_eq!(
            c.filtration_of(0, &SparseVec::new()).unwrap(),
            Level::NegInf
        );
        assert_eq!(
            c.with_flavor(Flavor::Descending)
                .filtration_of(0, &SparseVec::new())
                .unwrap(),
            Level::PosInf
        );
        let far = SparseVec::unit(7, Field::Prime(2));
        assert!(c.filtration_of(0, &far).is_err());
    }

    #[test]
    fn rejects_non_complex() {
        let f = Field::Prime(2);
        let gens = BTreeMap::from([
            (0, vec![Generator::new("v", q(0))]),
            (1, vec![Generator::new("e", q(0))]),
            (2, vec![Generator::new("t", q(0))]),
        ]);
        let one = SparseMatrix::identity(f, 1);
        let bd = BTreeMap::from([(1, one.clone()), (2, one)]);
        let c = FilteredComplex::from_parts(Flavor::Ascending, f, q(1), gens, bd).unwrap();
        assert!(matches!(
            decompose_filtered(&c),
            Err(Error::NotAChainComplex(_))
        ));
    }
}
