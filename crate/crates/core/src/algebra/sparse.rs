use std::collections::BTreeMap;

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec::default()
    }

    pub fn unit(i: usize, field: Field) -> SparseVec {
        SparseVec {
            entries: vec![(i, field.one())],
        }
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, s) in entries {
            match acc.get_mut(&i) {
                Some(v) => *v = &*v + &s,
                None => {
                    acc.insert(i, s);
                }
            }
        }
        SparseVec {
            entries: acc.into_iter().filter(|(_, s)| !s.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[Scalar]) -> SparseVec {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(i, s)| (i, s.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (i, s) in &self.entries {
            out[*i] = s.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &(usize, Scalar)> + '_ {
        self.entries.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    /// Entry with the largest index.
    pub fn last(&self) -> Option<&(usize, Scalar)> {
        self.entries.last()
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, s)| (*i, s * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, s)| (*i, -s)).collect(),
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Scalar, other: &SparseVec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, c * y));
                        b.next();
                    } else {
                        let s = x + &(c * y);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, c * y));
                    b.next();
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        if let Some((_, s)) = other.entries.first() {
            out.axpy(&s.field().one(), other);
        }
        out
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        if let Some((_, s)) = other.entries.first() {
            out.axpy(&-s.field().one(), other);
        }
        out
    }

    /// Relabel indices through `map`; entries mapped to `None` are dropped.
    pub fn remap(&self, map: impl Fn(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_entries(
            self.entries
                .iter()
                .filter_map(|(i, s)| map(*i).map(|j| (j, s.clone()))),
        )
    }

    pub fn dot_dense(&self, dense: &[Scalar], field: Field) -> Scalar {
        self.entries
            .iter()
            .fold(field.zero(), |acc, (i, s)| &acc + &(s * &dense[*i]))
    }
}

/// Sparse matrix stored as coordinate lists grouped per column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix {
            rows,
            cols,
            field,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> SparseMatrix {
        SparseMatrix {
            rows: n,
            cols: n,
            field,
            columns: (0..n).map(|i| SparseVec::unit(i, field)).collect(),
        }
    }

    /// Build from `(row, col, value)` triplets. Zero values are skipped;
    /// duplicates, out-of-range coordinates and foreign scalars are errors.
    pub fn from_entries(
        field: Field,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<SparseMatrix> {
        let mut per_col: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); cols];
        for (r, c, s) in entries {
            if s.field() != field {
                return Err(Error::FieldMismatch(field, s.field()));
            }
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!(
                    "entry ({r},{c}) outside {rows}x{cols}"
                )));
            }
            if per_col[c].insert(r, s).is_some() {
                return Err(Error::Shape(format!("duplicate entry ({r},{c})")));
            }
        }
        Ok(SparseMatrix {
            rows,
            cols,
            field,
            columns: per_col
                .into_iter()
                .map(|m| SparseVec::from_entries(m))
                .collect(),
        })
    }

    /// Dense row-major integer literal, handy for fixtures and tests.
    pub fn from_rows_i64(field: Field, rows: &[&[i64]]) -> SparseMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let entries = rows.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols, "ragged literal");
            row.iter()
                .enumerate()
                .map(move |(c, v)| (r, c, field.from_i64(*v)))
        });
        SparseMatrix::from_entries(field, rows.len(), cols, entries).expect("valid literal")
    }

    pub fn from_columns(field: Field, rows: usize, columns: Vec<SparseVec>) -> SparseMatrix {
        debug_assert!(columns.iter().all(|c| c
            .last()
            .map_or(true, |(i, s)| *i < rows && s.field() == field)));
        SparseMatrix {
            rows,
            cols: columns.len(),
            field,
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c]
            .get(r)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Triplets `(row, col, value)` sorted by column, then row.
    pub fn entries(&self) -> Vec<(usize, usize, Scalar)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, s)| (*r, c, s.clone())))
            .collect()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, s) in col.iter() {
                cols[*r].push((c, s.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            columns: cols.into_iter().map(SparseVec::from_entries).collect(),
        }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, s) in v.iter() {
            out.axpy(s, &self.columns[*i]);
        }
        out
    }

    /// Matrix product. Panics on inner-dimension mismatch; see [`Self::try_mul`].
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.try_mul(rhs).expect("matrix product shapes")
    }

    pub fn try_mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(self.field, rhs.field));
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            field: self.field,
            columns: rhs.columns.iter().map(|c| self.mul_vec(c)).collect(),
        })
    }

    pub fn try_add(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::Shape(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(self.field, rhs.field));
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            columns: self
                .columns
                .iter()
                .zip(&rhs.columns)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.try_add(rhs).expect("matrix sum shapes")
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            columns: self.columns.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            columns: self.columns.iter().map(SparseVec::neg).collect(),
        }
    }

    /// Columns of `self` followed by columns of `rhs`.
    pub fn hstack(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, rhs.rows, "hstack row counts");
        let mut columns = self.columns.clone();
        columns.extend(rhs.columns.iter().cloned());
        SparseMatrix::from_columns(self.field, self.rows, columns)
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut pos = vec![None; self.rows];
        for (k, r) in rows.iter().enumerate() {
            pos[*r] = Some(k);
        }
        SparseMatrix::from_columns(
            self.field,
            rows.len(),
            cols.iter()
                .map(|c| self.columns[*c].remap(|r| pos[r]))
                .collect(),
        )
    }

    /// Relabel rows and columns: entry `(r, c)` moves to `(row_map[r], col_map[c])`.
    pub fn permute(&self, row_map: &[usize], col_map: &[usize]) -> SparseMatrix {
        let mut columns = vec![SparseVec::new(); self.cols];
        for (c, col) in self.columns.iter().enumerate() {
            columns[col_map[c]] = col.remap(|r| Some(row_map[r]));
        }
        SparseMatrix::from_columns(self.field, self.rows, columns)
    }
}
