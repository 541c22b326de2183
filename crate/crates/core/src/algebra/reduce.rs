use std::collections::HashMap;

use super::scalar::{Field, Scalar};
use super::sparse::{SparseMatrix, SparseVec};
use crate::error::{Error, Result};

/// Incrementally built echelon form that remembers how each stored vector
/// was obtained from the inputs, so membership queries return coefficients.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    pivots: HashMap<usize, usize>,
    reduced: Vec<SparseVec>,
    // reduced[j] = sum over labels of combos[j][label] * input[label]
    combos: Vec<SparseVec>,
    inputs: usize,
}

impl Echelon {
    pub fn new(field: Field) -> Echelon {
        Echelon {
            field,
            pivots: HashMap::new(),
            reduced: Vec::new(),
            combos: Vec::new(),
            inputs: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    /// Number of vectors offered to [`Self::insert`] so far.
    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// Returns `(residual, coeffs)` with `v = residual + sum coeffs[l] * input[l]`.
    /// The residual is zero exactly when `v` lies in the span of the inputs.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut residual = v.clone();
        let mut coeffs = SparseVec::new();
        let mut bound = usize::MAX;
        loop {
            let hit = residual
                .iter()
                .rev()
                .find(|(i, _)| *i < bound && self.pivots.contains_key(i))
                .map(|(i, s)| (*i, s.clone()));
            let Some((i, s)) = hit else { break };
            let j = self.pivots[&i];
            let lead = &self.reduced[j]
                .last()
                .expect("stored vectors are nonzero")
                .1;
            let factor = &s * &lead.inv().expect("nonzero pivot");
            residual.axpy(&-&factor, &self.reduced[j]);
            coeffs.axpy(&factor, &self.combos[j]);
            bound = i;
        }
        (residual, coeffs)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Offer a vector under the next label. `Ok(label)` if it was independent,
    /// otherwise `Err(coeffs)` expressing it through earlier labels.
    pub fn insert(&mut self, v: &SparseVec) -> std::result::Result<usize, SparseVec> {
        let label = self.inputs;
        self.inputs += 1;
        let (residual, coeffs) = self.reduce(v);
        if residual.is_zero() {
            return Err(coeffs);
        }
        let mut combo = coeffs.neg();
        combo.axpy(&self.field.one(), &SparseVec::unit(label, self.field));
        let pivot = residual.last().expect("nonzero").0;
        self.pivots.insert(pivot, self.reduced.len());
        self.reduced.push(residual);
        self.combos.push(combo);
        Ok(label)
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut e = Echelon::new(m.field());
    for c in m.columns() {
        let _ = e.insert(c);
    }
    e.rank()
}

/// Some `x` with `m x = b`, or `None` when `b` is not in the column span.
pub fn solve_in_span(m: &SparseMatrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows() {
        return Err(Error::Shape(format!(
            "right-hand side has {} entries, matrix has {} rows",
            b.len(),
            m.rows()
        )));
    }
    if let Some(s) = b.iter().find(|s| s.field() != m.field()) {
        return Err(Error::FieldMismatch(m.field(), s.field()));
    }
    Ok(solve_sparse(m, &SparseVec::from_dense(b)).map(|x| x.to_dense(m.cols(), m.field())))
}

/// Sparse form of [`solve_in_span`].
pub fn solve_sparse(m: &SparseMatrix, b: &SparseVec) -> Option<SparseVec> {
    let mut e = Echelon::new(m.field());
    for c in m.columns() {
        let _ = e.insert(c);
    }
    let (residual, coeffs) = e.reduce(b);
    residual.is_zero().then_some(coeffs)
}

/// Result of an ordered column reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub reduced: SparseMatrix,
    pub change: SparseMatrix,
    /// `(row, col)` for each nonzero reduced column, in processing order.
    pub pivots: Vec<(usize, usize)>,
}

/// Persistence-style reduction: columns are processed in `col_order`, and
/// each column is cleared until its pivot (largest row under `row_order`)
/// is not owned by an earlier column. Then `reduced = m * change` with
/// `change` unit upper-triangular with respect to `col_order`.
pub fn column_reduce(
    m: &SparseMatrix,
    col_order: &[usize],
    row_order: &[usize],
) -> Result<Reduction> {
    let field = m.field();
    check_permutation(col_order, m.cols(), "column order")?;
    check_permutation(row_order, m.rows(), "row order")?;
    let mut rank_of = vec![0; m.rows()];
    for (k, r) in row_order.iter().enumerate() {
        rank_of[*r] = k;
    }
    // work in row-rank coordinates so the pivot is always the last entry
    let mut reduced: Vec<SparseVec> = vec![SparseVec::new(); m.cols()];
    let mut change: Vec<SparseVec> = vec![SparseVec::new(); m.cols()];
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut pivots = Vec::new();
    for &j in col_order {
        let mut col = m.column(j).remap(|r| Some(rank_of[r]));
        let mut v = SparseVec::unit(j, field);
        while let Some((p, c)) = col.last().cloned() {
            match owner.get(&p) {
                Some(&k) => {
                    let lead = &reduced[k].last().expect("owned column is nonzero").1;
                    let factor = -(&c * &lead.inv().expect("nonzero pivot"));
                    col.axpy(&factor, &reduced[k]);
                    let vk = change[k].clone();
                    v.axpy(&factor, &vk);
                }
                None => {
                    owner.insert(p, j);
                    pivots.push((row_order[p], j));
                    break;
                }
            }
        }
        reduced[j] = col;
        change[j] = v;
    }
    let reduced = reduced
        .into_iter()
        .map(|c| c.remap(|k| Some(row_order[k])))
        .collect();
    Ok(Reduction {
        reduced: SparseMatrix::from_columns(field, m.rows(), reduced),
        change: SparseMatrix::from_columns(field, m.cols(), change),
        pivots,
    })
}

fn check_permutation(order: &[usize], n: usize, what: &str) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::Shape(format!(
            "{what} has {} entries, expected {n}",
            order.len()
        )));
    }
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::Shape(format!("{what} is not a permutation")));
        }
    }
    Ok(())
}

/// Basis of the null space of `m`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let cols: Vec<usize> = (0..m.cols()).collect();
    let rows: Vec<usize> = (0..m.rows()).collect();
    let red = column_reduce(m, &cols, &rows).expect("natural orders");
    (0..m.cols())
        .filter(|&j| red.reduced.column(j).is_zero())
        .map(|j| red.change.column(j).clone())
        .collect()
}

/// Inverse of a square matrix.
pub fn inverse(m: &SparseMatrix) -> Result<SparseMatrix> {
    if m.rows() != m.cols() {
        return Err(Error::Shape(format!(
            "{}x{} is not square",
            m.rows(),
            m.cols()
        )));
    }
    let field = m.field();
    let mut e = Echelon::new(field);
    for c in m.columns() {
        if e.insert(c).is_err() {
            return Err(Error::Singular);
        }
    }
    let columns = (0..m.rows())
        .map(|i| {
            let (res, coeffs) = e.reduce(&SparseVec::unit(i, field));
            debug_assert!(res.is_zero());
            coeffs
        })
        .collect();
    Ok(SparseMatrix::from_columns(field, m.cols(), columns))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::Prime(2)
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&SparseMatrix::identity(f2(), 2)), 2);
        assert_eq!(rank(&SparseMatrix::zeros(f2(), 3, 4)), 0);
        assert_eq!(
            rank(&SparseMatrix::from_rows_i64(f2(), &[&[1, 1], &[1, 1]])),
            1
        );
    }

    #[test]
    fn solve_examples() {
        let one = f2().one();
        let zero = f2().zero();
        let id = SparseMatrix::identity(f2(), 2);
        assert_eq!(
            solve_in_span(&id, &[one.clone(), zero.clone()]).unwrap(),
            Some(vec![one.clone(), zero.clone()])
        );
        let z = SparseMatrix::zeros(f2(), 1, 1);
        assert_eq!(solve_in_span(&z, &[one.clone()]).unwrap(), None);
        let m = SparseMatrix::from_rows_i64(f2(), &[&[1], &[1]]);
        assert_eq!(
            solve_in_span(&m, &[one.clone(), one.clone()]).unwrap(),
            Some(vec![one.clone()])
        );
        assert!(solve_in_span(&m, &[one]).is_err());
    }

    #[test]
    fn reduce_identity_and_equal_columns() {
        let id = SparseMatrix::identity(f2(), 2);
        let red = column_reduce(&id, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(red.pivots, vec![(0, 0), (1, 1)]);
        assert_eq!(red.change, id);

        let m = SparseMatrix::from_rows_i64(f2(), &[&[1, 1], &[1, 1]]);
        let red = column_reduce(&m, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(red.pivots.len(), 1);
        assert!(red.reduced.column(1).is_zero());
        assert_eq!(m.mul(&red.change), red.reduced);
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::Rational;
        let m = SparseMatrix::from_rows_i64(f, &[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), SparseMatrix::identity(f, 2));
        let s = SparseMatrix::from_rows_i64(f, &[&[1, 2], &[2, 4]]);
        assert_eq!(inverse(&s), Err(Error::Singular));
    }
}
