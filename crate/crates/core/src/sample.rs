//! Seeded random inputs for property tests, benches and the CLI.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{inverse, kernel_basis, Field, Rational, Scalar, SparseMatrix, SparseVec};
use crate::complex::{FilteredComplex, Flavor, Generator};
use crate::cospan::{FilteredCospan, Summand};
use crate::error::Result;
use crate::simplicial::SimplicialInput;
use crate::strip::{to_f64, Homeomorphism};

/// A level strictly inside `(-lambda, lambda)` on the grid of eighths.
pub fn random_level<R: Rng>(lambda: &Rational, rng: &mut R) -> Rational {
    lambda * Rational::new(rng.random_range(-7..=7).into(), 8.into())
}

pub fn random_nonzero<R: Rng>(field: Field, rng: &mut R) -> Scalar {
    match field {
        Field::Prime(p) => field.from_i64(rng.random_range(1..p as i64)),
        Field::Rational => {
            let q = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 3)][rng.random_range(0..6)];
            Scalar::Rat(Rational::new(q.0.into(), q.1.into()))
        }
    }
}

fn random_scalar<R: Rng>(field: Field, rng: &mut R) -> Scalar {
    if rng.random_bool(0.5) {
        field.zero()
    } else {
        random_nonzero(field, rng)
    }
}

pub const KINDS: [&str; 8] = ["Up", "Down", "UpInf", "DownNegInf", "NE", "SE", "GT", "Box"];

/// Random summand of the given kind (one of [`KINDS`]) in degrees 0..=2.
pub fn random_summand<R: Rng>(kind: &str, lambda: &Rational, rng: &mut R) -> Summand {
    let k = rng.random_range(0..=2);
    let mut lv = || random_level(lambda, rng);
    match kind {
        "Up" | "Down" => {
            let (mut a, mut b) = (lv(), lv());
            while a == b {
                b = lv();
            }
            if (kind == "Up") == (a > b) {
                std::mem::swap(&mut a, &mut b);
            }
            if kind == "Up" {
                Summand::Up { k, a, b }
            } else {
                Summand::Down { k, a, b }
            }
        }
        "UpInf" => Summand::UpInf { k, a: lv() },
        "DownNegInf" => Summand::DownNegInf { k, a: lv() },
        "NE" => Summand::Ne { k, a: lv() },
        "SE" => Summand::Se { k, a: lv() },
        "GT" => Summand::Gt {
            k,
            up: lv(),
            down: lv(),
        },
        _ => Summand::Box { k },
    }
}

/// Generators of a complex in normal form: boundary pairs and cycles.
struct NormalForm {
    gens: BTreeMap<i32, Vec<Generator>>,
    bd: BTreeMap<i32, Vec<(usize, usize, Scalar)>>,
    /// (degree of x, index of x, index of y, coefficient of x in dy)
    pairs: Vec<(i32, usize, usize, Scalar)>,
    /// (degree, index)
    cycles: Vec<(i32, usize)>,
}

fn normal_form<R: Rng>(
    flavor: Flavor,
    field: Field,
    lambda: &Rational,
    n: usize,
    top: i32,
    rng: &mut R,
) -> NormalForm {
    let mut nf = NormalForm {
        gens: BTreeMap::new(),
        bd: BTreeMap::new(),
        pairs: Vec::new(),
        cycles: Vec::new(),
    };
    let mut left = n;
    let push = |gens: &mut BTreeMap<i32, Vec<Generator>>, k: i32, level: Rational| {
        let list = gens.entry(k).or_default();
        list.push(Generator::new(format!("g{k}_{}", list.len()), level));
        list.len() - 1
    };
    while left > 0 {
        let level = |rng: &mut R| {
            if flavor == Flavor::Unfiltered {
                Rational::default()
            } else {
                random_level(lambda, rng)
            }
        };
        if left >= 2 && top > 0 && rng.random_bool(0.5) {
            let k = rng.random_range(0..top);
            let (mut a, mut b) = (level(rng), level(rng));
            // the boundary may not raise an ascending level or lower a descending one
            if (flavor == Flavor::Ascending && a > b) || (flavor == Flavor::Descending && a < b) {
                std::mem::swap(&mut a, &mut b);
            }
            let x = push(&mut nf.gens, k, a);
            let y = push(&mut nf.gens, k + 1, b);
            let c = random_nonzero(field, rng);
            nf.bd.entry(k + 1).or_default().push((x, y, c.clone()));
            nf.pairs.push((k, x, y, c));
            left -= 2;
        } else {
            let k = rng.random_range(0..=top);
            let lv = level(rng);
            let h = push(&mut nf.gens, k, lv);
            nf.cycles.push((k, h));
            left -= 1;
        }
    }
    nf
}

/// Invertible change of basis per degree that only mixes a generator with
/// generators at filtration levels no higher than its own.
fn filtered_change<R: Rng>(
    flavor: Flavor,
    field: Field,
    gens: &[Generator],
    rng: &mut R,
) -> SparseMatrix {
    let n = gens.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let c = gens[a].level.cmp(&gens[b].level);
        let c = if flavor == Flavor::Descending {
            c.reverse()
        } else {
            c
        };
        c.then(a.cmp(&b))
    });
    let mut entries = Vec::new();
    for (pos, &j) in order.iter().enumerate() {
        entries.push((j, j, field.one()));
        for &i in &order[..pos] {
            if rng.random_bool(0.4) {
                entries.push((i, j, random_nonzero(field, rng)));
            }
        }
    }
    SparseMatrix::from_entries(field, n, n, entries).expect("valid change of basis")
}

struct RandomComplex {
    complex: FilteredComplex,
    nf: NormalForm,
    change: BTreeMap<i32, SparseMatrix>,
}

fn random_complex<R: Rng>(
    flavor: Flavor,
    field: Field,
    lambda: &Rational,
    n: usize,
    top: i32,
    rng: &mut R,
) -> Result<RandomComplex> {
    let nf = normal_form(flavor, field, lambda, n, top, rng);
    let dim = |k: i32| nf.gens.get(&k).map_or(0, Vec::len);
    let mut change = BTreeMap::new();
    for (k, g) in &nf.gens {
        change.insert(*k, filtered_change(flavor, field, g, rng));
    }
    let mut bd = BTreeMap::new();
    for (k, entries) in &nf.bd {
        let d = SparseMatrix::from_entries(field, dim(k - 1), dim(*k), entries.clone())?;
        let new = inverse(&change[&(k - 1)])?
            .try_mul(&d)?
            .try_mul(&change[k])?;
        bd.insert(*k, new);
    }
    let complex = FilteredComplex::from_parts(flavor, field, lambda.clone(), nf.gens.clone(), bd)?;
    Ok(RandomComplex {
        complex,
        nf,
        change,
    })
}

/// Random chain map from a normal-form complex into `mid`, expressed in
/// the changed basis of the source.
fn random_chain_map<R: Rng>(
    src: &RandomComplex,
    mid: &FilteredComplex,
    rng: &mut R,
) -> Result<BTreeMap<i32, SparseMatrix>> {
    let field = mid.field();
    let mut cols: BTreeMap<i32, BTreeMap<usize, SparseVec>> = BTreeMap::new();
    let random_vec = |n: usize, rng: &mut R| {
        SparseVec::from_entries(
            (0..n)
                .map(|i| (i, random_scalar(field, rng)))
                .collect::<Vec<_>>(),
        )
    };
    for (k, h) in &src.nf.cycles {
        let mut z = SparseVec::new();
        for b in kernel_basis(&mid.boundary(*k)) {
            z.axpy(&random_scalar(field, rng), &b);
        }
        cols.entry(*k).or_default().insert(*h, z);
    }
    for (k, x, y, c) in &src.nf.pairs {
        let py = random_vec(mid.dim(k + 1), rng);
        let px = mid
            .boundary(k + 1)
            .mul_vec(&py)
            .scale(&c.inv().expect("nonzero"));
        cols.entry(k + 1).or_default().insert(*y, py);
        cols.entry(*k).or_default().insert(*x, px);
    }
    let mut out = BTreeMap::new();
    for (k, c) in cols {
        let n = src.complex.dim(k);
        let m =
            SparseMatrix::from_columns(field, mid.dim(k), (0..n).map(|i| c[&i].clone()).collect());
        out.insert(k, m.try_mul(&src.change[&k])?);
    }
    Ok(out)
}

/// Random valid cospan with at most `max_gens` generators in degrees 0..=2.
pub fn random_cospan<R: Rng>(
    field: Field,
    lambda: &Rational,
    max_gens: usize,
    rng: &mut R,
) -> Result<FilteredCospan> {
    let total = rng.random_range(1..=max_gens.max(1));
    let mid_n = rng.random_range(0..=total.min(4));
    let up_n = rng.random_range(0..=total - mid_n);
    let down_n = total - mid_n - up_n;
    let mid = random_complex(Flavor::Unfiltered, field, lambda, mid_n, 2, rng)?;
    let up = random_complex(Flavor::Ascending, field, lambda, up_n, 2, rng)?;
    let down = random_complex(Flavor::Descending, field, lambda, down_n, 2, rng)?;
    let psi_up = random_chain_map(&up, &mid.complex, rng)?;
    let psi_down = random_chain_map(&down, &mid.complex, rng)?;
    FilteredCospan::new(up.complex, down.complex, mid.complex, psi_up, psi_down)
}

/// Random reordering of the generators in every degree of every complex.
pub fn shuffle_generators<R: Rng>(c: &FilteredCospan, rng: &mut R) -> FilteredCospan {
    let mut perms = |x: &FilteredComplex| {
        x.degrees()
            .map(|k| {
                let mut p: Vec<usize> = (0..x.dim(k)).collect();
                p.shuffle(rng);
                (k, p)
            })
            .collect::<BTreeMap<_, _>>()
    };
    let (u, d, m) = (perms(c.up()), perms(c.down()), perms(c.mid()));
    c.permute(&u, &d, &m)
}

/// Random closed simplicial complex on `n` vertices (dimension at most 2).
/// Values are interior eighths, with the occasional vertex pinned to the
/// strip bound.
pub fn random_simplicial<R: Rng>(
    field: Field,
    lambda: &Rational,
    n: usize,
    rng: &mut R,
) -> SimplicialInput {
    let vertices: Vec<(u64, Rational)> = (0..n as u64)
        .map(|i| {
            let v = match rng.random_range(0..10) {
                0 => lambda.clone(),
                1 => -lambda.clone(),
                _ => random_level(lambda, rng),
            };
            (i, v)
        })
        .collect();
    let mut edges = BTreeSet::new();
    for i in 0..n as u64 {
        for j in i + 1..n as u64 {
            if rng.random_bool(0.5) {
                edges.insert(vec![i, j]);
            }
        }
    }
    let mut simplices: Vec<Vec<u64>> = edges.iter().cloned().collect();
    for i in 0..n as u64 {
        for j in i + 1..n as u64 {
            for k in j + 1..n as u64 {
                let all = [[i, j], [i, k], [j, k]]
                    .iter()
                    .all(|e| edges.contains(&e.to_vec()));
                if all && rng.random_bool(0.5) {
                    simplices.push(vec![i, j, k]);
                }
            }
        }
    }
    SimplicialInput {
        lambda: lambda.clone(),
        field,
        vertices,
        simplices,
    }
}

/// Move every interior vertex by at most `eps` in flow coordinates. Values
/// are rounded to the nearest double and stored exactly; pinned vertices stay.
pub fn perturb_simplicial<R: Rng>(
    s: &SimplicialInput,
    eps: f64,
    phi: &Homeomorphism,
    rng: &mut R,
) -> SimplicialInput {
    let lam = &s.lambda;
    let mut out = s.clone();
    for (_, v) in out.vertices.iter_mut() {
        if *v == *lam || *v == -lam.clone() {
            continue;
        }
        let x = phi.xi(to_f64(v)) + rng.random_range(-eps..=eps);
        if let Some(q) = Rational::from_float(phi.phi(x)) {
            if q < *lam && q > -lam.clone() {
                *v = q;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn random_cospans_are_valid() {
        let mut rng = StdRng::seed_from_u64(11);
        let l = Rational::from_integer(2.into());
        for field in [Field::Prime(2), Field::Prime(5), Field::Rational] {
            for _ in 0..30 {
                let c = random_cospan(field, &l, 12, &mut rng).unwrap();
                assert!(c.validate().is_empty(), "{:?}", c.validate());
                assert!(c.total_dim() <= 12);
            }
        }
    }

    #[test]
    fn random_summands_are_valid() {
        let mut rng = StdRng::seed_from_u64(3);
        let l = Rational::from_integer(2.into());
        for kind in KINDS {
            for _ in 0..20 {
                let s = random_summand(kind, &l, &mut rng);
                assert_eq!(s.kind(), kind);
                s.check(&l).unwrap();
            }
        }
    }
}
