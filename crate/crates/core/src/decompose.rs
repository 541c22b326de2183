//! Decomposition of a filtered cospan into standard elementary summands.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::algebra::{
    column_reduce, kernel_basis, solve_sparse, Echelon, Field, Rational, SparseMatrix, SparseVec,
};
use crate::complex::{
    decompose_filtered, is_orthogonal_basis, DegreeBases, FilteredComplex, Flavor, Generator,
};
use crate::cospan::{FilteredCospan, Summand};
use crate::error::{Error, Result};

/// Homology of one degree of an unfiltered complex, with a fixed basis of
/// representative cycles.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    echelon: Echelon,
    boundary_d: SparseMatrix,
    reps: Vec<SparseVec>,
    rep_labels: Vec<usize>,
}

impl HomologyBasis {
    pub fn new(c: &FilteredComplex, k: i32) -> HomologyBasis {
        let mut echelon = Echelon::new(c.field());
        for b in c.boundary(k + 1).columns() {
            let _ = echelon.insert(b);
        }
        let boundary_d = c.boundary(k).into_owned();
        let mut reps = Vec::new();
        let mut rep_labels = Vec::new();
        for z in kernel_basis(&boundary_d) {
            if let Ok(label) = echelon.insert(&z) {
                reps.push(z);
                rep_labels.push(label);
            }
        }
        HomologyBasis {
            echelon,
            boundary_d,
            reps,
            rep_labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[SparseVec] {
        &self.reps
    }

    /// Coordinates of the class of a cycle in the representative basis.
    pub fn classify(&self, z: &SparseVec) -> Result<SparseVec> {
        if !self.boundary_d.mul_vec(z).is_zero() {
            return Err(Error::NotACycle("chain has nonzero boundary".into()));
        }
        let (residual, coeffs) = self.echelon.reduce(z);
        if !residual.is_zero() {
            return Err(Error::Internal(
                "cycle outside boundaries plus representatives".into(),
            ));
        }
        let pos: BTreeMap<usize, usize> = self
            .rep_labels
            .iter()
            .enumerate()
            .map(|(i, l)| (*l, i))
            .collect();
        Ok(coeffs.remap(|l| pos.get(&l).copied()))
    }
}

/// Matrix of the map on homology induced by a chain map in degree `k`,
/// evaluated on the given source cycles.
pub fn homology_induced_map(
    src: &FilteredComplex,
    k: i32,
    chain_map: &SparseMatrix,
    src_cycles: &[SparseVec],
    dst: &HomologyBasis,
) -> Result<SparseMatrix> {
    let d = src.boundary(k);
    let cols = src_cycles
        .iter()
        .map(|z| {
            if !d.mul_vec(z).is_zero() {
                return Err(Error::NotACycle(format!("source chain in degree {k}")));
            }
            dst.classify(&chain_map.mul_vec(z))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_columns(src.field(), dst.dim(), cols))
}

fn key_order(keys: &[Rational]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
    idx
}

/// Orthogonality in a coordinate space whose basis vector `i` sits at
/// `keys[i]`, with the filtration of a vector the max key on its support.
pub fn is_orthogonal_in_keys(
    field: Field,
    keys: &[Rational],
    vectors: &[SparseVec],
) -> Result<bool> {
    let lambda =
        keys.iter().map(|q| q.abs()).max().unwrap_or_default() + Rational::from_integer(1.into());
    let gens = BTreeMap::from([(
        0,
        keys.iter()
            .enumerate()
            .map(|(i, q)| Generator::new(format!("b{i}"), q.clone()))
            .collect(),
    )]);
    let c = FilteredComplex::from_parts(Flavor::Ascending, field, lambda, gens, BTreeMap::new())?;
    is_orthogonal_basis(&c, 0, vectors)
}

/// Given an invertible `phi` from a space graded by `src_keys` to one
/// graded by `dst_keys` (larger key = higher filtration), find a basis
/// `v` orthogonal for the source whose images are orthogonal for the target.
pub fn match_filtered_iso(
    phi: &SparseMatrix,
    src_keys: &[Rational],
    dst_keys: &[Rational],
) -> Result<Vec<(SparseVec, SparseVec)>> {
    if phi.rows() != phi.cols() || src_keys.len() != phi.cols() || dst_keys.len() != phi.rows() {
        return Err(Error::Shape(
            "matching needs a square map and matching key lists".into(),
        ));
    }
    let red = column_reduce(phi, &key_order(src_keys), &key_order(dst_keys))?;
    if red.pivots.len() != phi.cols() {
        return Err(Error::Singular);
    }
    let pairs: Vec<(SparseVec, SparseVec)> = red
        .pivots
        .iter()
        .map(|(_, j)| {
            (
                red.change.column(*j).clone(),
                red.reduced.column(*j).clone(),
            )
        })
        .collect();
    let (srcs, dsts): (Vec<SparseVec>, Vec<SparseVec>) = pairs.iter().cloned().unzip();
    if !is_orthogonal_in_keys(phi.field(), src_keys, &srcs)?
        || !is_orthogonal_in_keys(phi.field(), dst_keys, &dsts)?
    {
        return Err(Error::Internal("matched bases are not orthogonal".into()));
    }
    Ok(pairs)
}

/// What a homology representative of an outer complex turned into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Role {
    /// Paired with the representative of the same index on the other side.
    Matched(usize),
    /// Maps to a middle class the other side does not reach.
    Free,
    /// Maps to zero in the middle.
    Kernel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representative {
    pub chain: SparseVec,
    pub level: Rational,
    pub role: Role,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeWitness {
    pub up: DegreeBases,
    pub down: DegreeBases,
    pub up_reps: Vec<Representative>,
    pub down_reps: Vec<Representative>,
    pub boxes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
    pub witness: BTreeMap<i32, DegreeWitness>,
}

fn combine(coords: &SparseVec, basis: &[SparseVec]) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, s) in coords.iter() {
        out.axpy(s, &basis[*i]);
    }
    out
}

/// Split of the outer homology classes in one degree: kernel of the map to
/// the middle, the part landing in the shared image, and the rest. All
/// vectors are coordinates over the class basis.
struct Side {
    kernel: Vec<SparseVec>,
    shared: Vec<SparseVec>,
    free: Vec<SparseVec>,
}

fn split_side(map: &SparseMatrix, keys: &[Rational], shared_image: &[SparseVec]) -> Result<Side> {
    let field = map.field();
    let order = key_order(keys);
    let rows: Vec<usize> = (0..map.rows()).collect();
    let red = column_reduce(map, &order, &rows)?;
    let mut kernel = Vec::new();
    let mut complement = Vec::new();
    for &j in &order {
        if red.reduced.column(j).is_zero() {
            kernel.push(red.change.column(j).clone());
        } else {
            complement.push(red.change.column(j).clone());
        }
    }
    let mut e = Echelon::new(field);
    for v in shared_image {
        e.insert(v)
            .map_err(|_| Error::Internal("shared image basis is dependent".into()))?;
    }
    let offset = shared_image.len();
    let mut shared = Vec::new();
    let mut free = Vec::new();
    let mut accepted: Vec<SparseVec> = Vec::new();
    for v in complement {
        match e.insert(&map.mul_vec(&v)) {
            Ok(_) => {
                free.push(v.clone());
                accepted.push(v);
            }
            Err(coeffs) => {
                let mut p = v.clone();
                for (label, c) in coeffs.iter() {
                    if *label >= offset {
                        p.axpy(&-c, &accepted[*label - offset]);
                    }
                }
                shared.push(p);
                accepted.push(v);
            }
        }
    }
    Ok(Side {
        kernel,
        shared,
        free,
    })
}

fn max_level(coords: &SparseVec, levels: &[Rational]) -> Rational {
    coords
        .indices()
        .map(|i| &levels[i])
        .max()
        .expect("nonzero")
        .clone()
}

fn min_level(coords: &SparseVec, levels: &[Rational]) -> Rational {
    coords
        .indices()
        .map(|i| &levels[i])
        .min()
        .expect("nonzero")
        .clone()
}

/// Decompose a valid cospan into standard elementary summands, sorted.
pub fn decompose(c: &FilteredCospan) -> Result<Decomposition> {
    let bad = c.validate();
    if !bad.is_empty() {
        return Err(Error::InvalidCospan(bad.join("; ")));
    }
    let field = c.field();
    let up = decompose_filtered(c.up())?;
    let down = decompose_filtered(c.down())?;
    let mut summands = Vec::new();
    for p in up.pairs.iter().filter(|p| !p.is_degenerate()) {
        summands.push(Summand::Up {
            k: p.degree,
            a: p.birth.finite().expect("finite").clone(),
            b: p.death.finite().expect("finite").clone(),
        });
    }
    for p in down.pairs.iter().filter(|p| !p.is_degenerate()) {
        summands.push(Summand::Down {
            k: p.degree,
            a: p.birth.finite().expect("finite").clone(),
            b: p.death.finite().expect("finite").clone(),
        });
    }
    let (lo, hi) = c.degree_range();
    let mut witness = BTreeMap::new();
    for k in lo..=hi {
        let ub = up.bases.get(&k).cloned().unwrap_or_default();
        let db = down.bases.get(&k).cloned().unwrap_or_default();
        let uh: Vec<SparseVec> = ub.h.iter().map(|b| b.chain.clone()).collect();
        let dh: Vec<SparseVec> = db.h.iter().map(|b| b.chain.clone()).collect();
        let ul: Vec<Rational> = ub.h.iter().map(|b| b.level.clone()).collect();
        let dl: Vec<Rational> = db.h.iter().map(|b| b.level.clone()).collect();
        let hb = HomologyBasis::new(c.mid(), k);
        let a = homology_induced_map(c.up(), k, &c.psi_up(k), &uh, &hb)?;
        let b = homology_induced_map(c.down(), k, &c.psi_down(k), &dh, &hb)?;

        // shared image of the two induced maps
        let image_basis = |m: &SparseMatrix| {
            let mut e = Echelon::new(field);
            m.columns()
                .iter()
                .filter(|v| e.insert(v).is_ok())
                .cloned()
                .collect::<Vec<_>>()
        };
        let (ia, ib) = (image_basis(&a), image_basis(&b));
        let mut stacked = ia.clone();
        stacked.extend(ib.iter().map(SparseVec::neg));
        let both = SparseMatrix::from_columns(field, hb.dim(), stacked);
        let shared_image: Vec<SparseVec> = kernel_basis(&both)
            .iter()
            .map(|st| combine(&st.remap(|i| (i < ia.len()).then_some(i)), &ia))
            .collect();

        let neg_dl: Vec<Rational> = dl.iter().map(|q| -q.clone()).collect();
        let su = split_side(&a, &ul, &shared_image)?;
        let sd = split_side(&b, &neg_dl, &shared_image)?;

        // compare the shared parts through the middle
        let down_images = SparseMatrix::from_columns(
            field,
            hb.dim(),
            sd.shared.iter().map(|v| b.mul_vec(v)).collect(),
        );
        let phi_cols = su
            .shared
            .iter()
            .map(|v| {
                solve_sparse(&down_images, &a.mul_vec(v))
                    .ok_or_else(|| Error::Internal("shared class not reached from below".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let phi = SparseMatrix::from_columns(field, sd.shared.len(), phi_cols);
        let src_keys: Vec<Rational> = su.shared.iter().map(|v| max_level(v, &ul)).collect();
        let dst_keys: Vec<Rational> = sd.shared.iter().map(|v| -min_level(v, &dl)).collect();
        let matched = match_filtered_iso(&phi, &src_keys, &dst_keys)?;

        let mut up_reps = Vec::new();
        let mut down_reps = Vec::new();
        for (i, (s, t)) in matched.iter().enumerate() {
            let x = combine(s, &su.shared);
            let y = combine(t, &sd.shared);
            let (lu, ld) = (max_level(&x, &ul), min_level(&y, &dl));
            summands.push(Summand::Gt {
                k,
                up: lu.clone(),
                down: ld.clone(),
            });
            up_reps.push(Representative {
                chain: combine(&x, &uh),
                level: lu,
                role: Role::Matched(i),
            });
            down_reps.push(Representative {
                chain: combine(&y, &dh),
                level: ld,
                role: Role::Matched(i),
            });
        }
        for (vecs, role, levels, chains, up_side) in [
            (&su.free, Role::Free, &ul, &uh, true),
            (&su.kernel, Role::Kernel, &ul, &uh, true),
            (&sd.free, Role::Free, &dl, &dh, false),
            (&sd.kernel, Role::Kernel, &dl, &dh, false),
        ] {
            let reps = if up_side {
                &mut up_reps
            } else {
                &mut down_reps
            };
            for v in vecs.iter() {
                let level = if up_side {
                    max_level(v, levels)
                } else {
                    min_level(v, levels)
                };
                summands.push(match (&role, up_side) {
                    (Role::Free, true) => Summand::Ne {
                        k,
                        a: level.clone(),
                    },
                    (Role::Free, false) => Summand::Se {
                        k,
                        a: level.clone(),
                    },
                    (_, true) => Summand::UpInf {
                        k,
                        a: level.clone(),
                    },
                    (_, false) => Summand::DownNegInf {
                        k,
                        a: level.clone(),
                    },
                });
                reps.push(Representative {
                    chain: combine(v, chains),
                    level,
                    role: role.clone(),
                });
            }
        }
        let reached = shared_image.len() + su.free.len() + sd.free.len();
        let boxes = hb.dim() - reached;
        summands.extend(std::iter::repeat_n(Summand::Box { k }, boxes));
        witness.insert(
            k,
            DegreeWitness {
                up: ub,
                down: db,
                up_reps,
                down_reps,
                boxes,
            },
        );
    }
    summands.sort();
    Ok(Decomposition { summands, witness })
}

/// Machine check of the witness: per degree, the outer bases are
/// orthogonal, boundaries and representatives span the cycles, the
/// boundary map pairs chains with boundaries, matched representatives are
/// homologous in the middle, free images are independent there, and kernel
/// representatives vanish there. Returns the failures.
pub fn check_witness(c: &FilteredCospan, d: &Decomposition) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let field = c.field();
    for (k, w) in &d.witness {
        let k = *k;
        for (name, cx, bases, reps, psi) in [
            ("up", c.up(), &w.up, &w.up_reps, c.psi_up(k).into_owned()),
            (
                "down",
                c.down(),
                &w.down,
                &w.down_reps,
                c.psi_down(k).into_owned(),
            ),
        ] {
            let mut all: Vec<SparseVec> = bases.a.iter().map(|b| b.chain.clone()).collect();
            all.extend(bases.b.iter().map(|b| b.chain.clone()));
            all.extend(reps.iter().map(|r| r.chain.clone()));
            if all.len() != cx.dim(k) || !is_orthogonal_basis(cx, k, &all)? {
                out.push(format!(
                    "{name} basis in degree {k} is not an orthogonal basis"
                ));
            }
            for r in reps {
                if cx.filtration_of(k, &r.chain)?.finite() != Some(&r.level) {
                    out.push(format!(
                        "{name} representative level mismatch in degree {k}"
                    ));
                }
            }
            let cycles = SparseMatrix::from_columns(
                field,
                cx.dim(k),
                bases
                    .b
                    .iter()
                    .map(|b| b.chain.clone())
                    .chain(reps.iter().map(|r| r.chain.clone()))
                    .collect(),
            );
            if crate::algebra::rank(&cycles) != kernel_basis(&cx.boundary(k)).len()
                || !cx.boundary(k).mul(&cycles).is_zero()
            {
                out.push(format!("{name} cycles in degree {k} are not spanned"));
            }
            if let Some(above) = if name == "up" {
                d.witness.get(&(k + 1)).map(|x| &x.up)
            } else {
                d.witness.get(&(k + 1)).map(|x| &x.down)
            } {
                for (x, y) in above.a.iter().zip(&bases.b) {
                    if cx.boundary(k + 1).mul_vec(&x.chain) != y.chain {
                        out.push(format!("{name} boundary pairing broken in degree {k}"));
                    }
                }
            }
            let _ = psi;
        }
        let hb = HomologyBasis::new(c.mid(), k);
        let class = |psi: &SparseMatrix, z: &SparseVec| hb.classify(&psi.mul_vec(z));
        let (pu, pd) = (c.psi_up(k).into_owned(), c.psi_down(k).into_owned());
        let mut e = Echelon::new(field);
        for r in &w.up_reps {
            let cls = class(&pu, &r.chain)?;
            match r.role {
                Role::Matched(i) => {
                    let other = w.down_reps.iter().find(|s| s.role == Role::Matched(i));
                    match other {
                        Some(s) if class(&pd, &s.chain)? == cls => {}
                        _ => out.push(format!("matched pair {i} in degree {k} is not homologous")),
                    }
                    if e.insert(&cls).is_err() {
                        out.push(format!("matched classes in degree {k} are dependent"));
                    }
                }
                Role::Free => {
                    if e.insert(&cls).is_err() {
                        out.push(format!("free up class in degree {k} is dependent"));
                    }
                }
                Role::Kernel => {
                    if !cls.is_zero() {
                        out.push(format!("kernel up class in degree {k} survives"));
                    }
                }
            }
        }
        for r in &w.down_reps {
            let cls = class(&pd, &r.chain)?;
            match r.role {
                Role::Matched(_) => {}
                Role::Free => {
                    if e.insert(&cls).is_err() {
                        out.push(format!("free down class in degree {k} is dependent"));
                    }
                }
                Role::Kernel => {
                    if !cls.is_zero() {
                        out.push(format!("kernel down class in degree {k} survives"));
                    }
                }
            }
        }
        if e.rank() + w.boxes != hb.dim() {
            out.push(format!(
                "box count in degree {k} does not fill the middle homology"
            ));
        }
    }
    Ok(out)
}
