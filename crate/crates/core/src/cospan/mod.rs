//! Filtered cospans `C_up -> D <- C_down`, their standard elementary
//! summands, direct sums, flows, and the morphism calculus.

mod morphism;
mod summand;

pub use morphism::{check_interleaving, verify_interleaving, CospanMorphism, GradedMap};
pub use summand::{standard_summand, Summand};

use std::borrow::Cow;
use std::collections::BTreeMap;

use crate::algebra::{Field, Rational, SparseMatrix};
use crate::complex::{FilteredComplex, Flavor};
use crate::error::{Error, Result};
use crate::strip::Homeomorphism;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredCospan {
    up: FilteredComplex,
    down: FilteredComplex,
    mid: FilteredComplex,
    psi_up: BTreeMap<i32, SparseMatrix>,
    psi_down: BTreeMap<i32, SparseMatrix>,
}

impl FilteredCospan {
    /// Assemble a cospan. Shapes, fields, flavors and the shared bound are
    /// checked here; the remaining invariants are reported by [`Self::validate`].
    pub fn new(
        up: FilteredComplex,
        down: FilteredComplex,
        mid: FilteredComplex,
        psi_up: BTreeMap<i32, SparseMatrix>,
        psi_down: BTreeMap<i32, SparseMatrix>,
    ) -> Result<FilteredCospan> {
        let field = mid.field();
        for c in [&up, &down] {
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            if c.lambda() != mid.lambda() {
                return Err(Error::LambdaMismatch(
                    crate::algebra::format_rational(c.lambda()),
                    crate::algebra::format_rational(mid.lambda()),
                ));
            }
        }
        if up.flavor() != Flavor::Ascending || down.flavor() != Flavor::Descending {
            return Err(Error::InvalidCospan(
                "up must be ascending and down descending".into(),
            ));
        }
        let mid = mid.with_flavor(Flavor::Unfiltered);
        let check = |name: &str, src: &FilteredComplex, maps: &BTreeMap<i32, SparseMatrix>| {
            for (k, m) in maps {
                if m.field() != field {
                    return Err(Error::FieldMismatch(field, m.field()));
                }
                if (m.rows(), m.cols()) != (mid.dim(*k), src.dim(*k)) {
                    return Err(Error::Shape(format!(
                        "{name} in degree {k} is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        mid.dim(*k),
                        src.dim(*k)
                    )));
                }
            }
            Ok(())
        };
        check("psi_up", &up, &psi_up)?;
        check("psi_down", &down, &psi_down)?;
        let strip_zero = |maps: BTreeMap<i32, SparseMatrix>| {
            maps.into_iter()
                .filter(|(_, m)| m.rows() > 0 && m.cols() > 0 && !m.is_zero())
                .collect()
        };
        Ok(FilteredCospan {
            psi_up: strip_zero(psi_up),
            psi_down: strip_zero(psi_down),
            up,
            down,
            mid,
        })
    }

    pub fn zero(field: Field, lambda: Rational) -> FilteredCospan {
        FilteredCospan {
            up: FilteredComplex::zero(Flavor::Ascending, field, lambda.clone()),
            down: FilteredComplex::zero(Flavor::Descending, field, lambda.clone()),
            mid: FilteredComplex::zero(Flavor::Unfiltered, field, lambda),
            psi_up: BTreeMap::new(),
            psi_down: BTreeMap::new(),
        }
    }

    pub fn up(&self) -> &FilteredComplex {
        &self.up
    }

    pub fn down(&self) -> &FilteredComplex {
        &self.down
    }

    pub fn mid(&self) -> &FilteredComplex {
        &self.mid
    }

    pub fn field(&self) -> Field {
        self.mid.field()
    }

    pub fn lambda(&self) -> &Rational {
        self.mid.lambda()
    }

    pub fn psi_up(&self, k: i32) -> Cow<'_, SparseMatrix> {
        match self.psi_up.get(&k) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(SparseMatrix::zeros(
                self.field(),
                self.mid.dim(k),
                self.up.dim(k),
            )),
        }
    }

    pub fn psi_down(&self, k: i32) -> Cow<'_, SparseMatrix> {
        match self.psi_down.get(&k) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(SparseMatrix::zeros(
                self.field(),
                self.mid.dim(k),
                self.down.dim(k),
            )),
        }
    }

    /// Smallest and largest degree carrying a generator anywhere.
    pub fn degree_range(&self) -> (i32, i32) {
        let ranges: Vec<(i32, i32)> = [&self.up, &self.down, &self.mid]
            .iter()
            .map(|c| c.degree_range())
            .filter(|(lo, hi)| lo <= hi)
            .collect();
        match (
            ranges.iter().map(|r| r.0).min(),
            ranges.iter().map(|r| r.1).max(),
        ) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => (0, -1),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.up.total_dim() + self.down.total_dim() + self.mid.total_dim()
    }

    /// Every violated invariant, as text; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = self.up.violations("up");
        out.extend(self.down.violations("down"));
        out.extend(
            self.mid
                .violations("mid")
                .into_iter()
                .filter(|v| !v.contains("lambda")),
        );
        let (lo, hi) = self.degree_range();
        for k in lo..=hi + 1 {
            for (name, src, psi) in [
                ("psi_up", &self.up, self.psi_up(k)),
                ("psi_down", &self.down, self.psi_down(k)),
            ] {
                let lhs = self.mid.boundary(k).mul(&psi);
                let rhs = match name {
                    "psi_up" => self.psi_up(k - 1).mul(&src.boundary(k)),
                    _ => self.psi_down(k - 1).mul(&src.boundary(k)),
                };
                if lhs != rhs {
                    out.push(format!("{name} is not a chain map in degree {k}"));
                }
            }
        }
        out
    }

    /// Block sum of cospans sharing field and bound.
    pub fn direct_sum(
        field: Field,
        lambda: &Rational,
        parts: &[FilteredCospan],
    ) -> Result<FilteredCospan> {
        for c in parts {
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            if c.lambda() != lambda {
                return Err(Error::LambdaMismatch(
                    crate::algebra::format_rational(c.lambda()),
                    crate::algebra::format_rational(lambda),
                ));
            }
        }
        let sum = |pick: fn(&FilteredCospan) -> &FilteredComplex, flavor| {
            let v: Vec<&FilteredComplex> = parts.iter().map(pick).collect();
            FilteredComplex::direct_sum(&v, flavor, field, lambda.clone())
        };
        let up = sum(|c| &c.up, Flavor::Ascending);
        let down = sum(|c| &c.down, Flavor::Descending);
        let mid = sum(|c| &c.mid, Flavor::Unfiltered);
        let block = |src_dim: fn(&FilteredCospan, i32) -> usize,
                     map: fn(&FilteredCospan, i32) -> SparseMatrix,
                     tot_src: &FilteredComplex| {
            let mut out = BTreeMap::new();
            for k in tot_src.degrees() {
                let (mut r0, mut c0) = (0, 0);
                let mut entries = Vec::new();
                for c in parts {
                    for (r, col, s) in map(c, k).entries() {
                        entries.push((r + r0, col + c0, s));
                    }
                    r0 += c.mid.dim(k);
                    c0 += src_dim(c, k);
                }
                if !entries.is_empty() {
                    out.insert(
                        k,
                        SparseMatrix::from_entries(field, mid.dim(k), tot_src.dim(k), entries)
                            .expect("disjoint blocks"),
                    );
                }
            }
            out
        };
        let psi_up = block(|c, k| c.up.dim(k), |c, k| c.psi_up(k).into_owned(), &up);
        let psi_down = block(
            |c, k| c.down.dim(k),
            |c, k| c.psi_down(k).into_owned(),
            &down,
        );
        FilteredCospan::new(up, down, mid, psi_up, psi_down)
    }

    /// Relabel generators of all three complexes (see [`FilteredComplex::permute`]).
    pub fn permute(
        &self,
        up: &BTreeMap<i32, Vec<usize>>,
        down: &BTreeMap<i32, Vec<usize>>,
        mid: &BTreeMap<i32, Vec<usize>>,
    ) -> FilteredCospan {
        let perm = |p: &BTreeMap<i32, Vec<usize>>, k: i32, n: usize| {
            p.get(&k).cloned().unwrap_or_else(|| (0..n).collect())
        };
        let remap = |maps: &BTreeMap<i32, SparseMatrix>, src: &BTreeMap<i32, Vec<usize>>| {
            maps.iter()
                .map(|(k, m)| {
                    (
                        *k,
                        m.permute(&perm(mid, *k, m.rows()), &perm(src, *k, m.cols())),
                    )
                })
                .collect()
        };
        FilteredCospan {
            up: self.up.permute(up),
            down: self.down.permute(down),
            mid: self.mid.permute(mid),
            psi_up: remap(&self.psi_up, up),
            psi_down: remap(&self.psi_down, down),
        }
    }

    pub(crate) fn with_levels(&self, up: FilteredComplex, down: FilteredComplex) -> FilteredCospan {
        FilteredCospan {
            up,
            down,
            ..self.clone()
        }
    }
}

/// A cospan viewed through the flow by `eps`: up levels are moved by `-eps`
/// and down levels by `+eps` in the coordinates of the homeomorphism.
/// Flows compose by adding shifts, so the action law holds exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowedCospan {
    pub base: FilteredCospan,
    pub eps: Rational,
}

impl FlowedCospan {
    pub fn then(&self, eps: &Rational) -> FlowedCospan {
        FlowedCospan {
            base: self.base.clone(),
            eps: &self.eps + eps,
        }
    }

    /// Level of an up generator in homeomorphism coordinates.
    pub fn up_coord(&self, phi: &Homeomorphism, k: i32, i: usize) -> f64 {
        phi.xi_q(self.base.up().level(k, i)) - crate::strip::to_f64(&self.eps)
    }

    pub fn down_coord(&self, phi: &Homeomorphism, k: i32, i: usize) -> f64 {
        phi.xi_q(self.base.down().level(k, i)) + crate::strip::to_f64(&self.eps)
    }

    /// Plain cospan with the flowed levels written out as rationals. The
    /// rounding is exact when the homeomorphism maps rationals to rationals
    /// (the clamped linear one); otherwise levels are the nearest doubles.
    pub fn materialize(&self, phi: &Homeomorphism) -> FilteredCospan {
        let up = self
            .base
            .up()
            .map_levels(|q| phi.rho_q(&-self.eps.clone(), q));
        let down = self.base.down().map_levels(|q| phi.rho_q(&self.eps, q));
        self.base.with_levels(up, down)
    }
}

/// The flow applied to a cospan, kept symbolic; see [`FlowedCospan`].
pub fn flow_shift(c: &FilteredCospan, eps: &Rational) -> FlowedCospan {
    FlowedCospan {
        base: c.clone(),
        eps: eps.clone(),
    }
}
