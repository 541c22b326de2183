use std::collections::BTreeMap;

use super::FilteredCospan;
use crate::algebra::{solve_sparse, Rational, Scalar, SparseMatrix, SparseVec};
use crate::complex::FilteredComplex;
use crate::error::{Error, Result};
use crate::strip::{to_f64, Homeomorphism};

/// Family of matrices indexed by source degree; block `j` maps degree `j`
/// to degree `j - shift`. Missing blocks are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap {
    pub shift: i32,
    pub blocks: BTreeMap<i32, SparseMatrix>,
}

impl GradedMap {
    pub fn zero(shift: i32) -> GradedMap {
        GradedMap {
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn boundary_of(c: &FilteredComplex) -> GradedMap {
        GradedMap {
            shift: 1,
            blocks: c
                .degrees()
                .map(|k| (k, c.boundary(k).into_owned()))
                .filter(|(_, m)| !m.is_zero())
                .collect(),
        }
    }

    pub fn identity_of(c: &FilteredComplex) -> GradedMap {
        GradedMap {
            shift: 0,
            blocks: c
                .degrees()
                .filter(|k| c.dim(*k) > 0)
                .map(|k| (k, SparseMatrix::identity(c.field(), c.dim(k))))
                .collect(),
        }
    }

    pub fn block(&self, j: i32) -> Option<&SparseMatrix> {
        self.blocks.get(&j)
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &GradedMap) -> Result<GradedMap> {
        let mut blocks = BTreeMap::new();
        for (j, m) in &self.blocks {
            if let Some(a) = after.blocks.get(&(j - self.shift)) {
                let p = a.try_mul(m)?;
                if !p.is_zero() {
                    blocks.insert(*j, p);
                }
            }
        }
        Ok(GradedMap {
            shift: self.shift + after.shift,
            blocks,
        })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.shift != other.shift && !self.is_zero() && !other.is_zero() {
            return Err(Error::Shape(format!(
                "adding maps of shifts {} and {}",
                self.shift, other.shift
            )));
        }
        let shift = if self.is_zero() {
            other.shift
        } else {
            self.shift
        };
        let mut blocks = self.blocks.clone();
        for (j, m) in &other.blocks {
            let sum = match blocks.get(j) {
                Some(a) => a.try_add(m)?,
                None => m.clone(),
            };
            if sum.is_zero() {
                blocks.remove(j);
            } else {
                blocks.insert(*j, sum);
            }
        }
        Ok(GradedMap { shift, blocks })
    }

    pub fn scale(&self, s: &Scalar) -> GradedMap {
        GradedMap {
            shift: self.shift,
            blocks: self
                .blocks
                .iter()
                .map(|(j, m)| (*j, m.scale(s)))
                .filter(|(_, m)| !m.is_zero())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(SparseMatrix::is_zero)
    }
}

/// Morphism of cospans of degree `m`: maps between the three complexes
/// (shifting degree by `-m`) and two homotopies from the outer complexes
/// into the target's middle complex (shifting by `1 - m`).
#[derive(Clone, Debug, PartialEq)]
pub struct CospanMorphism {
    pub degree: i32,
    pub alpha_down: GradedMap,
    pub alpha_up: GradedMap,
    pub alpha: GradedMap,
    pub k_down: GradedMap,
    pub k_up: GradedMap,
}

fn psi_map(c: &FilteredCospan, up: bool) -> GradedMap {
    let (lo, hi) = c.degree_range();
    GradedMap {
        shift: 0,
        blocks: (lo..=hi)
            .map(|k| {
                let m = if up { c.psi_up(k) } else { c.psi_down(k) };
                (k, m.into_owned())
            })
            .filter(|(_, m)| !m.is_zero())
            .collect(),
    }
}

fn sign(field: crate::algebra::Field, m: i32) -> Scalar {
    field.from_i64(if m.rem_euclid(2) == 0 { 1 } else { -1 })
}

impl CospanMorphism {
    pub fn zero(degree: i32) -> CospanMorphism {
        CospanMorphism {
            degree,
            alpha_down: GradedMap::zero(degree),
            alpha_up: GradedMap::zero(degree),
            alpha: GradedMap::zero(degree),
            k_down: GradedMap::zero(degree - 1),
            k_up: GradedMap::zero(degree - 1),
        }
    }

    /// `(1, 1, 1, 0, 0)`.
    pub fn identity(c: &FilteredCospan) -> CospanMorphism {
        CospanMorphism {
            alpha_down: GradedMap::identity_of(c.down()),
            alpha_up: GradedMap::identity_of(c.up()),
            alpha: GradedMap::identity_of(c.mid()),
            ..CospanMorphism::zero(0)
        }
    }

    fn parts(&self) -> [&GradedMap; 5] {
        [
            &self.alpha_down,
            &self.alpha_up,
            &self.alpha,
            &self.k_down,
            &self.k_up,
        ]
    }

    fn from_parts(degree: i32, p: [GradedMap; 5]) -> CospanMorphism {
        let [alpha_down, alpha_up, alpha, k_down, k_up] = p;
        CospanMorphism {
            degree,
            alpha_down,
            alpha_up,
            alpha,
            k_down,
            k_up,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parts().iter().all(|g| g.is_zero())
    }

    pub fn add(&self, other: &CospanMorphism) -> Result<CospanMorphism> {
        if self.degree != other.degree {
            return Err(Error::Shape(format!(
                "adding morphisms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let a = self.parts();
        let b = other.parts();
        Ok(CospanMorphism::from_parts(
            self.degree,
            [
                a[0].add(b[0])?,
                a[1].add(b[1])?,
                a[2].add(b[2])?,
                a[3].add(b[3])?,
                a[4].add(b[4])?,
            ],
        ))
    }

    pub fn scale(&self, s: &Scalar) -> CospanMorphism {
        let p = self.parts().map(|g| g.scale(s));
        CospanMorphism::from_parts(self.degree, p)
    }

    pub fn sub(
        &self,
        other: &CospanMorphism,
        field: crate::algebra::Field,
    ) -> Result<CospanMorphism> {
        self.add(&other.scale(&field.from_i64(-1)))
    }

    /// `b ∘ a = (b↓a↓, b↑a↑, b a, L↓a↓ + b K↓, L↑a↑ + b K↑)`.
    pub fn compose(b: &CospanMorphism, a: &CospanMorphism) -> Result<CospanMorphism> {
        Ok(CospanMorphism::from_parts(
            a.degree + b.degree,
            [
                a.alpha_down.then(&b.alpha_down)?,
                a.alpha_up.then(&b.alpha_up)?,
                a.alpha.then(&b.alpha)?,
                a.alpha_down
                    .then(&b.k_down)?
                    .add(&a.k_down.then(&b.alpha)?)?,
                a.alpha_up.then(&b.k_up)?.add(&a.k_up.then(&b.alpha)?)?,
            ],
        ))
    }

    /// Differential of the morphism complex, for `self: src -> dst`.
    pub fn differential(
        &self,
        src: &FilteredCospan,
        dst: &FilteredCospan,
    ) -> Result<CospanMorphism> {
        let field = src.field();
        let m = self.degree;
        let s = sign(field, m);
        let neg = field.from_i64(-1);
        let d_src = [
            GradedMap::boundary_of(src.down()),
            GradedMap::boundary_of(src.up()),
            GradedMap::boundary_of(src.mid()),
        ];
        let d_dst = [
            GradedMap::boundary_of(dst.down()),
            GradedMap::boundary_of(dst.up()),
            GradedMap::boundary_of(dst.mid()),
        ];
        let outer = |i: usize, a: &GradedMap| -> Result<GradedMap> {
            a.then(&d_dst[i])?
                .scale(&neg)
                .add(&d_src[i].then(a)?.scale(&s))
        };
        let d_alpha = self
            .alpha
            .then(&d_dst[2])?
            .add(&d_src[2].then(&self.alpha)?.scale(&-&s))?;
        let homotopy = |i: usize, a: &GradedMap, k: &GradedMap, up: bool| -> Result<GradedMap> {
            let phi = psi_map(dst, up);
            let psi = psi_map(src, up);
            a.then(&phi)?
                .add(&psi.then(&self.alpha)?.scale(&-&s))?
                .add(&k.then(&d_dst[2])?)?
                .add(&d_src[i].then(k)?.scale(&s))
        };
        Ok(CospanMorphism::from_parts(
            m + 1,
            [
                outer(0, &self.alpha_down)?,
                outer(1, &self.alpha_up)?,
                d_alpha,
                homotopy(0, &self.alpha_down, &self.k_down, false)?,
                homotopy(1, &self.alpha_up, &self.k_up, true)?,
            ],
        ))
    }

    /// Block sum of morphisms between direct sums, in concatenation order.
    pub fn direct_sum(
        parts: &[(CospanMorphism, FilteredCospan, FilteredCospan)],
    ) -> Result<CospanMorphism> {
        let Some(first) = parts.first() else {
            return Ok(CospanMorphism::zero(0));
        };
        let degree = first.0.degree;
        let field = first.1.field();
        type Pick = fn(&FilteredCospan) -> &FilteredComplex;
        let pickers: [(Pick, Pick); 5] = [
            (|c| c.down(), |c| c.down()),
            (|c| c.up(), |c| c.up()),
            (|c| c.mid(), |c| c.mid()),
            (|c| c.down(), |c| c.mid()),
            (|c| c.up(), |c| c.mid()),
        ];
        let mut out = Vec::new();
        for (slot, (src_pick, dst_pick)) in pickers.iter().enumerate() {
            let shift = if slot < 3 { degree } else { degree - 1 };
            let mut entries: BTreeMap<i32, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
            let mut src_off: BTreeMap<i32, usize> = BTreeMap::new();
            let mut dst_off: BTreeMap<i32, usize> = BTreeMap::new();
            let mut src_tot: BTreeMap<i32, usize> = BTreeMap::new();
            let mut dst_tot: BTreeMap<i32, usize> = BTreeMap::new();
            for (mor, s, d) in parts {
                if mor.degree != degree {
                    return Err(Error::Shape(
                        "direct sum of morphisms of mixed degree".into(),
                    ));
                }
                let g = mor.parts()[slot];
                for (j, m) in &g.blocks {
                    let c0 = src_off.get(j).copied().unwrap_or(0);
                    let r0 = dst_off.get(&(j - shift)).copied().unwrap_or(0);
                    for (r, c, v) in m.entries() {
                        entries.entry(*j).or_default().push((r + r0, c + c0, v));
                    }
                }
                let (sc, dc) = (src_pick(s), dst_pick(d));
                for k in sc.degrees() {
                    *src_off.entry(k).or_insert(0) += sc.dim(k);
                    *src_tot.entry(k).or_insert(0) += sc.dim(k);
                }
                for k in dc.degrees() {
                    *dst_off.entry(k).or_insert(0) += dc.dim(k);
                    *dst_tot.entry(k).or_insert(0) += dc.dim(k);
                }
            }
            let mut blocks = BTreeMap::new();
            for (j, e) in entries {
                let rows = dst_tot.get(&(j - shift)).copied().unwrap_or(0);
                let cols = src_tot.get(&j).copied().unwrap_or(0);
                blocks.insert(j, SparseMatrix::from_entries(field, rows, cols, e)?);
            }
            out.push(GradedMap { shift, blocks });
        }
        let arr: [GradedMap; 5] = out.try_into().expect("five components");
        Ok(CospanMorphism::from_parts(degree, arr))
    }
}

/// Index layout used to flatten morphisms `src -> dst` of a given degree.
struct Layout {
    // (slot, source degree) -> (offset, rows, cols)
    slots: BTreeMap<(usize, i32), (usize, usize, usize)>,
    len: usize,
}

impl Layout {
    fn new(src: &FilteredCospan, dst: &FilteredCospan, degree: i32) -> Layout {
        let comps: [(&FilteredComplex, &FilteredComplex, i32); 5] = [
            (src.down(), dst.down(), degree),
            (src.up(), dst.up(), degree),
            (src.mid(), dst.mid(), degree),
            (src.down(), dst.mid(), degree - 1),
            (src.up(), dst.mid(), degree - 1),
        ];
        let mut slots = BTreeMap::new();
        let mut len = 0;
        for (slot, (s, d, shift)) in comps.iter().enumerate() {
            for j in s.degrees() {
                let (rows, cols) = (d.dim(j - shift), s.dim(j));
                if rows * cols > 0 {
                    slots.insert((slot, j), (len, rows, cols));
                    len += rows * cols;
                }
            }
        }
        Layout { slots, len }
    }

    fn flatten(&self, m: &CospanMorphism) -> Result<SparseVec> {
        let mut entries = Vec::new();
        for (slot, g) in m.parts().iter().enumerate() {
            for (j, block) in &g.blocks {
                if block.is_zero() {
                    continue;
                }
                let &(off, rows, cols) = self
                    .slots
                    .get(&(slot, *j))
                    .ok_or_else(|| Error::Shape(format!("unexpected block in degree {j}")))?;
                if (block.rows(), block.cols()) != (rows, cols) {
                    return Err(Error::Shape(format!(
                        "block in degree {j} is {}x{}, expected {rows}x{cols}",
                        block.rows(),
                        block.cols()
                    )));
                }
                for (r, c, v) in block.entries() {
                    entries.push((off + c * rows + r, v));
                }
            }
        }
        Ok(SparseVec::from_entries(entries))
    }
}

/// Whether a map entry from a generator at `source` to one at `target` is
/// allowed when the target is flowed by `eps`. Up maps may not raise the
/// level, down maps may not lower it; comparisons within about `1e-12` in
/// flow coordinates count as allowed.
fn allowed(
    phi: &Homeomorphism,
    eps: &Rational,
    target: &Rational,
    source: &Rational,
    up: bool,
) -> bool {
    if *eps == Rational::default() {
        return if up {
            target <= source
        } else {
            target >= source
        };
    }
    let (t, s, e) = (phi.xi_q(target), phi.xi_q(source), to_f64(eps));
    let tol = 1e-12 * 1f64.max(t.abs()).max(s.abs());
    if up {
        t - e <= s + tol
    } else {
        t + e >= s - tol
    }
}

fn mask_failures(
    name: &str,
    m: &CospanMorphism,
    src: &FilteredCospan,
    dst: &FilteredCospan,
    eps: &Rational,
    phi: &Homeomorphism,
) -> Vec<String> {
    let mut out = Vec::new();
    for (up, g, s, d) in [
        (true, &m.alpha_up, src.up(), dst.up()),
        (false, &m.alpha_down, src.down(), dst.down()),
    ] {
        for (j, block) in &g.blocks {
            for (r, c, _) in block.entries() {
                let target = d.level(j - g.shift, r);
                let source = s.level(*j, c);
                if !allowed(phi, eps, target, source, up) {
                    out.push(format!(
                        "{name}: {} entry from {} to {} in degree {j} breaks the flowed filtration",
                        if up { "up" } else { "down" },
                        s.gens(*j)[c].name,
                        d.gens(j - g.shift)[r].name
                    ));
                }
            }
        }
    }
    out
}

/// Is `target` equal to `delta(h)` for some degree -1 morphism `h: c -> c`
/// whose outer maps respect the filtration flowed by `eps`?
fn is_filtered_coboundary(
    c: &FilteredCospan,
    target: &CospanMorphism,
    eps: &Rational,
    phi: &Homeomorphism,
) -> Result<bool> {
    let field = c.field();
    let layout = Layout::new(c, c, 0);
    let goal = layout.flatten(target)?;
    if goal.is_zero() {
        return Ok(true);
    }
    let mut columns = Vec::new();
    let mut push =
        |slot: usize, j: i32, rows: usize, cols: usize, r: usize, col: usize| -> Result<()> {
            let shift = if slot < 3 { -1 } else { -2 };
            let block = SparseMatrix::from_entries(field, rows, cols, [(r, col, field.one())])?;
            let mut g = GradedMap::zero(shift);
            g.blocks.insert(j, block);
            let mut h = CospanMorphism::zero(-1);
            match slot {
                0 => h.alpha_down = g,
                1 => h.alpha_up = g,
                2 => h.alpha = g,
                3 => h.k_down = g,
                _ => h.k_up = g,
            }
            columns.push(layout.flatten(&h.differential(c, c)?)?);
            Ok(())
        };
    let comps: [(&FilteredComplex, &FilteredComplex, i32); 5] = [
        (c.down(), c.down(), -1),
        (c.up(), c.up(), -1),
        (c.mid(), c.mid(), -1),
        (c.down(), c.mid(), -2),
        (c.up(), c.mid(), -2),
    ];
    for (slot, (s, d, shift)) in comps.iter().enumerate() {
        for j in s.degrees() {
            let (rows, cols) = (d.dim(j - shift), s.dim(j));
            for col in 0..cols {
                for r in 0..rows {
                    let ok = match slot {
                        0 => allowed(phi, eps, d.level(j - shift, r), s.level(j, col), false),
                        1 => allowed(phi, eps, d.level(j - shift, r), s.level(j, col), true),
                        _ => true,
                    };
                    if ok {
                        push(slot, j, rows, cols, r, col)?;
                    }
                }
            }
        }
    }
    let system = SparseMatrix::from_columns(field, layout.len, columns);
    Ok(solve_sparse(&system, &goal).is_some())
}

/// Reasons why `(fwd, bwd)` fails to be an `eps`-interleaving witness
/// between `c` and `x`; empty when it is one.
pub fn check_interleaving(
    c: &FilteredCospan,
    x: &FilteredCospan,
    eps: &Rational,
    phi: &Homeomorphism,
    fwd: &CospanMorphism,
    bwd: &CospanMorphism,
) -> Result<Vec<String>> {
    if fwd.degree != 0 || bwd.degree != 0 {
        return Err(Error::Input("interleaving maps must have degree 0".into()));
    }
    if *eps < Rational::default() {
        return Err(Error::Input(
            "interleaving shift must be nonnegative".into(),
        ));
    }
    if c.field() != x.field() {
        return Err(Error::FieldMismatch(c.field(), x.field()));
    }
    let mut out = mask_failures("forward", fwd, c, x, eps, phi);
    out.extend(mask_failures("backward", bwd, x, c, eps, phi));
    if !out.is_empty() {
        return Ok(out);
    }
    Layout::new(c, x, 0).flatten(fwd)?;
    Layout::new(x, c, 0).flatten(bwd)?;
    if !fwd.differential(c, x)?.is_zero() {
        out.push("forward map is not closed".into());
    }
    if !bwd.differential(x, c)?.is_zero() {
        out.push("backward map is not closed".into());
    }
    let two_eps = eps * Rational::from_integer(2.into());
    for (name, src, f, g) in [("source", c, fwd, bwd), ("target", x, bwd, fwd)] {
        let round = CospanMorphism::compose(g, f)?;
        let diff = round.sub(&CospanMorphism::identity(src), src.field())?;
        if !is_filtered_coboundary(src, &diff, &two_eps, phi)? {
            out.push(format!(
                "round trip on the {name} is not homotopic to the shift map"
            ));
        }
    }
    Ok(out)
}

pub fn verify_interleaving(
    c: &FilteredCospan,
    x: &FilteredCospan,
    eps: &Rational,
    phi: &Homeomorphism,
    fwd: &CospanMorphism,
    bwd: &CospanMorphism,
) -> Result<bool> {
    Ok(check_interleaving(c, x, eps, phi, fwd, bwd)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::cospan::{standard_summand, Summand};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn all_kinds() -> Vec<Summand> {
        vec![
            Summand::Up {
                k: 0,
                a: q(-1, 1),
                b: q(1, 2),
            },
            Summand::Down {
                k: 1,
                a: q(1, 1),
                b: q(-1, 2),
            },
            Summand::UpInf { k: 0, a: q(1, 3) },
            Summand::DownNegInf { k: 1, a: q(-1, 3) },
            Summand::Ne { k: 0, a: q(1, 4) },
            Summand::Se { k: 2, a: q(-1, 4) },
            Summand::Gt {
                k: 1,
                up: q(1, 1),
                down: q(-1, 1),
            },
            Summand::Box { k: 0 },
        ]
    }

    #[test]
    fn identity_is_closed() {
        let l = q(2, 1);
        for field in [Field::Prime(2), Field::Prime(5), Field::Rational] {
            for s in all_kinds() {
                let c = standard_summand(&s, field, &l).unwrap();
                let id = CospanMorphism::identity(&c);
                assert!(
                    id.differential(&c, &c).unwrap().is_zero(),
                    "{s:?} over {field}"
                );
            }
        }
    }

    #[test]
    fn differential_squares_to_zero() {
        // every unit morphism of degree -1 on a sum of summands
        let l = q(2, 1);
        let field = Field::Rational;
        let parts: Vec<_> = all_kinds()
            .iter()
            .map(|s| standard_summand(s, field, &l).unwrap())
            .collect();
        let c = FilteredCospan::direct_sum(field, &l, &parts).unwrap();
        let comps: [(&FilteredComplex, &FilteredComplex, i32); 5] = [
            (c.down(), c.down(), -1),
            (c.up(), c.up(), -1),
            (c.mid(), c.mid(), -1),
            (c.down(), c.mid(), -2),
            (c.up(), c.mid(), -2),
        ];
        let mut tried = 0;
        for (slot, (s, d, shift)) in comps.iter().enumerate() {
            for j in s.degrees() {
                let (rows, cols) = (d.dim(j - shift), s.dim(j));
                for col in 0..cols {
                    for r in 0..rows {
                        let block =
                            SparseMatrix::from_entries(field, rows, cols, [(r, col, field.one())])
                                .unwrap();
                        let mut g = GradedMap::zero(*shift);
                        g.blocks.insert(j, block);
                        let mut h = CospanMorphism::zero(-1);
                        match slot {
                            0 => h.alpha_down = g,
                            1 => h.alpha_up = g,
                            2 => h.alpha = g,
                            3 => h.k_down = g,
                            _ => h.k_up = g,
                        }
                        let dh = h.differential(&c, &c).unwrap();
                        assert!(dh.differential(&c, &c).unwrap().is_zero());
                        tried += 1;
                    }
                }
            }
        }
        assert!(tried > 0);
    }

    #[test]
    fn box_is_not_interleaved_with_zero() {
        let l = q(2, 1);
        let phi = Homeomorphism::arctan(&l);
        let c = standard_summand(&Summand::Box { k: 0 }, Field::Rational, &l).unwrap();
        let z = FilteredCospan::zero(Field::Rational, l.clone());
        let (f, g) = (CospanMorphism::zero(0), CospanMorphism::zero(0));
        let why = check_interleaving(&c, &z, &q(100, 1), &phi, &f, &g).unwrap();
        assert_eq!(why.len(), 1, "{why:?}");
        assert!(why[0].contains("source"));
    }

    #[test]
    fn finite_bar_dies_under_a_large_shift() {
        let l = q(2, 1);
        let phi = Homeomorphism::arctan(&l);
        let c = standard_summand(
            &Summand::Up {
                k: 0,
                a: q(-1, 1),
                b: q(1, 1),
            },
            Field::Rational,
            &l,
        )
        .unwrap();
        let z = FilteredCospan::zero(Field::Rational, l.clone());
        let (f, g) = (CospanMorphism::zero(0), CospanMorphism::zero(0));
        let half = (phi.xi(1.0) - phi.xi(-1.0)) / 2.0;
        let above = Rational::from_float(half + 1e-6).unwrap();
        let below = Rational::from_float(half - 1e-6).unwrap();
        assert!(verify_interleaving(&c, &z, &above, &phi, &f, &g).unwrap());
        assert!(!verify_interleaving(&c, &z, &below, &phi, &f, &g).unwrap());
    }

    #[test]
    fn moved_corner_is_interleaved_by_the_identity() {
        let l = q(2, 1);
        let phi = Homeomorphism::arctan(&l);
        let s = standard_summand(
            &Summand::Gt {
                k: 0,
                up: q(0, 1),
                down: q(1, 2),
            },
            Field::Rational,
            &l,
        )
        .unwrap();
        let t = standard_summand(
            &Summand::Gt {
                k: 0,
                up: q(1, 4),
                down: q(1, 2),
            },
            Field::Rational,
            &l,
        )
        .unwrap();
        let (f, g) = (CospanMorphism::identity(&s), CospanMorphism::identity(&t));
        let gap = phi.xi(0.25) - phi.xi(0.0);
        let above = Rational::from_float(gap + 1e-9).unwrap();
        let below = Rational::from_float(gap - 1e-6).unwrap();
        assert!(verify_interleaving(&s, &t, &above, &phi, &f, &g).unwrap());
        let why = check_interleaving(&s, &t, &below, &phi, &f, &g).unwrap();
        assert!(!why.is_empty());
        assert!(verify_interleaving(&s, &s, &Rational::default(), &phi, &f, &f).unwrap());
    }
}
