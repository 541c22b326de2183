//! The strip `|x + y| <= 2 lambda`, its glide reflection `T`, the cell
//! decomposition of a fundamental domain, flows and the induced metric.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::algebra::{format_rational, Rational};
use crate::error::{Error, Result};

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().expect("finite rational")
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhiKind {
    /// `phi(u) = lambda (2/pi) atan(u)`.
    Arctan,
    /// `phi(u) = clamp(u, -lambda, lambda)`; not injective near the ends,
    /// but exact on rationals. Meant for tests.
    LinearClamped,
    /// Piecewise linear through the knots `(u, t)`, with hyperbolic tails.
    Table(Vec<(f64, f64)>),
}

/// Increasing map from the extended reals onto `[-lambda, lambda]`; its
/// inverse `xi` gives the coordinates in which flows are translations.
#[derive(Clone, Debug, PartialEq)]
pub struct Homeomorphism {
    kind: PhiKind,
    lambda: Rational,
    lam: f64,
}

impl Homeomorphism {
    pub fn arctan(lambda: &Rational) -> Homeomorphism {
        Homeomorphism {
            kind: PhiKind::Arctan,
            lambda: lambda.clone(),
            lam: to_f64(lambda),
        }
    }

    pub fn linear_clamped(lambda: &Rational) -> Homeomorphism {
        Homeomorphism {
            kind: PhiKind::LinearClamped,
            ..Homeomorphism::arctan(lambda)
        }
    }

    pub fn table(lambda: &Rational, knots: Vec<(f64, f64)>) -> Result<Homeomorphism> {
        let lam = to_f64(lambda);
        let increasing = knots.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1);
        let inside = knots.iter().all(|(u, t)| u.is_finite() && t.abs() < lam);
        if knots.is_empty() || !increasing || !inside {
            return Err(Error::Input(
                "table knots must be strictly increasing with values inside (-lambda, lambda)"
                    .into(),
            ));
        }
        Ok(Homeomorphism {
            kind: PhiKind::Table(knots),
            lambda: lambda.clone(),
            lam,
        })
    }

    /// Parse a `--phi` style name: `arctan`, `linear`, or `table:u:t,u:t,...`.
    pub fn parse(name: &str, lambda: &Rational) -> Result<Homeomorphism> {
        match name {
            "arctan" => Ok(Homeomorphism::arctan(lambda)),
            "linear" | "linear-clamped" => Ok(Homeomorphism::linear_clamped(lambda)),
            _ => {
                let spec = name
                    .strip_prefix("table:")
                    .ok_or_else(|| Error::Input(format!("unknown homeomorphism {name:?}")))?;
                let knots = spec
                    .split(',')
                    .map(|kv| {
                        let (u, t) = kv.split_once(':')?;
                        Some((u.parse().ok()?, t.parse().ok()?))
                    })
                    .collect::<Option<Vec<(f64, f64)>>>()
                    .ok_or_else(|| Error::Input(format!("bad table {spec:?}")))?;
                Homeomorphism::table(lambda, knots)
            }
        }
    }

    pub fn kind(&self) -> &PhiKind {
        &self.kind
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn phi(&self, u: f64) -> f64 {
        let lam = self.lam;
        if u == f64::INFINITY {
            return lam;
        }
        if u == f64::NEG_INFINITY {
            return -lam;
        }
        match &self.kind {
            PhiKind::Arctan => lam * u.atan() / FRAC_PI_2,
            PhiKind::LinearClamped => u.clamp(-lam, lam),
            PhiKind::Table(k) => {
                let (u0, t0) = k[0];
                let (un, tn) = k[k.len() - 1];
                if u < u0 {
                    -lam + (t0 + lam) / (1.0 + (u0 - u))
                } else if u > un {
                    lam - (lam - tn) / (1.0 + (u - un))
                } else {
                    let i = k
                        .partition_point(|(x, _)| *x <= u)
                        .clamp(1, k.len().max(2) - 1);
                    if k.len() == 1 {
                        return t0;
                    }
                    let ((a, ta), (b, tb)) = (k[i - 1], k[i]);
                    ta + (tb - ta) * (u - a) / (b - a)
                }
            }
        }
    }

    pub fn xi(&self, t: f64) -> f64 {
        let lam = self.lam;
        if t >= lam {
            return f64::INFINITY;
        }
        if t <= -lam {
            return f64::NEG_INFINITY;
        }
        match &self.kind {
            PhiKind::Arctan => (t / lam * FRAC_PI_2).tan(),
            PhiKind::LinearClamped => t,
            PhiKind::Table(k) => {
                let (u0, t0) = k[0];
                let (un, tn) = k[k.len() - 1];
                if t < t0 {
                    u0 + 1.0 - (t0 + lam) / (t + lam)
                } else if t > tn {
                    un - 1.0 + (lam - tn) / (lam - t)
                } else {
                    if k.len() == 1 {
                        return u0;
                    }
                    let i = k.partition_point(|(_, x)| *x <= t).clamp(1, k.len() - 1);
                    let ((a, ta), (b, tb)) = (k[i - 1], k[i]);
                    a + (b - a) * (t - ta) / (tb - ta)
                }
            }
        }
    }

    /// `xi` of a rational level, exactly infinite at `+-lambda`.
    pub fn xi_q(&self, t: &Rational) -> f64 {
        if *t >= self.lambda {
            f64::INFINITY
        } else if *t <= -self.lambda.clone() {
            f64::NEG_INFINITY
        } else {
            self.xi(to_f64(t))
        }
    }

    /// `rho_s(t) = phi(s + xi(t))`.
    pub fn rho(&self, s: f64, t: f64) -> f64 {
        self.phi(s + self.xi(t))
    }

    /// `rho_s(t)` as a rational: exact for the clamped linear map, the
    /// value of the double computation otherwise.
    pub fn rho_q(&self, s: &Rational, t: &Rational) -> Rational {
        if s.is_zero() {
            return t.clone();
        }
        let lam = &self.lambda;
        if *t >= *lam || *t <= -lam.clone() {
            return t.clone();
        }
        match self.kind {
            PhiKind::LinearClamped => (s + t).clamp(-lam.clone(), lam.clone()),
            _ => Rational::from_float(self.rho(to_f64(s), to_f64(t))).expect("finite"),
        }
    }
}

/// Exact point of the strip.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StripPoint {
    pub x: Rational,
    pub y: Rational,
}

impl StripPoint {
    pub fn new(x: Rational, y: Rational) -> StripPoint {
        StripPoint { x, y }
    }

    pub fn from_i64(x: i64, y: i64) -> StripPoint {
        StripPoint::new(
            Rational::from_integer(x.into()),
            Rational::from_integer(y.into()),
        )
    }

    pub fn to_real(&self) -> RealPoint {
        RealPoint {
            x: to_f64(&self.x),
            y: to_f64(&self.y),
        }
    }
}

impl fmt::Display for StripPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_rational(&self.x),
            format_rational(&self.y)
        )
    }
}

/// Point with floating coordinates, as produced by flows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealPoint {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    S,
    L,
    A,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    SInterior,
    LInterior,
    AInterior,
    EdgeBottom,
    EdgeTop,
    EdgeLeft,
    EdgeRight,
    Corner,
    Boundary,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::SInterior => "S_interior",
            Region::LInterior => "L_interior",
            Region::AInterior => "A_interior",
            Region::EdgeBottom => "edge_bottom",
            Region::EdgeTop => "edge_top",
            Region::EdgeLeft => "edge_left",
            Region::EdgeRight => "edge_right",
            Region::Corner => "corner",
            Region::Boundary => "boundary",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a point sits: `p = T^k(q)` with `q` in the fundamental domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Placement {
    pub k: i32,
    pub cell: Cell,
    pub region: Region,
    pub local: StripPoint,
}

/// Strip geometry for a fixed bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strip {
    lambda: Rational,
}

impl Strip {
    pub fn new(lambda: &Rational) -> Strip {
        Strip {
            lambda: lambda.clone(),
        }
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn contains(&self, p: &StripPoint) -> bool {
        let s = &p.x + &p.y;
        let two = &self.lambda * Rational::from_integer(2.into());
        s <= two && s >= -two
    }

    pub fn on_boundary(&self, p: &StripPoint) -> bool {
        let s = &p.x + &p.y;
        let two = &self.lambda * Rational::from_integer(2.into());
        s == two || s == -two
    }

    /// `n`-fold glide reflection `(x, y) -> (-2L - y, 2L - x)`.
    pub fn t(&self, p: &StripPoint, n: i32) -> StripPoint {
        let four = &self.lambda * Rational::from_integer(4.into());
        let half = Rational::from_integer((n.div_euclid(2)).into());
        let shifted = StripPoint::new(&p.x - &four * &half, &p.y + &four * &half);
        if n.rem_euclid(2) == 1 {
            let two = &self.lambda * Rational::from_integer(2.into());
            StripPoint::new(-&two - &shifted.y, &two - &shifted.x)
        } else {
            shifted
        }
    }

    pub fn t_real(&self, p: RealPoint, n: i32) -> RealPoint {
        let lam = to_f64(&self.lambda);
        let half = n.div_euclid(2) as f64;
        let s = RealPoint {
            x: p.x - 4.0 * lam * half,
            y: p.y + 4.0 * lam * half,
        };
        if n.rem_euclid(2) == 1 {
            RealPoint {
                x: -2.0 * lam - s.y,
                y: 2.0 * lam - s.x,
            }
        } else {
            s
        }
    }

    /// Region of a point of the fundamental domain, if it is in it.
    fn local_region(&self, q: &StripPoint) -> Option<(Cell, Region)> {
        let l = &self.lambda;
        let nl = -l.clone();
        let two = l * Rational::from_integer(2.into());
        let (x, y) = (&q.x, &q.y);
        let s = x + y;
        if *x > nl && x <= l && *y >= nl && y < l {
            let region = match (x == l, *y == nl) {
                (true, true) => Region::Corner,
                (true, false) => Region::EdgeRight,
                (false, true) => Region::EdgeBottom,
                (false, false) => Region::SInterior,
            };
            return Some((Cell::S, region));
        }
        if *x <= nl && y < l && s >= -two.clone() {
            let region = if s == -two.clone() {
                Region::Boundary
            } else if *x == nl {
                Region::EdgeLeft
            } else {
                Region::LInterior
            };
            return Some((Cell::L, region));
        }
        if *x > nl && y >= l && s <= two {
            let region = if s == two {
                Region::Boundary
            } else if y == l {
                Region::EdgeTop
            } else {
                Region::AInterior
            };
            return Some((Cell::A, region));
        }
        None
    }

    pub fn classify(&self, p: &StripPoint) -> Result<Placement> {
        if !self.contains(p) {
            return Err(Error::OutsideStrip(
                format_rational(&p.x),
                format_rational(&p.y),
            ));
        }
        let d = &p.y - &p.x;
        let four = &self.lambda * Rational::from_integer(4.into());
        let two = &self.lambda * Rational::from_integer(2.into());
        let k0 = ((d + two) / four)
            .floor()
            .to_integer()
            .to_i32()
            .expect("degree fits in i32");
        for k in [k0, k0 - 1, k0 + 1] {
            let q = self.t(p, -k);
            if let Some((cell, region)) = self.local_region(&q) {
                return Ok(Placement {
                    k,
                    cell,
                    region,
                    local: q,
                });
            }
        }
        Err(Error::Internal(format!(
            "no fundamental-domain chart for {p}"
        )))
    }

    /// `v <= w` in the strip order: `x >= x'` and `y <= y'`.
    pub fn leq(v: &StripPoint, w: &StripPoint) -> bool {
        v.x >= w.x && v.y <= w.y
    }

    pub fn leq_real(v: RealPoint, w: RealPoint) -> bool {
        v.x >= w.x && v.y <= w.y
    }

    /// Strictly below in both coordinates.
    pub fn lt_strict(v: &StripPoint, w: &StripPoint) -> bool {
        v.x > w.x && v.y < w.y
    }

    /// Chart coordinates in which the flow is a translation.
    pub fn chart(&self, p: &StripPoint, phi: &Homeomorphism) -> Result<(Placement, f64, f64)> {
        let pl = self.classify(p)?;
        let two = &self.lambda * Rational::from_integer(2.into());
        let q = &pl.local;
        let (u, v) = match pl.cell {
            Cell::S => (phi.xi_q(&q.x), phi.xi_q(&q.y)),
            Cell::L => (phi.xi_q(&(-two.clone() - &q.x)), phi.xi_q(&q.y)),
            Cell::A => (phi.xi_q(&q.x), phi.xi_q(&(&two - &q.y))),
        };
        Ok((pl, u, v))
    }

    /// Flow of a point by `eps` (negative values run it backwards).
    pub fn flow_point(&self, p: &StripPoint, eps: f64, phi: &Homeomorphism) -> Result<RealPoint> {
        let (pl, u, v) = self.chart(p, phi)?;
        let lam2 = 2.0 * to_f64(&self.lambda);
        let local = match pl.cell {
            Cell::S => RealPoint {
                x: phi.phi(u - eps),
                y: phi.phi(v + eps),
            },
            Cell::L => RealPoint {
                x: -lam2 - phi.phi(u + eps),
                y: phi.phi(v + eps),
            },
            Cell::A => RealPoint {
                x: phi.phi(u - eps),
                y: lam2 - phi.phi(v - eps),
            },
        };
        Ok(self.t_real(local, pl.k))
    }

    /// Interleaving distance between two points: the sup-distance in chart
    /// coordinates for points of one cell, infinite otherwise.
    pub fn d_int(&self, v: &StripPoint, w: &StripPoint, phi: &Homeomorphism) -> Result<f64> {
        let (pv, v1, v2) = self.chart(v, phi)?;
        let (pw, w1, w2) = self.chart(w, phi)?;
        if pv.k != pw.k || pv.cell != pw.cell {
            return Ok(f64::INFINITY);
        }
        let gap = |a: f64, b: f64| {
            if a == b {
                0.0
            } else {
                (a - b).abs()
            }
        };
        let d = gap(v1, w1).max(gap(v2, w2));
        Ok(if d.is_nan() { f64::INFINITY } else { d })
    }

    /// Distance to the strip boundary: half the chart gap for interior
    /// points of `L` and `A` cells, zero on the boundary, infinite elsewhere.
    pub fn d_boundary(&self, v: &StripPoint, phi: &Homeomorphism) -> Result<f64> {
        let (pl, a, b) = self.chart(v, phi)?;
        Ok(match pl.region {
            Region::Boundary => 0.0,
            Region::LInterior | Region::AInterior => (b - a) / 2.0,
            _ => f64::INFINITY,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip2() -> Strip {
        Strip::new(&Rational::from_integer(2.into()))
    }

    fn pt(x: i64, y: i64) -> StripPoint {
        StripPoint::from_i64(x, y)
    }

    #[test]
    fn glide_reflection() {
        let s = strip2();
        assert_eq!(s.t(&pt(1, -1), 1), pt(-3, 3));
        assert_eq!(s.t(&pt(0, 0), 2), pt(-8, 8));
        let p = pt(-3, 1);
        assert_eq!(s.t(&s.t(&p, -1), 1), p);
        assert_eq!(s.t(&s.t(&p, 3), -3), p);
    }

    #[test]
    fn classification_examples() {
        let s = strip2();
        let c = |x, y| {
            let p = s.classify(&pt(x, y)).unwrap();
            (p.k, p.region)
        };
        assert_eq!(c(1, -1), (0, Region::SInterior));
        assert_eq!(c(2, -2), (0, Region::Corner));
        assert_eq!(c(-3, 0), (0, Region::LInterior));
        assert_eq!(c(-3, 3), (1, Region::SInterior));
        assert_eq!(c(0, 2), (0, Region::EdgeTop));
        assert_eq!(c(-2, 0), (0, Region::EdgeLeft));
        assert_eq!(c(2, 0), (0, Region::EdgeRight));
        assert_eq!(c(0, -2), (0, Region::EdgeBottom));
        assert_eq!(c(-2, 2), (1, Region::Corner));
        assert!(s.classify(&pt(3, 3)).is_err());
    }

    #[test]
    fn distance_examples() {
        let s = strip2();
        let phi = Homeomorphism::arctan(&Rational::from_integer(2.into()));
        assert_eq!(
            s.d_int(&pt(1, -1), &pt(-3, 0), &phi).unwrap(),
            f64::INFINITY
        );
        assert_eq!(s.d_boundary(&pt(1, -1), &phi).unwrap(), f64::INFINITY);
        assert!((s.d_boundary(&pt(-3, 0), &phi).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(s.d_boundary(&pt(-3, -1), &phi).unwrap(), 0.0);
        let d = s.d_int(&pt(0, 0), &pt(1, -1), &phi).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        assert_eq!(s.d_int(&pt(2, -2), &pt(2, -2), &phi).unwrap(), 0.0);
    }

    #[test]
    fn flow_fixes_corner_and_moves_l_points() {
        let s = strip2();
        let phi = Homeomorphism::arctan(&Rational::from_integer(2.into()));
        let c = s.flow_point(&pt(2, -2), 0.3, &phi).unwrap();
        assert_eq!((c.x, c.y), (2.0, -2.0));
        let p = s.flow_point(&pt(-3, 0), 0.3, &phi).unwrap();
        assert!((p.x - (-4.0 - phi.rho(0.3, -1.0))).abs() < 1e-12);
        assert!((p.y - phi.rho(0.3, 0.0)).abs() < 1e-12);
    }

    #[test]
    fn homeomorphisms_invert() {
        let l = Rational::from_integer(3.into());
        let table = Homeomorphism::table(&l, vec![(-1.0, -1.0), (0.0, 0.5), (2.0, 1.0)]).unwrap();
        for phi in [
            Homeomorphism::arctan(&l),
            Homeomorphism::linear_clamped(&l),
            table,
        ] {
            for t in [-2.9, -1.0, 0.0, 0.7, 2.5] {
                assert!((phi.phi(phi.xi(t)) - t).abs() < 1e-12, "{phi:?} at {t}");
            }
            assert_eq!(phi.phi(f64::INFINITY), 3.0);
            assert_eq!(phi.xi_q(&-l.clone()), f64::NEG_INFINITY);
        }
    }
}
