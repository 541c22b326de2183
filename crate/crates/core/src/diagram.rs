//! Persistence diagrams on the strip, level-set barcodes, and the bottleneck
//! distance relative to the strip boundary.

use std::fmt;

use crate::algebra::{format_rational, Rational};
use crate::cospan::Summand;
use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::strip::{Homeomorphism, Strip, StripPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramPoint {
    pub point: StripPoint,
    pub source: Summand,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub points: Vec<DiagramPoint>,
    pub lambda: Rational,
}

fn two(lambda: &Rational) -> Rational {
    lambda * Rational::from_integer(2.into())
}

/// Point of the strip indexing the block of a summand.
pub fn summand_point(s: &Summand, lambda: &Rational) -> StripPoint {
    let strip = Strip::new(lambda);
    let l = lambda.clone();
    let (n, x, y) = match s {
        Summand::Up { k, a, b } => (-k - 1, -two(lambda) - a, b.clone()),
        Summand::UpInf { k, a } => (-k, l, a.clone()),
        Summand::Ne { k, a } => (-k, -l, a.clone()),
        Summand::Down { k, a, b } => (-k - 1, b.clone(), two(lambda) - a),
        Summand::DownNegInf { k, a } => (-k, a.clone(), -l),
        Summand::Se { k, a } => (-k, a.clone(), l),
        Summand::Gt { k, up, down } => (-k, down.clone(), up.clone()),
        Summand::Box { k } => (-k + 1, l.clone(), -l),
    };
    strip.t(&StripPoint::new(x, y), n)
}

impl Diagram {
    pub fn from_summands(summands: &[Summand], lambda: &Rational) -> Diagram {
        Diagram {
            points: summands
                .iter()
                .map(|s| DiagramPoint {
                    point: summand_point(s, lambda),
                    source: s.clone(),
                })
                .collect(),
            lambda: lambda.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn diagram_of(d: &Decomposition, lambda: &Rational) -> Diagram {
    Diagram::from_summands(&d.summands, lambda)
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strip = Strip::new(&self.lambda);
        for p in &self.points {
            let pl = strip.classify(&p.point).map_err(|_| fmt::Error)?;
            writeln!(
                f,
                "point k={} region={} x={} y={} from={}",
                pl.k,
                pl.region,
                format_rational(&p.point.x),
                format_rational(&p.point.y),
                p.source.tag()
            )?;
        }
        Ok(())
    }
}

/// One level-set interval. Endpoint flags are data only.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bar {
    pub degree: i32,
    pub left: Rational,
    pub left_closed: bool,
    pub right: Rational,
    pub right_closed: bool,
}

impl Bar {
    fn new(
        degree: i32,
        left_closed: bool,
        left: Rational,
        right: Rational,
        right_closed: bool,
    ) -> Bar {
        Bar {
            degree,
            left,
            left_closed,
            right,
            right_closed,
        }
    }

    /// Bracket notation, e.g. `[0,1)`.
    pub fn interval(&self) -> String {
        format!(
            "{}{},{}{}",
            if self.left_closed { '[' } else { '(' },
            format_rational(&self.left),
            format_rational(&self.right),
            if self.right_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bar k={} {}", self.degree, self.interval())
    }
}

pub fn summand_bar(s: &Summand, lambda: &Rational) -> Bar {
    let l = lambda.clone();
    match s.clone() {
        Summand::Up { k, a, b } => Bar::new(k, true, a, b, false),
        Summand::UpInf { k, a } => Bar::new(k, true, a, l, false),
        Summand::Ne { k, a } => Bar::new(k - 1, false, -l, a, false),
        Summand::Down { k, a, b } => Bar::new(k, false, b, a, true),
        Summand::DownNegInf { k, a } => Bar::new(k, false, -l, a, true),
        Summand::Se { k, a } => Bar::new(k - 1, false, a, l, false),
        Summand::Gt { k, up, down } => {
            if up <= down {
                Bar::new(k, true, up, down, true)
            } else {
                Bar::new(k - 1, false, down, up, false)
            }
        }
        Summand::Box { k } => Bar::new(k - 1, false, -l.clone(), l, false),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Barcode {
    pub bars: Vec<Bar>,
}

impl Barcode {
    pub fn from_summands(summands: &[Summand], lambda: &Rational) -> Barcode {
        let mut bars: Vec<Bar> = summands.iter().map(|s| summand_bar(s, lambda)).collect();
        bars.sort();
        Barcode { bars }
    }
}

pub fn barcode_of(d: &Decomposition, lambda: &Rational) -> Barcode {
    Barcode::from_summands(&d.summands, lambda)
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bars {
            writeln!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Partial matching between two diagrams; unmatched points go to the boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub unmatched1: Vec<usize>,
    pub unmatched2: Vec<usize>,
    pub cost: f64,
}

struct Costs {
    pair: Vec<Vec<f64>>,
    bd1: Vec<f64>,
    bd2: Vec<f64>,
}

fn costs(d1: &Diagram, d2: &Diagram, phi: &Homeomorphism) -> Result<Costs> {
    if d1.lambda != d2.lambda {
        return Err(Error::LambdaMismatch(
            format_rational(&d1.lambda),
            format_rational(&d2.lambda),
        ));
    }
    let strip = Strip::new(&d1.lambda);
    let pair = d1
        .points
        .iter()
        .map(|p| {
            d2.points
                .iter()
                .map(|q| strip.d_int(&p.point, &q.point, phi))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let bd = |d: &Diagram| {
        d.points
            .iter()
            .map(|p| strip.d_boundary(&p.point, phi))
            .collect::<Result<Vec<_>>>()
    };
    Ok(Costs {
        pair,
        bd1: bd(d1)?,
        bd2: bd(d2)?,
    })
}

fn candidates(c: &Costs) -> Vec<f64> {
    let mut t: Vec<f64> = c
        .pair
        .iter()
        .flatten()
        .chain(&c.bd1)
        .chain(&c.bd2)
        .copied()
        .filter(|x| x.is_finite())
        .collect();
    t.push(0.0);
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

/// Maximum bipartite matching by augmenting paths. Returns the partner of
/// each left vertex.
fn max_matching(adj: &[Vec<usize>], n_right: usize) -> Vec<Option<usize>> {
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        right: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if right[v].is_none_or(|w| augment(w, adj, seen, right)) {
                    right[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut right = vec![None; n_right];
    for u in 0..adj.len() {
        let mut seen = vec![false; n_right];
        augment(u, adj, &mut seen, &mut right);
    }
    let mut left = vec![None; adj.len()];
    for (v, u) in right.iter().enumerate() {
        if let Some(u) = u {
            left[*u] = Some(v);
        }
    }
    left
}

/// Perfect matching on points plus boundary proxies: left = D1 then proxies
/// of D2, right = D2 then proxies of D1.
fn symmetric_at(c: &Costs, t: f64) -> Option<Matching> {
    let (n1, n2) = (c.bd1.len(), c.bd2.len());
    let mut adj = vec![Vec::new(); n1 + n2];
    for i in 0..n1 {
        for j in 0..n2 {
            if c.pair[i][j] <= t {
                adj[i].push(j);
            }
        }
        if c.bd1[i] <= t {
            adj[i].push(n2 + i);
        }
    }
    for j in 0..n2 {
        if c.bd2[j] <= t {
            adj[n1 + j].push(j);
        }
        adj[n1 + j].extend(n2..n2 + n1);
    }
    let m = max_matching(&adj, n1 + n2);
    if m.iter().any(Option::is_none) {
        return None;
    }
    let mut pairs = Vec::new();
    let mut unmatched1 = Vec::new();
    let mut unmatched2 = Vec::new();
    for (i, v) in m.iter().take(n1).enumerate() {
        match v {
            Some(j) if *j < n2 => pairs.push((i, *j)),
            _ => unmatched1.push(i),
        }
    }
    for (j, v) in m.iter().skip(n1).enumerate() {
        if v.is_some_and(|r| r < n2) {
            unmatched2.push(j);
        }
    }
    let cost = pairs
        .iter()
        .map(|&(i, j)| c.pair[i][j])
        .chain(unmatched1.iter().map(|&i| c.bd1[i]))
        .chain(unmatched2.iter().map(|&j| c.bd2[j]))
        .fold(0.0, f64::max);
    Some(Matching {
        pairs,
        unmatched1,
        unmatched2,
        cost,
    })
}

fn embeds_at(c: &Costs, t: f64) -> bool {
    let (n1, n2) = (c.bd1.len(), c.bd2.len());
    let adj: Vec<Vec<usize>> = (0..n1)
        .map(|i| {
            let mut a: Vec<usize> = (0..n2).filter(|&j| c.pair[i][j] <= t).collect();
            if c.bd1[i] <= t {
                a.push(n2 + i);
            }
            a
        })
        .collect();
    max_matching(&adj, n1 + n2).iter().all(Option::is_some)
}

/// Least threshold at which `feasible` holds, by binary search over the
/// sorted candidates.
fn least_feasible(cands: &[f64], feasible: impl Fn(f64) -> bool) -> Option<f64> {
    let (mut lo, mut hi) = (0, cands.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cands.get(lo).copied()
}

/// Bottleneck distance relative to the strip boundary, with an optimal matching.
pub fn bottleneck(d1: &Diagram, d2: &Diagram, phi: &Homeomorphism) -> Result<(f64, Matching)> {
    let c = costs(d1, d2, phi)?;
    let cands = candidates(&c);
    match least_feasible(&cands, |t| symmetric_at(&c, t).is_some()) {
        Some(t) => {
            let m = symmetric_at(&c, t).expect("feasible threshold");
            Ok((m.cost, m))
        }
        None => Ok((
            f64::INFINITY,
            Matching {
                pairs: Vec::new(),
                unmatched1: (0..d1.len()).collect(),
                unmatched2: (0..d2.len()).collect(),
                cost: f64::INFINITY,
            },
        )),
    }
}

/// Least `eps` admitting an `eps`-embedding of `d1` into `d2` relative to the boundary.
pub fn hemidistance(d1: &Diagram, d2: &Diagram, phi: &Homeomorphism) -> Result<f64> {
    let c = costs(d1, d2, phi)?;
    Ok(least_feasible(&candidates(&c), |t| embeds_at(&c, t)).unwrap_or(f64::INFINITY))
}
