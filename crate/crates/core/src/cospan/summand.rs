use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::FilteredCospan;
use crate::algebra::{format_rational, parse_rational, Field, Rational, SparseMatrix};
use crate::complex::{FilteredComplex, Flavor, Generator};
use crate::error::{Error, Result};

/// Standard elementary summand. Variant order is the output sort order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Summand {
    /// Ascending pair: generator at `a` in degree k killed at `b > a`.
    Up {
        k: i32,
        a: Rational,
        b: Rational,
    },
    /// Descending pair: generator at `a` in degree k killed at `b < a`.
    Down {
        k: i32,
        a: Rational,
        b: Rational,
    },
    /// Ascending class born at `a` that dies in neither complex nor maps to the middle.
    UpInf {
        k: i32,
        a: Rational,
    },
    DownNegInf {
        k: i32,
        a: Rational,
    },
    /// Ascending class mapping isomorphically onto a middle class not hit from below.
    Ne {
        k: i32,
        a: Rational,
    },
    Se {
        k: i32,
        a: Rational,
    },
    /// Middle class hit from both sides, at the given up and down levels.
    Gt {
        k: i32,
        up: Rational,
        down: Rational,
    },
    /// Middle class hit from neither side.
    Box {
        k: i32,
    },
}

impl Summand {
    pub fn degree(&self) -> i32 {
        match self {
            Summand::Up { k, .. }
            | Summand::Down { k, .. }
            | Summand::UpInf { k, .. }
            | Summand::DownNegInf { k, .. }
            | Summand::Ne { k, .. }
            | Summand::Se { k, .. }
            | Summand::Gt { k, .. }
            | Summand::Box { k } => *k,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Summand::Up { .. } => "Up",
            Summand::Down { .. } => "Down",
            Summand::UpInf { .. } => "UpInf",
            Summand::DownNegInf { .. } => "DownNegInf",
            Summand::Ne { .. } => "NE",
            Summand::Se { .. } => "SE",
            Summand::Gt { .. } => "GT",
            Summand::Box { .. } => "Box",
        }
    }

    /// Same summand in another degree.
    pub fn with_degree(&self, k: i32) -> Summand {
        let mut s = self.clone();
        match &mut s {
            Summand::Up { k: d, .. }
            | Summand::Down { k: d, .. }
            | Summand::UpInf { k: d, .. }
            | Summand::DownNegInf { k: d, .. }
            | Summand::Ne { k: d, .. }
            | Summand::Se { k: d, .. }
            | Summand::Gt { k: d, .. }
            | Summand::Box { k: d } => *d = k,
        }
        s
    }

    /// Parameter constraints relative to the bound.
    pub fn check(&self, lambda: &Rational) -> Result<()> {
        let inside = |q: &Rational| q < lambda && *q > -lambda.clone();
        let ok = match self {
            Summand::Up { a, b, .. } => inside(a) && inside(b) && a < b,
            Summand::Down { a, b, .. } => inside(a) && inside(b) && a > b,
            Summand::UpInf { a, .. }
            | Summand::DownNegInf { a, .. }
            | Summand::Ne { a, .. }
            | Summand::Se { a, .. } => inside(a),
            Summand::Gt { up, down, .. } => inside(up) && inside(down),
            Summand::Box { .. } => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSummand(format!(
                "{self} violates its constraints for lambda {}",
                format_rational(lambda)
            )))
        }
    }

    /// Compact notation: arrows for the kind, levels as sub/superscripts.
    pub fn notation(&self) -> String {
        let f = format_rational;
        match self {
            Summand::Up { k, a, b } => format!("(↑_{{{}}}^{{{}}})_{k}", f(a), f(b)),
            Summand::Down { k, a, b } => format!("(↓^{{{}}}_{{{}}})_{k}", f(a), f(b)),
            Summand::UpInf { k, a } => format!("(↑_{{{}}}^{{∞}})_{k}", f(a)),
            Summand::DownNegInf { k, a } => format!("(↓^{{{}}}_{{-∞}})_{k}", f(a)),
            Summand::Ne { k, a } => format!("(↗_{{{}}})_{k}", f(a)),
            Summand::Se { k, a } => format!("(↘^{{{}}})_{k}", f(a)),
            Summand::Gt { k, up, down } => format!("(>_{{{}}}^{{{}}})_{k}", f(up), f(down)),
            Summand::Box { k } => format!("□_{k}"),
        }
    }

    /// Single-token form used in diagram records.
    pub fn tag(&self) -> String {
        self.to_string().replace(' ', ",")
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = format_rational;
        match self {
            Summand::Up { k, a, b } | Summand::Down { k, a, b } => {
                write!(f, "{} k={k} a={} b={}", self.kind(), r(a), r(b))
            }
            Summand::UpInf { k, a }
            | Summand::DownNegInf { k, a }
            | Summand::Ne { k, a }
            | Summand::Se { k, a } => write!(f, "{} k={k} a={}", self.kind(), r(a)),
            Summand::Gt { k, up, down } => write!(f, "GT k={k} up={} down={}", r(up), r(down)),
            Summand::Box { k } => write!(f, "Box k={k}"),
        }
    }
}

impl FromStr for Summand {
    type Err = Error;

    /// Parses the `Display` form, with spaces or commas between fields.
    fn from_str(s: &str) -> Result<Summand> {
        let bad = |m: &str| Error::Input(format!("bad summand {s:?}: {m}"));
        let mut parts = s.split([' ', ',']).filter(|p| !p.is_empty());
        let kind = parts.next().ok_or_else(|| bad("empty"))?;
        let mut fields = BTreeMap::new();
        for p in parts {
            let (key, val) = p.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            fields.insert(key, val);
        }
        let k: i32 = fields
            .get("k")
            .ok_or_else(|| bad("missing k"))?
            .parse()
            .map_err(|_| bad("k is not an integer"))?;
        let q = |name: &str| -> Result<Rational> {
            parse_rational(
                fields
                    .get(name)
                    .ok_or_else(|| bad(&format!("missing {name}")))?,
            )
        };
        Ok(match kind {
            "Up" => Summand::Up {
                k,
                a: q("a")?,
                b: q("b")?,
            },
            "Down" => Summand::Down {
                k,
                a: q("a")?,
                b: q("b")?,
            },
            "UpInf" => Summand::UpInf { k, a: q("a")? },
            "DownNegInf" => Summand::DownNegInf { k, a: q("a")? },
            "NE" => Summand::Ne { k, a: q("a")? },
            "SE" => Summand::Se { k, a: q("a")? },
            "GT" => Summand::Gt {
                k,
                up: q("up")?,
                down: q("down")?,
            },
            "Box" => Summand::Box { k },
            _ => return Err(bad("unknown kind")),
        })
    }
}

fn one_gen(
    flavor: Flavor,
    field: Field,
    lambda: &Rational,
    k: i32,
    name: &str,
    level: Rational,
) -> FilteredComplex {
    let gens = BTreeMap::from([(k, vec![Generator::new(name, level)])]);
    FilteredComplex::from_parts(flavor, field, lambda.clone(), gens, BTreeMap::new())
        .expect("one generator")
}

fn pair(
    flavor: Flavor,
    field: Field,
    lambda: &Rational,
    k: i32,
    a: &Rational,
    b: &Rational,
) -> FilteredComplex {
    let gens = BTreeMap::from([
        (k, vec![Generator::new("x", a.clone())]),
        (k + 1, vec![Generator::new("y", b.clone())]),
    ]);
    let bd = BTreeMap::from([(k + 1, SparseMatrix::identity(field, 1))]);
    FilteredComplex::from_parts(flavor, field, lambda.clone(), gens, bd).expect("pair")
}

/// The literal cospan of a standard elementary summand.
pub fn standard_summand(s: &Summand, field: Field, lambda: &Rational) -> Result<FilteredCospan> {
    s.check(lambda)?;
    let zero = FilteredCospan::zero(field, lambda.clone());
    let up0 = zero.up().clone();
    let down0 = zero.down().clone();
    let mid0 = zero.mid().clone();
    let id = |k: i32| BTreeMap::from([(k, SparseMatrix::identity(field, 1))]);
    let none = BTreeMap::new;
    let mid_k = |k: i32| {
        let gens = BTreeMap::from([(k, vec![Generator::new("z", Rational::default())])]);
        FilteredComplex::from_parts(
            Flavor::Unfiltered,
            field,
            lambda.clone(),
            gens,
            BTreeMap::new(),
        )
        .expect("one generator")
    };
    let up = |k, a: &Rational| one_gen(Flavor::Ascending, field, lambda, k, "x", a.clone());
    let down = |k, a: &Rational| one_gen(Flavor::Descending, field, lambda, k, "y", a.clone());
    match s {
        Summand::Up { k, a, b } => FilteredCospan::new(
            pair(Flavor::Ascending, field, lambda, *k, a, b),
            down0,
            mid0,
            none(),
            none(),
        ),
        Summand::Down { k, a, b } => FilteredCospan::new(
            up0,
            pair(Flavor::Descending, field, lambda, *k, a, b),
            mid0,
            none(),
            none(),
        ),
        Summand::UpInf { k, a } => FilteredCospan::new(up(*k, a), down0, mid0, none(), none()),
        Summand::DownNegInf { k, a } => FilteredCospan::new(up0, down(*k, a), mid0, none(), none()),
        Summand::Ne { k, a } => FilteredCospan::new(up(*k, a), down0, mid_k(*k), id(*k), none()),
        Summand::Se { k, a } => FilteredCospan::new(up0, down(*k, a), mid_k(*k), none(), id(*k)),
        Summand::Gt { k, up: u, down: d } => {
            FilteredCospan::new(up(*k, u), down(*k, d), mid_k(*k), id(*k), id(*k))
        }
        Summand::Box { k } => FilteredCospan::new(up0, down0, mid_k(*k), none(), none()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn display_round_trip() {
        let all = [
            Summand::Up {
                k: 1,
                a: q(0),
                b: q(1),
            },
            Summand::Down {
                k: 0,
                a: q(1),
                b: q(0),
            },
            Summand::UpInf { k: 0, a: q(-1) },
            Summand::DownNegInf { k: 2, a: q(1) },
            Summand::Ne { k: 0, a: q(0) },
            Summand::Se { k: 1, a: q(-1) },
            Summand::Gt {
                k: 0,
                up: q(-1),
                down: q(1),
            },
            Summand::Box { k: 1 },
        ];
        for s in all {
            assert_eq!(s.to_string().parse::<Summand>().unwrap(), s);
            assert_eq!(s.tag().parse::<Summand>().unwrap(), s);
        }
        assert_eq!(
            Summand::Gt {
                k: 0,
                up: q(-1),
                down: q(1)
            }
            .to_string(),
            "GT k=0 up=-1 down=1"
        );
    }

    #[test]
    fn constraints() {
        let l = q(2);
        assert!(Summand::Up {
            k: 0,
            a: q(1),
            b: q(1)
        }
        .check(&l)
        .is_err());
        assert!(Summand::Up {
            k: 0,
            a: q(-1),
            b: q(2)
        }
        .check(&l)
        .is_err());
        assert!(Summand::Down {
            k: 0,
            a: q(1),
            b: q(0)
        }
        .check(&l)
        .is_ok());
        assert!(Summand::Gt {
            k: 0,
            up: q(1),
            down: q(-1)
        }
        .check(&l)
        .is_ok());
    }

    #[test]
    fn literal_shapes() {
        let f = Field::Prime(2);
        let b = standard_summand(&Summand::Box { k: 1 }, f, &q(2)).unwrap();
        assert_eq!(
            (b.mid().dim(1), b.up().total_dim(), b.down().total_dim()),
            (1, 0, 0)
        );
        let u = standard_summand(
            &Summand::Up {
                k: 0,
                a: q(-1),
                b: q(1),
            },
            f,
            &q(2),
        )
        .unwrap();
        assert_eq!(
            (u.up().dim(0), u.up().dim(1), u.mid().total_dim()),
            (1, 1, 0)
        );
        let g = standard_summand(
            &Summand::Gt {
                k: 0,
                up: q(1),
                down: q(-1),
            },
            f,
            &q(2),
        )
        .unwrap();
        assert!(g.validate().is_empty());
        assert_eq!(g.psi_up(0).into_owned(), SparseMatrix::identity(f, 1));
    }
}
