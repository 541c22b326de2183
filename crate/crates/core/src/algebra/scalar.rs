use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Coefficient field: a prime field `F_p` with `p < 2^31`, or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Prime(u32),
    Rational,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidField(format!(
                "{p} is not a prime below 2^31"
            )));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Mod {
                value: v.rem_euclid(p as i64) as u32,
                p,
            },
            Field::Rational => Scalar::Rat(Rational::from_integer(BigInt::from(v))),
        }
    }

    /// Image of a rational number; `None` when the denominator vanishes mod p.
    pub fn from_rational(self, q: &Rational) -> Option<Scalar> {
        match self {
            Field::Rational => Some(Scalar::Rat(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = x % &pb;
                    let r = if r.is_negative() { r + &pb } else { r };
                    r.try_into().expect("residue fits in u32")
                };
                let num = self.from_i64(reduce(q.numer()) as i64);
                let den = self.from_i64(reduce(q.denom()) as i64);
                den.inv().map(|d| &num * &d)
            }
        }
    }

    /// Parse a scalar as printed by `Display` (an integer, or `p/q` over the rationals).
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
            .ok_or_else(|| Error::Input(format!("scalar {s} is not defined over {self}")))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F{p}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        let p = s
            .strip_prefix('F')
            .and_then(|rest| rest.parse::<u32>().ok())
            .ok_or_else(|| Error::InvalidField(format!("expected F<p> or Q, got {s:?}")))?;
        Field::prime(p)
    }
}

/// Element of a [`Field`]. Arithmetic between elements of different fields
/// panics; containers check field agreement when they are built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u32, p: u32 },
    Rat(Rational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod { p, .. } => Field::Prime(*p),
            Scalar::Rat(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(q) => q.is_one(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod { value, p } => {
                // Fermat: a^(p-2)
                let (mut base, mut exp, mut acc) = (*value as u64, *p as u64 - 2, 1u64);
                let m = *p as u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Scalar::Mod {
                    value: acc as u32,
                    p: *p,
                }
            }
            Scalar::Rat(q) => Scalar::Rat(q.recip()),
        })
    }

    /// Sign used when an integer `(-1)^n` multiplies a scalar.
    pub fn signed(&self, negative: bool) -> Scalar {
        if negative {
            -self
        } else {
            self.clone()
        }
    }
}

fn same_prime(a: u32, b: u32) -> u32 {
    assert_eq!(a, b, "field mismatch: F{a} vs F{b}");
    a
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Mod {
                    value: ((*a as u64 + *b as u64) % p as u64) as u32,
                    p,
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => panic!("field mismatch: {} vs {}", self.field(), rhs.field()),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Mod {
                    value: ((*a as u64 * *b as u64) % p as u64) as u32,
                    p,
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => panic!("field mismatch: {} vs {}", self.field(), rhs.field()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, p } => Scalar::Mod {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
            Scalar::Rat(q) => Scalar::Rat(-q),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rat(q) => f.write_str(&format_rational(q)),
        }
    }
}

/// Reduced `p/q`, or a bare integer when `q = 1`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `p/q`, an integer, or a finite decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Input(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(int_part * &scale + frac_part, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}
