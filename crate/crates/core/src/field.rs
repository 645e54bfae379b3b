//! Exact scalars over prime fields and the rationals.
//!
//! A [`Scalar`] carries its own characteristic so that mixing elements of
//! different fields is detectable. Arithmetic between scalars of different
//! fields is a programming error and panics; user-facing entry points
//! validate membership with [`FieldSpec::contains`] first.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest prime characteristic accepted.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

/// The base field: the rationals when `characteristic == 0`, otherwise `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    characteristic: u64,
}

impl FieldSpec {
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 || (characteristic <= MAX_CHARACTERISTIC && is_prime(characteristic))
        {
            Ok(Self { characteristic })
        } else {
            Err(Error::InvalidCharacteristic(characteristic))
        }
    }

    pub fn rationals() -> Self {
        Self { characteristic: 0 }
    }

    /// `F_p`; panics if `p` is not an admissible prime.
    pub fn prime(p: u64) -> Self {
        Self::new(p).expect("admissible prime characteristic")
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic != 0
    }

    /// Number of elements, if finite.
    pub fn order(&self) -> Option<u64> {
        self.is_finite().then_some(self.characteristic)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            p => Scalar::Residue {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rational(BigRational::from_integer(n.clone())),
            p => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar::Residue {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: p,
                }
            }
        }
    }

    /// `num / den`, failing when `den` vanishes in this field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::Parse(format!(
                "denominator {den} is zero in characteristic {}",
                self.characteristic
            )));
        }
        Ok(self.from_bigint(num).mul_ref(&d.inv()))
    }

    /// Parses `"a"` or `"a/b"` with integer `a`, `b`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let parse_int = |s: &str| -> Result<BigInt> {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
        };
        match text.split_once('/') {
            Some((n, d)) => self.from_ratio(&parse_int(n)?, &parse_int(d)?),
            None => Ok(self.from_bigint(&parse_int(text)?)),
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        s.characteristic() == self.characteristic
    }

    /// All elements of a finite field in residue order; `None` over the rationals.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        let p = self.order()?;
        Some(
            (0..p)
                .map(|value| Scalar::Residue { value, modulus: p })
                .collect(),
        )
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `F_p` or of `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Residue { value: u64, modulus: u64 },
    Rational(BigRational),
}

impl Scalar {
    pub fn characteristic(&self) -> u64 {
        match self {
            Scalar::Residue { modulus, .. } => *modulus,
            Scalar::Rational(_) => 0,
        }
    }

    pub fn field(&self) -> FieldSpec {
        FieldSpec {
            characteristic: self.characteristic(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Residue { value, .. } => *value == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Residue { value, .. } => *value == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    fn mismatch(a: &Scalar, b: &Scalar) -> ! {
        panic!(
            "scalar arithmetic across characteristics {} and {}",
            a.characteristic(),
            b.characteristic()
        )
    }

    pub fn add_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (
                Scalar::Residue {
                    value: a,
                    modulus: p,
                },
                Scalar::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Scalar::Residue {
                value: (a + b) % p,
                modulus: *p,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => Self::mismatch(self, other),
        }
    }

    pub fn sub_ref(&self, other: &Scalar) -> Scalar {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (
                Scalar::Residue {
                    value: a,
                    modulus: p,
                },
                Scalar::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Scalar::Residue {
                value: (a * b) % p,
                modulus: *p,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => Self::mismatch(self, other),
        }
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
            Scalar::Rational(q) => Scalar::Rational(-q),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Residue { value, modulus } => {
                // Fermat: a^(p-2)
                let mut result = 1u64;
                let mut base = *value;
                let mut exp = modulus - 2;
                while exp > 0 {
                    if exp & 1 == 1 {
                        result = result * base % modulus;
                    }
                    base = base * base % modulus;
                    exp >>= 1;
                }
                Scalar::Residue {
                    value: result,
                    modulus: *modulus,
                }
            }
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
        }
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = self.field().one();
        for _ in 0..exp {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

impl fmt::Display for Scalar {
    /// Canonical residue for `F_p`; `n` or `n/d` in lowest terms for `Q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Residue { value, .. } => write!(f, "{value}"),
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// Total order used for canonical sorting: by characteristic, then by
    /// residue or rational value.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (
                Scalar::Residue {
                    value: a,
                    modulus: p,
                },
                Scalar::Residue {
                    value: b,
                    modulus: q,
                },
            ) => p.cmp(q).then(a.cmp(b)),
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Rational(_), Scalar::Residue { .. }) => Ordering::Less,
            (Scalar::Residue { .. }, Scalar::Rational(_)) => Ordering::Greater,
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$impl_fn(rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$impl_fn(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_characteristic() {
        assert!(FieldSpec::new(4).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(7).is_ok());
        assert!(FieldSpec::new(0).is_ok());
        assert!(FieldSpec::new((1u64 << 31) + 11).is_err());
    }

    #[test]
    fn residue_arithmetic() {
        let f = FieldSpec::prime(5);
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(&a + &b, f.from_i64(2));
        assert_eq!(&a * &b, f.from_i64(2));
        assert_eq!(&a - &b, f.from_i64(4));
        assert_eq!(a.inv(), f.from_i64(2));
        assert_eq!(f.from_i64(-1), f.from_i64(4));
    }

    #[test]
    fn parse_and_display() {
        let q = FieldSpec::rationals();
        let x = q.parse("4/6").unwrap();
        assert_eq!(x.to_string(), "2/3");
        assert_eq!(q.parse("-3").unwrap().to_string(), "-3");

        let f3 = FieldSpec::prime(3);
        assert_eq!(f3.parse("1/2").unwrap().to_string(), "2");
        assert!(f3.parse("1/3").is_err());
        assert!(q.parse("x").is_err());
    }

    #[test]
    fn inverse_roundtrip_mod_p() {
        let f = FieldSpec::prime(101);
        for n in 1..101 {
            let a = f.from_i64(n);
            assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    #[should_panic(expected = "across characteristics")]
    fn mixed_arithmetic_panics() {
        let _ = FieldSpec::prime(2).one() + FieldSpec::prime(3).one();
    }
}
