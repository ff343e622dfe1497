//! Exact coefficient rings: the integers, the rationals, and prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Scalars are stored as exact rationals; the ambient [`Ring`] fixes their
/// interpretation (prime-field values are kept reduced to `[0, p)`).
pub type Scalar = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("unknown ring `{0}`, expected Z, Q, or Fp:<prime>")]
    Unknown(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// The coefficient ring for matrices, coefficient systems, and homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    /// Parses `Z`, `Q`, or `Fp:<p>` (as used by the CLI `--ring` flag).
    pub fn parse(s: &str) -> Result<Ring, RingError> {
        match s {
            "Z" => Ok(Ring::Integers),
            "Q" => Ok(Ring::Rationals),
            _ => {
                if let Some(p) = s.strip_prefix("Fp:") {
                    let p: u64 = p.parse().map_err(|_| RingError::Unknown(s.to_string()))?;
                    Ring::prime_field(p)
                } else {
                    Err(RingError::Unknown(s.to_string()))
                }
            }
        }
    }

    pub fn prime_field(p: u64) -> Result<Ring, RingError> {
        if is_prime(p) {
            Ok(Ring::PrimeField(p))
        } else {
            Err(RingError::NotPrime(p))
        }
    }

    /// True when ranks are computed by field elimination (no torsion).
    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.normalize(Scalar::from(BigInt::from(n)))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        self.normalize(Scalar::from(n.clone()))
    }

    /// Canonical representative of `x` in this ring. Over a prime field the
    /// value is reduced to an integer in `[0, p)`; over Z and Q it is already
    /// canonical (rationals auto-reduce).
    pub fn normalize(&self, x: Scalar) -> Scalar {
        match self {
            Ring::Integers | Ring::Rationals => x,
            Ring::PrimeField(p) => {
                let p = BigInt::from(*p);
                let num = x.numer().mod_floor(&p);
                let den = x.denom().mod_floor(&p);
                if den.is_one() {
                    return Scalar::from(num);
                }
                let inv = mod_inverse(&den, &p)
                    .expect("prime-field scalar with denominator divisible by p");
                Scalar::from((num * inv).mod_floor(&p))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.normalize(-a)
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        self.normalize(a.clone()).is_zero()
    }

    /// Multiplicative inverse, when `a` is a unit of the ring.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match self {
            Ring::Integers => {
                let a = self.normalize(a.clone());
                if a.is_integer() && a.numer().abs().is_one() {
                    Some(a)
                } else {
                    None
                }
            }
            Ring::Rationals => {
                if a.is_zero() {
                    None
                } else {
                    Some(a.recip())
                }
            }
            Ring::PrimeField(_) => {
                let a = self.normalize(a.clone());
                if a.is_zero() {
                    None
                } else {
                    Some(self.normalize(a.recip()))
                }
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        match self {
            Ring::Integers => {
                let q = a / b;
                q.is_integer().then_some(q)
            }
            _ => self.inv(b).map(|i| self.mul(a, &i)),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(p);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(p))
    } else {
        None
    }
}

impl std::fmt::Display for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ring::Integers => s.serialize_str("Z"),
            Ring::Rationals => s.serialize_str("Q"),
            Ring::PrimeField(p) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("Fp", p)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Ring, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Name(String),
            Fp { #[serde(rename = "Fp")] p: u64 },
        }
        match Repr::deserialize(d)? {
            Repr::Name(s) => Ring::parse(&s).map_err(D::Error::custom),
            Repr::Fp { p } => Ring::prime_field(p).map_err(D::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        assert_eq!(Ring::parse("Z"), Ok(Ring::Integers));
        assert_eq!(Ring::parse("Q"), Ok(Ring::Rationals));
        assert_eq!(Ring::parse("Fp:7"), Ok(Ring::PrimeField(7)));
        assert_eq!(Ring::parse("Fp:6"), Err(RingError::NotPrime(6)));
        assert!(Ring::parse("R").is_err());
    }

    #[test]
    fn prime_field_reduction() {
        let f5 = Ring::PrimeField(5);
        assert_eq!(f5.from_i64(-3), f5.from_i64(2));
        assert_eq!(f5.from_i64(12), f5.from_i64(2));
        // 1/2 = 3 mod 5
        let half = Scalar::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f5.normalize(half), f5.from_i64(3));
    }

    #[test]
    fn units() {
        assert_eq!(Ring::Integers.inv(&Ring::Integers.from_i64(-1)), Some(Ring::Integers.from_i64(-1)));
        assert_eq!(Ring::Integers.inv(&Ring::Integers.from_i64(2)), None);
        assert_eq!(Ring::Rationals.inv(&Ring::Rationals.from_i64(2)), Some(Scalar::new(BigInt::from(1), BigInt::from(2))));
        let f3 = Ring::PrimeField(3);
        assert_eq!(f3.inv(&f3.from_i64(2)), Some(f3.from_i64(2)));
        assert_eq!(f3.inv(&f3.from_i64(3)), None);
    }

    #[test]
    fn json_forms() {
        assert_eq!(serde_json::to_string(&Ring::Integers).unwrap(), "\"Z\"");
        assert_eq!(serde_json::to_string(&Ring::PrimeField(5)).unwrap(), "{\"Fp\":5}");
        let r: Ring = serde_json::from_str("{\"Fp\":5}").unwrap();
        assert_eq!(r, Ring::PrimeField(5));
        let r: Ring = serde_json::from_str("\"Q\"").unwrap();
        assert_eq!(r, Ring::Rationals);
    }
}
