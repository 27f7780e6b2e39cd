//! Exact coefficient arithmetic over odd prime fields and the rationals.
//!
//! A [`Field`] is a small copyable context; [`Scalar`] values are always
//! kept in canonical form (least non-negative residue, or a reduced fraction
//! with positive denominator) so that equality and hashing are structural.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldSpec {
    PrimeField(u64),
    Rationals,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::PrimeField(p) => write!(f, "F_{p}"),
            FieldSpec::Rationals => f.write_str("Q"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Mod(u64),
    Rat(BigRational),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Rat(r) => write!(f, "{r}"),
        }
    }
}

impl Scalar {
    /// The residue, if this is a prime-field element.
    pub fn as_residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod(v) => Some(*v),
            Scalar::Rat(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Mod(_) => None,
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Arithmetic context for one coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    spec: FieldSpec,
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        if let FieldSpec::PrimeField(p) = spec {
            if p == 2 {
                return Err(Error::EvenCharacteristic(p));
            }
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if p >= 1 << 62 {
                return Err(Error::InvalidInput(format!("prime {p} too large")));
            }
        }
        Ok(Self { spec })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(FieldSpec::PrimeField(p))
    }

    pub fn rationals() -> Self {
        Self {
            spec: FieldSpec::Rationals,
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// The characteristic; 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self.spec {
            FieldSpec::PrimeField(p) => p,
            FieldSpec::Rationals => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self.spec {
            FieldSpec::PrimeField(_) => Scalar::Mod(0),
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_integer(1)
    }

    pub fn from_integer(&self, n: i64) -> Scalar {
        match self.spec {
            FieldSpec::PrimeField(p) => Scalar::Mod(n.rem_euclid(p as i64) as u64),
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self.spec {
            FieldSpec::PrimeField(p) => {
                let r = n % BigInt::from(p);
                let r = if r.is_negative() { r + BigInt::from(p) } else { r };
                Scalar::Mod(r.to_u64().expect("residue fits in u64"))
            }
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
        }
    }

    /// `num / den` in this field. Fails when `den` vanishes in the field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_integer(den);
        Ok(self.mul(&self.from_integer(num), &self.invert(&d)?))
    }

    /// Reduce an exact rational into this field.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar> {
        match self.spec {
            FieldSpec::Rationals => Ok(Scalar::Rat(r.clone())),
            FieldSpec::PrimeField(_) => {
                let n = self.from_bigint(r.numer());
                let d = self.from_bigint(r.denom());
                Ok(self.mul(&n, &self.invert(&d)?))
            }
        }
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Mod(v) => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        match (self.spec, x) {
            (FieldSpec::PrimeField(p), Scalar::Mod(v)) => *v < p,
            (FieldSpec::Rationals, Scalar::Rat(_)) => true,
            _ => false,
        }
    }

    pub fn check(&self, x: &Scalar) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                expected: self.spec.to_string(),
                found: format!("{x:?}"),
            })
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self.spec, a, b) {
            (FieldSpec::PrimeField(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(add_mod(*x, *y, p)),
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar does not belong to {}", self.spec),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self.spec, a) {
            (FieldSpec::PrimeField(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => panic!("scalar does not belong to {}", self.spec),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self.spec, a, b) {
            (FieldSpec::PrimeField(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(mul_mod(*x, *y, p)),
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar does not belong to {}", self.spec),
        }
    }

    pub fn invert(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::ZeroInverse);
        }
        self.check(a)?;
        Ok(match (self.spec, a) {
            (FieldSpec::PrimeField(p), Scalar::Mod(x)) => Scalar::Mod(inv_mod(*x, p)),
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(x.recip()),
            _ => unreachable!(),
        })
    }

    /// `(-1)^e` as a field element.
    pub fn sign(&self, e: i64) -> Scalar {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_integer(-1)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse by Fermat; `p` is prime and `a` nonzero mod `p`.
#[inline]
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fields() -> Vec<Field> {
        let mut v: Vec<Field> = [3, 5, 7, 11].iter().map(|&p| Field::prime(p).unwrap()).collect();
        v.push(Field::rationals());
        v
    }

    #[test]
    fn residue_reduction() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.from_integer(7), Scalar::Mod(2));
        assert_eq!(f.from_integer(-1), Scalar::Mod(4));
    }

    #[test]
    fn rejects_even_and_composite() {
        let err = Field::prime(2).unwrap_err();
        assert!(err.to_string().contains("even characteristic unsupported"));
        assert!(matches!(Field::prime(9), Err(Error::NotPrime(9))));
        assert!(matches!(Field::prime(1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn half_exists_over_q() {
        let q = Field::rationals();
        let half = q.from_ratio(1, 2).unwrap();
        assert_eq!(q.mul(&q.from_integer(2), &half), q.one());
    }

    #[test]
    fn small_inverses() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.invert(&f5.from_integer(2)).unwrap(), Scalar::Mod(3));
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.invert(&f3.from_integer(2)).unwrap(), Scalar::Mod(2));
        let q = Field::rationals();
        let x = q.from_ratio(3, 4).unwrap();
        assert_eq!(q.invert(&x).unwrap(), q.from_ratio(4, 3).unwrap());
        assert!(matches!(q.invert(&q.zero()), Err(Error::ZeroInverse)));
        assert!(matches!(f3.invert(&f3.from_integer(3)), Err(Error::ZeroInverse)));
    }

    #[test]
    fn canonical_rationals() {
        let q = Field::rationals();
        assert_eq!(q.from_ratio(2, -4).unwrap(), q.from_ratio(-1, 2).unwrap());
        let Scalar::Rat(r) = q.from_ratio(6, -9).unwrap() else { panic!() };
        assert_eq!(*r.denom(), BigInt::from(3));
        assert_eq!(*r.numer(), BigInt::from(-2));
    }

    proptest! {
        #[test]
        fn field_axioms(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000) {
            for f in fields() {
                let (x, y, z) = (f.from_integer(a), f.from_integer(b), f.from_integer(c));
                prop_assert_eq!(f.mul(&f.mul(&x, &y), &z), f.mul(&x, &f.mul(&y, &z)));
                prop_assert_eq!(f.add(&f.add(&x, &y), &z), f.add(&x, &f.add(&y, &z)));
                prop_assert_eq!(f.mul(&x, &f.add(&y, &z)), f.add(&f.mul(&x, &y), &f.mul(&x, &z)));
                prop_assert!(f.is_zero(&f.add(&x, &f.neg(&x))));
                if !f.is_zero(&x) {
                    prop_assert_eq!(f.mul(&x, &f.invert(&x).unwrap()), f.one());
                }
            }
        }

        #[test]
        fn from_integer_is_ring_morphism(a in -100_000i64..100_000, b in -100_000i64..100_000) {
            for f in fields() {
                prop_assert_eq!(f.from_integer(a + b), f.add(&f.from_integer(a), &f.from_integer(b)));
                prop_assert_eq!(f.from_integer(a * b), f.mul(&f.from_integer(a), &f.from_integer(b)));
            }
        }
    }
}
