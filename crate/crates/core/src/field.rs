//! Base fields and their exact scalars.
//!
//! Rational-coefficient fields (`QQ`, `RR`, `CC`) all store values as
//! canonical [`BigRational`]s; the formal real and formal complex kinds only
//! change how forms over them are classified. Prime fields store a residue
//! in `[0, p)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::number_theory::is_prime_u64;

/// Largest modulus accepted for a prime field; keeps residue products in `u128`.
pub const MAX_PRIME: u64 = (1 << 62) - 1;

/// An odd prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if p > MAX_PRIME || !is_prime_u64(p) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime below 2^62")));
        }
        Ok(PrimeModulus(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// The base field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(PrimeModulus),
    /// Rational coefficients, classified as over the reals.
    FormalReal,
    /// Rational coefficients, classified as over the complex numbers.
    FormalComplex,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        PrimeModulus::new(p).map(FieldSpec::Prime)
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            FieldSpec::Prime(p) => Some(p.get()),
            _ => None,
        }
    }

    /// True for the kinds whose scalars are stored as rationals.
    pub fn is_rational_kind(self) -> bool {
        !matches!(self, FieldSpec::Prime(_))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("QQ"),
            FieldSpec::Prime(p) => write!(f, "GF:{}", p.get()),
            FieldSpec::FormalReal => f.write_str("RR"),
            FieldSpec::FormalComplex => f.write_str("CC"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Rational(BigRational),
    Residue(u64),
}

/// An exact element of a [`FieldSpec`].
///
/// Equality is structural, which coincides with mathematical equality
/// because both representations are canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: FieldSpec,
    value: Value,
}

fn reduce_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
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

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: FieldSpec, n: i64) -> Self {
        Self::from_bigint(field, &BigInt::from(n))
    }

    pub fn from_bigint(field: FieldSpec, n: &BigInt) -> Self {
        let value = match field {
            FieldSpec::Prime(p) => Value::Residue(reduce_mod(n, p.get())),
            _ => Value::Rational(BigRational::from_integer(n.clone())),
        };
        Scalar { field, value }
    }

    /// Maps a rational number into `field`; fails over `GF:p` when `p`
    /// divides the denominator.
    pub fn from_rational(field: FieldSpec, q: &BigRational) -> Result<Self> {
        match field {
            FieldSpec::Prime(p) => {
                let p = p.get();
                let den = reduce_mod(q.denom(), p);
                if den == 0 {
                    return Err(Error::NotInvertible(q.denom().to_string(), field));
                }
                let num = reduce_mod(q.numer(), p);
                let value = mul_mod(num, pow_mod(den, p - 2, p), p);
                Ok(Scalar { field, value: Value::Residue(value) })
            }
            _ => Ok(Scalar { field, value: Value::Rational(q.clone()) }),
        }
    }

    pub fn from_ratio(field: FieldSpec, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroInput("denominator"));
        }
        Self::from_rational(field, &BigRational::new(num.into(), den.into()))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(q) => q.is_zero(),
            Value::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rational(q) => q.is_one(),
            Value::Residue(r) => *r == 1,
        }
    }

    /// The rational value, for the rational-coefficient kinds.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(q) => Some(q),
            Value::Residue(_) => None,
        }
    }

    /// The residue in `[0, p)`, for prime fields.
    pub fn residue(&self) -> Option<u64> {
        match &self.value {
            Value::Residue(r) => Some(*r),
            Value::Rational(_) => None,
        }
    }

    /// Sign of a rational-kind scalar: -1, 0 or 1. `None` over prime fields.
    pub fn signum(&self) -> Option<i8> {
        self.as_rational().map(|q| {
            if q.is_zero() {
                0
            } else if q.is_positive() {
                1
            } else {
                -1
            }
        })
    }

    /// Rational lift used for display and serialization; residues lift to
    /// their representative in `[0, p)`.
    pub fn to_rational_lift(&self) -> BigRational {
        match &self.value {
            Value::Rational(q) => q.clone(),
            Value::Residue(r) => BigRational::from_integer(BigInt::from(*r)),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let value = match &self.value {
            Value::Rational(q) => Value::Rational(q.recip()),
            Value::Residue(r) => {
                let p = self.field.modulus().expect("prime field");
                Value::Residue(pow_mod(*r, p - 2, p))
            }
        };
        Some(Scalar { field: self.field, value })
    }

    pub fn checked_div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|inv| self * &inv)
    }

    pub fn pow(&self, exp: u64) -> Scalar {
        match &self.value {
            Value::Rational(q) => {
                let e = i32::try_from(exp).expect("exponent fits in i32");
                Scalar { field: self.field, value: Value::Rational(q.pow(e)) }
            }
            Value::Residue(r) => {
                let p = self.field.modulus().expect("prime field");
                Scalar { field: self.field, value: Value::Residue(pow_mod(*r, exp, p)) }
            }
        }
    }

    /// Signed power; negative exponents require a nonzero base.
    pub fn powi(&self, exp: i64) -> Option<Scalar> {
        if exp >= 0 {
            Some(self.pow(exp as u64))
        } else {
            self.inv().map(|i| i.pow(exp.unsigned_abs()))
        }
    }

    fn check_same_field(&self, other: &Scalar) {
        assert_eq!(
            self.field, other.field,
            "scalar arithmetic across different fields ({} vs {})",
            self.field, other.field
        );
    }

    fn combine(
        &self,
        other: &Scalar,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
        res: impl Fn(u64, u64, u64) -> u64,
    ) -> Scalar {
        self.check_same_field(other);
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(rat(a, b)),
            (Value::Residue(a), Value::Residue(b)) => {
                Value::Residue(res(*a, *b, self.field.modulus().expect("prime field")))
            }
            _ => unreachable!("value kind always matches the field"),
        };
        Scalar { field: self.field, value }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(q) => write!(f, "{q}"),
            Value::Residue(r) => write!(f, "{r}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, |a, b| a + b, |a, b, p| ((a as u128 + b as u128) % p as u128) as u64)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, |a, b| a - b, |a, b, p| ((a as u128 + (p - b) as u128) % p as u128) as u64)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, |a, b| a * b, mul_mod)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let value = match &self.value {
            Value::Rational(q) => Value::Rational(-q),
            Value::Residue(r) => {
                let p = self.field.modulus().expect("prime field");
                Value::Residue((p - r) % p)
            }
        };
        Scalar { field: self.field, value }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
