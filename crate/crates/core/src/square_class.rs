//! Square classes `k^x / (k^x)^2` for each supported base field.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::number_theory::squarefree_part;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SquareClass {
    /// `sign * squarefree`, with `squarefree` a positive squarefree integer.
    Rational { negative: bool, squarefree: BigUint },
    Prime { modulus: u64, square: bool },
    Real { negative: bool },
    Complex,
}

impl SquareClass {
    pub fn is_trivial(&self) -> bool {
        match self {
            SquareClass::Rational { negative, squarefree } => !negative && squarefree.is_one(),
            SquareClass::Prime { square, .. } => *square,
            SquareClass::Real { negative } => !negative,
            SquareClass::Complex => true,
        }
    }

    /// A canonical scalar representative: the signed squarefree integer over
    /// the rationals, 1 or the least nonsquare over `GF:p`, and ±1 otherwise.
    pub fn representative(&self, field: FieldSpec) -> Scalar {
        match self {
            SquareClass::Rational { negative, squarefree } => {
                let sign = if *negative { Sign::Minus } else { Sign::Plus };
                Scalar::from_bigint(field, &BigInt::from_biguint(sign, squarefree.clone()))
            }
            SquareClass::Prime { modulus, square } => {
                if *square {
                    Scalar::one(field)
                } else {
                    Scalar::from_int(field, least_nonsquare(*modulus) as i64)
                }
            }
            SquareClass::Real { negative } => Scalar::from_int(field, if *negative { -1 } else { 1 }),
            SquareClass::Complex => Scalar::one(field),
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareClass::Rational { negative, squarefree } => {
                write!(f, "{}{}", if *negative { "-" } else { "+" }, squarefree)
            }
            SquareClass::Prime { square, .. } => {
                f.write_str(if *square { "square" } else { "nonsquare" })
            }
            SquareClass::Real { negative } => f.write_str(if *negative { "-" } else { "+" }),
            SquareClass::Complex => f.write_str("1"),
        }
    }
}

pub(crate) fn euler_criterion(residue: u64, p: u64) -> bool {
    let s = Scalar::from_int(FieldSpec::prime(p).expect("valid modulus"), residue as i64);
    s.pow((p - 1) / 2).is_one()
}

pub fn least_nonsquare(p: u64) -> u64 {
    (2..p).find(|&a| !euler_criterion(a, p)).expect("odd primes have nonsquares")
}

pub fn reduce_square_class(a: &Scalar) -> Result<SquareClass> {
    if a.is_zero() {
        return Err(Error::ZeroInput("reduce_square_class"));
    }
    Ok(match a.field() {
        FieldSpec::Rationals => {
            let q = a.as_rational().expect("rational kind");
            let n = (q.numer() * q.denom()).abs().to_biguint().expect("absolute value");
            SquareClass::Rational { negative: q.is_negative(), squarefree: squarefree_part(&n) }
        }
        FieldSpec::Prime(p) => SquareClass::Prime {
            modulus: p.get(),
            square: euler_criterion(a.residue().expect("residue"), p.get()),
        },
        FieldSpec::FormalReal => SquareClass::Real { negative: a.signum() == Some(-1) },
        FieldSpec::FormalComplex => SquareClass::Complex,
    })
}

/// Whether a nonzero scalar is a square in its field.
pub fn is_square(a: &Scalar) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroInput("is_square"));
    }
    Ok(match a.field() {
        FieldSpec::Rationals => {
            let q = a.as_rational().expect("rational kind");
            !q.is_negative() && is_perfect_square(q.numer()) && is_perfect_square(q.denom())
        }
        FieldSpec::Prime(p) => euler_criterion(a.residue().expect("residue"), p.get()),
        FieldSpec::FormalReal => a.signum() == Some(1),
        FieldSpec::FormalComplex => true,
    })
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}
