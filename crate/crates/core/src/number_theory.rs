//! Integer factorization, Legendre symbols and Hilbert symbols over the rationals.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u32 = 1_000_000;

/// A place of the rationals: the real place or a finite prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(BigUint),
}

impl Place {
    pub fn prime(p: u64) -> Place {
        Place::Prime(BigUint::from(p))
    }
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin with the first twenty prime bases: deterministic below
/// 3.3e24, probabilistic beyond.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let bases = small_primes().iter().take(20);
    'witness: for &a in bases {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn pollard_brent_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn split_large(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = match n.to_u64() {
        Some(small) => BigUint::from(pollard_brent_u64(small)),
        None => pollard_brent_big(&n),
    };
    let q = &n / &d;
    split_large(d, out);
    split_large(q, out);
}

/// Prime factorization of a positive integer as `(prime, exponent)` pairs in
/// increasing prime order. Zero and one factor as the empty product.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut m = n.clone();
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    let mut large = Vec::new();
    split_large(m, &mut large);
    large.sort();
    for p in large {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out.sort();
    out
}

/// Product of the primes dividing `n` to an odd power.
pub fn squarefree_part(n: &BigUint) -> BigUint {
    factor(n)
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .fold(BigUint::one(), |acc, (p, _)| acc * p)
}

pub fn prime_divisors(n: &BigUint) -> Vec<BigUint> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// Legendre symbol `(a | p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre_symbol(a: &BigInt, p: &BigUint) -> Result<i8> {
    if p.is_even() || !is_probable_prime(p) {
        return Err(Error::InvalidPlace(p.to_string()));
    }
    let pi = BigInt::from_biguint(Sign::Plus, p.clone());
    let a = a.mod_floor(&pi).to_biguint().expect("nonnegative after mod_floor");
    if a.is_zero() {
        return Ok(0);
    }
    let e = (p - 1u32) >> 1;
    Ok(if a.modpow(&e, p).is_one() { 1 } else { -1 })
}

/// `p`-adic valuation and unit part of a nonzero integer.
fn split_valuation(n: &BigInt, p: &BigUint) -> (u64, BigInt) {
    let pi = BigInt::from_biguint(Sign::Plus, p.clone());
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pi);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// Integer in the same square class as a nonzero rational.
fn integral_representative(q: &BigRational) -> BigInt {
    q.numer() * q.denom()
}

fn mod8(n: &BigInt) -> u8 {
    n.mod_floor(&BigInt::from(8)).to_u8().expect("residue mod 8")
}

/// Hilbert symbol `(a, b)_v` over the rationals.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput("hilbert_symbol"));
    }
    if let Place::Prime(p) = place {
        if !is_probable_prime(p) {
            return Err(Error::InvalidPlace(p.to_string()));
        }
    }
    let a = integral_representative(a);
    let b = integral_representative(b);
    match place {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Prime(p) if *p == BigUint::from(2u32) => {
            let (alpha, u) = split_valuation(&a, p);
            let (beta, v) = split_valuation(&b, p);
            let eps = |x: &BigInt| u64::from(mod8(x) % 4 == 3);
            let omega = |x: &BigInt| u64::from(matches!(mod8(x), 3 | 5));
            let exponent = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
            Ok(if exponent % 2 == 0 { 1 } else { -1 })
        }
        Place::Prime(p) => {
            let (alpha, u) = split_valuation(&a, p);
            let (beta, v) = split_valuation(&b, p);
            let eps_p = Integer::is_odd(&((p - 1u32) >> 1usize));
            let mut sign: i8 = if eps_p && (alpha * beta) % 2 == 1 { -1 } else { 1 };
            if beta % 2 == 1 {
                sign *= legendre_symbol(&u, p)?;
            }
            if alpha % 2 == 1 {
                sign *= legendre_symbol(&v, p)?;
            }
            Ok(sign)
        }
    }
}

/// True when the nonzero rational `a` is a square in the completion at `place`.
pub fn is_local_square(a: &BigRational, place: &Place) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroInput("is_local_square"));
    }
    let n = integral_representative(a);
    match place {
        Place::Infinity => Ok(n.is_positive()),
        Place::Prime(p) => {
            let (v, u) = split_valuation(&n, p);
            if v % 2 == 1 {
                return Ok(false);
            }
            if *p == BigUint::from(2u32) {
                Ok(mod8(&u) == 1)
            } else {
                Ok(legendre_symbol(&u, p)? == 1)
            }
        }
    }
}
