//! Dense univariate polynomials over a [`FieldSpec`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::number_theory::factor;

/// Largest degree accepted at the public entry points.
pub const MAX_DEGREE: usize = 64;

/// Divisor-enumeration cap for the rational root search.
const MAX_ROOT_CANDIDATES: usize = 4096;

/// Dense polynomial, coefficients in ascending degree, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(field: FieldSpec, coeffs: Vec<Scalar>) -> Self {
        for c in &coeffs {
            assert_eq!(c.field(), field, "coefficient over the wrong field");
        }
        let mut p = Polynomial { field, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(field: FieldSpec, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| Scalar::from_int(field, c)).collect())
    }

    pub fn zero(field: FieldSpec) -> Self {
        Polynomial { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::constant(Scalar::one(field))
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(c.field(), vec![c])
    }

    pub fn x(field: FieldSpec) -> Self {
        Self::monomial(Scalar::one(field), 1)
    }

    pub fn monomial(c: Scalar, degree: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![Scalar::zero(field); degree];
        coeffs.push(c);
        Self::new(field, coeffs)
    }

    /// `x - r`
    pub fn linear(r: &Scalar) -> Self {
        Self::new(r.field(), vec![-r, Scalar::one(r.field())])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn check_degree(&self) -> Result<()> {
        match self.degree() {
            Some(d) if d > MAX_DEGREE => Err(Error::DegreeTooLarge(d)),
            _ => Ok(()),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        Self::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Option<Polynomial> {
        let inv = self.leading()?.inv()?;
        Some(self.scale(&inv))
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(self.field), |acc, c| &(&acc * at) + c)
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Scalar::from_int(self.field, i as i64))
            .collect();
        Self::new(self.field, coeffs)
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.field);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    fn check_field(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    /// Euclidean division; fails on a zero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check_field(divisor)?;
        let lead_inv = divisor
            .leading()
            .ok_or(Error::ZeroInput("polynomial division"))?
            .inv()
            .expect("nonzero leading coefficient");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(self.field), self.clone()));
        }
        let mut quot = vec![Scalar::zero(self.field); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] = &rem[i + j] - &(&c * d);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(self.field, quot), Self::new(self.field, rem)))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// Quotient when `divisor` divides `self`, `None` otherwise.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Option<Polynomial>> {
        let (q, r) = self.div_rem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    fn pseudo_rem(&self, b: &Polynomial) -> Polynomial {
        let delta = self.coeffs.len() - b.coeffs.len();
        let scale = b.leading().expect("nonzero").pow(delta as u64 + 1);
        self.scale(&scale).rem(b).expect("nonzero divisor")
    }

    /// Content over the rational kinds (gcd of numerators over lcm of
    /// denominators, positive); one over prime fields.
    fn content(&self) -> Scalar {
        if !self.field.is_rational_kind() || self.is_zero() {
            return Scalar::one(self.field);
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in &self.coeffs {
            let q = c.as_rational().expect("rational kind");
            num = num.gcd(q.numer());
            den = den.lcm(q.denom());
        }
        Scalar::from_rational(self.field, &BigRational::new(num, den)).expect("rational kind")
    }

    fn primitive_part(&self) -> Polynomial {
        self.scale(&self.content().inv().expect("nonzero content"))
    }

    /// Rational roots in the field, without multiplicity, in increasing order
    /// of their lifts. `None` when the search is not attempted (prime fields
    /// above 2^20, or too many candidates from the rational root test).
    pub fn roots_in_field(&self) -> Option<Vec<Scalar>> {
        if self.is_zero() {
            return None;
        }
        match self.field {
            FieldSpec::Prime(p) => {
                let p = p.get();
                if p > 1 << 20 {
                    return None;
                }
                Some(
                    (0..p)
                        .map(|r| Scalar::from_int(self.field, r as i64))
                        .filter(|r| self.eval(r).is_zero())
                        .collect(),
                )
            }
            _ => self.rational_roots(),
        }
    }

    fn rational_roots(&self) -> Option<Vec<Scalar>> {
        let mut roots = Vec::new();
        let mut lowest = 0;
        while self.coeffs[lowest].is_zero() {
            lowest += 1;
        }
        if lowest > 0 {
            roots.push(Scalar::zero(self.field));
        }
        let prim = self.primitive_part();
        let ints: Vec<BigInt> = prim.coeffs[lowest..]
            .iter()
            .map(|c| c.as_rational().expect("rational kind").to_integer())
            .collect();
        if ints.len() > 1 {
            let nums = divisors(&ints[0].abs().to_biguint().expect("abs"))?;
            let dens = divisors(&ints[ints.len() - 1].abs().to_biguint().expect("abs"))?;
            if nums.len() * dens.len() > MAX_ROOT_CANDIDATES * 4 {
                return None;
            }
            let mut seen = std::collections::BTreeSet::new();
            for n in &nums {
                for d in &dens {
                    for sign in [1, -1] {
                        let cand = BigRational::new(BigInt::from(n.clone()) * sign, d.clone().into());
                        if seen.insert(cand.clone()) {
                            let s = Scalar::from_rational(self.field, &cand).expect("rational kind");
                            if self.eval(&s).is_zero() {
                                roots.push(s);
                            }
                        }
                    }
                }
            }
        }
        roots.sort_by_key(|a| a.to_rational_lift());
        Some(roots)
    }
}

fn divisors(n: &BigUint) -> Option<Vec<BigUint>> {
    let mut out = vec![BigUint::one()];
    for (p, e) in factor(n) {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..e {
                pk = &pk * &p;
                next.push(pk.clone());
            }
        }
        if next.len() > MAX_ROOT_CANDIDATES {
            return None;
        }
        out = next;
    }
    Some(out)
}

/// Subresultant remainder sequence `a, b, r_2, ..., r_k` (Collins); the
/// coefficients stay integral when the inputs are primitive integer
/// polynomials. Requires `deg a >= deg b` and `b != 0`.
fn subresultant_prs(a: &Polynomial, b: &Polynomial) -> Vec<Polynomial> {
    let field = a.field;
    let mut seq = vec![a.clone(), b.clone()];
    let mut g = Scalar::one(field);
    let mut h = Scalar::one(field);
    loop {
        let n = seq.len();
        let (prev, cur) = (&seq[n - 2], &seq[n - 1]);
        if cur.degree() == Some(0) {
            return seq;
        }
        let delta = (prev.coeffs.len() - cur.coeffs.len()) as i64;
        let r = prev.pseudo_rem(cur);
        if r.is_zero() {
            return seq;
        }
        let divisor = &g * &h.pow(delta as u64);
        let next = r.scale(&divisor.inv().expect("nonzero"));
        g = cur.leading().expect("nonzero").clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u64).checked_div(&h.pow(delta as u64 - 1)).expect("nonzero")
        };
        seq.push(next);
    }
}

/// Monic greatest common divisor.
pub fn poly_gcd(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.check_field(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroInput("poly_gcd"));
    }
    if f.is_zero() {
        return Ok(g.monic().expect("nonzero"));
    }
    if g.is_zero() {
        return Ok(f.monic().expect("nonzero"));
    }
    if !f.field.is_rational_kind() {
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        return Ok(a.monic().expect("nonzero"));
    }
    let (a, b) = if f.coeffs.len() >= g.coeffs.len() { (f, g) } else { (g, f) };
    let seq = subresultant_prs(&a.primitive_part(), &b.primitive_part());
    Ok(seq.last().expect("nonempty").monic().expect("nonzero"))
}

/// Extended Euclid: returns `(d, s, t)` with `s f + t g = d`, `d` monic.
pub fn poly_ext_gcd(f: &Polynomial, g: &Polynomial) -> Result<(Polynomial, Polynomial, Polynomial)> {
    f.check_field(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroInput("poly_ext_gcd"));
    }
    let field = f.field;
    let (mut r0, mut r1) = (f.clone(), g.clone());
    let (mut s0, mut s1) = (Polynomial::one(field), Polynomial::zero(field));
    let (mut t0, mut t1) = (Polynomial::zero(field), Polynomial::one(field));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = r0.leading().expect("nonzero").inv().expect("nonzero");
    Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
}

/// `Res(f, g) = lc(f)^deg g * prod g(alpha)` over the roots of `f`, by the
/// subresultant algorithm.
pub fn resultant(f: &Polynomial, g: &Polynomial) -> Result<Scalar> {
    f.check_field(g)?;
    let field = f.field;
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroInput("resultant"));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Scalar::zero(field));
    }
    let (df, dg) = (f.coeffs.len() - 1, g.coeffs.len() - 1);
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut sign = Scalar::one(field);
    if df < dg {
        std::mem::swap(&mut a, &mut b);
        if df % 2 == 1 && dg % 2 == 1 {
            sign = -&sign;
        }
    }
    let (da, db) = (a.coeffs.len() - 1, b.coeffs.len() - 1);
    if db == 0 {
        return Ok(b.coeffs[0].pow(da as u64));
    }
    let (ca, cb) = (a.content(), b.content());
    let t = &ca.pow(db as u64) * &cb.pow(da as u64);
    let mut a = a.primitive_part();
    let mut b = b.primitive_part();
    let mut g_acc = Scalar::one(field);
    let mut h = Scalar::one(field);
    loop {
        let (da, db) = (a.coeffs.len() - 1, b.coeffs.len() - 1);
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -&sign;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Ok(Scalar::zero(field));
        }
        let divisor = &g_acc * &h.pow(delta as u64);
        a = b;
        b = r.scale(&divisor.inv().expect("nonzero"));
        g_acc = a.leading().expect("nonzero").clone();
        if delta > 0 {
            h = g_acc.pow(delta as u64).checked_div(&h.pow(delta as u64 - 1)).expect("nonzero");
        }
        if b.coeffs.len() == 1 {
            break;
        }
    }
    let da = a.coeffs.len() - 1;
    let lb = b.coeffs[0].clone();
    let h = lb.pow(da as u64).checked_div(&h.pow(da as u64 - 1)).expect("nonzero");
    Ok(&(&sign * &t) * &h)
}

/// Largest `m` with `(x - r)^m | f`.
pub fn root_multiplicity(f: &Polynomial, r: &Scalar) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroInput("root_multiplicity"));
    }
    if f.field != r.field() {
        return Err(Error::FieldMismatch(f.field, r.field()));
    }
    let lin = Polynomial::linear(r);
    let mut m = 0;
    let mut cur = f.clone();
    while let Some(q) = cur.exact_div(&lin)? {
        cur = q;
        m += 1;
    }
    Ok(m)
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        Polynomial::new(self.field, coeffs)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        Polynomial::new(self.field, coeffs)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.field, rhs.field, "polynomial arithmetic across different fields");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.field);
        }
        let mut out = vec![Scalar::zero(self.field); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(self.field, out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let lift = c.to_rational_lift();
            let negative = lift.is_negative();
            let magnitude = lift.abs();
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = magnitude.is_one();
            match i {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !unit {
                        write!(f, "{magnitude}*")?;
                    }
                    f.write_str("x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
