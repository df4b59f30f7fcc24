//! Isomorphism invariants of forms over the base fields, isomorphism testing,
//! and Witt decomposition into hyperbolic planes plus an anisotropic part.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::etale::{AlgebraElement, EtaleAlgebra};
use crate::field::{FieldSpec, Scalar};
use crate::gw::GrothendieckWittClass;
use crate::matrix::Matrix;
use crate::number_theory::{hilbert_symbol, is_local_square, prime_divisors, Place};
use crate::square_class::{least_nonsquare, reduce_square_class, SquareClass};

/// Upper bound on `|a|` when searching for a value represented by the
/// anisotropic part of a rational form.
const REPRESENTATION_SEARCH_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormInvariants {
    pub field: FieldSpec,
    pub rank: usize,
    /// `(n+, n-)`, over the rationals and the formal reals.
    pub signature: Option<(usize, usize)>,
    pub discriminant: SquareClass,
    /// Hasse invariant on the tracked places, over the rationals only.
    /// Every other place has invariant `+1`.
    pub hasse: Option<BTreeMap<Place, i8>>,
}

impl FormInvariants {
    pub fn hasse_at(&self, place: &Place) -> Option<i8> {
        self.hasse.as_ref().map(|h| h.get(place).copied().unwrap_or(1))
    }
}

impl fmt::Display for FormInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field: {}", self.field)?;
        writeln!(f, "rank: {}", self.rank)?;
        if let Some((p, n)) = self.signature {
            writeln!(f, "signature: ({p}, {n})")?;
        }
        write!(f, "discriminant: {}", self.discriminant)?;
        if let Some(h) = &self.hasse {
            let parts: Vec<String> = h.iter().map(|(v, e)| format!("{v}:{e:+}")).collect();
            write!(f, "\nhasse: {}", parts.join(" "))?;
        }
        Ok(())
    }
}

fn base_matrix(beta: &GrothendieckWittClass) -> Result<(FieldSpec, Matrix<Scalar>)> {
    match beta.scalar_matrix() {
        Some(m) => Ok((beta.algebra().base(), m)),
        None => Err(Error::Unsupported(format!(
            "classification over {} is unsupported",
            beta.algebra()
        ))),
    }
}

/// Diagonal entries of a congruent diagonal form.
fn diagonal_entries(beta: &GrothendieckWittClass) -> Result<(FieldSpec, Vec<Scalar>)> {
    let (field, _) = base_matrix(beta)?;
    let (d, _) = beta.diagonalize()?;
    let entries = d
        .matrix()
        .diagonal_entries()
        .iter()
        .map(|e| e.as_scalar().expect("field algebra"))
        .collect();
    Ok((field, entries))
}

fn signed_squarefree(s: &Scalar) -> BigInt {
    match reduce_square_class(s).expect("nonzero diagonal entry") {
        SquareClass::Rational { negative, squarefree } => {
            BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, squarefree)
        }
        other => unreachable!("rational square class expected, got {other:?}"),
    }
}

fn trivial_class(field: FieldSpec) -> SquareClass {
    reduce_square_class(&Scalar::one(field)).expect("one is nonzero")
}

fn rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

fn tracked_places<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BTreeSet<Place> {
    let mut places = BTreeSet::from([Place::Infinity, Place::prime(2)]);
    for a in values {
        for p in prime_divisors(a.magnitude()) {
            places.insert(Place::Prime(p));
        }
    }
    places
}

fn hasse_of(entries: &[BigInt], places: &BTreeSet<Place>) -> BTreeMap<Place, i8> {
    places
        .iter()
        .map(|v| {
            let mut e = 1i8;
            for i in 0..entries.len() {
                for j in i + 1..entries.len() {
                    e *= hilbert_symbol(&rat(&entries[i]), &rat(&entries[j]), v).expect("valid place");
                }
            }
            (v.clone(), e)
        })
        .collect()
}

pub fn get_invariants(beta: &GrothendieckWittClass) -> Result<FormInvariants> {
    let (field, entries) = diagonal_entries(beta)?;
    let rank = entries.len();
    let discriminant = match entries.iter().cloned().reduce(|a, b| a * b) {
        Some(det) => reduce_square_class(&det)?,
        None => trivial_class(field),
    };
    let signature = match field {
        FieldSpec::Rationals | FieldSpec::FormalReal => {
            let pos = entries.iter().filter(|e| e.signum() == Some(1)).count();
            Some((pos, rank - pos))
        }
        _ => None,
    };
    let hasse = (field == FieldSpec::Rationals).then(|| {
        let reps: Vec<BigInt> = entries.iter().map(signed_squarefree).collect();
        hasse_of(&reps, &tracked_places(&reps))
    });
    Ok(FormInvariants { field, rank, signature, discriminant, hasse })
}

/// Decides `beta1 ≅ beta2` over a common base field.
pub fn is_isomorphic_gw(beta1: &GrothendieckWittClass, beta2: &GrothendieckWittClass) -> Result<bool> {
    let (f1, _) = base_matrix(beta1)?;
    let (f2, _) = base_matrix(beta2)?;
    if f1 != f2 {
        return Err(Error::FieldMismatch(f1, f2));
    }
    let a = get_invariants(beta1)?;
    let b = get_invariants(beta2)?;
    Ok(same_invariants(&a, &b))
}

fn same_invariants(a: &FormInvariants, b: &FormInvariants) -> bool {
    if a.rank != b.rank {
        return false;
    }
    match a.field {
        FieldSpec::FormalComplex => true,
        FieldSpec::FormalReal => a.signature == b.signature,
        FieldSpec::Prime(_) => a.discriminant == b.discriminant,
        FieldSpec::Rationals => {
            let (ha, hb) = (a.hasse.as_ref().expect("rational"), b.hasse.as_ref().expect("rational"));
            a.signature == b.signature
                && a.discriminant == b.discriminant
                && ha.keys().chain(hb.keys()).all(|v| a.hasse_at(v) == b.hasse_at(v))
        }
    }
}

/// `h` hyperbolic planes plus a diagonal anisotropic remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittDecomposition {
    pub field: FieldSpec,
    pub hyperbolic: usize,
    pub anisotropic: Vec<Scalar>,
}

impl WittDecomposition {
    /// Diagonal entries: the anisotropic part followed by `h` copies of `1, -1`.
    pub fn entries(&self) -> Vec<Scalar> {
        let mut out = self.anisotropic.clone();
        for _ in 0..self.hyperbolic {
            out.push(Scalar::one(self.field));
            out.push(-Scalar::one(self.field));
        }
        out
    }

    pub fn to_class(&self) -> GrothendieckWittClass {
        let algebra = EtaleAlgebra::trivial(self.field);
        let entries: Vec<AlgebraElement> =
            self.entries().iter().map(|s| AlgebraElement::from_scalar(&algebra, s)).collect();
        GrothendieckWittClass::diagonal(&algebra, &entries).expect("nonzero diagonal")
    }
}

pub fn get_witt_decomposition(beta: &GrothendieckWittClass) -> Result<WittDecomposition> {
    let inv = get_invariants(beta)?;
    let field = inv.field;
    let n = inv.rank;
    let (hyperbolic, mut anisotropic) = match field {
        FieldSpec::FormalComplex => (n / 2, vec![Scalar::one(field); n % 2]),
        FieldSpec::FormalReal => {
            let (r, s) = inv.signature.expect("real signature");
            let h = r.min(s);
            let mut out = vec![Scalar::one(field); r - h];
            out.extend(vec![-Scalar::one(field); s - h]);
            (h, out)
        }
        FieldSpec::Prime(p) => finite_field_decomposition(field, p.get(), n, &inv.discriminant),
        FieldSpec::Rationals => {
            let (_, entries) = diagonal_entries(beta)?;
            rational_decomposition(&entries, &inv)?
        }
    };
    sort_entries(&mut anisotropic);
    let out = WittDecomposition { field, hyperbolic, anisotropic };
    debug_assert!(same_invariants(&get_invariants(&out.to_class())?, &inv));
    Ok(out)
}

/// Positive entries first, then by increasing magnitude.
fn sort_entries(entries: &mut [Scalar]) {
    entries.sort_by(|a, b| {
        let key = |s: &Scalar| (s.signum() != Some(1), s.to_rational_lift().abs());
        key(a).cmp(&key(b))
    });
}

fn finite_field_decomposition(
    field: FieldSpec,
    p: u64,
    n: usize,
    disc: &SquareClass,
) -> (usize, Vec<Scalar>) {
    let class_of = |s: &Scalar| reduce_square_class(s).expect("nonzero");
    let rep = |c: &SquareClass| c.representative(field);
    let minus_one = -Scalar::one(field);
    let d = rep(disc);
    if n == 0 {
        return (0, Vec::new());
    }
    if n % 2 == 1 {
        let h = (n - 1) / 2;
        let rest = &d * &minus_one.pow(h as u64);
        return (h, vec![rep(&class_of(&rest))]);
    }
    let h = n / 2;
    if class_of(&minus_one.pow(h as u64)) == *disc {
        return (h, Vec::new());
    }
    let rest = &d * &minus_one.pow((h - 1) as u64);
    let second = rep(&class_of(&rest));
    debug_assert!(second.residue() == Some(1) || second.residue() == Some(least_nonsquare(p)));
    (h - 1, vec![Scalar::one(field), second])
}

/// Target invariants of a rational form, used to decide which forms exist.
#[derive(Clone, Debug)]
struct Target {
    rank: usize,
    pos: i64,
    neg: i64,
    disc: BigInt,
    hasse: BTreeMap<Place, i8>,
}

impl Target {
    fn eps(&self, v: &Place) -> i8 {
        self.hasse.get(v).copied().unwrap_or(1)
    }

    /// Whether a rational form with these invariants exists.
    fn realizable(&self) -> bool {
        if self.pos < 0 || self.neg < 0 || (self.pos + self.neg) as usize != self.rank {
            return false;
        }
        let s = self.neg;
        let d = rat(&self.disc);
        let sign_ok = self.disc.is_negative() == (s % 2 == 1);
        let inf_ok = self.eps(&Place::Infinity) == if (s * (s - 1) / 2) % 2 == 0 { 1 } else { -1 };
        let product: i8 = self.hasse.values().product();
        if !sign_ok || !inf_ok || product != 1 {
            return false;
        }
        match self.rank {
            0 => self.disc.is_one() && self.hasse.values().all(|&e| e == 1),
            1 => self.hasse.values().all(|&e| e == 1),
            2 => self
                .hasse
                .keys()
                .all(|v| self.eps(v) == 1 || !is_local_square(&-d.clone(), v).expect("valid place")),
            _ => true,
        }
    }

    fn places(&self, extra: &BigInt) -> BTreeSet<Place> {
        let mut places = tracked_places([&self.disc, extra]);
        places.extend(self.hasse.keys().cloned());
        places
    }

    /// Invariants of the complement of `h` hyperbolic planes.
    fn without_hyperbolic(&self, h: usize) -> Target {
        let sign = if h.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        let disc = &self.disc * &sign;
        let places = self.places(&BigInt::one());
        let minus_one = rat(&-BigInt::one());
        let pairs = h * h.saturating_sub(1) / 2;
        let hasse = places
            .into_iter()
            .map(|v| {
                let mut e = self.eps(&v);
                if pairs % 2 == 1 {
                    e *= hilbert_symbol(&minus_one, &minus_one, &v).expect("valid place");
                }
                e *= hilbert_symbol(&rat(&disc), &rat(&sign), &v).expect("valid place");
                (v, e)
            })
            .collect();
        Target {
            rank: self.rank - 2 * h,
            pos: self.pos - h as i64,
            neg: self.neg - h as i64,
            disc,
            hasse,
        }
    }

    /// Invariants of the complement of `<a>`.
    fn without_entry(&self, a: &BigInt) -> Target {
        let disc = squarefree_signed(&(&self.disc * a));
        let hasse = self
            .places(a)
            .into_iter()
            .map(|v| {
                let e = self.eps(&v) * hilbert_symbol(&rat(&disc), &rat(a), &v).expect("valid place");
                (v, e)
            })
            .collect();
        let (pos, neg) = if a.is_positive() { (self.pos - 1, self.neg) } else { (self.pos, self.neg - 1) };
        Target { rank: self.rank - 1, pos, neg, disc, hasse }
    }
}

fn squarefree_signed(n: &BigInt) -> BigInt {
    let sf = crate::number_theory::squarefree_part(n.magnitude());
    BigInt::from_biguint(n.sign(), sf)
}

fn is_squarefree(n: u64) -> bool {
    let mut d = 2u64;
    let mut m = n;
    while d * d <= m {
        if m.is_multiple_of(d * d) {
            return false;
        }
        if m.is_multiple_of(d) {
            m /= d;
        }
        d += 1;
    }
    true
}

fn rational_decomposition(entries: &[Scalar], inv: &FormInvariants) -> Result<(usize, Vec<Scalar>)> {
    let field = FieldSpec::Rationals;
    let (pos, neg) = inv.signature.expect("rational signature");
    let reps: Vec<BigInt> = entries.iter().map(signed_squarefree).collect();
    let disc = match &inv.discriminant {
        SquareClass::Rational { negative, squarefree } => {
            BigInt::from_biguint(if *negative { Sign::Minus } else { Sign::Plus }, squarefree.clone())
        }
        other => unreachable!("rational discriminant expected, got {other:?}"),
    };
    let target = Target {
        rank: inv.rank,
        pos: pos as i64,
        neg: neg as i64,
        disc,
        hasse: inv.hasse.clone().expect("rational hasse"),
    };
    debug_assert!(target.realizable());
    let h = (0..=pos.min(neg))
        .rev()
        .find(|&h| target.without_hyperbolic(h).realizable())
        .expect("h = 0 is always realizable");
    if h == 0 {
        let values = reps.iter().map(|a| Scalar::from_bigint(field, a)).collect();
        return Ok((0, values));
    }
    let mut rest = target.without_hyperbolic(h);
    let mut values = Vec::with_capacity(rest.rank);
    while rest.rank > 0 {
        let a = if rest.rank == 1 {
            rest.disc.clone()
        } else {
            represented_value(&rest)?
        };
        rest = rest.without_entry(&a);
        values.push(Scalar::from_bigint(field, &a));
    }
    Ok((h, values))
}

/// Least squarefree `a` (by magnitude, positive first) such that the form
/// with invariants `t` splits as `<a>` plus a realizable complement.
fn represented_value(t: &Target) -> Result<BigInt> {
    for m in 1..=REPRESENTATION_SEARCH_LIMIT {
        if !is_squarefree(m) {
            continue;
        }
        for sign in [1i64, -1] {
            if (sign > 0 && t.pos == 0) || (sign < 0 && t.neg == 0) {
                continue;
            }
            let a = BigInt::from(m) * sign;
            if t.without_entry(&a).realizable() {
                return Ok(a);
            }
        }
    }
    Err(Error::Internal("no represented value found within the search bound".into()))
}

/// The squarefree integer representing the class of a nonzero rational.
pub fn square_class_integer(q: &BigRational) -> BigInt {
    let n = q.numer() * q.denom();
    squarefree_signed(&n)
}
