//! The unstable Grothendieck–Witt group: pairs `(beta, d)` of a form and a
//! unit whose square class agrees with the discriminant of the form.

use std::fmt;

use crate::classify::{get_witt_decomposition, is_isomorphic_gw};
use crate::error::{Error, Result};
use crate::etale::{Algebra, AlgebraElement, EtaleAlgebra};
use crate::field::{FieldSpec, Scalar};
use crate::gw::{add_gw, GrothendieckWittClass};
use crate::matrix::RingElem;
use crate::square_class::is_square;

/// Whether the discriminant compatibility of a class was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Compatibility {
    Verified,
    /// Squareness in the algebra could not be decided (a factor that does
    /// not split over the base field).
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnstableGWClass {
    gw: GrothendieckWittClass,
    scalar: AlgebraElement,
    compatibility: Compatibility,
}

/// `Some(true)` if `u` is a square in its algebra, `None` when undecidable here.
pub fn is_square_in_algebra(u: &AlgebraElement) -> Option<bool> {
    let algebra = u.algebra();
    if algebra.base() == FieldSpec::FormalComplex {
        return Some(true);
    }
    if let Some(s) = u.as_scalar() {
        return is_square(&s).ok();
    }
    let points = algebra.split_points()?;
    Some(points.iter().enumerate().all(|(i, roots)| {
        roots.iter().all(|r| is_square(&u.evaluate_component(i, r)).unwrap_or(false))
    }))
}

fn compatibility(gw: &GrothendieckWittClass, d: &AlgebraElement) -> Result<Compatibility> {
    let d_inv = d.inverse().ok_or_else(|| Error::NotUnit(d.to_string()))?;
    let disc = gw.determinant();
    match is_square_in_algebra(&disc.times(&d_inv)) {
        Some(true) => Ok(Compatibility::Verified),
        Some(false) => Err(Error::IncompatibleScalar { discriminant: disc.to_string(), scalar: d.to_string() }),
        None => Ok(Compatibility::Unchecked),
    }
}

/// The class `(beta, det beta)`.
pub fn make_gwu(gw: GrothendieckWittClass) -> UnstableGWClass {
    let scalar = gw.determinant();
    UnstableGWClass { gw, scalar, compatibility: Compatibility::Verified }
}

/// The class `(beta, d)`, checking compatibility where it is decidable.
pub fn make_gwu_with_scalar(gw: GrothendieckWittClass, d: AlgebraElement) -> Result<UnstableGWClass> {
    if !d.same_algebra(&AlgebraElement::one(gw.algebra())) {
        return Err(Error::AlgebraMismatch);
    }
    let compatibility = compatibility(&gw, &d)?;
    Ok(UnstableGWClass { gw, scalar: d, compatibility })
}

/// `(diag(a_1, ..., a_n), a_1 ... a_n)` over the base field.
pub fn make_diagonal_unstable_form(field: FieldSpec, entries: &[Scalar]) -> Result<UnstableGWClass> {
    if let Some(bad) = entries.iter().find(|s| s.field() != field) {
        return Err(Error::FieldMismatch(field, bad.field()));
    }
    if entries.iter().any(Scalar::is_zero) {
        return Err(Error::ZeroInput("make_diagonal_unstable_form"));
    }
    let algebra = EtaleAlgebra::trivial(field);
    let lifted: Vec<AlgebraElement> =
        entries.iter().map(|s| AlgebraElement::from_scalar(&algebra, s)).collect();
    Ok(make_gwu(GrothendieckWittClass::diagonal(&algebra, &lifted)?))
}

/// `n/2` copies of `<1, -1>`, with scalar `(-1)^(n/2)`.
pub fn make_hyperbolic_unstable_form(field: FieldSpec, n: usize) -> Result<UnstableGWClass> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::OddHyperbolicRank(n));
    }
    let one = Scalar::one(field);
    let entries: Vec<Scalar> = (0..n).map(|i| if i % 2 == 0 { one.clone() } else { -one.clone() }).collect();
    make_diagonal_unstable_form(field, &entries)
}

impl UnstableGWClass {
    pub fn gw(&self) -> &GrothendieckWittClass {
        &self.gw
    }

    pub fn scalar(&self) -> &AlgebraElement {
        &self.scalar
    }

    pub fn compatibility(&self) -> Compatibility {
        self.compatibility
    }

    pub fn algebra(&self) -> &Algebra {
        self.gw.algebra()
    }

    pub fn rank(&self) -> usize {
        self.gw.rank()
    }

    /// The scalar as a base-field element, when the class lives over a field.
    pub fn base_scalar(&self) -> Option<Scalar> {
        self.scalar.as_scalar()
    }
}

impl fmt::Display for UnstableGWClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.gw)?;
        write!(f, "scalar: {}", self.scalar)
    }
}

/// `(beta1 + beta2, d1 d2)`.
pub fn add_gwu(a: &UnstableGWClass, b: &UnstableGWClass) -> Result<UnstableGWClass> {
    let gw = add_gw(&a.gw, &b.gw)?;
    let compatibility = if a.compatibility == Compatibility::Verified && b.compatibility == Compatibility::Verified {
        Compatibility::Verified
    } else {
        Compatibility::Unchecked
    };
    Ok(UnstableGWClass { gw, scalar: a.scalar.times(&b.scalar), compatibility })
}

/// Isomorphic forms and equal scalars (as elements, not square classes).
pub fn is_isomorphic_gwu(a: &UnstableGWClass, b: &UnstableGWClass) -> Result<bool> {
    if !is_isomorphic_gw(&a.gw, &b.gw)? {
        return Ok(false);
    }
    Ok(a.base_scalar() == b.base_scalar())
}

/// Replaces the form by its Witt decomposition; the scalar is unchanged.
pub fn get_sum_decomposition_gwu(a: &UnstableGWClass) -> Result<UnstableGWClass> {
    let gw = get_witt_decomposition(&a.gw)?.to_class();
    let scalar = AlgebraElement::from_scalar(gw.algebra(), &a.base_scalar().expect("field class"));
    Ok(UnstableGWClass { gw, scalar, compatibility: a.compatibility })
}

/// `(sum beta_i, prod d_i * prod_{i<j} (r_i - r_j)^(2 m_i m_j))` with
/// `m_i` the rank of `beta_i`.
pub fn add_gwu_divisorial(classes: &[UnstableGWClass], points: &[Scalar]) -> Result<UnstableGWClass> {
    if classes.len() != points.len() {
        return Err(Error::LengthMismatch(classes.len(), points.len()));
    }
    let Some(first) = classes.first() else {
        return Err(Error::ZeroInput("add_gwu_divisorial"));
    };
    let field = first.algebra().base();
    for c in classes {
        if c.algebra().base() != field {
            return Err(Error::FieldMismatch(field, c.algebra().base()));
        }
        if !c.algebra().is_field() {
            return Err(Error::Unsupported(format!("divisorial sum over {}", c.algebra())));
        }
    }
    if let Some(bad) = points.iter().find(|r| r.field() != field) {
        return Err(Error::FieldMismatch(field, bad.field()));
    }
    for (i, r) in points.iter().enumerate() {
        if points[..i].contains(r) {
            return Err(Error::DuplicatePoint(r.to_string()));
        }
    }
    let algebra = EtaleAlgebra::trivial(field);
    let mut gw = GrothendieckWittClass::zero(&algebra);
    let mut scalar = Scalar::one(field);
    for c in classes {
        let lifted = c.gw.matrix().map(|e| AlgebraElement::from_scalar(&algebra, &e.as_scalar().expect("field")));
        gw = add_gw(&gw, &GrothendieckWittClass::new(&algebra, lifted)?)?;
        scalar = &scalar * &c.base_scalar().expect("field");
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let e = 2 * classes[i].rank() as u64 * classes[j].rank() as u64;
            scalar = &scalar * &(&points[i] - &points[j]).pow(e);
        }
    }
    let compatibility = if classes.iter().all(|c| c.compatibility == Compatibility::Verified) {
        Compatibility::Verified
    } else {
        Compatibility::Unchecked
    };
    Ok(UnstableGWClass { gw, scalar: AlgebraElement::from_scalar(&algebra, &scalar), compatibility })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::poly::Polynomial;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(FieldSpec::Rationals, n)
    }

    fn diag_u(field: FieldSpec, entries: &[i64]) -> UnstableGWClass {
        let e: Vec<Scalar> = entries.iter().map(|&v| Scalar::from_int(field, v)).collect();
        make_diagonal_unstable_form(field, &e).unwrap()
    }

    fn field_class(field: FieldSpec, rows: &[&[i64]]) -> GrothendieckWittClass {
        let m = Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(field, v)).collect()).collect(),
        )
        .unwrap();
        GrothendieckWittClass::over_field(field, &m).unwrap()
    }

    fn scalar_of(field: FieldSpec, v: i64) -> AlgebraElement {
        AlgebraElement::from_scalar(&EtaleAlgebra::trivial(field), &Scalar::from_int(field, v))
    }

    #[test]
    fn one_and_two_argument_forms() {
        let alg = EtaleAlgebra::new(FieldSpec::Rationals, vec![Polynomial::from_ints(FieldSpec::Rationals, &[-1, 0, 1])])
            .unwrap();
        let x = AlgebraElement::generator(&alg);
        let one = AlgebraElement::one(&alg);
        let two = AlgebraElement::from_int(&alg, 2);
        let m = Matrix::from_rows(vec![vec![one.clone(), two.clone()], vec![two, x.clone()]]).unwrap();
        let beta = GrothendieckWittClass::new(&alg, m).unwrap();
        let expected = x.minus(&AlgebraElement::from_int(&alg, 4));
        let a = make_gwu(beta.clone());
        assert_eq!(a.scalar(), &expected);
        let b = make_gwu_with_scalar(beta.clone(), expected.clone()).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.compatibility(), Compatibility::Verified);
        // x - 4 takes values -3 and -5 at the two points; 15(x-4) is not a square.
        let bad = expected.scale(&q(15));
        assert!(matches!(make_gwu_with_scalar(beta, bad), Err(Error::IncompatibleScalar { .. })));
    }

    #[test]
    fn incompatible_and_non_units() {
        let id = field_class(FieldSpec::Rationals, &[&[1, 0], &[0, 1]]);
        let err = make_gwu_with_scalar(id.clone(), scalar_of(FieldSpec::Rationals, -1)).unwrap_err();
        assert!(matches!(err, Error::IncompatibleScalar { .. }));
        assert!(make_gwu_with_scalar(id.clone(), scalar_of(FieldSpec::Rationals, 4)).is_ok());
        assert!(matches!(
            make_gwu_with_scalar(id, scalar_of(FieldSpec::Rationals, 0)),
            Err(Error::NotUnit(_))
        ));
    }

    #[test]
    fn unchecked_over_non_split_algebras() {
        let alg = EtaleAlgebra::new(FieldSpec::Rationals, vec![Polynomial::from_ints(FieldSpec::Rationals, &[-2, 0, 1])])
            .unwrap();
        let beta = GrothendieckWittClass::diagonal(&alg, &[AlgebraElement::one(&alg)]).unwrap();
        let u = make_gwu_with_scalar(beta, AlgebraElement::generator(&alg)).unwrap();
        assert_eq!(u.compatibility(), Compatibility::Unchecked);
    }

    #[test]
    fn constructors() {
        let u = diag_u(FieldSpec::Rationals, &[1, -2]);
        assert_eq!(u.base_scalar(), Some(q(-2)));
        let h = make_hyperbolic_unstable_form(FieldSpec::Rationals, 2).unwrap();
        assert_eq!(h.base_scalar(), Some(q(-1)));
        assert_eq!(h.gw().scalar_matrix().unwrap(), Matrix::diagonal(&[q(1), q(-1)]));
        assert_eq!(make_hyperbolic_unstable_form(FieldSpec::Rationals, 4).unwrap().base_scalar(), Some(q(1)));
        assert!(matches!(make_hyperbolic_unstable_form(FieldSpec::Rationals, 3), Err(Error::OddHyperbolicRank(3))));
        assert!(make_diagonal_unstable_form(FieldSpec::Rationals, &[q(0)]).is_err());
    }

    #[test]
    fn addition() {
        let s = add_gwu(&diag_u(FieldSpec::Rationals, &[1]), &diag_u(FieldSpec::Rationals, &[-1])).unwrap();
        assert_eq!(s, diag_u(FieldSpec::Rationals, &[1, -1]));
        let s = add_gwu(&diag_u(FieldSpec::Rationals, &[2]), &diag_u(FieldSpec::Rationals, &[3])).unwrap();
        assert_eq!(s.base_scalar(), Some(q(6)));
        let f7 = FieldSpec::prime(7).unwrap();
        let s = add_gwu(&diag_u(f7, &[2]), &diag_u(f7, &[4])).unwrap();
        assert_eq!(s.base_scalar(), Some(Scalar::one(f7)));
    }

    #[test]
    fn isomorphism_uses_exact_scalars() {
        let a1 = make_gwu_with_scalar(
            field_class(FieldSpec::Rationals, &[&[1, -2, 4], &[-2, 2, 0], &[4, 0, -7]]),
            scalar_of(FieldSpec::Rationals, -18),
        )
        .unwrap();
        let a2 = make_gwu_with_scalar(
            field_class(FieldSpec::Rationals, &[&[1, 0, 0], &[0, -2, 0], &[0, 0, 9]]),
            scalar_of(FieldSpec::Rationals, -18),
        )
        .unwrap();
        assert!(is_isomorphic_gwu(&a1, &a2).unwrap());
        assert!(is_isomorphic_gwu(&a1, &a1).unwrap());
        assert!(!is_isomorphic_gwu(&diag_u(FieldSpec::Rationals, &[1]), &diag_u(FieldSpec::Rationals, &[4])).unwrap());

        let d = get_sum_decomposition_gwu(&a1).unwrap();
        assert_eq!(d.gw().scalar_matrix().unwrap(), Matrix::diagonal(&[q(2), q(1), q(-1)]));
        assert_eq!(d.base_scalar(), Some(q(-18)));
        assert!(is_isomorphic_gwu(&d, &a1).unwrap());
        assert_eq!(get_sum_decomposition_gwu(&d).unwrap(), d);
        let h = make_hyperbolic_unstable_form(FieldSpec::Rationals, 2).unwrap();
        assert_eq!(get_sum_decomposition_gwu(&h).unwrap(), h);
    }

    #[test]
    fn divisorial_sum() {
        let a = diag_u(FieldSpec::Rationals, &[3]);
        assert_eq!(add_gwu_divisorial(std::slice::from_ref(&a), &[q(5)]).unwrap(), a);
        let b = diag_u(FieldSpec::Rationals, &[-2]);
        let s = add_gwu_divisorial(&[a.clone(), b.clone()], &[q(1), q(4)]).unwrap();
        assert_eq!(s.base_scalar(), Some(q(3 * -2 * 9)));
        assert_eq!(s.gw().scalar_matrix().unwrap(), Matrix::diagonal(&[q(3), q(-2)]));
        assert!(matches!(add_gwu_divisorial(&[a.clone(), b.clone()], &[q(1), q(1)]), Err(Error::DuplicatePoint(_))));
        assert!(matches!(add_gwu_divisorial(&[a, b], &[q(1)]), Err(Error::LengthMismatch(2, 1))));
    }
}
