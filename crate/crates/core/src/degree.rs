//! Global and local unstable A¹-Brouwer degrees of pointed rational functions.

use std::fmt;

use crate::error::{Error, Result};
use crate::etale::AlgebraElement;
use crate::field::{FieldSpec, Scalar};
use crate::gw::GrothendieckWittClass;
use crate::matrix::Matrix;
use crate::poly::{poly_gcd, resultant, root_multiplicity, Polynomial};
use crate::unstable::{add_gwu_divisorial, is_isomorphic_gwu, make_gwu, make_gwu_with_scalar, UnstableGWClass};

/// `f/g` with `f` monic, `deg f > deg g`, `g != 0` and `gcd(f, g) = 1`, so
/// that `(f/g)(inf) = inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedRationalFunction {
    f: Polynomial,
    g: Polynomial,
}

pub fn make_pointed(f: Polynomial, g: Polynomial) -> Result<PointedRationalFunction> {
    PointedRationalFunction::new(f, g)
}

impl PointedRationalFunction {
    pub fn new(f: Polynomial, g: Polynomial) -> Result<Self> {
        if f.field() != g.field() {
            return Err(Error::FieldMismatch(f.field(), g.field()));
        }
        f.check_degree()?;
        g.check_degree()?;
        if g.is_zero() {
            return Err(Error::NotPointed("the denominator is zero".into()));
        }
        if !f.is_monic() {
            return Err(Error::NotPointed(format!("numerator {f} is not monic")));
        }
        let common = poly_gcd(&f, &g)?;
        if !common.is_constant() {
            return Err(Error::CommonFactor(common.to_string()));
        }
        if f.degree() <= g.degree() {
            return Err(Error::NotPointed(format!("deg {f} <= deg {g}")));
        }
        Ok(PointedRationalFunction { f, g })
    }

    /// From an arbitrary fraction `num/den`: cancels `gcd(num, den)` and
    /// rescales so the numerator is monic, then validates.
    pub fn from_fraction(num: &Polynomial, den: &Polynomial) -> Result<Self> {
        if num.field() != den.field() {
            return Err(Error::FieldMismatch(num.field(), den.field()));
        }
        if num.is_zero() || den.is_zero() {
            return Err(Error::NotPointed("zero numerator or denominator".into()));
        }
        let common = poly_gcd(num, den)?;
        let f = num.exact_div(&common)?.expect("gcd divides");
        let g = den.exact_div(&common)?.expect("gcd divides");
        let lc = f.leading().expect("nonzero").inv().expect("nonzero leading coefficient");
        Self::new(f.scale(&lc), g.scale(&lc))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.f
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.g
    }

    pub fn field(&self) -> FieldSpec {
        self.f.field()
    }

    pub fn degree(&self) -> usize {
        self.f.degree().expect("nonzero numerator")
    }
}

impl fmt::Display for PointedRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.f, self.g)
    }
}

/// Coefficients `b_ij` of `(f(X) g(Y) - f(Y) g(X)) / (X - Y) = sum b_ij X^i Y^j`.
pub fn bezoutian_matrix(q: &PointedRationalFunction) -> Matrix<Scalar> {
    let (f, g) = (&q.f, &q.g);
    let n = q.degree();
    // numerator = sum_i X^i c_i(Y), c_i = f_i g(Y) - g_i f(Y)
    let c = |i: usize| &g.scale(&f.coeff(i)) - &f.scale(&g.coeff(i));
    // synthetic division by X - Y: q_{n-1} = c_n, q_{i-1} = c_i + Y q_i
    let y = Polynomial::x(q.field());
    let mut rows = vec![Polynomial::zero(q.field()); n];
    rows[n - 1] = c(n);
    for i in (1..n).rev() {
        rows[i - 1] = &c(i) + &(&y * &rows[i]);
    }
    debug_assert!((&c(0) + &(&y * &rows[0])).is_zero());
    Matrix::from_fn(n, n, |i, j| rows[i].coeff(j))
}

/// `(Bez(f/g), det Bez(f/g))`; over the formal complexes the form is the
/// identity and the scalar is `(-1)^(n(n-1)/2) Res(f, g)`.
pub fn global_unstable_degree(q: &PointedRationalFunction) -> Result<UnstableGWClass> {
    let field = q.field();
    if field == FieldSpec::FormalComplex {
        let n = q.degree();
        let one = Scalar::one(field);
        let res = resultant(&q.f, &q.g)?;
        let scalar = if (n * (n - 1) / 2).is_multiple_of(2) { res } else { -res };
        let beta = GrothendieckWittClass::over_field(field, &Matrix::identity(n, &one))?;
        let algebra = beta.algebra().clone();
        return make_gwu_with_scalar(beta, AlgebraElement::from_scalar(&algebra, &scalar));
    }
    let beta = GrothendieckWittClass::over_field(field, &bezoutian_matrix(q))?;
    Ok(make_gwu(beta))
}

/// The multiplicity `m` of the root `r` of `f`, and the leading Laurent
/// coefficient `a_m = g(r) / (f / (x - r)^m)(r)` of `g/f` at `r`.
pub fn local_newton_coefficient(q: &PointedRationalFunction, r: &Scalar) -> Result<(usize, Scalar)> {
    if r.field() != q.field() {
        return Err(Error::FieldMismatch(q.field(), r.field()));
    }
    let m = root_multiplicity(&q.f, r)?;
    if m == 0 {
        return Err(Error::NotARoot(r.to_string()));
    }
    let cofactor = q
        .f
        .exact_div(&Polynomial::linear(r).pow(m as u32))?
        .expect("(x - r)^m divides f");
    let a = q.g.eval(r).checked_div(&cofactor.eval(r)).expect("r is a simple root of the cofactor");
    Ok((m, a))
}

/// `(Nwt_r, det Nwt_r)` with `Nwt_r` the `m x m` antidiagonal matrix of `a_m`.
pub fn local_unstable_degree(q: &PointedRationalFunction, r: &Scalar) -> Result<UnstableGWClass> {
    let (m, a) = local_newton_coefficient(q, r)?;
    let zero = Scalar::zero(q.field());
    let nwt = Matrix::from_fn(m, m, |i, j| if i + j == m - 1 { a.clone() } else { zero.clone() });
    let det = a.pow(m as u64);
    let det = if (m * (m - 1) / 2) % 2 == 0 { det } else { -det };
    if nwt.det()? != det {
        return Err(Error::Internal(format!("antidiagonal determinant mismatch at {r}")));
    }
    let u = make_gwu(GrothendieckWittClass::over_field(q.field(), &nwt)?);
    debug_assert_eq!(u.base_scalar(), Some(det));
    Ok(u)
}

/// Compares the global degree with the divisorial sum of the local degrees
/// at `roots`, which must be all the roots of `f`, all lying in the field.
pub fn check_poincare_hopf(q: &PointedRationalFunction, roots: &[Scalar]) -> Result<bool> {
    let mut locals = Vec::with_capacity(roots.len());
    let mut found = 0;
    for r in roots {
        let local = local_unstable_degree(q, r)?;
        found += local.rank();
        locals.push(local);
    }
    let sum = add_gwu_divisorial(&locals, roots)?;
    if found < q.degree() {
        return Err(Error::RootsIncomplete { found, degree: q.degree() });
    }
    is_isomorphic_gwu(&sum, &global_unstable_degree(q)?)
}

/// The distinct roots of the numerator lying in the field, when they can be found.
pub fn rational_roots(q: &PointedRationalFunction) -> Option<Vec<Scalar>> {
    q.f.roots_in_field()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(field: FieldSpec, c: &[i64]) -> Polynomial {
        Polynomial::from_ints(field, c)
    }

    fn qq(c: &[i64]) -> Polynomial {
        p(FieldSpec::Rationals, c)
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(FieldSpec::Rationals, n)
    }

    fn frac(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(FieldSpec::Rationals, n, d).unwrap()
    }

    fn example() -> PointedRationalFunction {
        make_pointed(qq(&[8, -12, -2, 11, -6, 1]), qq(&[1, 7, -5, 0, 1])).unwrap()
    }

    #[test]
    fn validation() {
        assert!(matches!(make_pointed(qq(&[0, 1]), qq(&[0, 1])), Err(Error::CommonFactor(_))));
        assert!(matches!(make_pointed(qq(&[0, 2]), qq(&[1])), Err(Error::NotPointed(_))));
        assert!(matches!(make_pointed(qq(&[1, 1]), qq(&[0, 1])), Err(Error::NotPointed(_))));
        assert!(matches!(make_pointed(qq(&[0, 1]), qq(&[0])), Err(Error::NotPointed(_))));
        let f3 = FieldSpec::prime(3).unwrap();
        assert!(matches!(make_pointed(qq(&[0, 1]), p(f3, &[1])), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn fraction_form_is_reduced() {
        // (2x^2 - 2) / (2x + 2) = (x - 1) / 1
        let q = PointedRationalFunction::from_fraction(&qq(&[-2, 0, 2]), &qq(&[2, 2])).unwrap();
        assert_eq!(q.numerator(), &qq(&[-1, 1]));
        assert_eq!(q.denominator(), &qq(&[1]));
        // 2x / 4 = x / 2
        let q = PointedRationalFunction::from_fraction(&qq(&[0, 2]), &qq(&[4])).unwrap();
        assert_eq!(q.denominator(), &qq(&[2]));
    }

    #[test]
    fn small_bezoutians() {
        let q = make_pointed(qq(&[0, 1]), qq(&[1])).unwrap();
        assert_eq!(bezoutian_matrix(&q), Matrix::diagonal(&[s(1)]));
        let q = make_pointed(qq(&[0, 0, 1]), qq(&[1])).unwrap();
        assert_eq!(
            bezoutian_matrix(&q),
            Matrix::from_rows(vec![vec![s(0), s(1)], vec![s(1), s(0)]]).unwrap()
        );
        let u = global_unstable_degree(&make_pointed(qq(&[0, 1]), qq(&[1])).unwrap()).unwrap();
        assert_eq!(u.base_scalar(), Some(s(1)));
    }

    #[test]
    fn example_global_degree() {
        let q = example();
        let b = bezoutian_matrix(&q);
        assert_eq!(b.row(0), &[s(-68), s(38), s(11), s(-14), s(1)]);
        assert_eq!(b.row(4), &[s(1), s(7), s(-5), s(0), s(1)]);
        assert!(b.is_symmetric());
        let u = global_unstable_degree(&q).unwrap();
        assert_eq!(u.base_scalar(), Some(s(-53240)));

        let cc = FieldSpec::FormalComplex;
        let qc = make_pointed(p(cc, &[8, -12, -2, 11, -6, 1]), p(cc, &[1, 7, -5, 0, 1])).unwrap();
        let u = global_unstable_degree(&qc).unwrap();
        assert_eq!(u.gw().scalar_matrix().unwrap(), Matrix::identity(5, &Scalar::one(cc)));
        assert_eq!(u.base_scalar(), Some(Scalar::from_int(cc, -53240)));
    }

    #[test]
    fn example_local_degrees() {
        let q = example();
        assert_eq!(local_newton_coefficient(&q, &s(-1)).unwrap(), (1, frac(-5, 27)));
        assert_eq!(local_newton_coefficient(&q, &s(1)).unwrap(), (1, s(-2)));
        assert_eq!(local_newton_coefficient(&q, &s(2)).unwrap(), (3, frac(11, 3)));
        let at2 = local_unstable_degree(&q, &s(2)).unwrap();
        assert_eq!(at2.base_scalar(), Some(frac(-1331, 27)));
        let m = at2.gw().scalar_matrix().unwrap();
        assert_eq!(m.row(0), &[s(0), s(0), frac(11, 3)]);
        assert_eq!(m.row(1), &[s(0), frac(11, 3), s(0)]);
        assert!(matches!(local_unstable_degree(&q, &s(3)), Err(Error::NotARoot(_))));
    }

    #[test]
    fn poincare_hopf_examples() {
        let q = example();
        assert!(check_poincare_hopf(&q, &[s(-1), s(1), s(2)]).unwrap());
        assert!(matches!(
            check_poincare_hopf(&q, &[s(-1), s(2)]),
            Err(Error::RootsIncomplete { found: 4, degree: 5 })
        ));
        let q = make_pointed(qq(&[0, 1]), qq(&[1])).unwrap();
        assert!(check_poincare_hopf(&q, &[s(0)]).unwrap());
        let q = make_pointed(qq(&[2, -3, 1]), qq(&[1])).unwrap();
        assert_eq!(local_newton_coefficient(&q, &s(1)).unwrap().1, s(-1));
        assert_eq!(local_newton_coefficient(&q, &s(2)).unwrap().1, s(1));
        assert!(check_poincare_hopf(&q, &[s(1), s(2)]).unwrap());
        assert_eq!(rational_roots(&example()).unwrap(), vec![s(-1), s(1), s(2)]);
    }
}
