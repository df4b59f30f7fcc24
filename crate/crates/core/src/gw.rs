//! Grothendieck–Witt classes over base fields and finite étale algebras.

use std::fmt;

use crate::error::{Error, Result};
use crate::etale::{Algebra, AlgebraElement, EtaleAlgebra};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{Matrix, RingElem, COFACTOR_RANK_LIMIT};

/// A class in `GW(L)`, represented by a symmetric Gram matrix whose
/// determinant is a unit of `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrothendieckWittClass {
    algebra: Algebra,
    gram: Matrix<AlgebraElement>,
}

/// Determinant of a square matrix over an algebra: Bareiss when the algebra
/// is a field, cofactor expansion (rank at most 8) otherwise.
pub fn algebra_det(algebra: &Algebra, m: &Matrix<AlgebraElement>) -> Result<AlgebraElement> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    if m.rows() == 0 {
        return Ok(AlgebraElement::one(algebra));
    }
    if algebra.is_field() {
        let scalars = m.map(|e| e.as_scalar().expect("field algebra"));
        return Ok(AlgebraElement::from_scalar(algebra, &scalars.det()?));
    }
    if m.rows() > COFACTOR_RANK_LIMIT {
        return Err(Error::RankTooLarge(m.rows()));
    }
    m.det_cofactor()
}

pub fn make_gw_class(algebra: &Algebra, gram: Matrix<AlgebraElement>) -> Result<GrothendieckWittClass> {
    GrothendieckWittClass::new(algebra, gram)
}

impl GrothendieckWittClass {
    pub fn new(algebra: &Algebra, gram: Matrix<AlgebraElement>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare(gram.rows(), gram.cols()));
        }
        if gram.entries().any(|e| e.algebra() != algebra) {
            return Err(Error::AlgebraMismatch);
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if !algebra_det(algebra, &gram)?.is_unit() {
            return Err(Error::Degenerate);
        }
        Ok(GrothendieckWittClass { algebra: algebra.clone(), gram })
    }

    /// A class over the base field `field`, from a scalar Gram matrix.
    pub fn over_field(field: FieldSpec, gram: &Matrix<Scalar>) -> Result<Self> {
        let algebra = EtaleAlgebra::trivial(field);
        if let Some(bad) = gram.entries().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        let lifted = gram.map(|s| AlgebraElement::from_scalar(&algebra, s));
        Self::new(&algebra, lifted)
    }

    pub fn diagonal(algebra: &Algebra, entries: &[AlgebraElement]) -> Result<Self> {
        if entries.is_empty() {
            return Ok(Self::zero(algebra));
        }
        Self::new(algebra, Matrix::diagonal(entries))
    }

    /// The rank-zero class, the identity for [`add_gw`].
    pub fn zero(algebra: &Algebra) -> Self {
        GrothendieckWittClass { algebra: algebra.clone(), gram: Matrix::empty() }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn matrix(&self) -> &Matrix<AlgebraElement> {
        &self.gram
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// The base field, when the class lives over a field.
    pub fn base_field(&self) -> Option<FieldSpec> {
        self.algebra.is_field().then(|| self.algebra.base())
    }

    /// The Gram matrix as scalars, when the class lives over a field.
    pub fn scalar_matrix(&self) -> Option<Matrix<Scalar>> {
        if !self.algebra.is_field() {
            return None;
        }
        Some(self.gram.map(|e| e.as_scalar().expect("field algebra")))
    }

    pub fn determinant(&self) -> AlgebraElement {
        algebra_det(&self.algebra, &self.gram).expect("validated at construction")
    }

    fn check_algebra(&self, other: &Self) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// Symmetric Gaussian congruence. Returns the diagonal class and an
    /// invertible `P` with `P^T M P = D`.
    ///
    /// Pivots are taken from the leading diagonal first. Over a field a zero
    /// diagonal is repaired with `e_i <- e_i + e_j`; over other algebras the
    /// pivot must be a unit and small combinations `e_i + c e_j` are tried
    /// before giving up with [`Error::NoUnitPivot`].
    pub fn diagonalize(&self) -> Result<(GrothendieckWittClass, Matrix<AlgebraElement>)> {
        let n = self.rank();
        let one = AlgebraElement::one(&self.algebra);
        let mut a = self.gram.clone();
        let mut p = Matrix::identity(n, &one);
        let multipliers = pivot_multipliers(&self.algebra);
        for k in 0..n {
            if !a.get(k, k).is_unit() {
                if let Some(j) = (k + 1..n).find(|&j| a.get(j, j).is_unit()) {
                    a.swap_rows(k, j);
                    a.swap_cols(k, j);
                    p.swap_cols(k, j);
                } else {
                    let (i, j, c) = find_combination(&a, k, &multipliers).ok_or(Error::NoUnitPivot)?;
                    // e_i <- e_i + c e_j, then move e_i to position k
                    a.add_row_multiple(i, j, &c);
                    a.add_col_multiple(i, j, &c);
                    p.add_col_multiple(i, j, &c);
                    a.swap_rows(k, i);
                    a.swap_cols(k, i);
                    p.swap_cols(k, i);
                }
            }
            let inv = a.get(k, k).inverse().expect("pivot is a unit");
            for j in k + 1..n {
                if a.get(k, j).is_zero() {
                    continue;
                }
                let c = a.get(k, j).times(&inv).negated();
                a.add_row_multiple(j, k, &c);
                a.add_col_multiple(j, k, &c);
                p.add_col_multiple(j, k, &c);
            }
        }
        debug_assert!(a.is_diagonal());
        let d = GrothendieckWittClass { algebra: self.algebra.clone(), gram: a };
        Ok((d, p))
    }

    /// Transfer along `Tr_{L/k}`: the Gram matrix of `Tr . beta` on `L^n`
    /// viewed as a `k`-space of dimension `n d`. Row and column `i d + a`
    /// correspond to `b_a e_i`.
    pub fn transfer(&self) -> GrothendieckWittClass {
        let base = self.algebra.base();
        let trivial = EtaleAlgebra::trivial(base);
        let d = self.algebra.dimension();
        let basis: Vec<AlgebraElement> =
            (0..d).map(|a| AlgebraElement::basis_element(&self.algebra, a)).collect();
        let size = self.rank() * d;
        let gram = Matrix::from_fn(size, size, |r, c| {
            let (i, a) = (r / d, r % d);
            let (j, b) = (c / d, c % d);
            let tr = basis[a].times(&basis[b]).times(self.gram.get(i, j)).trace();
            AlgebraElement::from_scalar(&trivial, &tr)
        });
        // nondegenerate because the trace pairing is
        GrothendieckWittClass { algebra: trivial, gram }
    }

    /// The `n x n` matrix of entrywise traces `Tr(beta_ij)`; may be degenerate.
    pub fn transfer_entrywise(&self) -> Result<GrothendieckWittClass> {
        let base = self.algebra.base();
        let traces = self.gram.map(|e| e.trace());
        if self.rank() == 0 {
            return Ok(GrothendieckWittClass::zero(&EtaleAlgebra::trivial(base)));
        }
        GrothendieckWittClass::over_field(base, &traces)
    }
}

fn pivot_multipliers(algebra: &Algebra) -> Vec<AlgebraElement> {
    let base = algebra.base();
    let mut out: Vec<AlgebraElement> = [1, -1, 2, -2]
        .iter()
        .map(|&c| AlgebraElement::from_int(algebra, c))
        .collect();
    if algebra.is_field() {
        return out;
    }
    let x = AlgebraElement::generator(algebra);
    for t in 1..algebra.dimension().min(4) {
        let xt = x.pow(t as u64);
        for c in [0, 1, -1, 2, -2] {
            for s in [1, -1] {
                let shift = AlgebraElement::from_scalar(algebra, &Scalar::from_int(base, c));
                out.push(shift.plus(&xt.scale(&Scalar::from_int(base, s))));
            }
        }
    }
    out.extend((0..algebra.dimension()).map(|a| AlgebraElement::basis_element(algebra, a)));
    out
}

fn find_combination(
    a: &Matrix<AlgebraElement>,
    k: usize,
    multipliers: &[AlgebraElement],
) -> Option<(usize, usize, AlgebraElement)> {
    let n = a.rows();
    let two = a.get(k, k).one_like().plus(&a.get(k, k).one_like());
    for i in k..n {
        for j in k..n {
            if i == j || a.get(i, j).is_zero() {
                continue;
            }
            for c in multipliers {
                // (e_i + c e_j)^T A (e_i + c e_j)
                let v = a
                    .get(i, i)
                    .plus(&two.times(c).times(a.get(i, j)))
                    .plus(&c.times(c).times(a.get(j, j)));
                if v.is_unit() {
                    return Some((i, j, c.clone()));
                }
            }
        }
    }
    None
}

pub fn add_gw(a: &GrothendieckWittClass, b: &GrothendieckWittClass) -> Result<GrothendieckWittClass> {
    a.check_algebra(b)?;
    Ok(GrothendieckWittClass { algebra: a.algebra.clone(), gram: a.gram.direct_sum(&b.gram) })
}

pub fn multiply_gw(a: &GrothendieckWittClass, b: &GrothendieckWittClass) -> Result<GrothendieckWittClass> {
    a.check_algebra(b)?;
    Ok(GrothendieckWittClass { algebra: a.algebra.clone(), gram: a.gram.kronecker(&b.gram) })
}

pub fn get_diagonal_class(beta: &GrothendieckWittClass) -> Result<(GrothendieckWittClass, Matrix<AlgebraElement>)> {
    beta.diagonalize()
}

pub fn transfer_gw(beta: &GrothendieckWittClass) -> GrothendieckWittClass {
    beta.transfer()
}

pub fn transfer_gw_entrywise(beta: &GrothendieckWittClass) -> Result<GrothendieckWittClass> {
    beta.transfer_entrywise()
}

impl fmt::Display for GrothendieckWittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() == 0 {
            return f.write_str("(rank 0)");
        }
        write!(f, "{}", self.gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etale::make_etale_algebra;
    use crate::poly::Polynomial;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn qm(rows: &[&[i64]]) -> Matrix<Scalar> {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(Q, v)).collect()).collect(),
        )
        .unwrap()
    }

    fn qclass(rows: &[&[i64]]) -> GrothendieckWittClass {
        GrothendieckWittClass::over_field(Q, &qm(rows)).unwrap()
    }

    fn example_beta() -> GrothendieckWittClass {
        let l = make_etale_algebra(Q, vec![Polynomial::from_ints(Q, &[-1, 0, 1])]).unwrap();
        let x = AlgebraElement::generator(&l);
        let c = |n| AlgebraElement::from_int(&l, n);
        let m = Matrix::from_rows(vec![vec![c(1), c(2)], vec![c(2), x]]).unwrap();
        make_gw_class(&l, m).unwrap()
    }

    fn witness_holds(beta: &GrothendieckWittClass) {
        let (d, p) = beta.diagonalize().unwrap();
        assert!(d.matrix().is_diagonal());
        assert_eq!(&p.transpose().mul(beta.matrix()).mul(&p), d.matrix());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(qclass(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(GrothendieckWittClass::over_field(Q, &qm(&[&[1, 1], &[1, 1]])), Err(Error::Degenerate));
        assert_eq!(GrothendieckWittClass::over_field(Q, &qm(&[&[1, 2], &[3, 1]])), Err(Error::NotSymmetric));
        let l = example_beta().algebra().clone();
        let x_minus_1 = AlgebraElement::from_polynomial(&l, &Polynomial::from_ints(Q, &[-1, 1])).unwrap();
        assert_eq!(
            make_gw_class(&l, Matrix::diagonal(&[x_minus_1])),
            Err(Error::Degenerate)
        );
    }

    #[test]
    fn ring_operations() {
        let sum = add_gw(&qclass(&[&[1]]), &qclass(&[&[-1]])).unwrap();
        assert_eq!(sum.matrix(), qclass(&[&[1, 0], &[0, -1]]).matrix());
        let prod = multiply_gw(&qclass(&[&[2]]), &qclass(&[&[3]])).unwrap();
        assert_eq!(prod.matrix(), qclass(&[&[6]]).matrix());
        let prod = multiply_gw(&qclass(&[&[1, 0], &[0, 2]]), &qclass(&[&[1, 0], &[0, -1]])).unwrap();
        let expected = qm(&[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, -2]]);
        assert_eq!(prod.scalar_matrix().unwrap(), expected);
        assert_eq!(add_gw(&example_beta(), &qclass(&[&[1]])), Err(Error::AlgebraMismatch));
        let z = GrothendieckWittClass::zero(example_beta().algebra());
        assert_eq!(add_gw(&z, &example_beta()).unwrap(), example_beta());
    }

    #[test]
    fn diagonal_class_of_example_form() {
        let beta = example_beta();
        let (d, _) = beta.diagonalize().unwrap();
        let l = beta.algebra();
        let x_minus_4 = AlgebraElement::from_polynomial(l, &Polynomial::from_ints(Q, &[-4, 1])).unwrap();
        assert_eq!(d.matrix(), &Matrix::diagonal(&[AlgebraElement::one(l), x_minus_4]));
        witness_holds(&beta);
    }

    #[test]
    fn diagonalization_edge_cases() {
        let diag = qclass(&[&[3, 0], &[0, -5]]);
        let (d, p) = diag.diagonalize().unwrap();
        assert_eq!(d, diag);
        assert_eq!(p, Matrix::identity(2, &AlgebraElement::one(diag.algebra())));
        let hyp = qclass(&[&[0, 1], &[1, 0]]);
        let (d, _) = hyp.diagonalize().unwrap();
        let half = Scalar::from_ratio(Q, -1, 2).unwrap();
        assert_eq!(d.scalar_matrix().unwrap(), Matrix::diagonal(&[Scalar::from_int(Q, 2), half]));
        witness_holds(&hyp);
        witness_holds(&qclass(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
    }

    #[test]
    fn transfers_of_example_form() {
        let beta = example_beta();
        let full = beta.transfer();
        let expected = qm(&[&[2, 0, 4, 0], &[0, 2, 0, 4], &[4, 0, 0, 2], &[0, 4, 2, 0]]);
        assert_eq!(full.scalar_matrix().unwrap(), expected);
        assert_eq!(full.scalar_matrix().unwrap().det().unwrap(), Scalar::from_int(Q, 240));
        let entrywise = beta.transfer_entrywise().unwrap();
        assert_eq!(entrywise.scalar_matrix().unwrap(), qm(&[&[2, 4], &[4, 0]]));
        let (d, _) = entrywise.diagonalize().unwrap();
        assert_eq!(d.scalar_matrix().unwrap(), qm(&[&[2, 0], &[0, -8]]));
    }

    #[test]
    fn transfer_edge_cases() {
        let beta = qclass(&[&[1, 2], &[2, 7]]);
        assert_eq!(beta.transfer(), beta);
        assert_eq!(beta.transfer_entrywise().unwrap(), beta);
        let l = example_beta().algebra().clone();
        let one = GrothendieckWittClass::diagonal(&l, &[AlgebraElement::one(&l)]).unwrap();
        assert_eq!(one.transfer().scalar_matrix().unwrap(), crate::etale::trace_form(&l));
        assert_eq!(one.transfer_entrywise().unwrap().scalar_matrix().unwrap(), qm(&[&[2]]));
        let x = GrothendieckWittClass::diagonal(&l, &[AlgebraElement::generator(&l)]).unwrap();
        assert_eq!(x.transfer_entrywise(), Err(Error::Degenerate));
    }
}
