//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use gwdeg_core::classify::FormInvariants;
use gwdeg_core::etale::{Algebra, AlgebraElement, EtaleAlgebra};
use gwdeg_core::{FieldSpec, GrothendieckWittClass, Matrix, Polynomial, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const SMALL_PRIMES: [u64; 4] = [3, 5, 7, 11];

pub fn q(n: i64) -> Scalar {
    Scalar::from_int(FieldSpec::Rationals, n)
}

pub fn qf(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(FieldSpec::Rationals, n, d).unwrap()
}

pub fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

pub fn scalar_matrix(field: FieldSpec, rows: &[&[i64]]) -> Matrix<Scalar> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(field, v)).collect()).collect())
        .unwrap()
}

pub fn class(field: FieldSpec, rows: &[&[i64]]) -> GrothendieckWittClass {
    GrothendieckWittClass::over_field(field, &scalar_matrix(field, rows)).unwrap()
}

pub fn diag_class(field: FieldSpec, entries: &[Scalar]) -> GrothendieckWittClass {
    GrothendieckWittClass::over_field(field, &Matrix::diagonal(entries)).unwrap()
}

/// `QQ[x]/(x^2 - 1)` and the form `[[1, 2], [2, x]]` over it.
pub fn example_algebra() -> Algebra {
    EtaleAlgebra::new(FieldSpec::Rationals, vec![Polynomial::from_ints(FieldSpec::Rationals, &[-1, 0, 1])]).unwrap()
}

pub fn example_beta() -> GrothendieckWittClass {
    let alg = example_algebra();
    let e = |n| AlgebraElement::from_int(&alg, n);
    let x = AlgebraElement::generator(&alg);
    let m = Matrix::from_rows(vec![vec![e(1), e(2)], vec![e(2), x]]).unwrap();
    GrothendieckWittClass::new(&alg, m).unwrap()
}

pub fn example_f(field: FieldSpec) -> Polynomial {
    Polynomial::from_ints(field, &[8, -12, -2, 11, -6, 1])
}

pub fn example_g(field: FieldSpec) -> Polynomial {
    Polynomial::from_ints(field, &[1, 7, -5, 0, 1])
}

/// Invariants agree, comparing Hasse invariants on the union of supports.
pub fn invariants_agree(a: &FormInvariants, b: &FormInvariants) -> bool {
    let hasse_ok = match (&a.hasse, &b.hasse) {
        (Some(ha), Some(hb)) => ha.keys().chain(hb.keys()).all(|v| a.hasse_at(v) == b.hasse_at(v)),
        (None, None) => true,
        _ => false,
    };
    a.field == b.field && a.rank == b.rank && a.signature == b.signature && a.discriminant == b.discriminant && hasse_ok
}

pub fn random_scalar(rng: &mut ChaCha8Rng, field: FieldSpec, bound: i64) -> Scalar {
    Scalar::from_int(field, rng.gen_range(-bound..=bound))
}

pub fn random_nonzero(rng: &mut ChaCha8Rng, field: FieldSpec, bound: i64) -> Scalar {
    loop {
        let s = random_scalar(rng, field, bound);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize, bound: i64) -> Matrix<Scalar> {
    Matrix::from_fn(n, n, |_, _| random_scalar(rng, field, bound))
}

pub fn random_invertible(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize, bound: i64) -> Matrix<Scalar> {
    loop {
        let m = random_matrix(rng, field, n, bound);
        if !m.det().unwrap().is_zero() {
            return m;
        }
    }
}

/// A random symmetric matrix with nonzero determinant.
pub fn random_form(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize, bound: i64) -> Matrix<Scalar> {
    loop {
        let mut m = random_matrix(rng, field, n, bound);
        for i in 0..n {
            for j in 0..i {
                let v = m.get(j, i).clone();
                m.set(i, j, v);
            }
        }
        if !m.det().unwrap().is_zero() {
            return m;
        }
    }
}

pub fn random_algebra_element(rng: &mut ChaCha8Rng, alg: &Algebra, bound: i64) -> AlgebraElement {
    let coords: Vec<Scalar> = (0..alg.dimension()).map(|_| random_scalar(rng, alg.base(), bound)).collect();
    AlgebraElement::from_coordinates(alg, &coords).unwrap()
}

/// A random symmetric matrix over `alg` whose determinant is a unit.
pub fn random_algebra_form(rng: &mut ChaCha8Rng, alg: &Algebra, n: usize, bound: i64) -> GrothendieckWittClass {
    loop {
        let mut rows = vec![vec![AlgebraElement::zero(alg); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let e = random_algebra_element(rng, alg, bound);
                rows[i][j] = e.clone();
                rows[j][i] = e;
            }
        }
        if let Ok(beta) = GrothendieckWittClass::new(alg, Matrix::from_rows(rows).unwrap()) {
            return beta;
        }
    }
}

/// Distinct random points of the field.
pub fn distinct_points(rng: &mut ChaCha8Rng, field: FieldSpec, count: usize, bound: i64) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::new();
    while out.len() < count {
        let r = random_scalar(rng, field, bound);
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// `prod (x - r_i)^{m_i}`.
pub fn split_polynomial(roots: &[Scalar], mults: &[usize]) -> Polynomial {
    let field = roots[0].field();
    roots.iter().zip(mults).fold(Polynomial::one(field), |acc, (r, &m)| &acc * &Polynomial::linear(r).pow(m as u32))
}

pub fn random_polynomial(rng: &mut ChaCha8Rng, field: FieldSpec, degree: usize, bound: i64) -> Polynomial {
    let mut coeffs: Vec<Scalar> = (0..degree).map(|_| random_scalar(rng, field, bound)).collect();
    coeffs.push(random_nonzero(rng, field, bound));
    Polynomial::new(field, coeffs)
}

/// Split monic `f` of degree at most `max_degree` and a denominator of
/// smaller degree vanishing at none of its roots.
pub fn random_split_pair(
    rng: &mut ChaCha8Rng,
    field: FieldSpec,
    max_degree: usize,
) -> (Polynomial, Polynomial, Vec<Scalar>, Vec<usize>) {
    let bound = match field.modulus() {
        Some(p) => p as i64,
        None => 6,
    };
    loop {
        let n = rng.gen_range(1..=max_degree);
        let distinct_max = field.modulus().map_or(n, |p| n.min(p as usize));
        let k = rng.gen_range(1..=distinct_max);
        let roots = distinct_points(rng, field, k, bound);
        let mut mults = vec![1usize; k];
        for _ in k..n {
            mults[rng.gen_range(0..k)] += 1;
        }
        let f = split_polynomial(&roots, &mults);
        let dg = rng.gen_range(0..n);
        let g = random_polynomial(rng, field, dg, 9);
        if roots.iter().all(|r| !g.eval(r).is_zero()) {
            return (f, g, roots, mults);
        }
    }
}

/// Resultant as the determinant of the Sylvester matrix.
pub fn sylvester_resultant(f: &Polynomial, g: &Polynomial) -> Scalar {
    let (m, n) = (f.degree().unwrap(), g.degree().unwrap());
    let size = m + n;
    let field = f.field();
    if size == 0 {
        return Scalar::one(field);
    }
    let mat = Matrix::from_fn(size, size, |i, j| {
        if i < n {
            // row i: coefficients of x^(n-1-i) f, highest first
            let k = j as isize - i as isize;
            if (0..=m as isize).contains(&k) { f.coeff(m - k as usize) } else { Scalar::zero(field) }
        } else {
            let r = i - n;
            let k = j as isize - r as isize;
            if (0..=n as isize).contains(&k) { g.coeff(n - k as usize) } else { Scalar::zero(field) }
        }
    });
    mat.det().unwrap()
}

/// Coefficients `c_{i,k}` of `g/f = sum_i sum_{k=1}^{m_i} c_{i,k} / (x - r_i)^k`,
/// by solving the linear system `g = sum c_{i,k} f / (x - r_i)^k`.
pub fn partial_fractions(g: &Polynomial, roots: &[Scalar], mults: &[usize]) -> Vec<Vec<Scalar>> {
    let f = split_polynomial(roots, mults);
    let n = f.degree().unwrap();
    let mut columns = Vec::new();
    for (r, &m) in roots.iter().zip(mults) {
        for k in 1..=m {
            let basis = f.exact_div(&Polynomial::linear(r).pow(k as u32)).unwrap().unwrap();
            columns.push(basis);
        }
    }
    let a = Matrix::from_fn(n, n, |i, j| columns[j].coeff(i));
    let inv = a.inverse().expect("partial fraction basis is a basis");
    let rhs = Matrix::from_fn(n, 1, |i, _| g.coeff(i));
    let sol = inv.mul(&rhs);
    let mut out = Vec::new();
    let mut idx = 0;
    for &m in mults {
        out.push((0..m).map(|k| sol.get(idx + k, 0).clone()).collect());
        idx += m;
    }
    out
}

/// All matrices of size `n` over `GF(p)`.
pub fn all_matrices(p: u64, n: usize) -> Vec<Matrix<Scalar>> {
    let field = gf(p);
    let cells = n * n;
    let total = (p as usize).pow(cells as u32);
    (0..total)
        .map(|mut code| {
            let mut entries = Vec::with_capacity(cells);
            for _ in 0..cells {
                entries.push(Scalar::from_int(field, (code % p as usize) as i64));
                code /= p as usize;
            }
            Matrix::from_fn(n, n, |i, j| entries[i * n + j].clone())
        })
        .collect()
}

/// Nondegenerate symmetric matrices of size `n` over `GF(p)`.
pub fn all_forms(p: u64, n: usize) -> Vec<Matrix<Scalar>> {
    all_matrices(p, n).into_iter().filter(|m| m.is_symmetric() && !m.det().unwrap().is_zero()).collect()
}

/// Every `P^T M P` for `P` in `gl`.
pub fn congruence_orbit(m: &Matrix<Scalar>, gl: &[Matrix<Scalar>]) -> HashSet<Vec<Vec<Scalar>>> {
    gl.iter().map(|pm| pm.transpose().mul(m).mul(pm).to_rows()).collect()
}

pub fn general_linear(p: u64, n: usize) -> Vec<Matrix<Scalar>> {
    all_matrices(p, n).into_iter().filter(|m| !m.det().unwrap().is_zero()).collect()
}
