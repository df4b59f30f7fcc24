//! Finite étale algebras `L = k[x]/(f_1) x ... x k[x]/(f_s)` with monic
//! separable factors, their elements, traces and trace forms.
//!
//! The power basis is factor-major and degree-ascending: the basis element
//! with index `offset(i) + t` is `x^t` in factor `i` and zero elsewhere.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{Matrix, RingElem};
use crate::poly::{poly_ext_gcd, poly_gcd, Polynomial, MAX_DEGREE};

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct EtaleAlgebra {
    base: FieldSpec,
    factors: Vec<Polynomial>,
    offsets: Vec<usize>,
    dimension: usize,
    /// `power_traces[i][t]` is the trace of `x^t` acting on factor `i`, `t < deg f_i`.
    power_traces: Vec<Vec<Scalar>>,
}

/// Shared handle to an algebra; elements and forms hold one each.
pub type Algebra = Arc<EtaleAlgebra>;

pub fn make_etale_algebra(base: FieldSpec, factors: Vec<Polynomial>) -> Result<Algebra> {
    EtaleAlgebra::new(base, factors)
}

impl EtaleAlgebra {
    pub fn new(base: FieldSpec, factors: Vec<Polynomial>) -> Result<Algebra> {
        if factors.is_empty() {
            return Err(Error::ZeroInput("make_etale_algebra needs at least one factor"));
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut dimension = 0;
        for f in &factors {
            if f.field() != base {
                return Err(Error::FieldMismatch(base, f.field()));
            }
            f.check_degree()?;
            match f.degree() {
                None | Some(0) => return Err(Error::ConstantFactor(f.to_string())),
                Some(_) if !f.is_monic() => return Err(Error::NonMonicFactor(f.to_string())),
                Some(d) => {
                    if !poly_gcd(f, &f.derivative())?.is_constant() {
                        return Err(Error::NonSeparable(f.to_string()));
                    }
                    offsets.push(dimension);
                    dimension += d;
                }
            }
        }
        if dimension > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(dimension));
        }
        let power_traces = factors.iter().map(power_traces).collect();
        let algebra = EtaleAlgebra { base, factors, offsets, dimension, power_traces };
        if trace_form(&algebra).det()?.is_zero() {
            return Err(Error::DegenerateTraceForm);
        }
        Ok(Arc::new(algebra))
    }

    /// `k` itself, as `k[x]/(x)`.
    pub fn trivial(base: FieldSpec) -> Algebra {
        let x = Polynomial::x(base);
        Arc::new(EtaleAlgebra {
            base,
            power_traces: vec![power_traces(&x)],
            factors: vec![x],
            offsets: vec![0],
            dimension: 1,
        })
    }

    pub fn base(&self) -> FieldSpec {
        self.base
    }

    pub fn factors(&self) -> &[Polynomial] {
        &self.factors
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// A single linear factor: the algebra is the base field.
    pub fn is_field(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].degree() == Some(1)
    }

    /// Exactly `k[x]/(x)`.
    pub fn is_trivial(&self) -> bool {
        self.factors.len() == 1 && self.factors[0] == Polynomial::x(self.base)
    }

    /// For each factor that splits into distinct linear factors over the
    /// base, its roots. `None` if some factor does not visibly split.
    pub fn split_points(&self) -> Option<Vec<Vec<Scalar>>> {
        self.factors
            .iter()
            .map(|f| {
                let roots = f.roots_in_field()?;
                (Some(roots.len()) == f.degree()).then_some(roots)
            })
            .collect()
    }

    fn factor_of_index(&self, idx: usize) -> (usize, usize) {
        let i = self.offsets.partition_point(|&o| o <= idx) - 1;
        (i, idx - self.offsets[i])
    }
}

impl fmt::Display for EtaleAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[x]/", self.base)?;
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "({factor})")?;
        }
        Ok(())
    }
}

fn power_traces(f: &Polynomial) -> Vec<Scalar> {
    let field = f.field();
    let n = f.degree().expect("nonconstant factor");
    // powers[s] = x^s mod f for s < 2n - 1
    let mut powers = Vec::with_capacity(2 * n);
    let mut cur = Polynomial::one(field);
    for _ in 0..2 * n {
        powers.push(cur.clone());
        cur = (&cur * &Polynomial::x(field)).rem(f).expect("nonzero modulus");
    }
    (0..n)
        .map(|t| (0..n).fold(Scalar::zero(field), |acc, j| &acc + &powers[t + j].coeff(j)))
        .collect()
}

fn same_algebra(a: &Algebra, b: &Algebra) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// An element of an [`EtaleAlgebra`], stored as reduced residues per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    algebra: Algebra,
    components: Vec<Polynomial>,
}

impl AlgebraElement {
    /// Reduces each component modulo its factor.
    pub fn from_components(algebra: &Algebra, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != algebra.factors.len() {
            return Err(Error::AlgebraMismatch);
        }
        let components = components
            .iter()
            .zip(&algebra.factors)
            .map(|(c, f)| c.rem(f))
            .collect::<Result<_>>()?;
        Ok(AlgebraElement { algebra: algebra.clone(), components })
    }

    /// Image of a polynomial in `x` under `k[x] -> L`.
    pub fn from_polynomial(algebra: &Algebra, p: &Polynomial) -> Result<Self> {
        Self::from_components(algebra, vec![p.clone(); algebra.factors.len()])
    }

    pub fn from_scalar(algebra: &Algebra, s: &Scalar) -> Self {
        assert_eq!(s.field(), algebra.base, "scalar over the wrong field");
        let c = Polynomial::constant(s.clone());
        AlgebraElement { algebra: algebra.clone(), components: vec![c; algebra.factors.len()] }
    }

    pub fn from_int(algebra: &Algebra, n: i64) -> Self {
        Self::from_scalar(algebra, &Scalar::from_int(algebra.base, n))
    }

    pub fn zero(algebra: &Algebra) -> Self {
        Self::from_int(algebra, 0)
    }

    pub fn one(algebra: &Algebra) -> Self {
        Self::from_int(algebra, 1)
    }

    /// The image of `x`.
    pub fn generator(algebra: &Algebra) -> Self {
        Self::from_polynomial(algebra, &Polynomial::x(algebra.base)).expect("matching factor count")
    }

    pub fn basis_element(algebra: &Algebra, idx: usize) -> Self {
        let (i, t) = algebra.factor_of_index(idx);
        let components = (0..algebra.factors.len())
            .map(|j| {
                if j == i {
                    Polynomial::monomial(Scalar::one(algebra.base), t)
                } else {
                    Polynomial::zero(algebra.base)
                }
            })
            .collect();
        AlgebraElement { algebra: algebra.clone(), components }
    }

    pub fn from_coordinates(algebra: &Algebra, coords: &[Scalar]) -> Result<Self> {
        if coords.len() != algebra.dimension {
            return Err(Error::AlgebraMismatch);
        }
        let components = algebra
            .factors
            .iter()
            .zip(&algebra.offsets)
            .map(|(f, &o)| Polynomial::new(algebra.base, coords[o..o + f.degree().unwrap()].to_vec()))
            .collect();
        Ok(AlgebraElement { algebra: algebra.clone(), components })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn coordinates(&self) -> Vec<Scalar> {
        self.components
            .iter()
            .zip(&self.algebra.factors)
            .flat_map(|(c, f)| (0..f.degree().unwrap()).map(move |t| c.coeff(t)))
            .collect()
    }

    /// The scalar value when the algebra is a field (one linear factor).
    pub fn as_scalar(&self) -> Option<Scalar> {
        self.algebra.is_field().then(|| self.components[0].coeff(0))
    }

    /// Value of component `factor` at a root of that factor.
    pub fn evaluate_component(&self, factor: usize, root: &Scalar) -> Scalar {
        self.components[factor].eval(root)
    }

    pub fn same_algebra(&self, other: &AlgebraElement) -> bool {
        same_algebra(&self.algebra, &other.algebra)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&Polynomial, &Polynomial, &Polynomial) -> Polynomial) -> Self {
        assert!(self.same_algebra(rhs), "algebra element arithmetic across different algebras");
        let components = self
            .components
            .iter()
            .zip(&rhs.components)
            .zip(&self.algebra.factors)
            .map(|((a, b), m)| f(a, b, m))
            .collect();
        AlgebraElement { algebra: self.algebra.clone(), components }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let components = self.components.iter().map(|c| c.scale(s)).collect();
        AlgebraElement { algebra: self.algebra.clone(), components }
    }

    pub fn pow(&self, exp: u64) -> Self {
        (0..exp).fold(self.one_like(), |acc, _| acc.times(self))
    }

    /// Invertible iff every residue is coprime to its factor.
    pub fn is_unit(&self) -> bool {
        self.components
            .iter()
            .zip(&self.algebra.factors)
            .all(|(c, f)| !c.is_zero() && poly_gcd(c, f).map(|g| g.is_constant()).unwrap_or(false))
    }

    /// Inverse via the extended Euclidean algorithm on each residue.
    pub fn inverse(&self) -> Option<Self> {
        let components = self
            .components
            .iter()
            .zip(&self.algebra.factors)
            .map(|(c, f)| {
                if c.is_zero() {
                    return None;
                }
                let (d, s, _) = poly_ext_gcd(c, f).ok()?;
                d.is_constant().then(|| s.rem(f).expect("nonzero modulus"))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(AlgebraElement { algebra: self.algebra.clone(), components })
    }

    /// Matrix of multiplication by `self` in the power basis; column `j`
    /// holds the coordinates of `self * b_j`.
    pub fn multiplication_matrix(&self) -> Matrix<Scalar> {
        let d = self.algebra.dimension;
        let columns: Vec<Vec<Scalar>> = (0..d)
            .map(|j| self.times(&AlgebraElement::basis_element(&self.algebra, j)).coordinates())
            .collect();
        Matrix::from_fn(d, d, |i, j| columns[j][i].clone())
    }

    /// `Tr_{L/k}`, from the precomputed traces of the power basis.
    pub fn trace(&self) -> Scalar {
        let base = self.algebra.base;
        self.components
            .iter()
            .zip(&self.algebra.power_traces)
            .fold(Scalar::zero(base), |acc, (c, traces)| {
                c.coeffs().iter().zip(traces).fold(acc, |acc, (a, t)| &acc + &(a * t))
            })
    }
}

impl RingElem for AlgebraElement {
    fn zero_like(&self) -> Self {
        AlgebraElement::zero(&self.algebra)
    }
    fn one_like(&self) -> Self {
        AlgebraElement::one(&self.algebra)
    }
    fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b, _| a + b)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b, _| a - b)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b, m| (a * b).rem(m).expect("nonzero modulus"))
    }
    fn negated(&self) -> Self {
        let components = self.components.iter().map(|c| -c).collect();
        AlgebraElement { algebra: self.algebra.clone(), components }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.as_scalar() {
            return write!(f, "{s}");
        }
        if self.components.len() == 1 {
            return write!(f, "{}", self.components[0]);
        }
        f.write_str("(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub fn multiplication_matrix(u: &AlgebraElement) -> Matrix<Scalar> {
    u.multiplication_matrix()
}

pub fn trace(u: &AlgebraElement) -> Scalar {
    u.trace()
}

pub fn is_unit(u: &AlgebraElement) -> bool {
    u.is_unit()
}

/// Gram matrix of `(u, v) -> Tr(u v)` in the power basis.
pub fn trace_form(algebra: &EtaleAlgebra) -> Matrix<Scalar> {
    // Tr(b_i b_j) vanishes across factors; within factor k it is the trace of x^(s+t) mod f_k.
    let base = algebra.base;
    let d = algebra.dimension;
    let mut gram = Matrix::from_fn(d, d, |_, _| Scalar::zero(base));
    for (k, f) in algebra.factors.iter().enumerate() {
        let n = f.degree().unwrap();
        let o = algebra.offsets[k];
        for s in 0..n {
            for t in 0..n {
                let prod = Polynomial::monomial(Scalar::one(base), s + t).rem(f).expect("nonzero modulus");
                let tr = prod
                    .coeffs()
                    .iter()
                    .zip(&algebra.power_traces[k])
                    .fold(Scalar::zero(base), |acc, (a, t)| &acc + &(a * t));
                gram.set(o + s, o + t, tr);
            }
        }
    }
    gram
}
