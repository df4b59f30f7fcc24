//! Dense matrices over commutative rings.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Scalar;

/// Rank above which cofactor determinants over non-field algebras are refused.
pub const COFACTOR_RANK_LIMIT: usize = 8;

/// Commutative ring operations needed by [`Matrix`]. Zero and one are taken
/// "like" an existing element because they depend on the field or algebra.
pub trait RingElem: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
}

impl RingElem for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero(self.field())
    }
    fn one_like(&self) -> Self {
        Scalar::one(self.field())
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: RingElem> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::MalformedMatrix("rows have different lengths".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn empty() -> Self {
        Matrix { rows: 0, cols: 0, data: Vec::new() }
    }

    pub fn identity(n: usize, one: &T) -> Self {
        let zero = one.zero_like();
        Self::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                entries[i].zero_like()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn diagonal_entries(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn map<U: RingElem>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: RingElem>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix dimensions do not agree");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = self.get(i, 0).zero_like();
            for k in 0..self.cols {
                acc = acc.plus(&self.get(i, k).times(rhs.get(k, j)));
            }
            acc
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix dimensions do not agree");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        let zero = self.data.first().or(rhs.data.first()).map(RingElem::zero_like);
        let (r, c) = (self.rows + rhs.rows, self.cols + rhs.cols);
        if r == 0 || c == 0 {
            return Matrix { rows: r, cols: c, data: Vec::new() };
        }
        let zero = zero.expect("some entry exists");
        Self::from_fn(r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                rhs.get(i - self.rows, j - self.cols).clone()
            } else {
                zero.clone()
            }
        })
    }

    pub fn kronecker(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self.get(i / rhs.rows, j / rhs.cols).times(rhs.get(i % rhs.rows, j % rhs.cols))
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[target] += c * row[source]`
    pub fn add_row_multiple(&mut self, target: usize, source: usize, c: &T) {
        for j in 0..self.cols {
            let v = self.get(target, j).plus(&c.times(self.get(source, j)));
            self.set(target, j, v);
        }
    }

    /// `col[target] += c * col[source]`
    pub fn add_col_multiple(&mut self, target: usize, source: usize, c: &T) {
        for i in 0..self.rows {
            let v = self.get(i, target).plus(&c.times(self.get(i, source)));
            self.set(i, target, v);
        }
    }

    /// Determinant by cofactor expansion along rows, memoized over column
    /// subsets; division free, so valid over rings with zero divisors.
    pub fn det_cofactor(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Err(Error::MalformedMatrix("determinant of an empty matrix needs a ring".into()));
        }
        if n > 20 {
            return Err(Error::RankTooLarge(n));
        }
        // minors[mask] = det of the bottom |mask| rows restricted to the columns in mask
        let zero = self.get(0, 0).zero_like();
        let mut minors: Vec<Option<T>> = vec![None; 1 << n];
        minors[0] = Some(zero.one_like());
        for mask in 1usize..(1 << n) {
            let k = mask.count_ones() as usize;
            let row = n - k;
            let mut acc = zero.clone();
            let mut sign_positive = true;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let entry = self.get(row, col);
                if !entry.is_zero() {
                    let minor = minors[mask & !(1 << col)].as_ref().expect("computed earlier");
                    let term = entry.times(minor);
                    acc = if sign_positive { acc.plus(&term) } else { acc.minus(&term) };
                }
                sign_positive = !sign_positive;
            }
            minors[mask] = Some(acc);
        }
        Ok(minors[(1 << n) - 1].take().expect("full mask"))
    }
}

impl Matrix<Scalar> {
    /// Fraction-free Bareiss determinant over a field.
    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Err(Error::MalformedMatrix("determinant of an empty matrix needs a field".into()));
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = self.get(0, 0).one_like();
        for k in 0..n.saturating_sub(1) {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        negate = !negate;
                    }
                    None => return Ok(prev.zero_like()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(m.get(i, j) * m.get(k, k)) - &(m.get(i, k) * m.get(k, j));
                    m.set(i, j, num.checked_div(&prev).expect("Bareiss pivot is nonzero"));
                }
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if negate { -d } else { d })
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pivot, rank);
            let inv = m.get(rank, col).inv().expect("nonzero pivot");
            for i in rank + 1..self.rows {
                let c = -&(m.get(i, col) * &inv);
                m.add_row_multiple(i, rank, &c);
            }
            rank += 1;
        }
        rank
    }

    /// Inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<Scalar>> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, &self.get(0, 0).one_like());
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a.get(i, col).is_zero())?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a.get(col, col).inv().expect("nonzero pivot");
            for j in 0..n {
                a.set(col, j, a.get(col, j) * &p);
                inv.set(col, j, inv.get(col, j) * &p);
            }
            for i in 0..n {
                if i != col && !a.get(i, col).is_zero() {
                    let c = -a.get(i, col);
                    a.add_row_multiple(i, col, &c);
                    inv.add_row_multiple(i, col, &c);
                }
            }
        }
        Some(inv)
    }

    pub fn trace(&self) -> Scalar {
        (1..self.rows.min(self.cols)).fold(self.get(0, 0).clone(), |acc, i| &acc + self.get(i, i))
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(0);
        for i in 0..self.rows {
            f.write_str("|")?;
            for j in 0..self.cols {
                write!(f, " {:>width$}", cells[i * self.cols + j])?;
            }
            f.write_str(" |")?;
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}
