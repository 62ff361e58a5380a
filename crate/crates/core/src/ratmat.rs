//! Exact rational scalars and small dense matrices.
//!
//! Every matrix built by this crate (elevation matrices, dual transforms,
//! collocation matrices, rate constants) is held exactly as a [`Mat`] of
//! [`Rational`] entries. Floating point only appears when a matrix is
//! applied to sampled data.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("dimension mismatch: {op} of {lhs:?} and {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular (no pivot in column {column})")]
    Singular { column: usize },
    #[error("row index {index} out of range for {rows} rows")]
    IndexOutOfRange { index: usize, rows: usize },
    #[error("entries length {len} does not match {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// `p/q` as a [`Rational`]. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a [`Rational`].
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, MatError> {
    let s = s.trim();
    Rational::from_str(s).map_err(|_| MatError::Parse(s.to_string()))
}

pub fn to_f64(r: &Rational) -> f64 {
    // Large numerators and denominators overflow f64 individually even when
    // the quotient is moderate; `ToPrimitive` on `Ratio<BigInt>` handles that.
    r.to_f64().unwrap_or(f64::NAN)
}

/// Field operations shared by the exact and floating-point evaluation paths.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Num {
    fn from_rational(r: &Rational) -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }

    fn from_usize(n: usize) -> Self {
        n as f64
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> Rational {
    Rational::from_integer(binomial_int(n, k))
}

pub(crate) fn binomial_int(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, MatError> {
        if entries.len() != rows * cols {
            return Err(MatError::BadShape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(Mat {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Mat {
            rows,
            cols,
            entries,
        }
    }

    /// Build from integer rows scaled by `1/denom`, the way tables of
    /// dual transforms are usually printed.
    pub fn from_scaled_rows(denom: i64, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rat(rows[i][j], denom))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn scale(&self, c: &Rational) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat, MatError> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    pub fn add(&self, other: &Mat) -> Result<Mat, MatError> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    fn zip_with(
        &self,
        other: &Mat,
        op: &'static str,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Mat, MatError> {
        if self.shape() != other.shape() {
            return Err(MatError::DimensionMismatch {
                op,
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// Exact matrix-vector product.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, MatError> {
        if v.len() != self.cols {
            return Err(MatError::DimensionMismatch {
                op: "mul_vec",
                lhs: self.shape(),
                rhs: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Matrix-vector product in floating point, with the matrix rounded
    /// entrywise first.
    pub fn mul_vec_f64(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "mul_vec_f64 dimension mismatch");
        let m = self.to_f64_rows();
        m.iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(to_f64).collect())
            .collect()
    }

    /// Least common multiple of the entry denominators, useful to print a
    /// matrix as `(1/d) * integer matrix`.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.entries
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat, MatError> {
    if a.cols != b.rows {
        return Err(MatError::DimensionMismatch {
            op: "mul",
            lhs: a.shape(),
            rhs: b.shape(),
        });
    }
    Ok(Mat::from_fn(a.rows, b.cols, |i, j| {
        (0..a.cols).fold(Rational::zero(), |acc, l| {
            let x = &a[(i, l)];
            if x.is_zero() {
                acc
            } else {
                acc + x * &b[(l, j)]
            }
        })
    }))
}

/// Exact inverse by Gauss-Jordan elimination.
///
/// The pivot is the first nonzero entry at or below the diagonal in each
/// column; exact arithmetic needs no magnitude pivoting.
pub fn mat_inv(a: &Mat) -> Result<Mat, MatError> {
    if !a.is_square() {
        return Err(MatError::NotSquare(a.rows, a.cols));
    }
    let n = a.rows;
    let mut work = a.clone();
    let mut inv = Mat::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !work[(r, col)].is_zero())
            .ok_or(MatError::Singular { column: col })?;
        if pivot != col {
            swap_rows(&mut work, pivot, col);
            swap_rows(&mut inv, pivot, col);
        }
        let p = work[(col, col)].recip();
        for j in 0..n {
            work[(col, j)] = &work[(col, j)] * &p;
            inv[(col, j)] = &inv[(col, j)] * &p;
        }
        for r in 0..n {
            if r == col || work[(r, col)].is_zero() {
                continue;
            }
            let factor = work[(r, col)].clone();
            for j in 0..n {
                let w = &work[(col, j)] * &factor;
                work[(r, j)] -= w;
                let v = &inv[(col, j)] * &factor;
                inv[(r, j)] -= v;
            }
        }
    }
    Ok(inv)
}

fn swap_rows(m: &mut Mat, a: usize, b: usize) {
    for j in 0..m.cols {
        m.entries.swap(a * m.cols + j, b * m.cols + j);
    }
}

/// Rows `indices[0], indices[1], ...` of `a`, in that order.
pub fn row_select(a: &Mat, indices: &[usize]) -> Result<Mat, MatError> {
    if let Some(&bad) = indices.iter().find(|&&i| i >= a.rows) {
        return Err(MatError::IndexOutOfRange {
            index: bad,
            rows: a.rows,
        });
    }
    Ok(Mat::from_fn(indices.len(), a.cols, |i, j| {
        a[(indices[i], j)].clone()
    }))
}

/// Maximum absolute row sum.
pub fn inf_norm(a: &Mat) -> Rational {
    (0..a.rows)
        .map(|i| {
            a.row(i)
                .iter()
                .fold(Rational::zero(), |acc, x| acc + x.abs())
        })
        .max()
        .unwrap_or_else(Rational::zero)
}

/// True iff every row sums exactly to one.
pub fn is_row_affine(a: &Mat) -> bool {
    (0..a.rows).all(|i| a.row(i).iter().sum::<Rational>().is_one())
}

/// Serialized form: `{"rows":r,"cols":c,"entries":["p/q",...]}`.
#[derive(Serialize, Deserialize)]
struct MatRepr {
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatRepr::deserialize(deserializer)?;
        let entries = repr
            .entries
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Mat::new(repr.rows, repr.cols, entries).map_err(D::Error::custom)
    }
}
