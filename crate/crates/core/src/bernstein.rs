//! Bernstein basis over a general interval `[a, b]`.
//!
//! All evaluation happens in the local parameter `u = (t - a) / (b - a)`.
//! Polynomials are stored in B-form; functionals act on them through the
//! local power-form coefficients, so no numerical differentiation occurs.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ratmat::{binomial, binomial_int, Mat, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BernsteinError {
    #[error("basis index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("cannot elevate degree {m} to lower degree {n}")]
    ElevationOrder { m: usize, n: usize },
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("polynomial needs at least one coefficient")]
    EmptyCoefficients,
    #[error("{len} power coefficients do not fit in degree {n}")]
    TooManyCoefficients { len: usize, n: usize },
    #[error("node vector needs degree >= 1")]
    DegreeTooLow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self, BernsteinError> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Interval { a, b })
        } else {
            Err(BernsteinError::InvalidInterval { a, b })
        }
    }

    pub fn unit() -> Self {
        Interval { a: 0.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn to_local(&self, t: f64) -> f64 {
        (t - self.a) / (self.b - self.a)
    }

    pub fn from_local(&self, u: f64) -> f64 {
        self.a + u * (self.b - self.a)
    }

    /// `count` equally spaced points from `a` to `b` inclusive.
    pub fn grid(&self, count: usize) -> Vec<f64> {
        match count {
            0 => Vec::new(),
            1 => vec![self.a],
            _ => (0..count)
                .map(|i| {
                    if i + 1 == count {
                        self.b
                    } else {
                        self.from_local(i as f64 / (count - 1) as f64)
                    }
                })
                .collect(),
        }
    }
}

impl Default for Interval {
    fn default() -> Self {
        Self::unit()
    }
}

/// Polynomial in B-form over an interval; degree is `coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BPoly<T = f64> {
    interval: Interval,
    coeffs: Vec<T>,
}

impl<T: Scalar> BPoly<T> {
    pub fn new(interval: Interval, coeffs: Vec<T>) -> Result<Self, BernsteinError> {
        if coeffs.is_empty() {
            return Err(BernsteinError::EmptyCoefficients);
        }
        Ok(BPoly { interval, coeffs })
    }

    /// B-form of degree `n` for a polynomial given by power coefficients in
    /// the local parameter.
    pub fn from_power(interval: Interval, power: &[T], n: usize) -> Result<Self, BernsteinError> {
        Self::new(interval, power_to_bform(power, n)?)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Power coefficients in the local parameter `u`.
    pub fn local_power(&self) -> Vec<T> {
        bform_to_power(&self.coeffs)
    }

    /// Same polynomial written in degree `n >= degree()`.
    pub fn elevate(&self, n: usize) -> Result<Self, BernsteinError> {
        let e = elevation_matrix(self.degree(), n)?;
        let coeffs = (0..=n)
            .map(|i| {
                e.row(i)
                    .iter()
                    .zip(&self.coeffs)
                    .fold(T::zero(), |acc, (w, c)| {
                        acc + T::from_rational(w) * c.clone()
                    })
            })
            .collect();
        Ok(BPoly {
            interval: self.interval,
            coeffs,
        })
    }
}

impl BPoly<f64> {
    pub fn eval(&self, t: f64) -> f64 {
        de_casteljau_eval(self, t)
    }
}

/// Value of `B_i^m(t)` over `iv`.
pub fn bernstein_value(m: usize, i: usize, t: f64, iv: Interval) -> Result<f64, BernsteinError> {
    if i > m {
        return Err(BernsteinError::IndexOutOfRange {
            index: i,
            degree: m,
        });
    }
    let u = iv.to_local(t);
    let c = crate::ratmat::to_f64(&binomial(m as u64, i as i64));
    Ok(c * (1.0 - u).powi((m - i) as i32) * u.powi(i as i32))
}

/// All `m + 1` basis values at `t`, computed by the triangular recurrence.
pub fn bernstein_all(m: usize, t: f64, iv: Interval) -> Vec<f64> {
    let u = iv.to_local(t);
    let mut vals = vec![0.0; m + 1];
    vals[0] = 1.0;
    for deg in 1..=m {
        let mut saved = 0.0;
        for v in &mut vals[..deg] {
            let tmp = *v;
            *v = saved + (1.0 - u) * tmp;
            saved = u * tmp;
        }
        vals[deg] = saved;
    }
    vals
}

/// de Casteljau evaluation of B-form coefficients at local parameter `u`.
pub fn de_casteljau<T: Scalar>(coeffs: &[T], u: &T) -> T {
    let mut work = coeffs.to_vec();
    let one_minus = T::one() - u.clone();
    for level in (1..work.len()).rev() {
        for i in 0..level {
            work[i] = one_minus.clone() * work[i].clone() + u.clone() * work[i + 1].clone();
        }
    }
    work.into_iter().next().unwrap_or_else(T::zero)
}

pub fn de_casteljau_eval(p: &BPoly<f64>, t: f64) -> f64 {
    de_casteljau(&p.coeffs, &p.interval.to_local(t))
}

/// Degree elevation matrix `E` with `B^m = B^n E`, shape `(n+1) x (m+1)`.
///
/// `E(i, j) = C(n-i, m-j) C(i, j) / C(n, m)`.
pub fn elevation_matrix(m: usize, n: usize) -> Result<Mat, BernsteinError> {
    if m > n {
        return Err(BernsteinError::ElevationOrder { m, n });
    }
    let denom = binomial(n as u64, m as i64);
    Ok(Mat::from_fn(n + 1, m + 1, |i, j| {
        let num =
            binomial_int((n - i) as u64, m as i64 - j as i64) * binomial_int(i as u64, j as i64);
        Rational::from_integer(num) / &denom
    }))
}

/// Lower-triangular Pascal matrix `T(i, j) = C(i, j)`, `0 <= i, j <= n`.
pub fn pascal_matrix(n: usize) -> Mat {
    Mat::from_fn(n + 1, n + 1, |i, j| binomial(i as u64, j as i64))
}

/// B-form coefficients of degree `n` for local power coefficients `power`
/// (shorter lists are zero padded). Uses `C(n,j) u^j = sum_i C(i,j) B_i^n`.
pub fn power_to_bform<T: Scalar>(power: &[T], n: usize) -> Result<Vec<T>, BernsteinError> {
    if power.len() > n + 1 {
        return Err(BernsteinError::TooManyCoefficients {
            len: power.len(),
            n,
        });
    }
    Ok((0..=n)
        .map(|i| {
            power
                .iter()
                .enumerate()
                .take(i + 1)
                .fold(T::zero(), |acc, (j, c)| {
                    let w = binomial(i as u64, j as i64) / binomial(n as u64, j as i64);
                    acc + T::from_rational(&w) * c.clone()
                })
        })
        .collect())
}

/// Local power coefficients of a B-form polynomial:
/// `c_j = C(n, j) * sum_{i<=j} (-1)^(j-i) C(j, i) b_i`.
pub fn bform_to_power<T: Scalar>(coeffs: &[T]) -> Vec<T> {
    let n = coeffs.len().saturating_sub(1);
    (0..coeffs.len())
        .map(|j| {
            let diff = (0..=j).fold(T::zero(), |acc, i| {
                let w = binomial(j as u64, i as i64);
                let term = T::from_rational(&w) * coeffs[i].clone();
                if (j - i) % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            });
            T::from_rational(&binomial(n as u64, j as i64)) * diff
        })
        .collect()
}

fn check_index(n: usize, k: usize) -> Result<(), BernsteinError> {
    if k > n {
        Err(BernsteinError::IndexOutOfRange {
            index: k,
            degree: n,
        })
    } else {
        Ok(())
    }
}

/// `C(k, j) / C(n, j)`.
fn binomial_ratio(k: usize, j: usize, n: usize) -> Rational {
    binomial(k as u64, j as i64) / binomial(n as u64, j as i64)
}

/// `lambda_k^n` in its left-endpoint form, applied to B-form coefficients
/// (any degree) over the local parameter.
pub fn left_functional<T: Scalar>(n: usize, k: usize, coeffs: &[T]) -> Result<T, BernsteinError> {
    check_index(n, k)?;
    let power = bform_to_power(coeffs);
    Ok(power
        .iter()
        .enumerate()
        .take(k + 1)
        .fold(T::zero(), |acc, (j, c)| {
            acc + T::from_rational(&binomial_ratio(k, j, n)) * c.clone()
        }))
}

/// `lambda_k^n` in its right-endpoint form. Agrees with [`left_functional`]
/// on polynomials of degree `<= n` but not beyond.
pub fn right_functional<T: Scalar>(n: usize, k: usize, coeffs: &[T]) -> Result<T, BernsteinError> {
    check_index(n, k)?;
    // Power coefficients of v -> p(1 - v); the sign of D^j at the right end
    // cancels the (-1)^j of the functional.
    let reversed: Vec<T> = coeffs.iter().rev().cloned().collect();
    let power = bform_to_power(&reversed);
    Ok(power
        .iter()
        .enumerate()
        .take(n - k + 1)
        .fold(T::zero(), |acc, (j, d)| {
            acc + T::from_rational(&binomial_ratio(n - k, j, n)) * d.clone()
        }))
}

/// Derivatives `p^(j)(a)` for `j = 0..=deg p`, read off the local power form.
pub fn derivatives_at_left(p: &BPoly<f64>) -> Vec<f64> {
    let h = p.interval.width();
    let mut fact = 1.0;
    p.local_power()
        .into_iter()
        .enumerate()
        .map(|(j, c)| {
            if j > 0 {
                fact *= j as f64;
            }
            fact * c / h.powi(j as i32)
        })
        .collect()
}

/// Derivatives `p^(j)(b)` for `j = 0..=deg p`.
pub fn derivatives_at_right(p: &BPoly<f64>) -> Vec<f64> {
    let h = p.interval.width();
    let reversed: Vec<f64> = p.coeffs.iter().rev().copied().collect();
    let mut fact = 1.0;
    bform_to_power(&reversed)
        .into_iter()
        .enumerate()
        .map(|(j, d)| {
            if j > 0 {
                fact *= j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * fact * d / h.powi(j as i32)
        })
        .collect()
}

/// `lambda_k^n p = sum_{j<=k} C(k,j)/C(n,j) (b-a)^j/j! p^(j)(a)`.
pub fn dual_functional_apply(n: usize, k: usize, p: &BPoly<f64>) -> Result<f64, BernsteinError> {
    check_index(n, k)?;
    let h = p.interval.width();
    let derivs = derivatives_at_left(p);
    let mut scale = 1.0;
    let mut acc = 0.0;
    for (j, d) in derivs.iter().enumerate().take(k + 1) {
        if j > 0 {
            scale *= h / j as f64;
        }
        acc += crate::ratmat::to_f64(&binomial_ratio(k, j, n)) * scale * d;
    }
    Ok(acc)
}

/// `lambda_k^n p = sum_{j<=n-k} (-1)^j C(n-k,j)/C(n,j) (b-a)^j/j! p^(j)(b)`.
pub fn dual_functional_apply_right(
    n: usize,
    k: usize,
    p: &BPoly<f64>,
) -> Result<f64, BernsteinError> {
    check_index(n, k)?;
    let h = p.interval.width();
    let derivs = derivatives_at_right(p);
    let mut scale = 1.0;
    let mut acc = 0.0;
    for (j, d) in derivs.iter().enumerate().take(n - k + 1) {
        if j > 0 {
            scale *= h / j as f64;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * crate::ratmat::to_f64(&binomial_ratio(n - k, j, n)) * scale * d;
    }
    Ok(acc)
}

/// `C(xn, j) / C(n, j)` as the falling-factorial ratio
/// `prod_{t<j} (xn - t) / (n - t)`.
pub fn falling_ratio(index: f64, n: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, t| acc * (index - t as f64) / (n - t) as f64)
}

/// Functional with real index `x n`, `0 <= x <= 1`, applied to `p`.
///
/// The sum runs over `j <= min(floor(x n), deg p)`. Tends to `p(a + x (b - a))`
/// as `n` grows.
pub fn generalized_dual_apply(n: usize, x: f64, p: &BPoly<f64>) -> f64 {
    let index = x * n as f64;
    let upper = (index.floor().max(0.0) as usize).min(p.degree()).min(n);
    p.local_power()
        .iter()
        .take(upper + 1)
        .enumerate()
        .map(|(j, c)| falling_ratio(index, n, j) * c)
        .sum()
}

/// Uniform nodes `a + (i/n)(b - a)`, `i = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeVector {
    n: usize,
    interval: Interval,
    nodes: Vec<f64>,
}

impl NodeVector {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn get(&self, i: usize) -> f64 {
        self.nodes[i]
    }
}

pub fn xi_nodes(n: usize, iv: Interval) -> Result<NodeVector, BernsteinError> {
    if n == 0 {
        return Err(BernsteinError::DegreeTooLow);
    }
    let nodes = (0..=n)
        .map(|i| {
            if i == n {
                iv.b()
            } else {
                iv.from_local(i as f64 / n as f64)
            }
        })
        .collect();
    Ok(NodeVector {
        n,
        interval: iv,
        nodes,
    })
}

/// Exact local nodes `i/n`.
pub fn xi_local(n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|i| {
            if n == 0 {
                Rational::zero()
            } else {
                crate::ratmat::rat(i as i64, n as i64)
            }
        })
        .collect()
}

/// Exact value of `B_j^m` at a rational local parameter.
pub fn bernstein_value_exact(m: usize, j: usize, u: &Rational) -> Rational {
    if j > m {
        return Rational::zero();
    }
    let one_minus = Rational::one() - u;
    binomial(m as u64, j as i64) * num_traits::pow(one_minus, m - j) * num_traits::pow(u.clone(), j)
}
