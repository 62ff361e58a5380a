//! The symmetric configuration `s = (0, k, 2k, ..., mk)`, `n = mk`, whose dual
//! bases converge to the Lagrange basis at the uniform nodes as `k` grows.

use std::io;

use num_traits::Zero;
use serde::Serialize;

use crate::bernstein::{bernstein_all, bernstein_value_exact, elevation_matrix, Interval};
use crate::ratmat::{inf_norm, mat_inv, rat, row_select, to_f64, Mat, Rational};
use crate::subspace::SelectionMap;

/// Points used for the sup-distance between dual and Lagrange bases.
pub const SUP_GRID: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetricConfig {
    m: usize,
    k: usize,
}

impl SymmetricConfig {
    /// Panics unless `m >= 1` and `k >= 1`.
    pub fn new(m: usize, k: usize) -> Self {
        assert!(m >= 1 && k >= 1, "symmetric configuration needs m, k >= 1");
        SymmetricConfig { m, k }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.m * self.k
    }

    pub fn selection(&self) -> SelectionMap {
        SelectionMap::symmetric(self.m, self.k).expect("symmetric selection is valid")
    }

    /// `E(s_k, :)`, the inverse of the dual transform.
    pub fn selected_elevation(&self) -> Mat {
        let e = elevation_matrix(self.m, self.n()).expect("m <= mk");
        row_select(&e, self.selection().indices()).expect("indices within 0..=mk")
    }

    pub fn dual_matrix(&self) -> Mat {
        mat_inv(&self.selected_elevation()).expect("Bernstein embeddings are complete")
    }
}

/// `A_{m,k} = E(s,:)^{-1}` for `s = 0:k:mk`.
pub fn symmetric_dual_matrix(m: usize, k: usize) -> Mat {
    SymmetricConfig::new(m, k).dual_matrix()
}

/// `[B_j^m(i/m)]_{i,j}`; its inverse maps `B^m` to the Lagrange basis at
/// the nodes `i/m`.
pub fn lagrange_collocation(m: usize) -> Mat {
    assert!(m >= 1, "collocation needs m >= 1");
    Mat::from_fn(m + 1, m + 1, |i, j| {
        bernstein_value_exact(m, j, &rat(i as i64, m as i64))
    })
}

/// Transform `A_L` with `L^m = B^m A_L`.
pub fn lagrange_transform(m: usize) -> Mat {
    mat_inv(&lagrange_collocation(m)).expect("collocation at distinct nodes is invertible")
}

/// First-order coefficient `C` in
/// `lagrange_collocation(m) - E(s_k,:) = C / k + O(1/k^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateConstant {
    m: usize,
    c: Mat,
}

impl RateConstant {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &Mat {
        &self.c
    }

    pub fn norm(&self) -> Rational {
        inf_norm(&self.c)
    }
}

/// Sign convention between the two bracket terms of the rate constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RateSign {
    /// `T1 - T2`: matches the exact expansion of the elevation entries.
    Corrected,
    /// `T1 + T2`, kept only for diagnostics.
    Published,
}

/// The rate constant with the corrected sign.
pub fn rate_constant(m: usize) -> RateConstant {
    rate_constant_with_sign(m, RateSign::Corrected)
}

/// `C_ij = 1/2 B_j^m(i/m) [ (j-1) j (m-i) / (i m) * [j>0]  -/+  (m-j)(2mj - im + i - ij) / (m (m-i)) * [j<m] ]`
/// for `0 < i < m`; rows `0` and `m` are zero.
pub fn rate_constant_with_sign(m: usize, sign: RateSign) -> RateConstant {
    assert!(m >= 1, "rate constant needs m >= 1");
    let mi = m as i64;
    let c = Mat::from_fn(m + 1, m + 1, |i, j| {
        if i == 0 || i == m {
            return Rational::zero();
        }
        let (ii, jj) = (i as i64, j as i64);
        let mut first = Rational::zero();
        if j > 0 {
            first = rat((jj - 1) * jj * (mi - ii), ii * mi);
        }
        let mut second = Rational::zero();
        if j < m {
            second = rat(
                (mi - jj) * (2 * mi * jj - ii * mi + ii - ii * jj),
                mi * (mi - ii),
            );
        }
        let bracket = match sign {
            RateSign::Corrected => first - second,
            RateSign::Published => first + second,
        };
        rat(1, 2) * bernstein_value_exact(m, j, &rat(ii, mi)) * bracket
    });
    RateConstant { m, c }
}

/// `k (lagrange_collocation(m) - E(s_k,:))`, whose limit is the rate constant.
pub fn scaled_inverse_difference(m: usize, k: usize) -> Mat {
    let cfg = SymmetricConfig::new(m, k);
    let diff = lagrange_collocation(m)
        .sub(&cfg.selected_elevation())
        .expect("same shape");
    diff.scale(&Rational::from_integer((k as i64).into()))
}

/// `||A_L||^2 ||C|| / k` with `A_L` the Lagrange transform.
pub fn rate_bound(m: usize, k: usize) -> f64 {
    assert!(k >= 1, "rate bound needs k >= 1");
    let a = inf_norm(&lagrange_transform(m));
    let c = rate_constant(m).norm();
    to_f64(&(a.clone() * a * c)) / k as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub k: usize,
    pub sup_dist: f64,
    pub scaled_mat_dist: f64,
}

/// Max over the sample grid and `i` of `|D_i^{m,k}(t) - L_i^m(t)|`.
pub fn sup_distance(m: usize, k: usize, grid: usize) -> f64 {
    let diff = symmetric_dual_matrix(m, k)
        .sub(&lagrange_transform(m))
        .expect("same shape")
        .to_f64_rows();
    let iv = Interval::unit();
    iv.grid(grid)
        .into_iter()
        .map(|t| {
            let b = bernstein_all(m, t, iv);
            (0..=m)
                .map(|i| (0..=m).map(|j| b[j] * diff[j][i]).sum::<f64>().abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

pub fn convergence_table(m: usize, ks: &[usize]) -> Vec<ConvergenceRecord> {
    convergence_table_with_grid(m, ks, SUP_GRID)
}

pub fn convergence_table_with_grid(m: usize, ks: &[usize], grid: usize) -> Vec<ConvergenceRecord> {
    assert!(!ks.is_empty(), "convergence table needs at least one k");
    ks.iter()
        .map(|&k| ConvergenceRecord {
            k,
            sup_dist: sup_distance(m, k, grid),
            scaled_mat_dist: to_f64(&inf_norm(&scaled_inverse_difference(m, k))),
        })
        .collect()
}

pub fn write_convergence_csv<W: io::Write>(
    mut out: W,
    rows: &[ConvergenceRecord],
) -> io::Result<()> {
    writeln!(out, "k,sup_dist,scaled_mat_dist")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{}",
            r.k,
            crate::cli::fmt_float(r.sup_dist),
            crate::cli::fmt_float(r.scaled_mat_dist)
        )?;
    }
    Ok(())
}
