//! Approximation operators on `C[a, b]` built from dual bases: the
//! derivative-free data map, the quasi-interpolation projector `Q_s`, and the
//! Bernstein-like operator `D_m`, with their stability and error bounds.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bernstein::{bernstein_all, de_casteljau, xi_local, xi_nodes, BPoly, Interval};
use crate::ratmat::{inf_norm, mat_inv, to_f64, Mat, Rational, Scalar};
use crate::subspace::{bernstein_dual_basis, DualBasis, SubspaceError};
use crate::symmetric::lagrange_collocation;

/// Caller-supplied function on `[a, b]`. Must be deterministic; grid
/// evaluations may call it from several threads.
pub trait SampledFunction: Sync {
    fn eval(&self, t: f64) -> f64;
}

impl<F: Fn(f64) -> f64 + Sync> SampledFunction for F {
    fn eval(&self, t: f64) -> f64 {
        self(t)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error("{0} bound needs a derivative bound")]
    MissingDerivativeBound(Smoothness),
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientLength { expected: usize, got: usize },
    #[error("stability sandwich violated: {lower} <= {p_norm} <= {upper}")]
    StabilityViolated { lower: f64, p_norm: f64, upper: f64 },
    #[error("modulus step {h} must lie in (0, {width}]")]
    InvalidStep { h: f64, width: f64 },
    #[error("grid needs at least 2 points, got {0}")]
    GridTooSmall(usize),
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
}

/// Sample counts for the grid-based estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridOptions {
    /// sup-norms
    pub sup: usize,
    /// modulus of continuity
    pub modulus: usize,
    /// least-squares estimate of the distance to degree-`m` polynomials
    pub least_squares: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            sup: 201,
            modulus: 1024,
            least_squares: 401,
        }
    }
}

impl GridOptions {
    pub fn with_sup(sup: usize) -> Self {
        GridOptions {
            sup,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Smoothness {
    #[serde(rename = "c0")]
    C0,
    #[serde(rename = "c1")]
    C1,
    #[serde(rename = "c2")]
    C2,
}

impl fmt::Display for Smoothness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Smoothness::C0 => "c0",
            Smoothness::C1 => "c1",
            Smoothness::C2 => "c2",
        })
    }
}

impl FromStr for Smoothness {
    type Err = OperatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "c0" => Ok(Smoothness::C0),
            "c1" => Ok(Smoothness::C1),
            "c2" => Ok(Smoothness::C2),
            _ => Err(OperatorError::UnknownFunction(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    #[serde(rename = "c0-modulus")]
    C0Modulus,
    #[serde(rename = "c1")]
    C1,
    #[serde(rename = "c2")]
    C2,
    /// `||A|| ||M_n^{-1}|| ||f||`, a bound on `||Q_s f||`.
    #[serde(rename = "operator-norm")]
    OperatorNorm,
}

impl From<Smoothness> for BoundKind {
    fn from(s: Smoothness) -> Self {
        match s {
            Smoothness::C0 => BoundKind::C0Modulus,
            Smoothness::C1 => BoundKind::C1,
            Smoothness::C2 => BoundKind::C2,
        }
    }
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorReport {
    pub sup_error: f64,
    pub bound: f64,
    pub bound_kind: BoundKind,
    #[serde(rename = "norm_A", serialize_with = "ser_rational")]
    pub norm_a: Rational,
    #[serde(rename = "norm_Minv", serialize_with = "ser_rational")]
    pub norm_minv: Rational,
}

/// Report for `Q_s`: `bound` applies to `image_norm = ||Q_s f||`, and
/// `near_best_bound = (1 + ||A|| ||M_n^{-1}||) d(f)` applies to `sup_error`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiReport {
    #[serde(flatten)]
    pub report: OperatorReport,
    pub f_norm: f64,
    pub image_norm: f64,
    pub best_approx_dist: f64,
    pub near_best_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DerivBounds {
    pub first: Option<f64>,
    pub second: Option<f64>,
}

/// `M_n = [B_j^n(i/n)]`; independent of the interval.
pub fn collocation_matrix(n: usize) -> Mat {
    lagrange_collocation(n)
}

pub fn collocation_inverse(n: usize) -> Mat {
    mat_inv(&collocation_matrix(n)).expect("collocation at distinct nodes is invertible")
}

fn samples_at_nodes(n: usize, f: &dyn SampledFunction, iv: Interval) -> Vec<f64> {
    xi_nodes(n, iv)
        .expect("n >= 1")
        .nodes()
        .iter()
        .map(|&t| f.eval(t))
        .collect()
}

/// `tilde lambda_j^n f = sum_i M_n^{-1}(j, i) f(xi_i^n)`; point values only.
pub fn tilde_lambda_apply(n: usize, j: usize, f: &dyn SampledFunction, iv: Interval) -> f64 {
    let minv = collocation_inverse(n);
    let samples = samples_at_nodes(n, f, iv);
    minv.row(j)
        .iter()
        .zip(&samples)
        .map(|(c, v)| to_f64(c) * v)
        .sum()
}

/// `M_n^{-1} samples`, all `n + 1` data-map values at once.
pub fn tilde_lambda_values<T: Scalar>(minv: &Mat, samples: &[T]) -> Vec<T> {
    (0..minv.rows())
        .map(|j| {
            minv.row(j)
                .iter()
                .zip(samples)
                .fold(T::zero(), |acc, (c, v)| {
                    acc + T::from_rational(c) * v.clone()
                })
        })
        .collect()
}

fn mat_vec<T: Scalar>(a: &Mat, v: &[T]) -> Vec<T> {
    (0..a.rows())
        .map(|i| {
            a.row(i).iter().zip(v).fold(T::zero(), |acc, (c, x)| {
                acc + T::from_rational(c) * x.clone()
            })
        })
        .collect()
}

/// Sup of `|g|` over the sample grid together with the extra points.
fn sup_on_grid(g: impl Fn(f64) -> f64, iv: Interval, grid: usize, extra: &[f64]) -> f64 {
    iv.grid(grid)
        .into_iter()
        .chain(extra.iter().copied())
        .map(|t| g(t).abs())
        .fold(0.0, f64::max)
}

/// The projector `Q_s f = D^m tilde Lambda^n(s)^T f` onto degree-`m`
/// polynomials.
#[derive(Debug, Clone)]
pub struct QuasiInterpolant {
    db: DualBasis,
    minv: Mat,
}

impl QuasiInterpolant {
    pub fn new(m: usize, n: usize, s: &[usize], iv: Interval) -> Result<Self, OperatorError> {
        let db = bernstein_dual_basis(m, n, s, iv)?;
        Ok(Self::from_dual_basis(db))
    }

    pub fn from_dual_basis(db: DualBasis) -> Self {
        let minv = collocation_inverse(db.n().max(1));
        QuasiInterpolant { db, minv }
    }

    pub fn dual_basis(&self) -> &DualBasis {
        &self.db
    }

    /// B-form coefficients from samples `f(xi_i^n)`, in any scalar type.
    pub fn coefficients_from_samples<T: Scalar>(&self, samples: &[T]) -> Vec<T> {
        let all = tilde_lambda_values(&self.minv, samples);
        let picked: Vec<T> = self
            .db
            .selection()
            .indices()
            .iter()
            .map(|&j| all[j].clone())
            .collect();
        mat_vec(self.db.transform(), &picked)
    }

    pub fn apply(&self, f: &dyn SampledFunction) -> BPoly<f64> {
        let iv = self.db.interval();
        let samples = samples_at_nodes(self.db.n().max(1), f, iv);
        BPoly::new(iv, self.coefficients_from_samples(&samples)).expect("m + 1 coefficients")
    }

    /// Exact image of a rational B-form polynomial of degree `<= n`.
    pub fn apply_exact(&self, coeffs: &[Rational]) -> Vec<Rational> {
        let samples: Vec<Rational> = xi_local(self.db.n())
            .iter()
            .map(|u| de_casteljau(coeffs, u))
            .collect();
        self.coefficients_from_samples(&samples)
    }

    /// `||A|| ||M_n^{-1}||`, an upper bound for the operator norm.
    pub fn norm_bound(&self) -> Rational {
        inf_norm(self.db.transform()) * inf_norm(&self.minv)
    }
}

pub fn quasi_interpolant(
    m: usize,
    n: usize,
    s: &[usize],
    f: &dyn SampledFunction,
    iv: Interval,
) -> Result<BPoly<f64>, OperatorError> {
    Ok(QuasiInterpolant::new(m, n, s, iv)?.apply(f))
}

/// Least-squares fit by degree-`m` polynomials on a uniform grid; returns the
/// sup error of the fit on that grid as an estimate of `d(f, P_m)`.
pub fn best_approx_distance(f: &dyn SampledFunction, m: usize, iv: Interval, grid: usize) -> f64 {
    let ts = iv.grid(grid);
    let x = DMatrix::from_fn(ts.len(), m + 1, |r, c| bernstein_all(m, ts[r], iv)[c]);
    let y = DVector::from_iterator(ts.len(), ts.iter().map(|&t| f.eval(t)));
    let coeffs = x
        .clone()
        .svd(true, true)
        .solve(&y, 1e-14)
        .expect("SVD computed with U and V");
    (x * coeffs - y).amax()
}

pub fn quasi_interpolant_report(
    m: usize,
    n: usize,
    s: &[usize],
    f: &dyn SampledFunction,
    iv: Interval,
    grid: &GridOptions,
) -> Result<QuasiReport, OperatorError> {
    let q = QuasiInterpolant::new(m, n, s, iv)?;
    let p = q.apply(f);
    let nodes = xi_nodes(n.max(1), iv).expect("n >= 1");
    let f_norm = sup_on_grid(|t| f.eval(t), iv, grid.sup, nodes.nodes());
    let image_norm = sup_on_grid(|t| p.eval(t), iv, grid.sup, &[]);
    let sup_error = sup_on_grid(|t| f.eval(t) - p.eval(t), iv, grid.sup, &[]);
    let norm_a = inf_norm(q.db.transform());
    let norm_minv = inf_norm(&q.minv);
    let op_norm = to_f64(&q.norm_bound());
    let best = best_approx_distance(f, m, iv, grid.least_squares);
    Ok(QuasiReport {
        report: OperatorReport {
            sup_error,
            bound: op_norm * f_norm,
            bound_kind: BoundKind::OperatorNorm,
            norm_a,
            norm_minv,
        },
        f_norm,
        image_norm,
        best_approx_dist: best,
        near_best_bound: (1.0 + op_norm) * best,
    })
}

/// `D_m f = sum_i f(xi^n_{s(i)}) D_i^m`.
#[derive(Debug, Clone)]
pub struct BernsteinLike {
    db: DualBasis,
}

impl BernsteinLike {
    pub fn new(m: usize, n: usize, s: &[usize], iv: Interval) -> Result<Self, OperatorError> {
        Ok(BernsteinLike {
            db: bernstein_dual_basis(m, n, s, iv)?,
        })
    }

    pub fn from_dual_basis(db: DualBasis) -> Self {
        BernsteinLike { db }
    }

    pub fn dual_basis(&self) -> &DualBasis {
        &self.db
    }

    pub fn apply(&self, f: &dyn SampledFunction) -> BPoly<f64> {
        let iv = self.db.interval();
        let nodes = xi_nodes(self.db.n().max(1), iv).expect("n >= 1");
        let values: Vec<f64> = self
            .db
            .selection()
            .indices()
            .iter()
            .map(|&j| f.eval(nodes.get(j)))
            .collect();
        BPoly::new(iv, self.db.coefficients_of(&values)).expect("m + 1 coefficients")
    }
}

pub fn bernstein_like(
    m: usize,
    n: usize,
    s: &[usize],
    f: &dyn SampledFunction,
    iv: Interval,
) -> Result<BPoly<f64>, OperatorError> {
    Ok(BernsteinLike::new(m, n, s, iv)?.apply(f))
}

/// Grid estimate of `omega(f, h) = max |f(x) - f(y)|` over `|x - y| <= h`;
/// a lower bound of the true modulus.
pub fn modulus_of_continuity(
    f: &dyn SampledFunction,
    h: f64,
    iv: Interval,
    grid_n: usize,
) -> Result<f64, OperatorError> {
    if !(h > 0.0 && h <= iv.width() * (1.0 + 1e-12)) {
        return Err(OperatorError::InvalidStep {
            h,
            width: iv.width(),
        });
    }
    if grid_n < 2 {
        return Err(OperatorError::GridTooSmall(grid_n));
    }
    let values: Vec<f64> = iv.grid(grid_n).into_iter().map(|t| f.eval(t)).collect();
    let step = iv.width() / (grid_n - 1) as f64;
    let max_gap = ((h / step) * (1.0 + 1e-12)).floor() as usize;
    let mut best: f64 = 0.0;
    for i in 0..values.len() {
        for j in i + 1..values.len().min(i + max_gap + 1) {
            best = best.max((values[i] - values[j]).abs());
        }
    }
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
pub fn bernstein_like_report(
    m: usize,
    n: usize,
    s: &[usize],
    f: &dyn SampledFunction,
    smoothness: Smoothness,
    deriv: DerivBounds,
    iv: Interval,
    grid: &GridOptions,
) -> Result<OperatorReport, OperatorError> {
    let op = BernsteinLike::new(m, n, s, iv)?;
    let norm_a = inf_norm(op.db.transform());
    let a = to_f64(&norm_a);
    let w = iv.width();
    let bound = match smoothness {
        Smoothness::C0 => {
            // The error is sampled on the sup grid against values at the
            // nodes, so the oscillation over those points also enters the
            // estimate of omega(f, b - a).
            let nodes = xi_nodes(n.max(1), iv).expect("n >= 1");
            let (lo, hi) = iv
                .grid(grid.sup)
                .into_iter()
                .chain(nodes.nodes().iter().copied())
                .map(|t| f.eval(t))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                });
            a * modulus_of_continuity(f, w, iv, grid.modulus)?.max(hi - lo)
        }
        Smoothness::C1 => {
            let d1 = deriv
                .first
                .ok_or(OperatorError::MissingDerivativeBound(smoothness))?;
            w * a * d1
        }
        Smoothness::C2 => {
            let d2 = deriv
                .second
                .ok_or(OperatorError::MissingDerivativeBound(smoothness))?;
            0.5 * w * w * a * d2
        }
    };
    let p = op.apply(f);
    let sup_error = sup_on_grid(|t| f.eval(t) - p.eval(t), iv, grid.sup, &[]);
    Ok(OperatorReport {
        sup_error,
        bound,
        bound_kind: smoothness.into(),
        norm_a,
        norm_minv: inf_norm(&collocation_inverse(m.max(1))),
    })
}

/// Relative slack used when checking the stability sandwich on a grid.
pub const STABILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    pub lower: f64,
    pub p_norm: f64,
    pub upper: f64,
}

/// `||alpha|| / ||M_m^{-1}|| <= ||D^m alpha|| <= ||A|| ||alpha||`, with the
/// middle term sampled on a grid that includes the nodes `xi^m`.
pub fn stability_report(db: &DualBasis, alpha: &[f64]) -> Result<StabilityReport, OperatorError> {
    stability_report_with_grid(db, alpha, GridOptions::default().sup)
}

pub fn stability_report_with_grid(
    db: &DualBasis,
    alpha: &[f64],
    grid: usize,
) -> Result<StabilityReport, OperatorError> {
    let m = db.m();
    if alpha.len() != m + 1 {
        return Err(OperatorError::CoefficientLength {
            expected: m + 1,
            got: alpha.len(),
        });
    }
    let iv = db.interval();
    let p = BPoly::new(iv, db.coefficients_of(alpha)).expect("m + 1 coefficients");
    let nodes: Vec<f64> = if m >= 1 {
        xi_nodes(m, iv).expect("m >= 1").nodes().to_vec()
    } else {
        vec![iv.a()]
    };
    let p_norm = sup_on_grid(|t| p.eval(t), iv, grid, &nodes);
    let alpha_norm = alpha.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()));
    let minv_norm = to_f64(&inf_norm(&collocation_inverse(m.max(1))));
    let report = StabilityReport {
        lower: alpha_norm / minv_norm,
        p_norm,
        upper: to_f64(&inf_norm(db.transform())) * alpha_norm,
    };
    if report.lower <= report.p_norm * (1.0 + STABILITY_SLACK)
        && report.p_norm <= report.upper * (1.0 + STABILITY_SLACK)
    {
        Ok(report)
    } else {
        Err(OperatorError::StabilityViolated {
            lower: report.lower,
            p_norm: report.p_norm,
            upper: report.upper,
        })
    }
}

/// Test functions available to the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinFn {
    Sin,
    Exp,
    /// `t^2`
    Sq,
    /// `|t - 1/2|^(3/2)`, C1 but not C2 around `1/2`
    Abs32,
}

impl BuiltinFn {
    pub const ALL: [BuiltinFn; 4] = [
        BuiltinFn::Sin,
        BuiltinFn::Exp,
        BuiltinFn::Sq,
        BuiltinFn::Abs32,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinFn::Sin => "sin",
            BuiltinFn::Exp => "exp",
            BuiltinFn::Sq => "sq",
            BuiltinFn::Abs32 => "abs32",
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            BuiltinFn::Sin => t.sin(),
            BuiltinFn::Exp => t.exp(),
            BuiltinFn::Sq => t * t,
            BuiltinFn::Abs32 => (t - 0.5).abs().powf(1.5),
        }
    }

    /// Analytic sup-norms of `f'` and `f''` on `iv`; `None` where the
    /// derivative is unbounded.
    pub fn derivative_bounds(&self, iv: Interval) -> DerivBounds {
        let (a, b) = (iv.a(), iv.b());
        let contains = |x: f64| a <= x && x <= b;
        // |cos| reaches 1 at multiples of pi, |sin| at odd multiples of pi/2.
        let hits = |offset: f64| {
            let lo = ((a - offset) / std::f64::consts::PI).ceil();
            lo * std::f64::consts::PI + offset <= b
        };
        match self {
            BuiltinFn::Sin => DerivBounds {
                first: Some(if hits(0.0) {
                    1.0
                } else {
                    a.cos().abs().max(b.cos().abs())
                }),
                second: Some(if hits(std::f64::consts::FRAC_PI_2) {
                    1.0
                } else {
                    a.sin().abs().max(b.sin().abs())
                }),
            },
            BuiltinFn::Exp => DerivBounds {
                first: Some(b.exp()),
                second: Some(b.exp()),
            },
            BuiltinFn::Sq => DerivBounds {
                first: Some(2.0 * a.abs().max(b.abs())),
                second: Some(2.0),
            },
            BuiltinFn::Abs32 => {
                let far = (a - 0.5).abs().max((b - 0.5).abs());
                let near = (a - 0.5).abs().min((b - 0.5).abs());
                DerivBounds {
                    first: Some(1.5 * far.sqrt()),
                    second: if contains(0.5) {
                        None
                    } else {
                        Some(0.75 / near.sqrt())
                    },
                }
            }
        }
    }
}

impl SampledFunction for BuiltinFn {
    fn eval(&self, t: f64) -> f64 {
        BuiltinFn::eval(self, t)
    }
}

impl FromStr for BuiltinFn {
    type Err = OperatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinFn::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| OperatorError::UnknownFunction(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::bernstein_value;
    use crate::ratmat::{int, rat};

    const TOL: f64 = 1e-12;

    #[test]
    fn collocation_examples() {
        assert_eq!(collocation_matrix(1), Mat::identity(2));
        assert_eq!(
            collocation_matrix(2),
            Mat::from_scaled_rows(4, &[&[4, 0, 0], &[1, 2, 1], &[0, 0, 4]])
        );
        for n in 1..=8 {
            assert!(crate::ratmat::is_row_affine(&collocation_matrix(n)));
        }
    }

    #[test]
    fn tilde_lambda_is_dual_to_bernstein() {
        let iv = Interval::new(1.0, 3.0).unwrap();
        for n in 1..=6 {
            for i in 0..=n {
                let f = move |t: f64| bernstein_value(n, i, t, iv).unwrap();
                for j in 0..=n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((tilde_lambda_apply(n, j, &f, iv) - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn tilde_lambda_constants_and_bound() {
        let iv = Interval::unit();
        for n in 1..=6 {
            for j in 0..=n {
                assert!((tilde_lambda_apply(n, j, &|_t: f64| 2.5, iv) - 2.5).abs() < 1e-10);
            }
        }
        let f = |t: f64| (7.0 * t).sin() + 0.3 * t;
        let fnorm = sup_on_grid(f, iv, 1001, &[]);
        for n in 1..=6 {
            let bound = fnorm * to_f64(&inf_norm(&collocation_inverse(n)));
            for j in 0..=n {
                assert!(tilde_lambda_apply(n, j, &f, iv).abs() <= bound + TOL);
            }
        }
        // exact values: the middle row of M_2^{-1} is (-1/2, 2, -1/2)
        let minv = collocation_inverse(2);
        assert_eq!(minv.row(1), &[rat(-1, 2), int(2), rat(-1, 2)]);
    }

    #[test]
    fn quasi_interpolant_examples() {
        let iv = Interval::new(0.5, 2.0).unwrap();
        for (m, n, s) in [
            (1, 2, vec![0, 1]),
            (2, 4, vec![0, 2, 4]),
            (3, 7, vec![1, 2, 5, 7]),
        ] {
            let p = quasi_interpolant(m, n, &s, &|t: f64| t, iv).unwrap();
            let want = xi_nodes(m, iv).unwrap();
            for (c, w) in p.coeffs().iter().zip(want.nodes()) {
                assert!((c - w).abs() < 1e-12);
            }
        }

        let q = QuasiInterpolant::new(2, 5, &[0, 3, 4], Interval::unit()).unwrap();
        for i in 0..=2 {
            let d = q.dual_basis().element(i).unwrap();
            let img = q.apply(&|t: f64| d.eval(t));
            for (x, y) in img.coeffs().iter().zip(d.coeffs()) {
                assert!((x - y).abs() < 1e-10);
            }
        }

        let zero_line =
            quasi_interpolant(1, 2, &[0, 1], &|t: f64| t * t, Interval::unit()).unwrap();
        assert!(zero_line.coeffs().iter().all(|c| c.abs() < TOL));
    }

    #[test]
    fn quasi_interpolant_exact_reproduction() {
        let q = QuasiInterpolant::new(3, 6, &[0, 1, 4, 6], Interval::unit()).unwrap();
        let coeffs = vec![rat(1, 3), int(-2), rat(7, 5), int(4)];
        assert_eq!(q.apply_exact(&coeffs), coeffs);
    }

    #[test]
    fn quasi_report_polynomial_and_zero() {
        let iv = Interval::unit();
        let g = GridOptions::default();
        let r = quasi_interpolant_report(2, 4, &[0, 2, 4], &|t: f64| 1.0 - 3.0 * t * t, iv, &g)
            .unwrap();
        assert!(r.report.sup_error <= 1e-10);
        let z = quasi_interpolant_report(2, 4, &[0, 2, 4], &|_t: f64| 0.0, iv, &g).unwrap();
        assert_eq!(z.report.sup_error, 0.0);
        assert_eq!(z.image_norm, 0.0);
        assert_eq!(z.report.bound, 0.0);
        let s =
            quasi_interpolant_report(2, 4, &[0, 2, 4], &|t: f64| (3.0 * t).sin(), iv, &g).unwrap();
        assert!(s.image_norm <= s.report.bound);
        assert!(s.report.sup_error <= s.near_best_bound * 1.05);
    }

    #[test]
    fn bernstein_like_examples() {
        let iv = Interval::new(1.0, 3.0).unwrap();
        let p = bernstein_like(2, 6, &[0, 3, 6], &|t: f64| 2.0 * t - 1.0, iv).unwrap();
        for t in iv.grid(21) {
            assert!((p.eval(t) - (2.0 * t - 1.0)).abs() < TOL);
        }
        let c = bernstein_like(3, 5, &[0, 1, 3, 5], &|_t: f64| 4.0, iv).unwrap();
        assert!(c.coeffs().iter().all(|x| (x - 4.0).abs() < TOL));
        // classical Bernstein operator on t^2: value 3/8 at 1/2
        let b = bernstein_like(2, 2, &[0, 1, 2], &|t: f64| t * t, Interval::unit()).unwrap();
        assert!((b.eval(0.5) - 0.375).abs() < TOL);
    }

    #[test]
    fn modulus_examples() {
        let iv = Interval::unit();
        let w = modulus_of_continuity(&|t: f64| t, 0.3, iv, 1024).unwrap();
        assert!((w - 0.3).abs() < 1.0 / 1023.0);
        let w2 = modulus_of_continuity(&|t: f64| t * t, 0.25, iv, 1024).unwrap();
        assert!((0.4375 - 2.0 / 1023.0..=0.4375 + 1e-12).contains(&w2));
        assert_eq!(
            modulus_of_continuity(&|_t: f64| 1.0, 0.5, iv, 64).unwrap(),
            0.0
        );
        assert!(modulus_of_continuity(&|t: f64| t, 0.0, iv, 64).is_err());
        assert!(modulus_of_continuity(&|t: f64| t, 2.0, iv, 64).is_err());
        assert!(modulus_of_continuity(&|t: f64| t, 0.5, iv, 1).is_err());
    }

    #[test]
    fn bernstein_like_report_cases() {
        let iv = Interval::unit();
        let g = GridOptions::default();
        let sin1 = 1f64.sin();
        let r = bernstein_like_report(
            2,
            4,
            &[0, 2, 4],
            &|t: f64| t.sin(),
            Smoothness::C2,
            DerivBounds {
                first: None,
                second: Some(sin1),
            },
            iv,
            &g,
        )
        .unwrap();
        assert!(r.sup_error <= 0.5 * to_f64(&r.norm_a) * sin1);
        assert_eq!(r.bound_kind, BoundKind::C2);

        for sm in [Smoothness::C0, Smoothness::C1, Smoothness::C2] {
            let r = bernstein_like_report(
                3,
                9,
                &[0, 3, 6, 9],
                &|t: f64| 3.0 * t + 1.0,
                sm,
                DerivBounds {
                    first: Some(3.0),
                    second: Some(0.0),
                },
                iv,
                &g,
            )
            .unwrap();
            assert!(r.sup_error <= 1e-10);
            assert!(r.bound >= 0.0);
        }

        let missing = bernstein_like_report(
            2,
            4,
            &[0, 2, 4],
            &|t: f64| t,
            Smoothness::C1,
            DerivBounds::default(),
            iv,
            &g,
        );
        assert_eq!(
            missing.unwrap_err(),
            OperatorError::MissingDerivativeBound(Smoothness::C1)
        );
    }

    #[test]
    fn modulus_below_lipschitz_bound() {
        let iv = Interval::new(1.0, 3.0).unwrap();
        for f in BuiltinFn::ALL {
            let d1 = f.derivative_bounds(iv).first.unwrap();
            for h in [0.1, 0.5, 2.0] {
                let w = modulus_of_continuity(&f, h, iv, 512).unwrap();
                assert!(w <= h * d1 + 1e-12, "{f:?} h={h}");
            }
        }
    }

    #[test]
    fn stability_examples() {
        let db = bernstein_dual_basis(2, 4, &[0, 2, 4], Interval::unit()).unwrap();
        let z = stability_report(&db, &[0.0; 3]).unwrap();
        assert_eq!((z.lower, z.p_norm, z.upper), (0.0, 0.0, 0.0));
        let ones = stability_report(&db, &[1.0; 3]).unwrap();
        assert!((ones.p_norm - 1.0).abs() < TOL);
        assert!(ones.lower <= 1.0 && 1.0 <= ones.upper);
        let r = stability_report(&db, &[0.3, -2.0, 1.1]).unwrap();
        assert!(r.lower <= r.p_norm && r.p_norm <= r.upper);
        assert!(matches!(
            stability_report(&db, &[1.0]),
            Err(OperatorError::CoefficientLength {
                expected: 3,
                got: 1
            })
        ));
    }

    #[test]
    fn report_json_shape() {
        let r = OperatorReport {
            sup_error: 0.25,
            bound: 1.0,
            bound_kind: BoundKind::C0Modulus,
            norm_a: rat(3, 2),
            norm_minv: int(3),
        };
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "sup_error": 0.25,
                "bound": 1.0,
                "bound_kind": "c0-modulus",
                "norm_A": "3/2",
                "norm_Minv": "3"
            })
        );
    }

    #[test]
    fn builtin_registry() {
        assert_eq!("sin".parse::<BuiltinFn>().unwrap(), BuiltinFn::Sin);
        assert!("cosh".parse::<BuiltinFn>().is_err());
        let unit = BuiltinFn::Abs32.derivative_bounds(Interval::unit());
        assert!(unit.second.is_none());
        assert!((unit.first.unwrap() - 1.5 * 0.5f64.sqrt()).abs() < TOL);
        let far = BuiltinFn::Abs32.derivative_bounds(Interval::new(1.0, 3.0).unwrap());
        assert!((far.second.unwrap() - 0.75 / 0.5f64.sqrt()).abs() < TOL);
        let s = BuiltinFn::Sin.derivative_bounds(Interval::unit());
        assert!((s.first.unwrap() - 1.0).abs() < TOL);
        assert!((s.second.unwrap() - 1f64.sin()).abs() < TOL);
        let s13 = BuiltinFn::Sin.derivative_bounds(Interval::new(1.0, 3.0).unwrap());
        assert!((s13.second.unwrap() - 1.0).abs() < TOL);
        assert!((s13.first.unwrap() - 3f64.cos().abs()).abs() < TOL);
    }
}
