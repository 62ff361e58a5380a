//! Selection maps, embeddings of degree-`m` polynomials into degree `n`,
//! and the dual bases `D^m = Phi^m E(s,:)^{-1}` they induce.

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bernstein::{
    self, de_casteljau, elevation_matrix, left_functional, right_functional, xi_local, xi_nodes,
    BPoly, BernsteinError, Interval,
};
use crate::ratmat::{mat_inv, mat_mul, row_select, to_f64, Mat, MatError, Rational};

/// Largest ambient degree for which [`is_complete`] enumerates selections.
pub const COMPLETENESS_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubspaceError {
    #[error("selection is not injective: index {0} repeats")]
    NotInjective(usize),
    #[error("selection index {index} exceeds ambient degree {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("selection has {got} indices, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("subspace degree {m} exceeds ambient degree {n}")]
    DegreeOrder { m: usize, n: usize },
    #[error("selection ({sm}, {sn}) does not match embedding ({em}, {en})")]
    Incompatible {
        sm: usize,
        sn: usize,
        em: usize,
        en: usize,
    },
    #[error("selected functionals are linearly dependent on the subspace")]
    Singular,
    #[error("completeness enumeration capped at n <= {cap}, got n = {n}")]
    EnumerationCap { n: usize, cap: usize },
    #[error("basis index {index} out of range for degree {m}")]
    BasisIndex { index: usize, m: usize },
    #[error(transparent)]
    Matrix(MatError),
    #[error(transparent)]
    Bernstein(#[from] BernsteinError),
}

impl From<MatError> for SubspaceError {
    fn from(e: MatError) -> Self {
        match e {
            MatError::Singular { .. } => SubspaceError::Singular,
            other => SubspaceError::Matrix(other),
        }
    }
}

/// Injective map `s : {0..m} -> {0..n}` picking `m + 1` of the `n + 1`
/// ambient functionals. Order is kept as given; `s(i)` pairs with `D_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectionMap {
    m: usize,
    n: usize,
    indices: Vec<usize>,
}

impl SelectionMap {
    pub fn new(m: usize, n: usize, indices: Vec<usize>) -> Result<Self, SubspaceError> {
        if m > n {
            return Err(SubspaceError::DegreeOrder { m, n });
        }
        if indices.len() != m + 1 {
            return Err(SubspaceError::WrongLength {
                got: indices.len(),
                expected: m + 1,
            });
        }
        if let Some(&bad) = indices.iter().find(|&&i| i > n) {
            return Err(SubspaceError::IndexOutOfRange { index: bad, n });
        }
        if let Some(dup) = indices.iter().duplicates().next() {
            return Err(SubspaceError::NotInjective(*dup));
        }
        Ok(SelectionMap { m, n, indices })
    }

    /// `s = (0, 1, ..., m)`.
    pub fn leading(m: usize, n: usize) -> Result<Self, SubspaceError> {
        Self::new(m, n, (0..=m).collect())
    }

    /// `s(i) = i k`, `n = m k`.
    pub fn symmetric(m: usize, k: usize) -> Result<Self, SubspaceError> {
        Self::new(m, m * k, (0..=m).map(|i| i * k).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn get(&self, i: usize) -> usize {
        self.indices[i]
    }

    pub fn is_increasing(&self) -> bool {
        self.indices.windows(2).all(|w| w[0] < w[1])
    }

    pub fn sorted(&self) -> SelectionMap {
        let mut indices = self.indices.clone();
        indices.sort_unstable();
        SelectionMap {
            m: self.m,
            n: self.n,
            indices,
        }
    }

    /// All increasing selections of `m + 1` indices from `0..=n`.
    pub fn all_increasing(m: usize, n: usize) -> impl Iterator<Item = SelectionMap> {
        (0..=n)
            .combinations(m + 1)
            .map(move |indices| SelectionMap { m, n, indices })
    }
}

/// Validated selection; same as [`SelectionMap::new`].
pub fn make_selection(
    m: usize,
    n: usize,
    indices: &[usize],
) -> Result<SelectionMap, SubspaceError> {
    SelectionMap::new(m, n, indices.to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingKind {
    Bernstein,
    Power,
}

/// `Phi^m = Phi^n E` for the Bernstein or power bases.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    kind: EmbeddingKind,
    m: usize,
    n: usize,
    e: Mat,
}

impl Embedding {
    pub fn new(kind: EmbeddingKind, m: usize, n: usize) -> Result<Self, SubspaceError> {
        match kind {
            EmbeddingKind::Bernstein => Self::bernstein(m, n),
            EmbeddingKind::Power => Self::power(m, n),
        }
    }

    pub fn bernstein(m: usize, n: usize) -> Result<Self, SubspaceError> {
        if m > n {
            return Err(SubspaceError::DegreeOrder { m, n });
        }
        Ok(Embedding {
            kind: EmbeddingKind::Bernstein,
            m,
            n,
            e: elevation_matrix(m, n)?,
        })
    }

    /// `E = I(:, 0..=m)`.
    pub fn power(m: usize, n: usize) -> Result<Self, SubspaceError> {
        if m > n {
            return Err(SubspaceError::DegreeOrder { m, n });
        }
        Ok(Embedding {
            kind: EmbeddingKind::Power,
            m,
            n,
            e: Mat::from_fn(n + 1, m + 1, |i, j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }),
        })
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Mat {
        &self.e
    }
}

/// Basis of degree-`m` polynomials dual to `Lambda^n(s)`, stored through its
/// transform `A = E(s,:)^{-1}`: `D_i` has coefficients `A(:, i)` in `Phi^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualBasis {
    kind: EmbeddingKind,
    s: SelectionMap,
    a: Mat,
    interval: Interval,
}

impl DualBasis {
    pub fn m(&self) -> usize {
        self.s.m
    }

    pub fn n(&self) -> usize {
        self.s.n
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    pub fn selection(&self) -> &SelectionMap {
        &self.s
    }

    pub fn transform(&self) -> &Mat {
        &self.a
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn with_interval(mut self, interval: Interval) -> Self {
        self.interval = interval;
        self
    }

    /// `D_i` as a B-form polynomial (Bernstein embeddings only).
    pub fn element(&self, i: usize) -> Result<BPoly<f64>, SubspaceError> {
        self.check_index(i)?;
        let coeffs = self.a.col(i).iter().map(to_f64).collect();
        Ok(BPoly::new(self.interval, coeffs)?)
    }

    /// Evaluate `D_i(t)`.
    pub fn eval(&self, i: usize, t: f64) -> Result<f64, SubspaceError> {
        self.check_index(i)?;
        let u = self.interval.to_local(t);
        let coeffs: Vec<f64> = self.a.col(i).iter().map(to_f64).collect();
        Ok(match self.kind {
            EmbeddingKind::Bernstein => de_casteljau(&coeffs, &u),
            EmbeddingKind::Power => coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c),
        })
    }

    /// All `D_i(t)` at once.
    pub fn eval_all(&self, t: f64) -> Vec<f64> {
        let m = self.m();
        match self.kind {
            EmbeddingKind::Bernstein => {
                let b = bernstein::bernstein_all(m, t, self.interval);
                let a = self.a.to_f64_rows();
                (0..=m)
                    .map(|i| (0..=m).map(|j| b[j] * a[j][i]).sum())
                    .collect()
            }
            EmbeddingKind::Power => (0..=m).map(|i| self.eval(i, t).unwrap()).collect(),
        }
    }

    /// B-form coefficients of `D^m alpha`, i.e. `A alpha`.
    pub fn coefficients_of(&self, alpha: &[f64]) -> Vec<f64> {
        self.a.mul_vec_f64(alpha)
    }

    fn check_index(&self, i: usize) -> Result<(), SubspaceError> {
        if i > self.m() {
            Err(SubspaceError::BasisIndex {
                index: i,
                m: self.m(),
            })
        } else {
            Ok(())
        }
    }
}

/// `A = E(s,:)^{-1}`; fails with [`SubspaceError::Singular`] when the
/// selected functionals are dependent on the subspace.
pub fn dual_basis(emb: &Embedding, s: &SelectionMap) -> Result<DualBasis, SubspaceError> {
    if emb.m != s.m || emb.n != s.n {
        return Err(SubspaceError::Incompatible {
            sm: s.m,
            sn: s.n,
            em: emb.m,
            en: emb.n,
        });
    }
    let a = mat_inv(&row_select(&emb.e, &s.indices)?)?;
    Ok(DualBasis {
        kind: emb.kind,
        s: s.clone(),
        a,
        interval: Interval::unit(),
    })
}

/// Bernstein dual basis for `(m, n, s)` on `iv`.
pub fn bernstein_dual_basis(
    m: usize,
    n: usize,
    indices: &[usize],
    iv: Interval,
) -> Result<DualBasis, SubspaceError> {
    let s = make_selection(m, n, indices)?;
    Ok(dual_basis(&Embedding::bernstein(m, n)?, &s)?.with_interval(iv))
}

pub fn dual_basis_eval(db: &DualBasis, i: usize, t: f64) -> Result<f64, SubspaceError> {
    db.eval(i, t)
}

/// Apply `lambda_k^n` of the embedding's ambient dual map to a
/// degree-`m` polynomial with coefficients `coeffs` in `Phi^m`.
fn ambient_functional(
    kind: EmbeddingKind,
    n: usize,
    k: usize,
    coeffs: &[Rational],
) -> Result<Rational, SubspaceError> {
    match kind {
        EmbeddingKind::Bernstein => Ok(left_functional(n, k, coeffs)?),
        // delta_0 D^k / k! reads off the k-th power coefficient.
        EmbeddingKind::Power => Ok(coeffs.get(k).cloned().unwrap_or_else(Rational::zero)),
    }
}

/// Checks `Lambda^n(s)^T D^m = I` exactly by applying each selected
/// functional to each dual basis element.
pub fn verify_duality(db: &DualBasis) -> bool {
    let m = db.m();
    (0..=m).all(|r| {
        (0..=m).all(|i| {
            let v = ambient_functional(db.kind, db.n(), db.s.get(r), &db.a.col(i));
            match v {
                Ok(v) => {
                    v == if r == i {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }
                Err(_) => false,
            }
        })
    })
}

/// True iff every increasing selection gives an invertible `E(s,:)`.
pub fn is_complete(emb: &Embedding) -> Result<bool, SubspaceError> {
    if emb.n > COMPLETENESS_CAP {
        return Err(SubspaceError::EnumerationCap {
            n: emb.n,
            cap: COMPLETENESS_CAP,
        });
    }
    for s in SelectionMap::all_increasing(emb.m, emb.n) {
        let sub = row_select(&emb.e, &s.indices)?;
        if mat_inv(&sub).is_err() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Lambda^n(s)^T B^m` computed by applying functionals of the given form to
/// the degree-`m` Bernstein polynomials.
fn functional_matrix(
    m: usize,
    n: usize,
    s: &SelectionMap,
    right: bool,
) -> Result<Mat, SubspaceError> {
    let mut out = Mat::zeros(m + 1, m + 1);
    for (r, &k) in s.indices.iter().enumerate() {
        for j in 0..=m {
            let mut unit = vec![Rational::zero(); m + 1];
            unit[j] = Rational::one();
            out[(r, j)] = if right {
                right_functional(n, k, &unit)?
            } else {
                left_functional(n, k, &unit)?
            };
        }
    }
    Ok(out)
}

/// Builds the dual transform once from left-endpoint functionals and once
/// from right-endpoint functionals; true iff the two agree exactly.
pub fn data_map_invariance_check(
    m: usize,
    n: usize,
    s: &SelectionMap,
) -> Result<bool, SubspaceError> {
    if s.m != m || s.n != n {
        return Err(SubspaceError::Incompatible {
            sm: s.m,
            sn: s.n,
            em: m,
            en: n,
        });
    }
    let left = mat_inv(&functional_matrix(m, n, s, false)?)?;
    let right = mat_inv(&functional_matrix(m, n, s, true)?)?;
    Ok(left == right)
}

/// Max over 101 points of `|sum_i xi^n_{s(i)} D_i(t) - t|`.
pub fn linear_precision_check(db: &DualBasis) -> f64 {
    let iv = db.interval;
    let nodes = xi_nodes(db.n().max(1), iv).expect("n >= 1");
    let weights: Vec<f64> = db.s.indices.iter().map(|&j| nodes.get(j)).collect();
    iv.grid(101)
        .into_iter()
        .map(|t| {
            let d = db.eval_all(t);
            let v: f64 = d.iter().zip(&weights).map(|(a, b)| a * b).sum();
            (v - t).abs()
        })
        .fold(0.0, f64::max)
}

/// Exact form of the linear precision identity: `A xi^n(s) = xi^m`.
pub fn linear_precision_exact(db: &DualBasis) -> bool {
    let xn = xi_local(db.n());
    let picked: Vec<Rational> = db.s.indices.iter().map(|&j| xn[j].clone()).collect();
    db.a.mul_vec(&picked)
        .map(|v| v == xi_local(db.m()))
        .unwrap_or(false)
}

/// `E(s,:) A`, which must be the identity.
pub fn duality_product(emb: &Embedding, db: &DualBasis) -> Result<Mat, SubspaceError> {
    Ok(mat_mul(&row_select(&emb.e, &db.s.indices)?, &db.a)?)
}
