//! Dense linear algebra helpers shared by every module.

use crate::prelude::*;
use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `(A + A*) / 2`.
pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

/// Largest entry of `|A - A*|` relative to the largest entry of `|A|`.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let d = (a - a.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if scale == 0.0 {
        d
    } else {
        d / scale
    }
}

pub fn real_to_complex(a: &RMat) -> CMat {
    a.map(cr)
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: RVec,
    pub vectors: CMat,
}

impl Eigh {
    pub fn new(a: &CMat) -> Self {
        let n = a.nrows();
        let eig = SymmetricEigen::new(hermitian_part(a));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = RVec::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let mut vectors = CMat::zeros(n, n);
        for (k, &i) in order.iter().enumerate() {
            vectors.set_column(k, &eig.eigenvectors.column(i));
        }
        Eigh { values, vectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V f(Λ) V*`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> CMat {
        let mut scaled = self.vectors.clone();
        for (k, &l) in self.values.iter().enumerate() {
            let fk = f(l);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= fk;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// Same as [`Eigh::map`] for real valued `f`.
    pub fn map_real(&self, f: impl Fn(f64) -> f64) -> CMat {
        self.map(|l| cr(f(l)))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.dim() - 1]
    }
}

/// Spectral decomposition of a real symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EighReal {
    pub values: RVec,
    pub vectors: RMat,
}

impl EighReal {
    pub fn new(a: &RMat) -> Self {
        let n = a.nrows();
        let eig = SymmetricEigen::new((a + a.transpose()).scale(0.5));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = RVec::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let mut vectors = RMat::zeros(n, n);
        for (k, &i) in order.iter().enumerate() {
            vectors.set_column(k, &eig.eigenvectors.column(i));
        }
        EighReal { values, vectors }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RMat {
        let mut scaled = self.vectors.clone();
        for (k, &l) in self.values.iter().enumerate() {
            let fk = f(l);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= fk;
            }
        }
        scaled * self.vectors.transpose()
    }
}

/// Operator norm (largest singular value).
pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    SVD::new(a.clone(), false, false).singular_values.max()
}

pub fn op_norm_real(a: &RMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    SVD::new(a.clone(), false, false).singular_values.max()
}

/// Singular values of a real matrix, descending.
pub fn singular_values_real(a: &RMat) -> RVec {
    let mut s = SVD::new(a.clone(), false, false).singular_values;
    s.as_mut_slice().sort_by(|x, y| y.total_cmp(x));
    s
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eig(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    Eigh::new(a).min()
}

/// Largest modulus entry, used for relative tolerances.
pub fn max_entry(a: &CMat) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

pub fn norm(v: &CVec) -> f64 {
    v.norm()
}

/// `<u, v>`, antilinear in the first slot.
#[inline]
pub fn inner(u: &CVec, v: &CVec) -> C64 {
    u.dotc(v)
}

/// Matrix of a Hermitian form compressed by a matrix of column vectors:
/// `Q* A Q`.
pub fn compress(a: &CMat, q: &CMat) -> CMat {
    q.adjoint() * a * q
}

/// Orthonormal basis (columns) for the range of `a`, dropping directions
/// whose singular value falls below `rel_tol` times the largest one.
pub fn range_basis(a: &CMat, rel_tol: f64) -> CMat {
    let n = a.nrows();
    if a.ncols() == 0 {
        return CMat::zeros(n, 0);
    }
    let svd = SVD::new(a.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| smax > 0.0 && svd.singular_values[k] > rel_tol * smax)
        .collect();
    let mut out = CMat::zeros(n, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        out.set_column(j, &u.column(k));
    }
    out
}

/// Solve a Hermitian positive definite system, falling back to LU.
pub fn solve_hpd(a: &CMat, b: &CMat) -> Option<CMat> {
    if let Some(ch) = a.clone().cholesky() {
        return Some(ch.solve(b));
    }
    a.clone().lu().solve(b)
}

pub fn from_columns(cols: &[CVec], nrows: usize) -> CMat {
    let mut m = CMat::zeros(nrows, cols.len());
    for (j, v) in cols.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

pub fn columns(m: &CMat) -> Vec<CVec> {
    (0..m.ncols()).map(|j| m.column(j).into_owned()).collect()
}

/// Identity as a complex matrix.
pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn conj_mat(a: &CMat) -> CMat {
    a.map(|z| z.conj())
}

pub fn conj_vec(v: &CVec) -> CVec {
    v.map(|z| z.conj())
}

/// Trace of a square complex matrix.
pub fn trace(a: &CMat) -> C64 {
    a.trace()
}

/// Column vector from a slice.
pub fn cvec(values: &[C64]) -> CVec {
    DVector::from_column_slice(values)
}

pub fn rvec(values: &[f64]) -> RVec {
    DVector::from_column_slice(values)
}
