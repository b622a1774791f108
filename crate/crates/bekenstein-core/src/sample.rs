//! Random instance generators used by the test suites and the CLI.
//!
//! All generators take the random source by reference so that callers control
//! seeding; nothing here touches global state.

use crate::formcalc::HermitianOperator;
use crate::linalg::{c, cr};
use crate::prelude::*;
use crate::stdsubspace::{RealSubspace, StandardSubspace};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Gaussian vector with independent standard normal parts.
pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    CVec::from_fn(n, |_, _| c(normal(rng), normal(rng)))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(normal(rng), normal(rng)))
}

pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    loop {
        let v = gaussian_vector(n, rng);
        let nv = v.norm();
        if nv > 1e-6 {
            return v.unscale(nv);
        }
    }
}

/// Haar-distributed unitary from the QR decomposition of a Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let qr = gaussian_matrix(n, n, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { cr(1.0) };
        for z in u.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    u
}

/// Positive definite operator `X X* / n + floor · I`.
pub fn positive_definite<R: Rng + ?Sized>(n: usize, floor: f64, rng: &mut R) -> HermitianOperator {
    let x = gaussian_matrix(n, n, rng);
    let a = (&x * x.adjoint()).unscale(n as f64) + CMat::identity(n, n).scale(floor);
    HermitianOperator::from_hermitian_unchecked(crate::linalg::hermitian_part(&a))
}

/// Positive semidefinite operator of the given rank.
pub fn positive_semidefinite<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> HermitianOperator {
    let x = gaussian_matrix(n, rank, rng);
    let a = (&x * x.adjoint()).unscale(n as f64);
    HermitianOperator::from_hermitian_unchecked(crate::linalg::hermitian_part(&a))
}

/// Ordered pair `(A, A + C* C)` with `A` positive semidefinite.
pub fn loewner_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (HermitianOperator, HermitianOperator) {
    let rank = rng.random_range(1..=n);
    let a = if rng.random_bool(0.5) { positive_semidefinite(n, rank, rng) } else { positive_definite(n, 0.05, rng) };
    let cm = gaussian_matrix(n, n, rng).scale(rng.random_range(0.05..1.0));
    let b = a.matrix() + cm.adjoint() * &cm;
    let b = HermitianOperator::from_hermitian_unchecked(crate::linalg::hermitian_part(&b));
    (a, b)
}

/// Standard subspace spanned by `n` Gaussian vectors, resampled until its
/// condition number is below `max_condition`.
pub fn standard_subspace<R: Rng + ?Sized>(n: usize, max_condition: f64, rng: &mut R) -> StandardSubspace {
    loop {
        if let Ok(h) = StandardSubspace::from_columns(&gaussian_matrix(n, n, rng)) {
            if h.condition() <= max_condition {
                return h;
            }
        }
    }
}

/// Real span of `k` random real combinations of the basis of `h`.
pub fn sub_subspace<R: Rng + ?Sized>(h: &RealSubspace, k: usize, rng: &mut R) -> RealSubspace {
    loop {
        let coeffs = CMat::from_fn(h.real_dim(), k, |_, _| cr(normal(rng)));
        if let Ok(s) = RealSubspace::span(&(h.basis() * coeffs)) {
            if s.real_dim() == k {
                return s;
            }
        }
    }
}

/// Density matrix with smallest eigenvalue at least `floor`.
pub fn density_matrix<R: Rng + ?Sized>(n: usize, floor: f64, rng: &mut R) -> CMat {
    let u = unitary(n, rng);
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0f64).powi(2)).collect();
    let total: f64 = raw.iter().sum();
    let scale = 1.0 - floor * n as f64;
    let mut d = CMat::zeros(n, n);
    for (k, r) in raw.iter().enumerate() {
        d[(k, k)] = cr(floor + scale * r / total);
    }
    crate::linalg::hermitian_part(&(&u * d * u.adjoint()))
}

/// Diagonal density matrix with smallest eigenvalue at least `floor`.
pub fn diagonal_density<R: Rng + ?Sized>(n: usize, floor: f64, rng: &mut R) -> CMat {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0f64)).collect();
    let total: f64 = raw.iter().sum();
    let scale = 1.0 - floor * n as f64;
    CMat::from_fn(n, n, |i, j| if i == j { cr(floor + scale * raw[i] / total) } else { cr(0.0) })
}
