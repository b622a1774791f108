//! Quadratic-form calculus for self-adjoint operators.
//!
//! Values of forms live in the extended reals: a positive operator may give
//! `+∞`, the logarithm of an operator with a kernel gives `-∞` on vectors that
//! see the kernel, and the sum of two infinite parts of opposite sign is not
//! well defined. In finite dimension only the logarithm produces infinite
//! values, but the bookkeeping is kept general so the modular code can share
//! it.

use crate::linalg::{cr, hermiticity_defect, Eigh};
use crate::prelude::*;
use crate::quad;

/// Relative size of the numerical kernel: eigenvalues below
/// `EPS_SUPPORT * ||A||` are treated as zero.
pub const EPS_SUPPORT: f64 = 1e-12;
/// Absolute fallback used when the operator norm vanishes.
pub const ABS_FLOOR: f64 = 1e-14;
/// Relative Hermiticity tolerance accepted by [`HermitianOperator::new`].
pub const TOL_HERM: f64 = 1e-12;
/// Form order slack, relative to the larger operator norm.
pub const TOL_ORDER: f64 = 1e-10;
/// Slack accepted in the monotonicity check of the logarithm.
pub const TOL_LOG_MONOTONE: f64 = 1e-9;

/// Extended real value of a quadratic form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
    NotWellDefined,
}

impl ExtendedReal {
    /// Combine a positive part `p ∈ [0, ∞]` and a negative part `m ∈ [0, ∞]`
    /// into `p - m`, which is undefined only when both are infinite.
    pub fn from_parts(positive: Option<f64>, negative: Option<f64>) -> Self {
        match (positive, negative) {
            (Some(p), Some(m)) => ExtendedReal::Finite(p - m),
            (None, Some(_)) => ExtendedReal::PlusInfinity,
            (Some(_), None) => ExtendedReal::MinusInfinity,
            (None, None) => ExtendedReal::NotWellDefined,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    /// Map to `f64`, with `NaN` for the undefined case.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PlusInfinity => f64::INFINITY,
            ExtendedReal::MinusInfinity => f64::NEG_INFINITY,
            ExtendedReal::NotWellDefined => f64::NAN,
        }
    }
}

/// `-(+∞) = -∞`; undefined stays undefined.
impl core::ops::Neg for ExtendedReal {
    type Output = Self;

    fn neg(self) -> Self {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(-v),
            ExtendedReal::PlusInfinity => ExtendedReal::MinusInfinity,
            ExtendedReal::MinusInfinity => ExtendedReal::PlusInfinity,
            ExtendedReal::NotWellDefined => ExtendedReal::NotWellDefined,
        }
    }
}

/// `+∞ + -∞` is not well defined.
impl core::ops::Add for ExtendedReal {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        use ExtendedReal::*;
        match (self, other) {
            (NotWellDefined, _) | (_, NotWellDefined) => NotWellDefined,
            (PlusInfinity, MinusInfinity) | (MinusInfinity, PlusInfinity) => NotWellDefined,
            (PlusInfinity, _) | (_, PlusInfinity) => PlusInfinity,
            (MinusInfinity, _) | (_, MinusInfinity) => MinusInfinity,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }
}

/// Eigen-decomposition of a Hermitian operator together with its numerical
/// support.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: RVec,
    pub eigenvectors: CMat,
    pub support_rank: usize,
}

/// A finite self-adjoint operator with its cached spectral decomposition.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: CMat,
    eig: Eigh,
    norm: f64,
}

impl HermitianOperator {
    /// Validate Hermiticity (relative tolerance [`TOL_HERM`]) and
    /// diagonalise. The stored matrix is the exact Hermitian part.
    pub fn new(matrix: CMat) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        if matrix.nrows() == 0 {
            return Err(Error::Input("operator must have positive dimension".into()));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Input("operator has non-finite entries".into()));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > TOL_HERM {
            return Err(Error::Input(format!("operator is not Hermitian (relative defect {defect:e})")));
        }
        Ok(Self::from_hermitian_unchecked(crate::linalg::hermitian_part(&matrix)))
    }

    /// Diagonal operator with the given real spectrum.
    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = CMat::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = cr(v);
        }
        Self::from_hermitian_unchecked(m)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub(crate) fn from_hermitian_unchecked(matrix: CMat) -> Self {
        let eig = Eigh::new(&matrix);
        let norm = eig.max_abs();
        HermitianOperator { matrix, eig, norm }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn eigh(&self) -> &Eigh {
        &self.eig
    }

    /// Operator norm.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Threshold separating the numerical kernel from the support.
    pub fn eps_support(&self) -> f64 {
        if self.norm > 0.0 {
            EPS_SUPPORT * self.norm
        } else {
            ABS_FLOOR
        }
    }

    pub fn spectral(&self) -> SpectralData {
        let eps = self.eps_support();
        SpectralData {
            eigenvalues: self.eig.values.clone(),
            eigenvectors: self.eig.vectors.clone(),
            support_rank: self.eig.values.iter().filter(|l| l.abs() > eps).count(),
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig.min()
    }

    /// `f(A)` by functional calculus.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> CMat {
        self.eig.map_real(f)
    }

    /// `f(A_p) p` with `p` the support projection (zero on the kernel).
    pub fn apply_fn_on_support(&self, f: impl Fn(f64) -> f64) -> CMat {
        let eps = self.eps_support();
        self.eig.map_real(|l| if l.abs() > eps { f(l) } else { 0.0 })
    }

    /// Orthonormal columns spanning the support (eigenvalues above the
    /// kernel threshold in modulus).
    pub fn support_basis(&self) -> CMat {
        let eps = self.eps_support();
        let keep: Vec<usize> = (0..self.dim()).filter(|&k| self.eig.values[k].abs() > eps).collect();
        let mut q = CMat::zeros(self.dim(), keep.len());
        for (j, &k) in keep.iter().enumerate() {
            q.set_column(j, &self.eig.vectors.column(k));
        }
        q
    }

    /// Spectral weights `|<v_i, ξ>|²` in the eigenbasis.
    pub fn spectral_weights(&self, xi: &CVec) -> Result<RVec> {
        self.check_dim(xi)?;
        let coeffs = self.eig.vectors.adjoint() * xi;
        Ok(coeffs.map(|z| z.norm_sqr()))
    }

    fn check_dim(&self, xi: &CVec) -> Result<()> {
        if xi.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: xi.len() });
        }
        Ok(())
    }

    fn ensure_psd(&self) -> Result<()> {
        if self.min_eigenvalue() < -self.eps_support() {
            return Err(Error::Domain(format!(
                "operator is not positive semidefinite (min eigenvalue {:e})",
                self.min_eigenvalue()
            )));
        }
        Ok(())
    }
}

fn nonzero(xi: &CVec) -> Result<f64> {
    let n2 = xi.norm_squared();
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::Input("vector must be non-zero and finite".into()));
    }
    Ok(n2)
}

/// `(ξ, A ξ)` in the form sense, split into positive and negative spectral
/// parts.
pub fn quad_form(xi: &CVec, a: &HermitianOperator) -> Result<ExtendedReal> {
    nonzero(xi)?;
    let w = a.spectral_weights(xi)?;
    let (mut pos, mut neg) = (0.0, 0.0);
    for (l, wi) in a.eig.values.iter().zip(w.iter()) {
        if *l > 0.0 {
            pos += l * wi;
        } else {
            neg -= l * wi;
        }
    }
    Ok(ExtendedReal::from_parts(Some(pos), Some(neg)))
}

/// `(ξ, log A ξ)` for positive semidefinite `A`, with the logarithm taken on
/// the support of `A`.
///
/// Returns `-∞` when `ξ` carries weight (relative to `||ξ||²`, above
/// [`EPS_SUPPORT`]) on the numerical kernel.
pub fn quad_form_log(xi: &CVec, a: &HermitianOperator) -> Result<ExtendedReal> {
    let n2 = nonzero(xi)?;
    a.ensure_psd()?;
    let eps = a.eps_support();
    let w = a.spectral_weights(xi)?;
    let (mut pos, mut neg, mut kernel) = (0.0, 0.0, 0.0);
    for (l, wi) in a.eig.values.iter().zip(w.iter()) {
        if *l <= eps {
            kernel += wi;
        } else if *l >= 1.0 {
            pos += wi * l.ln();
        } else {
            neg -= wi * l.ln();
        }
    }
    let negative = if kernel > EPS_SUPPORT * n2 { None } else { Some(neg) };
    Ok(ExtendedReal::from_parts(Some(pos), negative))
}

/// The integrand `f(λ, t) = -((t+1)^{-1} - λ (t+λ)^{-1}) / t` of the
/// integral representation `log λ = ∫_0^∞ f(λ, t) dt`.
///
/// Evaluated in the cancellation-free form `(λ - 1) / ((t + 1)(t + λ))`.
pub fn log_kernel(lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(t > 0.0) {
        return Err(Error::Domain(format!("log kernel needs λ > 0 and t > 0 (got λ={lambda}, t={t})")));
    }
    Ok((lambda - 1.0) / ((t + 1.0) * (t + lambda)))
}

/// Kernel after the substitution `t = tan θ`: a bounded smooth function of
/// `θ ∈ (0, π/2)`.
fn log_kernel_theta(lambda: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    (lambda - 1.0) / ((s + c) * (s + lambda * c))
}

const THETA_MAX: f64 = core::f64::consts::FRAC_PI_2;
const KERNEL_TARGET: f64 = 1e-10;
const MAX_INTERVALS: usize = 400;

/// `∫_0^∞ f(λ, t) dt` by adaptive Gauss–Kronrod after compactifying with
/// `t = tan θ`.
pub fn kernel_integral(lambda: f64) -> Result<quad::Quadrature> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("log kernel needs λ > 0 (got {lambda})")));
    }
    quad::integrate(|th| log_kernel_theta(lambda, th), 0.0, THETA_MAX, KERNEL_TARGET * 0.1, 1e-13, MAX_INTERVALS)
}

/// `(ξ, log A ξ)` as the integral over `t` of `(ξ, f(A, t) ξ)`.
///
/// Each integrand value solves a linear system with `sin θ + cos θ A`, so no
/// spectral decomposition enters except to restrict to the support of a
/// singular `A`.
pub fn log_via_kernel(xi: &CVec, a: &HermitianOperator) -> Result<f64> {
    nonzero(xi)?;
    a.ensure_psd()?;
    let (op, v) = if a.spectral().support_rank < a.dim() {
        let q = a.support_basis();
        let v = q.adjoint() * xi;
        let leak = (xi - &q * &v).norm();
        if leak > 1e-8 * xi.norm() {
            return Err(Error::Precondition(format!("vector leaves the support (leak {leak:e})")));
        }
        (q.adjoint() * a.matrix() * &q, v)
    } else {
        (a.matrix().clone(), xi.clone())
    };
    let n = op.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let id = CMat::identity(n, n);
    let lhs = (&op - &id) * &v;
    let integrand = |th: f64| {
        let (s, c) = th.sin_cos();
        let m = id.scale(s) + op.scale(c);
        let sol = m.lu().solve(&lhs).unwrap_or_else(|| CVec::zeros(n));
        v.dotc(&sol).re / (s + c)
    };
    let scale = v.norm_squared();
    let q = quad::integrate(integrand, 0.0, THETA_MAX, KERNEL_TARGET * 0.1 * scale, 1e-13, MAX_INTERVALS)?;
    if !q.value.is_finite() {
        return Err(Error::numerical("kernel quadrature produced a non-finite value", q.error));
    }
    Ok(q.value)
}

/// Exponents `k` of the step sequence `t = 2^{-k}` used by [`log_limit`].
pub const LIMIT_EXPONENTS: core::ops::RangeInclusive<i32> = 3..=20;

/// `(ξ, log A ξ) = lim_{t→0+} (||A^{t/2} ξ||² - ||ξ||²) / t`.
///
/// The difference quotients decrease monotonically to the limit; this is
/// checked, and the last two terms are combined by Richardson extrapolation.
pub fn log_limit(xi: &CVec, a: &HermitianOperator) -> Result<f64> {
    let n2 = nonzero(xi)?;
    a.ensure_psd()?;
    let eps = a.eps_support();
    let w = a.spectral_weights(xi)?;
    let kernel: f64 = a.eig.values.iter().zip(w.iter()).filter(|(l, _)| **l <= eps).map(|(_, w)| w).sum();
    if kernel > EPS_SUPPORT * n2 {
        return Err(Error::Precondition("(ξ, log A ξ) is -∞; the limit diverges".into()));
    }
    let quotient = |t: f64| -> f64 {
        a.eig
            .values
            .iter()
            .zip(w.iter())
            .filter(|(l, _)| **l > eps)
            .map(|(l, wi)| wi * (t * l.ln()).exp_m1())
            .sum::<f64>()
            / t
    };
    let seq: Vec<f64> = LIMIT_EXPONENTS.map(|k| quotient((-k as f64).exp2())).collect();
    let scale = seq.iter().fold(n2, |m, v| m.max(v.abs()));
    for pair in seq.windows(2) {
        if pair[1] > pair[0] + 1e-12 * scale {
            return Err(Error::numerical("difference quotients are not monotone", pair[1] - pair[0]));
        }
    }
    let m = seq.len();
    Ok(2.0 * seq[m - 1] - seq[m - 2])
}

/// Form order `A ≤ B`: the smallest eigenvalue of `B - A` is at least
/// `-TOL_ORDER · max(||A||, ||B||)`.
pub fn form_order_leq(a: &HermitianOperator, b: &HermitianOperator) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let diff = b.matrix() - a.matrix();
    let scale = a.norm().max(b.norm()).max(ABS_FLOOR);
    Ok(crate::linalg::min_eig(&diff) >= -TOL_ORDER * scale)
}

/// Outcome of [`check_log_monotone`].
#[derive(Debug, Clone)]
pub struct LogMonotoneReport {
    /// Smallest eigenvalue of `log B - log A` compressed to the support of A.
    pub margin: f64,
    /// Unit vector attaining the margin.
    pub witness: CVec,
    pub holds: bool,
}

impl LogMonotoneReport {
    pub fn into_result(self) -> Result<Self> {
        if self.holds {
            Ok(self)
        } else {
            Err(Error::Property(format!("log B - log A has eigenvalue {:e}", self.margin)))
        }
    }
}

/// `A ≤ B ⟹ log A ≤ log B`, evaluated on the support of `A` (which the order
/// forces inside the support of `B`).
pub fn check_log_monotone(a: &HermitianOperator, b: &HermitianOperator) -> Result<LogMonotoneReport> {
    if !form_order_leq(a, b)? {
        return Err(Error::Precondition("A ≤ B does not hold".into()));
    }
    a.ensure_psd()?;
    b.ensure_psd()?;
    let q = a.support_basis();
    if q.ncols() == 0 {
        return Ok(LogMonotoneReport { margin: 0.0, witness: CVec::zeros(a.dim()), holds: true });
    }
    let log_a = a.apply_fn_on_support(|l| l.ln());
    let log_b = b.apply_fn_on_support(|l| l.ln());
    let d = q.adjoint() * (log_b - log_a) * &q;
    let eig = Eigh::new(&d);
    let margin = eig.min();
    let witness = &q * eig.vectors.column(0);
    Ok(LogMonotoneReport { margin, witness, holds: margin >= -TOL_LOG_MONOTONE })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cvec};

    #[test]
    fn extended_real_arithmetic() {
        use ExtendedReal::*;
        assert_eq!(Finite(1.0) + Finite(2.0), Finite(3.0));
        assert_eq!(PlusInfinity + MinusInfinity, NotWellDefined);
        assert_eq!(MinusInfinity + Finite(5.0), MinusInfinity);
        assert_eq!(-PlusInfinity, MinusInfinity);
        assert_eq!(ExtendedReal::from_parts(None, None), NotWellDefined);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMat::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::Input(_))));
    }

    #[test]
    fn quad_form_small_cases() {
        let x = cvec(&[c(1., 0.), c(0., 0.)]);
        assert_eq!(quad_form(&x, &HermitianOperator::identity(2)).unwrap(), ExtendedReal::Finite(1.0));
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let x = cvec(&[c(h, 0.), c(h, 0.)]);
        let v = quad_form(&x, &HermitianOperator::diagonal(&[1.0, -1.0])).unwrap().finite().unwrap();
        assert!(v.abs() < 1e-15);
        assert!(quad_form(&CVec::zeros(2), &HermitianOperator::identity(2)).is_err());
        assert!(matches!(
            quad_form(&cvec(&[c(1., 0.)]), &HermitianOperator::identity(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn log_form_support_convention() {
        let x = cvec(&[c(1., 0.), c(0., 0.)]);
        assert_eq!(quad_form_log(&x, &HermitianOperator::diagonal(&[0.0, 1.0])).unwrap(), ExtendedReal::MinusInfinity);
        let e = core::f64::consts::E;
        let v = quad_form_log(&x, &HermitianOperator::diagonal(&[e, e * e])).unwrap().finite().unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        assert!(matches!(quad_form_log(&x, &HermitianOperator::diagonal(&[-1.0, 1.0])), Err(Error::Domain(_))));
    }

    #[test]
    fn kernel_sign_and_zero() {
        assert_eq!(log_kernel(1.0, 3.7).unwrap(), 0.0);
        assert!(log_kernel(0.5, 1.0).unwrap() < 0.0);
        assert!(log_kernel(2.0, 1.0).unwrap() > 0.0);
        assert!(log_kernel(0.0, 1.0).is_err());
    }

    #[test]
    fn log_limit_needs_finite_form() {
        let x = cvec(&[c(1., 0.), c(0., 0.)]);
        assert!(matches!(log_limit(&x, &HermitianOperator::diagonal(&[0.0, 1.0])), Err(Error::Precondition(_))));
    }

    #[test]
    fn log_monotone_precondition() {
        let a = HermitianOperator::diagonal(&[1.0, 3.0]);
        let b = HermitianOperator::diagonal(&[2.0, 2.0]);
        assert!(!form_order_leq(&a, &b).unwrap());
        assert!(matches!(check_log_monotone(&a, &b), Err(Error::Precondition(_))));
    }
}
