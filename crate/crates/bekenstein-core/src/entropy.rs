//! Relative entropy on the full matrix algebra `M_n` in standard form.
//!
//! The Hilbert space is `M_n` with the Hilbert–Schmidt product; `M_n` acts
//! by left and its commutant by right multiplication. Vectors are flattened
//! column-major, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
//!
//! A vector `X` induces `ρ_φ = X X*` on `M_n` and `X* X` on the commutant.
//! The spatial derivative `Δ(ω/φ')` is `x ↦ ρ_ω x (X* X)^{-1}`, with inverses
//! taken on supports.

use crate::formcalc::{quad_form_log, ExtendedReal, HermitianOperator};
use crate::linalg::{cr, max_entry, Eigh};
use crate::prelude::*;
use crate::stdsubspace::RealSubspace;
use core::sync::atomic::{AtomicU64, Ordering};

/// Smallest eigenvalue for a state to count as faithful.
pub const EPS_FAITHFUL: f64 = 1e-10;
/// Trace and positivity tolerance of [`DensityMatrix`].
pub const TOL_STATE: f64 = 1e-12;
/// Tolerance for "the vector induces the state".
pub const TOL_INDUCE: f64 = 1e-10;
/// Step sequence for the limit formulas: `t = 10^{-1}, ..., 10^{-6}`.
pub const LIMIT_STEPS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
/// Largest accepted disagreement between successive extrapolants.
pub const MAX_EXTRAPOLATION_RESIDUAL: f64 = 1e-4;

/// Column-major flattening.
pub fn vec_of(x: &CMat) -> CVec {
    CVec::from_column_slice(x.as_slice())
}

/// Inverse of [`vec_of`].
pub fn unvec(v: &CVec, n: usize) -> CMat {
    CMat::from_column_slice(n, n, v.as_slice())
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Positive trace-one matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMat,
    eig: Eigh,
}

impl DensityMatrix {
    pub fn new(matrix: CMat) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: matrix.ncols() });
        }
        if crate::linalg::hermiticity_defect(&matrix) > 1e-12 {
            return Err(Error::Input("density matrix is not Hermitian".into()));
        }
        let matrix = crate::linalg::hermitian_part(&matrix);
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TOL_STATE {
            return Err(Error::Input(format!("trace {tr} is not 1")));
        }
        let eig = Eigh::new(&matrix);
        if eig.min() < -TOL_STATE {
            return Err(Error::Input(format!("negative eigenvalue {:e}", eig.min())));
        }
        Ok(DensityMatrix { matrix, eig })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        DensityMatrix::new(CMat::from_fn(n, n, |i, j| if i == j { cr(values[i]) } else { cr(0.0) }))
    }

    /// `X X*` normalised, for a non-zero `X`.
    pub fn from_vector(x: &CMat) -> Result<Self> {
        let m = x * x.adjoint();
        let tr = m.trace().re;
        if !(tr > 0.0) {
            return Err(Error::Input("zero vector".into()));
        }
        DensityMatrix::new(m.unscale(tr))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig.min()
    }

    pub fn is_faithful(&self) -> bool {
        self.eig.min() > EPS_FAITHFUL
    }

    fn support_eps(&self) -> f64 {
        EPS_FAITHFUL
    }

    /// `ρ^z` on the support of `ρ`, zero on its kernel.
    pub fn power(&self, z: C64) -> CMat {
        let eps = self.support_eps();
        self.eig.map(|l| if l > eps { (z * l.ln()).exp() } else { cr(0.0) })
    }

    /// `log ρ` on the support.
    pub fn log(&self) -> CMat {
        self.power_real_fn(f64::ln)
    }

    fn power_real_fn(&self, f: impl Fn(f64) -> f64) -> CMat {
        let eps = self.support_eps();
        self.eig.map_real(|l| if l > eps { f(l) } else { 0.0 })
    }

    /// Support projection.
    pub fn support(&self) -> CMat {
        self.power_real_fn(|_| 1.0)
    }

    /// Canonical representative `ρ^{1/2}` in the standard form.
    pub fn sqrt(&self) -> CMat {
        self.power_real_fn(f64::sqrt)
    }

    fn require_faithful(&self, name: &str) -> Result<()> {
        if !self.is_faithful() {
            return Err(Error::Precondition(format!(
                "{name} is not faithful (min eigenvalue {:e})",
                self.eig.min()
            )));
        }
        Ok(())
    }
}

/// `Tr ρ_φ (log ρ_φ - log ρ_ω)`, `+∞` when the support of `ρ_φ` is not inside
/// that of `ρ_ω`.
pub fn trace_formula(phi: &DensityMatrix, omega: &DensityMatrix) -> ExtendedReal {
    let leak = ((CMat::identity(phi.dim(), phi.dim()) - omega.support()) * phi.matrix()).trace().re;
    if leak > 1e-10 {
        return ExtendedReal::PlusInfinity;
    }
    let v = (phi.matrix() * (phi.log() - omega.log())).trace().re;
    ExtendedReal::Finite(v)
}

/// `M_n` in standard form with a reference state `ω` and vacuum
/// `Ω = ρ_ω^{1/2}`.
#[derive(Debug, Clone)]
pub struct StandardFormAlgebra {
    omega: DensityMatrix,
    vacuum: CMat,
}

impl StandardFormAlgebra {
    pub fn new(omega: DensityMatrix) -> Result<Self> {
        omega.require_faithful("reference state")?;
        let vacuum = omega.sqrt();
        Ok(StandardFormAlgebra { omega, vacuum })
    }

    pub fn n(&self) -> usize {
        self.omega.dim()
    }

    pub fn omega(&self) -> &DensityMatrix {
        &self.omega
    }

    pub fn vacuum(&self) -> &CMat {
        &self.vacuum
    }

    /// Matrix of `x ↦ a x` on the flattened space.
    pub fn left(&self, a: &CMat) -> CMat {
        kron(&CMat::identity(self.n(), self.n()), a)
    }

    /// Matrix of `x ↦ x b`.
    pub fn right(&self, b: &CMat) -> CMat {
        kron(&b.transpose(), &CMat::identity(self.n(), self.n()))
    }

    /// Vacuum modular operator `x ↦ ρ_ω x ρ_ω^{-1}`.
    pub fn modular_operator(&self) -> HermitianOperator {
        spatial_operator(&self.omega, &self.omega)
    }

    /// `closure(M_sa Ω)`, whose modular operator is that of the vacuum.
    pub fn natural_subspace(&self) -> Result<RealSubspace> {
        let n = self.n();
        let mut cols = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in i..n {
                let mut a = CMat::zeros(n, n);
                a[(i, j)] = cr(1.0);
                a[(j, i)] = cr(1.0);
                cols.push(vec_of(&(&a * &self.vacuum)));
                if i != j {
                    let mut b = CMat::zeros(n, n);
                    b[(i, j)] = C64::new(0.0, 1.0);
                    b[(j, i)] = C64::new(0.0, -1.0);
                    cols.push(vec_of(&(&b * &self.vacuum)));
                }
            }
        }
        crate::stdsubspace::make_subspace(&cols).map(|s| s.subspace)
    }
}

/// `x ↦ ρ_ω x ρ'^{-1}` on the flattened space, inverse on the support.
fn spatial_operator(omega: &DensityMatrix, phi_prime: &DensityMatrix) -> HermitianOperator {
    let inv = phi_prime.power(cr(-1.0));
    let m = kron(&inv.transpose(), omega.matrix());
    HermitianOperator::from_hermitian_unchecked(crate::linalg::hermitian_part(&m))
}

/// Connes' spatial derivative `Δ(ω/φ')` for faithful `ω`.
pub fn spatial_derivative(omega: &DensityMatrix, phi_prime: &DensityMatrix) -> Result<HermitianOperator> {
    omega.require_faithful("ω")?;
    if omega.dim() != phi_prime.dim() {
        return Err(Error::DimensionMismatch { expected: omega.dim(), found: phi_prime.dim() });
    }
    Ok(spatial_operator(omega, phi_prime))
}

fn check_representative(phi: &DensityMatrix, xi: &CMat) -> Result<DensityMatrix> {
    let n = phi.dim();
    if xi.nrows() != n || xi.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: xi.nrows() });
    }
    let induced = xi * xi.adjoint();
    let err = max_entry(&(&induced - phi.matrix()));
    if err > TOL_INDUCE {
        return Err(Error::Input(format!("vector does not induce φ (discrepancy {err:e})")));
    }
    DensityMatrix::new(xi.adjoint() * xi)
}

/// `S(φ||ω) = -(ξ, log Δ(ω/φ') ξ)` for a representative `ξ` of `φ`.
///
/// `ω` may be non-faithful; the support convention then yields `+∞` exactly
/// when the support of `φ` leaves that of `ω`.
pub fn relative_entropy(phi: &DensityMatrix, omega: &DensityMatrix, xi: &CMat) -> Result<ExtendedReal> {
    if phi.dim() != omega.dim() {
        return Err(Error::DimensionMismatch { expected: omega.dim(), found: phi.dim() });
    }
    let phi_prime = check_representative(phi, xi)?;
    let delta = spatial_operator(omega, &phi_prime);
    Ok(-quad_form_log(&vec_of(xi), &delta)?)
}

/// Richardson extrapolation to `t → 0` of samples on `t_k = 10^{-k-1}`,
/// eliminating the `t` and `t²` error terms with the last three samples.
/// Returns the estimate and the change from the order-1 estimate.
fn extrapolate(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    let (a, b, c) = (values[m - 3], values[m - 2], values[m - 1]);
    let r1_ab = (10.0 * b - a) / 9.0;
    let r1_bc = (10.0 * c - b) / 9.0;
    let r2 = (100.0 * r1_bc - r1_ab) / 99.0;
    (r2, (r2 - r1_bc).abs())
}

/// Uhlmann's formula `S = -lim_{t→0+} ((ξ, Δ^t ξ) - 1)/t`, with
/// `(ξ, Δ^t ξ) = Tr(ξ* ρ_ω^t ξ (ξ*ξ)^{-t})`.
pub fn uhlmann_entropy(phi: &DensityMatrix, omega: &DensityMatrix, xi: &CMat) -> Result<ExtendedReal> {
    let phi_prime = check_representative(phi, xi)?;
    if trace_formula(phi, omega) == ExtendedReal::PlusInfinity {
        return Ok(ExtendedReal::PlusInfinity);
    }
    let norm2 = xi.norm_squared();
    let quotients: Vec<f64> = LIMIT_STEPS
        .iter()
        .map(|&t| {
            let q = (xi.adjoint() * omega.power(cr(t)) * xi * phi_prime.power(cr(-t))).trace().re;
            -(q - norm2) / t
        })
        .collect();
    let (value, residual) = extrapolate(&quotients);
    if residual > MAX_EXTRAPOLATION_RESIDUAL {
        return Err(Error::numerical("Uhlmann extrapolation did not settle", residual));
    }
    Ok(ExtendedReal::Finite(value))
}

/// One value of the cocycle adjoint `u_s = (Dφ:Dω)_s^*`.
#[derive(Debug, Clone)]
pub struct CocycleSample {
    pub s: f64,
    pub u_s: CMat,
}

/// `u_s = ((Dφ:Dω)_s)^* = ρ_ω^{is} ρ_φ^{-is}` for faithful states.
pub fn connes_cocycle(phi: &DensityMatrix, omega: &DensityMatrix, s: f64) -> Result<CocycleSample> {
    phi.require_faithful("φ")?;
    omega.require_faithful("ω")?;
    let u_s = omega.power(C64::new(0.0, s)) * phi.power(C64::new(0.0, -s));
    Ok(CocycleSample { s, u_s })
}

/// `(Dφ:Dω)_s = ρ_φ^{is} ρ_ω^{-is}`.
pub fn cocycle_derivative(phi: &DensityMatrix, omega: &DensityMatrix, s: f64) -> Result<CMat> {
    Ok(connes_cocycle(phi, omega, s)?.u_s.adjoint())
}

/// Residual of `(Dφ:Dω)_{s+t} = (Dφ:Dω)_s σ^ω_s((Dφ:Dω)_t)` with
/// `σ^ω_s(a) = ρ_ω^{is} a ρ_ω^{-is}`.
pub fn cocycle_identity_residual(phi: &DensityMatrix, omega: &DensityMatrix, s: f64, t: f64) -> Result<f64> {
    let ds = cocycle_derivative(phi, omega, s)?;
    let dt = cocycle_derivative(phi, omega, t)?;
    let dst = cocycle_derivative(phi, omega, s + t)?;
    let sigma = omega.power(C64::new(0.0, s)) * dt * omega.power(C64::new(0.0, -s));
    Ok(crate::linalg::op_norm(&(dst - ds * sigma)))
}

/// Residual of `Δ(ω/φ')^{is} = u_s Δ(φ/φ')^{is}` on the standard-form space,
/// with `φ'` the commutant state of `ξ`.
pub fn cocycle_consistency_residual(phi: &DensityMatrix, omega: &DensityMatrix, xi: &CMat, s: f64) -> Result<f64> {
    let phi_prime = check_representative(phi, xi)?;
    let alg = StandardFormAlgebra::new(omega.clone())?;
    let lhs = spatial_derivative(omega, &phi_prime)?.eigh().map(|l| (C64::new(0.0, s) * l.ln()).exp());
    let rhs_mod = spatial_derivative(phi, &phi_prime)?.eigh().map(|l| (C64::new(0.0, s) * l.ln()).exp());
    let u = connes_cocycle(phi, omega, s)?.u_s;
    Ok(crate::linalg::op_norm(&(lhs - alg.left(&u) * rhs_mod)))
}

/// Calibrated sign of the cocycle derivative, stored as `f64` bits
/// (`0` means not yet computed).
static COCYCLE_SIGN: AtomicU64 = AtomicU64::new(0);

/// `t ↦ φ(u_{-it}) = Tr(ρ_φ ρ_ω^t ρ_φ^{-t})`, the continued cocycle.
fn continued_cocycle(phi: &DensityMatrix, omega: &DensityMatrix, t: f64) -> f64 {
    (phi.matrix() * omega.power(cr(t)) * phi.power(cr(-t))).trace().re
}

fn cocycle_slope(phi: &DensityMatrix, omega: &DensityMatrix) -> Result<f64> {
    let quotients: Vec<f64> = LIMIT_STEPS.iter().map(|&t| (continued_cocycle(phi, omega, t) - 1.0) / t).collect();
    let (value, residual) = extrapolate(&quotients);
    if residual > MAX_EXTRAPOLATION_RESIDUAL {
        return Err(Error::numerical("cocycle extrapolation did not settle", residual));
    }
    Ok(value)
}

/// Overall sign relating the one-sided derivative of the continued cocycle
/// to the entropy, fixed once against the trace formula on the pair
/// `diag(0.7, 0.3)`, `diag(0.5, 0.5)`.
pub fn cocycle_sign() -> f64 {
    let bits = COCYCLE_SIGN.load(Ordering::Acquire);
    if bits != 0 {
        return f64::from_bits(bits);
    }
    let phi = DensityMatrix::diagonal(&[0.7, 0.3]).expect("valid calibration state");
    let omega = DensityMatrix::diagonal(&[0.5, 0.5]).expect("valid calibration state");
    let slope = cocycle_slope(&phi, &omega).expect("calibration pair is well conditioned");
    let reference = trace_formula(&phi, &omega).to_f64();
    let sign = if slope * reference < 0.0 { -1.0 } else { 1.0 };
    COCYCLE_SIGN.store(f64::to_bits(sign), Ordering::Release);
    sign
}

/// Entropy from the derivative at `0` of the analytically continued cocycle.
pub fn cocycle_entropy(phi: &DensityMatrix, omega: &DensityMatrix) -> Result<f64> {
    phi.require_faithful("φ")?;
    omega.require_faithful("ω")?;
    Ok(cocycle_sign() * cocycle_slope(phi, omega)?)
}

/// Result of [`localized_isometry`].
#[derive(Debug, Clone)]
pub enum Localization {
    /// `v ∈ M` with `v Ω = ξ` and `v* v = 1`.
    Isometry(CMat),
    /// Commutant restrictions differ; carries the largest entry of
    /// `ξ*ξ - Ω*Ω`.
    Refused { discrepancy: f64 },
}

/// Isometry `v ∈ M` with `ξ = v Ω`, which exists iff `ξ` and `Ω` agree on the
/// commutant. Here `Ω` is invertible, so `v = ξ Ω^{-1}` (a unitary).
pub fn localized_isometry(xi: &CMat, alg: &StandardFormAlgebra) -> Result<Localization> {
    let n = alg.n();
    if xi.nrows() != n || xi.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: xi.nrows() });
    }
    let omega = alg.vacuum();
    let discrepancy = max_entry(&(xi.adjoint() * xi - omega.adjoint() * omega));
    if discrepancy > TOL_INDUCE {
        return Ok(Localization::Refused { discrepancy });
    }
    let inv = alg.omega().power(cr(-0.5));
    Ok(Localization::Isometry(xi * inv))
}

/// `S(φ||ω) = -(ξ, log Δ_Ω ξ)` for `ξ` localized against the vacuum.
pub fn vector_state_entropy(xi: &CMat, alg: &StandardFormAlgebra) -> Result<f64> {
    match localized_isometry(xi, alg)? {
        Localization::Refused { discrepancy } => Err(Error::Precondition(format!(
            "vector is not localized in M (commutant discrepancy {discrepancy:e})"
        ))),
        Localization::Isometry(_) => (-quad_form_log(&vec_of(xi), &alg.modular_operator())?)
            .finite()
            .ok_or_else(|| Error::numerical("vacuum modular form is infinite", f64::INFINITY)),
    }
}

/// Partial trace over the second factor of `C^{da} ⊗ C^{db}` (Kronecker
/// ordering `a ⊗ b`).
pub fn partial_trace_second(rho: &CMat, da: usize, db: usize) -> CMat {
    CMat::from_fn(da, da, |i, j| (0..db).map(|k| rho[(i * db + k, j * db + k)]).sum())
}
