//! Standard subspaces of `C^n` and their Tomita data.
//!
//! `C^n` is identified with `R^{2n}` by stacking real and imaginary parts.
//! Under this identification `Re<ξ, η>` is the Euclidean product and
//! `Im<ξ, η> = xᵀ Ω y` with `Ω = [[0, I], [-I, 0]]`. A real subspace is stored
//! as a complex `n × k` matrix whose realified columns are orthonormal.
//!
//! Two routes to the modular operator are provided. [`StandardSubspace`]
//! builds the Tomita involution as a real-linear map and polar decomposes it.
//! [`GramStandard`] works only with the complex Gram matrix of a real basis,
//! which is what an infinite-dimensional model can supply.

use crate::formcalc::{quad_form_log, HermitianOperator};
use crate::linalg::{c, conj_mat, cr, op_norm, range_basis, Eigh, EighReal, I};
use crate::prelude::*;
use crate::report::Inequality;
use nalgebra::SVD;

/// Smallest singular value of `[B | iB]` below which a subspace is not
/// treated as standard.
pub const EPS_STD: f64 = 1e-8;
/// Condition number above which the Tomita construction is refused.
pub const MAX_CONDITION: f64 = 1e10;
/// Relative rank cutoff used when orthonormalising real spans.
pub const RANK_TOL: f64 = 1e-10;
/// Slack in the containment test `K ⊆ H`.
pub const TOL_CONTAIN: f64 = 1e-10;

/// `ξ ↦ (Re ξ, Im ξ)` applied column by column.
pub fn realify(m: &CMat) -> RMat {
    let n = m.nrows();
    let mut r = RMat::zeros(2 * n, m.ncols());
    for j in 0..m.ncols() {
        for i in 0..n {
            r[(i, j)] = m[(i, j)].re;
            r[(n + i, j)] = m[(i, j)].im;
        }
    }
    r
}

/// Inverse of [`realify`].
pub fn complexify(r: &RMat) -> CMat {
    let n = r.nrows() / 2;
    CMat::from_fn(n, r.ncols(), |i, j| c(r[(i, j)], r[(n + i, j)]))
}

/// Orthonormal basis of the column span of a real matrix.
fn real_range(a: &RMat, rel_tol: f64) -> RMat {
    let m = a.nrows();
    if a.ncols() == 0 {
        return RMat::zeros(m, 0);
    }
    let svd = SVD::new(a.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&k| smax > 0.0 && svd.singular_values[k] > rel_tol * smax).collect();
    let mut out = RMat::zeros(m, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        out.set_column(j, &u.column(k));
    }
    out
}

/// Orthonormal basis of the Euclidean orthogonal complement of the
/// orthonormal columns `q`.
fn real_complement(q: &RMat) -> RMat {
    let m = q.nrows();
    let proj = RMat::identity(m, m) - q * q.transpose();
    let eig = EighReal::new(&proj);
    let keep: Vec<usize> = (0..m).filter(|&k| eig.values[k] > 0.5).collect();
    let mut out = RMat::zeros(m, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        out.set_column(j, &eig.vectors.column(k));
    }
    out
}

/// Closed real-linear subspace of `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSubspace {
    basis: CMat,
}

/// Result of [`make_subspace`]: the span and how many input vectors were
/// linearly dependent on the others.
#[derive(Debug, Clone)]
pub struct Spanned {
    pub subspace: RealSubspace,
    pub dropped: usize,
}

/// Real span of the given vectors, orthonormalised in `Re<·,·>`.
pub fn make_subspace(vectors: &[CVec]) -> Result<Spanned> {
    let first = vectors.first().ok_or_else(|| Error::Input("empty vector list".into()))?;
    let n = first.len();
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    let m = crate::linalg::from_columns(vectors, n);
    if m.iter().all(|z| z.norm() <= crate::formcalc::ABS_FLOOR) {
        return Err(Error::Input("all vectors vanish".into()));
    }
    let subspace = RealSubspace::from_realified(&real_range(&realify(&m), RANK_TOL));
    let dropped = vectors.len() - subspace.real_dim();
    Ok(Spanned { subspace, dropped })
}

impl RealSubspace {
    /// Subspace spanned by the (not necessarily orthonormal) columns.
    pub fn span(columns: &CMat) -> Result<Self> {
        make_subspace(&crate::linalg::columns(columns)).map(|s| s.subspace)
    }

    /// `R^n ⊂ C^n`.
    pub fn real_coordinates(n: usize) -> Self {
        RealSubspace { basis: CMat::identity(n, n) }
    }

    pub(crate) fn from_realified(q: &RMat) -> Self {
        RealSubspace { basis: complexify(q) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn real_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Basis vectors as columns, orthonormal in `Re<·,·>`.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn realified(&self) -> RMat {
        realify(&self.basis)
    }

    /// Image under a real-linear map given as a complex linear matrix.
    pub fn map_linear(&self, l: &CMat) -> Result<Self> {
        RealSubspace::span(&(l * &self.basis))
    }

    /// Image under an antilinear map.
    pub fn map_antilinear(&self, a: &AntilinearOperator) -> Result<Self> {
        RealSubspace::span(&(&a.matrix * conj_mat(&self.basis)))
    }

    /// Largest distance from a unit vector of `other` to `self`, with the
    /// worst vector. Zero iff `other ⊆ self`.
    pub fn containment_residual(&self, other: &RealSubspace) -> (f64, CVec) {
        let q = self.realified();
        let k = other.realified();
        let m = q.nrows();
        if k.ncols() == 0 {
            return (0.0, CVec::zeros(m / 2));
        }
        let r = (RMat::identity(m, m) - &q * q.transpose()) * &k;
        let svd = SVD::new(r.clone(), false, true);
        let vt = svd.v_t.expect("right singular vectors requested");
        let (imax, smax) = svd.singular_values.argmax();
        let witness = &k * vt.row(imax).transpose();
        (smax, complexify(&RMat::from_column_slice(m, 1, witness.as_slice())).column(0).into_owned())
    }

    pub fn contains(&self, other: &RealSubspace, tol: f64) -> bool {
        self.containment_residual(other).0 <= tol
    }

    /// Orthogonal projection (in `Re<·,·>`) of a vector onto the subspace.
    pub fn project(&self, v: &CVec) -> CVec {
        let q = self.realified();
        let x = realify(&CMat::from_column_slice(v.len(), 1, v.as_slice()));
        let p = &q * (q.transpose() * x);
        complexify(&p).column(0).into_owned()
    }

    /// Distance `||v - P v|| / ||v||` from `v` to the subspace.
    pub fn localization_residual(&self, v: &CVec) -> f64 {
        let nv = v.norm();
        if nv == 0.0 {
            return 0.0;
        }
        (v - self.project(v)).norm() / nv
    }
}

/// Largest principal angle between two real subspaces; `π/2` when the real
/// dimensions differ.
pub fn subspace_distance(a: &RealSubspace, b: &RealSubspace) -> f64 {
    if a.ambient_dim() != b.ambient_dim() || a.real_dim() != b.real_dim() {
        return core::f64::consts::FRAC_PI_2;
    }
    let s = b.containment_residual(a).0.max(a.containment_residual(b).0);
    s.min(1.0).asin()
}

/// Standardness diagnostics for a real subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardnessReport {
    pub standard: bool,
    /// Smallest singular value of the realified `[B | iB]`.
    pub min_singular: f64,
    pub condition: f64,
}

/// `H + iH = C^n` and `H ∩ iH = {0}`, decided on `[B | iB]`.
pub fn is_standard(h: &RealSubspace) -> StandardnessReport {
    let n = h.ambient_dim();
    if h.real_dim() != n {
        return StandardnessReport { standard: false, min_singular: 0.0, condition: f64::INFINITY };
    }
    let s = crate::linalg::singular_values_real(&tomita_frame(h));
    let smin = s[s.len() - 1];
    StandardnessReport { standard: smin > EPS_STD, min_singular: smin, condition: s[0] / smin }
}

/// Realified `[B | iB]`.
fn tomita_frame(h: &RealSubspace) -> RMat {
    let n = h.ambient_dim();
    let b = h.basis();
    let ib = b.map(|z| z * I);
    let mut m = RMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (2 * n, n)).copy_from(&realify(b));
    m.view_mut((0, n), (2 * n, n)).copy_from(&realify(&ib));
    m
}

/// `H' = {ξ : Im<ξ, η> = 0 for all η ∈ H}`, the real orthogonal of `iH`.
pub fn symplectic_complement(h: &RealSubspace) -> RealSubspace {
    let ib = h.basis().map(|z| z * I);
    RealSubspace::from_realified(&real_complement(&realify(&ib)))
}

/// Antilinear map `ξ ↦ C conj(ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOperator {
    pub matrix: CMat,
}

impl AntilinearOperator {
    pub fn new(matrix: CMat) -> Self {
        AntilinearOperator { matrix }
    }

    /// Complex conjugation of coordinates.
    pub fn conjugation(n: usize) -> Self {
        AntilinearOperator { matrix: CMat::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        &self.matrix * crate::linalg::conj_vec(v)
    }

    /// The adjoint, defined by `<ξ, A* η> = <η, A ξ>`; its matrix is `Cᵀ`.
    pub fn adjoint(&self) -> Self {
        AntilinearOperator { matrix: self.matrix.transpose() }
    }

    /// `A ∘ B`, a linear map.
    pub fn compose(&self, other: &AntilinearOperator) -> CMat {
        &self.matrix * conj_mat(&other.matrix)
    }

    /// `A ∘ L` for linear `L`.
    pub fn after_linear(&self, l: &CMat) -> Self {
        AntilinearOperator { matrix: &self.matrix * conj_mat(l) }
    }

    /// `L ∘ A` for linear `L`.
    pub fn before_linear(&self, l: &CMat) -> Self {
        AntilinearOperator { matrix: l * &self.matrix }
    }

    /// Real `2n × 2n` matrix acting on realified vectors.
    pub fn realified(&self) -> RMat {
        let n = self.dim();
        let (p, q) = (self.matrix.map(|z| z.re), self.matrix.map(|z| z.im));
        let mut r = RMat::zeros(2 * n, 2 * n);
        r.view_mut((0, 0), (n, n)).copy_from(&p);
        r.view_mut((0, n), (n, n)).copy_from(&q);
        r.view_mut((n, 0), (n, n)).copy_from(&q);
        r.view_mut((n, n), (n, n)).copy_from(&(-p));
        r
    }

    /// Read off `C` from a real-linear map that anticommutes with the complex
    /// structure; the anticommuting part is extracted exactly.
    pub fn from_realified(r: &RMat) -> Self {
        let n = r.nrows() / 2;
        let p = (r.view((0, 0), (n, n)) - r.view((n, n), (n, n))).scale(0.5);
        let q = (r.view((0, n), (n, n)) + r.view((n, 0), (n, n))).scale(0.5);
        AntilinearOperator { matrix: CMat::from_fn(n, n, |i, j| c(p[(i, j)], q[(i, j)])) }
    }
}

/// Modular operator and conjugation of a standard subspace.
#[derive(Debug, Clone)]
pub struct ModularData {
    pub delta: HermitianOperator,
    pub j: AntilinearOperator,
}

/// Standard subspace with its Tomita involution and cached modular data.
#[derive(Debug, Clone)]
pub struct StandardSubspace {
    subspace: RealSubspace,
    s: AntilinearOperator,
    modular: ModularData,
    condition: f64,
}

/// Modular data of a standard subspace of `C^n`.
pub fn tomita(h: &RealSubspace) -> Result<ModularData> {
    StandardSubspace::new(h.clone()).map(|s| s.modular)
}

impl StandardSubspace {
    pub fn new(subspace: RealSubspace) -> Result<Self> {
        let report = is_standard(&subspace);
        if !report.standard {
            return Err(Error::Precondition(format!(
                "subspace is not standard (real dim {}, complex dim {}, min singular value {:e})",
                subspace.real_dim(),
                subspace.ambient_dim(),
                report.min_singular
            )));
        }
        if report.condition > MAX_CONDITION {
            return Err(Error::IllConditioned(report.condition));
        }
        let n = subspace.ambient_dim();
        let m = tomita_frame(&subspace);
        let mut sign = RMat::identity(2 * n, 2 * n);
        for k in n..2 * n {
            sign[(k, k)] = -1.0;
        }
        let minv = m.clone().try_inverse().ok_or(Error::IllConditioned(f64::INFINITY))?;
        let s = AntilinearOperator::from_realified(&(&m * sign * minv));
        let delta = HermitianOperator::from_hermitian_unchecked(crate::linalg::hermitian_part(&s.adjoint().compose(&s)));
        let dmin = delta.min_eigenvalue();
        if !(dmin > 0.0) {
            return Err(Error::numerical("modular operator is not positive definite", dmin));
        }
        // Polar factor from the SVD of the realified map; going through
        // Δ^{-1/2} would square the condition number.
        let svd = s.realified().svd(true, true);
        let (u, vt) = svd.u.zip(svd.v_t).ok_or_else(|| Error::numerical("SVD of S did not converge", f64::NAN))?;
        let j = AntilinearOperator::from_realified(&(u * vt));
        Ok(StandardSubspace { subspace, s, modular: ModularData { delta, j }, condition: report.condition })
    }

    /// Span of the columns, required to be standard.
    pub fn from_columns(columns: &CMat) -> Result<Self> {
        StandardSubspace::new(RealSubspace::span(columns)?)
    }

    pub fn subspace(&self) -> &RealSubspace {
        &self.subspace
    }

    pub fn dim(&self) -> usize {
        self.subspace.ambient_dim()
    }

    pub fn tomita_s(&self) -> &AntilinearOperator {
        &self.s
    }

    pub fn modular(&self) -> &ModularData {
        &self.modular
    }

    pub fn delta(&self) -> &HermitianOperator {
        &self.modular.delta
    }

    pub fn j(&self) -> &AntilinearOperator {
        &self.modular.j
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// `Δ^z` for complex `z`.
    pub fn delta_pow(&self, z: C64) -> CMat {
        self.modular.delta.eigh().map(|l| (z * l.ln()).exp())
    }

    /// Unitary `Δ^{is}`.
    pub fn delta_it(&self, s: f64) -> CMat {
        self.delta_pow(c(0.0, s))
    }

    pub fn log_delta(&self) -> CMat {
        self.modular.delta.apply_fn(|l| l.ln())
    }

    /// `H'` with its own modular data.
    pub fn complement(&self) -> Result<StandardSubspace> {
        StandardSubspace::new(symplectic_complement(&self.subspace))
    }

    /// Residuals of the Tomita identities.
    pub fn residuals(&self) -> Result<TomitaResiduals> {
        let n = self.dim();
        let id = CMat::identity(n, n);
        let delta = self.modular.delta.matrix();
        let dnorm = self.modular.delta.norm();
        // S is an involution, so Δ^{-1} = S S*; inverting the spectrum of Δ
        // would lose a factor cond(Δ) in accuracy.
        let dinv = self.s.compose(&self.s.adjoint());
        let dinv_norm = op_norm(&dinv);
        let j = &self.modular.j;
        let s = &self.s;
        let snorm = op_norm(&s.matrix);
        let polar = j.after_linear(&self.modular.delta.apply_fn(f64::sqrt));
        let jdj = j.after_linear(delta).compose(j);
        let comp = self.complement()?;
        let jh = self.subspace.map_antilinear(j)?;
        let invariance = [-1.0, -0.3, 0.3, 1.0]
            .iter()
            .map(|&t| self.subspace.map_linear(&self.delta_it(t)).map(|h| subspace_distance(&h, &self.subspace)))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(TomitaResiduals {
            polar: op_norm(&(&s.matrix - &polar.matrix)) / snorm,
            s_squared: op_norm(&(s.compose(s) - &id)) / (snorm * snorm),
            j_squared: op_norm(&(j.compose(j) - &id)),
            j_delta_j: op_norm(&(jdj - &dinv)) / dinv_norm.max(dnorm),
            complement_s: op_norm(&(&comp.s.matrix - &s.adjoint().matrix)) / snorm,
            j_duality: subspace_distance(&jh, comp.subspace()),
            double_complement: subspace_distance(&symplectic_complement(comp.subspace()), &self.subspace),
            modular_invariance: invariance,
        })
    }
}

/// Relative residuals of the Tomita identities for one standard subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomitaResiduals {
    /// `||S - J Δ^{1/2}|| / ||S||`.
    pub polar: f64,
    /// `||S² - 1|| / ||S||²`.
    pub s_squared: f64,
    /// `||J² - 1||`.
    pub j_squared: f64,
    /// `||J Δ J - Δ^{-1}||`, relative to `max(||Δ||, ||Δ^{-1}||)`.
    pub j_delta_j: f64,
    /// `||S_{H'} - S*|| / ||S||`.
    pub complement_s: f64,
    /// Principal angle between `J H` and `H'`.
    pub j_duality: f64,
    /// Principal angle between `(H')'` and `H`.
    pub double_complement: f64,
    /// Largest principal angle between `Δ^{is} H` and `H`, `s ∈ {±0.3, ±1}`.
    pub modular_invariance: f64,
}

impl TomitaResiduals {
    pub fn max(&self) -> f64 {
        [
            self.polar,
            self.s_squared,
            self.j_squared,
            self.j_delta_j,
            self.complement_s,
            self.j_duality,
            self.double_complement,
            self.modular_invariance,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `(ξ, log Δ ξ) ≤ ||S ξ||² / e`.
pub fn entropy_density_bound(xi: &CVec, h: &StandardSubspace) -> Result<Inequality> {
    let lhs = quad_form_log(xi, h.delta())?
        .finite()
        .ok_or_else(|| Error::numerical("log Δ form is infinite", f64::INFINITY))?;
    let rhs = h.tomita_s().apply(xi).norm_squared() / core::f64::consts::E;
    Ok(Inequality::new(lhs, rhs))
}

/// Real subspace `K` that is standard in its complex span `F`, with modular
/// data computed inside `F` and extended by zero.
#[derive(Debug, Clone)]
pub struct SpanStandard {
    /// Orthonormal basis of `F` (columns).
    pub frame: CMat,
    /// `K` in the coordinates of `frame`.
    pub inner: StandardSubspace,
}

impl SpanStandard {
    pub fn new(k: &RealSubspace) -> Result<Self> {
        let frame = range_basis(k.basis(), RANK_TOL);
        let coords = frame.adjoint() * k.basis();
        let inner = StandardSubspace::new(RealSubspace::span(&coords)?)?;
        Ok(SpanStandard { frame, inner })
    }

    /// Complex dimension of the span.
    pub fn span_dim(&self) -> usize {
        self.frame.ncols()
    }

    /// `Δ_K^z F` as an operator on the ambient space.
    pub fn delta_pow_extended(&self, z: C64) -> CMat {
        &self.frame * self.inner.delta_pow(z) * self.frame.adjoint()
    }

    /// Compression `F* A F` of an ambient operator.
    pub fn compress(&self, a: &CMat) -> CMat {
        crate::linalg::compress(a, &self.frame)
    }
}

fn check_strip(z: C64) -> Result<()> {
    if !(z.im <= 1e-14 && z.im >= -0.5 - 1e-14) || !z.re.is_finite() {
        return Err(Error::Domain(format!("z = {z} outside the strip -1/2 ≤ Im z ≤ 0")));
    }
    Ok(())
}

fn require_nested(h: &RealSubspace, k: &RealSubspace) -> Result<()> {
    let (res, witness) = h.containment_residual(k);
    if res > TOL_CONTAIN {
        return Err(Error::Precondition(format!(
            "K is not contained in H (residual {res:e}, vector {:?})",
            witness.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()
        )));
    }
    Ok(())
}

/// `T_{H,K}(z) = Δ_H^{iz} Δ_K^{-iz} F` for `K ⊆ H` and `-1/2 ≤ Im z ≤ 0`.
pub fn contraction_family(h: &StandardSubspace, k: &RealSubspace, z: C64) -> Result<CMat> {
    check_strip(z)?;
    require_nested(h.subspace(), k)?;
    let ks = SpanStandard::new(k)?;
    Ok(h.delta_pow(I * z) * ks.delta_pow_extended(-I * z))
}

/// Residual of `T_{K',H'}(z) = T_{H,K}(-z̄)*` for two standard subspaces of
/// the full space. Both sides are built from their own Tomita data, so the
/// identity exercises `Δ_{H'} = Δ_H^{-1}`; no nesting is required.
pub fn tc_adjoint_residual(h: &StandardSubspace, k: &StandardSubspace, z: C64) -> Result<f64> {
    let (hc, kc) = (h.complement()?, k.complement()?);
    let lhs = kc.delta_pow(I * z) * hc.delta_pow(-I * z);
    let zb = -z.conj();
    let rhs = (h.delta_pow(I * zb) * k.delta_pow(-I * zb)).adjoint();
    Ok(op_norm(&(&lhs - &rhs)) / op_norm(&rhs).max(1.0))
}

/// Margins of the inclusion inequalities for `K ⊆ H`, compressed to the span
/// `F` of `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionReport {
    /// `(α, min eig(Δ_K^α - F* Δ_H^α F))`.
    pub power_margins: Vec<(f64, f64)>,
    /// `min eig(log Δ_K - F* log Δ_H F)`, i.e. `-log Δ_K ≤ -log Δ_H`.
    pub log_margin: f64,
}

impl InclusionReport {
    pub fn worst(&self) -> f64 {
        self.power_margins.iter().map(|p| p.1).fold(self.log_margin, f64::min)
    }
}

/// `Δ_H^α ≤ Δ_K^α` and `-log Δ_K ≤ -log Δ_H` on the span of `K`.
pub fn inclusion_inequalities(h: &StandardSubspace, k: &RealSubspace, alpha_grid: &[f64]) -> Result<InclusionReport> {
    require_nested(h.subspace(), k)?;
    let ks = SpanStandard::new(k)?;
    let mut power_margins = Vec::with_capacity(alpha_grid.len());
    for &a in alpha_grid {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::Domain(format!("α = {a} outside [0, 1]")));
        }
        let dh = ks.compress(&h.delta_pow(cr(a)));
        let dk = ks.inner.delta_pow(cr(a));
        let scale = op_norm(&dk).max(1.0);
        power_margins.push((a, crate::linalg::min_eig(&(dk - dh)) / scale));
    }
    let lh = ks.compress(&h.log_delta());
    let lk = ks.inner.log_delta();
    let log_margin = crate::linalg::min_eig(&(&lk - lh)) / op_norm(&lk).max(1.0);
    Ok(InclusionReport { power_margins, log_margin })
}

/// Sign of the one-parameter group in [`borchers_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `U(t) H ⊆ H` for `t ≥ 0`; dilated as `U(e^{-2πs} t)`.
    Positive,
    /// `U(t) H ⊆ H` for `t ≤ 0`; dilated as `U(e^{2πs} t)`.
    Negative,
}

/// Residuals of `Δ^{is} U(t) Δ^{-is} = U(e^{∓2πs} t)` with `U(t) = e^{itP}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BorchersReport {
    /// `(s, t, residual)`.
    pub samples: Vec<(f64, f64, f64)>,
}

impl BorchersReport {
    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.2).fold(0.0, f64::max)
    }
}

/// Diagnostic form of the commutation relations between modular flow and a
/// positive-energy group leaving `H` invariant on a half-line of `t`.
pub fn borchers_check(
    h: &StandardSubspace,
    generator: &HermitianOperator,
    direction: Direction,
    s_grid: &[f64],
    t_grid: &[f64],
) -> Result<BorchersReport> {
    if generator.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: generator.dim() });
    }
    if generator.min_eigenvalue() < -generator.eps_support() {
        return Err(Error::Input("generator is not positive".into()));
    }
    let sign = match direction {
        Direction::Positive => 1.0,
        Direction::Negative => -1.0,
    };
    let u = |t: f64| generator.eigh().map(|p| (I * (t * p)).exp());
    let ts: Vec<f64> = t_grid.iter().map(|t| sign * t.abs()).collect();
    for &t in &ts {
        let image = h.subspace().map_linear(&u(t))?;
        let (res, _) = h.subspace().containment_residual(&image);
        if res > 1e-8 {
            return Err(Error::Input(format!("U({t}) does not leave H invariant (residual {res:e})")));
        }
    }
    let mut samples = Vec::with_capacity(s_grid.len() * ts.len());
    for &s in s_grid {
        let d = h.delta_it(s);
        let dinv = h.delta_it(-s);
        for &t in &ts {
            let lhs = &d * u(t) * &dinv;
            let rhs = u((-sign * 2.0 * core::f64::consts::PI * s).exp() * t);
            samples.push((s, t, op_norm(&(lhs - rhs))));
        }
    }
    Ok(BorchersReport { samples })
}

/// Modular data of a real subspace described only through the complex Gram
/// matrix `G = g + iσ` of a real basis `f_1, ..., f_k`.
///
/// With `A = g^{-1/2} σ g^{-1/2}` and `iA = U diag(μ) U*`, `|μ| < 1` is
/// standardness in the span, and on `ξ = Σ c_j f_j`
///
/// `<ξ, Δ^β ξ> = Σ_m |b_m|² (1 + μ_m)^{1-β} (1 - μ_m)^β`, `b = U* g^{1/2} c`.
#[derive(Debug, Clone)]
pub struct GramStandard {
    /// `g^{1/2} U`.
    left: CMat,
    /// `g^{-1/2} U`.
    left_inv: CMat,
    mu: RVec,
}

/// Bound on `|μ|` beyond which the span is treated as not standard.
pub const MAX_MU: f64 = 1.0 - 1e-12;

impl GramStandard {
    pub fn new(gram: &CMat) -> Result<Self> {
        let k = gram.nrows();
        if gram.ncols() != k {
            return Err(Error::DimensionMismatch { expected: k, found: gram.ncols() });
        }
        let g = gram.map(|z| z.re);
        let sigma = gram.map(|z| z.im);
        let ge = EighReal::new(&g);
        let (gmin, gmax) = (ge.values[0], ge.values[k - 1]);
        if !(gmin > 1e-15 * gmax) {
            return Err(Error::IllConditioned(gmax / gmin.max(0.0)));
        }
        let ghalf = ge.map(f64::sqrt);
        let gmhalf = ge.map(|l| 1.0 / l.sqrt());
        let a = &gmhalf * sigma * &gmhalf;
        let ia = CMat::from_fn(k, k, |i, j| c(0.0, a[(i, j)]));
        let eig = Eigh::new(&ia);
        let mu = eig.values.clone();
        let worst = mu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if worst >= MAX_MU {
            return Err(Error::Precondition(format!("span is not standard (|μ| = {worst})")));
        }
        let u = eig.vectors;
        Ok(GramStandard { left: ghalf.map(cr) * &u, left_inv: gmhalf.map(cr) * &u, mu })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// Symplectic eigenvalues `μ ∈ (-1, 1)`, ascending.
    pub fn mu(&self) -> &RVec {
        &self.mu
    }

    /// Eigenvalues `(1 - μ)/(1 + μ)` of `Δ`, in the order of [`Self::mu`].
    pub fn delta_eigenvalues(&self) -> RVec {
        self.mu.map(|m| (1.0 - m) / (1.0 + m))
    }

    /// Matrix `M` with `<Σ c_j f_j, φ(Δ) Σ d_j f_j> = c* M d`, where `w(μ)`
    /// gives `(1 + μ) φ((1 - μ)/(1 + μ))`.
    pub fn form(&self, w: impl Fn(f64) -> f64) -> CMat {
        let mut scaled = self.left.clone();
        for (m, &mu) in self.mu.iter().enumerate() {
            let f = w(mu);
            for z in scaled.column_mut(m).iter_mut() {
                *z *= f;
            }
        }
        scaled * self.left.adjoint()
    }

    /// Form of `Δ^β`.
    pub fn form_pow(&self, beta: f64) -> CMat {
        self.form(|m| (1.0 + m).powf(1.0 - beta) * (1.0 - m).powf(beta))
    }

    /// Form of `log Δ`.
    pub fn form_log(&self) -> CMat {
        self.form(|m| (1.0 + m) * ((1.0 - m) / (1.0 + m)).ln())
    }

    /// Coefficients of `Δ^{is} ξ` given those of `ξ`.
    pub fn flow(&self, s: f64, coeffs: &CVec) -> CVec {
        let b = self.left.adjoint() * coeffs;
        let phased = CVec::from_fn(self.dim(), |m, _| {
            let l = ((1.0 - self.mu[m]) / (1.0 + self.mu[m])).ln();
            b[m] * (I * (s * l)).exp()
        });
        &self.left_inv * phased
    }

    /// Coefficients of the `m`-th normalised eigenvector of `Δ`.
    pub fn eigenvector(&self, m: usize) -> CVec {
        self.left_inv.column(m).scale(1.0 / (1.0 + self.mu[m]).sqrt())
    }

    /// Coefficients (columns) of the orthonormal eigenvectors whose
    /// eigenvalue satisfies the predicate.
    pub fn eigenvectors_where(&self, keep: impl Fn(f64) -> bool) -> CMat {
        let idx: Vec<usize> = (0..self.dim()).filter(|&m| keep((1.0 - self.mu[m]) / (1.0 + self.mu[m]))).collect();
        let mut out = CMat::zeros(self.dim(), idx.len());
        for (j, &m) in idx.iter().enumerate() {
            out.set_column(j, &self.eigenvector(m));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cvec;

    #[test]
    fn make_subspace_dependence() {
        let e1 = cvec(&[cr(1.0), cr(0.0)]);
        let e2 = cvec(&[cr(0.0), cr(1.0)]);
        let s = make_subspace(&[e1.clone(), e1.scale(2.0)]).unwrap();
        assert_eq!((s.subspace.real_dim(), s.dropped), (1, 1));
        let s = make_subspace(&[e1.clone(), e2.clone(), &e1 + &e2]).unwrap();
        assert_eq!(s.subspace.real_dim(), 2);
        let one = cvec(&[cr(1.0)]);
        let s = make_subspace(&[one.clone(), one.map(|z| z * I)]).unwrap();
        assert_eq!(s.subspace.real_dim(), 2);
        assert!(make_subspace(&[CVec::zeros(2)]).is_err());
        assert!(make_subspace(&[]).is_err());
    }

    #[test]
    fn standardness_examples() {
        assert!(is_standard(&RealSubspace::real_coordinates(3)).standard);
        let e1 = cvec(&[cr(1.0), cr(0.0)]);
        let h = make_subspace(&[e1.clone(), e1.map(|z| z * I)]).unwrap().subspace;
        assert!(!is_standard(&h).standard);
        assert!(matches!(StandardSubspace::new(h), Err(Error::Precondition(_))));
    }

    #[test]
    fn real_coordinates_are_self_dual() {
        let h = RealSubspace::real_coordinates(3);
        assert!(subspace_distance(&symplectic_complement(&h), &h) < 1e-12);
        let s = StandardSubspace::new(h).unwrap();
        assert!(op_norm(&(s.delta().matrix() - CMat::identity(3, 3))) < 1e-12);
        assert!(op_norm(&(&s.j().matrix - CMat::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn full_space_has_trivial_complement() {
        let b = CMat::from_fn(2, 4, |i, j| if j < 2 { cr((i == j) as u8 as f64) } else { c(0.0, (i + 2 == j) as u8 as f64) });
        let h = RealSubspace::span(&b).unwrap();
        assert_eq!(h.real_dim(), 4);
        assert_eq!(symplectic_complement(&h).real_dim(), 0);
    }

    #[test]
    fn rotated_line() {
        let th = 0.7f64;
        let h = RealSubspace::span(&CMat::from_element(1, 1, c(th.cos(), th.sin()))).unwrap();
        let s = StandardSubspace::new(h).unwrap();
        assert!((s.delta().matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        let want = c((2.0 * th).cos(), (2.0 * th).sin());
        assert!((s.j().matrix[(0, 0)] - want).norm() < 1e-12);
    }

    #[test]
    fn antilinear_adjoint_rule() {
        let a = AntilinearOperator::new(CMat::from_fn(2, 2, |i, j| c(i as f64 + 0.5, j as f64 - 0.3)));
        let x = cvec(&[c(0.2, 1.0), c(-0.4, 0.3)]);
        let y = cvec(&[c(1.1, -0.6), c(0.5, 0.9)]);
        let lhs = x.dotc(&a.adjoint().apply(&y));
        let rhs = y.dotc(&a.apply(&x));
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn strip_is_enforced() {
        let h = StandardSubspace::new(RealSubspace::real_coordinates(2)).unwrap();
        assert!(contraction_family(&h, h.subspace(), c(0.0, 0.1)).is_err());
        assert!(contraction_family(&h, h.subspace(), c(0.3, -0.25)).is_ok());
    }
}
