//! Momentum-space model of the chiral one-particle space and the regions of
//! the net.
//!
//! The one-particle space is `L²(R₊, p dp)`; a real test function `f` maps
//! to `f̂(p) = ∫ f(x) e^{ipx} dx` restricted to `p > 0`, translations act as
//! multiplication by `e^{ipx}` and `P` is multiplication by `p`.
//!
//! [`LatticeChiralModel`] holds a log-uniform momentum grid (on which
//! dilations are index shifts) and a uniform position grid used to embed
//! sampled functions. Region subspaces themselves are spanned by cubic
//! B-splines whose Gram matrices are computed exactly in position space (see
//! [`super::kernel`]); the momentum grid serves as an independent
//! representation and as the admissibility yardstick.

use super::kernel;
use super::spline::SplineBasis;
use crate::linalg::{c, cr, EighReal};
use crate::prelude::*;
use crate::stdsubspace::{GramStandard, StandardSubspace};
use core::fmt;
use serde::{Deserialize, Serialize};

/// Minimum number of position-grid points a region must contain.
pub const MIN_REGION_POINTS: usize = 8;

/// Grading parameter of the half-line knot vectors (in units of `ln x`).
pub const HALF_LINE_GRADING: f64 = 9.0;

/// Grading parameter of the interval knot vectors.
pub const INTERVAL_GRADING: f64 = 9.0;

/// Discretised chiral one-particle space.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeChiralModel {
    n: usize,
    p_grid: Vec<f64>,
    weights: Vec<f64>,
    log_step: f64,
    positions: Vec<f64>,
    spacing: f64,
}

/// Build the model with `n` log-uniform momenta in `[p_min, p_max]` and `m`
/// positions of spacing `a`, centred on the origin.
pub fn build_model(n: usize, p_min: f64, p_max: f64, m: usize, a: f64) -> Result<LatticeChiralModel> {
    if n < 8 || m < 8 {
        return Err(Error::Config(format!("need N ≥ 8 and M ≥ 8 (got N = {n}, M = {m})")));
    }
    if !(p_min > 0.0 && p_max > p_min && p_max.is_finite()) {
        return Err(Error::Config(format!("momentum range [{p_min}, {p_max}] must satisfy 0 < p_min < p_max")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Config(format!("position spacing {a} must be positive")));
    }
    let log_step = (p_max / p_min).ln() / (n as f64 - 1.0);
    let p_grid: Vec<f64> = (0..n).map(|k| p_min * (k as f64 * log_step).exp()).collect();
    // Weights for p dp in the variable u = ln p: dp p = p² du.
    let weights = p_grid.iter().map(|p| log_step * p * p).collect();
    let positions = (0..m).map(|k| (k as f64 - (m as f64 - 1.0) / 2.0) * a).collect();
    Ok(LatticeChiralModel { n, p_grid, weights, log_step, positions, spacing: a })
}

impl LatticeChiralModel {
    /// Default model for grid size `n`: momenta in `[1e-3, 1e3]` and `n`
    /// positions of spacing `8/n`, covering `[-4, 4]`.
    pub fn with_size(n: usize) -> Result<Self> {
        build_model(n, 1e-3, 1e3, n, 8.0 / n as f64)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p_grid(&self) -> &[f64] {
        &self.p_grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Number of splines per region basis.
    pub fn splines_per_region(&self) -> usize {
        (self.n / 4).max(2)
    }

    /// Momentum amplitudes of a real function sampled on the position grid
    /// (Riemann sum of `∫ f(x) e^{ipx} dx`).
    pub fn embed(&self, samples: &[f64]) -> Result<CVec> {
        if samples.len() != self.positions.len() {
            return Err(Error::DimensionMismatch { expected: self.positions.len(), found: samples.len() });
        }
        Ok(CVec::from_fn(self.n, |k, _| {
            let p = self.p_grid[k];
            self.positions.iter().zip(samples).map(|(&x, &f)| c(0.0, p * x).exp() * (f * self.spacing)).sum()
        }))
    }

    /// Exact momentum amplitudes of the splines of `basis`, one column per
    /// spline.
    pub fn embed_basis(&self, basis: &SplineBasis) -> CMat {
        basis.fourier_matrix(&self.p_grid).transpose()
    }

    /// `Σ_k w_k conj(u_k) v_k`.
    pub fn inner(&self, u: &CVec, v: &CVec) -> C64 {
        u.iter().zip(v.iter()).zip(&self.weights).map(|((a, b), w)| a.conj() * b * *w).sum()
    }

    /// Gram matrix of amplitude columns in the weighted inner product.
    pub fn gram(&self, amplitudes: &CMat) -> CMat {
        let w = CVec::from_iterator(self.n, self.weights.iter().map(|&w| cr(w)));
        let weighted = CMat::from_fn(self.n, amplitudes.ncols(), |k, j| amplitudes[(k, j)] * w[k]);
        amplitudes.adjoint() * weighted
    }

    /// Diagonal of `U(x) = e^{ixP}`.
    pub fn translation(&self, x: f64) -> CVec {
        CVec::from_fn(self.n, |k, _| c(0.0, self.p_grid[k] * x).exp())
    }

    /// `U(x) u`.
    pub fn translate(&self, u: &CVec, x: f64) -> CVec {
        u.component_mul(&self.translation(x))
    }

    /// `P u`.
    pub fn momentum(&self, u: &CVec) -> CVec {
        CVec::from_fn(self.n, |k, _| u[k] * self.p_grid[k])
    }

    /// Dilation `f(x) ↦ f(x/λ)` with `λ = e^{k h}` (`h` the log step),
    /// acting as `u(p) ↦ λ u(λ p)`; the grid is treated cyclically, which
    /// makes the map exactly unitary.
    pub fn dilate(&self, u: &CVec, k: isize) -> CVec {
        let n = self.n as isize;
        CVec::from_fn(self.n, |j, _| {
            let src = (j as isize + k).rem_euclid(n) as usize;
            u[src] * (self.p_grid[src] / self.p_grid[j])
        })
    }

    /// Logarithmic step `h` of the momentum grid.
    pub fn log_step(&self) -> f64 {
        self.log_step
    }

    /// Number of position-grid points strictly inside the region.
    pub fn points_in(&self, region: &NetRegion) -> usize {
        self.positions.iter().filter(|&&x| region.contains_point(x)).count()
    }

    /// Real subspace of the region, see [`NetSubspace`].
    pub fn region_subspace(&self, region: NetRegion) -> Result<NetSubspace> {
        NetSubspace::new(self, region)
    }
}

/// Region of the light ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NetRegion {
    /// `(a, ∞)`.
    HalfLineRight { a: f64 },
    /// `(-∞, a)`.
    HalfLineLeft { a: f64 },
    /// `(a, b)`.
    Interval { a: f64, b: f64 },
}

impl NetRegion {
    /// `(-R, R)`.
    pub fn centred(r: f64) -> Self {
        NetRegion::Interval { a: -r, b: r }
    }

    /// Width `2R` of an interval; infinite for half-lines.
    pub fn width(&self) -> f64 {
        match *self {
            NetRegion::Interval { a, b } => b - a,
            _ => f64::INFINITY,
        }
    }

    pub fn contains_point(&self, x: f64) -> bool {
        match *self {
            NetRegion::HalfLineRight { a } => x > a,
            NetRegion::HalfLineLeft { a } => x < a,
            NetRegion::Interval { a, b } => x > a && x < b,
        }
    }

    /// Region containment `self ⊆ other`.
    pub fn is_inside(&self, other: &NetRegion) -> bool {
        use NetRegion::*;
        match (*self, *other) {
            (HalfLineRight { a }, HalfLineRight { a: b }) => a >= b,
            (HalfLineLeft { a }, HalfLineLeft { a: b }) => a <= b,
            (Interval { a, .. }, HalfLineRight { a: c }) => a >= c,
            (Interval { b, .. }, HalfLineLeft { a: c }) => b <= c,
            (Interval { a, b }, Interval { a: c, b: d }) => a >= c && b <= d,
            _ => false,
        }
    }

    /// Region shifted by `x`.
    pub fn translate(&self, x: f64) -> Self {
        match *self {
            NetRegion::HalfLineRight { a } => NetRegion::HalfLineRight { a: a + x },
            NetRegion::HalfLineLeft { a } => NetRegion::HalfLineLeft { a: a + x },
            NetRegion::Interval { a, b } => NetRegion::Interval { a: a + x, b: b + x },
        }
    }

    /// Spline basis with `m` functions supported in the region.
    pub fn basis(&self, m: usize) -> Result<SplineBasis> {
        match *self {
            NetRegion::HalfLineRight { a } => SplineBasis::half_line_right(a, m, HALF_LINE_GRADING, 1.0),
            NetRegion::HalfLineLeft { a } => SplineBasis::half_line_left(a, m, HALF_LINE_GRADING, 1.0),
            NetRegion::Interval { a, b } => SplineBasis::interval(a, b, m, INTERVAL_GRADING),
        }
    }
}

impl fmt::Display for NetRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetRegion::HalfLineRight { a } => write!(f, "({a}, ∞)"),
            NetRegion::HalfLineLeft { a } => write!(f, "(-∞, {a})"),
            NetRegion::Interval { a, b } => write!(f, "({a}, {b})"),
        }
    }
}

/// Real subspace `H(region)`: the real span of the region's spline basis,
/// together with its Gram matrix and modular data.
#[derive(Debug, Clone)]
pub struct NetSubspace {
    region: NetRegion,
    basis: SplineBasis,
    gram: CMat,
    modular: GramStandard,
}

impl NetSubspace {
    pub fn new(model: &LatticeChiralModel, region: NetRegion) -> Result<Self> {
        let points = model.points_in(&region);
        if points < MIN_REGION_POINTS {
            return Err(Error::Config(format!(
                "grid too coarse for region {region}: {points} position points inside, need {MIN_REGION_POINTS}"
            )));
        }
        let basis = region.basis(model.splines_per_region())?;
        Self::from_basis(region, basis)
    }

    /// Subspace spanned by an explicit basis attributed to `region`.
    pub fn from_basis(region: NetRegion, basis: SplineBasis) -> Result<Self> {
        let gram = kernel::gram(&basis, &basis, 0.0)?;
        let modular = GramStandard::new(&gram)
            .map_err(|e| Error::Config(format!("region {region} too small for a standard subspace: {e}")))?;
        Ok(NetSubspace { region, basis, gram, modular })
    }

    /// `U(x) H`: the same Gram matrix and modular data on shifted knots.
    pub fn translated(&self, x: f64) -> Self {
        NetSubspace {
            region: self.region.translate(x),
            basis: self.basis.translate(x),
            gram: self.gram.clone(),
            modular: self.modular.clone(),
        }
    }

    pub fn region(&self) -> NetRegion {
        self.region
    }

    pub fn basis(&self) -> &SplineBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `G_jk = <f_j, f_k>`.
    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn modular(&self) -> &GramStandard {
        &self.modular
    }

    /// `<f_j, e^{-τP} g_k>` against another subspace.
    pub fn damped_gram(&self, other: &NetSubspace, tau: f64) -> Result<CMat> {
        kernel::gram(&self.basis, &other.basis, tau)
    }

    /// `<f_j, P f_k>`.
    pub fn energy(&self) -> CMat {
        kernel::energy(&self.basis, &self.basis)
    }

    /// `||Σ c_j f_j||²`.
    pub fn norm_sq(&self, coeffs: &CVec) -> f64 {
        quad(&self.gram, coeffs)
    }

    /// Coefficients sampling `f` at the Greville abscissae.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> CVec {
        CVec::from_fn(self.dim(), |j, _| cr(f(self.basis.greville(j))))
    }

    /// Same subspace as a standard subspace of `C^k` (its complex span), via
    /// the columns of `G^{1/2}`, which have Gram matrix `G`.
    pub fn to_standard(&self) -> Result<StandardSubspace> {
        let e = crate::linalg::Eigh::new(&self.gram);
        let half = e.map(|l| cr(l.max(0.0).sqrt()));
        StandardSubspace::from_columns(&half)
    }

    /// Largest `|Im <ξ, η>|` over unit `ξ ∈ H(self)`, `η ∈ H(other)`: zero iff
    /// `H(self) ⊆ H(other)′`.
    pub fn symplectic_overlap(&self, other: &NetSubspace) -> Result<f64> {
        let cross = kernel::gram(&self.basis, &other.basis, 0.0)?;
        let sigma = cross.map(|z| z.im);
        let ga = EighReal::new(&self.gram.map(|z| z.re)).map(|l| 1.0 / l.sqrt());
        let gb = EighReal::new(&other.gram.map(|z| z.re)).map(|l| 1.0 / l.sqrt());
        Ok(crate::linalg::op_norm_real(&(ga * sigma * gb)))
    }

    /// Relative distance of the real vector `Σ c_j f_j` from `H(other)`.
    pub fn containment_residual(&self, coeffs: &RVec, other: &NetSubspace) -> Result<f64> {
        let cross = kernel::gram(&other.basis, &self.basis, 0.0)?.map(|z| z.re);
        let g_other = other.gram.map(|z| z.re);
        let rhs = &cross * coeffs;
        let x = g_other
            .clone()
            .cholesky()
            .ok_or(Error::IllConditioned(f64::INFINITY))?
            .solve(&rhs);
        let own = coeffs.dot(&(self.gram.map(|z| z.re) * coeffs));
        let captured = x.dot(&rhs);
        Ok(((own - captured).max(0.0) / own).sqrt())
    }
}

/// `c* A c` (real part).
pub(crate) fn quad(a: &CMat, c: &CVec) -> f64 {
    c.dotc(&(a * c)).re
}
