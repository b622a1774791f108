//! Verification of the energy/entropy inequalities on the chiral net.
//!
//! Every check is normalised so that margins are dimensionless: norm
//! inequalities are divided by `||ξ||`, the entropy/energy comparisons by
//! their right-hand side. All of them are judged against one measured
//! discretisation tolerance, `tol(N)`, twice the worst half-line residual
//! between the numerical modular flow and the exact dilations.

use super::kernel;
use super::model::{quad, LatticeChiralModel, NetRegion, NetSubspace};
use super::spline::SplineBasis;
use crate::linalg::{cr, min_eig, solve_hpd, Eigh, EighReal};
use crate::prelude::*;
use crate::report::Inequality;
use crate::sample;
use core::f64::consts::PI;
use rand::Rng;

/// Flow parameters at which the half-line residual is measured.
pub const RESIDUAL_S_GRID: [f64; 8] = [-0.5, -0.375, -0.25, -0.125, 0.125, 0.25, 0.375, 0.5];

/// `α` values of the `α → 0⁺` route to the logarithmic inequality.
pub const DP_ALPHA_ROUTE: [f64; 5] = [0.2, 0.1, 0.05, 0.02, 0.01];

/// Smooth test profile `exp(-(ln x)²/2)` on `(0, ∞)`.
fn probe(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-0.5 * x.ln().powi(2)).exp()
    }
}

/// Width, in e-folds, of the commutation probe.
pub const COMMUTATION_PROBE_WIDTH: f64 = 6.0;

/// `cos⁴` bump in `u = ln(x/x0)` supported on `0 < u < W`. It vanishes
/// below `x0`, so it is resolved both on `(0, ∞)` and on half-lines starting
/// further left, and it is smooth on the logarithmic scale of the knots.
fn log_bump(x: f64, x0: f64) -> f64 {
    if x <= x0 {
        return 0.0;
    }
    let u = (x / x0).ln() / COMMUTATION_PROBE_WIDTH;
    if u >= 1.0 {
        0.0
    } else {
        (PI * (u - 0.5)).cos().powi(4)
    }
}

fn left_of(sub: &NetSubspace) -> f64 {
    match sub.region() {
        NetRegion::HalfLineRight { a } | NetRegion::HalfLineLeft { a } => a,
        NetRegion::Interval { a, .. } => a,
    }
}

/// Probe vector of a right half-line subspace.
pub fn half_line_probe(sub: &NetSubspace) -> CVec {
    let a = left_of(sub);
    sub.sample(|x| probe(x - a))
}

/// Relative distance `||Δ^{is} ξ - D(e^{-2πs}) ξ|| / ||ξ||` between the
/// numerical modular flow of a right half-line `(a, ∞)` and the dilation
/// about `a` by `e^{-2πs}`.
pub fn dilation_residual(sub: &NetSubspace, s: f64, coeffs: &CVec) -> Result<f64> {
    let a = match sub.region() {
        NetRegion::HalfLineRight { a } => a,
        other => return Err(Error::Input(format!("dilation residual needs a right half-line, got {other}"))),
    };
    let flowed = sub.modular().flow(s, coeffs);
    let dilated = sub.basis().dilate_about(a, (-2.0 * PI * s).exp());
    let cross = kernel::gram(sub.basis(), &dilated, 0.0)?;
    let norm2 = sub.norm_sq(coeffs);
    let r2 = sub.norm_sq(&flowed) + norm2 - 2.0 * flowed.dotc(&(cross * coeffs)).re;
    Ok((r2.max(0.0) / norm2).sqrt())
}

/// Real-valued smooth random coefficient profile: a few low sine modes in
/// the spline index with decaying Gaussian amplitudes.
pub fn random_profile<R: Rng + ?Sized>(m: usize, complex: bool, rng: &mut R) -> CVec {
    const MODES: usize = 6;
    let amps: Vec<C64> = (1..=MODES)
        .map(|k| {
            let im = if complex { sample::normal(rng) } else { 0.0 };
            C64::new(sample::normal(rng), im) / k as f64
        })
        .collect();
    CVec::from_fn(m, |j, _| {
        let x = (j as f64 + 1.0) / (m as f64 + 1.0);
        amps.iter().enumerate().map(|(k, a)| a * (PI * (k as f64 + 1.0) * x).sin()).sum()
    })
}

/// Random unit vector of `H(B)_ℂ` (or of `H(B)` when `complex` is false).
pub fn random_unit_vector<R: Rng + ?Sized>(sub: &NetSubspace, complex: bool, rng: &mut R) -> CVec {
    let c = random_profile(sub.dim(), complex, rng);
    let n = sub.norm_sq(&c).sqrt();
    c / cr(n)
}

/// Smooth random function on an interval `(c - R, c + R)` sampled at the
/// Greville abscissae: `(1 - u²)² Σ_{k<5} a_k u^k`, `u = (x - c)/R`.
pub fn random_localized<R: Rng + ?Sized>(sub: &NetSubspace, complex: bool, rng: &mut R) -> Result<CVec> {
    let (a, b) = match sub.region() {
        NetRegion::Interval { a, b } => (a, b),
        other => return Err(Error::Input(format!("localized vectors need an interval, got {other}"))),
    };
    let (centre, r) = ((a + b) / 2.0, (b - a) / 2.0);
    let amps: Vec<C64> = (0..5)
        .map(|_| {
            let im = if complex { sample::normal(rng) } else { 0.0 };
            C64::new(sample::normal(rng), im)
        })
        .collect();
    let c = CVec::from_fn(sub.dim(), |j, _| {
        let u = (sub.basis().greville(j) - centre) / r;
        let envelope = (1.0 - u * u).max(0.0).powi(2);
        amps.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc * u + a) * envelope
    });
    let n = sub.norm_sq(&c).sqrt();
    Ok(c / cr(n))
}

/// `<ξ, A ξ>^{1/2}` normalised by `||ξ||`.
fn rel_norm(a: &CMat, g: &CMat, c: &CVec) -> f64 {
    (quad(a, c).max(0.0) / quad(g, c)).sqrt()
}

/// The discretised net at one grid size, calibrated by its half-line
/// residual.
#[derive(Debug, Clone)]
pub struct ChiralNet {
    model: LatticeChiralModel,
    right0: NetSubspace,
    residuals: Vec<(f64, f64)>,
    tol: f64,
}

impl ChiralNet {
    pub fn new(model: LatticeChiralModel) -> Result<Self> {
        let right0 = model.region_subspace(NetRegion::HalfLineRight { a: 0.0 })?;
        let xi = half_line_probe(&right0);
        let residuals = RESIDUAL_S_GRID
            .iter()
            .map(|&s| dilation_residual(&right0, s, &xi).map(|r| (s, r)))
            .collect::<Result<Vec<_>>>()?;
        let worst = residuals.iter().fold(0.0f64, |m, r| m.max(r.1));
        if !worst.is_finite() {
            return Err(Error::numerical("half-line residual is not finite", worst));
        }
        Ok(ChiralNet { model, right0, residuals, tol: 2.0 * worst })
    }

    /// Net with the default model of grid size `n`.
    pub fn with_size(n: usize) -> Result<Self> {
        ChiralNet::new(LatticeChiralModel::with_size(n)?)
    }

    pub fn model(&self) -> &LatticeChiralModel {
        &self.model
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    /// `tol(N)`: twice the worst half-line residual.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `(s, residual)` pairs behind [`Self::tol`].
    pub fn residuals(&self) -> &[(f64, f64)] {
        &self.residuals
    }

    /// Largest half-line residual.
    pub fn max_residual(&self) -> f64 {
        self.tol / 2.0
    }

    /// `H(a, ∞)`, obtained by translating `H(0, ∞)`.
    pub fn right_half_line(&self, a: f64) -> NetSubspace {
        self.right0.translated(a)
    }

    /// `H(-∞, a)`, the mirror image of `H(a, ∞)` about `a`.
    pub fn left_half_line(&self, a: f64) -> Result<NetSubspace> {
        NetSubspace::from_basis(NetRegion::HalfLineLeft { a }, self.right0.basis().mirror(0.0).translate(a))
    }

    /// Subspace of an arbitrary region, with the admissibility check.
    pub fn region(&self, region: NetRegion) -> Result<NetSubspace> {
        match region {
            NetRegion::HalfLineRight { a } => {
                self.model.region_subspace(region)?;
                Ok(self.right_half_line(a))
            }
            _ => self.model.region_subspace(region),
        }
    }

    /// `||Δ_{-a}^{is} Δ_0^{-is} ξ - U(a(e^{-2πs} - 1)) ξ|| / ||ξ||` for a
    /// smooth bump `ξ ∈ H(a, ∞) ⊂ H(0, ∞)`, both sides projected onto
    /// `H(-a, ∞)_ℂ`.
    pub fn commutation_residual(&self, a: f64, s: f64) -> Result<f64> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!("commutation needs a > 0, got {a}")));
        }
        let f0 = &self.right0;
        let fa = self.right_half_line(-a);
        let xi = f0.sample(|x| log_bump(x, a));
        let eta = f0.modular().flow(-s, &xi);
        let project = |other: &SplineBasis, coeffs: &CVec| -> Result<CVec> {
            let cross = kernel::gram(fa.basis(), other, 0.0)?;
            let rhs = CMat::from_column_slice(fa.dim(), 1, (cross * coeffs).as_slice());
            let sol = solve_hpd(fa.gram(), &rhs).ok_or(Error::IllConditioned(f64::INFINITY))?;
            Ok(sol.column(0).into_owned())
        };
        let lhs = fa.modular().flow(s, &project(f0.basis(), &eta)?);
        let t = a * ((-2.0 * PI * s).exp() - 1.0);
        let rhs = project(&f0.basis().translate(t), &xi)?;
        let diff = lhs - rhs;
        Ok((fa.norm_sq(&diff).max(0.0) / f0.norm_sq(&xi)).sqrt())
    }

    /// Borchers relation on `H(0, ∞)`: `Δ^{is} U(t) Δ^{-is} ξ` against
    /// `U(e^{-2πs} t) ξ` for `t ≥ 0`, relative to `||ξ||`.
    pub fn borchers_residual(&self, s: f64, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::Domain(format!("positive half-line translations need t ≥ 0, got {t}")));
        }
        let f0 = &self.right0;
        let xi = f0.sample(|x| log_bump(x, 1.0));
        let eta = f0.modular().flow(-s, &xi);
        let project = |other: &SplineBasis, coeffs: &CVec| -> Result<CVec> {
            let cross = kernel::gram(f0.basis(), other, 0.0)?;
            let rhs = CMat::from_column_slice(f0.dim(), 1, (cross * coeffs).as_slice());
            let sol = solve_hpd(f0.gram(), &rhs).ok_or(Error::IllConditioned(f64::INFINITY))?;
            Ok(sol.column(0).into_owned())
        };
        let lhs = f0.modular().flow(s, &project(&f0.basis().translate(t), &eta)?);
        let rhs = project(&f0.basis().translate((-2.0 * PI * s).exp() * t), &xi)?;
        Ok((f0.norm_sq(&(lhs - rhs)).max(0.0) / f0.norm_sq(&xi)).sqrt())
    }

    /// Precomputed data for the half-line inequalities at `(R, α)`.
    pub fn appendix_halfline(&self, r: f64, alpha: f64) -> Result<HalflineCheck> {
        check_alpha(alpha)?;
        check_width(r)?;
        let tau = r * (2.0 * PI * alpha).tan();
        let f0 = &self.right0;
        let fm = self.right_half_line(-r);
        let fl = NetSubspace::from_basis(NetRegion::HalfLineLeft { a: r }, fm.basis().mirror(0.0))?;
        let plus = f0.modular().eigenvectors_where(|l| l >= 1.0);
        let minus = f0.modular().eigenvectors_where(|l| l < 1.0);
        Ok(HalflineCheck {
            plus: plus.adjoint() * kernel::gram(f0.basis(), fm.basis(), tau)?,
            minus: minus.adjoint() * kernel::gram(f0.basis(), fl.basis(), tau)?,
            right_pow: fm.modular().form_pow(2.0 * alpha),
            left_pow: fl.modular().form_pow(2.0 * alpha),
            right_gram: fm.gram().clone(),
            left_gram: fl.gram().clone(),
            right: fm,
            left: fl,
        })
    }

    /// Precomputed data for the interval inequalities on `B` at `α`.
    pub fn interval(&self, region: NetRegion, alpha: f64) -> Result<IntervalCheck> {
        check_alpha(alpha)?;
        let r = region.width() / 2.0;
        if !r.is_finite() {
            return Err(Error::Input(format!("interval checks need a bounded region, got {region}")));
        }
        let sub = self.region(region)?;
        let tau = r * (2.0 * PI * alpha).tan();
        let damped = kernel::gram(sub.basis(), sub.basis(), 2.0 * tau)?;
        let pow = sub.modular().form_pow(2.0 * alpha);
        // min-eig of G^{-1/2} (Δ^{2α} - e^{-2τP}) G^{-1/2}.
        let ge = Eigh::new(sub.gram());
        let gmh = ge.map(|l| cr(1.0 / l.sqrt()));
        let operator_margin = min_eig(&(&gmh * (&pow - &damped) * &gmh));
        Ok(IntervalCheck { r, alpha, damped, pow, operator_margin, sub })
    }

    /// Precomputed data for the entropy/energy checks on `B`.
    pub fn bound(&self, region: NetRegion) -> Result<BoundCheck> {
        let r = region.width() / 2.0;
        if !r.is_finite() {
            return Err(Error::Input(format!("bound checks need a bounded region, got {region}")));
        }
        BoundCheck::new(r, self.region(region)?)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 0.25 {
        Ok(())
    } else {
        Err(Error::Domain(format!("α = {alpha} must lie in (0, 1/4)")))
    }
}

fn check_width(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("R = {r} must be positive")))
    }
}

/// Margins of the two half-line inequalities for one vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalflineMargins {
    /// `||E₊ e^{-τP} ξ|| ≤ ||Δ^α_{-R} ξ||`, `ξ ∈ H(-R, ∞)_ℂ`.
    pub plus: Inequality,
    /// `||E₋ e^{-τP} ξ'|| ≤ ||Δ'^α_R ξ'||`, `ξ' ∈ H(-∞, R)_ℂ`.
    pub minus: Inequality,
}

/// Half-line inequalities at fixed `(R, α)` with `τ = R tan 2πα`; `E₊`/`E₋`
/// are the spectral projections of `Δ_{(0,∞)}` for `[1, ∞)` and `[0, 1)`.
#[derive(Debug, Clone)]
pub struct HalflineCheck {
    plus: CMat,
    minus: CMat,
    right_pow: CMat,
    left_pow: CMat,
    right_gram: CMat,
    left_gram: CMat,
    right: NetSubspace,
    left: NetSubspace,
}

impl HalflineCheck {
    /// `H(-R, ∞)`.
    pub fn right(&self) -> &NetSubspace {
        &self.right
    }

    /// `H(-∞, R)`, the mirror image of `H(-R, ∞)`.
    pub fn left(&self) -> &NetSubspace {
        &self.left
    }

    /// Both margins for coefficients `c` on `H(-R, ∞)`; the left-hand
    /// inequality uses the mirrored vector (reversed coefficients on
    /// `H(-∞, R)`).
    pub fn margins(&self, c: &CVec) -> HalflineMargins {
        let mirrored = CVec::from_iterator(c.len(), c.iter().rev().copied());
        let side = |proj: &CMat, pow: &CMat, g: &CMat, v: &CVec| {
            let n = quad(g, v).sqrt();
            Inequality::new((proj * v).norm() / n, rel_norm(pow, g, v))
        };
        HalflineMargins {
            plus: side(&self.plus, &self.right_pow, &self.right_gram, c),
            minus: side(&self.minus, &self.left_pow, &self.left_gram, &mirrored),
        }
    }
}

/// Interval inequalities on `B` of width `2R` at fixed `α`, `τ = R tan 2πα`.
#[derive(Debug, Clone)]
pub struct IntervalCheck {
    r: f64,
    alpha: f64,
    damped: CMat,
    pow: CMat,
    operator_margin: f64,
    sub: NetSubspace,
}

impl IntervalCheck {
    pub fn subspace(&self) -> &NetSubspace {
        &self.sub
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `||e^{-τP} ξ|| ≤ ||Δ_B^α ξ||`, relative to `||ξ||`.
    pub fn norm_inequality(&self, c: &CVec) -> Inequality {
        let g = self.sub.gram();
        Inequality::new(rel_norm(&self.damped, g, c), rel_norm(&self.pow, g, c))
    }

    /// Regularised form of the entropy bound at this `α`:
    /// `(||ξ||² - <ξ, Δ^{2α} ξ>)/(2α) ≤ (||ξ||² - <ξ, e^{-2τP} ξ>)/(2α)`,
    /// both divided by `||ξ||²`. Tends to `-<log Δ_B> ≤ 2πR <P>` as `α → 0⁺`.
    pub fn alpha_bound(&self, c: &CVec) -> Inequality {
        let n2 = quad(self.sub.gram(), c);
        let two_alpha = 2.0 * self.alpha;
        Inequality::new(
            (1.0 - quad(&self.pow, c) / n2) / two_alpha,
            (1.0 - quad(&self.damped, c) / n2) / two_alpha,
        )
    }

    /// Smallest eigenvalue of `Δ_B^{2α} - e^{-2τP}` compressed to `H(B)_ℂ`
    /// and whitened by the Gram matrix; non-negative iff the operator
    /// inequality holds there.
    pub fn operator_margin(&self) -> f64 {
        self.operator_margin
    }
}

/// One point of the `α → 0⁺` route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRoutePoint {
    pub alpha: f64,
    /// `(||ξ||² - <ξ, Δ^{2α} ξ>)/(2α)`.
    pub lhs: f64,
    /// `(||ξ||² - <ξ, e^{-2R tan(2πα) P} ξ>)/(2α)`.
    pub rhs: f64,
    /// `R tan(2πα)/α`, decreasing to `2πR`.
    pub slope: f64,
}

/// Logarithmic inequality and its `α → 0⁺` derivation for one vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DpReport {
    /// `-<ξ, log Δ_B ξ> ≤ 2πR <ξ, P ξ>`, both divided by `||ξ||²`.
    pub inequality: Inequality,
    pub route: Vec<AlphaRoutePoint>,
    /// `R tan(2πα)/α` is strictly decreasing along the route and stays above
    /// `2πR`.
    pub slope_monotone: bool,
}

impl DpReport {
    /// `1 - lhs/rhs`.
    pub fn relative_margin(&self) -> f64 {
        1.0 - self.inequality.lhs / self.inequality.rhs
    }
}

/// Coherent-state reduction of the entropy bound for one real `h ∈ H(B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentReport {
    /// `S = -<h, log Δ_B h>`.
    pub entropy: f64,
    /// `E = <h, P h>`.
    pub energy: f64,
    /// `S / (2πR E)`.
    pub ratio: f64,
}

/// Result of the energy-infimum sweep. `e_min` is an upper estimate of the
/// infimum over representatives, not the infimum itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepReport {
    pub entropy: f64,
    pub energy: f64,
    pub e_min: f64,
    /// `2πR E_min - S`.
    pub margin: f64,
    /// `margin / (2πR E)`.
    pub relative_margin: f64,
    /// Number of perturbation directions actually used.
    pub perturbations: usize,
    pub upper_estimate: bool,
}

/// Entropy/energy checks on an interval `B` of width `2R`.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    r: f64,
    log: CMat,
    energy: CMat,
    /// `(α, e^{-2R tan(2πα) P}, Δ^{2α})` along [`DP_ALPHA_ROUTE`].
    route: Vec<(f64, CMat, CMat)>,
    sub: NetSubspace,
}

impl BoundCheck {
    /// Checks on an interval subspace built from any basis.
    pub fn from_subspace(sub: NetSubspace) -> Result<Self> {
        let r = sub.region().width() / 2.0;
        if !r.is_finite() {
            return Err(Error::Input(format!("bound checks need a bounded region, got {}", sub.region())));
        }
        BoundCheck::new(r, sub)
    }

    fn new(r: f64, sub: NetSubspace) -> Result<Self> {
        let route = DP_ALPHA_ROUTE
            .iter()
            .map(|&alpha| {
                let tau = r * (2.0 * PI * alpha).tan();
                let damped = kernel::gram(sub.basis(), sub.basis(), 2.0 * tau)?;
                Ok((alpha, damped, sub.modular().form_pow(2.0 * alpha)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundCheck { r, log: sub.modular().form_log(), energy: sub.energy(), route, sub })
    }

    pub fn subspace(&self) -> &NetSubspace {
        &self.sub
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `<ξ, P ξ>` form matrix.
    pub fn energy_form(&self) -> &CMat {
        &self.energy
    }

    /// `-<ξ, log Δ_B ξ>` form matrix.
    pub fn entropy_form(&self) -> CMat {
        -&self.log
    }

    /// `-<ξ, log Δ_B ξ> ≤ 2πR <ξ, P ξ>` plus the `α → 0⁺` route.
    pub fn dp_ineq(&self, c: &CVec) -> DpReport {
        let g = self.sub.gram();
        let n2 = quad(g, c);
        let lhs = -quad(&self.log, c) / n2;
        let rhs = 2.0 * PI * self.r * quad(&self.energy, c) / n2;
        let route: Vec<AlphaRoutePoint> = self
            .route
            .iter()
            .map(|(alpha, damped, pow)| AlphaRoutePoint {
                alpha: *alpha,
                lhs: (1.0 - quad(pow, c) / n2) / (2.0 * alpha),
                rhs: (1.0 - quad(damped, c) / n2) / (2.0 * alpha),
                slope: self.r * (2.0 * PI * alpha).tan() / alpha,
            })
            .collect();
        let floor = 2.0 * PI * self.r;
        let slope_monotone = route.windows(2).all(|w| w[1].slope < w[0].slope) && route.iter().all(|p| p.slope > floor);
        DpReport { inequality: Inequality::new(lhs, rhs), route, slope_monotone }
    }

    /// Entropy, energy and their ratio for real coefficients `h`.
    pub fn coherent(&self, h: &CVec) -> Result<CoherentReport> {
        let scale = h.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let leak = h.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        if !(leak <= 1e-8 * scale) {
            return Err(Error::Precondition(format!(
                "h is not in the real subspace H(B) (localization residual {:.3e})",
                leak / scale.max(f64::MIN_POSITIVE)
            )));
        }
        let entropy = -quad(&self.log, h);
        let energy = quad(&self.energy, h);
        Ok(CoherentReport { entropy, energy, ratio: entropy / (2.0 * PI * self.r * energy) })
    }

    /// Perturbation directions from the symplectic complement of `H(B)`:
    /// the two complementary half-lines and one projected
    /// boundary-straddling spline per endpoint.
    pub fn sweep_context(&self, net: &ChiralNet) -> Result<SweepContext> {
        let (a, b) = match self.sub.region() {
            NetRegion::Interval { a, b } => (a, b),
            other => return Err(Error::Input(format!("energy sweep needs an interval, got {other}"))),
        };
        let hb = self.sub.basis();
        let sides = [net.left_half_line(a)?, net.right_half_line(b)]
            .iter()
            .map(|side| (kernel::energy(hb, side.basis()), side.energy()))
            .collect();
        let mut straddling = Vec::new();
        for edge in [a, b] {
            if let Some(d) = self.straddling(edge)? {
                straddling.push(d);
            }
        }
        Ok(SweepContext { sides, straddling })
    }

    /// Lower the energy of `h` by adding real multiples of `k` random
    /// complement vectors (alternating sides) and, when `k > 0`, of the
    /// straddling directions. Each direction uses its best multiple.
    pub fn energy_sweep<R: Rng + ?Sized>(
        &self,
        ctx: &SweepContext,
        h: &CVec,
        k: usize,
        rng: &mut R,
    ) -> Result<SweepReport> {
        let randoms: Vec<CVec> = (0..k).map(|i| random_profile(ctx.sides[i % 2].1.nrows(), false, rng)).collect();
        self.sweep(ctx, h, &randoms, k > 0)
    }

    /// Sweep over the straddling directions alone.
    pub fn straddling_sweep(&self, ctx: &SweepContext, h: &CVec) -> Result<SweepReport> {
        self.sweep(ctx, h, &[], true)
    }

    /// `randoms[i]` lives on side `i % 2`.
    fn sweep(&self, ctx: &SweepContext, h: &CVec, randoms: &[CVec], straddle: bool) -> Result<SweepReport> {
        let base = self.coherent(h)?;
        let mut best = base.energy;
        let mut used = 0;
        let mut consider = |cross: f64, ek: f64| {
            if ek > 0.0 {
                best = best.min(base.energy - cross * cross / ek);
            }
        };
        for (i, kv) in randoms.iter().enumerate() {
            let (cross_e, self_e) = &ctx.sides[i % 2];
            consider(h.dotc(&(cross_e * kv)).re, quad(self_e, kv));
            used += 1;
        }
        if straddle {
            for (pk, ek) in &ctx.straddling {
                consider(h.dotc(pk).re, *ek);
                used += 1;
            }
        }
        let two_pi_r = 2.0 * PI * self.r;
        let margin = two_pi_r * best - base.entropy;
        Ok(SweepReport {
            entropy: base.entropy,
            energy: base.energy,
            e_min: best,
            margin,
            relative_margin: margin / (two_pi_r * base.energy),
            perturbations: used,
            upper_estimate: true,
        })
    }

    /// Spline straddling `edge`, combined with `H(B)` so that the result `k`
    /// is symplectically orthogonal to `H(B)`. Returns `P k` tested against
    /// the basis of `H(B)` and `<k, P k>`, or `None` when the construction
    /// degenerates.
    fn straddling(&self, edge: f64) -> Result<Option<(CVec, f64)>> {
        let hb = self.sub.basis();
        let w = self.r / 8.0;
        let s = SplineBasis::new((0..5).map(|i| edge + w * (i as f64 - 2.0)).collect())?;
        let m = hb.len();
        // Constraint Im<f_i, v_l> over v = (f_1, ..., f_m, s).
        let cross = kernel::gram(hb, &s, 0.0)?;
        let mut constraint = RMat::zeros(m, m + 1);
        for i in 0..m {
            for l in 0..m {
                constraint[(i, l)] = self.sub.gram()[(i, l)].im;
            }
            constraint[(i, m)] = cross[(i, 0)].im;
        }
        let normal = constraint.transpose() * &constraint;
        let e = EighReal::new(&normal);
        let w0 = e.vectors.column(0).into_owned();
        if w0[m].abs() < 0.1 || e.values[0] > 1e-16 * normal.norm() {
            return Ok(None);
        }
        let coeffs = CVec::from_fn(m, |j, _| cr(w0[j]));
        let ws = CVec::from_element(1, cr(w0[m]));
        let e_bs = kernel::energy(hb, &s);
        let e_ss = kernel::energy(&s, &s);
        let pk = &self.energy * &coeffs + &e_bs * &ws;
        let ek = quad(&self.energy, &coeffs) + 2.0 * coeffs.dotc(&(&e_bs * &ws)).re + quad(&e_ss, &ws);
        Ok(Some((pk, ek)))
    }
}

/// Precomputed perturbation directions for [`BoundCheck::energy_sweep`].
#[derive(Debug, Clone)]
pub struct SweepContext {
    /// `(<f_i, P g_j>, <g_i, P g_j>)` for the left and right complements.
    sides: Vec<(CMat, CMat)>,
    /// `(<f_i, P k>, <k, P k>)` per straddling direction.
    straddling: Vec<(CVec, f64)>,
}

impl SweepContext {
    /// Number of usable straddling directions.
    pub fn straddling_directions(&self) -> usize {
        self.straddling.len()
    }
}
