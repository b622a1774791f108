use bekenstein_core::chiral::spline::{self, SplineBasis};
use bekenstein_core::chiral::verify::{dilation_residual, half_line_probe, random_localized, random_unit_vector, BoundCheck};
use bekenstein_core::chiral::{build_model, kernel, ChiralNet, LatticeChiralModel, NetRegion, NetSubspace};
use bekenstein_core::linalg::{c, cr, op_norm};
use bekenstein_core::quad::integrate;
use bekenstein_core::{CMat, CVec, Error, RVec, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::OnceLock;

const SIZES: [usize; 4] = [64, 128, 256, 512];

/// Nets are expensive to calibrate; share one per grid size.
fn net(n: usize) -> &'static ChiralNet {
    static NETS: [OnceLock<ChiralNet>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let k = SIZES.iter().position(|&s| s == n).expect("unsupported grid size");
    NETS[k].get_or_init(|| ChiralNet::with_size(n).unwrap())
}

/// `∫₀^∞ conj(f̂) ĝ e^{-τp} p^power dp` by adaptive quadrature in `ln p`.
fn momentum_oracle(f: &[f64], g: &[f64], tau: f64, power: i32) -> C64 {
    let integrand = |u: f64, re: bool| {
        let p = u.exp();
        let z = spline::fourier(f, p).conj() * spline::fourier(g, p) * ((-tau * p).exp() * p.powi(power + 1));
        if re {
            z.re
        } else {
            z.im
        }
    };
    let part = |re: bool| integrate(|u| integrand(u, re), -30.0, 16.0, 1e-12, 1e-10, 20000).unwrap().value;
    c(part(true), part(false))
}

fn rel_err(a: &CMat, b: &CMat) -> f64 {
    op_norm(&(a - b)) / op_norm(b)
}

fn real_part(v: &CVec) -> Vec<f64> {
    v.iter().map(|z| z.re).collect()
}

#[test]
fn build_model_examples() {
    let model = build_model(64, 1e-2, 1e2, 64, 0.125).unwrap();
    let p = model.p_grid();
    assert!((p[0] - 1e-2).abs() < 1e-15 && (p[63] - 1e2).abs() < 1e-10);
    assert!(p.windows(2).all(|w| w[1] > w[0]) && p[0] > 0.0);
    assert!(model.weights().iter().all(|&w| w > 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let u = bekenstein_core::sample::gaussian_vector(64, &mut rng);
    // P is diagonal with spectrum p_grid.
    let pu = model.momentum(&u);
    for k in 0..64 {
        assert_eq!(pu[k], u[k] * p[k]);
    }
    for &x in &[0.3, -2.0, 17.5] {
        let back = model.translate(&model.translate(&u, x), -x);
        assert!((back - &u).norm() <= 1e-12 * u.norm());
        let v = model.translate(&u, x);
        assert!((model.inner(&v, &v).re - model.inner(&u, &u).re).abs() <= 1e-12 * model.inner(&u, &u).re);
    }
}

#[test]
fn build_model_rejects_bad_grids() {
    assert!(matches!(build_model(4, 1e-2, 1e2, 64, 0.1), Err(Error::Config(_))));
    assert!(matches!(build_model(64, 1e-2, 1e2, 4, 0.1), Err(Error::Config(_))));
    assert!(matches!(build_model(64, 1.0, 1.0, 64, 0.1), Err(Error::Config(_))));
    assert!(matches!(build_model(64, 0.0, 1.0, 64, 0.1), Err(Error::Config(_))));
    let model = LatticeChiralModel::with_size(64).unwrap();
    let err = model.region_subspace(NetRegion::centred(0.2)).unwrap_err();
    assert!(matches!(err, Error::Config(_)), "{err}");
}

#[test]
fn gaussian_embed_matches_transform() {
    let model = build_model(64, 1e-2, 1e2, 64, 0.125).unwrap();
    let sigma = 0.5;
    let samples: Vec<f64> = model.positions().iter().map(|x| (-x * x / (2.0 * sigma * sigma)).exp()).collect();
    let u = model.embed(&samples).unwrap();
    let peak = (2.0 * PI).sqrt() * sigma;
    for (k, &p) in model.p_grid().iter().enumerate() {
        // Beyond p ≈ 20 the position grid aliases; the comparison stops there.
        if p > 20.0 {
            break;
        }
        let exact = peak * (-sigma * sigma * p * p / 2.0).exp();
        assert!((u[k] - cr(exact)).norm() <= 1e-12 * peak, "p = {p}");
    }
}

#[test]
fn dilation_is_exactly_unitary() {
    let model = LatticeChiralModel::with_size(64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let u = bekenstein_core::sample::gaussian_vector(64, &mut rng);
    let v = bekenstein_core::sample::gaussian_vector(64, &mut rng);
    for k in [-5isize, 1, 17, 64] {
        let (du, dv) = (model.dilate(&u, k), model.dilate(&v, k));
        assert!((model.inner(&du, &dv) - model.inner(&u, &v)).norm() <= 1e-12 * model.inner(&u, &u).re);
    }
}

#[test]
fn gram_and_energy_match_momentum_oracle() {
    let interval = SplineBasis::interval(-1.0, 1.0, 6, 4.0).unwrap();
    let half = SplineBasis::half_line_right(0.5, 5, 3.0, 1.0).unwrap();
    for (a, b) in [(&interval, &interval), (&interval, &half), (&half, &half)] {
        for &tau in &[0.0, 0.3] {
            let g = kernel::gram(a, b, tau).unwrap();
            let oracle = CMat::from_fn(a.len(), b.len(), |i, j| momentum_oracle(a.spline(i), b.spline(j), tau, 1));
            assert!(rel_err(&g, &oracle) < 1e-9, "τ = {tau}: {}", rel_err(&g, &oracle));
        }
        let e = kernel::energy(a, b);
        let oracle = CMat::from_fn(a.len(), b.len(), |i, j| momentum_oracle(a.spline(i), b.spline(j), 0.0, 2));
        assert!(rel_err(&e, &oracle) < 1e-8, "energy: {}", rel_err(&e, &oracle));
    }
}

#[test]
fn half_line_residual_refines() {
    let tols: Vec<f64> = SIZES.iter().map(|&n| net(n).tol()).collect();
    assert!(tols.windows(2).all(|w| w[1] < w[0]), "{tols:?}");
    let xs: Vec<f64> = SIZES.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = tols.iter().map(|t| t.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 4.0, ys.iter().sum::<f64>() / 4.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!(slope < -0.5, "slope {slope}");
}

#[test]
fn half_line_flow_is_dilation_on_wide_s_range() {
    // Constant in residual ≤ C/N for |s| ≤ 1 at N = 256.
    const C: f64 = 64.0;
    let s_grid = [-1.0, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75, 1.0];
    let residual = |n: usize, s: f64| {
        let f0 = net(n).right_half_line(0.0);
        dilation_residual(&f0, s, &half_line_probe(&f0)).unwrap()
    };
    for &s in &s_grid {
        let (r128, r256, r512) = (residual(128, s), residual(256, s), residual(512, s));
        assert!(r256 <= C / 256.0, "s = {s}: {r256}");
        assert!(r512 < r256 && r256 < r128, "s = {s}: {r128} {r256} {r512}");
    }
    let f0 = net(256).right_half_line(0.0);
    assert!(dilation_residual(&f0, 0.0, &half_line_probe(&f0)).unwrap() < 1e-10);
}

#[test]
fn mirrored_half_line_is_dual() {
    let net = net(128);
    for &a in &[0.0, 0.7] {
        let right = net.right_half_line(a);
        let left = net.left_half_line(a).unwrap();
        let (mr, ml) = (right.modular().mu(), left.modular().mu());
        for (x, y) in mr.iter().zip(ml.iter().rev()) {
            assert!((x + y).abs() < 1e-10, "{x} vs {y}");
        }
        // Locality across the common edge.
        assert!(left.symplectic_overlap(&right).unwrap() < 1e-10);
    }
}

#[test]
fn disjoint_intervals_are_symplectically_orthogonal() {
    let net = net(128);
    let i = net.region(NetRegion::Interval { a: -2.0, b: -1.0 }).unwrap();
    let j = net.region(NetRegion::Interval { a: 0.5, b: 2.0 }).unwrap();
    let k = net.region(NetRegion::Interval { a: -1.0, b: 0.5 }).unwrap();
    assert!(i.symplectic_overlap(&j).unwrap() < 1e-10);
    assert!(i.symplectic_overlap(&k).unwrap() < 1e-10);
    // Overlapping regions are not orthogonal.
    let l = net.region(NetRegion::Interval { a: -1.5, b: 0.0 }).unwrap();
    assert!(i.symplectic_overlap(&l).unwrap() > 0.1);
}

#[test]
fn isotony_for_smooth_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for n in [128, 256] {
        let net = net(n);
        let small = net.region(NetRegion::centred(0.5)).unwrap();
        let big = net.region(NetRegion::centred(1.0)).unwrap();
        for _ in 0..20 {
            let h = random_localized(&small, false, &mut rng).unwrap();
            let coeffs = RVec::from_vec(real_part(&h));
            let r = small.containment_residual(&coeffs, &big).unwrap();
            assert!(r <= net.tol(), "N = {n}: {r} > {}", net.tol());
        }
        // A vector of the big region is contained in itself.
        let h = random_localized(&big, false, &mut rng).unwrap();
        assert!(big.containment_residual(&RVec::from_vec(real_part(&h)), &big).unwrap() < 1e-6);
    }
}

#[test]
fn translation_covariance() {
    let net = net(128);
    let model = net.model();
    let sub = net.region(NetRegion::Interval { a: -0.75, b: 1.25 }).unwrap();
    for &x in &[0.4, -1.3] {
        let moved = sub.translated(x);
        let direct = net.region(sub.region().translate(x)).unwrap();
        for (k1, k2) in moved.basis().knots().iter().zip(direct.basis().knots()) {
            assert!((k1 - k2).abs() < 1e-12);
        }
        let fresh = kernel::gram(moved.basis(), moved.basis(), 0.0).unwrap();
        assert!(rel_err(&fresh, sub.gram()) < 1e-8);
        let amp = model.embed_basis(sub.basis());
        let amp_moved = model.embed_basis(moved.basis());
        let shifted = CMat::from_fn(amp.nrows(), amp.ncols(), |k, j| amp[(k, j)] * c(0.0, model.p_grid()[k] * x).exp());
        assert!((amp_moved - shifted).norm() <= 1e-10 * amp.norm());
    }
}

#[test]
fn net_subspace_agrees_with_tomita_route() {
    let sub = NetSubspace::from_basis(NetRegion::centred(1.0), SplineBasis::interval(-1.0, 1.0, 8, 4.0).unwrap()).unwrap();
    let h = sub.to_standard().unwrap();
    let mut lam: Vec<f64> = sub.modular().delta_eigenvalues().iter().map(|l| l.ln()).collect();
    lam.sort_by(f64::total_cmp);
    for (l, want) in lam.iter().zip(h.delta().eigh().values.iter()) {
        assert!((l - want.ln()).abs() < 1e-6, "{l} vs {}", want.ln());
    }
}

#[test]
fn commutation_relation() {
    for &a in &[0.5, 1.0] {
        assert!(net(128).commutation_residual(a, 0.0).unwrap() <= 1e-10);
    }
    let r256 = net(256).commutation_residual(1.0, 0.2).unwrap();
    assert!(r256 <= net(256).tol(), "{r256} > {}", net(256).tol());
    let (r128, r512) = (net(128).commutation_residual(1.0, 0.2).unwrap(), net(512).commutation_residual(1.0, 0.2).unwrap());
    assert!(r512 < r128, "{r512} vs {r128}");
    assert!(matches!(net(128).commutation_residual(0.0, 0.1), Err(Error::Domain(_))));
}

#[test]
fn borchers_relation() {
    assert!(net(128).borchers_residual(0.0, 0.5).unwrap() <= 1e-10);
    let r256 = net(256).borchers_residual(0.2, 0.5).unwrap();
    assert!(r256 <= net(256).tol(), "{r256}");
    assert!(net(512).borchers_residual(0.2, 0.5).unwrap() < net(128).borchers_residual(0.2, 0.5).unwrap());
}

#[test]
fn half_line_inequalities() {
    let net = net(128);
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let check = net.appendix_halfline(1.0, 0.1).unwrap();
    for _ in 0..20 {
        let xi = random_unit_vector(check.right(), true, &mut rng);
        let m = check.margins(&xi);
        assert!(m.plus.holds(net.tol()) && m.minus.holds(net.tol()), "{m:?}");
    }
    // α → 0⁺: ||E± ξ|| ≤ ||ξ|| exactly.
    let check = net.appendix_halfline(1.0, 1e-7).unwrap();
    for _ in 0..10 {
        let xi = random_unit_vector(check.right(), true, &mut rng);
        let m = check.margins(&xi);
        assert!(m.plus.margin() >= -1e-4 && m.minus.margin() >= -1e-4, "{m:?}");
        assert!((m.plus.rhs - 1.0).abs() < 1e-4);
    }
    assert!(net.appendix_halfline(1.0, 0.25).is_err());
    assert!(net.appendix_halfline(-1.0, 0.1).is_err());
}

#[test]
fn interval_norm_inequality() {
    let net = net(256);
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for &alpha in &[0.05, 0.1, 0.2] {
        let check = net.interval(NetRegion::centred(1.0), alpha).unwrap();
        assert!(check.operator_margin() >= -net.tol(), "α = {alpha}: {}", check.operator_margin());
        for i in 0..100 {
            let xi = if i % 2 == 0 {
                random_unit_vector(check.subspace(), true, &mut rng)
            } else {
                random_localized(check.subspace(), true, &mut rng).unwrap()
            };
            let q = check.norm_inequality(&xi);
            assert!(q.holds(net.tol()), "α = {alpha}: {q:?}");
        }
    }
}

#[test]
fn interval_norm_inequality_limits() {
    let net = net(128);
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let near_zero = net.interval(NetRegion::centred(1.0), 1e-7).unwrap();
    let near_quarter = net.interval(NetRegion::centred(1.0), 0.2499).unwrap();
    for _ in 0..10 {
        let xi = random_localized(near_zero.subspace(), true, &mut rng).unwrap();
        let q = near_zero.norm_inequality(&xi);
        assert!((q.lhs - 1.0).abs() < 1e-4 && (q.rhs - 1.0).abs() < 1e-4 && q.margin().abs() < 1e-4, "{q:?}");
        let q = near_quarter.norm_inequality(&xi);
        assert!(q.lhs < 1e-2 && q.margin() > 0.0, "{q:?}");
    }
}

#[test]
fn log_inequality() {
    let net = net(256);
    let check = net.bound(NetRegion::centred(1.0)).unwrap();
    let modular = check.subspace().modular();
    // Eigenvectors with Δ ≥ 1 have non-positive left-hand side.
    for (m, &l) in modular.delta_eigenvalues().iter().enumerate() {
        if l >= 1.0 {
            let q = check.dp_ineq(&modular.eigenvector(m)).inequality;
            assert!(q.lhs <= 1e-12 && q.rhs >= 0.0, "λ = {l}: {q:?}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..100 {
        let xi = random_localized(check.subspace(), true, &mut rng).unwrap();
        let report = check.dp_ineq(&xi);
        assert!(report.relative_margin() >= -net.tol(), "{report:?}");
        assert!(report.slope_monotone);
        for p in &report.route {
            assert!(p.lhs <= p.rhs + net.tol() * p.rhs.abs(), "{p:?}");
        }
        let first = (report.route[0].lhs - report.inequality.lhs).abs();
        let last = (report.route.last().unwrap().lhs - report.inequality.lhs).abs();
        assert!(last < first, "α-route does not approach the logarithm: {first} {last}");
    }
}

#[test]
fn log_inequality_survives_doubling_the_region() {
    let net = net(256);
    let small = net.bound(NetRegion::centred(0.5)).unwrap();
    let big = net.bound(NetRegion::centred(1.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..20 {
        let h = random_localized(small.subspace(), false, &mut rng).unwrap();
        let basis = small.subspace().basis().clone();
        let coeffs = real_part(&h);
        let moved = big.subspace().sample(|x| basis.eval(&coeffs, x, 0));
        assert!(small.dp_ineq(&h).relative_margin() >= -net.tol());
        assert!(big.dp_ineq(&moved).relative_margin() >= -net.tol());
    }
}

/// Real coefficients of the `Δ = 1` mode of a basis with an odd number of
/// splines.
fn unit_mode(sub: &NetSubspace) -> CVec {
    let mu = sub.modular().mu();
    let m = (0..mu.len()).min_by(|&i, &j| mu[i].abs().total_cmp(&mu[j].abs())).unwrap();
    assert!(mu[m].abs() < 1e-10, "no Δ = 1 mode: μ = {}", mu[m]);
    let v = sub.modular().eigenvector(m);
    let big = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
    let phase = big.conj() / big.norm();
    v.map(|z| cr((z * phase).re))
}

#[test]
fn coherent_bound() {
    // The Δ = 1 mode carries no entropy.
    let basis = SplineBasis::interval(-1.0, 1.0, 33, 9.0).unwrap();
    let check = BoundCheck::from_subspace(NetSubspace::from_basis(NetRegion::centred(1.0), basis).unwrap()).unwrap();
    let report = check.coherent(&unit_mode(check.subspace())).unwrap();
    assert!(report.entropy.abs() < 1e-10 * report.energy && report.ratio.abs() < 1e-10, "{report:?}");

    let net = net(256);
    let check = net.bound(NetRegion::centred(1.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    for _ in 0..50 {
        let h = random_localized(check.subspace(), false, &mut rng).unwrap();
        let r = check.coherent(&h).unwrap();
        assert!(r.ratio <= 1.0 + net.tol() && r.entropy >= 0.0, "{r:?}");
    }
    let h = random_localized(check.subspace(), true, &mut rng).unwrap();
    assert!(matches!(check.coherent(&h), Err(Error::Precondition(_))));
}

#[test]
fn coherent_bound_on_nested_regions() {
    let net = net(256);
    let (r, r_inner) = (1.0, 0.5);
    let outer = net.bound(NetRegion::centred(r)).unwrap();
    let inner = net.bound(NetRegion::centred(r_inner)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(39);
    for _ in 0..20 {
        let h = random_localized(inner.subspace(), false, &mut rng).unwrap();
        let basis = inner.subspace().basis().clone();
        let coeffs = real_part(&h);
        let moved = outer.subspace().sample(|x| basis.eval(&coeffs, x, 0));
        let small = inner.coherent(&h).unwrap();
        let large = outer.coherent(&moved).unwrap();
        assert!(small.ratio <= 1.0 + net.tol(), "{small:?}");
        assert!(large.ratio <= 1.0 + net.tol(), "{large:?}");
        // Entropy grows with the region.
        assert!(small.entropy <= large.entropy * (1.0 + net.tol()), "{small:?} {large:?}");
    }
}

#[test]
fn coherent_forms_match_position_space_formulas() {
    // E = π ∫ f'², S = (π²/R) ∫ (R² - x²) f'² for real f on (-R, R).
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for n in [128, 256] {
        let net = net(n);
        for &r in &[0.5, 2.0] {
            let check = net.bound(NetRegion::centred(r)).unwrap();
            let basis = check.subspace().basis();
            for _ in 0..5 {
                let h = random_localized(check.subspace(), false, &mut rng).unwrap();
                let coeffs = real_part(&h);
                let fp2 = |x: f64| basis.eval(&coeffs, x, 1).powi(2);
                let energy = PI * integrate(fp2, -r, r, 1e-13, 1e-11, 20000).unwrap().value;
                let entropy = PI * PI / r * integrate(|x| (r * r - x * x) * fp2(x), -r, r, 1e-13, 1e-11, 20000).unwrap().value;
                let report = check.coherent(&h).unwrap();
                assert!((report.energy / energy - 1.0).abs() < 1e-9);
                assert!((report.entropy / entropy - 1.0).abs() <= net.tol(), "N = {n}: {} vs {entropy}", report.entropy);
            }
        }
    }
}

#[test]
fn energy_sweep() {
    let net = net(256);
    let check = net.bound(NetRegion::centred(1.0)).unwrap();
    let ctx = check.sweep_context(net).unwrap();
    assert_eq!(ctx.straddling_directions(), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..10 {
        let h = random_localized(check.subspace(), false, &mut rng).unwrap();
        let base = check.coherent(&h).unwrap();
        let none = check.energy_sweep(&ctx, &h, 0, &mut rng).unwrap();
        assert_eq!(none.e_min, base.energy);
        assert_eq!(none.perturbations, 0);
        assert!((none.margin - (2.0 * PI * check.r() * base.energy - base.entropy)).abs() < 1e-12 * base.energy);
        let swept = check.energy_sweep(&ctx, &h, 64, &mut rng).unwrap();
        assert!(swept.e_min <= base.energy && swept.relative_margin >= -net.tol(), "{swept:?}");
        assert!(swept.upper_estimate && swept.perturbations == 66);
        let straddle = check.straddling_sweep(&ctx, &h).unwrap();
        assert!(straddle.e_min < base.energy && straddle.relative_margin >= -net.tol(), "{straddle:?}");
    }
    let half = net.right_half_line(0.0);
    let err = BoundCheck::from_subspace(half);
    assert!(err.is_err());
}

#[test]
fn net_region_round_trips_through_json() {
    for region in [NetRegion::HalfLineRight { a: -1.5 }, NetRegion::HalfLineLeft { a: 2.0 }, NetRegion::Interval { a: -1.0, b: 3.0 }] {
        let json = serde_json::to_string(&region).unwrap();
        assert_eq!(serde_json::from_str::<NetRegion>(&json).unwrap(), region);
    }
    assert_eq!(serde_json::to_string(&NetRegion::centred(1.0)).unwrap(), r#"{"kind":"interval","a":-1.0,"b":1.0}"#);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn covariance_of_random_intervals(a in -2.0f64..1.0, w in 1.0f64..3.0, x in -3.0f64..3.0) {
        let net = net(64);
        let region = NetRegion::Interval { a, b: a + w };
        let sub = net.region(region).unwrap();
        let moved = sub.translated(x);
        let fresh = kernel::gram(moved.basis(), moved.basis(), 0.0).unwrap();
        prop_assert!(rel_err(&fresh, sub.gram()) < 1e-8);
        prop_assert_eq!(moved.region(), region.translate(x));
    }

    #[test]
    fn locality_of_random_disjoint_intervals(a in -3.0f64..0.0, w1 in 1.0f64..2.0, gap in 0.0f64..1.0, w2 in 1.0f64..2.0) {
        let net = net(64);
        let i = net.region(NetRegion::Interval { a, b: a + w1 }).unwrap();
        let j = net.region(NetRegion::Interval { a: a + w1 + gap, b: a + w1 + gap + w2 }).unwrap();
        prop_assert!(i.symplectic_overlap(&j).unwrap() < 1e-10);
    }
}

#[test]
fn regularised_bound_tends_to_log_inequality() {
    let net = net(256);
    let region = NetRegion::centred(1.0);
    let bound = net.bound(region).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let h = random_localized(bound.subspace(), false, &mut rng).unwrap();
    let dp = bound.dp_ineq(&h).inequality;
    let mut prev = f64::INFINITY;
    for &alpha in &[0.2, 0.1, 0.05, 0.01, 0.001] {
        let q = net.interval(region, alpha).unwrap().alpha_bound(&h);
        assert!(q.margin() >= -net.tol() * q.rhs.abs(), "α = {alpha}: {q:?}");
        let gap = (q.lhs - dp.lhs).abs() + (q.rhs - dp.rhs).abs();
        assert!(gap < prev, "α = {alpha}: {gap} ≥ {prev}");
        prev = gap;
    }
    assert!(prev < 0.05 * dp.rhs, "{prev}");
}
