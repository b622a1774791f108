//! The verification suites. Every sample draws from its own ChaCha stream
//! derived from the seed and the sample's coordinates, so results do not
//! depend on scheduling.

use crate::config::{ExperimentConfig, Suite};
use crate::record::{ExperimentRecord, Key};
use bekenstein_core::chiral::verify::{random_localized, random_unit_vector};
use bekenstein_core::chiral::{ChiralNet, NetRegion};
use bekenstein_core::entropy::{
    cocycle_entropy, partial_trace_second, relative_entropy, trace_formula, uhlmann_entropy, vector_state_entropy,
    DensityMatrix, StandardFormAlgebra,
};
use bekenstein_core::formcalc::{check_log_monotone, kernel_integral, log_limit, log_via_kernel, quad_form_log};
use bekenstein_core::interchange::SubspaceRecord;
use bekenstein_core::linalg::{c, op_norm};
use bekenstein_core::stdsubspace::{contraction_family, entropy_density_bound, inclusion_inequalities, tc_adjoint_residual};
use bekenstein_core::{sample, Inequality, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::time::Instant;

type CoreResult<T> = bekenstein_core::Result<T>;

/// A named residual with its tolerance.
type ResidualCheck<'a> = (&'static str, f64, Box<dyn Fn() -> CoreResult<f64> + Sync + 'a>);

/// Kernel identity tolerance and λ-grid size.
pub const KERNEL_TOL: f64 = 1e-8;
pub const KERNEL_POINTS: usize = 50;
/// Pairwise tolerance of the three log-form routes.
pub const LOG_FORM_TOL: f64 = 1e-6;
pub const LOEWNER_TOL: f64 = 1e-9;
pub const TOMITA_TOL: f64 = 1e-10;
pub const INVARIANCE_TOL: f64 = 1e-8;
pub const CONTRACTION_TOL: f64 = 1e-8;
pub const TC_TOL: f64 = 1e-8;
pub const INCLUSION_TOL: f64 = 1e-9;
/// Relative to `max(1, |rhs|)`.
pub const LEMLOGM_TOL: f64 = 1e-10;
pub const FOUR_WAY_TOL: f64 = 1e-5;
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const MONOTONICITY_TOL: f64 = 1e-8;
pub const ROUND_TRIP_TOL: f64 = 1e-8;
/// Residual at `s = 0`, where both sides are the identity.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Instance counts used when `--samples` is not given.
pub const THREE_WAY_INSTANCES: usize = 200;
pub const LOEWNER_INSTANCES: usize = 500;
pub const TOMITA_INSTANCES: usize = 200;
pub const NESTED_PAIRS: usize = 100;
pub const INCLUSION_PAIRS: usize = 200;
pub const LEMLOGM_INSTANCES: usize = 500;
pub const ENTROPY_INSTANCES: usize = 100;

/// Complement perturbations in the energy-infimum sweep.
pub const SWEEP_PERTURBATIONS: usize = 64;
/// Localized vectors per configuration for the `bound` subcommand.
pub const BOUND_SAMPLES: usize = 50;

const MAX_COND: f64 = 1e3;

/// Independent generator for one task.
pub fn task_rng(seed: u64, coords: &[u64]) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &x in coords {
        h = (h ^ x).wrapping_mul(0x0000_0100_0000_01b3);
        h ^= h >> 29;
    }
    rng.set_stream(h);
    rng
}

/// Measures wall time only when asked, so default output is reproducible.
#[derive(Debug, Clone, Copy)]
pub struct Clock {
    pub enabled: bool,
}

impl Clock {
    pub fn run(&self, f: impl FnOnce() -> Vec<ExperimentRecord>) -> Vec<ExperimentRecord> {
        if !self.enabled {
            return f();
        }
        let start = Instant::now();
        let records = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        records.into_iter().map(|r| r.timed(ms)).collect()
    }
}

fn or_failed(key: Key, quantity: &str, r: CoreResult<Vec<ExperimentRecord>>) -> Vec<ExperimentRecord> {
    r.unwrap_or_else(|e| vec![ExperimentRecord::failed(key, quantity, &e)])
}

fn par_samples<F>(count: usize, f: F) -> Vec<ExperimentRecord>
where
    F: Fn(u64) -> Vec<ExperimentRecord> + Sync + Send,
{
    (0..count as u64).into_par_iter().flat_map_iter(f).collect()
}

/// Output of one suite run.
#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub records: Vec<ExperimentRecord>,
    pub subspaces: Vec<SubspaceRecord>,
}

pub fn run_suite(suite: Suite, cfg: &ExperimentConfig) -> SuiteOutput {
    let clock = Clock { enabled: cfg.timings };
    let records = match suite {
        Suite::Formcalc => formcalc(cfg, clock),
        Suite::Stdsubspace => stdsubspace(cfg, clock),
        Suite::Entropy => entropy(cfg, clock),
        Suite::Chiralnet => chiralnet(cfg, clock),
        Suite::BoundSweep => bound_sweep(cfg, clock),
    };
    SuiteOutput { records, subspaces: Vec::new() }
}

fn stream(suite: Suite, check: u64) -> u64 {
    ((suite as u64) << 8) | check
}

// ---------------------------------------------------------------- formcalc

fn formcalc(cfg: &ExperimentConfig, clock: Clock) -> Vec<ExperimentRecord> {
    let suite = Suite::Formcalc;
    let mut out = par_samples(KERNEL_POINTS, |k| {
        clock.run(|| {
            let key = Key::new(suite, 1, k);
            let lambda = 0.1f64 * 100f64.powf(k as f64 / (KERNEL_POINTS - 1) as f64);
            or_failed(
                key,
                "kernel_identity",
                kernel_integral(lambda)
                    .map(|q| vec![ExperimentRecord::residual(key, "kernel_identity", (q.value - lambda.ln()).abs(), KERNEL_TOL)]),
            )
        })
    });
    out.extend(par_samples(cfg.samples.unwrap_or(THREE_WAY_INSTANCES), |i| {
        clock.run(|| {
            let n = 1 + (i % 8) as usize;
            let key = Key::new(suite, n, i);
            let mut rng = task_rng(cfg.seed, &[stream(suite, 1), i]);
            let a = sample::positive_definite(n, 0.05, &mut rng);
            let xi = sample::unit_vector(n, &mut rng);
            let routes = || -> CoreResult<Vec<ExperimentRecord>> {
                let spectral = quad_form_log(&xi, &a)?.to_f64();
                let kernel = log_via_kernel(&xi, &a)?;
                let limit = log_limit(&xi, &a)?;
                Ok(vec![
                    ExperimentRecord::residual(key, "log_form_spectral_kernel", (spectral - kernel).abs(), LOG_FORM_TOL),
                    ExperimentRecord::residual(key, "log_form_spectral_limit", (spectral - limit).abs(), LOG_FORM_TOL),
                    ExperimentRecord::residual(key, "log_form_kernel_limit", (kernel - limit).abs(), LOG_FORM_TOL),
                ])
            };
            or_failed(key, "log_form", routes())
        })
    }));
    out.extend(par_samples(cfg.samples.unwrap_or(LOEWNER_INSTANCES), |i| {
        clock.run(|| {
            let n = 1 + (i % 6) as usize;
            let key = Key::new(suite, n, i);
            let mut rng = task_rng(cfg.seed, &[stream(suite, 2), i]);
            let (a, b) = sample::loewner_pair(n, &mut rng);
            or_failed(
                key,
                "log_monotone",
                check_log_monotone(&a, &b)
                    .map(|r| vec![ExperimentRecord::inequality(key, "log_monotone", Inequality::new(0.0, r.margin), LOEWNER_TOL)]),
            )
        })
    }));
    out
}

// ------------------------------------------------------------- stdsubspace

fn strip_grid() -> Vec<C64> {
    (0..9).flat_map(|i| (0..9).map(move |j| c(-2.0 + 0.5 * i as f64, -0.5 * j as f64 / 8.0))).collect()
}

fn stdsubspace(cfg: &ExperimentConfig, clock: Clock) -> Vec<ExperimentRecord> {
    let suite = Suite::Stdsubspace;
    let mut out = par_samples(cfg.samples.unwrap_or(TOMITA_INSTANCES), |i| {
        clock.run(|| {
            let n = 1 + (i % 6) as usize;
            let key = Key::new(suite, n, i);
            let mut rng = task_rng(cfg.seed, &[stream(suite, 0), i]);
            let h = sample::standard_subspace(n, MAX_COND, &mut rng);
            or_failed(
                key,
                "tomita",
                h.residuals().map(|r| {
                    [
                        ("tomita_polar", r.polar, TOMITA_TOL),
                        ("tomita_s_squared", r.s_squared, TOMITA_TOL),
                        ("tomita_j_squared", r.j_squared, TOMITA_TOL),
                        ("tomita_j_delta_j", r.j_delta_j, TOMITA_TOL),
                        ("tomita_complement_s", r.complement_s, TOMITA_TOL),
                        ("tomita_j_duality", r.j_duality, TOMITA_TOL),
                        ("tomita_double_complement", r.double_complement, TOMITA_TOL),
                        ("tomita_modular_invariance", r.modular_invariance, INVARIANCE_TOL),
                    ]
                    .into_iter()
                    .map(|(q, v, tol)| ExperimentRecord::residual(key, q, v, tol))
                    .collect()
                }),
            )
        })
    });
    let grid = strip_grid();
    out.extend(par_samples(cfg.samples.unwrap_or(NESTED_PAIRS), |i| {
        clock.run(|| {
            let n = 2 + (i % 3) as usize;
            let key = Key::new(suite, n, i);
            let mut rng = task_rng(cfg.seed, &[stream(suite, 1), i]);
            let h = sample::standard_subspace(n, MAX_COND, &mut rng);
            let k = sample::sub_subspace(h.subspace(), rng.random_range(1..=n), &mut rng);
            let worst = grid
                .iter()
                .map(|&z| contraction_family(&h, &k, z).map(|t| op_norm(&t)))
                .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)));
            or_failed(
                key,
                "contraction_norm",
                worst.map(|w| vec![ExperimentRecord::inequality(key, "contraction_norm", Inequality::new(w, 1.0), CONTRACTION_TOL)]),
            )
        })
    }));
    out.extend(par_samples(cfg.samples.unwrap_or(NESTED_PAIRS), |i| {
        clock.run(|| {
            let n = 1 + (i % 4) as usize;
            let key = Key::new(suite, n, i);
            let mut rng = task_rng(cfg.seed, &[stream(suite, 2), i]);
            let h = sample::standard_subspace(n, 1e2, &mut rng);
            let k = sample::standard_subspace(n, 1e2, &mut rng);
            let worst = [c(0.0, 0.0), c(0.7, -0.2), c(-1.3, -0.5)]
                .iter()
                .map(|&z| tc_adjoint_residual(&h, &k, z))
                .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)));
            or_failed(key, "tc_adjoint", worst.map(|w| vec![ExperimentRecord::residual(key, "tc_adjoint", w, TC_TOL)]))
        })
    }));
    let alphas: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    out.extend(par_samples(cfg.samples.unwrap_or(INCLUSION_PAIRS), |i| {
        clock.run(|| {
            let n = 2 + (i % 3) as usize;
            let key = Key::new(suite, n, i);
            let mut rng = task_rng(cfg.seed, &[stream(suite, 3), i]);
            let h = sample::standard_subspace(n, MAX_COND, &mut rng);
            let k = sample::sub_subspace(h.subspace(), rng.random_range(1..=n), &mut rng);
            or_failed(
                key,
                "inclusion",
                inclusion_inequalities(&h, &k, &alphas).map(|r| {
                    let mut recs: Vec<_> = r
                        .power_margins
                        .iter()
                        .map(|&(a, m)| {
                            ExperimentRecord::inequality(key.with_alpha(a), "inclusion_power", Inequality::new(0.0, m), INCLUSION_TOL)
                        })
                        .collect();
                    recs.push(ExperimentRecord::inequality(key, "inclusion_log", Inequality::new(0.0, r.log_margin), INCLUSION_TOL));
                    recs
                }),
            )
        })
    }));
    out.extend(par_samples(cfg.samples.unwrap_or(LEMLOGM_INSTANCES), |i| {
        clock.run(|| {
            let n = 1 + (i % 6) as usize;
            let key = Key::new(suite, n, i);
            let mut rng = task_rng(cfg.seed, &[stream(suite, 4), i]);
            let h = sample::standard_subspace(n, MAX_COND, &mut rng);
            let xi = sample::gaussian_vector(n, &mut rng);
            or_failed(
                key,
                "entropy_density_bound",
                entropy_density_bound(&xi, &h).map(|q| {
                    vec![ExperimentRecord::inequality(key, "entropy_density_bound", q, LEMLOGM_TOL * q.rhs.abs().max(1.0))]
                }),
            )
        })
    }));
    out
}

// ----------------------------------------------------------------- entropy

fn entropy(cfg: &ExperimentConfig, clock: Clock) -> Vec<ExperimentRecord> {
    let suite = Suite::Entropy;
    let count = cfg.samples.unwrap_or(ENTROPY_INSTANCES);
    let mut out = par_samples(count, |i| {
        clock.run(|| {
            let n = 1 + (i % 4) as usize;
            let key = Key::new(suite, n, i);
            let mut rng = task_rng(cfg.seed, &[stream(suite, 0), i]);
            let phi = sample::density_matrix(n, 0.02, &mut rng);
            let omega = sample::density_matrix(n, 0.02, &mut rng);
            let u = sample::unitary(n, &mut rng);
            let run = || -> CoreResult<Vec<ExperimentRecord>> {
                let (phi, omega) = (DensityMatrix::new(phi)?, DensityMatrix::new(omega)?);
                let xi = phi.sqrt() * u;
                let oracle = trace_formula(&phi, &omega).to_f64();
                let araki = relative_entropy(&phi, &omega, &xi)?.to_f64();
                let uhlmann = uhlmann_entropy(&phi, &omega, &xi)?.to_f64();
                let cocycle = cocycle_entropy(&phi, &omega)?;
                Ok(vec![
                    ExperimentRecord::residual(key, "entropy_araki", (araki - oracle).abs(), FOUR_WAY_TOL),
                    ExperimentRecord::residual(key, "entropy_uhlmann", (uhlmann - oracle).abs(), FOUR_WAY_TOL),
                    ExperimentRecord::residual(key, "entropy_cocycle", (cocycle - oracle).abs(), FOUR_WAY_TOL),
                    ExperimentRecord::inequality(key, "entropy_positivity", Inequality::new(0.0, araki), POSITIVITY_TOL),
                ])
            };
            or_failed(key, "entropy_four_way", run())
        })
    });
    out.extend(par_samples(count, |i| {
        clock.run(|| {
            let key = Key::new(suite, 4, i);
            let mut rng = task_rng(cfg.seed, &[stream(suite, 1), i]);
            let rho = sample::density_matrix(4, 0.01, &mut rng);
            let sigma = sample::density_matrix(4, 0.01, &mut rng);
            let run = || -> CoreResult<Vec<ExperimentRecord>> {
                let (rho, sigma) = (DensityMatrix::new(rho)?, DensityMatrix::new(sigma)?);
                let full = relative_entropy(&rho, &sigma, &rho.sqrt())?.to_f64();
                let ra = DensityMatrix::new(partial_trace_second(rho.matrix(), 2, 2))?;
                let sa = DensityMatrix::new(partial_trace_second(sigma.matrix(), 2, 2))?;
                let restricted = relative_entropy(&ra, &sa, &ra.sqrt())?.to_f64();
                Ok(vec![ExperimentRecord::inequality(
                    key,
                    "entropy_monotonicity",
                    Inequality::new(restricted, full),
                    MONOTONICITY_TOL,
                )])
            };
            or_failed(key, "entropy_monotonicity", run())
        })
    }));
    out.extend(par_samples(count, |i| {
        clock.run(|| {
            let n = 2 + (i % 3) as usize;
            let key = Key::new(suite, n, i);
            let mut rng = task_rng(cfg.seed, &[stream(suite, 2), i]);
            let omega = sample::density_matrix(n, 0.02, &mut rng);
            let v = sample::unitary(n, &mut rng);
            let run = || -> CoreResult<Vec<ExperimentRecord>> {
                let omega = DensityMatrix::new(omega)?;
                let phi = DensityMatrix::new(&v * omega.matrix() * v.adjoint())?;
                let alg = StandardFormAlgebra::new(omega.clone())?;
                let xi = &v * alg.vacuum();
                let got = vector_state_entropy(&xi, &alg)?;
                let want = trace_formula(&phi, &omega).to_f64();
                Ok(vec![ExperimentRecord::residual(key, "entropy_round_trip", (got - want).abs(), ROUND_TRIP_TOL)])
            };
            or_failed(key, "entropy_round_trip", run())
        })
    }));
    out
}

// ---------------------------------------------------------------- chiralnet

/// Nets for every configured grid size, built in parallel.
pub fn build_nets(ns: &[usize]) -> Vec<(usize, CoreResult<ChiralNet>)> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns.into_par_iter().map(|n| (n, ChiralNet::with_size(n))).collect()
}

fn grid_points(cfg: &ExperimentConfig) -> Vec<(f64, f64)> {
    cfg.r.iter().flat_map(|&r| cfg.alpha.iter().map(move |&a| (r, a))).collect()
}

fn chiralnet(cfg: &ExperimentConfig, clock: Clock) -> Vec<ExperimentRecord> {
    let suite = Suite::Chiralnet;
    let samples = cfg.samples.unwrap_or_else(|| suite.default_samples());
    let mut out = Vec::new();
    for (n, net) in build_nets(&cfg.n) {
        let key = Key::new(suite, n, 0);
        let net = match net {
            Ok(net) => net,
            Err(e) => {
                out.push(ExperimentRecord::failed(key, "model", &e));
                continue;
            }
        };
        let tol = net.tol();
        out.extend(net_invariants(&net, key, clock));
        out.par_extend(grid_points(cfg).into_par_iter().flat_map_iter(|(r, alpha)| {
            let key = key.with_r(r).with_alpha(alpha);
            let mut recs = Vec::new();
            match net.interval(NetRegion::centred(r), alpha) {
                Ok(check) => {
                    recs.push(ExperimentRecord::inequality(key, "operator_t1", Inequality::new(0.0, check.operator_margin()), tol));
                    let mut rng = task_rng(cfg.seed, &[stream(suite, 1), n as u64, r.to_bits(), alpha.to_bits()]);
                    for i in 0..samples as u64 {
                        let key = Key { sample_id: i, ..key };
                        recs.extend(clock.run(|| {
                            let xi = if i % 2 == 0 {
                                Ok(random_unit_vector(check.subspace(), true, &mut rng))
                            } else {
                                random_localized(check.subspace(), true, &mut rng)
                            };
                            or_failed(
                                key,
                                "norm_t2",
                                xi.map(|xi| vec![ExperimentRecord::inequality(key, "norm_t2", check.norm_inequality(&xi), tol)]),
                            )
                        }));
                    }
                }
                Err(e) => recs.push(ExperimentRecord::failed(key, "operator_t1", &e)),
            }
            match net.appendix_halfline(r, alpha) {
                Ok(check) => {
                    let mut rng = task_rng(cfg.seed, &[stream(suite, 2), n as u64, r.to_bits(), alpha.to_bits()]);
                    for i in 0..samples as u64 {
                        let key = Key { sample_id: i, ..key };
                        recs.extend(clock.run(|| {
                            let m = check.margins(&random_unit_vector(check.right(), true, &mut rng));
                            vec![
                                ExperimentRecord::inequality(key, "halfline_plus", m.plus, tol),
                                ExperimentRecord::inequality(key, "halfline_minus", m.minus, tol),
                            ]
                        }));
                    }
                }
                Err(e) => recs.push(ExperimentRecord::failed(key, "halfline", &e)),
            }
            recs
        }));
        out.par_extend(cfg.r.par_iter().flat_map_iter(|&r| {
            let key = key.with_r(r);
            match net.bound(NetRegion::centred(r)) {
                Ok(check) => {
                    let mut rng = task_rng(cfg.seed, &[stream(suite, 3), n as u64, r.to_bits()]);
                    let mut recs = Vec::new();
                    for i in 0..samples as u64 {
                        let key = Key { sample_id: i, ..key };
                        recs.extend(clock.run(|| {
                            or_failed(
                                key,
                                "log_inequality",
                                random_localized(check.subspace(), true, &mut rng).map(|xi| {
                                    let rep = check.dp_ineq(&xi);
                                    let q = rep.inequality;
                                    vec![ExperimentRecord::new(key, "log_inequality", q.lhs, q.rhs, rep.relative_margin(), tol)]
                                }),
                            )
                        }));
                    }
                    recs
                }
                Err(e) => vec![ExperimentRecord::failed(key, "log_inequality", &e)],
            }
        }));
    }
    out
}

/// Half-line flow, commutation, Borchers and locality records for one net.
fn net_invariants(net: &ChiralNet, key: Key, clock: Clock) -> Vec<ExperimentRecord> {
    let tol = net.tol();
    let mut out: Vec<ExperimentRecord> = net
        .residuals()
        .iter()
        .enumerate()
        .map(|(i, &(_, res))| ExperimentRecord::residual(Key { sample_id: i as u64, ..key }, "half_line_residual", res, tol))
        .collect();
    let checks: [ResidualCheck<'_>; 5] = [
        ("commutation_identity", IDENTITY_TOL, Box::new(|| net.commutation_residual(1.0, 0.0))),
        ("commutation", tol, Box::new(|| net.commutation_residual(1.0, 0.2))),
        ("borchers_identity", IDENTITY_TOL, Box::new(|| net.borchers_residual(0.0, 0.5))),
        ("borchers", tol, Box::new(|| net.borchers_residual(0.2, 0.5))),
        (
            "locality",
            tol,
            Box::new(|| {
                let i = net.region(NetRegion::Interval { a: -2.0, b: -1.0 })?;
                let j = net.region(NetRegion::Interval { a: 0.5, b: 2.0 })?;
                i.symplectic_overlap(&j)
            }),
        ),
    ];
    out.par_extend(checks.par_iter().flat_map_iter(|(q, t, f)| {
        clock.run(|| match f() {
            Ok(v) => vec![ExperimentRecord::residual(key, q, v, *t)],
            Err(e) => vec![ExperimentRecord::failed(key, q, &e)],
        })
    }));
    out
}

// -------------------------------------------------------------- bound sweep

fn bound_sweep(cfg: &ExperimentConfig, clock: Clock) -> Vec<ExperimentRecord> {
    let suite = Suite::BoundSweep;
    let samples = cfg.samples.unwrap_or_else(|| suite.default_samples());
    let mut out = Vec::new();
    for (n, net) in build_nets(&cfg.n) {
        let key = Key::new(suite, n, 0);
        let net = match net {
            Ok(net) => net,
            Err(e) => {
                out.extend((0..(cfg.r.len() * cfg.alpha.len() * samples) as u64).map(|i| {
                    ExperimentRecord::failed(Key { sample_id: i, ..key }, "bound_alpha", &e)
                }));
                continue;
            }
        };
        let tol = net.tol();
        out.par_extend(grid_points(cfg).into_par_iter().flat_map_iter(|(r, alpha)| {
            let key = key.with_r(r).with_alpha(alpha);
            let check = net.interval(NetRegion::centred(r), alpha);
            let mut rng = task_rng(cfg.seed, &[stream(suite, 0), n as u64, r.to_bits(), alpha.to_bits()]);
            (0..samples as u64)
                .flat_map(|i| {
                    let key = Key { sample_id: i, ..key };
                    clock.run(|| {
                        let check = match &check {
                            Ok(c) => c,
                            Err(e) => return vec![ExperimentRecord::failed(key, "bound_alpha", e)],
                        };
                        or_failed(
                            key,
                            "bound_alpha",
                            random_localized(check.subspace(), false, &mut rng)
                                .map(|h| vec![ExperimentRecord::relative(key, "bound_alpha", check.alpha_bound(&h), tol)]),
                        )
                    })
                })
                .collect::<Vec<_>>()
        }));
    }
    out
}

// ------------------------------------------------------------ headline bound

/// Coherent-state ratio and energy-infimum sweep per `(N, R, sample)`. The
/// JSON export carries the region subspace of every `(N, R)`.
pub fn run_bound(cfg: &ExperimentConfig) -> SuiteOutput {
    let suite = Suite::BoundSweep;
    let clock = Clock { enabled: cfg.timings };
    let samples = cfg.samples.unwrap_or(BOUND_SAMPLES);
    let mut output = SuiteOutput::default();
    for (n, net) in build_nets(&cfg.n) {
        let key = Key::new(suite, n, 0);
        let net = match net {
            Ok(net) => net,
            Err(e) => {
                output.records.push(ExperimentRecord::failed(key, "model", &e));
                continue;
            }
        };
        let tol = net.tol();
        let per_r: Vec<(Vec<ExperimentRecord>, Option<SubspaceRecord>)> = cfg
            .r
            .par_iter()
            .map(|&r| {
                let key = key.with_r(r);
                let prepared = net.bound(NetRegion::centred(r)).and_then(|check| {
                    let ctx = check.sweep_context(&net)?;
                    Ok((check, ctx))
                });
                let (check, ctx) = match prepared {
                    Ok(p) => p,
                    Err(e) => return (vec![ExperimentRecord::failed(key, "coherent_ratio", &e)], None),
                };
                let mut rng = task_rng(cfg.seed, &[stream(suite, 1), n as u64, r.to_bits()]);
                let mut recs = Vec::new();
                for i in 0..samples as u64 {
                    let key = Key { sample_id: i, ..key };
                    recs.extend(clock.run(|| {
                        let mut run = || -> CoreResult<Vec<ExperimentRecord>> {
                            let h = random_localized(check.subspace(), false, &mut rng)?;
                            let c = check.coherent(&h)?;
                            let s = check.energy_sweep(&ctx, &h, SWEEP_PERTURBATIONS, &mut rng)?;
                            Ok(vec![
                                ExperimentRecord::new(key, "coherent_ratio", c.ratio, 1.0, 1.0 - c.ratio, tol),
                                ExperimentRecord::new(
                                    key,
                                    "energy_infimum",
                                    s.entropy,
                                    2.0 * PI * r * s.e_min,
                                    s.relative_margin,
                                    tol,
                                ),
                            ])
                        };
                        or_failed(key, "coherent_ratio", run())
                    }));
                }
                (recs, Some(SubspaceRecord::from(check.subspace())))
            })
            .collect();
        for (recs, sub) in per_r {
            output.records.extend(recs);
            output.subspaces.extend(sub);
        }
    }
    output
}
