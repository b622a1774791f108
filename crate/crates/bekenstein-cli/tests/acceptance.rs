//! One line per acceptance criterion; exits non-zero if any fails.

use bekenstein_cli::config::{ExperimentConfig, Suite};
use bekenstein_cli::converge::{run_convergence, MAX_SLOPE};
use bekenstein_cli::record::ExperimentRecord;
use bekenstein_cli::suites::{run_bound, run_suite, SWEEP_PERTURBATIONS};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

/// All records with one of `quantities`: expected count, every one passing.
fn check(records: &[ExperimentRecord], quantities: &[&str], expected: usize) -> Outcome {
    let hits: Vec<&ExperimentRecord> = records.iter().filter(|r| quantities.contains(&r.quantity.as_str())).collect();
    let failed = hits.iter().filter(|r| !r.pass).count();
    let worst = hits
        .iter()
        .map(|r| if r.rhs == 0.0 { r.lhs } else { -r.margin })
        .fold(f64::NEG_INFINITY, f64::max);
    Outcome {
        pass: hits.len() == expected && failed == 0,
        detail: format!("{} records (want {expected}), {failed} failed, worst {worst:.3e}", hits.len()),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn within(o: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    Outcome {
        pass: o.pass && elapsed < limit,
        detail: format!("{}; {:.2} s (limit {} s)", o.detail, elapsed.as_secs_f64(), limit.as_secs()),
    }
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    Outcome { pass: a.pass && b.pass, detail: format!("{}; {}", a.detail, b.detail) }
}

fn cfg(suite: Option<Suite>) -> ExperimentConfig {
    ExperimentConfig { suite, seed: SEED, ..ExperimentConfig::default() }
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();

    let (formcalc, t_formcalc) = timed(|| run_suite(Suite::Formcalc, &cfg(Some(Suite::Formcalc))).records);
    results.push(("log kernel identity on 50 points of [0.1, 10]", within(check(&formcalc, &["kernel_identity"], 50), t_formcalc, Duration::from_secs(5))));
    results.push((
        "three-way log-form agreement, 200 instances, dim <= 8",
        within(
            check(&formcalc, &["log_form_spectral_kernel", "log_form_spectral_limit", "log_form_kernel_limit"], 3 * 200),
            t_formcalc,
            Duration::from_secs(30),
        ),
    ));
    results.push(("operator monotonicity of log, 500 ordered pairs", check(&formcalc, &["log_monotone"], 500)));

    let (std, t_std) = timed(|| run_suite(Suite::Stdsubspace, &cfg(Some(Suite::Stdsubspace))).records);
    let tomita = [
        "tomita_polar",
        "tomita_s_squared",
        "tomita_j_squared",
        "tomita_j_delta_j",
        "tomita_complement_s",
        "tomita_j_duality",
        "tomita_double_complement",
        "tomita_modular_invariance",
    ];
    results.push(("Tomita pipeline on 200 standard subspaces, n <= 6", within(check(&std, &tomita, 8 * 200), t_std, Duration::from_secs(60))));
    results.push((
        "contraction family on a 9x9 strip grid (100 pairs) and adjoint relation",
        both(check(&std, &["contraction_norm"], 100), check(&std, &["tc_adjoint"], 100)),
    ));
    results.push(("inclusion inequalities, 200 pairs x 11 alphas plus log", check(&std, &["inclusion_power", "inclusion_log"], 200 * 12)));
    results.push(("entropy density bound, 500 instances", check(&std, &["entropy_density_bound"], 500)));

    let entropy = run_suite(Suite::Entropy, &cfg(Some(Suite::Entropy))).records;
    results.push((
        "relative entropy four ways, positivity, monotonicity",
        both(
            check(&entropy, &["entropy_araki", "entropy_uhlmann", "entropy_cocycle", "entropy_positivity"], 4 * 100),
            check(&entropy, &["entropy_monotonicity"], 100),
        ),
    ));
    results.push(("vector-state entropy round trip, 100 instances", check(&entropy, &["entropy_round_trip"], 100)));

    let conv_cfg = ExperimentConfig { n: vec![64, 128, 256, 512], ..cfg(None) };
    let (conv, t_conv) = timed(|| run_convergence(&conv_cfg, None));
    results.push((
        "half-line flow vs dilations, tol(N) decreasing, slope < -0.5",
        match conv {
            Ok((_, report)) => within(
                Outcome {
                    pass: report.decreasing && report.slope < MAX_SLOPE,
                    detail: format!(
                        "tol = [{}], slope {:.3}",
                        report.points.iter().map(|p| format!("{:.3e}", p.1)).collect::<Vec<_>>().join(", "),
                        report.slope
                    ),
                },
                t_conv,
                Duration::from_secs(300),
            ),
            Err(e) => Outcome { pass: false, detail: e.to_string() },
        },
    ));

    let chiral_cfg = ExperimentConfig { samples: Some(100), ..cfg(Some(Suite::Chiralnet)) };
    let chiral = run_suite(Suite::Chiralnet, &chiral_cfg).records;
    let configs = 2 * 3 * 3;
    results.push((
        "interval and half-line norm inequalities, 100 vectors per (N, R, alpha)",
        both(check(&chiral, &["norm_t2", "halfline_plus", "halfline_minus"], 3 * 100 * configs), check(&chiral, &["operator_t1"], configs)),
    ));

    let bound_cfg = ExperimentConfig { samples: Some(50), ..cfg(None) };
    let bound = run_bound(&bound_cfg).records;
    let (sweep, t_sweep) = timed(|| run_suite(Suite::BoundSweep, &cfg(Some(Suite::BoundSweep))).records);
    results.push((
        "coherent bound ratio, 50 vectors per (N, R); energy sweep over 64 perturbations; full sweep runtime",
        within(
            both(
                both(check(&bound, &["coherent_ratio"], 2 * 3 * 50), check(&bound, &["energy_infimum"], 2 * 3 * 50)),
                check(&sweep, &["bound_alpha"], 2 * 3 * 3 * 20),
            ),
            t_sweep,
            Duration::from_secs(600),
        ),
    ));
    assert_eq!(SWEEP_PERTURBATIONS, 64);

    results.push(("CLI determinism: same seed gives byte-identical CSV", determinism()));

    let mut failed = 0;
    for (name, o) in &results {
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} criteria, {failed} failed", results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("bekenstein-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |name: &str| {
        let out = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_bekenstein"))
            .args(["sweep", "--n", "64,128", "--r", "0.5,1", "--alpha", "0.05,0.1,0.2", "--samples", "10", "--seed", "7", "--out"])
            .arg(&out)
            .stderr(Stdio::null())
            .status()
            .unwrap();
        (status.code(), std::fs::read(&out).unwrap_or_default())
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    let _ = std::fs::remove_dir_all(&dir);
    Outcome {
        pass: a.0 == Some(0) && b.0 == Some(0) && !a.1.is_empty() && a.1 == b.1,
        detail: format!("{} bytes, exit codes {:?}/{:?}", a.1.len(), a.0, b.0),
    }
}
