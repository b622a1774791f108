//! Grid refinement study of the half-line dilation residual.

use crate::config::{ExperimentConfig, Suite};
use crate::error::{CliError, Result};
use crate::record::{ExperimentRecord, Key};
use crate::suites::build_nets;

/// Largest admissible log-log slope of `tol(N)`.
pub const MAX_SLOPE: f64 = -0.5;

/// Consecutive residuals must shrink by at least this factor.
pub const MAX_RATIO: f64 = 1.0 - 1e-6;

/// Grid sizes used when none are configured.
pub const DEFAULT_SIZES: [usize; 4] = [64, 128, 256, 512];

/// Per-N tolerances and the fitted slope.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// `(N, tol(N))`, ascending in `N`.
    pub points: Vec<(usize, f64)>,
    pub slope: f64,
    pub decreasing: bool,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.decreasing && self.slope <= MAX_SLOPE
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Sorted distinct sizes; fewer than three is a usage error.
pub fn sizes(cfg: &ExperimentConfig) -> Result<Vec<usize>> {
    let mut ns = cfg.n.clone();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(CliError::Usage(format!("convergence needs at least 3 distinct grid sizes, got {ns:?}")));
    }
    Ok(ns)
}

/// Evaluate `tol(N)` on every size. `inject` replaces the measured values
/// by a constant (negative control).
pub fn run_convergence(cfg: &ExperimentConfig, inject: Option<f64>) -> Result<(Vec<ExperimentRecord>, ConvergenceReport)> {
    let ns = sizes(cfg)?;
    let mut points = Vec::with_capacity(ns.len());
    for (n, net) in build_nets(&ns) {
        let tol = match inject {
            Some(v) => v,
            None => net?.tol(),
        };
        points.push((n, tol));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(n, t)| (n as f64, t)).collect();
    let slope = loglog_slope(&xy);
    let mut records: Vec<ExperimentRecord> = points
        .iter()
        .map(|&(n, t)| ExperimentRecord::new(Key::new(Suite::Chiralnet, n, 0), "convergence_tol", t, f64::NAN, 0.0, 0.0))
        .collect();
    let mut decreasing = true;
    for w in points.windows(2) {
        let ratio = w[1].1 / w[0].1;
        let rec = ExperimentRecord::new(Key::new(Suite::Chiralnet, w[1].0, 0), "convergence_ratio", ratio, MAX_RATIO, MAX_RATIO - ratio, 0.0);
        decreasing &= rec.pass;
        records.push(rec);
    }
    records.push(ExperimentRecord::new(Key::new(Suite::Chiralnet, 0, 0), "convergence_slope", slope, MAX_SLOPE, MAX_SLOPE - slope, 0.0));
    Ok((records, ConvergenceReport { points, slope, decreasing }))
}
