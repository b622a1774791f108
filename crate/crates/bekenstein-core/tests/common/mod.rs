//! Oracles shared by the integration tests. They avoid the crate's own
//! spectral routines.
#![allow(dead_code)]

use bekenstein_core::linalg::op_norm;
use bekenstein_core::{CMat, CVec};

/// Matrix logarithm by inverse scaling and squaring: Denman–Beavers square
/// roots until the matrix is close to the identity, then the series of
/// `log(I + X)`. No eigen-decomposition involved.
pub fn oracle_log(a: &CMat) -> CMat {
    let n = a.nrows();
    let id = CMat::identity(n, n);
    let mut y = a.clone();
    let mut k = 0;
    while op_norm(&(&y - &id)) > 0.05 {
        let mut z = id.clone();
        for _ in 0..60 {
            let yi = y.clone().try_inverse().unwrap();
            let zi = z.clone().try_inverse().unwrap();
            let y_next = (&y + zi).scale(0.5);
            z = (&z + yi).scale(0.5);
            let done = op_norm(&(&y_next - &y)) < 1e-15 * op_norm(&y_next);
            y = y_next;
            if done {
                break;
            }
        }
        k += 1;
    }
    let x = &y - &id;
    let mut term = x.clone();
    let mut sum = CMat::zeros(n, n);
    for j in 1..60 {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        sum += term.scale(sign / j as f64);
        term = &term * &x;
    }
    sum.scale((1u64 << k) as f64)
}

pub fn oracle_log_form(xi: &CVec, a: &CMat) -> f64 {
    xi.dotc(&(oracle_log(a) * xi)).re
}


/// `Tr ρ (log ρ - log σ)` for faithful `ρ`, `σ`.
pub fn oracle_relative_entropy(rho: &CMat, sigma: &CMat) -> f64 {
    (rho * (oracle_log(rho) - oracle_log(sigma))).trace().re
}
