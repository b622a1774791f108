//! Position-space Gram matrices of spline bases.
//!
//! For real test functions with `∫ f' = 0` the one-particle inner product of
//! the current, damped by `e^{-τP}`, is
//!
//! `<f, e^{-τP} g> = -∫∫ f'(x) g'(y) Λ_τ(x - y) dx dy`,  `Λ_τ(v) = log(τ + iv)`.
//!
//! Both derivatives are piecewise quadratic, so everything reduces to the
//! moments `∫_I ∫_J s^i t^j Λ_τ(x - y)` over pairs of knot intervals. These
//! are evaluated exactly by repeated integration by parts when the intervals
//! are close and of comparable width, by tensor Gauss–Legendre when they are
//! well separated (relative to `τ` as well), and by bisecting the wider one
//! otherwise.

// The 3x3 moment tables read more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

use super::spline::SplineBasis;
use crate::linalg::c;
use crate::prelude::*;
use crate::quad::gauss_legendre;

type Moments = [[C64; 3]; 3];

const GAUSS_ORDER: usize = 10;
const MAX_DEPTH: usize = 80;

#[derive(Debug, Clone, Copy)]
struct Span {
    a: f64,
    w: f64,
}

impl Span {
    fn halves(self) -> (Span, Span) {
        let h = self.w / 2.0;
        (Span { a: self.a, w: h }, Span { a: self.a + h, w: h })
    }
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    fn unit(n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        Rule { nodes: x.iter().map(|t| 0.5 * (t + 1.0)).collect(), weights: w.iter().map(|v| 0.5 * v).collect() }
    }
}

/// `Λ^{[n]}`, the `n`-fold antiderivative `(1/i)^n z^n/n! (log z - H_n)`,
/// `z = τ + iv`. Vanishes at `z = 0`.
fn lambda_anti(n: usize, tau: f64, v: f64) -> C64 {
    let z = c(tau, v);
    if z.norm() == 0.0 {
        return c(0.0, 0.0);
    }
    let mut harmonic = 0.0;
    let mut fact = 1.0;
    for k in 1..=n {
        harmonic += 1.0 / k as f64;
        fact *= k as f64;
    }
    let minus_i_pow = match n % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, -1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, 1.0),
    };
    minus_i_pow * z.powu(n as u32) / fact * (z.ln() - harmonic)
}

fn falling(i: usize, k: usize) -> f64 {
    (0..k).map(|r| (i - r) as f64).product()
}

/// Exact moments by the corner formula
/// `-Σ_{k,l} (-1)^k [[P^{(k)}(x) Q^{(l)}(y) Λ^{[k+l+2]}(x - y)]]`.
fn corner(x: Span, y: Span, tau: f64) -> Moments {
    let mut table = [[[c(0.0, 0.0); 7]; 2]; 2];
    for (ci, &sx) in [0.0, 1.0].iter().enumerate() {
        for (cj, &ty) in [0.0, 1.0].iter().enumerate() {
            let v = (x.a + sx * x.w) - (y.a + ty * y.w);
            for n in 2..=6 {
                table[ci][cj][n] = lambda_anti(n, tau, v);
            }
        }
    }
    let mut out = [[c(0.0, 0.0); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let mut acc = c(0.0, 0.0);
            for k in 0..=i {
                for l in 0..=j {
                    let coef = falling(i, k) * falling(j, l) / (x.w.powi(k as i32) * y.w.powi(l as i32));
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let mut bracket = c(0.0, 0.0);
                    for (ci, &sx) in [0.0f64, 1.0].iter().enumerate() {
                        for (cj, &ty) in [0.0f64, 1.0].iter().enumerate() {
                            let corner_sign = if ci == cj { 1.0 } else { -1.0 };
                            let pv = sx.powi((i - k) as i32) * ty.powi((j - l) as i32);
                            bracket += table[ci][cj][k + l + 2] * (corner_sign * pv);
                        }
                    }
                    acc += bracket * (sign * coef);
                }
            }
            *slot = -acc;
        }
    }
    out
}

fn gauss(x: Span, y: Span, tau: f64, rule: &Rule) -> Moments {
    let mut out = [[c(0.0, 0.0); 3]; 3];
    for (&s, &ws) in rule.nodes.iter().zip(&rule.weights) {
        let xv = x.a + s * x.w;
        for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let l = c(tau, xv - (y.a + t * y.w)).ln() * (ws * wt * x.w * y.w);
            let sp = [1.0, s, s * s];
            let tp = [1.0, t, t * t];
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] += l * (sp[i] * tp[j]);
                }
            }
        }
    }
    out
}

/// Rows `i` of the re-expansion `s^i = Σ_k T[i][k] s'^k` for `s = s'/2`
/// (left half) and `s = (1 + s')/2` (right half).
const LEFT: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.25]];
const RIGHT: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.5, 0.5, 0.0], [0.25, 0.5, 0.25]];

fn moments(x: Span, y: Span, tau: f64, rule: &Rule, depth: usize) -> Moments {
    let wide = x.w.max(y.w);
    let narrow = x.w.min(y.w);
    let dist = (y.a - (x.a + x.w)).max(x.a - (y.a + y.w)).max(0.0);
    if dist + tau >= wide {
        return gauss(x, y, tau, rule);
    }
    if wide <= 2.0 * narrow || depth >= MAX_DEPTH {
        return corner(x, y, tau);
    }
    let mut out = [[c(0.0, 0.0); 3]; 3];
    if x.w >= y.w {
        let (x1, x2) = x.halves();
        let (m1, m2) = (moments(x1, y, tau, rule, depth + 1), moments(x2, y, tau, rule, depth + 1));
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j] += m1[k][j] * LEFT[i][k] + m2[k][j] * RIGHT[i][k];
                }
            }
        }
    } else {
        let (y1, y2) = y.halves();
        let (m1, m2) = (moments(x, y1, tau, rule, depth + 1), moments(x, y2, tau, rule, depth + 1));
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    out[i][j] += m1[i][l] * LEFT[j][l] + m2[i][l] * RIGHT[j][l];
                }
            }
        }
    }
    out
}

/// `∫_I ∫_J s^i t^j log(τ + i(x - y)) dy dx` with local coordinates
/// `s = (x - a)/(b - a)`, `t = (y - c)/(d - c)`, for `i, j ≤ 2`.
pub fn log_moments(interval_x: (f64, f64), interval_y: (f64, f64), tau: f64) -> [[C64; 3]; 3] {
    let rule = Rule::unit(GAUSS_ORDER);
    let x = Span { a: interval_x.0, w: interval_x.1 - interval_x.0 };
    let y = Span { a: interval_y.0, w: interval_y.1 - interval_y.0 };
    moments(x, y, tau, &rule, 0)
}

fn spans(b: &SplineBasis) -> Vec<Span> {
    b.knots().windows(2).map(|w| Span { a: w[0], w: w[1] - w[0] }).collect()
}

fn moment_table(a: &SplineBasis, b: &SplineBasis, tau: f64) -> Vec<Vec<Moments>> {
    let rule = Rule::unit(GAUSS_ORDER);
    let (sa, sb) = (spans(a), spans(b));
    sa.iter().map(|&x| sb.iter().map(|&y| moments(x, y, tau, &rule, 0)).collect()).collect()
}

/// `G_jk = <f_j, e^{-τP} g_k>` for spline bases `f` and `g`, `τ ≥ 0`.
pub fn gram(a: &SplineBasis, b: &SplineBasis, tau: f64) -> Result<CMat> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("damping τ = {tau} must be finite and ≥ 0")));
    }
    let table = moment_table(a, b, tau);
    let pa: Vec<_> = (0..a.len()).map(|j| a.pieces(j)).collect();
    let pb: Vec<_> = (0..b.len()).map(|k| b.pieces(k)).collect();
    Ok(CMat::from_fn(a.len(), b.len(), |j, k| {
        let mut acc = c(0.0, 0.0);
        for p in &pa[j] {
            for q in &pb[k] {
                let m = &table[p.interval][q.interval];
                for (i, pi) in p.d1.iter().enumerate() {
                    for (l, ql) in q.d1.iter().enumerate() {
                        acc += m[i][l] * (pi * ql);
                    }
                }
            }
        }
        -acc
    }))
}

/// `E_jk = <f_j, P g_k>`.
///
/// The real part is `π ∫ f' g'`; the imaginary part is
/// `∫∫ f''(x) g'(y) log|x - y|`.
pub fn energy(a: &SplineBasis, b: &SplineBasis) -> CMat {
    let table = moment_table(a, b, 0.0);
    let (sa, sb) = (spans(a), spans(b));
    let (nodes, weights) = gauss_legendre(4);
    let pa: Vec<_> = (0..a.len()).map(|j| a.pieces(j)).collect();
    let pb: Vec<_> = (0..b.len()).map(|k| b.pieces(k)).collect();
    let poly = |d: &[f64; 3], s: f64| d[0] + s * (d[1] + s * d[2]);
    CMat::from_fn(a.len(), b.len(), |j, k| {
        let (mut re, mut im) = (0.0, 0.0);
        for p in &pa[j] {
            let x = sa[p.interval];
            for q in &pb[k] {
                let y = sb[q.interval];
                let lo = x.a.max(y.a);
                let hi = (x.a + x.w).min(y.a + y.w);
                if hi > lo {
                    let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
                    for (&n, &w) in nodes.iter().zip(&weights) {
                        let z = mid + half * n;
                        re += w * half * poly(&p.d1, (z - x.a) / x.w) * poly(&q.d1, (z - y.a) / y.w);
                    }
                }
                let m = &table[p.interval][q.interval];
                for (i, pi) in p.d2.iter().enumerate() {
                    for (l, ql) in q.d1.iter().enumerate() {
                        im += m[i][l].re * (pi * ql);
                    }
                }
            }
        }
        c(core::f64::consts::PI * re, im)
    })
}
