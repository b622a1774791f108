//! Cubic B-splines on graded knot vectors.
//!
//! Splines are normalised to a partition of unity. A basis is a strictly
//! increasing knot vector `t_0 < ... < t_{m+3}`; spline `j` lives on
//! `[t_j, t_{j+4}]`.

use crate::linalg::c;
use crate::prelude::*;

/// Local polynomial data of one spline on one knot interval, in the
/// coordinate `s = (x - a)/w ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    /// Index of the knot interval in the basis.
    pub interval: usize,
    /// Coefficients of `f'` in powers of `s`.
    pub d1: [f64; 3],
    /// Coefficients of `f''` in powers of `s`.
    pub d2: [f64; 2],
}

/// Cox–de Boor evaluation of the `der`-th derivative of `N_{i,k}` with knots
/// `t`.
fn cox_de_boor(t: &[f64], i: usize, k: usize, der: usize, x: f64) -> f64 {
    if der > 0 {
        if k == 0 {
            return 0.0;
        }
        let kf = k as f64;
        let left = cox_de_boor(t, i, k - 1, der - 1, x) / (t[i + k] - t[i]);
        let right = cox_de_boor(t, i + 1, k - 1, der - 1, x) / (t[i + k + 1] - t[i + 1]);
        return kf * (left - right);
    }
    if k == 0 {
        return if t[i] <= x && x < t[i + 1] { 1.0 } else { 0.0 };
    }
    let a = (x - t[i]) / (t[i + k] - t[i]) * cox_de_boor(t, i, k - 1, 0, x);
    let b = (t[i + k + 1] - x) / (t[i + k + 1] - t[i + 1]) * cox_de_boor(t, i + 1, k - 1, 0, x);
    a + b
}

/// Value (or derivative) of the cubic B-spline with knots `t[0..5]`.
pub fn eval(t: &[f64], x: f64, der: usize) -> f64 {
    cox_de_boor(&t[..5], 0, 3, der, x)
}

/// `∫ N(x) e^{ipx} dx` for the cubic B-spline with knots `t[0..5]`.
///
/// Small `p · span` uses the power series in complete homogeneous symmetric
/// polynomials of the centred, scaled knots; larger values use the divided
/// difference of `e^{ipt}`.
pub fn fourier(t: &[f64], p: f64) -> C64 {
    const K: usize = 3;
    let span = t[4] - t[0];
    let centre = t.iter().take(5).sum::<f64>() / 5.0;
    let ts: [f64; 5] = core::array::from_fn(|i| t[i] - centre);
    let scale = span / (K as f64 + 1.0);
    let z = p * span;
    let value = if z.abs() < 4.0 {
        const TERMS: usize = 60;
        let mut h = [0.0f64; TERMS + 1];
        h[0] = 1.0;
        for tv in ts.iter() {
            let u = tv / span;
            for m in 1..=TERMS {
                h[m] += u * h[m - 1];
            }
        }
        let mut acc = C64::new(0.0, 0.0);
        let mut term = C64::new(1.0, 0.0);
        let iz = c(0.0, z);
        // (K+1)! / (m+K+1)!, updated incrementally.
        let mut ratio = 1.0;
        for (m, hm) in h.iter().enumerate() {
            acc += term * (hm * ratio);
            term *= iz;
            ratio /= (m + K + 2) as f64;
        }
        acc
    } else {
        let mut s = C64::new(0.0, 0.0);
        for j in 0..5 {
            let den: f64 = (0..5).filter(|&l| l != j).map(|l| ts[j] - ts[l]).product();
            s += c(0.0, p * ts[j]).exp() / den;
        }
        let fact = 24.0;
        s * fact / c(0.0, p).powu(K as u32 + 1)
    };
    value * scale * c(0.0, p * centre).exp()
}

/// Cubic spline basis on a strictly increasing knot vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineBasis {
    knots: Vec<f64>,
}

impl SplineBasis {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 5 {
            return Err(Error::Input(format!("need at least 5 knots, got {}", knots.len())));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) || knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::Input("knots must be finite and strictly increasing".into()));
        }
        Ok(SplineBasis { knots })
    }

    /// `m` splines on `(a, ∞)`: knots `a` and `a + ℓ e^{-Y + (j-1) h}`,
    /// `j = 1, ..., m + 3`, with `h = 2Y/(m + 2)`.
    pub fn half_line_right(a: f64, m: usize, y: f64, ell: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::Input("half-line basis needs at least one spline".into()));
        }
        let h = 2.0 * y / (m as f64 + 2.0);
        let mut knots = Vec::with_capacity(m + 4);
        knots.push(a);
        for j in 1..=m + 3 {
            knots.push(a + ell * (-y + (j as f64 - 1.0) * h).exp());
        }
        SplineBasis::new(knots)
    }

    /// Mirror image of [`SplineBasis::half_line_right`] on `(-∞, a)`.
    pub fn half_line_left(a: f64, m: usize, y: f64, ell: f64) -> Result<Self> {
        Ok(SplineBasis::half_line_right(a, m, y, ell)?.mirror(a))
    }

    /// `m` splines inside `(a, b)` with knots `c + R tanh(y_j / 2)`,
    /// `y_j = -Y + j h`, `h = 2Y/(m + 3)`.
    pub fn interval(a: f64, b: f64, m: usize, y: f64) -> Result<Self> {
        if !(b > a) {
            return Err(Error::Input(format!("empty interval ({a}, {b})")));
        }
        let (centre, r) = ((a + b) / 2.0, (b - a) / 2.0);
        let h = 2.0 * y / (m as f64 + 3.0);
        let knots = (0..m + 4).map(|j| centre + r * ((-y + j as f64 * h) / 2.0).tanh()).collect();
        SplineBasis::new(knots)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn len(&self) -> usize {
        self.knots.len() - 4
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Knots of spline `j`.
    pub fn spline(&self, j: usize) -> &[f64] {
        &self.knots[j..j + 5]
    }

    /// Convex hull of the supports.
    pub fn support(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    /// Greville abscissa (mean of the three interior knots) of spline `j`.
    pub fn greville(&self, j: usize) -> f64 {
        (self.knots[j + 1] + self.knots[j + 2] + self.knots[j + 3]) / 3.0
    }

    pub fn translate(&self, dx: f64) -> Self {
        SplineBasis { knots: self.knots.iter().map(|k| k + dx).collect() }
    }

    /// Image under `x ↦ a + λ (x - a)`, `λ > 0`.
    pub fn dilate_about(&self, a: f64, lambda: f64) -> Self {
        SplineBasis { knots: self.knots.iter().map(|k| a + lambda * (k - a)).collect() }
    }

    /// Image under `x ↦ 2a - x`; spline order is reversed.
    pub fn mirror(&self, a: f64) -> Self {
        SplineBasis { knots: self.knots.iter().rev().map(|k| 2.0 * a - k).collect() }
    }

    /// `Σ_j c_j N_j(x)` (or a derivative).
    pub fn eval(&self, coeffs: &[f64], x: f64, der: usize) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x >= hi {
            return 0.0;
        }
        let r = self.knots.partition_point(|k| *k <= x).saturating_sub(1);
        let first = r.saturating_sub(3);
        let last = r.min(self.len() - 1);
        (first..=last).map(|j| coeffs[j] * eval(self.spline(j), x, der)).sum()
    }

    /// Local polynomials of `N_j'` and `N_j''` on the four knot intervals of
    /// spline `j`.
    pub fn pieces(&self, j: usize) -> [Piece; 4] {
        let t = self.spline(j);
        core::array::from_fn(|r| {
            let (a, b) = (t[r], t[r + 1]);
            let w = b - a;
            // Evaluate strictly inside the interval; the pieces are
            // polynomials so interior samples determine them exactly.
            let at = |s: f64, der: usize| eval(t, a + s * w, der);
            let (y0, y1, y2) = (at(0.125, 1), at(0.5, 1), at(0.875, 1));
            // Quadratic through s = 1/8, 1/2, 7/8.
            let d1 = quadratic_through([0.125, 0.5, 0.875], [y0, y1, y2]);
            let (z0, z1) = (at(0.25, 2), at(0.75, 2));
            let slope = (z1 - z0) / 0.5;
            let d2 = [z0 - 0.25 * slope, slope];
            Piece { interval: j + r, d1, d2 }
        })
    }

    /// Fourier amplitudes `f̂_j(p)` for all splines, as a `len × p.len()`
    /// matrix.
    pub fn fourier_matrix(&self, p: &[f64]) -> CMat {
        CMat::from_fn(self.len(), p.len(), |j, k| fourier(self.spline(j), p[k]))
    }
}

/// Coefficients `[c0, c1, c2]` of the quadratic through three points.
fn quadratic_through(s: [f64; 3], y: [f64; 3]) -> [f64; 3] {
    let [s0, s1, s2] = s;
    let [y0, y1, y2] = y;
    let l = |yk: f64, sa: f64, sb: f64, sk: f64| yk / ((sk - sa) * (sk - sb));
    let (a0, a1, a2) = (l(y0, s1, s2, s0), l(y1, s0, s2, s1), l(y2, s0, s1, s2));
    let c2 = a0 + a1 + a2;
    let c1 = -(a0 * (s1 + s2) + a1 * (s0 + s2) + a2 * (s0 + s1));
    let c0 = a0 * s1 * s2 + a1 * s0 * s2 + a2 * s0 * s1;
    [c0, c1, c2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_unity() {
        let b = SplineBasis::new((0..12).map(|k| (k as f64 * 0.3).exp()).collect()).unwrap();
        let ones = vec![1.0; b.len()];
        let (lo, hi) = (b.knots()[3], b.knots()[b.len()]);
        for k in 0..20 {
            let x = lo + (hi - lo) * (k as f64 + 0.5) / 20.0;
            assert!((b.eval(&ones, x, 0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pieces_reproduce_derivatives() {
        let b = SplineBasis::interval(-1.0, 1.0, 10, 6.0).unwrap();
        for j in [0, 4, 9] {
            let t = b.spline(j);
            for p in b.pieces(j) {
                let (a, w) = (b.knots()[p.interval], b.knots()[p.interval + 1] - b.knots()[p.interval]);
                for &s in &[0.05, 0.3, 0.95] {
                    let x = a + s * w;
                    let d1 = p.d1[0] + p.d1[1] * s + p.d1[2] * s * s;
                    let d2 = p.d2[0] + p.d2[1] * s;
                    let scale = eval(t, b.greville(j), 1).abs().max(1.0);
                    assert!((d1 - eval(t, x, 1)).abs() < 1e-9 * scale);
                    assert!((d2 - eval(t, x, 2)).abs() < 1e-7 * scale / w.min(1.0));
                }
            }
        }
    }

    #[test]
    fn fourier_at_zero_is_mass() {
        let t = [0.0, 0.5, 1.5, 2.0, 3.5];
        let mass = (t[4] - t[0]) / 4.0;
        assert!((fourier(&t, 0.0) - C64::new(mass, 0.0)).norm() < 1e-14);
        // Series and divided-difference branches agree near the switch.
        let p = 4.0 / (t[4] - t[0]);
        let below = fourier(&t, p * (1.0 - 1e-9));
        let above = fourier(&t, p * (1.0 + 1e-9));
        assert!((below - above).norm() < 1e-8);
    }
}
