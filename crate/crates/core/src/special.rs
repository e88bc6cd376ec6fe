//! Special functions and quadrature rules used by the closed-form references.

use std::f64::consts::PI;

pub use statrs::function::beta::{beta, ln_beta};
pub use statrs::function::erf::{erf, erfc};
pub use statrs::function::gamma::{gamma, ln_gamma};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponentially scaled modified Bessel functions `e^{-|z|} I_k(z)` for `k = 0..=kmax`.
///
/// Miller's backward recurrence normalized by `I_0 + 2 Σ_{k≥1} I_k = e^z`.
pub fn bessel_i_scaled(z: f64, kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    if z == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let a = z.abs();
    let start = (kmax.max(a.ceil() as usize) + 40 + (8.0 * a.sqrt()) as usize) | 1;
    let mut next = 0.0; // I_{k+1}
    let mut cur = 1e-300; // I_k
    let mut sum = 0.0;
    for k in (1..=start).rev() {
        let prev = next + 2.0 * k as f64 / a * cur; // I_{k-1}
        if k <= kmax {
            out[k] = cur;
        }
        sum += 2.0 * cur;
        next = cur;
        cur = prev;
        if cur > 1e250 {
            // Rescale to stay in range.
            let s = 1e-250;
            cur *= s;
            next *= s;
            sum *= s;
            out.iter_mut().for_each(|v| *v *= s);
        }
    }
    out[0] = cur;
    sum += cur;
    // sum ≈ e^{a}·scale; dividing gives e^{-a} I_k(a).
    for v in out.iter_mut() {
        *v /= sum;
    }
    if z < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite Gauss–Legendre rule over `[a, b]` with panels split at `breaks`.
#[derive(Clone, Debug)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(a: f64, b: f64, panels: usize, per_panel: usize, breaks: &[f64]) -> Self {
        let (gx, gw) = gauss_legendre(per_panel);
        let mut cuts: Vec<f64> = (0..=panels)
            .map(|i| a + (b - a) * i as f64 / panels as f64)
            .collect();
        cuts.extend(breaks.iter().copied().filter(|&c| c > a && c < b));
        cuts.sort_by(|p, q| p.total_cmp(q));
        cuts.dedup_by(|p, q| (*p - *q).abs() < 1e-14 * (b - a));
        let mut nodes = Vec::with_capacity(cuts.len() * per_panel);
        let mut weights = Vec::with_capacity(cuts.len() * per_panel);
        for pair in cuts.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Self { nodes, weights }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Finite-difference weights for derivatives `0..=order` at `z` on the
/// given stencil (Fornberg's recursion). Entry `[d][j]` weights node `j`.
pub fn fornberg_weights(z: f64, nodes: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Taylor coefficients `f^(n)(0)/n!`, `n = 0..=nmax`, by central differences
/// on `2m+1` points with step `h`, Richardson-extrapolated against step `h/2`.
pub fn taylor_by_differences(f: impl Fn(f64) -> f64, nmax: usize, h: f64, m: usize) -> Vec<f64> {
    let stencil = |step: f64| -> Vec<f64> {
        let nodes: Vec<f64> = (-(m as i64)..=m as i64).map(|j| j as f64 * step).collect();
        let vals: Vec<f64> = nodes.iter().map(|&d| f(d)).collect();
        let w = fornberg_weights(0.0, &nodes, nmax);
        w.iter()
            .map(|row| row.iter().zip(&vals).map(|(a, b)| a * b).sum())
            .collect()
    };
    let coarse = stencil(h);
    let fine = stencil(0.5 * h);
    let mut fact = 1.0;
    (0..=nmax)
        .map(|n| {
            if n > 0 {
                fact *= n as f64;
            }
            // Central stencils of 2m+1 points are accurate to an even order.
            let raw = 2 * m + 1 - n.min(2 * m);
            let p = (raw + raw % 2) as i32;
            let r = 2f64.powi(p);
            ((r * fine[n] - coarse[n]) / (r - 1.0)) / fact
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_known_values() {
        // I_0(1) = 1.2660658777520082, I_1(1) = 0.5651591039924851, I_3(10) = 1758.380716610853
        let s = bessel_i_scaled(1.0, 3);
        let e = 1f64.exp();
        assert!((s[0] * e - 1.2660658777520082).abs() < 1e-14);
        assert!((s[1] * e - 0.5651591039924851).abs() < 1e-14);
        let t = bessel_i_scaled(10.0, 5);
        assert!((t[3] * 10f64.exp() / 1758.380716610853 - 1.0).abs() < 1e-13);
        let neg = bessel_i_scaled(-10.0, 5);
        assert_eq!(neg[3], -t[3]);
        assert_eq!(neg[2], t[2]);
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn fornberg_second_derivative() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
    }

    #[test]
    fn taylor_of_exponential() {
        let c = taylor_by_differences(|d| (2.0 * d).exp(), 6, 0.25, 10);
        let mut want = 1.0;
        for (n, v) in c.iter().enumerate() {
            if n > 0 {
                want *= 2.0 / n as f64;
            }
            assert!((v - want).abs() < 1e-9, "n={n}: {v} vs {want}");
        }
    }
}
