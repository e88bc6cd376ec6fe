use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{gamma, ln_beta, EULER_GAMMA};

fn radius(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `r² ln r` with the value 0 at `r = 0`.
fn r2_ln_r(r: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else {
        r * r * r.ln()
    }
}

fn check_ball(p: f64, r: f64) -> Result<()> {
    if !(p > 1.0) {
        return Err(Error::domain(format!("p must exceed 1, got {p}")));
    }
    if !(r <= 1.0 + 1e-12) {
        return Err(Error::domain(format!(
            "|x| = {r} lies outside the unit ball"
        )));
    }
    Ok(())
}

/// Weak solution of `Δ_p u = -1` on the unit ball with zero boundary data.
pub fn plap_ball_exact(p: f64, d: usize, x: &[f64]) -> Result<f64> {
    let r = radius(x);
    check_ball(p, r)?;
    let df = d as f64;
    Ok((p - 1.0) / (p * df.powf(1.0 / (p - 1.0))) * (1.0 - r.min(1.0).powf(p / (p - 1.0))))
}

/// The radial profile of [`plap_ball_exact`] at any point, including `|x| > 1`.
///
/// It solves `Δ_p u = -1` wherever it is evaluated and supplies boundary data
/// for domains other than the ball.
pub fn plap_radial_exact(p: f64, d: usize, x: &[f64]) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::domain(format!("p must exceed 1, got {p}")));
    }
    let df = d as f64;
    Ok((p - 1.0) / (p * df.powf(1.0 / (p - 1.0))) * (1.0 - radius(x).powf(p / (p - 1.0))))
}

/// First coefficient of the ball solution in the ordinary parameter `p - 2`.
pub fn plap_ball_u1(d: usize, x: &[f64]) -> Result<f64> {
    let r = radius(x);
    check_ball(2.0, r)?;
    let df = d as f64;
    let r = r.min(1.0);
    Ok(((1.0 + (df * df).ln()) * (1.0 - r * r) + 2.0 * r2_ln_r(r)) / (4.0 * df))
}

/// Coefficient `u_n'` of the ball solution (`d = 1`) in the dual parameter `p' - 2`.
pub fn plap_ball_dual_un(n: usize, x: f64) -> Result<f64> {
    let r = x.abs();
    check_ball(2.0, r)?;
    let r = r.min(1.0);
    if n == 0 {
        return Ok(0.5 * (1.0 - r * r));
    }
    let sign = |j: usize| if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let head = sign(n) / 2f64.powi(n as i32 + 1);
    if r == 0.0 {
        return Ok(head);
    }
    let l = r.ln();
    let mut sum = 0.0;
    let mut lk = 1.0; // ln^k r / k!
    for k in 0..=n {
        if k > 0 {
            lk *= l / k as f64;
        }
        sum += sign(n - k) * lk / 2f64.powi((n - k) as i32);
    }
    Ok(head - 0.5 * r * r * sum)
}

/// Gaussian heat kernel `(4πt)^{-d/2} e^{-|x|²/4t}`.
pub fn heat_kernel(t: f64, x: &[f64]) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    let r2: f64 = x.iter().map(|v| v * v).sum();
    Ok((4.0 * PI * t).powf(-(x.len() as f64) / 2.0) * (-r2 / (4.0 * t)).exp())
}

/// Constants of the self-similar fundamental solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BarenblattConstants {
    pub k: f64,
    pub q: f64,
    pub c: f64,
    pub lambda: f64,
}

/// `k_p, q_p, c_p, λ_p` for `p ≠ 2` with `p > 2d/(1+d)`.
pub fn barenblatt_constants(p: f64, d: usize) -> Result<BarenblattConstants> {
    let df = d as f64;
    if !(p > 2.0 * df / (1.0 + df)) || !p.is_finite() {
        return Err(Error::domain(format!(
            "p = {p} must exceed 2d/(1+d) = {}",
            2.0 * df / (1.0 + df)
        )));
    }
    if p == 2.0 {
        return Err(Error::domain(
            "p = 2 has no Barenblatt constants; use the heat kernel",
        ));
    }
    let k = 1.0 / (p - 2.0 + p / df);
    let q = (p - 2.0) / p * (k / df).powf(1.0 / (p - 1.0));
    let lambda = p * (p - 2.0) * k / (df * (p - 1.0));
    let pc = p / (p - 1.0);
    let sphere = 2.0 * PI.powf(df / 2.0) / gamma(df / 2.0);
    let lb = if p > 2.0 {
        ln_beta(df / pc, 1.0 + 1.0 / (2.0 - pc))
    } else {
        ln_beta(df / pc, 1.0 / (pc - 2.0) - df / pc)
    };
    let ln_c = (p - 2.0) * k * q.abs().ln() + lambda * (pc.ln() - sphere.ln() - lb);
    Ok(BarenblattConstants {
        k,
        q,
        c: ln_c.exp(),
        lambda,
    })
}

/// Support radius `(c_p/q_p)^{(p-1)/p} t^{k_p/d}` for `p > 2`.
pub fn barenblatt_support_radius(p: f64, d: usize, t: f64) -> Result<f64> {
    if !(p > 2.0) {
        return Err(Error::domain("compact support needs p > 2"));
    }
    let bc = barenblatt_constants(p, d)?;
    Ok((bc.c / bc.q).powf((p - 1.0) / p) * t.powf(bc.k / d as f64))
}

/// Fundamental solution `H_p(t, x)` of the p-Laplacian evolution (heat kernel at `p = 2`).
pub fn barenblatt(p: f64, d: usize, t: f64, x: &[f64]) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    if x.len() != d {
        return Err(Error::arg(format!(
            "point has {} coordinates, expected {d}",
            x.len()
        )));
    }
    if p == 2.0 {
        return heat_kernel(t, x);
    }
    let bc = barenblatt_constants(p, d)?;
    let s = t.powf(-bc.k / d as f64) * radius(x);
    let base = bc.c - bc.q * s.powf(p / (p - 1.0));
    if base <= 0.0 {
        return Ok(0.0);
    }
    Ok(t.powf(-bc.k) * base.powf((p - 1.0) / (p - 2.0)))
}

/// First ordinary-series coefficient `∂_p H_p |_{p=2}` in one dimension.
pub fn barenblatt_u1(t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    let x2 = x * x;
    // 4x²t·ln(16πt³/x²) with its x → 0 limit.
    let log_term = if x == 0.0 {
        0.0
    } else {
        4.0 * x2 * t * ((16.0 * PI * t.powi(3)).ln() - x2.ln() - 1.0)
    };
    let poly =
        x2 * x2 + log_term - 4.0 * t * t * ((256.0 * PI * PI).ln() + 2.0 * EULER_GAMMA - 3.0);
    let kernel = (-x2 / (4.0 * t)).exp() / (4.0 * PI * t).sqrt();
    Ok((t.sqrt().ln() - poly / (32.0 * t * t)) * kernel)
}
