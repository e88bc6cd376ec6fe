use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{bessel_i_scaled, erf, erfc, taylor_by_differences};

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("time must be positive, got {t}")))
    }
}

/// Linear-homotopy Burgers solution on the line from the point-mass IC
/// whose `δ → 0` limit is `√(R_e/(πt)) e^{-R_e(x-vt)²/4t}`.
pub fn burgers_delta_exact(t: f64, x: f64, delta: f64, v: f64, reynolds: f64) -> Result<f64> {
    check_time(t)?;
    let s = (t / reynolds).sqrt();
    let xi = (x - (1.0 - delta) * v * t) / (2.0 * s);
    let g = (-xi * xi).exp();
    let root = (PI * reynolds * t).sqrt();
    let dr = delta * reynolds;
    if dr.abs() < 1e-300 {
        return Ok(2.0 * reynolds * g / (root * 2.0));
    }
    if dr > 0.0 {
        // Divide through by e^{δR_e} so large δR_e cannot overflow.
        let em = (-dr).exp();
        let c = -(-dr).exp_m1() / delta;
        Ok(2.0 * c * g / (root * (2.0 * em + c * delta * erfc(xi))))
    } else {
        let a = dr.exp_m1() / delta;
        Ok(2.0 * a * g / (root * (2.0 + a * delta * erfc(xi))))
    }
}

/// First δ-coefficient of [`burgers_delta_exact`].
pub fn burgers_delta_u1(t: f64, x: f64, v: f64, reynolds: f64) -> Result<f64> {
    check_time(t)?;
    let y = x - v * t;
    let xi = y / (2.0 * (t / reynolds).sqrt());
    Ok((reynolds.powi(3) / (4.0 * PI * t)).sqrt() * (-xi * xi).exp() * (erf(xi) - v * y))
}

/// δ-Taylor coefficients `u_0..u_nmax` of [`burgers_delta_exact`] at `(t, x)`,
/// by high-order central differences in δ with Richardson extrapolation.
pub fn burgers_delta_taylor(
    t: f64,
    x: f64,
    v: f64,
    reynolds: f64,
    nmax: usize,
) -> Result<Vec<f64>> {
    check_time(t)?;
    // The nearest complex pole in δ sits at a distance of order π/R_e.
    let h = 0.5 / reynolds.max(1.0);
    let m = 12.max(nmax + 4);
    Ok(taylor_by_differences(
        |d| burgers_delta_exact(t, x, d, v, reynolds).unwrap_or(f64::NAN),
        nmax,
        h,
        m,
    ))
}

/// Periodic solution from `g(x) = cos²(2πx) - 1/2`, via the Bessel series of
/// the Cole–Hopf potential differentiated term by term.
///
/// `bessel_terms` caps the number of cosine modes; `None` truncates once
/// the Bessel and Gaussian factors fall below 1e-16 of the leading term.
/// Relative precision degrades like `ε·e^{|δ|R_e/8π}` at small `t`, where
/// the potential varies over that many orders of magnitude.
pub fn cosine_squared_exact(
    t: f64,
    x: f64,
    delta: f64,
    v: f64,
    reynolds: f64,
    bessel_terms: Option<usize>,
) -> Result<f64> {
    check_time(t)?;
    let shift = x - (1.0 - delta) * v * t;
    if delta == 0.0 {
        return Ok(0.5 * (4.0 * PI * shift).cos() * (-16.0 * PI * PI * t / reynolds).exp());
    }
    let z = delta * reynolds / (16.0 * PI);
    let kmax = bessel_terms.unwrap_or(64 + 4 * z.abs().ceil() as usize);
    let ik = bessel_i_scaled(z, kmax);
    let mut w = ik[0];
    let mut wx = 0.0;
    for (k, &i) in ik.iter().enumerate().skip(1) {
        let kf = k as f64;
        let damp = (-16.0 * PI * PI * kf * kf * t / reynolds).exp();
        let term = i * damp;
        if bessel_terms.is_none() && term.abs() < 1e-17 * ik[0].abs() {
            break;
        }
        let phase = 4.0 * PI * kf * (shift + 0.125);
        w += 2.0 * term * phase.cos();
        wx -= 8.0 * PI * kf * term * phase.sin();
    }
    if !(w.abs() > 0.0) {
        return Err(Error::SingularEvaluation(format!(
            "Cole-Hopf potential vanished at t={t}, x={x}"
        )));
    }
    Ok(-2.0 / (delta * reynolds) * wx / w)
}
