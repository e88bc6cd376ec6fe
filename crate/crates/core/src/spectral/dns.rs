use log::warn;

use super::forcing::ForcingSpec;
use crate::error::{Error, Result};

/// Blow-up threshold for the explicit baseline.
pub const DNS_BLOWUP: f64 = 1e6;

/// Periodic Burgers (`δ = 1`) by centred differences and forward Euler.
///
/// Returns the solution at each requested time (rounded to the nearest step).
pub fn dns_burgers(
    g: &[f64],
    forcing: Option<&ForcingSpec>,
    dt: f64,
    t_final: f64,
    reynolds: f64,
    snapshot_times: &[f64],
) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = g.len();
    if n < 3 {
        return Err(Error::arg("DNS needs at least three grid points"));
    }
    if !(dt > 0.0) || !(reynolds > 0.0) {
        return Err(Error::arg("DNS needs positive dt and Reynolds number"));
    }
    let h = 1.0 / n as f64;
    if dt > h * h * reynolds / 2.0 {
        warn!(
            "DNS time step {dt:e} exceeds the diffusive limit {:e}",
            h * h * reynolds / 2.0
        );
    }
    let f = forcing.map(|f| f.sample(n)).unwrap_or_else(|| vec![0.0; n]);
    let steps = (t_final / dt).round() as usize;
    let mut wanted: Vec<usize> = snapshot_times
        .iter()
        .map(|&t| (t / dt).round() as usize)
        .filter(|&s| s <= steps)
        .collect();
    wanted.sort_unstable();
    wanted.dedup();

    let (c_adv, c_dif) = (dt / (2.0 * h), dt / (reynolds * h * h));
    let mut u = g.to_vec();
    let mut next = vec![0.0; n];
    let mut out = Vec::with_capacity(wanted.len());
    let mut it = wanted.into_iter().peekable();
    if it.peek() == Some(&0) {
        out.push((0.0, u.clone()));
        it.next();
    }
    for step in 1..=steps {
        for i in 0..n {
            let (l, r) = (u[(i + n - 1) % n], u[(i + 1) % n]);
            next[i] = u[i] - c_adv * u[i] * (r - l) + c_dif * (r - 2.0 * u[i] + l) + dt * f[i];
        }
        std::mem::swap(&mut u, &mut next);
        let max_abs = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(max_abs <= DNS_BLOWUP) {
            return Err(Error::Unstable { step, max_abs });
        }
        if it.peek() == Some(&step) {
            out.push((step as f64 * dt, u.clone()));
            it.next();
        }
    }
    Ok(out)
}
