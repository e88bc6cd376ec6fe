use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{gauss_legendre, CompositeRule};

/// Quadrature settings for [`duhamel_reference`].
#[derive(Clone, Debug, PartialEq)]
pub struct DuhamelOptions {
    /// Point the forcing spreads from.
    pub centre: f64,
    /// Half-width of the spatial windows in units of `√(4s)` or `√(4τ)`.
    pub window: f64,
    pub time_nodes: usize,
    pub panels: usize,
    pub nodes_per_panel: usize,
}

impl Default for DuhamelOptions {
    fn default() -> Self {
        Self {
            centre: 0.0,
            window: 12.0,
            time_nodes: 48,
            panels: 8,
            nodes_per_panel: 16,
        }
    }
}

/// `∂_x` of the 1D heat kernel at time `tau`.
fn kernel_dx(tau: f64, z: f64) -> f64 {
    -z / (2.0 * tau) * (-z * z / (4.0 * tau)).exp() / (4.0 * PI * tau).sqrt()
}

/// Free-space Duhamel integral `∫_{s0}^{s1} e^{(t-s)Δ} ∂_x F(s) ds` at `x`,
/// for a flux `F(s, y)` that spreads from `opts.centre` like `√s`.
///
/// The time interval is split at `t/2`; pieces touching `0` or `t` use a
/// square-root substitution. Before `t/2` the spatial window follows the
/// forcing, after it the kernel.
pub fn duhamel_segment(
    flux: impl Fn(f64, f64) -> f64,
    s0: f64,
    s1: f64,
    t: f64,
    x: f64,
    opts: &DuhamelOptions,
) -> Result<f64> {
    if !(t > 0.0) || !(0.0 <= s0 && s0 <= s1 && s1 <= t) {
        return Err(Error::domain(format!(
            "need 0 <= s0 <= s1 <= t, got {s0}, {s1}, {t}"
        )));
    }
    let (gx, gw) = gauss_legendre(opts.time_nodes);
    let half = 0.5 * t;
    let mut pieces = Vec::new();
    if s0 < half && s1 > half {
        pieces.push((s0, half));
        pieces.push((half, s1));
    } else {
        pieces.push((s0, s1));
    }
    let mut total = 0.0;
    for (a, b) in pieces {
        if b <= a {
            continue;
        }
        // Map Gauss nodes to times s with weights ds.
        let nodes: Vec<(f64, f64)> = if a == 0.0 {
            let r = b.sqrt();
            gx.iter()
                .zip(&gw)
                .map(|(&u, &w)| {
                    let sig = 0.5 * r * (u + 1.0);
                    (sig * sig, 0.5 * r * w * 2.0 * sig)
                })
                .collect()
        } else if b == t {
            let r = (t - a).sqrt();
            gx.iter()
                .zip(&gw)
                .map(|(&u, &w)| {
                    let sig = 0.5 * r * (u + 1.0);
                    (t - sig * sig, 0.5 * r * w * 2.0 * sig)
                })
                .collect()
        } else {
            gx.iter()
                .zip(&gw)
                .map(|(&u, &w)| (a + 0.5 * (b - a) * (u + 1.0), 0.5 * (b - a) * w))
                .collect()
        };
        for (s, ws) in nodes {
            let tau = t - s;
            if !(s > 0.0) || !(tau > 0.0) {
                continue;
            }
            let inner = if s <= half {
                let scale = (4.0 * s).sqrt();
                spatial(
                    &flux,
                    s,
                    opts.centre,
                    opts.window * scale,
                    x,
                    tau,
                    opts,
                    true,
                )?
            } else {
                let scale = (4.0 * tau).sqrt();
                spatial(&flux, s, x, opts.window * scale, x, tau, opts, false)?
            };
            total += ws * inner;
        }
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn spatial(
    flux: &impl Fn(f64, f64) -> f64,
    s: f64,
    centre: f64,
    radius: f64,
    x: f64,
    tau: f64,
    opts: &DuhamelOptions,
    check_decay: bool,
) -> Result<f64> {
    let rule = CompositeRule::new(
        centre - radius,
        centre + radius,
        opts.panels,
        opts.nodes_per_panel,
        &[],
    );
    let mut acc = 0.0;
    let mut peak = 0.0f64;
    for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
        let f = flux(s, y);
        peak = peak.max(f.abs());
        acc += w * kernel_dx(tau, x - y) * f;
    }
    let edge = flux(s, centre - radius)
        .abs()
        .max(flux(s, centre + radius).abs());
    if check_decay && edge > 1e-10 * peak.max(f64::MIN_POSITIVE) && edge > 1e-300 {
        return Err(Error::domain(format!(
            "forcing does not decay within the window at s={s}: edge {edge:e}, peak {peak:e}"
        )));
    }
    Ok(acc)
}

/// Order-`n` coefficient at `(t, x)` from its divergence-form forcing flux.
pub fn duhamel_reference(
    n: usize,
    flux: impl Fn(f64, f64) -> f64,
    t: f64,
    x: f64,
    opts: &DuhamelOptions,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::arg("Duhamel reference applies to orders n >= 1"));
    }
    duhamel_segment(flux, 0.0, t, t, x, opts)
}
