//! Error norms, convergence rates, plateau detection and energy spectra.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridField};
use crate::spectral::{fft_forward, wavenumber};

/// Which discrete norm [`error_metric`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    #[serde(rename = "linf")]
    Max,
}

/// Discrete `L^q` norm of `approx - exact` (grid quadrature weights for `q < ∞`).
pub fn error_metric(approx: &GridField, exact: &GridField, norm: Norm) -> Result<f64> {
    approx.grid().check_same(exact.grid())?;
    let diff = approx
        .values()
        .iter()
        .zip(exact.values())
        .map(|(a, b)| (a - b).abs());
    Ok(match norm {
        Norm::Max => diff.fold(0.0, f64::max),
        Norm::L1 => diff.zip(approx.grid().weights()).map(|(d, w)| w * d).sum(),
        Norm::L2 => diff
            .zip(approx.grid().weights())
            .map(|(d, w)| w * d * d)
            .sum::<f64>()
            .sqrt(),
    })
}

/// Average log-slope `ln(M[N_pl] / M[0]) / N_pl` of a convergence curve.
///
/// This is the mean of `ln(M[n+1]/M[n])` over `n < N_pl`.
pub fn convergence_rate(metric: &[f64], n_plateau: usize) -> Result<f64> {
    if n_plateau == 0 {
        return Err(Error::arg("plateau index must be at least 1"));
    }
    if metric.len() <= n_plateau {
        return Err(Error::arg(format!(
            "rate to index {n_plateau} needs {} metric values, got {}",
            n_plateau + 1,
            metric.len()
        )));
    }
    if let Some(bad) = metric[..=n_plateau]
        .iter()
        .find(|m| !(**m > 0.0) || !m.is_finite())
    {
        return Err(Error::arg(format!(
            "metric values must be positive and finite, got {bad}"
        )));
    }
    Ok((metric[n_plateau] / metric[0]).ln() / n_plateau as f64)
}

/// First `n` with `M[n+1] > 0.9 M[n]` and `M[n+2] > 0.9 M[n+1]`, if any.
pub fn detect_plateau(metric: &[f64]) -> Option<usize> {
    (0..metric.len().saturating_sub(2))
        .find(|&n| metric[n + 1] > 0.9 * metric[n] && metric[n + 2] > 0.9 * metric[n + 1])
}

/// Metric values per order with their rate summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub metric: Vec<f64>,
    pub norm: Norm,
    pub n_plateau: usize,
    pub rate: f64,
    /// Free-form scenario label (series kind, p, grid).
    pub label: String,
}

impl ConvergenceReport {
    /// Build from metric values; `n_plateau = None` uses [`detect_plateau`],
    /// falling back to the last index.
    pub fn new(
        metric: Vec<f64>,
        norm: Norm,
        n_plateau: Option<usize>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if metric.len() < 2 {
            return Err(Error::arg("a convergence report needs at least two orders"));
        }
        let last = metric.len() - 1;
        let n_plateau = n_plateau
            .unwrap_or_else(|| detect_plateau(&metric).unwrap_or(last).max(1))
            .min(last);
        let rate = convergence_rate(&metric, n_plateau)?;
        Ok(Self {
            metric,
            norm,
            n_plateau,
            rate,
            label: label.into(),
        })
    }
}

/// Single-snapshot energy spectrum of a periodic field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub t: f64,
    /// `E[k] = |û(k)|²` for `k = 0..n/2`.
    pub energy: Vec<f64>,
    /// `½ Σ_k |û(k)|²` over all signed `k`.
    pub total: f64,
}

/// `E(k) = |û(k)|²` of real periodic samples on `[0, 1)`.
pub fn energy_spectrum(field: &GridField, t: f64) -> Result<Spectrum> {
    let Grid::Periodic { n } = *field.grid() else {
        return Err(Error::arg("energy spectra need a periodic grid"));
    };
    let hat = fft_forward(field.values())?;
    let mut energy = vec![0.0; n / 2 + 1];
    let mut total = 0.0;
    for (j, c) in hat.modes().iter().enumerate() {
        let e = c.norm_sqr();
        total += e;
        let k = wavenumber(j, n);
        if k >= 0 {
            energy[k as usize] = e;
        }
    }
    Ok(Spectrum {
        t,
        energy,
        total: 0.5 * total,
    })
}

/// Averages several spectra mode by mode.
pub fn average_spectra(spectra: &[Spectrum]) -> Result<Spectrum> {
    let first = spectra
        .first()
        .ok_or_else(|| Error::arg("no spectra to average"))?;
    let mut out = first.clone();
    for s in &spectra[1..] {
        if s.energy.len() != out.energy.len() {
            return Err(Error::GridMismatch("spectra of different lengths".into()));
        }
        for (a, b) in out.energy.iter_mut().zip(&s.energy) {
            *a += b;
        }
        out.total += s.total;
    }
    let m = spectra.len() as f64;
    out.energy.iter_mut().for_each(|e| *e /= m);
    out.total /= m;
    out.t = spectra.iter().map(|s| s.t).sum::<f64>() / m;
    Ok(out)
}

/// Least-squares slope of `ln E` against `ln k` for `k_lo ≤ k ≤ k_hi`.
pub fn spectrum_slope(spectrum: &Spectrum, k_lo: usize, k_hi: usize) -> Result<f64> {
    let k_lo = k_lo.max(1);
    if k_hi >= spectrum.energy.len() || k_lo >= k_hi {
        return Err(Error::arg(format!(
            "fit range [{k_lo}, {k_hi}] is empty or beyond k = {}",
            spectrum.energy.len() - 1
        )));
    }
    let pts: Vec<(f64, f64)> = (k_lo..=k_hi)
        .filter(|&k| spectrum.energy[k] > 0.0)
        .map(|k| ((k as f64).ln(), spectrum.energy[k].ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::arg("fewer than two positive modes in the fit range"));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
