use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Fourier coefficients of a periodic field on `[0, 1)`.
///
/// Stored in FFT order: index `j` holds wavenumber `j` for `j < n/2` and
/// `j - n` otherwise, so `k` spans `-n/2..n/2`. Normalized so that
/// `û(k) = (1/n) Σ_j u_j e^{-2πik x_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    modes: Vec<Complex64>,
}

impl SpectralField {
    pub fn from_modes(modes: Vec<Complex64>) -> Result<Self> {
        check_pow2(modes.len())?;
        Ok(Self { modes })
    }

    pub fn grid_size(&self) -> usize {
        self.modes.len()
    }

    pub fn modes(&self) -> &[Complex64] {
        &self.modes
    }

    pub fn modes_mut(&mut self) -> &mut [Complex64] {
        &mut self.modes
    }

    /// Coefficient for signed wavenumber `k`, or `None` outside `-n/2..n/2`.
    pub fn mode(&self, k: i64) -> Option<Complex64> {
        let n = self.modes.len() as i64;
        if k < -n / 2 || k >= n / 2 {
            return None;
        }
        Some(self.modes[k.rem_euclid(n) as usize])
    }

    /// Remove the mean (`û(0) = 0`).
    pub fn zero_mean(&mut self) {
        self.modes[0] = Complex64::new(0.0, 0.0);
    }
}

/// Signed wavenumber of FFT index `j` on a grid of `n` points.
pub fn wavenumber(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn check_pow2(n: usize) -> Result<()> {
    if n >= 2 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::arg(format!(
            "grid size must be a power of two, got {n}"
        )))
    }
}

/// Cached forward/inverse plans for one grid size.
#[derive(Clone)]
pub struct Fourier {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fourier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier").field("n", &self.n).finish()
    }
}

impl Fourier {
    pub fn new(n: usize) -> Result<Self> {
        check_pow2(n)?;
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Real samples to normalized coefficients, written into `out`.
    pub fn forward_into(&self, samples: &[f64], out: &mut [Complex64]) {
        let scale = 1.0 / self.n as f64;
        for (o, &s) in out.iter_mut().zip(samples) {
            *o = Complex64::new(s * scale, 0.0);
        }
        self.forward.process(out);
    }

    /// Coefficients to complex samples, in place.
    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }

    pub fn forward(&self, samples: &[f64]) -> Result<SpectralField> {
        if samples.len() != self.n {
            return Err(Error::arg(format!(
                "expected {} samples, got {}",
                self.n,
                samples.len()
            )));
        }
        let mut modes = vec![Complex64::default(); self.n];
        self.forward_into(samples, &mut modes);
        Ok(SpectralField { modes })
    }

    /// Inverse transform returning the real part and the largest imaginary residue.
    pub fn inverse_with_residue(&self, field: &SpectralField) -> Result<(Vec<f64>, f64)> {
        if field.grid_size() != self.n {
            return Err(Error::arg("spectral field size does not match the plan"));
        }
        let mut buf = field.modes.clone();
        self.inverse.process(&mut buf);
        let residue = buf.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
        Ok((buf.into_iter().map(|c| c.re).collect(), residue))
    }

    pub fn inverse(&self, field: &SpectralField) -> Result<Vec<f64>> {
        Ok(self.inverse_with_residue(field)?.0)
    }
}

/// Forward transform with a one-off plan.
pub fn fft_forward(samples: &[f64]) -> Result<SpectralField> {
    Fourier::new(samples.len())?.forward(samples)
}

/// Inverse transform with a one-off plan; returns real samples.
pub fn fft_inverse(field: &SpectralField) -> Result<Vec<f64>> {
    Fourier::new(field.grid_size())?.inverse(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cosine_squared_has_two_modes() {
        let n = 64;
        let g: Vec<f64> = (0..n)
            .map(|j| (2.0 * PI * j as f64 / n as f64).cos().powi(2) - 0.5)
            .collect();
        let s = fft_forward(&g).unwrap();
        for k in -32..32 {
            let c = s.mode(k).unwrap();
            let want = if k.abs() == 2 { 0.25 } else { 0.0 };
            assert!((c.re - want).abs() < 1e-15 && c.im.abs() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn constant_field() {
        let s = fft_forward(&[3.5; 16]).unwrap();
        assert!((s.mode(0).unwrap().re - 3.5).abs() < 1e-15);
        assert!(s.modes()[1..].iter().all(|c| c.norm() < 1e-15));
        assert_eq!(s.mode(8), None);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(
            fft_forward(&[0.0; 12]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn wavenumber_layout() {
        assert_eq!(wavenumber(0, 8), 0);
        assert_eq!(wavenumber(3, 8), 3);
        assert_eq!(wavenumber(4, 8), -4);
        assert_eq!(wavenumber(7, 8), -1);
    }
}
