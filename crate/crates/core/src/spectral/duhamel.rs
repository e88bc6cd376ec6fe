use std::f64::consts::PI;

use num_complex::Complex64;

use crate::hierarchy::ForcingQuadrature;

/// Per-mode propagator and forcing weights over one step of length `dt`.
///
/// For the rate `λ` and `z = λ·dt`: `decay = e^{-z}`,
/// `w0 = ∫₀^dt e^{-λ(dt-τ)} dτ` and `w1 = ∫₀^dt e^{-λ(dt-τ)} (τ/dt) dτ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeWeights {
    pub decay: Complex64,
    pub w0: Complex64,
    pub w1: Complex64,
}

impl ModeWeights {
    pub fn new(lambda: Complex64, dt: f64) -> Self {
        let z = lambda * dt;
        let decay = (-z).exp();
        let (p1, p2) = if z.norm() < 0.5 {
            // Σ (-z)^j/(j+1)! and Σ (-z)^j/(j+2)!
            let mut p1 = Complex64::new(0.0, 0.0);
            let mut p2 = Complex64::new(0.0, 0.0);
            let mut term = Complex64::new(1.0, 0.0);
            for j in 0..24 {
                p1 += term / (j + 1) as f64;
                p2 += term / ((j + 1) * (j + 2)) as f64;
                term *= -z / (j + 1) as f64;
            }
            (p1, p2)
        } else {
            let p1 = (1.0 - decay) / z;
            (p1, (1.0 - p1) / z)
        };
        Self {
            decay,
            w0: p1 * dt,
            w1: p2 * dt,
        }
    }

    /// Integral of the propagated forcing over the step.
    pub fn forcing_integral(
        &self,
        start: Complex64,
        end: Complex64,
        quadrature: ForcingQuadrature,
    ) -> Complex64 {
        match quadrature {
            ForcingQuadrature::Frozen => end * self.w0,
            ForcingQuadrature::Linear => start * self.w0 + (end - start) * self.w1,
        }
    }
}

/// Rate `λ = 2πikv + 4π²k²/R_e` of mode `k`.
pub fn mode_rate(k: i64, v: f64, reynolds: f64) -> Complex64 {
    let kf = k as f64;
    Complex64::new(4.0 * PI * PI * kf * kf / reynolds, 2.0 * PI * kf * v)
}

/// Advance one Fourier coefficient of an order `n ≥ 1` equation by `dt`.
///
/// Solves `∂_t û + λ û = -2πik F̂` exactly for the sampled forcing: with
/// [`ForcingQuadrature::Frozen`] the forcing is held at `forcing_end`, with
/// [`ForcingQuadrature::Linear`] it is interpolated from `forcing_start`.
pub fn advance_mode_duhamel(
    u: Complex64,
    forcing_start: Complex64,
    forcing_end: Complex64,
    k: i64,
    dt: f64,
    v: f64,
    reynolds: f64,
    quadrature: ForcingQuadrature,
) -> Complex64 {
    let w = ModeWeights::new(mode_rate(k, v, reynolds), dt);
    let ik = Complex64::new(0.0, 2.0 * PI * k as f64);
    w.decay * u - ik * w.forcing_integral(forcing_start, forcing_end, quadrature)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_rate_example() {
        let got = advance_mode_duhamel(
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            1,
            1.0,
            0.0,
            4.0 * PI * PI,
            ForcingQuadrature::Frozen,
        );
        let want = c(0.0, -2.0 * PI) * (1.0 - (-1.0f64).exp());
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn zero_mode_is_frozen() {
        let u = c(0.3, -0.1);
        let got = advance_mode_duhamel(
            u,
            c(5.0, 1.0),
            c(2.0, 2.0),
            0,
            0.1,
            1.0,
            10.0,
            ForcingQuadrature::Linear,
        );
        assert_eq!(got, u);
    }

    #[test]
    fn series_and_closed_form_agree_near_switch() {
        for &r in &[0.49999, 0.50001] {
            let lam = c(r * 0.6, r * 0.8);
            let w = ModeWeights::new(lam, 1.0);
            // Reference by composite Simpson quadrature.
            let m = 2000;
            let (mut s0, mut s1) = (c(0.0, 0.0), c(0.0, 0.0));
            for i in 0..=m {
                let tau = i as f64 / m as f64;
                let wt = if i == 0 || i == m {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                let e = (-lam * (1.0 - tau)).exp();
                s0 += e * wt;
                s1 += e * tau * wt;
            }
            s0 /= 3.0 * m as f64;
            s1 /= 3.0 * m as f64;
            assert!((w.w0 - s0).norm() < 1e-12);
            assert!((w.w1 - s1).norm() < 1e-12);
        }
    }
}
