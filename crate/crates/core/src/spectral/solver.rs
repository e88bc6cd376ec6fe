use num_complex::Complex64;
use std::f64::consts::PI;

use super::duhamel::{mode_rate, ModeWeights};
use super::fft::{wavenumber, Fourier};
use super::forcing::ForcingSpec;
use crate::error::{Error, Result};
use crate::grid::{Grid, GridField};
use crate::hierarchy::{
    burgers_forcing_into, step_hierarchy, ForcingQuadrature, HierarchyState, HomotopyKind,
    HomotopySpec, StepForcing,
};

/// Parameters of a periodic hierarchy run.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicRun {
    pub order: usize,
    pub dt: f64,
    pub t_final: f64,
    /// Refeed every this many steps; `None` disables refeeding.
    pub refeed_every: Option<usize>,
    pub quadrature: ForcingQuadrature,
    /// Zero modes with `|k| > n/3` in the nonlinear forcing.
    pub dealias: bool,
    /// Times at which the state is recorded (rounded to the nearest step).
    pub snapshot_times: Vec<f64>,
}

impl Default for PeriodicRun {
    fn default() -> Self {
        Self {
            order: 8,
            dt: 1e-4,
            t_final: 1.0,
            refeed_every: Some(1),
            quadrature: ForcingQuadrature::Frozen,
            dealias: false,
            snapshot_times: vec![1.0],
        }
    }
}

/// Hierarchy state recorded at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub state: HierarchyState,
}

impl Snapshot {
    pub fn t(&self) -> f64 {
        self.state.t
    }
}

/// Fourier-space stepper for the linear-homotopy Burgers hierarchy.
#[derive(Debug)]
pub struct PeriodicSolver {
    grid: Grid,
    fourier: Fourier,
    weights: Vec<ModeWeights>,
    /// `2πik` used for `∂_x` (zero at the Nyquist index).
    deriv: Vec<Complex64>,
    keep: Vec<bool>,
    forcing_hat: Option<Vec<Complex64>>,
    v: f64,
    quadrature: ForcingQuadrature,
}

impl PeriodicSolver {
    pub fn new(
        n: usize,
        dt: f64,
        spec: &HomotopySpec,
        forcing: Option<&ForcingSpec>,
        quadrature: ForcingQuadrature,
        dealias: bool,
    ) -> Result<Self> {
        if spec.kind != HomotopyKind::BurgersLinear {
            return Err(Error::arg("periodic solver needs a Burgers homotopy"));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::arg(format!("time step must be positive, got {dt}")));
        }
        let fourier = Fourier::new(n)?;
        let nyq = n / 2;
        let mut weights = Vec::with_capacity(n);
        let mut deriv = Vec::with_capacity(n);
        for j in 0..n {
            let k = wavenumber(j, n);
            let lambda = if j == nyq {
                Complex64::new(4.0 * PI * PI * (k * k) as f64 / spec.reynolds, 0.0)
            } else {
                mode_rate(k, spec.advection_speed, spec.reynolds)
            };
            weights.push(ModeWeights::new(lambda, dt));
            deriv.push(if j == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, 2.0 * PI * k as f64)
            });
        }
        let keep = (0..n)
            .map(|j| !dealias || 3 * wavenumber(j, n).unsigned_abs() as usize <= n)
            .collect();
        let forcing_hat = match forcing {
            Some(f) => {
                if f.k_max >= n / 2 {
                    return Err(Error::arg(format!(
                        "forcing k_max = {} is not resolved by {n} points",
                        f.k_max
                    )));
                }
                let mut hat = vec![Complex64::default(); n];
                fourier.forward_into(&f.sample(n), &mut hat);
                Some(hat)
            }
            None => None,
        };
        Ok(Self {
            grid: Grid::periodic(n),
            fourier,
            weights,
            deriv,
            keep,
            forcing_hat,
            v: spec.advection_speed,
            quadrature,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    fn build_forcing(&self, order: usize, lower: &[GridField]) -> Result<GridField> {
        let mut out = GridField::zeros(self.grid);
        if order > 0 {
            let slices: Vec<&[f64]> = lower.iter().map(|c| c.values()).collect();
            burgers_forcing_into(order, &slices, self.v, out.values_mut())?;
        }
        Ok(out)
    }

    fn advance(&self, order: usize, u: &GridField, f: StepForcing<'_>) -> Result<GridField> {
        let n = self.grid.len();
        let mut uh = vec![Complex64::default(); n];
        self.fourier.forward_into(u.values(), &mut uh);
        if order == 0 {
            if let Some(fh) = &self.forcing_hat {
                for ((x, w), &g) in uh.iter_mut().zip(&self.weights).zip(fh) {
                    *x = w.decay * *x + w.forcing_integral(g, g, self.quadrature);
                }
            } else {
                for (x, w) in uh.iter_mut().zip(&self.weights) {
                    *x *= w.decay;
                }
            }
        } else {
            let mut fe = vec![Complex64::default(); n];
            self.fourier.forward_into(f.end.values(), &mut fe);
            let fs = match f.start {
                Some(s) => {
                    let mut buf = vec![Complex64::default(); n];
                    self.fourier.forward_into(s.values(), &mut buf);
                    buf
                }
                None => fe.clone(),
            };
            for j in 0..n {
                let w = &self.weights[j];
                let drive = if self.keep[j] {
                    self.deriv[j] * w.forcing_integral(fs[j], fe[j], self.quadrature)
                } else {
                    Complex64::default()
                };
                uh[j] = w.decay * uh[j] - drive;
            }
        }
        self.fourier.inverse_in_place(&mut uh);
        GridField::new(self.grid, uh.into_iter().map(|c| c.re).collect())
    }

    /// One step of every order.
    pub fn step(&self, state: &HierarchyState, dt: f64) -> Result<HierarchyState> {
        step_hierarchy(
            state,
            dt,
            self.quadrature,
            |n, lower| self.build_forcing(n, lower),
            |n, u, f, _| self.advance(n, u, f),
        )
    }
}

/// Solve the periodic linear-homotopy Burgers hierarchy from samples `g`.
///
/// Returns the states recorded at `run.snapshot_times` (before any refeed
/// that falls on the same step).
pub fn solve_periodic_hierarchy(
    g: &[f64],
    spec: &HomotopySpec,
    forcing: Option<&ForcingSpec>,
    run: &PeriodicRun,
) -> Result<Vec<Snapshot>> {
    if run.refeed_every == Some(0) {
        return Err(Error::arg("refeed interval must be at least one step"));
    }
    if !(run.t_final >= 0.0) {
        return Err(Error::arg("final time must be non-negative"));
    }
    let solver = PeriodicSolver::new(g.len(), run.dt, spec, forcing, run.quadrature, run.dealias)?;
    let steps = (run.t_final / run.dt).round() as usize;
    let mut wanted: Vec<usize> = run
        .snapshot_times
        .iter()
        .map(|&t| (t / run.dt).round() as usize)
        .filter(|&s| s <= steps)
        .collect();
    wanted.sort_unstable();
    wanted.dedup();

    let mut state = HierarchyState::new(GridField::new(solver.grid(), g.to_vec())?, run.order, 0.0);
    let mut out = Vec::with_capacity(wanted.len());
    let mut next = wanted.iter().peekable();
    if next.peek() == Some(&&0) {
        out.push(Snapshot {
            step: 0,
            state: state.clone(),
        });
        next.next();
    }
    for step in 1..=steps {
        let mut advanced = solver.step(&state, run.dt)?;
        advanced.t = step as f64 * run.dt;
        for (n, c) in advanced.coeffs().iter().enumerate() {
            if c.values().iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { order: n, step });
            }
        }
        if next.peek() == Some(&&step) {
            out.push(Snapshot {
                step,
                state: advanced.clone(),
            });
            next.next();
        }
        state = match run.refeed_every {
            Some(every) if step % every == 0 => advanced.refeed(spec.target_delta),
            _ => advanced,
        };
    }
    Ok(out)
}
