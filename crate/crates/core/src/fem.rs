//! Piecewise-linear Galerkin solver for the 1D p-Laplacian evolution hierarchy.
//!
//! Each order solves `(∂_t - ∂_x²) u_n = ∂_x F_n` on `[-L, L]` with hat
//! functions and zero far-field values. Implicit Euler gives
//! `(A + Δt B) a⁺ = A a - Δt C f⁺` with `C_ij = ⟨φ_i', φ_j⟩`.

use log::debug;
use serde::{Deserialize, Serialize};

use crate::analysis::{error_metric, Norm};
use crate::error::{Error, Result};
use crate::exact::barenblatt;
use crate::grid::{Grid, GridField};
use crate::hierarchy::{
    partial_sum_of, step_hierarchy, ForcingQuadrature, HierarchyState, HomotopySpec,
};
use crate::linalg::{BandedCholesky, SymTridiag};
use crate::plap::{plap_forcing_with, ForcingPlan, GradientTable};

/// Uniform hat-function mesh on `[-L, L]`.
///
/// `mass` and `stiffness` act on the interior nodes `1..M`; the end nodes
/// are pinned to zero.
#[derive(Clone, Debug)]
pub struct FemMesh {
    half_width: f64,
    dx: f64,
    grid: Grid,
    mass: SymTridiag,
    stiffness: SymTridiag,
    mass_chol: BandedCholesky,
}

/// Mesh on `[-half_width, half_width]` with spacing `dx`.
pub fn build_mesh(half_width: f64, dx: f64) -> Result<FemMesh> {
    if !(half_width > 0.0) || !(dx > 0.0) || !half_width.is_finite() {
        return Err(Error::arg("mesh needs positive half-width and spacing"));
    }
    let cells = 2.0 * half_width / dx;
    let m = cells.round();
    if (cells - m).abs() > 1e-9 * cells.max(1.0) || m < 4.0 {
        return Err(Error::arg(format!(
            "2L/dx = {cells} must be an integer of at least 4"
        )));
    }
    let m = m as usize;
    let interior = m - 1;
    let mass = SymTridiag::toeplitz(interior, 4.0 * dx / 6.0, dx / 6.0);
    let stiffness = SymTridiag::toeplitz(interior, 2.0 / dx, -1.0 / dx);
    let mass_chol = mass.factor()?;
    Ok(FemMesh {
        half_width,
        dx,
        grid: Grid::line(-half_width, half_width, m + 1),
        mass,
        stiffness,
        mass_chol,
    })
}

impl FemMesh {
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Node grid, end nodes included.
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn mass(&self) -> &SymTridiag {
        &self.mass
    }

    pub fn stiffness(&self) -> &SymTridiag {
        &self.stiffness
    }

    /// Index of the node at `x = 0`, if any.
    pub fn center_index(&self) -> Option<usize> {
        let m = self.len() - 1;
        m.is_multiple_of(2).then_some(m / 2)
    }

    /// `C f` on all nodes; rows read `(½, 0, -½)` and the end rows are zero.
    pub fn apply_coupling(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        let mut out = vec![0.0; n];
        for i in 1..n - 1 {
            out[i] = 0.5 * (f[i - 1] - f[i + 1]);
        }
        out
    }

    /// `∫ u_h` for nodal values `a`.
    pub fn integral(&self, a: &[f64]) -> f64 {
        self.dx * a.iter().sum::<f64>()
    }

    /// `Σ_i (A a)_i` over the interior rows, the mass the scheme conserves.
    pub fn discrete_mass(&self, a: &[f64]) -> f64 {
        let n = a.len();
        self.mass.matvec(&a[1..n - 1]).iter().sum()
    }

    /// L² projection of `∂_x u_h` onto the hats: `A g = -C a`.
    pub fn gradient(&self, a: &[f64]) -> Vec<f64> {
        let n = a.len();
        let mut rhs: Vec<f64> = (1..n - 1).map(|i| 0.5 * (a[i + 1] - a[i - 1])).collect();
        self.mass_chol.solve_in_place(&mut rhs);
        let mut g = vec![0.0; n];
        g[1..n - 1].copy_from_slice(&rhs);
        g
    }
}

/// `a₀ = A⁻¹ e_{i₀}`, the L² projection of `δ(x)`.
pub fn project_delta_ic(mesh: &FemMesh) -> Result<Vec<f64>> {
    let i0 = mesh
        .center_index()
        .ok_or_else(|| Error::arg("mesh has no node at x = 0"))?;
    let n = mesh.len();
    let mut e = vec![0.0; n - 2];
    e[i0 - 1] = 1.0;
    mesh.mass_chol.solve_in_place(&mut e);
    let mut a = vec![0.0; n];
    a[1..n - 1].copy_from_slice(&e);
    Ok(a)
}

/// Implicit Euler factorization `A + Δt B` for a fixed step.
#[derive(Clone, Debug)]
pub struct FemStepper {
    mesh: FemMesh,
    dt: f64,
    chol: BandedCholesky,
}

impl FemStepper {
    pub fn new(mesh: FemMesh, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::arg(format!("time step must be positive, got {dt}")));
        }
        let chol = mesh.mass.add_scaled(dt, &mesh.stiffness).factor()?;
        Ok(Self { mesh, dt, chol })
    }

    pub fn mesh(&self) -> &FemMesh {
        &self.mesh
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// One step of a single order with forcing `f` sampled at the new time.
    pub fn step_order(&self, a: &[f64], f: Option<&[f64]>) -> Result<Vec<f64>> {
        let n = self.mesh.len();
        if a.len() != n || f.is_some_and(|f| f.len() != n) {
            return Err(Error::GridMismatch(format!("FEM vectors need {n} entries")));
        }
        let mut rhs = self.mesh.mass.matvec(&a[1..n - 1]);
        if let Some(f) = f {
            let cf = self.mesh.apply_coupling(f);
            for (r, c) in rhs.iter_mut().zip(&cf[1..n - 1]) {
                *r -= self.dt * c;
            }
        }
        self.chol.solve_in_place(&mut rhs);
        let mut out = vec![0.0; n];
        out[1..n - 1].copy_from_slice(&rhs);
        Ok(out)
    }
}

/// Advance every order one step with the given new-time forcings
/// (`forcings[n]` for order `n`; order 0 is usually zero).
pub fn step_implicit_euler(
    stepper: &FemStepper,
    state: &HierarchyState,
    forcings: &[GridField],
) -> Result<HierarchyState> {
    if forcings.len() != state.order() + 1 {
        return Err(Error::arg(format!(
            "{} forcings for {} orders",
            forcings.len(),
            state.order() + 1
        )));
    }
    step_hierarchy(
        state,
        stepper.dt,
        ForcingQuadrature::Frozen,
        |n, _| Ok(forcings[n].clone()),
        |_, u, f, _| {
            let f = (!f.end.is_zero()).then(|| f.end.values());
            GridField::new(*u.grid(), stepper.step_order(u.values(), f)?)
        },
    )
}

/// Settings of [`solve_evolution_hierarchy`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionRun {
    pub p: f64,
    pub dual: bool,
    pub order: usize,
    pub dx: f64,
    pub dt: f64,
    pub half_width: f64,
    pub t_final: f64,
    /// Refeed every this many steps; `None` disables refeeding.
    pub refeed_every: Option<usize>,
    /// Times at which residuals are reported (rounded to the nearest step).
    pub report_times: Vec<f64>,
}

impl Default for EvolutionRun {
    fn default() -> Self {
        Self {
            p: 3.0,
            dual: true,
            order: 4,
            dx: 0.02,
            dt: 0.01,
            half_width: 8.0,
            t_final: 1.0,
            refeed_every: None,
            report_times: vec![1.0],
        }
    }
}

impl EvolutionRun {
    pub fn homotopy(&self) -> Result<HomotopySpec> {
        if self.dual {
            HomotopySpec::plap_dual(self.p)
        } else {
            HomotopySpec::plap_ordinary(self.p)
        }
    }
}

/// Residuals of every partial sum at one reported time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub t: f64,
    /// `‖S_n - H_p‖_{L²}` for `n = 0..=order`.
    pub residuals: Vec<f64>,
}

/// Output of [`solve_evolution_hierarchy`].
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionReport {
    pub rows: Vec<ResidualRow>,
    /// States at the reported times, before any refeed at that step.
    pub snapshots: Vec<HierarchyState>,
    /// Set when the refed solution grew more than tenfold in L² between refeeds.
    pub diverged: bool,
}

/// Fundamental solution sampled on the mesh nodes.
pub fn barenblatt_on_mesh(mesh: &FemMesh, p: f64, t: f64) -> Result<GridField> {
    let values = mesh
        .grid()
        .xs()
        .iter()
        .map(|&x| barenblatt(p, 1, t, &[x]))
        .collect::<Result<Vec<_>>>()?;
    GridField::new(*mesh.grid(), values)
}

/// Delta-IC pipeline: projection, per-order implicit Euler with pointwise
/// forcing built from projected gradients, optional refeeding and L²
/// residuals against the fundamental solution.
pub fn solve_evolution_hierarchy(run: &EvolutionRun) -> Result<EvolutionReport> {
    let spec = run.homotopy()?;
    let delta = spec.target_delta;
    if !(run.t_final > 0.0) {
        return Err(Error::arg("final time must be positive"));
    }
    if run.refeed_every == Some(0) {
        return Err(Error::arg("refeed cadence must be at least one step"));
    }
    let mesh = build_mesh(run.half_width, run.dx)?;
    let stepper = FemStepper::new(mesh, run.dt)?;
    let mesh = stepper.mesh();
    let grid = *mesh.grid();
    let plan = if run.order > 0 {
        Some(ForcingPlan::new(run.order, &spec)?.with_reach_guard(true))
    } else {
        None
    };
    let steps = (run.t_final / run.dt).round() as usize;
    let report_steps: Vec<usize> = run
        .report_times
        .iter()
        .map(|&t| (t / run.dt).round() as usize)
        .collect();
    if report_steps.iter().any(|&s| s == 0 || s > steps) {
        return Err(Error::arg("report times must lie in (0, t_final]"));
    }

    let a0 = GridField::new(grid, project_delta_ic(mesh)?)?;
    let mut state = HierarchyState::new(a0, run.order, 0.0);
    let mut rows = Vec::new();
    let mut snapshots = Vec::new();
    let mut diverged = false;
    let mut last_norm: Option<f64> = None;
    let zero = GridField::zeros(grid);
    for step in 1..=steps {
        state = step_hierarchy(
            &state,
            run.dt,
            ForcingQuadrature::Frozen,
            |n, lower| {
                if n == 0 {
                    return Ok(zero.clone());
                }
                let plan = plan.as_ref().expect("plan exists for positive orders");
                let mut table = GradientTable::new(1, grid.points())?;
                for u in lower {
                    table.push(vec![mesh.gradient(u.values())])?;
                }
                let f = plap_forcing_with(plan, n, &table)?;
                GridField::new(grid, f.into_iter().next().expect("one component"))
            },
            |_, u, f, _| {
                let f = (!f.end.is_zero()).then(|| f.end.values());
                GridField::new(grid, stepper.step_order(u.values(), f)?)
            },
        )?;
        state.t = step as f64 * run.dt;
        if let Some(order) = state
            .coeffs()
            .iter()
            .position(|c| c.values().iter().any(|v| !v.is_finite()))
        {
            return Err(Error::NonFinite { order, step });
        }
        if report_steps.contains(&step) {
            let exact = barenblatt_on_mesh(mesh, run.p, state.t)?;
            let residuals = (0..=run.order)
                .map(|n| {
                    let s = partial_sum_of(&state.coeffs()[..=n], delta);
                    error_metric(&s, &exact, Norm::L2)
                })
                .collect::<Result<Vec<_>>>()?;
            debug!("t = {}: residuals {:?}", state.t, residuals);
            rows.push(ResidualRow {
                t: state.t,
                residuals,
            });
            snapshots.push(state.clone());
        }
        if let Some(every) = run.refeed_every {
            if step % every == 0 && step < steps {
                state = state.refeed(delta);
                let norm = error_metric(state.coeff(0), &zero, Norm::L2)?;
                if let Some(prev) = last_norm {
                    if norm > 10.0 * prev {
                        diverged = true;
                    }
                }
                last_norm = Some(norm);
            }
        }
    }
    Ok(EvolutionReport {
        rows,
        snapshots,
        diverged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_spacing_rows() {
        let m = build_mesh(4.0, 1.0).unwrap();
        assert!((m.mass().diag[2] - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.mass().off[2] - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(m.stiffness().diag[1] + 2.0 * m.stiffness().off[1], 0.0);
        let f: Vec<f64> = (0..9).map(|i| (i * i) as f64).collect();
        let cf = m.apply_coupling(&f);
        assert_eq!(cf[3], 0.5 * (4.0 - 16.0));
        assert!(build_mesh(1.0, 0.3).is_err());
    }

    #[test]
    fn coupling_matches_quadrature() {
        // ⟨φ_i', φ_j⟩ by midpoint-free exact integration of piecewise-linear products.
        let dx = 0.5;
        let hat = |i: i32, x: f64| (1.0 - (x - i as f64 * dx).abs() / dx).max(0.0);
        let dhat = |i: i32, x: f64| {
            let r = x - i as f64 * dx;
            if r > -dx && r < 0.0 {
                1.0 / dx
            } else if r > 0.0 && r < dx {
                -1.0 / dx
            } else {
                0.0
            }
        };
        let (xs, ws) = crate::special::gauss_legendre(4);
        let integ = |i: i32, j: i32| -> f64 {
            let mut s = 0.0;
            for cell in -3..3 {
                let (a, b) = (cell as f64 * dx, (cell + 1) as f64 * dx);
                for (x, w) in xs.iter().zip(&ws) {
                    let y = 0.5 * (a + b) + 0.5 * (b - a) * x;
                    s += 0.5 * (b - a) * w * dhat(i, y) * hat(j, y);
                }
            }
            s
        };
        assert!((integ(0, -1) - 0.5).abs() < 1e-14);
        assert!(integ(0, 0).abs() < 1e-14);
        assert!((integ(0, 1) + 0.5).abs() < 1e-14);
    }

    #[test]
    fn delta_projection_is_symmetric_with_unit_mass() {
        let mesh = build_mesh(2.0, 0.1).unwrap();
        let a = project_delta_ic(&mesh).unwrap();
        let i0 = mesh.center_index().unwrap();
        assert!((mesh.discrete_mass(&a) - 1.0).abs() < 1e-14);
        assert!((mesh.integral(&a) - 1.0).abs() < 1e-10);
        for j in 1..10 {
            assert!((a[i0 + j] - a[i0 - j]).abs() < 1e-12);
        }
        assert!(a[i0 + 10].abs() < 1e-5 * a[i0]);
        assert!(build_mesh(1.05, 0.1).is_ok_and(|m| m.center_index().is_none()));
    }

    #[test]
    fn heat_step_conserves_mass() {
        let mesh = build_mesh(8.0, 0.05).unwrap();
        let stepper = FemStepper::new(mesh, 0.01).unwrap();
        let mut a = project_delta_ic(stepper.mesh()).unwrap();
        let max0 = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for _ in 0..20 {
            a = stepper.step_order(&a, None).unwrap();
            assert!((stepper.mesh().discrete_mass(&a) - 1.0).abs() < 1e-12);
        }
        assert!(a.iter().fold(0.0f64, |m, v| m.max(v.abs())) < max0);
    }
}
