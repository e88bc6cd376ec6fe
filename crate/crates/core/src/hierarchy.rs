//! Homotopy families, hierarchy state, the linear-homotopy Burgers forcing
//! and the order-by-order stepping driver shared by the time-dependent solvers.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridField};

/// Number of homotopy derivatives stored by the named constructors.
pub const MAX_DERIVS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomotopyKind {
    BurgersLinear,
    PLapOrdinary,
    PLapDual,
}

/// A deformation family together with its derivative data at `δ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopySpec {
    pub kind: HomotopyKind,
    /// Linear advection speed `v` (Burgers only).
    pub advection_speed: f64,
    /// Reynolds number (Burgers only).
    pub reynolds: f64,
    /// Evaluation point `δ_p` of the series.
    pub target_delta: f64,
    /// `h^(j)(0)` for `j = 1, 2, ...` (p-Laplacian kinds only).
    pub derivs: Vec<f64>,
}

impl HomotopySpec {
    pub fn burgers(advection_speed: f64, reynolds: f64) -> Result<Self> {
        if !(reynolds > 0.0) || !reynolds.is_finite() {
            return Err(Error::arg(format!(
                "Reynolds number must be positive, got {reynolds}"
            )));
        }
        if !advection_speed.is_finite() {
            return Err(Error::arg("advection speed must be finite"));
        }
        Ok(Self {
            kind: HomotopyKind::BurgersLinear,
            advection_speed,
            reynolds,
            target_delta: 1.0,
            derivs: Vec::new(),
        })
    }

    /// `h(δ) = δ`, evaluated at `δ_p = p - 2`.
    pub fn plap_ordinary(p: f64) -> Result<Self> {
        check_p(p)?;
        let mut derivs = vec![0.0; MAX_DERIVS];
        derivs[0] = 1.0;
        Ok(Self {
            kind: HomotopyKind::PLapOrdinary,
            advection_speed: 0.0,
            reynolds: 0.0,
            target_delta: p - 2.0,
            derivs,
        })
    }

    /// `h(δ) = -δ / (1 + δ)`, evaluated at `δ_p = (2 - p) / (p - 1)`.
    pub fn plap_dual(p: f64) -> Result<Self> {
        check_p(p)?;
        let mut fact = 1.0;
        let derivs = (1..=MAX_DERIVS)
            .map(|j| {
                fact *= j as f64;
                if j % 2 == 0 {
                    fact
                } else {
                    -fact
                }
            })
            .collect();
        Ok(Self {
            kind: HomotopyKind::PLapDual,
            advection_speed: 0.0,
            reynolds: 0.0,
            target_delta: (2.0 - p) / (p - 1.0),
            derivs,
        })
    }

    /// Taylor coefficient `h^(j)(0) / j!`; zero beyond the stored derivatives.
    pub fn taylor_coeff(&self, j: usize) -> f64 {
        if j == 0 || j > self.derivs.len() {
            return 0.0;
        }
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        self.derivs[j - 1] / fact
    }

    /// Taylor coefficients `h_1..h_n`, indexed from 1 (entry 0 is zero).
    pub fn taylor_coeffs(&self, n: usize) -> Vec<f64> {
        (0..=n).map(|j| self.taylor_coeff(j)).collect()
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("p must exceed 1, got {p}")))
    }
}

/// Coefficients `u_0..u_N` sharing one grid at a common time.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyState {
    pub t: f64,
    coeffs: Vec<GridField>,
}

/// `Σ δⁿ u_n` at a given `δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSum {
    pub delta: f64,
    pub values: GridField,
}

impl HierarchyState {
    /// Fresh state: `u_0 = initial`, higher orders zero.
    pub fn new(initial: GridField, order: usize, t: f64) -> Self {
        let grid = *initial.grid();
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(initial);
        coeffs.extend((0..order).map(|_| GridField::zeros(grid)));
        Self { t, coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<GridField>, t: f64) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::arg("a hierarchy needs at least u_0"))?;
        let grid = *first.grid();
        for c in &coeffs[1..] {
            grid.check_same(c.grid())?;
        }
        Ok(Self { t, coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn grid(&self) -> &Grid {
        self.coeffs[0].grid()
    }

    pub fn coeffs(&self) -> &[GridField] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &GridField {
        &self.coeffs[n]
    }

    pub fn into_coeffs(self) -> Vec<GridField> {
        self.coeffs
    }

    pub fn partial_sum(&self, delta: f64) -> PartialSum {
        PartialSum {
            delta,
            values: partial_sum_of(&self.coeffs, delta),
        }
    }

    /// Restart the hierarchy from its partial sum at `δ`.
    pub fn refeed(&self, delta: f64) -> HierarchyState {
        HierarchyState::new(partial_sum_of(&self.coeffs, delta), self.order(), self.t)
    }
}

/// Horner evaluation of `Σ δⁿ coeffs[n]`.
pub fn partial_sum_of(coeffs: &[GridField], delta: f64) -> GridField {
    let mut acc = coeffs[coeffs.len() - 1].clone();
    for c in coeffs[..coeffs.len() - 1].iter().rev() {
        for (a, v) in acc.values_mut().iter_mut().zip(c.values()) {
            *a = *a * delta + v;
        }
    }
    acc
}

/// Linear-homotopy Burgers forcing `F_k(u_0, ..., u_{k-1})` written into `out`.
///
/// Slice form of [`burgers_forcing`] for solvers that keep raw buffers.
pub fn burgers_forcing_into(k: usize, coeffs: &[&[f64]], v: f64, out: &mut [f64]) -> Result<()> {
    if k == 0 {
        return Err(Error::arg("forcing order must be at least 1"));
    }
    if coeffs.len() < k {
        return Err(Error::arg(format!(
            "F_{k} needs u_0..u_{}, got {} fields",
            k - 1,
            coeffs.len()
        )));
    }
    let n = out.len();
    if coeffs[..k].iter().any(|c| c.len() != n) {
        return Err(Error::GridMismatch("coefficient lengths differ".into()));
    }
    let u0 = coeffs[0];
    if k == 1 {
        for (o, &a) in out.iter_mut().zip(u0) {
            *o = -v * a + 0.5 * a * a;
        }
        return Ok(());
    }
    let prev = coeffs[k - 1];
    for ((o, &a), &b) in out.iter_mut().zip(u0).zip(prev) {
        *o = (a - v) * b;
    }
    // Pairs (m, k-1-m) with 1 <= m < k-1-m, plus the square when k-1 is even.
    let upper = if k % 2 == 1 { (k - 3) / 2 } else { (k - 2) / 2 };
    for m in 1..=upper {
        let (a, b) = (coeffs[m], coeffs[k - 1 - m]);
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o += x * y;
        }
    }
    if k % 2 == 1 {
        let mid = coeffs[(k - 1) / 2];
        for (o, &x) in out.iter_mut().zip(mid) {
            *o += 0.5 * x * x;
        }
    }
    Ok(())
}

/// Linear-homotopy Burgers forcing `F_k` from `u_0..u_{k-1}`.
pub fn burgers_forcing(k: usize, coeffs: &[GridField], v: f64) -> Result<GridField> {
    let first = coeffs
        .first()
        .ok_or_else(|| Error::arg("no coefficient fields supplied"))?;
    let grid = *first.grid();
    for c in coeffs.iter().take(k) {
        grid.check_same(c.grid())?;
    }
    let slices: Vec<&[f64]> = coeffs.iter().map(|c| c.values()).collect();
    let mut out = GridField::zeros(grid);
    burgers_forcing_into(k, &slices, v, out.values_mut())?;
    Ok(out)
}

/// How the forcing of each order is sampled across one step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ForcingQuadrature {
    /// Forcing frozen at the value built from the already-advanced lower orders.
    #[default]
    Frozen,
    /// Linear interpolation between the step-start and advanced forcings.
    Linear,
}

/// Forcing handed to a per-order stepper.
#[derive(Clone, Copy, Debug)]
pub struct StepForcing<'a> {
    /// Forcing at the start of the step (only for [`ForcingQuadrature::Linear`]).
    pub start: Option<&'a GridField>,
    /// Forcing built from the advanced lower orders.
    pub end: &'a GridField,
}

/// Advance every order by `dt`, strictly in increasing order.
///
/// `forcing(n, lower)` builds the order-`n` forcing from `u_0..u_{n-1}`
/// (order 0 receives an empty slice and returns the external forcing).
/// `stepper(n, u_n, forcing, dt)` advances one linear forced equation.
pub fn step_hierarchy<B, S>(
    state: &HierarchyState,
    dt: f64,
    quadrature: ForcingQuadrature,
    mut forcing: B,
    mut stepper: S,
) -> Result<HierarchyState>
where
    B: FnMut(usize, &[GridField]) -> Result<GridField>,
    S: FnMut(usize, &GridField, StepForcing<'_>, f64) -> Result<GridField>,
{
    if !(dt > 0.0) {
        return Err(Error::arg(format!("time step must be positive, got {dt}")));
    }
    let grid = *state.grid();
    let mut advanced: Vec<GridField> = Vec::with_capacity(state.coeffs.len());
    for n in 0..state.coeffs.len() {
        let end = forcing(n, &advanced).map_err(|e| e.at_order(n))?;
        grid.check_same(end.grid()).map_err(|e| e.at_order(n))?;
        let start = match quadrature {
            ForcingQuadrature::Frozen => None,
            ForcingQuadrature::Linear => {
                Some(forcing(n, &state.coeffs[..n]).map_err(|e| e.at_order(n))?)
            }
        };
        let f = StepForcing {
            start: start.as_ref(),
            end: &end,
        };
        let next = stepper(n, &state.coeffs[n], f, dt).map_err(|e| e.at_order(n))?;
        grid.check_same(next.grid()).map_err(|e| e.at_order(n))?;
        advanced.push(next);
    }
    Ok(HierarchyState {
        t: state.t + dt,
        coeffs: advanced,
    })
}
