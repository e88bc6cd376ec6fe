//! Finite-difference Dirichlet hierarchies on `[-1, 1]` and `[-1, 1]²`.
//!
//! Nodes sit on a vertex grid with `N_G` intervals per axis, so `x = 0` is a
//! node when `N_G` is even. Gradients live on cell faces: the Laplacian is
//! the face divergence of face gradients, and the forcing flux is evaluated
//! on the same faces, so both sides of `Δu_n = -div F_n` share one stencil.

use log::warn;

use crate::error::{Error, Result};
use crate::exact::plap_radial_exact;
use crate::grid::{Grid, GridField};
use crate::hierarchy::{HierarchyState, HomotopyKind, HomotopySpec};
use crate::linalg::BandedCholesky;
use crate::plap::{plap_forcing_with, ForcingPlan, GradientTable};

/// Smallest accepted number of intervals per axis.
pub const MIN_INTERVALS: usize = 8;

/// A Dirichlet problem `Δ_p u = f` with boundary data `g` on a vertex grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletProblem {
    grid: Grid,
    source: GridField,
    /// Values at the boundary nodes, in increasing flat-index order.
    boundary: Vec<f64>,
    p: f64,
    kind: HomotopyKind,
}

impl DirichletProblem {
    pub fn new(source: GridField, boundary: Vec<f64>, p: f64, kind: HomotopyKind) -> Result<Self> {
        let grid = *source.grid();
        match grid {
            Grid::Line { lo, hi, n } | Grid::Square { lo, hi, n } => {
                if lo != -1.0 || hi != 1.0 {
                    return Err(Error::arg(
                        "Dirichlet problems live on [-1, 1] or [-1, 1]^2",
                    ));
                }
                if n < MIN_INTERVALS + 1 {
                    return Err(Error::arg(format!(
                        "need at least {MIN_INTERVALS} intervals per axis, got {}",
                        n.saturating_sub(1)
                    )));
                }
            }
            Grid::Periodic { .. } => {
                return Err(Error::arg("Dirichlet problems need a bounded grid"))
            }
        }
        let nb = boundary_nodes(&grid).len();
        if boundary.len() != nb {
            return Err(Error::GridMismatch(format!(
                "{} boundary values for {nb} boundary nodes",
                boundary.len()
            )));
        }
        if kind == HomotopyKind::BurgersLinear {
            return Err(Error::arg(
                "Dirichlet hierarchies need a p-Laplacian homotopy",
            ));
        }
        if source
            .values()
            .iter()
            .chain(&boundary)
            .any(|v| !v.is_finite())
        {
            return Err(Error::arg("source and boundary data must be finite"));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::domain(format!("p must exceed 1, got {p}")));
        }
        Ok(Self {
            grid,
            source,
            boundary,
            p,
            kind,
        })
    }

    /// `Δ_p u = -1` on `[-1, 1]` with zero boundary data, `n_g` intervals.
    pub fn ball_1d(n_g: usize, p: f64, kind: HomotopyKind) -> Result<Self> {
        let grid = Grid::line(-1.0, 1.0, n_g + 1);
        Self::new(GridField::constant(grid, -1.0), vec![0.0; 2], p, kind)
    }

    /// `Δ_p u = -1` on `[-1, 1]²` with boundary data from the 2D radial profile.
    pub fn unit_square(n_g: usize, p: f64, kind: HomotopyKind) -> Result<Self> {
        let grid = Grid::square(-1.0, 1.0, n_g + 1);
        let boundary = boundary_nodes(&grid)
            .into_iter()
            .map(|i| plap_radial_exact(p, 2, &grid.point(i)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(GridField::constant(grid, -1.0), boundary, p, kind)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn source(&self) -> &GridField {
        &self.source
    }

    pub fn boundary(&self) -> &[f64] {
        &self.boundary
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn kind(&self) -> HomotopyKind {
        self.kind
    }

    /// Intervals per axis.
    pub fn intervals(&self) -> usize {
        self.grid.nodes_per_axis() - 1
    }

    pub fn homotopy(&self) -> Result<HomotopySpec> {
        match self.kind {
            HomotopyKind::PLapOrdinary => HomotopySpec::plap_ordinary(self.p),
            _ => HomotopySpec::plap_dual(self.p),
        }
    }

    /// The radial profile sampled on the grid (the exact solution of both presets).
    pub fn radial_solution(&self) -> Result<GridField> {
        let d = self.grid.dim();
        let values = self
            .grid
            .points()
            .iter()
            .map(|pt| plap_radial_exact(self.p, d, &pt[..d]))
            .collect::<Result<Vec<_>>>()?;
        GridField::new(self.grid, values)
    }
}

/// Flat indices of the boundary nodes in increasing order.
pub fn boundary_nodes(grid: &Grid) -> Vec<usize> {
    (0..grid.len()).filter(|&i| grid.is_boundary(i)).collect()
}

/// A flux sampled on cell faces.
///
/// With `m` intervals per axis, `x[i + m*j]` sits at `(x_i + h/2, y_j)` for
/// `i < m`, `j ≤ m`, and `y[i + (m+1)*j]` at `(x_i, y_j + h/2)` for `i ≤ m`,
/// `j < m`. In 1D only `x` is used, with `j = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceFlux {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl FaceFlux {
    pub fn zeros(grid: &Grid) -> Self {
        let m = grid.nodes_per_axis() - 1;
        if grid.dim() == 1 {
            Self {
                x: vec![0.0; m],
                y: Vec::new(),
            }
        } else {
            Self {
                x: vec![0.0; m * (m + 1)],
                y: vec![0.0; m * (m + 1)],
            }
        }
    }
}

/// Right-hand side of a Poisson solve.
#[derive(Clone, Copy, Debug)]
pub enum PoissonRhs<'a> {
    /// `Δu = f` with the problem's boundary data.
    Field(&'a GridField),
    /// `Δu = -div F` with zero boundary data.
    NegDivergence(&'a FaceFlux),
}

/// Factorization of the discrete Dirichlet Laplacian, shared across right-hand sides.
#[derive(Clone, Debug)]
pub struct PoissonSolver {
    grid: Grid,
    chol: BandedCholesky,
}

impl PoissonSolver {
    pub fn new(grid: &Grid) -> Result<Self> {
        let n = grid.nodes_per_axis();
        if n < 3 {
            return Err(Error::arg("need at least one interior node"));
        }
        let m = n - 2;
        let h2 = grid.spacing().powi(2);
        let chol = match grid {
            Grid::Line { .. } => {
                BandedCholesky::factor(m, 1, |_, k| if k == 0 { 2.0 / h2 } else { -1.0 / h2 })?
            }
            Grid::Square { .. } => BandedCholesky::factor(m * m, m, |r, k| match k {
                0 => 4.0 / h2,
                1 if r % m != 0 => -1.0 / h2,
                k if k == m => -1.0 / h2,
                _ => 0.0,
            })?,
            Grid::Periodic { .. } => {
                return Err(Error::arg("Dirichlet solver needs a bounded grid"))
            }
        };
        Ok(Self { grid: *grid, chol })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Solve with the given Dirichlet values (indexed like [`boundary_nodes`]).
    pub fn solve(&self, rhs: PoissonRhs<'_>, boundary: &[f64]) -> Result<GridField> {
        let grid = self.grid;
        let n = grid.nodes_per_axis();
        let m = n - 2;
        let h = grid.spacing();
        let h2 = h * h;
        let bnodes = boundary_nodes(&grid);
        if boundary.len() != bnodes.len() {
            return Err(Error::GridMismatch("boundary data length".into()));
        }
        let mut u = GridField::zeros(grid);
        for (&i, &g) in bnodes.iter().zip(boundary) {
            u.values_mut()[i] = g;
        }
        let two_d = grid.dim() == 2;
        let interior = |k: usize| -> usize {
            if two_d {
                (k % m + 1) + n * (k / m + 1)
            } else {
                k + 1
            }
        };
        let count = if two_d { m * m } else { m };
        // b = -Δ_h u (interior) with boundary values moved to the right.
        let mut b = vec![0.0; count];
        match rhs {
            PoissonRhs::Field(f) => {
                grid.check_same(f.grid())?;
                for (k, bk) in b.iter_mut().enumerate() {
                    *bk = -f.values()[interior(k)];
                }
            }
            PoissonRhs::NegDivergence(flux) => {
                let div = face_divergence(&grid, flux)?;
                for (k, bk) in b.iter_mut().enumerate() {
                    *bk = div[interior(k)];
                }
            }
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::arg("right-hand side is not finite"));
        }
        let vals = u.values();
        for (k, bk) in b.iter_mut().enumerate() {
            let idx = interior(k);
            let nbrs: &[isize] = if two_d {
                &[-1, 1, -(n as isize), n as isize]
            } else {
                &[-1, 1]
            };
            for &o in nbrs {
                let j = (idx as isize + o) as usize;
                if grid.is_boundary(j) {
                    *bk += vals[j] / h2;
                }
            }
        }
        self.chol.solve_in_place(&mut b);
        for (k, bk) in b.into_iter().enumerate() {
            u.values_mut()[interior(k)] = bk;
        }
        Ok(u)
    }
}

/// Discrete Laplacian at interior nodes (zero on the boundary).
pub fn laplacian(u: &GridField) -> Result<GridField> {
    let grid = *u.grid();
    let g = face_gradient(u)?;
    let div = face_divergence(&grid, &g)?;
    let mut out = GridField::new(grid, div)?;
    for (i, v) in out.values_mut().iter_mut().enumerate() {
        if grid.is_boundary(i) {
            *v = 0.0;
        }
    }
    Ok(out)
}

/// Normal face differences `∂_x u` on x-faces and `∂_y u` on y-faces.
pub fn face_gradient(u: &GridField) -> Result<FaceFlux> {
    let grid = *u.grid();
    let n = grid.nodes_per_axis();
    let m = n - 1;
    let h = grid.spacing();
    let v = u.values();
    let mut out = FaceFlux::zeros(&grid);
    match grid {
        Grid::Line { .. } => {
            for i in 0..m {
                out.x[i] = (v[i + 1] - v[i]) / h;
            }
        }
        Grid::Square { .. } => {
            for j in 0..n {
                for i in 0..m {
                    out.x[i + m * j] = (v[i + 1 + n * j] - v[i + n * j]) / h;
                }
            }
            for j in 0..m {
                for i in 0..n {
                    out.y[i + n * j] = (v[i + n * (j + 1)] - v[i + n * j]) / h;
                }
            }
        }
        Grid::Periodic { .. } => return Err(Error::arg("face gradients need a bounded grid")),
    }
    Ok(out)
}

/// Face divergence at every node; only interior entries are meaningful.
fn face_divergence(grid: &Grid, flux: &FaceFlux) -> Result<Vec<f64>> {
    let n = grid.nodes_per_axis();
    let m = n - 1;
    let h = grid.spacing();
    let want = FaceFlux::zeros(grid);
    if flux.x.len() != want.x.len() || flux.y.len() != want.y.len() {
        return Err(Error::GridMismatch("face flux has the wrong layout".into()));
    }
    let mut div = vec![0.0; grid.len()];
    match grid {
        Grid::Line { .. } => {
            for i in 1..m {
                div[i] = (flux.x[i] - flux.x[i - 1]) / h;
            }
        }
        _ => {
            for j in 1..m {
                for i in 1..m {
                    div[i + n * j] = (flux.x[i + m * j] - flux.x[i - 1 + m * j]) / h
                        + (flux.y[i + n * j] - flux.y[i + n * (j - 1)]) / h;
                }
            }
        }
    }
    Ok(div)
}

/// Solve one Poisson problem on the problem's grid.
///
/// A field right-hand side uses the problem's boundary data; a divergence
/// right-hand side uses zero boundary data.
pub fn solve_poisson_dirichlet(
    problem: &DirichletProblem,
    rhs: PoissonRhs<'_>,
) -> Result<GridField> {
    let solver = PoissonSolver::new(&problem.grid)?;
    match rhs {
        PoissonRhs::Field(_) => solver.solve(rhs, &problem.boundary),
        PoissonRhs::NegDivergence(_) => solver.solve(rhs, &vec![0.0; problem.boundary.len()]),
    }
}

/// Face layout used to sample gradients for the forcing.
struct FaceTables {
    /// Tables on x-faces (and y-faces in 2D), with the flat face index of each entry.
    x: (GradientTable, Vec<usize>),
    y: Option<(GradientTable, Vec<usize>)>,
}

impl FaceTables {
    fn new(grid: &Grid) -> Result<Self> {
        let n = grid.nodes_per_axis();
        let m = n - 1;
        let h = grid.spacing();
        match grid {
            Grid::Line { .. } => {
                let pts = (0..m).map(|i| [grid.axis(i) + 0.5 * h, 0.0]).collect();
                Ok(Self {
                    x: (GradientTable::new(1, pts)?, (0..m).collect()),
                    y: None,
                })
            }
            _ => {
                // Only faces bordering an interior node enter the divergence.
                let mut xi = Vec::new();
                let mut xp = Vec::new();
                for j in 1..m {
                    for i in 0..m {
                        xi.push(i + m * j);
                        xp.push([grid.axis(i) + 0.5 * h, grid.axis(j)]);
                    }
                }
                let mut yi = Vec::new();
                let mut yp = Vec::new();
                for j in 0..m {
                    for i in 1..m {
                        yi.push(i + n * j);
                        yp.push([grid.axis(i), grid.axis(j) + 0.5 * h]);
                    }
                }
                Ok(Self {
                    x: (GradientTable::new(2, xp)?, xi),
                    y: Some((GradientTable::new(2, yp)?, yi)),
                })
            }
        }
    }

    /// Record the full gradient of `u` at every tabulated face.
    fn push(&mut self, u: &GridField) -> Result<()> {
        let grid = *u.grid();
        let n = grid.nodes_per_axis();
        let m = n - 1;
        let h = grid.spacing();
        let v = u.values();
        let normal = face_gradient(u)?;
        let Some((ty, yi)) = self.y.as_mut() else {
            let gx = self.x.1.iter().map(|&f| normal.x[f]).collect();
            return self.x.0.push(vec![gx]);
        };
        // Tangential components average centred differences at the two nodes of the face.
        let cy = |i: usize, j: usize| (v[i + n * (j + 1)] - v[i + n * (j - 1)]) / (2.0 * h);
        let cx = |i: usize, j: usize| (v[i + 1 + n * j] - v[i - 1 + n * j]) / (2.0 * h);
        let (mut gx, mut gy) = (Vec::new(), Vec::new());
        for &f in &self.x.1 {
            let (i, j) = (f % m, f / m);
            gx.push(normal.x[f]);
            gy.push(0.5 * (cy(i, j) + cy(i + 1, j)));
        }
        self.x.0.push(vec![gx, gy])?;
        let (mut gx, mut gy) = (Vec::new(), Vec::new());
        for &f in yi.iter() {
            let (i, j) = (f % n, f / n);
            gx.push(0.5 * (cx(i, j) + cx(i, j + 1)));
            gy.push(normal.y[f]);
        }
        ty.push(vec![gx, gy])
    }

    fn flux(&self, grid: &Grid, plan: &ForcingPlan, order: usize) -> Result<FaceFlux> {
        let mut out = FaceFlux::zeros(grid);
        let fx = plap_forcing_with(plan, order, &self.x.0)?;
        for (k, &f) in self.x.1.iter().enumerate() {
            out.x[f] = fx[0][k];
        }
        if let Some((ty, yi)) = &self.y {
            let fy = plap_forcing_with(plan, order, ty)?;
            for (k, &f) in yi.iter().enumerate() {
                out.y[f] = fy[1][k];
            }
        }
        Ok(out)
    }
}

/// Solve `u_0, ..., u_order` of the problem's hierarchy.
///
/// `u_0` solves `Δu_0 = f` with the full boundary data; higher orders solve
/// `Δu_n = -div F_n` with zero boundary data. The returned state has `t = 0`.
pub fn solve_dirichlet_hierarchy(
    problem: &DirichletProblem,
    order: usize,
) -> Result<HierarchyState> {
    if problem.kind == HomotopyKind::PLapOrdinary && !(problem.p > 1.0 && problem.p < 3.0) {
        warn!(
            "ordinary series at p = {} lies outside (1, 3) and may diverge",
            problem.p
        );
    }
    let grid = problem.grid;
    let solver = PoissonSolver::new(&grid)?;
    let u0 = solver
        .solve(PoissonRhs::Field(&problem.source), &problem.boundary)
        .map_err(|e| e.at_order(0))?;
    let mut coeffs = vec![u0];
    if order > 0 {
        let spec = problem.homotopy()?;
        let plan = ForcingPlan::new(order, &spec)?;
        let mut tables = FaceTables::new(&grid)?;
        let zero_bc = vec![0.0; problem.boundary.len()];
        for k in 1..=order {
            tables.push(&coeffs[k - 1]).map_err(|e| e.at_order(k))?;
            let flux = tables.flux(&grid, &plan, k).map_err(|e| e.at_order(k))?;
            let uk = solver
                .solve(PoissonRhs::NegDivergence(&flux), &zero_bc)
                .map_err(|e| e.at_order(k))?;
            coeffs.push(uk);
        }
    }
    HierarchyState::from_coeffs(coeffs, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_quadratic_is_exact() {
        let prob = DirichletProblem::ball_1d(16, 2.0, HomotopyKind::PLapOrdinary).unwrap();
        let u = solve_poisson_dirichlet(&prob, PoissonRhs::Field(prob.source())).unwrap();
        for (x, v) in prob.grid().xs().iter().zip(u.values()) {
            assert!((v - 0.5 * (1.0 - x * x)).abs() < 1e-13);
        }
    }

    #[test]
    fn harmonic_quadratic_on_square() {
        let grid = Grid::square(-1.0, 1.0, 13);
        let g = |x: f64, y: f64| x * x - y * y;
        let bnd: Vec<f64> = boundary_nodes(&grid)
            .iter()
            .map(|&i| {
                let [x, y] = grid.point(i);
                g(x, y)
            })
            .collect();
        let prob = DirichletProblem::new(GridField::zeros(grid), bnd, 2.0, HomotopyKind::PLapDual)
            .unwrap();
        let u = solve_poisson_dirichlet(&prob, PoissonRhs::Field(prob.source())).unwrap();
        let want = GridField::from_fn(grid, g);
        for (a, b) in u.values().iter().zip(want.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_inverts_solve() {
        let grid = Grid::square(-1.0, 1.0, 11);
        let f = GridField::from_fn(grid, |x, y| (3.0 * x).sin() + x * y * y);
        let prob = DirichletProblem::new(f.clone(), vec![0.0; 40], 2.0, HomotopyKind::PLapOrdinary)
            .unwrap();
        let u = solve_poisson_dirichlet(&prob, PoissonRhs::Field(&f)).unwrap();
        let lap = laplacian(&u).unwrap();
        for i in 0..grid.len() {
            if !grid.is_boundary(i) {
                assert!((lap.values()[i] - f.values()[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_bad_problems() {
        assert!(DirichletProblem::ball_1d(4, 2.0, HomotopyKind::PLapDual).is_err());
        assert!(DirichletProblem::ball_1d(16, 2.0, HomotopyKind::BurgersLinear).is_err());
        let grid = Grid::line(-1.0, 1.0, 17);
        assert!(matches!(
            DirichletProblem::new(
                GridField::zeros(grid),
                vec![0.0; 3],
                2.0,
                HomotopyKind::PLapDual
            ),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn p_two_series_is_u0() {
        let prob = DirichletProblem::ball_1d(32, 2.0, HomotopyKind::PLapOrdinary).unwrap();
        let state = solve_dirichlet_hierarchy(&prob, 3).unwrap();
        let s = state.partial_sum(prob.homotopy().unwrap().target_delta);
        assert_eq!(&s.values, state.coeff(0));
        assert!(!state.coeff(1).is_zero());
    }
}
