//! Uniform grids and the real-valued fields sampled on them.

use crate::error::{Error, Result};

/// Uniform sampling layouts.
///
/// `Periodic` samples `[0, 1)` at `x_j = j / n`. `Line` samples `[lo, hi]`
/// at `n` nodes including both ends. `Square` samples `[lo, hi]^2` with `n`
/// nodes per axis, stored with `x` varying fastest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Grid {
    Periodic { n: usize },
    Line { lo: f64, hi: f64, n: usize },
    Square { lo: f64, hi: f64, n: usize },
}

impl Grid {
    pub fn periodic(n: usize) -> Self {
        Grid::Periodic { n }
    }

    pub fn line(lo: f64, hi: f64, n: usize) -> Self {
        Grid::Line { lo, hi, n }
    }

    pub fn square(lo: f64, hi: f64, n: usize) -> Self {
        Grid::Square { lo, hi, n }
    }

    pub fn dim(&self) -> usize {
        match self {
            Grid::Square { .. } => 2,
            _ => 1,
        }
    }

    /// Nodes per axis.
    pub fn nodes_per_axis(&self) -> usize {
        match *self {
            Grid::Periodic { n } | Grid::Line { n, .. } | Grid::Square { n, .. } => n,
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            Grid::Periodic { n } | Grid::Line { n, .. } => n,
            Grid::Square { n, .. } => n * n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> f64 {
        match *self {
            Grid::Periodic { n } => 1.0 / n as f64,
            Grid::Line { lo, hi, n } | Grid::Square { lo, hi, n } => (hi - lo) / (n - 1) as f64,
        }
    }

    /// Coordinate along one axis.
    pub fn axis(&self, i: usize) -> f64 {
        match *self {
            Grid::Periodic { n } => i as f64 / n as f64,
            Grid::Line { lo, hi, n } | Grid::Square { lo, hi, n } => {
                if i + 1 == n {
                    hi
                } else {
                    lo + i as f64 * (hi - lo) / (n - 1) as f64
                }
            }
        }
    }

    /// Coordinates of a flat index; the second entry is 0 for 1D grids.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        match *self {
            Grid::Square { n, .. } => [self.axis(idx % n), self.axis(idx / n)],
            _ => [self.axis(idx), 0.0],
        }
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// 1D coordinates of all nodes (first axis for 2D grids).
    pub fn xs(&self) -> Vec<f64> {
        (0..self.nodes_per_axis()).map(|i| self.axis(i)).collect()
    }

    pub fn is_boundary(&self, idx: usize) -> bool {
        match *self {
            Grid::Periodic { .. } => false,
            Grid::Line { n, .. } => idx == 0 || idx + 1 == n,
            Grid::Square { n, .. } => {
                let (i, j) = (idx % n, idx / n);
                i == 0 || j == 0 || i + 1 == n || j + 1 == n
            }
        }
    }

    /// Quadrature weights: uniform for periodic grids, trapezoidal otherwise.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        match *self {
            Grid::Periodic { n } => vec![h; n],
            Grid::Line { n, .. } => (0..n)
                .map(|i| if i == 0 || i + 1 == n { 0.5 * h } else { h })
                .collect(),
            Grid::Square { n, .. } => {
                let w1: Vec<f64> = (0..n)
                    .map(|i| if i == 0 || i + 1 == n { 0.5 * h } else { h })
                    .collect();
                (0..n * n).map(|k| w1[k % n] * w1[k / n]).collect()
            }
        }
    }

    pub fn check_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Real samples on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    grid: Grid,
    values: Vec<f64>,
}

impl GridField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Samples `f(x, y)` at every node (`y = 0` in 1D).
    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|i| {
                let [x, y] = grid.point(i);
                f(x, y)
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &GridField) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        for (s, o) in self.values.iter_mut().zip(&other.values) {
            *s += a * o;
        }
        Ok(())
    }

    pub fn scale(&mut self, a: f64) {
        self.values.iter_mut().for_each(|v| *v *= a);
    }

    /// Weighted integral over the grid.
    pub fn integral(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v)
            .sum()
    }
}
