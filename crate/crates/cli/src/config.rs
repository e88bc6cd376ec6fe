//! Run configuration: a versioned JSON document naming one experiment.

use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use serilin::analysis::Norm;
use serilin::plap::MAX_PARTITION_ORDER;
use serilin::HomotopyKind;

/// Version of the config layout accepted by this build.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest order of the periodic Burgers hierarchy accepted from configs.
pub const MAX_BURGERS_ORDER: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    /// Artifact directory name and log label.
    pub name: String,
    #[serde(default)]
    pub description: String,
    /// Seed for the random forcing; experiments without randomness ignore it.
    #[serde(default)]
    pub seed: u64,
    /// Output root; `--out` and `SERILIN_OUT` take precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    pub experiment: Experiment,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Experiment {
    DeltaIc(DeltaIcParams),
    CosineSquared(CosineParams),
    Turbulence(TurbulenceParams),
    DirichletErrors(DirichletErrorParams),
    DirichletRates(DirichletRateParams),
    Barenblatt(BarenblattParams),
}

/// Linear advection speed in the homotopy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VChoice {
    One,
    InverseReynolds,
}

impl VChoice {
    pub fn value(self, reynolds: f64) -> f64 {
        match self {
            VChoice::One => 1.0,
            VChoice::InverseReynolds => 1.0 / reynolds,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            VChoice::One => "one",
            VChoice::InverseReynolds => "inverse_reynolds",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Ordinary,
    Dual,
}

impl SeriesKind {
    pub fn homotopy(self) -> HomotopyKind {
        match self {
            SeriesKind::Ordinary => HomotopyKind::PLapOrdinary,
            SeriesKind::Dual => HomotopyKind::PLapDual,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SeriesKind::Ordinary => "ordinary",
            SeriesKind::Dual => "dual",
        }
    }
}

/// Exact partial sums of the point-mass Burgers solution on the line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaIcParams {
    pub reynolds: f64,
    pub v: Vec<VChoice>,
    pub max_order: usize,
    pub times: Vec<f64>,
    /// Errors are sampled on `vt + [-half_width, half_width]`.
    pub half_width: f64,
    pub points: usize,
}

/// Periodic cosine-squared IC: series (optionally refed) and DNS against the exact solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosineParams {
    pub reynolds: f64,
    pub v: Vec<VChoice>,
    pub grid: usize,
    pub dt: f64,
    pub order: usize,
    pub times: Vec<f64>,
    /// One series run per entry; 0 disables refeeding.
    pub refeed_every: Vec<usize>,
    #[serde(default)]
    pub dns: bool,
}

/// Randomly forced periodic Burgers run and its energy spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TurbulenceParams {
    pub reynolds: f64,
    pub v: VChoice,
    pub grid: usize,
    pub dt: f64,
    pub order: usize,
    pub t_final: f64,
    pub k_min: usize,
    pub k_max: usize,
    pub refeed_every: usize,
    /// Inclusive wavenumber range of the slope fit.
    pub fit_range: [usize; 2],
}

/// Error of the Dirichlet partial sums against the radial solution, per order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirichletErrorParams {
    pub dim: usize,
    pub ps: Vec<f64>,
    pub series: Vec<SeriesKind>,
    /// Intervals per axis.
    pub grids: Vec<usize>,
    pub max_order: usize,
    pub norm: Norm,
}

/// Convergence rate of the Dirichlet series against `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirichletRateParams {
    pub dim: usize,
    pub ps: Vec<f64>,
    pub series: Vec<SeriesKind>,
    pub grid: usize,
    pub max_order: usize,
    /// Fixed plateau index; `None` detects it from the metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_plateau: Option<usize>,
    pub norm: Norm,
}

/// FEM evolution hierarchy from a point mass against the Barenblatt profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarenblattParams {
    pub ps: Vec<f64>,
    pub series: Vec<SeriesKind>,
    pub order: usize,
    pub dx: f64,
    pub dt: f64,
    pub half_width: f64,
    pub t_final: f64,
    /// Also run a refed hierarchy of this order, refeeding every step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refeed_order: Option<usize>,
}

/// Parse and validate a config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let config: RunConfig =
        serde_json::from_str(text).context("config does not match the schema")?;
    config.validate()?;
    Ok(config)
}

fn positive(name: &str, x: f64) -> Result<()> {
    ensure!(
        x > 0.0 && x.is_finite(),
        "{name} must be positive and finite, got {x}"
    );
    Ok(())
}

fn times_in(name: &str, times: &[f64], t_final: f64) -> Result<()> {
    ensure!(!times.is_empty(), "{name} must not be empty");
    for &t in times {
        ensure!(
            t > 0.0 && t <= t_final,
            "{name} entries must lie in (0, {t_final}], got {t}"
        );
    }
    Ok(())
}

fn p_values(ps: &[f64], allow_two: bool) -> Result<()> {
    ensure!(!ps.is_empty(), "ps must not be empty");
    for &p in ps {
        ensure!(p > 1.0 && p.is_finite(), "p must exceed 1, got {p}");
        ensure!(
            allow_two || p != 2.0,
            "p = 2 has zero error at every order and no rate"
        );
    }
    Ok(())
}

fn plap_order(order: usize) -> Result<()> {
    ensure!(
        (1..=MAX_PARTITION_ORDER).contains(&order),
        "order must lie in 1..={MAX_PARTITION_ORDER}, got {order}"
    );
    Ok(())
}

fn dirichlet_grid(dim: usize, n_g: usize) -> Result<()> {
    let cap = if dim == 1 { 1 << 16 } else { 512 };
    ensure!(
        (8..=cap).contains(&n_g),
        "{dim}D grids need 8..={cap} intervals, got {n_g}"
    );
    Ok(())
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.schema_version == SCHEMA_VERSION,
            "schema_version {} is not supported (expected {SCHEMA_VERSION})",
            self.schema_version
        );
        ensure!(
            !self.name.is_empty()
                && self
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_'),
            "name must be non-empty ASCII letters, digits, '-' or '_', got {:?}",
            self.name
        );
        match &self.experiment {
            Experiment::DeltaIc(p) => {
                positive("reynolds", p.reynolds)?;
                positive("half_width", p.half_width)?;
                ensure!(!p.v.is_empty(), "v must not be empty");
                ensure!(p.max_order <= 12, "max_order must be at most 12");
                ensure!(
                    (3..=100_000).contains(&p.points),
                    "points must lie in 3..=100000"
                );
                times_in("times", &p.times, f64::INFINITY)?;
            }
            Experiment::CosineSquared(p) => {
                positive("reynolds", p.reynolds)?;
                positive("dt", p.dt)?;
                ensure!(!p.v.is_empty(), "v must not be empty");
                ensure!(
                    (8..=1 << 16).contains(&p.grid),
                    "grid must lie in 8..=65536"
                );
                ensure!(
                    p.order <= MAX_BURGERS_ORDER,
                    "order must be at most {MAX_BURGERS_ORDER}"
                );
                ensure!(
                    !p.refeed_every.is_empty() || p.dns,
                    "nothing to run: no series and no DNS"
                );
                let t_final = p.times.iter().fold(0.0f64, |m, &t| m.max(t));
                times_in("times", &p.times, t_final)?;
                ensure!(t_final / p.dt <= 1e7, "more than 1e7 steps requested");
            }
            Experiment::Turbulence(p) => {
                positive("reynolds", p.reynolds)?;
                positive("dt", p.dt)?;
                positive("t_final", p.t_final)?;
                ensure!(
                    (8..=1 << 16).contains(&p.grid),
                    "grid must lie in 8..=65536"
                );
                ensure!(
                    p.order <= MAX_BURGERS_ORDER,
                    "order must be at most {MAX_BURGERS_ORDER}"
                );
                ensure!(p.refeed_every >= 1, "refeed_every must be at least 1");
                ensure!(
                    p.k_min >= 1 && p.k_min <= p.k_max && p.k_max < p.grid / 2,
                    "forcing band must satisfy 1 <= k_min <= k_max < grid/2"
                );
                let [lo, hi] = p.fit_range;
                ensure!(
                    lo >= 1 && lo < hi && hi <= p.grid / 2,
                    "fit_range must satisfy 1 <= lo < hi <= grid/2"
                );
                ensure!(p.t_final / p.dt <= 1e7, "more than 1e7 steps requested");
            }
            Experiment::DirichletErrors(p) => {
                ensure!(p.dim == 1 || p.dim == 2, "dim must be 1 or 2");
                p_values(&p.ps, true)?;
                ensure!(
                    !p.series.is_empty() && !p.grids.is_empty(),
                    "series and grids must not be empty"
                );
                for &g in &p.grids {
                    dirichlet_grid(p.dim, g)?;
                }
                plap_order(p.max_order)?;
            }
            Experiment::DirichletRates(p) => {
                ensure!(p.dim == 1 || p.dim == 2, "dim must be 1 or 2");
                p_values(&p.ps, false)?;
                ensure!(!p.series.is_empty(), "series must not be empty");
                dirichlet_grid(p.dim, p.grid)?;
                plap_order(p.max_order)?;
                if let Some(n) = p.n_plateau {
                    ensure!(
                        n >= 1 && n <= p.max_order,
                        "n_plateau must lie in 1..=max_order"
                    );
                }
            }
            Experiment::Barenblatt(p) => {
                p_values(&p.ps, true)?;
                ensure!(!p.series.is_empty(), "series must not be empty");
                plap_order(p.order)?;
                if let Some(r) = p.refeed_order {
                    plap_order(r)?;
                }
                positive("dx", p.dx)?;
                positive("dt", p.dt)?;
                positive("half_width", p.half_width)?;
                positive("t_final", p.t_final)?;
                let cells = 2.0 * p.half_width / p.dx;
                if (cells - cells.round()).abs() > 1e-9 * cells
                    || cells.round() < 4.0
                    || cells > 1e6
                {
                    bail!("2*half_width/dx must be an integer in 4..=1e6, got {cells}");
                }
                ensure!(p.t_final / p.dt <= 1e6, "more than 1e6 steps requested");
            }
        }
        Ok(())
    }
}
