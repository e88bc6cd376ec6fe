//! Executes a validated config and writes its artifacts.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use log::info;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use serilin::analysis::{energy_spectrum, error_metric, spectrum_slope, ConvergenceReport, Norm};
use serilin::elliptic::{solve_dirichlet_hierarchy, DirichletProblem};
use serilin::exact::{burgers_delta_exact, burgers_delta_taylor, cosine_squared_exact};
use serilin::fem::{solve_evolution_hierarchy, EvolutionRun};
use serilin::hierarchy::partial_sum_of;
use serilin::spectral::{dns_burgers, solve_periodic_hierarchy, ForcingSpec, PeriodicRun};
use serilin::{Grid, GridField, HomotopySpec};

use crate::config::{
    BarenblattParams, CosineParams, DeltaIcParams, DirichletErrorParams, DirichletRateParams,
    Experiment, RunConfig, SeriesKind, TurbulenceParams,
};

/// Failure class, mapped to the process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    Config,
    Solver,
    Io,
}

impl FailureKind {
    pub fn exit_code(self) -> u8 {
        match self {
            FailureKind::Config => 2,
            FailureKind::Solver => 3,
            FailureKind::Io => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FailureKind::Config => "config",
            FailureKind::Solver => "solver",
            FailureKind::Io => "io",
        }
    }
}

#[derive(Debug)]
pub struct RunError {
    pub kind: FailureKind,
    pub error: anyhow::Error,
}

impl RunError {
    pub fn config(error: anyhow::Error) -> Self {
        Self {
            kind: FailureKind::Config,
            error,
        }
    }

    pub fn solver(error: impl Into<anyhow::Error>) -> Self {
        Self {
            kind: FailureKind::Solver,
            error: error.into(),
        }
    }

    pub fn io(error: anyhow::Error) -> Self {
        Self {
            kind: FailureKind::Io,
            error,
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self, target: &str) -> Value {
        json!({
            "error": self.kind.label(),
            "exit_code": self.kind.exit_code(),
            "target": target,
            "message": format!("{:#}", self.error),
        })
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {:#}", self.kind.label(), self.error)
    }
}

impl From<serilin::Error> for RunError {
    fn from(e: serilin::Error) -> Self {
        RunError::solver(e)
    }
}

type Outcome<T> = std::result::Result<T, RunError>;

/// In-memory CSV table.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(file: &str, header: &[&'static str]) -> Self {
        Self {
            file: file.to_string(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn to_bytes(&self) -> Outcome<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| RunError::io(anyhow!(e));
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.into_inner()
            .map_err(|e| RunError::io(anyhow!(e.to_string())))
    }
}

/// 17 significant digits, locale-free.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Tables and summary produced by one experiment.
#[derive(Clone, Debug)]
pub struct Artifacts {
    pub tables: Vec<Table>,
    pub summary: Value,
}

/// What [`run_config`] wrote.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub wall_time: f64,
    pub summary: Value,
}

/// Run one experiment and write `<out_root>/<name>/` with CSVs and `manifest.json`.
pub fn run_config(config: &RunConfig, out_root: &Path) -> Outcome<RunReport> {
    config.validate().map_err(RunError::config)?;
    let start = Instant::now();
    info!("running {}", config.name);
    let artifacts = compute(config)?;
    let wall_time = start.elapsed().as_secs_f64();

    let dir = out_root.join(&config.name);
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(RunError::io)?;
    let mut files = Vec::new();
    let mut listed = Vec::new();
    for table in &artifacts.tables {
        let bytes = table.to_bytes()?;
        let path = dir.join(&table.file);
        std::fs::write(&path, &bytes)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(RunError::io)?;
        listed.push(json!({
            "file": table.file,
            "rows": table.rows.len(),
            "sha256": hex::encode(Sha256::digest(&bytes)),
        }));
        files.push(path);
    }
    let manifest = json!({
        "name": config.name,
        "description": config.description,
        "schema_version": config.schema_version,
        "library_version": serilin::VERSION,
        "cli_version": env!("CARGO_PKG_VERSION"),
        "seed": config.seed,
        "threads": rayon::current_num_threads(),
        "wall_time_seconds": wall_time,
        "config": config,
        "artifacts": listed,
        "summary": artifacts.summary,
    });
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| RunError::io(anyhow!(e)))?;
    std::fs::write(&path, text + "\n")
        .with_context(|| format!("writing {}", path.display()))
        .map_err(RunError::io)?;
    files.push(path);
    Ok(RunReport {
        dir,
        files,
        wall_time,
        summary: artifacts.summary,
    })
}

/// Run the experiment without touching the filesystem.
pub fn compute(config: &RunConfig) -> Outcome<Artifacts> {
    match &config.experiment {
        Experiment::DeltaIc(p) => delta_ic(p),
        Experiment::CosineSquared(p) => cosine_squared(p),
        Experiment::Turbulence(p) => turbulence(p, config.seed),
        Experiment::DirichletErrors(p) => dirichlet_errors(p),
        Experiment::DirichletRates(p) => dirichlet_rates(p),
        Experiment::Barenblatt(p) => barenblatt(p),
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn delta_ic(p: &DeltaIcParams) -> Outcome<Artifacts> {
    let mut table = Table::new("errors.csv", &["v", "v_value", "t", "order", "max_error"]);
    let mut worst_final = Vec::new();
    for &v in &p.v {
        let speed = v.value(p.reynolds);
        let per_t: Vec<Vec<f64>> = p
            .times
            .par_iter()
            .map(|&t| -> Outcome<Vec<f64>> {
                let mut err = vec![0.0f64; p.max_order + 1];
                for x in linspace(speed * t - p.half_width, speed * t + p.half_width, p.points) {
                    let exact = burgers_delta_exact(t, x, 1.0, speed, p.reynolds)?;
                    let coeffs = burgers_delta_taylor(t, x, speed, p.reynolds, p.max_order)?;
                    let mut s = 0.0;
                    for (n, c) in coeffs.iter().enumerate() {
                        s += c;
                        err[n] = err[n].max((exact - s).abs());
                    }
                }
                Ok(err)
            })
            .collect::<Outcome<_>>()?;
        for (&t, err) in p.times.iter().zip(&per_t) {
            for (n, e) in err.iter().enumerate() {
                table.rows.push(vec![
                    v.label().into(),
                    num(speed),
                    num(t),
                    n.to_string(),
                    num(*e),
                ]);
            }
        }
        if let Some(last) = per_t.last() {
            worst_final.push(json!({ "v": v.label(), "max_error_by_order": last }));
        }
    }
    Ok(Artifacts {
        tables: vec![table],
        summary: json!({ "final_time": p.times.last(), "errors": worst_final }),
    })
}

fn cosine_ic(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| (2.0 * PI * j as f64 / n as f64).cos().powi(2) - 0.5)
        .collect()
}

fn cosine_squared(p: &CosineParams) -> Outcome<Artifacts> {
    let n = p.grid;
    let grid = Grid::periodic(n);
    let xs = grid.xs();
    let t_final = p.times.iter().fold(0.0f64, |m, &t| m.max(t));
    // The δ = 1 solution does not depend on the advection speed.
    let exact: Vec<GridField> = p
        .times
        .par_iter()
        .map(|&t| -> Outcome<GridField> {
            let vals = xs
                .iter()
                .map(|&x| cosine_squared_exact(t, x, 1.0, 0.0, p.reynolds, None))
                .collect::<serilin::Result<Vec<_>>>()?;
            Ok(GridField::new(grid, vals)?)
        })
        .collect::<Outcome<_>>()?;
    let exact_at = |t: f64| -> &GridField {
        let i = p
            .times
            .iter()
            .position(|&s| (s - t).abs() <= 0.5 * p.dt)
            .expect("snapshot times come from the config");
        &exact[i]
    };
    let ic = cosine_ic(n);
    let mut table = Table::new(
        "errors.csv",
        &[
            "method",
            "v",
            "refeed_every",
            "t",
            "order",
            "max_error",
            "max_gradient",
        ],
    );
    let jobs: Vec<(crate::config::VChoice, usize)> =
        p.v.iter()
            .flat_map(|&v| p.refeed_every.iter().map(move |&r| (v, r)))
            .collect();
    let runs = jobs
        .par_iter()
        .map(|&(v, every)| -> Outcome<Vec<Vec<String>>> {
            let spec = HomotopySpec::burgers(v.value(p.reynolds), p.reynolds)?;
            let run = PeriodicRun {
                order: p.order,
                dt: p.dt,
                t_final,
                refeed_every: (every > 0).then_some(every),
                snapshot_times: p.times.clone(),
                ..PeriodicRun::default()
            };
            let snaps = solve_periodic_hierarchy(&ic, &spec, None, &run)?;
            let mut rows = Vec::new();
            for s in &snaps {
                let t = s.t();
                let ex = exact_at(t);
                for order in 0..=p.order {
                    let sum = partial_sum_of(&s.state.coeffs()[..=order], 1.0);
                    rows.push(vec![
                        "series".into(),
                        v.label().into(),
                        every.to_string(),
                        num(t),
                        order.to_string(),
                        num(error_metric(&sum, ex, Norm::Max)?),
                        num(max_gradient(sum.values())),
                    ]);
                }
            }
            Ok(rows)
        })
        .collect::<Outcome<Vec<_>>>()?;
    for rows in runs {
        table.rows.extend(rows);
    }
    let mut dns_final = None;
    if p.dns {
        for (t, u) in dns_burgers(&ic, None, p.dt, t_final, p.reynolds, &p.times)? {
            let err = error_metric(&GridField::new(grid, u.clone())?, exact_at(t), Norm::Max)?;
            table.rows.push(vec![
                "dns".into(),
                String::new(),
                String::new(),
                num(t),
                String::new(),
                num(err),
                num(max_gradient(&u)),
            ]);
            dns_final = Some(err);
        }
    }
    let exact_grad: Vec<f64> = exact.iter().map(|e| max_gradient(e.values())).collect();
    let mut grads = Table::new("exact_gradient.csv", &["t", "max_gradient"]);
    for (&t, g) in p.times.iter().zip(&exact_grad) {
        grads.rows.push(vec![num(t), num(*g)]);
    }
    Ok(Artifacts {
        tables: vec![table, grads],
        summary: json!({ "final_time": t_final, "dns_final_error": dns_final }),
    })
}

/// `max_j |u_{j+1} - u_{j-1}| / 2h` on the periodic grid.
fn max_gradient(u: &[f64]) -> f64 {
    let n = u.len();
    let h = 1.0 / n as f64;
    (0..n)
        .map(|j| ((u[(j + 1) % n] - u[(j + n - 1) % n]) / (2.0 * h)).abs())
        .fold(0.0, f64::max)
}

fn turbulence(p: &TurbulenceParams, seed: u64) -> Outcome<Artifacts> {
    let spec = HomotopySpec::burgers(p.v.value(p.reynolds), p.reynolds)?;
    let forcing = ForcingSpec::from_seed(p.k_min, p.k_max, seed)?;
    let run = PeriodicRun {
        order: p.order,
        dt: p.dt,
        t_final: p.t_final,
        refeed_every: Some(p.refeed_every),
        snapshot_times: vec![p.t_final],
        ..PeriodicRun::default()
    };
    let snaps = solve_periodic_hierarchy(&vec![0.0; p.grid], &spec, Some(&forcing), &run)?;
    let last = snaps
        .last()
        .ok_or_else(|| RunError::solver(anyhow!("no snapshot at t_final")))?;
    let u = last.state.partial_sum(1.0).values;
    let spectrum = energy_spectrum(&u, last.t())?;
    let slope = spectrum_slope(&spectrum, p.fit_range[0], p.fit_range[1])?;

    let mut spec_table = Table::new("spectrum.csv", &["k", "energy", "k2_energy"]);
    for (k, e) in spectrum.energy.iter().enumerate() {
        spec_table
            .rows
            .push(vec![k.to_string(), num(*e), num(e * (k * k) as f64)]);
    }
    let mut field = Table::new("field.csv", &["x", "u"]);
    for (x, v) in u.grid().xs().iter().zip(u.values()) {
        field.rows.push(vec![num(*x), num(*v)]);
    }
    let mut amps = Table::new("forcing.csv", &["k", "amplitude", "phase"]);
    for (i, (a, ph)) in forcing.amplitudes.iter().zip(&forcing.phases).enumerate() {
        amps.rows
            .push(vec![(p.k_min + i).to_string(), num(*a), num(*ph)]);
    }
    Ok(Artifacts {
        tables: vec![spec_table, field, amps],
        summary: json!({
            "t": last.t(),
            "slope": slope,
            "fit_range": p.fit_range,
            "energy": spectrum.total,
        }),
    })
}

fn dirichlet_problem(
    dim: usize,
    n_g: usize,
    p: f64,
    kind: SeriesKind,
) -> serilin::Result<DirichletProblem> {
    if dim == 1 {
        DirichletProblem::ball_1d(n_g, p, kind.homotopy())
    } else {
        DirichletProblem::unit_square(n_g, p, kind.homotopy())
    }
}

fn dirichlet_metric(
    problem: &DirichletProblem,
    order: usize,
    norm: Norm,
) -> serilin::Result<Vec<f64>> {
    let state = solve_dirichlet_hierarchy(problem, order)?;
    let exact = problem.radial_solution()?;
    let delta = problem.homotopy()?.target_delta;
    (0..=order)
        .map(|n| error_metric(&partial_sum_of(&state.coeffs()[..=n], delta), &exact, norm))
        .collect()
}

fn status(r: &serilin::Result<impl Sized>) -> String {
    match r {
        Ok(_) => "ok".into(),
        Err(e) => e.to_string(),
    }
}

fn dirichlet_errors(p: &DirichletErrorParams) -> Outcome<Artifacts> {
    let cases: Vec<(SeriesKind, f64, usize)> = p
        .series
        .iter()
        .flat_map(|&s| {
            p.ps.iter()
                .flat_map(move |&pv| p.grids.iter().map(move |&g| (s, pv, g)))
        })
        .collect();
    let results: Vec<serilin::Result<Vec<f64>>> = cases
        .par_iter()
        .map(|&(s, pv, g)| {
            dirichlet_metric(&dirichlet_problem(p.dim, g, pv, s)?, p.max_order, p.norm)
        })
        .collect();
    let mut table = Table::new(
        "errors.csv",
        &["dim", "series", "p", "grid", "order", "metric", "status"],
    );
    let mut failures = 0;
    for (&(s, pv, g), r) in cases.iter().zip(&results) {
        let base = |order: String, metric: String, st: String| {
            vec![
                p.dim.to_string(),
                s.label().into(),
                num(pv),
                g.to_string(),
                order,
                metric,
                st,
            ]
        };
        match r {
            Ok(m) => {
                for (n, v) in m.iter().enumerate() {
                    table.rows.push(base(n.to_string(), num(*v), "ok".into()));
                }
            }
            Err(_) => {
                failures += 1;
                table
                    .rows
                    .push(base(String::new(), String::new(), status(r)));
            }
        }
    }
    Ok(Artifacts {
        tables: vec![table],
        summary: json!({ "cases": cases.len(), "failures": failures }),
    })
}

fn dirichlet_rates(p: &DirichletRateParams) -> Outcome<Artifacts> {
    let cases: Vec<(SeriesKind, f64)> = p
        .series
        .iter()
        .flat_map(|&s| p.ps.iter().map(move |&pv| (s, pv)))
        .collect();
    let results: Vec<serilin::Result<ConvergenceReport>> = cases
        .par_iter()
        .map(|&(s, pv)| {
            let metric = dirichlet_metric(
                &dirichlet_problem(p.dim, p.grid, pv, s)?,
                p.max_order,
                p.norm,
            )?;
            let label = format!("{}D {} p={pv}", p.dim, s.label());
            ConvergenceReport::new(metric, p.norm, p.n_plateau, label)
        })
        .collect();
    let mut table = Table::new(
        "rates.csv",
        &["dim", "series", "p", "rate", "n_plateau", "status"],
    );
    let mut reports = Vec::new();
    for (&(s, pv), r) in cases.iter().zip(&results) {
        let (rate, n_pl) = match r {
            Ok(rep) => (num(rep.rate), rep.n_plateau.to_string()),
            Err(_) => (String::new(), String::new()),
        };
        table.rows.push(vec![
            p.dim.to_string(),
            s.label().into(),
            num(pv),
            rate,
            n_pl,
            status(r),
        ]);
        if let Ok(rep) = r {
            reports.push(rep.clone());
        }
    }
    let mut metrics = Table::new("metrics.csv", &["label", "order", "metric"]);
    for rep in &reports {
        for (n, m) in rep.metric.iter().enumerate() {
            metrics
                .rows
                .push(vec![rep.label.clone(), n.to_string(), num(*m)]);
        }
    }
    Ok(Artifacts {
        tables: vec![table, metrics],
        summary: json!({ "cases": cases.len(), "failures": cases.len() - reports.len() }),
    })
}

/// Residuals by order, and for the refed run the residual at its order and
/// whether it diverged.
type BarenblattCase = (
    serilin::Result<Vec<f64>>,
    Option<serilin::Result<(f64, bool)>>,
);

fn barenblatt(p: &BarenblattParams) -> Outcome<Artifacts> {
    let cases: Vec<(SeriesKind, f64)> = p
        .series
        .iter()
        .flat_map(|&s| p.ps.iter().map(move |&pv| (s, pv)))
        .collect();
    let base = |s: SeriesKind, pv: f64| EvolutionRun {
        p: pv,
        dual: s == SeriesKind::Dual,
        order: p.order,
        dx: p.dx,
        dt: p.dt,
        half_width: p.half_width,
        t_final: p.t_final,
        refeed_every: None,
        report_times: vec![p.t_final],
    };
    let results: Vec<BarenblattCase> = cases
        .par_iter()
        .map(|&(s, pv)| {
            let plain =
                solve_evolution_hierarchy(&base(s, pv)).map(|r| r.rows[0].residuals.clone());
            let refed = p.refeed_order.map(|order| {
                let run = EvolutionRun {
                    order,
                    refeed_every: Some(1),
                    ..base(s, pv)
                };
                solve_evolution_hierarchy(&run).map(|r| (r.rows[0].residuals[order], r.diverged))
            });
            (plain, refed)
        })
        .collect();
    let mut table = Table::new(
        "residuals.csv",
        &[
            "series", "p", "method", "order", "residual", "diverged", "status",
        ],
    );
    let mut failures = 0;
    for (&(s, pv), (plain, refed)) in cases.iter().zip(&results) {
        let row = |method: &str, order: String, res: String, div: String, st: String| {
            vec![
                s.label().into(),
                num(pv),
                method.into(),
                order,
                res,
                div,
                st,
            ]
        };
        match plain {
            Ok(r) => {
                for (n, v) in r.iter().enumerate() {
                    table.rows.push(row(
                        "series",
                        n.to_string(),
                        num(*v),
                        String::new(),
                        "ok".into(),
                    ));
                }
            }
            Err(_) => {
                failures += 1;
                table.rows.push(row(
                    "series",
                    String::new(),
                    String::new(),
                    String::new(),
                    status(plain),
                ));
            }
        }
        if let (Some(r), Some(order)) = (refed, p.refeed_order) {
            match r {
                Ok((v, div)) => table.rows.push(row(
                    "refeed",
                    order.to_string(),
                    num(*v),
                    div.to_string(),
                    "ok".into(),
                )),
                Err(_) => {
                    failures += 1;
                    table.rows.push(row(
                        "refeed",
                        order.to_string(),
                        String::new(),
                        String::new(),
                        status(r),
                    ));
                }
            }
        }
    }
    Ok(Artifacts {
        tables: vec![table],
        summary: json!({ "cases": cases.len(), "failures": failures }),
    })
}
