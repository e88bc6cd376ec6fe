use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::special::CompositeRule;

/// Integrable initial data on the line, together with its running integral.
#[derive(Clone)]
pub enum LineIc {
    /// `mass · δ(x)`.
    Dirac { mass: f64 },
    /// `height` on `[a, b]`, zero elsewhere.
    Box { a: f64, b: f64, height: f64 },
    /// A density `g` with `tg(x) = ∫_{-∞}^x g`, and points where either is not smooth.
    Custom {
        g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        tg: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        breaks: Vec<f64>,
    },
}

impl fmt::Debug for LineIc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineIc::Dirac { mass } => write!(f, "Dirac {{ mass: {mass} }}"),
            LineIc::Box { a, b, height } => write!(f, "Box {{ a: {a}, b: {b}, height: {height} }}"),
            LineIc::Custom { breaks, .. } => write!(f, "Custom {{ breaks: {breaks:?} }}"),
        }
    }
}

impl LineIc {
    fn g(&self, y: f64) -> f64 {
        match self {
            LineIc::Dirac { .. } => 0.0,
            LineIc::Box { a, b, height } => {
                if y >= *a && y <= *b {
                    *height
                } else {
                    0.0
                }
            }
            LineIc::Custom { g, .. } => g(y),
        }
    }

    fn tg(&self, y: f64) -> f64 {
        match self {
            LineIc::Dirac { mass } => {
                if y > 0.0 {
                    *mass
                } else {
                    0.0
                }
            }
            LineIc::Box { a, b, height } => height * (y.min(*b) - a).max(0.0),
            LineIc::Custom { tg, .. } => tg(y),
        }
    }

    fn breaks(&self) -> Vec<f64> {
        match self {
            LineIc::Dirac { .. } => vec![0.0],
            LineIc::Box { a, b, .. } => vec![*a, *b],
            LineIc::Custom { breaks, .. } => breaks.clone(),
        }
    }
}

/// Inputs of the Cole–Hopf quadrature oracle.
#[derive(Clone, Debug)]
pub struct LineOracleSpec {
    pub ic: LineIc,
    pub delta: f64,
    pub v: f64,
    pub reynolds: f64,
    /// Half-width of the window in kernel standard units; the Gaussian
    /// tail beyond it must be negligible (6.5 leaves about 1e-19).
    pub window: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
}

impl LineOracleSpec {
    pub fn new(ic: LineIc, delta: f64, v: f64, reynolds: f64) -> Self {
        Self {
            ic,
            delta,
            v,
            reynolds,
            window: 6.5,
            panels: 24,
            nodes_per_panel: 32,
        }
    }
}

/// Burgers solution on the line as a ratio of two Gaussian-kernel integrals.
pub fn cole_hopf_line_oracle(spec: &LineOracleSpec, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    if !(spec.reynolds > 0.0)
        || !(spec.window > 0.0)
        || spec.panels == 0
        || spec.nodes_per_panel == 0
    {
        return Err(Error::arg(
            "oracle needs positive R_e, window and node counts",
        ));
    }
    let re = spec.reynolds;
    let centre = x - (1.0 - spec.delta) * spec.v * t;
    let width = (4.0 * t / re).sqrt();
    let kernel = |y: f64| {
        let s = (centre - y) / width;
        (-s * s).exp() / (PI.sqrt() * width)
    };
    let rule = CompositeRule::new(
        centre - spec.window * width,
        centre + spec.window * width,
        spec.panels,
        spec.nodes_per_panel,
        &spec.ic.breaks(),
    );
    let half = 0.5 * spec.delta * re;
    let exponents: Vec<f64> = rule.nodes.iter().map(|&y| -half * spec.ic.tg(y)).collect();
    let top = exponents.iter().fold(f64::NEG_INFINITY, |m, &e| m.max(e));
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&y, &w), &e) in rule.nodes.iter().zip(&rule.weights).zip(&exponents) {
        let kw = w * kernel(y) * (e - top).exp();
        den += kw;
        num += kw * spec.ic.g(y);
    }
    if let LineIc::Dirac { mass } = spec.ic {
        // g·e^{-δR𝒯g/2} = -(2/δR) d/dy e^{-δR𝒯g/2}, a point mass at 0.
        let jump = if half == 0.0 {
            mass
        } else {
            -(-half * mass).exp_m1() / half
        };
        let inside = (centre).abs() <= spec.window * width;
        if inside {
            num += jump * kernel(0.0) * (-top).exp();
        }
    }
    if !(den >= 1e-12) {
        return Err(Error::SingularEvaluation(format!(
            "Cole-Hopf denominator {den:e} at t={t}, x={x}"
        )));
    }
    Ok(num / den)
}
