use super::partitions::{factorial, partitions_unchecked, Partition, MAX_PARTITION_ORDER};
use crate::error::{Error, Result};
use crate::hierarchy::{HomotopyKind, HomotopySpec};

/// Nodes where `|∇u_0|²` falls below this value (zero or subnormal) are degenerate.
pub const DEGENERATE_SQ: f64 = f64::MIN_POSITIVE;
/// Lower-order gradients below this fraction of their maximum count as zero
/// at a degenerate node.
pub const NEGLIGIBLE_REL: f64 = 1e-8;

/// Gradients `∇u_0..∇u_{m-1}` sampled at common nodes.
#[derive(Clone, Debug)]
pub struct GradientTable {
    dim: usize,
    points: Vec<[f64; 2]>,
    /// `grads[order][component][node]`.
    grads: Vec<Vec<Vec<f64>>>,
    /// `pairs[a][b] = ⟨∇u_a, ∇u_b⟩` for `b ≤ a`.
    pairs: Vec<Vec<Vec<f64>>>,
}

impl GradientTable {
    pub fn new(dim: usize, points: Vec<[f64; 2]>) -> Result<Self> {
        if dim == 0 || dim > 2 {
            return Err(Error::arg(format!(
                "gradient tables support 1 or 2 components, got {dim}"
            )));
        }
        Ok(Self {
            dim,
            points,
            grads: Vec::new(),
            pairs: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of stored orders.
    pub fn orders(&self) -> usize {
        self.grads.len()
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn gradient(&self, order: usize) -> &[Vec<f64>] {
        &self.grads[order]
    }

    /// Append `∇u_m` for the next order `m`, one vector per component.
    pub fn push(&mut self, grad: Vec<Vec<f64>>) -> Result<()> {
        if grad.len() != self.dim || grad.iter().any(|c| c.len() != self.points.len()) {
            return Err(Error::GridMismatch(format!(
                "gradient needs {} components of {} nodes",
                self.dim,
                self.points.len()
            )));
        }
        let m = self.grads.len();
        let mut row = Vec::with_capacity(m + 1);
        for b in 0..=m {
            let other = if b == m { &grad } else { &self.grads[b] };
            let dot: Vec<f64> = (0..self.points.len())
                .map(|i| (0..self.dim).map(|c| grad[c][i] * other[c][i]).sum())
                .collect();
            row.push(dot);
        }
        self.pairs.push(row);
        self.grads.push(grad);
        Ok(())
    }

    fn pair(&self, a: usize, b: usize, i: usize) -> f64 {
        if b <= a {
            self.pairs[a][b][i]
        } else {
            self.pairs[b][a][i]
        }
    }
}

/// `p > 2`, read off the sign of the target `δ`.
fn degenerate_target(spec: &HomotopySpec) -> bool {
    match spec.kind {
        HomotopyKind::PLapOrdinary => spec.target_delta > 0.0,
        HomotopyKind::PLapDual => spec.target_delta < 0.0,
        HomotopyKind::BurgersLinear => false,
    }
}

/// Order-independent combinatorial data for assembling `F_1..F_n`.
#[derive(Clone, Debug)]
pub struct ForcingPlan {
    n: usize,
    /// `hpow[ℓ][m] = [δ^ℓ] h^m / m!`.
    hpow: Vec<Vec<f64>>,
    /// Partitions of `0..n` (index `s` holds `S_s`).
    parts: Vec<Vec<Partition>>,
    /// `|δ|` at the homotopy target when `p > 2`, else zero.
    reach: f64,
    guard: bool,
}

impl ForcingPlan {
    pub fn new(n: usize, spec: &HomotopySpec) -> Result<Self> {
        if !matches!(
            spec.kind,
            HomotopyKind::PLapOrdinary | HomotopyKind::PLapDual
        ) {
            return Err(Error::arg(
                "p-Laplacian forcing needs an ordinary or dual homotopy",
            ));
        }
        if n == 0 || n > MAX_PARTITION_ORDER {
            return Err(Error::arg(format!(
                "forcing order must lie in 1..={MAX_PARTITION_ORDER}, got {n}"
            )));
        }
        let h = spec.taylor_coeffs(n);
        let parts: Vec<Vec<Partition>> = (0..=n).map(partitions_unchecked).collect();
        let mut hpow = vec![vec![0.0; n + 1]; n + 1];
        for l in 1..=n {
            for p in &parts[l] {
                let term: f64 = p
                    .parts()
                    .map(|(j, c)| h[j].powi(c as i32) / factorial(c))
                    .product();
                hpow[l][p.norm()] += term;
            }
        }
        Ok(Self {
            n,
            hpow,
            parts,
            reach: if degenerate_target(spec) {
                spec.target_delta.abs()
            } else {
                0.0
            },
            guard: false,
        })
    }

    /// Zero the forcing at nodes where the expansion of `ln|∇u|` about
    /// `δ = 0` does not reach the target, for `p > 2` only.
    ///
    /// A refed `u_0` can have isolated near-zero gradients outside the
    /// support of a compactly supported solution, where the correction
    /// gradients dominate and `F_n` grows like `|∇u_0|^{1-n}`.
    pub fn with_reach_guard(mut self, on: bool) -> Self {
        self.guard = on;
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// True when the guard is on, `p > 2` and `Σ_{j≥1} |δ|^j |∇u_j| ≥ |∇u_0|` at node `i`, so the local
    /// expansion of `ln|∇u(δ)|` does not reach the target `δ`.
    fn outside_reach(&self, mags: &[Vec<f64>], i: usize) -> bool {
        if !self.guard {
            return false;
        }
        let mut w = 1.0;
        let mut lower = 0.0;
        for m in &mags[1..] {
            w *= self.reach;
            lower += w * m[i];
        }
        lower > 0.0 && lower >= mags[0][i]
    }

    /// `G_1..G_n` at one node from `ln|∇u_0|` and the pair-product series `g_q`.
    fn g_coeffs(&self, n: usize, l0: f64, gser: &[f64]) -> Vec<f64> {
        // L_j = ½ [δ^j] ln g(δ) for j = 1..n-1.
        let mut lser = vec![0.0; n];
        lser[0] = l0;
        for (j, lj) in lser.iter_mut().enumerate().skip(1) {
            let mut s = 0.0;
            for r in &self.parts[j] {
                let norm = r.norm();
                let sign = if norm % 2 == 1 { 1.0 } else { -1.0 };
                let beta = sign * factorial(norm - 1) / r.mult_factorial();
                let prod: f64 = r
                    .parts()
                    .map(|(q, c)| (gser[q] / gser[0]).powi(c as i32))
                    .product();
                s += beta * prod;
            }
            *lj = 0.5 * s;
        }
        let mut g = vec![0.0; n + 1];
        for (k, gk) in g.iter_mut().enumerate().skip(1) {
            let mut acc = 0.0;
            for l in 1..=k {
                for m in 1..=l {
                    let hm = self.hpow[l][m];
                    if hm != 0.0 {
                        acc += hm * self.log_power(m, k - l, &lser);
                    }
                }
            }
            *gk = acc;
        }
        g
    }

    /// `[δ^s] L(δ)^m` given the series coefficients of `L`.
    fn log_power(&self, m: usize, s: usize, lser: &[f64]) -> f64 {
        if s == 0 {
            return lser[0].powi(m as i32);
        }
        let mut acc = 0.0;
        for p in &self.parts[s] {
            let norm = p.norm();
            if norm > m {
                continue;
            }
            let alpha = factorial(m) / (factorial(m - norm) * p.mult_factorial());
            let prod: f64 = p.parts().map(|(j, c)| lser[j].powi(c as i32)).product();
            acc += alpha * lser[0].powi((m - norm) as i32) * prod;
        }
        acc
    }
}

/// Forcing flux `F_n` with `(∂_t - Δ) u_n = div F_n`, one vector per component.
///
/// `F_n = Σ_{k=1..n} G_k ∇u_{n-k}`, where `G_k` is the `δ^k` coefficient of
/// `|∇u(δ)|^{h(δ)}`. Nodes where `∇u_0` vanishes take the zero limit when
/// every lower gradient vanishes there too, and are reported otherwise.
/// See [`ForcingPlan::with_reach_guard`] for the optional cutoff.
pub fn plap_forcing(n: usize, table: &GradientTable, spec: &HomotopySpec) -> Result<Vec<Vec<f64>>> {
    let plan = ForcingPlan::new(n, spec)?;
    plap_forcing_with(&plan, n, table)
}

/// As [`plap_forcing`] with a prebuilt plan (`n ≤ plan.order()`).
pub fn plap_forcing_with(
    plan: &ForcingPlan,
    n: usize,
    table: &GradientTable,
) -> Result<Vec<Vec<f64>>> {
    if n == 0 || n > plan.n {
        return Err(Error::arg(format!(
            "order {n} is outside the plan (1..={})",
            plan.n
        )));
    }
    if table.orders() < n {
        return Err(Error::arg(format!(
            "F_{n} needs gradients through order {}, table has {}",
            n - 1,
            table.orders()
        )));
    }
    let nodes = table.len();
    let mags: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..nodes).map(|i| table.pair(j, j, i).sqrt()).collect())
        .collect();
    let lower_max: Vec<f64> = mags
        .iter()
        .map(|v| v.iter().fold(0.0f64, |m, &x| m.max(x)))
        .collect();

    let mut out = vec![vec![0.0; nodes]; table.dim];
    let mut gser = vec![0.0; n];
    for i in 0..nodes {
        let singular = || {
            let [x, y] = table.points[i];
            let coords = if table.dim == 1 { vec![x] } else { vec![x, y] };
            Error::SingularForcing { coords }
        };
        let g0 = table.pair(0, 0, i);
        if plan.outside_reach(&mags, i) {
            continue;
        }
        if !(g0 >= DEGENERATE_SQ) {
            if (1..n).any(|j| mags[j][i] > NEGLIGIBLE_REL * lower_max[j]) {
                return Err(singular());
            }
            continue;
        }
        for (q, gq) in gser.iter_mut().enumerate() {
            *gq = (0..=q).map(|a| table.pair(q - a, a, i)).sum();
        }
        let g = plan.g_coeffs(n, 0.5 * g0.ln(), &gser);
        for (c, comp) in out.iter_mut().enumerate() {
            let v: f64 = (1..=n).map(|k| g[k] * table.grads[n - k][c][i]).sum();
            if !v.is_finite() {
                return Err(singular());
            }
            comp[i] = v;
        }
    }
    Ok(out)
}
