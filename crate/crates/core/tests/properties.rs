use proptest::prelude::*;

use serilin::analysis::{convergence_rate, error_metric, Norm};
use serilin::elliptic::{solve_dirichlet_hierarchy, DirichletProblem, PoissonRhs, PoissonSolver};
use serilin::fem::{build_mesh, FemStepper};
use serilin::hierarchy::burgers_forcing;
use serilin::plap::{enumerate_partitions, plap_forcing, GradientTable};
use serilin::spectral::{fft_forward, fft_inverse};
use serilin::{Grid, GridField, HierarchyState, HomotopyKind, HomotopySpec};

fn pow2_samples() -> impl Strategy<Value = Vec<f64>> {
    (3u32..9).prop_flat_map(|e| prop::collection::vec(-10.0f64..10.0, 1usize << e))
}

/// Partition numbers by Euler's pentagonal recurrence.
fn partition_count(n: usize) -> usize {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            p[m] += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                p[m] += sign * p[m - g2];
            }
            k += 1;
        }
    }
    p[n] as usize
}

fn line_table(grads: &[Vec<f64>]) -> GradientTable {
    let n = grads[0].len();
    let mut t = GradientTable::new(1, (0..n).map(|i| [i as f64, 0.0]).collect()).unwrap();
    for g in grads {
        t.push(vec![g.clone()]).unwrap();
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fft_round_trip_and_parseval(u in pow2_samples()) {
        let hat = fft_forward(&u).unwrap();
        let back = fft_inverse(&hat).unwrap();
        let scale = u.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (a, b) in u.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
        let physical: f64 = u.iter().map(|v| v * v).sum::<f64>() / u.len() as f64;
        let spectral: f64 = hat.modes().iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((physical - spectral).abs() <= 1e-12 * physical.max(1.0));
    }

    #[test]
    fn partitions_are_complete_and_distinct(n in 1usize..16) {
        let parts = enumerate_partitions(n).unwrap();
        prop_assert_eq!(parts.len(), partition_count(n));
        prop_assert!(parts.iter().all(|p| p.weight() == n));
        let mut sorted = parts.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), parts.len());
    }

    #[test]
    fn first_forcing_is_h1_ln_grad_times_grad(
        g0 in prop::collection::vec(0.05f64..3.0, 1..12),
        p in 1.2f64..4.0,
    ) {
        let table = line_table(std::slice::from_ref(&g0));
        let ord = plap_forcing(1, &table, &HomotopySpec::plap_ordinary(p).unwrap()).unwrap();
        let dual = plap_forcing(1, &table, &HomotopySpec::plap_dual(p).unwrap()).unwrap();
        for (i, g) in g0.iter().enumerate() {
            let expect = g.abs().ln() * g;
            prop_assert!((ord[0][i] - expect).abs() < 1e-13);
            prop_assert!((dual[0][i] + expect).abs() < 1e-13);
        }
    }

    #[test]
    fn unit_gradient_gives_no_forcing(
        signs in prop::collection::vec(any::<bool>(), 1..10),
        n in 1usize..6,
        dual in any::<bool>(),
    ) {
        let g0: Vec<f64> = signs.iter().map(|&s| if s { 1.0 } else { -1.0 }).collect();
        let mut grads = vec![g0];
        grads.extend((1..n).map(|_| vec![0.0; signs.len()]));
        let spec = if dual { HomotopySpec::plap_dual(3.0) } else { HomotopySpec::plap_ordinary(3.0) }.unwrap();
        let f = plap_forcing(n, &line_table(&grads), &spec).unwrap();
        prop_assert!(f[0].iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn burgers_forcing_vanishes_for_zero_base(
        u0 in prop::collection::vec(-2.0f64..2.0, 8),
        k in 2usize..7,
    ) {
        // Every term of F_k with k ≥ 2 carries some u_j with j ≥ 1.
        let grid = Grid::periodic(8);
        let mut coeffs = vec![GridField::new(grid, u0).unwrap()];
        coeffs.extend((1..k).map(|_| GridField::zeros(grid)));
        let f = burgers_forcing(k, &coeffs, 0.3).unwrap();
        prop_assert!(f.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn refeed_is_idempotent_and_keeps_partial_sum(
        vals in prop::collection::vec(-1.0f64..1.0, 32),
        delta in -2.0f64..2.0,
    ) {
        let grid = Grid::periodic(8);
        let coeffs: Vec<GridField> = vals.chunks(8).map(|c| GridField::new(grid, c.to_vec()).unwrap()).collect();
        let state = HierarchyState::from_coeffs(coeffs, 0.5).unwrap();
        let once = state.refeed(delta);
        prop_assert_eq!(once.partial_sum(delta).values, state.partial_sum(delta).values);
        prop_assert_eq!(once.refeed(delta), once.clone());
    }

    #[test]
    fn metric_triangle_inequality(
        vals in prop::collection::vec(-5.0f64..5.0, 48),
        norm in prop_oneof![Just(Norm::L1), Just(Norm::L2), Just(Norm::Max)],
    ) {
        let grid = Grid::line(-1.0, 1.0, 16);
        let f = |s: &[f64]| GridField::new(grid, s.to_vec()).unwrap();
        let (a, b, c) = (f(&vals[..16]), f(&vals[16..32]), f(&vals[32..]));
        let ab = error_metric(&a, &b, norm).unwrap();
        let bc = error_metric(&b, &c, norm).unwrap();
        let ac = error_metric(&a, &c, norm).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert!((ab - error_metric(&b, &a, norm).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn rate_is_scale_invariant(
        metric in prop::collection::vec(1e-8f64..1.0, 2..9),
        scale in 1e-3f64..1e3,
    ) {
        let n = metric.len() - 1;
        let scaled: Vec<f64> = metric.iter().map(|m| m * scale).collect();
        let r = convergence_rate(&metric, n).unwrap();
        prop_assert!((r - convergence_rate(&scaled, n).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn geometric_metric_recovers_its_ratio(ln_ratio in -3.0f64..1.0, n in 1usize..8) {
        let metric: Vec<f64> = (0..=n).map(|k| (ln_ratio * k as f64).exp()).collect();
        prop_assert!((convergence_rate(&metric, n).unwrap() - ln_ratio).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ball_hierarchy_is_even(p in 1.4f64..3.6, dual in any::<bool>()) {
        let kind = if dual { HomotopyKind::PLapDual } else { HomotopyKind::PLapOrdinary };
        let problem = DirichletProblem::ball_1d(64, p, kind).unwrap();
        let state = solve_dirichlet_hierarchy(&problem, 3).unwrap();
        for c in state.coeffs() {
            let v = c.values();
            let scale = c.max_abs().max(1e-300);
            for i in 0..v.len() / 2 {
                prop_assert!((v[i] - v[v.len() - 1 - i]).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn poisson_maximum_principle(
        src in prop::collection::vec(0.0f64..4.0, 33),
        left in -1.0f64..1.0,
        right in -1.0f64..1.0,
    ) {
        // Δu = f ≥ 0 makes u subharmonic: no interior value exceeds the boundary.
        let grid = Grid::line(-1.0, 1.0, 33);
        let solver = PoissonSolver::new(&grid).unwrap();
        let f = GridField::new(grid, src).unwrap();
        let u = solver.solve(PoissonRhs::Field(&f), &[left, right]).unwrap();
        let top = left.max(right);
        prop_assert!(u.values().iter().all(|v| *v <= top + 1e-12));
    }

    #[test]
    fn fem_heat_step_conserves_mass_and_decays(
        vals in prop::collection::vec(-1.0f64..1.0, 20),
        dt in 1e-3f64..0.05,
    ) {
        let mesh = build_mesh(8.0, 0.25).unwrap();
        let mut a = vec![0.0; mesh.len()];
        let offset = (mesh.len() - vals.len()) / 2;
        a[offset..offset + vals.len()].copy_from_slice(&vals);
        let stepper = FemStepper::new(mesh.clone(), dt).unwrap();
        let next = stepper.step_order(&a, None).unwrap();
        let energy = |x: &[f64]| -> f64 { x.iter().zip(mesh.mass().matvec(x)).map(|(a, b)| a * b).sum() };
        // Mass leaks only through the boundary; the support sits 20 nodes inside.
        prop_assert!((mesh.discrete_mass(&next) - mesh.discrete_mass(&a)).abs() < 1e-6);
        prop_assert!(energy(&next) <= energy(&a) + 1e-14);
    }
}
