//! Solver behaviour on manufactured problems.

use fracdw::energy_monitor::norms;
use fracdw::numeric::observed_order;
use fracdw::problem_spec::{manufactured, BoundaryCondition, ScalarFn, SpaceTimeFn};
use fracdw::solver::{
    solve, solve_with, thomas_solve, SolverOptions, TridiagonalSystem, WaveCoupling,
};
use fracdw::{Execution, FracOrder};

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

#[test]
fn thomas_three_by_three_by_hand() {
    // eliminate: x1 = (1 + x2)/2, x2 = (x1 + x3)/2, x3 = (1 + x2)/2 → all ones
    let sys = TridiagonalSystem {
        sub: vec![0.0, -1.0, -1.0],
        diag: vec![2.0, 2.0, 2.0],
        sup: vec![-1.0, -1.0, 0.0],
        rhs: vec![1.0, 0.0, 1.0],
    };
    let x = thomas_solve(&sys).unwrap();
    assert!(x.iter().all(|v| (v - 1.0).abs() < 1e-15), "{x:?}");
}

#[test]
fn diffusion_error_decreases_under_refinement() {
    let m = manufactured("diffusion-dirichlet-poly", order(0.5)).unwrap();
    let errs: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&n| {
            let grid = m.spec.grid(n, n).unwrap();
            solve(&m.spec, &grid).unwrap().errors_against(&m.exact).0
        })
        .collect();
    let p1 = observed_order(errs[0], errs[1]);
    let p2 = observed_order(errs[1], errs[2]);
    // the dominant direction: h² against τ^{2−α}
    assert!(p1 > 1.3 && p2 > 1.3, "{errs:?}");
}

#[test]
fn robin_flux_residual_vanishes() {
    let m = manufactured("diffusion-robin-poly", order(0.5)).unwrap();
    let r = m.spec.bc.robin().unwrap().clone();
    let mut res = Vec::new();
    for n in [16, 32, 64] {
        let grid = m.spec.grid(n, n).unwrap();
        let field = solve(&m.spec, &grid).unwrap();
        let h = grid.h();
        let u = field.row(n);
        let ux = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
        let k = m.spec.coefficients.k.eval(0.0, 1.0);
        res.push((k * ux - (r.beta1.eval(1.0) * u[0] - r.mu1.eval(1.0))).abs());
    }
    let p = observed_order(res[1], res[2]);
    assert!(p >= 1.0 || res[2] < 1e-10, "{res:?}");
}

#[test]
fn wave_midpoint_beats_implicit() {
    let m = manufactured("wave-dirichlet-poly", order(0.5)).unwrap();
    let grid = m.spec.grid(256, 64).unwrap();
    let err = |c| {
        let opts = SolverOptions {
            wave_coupling: c,
            ..SolverOptions::default()
        };
        solve_with(&m.spec, &grid, &opts)
            .unwrap()
            .errors_against(&m.exact)
            .0
    };
    assert!(err(WaveCoupling::Midpoint) < err(WaveCoupling::Implicit));
}

#[test]
fn linear_in_data() {
    let base = manufactured("diffusion-varcoef", order(0.4)).unwrap().spec;
    let zero_u0 = base.with_initial(ScalarFn::constant(0.0), "0");
    let f1 = SpaceTimeFn::new(|x, t| (3.0 * x).sin() * (1.0 + t));
    let f2 = SpaceTimeFn::new(|x, t| x * (1.0 - x) * t * t);
    let (g1, g2) = (f1.clone(), f2.clone());
    let sum = SpaceTimeFn::new(move |x, t| g1.eval(x, t) + g2.eval(x, t));
    let grid = base.grid(32, 32).unwrap();
    let a = solve(&zero_u0.with_forcing(f1, "f1"), &grid).unwrap();
    let b = solve(&zero_u0.with_forcing(f2, "f2"), &grid).unwrap();
    let c = solve(&zero_u0.with_forcing(sum, "f1+f2"), &grid).unwrap();
    for ((x, y), z) in a
        .rows()
        .flatten()
        .zip(b.rows().flatten())
        .zip(c.rows().flatten())
    {
        assert!((x + y - z).abs() <= 1e-10 * (1.0 + z.abs()));
    }
}

#[test]
fn deterministic_across_runs_and_policies() {
    for name in fracdw::problem_spec::CATALOG {
        let spec = manufactured(name, order(0.6)).unwrap().spec;
        let grid = spec.grid(200, 100).unwrap();
        let run = |exec| {
            let opts = SolverOptions {
                exec,
                ..SolverOptions::default()
            };
            solve_with(&spec, &grid, &opts).unwrap()
        };
        let a = run(Execution::Parallel);
        let b = run(Execution::Parallel);
        let c = run(Execution::Sequential);
        assert_eq!(a, b, "{name}");
        assert_eq!(a.to_csv(), c.to_csv(), "{name}");
    }
}

#[test]
fn unforced_dirichlet_diffusion_decays() {
    let base = manufactured("diffusion-varcoef", order(0.5)).unwrap().spec;
    let spec = base
        .with_forcing(SpaceTimeFn::constant(0.0), "0")
        .with_initial(
            ScalarFn::new(|x| {
                (std::f64::consts::PI * x).sin() + 0.3 * (5.0 * std::f64::consts::PI * x).sin()
            }),
            "two modes",
        );
    let grid = spec.grid(64, 128).unwrap();
    let field = solve(&spec, &grid).unwrap();
    let l2 = norms(&field).l2_sq;
    for w in l2.values().windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{} > {}", w[1], w[0]);
    }
}

#[test]
fn row_zero_is_sampled_initial_data() {
    let m = manufactured("wave-robin-poly", order(0.5)).unwrap();
    let grid = m.spec.grid(16, 16).unwrap();
    let field = solve(&m.spec, &grid).unwrap();
    for (i, x) in grid.xs().iter().enumerate() {
        assert_eq!(field.at(0, i), m.spec.init.u0.eval(*x));
    }
    assert!(matches!(m.spec.bc, BoundaryCondition::Robin(_)));
}

#[test]
fn zero_wave_data_stays_zero() {
    let base = manufactured("wave-dirichlet-poly", order(0.5))
        .unwrap()
        .spec;
    let spec = base
        .with_forcing(SpaceTimeFn::constant(0.0), "0")
        .with_initial(ScalarFn::constant(0.0), "0");
    let grid = spec.grid(16, 16).unwrap();
    assert!(solve(&spec, &grid)
        .unwrap()
        .rows()
        .flatten()
        .all(|&v| v == 0.0));
}

#[test]
fn csv_layout() {
    let m = manufactured("diffusion-dirichlet-poly", order(0.5)).unwrap();
    let grid = m.spec.grid(4, 4).unwrap();
    let csv = solve(&m.spec, &grid).unwrap().to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[..9].iter().all(|l| l.starts_with("## ")));
    assert_eq!(lines[9], "# t, x, u");
    assert_eq!(lines.len(), 10 + 5 * 5);
    assert!(csv.contains("## scheme = l1-implicit"));
}
