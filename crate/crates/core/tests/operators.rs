//! Fractional operators against quadrature oracles and structural properties.

use proptest::prelude::*;
use statrs::function::gamma::gamma;

use fracdw::energy_monitor::{check_lemma1, lemma1_quadratic_margin, lemma1_sos_margin};
use fracdw::fractional_ops::{caputo_l1, caputo_l1_wave, rl_integral, rl_integral_iterated};
use fracdw::problem_spec::manufactured;
use fracdw::{FracOrder, TimeGrid, TimeSeries};

/// Composite Simpson on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Caputo derivative of order `α` of `v` at `t`, from `v'`.
///
/// With `w = (t − s)^{1−α}` the weakly singular integral becomes
/// `∫_0^{t^{1−α}} v'(t − w^{1/(1−α)}) dw / ((1−α)Γ(1−α))`, which is smooth.
fn caputo_oracle(dv: impl Fn(f64) -> f64, alpha: f64, t: f64) -> f64 {
    let p = 1.0 / (1.0 - alpha);
    let top = t.powf(1.0 - alpha);
    simpson(|w| dv(t - w.powf(p)), 0.0, top, 2000) / ((1.0 - alpha) * gamma(1.0 - alpha))
}

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

#[test]
fn oracle_matches_power_rule() {
    for a in [0.2, 0.5, 0.8] {
        for t in [0.3f64, 1.0, 2.0] {
            let want = 2.0 * t.powf(2.0 - a) / gamma(3.0 - a);
            let got = caputo_oracle(|s| 2.0 * s, a, t);
            assert!(
                (got - want).abs() < 1e-6 * want,
                "a={a} t={t}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn l1_caputo_of_square_approaches_oracle() {
    for a in [0.3, 0.5, 0.8] {
        let grid = TimeGrid::new(1.0, 1024).unwrap();
        let d = caputo_l1(&TimeSeries::from_fn(grid, |t| t * t), order(a));
        let want = caputo_oracle(|s| 2.0 * s, a, 1.0);
        assert!(
            (d.last() - want).abs() < 2e-3,
            "a={a}: {} vs {want}",
            d.last()
        );
    }
}

#[test]
fn l1_caputo_of_smooth_function_approaches_oracle() {
    let a = 0.4;
    let grid = TimeGrid::new(2.0, 2048).unwrap();
    let d = caputo_l1(&TimeSeries::from_fn(grid, |t| (3.0 * t).sin()), order(a));
    let want = caputo_oracle(|s| 3.0 * (3.0 * s).cos(), a, 2.0);
    assert!((d.last() - want).abs() < 1e-3, "{} vs {want}", d.last());
}

#[test]
fn wave_operator_matches_caputo_of_velocity() {
    // ∂^{1+α} t³ = 6 t^{2−α}/Γ(3−α)
    let a = 0.5;
    let grid = TimeGrid::new(1.0, 1024).unwrap();
    let v = TimeSeries::from_fn(grid, |t| t * t * t);
    let d = caputo_l1_wave(&v, 0.0, order(a)).unwrap();
    let want = 6.0 / gamma(3.0 - a);
    assert!((d.last() - want).abs() < 1e-2, "{} vs {want}", d.last());
}

#[test]
fn manufactured_forcing_matches_quadrature() {
    // D1 at (l/2, 1): f = ∂ᵅ(1+t²) + (π² + 1)·2
    let m = manufactured("diffusion-dirichlet-poly", order(0.5)).unwrap();
    let f = m.spec.coefficients.f.eval(0.5, 1.0);
    let want = caputo_oracle(|s| 2.0 * s, 0.5, 1.0) + (std::f64::consts::PI.powi(2) + 1.0) * 2.0;
    assert!((f - want).abs() < 1e-6, "{f} vs {want}");
}

#[test]
fn rl_integral_of_power_is_exact_for_linears() {
    let a = 0.7;
    let grid = TimeGrid::new(3.0, 30).unwrap();
    let r = rl_integral(&TimeSeries::from_fn(grid, |t| 1.0 + 2.0 * t), order(a));
    for (n, v) in r.values().iter().enumerate() {
        let t = grid.t(n);
        let want = t.powf(a) / gamma(1.0 + a) + 2.0 * t.powf(1.0 + a) / gamma(2.0 + a);
        assert!((v - want).abs() < 1e-13, "n={n}");
    }
}

#[test]
fn iterated_integral_of_constant() {
    let a = 0.3;
    let grid = TimeGrid::new(1.0, 16).unwrap();
    let r = rl_integral_iterated(&TimeSeries::from_fn(grid, |_| 1.0), order(a));
    assert!((r.last() - 1.0 / gamma(1.0 + 2.0 * a)).abs() < 1e-13);
}

fn series(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    len.prop_flat_map(|n| prop::collection::vec(-1.0f64..1.0, n + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn caputo_is_linear(v in series(2..=64), c in -3.0f64..3.0, a in 0.05f64..0.95) {
        let grid = TimeGrid::new(1.0, v.len() - 1).unwrap();
        let s = TimeSeries::new(grid, v.clone()).unwrap();
        let w = TimeSeries::from_fn(grid, |t| (2.0 * t).cos());
        let comb = s.zip_with(&w, |x, y| c * x + y).unwrap();
        let lhs = caputo_l1(&comb, order(a));
        let rhs = caputo_l1(&s, order(a))
            .zip_with(&caputo_l1(&w, order(a)), |x, y| c * x + y)
            .unwrap();
        for (x, y) in lhs.values().iter().zip(rhs.values()) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn lemma1_margin_is_nonnegative(v in series(1..=128), a in 0.05f64..0.95, t_end in 0.1f64..5.0) {
        let grid = TimeGrid::new(t_end, v.len() - 1).unwrap();
        let s = TimeSeries::new(grid, v.clone()).unwrap();
        let r = check_lemma1(&s, order(a));
        prop_assert!(r.min_margin >= -1e-10, "{}", r.min_margin);
        let n = v.len() - 1;
        let q = lemma1_quadratic_margin(&v, order(a), grid.tau(), n);
        let sos = lemma1_sos_margin(&v, order(a), grid.tau(), n);
        prop_assert!(sos >= 0.0);
        prop_assert!((q - sos).abs() <= 1e-9 * (1.0 + sos.abs()));
    }

    #[test]
    fn rl_integral_is_monotone(v in series(1..=64), bump in prop::collection::vec(0.0f64..1.0, 65), a in 0.05f64..0.95) {
        let grid = TimeGrid::new(1.0, v.len() - 1).unwrap();
        let lo = TimeSeries::new(grid, v.iter().map(|x| x.abs()).collect()).unwrap();
        let hi = TimeSeries::new(grid, v.iter().zip(&bump).map(|(x, b)| x.abs() + b).collect()).unwrap();
        let il = rl_integral(&lo, order(a));
        let ih = rl_integral(&hi, order(a));
        for (x, y) in il.values().iter().zip(ih.values()) {
            prop_assert!(*x >= 0.0);
            prop_assert!(x <= y);
        }
    }
}
