//! Discrete fractional operators on uniform time grids.
//!
//! * [`caputo_l1`]: L1 scheme for the Caputo derivative of order `α ∈ (0,1)`.
//! * [`caputo_l1_wave`]: order `1+α`, the L1 kernel applied to backward-difference
//!   velocities with the initial velocity injected as the half-step value.
//! * [`rl_integral`] / [`rl_integral_order`]: Riemann-Liouville integral by
//!   product integration against the piecewise-linear interpolant.
//!
//! Entry 0 of every operator output is 0. Convolution sums run in ascending
//! history index with Neumaier compensation, one independent sum per output
//! index, so the parallel and sequential paths agree bit for bit.

mod gamma;
mod weights;

pub use gamma::{gamma_fn, ln_gamma, recip_gamma, GAMMA_MAX_ARG};
pub use weights::l1_weights;

pub(crate) use gamma::gamma_pos;

use thiserror::Error;

use crate::exec::Execution;
use crate::numeric::CompensatedSum;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FracError {
    #[error("fractional order must lie strictly inside (0, 1), got {0}")]
    InvalidOrder(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("series length {got} does not match the time grid (expected {expected} samples)")]
    LengthMismatch { expected: usize, got: usize },
    #[error("time series live on different grids")]
    GridMismatch,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("gamma overflows for x = {0} (x must be <= 171.6)")]
    Overflow(f64),
}

/// Fractional order `α`, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self, FracError> {
        if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(FracError::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `τ^{−α}/Γ(2−α)`, the scale in front of the L1 sum.
    pub fn l1_scale(self, tau: f64) -> f64 {
        tau.powf(-self.0) / gamma_pos(2.0 - self.0)
    }
}

impl std::fmt::Display for FracOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Uniform time axis `t_n = n·τ`, `n = 0..=nt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    nt: usize,
}

impl TimeGrid {
    pub fn new(t_end: f64, nt: usize) -> Result<Self, FracError> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(FracError::InvalidGrid(format!(
                "T must be positive, got {t_end}"
            )));
        }
        if nt < 1 {
            return Err(FracError::InvalidGrid("Nt must be at least 1".into()));
        }
        Ok(TimeGrid { t_end, nt })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn tau(&self) -> f64 {
        self.t_end / self.nt as f64
    }

    pub fn t(&self, n: usize) -> f64 {
        if n == self.nt {
            self.t_end
        } else {
            n as f64 * self.tau()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.nt).map(|n| self.t(n)).collect()
    }
}

/// Space-time mesh on `[0, l] × [0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    l: f64,
    nx: usize,
    time: TimeGrid,
}

impl UniformGrid {
    pub fn new(l: f64, t_end: f64, nx: usize, nt: usize) -> Result<Self, FracError> {
        if !(l.is_finite() && l > 0.0) {
            return Err(FracError::InvalidGrid(format!(
                "l must be positive, got {l}"
            )));
        }
        if nx < 2 {
            return Err(FracError::InvalidGrid("Nx must be at least 2".into()));
        }
        Ok(UniformGrid {
            l,
            nx,
            time: TimeGrid::new(t_end, nt)?,
        })
    }

    pub fn l(&self) -> f64 {
        self.l
    }
    pub fn t_end(&self) -> f64 {
        self.time.t_end
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn nt(&self) -> usize {
        self.time.nt
    }
    pub fn h(&self) -> f64 {
        self.l / self.nx as f64
    }
    pub fn tau(&self) -> f64 {
        self.time.tau()
    }
    pub fn time(&self) -> TimeGrid {
        self.time
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.nx {
            self.l
        } else {
            i as f64 * self.h()
        }
    }

    pub fn t(&self, n: usize) -> f64 {
        self.time.t(n)
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..=self.nx).map(|i| self.x(i)).collect()
    }

    /// The same domain with both resolutions multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> UniformGrid {
        UniformGrid {
            l: self.l,
            nx: self.nx * factor,
            time: TimeGrid {
                t_end: self.time.t_end,
                nt: self.time.nt * factor,
            },
        }
    }
}

/// Samples `values[n] = v(t_n)` on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self, FracError> {
        if values.len() != grid.nt + 1 {
            return Err(FracError::LengthMismatch {
                expected: grid.nt + 1,
                got: values.len(),
            });
        }
        Ok(TimeSeries { grid, values })
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..=grid.nt).map(|n| f(grid.t(n))).collect();
        TimeSeries { grid, values }
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        TimeSeries {
            grid,
            values: vec![0.0; grid.nt + 1],
        }
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
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
    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> TimeSeries {
        TimeSeries {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two series on the same grid.
    pub fn zip_with(
        &self,
        other: &TimeSeries,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<TimeSeries, FracError> {
        if self.grid != other.grid {
            return Err(FracError::GridMismatch);
        }
        Ok(TimeSeries {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `out[n] = σ·Σ_{j=0}^{n−1} b_{n−j−1}·inc[j]` for `n = 1..=len(inc)`, `out[0] = 0`.
fn l1_convolve(inc: &[f64], alpha: FracOrder, tau: f64, exec: Execution) -> Vec<f64> {
    let nt = inc.len();
    let b = l1_weights(alpha.value(), nt);
    let scale = alpha.l1_scale(tau);
    exec.map_indices(nt + 1, |n| {
        if n == 0 {
            return 0.0;
        }
        let mut acc = CompensatedSum::new();
        for (j, d) in inc[..n].iter().enumerate() {
            acc.add(b[n - j - 1] * d);
        }
        scale * acc.value()
    })
}

/// L1 approximation of the Caputo derivative of order `α`.
pub fn caputo_l1(v: &TimeSeries, alpha: FracOrder) -> TimeSeries {
    caputo_l1_with(v, alpha, Execution::default())
}

pub fn caputo_l1_with(v: &TimeSeries, alpha: FracOrder, exec: Execution) -> TimeSeries {
    let inc: Vec<f64> = v.values.windows(2).map(|w| w[1] - w[0]).collect();
    TimeSeries {
        grid: v.grid,
        values: l1_convolve(&inc, alpha, v.grid.tau(), exec),
    }
}

/// Backward-difference velocity chain `W_0 = v1`, `W_m = (v^m − v^{m−1})/τ`.
pub fn velocity_chain(v: &[f64], v1: f64, tau: f64) -> Vec<f64> {
    std::iter::once(v1)
        .chain(v.windows(2).map(|w| (w[1] - w[0]) / tau))
        .collect()
}

/// L1-type approximation of the Caputo derivative of order `1+α`.
///
/// `v1` is the initial velocity `v'(0)`.
pub fn caputo_l1_wave(v: &TimeSeries, v1: f64, alpha: FracOrder) -> Result<TimeSeries, FracError> {
    caputo_l1_wave_with(v, v1, alpha, Execution::default())
}

pub fn caputo_l1_wave_with(
    v: &TimeSeries,
    v1: f64,
    alpha: FracOrder,
    exec: Execution,
) -> Result<TimeSeries, FracError> {
    if v.len() < 3 {
        return Err(FracError::TooFewSamples {
            needed: 3,
            got: v.len(),
        });
    }
    let tau = v.grid.tau();
    let w = velocity_chain(&v.values, v1, tau);
    let inc: Vec<f64> = w.windows(2).map(|p| p[1] - p[0]).collect();
    Ok(TimeSeries {
        grid: v.grid,
        values: l1_convolve(&inc, alpha, tau, exec),
    })
}

/// Riemann-Liouville integral `D^{−α}v`.
pub fn rl_integral(v: &TimeSeries, alpha: FracOrder) -> TimeSeries {
    rl_integral_with(v, alpha.value(), Execution::default())
}

/// `D^{−2α}v` through the same product-integration kernel.
pub fn rl_integral_iterated(v: &TimeSeries, alpha: FracOrder) -> TimeSeries {
    rl_integral_with(v, 2.0 * alpha.value(), Execution::default())
}

/// Riemann-Liouville integral of arbitrary order `γ ∈ (0, 2]`.
pub fn rl_integral_order(v: &TimeSeries, gamma: f64) -> Result<TimeSeries, FracError> {
    if !(gamma > 0.0 && gamma <= 2.0) {
        return Err(FracError::Domain(format!(
            "integration order must lie in (0, 2], got {gamma}"
        )));
    }
    Ok(rl_integral_with(v, gamma, Execution::default()))
}

pub fn rl_integral_with(v: &TimeSeries, gamma: f64, exec: Execution) -> TimeSeries {
    let nt = v.grid.nt;
    let w = weights::product_weights(gamma, nt);
    let scale = v.grid.tau().powf(gamma) / gamma_pos(gamma + 2.0);
    let vals = &v.values;
    let out = exec.map_indices(nt + 1, |n| {
        if n == 0 {
            return 0.0;
        }
        let mut acc = CompensatedSum::new();
        acc.add(w.left[n] * vals[0]);
        for (j, &vj) in vals.iter().enumerate().take(n + 1).skip(1) {
            acc.add(w.inner[n - j] * vj);
        }
        scale * acc.value()
    });
    TimeSeries {
        grid: v.grid,
        values: out,
    }
}

/// Plain running integral `∫_0^{t_n} v` by the trapezoid rule.
pub fn running_integral(v: &TimeSeries) -> TimeSeries {
    let tau = v.grid.tau();
    let mut acc = CompensatedSum::new();
    let mut out = Vec::with_capacity(v.len());
    out.push(0.0);
    for w in v.values.windows(2) {
        acc.add(0.5 * tau * (w[0] + w[1]));
        out.push(acc.value());
    }
    TimeSeries {
        grid: v.grid,
        values: out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(t: f64, nt: usize) -> TimeGrid {
        TimeGrid::new(t, nt).unwrap()
    }

    fn a(x: f64) -> FracOrder {
        FracOrder::new(x).unwrap()
    }

    #[test]
    fn order_rejects_boundary_values() {
        for bad in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(FracOrder::new(bad).is_err());
        }
        assert!(FracOrder::new(0.999).is_ok());
    }

    #[test]
    fn grid_nodes_hit_endpoints() {
        let g = UniformGrid::new(0.7, 1.3, 3, 7).unwrap();
        assert_eq!(g.x(3), 0.7);
        assert_eq!(g.t(7), 1.3);
        assert!(UniformGrid::new(1.0, 1.0, 1, 4).is_err());
        assert!(UniformGrid::new(1.0, 1.0, 4, 0).is_err());
    }

    #[test]
    fn series_length_checked() {
        let g = grid(1.0, 4);
        assert_eq!(
            TimeSeries::new(g, vec![0.0; 4]),
            Err(FracError::LengthMismatch {
                expected: 5,
                got: 4
            })
        );
    }

    #[test]
    fn caputo_of_constant_is_zero() {
        let v = TimeSeries::from_fn(grid(1.0, 32), |_| 7.0);
        let d = caputo_l1(&v, a(0.5));
        assert!(d.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn caputo_exact_on_linear() {
        let v = TimeSeries::from_fn(grid(1.0, 64), |t| t);
        let d = caputo_l1(&v, a(0.5));
        let exact = 1.0 / gamma_pos(1.5);
        assert!((d.last() - exact).abs() < 1e-13);
        assert!((exact - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-15);
    }

    #[test]
    fn wave_operator_annihilates_linear() {
        let v = TimeSeries::from_fn(grid(2.0, 40), |t| 3.0 - 1.5 * t);
        let d = caputo_l1_wave(&v, -1.5, a(0.3)).unwrap();
        assert!(d.values().iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn wave_operator_needs_three_samples() {
        let v = TimeSeries::from_fn(grid(1.0, 1), |t| t);
        assert!(matches!(
            caputo_l1_wave(&v, 0.0, a(0.5)),
            Err(FracError::TooFewSamples { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn rl_exact_on_constants_and_linears() {
        let g = grid(1.0, 50);
        let one = TimeSeries::from_fn(g, |_| 1.0);
        let lin = TimeSeries::from_fn(g, |t| t);
        let r1 = rl_integral(&one, a(0.5));
        let r2 = rl_integral(&lin, a(0.5));
        for n in 0..=50 {
            let t = g.t(n);
            assert!((r1.values()[n] - t.sqrt() / gamma_pos(1.5)).abs() < 1e-13);
            assert!((r2.values()[n] - t.powf(1.5) / gamma_pos(2.5)).abs() < 1e-13);
        }
        assert!((r2.last() - 0.752_252_778_1).abs() < 1e-10);
    }

    #[test]
    fn iterated_integral_special_orders() {
        let g = grid(1.0, 20);
        let one = TimeSeries::from_fn(g, |_| 1.0);
        let r = rl_integral_iterated(&one, a(0.5));
        for n in 0..=20 {
            assert!((r.values()[n] - g.t(n)).abs() < 1e-14);
        }
        let r = rl_integral_iterated(&one, a(0.25));
        assert!((r.last() - 1.0 / gamma_pos(1.5)).abs() < 1e-13);
        let z = rl_integral_iterated(&TimeSeries::zeros(g), a(0.3));
        assert!(z.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn running_integral_matches_order_one() {
        let g = grid(2.0, 16);
        let v = TimeSeries::from_fn(g, |t| (t * 1.3).sin() + 2.0);
        let a1 = running_integral(&v);
        let a2 = rl_integral_order(&v, 1.0).unwrap();
        for (x, y) in a1.values().iter().zip(a2.values()) {
            assert!((x - y).abs() < 1e-13);
        }
        assert!(rl_integral_order(&v, 2.5).is_err());
    }

    #[test]
    fn execution_policies_bitwise_equal() {
        let g = grid(1.0, 300);
        let v = TimeSeries::from_fn(g, |t| (5.0 * t).sin() * t);
        let s = caputo_l1_with(&v, a(0.7), Execution::Sequential);
        let p = caputo_l1_with(&v, a(0.7), Execution::Parallel);
        assert_eq!(s, p);
        let s = rl_integral_with(&v, 0.4, Execution::Sequential);
        let p = rl_integral_with(&v, 0.4, Execution::Parallel);
        assert_eq!(s, p);
    }
}
