//! One- and two-parameter Mittag-Leffler functions on the real line.
//!
//! `E_{α,μ}(z) = Σ_{n≥0} zⁿ / Γ(αn + μ)`, with `E_α = E_{α,1}`.
//!
//! Evaluation is routed by argument:
//!
//! | region                                   | method                                   |
//! |------------------------------------------|------------------------------------------|
//! | `0 < z ≤ 10`, or any `z > 0` for `α > 1` | Taylor series summed in log space        |
//! | `z > 10`, `α ≤ 1`                        | exponential asymptotic when its algebraic tail is resolved, else the series |
//! | `z < 0`, `|z|^{1/α} ≤ 3`, `α < 1`        | Taylor series                            |
//! | `z < 0`, `α < 1`, otherwise              | algebraic asymptotic when its truncation error is below roundoff, else a real integral representation |
//! | `z < 0`, `α = 1`                         | Kummer-transformed positive series       |
//! | `z < 0`, `1 < α ≤ 2`                     | Taylor series                            |
//!
//! The individual branches are exposed in [`branches`] so that their seams
//! can be compared directly.

use thiserror::Error;

use crate::fractional_ops::{ln_gamma, recip_gamma};
use crate::numeric::CompensatedSum;
use crate::quadrature::{exp_sinh_a_inf, tanh_sinh_0_b};

/// Largest `μ` accepted.
pub const MU_MAX: f64 = 5.0;
/// Largest `|z|` accepted.
pub const Z_ABS_MAX: f64 = 200.0;
/// Cap on `z^{1/α}` for positive arguments, keeping `E` inside f64 range.
pub const GROWTH_EXPONENT_MAX: f64 = 700.0;

const SERIES_SWITCH: f64 = 10.0;
const NEGATIVE_SERIES_EXPONENT: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MlError {
    #[error(
        "Mittag-Leffler parameters alpha = {alpha}, mu = {mu} outside the supported region \
         0 < alpha <= 2, 0 < mu <= 5"
    )]
    Parameters { alpha: f64, mu: f64 },
    #[error(
        "Mittag-Leffler argument z = {z} outside the supported region [{lo}, {hi}] for alpha = {alpha} \
         (|z| <= 200, z^(1/alpha) <= 700 for z > 0, |z|^(1/alpha) <= 8 for z < 0 when alpha > 1)"
    )]
    Argument {
        alpha: f64,
        z: f64,
        lo: f64,
        hi: f64,
    },
}

/// The `(α, μ)` pair of a two-parameter Mittag-Leffler function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    alpha: f64,
    mu: f64,
}

impl MlParams {
    pub fn new(alpha: f64, mu: f64) -> Result<Self, MlError> {
        if !(alpha > 0.0 && alpha <= 2.0 && mu > 0.0 && mu <= MU_MAX) {
            return Err(MlError::Parameters { alpha, mu });
        }
        Ok(MlParams { alpha, mu })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn mu(self) -> f64 {
        self.mu
    }

    /// Closed interval of real arguments accepted for this `α`.
    pub fn region(self) -> (f64, f64) {
        supported_region(self.alpha)
    }

    pub fn eval(self, z: f64) -> Result<f64, MlError> {
        let (lo, hi) = self.region();
        if !(z >= lo && z <= hi) {
            return Err(MlError::Argument {
                alpha: self.alpha,
                z,
                lo,
                hi,
            });
        }
        Ok(route(self.alpha, self.mu, z))
    }
}

/// Supported argument interval `[lo, hi]` for a given `α`.
pub fn supported_region(alpha: f64) -> (f64, f64) {
    let hi = Z_ABS_MAX.min(GROWTH_EXPONENT_MAX.powf(alpha));
    let lo = if alpha > 1.0 {
        -(8f64.powf(alpha)).min(Z_ABS_MAX)
    } else {
        -Z_ABS_MAX
    };
    (lo, hi)
}

/// `E_α(z)`.
pub fn ml_one(alpha: f64, z: f64) -> Result<f64, MlError> {
    ml_two(alpha, 1.0, z)
}

/// `E_{α,μ}(z)`.
pub fn ml_two(alpha: f64, mu: f64, z: f64) -> Result<f64, MlError> {
    MlParams::new(alpha, mu)?.eval(z)
}

fn route(alpha: f64, mu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return recip_gamma(mu);
    }
    if z > 0.0 {
        if alpha > 1.0 || z <= SERIES_SWITCH {
            return branches::series(alpha, mu, z);
        }
        let (tail, err) = branches::algebraic_asymptotic(alpha, mu, z);
        let growth = z.powf(1.0 / alpha);
        let lead = (growth + (1.0 - mu) / alpha * z.ln() - alpha.ln()).exp();
        if err <= 1e-16 * lead {
            return lead + tail;
        }
        return branches::series(alpha, mu, z);
    }
    if alpha > 1.0 {
        return branches::series(alpha, mu, z);
    }
    if alpha == 1.0 {
        return branches::kummer_negative(mu, z);
    }
    if (-z).powf(1.0 / alpha) <= NEGATIVE_SERIES_EXPONENT {
        return branches::series(alpha, mu, z);
    }
    let (value, err) = branches::algebraic_asymptotic(alpha, mu, z);
    if err <= 1e-15 * value.abs() {
        value
    } else {
        branches::integral_negative(alpha, mu, z)
    }
}

/// The evaluation branches, unguarded. Callers are responsible for staying
/// where each one is accurate.
pub mod branches {
    use super::*;

    /// Taylor series times `e^{−max(z,0)^{1/α}}`.
    ///
    /// Terms are formed as `exp(n·ln|z| − lnΓ(αn+μ) − shift)`, so the scaled
    /// series stays finite where `E` itself overflows.
    pub fn series_scaled(alpha: f64, mu: f64, z: f64) -> f64 {
        let shift = if z > 0.0 { z.powf(1.0 / alpha) } else { 0.0 };
        series_shifted(alpha, mu, z, shift)
    }

    /// Unscaled Taylor series.
    pub fn series(alpha: f64, mu: f64, z: f64) -> f64 {
        series_shifted(alpha, mu, z, 0.0)
    }

    fn series_shifted(alpha: f64, mu: f64, z: f64, shift: f64) -> f64 {
        if z == 0.0 {
            return recip_gamma(mu) * (-shift).exp();
        }
        let lz = z.abs().ln();
        let growth = z.abs().powf(1.0 / alpha);
        let peak = ((growth - mu) / alpha).max(0.0);
        let cap = (peak + 60.0 * peak.sqrt() + 400.0).min(200_000.0) as usize;
        let negative = z < 0.0;
        let mut acc = CompensatedSum::new();
        for n in 0..=cap {
            let nf = n as f64;
            let mag = (nf * lz - ln_gamma(alpha * nf + mu) - shift).exp();
            let term = if negative && n % 2 == 1 { -mag } else { mag };
            acc.add(term);
            if nf > peak && (mag == 0.0 || mag <= 1e-17 * acc.value().abs()) {
                break;
            }
        }
        acc.value()
    }

    /// Algebraic tail `−Σ_{k≥1} z^{−k}/Γ(μ−αk)`, truncated before its smallest
    /// envelope term. Returns `(value, envelope of the first omitted term)`.
    pub fn algebraic_asymptotic(alpha: f64, mu: f64, z: f64) -> (f64, f64) {
        const K_MAX: usize = 120;
        let lz = z.abs().ln();
        // |1/Γ(x)| ≤ Γ(1−x)/π for x < 1; used so zeros of 1/Γ do not fake convergence
        let envelope = |k: usize| {
            let x = mu - alpha * k as f64;
            if x < 1.0 {
                (ln_gamma(1.0 - x) - k as f64 * lz).exp() / std::f64::consts::PI
            } else {
                (-(k as f64) * lz).exp() * recip_gamma(x).abs()
            }
        };
        let mut best = 1;
        let mut best_env = envelope(1);
        for k in 2..=K_MAX {
            let e = envelope(k);
            if !e.is_finite() {
                break;
            }
            if e < best_env {
                best = k;
                best_env = e;
            } else if e > 1e3 * best_env {
                break;
            }
        }
        let mut acc = CompensatedSum::new();
        let zinv = 1.0 / z;
        let mut zk = 1.0;
        for k in 1..best {
            zk *= zinv;
            acc.add(-zk * recip_gamma(mu - alpha * k as f64));
        }
        (acc.value(), best_env)
    }

    /// `E_{α,μ}(z)·e^{−z^{1/α}}` from `(1/α)·z^{(1−μ)/α}·e^{z^{1/α}}` plus the
    /// algebraic tail, for `z > 0`, `α ≤ 1`.
    pub fn exponential_asymptotic_scaled(alpha: f64, mu: f64, z: f64) -> f64 {
        let growth = z.powf(1.0 / alpha);
        let lead = ((1.0 - mu) / alpha * z.ln() - alpha.ln()).exp();
        let (tail, _) = algebraic_asymptotic(alpha, mu, z);
        lead + tail * (-growth).exp()
    }

    /// Unscaled exponential asymptotic for `z > 0`, `α ≤ 1`.
    pub fn exponential_asymptotic(alpha: f64, mu: f64, z: f64) -> f64 {
        let growth = z.powf(1.0 / alpha);
        let lead = (growth + (1.0 - mu) / alpha * z.ln() - alpha.ln()).exp();
        let (tail, _) = algebraic_asymptotic(alpha, mu, z);
        lead + tail
    }

    /// `E_{1,μ}(z)` for `z < 0` via `₁F₁(1; μ; z) = e^z ₁F₁(μ−1; μ; −z)`.
    ///
    /// Every term past the first has the sign of `μ − 1`, so the sum is free
    /// of cancellation.
    pub fn kummer_negative(mu: f64, z: f64) -> f64 {
        let x = -z;
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        let mut pow = 1.0;
        let mut n = 1usize;
        loop {
            let nf = n as f64;
            pow *= x / nf;
            let term = (mu - 1.0) / (mu - 1.0 + nf) * pow;
            acc.add(term);
            if (nf > x && term.abs() <= 1e-17 * acc.value().abs()) || term == 0.0 || n > 2000 {
                break;
            }
            n += 1;
        }
        (z.exp() * acc.value()) * recip_gamma(mu)
    }

    /// Real integral representation for `z < 0`, `0 < α < 1`:
    ///
    /// `E_{α,μ}(z) = (1/π) ∫_0^∞ e^{−s} s^{α−μ} g(s) ds`,
    /// `g(s) = [s^α sin(π(1−μ)) − z sin(π(1−μ+α))] / (s^{2α} − 2 s^α z cos(πα) + z²)`.
    ///
    /// Valid for `μ < 1 + α`; larger `μ` is first lowered by multiples of `α` and
    /// restored with `E_{α,μ+α}(z) = (E_{α,μ}(z) − 1/Γ(μ))/z`.
    pub fn integral_negative(alpha: f64, mu: f64, z: f64) -> f64 {
        let mut base = mu;
        let mut steps = 0usize;
        while base > alpha + 0.5 {
            base -= alpha;
            steps += 1;
        }
        let mut value = integral_core(alpha, base, z);
        let mut m = base;
        for _ in 0..steps {
            value = (value - recip_gamma(m)) / z;
            m += alpha;
        }
        value
    }

    fn integral_core(alpha: f64, mu: f64, z: f64) -> f64 {
        use std::f64::consts::PI;
        let c = 1.0 + alpha - mu;
        let a = (PI * (1.0 - mu)).sin();
        let b = -z * (PI * (1.0 - mu + alpha)).sin();
        let cos_pa = (PI * alpha).cos();
        // after u = s^c the endpoint factor s^{α−μ} ds becomes du/c
        let integrand = |u: f64| {
            let s = u.powf(1.0 / c);
            let sa = s.powf(alpha);
            let den = sa * sa - 2.0 * sa * z * cos_pa + z * z;
            (-s).exp() * (sa * a + b) / den
        };
        let s_split = if cos_pa < 0.0 {
            (-z * cos_pa).powf(1.0 / alpha).max(1.0)
        } else {
            1.0
        };
        let u_split = s_split.powf(c);
        let head = tanh_sinh_0_b(integrand, u_split, 1e-15);
        let tail = exp_sinh_a_inf(integrand, u_split, 1e-15);
        (head + tail) / (PI * c)
    }
}
