//! Convolution weights for the L1 derivative and the product-integration
//! Riemann-Liouville integral.
//!
//! The textbook closed forms are differences of large powers and lose up to
//! `m²` relative accuracy at lag `m`; for `m >= 10` the differences are
//! rewritten as binomial tail series in `1/m`.

/// `(1+x)^p − Σ_{k<k0} C(p,k) x^k`, accurate for `|x| <= 0.1`.
pub(crate) fn pow1p_tail(p: f64, x: f64, k0: usize) -> f64 {
    let mut c = 1.0;
    for j in 1..=k0 {
        c *= (p - (j as f64 - 1.0)) / j as f64;
    }
    let mut xk = x.powi(k0 as i32);
    let mut sum = 0.0;
    let mut k = k0;
    loop {
        let term = c * xk;
        sum += term;
        if term == 0.0 || term.abs() <= 1e-18 * sum.abs() || k > k0 + 60 {
            return sum;
        }
        k += 1;
        c *= (p - (k as f64 - 1.0)) / k as f64;
        xk *= x;
    }
}

/// L1 weights `b_m = (m+1)^{1−α} − m^{1−α}`, `m = 0..len`.
pub fn l1_weights(alpha: f64, len: usize) -> Vec<f64> {
    let p = 1.0 - alpha;
    (0..len)
        .map(|m| {
            if m == 0 {
                1.0
            } else if m < 10 {
                (m as f64 + 1.0).powf(p) - (m as f64).powf(p)
            } else {
                let mf = m as f64;
                mf.powf(p) * (p * (1.0 / mf).ln_1p()).exp_m1()
            }
        })
        .collect()
}

/// Second difference `(m+1)^p − 2m^p + (m−1)^p` for `m >= 1`.
fn second_difference(p: f64, m: usize) -> f64 {
    let mf = m as f64;
    if m < 10 {
        (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p)
    } else {
        let x = 1.0 / mf;
        mf.powf(p) * (pow1p_tail(p, x, 2) + pow1p_tail(p, -x, 2))
    }
}

/// `(n−1)^p − (n−p)·n^{p−1}` for `n >= 1`.
fn left_end(p: f64, n: usize) -> f64 {
    let nf = n as f64;
    if n < 10 {
        (nf - 1.0).powf(p) - (nf - p) * nf.powf(p - 1.0)
    } else {
        nf.powf(p) * pow1p_tail(p, -1.0 / nf, 2)
    }
}

/// Lag weights for product integration of order `gamma` against a
/// piecewise-linear interpolant, without the `τ^γ/Γ(γ+2)` prefactor.
///
/// `D^{−γ}v(t_n) ≈ τ^γ/Γ(γ+2) · (left(n)·v_0 + Σ_{j=1}^{n} inner[n−j]·v_j)`,
/// with `inner[0] = 1` and `inner[m] = (m+1)^{γ+1} − 2m^{γ+1} + (m−1)^{γ+1}`.
pub(crate) struct ProductWeights {
    pub inner: Vec<f64>,
    pub left: Vec<f64>,
}

pub(crate) fn product_weights(gamma: f64, nt: usize) -> ProductWeights {
    let p = gamma + 1.0;
    let inner = (0..=nt)
        .map(|m| if m == 0 { 1.0 } else { second_difference(p, m) })
        .collect();
    let left = (0..=nt)
        .map(|n| if n == 0 { 0.0 } else { left_end(p, n) })
        .collect();
    ProductWeights { inner, left }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_series_matches_direct_for_moderate_x() {
        for &p in &[0.3, 1.5, 2.7] {
            for &x in &[0.1f64, -0.1, 0.05] {
                let direct = (1.0 + x).powf(p) - 1.0 - p * x;
                let tail = pow1p_tail(p, x, 2);
                assert!((direct - tail).abs() < 1e-15, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn l1_weights_positive_decreasing() {
        for &a in &[0.1, 0.5, 0.9] {
            let b = l1_weights(a, 5000);
            assert_eq!(b[0], 1.0);
            for m in 1..b.len() {
                assert!(b[m] > 0.0 && b[m] < b[m - 1], "alpha={a} m={m}");
            }
            // telescoping: Σ_{m<M} b_m = M^{1−α}
            let s: f64 = b.iter().sum();
            assert!((s - 5000f64.powf(1.0 - a)).abs() < 1e-11 * s);
        }
    }

    #[test]
    fn weights_continuous_across_series_switch() {
        for &p in &[1.2, 1.5, 2.0, 2.8] {
            for m in 10..14 {
                let mf = m as f64;
                let direct = (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
                let stable = second_difference(p, m);
                assert!(
                    (direct - stable).abs() < 1e-12 * stable.abs().max(1e-3),
                    "p={p} m={m}"
                );
                let direct = (mf - 1.0).powf(p) - (mf - p) * mf.powf(p - 1.0);
                let stable = left_end(p, m);
                assert!(
                    (direct - stable).abs() < 1e-11 * stable.abs().max(1e-3),
                    "p={p} m={m}"
                );
            }
        }
    }
}
