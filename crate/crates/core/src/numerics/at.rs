//! The singular-series weight
//! `A_t(w,n) = ∑_{k ≥ 1, (k,t)=1} k^{−(t−1)/2} ∑_{h mod k, (h,k)=1}
//! e^{−2πihn/k} ω′_{h,k} (w e^{2πiht/k})_∞^{−t}`.

use num_complex::Complex64;
use rug::{Complex, Float};

use super::dedekind::dedekind_sum_6k;
use super::euler::{euler_inf_f64, log_tail_bound, terms_needed};
use super::{PrecComplex, ERR_PREC};
use crate::error::{Error, Result};

/// Limits for [`eval_at`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtOptions {
    /// Largest `k` summed before reporting non-convergence.
    pub k_cap: u64,
    /// Log-tail tolerance for each inner Euler product.
    pub euler_tol: f64,
}

impl Default for AtOptions {
    fn default() -> Self {
        AtOptions {
            k_cap: 4096,
            euler_tol: 1e-18,
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Upper bound for `(ρ)_∞^{−t}`.
fn inverse_euler_bound(rho: f64, t: u32) -> f64 {
    if rho == 0.0 {
        return 1.0;
    }
    let k = terms_needed(rho, 1e-17) as u32;
    let mut p = 1.0f64;
    let mut pw = rho;
    for _ in 0..k {
        p *= 1.0 - pw;
        pw *= rho;
    }
    let tau = log_tail_bound(rho, k);
    p.powi(-(t as i32)) * (t as f64 * tau).exp() * (1.0 + 1e-12)
}

/// `C·K^{1−s}/(s−1)` with `s = (t−3)/2`: bound on the terms with `k > K`
/// when each inner sum is bounded by `C·φ(k) ≤ C·k`.
pub fn at_tail_bound(t: u32, c: f64, k: u64) -> f64 {
    let s = (t as f64 - 3.0) / 2.0;
    c * (k as f64).powf(1.0 - s) / (s - 1.0)
}

/// Smallest `K` with [`at_tail_bound`] at most `tol`, as a float since it
/// may be astronomically large.
fn required_k(t: u32, c: f64, tol: f64) -> f64 {
    let s = (t as f64 - 3.0) / 2.0;
    (c / ((s - 1.0) * tol)).powf(1.0 / (s - 1.0)).ceil()
}

pub fn eval_at(t: u32, w: &PrecComplex, n: u64, tol: f64) -> Result<PrecComplex> {
    eval_at_with(t, w, n, tol, &AtOptions::default())
}

/// Sums the series up to the `K` at which the trivial tail bound falls below
/// `tol/2`; the inner sums are exact-phase, `f64`-valued, with rounding
/// accounted for in the returned bound.
pub fn eval_at_with(
    t: u32,
    w: &PrecComplex,
    n: u64,
    tol: f64,
    opts: &AtOptions,
) -> Result<PrecComplex> {
    if t < 6 {
        return Err(Error::Domain(format!(
            "the singular series needs t ≥ 6, got {t}"
        )));
    }
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::Argument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let rho = w.abs_upper();
    if rho >= 1.0 {
        return Err(Error::Domain(format!("need |w| < 1, got {rho}")));
    }
    let c = inverse_euler_bound(rho, t);
    let need = required_k(t, c, tol / 2.0);
    if need > opts.k_cap as f64 {
        return Err(Error::NonConvergence {
            iterations: opts.k_cap as usize,
            worst: at_tail_bound(t, c, opts.k_cap),
            context: format!(
                "tail bound below {:e} needs k up to {need:e}, cap is {}",
                tol / 2.0,
                opts.k_cap
            ),
        });
    }
    let k_max = (need as u64).max(1);
    let wv = Complex64::new(w.re_f64(), w.im_f64());
    let euler_terms = if rho == 0.0 {
        0
    } else {
        terms_needed(rho, opts.euler_tol)
    };
    let nmod = |k: u64| (n % k) as u128;
    let pow = -((t as f64 - 1.0) / 2.0);

    // Per k: (weighted inner sum, weighted sum of |terms|, number of terms).
    let parts = crate::par::map_range(k_max as usize, |i| {
        let k = i as u64 + 1;
        if gcd(k, t as u64) != 1 {
            return (Complex64::new(0.0, 0.0), 0.0, 0u64);
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        let mut count = 0;
        let twelve_k = 12 * k as i128;
        for h in 0..k {
            if gcd(h, k) != 1 {
                continue;
            }
            let ht = (h as u128 * t as u128 % k as u128) as i64;
            let s1 = dedekind_sum_6k(h as i64, k).expect("coprime by construction");
            let s2 = dedekind_sum_6k(ht, k).expect("coprime by construction");
            let hn = (h as u128 * nmod(k) % k as u128) as i128;
            let x = (s1 - t as i128 * s2 - 12 * hn).rem_euclid(twelve_k);
            let angle = std::f64::consts::PI * x as f64 / (6.0 * k as f64);
            let mut term = Complex64::from_polar(1.0, angle);
            if rho > 0.0 {
                let twist =
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ht as f64 / k as f64);
                let (e, _) = euler_inf_f64(wv * twist, opts.euler_tol);
                term /= e.powi(t as i32);
            }
            abs += term.norm();
            sum += term;
            count += 1;
        }
        let weight = (k as f64).powf(pow);
        (sum * weight, abs * weight, count)
    });

    let mut total = Complex64::new(0.0, 0.0);
    let mut abs_total = 0.0;
    let mut worst_terms = 0u64;
    for (s, a, cnt) in &parts {
        total += s;
        abs_total += a;
        worst_terms = worst_terms.max(*cnt);
    }
    let eps = f64::EPSILON;
    let per_term =
        (4 * t as u64 * euler_terms + 40) as f64 * eps + (t as f64 * opts.euler_tol).exp_m1();
    let summation = (worst_terms + k_max + 2) as f64 * eps;
    let rounding = abs_total * (per_term + summation) * 1.01;
    let tail = at_tail_bound(t, c, k_max);

    // Sensitivity to the error in w: |d/dw (x)_∞^{−t}| ≤ C·t∑ j ρ^{j−1}/(1−ρ^j).
    let err_w = w.err_f64();
    let propagated = if err_w > 0.0 {
        let mut d = 0.0;
        let mut pw = 1.0;
        for j in 1..=(euler_terms.max(1) + 20) {
            d += j as f64 * pw / (1.0 - pw * rho);
            pw *= rho;
        }
        // ∑_{k ≤ K} φ(k) k^{−(t−1)/2} ≤ K·max(1, K^{1−(t−1)/2}).
        err_w * c * t as f64 * d * (k_max as f64).powf(1.0 + pow).max(1.0) * k_max as f64
    } else {
        0.0
    };

    let prec = w.prec();
    let value = Complex::with_val(prec, (total.re, total.im));
    let err = Float::with_val(ERR_PREC, rounding + tail + propagated);
    Ok(PrecComplex::new(value, err))
}
