use rug::{Complex, Float};

use super::{PrecComplex, ERR_PREC};
use crate::error::{Error, Result};

/// Limits for [`euler_inf`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerOptions {
    /// Inputs with `|a| ≥ 1 − margin` are rejected.
    pub margin: f64,
    /// Largest number of factors taken before giving up.
    pub max_terms: u32,
}

impl Default for EulerOptions {
    fn default() -> Self {
        EulerOptions {
            margin: 1e-4,
            max_terms: 1_000_000,
        }
    }
}

/// Bound on `∑_{k>K} |a|^k / (1 − |a|^k)`, the log of the discarded factors.
pub fn log_tail_bound(abs_a: f64, k: u32) -> f64 {
    if abs_a == 0.0 {
        return 0.0;
    }
    let p = abs_a.powi(k as i32 + 1);
    p / ((1.0 - abs_a) * (1.0 - p))
}

/// Smallest `K` with [`log_tail_bound`] below `tol`.
pub fn terms_needed(abs_a: f64, tol: f64) -> u64 {
    if abs_a == 0.0 {
        return 0;
    }
    // |a|^{K+1} ≤ tol·(1−|a|)·(1−|a|^{K+1}); start from the leading estimate.
    let lead = ((tol * (1.0 - abs_a) * 0.5).ln() / abs_a.ln())
        .ceil()
        .max(0.0) as u64;
    let mut k = lead.saturating_sub(2);
    while log_tail_bound(abs_a, k.min(u32::MAX as u64) as u32) >= tol && k < u64::MAX / 2 {
        k += 1;
    }
    k
}

/// `(a)_∞ = ∏_{k≥1} (1 − a^k)` truncated where the log-tail bound drops
/// below `tol`; the truncation enters the error bound as `|P_K|(e^τ − 1)`.
pub fn euler_inf(a: &PrecComplex, tol: f64, opts: &EulerOptions) -> Result<PrecComplex> {
    let prec = a.prec();
    let abs_up = a.abs_upper();
    if abs_up >= 1.0 - opts.margin {
        return Err(Error::Domain(format!(
            "euler product needs |a| < 1 - {}, got |a| up to {abs_up}",
            opts.margin
        )));
    }
    if a.abs_f64() == 0.0 && *a.err() == 0 {
        return Ok(PrecComplex::one(prec));
    }
    let k = terms_needed(abs_up, tol);
    if k > opts.max_terms as u64 {
        return Err(Error::NonConvergence {
            iterations: k as usize,
            worst: log_tail_bound(abs_up, opts.max_terms),
            context: format!(
                "euler product at |a| = {abs_up} needs {k} factors, cap {}",
                opts.max_terms
            ),
        });
    }
    let one = PrecComplex::one(prec);
    let mut prod = PrecComplex::one(prec);
    let mut pow = a.clone();
    for i in 1..=k {
        prod = &prod * &(&one - &pow);
        if i < k {
            pow = &pow * a;
        }
    }
    let tau = log_tail_bound(abs_up, k as u32);
    let trunc = Float::with_val(ERR_PREC, prod.abs_upper())
        * Float::with_val(ERR_PREC, tau.exp_m1() * (1.0 + 1e-12));
    Ok(prod.with_added_err(&trunc))
}

/// Plain `f64` version used inside large sums; returns the truncated product
/// and the number of factors.
pub fn euler_inf_f64(a: num_complex::Complex64, tol: f64) -> (num_complex::Complex64, u32) {
    let r = a.norm();
    if r == 0.0 {
        return (num_complex::Complex64::new(1.0, 0.0), 0);
    }
    let k = terms_needed(r, tol) as u32;
    let mut prod = num_complex::Complex64::new(1.0, 0.0);
    let mut pow = a;
    for _ in 0..k {
        prod *= 1.0 - pow;
        pow *= a;
    }
    (prod, k)
}

/// Converts an `f64` complex to a [`PrecComplex`] value.
pub fn from_c64(z: num_complex::Complex64, prec: u32) -> PrecComplex {
    PrecComplex::exact(Complex::with_val(prec, (z.re, z.im)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partition_numbers;

    #[test]
    fn zero_gives_one() {
        let v = euler_inf(&PrecComplex::zero(128), 1e-30, &EulerOptions::default()).unwrap();
        assert_eq!(v, PrecComplex::one(128));
    }

    #[test]
    fn reciprocal_generates_partition_numbers() {
        let half = PrecComplex::from_f64(0.5, 0.0, 128);
        let e = euler_inf(&half, 1e-30, &EulerOptions::default()).unwrap();
        assert!(e.err_f64() < 1e-29);
        let inv = &PrecComplex::one(128) / &e;
        let p = partition_numbers(200);
        let mut sum = Float::new(128);
        let mut pw = Float::with_val(128, 1);
        for pn in &p {
            sum += Float::with_val(128, pn) * &pw;
            pw /= 2;
        }
        // The n > 200 tail of ∑ p(n) 2^{-n} is far below 1e-25.
        let diff = (Float::with_val(128, inv.value().real()) - sum).abs();
        assert!(diff.to_f64() < 1e-25, "{diff}");
    }

    #[test]
    fn complex_argument_within_tolerance() {
        let a = PrecComplex::from_f64(-0.3, 0.2, 128);
        let tol = 1e-30;
        let e = euler_inf(&a, tol, &EulerOptions::default()).unwrap();
        assert!(e.err_f64() < 1e-28);
        // Direct product with twice the factors.
        let k = 2 * terms_needed(a.abs_upper(), tol);
        let one = PrecComplex::one(128);
        let (mut prod, mut pow) = (one.clone(), a.clone());
        for _ in 0..k {
            prod = &prod * &(&one - &pow);
            pow = &pow * &a;
        }
        assert!(prod.agrees_with(&e));
    }

    #[test]
    fn rejects_unit_disc_boundary() {
        let opts = EulerOptions::default();
        assert!(matches!(
            euler_inf(&PrecComplex::from_f64(1.0, 0.0, 64), 1e-10, &opts),
            Err(Error::Domain(_))
        ));
        assert!(euler_inf(&PrecComplex::from_f64(0.0, -0.99995, 64), 1e-10, &opts).is_err());
        let tight = EulerOptions {
            margin: 1e-6,
            max_terms: 50,
        };
        assert!(matches!(
            euler_inf(&PrecComplex::from_f64(0.99, 0.0, 64), 1e-10, &tight),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn f64_path_matches() {
        let a = num_complex::Complex64::new(0.2, -0.4);
        let (v, _) = euler_inf_f64(a, 1e-18);
        let m = euler_inf(&from_c64(a, 128), 1e-30, &EulerOptions::default()).unwrap();
        assert!((v.re - m.re_f64()).abs() < 1e-15 && (v.im - m.im_f64()).abs() < 1e-15);
    }
}
