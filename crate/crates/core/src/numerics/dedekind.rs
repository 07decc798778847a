use rug::{Complex, Float, Integer, Rational};

use super::PrecComplex;
use crate::error::{Error, Result};

/// Exact rational number; reduced with positive denominator.
pub type ExactRational = Rational;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn reduce(h: i64, k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::Argument("k must be positive".into()));
    }
    let h = h.rem_euclid(k as i64) as u64;
    if gcd(h, k) != 1 {
        return Err(Error::Argument(format!("gcd({h}, {k}) must be 1")));
    }
    Ok(h)
}

/// `s(h,k) = ∑_{r=1}^{k−1} ((r/k))((hr/k))` summed directly.
pub fn dedekind_sum(h: i64, k: u64) -> Result<ExactRational> {
    let h = reduce(h, k)?;
    // ((r/k))((hr/k)) = (2r − k)(2(hr mod k) − k) / 4k² for 0 < r < k.
    let mut acc = Integer::new();
    let (hk, kk) = (h as u128, k as u128);
    for r in 1..k {
        let hr = ((hk * r as u128) % kk) as i128;
        acc += (2 * r as i128 - k as i128) * (2 * hr - k as i128);
    }
    let den = Integer::from(k) * k * 4;
    Ok(Rational::from((acc, den)))
}

/// `6k·s(h,k)`, an integer, via the reciprocity law in `O(log k)` steps.
pub fn dedekind_sum_6k(h: i64, k: u64) -> Result<i128> {
    let h = reduce(h, k)?;
    let s = reciprocity(h as i128, k as i128);
    let v = s.0 * 6 * k as i128;
    debug_assert_eq!(v % s.1, 0);
    Ok(v / s.1)
}

/// `s(h,k)` as a reduced `(num, den)` pair using
/// `s(h,k) + s(k,h) = −1/4 + (h/k + k/h + 1/(hk))/12`.
fn reciprocity(h: i128, k: i128) -> (i128, i128) {
    let h = h.rem_euclid(k);
    if h == 0 {
        // Only k = 1 is coprime to 0.
        return (0, 1);
    }
    let (n2, d2) = reciprocity(k % h, h);
    // −1/4 + (h² + k² + 1)/(12hk) − s(k mod h, h)
    let (mut n, mut d) = (h * h + k * k + 1 - 3 * h * k, 12 * h * k);
    n = n * d2 - n2 * d;
    d *= d2;
    let (mut a, mut b) = (n.unsigned_abs(), d as u128);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    let g = a.max(1) as i128;
    (n / g, d / g)
}

/// `e^{πi·x}` for a rational `x` at `prec` bits.
fn exp_pi_i(x: &Rational, prec: u32) -> PrecComplex {
    let pi = Float::with_val(prec + 16, rug::float::Constant::Pi);
    let angle = Float::with_val(prec + 16, x * pi);
    let v = Complex::with_val(prec, (angle.clone().cos(), angle.sin()));
    PrecComplex::exact(v).to_prec(prec)
}

/// `ω_{h,k} = e^{πi s(h,k)}`.
pub fn omega(h: i64, k: u64, prec: u32) -> Result<PrecComplex> {
    Ok(exp_pi_i(&dedekind_sum(h, k)?, prec))
}

/// `ω′_{h,k} = ω_{h,k} / ω^t_{th/g, k/g}` with `g = gcd(t,k)` and the first
/// index of the denominator reduced modulo `k/g`.
pub fn omega_prime(h: i64, k: u64, t: u32, prec: u32) -> Result<PrecComplex> {
    let s = dedekind_sum(h, k)?;
    let g = gcd(t as u64, k);
    let kk = k / g;
    let hh = ((t as i64 / g as i64) as i128 * h as i128).rem_euclid(kk as i128) as i64;
    let s2 = dedekind_sum(hh, kk)?;
    Ok(exp_pi_i(&(s - s2 * t), prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn small_values() {
        assert_eq!(dedekind_sum(0, 1).unwrap(), 0);
        assert_eq!(dedekind_sum(1, 3).unwrap(), q(1, 18));
        assert_eq!(dedekind_sum(4, 3).unwrap(), q(1, 18));
        assert_eq!(dedekind_sum(-1, 3).unwrap(), q(-1, 18));
        assert!(dedekind_sum(2, 4).is_err());
        let (h, k) = (3i64, 5u64);
        let lhs = dedekind_sum(h, k).unwrap() + dedekind_sum(k as i64, h as u64).unwrap();
        let rhs = q(-1, 4) + (q(3, 5) + q(5, 3) + q(1, 15)) / 12;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn omega_values() {
        let one = omega(0, 1, 128).unwrap();
        assert!((one.re_f64() - 1.0).abs() < 1e-30 && one.im_f64().abs() < 1e-30);
        let w = omega(1, 3, 128).unwrap();
        let a = std::f64::consts::PI / 18.0;
        assert!((w.re_f64() - a.cos()).abs() < 1e-15 && (w.im_f64() - a.sin()).abs() < 1e-15);
        let wp = omega_prime(1, 3, 7, 128).unwrap();
        let a = -std::f64::consts::PI / 3.0;
        assert!((wp.re_f64() - a.cos()).abs() < 1e-15 && (wp.im_f64() - a.sin()).abs() < 1e-15);
        let trivial = omega_prime(0, 1, 5, 128).unwrap();
        assert!((trivial.re_f64() - 1.0).abs() < 1e-30);
        // gcd(t,k) > 1 reduces the second index.
        let g = omega_prime(1, 4, 2, 128).unwrap();
        assert!((g.abs_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn fast_path_matches_direct() {
        for k in 1..=120u64 {
            for h in 0..k as i64 {
                if gcd(h as u64, k) != 1 {
                    continue;
                }
                let direct = dedekind_sum(h, k).unwrap() * (6 * k);
                assert_eq!(*direct.denom(), 1);
                assert_eq!(
                    direct.numer().to_i128().unwrap(),
                    dedekind_sum_6k(h, k).unwrap(),
                    "{h}/{k}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn reciprocity_law(h in 1u64..500, k in 1u64..=500) {
            prop_assume!(gcd(h, k) == 1);
            let lhs = dedekind_sum(h as i64, k).unwrap() + dedekind_sum(k as i64, h).unwrap();
            let (hq, kq) = (Rational::from(h), Rational::from(k));
            let rhs = q(-1, 4) + (Rational::from(&hq / &kq) + Rational::from(&kq / &hq) + Rational::from((1, h * k))) / 12;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn omega_is_unimodular(h in -50i64..50, k in 1u64..60, t in 1u32..10) {
            prop_assume!(gcd(h.rem_euclid(k as i64) as u64, k) == 1);
            let w = omega_prime(h, k, t, 128).unwrap();
            prop_assert!((w.abs_f64() - 1.0).abs() < 1e-30);
            let s = dedekind_sum(h + k as i64, k).unwrap();
            prop_assert_eq!(s, dedekind_sum(h, k).unwrap());
        }
    }
}
