use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::numerics::{eval_at, theta_partition_form, PrecComplex, ThetaSpec, ERR_PREC};

fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `e^{π√(2n/3)}`.
fn growth(n: u64, prec: u32) -> Float {
    let x = Float::with_val(prec, 2 * n) / 3u32;
    (pi(prec) * x.sqrt()).exp()
}

/// `e^{π√(2n/3)} / (4n√3)`.
pub fn hardy_ramanujan_main(n: u64, prec: u32) -> Result<Float> {
    if n == 0 {
        return Err(Error::Argument("n must be positive".into()));
    }
    let denom = Float::with_val(prec, 3).sqrt() * 4u32 * Float::with_val(prec, n);
    Ok(growth(n, prec) / denom)
}

/// Constant in front of the large-`|w|` main term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LargeWConstant {
    /// `t^{(t+2)/2} / (2^{(5+3t)/4} 3^{(1+t)/4} n^{(3+t)/4})`, which reduces to
    /// `1/(4√3 n)` at `t = 1`.
    #[default]
    Derived,
    /// `1 / (2^{(5+t)/4} 3^{(1+t)/4} π^{(3+t)/2} n^{(3+t)/4})` as it is
    /// usually displayed.
    Printed,
}

fn large_w_prefactor(t: u32, n: u64, prec: u32, constant: LargeWConstant) -> Float {
    let tf = Float::with_val(prec, t);
    let nf = Float::with_val(prec, n);
    let n_pow = nf.pow(Float::with_val(prec, 3 + t) / 4u32);
    let three = Float::with_val(prec, 3).pow(Float::with_val(prec, 1 + t) / 4u32);
    match constant {
        LargeWConstant::Derived => {
            let num = Float::with_val(prec, (&tf).pow(Float::with_val(prec, t + 2) / 2u32));
            let two = Float::with_val(prec, 2).pow(Float::with_val(prec, 5 + 3 * t) / 4u32);
            num / (two * three * n_pow)
        }
        LargeWConstant::Printed => {
            let two = Float::with_val(prec, 2).pow(Float::with_val(prec, 5 + t) / 4u32);
            let p = pi(prec).pow(Float::with_val(prec, 3 + t) / 2u32);
            Float::with_val(prec, 1) / (two * three * p * n_pow)
        }
    }
}

/// Main term for `|w| > 1` along `n ≡ ℓ (mod t)`.
#[derive(Clone, Debug)]
pub struct LargeWMain {
    pub value: PrecComplex,
    /// `|value|`, independent of the branch of `w^{n/t}`.
    pub modulus: Float,
    pub theta: PrecComplex,
    /// Set when `|Θ(w^{-1})|` is under ten times its error bound.
    pub near_theta_zero: bool,
}

pub fn main_term_large_w(
    t: u32,
    ell: u32,
    n: u64,
    w: &PrecComplex,
    tol: f64,
) -> Result<LargeWMain> {
    main_term_large_w_with(t, ell, n, w, tol, LargeWConstant::Derived)
}

/// `C_t(n)·e^{π√(2n/3)} w^{n/t} Θ_{ℓ,t}(w^{-1})` with principal `w^{n/t}`.
pub fn main_term_large_w_with(
    t: u32,
    ell: u32,
    n: u64,
    w: &PrecComplex,
    tol: f64,
    constant: LargeWConstant,
) -> Result<LargeWMain> {
    let spec = ThetaSpec::new(t, ell)?;
    if n == 0 {
        return Err(Error::Argument("n must be positive".into()));
    }
    if n % t as u64 != ell as u64 {
        return Err(Error::Domain(format!("n = {n} is not ≡ {ell} (mod {t})")));
    }
    let abs_w = w.abs_lower();
    if abs_w <= 1 {
        return Err(Error::Domain(format!(
            "the large-w regime needs |w| > 1, got {}",
            w.abs_f64()
        )));
    }
    let prec = w.prec();
    let inv = &PrecComplex::one(prec) / w;
    let theta = theta_partition_form(spec, &inv, tol)?;
    let near =
        Float::with_val(ERR_PREC, theta.abs()) < Float::with_val(ERR_PREC, theta.err()) * 10u32;

    // w^{n/t} = exp((n/t) log w), relative error ≈ (n/t)|δw|/|w|.
    let log_w = Complex::with_val(prec, w.value().ln_ref());
    let expo = Float::with_val(prec, n) / t;
    let pw_val = Complex::with_val(prec, &log_w * &expo).exp();
    let rel = Float::with_val(ERR_PREC, w.err()) * &expo / &abs_w;
    let pw_err = Float::with_val(ERR_PREC, pw_val.abs_ref())
        * Float::with_val(ERR_PREC, rel.exp_m1_ref())
        + Float::with_val(ERR_PREC, pw_val.abs_ref())
            * Float::with_val(ERR_PREC, Float::u_exp(1, 8 - prec as i32));
    let pw = PrecComplex::new(pw_val, pw_err);

    let scale = growth(n, prec) * large_w_prefactor(t, n, prec, constant);
    let value = (&pw * &theta).mul_real(&scale);
    let modulus = value.abs();
    Ok(LargeWMain {
        value,
        modulus,
        theta,
        near_theta_zero: near,
    })
}

/// `(2π)^{(t−1)/2} n^{(t−3)/2} / (t^{t/2} Γ((t−1)/2))`.
pub fn small_w_prefactor(t: u32, n: u64, prec: u32) -> Float {
    let half = |k: u32| Float::with_val(prec, k) / 2u32;
    let two_pi = pi(prec) * 2u32;
    let a = two_pi.pow(half(t - 1));
    let b = Float::with_val(prec, n).pow(half(t - 3));
    let c = Float::with_val(prec, t).pow(half(t));
    let g = half(t - 1).gamma();
    a * b / (c * g)
}

/// `(2π)^{(t−1)/2} A_t(w,n) n^{(t−3)/2} / (t^{t/2} Γ((t−1)/2))` for `t ≥ 6`.
pub fn main_term_small_w(t: u32, n: u64, w: &PrecComplex, tol: f64) -> Result<PrecComplex> {
    if t < 6 {
        return Err(Error::Domain(format!(
            "the small-w regime needs t ≥ 6, got {t}"
        )));
    }
    let a = eval_at(t, w, n, tol)?;
    Ok(a.mul_real(&small_w_prefactor(t, n, w.prec())))
}
