use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::Pow;
use rug::{Complex, Float};

/// Precision of the error-bound floats. Bounds only need a few correct
/// digits, but must not overflow where values do.
pub const ERR_PREC: u32 = 64;

/// A complex value at a configurable binary precision, together with an
/// absolute bound on its total evaluation error.
///
/// Arithmetic propagates bounds first-order-conservatively: absolute errors
/// add under `+`, the product rule applies under `×`, and every operation
/// charges a few units of rounding in the last place of its result.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecComplex {
    value: Complex,
    err: Float,
}

fn ulp_bound(value: &Complex) -> Float {
    let prec = value.prec().0.min(value.prec().1);
    let mag = Float::with_val(ERR_PREC, value.abs_ref());
    mag * Float::with_val(ERR_PREC, Float::u_exp(1, 2 - prec as i32))
}

impl PrecComplex {
    pub fn new(value: Complex, err: Float) -> Self {
        let mut e = Float::with_val_round(ERR_PREC, &err, Round::Up).0;
        if e.is_nan() || e < 0 {
            e = Float::with_val(ERR_PREC, 0);
        }
        PrecComplex { value, err: e }
    }

    pub fn exact(value: Complex) -> Self {
        PrecComplex {
            value,
            err: Float::new(ERR_PREC),
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::exact(Complex::with_val(prec, (re, im)))
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        Self::exact(Complex::with_val(prec, (re, im)))
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Complex::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::exact(Complex::with_val(prec, 1))
    }

    pub fn prec(&self) -> u32 {
        self.value.prec().0
    }

    pub fn value(&self) -> &Complex {
        &self.value
    }

    pub fn into_value(self) -> Complex {
        self.value
    }

    pub fn err(&self) -> &Float {
        &self.err
    }

    pub fn err_f64(&self) -> f64 {
        self.err.to_f64_round(Round::Up)
    }

    pub fn re_f64(&self) -> f64 {
        self.value.real().to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.value.imag().to_f64()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.value.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// `|value| + err`, an upper bound on the modulus of the true value.
    pub fn abs_upper(&self) -> f64 {
        (Float::with_val(ERR_PREC, self.value.abs_ref()) + &self.err).to_f64_round(Round::Up)
    }

    /// `|value| − err`, a lower bound (possibly negative) on the true modulus.
    pub fn abs_lower(&self) -> Float {
        Float::with_val(ERR_PREC, self.value.abs_ref()) - &self.err
    }

    pub fn with_added_err(mut self, extra: &Float) -> Self {
        self.err += extra;
        self
    }

    /// Re-rounds to a new precision, charging the rounding to the bound.
    pub fn to_prec(&self, prec: u32) -> Self {
        let v = Complex::with_val(prec, &self.value);
        let e = Float::with_val(ERR_PREC, &self.err) + ulp_bound(&v);
        PrecComplex::new(v, e)
    }

    pub fn conj(&self) -> Self {
        PrecComplex {
            value: Complex::with_val(self.value.prec(), self.value.conj_ref()),
            err: self.err.clone(),
        }
    }

    /// Integer power by repeated squaring; the bound uses `k|z|^{k-1}` per
    /// unit of input error and `2k` rounding units.
    pub fn powu(&self, k: u32) -> Self {
        if k == 0 {
            return Self::one(self.prec());
        }
        let v = Complex::with_val(self.value.prec(), (&self.value).pow(k));
        let r = Float::with_val(ERR_PREC, self.value.abs_ref()) + &self.err;
        let prop = Float::with_val(ERR_PREC, r.pow(k - 1)) * k * &self.err;
        let round = ulp_bound(&v) * (2 * k);
        PrecComplex::new(v, prop + round)
    }

    pub fn mul_real(&self, x: &Float) -> Self {
        let v = Complex::with_val(self.value.prec(), &self.value * x);
        let ax = Float::with_val(ERR_PREC, x.abs_ref());
        let e = Float::with_val(ERR_PREC, &self.err * &ax) + ulp_bound(&v);
        PrecComplex::new(v, e)
    }

    /// Complex `exp`; the propagated bound uses `|e^{z+δ} − e^z| ≤ |e^z|(e^{|δ|} − 1)`.
    pub fn exp(&self) -> Self {
        let v = Complex::with_val(self.value.prec(), self.value.exp_ref());
        let grow = Float::with_val(ERR_PREC, self.err.exp_m1_ref());
        let e = Float::with_val(ERR_PREC, v.abs_ref()) * grow + ulp_bound(&v) * 2;
        PrecComplex::new(v, e)
    }

    /// True when the stated intervals of `self` and `other` overlap, i.e.
    /// `|a − b| ≤ err_a + err_b`.
    pub fn agrees_with(&self, other: &PrecComplex) -> bool {
        let d = Complex::with_val(self.prec().max(other.prec()), &self.value - &other.value);
        Float::with_val(ERR_PREC, d.abs_ref()) <= Float::with_val(ERR_PREC, &self.err + &other.err)
    }

    pub fn distance(&self, other: &PrecComplex) -> f64 {
        let d = Complex::with_val(self.prec().max(other.prec()), &self.value - &other.value);
        Float::with_val(ERR_PREC, d.abs_ref()).to_f64()
    }

    /// Decimal strings of the real and imaginary parts at full precision.
    pub fn to_decimal_strings(&self) -> (String, String) {
        (
            self.value.real().to_string_radix(10, None),
            self.value.imag().to_string_radix(10, None),
        )
    }

    pub fn err_string(&self) -> String {
        self.err.to_string_radix(10, Some(6))
    }
}

impl Add for &PrecComplex {
    type Output = PrecComplex;
    fn add(self, rhs: &PrecComplex) -> PrecComplex {
        let v = Complex::with_val(self.prec().max(rhs.prec()), &self.value + &rhs.value);
        let e = Float::with_val(ERR_PREC, &self.err + &rhs.err) + ulp_bound(&v);
        PrecComplex::new(v, e)
    }
}

impl Sub for &PrecComplex {
    type Output = PrecComplex;
    fn sub(self, rhs: &PrecComplex) -> PrecComplex {
        let v = Complex::with_val(self.prec().max(rhs.prec()), &self.value - &rhs.value);
        let e = Float::with_val(ERR_PREC, &self.err + &rhs.err) + ulp_bound(&v);
        PrecComplex::new(v, e)
    }
}

impl Mul for &PrecComplex {
    type Output = PrecComplex;
    fn mul(self, rhs: &PrecComplex) -> PrecComplex {
        let v = Complex::with_val(self.prec().max(rhs.prec()), &self.value * &rhs.value);
        let a = Float::with_val(ERR_PREC, self.value.abs_ref());
        let b = Float::with_val(ERR_PREC, rhs.value.abs_ref());
        let e = a * &rhs.err
            + b * &self.err
            + Float::with_val(ERR_PREC, &self.err * &rhs.err)
            + ulp_bound(&v);
        PrecComplex::new(v, e)
    }
}

impl Div for &PrecComplex {
    type Output = PrecComplex;
    /// `|a/b − â/b̂| ≤ (err_a + |a/b|·err_b) / (|b| − err_b)`; an infinite bound
    /// results when the divisor's interval contains zero.
    fn div(self, rhs: &PrecComplex) -> PrecComplex {
        let v = Complex::with_val(self.prec().max(rhs.prec()), &self.value / &rhs.value);
        let q = Float::with_val(ERR_PREC, v.abs_ref());
        let denom = rhs.abs_lower();
        let e = if denom > 0 {
            (Float::with_val(ERR_PREC, &q * &rhs.err) + &self.err) / denom + ulp_bound(&v) * 2
        } else {
            Float::with_val(ERR_PREC, rug::float::Special::Infinity)
        };
        PrecComplex { value: v, err: e }
    }
}

impl Neg for &PrecComplex {
    type Output = PrecComplex;
    fn neg(self) -> PrecComplex {
        PrecComplex {
            value: Complex::with_val(self.value.prec(), -&self.value),
            err: self.err.clone(),
        }
    }
}

impl fmt::Display for PrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} ± {})",
            self.value,
            self.err.to_string_radix(10, Some(3))
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_bounds_are_nonnegative_and_grow() {
        let a = PrecComplex::new(
            Complex::with_val(128, (1.5, -0.5)),
            Float::with_val(64, 1e-20),
        );
        let b = PrecComplex::new(
            Complex::with_val(128, (0.25, 2.0)),
            Float::with_val(64, 3e-21),
        );
        let s = &a + &b;
        assert!(s.err_f64() >= 1.3e-20);
        let p = &a * &b;
        // |a|err_b + |b|err_a
        let expect = a.abs_f64() * 3e-21 + b.abs_f64() * 1e-20;
        assert!(p.err_f64() >= expect * 0.999);
        let q = &p / &b;
        assert!(q.agrees_with(&a));
    }

    #[test]
    fn division_by_uncertain_zero_is_unbounded() {
        let a = PrecComplex::one(128);
        let z = PrecComplex::new(Complex::with_val(128, 1e-30), Float::with_val(64, 1e-20));
        assert!((&a / &z).err().is_infinite());
    }

    #[test]
    fn powu_matches_repeated_multiplication() {
        let a = PrecComplex::new(
            Complex::with_val(128, (0.3, 0.2)),
            Float::with_val(64, 1e-25),
        );
        let p7 = a.powu(7);
        let mut m = a.clone();
        for _ in 1..7 {
            m = &m * &a;
        }
        assert!(p7.agrees_with(&m));
        assert_eq!(a.powu(0), PrecComplex::one(128));
    }

    #[test]
    fn rounding_is_charged() {
        let third = PrecComplex::exact(Complex::with_val(64, 1)).to_prec(64);
        let t = &third / &PrecComplex::from_f64(3.0, 0.0, 64);
        assert!(t.err_f64() > 0.0);
        assert!(t.err_f64() < 1e-18);
    }
}
