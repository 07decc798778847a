use std::fmt;

use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use crate::numerics::PrecComplex;

/// Polynomial in `w` with exact integer coefficients.
///
/// Stored as a dense window `coeffs[0..]` starting at degree `low`; the first
/// and last stored coefficients are nonzero, and the zero polynomial stores
/// nothing. Interior zeros are kept in the window.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WPolynomial {
    low: u32,
    coeffs: Vec<Integer>,
}

impl WPolynomial {
    pub fn zero() -> Self {
        WPolynomial::default()
    }

    pub fn one() -> Self {
        Self::constant(Integer::from(1))
    }

    pub fn constant(c: Integer) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Integer, degree: u32) -> Self {
        if c == 0 {
            return Self::zero();
        }
        WPolynomial {
            low: degree,
            coeffs: vec![c],
        }
    }

    /// From dense coefficients, `coeffs[k]` being the coefficient of `w^k`.
    pub fn from_coeffs(coeffs: Vec<Integer>) -> Self {
        let mut p = WPolynomial { low: 0, coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| **c == 0).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as u32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as u32 - 1)
    }

    /// Lowest degree with a nonzero coefficient (multiplicity of the root w = 0).
    pub fn valuation(&self) -> Option<u32> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn coeff(&self, k: u32) -> Integer {
        self.coeff_ref(k).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, k: u32) -> Option<&Integer> {
        k.checked_sub(self.low)
            .and_then(|i| self.coeffs.get(i as usize))
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn trailing(&self) -> Option<&Integer> {
        self.coeffs.first()
    }

    /// Nonzero terms `(degree, coefficient)` in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Integer)> {
        let low = self.low;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(move |(i, c)| (low + i as u32, c))
    }

    /// Dense coefficient list from degree 0 through the degree.
    pub fn to_dense(&self) -> Vec<Integer> {
        let mut out = vec![Integer::new(); self.low as usize];
        out.extend(self.coeffs.iter().cloned());
        out
    }

    /// `self += sign * w^shift * other`.
    pub fn add_shifted(&mut self, other: &WPolynomial, shift: u32, negate: bool) {
        if other.is_zero() {
            return;
        }
        let o_low = other.low + shift;
        if self.is_zero() {
            self.low = o_low;
            self.coeffs = other.coeffs.clone();
            if negate {
                self.coeffs.iter_mut().for_each(|c| *c = -std::mem::take(c));
            }
            return;
        }
        let o_high = o_low + other.coeffs.len() as u32 - 1;
        let s_high = self.low + self.coeffs.len() as u32 - 1;
        if o_low < self.low {
            let pad = (self.low - o_low) as usize;
            self.coeffs
                .splice(0..0, std::iter::repeat_with(Integer::new).take(pad));
            self.low = o_low;
        }
        if o_high > s_high {
            self.coeffs
                .resize((o_high - self.low + 1) as usize, Integer::new());
        }
        let start = (o_low - self.low) as usize;
        for (dst, src) in self.coeffs[start..].iter_mut().zip(&other.coeffs) {
            if negate {
                *dst -= src;
            } else {
                *dst += src;
            }
        }
        self.normalize();
    }

    pub fn mul(&self, other: &WPolynomial) -> WPolynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Integer::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = WPolynomial {
            low: self.low + other.low,
            coeffs,
        };
        p.normalize();
        p
    }

    pub fn scale(&self, c: &Integer) -> WPolynomial {
        let mut p = WPolynomial {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| Integer::from(x * c)).collect(),
        };
        p.normalize();
        p
    }

    /// Exact value at an integer point.
    pub fn eval_integer(&self, w: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= w;
            acc += c;
        }
        acc * Integer::from(w.pow(self.low))
    }

    /// Sum of coefficient magnitudes times `|w|^k`, the scale used in
    /// relative residuals.
    pub fn abs_eval(&self, r: &Float) -> Float {
        let prec = r.prec();
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= r;
            acc += Float::with_val(prec, &*c.as_abs());
        }
        acc * Float::with_val(prec, r.pow(self.low))
    }

    /// Horner evaluation with a rounding-plus-propagation error bound.
    pub fn evaluate(&self, w: &PrecComplex) -> PrecComplex {
        evaluate_wpoly(self, w)
    }
}

/// Evaluates `p(w)`.
///
/// The bound covers coefficient rounding and Horner rounding,
/// `2(d+2)u·∑|c_k||w|^k`, plus first-order propagation of the input error,
/// `err_w·∑ k|c_k|(|w|+err_w)^{k-1}`.
pub fn evaluate_wpoly(p: &WPolynomial, w: &PrecComplex) -> PrecComplex {
    let prec = w.prec();
    let z = w.value();
    if p.is_zero() {
        return PrecComplex::exact(Complex::new(prec));
    }
    let deg = p.degree().unwrap();
    let mut acc = Complex::new(prec);
    for c in p.coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    if p.low > 0 {
        acc *= Complex::with_val(prec, z.pow(p.low));
    }

    let r = Float::with_val(64, z.abs_ref());
    let scale = p.abs_eval(&r);
    let u = Float::with_val(64, Float::u_exp(1, 1 - prec as i32));
    let mut err = scale * u * (2 * (deg + 2));

    if *w.err() > 0 {
        let r_up = Float::with_val(64, &r + w.err());
        let mut deriv = Float::new(64);
        for k in (1..=deg).rev() {
            deriv *= &r_up;
            deriv += Float::with_val(64, p.coeff(k).abs()) * k;
        }
        err += deriv * w.err();
    }
    PrecComplex::new(acc, err)
}

impl fmt::Display for WPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = *c < 0;
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.clone().abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a == 1 => {}
                _ => write!(f, "{a}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "w")?,
                _ => write!(f, "w^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalization() {
        let p = WPolynomial::from_i64s(&[0, 0, 3, 0, 5, 0, 0]);
        assert_eq!(p.valuation(), Some(2));
        assert_eq!(p.degree(), Some(4));
        assert_eq!(p.coeff(3), 0);
        assert_eq!(p.coeff(4), 5);
        assert_eq!(p.coeff(100), 0);
        assert_eq!(p.to_dense(), [0, 0, 3, 0, 5].map(Integer::from).to_vec());
        assert!(WPolynomial::from_i64s(&[0, 0]).is_zero());
        assert_eq!(WPolynomial::zero().degree(), None);
    }

    #[test]
    fn shifted_add_cancels_to_zero() {
        let mut p = WPolynomial::from_i64s(&[1, 2, 3]);
        let q = p.clone();
        p.add_shifted(&q, 0, true);
        assert!(p.is_zero());
        let mut p = WPolynomial::from_i64s(&[0, 0, 1]);
        p.add_shifted(&WPolynomial::from_i64s(&[1]), 0, false);
        assert_eq!(p.to_dense(), [1, 0, 1].map(Integer::from).to_vec());
    }

    #[test]
    fn display() {
        let p = WPolynomial::from_i64s(&[-1, 0, 1]);
        assert_eq!(p.to_string(), "w^2 - 1");
        assert_eq!(WPolynomial::from_i64s(&[0, -3]).to_string(), "-3*w");
    }

    #[test]
    fn evaluate_examples() {
        let p = WPolynomial::from_i64s(&[-1, 0, 1]);
        let v = evaluate_wpoly(&p, &PrecComplex::from_f64(1.0, 0.0, 128));
        assert!(v.abs_upper() < 1e-30);
        let q5 = WPolynomial::from_i64s(&[0, 1, 2, 2, 1, 1]);
        let v = evaluate_wpoly(&q5, &PrecComplex::from_f64(1.0, 0.0, 128));
        assert!((v.re_f64() - 7.0).abs() <= v.err_f64());
        assert!(v.err_f64() < 1e-30);
    }

    fn poly_strategy() -> impl Strategy<Value = WPolynomial> {
        proptest::collection::vec(-50i64..50, 0..8).prop_map(|v| WPolynomial::from_i64s(&v))
    }

    proptest! {
        #[test]
        fn mul_is_evaluation_homomorphism(a in poly_strategy(), b in poly_strategy(), x in -5i64..5) {
            let x = Integer::from(x);
            let lhs = a.mul(&b).eval_integer(&x);
            let rhs = a.eval_integer(&x) * b.eval_integer(&x);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn add_shifted_matches_dense(a in poly_strategy(), b in poly_strategy(), s in 0u32..4, neg: bool) {
            let mut sum = a.clone();
            sum.add_shifted(&b, s, neg);
            let x = Integer::from(3);
            let shifted = Integer::from((&x).pow(s)) * b.eval_integer(&x);
            let expect = if neg { a.eval_integer(&x) - shifted } else { a.eval_integer(&x) + shifted };
            prop_assert_eq!(sum.eval_integer(&x), expect);
            prop_assert!(sum.trailing().is_none_or(|c| *c != 0));
            prop_assert!(sum.leading().is_none_or(|c| *c != 0));
        }
    }
}
