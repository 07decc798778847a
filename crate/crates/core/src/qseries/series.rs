use rug::{Integer, Rational};

use super::WPolynomial;
use crate::error::{Error, Result};

/// Largest exponent denominator accepted on a grid.
pub const MAX_DELTA: u32 = 1 << 16;
/// Largest number of grid points a single series may hold.
pub const MAX_GRID_POINTS: u64 = 1 << 24;

/// Truncated power series in `q` with `WPolynomial` coefficients, on the
/// exponent grid `(1/delta)·Z≥0`.
///
/// `coeffs[e]` is the coefficient of `q^{e/delta}`, for every grid point up to
/// `trunc`. Nothing beyond `trunc` is stored, and lookups past it fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    delta: u32,
    trunc: Rational,
    coeffs: Vec<WPolynomial>,
}

fn grid_len(delta: u32, trunc: &Rational) -> Result<usize> {
    if delta == 0 {
        return Err(Error::Grid("exponent denominator must be positive".into()));
    }
    if delta > MAX_DELTA {
        return Err(Error::Grid(format!(
            "denominator {delta} exceeds {MAX_DELTA}"
        )));
    }
    if *trunc < 0 {
        return Err(Error::Grid(format!("negative truncation {trunc}")));
    }
    let top = Integer::from((trunc.clone() * delta).floor_ref());
    match top.to_u64() {
        Some(v) if v < MAX_GRID_POINTS => Ok(v as usize + 1),
        _ => Err(Error::Grid(format!(
            "grid of {top} points at denominator {delta} exceeds {MAX_GRID_POINTS}"
        ))),
    }
}

/// `e·delta` as a grid index, or a grid error when `e` is off the grid.
fn to_index(delta: u32, e: &Rational) -> Result<Integer> {
    let scaled = e.clone() * delta;
    if *scaled.denom() != 1 {
        return Err(Error::Grid(format!(
            "exponent {e} is not a multiple of 1/{delta}"
        )));
    }
    Ok(scaled.into_numer_denom().0)
}

impl QSeries {
    /// The zero series.
    pub fn zero(delta: u32, trunc: Rational) -> Result<Self> {
        let len = grid_len(delta, &trunc)?;
        Ok(QSeries {
            delta,
            trunc,
            coeffs: vec![WPolynomial::zero(); len],
        })
    }

    /// The constant series 1.
    pub fn one(delta: u32, trunc: Rational) -> Result<Self> {
        let mut s = Self::zero(delta, trunc)?;
        s.coeffs[0] = WPolynomial::one();
        Ok(s)
    }

    /// Integer-exponent series from a coefficient list, truncated at its length.
    pub fn from_coeffs(coeffs: Vec<WPolynomial>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "series needs at least the constant term"
        );
        QSeries {
            delta: 1,
            trunc: Rational::from(coeffs.len() as u64 - 1),
            coeffs,
        }
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn trunc(&self) -> &Rational {
        &self.trunc
    }

    /// Number of stored grid points.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.iter().all(WPolynomial::is_zero)
    }

    /// Coefficient at grid index `e` (exponent `e/delta`).
    pub fn coeff_at(&self, e: usize) -> Option<&WPolynomial> {
        self.coeffs.get(e)
    }

    /// Coefficient of `q^n`. Off-grid `n` and `n` beyond the truncation are
    /// errors, not zero.
    pub fn coeff(&self, n: &Rational) -> Result<&WPolynomial> {
        let idx = to_index(self.delta, n)?;
        if *n < 0 || *n > self.trunc {
            return Err(Error::Truncation(format!(
                "exponent {n} outside [0, {}]",
                self.trunc
            )));
        }
        Ok(&self.coeffs[idx.to_usize().expect("index checked against trunc")])
    }

    /// Grid points with their exponent and coefficient, in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (Rational, &WPolynomial)> {
        let delta = self.delta;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(e, p)| (Rational::from((e as u64, delta)), p))
    }

    pub fn coeffs(&self) -> &[WPolynomial] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<WPolynomial> {
        self.coeffs
    }

    /// Adds `poly` to the coefficient at grid index `e`; ignored past the end.
    pub fn add_at(&mut self, e: usize, poly: &WPolynomial) {
        if let Some(slot) = self.coeffs.get_mut(e) {
            slot.add_shifted(poly, 0, false);
        }
    }

    /// In-place multiplication by `(1 + c·w^d·q^e)^sign`, truncated.
    pub fn mul_factor(&mut self, c: i8, e: &Rational, d: u32, sign: i8) -> Result<()> {
        if c != 1 && c != -1 {
            return Err(Error::Argument(format!(
                "factor coefficient must be ±1, got {c}"
            )));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::Argument(format!(
                "factor sign must be ±1, got {sign}"
            )));
        }
        if *e <= 0 {
            return Err(Error::Argument(format!(
                "factor exponent must be positive, got {e}"
            )));
        }
        let step = to_index(self.delta, e)?;
        let Some(step) = step.to_usize().filter(|&s| s < self.coeffs.len()) else {
            return Ok(());
        };
        let len = self.coeffs.len();
        if sign == 1 {
            // new[i] = old[i] + c w^d old[i-step]: descend so old values are read.
            let negate = c == -1;
            for i in (step..len).rev() {
                let (lo, hi) = self.coeffs.split_at_mut(i);
                hi[0].add_shifted(&lo[i - step], d, negate);
            }
        } else {
            // new[i] = old[i] - c w^d new[i-step]: ascend so new values are read.
            let negate = c == 1;
            for i in step..len {
                let (lo, hi) = self.coeffs.split_at_mut(i);
                hi[0].add_shifted(&lo[i - step], d, negate);
            }
        }
        Ok(())
    }

    /// Cauchy product. Both series must share a grid; the result keeps the
    /// smaller truncation.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        if self.delta != other.delta {
            return Err(Error::Grid(format!(
                "cannot multiply series on grids 1/{} and 1/{}",
                self.delta, other.delta
            )));
        }
        let trunc = self.trunc.clone().min(other.trunc.clone());
        let mut out = QSeries::zero(self.delta, trunc)?;
        let len = out.coeffs.len();
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out.coeffs[i + j].add_shifted(&a.mul(b), 0, false);
                }
            }
        }
        Ok(out)
    }
}

/// `s·(1 + c·w^d·q^e)^sign`, truncated to `s`'s bound.
pub fn series_mul_factor(mut s: QSeries, c: i8, e: &Rational, d: u32, sign: i8) -> Result<QSeries> {
    s.mul_factor(c, e, d, sign)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &QSeries) -> Vec<String> {
        s.coeffs().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn geometric_series() {
        let s = QSeries::one(1, Rational::from(3)).unwrap();
        let s = series_mul_factor(s, -1, &Rational::from(1), 0, -1).unwrap();
        assert_eq!(ints(&s), ["1", "1", "1", "1"]);

        let s = QSeries::one(1, Rational::from(2)).unwrap();
        let s = series_mul_factor(s, -1, &Rational::from(1), 1, -1).unwrap();
        assert_eq!(ints(&s), ["1", "w", "w^2"]);
    }

    #[test]
    fn partition_numbers_from_three_factors() {
        let mut s = QSeries::one(1, Rational::from(3)).unwrap();
        for k in 1..=3 {
            s.mul_factor(-1, &Rational::from(k), 0, -1).unwrap();
        }
        assert_eq!(ints(&s), ["1", "1", "2", "3"]);
    }

    #[test]
    fn factor_and_inverse_cancel() {
        let mut s = QSeries::one(6, Rational::from(4)).unwrap();
        let e = Rational::from((5, 6));
        s.mul_factor(1, &e, 2, 1).unwrap();
        assert_eq!(s.coeff(&e).unwrap().to_string(), "w^2");
        s.mul_factor(1, &e, 2, -1).unwrap();
        assert_eq!(s, QSeries::one(6, Rational::from(4)).unwrap());
    }

    #[test]
    fn grid_errors() {
        let mut s = QSeries::one(3, Rational::from(2)).unwrap();
        assert!(matches!(
            s.mul_factor(-1, &Rational::from((1, 2)), 0, 1),
            Err(Error::Grid(_))
        ));
        assert!(matches!(
            s.coeff(&Rational::from((1, 2))),
            Err(Error::Grid(_))
        ));
        assert!(matches!(
            s.coeff(&Rational::from(3)),
            Err(Error::Truncation(_))
        ));
        assert!(s.coeff(&Rational::from((5, 3))).unwrap().is_zero());
        assert!(QSeries::zero(MAX_DELTA + 1, Rational::from(1)).is_err());
    }

    #[test]
    fn product_matches_factor_application() {
        let t = Rational::from(10);
        let mut a = QSeries::one(1, t.clone()).unwrap();
        a.mul_factor(-1, &Rational::from(1), 1, -1).unwrap();
        let mut b = QSeries::one(1, t.clone()).unwrap();
        b.mul_factor(-1, &Rational::from(2), 0, -1).unwrap();
        let mut both = a.clone();
        both.mul_factor(-1, &Rational::from(2), 0, -1).unwrap();
        assert_eq!(a.mul(&b).unwrap(), both);
    }
}
