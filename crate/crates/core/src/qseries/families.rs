//! Product and sum expansions of the generating functions for hook counts,
//! parts counts, t-cores and the two-parameter Rogers–Ramanujan family.

use rug::{Integer, Rational};

use super::{QSeries, WPolynomial};
use crate::error::{Error, Result};

/// Multiplies a dense integer series by `(1 - q^e)^sign` in place.
fn int_factor(v: &mut [Integer], e: usize, sign: i8) {
    if e == 0 || e >= v.len() {
        return;
    }
    if sign > 0 {
        for i in (e..v.len()).rev() {
            let (lo, hi) = v.split_at_mut(i);
            hi[0] -= &lo[i - e];
        }
    } else {
        for i in e..v.len() {
            let (lo, hi) = v.split_at_mut(i);
            hi[0] += &lo[i - e];
        }
    }
}

/// Coefficients of `∏_{n≥1} (1 - x^n)^{-t}` up to `x^k_max`: partitions into
/// `t` colours.
pub fn coloured_partitions(t: u32, k_max: usize) -> Vec<Integer> {
    let mut g = vec![Integer::new(); k_max + 1];
    g[0] = Integer::from(1);
    for n in 1..=k_max {
        for _ in 0..t {
            int_factor(&mut g, n, -1);
        }
    }
    g
}

/// t-core counts `c_t(0..=n_max)` from `∏ (1 - q^{tn})^t / (1 - q^n)`.
pub fn expand_tcore(t: u32, n_max: usize) -> Result<Vec<Integer>> {
    if t == 0 {
        return Err(Error::Argument("t must be positive".into()));
    }
    let mut c = vec![Integer::new(); n_max + 1];
    c[0] = Integer::from(1);
    for n in 1..=n_max {
        int_factor(&mut c, n, -1);
    }
    let t_us = t as usize;
    for n in 1..=n_max / t_us {
        for _ in 0..t {
            int_factor(&mut c, t_us * n, 1);
        }
    }
    Ok(c)
}

/// `P_t(w, 0..=n_max)`, the coefficients of Han's hook-length product.
///
/// The product splits as `G(w q^t)·F(q)` with `G = ∏(1 - x^n)^{-t}` and `F`
/// the t-core series, so `P_t(w,n) = ∑_k g_k c_t(n - tk) w^k`. At `t = 1`
/// this reads `∏ 1/(1 - (wq)^n)` and gives `p(n) w^n`.
pub fn expand_ht(t: u32, n_max: usize) -> Result<Vec<WPolynomial>> {
    let c = expand_tcore(t, n_max)?;
    let t_us = t as usize;
    let g = coloured_partitions(t, n_max / t_us);
    Ok((0..=n_max)
        .map(|n| {
            let dense = (0..=n / t_us)
                .map(|k| Integer::from(&g[k] * &c[n - t_us * k]))
                .collect();
            WPolynomial::from_coeffs(dense)
        })
        .collect())
}

/// Han's product built factor by factor on a [`QSeries`]. Quadratically more
/// work than [`expand_ht`]; kept as an independent route.
pub fn expand_ht_product(t: u32, n_max: usize) -> Result<Vec<WPolynomial>> {
    if t == 0 {
        return Err(Error::Argument("t must be positive".into()));
    }
    let trunc = Rational::from(n_max as u64);
    let mut s = QSeries::one(1, trunc)?;
    let (t_u, n_u) = (t as u64, n_max as u64);
    for n in 1..=n_u {
        if t == 1 {
            s.mul_factor(-1, &Rational::from(n), n as u32, -1)?;
            continue;
        }
        if t_u * n <= n_u {
            for _ in 0..t {
                s.mul_factor(-1, &Rational::from(t_u * n), n as u32, -1)?;
                s.mul_factor(-1, &Rational::from(t_u * n), 0, 1)?;
            }
        }
        s.mul_factor(-1, &Rational::from(n), 0, -1)?;
    }
    Ok(s.into_coeffs())
}

/// `Q_0, …, Q_{n_max}` with `Q_n(w) = ∑_{λ ⊢ n} w^{ℓ(λ)}`.
pub fn expand_qn(n_max: usize) -> Result<Vec<WPolynomial>> {
    let mut s = QSeries::one(1, Rational::from(n_max as u64))?;
    for n in 1..=n_max as u64 {
        s.mul_factor(-1, &Rational::from(n), 1, -1)?;
    }
    Ok(s.into_coeffs())
}

/// Exponent parameters `(a, b)` of `∑ q^{am²+bm} w^m / (q;q)_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPair {
    a: Rational,
    b: Rational,
}

impl RationalPair {
    /// Requires `a > 0` and `a + b ≥ 0`, so every exponent `am² + bm` is
    /// nonnegative and nondecreasing in `m`.
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a <= 0 {
            return Err(Error::Domain(format!("a must be positive, got {a}")));
        }
        if Rational::from(&a + &b) < 0 {
            return Err(Error::Domain(format!(
                "a + b must be nonnegative, got a={a}, b={b}"
            )));
        }
        Ok(RationalPair { a, b })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Exponent denominator `lcm(den a, den b)`.
    pub fn delta(&self) -> Integer {
        self.a.denom().clone().lcm(self.b.denom())
    }

    /// `a m² + b m`.
    pub fn exponent(&self, m: u32) -> Rational {
        let m = Rational::from(m);
        Rational::from(&self.a * &m) * &m + Rational::from(&self.b * &m)
    }

    /// Default w-degree cap `floor(sqrt(nmax/a)) + 1`.
    pub fn default_dcap(&self, nmax: &Rational) -> u32 {
        let ratio = Rational::from(nmax / &self.a);
        let floor = Integer::from(ratio.floor_ref());
        let root = if floor < 0 {
            Integer::new()
        } else {
            floor.sqrt()
        };
        root.to_u32().unwrap_or(u32::MAX - 1) + 1
    }
}

/// `p_{a,b}(w; n)` for every grid point `n ≤ nmax`, as a series on the grid
/// with denominator `lcm(den a, den b)`.
pub fn expand_pab(ab: &RationalPair, nmax: &Rational, dcap: Option<u32>) -> Result<QSeries> {
    if *nmax <= 0 {
        return Err(Error::Argument(format!(
            "nmax must be positive, got {nmax}"
        )));
    }
    let delta = ab
        .delta()
        .to_u32()
        .ok_or_else(|| Error::Grid(format!("exponent denominator {} too large", ab.delta())))?;
    let mut out = QSeries::zero(delta, nmax.clone())?;
    let last = out.len() - 1;
    let int_top = Integer::from(nmax.floor_ref()).to_usize().unwrap_or(0);
    let dcap = dcap.unwrap_or_else(|| ab.default_dcap(nmax));

    // Partitions into parts ≤ m, the coefficients of 1/(q;q)_m.
    let mut parts_le = vec![Integer::new(); int_top + 1];
    parts_le[0] = Integer::from(1);
    let step = delta as usize;
    for m in 0..=dcap {
        if m > 0 {
            int_factor(&mut parts_le, m as usize, -1);
        }
        let e: Rational = ab.exponent(m) * delta;
        let base = match e.numer().to_usize() {
            Some(b) if b <= last => b,
            _ => break,
        };
        for (k, count) in parts_le.iter().enumerate() {
            let idx = base + k * step;
            if idx > last {
                break;
            }
            if *count != 0 {
                out.add_at(idx, &WPolynomial::monomial(count.clone(), m));
            }
        }
    }
    Ok(out)
}

/// `p_{a,b}(w; n)` at a single grid point.
pub fn pab_coefficient(ab: &RationalPair, n: &Rational) -> Result<WPolynomial> {
    let series = expand_pab(ab, n, None)?;
    Ok(series.coeff(n)?.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{
        brute_force_pt, brute_force_qn, enumerate_partitions, partition_numbers,
    };

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn hook_examples() {
        let p = expand_ht(2, 2).unwrap();
        assert_eq!(
            p.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            ["1", "1", "2*w"]
        );
        assert_eq!(
            expand_ht(7, 5).unwrap()[5],
            WPolynomial::constant(Integer::from(7))
        );
    }

    #[test]
    fn t1_degenerates_to_scaled_monomial() {
        let p = expand_ht(1, 40).unwrap();
        let pn = partition_numbers(40);
        for n in 0..=40 {
            assert_eq!(p[n], WPolynomial::monomial(pn[n].clone(), n as u32));
        }
    }

    #[test]
    fn split_product_matches_factor_product() {
        for t in 1..=5 {
            assert_eq!(
                expand_ht(t, 24).unwrap(),
                expand_ht_product(t, 24).unwrap(),
                "t={t}"
            );
        }
    }

    #[test]
    fn hook_matches_brute_force_small() {
        for t in 1..=4 {
            let p = expand_ht(t, 16).unwrap();
            for n in 0..=16 {
                assert_eq!(p[n as usize], brute_force_pt(t, n, 40).unwrap());
            }
        }
    }

    #[test]
    fn qn_examples() {
        let q = expand_qn(12).unwrap();
        assert_eq!(q[0], WPolynomial::one());
        assert_eq!(q[5].to_string(), "w^5 + w^4 + 2*w^3 + 2*w^2 + w");
        for n in 0..=12u32 {
            assert_eq!(q[n as usize], brute_force_qn(n, 40).unwrap());
        }
    }

    #[test]
    fn tcore_basics() {
        let c7 = expand_tcore(7, 30).unwrap();
        let p = expand_ht(7, 30).unwrap();
        assert_eq!(c7[0], 1);
        assert_eq!(c7[30], p[30].coeff(0));
        let c7_head: Vec<u32> = c7[..12].iter().map(|x| x.to_u32().unwrap()).collect();
        assert_eq!(c7_head, [1, 1, 2, 3, 5, 7, 11, 8, 15, 16, 21, 21]);
        // 1-cores: only the empty partition.
        let c1 = expand_tcore(1, 10).unwrap();
        assert!(c1[1..].iter().all(|x| *x == 0));
    }

    #[test]
    fn pab_examples() {
        let one = RationalPair::new(r("1"), r("0")).unwrap();
        assert_eq!(
            pab_coefficient(&one, &r("4")).unwrap().to_string(),
            "w^2 + w"
        );
        let q = pab_coefficient(&one, &r("1000")).unwrap();
        assert_eq!(q.degree(), Some(31));

        let frac = RationalPair::new(r("1/3"), r("2/7")).unwrap();
        assert_eq!(frac.delta(), 21);
        let p = pab_coefficient(&frac, &r("7114/21")).unwrap();
        assert_eq!(
            p.to_string(),
            "281936495*w^26 + 567030825181*w^19 + 4450838*w^5"
        );

        let b1 = RationalPair::new(r("1"), r("1")).unwrap();
        assert_eq!(pab_coefficient(&b1, &r("4")).unwrap().to_string(), "w");
    }

    #[test]
    fn pab_rejects_bad_parameters() {
        assert!(RationalPair::new(r("0"), r("1")).is_err());
        assert!(RationalPair::new(r("1/2"), r("-1")).is_err());
        let frac = RationalPair::new(r("1/3"), r("2/7")).unwrap();
        assert!(matches!(
            pab_coefficient(&frac, &r("1/2")),
            Err(Error::Grid(_))
        ));
    }

    #[test]
    fn superdistinct_counts() {
        let one = RationalPair::new(r("1"), r("0")).unwrap();
        let series = expand_pab(&one, &r("30"), None).unwrap();
        for n in 0..=30u32 {
            let mut counts = [0u64; 12];
            for lam in enumerate_partitions(n).filter(|l| l.is_superdistinct()) {
                counts[lam.len()] += 1;
            }
            let poly = series.coeff(&Rational::from(n)).unwrap();
            for (m, &cnt) in counts.iter().enumerate() {
                assert_eq!(poly.coeff(m as u32), cnt, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn integer_grid_reproduces_factor_series() {
        // a=1, b=1 on delta=1: ∑ q^{m²+m} w^m/(q;q)_m built term by term.
        let ab = RationalPair::new(r("1"), r("1")).unwrap();
        let series = expand_pab(&ab, &r("40"), None).unwrap();
        assert_eq!(series.delta(), 1);
        let mut expect = QSeries::zero(1, r("40")).unwrap();
        for m in 0..=6u32 {
            let e = (m * m + m) as usize;
            if e > 40 {
                break;
            }
            let mut term = QSeries::zero(1, r("40")).unwrap();
            term.add_at(e, &WPolynomial::monomial(Integer::from(1), m));
            for j in 1..=m {
                term.mul_factor(-1, &Rational::from(j), 0, -1).unwrap();
            }
            for (i, c) in term.coeffs().iter().enumerate() {
                expect.add_at(i, c);
            }
        }
        assert_eq!(series, expect);
    }
}
