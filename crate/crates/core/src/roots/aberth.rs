use std::cmp::Ordering;
use std::io::Write;

use rug::float::Constant;
use rug::{Complex, Float, Integer};

use crate::error::{Error, Result};
use crate::numerics::{PrecComplex, ERR_PREC};
use crate::qseries::WPolynomial;

/// Limits for [`find_roots_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Precision ceiling for the escalation loop.
    pub max_prec: u32,
    /// Iterations allowed at each precision.
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_prec: 4096,
            max_iter: 1000,
        }
    }
}

/// Certified zeros of a polynomial. `roots` excludes the root `w = 0`, whose
/// multiplicity is recorded separately.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<PrecComplex>,
    /// `|p(r)| / ∑|c_k||r|^k` per root.
    pub residuals: Vec<Float>,
    pub zero_multiplicity: u32,
    pub degree: u32,
    /// Precision at which certification succeeded.
    pub precision: u32,
    pub iterations: usize,
}

impl RootSet {
    /// Largest `|r|`, with its root.
    pub fn max_modulus(&self) -> Option<&PrecComplex> {
        self.roots
            .iter()
            .max_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap_or(Ordering::Equal))
    }

    /// Writes `re,im,residual` rows in full-precision decimal, preceded by a
    /// `#` metadata line.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut out = out;
        writeln!(
            out,
            "# degree={} zero_multiplicity={} precision={}",
            self.degree, self.zero_multiplicity, self.precision
        )?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["re", "im", "residual"]).map_err(csv_err)?;
        for (r, res) in self.roots.iter().zip(&self.residuals) {
            let (re, im) = r.to_decimal_strings();
            w.write_record([re, im, res.to_string_radix(10, Some(6))])
                .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// `1 + max_k |c_k / c_deg|`; every root has smaller modulus.
pub fn cauchy_bound(p: &WPolynomial) -> Result<f64> {
    let (deg, lead) = match (p.degree(), p.leading()) {
        (Some(d), Some(l)) if d >= 1 => (d, Float::with_val(ERR_PREC, &*l.as_abs())),
        _ => return Err(Error::Argument("cauchy bound needs degree ≥ 1".into())),
    };
    let mut m = Float::new(ERR_PREC);
    for (_, c) in p.terms().filter(|(k, _)| *k != deg) {
        let q = Float::with_val(ERR_PREC, &*c.as_abs()) / &lead;
        if q > m {
            m = q;
        }
    }
    Ok(1.0 + m.to_f64_round(rug::float::Round::Up))
}

pub fn find_roots(p: &WPolynomial, prec: u32, tol: f64) -> Result<RootSet> {
    find_roots_with(p, prec, tol, &SolverOptions::default())
}

/// Dense coefficients of `p / w^v` as floats at `prec`.
fn float_coeffs(ints: &[Integer], prec: u32) -> Vec<Float> {
    ints.iter().map(|c| Float::with_val(prec, c)).collect()
}

/// `p(z)` and `p'(z)` by Horner.
fn horner2(c: &[Float], z: &Complex) -> (Complex, Complex) {
    let prec = z.prec().0;
    let n = c.len() - 1;
    let mut b = Complex::with_val(prec, &c[n]);
    let mut d = Complex::new(prec);
    for k in (0..n).rev() {
        d *= z;
        d += &b;
        b *= z;
        b += &c[k];
    }
    (b, d)
}

/// `∑ |c_k| ρ^k`.
fn abs_horner(c: &[Float], rho: &Float) -> Float {
    let mut acc = Float::new(rho.prec());
    for ck in c.iter().rev() {
        acc *= rho;
        acc += Float::with_val(rho.prec(), ck.abs_ref());
    }
    acc
}

/// Initial radii from the upper convex hull of `(k, log|c_k|)`.
fn newton_polygon_start(c: &[Float], prec: u32) -> Vec<Complex> {
    let n = c.len() - 1;
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| (k, Float::with_val(64, x.abs_ref()).ln().to_f64()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop b when it lies on or below the chord a→p.
            let cross =
                (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut out = Vec::with_capacity(n);
    for seg in hull.windows(2) {
        let ((i, li), (j, lj)) = (seg[0], seg[1]);
        let len = j - i;
        let log_r = (li - lj) / len as f64;
        let radius = Float::with_val(prec, log_r).exp();
        for m in 0..len {
            let frac = m as f64 / len as f64 + i as f64 / n as f64;
            let angle: Float = Float::with_val(prec, &two_pi * frac) + 0.37;
            let (s, c) = angle.sin_cos(Float::new(prec));
            out.push(Complex::with_val(
                prec,
                (
                    Float::with_val(prec, &c * &radius),
                    Float::with_val(prec, &s * &radius),
                ),
            ));
        }
    }
    out
}

/// Ehrlich–Aberth iteration with Jacobi updates. Roots whose correction falls
/// below `tol` relative to their modulus, or whose residual reaches rounding
/// level, are frozen. Certification failures double the precision.
pub fn find_roots_with(
    p: &WPolynomial,
    prec: u32,
    tol: f64,
    opts: &SolverOptions,
) -> Result<RootSet> {
    let degree = p
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Argument("root finding needs degree ≥ 1".into()))?;
    let zero_mult = p.valuation().unwrap();
    let ints: Vec<Integer> = p.to_dense()[zero_mult as usize..].to_vec();
    let n = ints.len() - 1;
    if n == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            residuals: Vec::new(),
            zero_multiplicity: zero_mult,
            degree,
            precision: prec,
            iterations: 0,
        });
    }

    let mut prec = prec.max(64);
    let mut z = newton_polygon_start(&float_coeffs(&ints, prec), prec);
    let mut total_iter = 0;
    loop {
        let c = float_coeffs(&ints, prec);
        z = z.into_iter().map(|x| Complex::with_val(prec, x)).collect();
        let noise = Float::with_val(ERR_PREC, Float::u_exp(1, 5 - prec as i32)) * (n as u32 + 1);
        let tol_f = Float::with_val(ERR_PREC, tol);
        let mut frozen = vec![false; n];
        let mut worst = f64::INFINITY;
        let mut iter = 0;
        while iter < opts.max_iter && frozen.iter().any(|f| !f) {
            iter += 1;
            let snapshot = &z;
            let updates = crate::par::map_range(n, |i| {
                if frozen[i] {
                    return None;
                }
                let zi = &snapshot[i];
                let (pv, dv) = horner2(&c, zi);
                let rho = Float::with_val(prec, zi.abs_ref());
                let scale = abs_horner(&c, &rho);
                let rel =
                    Float::with_val(ERR_PREC, pv.abs_ref()) / Float::with_val(ERR_PREC, &scale);
                if pv.is_zero() {
                    return Some((Complex::new(prec), true, 0.0));
                }
                let ratio = Complex::with_val(prec, &pv / &dv);
                let mut s = Complex::new(prec);
                for (j, zj) in snapshot.iter().enumerate() {
                    if j != i {
                        let diff = Complex::with_val(prec, zi - zj);
                        s += diff.recip();
                    }
                }
                let denom = Complex::with_val(prec, 1) - Complex::with_val(prec, &ratio * &s);
                let corr = Complex::with_val(prec, ratio / denom);
                let step = Float::with_val(ERR_PREC, corr.abs_ref());
                let size = Float::with_val(ERR_PREC, &rho)
                    .max(&Float::with_val(ERR_PREC, f64::MIN_POSITIVE));
                let relstep = Float::with_val(ERR_PREC, &step / &size);
                let done = relstep <= tol_f || rel <= noise;
                Some((corr, done, relstep.to_f64()))
            });
            worst = 0.0;
            for (i, u) in updates.into_iter().enumerate() {
                if let Some((corr, done, rs)) = u {
                    if rs.is_finite() {
                        z[i] -= corr;
                    }
                    worst = worst.max(rs);
                    frozen[i] = done;
                }
            }
        }
        total_iter += iter;
        let not_done = frozen.iter().filter(|f| !**f).count();

        // Certification by relative residual.
        let checks = crate::par::map_range(n, |i| {
            let (pv, _) = horner2(&c, &z[i]);
            let rho = Float::with_val(prec, z[i].abs_ref());
            let scale = abs_horner(&c, &rho);
            Float::with_val(ERR_PREC, pv.abs_ref()) / Float::with_val(ERR_PREC, &scale)
        });
        let certified = not_done == 0 && checks.iter().all(|r| *r <= tol_f);
        if certified {
            return Ok(finish(&c, z, checks, zero_mult, degree, prec, total_iter));
        }
        if prec >= opts.max_prec {
            if not_done > 0 {
                return Err(Error::NonConvergence {
                    iterations: total_iter,
                    worst,
                    context: format!("{not_done} of {n} roots still moving at {prec} bits"),
                });
            }
            let bad = checks.iter().filter(|r| **r > tol_f).count();
            return Err(Error::Certification(format!(
                "{bad} of {n} roots exceed relative residual {tol:e} at {prec} bits"
            )));
        }
        prec = (prec * 2).min(opts.max_prec);
    }
}

fn finish(
    c: &[Float],
    z: Vec<Complex>,
    residuals: Vec<Float>,
    zero_mult: u32,
    degree: u32,
    prec: u32,
    iterations: usize,
) -> RootSet {
    let n = z.len();
    let lead = Float::with_val(prec, c[n].abs_ref());
    // Inclusion radius n|p(z_i)| / |a_n ∏_{j≠i}(z_i − z_j)|.
    let radii = crate::par::map_range(n, |i| {
        let (pv, _) = horner2(c, &z[i]);
        let mut prod = lead.clone();
        for (j, zj) in z.iter().enumerate() {
            if j != i {
                prod *= Float::with_val(prec, Complex::with_val(prec, &z[i] - zj).abs_ref());
            }
        }
        let num = Float::with_val(prec, pv.abs_ref()) * n as u32;
        Float::with_val(ERR_PREC, num / prod)
    });
    let mut items: Vec<(PrecComplex, Float)> = z
        .into_iter()
        .zip(radii)
        .map(|(v, r)| PrecComplex::new(v, r))
        .zip(residuals)
        .collect();
    items.sort_by(|(a, _), (b, _)| {
        let ka = (a.value().real(), a.value().imag());
        let kb = (b.value().real(), b.value().imag());
        ka.partial_cmp(&kb).unwrap_or(Ordering::Equal)
    });
    let (roots, residuals) = items.into_iter().unzip();
    RootSet {
        roots,
        residuals,
        zero_multiplicity: zero_mult,
        degree,
        precision: prec,
        iterations,
    }
}

/// `| |lead|·∏|r_i| / |trailing| − 1 |`, with `w = 0` factored out.
pub fn vieta_relative_error(p: &WPolynomial, rs: &RootSet) -> f64 {
    let prec = rs.precision.max(128);
    let lead = Float::with_val(prec, &*p.leading().expect("nonzero").as_abs());
    let trail = Float::with_val(prec, &*p.trailing().expect("nonzero").as_abs());
    let mut prod = lead;
    for r in &rs.roots {
        prod *= Float::with_val(prec, r.value().abs_ref());
    }
    (prod / trail - 1u32).abs().to_f64()
}

/// Largest `|lead·w^v·∏(w − r_i) − p(w)| / |p(w)|` over `points`.
pub fn reconstruction_relative_error(p: &WPolynomial, rs: &RootSet, points: &[PrecComplex]) -> f64 {
    let prec = rs.precision.max(128);
    let lead = Float::with_val(prec, p.leading().expect("nonzero"));
    let mut worst = 0.0f64;
    for w in points {
        let w = Complex::with_val(prec, w.value());
        let mut prod = Complex::with_val(prec, &lead);
        for r in &rs.roots {
            prod *= Complex::with_val(prec, &w - r.value());
        }
        prod *= Complex::with_val(prec, rug::ops::Pow::pow(&w, rs.zero_multiplicity));
        let exact = crate::qseries::evaluate_wpoly(p, &PrecComplex::exact(w.clone()));
        let diff = Complex::with_val(prec, &prod - exact.value());
        let rel =
            Float::with_val(prec, diff.abs_ref()) / Float::with_val(prec, exact.value().abs_ref());
        worst = worst.max(rel.to_f64());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{expand_ht, pab_coefficient, RationalPair};
    use rug::Rational;

    fn pts(k: usize) -> Vec<PrecComplex> {
        (0..k)
            .map(|j| {
                let a = 0.3 + j as f64 * std::f64::consts::TAU / k as f64;
                PrecComplex::from_f64(2.0 * a.cos(), 2.0 * a.sin(), 256)
            })
            .collect()
    }

    #[test]
    fn quadratic() {
        let p = WPolynomial::from_i64s(&[-1, 0, 1]);
        let rs = find_roots(&p, 128, 1e-25).unwrap();
        assert_eq!(rs.roots.len(), 2);
        assert!((rs.roots[0].re_f64() + 1.0).abs() < 1e-30);
        assert!((rs.roots[1].re_f64() - 1.0).abs() < 1e-30);
        assert!(rs.roots.iter().all(|r| r.err_f64() < 1e-25));
    }

    #[test]
    fn cauchy_examples() {
        assert_eq!(
            cauchy_bound(&WPolynomial::from_i64s(&[-1, 0, 1])).unwrap(),
            2.0
        );
        assert_eq!(
            cauchy_bound(&WPolynomial::from_i64s(&[8, 0, 2])).unwrap(),
            5.0
        );
        let p = expand_ht(7, 105).unwrap().swap_remove(105);
        let b = cauchy_bound(&p).unwrap();
        let rs = find_roots(&p, 128, 1e-25).unwrap();
        assert_eq!(rs.roots.len() as u32 + rs.zero_multiplicity, 15);
        assert!(rs.roots.iter().all(|r| r.abs_f64() < b));
    }

    #[test]
    fn zero_roots_are_factored_out() {
        let p = WPolynomial::from_i64s(&[0, 0, 0, 2, -3, 1]);
        let rs = find_roots(&p, 128, 1e-25).unwrap();
        assert_eq!(rs.zero_multiplicity, 3);
        assert_eq!(rs.roots.len(), 2);
        assert!(
            (rs.roots[0].re_f64() - 1.0).abs() < 1e-25
                && (rs.roots[1].re_f64() - 2.0).abs() < 1e-25
        );
        assert!(find_roots(&WPolynomial::one(), 128, 1e-25).is_err());
        let mono = find_roots(&WPolynomial::from_i64s(&[0, 0, 5]), 128, 1e-25).unwrap();
        assert!(mono.roots.is_empty() && mono.zero_multiplicity == 2);
    }

    #[test]
    fn sparse_rr_polynomial_vieta() {
        let ab = RationalPair::new(Rational::from((1, 3)), Rational::from((2, 7))).unwrap();
        let p = pab_coefficient(&ab, &Rational::from((7114, 21))).unwrap();
        let rs = find_roots(&p, 128, 1e-25).unwrap();
        assert_eq!(rs.zero_multiplicity, 5);
        assert_eq!(rs.roots.len(), 21);
        assert!(vieta_relative_error(&p, &rs) < 1e-10);
        assert!(reconstruction_relative_error(&p, &rs, &pts(8)) < 1e-10);
    }

    #[test]
    fn deterministic_and_conjugate_closed() {
        let p = expand_ht(7, 96).unwrap().swap_remove(96);
        let a = find_roots(&p, 128, 1e-25).unwrap();
        let b = find_roots(&p, 128, 1e-25).unwrap();
        assert_eq!(a, b);
        for r in &a.roots {
            let c = r.conj();
            assert!(a.roots.iter().any(|s| s.distance(&c) < 1e-20));
        }
        assert!(vieta_relative_error(&p, &a) < 1e-10);
        assert!(reconstruction_relative_error(&p, &a, &pts(8)) < 1e-10);
    }

    #[test]
    fn csv_layout() {
        let p = WPolynomial::from_i64s(&[0, -1, 0, 1]);
        let rs = find_roots(&p, 64, 1e-15).unwrap();
        let mut buf = Vec::new();
        rs.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# degree=3 zero_multiplicity=1 precision=64");
        assert_eq!(lines[1], "re,im,residual");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("-1.0"));
    }
}
