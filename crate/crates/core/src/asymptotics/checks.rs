use std::io::Write;

use rug::{Float, Rational};
use serde::Serialize;

use super::main_terms::{main_term_large_w_with, main_term_small_w, LargeWConstant};
use crate::error::{Error, Result};
use crate::numerics::{eval_at, PrecComplex, ThetaSpec, ERR_PREC};
use crate::qseries::{expand_ht, pab_coefficient, RationalPair, WPolynomial};
use crate::roots::{find_roots, theta_zeros, RootSet, ZeroRecord};

/// Which main term a comparison uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `|w| > 1`, theta main term along a residue class.
    Large,
    /// `|w| ≤ w₀`, singular-series main term, `t ≥ 6`.
    Small,
}

impl Regime {
    /// `Large` when `|w| > 1`, otherwise `Small`.
    pub fn for_w(w: &PrecComplex) -> Self {
        if w.abs_lower() > 1 {
            Regime::Large
        } else {
            Regime::Small
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportOptions {
    /// Tolerance for theta evaluations.
    pub theta_tol: f64,
    /// Absolute tolerance for the singular series.
    pub at_tol: f64,
    /// Upper limit on `|w|` in the small regime.
    pub w0: f64,
    pub constant: LargeWConstant,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            theta_tol: 1e-25,
            at_tol: 1e-3,
            w0: 0.05,
            constant: LargeWConstant::Derived,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RatioEntry {
    pub n: u64,
    pub exact: PrecComplex,
    pub main: PrecComplex,
    pub exact_modulus: Float,
    pub main_modulus: Float,
    /// `|exact| / |main|`.
    pub ratio: Float,
    /// Only meaningful in the large regime.
    pub near_theta_zero: bool,
}

#[derive(Clone, Debug)]
pub struct AsymptoticReport {
    pub t: u32,
    pub ell: u32,
    pub w: PrecComplex,
    pub regime: Regime,
    pub entries: Vec<RatioEntry>,
}

impl AsymptoticReport {
    /// `n,exact_modulus,main_modulus,ratio` in full-precision decimal.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["n", "exact_modulus", "main_modulus", "ratio"])
            .map_err(io)?;
        for e in &self.entries {
            w.write_record([
                e.n.to_string(),
                e.exact_modulus.to_string_radix(10, None),
                e.main_modulus.to_string_radix(10, None),
                e.ratio.to_string_radix(10, None),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    /// `|ratio − 1|` per entry.
    pub fn deviations(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|e| (e.ratio.to_f64() - 1.0).abs())
            .collect()
    }
}

pub fn ratio_report(
    t: u32,
    ell: u32,
    w: &PrecComplex,
    ns: &[u64],
    opts: &ReportOptions,
) -> Result<AsymptoticReport> {
    ratio_report_in(Regime::for_w(w), t, ell, w, ns, opts)
}

/// Exact `P_t(w,n)` against the main term of `regime` for each `n` in `ns`,
/// which must be strictly increasing.
pub fn ratio_report_in(
    regime: Regime,
    t: u32,
    ell: u32,
    w: &PrecComplex,
    ns: &[u64],
    opts: &ReportOptions,
) -> Result<AsymptoticReport> {
    if t == 0 {
        return Err(Error::Argument("t must be positive".into()));
    }
    if ns.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::Argument(
            "n values must be strictly increasing".into(),
        ));
    }
    match regime {
        Regime::Large => {
            ThetaSpec::new(t, ell)?;
            if w.abs_lower() <= 1 {
                return Err(Error::Domain(format!(
                    "large regime needs |w| > 1, got {}",
                    w.abs_f64()
                )));
            }
        }
        Regime::Small => {
            if t < 6 {
                return Err(Error::Domain(format!("small regime needs t ≥ 6, got {t}")));
            }
            if w.abs_upper() > opts.w0 {
                return Err(Error::Domain(format!(
                    "small regime needs |w| ≤ w0 = {}, got {}",
                    opts.w0,
                    w.abs_f64()
                )));
            }
        }
    }
    let report = |entries| AsymptoticReport {
        t,
        ell,
        w: w.clone(),
        regime,
        entries,
    };
    let Some(&nmax) = ns.last() else {
        return Ok(report(Vec::new()));
    };
    let polys = expand_ht(t, nmax as usize)?;
    let entries = crate::par::try_map_slice(ns, |&n| {
        let exact = polys[n as usize].evaluate(w);
        let (main, near) = match regime {
            Regime::Large => {
                let m = main_term_large_w_with(t, ell, n, w, opts.theta_tol, opts.constant)?;
                (m.value, m.near_theta_zero)
            }
            Regime::Small => (main_term_small_w(t, n, w, opts.at_tol)?, false),
        };
        let exact_modulus = exact.abs();
        let main_modulus = main.abs();
        let ratio = Float::with_val(w.prec(), &exact_modulus / &main_modulus);
        Ok::<_, Error>(RatioEntry {
            n,
            exact,
            main,
            exact_modulus,
            main_modulus,
            ratio,
            near_theta_zero: near,
        })
    })?;
    Ok(report(entries))
}

/// Smallest `|A_t(w,n)|` over a sample of `|w| ≤ w0` and the given `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct W0Check {
    pub w0: f64,
    pub min_modulus: f64,
    pub max_err: f64,
    /// `min_modulus > 10·max_err`.
    pub ok: bool,
}

/// Samples `w = 0` and `|w| ∈ {w0/2, w0}` at eight angles each.
pub fn validate_w0(t: u32, w0: f64, ns: &[u64], tol: f64, prec: u32) -> Result<W0Check> {
    if !(w0.is_finite() && w0 > 0.0 && w0 < 1.0) {
        return Err(Error::Argument(format!("w0 must lie in (0, 1), got {w0}")));
    }
    let mut ws = vec![PrecComplex::zero(prec)];
    for r in [w0 / 2.0, w0] {
        for j in 0..8 {
            let a = std::f64::consts::FRAC_PI_4 * j as f64;
            ws.push(PrecComplex::from_f64(r * a.cos(), r * a.sin(), prec));
        }
    }
    let mut min_modulus = f64::INFINITY;
    let mut max_err = 0.0f64;
    for &n in ns {
        for w in &ws {
            let a = eval_at(t, w, n, tol)?;
            min_modulus = min_modulus.min(a.abs_f64());
            max_err = max_err.max(a.err_f64());
        }
    }
    Ok(W0Check {
        w0,
        min_modulus,
        max_err,
        ok: min_modulus > 10.0 * max_err,
    })
}

/// Classification of the nonzero roots of `P_t(w,n)`.
#[derive(Clone, Debug)]
pub struct LocalizationVerdict {
    pub n: u64,
    pub t: u32,
    pub ell: u32,
    pub eps: f64,
    pub w0: f64,
    pub annulus_roots: Vec<PrecComplex>,
    pub theta_neighborhood_roots: Vec<PrecComplex>,
    pub violations: Vec<PrecComplex>,
    /// The exceptional set the neighbourhoods are taken around.
    pub exceptional: Vec<PrecComplex>,
    pub roots: RootSet,
    pub polynomial: WPolynomial,
}

#[derive(Serialize)]
struct VerdictJson {
    n: u64,
    t: u32,
    ell: u32,
    eps: f64,
    w0: f64,
    degree: u32,
    zero_multiplicity: u32,
    annulus_roots: Vec<ZeroRecord>,
    theta_neighborhood_roots: Vec<ZeroRecord>,
    violations: Vec<ZeroRecord>,
    exceptional_points: Vec<ZeroRecord>,
    located_fraction: f64,
}

impl LocalizationVerdict {
    pub fn classified(&self) -> usize {
        self.annulus_roots.len() + self.theta_neighborhood_roots.len()
    }

    /// Share of nonzero roots in the annulus or a theta neighbourhood.
    pub fn located_fraction(&self) -> f64 {
        let total = self.classified() + self.violations.len();
        if total == 0 {
            1.0
        } else {
            self.classified() as f64 / total as f64
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let recs = |v: &[PrecComplex]| v.iter().map(ZeroRecord::from_prec).collect();
        let j = VerdictJson {
            n: self.n,
            t: self.t,
            ell: self.ell,
            eps: self.eps,
            w0: self.w0,
            degree: self.roots.degree,
            zero_multiplicity: self.roots.zero_multiplicity,
            annulus_roots: recs(&self.annulus_roots),
            theta_neighborhood_roots: recs(&self.theta_neighborhood_roots),
            violations: recs(&self.violations),
            exceptional_points: recs(&self.exceptional),
            located_fraction: self.located_fraction(),
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }
}

/// Solves `P_t(w,n)` and sorts each nonzero root into the annulus
/// `w0 ≤ |w| ≤ 1+eps`, an `eps`-neighbourhood of an exceptional point, or
/// the violation list, in that order of preference.
pub fn zero_localization_check(
    t: u32,
    ell: u32,
    n: u64,
    eps: f64,
    w0: f64,
    prec: u32,
    tol: f64,
) -> Result<LocalizationVerdict> {
    if t < 6 {
        return Err(Error::Domain(format!("localization needs t ≥ 6, got {t}")));
    }
    let spec = ThetaSpec::new(t, ell)?;
    if n % t as u64 != ell as u64 {
        return Err(Error::Domain(format!("n = {n} is not ≡ {ell} (mod {t})")));
    }
    if !(eps.is_finite() && eps > 0.0 && w0.is_finite() && w0 > 0.0) {
        return Err(Error::Argument("eps and w0 must be positive".into()));
    }
    let polynomial = expand_ht(t, n as usize)?.swap_remove(n as usize);
    let roots = find_roots(&polynomial, prec, tol)?;
    let exceptional = theta_zeros(spec, eps, prec)?.exceptional;
    let mut v = LocalizationVerdict {
        n,
        t,
        ell,
        eps,
        w0,
        annulus_roots: Vec::new(),
        theta_neighborhood_roots: Vec::new(),
        violations: Vec::new(),
        exceptional,
        roots,
        polynomial,
    };
    for r in &v.roots.roots {
        let m = r.abs_f64();
        if m >= w0 && m <= 1.0 + eps {
            v.annulus_roots.push(r.clone());
        } else if v.exceptional.iter().any(|z| r.distance(z) <= eps) {
            v.theta_neighborhood_roots.push(r.clone());
        } else {
            v.violations.push(r.clone());
        }
    }
    Ok(v)
}

/// Outcome of the sign check on real parts of `p_{1,b}(w;n)`.
#[derive(Clone, Debug)]
pub struct RrVerdict {
    pub b: u32,
    pub n: u64,
    pub pass: bool,
    /// Largest real part among all roots, zero roots included.
    pub max_re: f64,
    /// The root attaining `max_re`.
    pub worst: Option<PrecComplex>,
    /// Largest real part among the nonzero roots.
    pub max_re_nonzero: Option<f64>,
    pub max_abs_im: f64,
    pub polynomial: WPolynomial,
    /// `None` when the polynomial is constant.
    pub roots: Option<RootSet>,
}

#[derive(Serialize)]
struct RrJson {
    b: u32,
    n: u64,
    pass: bool,
    max_re: String,
    max_re_nonzero: Option<String>,
    worst: Option<ZeroRecord>,
    max_abs_im: String,
    degree: u32,
}

impl RrVerdict {
    pub fn to_json(&self) -> Result<String> {
        let j = RrJson {
            b: self.b,
            n: self.n,
            pass: self.pass,
            max_re: format!("{:e}", self.max_re),
            max_re_nonzero: self.max_re_nonzero.map(|x| format!("{x:e}")),
            worst: self.worst.as_ref().map(ZeroRecord::from_prec),
            max_abs_im: format!("{:e}", self.max_abs_im),
            degree: self.polynomial.degree().unwrap_or(0),
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }
}

/// True iff every root of `p_{1,b}(w;n)` has real part at most `max_re_tol`.
pub fn rr_claim_check(
    b: u32,
    n: u64,
    max_re_tol: f64,
    prec: u32,
    solver_tol: f64,
) -> Result<RrVerdict> {
    if b > 1 {
        return Err(Error::Argument(format!("b must be 0 or 1, got {b}")));
    }
    let ab = RationalPair::new(Rational::from(1), Rational::from(b))?;
    let polynomial = pab_coefficient(&ab, &Rational::from(n))?;
    let mut v = RrVerdict {
        b,
        n,
        pass: true,
        max_re: f64::NEG_INFINITY,
        worst: None,
        max_re_nonzero: None,
        max_abs_im: 0.0,
        polynomial,
        roots: None,
    };
    if v.polynomial.degree().unwrap_or(0) == 0 {
        return Ok(v);
    }
    let roots = find_roots(&v.polynomial, prec, solver_tol)?;
    if roots.zero_multiplicity > 0 {
        v.max_re = 0.0;
        v.worst = Some(PrecComplex::zero(prec));
    }
    for r in &roots.roots {
        // Upper end of the real-part interval.
        let hi = (Float::with_val(ERR_PREC, r.value().real()) + r.err()).to_f64();
        v.max_re_nonzero = Some(v.max_re_nonzero.map_or(hi, |m| m.max(hi)));
        if hi > v.max_re {
            v.max_re = hi;
            v.worst = Some(r.clone());
        }
        v.max_abs_im = v.max_abs_im.max(r.im_f64().abs());
    }
    v.pass = v.max_re <= max_re_tol;
    v.roots = Some(roots);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partition_numbers;

    #[test]
    fn t1_is_partition_times_power() {
        let p = partition_numbers(300);
        let polys = expand_ht(1, 300).unwrap();
        for n in 0..=300usize {
            assert_eq!(
                polys[n],
                WPolynomial::monomial(p[n].clone(), n as u32),
                "n={n}"
            );
        }
    }

    #[test]
    fn t1_ratio_approaches_one() {
        let w = PrecComplex::from_f64(2.0, 0.0, 128);
        let r = ratio_report(1, 0, &w, &[50, 500, 2000], &ReportOptions::default()).unwrap();
        assert_eq!(r.regime, Regime::Large);
        let d = r.deviations();
        assert!(d[2] < d[0] && d[2] < 0.05, "{d:?}");
    }

    #[test]
    fn empty_report() {
        let w = PrecComplex::from_f64(3.0, 0.0, 128);
        let r = ratio_report(7, 5, &w, &[], &ReportOptions::default()).unwrap();
        assert!(r.entries.is_empty());
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,exact_modulus,main_modulus,ratio\n"
        );
    }

    #[test]
    fn report_preconditions() {
        let w = PrecComplex::from_f64(3.0, 0.0, 128);
        let o = ReportOptions::default();
        assert!(matches!(
            ratio_report(7, 5, &w, &[432, 425], &o),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            ratio_report(7, 5, &w, &[426], &o),
            Err(Error::Domain(_))
        ));
        let small = PrecComplex::from_f64(0.2, 0.0, 128);
        assert!(matches!(
            ratio_report(7, 0, &small, &[100], &o),
            Err(Error::Domain(_))
        ));
        let zero = PrecComplex::zero(128);
        assert!(matches!(
            ratio_report(5, 0, &zero, &[100], &o),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tcore_ratio_small_n() {
        let zero = PrecComplex::zero(128);
        let r = ratio_report(7, 0, &zero, &[100, 300], &ReportOptions::default()).unwrap();
        let d = r.deviations();
        assert!(d[1] < d[0] && d[0] < 0.1, "{d:?}");
    }

    #[test]
    fn w0_default_is_safe_for_t7() {
        let c = validate_w0(7, 0.05, &[100, 425], 0.05, 128).unwrap();
        assert!(c.ok, "{c:?}");
    }

    #[test]
    fn rr_small_cases() {
        let v = rr_claim_check(1, 4, 1e-8, 128, 1e-25).unwrap();
        assert_eq!(v.polynomial, WPolynomial::monomial(1.into(), 1));
        assert!(v.pass);
        assert_eq!(v.max_re, 0.0);
        let v = rr_claim_check(1, 1, 1e-8, 128, 1e-25).unwrap();
        assert!(v.pass && v.roots.is_none());
        for n in [10u64, 57, 120] {
            let v = rr_claim_check(0, n, 1e-8, 128, 1e-25).unwrap();
            assert!(v.pass, "n={n} max_re={}", v.max_re);
        }
        assert!(rr_claim_check(2, 4, 1e-8, 128, 1e-25).is_err());
    }

    #[test]
    fn localization_partitions_nonzero_roots() {
        let v = zero_localization_check(7, 5, 110, 0.5, 0.01, 128, 1e-25).unwrap();
        let total = v.classified() + v.violations.len();
        assert_eq!(total as u32, v.roots.degree - v.roots.zero_multiplicity);
        let wider = zero_localization_check(7, 5, 110, 0.9, 0.01, 128, 1e-25).unwrap();
        assert!(wider.violations.len() <= v.violations.len());
        assert!(v.to_json().unwrap().contains("\"violations\""));
    }
}
