//! The lattice theta function
//! `Θ_{ℓ,t}(z) = ∑ z^{‖m‖²/2 + b·m/t}` over `m ∈ Z^t` with `∑m_i = 0` and
//! `b·m ≡ ℓ (mod t)`, `b = (0, 1, …, t−1)`.
//!
//! Writing `r = z^{1/t}` (principal branch), every exponent is `N/t` with
//! `N = (t/2)‖m‖² + b·m ≡ ℓ (mod t)`, so `Θ = r^ℓ·Φ(z)` where
//! `Φ(z) = ∑_j L_{ℓ+tj} z^j` and `L_N` counts lattice vectors with that `N`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complex, Float, Integer};
use serde::{Deserialize, Serialize};

use super::euler::{euler_inf, EulerOptions};
use super::{PrecComplex, ERR_PREC};
use crate::error::{Error, Result};
use crate::partitions::partition_table;
use crate::qseries::{evaluate_wpoly, WPolynomial};

/// Residue class `ℓ` and dimension `t` of a theta function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaSpec {
    t: u32,
    ell: u32,
}

impl ThetaSpec {
    pub fn new(t: u32, ell: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::Argument("t must be positive".into()));
        }
        if ell >= t {
            return Err(Error::Argument(format!(
                "ell must lie in 0..{t}, got {ell}"
            )));
        }
        Ok(ThetaSpec { t, ell })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }
}

/// Evaluation route for [`theta`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaForm {
    Lattice,
    Partition,
    RootsOfUnity,
}

impl ThetaForm {
    pub fn name(self) -> &'static str {
        match self {
            ThetaForm::Lattice => "lattice",
            ThetaForm::Partition => "partition",
            ThetaForm::RootsOfUnity => "roots-of-unity",
        }
    }
}

/// Limits shared by the theta evaluators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaOptions {
    pub euler: EulerOptions,
    /// Largest lattice exponent `N` (or partition index `m`) summed.
    pub max_exponent: usize,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        ThetaOptions {
            euler: EulerOptions::default(),
            max_exponent: 20_000,
        }
    }
}

/// `r` with `‖m‖ ≤ r` for every admissible `m` with `N(m) ≤ n`.
///
/// With `∑m_i = 0`, `b·m = (b − b̄)·m ≥ −c‖m‖` for `c = (t−1)√t/2`, so
/// `N ≥ (t/2)‖m‖² − c‖m‖`.
pub fn box_radius(t: u32, n: f64) -> f64 {
    let t = t as f64;
    let c = (t - 1.0) * t.sqrt() / 2.0;
    (c + (c * c + 2.0 * t * n).sqrt()) / t
}

/// Sums `exp(log_term(x))` for `x > start`, assuming the terms are eventually
/// decreasing with decreasing ratios; the remainder is bounded geometrically.
fn log_tail_sum(start: usize, log_term: impl Fn(f64) -> f64) -> f64 {
    let mut x = start + 1;
    let mut sum = 0.0f64;
    let mut prev = log_term(x as f64);
    loop {
        sum += prev.exp();
        x += 1;
        let next = log_term(x as f64);
        let ratio = (next - prev).exp();
        if ratio < 1.0 && next.exp() <= sum * 1e-20 {
            // Ratios only shrink from here on.
            return sum + next.exp() / (1.0 - ratio);
        }
        if x > start + 10_000_000 || !next.is_finite() {
            return if next == f64::NEG_INFINITY {
                sum
            } else {
                f64::INFINITY
            };
        }
        prev = next;
    }
}

/// Bound on `∑_{N > nmax} L_N x^N` from the box count `(2r(N)+1)^{t−1}`.
pub fn lattice_tail_bound(t: u32, x: f64, nmax: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let lx = x.ln();
    log_tail_sum(nmax, |n| {
        (t as f64 - 1.0) * (2.0 * box_radius(t, n).floor() + 1.0).ln() + n * lx
    })
}

/// Bound on `∑_{m > mmax} p(m) x^m` from `p(m) < e^{π√(2m/3)}`.
pub fn partition_tail_bound(x: f64, mmax: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let lx = x.ln();
    let c = std::f64::consts::PI * (2.0f64 / 3.0).sqrt();
    log_tail_sum(mmax, |m| c * m.sqrt() + m * lx)
}

/// Smallest cutoff in `0..=cap` whose tail bound is below `tol`.
fn cutoff(cap: usize, tol: f64, tail: impl Fn(usize) -> f64) -> Option<usize> {
    if tail(0) < tol {
        return Some(0);
    }
    let mut hi = 1usize;
    while tail(hi) >= tol {
        if hi >= cap {
            return None;
        }
        hi = (hi * 2).min(cap);
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if tail(mid) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// `L_N` for `N = 0..=nmax`: lattice vectors in `Z^t` with `∑m_i = 0` and
/// `(t/2)‖m‖² + b·m = N`, by dynamic programming over coordinates.
fn lattice_counts_dp(t: u32, nmax: usize) -> Vec<u128> {
    let mut counts = vec![0u128; nmax + 1];
    if t == 1 {
        counts[0] = 1;
        return counts;
    }
    let ti = t as i64;
    let r = box_radius(t, nmax as f64).floor() as i64;
    // E = 2N; coordinate i contributes t·m² + 2i·m ≥ −i²/t.
    let e_max = 2 * nmax as i64;
    let neg: i64 = (0..ti).map(|i| (i * i + ti - 1) / ti).sum();
    let (e_lo, e_hi) = (-neg, e_max + neg);
    let width_e = (e_hi - e_lo + 1) as usize;
    let s_off = (ti - 1) * r;
    let width_s = (2 * s_off + 1) as usize;
    let mut cur = vec![0u128; width_s * width_e];
    cur[s_off as usize * width_e + (-e_lo) as usize] = 1;
    for i in 0..ti - 1 {
        let mut next = vec![0u128; width_s * width_e];
        for (idx, &c) in cur.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = (idx / width_e) as i64 - s_off;
            let e = (idx % width_e) as i64 + e_lo;
            for m in -r..=r {
                let s2 = s + m;
                let e2 = e + ti * m * m + 2 * i * m;
                if s2.abs() > s_off || e2 > e_hi || e2 < e_lo {
                    continue;
                }
                next[(s2 + s_off) as usize * width_e + (e2 - e_lo) as usize] += c;
            }
        }
        cur = next;
    }
    // The last coordinate is fixed by the zero-sum condition.
    let last = ti - 1;
    for (idx, &c) in cur.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let s = (idx / width_e) as i64 - s_off;
        let e = (idx % width_e) as i64 + e_lo;
        let m = -s;
        if m.abs() > r {
            continue;
        }
        let e2 = e + ti * m * m + 2 * last * m;
        if (0..=e_max).contains(&e2) {
            debug_assert_eq!(e2 % 2, 0);
            counts[(e2 / 2) as usize] += c;
        }
    }
    counts
}

type CountCache = Mutex<HashMap<u32, Arc<Vec<u128>>>>;
static LATTICE_CACHE: OnceLock<CountCache> = OnceLock::new();

/// Cached [`lattice_counts_dp`]; grows the table in powers of two.
pub fn lattice_counts(t: u32, nmax: usize) -> Arc<Vec<u128>> {
    let cache = LATTICE_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("lattice cache poisoned").get(&t) {
        if v.len() > nmax {
            return v.clone();
        }
    }
    let size = (nmax + 1).next_power_of_two().max(64) - 1;
    let table = Arc::new(lattice_counts_dp(t, size));
    cache
        .lock()
        .expect("lattice cache poisoned")
        .insert(t, table.clone());
    table
}

/// Counts `L_N` for `N ≤ nmax` by listing every vector of the box
/// `‖m‖∞ ≤ box_radius(t, nmax)`. Exponential in `t`; a reference for tests.
pub fn lattice_counts_explicit(t: u32, nmax: usize) -> Vec<u128> {
    let r = box_radius(t, nmax as f64).floor() as i64;
    let mut counts = vec![0u128; nmax + 1];
    let mut m = vec![-r; t as usize - 1];
    loop {
        let last = -m.iter().sum::<i64>();
        let mut n2 = last * last * t as i64 + 2 * (t as i64 - 1) * last;
        for (i, &mi) in m.iter().enumerate() {
            n2 += t as i64 * mi * mi + 2 * i as i64 * mi;
        }
        if n2 >= 0 && n2 <= 2 * nmax as i64 {
            counts[(n2 / 2) as usize] += 1;
        }
        // Odometer step.
        let mut i = 0;
        loop {
            if i == m.len() {
                return counts;
            }
            if m[i] < r {
                m[i] += 1;
                break;
            }
            m[i] = -r;
            i += 1;
        }
    }
}

/// Principal `z^{1/t}` with a first-order error bound.
pub fn principal_root(z: &PrecComplex, t: u32) -> PrecComplex {
    let prec = z.prec();
    if t == 1 {
        return z.clone();
    }
    let abs = z.abs_f64();
    if abs == 0.0 && *z.err() == 0 {
        return PrecComplex::zero(prec);
    }
    let log = Complex::with_val(prec, z.value().ln_ref());
    let v = Complex::with_val(prec, log / t).exp();
    let err_z = z.err_f64();
    let e = if err_z >= abs {
        (abs + err_z).powf(1.0 / t as f64)
    } else {
        err_z * (abs + err_z).powf(1.0 / t as f64) / (t as f64 * (abs - err_z))
    };
    let round = Float::with_val(ERR_PREC, v.abs_ref())
        * Float::with_val(ERR_PREC, Float::u_exp(1, 4 - prec as i32));
    PrecComplex::new(v, round + e)
}

fn check_disc(z: &PrecComplex) -> Result<()> {
    if z.abs_upper() >= 1.0 {
        return Err(Error::Domain(format!(
            "theta needs |z| < 1, got |z| up to {}",
            z.abs_upper()
        )));
    }
    Ok(())
}

/// `r^ℓ · poly(z) + tail`, the shared final step of the series forms.
fn combine(spec: ThetaSpec, z: &PrecComplex, poly: &WPolynomial, tail: f64) -> PrecComplex {
    let r = principal_root(z, spec.t);
    let head = evaluate_wpoly(poly, z).with_added_err(&Float::with_val(ERR_PREC, tail));
    &r.powu(spec.ell) * &head
}

/// Θ from the lattice-point counts.
pub fn theta_lattice(spec: ThetaSpec, z: &PrecComplex, tol: f64) -> Result<PrecComplex> {
    theta_lattice_with(spec, z, tol, &ThetaOptions::default())
}

pub fn theta_lattice_with(
    spec: ThetaSpec,
    z: &PrecComplex,
    tol: f64,
    opts: &ThetaOptions,
) -> Result<PrecComplex> {
    check_disc(z)?;
    let x = z.abs_upper().powf(1.0 / spec.t as f64);
    let nmax =
        cutoff(opts.max_exponent, tol, |n| lattice_tail_bound(spec.t, x, n)).ok_or_else(|| {
            Error::Truncation(format!(
                "lattice sum at |z| = {} needs exponents beyond {}",
                z.abs_upper(),
                opts.max_exponent
            ))
        })?;
    let counts = lattice_counts(spec.t, nmax);
    let (t, ell) = (spec.t as usize, spec.ell as usize);
    let coeffs: Vec<Integer> = (ell..=nmax.max(ell))
        .step_by(t)
        .map(|n| Integer::from(counts[n]))
        .collect();
    // Rescaled so that the r^ℓ factor applied afterwards restores it.
    let tail = lattice_tail_bound(spec.t, x, nmax) / x.powi(spec.ell as i32).max(f64::MIN_POSITIVE);
    Ok(combine(
        spec,
        z,
        &WPolynomial::from_coeffs(coeffs),
        tail.min(f64::MAX),
    ))
}

/// Θ from `(z)_∞^t ∑_{m ≡ ℓ} p(m) z^{m/t}`.
pub fn theta_partition_form(spec: ThetaSpec, z: &PrecComplex, tol: f64) -> Result<PrecComplex> {
    theta_partition_form_with(spec, z, tol, &ThetaOptions::default())
}

pub fn theta_partition_form_with(
    spec: ThetaSpec,
    z: &PrecComplex,
    tol: f64,
    opts: &ThetaOptions,
) -> Result<PrecComplex> {
    check_disc(z)?;
    tighten(tol, |inner| partition_form_once(spec, z, inner, opts))
}

/// Reruns `eval` with smaller inner tolerances until its bound meets `tol`
/// or stops improving; factors in the product forms amplify truncation
/// errors by magnitudes only known after a first pass.
fn tighten(tol: f64, mut eval: impl FnMut(f64) -> Result<PrecComplex>) -> Result<PrecComplex> {
    let mut inner = tol;
    let mut best = eval(inner)?;
    for _ in 0..6 {
        let err = best.err_f64();
        if err <= tol {
            break;
        }
        inner = (inner * tol / err / 4.0).max(f64::MIN_POSITIVE);
        let next = eval(inner)?;
        if next.err_f64() >= err * 0.5 {
            return Ok(if next.err_f64() < err { next } else { best });
        }
        best = next;
    }
    Ok(best)
}

fn partition_form_once(
    spec: ThetaSpec,
    z: &PrecComplex,
    tol: f64,
    opts: &ThetaOptions,
) -> Result<PrecComplex> {
    let x = z.abs_upper().powf(1.0 / spec.t as f64);
    let e = euler_inf(z, tol, &opts.euler)?.powu(spec.t);
    let scale = e.abs_upper().max(1e-300);
    let mmax = cutoff(opts.max_exponent, tol / scale, |m| {
        partition_tail_bound(x, m)
    })
    .ok_or_else(|| {
        Error::Truncation(format!(
            "partition sum at |z| = {} needs indices beyond {}",
            z.abs_upper(),
            opts.max_exponent
        ))
    })?;
    let p = partition_table(mmax.max(spec.ell as usize));
    let coeffs: Vec<Integer> = p[spec.ell as usize..]
        .iter()
        .step_by(spec.t as usize)
        .cloned()
        .collect();
    let tail = partition_tail_bound(x, mmax) / x.powi(spec.ell as i32).max(f64::MIN_POSITIVE);
    let sum = combine(
        spec,
        z,
        &WPolynomial::from_coeffs(coeffs),
        tail.min(f64::MAX),
    );
    Ok(&e * &sum)
}

/// Θ from `(1/t) ∑_j e^{−2πijℓ/t} (z)_∞^t / (z^{1/t} e^{2πij/t})_∞`.
pub fn theta_roots_of_unity_form(
    spec: ThetaSpec,
    z: &PrecComplex,
    tol: f64,
) -> Result<PrecComplex> {
    theta_roots_of_unity_form_with(spec, z, tol, &ThetaOptions::default())
}

pub fn theta_roots_of_unity_form_with(
    spec: ThetaSpec,
    z: &PrecComplex,
    tol: f64,
    opts: &ThetaOptions,
) -> Result<PrecComplex> {
    check_disc(z)?;
    tighten(tol, |inner| roots_of_unity_once(spec, z, inner, opts))
}

fn roots_of_unity_once(
    spec: ThetaSpec,
    z: &PrecComplex,
    tol: f64,
    opts: &ThetaOptions,
) -> Result<PrecComplex> {
    let prec = z.prec();
    let et = euler_inf(z, tol, &opts.euler)?.powu(spec.t);
    let r = principal_root(z, spec.t);
    let t = spec.t;
    let terms = crate::par::try_map_range(t as usize, |j| {
        let j = j as u32;
        let zeta = unit_root(j, t, prec);
        let denom = euler_inf(&(&r * &zeta), tol, &opts.euler)?;
        let phase = unit_root((t - (j * spec.ell) % t) % t, t, prec);
        Ok::<_, Error>(&phase / &denom)
    })?;
    let mut sum = PrecComplex::zero(prec);
    for term in &terms {
        sum = &sum + term;
    }
    let inv_t = Float::with_val(prec, 1) / t;
    Ok(&et * &sum.mul_real(&inv_t))
}

/// `e^{2πij/t}`.
pub fn unit_root(j: u32, t: u32, prec: u32) -> PrecComplex {
    let pi = Float::with_val(prec + 16, rug::float::Constant::Pi);
    let angle = pi * Float::with_val(prec + 16, 2 * j) / t;
    let v = Complex::with_val(prec, (angle.clone().cos(), angle.sin()));
    PrecComplex::exact(v).to_prec(prec)
}

pub fn theta(spec: ThetaSpec, z: &PrecComplex, tol: f64, form: ThetaForm) -> Result<PrecComplex> {
    match form {
        ThetaForm::Lattice => theta_lattice(spec, z, tol),
        ThetaForm::Partition => theta_partition_form(spec, z, tol),
        ThetaForm::RootsOfUnity => theta_roots_of_unity_form(spec, z, tol),
    }
}

/// Taylor coefficients of `Φ(z) = Θ_{ℓ,t}(z) / z^{ℓ/t}` up to `z^jmax`,
/// expanded exactly from `(z)_∞^t ∑_j p(ℓ + tj) z^j`.
pub fn reduced_theta_coeffs(spec: ThetaSpec, jmax: usize) -> Vec<Integer> {
    let t = spec.t as usize;
    let p = partition_table(spec.ell as usize + t * jmax);
    let mut c: Vec<Integer> = (0..=jmax)
        .map(|j| p[spec.ell as usize + t * j].clone())
        .collect();
    for n in 1..=jmax {
        for _ in 0..t {
            for i in (n..=jmax).rev() {
                let (lo, hi) = c.split_at_mut(i);
                hi[0] -= &lo[i - n];
            }
        }
    }
    c
}

/// `Φ(z) = Θ_{ℓ,t}(z)/z^{ℓ/t}`, analytic in the unit disc, held as an exact
/// Taylor polynomial plus a rigorous bound for the omitted tail.
#[derive(Clone, Debug)]
pub struct ReducedTheta {
    spec: ThetaSpec,
    poly: WPolynomial,
    deriv: WPolynomial,
    jmax: usize,
}

impl ReducedTheta {
    /// Keeps enough terms that the tail is below `tol` on `|z| ≤ radius`.
    pub fn new(spec: ThetaSpec, radius: f64, tol: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&radius) {
            return Err(Error::Domain(format!(
                "radius must lie in [0, 1), got {radius}"
            )));
        }
        let cap = 50_000;
        let jmax = cutoff(cap, tol, |j| Self::tail_for(spec, radius, j)).ok_or_else(|| {
            Error::Truncation(format!(
                "reduced theta at radius {radius} needs over {cap} terms"
            ))
        })?;
        let coeffs = reduced_theta_coeffs(spec, jmax.max(1));
        let deriv = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| Integer::from(c * k as u32))
            .collect();
        Ok(ReducedTheta {
            spec,
            poly: WPolynomial::from_coeffs(coeffs),
            deriv: WPolynomial::from_coeffs(deriv),
            jmax: jmax.max(1),
        })
    }

    /// `∑_{j>jmax} L_{ℓ+tj} ρ^j` bounded by lattice box counts.
    fn tail_for(spec: ThetaSpec, rho: f64, jmax: usize) -> f64 {
        if rho == 0.0 {
            return 0.0;
        }
        let (t, ell) = (spec.t as f64, spec.ell as f64);
        let lr = rho.ln();
        log_tail_sum(jmax, |j| {
            (t - 1.0) * (2.0 * box_radius(spec.t, ell + t * j).floor() + 1.0).ln() + j * lr
        })
    }

    pub fn spec(&self) -> ThetaSpec {
        self.spec
    }

    pub fn terms(&self) -> usize {
        self.jmax + 1
    }

    pub fn coeffs(&self) -> &WPolynomial {
        &self.poly
    }

    /// Tail bound at modulus `rho`.
    pub fn tail(&self, rho: f64) -> f64 {
        Self::tail_for(self.spec, rho, self.jmax)
    }

    pub fn eval(&self, z: &PrecComplex) -> PrecComplex {
        let tail = self.tail(z.abs_upper());
        evaluate_wpoly(&self.poly, z).with_added_err(&Float::with_val(ERR_PREC, tail))
    }

    /// `Φ'(z)` from the differentiated Taylor polynomial; the tail bound
    /// for the derivative is not included.
    pub fn eval_deriv(&self, z: &PrecComplex) -> PrecComplex {
        evaluate_wpoly(&self.deriv, z)
    }

    /// Fast `f64` value, for contour tracing.
    pub fn eval_f64(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in self.poly.to_dense().iter().rev() {
            acc = acc * z + c.to_f64();
        }
        acc
    }
}
