//! Zeros of `Θ_{ℓ,t}` inside a disc `|z| ≤ ρ < 1`, found through the reduced
//! function `Φ = Θ / z^{ℓ/t}`, which is analytic there with `Φ(0) = p(ℓ) ≠ 0`.

use std::f64::consts::{PI, TAU};

use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{PrecComplex, ReducedTheta, ThetaSpec, ERR_PREC};

/// Sampling and refinement controls for [`theta_zeros_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroSearchOptions {
    /// Initial samples on each contour piece before adaptive refinement.
    pub min_samples: usize,
    /// Largest image-argument step accepted between neighbouring samples.
    pub max_arg_step: f64,
    /// Sector size below which a single zero is handed to Newton.
    pub newton_size: f64,
    pub newton_iters: usize,
    /// Truncation tolerance for the Taylor polynomial of `Φ`.
    pub series_tol: f64,
}

impl Default for ZeroSearchOptions {
    fn default() -> Self {
        ZeroSearchOptions {
            min_samples: 16,
            max_arg_step: PI / 4.0,
            newton_size: 0.05,
            newton_iters: 100,
            series_tol: 1e-30,
        }
    }
}

/// A located zero with its error bound, as JSON-ready strings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroRecord {
    pub re: String,
    pub im: String,
    pub err: String,
}

impl ZeroRecord {
    pub fn from_prec(z: &PrecComplex) -> Self {
        let (re, im) = z.to_decimal_strings();
        ZeroRecord {
            re,
            im,
            err: z.err_string(),
        }
    }
}

/// Outcome of a zero search in the disc `|z − center| ≤ radius`.
#[derive(Clone, Debug)]
pub struct DiscZeroReport {
    pub spec: ThetaSpec,
    pub eps: f64,
    pub center: (f64, f64),
    pub radius: f64,
    /// Winding-number count on the boundary circle.
    pub count: usize,
    /// Zeros of Θ in the disc.
    pub zeros: Vec<PrecComplex>,
    /// Their reciprocals, the exceptional set in the `w`-plane.
    pub exceptional: Vec<PrecComplex>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    t: u32,
    ell: u32,
    eps: f64,
    center: [f64; 2],
    radius: f64,
    count: usize,
    zeros: Vec<ZeroRecord>,
    exceptional_points: Vec<ZeroRecord>,
    #[serde(skip)]
    _p: std::marker::PhantomData<&'a ()>,
}

impl DiscZeroReport {
    pub fn to_json(&self) -> Result<String> {
        let j = ReportJson {
            t: self.spec.t(),
            ell: self.spec.ell(),
            eps: self.eps,
            center: [self.center.0, self.center.1],
            radius: self.radius,
            count: self.count,
            zeros: self.zeros.iter().map(ZeroRecord::from_prec).collect(),
            exceptional_points: self.exceptional.iter().map(ZeroRecord::from_prec).collect(),
            _p: std::marker::PhantomData,
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }
}

/// A closed contour piece in polar coordinates, `s ∈ [0, 1]`.
#[derive(Clone, Copy, Debug)]
enum Piece {
    /// Radius fixed, angle from `a0` to `a1`.
    Arc { r: f64, a0: f64, a1: f64 },
    /// Angle fixed, radius from `r0` to `r1`.
    Ray { a: f64, r0: f64, r1: f64 },
}

impl Piece {
    fn at(&self, s: f64) -> (f64, f64) {
        let (r, a) = match *self {
            Piece::Arc { r, a0, a1 } => (r, a0 + (a1 - a0) * s),
            Piece::Ray { a, r0, r1 } => (r0 + (r1 - r0) * s, a),
        };
        (r * a.cos(), r * a.sin())
    }
}

/// Evaluates `Φ` on demand, refusing points where it cannot be told apart
/// from zero.
struct Evaluator<'a> {
    phi: &'a ReducedTheta,
    prec: u32,
}

impl Evaluator<'_> {
    fn value(&self, re: f64, im: f64) -> Result<Complex> {
        let z = PrecComplex::from_f64(re, im, self.prec);
        let v = self.phi.eval(&z);
        if v.abs_lower() <= 0 {
            return Err(Error::WindingAmbiguity(format!(
                "|Φ| ≤ its error bound {:e} at {re} + {im}i",
                v.err_f64()
            )));
        }
        Ok(v.into_value())
    }
}

fn arg_step(a: &Complex, b: &Complex) -> f64 {
    let q = Complex::with_val(64, b / a);
    Float::with_val(ERR_PREC, q.arg_ref()).to_f64()
}

/// Total argument change of `Φ` along a piece, sampled adaptively so that no
/// accepted step exceeds `max_arg_step`.
fn piece_winding(ev: &Evaluator, piece: Piece, opts: &ZeroSearchOptions) -> Result<f64> {
    let n = opts.min_samples.max(2);
    let mut total = 0.0;
    let (x, y) = piece.at(0.0);
    let mut prev = ev.value(x, y)?;
    let mut s_prev = 0.0;
    for i in 1..=n {
        let s = i as f64 / n as f64;
        let (x, y) = piece.at(s);
        let cur = ev.value(x, y)?;
        total += refine(ev, piece, s_prev, s, &prev, &cur, opts, 0)?;
        prev = cur;
        s_prev = s;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    ev: &Evaluator,
    piece: Piece,
    s0: f64,
    s1: f64,
    f0: &Complex,
    f1: &Complex,
    opts: &ZeroSearchOptions,
    depth: u32,
) -> Result<f64> {
    let d = arg_step(f0, f1);
    if d.abs() < opts.max_arg_step {
        return Ok(d);
    }
    if depth > 40 {
        return Err(Error::WindingAmbiguity(format!(
            "contour sampling failed to resolve near s = {s0}"
        )));
    }
    let sm = 0.5 * (s0 + s1);
    let (x, y) = piece.at(sm);
    let fm = ev.value(x, y)?;
    Ok(refine(ev, piece, s0, sm, f0, &fm, opts, depth + 1)?
        + refine(ev, piece, sm, s1, &fm, f1, opts, depth + 1)?)
}

fn winding_number(ev: &Evaluator, pieces: &[Piece], opts: &ZeroSearchOptions) -> Result<usize> {
    let mut total = 0.0;
    for &p in pieces {
        total += piece_winding(ev, p, opts)?;
    }
    let w = total / TAU;
    let rounded = w.round();
    if (w - rounded).abs() > 0.1 || rounded < 0.0 {
        return Err(Error::WindingAmbiguity(format!("non-integral winding {w}")));
    }
    Ok(rounded as usize)
}

/// Polar sector `r ∈ [r0, r1]`, `θ ∈ [a0, a1]`.
#[derive(Clone, Copy, Debug)]
struct Sector {
    r0: f64,
    r1: f64,
    a0: f64,
    a1: f64,
}

impl Sector {
    /// Positively oriented boundary.
    fn boundary(&self) -> Vec<Piece> {
        let mut v = vec![
            Piece::Ray {
                a: self.a0,
                r0: self.r0,
                r1: self.r1,
            },
            Piece::Arc {
                r: self.r1,
                a0: self.a0,
                a1: self.a1,
            },
            Piece::Ray {
                a: self.a1,
                r0: self.r1,
                r1: self.r0,
            },
        ];
        if self.r0 > 0.0 {
            v.push(Piece::Arc {
                r: self.r0,
                a0: self.a1,
                a1: self.a0,
            });
        }
        v
    }

    fn size(&self) -> f64 {
        (self.r1 - self.r0).max(self.r1 * (self.a1 - self.a0))
    }

    fn center(&self) -> (f64, f64) {
        let r = 0.5 * (self.r0 + self.r1);
        let a = 0.5 * (self.a0 + self.a1);
        (r * a.cos(), r * a.sin())
    }

    /// Splits the longer side at fraction `f`.
    fn split(&self, f: f64) -> [Sector; 2] {
        if self.r1 - self.r0 >= self.r1 * (self.a1 - self.a0) {
            let m = self.r0 + f * (self.r1 - self.r0);
            [Sector { r1: m, ..*self }, Sector { r0: m, ..*self }]
        } else {
            let m = self.a0 + f * (self.a1 - self.a0);
            [Sector { a1: m, ..*self }, Sector { a0: m, ..*self }]
        }
    }
}

/// Counts zeros in a sector, nudging the contour when it passes too close
/// to a zero.
fn count_in(ev: &Evaluator, s: &Sector, opts: &ZeroSearchOptions) -> Result<usize> {
    winding_number(ev, &s.boundary(), opts)
}

fn split_counted(
    ev: &Evaluator,
    s: &Sector,
    opts: &ZeroSearchOptions,
) -> Result<[(Sector, usize); 2]> {
    let mut last = None;
    for f in [0.5, 0.47, 0.53, 0.41, 0.59] {
        let [a, b] = s.split(f);
        match (count_in(ev, &a, opts), count_in(ev, &b, opts)) {
            (Ok(ca), Ok(cb)) => return Ok([(a, ca), (b, cb)]),
            (Err(e), _) | (_, Err(e)) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

fn newton(
    phi: &ReducedTheta,
    start: (f64, f64),
    prec: u32,
    opts: &ZeroSearchOptions,
) -> Result<PrecComplex> {
    let mut z = PrecComplex::from_f64(start.0, start.1, prec);
    let target = Float::with_val(ERR_PREC, Float::u_exp(1, 20 - prec as i32));
    for _ in 0..opts.newton_iters {
        let f = phi.eval(&z);
        let d = phi.eval_deriv(&z);
        let step = Complex::with_val(prec, f.value() / d.value());
        let size = Float::with_val(ERR_PREC, step.abs_ref());
        z = PrecComplex::exact(Complex::with_val(prec, z.value() - &step));
        if size
            <= Float::with_val(
                ERR_PREC,
                &target
                    * Float::with_val(ERR_PREC, z.value().abs_ref())
                        .max(&Float::with_val(ERR_PREC, 1e-300)),
            )
        {
            let f = phi.eval(&z);
            let d = phi.eval_deriv(&z);
            // Newton-step radius, doubled, covering both the residual and
            // the series tail.
            let bound = (Float::with_val(ERR_PREC, f.value().abs_ref()) + f.err()) * 2u32
                / Float::with_val(ERR_PREC, d.value().abs_ref());
            return Ok(PrecComplex::new(z.into_value(), bound));
        }
    }
    Err(Error::Refinement(format!(
        "Newton did not settle from {} + {}i in {} steps",
        start.0, start.1, opts.newton_iters
    )))
}

pub fn theta_zeros(spec: ThetaSpec, eps: f64, prec: u32) -> Result<DiscZeroReport> {
    theta_zeros_with(spec, eps, prec, &ZeroSearchOptions::default())
}

/// Zeros of `z ↦ Θ_{ℓ,t}(z)` in `|z| ≤ 1/(1+eps)` and their reciprocals.
pub fn theta_zeros_with(
    spec: ThetaSpec,
    eps: f64,
    prec: u32,
    opts: &ZeroSearchOptions,
) -> Result<DiscZeroReport> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Argument(format!("eps must be positive, got {eps}")));
    }
    let mut rho = 1.0 / (1.0 + eps);
    let phi = ReducedTheta::new(spec, rho, opts.series_tol)?;
    let ev = Evaluator { phi: &phi, prec };

    // Whole-disc count; shrink the circle slightly if it grazes a zero.
    let mut count = None;
    for k in 0..6 {
        let r = rho * (1.0 - 1e-4 * k as f64);
        let disc = Sector {
            r0: 0.0,
            r1: r,
            a0: -PI,
            a1: PI,
        };
        let circle = [Piece::Arc {
            r: disc.r1,
            a0: disc.a0,
            a1: disc.a1,
        }];
        match winding_number(&ev, &circle, opts) {
            Ok(c) => {
                count = Some(c);
                rho = r;
                break;
            }
            Err(Error::WindingAmbiguity(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let count = count
        .ok_or_else(|| Error::WindingAmbiguity(format!("no clean contour near radius {rho}")))?;

    let mut found: Vec<PrecComplex> = Vec::new();
    if count > 0 {
        let quarter = PI / 2.0;
        // Offset the quadrant rays so that they avoid the real and imaginary
        // axes, where zeros of real-coefficient series like to sit.
        let off = 0.0123;
        let mut stack: Vec<(Sector, usize)> = Vec::new();
        for q in 0..4 {
            let a0 = -PI + off + q as f64 * quarter;
            let s = Sector {
                r0: 0.0,
                r1: rho,
                a0,
                a1: a0 + quarter,
            };
            let c = count_in(&ev, &s, opts)?;
            if c > 0 {
                stack.push((s, c));
            }
        }
        let mut guard = 0;
        while let Some((s, c)) = stack.pop() {
            guard += 1;
            if guard > 10_000 {
                return Err(Error::Refinement(
                    "sector subdivision did not terminate".into(),
                ));
            }
            if c == 1 && s.size() < opts.newton_size {
                let z = newton(&phi, s.center(), prec, opts)?;
                if z.abs_f64() > rho * (1.0 + 1e-9) {
                    return Err(Error::Refinement(format!(
                        "Newton left the disc from sector {s:?}"
                    )));
                }
                if !found.iter().any(|f| f.distance(&z) < 1e-12) {
                    found.push(z);
                }
                continue;
            }
            if s.size() < 1e-9 {
                // A cluster that subdivision cannot separate: polish each copy.
                for _ in 0..c {
                    found.push(newton(&phi, s.center(), prec, opts)?);
                }
                continue;
            }
            for (sub, sc) in split_counted(&ev, &s, opts)? {
                if sc > 0 {
                    stack.push((sub, sc));
                }
            }
        }
    }
    if found.len() != count {
        return Err(Error::Refinement(format!(
            "winding count {count} but {} zeros were refined",
            found.len()
        )));
    }
    found.sort_by(|a, b| {
        (a.re_f64(), a.im_f64())
            .partial_cmp(&(b.re_f64(), b.im_f64()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let one = PrecComplex::one(prec);
    let exceptional = found.iter().map(|z| &one / z).collect();
    Ok(DiscZeroReport {
        spec,
        eps,
        center: (0.0, 0.0),
        radius: rho,
        count,
        zeros: found,
        exceptional,
    })
}
