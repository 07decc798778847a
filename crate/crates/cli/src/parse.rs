//! Parsers for flag values that clap does not handle natively.

use std::cmp::Ordering;

use anyhow::{bail, Context, Result};
use hookpoly::numerics::{PrecComplex, ERR_PREC};
use rug::float::Round;
use rug::{Float, Rational};

/// `start:stop:step`, `start:stop` or a single value; `stop` is included
/// when it lies on the grid.
pub fn parse_range(s: &str) -> Result<Vec<u64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| {
        x.trim()
            .parse::<u64>()
            .with_context(|| format!("bad integer {x:?} in range {s:?}"))
    };
    let (start, stop, step) = match parts.as_slice() {
        [a] => {
            let v = num(a)?;
            (v, v, 1)
        }
        [a, b] => (num(a)?, num(b)?, 1),
        [a, b, c] => (num(a)?, num(b)?, num(c)?),
        _ => bail!("range must look like start:stop:step, got {s:?}"),
    };
    if step == 0 {
        bail!("range step must be positive in {s:?}");
    }
    if stop < start {
        bail!("range stop is below start in {s:?}");
    }
    Ok((start..=stop).step_by(step as usize).collect())
}

fn parse_float(s: &str, prec: u32) -> Result<(Float, bool)> {
    let parsed = Float::parse(s.trim()).map_err(|e| anyhow::anyhow!("bad number {s:?}: {e}"))?;
    let (v, ord) = Float::with_val_round(prec, parsed, Round::Nearest);
    if !v.is_finite() {
        bail!("number {s:?} is not finite");
    }
    Ok((v, ord != Ordering::Equal))
}

/// `re` or `re,im` as decimals, with a rounding bound when the decimal is
/// not representable at `prec` bits.
pub fn parse_complex(s: &str, prec: u32) -> Result<PrecComplex> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a, b),
        None => (s, "0"),
    };
    let (re, re_inexact) = parse_float(re, prec)?;
    let (im, im_inexact) = parse_float(im, prec)?;
    let mut err = Float::new(ERR_PREC);
    for (x, inexact) in [(&re, re_inexact), (&im, im_inexact)] {
        if inexact {
            err += Float::with_val(ERR_PREC, x.abs_ref())
                * Float::with_val(ERR_PREC, Float::u_exp(1, 1 - prec as i32));
        }
    }
    Ok(PrecComplex::from_floats(re, im).with_added_err(&err))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Ok(hookpoly::qseries::parse_rational(s)?)
}

/// A non-negative integer given as an exact rational.
pub fn integral(r: &Rational, what: &str) -> Result<u64> {
    if *r.denom() != 1 || *r < 0 {
        bail!("{what} must be a non-negative integer, got {r}");
    }
    r.numer()
        .to_u64()
        .with_context(|| format!("{what} = {r} is too large"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("100:1000:100").unwrap().len(), 10);
        assert_eq!(parse_range("425:440:7").unwrap(), vec![425, 432, 439]);
        assert_eq!(parse_range("13").unwrap(), vec![13]);
        assert_eq!(parse_range("3:5").unwrap(), vec![3, 4, 5]);
        for bad in ["5:3", "1:2:0", "a", "1:2:3:4", "-1"] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_values() {
        let z = parse_complex("3", 128).unwrap();
        assert_eq!((z.re_f64(), z.im_f64(), z.err_f64()), (3.0, 0.0, 0.0));
        let z = parse_complex("0.05,-1.5", 128).unwrap();
        assert_eq!(z.im_f64(), -1.5);
        assert!(z.err_f64() > 0.0 && z.err_f64() < 1e-38);
        assert!(parse_complex("x", 128).is_err());
        assert!(parse_complex("inf", 128).is_err());
    }

    #[test]
    fn integral_rationals() {
        assert_eq!(integral(&parse_rational("12").unwrap(), "n").unwrap(), 12);
        assert!(integral(&parse_rational("7/3").unwrap(), "n").is_err());
        assert!(integral(&parse_rational("-2").unwrap(), "n").is_err());
    }
}
