use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::WPolynomial;
use crate::error::{Error, Result};

/// Parses an exact rational written `p/q` or `p`. Decimal points and
/// exponents are rejected rather than rounded.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("expected an integer or p/q fraction, got {s:?}"));
    if s.is_empty() || s.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: Integer = num.parse().map_err(|_| bad())?;
    let den: Integer = den.parse().map_err(|_| bad())?;
    if den <= 0 {
        return Err(Error::Parse(format!(
            "denominator must be positive in {s:?}"
        )));
    }
    Ok(Rational::from((num, den)))
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Generating-function family of a polynomial record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Hook,
    Parts,
    Rr,
    Tcore,
}

/// Serialized polynomial with exact decimal-string coefficients,
/// `coeffs[k]` being the coefficient of `w^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyRecord {
    pub family: Family,
    pub t: Option<u32>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub n: String,
    pub coeffs: Vec<String>,
}

impl PolyRecord {
    pub fn new(
        family: Family,
        t: Option<u32>,
        ab: Option<(&Rational, &Rational)>,
        n: &Rational,
        p: &WPolynomial,
    ) -> Self {
        PolyRecord {
            family,
            t,
            a: ab.map(|(a, _)| format_rational(a)),
            b: ab.map(|(_, b)| format_rational(b)),
            n: format_rational(n),
            coeffs: p.to_dense().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn polynomial(&self) -> Result<WPolynomial> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                c.parse::<Integer>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WPolynomial::from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_exact_fractions() {
        assert_eq!(
            parse_rational("7114/21").unwrap(),
            Rational::from((7114, 21))
        );
        assert_eq!(parse_rational("-4/6").unwrap(), Rational::from((-2, 3)));
        assert_eq!(parse_rational(" 12 ").unwrap(), 12);
        for bad in ["0.5", "1e3", "1/0", "1/-2", "", "x", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!(format_rational(&Rational::from((7114, 21))), "7114/21");
        assert_eq!(format_rational(&Rational::from(5)), "5");
    }

    #[test]
    fn record_round_trip() {
        let p = WPolynomial::from_i64s(&[0, 0, 3, 0, -5]);
        let a = Rational::from((1, 3));
        let b = Rational::from((2, 7));
        let rec = PolyRecord::new(
            Family::Rr,
            None,
            Some((&a, &b)),
            &Rational::from((7, 3)),
            &p,
        );
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(
            json,
            r#"{"family":"rr","t":null,"a":"1/3","b":"2/7","n":"7/3","coeffs":["0","0","3","0","-5"]}"#
        );
        let back: PolyRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.polynomial().unwrap(), p);
    }
}
