//! Textual and JSON forms of [`Padic`], plus rational-string input.
//!
//! Text: `5^-1 * (3 + 0*5 + 2*5^2) + O(5^2)`; inexact zero `O(5^7)`;
//! exact zero `O(5^inf)`. Every unit digit is written out, so the text form
//! is canonical and parsing is strict.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{check_prime, Padic, MAX_PREC};
use crate::error::{Error, Result};

pub(crate) fn to_text(x: &Padic) -> String {
    let p = x.prime();
    if x.is_exact_zero() {
        return format!("O({p}^inf)");
    }
    if x.is_zero() {
        return format!("O({p}^{})", x.prec());
    }
    let terms: Vec<String> = x
        .digits()
        .iter()
        .enumerate()
        .map(|(i, d)| match i {
            0 => format!("{d}"),
            1 => format!("{d}*{p}"),
            _ => format!("{d}*{p}^{i}"),
        })
        .collect();
    format!("{p}^{} * ({}) + O({p}^{})", x.val(), terms.join(" + "), x.prec())
}

fn parse_i64(s: &str) -> Result<i64> {
    let ok = {
        let body = s.strip_prefix('-').unwrap_or(s);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit()) && (body == "0" || !body.starts_with('0'))
    };
    if !ok || s == "-0" {
        return Err(Error::Parse(format!("not a canonical integer: {s:?}")));
    }
    let v: i64 = s.parse().map_err(|_| Error::Parse(format!("integer out of range: {s:?}")))?;
    if v.abs() > MAX_PREC {
        return Err(Error::Parse(format!("exponent out of range: {v}")));
    }
    Ok(v)
}

fn parse_u64(s: &str) -> Result<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
        return Err(Error::Parse(format!("not a canonical natural number: {s:?}")));
    }
    s.parse().map_err(|_| Error::Parse(format!("number out of range: {s:?}")))
}

/// Parses `O(p^N)` and returns `(p, N)`; `N = None` stands for `inf`.
fn parse_big_o(s: &str) -> Result<(u64, Option<i64>)> {
    let inner = s
        .strip_prefix("O(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected O(p^N), got {s:?}")))?;
    let (p, n) = inner.split_once('^').ok_or_else(|| Error::Parse(format!("expected p^N in {s:?}")))?;
    let p = parse_u64(p)?;
    if n == "inf" {
        return Ok((p, None));
    }
    Ok((p, Some(parse_i64(n)?)))
}

impl std::str::FromStr for Padic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Padic> {
        if s.starts_with("O(") {
            let (p, n) = parse_big_o(s)?;
            check_prime(p)?;
            return Ok(match n {
                None => Padic::exact_zero(p),
                Some(n) => Padic::zero(p, n),
            });
        }
        let (head, rest) = s.split_once(" * (").ok_or_else(|| Error::Parse("missing ' * ('".into()))?;
        let (body, tail) = rest.rsplit_once(") + ").ok_or_else(|| Error::Parse("missing ') + '".into()))?;
        let (p_str, v_str) = head.split_once('^').ok_or_else(|| Error::Parse("missing p^v".into()))?;
        let p = parse_u64(p_str)?;
        check_prime(p)?;
        let val = parse_i64(v_str)?;
        let (p2, prec) = parse_big_o(tail)?;
        if p2 != p {
            return Err(Error::Parse(format!("prime mismatch {p} vs {p2}")));
        }
        let prec = prec.ok_or_else(|| Error::Parse("a nonzero value needs finite precision".into()))?;
        let mut digits = Vec::new();
        for (i, term) in body.split(" + ").enumerate() {
            let d = match i {
                0 => term,
                1 => term
                    .strip_suffix(&format!("*{p}"))
                    .ok_or_else(|| Error::Parse(format!("bad term {term:?}")))?,
                _ => term
                    .strip_suffix(&format!("*{p}^{i}"))
                    .ok_or_else(|| Error::Parse(format!("bad term {term:?}")))?,
            };
            digits.push(parse_u64(d)?);
        }
        from_digits(p, val, &digits, prec)
    }
}

fn from_digits(p: u64, val: i64, digits: &[u64], prec: i64) -> Result<Padic> {
    if digits.iter().any(|&d| d >= p) {
        return Err(Error::Parse(format!("digit out of range for p = {p}")));
    }
    if digits.first() == Some(&0) {
        return Err(Error::Parse("leading unit digit must be nonzero".into()));
    }
    if prec.checked_sub(val) != Some(digits.len() as i64) {
        return Err(Error::Parse(format!(
            "{} digits do not match val {val} and prec {prec}",
            digits.len()
        )));
    }
    let mut unit = BigUint::zero();
    for &d in digits.iter().rev() {
        unit = unit * p + d;
    }
    if digits.is_empty() {
        return Padic::from_parts(p, prec, unit, prec);
    }
    Padic::from_parts(p, val, unit, prec)
}

/// Compact JSON form `{"p":5,"val":v,"digits":[d0,d1,...],"prec":N}`.
/// The exact zero has `val` and `prec` set to `null`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PadicRepr {
    pub p: u64,
    pub val: Option<i64>,
    pub digits: Vec<u64>,
    pub prec: Option<i64>,
}

impl From<&Padic> for PadicRepr {
    fn from(x: &Padic) -> Self {
        if x.is_exact_zero() {
            return PadicRepr { p: x.prime(), val: None, digits: Vec::new(), prec: None };
        }
        PadicRepr { p: x.prime(), val: Some(x.val()), digits: x.digits(), prec: Some(x.prec()) }
    }
}

impl TryFrom<PadicRepr> for Padic {
    type Error = Error;

    fn try_from(r: PadicRepr) -> Result<Padic> {
        check_prime(r.p)?;
        match (r.val, r.prec) {
            (None, None) if r.digits.is_empty() => Ok(Padic::exact_zero(r.p)),
            (Some(v), Some(n)) => {
                if v.abs() > MAX_PREC || n.abs() > MAX_PREC {
                    return Err(Error::Parse("valuation or precision out of range".into()));
                }
                if r.digits.is_empty() && v != n {
                    return Err(Error::Parse("a zero must have val == prec".into()));
                }
                from_digits(r.p, v, &r.digits, n)
            }
            _ => Err(Error::Parse("val and prec must both be null (exact zero) or both set".into())),
        }
    }
}

impl Serialize for Padic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Padic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Padic, D::Error> {
        let repr = PadicRepr::deserialize(d)?;
        Padic::try_from(repr).map_err(serde::de::Error::custom)
    }
}

/// Parses a rational string `"num/den"` or `"num"` into `(num, den)`.
pub fn parse_rational(s: &str) -> Result<(BigInt, BigInt)> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let ok = |t: &str| {
        let body = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
        !body.is_empty() && body.len() <= 4096 && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(n) || !ok(d) {
        return Err(Error::Parse(format!("expected \"num/den\", got {s:?}")));
    }
    let num: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad numerator {n:?}")))?;
    let den: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad denominator {d:?}")))?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok((num, den))
}

impl Padic {
    /// `"num/den"` string to a value modulo `p^prec`.
    pub fn parse_rational(s: &str, p: u64, prec: i64) -> Result<Padic> {
        let (n, d) = parse_rational(s)?;
        Padic::from_rational(&n, &d, p, prec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("padic serializes")
    }

    pub fn from_json(s: &str) -> Result<Padic> {
        let repr: PadicRepr = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Padic::try_from(repr)
    }
}
