//! Truncated one-variable Laurent series with `p`-adic coefficients.
//!
//! A [`PadicSeries`] holds the coefficients of `x^offset, ..., x^(trunc-1)`
//! and is known modulo `O(x^trunc)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{small_val, Padic, EXACT};

#[derive(Clone, PartialEq, Eq)]
pub struct PadicSeries {
    p: u64,
    offset: i64,
    coeffs: Vec<Padic>,
    trunc: i64,
}

impl PadicSeries {
    pub fn new(offset: i64, coeffs: Vec<Padic>, trunc: i64) -> Result<Self> {
        if trunc <= offset {
            return Err(Error::Domain(format!("trunc {trunc} must exceed lead offset {offset}")));
        }
        if coeffs.len() as i64 != trunc - offset {
            return Err(Error::Domain(format!(
                "{} coefficients given for the range x^{offset}..x^{trunc}",
                coeffs.len()
            )));
        }
        let p = coeffs[0].prime();
        if let Some(c) = coeffs.iter().find(|c| c.prime() != p) {
            return Err(Error::PrimeMismatch(p, c.prime()));
        }
        Ok(PadicSeries { p, offset, coeffs, trunc })
    }

    /// Power series from leading coefficients; missing terms are exact zeros.
    pub fn from_coeffs(p: u64, coeffs: &[Padic], trunc: i64) -> Self {
        assert!(trunc >= 1);
        let coeffs = (0..trunc as usize)
            .map(|i| coeffs.get(i).cloned().unwrap_or_else(|| Padic::exact_zero(p)))
            .collect();
        PadicSeries { p, offset: 0, coeffs, trunc }
    }

    pub fn from_i64s(p: u64, values: &[i64], prec: i64, trunc: i64) -> Self {
        let cs: Vec<Padic> = values.iter().map(|&v| Padic::from_i64(v, p, prec)).collect();
        Self::from_coeffs(p, &cs, trunc)
    }

    pub fn constant(c: Padic, trunc: i64) -> Self {
        let p = c.prime();
        Self::from_coeffs(p, &[c], trunc)
    }

    /// The series `x`.
    pub fn var(p: u64, prec: i64, trunc: i64) -> Self {
        Self::from_coeffs(p, &[Padic::exact_zero(p), Padic::one(p, prec)], trunc)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    /// Coefficient of `x^k`; below the offset this is an exact zero.
    pub fn coeff(&self, k: i64) -> Padic {
        assert!(k < self.trunc, "x^{k} is beyond the truncation O(x^{})", self.trunc);
        if k < self.offset {
            return Padic::exact_zero(self.p);
        }
        self.coeffs[(k - self.offset) as usize].clone()
    }

    /// Index of the first coefficient not indistinguishable from zero.
    pub fn order(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.offset + i as i64)
    }

    pub fn min_prec(&self) -> i64 {
        self.coeffs.iter().map(Padic::prec).min().unwrap()
    }

    pub fn min_coeff_val(&self) -> i64 {
        self.coeffs.iter().map(Padic::val).min().unwrap()
    }

    /// All coefficients lie in `Z_p`.
    pub fn is_integral(&self) -> bool {
        self.offset >= 0 && self.coeffs.iter().all(Padic::is_integral)
    }

    /// True when every known coefficient is indistinguishable from zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Padic::is_zero)
    }

    pub fn truncate(&self, trunc: i64) -> Self {
        let trunc = trunc.min(self.trunc);
        assert!(trunc > self.offset);
        PadicSeries {
            p: self.p,
            offset: self.offset,
            coeffs: self.coeffs[..(trunc - self.offset) as usize].to_vec(),
            trunc,
        }
    }

    /// Replaces the coefficient of `x^k` (used to pin known exact values).
    pub fn with_coeff(mut self, k: i64, c: Padic) -> Self {
        assert!(k >= self.offset && k < self.trunc);
        self.coeffs[(k - self.offset) as usize] = c;
        self
    }

    /// Rewrites the series with offset 0 when it has no principal part.
    fn as_power_series(&self) -> Result<Self> {
        if self.offset >= 0 {
            let coeffs = (0..self.trunc).map(|k| self.coeff(k)).collect();
            return Ok(PadicSeries { p: self.p, offset: 0, coeffs, trunc: self.trunc });
        }
        Err(Error::Domain("expected a power series, found a principal part".into()))
    }

    pub fn scale(&self, c: &Padic) -> Self {
        PadicSeries {
            p: self.p,
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            trunc: self.trunc,
        }
    }

    fn add_impl(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let offset = self.offset.min(other.offset);
        let trunc = self.trunc.min(other.trunc);
        let coeffs = (offset..trunc).map(|k| self.coeff(k) + other.coeff(k)).collect();
        PadicSeries { p: self.p, offset, coeffs, trunc }
    }

    fn neg_impl(&self) -> Self {
        PadicSeries {
            p: self.p,
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            trunc: self.trunc,
        }
    }

    /// Drops leading exact-zero coefficients, raising the offset.
    fn normalized(&self) -> Self {
        let skip = self.coeffs.iter().position(|c| !c.is_exact_zero()).unwrap_or(self.coeffs.len() - 1);
        PadicSeries {
            p: self.p,
            offset: self.offset + skip as i64,
            coeffs: self.coeffs[skip..].to_vec(),
            trunc: self.trunc,
        }
    }

    /// Asserts that the coefficients below `x^k` vanish and drops them.
    pub fn known_order(&self, k: i64) -> Result<Self> {
        if k <= self.offset {
            return Ok(self.clone());
        }
        if k >= self.trunc {
            return Err(Error::Domain(format!("order {k} is beyond the truncation O(x^{})", self.trunc)));
        }
        let drop = (k - self.offset) as usize;
        if let Some(c) = self.coeffs[..drop].iter().find(|c| !c.is_zero()) {
            return Err(Error::Invariant(format!("coefficient {c} below x^{k} does not vanish")));
        }
        Ok(PadicSeries { p: self.p, offset: k, coeffs: self.coeffs[drop..].to_vec(), trunc: self.trunc })
    }

    /// Multiplication by the exact monomial `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        PadicSeries { p: self.p, offset: self.offset + k, coeffs: self.coeffs.clone(), trunc: self.trunc + k }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let (a, b) = (self.normalized(), other.normalized());
        let (this, other) = (&a, &b);
        let offset = this.offset + other.offset;
        let trunc = (this.trunc + other.offset).min(other.trunc + this.offset);
        let len = (trunc - offset) as usize;
        let mut coeffs = vec![Padic::exact_zero(this.p); len];
        for (i, a) in this.coeffs.iter().enumerate().take(len) {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if b.is_exact_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        PadicSeries { p: this.p, offset, coeffs, trunc }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Padic::one(self.p, self.min_prec().max(1)), self.trunc);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse. The leading coefficient (after skipping exact
    /// zeros) must be a unit.
    pub fn reciprocal(&self) -> Result<Self> {
        let shift = self
            .coeffs
            .iter()
            .position(|c| !c.is_exact_zero())
            .ok_or(Error::DivisionByZero)?;
        let lead = &self.coeffs[shift];
        if lead.is_zero() || lead.val() != 0 {
            return Err(Error::Domain(format!("leading coefficient {lead} is not a unit")));
        }
        let a = &self.coeffs[shift..];
        let len = a.len();
        let inv0 = lead.inv()?;
        let mut h: Vec<Padic> = Vec::with_capacity(len);
        h.push(inv0.clone());
        for n in 1..len {
            let mut s = Padic::exact_zero(self.p);
            for k in 1..=n {
                if !a[k].is_exact_zero() {
                    s = &s + &(&a[k] * &h[n - k]);
                }
            }
            h.push(-(&s * &inv0));
        }
        let lead_exp = self.offset + shift as i64;
        Ok(PadicSeries { p: self.p, offset: -lead_exp, coeffs: h, trunc: -lead_exp + len as i64 })
    }

    /// Square root of a series with constant term 1; the result has constant
    /// term 1 and is integral whenever the input is.
    pub fn sqrt(&self) -> Result<Self> {
        let f = self.as_power_series()?;
        let c0 = f.coeff(0);
        if !(&c0 - &c0.one_like()).is_zero() || c0.is_zero() {
            return Err(Error::Domain(format!("square root needs constant term 1, found {c0}")));
        }
        let n = f.coeffs.len();
        let mut s: Vec<Padic> = vec![c0.one_like().with_prec(c0.prec())];
        for k in 1..n {
            let mut acc = f.coeffs[k].clone();
            for i in 1..k {
                acc = &acc - &(&s[i] * &s[k - i]);
            }
            s.push(acc.div_int(2)?);
        }
        Ok(PadicSeries { p: self.p, offset: 0, coeffs: s, trunc: f.trunc })
    }

    /// `self ∘ g`. When `g` has a nonzero constant term it must lie in `pZ_p`,
    /// and the dropped tail of `self` then caps the coefficient precision.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let f = self.as_power_series()?;
        let g = g.as_power_series()?;
        let g0 = g.coeff(0);
        let (trunc, cap) = if g0.is_zero() {
            let v = g.order().unwrap_or(g.trunc).max(1);
            (f.trunc.min(g.trunc).min(f.trunc.saturating_mul(v)), EXACT)
        } else {
            if g0.val() < 1 {
                return Err(Error::Domain(format!("inner series has unit constant term {g0}")));
            }
            (f.trunc.min(g.trunc), f.trunc * g0.val() + f.min_coeff_val().min(0))
        };
        let g = g.truncate(trunc);
        // the Horner partial sum at c_k is later multiplied by g^k, so with
        // v leading exact zeros in g it only needs trunc - k v terms
        let v = g.coeffs.iter().take_while(|c| c.is_exact_zero()).count() as i64;
        let need = |k: usize| (trunc - k as i64 * v).max(1);
        let top = f.coeffs.len() - 1;
        let mut acc = Self::constant(f.coeffs[top].clone(), need(top));
        for (k, c) in f.coeffs.iter().enumerate().rev().skip(1) {
            acc = (&acc * &g).as_power_series()?;
            acc.coeffs[0] = &acc.coeffs[0] + c;
            if acc.trunc > need(k) {
                acc = acc.truncate(need(k));
            }
        }
        if cap < EXACT {
            acc.coeffs = acc.coeffs.iter().map(|c| c.with_prec(cap)).collect();
        }
        Ok(acc)
    }

    /// Compositional inverse of an integral series with `f(0) = 0` and unit
    /// linear coefficient, by Newton's successive approximation. Both
    /// `f(g(x)) = x` and `g(f(x)) = x` and the integrality of `g` are checked
    /// before returning.
    pub fn comp_inverse(&self) -> Result<Self> {
        let f = self.as_power_series()?;
        if f.trunc < 2 {
            return Err(Error::Domain("need at least the linear term".into()));
        }
        if !f.coeff(0).is_zero() {
            return Err(Error::Domain("f(0) must vanish".into()));
        }
        let f1 = f.coeff(1);
        if f1.is_zero() || f1.val() != 0 {
            return Err(Error::Domain(format!(
                "linear coefficient {f1} is not a unit; use the scaled inversion in the hensel module"
            )));
        }
        if !f.is_integral() {
            return Err(Error::Domain("series is not integral".into()));
        }
        let f = f.with_coeff(0, Padic::exact_zero(self.p));
        let prec = f.min_prec();
        let x = Self::var(self.p, prec, f.trunc);
        let df = f.derive();
        let mut g = Self::from_coeffs(self.p, &[Padic::exact_zero(self.p), f1.inv()?], 2);
        let mut len = 2;
        while len < f.trunc {
            let known = len;
            len = (2 * len).min(f.trunc);
            let g_ext = Self::from_coeffs(self.p, &g.coeffs, len);
            let resid = (&f.truncate(len).compose(&g_ext)? - &x.truncate(len)).known_order(known)?;
            let slope = df.compose(&g_ext)?.reciprocal()?;
            g = (&g_ext - &(&resid * &slope)).truncate(len);
            g = g.with_coeff(0, Padic::exact_zero(self.p));
        }
        let g = Self::from_coeffs(self.p, &g.coeffs, f.trunc);
        let fg = &f.compose(&g)? - &x;
        let gf = &g.compose(&f)? - &x;
        if !fg.is_zero() || !gf.is_zero() {
            return Err(Error::Invariant("compositional inverse is not two-sided".into()));
        }
        if !g.is_integral() {
            return Err(Error::Invariant("compositional inverse is not integral".into()));
        }
        Ok(g)
    }

    /// Formal antiderivative with zero constant term. Dividing the `x^k`
    /// coefficient by `k + 1` debits `val(k + 1)` digits of precision.
    pub fn integrate(&self) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.offset + i as i64;
            if e == -1 {
                if !c.is_exact_zero() {
                    return Err(Error::Domain("cannot integrate x^-1".into()));
                }
                coeffs.push(Padic::exact_zero(self.p));
                continue;
            }
            let q = c.div_int(e + 1)?;
            if q.is_zero() && !q.is_exact_zero() && q.prec() <= 0 {
                return Err(Error::PrecisionExhausted(format!("integrating the x^{e} coefficient")));
            }
            coeffs.push(q);
        }
        let offset = self.offset + 1;
        if self.offset == -1 {
            // the x^0 slot produced by x^-1 is the constant of integration
            coeffs[0] = Padic::exact_zero(self.p);
        }
        Ok(PadicSeries { p: self.p, offset, coeffs, trunc: self.trunc + 1 })
    }

    pub fn derive(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let offset = if self.offset == 0 { 0 } else { self.offset - 1 };
        for e in offset + 1..self.trunc {
            if e == 0 {
                coeffs.push(Padic::exact_zero(self.p));
                continue;
            }
            coeffs.push(self.coeff(e).mul_int(e));
        }
        if coeffs.is_empty() {
            coeffs.push(Padic::exact_zero(self.p));
            return PadicSeries { p: self.p, offset, coeffs, trunc: offset + 1 };
        }
        PadicSeries { p: self.p, offset, coeffs, trunc: self.trunc - 1 }
    }

    /// Value at `t` with `val(t) >= 1`. The reported precision includes the
    /// truncation tail, bounded by `trunc * val(t) + min coefficient val`.
    pub fn eval(&self, t: &Padic) -> Result<Padic> {
        if t.prime() != self.p {
            return Err(Error::PrimeMismatch(self.p, t.prime()));
        }
        if t.is_exact_zero() {
            if self.offset > 0 {
                return Ok(Padic::exact_zero(self.p));
            }
            if self.offset < 0 && self.coeffs[..(-self.offset) as usize].iter().any(|c| !c.is_exact_zero()) {
                return Err(Error::DivisionByZero);
            }
            return Ok(self.coeff(0));
        }
        if t.val() < 1 {
            return Err(Error::Domain(format!("evaluation point {t} is outside the open unit disk")));
        }
        let mut acc = Padic::exact_zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        let value = &acc * &t.powi(self.offset)?;
        let tail = self.trunc.saturating_mul(t.val()).saturating_add(self.min_coeff_val().min(0));
        if tail < 1 {
            return Err(Error::PrecisionExhausted(format!("truncation tail bound {tail} is below one digit")));
        }
        Ok(value.with_prec(tail))
    }

    /// Checked coefficientwise operation: fails if any output coefficient has
    /// lost all of its digits.
    pub fn arith(f: &Self, g: &Self, op: SeriesOp) -> Result<Self> {
        if f.p != g.p {
            return Err(Error::PrimeMismatch(f.p, g.p));
        }
        let r = match op {
            SeriesOp::Add => f + g,
            SeriesOp::Mul => f * g,
        };
        if let Some(c) = r.coeffs.iter().find(|c| c.is_zero() && !c.is_exact_zero() && c.prec() <= 0) {
            return Err(Error::PrecisionExhausted(format!("coefficient known only modulo p^{}", c.prec())));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
}

/// `val(k)` for the integer `k`, as used by the integration ledger.
pub fn index_val(k: i64, p: u64) -> i64 {
    small_val(k.unsigned_abs(), p)
}

impl fmt::Debug for PadicSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x^{}: {c}", self.offset + i as i64)?;
        }
        write!(f, "] + O(x^{})", self.trunc)
    }
}

macro_rules! series_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&PadicSeries> for &PadicSeries {
            type Output = PadicSeries;
            fn $method(self, rhs: &PadicSeries) -> PadicSeries {
                self.$imp(rhs)
            }
        }
        impl $trait<PadicSeries> for PadicSeries {
            type Output = PadicSeries;
            fn $method(self, rhs: PadicSeries) -> PadicSeries {
                (&self).$imp(&rhs)
            }
        }
    };
}

impl PadicSeries {
    fn sub_impl(&self, other: &Self) -> Self {
        self.add_impl(&other.neg_impl())
    }
}

series_binop!(Add, add, add_impl);
series_binop!(Sub, sub, sub_impl);
series_binop!(Mul, mul, mul_impl);

impl Neg for &PadicSeries {
    type Output = PadicSeries;
    fn neg(self) -> PadicSeries {
        self.neg_impl()
    }
}

/// JSON form `{"lead_offset":k,"trunc":T,"coeffs":[...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesRepr {
    pub lead_offset: i64,
    pub trunc: i64,
    pub coeffs: Vec<Padic>,
}

impl Serialize for PadicSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr { lead_offset: self.offset, trunc: self.trunc, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SeriesRepr::deserialize(d)?;
        if r.coeffs.is_empty() {
            return Err(serde::de::Error::custom("a series needs at least one coefficient"));
        }
        PadicSeries::new(r.lead_offset, r.coeffs, r.trunc).map_err(serde::de::Error::custom)
    }
}

impl PadicSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 5;

    fn ser(vals: &[i64], trunc: i64) -> PadicSeries {
        PadicSeries::from_i64s(P, vals, 30, trunc)
    }

    fn assert_series_eq(a: &PadicSeries, b: &PadicSeries) {
        let d = a - b;
        assert!(d.is_zero(), "{a:?} != {b:?}");
    }

    #[test]
    fn product_examples() {
        let f = ser(&[1, 1], 6);
        let g = ser(&[1, -1], 6);
        assert_series_eq(&(&f * &g), &ser(&[1, 0, -1], 6));
        assert_series_eq(&(&f + &PadicSeries::from_i64s(P, &[], 30, 6)), &f);
    }

    #[test]
    fn laurent_product_keeps_principal_part() {
        let j = PadicSeries::new(-1, vec![Padic::one(P, 30), Padic::from_i64(744, P, 30)], 1).unwrap();
        let prod = j.shift(1);
        assert_eq!((prod.offset(), prod.trunc()), (0, 2));
        assert_eq!(prod.coeff(0), Padic::one(P, 30));
        assert_eq!(prod.coeff(1), Padic::from_i64(744, P, 30));

        // q + O(q^2) carries an unknown q^2 term, which 1/q turns into O(q)
        let q = PadicSeries::new(0, vec![Padic::exact_zero(P), Padic::one(P, 30)], 2).unwrap();
        let prod = &j * &q;
        assert_eq!((prod.offset(), prod.trunc()), (0, 1));
        assert_eq!(prod.coeff(0), Padic::one(P, 30));

        let sum = &j + &PadicSeries::from_i64s(P, &[1, 2, 3], 30, 3);
        assert_eq!((sum.offset(), sum.trunc()), (-1, 1));
        assert_eq!(sum.coeff(-1), Padic::one(P, 30));
    }

    #[test]
    fn compose_examples() {
        let f = ser(&[0, 0, 1], 8);
        let g = ser(&[0, 1, 1], 8);
        assert_series_eq(&f.compose(&g).unwrap(), &ser(&[0, 0, 1, 2, 1], 8));
        let x = PadicSeries::var(P, 30, 8);
        let h = ser(&[3, 1, 4, 1, 5, 9, 2, 6], 8);
        assert_series_eq(&h.compose(&x).unwrap(), &h);
        assert!(matches!(h.compose(&ser(&[1, 1], 8)), Err(Error::Domain(_))));
    }

    #[test]
    fn compose_truncation_rule() {
        let f = ser(&[0, 1, 1, 1], 10);
        let g = ser(&[0, 0, 1], 7);
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.trunc(), 7);
        let g = ser(&[0, 0, 1], 40);
        assert_eq!(f.compose(&g).unwrap().trunc(), 10);
    }

    #[test]
    fn compose_with_nonzero_constant_caps_precision() {
        let f = ser(&[1, 1, 1, 1], 4);
        let g = ser(&[5, 1], 4);
        let h = f.compose(&g).unwrap();
        assert!(h.min_prec() <= 4);
    }

    #[test]
    fn reciprocal_examples() {
        let f = ser(&[1, -1], 8);
        assert_series_eq(&f.reciprocal().unwrap(), &ser(&[1; 8], 8));
        let jinv = ser(&[0, 1, -744], 6);
        let j = jinv.reciprocal().unwrap();
        assert_eq!(j.offset(), -1);
        assert_eq!(j.coeff(-1), Padic::one(P, 30));
        assert_eq!(j.coeff(0), Padic::from_i64(744, P, 30));
        assert!(ser(&[5, 1], 4).reciprocal().is_err());
    }

    #[test]
    fn sqrt_examples() {
        assert_series_eq(&ser(&[1], 5).sqrt().unwrap(), &ser(&[1], 5));
        let s = ser(&[1, 4], 4).sqrt().unwrap();
        // binomial series: (1+4x)^(1/2) = sum binom(1/2, k) 4^k x^k
        let binom = |k: i64| {
            let mut num = num_rational::BigRational::from_integer(1.into());
            for i in 0..k {
                num *= num_rational::BigRational::new((1 - 2 * i).into(), 2.into());
                num /= num_rational::BigRational::from_integer((i + 1).into());
            }
            num * num_rational::BigRational::from_integer(num_bigint::BigInt::from(4).pow(k as u32))
        };
        for k in 0..4 {
            let b = binom(k);
            let expect = Padic::from_rational(b.numer(), b.denom(), P, 30).unwrap();
            assert!((&s.coeff(k) - &expect).is_zero(), "k={k}");
        }
        assert_eq!(s.coeff(1), Padic::from_i64(2, P, 30));
        assert_eq!(s.coeff(2), Padic::from_i64(-2, P, 30));
        assert!(s.is_integral());
        assert_series_eq(&(&s * &s), &ser(&[1, 4], 4));
        assert!(ser(&[2, 1], 4).sqrt().is_err());
    }

    #[test]
    fn comp_inverse_examples() {
        let x = PadicSeries::var(P, 30, 8);
        assert_series_eq(&x.comp_inverse().unwrap(), &x);

        // Lagrange inversion of x + x^2: signed Catalan numbers.
        let g = ser(&[0, 1, 1], 6).comp_inverse().unwrap();
        assert_series_eq(&g, &ser(&[0, 1, -1, 2, -5, 14], 6));

        let g = ser(&[0, 1, 5], 3).comp_inverse().unwrap();
        assert!(g.is_integral());
        assert_series_eq(&g, &ser(&[0, 1, -5], 3));

        assert!(matches!(ser(&[0, 5, 1], 5).comp_inverse(), Err(Error::Domain(_))));
        assert!(ser(&[1, 1], 5).comp_inverse().is_err());
    }

    #[test]
    fn integrate_and_derive() {
        assert_series_eq(&ser(&[1], 4).integrate().unwrap(), &ser(&[0, 1], 5));
        let x4 = ser(&[0, 0, 0, 0, 1], 6);
        let i = x4.integrate().unwrap();
        let c = i.coeff(5);
        assert_eq!(c.val(), -1);
        assert_eq!(c.prec(), 30 - 1);
        assert_series_eq(&ser(&[0, 0, 0, 1], 5).derive(), &ser(&[0, 0, 3], 4));
        let f = ser(&[2, 7, 1, 8, 2, 8], 6);
        assert_series_eq(&f.integrate().unwrap().derive(), &f);
    }

    #[test]
    fn integrate_precision_ledger() {
        let f = ser(&[1; 30], 30);
        let i = f.integrate().unwrap();
        for k in 0..30 {
            assert_eq!(i.coeff(k + 1).prec(), 30 - index_val(k + 1, P));
        }
    }

    #[test]
    fn eval_examples() {
        let p5 = Padic::from_i64(5, P, 20);
        assert_eq!(ser(&[1, 1], 4).eval(&p5).unwrap().with_prec(20), Padic::from_i64(6, P, 20).with_prec(4));
        let geo = ser(&[1; 10], 10);
        let v = geo.eval(&p5).unwrap();
        assert!(v.prec() >= 4);
        let expect = Padic::rational(1, -4, P, 4).unwrap();
        assert!((&v.with_prec(4) - &expect).is_zero());
        assert_eq!(v.with_prec(4).unit(), &num_bigint::BigUint::from(156u32));
        let phi_like = ser(&[0, 3, 2], 5);
        assert!(phi_like.eval(&Padic::exact_zero(P)).unwrap().is_exact_zero());
        assert!(geo.eval(&Padic::from_i64(2, P, 20)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = ser(&[0, 1, -744], 3);
        let s = f.to_json();
        assert!(s.starts_with(r#"{"lead_offset":0,"trunc":3,"coeffs":[{"p":5,"val":null"#));
        assert_eq!(PadicSeries::from_json(&s).unwrap(), f);
        assert!(PadicSeries::from_json(r#"{"lead_offset":0,"trunc":3,"coeffs":[]}"#).is_err());
    }
}
