//! Elements of `Q_p` with capped absolute precision.
//!
//! A [`Padic`] is `p^val * unit + O(p^prec)` where `unit` is a residue modulo
//! `p^(prec - val)` that is coprime to `p`. Zero comes in two flavours: the
//! exact zero, and a zero that is only known modulo `p^prec`. Every operation
//! reports the absolute precision that its inputs actually justify.

mod format;

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use format::{parse_rational, PadicRepr};

/// Sentinel precision (and valuation) carried by the exact zero.
pub const EXACT: i64 = i64::MAX / 4;

/// Bound on `|val|` and `|prec|` accepted from external input.
pub const MAX_PREC: i64 = 1_000_000_000;

const POW_CACHE_LIMIT: usize = 1024;

thread_local! {
    static POWERS: RefCell<HashMap<u64, Vec<BigUint>>> = RefCell::new(HashMap::new());
}

/// `p^k` for `k >= 0`, memoized per thread for small exponents.
pub(crate) fn pow_p(p: u64, k: i64) -> BigUint {
    assert!(k >= 0, "negative exponent {k}");
    let k = k as usize;
    if k >= POW_CACHE_LIMIT {
        return num_traits::pow(BigUint::from(p), k);
    }
    POWERS.with(|cell| {
        let mut map = cell.borrow_mut();
        let table = map.entry(p).or_insert_with(|| vec![BigUint::one()]);
        while table.len() <= k {
            let next = table.last().unwrap() * p;
            table.push(next);
        }
        table[k].clone()
    })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes this crate works over: `p >= 5` (2 and 3 must be invertible) and
/// small enough for word-sized residue arithmetic.
pub fn check_prime(p: u64) -> Result<()> {
    if p < 5 || p > u32::MAX as u64 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

/// Valuation and unit part of a nonzero integer.
fn split_int(n: &BigUint, p: u64) -> (i64, BigUint) {
    let mut v = 0;
    let mut u = n.clone();
    let pb = BigUint::from(p);
    loop {
        let (q, r) = u.div_rem(&pb);
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Padic {
    p: u64,
    val: i64,
    prec: i64,
    unit: BigUint,
}

impl Padic {
    pub fn exact_zero(p: u64) -> Self {
        Padic { p, val: EXACT, prec: EXACT, unit: BigUint::zero() }
    }

    /// Zero known modulo `p^prec`.
    pub fn zero(p: u64, prec: i64) -> Self {
        Padic { p, val: prec, prec, unit: BigUint::zero() }
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::from_i64(1, p, prec)
    }

    pub fn from_i64(n: i64, p: u64, prec: i64) -> Self {
        Self::from_bigint(&BigInt::from(n), p, prec)
    }

    pub fn from_bigint(n: &BigInt, p: u64, prec: i64) -> Self {
        if n.is_zero() {
            return Self::exact_zero(p);
        }
        let (v, u) = split_int(n.magnitude(), p);
        let neg = n.sign() == Sign::Minus;
        Self::from_signed_unit(p, v, u, neg, prec)
    }

    /// The image of `num/den` in `Q_p`, known modulo `p^prec`.
    pub fn from_rational(num: &BigInt, den: &BigInt, p: u64, prec: i64) -> Result<Self> {
        check_prime(p)?;
        if prec <= 0 {
            return Err(Error::InvalidPrecision(prec));
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::exact_zero(p));
        }
        let (vn, un) = split_int(num.magnitude(), p);
        let (vd, ud) = split_int(den.magnitude(), p);
        let val = vn - vd;
        let rel = prec - val;
        if rel <= 0 {
            return Ok(Self::zero(p, prec));
        }
        let modulus = pow_p(p, rel);
        let inv = (&ud % &modulus).modinv(&modulus).expect("unit is invertible");
        let unit = (un * inv) % &modulus;
        let neg = num.sign() != den.sign();
        Ok(Self::from_signed_unit(p, val, unit, neg, prec))
    }

    /// Convenience wrapper over [`Padic::from_rational`] for small constants.
    pub fn rational(num: i64, den: i64, p: u64, prec: i64) -> Result<Self> {
        Self::from_rational(&BigInt::from(num), &BigInt::from(den), p, prec)
    }

    fn from_signed_unit(p: u64, val: i64, unit: BigUint, neg: bool, prec: i64) -> Self {
        let rel = prec - val;
        if rel <= 0 {
            return Self::zero(p, prec);
        }
        let modulus = pow_p(p, rel);
        let mut unit = unit % &modulus;
        if neg {
            unit = &modulus - unit;
        }
        Padic { p, val, prec, unit }
    }

    /// Builds `p^val * unit + O(p^prec)`, validating every field.
    pub fn from_parts(p: u64, val: i64, unit: BigUint, prec: i64) -> Result<Self> {
        check_prime(p)?;
        if val.abs() > MAX_PREC || prec.abs() > MAX_PREC {
            return Err(Error::Domain(format!("valuation {val} or precision {prec} out of range")));
        }
        if unit.is_zero() {
            if val != prec {
                return Err(Error::Domain("a zero must have val == prec".into()));
            }
            return Ok(Self::zero(p, prec));
        }
        if val >= prec {
            return Err(Error::Domain(format!("val {val} must be below prec {prec}")));
        }
        if (&unit % p).is_zero() {
            return Err(Error::Domain("unit part divisible by p".into()));
        }
        if unit >= pow_p(p, prec - val) {
            return Err(Error::Domain("unit part exceeds p^(prec - val)".into()));
        }
        Ok(Padic { p, val, prec, unit })
    }

    /// Puts `p^m * r + O(p^prec)` into canonical form.
    fn normalize(p: u64, m: i64, r: BigUint, prec: i64) -> Self {
        assert!(prec < EXACT / 2, "exact-zero sentinel reached nonzero arithmetic");
        let rel = prec - m;
        if rel <= 0 {
            return Self::zero(p, prec);
        }
        let r = r % pow_p(p, rel);
        if r.is_zero() {
            return Self::zero(p, prec);
        }
        let (k, unit) = split_int(&r, p);
        Padic { p, val: m + k, prec, unit }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Valuation; for a zero this is its precision (a lower bound).
    pub fn val(&self) -> i64 {
        self.val
    }

    /// Absolute precision: the value is known modulo `p^prec`.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Number of known unit digits.
    pub fn rel_prec(&self) -> i64 {
        if self.is_exact_zero() {
            EXACT
        } else {
            self.prec - self.val
        }
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec == EXACT
    }

    /// True when the value is indistinguishable from zero at its precision.
    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.val >= 0
    }

    /// Base-`p` digits of the unit part, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        if self.is_zero() {
            return Vec::new();
        }
        let n = self.rel_prec() as usize;
        let mut out = Vec::with_capacity(n);
        let mut u = self.unit.clone();
        let pb = BigUint::from(self.p);
        for _ in 0..n {
            let (q, r) = u.div_rem(&pb);
            out.push(r.to_u64().unwrap());
            u = q;
        }
        out
    }

    /// First unit digit, `None` for zeros.
    pub fn leading_digit(&self) -> Option<u64> {
        if self.is_zero() {
            None
        } else {
            Some((&self.unit % self.p).to_u64().unwrap())
        }
    }

    /// An integer representative in `[0, p^prec)` when the value is integral.
    pub fn to_biguint(&self) -> Option<BigUint> {
        if self.is_zero() {
            return Some(BigUint::zero());
        }
        if self.val < 0 {
            return None;
        }
        Some(&self.unit * pow_p(self.p, self.val))
    }

    /// Caps the absolute precision at `prec`.
    pub fn with_prec(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::normalize(self.p, self.val, self.unit.clone(), prec)
    }

    /// Treats the stored representative as known modulo `p^prec`.
    pub fn extend_prec(&self, prec: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(self.p, prec.max(self.prec));
        }
        if prec <= self.prec {
            return self.with_prec(prec);
        }
        Padic { p: self.p, val: self.val, prec, unit: self.unit.clone() }
    }

    fn same_prime(&self, other: &Padic) {
        assert_eq!(self.p, other.p, "mixing primes {} and {}", self.p, other.p);
    }

    fn add_impl(&self, other: &Padic) -> Padic {
        self.same_prime(other);
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let prec = self.prec.min(other.prec);
        let m = self.val.min(other.val);
        if m >= prec {
            return Self::zero(self.p, prec);
        }
        let mut r = BigUint::zero();
        for x in [self, other] {
            if !x.unit.is_zero() && x.val < prec {
                r += &x.unit * pow_p(self.p, x.val - m);
            }
        }
        Self::normalize(self.p, m, r, prec)
    }

    fn mul_impl(&self, other: &Padic) -> Padic {
        self.same_prime(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::exact_zero(self.p);
        }
        let prec = (self.prec + other.val).min(other.prec + self.val);
        Self::normalize(self.p, self.val + other.val, &self.unit * &other.unit, prec)
    }

    fn neg_impl(&self) -> Padic {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = pow_p(self.p, self.prec - self.val);
        Padic { p: self.p, val: self.val, prec: self.prec, unit: modulus - &self.unit }
    }

    /// Quotient; the relative precision is the smaller of the operands'.
    pub fn try_div(&self, other: &Padic) -> Result<Padic> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let val = self.val - other.val;
        let rel = (self.prec - self.val).min(other.prec - other.val);
        if self.is_zero() {
            return Ok(Self::zero(self.p, self.prec - other.val));
        }
        let modulus = pow_p(self.p, rel);
        let inv = (&other.unit % &modulus).modinv(&modulus).expect("unit is invertible");
        let unit = (&self.unit * inv) % &modulus;
        Ok(Padic { p: self.p, val, prec: val + rel, unit })
    }

    pub fn inv(&self) -> Result<Padic> {
        self.one_like().try_div(self)
    }

    /// One, carried at enough precision not to limit products with `self`.
    pub fn one_like(&self) -> Padic {
        self.int_like(1)
    }

    /// The exact integer `k` at a precision that does not limit arithmetic
    /// with `self`.
    pub fn int_like(&self, k: i64) -> Padic {
        let base = if self.is_exact_zero() { 1 } else { self.rel_prec().max(1) + self.val.abs() };
        let vk = if k == 0 { 0 } else { split_int(&BigUint::from(k.unsigned_abs()), self.p).0 };
        Self::from_i64(k, self.p, base + vk + 2)
    }

    pub fn mul_int(&self, k: i64) -> Padic {
        self * &self.int_like(k)
    }

    pub fn div_int(&self, k: i64) -> Result<Padic> {
        self.try_div(&self.int_like(k))
    }

    pub fn square(&self) -> Padic {
        self * self
    }

    pub fn pow(&self, e: u64) -> Padic {
        if e == 0 {
            return self.one_like();
        }
        let mut base = self.clone();
        let mut acc: Option<Padic> = None;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc.unwrap()
    }

    pub fn powi(&self, e: i64) -> Result<Padic> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            self.pow(e.unsigned_abs()).inv()
        }
    }

    /// `p^k` as a value carried at absolute precision `prec`.
    pub fn p_power(p: u64, k: i64, prec: i64) -> Padic {
        assert!(prec < EXACT / 2, "p^k needs a finite precision");
        if k >= prec {
            return Self::zero(p, prec);
        }
        Padic { p, val: k, prec, unit: BigUint::one() }
    }

    /// Square root with the canonical sign: the unit's first digit lies in
    /// `[1, (p-1)/2]`.
    pub fn sqrt(&self) -> Result<Padic> {
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Err(Error::PrecisionExhausted("square root of an inexact zero".into()));
        }
        if self.val.rem_euclid(2) != 0 {
            return Err(Error::NotSquare(format!("odd valuation {}", self.val)));
        }
        let p = self.p;
        let rel = self.rel_prec();
        let a0 = (&self.unit % p).to_u64().unwrap();
        let r0 = sqrt_mod_prime(a0, p).ok_or_else(|| Error::NotSquare(format!("{a0} is not a square mod {p}")))?;
        let r0 = r0.min(p - r0);
        // Newton lift x <- (x + a/x)/2, doubling digits each round.
        let mut x = BigUint::from(r0);
        let mut k = 1i64;
        let two_inv_of = |m: &BigUint| BigUint::from(2u32).modinv(m).unwrap();
        while k < rel {
            k = (2 * k).min(rel);
            let m = pow_p(p, k);
            let a = &self.unit % &m;
            let xinv = (&x % &m).modinv(&m).unwrap();
            x = ((&x + a * xinv) * two_inv_of(&m)) % &m;
        }
        let x = x % pow_p(p, rel);
        Ok(Padic { p, val: self.val / 2, prec: self.val / 2 + rel, unit: x })
    }

    /// Key for deterministic ordering of values.
    pub fn sort_key(&self) -> (i64, Vec<u64>, i64) {
        (self.val, self.digits(), self.prec)
    }

    /// Orders integral values by residue mod p, then mod p^2, and so on.
    pub fn residue_key(&self) -> (i64, Vec<u64>) {
        if self.is_exact_zero() {
            return (0, Vec::new());
        }
        if self.val < 0 {
            return (self.val, self.digits());
        }
        let lead = self.val.min(self.prec).min(4096) as usize;
        let mut digits = vec![0; lead];
        digits.extend(self.digits());
        (0, digits)
    }
}

/// Square root modulo an odd prime (Tonelli-Shanks); `None` for non-residues.
pub(crate) fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    if powmod(a, (p - 1) / 2) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod(z, (p - 1) / 2) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q);
    let mut t = powmod(a, q);
    let mut r = powmod(a, q.div_ceil(2));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1));
        m = i;
        c = mulmod(b, b);
        t = mulmod(t, c);
        r = mulmod(r, b);
    }
    Some(r)
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::to_text(self))
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::to_text(self))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&Padic> for &Padic {
            type Output = Padic;
            fn $method(self, rhs: &Padic) -> Padic {
                self.$imp(rhs)
            }
        }
        impl $trait<Padic> for Padic {
            type Output = Padic;
            fn $method(self, rhs: Padic) -> Padic {
                (&self).$imp(&rhs)
            }
        }
        impl $trait<&Padic> for Padic {
            type Output = Padic;
            fn $method(self, rhs: &Padic) -> Padic {
                (&self).$imp(rhs)
            }
        }
        impl $trait<Padic> for &Padic {
            type Output = Padic;
            fn $method(self, rhs: Padic) -> Padic {
                self.$imp(&rhs)
            }
        }
    };
}

impl Padic {
    fn sub_impl(&self, other: &Padic) -> Padic {
        self.add_impl(&other.neg_impl())
    }
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.neg_impl()
    }
}

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.neg_impl()
    }
}

/// Checked binary operation: fails when the result carries no information
/// at all (an inexact zero known only modulo `p^k`, `k <= 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(a: &Padic, b: &Padic, op: ArithOp) -> Result<Padic> {
    if a.p != b.p {
        return Err(Error::PrimeMismatch(a.p, b.p));
    }
    let r = match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.try_div(b)?,
    };
    if r.is_zero() && !r.is_exact_zero() && r.prec <= 0 {
        return Err(Error::PrecisionExhausted(format!("result known only modulo p^{}", r.prec)));
    }
    Ok(r)
}

/// `p`-adic valuation of a nonzero integer.
pub fn int_val(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        None
    } else {
        Some(split_int(n.magnitude(), p).0)
    }
}

pub(crate) fn small_val(n: u64, p: u64) -> i64 {
    if n == 0 {
        return EXACT;
    }
    let mut v = 0;
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}
