//! Exact-order certification by the group law.

use serde::Serialize;

use super::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::padic::Padic;

/// Outcome of testing `aP + bP` against the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityTest {
    /// Both `x_a - x_b` and `y_a + y_b` vanish modulo `p^residual`
    /// (`None` when the vanishing is exact).
    Identity { residual: Option<i64> },
    /// At least one of them has a certified nonzero digit, at valuation `val`.
    /// `certified_digits` is `None` when the difference is exact.
    NotIdentity { val: i64, certified_digits: Option<i64> },
}

/// Decides whether `A + B` is the identity, given `A` and `B` on the curve.
pub fn is_identity_sum(a: &CurvePoint, b: &CurvePoint) -> IdentityTest {
    match (a, b) {
        (CurvePoint::Infinity, CurvePoint::Infinity) => IdentityTest::Identity { residual: None },
        (CurvePoint::Infinity, _) | (_, CurvePoint::Infinity) => {
            // an affine point is never the identity; its x carries no digit of
            // that information, so report the coordinate's own size
            let pt = if a.is_infinity() { b } else { a };
            let x = pt.x().unwrap();
            let certified_digits = if x.is_exact_zero() { None } else { Some(x.rel_prec().max(1)) };
            IdentityTest::NotIdentity { val: x.val().min(0), certified_digits }
        }
        (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
            let dx = x1 - x2;
            let sy = y1 + y2;
            let nonzero: Vec<&Padic> = [&dx, &sy].into_iter().filter(|d| !d.is_zero()).collect();
            if let Some(d) = nonzero.iter().min_by_key(|d| d.val()) {
                return IdentityTest::NotIdentity { val: d.val(), certified_digits: Some(d.rel_prec()) };
            }
            let residual = [&dx, &sy].iter().filter(|d| !d.is_exact_zero()).map(|d| d.prec()).min();
            IdentityTest::Identity { residual }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorCheck {
    /// The prime `l` dividing the order.
    pub prime: u64,
    /// The multiple `n / l` shown to be nonzero.
    pub multiple: u64,
    /// Valuation of the certified nonzero difference.
    pub val: i64,
    /// Significant digits of that difference; `None` when it is exact.
    pub certified_digits: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderCertificate {
    pub order: u64,
    /// Digits to which `nP = O` holds; `None` when it holds exactly.
    pub identity_residual_val: Option<i64>,
    pub divisor_checks: Vec<DivisorCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderResult {
    Exact(OrderCertificate),
    NotTorsionUpTo(u64),
}

impl OrderResult {
    pub fn order(&self) -> Option<u64> {
        match self {
            OrderResult::Exact(c) => Some(c.order),
            OrderResult::NotTorsionUpTo(_) => None,
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least `n <= bound` with `nP = O`. Each `kP` is tested as
/// `ceil(k/2) P + floor(k/2) P`, so only multiples up to `bound / 2` are
/// formed. Every `k < n` must be certified nonzero with at least one digit,
/// and the checks at `n / l` for the primes `l | n` are recorded.
pub fn exact_order(e: &WeierstrassCurve, pt: &CurvePoint, bound: u64) -> Result<OrderResult> {
    if bound == 0 {
        return Err(Error::Domain("order bound must be at least 1".into()));
    }
    if pt.is_infinity() {
        return Ok(OrderResult::Exact(OrderCertificate {
            order: 1,
            identity_residual_val: None,
            divisor_checks: Vec::new(),
        }));
    }
    let half = bound.div_ceil(2) as usize;
    let mut multiples = vec![CurvePoint::Infinity, pt.clone()];
    while multiples.len() <= half {
        let next = e.add(multiples.last().unwrap(), pt)?;
        multiples.push(next);
    }
    let mut tests = Vec::with_capacity(bound as usize + 1);
    tests.push(IdentityTest::Identity { residual: None });
    for k in 1..=bound {
        let (a, b) = (k.div_ceil(2) as usize, (k / 2) as usize);
        let t = is_identity_sum(&multiples[a], &multiples[b]);
        tests.push(t);
        match t {
            IdentityTest::NotIdentity { certified_digits: Some(d), .. } if d < 1 => {
                return Err(Error::PrecisionExhausted(format!("{k}P has no certified digit")));
            }
            IdentityTest::NotIdentity { .. } => continue,
            IdentityTest::Identity { residual } => {
                let mut divisor_checks = Vec::new();
                for l in prime_factors(k) {
                    let m = k / l;
                    let IdentityTest::NotIdentity { val, certified_digits } = tests[m as usize] else {
                        unreachable!("smaller multiples were certified nonzero");
                    };
                    divisor_checks.push(DivisorCheck { prime: l, multiple: m, val, certified_digits });
                }
                return Ok(OrderResult::Exact(OrderCertificate { order: k, identity_residual_val: residual, divisor_checks }));
            }
        }
    }
    Ok(OrderResult::NotTorsionUpTo(bound))
}
