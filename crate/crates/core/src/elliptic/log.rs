//! The formal group at infinity and its logarithm.
//!
//! With `z = -x/y` and `w = -1/y`, the curve becomes
//! `w = z^3 + a4 z w^2 + a6 w^3`, solved for `w(z)` by fixed-point
//! iteration. The invariant differential `dx / 2y` equals
//! `(1 + O(z)) dz`, and its integral is the logarithm `u(z) = z + O(z^2)`.

use super::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::padic::Padic;
use crate::series::PadicSeries;

#[derive(Debug, Clone)]
pub struct FormalLog {
    p: u64,
    w: PadicSeries,
    log: PadicSeries,
}

/// `floor(log_p(n))` for `n >= 1`.
fn ilog(n: i64, p: u64) -> i64 {
    (n as u64).ilog(p) as i64
}

impl FormalLog {
    /// Series needed for `prec` digits at every point with `val(z) >= 1`.
    pub fn for_curve(e: &WeierstrassCurve) -> Result<Self> {
        let prec = e.prec();
        let mut t = prec + 2;
        while t - ilog(t + 1, e.prime()) < prec {
            t += 1;
        }
        Self::new(e, t)
    }

    pub fn new(e: &WeierstrassCurve, trunc: i64) -> Result<Self> {
        if !e.a4().is_integral() || !e.a6().is_integral() {
            return Err(Error::Domain("the formal logarithm needs an integral model".into()));
        }
        let p = e.prime();
        let prec = e.prec();
        let tw = trunc + 2;
        let z = PadicSeries::var(p, prec, tw);
        let z3 = z.pow(3);
        let mut w = z3.clone();
        // each pass fixes at least two more coefficients
        for _ in 0..tw / 2 + 1 {
            let w2 = &w * &w;
            let next = &(&z3 + &(&z * &w2).scale(e.a4())) + &(&w2 * &w).scale(e.a6());
            let next = PadicSeries::from_coeffs(p, &(0..tw).map(|k| next.coeff(k)).collect::<Vec<_>>(), tw);
            if next == w {
                break;
            }
            w = next;
        }
        let x = w.reciprocal()?.shift(1);
        let half = Padic::rational(-1, 2, p, prec)?;
        let omega = (&x.derive() * &w).scale(&half);
        let omega = PadicSeries::from_coeffs(p, &(0..omega.trunc()).map(|k| omega.coeff(k)).collect::<Vec<_>>(), omega.trunc());
        let log = omega.integrate()?.truncate(trunc);
        if !(&log.coeff(1) - &Padic::one(p, prec)).is_zero() || !log.coeff(0).is_exact_zero() {
            return Err(Error::Invariant("formal logarithm is not z + O(z^2)".into()));
        }
        Ok(FormalLog { p, w, log })
    }

    pub fn series(&self) -> &PadicSeries {
        &self.log
    }

    pub fn w_series(&self) -> &PadicSeries {
        &self.w
    }

    /// `z = -x/y` for a point in the kernel of reduction (`val(x) <= -2`).
    pub fn parameter(&self, pt: &CurvePoint) -> Result<Padic> {
        match pt {
            CurvePoint::Infinity => Ok(Padic::exact_zero(self.p)),
            CurvePoint::Affine { x, y } => {
                if x.is_zero() || x.val() > -2 {
                    return Err(Error::Domain(format!("point with x = {x} is outside the kernel of reduction")));
                }
                let z = (-x).try_div(y)?;
                if z.val() < 1 {
                    return Err(Error::Domain("local parameter is not in pZ_p".into()));
                }
                Ok(z)
            }
        }
    }

    /// The kernel point with parameter `z`, `val(z) >= 1`.
    pub fn point_from_parameter(&self, z: &Padic) -> Result<CurvePoint> {
        if z.is_exact_zero() {
            return Ok(CurvePoint::Infinity);
        }
        let w = self.w.eval(z)?;
        let y = -w.inv()?;
        let x = z.try_div(&w)?;
        Ok(CurvePoint::Affine { x, y })
    }

    /// `u(z(P))`, with the truncated tail folded into the reported precision.
    pub fn log(&self, pt: &CurvePoint) -> Result<Padic> {
        let z = self.parameter(pt)?;
        if z.is_exact_zero() {
            return Ok(z);
        }
        let v = self.log.eval(&z)?;
        let tr = self.log.trunc();
        let tail = tr * z.val() - ilog(tr + 1, self.p);
        Ok(v.with_prec(tail))
    }
}
