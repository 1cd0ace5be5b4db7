//! Short Weierstrass curves `y^2 = x^3 + a4 x + a6` over `Q_p`.

mod division;
mod log;
mod order;
mod torsion;

pub use division::{division_poly, DivisionPoly};
pub use log::FormalLog;
pub use order::{exact_order, is_identity_sum, DivisorCheck, OrderCertificate, OrderResult};
pub use torsion::{multiple_into_kernel, sample_point, torsion_scan, ScanRecord, TorsionScan, UnresolvedClass};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{check_prime, Padic};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    p: u64,
    prec: i64,
    a4: Padic,
    a6: Padic,
    disc: Padic,
    j_inv: Option<Padic>,
}

/// A fiber the smoothness check rejected, kept as data for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularCurve {
    pub a4: Padic,
    pub a6: Padic,
    /// x-coordinate of the node (`-3 a6 / (2 a4)`), absent for the cusp.
    pub node_x: Option<Padic>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveAt {
    Smooth(WeierstrassCurve),
    Singular(SingularCurve),
}

impl CurveAt {
    pub fn smooth(self) -> Result<WeierstrassCurve> {
        match self {
            CurveAt::Smooth(e) => Ok(e),
            CurveAt::Singular(s) => Err(Error::Singular(format!("y^2 = x^3 + ({})x + ({})", s.a4, s.a6))),
        }
    }
}

fn finite_prec(a: &Padic, b: &Padic) -> Option<i64> {
    [a, b].iter().filter(|c| !c.is_exact_zero()).map(|c| c.prec()).min()
}

impl WeierstrassCurve {
    /// Accepts the curve only if the discriminant has a certified nonzero digit.
    pub fn new(a4: Padic, a6: Padic) -> Result<Self> {
        match Self::classify(a4, a6)? {
            CurveAt::Smooth(e) => Ok(e),
            CurveAt::Singular(s) => Err(Error::Singular(format!(
                "discriminant of y^2 = x^3 + ({})x + ({}) vanishes to working precision",
                s.a4, s.a6
            ))),
        }
    }

    pub fn classify(a4: Padic, a6: Padic) -> Result<CurveAt> {
        if a4.prime() != a6.prime() {
            return Err(Error::PrimeMismatch(a4.prime(), a6.prime()));
        }
        let p = a4.prime();
        check_prime(p)?;
        let prec = finite_prec(&a4, &a6).ok_or_else(|| Error::Singular("y^2 = x^3".into()))?;
        let inner = &a4.pow(3).mul_int(4) + &a6.square().mul_int(27);
        let disc = inner.mul_int(-16);
        if disc.is_zero() {
            let node_x = if a4.is_zero() { None } else { Some(a6.mul_int(-3).try_div(&a4.mul_int(2))?) };
            return Ok(CurveAt::Singular(SingularCurve { a4, a6, node_x }));
        }
        let c = a4.pow(3).mul_int(6912);
        let j_inv = if c.is_zero() { None } else { Some(inner.try_div(&c)?) };
        Ok(CurveAt::Smooth(WeierstrassCurve { p, prec, a4, a6, disc, j_inv }))
    }

    pub fn from_i64(a4: i64, a6: i64, p: u64, prec: i64) -> Result<Self> {
        Self::new(Padic::from_i64(a4, p, prec), Padic::from_i64(a6, p, prec))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Working precision: the smallest absolute precision of the coefficients.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn a4(&self) -> &Padic {
        &self.a4
    }

    pub fn a6(&self) -> &Padic {
        &self.a6
    }

    pub fn disc(&self) -> &Padic {
        &self.disc
    }

    /// `1/j = (4 a4^3 + 27 a6^2) / (6912 a4^3)`; `None` when `j = 0`.
    pub fn j_inv(&self) -> Option<&Padic> {
        self.j_inv.as_ref()
    }

    pub fn has_good_reduction(&self) -> bool {
        self.a4.is_integral() && self.a6.is_integral() && self.disc.val() == 0
    }

    /// `x^3 + a4 x + a6`.
    pub fn rhs(&self, x: &Padic) -> Padic {
        &(&x.pow(3) + &(&self.a4 * x)) + &self.a6
    }

    pub fn rhs_poly(&self) -> Poly {
        let one = Padic::one(self.p, self.prec);
        Poly::new(self.p, vec![self.a6.clone(), self.a4.clone(), Padic::exact_zero(self.p), one])
    }

    /// `y^2 - x^3 - a4 x - a6`; exact zero at infinity.
    pub fn residual(&self, pt: &CurvePoint) -> Padic {
        match pt {
            CurvePoint::Infinity => Padic::exact_zero(self.p),
            CurvePoint::Affine { x, y } => &y.square() - &self.rhs(x),
        }
    }

    pub fn contains(&self, pt: &CurvePoint) -> bool {
        self.residual(pt).is_zero()
    }

    pub fn point(&self, x: Padic, y: Padic) -> Result<CurvePoint> {
        let pt = CurvePoint::Affine { x, y };
        let r = self.residual(&pt);
        if !r.is_zero() {
            return Err(Error::Domain(format!("point is off the curve: residual {r}")));
        }
        Ok(pt)
    }

    /// The point with the given `x`, choosing the canonical square root.
    pub fn lift_x(&self, x: Padic) -> Result<CurvePoint> {
        let r = self.rhs(&x);
        let y = if r.is_exact_zero() {
            r
        } else if r.is_zero() {
            Padic::zero(self.p, (r.prec() + 1) / 2)
        } else {
            r.sqrt()?
        };
        Ok(CurvePoint::Affine { x, y })
    }

    pub fn neg(&self, pt: &CurvePoint) -> CurvePoint {
        match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: -y },
        }
    }

    pub fn double(&self, pt: &CurvePoint) -> Result<CurvePoint> {
        let CurvePoint::Affine { x, y } = pt else {
            return Ok(CurvePoint::Infinity);
        };
        if y.is_zero() {
            return Ok(CurvePoint::Infinity);
        }
        let num = &x.square().mul_int(3) + &self.a4;
        let lambda = num.try_div(&y.mul_int(2))?;
        let x3 = &lambda.square() - &x.mul_int(2);
        let y3 = &(&lambda * &(x - &x3)) - y;
        Ok(CurvePoint::Affine { x: x3, y: y3 })
    }

    /// Chord-and-tangent addition. When `x1` and `x2` agree to working
    /// precision the sum is decided by `y1 + y2` (identity) or `y1 - y2`
    /// (doubling); if neither vanishes the inputs are too imprecise.
    pub fn add(&self, a: &CurvePoint, b: &CurvePoint) -> Result<CurvePoint> {
        let (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) = (a, b) else {
            return Ok(if a.is_infinity() { b.clone() } else { a.clone() });
        };
        let dx = x2 - x1;
        if dx.is_zero() {
            if (y1 + y2).is_zero() {
                return Ok(CurvePoint::Infinity);
            }
            if (y2 - y1).is_zero() {
                return self.double(a);
            }
            return Err(Error::PrecisionExhausted(
                "x-coordinates agree to working precision but the points are neither equal nor opposite".into(),
            ));
        }
        let lambda = (y2 - y1).try_div(&dx)?;
        let x3 = &(&lambda.square() - x1) - x2;
        let y3 = &(&lambda * &(x1 - &x3)) - y1;
        Ok(CurvePoint::Affine { x: x3, y: y3 })
    }

    pub fn sub(&self, a: &CurvePoint, b: &CurvePoint) -> Result<CurvePoint> {
        self.add(a, &self.neg(b))
    }

    /// `k P` by double-and-add.
    pub fn smul(&self, k: i64, pt: &CurvePoint) -> Result<CurvePoint> {
        let base = if k < 0 { self.neg(pt) } else { pt.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut run = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &run)?;
            }
            k >>= 1;
            if k > 0 {
                run = self.double(&run)?;
            }
        }
        Ok(acc)
    }

    /// Quadratic twist `Y^2 = X^3 + d^2 a4 X + d^3 a6`, isomorphic to this
    /// curve over `Q_p(sqrt d)` via `(x, y) -> (d x, d^2 y)`.
    pub fn twist(&self, d: &Padic) -> Result<WeierstrassCurve> {
        WeierstrassCurve::new(&d.square() * &self.a4, &d.pow(3) * &self.a6)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("curve serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Padic, y: Padic },
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&Padic> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&Padic> {
        match self {
            CurvePoint::Affine { y, .. } => Some(y),
            CurvePoint::Infinity => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("point serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveRepr {
    a4: Padic,
    a6: Padic,
    p: u64,
    prec: i64,
}

impl Serialize for WeierstrassCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CurveRepr { a4: self.a4.clone(), a6: self.a6.clone(), p: self.p, prec: self.prec }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeierstrassCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CurveRepr::deserialize(d)?;
        if r.a4.prime() != r.p || r.a6.prime() != r.p {
            return Err(D::Error::custom("coefficient prime differs from \"p\""));
        }
        let e = WeierstrassCurve::new(r.a4, r.a6).map_err(D::Error::custom)?;
        if r.prec != e.prec {
            return Err(D::Error::custom(format!("declared prec {} but coefficients carry {}", r.prec, e.prec)));
        }
        Ok(e)
    }
}

#[derive(Serialize, Deserialize)]
enum InfTag {
    #[serde(rename = "inf")]
    Inf,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Inf(InfTag),
    Affine {
        x: Padic,
        y: Padic,
    },
}

impl Serialize for CurvePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CurvePoint::Infinity => PointRepr::Inf(InfTag::Inf).serialize(s),
            CurvePoint::Affine { x, y } => PointRepr::Affine { x: x.clone(), y: y.clone() }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        Ok(match PointRepr::deserialize(d)? {
            PointRepr::Inf(_) => CurvePoint::Infinity,
            PointRepr::Affine { x, y } => {
                if x.prime() != y.prime() {
                    return Err(D::Error::custom("coordinates over different primes"));
                }
                CurvePoint::Affine { x, y }
            }
        })
    }
}
