//! Torsion scans through division polynomials, and point sampling.

use rand::Rng;
use serde::Serialize;

use super::order::{exact_order, OrderCertificate, OrderResult};
use super::{division_poly, CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::hensel::{poly_roots_in_disk, ScanOptions};
use crate::padic::Padic;

/// Smallest `m <= bound` with `mP` in the kernel of reduction (`val(x) <= -2`).
pub fn multiple_into_kernel(e: &WeierstrassCurve, pt: &CurvePoint, bound: u64) -> Result<(u64, CurvePoint)> {
    let mut q = pt.clone();
    for m in 1..=bound {
        match &q {
            CurvePoint::Infinity => {
                return Err(Error::Domain(format!("{m}P is the identity: the point is torsion and never enters the kernel")));
            }
            CurvePoint::Affine { x, .. } if !x.is_zero() && x.val() <= -2 => return Ok((m, q)),
            _ => {}
        }
        q = e.add(&q, pt)?;
    }
    Err(Error::Domain(format!("no multiple up to {bound} lies in the kernel of reduction")))
}

/// A random point with integral `x`, both signs of `y` equally likely.
pub fn sample_point<R: Rng>(e: &WeierstrassCurve, rng: &mut R) -> Result<CurvePoint> {
    let p = e.prime();
    let prec = e.prec();
    for _ in 0..10_000 {
        let mut n = num_bigint::BigInt::from(0);
        for _ in 0..prec {
            n = n * p + rng.gen_range(0..p);
        }
        let x = Padic::from_bigint(&n, p, prec);
        let r = e.rhs(&x);
        if r.is_zero() || r.val() % 2 != 0 {
            continue;
        }
        let Ok(y) = r.sqrt() else { continue };
        let y = if rng.gen_bool(0.5) { -y } else { y };
        return Ok(CurvePoint::Affine { x, y });
    }
    Err(Error::Domain("no rational point found by sampling".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub order: u64,
    pub x: Padic,
    /// `y` when the point is defined over `Q_p`; otherwise the order is
    /// certified on the quadratic twist by `x^3 + a4 x + a6`.
    pub y: Option<Padic>,
    pub rational: bool,
    pub certificate: OrderCertificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnresolvedClass {
    pub n: u64,
    pub center: Padic,
    pub digits: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionScan {
    pub max_order: u64,
    pub disk_val: i64,
    pub depth: i64,
    pub records: Vec<ScanRecord>,
    pub unresolved: Vec<UnresolvedClass>,
}

/// Certified exact order of the torsion point(s) with abscissa `x`.
fn certify_x(e: &WeierstrassCurve, x: &Padic, max_order: u64) -> Result<Option<ScanRecord>> {
    let r = e.rhs(x);
    let (curve, pt, y, rational) = if r.is_zero() {
        let y = if r.is_exact_zero() { r.clone() } else { Padic::zero(e.prime(), (r.prec() + 1) / 2) };
        (e.clone(), CurvePoint::Affine { x: x.clone(), y: y.clone() }, Some(y), true)
    } else if let Ok(y) = r.sqrt() {
        (e.clone(), CurvePoint::Affine { x: x.clone(), y: y.clone() }, Some(y), true)
    } else {
        let tw = e.twist(&r)?;
        let pt = CurvePoint::Affine { x: &r * x, y: r.square() };
        (tw, pt, None, false)
    };
    match exact_order(&curve, &pt, max_order)? {
        OrderResult::Exact(certificate) => Ok(Some(ScanRecord { order: certificate.order, x: x.clone(), y, rational, certificate })),
        OrderResult::NotTorsionUpTo(_) => Ok(None),
    }
}

/// Torsion abscissae in `p^disk_val Z_p` of order at most `max_order`,
/// found as roots of the division polynomials (and of the cubic for the
/// 2-torsion) and each certified by the group law.
pub fn torsion_scan(e: &WeierstrassCurve, max_order: u64, disk_val: i64, depth: i64) -> Result<TorsionScan> {
    let mut scan = TorsionScan { max_order, disk_val, depth, records: Vec::new(), unresolved: Vec::new() };
    if max_order < 2 {
        return Ok(scan);
    }
    let opts = ScanOptions { depth, refine_cap: 12, target_prec: e.prec() };
    let mut xs: Vec<Padic> = Vec::new();
    let mut push_roots = |n: u64, poly: &crate::poly::Poly, xs: &mut Vec<Padic>| -> Result<()> {
        if poly.degree().unwrap_or(0) == 0 {
            return Ok(());
        }
        let found = poly_roots_in_disk(poly, disk_val, &opts)?;
        for r in found.roots {
            if !xs.iter().any(|x| (x - &r.root).is_zero()) {
                xs.push(r.root);
            }
        }
        scan.unresolved.extend(found.unresolved.into_iter().map(|(center, digits)| UnresolvedClass { n, center, digits }));
        Ok(())
    };
    push_roots(2, &e.rhs_poly(), &mut xs)?;
    for n in 3..=max_order {
        push_roots(n, &division_poly(e, n).x_part, &mut xs)?;
    }
    for x in &xs {
        if let Some(rec) = certify_x(e, x, max_order)? {
            scan.records.push(rec);
        } else {
            return Err(Error::Certification(format!(
                "division-polynomial root x = {x} is not torsion of order <= {max_order}"
            )));
        }
    }
    scan.records.sort_by_key(|a| (a.order, a.x.residue_key()));
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    const P: u64 = 5;

    #[test]
    fn kernel_multiple_of_two_torsion_fails() {
        let e = WeierstrassCurve::from_i64(-1, 0, P, 30).unwrap();
        let t = CurvePoint::Affine { x: Padic::exact_zero(P), y: Padic::exact_zero(P) };
        assert!(multiple_into_kernel(&e, &t, 10).is_err());
    }

    #[test]
    fn random_points_reach_the_kernel() {
        let e = WeierstrassCurve::from_i64(-1, 0, P, 30).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..5 {
            let pt = sample_point(&e, &mut rng).unwrap();
            let (m, q) = multiple_into_kernel(&e, &pt, 40).unwrap();
            assert!(e.contains(&q));
            assert_eq!(8 % m, 0, "m = {m}");
        }
    }

    #[test]
    fn scan_of_x3_minus_x() {
        let e = WeierstrassCurve::from_i64(-1, 0, P, 30).unwrap();
        let scan = torsion_scan(&e, 4, 0, 3).unwrap();
        assert!(scan.unresolved.is_empty());
        let orders: Vec<u64> = scan.records.iter().map(|r| r.order).collect();
        assert_eq!(&orders[..3], &[2, 2, 2]);
        assert!(orders[3..].iter().all(|&o| o == 4));
        assert!(torsion_scan(&e, 1, 0, 3).unwrap().records.is_empty());
    }
}
